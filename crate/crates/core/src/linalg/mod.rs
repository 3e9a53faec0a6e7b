//! Exact linear algebra on weighted pieces of presented modules.

mod derivations;
mod matrix;
mod presented;

pub use derivations::{derivation_module_piece, DerivationPiece};
pub use matrix::{is_zero_vector, rank_kernel_image, Coordinates, LinearMap, RankKernelImage, Rref, Vector};
pub use presented::{FreeElement, Generator, GradedPiece, Label, PresentedModule, Relation, MAX_WEIGHT};
pub(crate) use matrix::rational;
