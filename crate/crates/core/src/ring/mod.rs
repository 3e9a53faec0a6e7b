//! Exact rational polynomial arithmetic on weighted rings.

mod graded;
mod monomial;
mod parse;
mod polynomial;
mod scene;
mod weighted;

pub use graded::{graded_component_basis, in_ideal_degreewise, GradedComponent};
pub use monomial::{monomials_of_weight, Monomial};
pub use parse::parse_polynomial;
pub use polynomial::{Polynomial, WeightedDegree};
pub use scene::{AffineScene, Ideal};
pub use weighted::WeightedRing;

