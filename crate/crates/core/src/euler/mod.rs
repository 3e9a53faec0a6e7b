//! Vector fields, the Euler field of a weighted cone, and the homotopy built
//! from the Cartan identity.

mod derivation;
mod homotopy;

pub use derivation::Derivation;
pub use homotopy::{
    acyclicity_certificate, acyclicity_certificate_for, cartan_check, contraction_pairing, euler_derivation,
    interior_product, lie_derivative, AcyclicityCertificate, CartanReport, CertifiedPiece, PairingReport,
};
