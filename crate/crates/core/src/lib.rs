//! Exact degreewise homology for weighted-homogeneous affine varieties.
//!
//! Everything is computed over the rationals, one weight at a time: graded
//! pieces of presented modules are finite-dimensional, so ranks, kernels and
//! homology are exact linear algebra.
//!
//! ```
//! use spencerlab::complexes::{build_de_rham, homology_table};
//! use spencerlab::euler::{acyclicity_certificate, euler_derivation};
//! use spencerlab::ring::{parse_polynomial, AffineScene, Ideal, WeightedRing};
//!
//! # fn main() -> spencerlab::Result<()> {
//! let ring = WeightedRing::new(vec!["x", "y"], vec![2, 3])?;
//! let f = parse_polynomial("x^3 - y^2", &ring)?;
//! let cusp = AffineScene::new(ring.clone(), Ideal::new(&ring, vec![f])?)?;
//!
//! let forms = build_de_rham(&cusp)?;
//! let table = homology_table(&forms, 12)?;
//! assert_eq!(table.get(0, 0), 1);
//!
//! let xi = euler_derivation(&cusp)?;
//! assert!(acyclicity_certificate(&forms, &xi, 12)?.is_valid());
//! # Ok(())
//! # }
//! ```

pub mod cli;
pub mod completion;
pub mod complexes;
pub mod dmod;
pub mod error;
pub mod euler;
pub mod groebner;
pub mod invariants;
pub mod linalg;
pub mod ring;

pub use error::{Error, Result};

/// Exact rational number with arbitrary-precision numerator and denominator.
pub type Rational = num_rational::BigRational;
