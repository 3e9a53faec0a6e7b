//! Differential operators on affine space: normal-ordered composition, the
//! filtered Spencer resolution, Kashiwara quotients and pushforward to a point.

mod kashiwara;
mod spencer;
mod weyl;

pub use kashiwara::{kashiwara_quotient, KashiwaraQuotient, TruncatedDiffOps};
pub use spencer::{filtered_spencer, filtered_spencer_on, pushforward_point};
pub use weyl::{augmentation, DiffOperator};
