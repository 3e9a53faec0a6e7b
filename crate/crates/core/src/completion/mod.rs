//! Adic towers, completed complexes, derived completion through Koszul
//! towers, and degreewise `lim` / `lim^1`.

mod derived;
mod independence;
mod limits;
mod tower;

pub use derived::{completed_koszul_h0, derived_completion, koszul_power_tower, CompletedKoszulReport, DerivedCompletion};
pub use independence::{embedding_independence, IndependenceReport};
pub use limits::{vector_tower_limit, LimitEntry, LimitReport, Stabilization, VectorTower};
pub use tower::{adic_tower, completed_complex, rebuild_with_ideal, tower_limit, Tower};
