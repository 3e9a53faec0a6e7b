use super::limits::LimitReport;
use super::tower::{completed_complex, tower_limit};
use crate::complexes::build_de_rham;
use crate::dmod::filtered_spencer_on;
use crate::error::{Error, Result};
use crate::groebner::{buchberger, MonomialOrder};
use crate::ring::{AffineScene, Ideal, Polynomial};

/// Completed homology of two embeddings of the same variety, compared entry
/// by entry.
#[derive(Clone, Debug)]
pub struct IndependenceReport {
    /// `(complex name, limits in the first ambient, limits in the second)`.
    pub comparisons: Vec<(String, LimitReport, LimitReport)>,
    /// `(complex, index, weight, first, second)` for differing stabilized entries.
    pub mismatches: Vec<(String, i64, i64, usize, usize)>,
    /// `(complex, index, weight)` where either side did not stabilize.
    pub unstabilized: Vec<(String, i64, i64)>,
}

impl IndependenceReport {
    pub fn is_equal(&self) -> bool {
        self.mismatches.is_empty() && self.unstabilized.is_empty()
    }

    pub fn to_json(&self) -> serde_json::Value {
        let mut complexes = serde_json::Map::new();
        for (name, a, b) in &self.comparisons {
            complexes.insert(name.clone(), serde_json::json!({"first": a.to_json(), "second": b.to_json()}));
        }
        serde_json::json!({
            "equal": self.is_equal(),
            "complexes": complexes,
            "mismatches": self.mismatches.iter().map(|(c, i, d, a, b)| serde_json::json!([c, i, d, a, b])).collect::<Vec<_>>(),
            "unstabilized": self.unstabilized.iter().map(|(c, i, d)| serde_json::json!([c, i, d])).collect::<Vec<_>>(),
        })
    }
}

/// Check that `second` is `first` re-embedded: the first ring's variables
/// come first with the same weights, and the second ideal is the first ideal
/// plus the fresh variables.
fn check_extension(first: &AffineScene, second: &AffineScene) -> Result<()> {
    let (r1, r2) = (first.ring(), second.ring());
    let n = r1.nvars();
    if r2.nvars() < n || r2.names()[..n] != r1.names()[..] || r2.weights()[..n] != r1.weights()[..] {
        return Err(Error::Invalid("the second scene must list the first scene's variables first, with the same weights".into()));
    }
    let map: Vec<usize> = (0..n).collect();
    let mut expected: Vec<Polynomial> = first.ideal().generators().iter().map(|g| g.rename_into(r2, &map)).collect();
    expected.extend((n..r2.nvars()).map(|j| Polynomial::var(r2, j)));
    let expected = Ideal::new(r2, expected)?;
    let a = buchberger(&expected, MonomialOrder::default())?;
    let b = buchberger(second.ideal(), MonomialOrder::default())?;
    if a.generators() != b.generators() {
        return Err(Error::Invalid(
            "the second ideal must be the first ideal plus the fresh variables".into(),
        ));
    }
    Ok(())
}

fn compare(name: &str, a: &LimitReport, b: &LimitReport, report: &mut IndependenceReport) {
    for &i in a.indices().iter().chain(b.indices()) {
        for d in a.weights().chain(b.weights()) {
            let (ea, eb) = (a.entry(i, d), b.entry(i, d));
            let stable = |e: Option<&super::limits::LimitEntry>| e.map_or(Some(0), |e| e.lim);
            match (stable(ea), stable(eb)) {
                (Some(x), Some(y)) if x != y => report.mismatches.push((name.to_string(), i, d, x, y)),
                (Some(_), Some(_)) => {}
                _ => report.unstabilized.push((name.to_string(), i, d)),
            }
        }
    }
    report.mismatches.sort();
    report.mismatches.dedup();
    report.unstabilized.sort();
    report.unstabilized.dedup();
}

/// Completed de Rham and completed filtered Spencer (order 2) homology of
/// each ambient space along its ideal, compared after stabilization.
pub fn embedding_independence(
    first: &AffineScene,
    second: &AffineScene,
    stages: usize,
    bound: i64,
) -> Result<IndependenceReport> {
    check_extension(first, second)?;
    let mut report = IndependenceReport { comparisons: Vec::new(), mismatches: Vec::new(), unstabilized: Vec::new() };
    let limits = |scene: &AffineScene, which: &str| -> Result<LimitReport> {
        let ambient = AffineScene::affine_space(scene.ring().clone());
        let c = match which {
            "de Rham" => build_de_rham(&ambient)?,
            _ => filtered_spencer_on(&ambient, 2)?,
        };
        tower_limit(&completed_complex(&c, scene.ideal(), stages)?, bound)
    };
    for which in ["de Rham", "filtered Spencer"] {
        let a = limits(first, which)?;
        let b = limits(second, which)?;
        compare(which, &a, &b, &mut report);
        report.comparisons.push((which.to_string(), a, b));
    }
    Ok(report)
}
