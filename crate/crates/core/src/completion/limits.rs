use std::collections::BTreeMap;
use std::fmt;

use crate::error::{Error, Result};
use crate::linalg::LinearMap;

/// Finite inverse system `V_1 <- V_2 <- ... <- V_R` of finite-dimensional
/// spaces; `maps[k]` goes from stage `k + 2` to stage `k + 1`.
#[derive(Clone, Debug)]
pub struct VectorTower {
    dims: Vec<usize>,
    maps: Vec<LinearMap>,
}

impl VectorTower {
    pub fn new(dims: Vec<usize>, maps: Vec<LinearMap>) -> Result<Self> {
        if dims.len() != maps.len() + 1 && !(dims.is_empty() && maps.is_empty()) {
            return Err(Error::Invalid(format!("{} stages need {} maps, got {}", dims.len(), dims.len().saturating_sub(1), maps.len())));
        }
        for (k, m) in maps.iter().enumerate() {
            if m.source_dim() != dims[k + 1] || m.target_dim() != dims[k] {
                return Err(Error::Invalid(format!("transition {} has the wrong shape", k + 1)));
            }
        }
        Ok(VectorTower { dims, maps })
    }

    pub fn len(&self) -> usize {
        self.dims.len()
    }

    pub fn is_empty(&self) -> bool {
        self.dims.is_empty()
    }

    /// Dimension of stage `r` (1-based).
    pub fn dim(&self, r: usize) -> usize {
        self.dims[r - 1]
    }

    pub fn dims(&self) -> &[usize] {
        &self.dims
    }

    /// Map from stage `r + 1` to stage `r`.
    pub fn map(&self, r: usize) -> &LinearMap {
        &self.maps[r - 1]
    }

    /// Composite from stage `s` down to stage `r <= s`.
    pub fn composite(&self, s: usize, r: usize) -> LinearMap {
        let mut acc = LinearMap::identity(vec![String::new(); self.dims[s - 1]]);
        for k in (r..s).rev() {
            acc = self.map(k).compose(&acc);
        }
        acc
    }
}

/// How a limit was established.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Stabilization {
    /// Transitions are isomorphisms from some stage on.
    Isomorphic,
    /// Images of later stages stop shrinking and have constant dimension.
    MittagLeffler,
    NotStabilized,
}

/// `lim` and `lim^1` of one tower, when the data determines them.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct LimitEntry {
    pub lim: Option<usize>,
    pub lim1: Option<usize>,
    pub stable_from: Option<usize>,
    pub kind: Stabilization,
}

impl LimitEntry {
    pub fn is_stabilized(&self) -> bool {
        self.kind != Stabilization::NotStabilized
    }
}

/// Limit of a finite tower, judged from the last stages.
///
/// If the transitions are isomorphisms from stage `r0` on and at least three
/// stages agree (`R - r0 >= 2`), the limit is the common value. Otherwise,
/// if the images `im(V_R -> V_r)` and `im(V_(R-1) -> V_r)` coincide for the
/// tail of stages and their dimension is constant over at least two stages,
/// the limit is that dimension. `lim^1` vanishes in both cases since the
/// (stable-image) tower is eventually surjective. Anything else is reported
/// as not stabilized.
pub fn vector_tower_limit(t: &VectorTower) -> LimitEntry {
    let big_r = t.len();
    let unknown = LimitEntry { lim: None, lim1: None, stable_from: None, kind: Stabilization::NotStabilized };
    if big_r == 0 {
        return unknown;
    }
    let mut r0 = big_r;
    while r0 > 1 {
        let m = t.map(r0 - 1);
        let iso = m.source_dim() == m.target_dim() && m.rank() == m.source_dim();
        if !iso {
            break;
        }
        r0 -= 1;
    }
    if big_r - r0 >= 2 {
        return LimitEntry { lim: Some(t.dim(big_r)), lim1: Some(0), stable_from: Some(r0), kind: Stabilization::Isomorphic };
    }
    if big_r < 3 {
        return unknown;
    }
    // stable image dimensions for r <= R - 2, scanning down from the top
    let mut stable = Vec::new();
    for r in (1..=big_r - 2).rev() {
        let last = t.composite(big_r, r).rank();
        let previous = t.composite(big_r - 1, r).rank();
        if last != previous {
            break;
        }
        stable.push((r, last));
    }
    let Some(&(_, top)) = stable.first() else { return unknown };
    let run: Vec<_> = stable.iter().take_while(|(_, s)| *s == top).collect();
    if run.len() < 2 {
        return unknown;
    }
    let from = run.last().map(|(r, _)| *r);
    LimitEntry { lim: Some(top), lim1: Some(0), stable_from: from, kind: Stabilization::MittagLeffler }
}

/// Limits per `(index, weight)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LimitReport {
    pub(crate) indices: Vec<i64>,
    pub(crate) min_weight: i64,
    pub(crate) bound: i64,
    pub(crate) entries: BTreeMap<(i64, i64), LimitEntry>,
}

impl LimitReport {
    pub fn indices(&self) -> &[i64] {
        &self.indices
    }

    pub fn weights(&self) -> std::ops::RangeInclusive<i64> {
        self.min_weight..=self.bound
    }

    pub fn entry(&self, index: i64, weight: i64) -> Option<&LimitEntry> {
        self.entries.get(&(index, weight))
    }

    pub fn entries(&self) -> impl Iterator<Item = ((i64, i64), &LimitEntry)> {
        self.entries.iter().map(|(k, v)| (*k, v))
    }

    /// `lim` at a stabilized entry, `None` otherwise.
    pub fn lim(&self, index: i64, weight: i64) -> Option<usize> {
        self.entry(index, weight).and_then(|e| e.lim)
    }

    pub fn all_stabilized(&self) -> bool {
        self.entries.values().all(LimitEntry::is_stabilized)
    }

    pub fn unstabilized(&self) -> Vec<(i64, i64)> {
        self.entries.iter().filter(|(_, e)| !e.is_stabilized()).map(|(k, _)| *k).collect()
    }

    /// Nonzero limits.
    pub fn nonzero_limits(&self) -> Vec<((i64, i64), usize)> {
        self.entries.iter().filter_map(|(k, e)| e.lim.filter(|&l| l > 0).map(|l| (*k, l))).collect()
    }

    pub fn to_json(&self) -> serde_json::Value {
        let mut lim = serde_json::Map::new();
        let mut lim1 = serde_json::Map::new();
        let mut stable_from = serde_json::Map::new();
        for &i in &self.indices {
            let mut a = serde_json::Map::new();
            let mut b = serde_json::Map::new();
            let mut c = serde_json::Map::new();
            for ((j, d), e) in &self.entries {
                if *j != i {
                    continue;
                }
                if let Some(l) = e.lim.filter(|&l| l > 0) {
                    a.insert(d.to_string(), l.into());
                }
                if let Some(l) = e.lim1.filter(|&l| l > 0) {
                    b.insert(d.to_string(), l.into());
                }
                if let Some(r) = e.stable_from {
                    c.insert(d.to_string(), r.into());
                }
            }
            lim.insert(i.to_string(), a.into());
            lim1.insert(i.to_string(), b.into());
            stable_from.insert(i.to_string(), c.into());
        }
        let unstabilized: Vec<serde_json::Value> =
            self.unstabilized().into_iter().map(|(i, d)| serde_json::json!([i, d])).collect();
        serde_json::json!({
            "lim": lim,
            "lim1": lim1,
            "stable_from": stable_from,
            "unstabilized": unstabilized,
        })
    }
}

impl fmt::Display for LimitReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for &i in &self.indices {
            let row: Vec<String> = self
                .entries
                .iter()
                .filter(|((j, _), _)| *j == i)
                .filter_map(|((_, d), e)| match e.lim {
                    Some(0) => None,
                    Some(l) => Some(format!("{d}: {l}")),
                    None => Some(format!("{d}: ?")),
                })
                .collect();
            writeln!(f, "lim {i}  {{{}}}", row.join(", "))?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::rational;

    fn labels(n: usize) -> Vec<String> {
        (0..n).map(|i| i.to_string()).collect()
    }

    fn scalar_tower(dims: &[usize], scalars: &[i64]) -> VectorTower {
        let maps = scalars
            .iter()
            .enumerate()
            .map(|(k, &c)| {
                let (src, dst) = (dims[k + 1], dims[k]);
                let mut m = LinearMap::zero(labels(src), labels(dst));
                if src == dst && c != 0 {
                    m = LinearMap::identity(labels(src)).scale(&rational(c));
                }
                m
            })
            .collect();
        VectorTower::new(dims.to_vec(), maps).unwrap()
    }

    #[test]
    fn constant_tower() {
        let e = vector_tower_limit(&scalar_tower(&[2, 2, 2, 2], &[1, 1, 1]));
        assert_eq!((e.lim, e.lim1, e.kind), (Some(2), Some(0), Stabilization::Isomorphic));
        assert_eq!(e.stable_from, Some(1));
    }

    #[test]
    fn zero_transitions() {
        let e = vector_tower_limit(&scalar_tower(&[1, 1, 1, 1, 1], &[0, 0, 0, 0]));
        assert_eq!((e.lim, e.lim1, e.kind), (Some(0), Some(0), Stabilization::MittagLeffler));
    }

    #[test]
    fn too_short_to_judge() {
        let e = vector_tower_limit(&scalar_tower(&[1, 1], &[0]));
        assert!(!e.is_stabilized());
        assert!(!vector_tower_limit(&scalar_tower(&[1, 2], &[0])).is_stabilized());
    }
}
