//! Singularity invariants: the Jacobian criterion, Milnor and Tjurina
//! numbers, and the degree-zero Spencer homology `O_Y / alpha(T_Y)`.

use std::collections::BTreeMap;

use crate::complexes::exterior::subsets;
use crate::error::{Error, Result};
use crate::groebner::{buchberger, quotient_dimension, MonomialOrder, QuotientDimension};
use crate::linalg::derivation_module_piece;
use crate::ring::{graded_component_basis, AffineScene, Ideal, Polynomial};

/// Result of the Jacobian criterion.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SmoothnessReport {
    pub smooth: bool,
    /// Reduced Gröbner basis of the singular-locus ideal when singular.
    pub witness: Vec<Polynomial>,
}

impl SmoothnessReport {
    pub fn to_json(&self) -> serde_json::Value {
        let mut out = serde_json::json!({"smooth": self.smooth});
        if !self.smooth {
            out["witness"] = self.witness.iter().map(|p| p.to_string()).collect::<Vec<_>>().into();
        }
        out
    }
}

fn determinant(m: &[Vec<Polynomial>]) -> Polynomial {
    if m.len() == 1 {
        return m[0][0].clone();
    }
    let ring = m[0][0].ring();
    let mut total = Polynomial::zero(ring);
    for (col, entry) in m[0].iter().enumerate() {
        if entry.is_zero() {
            continue;
        }
        let minor: Vec<Vec<Polynomial>> = m[1..]
            .iter()
            .map(|row| row.iter().enumerate().filter(|(c, _)| *c != col).map(|(_, p)| p.clone()).collect())
            .collect();
        let term = entry.mul(&determinant(&minor));
        total = if col % 2 == 0 { total.add(&term) } else { total.sub(&term) };
    }
    total
}

/// Smooth iff the generators together with the maximal minors of the
/// Jacobian matrix generate the unit ideal. The presentation is taken as a
/// complete intersection: `c` generators give `c x c` minors.
pub fn jacobian_smoothness(scene: &AffineScene) -> Result<SmoothnessReport> {
    let ring = scene.ring();
    let gens = scene.ideal().generators();
    let n = ring.nvars();
    if gens.is_empty() {
        return Ok(SmoothnessReport { smooth: true, witness: Vec::new() });
    }
    if gens.len() > n {
        return Err(Error::Unsupported(format!(
            "{} generators in {n} variables is not a complete-intersection presentation",
            gens.len()
        )));
    }
    let jacobian: Vec<Vec<Polynomial>> =
        gens.iter().map(|g| (0..n).map(|j| g.partial_derivative(j)).collect::<Result<Vec<_>>>()).collect::<Result<_>>()?;
    let c = gens.len();
    let mut locus = gens.to_vec();
    for cols in subsets(n, c) {
        let minor: Vec<Vec<Polynomial>> = jacobian.iter().map(|row| cols.iter().map(|&j| row[j].clone()).collect()).collect();
        locus.push(determinant(&minor));
    }
    let gb = buchberger(&Ideal::new(ring, locus)?, MonomialOrder::default())?;
    if gb.is_unit() {
        Ok(SmoothnessReport { smooth: true, witness: Vec::new() })
    } else {
        let mut witness = gb.generators().to_vec();
        witness.sort_by_key(|p| p.to_string());
        Ok(SmoothnessReport { smooth: false, witness })
    }
}

/// Milnor and Tjurina numbers of a hypersurface.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MilnorTjurina {
    pub mu: QuotientDimension,
    pub tau: QuotientDimension,
    names: Vec<String>,
}

impl MilnorTjurina {
    pub fn to_json(&self) -> serde_json::Value {
        let number = |q: &QuotientDimension| match q.dim() {
            Some(d) => serde_json::Value::from(d),
            None => serde_json::Value::from("infinite"),
        };
        let basis: Vec<String> = match &self.mu {
            QuotientDimension::Finite { basis, .. } => {
                basis.iter().map(|m| m.display_with(&self.names).to_string()).collect()
            }
            QuotientDimension::Infinite => Vec::new(),
        };
        serde_json::json!({"mu": number(&self.mu), "tau": number(&self.tau), "basis": basis})
    }
}

/// `mu = dim O / (df)`, `tau = dim O / (f, df)`; for a weighted-homogeneous
/// `f` the Euler relation puts `f` in the Jacobian ideal, so the two agree
/// and this is asserted.
pub fn milnor_tjurina(f: &Polynomial) -> Result<MilnorTjurina> {
    let ring = f.ring();
    f.homogeneous_degree()?;
    let partials = (0..ring.nvars()).map(|j| f.partial_derivative(j)).collect::<Result<Vec<_>>>()?;
    let mu = quotient_dimension(&Ideal::new(ring, partials.clone())?)?;
    let mut with_f = partials;
    with_f.push(f.clone());
    let tau = quotient_dimension(&Ideal::new(ring, with_f)?)?;
    if mu.dim() != tau.dim() {
        return Err(Error::InvariantViolation(format!(
            "Milnor and Tjurina numbers differ for the weighted-homogeneous {f}"
        )));
    }
    Ok(MilnorTjurina { mu, tau, names: ring.names().to_vec() })
}

/// Graded dimensions of `O_Y / alpha(T_Y)`, where `alpha(T_Y)` is the ideal
/// generated by the values of derivations on the coordinate functions.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SpencerH0 {
    pub bound: i64,
    pub alpha_generators: Vec<Polynomial>,
    pub table: BTreeMap<i64, usize>,
    /// For hypersurfaces: dimensions of `O_Y / (image of the partials)`.
    pub jacobian_table: Option<BTreeMap<i64, usize>>,
}

impl SpencerH0 {
    /// Whether the two quotients agree (hypersurfaces only).
    pub fn matches_jacobian(&self) -> Option<bool> {
        self.jacobian_table.as_ref().map(|j| j == &self.table)
    }

    pub fn to_json(&self) -> serde_json::Value {
        let nonzero = |t: &BTreeMap<i64, usize>| -> serde_json::Map<String, serde_json::Value> {
            t.iter().filter(|(_, v)| **v > 0).map(|(d, v)| (d.to_string(), (*v).into())).collect()
        };
        let mut out = serde_json::json!({
            "table": nonzero(&self.table),
            "alpha": self.alpha_generators.iter().map(|p| p.to_string()).collect::<Vec<_>>(),
            "alpha_definition": "values of derivations on coordinate functions",
        });
        if let Some(j) = &self.jacobian_table {
            out["jacobian_table"] = nonzero(j).into();
            out["matches_jacobian"] = self.matches_jacobian().into();
        }
        out
    }
}

pub fn spencer_h0(scene: &AffineScene, bound: i64) -> Result<SpencerH0> {
    let ring = scene.ring();
    let max_w = ring.max_weight().unwrap_or(0);
    let min_w = ring.min_weight().unwrap_or(0);
    let mut alpha: Vec<Polynomial> = Vec::new();
    for e in -max_w..=bound - min_w {
        for xi in derivation_module_piece(scene, e)?.basis() {
            for c in xi.coefficients() {
                if !c.is_zero() && !alpha.contains(c) {
                    alpha.push(c.clone());
                }
            }
        }
    }
    let table = quotient_table(scene, &alpha, bound)?;
    let jacobian_table = match scene.ideal().generators() {
        [f] => {
            let partials = (0..ring.nvars()).map(|j| f.partial_derivative(j)).collect::<Result<Vec<_>>>()?;
            Some(quotient_table(scene, &partials, bound)?)
        }
        _ => None,
    };
    Ok(SpencerH0 { bound, alpha_generators: alpha, table, jacobian_table })
}

fn quotient_table(scene: &AffineScene, extra: &[Polynomial], bound: i64) -> Result<BTreeMap<i64, usize>> {
    let ideal = scene.ideal().sum(&Ideal::new(scene.ring(), extra.to_vec())?)?;
    let quotient = scene.with_ideal(ideal)?;
    Ok((0..=bound).map(|d| (d, graded_component_basis(&quotient, d).dim())).collect())
}
