use std::collections::{BTreeMap, HashMap};
use std::sync::Arc;

use super::weyl::{augmentation, derivative_multi_indices, DiffOperator};
use crate::complexes::exterior::{remove_at, subsets, wedge_front, wedge_label};
use crate::complexes::{build_spencer_of_module, homology_table, Direction, GradedComplex, HomologyTable, ModuleKind, Recipe};
use crate::error::{Error, Result};
use crate::euler::Derivation;
use crate::linalg::{rational, FreeElement, Generator, Label, PresentedModule};
use crate::ring::{AffineScene, Monomial, WeightedRing};

struct Layout {
    derivatives: Vec<Monomial>,
    sets: Vec<Vec<usize>>,
    index: HashMap<(Monomial, Vec<usize>), usize>,
}

/// Augmented filtered Spencer complex on `A^n` with unit weights.
pub fn filtered_spencer(n: usize, p: u32) -> Result<GradedComplex> {
    if n == 0 {
        return Err(Error::Invalid("the ambient dimension must be positive".into()));
    }
    filtered_spencer_on(&AffineScene::affine_space(WeightedRing::affine(n)), p)
}

/// Augmented filtered Spencer complex
/// `F^(p-k)D (x) ^k T -> ... -> F^p D -> O`, term `k` at index `k` and the
/// augmentation at index `-1`, with differential
/// `P (x) xi_S -> sum_t (-1)^t P xi_t (x) xi_(S-t) + bracket terms`.
/// Over a scene with a nonzero ideal every term is reduced modulo the ideal
/// acting on the left, which the differential respects.
pub fn filtered_spencer_on(scene: &AffineScene, p: u32) -> Result<GradedComplex> {
    if p < 1 {
        return Err(Error::Invalid(format!("operator order bound must be at least 1, got {p}")));
    }
    let ring = scene.ring().clone();
    let n = ring.nvars();
    let weights = ring.weights().to_vec();
    let dnames: Vec<String> = ring.names().to_vec();
    let top = n.min(p as usize);
    let mut terms = BTreeMap::new();
    let mut layouts = Vec::new();
    for k in 0..=top {
        let derivatives = derivative_multi_indices(n, p - k as u32);
        let sets = subsets(n, k);
        let mut generators = Vec::new();
        let mut index = HashMap::new();
        for b in &derivatives {
            for s in &sets {
                let mut label = if b.is_one() {
                    "1".to_string()
                } else {
                    b.display_with(&dnames.iter().map(|x| format!("D{x}")).collect::<Vec<_>>()).to_string()
                };
                if !s.is_empty() {
                    label = format!("{label}|{}", wedge_label("D", &dnames, s));
                }
                let weight = -b.weighted_degree(&weights) - s.iter().map(|&j| weights[j]).sum::<i64>();
                index.insert((b.clone(), s.clone()), generators.len());
                generators.push(Generator { label, weight });
            }
        }
        terms.insert(k as i64, PresentedModule::new(scene, generators));
        layouts.push(Layout { derivatives, sets, index });
    }
    terms.insert(-1, PresentedModule::structure_sheaf(scene));
    let frame: Vec<Derivation> = (0..n).map(|j| Derivation::partial(&ring, j)).collect();
    let layouts = Arc::new(layouts);
    let differential = Arc::new(move |k: i64, label: &Label| -> Result<FreeElement> {
        let (mono, gen) = label;
        if k == 0 {
            let b = &layouts[0].derivatives[*gen];
            let op = DiffOperator::term(&ring, mono.clone(), b.clone(), rational(1));
            return Ok(FreeElement::from_polynomial(&augmentation(&op), 0));
        }
        let k = k as usize;
        let layout = &layouts[k];
        let target = &layouts[k - 1];
        let nsets = layout.sets.len();
        let (b, set) = (&layout.derivatives[gen / nsets], &layout.sets[gen % nsets]);
        let op = DiffOperator::term(&ring, mono.clone(), b.clone(), rational(1));
        let bound = p - (k as u32 - 1);
        let mut out = FreeElement::new();
        let mut push = |product: &DiffOperator, s: &Vec<usize>, sign: i64| {
            for (a, bb, c) in product.terms() {
                let g = target.index[&(bb.clone(), s.clone())];
                out.add_term((a.clone(), g), c * rational(sign));
            }
        };
        for t in 0..k {
            let (sign, rest) = remove_at(set, t);
            let product = op.compose_bounded(&DiffOperator::partial(&ring, set[t]), bound)?;
            push(&product, &rest, sign);
        }
        for t in 0..k {
            for u in t + 1..k {
                let bracket = frame[set[t]].bracket(&frame[set[u]]);
                let (s1, rest) = remove_at(set, u);
                let (s2, rest) = remove_at(&rest, t);
                for (l, c) in bracket.coefficients().iter().enumerate() {
                    if c.is_zero() {
                        continue;
                    }
                    let Some((s3, merged)) = wedge_front(l, &rest) else { continue };
                    let product = op.compose_bounded(&DiffOperator::function(c), bound)?;
                    push(&product, &merged, s1 * s2 * s3);
                }
            }
        }
        Ok(out)
    });
    Ok(GradedComplex::new(
        format!("filtered Spencer (p = {p})"),
        Direction::Homological,
        scene,
        terms,
        differential,
        Recipe::FilteredSpencer { order: p },
    ))
}

/// Cohomology of the scene with coefficients in a module, computed as the
/// homology of its Spencer complex and re-indexed cohomologically by
/// `i = n - k`.
pub fn pushforward_point(scene: &AffineScene, kind: ModuleKind, bound: i64) -> Result<HomologyTable> {
    let n = scene.ring().nvars() as i64;
    let spencer = build_spencer_of_module(scene, kind)?;
    let table = homology_table(&spencer, bound)?;
    let mut indices: Vec<i64> = table.indices().iter().map(|k| n - k).collect();
    indices.sort_unstable();
    let mut out = HomologyTable::new(Direction::Cohomological, indices, table.min_weight(), bound);
    for k in table.indices() {
        for d in table.weights() {
            out.set(n - k, d, table.get(*k, d));
            out.set_chain_dim(n - k, d, table.chain_dim(*k, d));
        }
    }
    Ok(out)
}
