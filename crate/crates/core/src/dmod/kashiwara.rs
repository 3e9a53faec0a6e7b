use std::collections::BTreeMap;

use super::weyl::{derivative_multi_indices, DiffOperator};
use crate::error::{Error, Result};
use crate::linalg::{rational, FreeElement, Generator, GradedPiece, LinearMap, PresentedModule};
use crate::ring::{AffineScene, Ideal, Monomial};

/// Operators of order at most `p` on the ambient space of a ring, graded by
/// `weight(x_i) = w_i`, `weight(D_i) = -w_i`.
#[derive(Clone, Debug)]
pub struct TruncatedDiffOps {
    scene: AffineScene,
    order: u32,
}

impl TruncatedDiffOps {
    pub fn new(ring: &crate::ring::WeightedRing, order: u32) -> Self {
        TruncatedDiffOps { scene: AffineScene::affine_space(ring.clone()), order }
    }

    pub fn order(&self) -> u32 {
        self.order
    }

    pub fn ring(&self) -> &crate::ring::WeightedRing {
        self.scene.ring()
    }

    /// `F^p D` as a free left module over the functions on the generators `D^b`.
    pub fn module(&self) -> PresentedModule {
        let ring = self.scene.ring();
        let names: Vec<String> = ring.names().iter().map(|x| format!("D{x}")).collect();
        let generators = derivative_multi_indices(ring.nvars(), self.order)
            .into_iter()
            .map(|b| Generator {
                label: if b.is_one() { "1".into() } else { b.display_with(&names).to_string() },
                weight: -b.weighted_degree(ring.weights()),
            })
            .collect();
        PresentedModule::new(&self.scene, generators)
    }

    /// Lowest weight of a nonzero operator.
    pub fn min_weight(&self) -> i64 {
        -(self.order as i64) * self.scene.ring().max_weight().unwrap_or(0)
    }
}

/// Graded pieces of `F^p D / (I . F^p D)` with the support check.
#[derive(Clone, Debug)]
pub struct KashiwaraQuotient {
    order: u32,
    bound: i64,
    pieces: BTreeMap<i64, Vec<String>>,
    /// Per ideal generator, the largest number of left multiplications needed
    /// to kill a computed piece (`None` if not reached within the bound).
    /// Pieces whose image leaves the computed range are not checked.
    nilpotency: Vec<Option<u32>>,
}

impl KashiwaraQuotient {
    pub fn order(&self) -> u32 {
        self.order
    }

    pub fn bound(&self) -> i64 {
        self.bound
    }

    pub fn dim(&self, weight: i64) -> usize {
        self.pieces.get(&weight).map_or(0, Vec::len)
    }

    pub fn total_dim(&self) -> usize {
        self.pieces.values().map(Vec::len).sum()
    }

    /// Basis labels per weight (only nonzero pieces).
    pub fn pieces(&self) -> impl Iterator<Item = (i64, &[String])> {
        self.pieces.iter().filter(|(_, v)| !v.is_empty()).map(|(d, v)| (*d, v.as_slice()))
    }

    pub fn nilpotency(&self) -> &[Option<u32>] {
        &self.nilpotency
    }

    /// Every ideal generator acts nilpotently on every computed piece.
    pub fn is_supported_on_ideal(&self) -> bool {
        self.nilpotency.iter().all(Option::is_some)
    }
}

/// `F^p D / (I . F^p D)` for weights in `[-p * max_w, bound]`. Relations are
/// the products `g * D^b` for ideal generators `g`, formed in the operator
/// ring; the support check multiplies by each generator on the left.
pub fn kashiwara_quotient(ops: &TruncatedDiffOps, ideal: &Ideal, bound: i64) -> Result<KashiwaraQuotient> {
    if !ideal.is_homogeneous() {
        return Err(Error::Inhomogeneous("Kashiwara ideal".into()));
    }
    let ring = ops.ring().clone();
    let n = ring.nvars();
    let mut module = ops.module();
    let derivatives = derivative_multi_indices(n, ops.order);
    for g in ideal.generators() {
        let left = DiffOperator::function(g);
        for (gi, b) in derivatives.iter().enumerate() {
            let product = left.compose_bounded(&DiffOperator::term(&ring, Monomial::one(n), b.clone(), rational(1)), ops.order)?;
            let mut e = FreeElement::new();
            for (a, bb, c) in product.terms() {
                let idx = derivatives.iter().position(|x| x == bb).expect("order within bound");
                e.add_term((a.clone(), idx), c.clone());
            }
            let weight = g.homogeneous_degree()? + module.generators()[gi].weight;
            module.push_relation_element(weight, e);
        }
    }
    let lo = ops.min_weight();
    let mut pieces = BTreeMap::new();
    let mut computed: BTreeMap<i64, GradedPiece> = BTreeMap::new();
    for d in lo..=bound {
        let piece = module.piece(d)?;
        pieces.insert(d, piece.labels().to_vec());
        computed.insert(d, piece);
    }
    let mut nilpotency = Vec::new();
    for g in ideal.generators() {
        let e = g.homogeneous_degree()?;
        let left = DiffOperator::function(g);
        let multiply = |d: i64| -> Result<Option<LinearMap>> {
            let (Some(src), Some(dst)) = (computed.get(&d), computed.get(&(d + e))) else { return Ok(None) };
            let mut columns = Vec::new();
            for (a, gi) in src.basis_labels() {
                let op = DiffOperator::term(&ring, a.clone(), derivatives[*gi].clone(), rational(1));
                let product = left.compose(&op);
                let mut image = FreeElement::new();
                for (x, bb, c) in product.terms() {
                    let idx = derivatives.iter().position(|y| y == bb).expect("order preserved");
                    image.add_term((x.clone(), idx), c.clone());
                }
                columns.push(dst.reduce(&image)?);
            }
            Ok(Some(LinearMap::from_columns(src.labels().to_vec(), dst.labels().to_vec(), columns)))
        };
        let mut worst = Some(0u32);
        for d in lo..=bound {
            if computed[&d].dim() == 0 || !computed.contains_key(&(d + e)) {
                continue;
            }
            // Compose multiplication maps d -> d+e -> ... until zero or out of range.
            let mut power = 0u32;
            let mut acc: Option<LinearMap> = None;
            let mut current = d;
            let killed = loop {
                let Some(step) = multiply(current)? else { break false };
                let next = match &acc {
                    None => step,
                    Some(prev) => step.compose(prev),
                };
                power += 1;
                current += e;
                if next.is_zero() {
                    break true;
                }
                acc = Some(next);
                if e == 0 && power > 64 {
                    break false;
                }
            };
            worst = match (worst, killed) {
                (Some(w), true) => Some(w.max(power)),
                _ => None,
            };
        }
        nilpotency.push(worst);
    }
    Ok(KashiwaraQuotient { order: ops.order, bound, pieces, nilpotency })
}
