use super::matrix::{rank_kernel_image, LinearMap, Vector};
use super::presented::{FreeElement, PresentedModule, MAX_WEIGHT};
use crate::error::{Error, Result};
use crate::euler::Derivation;
use crate::ring::{AffineScene, Polynomial};
use crate::Rational;

/// Weight-`d` derivations of `O_Y`, as coefficient tuples with entries in the
/// standard monomials of `O_Y`.
#[derive(Clone, Debug)]
pub struct DerivationPiece {
    weight: i64,
    basis: Vec<Derivation>,
}

impl DerivationPiece {
    pub fn weight(&self) -> i64 {
        self.weight
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn basis(&self) -> &[Derivation] {
        &self.basis
    }
}

/// Kernel of the evaluation map sending a coefficient tuple `(a_i)` of
/// weight `d` to the classes of `sum a_i dg/dx_i` modulo `I`, one per ideal
/// generator `g`.
pub fn derivation_module_piece(scene: &AffineScene, d: i64) -> Result<DerivationPiece> {
    if d.abs() > MAX_WEIGHT {
        return Err(Error::DegreeBound(format!("weight {d} exceeds the supported bound {MAX_WEIGHT}")));
    }
    let ring = scene.ring();
    let o = PresentedModule::structure_sheaf(scene);
    let mut candidates = Vec::new();
    for (i, w) in ring.weights().iter().enumerate() {
        let piece = o.piece(d + w)?;
        for (m, _) in piece.basis_labels() {
            candidates.push((i, m.clone()));
        }
    }
    let one = Rational::from_integer(1.into());
    let mut rows: Vec<Vec<Vector>> = Vec::new();
    for g in scene.ideal().generators() {
        let target = o.piece(d + g.homogeneous_degree()?)?;
        let mut columns = Vec::with_capacity(candidates.len());
        for (i, m) in &candidates {
            let value = g.partial_derivative(*i)?.mul_monomial(m, &one);
            columns.push(target.reduce(&FreeElement::from_polynomial(&value, 0))?);
        }
        rows.push(columns);
    }
    // Stack the evaluations on all generators into one matrix.
    let columns: Vec<Vector> = (0..candidates.len())
        .map(|c| rows.iter().flat_map(|block| block[c].iter().cloned()).collect())
        .collect();
    let height = rows.iter().map(|block| block.first().map_or(0, Vec::len)).sum();
    let labels = |n: usize| (0..n).map(|k| k.to_string()).collect::<Vec<_>>();
    let map = LinearMap::from_columns(labels(candidates.len()), labels(height), columns);
    let kernel = rank_kernel_image(&map).kernel;
    let basis = kernel
        .iter()
        .map(|v| {
            let mut coefficients = vec![Polynomial::zero(ring); ring.nvars()];
            for ((i, m), c) in candidates.iter().zip(v) {
                coefficients[*i].add_term(m.clone(), c.clone());
            }
            Derivation::new(ring, coefficients)
        })
        .collect::<Result<_>>()?;
    Ok(DerivationPiece { weight: d, basis })
}
