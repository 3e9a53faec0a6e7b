use std::collections::HashMap;

use num_traits::Zero;

use super::monomial::{monomials_of_weight, Monomial};
use super::polynomial::Polynomial;
use super::scene::{AffineScene, Ideal};
use crate::groebner::MonomialOrder;
use crate::linalg::Rref;
use crate::Rational;

/// One weighted piece `(O_X / I)_d`, computed by linear algebra on the span of
/// `{m * g}` for ideal generators `g` and monomials `m` of complementary weight.
#[derive(Clone, Debug)]
pub struct GradedComponent {
    weight: i64,
    monomials: Vec<Monomial>,
    position: HashMap<Monomial, usize>,
    relations: Rref,
    basis: Vec<usize>,
}

impl GradedComponent {
    pub fn weight(&self) -> i64 {
        self.weight
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    /// Monomials whose classes form a basis.
    pub fn basis(&self) -> Vec<Monomial> {
        self.basis.iter().map(|&i| self.monomials[i].clone()).collect()
    }

    /// Dimension of the ideal's slice in this weight.
    pub fn ideal_dim(&self) -> usize {
        self.relations.rank()
    }

    fn dense(&self, p: &Polynomial) -> Option<Vec<Rational>> {
        let mut v = vec![Rational::zero(); self.monomials.len()];
        for (m, c) in p.terms() {
            v[*self.position.get(m)?] = c.clone();
        }
        Some(v)
    }

    /// Whether a polynomial of this weight lies in the ideal. Polynomials with
    /// terms of other weights are reported as not contained.
    pub fn contains(&self, p: &Polynomial) -> bool {
        self.dense(p).is_some_and(|v| self.relations.contains(&v))
    }
}

/// Monomial basis of `(O_X / I)_d`. The chosen representatives are the
/// monomials that are not leading terms of the ideal slice under the default
/// weighted degree-reverse-lexicographic order.
pub fn graded_component_basis(scene: &AffineScene, d: i64) -> GradedComponent {
    component(scene.ideal(), d)
}

fn component(ideal: &Ideal, d: i64) -> GradedComponent {
    let ring = ideal.ring();
    let weights = ring.weights();
    let order = MonomialOrder::WeightedDegRevLex;
    let mut monomials = monomials_of_weight(weights, d);
    monomials.sort_by(|a, b| order.compare(a, b, weights).reverse());
    let position: HashMap<Monomial, usize> = monomials.iter().cloned().enumerate().map(|(i, m)| (m, i)).collect();
    let mut relations = Rref::new(monomials.len());
    for g in ideal.generators() {
        let Ok(deg) = g.homogeneous_degree() else { continue };
        for m in monomials_of_weight(weights, d - deg) {
            let mut v = vec![Rational::zero(); monomials.len()];
            for (t, c) in g.terms() {
                v[position[&t.mul(&m)]] = c.clone();
            }
            relations.insert(v);
        }
    }
    let basis = (0..monomials.len()).filter(|&c| !relations.is_pivot(c)).collect();
    GradedComponent { weight: d, monomials, position, relations, basis }
}

/// Degreewise ideal membership for a weighted-homogeneous polynomial, by exact
/// linear algebra. Independent of any Groebner basis computation.
pub fn in_ideal_degreewise(ideal: &Ideal, p: &Polynomial) -> bool {
    if p.is_zero() {
        return true;
    }
    match p.homogeneous_degree() {
        Ok(d) => component(ideal, d).contains(p),
        Err(_) => false,
    }
}
