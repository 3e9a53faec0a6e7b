//! Buchberger's algorithm, normal forms and standard monomials.

use std::cmp::Ordering;
use std::collections::BTreeSet;

use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::ring::{Ideal, Monomial, Polynomial, WeightedRing};
use crate::Rational;

/// Default number of S-pairs Buchberger may process before giving up.
pub const DEFAULT_PAIR_BUDGET: usize = 100_000;

/// Environment variable overriding [`DEFAULT_PAIR_BUDGET`].
pub const BUDGET_ENV: &str = "SPENCERLAB_BUDGET";

pub fn default_pair_budget() -> usize {
    std::env::var(BUDGET_ENV).ok().and_then(|v| v.trim().parse().ok()).unwrap_or(DEFAULT_PAIR_BUDGET)
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash)]
pub enum MonomialOrder {
    /// Weighted degree first, ties broken reverse-lexicographically.
    #[default]
    WeightedDegRevLex,
    Lex,
}

impl MonomialOrder {
    pub fn compare(self, a: &Monomial, b: &Monomial, weights: &[i64]) -> Ordering {
        match self {
            MonomialOrder::Lex => a.cmp(b),
            MonomialOrder::WeightedDegRevLex => {
                a.weighted_degree(weights).cmp(&b.weighted_degree(weights)).then_with(|| {
                    // Smaller exponent in the last differing variable is larger.
                    for (x, y) in a.exponents().iter().zip(b.exponents()).rev() {
                        if x != y {
                            return y.cmp(x);
                        }
                    }
                    Ordering::Equal
                })
            }
        }
    }
}

fn leading(p: &Polynomial, order: MonomialOrder) -> Option<(&Monomial, &Rational)> {
    let w = p.ring().weights();
    p.terms().iter().max_by(|(a, _), (b, _)| order.compare(a, b, w))
}

pub fn leading_monomial(p: &Polynomial, order: MonomialOrder) -> Option<Monomial> {
    leading(p, order).map(|(m, _)| m.clone())
}

/// A reduced Groebner basis: monic generators sorted by ascending leading monomial.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GroebnerBasis {
    ring: WeightedRing,
    order: MonomialOrder,
    generators: Vec<Polynomial>,
}

impl GroebnerBasis {
    pub fn generators(&self) -> &[Polynomial] {
        &self.generators
    }

    pub fn order(&self) -> MonomialOrder {
        self.order
    }

    pub fn ring(&self) -> &WeightedRing {
        &self.ring
    }

    pub fn leading_monomials(&self) -> Vec<Monomial> {
        self.generators.iter().filter_map(|g| leading_monomial(g, self.order)).collect()
    }

    pub fn is_unit(&self) -> bool {
        self.generators.iter().any(|g| g.constant_value().is_some_and(|c| !c.is_zero()))
    }

    pub fn contains(&self, p: &Polynomial) -> bool {
        normal_form(p, self).is_zero()
    }

    pub fn as_ideal(&self) -> Ideal {
        Ideal::new(&self.ring, self.generators.clone()).expect("same ring")
    }
}

/// Fully reduce `p` modulo the divisors, returning the remainder.
fn reduce(p: &Polynomial, divisors: &[Polynomial], order: MonomialOrder) -> Polynomial {
    let leads: Vec<(Monomial, Rational)> = divisors
        .iter()
        .filter_map(|g| leading(g, order).map(|(m, c)| (m.clone(), c.clone())))
        .collect();
    let ring = p.ring();
    let w = ring.weights();
    let mut rest = p.clone();
    let mut remainder = Polynomial::zero(ring);
    while let Some((m, c)) = rest.terms().iter().max_by(|(a, _), (b, _)| order.compare(a, b, w)) {
        let (m, c) = (m.clone(), c.clone());
        match leads.iter().position(|(lm, _)| lm.divides(&m)) {
            Some(k) => {
                let factor = leads[k].0.quotient_of(&m).expect("divides");
                let coeff = &c / &leads[k].1;
                rest = rest.sub(&divisors[k].mul_monomial(&factor, &coeff));
            }
            None => {
                remainder.add_term(m.clone(), c.clone());
                rest.add_term(m, -c);
            }
        }
    }
    remainder
}

/// Remainder of `p` on division by the basis; no term is divisible by a
/// leading monomial of `gb`.
pub fn normal_form(p: &Polynomial, gb: &GroebnerBasis) -> Polynomial {
    reduce(p, &gb.generators, gb.order)
}

fn monic(p: &Polynomial, order: MonomialOrder) -> Polynomial {
    match leading(p, order) {
        Some((_, c)) => p.scale(&(Rational::one() / c.clone())),
        None => p.clone(),
    }
}

fn s_polynomial(f: &Polynomial, g: &Polynomial, order: MonomialOrder) -> Polynomial {
    let (mf, cf) = leading(f, order).expect("nonzero");
    let (mg, cg) = leading(g, order).expect("nonzero");
    let l = mf.lcm(mg);
    let a = mf.quotient_of(&l).expect("lcm");
    let b = mg.quotient_of(&l).expect("lcm");
    f.mul_monomial(&a, &(Rational::one() / cf.clone()))
        .sub(&g.mul_monomial(&b, &(Rational::one() / cg.clone())))
}

pub fn buchberger(ideal: &Ideal, order: MonomialOrder) -> Result<GroebnerBasis> {
    buchberger_with_budget(ideal, order, default_pair_budget())
}

/// Reduced Groebner basis by Buchberger's algorithm with the coprime
/// leading-term criterion and normal pair selection (smallest lcm first,
/// ties lexicographic on the lcm, then on the pair indices).
pub fn buchberger_with_budget(ideal: &Ideal, order: MonomialOrder, budget: usize) -> Result<GroebnerBasis> {
    let ring = ideal.ring().clone();
    let w = ring.weights().to_vec();
    let mut basis: Vec<Polynomial> = Vec::new();
    for g in ideal.generators() {
        let r = reduce(g, &basis, order);
        if !r.is_zero() {
            basis.push(monic(&r, order));
        }
    }
    let lm = |p: &Polynomial| leading_monomial(p, order).expect("nonzero");
    // Pending pairs keyed for deterministic normal selection.
    let key = |basis: &[Polynomial], i: usize, j: usize| {
        let l = lm(&basis[i]).lcm(&lm(&basis[j]));
        (l.weighted_degree(&w), l.exponents().to_vec(), i, j)
    };
    let mut pairs: BTreeSet<(i64, Vec<u32>, usize, usize)> = BTreeSet::new();
    for j in 0..basis.len() {
        for i in 0..j {
            pairs.insert(key(&basis, i, j));
        }
    }
    let mut processed = 0usize;
    while let Some(next) = pairs.pop_first() {
        let (_, _, i, j) = next;
        if lm(&basis[i]).is_coprime(&lm(&basis[j])) {
            continue;
        }
        processed += 1;
        if processed > budget {
            return Err(Error::BudgetExceeded(budget));
        }
        let s = s_polynomial(&basis[i], &basis[j], order);
        let r = reduce(&s, &basis, order);
        if !r.is_zero() {
            basis.push(monic(&r, order));
            let k = basis.len() - 1;
            for i in 0..k {
                pairs.insert(key(&basis, i, k));
            }
        }
    }
    Ok(GroebnerBasis { generators: interreduce(basis, order, &w), ring, order })
}

fn interreduce(basis: Vec<Polynomial>, order: MonomialOrder, weights: &[i64]) -> Vec<Polynomial> {
    let lms: Vec<Monomial> = basis.iter().map(|p| leading_monomial(p, order).expect("nonzero")).collect();
    // Keep a generator unless another leading monomial divides its own
    // (ties resolved by keeping the first occurrence).
    let mut minimal: Vec<Polynomial> = Vec::new();
    for (k, p) in basis.iter().enumerate() {
        let redundant = lms.iter().enumerate().any(|(j, m)| {
            j != k && m.divides(&lms[k]) && (m != &lms[k] || j < k)
        });
        if !redundant {
            minimal.push(p.clone());
        }
    }
    let mut reduced = Vec::with_capacity(minimal.len());
    for k in 0..minimal.len() {
        let others: Vec<Polynomial> =
            minimal.iter().enumerate().filter(|(j, _)| *j != k).map(|(_, p)| p.clone()).collect();
        let (m, c) = leading(&minimal[k], order).map(|(m, c)| (m.clone(), c.clone())).expect("nonzero");
        let mut tail = minimal[k].clone();
        tail.add_term(m.clone(), -c.clone());
        let mut r = reduce(&tail, &others, order);
        r.add_term(m, c);
        reduced.push(monic(&r, order));
    }
    reduced.sort_by(|a, b| {
        order.compare(&leading_monomial(a, order).unwrap(), &leading_monomial(b, order).unwrap(), weights)
    });
    reduced
}

/// Dimension of `O_X / I` over the rationals.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum QuotientDimension {
    Finite { dim: usize, basis: Vec<Monomial> },
    Infinite,
}

impl QuotientDimension {
    pub fn dim(&self) -> Option<usize> {
        match self {
            QuotientDimension::Finite { dim, .. } => Some(*dim),
            QuotientDimension::Infinite => None,
        }
    }
}

pub fn quotient_dimension(ideal: &Ideal) -> Result<QuotientDimension> {
    quotient_dimension_with_order(ideal, MonomialOrder::default())
}

/// Standard monomials of the leading-term ideal, sorted by ascending weighted
/// degree and then descending lexicographic order.
pub fn quotient_dimension_with_order(ideal: &Ideal, order: MonomialOrder) -> Result<QuotientDimension> {
    let gb = buchberger(ideal, order)?;
    Ok(standard_monomials(&gb))
}

pub fn standard_monomials(gb: &GroebnerBasis) -> QuotientDimension {
    let ring = gb.ring();
    let n = ring.nvars();
    let lms = gb.leading_monomials();
    let mut bounds = Vec::with_capacity(n);
    for v in 0..n {
        let pure = lms
            .iter()
            .filter(|m| m.exponents().iter().enumerate().all(|(k, &e)| k == v || e == 0))
            .map(|m| m.exponents()[v])
            .min();
        match pure {
            Some(e) => bounds.push(e),
            None => return QuotientDimension::Infinite,
        }
    }
    let mut basis = Vec::new();
    let mut current = vec![0u32; n];
    loop {
        let m = Monomial::new(current.clone());
        if !lms.iter().any(|l| l.divides(&m)) {
            basis.push(m);
        }
        // odometer over the box of exponents below the pure-power bounds
        let mut k = 0;
        loop {
            if k == n {
                let w = ring.weights();
                basis.sort_by(|a, b| a.weighted_degree(w).cmp(&b.weighted_degree(w)).then_with(|| b.cmp(a)));
                return QuotientDimension::Finite { dim: basis.len(), basis };
            }
            current[k] += 1;
            if current[k] < bounds[k] {
                break;
            }
            current[k] = 0;
            k += 1;
        }
    }
}
