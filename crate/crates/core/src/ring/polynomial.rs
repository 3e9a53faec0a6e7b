use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use super::monomial::Monomial;
use super::weighted::WeightedRing;
use crate::error::{Error, Result};
use crate::Rational;

/// Weighted degree of a nonzero polynomial.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum WeightedDegree {
    Homogeneous(i64),
    Inhomogeneous,
}

/// Exact polynomial over the rationals. Zero coefficients are never stored.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Polynomial {
    ring: WeightedRing,
    terms: BTreeMap<Monomial, Rational>,
}

impl Polynomial {
    pub fn zero(ring: &WeightedRing) -> Self {
        Polynomial { ring: ring.clone(), terms: BTreeMap::new() }
    }

    pub fn constant(ring: &WeightedRing, c: Rational) -> Self {
        Self::term(ring, Monomial::one(ring.nvars()), c)
    }

    pub fn one(ring: &WeightedRing) -> Self {
        Self::constant(ring, Rational::one())
    }

    pub fn from_int(ring: &WeightedRing, c: i64) -> Self {
        Self::constant(ring, Rational::from_integer(BigInt::from(c)))
    }

    pub fn var(ring: &WeightedRing, index: usize) -> Self {
        Self::monomial(ring, Monomial::var(ring.nvars(), index))
    }

    pub fn monomial(ring: &WeightedRing, m: Monomial) -> Self {
        Self::term(ring, m, Rational::one())
    }

    pub fn term(ring: &WeightedRing, m: Monomial, c: Rational) -> Self {
        assert_eq!(m.nvars(), ring.nvars(), "monomial length does not match ring");
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(m, c);
        }
        Polynomial { ring: ring.clone(), terms }
    }

    pub fn from_terms(ring: &WeightedRing, terms: impl IntoIterator<Item = (Monomial, Rational)>) -> Self {
        let mut p = Polynomial::zero(ring);
        for (m, c) in terms {
            p.add_term(m, c);
        }
        p
    }

    pub fn ring(&self) -> &WeightedRing {
        &self.ring
    }

    pub fn terms(&self) -> &BTreeMap<Monomial, Rational> {
        &self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn coefficient(&self, m: &Monomial) -> Rational {
        self.terms.get(m).cloned().unwrap_or_else(Rational::zero)
    }

    pub fn constant_value(&self) -> Option<Rational> {
        match self.terms.len() {
            0 => Some(Rational::zero()),
            1 => self.terms.iter().next().filter(|(m, _)| m.is_one()).map(|(_, c)| c.clone()),
            _ => None,
        }
    }

    pub fn add_term(&mut self, m: Monomial, c: Rational) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(m) {
            std::collections::btree_map::Entry::Vacant(v) => {
                v.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut o) => {
                *o.get_mut() += c;
                if o.get().is_zero() {
                    o.remove();
                }
            }
        }
    }

    pub fn add(&self, other: &Polynomial) -> Polynomial {
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.add_term(m.clone(), c.clone());
        }
        out
    }

    pub fn sub(&self, other: &Polynomial) -> Polynomial {
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.add_term(m.clone(), -c.clone());
        }
        out
    }

    pub fn neg(&self) -> Polynomial {
        self.scale(&-Rational::one())
    }

    pub fn scale(&self, c: &Rational) -> Polynomial {
        if c.is_zero() {
            return Polynomial::zero(&self.ring);
        }
        Polynomial {
            ring: self.ring.clone(),
            terms: self.terms.iter().map(|(m, a)| (m.clone(), a * c)).collect(),
        }
    }

    pub fn mul_monomial(&self, m: &Monomial, c: &Rational) -> Polynomial {
        if c.is_zero() {
            return Polynomial::zero(&self.ring);
        }
        Polynomial {
            ring: self.ring.clone(),
            terms: self.terms.iter().map(|(t, a)| (t.mul(m), a * c)).collect(),
        }
    }

    pub fn mul(&self, other: &Polynomial) -> Polynomial {
        let mut out = Polynomial::zero(&self.ring);
        for (m1, c1) in &self.terms {
            for (m2, c2) in &other.terms {
                out.add_term(m1.mul(m2), c1 * c2);
            }
        }
        out
    }

    pub fn pow(&self, k: u32) -> Polynomial {
        let mut out = Polynomial::one(&self.ring);
        for _ in 0..k {
            out = out.mul(self);
        }
        out
    }

    /// Formal partial derivative with respect to variable `index`.
    pub fn partial_derivative(&self, index: usize) -> Result<Polynomial> {
        if index >= self.ring.nvars() {
            return Err(Error::IndexOutOfRange { index, len: self.ring.nvars() });
        }
        let mut out = Polynomial::zero(&self.ring);
        for (m, c) in &self.terms {
            let e = m.exponents()[index];
            if e > 0 {
                out.add_term(m.with_exponent(index, e - 1), c * Rational::from_integer(BigInt::from(e)));
            }
        }
        Ok(out)
    }

    pub fn weighted_degree(&self) -> Result<WeightedDegree> {
        let weights = self.ring.weights();
        let mut degrees = self.terms.keys().map(|m| m.weighted_degree(weights));
        let first = degrees.next().ok_or(Error::ZeroPolynomial)?;
        if degrees.all(|d| d == first) {
            Ok(WeightedDegree::Homogeneous(first))
        } else {
            Ok(WeightedDegree::Inhomogeneous)
        }
    }

    /// Weighted degree of a homogeneous polynomial; zero counts as degree 0.
    pub fn homogeneous_degree(&self) -> Result<i64> {
        if self.is_zero() {
            return Ok(0);
        }
        match self.weighted_degree()? {
            WeightedDegree::Homogeneous(d) => Ok(d),
            WeightedDegree::Inhomogeneous => Err(Error::Inhomogeneous(self.to_string())),
        }
    }

    /// Substitute `images[i]` for variable `i`. All images share the target ring.
    pub fn substitute(&self, target: &WeightedRing, images: &[Polynomial]) -> Polynomial {
        assert_eq!(images.len(), self.ring.nvars());
        let mut out = Polynomial::zero(target);
        for (m, c) in &self.terms {
            let mut t = Polynomial::constant(target, c.clone());
            for (i, &e) in m.exponents().iter().enumerate() {
                if e > 0 {
                    t = t.mul(&images[i].pow(e));
                }
            }
            out = out.add(&t);
        }
        out
    }

    /// Reinterpret in `target`, sending variable `i` to variable `map[i]`.
    pub fn rename_into(&self, target: &WeightedRing, map: &[usize]) -> Polynomial {
        let images: Vec<_> = map.iter().map(|&j| Polynomial::var(target, j)).collect();
        self.substitute(target, &images)
    }

    /// Terms in canonical print order: descending weighted degree, then
    /// descending lexicographic exponent order.
    pub fn sorted_terms(&self) -> Vec<(&Monomial, &Rational)> {
        let weights = self.ring.weights();
        let mut v: Vec<_> = self.terms.iter().collect();
        v.sort_by(|(a, _), (b, _)| canonical_cmp(a, b, weights).reverse());
        v
    }

    pub fn max_total_degree(&self) -> u32 {
        self.terms.keys().map(Monomial::total_degree).max().unwrap_or(0)
    }
}

fn canonical_cmp(a: &Monomial, b: &Monomial, weights: &[i64]) -> Ordering {
    a.weighted_degree(weights).cmp(&b.weighted_degree(weights)).then_with(|| a.cmp(b))
}

fn format_rational(c: &Rational) -> String {
    if c.is_integer() {
        c.numer().to_string()
    } else {
        format!("{}/{}", c.numer(), c.denom())
    }
}

impl fmt::Display for Polynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return f.write_str("0");
        }
        let names = self.ring.names();
        for (k, (m, c)) in self.sorted_terms().into_iter().enumerate() {
            let negative = c.is_negative();
            match (k, negative) {
                (0, true) => f.write_str("-")?,
                (0, false) => {}
                (_, true) => f.write_str(" - ")?,
                (_, false) => f.write_str(" + ")?,
            }
            let abs = c.abs();
            if m.is_one() {
                f.write_str(&format_rational(&abs))?;
            } else if abs.is_one() {
                write!(f, "{}", m.display_with(names))?;
            } else {
                write!(f, "{}*{}", format_rational(&abs), m.display_with(names))?;
            }
        }
        Ok(())
    }
}
