use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::ring::{monomials_of_weight, Monomial, Polynomial, WeightedRing};
use crate::Rational;

/// A normal-ordered differential operator `sum c x^a D^b` on affine space,
/// with all functions to the left of all derivatives.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DiffOperator {
    ring: WeightedRing,
    terms: BTreeMap<(Monomial, Monomial), Rational>,
}

impl DiffOperator {
    pub fn zero(ring: &WeightedRing) -> Self {
        DiffOperator { ring: ring.clone(), terms: BTreeMap::new() }
    }

    /// `c x^a D^b`.
    pub fn term(ring: &WeightedRing, a: Monomial, b: Monomial, c: Rational) -> Self {
        let mut op = DiffOperator::zero(ring);
        op.add_term(a, b, c);
        op
    }

    pub fn function(p: &Polynomial) -> Self {
        let mut op = DiffOperator::zero(p.ring());
        for (m, c) in p.terms() {
            op.add_term(m.clone(), Monomial::one(p.ring().nvars()), c.clone());
        }
        op
    }

    /// The coordinate derivative `D_index`.
    pub fn partial(ring: &WeightedRing, index: usize) -> Self {
        let n = ring.nvars();
        DiffOperator::term(ring, Monomial::one(n), Monomial::var(n, index), Rational::one())
    }

    pub fn ring(&self) -> &WeightedRing {
        &self.ring
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &Monomial, &Rational)> {
        self.terms.iter().map(|((a, b), c)| (a, b, c))
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn add_term(&mut self, a: Monomial, b: Monomial, c: Rational) {
        if c.is_zero() {
            return;
        }
        let key = (a, b);
        let entry = self.terms.entry(key.clone()).or_insert_with(Rational::zero);
        *entry += c;
        if entry.is_zero() {
            self.terms.remove(&key);
        }
    }

    pub fn add(&self, other: &DiffOperator) -> DiffOperator {
        let mut out = self.clone();
        for ((a, b), c) in &other.terms {
            out.add_term(a.clone(), b.clone(), c.clone());
        }
        out
    }

    pub fn scale(&self, c: &Rational) -> DiffOperator {
        let mut out = DiffOperator::zero(&self.ring);
        for ((a, b), v) in &self.terms {
            out.add_term(a.clone(), b.clone(), v * c);
        }
        out
    }

    /// Highest `|b|`; zero for the zero operator.
    pub fn order(&self) -> u32 {
        self.terms.keys().map(|(_, b)| b.total_degree()).max().unwrap_or(0)
    }

    /// Weight `w.a - w.b` of a homogeneous operator.
    pub fn weight(&self) -> Option<i64> {
        let w = self.ring.weights();
        let mut weights = self.terms.keys().map(|(a, b)| a.weighted_degree(w) - b.weighted_degree(w));
        let first = weights.next()?;
        weights.all(|x| x == first).then_some(first)
    }

    /// Normal-ordered product `self * other`, using
    /// `D^b x^c = sum_k prod_i C(b_i, k_i) c_i!/(c_i - k_i)! x^(c-k) D^(b-k)`.
    pub fn compose(&self, other: &DiffOperator) -> DiffOperator {
        let mut out = DiffOperator::zero(&self.ring);
        for ((a, b), c1) in &self.terms {
            for ((c, d), c2) in &other.terms {
                let bounds: Vec<u32> = b.exponents().iter().zip(c.exponents()).map(|(&x, &y)| x.min(y)).collect();
                for k in exponent_box(&bounds) {
                    let mut coeff = c1 * c2;
                    for ((&bi, &ci), &ki) in b.exponents().iter().zip(c.exponents()).zip(&k) {
                        coeff *= Rational::from_integer(binomial(bi, ki) * falling(ci, ki));
                    }
                    let x: Vec<u32> =
                        (0..k.len()).map(|i| a.exponents()[i] + c.exponents()[i] - k[i]).collect();
                    let dd: Vec<u32> =
                        (0..k.len()).map(|i| b.exponents()[i] + d.exponents()[i] - k[i]).collect();
                    out.add_term(Monomial::new(x), Monomial::new(dd), coeff);
                }
            }
        }
        out
    }

    /// `compose`, refusing results above the order bound.
    pub fn compose_bounded(&self, other: &DiffOperator, bound: u32) -> Result<DiffOperator> {
        let out = self.compose(other);
        if out.order() > bound {
            return Err(Error::DegreeBound(format!("operator order {} exceeds the bound {bound}", out.order())));
        }
        Ok(out)
    }

    /// Action on a polynomial.
    pub fn apply(&self, p: &Polynomial) -> Polynomial {
        let mut out = Polynomial::zero(&self.ring);
        for ((a, b), c) in &self.terms {
            let mut q = p.clone();
            for (i, &e) in b.exponents().iter().enumerate() {
                for _ in 0..e {
                    q = q.partial_derivative(i).expect("index within ring");
                }
            }
            out = out.add(&q.mul_monomial(a, c));
        }
        out
    }
}

/// The zeroth-order part: the operator applied to the constant `1`.
pub fn augmentation(op: &DiffOperator) -> Polynomial {
    op.apply(&Polynomial::one(op.ring()))
}

fn exponent_box(bounds: &[u32]) -> Vec<Vec<u32>> {
    let mut out = vec![Vec::new()];
    for &b in bounds {
        out = out.into_iter().flat_map(|v| (0..=b).map(move |k| [v.clone(), vec![k]].concat())).collect();
    }
    out
}

fn binomial(n: u32, k: u32) -> BigInt {
    falling(n, k) / falling(k, k)
}

fn falling(n: u32, k: u32) -> BigInt {
    (0..k).fold(BigInt::one(), |acc, i| acc * BigInt::from(n - i))
}

/// Multi-indices `b` with `|b| <= p`, ordered by total degree then
/// descending lexicographically.
pub(crate) fn derivative_multi_indices(n: usize, p: u32) -> Vec<Monomial> {
    let ones = vec![1; n];
    (0..=p as i64).flat_map(|k| monomials_of_weight(&ones, k)).collect()
}

impl fmt::Display for DiffOperator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let names = self.ring.names();
        let derivative_names: Vec<String> = names.iter().map(|s| format!("D{s}")).collect();
        let mut first = true;
        for ((a, b), c) in self.terms.iter().rev() {
            let mut factors = Vec::new();
            if !a.is_one() {
                factors.push(a.display_with(names).to_string());
            }
            if !b.is_one() {
                factors.push(b.display_with(&derivative_names).to_string());
            }
            let coeff = Polynomial::constant(&self.ring, c.clone()).to_string();
            let (sign, magnitude) = match coeff.strip_prefix('-') {
                Some(rest) => ("-", rest.to_string()),
                None => ("+", coeff),
            };
            let body = match (factors.is_empty(), magnitude.as_str()) {
                (true, _) => magnitude,
                (false, "1") => factors.join("*"),
                (false, _) => format!("{magnitude}*{}", factors.join("*")),
            };
            if first {
                write!(f, "{}{body}", if sign == "-" { "-" } else { "" })?;
            } else {
                write!(f, " {sign} {body}")?;
            }
            first = false;
        }
        Ok(())
    }
}
