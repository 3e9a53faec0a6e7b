use std::fmt;

/// Exponent vector of a monomial. The derived ordering is lexicographic with
/// the first variable most significant.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Monomial(Vec<u32>);

impl Monomial {
    pub fn new(exponents: Vec<u32>) -> Self {
        Monomial(exponents)
    }

    pub fn one(nvars: usize) -> Self {
        Monomial(vec![0; nvars])
    }

    pub fn var(nvars: usize, index: usize) -> Self {
        let mut e = vec![0; nvars];
        e[index] = 1;
        Monomial(e)
    }

    pub fn exponents(&self) -> &[u32] {
        &self.0
    }

    pub fn nvars(&self) -> usize {
        self.0.len()
    }

    pub fn total_degree(&self) -> u32 {
        self.0.iter().sum()
    }

    pub fn weighted_degree(&self, weights: &[i64]) -> i64 {
        self.0.iter().zip(weights).map(|(&e, &w)| e as i64 * w).sum()
    }

    pub fn is_one(&self) -> bool {
        self.0.iter().all(|&e| e == 0)
    }

    pub fn mul(&self, other: &Monomial) -> Monomial {
        Monomial(self.0.iter().zip(&other.0).map(|(a, b)| a + b).collect())
    }

    pub fn divides(&self, other: &Monomial) -> bool {
        self.0.iter().zip(&other.0).all(|(a, b)| a <= b)
    }

    /// `other / self`, if `self` divides `other`.
    pub fn quotient_of(&self, other: &Monomial) -> Option<Monomial> {
        if self.divides(other) {
            Some(Monomial(other.0.iter().zip(&self.0).map(|(a, b)| a - b).collect()))
        } else {
            None
        }
    }

    pub fn lcm(&self, other: &Monomial) -> Monomial {
        Monomial(self.0.iter().zip(&other.0).map(|(&a, &b)| a.max(b)).collect())
    }

    pub fn is_coprime(&self, other: &Monomial) -> bool {
        self.0.iter().zip(&other.0).all(|(&a, &b)| a == 0 || b == 0)
    }

    pub(crate) fn with_exponent(&self, index: usize, value: u32) -> Monomial {
        let mut e = self.0.clone();
        e[index] = value;
        Monomial(e)
    }

    /// Render with the given variable names, `1` for the unit monomial.
    pub fn display_with<'a>(&'a self, names: &'a [String]) -> MonomialDisplay<'a> {
        MonomialDisplay { monomial: self, names }
    }
}

pub struct MonomialDisplay<'a> {
    monomial: &'a Monomial,
    names: &'a [String],
}

impl fmt::Display for MonomialDisplay<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (e, name) in self.monomial.0.iter().zip(self.names) {
            if *e == 0 {
                continue;
            }
            if !first {
                f.write_str("*")?;
            }
            first = false;
            if *e == 1 {
                write!(f, "{name}")?;
            } else {
                write!(f, "{name}^{e}")?;
            }
        }
        if first {
            f.write_str("1")?;
        }
        Ok(())
    }
}

/// All exponent vectors `e` with `sum e_i * w_i == target`, in descending
/// lexicographic order. Weights must be strictly positive.
pub fn monomials_of_weight(weights: &[i64], target: i64) -> Vec<Monomial> {
    let mut out = Vec::new();
    if target < 0 {
        return out;
    }
    let mut current = vec![0u32; weights.len()];
    fill(weights, 0, target, &mut current, &mut out);
    out
}

fn fill(weights: &[i64], index: usize, remaining: i64, current: &mut Vec<u32>, out: &mut Vec<Monomial>) {
    if index == weights.len() {
        if remaining == 0 {
            out.push(Monomial(current.clone()));
        }
        return;
    }
    let w = weights[index];
    let max = remaining / w;
    for e in (0..=max).rev() {
        current[index] = e as u32;
        fill(weights, index + 1, remaining - e * w, current, out);
    }
    current[index] = 0;
}
