use std::fmt;

use crate::error::{Error, Result};
use crate::groebner::{buchberger, normal_form, MonomialOrder};
use crate::ring::{Ideal, Polynomial, WeightedRing};

/// A polynomial vector field `sum c_i d/dx_i` on the ambient space.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Derivation {
    ring: WeightedRing,
    coefficients: Vec<Polynomial>,
}

impl Derivation {
    pub fn new(ring: &WeightedRing, coefficients: Vec<Polynomial>) -> Result<Self> {
        if coefficients.len() != ring.nvars() {
            return Err(Error::Invalid(format!(
                "a derivation needs {} coefficients, got {}",
                ring.nvars(),
                coefficients.len()
            )));
        }
        Ok(Derivation { ring: ring.clone(), coefficients })
    }

    pub fn zero(ring: &WeightedRing) -> Self {
        Derivation { ring: ring.clone(), coefficients: vec![Polynomial::zero(ring); ring.nvars()] }
    }

    /// The coordinate field `d/dx_index`.
    pub fn partial(ring: &WeightedRing, index: usize) -> Self {
        let mut d = Derivation::zero(ring);
        d.coefficients[index] = Polynomial::one(ring);
        d
    }

    pub fn ring(&self) -> &WeightedRing {
        &self.ring
    }

    pub fn coefficients(&self) -> &[Polynomial] {
        &self.coefficients
    }

    pub fn is_zero(&self) -> bool {
        self.coefficients.iter().all(Polynomial::is_zero)
    }

    /// `xi(p) = sum c_i dp/dx_i`.
    pub fn apply(&self, p: &Polynomial) -> Polynomial {
        let mut out = Polynomial::zero(&self.ring);
        for (i, c) in self.coefficients.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let dp = p.partial_derivative(i).expect("index within ring");
            out = out.add(&c.mul(&dp));
        }
        out
    }

    /// Weight of a homogeneous field: `deg(c_i) - w_i` for every nonzero
    /// coefficient. `None` for the zero field.
    pub fn weight(&self) -> Result<Option<i64>> {
        let mut weight = None;
        for (c, w) in self.coefficients.iter().zip(self.ring.weights()) {
            if c.is_zero() {
                continue;
            }
            let e = c.homogeneous_degree()? - w;
            if weight.is_some_and(|x| x != e) {
                return Err(Error::Inhomogeneous(self.to_string()));
            }
            weight = Some(e);
        }
        Ok(weight)
    }

    /// Commutator `[self, other]` as first-order operators.
    pub fn bracket(&self, other: &Derivation) -> Derivation {
        let coefficients = self
            .coefficients
            .iter()
            .zip(&other.coefficients)
            .map(|(a, b)| self.apply(b).sub(&other.apply(a)))
            .collect();
        Derivation { ring: self.ring.clone(), coefficients }
    }

    pub fn add(&self, other: &Derivation) -> Derivation {
        let coefficients = self.coefficients.iter().zip(&other.coefficients).map(|(a, b)| a.add(b)).collect();
        Derivation { ring: self.ring.clone(), coefficients }
    }

    pub fn mul_polynomial(&self, p: &Polynomial) -> Derivation {
        let coefficients = self.coefficients.iter().map(|c| c.mul(p)).collect();
        Derivation { ring: self.ring.clone(), coefficients }
    }

    /// Whether `xi(g)` lies in the ideal for every generator `g`.
    pub fn is_tangent(&self, ideal: &Ideal) -> Result<bool> {
        if ideal.generators().is_empty() {
            return Ok(true);
        }
        let gb = buchberger(ideal, MonomialOrder::default())?;
        Ok(ideal.generators().iter().all(|g| normal_form(&self.apply(g), &gb).is_zero()))
    }

    /// Fail with a diagnostic naming the first generator that is not preserved.
    pub fn check_tangent(&self, ideal: &Ideal) -> Result<()> {
        if ideal.generators().is_empty() {
            return Ok(());
        }
        let gb = buchberger(ideal, MonomialOrder::default())?;
        for g in ideal.generators() {
            let image = self.apply(g);
            if !normal_form(&image, &gb).is_zero() {
                return Err(Error::NotTangent(format!("{self} sends {g} to {image}, outside the ideal")));
            }
        }
        Ok(())
    }
}

impl fmt::Display for Derivation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let names = self.ring.names();
        let mut first = true;
        for (c, name) in self.coefficients.iter().zip(names) {
            if c.is_zero() {
                continue;
            }
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            if c.num_terms() == 1 {
                write!(f, "{c}*d/d{name}")?;
            } else {
                write!(f, "({c})*d/d{name}")?;
            }
        }
        if first {
            write!(f, "0")?;
        }
        Ok(())
    }
}
