use std::fmt;

use super::polynomial::{Polynomial, WeightedDegree};
use super::weighted::WeightedRing;
use crate::error::{Error, Result};

/// Ideal given by generators. Zero generators are dropped, so an empty
/// generator list is the zero ideal.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Ideal {
    ring: WeightedRing,
    generators: Vec<Polynomial>,
}

impl Ideal {
    pub fn new(ring: &WeightedRing, generators: Vec<Polynomial>) -> Result<Self> {
        for g in &generators {
            if g.ring() != ring {
                return Err(Error::Invalid(format!("generator `{g}` lives in a different ring")));
            }
        }
        let mut kept: Vec<Polynomial> = Vec::new();
        for g in generators {
            if !g.is_zero() && !kept.contains(&g) {
                kept.push(g);
            }
        }
        Ok(Ideal { ring: ring.clone(), generators: kept })
    }

    pub fn zero(ring: &WeightedRing) -> Self {
        Ideal { ring: ring.clone(), generators: Vec::new() }
    }

    pub fn unit(ring: &WeightedRing) -> Self {
        Ideal { ring: ring.clone(), generators: vec![Polynomial::one(ring)] }
    }

    /// The ideal generated by all variables.
    pub fn maximal(ring: &WeightedRing) -> Self {
        let gens = (0..ring.nvars()).map(|i| Polynomial::var(ring, i)).collect();
        Ideal { ring: ring.clone(), generators: gens }
    }

    pub fn ring(&self) -> &WeightedRing {
        &self.ring
    }

    pub fn generators(&self) -> &[Polynomial] {
        &self.generators
    }

    pub fn is_zero(&self) -> bool {
        self.generators.is_empty()
    }

    pub fn is_homogeneous(&self) -> bool {
        self.generators
            .iter()
            .all(|g| matches!(g.weighted_degree(), Ok(WeightedDegree::Homogeneous(_))))
    }

    pub fn sum(&self, other: &Ideal) -> Result<Ideal> {
        let mut gens = self.generators.clone();
        gens.extend(other.generators.iter().cloned());
        Ideal::new(&self.ring, gens)
    }

    /// Generators of the `r`-th power: all products of `r` generators.
    /// The zeroth power is the unit ideal.
    pub fn power(&self, r: u32) -> Ideal {
        let mut gens = vec![Polynomial::one(&self.ring)];
        for _ in 0..r {
            let mut next: Vec<Polynomial> = Vec::new();
            for g in &self.generators {
                for h in &gens {
                    let p = h.mul(g);
                    if !next.contains(&p) {
                        next.push(p);
                    }
                }
            }
            gens = next;
        }
        Ideal::new(&self.ring, gens).expect("same ring")
    }

    /// Smallest weighted degree among generators, if any.
    pub fn min_generator_weight(&self) -> Option<i64> {
        self.generators.iter().filter_map(|g| g.homogeneous_degree().ok()).min()
    }
}

/// An affine variety `Y = V(I)` inside weighted affine space.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AffineScene {
    ring: WeightedRing,
    ideal: Ideal,
}

impl AffineScene {
    /// Build a scene, rejecting generators that are not weighted-homogeneous.
    pub fn new(ring: WeightedRing, ideal: Ideal) -> Result<Self> {
        if ideal.ring() != &ring {
            return Err(Error::Invalid("ideal lives in a different ring".into()));
        }
        for g in ideal.generators() {
            if let WeightedDegree::Inhomogeneous = g.weighted_degree()? {
                let degrees: Vec<i64> = g.terms().keys().map(|m| m.weighted_degree(ring.weights())).collect();
                return Err(Error::Inhomogeneous(format!("{g} (term weights {degrees:?})")));
            }
        }
        Ok(AffineScene { ring, ideal })
    }

    pub fn affine_space(ring: WeightedRing) -> Self {
        let ideal = Ideal::zero(&ring);
        AffineScene { ring, ideal }
    }

    pub fn ring(&self) -> &WeightedRing {
        &self.ring
    }

    pub fn ideal(&self) -> &Ideal {
        &self.ideal
    }

    /// Same ambient ring, different (homogeneous) ideal.
    pub fn with_ideal(&self, ideal: Ideal) -> Result<Self> {
        AffineScene::new(self.ring.clone(), ideal)
    }

    /// Relabel variables: `perm[k]` is the old index of the new k-th variable.
    pub fn permuted(&self, perm: &[usize]) -> Result<Self> {
        let ring = self.ring.permuted(perm)?;
        let mut inverse = vec![0; perm.len()];
        for (new, &old) in perm.iter().enumerate() {
            inverse[old] = new;
        }
        let gens = self.ideal.generators().iter().map(|g| g.rename_into(&ring, &inverse)).collect();
        AffineScene::new(ring.clone(), Ideal::new(&ring, gens)?)
    }
}

impl fmt::Display for AffineScene {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let vars: Vec<String> =
            self.ring.names().iter().zip(self.ring.weights()).map(|(n, w)| format!("{n}:{w}")).collect();
        let gens: Vec<String> = self.ideal.generators().iter().map(|g| g.to_string()).collect();
        write!(f, "Q[{}]/({})", vars.join(", "), gens.join(", "))
    }
}
