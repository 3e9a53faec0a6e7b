use std::sync::Arc;

use crate::error::{Error, Result};

#[derive(Debug, PartialEq, Eq)]
struct RingData {
    names: Vec<String>,
    weights: Vec<i64>,
}

/// Polynomial ring over the rationals with positive integer variable weights.
/// Cheap to clone; two rings are equal when names and weights agree.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WeightedRing(Arc<RingData>);

impl WeightedRing {
    pub fn new<S: Into<String>>(names: Vec<S>, weights: Vec<i64>) -> Result<Self> {
        let names: Vec<String> = names.into_iter().map(Into::into).collect();
        if names.len() != weights.len() {
            return Err(Error::InvalidRing(format!(
                "{} variables but {} weights",
                names.len(),
                weights.len()
            )));
        }
        if let Some(w) = weights.iter().find(|&&w| w <= 0) {
            return Err(Error::InvalidRing(format!("weight {w} is not positive")));
        }
        for (i, name) in names.iter().enumerate() {
            if !is_identifier(name) {
                return Err(Error::InvalidRing(format!("`{name}` is not a valid variable name")));
            }
            if names[..i].contains(name) {
                return Err(Error::InvalidRing(format!("duplicate variable `{name}`")));
            }
        }
        Ok(WeightedRing(Arc::new(RingData { names, weights })))
    }

    /// `n` variables `x1..xn` of weight one.
    pub fn affine(n: usize) -> Self {
        let names: Vec<String> = (1..=n).map(|i| format!("x{i}")).collect();
        WeightedRing::new(names, vec![1; n]).expect("generated names are valid")
    }

    pub fn nvars(&self) -> usize {
        self.0.names.len()
    }

    pub fn names(&self) -> &[String] {
        &self.0.names
    }

    pub fn weights(&self) -> &[i64] {
        &self.0.weights
    }

    pub fn index_of(&self, name: &str) -> Option<usize> {
        self.0.names.iter().position(|n| n == name)
    }

    pub fn total_weight(&self) -> i64 {
        self.0.weights.iter().sum()
    }

    pub fn min_weight(&self) -> Option<i64> {
        self.0.weights.iter().copied().min()
    }

    pub fn max_weight(&self) -> Option<i64> {
        self.0.weights.iter().copied().max()
    }

    /// Same ring with variables listed in `perm` order (`perm[k]` is the old index).
    pub fn permuted(&self, perm: &[usize]) -> Result<Self> {
        let names = perm.iter().map(|&i| self.0.names[i].clone()).collect();
        let weights = perm.iter().map(|&i| self.0.weights[i]).collect();
        WeightedRing::new(names, weights)
    }
}

pub(crate) fn is_identifier(s: &str) -> bool {
    let mut chars = s.chars();
    matches!(chars.next(), Some(c) if c.is_ascii_alphabetic())
        && chars.all(|c| c.is_ascii_alphanumeric() || c == '_')
}
