use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

use super::de_rham::{lie_derivative_on_form, omega_module};
use super::exterior::{remove_at, subsets, wedge_front, wedge_label};
use super::{Direction, GradedComplex, Recipe};
use crate::error::{Error, Result};
use crate::euler::Derivation;
use crate::linalg::{rational, FreeElement, Generator, Label, PresentedModule};
use crate::ring::{AffineScene, Polynomial};

/// Modules with a built-in action of vector fields: `O` acts tautologically,
/// `Omega^i` by the Lie derivative.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum ModuleKind {
    Structure,
    Forms(usize),
}

impl ModuleKind {
    pub fn form_degree(self) -> usize {
        match self {
            ModuleKind::Structure => 0,
            ModuleKind::Forms(i) => i,
        }
    }

    pub fn module(self, scene: &AffineScene) -> Result<PresentedModule> {
        omega_module(scene, self.form_degree())
    }
}

impl fmt::Display for ModuleKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ModuleKind::Structure => write!(f, "O"),
            ModuleKind::Forms(i) => write!(f, "omega{i}"),
        }
    }
}

/// Spencer complex `M (x) ^k T -> ... -> M`, homologically indexed by `k`,
/// with differential
/// `m (x) xi_S -> sum_t (-1)^t xi_t.m (x) xi_(S-t)
///              + sum_(t<u) (-1)^(t+u) m (x) [xi_t, xi_u] ^ xi_(S-t-u)`
/// for the coordinate frame `xi_j = d/dx_j`.
///
/// Weights are twisted by `W = sum w_j` so that `m (x) xi_S` has weight
/// `wt(m) + W - w(S)`; the top term of `O` then carries the constants in
/// weight zero. Only ambient spaces (zero ideal) are supported, where the
/// coordinate fields form a basis of `T`.
pub fn build_spencer_of_module(scene: &AffineScene, kind: ModuleKind) -> Result<GradedComplex> {
    if !scene.ideal().generators().is_empty() {
        return Err(Error::Unsupported(
            "the Spencer complex of a module needs a frame of vector fields; only ambient spaces (zero ideal) are supported"
                .into(),
        ));
    }
    let ring = scene.ring().clone();
    let n = ring.nvars();
    let i = kind.form_degree();
    if i > n {
        return Err(Error::Invalid(format!("form degree {i} exceeds the dimension {n}")));
    }
    let module = kind.module(scene)?;
    let twist = ring.total_weight();
    let mut terms = BTreeMap::new();
    for k in 0..=n {
        let sets = subsets(n, k);
        let mut generators = Vec::new();
        for g in module.generators() {
            for s in &sets {
                let label = format!("{}|{}", g.label, wedge_label("D", ring.names(), s));
                let weight = g.weight + twist - s.iter().map(|&j| ring.weights()[j]).sum::<i64>();
                generators.push(Generator { label, weight });
            }
        }
        terms.insert(k as i64, PresentedModule::new(scene, generators));
    }
    let frame: Vec<Derivation> = (0..n).map(|j| Derivation::partial(&ring, j)).collect();
    let differential = Arc::new(move |k: i64, label: &Label| -> Result<FreeElement> {
        let k = k as usize;
        let (mono, gen) = label;
        let sets = subsets(n, k);
        let targets = subsets(n, k - 1);
        let lower = subsets(n, k.saturating_sub(2));
        let (g, si) = (gen / sets.len(), gen % sets.len());
        let set = &sets[si];
        let one = rational(1);
        let mut out = FreeElement::new();
        for t in 0..k {
            let (sign, rest) = remove_at(set, t);
            let ti = targets.binary_search(&rest).expect("subset present");
            let acted = lie_derivative_on_form(&frame[set[t]], i, &(mono.clone(), g))?;
            for ((m, h), c) in acted.terms() {
                out.add_term((m.clone(), h * targets.len() + ti), c * rational(sign));
            }
        }
        for t in 0..k {
            for u in t + 1..k {
                let bracket = frame[set[t]].bracket(&frame[set[u]]);
                let (s1, rest) = remove_at(set, u);
                let (s2, rest) = remove_at(&rest, t);
                debug_assert!(lower.binary_search(&rest).is_ok());
                // (-1)^(t+u) after removing u then t: s1 * s2 = (-1)^(u+t)
                for (l, c) in bracket.coefficients().iter().enumerate() {
                    let Some((s3, target)) = wedge_front(l, &rest) else { continue };
                    if c.is_zero() {
                        continue;
                    }
                    let ti = targets.binary_search(&target).expect("subset present");
                    let coeff: Polynomial = c.mul_monomial(mono, &rational(s1 * s2 * s3));
                    let e = FreeElement::from_polynomial(&coeff, g * targets.len() + ti);
                    out.add_scaled(&e, &one);
                }
            }
        }
        Ok(out)
    });
    Ok(GradedComplex::new(
        format!("Spencer({kind})"),
        Direction::Homological,
        scene,
        terms,
        differential,
        Recipe::Spencer { kind },
    ))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::complexes::homology_table;
    use crate::ring::{parse_polynomial, Ideal, WeightedRing};

    #[test]
    fn structure_sheaf_on_the_line() {
        let s = AffineScene::affine_space(WeightedRing::affine(1));
        let t = homology_table(&build_spencer_of_module(&s, ModuleKind::Structure).unwrap(), 8).unwrap();
        assert_eq!(t.nonzero().collect::<Vec<_>>(), vec![((1, 0), 1)]);
    }

    #[test]
    fn structure_sheaf_on_weighted_plane() {
        let s = AffineScene::affine_space(WeightedRing::new(vec!["x", "y"], vec![2, 3]).unwrap());
        let t = homology_table(&build_spencer_of_module(&s, ModuleKind::Structure).unwrap(), 10).unwrap();
        assert_eq!(t.nonzero().collect::<Vec<_>>(), vec![((2, 0), 1)]);
    }

    #[test]
    fn one_forms_on_the_line() {
        let s = AffineScene::affine_space(WeightedRing::affine(1));
        let t = homology_table(&build_spencer_of_module(&s, ModuleKind::Forms(1)).unwrap(), 8).unwrap();
        // dx (x) D_x survives in weight 1; the bottom spot Omega^1 is exhausted
        assert_eq!(t.nonzero().collect::<Vec<_>>(), vec![((1, 1), 1)]);
    }

    #[test]
    fn singular_scene_rejected() {
        let r = WeightedRing::new(vec!["x", "y"], vec![2, 3]).unwrap();
        let f = parse_polynomial("x^3 - y^2", &r).unwrap();
        let s = AffineScene::new(r.clone(), Ideal::new(&r, vec![f]).unwrap()).unwrap();
        assert!(matches!(build_spencer_of_module(&s, ModuleKind::Structure), Err(Error::Unsupported(_))));
    }
}
