use std::collections::BTreeMap;
use std::sync::Arc;

use super::exterior::{remove_at, subsets, wedge_front, wedge_label};
use super::{Direction, GradedComplex, Recipe};
use crate::error::{Error, Result};
use crate::euler::Derivation;
use crate::linalg::{rational, FreeElement, Generator, Label, PresentedModule};
use crate::ring::{AffineScene, Ideal, Polynomial, WeightedRing};

/// Kähler `i`-forms of the scene: the `i`-th exterior power of the free
/// module on `dx_j`, modulo `dg ^ dx_T` for every ideal generator `g`.
pub fn omega_module(scene: &AffineScene, i: usize) -> Result<PresentedModule> {
    let ring = scene.ring();
    let n = ring.nvars();
    let weights = ring.weights();
    let sets = subsets(n, i);
    let generators = sets
        .iter()
        .map(|s| Generator { label: wedge_label("d", ring.names(), s), weight: s.iter().map(|&j| weights[j]).sum() })
        .collect();
    let mut module = PresentedModule::new(scene, generators);
    if i == 0 {
        return Ok(module);
    }
    for g in scene.ideal().generators() {
        let deg = g.homogeneous_degree()?;
        for t in subsets(n, i - 1) {
            let mut e = FreeElement::new();
            for j in 0..n {
                let Some((sign, s)) = wedge_front(j, &t) else { continue };
                let dg = g.partial_derivative(j)?;
                let idx = sets.binary_search(&s).expect("subset present");
                e.add_scaled(&FreeElement::from_polynomial(&dg, idx), &rational(sign));
            }
            module.push_relation_element(deg + t.iter().map(|&j| weights[j]).sum::<i64>(), e);
        }
    }
    Ok(module)
}

/// `d(m dx_S) = sum_j dm/dx_j dx_j ^ dx_S` on a free basis element of `Omega^i`.
pub(crate) fn exterior_derivative(ring: &WeightedRing, i: usize, label: &Label) -> FreeElement {
    let n = ring.nvars();
    let (mono, gen) = label;
    let set = &subsets(n, i)[*gen];
    let targets = subsets(n, i + 1);
    let mut out = FreeElement::new();
    for j in 0..n {
        let e = mono.exponents()[j];
        if e == 0 {
            continue;
        }
        let Some((sign, s)) = wedge_front(j, set) else { continue };
        let idx = targets.binary_search(&s).expect("subset present");
        let mut exps = mono.exponents().to_vec();
        exps[j] -= 1;
        out.add_term((crate::ring::Monomial::new(exps), idx), rational(sign * e as i64));
    }
    out
}

/// Lie derivative `L_xi(m dx_T) = xi(m) dx_T + m sum_t dx_T[t -> d xi_t]` on a
/// free basis element of `Omega^i`.
pub(crate) fn lie_derivative_on_form(xi: &Derivation, i: usize, label: &Label) -> Result<FreeElement> {
    let ring = xi.ring();
    let n = ring.nvars();
    let (mono, gen) = label;
    let sets = subsets(n, i);
    let set = &sets[*gen];
    let one = rational(1);
    let m = Polynomial::monomial(ring, mono.clone());
    let mut out = FreeElement::from_polynomial(&xi.apply(&m), *gen);
    for (t, &j) in set.iter().enumerate() {
        let (sign, rest) = remove_at(set, t);
        for k in 0..n {
            let Some((s2, target)) = wedge_front(k, &rest) else { continue };
            let c = xi.coefficients()[j].partial_derivative(k)?;
            if c.is_zero() {
                continue;
            }
            let idx = sets.binary_search(&target).expect("subset present");
            let coeff = c.mul_monomial(mono, &rational(sign * s2));
            out.add_scaled(&FreeElement::from_polynomial(&coeff, idx), &one);
        }
    }
    Ok(out)
}

/// Interior product `i_xi(m dx_T) = sum_t (-1)^t m xi_{T_t} dx_{T - T_t}`,
/// landing in `Omega^(i-1)`.
pub(crate) fn interior_product_on_form(xi: &Derivation, i: usize, label: &Label) -> FreeElement {
    let n = xi.ring().nvars();
    let (mono, gen) = label;
    let set = &subsets(n, i)[*gen];
    let targets = subsets(n, i.saturating_sub(1));
    let mut out = FreeElement::new();
    for (t, &j) in set.iter().enumerate() {
        let (sign, rest) = remove_at(set, t);
        let idx = targets.binary_search(&rest).expect("subset present");
        let coeff = xi.coefficients()[j].mul_monomial(mono, &rational(sign));
        out.add_scaled(&FreeElement::from_polynomial(&coeff, idx), &rational(1));
    }
    out
}

/// De Rham complex `Omega^0 -> Omega^1 -> ... -> Omega^n` of the scene.
pub fn build_de_rham(scene: &AffineScene) -> Result<GradedComplex> {
    forms_complex("de Rham", scene, Recipe::DeRham)
}

fn forms_complex(name: &str, scene: &AffineScene, recipe: Recipe) -> Result<GradedComplex> {
    let n = scene.ring().nvars();
    let mut terms = BTreeMap::new();
    for i in 0..=n {
        terms.insert(i as i64, omega_module(scene, i)?);
    }
    let ring = scene.ring().clone();
    let differential = Arc::new(move |i: i64, label: &Label| Ok(exterior_derivative(&ring, i as usize, label)));
    Ok(GradedComplex::new(name, Direction::Cohomological, scene, terms, differential, recipe))
}

/// The scene of `r`-jets along the diagonal: variables `x` and increments
/// `t = x' - x` of the same weights, modulo `I(x)`, `I(x + t)` and `(t)^(r+1)`.
#[derive(Clone, Debug)]
pub struct JetScene {
    pub base: AffineScene,
    pub order: u32,
    pub scene: AffineScene,
}

pub fn jet_scene(base: &AffineScene, r: u32) -> Result<JetScene> {
    let ring = base.ring();
    let n = ring.nvars();
    let mut names: Vec<String> = ring.names().to_vec();
    for name in ring.names() {
        let mut fresh = format!("{name}_jet");
        while names.contains(&fresh) {
            fresh.push('_');
        }
        names.push(fresh);
    }
    let mut weights = ring.weights().to_vec();
    weights.extend_from_slice(ring.weights());
    let jet_ring = WeightedRing::new(names, weights)?;
    let base_vars: Vec<usize> = (0..n).collect();
    let shifted: Vec<Polynomial> =
        (0..n).map(|j| Polynomial::var(&jet_ring, j).add(&Polynomial::var(&jet_ring, n + j))).collect();
    let mut generators = Vec::new();
    for g in base.ideal().generators() {
        generators.push(g.rename_into(&jet_ring, &base_vars));
        generators.push(g.substitute(&jet_ring, &shifted));
    }
    let increments = Ideal::new(&jet_ring, (0..n).map(|j| Polynomial::var(&jet_ring, n + j)).collect())?;
    generators.extend(increments.power(r + 1).generators().iter().cloned());
    let ideal = Ideal::new(&jet_ring, generators)?;
    Ok(JetScene { base: base.clone(), order: r, scene: AffineScene::new(jet_ring, ideal)? })
}

/// Jet complex of order `r`: the de Rham complex of the `r`-th
/// infinitesimal neighbourhood of the diagonal. Its degree-zero term is the
/// module of `r`-jets, and `r = 0` recovers the de Rham complex of the scene.
pub fn build_jet_complex(scene: &AffineScene, r: u32) -> Result<GradedComplex> {
    if r > 2 {
        return Err(Error::Unsupported(format!("jet order {r}; supported orders are 0, 1, 2")));
    }
    let jets = jet_scene(scene, r)?;
    forms_complex("jet", &jets.scene, Recipe::Jet { base: scene.clone(), order: r })
}
