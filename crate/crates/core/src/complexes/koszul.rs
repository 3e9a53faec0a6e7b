use std::collections::BTreeMap;
use std::sync::Arc;

use super::exterior::{remove_at, subsets};
use super::{Direction, GradedComplex, Recipe};
use crate::error::Result;
use crate::linalg::{rational, FreeElement, Generator, PresentedModule};
use crate::ring::{AffineScene, Polynomial};

/// Koszul complex of `elements` over `O_Y`: term `k` is the `k`-th exterior
/// power of the free module on the elements, with
/// `d(e_S) = sum_t (-1)^t f_{s_t} e_{S - s_t}`.
pub fn build_koszul(scene: &AffineScene, elements: &[Polynomial]) -> Result<GradedComplex> {
    build_koszul_of_module(&PresentedModule::structure_sheaf(scene), elements)
}

/// `M (x) Kos(f_1, ..., f_m)` for a presented module `M`.
pub fn build_koszul_of_module(module: &PresentedModule, elements: &[Polynomial]) -> Result<GradedComplex> {
    let scene = module.scene().clone();
    let weights: Vec<i64> = elements.iter().map(Polynomial::homogeneous_degree).collect::<Result<_>>()?;
    let m = elements.len();
    let mut terms = BTreeMap::new();
    let mut layouts = Vec::new();
    for k in 0..=m {
        let sets = subsets(m, k);
        let mut generators = Vec::new();
        for g in module.generators() {
            for s in &sets {
                let wedge: Vec<String> = s.iter().map(|j| format!("e{}", j + 1)).collect();
                let label = match (g.label.as_str(), wedge.is_empty()) {
                    (_, true) => g.label.clone(),
                    ("1", false) => wedge.join("^"),
                    (gl, false) => format!("{gl}*{}", wedge.join("^")),
                };
                generators.push(Generator { label, weight: g.weight + s.iter().map(|&j| weights[j]).sum::<i64>() });
            }
        }
        let mut term = PresentedModule::new(&scene, generators);
        for rel in module.relations() {
            for (si, s) in sets.iter().enumerate() {
                let mut e = FreeElement::new();
                for ((mono, g), c) in rel.element().terms() {
                    e.add_term((mono.clone(), g * sets.len() + si), c.clone());
                }
                term.push_relation_element(rel.weight() + s.iter().map(|&j| weights[j]).sum::<i64>(), e);
            }
        }
        terms.insert(k as i64, term);
        layouts.push(sets);
    }
    let elements_owned = elements.to_vec();
    let layouts = Arc::new(layouts);
    let differential = Arc::new(move |k: i64, label: &crate::linalg::Label| -> Result<FreeElement> {
        let (mono, gen) = label;
        let k = k as usize;
        let sets = &layouts[k];
        let (g, si) = (gen / sets.len(), gen % sets.len());
        let target_sets = &layouts[k - 1];
        let mut out = FreeElement::new();
        for t in 0..k {
            let (sign, rest) = remove_at(&sets[si], t);
            let ti = target_sets.binary_search(&rest).expect("subset present");
            let f = elements_owned[sets[si][t]].mul_monomial(mono, &rational(sign));
            out.add_scaled(&FreeElement::from_polynomial(&f, g * target_sets.len() + ti), &rational(1));
        }
        Ok(out)
    });
    Ok(GradedComplex::new(
        "koszul",
        Direction::Homological,
        &scene,
        terms,
        differential,
        Recipe::Koszul { module: module.clone(), elements: elements.to_vec() },
    ))
}
