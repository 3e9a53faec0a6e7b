use std::collections::BTreeMap;
use std::sync::Arc;

use super::limits::LimitReport;
use super::tower::{completed_complex, stage_scene, tower_limit, Tower};
use crate::complexes::exterior::subsets;
use crate::complexes::{build_koszul_of_module, homology_table};
use crate::error::{Error, Result};
use crate::groebner::{buchberger, normal_form, MonomialOrder};
use crate::linalg::{FreeElement, Label, PresentedModule};
use crate::ring::{Ideal, Polynomial};

/// Tower of `M (x) Kos(f_1^r, ..., f_t^r)`, `r = 1..R`, with transitions
/// `e_S -> (prod_(i in S) f_i) e_S` from stage `r + 1` to stage `r`.
/// Indices are reported cohomologically: the Koszul term `k` sits at `-k`.
pub fn koszul_power_tower(module: &PresentedModule, ideal: &Ideal, stages: usize) -> Result<Tower> {
    if stages == 0 {
        return Err(Error::Invalid("a tower needs at least one stage".into()));
    }
    let elements = ideal.generators().to_vec();
    for f in &elements {
        if f.homogeneous_degree()? <= 0 {
            return Err(Error::Invalid(format!("completion needs positive-weight generators, got {f}")));
        }
    }
    let mut out = Vec::new();
    for r in 1..=stages {
        let powers: Vec<Polynomial> = elements.iter().map(|f| f.pow(r as u32)).collect();
        out.push(build_koszul_of_module(module, &powers)?);
    }
    let t = elements.len();
    let transition = Arc::new(move |_: usize, k: i64, label: &Label| -> Result<FreeElement> {
        let (mono, gen) = label;
        let sets = subsets(t, k as usize);
        let set = &sets[gen % sets.len()];
        let ring = elements.first().map(Polynomial::ring).expect("nonempty when k > 0 or trivial");
        let mut factor = Polynomial::monomial(ring, mono.clone());
        for &i in set {
            factor = factor.mul(&elements[i]);
        }
        Ok(FreeElement::from_polynomial(&factor, *gen))
    });
    if ideal.generators().is_empty() {
        // Kos of the empty sequence is M itself in index 0; identity transitions.
        let identity = Arc::new(|_: usize, _: i64, label: &Label| Ok(FreeElement::basis(label.0.clone(), label.1)));
        return Ok(Tower::new("derived completion", ideal, out, identity, -1));
    }
    Ok(Tower::new("derived completion", ideal, out, transition, -1))
}

/// Derived completion of a module: the Koszul power tower and its limits.
#[derive(Clone, Debug)]
pub struct DerivedCompletion {
    pub tower: Tower,
    pub limits: LimitReport,
}

pub fn derived_completion(module: &PresentedModule, ideal: &Ideal, stages: usize, bound: i64) -> Result<DerivedCompletion> {
    let tower = koszul_power_tower(module, ideal, stages)?;
    let limits = tower_limit(&tower, bound)?;
    Ok(DerivedCompletion { tower, limits })
}

/// Check of `H_0` of the Koszul complex of `J` on `F`, completed along `I`.
#[derive(Clone, Debug)]
pub struct CompletedKoszulReport {
    /// `(stage, weight) -> (H_0 dimension, dimension of F / (I^r + J) F)`.
    pub stage_h0: BTreeMap<(usize, i64), (usize, usize)>,
    /// Positive-index homology vanishes at every stage and weight.
    pub higher_homology_vanishes: bool,
    /// No generator of `J` lies in `I`.
    pub generators_disjoint: bool,
    pub limits: LimitReport,
}

impl CompletedKoszulReport {
    pub fn h0_matches(&self) -> bool {
        self.stage_h0.values().all(|(a, b)| a == b)
    }

    pub fn to_json(&self) -> serde_json::Value {
        let mut stages = serde_json::Map::new();
        for ((r, d), (got, expected)) in &self.stage_h0 {
            let row = stages.entry(r.to_string()).or_insert_with(|| serde_json::Value::Object(Default::default()));
            row.as_object_mut().expect("object").insert(d.to_string(), serde_json::json!([got, expected]));
        }
        serde_json::json!({
            "stage_h0": stages,
            "h0_matches": self.h0_matches(),
            "higher_homology_vanishes": self.higher_homology_vanishes,
            "generators_disjoint": self.generators_disjoint,
            "limits": self.limits.to_json(),
        })
    }
}

pub fn completed_koszul_h0(
    f: &PresentedModule,
    along: &Ideal,
    j: &Ideal,
    stages: usize,
    bound: i64,
) -> Result<CompletedKoszulReport> {
    let koszul = build_koszul_of_module(f, j.generators())?;
    let tower = completed_complex(&koszul, along, stages)?;
    let mut stage_h0 = BTreeMap::new();
    let mut higher_homology_vanishes = true;
    for r in 1..=stages {
        let table = homology_table(tower.stage(r), bound)?;
        let quotient_scene = stage_scene(f.scene(), along, r as u32)?;
        let quotient_scene = quotient_scene.with_ideal(quotient_scene.ideal().sum(j)?)?;
        let quotient = f.over_scene(&quotient_scene);
        for d in table.weights() {
            stage_h0.insert((r, d), (table.get(0, d), quotient.piece(d)?.dim()));
            higher_homology_vanishes &= table.indices().iter().filter(|&&i| i > 0).all(|&i| table.get(i, d) == 0);
        }
    }
    let generators_disjoint = if along.generators().is_empty() {
        true
    } else {
        let gb = buchberger(along, MonomialOrder::default())?;
        j.generators().iter().all(|g| !normal_form(g, &gb).is_zero())
    };
    let limits = tower_limit(&tower, bound)?;
    Ok(CompletedKoszulReport { stage_h0, higher_homology_vanishes, generators_disjoint, limits })
}
