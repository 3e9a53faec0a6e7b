use std::collections::BTreeMap;
use std::sync::Arc;

use super::limits::{vector_tower_limit, LimitReport, VectorTower};
use crate::complexes::{
    build_de_rham, build_jet_complex, build_koszul_of_module, build_spencer_of_module, homology_table, Direction,
    GradedComplex, HomologyTable, Recipe,
};
use crate::dmod::filtered_spencer_on;
use crate::error::{Error, Result};
use crate::linalg::{FreeElement, Label, LinearMap, PresentedModule};
use crate::ring::{AffineScene, Ideal};

pub(crate) type TransitionFn = dyn Fn(usize, i64, &Label) -> Result<FreeElement> + Send + Sync;

/// Inverse system of complexes `C_1 <- C_2 <- ... <- C_R` with chain maps
/// given on free basis elements.
#[derive(Clone)]
pub struct Tower {
    name: String,
    ideal: Ideal,
    stages: Vec<GradedComplex>,
    transition: Arc<TransitionFn>,
    /// Reported index is `index_sign * k` for the stage index `k`.
    index_sign: i64,
}

impl std::fmt::Debug for Tower {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("Tower").field("name", &self.name).field("stages", &self.stages.len()).finish()
    }
}

impl Tower {
    pub(crate) fn new(
        name: impl Into<String>,
        ideal: &Ideal,
        stages: Vec<GradedComplex>,
        transition: Arc<TransitionFn>,
        index_sign: i64,
    ) -> Self {
        Tower { name: name.into(), ideal: ideal.clone(), stages, transition, index_sign }
    }

    /// Tower whose transitions send each free basis element to itself,
    /// reduced in the smaller stage.
    pub(crate) fn by_reduction(name: impl Into<String>, ideal: &Ideal, stages: Vec<GradedComplex>) -> Self {
        let transition = Arc::new(|_: usize, _: i64, label: &Label| {
            Ok(FreeElement::basis(label.0.clone(), label.1))
        });
        Tower::new(name, ideal, stages, transition, 1)
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn ideal(&self) -> &Ideal {
        &self.ideal
    }

    pub fn len(&self) -> usize {
        self.stages.len()
    }

    pub fn is_empty(&self) -> bool {
        self.stages.is_empty()
    }

    /// Stage `r`, 1-based.
    pub fn stage(&self, r: usize) -> &GradedComplex {
        &self.stages[r - 1]
    }

    fn stage_index(&self, reported: i64) -> i64 {
        reported * self.index_sign
    }

    /// Reported indices (stage indices times the index sign), ascending.
    pub fn indices(&self) -> Vec<i64> {
        let mut v: Vec<i64> = self.stages.first().map_or(Vec::new(), |c| c.indices()).iter().map(|k| k * self.index_sign).collect();
        v.sort_unstable();
        v
    }

    pub fn min_weight(&self) -> i64 {
        self.stages.iter().map(GradedComplex::min_weight).min().unwrap_or(0)
    }

    /// Transition from stage `r + 1` to stage `r` on the `(index, d)` piece
    /// (stage indexing).
    fn transition_matrix_raw(&self, r: usize, k: i64, d: i64) -> Result<LinearMap> {
        let source = self.stage(r + 1).piece(k, d)?;
        let target = self.stage(r).piece(k, d)?;
        let mut columns = Vec::with_capacity(source.dim());
        for label in source.basis_labels() {
            columns.push(target.reduce(&(self.transition)(r, k, label)?)?);
        }
        Ok(LinearMap::from_columns(source.labels().to_vec(), target.labels().to_vec(), columns))
    }

    /// Transition from stage `r + 1` to stage `r` on a piece, with the
    /// reported index.
    pub fn transition_matrix(&self, r: usize, index: i64, d: i64) -> Result<LinearMap> {
        self.transition_matrix_raw(r, self.stage_index(index), d)
    }

    /// Pieces `(r, index, weight)` where a transition fails to commute with
    /// the differentials.
    pub fn chain_map_violations(&self, bound: i64) -> Result<Vec<(usize, i64, i64)>> {
        let mut out = Vec::new();
        for r in 1..self.len() {
            let upper = self.stage(r + 1);
            let lower = self.stage(r);
            for k in upper.indices() {
                for d in self.min_weight()..=bound {
                    let t_here = self.transition_matrix_raw(r, k, d)?;
                    let t_next = self.transition_matrix_raw(r, upper.target_index(k), d)?;
                    let a = lower.differential_matrix(k, d)?.compose(&t_here);
                    let b = t_next.compose(&upper.differential_matrix(k, d)?);
                    if !a.same_matrix(&b) {
                        out.push((r, k * self.index_sign, d));
                    }
                }
            }
        }
        Ok(out)
    }

    /// Homology table of stage `r` with reported indices.
    pub fn stage_table(&self, r: usize, bound: i64) -> Result<HomologyTable> {
        let table = homology_table(self.stage(r), bound)?;
        if self.index_sign == 1 {
            return Ok(table);
        }
        let direction = match table.direction() {
            Direction::Homological => Direction::Cohomological,
            Direction::Cohomological => Direction::Homological,
        };
        let mut out = HomologyTable::new(direction, self.indices(), table.min_weight(), bound);
        for &k in table.indices() {
            for d in table.weights() {
                out.set(k * self.index_sign, d, table.get(k, d));
                out.set_chain_dim(k * self.index_sign, d, table.chain_dim(k, d));
            }
        }
        Ok(out)
    }

    /// The tower of homology groups at one `(index, weight)`.
    pub fn homology_tower(&self, index: i64, d: i64) -> Result<VectorTower> {
        let k = self.stage_index(index);
        let spaces = self.stages.iter().map(|c| c.homology_space(k, d)).collect::<Result<Vec<_>>>()?;
        let mut maps = Vec::new();
        for r in 1..self.len() {
            let t = self.transition_matrix_raw(r, k, d)?;
            let (src, dst) = (&spaces[r], &spaces[r - 1]);
            let columns = src
                .representatives()
                .iter()
                .map(|v| {
                    dst.class_of(&t.apply(v)).ok_or_else(|| {
                        Error::InvariantViolation(format!("{}: transition does not preserve cycles", self.name))
                    })
                })
                .collect::<Result<Vec<_>>>()?;
            let labels = |n: usize| (0..n).map(|i| format!("h{i}")).collect::<Vec<_>>();
            maps.push(LinearMap::from_columns(labels(src.dim()), labels(dst.dim()), columns));
        }
        VectorTower::new(spaces.iter().map(|s| s.dim()).collect(), maps)
    }
}

/// `lim` and `lim^1` of the homology towers at every `(index, weight)` with
/// weight up to the bound.
pub fn tower_limit(t: &Tower, bound: i64) -> Result<LimitReport> {
    let mut entries = BTreeMap::new();
    let indices = t.indices();
    for &i in &indices {
        for d in t.min_weight()..=bound {
            entries.insert((i, d), vector_tower_limit(&t.homology_tower(i, d)?));
        }
    }
    Ok(LimitReport { indices, min_weight: t.min_weight(), bound, entries })
}

fn check_completion_ideal(ideal: &Ideal) -> Result<()> {
    if !ideal.is_homogeneous() {
        return Err(Error::Inhomogeneous("completion ideal".into()));
    }
    Ok(())
}

fn check_stage_count(stages: usize) -> Result<()> {
    if stages == 0 {
        return Err(Error::Invalid("a tower needs at least one stage".into()));
    }
    Ok(())
}

/// Scene whose ideal is the original ideal plus `J^r`.
pub(crate) fn stage_scene(scene: &AffineScene, ideal: &Ideal, r: u32) -> Result<AffineScene> {
    if ideal.ring() != scene.ring() {
        return Err(Error::Invalid("the completion ideal lives in a different ring".into()));
    }
    scene.with_ideal(scene.ideal().sum(&ideal.power(r))?)
}

/// Stages `M / J^r M`, `r = 1..R`, as one-term complexes, with the natural
/// surjections. A unit ideal gives the zero tower; the only weight-zero
/// homogeneous elements are constants.
pub fn adic_tower(module: &PresentedModule, ideal: &Ideal, stages: usize) -> Result<Tower> {
    check_completion_ideal(ideal)?;
    check_stage_count(stages)?;
    let mut out = Vec::new();
    for r in 1..=stages {
        let scene = stage_scene(module.scene(), ideal, r as u32)?;
        let mut terms = BTreeMap::new();
        terms.insert(0, module.over_scene(&scene));
        out.push(GradedComplex::new(
            format!("M/J^{r}M"),
            Direction::Homological,
            &scene,
            terms,
            Arc::new(|_, _| Ok(FreeElement::new())),
            Recipe::Other,
        ));
    }
    Ok(Tower::by_reduction("adic", ideal, out))
}

/// Rebuild a complex over its scene with `extra` added to the ideal (for jet
/// complexes `extra` lives in the base ring).
pub fn rebuild_with_ideal(c: &GradedComplex, extra: &Ideal) -> Result<GradedComplex> {
    let widen = |scene: &AffineScene| -> Result<AffineScene> {
        if extra.ring() != scene.ring() {
            return Err(Error::Invalid("the completion ideal lives in a different ring".into()));
        }
        scene.with_ideal(scene.ideal().sum(extra)?)
    };
    match c.recipe() {
        Recipe::Koszul { module, elements } => {
            build_koszul_of_module(&module.over_scene(&widen(module.scene())?), elements)
        }
        Recipe::DeRham => build_de_rham(&widen(c.scene())?),
        Recipe::Jet { base, order } => build_jet_complex(&widen(base)?, *order),
        Recipe::Spencer { kind } => build_spencer_of_module(&widen(c.scene())?, *kind),
        Recipe::FilteredSpencer { order } => filtered_spencer_on(&widen(c.scene())?, *order),
        Recipe::Other => Err(Error::Unsupported(format!("{} cannot be rebuilt over another scene", c.name()))),
    }
}

/// Stage `r` is the same construction over the scene with `J^r` added to its
/// ideal, so forms pick up the relations `d(J^r)` and every term is reduced
/// modulo `J^r`. Transitions are the natural surjections.
pub fn completed_complex(c: &GradedComplex, ideal: &Ideal, stages: usize) -> Result<Tower> {
    check_completion_ideal(ideal)?;
    check_stage_count(stages)?;
    let mut out = Vec::new();
    for r in 1..=stages {
        out.push(rebuild_with_ideal(c, &ideal.power(r as u32))?);
    }
    Ok(Tower::by_reduction(format!("completed {}", c.name()), ideal, out))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::complexes::build_koszul;
    use crate::ring::{parse_polynomial, Polynomial, WeightedRing};

    fn ideal(r: &WeightedRing, gens: &[&str]) -> Ideal {
        Ideal::new(r, gens.iter().map(|g| parse_polynomial(g, r).unwrap()).collect()).unwrap()
    }

    #[test]
    fn adic_tower_of_the_line() {
        let r = WeightedRing::new(vec!["x"], vec![1]).unwrap();
        let s = AffineScene::affine_space(r.clone());
        let t = adic_tower(&PresentedModule::structure_sheaf(&s), &ideal(&r, &["x"]), 8).unwrap();
        for stage in 1..=8 {
            let table = t.stage_table(stage, 8).unwrap();
            for d in 0..=8 {
                assert_eq!(table.get(0, d), usize::from(d < stage as i64), "stage {stage} weight {d}");
            }
        }
        let limits = tower_limit(&t, 5).unwrap();
        for d in 0..=5 {
            let e = limits.entry(0, d).unwrap();
            assert_eq!(e.lim, Some(1));
            assert_eq!(e.stable_from, Some(d as usize + 1));
        }
        assert!(t.chain_map_violations(6).unwrap().is_empty());
    }

    #[test]
    fn adic_tower_of_the_cusp_ideal() {
        let r = WeightedRing::new(vec!["x", "y"], vec![2, 3]).unwrap();
        let s = AffineScene::affine_space(r.clone());
        let t = adic_tower(&PresentedModule::structure_sheaf(&s), &ideal(&r, &["x^3 - y^2"]), 3).unwrap();
        assert_eq!(t.stage_table(1, 12).unwrap().get(0, 6), 1);
        assert_eq!(t.stage_table(2, 12).unwrap().get(0, 6), 2);
    }

    #[test]
    fn unit_ideal_gives_zero_towers() {
        let r = WeightedRing::affine(2);
        let s = AffineScene::affine_space(r.clone());
        let unit = Ideal::new(&r, vec![Polynomial::one(&r)]).unwrap();
        let t = adic_tower(&PresentedModule::structure_sheaf(&s), &unit, 3).unwrap();
        assert!((1..=3).all(|k| t.stage_table(k, 6).unwrap().is_zero()));
        let c = completed_complex(&build_de_rham(&s).unwrap(), &unit, 3).unwrap();
        assert!((1..=3).all(|k| c.stage_table(k, 6).unwrap().is_zero()));
    }

    #[test]
    fn completing_koszul_along_a_variable_is_constant() {
        let r = WeightedRing::new(vec!["x", "y"], vec![1, 1]).unwrap();
        let s = AffineScene::affine_space(r.clone());
        let k = build_koszul(&s, &[Polynomial::var(&r, 0), Polynomial::var(&r, 1)]).unwrap();
        let t = completed_complex(&k, &ideal(&r, &["x"]), 4).unwrap();
        for stage in 1..=4 {
            let table = t.stage_table(stage, 6).unwrap();
            let h0: Vec<_> = table.nonzero().filter(|((i, _), _)| *i == 0).collect();
            assert_eq!(h0, vec![((0, 0), 1)], "stage {stage}");
        }
        assert!(t.chain_map_violations(4).unwrap().is_empty());
        let limits = tower_limit(&t, 4).unwrap();
        assert_eq!(limits.lim(0, 0), Some(1));
    }
}
