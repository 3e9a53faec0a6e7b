//! Graded chain complexes built degreewise from presented modules, and their
//! homology tables.

mod de_rham;
pub(crate) mod exterior;
mod koszul;
mod spencer;

use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::sync::{Arc, Mutex};

use num_traits::Zero;

use crate::error::{Error, Result};
use crate::linalg::{rank_kernel_image, FreeElement, GradedPiece, Label, LinearMap, PresentedModule, Rref, Vector};
use crate::ring::{AffineScene, Polynomial};
use crate::Rational;

pub use de_rham::{build_de_rham, build_jet_complex, jet_scene, omega_module, JetScene};
pub(crate) use de_rham::{interior_product_on_form, lie_derivative_on_form};
pub use koszul::{build_koszul, build_koszul_of_module};
pub use spencer::{build_spencer_of_module, ModuleKind};

/// Whether differentials lower (`Homological`) or raise (`Cohomological`)
/// the index.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Direction {
    Homological,
    Cohomological,
}

impl Direction {
    pub fn step(self) -> i64 {
        match self {
            Direction::Homological => -1,
            Direction::Cohomological => 1,
        }
    }
}

/// How a complex was produced, so that it can be rebuilt over a scene with a
/// larger ideal (used by completion towers).
#[derive(Clone, Debug)]
pub enum Recipe {
    Koszul { module: PresentedModule, elements: Vec<Polynomial> },
    DeRham,
    Jet { base: AffineScene, order: u32 },
    Spencer { kind: ModuleKind },
    FilteredSpencer { order: u32 },
    Other,
}

pub(crate) type DifferentialFn = dyn Fn(i64, &Label) -> Result<FreeElement> + Send + Sync;

type PieceCache = HashMap<(i64, i64), Arc<GradedPiece>>;

/// A complex whose terms are presented graded modules over one scene. The
/// differential is given on free basis elements and preserves weight.
#[derive(Clone)]
pub struct GradedComplex {
    name: String,
    direction: Direction,
    scene: AffineScene,
    terms: BTreeMap<i64, PresentedModule>,
    differential: Arc<DifferentialFn>,
    recipe: Recipe,
    cache: Arc<Mutex<PieceCache>>,
}

impl fmt::Debug for GradedComplex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("GradedComplex")
            .field("name", &self.name)
            .field("direction", &self.direction)
            .field("indices", &self.indices())
            .finish()
    }
}

impl GradedComplex {
    pub(crate) fn new(
        name: impl Into<String>,
        direction: Direction,
        scene: &AffineScene,
        terms: BTreeMap<i64, PresentedModule>,
        differential: Arc<DifferentialFn>,
        recipe: Recipe,
    ) -> Self {
        GradedComplex {
            name: name.into(),
            direction,
            scene: scene.clone(),
            terms,
            differential,
            recipe,
            cache: Arc::new(Mutex::new(HashMap::new())),
        }
    }

    /// The complex with no terms.
    pub fn zero(scene: &AffineScene, direction: Direction) -> Self {
        GradedComplex::new("zero", direction, scene, BTreeMap::new(), Arc::new(|_, _| Ok(FreeElement::new())), Recipe::Other)
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn direction(&self) -> Direction {
        self.direction
    }

    pub fn scene(&self) -> &AffineScene {
        &self.scene
    }

    pub fn recipe(&self) -> &Recipe {
        &self.recipe
    }

    pub fn indices(&self) -> Vec<i64> {
        self.terms.keys().copied().collect()
    }

    pub fn term(&self, index: i64) -> Option<&PresentedModule> {
        self.terms.get(&index)
    }

    pub fn target_index(&self, index: i64) -> i64 {
        index + self.direction.step()
    }

    pub fn source_index(&self, index: i64) -> i64 {
        index - self.direction.step()
    }

    /// Smallest weight that can carry a nonzero piece.
    pub fn min_weight(&self) -> i64 {
        self.terms.values().filter_map(PresentedModule::min_generator_weight).min().unwrap_or(0)
    }

    /// Weight-`d` piece of the term at `index` (empty outside the range).
    pub fn piece(&self, index: i64, d: i64) -> Result<Arc<GradedPiece>> {
        if let Some(p) = self.cache.lock().expect("cache lock").get(&(index, d)) {
            return Ok(p.clone());
        }
        let piece = match self.terms.get(&index) {
            Some(m) => m.piece(d)?,
            None => PresentedModule::new(&self.scene, Vec::new()).piece(d)?,
        };
        let piece = Arc::new(piece);
        self.cache.lock().expect("cache lock").insert((index, d), piece.clone());
        Ok(piece)
    }

    /// Image of a free basis element of the term at `index`.
    pub fn apply_differential(&self, index: i64, label: &Label) -> Result<FreeElement> {
        if !self.terms.contains_key(&self.target_index(index)) {
            return Ok(FreeElement::new());
        }
        (self.differential)(index, label)
    }

    /// Matrix of the differential out of the `(index, d)` piece.
    pub fn differential_matrix(&self, index: i64, d: i64) -> Result<LinearMap> {
        let source = self.piece(index, d)?;
        let target = self.piece(self.target_index(index), d)?;
        let mut columns = Vec::with_capacity(source.dim());
        for label in source.basis_labels() {
            columns.push(target.reduce(&self.apply_differential(index, label)?)?);
        }
        Ok(LinearMap::from_columns(source.labels().to_vec(), target.labels().to_vec(), columns))
    }

    /// Fail if the composite of the differentials out of `(index, d)` is not
    /// exactly zero.
    pub fn check_square_zero(&self, index: i64, d: i64) -> Result<()> {
        let first = self.differential_matrix(index, d)?;
        let second = self.differential_matrix(self.target_index(index), d)?;
        if !second.compose(&first).is_zero() {
            return Err(Error::InvariantViolation(format!(
                "{}: d^2 is nonzero on index {index}, weight {d}",
                self.name
            )));
        }
        Ok(())
    }

    /// Kernel and boundaries at `(index, d)`, with coordinates on homology.
    pub fn homology_space(&self, index: i64, d: i64) -> Result<HomologySpace> {
        let dim = self.piece(index, d)?.dim();
        let out = self.differential_matrix(index, d)?;
        let incoming = self.differential_matrix(self.source_index(index), d)?;
        Ok(HomologySpace::new(dim, &rank_kernel_image(&out).kernel, &rank_kernel_image(&incoming).image))
    }
}

/// `ker / im` at one position, with a chosen basis of representatives.
#[derive(Clone, Debug)]
pub struct HomologySpace {
    representatives: Vec<Vector>,
    rref: Rref,
    boundaries: usize,
}

impl HomologySpace {
    fn new(ambient: usize, kernel: &[Vector], image: &[Vector]) -> Self {
        // Boundaries first, then kernel vectors that are new modulo them.
        let mut probe = Rref::new(ambient);
        for b in image {
            probe.insert(b.clone());
        }
        let mut representatives = Vec::new();
        for k in kernel {
            if probe.insert(k.clone()) {
                representatives.push(k.clone());
            }
        }
        let family: Vec<&Vector> = image.iter().chain(&representatives).collect();
        let mut rref = Rref::with_tags(ambient, family.len());
        for (i, v) in family.iter().enumerate() {
            let mut tag = vec![Rational::zero(); family.len()];
            tag[i] = Rational::from_integer(1.into());
            rref.insert_tagged((*v).clone(), tag);
        }
        HomologySpace { representatives, rref, boundaries: image.len() }
    }

    pub fn dim(&self) -> usize {
        self.representatives.len()
    }

    pub fn representatives(&self) -> &[Vector] {
        &self.representatives
    }

    /// Coordinates of the class of a cycle; `None` if `v` is not a cycle.
    pub fn class_of(&self, v: &[Rational]) -> Option<Vector> {
        self.rref.decompose(v).map(|c| c[self.boundaries..].to_vec())
    }
}

/// Homology dimensions per `(index, weight)` up to a weight bound.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HomologyTable {
    direction: Direction,
    indices: Vec<i64>,
    min_weight: i64,
    degree_bound: i64,
    entries: BTreeMap<(i64, i64), usize>,
    chain_dims: BTreeMap<(i64, i64), usize>,
}

impl HomologyTable {
    pub fn new(direction: Direction, indices: Vec<i64>, min_weight: i64, degree_bound: i64) -> Self {
        HomologyTable { direction, indices, min_weight, degree_bound, entries: BTreeMap::new(), chain_dims: BTreeMap::new() }
    }

    pub fn direction(&self) -> Direction {
        self.direction
    }

    pub fn indices(&self) -> &[i64] {
        &self.indices
    }

    pub fn min_weight(&self) -> i64 {
        self.min_weight
    }

    pub fn degree_bound(&self) -> i64 {
        self.degree_bound
    }

    pub fn weights(&self) -> std::ops::RangeInclusive<i64> {
        self.min_weight..=self.degree_bound
    }

    pub fn get(&self, index: i64, weight: i64) -> usize {
        self.entries.get(&(index, weight)).copied().unwrap_or(0)
    }

    pub fn chain_dim(&self, index: i64, weight: i64) -> usize {
        self.chain_dims.get(&(index, weight)).copied().unwrap_or(0)
    }

    pub(crate) fn set(&mut self, index: i64, weight: i64, dim: usize) {
        if dim > 0 {
            self.entries.insert((index, weight), dim);
        } else {
            self.entries.remove(&(index, weight));
        }
    }

    pub(crate) fn set_chain_dim(&mut self, index: i64, weight: i64, dim: usize) {
        if dim > 0 {
            self.chain_dims.insert((index, weight), dim);
        }
    }

    /// Nonzero entries as `((index, weight), dim)`.
    pub fn nonzero(&self) -> impl Iterator<Item = ((i64, i64), usize)> + '_ {
        self.entries.iter().map(|(k, v)| (*k, *v))
    }

    pub fn is_zero(&self) -> bool {
        self.entries.is_empty()
    }

    /// `sum (-1)^i dim C^i_d - sum (-1)^i dim H^i_d` for every weight; all
    /// zero for a correct computation.
    pub fn euler_defects(&self) -> Vec<(i64, i64)> {
        let sign = |i: i64| if i.rem_euclid(2) == 0 { 1 } else { -1 };
        self.weights()
            .filter_map(|d| {
                let chains: i64 = self.indices.iter().map(|&i| sign(i) * self.chain_dim(i, d) as i64).sum();
                let homology: i64 = self.indices.iter().map(|&i| sign(i) * self.get(i, d) as i64).sum();
                (chains != homology).then_some((d, chains - homology))
            })
            .collect()
    }

    /// Same nonzero entries on the weights both tables cover.
    pub fn agrees_with(&self, other: &HomologyTable) -> bool {
        let lo = self.min_weight.max(other.min_weight);
        let hi = self.degree_bound.min(other.degree_bound);
        let restrict = |t: &HomologyTable| -> BTreeMap<(i64, i64), usize> {
            t.entries.iter().filter(|((_, d), _)| (lo..=hi).contains(d)).map(|(k, v)| (*k, *v)).collect()
        };
        restrict(self) == restrict(other)
    }

    /// Nested map `index -> weight -> dim` with string keys; every index is
    /// listed, weights only when nonzero.
    pub fn to_json(&self) -> serde_json::Value {
        let mut out = serde_json::Map::new();
        for &i in &self.indices {
            let mut row = serde_json::Map::new();
            for ((j, d), v) in &self.entries {
                if *j == i {
                    row.insert(d.to_string(), serde_json::Value::from(*v));
                }
            }
            out.insert(i.to_string(), serde_json::Value::Object(row));
        }
        serde_json::Value::Object(out)
    }
}

impl fmt::Display for HomologyTable {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let letter = match self.direction {
            Direction::Homological => "H_",
            Direction::Cohomological => "H^",
        };
        for &i in &self.indices {
            let row: Vec<String> = self
                .entries
                .iter()
                .filter(|((j, _), _)| *j == i)
                .map(|((_, d), v)| format!("{d}: {v}"))
                .collect();
            writeln!(f, "{letter}{i}  {{{}}}", row.join(", "))?;
        }
        Ok(())
    }
}

/// Homology of every `(index, weight)` with weight in
/// `[c.min_weight(), bound]`, verifying `d^2 = 0` along the way.
pub fn homology_table(c: &GradedComplex, bound: i64) -> Result<HomologyTable> {
    let indices = c.indices();
    let mut table = HomologyTable::new(c.direction(), indices.clone(), c.min_weight().min(bound), bound);
    for d in c.min_weight()..=bound {
        let mut ranks = HashMap::new();
        let mut maps = HashMap::new();
        for &i in &indices {
            let m = c.differential_matrix(i, d)?;
            ranks.insert(i, m.rank());
            maps.insert(i, m);
        }
        for &i in &indices {
            let t = c.target_index(i);
            if let Some(next) = maps.get(&t) {
                if !next.compose(&maps[&i]).is_zero() {
                    return Err(Error::InvariantViolation(format!(
                        "{}: d^2 is nonzero on index {i}, weight {d}",
                        c.name()
                    )));
                }
            }
        }
        for &i in &indices {
            let dim = c.piece(i, d)?.dim();
            let incoming = ranks.get(&c.source_index(i)).copied().unwrap_or(0);
            let h = dim - ranks[&i] - incoming;
            if dim > 0 {
                table.chain_dims.insert((i, d), dim);
            }
            table.set(i, d, h);
        }
    }
    if let Some((d, defect)) = table.euler_defects().first() {
        return Err(Error::InvariantViolation(format!(
            "{}: Euler characteristic off by {defect} in weight {d}",
            c.name()
        )));
    }
    Ok(table)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ring::WeightedRing;

    #[test]
    fn zero_complex_has_empty_table() {
        let s = AffineScene::affine_space(WeightedRing::affine(2));
        let t = homology_table(&GradedComplex::zero(&s, Direction::Homological), 8).unwrap();
        assert!(t.is_zero());
        assert!(t.indices().is_empty());
        assert_eq!(t.to_json(), serde_json::json!({}));
    }
}
