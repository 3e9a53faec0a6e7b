use std::collections::{BTreeMap, HashMap};
use std::fmt;

use num_traits::Zero;

use super::matrix::{LinearMap, Rref, Vector};
use crate::error::{Error, Result};
use crate::groebner::MonomialOrder;
use crate::ring::{monomials_of_weight, AffineScene, Monomial, Polynomial};
use crate::Rational;

/// Largest absolute weight for which graded pieces are computed.
pub const MAX_WEIGHT: i64 = 256;

/// A basis element `monomial * e_generator` of a free module.
pub type Label = (Monomial, usize);

/// Sparse element of a free module.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct FreeElement(BTreeMap<Label, Rational>);

impl FreeElement {
    pub fn new() -> Self {
        FreeElement(BTreeMap::new())
    }

    pub fn basis(m: Monomial, generator: usize) -> Self {
        let mut e = FreeElement::new();
        e.add_term((m, generator), Rational::from_integer(1.into()));
        e
    }

    /// `p * e_generator`.
    pub fn from_polynomial(p: &Polynomial, generator: usize) -> Self {
        let mut e = FreeElement::new();
        for (m, c) in p.terms() {
            e.add_term((m.clone(), generator), c.clone());
        }
        e
    }

    pub fn add_term(&mut self, label: Label, c: Rational) {
        use std::collections::btree_map::Entry;
        if c.is_zero() {
            return;
        }
        match self.0.entry(label) {
            Entry::Vacant(v) => {
                v.insert(c);
            }
            Entry::Occupied(mut o) => {
                *o.get_mut() += c;
                if o.get().is_zero() {
                    o.remove();
                }
            }
        }
    }

    pub fn add_scaled(&mut self, other: &FreeElement, c: &Rational) {
        if c.is_zero() {
            return;
        }
        for (l, v) in &other.0 {
            self.add_term(l.clone(), v * c);
        }
    }

    /// Multiply by `c * m` in the coefficient ring.
    pub fn mul_monomial(&self, m: &Monomial, c: &Rational) -> FreeElement {
        let mut out = FreeElement::new();
        if c.is_zero() {
            return out;
        }
        for ((t, g), v) in &self.0 {
            out.add_term((t.mul(m), *g), v * c);
        }
        out
    }

    pub fn mul_polynomial(&self, p: &Polynomial) -> FreeElement {
        let mut out = FreeElement::new();
        for (m, c) in p.terms() {
            out.add_scaled(&self.mul_monomial(m, &Rational::from_integer(1.into())), c);
        }
        out
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Label, &Rational)> {
        self.0.iter()
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_empty()
    }
}

/// One generator of a presented module, with its weight (which may be negative).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Generator {
    pub label: String,
    pub weight: i64,
}

/// A weighted-homogeneous relation `sum p_g e_g`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Relation {
    weight: i64,
    element: FreeElement,
}

impl Relation {
    pub fn weight(&self) -> i64 {
        self.weight
    }

    pub fn element(&self) -> &FreeElement {
        &self.element
    }
}

/// A finitely presented graded module over `O_Y`: free on the generators,
/// modulo the listed relations and the scene's ideal times every generator.
#[derive(Clone, Debug)]
pub struct PresentedModule {
    scene: AffineScene,
    generators: Vec<Generator>,
    relations: Vec<Relation>,
}

impl PresentedModule {
    pub fn new(scene: &AffineScene, generators: Vec<Generator>) -> Self {
        PresentedModule { scene: scene.clone(), generators, relations: Vec::new() }
    }

    /// `O_Y` itself: one generator of weight zero.
    pub fn structure_sheaf(scene: &AffineScene) -> Self {
        PresentedModule::new(scene, vec![Generator { label: "1".into(), weight: 0 }])
    }

    /// Free module of the given generator weights.
    pub fn free(scene: &AffineScene, weights: &[i64]) -> Self {
        let gens = weights.iter().enumerate().map(|(i, &w)| Generator { label: format!("e{i}"), weight: w }).collect();
        PresentedModule::new(scene, gens)
    }

    /// Add a relation given as `(generator, coefficient)` pairs.
    pub fn with_relation(mut self, entries: Vec<(usize, Polynomial)>) -> Result<Self> {
        self.add_relation(entries)?;
        Ok(self)
    }

    pub fn add_relation(&mut self, entries: Vec<(usize, Polynomial)>) -> Result<()> {
        let mut weight = None;
        let mut element = FreeElement::new();
        for (g, p) in entries {
            if g >= self.generators.len() {
                return Err(Error::IndexOutOfRange { index: g, len: self.generators.len() });
            }
            if p.is_zero() {
                continue;
            }
            let w = p.homogeneous_degree()? + self.generators[g].weight;
            if weight.is_some_and(|x| x != w) {
                return Err(Error::Inhomogeneous(format!("relation mixes weights {} and {w}", weight.unwrap())));
            }
            weight = Some(w);
            element.add_scaled(&FreeElement::from_polynomial(&p, g), &Rational::from_integer(1.into()));
        }
        if let Some(weight) = weight {
            if !element.is_zero() {
                self.relations.push(Relation { weight, element });
            }
        }
        Ok(())
    }

    pub(crate) fn push_relation_element(&mut self, weight: i64, element: FreeElement) {
        if !element.is_zero() {
            self.relations.push(Relation { weight, element });
        }
    }

    pub fn scene(&self) -> &AffineScene {
        &self.scene
    }

    pub fn generators(&self) -> &[Generator] {
        &self.generators
    }

    pub fn relations(&self) -> &[Relation] {
        &self.relations
    }

    /// Same presentation over a different scene (same ambient ring).
    pub fn over_scene(&self, scene: &AffineScene) -> Self {
        PresentedModule { scene: scene.clone(), generators: self.generators.clone(), relations: self.relations.clone() }
    }

    /// Same module with the relations listed in a different order.
    pub fn with_relations_permuted(&self, perm: &[usize]) -> Self {
        let relations = perm.iter().map(|&i| self.relations[i].clone()).collect();
        PresentedModule { scene: self.scene.clone(), generators: self.generators.clone(), relations }
    }

    pub fn min_generator_weight(&self) -> Option<i64> {
        self.generators.iter().map(|g| g.weight).min()
    }

    pub fn label_of(&self, label: &Label) -> String {
        let (m, g) = label;
        let names = self.scene.ring().names();
        let gen = &self.generators[*g].label;
        if m.is_one() {
            gen.clone()
        } else if gen == "1" {
            m.display_with(names).to_string()
        } else {
            format!("{}*{}", m.display_with(names), gen)
        }
    }

    /// The weight-`d` piece: monomial multiples of generators of total weight
    /// `d`, modulo the weight-`d` slice of the relations and of `I * M`.
    pub fn piece(&self, d: i64) -> Result<GradedPiece> {
        if d.abs() > MAX_WEIGHT {
            return Err(Error::DegreeBound(format!("weight {d} exceeds the supported bound {MAX_WEIGHT}")));
        }
        let ring = self.scene.ring();
        let weights = ring.weights();
        let order = MonomialOrder::WeightedDegRevLex;
        let mut free: Vec<Label> = Vec::new();
        for (g, gen) in self.generators.iter().enumerate() {
            let mut monomials = monomials_of_weight(weights, d - gen.weight);
            monomials.sort_by(|a, b| order.compare(a, b, weights).reverse());
            free.extend(monomials.into_iter().map(|m| (m, g)));
        }
        let position: HashMap<Label, usize> = free.iter().cloned().enumerate().map(|(i, l)| (l, i)).collect();
        let mut rref = Rref::new(free.len());
        let dense = |e: &FreeElement| -> Vector {
            let mut v = vec![Rational::zero(); free.len()];
            for (l, c) in e.terms() {
                v[position[l]] += c;
            }
            v
        };
        let one = Rational::from_integer(1.into());
        if !free.is_empty() {
            for rel in &self.relations {
                for m in monomials_of_weight(weights, d - rel.weight) {
                    rref.insert(dense(&rel.element.mul_monomial(&m, &one)));
                }
            }
            for h in self.scene.ideal().generators() {
                let e = h.homogeneous_degree()?;
                for (g, gen) in self.generators.iter().enumerate() {
                    for m in monomials_of_weight(weights, d - e - gen.weight) {
                        let elem = FreeElement::from_polynomial(&h.mul_monomial(&m, &one), g);
                        rref.insert(dense(&elem));
                    }
                }
            }
        }
        let basis: Vec<usize> = (0..free.len()).filter(|&c| !rref.is_pivot(c)).collect();
        let labels = basis.iter().map(|&c| self.label_of(&free[c])).collect();
        Ok(GradedPiece { weight: d, free, position, relations: rref, basis, labels })
    }

    /// Matrix of a map defined on free basis elements, from `source` (a piece
    /// of this module) to `target` (a piece of `target_module`).
    pub fn matrix_of<F>(&self, source: &GradedPiece, target: &GradedPiece, mut image: F) -> Result<LinearMap>
    where
        F: FnMut(&Label) -> Result<FreeElement>,
    {
        let mut columns = Vec::with_capacity(source.dim());
        for label in source.basis_labels() {
            columns.push(target.reduce(&image(label)?)?);
        }
        Ok(LinearMap::from_columns(source.labels().to_vec(), target.labels().to_vec(), columns))
    }
}

/// Weighted piece of a presented module, with a reduction map from free
/// coordinates to coordinates on a quotient basis.
#[derive(Clone, Debug)]
pub struct GradedPiece {
    weight: i64,
    free: Vec<Label>,
    position: HashMap<Label, usize>,
    relations: Rref,
    basis: Vec<usize>,
    labels: Vec<String>,
}

impl GradedPiece {
    pub fn weight(&self) -> i64 {
        self.weight
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn free_dim(&self) -> usize {
        self.free.len()
    }

    /// Free basis elements whose classes form the quotient basis.
    pub fn basis_labels(&self) -> impl Iterator<Item = &Label> {
        self.basis.iter().map(|&c| &self.free[c])
    }

    pub fn basis_label(&self, k: usize) -> &Label {
        &self.free[self.basis[k]]
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    /// Coordinates of the class of `e` in the quotient basis. Every term of
    /// `e` must have this piece's weight.
    pub fn reduce(&self, e: &FreeElement) -> Result<Vector> {
        let mut v = vec![Rational::zero(); self.free.len()];
        for (l, c) in e.terms() {
            let Some(&i) = self.position.get(l) else {
                return Err(Error::InvariantViolation(format!(
                    "term {l:?} does not belong to the weight-{} piece",
                    self.weight
                )));
            };
            v[i] += c;
        }
        let r = self.relations.reduce(&v);
        Ok(self.basis.iter().map(|&c| r[c].clone()).collect())
    }

    /// Whether `e` vanishes in the quotient.
    pub fn is_zero_class(&self, e: &FreeElement) -> Result<bool> {
        Ok(self.reduce(e)?.iter().all(Zero::is_zero))
    }

    /// Representative of a coordinate vector as a free element.
    pub fn lift(&self, coords: &[Rational]) -> FreeElement {
        let mut e = FreeElement::new();
        for (k, c) in coords.iter().enumerate() {
            e.add_term(self.free[self.basis[k]].clone(), c.clone());
        }
        e
    }
}

impl fmt::Display for GradedPiece {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "weight {}: [{}]", self.weight, self.labels.join(", "))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ring::{parse_polynomial, Ideal, WeightedRing};

    fn cusp() -> AffineScene {
        let r = WeightedRing::new(vec!["x", "y"], vec![2, 3]).unwrap();
        let f = parse_polynomial("x^3 - y^2", &r).unwrap();
        AffineScene::new(r.clone(), Ideal::new(&r, vec![f]).unwrap()).unwrap()
    }

    /// Kähler differentials of the cusp: dx (weight 2), dy (weight 3), modulo df.
    fn omega1(scene: &AffineScene) -> PresentedModule {
        let r = scene.ring();
        let gens = vec![Generator { label: "dx".into(), weight: 2 }, Generator { label: "dy".into(), weight: 3 }];
        PresentedModule::new(scene, gens)
            .with_relation(vec![
                (0, parse_polynomial("3*x^2", r).unwrap()),
                (1, parse_polynomial("-2*y", r).unwrap()),
            ])
            .unwrap()
    }

    #[test]
    fn kahler_pieces_of_cusp() {
        let m = omega1(&cusp());
        assert_eq!(m.piece(2).unwrap().dim(), 1);
        // weight 6: x^2 dx, y dy modulo 3x^2 dx - 2y dy
        assert_eq!(m.piece(6).unwrap().dim(), 1);
        assert_eq!(m.piece(1).unwrap().dim(), 0);
    }

    #[test]
    fn affine_line_forms() {
        let r = WeightedRing::new(vec!["x"], vec![1]).unwrap();
        let s = AffineScene::affine_space(r);
        let m = PresentedModule::new(&s, vec![Generator { label: "dx".into(), weight: 1 }]);
        for d in 1..10 {
            assert_eq!(m.piece(d).unwrap().dim(), 1);
        }
        assert_eq!(m.piece(0).unwrap().dim(), 0);
    }

    #[test]
    fn relation_order_does_not_matter() {
        let s = cusp();
        let r = s.ring().clone();
        let m = omega1(&s)
            .with_relation(vec![(0, parse_polynomial("y", &r).unwrap()), (1, parse_polynomial("-x", &r).unwrap())])
            .unwrap();
        let p = m.with_relations_permuted(&[1, 0]);
        for d in 0..16 {
            assert_eq!(m.piece(d).unwrap().dim(), p.piece(d).unwrap().dim());
        }
    }

    #[test]
    fn weight_bound_is_enforced() {
        let m = PresentedModule::structure_sheaf(&cusp());
        assert!(matches!(m.piece(MAX_WEIGHT + 1), Err(Error::DegreeBound(_))));
    }

    #[test]
    fn inhomogeneous_relation_rejected() {
        let s = cusp();
        let r = s.ring().clone();
        let err = PresentedModule::free(&s, &[0, 0])
            .with_relation(vec![(0, parse_polynomial("x", &r).unwrap()), (1, parse_polynomial("y", &r).unwrap())])
            .unwrap_err();
        assert!(matches!(err, Error::Inhomogeneous(_)));
    }
}
