use std::collections::BTreeMap;

use super::Derivation;
use crate::complexes::{homology_table, omega_module, GradedComplex, Recipe};
use crate::complexes::{interior_product_on_form, lie_derivative_on_form};
use crate::error::{Error, Result};
use crate::linalg::{FreeElement, Generator, LinearMap, PresentedModule};
use crate::ring::{AffineScene, Polynomial, WeightedRing};
use crate::Rational;

/// The Euler field `sum w_i x_i d/dx_i`, checked to satisfy `Xi(g) = deg(g) g`
/// for every ideal generator.
pub fn euler_derivation(scene: &AffineScene) -> Result<Derivation> {
    let ring = scene.ring();
    let coefficients = ring
        .weights()
        .iter()
        .enumerate()
        .map(|(i, &w)| Polynomial::var(ring, i).scale(&Rational::from_integer(w.into())))
        .collect();
    let xi = Derivation::new(ring, coefficients)?;
    for g in scene.ideal().generators() {
        let deg = g.homogeneous_degree()?;
        if xi.apply(g) != g.scale(&Rational::from_integer(deg.into())) {
            return Err(Error::NotTangent(format!("Euler field does not scale {g} by its weight {deg}")));
        }
    }
    Ok(xi)
}

fn require_forms(c: &GradedComplex, xi: &Derivation) -> Result<()> {
    if !matches!(c.recipe(), Recipe::DeRham | Recipe::Jet { .. }) {
        return Err(Error::Unsupported(format!("{} is not a complex of differential forms", c.name())));
    }
    if xi.ring() != c.scene().ring() {
        return Err(Error::Invalid(format!("the vector field does not live on the ring of {}", c.name())));
    }
    Ok(())
}

fn field_weight(xi: &Derivation) -> Result<i64> {
    Ok(xi.weight()?.unwrap_or(0))
}

fn operator_matrix<F>(c: &GradedComplex, from: (i64, i64), to: (i64, i64), mut image: F) -> Result<LinearMap>
where
    F: FnMut(&crate::linalg::Label) -> Result<FreeElement>,
{
    let source = c.piece(from.0, from.1)?;
    let target = c.piece(to.0, to.1)?;
    let mut columns = Vec::with_capacity(source.dim());
    for label in source.basis_labels() {
        columns.push(target.reduce(&image(label)?)?);
    }
    Ok(LinearMap::from_columns(source.labels().to_vec(), target.labels().to_vec(), columns))
}

/// Matrix of `L_xi` from the `(i, d)` piece to `(i, d + weight(xi))`.
pub fn lie_derivative(c: &GradedComplex, xi: &Derivation, i: i64, d: i64) -> Result<LinearMap> {
    require_forms(c, xi)?;
    let w = field_weight(xi)?;
    operator_matrix(c, (i, d), (i, d + w), |label| lie_derivative_on_form(xi, i as usize, label))
}

/// Matrix of `i_xi` from the `(i, d)` piece to `(i - 1, d + weight(xi))`.
pub fn interior_product(c: &GradedComplex, xi: &Derivation, i: i64, d: i64) -> Result<LinearMap> {
    require_forms(c, xi)?;
    if i < 1 {
        return Err(Error::Invalid(format!("interior product needs form degree at least 1, got {i}")));
    }
    let w = field_weight(xi)?;
    operator_matrix(c, (i, d), (i - 1, d + w), |label| Ok(interior_product_on_form(xi, i as usize, label)))
}

fn interior_or_zero(c: &GradedComplex, xi: &Derivation, i: i64, d: i64) -> Result<LinearMap> {
    if i < 1 || c.term(i).is_none() {
        let source = c.piece(i, d)?;
        let target = c.piece(i - 1, d + field_weight(xi)?)?;
        return Ok(LinearMap::zero(source.labels().to_vec(), target.labels().to_vec()));
    }
    interior_product(c, xi, i, d)
}

/// Outcome of checking `L = d i + i d` on every piece.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CartanReport {
    pub pieces_checked: usize,
    pub violations: Vec<(i64, i64)>,
    /// Pieces where `i_xi i_xi` or `[L_xi, d]` failed to vanish.
    pub side_violations: Vec<(i64, i64)>,
}

impl CartanReport {
    pub fn passed(&self) -> bool {
        self.violations.is_empty() && self.side_violations.is_empty()
    }
}

/// Verify `L_xi = d i_xi + i_xi d`, `i_xi i_xi = 0` and `L_xi d = d L_xi` as
/// exact matrix identities on every `(i, d)` with `d <= bound`.
pub fn cartan_check(c: &GradedComplex, xi: &Derivation, bound: i64) -> Result<CartanReport> {
    require_forms(c, xi)?;
    xi.check_tangent(c.scene().ideal())?;
    let w = field_weight(xi)?;
    let mut report = CartanReport { pieces_checked: 0, violations: Vec::new(), side_violations: Vec::new() };
    for i in c.indices() {
        for d in c.min_weight()..=bound {
            let lie = lie_derivative(c, xi, i, d)?;
            let iota = interior_or_zero(c, xi, i, d)?;
            let d_before = c.differential_matrix(i - 1, d + w)?;
            let d_here = c.differential_matrix(i, d)?;
            let iota_next = interior_or_zero(c, xi, i + 1, d)?;
            let cartan = d_before.compose(&iota).add(&iota_next.compose(&d_here));
            if !cartan.same_matrix(&lie) {
                report.violations.push((i, d));
            }
            let iota_twice = interior_or_zero(c, xi, i - 1, d + w)?.compose(&iota);
            let lie_next = lie_derivative(c, xi, i + 1, d)?;
            let d_shifted = c.differential_matrix(i, d + w)?;
            let commutator = lie_next.compose(&d_here).add(&d_shifted.compose(&lie).scale(&Rational::from_integer((-1).into())));
            if !iota_twice.is_zero() || !commutator.is_zero() {
                report.side_violations.push((i, d));
            }
            report.pieces_checked += 1;
        }
    }
    Ok(report)
}

/// One certified piece: `L_xi` is invertible there and
/// `h = i_xi L_xi^-1` satisfies `dh + hd = id`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CertifiedPiece {
    pub index: i64,
    pub weight: i64,
    pub dim: usize,
    pub homotopy_verified: bool,
    pub homology: usize,
}

/// Record of the contracting-homotopy argument on a complex of forms.
#[derive(Clone, Debug)]
pub struct AcyclicityCertificate {
    pub complex: String,
    pub scene: AffineScene,
    pub derivation: Derivation,
    pub indices: Vec<i64>,
    pub bound: i64,
    pub pieces: Vec<CertifiedPiece>,
}

impl AcyclicityCertificate {
    /// All homotopies verified and all certified homology groups zero.
    pub fn is_valid(&self) -> bool {
        self.pieces.iter().all(|p| p.homotopy_verified && p.homology == 0)
    }

    pub fn to_json(&self) -> serde_json::Value {
        let mut pieces = BTreeMap::new();
        for p in &self.pieces {
            let row = pieces.entry(p.index.to_string()).or_insert_with(serde_json::Map::new);
            row.insert(
                p.weight.to_string(),
                serde_json::json!({"dim": p.dim, "homotopy": p.homotopy_verified, "homology": p.homology}),
            );
        }
        serde_json::json!({
            "complex": self.complex,
            "derivation": self.derivation.to_string(),
            "indices": self.indices,
            "degree_bound": self.bound,
            "pieces": pieces,
            "valid": self.is_valid(),
        })
    }
}

/// Certificate over all form degrees `i >= 1`.
pub fn acyclicity_certificate(c: &GradedComplex, xi: &Derivation, bound: i64) -> Result<AcyclicityCertificate> {
    let indices: Vec<i64> = c.indices().into_iter().filter(|&i| i >= 1).collect();
    acyclicity_certificate_for(c, xi, bound, &indices)
}

/// Certificate over the given form degrees, each of which must be positive.
pub fn acyclicity_certificate_for(
    c: &GradedComplex,
    xi: &Derivation,
    bound: i64,
    indices: &[i64],
) -> Result<AcyclicityCertificate> {
    require_forms(c, xi)?;
    if let Some(&i) = indices.iter().find(|&&i| i < 1) {
        return Err(Error::Invalid(format!("the homotopy argument covers positive form degrees only, got {i}")));
    }
    if field_weight(xi)? != 0 {
        return Err(Error::Unsupported("the homotopy needs a weight-preserving vector field".into()));
    }
    let cartan = cartan_check(c, xi, bound)?;
    if !cartan.passed() {
        return Err(Error::InvariantViolation(format!(
            "Cartan identity fails on pieces {:?}",
            cartan.violations.iter().chain(&cartan.side_violations).collect::<Vec<_>>()
        )));
    }
    let table = homology_table(c, bound)?;
    let homotopy = |i: i64, d: i64| -> Result<LinearMap> {
        let lie = lie_derivative(c, xi, i, d)?;
        let inverse = lie.inverse().ok_or(Error::SingularLieDerivative { index: i, weight: d })?;
        Ok(interior_or_zero(c, xi, i, d)?.compose(&inverse))
    };
    let mut pieces = Vec::new();
    for &i in indices {
        for d in c.min_weight()..=bound {
            let dim = c.piece(i, d)?.dim();
            let h_here = homotopy(i, d)?;
            let h_next = homotopy(i + 1, d)?;
            let d_before = c.differential_matrix(i - 1, d)?;
            let d_here = c.differential_matrix(i, d)?;
            let total = d_before.compose(&h_here).add(&h_next.compose(&d_here));
            let identity = LinearMap::identity(c.piece(i, d)?.labels().to_vec());
            pieces.push(CertifiedPiece {
                index: i,
                weight: d,
                dim,
                homotopy_verified: total.same_matrix(&identity),
                homology: table.get(i, d),
            });
        }
    }
    Ok(AcyclicityCertificate {
        complex: c.name().to_string(),
        scene: c.scene().clone(),
        derivation: xi.clone(),
        indices: indices.to_vec(),
        bound,
        pieces,
    })
}

/// Per-weight result of contracting volume forms with polyvector fields.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PairingReport {
    pub n: usize,
    pub degree: usize,
    /// `(weight, source dim, target dim, bijective)`.
    pub pieces: Vec<(i64, usize, usize, bool)>,
}

impl PairingReport {
    pub fn is_isomorphism(&self) -> bool {
        self.pieces.iter().all(|p| p.3)
    }
}

/// Check that `omega (x) ^i T -> Omega^(n-i)`, `vol (x) D_S -> i_(D_S) vol`,
/// is bijective on every weight piece of `A^n` up to the bound.
pub fn contraction_pairing(n: usize, i: usize, bound: i64) -> Result<PairingReport> {
    if i > n {
        return Err(Error::IndexOutOfRange { index: i, len: n + 1 });
    }
    let ring = WeightedRing::affine(n);
    let scene = AffineScene::affine_space(ring.clone());
    let sets = crate::complexes::exterior::subsets(n, i);
    let total = ring.total_weight();
    let source = PresentedModule::new(
        &scene,
        sets.iter()
            .map(|s| Generator {
                label: format!("vol|{}", crate::complexes::exterior::wedge_label("D", ring.names(), s)),
                weight: total - s.len() as i64,
            })
            .collect(),
    );
    let target = omega_module(&scene, n - i)?;
    let fields: Vec<Derivation> = (0..n).map(|j| Derivation::partial(&ring, j)).collect();
    let mut pieces = Vec::new();
    for d in 0..=bound {
        let src = source.piece(d)?;
        let dst = target.piece(d)?;
        let map = source.matrix_of(&src, &dst, |(mono, g)| {
            // contract D_(s_1) first, then D_(s_2), ...
            let mut current = FreeElement::basis(mono.clone(), 0);
            for (step, &j) in sets[*g].iter().enumerate() {
                let degree = n - step;
                let mut next = FreeElement::new();
                for (label, c) in current.terms() {
                    next.add_scaled(&interior_product_on_form(&fields[j], degree, label), c);
                }
                current = next;
            }
            Ok(current)
        })?;
        let bijective = src.dim() == dst.dim() && map.rank() == src.dim();
        pieces.push((d, src.dim(), dst.dim(), bijective));
    }
    Ok(PairingReport { n, degree: i, pieces })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::complexes::{build_de_rham, build_jet_complex};
    use crate::ring::{parse_polynomial, Ideal};

    fn scene(names: Vec<&str>, weights: Vec<i64>, f: &str) -> AffineScene {
        let r = WeightedRing::new(names, weights).unwrap();
        let f = parse_polynomial(f, &r).unwrap();
        AffineScene::new(r.clone(), Ideal::new(&r, vec![f]).unwrap()).unwrap()
    }

    fn cusp() -> AffineScene {
        scene(vec!["x", "y"], vec![2, 3], "x^3 - y^2")
    }

    fn q(n: i64) -> Rational {
        Rational::from_integer(n.into())
    }

    #[test]
    fn euler_fields() {
        let xi = euler_derivation(&cusp()).unwrap();
        assert_eq!(xi.to_string(), "2*x*d/dx + 3*y*d/dy");
        let plane = AffineScene::affine_space(WeightedRing::new(vec!["x", "y"], vec![1, 1]).unwrap());
        assert_eq!(euler_derivation(&plane).unwrap().to_string(), "x*d/dx + y*d/dy");
    }

    #[test]
    fn lie_and_interior_on_cusp_forms() {
        let s = cusp();
        let c = build_de_rham(&s).unwrap();
        let xi = euler_derivation(&s).unwrap();
        // L(dx) = 2 dx
        let l = lie_derivative(&c, &xi, 1, 2).unwrap();
        assert_eq!(l.entries(), &[vec![q(2)]]);
        // i(dx) = 2x
        let i = interior_product(&c, &xi, 1, 2).unwrap();
        assert_eq!(i.entries(), &[vec![q(2)]]);
        // L(x^a y^b dx^dy) = (2a + 3b + 5) x^a y^b dx^dy
        for d in 5..14 {
            let l = lie_derivative(&c, &xi, 2, d).unwrap();
            let id = LinearMap::identity(l.source().to_vec()).scale(&q(d));
            assert!(l.same_matrix(&id));
        }
        // i(dx^dy) = 2x dy - 3y dx
        let i2 = interior_product(&c, &xi, 2, 5).unwrap();
        let target = c.piece(1, 5).unwrap();
        let mut image = FreeElement::from_polynomial(&parse_polynomial("2*x", s.ring()).unwrap(), 1);
        image.add_scaled(&FreeElement::from_polynomial(&parse_polynomial("-3*y", s.ring()).unwrap(), 0), &q(1));
        let expected = target.reduce(&image).unwrap();
        assert_eq!(i2.column(0), expected);
        assert!(interior_product(&c, &xi, 1, 5).unwrap().compose(&i2).is_zero());
        let l0 = lie_derivative(&c, &xi, 0, 0).unwrap();
        assert!(l0.is_zero());
        assert!(matches!(interior_product(&c, &xi, 0, 0), Err(Error::Invalid(_))));
    }

    #[test]
    fn cartan_identity_holds() {
        let plane = AffineScene::affine_space(WeightedRing::affine(2));
        let c = build_de_rham(&plane).unwrap();
        assert!(cartan_check(&c, &euler_derivation(&plane).unwrap(), 8).unwrap().passed());
        let s = cusp();
        let c = build_de_rham(&s).unwrap();
        assert!(cartan_check(&c, &euler_derivation(&s).unwrap(), 12).unwrap().passed());
        let zero = Derivation::zero(s.ring());
        assert!(cartan_check(&c, &zero, 8).unwrap().passed());
    }

    #[test]
    fn certificates() {
        let s = cusp();
        let c = build_de_rham(&s).unwrap();
        let cert = acyclicity_certificate(&c, &euler_derivation(&s).unwrap(), 12).unwrap();
        assert!(cert.is_valid());
        let e6 = scene(vec!["x", "y"], vec![4, 3], "x^3 + y^4");
        let c = build_de_rham(&e6).unwrap();
        assert!(acyclicity_certificate(&c, &euler_derivation(&e6).unwrap(), 12).unwrap().is_valid());
        assert!(matches!(
            acyclicity_certificate_for(&c, &euler_derivation(&e6).unwrap(), 4, &[0]),
            Err(Error::Invalid(_))
        ));
    }

    #[test]
    fn jet_certificate_on_cusp() {
        let s = cusp();
        let c = build_jet_complex(&s, 1).unwrap();
        let xi = euler_derivation(c.scene()).unwrap();
        assert!(acyclicity_certificate(&c, &xi, 8).unwrap().is_valid());
        let base_field = euler_derivation(&s).unwrap();
        assert!(matches!(cartan_check(&c, &base_field, 4), Err(Error::Invalid(_))));
    }

    #[test]
    fn zero_field_is_refused() {
        let s = cusp();
        let c = build_de_rham(&s).unwrap();
        let err = acyclicity_certificate(&c, &Derivation::zero(s.ring()), 6).unwrap_err();
        assert!(matches!(err, Error::SingularLieDerivative { .. }));
    }

    #[test]
    fn contraction_is_perfect_on_the_plane() {
        for i in 0..=2 {
            assert!(contraction_pairing(2, i, 6).unwrap().is_isomorphism());
        }
        let top = contraction_pairing(2, 2, 2).unwrap();
        assert_eq!(top.pieces[0], (0, 1, 1, true));
        assert!(contraction_pairing(2, 3, 2).is_err());
    }
}
