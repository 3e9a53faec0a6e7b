//! Property tests for the structural invariants, on randomly generated
//! weighted-homogeneous ideals.

use proptest::prelude::*;

use spencerlab::completion::{adic_tower, derived_completion, tower_limit};
use spencerlab::complexes::{build_de_rham, build_jet_complex, homology_table, omega_module};
use spencerlab::euler::euler_derivation;
use spencerlab::groebner::{buchberger, normal_form, quotient_dimension_with_order, MonomialOrder};
use spencerlab::linalg::{derivation_module_piece, PresentedModule};
use spencerlab::ring::{
    graded_component_basis, in_ideal_degreewise, monomials_of_weight, parse_polynomial, AffineScene, Ideal, Monomial,
    Polynomial, WeightedRing,
};

const NAMES: [&str; 3] = ["x", "y", "z"];

fn ring(weights: &[i64]) -> WeightedRing {
    WeightedRing::new(NAMES[..weights.len()].to_vec(), weights.to_vec()).unwrap()
}

fn monomial_text(names: &[String], m: &Monomial) -> String {
    let factors: Vec<String> = m
        .exponents()
        .iter()
        .zip(names)
        .filter(|(e, _)| **e > 0)
        .map(|(e, n)| if *e == 1 { n.clone() } else { format!("{n}^{e}") })
        .collect();
    if factors.is_empty() {
        "1".into()
    } else {
        factors.join("*")
    }
}

/// Homogeneous polynomial of weight `d`: coefficients are laid over the
/// monomials of that weight in order, through the parser.
fn homogeneous(r: &WeightedRing, d: i64, coeffs: &[i64]) -> Polynomial {
    let monos = monomials_of_weight(r.weights(), d);
    let terms: Vec<String> = monos
        .iter()
        .zip(coeffs)
        .filter(|(_, c)| **c != 0)
        .map(|(m, c)| format!("({c})*{}", monomial_text(r.names(), m)))
        .collect();
    if terms.is_empty() {
        Polynomial::zero(r)
    } else {
        parse_polynomial(&terms.join(" + "), r).unwrap()
    }
}

/// Weights, then up to two generators given as (degree, coefficients).
fn arb_ideal(nvars: usize) -> impl Strategy<Value = (Vec<i64>, Vec<(i64, Vec<i64>)>)> {
    (
        prop::collection::vec(1i64..=3, nvars),
        prop::collection::vec((1i64..=6, prop::collection::vec(-3i64..=3, 1..6)), 1..=2),
    )
}

fn build(weights: &[i64], gens: &[(i64, Vec<i64>)]) -> AffineScene {
    let r = ring(weights);
    let polys: Vec<Polynomial> =
        gens.iter().map(|(d, c)| homogeneous(&r, *d, c)).filter(|p| !p.is_zero()).collect();
    AffineScene::new(r.clone(), Ideal::new(&r, polys).unwrap()).unwrap()
}

/// The same scene with variables (and weights) listed in reverse.
fn reversed(s: &AffineScene) -> AffineScene {
    let w: Vec<i64> = s.ring().weights().iter().rev().copied().collect();
    let names: Vec<String> = s.ring().names().iter().rev().cloned().collect();
    let r = WeightedRing::new(names, w).unwrap();
    let gens = s
        .ideal()
        .generators()
        .iter()
        .map(|g| {
            Polynomial::from_terms(
                &r,
                g.terms().iter().map(|(m, c)| {
                    (Monomial::new(m.exponents().iter().rev().copied().collect()), c.clone())
                }),
            )
        })
        .collect();
    AffineScene::new(r.clone(), Ideal::new(&r, gens).unwrap()).unwrap()
}

/// Exponent vectors with weighted degree d, counted by brute force.
fn count_exponents(weights: &[i64], d: i64) -> usize {
    fn go(weights: &[i64], d: i64) -> usize {
        match weights.split_first() {
            None => usize::from(d == 0),
            Some((w, rest)) => (0..=d / w).map(|e| go(rest, d - e * w)).sum(),
        }
    }
    if d < 0 {
        0
    } else {
        go(weights, d)
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn free_graded_dims_count_exponents(weights in prop::collection::vec(1i64..=3, 1..=3), d in 0i64..=12) {
        let s = AffineScene::affine_space(ring(&weights));
        prop_assert_eq!(graded_component_basis(&s, d).dim(), count_exponents(&weights, d));
    }

    #[test]
    fn graded_dims_invariant_under_relabeling((w, g) in arb_ideal(3)) {
        let s = build(&w, &g);
        let t = reversed(&s);
        for d in 0..=10 {
            prop_assert_eq!(graded_component_basis(&s, d).dim(), graded_component_basis(&t, d).dim());
        }
    }

    #[test]
    fn normal_form_membership_matches_linear_algebra(
        (w, g) in arb_ideal(2),
        mult in prop::collection::vec(-2i64..=2, 1..8),
        extra in prop::collection::vec(-2i64..=2, 1..8),
        d in 1i64..=12,
    ) {
        let s = build(&w, &g);
        let ideal = s.ideal();
        prop_assume!(!ideal.generators().is_empty());
        let gb = buchberger(ideal, MonomialOrder::default()).unwrap();
        let r = s.ring();
        // A guaranteed member of weight d, and a random element of weight d.
        let mut member = Polynomial::zero(r);
        for gen in ideal.generators() {
            let k = gen.homogeneous_degree().unwrap();
            member = member.add(&gen.mul(&homogeneous(r, d - k, &mult)));
        }
        for p in [member.clone(), homogeneous(r, d, &extra), member.add(&homogeneous(r, d, &extra))] {
            prop_assert_eq!(normal_form(&p, &gb).is_zero(), in_ideal_degreewise(ideal, &p), "p = {}", p);
        }
        prop_assert!(in_ideal_degreewise(ideal, &member));
    }

    #[test]
    fn quotient_dimension_independent_of_order_and_listing((w, g) in arb_ideal(2)) {
        let s = build(&w, &g);
        let r = s.ring();
        let gens = s.ideal().generators().to_vec();
        prop_assume!(!gens.is_empty());
        let rev = Ideal::new(r, gens.iter().rev().cloned().collect()).unwrap();
        let a = quotient_dimension_with_order(s.ideal(), MonomialOrder::WeightedDegRevLex).unwrap();
        let b = quotient_dimension_with_order(&rev, MonomialOrder::WeightedDegRevLex).unwrap();
        let c = quotient_dimension_with_order(s.ideal(), MonomialOrder::Lex).unwrap();
        prop_assert_eq!(a.dim(), b.dim());
        prop_assert_eq!(a.dim(), c.dim());
    }

    #[test]
    fn free_derivations_match_oracle(weights in prop::collection::vec(1i64..=3, 1..=3), d in -3i64..=8) {
        let s = AffineScene::affine_space(ring(&weights));
        let expected: usize = weights.iter().map(|w| count_exponents(&weights, d + w)).sum();
        prop_assert_eq!(derivation_module_piece(&s, d).unwrap().basis().len(), expected);
    }

    #[test]
    fn euler_field_scales_by_weight((w, g) in arb_ideal(3), d in 0i64..=8, c in prop::collection::vec(-3i64..=3, 1..8)) {
        let s = build(&w, &g);
        let xi = euler_derivation(&AffineScene::affine_space(s.ring().clone())).unwrap();
        let p = homogeneous(s.ring(), d, &c);
        prop_assert_eq!(xi.apply(&p), p.scale(&spencerlab::Rational::from_integer(d.into())));
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(16))]

    #[test]
    fn forms_pieces_independent_of_relation_order((w, g) in arb_ideal(2)) {
        let s = build(&w, &g);
        let m = omega_module(&s, 1).unwrap();
        let n = m.relations().len();
        let perm: Vec<usize> = (0..n).rev().collect();
        let p = m.with_relations_permuted(&perm);
        for d in 0..=8 {
            prop_assert_eq!(m.piece(d).unwrap().dim(), p.piece(d).unwrap().dim());
        }
    }

    #[test]
    fn de_rham_tables_invariant_under_relabeling((w, g) in arb_ideal(2)) {
        let s = build(&w, &g);
        let a = homology_table(&build_de_rham(&s).unwrap(), 6).unwrap();
        let b = homology_table(&build_de_rham(&reversed(&s)).unwrap(), 6).unwrap();
        prop_assert!(a.agrees_with(&b), "{} vs {}", a, b);
    }

    #[test]
    fn zeroth_jets_are_de_rham((w, g) in arb_ideal(2)) {
        let s = build(&w, &g);
        let a = homology_table(&build_de_rham(&s).unwrap(), 5).unwrap();
        let b = homology_table(&build_jet_complex(&s, 0).unwrap(), 5).unwrap();
        prop_assert!(a.agrees_with(&b));
    }

    #[test]
    fn adic_entries_stabilize_past_generator_weight((w, g) in arb_ideal(2)) {
        let s = build(&w, &g);
        let r = s.ring();
        let free = PresentedModule::structure_sheaf(&AffineScene::affine_space(r.clone()));
        let wmin = s.ideal().generators().iter().map(|p| p.homogeneous_degree().unwrap()).min();
        prop_assume!(wmin.is_some());
        let wmin = wmin.unwrap();
        let bound = 6;
        let stages = (bound / wmin) as usize + 3;
        let report = tower_limit(&adic_tower(&free, s.ideal(), stages).unwrap(), bound).unwrap();
        for d in 0..=bound {
            let e = report.entry(0, d).unwrap();
            let r0 = (d / wmin + 1) as usize;
            prop_assert!(e.stable_from.is_some_and(|f| f <= r0), "d={} {:?}", d, e);
            // Past the stabilization point nothing of J^r survives in weight d.
            prop_assert_eq!(e.lim, Some(count_exponents(r.weights(), d)));
        }
    }

    #[test]
    fn derived_and_classical_agree_in_index_zero((w, g) in arb_ideal(2)) {
        let s = build(&w, &g);
        let r = s.ring();
        let vars = Ideal::new(r, (0..r.nvars()).map(|i| Polynomial::var(r, i)).collect()).unwrap();
        let module = PresentedModule::structure_sheaf(&s);
        let bound = 5;
        let stages = bound as usize + 3;
        let derived = derived_completion(&module, &vars, stages, bound).unwrap();
        let classical = tower_limit(&adic_tower(&module, &vars, stages).unwrap(), bound).unwrap();
        for d in 0..=bound {
            prop_assert_eq!(derived.limits.lim(0, d), classical.lim(0, d));
            // A positively graded module is already complete in each weight,
            // so completing again would reproduce the same table.
            prop_assert_eq!(derived.limits.lim(0, d), Some(graded_component_basis(&s, d).dim()));
            for &i in derived.limits.indices() {
                if i != 0 {
                    prop_assert_eq!(derived.limits.lim(i, d), Some(0));
                }
            }
        }
    }
}
