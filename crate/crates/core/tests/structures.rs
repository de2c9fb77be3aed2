use leibniz_core::fixtures;
use leibniz_core::structures::LinfMorphism;

const K: u32 = 4;

#[test]
fn fixtures_are_valid_structures() {
    for (name, g) in [
        ("abelian", fixtures::abelian(K)),
        ("nilpotent", fixtures::nilpotent(K)),
        ("affine", fixtures::affine(K)),
        ("leibniz", fixtures::leibniz(K)),
        ("affine abelian", fixtures::affine_abelian(K)),
    ] {
        let rep = g.check_structure();
        assert!(rep.passed(), "{name}: {rep:#?}");
    }
}

#[test]
fn derived_structures_pass() {
    for (g, a) in [
        (fixtures::nilpotent(K), fixtures::nilpotent_mc(K)),
        (fixtures::affine(K), fixtures::affine_mc(K)),
    ] {
        let mc = g.mc_check(&a).unwrap();
        assert!(mc.is_maurer_cartan() && mc.twisting_allowed());
        let der = g.derived_structure(&a).unwrap();
        let rep = der.check_structure();
        assert!(rep.passed(), "{rep:#?}");
        assert!(g.bridge_check(&der, &a).passed());
        assert!(g.exp_twist_check(&a, 3).unwrap().passed());
    }
}

#[test]
fn morphism_fixtures_verify() {
    for fx in fixtures::twist_fixtures(K, 6).unwrap() {
        let rep = fx.morphism.verify(5).unwrap();
        assert!(rep.passed(), "{}: {:?}", fx.name, rep.first_failure());
        let beta = fx.morphism.mc_image(&fx.alpha).unwrap();
        let tgt = fx.morphism.target();
        assert!(tgt.mc_check(&beta).unwrap().is_maurer_cartan(), "{}", fx.name);
        assert!(fx.morphism.group_like_check(&fx.alpha, &beta, 4).unwrap().passed(), "{}", fx.name);
        let ev = fx.morphism.exp_evaluation_check(&fx.alpha, &beta, 3).unwrap();
        assert!(ev.passed(), "{}: {:?}", fx.name, ev.first_failure());
    }
    let f = fixtures::affine_to_abelian(K, 3).unwrap();
    assert!(f.taylor_family().get(&2).is_some_and(|m| !m.is_zero()));
    let _ = LinfMorphism::identity(&fixtures::abelian(K)).unwrap();
}

#[test]
fn gauge_morphisms_are_not_strict() {
    for f in [fixtures::nilpotent_gauge(K, 5).unwrap(), fixtures::affine_gauge(K, 5).unwrap()] {
        let higher: usize = f.taylor_family().range(2..).map(|(_, m)| m.len()).sum();
        assert!(higher > 0, "{:?}", f.taylor_family());
    }
}

#[test]
fn perturbed_quadratic_coefficient_is_located() {
    let mut f = fixtures::affine_to_abelian(K, 4).unwrap();
    let g = f.target().clone();
    // F_2(h, y) must be a fixed multiple of x'; shifting it breaks arity 2
    f.add_taylor_entry(&[0, 2], &g.basis(1)).unwrap();
    let rep = f.verify(4).unwrap();
    assert!(!rep.passed());
    assert_eq!(rep.first_failure().unwrap().word.len(), 2);
}

#[test]
fn mutated_structures_give_matching_verdicts() {
    use rand::{Rng, SeedableRng};
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(4);
    let base = fixtures::leibniz(K);
    let degrees = base.space().degrees();
    let (mut broken, mut intact) = (0, 0);
    for round in 0..30 {
        let mut g = base.clone();
        for _ in 0..rng.gen_range(1..=2) {
            let c = leibniz_core::Scalar::from_int([-2, -1, 1, 2][rng.gen_range(0..4)], K);
            if rng.gen_bool(0.3) {
                let i = rng.gen_range(0..3);
                let outs: Vec<usize> = (0..3).filter(|&o| degrees[o] == degrees[i] + 1).collect();
                if let Some(&o) = outs.get(rng.gen_range(0..outs.len().max(1))) {
                    g.add_differential_term(i, &leibniz_core::Element::term(o, c)).unwrap();
                }
            } else {
                let (i, j) = (rng.gen_range(0..3), rng.gen_range(0..3));
                let outs: Vec<usize> = (0..3).filter(|&o| degrees[o] == degrees[i] + degrees[j]).collect();
                if let Some(&o) = outs.get(rng.gen_range(0..outs.len().max(1))) {
                    g.add_bracket_term(i, j, &leibniz_core::Element::term(o, c)).unwrap();
                }
            }
        }
        let rep = g.check_structure();
        assert!(rep.verdicts_agree(), "mutation {round}: {rep:#?}");
        if rep.identities_hold() {
            intact += 1;
        } else {
            broken += 1;
        }
    }
    assert!(broken >= 10, "only {broken} mutations broke an identity");
    assert!(intact + broken == 30);
}

#[test]
fn lie_structure_without_antisymmetry_is_rejected() {
    let mut g = fixtures::nilpotent(K);
    // [b, a] = 0 while [a, b] = c
    g.add_bracket_term(1, 0, &g.basis(2).neg()).unwrap();
    let rep = g.check_structure();
    assert!(!rep.antisymmetry.as_ref().unwrap().passed());
    assert!(!rep.passed());
}

#[test]
fn maurer_cartan_solver() {
    use leibniz_core::structures::{AlgebraStructure, Flavor};
    use leibniz_core::graded::{rational, GradedSpace};
    use leibniz_core::{Element, Scalar};
    // du = w, [v, v] = w: the t^2 term must be u / 2
    let space = GradedSpace::new([("u", 1), ("v", 1), ("w", 2)]).unwrap();
    let g = AlgebraStructure::from_tables(space, Flavor::Lie, K, &[("u", &[("w", 1)])], &[(("v", "v"), &[("w", 1)])])
        .unwrap();
    assert!(g.check_structure().passed());
    let alpha = g.solve_mc(&g.basis(1)).unwrap();
    let expect = Element::from_terms([
        (1, Scalar::monomial(rational(1, 1), 1, K)),
        (0, Scalar::monomial(rational(1, 2), 2, K)),
    ]);
    assert_eq!(alpha, expect);
    let mc = g.mc_check(&alpha).unwrap();
    assert!(mc.is_maurer_cartan() && mc.conditions_agree());

    let n3 = fixtures::nilpotent(K);
    assert_eq!(n3.solve_mc(&n3.basis(0)).unwrap(), fixtures::nilpotent_mc(K));
    // [a + b, a + b] = 2c cannot be matched by a zero differential
    assert!(n3.solve_mc(&n3.basis(0).add(&n3.basis(1))).is_err());
    let bad = n3.basis(0).add(&n3.basis(1)).scale(&Scalar::monomial(rational(1, 1), 1, K));
    let mc = n3.mc_check(&bad).unwrap();
    assert!(!mc.is_maurer_cartan() && mc.conditions_agree());
}

#[test]
fn twisting_by_zero() {
    use leibniz_core::structures::Flavor;
    use leibniz_core::Element;
    for g in [fixtures::abelian(K), fixtures::affine(K), fixtures::nilpotent(K)] {
        let der = g.derived_structure(&Element::zero()).unwrap();
        assert_eq!(der.flavor(), Flavor::Leibniz);
        assert!(der.check_structure().passed());
        for i in 0..g.dim() {
            assert_eq!(der.d(&g.basis(i)), g.d(&g.basis(i)).neg());
        }
        assert!(g.bridge_check(&der, &Element::zero()).passed());
    }
    // zero differential and zero twist leave nothing to bracket with
    let der = fixtures::nilpotent(K).derived_structure(&Element::zero()).unwrap();
    assert!(der.bracket().is_zero());
}
