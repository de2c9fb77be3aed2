use std::collections::BTreeMap;

use leibniz_core::graded::{
    parse_rational, rational, solve_linear_system, Element, LinearEquation, LinearSolution, MultilinearMap, Scalar,
};
use num_rational::BigRational;
use proptest::prelude::*;

fn scalar(order: u32) -> impl Strategy<Value = Scalar> {
    prop::collection::vec((0..order, -6i64..=6, 1i64..=4), 0..4).prop_map(move |terms| {
        let mut s = Scalar::zero(order);
        for (e, n, d) in terms {
            s += &Scalar::monomial(rational(n, d), e, order);
        }
        s
    })
}

fn element(dim: usize, order: u32) -> impl Strategy<Value = Element> {
    prop::collection::vec((0..dim, scalar(order)), 0..4).prop_map(|terms| {
        let mut e = Element::zero();
        for (i, c) in terms {
            e.add_term(i, &c);
        }
        e
    })
}

proptest! {
    #[test]
    fn ring_axioms(a in scalar(5), b in scalar(5), c in scalar(5)) {
        prop_assert_eq!(&(&a * &b) * &c, &a * &(&b * &c));
        prop_assert_eq!(&a * &(&b + &c), &(&a * &b) + &(&a * &c));
        prop_assert_eq!(&a * &b, &b * &a);
        prop_assert_eq!(&a + &Scalar::zero(5), a.clone());
        prop_assert_eq!(&a * &Scalar::one(5), a.clone());
    }

    #[test]
    fn valuation_of_products(a in scalar(5), b in scalar(5)) {
        let p = &a * &b;
        match (a.valuation(), b.valuation(), p.valuation()) {
            (Some(va), Some(vb), Some(vp)) => {
                prop_assert!(vp >= va + vb);
                prop_assert_eq!(vp, va + vb);
            }
            (Some(va), Some(vb), None) => prop_assert!(va + vb >= 5),
            (_, _, vp) => prop_assert!(vp.is_none()),
        }
    }

    #[test]
    fn integer_division_inverts_scaling(a in scalar(4), n in 1i64..7) {
        prop_assert_eq!(a.scale_int(n).div_int(n).unwrap(), a);
    }

    #[test]
    fn multilinear_is_additive_and_homogeneous(
        x in element(3, 3), y in element(3, 3), z in element(3, 3), c in scalar(3),
        entries in prop::collection::vec((0usize..3, 0usize..3, element(3, 3)), 0..6),
    ) {
        let mut f = MultilinearMap::new(2, 3, 3, 0);
        for (i, j, v) in &entries {
            f.add_entry(&[*i, *j], v).unwrap();
        }
        let lhs = f.apply(&[&x.add(&y), &z]).unwrap();
        let rhs = f.apply(&[&x, &z]).unwrap().add(&f.apply(&[&y, &z]).unwrap());
        prop_assert_eq!(lhs, rhs);
        let lhs = f.apply(&[&z, &x.add(&y)]).unwrap();
        let rhs = f.apply(&[&z, &x]).unwrap().add(&f.apply(&[&z, &y]).unwrap());
        prop_assert_eq!(lhs, rhs);
        prop_assert_eq!(f.apply(&[&x.scale(&c), &z]).unwrap(), f.apply(&[&x, &z]).unwrap().scale(&c));
        prop_assert_eq!(f.apply(&[&x, &z.scale(&c)]).unwrap(), f.apply(&[&x, &z]).unwrap().scale(&c));
    }

    #[test]
    fn solver_output_satisfies_every_equation(
        rows in prop::collection::vec(
            (prop::collection::btree_map(0usize..6, -4i64..=4, 0..4), -5i64..=5),
            0..7,
        ),
        hidden in prop::collection::vec(-3i64..=3, 6),
        consistent in any::<bool>(),
    ) {
        let equations: Vec<LinearEquation> = rows
            .iter()
            .map(|(coeffs, r)| {
                let coeffs: BTreeMap<usize, BigRational> =
                    coeffs.iter().map(|(&v, &c)| (v, rational(c, 1))).collect();
                // consistent systems get a right-hand side from a known point
                let rhs = if consistent {
                    coeffs.iter().map(|(v, c)| c * rational(hidden[*v], 1)).sum()
                } else {
                    rational(*r, 1)
                };
                LinearEquation::new(coeffs, rhs)
            })
            .collect();
        match solve_linear_system(6, &equations) {
            LinearSolution::Solved(x) => {
                for e in &equations {
                    prop_assert_eq!(e.residual(&x), rational(0, 1));
                }
            }
            LinearSolution::Inconsistent { combination, rhs } => {
                prop_assert!(!consistent);
                // the certificate: the combination cancels every variable
                let mut lhs: BTreeMap<usize, BigRational> = BTreeMap::new();
                let mut total = rational(0, 1);
                for (i, c) in &combination {
                    for (v, a) in &equations[*i].coeffs {
                        *lhs.entry(*v).or_insert_with(|| rational(0, 1)) += c * a;
                    }
                    total += c * &equations[*i].rhs;
                }
                prop_assert!(lhs.values().all(|v| *v == rational(0, 1)));
                prop_assert_eq!(total.clone(), rhs);
                prop_assert!(total != rational(0, 1));
            }
        }
    }
}

#[test]
fn scalar_examples() {
    let t = Scalar::monomial(rational(1, 1), 1, 2);
    let one = Scalar::one(2);
    assert_eq!(&(&one + &t) * &(&one - &t), one);
    let a = Scalar::monomial(rational(1, 2), 1, 3);
    let b = Scalar::monomial(rational(1, 3), 1, 3);
    assert_eq!(&a * &b, Scalar::monomial(rational(1, 6), 2, 3));
    assert_eq!(Scalar::zero(3).valuation(), None);
    let t3 = Scalar::monomial(rational(1, 1), 1, 3);
    assert_eq!((&t3 + &(&t3 * &t3)).valuation(), Some(1));
    assert_eq!(Scalar::from_rational(rational(3, 4), 3).valuation(), Some(0));
    assert!(Scalar::one(3).div_int(0).is_err());
    assert!(parse_rational("1/0").is_err());
    assert_eq!(parse_rational("-6/4").unwrap(), rational(-3, 2));
}

#[test]
fn multilinear_examples() {
    let e = |i| Element::basis(i, 2);
    let mut f = MultilinearMap::new(2, 3, 3, 0);
    f.add_entry(&[0, 1], &e(2)).unwrap();
    f.add_entry(&[0, 0], &e(1)).unwrap();
    assert!(f.apply(&[&Element::zero(), &e(1)]).unwrap().is_zero());
    assert_eq!(f.apply(&[&e(0), &e(1)]).unwrap(), e(2));
    assert_eq!(f.apply(&[&e(0).add(&e(1)), &e(0)]).unwrap(), f.eval_basis(&[0, 0]).add(&f.eval_basis(&[1, 0])));
    assert!(f.apply(&[&e(0)]).is_err());
}

#[test]
fn solver_examples() {
    assert_eq!(solve_linear_system(0, &[]), LinearSolution::Solved(vec![]));
    let eq = |a: i64, b: i64, r: i64| {
        LinearEquation::new(BTreeMap::from([(0, rational(a, 1)), (1, rational(b, 1))]), rational(r, 1))
    };
    assert_eq!(
        solve_linear_system(2, &[eq(1, 1, 1), eq(1, -1, 1)]),
        LinearSolution::Solved(vec![rational(1, 1), rational(0, 1)])
    );
    assert!(solve_linear_system(2, &[eq(1, 0, 1), eq(1, 0, 2)]).solution().is_none());
}
