//! Small structures and morphisms with known properties, shared by tests,
//! the command line tool and the benchmarks.

use std::collections::BTreeMap;

use crate::error::Result;
use crate::graded::{rational, Element, GradedSpace, MultilinearMap, Scalar};
use crate::structures::{AlgebraStructure, Flavor, LinfMorphism};

fn t(order: u32) -> Scalar {
    Scalar::monomial(rational(1, 1), 1, order)
}

/// `p (0) -> q (1)` with `dp = q` and zero bracket.
pub fn abelian(order: u32) -> AlgebraStructure {
    let space = GradedSpace::new([("p", 0), ("q", 1)]).expect("distinct names");
    AlgebraStructure::from_tables(space, Flavor::Lie, order, &[("p", &[("q", 1)])], &[]).expect("valid tables")
}

/// A single generator of degree 1, zero differential and bracket.
pub fn abelian_line(order: u32) -> AlgebraStructure {
    let space = GradedSpace::new([("u", 1)]).expect("distinct names");
    AlgebraStructure::abelian(space, Flavor::Lie, order)
}

/// Nilpotent DGLA on `a, b` (degree 1) and `c` (degree 2) with
/// `[a, b] = [b, a] = c` and zero differential.
pub fn nilpotent(order: u32) -> AlgebraStructure {
    let space = GradedSpace::new([("a", 1), ("b", 1), ("c", 2)]).expect("distinct names");
    AlgebraStructure::from_tables(
        space,
        Flavor::Lie,
        order,
        &[],
        &[(("a", "b"), &[("c", 1)]), (("b", "a"), &[("c", 1)])],
    )
    .expect("valid tables")
}

/// `t a`, a Maurer-Cartan element of [`nilpotent`].
pub fn nilpotent_mc(order: u32) -> Element {
    Element::term(0, t(order))
}

/// Affine DGLA on `h, x` (degree 0) and `y` (degree 1): `[h, x] = x`,
/// `[h, y] = y`, `dx = y`.
pub fn affine(order: u32) -> AlgebraStructure {
    let space = GradedSpace::new([("h", 0), ("x", 0), ("y", 1)]).expect("distinct names");
    AlgebraStructure::from_tables(
        space,
        Flavor::Lie,
        order,
        &[("x", &[("y", 1)])],
        &[
            (("h", "x"), &[("x", 1)]),
            (("x", "h"), &[("x", -1)]),
            (("h", "y"), &[("y", 1)]),
            (("y", "h"), &[("y", -1)]),
        ],
    )
    .expect("valid tables")
}

/// `t y`, a Maurer-Cartan element of [`affine`].
pub fn affine_mc(order: u32) -> Element {
    Element::term(2, t(order))
}

/// Leibniz algebra on `x, y` (degree 0) and `z` (degree 1) with
/// `[x, y] = y`, `[y, x] = -y`, `[x, z] = z`; it is not antisymmetric.
pub fn leibniz(order: u32) -> AlgebraStructure {
    let space = GradedSpace::new([("x", 0), ("y", 0), ("z", 1)]).expect("distinct names");
    AlgebraStructure::from_tables(
        space,
        Flavor::Leibniz,
        order,
        &[],
        &[
            (("x", "y"), &[("y", 1)]),
            (("y", "x"), &[("y", -1)]),
            (("x", "z"), &[("z", 1)]),
        ],
    )
    .expect("valid tables")
}

/// The affine structure with the same differential and zero bracket.
pub fn affine_abelian(order: u32) -> AlgebraStructure {
    let space = GradedSpace::new([("h'", 0), ("x'", 0), ("y'", 1)]).expect("distinct names");
    AlgebraStructure::from_tables(space, Flavor::Lie, order, &[("x'", &[("y'", 1)])], &[]).expect("valid tables")
}

/// The strict automorphism `h -> h, x -> 2x, y -> 2y` of [`affine`].
pub fn affine_scaling(order: u32) -> LinfMorphism {
    let g = affine(order);
    let mut f1 = MultilinearMap::new(1, 3, 3, 0);
    f1.add_entry(&[0], &g.basis(0)).expect("in range");
    f1.add_entry(&[1], &g.basis(1).scale(&Scalar::from_int(2, order))).expect("in range");
    f1.add_entry(&[2], &g.basis(2).scale(&Scalar::from_int(2, order))).expect("in range");
    LinfMorphism::strict(g.clone(), g, f1).expect("degree preserving")
}

/// A morphism from [`affine`] to [`affine_abelian`] with the identity as
/// linear part; the higher coefficients (and a nonzero `F_2`) come from
/// the linear solver.
pub fn affine_to_abelian(order: u32, max_arity: usize) -> Result<LinfMorphism> {
    let mut f1 = MultilinearMap::new(1, 3, 3, 0);
    for i in 0..3 {
        f1.add_entry(&[i], &Element::basis(i, order))?;
    }
    let partial = LinfMorphism::new(affine(order), affine_abelian(order), BTreeMap::from([(1, f1)]), Some(1))?;
    partial.complete(1, max_arity)
}

/// `exp [Q, H]` on [`nilpotent`] with `H_2(a c) = b`.
pub fn nilpotent_gauge(order: u32, max_arity: usize) -> Result<LinfMorphism> {
    let g = nilpotent(order);
    let mut h2 = MultilinearMap::symmetric(2, g.letter_degrees(), 3, -1);
    h2.add_entry(&[0, 2], &g.basis(1))?;
    LinfMorphism::gauge_automorphism(&g, h2, max_arity)
}

/// `exp [Q, H]` on [`affine`] with `H_2(y y) = x`.
pub fn affine_gauge(order: u32, max_arity: usize) -> Result<LinfMorphism> {
    let g = affine(order);
    let mut h2 = MultilinearMap::symmetric(2, g.letter_degrees(), 3, -1);
    h2.add_entry(&[2, 2], &g.basis(1))?;
    LinfMorphism::gauge_automorphism(&g, h2, max_arity)
}

/// A morphism together with the Maurer-Cartan element it is twisted by.
#[derive(Debug, Clone)]
pub struct TwistFixture {
    pub name: &'static str,
    pub family: &'static str,
    pub morphism: LinfMorphism,
    pub alpha: Element,
}

/// Every morphism fixture, with coefficients known up to `max_arity`.
///
/// Families: `identity`, `strict`, `solver` (completed by the linear
/// solver) and `gauge` (exponentials of `[Q, H]`).
pub fn twist_fixtures(order: u32, max_arity: usize) -> Result<Vec<TwistFixture>> {
    Ok(vec![
        TwistFixture {
            name: "identity on the nilpotent DGLA",
            family: "identity",
            morphism: LinfMorphism::identity(&nilpotent(order))?,
            alpha: nilpotent_mc(order),
        },
        TwistFixture {
            name: "identity on the affine DGLA",
            family: "identity",
            morphism: LinfMorphism::identity(&affine(order))?,
            alpha: affine_mc(order),
        },
        TwistFixture {
            name: "identity on the abelian DGLA",
            family: "identity",
            morphism: LinfMorphism::identity(&abelian(order))?,
            alpha: Element::term(1, t(order)),
        },
        TwistFixture {
            name: "scaling automorphism of the affine DGLA",
            family: "strict",
            morphism: affine_scaling(order),
            alpha: affine_mc(order),
        },
        TwistFixture {
            name: "solver-completed morphism into the abelian affine DGLA",
            family: "solver",
            morphism: affine_to_abelian(order, max_arity)?,
            alpha: affine_mc(order),
        },
        TwistFixture {
            name: "gauge automorphism of the nilpotent DGLA",
            family: "gauge",
            morphism: nilpotent_gauge(order, max_arity)?,
            alpha: nilpotent_mc(order),
        },
        TwistFixture {
            name: "gauge automorphism of the affine DGLA",
            family: "gauge",
            morphism: affine_gauge(order, max_arity)?,
            alpha: affine_mc(order),
        },
    ])
}
