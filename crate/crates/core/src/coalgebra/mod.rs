//! Tensor and symmetric coalgebras, their coproduct, and operators built
//! from Taylor coefficients.

mod operator;
mod word;

pub use operator::{
    commutator_on, compose_on, coderivation_defect, coderivation_on_pairs, morphism_defect, morphism_on_pairs,
    square_on, CoalgebraOperator, OperatorKind,
};
pub use word::{Coalgebra, CoalgebraKind, PairSum, Word, WordSum};

#[cfg(test)]
mod tests {
    use std::collections::BTreeMap;

    use super::*;
    use crate::graded::{rational, Element, MultilinearMap, Scalar};

    const K: u32 = 3;

    fn one() -> Scalar {
        Scalar::one(K)
    }

    fn b(i: usize) -> Element {
        Element::basis(i, K)
    }

    #[test]
    fn single_letter_has_zero_coproduct() {
        let c = Coalgebra::tensor(vec![0, 1]);
        assert!(c.comultiply(&c.word(&[1], K)).is_zero());
    }

    #[test]
    fn two_even_letters() {
        let c = Coalgebra::tensor(vec![0, 0]);
        let d = c.comultiply(&c.word(&[0, 1], K));
        let mut want = PairSum::new();
        want.add_term((vec![0], vec![1]), &one());
        want.add_term((vec![1], vec![0]), &one());
        assert_eq!(d, want);
    }

    #[test]
    fn odd_letters_swap_with_sign() {
        let c = Coalgebra::tensor(vec![1, 1]);
        let d = c.comultiply(&c.word(&[0, 1], K));
        let mut want = PairSum::new();
        want.add_term((vec![0], vec![1]), &one());
        want.add_term((vec![1], vec![0]), &-one());
        assert_eq!(d, want);
    }

    #[test]
    fn symmetric_words_are_canonical() {
        let c = Coalgebra::symmetric(vec![1, 0, 1]);
        // y (even) sorts before the odd letters
        let w = c.word(&[2, 1, 0], K);
        assert_eq!(w.get(&[1, 0, 2]), Some(&-one()));
        assert!(c.word(&[0, 0], K).is_zero());
        assert_eq!(c.word(&[1, 1], K).get(&[1, 1]), Some(&one()));
    }

    #[test]
    fn basis_word_counts() {
        let t = Coalgebra::tensor(vec![0, 1, 1]);
        assert_eq!(t.basis_words(3).len(), 27);
        let s = Coalgebra::symmetric(vec![0, 1, 1]);
        // monomials of length 2 in one even and two odd letters: x^2, xa, xb, ab
        assert_eq!(s.basis_words(2).len(), 4);
    }

    fn differential_only() -> CoalgebraOperator {
        // letters: 0 (deg 0) -> 1 (deg 1)
        let mut q1 = MultilinearMap::new(1, 2, 2, 1);
        q1.add_entry(&[0], &b(1)).unwrap();
        CoalgebraOperator::coderivation(Coalgebra::tensor(vec![0, 1]), 1, BTreeMap::from([(1, q1)])).unwrap()
    }

    #[test]
    fn linear_coderivation_is_leibniz_rule() {
        let q = differential_only();
        assert_eq!(q.evaluate_word(&[0]), Coalgebra::tensor(vec![0, 1]).word(&[1], K));
        // Q(x (x) x) = Q1(x) (x) x + x (x) Q1(x)
        let got = q.evaluate_word(&[0, 0]);
        let mut want = WordSum::new();
        want.add_term(vec![1, 0], &one());
        want.add_term(vec![0, 1], &one());
        assert_eq!(got, want);
        // Q(y (x) x) = (-1)^{|y|} y (x) Q1(x) = -y (x) y
        let got = q.evaluate_word(&[1, 0]);
        let mut want = WordSum::new();
        want.add_term(vec![1, 1], &-one());
        assert_eq!(got, want);
    }

    #[test]
    fn commutator_is_twice_the_square() {
        let q = differential_only();
        for w in q.source().basis_words_up_to(3) {
            let lhs = commutator_on(&q, &q, &w);
            let rhs = square_on(&q, &w).scale(&Scalar::from_int(2, K));
            assert_eq!(lhs, rhs);
        }
    }

    #[test]
    fn tensor_morphism_of_arity_two() {
        let src = Coalgebra::tensor(vec![0, 0]);
        let mut f1 = MultilinearMap::new(1, 2, 2, 0);
        f1.add_entry(&[0], &b(1)).unwrap();
        f1.add_entry(&[1], &b(0)).unwrap();
        let mut f2 = MultilinearMap::new(2, 2, 2, 0);
        f2.add_entry(&[0, 1], &b(0)).unwrap();
        let f = CoalgebraOperator::morphism(src.clone(), src, BTreeMap::from([(1, f1), (2, f2)])).unwrap();
        let mut want = WordSum::new();
        want.add_term(vec![0], &one());
        want.add_term(vec![1, 0], &one());
        assert_eq!(f.evaluate_word(&[0, 1]), want);
    }

    #[test]
    fn identity_projects_to_identity() {
        let c = Coalgebra::symmetric(vec![0, 1]);
        let mut id = MultilinearMap::symmetric(1, vec![0, 1], 2, 0);
        id.add_entry(&[0], &b(0)).unwrap();
        id.add_entry(&[1], &b(1)).unwrap();
        let f = CoalgebraOperator::morphism(c.clone(), c.clone(), BTreeMap::from([(1, id.clone())])).unwrap();
        let proj = f.project_to_generators(3);
        assert_eq!(proj[&1], id);
        assert!(proj[&2].is_zero() && proj[&3].is_zero());
        for w in c.basis_words_up_to(3) {
            assert_eq!(f.evaluate_word(&w), c.word(&w, K));
        }
    }

    #[test]
    fn exponential_of_even_and_odd_letters() {
        let c = Coalgebra::symmetric(vec![0, 1]);
        let t = Scalar::monomial(rational(1, 1), 1, K);
        let even = c.group_like_exp(&Element::term(0, t.clone()), K, None).unwrap();
        let mut want = WordSum::new();
        want.add_term(vec![0], &t);
        want.add_term(vec![0, 0], &Scalar::monomial(rational(1, 2), 2, K));
        assert_eq!(even, want);
        let odd = c.group_like_exp(&Element::term(1, t.clone()), K, None).unwrap();
        assert_eq!(odd, c.letter_sum(&Element::term(1, t)));
        assert!(c.group_like_exp(&Element::zero(), K, None).unwrap().is_zero());
        assert!(c.group_like_exp(&b(0), K, None).is_err());
        assert_eq!(c.group_like_exp(&b(0), K, Some(1)).unwrap(), c.word(&[0], K));
    }
}
