use std::collections::BTreeMap;

use num_traits::Zero;

use crate::coalgebra::{Coalgebra, CoalgebraOperator, Word, WordSum};
use crate::error::{Error, Result};
use crate::graded::{rational, solve_linear_system, Element, LinearEquation, LinearSolution, MultilinearMap, Scalar};
use crate::report::CheckReport;

use super::algebra::{AlgebraStructure, Flavor};

/// An L-infinity morphism between two DGLAs, given by its Taylor
/// coefficients `F_n : S^n(g[-1]) -> g'[-1]`.
///
/// `known_arity` is `None` when the listed coefficients are the whole
/// family (missing arities are zero), and `Some(m)` when only arities up to
/// `m` are known; asking for anything beyond `m` is an error.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LinfMorphism {
    source: AlgebraStructure,
    target: AlgebraStructure,
    taylor: BTreeMap<usize, MultilinearMap>,
    known_arity: Option<usize>,
}

impl LinfMorphism {
    pub fn new(
        source: AlgebraStructure,
        target: AlgebraStructure,
        taylor: BTreeMap<usize, MultilinearMap>,
        known_arity: Option<usize>,
    ) -> Result<Self> {
        if source.flavor() != Flavor::Lie || target.flavor() != Flavor::Lie {
            return Err(Error::KindMismatch("L-infinity morphisms connect Lie structures".into()));
        }
        if source.order() != target.order() {
            return Err(Error::Config("source and target use different truncation orders".into()));
        }
        let src = source.letter_degrees();
        let tgt = target.letter_degrees();
        let mut clean = BTreeMap::new();
        for (k, m) in taylor {
            if m.arity() != k || k == 0 {
                return Err(Error::ArityMismatch {
                    expected: k,
                    got: m.arity(),
                });
            }
            if let Some(limit) = known_arity {
                if k > limit {
                    return Err(Error::Config(format!("coefficient of arity {k} beyond the known range {limit}")));
                }
            }
            if m.source_dim() != source.dim() || m.target_dim() != target.dim() || m.shift() != 0 {
                return Err(Error::KindMismatch(format!("Taylor coefficient F_{k} has the wrong shape")));
            }
            m.check_degrees(&src, &tgt)?;
            // stored on canonical symmetric tuples
            let mut sym = MultilinearMap::symmetric(k, src.clone(), target.dim(), 0);
            for (tuple, v) in m.entries() {
                sym.add_entry(tuple, v)?;
            }
            if !sym.is_zero() {
                clean.insert(k, sym);
            }
        }
        Ok(Self {
            source,
            target,
            taylor: clean,
            known_arity,
        })
    }

    pub fn identity(structure: &AlgebraStructure) -> Result<Self> {
        let n = structure.dim();
        let mut f1 = MultilinearMap::new(1, n, n, 0);
        for i in 0..n {
            f1.add_entry(&[i], &structure.basis(i))?;
        }
        Self::new(structure.clone(), structure.clone(), BTreeMap::from([(1, f1)]), None)
    }

    /// A morphism with only a linear coefficient.
    pub fn strict(source: AlgebraStructure, target: AlgebraStructure, f1: MultilinearMap) -> Result<Self> {
        Self::new(source, target, BTreeMap::from([(1, f1)]), None)
    }

    pub fn source(&self) -> &AlgebraStructure {
        &self.source
    }

    pub fn target(&self) -> &AlgebraStructure {
        &self.target
    }

    pub fn order(&self) -> u32 {
        self.source.order()
    }

    pub fn known_arity(&self) -> Option<usize> {
        self.known_arity
    }

    pub fn taylor_family(&self) -> &BTreeMap<usize, MultilinearMap> {
        &self.taylor
    }

    fn check_known(&self, arity: usize) -> Result<()> {
        match self.known_arity {
            Some(limit) if arity > limit => Err(Error::Config(format!(
                "the morphism is only known up to arity {limit}, arity {arity} was requested"
            ))),
            _ => Ok(()),
        }
    }

    /// `F_n`, the zero map when absent.
    pub fn coefficient(&self, arity: usize) -> Result<MultilinearMap> {
        self.check_known(arity)?;
        Ok(self
            .taylor
            .get(&arity)
            .cloned()
            .unwrap_or_else(|| MultilinearMap::symmetric(arity, self.source.letter_degrees(), self.target.dim(), 0)))
    }

    /// Adds `value` to `F_n` at one tuple; used to build broken variants.
    pub fn add_taylor_entry(&mut self, tuple: &[usize], value: &Element) -> Result<()> {
        let k = tuple.len();
        self.check_known(k)?;
        let mut m = self.coefficient(k)?;
        m.add_entry(tuple, value)?;
        m.check_degrees(&self.source.letter_degrees(), &self.target.letter_degrees())?;
        if m.is_zero() {
            self.taylor.remove(&k);
        } else {
            self.taylor.insert(k, m);
        }
        Ok(())
    }

    pub fn source_coalgebra(&self) -> Coalgebra {
        self.source.symmetric_coalgebra()
    }

    pub fn target_coalgebra(&self) -> Coalgebra {
        self.target.symmetric_coalgebra()
    }

    /// The coalgebra morphism of the known coefficients. Only its values
    /// on words of length at most `known_arity` are complete.
    pub fn operator(&self) -> CoalgebraOperator {
        CoalgebraOperator::morphism(self.source_coalgebra(), self.target_coalgebra(), self.taylor.clone())
            .expect("coefficients were validated")
    }

    /// Compares `F∘Q` and `Q'∘F` on every symmetric basis word of length at
    /// most `max_arity`.
    pub fn verify(&self, max_arity: usize) -> Result<CheckReport> {
        self.check_known(max_arity)?;
        let f = self.operator();
        let q = self.source.symmetric_coderivation();
        let qt = self.target.symmetric_coderivation();
        let mut rep = CheckReport::new("F∘Q = Q'∘F");
        for w in f.source().basis_words_up_to(max_arity) {
            let lhs = f.evaluate(&q.evaluate_word(&w));
            let rhs = qt.evaluate(&f.evaluate_word(&w));
            rep.record_words(&w, lhs.sub(&rhs));
        }
        Ok(rep)
    }

    fn check_alpha(&self, alpha: &Element) -> Result<()> {
        if !alpha.is_zero() && alpha.valuation() == Some(0) {
            return Err(Error::NonTruncating(
                "the Maurer-Cartan element must be divisible by t".into(),
            ));
        }
        Ok(())
    }

    /// `e^α - 1` in the source symmetric coalgebra.
    pub fn exp_source(&self, alpha: &Element) -> Result<WordSum> {
        self.check_alpha(alpha)?;
        self.source_coalgebra().group_like_exp(alpha, self.order(), None)
    }

    /// `β = pr F(e^α - 1)`.
    pub fn mc_image(&self, alpha: &Element) -> Result<Element> {
        let e = self.exp_source(alpha)?;
        self.check_known(e.max_len())?;
        Ok(self.operator().evaluate(&e).project_to_generators())
    }

    /// Compares `F(e^α - 1)` with `e^β - 1` on words of length at most
    /// `max_len`.
    pub fn group_like_check(&self, alpha: &Element, beta: &Element, max_len: usize) -> Result<CheckReport> {
        let e = self.exp_source(alpha)?;
        self.check_known(e.max_len())?;
        let lhs = self.operator().evaluate(&e).up_to_length(max_len);
        let rhs = self
            .target_coalgebra()
            .group_like_exp(beta, self.order(), None)?
            .up_to_length(max_len);
        let mut rep = CheckReport::new("F(e^alpha - 1) = e^beta - 1");
        rep.record_words(&[], lhs.sub(&rhs));
        Ok(rep)
    }

    /// `T_α^k F(x_1..x_k) = sum_m 1/m! F_{k+m}(x_1..x_k α^m)`.
    pub fn taylor_derivative(&self, alpha: &Element, k: usize) -> Result<MultilinearMap> {
        let e = self.exp_source(alpha)?;
        self.check_known(k + e.max_len())?;
        let coalg = self.source_coalgebra();
        let mut out = MultilinearMap::symmetric(k, self.source.letter_degrees(), self.target.dim(), 0);
        for w in coalg.basis_words(k) {
            let word = coalg.word(&w, self.order());
            let mut total = word.clone();
            total.add_assign(&coalg.product(&word, &e));
            let mut value = Element::zero();
            for (u, c) in total.iter() {
                if let Some(f) = self.taylor.get(&u.len()) {
                    value.add_assign_scaled(&f.eval_basis(u), c);
                }
            }
            out.add_entry(&w, &value)?;
        }
        Ok(out)
    }

    /// The morphism whose Taylor coefficients are `T_α^k F`, `k <= max_k`.
    pub fn twisted_operator(&self, alpha: &Element, max_k: usize) -> Result<CoalgebraOperator> {
        let mut taylor = BTreeMap::new();
        for k in 1..=max_k {
            taylor.insert(k, self.taylor_derivative(alpha, k)?);
        }
        CoalgebraOperator::morphism(self.source_coalgebra(), self.target_coalgebra(), taylor)
    }

    /// Checks `F(x e^α) = (sum over respectful partitions of products of
    /// T_α F) · e^β` on symmetric words of length at most `max_len`, with
    /// `e^α` and `e^β` including the unit.
    pub fn exp_evaluation_check(&self, alpha: &Element, beta: &Element, max_len: usize) -> Result<CheckReport> {
        let ea = self.exp_source(alpha)?;
        let eb = self.target_coalgebra().group_like_exp(beta, self.order(), None)?;
        self.check_known(max_len + ea.max_len())?;
        let src = self.source_coalgebra();
        let tgt = self.target_coalgebra();
        let f = self.operator();
        let g = self.twisted_operator(alpha, max_len)?;
        let mut rep = CheckReport::new("F(x e^alpha) = T_alpha F(x) e^beta");
        for w in src.basis_words_up_to(max_len) {
            let x = src.word(&w, self.order());
            let mut arg = x.clone();
            arg.add_assign(&src.product(&x, &ea));
            let lhs = f.evaluate(&arg);
            let gx = g.evaluate_word(&w);
            let mut rhs = gx.clone();
            rhs.add_assign(&tgt.product(&gx, &eb));
            rep.record_words(&w, lhs.sub(&rhs));
        }
        Ok(rep)
    }

    /// Completes the family from arity `from + 1` to `to` by solving the
    /// projected morphism equations arity by arity; free unknowns are set
    /// to zero. The known part must already satisfy the equations up to
    /// arity `from`.
    pub fn complete(&self, from: usize, to: usize) -> Result<LinfMorphism> {
        let mut current = LinfMorphism {
            known_arity: Some(from),
            taylor: self.taylor.range(..=from).map(|(k, m)| (*k, m.clone())).collect(),
            ..self.clone()
        };
        let rep = current.verify(from)?;
        if let Some(f) = rep.first_failure() {
            return Err(Error::Obstruction(format!(
                "the given coefficients fail the morphism equation on word {:?}",
                f.word
            )));
        }
        for p in (from + 1)..=to {
            let fp = current.solve_arity(p)?;
            current.known_arity = Some(p);
            if !fp.is_zero() {
                current.taylor.insert(p, fp);
            }
        }
        Ok(current)
    }

    fn solve_arity(&self, p: usize) -> Result<MultilinearMap> {
        let order = self.order();
        let src = self.source_coalgebra();
        let src_deg = self.source.letter_degrees();
        let tgt_deg = self.target.letter_degrees();
        let q = self.source.symmetric_coderivation();
        let qt = self.target.symmetric_coderivation();
        let q1t = self.target.taylor_q1();
        let partial = CoalgebraOperator::morphism(src.clone(), self.target_coalgebra(), self.taylor.clone())?;
        let words = src.basis_words(p);

        // constant part: the projected defect without F_p
        let mut constants: BTreeMap<Word, Element> = BTreeMap::new();
        let mut images: BTreeMap<Word, WordSum> = BTreeMap::new();
        for w in &words {
            let qw = q.evaluate_word(w);
            let lhs = partial.evaluate(&qw).project_to_generators();
            let rhs = qt.evaluate(&partial.evaluate_word(w)).project_to_generators();
            constants.insert(w.clone(), lhs.sub(&rhs));
            images.insert(w.clone(), qw.of_length(p));
        }

        // unknowns: (tuple, output, exponent) with matching degree
        let mut unknowns: Vec<(Word, usize, u32)> = Vec::new();
        for w in &words {
            let deg: i64 = w.iter().map(|&l| src_deg[l]).sum();
            for (o, &d) in tgt_deg.iter().enumerate() {
                if d == deg {
                    for e in 0..order {
                        unknowns.push((w.clone(), o, e));
                    }
                }
            }
        }
        let unit_map = |u: &(Word, usize, u32)| {
            let mut m = MultilinearMap::symmetric(p, src_deg.clone(), self.target.dim(), 0);
            m.add_entry(&u.0, &Element::term(u.1, Scalar::monomial(rational(1, 1), u.2, order)))
                .expect("canonical tuple");
            m
        };
        // column of each unknown: L(unit)(w) = unit(Q(w)_p) - Q'_1(unit(w))
        let mut rows: BTreeMap<(Word, usize, u32), BTreeMap<usize, num_rational::BigRational>> = BTreeMap::new();
        for (v, u) in unknowns.iter().enumerate() {
            let m = unit_map(u);
            for w in &words {
                let mut val = Element::zero();
                for (wp, c) in images[w].iter() {
                    val.add_assign_scaled(&m.eval_basis(wp), c);
                }
                val.sub_assign(&q1t.apply(&[&m.eval_basis(w)])?);
                for (o, c) in val.iter() {
                    for (e, r) in c.terms() {
                        rows.entry((w.clone(), o, *e)).or_default().insert(v, r.clone());
                    }
                }
            }
        }
        let mut keys: Vec<(Word, usize, u32)> = rows.keys().cloned().collect();
        for (w, c) in &constants {
            for (o, s) in c.iter() {
                for (e, _) in s.terms() {
                    keys.push((w.clone(), o, *e));
                }
            }
        }
        keys.sort();
        keys.dedup();
        let equations: Vec<LinearEquation> = keys
            .iter()
            .map(|k| {
                let coeffs = rows.get(k).cloned().unwrap_or_default();
                let rhs = constants[&k.0].get(k.1).map(|s| -s.coeff(k.2)).unwrap_or_else(num_rational::BigRational::zero);
                LinearEquation::new(coeffs, rhs)
            })
            .collect();
        match solve_linear_system(unknowns.len(), &equations) {
            LinearSolution::Solved(x) => {
                let mut fp = MultilinearMap::symmetric(p, src_deg.clone(), self.target.dim(), 0);
                for (u, val) in unknowns.iter().zip(x) {
                    if !val.is_zero() {
                        fp.add_entry(&u.0, &Element::term(u.1, Scalar::monomial(val, u.2, order)))?;
                    }
                }
                Ok(fp)
            }
            LinearSolution::Inconsistent { combination, .. } => {
                let rows: Vec<String> = combination
                    .keys()
                    .map(|&i| format!("{:?}", keys[i]))
                    .collect();
                Err(Error::Obstruction(format!(
                    "no coefficient of arity {p} solves the morphism equation; inconsistent rows {}",
                    rows.join(", ")
                )))
            }
        }
    }

    /// `exp(D)` with `D = [Q, H] = QH + HQ` for a degree -1 coderivation `H`
    /// whose only coefficient is `h2`. `D` lowers word length, so the series
    /// is finite on every word; coefficients are computed up to `max_arity`.
    pub fn gauge_automorphism(structure: &AlgebraStructure, h2: MultilinearMap, max_arity: usize) -> Result<Self> {
        if structure.flavor() != Flavor::Lie {
            return Err(Error::KindMismatch("gauge automorphisms act on Lie structures".into()));
        }
        let coalg = structure.symmetric_coalgebra();
        let order = structure.order();
        let h = CoalgebraOperator::coderivation(coalg.clone(), -1, BTreeMap::from([(2, h2)]))?;
        let q = structure.symmetric_coderivation();
        let mut d_taylor = BTreeMap::new();
        for n in 1..=3 {
            let mut m = MultilinearMap::symmetric(n, coalg.degrees().to_vec(), structure.dim(), 0);
            for w in coalg.basis_words(n) {
                let mut v = q.evaluate(&h.evaluate_word(&w));
                v.add_assign(&h.evaluate(&q.evaluate_word(&w)));
                m.add_entry(&w, &v.project_to_generators())?;
            }
            d_taylor.insert(n, m);
        }
        let d = CoalgebraOperator::coderivation(coalg.clone(), 0, d_taylor)?;
        let mut taylor = BTreeMap::new();
        for n in 1..=max_arity {
            let mut m = MultilinearMap::symmetric(n, coalg.degrees().to_vec(), structure.dim(), 0);
            for w in coalg.basis_words(n) {
                let mut term = coalg.word(&w, order);
                let mut total = Element::zero();
                let mut k = 0i64;
                while !term.is_zero() {
                    if k > 0 {
                        term = d.evaluate(&term).scale(&Scalar::from_rational(rational(1, k), order));
                    }
                    total.add_assign(&term.project_to_generators());
                    k += 1;
                }
                m.add_entry(&w, &total)?;
            }
            taylor.insert(n, m);
        }
        Self::new(structure.clone(), structure.clone(), taylor, Some(max_arity))
    }
}
