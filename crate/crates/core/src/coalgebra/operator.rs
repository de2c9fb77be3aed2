use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::sync::RwLock;

use super::word::{Coalgebra, CoalgebraKind, PairSum, Word, WordSum};
use crate::error::{Error, Result};
use crate::graded::{Element, MultilinearMap, Scalar};
use crate::signs::{epsilon_insertion, koszul_sign, permutation_sign, respectful_partitions};

/// Whether an operator extends its Taylor coefficients as a coderivation or
/// as a coalgebra morphism.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum OperatorKind {
    Coderivation { degree: i64 },
    Morphism,
}

/// A coderivation or coalgebra morphism given by its Taylor coefficients.
///
/// Tensor coderivations put `Q_k(x_{i_1} .. x_{i_k})` in the slot of the
/// last extracted letter; tensor morphisms sum over respectful partitions.
/// Symmetric operators use the usual cofree extensions.
pub struct CoalgebraOperator {
    kind: OperatorKind,
    source: Coalgebra,
    target: Coalgebra,
    taylor: BTreeMap<usize, MultilinearMap>,
    cache: RwLock<HashMap<Word, WordSum>>,
}

impl Clone for CoalgebraOperator {
    fn clone(&self) -> Self {
        Self {
            kind: self.kind,
            source: self.source.clone(),
            target: self.target.clone(),
            taylor: self.taylor.clone(),
            cache: RwLock::new(HashMap::new()),
        }
    }
}

impl fmt::Debug for CoalgebraOperator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("CoalgebraOperator")
            .field("kind", &self.kind)
            .field("source", &self.source)
            .field("target", &self.target)
            .field("taylor", &self.taylor)
            .finish()
    }
}

fn check_family(
    source: &Coalgebra,
    target: &Coalgebra,
    taylor: &BTreeMap<usize, MultilinearMap>,
    degree: i64,
) -> Result<()> {
    for (&k, map) in taylor {
        if map.arity() != k {
            return Err(Error::ArityMismatch {
                expected: k,
                got: map.arity(),
            });
        }
        if map.source_dim() != source.dim() || map.target_dim() != target.dim() {
            return Err(Error::KindMismatch(format!(
                "Taylor coefficient of arity {k} has the wrong dimensions"
            )));
        }
        if map.shift() != degree {
            return Err(Error::Degree(format!(
                "Taylor coefficient of arity {k} has degree {} instead of {degree}",
                map.shift()
            )));
        }
        map.check_degrees(source.degrees(), target.degrees())?;
    }
    Ok(())
}

impl CoalgebraOperator {
    /// The coderivation of degree `degree` with the given Taylor
    /// coefficients (keyed by arity).
    pub fn coderivation(coalg: Coalgebra, degree: i64, taylor: BTreeMap<usize, MultilinearMap>) -> Result<Self> {
        check_family(&coalg, &coalg, &taylor, degree)?;
        Ok(Self {
            kind: OperatorKind::Coderivation { degree },
            source: coalg.clone(),
            target: coalg,
            taylor: taylor.into_iter().filter(|(_, m)| !m.is_zero()).collect(),
            cache: RwLock::new(HashMap::new()),
        })
    }

    /// The coalgebra morphism with the given degree-0 Taylor coefficients.
    pub fn morphism(source: Coalgebra, target: Coalgebra, taylor: BTreeMap<usize, MultilinearMap>) -> Result<Self> {
        if source.kind() != target.kind() {
            return Err(Error::KindMismatch(
                "morphisms are only extended between coalgebras of the same kind".into(),
            ));
        }
        check_family(&source, &target, &taylor, 0)?;
        Ok(Self {
            kind: OperatorKind::Morphism,
            source,
            target,
            taylor: taylor.into_iter().filter(|(_, m)| !m.is_zero()).collect(),
            cache: RwLock::new(HashMap::new()),
        })
    }

    pub fn kind(&self) -> OperatorKind {
        self.kind
    }

    /// Degree of the operator (zero for morphisms).
    pub fn degree(&self) -> i64 {
        match self.kind {
            OperatorKind::Coderivation { degree } => degree,
            OperatorKind::Morphism => 0,
        }
    }

    pub fn source(&self) -> &Coalgebra {
        &self.source
    }

    pub fn target(&self) -> &Coalgebra {
        &self.target
    }

    pub fn taylor(&self, arity: usize) -> Option<&MultilinearMap> {
        self.taylor.get(&arity)
    }

    pub fn taylor_family(&self) -> &BTreeMap<usize, MultilinearMap> {
        &self.taylor
    }

    /// Image of one canonical basis word.
    pub fn evaluate_word(&self, w: &[usize]) -> WordSum {
        if let Some(hit) = self.cache.read().expect("cache lock").get(w) {
            return hit.clone();
        }
        let value = match (self.kind, self.source.kind()) {
            (OperatorKind::Coderivation { degree }, CoalgebraKind::Tensor) => self.tensor_coderivation(w, degree),
            (OperatorKind::Coderivation { .. }, CoalgebraKind::Symmetric) => self.symmetric_coderivation(w),
            (OperatorKind::Morphism, _) => self.morphism_word(w),
        };
        self.cache
            .write()
            .expect("cache lock")
            .insert(w.to_vec(), value.clone());
        value
    }

    /// Linear extension of [`Self::evaluate_word`].
    pub fn evaluate(&self, ws: &WordSum) -> WordSum {
        let mut out = WordSum::new();
        for (w, c) in ws.iter() {
            out.add_assign_scaled(&self.evaluate_word(w), c);
        }
        out
    }

    fn tensor_coderivation(&self, w: &[usize], degree: i64) -> WordSum {
        let n = w.len();
        let ctx = self.source.sign_context(w);
        let mut out = WordSum::new();
        for mask in 1u64..(1u64 << n) {
            let positions: Vec<usize> = (0..n).filter(|i| mask >> i & 1 == 1).collect();
            let Some(q) = self.taylor.get(&positions.len()) else {
                continue;
            };
            let args: Vec<usize> = positions.iter().map(|&i| w[i]).collect();
            let value = q.eval_basis(&args);
            if value.is_zero() {
                continue;
            }
            let sign = epsilon_insertion(&ctx, &positions, degree).expect("valid positions");
            let last = *positions.last().unwrap();
            let prefix: Vec<usize> = (0..last)
                .filter(|i| mask >> i & 1 == 0)
                .map(|i| w[i])
                .collect();
            for (b, c) in value.iter() {
                let mut letters = prefix.clone();
                letters.push(b);
                letters.extend_from_slice(&w[last + 1..]);
                out.add_term(letters, &c.signed(sign));
            }
        }
        out
    }

    fn symmetric_coderivation(&self, w: &[usize]) -> WordSum {
        let n = w.len();
        let degrees: Vec<i64> = w.iter().map(|&l| self.source.letter_degree(l)).collect();
        let mut out = WordSum::new();
        for mask in 1u64..(1u64 << n) {
            let inside: Vec<usize> = (0..n).filter(|i| mask >> i & 1 == 1).collect();
            let Some(q) = self.taylor.get(&inside.len()) else {
                continue;
            };
            let args: Vec<usize> = inside.iter().map(|&i| w[i]).collect();
            let value = q.eval_basis(&args);
            if value.is_zero() {
                continue;
            }
            let outside: Vec<usize> = (0..n).filter(|i| mask >> i & 1 == 0).collect();
            let order: Vec<usize> = inside.iter().chain(outside.iter()).copied().collect();
            let sign = permutation_sign(&degrees, &order);
            for (b, c) in value.iter() {
                let mut letters = vec![b];
                letters.extend(outside.iter().map(|&i| w[i]));
                out.add_letters(&self.target, &letters, &c.signed(sign));
            }
        }
        out
    }

    /// Both kinds sum over respectful partitions: for symmetric targets the
    /// `1/j!` sum over all orderings of the blocks collapses to one ordering
    /// per set partition, because the product is graded-commutative.
    fn morphism_word(&self, w: &[usize]) -> WordSum {
        let n = w.len();
        let ctx = self.source.sign_context(w);
        let mut out = WordSum::new();
        for j in 1..=n {
            for p in respectful_partitions(n, j) {
                let mut values: Vec<Element> = Vec::with_capacity(j);
                for block in p.blocks() {
                    let args: Vec<usize> = block.iter().map(|&i| w[i]).collect();
                    let v = self
                        .taylor
                        .get(&block.len())
                        .map(|f| f.eval_basis(&args))
                        .unwrap_or_default();
                    if v.is_zero() {
                        break;
                    }
                    values.push(v);
                }
                if values.len() < j {
                    continue;
                }
                let sign = koszul_sign(&ctx, &p).expect("matching lengths");
                let mut letters = Vec::with_capacity(j);
                expand_product(&self.target, &values, &mut letters, None, sign, &mut out);
            }
        }
        out
    }

    /// Taylor coefficients recovered by projecting the images of all basis
    /// words of length `1..=max_arity` onto the generators.
    pub fn project_to_generators(&self, max_arity: usize) -> BTreeMap<usize, MultilinearMap> {
        let mut out = BTreeMap::new();
        for n in 1..=max_arity {
            let mut map = match self.source.kind() {
                CoalgebraKind::Tensor => MultilinearMap::new(n, self.source.dim(), self.target.dim(), self.degree()),
                CoalgebraKind::Symmetric => MultilinearMap::symmetric(
                    n,
                    self.source.degrees().to_vec(),
                    self.target.dim(),
                    self.degree(),
                ),
            };
            for w in self.source.basis_words(n) {
                let v = self.evaluate_word(&w).project_to_generators();
                map.add_entry(&w, &v).expect("projected entry");
            }
            out.insert(n, map);
        }
        out
    }
}

/// Adds `sign * prod(values)` as words (one letter per factor).
pub(crate) fn expand_product(
    target: &Coalgebra,
    values: &[Element],
    letters: &mut Vec<usize>,
    coeff: Option<&Scalar>,
    sign: i32,
    out: &mut WordSum,
) {
    let slot = letters.len();
    if slot == values.len() {
        if let Some(c) = coeff {
            out.add_letters(target, letters, &c.signed(sign));
        }
        return;
    }
    for (b, c) in values[slot].iter() {
        let next = match coeff {
            Some(acc) => acc * c,
            None => c.clone(),
        };
        if next.is_zero() {
            continue;
        }
        letters.push(b);
        expand_product(target, values, letters, Some(&next), sign, out);
        letters.pop();
    }
}

/// `a(b(w))` for one basis word.
pub fn compose_on(a: &CoalgebraOperator, b: &CoalgebraOperator, w: &[usize]) -> WordSum {
    a.evaluate(&b.evaluate_word(w))
}

/// `Q(Q(w))`.
pub fn square_on(q: &CoalgebraOperator, w: &[usize]) -> WordSum {
    compose_on(q, q, w)
}

/// Graded commutator `[a, b] = ab - (-1)^{|a||b|} ba` on one word.
pub fn commutator_on(a: &CoalgebraOperator, b: &CoalgebraOperator, w: &[usize]) -> WordSum {
    let mut out = compose_on(a, b, w);
    let ba = compose_on(b, a, w);
    if (a.degree() * b.degree()).rem_euclid(2) == 1 {
        out.add_assign(&ba);
    } else {
        out.sub_assign(&ba);
    }
    out
}

/// `(Q (x) id + id (x) Q)` on a sum of word pairs, with the Koszul sign
/// `(-1)^{|Q||a|}` on the second term.
pub fn coderivation_on_pairs(q: &CoalgebraOperator, pairs: &PairSum) -> PairSum {
    let coalg = q.source();
    let mut out = PairSum::new();
    for ((a, b), c) in pairs.iter() {
        for (qa, s) in q.evaluate_word(a).iter() {
            out.add_term((qa.clone(), b.clone()), &(c * s));
        }
        let sign = if (q.degree() * coalg.word_degree(a)).rem_euclid(2) == 1 { -1 } else { 1 };
        for (qb, s) in q.evaluate_word(b).iter() {
            out.add_term((a.clone(), qb.clone()), &(c * s).signed(sign));
        }
    }
    out
}

/// `(F (x) F)` on a sum of word pairs.
pub fn morphism_on_pairs(f: &CoalgebraOperator, pairs: &PairSum) -> PairSum {
    let mut out = PairSum::new();
    for ((a, b), c) in pairs.iter() {
        let fa = f.evaluate_word(a);
        let fb = f.evaluate_word(b);
        for (wa, sa) in fa.iter() {
            for (wb, sb) in fb.iter() {
                out.add_term((wa.clone(), wb.clone()), &(c * &(sa * sb)));
            }
        }
    }
    out
}

/// `Δ∘Q - (Q (x) id + id (x) Q)∘Δ` on one word.
pub fn coderivation_defect(q: &CoalgebraOperator, w: &[usize], order: u32) -> PairSum {
    let coalg = q.source();
    let lhs = coalg.comultiply(&q.evaluate_word(w));
    let rhs = coderivation_on_pairs(q, &coalg.comultiply(&coalg.word(w, order)));
    lhs.sub(&rhs)
}

/// `Δ'∘F - (F (x) F)∘Δ` on one word.
pub fn morphism_defect(f: &CoalgebraOperator, w: &[usize], order: u32) -> PairSum {
    let lhs = f.target().comultiply(&f.evaluate_word(w));
    let rhs = morphism_on_pairs(f, &f.source().comultiply(&f.source().word(w, order)));
    lhs.sub(&rhs)
}
