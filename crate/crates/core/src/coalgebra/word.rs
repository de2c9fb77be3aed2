use std::collections::BTreeMap;
use std::fmt;

use crate::error::{Error, Result};
use crate::graded::{Element, GradedSpace, Scalar};
use crate::signs::{canonicalize_symmetric, koszul_sign, two_block_partitions, SignContext};

/// Which coalgebra a word lives in.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum CoalgebraKind {
    /// The tensor coalgebra `T+(V)` with the shuffle coproduct.
    Tensor,
    /// The symmetric coalgebra `S+(V)`.
    Symmetric,
}

/// A basis word: letter indices, in canonical order for symmetric words.
pub type Word = Vec<usize>;

/// `T+(V)` or `S+(V)` for a finite-dimensional graded `V`, described by the
/// degree of each letter in the coalgebra's own grading.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Coalgebra {
    kind: CoalgebraKind,
    degrees: Vec<i64>,
}

impl Coalgebra {
    pub fn new(kind: CoalgebraKind, degrees: Vec<i64>) -> Self {
        Self { kind, degrees }
    }

    pub fn tensor(degrees: Vec<i64>) -> Self {
        Self::new(CoalgebraKind::Tensor, degrees)
    }

    pub fn symmetric(degrees: Vec<i64>) -> Self {
        Self::new(CoalgebraKind::Symmetric, degrees)
    }

    /// Coalgebra on the letters of `space`, shifted: a basis vector of degree
    /// `d` in `space` becomes a letter of degree `d + shift`.
    pub fn over(kind: CoalgebraKind, space: &GradedSpace, shift: i64) -> Self {
        Self::new(kind, space.degrees().into_iter().map(|d| d + shift).collect())
    }

    pub fn kind(&self) -> CoalgebraKind {
        self.kind
    }

    pub fn dim(&self) -> usize {
        self.degrees.len()
    }

    pub fn degrees(&self) -> &[i64] {
        &self.degrees
    }

    pub fn letter_degree(&self, letter: usize) -> i64 {
        self.degrees[letter]
    }

    pub fn word_degree(&self, w: &[usize]) -> i64 {
        w.iter().map(|&l| self.degrees[l]).sum()
    }

    pub fn sign_context(&self, w: &[usize]) -> SignContext {
        SignContext::new(w.iter().map(|&l| self.degrees[l]).collect())
    }

    /// Canonical representative of a letter sequence and the sign picked up
    /// getting there; `None` for a zero symmetric word.
    pub fn normalize(&self, letters: &[usize]) -> Option<(Word, i32)> {
        match self.kind {
            CoalgebraKind::Tensor => Some((letters.to_vec(), 1)),
            CoalgebraKind::Symmetric => canonicalize_symmetric(letters, &self.degrees),
        }
    }

    /// All nonzero canonical basis words of length `n`, sorted.
    pub fn basis_words(&self, n: usize) -> Vec<Word> {
        let dim = self.dim();
        let mut out = Vec::new();
        if n == 0 || dim == 0 {
            return out;
        }
        let mut w = vec![0usize; n];
        loop {
            if let Some((canon, _)) = self.normalize(&w) {
                if canon == w {
                    out.push(w.clone());
                }
            }
            let mut k = n;
            loop {
                if k == 0 {
                    out.sort();
                    return out;
                }
                k -= 1;
                w[k] += 1;
                if w[k] < dim {
                    break;
                }
                w[k] = 0;
            }
        }
    }

    /// All basis words of length `1..=max_len`.
    pub fn basis_words_up_to(&self, max_len: usize) -> Vec<Word> {
        (1..=max_len).flat_map(|n| self.basis_words(n)).collect()
    }

    /// A basis word as a one-term sum.
    pub fn word(&self, letters: &[usize], order: u32) -> WordSum {
        let mut out = WordSum::new();
        out.add_letters(self, letters, &Scalar::one(order));
        out
    }

    /// A one-letter sum per term of `x`.
    pub fn letter_sum(&self, x: &Element) -> WordSum {
        let mut out = WordSum::new();
        for (i, c) in x.iter() {
            out.add_term(vec![i], c);
        }
        out
    }

    /// Concatenation product (the shuffle-free product for tensor words, the
    /// graded-commutative product for symmetric words).
    pub fn product(&self, a: &WordSum, b: &WordSum) -> WordSum {
        let mut out = WordSum::new();
        for (wa, ca) in a.iter() {
            for (wb, cb) in b.iter() {
                let c = ca * cb;
                if c.is_zero() {
                    continue;
                }
                let mut letters = wa.clone();
                letters.extend_from_slice(wb);
                out.add_letters(self, &letters, &c);
            }
        }
        out
    }

    /// Reduced coproduct of a basis word: the ordered splittings `(I, J)`
    /// of the letters with their signs `eps(I, J)`, for `x_I | x_J`.
    pub fn comultiply_word(&self, w: &[usize]) -> Vec<((Word, Word), i32)> {
        if w.len() < 2 {
            return Vec::new();
        }
        let ctx = self.sign_context(w);
        two_block_partitions(w.len())
            .expect("nonempty word")
            .iter()
            .map(|p| {
                let sign = koszul_sign(&ctx, p).expect("matching lengths");
                let left: Word = p.blocks()[0].iter().map(|&i| w[i]).collect();
                let right: Word = p.blocks()[1].iter().map(|&i| w[i]).collect();
                ((left, right), sign)
            })
            .collect()
    }

    /// Reduced coproduct extended linearly.
    pub fn comultiply(&self, ws: &WordSum) -> PairSum {
        let mut out = PairSum::new();
        for (w, c) in ws.iter() {
            for (key, sign) in self.comultiply_word(w) {
                out.add_term(key, &c.signed(sign));
            }
        }
        out
    }

    /// `Σ_{n ≥ 1} α^n / n!`, stopping at `max_len` letters or when the
    /// powers vanish by truncation.
    pub fn group_like_exp(&self, alpha: &Element, order: u32, max_len: Option<usize>) -> Result<WordSum> {
        if self.kind != CoalgebraKind::Symmetric {
            return Err(Error::KindMismatch("exponentials live in the symmetric coalgebra".into()));
        }
        if max_len.is_none() && alpha.valuation() == Some(0) {
            return Err(Error::NonTruncating(
                "exponential of an element with a constant term".into(),
            ));
        }
        let letter = self.letter_sum(alpha);
        let mut out = WordSum::new();
        let mut power = letter.clone();
        let mut n: i64 = 1;
        let mut factorial = Scalar::one(order);
        while !power.is_zero() {
            if let Some(m) = max_len {
                if n as usize > m {
                    break;
                }
            }
            out.add_assign_scaled(&power, &factorial);
            n += 1;
            factorial = factorial.div_int(n)?;
            power = self.product(&power, &letter);
        }
        Ok(out)
    }
}

/// A sparse linear combination of basis words.
#[derive(Clone, Default, PartialEq, Eq, Hash)]
pub struct WordSum {
    terms: BTreeMap<Word, Scalar>,
}

impl WordSum {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&Word, &Scalar)> {
        self.terms.iter()
    }

    pub fn get(&self, w: &[usize]) -> Option<&Scalar> {
        self.terms.get(w)
    }

    /// Adds `c` times an already canonical word.
    pub fn add_term(&mut self, w: Word, c: &Scalar) {
        if c.is_zero() {
            return;
        }
        match self.terms.get_mut(&w) {
            Some(existing) => {
                *existing += c;
                if existing.is_zero() {
                    self.terms.remove(&w);
                }
            }
            None => {
                self.terms.insert(w, c.clone());
            }
        }
    }

    /// Adds `c` times an arbitrary letter sequence, normalized in `coalg`.
    pub fn add_letters(&mut self, coalg: &Coalgebra, letters: &[usize], c: &Scalar) {
        if let Some((w, sign)) = coalg.normalize(letters) {
            self.add_term(w, &c.signed(sign));
        }
    }

    pub fn add_assign(&mut self, other: &WordSum) {
        for (w, c) in other.iter() {
            self.add_term(w.clone(), c);
        }
    }

    pub fn sub_assign(&mut self, other: &WordSum) {
        for (w, c) in other.iter() {
            self.add_term(w.clone(), &-c);
        }
    }

    pub fn add_assign_scaled(&mut self, other: &WordSum, s: &Scalar) {
        for (w, c) in other.iter() {
            self.add_term(w.clone(), &(c * s));
        }
    }

    pub fn sub(&self, other: &WordSum) -> WordSum {
        let mut out = self.clone();
        out.sub_assign(other);
        out
    }

    pub fn scale(&self, s: &Scalar) -> WordSum {
        let mut out = WordSum::new();
        out.add_assign_scaled(self, s);
        out
    }

    /// The terms made of exactly `n` letters.
    pub fn of_length(&self, n: usize) -> WordSum {
        WordSum {
            terms: self
                .terms
                .iter()
                .filter(|(w, _)| w.len() == n)
                .map(|(w, c)| (w.clone(), c.clone()))
                .collect(),
        }
    }

    /// The terms with at most `n` letters.
    pub fn up_to_length(&self, n: usize) -> WordSum {
        WordSum {
            terms: self
                .terms
                .iter()
                .filter(|(w, _)| w.len() <= n)
                .map(|(w, c)| (w.clone(), c.clone()))
                .collect(),
        }
    }

    /// Projection onto the generators (the one-letter part).
    pub fn project_to_generators(&self) -> Element {
        Element::from_terms(
            self.terms
                .iter()
                .filter(|(w, _)| w.len() == 1)
                .map(|(w, c)| (w[0], c.clone())),
        )
    }

    pub fn max_len(&self) -> usize {
        self.terms.keys().map(Vec::len).max().unwrap_or(0)
    }

    pub fn display<'a>(&'a self, space: &'a GradedSpace) -> WordSumDisplay<'a> {
        WordSumDisplay { sum: self, space }
    }
}

impl fmt::Debug for WordSum {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_map()
            .entries(self.terms.iter().map(|(w, c)| (w, c.to_string())))
            .finish()
    }
}

pub struct WordSumDisplay<'a> {
    sum: &'a WordSum,
    space: &'a GradedSpace,
}

impl fmt::Display for WordSumDisplay<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.sum.is_zero() {
            return write!(f, "0");
        }
        for (k, (w, c)) in self.sum.iter().enumerate() {
            if k > 0 {
                write!(f, " + ")?;
            }
            let names: Vec<&str> = w.iter().map(|&l| self.space.name(l)).collect();
            write!(f, "({c})*{}", names.join("|"))?;
        }
        Ok(())
    }
}

/// A sparse combination of pairs of words (elements of `C (x) C`).
#[derive(Clone, Default, PartialEq, Eq)]
pub struct PairSum {
    terms: BTreeMap<(Word, Word), Scalar>,
}

impl PairSum {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&(Word, Word), &Scalar)> {
        self.terms.iter()
    }

    pub fn add_term(&mut self, key: (Word, Word), c: &Scalar) {
        if c.is_zero() {
            return;
        }
        match self.terms.get_mut(&key) {
            Some(existing) => {
                *existing += c;
                if existing.is_zero() {
                    self.terms.remove(&key);
                }
            }
            None => {
                self.terms.insert(key, c.clone());
            }
        }
    }

    pub fn add_assign(&mut self, other: &PairSum) {
        for (k, c) in other.iter() {
            self.add_term(k.clone(), c);
        }
    }

    pub fn sub(&self, other: &PairSum) -> PairSum {
        let mut out = self.clone();
        for (k, c) in other.iter() {
            out.add_term(k.clone(), &-c);
        }
        out
    }
}

impl fmt::Debug for PairSum {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_map()
            .entries(self.terms.iter().map(|(w, c)| (w, c.to_string())))
            .finish()
    }
}
