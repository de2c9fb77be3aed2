use std::collections::BTreeMap;

use super::element::Element;
use super::scalar::Scalar;
use crate::error::{Error, Result};
use crate::signs::canonicalize_symmetric;

/// Symmetry of a multilinear map in its arguments.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Symmetry {
    /// No symmetry: every index tuple is stored independently.
    None,
    /// Graded-symmetric with respect to the given letter degrees; only
    /// canonically sorted tuples are stored.
    Graded(Vec<i64>),
}

/// A sparse multilinear map `V^{(x) n} -> W` given on basis tuples.
///
/// The degree shift is relative to whatever gradings the caller validates
/// it against (see [`MultilinearMap::check_degrees`]).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MultilinearMap {
    arity: usize,
    source_dim: usize,
    target_dim: usize,
    shift: i64,
    symmetry: Symmetry,
    entries: BTreeMap<Vec<usize>, Element>,
}

impl MultilinearMap {
    pub fn new(arity: usize, source_dim: usize, target_dim: usize, shift: i64) -> Self {
        Self {
            arity,
            source_dim,
            target_dim,
            shift,
            symmetry: Symmetry::None,
            entries: BTreeMap::new(),
        }
    }

    /// A graded-symmetric map; `letter_degrees` has one entry per source
    /// basis vector.
    pub fn symmetric(arity: usize, letter_degrees: Vec<i64>, target_dim: usize, shift: i64) -> Self {
        Self {
            arity,
            source_dim: letter_degrees.len(),
            target_dim,
            shift,
            symmetry: Symmetry::Graded(letter_degrees),
            entries: BTreeMap::new(),
        }
    }

    pub fn arity(&self) -> usize {
        self.arity
    }

    pub fn source_dim(&self) -> usize {
        self.source_dim
    }

    pub fn target_dim(&self) -> usize {
        self.target_dim
    }

    pub fn shift(&self) -> i64 {
        self.shift
    }

    pub fn symmetry(&self) -> &Symmetry {
        &self.symmetry
    }

    pub fn is_zero(&self) -> bool {
        self.entries.is_empty()
    }

    /// Stored entries (canonical keys for symmetric maps).
    pub fn entries(&self) -> impl Iterator<Item = (&[usize], &Element)> {
        self.entries.iter().map(|(k, v)| (k.as_slice(), v))
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    /// Storage key and sign for a basis tuple; `None` for a tuple that is
    /// zero by graded symmetry.
    fn key(&self, tuple: &[usize]) -> Option<(Vec<usize>, i32)> {
        match &self.symmetry {
            Symmetry::None => Some((tuple.to_vec(), 1)),
            Symmetry::Graded(degrees) => canonicalize_symmetric(tuple, degrees),
        }
    }

    fn check_tuple(&self, tuple: &[usize]) -> Result<()> {
        if tuple.len() != self.arity {
            return Err(Error::ArityMismatch {
                expected: self.arity,
                got: tuple.len(),
            });
        }
        if let Some(&bad) = tuple.iter().find(|&&i| i >= self.source_dim) {
            return Err(Error::IndexOutOfRange {
                index: bad,
                dim: self.source_dim,
            });
        }
        Ok(())
    }

    /// Adds `value` to the entry at `tuple`. For symmetric maps the value is
    /// moved to the canonical tuple with its Koszul sign; values on tuples
    /// that vanish by symmetry are rejected unless zero.
    pub fn add_entry(&mut self, tuple: &[usize], value: &Element) -> Result<()> {
        self.check_tuple(tuple)?;
        if let Some(&bad) = value.max_index().iter().find(|&&i| i >= self.target_dim) {
            return Err(Error::IndexOutOfRange {
                index: bad,
                dim: self.target_dim,
            });
        }
        if value.is_zero() {
            return Ok(());
        }
        let Some((key, sign)) = self.key(tuple) else {
            return Err(Error::Degree(format!(
                "tuple {tuple:?} repeats an odd letter and must map to zero"
            )));
        };
        let slot = self.entries.entry(key.clone()).or_default();
        slot.add_assign(&value.signed(sign));
        if slot.is_zero() {
            self.entries.remove(&key);
        }
        Ok(())
    }

    /// Value on a basis tuple.
    pub fn eval_basis(&self, tuple: &[usize]) -> Element {
        match self.key(tuple) {
            Some((key, sign)) => self
                .entries
                .get(&key)
                .map(|v| v.signed(sign))
                .unwrap_or_default(),
            None => Element::zero(),
        }
    }

    /// Multilinear evaluation on arbitrary elements.
    pub fn apply(&self, args: &[&Element]) -> Result<Element> {
        if args.len() != self.arity {
            return Err(Error::ArityMismatch {
                expected: self.arity,
                got: args.len(),
            });
        }
        for a in args {
            if let Some(i) = a.max_index() {
                if i >= self.source_dim {
                    return Err(Error::IndexOutOfRange {
                        index: i,
                        dim: self.source_dim,
                    });
                }
            }
        }
        let mut out = Element::zero();
        if self.entries.is_empty() || args.iter().any(|a| a.is_zero()) {
            return Ok(out);
        }
        let mut tuple = Vec::with_capacity(self.arity);
        self.expand(args, &mut tuple, None, &mut out);
        Ok(out)
    }

    fn expand(&self, args: &[&Element], tuple: &mut Vec<usize>, coeff: Option<&Scalar>, out: &mut Element) {
        let slot = tuple.len();
        if slot == args.len() {
            let value = self.eval_basis(tuple);
            if let Some(c) = coeff {
                out.add_assign_scaled(&value, c);
            }
            return;
        }
        for (i, c) in args[slot].iter() {
            let next = match coeff {
                Some(acc) => acc * c,
                None => c.clone(),
            };
            if next.is_zero() {
                continue;
            }
            tuple.push(i);
            self.expand(args, tuple, Some(&next), out);
            tuple.pop();
        }
    }

    /// Checks `deg(output) = sum(deg(inputs)) + shift` on every entry.
    pub fn check_degrees(&self, source_degrees: &[i64], target_degrees: &[i64]) -> Result<()> {
        for (key, value) in &self.entries {
            let want: i64 = key.iter().map(|&i| source_degrees[i]).sum::<i64>() + self.shift;
            for (o, _) in value.iter() {
                if target_degrees[o] != want {
                    return Err(Error::Degree(format!(
                        "entry {key:?} has an output of degree {} instead of {want}",
                        target_degrees[o]
                    )));
                }
            }
        }
        Ok(())
    }

    /// Entry-wise sum (both maps must have the same shape).
    pub fn add(&self, other: &MultilinearMap) -> Result<MultilinearMap> {
        if self.arity != other.arity || self.symmetry != other.symmetry {
            return Err(Error::KindMismatch("adding maps of different shapes".into()));
        }
        let mut out = self.clone();
        for (k, v) in &other.entries {
            out.add_entry(k, v)?;
        }
        Ok(out)
    }

    pub fn scale(&self, c: &Scalar) -> MultilinearMap {
        let mut out = self.clone();
        out.entries = self
            .entries
            .iter()
            .map(|(k, v)| (k.clone(), v.scale(c)))
            .filter(|(_, v)| !v.is_zero())
            .collect();
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graded::scalar::rational;

    fn b(i: usize) -> Element {
        Element::basis(i, 3)
    }

    #[test]
    fn zero_argument_gives_zero() {
        let mut f = MultilinearMap::new(2, 3, 3, 0);
        f.add_entry(&[0, 1], &b(2)).unwrap();
        assert!(f.apply(&[&Element::zero(), &b(1)]).unwrap().is_zero());
    }

    #[test]
    fn single_entry() {
        let mut f = MultilinearMap::new(2, 3, 3, 0);
        f.add_entry(&[0, 1], &b(2)).unwrap();
        assert_eq!(f.apply(&[&b(0), &b(1)]).unwrap(), b(2));
        assert!(f.apply(&[&b(1), &b(0)]).unwrap().is_zero());
    }

    #[test]
    fn bilinear_expansion() {
        let mut f = MultilinearMap::new(2, 3, 3, 0);
        f.add_entry(&[0, 0], &b(1)).unwrap();
        f.add_entry(&[1, 0], &b(2)).unwrap();
        let s = b(0).add(&b(1));
        assert_eq!(f.apply(&[&s, &b(0)]).unwrap(), b(1).add(&b(2)));
    }

    #[test]
    fn arity_and_range_errors() {
        let f = MultilinearMap::new(2, 2, 2, 0);
        assert!(matches!(f.apply(&[&b(0)]), Err(Error::ArityMismatch { .. })));
        assert!(matches!(
            f.apply(&[&b(0), &b(2)]),
            Err(Error::IndexOutOfRange { .. })
        ));
    }

    #[test]
    fn symmetric_storage_uses_koszul_signs() {
        // letters 0 and 1 odd
        let mut f = MultilinearMap::symmetric(2, vec![1, 1, 0], 3, 0);
        f.add_entry(&[1, 0], &b(2)).unwrap();
        assert_eq!(f.eval_basis(&[0, 1]), b(2).neg());
        assert_eq!(f.eval_basis(&[1, 0]), b(2));
        assert!(f.add_entry(&[0, 0], &b(2)).is_err());
        let scaled = f.scale(&Scalar::from_rational(rational(1, 2), 3));
        assert_eq!(
            scaled.eval_basis(&[1, 0]),
            Element::term(2, Scalar::from_rational(rational(1, 2), 3))
        );
    }

    #[test]
    fn degree_check() {
        let mut f = MultilinearMap::new(1, 2, 2, 1);
        f.add_entry(&[0], &b(1)).unwrap();
        assert!(f.check_degrees(&[0, 1], &[0, 1]).is_ok());
        assert!(f.check_degrees(&[0, 2], &[0, 2]).is_err());
    }
}
