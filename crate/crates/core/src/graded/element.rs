use std::collections::BTreeMap;
use std::fmt;

use num_rational::BigRational;

use super::scalar::Scalar;
use super::space::GradedSpace;

/// A sparse vector: basis index to nonzero [`Scalar`] coefficient.
#[derive(Clone, Default, PartialEq, Eq, Hash)]
pub struct Element {
    terms: BTreeMap<usize, Scalar>,
}

impl Element {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn basis(i: usize, order: u32) -> Self {
        Self::term(i, Scalar::one(order))
    }

    pub fn term(i: usize, c: Scalar) -> Self {
        let mut e = Self::zero();
        e.add_term(i, &c);
        e
    }

    pub fn from_terms<I: IntoIterator<Item = (usize, Scalar)>>(terms: I) -> Self {
        let mut e = Self::zero();
        for (i, c) in terms {
            e.add_term(i, &c);
        }
        e
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

    pub fn iter(&self) -> impl Iterator<Item = (usize, &Scalar)> {
        self.terms.iter().map(|(i, c)| (*i, c))
    }

    pub fn get(&self, i: usize) -> Option<&Scalar> {
        self.terms.get(&i)
    }

    pub fn add_term(&mut self, i: usize, c: &Scalar) {
        if c.is_zero() {
            return;
        }
        match self.terms.get_mut(&i) {
            Some(existing) => {
                *existing += c;
                if existing.is_zero() {
                    self.terms.remove(&i);
                }
            }
            None => {
                self.terms.insert(i, c.clone());
            }
        }
    }

    pub fn add_assign_scaled(&mut self, other: &Element, c: &Scalar) {
        for (i, x) in other.iter() {
            self.add_term(i, &(x * c));
        }
    }

    pub fn add_assign(&mut self, other: &Element) {
        for (i, x) in other.iter() {
            self.add_term(i, x);
        }
    }

    pub fn sub_assign(&mut self, other: &Element) {
        for (i, x) in other.iter() {
            self.add_term(i, &-x);
        }
    }

    pub fn add(&self, other: &Element) -> Element {
        let mut out = self.clone();
        out.add_assign(other);
        out
    }

    pub fn sub(&self, other: &Element) -> Element {
        let mut out = self.clone();
        out.sub_assign(other);
        out
    }

    pub fn neg(&self) -> Element {
        Element {
            terms: self.terms.iter().map(|(i, c)| (*i, -c)).collect(),
        }
    }

    pub fn scale(&self, c: &Scalar) -> Element {
        Element::from_terms(self.terms.iter().map(|(i, x)| (*i, x * c)))
    }

    pub fn scale_rational(&self, q: &BigRational) -> Element {
        Element::from_terms(self.terms.iter().map(|(i, x)| (*i, x.scale(q))))
    }

    pub fn signed(&self, sign: i32) -> Element {
        if sign < 0 {
            self.neg()
        } else {
            self.clone()
        }
    }

    /// Smallest valuation among the coefficients (`None` for zero).
    pub fn valuation(&self) -> Option<u32> {
        self.terms.values().filter_map(Scalar::valuation).min()
    }

    /// The common degree of all terms, if the element is homogeneous and
    /// nonzero.
    pub fn degree_in(&self, space: &GradedSpace) -> Option<i64> {
        let mut it = self.terms.keys().map(|&i| space.degree(i));
        let first = it.next()?;
        it.all(|d| d == first).then_some(first)
    }

    pub fn max_index(&self) -> Option<usize> {
        self.terms.keys().next_back().copied()
    }

    /// Human-readable rendering with basis names.
    pub fn display<'a>(&'a self, space: &'a GradedSpace) -> ElementDisplay<'a> {
        ElementDisplay {
            element: self,
            space,
        }
    }
}

impl fmt::Debug for Element {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_map()
            .entries(self.terms.iter().map(|(i, c)| (i, c.to_string())))
            .finish()
    }
}

pub struct ElementDisplay<'a> {
    element: &'a Element,
    space: &'a GradedSpace,
}

impl fmt::Display for ElementDisplay<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.element.is_zero() {
            return write!(f, "0");
        }
        for (k, (i, c)) in self.element.iter().enumerate() {
            if k > 0 {
                write!(f, " + ")?;
            }
            write!(f, "({c})*{}", self.space.name(i))?;
        }
        Ok(())
    }
}
