//! Truncated polynomials `Q[t]/(t^K)` with arbitrary-precision rational
//! coefficients.

use std::fmt;
use std::ops::{Add, AddAssign, Mul, Neg, Sub, SubAssign};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Parses `"p/q"`, `"p"` or `"-p/q"` into an exact rational.
pub fn parse_rational(s: &str) -> Result<BigRational> {
    let s = s.trim();
    let bad = || Error::BadRational(s.to_string());
    let (num, den) = match s.split_once('/') {
        Some((n, d)) => (n.trim(), d.trim()),
        None => (s, "1"),
    };
    let num: BigInt = num.parse().map_err(|_| bad())?;
    let den: BigInt = den.parse().map_err(|_| bad())?;
    if den.is_zero() {
        return Err(bad());
    }
    Ok(BigRational::new(num, den))
}

/// Formats a rational as `"p/q"` (or `"p"` for integers).
pub fn format_rational(q: &BigRational) -> String {
    if q.denom().is_one() {
        q.numer().to_string()
    } else {
        format!("{}/{}", q.numer(), q.denom())
    }
}

pub fn rational(num: i64, den: i64) -> BigRational {
    BigRational::new(BigInt::from(num), BigInt::from(den))
}

/// One serialized monomial of a [`Scalar`].
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TermRepr {
    pub exp: u32,
    pub coeff: String,
}

/// An element of `Q[t]/(t^K)`.
///
/// Terms are kept sorted by exponent; exponents `>= K` and zero
/// coefficients are never stored.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Scalar {
    order: u32,
    terms: Vec<(u32, BigRational)>,
}

impl Scalar {
    pub fn zero(order: u32) -> Self {
        assert!(order >= 1, "truncation order must be positive");
        Self {
            order,
            terms: Vec::new(),
        }
    }

    pub fn one(order: u32) -> Self {
        Self::from_rational(BigRational::one(), order)
    }

    pub fn from_int(n: i64, order: u32) -> Self {
        Self::from_rational(BigRational::from_integer(n.into()), order)
    }

    pub fn from_rational(q: BigRational, order: u32) -> Self {
        Self::monomial(q, 0, order)
    }

    /// `q * t^exp`, already truncated.
    pub fn monomial(q: BigRational, exp: u32, order: u32) -> Self {
        let mut s = Self::zero(order);
        if exp < order && !q.is_zero() {
            s.terms.push((exp, q));
        }
        s
    }

    /// Builds a scalar from arbitrary `(exp, coeff)` pairs, merging repeats.
    pub fn from_terms<I>(terms: I, order: u32) -> Self
    where
        I: IntoIterator<Item = (u32, BigRational)>,
    {
        let mut s = Self::zero(order);
        for (e, q) in terms {
            s += &Self::monomial(q, e, order);
        }
        s
    }

    pub fn order(&self) -> u32 {
        self.order
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> &[(u32, BigRational)] {
        &self.terms
    }

    /// Coefficient of `t^exp` (zero when absent).
    pub fn coeff(&self, exp: u32) -> BigRational {
        self.terms
            .iter()
            .find(|(e, _)| *e == exp)
            .map(|(_, q)| q.clone())
            .unwrap_or_else(BigRational::zero)
    }

    /// Least stored exponent; `None` stands for +infinity (the zero scalar).
    pub fn valuation(&self) -> Option<u32> {
        self.terms.first().map(|(e, _)| *e)
    }

    /// True when the scalar is a pure rational (no positive powers of `t`).
    pub fn is_constant(&self) -> bool {
        self.terms.iter().all(|(e, _)| *e == 0)
    }

    pub fn scale(&self, q: &BigRational) -> Self {
        if q.is_zero() {
            return Self::zero(self.order);
        }
        Self {
            order: self.order,
            terms: self.terms.iter().map(|(e, c)| (*e, c * q)).collect(),
        }
    }

    pub fn scale_int(&self, n: i64) -> Self {
        self.scale(&BigRational::from_integer(n.into()))
    }

    /// Multiplication by `+1` or `-1`.
    pub fn signed(&self, sign: i32) -> Self {
        debug_assert!(sign == 1 || sign == -1);
        if sign < 0 {
            -self
        } else {
            self.clone()
        }
    }

    /// Exact division by a nonzero integer.
    pub fn div_int(&self, n: i64) -> Result<Self> {
        if n == 0 {
            return Err(Error::DivisionByZero);
        }
        Ok(self.scale(&BigRational::new(1.into(), n.into())))
    }

    /// Drops every term of exponent `>= exp`.
    pub fn truncated_below(&self, exp: u32) -> Self {
        Self {
            order: self.order,
            terms: self
                .terms
                .iter()
                .filter(|(e, _)| *e < exp)
                .cloned()
                .collect(),
        }
    }

    pub fn to_repr(&self) -> Vec<TermRepr> {
        self.terms
            .iter()
            .map(|(e, q)| TermRepr {
                exp: *e,
                coeff: format_rational(q),
            })
            .collect()
    }

    pub fn from_repr(repr: &[TermRepr], order: u32) -> Result<Self> {
        let mut terms = Vec::with_capacity(repr.len());
        for t in repr {
            terms.push((t.exp, parse_rational(&t.coeff)?));
        }
        Ok(Self::from_terms(terms, order))
    }

    fn check_order(&self, other: &Self) -> u32 {
        assert_eq!(
            self.order, other.order,
            "scalars with different truncation orders"
        );
        self.order
    }

    fn merge(&self, other: &Self, negate_other: bool) -> Self {
        let order = self.check_order(other);
        let mut out = Vec::with_capacity(self.terms.len() + other.terms.len());
        let (mut i, mut j) = (0, 0);
        while i < self.terms.len() || j < other.terms.len() {
            let take_left = j >= other.terms.len()
                || (i < self.terms.len() && self.terms[i].0 < other.terms[j].0);
            let take_right = i >= self.terms.len()
                || (j < other.terms.len() && other.terms[j].0 < self.terms[i].0);
            if take_left {
                out.push(self.terms[i].clone());
                i += 1;
            } else if take_right {
                let (e, q) = &other.terms[j];
                out.push((*e, if negate_other { -q } else { q.clone() }));
                j += 1;
            } else {
                let (e, a) = &self.terms[i];
                let b = &other.terms[j].1;
                let c = if negate_other { a - b } else { a + b };
                if !c.is_zero() {
                    out.push((*e, c));
                }
                i += 1;
                j += 1;
            }
        }
        Self { order, terms: out }
    }
}

impl Add<&Scalar> for &Scalar {
    type Output = Scalar;
    fn add(self, rhs: &Scalar) -> Scalar {
        self.merge(rhs, false)
    }
}

impl Sub<&Scalar> for &Scalar {
    type Output = Scalar;
    fn sub(self, rhs: &Scalar) -> Scalar {
        self.merge(rhs, true)
    }
}

impl Mul<&Scalar> for &Scalar {
    type Output = Scalar;
    fn mul(self, rhs: &Scalar) -> Scalar {
        let order = self.check_order(rhs);
        if self.is_zero() || rhs.is_zero() {
            return Scalar::zero(order);
        }
        let mut acc: Vec<BigRational> = vec![BigRational::zero(); order as usize];
        for (ea, a) in &self.terms {
            for (eb, b) in &rhs.terms {
                let e = ea + eb;
                if e < order {
                    acc[e as usize] += a * b;
                }
            }
        }
        Scalar {
            order,
            terms: acc
                .into_iter()
                .enumerate()
                .filter(|(_, q)| !q.is_zero())
                .map(|(e, q)| (e as u32, q))
                .collect(),
        }
    }
}

impl Neg for &Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        Scalar {
            order: self.order,
            terms: self.terms.iter().map(|(e, q)| (*e, -q)).collect(),
        }
    }
}

impl Neg for Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        -&self
    }
}

impl Add for Scalar {
    type Output = Scalar;
    fn add(self, rhs: Scalar) -> Scalar {
        &self + &rhs
    }
}

impl Sub for Scalar {
    type Output = Scalar;
    fn sub(self, rhs: Scalar) -> Scalar {
        &self - &rhs
    }
}

impl Mul for Scalar {
    type Output = Scalar;
    fn mul(self, rhs: Scalar) -> Scalar {
        &self * &rhs
    }
}

impl AddAssign<&Scalar> for Scalar {
    fn add_assign(&mut self, rhs: &Scalar) {
        *self = &*self + rhs;
    }
}

impl SubAssign<&Scalar> for Scalar {
    fn sub_assign(&mut self, rhs: &Scalar) {
        *self = &*self - rhs;
    }
}

impl fmt::Display for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (k, (e, q)) in self.terms.iter().enumerate() {
            let (sign, abs) = if q.is_negative() {
                ("-", -q)
            } else {
                ("+", q.clone())
            };
            if k == 0 {
                if sign == "-" {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {sign} ")?;
            }
            match e {
                0 => write!(f, "{}", format_rational(&abs))?,
                1 => write!(f, "{} t", format_rational(&abs))?,
                _ => write!(f, "{} t^{}", format_rational(&abs), e)?,
            }
        }
        Ok(())
    }
}

impl fmt::Debug for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Scalar({self} mod t^{})", self.order)
    }
}
