//! Sparse integer Laurent polynomials in one and two variables.
//!
//! Coefficients are `i128` with checked arithmetic; an overflow panics rather
//! than wrapping silently.

use std::cmp::Ordering;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum PolyParseError {
    #[error("malformed term `{0}`")]
    Term(String),
    #[error("malformed exponent in `{0}`")]
    Exponent(String),
}

fn add_coeff(a: i128, b: i128) -> i128 {
    a.checked_add(b).expect("polynomial coefficient overflow")
}

fn mul_coeff(a: i128, b: i128) -> i128 {
    a.checked_mul(b).expect("polynomial coefficient overflow")
}

/// Merge two sorted term lists, dropping zero coefficients.
fn merge<K: Ord + Copy>(a: &[(K, i128)], b: &[(K, i128)], sign: i128) -> Vec<(K, i128)> {
    let mut out = Vec::with_capacity(a.len() + b.len());
    let (mut i, mut j) = (0, 0);
    while i < a.len() && j < b.len() {
        match a[i].0.cmp(&b[j].0) {
            Ordering::Less => {
                out.push(a[i]);
                i += 1;
            }
            Ordering::Greater => {
                out.push((b[j].0, mul_coeff(sign, b[j].1)));
                j += 1;
            }
            Ordering::Equal => {
                let c = add_coeff(a[i].1, mul_coeff(sign, b[j].1));
                if c != 0 {
                    out.push((a[i].0, c));
                }
                i += 1;
                j += 1;
            }
        }
    }
    out.extend_from_slice(&a[i..]);
    out.extend(b[j..].iter().map(|&(k, c)| (k, mul_coeff(sign, c))));
    out
}

fn normalize<K: Ord + Copy>(mut terms: Vec<(K, i128)>) -> Vec<(K, i128)> {
    terms.sort_by_key(|x| x.0);
    let mut out: Vec<(K, i128)> = Vec::with_capacity(terms.len());
    for (k, c) in terms {
        match out.last_mut() {
            Some(last) if last.0 == k => last.1 = add_coeff(last.1, c),
            _ => out.push((k, c)),
        }
    }
    out.retain(|t| t.1 != 0);
    out
}

/// Laurent polynomial in one variable, terms sorted by exponent.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Laurent {
    terms: Vec<(i32, i128)>,
}

impl Laurent {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn one() -> Self {
        Self::monomial(0, 1)
    }

    pub fn monomial(exp: i32, coeff: i128) -> Self {
        if coeff == 0 {
            Self::zero()
        } else {
            Self { terms: vec![(exp, coeff)] }
        }
    }

    pub fn from_terms(terms: impl IntoIterator<Item = (i32, i128)>) -> Self {
        Self { terms: normalize(terms.into_iter().collect()) }
    }

    pub fn terms(&self) -> &[(i32, i128)] {
        &self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn min_exp(&self) -> Option<i32> {
        self.terms.first().map(|t| t.0)
    }

    pub fn max_exp(&self) -> Option<i32> {
        self.terms.last().map(|t| t.0)
    }

    pub fn span(&self) -> Option<i32> {
        Some(self.max_exp()? - self.min_exp()?)
    }

    pub fn coeff(&self, exp: i32) -> i128 {
        self.terms
            .binary_search_by(|t| t.0.cmp(&exp))
            .map(|i| self.terms[i].1)
            .unwrap_or(0)
    }

    /// Multiply by `x^k`.
    pub fn shift(&self, k: i32) -> Self {
        Self { terms: self.terms.iter().map(|&(e, c)| (e + k, c)).collect() }
    }

    pub fn scale(&self, s: i128) -> Self {
        if s == 0 {
            return Self::zero();
        }
        Self { terms: self.terms.iter().map(|&(e, c)| (e, mul_coeff(c, s))).collect() }
    }

    /// Substitute `x -> x^k`; `k = -1` is the mirror substitution.
    pub fn substitute_power(&self, k: i32) -> Self {
        Self::from_terms(self.terms.iter().map(|&(e, c)| (e * k, c)))
    }

    pub fn mirror(&self) -> Self {
        self.substitute_power(-1)
    }

    /// Divide all exponents by `d`; `None` if some exponent is not a multiple.
    pub fn divide_exponents(&self, d: i32) -> Option<Self> {
        if self.terms.iter().any(|t| t.0 % d != 0) {
            return None;
        }
        Some(Self::from_terms(self.terms.iter().map(|&(e, c)| (e / d, c))))
    }

    /// Exact division; `None` if `divisor` does not divide `self`.
    pub fn div_exact(&self, divisor: &Laurent) -> Option<Self> {
        let (&(dlead_e, dlead_c), _) = divisor.terms.split_last()?;
        let mut rem = self.clone();
        let mut quot = Vec::new();
        while let Some(&(e, c)) = rem.terms.last() {
            if c % dlead_c != 0 {
                return None;
            }
            let q = (e - dlead_e, c / dlead_c);
            if let (Some(rmin), Some(dmin)) = (rem.min_exp(), divisor.min_exp()) {
                if q.0 + dmin < rmin {
                    return None;
                }
            }
            quot.push(q);
            rem = &rem - &divisor.shift(q.0).scale(q.1);
        }
        Some(Self::from_terms(quot))
    }

    /// Mirror-canonical representative: the smaller of `p` and `p(x^-1)`.
    pub fn mirror_canonical(&self) -> Self {
        let m = self.mirror();
        if m < *self {
            m
        } else {
            self.clone()
        }
    }

    pub fn pow(&self, k: u32) -> Self {
        let mut out = Self::one();
        for _ in 0..k {
            out = &out * self;
        }
        out
    }
}

impl std::ops::Add for &Laurent {
    type Output = Laurent;
    fn add(self, rhs: &Laurent) -> Laurent {
        Laurent { terms: merge(&self.terms, &rhs.terms, 1) }
    }
}

impl std::ops::Sub for &Laurent {
    type Output = Laurent;
    fn sub(self, rhs: &Laurent) -> Laurent {
        Laurent { terms: merge(&self.terms, &rhs.terms, -1) }
    }
}

impl std::ops::Neg for &Laurent {
    type Output = Laurent;
    fn neg(self) -> Laurent {
        self.scale(-1)
    }
}

impl std::ops::Mul for &Laurent {
    type Output = Laurent;
    fn mul(self, rhs: &Laurent) -> Laurent {
        let mut terms = Vec::with_capacity(self.terms.len() * rhs.terms.len());
        for &(e1, c1) in &self.terms {
            for &(e2, c2) in &rhs.terms {
                terms.push((e1 + e2, mul_coeff(c1, c2)));
            }
        }
        Laurent::from_terms(terms)
    }
}

impl fmt::Display for Laurent {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (i, (e, c)) in self.terms.iter().enumerate() {
            if i > 0 {
                write!(f, " + ")?;
            }
            write!(f, "{c} t^{e}")?;
        }
        Ok(())
    }
}

impl FromStr for Laurent {
    type Err = PolyParseError;

    /// Parses the `Display` form, e.g. `1 t^1 + -1 t^4`.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let s = s.trim();
        if s == "0" {
            return Ok(Self::zero());
        }
        let mut terms = Vec::new();
        for part in s.split(" + ") {
            let (c, rest) = part.trim().split_once(' ').ok_or_else(|| PolyParseError::Term(part.into()))?;
            let c: i128 = c.parse().map_err(|_| PolyParseError::Term(part.into()))?;
            let e = parse_exp(rest, 't').ok_or_else(|| PolyParseError::Exponent(part.into()))?;
            terms.push((e, c));
        }
        Ok(Self::from_terms(terms))
    }
}

fn parse_exp(s: &str, var: char) -> Option<i32> {
    s.trim().strip_prefix(var)?.strip_prefix('^')?.parse().ok()
}

/// Laurent polynomial in `a` and `z`, terms sorted by `(a exponent, z exponent)`.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Laurent2 {
    terms: Vec<((i32, i32), i128)>,
}

impl Laurent2 {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn one() -> Self {
        Self::monomial(0, 0, 1)
    }

    pub fn monomial(a: i32, z: i32, coeff: i128) -> Self {
        if coeff == 0 {
            Self::zero()
        } else {
            Self { terms: vec![((a, z), coeff)] }
        }
    }

    pub fn from_terms(terms: impl IntoIterator<Item = ((i32, i32), i128)>) -> Self {
        Self { terms: normalize(terms.into_iter().collect()) }
    }

    pub fn terms(&self) -> &[((i32, i32), i128)] {
        &self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// Difference between the largest and smallest `a` exponent.
    pub fn a_span(&self) -> Option<i32> {
        let lo = self.terms.first()?.0 .0;
        let hi = self.terms.last()?.0 .0;
        Some(hi - lo)
    }

    /// Multiply by `a^da z^dz`.
    pub fn shift(&self, da: i32, dz: i32) -> Self {
        Self { terms: self.terms.iter().map(|&((a, z), c)| ((a + da, z + dz), c)).collect() }
    }

    pub fn scale(&self, s: i128) -> Self {
        if s == 0 {
            return Self::zero();
        }
        Self { terms: self.terms.iter().map(|&(k, c)| (k, mul_coeff(c, s))).collect() }
    }

    /// Substitute `a -> a^-1`.
    pub fn mirror(&self) -> Self {
        Self::from_terms(self.terms.iter().map(|&((a, z), c)| ((-a, z), c)))
    }

    pub fn mirror_canonical(&self) -> Self {
        let m = self.mirror();
        if m < *self {
            m
        } else {
            self.clone()
        }
    }

    pub fn pow(&self, k: u32) -> Self {
        let mut out = Self::one();
        for _ in 0..k {
            out = &out * self;
        }
        out
    }
}

impl std::ops::Add for &Laurent2 {
    type Output = Laurent2;
    fn add(self, rhs: &Laurent2) -> Laurent2 {
        Laurent2 { terms: merge(&self.terms, &rhs.terms, 1) }
    }
}

impl std::ops::Sub for &Laurent2 {
    type Output = Laurent2;
    fn sub(self, rhs: &Laurent2) -> Laurent2 {
        Laurent2 { terms: merge(&self.terms, &rhs.terms, -1) }
    }
}

impl std::ops::Neg for &Laurent2 {
    type Output = Laurent2;
    fn neg(self) -> Laurent2 {
        self.scale(-1)
    }
}

impl std::ops::Mul for &Laurent2 {
    type Output = Laurent2;
    fn mul(self, rhs: &Laurent2) -> Laurent2 {
        if self.terms.len() == 1 {
            let ((a, z), c) = self.terms[0];
            return rhs.shift(a, z).scale(c);
        }
        if rhs.terms.len() == 1 {
            let ((a, z), c) = rhs.terms[0];
            return self.shift(a, z).scale(c);
        }
        let mut terms = Vec::with_capacity(self.terms.len() * rhs.terms.len());
        for &((a1, z1), c1) in &self.terms {
            for &((a2, z2), c2) in &rhs.terms {
                terms.push(((a1 + a2, z1 + z2), mul_coeff(c1, c2)));
            }
        }
        Laurent2::from_terms(terms)
    }
}

impl fmt::Display for Laurent2 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (i, ((a, z), c)) in self.terms.iter().enumerate() {
            if i > 0 {
                write!(f, " + ")?;
            }
            write!(f, "{c} a^{a} z^{z}")?;
        }
        Ok(())
    }
}

impl FromStr for Laurent2 {
    type Err = PolyParseError;

    /// Parses the `Display` form, e.g. `-2 a^-2 z^0 + 1 a^-2 z^2`.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let s = s.trim();
        if s == "0" {
            return Ok(Self::zero());
        }
        let mut terms = Vec::new();
        for part in s.split(" + ") {
            let mut it = part.split_whitespace();
            let (Some(c), Some(a), Some(z), None) = (it.next(), it.next(), it.next(), it.next()) else {
                return Err(PolyParseError::Term(part.into()));
            };
            let c: i128 = c.parse().map_err(|_| PolyParseError::Term(part.into()))?;
            let a = parse_exp(a, 'a').ok_or_else(|| PolyParseError::Exponent(part.into()))?;
            let z = parse_exp(z, 'z').ok_or_else(|| PolyParseError::Exponent(part.into()))?;
            terms.push(((a, z), c));
        }
        Ok(Self::from_terms(terms))
    }
}
