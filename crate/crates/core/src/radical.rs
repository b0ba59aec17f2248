//! Exact arithmetic on finite sums `Σ q_d·√d` with rational `q_d` and
//! square-free positive integers `d`.
//!
//! The square roots of distinct square-free integers are linearly independent
//! over ℚ, so the map from square-free radicand to coefficient is a unique
//! normal form: a value is zero exactly when the map is empty.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::str::FromStr;

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

/// Exact rational with arbitrary-precision numerator and denominator, always reduced.
pub type Rational = BigRational;

/// Largest radicand accepted anywhere. Square-free reduction uses trial
/// division, so values above this are refused rather than factored slowly.
pub const MAX_RADICAND: u64 = 1_000_000_000_000;

/// Splits `n` into `(s, f)` with `n = s²·f` and `f` square-free.
pub fn square_free_split(n: u64) -> Result<(u64, u64)> {
    if n > MAX_RADICAND {
        return Err(Error::RadicandTooLarge {
            value: n as u128,
            max: MAX_RADICAND,
        });
    }
    let mut rest = n;
    let mut square = 1u64;
    let mut free = 1u64;
    let mut p = 2u64;
    while p * p <= rest {
        let mut k = 0;
        while rest.is_multiple_of(p) {
            rest /= p;
            k += 1;
        }
        for _ in 0..k / 2 {
            square *= p;
        }
        if k % 2 == 1 {
            free *= p;
        }
        p += if p == 2 { 1 } else { 2 };
    }
    Ok((square, free * rest))
}

pub fn is_square_free(n: u64) -> bool {
    if n == 0 {
        return false;
    }
    let mut p = 2u64;
    while p * p <= n {
        if n.is_multiple_of(p * p) {
            return false;
        }
        p += 1;
    }
    true
}

/// Exact real number `Σ q_d·√d`.
#[derive(Clone, Default, PartialEq, Eq, Hash)]
pub struct RadScalar {
    terms: BTreeMap<u64, Rational>,
}

impl RadScalar {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn one() -> Self {
        Self::from_integer(1)
    }

    pub fn from_integer(n: i64) -> Self {
        Self::from_rational(Rational::from_integer(BigInt::from(n)))
    }

    pub fn from_rational(q: Rational) -> Self {
        let mut terms = BTreeMap::new();
        if !q.is_zero() {
            terms.insert(1, q);
        }
        Self { terms }
    }

    /// `q·√n` for any positive `n`; square factors of `n` are pulled into the coefficient.
    pub fn term(q: Rational, n: u64) -> Result<Self> {
        if q.is_zero() || n == 0 {
            return Ok(Self::zero());
        }
        let (s, f) = square_free_split(n)?;
        let mut terms = BTreeMap::new();
        terms.insert(f, q * Rational::from_integer(BigInt::from(s)));
        Ok(Self { terms })
    }

    /// `√n`.
    pub fn sqrt(n: u64) -> Result<Self> {
        Self::term(Rational::one(), n)
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// Iterates `(radicand, coefficient)` pairs in increasing radicand order.
    pub fn terms(&self) -> impl Iterator<Item = (u64, &Rational)> + '_ {
        self.terms.iter().map(|(&d, q)| (d, q))
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    /// The single `(radicand, coefficient)` pair, if there is exactly one.
    pub fn single_term(&self) -> Option<(u64, &Rational)> {
        if self.terms.len() == 1 {
            self.terms().next()
        } else {
            None
        }
    }

    /// The value as a rational, if it has no irrational part.
    pub fn as_rational(&self) -> Option<Rational> {
        match self.terms.len() {
            0 => Some(Rational::zero()),
            1 => self.terms.get(&1).cloned(),
            _ => None,
        }
    }

    pub fn scale(&self, q: &Rational) -> Self {
        if q.is_zero() {
            return Self::zero();
        }
        Self {
            terms: self.terms.iter().map(|(&d, c)| (d, c * q)).collect(),
        }
    }

    pub fn plus(&self, other: &Self) -> Self {
        let mut terms = self.terms.clone();
        for (&d, q) in &other.terms {
            let entry = terms.entry(d).or_insert_with(Rational::zero);
            *entry += q;
            if entry.is_zero() {
                terms.remove(&d);
            }
        }
        Self { terms }
    }

    /// Product, failing only when a resulting radicand exceeds [`MAX_RADICAND`].
    pub fn try_mul(&self, other: &Self) -> Result<Self> {
        let mut terms: BTreeMap<u64, Rational> = BTreeMap::new();
        for (&d1, q1) in &self.terms {
            for (&d2, q2) in &other.terms {
                // d1 = g·a, d2 = g·b with g, a, b pairwise coprime: √d1·√d2 = g·√(ab).
                let g = d1.gcd(&d2);
                let radicand = (d1 / g) as u128 * (d2 / g) as u128;
                if radicand > MAX_RADICAND as u128 {
                    return Err(Error::RadicandTooLarge {
                        value: radicand,
                        max: MAX_RADICAND,
                    });
                }
                let coeff = q1 * q2 * Rational::from_integer(BigInt::from(g));
                let entry = terms
                    .entry(radicand as u64)
                    .or_insert_with(Rational::zero);
                *entry += coeff;
            }
        }
        terms.retain(|_, q| !q.is_zero());
        Ok(Self { terms })
    }

    /// Division by a single-term value `c·√d`, computed as multiplication by `√d/(c·d)`.
    pub fn div_single(&self, divisor: &Self) -> Result<Self> {
        let (d, c) = match divisor.single_term() {
            Some(t) => t,
            None if divisor.is_zero() => return Err(Error::DivisionByZero),
            None => return Err(Error::NotSingleTerm),
        };
        let inv = c * Rational::from_integer(BigInt::from(d));
        let factor = Self::term(inv.recip(), d)?;
        self.try_mul(&factor)
    }

    /// Sign of the real value: -1, 0 or +1.
    ///
    /// Each `√d` is enclosed in `[⌊√d·2^k⌋/2^k, (⌊√d·2^k⌋+1)/2^k]` and the
    /// precision doubles until the enclosure of the sum excludes zero.
    pub fn signum(&self) -> i8 {
        if self.is_zero() {
            return 0;
        }
        let mut bits: usize = 16;
        loop {
            let denom = BigInt::one() << bits;
            let mut lo = Rational::zero();
            let mut hi = Rational::zero();
            for (&d, q) in &self.terms {
                if d == 1 {
                    lo += q;
                    hi += q;
                    continue;
                }
                let floor = BigInt::from((BigUint::from(d) << (2 * bits)).sqrt());
                let below = Rational::new(floor.clone(), denom.clone());
                let above = Rational::new(floor + 1, denom.clone());
                if q.is_positive() {
                    lo += q * below;
                    hi += q * above;
                } else {
                    lo += q * above;
                    hi += q * below;
                }
            }
            if lo.is_positive() {
                return 1;
            }
            if hi.is_negative() {
                return -1;
            }
            bits *= 2;
        }
    }

    pub fn to_f64(&self) -> f64 {
        self.terms
            .iter()
            .map(|(&d, q)| q.to_f64().unwrap_or(f64::NAN) * (d as f64).sqrt())
            .sum()
    }

    /// Least common multiple of all coefficient denominators.
    pub(crate) fn denominator_lcm(&self) -> BigInt {
        self.terms
            .values()
            .fold(BigInt::one(), |acc, q| acc.lcm(q.denom()))
    }

    /// Gcd of all coefficient numerators (zero for the zero value).
    pub(crate) fn numerator_gcd(&self) -> BigInt {
        self.terms
            .values()
            .fold(BigInt::zero(), |acc, q| acc.gcd(q.numer()))
    }
}

impl fmt::Debug for RadScalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "RadScalar({self})")
    }
}

/// Renders as `num[/den] [r d]` terms joined by ` + ` / ` - `, radicands ascending.
impl fmt::Display for RadScalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return f.write_str("0");
        }
        for (i, (&d, q)) in self.terms.iter().enumerate() {
            let negative = q.is_negative();
            match (i, negative) {
                (0, true) => f.write_str("-")?,
                (0, false) => {}
                (_, true) => f.write_str(" - ")?,
                (_, false) => f.write_str(" + ")?,
            }
            let mag = q.abs();
            if mag.is_integer() {
                write!(f, "{}", mag.numer())?;
            } else {
                write!(f, "{}/{}", mag.numer(), mag.denom())?;
            }
            if d != 1 {
                write!(f, " r{d}")?;
            }
        }
        Ok(())
    }
}

/// A failure to parse a radical expression; `column` is 1-based.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RadParseError {
    pub column: usize,
    pub message: String,
}

impl fmt::Display for RadParseError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "column {}: {}", self.column, self.message)
    }
}

impl std::error::Error for RadParseError {}

struct Cursor<'a> {
    bytes: &'a [u8],
    pos: usize,
}

impl Cursor<'_> {
    fn skip_ws(&mut self) {
        while self.pos < self.bytes.len() && self.bytes[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.skip_ws();
        self.bytes.get(self.pos).copied()
    }

    fn err(&self, message: impl Into<String>) -> RadParseError {
        RadParseError {
            column: self.pos + 1,
            message: message.into(),
        }
    }

    fn number(&mut self) -> Result<BigUint, RadParseError> {
        self.skip_ws();
        let start = self.pos;
        while self.pos < self.bytes.len() && self.bytes[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        if start == self.pos {
            return Err(self.err("expected a number"));
        }
        let digits = std::str::from_utf8(&self.bytes[start..self.pos]).expect("ascii digits");
        digits
            .parse()
            .map_err(|_| RadParseError {
                column: start + 1,
                message: "invalid number".into(),
            })
    }
}

impl FromStr for RadScalar {
    type Err = RadParseError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let mut cur = Cursor {
            bytes: s.as_bytes(),
            pos: 0,
        };
        let mut acc = RadScalar::zero();
        let mut first = true;
        loop {
            let negative = match cur.peek() {
                None if first => return Err(cur.err("empty expression")),
                None => break,
                Some(b'+') => {
                    cur.pos += 1;
                    false
                }
                Some(b'-') => {
                    cur.pos += 1;
                    true
                }
                Some(_) if first => false,
                Some(c) => return Err(cur.err(format!("expected `+` or `-`, found `{}`", c as char))),
            };
            first = false;

            let mut coeff = if cur.peek() == Some(b'r') {
                Rational::one()
            } else {
                let num = cur.number()?;
                let mut q = Rational::from_integer(BigInt::from(num));
                if cur.peek() == Some(b'/') {
                    cur.pos += 1;
                    let at = cur.pos;
                    let den = cur.number()?;
                    if den.is_zero() {
                        return Err(RadParseError {
                            column: at + 1,
                            message: "zero denominator".into(),
                        });
                    }
                    q /= Rational::from_integer(BigInt::from(den));
                }
                q
            };
            if negative {
                coeff = -coeff;
            }

            let mut radicand = 1u64;
            if cur.peek() == Some(b'r') {
                cur.pos += 1;
                let at = cur.pos;
                let d = cur.number()?;
                radicand = d.to_u64().filter(|&d| d > 0).ok_or_else(|| RadParseError {
                    column: at + 1,
                    message: "radicand must be a positive 64-bit integer".into(),
                })?;
            }
            let term = RadScalar::term(coeff, radicand).map_err(|e| RadParseError {
                column: cur.pos,
                message: e.to_string(),
            })?;
            acc = acc.plus(&term);
        }
        Ok(acc)
    }
}

impl Neg for &RadScalar {
    type Output = RadScalar;
    fn neg(self) -> RadScalar {
        RadScalar {
            terms: self.terms.iter().map(|(&d, q)| (d, -q)).collect(),
        }
    }
}

impl Neg for RadScalar {
    type Output = RadScalar;
    fn neg(self) -> RadScalar {
        -&self
    }
}

impl Add for &RadScalar {
    type Output = RadScalar;
    fn add(self, rhs: &RadScalar) -> RadScalar {
        self.plus(rhs)
    }
}

impl Add for RadScalar {
    type Output = RadScalar;
    fn add(self, rhs: RadScalar) -> RadScalar {
        self.plus(&rhs)
    }
}

impl Sub for &RadScalar {
    type Output = RadScalar;
    fn sub(self, rhs: &RadScalar) -> RadScalar {
        self.plus(&-rhs)
    }
}

impl Sub for RadScalar {
    type Output = RadScalar;
    fn sub(self, rhs: RadScalar) -> RadScalar {
        &self - &rhs
    }
}

/// Panics if a product radicand exceeds [`MAX_RADICAND`]; use [`RadScalar::try_mul`] to handle that case.
impl Mul for &RadScalar {
    type Output = RadScalar;
    fn mul(self, rhs: &RadScalar) -> RadScalar {
        self.try_mul(rhs).expect("radicand bound exceeded")
    }
}

impl Mul for RadScalar {
    type Output = RadScalar;
    fn mul(self, rhs: RadScalar) -> RadScalar {
        &self * &rhs
    }
}
