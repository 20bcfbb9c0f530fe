//! Exact scalars, norm contexts and the number-theoretic helpers used by
//! every norm computation.
//!
//! Scalars are rationals in lowest terms. Which rationals are admissible in a
//! given base ring (`Z`, `Z[1/N]`, `Q`) is a property of the [`ScalarRing`]
//! and is enforced when an algebra is constructed, not on every operation.

use std::collections::BTreeSet;
use std::fmt;
use std::iter::Sum;
use std::ops::{Add, AddAssign, Mul, MulAssign, Neg, Sub, SubAssign};
use std::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ScalarError {
    #[error("valuation of zero is infinite")]
    InfiniteValuation,
    #[error("{0} is not a prime")]
    NotPrime(u64),
    #[error("binomial lower index must be nonnegative, got {0}")]
    NegativeIndex(i64),
    #[error("division by zero")]
    DivisionByZero,
    #[error("cannot parse scalar `{0}`")]
    Parse(String),
    #[error("cannot parse scalar ring `{0}` (expected Z, Z[1/N] or Q)")]
    ParseRing(String),
}

/// An exact rational number, always kept in lowest terms.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct Scalar(BigRational);

impl Scalar {
    pub fn zero() -> Self {
        Scalar(BigRational::zero())
    }

    pub fn one() -> Self {
        Scalar(BigRational::one())
    }

    pub fn from_int(n: i64) -> Self {
        Scalar(BigRational::from_integer(BigInt::from(n)))
    }

    pub fn from_bigint(n: BigInt) -> Self {
        Scalar(BigRational::from_integer(n))
    }

    /// `num/den`; panics on a zero denominator.
    pub fn ratio(num: i64, den: i64) -> Self {
        assert!(den != 0, "zero denominator");
        Scalar(BigRational::new(BigInt::from(num), BigInt::from(den)))
    }

    pub fn from_rational(q: BigRational) -> Self {
        Scalar(q)
    }

    pub fn as_rational(&self) -> &BigRational {
        &self.0
    }

    pub fn numer(&self) -> &BigInt {
        self.0.numer()
    }

    pub fn denom(&self) -> &BigInt {
        self.0.denom()
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_zero()
    }

    pub fn is_one(&self) -> bool {
        self.0.is_one()
    }

    pub fn is_integer(&self) -> bool {
        self.0.is_integer()
    }

    pub fn is_negative(&self) -> bool {
        self.0.is_negative()
    }

    pub fn abs(&self) -> Self {
        Scalar(self.0.abs())
    }

    pub fn checked_div(&self, other: &Scalar) -> Result<Scalar, ScalarError> {
        if other.is_zero() {
            return Err(ScalarError::DivisionByZero);
        }
        Ok(Scalar(&self.0 / &other.0))
    }

    pub fn inv(&self) -> Result<Scalar, ScalarError> {
        Scalar::one().checked_div(self)
    }

    pub fn pow(&self, e: u32) -> Scalar {
        Scalar(num_traits::pow(self.0.clone(), e as usize))
    }

    /// `(-1)^k` as a scalar.
    pub fn sign(k: i64) -> Scalar {
        if k.rem_euclid(2) == 0 {
            Scalar::one()
        } else {
            -Scalar::one()
        }
    }

    pub fn to_f64(&self) -> f64 {
        self.0.to_f64().unwrap_or(f64::NAN)
    }
}

impl fmt::Display for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_integer() {
            write!(f, "{}", self.0.numer())
        } else {
            write!(f, "{}/{}", self.0.numer(), self.0.denom())
        }
    }
}

impl fmt::Debug for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl FromStr for Scalar {
    type Err = ScalarError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let t = s.trim();
        let err = || ScalarError::Parse(s.to_string());
        match t.split_once('/') {
            Some((n, d)) => {
                let n: BigInt = n.trim().parse().map_err(|_| err())?;
                let d: BigInt = d.trim().parse().map_err(|_| err())?;
                if d.is_zero() {
                    return Err(ScalarError::DivisionByZero);
                }
                Ok(Scalar(BigRational::new(n, d)))
            }
            None => {
                let n: BigInt = t.parse().map_err(|_| err())?;
                Ok(Scalar::from_bigint(n))
            }
        }
    }
}

impl Serialize for Scalar {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for Scalar {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

impl From<i64> for Scalar {
    fn from(n: i64) -> Self {
        Scalar::from_int(n)
    }
}

impl From<BigInt> for Scalar {
    fn from(n: BigInt) -> Self {
        Scalar::from_bigint(n)
    }
}

macro_rules! forward_binop {
    ($tr:ident, $method:ident, $op:tt) => {
        impl $tr<&Scalar> for &Scalar {
            type Output = Scalar;
            fn $method(self, rhs: &Scalar) -> Scalar {
                Scalar(&self.0 $op &rhs.0)
            }
        }
        impl $tr<Scalar> for Scalar {
            type Output = Scalar;
            fn $method(self, rhs: Scalar) -> Scalar {
                Scalar(self.0 $op rhs.0)
            }
        }
        impl $tr<&Scalar> for Scalar {
            type Output = Scalar;
            fn $method(self, rhs: &Scalar) -> Scalar {
                Scalar(self.0 $op &rhs.0)
            }
        }
        impl $tr<Scalar> for &Scalar {
            type Output = Scalar;
            fn $method(self, rhs: Scalar) -> Scalar {
                Scalar(&self.0 $op rhs.0)
            }
        }
    };
}

forward_binop!(Add, add, +);
forward_binop!(Sub, sub, -);
forward_binop!(Mul, mul, *);

impl AddAssign<&Scalar> for Scalar {
    fn add_assign(&mut self, rhs: &Scalar) {
        self.0 += &rhs.0;
    }
}

impl SubAssign<&Scalar> for Scalar {
    fn sub_assign(&mut self, rhs: &Scalar) {
        self.0 -= &rhs.0;
    }
}

impl MulAssign<&Scalar> for Scalar {
    fn mul_assign(&mut self, rhs: &Scalar) {
        self.0 *= &rhs.0;
    }
}

impl Neg for Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        Scalar(-self.0)
    }
}

impl Neg for &Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        Scalar(-&self.0)
    }
}

impl Sum for Scalar {
    fn sum<I: Iterator<Item = Scalar>>(iter: I) -> Scalar {
        iter.fold(Scalar::zero(), |acc, x| acc + x)
    }
}

pub fn is_prime(p: u64) -> bool {
    if p < 2 {
        return false;
    }
    let mut d = 2u64;
    while d * d <= p {
        if p % d == 0 {
            return false;
        }
        d += 1;
    }
    true
}

/// Distinct prime factors of `n`, by trial division.
pub fn prime_factors(mut n: u64) -> Vec<u64> {
    let mut out = Vec::new();
    let mut d = 2u64;
    while d * d <= n {
        if n % d == 0 {
            out.push(d);
            while n % d == 0 {
                n /= d;
            }
        }
        d += 1;
    }
    if n > 1 {
        out.push(n);
    }
    out
}

/// The valuation on the base ring: trivial, or p-adic for a prime `p`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum NormCtx {
    Trivial,
    PAdic { p: u64 },
}

impl NormCtx {
    pub fn padic(p: u64) -> Result<NormCtx, ScalarError> {
        if !is_prime(p) {
            return Err(ScalarError::NotPrime(p));
        }
        Ok(NormCtx::PAdic { p })
    }

    /// The prime of a p-adic context; `None` for the trivial one.
    pub fn prime(&self) -> Option<u64> {
        match self {
            NormCtx::Trivial => None,
            NormCtx::PAdic { p } => Some(*p),
        }
    }
}

impl fmt::Display for NormCtx {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            NormCtx::Trivial => write!(f, "trivial"),
            NormCtx::PAdic { p } => write!(f, "{p}-adic"),
        }
    }
}

impl FromStr for NormCtx {
    type Err = ScalarError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let t = s.trim();
        if t.eq_ignore_ascii_case("trivial") {
            return Ok(NormCtx::Trivial);
        }
        let digits = t
            .strip_suffix("-adic")
            .or_else(|| t.strip_prefix("p="))
            .unwrap_or(t);
        let p: u64 = digits
            .trim()
            .parse()
            .map_err(|_| ScalarError::Parse(s.to_string()))?;
        NormCtx::padic(p)
    }
}

/// An exact nonnegative real produced by a norm: `p^e` for p-adic scalar
/// norms, `0`/`1` for the trivial norm, and rational weights `|λ| r^n` for
/// weighted power-series norms.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Norm(BigRational);

impl Norm {
    pub fn zero() -> Self {
        Norm(BigRational::zero())
    }

    pub fn one() -> Self {
        Norm(BigRational::one())
    }

    /// `base^exp` for an integer exponent of either sign.
    pub fn power(base: u64, exp: i64) -> Self {
        let b = BigRational::from_integer(BigInt::from(base));
        let mag = num_traits::pow(b, exp.unsigned_abs() as usize);
        if exp >= 0 {
            Norm(mag)
        } else {
            Norm(mag.recip())
        }
    }

    /// Wraps a nonnegative rational.
    pub fn from_rational(q: BigRational) -> Self {
        assert!(!q.is_negative(), "norms are nonnegative");
        Norm(q)
    }

    pub fn value(&self) -> &BigRational {
        &self.0
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_zero()
    }

    pub fn to_f64(&self) -> f64 {
        self.0.to_f64().unwrap_or(f64::NAN)
    }

    /// The exponent `e` with `self == p^e`, if the value is an exact power
    /// of `p`.
    pub fn log_p(&self, p: u64) -> Option<i64> {
        if self.0.is_zero() {
            return None;
        }
        let pb = BigInt::from(p);
        let (mut n, mut d) = (self.0.numer().clone(), self.0.denom().clone());
        let mut e = 0i64;
        while n.is_multiple_of(&pb) {
            n /= &pb;
            e += 1;
        }
        while d.is_multiple_of(&pb) {
            d /= &pb;
            e -= 1;
        }
        (n.is_one() && d.is_one()).then_some(e)
    }

    pub fn max(self, other: Norm) -> Norm {
        if other.0 > self.0 {
            other
        } else {
            self
        }
    }

    pub fn ratio(&self, other: &Norm) -> Option<Norm> {
        if other.is_zero() {
            None
        } else {
            Some(Norm(&self.0 / &other.0))
        }
    }
}

impl Mul for &Norm {
    type Output = Norm;
    fn mul(self, rhs: &Norm) -> Norm {
        Norm(&self.0 * &rhs.0)
    }
}

impl Mul for Norm {
    type Output = Norm;
    fn mul(self, rhs: Norm) -> Norm {
        Norm(self.0 * rhs.0)
    }
}

impl fmt::Display for Norm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_integer() {
            write!(f, "{}", self.0.numer())
        } else {
            write!(f, "{}/{}", self.0.numer(), self.0.denom())
        }
    }
}

/// Serialized as `{"kind": "exact-rational", "value": "1/4"}`.
impl Serialize for Norm {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        use serde::ser::SerializeStruct;
        let mut st = s.serialize_struct("Norm", 2)?;
        st.serialize_field("kind", "exact-rational")?;
        st.serialize_field("value", &self.to_string())?;
        st.end()
    }
}

impl fmt::Debug for Norm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Norm({self})")
    }
}

/// `v_p(n)` for a nonzero integer.
pub fn int_valuation(n: &BigInt, p: u64) -> u64 {
    let pb = BigInt::from(p);
    let mut n = n.abs();
    let mut v = 0;
    while !n.is_zero() && n.is_multiple_of(&pb) {
        n /= &pb;
        v += 1;
    }
    v
}

/// The p-adic valuation of a nonzero rational.
pub fn padic_valuation(q: &Scalar, p: u64) -> Result<i64, ScalarError> {
    if q.is_zero() {
        return Err(ScalarError::InfiniteValuation);
    }
    if !is_prime(p) {
        return Err(ScalarError::NotPrime(p));
    }
    Ok(int_valuation(q.numer(), p) as i64 - int_valuation(q.denom(), p) as i64)
}

pub fn norm(q: &Scalar, ctx: NormCtx) -> Norm {
    if q.is_zero() {
        return Norm::zero();
    }
    match ctx {
        NormCtx::Trivial => Norm::one(),
        NormCtx::PAdic { p } => {
            let v = padic_valuation(q, p).expect("nonzero scalar, prime context");
            Norm::power(p, -v)
        }
    }
}

/// `v_p(n!)` via the digit-sum identity `(n - s_p(n)) / (p - 1)`.
pub fn factorial_valuation(n: u64, p: u64) -> u64 {
    assert!(p >= 2, "p must be at least 2");
    let mut digits = 0u64;
    let mut m = n;
    while m > 0 {
        digits += m % p;
        m /= p;
    }
    (n - digits) / (p - 1)
}

/// Generalized binomial coefficient `m(m-1)...(m-i+1)/i!` for any integer
/// `m`; always an integer.
pub fn gbinomial(m: i64, i: i64) -> Result<BigInt, ScalarError> {
    if i < 0 {
        return Err(ScalarError::NegativeIndex(i));
    }
    Ok(binomial(m, i as u64))
}

pub fn binomial(m: i64, i: u64) -> BigInt {
    if let Some(v) = small_binomial(m, i) {
        return BigInt::from(v);
    }
    let mut acc = BigInt::one();
    for k in 0..i {
        // acc = C(m, k) here, so the division is exact.
        acc = acc * BigInt::from(m - k as i64) / BigInt::from(k + 1);
    }
    acc
}

fn small_binomial(m: i64, i: u64) -> Option<i128> {
    if i > 64 {
        return None;
    }
    let mut acc: i128 = 1;
    for k in 0..i as i128 {
        acc = acc.checked_mul(m as i128 - k)? / (k + 1);
    }
    Some(acc)
}

pub fn binomial_scalar(m: i64, i: u64) -> Scalar {
    match small_binomial(m, i) {
        Some(v) if v >= i64::MIN as i128 && v <= i64::MAX as i128 => Scalar::from_int(v as i64),
        _ => Scalar::from_bigint(binomial(m, i)),
    }
}

pub fn factorial(n: u64) -> BigInt {
    (1..=n).fold(BigInt::one(), |acc, k| acc * BigInt::from(k))
}

/// The radius `r_p = |p|^{1/(p-1)}` as a real, `1` for the trivial norm.
/// Verdicts never use this value; see [`radius_log_p`].
pub fn radius(ctx: NormCtx) -> f64 {
    match ctx {
        NormCtx::Trivial => 1.0,
        NormCtx::PAdic { p } => (p as f64).powf(-1.0 / (p as f64 - 1.0)),
    }
}

/// `log_p(r_p^n) = -n/(p-1)` as an exact fraction `(numerator, denominator)`.
pub fn radius_log_p(n: u64, p: u64) -> (i64, i64) {
    let num = -(n as i64);
    let den = p as i64 - 1;
    let g = num.gcd(&den);
    (num / g, den / g)
}

/// Whether `r_p^n / |n!|_p <= 1`, decided on the exponent scale:
/// `v_p(n!) <= n/(p-1)`.
pub fn radius_bound_holds(n: u64, p: u64) -> bool {
    (p - 1) * factorial_valuation(n, p) <= n
}

/// The base ring of an algebra: `Z` localized at a set of primes, or `Q`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum ScalarRing {
    Integers { inverted: BTreeSet<u64> },
    Rationals,
}

impl ScalarRing {
    pub fn integers() -> Self {
        ScalarRing::Integers {
            inverted: BTreeSet::new(),
        }
    }

    /// `Z[1/n]`.
    pub fn localized(n: u64) -> Self {
        ScalarRing::Integers {
            inverted: prime_factors(n).into_iter().collect(),
        }
    }

    pub fn contains(&self, q: &Scalar) -> bool {
        match self {
            ScalarRing::Rationals => true,
            ScalarRing::Integers { inverted } => {
                let mut d = q.denom().clone();
                for &p in inverted {
                    let pb = BigInt::from(p);
                    while d.is_multiple_of(&pb) {
                        d /= &pb;
                    }
                }
                d.is_one()
            }
        }
    }

    pub fn is_unit(&self, n: u64) -> bool {
        match self {
            ScalarRing::Rationals => n != 0,
            ScalarRing::Integers { inverted } => {
                n != 0 && prime_factors(n).iter().all(|p| inverted.contains(p))
            }
        }
    }
}

impl fmt::Display for ScalarRing {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ScalarRing::Rationals => write!(f, "Q"),
            ScalarRing::Integers { inverted } if inverted.is_empty() => write!(f, "Z"),
            ScalarRing::Integers { inverted } => {
                let n: u64 = inverted.iter().product();
                write!(f, "Z[1/{n}]")
            }
        }
    }
}

impl FromStr for ScalarRing {
    type Err = ScalarError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let t: String = s.chars().filter(|c| !c.is_whitespace()).collect();
        let err = || ScalarError::ParseRing(s.to_string());
        match t.as_str() {
            "Q" => Ok(ScalarRing::Rationals),
            "Z" => Ok(ScalarRing::integers()),
            _ => {
                let inner = t
                    .strip_prefix("Z[1/")
                    .and_then(|r| r.strip_suffix(']'))
                    .ok_or_else(err)?;
                let n: u64 = inner.parse().map_err(|_| err())?;
                if n == 0 {
                    return Err(err());
                }
                Ok(ScalarRing::localized(n))
            }
        }
    }
}
