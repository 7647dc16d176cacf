//! Exact scalars: rationals, elements of a real quadratic field `Q(sqrt(n))`,
//! complex values with such components, and phases in the closed upper half
//! plane compared without ever computing an angle.

use alloc::format;
use alloc::string::{String, ToString};
use core::cmp::Ordering;
use core::fmt;
use core::ops::{Add, Mul, Neg, Sub};
use core::str::FromStr;

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

/// Arbitrary-precision rational, always reduced with positive denominator.
pub type Rational = BigRational;

/// `num / den` as a reduced rational.
pub fn rat(num: i64, den: i64) -> Rational {
    Rational::new(BigInt::from(num), BigInt::from(den))
}

pub fn int(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

/// Sign of a rational as -1, 0 or +1.
pub fn rational_sign(x: &Rational) -> i8 {
    if x.is_zero() {
        0
    } else if x.is_positive() {
        1
    } else {
        -1
    }
}

// Trial division limit for square-free extraction. Any cofactor left below
// LIMIT^3 has at most two prime factors, both above LIMIT.
const TRIAL_LIMIT: u64 = 1 << 16;

/// Writes `n = k^2 * m` with `m` square-free.
fn square_free_split(n: &BigUint) -> Result<(BigUint, u64)> {
    if n.is_zero() {
        return Ok((BigUint::zero(), 0));
    }
    let mut rest = n.clone();
    let mut k = BigUint::one();
    let mut m = BigUint::one();
    let mut p = 2u64;
    while p < TRIAL_LIMIT {
        let bp = BigUint::from(p);
        if &bp * &bp > rest {
            break;
        }
        let mut e = 0u32;
        while (&rest % &bp).is_zero() {
            rest /= &bp;
            e += 1;
        }
        if e > 0 {
            k *= bp.pow(e / 2);
            if e % 2 == 1 {
                m *= &bp;
            }
        }
        p += if p == 2 { 1 } else { 2 };
    }
    if !rest.is_one() {
        let root = rest.sqrt();
        if &root * &root == rest {
            k *= root;
        } else {
            let limit = BigUint::from(TRIAL_LIMIT);
            let fully_factored = p < TRIAL_LIMIT || rest < &limit * &limit * &limit;
            if !fully_factored {
                return Err(Error::RadicandTooLarge);
            }
            m *= rest;
        }
    }
    let m = m.to_u64().ok_or(Error::RadicandTooLarge)?;
    Ok((k, m))
}

/// Exact number `a + b*sqrt(n)` with `n` square-free.
///
/// Canonical form: `n == 0` exactly when `b == 0`, and `n != 1`. Rationals
/// therefore live in the same type with radicand 0 and mix freely with any
/// radicand; two distinct nonzero radicands are rejected.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct QuadExt {
    a: Rational,
    b: Rational,
    n: u64,
}

impl QuadExt {
    pub fn new(a: Rational, b: Rational, n: u64) -> Result<Self> {
        if b.is_zero() || n == 0 {
            return Ok(Self::from_rational(a));
        }
        let (k, m) = square_free_split(&BigUint::from(n))?;
        let b = b * Rational::from_integer(BigInt::from(k));
        if m == 1 {
            return Ok(Self::from_rational(a + b));
        }
        Ok(QuadExt { a, b, n: m })
    }

    pub fn from_rational(a: Rational) -> Self {
        QuadExt {
            a,
            b: Rational::zero(),
            n: 0,
        }
    }

    pub fn from_int(a: i64) -> Self {
        Self::from_rational(int(a))
    }

    pub fn zero() -> Self {
        Self::from_int(0)
    }

    /// `sqrt(n)` for a non-negative integer.
    pub fn sqrt(n: u64) -> Result<Self> {
        Self::new(Rational::zero(), Rational::one(), n)
    }

    /// Exact square root of a non-negative rational `p/q`, written as
    /// `(k/q) * sqrt(m)` with `m` square-free.
    pub fn sqrt_rational(q: &Rational) -> Result<Self> {
        if q.is_negative() {
            return Err(Error::NotSquare);
        }
        let den = q.denom().clone();
        let prod = (q.numer() * &den).to_biguint().ok_or(Error::NotSquare)?;
        let (k, m) = square_free_split(&prod)?;
        let coeff = Rational::new(BigInt::from(k), den);
        if m == 0 {
            return Ok(Self::zero());
        }
        Self::new(Rational::zero(), coeff, m)
    }

    pub fn a(&self) -> &Rational {
        &self.a
    }

    pub fn b(&self) -> &Rational {
        &self.b
    }

    pub fn radicand(&self) -> u64 {
        self.n
    }

    pub fn is_rational(&self) -> bool {
        self.n == 0
    }

    pub fn as_rational(&self) -> Option<&Rational> {
        self.is_rational().then_some(&self.a)
    }

    pub fn is_zero(&self) -> bool {
        self.a.is_zero() && self.b.is_zero()
    }

    fn common_radicand(&self, other: &Self) -> Result<u64> {
        match (self.n, other.n) {
            (0, n) | (n, 0) => Ok(n),
            (l, r) if l == r => Ok(l),
            (l, r) => Err(Error::RadicandMismatch { left: l, right: r }),
        }
    }

    fn build(a: Rational, b: Rational, n: u64) -> Self {
        if b.is_zero() || n == 0 {
            Self::from_rational(a)
        } else {
            QuadExt { a, b, n }
        }
    }

    pub fn try_add(&self, other: &Self) -> Result<Self> {
        let n = self.common_radicand(other)?;
        Ok(Self::build(&self.a + &other.a, &self.b + &other.b, n))
    }

    pub fn try_sub(&self, other: &Self) -> Result<Self> {
        let n = self.common_radicand(other)?;
        Ok(Self::build(&self.a - &other.a, &self.b - &other.b, n))
    }

    pub fn try_mul(&self, other: &Self) -> Result<Self> {
        let n = self.common_radicand(other)?;
        let rn = Rational::from_integer(BigInt::from(n));
        let a = &self.a * &other.a + &self.b * &other.b * rn;
        let b = &self.a * &other.b + &self.b * &other.a;
        Ok(Self::build(a, b, n))
    }

    /// Conjugate `a - b*sqrt(n)`.
    pub fn conj(&self) -> Self {
        Self::build(self.a.clone(), -&self.b, self.n)
    }

    /// Field norm `a^2 - n*b^2`.
    pub fn norm(&self) -> Rational {
        let rn = Rational::from_integer(BigInt::from(self.n));
        &self.a * &self.a - &self.b * &self.b * rn
    }

    pub fn try_recip(&self) -> Result<Self> {
        if self.is_zero() {
            return Err(Error::DivisionByZero);
        }
        // norm vanishes only at zero because n is square-free and not 1
        let norm = self.norm();
        let c = self.conj();
        Ok(Self::build(&c.a / &norm, &c.b / &norm, self.n))
    }

    pub fn try_div(&self, other: &Self) -> Result<Self> {
        self.common_radicand(other)?;
        self.try_mul(&other.try_recip()?)
    }

    pub fn scale(&self, k: &Rational) -> Self {
        Self::build(&self.a * k, &self.b * k, self.n)
    }

    pub fn square(&self) -> Self {
        self.try_mul(self).expect("same radicand")
    }

    /// Exact sign of `a + b*sqrt(n)`; decided by comparing `a^2` with `n*b^2`
    /// when `a` and `b` have opposite signs.
    pub fn signum(&self) -> i8 {
        let sa = rational_sign(&self.a);
        let sb = rational_sign(&self.b);
        if sb == 0 {
            return sa;
        }
        if sa == 0 || sa == sb {
            return sb;
        }
        let rn = Rational::from_integer(BigInt::from(self.n));
        let a2 = &self.a * &self.a;
        let b2n = &self.b * &self.b * rn;
        match a2.cmp(&b2n) {
            Ordering::Greater => sa,
            Ordering::Less => sb,
            Ordering::Equal => 0,
        }
    }

    pub fn is_positive(&self) -> bool {
        self.signum() > 0
    }

    pub fn is_negative(&self) -> bool {
        self.signum() < 0
    }

    pub fn try_cmp(&self, other: &Self) -> Result<Ordering> {
        Ok(self.try_sub(other)?.signum().cmp(&0))
    }

    /// Textual form without zero parts, e.g. `1/4*sqrt(5)` or `-3/2`.
    pub fn compact(&self) -> String {
        if self.n == 0 {
            return self.a.to_string();
        }
        let tail = format!("{}*sqrt({})", self.b.abs(), self.n);
        match (self.a.is_zero(), self.b.is_negative()) {
            (true, false) => tail,
            (true, true) => format!("-{tail}"),
            (false, false) => format!("{}+{tail}", self.a),
            (false, true) => format!("{}-{tail}", self.a),
        }
    }
}

impl fmt::Display for QuadExt {
    /// Canonical textual form `a+b*sqrt(n)`; rationals print as `a`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.n == 0 {
            return write!(f, "{}", self.a);
        }
        let sign = if self.b.is_negative() { '-' } else { '+' };
        write!(f, "{}{}{}*sqrt({})", self.a, sign, self.b.abs(), self.n)
    }
}

fn parse_rational(s: &str) -> Result<Rational> {
    let s = s.strip_prefix('+').unwrap_or(s);
    Rational::from_str(s).map_err(|_| Error::Parse(format!("bad rational `{s}`")))
}

impl FromStr for QuadExt {
    type Err = Error;

    /// Accepts `a+b*sqrt(n)`, `a-b*sqrt(n)`, `b*sqrt(n)`, `sqrt(n)` and `a`,
    /// with `a`, `b` written as integers or `p/q`.
    fn from_str(s: &str) -> Result<Self> {
        let s: String = s.chars().filter(|c| !c.is_whitespace()).collect();
        let Some(idx) = s.find("sqrt(") else {
            return Ok(Self::from_rational(parse_rational(&s)?));
        };
        let inner = s[idx + 5..]
            .strip_suffix(')')
            .ok_or_else(|| Error::Parse(format!("unterminated sqrt in `{s}`")))?;
        let n: u64 = inner
            .parse()
            .map_err(|_| Error::Parse(format!("bad radicand `{inner}`")))?;
        let pre = &s[..idx];
        let pre = pre.strip_suffix('*').unwrap_or(pre);
        let bytes = pre.as_bytes();
        let split = (1..bytes.len())
            .rev()
            .find(|&i| (bytes[i] == b'+' || bytes[i] == b'-') && bytes[i - 1].is_ascii_digit());
        let (a_str, b_str) = match split {
            Some(i) => (&pre[..i], &pre[i..]),
            None => ("0", pre),
        };
        let a = parse_rational(a_str)?;
        let b = match b_str {
            "" | "+" => Rational::one(),
            "-" | "+-" => -Rational::one(),
            other => {
                let other = other.strip_prefix('+').unwrap_or(other);
                parse_rational(other)?
            }
        };
        Self::new(a, b, n)
    }
}

impl From<Rational> for QuadExt {
    fn from(a: Rational) -> Self {
        Self::from_rational(a)
    }
}

// Operator forms panic on radicand mismatch; use the `try_*` methods when the
// operands come from untrusted input.
impl Add for &QuadExt {
    type Output = QuadExt;
    fn add(self, rhs: &QuadExt) -> QuadExt {
        self.try_add(rhs)
            .expect("radicand mismatch in QuadExt addition")
    }
}

impl Sub for &QuadExt {
    type Output = QuadExt;
    fn sub(self, rhs: &QuadExt) -> QuadExt {
        self.try_sub(rhs)
            .expect("radicand mismatch in QuadExt subtraction")
    }
}

impl Mul for &QuadExt {
    type Output = QuadExt;
    fn mul(self, rhs: &QuadExt) -> QuadExt {
        self.try_mul(rhs)
            .expect("radicand mismatch in QuadExt multiplication")
    }
}

impl Neg for &QuadExt {
    type Output = QuadExt;
    fn neg(self) -> QuadExt {
        QuadExt::build(-&self.a, -&self.b, self.n)
    }
}

impl Neg for QuadExt {
    type Output = QuadExt;
    fn neg(self) -> QuadExt {
        -&self
    }
}

/// Exact complex number whose parts lie in a common `Q(sqrt(n))`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct ComplexQE {
    re: QuadExt,
    im: QuadExt,
}

impl ComplexQE {
    pub fn new(re: QuadExt, im: QuadExt) -> Result<Self> {
        re.common_radicand(&im)?;
        Ok(ComplexQE { re, im })
    }

    pub fn from_rationals(re: Rational, im: Rational) -> Self {
        ComplexQE {
            re: re.into(),
            im: im.into(),
        }
    }

    pub fn re(&self) -> &QuadExt {
        &self.re
    }

    pub fn im(&self) -> &QuadExt {
        &self.im
    }

    pub fn is_zero(&self) -> bool {
        self.re.is_zero() && self.im.is_zero()
    }

    pub fn try_add(&self, other: &Self) -> Result<Self> {
        Self::new(self.re.try_add(&other.re)?, self.im.try_add(&other.im)?)
    }

    pub fn try_sub(&self, other: &Self) -> Result<Self> {
        Self::new(self.re.try_sub(&other.re)?, self.im.try_sub(&other.im)?)
    }

    pub fn try_mul(&self, other: &Self) -> Result<Self> {
        let re = self
            .re
            .try_mul(&other.re)?
            .try_sub(&self.im.try_mul(&other.im)?)?;
        let im = self
            .re
            .try_mul(&other.im)?
            .try_add(&self.im.try_mul(&other.re)?)?;
        Self::new(re, im)
    }

    pub fn scale(&self, k: &Rational) -> Self {
        ComplexQE {
            re: self.re.scale(k),
            im: self.im.scale(k),
        }
    }

    /// Real multiple `k * z` for `k` in the same quadratic field.
    pub fn try_scale_qe(&self, k: &QuadExt) -> Result<Self> {
        Self::new(self.re.try_mul(k)?, self.im.try_mul(k)?)
    }
}

impl Neg for &ComplexQE {
    type Output = ComplexQE;
    fn neg(self) -> ComplexQE {
        ComplexQE {
            re: -&self.re,
            im: -&self.im,
        }
    }
}

impl fmt::Display for ComplexQE {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {})", self.re, self.im)
    }
}

/// A nonzero value in `{Im > 0} ∪ {Im = 0, Re < 0}`, standing for its phase
/// in `(0, 1]`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Phase(ComplexQE);

impl Phase {
    pub fn new(z: ComplexQE) -> Result<Self> {
        match z.im.signum() {
            1 => Ok(Phase(z)),
            0 if z.re.is_negative() => Ok(Phase(z)),
            _ => Err(Error::NotInUpperHalfPlane),
        }
    }

    pub fn value(&self) -> &ComplexQE {
        &self.0
    }

    /// Phase exactly 1 (negative real axis).
    pub fn is_one(&self) -> bool {
        self.0.im.is_zero()
    }

    /// Phase exactly 1/2 (positive imaginary axis).
    pub fn is_half(&self) -> bool {
        self.0.re.is_zero()
    }
}

/// Orders the phases of two values of the closed upper half plane.
///
/// Values on the negative real axis have the maximal phase 1; otherwise the
/// sign of `im1*re2 - re1*im2` decides, since the cotangent is decreasing on
/// `(0, pi)`.
pub fn phase_cmp(z1: &Phase, z2: &Phase) -> Result<Ordering> {
    let (a, b) = (&z1.0, &z2.0);
    match (z1.is_one(), z2.is_one()) {
        (true, true) => return Ok(Ordering::Equal),
        (true, false) => return Ok(Ordering::Greater),
        (false, true) => return Ok(Ordering::Less),
        _ => {}
    }
    let cross = a.im.try_mul(&b.re)?.try_sub(&a.re.try_mul(&b.im)?)?;
    Ok(cross.signum().cmp(&0))
}
