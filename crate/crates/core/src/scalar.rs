//! Coefficient fields: exact Gaussian rationals and complex doubles.

use std::fmt::Debug;
use std::ops::{Add, Div, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_complex::Complex;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

pub use num_complex::Complex64;

/// `a/b + (c/d)i` with arbitrary-precision numerators and denominators.
pub type GaussianRational = Complex<BigRational>;

/// A coefficient field closed under the four arithmetic operations.
///
/// Two implementations exist. [`GaussianRational`] never rounds; its zero test
/// is exact. [`Complex64`] rounds, and every decision taken on it goes through
/// an explicit tolerance at the call site.
pub trait Scalar:
    Clone
    + Debug
    + PartialEq
    + Send
    + Sync
    + 'static
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Div<Output = Self>
    + Neg<Output = Self>
{
    const EXACT: bool;

    fn zero() -> Self;
    fn one() -> Self;
    fn imag_unit() -> Self;
    fn from_i64(n: i64) -> Self;
    fn from_rational(q: &BigRational) -> Self;
    fn from_exact(q: &GaussianRational) -> Self;
    /// `None` for exact fields: a double is never silently promoted to exact.
    fn from_c64(c: Complex64) -> Option<Self>;

    fn is_zero(&self) -> bool;
    fn conj(&self) -> Self;
    /// Real part, embedded back into the field.
    fn re(&self) -> Self;
    /// Imaginary part, embedded back into the field.
    fn im(&self) -> Self;
    fn to_c64(&self) -> Complex64;
    fn as_exact(&self) -> Option<GaussianRational>;

    /// Text form used by the polynomial format: `3`, `-1/2`, `8i`, `(1/2+1/3i)`.
    fn format_coeff(&self) -> String;
    /// Parses a real literal: `a`, `a/b`, or a decimal/scientific literal.
    fn parse_real(lit: &str) -> Option<Self>;

    fn is_one(&self) -> bool {
        *self == Self::one()
    }

    fn abs(&self) -> f64 {
        self.to_c64().norm()
    }

    fn pow(&self, e: u32) -> Self {
        let mut acc = Self::one();
        let mut base = self.clone();
        let mut e = e;
        while e > 0 {
            if e & 1 == 1 {
                acc = acc * base.clone();
            }
            base = base.clone() * base;
            e >>= 1;
        }
        acc
    }

    /// Zero for exact fields; `|self| <= tol * scale` otherwise.
    fn is_negligible(&self, scale: f64, tol: f64) -> bool {
        if Self::EXACT {
            self.is_zero()
        } else {
            self.abs() <= tol * scale
        }
    }
}

impl Scalar for GaussianRational {
    const EXACT: bool = true;

    fn zero() -> Self {
        Complex::new(BigRational::zero(), BigRational::zero())
    }
    fn one() -> Self {
        Complex::new(BigRational::one(), BigRational::zero())
    }
    fn imag_unit() -> Self {
        Complex::new(BigRational::zero(), BigRational::one())
    }
    fn from_i64(n: i64) -> Self {
        Complex::new(BigRational::from_integer(BigInt::from(n)), BigRational::zero())
    }
    fn from_rational(q: &BigRational) -> Self {
        Complex::new(q.clone(), BigRational::zero())
    }
    fn from_exact(q: &GaussianRational) -> Self {
        q.clone()
    }
    fn from_c64(_: Complex64) -> Option<Self> {
        None
    }
    fn is_zero(&self) -> bool {
        self.re.is_zero() && self.im.is_zero()
    }
    fn conj(&self) -> Self {
        Complex::conj(self)
    }
    fn re(&self) -> Self {
        Complex::new(self.re.clone(), BigRational::zero())
    }
    fn im(&self) -> Self {
        Complex::new(self.im.clone(), BigRational::zero())
    }
    fn to_c64(&self) -> Complex64 {
        Complex64::new(rational_to_f64(&self.re), rational_to_f64(&self.im))
    }
    fn as_exact(&self) -> Option<GaussianRational> {
        Some(self.clone())
    }
    fn format_coeff(&self) -> String {
        join_parts(
            (!self.re.is_zero()).then(|| format_rational(&self.re)),
            (!self.im.is_zero()).then(|| format_rational(&self.im)),
        )
    }
    fn parse_real(lit: &str) -> Option<Self> {
        parse_rational(lit).map(|q| Complex::new(q, BigRational::zero()))
    }
}

impl Scalar for Complex64 {
    const EXACT: bool = false;

    fn zero() -> Self {
        Complex64::new(0.0, 0.0)
    }
    fn one() -> Self {
        Complex64::new(1.0, 0.0)
    }
    fn imag_unit() -> Self {
        Complex64::new(0.0, 1.0)
    }
    fn from_i64(n: i64) -> Self {
        Complex64::new(n as f64, 0.0)
    }
    fn from_rational(q: &BigRational) -> Self {
        Complex64::new(rational_to_f64(q), 0.0)
    }
    fn from_exact(q: &GaussianRational) -> Self {
        q.to_c64()
    }
    fn from_c64(c: Complex64) -> Option<Self> {
        Some(c)
    }
    fn is_zero(&self) -> bool {
        self.re == 0.0 && self.im == 0.0
    }
    fn conj(&self) -> Self {
        Complex::conj(self)
    }
    fn re(&self) -> Self {
        Complex64::new(self.re, 0.0)
    }
    fn im(&self) -> Self {
        Complex64::new(self.im, 0.0)
    }
    fn to_c64(&self) -> Complex64 {
        *self
    }
    fn as_exact(&self) -> Option<GaussianRational> {
        None
    }
    fn format_coeff(&self) -> String {
        join_parts(
            (self.re != 0.0).then(|| format_f64(self.re)),
            (self.im != 0.0).then(|| format_f64(self.im)),
        )
    }
    fn parse_real(lit: &str) -> Option<Self> {
        let value = if lit.contains('/') {
            rational_to_f64(&parse_rational(lit)?)
        } else {
            lit.trim().parse::<f64>().ok()?
        };
        Some(Complex64::new(value, 0.0))
    }
}

/// `n/d` as an exact rational. Panics when `d == 0`.
pub fn rational(n: i64, d: i64) -> BigRational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

/// The Gaussian integer `re + im·i`.
pub fn gaussian(re: i64, im: i64) -> GaussianRational {
    Complex::new(rational(re, 1), rational(im, 1))
}

/// Seventeen significant digits, enough to round-trip any double.
pub fn format_f64(x: f64) -> String {
    format!("{x:.16e}")
}

fn join_parts(re: Option<String>, im: Option<String>) -> String {
    let imag = |s: String| match s.as_str() {
        "1" => "i".to_string(),
        "-1" => "-i".to_string(),
        _ => format!("{s}i"),
    };
    match (re, im) {
        (None, None) => "0".to_string(),
        (Some(r), None) => r,
        (None, Some(i)) => imag(i),
        (Some(r), Some(i)) => {
            let i = imag(i);
            if i.starts_with('-') {
                format!("({r}{i})")
            } else {
                format!("({r}+{i})")
            }
        }
    }
}

/// Correctly rounded conversion (ties to even), independent of operand size.
pub fn rational_to_f64(q: &BigRational) -> f64 {
    if q.is_zero() {
        return 0.0;
    }
    q.to_f64().unwrap_or_else(|| {
        if q.is_negative() {
            f64::NEG_INFINITY
        } else {
            f64::INFINITY
        }
    })
}

/// The exact binary value of a finite double.
pub fn f64_to_rational(x: f64) -> Option<BigRational> {
    BigRational::from_float(x)
}

pub fn c64_to_exact(c: Complex64) -> Option<GaussianRational> {
    Some(Complex::new(f64_to_rational(c.re)?, f64_to_rational(c.im)?))
}

/// Parses a decimal or scientific literal (`-2.5e-3`) into its exact value.
pub fn parse_decimal(s: &str) -> Option<BigRational> {
    let s = s.trim();
    let (mantissa, exponent) = match s.find(['e', 'E']) {
        Some(pos) => (&s[..pos], s[pos + 1..].parse::<i64>().ok()?),
        None => (s, 0),
    };
    let (negative, mantissa) = match mantissa.strip_prefix('-') {
        Some(rest) => (true, rest),
        None => (false, mantissa.strip_prefix('+').unwrap_or(mantissa)),
    };
    let (int_part, frac_part) = match mantissa.split_once('.') {
        Some((a, b)) => (a, b),
        None => (mantissa, ""),
    };
    if int_part.is_empty() && frac_part.is_empty() {
        return None;
    }
    if !int_part.chars().chain(frac_part.chars()).all(|c| c.is_ascii_digit()) {
        return None;
    }
    let digits = format!("{int_part}{frac_part}");
    let mut num: BigInt = digits.parse().ok()?;
    if negative {
        num = -num;
    }
    let shift = exponent - frac_part.len() as i64;
    let ten = BigInt::from(10);
    let magnitude = num_traits::pow(ten, shift.unsigned_abs() as usize);
    Some(if shift >= 0 {
        BigRational::from_integer(num * magnitude)
    } else {
        BigRational::new(num, magnitude)
    })
}

/// Parses `a` or `a/b` with integer `a`, `b`, or falls back to a decimal literal.
pub fn parse_rational(s: &str) -> Option<BigRational> {
    let s = s.trim();
    if let Some((n, d)) = s.split_once('/') {
        let n: BigInt = n.trim().parse().ok()?;
        let d: BigInt = d.trim().parse().ok()?;
        if d.is_zero() {
            return None;
        }
        return Some(BigRational::new(n, d));
    }
    parse_decimal(s)
}

/// Best rational approximation with denominator at most `max_den`, by
/// continued fractions. Returns `None` when none lies within `tol` of `x`.
pub fn rationalize_f64(x: f64, max_den: u64, tol: f64) -> Option<BigRational> {
    if !x.is_finite() {
        return None;
    }
    let (mut p0, mut q0, mut p1, mut q1) = (0i128, 1i128, 1i128, 0i128);
    let mut rem = x;
    let mut best = None;
    for _ in 0..64 {
        let a = rem.floor();
        if a.abs() > 1e15 {
            break;
        }
        let a = a as i128;
        let p2 = a * p1 + p0;
        let q2 = a * q1 + q0;
        if q2 > max_den as i128 {
            break;
        }
        (p0, q0, p1, q1) = (p1, q1, p2, q2);
        let approx = p1 as f64 / q1 as f64;
        if (approx - x).abs() <= tol {
            best = Some(BigRational::new(BigInt::from(p1), BigInt::from(q1)));
            break;
        }
        let frac = rem - rem.floor();
        if frac == 0.0 {
            break;
        }
        rem = 1.0 / frac;
    }
    best
}

pub fn rationalize_c64(c: Complex64, max_den: u64, tol: f64) -> Option<GaussianRational> {
    Some(Complex::new(
        rationalize_f64(c.re, max_den, tol)?,
        rationalize_f64(c.im, max_den, tol)?,
    ))
}

/// Formats a rational as `n` or `n/d`.
pub fn format_rational(q: &BigRational) -> String {
    if q.denom().is_one() {
        q.numer().to_string()
    } else {
        format!("{}/{}", q.numer(), q.denom())
    }
}

/// Least common multiple of the denominators of both parts.
pub fn common_denominator(q: &GaussianRational) -> BigInt {
    q.re.denom().lcm(q.im.denom())
}
