//! Gaussian rationals: complex numbers with exact rational parts.

use std::fmt;
use std::ops::{Add, AddAssign, Mul, Neg, Sub, SubAssign};

use num_bigint::BigInt;
use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

/// A complex number `re + im·i` with arbitrary-precision rational parts.
///
/// `BigRational` keeps both parts reduced with a positive denominator, so
/// structural equality is numeric equality.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct ExactComplex {
    re: BigRational,
    im: BigRational,
}

impl ExactComplex {
    pub fn new(re: BigRational, im: BigRational) -> Self {
        Self { re, im }
    }

    /// `re + im·i` with integer parts.
    pub fn int(re: i64, im: i64) -> Self {
        Self::new(BigRational::from_integer(re.into()), BigRational::from_integer(im.into()))
    }

    /// The real rational `num/den`.
    ///
    /// Panics if `den == 0`.
    pub fn ratio(num: i64, den: i64) -> Self {
        Self::new(BigRational::new(num.into(), den.into()), BigRational::zero())
    }

    pub fn zero() -> Self {
        Self::default()
    }

    pub fn one() -> Self {
        Self::int(1, 0)
    }

    pub fn i() -> Self {
        Self::int(0, 1)
    }

    pub fn re(&self) -> &BigRational {
        &self.re
    }

    pub fn im(&self) -> &BigRational {
        &self.im
    }

    pub fn is_zero(&self) -> bool {
        self.re.is_zero() && self.im.is_zero()
    }

    pub fn is_one(&self) -> bool {
        self.re.is_one() && self.im.is_zero()
    }

    pub fn is_real(&self) -> bool {
        self.im.is_zero()
    }

    pub fn conj(&self) -> Self {
        Self::new(self.re.clone(), -self.im.clone())
    }

    /// `|z|²`, exact.
    pub fn norm_sqr(&self) -> BigRational {
        &self.re * &self.re + &self.im * &self.im
    }

    pub fn recip(&self) -> Option<Self> {
        if self.is_zero() {
            return None;
        }
        let n = self.norm_sqr();
        Some(Self::new(&self.re / &n, -(&self.im / &n)))
    }

    pub fn checked_div(&self, other: &Self) -> Option<Self> {
        other.recip().map(|r| self * &r)
    }

    pub fn pow(&self, exp: u32) -> Self {
        let mut acc = Self::one();
        let mut base = self.clone();
        let mut e = exp;
        while e > 0 {
            if e & 1 == 1 {
                acc = &acc * &base;
            }
            base = &base * &base;
            e >>= 1;
        }
        acc
    }

    pub fn scale(&self, k: &BigRational) -> Self {
        Self::new(&self.re * k, &self.im * k)
    }

    pub fn to_c64(&self) -> Complex64 {
        Complex64::new(rat_to_f64(&self.re), rat_to_f64(&self.im))
    }

    /// Exact conversion of a finite float pair (every finite `f64` is a dyadic rational).
    pub fn from_c64(z: Complex64) -> Option<Self> {
        Some(Self::new(BigRational::from_float(z.re)?, BigRational::from_float(z.im)?))
    }
}

pub(crate) fn rat_to_f64(q: &BigRational) -> f64 {
    q.to_f64().unwrap_or_else(|| {
        // numerator/denominator too large for direct conversion
        let n = q.numer().to_f64().unwrap_or(f64::NAN);
        let d = q.denom().to_f64().unwrap_or(f64::NAN);
        n / d
    })
}

/// Best rational approximation of `x` with denominator at most `max_den`,
/// by continued fractions.
pub(crate) fn rationalize(x: f64, max_den: i64) -> Option<BigRational> {
    if !x.is_finite() {
        return None;
    }
    let (mut p0, mut q0, mut p1, mut q1) = (0i128, 1i128, 1i128, 0i128);
    let mut v = x;
    for _ in 0..64 {
        let a = v.floor();
        if a.abs() > 1e15 {
            break;
        }
        let ai = a as i128;
        let p2 = ai * p1 + p0;
        let q2 = ai * q1 + q0;
        if q2 > max_den as i128 {
            break;
        }
        (p0, q0, p1, q1) = (p1, q1, p2, q2);
        let frac = v - a;
        if frac.abs() < 1e-12 {
            break;
        }
        v = 1.0 / frac;
    }
    if q1 == 0 {
        return None;
    }
    Some(BigRational::new(BigInt::from(p1), BigInt::from(q1)))
}

fn fmt_rat(q: &BigRational) -> String {
    format!("{}/{}", q.numer(), q.denom())
}

impl fmt::Display for ExactComplex {
    /// `(<re>/<den>±<im>/<den>i)`, the coefficient form used in polynomial text.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let sign = if self.im.is_negative() { '-' } else { '+' };
        write!(f, "({}{}{}i)", fmt_rat(&self.re), sign, fmt_rat(&self.im.abs()))
    }
}

impl fmt::Debug for ExactComplex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl From<i64> for ExactComplex {
    fn from(v: i64) -> Self {
        Self::int(v, 0)
    }
}

impl From<BigRational> for ExactComplex {
    fn from(v: BigRational) -> Self {
        Self::new(v, BigRational::zero())
    }
}

impl Add<&ExactComplex> for &ExactComplex {
    type Output = ExactComplex;
    fn add(self, rhs: &ExactComplex) -> ExactComplex {
        ExactComplex::new(&self.re + &rhs.re, &self.im + &rhs.im)
    }
}

impl Sub<&ExactComplex> for &ExactComplex {
    type Output = ExactComplex;
    fn sub(self, rhs: &ExactComplex) -> ExactComplex {
        ExactComplex::new(&self.re - &rhs.re, &self.im - &rhs.im)
    }
}

impl Mul<&ExactComplex> for &ExactComplex {
    type Output = ExactComplex;
    fn mul(self, rhs: &ExactComplex) -> ExactComplex {
        ExactComplex::new(
            &self.re * &rhs.re - &self.im * &rhs.im,
            &self.re * &rhs.im + &self.im * &rhs.re,
        )
    }
}

impl Neg for &ExactComplex {
    type Output = ExactComplex;
    fn neg(self) -> ExactComplex {
        ExactComplex::new(-self.re.clone(), -self.im.clone())
    }
}

impl Neg for ExactComplex {
    type Output = ExactComplex;
    fn neg(self) -> ExactComplex {
        ExactComplex::new(-self.re, -self.im)
    }
}

macro_rules! forward_owned {
    ($tr:ident, $m:ident) => {
        impl $tr<ExactComplex> for ExactComplex {
            type Output = ExactComplex;
            fn $m(self, rhs: ExactComplex) -> ExactComplex {
                (&self).$m(&rhs)
            }
        }
        impl $tr<&ExactComplex> for ExactComplex {
            type Output = ExactComplex;
            fn $m(self, rhs: &ExactComplex) -> ExactComplex {
                (&self).$m(rhs)
            }
        }
    };
}
forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);

impl AddAssign<&ExactComplex> for ExactComplex {
    fn add_assign(&mut self, rhs: &ExactComplex) {
        self.re += &rhs.re;
        self.im += &rhs.im;
    }
}

impl SubAssign<&ExactComplex> for ExactComplex {
    fn sub_assign(&mut self, rhs: &ExactComplex) {
        self.re -= &rhs.re;
        self.im -= &rhs.im;
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn i_squared_is_minus_one() {
        let i = ExactComplex::i();
        assert_eq!(&i * &i, ExactComplex::int(-1, 0));
    }

    #[test]
    fn reciprocal_is_exact() {
        let z = ExactComplex::int(3, -4);
        let r = z.recip().unwrap();
        assert_eq!(&z * &r, ExactComplex::one());
        assert_eq!(r, ExactComplex::new(BigRational::new(3.into(), 25.into()), BigRational::new(4.into(), 25.into())));
        assert!(ExactComplex::zero().recip().is_none());
    }

    #[test]
    fn display_form() {
        assert_eq!(ExactComplex::ratio(-1, 2).to_string(), "(-1/2+0/1i)");
        assert_eq!(ExactComplex::int(2, -3).to_string(), "(2/1-3/1i)");
    }

    #[test]
    fn rationalize_recovers_small_fractions() {
        assert_eq!(rationalize(0.75, 1000), Some(BigRational::new(3.into(), 4.into())));
        assert_eq!(rationalize(-1.0 + 1e-14, 1000), Some(BigRational::from_integer((-1).into())));
    }
}
