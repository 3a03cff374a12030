use std::fmt;

use super::{AlgebraError, HermPoly, HoloPoly, Monomial};

/// Operations a polynomial kind must offer to serve as numerator and
/// denominator of a [`RationalExpr`].
pub trait Polynomial: Clone + PartialEq + fmt::Display + fmt::Debug {
    fn is_zero(&self) -> bool;
    fn n_terms(&self) -> usize;
    fn try_mul(&self, other: &Self) -> Result<Self, AlgebraError>;
    fn try_sub(&self, other: &Self) -> Result<Self, AlgebraError>;
    fn monomial_content(&self) -> Option<Monomial>;
    fn div_monomial(&self, m: &Monomial) -> Option<Self>;
}

impl Polynomial for HoloPoly {
    fn is_zero(&self) -> bool {
        HoloPoly::is_zero(self)
    }
    fn n_terms(&self) -> usize {
        HoloPoly::n_terms(self)
    }
    fn try_mul(&self, other: &Self) -> Result<Self, AlgebraError> {
        HoloPoly::try_mul(self, other)
    }
    fn try_sub(&self, other: &Self) -> Result<Self, AlgebraError> {
        HoloPoly::try_sub(self, other)
    }
    fn monomial_content(&self) -> Option<Monomial> {
        self.factor_out_monomial().ok().map(|(m, _)| m)
    }
    fn div_monomial(&self, m: &Monomial) -> Option<Self> {
        HoloPoly::div_monomial(self, m)
    }
}

impl Polynomial for HermPoly {
    fn is_zero(&self) -> bool {
        HermPoly::is_zero(self)
    }
    fn n_terms(&self) -> usize {
        HermPoly::n_terms(self)
    }
    fn try_mul(&self, other: &Self) -> Result<Self, AlgebraError> {
        HermPoly::try_mul(self, other)
    }
    fn try_sub(&self, other: &Self) -> Result<Self, AlgebraError> {
        HermPoly::try_sub(self, other)
    }
    fn monomial_content(&self) -> Option<Monomial> {
        HermPoly::monomial_content(self)
    }
    fn div_monomial(&self, m: &Monomial) -> Option<Self> {
        HermPoly::div_monomial(self, m)
    }
}

/// Quotient of two polynomials of the same kind, stored with their common
/// monomial factor cancelled.
#[derive(Clone, PartialEq, Debug)]
pub struct RationalExpr<P> {
    num: P,
    den: P,
}

impl<P: Polynomial> RationalExpr<P> {
    pub fn new(num: P, den: P) -> Result<Self, AlgebraError> {
        if den.is_zero() {
            return Err(AlgebraError::ZeroDenominator);
        }
        // check the variable lists agree
        num.try_sub(&num).and_then(|z| z.try_mul(&den))?;
        let common = match num.monomial_content() {
            Some(mn) => den.monomial_content().map(|md| mn.gcd(&md)),
            None => None,
        };
        Ok(match common {
            Some(g) if !g.is_one() => Self {
                num: num.div_monomial(&g).expect("gcd divides"),
                den: den.div_monomial(&g).expect("gcd divides"),
            },
            _ => Self { num, den },
        })
    }

    pub fn num(&self) -> &P {
        &self.num
    }

    pub fn den(&self) -> &P {
        &self.den
    }

    /// Equality as functions: `a/b = c/d` iff `a·d − c·b = 0`.
    pub fn equivalent(&self, other: &Self) -> Result<bool, AlgebraError> {
        Ok(self.cross_residual(other)?.is_zero())
    }

    /// `a·d − c·b`; the zero polynomial exactly when the two expressions agree.
    pub fn cross_residual(&self, other: &Self) -> Result<P, AlgebraError> {
        self.num.try_mul(&other.den)?.try_sub(&other.num.try_mul(&self.den)?)
    }
}

impl<P: Polynomial> fmt::Display for RationalExpr<P> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}) / ({})", self.num, self.den)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::{ExactComplex, Vars};

    #[test]
    fn cancels_common_monomial() {
        let v = Vars::new(&["s", "t"]);
        let s = HoloPoly::var(&v, 0);
        let t = HoloPoly::var(&v, 1);
        let r = RationalExpr::new(&(&s * &s) * &(&t * &t), &s * &t).unwrap();
        assert_eq!(*r.num(), &s * &t);
        assert_eq!(*r.den(), HoloPoly::one(&v));
    }

    #[test]
    fn zero_denominator_rejected() {
        let v = Vars::new(&["s", "t"]);
        assert_eq!(
            RationalExpr::new(HoloPoly::one(&v), HoloPoly::zero(&v)).unwrap_err(),
            AlgebraError::ZeroDenominator
        );
    }

    #[test]
    fn equivalence_by_cross_multiplication() {
        let v = Vars::new(&["s", "t"]);
        let s = HoloPoly::var(&v, 0);
        let two = HoloPoly::constant(&v, ExactComplex::int(2, 0));
        let a = RationalExpr::new(s.clone(), two.clone()).unwrap();
        let b = RationalExpr::new(&s * &two, &two * &two).unwrap();
        assert!(a.equivalent(&b).unwrap());
    }
}
