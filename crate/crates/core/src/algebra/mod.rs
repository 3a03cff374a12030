//! Exact arithmetic over the Gaussian rationals: scalars, holomorphic and
//! Hermitian polynomials, rational expressions and resultants.

mod complex;
mod herm;
mod holo;
mod monomial;
mod rational;
mod resultant;
mod terms;
mod univariate;

pub use complex::ExactComplex;
#[allow(unused_imports)]
pub(crate) use complex::rationalize;
pub use herm::{HermEval, HermPoly};
pub use holo::{Bindings, HoloPoly};
pub use monomial::{Monomial, Vars};
pub use rational::{Polynomial, RationalExpr};
pub use resultant::{determinant, resultant};
pub use univariate::{ApproxRoot, RootSet, UniPoly};

use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum AlgebraError {
    #[error("variable lists differ: {left} vs {right}")]
    VarMismatch { left: String, right: String },
    #[error("no binding for variable `{0}`")]
    MissingBinding(String),
    #[error("unknown variable `{0}`")]
    UnknownVariable(String),
    #[error("operation undefined for the zero polynomial")]
    ZeroPolynomial,
    #[error("denominator is identically zero")]
    ZeroDenominator,
    #[error("resultant of two polynomials constant in the eliminated variable")]
    ConstantResultant,
    #[error("expected a bivariate polynomial, found {0} variables")]
    NotBivariate(usize),
    #[error("expected {expected} substitution images, got {got}")]
    Arity { expected: usize, got: usize },
}

/// Which arithmetic operation [`poly_arith`] applies.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ArithOp {
    Add,
    Sub,
    Mul,
}

/// `a op b` for two polynomials over the same variable list.
pub fn poly_arith<P: PolyArith>(a: &P, b: &P, op: ArithOp) -> Result<P, AlgebraError> {
    match op {
        ArithOp::Add => a.arith_add(b),
        ArithOp::Sub => a.arith_sub(b),
        ArithOp::Mul => a.arith_mul(b),
    }
}

/// Ring operations shared by [`HoloPoly`] and [`HermPoly`].
pub trait PolyArith: Sized {
    fn arith_add(&self, other: &Self) -> Result<Self, AlgebraError>;
    fn arith_sub(&self, other: &Self) -> Result<Self, AlgebraError>;
    fn arith_mul(&self, other: &Self) -> Result<Self, AlgebraError>;
}

macro_rules! impl_arith {
    ($t:ty) => {
        impl PolyArith for $t {
            fn arith_add(&self, other: &Self) -> Result<Self, AlgebraError> {
                self.try_add(other)
            }
            fn arith_sub(&self, other: &Self) -> Result<Self, AlgebraError> {
                self.try_sub(other)
            }
            fn arith_mul(&self, other: &Self) -> Result<Self, AlgebraError> {
                self.try_mul(other)
            }
        }
    };
}
impl_arith!(HoloPoly);
impl_arith!(HermPoly);
