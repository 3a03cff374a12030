//! Real hypersurfaces given by Hermitian polynomial defining functions.

mod cayley;
mod reduced;
mod sample;

pub use cayley::{cayley, cayley_exact, cayley_pullback};
pub use reduced::{im_quotient_minus_one, proper_transform, ClusterSet, ReducedEquation, TraceOptions};
pub use sample::{
    graph_sample, sphere_sample, write_csv, zero_set_sample, CsvRow, Region, SampleOutcome, CSV_HEADER,
};

use num_complex::Complex64;
use thiserror::Error;

use crate::algebra::{AlgebraError, HermEval, HermPoly};
use crate::blowup::BlowupError;

/// Gradients with norm below this are treated as vanishing.
pub const GRADIENT_FLOOR: f64 = 1e-12;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum HypersurfaceError {
    #[error("defining function is not real-valued")]
    NotReal,
    #[error("defining function is identically zero")]
    Zero,
    #[error("gradient vanishes at ({0}, {1}); the complex tangent line is undefined")]
    ZeroGradient(Complex64, Complex64),
    #[error("w2 = 1 is sent to infinity")]
    PointAtInfinity,
    #[error("reduced equation is undefined along every approach to {0}")]
    UndefinedTrace(String),
    #[error("chart {chart} has no exceptional coordinate {coord}")]
    NotExceptional { chart: String, coord: usize },
    #[error(transparent)]
    Algebra(#[from] AlgebraError),
    #[error(transparent)]
    Blowup(#[from] BlowupError),
}

/// `{ρ = 0}` in a named chart, with float evaluators for `ρ`, its first
/// derivatives `∂ρ/∂z_j` and the complex Hessian `∂²ρ/∂z_i∂z̄_j`.
#[derive(Clone, Debug)]
pub struct RealHypersurface {
    rho: HermPoly,
    chart: String,
    value: HermEval,
    d: [HermEval; 2],
    hess: [[HermEval; 2]; 2],
}

/// Gradient at a point, in both the complex and the real form.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Gradient {
    /// `(∂ρ/∂z₁, ∂ρ/∂z₂)`.
    pub complex: [Complex64; 2],
    /// `(∂ρ/∂x₁, ∂ρ/∂y₁, ∂ρ/∂x₂, ∂ρ/∂y₂)`.
    pub real: [f64; 4],
}

impl Gradient {
    pub fn norm(&self) -> f64 {
        self.real.iter().map(|x| x * x).sum::<f64>().sqrt()
    }
}

impl RealHypersurface {
    pub fn new(rho: HermPoly, chart: &str) -> Result<Self, HypersurfaceError> {
        if rho.is_zero() {
            return Err(HypersurfaceError::Zero);
        }
        if !rho.is_real() {
            return Err(HypersurfaceError::NotReal);
        }
        if rho.n_vars() != 2 {
            return Err(AlgebraError::NotBivariate(rho.n_vars()).into());
        }
        let d = [rho.d_hol(0), rho.d_hol(1)];
        let hess = [
            [d[0].d_anti(0).compile(), d[0].d_anti(1).compile()],
            [d[1].d_anti(0).compile(), d[1].d_anti(1).compile()],
        ];
        Ok(Self { value: rho.compile(), d: [d[0].compile(), d[1].compile()], hess, rho, chart: chart.to_owned() })
    }

    pub fn rho(&self) -> &HermPoly {
        &self.rho
    }

    pub fn chart(&self) -> &str {
        &self.chart
    }

    pub fn eval(&self, p: [Complex64; 2]) -> f64 {
        self.value.eval_re(&p)
    }

    pub fn gradient(&self, p: [Complex64; 2]) -> Gradient {
        let complex = [self.d[0].eval(&p), self.d[1].eval(&p)];
        // for real ρ: ∂ρ/∂x = 2 Re ∂ρ/∂z, ∂ρ/∂y = −2 Im ∂ρ/∂z
        let real = [2.0 * complex[0].re, -2.0 * complex[0].im, 2.0 * complex[1].re, -2.0 * complex[1].im];
        Gradient { complex, real }
    }

    /// `Σ H_ij v_i v̄_j / |v|²` for `v = (−∂ρ/∂z₂, ∂ρ/∂z₁)` spanning the complex
    /// tangent line. Positive values mean strong pseudoconvexity of the side `ρ < 0`.
    pub fn levi_form(&self, p: [Complex64; 2]) -> Result<f64, HypersurfaceError> {
        let g = self.gradient(p);
        if g.norm() <= GRADIENT_FLOOR {
            return Err(HypersurfaceError::ZeroGradient(p[0], p[1]));
        }
        let v = [-g.complex[1], g.complex[0]];
        let mut acc = Complex64::new(0.0, 0.0);
        for i in 0..2 {
            for j in 0..2 {
                acc += self.hess[i][j].eval(&p) * v[i] * v[j].conj();
            }
        }
        Ok(acc.re / (v[0].norm_sqr() + v[1].norm_sqr()))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::HoloPoly;
    use crate::blowup::chart_vars;
    use crate::example::{rho_model, rho_sphere};

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn model_gradient_at_origin() {
        let h = RealHypersurface::new(rho_model(), "U0").unwrap();
        let g = h.gradient([c(0.0, 0.0), c(0.0, 0.0)]);
        assert_eq!(g.complex[0], c(0.0, 0.0));
        assert!((g.complex[1] - c(0.0, 0.5)).norm() < 1e-15);
        assert_eq!(g.real, [0.0, 0.0, 0.0, -1.0]);
    }

    #[test]
    fn model_levi_value_is_one_at_origin() {
        let h = RealHypersurface::new(rho_model(), "U0").unwrap();
        assert!((h.levi_form([c(0.0, 0.0), c(0.0, 0.0)]).unwrap() - 1.0).abs() < 1e-15);
    }

    #[test]
    fn sphere_levi_value_is_one() {
        let h = RealHypersurface::new(rho_sphere(), "ball").unwrap();
        let s = 0.5f64.sqrt();
        assert!((h.levi_form([c(s, 0.0), c(0.0, s)]).unwrap() - 1.0).abs() < 1e-14);
    }

    #[test]
    fn levi_flat_hyperplane() {
        let v = chart_vars();
        let rho = HermPoly::im_of(&HoloPoly::var(&v, 1)).scale(&crate::algebra::ExactComplex::int(-1, 0));
        let h = RealHypersurface::new(rho, "U0").unwrap();
        assert_eq!(h.levi_form([c(0.0, 0.0), c(0.0, 0.0)]).unwrap(), 0.0);
    }

    #[test]
    fn degenerate_defining_function_rejected_at_critical_point() {
        let v = chart_vars();
        let h = RealHypersurface::new(HermPoly::abs_sq(&HoloPoly::var(&v, 0)), "U0").unwrap();
        assert!(matches!(h.levi_form([c(0.0, 0.0), c(0.0, 0.0)]), Err(HypersurfaceError::ZeroGradient(..))));
    }

    #[test]
    fn non_real_rejected() {
        let v = chart_vars();
        let p = HermPoly::from_holo(&HoloPoly::var(&v, 0));
        assert_eq!(RealHypersurface::new(p, "U0").unwrap_err(), HypersurfaceError::NotReal);
    }
}
