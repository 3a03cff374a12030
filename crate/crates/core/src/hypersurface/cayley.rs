use num_complex::Complex64;

use super::HypersurfaceError;
use crate::algebra::{ExactComplex, HermPoly};
use crate::example::cayley_map;

/// `(w₁, w₂) ↦ (w₁/(1−w₂), i(1+w₂)/(1−w₂))`.
pub fn cayley(w: [Complex64; 2]) -> Result<[Complex64; 2], HypersurfaceError> {
    let den = Complex64::new(1.0, 0.0) - w[1];
    if den.norm_sqr() == 0.0 {
        return Err(HypersurfaceError::PointAtInfinity);
    }
    Ok([w[0] / den, Complex64::i() * (Complex64::new(1.0, 0.0) + w[1]) / den])
}

pub fn cayley_exact(w: &[ExactComplex; 2]) -> Result<[ExactComplex; 2], HypersurfaceError> {
    let one = ExactComplex::one();
    let inv = (&one - &w[1]).recip().ok_or(HypersurfaceError::PointAtInfinity)?;
    Ok([&w[0] * &inv, &(&ExactComplex::i() * &(&one + &w[1])) * &inv])
}

/// `ρ∘R` with denominators cleared: returns `|1−w₂|^{2k}`-type multiple
/// `(1−w₂)^a·(1−w̄₂)^b·ρ∘R` and the exponents `(a, b)`.
pub fn cayley_pullback(rho: &HermPoly) -> Result<(HermPoly, (u32, u32)), HypersurfaceError> {
    let (a, b) = cayley_map();
    Ok(rho.compose_rational(&[a.num().clone(), b.num().clone()], a.den())?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::example::{rho_model, rho_sphere};

    #[test]
    fn south_pole_goes_to_origin() {
        let z = cayley_exact(&[ExactComplex::zero(), ExactComplex::int(-1, 0)]).unwrap();
        assert!(z[0].is_zero() && z[1].is_zero());
    }

    #[test]
    fn equator_point() {
        let z = cayley_exact(&[ExactComplex::one(), ExactComplex::zero()]).unwrap();
        assert_eq!(z, [ExactComplex::one(), ExactComplex::i()]);
        assert!(rho_model().eval(&z).is_zero());
    }

    #[test]
    fn north_pole_rejected() {
        let w = [Complex64::new(0.0, 0.0), Complex64::new(1.0, 0.0)];
        assert_eq!(cayley(w).unwrap_err(), HypersurfaceError::PointAtInfinity);
    }

    #[test]
    fn sphere_identity() {
        let (p, exps) = cayley_pullback(&rho_model()).unwrap();
        assert_eq!(exps, (1, 1));
        assert_eq!(p, rho_sphere());
    }
}
