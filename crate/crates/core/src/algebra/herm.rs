use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_complex::Complex64;

use super::holo::{check_images, fmt_terms, PowerCache};
use super::terms::{self, TermMap};
use super::{AlgebraError, Bindings, ExactComplex, HoloPoly, Monomial, Vars};

/// Polynomial in `z_1..z_n` and their conjugates.
///
/// Exponent vectors have `2n` slots: the first `n` are holomorphic powers,
/// the last `n` antiholomorphic. A real-valued Hermitian polynomial has the
/// coefficient of `(α, β)` equal to the conjugate of that of `(β, α)`; see
/// [`HermPoly::is_real`]. Intermediate quantities such as `z₂/z̄₁` numerators
/// need not be real, so reality is checked rather than enforced.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct HermPoly {
    vars: Vars,
    terms: TermMap,
}

impl HermPoly {
    pub fn zero(vars: &Vars) -> Self {
        Self { vars: vars.clone(), terms: TermMap::new() }
    }

    pub fn constant(vars: &Vars, c: ExactComplex) -> Self {
        let mut terms = TermMap::new();
        terms::accumulate(&mut terms, Monomial::one(2 * vars.len()), &c);
        Self { vars: vars.clone(), terms }
    }

    pub fn one(vars: &Vars) -> Self {
        Self::constant(vars, ExactComplex::one())
    }

    /// Term `c · z^hol · z̄^anti`.
    pub fn term(vars: &Vars, hol: &[u32], anti: &[u32], c: ExactComplex) -> Self {
        assert!(hol.len() == vars.len() && anti.len() == vars.len(), "monomial arity");
        let mut terms = TermMap::new();
        terms::accumulate(&mut terms, Monomial::new([hol, anti].concat()), &c);
        Self { vars: vars.clone(), terms }
    }

    pub(crate) fn from_map(vars: &Vars, terms: TermMap) -> Self {
        Self { vars: vars.clone(), terms }
    }

    /// Embeds a holomorphic polynomial.
    pub fn from_holo(p: &HoloPoly) -> Self {
        let n = p.vars().len();
        let terms = p
            .terms()
            .map(|(m, c)| (Monomial::new([m.exps(), &vec![0; n]].concat()), c.clone()))
            .collect();
        Self::from_map(p.vars(), terms)
    }

    /// The antiholomorphic polynomial `conj(p(z))`.
    pub fn conj_of(p: &HoloPoly) -> Self {
        let n = p.vars().len();
        let terms = p
            .terms()
            .map(|(m, c)| (Monomial::new([&vec![0; n], m.exps()].concat()), c.conj()))
            .collect();
        Self::from_map(p.vars(), terms)
    }

    /// `|p|² = p · conj(p)`.
    pub fn abs_sq(p: &HoloPoly) -> Self {
        &Self::from_holo(p) * &Self::conj_of(p)
    }

    /// `Re p = (p + p̄)/2`.
    pub fn re_of(p: &HoloPoly) -> Self {
        (&Self::from_holo(p) + &Self::conj_of(p)).scale(&ExactComplex::ratio(1, 2))
    }

    /// `Im p = (p − p̄)/(2i)`.
    pub fn im_of(p: &HoloPoly) -> Self {
        let k = ExactComplex::int(0, 2).recip().expect("nonzero");
        (&Self::from_holo(p) - &Self::conj_of(p)).scale(&k)
    }

    pub fn vars(&self) -> &Vars {
        &self.vars
    }

    pub fn n_vars(&self) -> usize {
        self.vars.len()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &ExactComplex)> {
        self.terms.iter()
    }

    /// Terms split as `(holomorphic exponents, antiholomorphic exponents, coefficient)`.
    pub fn paired_terms(&self) -> impl Iterator<Item = (&[u32], &[u32], &ExactComplex)> {
        let n = self.vars.len();
        self.terms.iter().map(move |(m, c)| (&m.exps()[..n], &m.exps()[n..], c))
    }

    pub fn n_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// Largest holomorphic and antiholomorphic total degrees.
    pub fn bidegree(&self) -> (u32, u32) {
        self.paired_terms().fold((0, 0), |(a, b), (h, an, _)| {
            (a.max(h.iter().sum()), b.max(an.iter().sum()))
        })
    }

    fn check_vars(&self, other: &Self) -> Result<(), AlgebraError> {
        if self.vars != other.vars {
            return Err(AlgebraError::VarMismatch {
                left: self.vars.to_string(),
                right: other.vars.to_string(),
            });
        }
        Ok(())
    }

    pub fn try_add(&self, other: &Self) -> Result<Self, AlgebraError> {
        self.check_vars(other)?;
        Ok(Self::from_map(&self.vars, terms::add(&self.terms, &other.terms)))
    }

    pub fn try_sub(&self, other: &Self) -> Result<Self, AlgebraError> {
        self.check_vars(other)?;
        Ok(Self::from_map(&self.vars, terms::sub(&self.terms, &other.terms)))
    }

    pub fn try_mul(&self, other: &Self) -> Result<Self, AlgebraError> {
        self.check_vars(other)?;
        Ok(Self::from_map(&self.vars, terms::mul(&self.terms, &other.terms)))
    }

    pub fn scale(&self, k: &ExactComplex) -> Self {
        Self::from_map(&self.vars, terms::scale(&self.terms, k))
    }

    pub fn pow(&self, exp: u32) -> Self {
        Self::from_map(&self.vars, terms::pow(&self.terms, 2 * self.vars.len(), exp))
    }

    /// Complex conjugate of the function: swaps the slot halves and conjugates coefficients.
    pub fn conj(&self) -> Self {
        let n = self.vars.len();
        let terms = self
            .terms
            .iter()
            .map(|(m, c)| (Monomial::new([&m.exps()[n..], &m.exps()[..n]].concat()), c.conj()))
            .collect();
        Self::from_map(&self.vars, terms)
    }

    /// Conjugation symmetry: the function is real-valued everywhere.
    pub fn is_real(&self) -> bool {
        self.conj() == *self
    }

    pub fn real_part(&self) -> Self {
        (self + &self.conj()).scale(&ExactComplex::ratio(1, 2))
    }

    pub fn eval(&self, point: &[ExactComplex]) -> ExactComplex {
        assert_eq!(point.len(), self.vars.len(), "evaluation point arity");
        let full: Vec<ExactComplex> = point.iter().cloned().chain(point.iter().map(ExactComplex::conj)).collect();
        let mut acc = ExactComplex::zero();
        for (m, c) in &self.terms {
            let mut t = c.clone();
            for (x, &e) in full.iter().zip(m.exps()) {
                if e > 0 {
                    t = &t * &x.pow(e);
                }
            }
            acc += &t;
        }
        acc
    }

    pub fn eval_f64(&self, point: &[Complex64]) -> Complex64 {
        assert_eq!(point.len(), self.vars.len(), "evaluation point arity");
        let full: Vec<Complex64> = point.iter().copied().chain(point.iter().map(|z| z.conj())).collect();
        self.terms
            .iter()
            .map(|(m, c)| full.iter().zip(m.exps()).fold(c.to_c64(), |t, (x, &e)| t * x.powu(e)))
            .sum()
    }

    /// Float evaluator with the term list flattened once.
    pub fn compile(&self) -> HermEval {
        HermEval {
            n: self.vars.len(),
            terms: self.terms.iter().map(|(m, c)| (c.to_c64(), m.exps().to_vec())).collect(),
        }
    }

    fn slot_derivative(&self, slot: usize) -> Self {
        let mut out = TermMap::new();
        for (m, c) in &self.terms {
            let e = m.exps()[slot];
            if e == 0 {
                continue;
            }
            let mut exps = m.exps().to_vec();
            exps[slot] -= 1;
            terms::accumulate(&mut out, Monomial::new(exps), &(c * &ExactComplex::int(e as i64, 0)));
        }
        Self::from_map(&self.vars, out)
    }

    /// `∂/∂z_idx`.
    pub fn d_hol(&self, idx: usize) -> Self {
        self.slot_derivative(idx)
    }

    /// `∂/∂z̄_idx`.
    pub fn d_anti(&self, idx: usize) -> Self {
        self.slot_derivative(self.vars.len() + idx)
    }

    pub fn substitute(&self, bindings: &Bindings) -> Result<Self, AlgebraError> {
        let images = self
            .vars
            .names()
            .iter()
            .map(|v| bindings.get(v).cloned().ok_or_else(|| AlgebraError::MissingBinding(v.clone())))
            .collect::<Result<Vec<_>, _>>()?;
        self.compose(&images)
    }

    /// Positional substitution `z_k ← images[k]`; conjugated slots receive the
    /// conjugated images, so real polynomials stay real.
    pub fn compose(&self, images: &[HoloPoly]) -> Result<Self, AlgebraError> {
        let target = check_images(&self.vars, images)?;
        let n = self.vars.len();
        let hol: Vec<HoloPoly> = images.to_vec();
        let holo_images: Vec<HermPoly> = hol.iter().map(HermPoly::from_holo).collect();
        let anti_images: Vec<HermPoly> = hol.iter().map(HermPoly::conj_of).collect();
        let slots: Vec<HoloPoly> = holo_images
            .iter()
            .chain(&anti_images)
            .map(|h| HoloPoly::from_map(&doubled(&target), h.terms.clone()))
            .collect();
        let mut powers = PowerCache::new(&slots);
        let mut out = TermMap::new();
        for (m, c) in &self.terms {
            let mut t = terms::scale(&terms::one(2 * target.len()), c);
            for (k, &e) in m.exps().iter().enumerate().take(2 * n) {
                if e > 0 {
                    t = terms::mul(&t, powers.get(k, e));
                }
            }
            out = terms::add(&out, &t);
        }
        Ok(Self::from_map(&target, out))
    }

    /// Substitution of a rational map `z_k ← nums[k] / den`, cleared:
    /// returns `p(nums/den) · den^A · conj(den)^B` with `(A, B)` the bidegree.
    pub fn compose_rational(&self, nums: &[HoloPoly], den: &HoloPoly) -> Result<(Self, (u32, u32)), AlgebraError> {
        if den.is_zero() {
            return Err(AlgebraError::ZeroDenominator);
        }
        let target = check_images(&self.vars, nums)?;
        if *den.vars() != target {
            return Err(AlgebraError::VarMismatch { left: target.to_string(), right: den.vars().to_string() });
        }
        let n = self.vars.len();
        let (a, b) = self.bidegree();
        let d = HermPoly::from_holo(den);
        let dbar = HermPoly::conj_of(den);
        let num_h: Vec<HermPoly> = nums.iter().map(HermPoly::from_holo).collect();
        let num_a: Vec<HermPoly> = nums.iter().map(HermPoly::conj_of).collect();
        let mut out = HermPoly::zero(&target);
        for (m, c) in &self.terms {
            let (h, an) = (&m.exps()[..n], &m.exps()[n..]);
            let dh: u32 = h.iter().sum();
            let da: u32 = an.iter().sum();
            let mut t = (&d.pow(a - dh) * &dbar.pow(b - da)).scale(c);
            for k in 0..n {
                if h[k] > 0 {
                    t = &t * &num_h[k].pow(h[k]);
                }
                if an[k] > 0 {
                    t = &t * &num_a[k].pow(an[k]);
                }
            }
            out = &out + &t;
        }
        Ok((out, (a, b)))
    }

    pub fn factor_out_monomial(&self) -> Result<(Monomial, Self), AlgebraError> {
        let content = terms::monomial_content(&self.terms).ok_or(AlgebraError::ZeroPolynomial)?;
        let reduced = terms::div_monomial(&self.terms, &content).expect("content divides every term");
        Ok((content, Self::from_map(&self.vars, reduced)))
    }

    pub fn monomial_content(&self) -> Option<Monomial> {
        terms::monomial_content(&self.terms)
    }

    pub fn div_monomial(&self, m: &Monomial) -> Option<Self> {
        terms::div_monomial(&self.terms, m).map(|t| Self::from_map(&self.vars, t))
    }

    pub fn mul_monomial(&self, m: &Monomial) -> Self {
        Self::from_map(&self.vars, self.terms.iter().map(|(k, c)| (k.mul(m), c.clone())).collect())
    }

    pub fn div_exact(&self, divisor: &Self) -> Option<Self> {
        if self.vars != divisor.vars {
            return None;
        }
        terms::div_exact(&self.terms, &divisor.terms).map(|t| Self::from_map(&self.vars, t))
    }

    /// Order of vanishing along `{z_idx = 0}`: the least `hol + anti` power of
    /// `z_idx`, `z̄_idx` over all terms.
    pub fn vanishing_order(&self, idx: usize) -> Option<u32> {
        let n = self.vars.len();
        self.terms.keys().map(|m| m.exps()[idx] + m.exps()[n + idx]).min()
    }
}

fn doubled(vars: &Vars) -> Vars {
    let names: Vec<String> = vars
        .names()
        .iter()
        .cloned()
        .chain(vars.names().iter().map(|v| format!("~{v}")))
        .collect();
    Vars::new(&names)
}

/// Flattened float evaluator for a [`HermPoly`].
#[derive(Clone, Debug)]
pub struct HermEval {
    n: usize,
    terms: Vec<(Complex64, Vec<u32>)>,
}

impl HermEval {
    pub fn eval(&self, point: &[Complex64]) -> Complex64 {
        debug_assert_eq!(point.len(), self.n);
        let mut acc = Complex64::new(0.0, 0.0);
        for (c, exps) in &self.terms {
            let mut t = *c;
            for (k, &e) in exps.iter().enumerate() {
                if e > 0 {
                    let x = if k < self.n { point[k] } else { point[k - self.n].conj() };
                    t *= x.powu(e);
                }
            }
            acc += t;
        }
        acc
    }

    /// Real part of the value; for real polynomials this is the value.
    pub fn eval_re(&self, point: &[Complex64]) -> f64 {
        self.eval(point).re
    }
}

impl fmt::Display for HermPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt_terms(f, &self.terms, self.vars.names(), true)
    }
}

impl fmt::Debug for HermPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "HermPoly{} {}", self.vars, self)
    }
}

impl Add<&HermPoly> for &HermPoly {
    type Output = HermPoly;
    fn add(self, rhs: &HermPoly) -> HermPoly {
        self.try_add(rhs).unwrap_or_else(|e| panic!("{e}"))
    }
}

impl Sub<&HermPoly> for &HermPoly {
    type Output = HermPoly;
    fn sub(self, rhs: &HermPoly) -> HermPoly {
        self.try_sub(rhs).unwrap_or_else(|e| panic!("{e}"))
    }
}

impl Mul<&HermPoly> for &HermPoly {
    type Output = HermPoly;
    fn mul(self, rhs: &HermPoly) -> HermPoly {
        self.try_mul(rhs).unwrap_or_else(|e| panic!("{e}"))
    }
}

impl Neg for &HermPoly {
    type Output = HermPoly;
    fn neg(self) -> HermPoly {
        HermPoly::from_map(&self.vars, terms::neg(&self.terms))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn zz() -> Vars {
        Vars::new(&["z1", "z2"])
    }

    /// `|z1|² − Im z2`
    fn rho_m() -> HermPoly {
        let v = zz();
        &HermPoly::abs_sq(&HoloPoly::var(&v, 0)) - &HermPoly::im_of(&HoloPoly::var(&v, 1))
    }

    #[test]
    fn defining_function_is_real() {
        assert!(rho_m().is_real());
        assert!(!HermPoly::from_holo(&HoloPoly::var(&zz(), 1)).is_real());
    }

    #[test]
    fn evaluates_by_hand() {
        let rho = rho_m();
        assert_eq!(rho.eval(&[ExactComplex::zero(), ExactComplex::zero()]), ExactComplex::zero());
        assert_eq!(rho.eval(&[ExactComplex::one(), ExactComplex::int(0, 2)]), ExactComplex::int(-1, 0));
    }

    #[test]
    fn text_marks_conjugates() {
        let v = zz();
        let p = HermPoly::abs_sq(&HoloPoly::var(&v, 0));
        assert_eq!(p.to_string(), "(1/1+0/1i)*z1^1*~z1^1");
    }

    #[test]
    fn compiled_matches_direct() {
        let rho = rho_m();
        let pt = [Complex64::new(0.3, -0.2), Complex64::new(1.5, 0.7)];
        let a = rho.eval_f64(&pt);
        let b = rho.compile().eval(&pt);
        assert!((a - b).norm() < 1e-15);
    }
}
