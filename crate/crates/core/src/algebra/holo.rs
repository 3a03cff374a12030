use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_complex::Complex64;

use super::terms::{self, TermMap};
use super::{AlgebraError, ExactComplex, Monomial, UniPoly, Vars};

/// Polynomial in holomorphic variables with Gaussian-rational coefficients.
///
/// Terms are kept in a `BTreeMap` keyed by exponent vector, with no zero
/// coefficients stored, so equal polynomials compare equal structurally.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct HoloPoly {
    vars: Vars,
    terms: TermMap,
}

/// Named substitution `variable -> polynomial`.
pub type Bindings = BTreeMap<String, HoloPoly>;

impl HoloPoly {
    pub fn zero(vars: &Vars) -> Self {
        Self { vars: vars.clone(), terms: TermMap::new() }
    }

    pub fn constant(vars: &Vars, c: ExactComplex) -> Self {
        let mut terms = TermMap::new();
        terms::accumulate(&mut terms, Monomial::one(vars.len()), &c);
        Self { vars: vars.clone(), terms }
    }

    pub fn one(vars: &Vars) -> Self {
        Self::constant(vars, ExactComplex::one())
    }

    /// The coordinate function of variable `idx`.
    pub fn var(vars: &Vars, idx: usize) -> Self {
        Self::monomial(vars, Monomial::var(vars.len(), idx), ExactComplex::one())
    }

    pub fn named(vars: &Vars, name: &str) -> Result<Self, AlgebraError> {
        let idx = vars
            .index_of(name)
            .ok_or_else(|| AlgebraError::UnknownVariable(name.to_owned()))?;
        Ok(Self::var(vars, idx))
    }

    pub fn monomial(vars: &Vars, mono: Monomial, c: ExactComplex) -> Self {
        assert_eq!(mono.len(), vars.len(), "monomial arity");
        let mut terms = TermMap::new();
        terms::accumulate(&mut terms, mono, &c);
        Self { vars: vars.clone(), terms }
    }

    pub fn from_terms<I>(vars: &Vars, iter: I) -> Self
    where
        I: IntoIterator<Item = (Vec<u32>, ExactComplex)>,
    {
        let mut terms = TermMap::new();
        for (e, c) in iter {
            assert_eq!(e.len(), vars.len(), "monomial arity");
            terms::accumulate(&mut terms, Monomial::new(e), &c);
        }
        Self { vars: vars.clone(), terms }
    }

    pub(crate) fn from_map(vars: &Vars, terms: TermMap) -> Self {
        Self { vars: vars.clone(), terms }
    }

    pub fn vars(&self) -> &Vars {
        &self.vars
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &ExactComplex)> {
        self.terms.iter()
    }

    pub fn n_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn degree(&self) -> Option<u32> {
        self.terms.keys().map(Monomial::degree).max()
    }

    pub fn degree_in(&self, idx: usize) -> Option<u32> {
        self.terms.keys().map(|m| m.exps()[idx]).max()
    }

    pub fn is_constant(&self) -> bool {
        self.terms.keys().all(Monomial::is_one)
    }

    pub fn constant_term(&self) -> ExactComplex {
        self.terms
            .get(&Monomial::one(self.vars.len()))
            .cloned()
            .unwrap_or_default()
    }

    /// Indices of the variables that actually occur.
    pub fn support(&self) -> Vec<usize> {
        (0..self.vars.len())
            .filter(|&i| self.terms.keys().any(|m| m.exps()[i] > 0))
            .collect()
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
        Self::from_map(&self.vars, terms::pow(&self.terms, self.vars.len(), exp))
    }

    /// Complex-conjugates the coefficients (the polynomial `z ↦ conj(p(conj z))`).
    pub fn conj_coeffs(&self) -> Self {
        Self::from_map(&self.vars, self.terms.iter().map(|(m, c)| (m.clone(), c.conj())).collect())
    }

    /// Same terms over a different list of the same length.
    pub fn relabel(&self, vars: &Vars) -> Self {
        assert_eq!(vars.len(), self.vars.len(), "relabel arity");
        Self::from_map(vars, self.terms.clone())
    }

    pub fn eval(&self, point: &[ExactComplex]) -> ExactComplex {
        assert_eq!(point.len(), self.vars.len(), "evaluation point arity");
        let mut acc = ExactComplex::zero();
        for (m, c) in &self.terms {
            let mut t = c.clone();
            for (x, &e) in point.iter().zip(m.exps()) {
                if e > 0 {
                    t = &t * &x.pow(e);
                }
            }
            acc += &t;
        }
        acc
    }

    /// Floating evaluation; each product and sum rounds to nearest.
    pub fn eval_f64(&self, point: &[Complex64]) -> Complex64 {
        assert_eq!(point.len(), self.vars.len(), "evaluation point arity");
        self.terms
            .iter()
            .map(|(m, c)| {
                point
                    .iter()
                    .zip(m.exps())
                    .fold(c.to_c64(), |t, (x, &e)| t * x.powu(e))
            })
            .sum()
    }

    pub fn derivative(&self, idx: usize) -> Self {
        let mut out = TermMap::new();
        for (m, c) in &self.terms {
            let e = m.exps()[idx];
            if e == 0 {
                continue;
            }
            let mut exps = m.exps().to_vec();
            exps[idx] -= 1;
            terms::accumulate(&mut out, Monomial::new(exps), &(c * &ExactComplex::int(e as i64, 0)));
        }
        Self::from_map(&self.vars, out)
    }

    /// Substitutes every variable by the bound polynomial.
    pub fn substitute(&self, bindings: &Bindings) -> Result<Self, AlgebraError> {
        let images = self
            .vars
            .names()
            .iter()
            .map(|v| bindings.get(v).cloned().ok_or_else(|| AlgebraError::MissingBinding(v.clone())))
            .collect::<Result<Vec<_>, _>>()?;
        self.compose(&images)
    }

    /// Positional substitution: variable `k` becomes `images[k]`.
    pub fn compose(&self, images: &[HoloPoly]) -> Result<Self, AlgebraError> {
        let target = check_images(&self.vars, images)?;
        let mut powers = PowerCache::new(images);
        let mut out = TermMap::new();
        for (m, c) in &self.terms {
            let mut t = terms::scale(&terms::one(target.len()), c);
            for (k, &e) in m.exps().iter().enumerate() {
                if e > 0 {
                    t = terms::mul(&t, powers.get(k, e));
                }
            }
            out = terms::add(&out, &t);
        }
        Ok(Self::from_map(&target, out))
    }

    /// Substitution of a rational map with common denominator:
    /// returns `p(nums / den) · den^D` with `D` the total degree of `p`.
    pub fn compose_rational(&self, nums: &[HoloPoly], den: &HoloPoly) -> Result<(Self, u32), AlgebraError> {
        if den.is_zero() {
            return Err(AlgebraError::ZeroDenominator);
        }
        let target = check_images(&self.vars, nums)?;
        if den.vars != target {
            return Err(AlgebraError::VarMismatch { left: target.to_string(), right: den.vars.to_string() });
        }
        let d = self.degree().unwrap_or(0);
        let mut out = TermMap::new();
        for (m, c) in &self.terms {
            let mut t = terms::scale(&den.pow(d - m.degree()).terms, c);
            for (k, &e) in m.exps().iter().enumerate() {
                if e > 0 {
                    t = terms::mul(&t, &nums[k].pow(e).terms);
                }
            }
            out = terms::add(&out, &t);
        }
        Ok((Self::from_map(&target, out), d))
    }

    /// `self = monomial · reduced` with `reduced` free of common monomial divisors.
    pub fn factor_out_monomial(&self) -> Result<(Monomial, Self), AlgebraError> {
        let content = terms::monomial_content(&self.terms).ok_or(AlgebraError::ZeroPolynomial)?;
        let reduced = terms::div_monomial(&self.terms, &content).expect("content divides every term");
        Ok((content, Self::from_map(&self.vars, reduced)))
    }

    pub fn div_monomial(&self, m: &Monomial) -> Option<Self> {
        terms::div_monomial(&self.terms, m).map(|t| Self::from_map(&self.vars, t))
    }

    /// Exact quotient, or `None` if `divisor` does not divide `self`.
    pub fn div_exact(&self, divisor: &Self) -> Option<Self> {
        if self.vars != divisor.vars {
            return None;
        }
        terms::div_exact(&self.terms, &divisor.terms).map(|t| Self::from_map(&self.vars, t))
    }

    /// Coefficients with respect to variable `idx`: `self = Σ_k c_k · x_idx^k`.
    pub fn coefficients_in(&self, idx: usize) -> Vec<HoloPoly> {
        let deg = self.degree_in(idx).unwrap_or(0) as usize;
        let mut maps = vec![TermMap::new(); deg + 1];
        for (m, c) in &self.terms {
            let mut exps = m.exps().to_vec();
            let k = exps[idx] as usize;
            exps[idx] = 0;
            terms::accumulate(&mut maps[k], Monomial::new(exps), c);
        }
        maps.into_iter().map(|t| Self::from_map(&self.vars, t)).collect()
    }

    /// Reads the polynomial as univariate in `idx`; `None` if another variable occurs.
    pub fn to_univariate(&self, idx: usize) -> Option<UniPoly> {
        if self.support().iter().any(|&i| i != idx) {
            return None;
        }
        let deg = self.degree_in(idx).unwrap_or(0) as usize;
        let mut coeffs = vec![ExactComplex::zero(); deg + 1];
        for (m, c) in &self.terms {
            coeffs[m.exps()[idx] as usize] = c.clone();
        }
        Some(UniPoly::new(coeffs))
    }

    pub fn from_univariate(vars: &Vars, idx: usize, p: &UniPoly) -> Self {
        Self::from_terms(
            vars,
            p.coeffs().iter().enumerate().map(|(k, c)| {
                let mut e = vec![0; vars.len()];
                e[idx] = k as u32;
                (e, c.clone())
            }),
        )
    }

    /// Sets variable `idx` to the constant `value`.
    pub fn specialize(&self, idx: usize, value: &ExactComplex) -> Self {
        let mut out = TermMap::new();
        for (m, c) in &self.terms {
            let mut exps = m.exps().to_vec();
            let e = exps[idx];
            exps[idx] = 0;
            terms::accumulate(&mut out, Monomial::new(exps), &(c * &value.pow(e)));
        }
        Self::from_map(&self.vars, out)
    }
}

pub(crate) fn check_images(vars: &Vars, images: &[HoloPoly]) -> Result<Vars, AlgebraError> {
    if images.len() != vars.len() {
        return Err(AlgebraError::Arity { expected: vars.len(), got: images.len() });
    }
    let target = images
        .first()
        .map(|p| p.vars.clone())
        .ok_or(AlgebraError::Arity { expected: vars.len(), got: 0 })?;
    if let Some(bad) = images.iter().find(|p| p.vars != target) {
        return Err(AlgebraError::VarMismatch { left: target.to_string(), right: bad.vars.to_string() });
    }
    Ok(target)
}

/// Memoized powers of substitution images.
pub(crate) struct PowerCache<'a> {
    base: &'a [HoloPoly],
    cache: Vec<Vec<TermMap>>,
}

impl<'a> PowerCache<'a> {
    pub(crate) fn new(base: &'a [HoloPoly]) -> Self {
        let cache = base
            .iter()
            .map(|p| vec![terms::one(p.vars.len()), p.terms.clone()])
            .collect();
        Self { base, cache }
    }

    pub(crate) fn get(&mut self, k: usize, e: u32) -> &TermMap {
        let e = e as usize;
        while self.cache[k].len() <= e {
            let next = terms::mul(self.cache[k].last().unwrap(), &self.base[k].terms);
            self.cache[k].push(next);
        }
        &self.cache[k][e]
    }
}

pub(crate) fn fmt_terms(f: &mut fmt::Formatter<'_>, terms: &TermMap, names: &[String], conj: bool) -> fmt::Result {
    if terms.is_empty() {
        return f.write_str("0");
    }
    let n = names.len();
    for (i, (m, c)) in terms.iter().enumerate() {
        if i > 0 {
            f.write_str(" + ")?;
        }
        write!(f, "{c}")?;
        for (k, &e) in m.exps().iter().enumerate() {
            if e == 0 {
                continue;
            }
            if conj && k >= n {
                write!(f, "*~{}^{}", names[k - n], e)?;
            } else {
                write!(f, "*{}^{}", names[k], e)?;
            }
        }
    }
    Ok(())
}

impl fmt::Display for HoloPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt_terms(f, &self.terms, self.vars.names(), false)
    }
}

impl fmt::Debug for HoloPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "HoloPoly{} {}", self.vars, self)
    }
}

// Operator forms panic on a variable-list mismatch; use the `try_*` methods
// where the lists are not known to agree.
impl Add<&HoloPoly> for &HoloPoly {
    type Output = HoloPoly;
    fn add(self, rhs: &HoloPoly) -> HoloPoly {
        self.try_add(rhs).unwrap_or_else(|e| panic!("{e}"))
    }
}

impl Sub<&HoloPoly> for &HoloPoly {
    type Output = HoloPoly;
    fn sub(self, rhs: &HoloPoly) -> HoloPoly {
        self.try_sub(rhs).unwrap_or_else(|e| panic!("{e}"))
    }
}

impl Mul<&HoloPoly> for &HoloPoly {
    type Output = HoloPoly;
    fn mul(self, rhs: &HoloPoly) -> HoloPoly {
        self.try_mul(rhs).unwrap_or_else(|e| panic!("{e}"))
    }
}

impl Neg for &HoloPoly {
    type Output = HoloPoly;
    fn neg(self) -> HoloPoly {
        HoloPoly::from_map(&self.vars, terms::neg(&self.terms))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn zz() -> Vars {
        Vars::new(&["z1", "z2"])
    }

    #[test]
    fn monomial_product() {
        let v = zz();
        let z1 = HoloPoly::var(&v, 0);
        let z2 = HoloPoly::var(&v, 1);
        let p = &z1 * &(&z1 * &z2);
        assert_eq!(p, HoloPoly::from_terms(&v, [(vec![2, 1], ExactComplex::one())]));
    }

    #[test]
    fn mismatched_lists_are_rejected() {
        let a = HoloPoly::var(&zz(), 0);
        let b = HoloPoly::var(&Vars::new(&["w1", "w2"]), 0);
        let err = a.try_add(&b).unwrap_err();
        assert!(err.to_string().contains("[z1, z2]") && err.to_string().contains("[w1, w2]"));
    }

    #[test]
    fn factor_out_monomial_examples() {
        let v = zz();
        let one = ExactComplex::one();
        let p = HoloPoly::from_terms(&v, [(vec![2, 1], one.clone()), (vec![1, 2], one.clone())]);
        let (m, r) = p.factor_out_monomial().unwrap();
        assert_eq!(m, Monomial::new(vec![1, 1]));
        assert_eq!(r, &HoloPoly::var(&v, 0) + &HoloPoly::var(&v, 1));

        let w = Vars::new(&["w1", "w2"]);
        let (m, r) = HoloPoly::var(&w, 0).pow(3).factor_out_monomial().unwrap();
        assert_eq!(m, Monomial::new(vec![3, 0]));
        assert_eq!(r, HoloPoly::one(&w));

        assert_eq!(HoloPoly::zero(&v).factor_out_monomial(), Err(AlgebraError::ZeroPolynomial));
    }

    #[test]
    fn missing_binding_is_rejected() {
        let v = zz();
        let mut b = Bindings::new();
        b.insert("z1".into(), HoloPoly::var(&v, 0));
        assert_eq!(
            HoloPoly::var(&v, 1).substitute(&b),
            Err(AlgebraError::MissingBinding("z2".into()))
        );
    }

    #[test]
    fn exact_division() {
        let v = zz();
        let z2 = HoloPoly::var(&v, 1);
        let one = HoloPoly::one(&v);
        let a = &one - &z2;
        let b = &one + &z2;
        let prod = &(&a * &a) * &b;
        assert_eq!(prod.div_exact(&a), Some(&a * &b));
        assert_eq!(b.div_exact(&a), None);
    }

    #[test]
    fn text_form() {
        let v = zz();
        let p = &HoloPoly::var(&v, 0).pow(3) + &HoloPoly::constant(&v, ExactComplex::ratio(-1, 2));
        assert_eq!(p.to_string(), "(-1/2+0/1i) + (1/1+0/1i)*z1^3");
    }
}
