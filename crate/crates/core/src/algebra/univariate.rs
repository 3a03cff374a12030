//! Univariate polynomials over the Gaussian rationals, with exact linear-factor
//! root extraction.

use num_complex::Complex64;

use super::complex::rationalize;
use super::ExactComplex;

/// Dense univariate polynomial, coefficients in ascending degree, trailing
/// zeros trimmed.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct UniPoly(Vec<ExactComplex>);

/// A root that could not be certified as a Gaussian rational, with an
/// isolating disk from the numerical solver.
#[derive(Clone, Debug, PartialEq)]
pub struct ApproxRoot {
    pub center: Complex64,
    pub radius: f64,
}

/// Roots of a univariate polynomial: exact Gaussian-rational roots with
/// multiplicity, plus approximations for whatever did not split.
#[derive(Clone, Debug, Default)]
pub struct RootSet {
    pub exact: Vec<(ExactComplex, u32)>,
    pub unresolved: Vec<ApproxRoot>,
}

impl UniPoly {
    pub fn new(mut coeffs: Vec<ExactComplex>) -> Self {
        while coeffs.last().is_some_and(ExactComplex::is_zero) {
            coeffs.pop();
        }
        Self(coeffs)
    }

    pub fn coeffs(&self) -> &[ExactComplex] {
        &self.0
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_empty()
    }

    /// Degree; `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.0.len().checked_sub(1)
    }

    pub fn eval(&self, x: &ExactComplex) -> ExactComplex {
        self.0.iter().rev().fold(ExactComplex::zero(), |acc, c| &(&acc * x) + c)
    }

    pub fn eval_f64(&self, x: Complex64) -> Complex64 {
        self.0.iter().rev().fold(Complex64::new(0.0, 0.0), |acc, c| acc * x + c.to_c64())
    }

    pub fn derivative(&self) -> Self {
        Self::new(
            self.0
                .iter()
                .enumerate()
                .skip(1)
                .map(|(k, c)| c * &ExactComplex::int(k as i64, 0))
                .collect(),
        )
    }

    pub fn monic(&self) -> Self {
        match self.0.last() {
            None => self.clone(),
            Some(lc) => {
                let inv = lc.recip().expect("trimmed leading coefficient");
                Self::new(self.0.iter().map(|c| c * &inv).collect())
            }
        }
    }

    /// Quotient and remainder; panics on division by zero.
    pub fn div_rem(&self, d: &Self) -> (Self, Self) {
        let dd = d.degree().expect("division by zero polynomial");
        let inv = d.0[dd].recip().expect("nonzero leading coefficient");
        let mut rem = self.0.clone();
        let mut quot = vec![ExactComplex::zero(); self.0.len().saturating_sub(dd).max(1)];
        while rem.len() > dd && !rem.is_empty() {
            let k = rem.len() - 1 - dd;
            let q = &rem[rem.len() - 1] * &inv;
            for (j, c) in d.0.iter().enumerate() {
                rem[k + j] -= &(c * &q);
            }
            quot[k] = q;
            rem.pop();
            while rem.last().is_some_and(ExactComplex::is_zero) {
                rem.pop();
            }
        }
        (Self::new(quot), Self::new(rem))
    }

    /// Monic greatest common divisor.
    pub fn gcd(&self, other: &Self) -> Self {
        let (mut a, mut b) = (self.clone(), other.clone());
        while !b.is_zero() {
            let (_, r) = a.div_rem(&b);
            a = b;
            b = r;
        }
        a.monic()
    }

    /// Product of the distinct irreducible factors.
    pub fn squarefree(&self) -> Self {
        if self.degree().unwrap_or(0) == 0 {
            return self.monic();
        }
        let g = self.gcd(&self.derivative());
        self.div_rem(&g).0.monic()
    }

    /// All roots via simultaneous iteration, for the squarefree part.
    pub fn approx_roots(&self) -> Vec<Complex64> {
        let sf = self.squarefree();
        let Some(n) = sf.degree() else { return Vec::new() };
        if n == 0 {
            return Vec::new();
        }
        let c: Vec<Complex64> = sf.0.iter().map(ExactComplex::to_c64).collect();
        aberth(&c, n)
    }

    /// Exact roots that are Gaussian rationals (with multiplicity) and an
    /// isolating approximation of every other root.
    pub fn roots(&self) -> RootSet {
        let mut out = RootSet::default();
        if self.degree().unwrap_or(0) == 0 {
            return out;
        }
        let mut rest = self.clone();
        for z in self.approx_roots() {
            let candidate = rationalize(z.re, 1 << 20)
                .zip(rationalize(z.im, 1 << 20))
                .map(|(re, im)| ExactComplex::new(re, im));
            match candidate.filter(|r| rest.eval(r).is_zero()) {
                Some(r) => {
                    let lin = UniPoly::new(vec![-&r, ExactComplex::one()]);
                    let mut mult = 0;
                    loop {
                        let (q, rem) = rest.div_rem(&lin);
                        if !rem.is_zero() {
                            break;
                        }
                        rest = q;
                        mult += 1;
                    }
                    out.exact.push((r, mult));
                }
                None => out.unresolved.push(ApproxRoot {
                    center: z,
                    radius: isolation_radius(self, z),
                }),
            }
        }
        out.exact.sort_by(|a, b| {
            let (x, y) = (a.0.to_c64(), b.0.to_c64());
            x.re.total_cmp(&y.re).then(x.im.total_cmp(&y.im))
        });
        out
    }
}

/// Newton-type inclusion radius `n·|p(z)/p'(z)|`.
fn isolation_radius(p: &UniPoly, z: Complex64) -> f64 {
    let n = p.degree().unwrap_or(1) as f64;
    let d = p.derivative().eval_f64(z);
    if d.norm() == 0.0 {
        return f64::INFINITY;
    }
    n * (p.eval_f64(z) / d).norm()
}

/// Aberth–Ehrlich iteration; `c` ascending coefficients of degree `n`.
fn aberth(c: &[Complex64], n: usize) -> Vec<Complex64> {
    let lc = c[n];
    let c: Vec<Complex64> = c.iter().map(|x| x / lc).collect();
    let bound = 1.0 + c[..n].iter().map(|x| x.norm()).fold(0.0, f64::max);
    let mut z: Vec<Complex64> = (0..n)
        .map(|k| Complex64::from_polar(0.5 * bound, 0.4 + 2.0 * std::f64::consts::PI * k as f64 / n as f64))
        .collect();
    let eval = |x: Complex64| -> (Complex64, Complex64) {
        let mut p = Complex64::new(0.0, 0.0);
        let mut dp = Complex64::new(0.0, 0.0);
        for a in c.iter().rev() {
            dp = dp * x + p;
            p = p * x + a;
        }
        (p, dp)
    };
    for _ in 0..500 {
        let mut max_step: f64 = 0.0;
        for i in 0..n {
            let (p, dp) = eval(z[i]);
            if p.norm() == 0.0 {
                continue;
            }
            let ratio = p / dp;
            let s: Complex64 = (0..n).filter(|&j| j != i).map(|j| 1.0 / (z[i] - z[j])).sum();
            let step = ratio / (1.0 - ratio * s);
            if step.is_finite() {
                z[i] -= step;
                max_step = max_step.max(step.norm());
            }
        }
        if max_step < 1e-15 {
            break;
        }
    }
    z
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(c: &[(i64, i64)]) -> UniPoly {
        UniPoly::new(c.iter().map(|&(a, b)| ExactComplex::int(a, b)).collect())
    }

    #[test]
    fn roots_of_product_of_linear_forms() {
        // (1 + x)^2 (1 - x) = 1 + x - x^2 - x^3
        let f = p(&[(1, 0), (1, 0), (-1, 0), (-1, 0)]);
        let r = f.roots();
        assert!(r.unresolved.is_empty());
        assert_eq!(r.exact, vec![(ExactComplex::int(-1, 0), 2), (ExactComplex::int(1, 0), 1)]);
    }

    #[test]
    fn gaussian_roots() {
        // x^2 + 1
        let r = p(&[(1, 0), (0, 0), (1, 0)]).roots();
        assert_eq!(r.exact.len(), 2);
        assert!(r.exact.iter().any(|(z, m)| *z == ExactComplex::i() && *m == 1));
    }

    #[test]
    fn irrational_roots_are_isolated() {
        // x^2 - 2
        let r = p(&[(-2, 0), (0, 0), (1, 0)]).roots();
        assert!(r.exact.is_empty());
        assert_eq!(r.unresolved.len(), 2);
        for a in &r.unresolved {
            assert!((a.center.norm() - 2f64.sqrt()).abs() < 1e-12);
            assert!(a.radius < 1e-10);
        }
    }

    #[test]
    fn gcd_and_division() {
        let a = p(&[(-1, 0), (0, 0), (1, 0)]); // x^2 - 1
        let b = p(&[(1, 0), (1, 0)]); // x + 1
        assert_eq!(a.gcd(&b), b);
        let (q, r) = a.div_rem(&b);
        assert_eq!(q, p(&[(-1, 0), (1, 0)]));
        assert!(r.is_zero());
    }
}
