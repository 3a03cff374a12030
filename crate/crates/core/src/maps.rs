//! Rational maps to the projective plane as triples of polynomials.

use std::fmt;

use num_complex::Complex64;
use thiserror::Error;

use crate::algebra::{determinant, resultant, AlgebraError, ExactComplex, HoloPoly, Monomial, RationalExpr, UniPoly, Vars};
use crate::blowup::{BlowupError, BlowupTower};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum MapError {
    #[error("all three components vanish identically")]
    AllZero,
    #[error("denominator is identically zero")]
    ZeroDenominator,
    #[error("target matrix is singular")]
    SingularMatrix,
    #[error("common curve remains: base locus is not finite in {0}")]
    CommonCurve(String),
    #[error("every component vanishes identically on {{{0} = 0}}")]
    VanishesOnCurve(String),
    #[error(transparent)]
    Algebra(#[from] AlgebraError),
    #[error(transparent)]
    Blowup(#[from] BlowupError),
}

/// A point of the projective plane, scaled so its first nonzero coordinate is 1.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct ProjectivePoint([ExactComplex; 3]);

impl ProjectivePoint {
    pub fn new(coords: [ExactComplex; 3]) -> Option<Self> {
        let lead = coords.iter().find(|c| !c.is_zero())?.recip()?;
        Some(Self(coords.map(|c| &c * &lead)))
    }

    pub fn coords(&self) -> &[ExactComplex; 3] {
        &self.0
    }

    pub fn to_c64(&self) -> [Complex64; 3] {
        [self.0[0].to_c64(), self.0[1].to_c64(), self.0[2].to_c64()]
    }
}

impl fmt::Display for ProjectivePoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{} : {} : {}]", self.0[0], self.0[1], self.0[2])
    }
}

/// Affine target pair `(f₁, f₂)` of rational functions.
pub type RationalPair = (RationalExpr<HoloPoly>, RationalExpr<HoloPoly>);

/// Rational map to the projective plane, `[P0 : P1 : P2]`.
#[derive(Clone, PartialEq, Debug)]
pub struct ProjectiveTriple {
    components: [HoloPoly; 3],
    cleared: Vec<HoloPoly>,
}

/// Common zeros of a triple's components.
#[derive(Clone, Debug, PartialEq)]
pub struct BaseLocus {
    pub points: Vec<[ExactComplex; 2]>,
    /// Component values at each point (all zero).
    pub certificates: Vec<[ExactComplex; 3]>,
    /// Candidate coordinates that did not split over the Gaussian rationals,
    /// as `(variable, approximate value, isolating radius)`.
    pub unresolved: Vec<(String, Complex64, f64)>,
    /// The eliminating polynomial found for each variable.
    pub eliminants: Vec<(String, HoloPoly)>,
}

impl BaseLocus {
    pub fn is_empty(&self) -> bool {
        self.points.is_empty() && self.unresolved.is_empty()
    }
}

/// Pole divisor in the affine chart where component `index` is the denominator.
#[derive(Clone, Debug, PartialEq)]
pub struct PoleDivisor {
    pub index: usize,
    pub divisor: HoloPoly,
    pub cleared: Vec<HoloPoly>,
    /// `(variable, value)` hyperplanes making up the zero set, when the divisor
    /// depends on one variable and splits into linear factors.
    pub hyperplanes: Vec<(String, ExactComplex)>,
}

impl PoleDivisor {
    pub fn is_empty(&self) -> bool {
        self.divisor.is_constant()
    }

    pub fn describe(&self) -> String {
        if self.is_empty() {
            return "∅".to_owned();
        }
        if self.hyperplanes.is_empty() {
            return format!("{{{} = 0}}", self.divisor);
        }
        self.hyperplanes
            .iter()
            .map(|(v, c)| format!("{{{v} = {c}}}"))
            .collect::<Vec<_>>()
            .join(" ∪ ")
    }
}

/// Outcome of [`ProjectiveTriple::is_constant`].
#[derive(Clone, Debug, PartialEq)]
pub struct Constancy {
    pub constant: bool,
    pub value: Option<ProjectivePoint>,
    /// Largest number of terms among the 2×2 minors with the derivatives;
    /// zero exactly when the map is constant.
    pub residual_terms: usize,
}

impl ProjectiveTriple {
    pub fn new(components: [HoloPoly; 3]) -> Result<Self, MapError> {
        components[0].try_add(&components[1])?;
        components[0].try_add(&components[2])?;
        if components.iter().all(HoloPoly::is_zero) {
            return Err(MapError::AllZero);
        }
        Ok(Self { components, cleared: Vec::new() })
    }

    pub fn components(&self) -> &[HoloPoly; 3] {
        &self.components
    }

    pub fn vars(&self) -> &Vars {
        self.components[0].vars()
    }

    pub fn cleared_factors(&self) -> &[HoloPoly] {
        &self.cleared
    }

    fn common_monomial(&self) -> Option<Monomial> {
        self.components
            .iter()
            .filter(|p| !p.is_zero())
            .map(|p| p.factor_out_monomial().expect("nonzero").0)
            .reduce(|a, b| a.gcd(&b))
    }

    fn divide_all_monomial(&mut self, m: &Monomial) {
        if m.is_one() {
            return;
        }
        for c in &mut self.components {
            *c = c.div_monomial(m).expect("common monomial divides");
        }
        self.cleared.push(HoloPoly::monomial(self.vars(), m.clone(), ExactComplex::one()));
    }

    /// Clears the common monomial factor, then each candidate factor for as
    /// long as it divides every component.
    pub fn normalize(mut self, candidates: &[HoloPoly]) -> Self {
        if let Some(m) = self.common_monomial() {
            self.divide_all_monomial(&m);
        }
        for cand in candidates {
            if cand.is_constant() || cand.vars() != self.vars() {
                continue;
            }
            loop {
                let divided: Option<Vec<HoloPoly>> = self
                    .components
                    .iter()
                    .map(|c| if c.is_zero() { Some(c.clone()) } else { c.div_exact(cand) })
                    .collect();
                match divided {
                    Some(d) => {
                        self.components = [d[0].clone(), d[1].clone(), d[2].clone()];
                        self.cleared.push(cand.clone());
                    }
                    None => break,
                }
            }
        }
        self
    }

    /// `(f₁, f₂) ↦ [n₁d₂ : n₂d₁ : d₁d₂]`, normalized.
    pub fn homogenize(f: &RationalPair) -> Result<Self, MapError> {
        let (a, b) = f;
        if a.den().is_zero() || b.den().is_zero() {
            return Err(MapError::ZeroDenominator);
        }
        let t = Self::new([a.num().try_mul(b.den())?, b.num().try_mul(a.den())?, a.den().try_mul(b.den())?])?;
        Ok(t.normalize(&[a.den().clone(), b.den().clone()]))
    }

    /// Affine pair `(P_i/P_k, P_j/P_k)` in the chart where component `k` is nonzero.
    pub fn dehomogenize(&self, k: usize) -> Result<RationalPair, MapError> {
        let idx: Vec<usize> = (0..3).filter(|&i| i != k).collect();
        Ok((
            RationalExpr::new(self.components[idx[0]].clone(), self.components[k].clone())?,
            RationalExpr::new(self.components[idx[1]].clone(), self.components[k].clone())?,
        ))
    }

    /// Precomposition with a rational map of the source, denominators cleared
    /// with the minimal common power.
    pub fn compose_source(&self, r: &RationalPair) -> Result<Self, MapError> {
        let (a, b) = r;
        if a.den().is_zero() || b.den().is_zero() {
            return Err(MapError::ZeroDenominator);
        }
        let (nums, den) = if a.den() == b.den() {
            (vec![a.num().clone(), b.num().clone()], a.den().clone())
        } else {
            (
                vec![a.num().try_mul(b.den())?, b.num().try_mul(a.den())?],
                a.den().try_mul(b.den())?,
            )
        };
        let parts = self
            .components
            .iter()
            .map(|p| p.compose_rational(&nums, &den))
            .collect::<Result<Vec<_>, _>>()?;
        let top = parts.iter().map(|(_, d)| *d).max().unwrap_or(0);
        let comps: Vec<HoloPoly> = parts
            .into_iter()
            .map(|(p, d)| if p.is_zero() { p } else { &p * &den.pow(top - d) })
            .collect();
        let t = Self::new([comps[0].clone(), comps[1].clone(), comps[2].clone()])?;
        Ok(t.normalize(&[a.den().clone(), b.den().clone()]))
    }

    /// Postcomposition with an invertible linear change of the target.
    pub fn compose_target(&self, a: &[[ExactComplex; 3]; 3]) -> Result<Self, MapError> {
        if determinant(a.iter().map(|r| r.to_vec()).collect()).is_zero() {
            return Err(MapError::SingularMatrix);
        }
        let comps: Vec<HoloPoly> = a
            .iter()
            .map(|row| {
                row.iter()
                    .zip(&self.components)
                    .fold(HoloPoly::zero(self.vars()), |acc, (c, p)| &acc + &p.scale(c))
            })
            .collect();
        Ok(Self { components: [comps[0].clone(), comps[1].clone(), comps[2].clone()], cleared: self.cleared.clone() })
    }

    /// Equality as maps to the projective plane: all 2×2 minors vanish.
    pub fn projectively_equal(&self, other: &Self) -> bool {
        if self.vars() != other.vars() {
            return false;
        }
        (0..3).all(|i| {
            (0..3).all(|j| (&(&self.components[i] * &other.components[j]) - &(&self.components[j] * &other.components[i])).is_zero())
        })
    }

    /// Common zeros of the components, by resultant elimination in each
    /// variable followed by exact checking of the candidate points.
    pub fn base_locus(&self) -> Result<BaseLocus, MapError> {
        let vars = self.vars().clone();
        if vars.len() != 2 {
            return Err(AlgebraError::NotBivariate(vars.len()).into());
        }
        let live: Vec<&HoloPoly> = self.components.iter().filter(|p| !p.is_zero()).collect();
        let empty = BaseLocus { points: vec![], certificates: vec![], unresolved: vec![], eliminants: vec![] };
        if live.iter().any(|p| p.is_constant()) {
            return Ok(empty);
        }
        if live.len() < 2 {
            return Err(MapError::CommonCurve(vars.to_string()));
        }
        let mut coords: Vec<Vec<ExactComplex>> = vec![Vec::new(), Vec::new()];
        let mut locus = empty;
        for var in 0..2 {
            let other = 1 - var;
            let mut g: Option<UniPoly> = None;
            for i in 0..live.len() {
                for j in i + 1..live.len() {
                    let cand = match resultant(live[i], live[j], var) {
                        Ok(r) => r.to_univariate(other).expect("resultant lives in the other variable"),
                        Err(AlgebraError::ConstantResultant) => {
                            let a = live[i].to_univariate(other).expect("constant in eliminated variable");
                            let b = live[j].to_univariate(other).expect("constant in eliminated variable");
                            a.gcd(&b)
                        }
                        Err(e) => return Err(e.into()),
                    };
                    if cand.is_zero() {
                        continue;
                    }
                    g = Some(match g {
                        None => cand.monic(),
                        Some(prev) => prev.gcd(&cand),
                    });
                }
            }
            let g = g.ok_or_else(|| MapError::CommonCurve(vars.names()[other].clone()))?;
            locus
                .eliminants
                .push((vars.names()[other].clone(), HoloPoly::from_univariate(&vars, other, &g)));
            let roots = g.roots();
            coords[other] = roots.exact.into_iter().map(|(r, _)| r).collect();
            locus.unresolved.extend(
                roots
                    .unresolved
                    .into_iter()
                    .map(|a| (vars.names()[other].clone(), a.center, a.radius)),
            );
        }
        for x in &coords[0] {
            for y in &coords[1] {
                let pt = [x.clone(), y.clone()];
                let vals = self.components.clone().map(|p| p.eval(&pt));
                if vals.iter().all(ExactComplex::is_zero) {
                    locus.points.push(pt);
                    locus.certificates.push(vals);
                }
            }
        }
        Ok(locus)
    }

    pub fn pole_divisor(&self, index: usize) -> PoleDivisor {
        let divisor = self.components[index].clone();
        let vars = self.vars();
        let support = divisor.support();
        let hyperplanes = match support.as_slice() {
            [v] => {
                let roots = divisor.to_univariate(*v).expect("single variable").roots();
                if roots.unresolved.is_empty() {
                    roots.exact.into_iter().map(|(r, _)| (vars.names()[*v].clone(), r)).collect()
                } else {
                    Vec::new()
                }
            }
            _ => Vec::new(),
        };
        PoleDivisor { index, divisor, cleared: self.cleared.clone(), hyperplanes }
    }

    /// Pulls the map back to `leaf` and divides out the largest power of each
    /// exceptional coordinate common to all components.
    pub fn lift(&self, tower: &BlowupTower, leaf: &str) -> Result<Self, MapError> {
        let comps = self
            .components
            .iter()
            .map(|p| tower.pullback_holo(leaf, p))
            .collect::<Result<Vec<_>, _>>()?;
        let mut lifted = Self::new([comps[0].clone(), comps[1].clone(), comps[2].clone()])?;
        lifted.cleared = self.cleared.clone();
        if let Some(m) = lifted.common_monomial() {
            let mut keep = vec![0; m.len()];
            for (k, _) in tower.exceptional_coords(leaf) {
                keep[k] = m.exps()[k];
            }
            lifted.divide_all_monomial(&Monomial::new(keep));
        }
        Ok(lifted)
    }

    /// Restriction to the coordinate axis `{x_idx = 0}`.
    pub fn restrict_to_curve(&self, idx: usize) -> Result<Self, MapError> {
        let zero = ExactComplex::zero();
        let comps = self.components.clone().map(|p| p.specialize(idx, &zero));
        if comps.iter().all(HoloPoly::is_zero) {
            return Err(MapError::VanishesOnCurve(self.vars().names()[idx].clone()));
        }
        Ok(Self { components: comps, cleared: self.cleared.clone() })
    }

    /// Constancy as an identity: every minor `P_i ∂P_j − P_j ∂P_i` vanishes.
    pub fn is_constant(&self) -> Constancy {
        let n = self.vars().len();
        let mut residual_terms = 0;
        for k in 0..n {
            let d: Vec<HoloPoly> = self.components.iter().map(|p| p.derivative(k)).collect();
            for i in 0..3 {
                for j in i + 1..3 {
                    let minor = &(&self.components[i] * &d[j]) - &(&self.components[j] * &d[i]);
                    residual_terms = residual_terms.max(minor.n_terms());
                }
            }
        }
        let constant = residual_terms == 0;
        let value = constant.then(|| self.generic_value()).flatten();
        Constancy { constant, value, residual_terms }
    }

    /// Value at the first small integer point where some component is nonzero.
    fn generic_value(&self) -> Option<ProjectivePoint> {
        let n = self.vars().len();
        for k in 0..64i64 {
            let pt: Vec<ExactComplex> = (0..n).map(|j| ExactComplex::int(k + 2 * j as i64 + 1, k % 3)).collect();
            let vals = self.components.clone().map(|p| p.eval(&pt));
            if let Some(p) = ProjectivePoint::new(vals) {
                return Some(p);
            }
        }
        None
    }

    pub fn eval(&self, point: &[ExactComplex]) -> [ExactComplex; 3] {
        self.components.clone().map(|p| p.eval(point))
    }

    pub fn eval_f64(&self, point: &[Complex64]) -> [Complex64; 3] {
        [
            self.components[0].eval_f64(point),
            self.components[1].eval_f64(point),
            self.components[2].eval_f64(point),
        ]
    }

    /// `det[P; ∂₁P; ∂₂P]`, which equals `P₂³` times the Jacobian determinant of
    /// the affine pair; nonzero iff the map has generic rank two.
    pub fn rank_determinant(&self) -> HoloPoly {
        let p = &self.components;
        let d1: Vec<HoloPoly> = p.iter().map(|c| c.derivative(0)).collect();
        let d2: Vec<HoloPoly> = p.iter().map(|c| c.derivative(1)).collect();
        let minor = |a: usize, b: usize| &(&d1[a] * &d2[b]) - &(&d1[b] * &d2[a]);
        let t0 = &p[0] * &minor(1, 2);
        let t1 = &p[1] * &minor(0, 2);
        let t2 = &p[2] * &minor(0, 1);
        &(&t0 - &t1) + &t2
    }
}

impl fmt::Display for ProjectiveTriple {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{} : {} : {}]", self.components[0], self.components[1], self.components[2])
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::blowup::chart_vars;

    fn z() -> (Vars, HoloPoly, HoloPoly) {
        let v = chart_vars();
        (v.clone(), HoloPoly::var(&v, 0), HoloPoly::var(&v, 1))
    }

    fn local_triple() -> ProjectiveTriple {
        let (_, z1, z2) = z();
        ProjectiveTriple::new([z1.pow(3), z2.pow(2), z2]).unwrap()
    }

    #[test]
    fn homogenize_examples() {
        let (v, z1, z2) = z();
        let one = HoloPoly::one(&v);
        let f = (RationalExpr::new(z1.pow(3), z2.clone()).unwrap(), RationalExpr::new(z2.clone(), one.clone()).unwrap());
        assert_eq!(ProjectiveTriple::homogenize(&f).unwrap().components(), local_triple().components());

        let zero = HoloPoly::zero(&v);
        let f = (RationalExpr::new(zero.clone(), one.clone()).unwrap(), RationalExpr::new(zero.clone(), one.clone()).unwrap());
        assert_eq!(ProjectiveTriple::homogenize(&f).unwrap().components(), &[zero.clone(), zero, one.clone()]);

        let f = (RationalExpr::new(z1.clone(), one.clone()).unwrap(), RationalExpr::new(z2.clone(), one.clone()).unwrap());
        assert_eq!(ProjectiveTriple::homogenize(&f).unwrap().components(), &[z1, z2, one]);
    }

    #[test]
    fn all_zero_rejected() {
        let (v, _, _) = z();
        let zero = HoloPoly::zero(&v);
        assert_eq!(ProjectiveTriple::new([zero.clone(), zero.clone(), zero]), Err(MapError::AllZero));
    }

    #[test]
    fn singular_target_change_rejected() {
        let zero = ExactComplex::zero();
        let one = ExactComplex::one();
        let a = [[one.clone(), zero.clone(), zero.clone()], [one.clone(), zero.clone(), zero.clone()], [zero.clone(), zero.clone(), one]];
        assert_eq!(local_triple().compose_target(&a), Err(MapError::SingularMatrix));
    }

    #[test]
    fn swap_of_target_coordinates() {
        let (_, z1, z2) = z();
        let zero = ExactComplex::zero();
        let one = ExactComplex::one();
        let a = [[one.clone(), zero.clone(), zero.clone()], [zero.clone(), zero.clone(), one.clone()], [zero.clone(), one, zero]];
        let t = local_triple().compose_target(&a).unwrap();
        assert_eq!(t.components(), &[z1.pow(3), z2.clone(), z2.pow(2)]);
    }

    #[test]
    fn local_base_locus_and_poles() {
        let bl = local_triple().base_locus().unwrap();
        assert_eq!(bl.points, vec![[ExactComplex::zero(), ExactComplex::zero()]]);
        let pd = local_triple().pole_divisor(2);
        assert_eq!(pd.describe(), "{z2 = (0/1+0/1i)}");
    }

    #[test]
    fn identity_embedding_has_empty_base_locus() {
        let (v, z1, z2) = z();
        let t = ProjectiveTriple::new([z1, z2, HoloPoly::one(&v)]).unwrap();
        assert!(t.base_locus().unwrap().is_empty());
        assert!(t.pole_divisor(2).is_empty());
    }

    #[test]
    fn common_curve_is_reported() {
        let (_, z1, z2) = z();
        let t = ProjectiveTriple::new([&z1 * &z2, &z1 * &z1, z1.clone()]).unwrap();
        assert!(matches!(t.base_locus(), Err(MapError::CommonCurve(_))));
    }

    #[test]
    fn constancy() {
        let (v, _, _) = z();
        let c = |k| HoloPoly::constant(&v, ExactComplex::int(k, 0));
        let t = ProjectiveTriple::new([c(1), c(2), c(3)]).unwrap();
        let k = t.is_constant();
        assert!(k.constant);
        assert_eq!(k.value.unwrap().coords(), &[ExactComplex::int(1, 0), ExactComplex::int(2, 0), ExactComplex::int(3, 0)]);
        assert!(!local_triple().is_constant().constant);
    }

    #[test]
    fn generic_rank_two() {
        assert!(!local_triple().rank_determinant().is_zero());
    }
}
