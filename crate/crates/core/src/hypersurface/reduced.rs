use std::f64::consts::TAU;

use num_complex::Complex64;
use serde::Serialize;

use super::{HypersurfaceError, RealHypersurface};
use crate::algebra::{ExactComplex, HermEval, HermPoly, HoloPoly, RationalExpr};
use crate::blowup::BlowupTower;

/// Equation of a proper transform off the exceptional curves of a chart:
/// the pullback divided by `|e|^{2k}` for each exceptional coordinate `e`.
#[derive(Clone, Debug)]
pub struct ReducedEquation {
    chart: String,
    pullback: HermPoly,
    expr: RationalExpr<HermPoly>,
    /// `(coordinate index, curve id, power k)` of each excluded exceptional curve.
    locus: Vec<(usize, String, u32)>,
    num_eval: HermEval,
    den_eval: HermEval,
}

impl ReducedEquation {
    pub fn chart(&self) -> &str {
        &self.chart
    }

    pub fn pullback(&self) -> &HermPoly {
        &self.pullback
    }

    pub fn expr(&self) -> &RationalExpr<HermPoly> {
        &self.expr
    }

    pub fn locus(&self) -> &[(usize, String, u32)] {
        &self.locus
    }

    /// `expr·∏|e|^{2k} − pullback`, which must be the zero polynomial.
    pub fn identity_residual(&self) -> HermPoly {
        let vars = self.pullback.vars();
        let mut den = HermPoly::one(vars);
        for (k, _, pow) in &self.locus {
            den = &den * &HermPoly::abs_sq(&HoloPoly::var(vars, *k)).pow(*pow);
        }
        &(&self.expr.num().clone() * &den) - &(&self.pullback * self.expr.den())
    }

    /// Value off the excluded locus; `None` where the denominator vanishes.
    pub fn eval(&self, p: [Complex64; 2]) -> Option<f64> {
        let d = self.den_eval.eval_re(&p);
        (d != 0.0).then(|| self.num_eval.eval_re(&p) / d)
    }
}

/// The pullback of `h` to `leaf` and its reduced equation.
pub fn proper_transform(
    h: &RealHypersurface,
    tower: &BlowupTower,
    leaf: &str,
) -> Result<(RealHypersurface, ReducedEquation), HypersurfaceError> {
    let pullback = tower.pullback_herm(leaf, h.rho())?;
    let vars = pullback.vars().clone();
    let mut den = HermPoly::one(&vars);
    let mut locus = Vec::new();
    for (k, curve) in tower.exceptional_coords(leaf) {
        let nu = pullback.vanishing_order(k).unwrap_or(0);
        let pow = nu.div_ceil(2);
        if pow > 0 {
            den = &den * &HermPoly::abs_sq(&HoloPoly::var(&vars, k)).pow(pow);
        }
        locus.push((k, curve, pow));
    }
    let expr = RationalExpr::new(pullback.clone(), den)?;
    let total = RealHypersurface::new(pullback.clone(), leaf)?;
    let red = ReducedEquation {
        chart: leaf.to_owned(),
        num_eval: expr.num().compile(),
        den_eval: expr.den().compile(),
        pullback,
        expr,
        locus,
    };
    Ok((total, red))
}

/// Parameters of the directional-limit estimate of a trace on an exceptional curve.
#[derive(Clone, Copy, Debug, Serialize)]
pub struct TraceOptions {
    /// Distance `r` of the approach points from the curve.
    pub radius: f64,
    /// Equispaced approach phases `θ`.
    pub phases: usize,
    /// Curve points are taken with `|c| ≤ window`.
    pub window: f64,
    /// Lattice spacing of the curve grid.
    pub spacing: f64,
}

impl Default for TraceOptions {
    fn default() -> Self {
        Self { radius: 1e-6, phases: 72, window: 3.0, spacing: 0.0075 }
    }
}

/// Points of an exceptional curve that are limits of the zero set.
#[derive(Clone, Debug, Serialize)]
pub struct ClusterSet {
    pub chart: String,
    pub curve: String,
    pub description: String,
    /// Curve coordinate of each accepted grid point.
    #[serde(skip)]
    pub samples: Vec<Complex64>,
    pub grid_points: usize,
    pub method: TraceOptions,
    #[serde(skip)]
    accepted: Vec<bool>,
    #[serde(skip)]
    side: usize,
}

impl ClusterSet {
    fn index_to_point(&self, i: usize, j: usize) -> Complex64 {
        let h = self.method.spacing;
        let half = (self.side / 2) as f64;
        Complex64::new((i as f64 - half) * h, (j as f64 - half) * h)
    }

    fn nearest_accepted(&self, p: Complex64) -> f64 {
        let h = self.method.spacing;
        let half = (self.side / 2) as f64;
        let ci = ((p.re / h) + half).round() as i64;
        let cj = ((p.im / h) + half).round() as i64;
        let n = self.side as i64;
        let mut best = f64::INFINITY;
        for ring in 0..n {
            // everything beyond this ring is at least (ring − 1)·h away
            if (ring as f64 - 1.0) * h > best {
                break;
            }
            for di in -ring..=ring {
                for dj in -ring..=ring {
                    if di.abs() != ring && dj.abs() != ring {
                        continue;
                    }
                    let (i, j) = (ci + di, cj + dj);
                    if i < 0 || j < 0 || i >= n || j >= n || !self.accepted[(i * n + j) as usize] {
                        continue;
                    }
                    best = best.min((self.index_to_point(i as usize, j as usize) - p).norm());
                }
            }
        }
        best
    }

    /// Hausdorff distance between the accepted points and the annulus
    /// `{inner ≤ |c| ≤ outer}`.
    pub fn hausdorff_to_annulus(&self, inner: f64, outer: f64) -> f64 {
        if self.samples.is_empty() {
            return f64::INFINITY;
        }
        let to_annulus = self
            .samples
            .iter()
            .map(|c| (inner - c.norm()).max(c.norm() - outer).max(0.0))
            .fold(0.0, f64::max);
        let h = self.method.spacing;
        let mut probes: Vec<Complex64> = (0..self.side)
            .flat_map(|i| (0..self.side).map(move |j| (i, j)))
            .map(|(i, j)| self.index_to_point(i, j))
            .filter(|c| (inner..=outer).contains(&c.norm()))
            .collect();
        let circle = (TAU * outer / h).ceil() as usize;
        for k in 0..circle {
            let e = Complex64::from_polar(1.0, TAU * k as f64 / circle as f64);
            probes.push(e * inner);
            probes.push(e * outer);
        }
        let from_annulus = probes.iter().map(|&p| self.nearest_accepted(p)).fold(0.0, f64::max);
        to_annulus.max(from_annulus)
    }

    pub fn is_empty(&self) -> bool {
        self.samples.is_empty()
    }

    /// Every grid point of the window was accepted.
    pub fn covers_window(&self) -> bool {
        self.samples.len() == self.grid_points
    }
}

/// Minimum of `f` on `[a, b]` by golden-section search.
fn golden_min(f: &dyn Fn(f64) -> f64, mut a: f64, mut b: f64, iters: usize) -> f64 {
    let g = (5f64.sqrt() - 1.0) / 2.0;
    let mut c = b - g * (b - a);
    let mut d = a + g * (b - a);
    let (mut fc, mut fd) = (f(c), f(d));
    for _ in 0..iters {
        if fc < fd {
            b = d;
            d = c;
            fd = fc;
            c = b - g * (b - a);
            fc = f(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + g * (b - a);
            fd = f(d);
        }
    }
    fc.min(fd)
}

impl ReducedEquation {
    /// Directional-limit estimate of the zero set's trace on the exceptional
    /// curve `{z_coord = 0}`. A curve point `c` is accepted when the reduced
    /// equation at `e = r·e^{iθ}` takes both signs (or zero) as `θ` varies.
    pub fn exceptional_trace(&self, coord: usize, opts: &TraceOptions) -> Result<ClusterSet, HypersurfaceError> {
        let (_, curve, _) = self
            .locus
            .iter()
            .find(|(k, _, _)| *k == coord)
            .ok_or_else(|| HypersurfaceError::NotExceptional { chart: self.chart.clone(), coord })?
            .clone();
        let other = 1 - coord;
        let half = (opts.window / opts.spacing).ceil() as usize;
        let side = 2 * half + 1;
        let dirs: Vec<Complex64> = (0..opts.phases)
            .map(|k| Complex64::from_polar(opts.radius, TAU * k as f64 / opts.phases as f64))
            .collect();
        let at = |c: Complex64, e: Complex64| {
            let mut p = [Complex64::new(0.0, 0.0); 2];
            p[coord] = e;
            p[other] = c;
            self.eval(p)
        };
        let mut set = ClusterSet {
            chart: self.chart.clone(),
            curve: curve.clone(),
            description: String::new(),
            samples: Vec::new(),
            grid_points: 0,
            method: *opts,
            accepted: vec![false; side * side],
            side,
        };
        let mut defined_anywhere = false;
        for i in 0..side {
            for j in 0..side {
                let c = set.index_to_point(i, j);
                if c.norm() > opts.window {
                    continue;
                }
                set.grid_points += 1;
                let vals: Vec<Option<f64>> = dirs.iter().map(|&e| at(c, e)).collect();
                let defined: Vec<(usize, f64)> = vals
                    .iter()
                    .enumerate()
                    .filter_map(|(k, v)| v.filter(|x| x.is_finite()).map(|x| (k, x)))
                    .collect();
                if defined.is_empty() {
                    continue;
                }
                defined_anywhere = true;
                let (kmin, lo) = defined.iter().copied().fold((0, f64::INFINITY), |a, b| if b.1 < a.1 { b } else { a });
                let (kmax, hi) = defined.iter().copied().fold((0, f64::NEG_INFINITY), |a, b| if b.1 > a.1 { b } else { a });
                let mut hit = lo <= 0.0 && hi >= 0.0;
                if !hit {
                    let step = TAU / opts.phases as f64;
                    let g = |t: f64| at(c, Complex64::from_polar(opts.radius, t)).unwrap_or(f64::NAN);
                    hit = if lo > 0.0 {
                        let t0 = kmin as f64 * step;
                        golden_min(&|t| g(t), t0 - step, t0 + step, 40) <= 0.0
                    } else {
                        let t0 = kmax as f64 * step;
                        -golden_min(&|t| -g(t), t0 - step, t0 + step, 40) >= 0.0
                    };
                }
                if hit {
                    set.accepted[i * side + j] = true;
                    set.samples.push(c);
                }
            }
        }
        if !defined_anywhere {
            return Err(HypersurfaceError::UndefinedTrace(curve));
        }
        let names = self.pullback.vars().names();
        set.description = if set.samples.is_empty() {
            "∅".to_owned()
        } else if set.covers_window() {
            format!("{{{} = 0, |{}| ≤ {}}} (whole window)", names[coord], names[other], opts.window)
        } else {
            let lo = set.samples.iter().map(|c| c.norm()).fold(f64::INFINITY, f64::min);
            let hi = set.samples.iter().map(|c| c.norm()).fold(0.0, f64::max);
            format!("{{{} = 0, {:.3} ≤ |{}| ≤ {:.3}}}", names[coord], lo, names[other], hi)
        };
        Ok(set)
    }
}

/// `Im(p/q) − 1 = ((p q̄ − p̄ q)/(2i) − |q|²) / |q|²` for Hermitian `p`, `q`.
pub fn im_quotient_minus_one(p: &HermPoly, q: &HermPoly) -> Result<RationalExpr<HermPoly>, HypersurfaceError> {
    let qq = &q.conj() * q;
    let cross = &(p * &q.conj()) - &(&p.conj() * q);
    let im = cross.scale(&(&ExactComplex::ratio(1, 2) * &ExactComplex::int(0, -1)));
    Ok(RationalExpr::new(&im - &qq, qq)?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::blowup::chart_vars;
    use crate::example::rho_model;

    fn setup(leaf: &str) -> (RealHypersurface, ReducedEquation) {
        let tower = BlowupTower::origin_tower(3);
        let m = RealHypersurface::new(rho_model(), "U0").unwrap();
        proper_transform(&m, &tower, leaf).unwrap()
    }

    fn zs() -> (HoloPoly, HoloPoly) {
        let v = chart_vars();
        (HoloPoly::var(&v, 0), HoloPoly::var(&v, 1))
    }

    fn coarse() -> TraceOptions {
        TraceOptions { spacing: 0.05, ..TraceOptions::default() }
    }

    #[test]
    fn first_chart_pullback_and_reduction() {
        let (z1, z2) = zs();
        let (total, red) = setup("U1'");
        let expected = &HermPoly::abs_sq(&z1) - &HermPoly::im_of(&(&z1 * &z2));
        assert_eq!(total.rho(), &expected);
        assert!(red.identity_residual().is_zero());
        // Im(z2/z̄1) − 1 is the negated reduced equation
        let displayed = im_quotient_minus_one(&HermPoly::from_holo(&z2), &HermPoly::conj_of(&z1)).unwrap();
        let neg = RationalExpr::new(displayed.num().scale(&ExactComplex::int(-1, 0)), displayed.den().clone()).unwrap();
        assert!(red.expr().equivalent(&neg).unwrap());
    }

    #[test]
    fn second_chart_reduction() {
        let (z1, z2) = zs();
        let (_, red) = setup("U2'");
        let p = HermPoly::from_holo(&(&z1 * &z2));
        let displayed = im_quotient_minus_one(&p, &HermPoly::conj_of(&z1)).unwrap();
        let neg = RationalExpr::new(displayed.num().scale(&ExactComplex::int(-1, 0)), displayed.den().clone()).unwrap();
        assert!(red.expr().equivalent(&neg).unwrap());
    }

    #[test]
    fn disk_on_second_exceptional_curve() {
        let (_, red) = setup("U2'");
        let set = red.exceptional_trace(0, &coarse()).unwrap();
        let d = set.hausdorff_to_annulus(1.0, 3.0);
        assert!(d < 2.0 * coarse().spacing, "{d} {}", set.description);
        assert!(set.samples.iter().all(|c| c.norm() >= 1.0 - 1e-9));
    }

    #[test]
    fn first_curve_lies_in_first_transform() {
        let (_, red) = setup("U1''");
        let set = red.exceptional_trace(1, &coarse()).unwrap();
        assert!(set.covers_window(), "{}", set.description);
    }

    #[test]
    fn third_curve_is_missed() {
        for (leaf, coord) in [("U3'", 0), ("U3''", 1)] {
            let (_, red) = setup(leaf);
            let set = red.exceptional_trace(coord, &coarse()).unwrap();
            assert!(set.is_empty(), "{leaf}: {}", set.description);
            assert_eq!(set.description, "∅");
        }
    }

    #[test]
    fn non_exceptional_coordinate_rejected() {
        let (_, red) = setup("U1'");
        assert!(matches!(red.exceptional_trace(1, &coarse()), Err(HypersurfaceError::NotExceptional { .. })));
    }
}
