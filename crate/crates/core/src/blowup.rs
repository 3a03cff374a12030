//! Point blow-ups of the complex plane in affine charts.
//!
//! Blowing up a point `c` of a chart with coordinates `(x₁, x₂)` creates two
//! charts with local coordinates renamed back to `(z1, z2)`:
//!
//! ```text
//!   U'  : (a, b) ↦ (c₁ + a,  c₂ + a·b)     exceptional curve {a = 0}
//!   U'' : (a, b) ↦ (c₁ + a·b, c₂ + b)      exceptional curve {b = 0}
//! ```
//!
//! Charts created at step `k` are named `U{k}'` and `U{k}''`; lineage is kept
//! through each chart's `base_id`.

use std::collections::BTreeMap;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::algebra::{AlgebraError, ExactComplex, HermPoly, HoloPoly, Monomial, Vars};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum BlowupError {
    #[error("unknown chart `{0}`")]
    UnknownChart(String),
    #[error("chart `{chart}` has variables {found}, polynomial has {expected}")]
    WrongChartVars { chart: String, expected: String, found: String },
    #[error(transparent)]
    Algebra(#[from] AlgebraError),
}

/// An affine chart and its blow-down map to the chart it was created from.
#[derive(Clone, Debug, PartialEq)]
pub struct ChartMap {
    pub id: String,
    /// `None` for the root chart.
    pub base_id: Option<String>,
    pub vars: Vars,
    /// Base coordinates as polynomials in this chart's coordinates.
    pub blow_down: [HoloPoly; 2],
    /// Index of the local coordinate whose zero set is the newest exceptional curve.
    pub exceptional_coord: Option<usize>,
    /// Blow-up step (1-based) that created the chart; 0 for the root.
    pub step: usize,
}

/// Local description of an exceptional curve in one chart.
#[derive(Clone, Debug, PartialEq)]
pub struct CurveTrace {
    /// Local equation of the proper transform of the curve.
    pub equation: HoloPoly,
    /// Power of each later exceptional coordinate split off while tracking
    /// the curve through later blow-ups (total vs. proper transform).
    pub split_factors: Vec<(String, u32)>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct ExceptionalCurve {
    pub id: String,
    pub center_chart: String,
    pub center: [ExactComplex; 2],
    pub traces: BTreeMap<String, CurveTrace>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct BlowupStep {
    pub chart: String,
    pub center: [ExactComplex; 2],
    pub curve_id: String,
}

/// A sequence of point blow-ups starting from one affine chart.
#[derive(Clone, Debug, PartialEq)]
pub struct BlowupTower {
    root_id: String,
    atlas: Vec<ChartMap>,
    steps: Vec<BlowupStep>,
    curves: Vec<ExceptionalCurve>,
}

pub fn chart_vars() -> Vars {
    Vars::new(&["z1", "z2"])
}

impl BlowupTower {
    /// The plane with coordinates `(z1, z2)` and no blow-ups.
    pub fn new(root_id: &str) -> Self {
        let vars = chart_vars();
        let root = ChartMap {
            id: root_id.to_owned(),
            base_id: None,
            blow_down: [HoloPoly::var(&vars, 0), HoloPoly::var(&vars, 1)],
            vars,
            exceptional_coord: None,
            step: 0,
        };
        Self { root_id: root_id.to_owned(), atlas: vec![root], steps: Vec::new(), curves: Vec::new() }
    }

    /// `depth` successive blow-ups, each at the origin of the first chart
    /// created by the previous one: `U0`, then `U1'`, `U2'`, ...
    pub fn origin_tower(depth: usize) -> Self {
        let mut tower = Self::new("U0");
        let origin = [ExactComplex::zero(), ExactComplex::zero()];
        for k in 0..depth {
            let chart = if k == 0 { "U0".to_owned() } else { format!("U{k}'") };
            tower = tower.blow_up(&chart, origin.clone()).expect("chart exists by construction");
        }
        tower
    }

    pub fn root_id(&self) -> &str {
        &self.root_id
    }

    pub fn charts(&self) -> &[ChartMap] {
        &self.atlas
    }

    pub fn steps(&self) -> &[BlowupStep] {
        &self.steps
    }

    pub fn curves(&self) -> &[ExceptionalCurve] {
        &self.curves
    }

    pub fn chart(&self, id: &str) -> Result<&ChartMap, BlowupError> {
        self.atlas
            .iter()
            .find(|c| c.id == id)
            .ok_or_else(|| BlowupError::UnknownChart(id.to_owned()))
    }

    pub fn curve(&self, id: &str) -> Option<&ExceptionalCurve> {
        self.curves.iter().find(|c| c.id == id)
    }

    /// Blows up `center` (exact coordinates in `chart`), returning the extended tower.
    pub fn blow_up(&self, chart: &str, center: [ExactComplex; 2]) -> Result<Self, BlowupError> {
        let base = self.chart(chart)?;
        let vars = base.vars.clone();
        let step = self.steps.len() + 1;
        let curve_id = format!("E{step}");
        let a = HoloPoly::var(&vars, 0);
        let b = HoloPoly::var(&vars, 1);
        let c1 = HoloPoly::constant(&vars, center[0].clone());
        let c2 = HoloPoly::constant(&vars, center[1].clone());
        let ab = &a * &b;
        let new_charts = [
            ChartMap {
                id: format!("U{step}'"),
                base_id: Some(base.id.clone()),
                vars: vars.clone(),
                blow_down: [&c1 + &a, &c2 + &ab],
                exceptional_coord: Some(0),
                step,
            },
            ChartMap {
                id: format!("U{step}''"),
                base_id: Some(base.id.clone()),
                vars: vars.clone(),
                blow_down: [&c1 + &ab, &c2 + &b],
                exceptional_coord: Some(1),
                step,
            },
        ];

        let mut next = self.clone();
        // carry earlier exceptional curves through the new charts
        for curve in &mut next.curves {
            let Some(trace) = curve.traces.get(chart).cloned() else { continue };
            for nc in &new_charts {
                let e = nc.exceptional_coord.expect("blow-up charts have one");
                let pulled = trace.equation.compose(&nc.blow_down)?;
                // split off the largest power of the new exceptional coordinate only
                let mult = pulled.terms().map(|(m, _)| m.exps()[e]).min().unwrap_or(0);
                let mut split_mono = vec![0; 2];
                split_mono[e] = mult;
                let proper = pulled
                    .div_monomial(&Monomial::new(split_mono))
                    .expect("power of the exceptional coordinate divides");
                if proper.is_constant() {
                    continue; // the proper transform misses this chart
                }
                let mut split = trace.split_factors.clone();
                if mult > 0 {
                    split.push((curve_id.clone(), mult));
                }
                curve
                    .traces
                    .insert(nc.id.clone(), CurveTrace { equation: proper, split_factors: split });
            }
        }
        let mut traces = BTreeMap::new();
        for nc in &new_charts {
            let e = nc.exceptional_coord.expect("blow-up charts have one");
            traces.insert(
                nc.id.clone(),
                CurveTrace { equation: HoloPoly::var(&vars, e), split_factors: Vec::new() },
            );
        }
        next.curves.push(ExceptionalCurve {
            id: curve_id.clone(),
            center_chart: chart.to_owned(),
            center: center.clone(),
            traces,
        });
        next.atlas.extend(new_charts);
        next.steps.push(BlowupStep { chart: chart.to_owned(), center, curve_id });
        Ok(next)
    }

    /// Exact polynomial map from `leaf` coordinates to root coordinates.
    pub fn total_blow_down(&self, leaf: &str) -> Result<[HoloPoly; 2], BlowupError> {
        let mut chart = self.chart(leaf)?;
        let mut map = chart.blow_down.clone();
        while let Some(base_id) = &chart.base_id {
            let base = self.chart(base_id)?;
            if base.base_id.is_none() {
                break;
            }
            map = [base.blow_down[0].compose(&map)?, base.blow_down[1].compose(&map)?];
            chart = base;
        }
        Ok(map)
    }

    fn check_root_vars(&self, leaf: &str, vars: &Vars) -> Result<(), BlowupError> {
        let root = self.chart(&self.root_id)?;
        if root.vars != *vars {
            return Err(BlowupError::WrongChartVars {
                chart: leaf.to_owned(),
                expected: vars.to_string(),
                found: root.vars.to_string(),
            });
        }
        Ok(())
    }

    /// Pullback of a holomorphic polynomial on the root to `leaf`.
    pub fn pullback_holo(&self, leaf: &str, p: &HoloPoly) -> Result<HoloPoly, BlowupError> {
        self.check_root_vars(leaf, p.vars())?;
        Ok(p.compose(&self.total_blow_down(leaf)?)?)
    }

    /// Pullback of a Hermitian polynomial on the root to `leaf`.
    pub fn pullback_herm(&self, leaf: &str, p: &HermPoly) -> Result<HermPoly, BlowupError> {
        self.check_root_vars(leaf, p.vars())?;
        Ok(p.compose(&self.total_blow_down(leaf)?)?)
    }

    /// Exceptional curves visible in `chart` together with their local equations.
    pub fn curves_in(&self, chart: &str) -> Vec<(&ExceptionalCurve, &CurveTrace)> {
        self.curves
            .iter()
            .filter_map(|c| c.traces.get(chart).map(|t| (c, t)))
            .collect()
    }

    /// Coordinates of `chart` whose zero set is an exceptional curve.
    pub fn exceptional_coords(&self, chart: &str) -> Vec<(usize, String)> {
        let vars = chart_vars();
        let mut out: Vec<(usize, String)> = self
            .curves_in(chart)
            .into_iter()
            .filter_map(|(c, t)| {
                (0..2)
                    .find(|&k| t.equation == HoloPoly::var(&vars, k))
                    .map(|k| (k, c.id.clone()))
            })
            .collect();
        out.sort();
        out
    }

    /// Float blow-down of a point of `leaf` to root coordinates.
    pub fn blow_down_f64(&self, leaf: &str, point: [Complex64; 2]) -> Result<[Complex64; 2], BlowupError> {
        let map = self.total_blow_down(leaf)?;
        Ok([map[0].eval_f64(&point), map[1].eval_f64(&point)])
    }

    /// Transition into the sibling chart created by the same blow-up, where defined.
    pub fn to_sibling(&self, chart: &str, p: [Complex64; 2]) -> Result<Option<(String, [Complex64; 2])>, BlowupError> {
        let c = self.chart(chart)?;
        let Some(e) = c.exceptional_coord else { return Ok(None) };
        let sibling = if e == 0 { format!("U{}''", c.step) } else { format!("U{}'", c.step) };
        let one = Complex64::new(1.0, 0.0);
        let q = if e == 0 {
            if p[1].norm() == 0.0 {
                return Ok(None);
            }
            [one / p[1], p[0] * p[1]]
        } else {
            if p[0].norm() == 0.0 {
                return Ok(None);
            }
            [p[0] * p[1], one / p[0]]
        };
        Ok(Some((sibling, q)))
    }

    pub fn to_document(&self) -> TowerDocument {
        TowerDocument {
            root: self.root_id.clone(),
            steps: self
                .steps
                .iter()
                .map(|s| StepDocument {
                    chart: s.chart.clone(),
                    center: s.center.iter().map(ToString::to_string).collect(),
                    exceptional_curve: s.curve_id.clone(),
                })
                .collect(),
            charts: self
                .atlas
                .iter()
                .map(|c| ChartDocument {
                    id: c.id.clone(),
                    base: c.base_id.clone(),
                    vars: c.vars.names().to_vec(),
                    blow_down: c.blow_down.iter().map(ToString::to_string).collect(),
                    total_blow_down: self
                        .total_blow_down(&c.id)
                        .map(|m| m.iter().map(ToString::to_string).collect())
                        .unwrap_or_default(),
                    exceptional_coordinate: c.exceptional_coord,
                })
                .collect(),
            curves: self
                .curves
                .iter()
                .map(|c| CurveDocument {
                    id: c.id.clone(),
                    local_equations: c
                        .traces
                        .iter()
                        .map(|(k, t)| (k.clone(), t.equation.to_string()))
                        .collect(),
                    split_factors: c
                        .traces
                        .iter()
                        .filter(|(_, t)| !t.split_factors.is_empty())
                        .map(|(k, t)| (k.clone(), t.split_factors.clone()))
                        .collect(),
                })
                .collect(),
        }
    }
}

/// Serializable description of a tower; polynomials in text form.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TowerDocument {
    pub root: String,
    pub steps: Vec<StepDocument>,
    pub charts: Vec<ChartDocument>,
    pub curves: Vec<CurveDocument>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct StepDocument {
    pub chart: String,
    pub center: Vec<String>,
    pub exceptional_curve: String,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ChartDocument {
    pub id: String,
    pub base: Option<String>,
    pub vars: Vec<String>,
    pub blow_down: Vec<String>,
    pub total_blow_down: Vec<String>,
    pub exceptional_coordinate: Option<usize>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CurveDocument {
    pub id: String,
    pub local_equations: BTreeMap<String, String>,
    pub split_factors: BTreeMap<String, Vec<(String, u32)>>,
}

#[cfg(test)]
mod tests {
    use super::*;

    fn mono(e: [u32; 2]) -> HoloPoly {
        HoloPoly::monomial(&chart_vars(), Monomial::new(e.to_vec()), ExactComplex::one())
    }

    #[test]
    fn first_blow_up_charts() {
        let t = BlowupTower::origin_tower(1);
        assert_eq!(t.total_blow_down("U1'").unwrap(), [mono([1, 0]), mono([1, 1])]);
        assert_eq!(t.total_blow_down("U1''").unwrap(), [mono([1, 1]), mono([0, 1])]);
    }

    #[test]
    fn composed_blow_downs() {
        let t = BlowupTower::origin_tower(3);
        assert_eq!(t.total_blow_down("U2'").unwrap(), [mono([1, 0]), mono([2, 1])]);
        assert_eq!(t.total_blow_down("U2''").unwrap(), [mono([1, 1]), mono([1, 2])]);
        assert_eq!(t.total_blow_down("U3'").unwrap(), [mono([1, 0]), mono([3, 1])]);
        assert_eq!(t.total_blow_down("U3''").unwrap(), [mono([1, 1]), mono([2, 3])]);
    }

    #[test]
    fn unknown_chart_is_rejected() {
        let t = BlowupTower::origin_tower(1);
        let origin = [ExactComplex::zero(), ExactComplex::zero()];
        assert_eq!(t.blow_up("U7'", origin), Err(BlowupError::UnknownChart("U7'".into())));
    }

    #[test]
    fn exceptional_curves_are_tracked() {
        let t = BlowupTower::origin_tower(3);
        let ids = |chart: &str| -> Vec<(usize, String)> { t.exceptional_coords(chart) };
        assert_eq!(ids("U1'"), vec![(0, "E1".into())]);
        assert_eq!(ids("U2'"), vec![(0, "E2".into())]);
        assert_eq!(ids("U2''"), vec![(0, "E1".into()), (1, "E2".into())]);
        assert_eq!(ids("U3'"), vec![(0, "E3".into())]);
        assert_eq!(ids("U3''"), vec![(0, "E2".into()), (1, "E3".into())]);
        // E1 meets U2'' after splitting one power of the E2 coordinate
        let e1 = t.curve("E1").unwrap();
        assert_eq!(e1.traces["U2''"].split_factors, vec![("E2".to_owned(), 1)]);
        assert!(!e1.traces.contains_key("U2'"));
    }

    #[test]
    fn off_origin_center_is_translated() {
        let t = BlowupTower::new("U0")
            .blow_up("U0", [ExactComplex::int(0, 0), ExactComplex::int(-1, 0)])
            .unwrap();
        let m = t.total_blow_down("U1'").unwrap();
        let p = [ExactComplex::zero(), ExactComplex::int(5, 0)];
        assert_eq!(m[0].eval(&p), ExactComplex::zero());
        assert_eq!(m[1].eval(&p), ExactComplex::int(-1, 0));
    }
}
