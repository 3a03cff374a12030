//! Cluster values of the map along the sphere near a point.

use std::f64::consts::{FRAC_PI_2, PI, TAU};

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::maps::ProjectiveTriple;

/// Distance between projective points, measured in the standard affine
/// chart where `target` has its largest coordinate.
pub fn chart_distance(target: [Complex64; 3], image: [Complex64; 3]) -> f64 {
    let k = (0..3).max_by(|&a, &b| target[a].norm().total_cmp(&target[b].norm())).expect("three coordinates");
    if image[k].norm() == 0.0 || !image.iter().all(|z| z.is_finite()) {
        return f64::INFINITY;
    }
    (0..3)
        .filter(|&j| j != k)
        .map(|j| (image[j] / image[k] - target[j] / target[k]).norm())
        .fold(0.0, f64::max)
}

/// Points of the unit sphere at Euclidean distance `r` from the sphere point
/// `p`, along great circles leaving `p` in `phases × tilts` tangent directions.
pub fn sphere_ring(p: [Complex64; 2], r: f64, phases: usize, tilts: usize, rng: &mut ChaCha8Rng) -> Vec<[Complex64; 2]> {
    let a = 2.0 * (r / 2.0).asin();
    let q = [-p[1].conj(), p[0].conj()];
    let ip = [Complex64::i() * p[0], Complex64::i() * p[1]];
    let mut out = Vec::with_capacity(phases * tilts);
    for t in 0..tilts {
        let tau = -FRAC_PI_2 + PI * (t as f64 + 0.5 + rng.random_range(-0.25..0.25)) / tilts as f64;
        for k in 0..phases {
            let phi = TAU * (k as f64 + rng.random_range(-0.25..0.25)) / phases as f64;
            let e = Complex64::from_polar(tau.cos(), phi);
            let u = [e * q[0] + tau.sin() * ip[0], e * q[1] + tau.sin() * ip[1]];
            out.push([a.cos() * p[0] + a.sin() * u[0], a.cos() * p[1] + a.sin() * u[1]]);
        }
    }
    out
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ClusterRow {
    pub radius: f64,
    pub max_distance: Option<f64>,
    pub samples: usize,
    /// `[[Re w₁, Im w₁], [Re w₂, Im w₂]]` of the farthest image.
    pub worst_source: [[f64; 2]; 2],
    /// Homogeneous image of the worst source point, scaled so the target's
    /// largest coordinate slot is 1.
    pub worst_image: [[f64; 2]; 3],
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ClusterEstimate {
    pub point: [[f64; 2]; 2],
    pub target: [[f64; 2]; 3],
    pub rows: Vec<ClusterRow>,
    /// Least-squares slope of `log ε` against `log r`.
    pub decay_rate: Option<f64>,
    /// `ε` strictly decreases along the schedule.
    pub decreasing: bool,
}

fn pair(z: Complex64) -> [f64; 2] {
    [z.re, z.im]
}

fn finite(x: f64) -> Option<f64> {
    x.is_finite().then_some(x)
}

impl ClusterEstimate {
    pub fn distance_at(&self, radius: f64) -> Option<f64> {
        self.rows.iter().find(|r| r.radius == radius).and_then(|r| r.max_distance)
    }

    pub fn max_distance(&self) -> f64 {
        self.rows.iter().map(|r| r.max_distance.unwrap_or(f64::INFINITY)).fold(0.0, f64::max)
    }
}

/// Largest chart distance from `target` of the images of sphere points at
/// each radius (radii are processed largest first).
pub fn cluster_estimate(
    map: &ProjectiveTriple,
    point: [Complex64; 2],
    target: [Complex64; 3],
    radii: &[f64],
    phases: usize,
    tilts: usize,
    seed: u64,
) -> ClusterEstimate {
    let mut radii = radii.to_vec();
    radii.sort_by(|a, b| b.total_cmp(a));
    radii.dedup();
    let k = (0..3).max_by(|&a, &b| target[a].norm().total_cmp(&target[b].norm())).expect("three coordinates");
    let mut rows = Vec::new();
    for (idx, &r) in radii.iter().enumerate() {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        rng.set_stream(idx as u64);
        let ring = sphere_ring(point, r, phases, tilts, &mut rng);
        let mut worst = (f64::NEG_INFINITY, ring[0], [Complex64::new(0.0, 0.0); 3]);
        for w in &ring {
            let img = map.eval_f64(w);
            let d = chart_distance(target, img);
            if d > worst.0 || d.is_nan() {
                worst = (if d.is_nan() { f64::INFINITY } else { d }, *w, img);
            }
        }
        let scale = if worst.2[k].norm() > 0.0 { worst.2[k] } else { Complex64::new(1.0, 0.0) };
        rows.push(ClusterRow {
            radius: r,
            max_distance: finite(worst.0),
            samples: ring.len(),
            worst_source: [pair(worst.1[0]), pair(worst.1[1])],
            worst_image: worst.2.map(|z| pair(z / scale)),
        });
    }
    let decreasing = rows
        .windows(2)
        .all(|w| matches!((w[0].max_distance, w[1].max_distance), (Some(a), Some(b)) if b < a));
    let pts: Vec<(f64, f64)> = rows
        .iter()
        .filter_map(|r| r.max_distance.filter(|&d| d > 0.0).map(|d| (r.radius.ln(), d.ln())))
        .collect();
    let decay_rate = (pts.len() >= 2).then(|| {
        let n = pts.len() as f64;
        let (mx, my) = (pts.iter().map(|p| p.0).sum::<f64>() / n, pts.iter().map(|p| p.1).sum::<f64>() / n);
        let sxy: f64 = pts.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
        let sxx: f64 = pts.iter().map(|p| (p.0 - mx).powi(2)).sum();
        sxy / sxx
    });
    let t = target[k];
    ClusterEstimate {
        point: [pair(point[0]), pair(point[1])],
        target: target.map(|z| pair(z / t)),
        rows,
        decay_rate: decay_rate.and_then(finite),
        decreasing,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::example::sphere_triple;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn ring_points_are_on_sphere_at_radius() {
        let mut rng = ChaCha8Rng::seed_from_u64(0);
        let p = [c(0.0, 0.0), c(-1.0, 0.0)];
        for w in sphere_ring(p, 1e-3, 12, 5, &mut rng) {
            assert!((w[0].norm_sqr() + w[1].norm_sqr() - 1.0).abs() < 1e-14);
            let d = ((w[0] - p[0]).norm_sqr() + (w[1] - p[1]).norm_sqr()).sqrt();
            assert!((d - 1e-3).abs() < 1e-12);
        }
    }

    #[test]
    fn distance_in_target_chart() {
        let t = [c(0.0, 0.0), c(0.0, 0.0), c(1.0, 0.0)];
        assert_eq!(chart_distance(t, [c(0.5, 0.0), c(0.0, 0.0), c(2.0, 0.0)]), 0.25);
        assert_eq!(chart_distance(t, [c(1.0, 0.0), c(0.0, 0.0), c(0.0, 0.0)]), f64::INFINITY);
    }

    #[test]
    fn regular_point_has_its_value_as_limit() {
        let f = sphere_triple();
        let p = [c(1.0, 0.0), c(0.0, 0.0)];
        let target = [c(1.0, 0.0), c(-1.0, 0.0), c(0.0, 1.0)];
        let est = cluster_estimate(&f, p, target, &[1e-2, 1e-3, 1e-4], 12, 3, 1);
        assert!(est.decreasing);
        assert!(est.distance_at(1e-4).unwrap() < 1e-3);
    }

    #[test]
    fn south_pole_converges_to_third_vertex() {
        let f = sphere_triple();
        let p = [c(0.0, 0.0), c(-1.0, 0.0)];
        let target = [c(0.0, 0.0), c(0.0, 0.0), c(1.0, 0.0)];
        let est = cluster_estimate(&f, p, target, &[1e-1, 1e-2, 1e-3, 1e-4, 1e-5, 1e-6], 72, 9, 7);
        assert!(est.decreasing, "{:?}", est.rows);
        assert!(est.distance_at(1e-4).unwrap() <= 1e-3);
    }
}
