use std::io::{self, Write};

use num_complex::Complex64;
use rand::Rng;
use rand_distr::{Distribution, StandardNormal};

/// Axis-aligned box in `(Re z₁, Im z₁, Re z₂, Im z₂)` with optional bounds on `|z₁|`, `|z₂|`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Region {
    pub lo: [f64; 4],
    pub hi: [f64; 4],
    pub min_modulus: [f64; 2],
    pub max_modulus: [f64; 2],
}

impl Region {
    /// `|Re|, |Im| ≤ half` in both coordinates.
    pub fn square(half: f64) -> Self {
        Self { lo: [-half; 4], hi: [half; 4], min_modulus: [0.0; 2], max_modulus: [f64::INFINITY; 2] }
    }

    pub fn with_min_modulus(mut self, m: [f64; 2]) -> Self {
        self.min_modulus = m;
        self
    }

    pub fn with_max_modulus(mut self, m: [f64; 2]) -> Self {
        self.max_modulus = m;
        self
    }

    pub fn contains(&self, p: [Complex64; 2]) -> bool {
        let r = to_real(p);
        (0..4).all(|k| (self.lo[k]..=self.hi[k]).contains(&r[k]))
            && (0..2).all(|k| {
                let m = p[k].norm();
                m >= self.min_modulus[k] && m <= self.max_modulus[k]
            })
    }
}

fn to_real(p: [Complex64; 2]) -> [f64; 4] {
    [p[0].re, p[0].im, p[1].re, p[1].im]
}

fn from_real(r: [f64; 4]) -> [Complex64; 2] {
    [Complex64::new(r[0], r[1]), Complex64::new(r[2], r[3])]
}

/// Result of a sampling run.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct SampleOutcome {
    pub points: Vec<[Complex64; 2]>,
    pub attempts: usize,
    pub diagnostic: Option<String>,
}

/// Scan points per axis when looking for a sign change.
const SCAN: usize = 64;
/// Accepted residual after bisection.
const ACCEPT: f64 = 1e-12;

fn bisect(f: &dyn Fn([Complex64; 2]) -> Option<f64>, mut a: [f64; 4], mut b: [f64; 4], mut fa: f64) -> [f64; 4] {
    for _ in 0..200 {
        let m: [f64; 4] = std::array::from_fn(|k| 0.5 * (a[k] + b[k]));
        if m == a || m == b {
            break;
        }
        let Some(fm) = f(from_real(m)) else { break };
        if fm == 0.0 {
            return m;
        }
        if (fm < 0.0) == (fa < 0.0) {
            a = m;
            fa = fm;
        } else {
            b = m;
        }
    }
    a
}

/// Zeros of `f` in `region`: draw a uniform start point, scan one real axis
/// (in the order `Im z₂, Re z₂, Im z₁, Re z₁`) for a strict sign change, and
/// bisect it. Only bisected roots with `|f| ≤ 1e-12` inside the region are kept.
pub fn zero_set_sample<R: Rng>(
    f: &dyn Fn([Complex64; 2]) -> Option<f64>,
    region: &Region,
    count: usize,
    max_attempts: usize,
    rng: &mut R,
) -> SampleOutcome {
    let mut out = SampleOutcome::default();
    while out.points.len() < count && out.attempts < max_attempts {
        out.attempts += 1;
        let start: [f64; 4] = std::array::from_fn(|k| rng.random_range(region.lo[k]..=region.hi[k]));
        for axis in [3, 2, 1, 0] {
            let line: Vec<([f64; 4], f64)> = (0..SCAN)
                .filter_map(|s| {
                    let mut r = start;
                    r[axis] = region.lo[axis] + (region.hi[axis] - region.lo[axis]) * s as f64 / (SCAN - 1) as f64;
                    let p = from_real(r);
                    if !region.contains(p) {
                        return None;
                    }
                    f(p).filter(|v| v.is_finite()).map(|v| (r, v))
                })
                .collect();
            let changes: Vec<usize> = (1..line.len())
                .filter(|&k| (line[k - 1].1 < 0.0 && line[k].1 > 0.0) || (line[k - 1].1 > 0.0 && line[k].1 < 0.0))
                .collect();
            if changes.is_empty() {
                continue;
            }
            let k = changes[rng.random_range(0..changes.len())];
            let root = from_real(bisect(f, line[k - 1].0, line[k].0, line[k - 1].1));
            if region.contains(root) && f(root).is_some_and(|v| v.abs() <= ACCEPT) {
                out.points.push(root);
            }
            break;
        }
    }
    if out.points.is_empty() {
        out.diagnostic = Some(format!("no zero found in {} attempts", out.attempts));
    }
    out
}

/// Points of `Im z₂ = |z₁|²` with `z₁`, `Re z₂` uniform in the region's box;
/// the bounds on `Im z₂` are ignored.
pub fn graph_sample<R: Rng>(region: &Region, count: usize, rng: &mut R) -> Vec<[Complex64; 2]> {
    let mut pts = Vec::with_capacity(count);
    let mut tries = 0usize;
    while pts.len() < count && tries < 1000 * count.max(1) {
        tries += 1;
        let z1 = Complex64::new(
            rng.random_range(region.lo[0]..=region.hi[0]),
            rng.random_range(region.lo[1]..=region.hi[1]),
        );
        let z2 = Complex64::new(rng.random_range(region.lo[2]..=region.hi[2]), z1.norm_sqr());
        let p = [z1, z2];
        if (0..2).all(|k| (region.min_modulus[k]..=region.max_modulus[k]).contains(&p[k].norm())) {
            pts.push(p);
        }
    }
    pts
}

/// Uniform points of the unit sphere of `C²` from normalized Gaussian vectors.
pub fn sphere_sample<R: Rng>(count: usize, rng: &mut R) -> Vec<[Complex64; 2]> {
    (0..count)
        .map(|_| loop {
            let r: [f64; 4] = std::array::from_fn(|_| StandardNormal.sample(rng));
            let n = r.iter().map(|x| x * x).sum::<f64>().sqrt();
            if n > 1e-12 {
                break from_real(r.map(|x| x / n));
            }
        })
        .collect()
}

/// One line of a sample cloud.
#[derive(Clone, Debug, PartialEq)]
pub struct CsvRow {
    pub chart: String,
    pub point: [Complex64; 2],
    pub rho_residual: f64,
    pub levi_value: Option<f64>,
}

pub const CSV_HEADER: &str = "chart,re_z1,im_z1,re_z2,im_z2,abs_z1,abs_z2,rho_residual,levi_value";

/// Writes rows sorted by chart and coordinates, so output is independent of
/// the order in which points were produced.
pub fn write_csv<W: Write>(out: &mut W, rows: &[CsvRow]) -> io::Result<()> {
    let mut sorted: Vec<&CsvRow> = rows.iter().collect();
    sorted.sort_by(|a, b| {
        a.chart.cmp(&b.chart).then_with(|| {
            to_real(a.point)
                .iter()
                .zip(to_real(b.point).iter())
                .map(|(x, y)| x.total_cmp(y))
                .find(|o| o.is_ne())
                .unwrap_or(std::cmp::Ordering::Equal)
        })
    });
    writeln!(out, "{CSV_HEADER}")?;
    for r in sorted {
        let [a, b] = r.point;
        let levi = r.levi_value.map_or_else(|| "nan".to_owned(), |v| format!("{v:e}"));
        writeln!(
            out,
            "{},{:e},{:e},{:e},{:e},{:e},{:e},{:e},{}",
            r.chart,
            a.re,
            a.im,
            b.re,
            b.im,
            a.norm(),
            b.norm(),
            r.rho_residual,
            levi
        )?;
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn sphere_points_have_unit_norm() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        for p in sphere_sample(1000, &mut rng) {
            assert!((p[0].norm_sqr() + p[1].norm_sqr() - 1.0).abs() < 1e-15);
        }
    }

    #[test]
    fn graph_points_lie_on_model() {
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        for p in graph_sample(&Region::square(2.0), 500, &mut rng) {
            assert_eq!(p[1].im, p[0].norm_sqr());
        }
    }

    #[test]
    fn bracketing_finds_unit_circle() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let f = |p: [Complex64; 2]| Some(p[1].norm_sqr() - 1.0);
        let s = zero_set_sample(&f, &Region::square(2.0), 200, 10_000, &mut rng);
        assert_eq!(s.points.len(), 200);
        assert!(s.points.iter().all(|p| (p[1].norm_sqr() - 1.0).abs() <= 1e-12));
    }

    #[test]
    fn no_sign_change_means_no_points() {
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        let f = |p: [Complex64; 2]| Some(p[1].norm_sqr() + 1.0);
        let s = zero_set_sample(&f, &Region::square(1.0), 10, 100, &mut rng);
        assert!(s.points.is_empty());
        assert_eq!(s.attempts, 100);
        assert!(s.diagnostic.is_some());
    }

    #[test]
    fn csv_is_sorted() {
        let row = |x: f64| CsvRow {
            chart: "U1'".into(),
            point: [Complex64::new(x, 0.0), Complex64::new(0.0, 0.0)],
            rho_residual: 0.0,
            levi_value: Some(1.0),
        };
        let mut buf = Vec::new();
        write_csv(&mut buf, &[row(2.0), row(1.0)]).unwrap();
        let text = String::from_utf8(buf).unwrap();
        let lines: Vec<&str> = text.lines().collect();
        assert_eq!(lines[0], CSV_HEADER);
        assert!(lines[1].starts_with("U1',1e0,"));
    }
}
