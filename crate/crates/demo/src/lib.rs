//! WebAssembly bindings for the static demo page in `www/`.
//!
//! Every function returns a flat `Float64Array`; the page draws it on a canvas.

use sphere_blowup::cli::{cluster_table, sample_rows, ClusterSpec, SampleSpec, Stage};
use wasm_bindgen::prelude::*;

fn stage(name: &str) -> Result<Stage, JsValue> {
    match name {
        "m" => Ok(Stage::M),
        "m1" => Ok(Stage::M1),
        "m2" => Ok(Stage::M2),
        "image" => Ok(Stage::Image),
        other => Err(JsValue::from_str(&format!("unknown stage `{other}`"))),
    }
}

fn js_err(e: impl std::fmt::Display) -> JsValue {
    JsValue::from_str(&format!("{e:#}"))
}

/// `(|z1|, |z2|)` pairs of a sample cloud of `stage` in `chart`.
#[wasm_bindgen]
pub fn moduli_diagram(stage_name: &str, chart: &str, count: usize, seed: u32) -> Result<Vec<f64>, JsValue> {
    let spec = SampleSpec { stage: stage(stage_name)?, chart: chart.to_owned(), count, seed: seed.into(), window: 3.0, margin: 1e-3 };
    let rows = sample_rows(&spec).map_err(js_err)?;
    Ok(rows.iter().flat_map(|r| [r.point[0].norm(), r.point[1].norm()]).collect())
}

/// `(radius, max distance)` pairs for sphere points near `point` (`p+`, `p-` or `w1,w2`);
/// an unbounded distance is returned as NaN.
#[wasm_bindgen]
pub fn cluster_decay(point: &str, phases: usize, tilts: usize, seed: u32) -> Result<Vec<f64>, JsValue> {
    let spec = ClusterSpec {
        point: point.to_owned(),
        radii: vec![1e-1, 1e-2, 1e-3, 1e-4, 1e-5, 1e-6],
        phases,
        tilts,
        seed: seed.into(),
    };
    let est = cluster_table(&spec).map_err(js_err)?;
    Ok(est.rows.iter().flat_map(|r| [r.radius, r.max_distance.unwrap_or(f64::NAN)]).collect())
}

/// `(Re a1, Im a1, Re a2, Im a2)` for images of uniform sphere points in the affine chart.
#[wasm_bindgen]
pub fn image_cloud(count: usize, seed: u32) -> Result<Vec<f64>, JsValue> {
    let spec = SampleSpec { stage: Stage::Image, chart: String::new(), count, seed: seed.into(), window: 3.0, margin: 0.0 };
    let rows = sample_rows(&spec).map_err(js_err)?;
    Ok(rows.iter().flat_map(|r| [r.point[0].re, r.point[0].im, r.point[1].re, r.point[1].im]).collect())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn moduli_pairs_respect_the_cone() {
        let v = moduli_diagram("m1", "U1p", 200, 1).unwrap();
        assert_eq!(v.len(), 400);
        assert!(v.chunks(2).all(|p| p[1] >= p[0]));
    }

    #[test]
    fn decay_is_monotone() {
        let v = cluster_decay("p-", 24, 3, 1).unwrap();
        let d: Vec<f64> = v.chunks(2).map(|p| p[1]).collect();
        assert_eq!(d.len(), 6);
        assert!(d.windows(2).all(|w| w[1] < w[0]));
    }

    #[test]
    fn image_is_in_the_closed_bidisk() {
        let v = image_cloud(500, 2).unwrap();
        assert_eq!(v.len(), 2000);
        assert!(v.chunks(4).all(|p| p[0].hypot(p[1]) <= 1.0 + 1e-12 && p[2].hypot(p[3]) <= 1.0 + 1e-12));
    }
}
