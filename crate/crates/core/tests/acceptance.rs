//! Acceptance suite: one PASS/FAIL line per criterion, with tolerances pinned here.

use std::time::{Duration, Instant};

use num_complex::Complex64;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use sphere_blowup::algebra::{ExactComplex, HoloPoly};
use sphere_blowup::blowup::{chart_vars, BlowupTower};
use sphere_blowup::example as ex;
use sphere_blowup::hypersurface::{proper_transform, sphere_sample, zero_set_sample, RealHypersurface, Region, TraceOptions};
use sphere_blowup::maps::ProjectivePoint;
use sphere_blowup::verify::{self, cluster_estimate, Config, Context, Verdict};

const CLUSTER_TOL: f64 = 1e-3;
const CLUSTER_RADIUS: f64 = 1e-4;
const RADII: [f64; 6] = [1e-1, 1e-2, 1e-3, 1e-4, 1e-5, 1e-6];
const PHASES: usize = 72;
const TILTS: usize = 9;
const CLUSTER_TIME: Duration = Duration::from_secs(10);
const HAUSDORFF_TOL: f64 = 1e-2;
const AVOIDANCE_ATTEMPTS: usize = 100_000;
const AVOIDANCE_RADIUS: f64 = 0.9;
const LEVI_SAMPLES: usize = 10_000;
const LEVI_MARGIN: f64 = 1e-3;
const SPHERE_LEVI_TOL: f64 = 1e-9;
const IMAGE_SAMPLES: usize = 100_000;
const IMAGE_SEEDS: u64 = 3;
const IMAGE_BOUND: f64 = 1.0 + 1e-12;
const IMAGE_SPREAD: f64 = 0.01;
const SEED: u64 = 7;

struct Outcome {
    passed: bool,
    detail: String,
}

fn outcome(passed: bool, detail: impl Into<String>) -> Outcome {
    Outcome { passed, detail: detail.into() }
}

fn c64(p: &[ExactComplex; 2]) -> [Complex64; 2] {
    [p[0].to_c64(), p[1].to_c64()]
}

fn claims_pass(ctx: &Context, ids: &[&str]) -> Outcome {
    let mut bad = Vec::new();
    let mut witnesses = 0;
    for id in ids {
        let c = ctx.claim(id);
        witnesses += c.witnesses.len();
        bad.extend(c.witnesses.iter().filter(|w| !w.passed).map(|w| format!("{id}: {}", w.label)));
        if c.verdict != Verdict::Pass {
            bad.push(format!("{id} verdict {:?}", c.verdict));
        }
    }
    outcome(bad.is_empty(), if bad.is_empty() { format!("{witnesses} witnesses, all passed") } else { bad.join("; ") })
}

fn criterion_identities(ctx: &Context) -> Outcome {
    claims_pass(ctx, &["construction.identities", "iii.affine-form"])
}

fn criterion_base_locus() -> Outcome {
    let pts = |t: &sphere_blowup::maps::ProjectiveTriple| -> Vec<String> {
        let mut v: Vec<String> = t
            .base_locus()
            .unwrap()
            .points
            .iter()
            .map(|p| format!("({}, {})", p[0].to_c64(), p[1].to_c64()))
            .collect();
        v.sort();
        v
    };
    let w = pts(&ex::sphere_triple());
    let z = pts(&ex::local_triple());
    let mut poles: Vec<String> = ex::sphere_triple()
        .pole_divisor(2)
        .hyperplanes
        .iter()
        .map(|(v, c)| format!("{v}={}", c.to_c64()))
        .collect();
    poles.sort();
    let zpole = ex::local_triple().pole_divisor(2);
    let ok = w == ["(0+0i, -1+0i)", "(0+0i, 1+0i)"]
        && z == ["(0+0i, 0+0i)"]
        && poles == ["w2=-1+0i", "w2=1+0i"]
        && zpole.divisor == HoloPoly::var(&chart_vars(), 1);
    outcome(ok, format!("w base {w:?}, poles {poles:?}; z base {z:?}, poles {{{} = 0}}", zpole.divisor))
}

fn criterion_lifts() -> Outcome {
    let tower = BlowupTower::origin_tower(3);
    let g = ex::local_triple();
    let v = chart_vars();
    let (s, t) = (HoloPoly::var(&v, 0), HoloPoly::var(&v, 1));
    let mut problems = Vec::new();

    let u2 = g.lift(&tower, "U2'").unwrap();
    let (a, b) = u2.dehomogenize(2).unwrap();
    if a.num() * &t != &s * a.den() {
        problems.push(format!("first affine coordinate {a}"));
    }
    if &(&s.pow(2) * &t) * b.den() != b.num().clone() {
        problems.push(format!("second affine coordinate {b}"));
    }
    let base = u2.base_locus().unwrap();
    if base.points.len() != 1 || !base.points[0].iter().all(ExactComplex::is_zero) {
        problems.push(format!("U2' base locus {:?}", base.points));
    }
    for leaf in ["U3'", "U3''"] {
        let bl = g.lift(&tower, leaf).unwrap().base_locus().unwrap();
        if !bl.points.is_empty() {
            problems.push(format!("{leaf} base locus {:?}", bl.points));
        }
    }
    let origin_value = ProjectivePoint::new([ExactComplex::zero(), ExactComplex::zero(), ExactComplex::one()]).unwrap();
    let mut constant = 0;
    let mut moving = 0;
    for chart in tower.charts().iter().skip(1) {
        let lift = g.lift(&tower, &chart.id).unwrap();
        for (k, curve) in tower.exceptional_coords(&chart.id) {
            let c = lift.restrict_to_curve(k).unwrap().is_constant();
            if curve == "E3" {
                moving += 1;
                if c.constant {
                    problems.push(format!("{} constant on E3", chart.id));
                }
            } else {
                constant += 1;
                if !(c.constant && c.value.as_ref() == Some(&origin_value)) {
                    problems.push(format!("{} on {curve}: {:?}", chart.id, c.value));
                }
            }
        }
    }
    let ok = problems.is_empty();
    outcome(
        ok,
        if ok {
            format!("U2' lift ({a}, {b}); {constant} E1/E2 restrictions constant at affine (0, 0); {moving} E3 restrictions non-constant")
        } else {
            problems.join("; ")
        },
    )
}

fn criterion_cluster() -> Outcome {
    let mut parts = Vec::new();
    let mut ok = true;
    for plus in [false, true] {
        let p = if plus { ex::p_plus() } else { ex::p_minus() };
        let t = ex::cluster_target(plus);
        let start = Instant::now();
        let est = cluster_estimate(
            &ex::sphere_triple(),
            c64(&p),
            [t[0].to_c64(), t[1].to_c64(), t[2].to_c64()],
            &RADII,
            PHASES,
            TILTS,
            SEED,
        );
        let elapsed = start.elapsed();
        let at = est.distance_at(CLUSTER_RADIUS).unwrap_or(f64::INFINITY);
        ok &= at <= CLUSTER_TOL && est.decreasing && elapsed <= CLUSTER_TIME;
        parts.push(format!(
            "{}: eps({CLUSTER_RADIUS:e}) = {at:.3e} <= {CLUSTER_TOL:e}, decreasing {}, {:.2?}",
            if plus { "p+" } else { "p-" },
            est.decreasing,
            elapsed
        ));
    }
    outcome(ok, parts.join("; "))
}

fn model() -> RealHypersurface {
    RealHypersurface::new(ex::rho_model(), "U0").unwrap()
}

fn criterion_e2_trace() -> Outcome {
    let tower = BlowupTower::origin_tower(3);
    let (_, red) = proper_transform(&model(), &tower, "U2'").unwrap();
    let opts = TraceOptions::default();
    let set = red.exceptional_trace(0, &opts).unwrap();
    let h = set.hausdorff_to_annulus(1.0, opts.window);
    outcome(h <= HAUSDORFF_TOL, format!("Hausdorff {h:.3e} <= {HAUSDORFF_TOL:e}; trace {}", set.description))
}

fn criterion_e3_avoidance() -> Outcome {
    let tower = BlowupTower::origin_tower(3);
    let (_, red) = proper_transform(&model(), &tower, "U2'").unwrap();
    let r = AVOIDANCE_RADIUS;
    let region = Region { lo: [-3.0, -3.0, -r, -r], hi: [3.0, 3.0, r, r], ..Region::square(3.0) }
        .with_max_modulus([f64::INFINITY, r]);
    let mut rng = ChaCha8Rng::seed_from_u64(SEED);
    let f = |p: [Complex64; 2]| red.eval(p);
    let s = zero_set_sample(&f, &region, AVOIDANCE_ATTEMPTS, AVOIDANCE_ATTEMPTS, &mut rng);
    outcome(
        s.points.is_empty() && s.attempts == AVOIDANCE_ATTEMPTS,
        format!("{} points from {} attempts with |z2| <= {r}", s.points.len(), s.attempts),
    )
}

fn criterion_levi() -> Outcome {
    let tower = BlowupTower::origin_tower(3);
    let mut parts = Vec::new();
    let mut ok = true;
    let mut rng = ChaCha8Rng::seed_from_u64(SEED);
    for leaf in ["U2'", "U2''"] {
        let (total, red) = proper_transform(&model(), &tower, leaf).unwrap();
        let region = Region::square(3.0).with_min_modulus([LEVI_MARGIN; 2]);
        let f = |p: [Complex64; 2]| red.eval(p);
        let s = zero_set_sample(&f, &region, LEVI_SAMPLES, 100 * LEVI_SAMPLES, &mut rng);
        let min = s.points.iter().map(|&p| total.levi_form(p).unwrap_or(f64::NEG_INFINITY)).fold(f64::INFINITY, f64::min);
        ok &= s.points.len() >= LEVI_SAMPLES && min > 0.0;
        parts.push(format!("{leaf}: min {min:.3e} over {}", s.points.len()));
    }
    let sphere = RealHypersurface::new(ex::rho_sphere(), "w").unwrap();
    let pts = sphere_sample(LEVI_SAMPLES, &mut rng);
    let vals: Vec<f64> = pts.iter().map(|&p| sphere.levi_form(p).unwrap()).collect();
    let mean = vals.iter().sum::<f64>() / vals.len() as f64;
    let dev = vals.iter().map(|v| (v - mean).abs()).fold(0.0, f64::max);
    ok &= mean > 0.0 && dev <= SPHERE_LEVI_TOL;
    parts.push(format!("sphere: constant {mean:.6} within {dev:.1e}"));
    outcome(ok, parts.join("; "))
}

fn criterion_affine() -> Outcome {
    let f = ex::final_triple();
    let mut bounds = Vec::new();
    let mut worst_second = 0.0f64;
    let mut infinite = 0;
    for seed in 0..IMAGE_SEEDS {
        let mut rng = ChaCha8Rng::seed_from_u64(SEED + seed);
        let mut bound = 0.0f64;
        for w in sphere_sample(IMAGE_SAMPLES, &mut rng) {
            let z = f.eval_f64(&w);
            let (a, b) = (z[0] / z[2], z[1] / z[2]);
            if !(a.is_finite() && b.is_finite()) {
                infinite += 1;
                continue;
            }
            worst_second = worst_second.max(b.norm());
            bound = bound.max(a.norm()).max(b.norm());
        }
        bounds.push(bound);
    }
    let hi = bounds.iter().cloned().fold(0.0, f64::max);
    let lo = bounds.iter().cloned().fold(f64::INFINITY, f64::min);
    let spread = (hi - lo) / hi;
    outcome(
        infinite == 0 && worst_second <= IMAGE_BOUND && spread <= IMAGE_SPREAD,
        format!("{infinite} infinite; max |a2| {worst_second:.12}; bounds {bounds:.6?}, spread {spread:.2e}"),
    )
}

fn criterion_remark(ctx: &Context) -> Outcome {
    claims_pass(ctx, &["remark.hypersurface"])
}

fn criterion_determinism() -> Outcome {
    let cfg = Config { seed: SEED, ..Config::default() };
    let a = verify::run(&cfg, None).unwrap();
    let b = verify::run(&cfg, None).unwrap();
    let same = a.to_json() == b.to_json() && a.to_text() == b.to_text();
    let fails: Vec<&str> = a.claims.iter().filter(|c| c.verdict == Verdict::Fail).map(|c| c.claim_id.as_str()).collect();
    outcome(
        same && a.passed(),
        format!("byte-identical {same}, {} bytes; failing claims {fails:?}", a.to_json().len()),
    )
}

#[test]
fn acceptance_criteria() {
    let ctx = Context::new(Config { seed: SEED, ..Config::default() });
    let results: Vec<(&str, Outcome)> = vec![
        ("exact identity suite", criterion_identities(&ctx)),
        ("base locus and poles", criterion_base_locus()),
        ("lift behavior", criterion_lifts()),
        ("cluster singletons", criterion_cluster()),
        ("cluster set on E2", criterion_e2_trace()),
        ("E3 avoidance", criterion_e3_avoidance()),
        ("Levi positivity", criterion_levi()),
        ("affine containment", criterion_affine()),
        ("remark hypersurface", criterion_remark(&ctx)),
        ("determinism", criterion_determinism()),
    ];
    for (k, (name, o)) in results.iter().enumerate() {
        println!("criterion {:>2} {}: {} ({})", k + 1, if o.passed { "PASS" } else { "FAIL" }, name, o.detail);
    }
    let failed: Vec<usize> = results.iter().enumerate().filter(|(_, (_, o))| !o.passed).map(|(k, _)| k + 1).collect();
    assert!(failed.is_empty(), "failed criteria: {failed:?}");
}
