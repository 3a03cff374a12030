use std::cell::OnceCell;

use num_complex::Complex64;
use num_traits::{Signed, Zero};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use super::cluster::{cluster_estimate, sphere_ring};
use super::{ClaimResult, Cmp, Config, Mode, Witness};
use crate::algebra::{ExactComplex, HermPoly, HoloPoly, Polynomial, RationalExpr};
use crate::blowup::{chart_vars, BlowupTower};
use crate::example::{self as ex, Matrix3};
use crate::hypersurface::{
    cayley_exact, cayley_pullback, graph_sample, im_quotient_minus_one, proper_transform, sphere_sample,
    zero_set_sample, RealHypersurface, Region, TraceOptions, GRADIENT_FLOOR,
};
use crate::maps::{MapError, ProjectiveTriple};

pub const CLAIM_IDS: &[&str] = &[
    "construction.identities",
    "i.indeterminacy",
    "i.cluster-p-",
    "i.cluster-p+",
    "ii.tower-p-",
    "ii.tower-p+",
    "ii.no-curve-germ",
    "iii.line-avoidance",
    "iii.affine-form",
    "iii.proper-image",
    "remark.hypersurface",
];

pub fn conventions() -> Vec<String> {
    [
        "Levi form: L = sum rho_{i jbar} v_i conj(v_j) / |v|^2 with v = (-drho/dz2, drho/dz1); L > 0 means the side rho < 0 is strongly pseudoconvex",
        "chart distance: largest affine-coordinate difference in the standard chart where the target has its largest homogeneous coordinate",
        "p+ is reduced to p- by sigma(w) = (w1, -w2), which preserves the sphere and satisfies F o sigma = A F",
        "the value of the map at p- is the constant value [0:0:1] of the lifted map on E1 and E2 (affine (0, 0))",
        "claim ii is verified via proof ingredients: strong pseudoconvexity off E1, E2 and constancy of the lift on E1, E2",
        "the hypersurface of the remark is read in image coordinates (u1, u2, u3) with y_j = Im u_j",
        "reduced equations divide the pullback by |e|^(2 ceil(nu/2)) for each exceptional coordinate e vanishing to order nu",
    ]
    .iter()
    .map(|s| s.to_string())
    .collect()
}

/// Exact scalar in plain notation: `-1/2`, `2i`, `1-1/3i`.
fn show(c: &ExactComplex) -> String {
    let (re, im) = (c.re(), c.im());
    if im.is_zero() {
        re.to_string()
    } else if re.is_zero() {
        format!("{im}i")
    } else {
        format!("{re}{}{}i", if im.is_negative() { "-" } else { "+" }, im.abs())
    }
}

fn show_point(p: &[ExactComplex]) -> String {
    format!("({})", p.iter().map(show).collect::<Vec<_>>().join(", "))
}

fn show_proj(p: &[ExactComplex]) -> String {
    format!("[{}]", p.iter().map(show).collect::<Vec<_>>().join(" : "))
}

fn show_set(mut pts: Vec<String>) -> String {
    if pts.is_empty() {
        return "∅".into();
    }
    pts.sort();
    format!("{{{}}}", pts.join(", "))
}

fn triple_residual(a: &ProjectiveTriple, b: &ProjectiveTriple) -> (String, usize) {
    let d: Vec<HoloPoly> = (0..3).map(|k| &a.components()[k] - &b.components()[k]).collect();
    let terms = d.iter().map(HoloPoly::n_terms).sum();
    (format!("[{} : {} : {}]", d[0], d[1], d[2]), terms)
}

fn triple_identity(label: &str, a: Result<ProjectiveTriple, MapError>, b: &ProjectiveTriple) -> Witness {
    match a {
        Ok(a) => {
            let (r, t) = triple_residual(&a, b);
            Witness::identity(label, r, t)
        }
        Err(e) => Witness::exact(label, format!("error: {e}"), b),
    }
}

fn herm_identity(label: &str, residual: HermPoly) -> Witness {
    let t = residual.n_terms();
    Witness::identity(label, residual, t)
}

fn holo_identity(label: &str, residual: HoloPoly) -> Witness {
    let t = residual.n_terms();
    Witness::identity(label, residual, t)
}

fn rational_identity<P: Polynomial>(label: &str, a: &RationalExpr<P>, b: &RationalExpr<P>) -> Witness {
    match a.cross_residual(b) {
        Ok(r) => Witness::identity(label, &r, r.n_terms()),
        Err(e) => Witness::exact(label, format!("error: {e}"), "0"),
    }
}

fn negate(r: &RationalExpr<HermPoly>) -> RationalExpr<HermPoly> {
    RationalExpr::new(r.num().scale(&ExactComplex::int(-1, 0)), r.den().clone()).expect("nonzero denominator")
}

fn apply_form(form: &[ExactComplex; 3], t: &ProjectiveTriple) -> HoloPoly {
    form.iter()
        .zip(t.components())
        .fold(HoloPoly::zero(t.vars()), |acc, (c, p)| &acc + &p.scale(c))
}

fn form_at(form: &[ExactComplex; 3], p: &[ExactComplex; 3]) -> ExactComplex {
    form.iter().zip(p).fold(ExactComplex::zero(), |acc, (a, b)| &acc + &(a * b))
}

fn c64(p: &[ExactComplex; 2]) -> [Complex64; 2] {
    [p[0].to_c64(), p[1].to_c64()]
}

fn c64_3(p: &[ExactComplex; 3]) -> [Complex64; 3] {
    [p[0].to_c64(), p[1].to_c64(), p[2].to_c64()]
}

/// Shared state of one verification run; expensive numeric parts are
/// computed at most once.
pub struct Context {
    cfg: Config,
    tower: BlowupTower,
    model: RealHypersurface,
    numeric: OnceCell<Vec<Witness>>,
    towers: [OnceCell<ClaimResult>; 2],
}

mod stream {
    pub const CLUSTER: u64 = 1;
    pub const AVOID: u64 = 2;
    pub const LEVI: u64 = 3;
    pub const SMOOTH: u64 = 5;
    pub const SPHERE_LEVI: u64 = 6;
    pub const LINE: u64 = 7;
    pub const IMAGE: u64 = 8;
    pub const REMARK: u64 = 16;
}

impl Context {
    pub fn new(cfg: Config) -> Self {
        Self {
            cfg,
            tower: BlowupTower::origin_tower(3),
            model: RealHypersurface::new(ex::rho_model(), "U0").expect("model hypersurface is real"),
            numeric: OnceCell::new(),
            towers: [OnceCell::new(), OnceCell::new()],
        }
    }

    fn rng(&self, stream: u64) -> ChaCha8Rng {
        let mut r = ChaCha8Rng::seed_from_u64(self.cfg.seed);
        r.set_stream(stream);
        r
    }

    pub fn claim(&self, id: &str) -> ClaimResult {
        match id {
            "construction.identities" => self.identities(),
            "i.indeterminacy" => self.indeterminacy(),
            "i.cluster-p-" => self.cluster(false),
            "i.cluster-p+" => self.cluster(true),
            "ii.tower-p-" => self.tower_claim(false).clone(),
            "ii.tower-p+" => self.tower_claim(true).clone(),
            "ii.no-curve-germ" => self.no_curve_germ(),
            "iii.line-avoidance" => self.line_avoidance(),
            "iii.affine-form" => self.affine_form(),
            "iii.proper-image" => self.proper_image(),
            "remark.hypersurface" => self.remark(),
            other => panic!("unknown claim {other}"),
        }
    }

    fn identities(&self) -> ClaimResult {
        let v = chart_vars();
        let (z1, z2) = (HoloPoly::var(&v, 0), HoloPoly::var(&v, 1));
        let abs = HermPoly::abs_sq;
        let im = HermPoly::im_of;
        let rho = ex::rho_model();
        let mut w = Vec::new();

        let expected = [
            ("U1'", "|z1|^2 - Im(z1 z2)", &abs(&z1) - &im(&(&z1 * &z2))),
            ("U1''", "|z1|^2|z2|^2 - Im z2", &abs(&(&z1 * &z2)) - &im(&z2)),
            ("U2'", "|z1|^2 - Im(z1^2 z2)", &abs(&z1) - &im(&(&z1.pow(2) * &z2))),
            ("U2''", "|z1|^2|z2|^2 - Im(z1 z2^2)", &abs(&(&z1 * &z2)) - &im(&(&z1 * &z2.pow(2)))),
        ];
        for (leaf, text, e) in expected {
            let label = format!("pullback of rho to {leaf} is {text}");
            match self.tower.pullback_herm(leaf, &rho) {
                Ok(p) => w.push(herm_identity(&label, &p - &e)),
                Err(err) => w.push(Witness::exact(label, format!("error: {err}"), text)),
            }
        }

        let hz = HermPoly::from_holo;
        let cz = HermPoly::conj_of;
        let reduced = [
            ("U1'", "Im(z2 / conj z1) = 1", hz(&z2), cz(&z1)),
            ("U2'", "Im((z1 / conj z1) z2) = 1", hz(&(&z1 * &z2)), cz(&z1)),
            ("U2''", "Im((z2 / conj z2) (1 / conj z1)) = 1", hz(&z2), cz(&(&z1 * &z2))),
        ];
        for (leaf, text, p, q) in reduced {
            match proper_transform(&self.model, &self.tower, leaf) {
                Ok((_, red)) => {
                    w.push(herm_identity(
                        &format!("reduced equation in {leaf} times |e|^2k equals the pullback"),
                        red.identity_residual(),
                    ));
                    let displayed = im_quotient_minus_one(&p, &q).expect("nonzero denominator");
                    w.push(rational_identity(
                        &format!("reduced equation in {leaf} is {text} (cleared, opposite sign)"),
                        red.expr(),
                        &negate(&displayed),
                    ));
                }
                Err(err) => w.push(Witness::exact(format!("reduced equation in {leaf}"), format!("error: {err}"), text)),
            }
        }

        match cayley_pullback(&rho) {
            Ok((p, _)) => w.push(herm_identity("|1-w2|^2 rho(R(w)) = |w1|^2 + |w2|^2 - 1", &p - &ex::rho_sphere())),
            Err(e) => w.push(Witness::exact("Cayley identity", format!("error: {e}"), "0")),
        }

        w.push(triple_identity(
            "homogenized local map is [z1^3 : z2^2 : z2]",
            ProjectiveTriple::homogenize(&ex::local_map()),
            &ex::local_triple(),
        ));
        w.push(triple_identity(
            "[z1^3 : z2^2 : z2] o R = [w1^3 : -(1+w2)^2(1-w2) : i(1+w2)(1-w2)^2]",
            ex::local_triple().compose_source(&ex::cayley_map()),
            &ex::sphere_triple(),
        ));

        let f = ex::sphere_triple();
        w.push(holo_identity(
            "zeta2 - i zeta1 = 2i(1 - w2^2)",
            &apply_form(&ex::line_form(), &f) - &ex::line_value(),
        ));
        let wv = ex::w_vars();
        let (w2, one) = (HoloPoly::var(&wv, 1), HoloPoly::one(&wv));
        let (p, m) = (&one + &w2, &one - &w2);
        let lhs = &(&p * &m.pow(2)) + &(&p.pow(2) * &m);
        w.push(holo_identity(
            "(1+w2)(1-w2)^2 + (1+w2)^2(1-w2) = 2(1 - w2^2)",
            &lhs - &(&one - &w2.pow(2)).scale(&ExactComplex::int(2, 0)),
        ));

        w.push(triple_identity(
            "xi change gives [w1^3 : -(1+w2)(1-w2^2) : 2i(1-w2^2)]",
            f.compose_target(&ex::xi_change()),
            &ex::final_triple(),
        ));
        w.extend(self.affine_identities());

        match (f.compose_source(&ex::reflection()), f.compose_target(&ex::swap_matrix())) {
            (Ok(a), Ok(b)) => {
                let (r, t) = triple_residual(&a, &b);
                w.push(Witness::identity("F o sigma = A F", r, t));
            }
            (Err(e), _) | (_, Err(e)) => w.push(Witness::exact("F o sigma = A F", format!("error: {e}"), "0")),
        }
        w.push(herm_identity("sigma preserves the sphere", self.sphere_reflection_residual()));

        let det = ex::local_triple().rank_determinant();
        w.push(Witness::exact(
            "generic rank two: det[P; dP/dz1; dP/dz2] is not identically zero",
            if det.is_zero() { "zero" } else { "nonzero" },
            "nonzero",
        ));
        ClaimResult::new(
            "construction.identities",
            Mode::Symbolic,
            "blow-up pullbacks, reduced equations, Cayley transform, composed and final forms of the map",
            w,
        )
    }

    fn sphere_reflection_residual(&self) -> HermPoly {
        let (a, b) = ex::reflection();
        let s = ex::rho_sphere();
        let pulled = s.compose(&[a.num().clone(), b.num().clone()]).expect("matching variables");
        &pulled - &s
    }

    fn affine_identities(&self) -> Vec<Witness> {
        let (ea, eb) = ex::final_affine();
        match ex::final_triple().dehomogenize(2) {
            Ok((a, b)) => vec![
                rational_identity("first affine coordinate is -(i/2) w1^3 / (1 - w2^2)", &a, &ea),
                rational_identity("second affine coordinate is (i/2)(1 + w2)", &b, &eb),
            ],
            Err(e) => vec![Witness::exact("affine form", format!("error: {e}"), "")],
        }
    }

    fn indeterminacy(&self) -> ClaimResult {
        let mut w = Vec::new();
        let models = [
            ("w-form", ex::sphere_triple(), "{(0, -1), (0, 1)}", "{w2 = -1} ∪ {w2 = 1}"),
            ("z-model", ex::local_triple(), "{(0, 0)}", "{z2 = 0}"),
        ];
        for (name, f, pts, poles) in models {
            match f.base_locus() {
                Ok(bl) => {
                    w.push(Witness::exact(
                        format!("{name}: base locus"),
                        show_set(bl.points.iter().map(|p| show_point(p)).collect()),
                        pts,
                    ));
                    let all_zero = bl.certificates.iter().all(|c| c.iter().all(ExactComplex::is_zero));
                    w.push(Witness::exact(
                        format!("{name}: every component vanishes at every base point"),
                        all_zero,
                        true,
                    ));
                    let nonzero = bl.eliminants.len() == 2 && bl.eliminants.iter().all(|(_, p)| !p.is_zero());
                    let shown = bl.eliminants.iter().map(|(v, p)| format!("{v}: {p}")).collect::<Vec<_>>().join("; ");
                    let mut wit = Witness::exact(
                        format!("{name}: eliminants in both variables are nonzero (finite base locus)"),
                        shown,
                        if nonzero { "two nonzero eliminants" } else { "a zero or missing eliminant" },
                    );
                    wit.passed = nonzero;
                    w.push(wit);
                    w.push(Witness::exact(
                        format!("{name}: unresolved candidate coordinates"),
                        bl.unresolved.len(),
                        0,
                    ));
                }
                Err(e) => w.push(Witness::exact(format!("{name}: base locus"), format!("error: {e}"), pts)),
            }
            let pd = f.pole_divisor(2);
            let desc = if pd.is_empty() {
                "∅".to_owned()
            } else if pd.hyperplanes.is_empty() {
                format!("{{{} = 0}}", pd.divisor)
            } else {
                let mut parts: Vec<String> =
                    pd.hyperplanes.iter().map(|(v, c)| format!("{{{v} = {}}}", show(c))).collect();
                parts.sort();
                parts.join(" ∪ ")
            };
            w.push(Witness::exact(format!("{name}: poles (zero set of component 2)"), desc, poles));
            w.push(Witness::exact(
                format!("{name}: pole divisor is the third component"),
                &pd.divisor,
                &f.components()[2],
            ));
        }
        ClaimResult::new(
            "i.indeterminacy",
            Mode::Symbolic,
            "indeterminacy set {p+, p-} = {(0, 1), (0, -1)}; divisor of poles {w2 = ±1}; local model has only (0, 0) and poles {z2 = 0}",
            w,
        )
    }

    fn schedule(&self) -> Vec<f64> {
        let mut r = self.cfg.radii.clone();
        r.push(self.cfg.cluster_radius);
        r.sort_by(|a, b| b.total_cmp(a));
        r.dedup();
        r
    }

    fn cluster(&self, plus: bool) -> ClaimResult {
        let (point, id) = if plus { (ex::p_plus(), "i.cluster-p+") } else { (ex::p_minus(), "i.cluster-p-") };
        let target = ex::cluster_target(plus);
        let est = cluster_estimate(
            &ex::sphere_triple(),
            c64(&point),
            c64_3(&target),
            &self.schedule(),
            self.cfg.phases,
            self.cfg.tilts,
            self.cfg.seed ^ (stream::CLUSTER << 32) ^ plus as u64,
        );
        let n = est.rows.first().map_or(0, |r| r.samples);
        let at = est.distance_at(self.cfg.cluster_radius).unwrap_or(f64::INFINITY);
        let mut w = vec![
            Witness::numeric(
                format!("max chart distance to {} at radius {:e}", show_proj(&target), self.cfg.cluster_radius),
                at,
                Cmp::Le,
                self.cfg.cluster,
                n,
            ),
            Witness::exact("distance strictly decreases along the radii schedule", est.decreasing, true),
        ];
        if let Some(rate) = est.decay_rate {
            w.push(Witness::numeric("fitted decay rate of the distance in r", rate, Cmp::Ge, 0.5, est.rows.len()).advisory());
        }
        let mut c = ClaimResult::new(
            id,
            Mode::Numeric,
            if plus {
                "the full image of the sphere at p+ is the singleton [0:1:0]"
            } else {
                "the full image of the sphere at p- is the singleton [0:0:1]"
            },
            w,
        );
        c.cluster = Some(est);
        c
    }

    fn tower_claim(&self, plus: bool) -> &ClaimResult {
        self.towers[plus as usize].get_or_init(|| self.build_tower_claim(plus))
    }

    fn build_tower_claim(&self, plus: bool) -> ClaimResult {
        let (g, side) = if plus {
            (ex::local_triple().compose_target(&ex::swap_matrix()).expect("invertible"), "p+")
        } else {
            (ex::local_triple(), "p-")
        };
        let target = show_proj(&ex::cluster_target(plus));
        let mut w = Vec::new();
        if plus {
            w.extend(self.symmetry_witnesses());
        }
        for chart in self.tower.charts().iter().skip(1) {
            let lift = match g.lift(&self.tower, &chart.id) {
                Ok(l) => l,
                Err(e) => {
                    w.push(Witness::exact(format!("lift to {}", chart.id), format!("error: {e}"), "holomorphic lift"));
                    continue;
                }
            };
            for (k, curve) in self.tower.exceptional_coords(&chart.id) {
                let restricted = lift.restrict_to_curve(k);
                let value = match &restricted {
                    Ok(r) => {
                        let c = r.is_constant();
                        match c.value {
                            Some(v) if c.constant => show_proj(v.coords()),
                            _ if c.constant => "constant".into(),
                            _ => "non-constant".into(),
                        }
                    }
                    Err(e) => format!("error: {e}"),
                };
                if curve == "E3" {
                    w.push(Witness::exact(format!("(b) lift {lift} in {} on {curve}", chart.id), value, "non-constant"));
                } else {
                    w.push(Witness::exact(format!("(a) lift {lift} in {} on {curve}", chart.id), value, &target));
                }
            }
            let centers: Vec<String> = self
                .tower
                .steps()
                .iter()
                .filter(|s| s.chart == chart.id)
                .map(|s| show_point(&s.center))
                .collect();
            let label = format!("(c) base locus of the lift in {} lies in the later centers {}", chart.id, show_set(centers.clone()));
            match lift.base_locus() {
                Ok(bl) => {
                    let pts: Vec<String> = bl.points.iter().map(|p| show_point(p)).collect();
                    let confined = bl.unresolved.is_empty() && pts.iter().all(|p| centers.contains(p));
                    let mut wit = Witness::exact(label, show_set(pts), if confined { "confined" } else { "not confined" });
                    wit.passed = confined;
                    w.push(wit);
                }
                Err(e) => w.push(Witness::exact(label, format!("error: {e}"), "finite")),
            }
        }
        let shared = self.numeric.get_or_init(|| self.tower_numeric());
        for s in shared {
            let mut s = s.clone();
            if plus {
                s.label = format!("{} (same hypersurface by the reflection)", s.label);
            }
            w.push(s);
        }
        ClaimResult::new(
            if plus { "ii.tower-p+" } else { "ii.tower-p-" },
            Mode::Both,
            &format!(
                "three blow-ups over {side}: lift constant {target} on E1, E2 and non-constant on E3; M2 meets E2 in {{z1 = 0, |z2| >= 1}}; M3 misses E3; strongly pseudoconvex off E1, E2"
            ),
            w,
        )
    }

    fn symmetry_witnesses(&self) -> Vec<Witness> {
        let f = ex::sphere_triple();
        let mut w = Vec::new();
        match (f.compose_source(&ex::reflection()), f.compose_target(&ex::swap_matrix())) {
            (Ok(a), Ok(b)) => {
                let (r, t) = triple_residual(&a, &b);
                w.push(Witness::identity("F o sigma = A F with sigma(w) = (w1, -w2)", r, t));
            }
            (Err(e), _) | (_, Err(e)) => w.push(Witness::exact("F o sigma = A F", format!("error: {e}"), "0")),
        }
        w.push(herm_identity("sigma preserves the sphere", self.sphere_reflection_residual()));
        let sp = [ex::p_plus()[0].clone(), -&ex::p_plus()[1]];
        let z = cayley_exact(&sp).map(|z| show_point(&z)).unwrap_or_else(|e| e.to_string());
        w.push(Witness::exact("R(sigma(p+)) is the origin", z, "(0, 0)"));
        w
    }

    /// (d)-(g): the numeric facts about the transforms of the sphere, shared by both towers.
    fn tower_numeric(&self) -> Vec<Witness> {
        let cfg = &self.cfg;
        let mut w = Vec::new();
        let opts = TraceOptions {
            radius: cfg.trace_radius,
            phases: cfg.phases,
            window: cfg.window,
            spacing: cfg.trace_spacing,
        };
        let u2 = proper_transform(&self.model, &self.tower, "U2'");
        match &u2 {
            Ok((_, red)) => match red.exceptional_trace(0, &opts) {
                Ok(set) => {
                    w.push(Witness::numeric(
                        format!("(d) Hausdorff distance of the E2 trace to {{z1 = 0, 1 <= |z2| <= {}}}", cfg.window),
                        set.hausdorff_to_annulus(1.0, cfg.window),
                        Cmp::Le,
                        cfg.hausdorff,
                        set.grid_points,
                    ));
                    w.push(Witness::numeric(
                        "(d) smallest |z2| on the E2 trace",
                        set.samples.iter().map(|c| c.norm()).fold(f64::INFINITY, f64::min),
                        Cmp::Ge,
                        1.0 - cfg.trace_spacing,
                        set.samples.len(),
                    ));
                }
                Err(e) => w.push(Witness::exact("(d) E2 trace", format!("error: {e}"), "annulus")),
            },
            Err(e) => w.push(Witness::exact("(d) E2 trace", format!("error: {e}"), "annulus")),
        }

        if let Ok((_, red)) = &u2 {
            let r = cfg.avoidance_radius;
            let region = Region { lo: [-cfg.window, -cfg.window, -r, -r], hi: [cfg.window, cfg.window, r, r], ..Region::square(cfg.window) }
                .with_max_modulus([f64::INFINITY, r]);
            let f = |p: [Complex64; 2]| red.eval(p);
            let mut rng = self.rng(stream::AVOID);
            let out = zero_set_sample(&f, &region, cfg.avoidance_attempts, cfg.avoidance_attempts, &mut rng);
            w.push(Witness::numeric(
                format!("(e) M2 points found in U2' with |z2| <= {r}"),
                out.points.len() as f64,
                Cmp::Le,
                0.0,
                out.attempts,
            ));
        }
        let coarse = TraceOptions { spacing: (cfg.trace_spacing * 4.0).max(0.03), ..opts };
        for (leaf, coord) in [("U3'", 0usize), ("U3''", 1usize)] {
            match proper_transform(&self.model, &self.tower, leaf).map(|(_, r)| r.exceptional_trace(coord, &coarse)) {
                Ok(Ok(set)) => w.push(Witness::numeric(
                    format!("(e) points of E3 in {leaf} that are limits of M3"),
                    set.samples.len() as f64,
                    Cmp::Le,
                    0.0,
                    set.grid_points,
                )),
                Ok(Err(e)) | Err(e) => w.push(Witness::exact(format!("(e) E3 trace in {leaf}"), format!("error: {e}"), "∅")),
            }
        }

        let mut rng = self.rng(stream::LEVI);
        for leaf in ["U2'", "U2''"] {
            match proper_transform(&self.model, &self.tower, leaf) {
                Ok((total, red)) => {
                    let region = Region::square(cfg.window).with_min_modulus([cfg.levi_margin; 2]);
                    let f = |p: [Complex64; 2]| red.eval(p);
                    let out = zero_set_sample(&f, &region, cfg.samples, 100 * cfg.samples, &mut rng);
                    let min = out
                        .points
                        .iter()
                        .map(|&p| total.levi_form(p).unwrap_or(f64::NEG_INFINITY))
                        .fold(f64::INFINITY, f64::min);
                    w.push(Witness::numeric(
                        format!("(f) M2 samples in {leaf} off E1, E2"),
                        out.points.len() as f64,
                        Cmp::Ge,
                        cfg.samples as f64,
                        out.attempts,
                    ));
                    w.push(Witness::numeric(format!("(f) minimum Levi value in {leaf}"), min, Cmp::Gt, 0.0, out.points.len()));
                }
                Err(e) => w.push(Witness::exact(format!("(f) Levi form in {leaf}"), format!("error: {e}"), "positive")),
            }
        }
        let sphere = RealHypersurface::new(ex::rho_sphere(), "w").expect("sphere is real");
        let mut rng = self.rng(stream::SPHERE_LEVI);
        let pts = sphere_sample(cfg.samples, &mut rng);
        let dev = pts
            .iter()
            .map(|&p| (sphere.levi_form(p).unwrap_or(f64::NAN) - 1.0).abs())
            .fold(0.0, |a: f64, b| if b.is_nan() { f64::INFINITY } else { a.max(b) });
        w.push(Witness::numeric(
            "(f) sphere |w|^2 - 1: largest deviation of the Levi value from 1",
            dev,
            Cmp::Le,
            cfg.sphere_levi,
            pts.len(),
        ));

        match proper_transform(&self.model, &self.tower, "U1''") {
            Ok((total, red)) => {
                let v = chart_vars();
                let on_e1 = total
                    .rho()
                    .compose(&[HoloPoly::var(&v, 0), HoloPoly::zero(&v)])
                    .expect("matching variables");
                w.push(herm_identity("(g) E1 lies in M1 in U1'': rho vanishes on {z2 = 0}", on_e1));
                let f = |p: [Complex64; 2]| Some(total.eval(p));
                let mut rng = self.rng(stream::SMOOTH);
                let out = zero_set_sample(&f, &Region::square(cfg.window), cfg.samples, 100 * cfg.samples, &mut rng);
                let min = out.points.iter().map(|&p| total.gradient(p).norm()).fold(f64::INFINITY, f64::min);
                w.push(Witness::numeric(
                    "(g) smallest gradient norm on M1 in U1''",
                    min,
                    Cmp::Gt,
                    GRADIENT_FLOOR,
                    out.points.len(),
                ));
                match red.exceptional_trace(1, &coarse) {
                    Ok(set) => w.push(
                        Witness::exact(
                            "(g) every point of E1 in U1'' is a limit of M1 minus E1 (sampled)",
                            set.covers_window(),
                            true,
                        )
                        .advisory(),
                    ),
                    Err(e) => w.push(Witness::exact("(g) E1 trace", format!("error: {e}"), "whole window").advisory()),
                }
            }
            Err(e) => w.push(Witness::exact("(g) M1 in U1''", format!("error: {e}"), "smooth")),
        }
        w
    }

    fn no_curve_germ(&self) -> ClaimResult {
        let mut w = Vec::new();
        for plus in [false, true] {
            let t = self.tower_claim(plus);
            let side = if plus { "p+" } else { "p-" };
            for (tag, what) in [
                ("(a)", "lift constant on E1 and E2"),
                ("(b)", "lift non-constant on E3"),
                ("(f)", "strong pseudoconvexity off E1 and E2"),
            ] {
                let sub: Vec<&Witness> = t.witnesses.iter().filter(|x| x.label.starts_with(tag)).collect();
                let ok = !sub.is_empty() && sub.iter().all(|x| x.passed);
                w.push(Witness::exact(format!("{side} {tag} {what}"), if ok { "holds" } else { "fails" }, "holds"));
            }
        }
        ClaimResult::new(
            "ii.no-curve-germ",
            Mode::Both,
            "verified via proof ingredients: a curve germ in the image would lift into the proper transform of the sphere, which is strongly pseudoconvex off E1, E2, where the lift is constant",
            w,
        )
    }

    /// Sphere samples plus rings around both indeterminacy points.
    fn image_sources(&self, rng: &mut ChaCha8Rng, count: usize) -> Vec<[Complex64; 2]> {
        let mut pts = sphere_sample(count, rng);
        for p in [ex::p_minus(), ex::p_plus()] {
            for &r in &self.schedule() {
                pts.extend(sphere_ring(c64(&p), r, self.cfg.phases, self.cfg.tilts, rng));
            }
        }
        pts
    }

    fn line_avoidance(&self) -> ClaimResult {
        let f = ex::sphere_triple();
        let form = ex::line_form();
        let mut w = vec![holo_identity(
            "zeta2 - i zeta1 = 2i(1 - w2^2) along the map",
            &apply_form(&form, &f) - &ex::line_value(),
        )];
        for (name, plus, expected) in [("[0:0:1]", false, "1"), ("[0:1:0]", true, "-1i")] {
            let v = form_at(&form, &ex::cluster_target(plus));
            w.push(Witness::exact(format!("zeta2 - i zeta1 at the limit value {name} (nonzero: off L)"), show(&v), expected));
        }
        let mut rng = self.rng(stream::LINE);
        let pts = self.image_sources(&mut rng, self.cfg.line_samples);
        let lf = c64_3(&form);
        let mut delta = f64::INFINITY;
        let mut on_line = 0usize;
        for p in &pts {
            let z = f.eval_f64(p);
            let l = (lf[0] * z[0] + lf[1] * z[1] + lf[2] * z[2]).norm();
            let m = z.iter().map(|c| c.norm()).fold(0.0, f64::max);
            if l == 0.0 {
                on_line += 1;
            }
            delta = delta.min(l / m);
        }
        w.push(Witness::numeric("sphere samples lying on L", on_line as f64, Cmp::Le, 0.0, pts.len()));
        w.push(Witness::numeric(
            "empirical delta = min |zeta2 - i zeta1| / max |zeta_k|",
            delta,
            Cmp::Gt,
            0.0,
            pts.len(),
        ));
        ClaimResult::new(
            "iii.line-avoidance",
            Mode::Both,
            "the proper image of the sphere avoids the line L = {zeta2 - i zeta1 = 0}",
            w,
        )
    }

    fn affine_form(&self) -> ClaimResult {
        let f = ex::sphere_triple();
        let mut w = vec![triple_identity(
            "xi change gives [w1^3 : -(1+w2)(1-w2^2) : 2i(1-w2^2)]",
            f.compose_target(&ex::xi_change()),
            &ex::final_triple(),
        )];
        w.extend(self.affine_identities());
        let pt = [ExactComplex::one(), ExactComplex::zero()];
        let (a, b) = ex::final_affine();
        let aff = |r: &RationalExpr<HoloPoly>| r.num().eval(&pt).checked_div(&r.den().eval(&pt)).expect("regular point");
        let z = ex::final_triple().eval(&pt);
        let chart = [z[0].checked_div(&z[2]).expect("nonzero"), z[1].checked_div(&z[2]).expect("nonzero")];
        w.push(Witness::exact("homogeneous value at (1, 0)", show_proj(&z), "[1 : -1 : 2i]"));
        w.push(Witness::exact("affine value at (1, 0)", show_point(&[aff(&a), aff(&b)]), show_point(&chart)));
        ClaimResult::new(
            "iii.affine-form",
            Mode::Symbolic,
            "after xi = (zeta0, zeta1, zeta2 - i zeta1) the map is (-(i/2) w1^3/(1 - w2^2), (i/2)(1 + w2))",
            w,
        )
    }

    fn proper_image(&self) -> ClaimResult {
        let f = ex::final_triple();
        let xi = ex::xi_change();
        let mut w = Vec::new();
        let mut bounds = Vec::new();
        let mut at_infinity = 0usize;
        let mut second = 0.0f64;
        let mut total = 0usize;
        for s in 0..self.cfg.image_seeds.max(1) {
            let mut rng = self.rng(stream::IMAGE + ((s as u64) << 8));
            let pts = self.image_sources(&mut rng, self.cfg.image_samples);
            total += pts.len();
            let mut bound = 0.0f64;
            for p in &pts {
                let z = f.eval_f64(p);
                let (a, b) = (z[0] / z[2], z[1] / z[2]);
                if !(a.is_finite() && b.is_finite()) {
                    at_infinity += 1;
                    continue;
                }
                bound = bound.max(a.norm()).max(b.norm());
                second = second.max(b.norm());
            }
            bounds.push(bound);
        }
        w.push(Witness::numeric("samples sent to the line at infinity", at_infinity as f64, Cmp::Le, 0.0, total));
        w.push(Witness::numeric("largest |second affine coordinate|", second, Cmp::Le, 1.0 + 1e-12, total));
        let (lo, hi) = bounds.iter().fold((f64::INFINITY, 0.0f64), |(l, h), &b| (l.min(b), h.max(b)));
        w.push(Witness::numeric("overall bound max(|a1|, |a2|)", hi, Cmp::Le, 1.0 + 1e-12, total));
        w.push(Witness::numeric(
            format!("relative spread of the bound over {} seeds", bounds.len()),
            (hi - lo) / hi,
            Cmp::Le,
            self.cfg.image_stability,
            bounds.len(),
        ));

        let pt = [ExactComplex::one(), ExactComplex::zero()];
        let z = f.eval(&pt);
        let img = [z[0].checked_div(&z[2]).expect("nonzero"), z[1].checked_div(&z[2]).expect("nonzero")];
        w.push(Witness::exact("image of (1, 0)", show_point(&img), "(-1/2i, 1/2i)"));

        let smallest = *self.schedule().last().expect("nonempty schedule");
        for plus in [false, true] {
            let limit = mat_apply(&xi, &ex::cluster_target(plus));
            let la = [
                limit[0].checked_div(&limit[2]).expect("limit is affine"),
                limit[1].checked_div(&limit[2]).expect("limit is affine"),
            ];
            let p = if plus { ex::p_plus() } else { ex::p_minus() };
            let mut rng = self.rng(stream::IMAGE + 0x1000 + plus as u64);
            let ring = sphere_ring(c64(&p), smallest, self.cfg.phases, self.cfg.tilts, &mut rng);
            let target = [la[0].to_c64(), la[1].to_c64()];
            let d = ring
                .iter()
                .map(|q| {
                    let z = f.eval_f64(q);
                    (z[0] / z[2] - target[0]).norm().max((z[1] / z[2] - target[1]).norm())
                })
                .fold(0.0, f64::max);
            w.push(Witness::numeric(
                format!(
                    "images at radius {smallest:e} from {} approach the affine point {}",
                    if plus { "p+" } else { "p-" },
                    show_point(&la)
                ),
                d,
                Cmp::Le,
                self.cfg.cluster,
                ring.len(),
            ));
        }
        ClaimResult::new(
            "iii.proper-image",
            Mode::Numeric,
            "the proper image of the sphere is a compact subset of the affine part P2 minus L",
            w,
        )
    }

    fn remark(&self) -> ClaimResult {
        let mut w = Vec::new();
        let k = ex::remark_hypersurface();
        let (nums, den) = ex::remark_map();
        let rho = ex::rho_model();
        match k.compose_rational(&nums, &den) {
            Ok((kf, _)) => match kf.div_exact(&rho) {
                Some(q) => w.push(herm_identity(
                    "y3 + y2^3 - |u1 u2|^2 along the map is a multiple of rho (vanishes on M)",
                    &kf - &(&rho * &q),
                )),
                None => w.push(Witness::exact("remark residual on M", "not divisible by rho", "0")),
            },
            Err(e) => w.push(Witness::exact("remark residual on M", format!("error: {e}"), "0")),
        }
        let uv = ex::u_vars();
        let on_c = k
            .compose(&[HoloPoly::var(&uv, 0), HoloPoly::zero(&uv), HoloPoly::zero(&uv)])
            .expect("matching variables");
        w.push(herm_identity("defining function vanishes on C = {u2 = u3 = 0}", on_c));
        let dy3 = (&k.d_hol(2) - &k.d_anti(2)).scale(&ExactComplex::i());
        w.push(herm_identity("d/dy3 of the defining function is 1", &dy3 - &HermPoly::one(&uv)));

        let region = Region::square(1.5).with_min_modulus([0.0, 1e-6]);
        let mut rng = self.rng(stream::REMARK);
        let pts = graph_sample(&region, self.cfg.samples, &mut rng);
        let eval = k.compile();
        let worst = pts
            .iter()
            .map(|p| {
                let u = [p[0].powu(3) / p[1], p[1], Complex64::new(0.0, 0.0)];
                eval.eval_re(&u).abs()
            })
            .fold(0.0, f64::max);
        w.push(Witness::numeric("largest |y3 + y2^3 - |u1 u2|^2| on samples of M", worst, Cmp::Le, self.cfg.residual, pts.len()));
        ClaimResult::new(
            "remark.hypersurface",
            Mode::Both,
            "as a map to C^3, (z1^3/z2, z2, 0) takes M into {y3 + y2^3 - |u1 u2|^2 = 0}, which contains the curve {u2 = u3 = 0}",
            w,
        )
    }
}

fn mat_apply(a: &Matrix3, p: &[ExactComplex; 3]) -> [ExactComplex; 3] {
    a.clone().map(|row| form_at(&row, p))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::verify::Verdict;

    fn small() -> Config {
        Config {
            samples: 300,
            avoidance_attempts: 2_000,
            line_samples: 2_000,
            image_samples: 2_000,
            trace_spacing: 0.03,
            hausdorff: 0.06,
            phases: 24,
            tilts: 3,
            ..Config::default()
        }
    }

    #[test]
    fn symbolic_claims_pass() {
        let ctx = Context::new(small());
        for id in ["construction.identities", "i.indeterminacy", "iii.affine-form"] {
            let c = ctx.claim(id);
            assert_eq!(c.verdict, Verdict::Pass, "{id}: {:#?}", c.witnesses.iter().filter(|w| !w.passed).collect::<Vec<_>>());
        }
    }

    #[test]
    fn reduced_run_passes_every_claim() {
        let ctx = Context::new(small());
        for id in CLAIM_IDS {
            let c = ctx.claim(id);
            assert_ne!(c.verdict, Verdict::Fail, "{id}: {:#?}", c.witnesses.iter().filter(|w| !w.passed).collect::<Vec<_>>());
        }
    }

    #[test]
    fn unreachable_cluster_tolerance_fails() {
        let cfg = Config { cluster: 1e-12, cluster_radius: 1e-2, ..small() };
        let c = Context::new(cfg).claim("i.cluster-p+");
        assert_eq!(c.verdict, Verdict::Fail);
        assert!(c.cluster.is_some());
    }

    #[test]
    fn tower_claim_is_computed_once() {
        let ctx = Context::new(small());
        let a = ctx.tower_claim(false) as *const ClaimResult;
        let b = ctx.tower_claim(false) as *const ClaimResult;
        assert_eq!(a, b);
        assert!(ctx.numeric.get().is_some());
    }

    #[test]
    fn scalar_display() {
        assert_eq!(show(&ExactComplex::ratio(-1, 2)), "-1/2");
        assert_eq!(show(&ExactComplex::int(0, 2)), "2i");
        assert_eq!(show(&(&ExactComplex::one() + &ExactComplex::int(0, -3))), "1-3i");
        assert_eq!(show_set(vec![]), "∅");
    }
}
