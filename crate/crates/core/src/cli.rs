//! Command-line front end.

use std::fs;
use std::io::{self, Write};
use std::path::{Path, PathBuf};

use anyhow::{anyhow, bail, Context as _, Result};
use clap::{Parser, Subcommand, ValueEnum};
use num_complex::Complex64;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::blowup::BlowupTower;
use crate::example as ex;
use crate::hypersurface::{
    graph_sample, proper_transform, sphere_sample, write_csv, zero_set_sample, CsvRow, RealHypersurface, Region,
};
use crate::verify::{self, cluster_estimate, ClusterEstimate, Config, Report, CLAIM_IDS, TOLERANCE_KEYS};

#[derive(Debug, Parser)]
#[command(name = "sphere-blowup", version, about = "Blow-up analysis of a rational map with indeterminacy on the unit sphere")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Run the verification suite; exit 0 iff no claim fails.
    #[command(after_help = verify_help())]
    Verify(VerifyArgs),
    /// Write a CSV sample cloud of one stage of the construction.
    Sample(SampleArgs),
    /// Tabulate cluster distances of sphere images near a point.
    Cluster(ClusterArgs),
    /// Pretty-print a stored JSON report.
    Report(ReportArgs),
}

fn verify_help() -> String {
    let c = Config::default();
    format!(
        "Claims: {}\n\nTolerance keys and defaults: residual={:e} cluster={:e} cluster-radius={:e} hausdorff={:e} \
         window={} trace-spacing={} trace-radius={:e} levi-margin={:e} avoidance-radius={} image-stability={} \
         sphere-levi={:e}\nOther defaults: radii 1e-1..1e-6, phases {}, tilts {}, avoidance attempts {}, \
         line samples {}, image seeds {}",
        CLAIM_IDS.join(", "),
        c.residual,
        c.cluster,
        c.cluster_radius,
        c.hausdorff,
        c.window,
        c.trace_spacing,
        c.trace_radius,
        c.levi_margin,
        c.avoidance_radius,
        c.image_stability,
        c.sphere_levi,
        c.phases,
        c.tilts,
        c.avoidance_attempts,
        c.line_samples,
        c.image_seeds,
    )
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum ReportFormat {
    Json,
    Text,
}

#[derive(Debug, clap::Args)]
pub struct VerifyArgs {
    /// Run a single claim.
    #[arg(long, value_name = "ID")]
    pub only: Option<String>,
    #[arg(long, default_value_t = 7)]
    pub seed: u64,
    /// Override a tolerance, e.g. `cluster=1e-12` (repeatable).
    #[arg(long = "tolerance", value_name = "KEY=V")]
    pub tolerances: Vec<String>,
    /// Radius at which the cluster tolerance is checked.
    #[arg(long, default_value_t = 1e-4)]
    pub cluster_radius: f64,
    /// Samples for Levi, smoothness and remark checks.
    #[arg(long, default_value_t = 10_000)]
    pub samples: usize,
    /// Sphere samples per seed for the image checks.
    #[arg(long, default_value_t = 100_000)]
    pub image_samples: usize,
    /// Write the report here (the text report always goes to stdout).
    #[arg(long, value_name = "PATH")]
    pub out: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t = ReportFormat::Json)]
    pub format: ReportFormat,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Stage {
    /// The model hypersurface Im z2 = |z1|^2.
    M,
    /// First proper transform (charts U1', U1'').
    M1,
    /// Second proper transform (charts U2', U2'').
    M2,
    /// Image of the sphere in the affine chart of the final form.
    Image,
}

#[derive(Debug, clap::Args)]
pub struct SampleArgs {
    #[command(flatten)]
    pub spec: SampleSpec,
    #[arg(long, value_name = "PATH")]
    pub out: PathBuf,
}

/// What to sample, independent of where it is written.
#[derive(Clone, Debug, clap::Args)]
pub struct SampleSpec {
    #[arg(long, value_enum)]
    pub stage: Stage,
    /// Chart id: U0, U1' (U1p), U1'' (U1pp), U2' (U2p), U2'' (U2pp); ignored for `image`.
    #[arg(long, default_value = "U0")]
    pub chart: String,
    #[arg(long, default_value_t = 10_000)]
    pub count: usize,
    #[arg(long, default_value_t = 7)]
    pub seed: u64,
    /// Half-width of the sampling box in each real coordinate.
    #[arg(long, default_value_t = 3.0)]
    pub window: f64,
    /// Minimum modulus of both coordinates (keeps away from exceptional curves).
    #[arg(long, default_value_t = 1e-3)]
    pub margin: f64,
}

#[derive(Debug, clap::Args)]
pub struct ClusterArgs {
    #[command(flatten)]
    pub spec: ClusterSpec,
    /// Write the table as CSV here.
    #[arg(long, value_name = "PATH")]
    pub out: Option<PathBuf>,
}

#[derive(Clone, Debug, clap::Args)]
pub struct ClusterSpec {
    /// `p+`, `p-` or `w1,w2` with complex entries such as `0.6,0.8i`.
    #[arg(long, allow_hyphen_values = true)]
    pub point: String,
    #[arg(long, value_delimiter = ',', default_values_t = [1e-1, 1e-2, 1e-3, 1e-4, 1e-5, 1e-6])]
    pub radii: Vec<f64>,
    #[arg(long, default_value_t = 72)]
    pub phases: usize,
    #[arg(long, default_value_t = 9)]
    pub tilts: usize,
    #[arg(long, default_value_t = 7)]
    pub seed: u64,
}

#[derive(Debug, clap::Args)]
pub struct ReportArgs {
    #[arg(long = "in", value_name = "PATH", required_unless_present = "tower")]
    pub input: Option<PathBuf>,
    /// Print the blow-up tower over the origin (charts, centers, blow-downs) instead.
    #[arg(long, conflicts_with = "input")]
    pub tower: bool,
}

/// Exit status for usage and I/O errors.
pub const EXIT_USAGE: i32 = 2;
/// Exit status when a claim fails.
pub const EXIT_CLAIM: i32 = 1;

/// Parses the process arguments, runs the command and returns the exit status.
pub fn main() -> i32 {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { EXIT_USAGE } else { 0 };
        }
    };
    let stdout = io::stdout();
    match execute(&cli.command, &mut stdout.lock()) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e:#}");
            EXIT_USAGE
        }
    }
}

/// Runs one command, writing human-readable output to `out`.
pub fn execute<W: Write>(cmd: &Command, out: &mut W) -> Result<i32> {
    match cmd {
        Command::Verify(a) => cmd_verify(a, out),
        Command::Sample(a) => cmd_sample(a, out),
        Command::Cluster(a) => cmd_cluster(a, out),
        Command::Report(a) => cmd_report(a, out),
    }
}

pub fn build_config(a: &VerifyArgs) -> Result<Config> {
    let mut cfg = Config { seed: a.seed, cluster_radius: a.cluster_radius, samples: a.samples, image_samples: a.image_samples, ..Config::default() };
    for t in &a.tolerances {
        cfg.set(t).with_context(|| format!("valid keys: {}", TOLERANCE_KEYS.join(", ")))?;
    }
    Ok(cfg)
}

fn write_file(path: &Path, bytes: &[u8]) -> Result<()> {
    fs::write(path, bytes).with_context(|| format!("cannot write {}", path.display()))
}

fn cmd_verify<W: Write>(a: &VerifyArgs, out: &mut W) -> Result<i32> {
    let cfg = build_config(a)?;
    let report = verify::run(&cfg, a.only.as_deref())?;
    let text = report.to_text();
    out.write_all(text.as_bytes())?;
    if let Some(path) = &a.out {
        match a.format {
            ReportFormat::Json => write_file(path, report.to_json().as_bytes())?,
            ReportFormat::Text => write_file(path, text.as_bytes())?,
        }
    }
    Ok(if report.passed() { 0 } else { EXIT_CLAIM })
}

fn cmd_report<W: Write>(a: &ReportArgs, out: &mut W) -> Result<i32> {
    let Some(input) = &a.input else {
        let doc = BlowupTower::origin_tower(3).to_document();
        writeln!(out, "{}", serde_json::to_string_pretty(&doc)?)?;
        return Ok(0);
    };
    let text = fs::read_to_string(input).with_context(|| format!("cannot read {}", input.display()))?;
    let report = Report::from_json(&text).with_context(|| format!("{} is not a report", input.display()))?;
    out.write_all(report.to_text().as_bytes())?;
    Ok(0)
}

/// Canonical chart id, accepting `p` for a prime in shell-friendly aliases.
pub fn chart_id(name: &str) -> String {
    match name.strip_suffix("pp") {
        Some(base) if base.starts_with('U') => format!("{base}''"),
        _ => match name.strip_suffix('p') {
            Some(base) if base.starts_with('U') => format!("{base}'"),
            _ => name.to_owned(),
        },
    }
}

fn stage_charts(stage: Stage) -> &'static [&'static str] {
    match stage {
        Stage::M => &["U0"],
        Stage::M1 => &["U1'", "U1''"],
        Stage::M2 => &["U2'", "U2''"],
        Stage::Image => &[],
    }
}

/// Sample cloud of one stage, before sorting.
pub fn sample_rows(a: &SampleSpec) -> Result<Vec<CsvRow>> {
    let mut rng = ChaCha8Rng::seed_from_u64(a.seed);
    let stream = match a.stage {
        Stage::M => 0,
        Stage::M1 => 1,
        Stage::M2 => 2,
        Stage::Image => 3,
    };
    rng.set_stream(stream);
    if a.stage == Stage::Image {
        let f = ex::final_triple();
        return Ok(sphere_sample(a.count, &mut rng)
            .into_iter()
            .filter_map(|w| {
                let z = f.eval_f64(&w);
                let p = [z[0] / z[2], z[1] / z[2]];
                (p[0].is_finite() && p[1].is_finite()).then(|| CsvRow {
                    chart: "image".into(),
                    point: p,
                    rho_residual: w[0].norm_sqr() + w[1].norm_sqr() - 1.0,
                    levi_value: None,
                })
            })
            .collect());
    }
    let chart = chart_id(&a.chart);
    let allowed = stage_charts(a.stage);
    if !allowed.contains(&chart.as_str()) {
        bail!("stage {:?} lives in charts {}, not {chart}", a.stage, allowed.join(", "));
    }
    let model = RealHypersurface::new(ex::rho_model(), "U0")?;
    let region = Region::square(a.window).with_min_modulus([a.margin; 2]);
    if a.stage == Stage::M {
        return Ok(graph_sample(&region, a.count, &mut rng)
            .into_iter()
            .map(|p| CsvRow { chart: chart.clone(), point: p, rho_residual: model.eval(p), levi_value: model.levi_form(p).ok() })
            .collect());
    }
    let tower = BlowupTower::origin_tower(3);
    let (total, reduced) = proper_transform(&model, &tower, &chart)?;
    let f = |p: [Complex64; 2]| reduced.eval(p);
    let s = zero_set_sample(&f, &region, a.count, 100 * a.count.max(1), &mut rng);
    if s.points.is_empty() {
        bail!("{}", s.diagnostic.unwrap_or_else(|| "no samples".into()));
    }
    Ok(s.points
        .into_iter()
        .map(|p| CsvRow { chart: chart.clone(), point: p, rho_residual: total.eval(p), levi_value: total.levi_form(p).ok() })
        .collect())
}

fn cmd_sample<W: Write>(a: &SampleArgs, out: &mut W) -> Result<i32> {
    let rows = sample_rows(&a.spec)?;
    let mut buf = Vec::new();
    write_csv(&mut buf, &rows)?;
    write_file(&a.out, &buf)?;
    writeln!(out, "wrote {} rows to {}", rows.len(), a.out.display())?;
    Ok(0)
}

/// Parses `p+`, `p-` or `w1,w2`; rejects points off the unit sphere by more than 1e-9.
pub fn parse_point(s: &str) -> Result<[Complex64; 2]> {
    let exact = match s {
        "p+" => Some(ex::p_plus()),
        "p-" => Some(ex::p_minus()),
        _ => None,
    };
    if let Some(p) = exact {
        return Ok([p[0].to_c64(), p[1].to_c64()]);
    }
    let (a, b) = s.split_once(',').ok_or_else(|| anyhow!("expected p+, p- or w1,w2, got `{s}`"))?;
    let parse = |t: &str| t.trim().parse::<Complex64>().map_err(|_| anyhow!("`{t}` is not a complex number"));
    let p = [parse(a)?, parse(b)?];
    let off = (p[0].norm_sqr() + p[1].norm_sqr() - 1.0).abs();
    if off > 1e-9 {
        bail!("point ({}, {}) is off the unit sphere by {off:e}", p[0], p[1]);
    }
    Ok(p)
}

/// Limit value for the cluster table: the value of the map at regular
/// points, the constant lift value at the indeterminacy points.
pub fn cluster_target(p: [Complex64; 2]) -> [Complex64; 3] {
    let f = ex::sphere_triple();
    let z = f.eval_f64(&p);
    let scale = z.iter().map(|c| c.norm()).fold(0.0, f64::max);
    if scale > 1e-12 {
        return z;
    }
    let t = ex::cluster_target(p[1].re > 0.0);
    [t[0].to_c64(), t[1].to_c64(), t[2].to_c64()]
}

pub fn cluster_table(a: &ClusterSpec) -> Result<ClusterEstimate> {
    let p = parse_point(&a.point)?;
    if a.radii.iter().any(|r| !(r.is_finite() && *r > 0.0 && *r < 2.0)) {
        bail!("radii must lie in (0, 2)");
    }
    if a.phases == 0 || a.tilts == 0 {
        bail!("phases and tilts must be positive");
    }
    let target = cluster_target(p);
    Ok(cluster_estimate(&ex::sphere_triple(), p, target, &a.radii, a.phases, a.tilts, a.seed))
}

fn cmd_cluster<W: Write>(a: &ClusterArgs, out: &mut W) -> Result<i32> {
    let est = cluster_table(&a.spec)?;
    let t = est.target;
    writeln!(
        out,
        "limit [{:.6} : {:.6} : {:.6}]",
        Complex64::new(t[0][0], t[0][1]),
        Complex64::new(t[1][0], t[1][1]),
        Complex64::new(t[2][0], t[2][1])
    )?;
    writeln!(out, "radius        max distance   samples")?;
    let mut csv = String::from("radius,max_distance,samples\n");
    for r in &est.rows {
        let (short, full) = r
            .max_distance
            .map_or_else(|| ("inf".to_owned(), "inf".to_owned()), |v| (format!("{v:.6e}"), format!("{v:e}")));
        writeln!(out, "{:<13e} {:<14} {}", r.radius, short, r.samples)?;
        csv.push_str(&format!("{:e},{full},{}\n", r.radius, r.samples));
    }
    if let Some(rate) = est.decay_rate {
        writeln!(out, "fitted decay rate: {rate:.4}")?;
    }
    if let Some(path) = &a.out {
        write_file(path, csv.as_bytes())?;
    }
    Ok(0)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn chart_aliases() {
        assert_eq!(chart_id("U1p"), "U1'");
        assert_eq!(chart_id("U2pp"), "U2''");
        assert_eq!(chart_id("U1''"), "U1''");
        assert_eq!(chart_id("U0"), "U0");
    }

    #[test]
    fn points_off_the_sphere_are_rejected() {
        assert!(parse_point("0.6,0.8i").is_ok());
        assert!(parse_point("0.6,0.8").is_ok());
        assert!(parse_point("0.6,0.81").is_err());
        assert!(parse_point("nonsense").is_err());
        assert_eq!(parse_point("p-").unwrap()[1], Complex64::new(-1.0, 0.0));
    }

    #[test]
    fn targets_at_poles_and_regular_points() {
        let t = cluster_target([Complex64::new(0.0, 0.0), Complex64::new(1.0, 0.0)]);
        assert_eq!(t[1], Complex64::new(1.0, 0.0));
        let t = cluster_target([Complex64::new(1.0, 0.0), Complex64::new(0.0, 0.0)]);
        assert_eq!(t, [Complex64::new(1.0, 0.0), Complex64::new(-1.0, 0.0), Complex64::new(0.0, 1.0)]);
    }

    #[test]
    fn help_lists_defaults() {
        let h = verify_help();
        assert!(h.contains("cluster=1e-3") && h.contains("iii.line-avoidance"));
    }

    #[test]
    fn stage_chart_mismatch_is_an_error() {
        let a = SampleSpec { stage: Stage::M2, chart: "U1p".into(), count: 1, seed: 0, window: 3.0, margin: 1e-3 };
        assert!(sample_rows(&a).is_err());
    }
}
