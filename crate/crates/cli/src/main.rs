use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{bail, Context};
use clap::{Args, Parser, Subcommand, ValueEnum};
use num_complex::Complex64;
use rayon::prelude::*;

use galeroot::basis::is_non_real;
use galeroot::determinant::{chromatic_det, d_eval, det_extended};
use galeroot::galedual::{ConstraintSpec, LinearConstraint};
use galeroot::grid::{marching_squares, to_svg, Contour, FieldKind, RegionGrid, Window};
use galeroot::manifest::RunManifest;
use galeroot::randstudy::{barycenter, batch_roots, SampleSpec};
use galeroot::rootfind::is_real_root;
use galeroot::rootlocus::{excluded, sigma_triple, ConstrainedRegion};
use galeroot::verify::{run_suite, DEFAULT_SEED, SUITES};
use galeroot::{BasisContext, BasisKind, Error};

#[derive(Parser)]
#[command(name = "galeroot", version, about = "Root exclusion regions for nonnegative polynomials")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Zero loci of D_{j,k}
    Curves(CurvesArgs),
    /// Excluded / not excluded field, optionally with a coefficient constraint
    Region(RegionArgs),
    /// Roots of random nonnegative polynomials
    Roots(RootsArgs),
    /// |beta| field with level contours
    Barycenter(BarycenterArgs),
    /// Run a validation suite
    Verify(VerifyArgs),
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Csv,
    Svg,
    Both,
}

impl Format {
    fn csv(self) -> bool {
        self != Format::Svg
    }
    fn svg(self) -> bool {
        self != Format::Csv
    }
}

#[derive(Args, Clone)]
struct Common {
    #[arg(long, default_value = "binomial")]
    basis: BasisKind,
    #[arg(short = 'd', long = "degree", default_value_t = 6)]
    d: usize,
    /// x_min,x_max,y_min,y_max or "auto"
    #[arg(long, allow_hyphen_values = true)]
    window: Option<String>,
    /// N or NXxNY
    #[arg(long, default_value = "800")]
    grid: String,
    /// Output path stem; extensions are added per format
    #[arg(long)]
    out: PathBuf,
    #[arg(long, value_enum, default_value = "both")]
    format: Format,
}

#[derive(Args)]
struct CurvesArgs {
    #[command(flatten)]
    common: Common,
    /// "all" or pairs "j,k;j,k"
    #[arg(long)]
    pairs: Option<String>,
}

#[derive(Args)]
struct RegionArgs {
    #[command(flatten)]
    common: Common,
    #[arg(long)]
    constraint: Option<ConstraintSpec>,
    /// Also emit one S_{i,j,k} layer per triple (unconstrained)
    #[arg(long)]
    per_triple: bool,
    /// Also emit the zero loci of the constrained determinants
    #[arg(long)]
    loci: bool,
    /// Admit hyperplanes through new rows only (weak inequalities)
    #[arg(long)]
    weak: bool,
}

#[derive(Args)]
struct RootsArgs {
    #[arg(long, default_value = "binomial")]
    basis: BasisKind,
    #[arg(short = 'd', long = "degree", default_value_t = 6)]
    d: usize,
    #[arg(long, default_value_t = 1000)]
    count: usize,
    /// Coefficients uniform in [0, N]
    #[arg(long = "bound", default_value_t = 1.0)]
    bound: f64,
    #[arg(long, default_value_t = DEFAULT_SEED)]
    seed: u64,
    #[arg(long)]
    constraint: Option<ConstraintSpec>,
    /// Redraw until a_0 > 0 and a_d > 0
    #[arg(long)]
    ends_nonzero: bool,
    /// Overlay on the exclusion boundary in an SVG using this window
    #[arg(long, allow_hyphen_values = true)]
    window: Option<String>,
    #[arg(long, default_value = "400")]
    grid: String,
    #[arg(long)]
    out: PathBuf,
    #[arg(long, value_enum, default_value = "csv")]
    format: Format,
}

#[derive(Args)]
struct BarycenterArgs {
    #[command(flatten)]
    common: Common,
    /// Overlay the roots of this many random polynomials
    #[arg(long, default_value_t = 0)]
    count: usize,
    #[arg(long = "bound", default_value_t = 1.0)]
    bound: f64,
    #[arg(long, default_value_t = DEFAULT_SEED)]
    seed: u64,
    /// Number of log-spaced contour levels
    #[arg(long, default_value_t = 12)]
    levels: usize,
}

#[derive(Args)]
struct VerifyArgs {
    /// Suite name or "all"
    suite: String,
    #[arg(long)]
    basis: Option<BasisKind>,
    #[arg(short = 'd', long = "degree")]
    d: Option<usize>,
    #[arg(short = 'n', long = "count")]
    count: Option<usize>,
    #[arg(long, default_value_t = DEFAULT_SEED)]
    seed: u64,
    /// Write the JSON report here as well as to stdout
    #[arg(long)]
    out: Option<PathBuf>,
}

// Usage problems map to exit code 2, everything else to 1.
struct Usage(String);

impl std::fmt::Debug for Usage {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(&self.0)
    }
}

impl std::fmt::Display for Usage {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(&self.0)
    }
}

impl std::error::Error for Usage {}

fn usage(msg: impl Into<String>) -> anyhow::Error {
    anyhow::Error::new(Usage(msg.into()))
}

fn is_usage(e: &anyhow::Error) -> bool {
    if e.downcast_ref::<Usage>().is_some() {
        return true;
    }
    matches!(
        e.downcast_ref::<Error>(),
        Some(
            Error::DegenerateDegree(_)
                | Error::IndexOutOfRange { .. }
                | Error::InvalidIndices(_)
                | Error::BasisMismatch { .. }
                | Error::Constraint(_)
                | Error::Precondition(_)
                | Error::Grid(_)
                | Error::Parse(_)
        )
    )
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Some(n) = std::env::var("GALEROOT_THREADS").ok().and_then(|v| v.parse::<usize>().ok()) {
        if n > 0 {
            let _ = rayon::ThreadPoolBuilder::new().num_threads(n).build_global();
        }
    }
    let result = match cli.command {
        Command::Curves(a) => cmd_curves(a),
        Command::Region(a) => cmd_region(a),
        Command::Roots(a) => cmd_roots(a),
        Command::Barycenter(a) => cmd_barycenter(a),
        Command::Verify(a) => cmd_verify(a),
    };
    match result {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e:#}");
            if is_usage(&e) {
                ExitCode::from(2)
            } else {
                ExitCode::from(1)
            }
        }
    }
}

fn parse_grid(s: &str) -> anyhow::Result<(usize, usize)> {
    let parse = |t: &str| t.trim().parse::<usize>().map_err(|_| usage(format!("bad grid '{s}'")));
    let (nx, ny) = match s.split_once(['x', 'X']) {
        Some((a, b)) => (parse(a)?, parse(b)?),
        None => {
            let n = parse(s)?;
            (n, n)
        }
    };
    if nx < 2 || ny < 2 {
        return Err(usage(format!("grid must be at least 2x2, got '{s}'")));
    }
    Ok((nx, ny))
}

fn parse_window(s: Option<&str>, ctx: &BasisContext, pairs: &[(usize, usize)]) -> anyhow::Result<Window> {
    Ok(match s {
        None => Window::default_for(ctx.d),
        Some("auto") => Window::auto(ctx, pairs),
        Some(w) => w.parse::<Window>()?,
    })
}

fn parse_pairs(s: Option<&str>, d: usize) -> anyhow::Result<Vec<(usize, usize)>> {
    let all = || (0..d).flat_map(|j| (j + 1..=d).map(move |k| (j, k))).collect::<Vec<_>>();
    let pairs = match s {
        None => vec![(0, d)],
        Some("all") => all(),
        Some(list) => list
            .split(';')
            .map(|p| {
                let (j, k) = p.split_once(',').ok_or_else(|| usage(format!("bad pair '{p}'")))?;
                let j: usize = j.trim().parse().map_err(|_| usage(format!("bad pair '{p}'")))?;
                let k: usize = k.trim().parse().map_err(|_| usage(format!("bad pair '{p}'")))?;
                Ok((j, k))
            })
            .collect::<anyhow::Result<Vec<_>>>()?,
    };
    for &(j, k) in &pairs {
        if !(j < k && k <= d) {
            return Err(usage(format!("pair ({j},{k}) needs 0 <= j < k <= {d}")));
        }
    }
    Ok(pairs)
}

fn with_ext(stem: &Path, suffix: &str, ext: &str) -> PathBuf {
    let base = match stem.extension().and_then(|e| e.to_str()) {
        Some("csv" | "svg" | "json") => stem.with_extension(""),
        _ => stem.to_path_buf(),
    };
    let name = format!("{}{suffix}.{ext}", base.file_name().and_then(|n| n.to_str()).unwrap_or("out"));
    base.with_file_name(name)
}

fn write(path: &Path, text: &str) -> anyhow::Result<()> {
    if let Some(dir) = path.parent().filter(|p| !p.as_os_str().is_empty()) {
        fs::create_dir_all(dir).with_context(|| format!("creating {}", dir.display()))?;
    }
    fs::write(path, text).with_context(|| format!("writing {}", path.display()))
}

fn write_manifest(stem: &Path, m: &RunManifest) -> anyhow::Result<()> {
    write(&with_ext(stem, "", "manifest.json"), &(serde_json::to_string_pretty(m)? + "\n"))
}

fn svg_with_manifest(svg: String, m: &RunManifest) -> String {
    // the JSON contains no "--", so it is safe inside an XML comment
    format!("<!-- manifest: {} -->\n{svg}", m.to_json())
}

fn base_manifest(cmd: &str, c: &Common, window: Window, res: (usize, usize)) -> RunManifest {
    let mut m = RunManifest::new(cmd);
    m.basis = Some(c.basis.name().to_string());
    m.d = Some(c.d);
    m.window = Some(window);
    m.resolution = Some(res);
    m
}

fn emit_grids(
    c: &Common,
    base: &RunManifest,
    layers: &[(String, RegionGrid)],
    markers: &[Complex64],
) -> anyhow::Result<()> {
    if c.format.csv() {
        for (name, g) in layers {
            let mut m = base.clone();
            m.field = Some(g.field_kind);
            let suffix = if layers.len() == 1 { String::new() } else { format!("-{name}") };
            write(&with_ext(&c.out, &suffix, "csv"), &g.to_csv(&m))?;
        }
    }
    if c.format.svg() {
        let contours: Vec<(String, Vec<Contour>)> = layers.iter().map(|(n, g)| (n.clone(), g.contours())).collect();
        let refs: Vec<(&str, &[Contour])> = contours.iter().map(|(n, v)| (n.as_str(), v.as_slice())).collect();
        let svg = to_svg(&layers[0].1.window, &refs, &[("root", markers)]);
        write(&with_ext(&c.out, "", "svg"), &svg_with_manifest(svg, base))?;
    }
    write_manifest(&c.out, base)
}

fn context(kind: BasisKind, d: usize) -> anyhow::Result<BasisContext> {
    if d < 2 {
        return Err(usage(format!("degree must be at least 2, got {d}")));
    }
    Ok(BasisContext::new(kind, d))
}

fn cmd_curves(a: CurvesArgs) -> anyhow::Result<ExitCode> {
    let c = &a.common;
    let ctx = context(c.basis, c.d)?;
    let pairs = parse_pairs(a.pairs.as_deref(), c.d)?;
    let window = parse_window(c.window.as_deref(), &ctx, &pairs)?;
    let (nx, ny) = parse_grid(&c.grid)?;
    let mut m = base_manifest("curves", c, window, (nx, ny));
    m.pairs = Some(pairs.clone());
    let layers = pairs
        .iter()
        .map(|&(j, k)| {
            let g = RegionGrid::fill(window, nx, ny, FieldKind::DValue, |z| d_eval(&ctx, j, k, z).unwrap_or(f64::NAN))?;
            Ok((format!("pair-{j}-{k}"), g))
        })
        .collect::<anyhow::Result<Vec<_>>>()?;
    emit_grids(c, &m, &layers, &[])?;
    Ok(ExitCode::SUCCESS)
}

fn bool_field(b: galeroot::Result<bool>) -> f64 {
    b.map_or(f64::NAN, |v| v as u8 as f64)
}

fn cmd_region(a: RegionArgs) -> anyhow::Result<ExitCode> {
    let c = &a.common;
    let ctx = context(c.basis, c.d)?;
    let window = parse_window(c.window.as_deref(), &ctx, &[(0, c.d)])?;
    let (nx, ny) = parse_grid(&c.grid)?;
    let mut m = base_manifest("region", c, window, (nx, ny));
    m.constraint = a.constraint.as_ref().map(|s| s.to_string());
    let mut layers = Vec::new();
    match &a.constraint {
        None => {
            let g = RegionGrid::fill(window, nx, ny, FieldKind::Excluded, |z| nonreal(z, || excluded(&ctx, z)))?;
            layers.push(("excluded".to_string(), g));
        }
        Some(spec) => {
            let region = ConstrainedRegion::new(ctx, spec)?.with_weak(a.weak);
            let g = RegionGrid::fill(window, nx, ny, FieldKind::ExcludedConstrained, |z| {
                nonreal(z, || region.excluded(z))
            })?;
            layers.push(("excluded-constrained".to_string(), g));
        }
    }
    if a.per_triple {
        for (i, j, k) in triples(c.d) {
            let g = RegionGrid::fill(window, nx, ny, FieldKind::Excluded, |z| {
                nonreal(z, || sigma_triple(&ctx, i, j, k, z).map(|s| !s.has_both_signs()))
            })?;
            layers.push((format!("s-{i}-{j}-{k}"), g));
        }
    }
    if a.loci {
        match &a.constraint {
            Some(ConstraintSpec::EhrhartS0) => {
                let lambda = LinearConstraint::ehrhart_s0(c.d)?.lambda;
                for k in 1..c.d {
                    let g = RegionGrid::fill(window, nx, ny, FieldKind::CustomDet, |z| {
                        det_extended(&ctx, (0, k, c.d), &lambda, z).map_or(f64::NAN, |v| v.to_f64())
                    })?;
                    layers.push((format!("det-0-{k}-{}", c.d), g));
                }
            }
            Some(ConstraintSpec::ChromaticBinomial { chi, eps }) => {
                let dim = c.d.checked_sub(*chi).ok_or_else(|| usage("chi exceeds d"))?;
                for (j, k, l) in triples(dim) {
                    let g = RegionGrid::fill(window, nx, ny, FieldKind::CustomDet, |z| {
                        chromatic_det(&ctx, *chi, eps, (j, k, l), z).map_or(f64::NAN, |v| v.to_f64())
                    })?;
                    layers.push((format!("det-{j}-{k}-{l}"), g));
                }
            }
            _ => return Err(usage("--loci needs --constraint ehrhart-s0 or chromatic-binomial")),
        }
    }
    emit_grids(c, &m, &layers, &[])?;
    Ok(ExitCode::SUCCESS)
}

fn triples(n: usize) -> Vec<(usize, usize, usize)> {
    let mut v = Vec::new();
    for i in 0..=n {
        for j in i + 1..=n {
            for k in j + 1..=n {
                v.push((i, j, k));
            }
        }
    }
    v
}

fn nonreal(z: Complex64, f: impl FnOnce() -> galeroot::Result<bool>) -> f64 {
    if is_non_real(z) {
        bool_field(f())
    } else {
        f64::NAN
    }
}

fn cmd_roots(a: RootsArgs) -> anyhow::Result<ExitCode> {
    let ctx = context(a.basis, a.d)?;
    if a.count == 0 {
        return Err(usage("count must be at least 1"));
    }
    let spec = SampleSpec {
        ctx,
        bound: a.bound,
        count: a.count,
        seed: a.seed,
        ends_nonzero: a.ends_nonzero,
        constraint: a.constraint.clone(),
    };
    let polys = galeroot::randstudy::sample(&spec)?;
    let per: Vec<Vec<(Complex64, f64)>> = polys
        .par_iter()
        .map(|p| {
            let rs = galeroot::rootfind::roots_in_basis(p)?;
            Ok(rs.into_iter().map(|r| (r, p.relative_residual(r))).collect())
        })
        .collect::<galeroot::Result<_>>()?;
    let mut m = RunManifest::new("roots");
    m.basis = Some(a.basis.name().to_string());
    m.d = Some(a.d);
    m.seed = Some(a.seed);
    m.count = Some(a.count);
    m.bound = Some(a.bound);
    m.constraint = a.constraint.as_ref().map(|s| s.to_string());
    let window = match a.window.as_deref() {
        Some(w) => Some(parse_window(Some(w), &ctx, &[(0, a.d)])?),
        None => None,
    };
    m.window = window;
    if a.format.csv() {
        let mut s = format!("# manifest: {}\npoly_index,re,im,is_real,residual\n", m.to_json());
        for (i, rs) in per.iter().enumerate() {
            for (r, res) in rs {
                s.push_str(&format!("{i},{:.16e},{:.16e},{},{:.3e}\n", r.re, r.im, is_real_root(*r) as u8, res));
            }
        }
        write(&with_ext(&a.out, "", "csv"), &s)?;
    }
    if a.format.svg() {
        let window = window.unwrap_or_else(|| Window::default_for(a.d));
        let (nx, ny) = parse_grid(&a.grid)?;
        m.resolution = Some((nx, ny));
        let boundary = match &a.constraint {
            None => RegionGrid::fill(window, nx, ny, FieldKind::Excluded, |z| nonreal(z, || excluded(&ctx, z)))?,
            Some(sp) => {
                let region = ConstrainedRegion::new(ctx, sp)?;
                RegionGrid::fill(window, nx, ny, FieldKind::ExcludedConstrained, |z| nonreal(z, || region.excluded(z)))?
            }
        };
        let roots: Vec<Complex64> = per.iter().flatten().map(|(r, _)| *r).collect();
        let contours = boundary.contours();
        let svg = to_svg(&window, &[("excluded-boundary", &contours)], &[("root", &roots)]);
        write(&with_ext(&a.out, "", "svg"), &svg_with_manifest(svg, &m))?;
    }
    write_manifest(&a.out, &m)?;
    Ok(ExitCode::SUCCESS)
}

fn cmd_barycenter(a: BarycenterArgs) -> anyhow::Result<ExitCode> {
    let c = &a.common;
    let ctx = context(c.basis, c.d)?;
    let window = parse_window(c.window.as_deref(), &ctx, &[(0, c.d)])?;
    let (nx, ny) = parse_grid(&c.grid)?;
    let mut m = base_manifest("barycenter", c, window, (nx, ny));
    m.field = Some(FieldKind::BarycenterAbs);
    let grid = RegionGrid::fill(window, nx, ny, FieldKind::BarycenterAbs, |z| barycenter(&ctx, z).norm())?;
    let mut roots = Vec::new();
    if a.count > 0 {
        m.seed = Some(a.seed);
        m.count = Some(a.count);
        m.bound = Some(a.bound);
        let mut spec = SampleSpec::new(ctx, a.count, a.seed);
        spec.bound = a.bound;
        spec.ends_nonzero = true;
        roots = batch_roots(&spec)?.into_iter().map(|(_, r)| r).collect();
    }
    if c.format.csv() {
        write(&with_ext(&c.out, "", "csv"), &grid.to_csv(&m))?;
    }
    if c.format.svg() {
        let logs: Vec<f64> = grid.values.iter().filter(|v| **v > 0.0 && v.is_finite()).map(|v| v.log10()).collect();
        if logs.is_empty() {
            bail!("barycenter field has no positive values");
        }
        let lo = logs.iter().cloned().fold(f64::INFINITY, f64::min);
        let hi = logs.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
        let n = a.levels.max(1);
        let layers: Vec<(String, Vec<Contour>)> = (1..=n)
            .map(|i| {
                let level = lo + (hi - lo) * i as f64 / (n + 1) as f64;
                (format!("level-{i}"), marching_squares(&grid, 10f64.powf(level)))
            })
            .collect();
        let refs: Vec<(&str, &[Contour])> = layers.iter().map(|(n, v)| (n.as_str(), v.as_slice())).collect();
        let svg = to_svg(&window, &refs, &[("root", &roots)]);
        write(&with_ext(&c.out, "", "svg"), &svg_with_manifest(svg, &m))?;
    }
    write_manifest(&c.out, &m)?;
    Ok(ExitCode::SUCCESS)
}

fn cmd_verify(a: VerifyArgs) -> anyhow::Result<ExitCode> {
    let names: Vec<&str> = if a.suite == "all" {
        SUITES.to_vec()
    } else if SUITES.contains(&a.suite.as_str()) {
        vec![a.suite.as_str()]
    } else {
        return Err(usage(format!("unknown suite '{}'; expected one of: all, {}", a.suite, SUITES.join(", "))));
    };
    if let Some(kind) = a.basis {
        let fixed = match a.suite.as_str() {
            "power-sector" => Some(BasisKind::Power),
            "chromatic-altpower" => Some(BasisKind::AlternatingPower),
            "duality" | "recursion" | "all" => None,
            _ => Some(BasisKind::BinomialCoefficient),
        };
        if fixed != Some(kind) {
            return Err(usage(format!("suite '{}' does not take --basis {kind}", a.suite)));
        }
    }
    let checks: Vec<_> = names.iter().map(|n| run_suite(n, a.d, a.count, a.seed).expect("known suite")).collect();
    let passed = checks.iter().all(|c| c.passed);
    let report = serde_json::json!({ "passed": passed, "seed": a.seed, "checks": checks });
    let text = serde_json::to_string_pretty(&report)? + "\n";
    print!("{text}");
    if let Some(out) = &a.out {
        write(out, &text)?;
    }
    for c in &checks {
        eprintln!("{} {}: {}", if c.passed { "PASS" } else { "FAIL" }, c.name, c.detail);
    }
    Ok(if passed { ExitCode::SUCCESS } else { ExitCode::from(1) })
}
