//! Flag definitions and value parsers.

use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};
use num_complex::Complex64;

use crate::domain::{DomainSpec, Rect};
use crate::modulus::{CircleSampling, DEFAULT_ANGLE_TOL, DEFAULT_BLOW_UP, DEFAULT_N_COARSE};
use crate::orbits::{NewtonOptions, OrbitPolicy, PointClass};
use crate::raster::Connectivity;
use crate::surround::CheckOptions;

#[derive(Debug, Parser)]
#[command(
    name = "iplus",
    version,
    about = "Numerical exploration of the set of points with unbounded orbit under an entire function",
    after_help = "Exit codes: 0 success, 1 failed check (JSON report written), 2 usage or parse error.\n\
                  The output directory defaults to `.`; IPLUS_OUT_DIR overrides the default and --out-dir overrides both.",
    args_override_self = true
)]
pub struct Cli {
    /// Directory for reports and data files.
    #[arg(long, global = true, value_name = "DIR")]
    pub out_dir: Option<PathBuf>,
    /// `key=value` file of default flags; flags on the command line win.
    #[arg(long, global = true, value_name = "FILE")]
    pub config: Option<PathBuf>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Parse an expression and print its canonical form and derivative.
    ParseCheck(ParseCheckArgs),
    /// Minimum (and optionally maximum) modulus on circles |z| = r.
    Minmod(MinmodArgs),
    /// Iterate r -> m(r) and report a divergence verdict.
    MinmodIterate(MinmodIterateArgs),
    /// Discs |z| < m^n(r0) and the nested-surround check on them.
    DiscSeq(DiscSeqArgs),
    /// Check that f(boundary of D_n) surrounds D_{n+1}.
    SurroundCheck(SurroundCheckArgs),
    /// Check the strongly-polynomial-like conditions on a domain family.
    SplCheck(SplCheckArgs),
    /// Iterate one orbit and classify its starting point.
    Orbit(OrbitArgs),
    /// Locate and classify fixed points in a region.
    FixedPoints(FixedPointsArgs),
    /// Classify a pixel grid and write a PPM picture.
    Render(RenderArgs),
    /// Connected-component census of a rendered classification.
    Components(ComponentsArgs),
    /// Spider's-web probe on a rendered classification.
    SwProbe(SwProbeArgs),
    /// Run a built-in suite: ex51, ex52 or sinz.
    Scenario(ScenarioArgs),
}

#[derive(Debug, Args)]
pub struct FnArg {
    /// Entire function of z, e.g. "cos(z)+z".
    #[arg(long = "f", value_name = "EXPR", allow_hyphen_values = true)]
    pub f: String,
}

#[derive(Debug, Args)]
pub struct SamplingArgs {
    /// Coarse samples per circle.
    #[arg(long, default_value_t = DEFAULT_N_COARSE)]
    pub n_coarse: usize,
    /// Angular tolerance of the ternary refinement.
    #[arg(long, default_value_t = DEFAULT_ANGLE_TOL)]
    pub tol: f64,
}

impl SamplingArgs {
    pub fn sampling(&self) -> CircleSampling {
        CircleSampling {
            n_coarse: self.n_coarse,
            tol: self.tol,
        }
    }
}

#[derive(Debug, Args)]
pub struct PolicyArgs {
    /// Maximum number of iterations per orbit.
    #[arg(long, default_value_t = 200)]
    pub budget: usize,
    #[arg(long, default_value_t = 1e6)]
    pub escape_radius: f64,
    /// Relative tolerance for detecting a cycle.
    #[arg(long, default_value_t = 1e-9)]
    pub cycle_tol: f64,
    /// Longest period searched for.
    #[arg(long, default_value_t = 32)]
    pub cycle_window: usize,
}

impl PolicyArgs {
    pub fn policy(&self) -> Result<OrbitPolicy, String> {
        OrbitPolicy::new(
            self.budget,
            self.escape_radius,
            self.cycle_tol,
            self.cycle_window,
        )
        .map_err(|e| e.to_string())
    }
}

#[derive(Debug, Args)]
pub struct CheckArgs {
    /// Boundary samples per unit length.
    #[arg(long, default_value_t = 4.0)]
    pub density: f64,
    /// Probe lattice size per axis.
    #[arg(long, default_value_t = 5)]
    pub probe_grid: usize,
    /// Image chord bound as a fraction of the target diameter.
    #[arg(long, default_value_t = 1e-2)]
    pub max_step_fraction: f64,
    /// Refinement budget for each image curve.
    #[arg(long, default_value_t = 2_000_000)]
    pub max_points: usize,
    /// Accept chords shorter than this fraction of their distance to the target.
    #[arg(long, default_value_t = 0.5)]
    pub clearance_fraction: f64,
    /// Closure clearance as a fraction of the domain diameter.
    #[arg(long, default_value_t = 1e-9)]
    pub closure_eps_fraction: f64,
}

impl CheckArgs {
    pub fn options(&self) -> Result<CheckOptions, String> {
        if !(self.density.is_finite() && self.density > 0.0) {
            return Err(format!("--density must be positive, got {}", self.density));
        }
        Ok(CheckOptions {
            density: self.density,
            probe_grid: self.probe_grid,
            max_step_fraction: self.max_step_fraction,
            max_points: self.max_points,
            clearance_fraction: self.clearance_fraction,
            closure_eps_fraction: self.closure_eps_fraction,
        })
    }
}

#[derive(Debug, Args)]
pub struct DomainArgs {
    /// Domain, repeatable and in order: disc:CX,CY,R | rect:X0,X1,Y0,Y1 | union:X0,X1,Y0,Y1;X0,X1,Y0,Y1;...
    #[arg(long = "domain", value_name = "SPEC", allow_hyphen_values = true)]
    pub domains: Vec<String>,
    /// Use a built-in scenario's domain family instead of --domain.
    #[arg(long, value_name = "NAME", conflicts_with = "domains")]
    pub scenario: Option<String>,
    /// Index range A..B (inclusive) of the scenario family.
    #[arg(long, value_name = "A..B", requires = "scenario")]
    pub range: Option<String>,
}

#[derive(Debug, Args)]
pub struct ParseCheckArgs {
    #[command(flatten)]
    pub f: FnArg,
    /// Evaluate at RE,IM (repeatable).
    #[arg(long = "at", value_name = "RE,IM", allow_hyphen_values = true)]
    pub at: Vec<String>,
}

#[derive(Debug, Args)]
pub struct MinmodArgs {
    #[command(flatten)]
    pub f: FnArg,
    /// Radii, comma-separated or repeated.
    #[arg(long = "r", value_name = "R", required = true, value_delimiter = ',')]
    pub r: Vec<f64>,
    #[command(flatten)]
    pub sampling: SamplingArgs,
    /// Also report the maximum modulus.
    #[arg(long)]
    pub max: bool,
}

#[derive(Debug, Args)]
pub struct MinmodIterateArgs {
    #[command(flatten)]
    pub f: FnArg,
    /// Starting radius.
    #[arg(long = "r", value_name = "R0")]
    pub r: f64,
    /// Maximum number of iterations.
    #[arg(long, default_value_t = 50)]
    pub n_max: usize,
    #[arg(long, default_value_t = DEFAULT_BLOW_UP)]
    pub blow_up: f64,
    #[command(flatten)]
    pub sampling: SamplingArgs,
    /// Fail (exit 1) unless the verdict is this one: DIVERGES, NOT_DIVERGING or UNDECIDED.
    #[arg(long, value_name = "VERDICT")]
    pub expect: Option<String>,
}

#[derive(Debug, Args)]
pub struct DiscSeqArgs {
    #[command(flatten)]
    pub f: FnArg,
    /// Starting radius.
    #[arg(long = "r", value_name = "R0")]
    pub r: f64,
    /// Number of discs.
    #[arg(long, default_value_t = 3)]
    pub count: usize,
    #[command(flatten)]
    pub sampling: SamplingArgs,
    #[command(flatten)]
    pub check: CheckArgs,
}

#[derive(Debug, Args)]
pub struct SurroundCheckArgs {
    #[command(flatten)]
    pub f: FnArg,
    #[command(flatten)]
    pub domains: DomainArgs,
    #[command(flatten)]
    pub check: CheckArgs,
}

#[derive(Debug, Args)]
pub struct SplCheckArgs {
    #[command(flatten)]
    pub f: FnArg,
    #[command(flatten)]
    pub domains: DomainArgs,
    #[command(flatten)]
    pub check: CheckArgs,
}

#[derive(Debug, Args)]
pub struct OrbitArgs {
    #[command(flatten)]
    pub f: FnArg,
    /// Starting point RE,IM.
    #[arg(long = "z", value_name = "RE,IM", allow_hyphen_values = true)]
    pub z: String,
    #[command(flatten)]
    pub policy: PolicyArgs,
}

#[derive(Debug, Args)]
pub struct FixedPointsArgs {
    #[command(flatten)]
    pub f: FnArg,
    /// Search region, same syntax as --domain.
    #[arg(long, value_name = "SPEC", allow_hyphen_values = true)]
    pub region: String,
    #[arg(long, default_value_t = 24)]
    pub seeds_per_axis: usize,
    #[arg(long, default_value_t = 1e-12)]
    pub newton_tol: f64,
    #[arg(long, default_value_t = 100)]
    pub max_newton: usize,
}

impl FixedPointsArgs {
    pub fn options(&self) -> NewtonOptions {
        NewtonOptions {
            seeds_per_axis: self.seeds_per_axis,
            newton_tol: self.newton_tol,
            max_newton: self.max_newton,
        }
    }
}

#[derive(Debug, Args)]
pub struct GridArgs {
    /// Window X0,X1,Y0,Y1.
    #[arg(
        long,
        value_name = "X0,X1,Y0,Y1",
        allow_hyphen_values = true,
        default_value = "-2,2,-2,2"
    )]
    pub window: String,
    #[arg(long, default_value_t = 400)]
    pub nx: usize,
    #[arg(long, default_value_t = 200)]
    pub ny: usize,
}

#[derive(Debug, Args)]
pub struct RenderArgs {
    #[command(flatten)]
    pub f: FnArg,
    #[command(flatten)]
    pub grid: GridArgs,
    #[command(flatten)]
    pub policy: PolicyArgs,
    /// Class whose boundary is drawn in red, or `none`.
    #[arg(long, default_value = "unbounded", value_name = "CLASS")]
    pub overlay: String,
}

#[derive(Debug, Args)]
pub struct LabelArgs {
    /// Classification file written by `render` (default: OUT_DIR/classification.json).
    #[arg(long, value_name = "FILE")]
    pub input: Option<PathBuf>,
    /// Target class: unbounded, bounded or undecided.
    #[arg(long, default_value = "unbounded", value_parser = parse_class)]
    pub target: PointClass,
    /// Pixel connectivity of the target class (4 or 8).
    #[arg(long, default_value_t = 4, value_parser = clap::value_parser!(u32).range(4..=8))]
    pub connectivity: u32,
}

impl LabelArgs {
    pub fn connectivity(&self) -> Result<Connectivity, String> {
        Connectivity::from_count(self.connectivity)
            .ok_or_else(|| format!("connectivity must be 4 or 8, got {}", self.connectivity))
    }
}

#[derive(Debug, Args)]
pub struct ComponentsArgs {
    #[command(flatten)]
    pub label: LabelArgs,
    /// Fail (exit 1) if fewer edge-touching components are found.
    #[arg(long, value_name = "N")]
    pub expect_min_edge: Option<usize>,
}

#[derive(Debug, Args)]
pub struct SwProbeArgs {
    #[command(flatten)]
    pub label: LabelArgs,
    /// Probe centre RE,IM.
    #[arg(long, default_value = "0,0", allow_hyphen_values = true)]
    pub center: String,
    /// Increasing radii, comma-separated.
    #[arg(long, required = true, value_delimiter = ',')]
    pub radii: Vec<f64>,
}

#[derive(Debug, Args)]
pub struct ScenarioArgs {
    /// ex51, ex52 or sinz.
    pub name: String,
    /// Domain index range A..B (inclusive).
    #[arg(long, value_name = "A..B")]
    pub range: Option<String>,
    #[command(flatten)]
    pub check: CheckArgs,
    #[command(flatten)]
    pub sampling: SamplingArgs,
    #[command(flatten)]
    pub policy: PolicyArgs,
    /// Render width for sinz.
    #[arg(long, default_value_t = 400)]
    pub nx: usize,
    /// Render height for sinz.
    #[arg(long, default_value_t = 200)]
    pub ny: usize,
}

fn parse_class(s: &str) -> Result<PointClass, String> {
    s.parse()
}

fn parse_floats(s: &str, n: usize, what: &str) -> Result<Vec<f64>, String> {
    let v = s
        .split(',')
        .map(|t| {
            t.trim()
                .parse::<f64>()
                .map_err(|_| format!("bad number `{t}` in {what} `{s}`"))
        })
        .collect::<Result<Vec<_>, _>>()?;
    if v.len() != n {
        return Err(format!("{what} `{s}` needs {n} comma-separated numbers"));
    }
    if v.iter().any(|x| !x.is_finite()) {
        return Err(format!("{what} `{s}` has a non-finite number"));
    }
    Ok(v)
}

/// `RE,IM` or a bare real number.
pub fn parse_complex(s: &str) -> Result<Complex64, String> {
    if !s.contains(',') {
        return parse_floats(s, 1, "point").map(|v| Complex64::new(v[0], 0.0));
    }
    parse_floats(s, 2, "point").map(|v| Complex64::new(v[0], v[1]))
}

pub fn parse_rect(s: &str) -> Result<Rect, String> {
    let v = parse_floats(s, 4, "rectangle")?;
    Rect::new(v[0], v[1], v[2], v[3]).map_err(|e| e.to_string())
}

pub fn parse_domain(spec: &str, label: String) -> Result<DomainSpec, String> {
    let (kind, body) = spec
        .split_once(':')
        .ok_or_else(|| format!("domain `{spec}` must start with disc:, rect: or union:"))?;
    let d = match kind {
        "disc" => {
            let v = parse_floats(body, 3, "disc")?;
            DomainSpec::disc(Complex64::new(v[0], v[1]), v[2], label)
        }
        "rect" => DomainSpec::rect(parse_rect(body)?, label),
        "union" => {
            let rects = body
                .split(';')
                .map(parse_rect)
                .collect::<Result<Vec<_>, _>>()?;
            DomainSpec::rect_union(rects, label)
        }
        other => return Err(format!("unknown domain kind `{other}`")),
    };
    d.map_err(|e| format!("domain `{spec}`: {e}"))
}

/// `A..B` inclusive, `A..=B` also accepted.
pub fn parse_range(s: &str) -> Result<(u32, u32), String> {
    let (a, b) = s
        .split_once("..")
        .ok_or_else(|| format!("range `{s}` must look like A..B"))?;
    let b = b.strip_prefix('=').unwrap_or(b);
    let a: u32 = a
        .trim()
        .parse()
        .map_err(|_| format!("bad range start in `{s}`"))?;
    let b: u32 = b
        .trim()
        .parse()
        .map_err(|_| format!("bad range end in `{s}`"))?;
    if b < a {
        return Err(format!("empty range `{s}`"));
    }
    Ok((a, b))
}
