//! One function per subcommand.

use std::path::Path;

use num_complex::Complex64;
use serde::Deserialize;
use serde_json::{json, Value};

use super::args::*;
use super::{suites, CliError, Outcome};
use crate::domain::DomainSpec;
use crate::funcspec::FunctionExpression;
use crate::modulus::{self, MinModVerdict};
use crate::orbits::{self, OrbitPolicy, PointClass};
use crate::output::{csv_table, curves_csv, fmt_f64, json_bytes};
use crate::raster::{self, GridSpec, PixelClassification};
use crate::scenario;
use crate::surround::{self, PairReport};

pub(super) fn dispatch(cmd: &Command, out_dir: &Path) -> Result<Outcome, CliError> {
    match cmd {
        Command::ParseCheck(a) => parse_check(a),
        Command::Minmod(a) => minmod(a),
        Command::MinmodIterate(a) => minmod_iterate(a),
        Command::DiscSeq(a) => disc_seq(a),
        Command::SurroundCheck(a) => surround_check(a),
        Command::SplCheck(a) => spl_check(a),
        Command::Orbit(a) => orbit(a),
        Command::FixedPoints(a) => fixed_points(a),
        Command::Render(a) => render(a),
        Command::Components(a) => components(a, out_dir),
        Command::SwProbe(a) => sw_probe(a, out_dir),
        Command::Scenario(a) => suites::run(a),
    }
}

pub(super) fn function(src: &str) -> Result<FunctionExpression, CliError> {
    FunctionExpression::parse(src)
        .map_err(|e| CliError::Usage(format!("cannot parse `{src}`: {e}")))
}

fn pair(z: Complex64) -> [f64; 2] {
    [z.re, z.im]
}

fn to_value<T: serde::Serialize>(v: &T) -> Value {
    serde_json::to_value(v).expect("report types serialize")
}

fn parse_check(a: &ParseCheckArgs) -> Result<Outcome, CliError> {
    let f = function(&a.f.f)?;
    let df = f.derivative();
    let evaluations =
        a.at.iter()
            .map(|s| {
                let z = parse_complex(s)?;
                let e = f.evaluate(z);
                Ok(json!({
                    "z": pair(z),
                    "value": pair(e.value),
                    "derivative": pair(df.eval(z)),
                    "overflowed": e.overflowed,
                }))
            })
            .collect::<Result<Vec<_>, String>>()?;
    Ok(Outcome::new(
        "parse-check",
        true,
        json!({
            "source": f.source(),
            "canonical": f.print(),
            "derivative": df.print(),
            "evaluations": evaluations,
        }),
    ))
}

fn minmod(a: &MinmodArgs) -> Result<Outcome, CliError> {
    let f = function(&a.f.f)?;
    let s = a.sampling.sampling();
    let mut rows = Vec::new();
    let mut minima = Vec::new();
    let mut maxima = Vec::new();
    for &r in &a.r {
        let lo = modulus::min_modulus(&f, r, s.n_coarse, s.tol).map_err(|e| e.to_string())?;
        let mut row = vec![fmt_f64(r), fmt_f64(lo.value), fmt_f64(lo.arg_extremum)];
        if a.max {
            let hi = modulus::max_modulus(&f, r, s.n_coarse, s.tol).map_err(|e| e.to_string())?;
            row.extend([fmt_f64(hi.value), fmt_f64(hi.arg_extremum)]);
            maxima.push(hi);
        }
        minima.push(lo);
        rows.push(row);
    }
    let header: &[&str] = if a.max {
        &["r", "min", "arg_min", "max", "arg_max"]
    } else {
        &["r", "min", "arg_min"]
    };
    let mut report = json!({ "function": f.print(), "sampling": s, "minimum": minima });
    if a.max {
        report["maximum"] = to_value(&maxima);
    }
    Ok(Outcome::new("minmod", true, report).file("minmod.csv", csv_table(header, rows)))
}

fn parse_verdict(s: &str) -> Result<MinModVerdict, String> {
    match s.to_ascii_uppercase().replace('-', "_").as_str() {
        "DIVERGES" => Ok(MinModVerdict::Diverges),
        "NOT_DIVERGING" => Ok(MinModVerdict::NotDiverging),
        "UNDECIDED" => Ok(MinModVerdict::Undecided),
        _ => Err(format!("unknown verdict `{s}`")),
    }
}

fn sequence_csv(seq: &[f64]) -> String {
    csv_table(
        &["n", "m_n"],
        seq.iter()
            .enumerate()
            .map(|(n, &m)| vec![n.to_string(), fmt_f64(m)]),
    )
}

fn minmod_iterate(a: &MinmodIterateArgs) -> Result<Outcome, CliError> {
    let f = function(&a.f.f)?;
    let expect = a.expect.as_deref().map(parse_verdict).transpose()?;
    let rep = modulus::iterate_min_modulus(&f, a.r, a.n_max, a.blow_up, a.sampling.sampling())
        .map_err(|e| e.to_string())?;
    let passed = expect.is_none_or(|v| v == rep.verdict);
    let csv = sequence_csv(&rep.sequence);
    Ok(Outcome::new(
        "minmod-iterate",
        passed,
        json!({
            "function": f.print(),
            "expected": expect,
            "report": rep,
        }),
    )
    .file("minmod-iterate.csv", csv))
}

fn pair_files(name: &str, pairs: &[PairReport]) -> [(String, String); 2] {
    [
        (
            format!("{name}_boundaries.csv"),
            curves_csv(pairs.iter().map(|p| &p.boundary)),
        ),
        (
            format!("{name}_images.csv"),
            curves_csv(pairs.iter().map(|p| &p.image)),
        ),
    ]
}

fn with_files(mut o: Outcome, files: [(String, String); 2]) -> Outcome {
    for (n, b) in files {
        o = o.file(n, b);
    }
    o
}

fn disc_seq(a: &DiscSeqArgs) -> Result<Outcome, CliError> {
    let f = function(&a.f.f)?;
    let opts = a.check.options()?;
    if a.count < 2 {
        return Err(CliError::Usage("--count must be at least 2".into()));
    }
    let seq = modulus::derive_disc_sequence(&f, a.r, a.count, a.sampling.sampling())
        .map_err(|e| e.to_string())?;
    let nested =
        surround::check_nested_surround(&f, &seq.discs, &opts).map_err(|e| e.to_string())?;
    let csv = csv_table(
        &["n", "radius"],
        seq.radii
            .iter()
            .enumerate()
            .map(|(n, &r)| vec![n.to_string(), fmt_f64(r)]),
    );
    let files = pair_files("disc-seq", &nested.pairs);
    let o = Outcome::new(
        "disc-seq",
        nested.condition_a,
        json!({
            "function": f.print(),
            "radii": seq.radii,
            "minmod": seq.report,
            "options": opts,
            "surround": nested,
        }),
    )
    .file("disc-seq.csv", csv);
    Ok(with_files(o, files))
}

fn domain_family(a: &DomainArgs) -> Result<Vec<DomainSpec>, String> {
    if let Some(name) = &a.scenario {
        let sc = scenario::lookup(name).ok_or_else(|| format!("unknown scenario `{name}`"))?;
        let (lo, hi) = match &a.range {
            Some(r) => parse_range(r)?,
            None => sc.default_range,
        };
        return sc.domains(lo, hi).map_err(|e| e.to_string());
    }
    if a.domains.len() < 2 {
        return Err("give at least two --domain values, or --scenario".into());
    }
    a.domains
        .iter()
        .enumerate()
        .map(|(n, s)| parse_domain(s, format!("D_{n}")))
        .collect()
}

fn surround_check(a: &SurroundCheckArgs) -> Result<Outcome, CliError> {
    let f = function(&a.f.f)?;
    let opts = a.check.options()?;
    let domains = domain_family(&a.domains)?;
    let rep = surround::check_nested_surround(&f, &domains, &opts).map_err(|e| e.to_string())?;
    let files = pair_files("surround-check", &rep.pairs);
    let o = Outcome::new(
        "surround-check",
        rep.condition_a,
        json!({ "function": f.print(), "domains": domains, "options": opts, "report": rep }),
    );
    Ok(with_files(o, files))
}

fn spl_check(a: &SplCheckArgs) -> Result<Outcome, CliError> {
    let f = function(&a.f.f)?;
    let opts = a.check.options()?;
    let domains = domain_family(&a.domains)?;
    let rep = surround::check_spl(&f, &domains, &opts).map_err(|e| e.to_string())?;
    let files = pair_files("spl-check", &rep.condition_i);
    let o = Outcome::new(
        "spl-check",
        rep.condition_i_holds && rep.condition_iii_holds,
        json!({ "function": f.print(), "domains": domains, "options": opts, "report": rep }),
    );
    Ok(with_files(o, files))
}

fn orbit(a: &OrbitArgs) -> Result<Outcome, CliError> {
    let f = function(&a.f.f)?;
    let policy = a.policy.policy()?;
    let z0 = parse_complex(&a.z)?;
    let v = orbits::iterate_orbit(&f, z0, &policy, true);
    let class = orbits::class_of(&v.outcome, &policy);
    let trace = v.trace.clone().unwrap_or_default();
    let csv = csv_table(
        &["n", "re", "im"],
        trace
            .iter()
            .enumerate()
            .map(|(n, p)| vec![n.to_string(), fmt_f64(p[0]), fmt_f64(p[1])]),
    );
    Ok(Outcome::new(
        "orbit",
        true,
        json!({
            "function": f.print(),
            "z0": pair(z0),
            "policy": policy,
            "outcome": v.outcome,
            "class": class,
            "steps": trace.len().saturating_sub(1),
        }),
    )
    .file("orbit.csv", csv))
}

fn fixed_points(a: &FixedPointsArgs) -> Result<Outcome, CliError> {
    let f = function(&a.f.f)?;
    let region = parse_domain(&a.region, "region".into())?;
    let opts = a.options();
    let pts = orbits::find_fixed_points(&f, &region, &opts);
    Ok(Outcome::new(
        "fixed-points",
        true,
        json!({ "function": f.print(), "region": region, "options": opts, "fixed_points": pts }),
    ))
}

/// On-disk form of a [`PixelClassification`].
#[derive(serde::Serialize, Deserialize)]
pub(super) struct ClassificationFile {
    pub format: String,
    pub function: String,
    pub grid: GridSpec,
    pub policy: OrbitPolicy,
    pub rows: Vec<String>,
}

pub(super) const CLASSIFICATION_FORMAT: &str = "iplus-classification-1";

pub(super) fn classification_file(f: &FunctionExpression, c: &PixelClassification) -> Vec<u8> {
    json_bytes(&ClassificationFile {
        format: CLASSIFICATION_FORMAT.into(),
        function: f.print(),
        grid: c.grid,
        policy: c.policy,
        rows: c.to_rows(),
    })
}

pub(super) fn class_counts(c: &PixelClassification) -> Value {
    let mut m = serde_json::Map::new();
    for class in PointClass::ALL {
        m.insert(class.as_str().into(), json!(c.count(class)));
    }
    Value::Object(m)
}

fn render(a: &RenderArgs) -> Result<Outcome, CliError> {
    let f = function(&a.f.f)?;
    let policy = a.policy.policy()?;
    let grid = GridSpec::new(parse_rect(&a.grid.window)?, a.grid.nx, a.grid.ny)
        .map_err(|e| e.to_string())?;
    let overlay_class = match a.overlay.as_str() {
        "none" => None,
        s => Some(s.parse::<PointClass>()?),
    };
    let c = raster::classify_grid(&f, &grid, &policy);
    let overlay = overlay_class.map(|t| raster::boundary_pixels(&c, t));
    let ppm = raster::write_ppm(&c, overlay.as_deref());
    let boundary_count = overlay.as_ref().map(|m| m.iter().filter(|&&b| b).count());
    Ok(Outcome::new(
        "render",
        true,
        json!({
            "function": f.print(),
            "grid": grid,
            "pixel_width": grid.pixel_width(),
            "pixel_height": grid.pixel_height(),
            "aspect_distortion": grid.aspect_distortion(),
            "policy": policy,
            "counts": class_counts(&c),
            "overlay_class": overlay_class,
            "boundary_pixels": boundary_count,
        }),
    )
    .file("render.ppm", ppm)
    .file("classification.json", classification_file(&f, &c)))
}

fn load_classification(
    input: Option<&Path>,
    out_dir: &Path,
) -> Result<(String, PixelClassification), CliError> {
    let path = input
        .map(Path::to_path_buf)
        .unwrap_or_else(|| out_dir.join("classification.json"));
    let text = std::fs::read_to_string(&path)
        .map_err(|e| CliError::Io(format!("reading {}: {e}", path.display())))?;
    let file: ClassificationFile = serde_json::from_str(&text)
        .map_err(|e| CliError::Usage(format!("{}: {e}", path.display())))?;
    if file.format != CLASSIFICATION_FORMAT {
        return Err(CliError::Usage(format!(
            "{}: unknown format `{}`",
            path.display(),
            file.format
        )));
    }
    let grid =
        GridSpec::new(file.grid.window, file.grid.nx, file.grid.ny).map_err(|e| e.to_string())?;
    let c =
        PixelClassification::from_rows(grid, file.policy, &file.rows).map_err(|e| e.to_string())?;
    Ok((file.function, c))
}

fn components(a: &ComponentsArgs, out_dir: &Path) -> Result<Outcome, CliError> {
    let conn = a.label.connectivity()?;
    let (function, c) = load_classification(a.label.input.as_deref(), out_dir)?;
    let l = raster::label_components(&c, a.label.target, conn);
    let edge = l.edge_touching().count();
    let passed = a.expect_min_edge.is_none_or(|n| edge >= n);
    Ok(Outcome::new(
        "components",
        passed,
        json!({
            "function": function,
            "grid": c.grid,
            "target": a.label.target,
            "connectivity": conn,
            "component_count": l.component_count(),
            "edge_touching_count": edge,
            "expect_min_edge": a.expect_min_edge,
            "census": l.census,
        }),
    ))
}

fn sw_probe(a: &SwProbeArgs, out_dir: &Path) -> Result<Outcome, CliError> {
    let conn = a.label.connectivity()?;
    let center = parse_complex(&a.center)?;
    let (function, c) = load_classification(a.label.input.as_deref(), out_dir)?;
    let l = raster::label_components(&c, a.label.target, conn);
    let rep = raster::spiders_web_probe(&l, center, &a.radii).map_err(|e| e.to_string())?;
    Ok(Outcome::new(
        "sw-probe",
        true,
        json!({
            "function": function,
            "grid": c.grid,
            "target": a.label.target,
            "connectivity": conn,
            "probe": rep,
        }),
    ))
}
