//! "Surrounds" checks for image curves of domain boundaries, and the
//! nested-domain conditions built on them.
//!
//! A closed curve surrounds a domain when it stays off the closed domain
//! and winds a nonzero number of times about it. Both conditions are
//! tested on samples: the polygonal curve's distance to the closed
//! domain, and unanimous nonzero winding on a probe lattice inside the
//! domain. Conditions quantified over all `n` are only checked on the
//! finite family supplied, and reports say so.

use num_complex::Complex64;
use rayon::prelude::*;
use serde::Serialize;
use thiserror::Error;

use crate::curve::{self, Clearance, CurveError, Refinement, SampledCurve};
use crate::domain::DomainSpec;
use crate::funcspec::FunctionExpression;

pub use crate::domain::{Rect, Shape};

pub const FINITE_HORIZON_NOTE: &str =
    "finite horizon: conditions stated for all n are checked only on the supplied family of domains";

#[derive(Debug, Clone, Error)]
pub enum SurroundError {
    #[error("need at least two domains, got {0}")]
    TooFewDomains(usize),
    #[error("probe grid must be at least 1")]
    EmptyProbeGrid,
    #[error(transparent)]
    Curve(#[from] CurveError),
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ProbeWinding {
    pub point: [f64; 2],
    pub winding: i64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ProbeFailure {
    pub point: [f64; 2],
    pub error: String,
}

/// Evidence for or against "curve surrounds domain".
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SurroundReport {
    pub verdict: bool,
    /// Minimum distance from the polygonal curve to the closed domain.
    pub min_distance: f64,
    /// Largest depth of a curve sample inside the open domain.
    pub max_penetration: f64,
    /// Which separation test decided the verdict.
    pub separation: Separation,
    /// Tolerance of that test: allowed penetration for an open target,
    /// required clearance ε for a closure.
    pub tolerance: f64,
    pub winding_values: Vec<ProbeWinding>,
    pub probes_tested: usize,
    pub probe_failures: Vec<ProbeFailure>,
    pub reason: Option<String>,
}

/// How a curve must stay away from the target domain.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Separation {
    /// Curve samples stay out of the open domain; touching its boundary
    /// (up to the tolerance) is allowed.
    Open,
    /// The polygonal curve keeps distance greater than ε from the closed domain.
    Closure,
}

/// Allowed sample penetration into an open target, relative to its diameter.
pub const DEFAULT_TOUCH_TOLERANCE: f64 = 1e-9;

/// Probe points: centres of a `grid × grid` lattice over the bounding box,
/// clipped to the open domain, with an interior point as fallback.
pub fn probe_points(domain: &DomainSpec, grid: usize) -> Vec<Complex64> {
    let b = domain.bounding_box();
    let g = grid as f64;
    let mut out: Vec<Complex64> = (0..grid)
        .flat_map(|j| (0..grid).map(move |i| (i, j)))
        .map(|(i, j)| {
            Complex64::new(
                b.x_min + (i as f64 + 0.5) * b.width() / g,
                b.y_min + (j as f64 + 0.5) * b.height() / g,
            )
        })
        .filter(|&p| domain.contains(p))
        .collect();
    if out.is_empty() {
        out.push(domain.interior_point());
    }
    out
}

pub fn curve_domain_distance(curve: &SampledCurve, domain: &DomainSpec) -> f64 {
    if curve.len() == 1 {
        return domain.distance(curve.points[0]);
    }
    curve
        .segments()
        .map(|(a, b)| domain.distance_to_segment(a, b))
        .fold(f64::INFINITY, f64::min)
}

pub fn max_penetration(curve: &SampledCurve, domain: &DomainSpec) -> f64 {
    curve
        .points
        .iter()
        .map(|&p| domain.depth(p))
        .fold(0.0, f64::max)
}

/// Whether `curve` surrounds the open `domain`: no sample enters the open
/// domain (beyond a touching tolerance of 1e-9 × diameter) and the curve
/// winds the same nonzero number of times about every probe.
pub fn surrounds(
    curve: &SampledCurve,
    domain: &DomainSpec,
    probe_grid: usize,
) -> Result<SurroundReport, SurroundError> {
    surrounds_with(
        curve,
        domain,
        probe_grid,
        Separation::Open,
        DEFAULT_TOUCH_TOLERANCE * domain.diameter(),
    )
}

/// Whether `curve` surrounds the closure of `domain`, with the domain
/// inflated by `eps` for the distance test.
pub fn surrounds_closure(
    curve: &SampledCurve,
    domain: &DomainSpec,
    probe_grid: usize,
    eps: f64,
) -> Result<SurroundReport, SurroundError> {
    surrounds_with(curve, domain, probe_grid, Separation::Closure, eps)
}

pub fn surrounds_with(
    curve: &SampledCurve,
    domain: &DomainSpec,
    probe_grid: usize,
    separation: Separation,
    tolerance: f64,
) -> Result<SurroundReport, SurroundError> {
    if !curve.closed {
        return Err(CurveError::NotClosed.into());
    }
    if probe_grid == 0 {
        return Err(SurroundError::EmptyProbeGrid);
    }
    let min_distance = curve_domain_distance(curve, domain);
    let penetration = max_penetration(curve, domain);
    let clear = match separation {
        Separation::Open => penetration <= tolerance,
        Separation::Closure => min_distance > tolerance,
    };
    let probes = probe_points(domain, probe_grid);
    let mut winding_values = Vec::with_capacity(probes.len());
    let mut probe_failures = Vec::new();
    for &p in &probes {
        match curve::winding_number(curve, p, 0.0) {
            Ok(w) => winding_values.push(ProbeWinding {
                point: [p.re, p.im],
                winding: w,
            }),
            // A curve that already meets the domain can pass through probes.
            Err(e) if !clear => probe_failures.push(ProbeFailure {
                point: [p.re, p.im],
                error: e.to_string(),
            }),
            Err(e) => return Err(e.into()),
        }
    }
    let first = winding_values.first().map(|w| w.winding);
    let unanimous =
        probe_failures.is_empty() && winding_values.iter().all(|w| Some(w.winding) == first);
    let nonzero = first.is_some_and(|w| w != 0);
    let reason = if !clear {
        Some(match separation {
            Separation::Open => format!(
                "curve enters the open domain to depth {penetration:e} (tolerance {tolerance:e})"
            ),
            Separation::Closure => format!(
                "curve comes within {min_distance:e} of the closed domain (ε = {tolerance:e})"
            ),
        })
    } else if !unanimous {
        Some("winding numbers disagree across probes".to_string())
    } else if !nonzero {
        Some("curve has winding number 0 about the domain".to_string())
    } else {
        None
    };
    Ok(SurroundReport {
        verdict: clear && unanimous && nonzero,
        min_distance,
        max_penetration: penetration,
        separation,
        tolerance,
        winding_values,
        probes_tested: probes.len(),
        probe_failures,
        reason,
    })
}

/// Sampling and refinement settings for the nested-domain checks.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct CheckOptions {
    /// Boundary samples per unit length.
    pub density: f64,
    pub probe_grid: usize,
    /// Absolute image-chord bound as a fraction of the target domain's diameter.
    pub max_step_fraction: f64,
    pub max_points: usize,
    /// Chords shorter than this fraction of their distance to the target are accepted.
    pub clearance_fraction: f64,
    /// Closure inflation as a fraction of the domain diameter.
    pub closure_eps_fraction: f64,
}

impl Default for CheckOptions {
    fn default() -> Self {
        Self {
            density: 4.0,
            probe_grid: 5,
            max_step_fraction: 1e-2,
            max_points: 2_000_000,
            clearance_fraction: 0.5,
            closure_eps_fraction: 1e-9,
        }
    }
}

/// Boundary of `source`, its image under `f`, and the surround test
/// against `target`.
#[derive(Debug, Clone, Serialize)]
pub struct PairReport {
    pub index: usize,
    pub source_label: String,
    pub target_label: String,
    pub boundary_points: usize,
    pub image_points: usize,
    pub budget_hit: bool,
    pub surround: SurroundReport,
    #[serde(skip)]
    pub boundary: SampledCurve,
    #[serde(skip)]
    pub image: SampledCurve,
}

fn image_pair(
    f: &FunctionExpression,
    index: usize,
    source: &DomainSpec,
    target: &DomainSpec,
    closure: bool,
    opts: &CheckOptions,
) -> Result<PairReport, SurroundError> {
    let boundary = curve::boundary(source, opts.density)?;
    let policy = Refinement {
        max_step: opts.max_step_fraction * target.diameter(),
        max_points: opts.max_points,
        clearance: Some(Clearance {
            domain: target.clone(),
            fraction: opts.clearance_fraction,
        }),
    };
    let (image, budget_hit) = match curve::image_curve_with(f, &boundary, &policy) {
        Ok(c) => (c, false),
        Err(CurveError::RefinementBudgetExceeded { partial, .. }) => (*partial, true),
        Err(e) => return Err(e.into()),
    };
    let mut surround = if closure {
        surrounds_closure(
            &image,
            target,
            opts.probe_grid,
            opts.closure_eps_fraction * target.diameter(),
        )?
    } else {
        surrounds(&image, target, opts.probe_grid)?
    };
    if budget_hit {
        surround.verdict = false;
        surround.reason = Some("image refinement budget exhausted".into());
    }
    Ok(PairReport {
        index,
        source_label: source.label.clone(),
        target_label: target.label.clone(),
        boundary_points: boundary.len(),
        image_points: image.len(),
        budget_hit,
        surround,
        boundary,
        image,
    })
}

fn inradii(domains: &[DomainSpec]) -> Vec<f64> {
    domains
        .iter()
        .map(|d| d.inradius_about(Complex64::new(0.0, 0.0)))
        .collect()
}

fn strictly_increasing(v: &[f64]) -> bool {
    v.windows(2).all(|w| w[1] > w[0])
}

/// Per-pair results for "f(∂Dₙ) surrounds D_{n+1}" and the inradius proxy
/// for "every disc about 0 eventually lies in Dₙ".
#[derive(Debug, Clone, Serialize)]
pub struct NestedSurroundReport {
    pub pairs: Vec<PairReport>,
    /// All surround verdicts hold.
    pub condition_a: bool,
    /// Inradius about 0 of each domain.
    pub inradii: Vec<f64>,
    /// Finite-horizon proxy: inradii strictly increase along the family.
    pub inradius_increasing: bool,
    pub note: &'static str,
}

/// Checks `f(∂Dₙ)` surrounds `D_{n+1}` for each consecutive pair.
pub fn check_nested_surround(
    f: &FunctionExpression,
    domains: &[DomainSpec],
    opts: &CheckOptions,
) -> Result<NestedSurroundReport, SurroundError> {
    if domains.len() < 2 {
        return Err(SurroundError::TooFewDomains(domains.len()));
    }
    if opts.probe_grid == 0 {
        return Err(SurroundError::EmptyProbeGrid);
    }
    let pairs = (0..domains.len() - 1)
        .into_par_iter()
        .map(|n| image_pair(f, n, &domains[n], &domains[n + 1], false, opts))
        .collect::<Result<Vec<_>, _>>()?;
    let radii = inradii(domains);
    Ok(NestedSurroundReport {
        condition_a: pairs.iter().all(|p| p.surround.verdict),
        inradius_increasing: strictly_increasing(&radii),
        inradii: radii,
        pairs,
        note: FINITE_HORIZON_NOTE,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ContainmentEntry {
    pub index: usize,
    /// Closure of domain `index` lies in the open domain `index + 1`.
    pub holds: bool,
}

/// Strongly-polynomial-like conditions on a finite family:
/// (i) `f(∂Dₙ)` surrounds `D̄ₙ`, (ii) inradius growth proxy for
/// `⋃ Dₙ = ℂ`, (iii) `D̄ₙ ⊂ D_{n+1}`.
#[derive(Debug, Clone, Serialize)]
pub struct SplReport {
    pub condition_i: Vec<PairReport>,
    pub condition_i_holds: bool,
    pub inradii: Vec<f64>,
    pub condition_ii_proxy: bool,
    pub condition_iii: Vec<ContainmentEntry>,
    pub condition_iii_holds: bool,
    pub note: &'static str,
}

pub fn check_spl(
    f: &FunctionExpression,
    domains: &[DomainSpec],
    opts: &CheckOptions,
) -> Result<SplReport, SurroundError> {
    if domains.len() < 2 {
        return Err(SurroundError::TooFewDomains(domains.len()));
    }
    if opts.probe_grid == 0 {
        return Err(SurroundError::EmptyProbeGrid);
    }
    let own = (0..domains.len())
        .into_par_iter()
        .map(|n| image_pair(f, n, &domains[n], &domains[n], true, opts))
        .collect::<Result<Vec<_>, _>>()?;
    let containment: Vec<ContainmentEntry> = domains
        .windows(2)
        .enumerate()
        .map(|(index, w)| ContainmentEntry {
            index,
            holds: w[0].closure_within(&w[1]),
        })
        .collect();
    let radii = inradii(domains);
    Ok(SplReport {
        condition_i_holds: own.iter().all(|p| p.surround.verdict),
        condition_i: own,
        condition_ii_proxy: strictly_increasing(&radii),
        inradii: radii,
        condition_iii_holds: containment.iter().all(|c| c.holds),
        condition_iii: containment,
        note: FINITE_HORIZON_NOTE,
    })
}
