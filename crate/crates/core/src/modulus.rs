//! Minimum and maximum modulus of a function on circles `|z| = r`, the
//! iterated minimum-modulus map and the disc sequence it generates.

use std::f64::consts::TAU;

use num_complex::Complex64;
use serde::Serialize;
use thiserror::Error;

use crate::domain::DomainSpec;
use crate::funcspec::FunctionExpression;

pub const DEFAULT_N_COARSE: usize = 4096;
pub const DEFAULT_ANGLE_TOL: f64 = 1e-12;
/// Threshold above which an iterated minimum modulus counts as diverged.
pub const DEFAULT_BLOW_UP: f64 = 1e50;
/// Values below this end the iteration: `f` has (numerically) a zero on the circle.
pub const FLOOR: f64 = 1e-12;
/// Relative distance under which a value counts as a revisit.
pub const REVISIT_TOL: f64 = 1e-9;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ModulusError {
    #[error("radius must be positive and finite, got {0}")]
    InvalidRadius(f64),
    #[error("need at least 64 coarse samples, got {0}")]
    TooFewSamples(usize),
    #[error("angular tolerance must be positive, got {0}")]
    InvalidTolerance(f64),
}

/// Sampling parameters shared by [`min_modulus`] and [`max_modulus`].
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct CircleSampling {
    pub n_coarse: usize,
    pub tol: f64,
}

impl Default for CircleSampling {
    fn default() -> Self {
        Self {
            n_coarse: DEFAULT_N_COARSE,
            tol: DEFAULT_ANGLE_TOL,
        }
    }
}

/// Extremum of `|f|` on one circle.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct RadialExtremum {
    pub radius: f64,
    pub value: f64,
    /// Angle in `[0, 2π)` where the extremum was found.
    pub arg_extremum: f64,
    pub samples_used: usize,
    /// Whether the reported value came out of a ternary refinement.
    pub refined: bool,
}

#[derive(Clone, Copy, PartialEq, Eq)]
enum Extremum {
    Min,
    Max,
}

/// Minimum of `|f|` over `|z| = r`.
///
/// Samples `n_coarse` equally spaced angles, then ternary-searches the
/// bracket around every coarse local minimum (and the coarse argmin)
/// until it is narrower than `tol`.
pub fn min_modulus(
    f: &FunctionExpression,
    r: f64,
    n_coarse: usize,
    tol: f64,
) -> Result<RadialExtremum, ModulusError> {
    circle_extremum(f, r, CircleSampling { n_coarse, tol }, Extremum::Min)
}

/// Maximum of `|f|` over `|z| = r`; see [`min_modulus`].
pub fn max_modulus(
    f: &FunctionExpression,
    r: f64,
    n_coarse: usize,
    tol: f64,
) -> Result<RadialExtremum, ModulusError> {
    circle_extremum(f, r, CircleSampling { n_coarse, tol }, Extremum::Max)
}

fn circle_extremum(
    f: &FunctionExpression,
    r: f64,
    sampling: CircleSampling,
    kind: Extremum,
) -> Result<RadialExtremum, ModulusError> {
    if !(r.is_finite() && r > 0.0) {
        return Err(ModulusError::InvalidRadius(r));
    }
    if sampling.n_coarse < 64 {
        return Err(ModulusError::TooFewSamples(sampling.n_coarse));
    }
    if !(sampling.tol > 0.0) {
        return Err(ModulusError::InvalidTolerance(sampling.tol));
    }
    // Work with a score that is minimized in both cases.
    let score = |theta: f64| -> f64 {
        let m = f.eval(Complex64::from_polar(r, theta)).norm();
        match kind {
            Extremum::Min => m,
            Extremum::Max => -m,
        }
    };
    let n = sampling.n_coarse;
    let step = TAU / n as f64;
    let coarse: Vec<f64> = (0..n).map(|k| score(k as f64 * step)).collect();
    let mut samples = n;

    let argbest = (0..n)
        .min_by(|&a, &b| coarse[a].total_cmp(&coarse[b]))
        .unwrap_or(0);
    let mut best = (coarse[argbest], argbest as f64 * step, false);

    let mut candidates: Vec<usize> = (0..n)
        .filter(|&k| {
            let prev = coarse[(k + n - 1) % n];
            let next = coarse[(k + 1) % n];
            coarse[k] < prev && coarse[k] <= next
        })
        .collect();
    if !candidates.contains(&argbest) {
        candidates.push(argbest);
    }

    for k in candidates {
        let (mut lo, mut hi) = ((k as f64 - 1.0) * step, (k as f64 + 1.0) * step);
        while hi - lo > sampling.tol {
            let m1 = lo + (hi - lo) / 3.0;
            let m2 = hi - (hi - lo) / 3.0;
            let (s1, s2) = (score(m1), score(m2));
            samples += 2;
            if s1 <= s2 {
                hi = m2;
            } else {
                lo = m1;
            }
            // Bracket ends no longer separable in floating point.
            if m1 <= lo && m2 >= hi {
                break;
            }
        }
        let mid = 0.5 * (lo + hi);
        let s = score(mid);
        samples += 1;
        if s <= best.0 {
            best = (s, mid, true);
        }
    }

    let value = match kind {
        Extremum::Min => best.0,
        Extremum::Max => -best.0,
    };
    Ok(RadialExtremum {
        radius: r,
        value,
        arg_extremum: best.1.rem_euclid(TAU),
        samples_used: samples,
        refined: best.2,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum MinModVerdict {
    Diverges,
    NotDiverging,
    Undecided,
}

/// Evidence behind a [`MinModVerdict`].
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Witness {
    /// `sequence[index]` exceeded the blow-up threshold.
    BlowUp { index: usize, value: f64 },
    /// `sequence[index]` matched the earlier `sequence[earlier]`.
    Revisit { index: usize, earlier: usize },
    /// `sequence[index]` fell below [`FLOOR`].
    Floor { index: usize, value: f64 },
    /// The step budget ran out.
    Budget { steps: usize },
}

/// Outcome of iterating `r ↦ m(r)`.
///
/// The verdicts are finite-budget evidence: a threshold crossing does
/// not prove divergence and a revisit does not prove boundedness of
/// every later iterate.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MinModIterationReport {
    pub r0: f64,
    /// `sequence[0] = r0`, `sequence[k + 1] = m(sequence[k])`.
    pub sequence: Vec<f64>,
    pub verdict: MinModVerdict,
    pub witness: Witness,
    pub blow_up: f64,
    pub note: &'static str,
}

pub const HEURISTIC_NOTE: &str =
    "finite-budget heuristic: DIVERGES means the blow-up threshold was crossed, not a proof of divergence";

/// Iterates the minimum-modulus map from `r0` for at most `n_max` steps.
pub fn iterate_min_modulus(
    f: &FunctionExpression,
    r0: f64,
    n_max: usize,
    blow_up: f64,
    sampling: CircleSampling,
) -> Result<MinModIterationReport, ModulusError> {
    if !(r0.is_finite() && r0 > 0.0) {
        return Err(ModulusError::InvalidRadius(r0));
    }
    let mut sequence = vec![r0];
    let finish = |sequence: Vec<f64>, verdict, witness| MinModIterationReport {
        r0,
        sequence,
        verdict,
        witness,
        blow_up,
        note: HEURISTIC_NOTE,
    };
    for step in 1..=n_max.max(1) {
        let current = sequence[step - 1];
        let next = circle_extremum(f, current, sampling, Extremum::Min)?.value;
        sequence.push(next);
        if next > blow_up {
            return Ok(finish(
                sequence,
                MinModVerdict::Diverges,
                Witness::BlowUp {
                    index: step,
                    value: next,
                },
            ));
        }
        if next < FLOOR {
            return Ok(finish(
                sequence,
                MinModVerdict::NotDiverging,
                Witness::Floor {
                    index: step,
                    value: next,
                },
            ));
        }
        if let Some(earlier) = sequence[..step]
            .iter()
            .position(|&s| (next - s).abs() <= REVISIT_TOL * next.abs().max(s.abs()))
        {
            return Ok(finish(
                sequence,
                MinModVerdict::NotDiverging,
                Witness::Revisit {
                    index: step,
                    earlier,
                },
            ));
        }
    }
    Ok(finish(
        sequence,
        MinModVerdict::Undecided,
        Witness::Budget {
            steps: n_max.max(1),
        },
    ))
}

/// Discs `|z| < mⁿ(r0)` for `n = 0..count`, with the iteration report.
#[derive(Debug, Clone)]
pub struct DiscSequence {
    pub discs: Vec<DomainSpec>,
    pub radii: Vec<f64>,
    pub report: MinModIterationReport,
}

/// Builds the disc sequence `D'ₙ = {|z| < mⁿ(r0)}`, `n = 0..count`.
///
/// Radii are produced for all `count` indices even when the verdict
/// logic would have stopped earlier; a radius that is not a valid disc
/// radius (zero or non-finite) is an error.
pub fn derive_disc_sequence(
    f: &FunctionExpression,
    r0: f64,
    count: usize,
    sampling: CircleSampling,
) -> Result<DiscSequence, ModulusError> {
    if !(r0.is_finite() && r0 > 0.0) {
        return Err(ModulusError::InvalidRadius(r0));
    }
    let count = count.max(1);
    let mut radii = vec![r0];
    while radii.len() < count {
        let r = *radii.last().unwrap_or(&r0);
        let next = circle_extremum(f, r, sampling, Extremum::Min)?.value;
        if !(next.is_finite() && next > 0.0) {
            return Err(ModulusError::InvalidRadius(next));
        }
        radii.push(next);
    }
    let report = iterate_min_modulus(
        f,
        r0,
        count.saturating_sub(1).max(1),
        DEFAULT_BLOW_UP,
        sampling,
    )?;
    let discs = radii
        .iter()
        .enumerate()
        .map(|(n, &r)| {
            DomainSpec::disc(Complex64::new(0.0, 0.0), r, format!("D'_{n}"))
                .map_err(|_| ModulusError::InvalidRadius(r))
        })
        .collect::<Result<Vec<_>, _>>()?;
    Ok(DiscSequence {
        discs,
        radii,
        report,
    })
}
