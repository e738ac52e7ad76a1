//! Finite-budget orbit iteration, bounded/unbounded heuristics and fixed
//! points with multiplier classification.
//!
//! Whether an orbit is unbounded cannot be decided from finitely many
//! iterates. Orbits are sorted into three outcomes (escaped past a
//! radius, locked onto a cycle, or budget exhausted) and these map onto
//! "unbounded suspect", "bounded suspect" and "undecided".

use std::collections::VecDeque;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::domain::DomainSpec;
use crate::funcspec::FunctionExpression;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum PolicyError {
    #[error("budget must be at least 1")]
    ZeroBudget,
    #[error("escape radius must be positive and finite, got {0}")]
    InvalidEscapeRadius(f64),
    #[error("cycle tolerance must be positive, got {0}")]
    InvalidCycleTol(f64),
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct OrbitPolicy {
    pub budget: usize,
    pub escape_radius: f64,
    pub cycle_tol: f64,
    pub cycle_window: usize,
}

impl Default for OrbitPolicy {
    fn default() -> Self {
        Self {
            budget: 200,
            escape_radius: 1e6,
            cycle_tol: 1e-9,
            cycle_window: 32,
        }
    }
}

impl OrbitPolicy {
    pub fn new(
        budget: usize,
        escape_radius: f64,
        cycle_tol: f64,
        cycle_window: usize,
    ) -> Result<Self, PolicyError> {
        let p = Self {
            budget,
            escape_radius,
            cycle_tol,
            cycle_window,
        };
        p.validate()?;
        Ok(p)
    }

    pub fn validate(&self) -> Result<(), PolicyError> {
        if self.budget == 0 {
            return Err(PolicyError::ZeroBudget);
        }
        if !(self.escape_radius.is_finite() && self.escape_radius > 0.0) {
            return Err(PolicyError::InvalidEscapeRadius(self.escape_radius));
        }
        if !(self.cycle_tol > 0.0) {
            return Err(PolicyError::InvalidCycleTol(self.cycle_tol));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[serde(tag = "kind", rename_all = "SCREAMING_SNAKE_CASE")]
pub enum OrbitOutcome {
    /// `|fⁿ(z0)| ≥ escape_radius` first at `step` (overflow counts).
    Escaped {
        step: usize,
        modulus: f64,
    },
    /// A near-return confirmed by replaying one full period.
    CycleLocked {
        period: usize,
        representative: [f64; 2],
    },
    BudgetExhausted {
        max_modulus: f64,
    },
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct OrbitVerdict {
    pub outcome: OrbitOutcome,
    /// `z0, f(z0), f²(z0), …` when requested.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub trace: Option<Vec<[f64; 2]>>,
}

/// Iterates `f` from `z0` under `policy`.
pub fn iterate_orbit(
    f: &FunctionExpression,
    z0: Complex64,
    policy: &OrbitPolicy,
    keep_trace: bool,
) -> OrbitVerdict {
    let mut trace = keep_trace.then(|| vec![[z0.re, z0.im]]);
    let finish = |outcome, trace| OrbitVerdict { outcome, trace };

    let m0 = z0.norm();
    if !(m0 < policy.escape_radius) {
        let modulus = if m0.is_finite() { m0 } else { f64::MAX };
        return finish(OrbitOutcome::Escaped { step: 0, modulus }, trace);
    }
    let mut max_modulus = m0;
    // (step, point) of the most recent iterates.
    let mut window: VecDeque<(usize, Complex64)> = VecDeque::with_capacity(policy.cycle_window + 1);
    window.push_back((0, z0));
    let mut z = z0;
    let mut step = 0;

    while step < policy.budget {
        let e = f.evaluate(z);
        z = e.value;
        step += 1;
        if let Some(t) = trace.as_mut() {
            t.push([z.re, z.im]);
        }
        let m = z.norm();
        if e.overflowed || !(m < policy.escape_radius) {
            let modulus = if e.overflowed || !m.is_finite() {
                f64::MAX
            } else {
                m
            };
            return finish(OrbitOutcome::Escaped { step, modulus }, trace);
        }
        max_modulus = max_modulus.max(m);

        // Most recent earlier point within tolerance gives the shortest period.
        let near = window
            .iter()
            .rev()
            .find(|(_, p)| (z - p).norm() < policy.cycle_tol)
            .map(|&(s, _)| step - s);
        if let Some(period) = near {
            // Replay one full period from z; the replayed steps count
            // against the budget.
            let mut w = z;
            let mut escaped = None;
            for k in 1..=period {
                let e = f.evaluate(w);
                w = e.value;
                if let Some(t) = trace.as_mut() {
                    t.push([w.re, w.im]);
                }
                let m = w.norm();
                if e.overflowed || !(m < policy.escape_radius) {
                    escaped = Some((step + k, if e.overflowed { f64::MAX } else { m }));
                    break;
                }
                max_modulus = max_modulus.max(m);
            }
            if let Some((s, modulus)) = escaped {
                return finish(OrbitOutcome::Escaped { step: s, modulus }, trace);
            }
            if (w - z).norm() < policy.cycle_tol {
                return finish(
                    OrbitOutcome::CycleLocked {
                        period,
                        representative: [z.re, z.im],
                    },
                    trace,
                );
            }
            step += period;
            z = w;
        }

        window.push_back((step, z));
        while window.len() > policy.cycle_window.max(1) {
            window.pop_front();
        }
    }
    finish(OrbitOutcome::BudgetExhausted { max_modulus }, trace)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum PointClass {
    UnboundedSuspect,
    BoundedSuspect,
    Undecided,
}

impl PointClass {
    pub const ALL: [PointClass; 3] = [
        PointClass::UnboundedSuspect,
        PointClass::BoundedSuspect,
        PointClass::Undecided,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            PointClass::UnboundedSuspect => "UNBOUNDED_SUSPECT",
            PointClass::BoundedSuspect => "BOUNDED_SUSPECT",
            PointClass::Undecided => "UNDECIDED",
        }
    }
}

impl std::str::FromStr for PointClass {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.to_ascii_lowercase().replace('-', "_").as_str() {
            "unbounded_suspect" | "unbounded" | "u" => Ok(PointClass::UnboundedSuspect),
            "bounded_suspect" | "bounded" | "b" => Ok(PointClass::BoundedSuspect),
            "undecided" | "?" => Ok(PointClass::Undecided),
            _ => Err(format!("unknown class `{s}`")),
        }
    }
}

/// Maps an orbit verdict onto the three point classes.
pub fn class_of(outcome: &OrbitOutcome, policy: &OrbitPolicy) -> PointClass {
    match *outcome {
        OrbitOutcome::Escaped { .. } => PointClass::UnboundedSuspect,
        OrbitOutcome::CycleLocked { .. } => PointClass::BoundedSuspect,
        OrbitOutcome::BudgetExhausted { max_modulus }
            if max_modulus < policy.escape_radius / 100.0 =>
        {
            PointClass::BoundedSuspect
        }
        OrbitOutcome::BudgetExhausted { .. } => PointClass::Undecided,
    }
}

/// Heuristic class of `z0`: escaped orbits are unbounded suspects, cycles
/// and orbits that stayed two orders of magnitude below the escape
/// radius are bounded suspects, anything else is undecided.
pub fn classify_point(f: &FunctionExpression, z0: Complex64, policy: &OrbitPolicy) -> PointClass {
    class_of(&iterate_orbit(f, z0, policy, false).outcome, policy)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum FixedPointClass {
    Superattracting,
    Attracting,
    Indifferent,
    Repelling,
}

pub const MULTIPLIER_TOL: f64 = 1e-8;

impl FixedPointClass {
    pub fn from_multiplier(m: Complex64) -> Self {
        let a = m.norm();
        if a <= MULTIPLIER_TOL {
            FixedPointClass::Superattracting
        } else if (a - 1.0).abs() <= MULTIPLIER_TOL {
            FixedPointClass::Indifferent
        } else if a < 1.0 {
            FixedPointClass::Attracting
        } else {
            FixedPointClass::Repelling
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct FixedPointRecord {
    pub location: [f64; 2],
    pub multiplier: [f64; 2],
    pub class: FixedPointClass,
    /// `|f(z) - z|` at `location`.
    pub residual: f64,
}

impl FixedPointRecord {
    pub fn location(&self) -> Complex64 {
        Complex64::new(self.location[0], self.location[1])
    }

    pub fn multiplier(&self) -> Complex64 {
        Complex64::new(self.multiplier[0], self.multiplier[1])
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct NewtonOptions {
    pub seeds_per_axis: usize,
    pub newton_tol: f64,
    pub max_newton: usize,
}

impl Default for NewtonOptions {
    fn default() -> Self {
        Self {
            seeds_per_axis: 24,
            newton_tol: 1e-12,
            max_newton: 100,
        }
    }
}

const DEDUP_RADIUS: f64 = 1e-6;

/// Fixed points of `f` in the closure of `region`, found by Newton's
/// method on `f(z) - z` from a lattice of seeds over its bounding box.
///
/// Seeds that do not converge are dropped. Roots within 1e-6 of each
/// other are merged, keeping the smaller residual. The result is sorted
/// by real part, then imaginary part.
pub fn find_fixed_points(
    f: &FunctionExpression,
    region: &DomainSpec,
    opts: &NewtonOptions,
) -> Vec<FixedPointRecord> {
    let b = region.bounding_box();
    let n = opts.seeds_per_axis.max(1);
    let seeds = (0..n)
        .flat_map(|j| (0..n).map(move |i| (i, j)))
        .map(|(i, j)| {
            Complex64::new(
                b.x_min + (i as f64 + 0.5) * b.width() / n as f64,
                b.y_min + (j as f64 + 0.5) * b.height() / n as f64,
            )
        });

    let mut found: Vec<(Complex64, f64)> = Vec::new();
    for seed in seeds {
        let Some(root) = newton(f, seed, opts.max_newton) else {
            continue;
        };
        // Residual re-checked independently of the Newton loop.
        let residual = (f.eval(root) - root).norm();
        if !(residual < opts.newton_tol) || !region.contains_closed(root) {
            continue;
        }
        match found
            .iter_mut()
            .find(|(z, _)| (z - root).norm() < DEDUP_RADIUS)
        {
            Some(entry) if residual < entry.1 => *entry = (root, residual),
            Some(_) => {}
            None => found.push((root, residual)),
        }
    }
    found.sort_by(|a, b| a.0.re.total_cmp(&b.0.re).then(a.0.im.total_cmp(&b.0.im)));
    found
        .into_iter()
        .map(|(z, residual)| {
            let m = f.eval_derivative(z).value;
            FixedPointRecord {
                location: [z.re, z.im],
                multiplier: [m.re, m.im],
                class: FixedPointClass::from_multiplier(m),
                residual,
            }
        })
        .collect()
}

fn newton(f: &FunctionExpression, seed: Complex64, max_steps: usize) -> Option<Complex64> {
    let mut z = seed;
    for _ in 0..max_steps {
        let g = f.eval(z) - z;
        let dg = f.eval_derivative(z).value - 1.0;
        if dg.norm() == 0.0 {
            break;
        }
        let step = g / dg;
        if !(step.re.is_finite() && step.im.is_finite()) {
            break;
        }
        z -= step;
        if step.norm() <= 1e-15 * z.norm().max(1.0) {
            break;
        }
    }
    (z.re.is_finite() && z.im.is_finite()).then_some(z)
}

#[cfg(test)]
mod tests {
    use std::f64::consts::PI;

    use super::*;
    use crate::domain::Rect;

    fn parse(s: &str) -> FunctionExpression {
        FunctionExpression::parse(s).unwrap()
    }

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn squaring_escapes_at_step_five() {
        let v = iterate_orbit(&parse("z^2"), c(2.0, 0.0), &OrbitPolicy::default(), true);
        assert_eq!(
            v.outcome,
            OrbitOutcome::Escaped {
                step: 5,
                modulus: 2f64.powi(32)
            }
        );
        assert_eq!(v.trace.unwrap().len(), 6);
    }

    #[test]
    fn superattracting_fixed_point_locks() {
        let v = iterate_orbit(
            &parse("cos(z)+z"),
            c(PI / 2.0, 0.0),
            &OrbitPolicy::default(),
            false,
        );
        match v.outcome {
            OrbitOutcome::CycleLocked {
                period,
                representative,
            } => {
                assert_eq!(period, 1);
                assert!((representative[0] - PI / 2.0).abs() < 1e-12);
            }
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn sine_real_orbit_stays_small() {
        let policy = OrbitPolicy::default();
        let v = iterate_orbit(&parse("sin(z)"), c(1.0, 0.0), &policy, true);
        assert!(
            matches!(v.outcome, OrbitOutcome::BudgetExhausted { max_modulus } if max_modulus <= 1.0)
        );
        assert!(v.trace.unwrap()[1..]
            .iter()
            .all(|p| p[0].abs() <= 1.0 && p[1] == 0.0));
        assert_eq!(
            classify_point(&parse("sin(z)"), c(1.0, 0.0), &policy),
            PointClass::BoundedSuspect
        );
    }

    #[test]
    fn classification_of_escape() {
        assert_eq!(
            classify_point(&parse("z^2"), c(2.0, 0.0), &OrbitPolicy::default()),
            PointClass::UnboundedSuspect
        );
        // Overflow counts as escape.
        let v = iterate_orbit(
            &parse("exp(z)"),
            c(800.0, 0.0),
            &OrbitPolicy::default(),
            false,
        );
        assert_eq!(
            v.outcome,
            OrbitOutcome::Escaped {
                step: 1,
                modulus: f64::MAX
            }
        );
    }

    #[test]
    fn undecided_when_orbit_wanders_high() {
        // Irrational rotation at modulus 5e4: never locks, never escapes.
        let policy = OrbitPolicy {
            budget: 20,
            ..OrbitPolicy::default()
        };
        let f = parse("exp(0.1i)*z");
        let v = iterate_orbit(&f, c(5e4, 0.0), &policy, false);
        assert!(matches!(v.outcome, OrbitOutcome::BudgetExhausted { .. }));
        assert_eq!(
            classify_point(&f, c(5e4, 0.0), &policy),
            PointClass::Undecided
        );
    }

    #[test]
    fn period_two_cycle() {
        let v = iterate_orbit(&parse("-z"), c(0.5, 0.25), &OrbitPolicy::default(), false);
        assert!(matches!(
            v.outcome,
            OrbitOutcome::CycleLocked { period: 2, .. }
        ));
    }

    #[test]
    fn policy_validation() {
        assert_eq!(
            OrbitPolicy::new(0, 1.0, 1e-9, 4),
            Err(PolicyError::ZeroBudget)
        );
        assert!(OrbitPolicy::new(1, -1.0, 1e-9, 4).is_err());
        assert!(OrbitPolicy::new(1, 1.0, 0.0, 4).is_err());
    }

    #[test]
    fn fixed_points_of_cos_plus_z() {
        let region = DomainSpec::rect(Rect::new(0.0, 2.0 * PI, -1.0, 1.0).unwrap(), "R").unwrap();
        let fps = find_fixed_points(&parse("cos(z)+z"), &region, &NewtonOptions::default());
        assert_eq!(fps.len(), 2);
        assert!((fps[0].location() - c(PI / 2.0, 0.0)).norm() < 1e-12);
        assert_eq!(fps[0].class, FixedPointClass::Superattracting);
        assert!((fps[1].location() - c(1.5 * PI, 0.0)).norm() < 1e-12);
        assert!((fps[1].multiplier() - c(2.0, 0.0)).norm() < 1e-12);
        assert_eq!(fps[1].class, FixedPointClass::Repelling);
    }

    #[test]
    fn fixed_points_of_square_and_sine() {
        let disc2 = DomainSpec::disc(c(0.0, 0.0), 2.0, "d").unwrap();
        let fps = find_fixed_points(&parse("z^2"), &disc2, &NewtonOptions::default());
        assert_eq!(fps.len(), 2);
        assert!(
            fps[0].location().norm() < 1e-12 && fps[0].class == FixedPointClass::Superattracting
        );
        assert!((fps[1].location() - c(1.0, 0.0)).norm() < 1e-12);
        assert_eq!(fps[1].class, FixedPointClass::Repelling);

        let disc1 = DomainSpec::disc(c(0.0, 0.0), 1.0, "d").unwrap();
        let fps = find_fixed_points(&parse("sin(z)"), &disc1, &NewtonOptions::default());
        assert_eq!(fps.len(), 1, "{fps:?}");
        assert!(fps[0].location().norm() < 1e-4);
        assert_eq!(fps[0].class, FixedPointClass::Indifferent);
    }

    #[test]
    fn multiplier_classes() {
        assert_eq!(
            FixedPointClass::from_multiplier(c(0.0, 0.0)),
            FixedPointClass::Superattracting
        );
        assert_eq!(
            FixedPointClass::from_multiplier(c(0.5, 0.0)),
            FixedPointClass::Attracting
        );
        assert_eq!(
            FixedPointClass::from_multiplier(c(0.0, 1.0)),
            FixedPointClass::Indifferent
        );
        assert_eq!(
            FixedPointClass::from_multiplier(c(1.5, 0.0)),
            FixedPointClass::Repelling
        );
    }
}
