//! Built-in scenarios: the two worked examples and the `sin z` example.

use std::f64::consts::PI;

use crate::domain::{DomainError, DomainSpec, Rect};
use crate::funcspec::FunctionExpression;

pub const EX51_SOURCE: &str = "-10*z*exp(-z)-0.5*z";
pub const EX52_SOURCE: &str = "cos(z)+z";
pub const SINZ_SOURCE: &str = "sin(z)";

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ScenarioKind {
    Ex51,
    Ex52,
    SinZ,
}

/// A named function with its domain family and default windows.
#[derive(Debug, Clone)]
pub struct Scenario {
    pub name: &'static str,
    pub kind: ScenarioKind,
    pub source: &'static str,
    pub description: &'static str,
    /// Default index range for the domain family (inclusive).
    pub default_range: (u32, u32),
    /// Default render window `[x_min, x_max, y_min, y_max]`.
    pub window: [f64; 4],
}

pub const SCENARIOS: [Scenario; 3] = [
    Scenario {
        name: "ex51",
        kind: ScenarioKind::Ex51,
        source: EX51_SOURCE,
        description: "f(z) = -10 z exp(-z) - z/2 with two-rectangle domains; I+(f) connected although no m^n(r) diverges",
        default_range: (2, 6),
        window: [-20.0, 40.0, -30.0, 30.0],
    },
    Scenario {
        name: "ex52",
        kind: ScenarioKind::Ex52,
        source: EX52_SOURCE,
        description: "f(z) = cos z + z with nested rectangles; strongly polynomial-like, real axis in K(f)",
        default_range: (0, 3),
        window: [0.0, 2.0 * PI, -1.0, 1.0],
    },
    Scenario {
        name: "sinz",
        kind: ScenarioKind::SinZ,
        source: SINZ_SOURCE,
        description: "f(z) = sin z; the real line lies in K(f) and disconnects I+(f)",
        default_range: (1, 3),
        window: [-10.0, 10.0, -5.0, 5.0],
    },
];

pub fn lookup(name: &str) -> Option<&'static Scenario> {
    SCENARIOS.iter().find(|s| s.name == name)
}

impl Scenario {
    pub fn function(&self) -> FunctionExpression {
        FunctionExpression::parse(self.source).expect("built-in scenario functions parse")
    }

    /// The domain with index `n` of this scenario's family.
    pub fn domain(&self, n: u32) -> Result<DomainSpec, DomainError> {
        match self.kind {
            ScenarioKind::Ex51 => ex51_domain(n),
            ScenarioKind::Ex52 => ex52_domain(n),
            ScenarioKind::SinZ => DomainSpec::disc(0.0.into(), f64::from(n), format!("disc r={n}")),
        }
    }

    pub fn domains(&self, first: u32, last: u32) -> Result<Vec<DomainSpec>, DomainError> {
        (first..=last).map(|n| self.domain(n)).collect()
    }
}

/// `{0 < Re z < 4nπ, |Im z| < 4nπ} ∪ {-nπ < Re z ≤ 0, |Im z| < nπ}`, `n ≥ 1`.
pub fn ex51_domain(n: u32) -> Result<DomainSpec, DomainError> {
    let n = f64::from(n);
    DomainSpec::rect_union(
        vec![
            Rect::new(0.0, 4.0 * n * PI, -4.0 * n * PI, 4.0 * n * PI)?,
            // Extends into the right rectangle so the two open pieces overlap;
            // the union is unchanged.
            Rect::new(-n * PI, 4.0 * n * PI, -n * PI, n * PI)?,
        ],
        format!("D_{n}"),
    )
}

/// `{-(2n + 11/4)π < Re z < (2n + 9/4)π, |Im z| < 2(n + 1)π}`.
pub fn ex52_domain(n: u32) -> Result<DomainSpec, DomainError> {
    let n = f64::from(n);
    DomainSpec::rect(
        Rect::new(
            -(2.0 * n + 11.0 / 4.0) * PI,
            (2.0 * n + 9.0 / 4.0) * PI,
            -2.0 * (n + 1.0) * PI,
            2.0 * (n + 1.0) * PI,
        )?,
        format!("D_{n}"),
    )
}
