//! Sampled closed curves: domain boundaries, their images under a
//! function, and winding numbers.

use std::f64::consts::{FRAC_PI_2, PI, TAU};
use std::sync::Arc;

use num_complex::Complex64;
use thiserror::Error;

use crate::domain::{DomainSpec, Shape};
use crate::funcspec::FunctionExpression;
use crate::geometry::cross;

/// Smallest parameter gap the refiners will bisect.
const MIN_PARAM_GAP: f64 = 1e-15;
const MAX_WINDING_DEPTH: u32 = 60;

#[derive(Debug, Clone, Error)]
pub enum CurveError {
    #[error("sampling density must be positive and finite, got {0}")]
    InvalidDensity(f64),
    #[error("curve must be closed")]
    NotClosed,
    #[error("curve has no source parametrization to refine against")]
    NoSource,
    #[error("refinement budget of {max_points} points exhausted")]
    RefinementBudgetExceeded {
        max_points: usize,
        partial: Box<SampledCurve>,
    },
    #[error("curve passes within {distance:e} of the winding point {point}")]
    CurveTooClose { point: Complex64, distance: f64 },
    #[error("could not resolve the argument increments about {point}: {reason}")]
    AliasingUnresolved { point: Complex64, reason: String },
}

/// Arclength parametrization of a closed boundary over `t ∈ [0, 1)`.
#[derive(Debug, Clone, PartialEq)]
pub enum BoundaryPath {
    Circle {
        center: Complex64,
        radius: f64,
    },
    Polygon {
        vertices: Vec<Complex64>,
        cumulative: Vec<f64>,
        length: f64,
    },
}

impl BoundaryPath {
    pub fn circle(center: Complex64, radius: f64) -> Self {
        BoundaryPath::Circle { center, radius }
    }

    /// Closed polygon through `vertices` (the closing edge is implicit).
    pub fn polygon(vertices: Vec<Complex64>) -> Self {
        let n = vertices.len();
        let mut cumulative = Vec::with_capacity(n + 1);
        let mut acc = 0.0;
        cumulative.push(0.0);
        for k in 0..n {
            acc += (vertices[(k + 1) % n] - vertices[k]).norm();
            cumulative.push(acc);
        }
        BoundaryPath::Polygon {
            vertices,
            cumulative,
            length: acc,
        }
    }

    pub fn of_domain(domain: &DomainSpec) -> Self {
        match (&domain.shape, domain.boundary_polygon()) {
            (Shape::Disc { center, radius }, _) => {
                Self::circle(Complex64::new(center[0], center[1]), *radius)
            }
            (_, Some(poly)) => Self::polygon(poly.to_vec()),
            (_, None) => unreachable!("rectangle domains always carry a boundary polygon"),
        }
    }

    pub fn length(&self) -> f64 {
        match self {
            BoundaryPath::Circle { radius, .. } => TAU * radius,
            BoundaryPath::Polygon { length, .. } => *length,
        }
    }

    /// Point at parameter `t`, taken modulo 1.
    pub fn point_at(&self, t: f64) -> Complex64 {
        let t = t.rem_euclid(1.0);
        match self {
            BoundaryPath::Circle { center, radius } => {
                center + Complex64::from_polar(*radius, TAU * t)
            }
            BoundaryPath::Polygon {
                vertices,
                cumulative,
                length,
            } => {
                let s = t * length;
                let n = vertices.len();
                let k = match cumulative.binary_search_by(|c| c.total_cmp(&s)) {
                    Ok(k) => k.min(n - 1),
                    Err(k) => (k - 1).min(n - 1),
                };
                let (a, b) = (vertices[k], vertices[(k + 1) % n]);
                let seg = cumulative[k + 1] - cumulative[k];
                if seg == 0.0 {
                    return a;
                }
                a + (b - a) * ((s - cumulative[k]) / seg)
            }
        }
    }
}

/// Where the points of a curve come from: a boundary path followed by
/// zero or more function applications.
#[derive(Debug, Clone)]
pub struct CurveSource {
    pub path: BoundaryPath,
    pub maps: Vec<FunctionExpression>,
}

impl CurveSource {
    pub fn point_at(&self, t: f64) -> Complex64 {
        self.maps
            .iter()
            .fold(self.path.point_at(t), |z, f| f.eval(z))
    }
}

/// Ordered finite sampling of a plane curve.
///
/// Closed curves do not repeat the first point; the closing segment from
/// the last point back to the first is implicit.
#[derive(Debug, Clone)]
pub struct SampledCurve {
    pub points: Vec<Complex64>,
    pub closed: bool,
    /// Parameter of each point on the source boundary, when known.
    pub parent_params: Option<Vec<f64>>,
    /// Set when an adaptive refinement stopped on its point budget.
    pub budget_hit: bool,
    source: Option<Arc<CurveSource>>,
}

impl SampledCurve {
    /// A plain polyline with no source parametrization. Consecutive
    /// duplicates and a repeated closing point are dropped.
    pub fn from_points(points: Vec<Complex64>, closed: bool) -> Self {
        let mut pts: Vec<Complex64> = Vec::with_capacity(points.len());
        for p in points {
            if pts.last() != Some(&p) {
                pts.push(p);
            }
        }
        if closed && pts.len() > 1 && pts.first() == pts.last() {
            pts.pop();
        }
        Self {
            points: pts,
            closed,
            parent_params: None,
            budget_hit: false,
            source: None,
        }
    }

    pub fn source(&self) -> Option<&CurveSource> {
        self.source.as_deref()
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    /// Consecutive point pairs, including the closing one for closed curves.
    pub fn segments(&self) -> impl Iterator<Item = (Complex64, Complex64)> + '_ {
        let n = self.points.len();
        let count = if self.closed && n > 1 {
            n
        } else {
            n.saturating_sub(1)
        };
        (0..count).map(move |k| (self.points[k], self.points[(k + 1) % n]))
    }

    /// The same curve traversed backwards.
    pub fn reversed(&self) -> Self {
        let mut out = self.clone();
        out.points.reverse();
        // Reversed parameters no longer increase; refinement is disabled.
        out.source = None;
        out.parent_params = None;
        out
    }

    /// Translates every point by `c`, dropping the source.
    pub fn translated(&self, c: Complex64) -> Self {
        let mut out = Self::from_points(self.points.iter().map(|p| p + c).collect(), self.closed);
        out.budget_hit = self.budget_hit;
        out
    }
}

/// Positively oriented closed sampling of the boundary of `domain`.
///
/// Every edge of a polygonal boundary receives `max(1, ⌈len·density⌉)`
/// segments and all polygon vertices are included exactly; a circle of
/// radius `r` receives `⌈2πr·density⌉` points (at least 8).
pub fn boundary(domain: &DomainSpec, density: f64) -> Result<SampledCurve, CurveError> {
    if !(density.is_finite() && density > 0.0) {
        return Err(CurveError::InvalidDensity(density));
    }
    let path = BoundaryPath::of_domain(domain);
    let (points, params) = match &path {
        BoundaryPath::Circle { radius, .. } => {
            let n = ((TAU * radius * density).ceil() as usize).max(8);
            let params: Vec<f64> = (0..n).map(|k| k as f64 / n as f64).collect();
            (params.iter().map(|&t| path.point_at(t)).collect(), params)
        }
        BoundaryPath::Polygon {
            vertices,
            cumulative,
            length,
        } => {
            let n = vertices.len();
            let mut pts = Vec::new();
            let mut params = Vec::new();
            for k in 0..n {
                let (a, b) = (vertices[k], vertices[(k + 1) % n]);
                let seg = cumulative[k + 1] - cumulative[k];
                let m = ((seg * density).ceil() as usize).max(1);
                for j in 0..m {
                    let frac = j as f64 / m as f64;
                    pts.push(if j == 0 { a } else { a + (b - a) * frac });
                    params.push((cumulative[k] + frac * seg) / length);
                }
            }
            (pts, params)
        }
    };
    Ok(SampledCurve {
        points,
        closed: true,
        parent_params: Some(params),
        budget_hit: false,
        source: Some(Arc::new(CurveSource {
            path,
            maps: Vec::new(),
        })),
    })
}

/// Controls adaptive refinement of image curves.
#[derive(Debug, Clone)]
pub struct Refinement {
    /// A segment whose image chord is at most this long is accepted.
    pub max_step: f64,
    pub max_points: usize,
    /// Optional relative acceptance: a chord is also accepted when it is
    /// shorter than `fraction` times the distance of both endpoints from
    /// `domain`. The chord then keeps a positive distance from the domain
    /// and subtends less than a quarter turn about every point of it.
    pub clearance: Option<Clearance>,
}

#[derive(Debug, Clone)]
pub struct Clearance {
    pub domain: DomainSpec,
    pub fraction: f64,
}

impl Refinement {
    pub fn absolute(max_step: f64, max_points: usize) -> Self {
        Self {
            max_step,
            max_points,
            clearance: None,
        }
    }

    fn accepts(&self, a: Complex64, b: Complex64) -> bool {
        let len = (b - a).norm();
        if len <= self.max_step {
            return true;
        }
        match &self.clearance {
            Some(c) => len <= c.fraction * c.domain.distance(a).min(c.domain.distance(b)),
            None => false,
        }
    }
}

/// Image of a closed sourced curve under `f`, refined until consecutive
/// image points are within `max_step` of each other.
pub fn image_curve(
    f: &FunctionExpression,
    curve: &SampledCurve,
    max_step: f64,
    max_points: usize,
) -> Result<SampledCurve, CurveError> {
    image_curve_with(f, curve, &Refinement::absolute(max_step, max_points))
}

/// [`image_curve`] with a full refinement policy.
pub fn image_curve_with(
    f: &FunctionExpression,
    curve: &SampledCurve,
    policy: &Refinement,
) -> Result<SampledCurve, CurveError> {
    if !curve.closed {
        return Err(CurveError::NotClosed);
    }
    let (Some(src), Some(params)) = (curve.source.as_deref(), curve.parent_params.as_ref()) else {
        return Err(CurveError::NoSource);
    };
    let mut maps = src.maps.clone();
    maps.push(f.clone());
    let source = CurveSource {
        path: src.path.clone(),
        maps,
    };
    let n = params.len();
    let first_images: Vec<Complex64> = curve.points.iter().map(|&z| f.eval(z)).collect();

    let mut out_w = Vec::with_capacity(n);
    let mut out_t = Vec::with_capacity(n);
    let mut total = n;
    let mut budget_hit = false;
    for k in 0..n {
        let (ta, wa) = (params[k], first_images[k]);
        let (tb, wb) = if k + 1 < n {
            (params[k + 1], first_images[k + 1])
        } else {
            (params[0] + 1.0, first_images[0])
        };
        out_t.push(ta);
        out_w.push(wa);
        let mut cur = (ta, wa);
        let mut stack = vec![(tb, wb)];
        while let Some(&(t2, w2)) = stack.last() {
            if !policy.accepts(cur.1, w2) && t2 - cur.0 > MIN_PARAM_GAP {
                if total < policy.max_points {
                    let tm = 0.5 * (cur.0 + t2);
                    stack.push((tm, source.point_at(tm)));
                    total += 1;
                    continue;
                }
                budget_hit = true;
            }
            stack.pop();
            if !stack.is_empty() {
                out_t.push(if t2 >= 1.0 { t2 - 1.0 } else { t2 });
                out_w.push(w2);
            }
            cur = (t2, w2);
        }
    }
    let result = SampledCurve {
        points: out_w,
        closed: true,
        parent_params: Some(out_t),
        budget_hit,
        source: Some(Arc::new(source)),
    };
    if budget_hit {
        return Err(CurveError::RefinementBudgetExceeded {
            max_points: policy.max_points,
            partial: Box::new(result),
        });
    }
    Ok(result)
}

#[inline]
fn arg_increment(a: Complex64, b: Complex64, w: Complex64) -> f64 {
    let (u, v) = (a - w, b - w);
    cross(u, v).atan2((u * v.conj()).re)
}

/// Winding number of a closed curve about `w`.
///
/// Sums principal argument increments between consecutive samples. For
/// curves that carry a source parametrization, any increment larger than
/// a quarter turn is resolved by bisecting the source parameter first.
/// Curves without a source are treated as polygons, for which principal
/// increments are exact.
pub fn winding_number(
    curve: &SampledCurve,
    w: Complex64,
    min_clearance: f64,
) -> Result<i64, CurveError> {
    if !curve.closed {
        return Err(CurveError::NotClosed);
    }
    if curve.points.len() < 2 {
        return Err(CurveError::AliasingUnresolved {
            point: w,
            reason: "curve has fewer than two points".into(),
        });
    }
    let too_close = |p: Complex64| -> Result<(), CurveError> {
        let d = (p - w).norm();
        if d < min_clearance || d == 0.0 {
            Err(CurveError::CurveTooClose {
                point: w,
                distance: d,
            })
        } else {
            Ok(())
        }
    };
    for &p in &curve.points {
        too_close(p)?;
    }
    let refiner = match (&curve.source, &curve.parent_params) {
        (Some(s), Some(t)) => Some((s.as_ref(), t)),
        _ => None,
    };
    let n = curve.points.len();
    let mut total = 0.0;
    for k in 0..n {
        let (a, b) = (curve.points[k], curve.points[(k + 1) % n]);
        let d = arg_increment(a, b, w);
        if d.abs() <= FRAC_PI_2 {
            total += d;
            continue;
        }
        match refiner {
            Some((src, params)) => {
                let ta = params[k];
                let tb = if k + 1 < n {
                    params[k + 1]
                } else {
                    params[0] + 1.0
                };
                total += refined_increment(src, w, (ta, a), (tb, b), 0, &too_close)?;
            }
            None => {
                if d.abs() >= PI {
                    return Err(CurveError::CurveTooClose {
                        point: w,
                        distance: 0.0,
                    });
                }
                total += d;
            }
        }
    }
    let turns = total / TAU;
    let rounded = turns.round();
    if (turns - rounded).abs() >= 0.05 {
        return Err(CurveError::AliasingUnresolved {
            point: w,
            reason: format!("non-integral total of {turns} turns"),
        });
    }
    Ok(rounded as i64)
}

fn refined_increment(
    src: &CurveSource,
    w: Complex64,
    (ta, a): (f64, Complex64),
    (tb, b): (f64, Complex64),
    depth: u32,
    too_close: &impl Fn(Complex64) -> Result<(), CurveError>,
) -> Result<f64, CurveError> {
    let d = arg_increment(a, b, w);
    if d.abs() <= FRAC_PI_2 {
        return Ok(d);
    }
    if depth >= MAX_WINDING_DEPTH || tb - ta <= MIN_PARAM_GAP {
        return Err(CurveError::AliasingUnresolved {
            point: w,
            reason: format!("increment {d} persists after {depth} bisections"),
        });
    }
    let tm = 0.5 * (ta + tb);
    let m = src.point_at(tm);
    too_close(m)?;
    Ok(
        refined_increment(src, w, (ta, a), (tm, m), depth + 1, too_close)?
            + refined_increment(src, w, (tm, m), (tb, b), depth + 1, too_close)?,
    )
}
