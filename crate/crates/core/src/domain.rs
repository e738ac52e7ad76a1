//! Bounded, simply connected plane regions built from discs and
//! axis-aligned rectangles.

use std::collections::{HashMap, VecDeque};
use std::f64::consts::PI;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::geometry::{dist_point_segment, dist_segment_segment, segments_intersect};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum DomainError {
    #[error("degenerate domain: {0}")]
    Degenerate(String),
    #[error("rectangle union is not connected through overlapping interiors")]
    Disconnected,
    #[error("rectangle overlaps form a cycle; only tree-shaped unions are accepted")]
    OverlapCycle,
    #[error("rectangle union encloses a hole")]
    NotSimplyConnected,
}

/// Open axis-aligned rectangle `(x_min, x_max) × (y_min, y_max)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Rect {
    pub x_min: f64,
    pub x_max: f64,
    pub y_min: f64,
    pub y_max: f64,
}

impl Rect {
    pub fn new(x_min: f64, x_max: f64, y_min: f64, y_max: f64) -> Result<Self, DomainError> {
        let finite = [x_min, x_max, y_min, y_max].iter().all(|v| v.is_finite());
        if !finite || x_min >= x_max || y_min >= y_max {
            return Err(DomainError::Degenerate(format!(
                "rectangle [{x_min}, {x_max}] x [{y_min}, {y_max}]"
            )));
        }
        Ok(Self {
            x_min,
            x_max,
            y_min,
            y_max,
        })
    }

    pub fn width(&self) -> f64 {
        self.x_max - self.x_min
    }

    pub fn height(&self) -> f64 {
        self.y_max - self.y_min
    }

    pub fn center(&self) -> Complex64 {
        Complex64::new(
            0.5 * (self.x_min + self.x_max),
            0.5 * (self.y_min + self.y_max),
        )
    }

    pub fn contains(&self, p: Complex64) -> bool {
        p.re > self.x_min && p.re < self.x_max && p.im > self.y_min && p.im < self.y_max
    }

    pub fn contains_closed(&self, p: Complex64) -> bool {
        p.re >= self.x_min && p.re <= self.x_max && p.im >= self.y_min && p.im <= self.y_max
    }

    /// Euclidean distance from `p` to the closed rectangle.
    pub fn distance(&self, p: Complex64) -> f64 {
        let dx = (self.x_min - p.re).max(0.0).max(p.re - self.x_max);
        let dy = (self.y_min - p.im).max(0.0).max(p.im - self.y_max);
        dx.hypot(dy)
    }

    /// Counter-clockwise corners starting at the lower-left.
    pub fn corners(&self) -> [Complex64; 4] {
        [
            Complex64::new(self.x_min, self.y_min),
            Complex64::new(self.x_max, self.y_min),
            Complex64::new(self.x_max, self.y_max),
            Complex64::new(self.x_min, self.y_max),
        ]
    }

    /// Distance between the segment `[a, b]` and the closed rectangle.
    pub fn distance_to_segment(&self, a: Complex64, b: Complex64) -> f64 {
        if self.contains_closed(a) || self.contains_closed(b) {
            return 0.0;
        }
        let c = self.corners();
        let mut best = f64::INFINITY;
        for k in 0..4 {
            let (p, q) = (c[k], c[(k + 1) % 4]);
            if segments_intersect(a, b, p, q) {
                return 0.0;
            }
            best = best.min(dist_segment_segment(a, b, p, q));
        }
        best
    }

    /// True when the interiors intersect.
    pub fn overlaps(&self, other: &Rect) -> bool {
        self.x_min < other.x_max
            && other.x_min < self.x_max
            && self.y_min < other.y_max
            && other.y_min < self.y_max
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Shape {
    Disc { center: [f64; 2], radius: f64 },
    Rect(Rect),
    RectUnion { rects: Vec<Rect> },
}

/// A bounded, connected, simply connected open region with a label.
///
/// Build through [`DomainSpec::disc`], [`DomainSpec::rect`] or
/// [`DomainSpec::rect_union`]; the constructors validate the shape and
/// precompute the outer boundary polygon of rectangle unions.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DomainSpec {
    pub shape: Shape,
    pub label: String,
    #[serde(skip)]
    polygon: Option<Vec<Complex64>>,
}

impl DomainSpec {
    pub fn disc(
        center: Complex64,
        radius: f64,
        label: impl Into<String>,
    ) -> Result<Self, DomainError> {
        if !(radius.is_finite() && radius > 0.0 && center.re.is_finite() && center.im.is_finite()) {
            return Err(DomainError::Degenerate(format!(
                "disc centre {center} radius {radius}"
            )));
        }
        Ok(Self {
            shape: Shape::Disc {
                center: [center.re, center.im],
                radius,
            },
            label: label.into(),
            polygon: None,
        })
    }

    pub fn rect(rect: Rect, label: impl Into<String>) -> Result<Self, DomainError> {
        let rect = Rect::new(rect.x_min, rect.x_max, rect.y_min, rect.y_max)?;
        Ok(Self {
            shape: Shape::Rect(rect),
            label: label.into(),
            polygon: Some(rect.corners().to_vec()),
        })
    }

    /// Union of open rectangles whose overlap graph is a tree.
    pub fn rect_union(rects: Vec<Rect>, label: impl Into<String>) -> Result<Self, DomainError> {
        if rects.is_empty() {
            return Err(DomainError::Degenerate("empty rectangle union".into()));
        }
        for r in &rects {
            Rect::new(r.x_min, r.x_max, r.y_min, r.y_max)?;
        }
        check_overlap_tree(&rects)?;
        let polygon = trace_union_boundary(&rects)?;
        Ok(Self {
            shape: Shape::RectUnion { rects },
            label: label.into(),
            polygon: Some(polygon),
        })
    }

    /// Rebuilds a validated domain from a deserialized shape.
    pub fn from_shape(shape: Shape, label: impl Into<String>) -> Result<Self, DomainError> {
        match shape {
            Shape::Disc { center, radius } => {
                Self::disc(Complex64::new(center[0], center[1]), radius, label)
            }
            Shape::Rect(r) => Self::rect(r, label),
            Shape::RectUnion { rects } => Self::rect_union(rects, label),
        }
    }

    pub fn with_label(mut self, label: impl Into<String>) -> Self {
        self.label = label.into();
        self
    }

    /// Counter-clockwise outer boundary polygon; `None` for discs.
    pub fn boundary_polygon(&self) -> Option<&[Complex64]> {
        self.polygon.as_deref()
    }

    fn rects(&self) -> &[Rect] {
        match &self.shape {
            Shape::Disc { .. } => &[],
            Shape::Rect(r) => std::slice::from_ref(r),
            Shape::RectUnion { rects } => rects,
        }
    }

    fn disc_parts(&self) -> Option<(Complex64, f64)> {
        match self.shape {
            Shape::Disc { center, radius } => Some((Complex64::new(center[0], center[1]), radius)),
            _ => None,
        }
    }

    /// Membership in the open region.
    pub fn contains(&self, p: Complex64) -> bool {
        match self.disc_parts() {
            Some((c, r)) => (p - c).norm() < r,
            None => self.rects().iter().any(|r| r.contains(p)),
        }
    }

    /// Membership in the closure.
    pub fn contains_closed(&self, p: Complex64) -> bool {
        self.distance(p) == 0.0
    }

    /// Distance from `p` to the closed region (zero inside).
    pub fn distance(&self, p: Complex64) -> f64 {
        match self.disc_parts() {
            Some((c, r)) => ((p - c).norm() - r).max(0.0),
            None => self
                .rects()
                .iter()
                .map(|r| r.distance(p))
                .fold(f64::INFINITY, f64::min),
        }
    }

    /// How far `p` lies inside the open region: its distance to the
    /// complement, zero outside.
    pub fn depth(&self, p: Complex64) -> f64 {
        match self.disc_parts() {
            Some((c, r)) => (r - (p - c).norm()).max(0.0),
            None if self.contains(p) => self.boundary_distance(p),
            None => 0.0,
        }
    }

    /// Distance from `p` to the boundary curve.
    pub fn boundary_distance(&self, p: Complex64) -> f64 {
        match self.disc_parts() {
            Some((c, r)) => ((p - c).norm() - r).abs(),
            None => {
                let poly = self.polygon.as_deref().unwrap_or_default();
                (0..poly.len())
                    .map(|k| dist_point_segment(p, poly[k], poly[(k + 1) % poly.len()]))
                    .fold(f64::INFINITY, f64::min)
            }
        }
    }

    /// Distance between the segment `[a, b]` and the closed region.
    pub fn distance_to_segment(&self, a: Complex64, b: Complex64) -> f64 {
        match self.disc_parts() {
            Some((c, r)) => (dist_point_segment(c, a, b) - r).max(0.0),
            None => self
                .rects()
                .iter()
                .map(|r| r.distance_to_segment(a, b))
                .fold(f64::INFINITY, f64::min),
        }
    }

    /// Radius of the largest open disc about `c` contained in the region;
    /// zero when `c` is not inside.
    pub fn inradius_about(&self, c: Complex64) -> f64 {
        if !self.contains(c) {
            return 0.0;
        }
        self.boundary_distance(c)
    }

    /// Axis-aligned bounding box of the closure.
    pub fn bounding_box(&self) -> Rect {
        match self.disc_parts() {
            Some((c, r)) => Rect {
                x_min: c.re - r,
                x_max: c.re + r,
                y_min: c.im - r,
                y_max: c.im + r,
            },
            None => {
                let rs = self.rects();
                Rect {
                    x_min: rs.iter().map(|r| r.x_min).fold(f64::INFINITY, f64::min),
                    x_max: rs.iter().map(|r| r.x_max).fold(f64::NEG_INFINITY, f64::max),
                    y_min: rs.iter().map(|r| r.y_min).fold(f64::INFINITY, f64::min),
                    y_max: rs.iter().map(|r| r.y_max).fold(f64::NEG_INFINITY, f64::max),
                }
            }
        }
    }

    pub fn diameter(&self) -> f64 {
        match self.disc_parts() {
            Some((_, r)) => 2.0 * r,
            None => {
                let b = self.bounding_box();
                b.width().hypot(b.height())
            }
        }
    }

    /// A point guaranteed to lie in the open region.
    pub fn interior_point(&self) -> Complex64 {
        match self.disc_parts() {
            Some((c, _)) => c,
            None => self.rects()[0].center(),
        }
    }

    /// Length of the boundary curve.
    pub fn perimeter(&self) -> f64 {
        match self.disc_parts() {
            Some((_, r)) => 2.0 * PI * r,
            None => {
                let poly = self.polygon.as_deref().unwrap_or_default();
                (0..poly.len())
                    .map(|k| (poly[(k + 1) % poly.len()] - poly[k]).norm())
                    .sum()
            }
        }
    }

    /// Whether the closure of `self` lies inside the open region `outer`.
    pub fn closure_within(&self, outer: &DomainSpec) -> bool {
        match (self.disc_parts(), outer.disc_parts()) {
            (Some((c1, r1)), Some((c2, r2))) => (c1 - c2).norm() + r1 < r2,
            (Some((c, r)), None) => outer.contains(c) && outer.boundary_distance(c) > r,
            (None, Some(_)) => self
                .polygon
                .as_deref()
                .unwrap_or_default()
                .iter()
                .all(|&v| outer.contains(v)),
            (None, None) => {
                let inner = self.polygon.as_deref().unwrap_or_default();
                let outer_poly = outer.polygon.as_deref().unwrap_or_default();
                if !inner.iter().all(|&v| outer.contains(v)) {
                    return false;
                }
                for i in 0..inner.len() {
                    let (a, b) = (inner[i], inner[(i + 1) % inner.len()]);
                    for j in 0..outer_poly.len() {
                        let (p, q) = (outer_poly[j], outer_poly[(j + 1) % outer_poly.len()]);
                        if segments_intersect(a, b, p, q) {
                            return false;
                        }
                    }
                }
                true
            }
        }
    }
}

fn check_overlap_tree(rects: &[Rect]) -> Result<(), DomainError> {
    let n = rects.len();
    let mut adjacency = vec![Vec::new(); n];
    let mut edges = 0usize;
    for i in 0..n {
        for j in (i + 1)..n {
            if rects[i].overlaps(&rects[j]) {
                adjacency[i].push(j);
                adjacency[j].push(i);
                edges += 1;
            }
        }
    }
    let mut seen = vec![false; n];
    let mut queue = VecDeque::from([0usize]);
    seen[0] = true;
    while let Some(i) = queue.pop_front() {
        for &j in &adjacency[i] {
            if !seen[j] {
                seen[j] = true;
                queue.push_back(j);
            }
        }
    }
    if seen.iter().any(|s| !s) {
        return Err(DomainError::Disconnected);
    }
    if edges != n - 1 {
        return Err(DomainError::OverlapCycle);
    }
    Ok(())
}

/// Traces the outer boundary of a union of rectangles on the grid of
/// their distinct edge coordinates. Returns the counter-clockwise vertex
/// list with collinear points removed.
fn trace_union_boundary(rects: &[Rect]) -> Result<Vec<Complex64>, DomainError> {
    let xs: Vec<f64> = sorted_unique(rects.iter().flat_map(|r| [r.x_min, r.x_max]));
    let ys: Vec<f64> = sorted_unique(rects.iter().flat_map(|r| [r.y_min, r.y_max]));
    let (nx, ny) = (xs.len() - 1, ys.len() - 1);
    // Cell (i, j) covers [xs[i], xs[i+1]] x [ys[j], ys[j+1]].
    let inside = |i: isize, j: isize| -> bool {
        if i < 0 || j < 0 || i as usize >= nx || j as usize >= ny {
            return false;
        }
        let (i, j) = (i as usize, j as usize);
        let c = Complex64::new(0.5 * (xs[i] + xs[i + 1]), 0.5 * (ys[j] + ys[j + 1]));
        rects.iter().any(|r| r.contains(c))
    };

    // Every outside cell must reach the padding ring, otherwise there is a hole.
    let (w, h) = (nx + 2, ny + 2);
    let mut outside_seen = vec![false; w * h];
    let mut queue = VecDeque::from([(0usize, 0usize)]);
    outside_seen[0] = true;
    while let Some((i, j)) = queue.pop_front() {
        for (di, dj) in [(1isize, 0isize), (-1, 0), (0, 1), (0, -1)] {
            let (a, b) = (i as isize + di, j as isize + dj);
            if a < 0 || b < 0 || a as usize >= w || b as usize >= h {
                continue;
            }
            let (a, b) = (a as usize, b as usize);
            if !outside_seen[b * w + a] && !inside(a as isize - 1, b as isize - 1) {
                outside_seen[b * w + a] = true;
                queue.push_back((a, b));
            }
        }
    }
    for j in 0..ny {
        for i in 0..nx {
            if !inside(i as isize, j as isize) && !outside_seen[(j + 1) * w + (i + 1)] {
                return Err(DomainError::NotSimplyConnected);
            }
        }
    }

    // Directed boundary edges with the region on the left, keyed by
    // their start lattice vertex.
    let mut next: HashMap<(usize, usize), (usize, usize)> = HashMap::new();
    for j in 0..ny {
        for i in 0..nx {
            if !inside(i as isize, j as isize) {
                continue;
            }
            let (ii, jj) = (i as isize, j as isize);
            if !inside(ii, jj - 1) {
                next.insert((i, j), (i + 1, j));
            }
            if !inside(ii + 1, jj) {
                next.insert((i + 1, j), (i + 1, j + 1));
            }
            if !inside(ii, jj + 1) {
                next.insert((i + 1, j + 1), (i, j + 1));
            }
            if !inside(ii - 1, jj) {
                next.insert((i, j + 1), (i, j));
            }
        }
    }
    let start = *next
        .keys()
        .min()
        .ok_or_else(|| DomainError::Degenerate("empty union".into()))?;
    let mut loop_pts = vec![start];
    let mut cur = next[&start];
    while cur != start {
        loop_pts.push(cur);
        cur = *next
            .get(&cur)
            .ok_or_else(|| DomainError::Degenerate("open boundary while tracing union".into()))?;
        if loop_pts.len() > next.len() {
            return Err(DomainError::Degenerate(
                "boundary tracing did not close".into(),
            ));
        }
    }
    if loop_pts.len() != next.len() {
        // Pinched boundaries (rectangles touching at a corner) give several loops.
        return Err(DomainError::NotSimplyConnected);
    }
    let pts: Vec<Complex64> = loop_pts
        .iter()
        .map(|&(i, j)| Complex64::new(xs[i], ys[j]))
        .collect();
    Ok(drop_collinear(&pts))
}

fn sorted_unique(values: impl Iterator<Item = f64>) -> Vec<f64> {
    let mut out: Vec<f64> = values.map(|v| v + 0.0).collect();
    out.sort_by(f64::total_cmp);
    out.dedup();
    out
}

fn drop_collinear(pts: &[Complex64]) -> Vec<Complex64> {
    let n = pts.len();
    (0..n)
        .filter(|&k| {
            let (a, b, c) = (pts[(k + n - 1) % n], pts[k], pts[(k + 1) % n]);
            let (u, v) = (b - a, c - b);
            u.re * v.im - u.im * v.re != 0.0
        })
        .map(|k| pts[k])
        .collect()
}
