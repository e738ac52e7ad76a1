//! Pixel-grid pictures of the unbounded-orbit set and its complement.
//!
//! Pixels are classified by the orbit heuristics of [`crate::orbits`],
//! then censused into connected components. Boundary pixels of a class
//! approximate the Julia set, and a lattice probe looks for
//! spider's-web structure around a point.

mod label;
mod ppm;
mod web;

use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::domain::Rect;
use crate::funcspec::FunctionExpression;
use crate::orbits::{classify_point, OrbitPolicy, PointClass};

pub use label::{label_components, label_mask, ComponentInfo, ComponentLabeling, Connectivity};
pub use ppm::{
    write_ppm, Rgb, PALETTE_BOUNDARY, PALETTE_BOUNDED, PALETTE_UNBOUNDED, PALETTE_UNDECIDED,
};
pub use web::{spiders_web_probe, WebProbeEntry, WebProbeReport};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum RasterError {
    #[error("grid needs at least 2 pixels per axis, got {nx}x{ny}")]
    GridTooSmall { nx: usize, ny: usize },
    #[error("invalid window: {0}")]
    InvalidWindow(String),
    #[error("radius {radius} about {center} leaves the window")]
    RadiusOutsideWindow { center: Complex64, radius: f64 },
    #[error("radii must be positive and strictly increasing")]
    InvalidRadii,
    #[error("mask has {got} pixels, grid expects {want}")]
    SizeMismatch { got: usize, want: usize },
    #[error("malformed classification data: {0}")]
    Malformed(String),
}

/// A window sampled at `nx × ny` pixel centres. Row 0 is the top row.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GridSpec {
    pub window: Rect,
    pub nx: usize,
    pub ny: usize,
}

impl GridSpec {
    pub fn new(window: Rect, nx: usize, ny: usize) -> Result<Self, RasterError> {
        if nx < 2 || ny < 2 {
            return Err(RasterError::GridTooSmall { nx, ny });
        }
        let w = Rect::new(window.x_min, window.x_max, window.y_min, window.y_max)
            .map_err(|e| RasterError::InvalidWindow(e.to_string()))?;
        Ok(Self { window: w, nx, ny })
    }

    pub fn pixel_width(&self) -> f64 {
        self.window.width() / self.nx as f64
    }

    pub fn pixel_height(&self) -> f64 {
        self.window.height() / self.ny as f64
    }

    /// Pixel width over pixel height; 1 for square pixels.
    pub fn aspect_distortion(&self) -> f64 {
        self.pixel_width() / self.pixel_height()
    }

    pub fn len(&self) -> usize {
        self.nx * self.ny
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn index(&self, i: usize, j: usize) -> usize {
        j * self.nx + i
    }

    /// Centre of pixel column `i`, row `j`.
    pub fn center(&self, i: usize, j: usize) -> Complex64 {
        Complex64::new(
            self.window.x_min + (i as f64 + 0.5) * self.pixel_width(),
            self.window.y_max - (j as f64 + 0.5) * self.pixel_height(),
        )
    }

    /// Pixel containing `z`, if inside the window.
    pub fn pixel_of(&self, z: Complex64) -> Option<(usize, usize)> {
        if !self.window.contains_closed(z) {
            return None;
        }
        let i = ((z.re - self.window.x_min) / self.pixel_width()).floor() as isize;
        let j = ((self.window.y_max - z.im) / self.pixel_height()).floor() as isize;
        let i = i.clamp(0, self.nx as isize - 1) as usize;
        let j = j.clamp(0, self.ny as isize - 1) as usize;
        Some((i, j))
    }
}

/// Per-pixel class map, row-major from the top-left pixel.
#[derive(Debug, Clone, PartialEq)]
pub struct PixelClassification {
    pub grid: GridSpec,
    pub classes: Vec<PointClass>,
    pub policy: OrbitPolicy,
}

impl PixelClassification {
    pub fn get(&self, i: usize, j: usize) -> PointClass {
        self.classes[self.grid.index(i, j)]
    }

    pub fn count(&self, class: PointClass) -> usize {
        self.classes.iter().filter(|&&c| c == class).count()
    }

    pub fn mask(&self, class: PointClass) -> Vec<bool> {
        self.classes.iter().map(|&c| c == class).collect()
    }

    /// One string per row: `U` unbounded suspect, `B` bounded suspect, `?` undecided.
    pub fn to_rows(&self) -> Vec<String> {
        self.classes
            .chunks(self.grid.nx)
            .map(|row| row.iter().map(|&c| class_char(c)).collect())
            .collect()
    }

    pub fn from_rows(
        grid: GridSpec,
        policy: OrbitPolicy,
        rows: &[String],
    ) -> Result<Self, RasterError> {
        if rows.len() != grid.ny {
            return Err(RasterError::Malformed(format!(
                "expected {} rows, got {}",
                grid.ny,
                rows.len()
            )));
        }
        let mut classes = Vec::with_capacity(grid.len());
        for (j, row) in rows.iter().enumerate() {
            if row.chars().count() != grid.nx {
                return Err(RasterError::Malformed(format!("row {j} has wrong length")));
            }
            for ch in row.chars() {
                classes.push(match ch {
                    'U' => PointClass::UnboundedSuspect,
                    'B' => PointClass::BoundedSuspect,
                    '?' => PointClass::Undecided,
                    other => {
                        return Err(RasterError::Malformed(format!(
                            "unknown class character `{other}`"
                        )))
                    }
                });
            }
        }
        Ok(Self {
            grid,
            classes,
            policy,
        })
    }
}

fn class_char(c: PointClass) -> char {
    match c {
        PointClass::UnboundedSuspect => 'U',
        PointClass::BoundedSuspect => 'B',
        PointClass::Undecided => '?',
    }
}

/// Classifies every pixel centre; rows are processed in parallel.
pub fn classify_grid(
    f: &FunctionExpression,
    grid: &GridSpec,
    policy: &OrbitPolicy,
) -> PixelClassification {
    let classes = (0..grid.ny)
        .into_par_iter()
        .flat_map_iter(|j| (0..grid.nx).map(move |i| classify_point(f, grid.center(i, j), policy)))
        .collect();
    PixelClassification {
        grid: *grid,
        classes,
        policy: *policy,
    }
}

/// Single-threaded [`classify_grid`].
pub fn classify_grid_serial(
    f: &FunctionExpression,
    grid: &GridSpec,
    policy: &OrbitPolicy,
) -> PixelClassification {
    let classes = (0..grid.ny)
        .flat_map(|j| (0..grid.nx).map(move |i| (i, j)))
        .map(|(i, j)| classify_point(f, grid.center(i, j), policy))
        .collect();
    PixelClassification {
        grid: *grid,
        classes,
        policy: *policy,
    }
}

/// Target-class pixels with at least one 4-neighbour of another class.
pub fn boundary_pixels(c: &PixelClassification, target: PointClass) -> Vec<bool> {
    let (nx, ny) = (c.grid.nx, c.grid.ny);
    let mut out = vec![false; nx * ny];
    for j in 0..ny {
        for i in 0..nx {
            if c.get(i, j) != target {
                continue;
            }
            let differs = |a: usize, b: usize| c.get(a, b) != target;
            out[j * nx + i] = (i > 0 && differs(i - 1, j))
                || (i + 1 < nx && differs(i + 1, j))
                || (j > 0 && differs(i, j - 1))
                || (j + 1 < ny && differs(i, j + 1));
        }
    }
    out
}
