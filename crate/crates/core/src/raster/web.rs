//! Finite-resolution spider's-web probe.
//!
//! For each radius `r`, the pixels of the largest component lying outside the
//! disc of radius `r` about `center` are kept as walls. The probe passes
//! when the complement region holding `center` is cut off from the
//! window border by those walls, i.e. some closed loop of the component
//! surrounds the disc.

use std::collections::VecDeque;

use num_complex::Complex64;
use serde::Serialize;

use super::{ComponentLabeling, RasterError};

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct WebProbeEntry {
    pub radius: f64,
    pub passed: bool,
    /// Component pixels at distance >= radius.
    pub wall_pixels: usize,
    /// Pixels reached by the flood from the centre.
    pub enclosed_pixels: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct WebProbeReport {
    pub center: [f64; 2],
    /// Id of the largest component, if any.
    pub component: Option<u32>,
    pub entries: Vec<WebProbeEntry>,
    /// All radii passed.
    pub consistent: bool,
    pub note: &'static str,
}

const NOTE: &str = "finite-resolution check: a pass means a loop of pixels surrounds each disc, not a proof of spider's-web structure";

/// Probes the largest component of `labeling` about `center`.
pub fn spiders_web_probe(
    labeling: &ComponentLabeling,
    center: Complex64,
    radii: &[f64],
) -> Result<WebProbeReport, RasterError> {
    let grid = &labeling.grid;
    if radii.is_empty()
        || radii[0] <= 0.0
        || radii.windows(2).any(|w| w[1] <= w[0])
        || radii.iter().any(|r| !r.is_finite())
    {
        return Err(RasterError::InvalidRadii);
    }
    let w = grid.window;
    for &r in radii {
        if center.re - r <= w.x_min
            || center.re + r >= w.x_max
            || center.im - r <= w.y_min
            || center.im + r >= w.y_max
        {
            return Err(RasterError::RadiusOutsideWindow { center, radius: r });
        }
    }
    let (ci, cj) = grid
        .pixel_of(center)
        .ok_or(RasterError::RadiusOutsideWindow {
            center,
            radius: radii[0],
        })?;
    let (nx, ny) = (grid.nx, grid.ny);
    let dist: Vec<f64> = (0..ny)
        .flat_map(|j| (0..nx).map(move |i| (i, j)))
        .map(|(i, j)| (grid.center(i, j) - center).norm())
        .collect();
    let flood_conn = labeling.connectivity.dual();
    let component = labeling.largest().map(|c| c.id);

    let entries = radii
        .iter()
        .map(|&r| {
            let wall: Vec<bool> = (0..nx * ny)
                .map(|k| Some(labeling.labels[k]) == component && dist[k] >= r)
                .collect();
            let wall_pixels = wall.iter().filter(|&&b| b).count();
            let start = cj * nx + ci;
            if wall[start] {
                return WebProbeEntry {
                    radius: r,
                    passed: false,
                    wall_pixels,
                    enclosed_pixels: 0,
                };
            }
            let mut seen = vec![false; nx * ny];
            seen[start] = true;
            let mut queue = VecDeque::from([(ci, cj)]);
            let mut reached = 0usize;
            let mut escaped = false;
            while let Some((i, j)) = queue.pop_front() {
                reached += 1;
                if i == 0 || j == 0 || i + 1 == nx || j + 1 == ny {
                    escaped = true;
                    break;
                }
                for &(di, dj) in flood_conn.offsets() {
                    let (a, b) = ((i as isize + di) as usize, (j as isize + dj) as usize);
                    let k = b * nx + a;
                    if !seen[k] && !wall[k] {
                        seen[k] = true;
                        queue.push_back((a, b));
                    }
                }
            }
            WebProbeEntry {
                radius: r,
                passed: !escaped,
                wall_pixels,
                enclosed_pixels: reached,
            }
        })
        .collect::<Vec<_>>();
    let consistent = entries.iter().all(|e| e.passed);
    Ok(WebProbeReport {
        center: [center.re, center.im],
        component,
        entries,
        consistent,
        note: NOTE,
    })
}
