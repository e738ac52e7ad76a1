//! Binary PPM (P6) rendering with a fixed palette.

use super::PixelClassification;
use crate::orbits::PointClass;

pub type Rgb = [u8; 3];

pub const PALETTE_UNBOUNDED: Rgb = [255, 255, 255];
pub const PALETTE_BOUNDED: Rgb = [0, 0, 0];
pub const PALETTE_UNDECIDED: Rgb = [128, 128, 128];
pub const PALETTE_BOUNDARY: Rgb = [255, 0, 0];

/// P6 bytes for a classification, with an optional boundary overlay
/// drawn in red.
pub fn write_ppm(c: &PixelClassification, overlay: Option<&[bool]>) -> Vec<u8> {
    let header = format!("P6\n{} {}\n255\n", c.grid.nx, c.grid.ny);
    let mut out = Vec::with_capacity(header.len() + 3 * c.classes.len());
    out.extend_from_slice(header.as_bytes());
    for (k, &class) in c.classes.iter().enumerate() {
        let rgb = if overlay.is_some_and(|m| m[k]) {
            PALETTE_BOUNDARY
        } else {
            match class {
                PointClass::UnboundedSuspect => PALETTE_UNBOUNDED,
                PointClass::BoundedSuspect => PALETTE_BOUNDED,
                PointClass::Undecided => PALETTE_UNDECIDED,
            }
        };
        out.extend_from_slice(&rgb);
    }
    out
}
