//! File formats shared by the CLI: CSV, JSON, atomic writes.

use std::fmt::Write as _;
use std::io::{self, Write as _};
use std::path::{Path, PathBuf};

use serde::Serialize;

use crate::curve::SampledCurve;

/// CSV line terminator (RFC 4180).
pub const CRLF: &str = "\r\n";

/// 17 significant digits; parses back to the same `f64`.
pub fn fmt_f64(x: f64) -> String {
    format!("{x:.16e}")
}

/// A header row followed by data rows.
pub fn csv_table<I>(header: &[&str], rows: I) -> String
where
    I: IntoIterator<Item = Vec<String>>,
{
    let mut out = header.join(",");
    out.push_str(CRLF);
    for row in rows {
        out.push_str(&row.join(","));
        out.push_str(CRLF);
    }
    out
}

/// `re,im` rows, one blank line between curves.
pub fn curves_csv<'a, I>(curves: I) -> String
where
    I: IntoIterator<Item = &'a SampledCurve>,
{
    let mut out = format!("re,im{CRLF}");
    for (k, c) in curves.into_iter().enumerate() {
        if k > 0 {
            out.push_str(CRLF);
        }
        for p in &c.points {
            let _ = write!(out, "{},{}{CRLF}", fmt_f64(p.re), fmt_f64(p.im));
        }
    }
    out
}

/// Pretty JSON with a trailing newline.
pub fn json_bytes<T: Serialize + ?Sized>(value: &T) -> Vec<u8> {
    let mut v = serde_json::to_vec_pretty(value).expect("report types serialize");
    v.push(b'\n');
    v
}

/// Writes `bytes` to `dir/name` via a temporary file in `dir` and a rename,
/// so readers never see a partial file.
pub fn write_atomic(dir: &Path, name: &str, bytes: &[u8]) -> io::Result<PathBuf> {
    std::fs::create_dir_all(dir)?;
    let target = dir.join(name);
    let mut tmp = tempfile::NamedTempFile::new_in(dir)?;
    tmp.write_all(bytes)?;
    tmp.as_file().sync_all()?;
    tmp.persist(&target).map_err(|e| e.error)?;
    Ok(target)
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_complex::Complex64;

    #[test]
    fn floats_round_trip() {
        for x in [0.1, 1.0 / 3.0, std::f64::consts::PI * 1e300, -2.5e-310, 0.0] {
            assert_eq!(fmt_f64(x).parse::<f64>().unwrap(), x);
        }
    }

    #[test]
    fn curves_are_separated() {
        let a = SampledCurve::from_points(vec![Complex64::new(0.0, 1.0)], false);
        let b = SampledCurve::from_points(vec![Complex64::new(2.0, 3.0)], false);
        let s = curves_csv([&a, &b]);
        let lines: Vec<&str> = s.split(CRLF).collect();
        assert_eq!(lines[0], "re,im");
        assert_eq!(lines[2], "");
        assert!(lines[3].starts_with("2.0"));
    }

    #[test]
    fn atomic_write_replaces() {
        let dir = tempfile::tempdir().unwrap();
        write_atomic(dir.path(), "a.txt", b"one").unwrap();
        let p = write_atomic(dir.path(), "a.txt", b"two").unwrap();
        assert_eq!(std::fs::read(p).unwrap(), b"two");
        assert_eq!(std::fs::read_dir(dir.path()).unwrap().count(), 1);
    }
}
