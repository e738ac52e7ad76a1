//! Winding numbers of polynomial images of rectangle boundaries against
//! root counts from companion-matrix eigenvalues.

use iplus::curve::{boundary, image_curve, winding_number};
use iplus::domain::{DomainSpec, Rect};
use iplus::FunctionExpression;
use nalgebra::DMatrix;
use num_complex::Complex64;
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};

/// Roots of `c[0] + c[1] z + … + c[d] z^d`.
fn roots(c: &[Complex64]) -> Vec<Complex64> {
    let d = c.len() - 1;
    let lead = c[d];
    let mut m = DMatrix::<Complex64>::zeros(d, d);
    for k in 1..d {
        m[(k, k - 1)] = Complex64::new(1.0, 0.0);
    }
    for k in 0..d {
        m[(k, d - 1)] = -c[k] / lead;
    }
    m.schur()
        .eigenvalues()
        .expect("complex Schur form is triangular")
        .iter()
        .copied()
        .collect()
}

fn dist_to_rect_boundary(z: Complex64, r: &Rect) -> f64 {
    let dx = (z.re - r.x_min).abs().min((z.re - r.x_max).abs());
    let dy = (z.im - r.y_min).abs().min((z.im - r.y_max).abs());
    let inside_x = z.re >= r.x_min && z.re <= r.x_max;
    let inside_y = z.im >= r.y_min && z.im <= r.y_max;
    match (inside_x, inside_y) {
        (true, true) => dx.min(dy),
        (true, false) => dy,
        (false, true) => dx,
        (false, false) => dx.hypot(dy),
    }
}

fn literal(c: Complex64) -> String {
    format!("({}{:+}i)", c.re, c.im)
}

#[test]
fn winding_equals_root_count() {
    eprintln!("{}", run());
}

/// 50 seeded polynomial/rectangle cases; returns a one-line summary.
pub fn run() -> String {
    let mut rng = StdRng::seed_from_u64(0x5eed_0002);
    let mut cases = 0;
    let mut counts = [0usize; 6];
    while cases < 50 {
        let d = rng.gen_range(1..=5);
        let c: Vec<Complex64> = (0..=d)
            .map(|_| Complex64::new(rng.gen_range(-2.0..2.0), rng.gen_range(-2.0..2.0)))
            .collect();
        if c[d].norm() < 0.3 {
            continue;
        }
        let w = Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0));
        let (x0, y0) = (rng.gen_range(-3.0..0.0), rng.gen_range(-3.0..0.0));
        let rect = Rect::new(
            x0,
            x0 + rng.gen_range(0.3..5.0),
            y0,
            y0 + rng.gen_range(0.3..5.0),
        )
        .unwrap();

        // Roots of p - w.
        let mut shifted = c.clone();
        shifted[0] -= w;
        let rs = roots(&shifted);
        if rs.iter().any(|&z| dist_to_rect_boundary(z, &rect) < 1e-3) {
            continue;
        }
        let expected = rs.iter().filter(|&&z| rect.contains(z)).count() as i64;

        let src = (0..=d)
            .map(|k| format!("{}*z^{k}", literal(c[k])))
            .collect::<Vec<_>>()
            .join("+");
        let f = FunctionExpression::parse(&src).unwrap();
        let domain = DomainSpec::rect(rect, "R").unwrap();
        let edge = boundary(&domain, 20.0).unwrap();
        let image = image_curve(&f, &edge, 0.05, 1_000_000).unwrap();
        let got = winding_number(&image, w, 1e-12).unwrap();
        assert_eq!(
            got, expected,
            "p = {src}, w = {w}, rect = {rect:?}, roots = {rs:?}"
        );
        counts[expected as usize] += 1;
        cases += 1;
    }
    assert!(counts[0] > 0 && counts[1..].iter().sum::<usize>() > 0);
    format!("50 cases, root-count histogram {counts:?}")
}
