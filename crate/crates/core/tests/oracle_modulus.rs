//! min/max modulus against a 10⁶-angle brute force with native closures.

use std::f64::consts::TAU;

use iplus::modulus::{max_modulus, min_modulus, DEFAULT_ANGLE_TOL, DEFAULT_N_COARSE};
use iplus::FunctionExpression;
use num_complex::Complex64;
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};
use rayon::prelude::*;

const ANGLES: usize = 1_000_000;

fn brute(f: &(dyn Fn(Complex64) -> f64 + Sync), r: f64) -> (f64, f64) {
    (0..ANGLES)
        .into_par_iter()
        .map(|k| f(Complex64::from_polar(r, TAU * k as f64 / ANGLES as f64)))
        .fold(
            || (f64::INFINITY, 0.0f64),
            |(lo, hi), v| (lo.min(v), hi.max(v)),
        )
        .reduce(
            || (f64::INFINITY, 0.0f64),
            |a, b| (a.0.min(b.0), a.1.max(b.1)),
        )
}

type Native = Box<dyn Fn(Complex64) -> f64 + Sync>;

#[test]
fn extrema_match_brute_force() {
    eprintln!("{}", run());
}

/// 4 functions × 20 seeded radii; returns a one-line summary.
pub fn run() -> String {
    let cases: Vec<(&str, Native)> = vec![
        (
            "z^3-2*z+1",
            Box::new(|z: Complex64| (z * z * z - 2.0 * z + 1.0).norm()),
        ),
        ("exp(z)+z", Box::new(|z: Complex64| (z.exp() + z).norm())),
        ("sin(z)", Box::new(|z: Complex64| z.sin().norm())),
        ("cos(z)+z", Box::new(|z: Complex64| (z.cos() + z).norm())),
    ];
    let mut rng = StdRng::seed_from_u64(0x5eed_0001);
    let radii: Vec<f64> = (0..20).map(|_| rng.gen_range(0.3..8.0)).collect();
    let mut worst = 0.0f64;
    for (src, native) in &cases {
        let f = FunctionExpression::parse(src).unwrap();
        for &r in &radii {
            let (lo, hi) = brute(native.as_ref(), r);
            let m = min_modulus(&f, r, DEFAULT_N_COARSE, DEFAULT_ANGLE_TOL)
                .unwrap()
                .value;
            let x = max_modulus(&f, r, DEFAULT_N_COARSE, DEFAULT_ANGLE_TOL)
                .unwrap()
                .value;
            let e_lo = (m - lo).abs() / lo;
            let e_hi = (x - hi).abs() / hi;
            assert!(e_lo < 1e-6, "{src} r={r}: min {m} vs brute {lo}");
            assert!(e_hi < 1e-6, "{src} r={r}: max {x} vs brute {hi}");
            // Refinement can only improve on the brute-force grid.
            assert!(
                m <= lo * (1.0 + 1e-12) && x >= hi * (1.0 - 1e-12),
                "{src} r={r}"
            );
            worst = worst.max(e_lo).max(e_hi);
        }
    }
    format!("80 extrema, worst relative deviation {worst:.3e}")
}
