//! Symbolic derivatives against central finite differences.

use iplus::scenario::SCENARIOS;
use iplus::FunctionExpression;
use num_complex::Complex64;
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};

const H: f64 = 1e-6;

fn random_point(rng: &mut StdRng, radius: f64) -> Complex64 {
    loop {
        let z = Complex64::new(
            rng.gen_range(-radius..radius),
            rng.gen_range(-radius..radius),
        );
        if z.norm() <= radius {
            return z;
        }
    }
}

fn check(f: &FunctionExpression, points: usize, rng: &mut StdRng) -> f64 {
    let df = f.derivative();
    let mut worst = 0.0f64;
    for _ in 0..points {
        let z = random_point(rng, 5.0);
        let fd = (f.eval(z + H) - f.eval(z - H)) / (2.0 * H);
        let exact = df.eval(z);
        let rel = (fd - exact).norm() / exact.norm();
        assert!(
            rel < 1e-5,
            "{} at {z}: symbolic {exact}, difference {fd}",
            f.source()
        );
        worst = worst.max(rel);
    }
    worst
}

#[test]
fn scenario_functions() {
    eprintln!("{}", run());
}

/// 1000 points in |z| ≤ 5 for each scenario function.
pub fn run() -> String {
    let mut rng = StdRng::seed_from_u64(0x5eed_0004);
    let worst: Vec<String> = SCENARIOS
        .iter()
        .map(|sc| format!("{} {:.2e}", sc.name, check(&sc.function(), 1000, &mut rng)))
        .collect();
    format!(
        "1000 points per function, worst relative error: {}",
        worst.join(", ")
    )
}

#[test]
fn assorted_compositions() {
    let mut rng = StdRng::seed_from_u64(0x5eed_0005);
    for src in [
        "z^5 - 3*z^2 + (2-i)",
        "exp(sin(z)) * z",
        "cos(z^2)/3",
        "(z+1)^3*exp(-z/2)",
        "sin(z)*cos(z) + 0.5i*z",
        "exp(exp(z/4))",
    ] {
        check(&FunctionExpression::parse(src).unwrap(), 200, &mut rng);
    }
}
