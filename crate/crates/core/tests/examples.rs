use std::f64::consts::PI;

use iplus::domain::Rect;
use iplus::orbits::{classify_point, iterate_orbit, OrbitOutcome, OrbitPolicy, PointClass};
use iplus::raster::{
    boundary_pixels, classify_grid, label_components, spiders_web_probe, Connectivity, GridSpec,
};
use iplus::scenario::{EX51_SOURCE, EX52_SOURCE, SINZ_SOURCE};
use iplus::FunctionExpression;
use num_complex::Complex64;
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};

fn parse(s: &str) -> FunctionExpression {
    FunctionExpression::parse(s).unwrap()
}

fn sin_grid(nx: usize, ny: usize) -> GridSpec {
    GridSpec::new(Rect::new(-10.0, 10.0, -5.0, 5.0).unwrap(), nx, ny).unwrap()
}

#[test]
fn ex51_top_edge_maps_left_and_below() {
    // z = x + 8πi, 0 ≤ x ≤ 8π.
    let f = parse(EX51_SOURCE);
    let y = 8.0 * PI;
    for k in 0..=100_000 {
        let w = f.eval(Complex64::new(y * k as f64 / 100_000.0, y));
        assert!(w.re <= 1e-9 * w.norm(), "{w}");
        assert!(w.im < -4.0 * PI, "{w}");
    }
}

#[test]
fn cos_plus_z_basin_of_half_pi() {
    let f = parse(EX52_SOURCE);
    let grid = GridSpec::new(Rect::new(0.0, 2.0 * PI, -1.0, 1.0).unwrap(), 128, 64).unwrap();
    let c = classify_grid(&f, &grid, &OrbitPolicy::default());
    let mut near = 0;
    for j in 0..grid.ny {
        for i in 0..grid.nx {
            if (grid.center(i, j) - Complex64::new(PI / 2.0, 0.0)).norm() < 0.3 {
                near += 1;
                assert_eq!(c.get(i, j), PointClass::BoundedSuspect);
            }
        }
    }
    assert!(near > 20);
}

#[test]
fn ex52_real_seeds_reach_nearest_superattracting_point() {
    let f = parse(EX52_SOURCE);
    let policy = OrbitPolicy {
        budget: 500,
        ..OrbitPolicy::default()
    };
    let mut rng = StdRng::seed_from_u64(0x5eed_0006);
    for _ in 0..100 {
        let x = loop {
            let x: f64 = rng.gen_range(0.0..2.0 * PI);
            if (x - PI / 2.0).abs() > 1e-9 && (x - 1.5 * PI).abs() > 1e-9 && x > 0.0 {
                break x;
            }
        };
        let target = if x < 1.5 * PI { PI / 2.0 } else { 2.5 * PI };
        let v = iterate_orbit(&f, Complex64::new(x, 0.0), &policy, true);
        let trace = v.trace.unwrap();
        assert!(trace.len() <= 501);
        let hit = trace
            .iter()
            .any(|p| (Complex64::new(p[0], p[1]) - Complex64::new(target, 0.0)).norm() < 1e-6);
        assert!(hit, "seed {x}: {:?}", v.outcome);
    }
}

#[test]
fn near_repelling_point_against_long_budget() {
    let f = parse(EX52_SOURCE);
    let z0 = Complex64::new(1.5 * PI + 1e-3, 0.0);
    let policy = OrbitPolicy::default();
    let class = classify_point(&f, z0, &policy);
    assert!(matches!(
        class,
        PointClass::Undecided | PointClass::BoundedSuspect
    ));

    let long = OrbitPolicy {
        budget: 100_000,
        ..policy
    };
    let oracle = iterate_orbit(&f, z0, &long, false).outcome;
    eprintln!("default budget: {class:?}; budget 1e5: {oracle:?}");
    // Drift to the right, into the basin of 5π/2.
    match oracle {
        OrbitOutcome::CycleLocked {
            period: 1,
            representative,
        } => {
            assert!((representative[0] - 2.5 * PI).abs() < 1e-9 && representative[1].abs() < 1e-9);
            assert_eq!(class, PointClass::BoundedSuspect);
        }
        other => panic!("long-budget oracle did not lock: {other:?}"),
    }
}

#[test]
fn sine_boundary_borders_the_real_axis_component() {
    let f = parse(SINZ_SOURCE);
    let grid = sin_grid(400, 200);
    let policy = OrbitPolicy::default();
    let c = classify_grid(&f, &grid, &policy);
    let mask = boundary_pixels(&c, PointClass::UnboundedSuspect);
    assert!(mask.iter().any(|&b| b));

    // The bounded component through the axis rows 99/100.
    let bounded = label_components(&c, PointClass::BoundedSuspect, Connectivity::Four);
    let axis = bounded.labels[grid.index(0, 99)];
    assert!(axis != 0 && (0..grid.nx).all(|i| bounded.labels[grid.index(i, 100)] == axis));

    let mut checked = 0;
    for j in 0..grid.ny {
        for i in 0..grid.nx {
            if !mask[grid.index(i, j)] {
                continue;
            }
            let neighbour =
                [(0i64, 1i64), (0, -1), (1, 0), (-1, 0)]
                    .iter()
                    .find_map(|&(di, dj)| {
                        let (a, b) = (i as i64 + di, j as i64 + dj);
                        let inside =
                            a >= 0 && b >= 0 && (a as usize) < grid.nx && (b as usize) < grid.ny;
                        (inside && bounded.labels[grid.index(a as usize, b as usize)] == axis)
                            .then_some((a as usize, b as usize))
                    });
            let Some((a, b)) = neighbour else { continue };
            // Finer oracle: 16 steps between the two pixel centres show the class change.
            let (p, q) = (grid.center(i, j), grid.center(a, b));
            let classes: Vec<PointClass> = (0..=16)
                .map(|k| classify_point(&f, p + (q - p) * (k as f64 / 16.0), &policy))
                .collect();
            assert_eq!(classes[0], PointClass::UnboundedSuspect);
            assert!(
                classes.contains(&PointClass::BoundedSuspect),
                "pixel ({i},{j})"
            );
            checked += 1;
        }
    }
    assert!(
        checked > 100,
        "only {checked} boundary pixels border the axis component"
    );
}

#[test]
fn sine_unbounded_set_is_not_a_web_about_zero() {
    let f = parse(SINZ_SOURCE);
    let grid = sin_grid(400, 200);
    let c = classify_grid(&f, &grid, &OrbitPolicy::default());
    let l = label_components(&c, PointClass::UnboundedSuspect, Connectivity::Four);
    let rep = spiders_web_probe(&l, Complex64::new(0.0, 0.0), &[0.5, 1.0, 2.0, 4.0]).unwrap();
    assert!(!rep.consistent);
    assert!(rep.entries.iter().all(|e| !e.passed));
}

#[test]
fn sine_component_count_by_resolution() {
    // Reported, not asserted.
    let f = parse(SINZ_SOURCE);
    let counts: Vec<(usize, usize, usize)> = [100usize, 200, 400]
        .iter()
        .map(|&nx| {
            let c = classify_grid(&f, &sin_grid(nx, nx / 2), &OrbitPolicy::default());
            let l = label_components(&c, PointClass::UnboundedSuspect, Connectivity::Four);
            (nx, l.component_count(), l.edge_touching().count())
        })
        .collect();
    eprintln!("sin z unbounded components (columns, total, edge-touching): {counts:?}");
}
