mod common;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use semiflat::corpus::{self, genus2_generic, genus2_pants_curves, square_torus};
use semiflat::deformation::*;
use semiflat::geodesics::flow::parallel_curves;
use semiflat::geodesics::*;
use semiflat::numeric::{q, QVec, C64};
use semiflat::periods::PeriodChart;
use semiflat::{Error, Surface};
use std::f64::consts::PI;

fn horizontal(s: &Surface) -> Geodesic {
    let c = parallel_curves(s, &QVec::new(q(1), q(0)), 100).unwrap();
    let g = tighten(s, &c[0]).unwrap();
    assert!((g.length - 1.0).abs() < 1e-15);
    g
}

#[test]
fn foliation_values_on_the_torus() {
    let s = square_torus();
    let g = horizontal(&s);
    assert!((foliation_intersection(&g, 0.0) - 1.0).abs() < 1e-15);
    assert!(foliation_intersection(&g, PI / 2.0).abs() < 1e-15);
    let t = 0.3;
    assert!((foliation_intersection(&g, t) - t.cos()).abs() < 1e-15);
    // ½∫₀^π |cos θ| dθ = 1
    assert!((integral_exact(&g) - 1.0).abs() < 1e-15);
    assert!((integral_quadrature(&g, 1e-13) - 1.0).abs() < 1e-9);
}

/// Random curves on every corpus surface and on the generic genus-2 point.
fn sample_geodesics(seed: u64, per_surface: usize) -> Vec<(String, Geodesic)> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out = Vec::new();
    let mut surfaces: Vec<(String, Surface)> = corpus::all().into_iter().map(|(n, s)| (n.to_string(), s)).collect();
    surfaces.push(("genus2-generic".into(), genus2_generic()));
    for (name, s) in surfaces {
        let mut k = 0;
        while k < per_surface {
            let c = common::random_curve(&s, &mut rng, 8);
            if let Ok(g) = tighten(&s, &c) {
                out.push((name.clone(), g));
                k += 1;
            }
        }
    }
    out
}

#[test]
fn length_is_half_the_foliation_integral() {
    for (name, g) in sample_geodesics(11, 4) {
        let e = verify_length_formula(&g, IntegrationMode::Exact);
        assert!(e.residual <= 1e-10, "{} exact residual {}", name, e.residual);
        let t = std::time::Instant::now();
        let a = verify_length_formula(&g, IntegrationMode::Quadrature);
        assert!(a.residual <= 1e-8, "{} quadrature residual {}", name, a.residual);
        assert!(t.elapsed().as_secs_f64() < 1.0);
    }
}

#[test]
fn foliation_intersection_is_symmetric_and_continuous() {
    for (_, g) in sample_geodesics(12, 2) {
        let a = foliation_intersection(&g, 0.0);
        let b = foliation_intersection(&g, PI - 1e-12);
        assert!((a - b).abs() <= 1e-9 * g.length);
        for k in 0..100 {
            let t = k as f64 * PI / 100.0;
            let d = (foliation_intersection(&g, t + 1e-9) - foliation_intersection(&g, t)).abs();
            assert!(d <= 2e-9 * g.length);
            assert!(foliation_intersection(&g, t) <= g.length + 1e-12);
        }
    }
}

fn perturbed_chart(s: &Surface, rng: &mut ChaCha8Rng, size: f64) -> Option<(Surface, PeriodChart)> {
    let c = PeriodChart::build(s).unwrap();
    let d: Vec<C64> = (0..c.dim()).map(|_| C64::new(rng.gen_range(-size..size), rng.gen_range(-size..size))).collect();
    let p = c.perturb(&d, true).ok()?;
    let chart = PeriodChart::build(&p).unwrap();
    Some((p, chart))
}

/// Central differences of the tightened lengths, one real coordinate at a time.
fn fd_row(chart: &PeriodChart, c: &CurveClass, h: f64) -> Vec<f64> {
    (0..chart.real_dim())
        .map(|k| {
            let mut d = vec![C64::new(0.0, 0.0); chart.dim()];
            let e = if k % 2 == 0 { C64::new(h, 0.0) } else { C64::new(0.0, h) };
            d[k / 2] = e;
            let plus = length(&chart.perturb(&d, true).unwrap(), c).unwrap();
            d[k / 2] = -e;
            let minus = length(&chart.perturb(&d, true).unwrap(), c).unwrap();
            (plus - minus) / (2.0 * h)
        })
        .collect()
}

#[test]
fn jacobian_rows_match_finite_differences() {
    let mut rng = ChaCha8Rng::seed_from_u64(13);
    for (name, s) in corpus::all() {
        let mut points = 0;
        let mut tries = 0;
        while points < 10 && tries < 200 {
            tries += 1;
            let Some((p, chart)) = perturbed_chart(&s, &mut rng, 0.02) else { continue };
            let c = common::random_curve(&p, &mut rng, 6);
            let Ok(g) = tighten(&p, &c) else { continue };
            if stability_radius(&chart, &g).radius < 1e-5 {
                continue;
            }
            let jac = spectrum_jacobian(&chart, std::slice::from_ref(&g)).unwrap();
            let fd = fd_row(&chart, &c, 1e-6 * g.length.max(1.0).sqrt());
            let scale = jac.full[0].iter().fold(1.0f64, |m, x| m.max(x.abs()));
            for (a, b) in jac.full[0].iter().zip(&fd) {
                assert!((a - b).abs() <= 1e-6 * scale, "{}: {} vs {}", name, a, b);
            }
            assert_eq!(jac.rank, 1);
            points += 1;
        }
        assert_eq!(points, 10, "{}", name);
    }
}

#[test]
fn area_gradient_matches_finite_differences() {
    for (_, s) in corpus::all() {
        let chart = PeriodChart::build(&s).unwrap();
        let g = area_gradient(&chart).unwrap();
        let h = 1e-6;
        for k in 0..chart.real_dim() {
            let mut d = vec![C64::new(0.0, 0.0); chart.dim()];
            let e = if k % 2 == 0 { C64::new(h, 0.0) } else { C64::new(0.0, h) };
            d[k / 2] = e;
            let plus = chart.perturb(&d, true).unwrap().area();
            d[k / 2] = -e;
            let minus = chart.perturb(&d, true).unwrap().area();
            assert!(((plus - minus) / (2.0 * h) - g[k]).abs() < 1e-7);
        }
        let t = slice_tangent(&chart).unwrap();
        assert_eq!(t.ncols(), chart.slice_dim());
        assert_eq!(chart.slice_dim() as i64, s.stratum_signature().unwrap().dim_slice());
    }
}

#[test]
fn unstable_points_are_reported() {
    let s = corpus::genus2_q1111();
    let chart = PeriodChart::build(&s).unwrap();
    let curves = genus2_pants_curves(&s).unwrap();
    let g: Vec<Geodesic> = curves.iter().map(|c| tighten(&s, c).unwrap()).collect();
    assert!(matches!(spectrum_jacobian(&chart, &g), Err(Error::UnstablePoint(_))));
}

#[test]
fn pants_curves_leave_a_large_null_space() {
    let s = genus2_generic();
    let chart = PeriodChart::build(&s).unwrap();
    let curves = genus2_pants_curves(&s).unwrap();
    let g: Vec<Geodesic> = curves.iter().map(|c| tighten(&s, c).unwrap()).collect();
    let jac = spectrum_jacobian(&chart, &g).unwrap();
    assert_eq!(jac.slice_dim, 10);
    assert!(jac.rank <= curves.len());
    assert!(jac.nullity() >= jac.slice_dim - curves.len());
    assert_eq!(jac.null_space.len(), jac.nullity());
    let r = nullity_report(&chart, &g, &jac);
    assert_eq!(r.bound, 4);
    // Null vectors are tangent to the slice and annihilated by every row.
    let ag = area_gradient(&chart).unwrap();
    for v in &jac.null_space {
        assert!(v[1].abs() < 1e-12);
        assert!(ag.iter().zip(v).map(|(a, b)| a * b).sum::<f64>().abs() < 1e-9);
        for row in &jac.full {
            assert!(row.iter().zip(v).map(|(a, b)| a * b).sum::<f64>().abs() < 1e-9);
        }
    }
}

#[test]
fn isospectral_path_keeps_lengths() {
    let s = genus2_generic();
    let curves = genus2_pants_curves(&s).unwrap();
    let opts = PathOptions { steps: 50, h: 1e-2, max_newton: 10, seed: 1 };
    let p = follow_isospectral_path(&s, &curves, &opts).unwrap();
    p.check().unwrap();
    assert_eq!(p.steps.len(), 50);
    assert!(p.max_step_drift <= 1e-8);
    assert!(p.cumulative_drift <= 50.0 * 1e-8);
    // The path actually moves.
    let moved =
        p.steps.last().unwrap().coords.iter().zip(&p.start_coords).map(|(a, b)| (a - b).norm()).fold(0.0, f64::max);
    assert!(moved > 1e-4);
    // Lengths recomputed from scratch on the last surface.
    let last = p.surfaces.last().unwrap();
    for (c, l0) in curves.iter().zip(&p.start_lengths) {
        assert!((length(last, c).unwrap() - l0).abs() <= 5e-7);
    }
    let area0 = p.surfaces[0].area();
    assert!((last.area() - area0).abs() < 1e-10);
    assert!(p.waypoints_csv().lines().count() == 52);
}

#[test]
fn tiny_step_is_flat() {
    let s = genus2_generic();
    let curves = genus2_pants_curves(&s).unwrap();
    let opts = PathOptions { steps: 1, h: 1e-9, max_newton: 0, seed: 2 };
    let p = follow_isospectral_path(&s, &curves, &opts).unwrap();
    assert!(p.steps[0].drift <= 1e-12);
}

#[test]
fn filling_set_has_no_null_space() {
    let mut rng = ChaCha8Rng::seed_from_u64(14);
    let s = square_torus();
    let (p, chart) = loop {
        if let Some(x) = perturbed_chart(&s, &mut rng, 0.03) {
            break x;
        }
    };
    let mut curves = Vec::new();
    let mut geods = Vec::new();
    while geods.len() < 12 {
        let c = common::random_curve(&p, &mut rng, 6);
        let Ok(g) = tighten(&p, &c) else { continue };
        // Cylinder lengths only see absolute periods.
        if !g.is_cylinder() && stability_radius(&chart, &g).radius > 1e-6 {
            curves.push(c);
            geods.push(g);
        }
    }
    let jac = spectrum_jacobian(&chart, &geods).unwrap();
    assert_eq!(jac.rank, jac.slice_dim);
    let r = follow_isospectral_path(&p, &curves, &PathOptions::default());
    assert!(matches!(r, Err(Error::NullityZero)));
}
