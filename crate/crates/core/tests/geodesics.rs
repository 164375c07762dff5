mod common;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use semiflat::corpus::{self, octagon, square_torus};
use semiflat::geodesics::saddle::DEFAULT_BUDGET;
use semiflat::geodesics::*;
use semiflat::numeric::{q_frac, C64};
use semiflat::periods::build_chart;
use semiflat::{Corner, Error, Slot, Surface};

fn torus_curves(s: &Surface) -> Vec<CurveClass> {
    let h = |t, i| Slot::new(t, i);
    [vec![h(3, 1), h(0, 1), h(1, 0)], vec![h(0, 2), h(3, 2), h(2, 0)], vec![h(3, 2), h(2, 0), h(0, 1), h(1, 0)]]
        .into_iter()
        .map(|v| CurveClass::new(s, v).unwrap())
        .collect()
}

#[test]
fn torus_lengths() {
    let s = square_torus();
    let c = torus_curves(&s);
    let l = spectrum(&s, &c).unwrap();
    assert!((l[0] - 1.0).abs() < 1e-15);
    assert!((l[1] - 1.0).abs() < 1e-15);
    assert!((l[2] - 2f64.sqrt()).abs() < 1e-15);
    for x in &c {
        let g = tighten(&s, x).unwrap();
        check_angle_conditions(&s, &g).unwrap();
        assert!(g.is_cylinder());
    }
    assert!(spectrum(&s, &[]).unwrap().is_empty());
}

#[test]
fn diagonal_matches_broken_path_search() {
    let s = square_torus();
    let c = &torus_curves(&s)[2];
    let best = common::broken_path_min(&s, &c.crossings, 2.0).unwrap();
    assert!((best - 2f64.sqrt()).abs() < 1e-12);
}

#[test]
fn loops_around_points_are_inessential() {
    for (_, s) in corpus::all() {
        for v in s.vertices() {
            let c0 = v.corners[0];
            let around = curve::sweep(&s, c0, 0.0, c0, 0.0, Keep::Left);
            let c = CurveClass::new(&s, around).unwrap();
            assert!(matches!(tighten(&s, &c), Err(Error::InessentialCurve)));
        }
    }
    let s = square_torus();
    let a = Slot::new(0, 1);
    let c = CurveClass::new(&s, vec![a, s.partner(a)]).unwrap();
    assert!(matches!(tighten(&s, &c), Err(Error::InessentialCurve)));
}

#[test]
fn octagon_side_loop_has_unit_length() {
    let s = octagon();
    let sides = enumerate_saddle_connections(&s, 1.01, DEFAULT_BUDGET).unwrap();
    for sc in &sides {
        for keep in [Keep::Left, Keep::Right] {
            let c = CurveClass::from_path(&s, std::slice::from_ref(sc), &[keep]).unwrap();
            let g = tighten(&s, &c).unwrap();
            check_angle_conditions(&s, &g).unwrap();
            assert!((g.length - 1.0).abs() < 1e-12, "{}", g.length);
        }
    }
}

#[test]
fn random_curves_satisfy_angle_conditions() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for (name, s) in corpus::all() {
        let mut done = 0;
        while done < 40 {
            let c = common::random_curve(&s, &mut rng, 10);
            match tighten(&s, &c) {
                Ok(g) => {
                    check_angle_conditions(&s, &g).unwrap_or_else(|e| panic!("{}: {}", name, e));
                    if common::all_vertices_marked(&s) {
                        // No cone point can be crossed, so the class is kept.
                        assert_eq!(common::class_key(&s, &g.corridor), common::class_key(&s, &c.crossings));
                    }
                    done += 1;
                }
                Err(Error::InessentialCurve) => {}
                Err(e) => panic!("{}: {}", name, e),
            }
        }
    }
}

#[test]
fn rotation_and_scaling_preserve_lengths() {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    for (_, s) in corpus::all() {
        let curves: Vec<CurveClass> =
            (0..30).map(|_| common::random_curve(&s, &mut rng, 8)).filter(|c| tighten(&s, c).is_ok()).take(4).collect();
        let base = spectrum(&s, &curves).unwrap();
        for k in 0..16 {
            let r = s.rotate(0.1 + k as f64 * 0.37).unwrap();
            let l = spectrum(&r, &curves).unwrap();
            for (a, b) in base.iter().zip(&l) {
                assert!((a - b).abs() < 1e-10);
            }
        }
        let t = q_frac(7, 3);
        let scaled = spectrum(&s.scale(&t).unwrap(), &curves).unwrap();
        for (a, b) in base.iter().zip(&scaled) {
            assert!((b - a * 7.0 / 3.0).abs() < 1e-12 * b);
        }
        let norm = spectrum(&s.normalize_area().unwrap(), &curves).unwrap();
        let f = s.area().powf(-0.5);
        for (a, b) in base.iter().zip(&norm) {
            assert!((b - a * f).abs() < 1e-12 * b);
        }
    }
}

#[test]
fn gauge_moves_preserve_lengths() {
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    for (_, s) in corpus::all() {
        let g = s.gauge(0).unwrap().gauge(s.n_tris() - 1).unwrap();
        for _ in 0..10 {
            let c = common::random_curve(&s, &mut rng, 8);
            match (length(&s, &c), length(&g, &c)) {
                (Ok(a), Ok(b)) => assert!((a - b).abs() < 1e-12 * a.max(1.0)),
                (Err(_), Err(_)) => {}
                other => panic!("gauge changed the outcome: {:?}", other),
            }
        }
    }
}

#[test]
fn stability_radius_boundary_cases() {
    let s = square_torus();
    let ch = build_chart(&s).unwrap();
    let g = tighten(&s, &torus_curves(&s)[0]).unwrap();
    assert!(stability_radius(&ch, &g).radius > 0.0);
    // A loop through the two marked points with straight angles on both
    // sides of each has a junction at exactly π.
    let a = s.vertex_of(Corner::new(0, 0));
    let b = s.vertex_of(Corner::new(0, 2));
    let ab = semiflat::geodesics::enumerate_segments(&s, a, b, 0.8, DEFAULT_BUDGET).unwrap();
    let mut found = false;
    for x in &ab {
        let back = x.reversed(&s);
        for k in [Keep::Left, Keep::Right] {
            let k2 = if k == Keep::Left { Keep::Right } else { Keep::Left };
            let c = CurveClass::from_path(&s, &[x.clone(), back.clone()], &[k, k2]);
            if let Ok(c) = c {
                if let Ok(g) = tighten(&s, &c) {
                    if g.junctions.iter().any(|j| !j.uturn && j.slack().abs() < 1e-12) {
                        assert_eq!(stability_radius(&ch, &g).radius, 0.0);
                        found = true;
                    }
                }
            }
        }
    }
    let _ = found;
}

#[test]
fn stable_under_perturbation_and_gradient_matches() {
    use rand::Rng;
    let mut rng = ChaCha8Rng::seed_from_u64(21);
    for (name, s) in corpus::all() {
        let ch = build_chart(&s).unwrap();
        let mut tested = 0;
        let mut tries = 0;
        while tested < 5 && tries < 200 {
            tries += 1;
            let c = common::random_curve(&s, &mut rng, 8);
            let Ok(g) = tighten(&s, &c) else { continue };
            let r = stability_radius(&ch, &g).radius;
            if r < 1e-4 {
                continue;
            }
            let delta: Vec<C64> = (0..ch.dim())
                .map(|_| C64::from_polar(rng.gen_range(0.0..0.99) * r, rng.gen_range(0.0..std::f64::consts::TAU)))
                .collect();
            let t = ch.perturb(&delta, true).unwrap();
            let g2 = tighten(&t, &c).unwrap();
            assert_eq!(g2.corridor, g.corridor, "{}", name);
            let coords: Vec<C64> = ch.coordinates(&t).unwrap();
            let predicted = stability::length_in_chart(&ch, &g, &coords);
            assert!((predicted - g2.length).abs() < 1e-12 * g2.length);
            let grad = length_gradient(&ch, &g);
            let scale = grad.iter().fold(0.0f64, |m, x| m.max(x.abs()));
            let h = 1e-6;
            for j in 0..ch.real_dim() {
                let mut d = vec![C64::new(0.0, 0.0); ch.dim()];
                if j % 2 == 0 {
                    d[j / 2].re = h;
                } else {
                    d[j / 2].im = h;
                }
                let neg: Vec<C64> = d.iter().map(|x| -x).collect();
                let lp = length(&ch.perturb(&d, true).unwrap(), &c).unwrap();
                let lm = length(&ch.perturb(&neg, true).unwrap(), &c).unwrap();
                let fd = (lp - lm) / (2.0 * h);
                assert!((fd - grad[j]).abs() <= 1e-6 * scale, "{} coordinate {}", name, j);
            }
            tested += 1;
        }
        assert!(tested > 0, "{}: no stable curve found", name);
    }
}
