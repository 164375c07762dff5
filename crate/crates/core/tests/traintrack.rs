use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use semiflat::corpus::{pants_all, PANTS_GENUS2_THETA, PANTS_TORUS2_RING};
use semiflat::numeric::{q, q_frac, Q};
use semiflat::traintrack::*;
use semiflat::Error;

fn random_weight(rng: &mut ChaCha8Rng, basis: &[Vec<Q>], pos: &[Q]) -> Vec<Q> {
    let k = q(rng.gen_range(1..50));
    let mut w: Vec<Q> = pos.iter().map(|x| x * &k).collect();
    for b in basis {
        let c = q_frac(rng.gen_range(-20..=20), rng.gen_range(1..12));
        for (x, y) in w.iter_mut().zip(b) {
            *x += &c * y;
        }
    }
    w
}

/// Extra marked points in a chain of pants (sphere with n points).
fn sphere(n: usize) -> PantsDecomposition {
    let mut text = String::new();
    let k = n - 2;
    for p in 0..k {
        text += &format!("pants P{}\n", p);
    }
    for p in 0..k {
        let first = p == 0;
        let last = p + 1 == k;
        text += &format!("cuff P{}.0 marked\n", p);
        if first {
            text += "cuff P0.1 marked\n";
        }
        if last {
            text += &format!("cuff P{}.2 marked\n", p);
        } else {
            text += &format!("cuff P{}.2 glue P{}.1\n", p, p + 1);
        }
    }
    parse_pants(&text).unwrap()
}

#[test]
fn dimensions_follow_the_formula() {
    let mut all: Vec<(String, PantsDecomposition)> = pants_all().into_iter().map(|(n, p)| (n.to_string(), p)).collect();
    all.push(("sphere5".into(), sphere(5)));
    all.push(("sphere7".into(), sphere(7)));
    for (name, pd) in &all {
        let (tau, tau2) = build_tracks(pd).unwrap();
        let d = 6 * pd.genus() + 2 * pd.n_marked() as i64 - 6;
        assert_eq!(pd.curves().len() as i64, 3 * pd.genus() + pd.n_marked() as i64 - 3, "{}", name);
        for t in [&tau, &tau2] {
            assert_eq!(weight_space_basis(t).unwrap().len() as i64, d, "{}", name);
            t.audit_regions().unwrap();
            for s in &t.switches {
                assert_eq!(s.incoming.len() + s.outgoing.len(), 3);
            }
        }
    }
    let g2 = parse_pants(PANTS_GENUS2_THETA).unwrap();
    assert_eq!((g2.genus(), g2.n_marked()), (2, 0));
    let (t, _) = build_tracks(&g2).unwrap();
    assert_eq!(t.branches.len(), 18);
    assert_eq!(weight_space_basis(&t).unwrap().len(), 6);
}

#[test]
fn low_complexity_is_rejected() {
    let one = "pants P\ncuff P.0 glue P.1\ncuff P.2 marked\n";
    let pd = parse_pants(one).unwrap();
    assert!(matches!(build_tracks(&pd), Err(Error::ComplexityTooLow { g: 1, n: 1 })));
    assert!(matches!(build_tracks(&sphere(4)), Err(Error::ComplexityTooLow { .. })));
}

#[test]
fn parse_errors_and_round_trip() {
    for (_, pd) in pants_all() {
        let again = parse_pants(&pd.to_text()).unwrap();
        assert_eq!(again.to_text(), pd.to_text());
    }
    assert!(matches!(parse_pants("pants P\ncuff P.0 glue P.1\ncuff P.2 glue P.2\n"), Err(Error::UngluedSlot(_))));
    assert!(matches!(parse_pants("pants P\ncuff P.3 marked\n"), Err(Error::Parse { line: 2, .. })));
    assert!(matches!(parse_pants("pants P\ncuff P.0 marked\n"), Err(Error::UngluedSlot(_))));
    let two = "pants P\npants Q\ncuff P.0 glue P.1\ncuff P.2 marked\ncuff Q.0 glue Q.1\ncuff Q.2 marked\n";
    assert!(matches!(parse_pants(two), Err(Error::Disconnected)));
    assert!(matches!(
        parse_pants("pants P\ncuff P.0 glue P.1\ncuff P.1 glue P.2\n"),
        Err(Error::Parse { line: 3, .. })
    ));
}

#[test]
fn basis_and_positive_weights_satisfy_switches() {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    for (_, pd) in pants_all() {
        let (t, t2) = build_tracks(&pd).unwrap();
        for t in [&t, &t2] {
            let basis = weight_space_basis(t).unwrap();
            for b in &basis {
                assert!(t.satisfies_switches(b));
            }
            let pos = positive_solution(t);
            assert!(t.satisfies_switches(&pos));
            assert!(pos.iter().all(|x| *x > q(0)));
            for _ in 0..20 {
                let w = random_weight(&mut rng, &[], &pos);
                assert!(t.satisfies_switches(&w));
            }
        }
    }
}

#[test]
fn intersections_are_linear_and_see_disjointness() {
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    for (_, pd) in pants_all() {
        let (t, _) = build_tracks(&pd).unwrap();
        let sigma = sigma_system(&t);
        assert_eq!(sigma.len(), pd.weight_dim());
        let zero = vec![q(0); t.branches.len()];
        assert!(sigma.intersections(&zero).iter().all(|x| *x == q(0)));
        let basis = weight_space_basis(&t).unwrap();
        let w = random_weight(&mut rng, &basis, &positive_solution(&t));
        let w2: Vec<Q> = w.iter().map(|x| x * q(2)).collect();
        for (a, b) in sigma.intersections(&w).iter().zip(sigma.intersections(&w2)) {
            assert_eq!(a * q(2), b);
        }
        for c in 0..pd.curves().len() {
            let wc = pants_curve_weights(&t, c);
            assert!(t.satisfies_switches(&wc));
            for j in 0..pd.curves().len() {
                assert_eq!(intersect(&sigma.curves[j], &wc), q(0));
            }
            // Each pants curve meets its transverse curve once or twice.
            let tc = &sigma.curves[pd.curves().len() + c];
            assert_eq!(intersect(tc, &wc), q(sigma.meets[c] as i64));
            assert_eq!(sigma.meets[c], if pd.curves()[c].is_handle() { 1 } else { 2 });
        }
    }
}

#[test]
fn pants_curve_seen_from_either_side() {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    for (_, pd) in pants_all() {
        let (t, _) = build_tracks(&pd).unwrap();
        let basis = weight_space_basis(&t).unwrap();
        let w = random_weight(&mut rng, &basis, &positive_solution(&t));
        for pc in pd.curves() {
            let side = |c: CuffRef| -> Q { t.endpoints.iter().filter(|e| e.cuff == c).map(|e| &w[e.branch]).sum() };
            assert_eq!(side(pc.a), side(pc.b));
        }
    }
}

#[test]
fn intersection_map_is_injective_and_recovered_exactly() {
    let mut rng = ChaCha8Rng::seed_from_u64(6);
    for (name, pd) in pants_all() {
        for t in {
            let (a, b) = build_tracks(&pd).unwrap();
            [a, b]
        } {
            let sigma = sigma_system(&t);
            assert_eq!(sigma.restricted_rank().unwrap(), pd.weight_dim(), "{}", name);
            let a = recovery_matrix(&sigma).unwrap();
            let basis = weight_space_basis(&t).unwrap();
            let pos = positive_solution(&t);
            for _ in 0..50 {
                let w = random_weight(&mut rng, &basis, &pos);
                assert_eq!(a.mul_vec(&sigma.intersections(&w)), w, "{}", name);
            }
        }
    }
}

#[test]
fn closed_forms_on_pants() {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let pd = parse_pants(PANTS_GENUS2_THETA).unwrap();
    let (t, _) = build_tracks(&pd).unwrap();
    let sigma = sigma_system(&t);
    let basis = weight_space_basis(&t).unwrap();
    let w = random_weight(&mut rng, &basis, &positive_solution(&t));
    let i = sigma.intersections(&w);
    for (b, br) in t.branches.iter().enumerate() {
        if let BranchKind::Seam { slots: (j1, j2), .. } = br.kind {
            // In the theta graph slot s carries curve s on both pants.
            let j3 = 3 - j1 - j2;
            assert_eq!(w[b], (&i[j1] + &i[j2] - &i[j3]) / q(2));
        }
    }

    let pd = parse_pants(PANTS_TORUS2_RING).unwrap();
    let (t, _) = build_tracks(&pd).unwrap();
    let sigma = sigma_system(&t);
    let basis = weight_space_basis(&t).unwrap();
    let w = random_weight(&mut rng, &basis, &positive_solution(&t));
    let i = sigma.intersections(&w);
    for p in 0..2 {
        let s = pd.glued_slots(p);
        let c1 = pd.curve_at(CuffRef::new(p, s[0])).unwrap();
        let c2 = pd.curve_at(CuffRef::new(p, s[1])).unwrap();
        let find = |k: BranchKind| t.branches.iter().position(|b| b.kind == k).unwrap();
        assert_eq!(w[find(BranchKind::Connector { pants: p })], i[c1]);
        assert_eq!(w[find(BranchKind::Stem { pants: p })], &i[c2] - &i[c1]);
        assert_eq!(w[find(BranchKind::Loop { pants: p })], (&i[c2] - &i[c1]) / q(2));
    }
}

#[test]
fn interior_recovery_is_local() {
    for (_, pd) in pants_all() {
        let (t, _) = build_tracks(&pd).unwrap();
        let sigma = sigma_system(&t);
        let a = recovery_matrix(&sigma).unwrap();
        for (b, br) in t.branches.iter().enumerate() {
            let p = match br.kind {
                BranchKind::Seam { pants, .. }
                | BranchKind::Connector { pants }
                | BranchKind::Stem { pants }
                | BranchKind::Loop { pants } => pants,
                BranchKind::Curve { .. } => continue,
            };
            let near: Vec<usize> = (0..3).filter_map(|s| pd.curve_at(CuffRef::new(p, s))).collect();
            for j in 0..sigma.len() {
                if *a.get(b, j) != q(0) {
                    assert!(j < pd.curves().len() && near.contains(&j));
                }
            }
        }
    }
}

#[test]
fn corrupted_crossings_are_flagged() {
    let pd = parse_pants(PANTS_GENUS2_THETA).unwrap();
    let (t, _) = build_tracks(&pd).unwrap();
    let sigma = sigma_system(&t);
    let mut bad = sigma.clone();
    bad.curves[0].crossings.remove(0);
    assert!(matches!(recovery_matrix(&bad), Err(Error::SingularSystem(_))));
    let mut bad = sigma.clone();
    let n = pd.curves().len();
    let k = bad.curves[n]
        .crossings
        .iter()
        .position(|&(b, _)| matches!(t.branches[b].kind, BranchKind::Curve { .. }))
        .unwrap();
    bad.curves[n].crossings.remove(k);
    assert!(matches!(recovery_matrix(&bad), Err(Error::SingularSystem(_))));
}
