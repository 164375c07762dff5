#![allow(dead_code)]

use rand::Rng;
use semiflat::geodesics::CurveClass;
use semiflat::{Slot, Surface};
use std::collections::VecDeque;

/// Random closed walk in the dual graph: `len` random steps from a random
/// triangle, closed up by a shortest path back.
pub fn random_walk(s: &Surface, rng: &mut impl Rng, len: usize) -> Vec<Slot> {
    let t0 = rng.gen_range(0..s.n_tris());
    let mut t = t0;
    let mut out = Vec::new();
    for _ in 0..len {
        let h = Slot::new(t, rng.gen_range(0..3));
        out.push(h);
        t = s.partner(h).tri;
    }
    let mut prev: Vec<Option<Slot>> = vec![None; s.n_tris()];
    let mut seen = vec![false; s.n_tris()];
    seen[t] = true;
    let mut q = VecDeque::from([t]);
    while let Some(u) = q.pop_front() {
        for i in 0..3 {
            let h = Slot::new(u, i);
            let v = s.partner(h).tri;
            if !seen[v] {
                seen[v] = true;
                prev[v] = Some(h);
                q.push_back(v);
            }
        }
    }
    let mut back = Vec::new();
    let mut v = t0;
    while v != t {
        let h = prev[v].expect("connected");
        back.push(h);
        v = h.tri;
    }
    back.reverse();
    out.extend(back);
    out
}

/// Random essential-looking curve; retries until the walk is nonempty.
pub fn random_curve(s: &Surface, rng: &mut impl Rng, max_len: usize) -> CurveClass {
    loop {
        let len = rng.gen_range(1..=max_len);
        let w = random_walk(s, rng, len);
        if !w.is_empty() {
            if let Ok(c) = CurveClass::new(s, w) {
                return c;
            }
        }
    }
}

use semiflat::geodesics::curve::{canonical_rotation, reduce_cyclic, sweep};
use semiflat::geodesics::saddle::{enumerate_directed, SaddleConnection, DEFAULT_BUDGET};
use semiflat::geodesics::Keep;

/// Free homotopy class of a closed dual-graph walk. When every vertex of
/// the triangulation is marked, the surface minus the marked points
/// retracts onto the dual graph, so this key is a complete invariant.
pub fn class_key(s: &Surface, walk: &[Slot]) -> Vec<Slot> {
    canonical_rotation(&reduce_cyclic(s, walk))
}

pub fn all_vertices_marked(s: &Surface) -> bool {
    s.vertices().iter().all(|v| v.marked)
}

/// Shortest closed broken path of saddle connections in the class of
/// `walk`, searched among paths no longer than `bound`.
pub fn broken_path_min(s: &Surface, walk: &[Slot], bound: f64) -> Option<f64> {
    assert!(all_vertices_marked(s));
    let key = class_key(s, walk);
    let segs = enumerate_directed(s, bound, DEFAULT_BUDGET).unwrap();
    let mut best: Option<f64> = None;
    let mut path: Vec<usize> = Vec::new();
    fn dfs(
        s: &Surface,
        segs: &[SaddleConnection],
        key: &[Slot],
        bound: f64,
        path: &mut Vec<usize>,
        len: f64,
        best: &mut Option<f64>,
    ) {
        let first = path[0];
        let last = *path.last().unwrap();
        if segs[last].end == segs[first].start {
            let k = path.len();
            // Each junction turns left or right, optionally with one extra
            // full turn around the point: such paths bound the infimum in
            // classes that wrap around a marked point.
            for code in 0..(1u32 << (2 * k)) {
                let mut walk = Vec::new();
                for j in 0..k {
                    let (a, b) = (&segs[path[j]], &segs[path[(j + 1) % k]]);
                    let keep = if code >> (2 * j) & 1 == 1 { Keep::Left } else { Keep::Right };
                    walk.extend_from_slice(&a.crossings);
                    walk.extend(sweep(s, a.end_corner, a.end_within, b.start_corner, b.start_within, keep));
                    if code >> (2 * j + 1) & 1 == 1 {
                        walk.extend(sweep(s, b.start_corner, b.start_within, b.start_corner, b.start_within, keep));
                    }
                }
                if let Ok(c) = CurveClass::new(s, walk) {
                    if class_key(s, &c.crossings) == key && best.is_none_or(|b| len < b) {
                        *best = Some(len);
                    }
                }
            }
        }
        for i in first..segs.len() {
            if segs[i].start != segs[last].end || len + segs[i].length() > bound {
                continue;
            }
            path.push(i);
            dfs(s, segs, key, bound, path, len + segs[i].length(), best);
            path.pop();
        }
    }
    for i in 0..segs.len() {
        path.push(i);
        dfs(s, &segs, &key, bound, &mut path, segs[i].length(), &mut best);
        path.pop();
    }
    best
}

/// Directed connections on the unit torus with marked points at the lattice
/// Z^2 and at Z^2 + (1/2, 1/2): vectors from a point of one kind to a point
/// of either kind with no marked point strictly inside.
pub fn lattice_oracle(from_center: bool, to_center: Option<bool>, max_len: f64) -> Vec<(f64, f64)> {
    // Work in half units: marked points are those with coordinates of equal parity.
    let s0 = from_center as i64;
    let r = 2 * (max_len.ceil() as i64 + 1);
    let gcd = |mut a: i64, mut b: i64| {
        (a, b) = (a.abs(), b.abs());
        while b != 0 {
            (a, b) = (b, a % b);
        }
        a
    };
    let mut out = Vec::new();
    for x in -r..=r {
        for y in -r..=r {
            let (ex, ey) = (s0 + x, s0 + y);
            if (x, y) == (0, 0) || (ex - ey).rem_euclid(2) != 0 {
                continue;
            }
            if to_center.is_some_and(|w| w != (ex.rem_euclid(2) == 1)) {
                continue;
            }
            let len = ((x * x + y * y) as f64).sqrt() / 2.0;
            if len > max_len {
                continue;
            }
            let g = gcd(x, y);
            let blocked = (1..g).any(|k| (s0 + k * x / g - s0 - k * y / g).rem_euclid(2) == 0);
            if !blocked {
                out.push((x as f64 / 2.0, y as f64 / 2.0));
            }
        }
    }
    out
}
