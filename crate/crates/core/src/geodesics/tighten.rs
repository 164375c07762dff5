//! Corridor straightening.
//!
//! The crossing sequence is developed over several periods, the taut path
//! through the long strip is found with the funnel algorithm, and one
//! period of it is read off. Unmarked cone points that the path wraps by
//! less than π on the far side are passed on the other side instead, and
//! the process repeats.

use super::curve::{canonical_rotation, reduce_cyclic, sweep, CurveClass, Keep};
use super::develop::{sym_sub, Strip};
use super::funnel::{funnel, PortalPt, Side};
use super::geodesic::{Geodesic, GeodesicKind, Junction, Piece, ANGLE_TOL};
use crate::error::{Error, Result};
use crate::numeric::{ccw_angle, cross, C64};
use crate::surface::{Corner, Slot, Surface};
use std::f64::consts::{PI, TAU};

const MAX_SWITCHES: usize = 5000;
const PERIODS: [usize; 4] = [6, 12, 24, 48];
/// Relative distance under which the taut path is taken to touch a vertex.
const TOUCH_TOL: f64 = 1e-9;

#[derive(Clone, Copy, Debug)]
struct Pin {
    k1: usize,
    k2: usize,
    side: Side,
    point: usize,
}

#[derive(Clone, Debug)]
struct PinInfo {
    pin: Pin,
    vertex: usize,
    arr: (Corner, f64),
    dep: (Corner, f64),
    fan: f64,
    other: f64,
}

enum Analysis {
    Done(Geodesic),
    Switch { start: usize, len: usize, replacement: Vec<Slot> },
}

pub fn tighten(s: &Surface, c: &CurveClass) -> Result<Geodesic> {
    let mut h = reduce_cyclic(s, &c.crossings);
    for _ in 0..MAX_SWITCHES {
        if h.is_empty() {
            return Err(Error::InessentialCurve);
        }
        match analyze(s, &h)? {
            Analysis::Done(g) => return Ok(g),
            Analysis::Switch { start, len, replacement } => {
                let n = h.len();
                let mut next = replacement;
                next.extend((len..n).map(|i| h[(start + i) % n]));
                h = reduce_cyclic(s, &next);
            }
        }
    }
    Err(Error::Nonconvergent(format!("no fixed point after {} corridor changes", MAX_SWITCHES)))
}

pub fn length(s: &Surface, c: &CurveClass) -> Result<f64> {
    Ok(tighten(s, c)?.length)
}

/// Lengths of several curves; errors carry the curve index.
pub fn spectrum(s: &Surface, curves: &[CurveClass]) -> Result<Vec<f64>> {
    curves
        .iter()
        .enumerate()
        .map(|(i, c)| {
            length(s, c).map_err(|e| match e {
                Error::InessentialCurve => Error::InvalidCurve(format!("curve {} is inessential", i)),
                Error::Nonconvergent(m) => Error::Nonconvergent(format!("curve {}: {}", i, m)),
                other => other,
            })
        })
        .collect()
}

fn surface_scale(s: &Surface) -> f64 {
    s.edges().iter().map(|&e| s.vec(e).norm()).fold(0.0, f64::max)
}

fn has_point(st: &Strip, k: usize, side: Side, p: usize) -> bool {
    match side {
        Side::Left => st.portals[k].0 == p,
        Side::Right => st.portals[k].1 == p,
    }
}

fn make_pin(st: &Strip, k: usize, side: Side, point: usize) -> Pin {
    let (mut k1, mut k2) = (k, k);
    while k1 > 0 && has_point(st, k1 - 1, side, point) {
        k1 -= 1;
    }
    while k2 + 1 < st.portals.len() && has_point(st, k2 + 1, side, point) {
        k2 += 1;
    }
    Pin { k1, k2, side, point }
}

fn analyze(s: &Surface, h: &[Slot]) -> Result<Analysis> {
    let n = h.len();
    let tol = TOUCH_TOL * surface_scale(s);
    for &m in PERIODS.iter() {
        let seq: Vec<Slot> = h.iter().cycle().take(m * n + 1).copied().collect();
        let st = Strip::develop(s, &seq);
        let (l0, r0) = st.portals[0];
        let shared = |p: usize, side: Side| (0..st.portals.len()).all(|k| has_point(&st, k, side, p));
        if shared(l0, Side::Left) || shared(r0, Side::Right) {
            return Err(Error::InessentialCurve);
        }
        let mid = |k: usize| (st.pos(st.portals[k].0) + st.pos(st.portals[k].1)) * 0.5;
        let start = mid(0);
        let goal = mid(m * n);
        let portals: Vec<(PortalPt, PortalPt)> = (1..m * n)
            .map(|k| {
                let (l, r) = st.portals[k];
                (PortalPt { pos: st.pos(l), id: l }, PortalPt { pos: st.pos(r), id: r })
            })
            .collect();
        let bends = funnel(start, &portals, goal);
        let mut pins: Vec<Pin> = bends.iter().map(|b| make_pin(&st, b.portal + 1, b.side, b.id)).collect();
        add_touches(&st, &mut pins, start, goal, m * n, tol);
        let path_pos = |i: isize, pins: &[Pin]| -> C64 {
            if i < 0 {
                start
            } else if i as usize >= pins.len() {
                goal
            } else {
                st.pos(pins[i as usize].point)
            }
        };
        match find_period(&pins, n, m) {
            PeriodResult::Retry => continue,
            PeriodResult::NoPins => {
                if let Some(g) = cylinder(&st, h, n, None) {
                    return Ok(Analysis::Done(g));
                }
                continue;
            }
            PeriodResult::Found(a, c) => {
                let infos: Vec<PinInfo> = (a..=a + c)
                    .map(|i| {
                        pin_info(s, &st, pins[i], path_pos(i as isize - 1, &pins), path_pos(i as isize + 1, &pins))
                    })
                    .collect();
                let period = &infos[..c];
                let switch = period
                    .iter()
                    .filter(|p| !s.vertex(p.vertex).marked && p.other < PI - ANGLE_TOL)
                    .min_by(|x, y| x.other.partial_cmp(&y.other).unwrap());
                if let Some(p) = switch {
                    let keep = match p.pin.side {
                        Side::Left => Keep::Right,
                        Side::Right => Keep::Left,
                    };
                    let replacement = sweep(s, p.arr.0, p.arr.1, p.dep.0, p.dep.1, keep);
                    return Ok(Analysis::Switch { start: p.pin.k1 % n, len: p.pin.k2 - p.pin.k1 + 1, replacement });
                }
                let straight = period.iter().all(|p| (p.fan - PI).abs() < ANGLE_TOL);
                let one_side = period.iter().all(|p| p.pin.side == period[0].pin.side);
                if straight && one_side {
                    if let Some(g) = cylinder(&st, h, n, Some(pins[a].k1 - pins[a].k1 % n)) {
                        return Ok(Analysis::Done(g));
                    }
                }
                return Ok(Analysis::Done(pinned(s, &st, h, &infos)));
            }
        }
    }
    Err(Error::Nonconvergent("taut path did not become periodic".into()))
}

/// Adds vertices that the straight parts of the path pass through.
fn add_touches(st: &Strip, pins: &mut Vec<Pin>, start: C64, goal: C64, end: usize, tol: f64) {
    let mut extra = Vec::new();
    let mut prev_pos = start;
    let mut prev_k = 0usize;
    let mut seen: std::collections::HashSet<usize> = pins.iter().map(|p| p.point).collect();
    for i in 0..=pins.len() {
        let (next_pos, next_k) = if i < pins.len() { (st.pos(pins[i].point), pins[i].k1) } else { (goal, end) };
        let d = next_pos - prev_pos;
        let dn = d.norm();
        if dn > 0.0 {
            for k in prev_k + 1..next_k {
                let (l, r) = st.portals[k];
                for (p, side) in [(l, Side::Left), (r, Side::Right)] {
                    if seen.contains(&p) {
                        continue;
                    }
                    if (cross(d, st.pos(p) - prev_pos) / dn).abs() < tol {
                        seen.insert(p);
                        extra.push(make_pin(st, k, side, p));
                    }
                }
            }
        }
        if i < pins.len() {
            prev_pos = next_pos;
            prev_k = pins[i].k2;
        }
    }
    pins.extend(extra);
    pins.sort_by_key(|p| (p.k1, p.k2));
}

enum PeriodResult {
    NoPins,
    Retry,
    Found(usize, usize),
}

fn find_period(pins: &[Pin], n: usize, m: usize) -> PeriodResult {
    let hi = (m - 1) * n;
    let Some(a) = pins.iter().position(|p| p.k1 >= n) else {
        return PeriodResult::NoPins;
    };
    if pins[a].k1 >= hi {
        return PeriodResult::NoPins;
    }
    if pins[a].k1 >= 2 * n {
        return PeriodResult::Retry;
    }
    let target = pins[a].k1 + n;
    let Some(off) = pins[a..].iter().position(|p| p.k1 == target) else {
        return PeriodResult::Retry;
    };
    let b = a + off;
    let c = b - a;
    if c == 0 || b + c > pins.len() {
        return PeriodResult::Retry;
    }
    for j in 0..c {
        let (x, y) = (pins[a + j], pins[b + j]);
        if y.k1 != x.k1 + n || y.k2 != x.k2 + n || y.side != x.side || y.k2 + 1 >= m * n {
            return PeriodResult::Retry;
        }
    }
    PeriodResult::Found(a, c)
}

fn clamp_within(a: f64, corner: f64) -> f64 {
    if a <= corner {
        a
    } else if a > corner + (TAU - corner) / 2.0 {
        0.0
    } else {
        corner
    }
}

fn pin_info(s: &Surface, st: &Strip, pin: Pin, prev: C64, next: C64) -> PinInfo {
    let v = st.pos(pin.point);
    let arr_c = st.corner_at(pin.k1, pin.point);
    let dep_c = st.corner_at(pin.k2 + 1, pin.point);
    let ca = s.corner_angle(arr_c);
    let cd = s.corner_angle(dep_c);
    let arr_w = clamp_within(ccw_angle(st.start_dir(pin.k1, arr_c.corner), prev - v), ca);
    let dep_w = clamp_within(ccw_angle(st.start_dir(pin.k2 + 1, dep_c.corner), next - v), cd);
    let middle: f64 = (pin.k1 + 1..=pin.k2).map(|k| s.corner_angle(st.corner_at(k, pin.point))).sum();
    let fan = match pin.side {
        Side::Left => (ca - arr_w) + middle + dep_w,
        Side::Right => arr_w + middle + (cd - dep_w),
    };
    let vertex = s.vertex_of(arr_c);
    PinInfo { pin, vertex, arr: (arr_c, arr_w), dep: (dep_c, dep_w), fan, other: s.vertex(vertex).cone_angle() - fan }
}

fn corridor_points(st: &Strip, from: usize, to: usize, base: usize) -> Vec<(C64, Vec<i64>, i8)> {
    let mut out = Vec::new();
    let mut seen = std::collections::HashSet::new();
    for k in from..to {
        let (l, r) = st.portals[k];
        for (p, side) in [(l, 1i8), (r, -1i8)] {
            if seen.insert(p) {
                out.push((st.pos(p) - st.pos(base), sym_sub(&st.points[p].sym, &st.points[base].sym), side));
            }
        }
    }
    out
}

fn cylinder(st: &Strip, h: &[Slot], n: usize, first: Option<usize>) -> Option<Geodesic> {
    let k0 = first.unwrap_or(n);
    if k0 + n >= st.portals.len() || st.tris[k0].frame != st.tris[k0 + n].frame {
        return None;
    }
    let base = st.portals[k0].0;
    let copy = st.portals[k0 + n].0;
    let z = st.pos(copy) - st.pos(base);
    if z.norm() == 0.0 {
        return None;
    }
    let dir = z / z.norm();
    let corridor = corridor_points(st, k0, k0 + n, base);
    let lo = corridor.iter().filter(|c| c.2 > 0).map(|c| cross(dir, c.0)).fold(f64::INFINITY, f64::min);
    let hi = corridor.iter().filter(|c| c.2 < 0).map(|c| cross(dir, c.0)).fold(f64::NEG_INFINITY, f64::max);
    let width = lo - hi;
    if width < -TOUCH_TOL * z.norm() {
        return None;
    }
    let piece = Piece {
        z,
        coeffs: sym_sub(&st.points[copy].sym, &st.points[base].sym),
        start: None,
        end: None,
        start_dir: 0.0,
        end_dir: 0.0,
        crossings: h.to_vec(),
        corridor,
    };
    Some(Geodesic {
        kind: GeodesicKind::Cylinder { width: width.max(0.0) },
        length: z.norm(),
        pieces: vec![piece],
        junctions: Vec::new(),
        corridor: canonical_rotation(h),
        holonomy: 1,
    })
}

fn pinned(s: &Surface, st: &Strip, h: &[Slot], infos: &[PinInfo]) -> Geodesic {
    let c = infos.len() - 1;
    let mut pieces = Vec::with_capacity(c);
    let mut junctions = Vec::with_capacity(c);
    for j in 0..c {
        let (a, b) = (&infos[j], &infos[j + 1]);
        let (pa, pb) = (a.pin.point, b.pin.point);
        // Consecutive pins on one portal: the piece runs along that edge.
        let (k_from, k_to) = (a.pin.k2 + 1, b.pin.k1.max(a.pin.k2 + 1));
        pieces.push(Piece {
            z: st.pos(pb) - st.pos(pa),
            coeffs: sym_sub(&st.points[pb].sym, &st.points[pa].sym),
            start: Some(a.dep),
            end: Some(b.arr),
            start_dir: s.direction(a.dep.0, a.dep.1),
            end_dir: s.direction(b.arr.0, b.arr.1),
            crossings: st.crossings[k_from..k_to].to_vec(),
            corridor: corridor_points(st, k_from, k_to, pa),
        });
        let v = s.vertex(b.vertex);
        let (left, right, point_side) = match b.pin.side {
            Side::Left => (v.cone_angle() - b.fan, b.fan, Keep::Left),
            Side::Right => (b.fan, v.cone_angle() - b.fan, Keep::Right),
        };
        junctions.push(Junction {
            vertex: b.vertex,
            marked: v.marked,
            cone_angle: v.cone_angle(),
            left,
            right,
            point_side,
            uturn: b.other.abs() < ANGLE_TOL,
        });
    }
    let length = pieces.iter().map(|p| p.length()).sum();
    let holonomy = h.iter().map(|&x| s.sign(x)).product();
    Geodesic { kind: GeodesicKind::Pinned, pieces, junctions, length, corridor: canonical_rotation(h), holonomy }
}
