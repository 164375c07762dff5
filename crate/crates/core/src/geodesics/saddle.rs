//! Saddle connections by unfolding the triangles seen from each corner.

use super::curve::CurveClass;
use super::develop::{sym_exact, DevPoint};
use crate::error::{Error, Result};
use crate::numeric::{ccw_angle, cross, QVec, C64};
use crate::surface::{Corner, Slot, Surface};
use num_traits::Signed;
use serde::Serialize;

/// Default cap on the number of triangles unfolded per search.
pub const DEFAULT_BUDGET: usize = 2_000_000;

#[derive(Clone, Debug, Serialize)]
pub struct SaddleConnection {
    pub start: usize,
    pub end: usize,
    pub start_corner: Corner,
    /// Angle from the start side of `start_corner`.
    pub start_within: f64,
    pub end_corner: Corner,
    pub end_within: f64,
    /// Exit slots of the triangles crossed, starting in `start_corner.tri`.
    pub crossings: Vec<Slot>,
    /// Displacement in the frame of the start triangle.
    pub period: C64,
    #[serde(skip)]
    pub exact_period: QVec,
    /// Developing frame of the end triangle relative to the start triangle.
    pub end_frame: i8,
    pub start_dir: f64,
    pub end_dir: f64,
    /// Period as an integer combination of `Surface::edges`.
    pub coeffs: Vec<i64>,
}

impl SaddleConnection {
    pub fn length(&self) -> f64 {
        self.period.norm()
    }

    pub fn reversed(&self, s: &Surface) -> SaddleConnection {
        let f = self.end_frame;
        SaddleConnection {
            start: self.end,
            end: self.start,
            start_corner: self.end_corner,
            start_within: self.end_within,
            end_corner: self.start_corner,
            end_within: self.start_within,
            crossings: self.crossings.iter().rev().map(|&h| s.partner(h)).collect(),
            period: -self.period * f as f64,
            exact_period: self.exact_period.scale_i(-(f as i64)),
            end_frame: f,
            start_dir: self.end_dir,
            end_dir: self.start_dir,
            coeffs: self.coeffs.iter().map(|&k| -k * f as i64).collect(),
        }
    }

    /// Key identifying the connection up to orientation.
    fn unoriented_key(&self, s: &Surface) -> Option<Vec<Slot>> {
        if self.crossings.is_empty() {
            return None;
        }
        let rev: Vec<Slot> = self.crossings.iter().rev().map(|&h| s.partner(h)).collect();
        Some(self.crossings.clone().min(rev))
    }

    fn is_canonical(&self, s: &Surface) -> bool {
        match self.unoriented_key(s) {
            None => {
                let side = self.start_corner.start_side();
                s.edges()[s.edge_of(side)] == side
            }
            Some(k) => k == self.crossings,
        }
    }

    pub fn csv_row(&self) -> String {
        format!("{},{},{},{},{}", self.start, self.end, self.period.re, self.period.im, self.length())
    }
}

pub const CSV_HEADER: &str = "start,end,re,im,length";

#[derive(Clone)]
struct State {
    pts: [DevPoint; 3],
    tri: usize,
    frame: i8,
    exit: usize,
    right: DevPoint,
    left: DevPoint,
    crossings: Vec<Slot>,
}

/// Sign of cross(a, b) for developed points, exact when close to zero.
fn orient(s: &Surface, a: &DevPoint, b: &DevPoint) -> i32 {
    let c = cross(a.pos, b.pos);
    if c.abs() > 1e-9 * a.pos.norm() * b.pos.norm() {
        return if c > 0.0 { 1 } else { -1 };
    }
    let x = sym_exact(s, &a.sym).cross(&sym_exact(s, &b.sym));
    if x.is_positive() {
        1
    } else if x.is_negative() {
        -1
    } else {
        0
    }
}

/// Distance from the origin to the part of segment `a b` inside the wedge
/// between the rays through `r` and `l`.
fn wedge_distance(a: C64, b: C64, r: C64, l: C64) -> f64 {
    let (mut t0, mut t1) = (0.0f64, 1.0f64);
    let d = b - a;
    // Inside the wedge: cross(r, x) >= 0 and cross(x, l) >= 0, with x = a + t d.
    for (c0, c1) in [(cross(r, a), cross(r, d)), (cross(a, l), cross(d, l))] {
        if c1 == 0.0 {
            if c0 < 0.0 {
                return f64::INFINITY;
            }
            continue;
        }
        let t = -c0 / c1;
        if c1 > 0.0 {
            t0 = t0.max(t);
        } else {
            t1 = t1.min(t);
        }
    }
    if t0 > t1 {
        // Clipping failed numerically; fall back to the whole segment.
        (t0, t1) = (0.0, 1.0);
    }
    let (p, q) = (a + d * t0, a + d * t1);
    let dq = q - p;
    let len2 = dq.norm_sqr();
    let t = if len2 > 0.0 { (-(p.re * dq.re + p.im * dq.im) / len2).clamp(0.0, 1.0) } else { 0.0 };
    (p + dq * t).norm()
}

fn add_edge(s: &Surface, from: &DevPoint, slot: Slot, frame: i8, vertex: usize) -> DevPoint {
    let mut sym = from.sym.clone();
    sym[s.edge_of(slot)] += frame as i64 * s.slot_edge_sign(slot);
    DevPoint { pos: from.pos + s.vec(slot) * frame as f64, sym, vertex }
}

/// All directed saddle connections of length at most `max_len` leaving the
/// cone point at `corner` inside that corner, including its start side.
/// `budget` counts unfolded triangles and is shared across calls.
pub fn from_corner(s: &Surface, corner: Corner, max_len: f64, budget: &mut usize) -> Result<Vec<SaddleConnection>> {
    let (t, c) = (corner.tri, corner.corner);
    let e = s.edges().len();
    let mut out = Vec::new();
    let p0 = DevPoint { pos: C64::new(0.0, 0.0), sym: vec![0; e], vertex: s.vertex_of(corner) };
    let p1 = add_edge(s, &p0, Slot::new(t, c), 1, s.vertex_of(Corner::new(t, (c + 1) % 3)));
    let p2 = add_edge(s, &p1, Slot::new(t, (c + 1) % 3), 1, s.vertex_of(Corner::new(t, (c + 2) % 3)));
    let start_side = p1.pos;
    let record = |q: &DevPoint, end_corner: Corner, end_within: f64, crossings: Vec<Slot>, frame: i8| {
        let start_within = ccw_angle(start_side, q.pos).min(s.corner_angle(corner));
        let start_within = if start_within > std::f64::consts::PI * 1.5 { 0.0 } else { start_within };
        SaddleConnection {
            start: p0.vertex,
            end: q.vertex,
            start_corner: corner,
            start_within,
            end_corner,
            end_within,
            crossings,
            period: q.pos,
            exact_period: sym_exact(s, &q.sym),
            end_frame: frame,
            start_dir: s.direction(corner, start_within),
            end_dir: s.direction(end_corner, end_within),
            coeffs: q.sym.clone(),
        }
    };
    if p1.pos.norm() <= max_len {
        let ec = Corner::new(t, (c + 1) % 3);
        out.push(record(&p1, ec, s.corner_angle(ec), Vec::new(), 1));
    }
    let mut pts = [p0.clone(), p0.clone(), p0.clone()];
    pts[(c + 1) % 3] = p1.clone();
    pts[(c + 2) % 3] = p2.clone();
    let mut stack =
        vec![State { pts, tri: t, frame: 1, exit: (c + 1) % 3, right: p1, left: p2, crossings: Vec::new() }];
    while let Some(st) = stack.pop() {
        let i = st.exit;
        let left = &st.pts[(i + 1) % 3];
        let right = &st.pts[i];
        if wedge_distance(right.pos, left.pos, st.right.pos, st.left.pos) > max_len {
            continue;
        }
        if *budget == 0 {
            return Err(Error::BudgetExceeded(DEFAULT_BUDGET));
        }
        *budget -= 1;
        let h = Slot::new(st.tri, i);
        let p = s.partner(h);
        let frame = st.frame * s.sign(h);
        let j = p.side;
        let qv = s.vertex_of(Corner::new(p.tri, (j + 2) % 3));
        let q = add_edge(s, right, Slot::new(p.tri, (j + 1) % 3), frame, qv);
        let mut pts = [left.clone(), right.clone(), q.clone()];
        pts[j] = left.clone();
        pts[(j + 1) % 3] = right.clone();
        pts[(j + 2) % 3] = q.clone();
        let mut crossings = st.crossings.clone();
        crossings.push(h);
        let in_r = orient(s, &st.right, &q) > 0;
        let in_l = orient(s, &q, &st.left) > 0;
        if in_r && in_l && q.pos.norm() <= max_len {
            let ec = Corner::new(p.tri, (j + 2) % 3);
            let w = ccw_angle(left.pos - q.pos, -q.pos);
            let ca = s.corner_angle(ec);
            let w = if w > ca {
                if w > ca + (std::f64::consts::TAU - ca) / 2.0 {
                    0.0
                } else {
                    ca
                }
            } else {
                w
            };
            out.push(record(&q, ec, w, crossings.clone(), frame));
        }
        let mk = |exit: usize, r: &DevPoint, l: &DevPoint| State {
            pts: pts.clone(),
            tri: p.tri,
            frame,
            exit,
            right: r.clone(),
            left: l.clone(),
            crossings: crossings.clone(),
        };
        if in_r && in_l {
            stack.push(mk((j + 1) % 3, &st.right, &q));
            stack.push(mk((j + 2) % 3, &q, &st.left));
        } else if in_l {
            stack.push(mk((j + 2) % 3, &st.right, &st.left));
        } else if in_r {
            stack.push(mk((j + 1) % 3, &st.right, &st.left));
        }
    }
    Ok(out)
}

fn sort_key(a: &SaddleConnection) -> (u64, usize, usize, Vec<Slot>) {
    (a.length().to_bits(), a.start, a.end, a.crossings.clone())
}

/// Every directed saddle connection of length at most `max_len`.
pub fn enumerate_directed(s: &Surface, max_len: f64, budget: usize) -> Result<Vec<SaddleConnection>> {
    let mut left = budget;
    let mut out = Vec::new();
    for t in 0..s.n_tris() {
        for c in 0..3 {
            let mut v =
                from_corner(s, Corner::new(t, c), max_len, &mut left).map_err(|_| Error::BudgetExceeded(budget))?;
            out.append(&mut v);
        }
    }
    out.sort_by_key(sort_key);
    Ok(out)
}

/// Saddle connections of length at most `max_len`, one per unoriented class.
pub fn enumerate_saddle_connections(s: &Surface, max_len: f64, budget: usize) -> Result<Vec<SaddleConnection>> {
    let mut v = enumerate_directed(s, max_len, budget)?;
    v.retain(|sc| sc.is_canonical(s));
    Ok(v)
}

/// Directed segments from cone point `a` to cone point `b`.
pub fn enumerate_segments(
    s: &Surface,
    a: usize,
    b: usize,
    max_len: f64,
    budget: usize,
) -> Result<Vec<SaddleConnection>> {
    let mut left = budget;
    let mut out = Vec::new();
    for &c in &s.vertex(a).corners {
        let mut v = from_corner(s, c, max_len, &mut left).map_err(|_| Error::BudgetExceeded(budget))?;
        v.retain(|sc| sc.end == b);
        out.append(&mut v);
    }
    out.sort_by_key(sort_key);
    Ok(out)
}

/// Closed curve following the given directed connections, turning at each
/// junction on the side `keeps[j]` (the side on which the cone point at the
/// end of segment `j` is left).
pub fn path_curve(s: &Surface, segs: &[SaddleConnection], keeps: &[super::curve::Keep]) -> Result<CurveClass> {
    CurveClass::from_path(s, segs, keeps)
}
