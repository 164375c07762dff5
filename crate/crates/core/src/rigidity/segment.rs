//! Geodesic segments between cone points with prescribed end directions,
//! found by a shortest-path search over saddle connections.

use crate::error::{Error, Result};
use crate::geodesics::saddle::{enumerate_directed, DEFAULT_BUDGET};
use crate::geodesics::{Keep, SaddleConnection};
use crate::surface::Surface;
use serde::Serialize;
use std::cmp::Ordering;
use std::collections::BinaryHeap;
use std::f64::consts::PI;

/// Junctions must beat π by this much to count as strict.
pub const STRICT: f64 = 1e-9;

/// Smaller angle between two directions at a cone point of angle `cone`.
pub fn angle_between(a: f64, b: f64, cone: f64) -> f64 {
    let d = (a - b).rem_euclid(cone);
    d.min(cone - d)
}

/// Angles (left, right) at a junction arriving along `x` and leaving along `y`.
pub fn junction_angles(s: &Surface, x: &SaddleConnection, y: &SaddleConnection) -> (f64, f64) {
    let cone = s.vertex(x.end).cone_angle();
    let left = (x.end_dir - y.start_dir).rem_euclid(cone);
    (left, cone - left)
}

/// Side on which to keep the cone point at a junction: the one leaving the
/// larger angle on the far side.
pub fn keep_for(left: f64, right: f64) -> Keep {
    if right >= left {
        Keep::Left
    } else {
        Keep::Right
    }
}

fn junction_ok(s: &Surface, x: &SaddleConnection, y: &SaddleConnection) -> bool {
    let (l, r) = junction_angles(s, x, y);
    if s.vertex(x.end).marked {
        l.max(r) > PI + STRICT
    } else {
        l.min(r) > PI + STRICT
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct Segment {
    pub parts: Vec<SaddleConnection>,
    pub length: f64,
    /// ∠_a(u, γ) and ∠_b(v, γ̄)
    pub start_error: f64,
    pub end_error: f64,
}

impl Segment {
    pub fn start(&self) -> &SaddleConnection {
        &self.parts[0]
    }
    pub fn last(&self) -> &SaddleConnection {
        self.parts.last().unwrap()
    }
    pub fn reversed(&self, s: &Surface) -> Segment {
        Segment {
            parts: self.parts.iter().rev().map(|p| p.reversed(s)).collect(),
            length: self.length,
            start_error: self.end_error,
            end_error: self.start_error,
        }
    }
}

/// Saddle connections up to a length, shared by many searches.
pub struct SegmentIndex {
    pub max_len: f64,
    pub all: Vec<SaddleConnection>,
    by_start: Vec<Vec<usize>>,
}

impl SegmentIndex {
    pub fn new(s: &Surface, max_len: f64) -> Result<SegmentIndex> {
        let all = enumerate_directed(s, max_len, DEFAULT_BUDGET)?;
        let mut by_start = vec![Vec::new(); s.vertices().len()];
        for (i, c) in all.iter().enumerate() {
            by_start[c.start].push(i);
        }
        Ok(SegmentIndex { max_len, all, by_start })
    }
}

#[derive(PartialEq)]
struct Item(f64, usize);

impl Eq for Item {}
impl PartialOrd for Item {
    fn partial_cmp(&self, o: &Self) -> Option<Ordering> {
        Some(self.cmp(o))
    }
}
impl Ord for Item {
    fn cmp(&self, o: &Self) -> Ordering {
        o.0.partial_cmp(&self.0).unwrap_or(Ordering::Equal).then(o.1.cmp(&self.1))
    }
}

/// Shortest concatenation of saddle connections from `a` to `b` with strict
/// angle conditions at interior junctions, leaving `a` within `tol` of
/// direction `u` and leaving `b` backwards within `tol` of `v`.
pub fn search(s: &Surface, idx: &SegmentIndex, a: usize, u: f64, b: usize, v: f64, tol: f64) -> Option<Segment> {
    let ca = s.vertex(a).cone_angle();
    let cb = s.vertex(b).cone_angle();
    let n = idx.all.len();
    let mut dist = vec![f64::INFINITY; n];
    let mut prev = vec![usize::MAX; n];
    let mut heap = BinaryHeap::new();
    for &i in &idx.by_start[a] {
        let c = &idx.all[i];
        if angle_between(c.start_dir, u, ca) < tol {
            dist[i] = c.length();
            heap.push(Item(dist[i], i));
        }
    }
    while let Some(Item(d, i)) = heap.pop() {
        if d > dist[i] {
            continue;
        }
        let c = &idx.all[i];
        if c.end == b && angle_between(c.end_dir, v, cb) < tol {
            let mut parts = vec![i];
            while prev[*parts.last().unwrap()] != usize::MAX {
                parts.push(prev[*parts.last().unwrap()]);
            }
            parts.reverse();
            let parts: Vec<SaddleConnection> = parts.into_iter().map(|k| idx.all[k].clone()).collect();
            let start_error = angle_between(parts[0].start_dir, u, ca);
            return Some(Segment { length: d, start_error, end_error: angle_between(c.end_dir, v, cb), parts });
        }
        for &j in &idx.by_start[c.end] {
            let y = &idx.all[j];
            let nd = d + y.length();
            if nd <= idx.max_len && nd < dist[j] && junction_ok(s, c, y) {
                dist[j] = nd;
                prev[j] = i;
                heap.push(Item(nd, j));
            }
        }
    }
    None
}

/// Finds a segment with end angles below `eps`, doubling the length budget
/// from `l0` up to `doublings` times.
#[allow(clippy::too_many_arguments)]
pub fn direction_segment(
    s: &Surface,
    a: usize,
    u: f64,
    b: usize,
    v: f64,
    eps: f64,
    l0: f64,
    doublings: u32,
) -> Result<Segment> {
    if eps <= 0.0 {
        return Err(Error::InvalidArgument("ε must be positive".into()));
    }
    let mut l = l0;
    for _ in 0..=doublings {
        let idx = SegmentIndex::new(s, l)?;
        if let Some(seg) = search(s, &idx, a, u, b, v, eps) {
            return Ok(seg);
        }
        l *= 2.0;
    }
    Err(Error::NotFoundWithinBudget(l / 2.0))
}
