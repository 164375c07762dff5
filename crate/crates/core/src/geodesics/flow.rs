//! Straight trajectories followed exactly through the triangles.

use super::curve::{canonical_rotation, CurveClass};
use crate::error::Result;
use crate::numeric::{q, QVec, Q};
use crate::surface::{Slot, Surface};
use num_traits::{One, Signed, Zero};

/// Corner positions of triangle `t` in its own frame, corner 0 at the origin.
fn corners(s: &Surface, t: usize) -> [QVec; 3] {
    let v0 = s.qvec(Slot::new(t, 0)).clone();
    let v01 = v0.add(s.qvec(Slot::new(t, 1)));
    [QVec::zero(), v0, v01]
}

/// Closed straight trajectory through the point with barycentric weights
/// `bary` in triangle `t`, in direction `d` of that triangle's frame.
/// Returns `None` when the trajectory hits a cone point or does not close
/// within `max_steps` crossings.
pub fn straight_curve(s: &Surface, t: usize, bary: [Q; 3], d: &QVec, max_steps: usize) -> Result<Option<CurveClass>> {
    let c = corners(s, t);
    let mut p = c[0].scale(&bary[0]).add(&c[1].scale(&bary[1])).add(&c[2].scale(&bary[2]));
    let mut d = d.clone();
    let mut tri = t;
    let mut entered: Option<usize> = None;
    let mut start: Option<(Slot, Q)> = None;
    let mut out = Vec::new();
    for _ in 0..max_steps {
        let c = corners(s, tri);
        let mut exit = None;
        for i in 0..3 {
            if Some(i) == entered {
                continue;
            }
            let v = s.qvec(Slot::new(tri, i));
            let den = d.cross(v);
            if den.is_zero() {
                continue;
            }
            let sp = c[i].sub(&p).cross(v) / &den;
            if !sp.is_positive() {
                continue;
            }
            let u = p.sub(&c[i]).cross(&d) / v.cross(&d);
            if u.is_negative() || u > Q::one() {
                continue;
            }
            exit = Some((i, u));
            break;
        }
        let Some((i, u)) = exit else { return Ok(None) };
        if u.is_zero() || u.is_one() {
            return Ok(None);
        }
        let h = Slot::new(tri, i);
        if let Some((h0, u0)) = &start {
            if *h0 == h && *u0 == u {
                return Ok(Some(CurveClass::new(s, out)?));
            }
        } else {
            start = Some((h, u.clone()));
        }
        out.push(h);
        let ph = s.partner(h);
        let sg = s.sign(h) as i64;
        let c2 = corners(s, ph.tri);
        let w = Q::one() - &u;
        p = c2[ph.side].add(&s.qvec(ph).scale(&w));
        d = d.scale_i(sg);
        tri = ph.tri;
        entered = Some(ph.side);
    }
    Ok(None)
}

/// Closed trajectories in direction `d` (given in every triangle's own
/// frame, so only meaningful up to sign) started from a fixed interior point
/// of each triangle, one per crossing sequence up to rotation.
pub fn parallel_curves(s: &Surface, d: &QVec, max_steps: usize) -> Result<Vec<CurveClass>> {
    let weights = [[q(1) / q(2), q(3) / q(10), q(1) / q(5)], [q(1) / q(7), q(2) / q(7), q(4) / q(7)]];
    let mut seen: Vec<Vec<Slot>> = Vec::new();
    let mut out = Vec::new();
    for t in 0..s.n_tris() {
        for b in &weights {
            if let Some(c) = straight_curve(s, t, b.clone(), d, max_steps)? {
                let fwd = canonical_rotation(&c.crossings);
                let back = canonical_rotation(&c.reversed(s).crossings);
                if !seen.contains(&fwd) && !seen.contains(&back) {
                    seen.push(fwd);
                    out.push(c);
                }
            }
        }
    }
    Ok(out)
}
