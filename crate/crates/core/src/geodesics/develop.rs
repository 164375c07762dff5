//! Developing a chain of triangles into the plane.

use crate::numeric::{QVec, C64};
use crate::surface::{Corner, Slot, Surface};

/// A developed vertex: float position plus its exact expansion in edge
/// variables (coefficients over `Surface::edges`).
#[derive(Clone, Debug)]
pub struct DevPoint {
    pub pos: C64,
    pub sym: Vec<i64>,
    pub vertex: usize,
}

impl DevPoint {
    pub fn exact(&self, s: &Surface) -> QVec {
        sym_exact(s, &self.sym)
    }
}

pub fn sym_exact(s: &Surface, sym: &[i64]) -> QVec {
    let mut acc = QVec::zero();
    for (e, &k) in sym.iter().enumerate() {
        if k != 0 {
            acc = acc.add(&s.qvec(s.edges()[e]).scale_i(k));
        }
    }
    acc
}

pub fn sym_sub(a: &[i64], b: &[i64]) -> Vec<i64> {
    a.iter().zip(b).map(|(x, y)| x - y).collect()
}

#[derive(Clone, Copy, Debug)]
pub struct DevTri {
    pub tri: usize,
    pub frame: i8,
    /// Point index of each corner.
    pub pts: [usize; 3],
}

/// A developed corridor: triangle k is entered through portal k-1 and left
/// through portal k.
#[derive(Clone, Debug)]
pub struct Strip {
    pub points: Vec<DevPoint>,
    pub tris: Vec<DevTri>,
    /// (left point, right point) of each crossing.
    pub portals: Vec<(usize, usize)>,
    pub crossings: Vec<Slot>,
}

fn add_vec(s: &Surface, from: &DevPoint, slot: Slot, frame: i8, vertex: usize) -> DevPoint {
    let mut sym = from.sym.clone();
    sym[s.edge_of(slot)] += frame as i64 * s.slot_edge_sign(slot);
    DevPoint { pos: from.pos + s.vec(slot) * frame as f64, sym, vertex }
}

impl Strip {
    /// Develops the first triangle of `crossings` with corner 0 at the origin
    /// and frame +1, then follows every crossing.
    pub fn develop(s: &Surface, crossings: &[Slot]) -> Strip {
        let e = s.edges().len();
        let t0 = crossings[0].tri;
        let p0 = DevPoint { pos: C64::new(0.0, 0.0), sym: vec![0; e], vertex: s.vertex_of(Corner::new(t0, 0)) };
        let p1 = add_vec(s, &p0, Slot::new(t0, 0), 1, s.vertex_of(Corner::new(t0, 1)));
        let p2 = add_vec(s, &p1, Slot::new(t0, 1), 1, s.vertex_of(Corner::new(t0, 2)));
        let mut st = Strip {
            points: vec![p0, p1, p2],
            tris: vec![DevTri { tri: t0, frame: 1, pts: [0, 1, 2] }],
            portals: Vec::with_capacity(crossings.len()),
            crossings: crossings.to_vec(),
        };
        for &h in crossings {
            st.push_crossing(s, h);
        }
        st
    }

    fn push_crossing(&mut self, s: &Surface, h: Slot) {
        let cur = *self.tris.last().unwrap();
        debug_assert_eq!(cur.tri, h.tri);
        let i = h.side;
        let left = cur.pts[(i + 1) % 3];
        let right = cur.pts[i];
        self.portals.push((left, right));
        let p = s.partner(h);
        let frame = cur.frame * s.sign(h);
        let j = p.side;
        let mut pts = [0usize; 3];
        pts[j] = left;
        pts[(j + 1) % 3] = right;
        let q = add_vec(
            s,
            &self.points[right],
            Slot::new(p.tri, (j + 1) % 3),
            frame,
            s.vertex_of(Corner::new(p.tri, (j + 2) % 3)),
        );
        self.points.push(q);
        pts[(j + 2) % 3] = self.points.len() - 1;
        self.tris.push(DevTri { tri: p.tri, frame, pts });
    }

    pub fn pos(&self, i: usize) -> C64 {
        self.points[i].pos
    }

    /// Corner of developed triangle `k` sitting at point `p`.
    pub fn corner_at(&self, k: usize, p: usize) -> Corner {
        let t = &self.tris[k];
        let c = t.pts.iter().position(|&x| x == p).expect("point not in triangle");
        Corner::new(t.tri, c)
    }

    /// Developed direction of the start side of a corner of triangle `k`.
    pub fn start_dir(&self, k: usize, c: usize) -> C64 {
        let t = &self.tris[k];
        self.pos(t.pts[(c + 1) % 3]) - self.pos(t.pts[c])
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::corpus::square_torus;

    #[test]
    fn horizontal_strip_translates_by_one() {
        let s = square_torus();
        let h = [Slot::new(3, 1), Slot::new(0, 1), Slot::new(1, 0)];
        let seq: Vec<Slot> = h.iter().cycle().take(6).copied().collect();
        let st = Strip::develop(&s, &seq);
        let (l0, _) = st.portals[0];
        let (l3, _) = st.portals[3];
        let d = st.pos(l3) - st.pos(l0);
        assert!((d - C64::new(1.0, 0.0)).norm() < 1e-15);
        let ex = sym_exact(&s, &sym_sub(&st.points[l3].sym, &st.points[l0].sym));
        assert_eq!(ex.to_c64(), C64::new(1.0, 0.0));
    }
}
