//! Closed curves as cyclic sequences of edge crossings.

use super::saddle::SaddleConnection;
use crate::error::{Error, Result};
use crate::format::EdgeRef;
use crate::surface::{Corner, Slot, Surface};

/// Cyclic list of exit half-edges: crossing k leaves triangle
/// `crossings[k].tri` through side `crossings[k].side`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct CurveClass {
    pub crossings: Vec<Slot>,
}

/// Side on which a curve keeps a cone point it passes.
#[derive(Clone, Copy, Debug, PartialEq, Eq, serde::Serialize)]
pub enum Keep {
    /// Point on the left of the curve; the curve sweeps counterclockwise.
    Left,
    /// Point on the right; the curve sweeps clockwise.
    Right,
}

impl CurveClass {
    pub fn new(s: &Surface, crossings: Vec<Slot>) -> Result<CurveClass> {
        if crossings.is_empty() {
            return Err(Error::InvalidCurve("empty crossing sequence".into()));
        }
        let n = crossings.len();
        for k in 0..n {
            let h = crossings[k];
            if h.tri >= s.n_tris() || h.side > 2 {
                return Err(Error::InvalidCurve(format!("crossing {} out of range", k)));
            }
            let next = crossings[(k + 1) % n];
            if s.partner(h).tri != next.tri {
                return Err(Error::InvalidCurve(format!(
                    "crossing {} enters {} but crossing {} leaves {}",
                    k,
                    s.names()[s.partner(h).tri],
                    (k + 1) % n,
                    s.names()[next.tri]
                )));
            }
        }
        Ok(CurveClass { crossings })
    }

    pub fn from_refs(s: &Surface, refs: &[EdgeRef]) -> Result<CurveClass> {
        let mut out = Vec::with_capacity(refs.len());
        for r in refs {
            let t = s.tri_index(&r.tri).ok_or_else(|| Error::InvalidCurve(format!("unknown triangle {}", r.tri)))?;
            let slot = Slot::new(t, r.slot);
            out.push(if r.exit { slot } else { s.partner(slot) });
        }
        CurveClass::new(s, out)
    }

    pub fn to_refs(&self, s: &Surface) -> Vec<EdgeRef> {
        self.crossings.iter().map(|h| EdgeRef { tri: s.names()[h.tri].clone(), slot: h.side, exit: true }).collect()
    }

    pub fn len(&self) -> usize {
        self.crossings.len()
    }

    pub fn is_empty(&self) -> bool {
        self.crossings.is_empty()
    }

    /// Product of gluing signs along the curve.
    pub fn holonomy(&self, s: &Surface) -> i8 {
        self.crossings.iter().map(|&h| s.sign(h)).product()
    }

    pub fn reversed(&self, s: &Surface) -> CurveClass {
        CurveClass { crossings: self.crossings.iter().rev().map(|&h| s.partner(h)).collect() }
    }

    /// Closed curve running along directed saddle connections, passing the
    /// cone point at the end of `segs[j]` on the side `keeps[j]`.
    pub fn from_path(s: &Surface, segs: &[SaddleConnection], keeps: &[Keep]) -> Result<CurveClass> {
        if segs.is_empty() || segs.len() != keeps.len() {
            return Err(Error::InvalidCurve("path needs one turn per segment".into()));
        }
        let n = segs.len();
        let mut out = Vec::new();
        for j in 0..n {
            let (a, b) = (&segs[j], &segs[(j + 1) % n]);
            if a.end != b.start {
                return Err(Error::InvalidCurve(format!("segment {} does not end where {} starts", j, (j + 1) % n)));
            }
            out.extend_from_slice(&a.crossings);
            out.extend(sweep(s, a.end_corner, a.end_within, b.start_corner, b.start_within, keeps[j]));
        }
        CurveClass::new(s, out)
    }

    /// Lexicographically least rotation, for comparisons.
    pub fn canonical(&self) -> Vec<Slot> {
        canonical_rotation(&self.crossings)
    }
}

pub fn canonical_rotation(v: &[Slot]) -> Vec<Slot> {
    let n = v.len();
    (0..n).map(|r| v[r..].iter().chain(v[..r].iter()).copied().collect::<Vec<_>>()).min().unwrap_or_default()
}

/// Removes backtracking pairs `h, partner(h)` cyclically.
pub fn reduce_cyclic(s: &Surface, seq: &[Slot]) -> Vec<Slot> {
    let mut st: Vec<Slot> = Vec::with_capacity(seq.len());
    for &h in seq {
        if let Some(&top) = st.last() {
            if s.partner(top) == h {
                st.pop();
                continue;
            }
        }
        st.push(h);
    }
    let (mut i, mut j) = (0usize, st.len());
    while j >= i + 2 && s.partner(st[j - 1]) == st[i] {
        i += 1;
        j -= 1;
    }
    st[i..j].to_vec()
}

/// Crossings made while turning around a vertex from a ray at `a` in
/// corner `from` to a ray at `b` in corner `to`. Coincident rays mean a
/// full turn.
pub fn sweep(s: &Surface, from: Corner, a: f64, to: Corner, b: f64, keep: Keep) -> Vec<Slot> {
    let mut out = Vec::new();
    if from == to {
        let done = match keep {
            Keep::Left => b > a,
            Keep::Right => b < a,
        };
        if done {
            return out;
        }
    }
    let mut cur = from;
    loop {
        match keep {
            Keep::Left => {
                out.push(cur.end_side());
                cur = s.next_ccw(cur);
            }
            Keep::Right => {
                out.push(cur.start_side());
                cur = s.prev_ccw(cur);
            }
        }
        if cur == to {
            return out;
        }
    }
}
