//! Delaunay triangulation by edge flips. Every vertex of a surface is a cone
//! point or a marked point, so triangle sides are already saddle
//! connections and flips only change which ones are used.

use crate::error::{Error, Result};
use crate::numeric::{QVec, Q};
use crate::surface::{Corner, Slot, Surface};
use num_traits::{Signed, Zero};
use serde::Serialize;
use std::cmp::Ordering;

#[derive(Clone, Debug, Serialize)]
pub struct SaddleTriangulation {
    #[serde(skip)]
    pub surface: Surface,
    pub flips: usize,
    pub edge_count: usize,
    /// 6g + 3k − 6
    pub expected_edges: i64,
}

/// Exact sign of the in-circle determinant of D against ccw A, B, C.
fn incircle(a: &QVec, b: &QVec, c: &QVec, d: &QVec) -> Ordering {
    let row = |p: &QVec| {
        let x = &p.re - &d.re;
        let y = &p.im - &d.im;
        let n = &x * &x + &y * &y;
        (x, y, n)
    };
    let (ax, ay, an) = row(a);
    let (bx, by, bn) = row(b);
    let (cx, cy, cn) = row(c);
    let det: Q = &ax * (&by * &cn - &bn * &cy) - &ay * (&bx * &cn - &bn * &cx) + &an * (&bx * &cy - &by * &cx);
    det.cmp(&Q::zero())
}

fn lex_key(v: &QVec) -> (Q, Q) {
    let n = v.sign_normalized();
    (n.re, n.im)
}

/// The quadrilateral around the edge of slot `h` developed in the frame of
/// `h.tri`, with A at the origin: (B, C, D, s) where the edge is A→B, C is
/// opposite in `h.tri`, D opposite in the partner and s the gluing sign.
fn quad(s: &Surface, h: Slot) -> (QVec, QVec, QVec, i8) {
    let (t, i) = (h.tri, h.side);
    let p = s.partner(h);
    let sg = s.sign(h);
    let v = |k: usize| s.qvec(Slot::new(t, k % 3)).clone();
    let b = v(i);
    let c = b.add(&v(i + 1));
    let w1 = s.qvec(Slot::new(p.tri, (p.side + 1) % 3)).scale_i(sg as i64);
    (b, c, w1, sg)
}

/// Whether the edge of `h` should be flipped: strictly non-Delaunay, or
/// co-circular with a lexicographically smaller other diagonal.
fn wants_flip(s: &Surface, h: Slot) -> bool {
    let p = s.partner(h);
    if p.tri == h.tri {
        return false;
    }
    let (b, c, d, _) = quad(s, h);
    let a = QVec::zero();
    match incircle(&a, &b, &c, &d) {
        Ordering::Greater => true,
        Ordering::Less => false,
        Ordering::Equal => {
            // The quad is convex when all four points are co-circular.
            lex_key(&d.sub(&c)) < lex_key(&b)
        }
    }
}

/// Replaces the edge of `h` by the other diagonal of its quadrilateral.
pub fn flip(s: &Surface, h: Slot) -> Result<Surface> {
    let (t, i) = (h.tri, h.side);
    let p = s.partner(h);
    let (u, j) = (p.tri, p.side);
    if u == t {
        return Err(Error::DegenerateInput(format!("edge {}.{} is glued to its own triangle", s.names()[t], i)));
    }
    let sg = s.sign(h);
    let tv = |k: usize| s.qvec(Slot::new(t, k % 3)).clone();
    let uv = |k: usize| s.qvec(Slot::new(u, k % 3)).scale_i(sg as i64);
    // t' = (C, A, D), u' = (D, B, C)
    let ca = tv(i + 2);
    let ad = uv(j + 1);
    let dc = ca.add(&ad).neg();
    let db = uv(j + 2);
    let bc = tv(i + 1);
    let cd = db.add(&bc).neg();
    let mut exact = s.exact_vecs().to_vec();
    exact[t] = [ca, ad, dc];
    exact[u] = [db, bc, cd];
    for k in [t, u] {
        if !exact[k][0].cross(&exact[k][1]).is_positive() {
            return Err(Error::DegenerateInput(format!("flip of {}.{} is not convex", s.names()[t], i)));
        }
    }
    // old slot -> (new slot, frame factor)
    let map = |x: Slot| -> (Slot, i8) {
        if x.tri == t {
            match (x.side + 3 - i) % 3 {
                1 => (Slot::new(u, 1), 1),
                2 => (Slot::new(t, 0), 1),
                _ => unreachable!(),
            }
        } else if x.tri == u {
            match (x.side + 3 - j) % 3 {
                1 => (Slot::new(t, 1), sg),
                2 => (Slot::new(u, 0), sg),
                _ => unreachable!(),
            }
        } else {
            (x, 1)
        }
    };
    let mut glue = Vec::new();
    for (a, b, g) in s.gluing_list() {
        if (a == h && b == p) || (a == p && b == h) {
            continue;
        }
        let (a2, fa) = map(a);
        let (b2, fb) = map(b);
        glue.push((a2, b2, g * fa * fb));
    }
    glue.push((Slot::new(t, 2), Slot::new(u, 2), 1));
    // old corner -> new corner at the same point
    let cmap = |c: Corner| -> Corner {
        if c.tri == t {
            match (c.corner + 3 - i) % 3 {
                0 => Corner::new(t, 1),
                1 => Corner::new(u, 1),
                _ => Corner::new(t, 0),
            }
        } else if c.tri == u {
            match (c.corner + 3 - j) % 3 {
                0 => Corner::new(u, 1),
                1 => Corner::new(t, 1),
                _ => Corner::new(t, 2),
            }
        } else {
            c
        }
    };
    let marks: Vec<Corner> = s.marks().iter().map(|&c| cmap(c)).collect();
    Surface::new(s.names().to_vec(), exact, &glue, &marks)
}

pub const MAX_FLIPS: usize = 10_000;

/// Delaunay triangulation reached by flipping; co-circular ties resolved
/// toward the lexicographically smaller diagonal.
pub fn saddle_triangulation(s: &Surface) -> Result<SaddleTriangulation> {
    let sig = s.stratum_signature()?;
    let mut cur = s.clone();
    let mut flips = 0;
    loop {
        let next = cur.edges().iter().copied().find(|&h| wants_flip(&cur, h));
        let Some(h) = next else { break };
        cur = flip(&cur, h)?;
        flips += 1;
        if flips > MAX_FLIPS {
            return Err(Error::DegenerateInput("flip sequence does not terminate".into()));
        }
    }
    let expected = 6 * sig.genus + 3 * sig.k as i64 - 6;
    Ok(SaddleTriangulation { edge_count: cur.edges().len(), surface: cur, flips, expected_edges: expected })
}

/// Whether every edge is locally Delaunay (ties allowed).
pub fn is_delaunay(s: &Surface) -> bool {
    s.edges().iter().all(|&h| {
        let p = s.partner(h);
        if p.tri == h.tri {
            return true;
        }
        let (b, c, d, _) = quad(s, h);
        incircle(&QVec::zero(), &b, &c, &d) != Ordering::Greater
    })
}
