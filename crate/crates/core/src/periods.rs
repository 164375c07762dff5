//! Period coordinates: free edge vectors modulo the triangle relations.
//!
//! For holonomy −1 the relations are set up on the double cover together
//! with the condition that the deck involution negates every period; the
//! coordinates are then values of cover edges, each of which is ± a base
//! slot vector.

use crate::error::{Error, Result};
use crate::linalg::QMatrix;
use crate::numeric::{q, q_from_f64, q_to_f64, QVec, C64, Q};
use crate::surface::{double_cover, Slot, StratumSignature, Surface};
use num_traits::{One, Signed, Zero};
use serde::Serialize;

/// One chart coordinate: `sign * vec(slot)` on the base surface.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct ChartCoord {
    pub slot: Slot,
    pub sign: i8,
}

#[derive(Clone, Debug)]
pub struct PeriodChart {
    base: Surface,
    signature: StratumSignature,
    coords: Vec<ChartCoord>,
    /// Edge values as rational combinations of the coordinates (E x m).
    edge_map: QMatrix,
    /// Dimensions of the ±1 eigenspaces on the double cover (ε = −1 only).
    eigen_dims: Option<(usize, usize)>,
    relation_rank: usize,
}

fn triangle_relations(s: &Surface) -> QMatrix {
    let e = s.edges().len();
    let rows: Vec<Vec<Q>> = (0..s.n_tris())
        .map(|t| {
            let mut r = vec![Q::zero(); e];
            for i in 0..3 {
                let h = Slot::new(t, i);
                r[s.edge_of(h)] += q(s.slot_edge_sign(h));
            }
            r
        })
        .collect();
    QMatrix::from_rows(&rows)
}

/// Solution space of `rows`: free columns and the map free -> all columns.
fn solve_space(m: &QMatrix) -> (Vec<usize>, QMatrix, usize) {
    let (r, pivots) = m.rref();
    let free: Vec<usize> = (0..m.cols).filter(|c| !pivots.contains(c)).collect();
    let mut map = QMatrix::zeros(m.cols, free.len());
    for (j, &f) in free.iter().enumerate() {
        map.set(f, j, Q::one());
        for (row, &p) in pivots.iter().enumerate() {
            map.set(p, j, -r.get(row, f).clone());
        }
    }
    (free, map, pivots.len())
}

/// Rows imposing that the deck involution multiplies periods by `eigen`.
fn deck_rows(cover: &Surface, deck: impl Fn(Slot) -> Slot, eigen: i64) -> Vec<Vec<Q>> {
    let e = cover.edges().len();
    cover
        .edges()
        .iter()
        .enumerate()
        .map(|(i, &rep)| {
            let img = deck(rep);
            let mut r = vec![Q::zero(); e];
            // vec(deck(rep)) = eigen * vec(rep)
            r[cover.edge_of(img)] += q(cover.slot_edge_sign(img));
            r[i] -= q(eigen);
            r
        })
        .collect()
}

impl PeriodChart {
    pub fn build(s: &Surface) -> Result<PeriodChart> {
        let signature = s.stratum_signature()?;
        let f = s.n_tris();
        if s.holonomy() == 1 {
            let rel = triangle_relations(s);
            let (free, map, rank) = solve_space(&rel);
            if rank != f - 1 {
                return Err(Error::RankDefect { rank, expected: f - 1 });
            }
            let coords = free.iter().map(|&e| ChartCoord { slot: s.edges()[e], sign: 1 }).collect();
            return Ok(PeriodChart {
                base: s.clone(),
                signature,
                coords,
                edge_map: map,
                eigen_dims: None,
                relation_rank: rank,
            });
        }
        let dc = double_cover(s)?;
        let cover = &dc.surface;
        let n = f;
        let rel = triangle_relations(cover);
        let rank = rel.rank();
        if rank != 2 * f - 1 {
            return Err(Error::RankDefect { rank, expected: 2 * f - 1 });
        }
        let deck = |h: Slot| dc.deck_slot(h);
        let eig = |sign: i64| {
            let mut rows: Vec<Vec<Q>> = (0..rel.rows).map(|i| rel.row(i).to_vec()).collect();
            rows.extend(deck_rows(cover, deck, sign));
            solve_space(&QMatrix::from_rows(&rows))
        };
        let (plus_free, _, _) = eig(1);
        let (free, cover_map, _) = eig(-1);
        // Base edge e is the cover edge of its copy-0 representative.
        let e = s.edges().len();
        let mut map = QMatrix::zeros(e, free.len());
        for (i, &rep) in s.edges().iter().enumerate() {
            let ce = cover.edge_of(rep);
            let sg = q(cover.slot_edge_sign(rep));
            for j in 0..free.len() {
                map.set(i, j, &sg * cover_map.get(ce, j));
            }
        }
        let coords = free
            .iter()
            .map(|&ce| {
                let rep = cover.edges()[ce];
                let slot = Slot::new(rep.tri % n, rep.side);
                ChartCoord { slot, sign: if rep.tri < n { 1 } else { -1 } }
            })
            .collect();
        Ok(PeriodChart {
            base: s.clone(),
            signature,
            coords,
            edge_map: map,
            eigen_dims: Some((plus_free.len(), free.len())),
            relation_rank: rank,
        })
    }

    pub fn base(&self) -> &Surface {
        &self.base
    }
    pub fn signature(&self) -> &StratumSignature {
        &self.signature
    }
    pub fn basis(&self) -> &[ChartCoord] {
        &self.coords
    }
    /// Complex dimension.
    pub fn dim(&self) -> usize {
        self.coords.len()
    }
    pub fn real_dim(&self) -> usize {
        2 * self.dim()
    }
    pub fn slice_dim(&self) -> usize {
        self.real_dim() - 2
    }
    /// (+1, −1) eigenspace dimensions on the double cover.
    pub fn eigen_dims(&self) -> Option<(usize, usize)> {
        self.eigen_dims
    }
    pub fn relation_rank(&self) -> usize {
        self.relation_rank
    }
    /// Edge values as combinations of the coordinates.
    pub fn edge_map(&self) -> &QMatrix {
        &self.edge_map
    }

    /// Coefficients of `Σ coeffs[e] x_e` in chart coordinates.
    pub fn pull_back(&self, coeffs: &[i64]) -> Vec<f64> {
        self.pull_back_exact(coeffs).iter().map(q_to_f64).collect()
    }

    /// Same as `pull_back` with exact coefficients.
    pub fn pull_back_exact(&self, coeffs: &[i64]) -> Vec<Q> {
        (0..self.dim())
            .map(|j| {
                let mut acc = Q::zero();
                for (e, &k) in coeffs.iter().enumerate() {
                    if k != 0 {
                        acc += self.edge_map.get(e, j) * q(k);
                    }
                }
                acc
            })
            .collect()
    }

    fn check_combinatorics(&self, s: &Surface) -> Result<()> {
        if s.n_tris() != self.base.n_tris()
            || s.gluing_list() != self.base.gluing_list()
            || s.marks().iter().map(|&c| s.vertex_of(c)).collect::<Vec<_>>()
                != self.base.marks().iter().map(|&c| self.base.vertex_of(c)).collect::<Vec<_>>()
        {
            return Err(Error::CombinatoricsMismatch("triangles, gluings or marks differ from the chart base".into()));
        }
        Ok(())
    }

    pub fn exact_coordinates(&self, s: &Surface) -> Result<Vec<QVec>> {
        self.check_combinatorics(s)?;
        Ok(self.coords.iter().map(|c| s.qvec(c.slot).scale_i(c.sign as i64)).collect())
    }

    pub fn coordinates(&self, s: &Surface) -> Result<Vec<C64>> {
        Ok(self.exact_coordinates(s)?.iter().map(|v| v.to_c64()).collect())
    }

    /// Edge vectors (over `Surface::edges`) for the given coordinates.
    pub fn solve(&self, coords: &[QVec]) -> Vec<QVec> {
        (0..self.edge_map.rows)
            .map(|e| {
                let mut acc = QVec::zero();
                for (j, c) in coords.iter().enumerate() {
                    let k = self.edge_map.get(e, j);
                    if !k.is_zero() {
                        acc = acc.add(&c.scale(k));
                    }
                }
                acc
            })
            .collect()
    }

    /// Surface with the given coordinates. Fails with DEGENERATE_TRIANGLE
    /// when some triangle loses positive area.
    pub fn surface_at(&self, coords: &[QVec]) -> Result<Surface> {
        if coords.len() != self.dim() {
            return Err(Error::InvalidArgument(format!("expected {} coordinates", self.dim())));
        }
        let x = self.solve(coords);
        let s = &self.base;
        let exact: Vec<[QVec; 3]> = (0..s.n_tris())
            .map(|t| {
                let v = |i: usize| {
                    let h = Slot::new(t, i);
                    x[s.edge_of(h)].scale_i(s.slot_edge_sign(h))
                };
                [v(0), v(1), v(2)]
            })
            .collect();
        for (t, v) in exact.iter().enumerate() {
            if !v[0].cross(&v[1]).is_positive() {
                return Err(Error::DegenerateTriangle(t));
            }
        }
        s.with_vectors(exact)
    }

    /// Shifts the coordinates of the base by `delta`. With `guard` off a
    /// degenerate triangle is reported by surface validation instead.
    pub fn perturb(&self, delta: &[C64], guard: bool) -> Result<Surface> {
        if delta.len() != self.dim() {
            return Err(Error::InvalidArgument(format!("expected {} coordinates", self.dim())));
        }
        let base = self.exact_coordinates(&self.base)?;
        let c: Vec<QVec> = base.iter().zip(delta).map(|(b, d)| b.add(&QVec::from_c64(*d))).collect();
        match self.surface_at(&c) {
            Err(Error::DegenerateTriangle(t)) if !guard => {
                Err(Error::TriangleIneq(format!("triangle {} has nonpositive area", self.base.names()[t])))
            }
            r => r,
        }
    }

    /// Rotates so that the first coordinate is real and positive, then
    /// scales to unit area.
    pub fn slice_normalize(&self, s: &Surface) -> Result<Surface> {
        let c = self.exact_coordinates(s)?;
        let c0 = &c[0];
        if c0.is_zero() {
            return Err(Error::ZeroFirstCoordinate);
        }
        let rotated = if c0.im.is_zero() && c0.re.is_positive() {
            s.clone()
        } else {
            // conj(c0)/r with r a rational approximation of |c0|: an exact
            // similarity that makes c0 real positive.
            let r = q_from_f64(c0.to_c64().norm());
            let w = c0.conj().scale(&(Q::one() / r));
            s.map_vectors(|v| v.mul(&w))?
        };
        rotated.normalize_area()
    }
}

pub fn build_chart(s: &Surface) -> Result<PeriodChart> {
    PeriodChart::build(s)
}
