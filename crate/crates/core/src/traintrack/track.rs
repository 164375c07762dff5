//! The standard maximal train tracks on a pants decomposition.
//!
//! Each pants curve belongs to the track. Inside a pants without marked
//! points three seams join the cuffs pairwise. A pants with one marked point
//! has a connector between its two cuffs and a stem from the higher cuff to
//! a loop around the marked point; with two marked points only the stem and
//! the loop remain.
//!
//! Positions along a cuff are in eighths of a turn, measured in the boundary
//! orientation of the pants. Seams end at 0 and 4. Across a pants curve the
//! second side's position φ is 2 − φ in the first side's coordinate θ, so the
//! switches of the two sides interleave.

use super::pants::{CuffRef, PantsDecomposition, PantsKind};
use crate::error::{Error, Result};
use crate::linalg::QMatrix;
use crate::numeric::{q, Q};
use num_traits::{One, Signed, Zero};
use serde::Serialize;

/// Direction in which branches merge into a pants curve as they reach it.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Turn {
    Right,
    Left,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum BranchKind {
    /// Joins two cuffs of a pants without marked points.
    Seam {
        pants: usize,
        slots: (usize, usize),
    },
    Connector {
        pants: usize,
    },
    Stem {
        pants: usize,
    },
    Loop {
        pants: usize,
    },
    /// Piece `piece` of pants curve `curve`, between consecutive switches.
    Curve {
        curve: usize,
        piece: usize,
    },
}

#[derive(Clone, Debug, Serialize)]
pub struct Branch {
    pub name: String,
    pub kind: BranchKind,
}

/// Weights on `incoming` sum to the weights on `outgoing` (with repetition).
#[derive(Clone, Debug, Serialize)]
pub struct Switch {
    pub incoming: Vec<usize>,
    pub outgoing: Vec<usize>,
}

/// Where an interior branch reaches a cuff.
#[derive(Clone, Copy, Debug, Serialize)]
pub struct Endpoint {
    pub cuff: CuffRef,
    pub pos: u8,
    pub branch: usize,
}

#[derive(Clone, Debug, Serialize)]
pub struct Region {
    pub pants: usize,
    pub punctured: bool,
    pub cusps: usize,
}

#[derive(Clone, Debug, Serialize)]
pub struct TrainTrack {
    pub turn: Turn,
    pub branches: Vec<Branch>,
    pub switches: Vec<Switch>,
    pub endpoints: Vec<Endpoint>,
    /// Switch positions along each pants curve (θ coordinate, increasing);
    /// piece k runs from `stops[c][k]` to the next stop.
    pub stops: Vec<Vec<u8>>,
    pub pieces: Vec<Vec<usize>>,
    /// Switch sitting at each stop.
    pub stop_switch: Vec<Vec<usize>>,
    pub regions: Vec<Region>,
    pub models: Vec<PantsKind>,
    #[serde(skip)]
    pub(crate) pd: PantsDecomposition,
}

/// θ coordinate of a cuff position on curve `c`.
pub(crate) fn theta(pd: &PantsDecomposition, c: usize, cuff: CuffRef, pos: u8) -> u8 {
    if pd.curves()[c].a == cuff {
        pos
    } else {
        (10 - pos) % 8
    }
}

impl TrainTrack {
    pub fn decomposition(&self) -> &PantsDecomposition {
        &self.pd
    }

    /// Piece of curve `c` containing θ (which must not be a stop).
    pub fn piece_at(&self, c: usize, th: u8) -> usize {
        let stops = &self.stops[c];
        match stops.iter().rposition(|&s| s < th) {
            Some(k) => self.pieces[c][k],
            None => self.pieces[c][stops.len() - 1],
        }
    }

    /// Switch conditions as rows (incoming minus outgoing).
    pub fn switch_matrix(&self) -> QMatrix {
        let e = self.branches.len();
        let rows: Vec<Vec<Q>> = self
            .switches
            .iter()
            .map(|s| {
                let mut r = vec![Q::zero(); e];
                for &b in &s.incoming {
                    r[b] += Q::one();
                }
                for &b in &s.outgoing {
                    r[b] -= Q::one();
                }
                r
            })
            .collect();
        QMatrix::from_rows(&rows)
    }

    pub fn satisfies_switches(&self, w: &[Q]) -> bool {
        self.switches.iter().all(|s| {
            let a: Q = s.incoming.iter().map(|&b| &w[b]).sum();
            let b: Q = s.outgoing.iter().map(|&b| &w[b]).sum();
            a == b
        })
    }

    /// Complementary regions are trigons or once-marked monogons and their
    /// indices add up to the Euler characteristic.
    pub fn audit_regions(&self) -> Result<()> {
        let mut twice_index = 0i64;
        for r in &self.regions {
            let ok = if r.punctured { r.cusps == 1 } else { r.cusps == 3 };
            if !ok {
                return Err(Error::SingularSystem(format!(
                    "region in pants {} has {} cusps (punctured: {})",
                    self.pd.names()[r.pants],
                    r.cusps,
                    r.punctured
                )));
            }
            twice_index += if r.punctured { 0 } else { 2 } - r.cusps as i64;
        }
        let chi = 2 - 2 * self.pd.genus() - self.pd.n_marked() as i64;
        if twice_index != 2 * chi {
            return Err(Error::SingularSystem(format!("region indices sum to {}/2, expected {}", twice_index, chi)));
        }
        Ok(())
    }
}

struct Builder {
    branches: Vec<Branch>,
    switches: Vec<Switch>,
    endpoints: Vec<Endpoint>,
    regions: Vec<Region>,
}

impl Builder {
    fn branch(&mut self, name: String, kind: BranchKind) -> usize {
        self.branches.push(Branch { name, kind });
        self.branches.len() - 1
    }
    fn region(&mut self, pants: usize, punctured: bool) -> usize {
        self.regions.push(Region { pants, punctured, cusps: 0 });
        self.regions.len() - 1
    }
}

fn build_track(pd: &PantsDecomposition, turn: Turn) -> Result<TrainTrack> {
    pd.check_complexity()?;
    let mut b = Builder { branches: Vec::new(), switches: Vec::new(), endpoints: Vec::new(), regions: Vec::new() };
    let mut models = Vec::new();
    for p in 0..pd.n_pants() {
        let name = &pd.names()[p];
        let kind = pd.kind(p);
        models.push(kind);
        // A cusp at an endpoint lies in the segment after it (Right) or
        // before it (Left), in the pants' own boundary orientation.
        let after = turn == Turn::Right;
        match kind {
            PantsKind::Unmarked => {
                let front = b.region(p, false);
                let back = b.region(p, false);
                let mut seam = [0usize; 3];
                for i in 0..3 {
                    let j = (i + 1) % 3;
                    let slots = (i.min(j), i.max(j));
                    seam[i] =
                        b.branch(format!("{}.s{}{}", name, slots.0, slots.1), BranchKind::Seam { pants: p, slots });
                }
                for i in 0..3 {
                    // seam[i] joins i and i+1.
                    b.endpoints.push(Endpoint { cuff: CuffRef::new(p, i), pos: 0, branch: seam[(i + 2) % 3] });
                    b.endpoints.push(Endpoint { cuff: CuffRef::new(p, i), pos: 4, branch: seam[i] });
                    // Segment (0,4) faces the front hexagon, (4,8) the back.
                    b.regions[if after { front } else { back }].cusps += 1;
                    b.regions[if after { back } else { front }].cusps += 1;
                }
            }
            PantsKind::OneMarked => {
                let s = pd.glued_slots(p);
                let t = b.region(p, false);
                let m = b.region(p, true);
                let conn = b.branch(format!("{}.a", name), BranchKind::Connector { pants: p });
                let stem = b.branch(format!("{}.e", name), BranchKind::Stem { pants: p });
                let lp = b.branch(format!("{}.l", name), BranchKind::Loop { pants: p });
                b.endpoints.push(Endpoint { cuff: CuffRef::new(p, s[0]), pos: 0, branch: conn });
                b.endpoints.push(Endpoint { cuff: CuffRef::new(p, s[1]), pos: 0, branch: conn });
                b.endpoints.push(Endpoint { cuff: CuffRef::new(p, s[1]), pos: 4, branch: stem });
                b.switches.push(Switch { incoming: vec![lp, lp], outgoing: vec![stem] });
                b.regions[t].cusps += 3;
                b.regions[m].cusps += 1;
            }
            PantsKind::TwoMarked => {
                let s = pd.glued_slots(p);
                let r = b.region(p, true);
                let m = b.region(p, true);
                let stem = b.branch(format!("{}.e", name), BranchKind::Stem { pants: p });
                let lp = b.branch(format!("{}.l", name), BranchKind::Loop { pants: p });
                b.endpoints.push(Endpoint { cuff: CuffRef::new(p, s[0]), pos: 0, branch: stem });
                b.switches.push(Switch { incoming: vec![lp, lp], outgoing: vec![stem] });
                b.regions[r].cusps += 1;
                b.regions[m].cusps += 1;
            }
        }
    }

    let mut stops = Vec::new();
    let mut pieces = Vec::new();
    let mut stop_switch = Vec::new();
    for (c, pc) in pd.curves().iter().enumerate() {
        let mut ends: Vec<(u8, bool, usize)> = b
            .endpoints
            .iter()
            .filter(|e| e.cuff == pc.a || e.cuff == pc.b)
            .map(|e| (theta(pd, c, e.cuff, e.pos), e.cuff == pc.a, e.branch))
            .collect();
        ends.sort();
        let ids: Vec<usize> = (0..ends.len())
            .map(|k| b.branch(format!("c{}.{}", c, k), BranchKind::Curve { curve: c, piece: k }))
            .collect();
        let m = ends.len();
        let mut at = Vec::new();
        for (k, &(_, side_a, arc)) in ends.iter().enumerate() {
            let (behind_minus, ahead_plus) = (ids[(k + m - 1) % m], ids[k]);
            // Side a merges towards −θ under Right turns, side b towards +θ.
            let minus = side_a == (turn == Turn::Right);
            let sw = if minus {
                Switch { incoming: vec![ahead_plus, arc], outgoing: vec![behind_minus] }
            } else {
                Switch { incoming: vec![behind_minus, arc], outgoing: vec![ahead_plus] }
            };
            at.push(b.switches.len());
            b.switches.push(sw);
        }
        stop_switch.push(at);
        stops.push(ends.iter().map(|e| e.0).collect());
        pieces.push(ids);
    }

    let t = TrainTrack {
        turn,
        branches: b.branches,
        switches: b.switches,
        endpoints: b.endpoints,
        stops,
        pieces,
        stop_switch,
        regions: b.regions,
        models,
        pd: pd.clone(),
    };
    t.audit_regions()?;
    Ok(t)
}

/// The tracks τ (right turns into pants curves) and τ′ (left turns).
pub fn build_tracks(pd: &PantsDecomposition) -> Result<(TrainTrack, TrainTrack)> {
    Ok((build_track(pd, Turn::Right)?, build_track(pd, Turn::Left)?))
}

/// Rational basis of the weight space; its size is checked against 6g+2n−6.
pub fn weight_space_basis(t: &TrainTrack) -> Result<Vec<Vec<Q>>> {
    let basis = t.switch_matrix().nullspace();
    let expected = t.pd.weight_dim();
    if basis.len() != expected {
        return Err(Error::RankDefect { rank: basis.len(), expected });
    }
    Ok(basis)
}

/// Intersection numbers with the pants curves that make every interior
/// branch weight positive: pairwise sums exceed the third value, and the
/// higher cuff of a once-marked pants carries the larger value.
pub(crate) fn positive_cuff_values(pd: &PantsDecomposition) -> Vec<Q> {
    let n = pd.curves().len() as i64;
    (0..n).map(|c| q(2 * n + 2 * c)).collect()
}

/// Interior branch weights from the pants-curve intersection numbers.
pub(crate) fn interior_from_cuffs<T, F>(t: &TrainTrack, cuff: F, half: impl Fn(T) -> T) -> Vec<Option<T>>
where
    T: Clone + std::ops::Add<Output = T> + std::ops::Sub<Output = T>,
    F: Fn(usize) -> T,
{
    let pd = &t.pd;
    let at = |p: usize, s: usize| cuff(pd.curve_at(CuffRef::new(p, s)).expect("glued slot"));
    t.branches
        .iter()
        .map(|br| match br.kind {
            BranchKind::Seam { pants, slots: (i, j) } => {
                let k = 3 - i - j;
                Some(half(at(pants, i) + at(pants, j) - at(pants, k)))
            }
            BranchKind::Connector { pants } => Some(at(pants, pd.glued_slots(pants)[0])),
            BranchKind::Stem { pants } => {
                let s = pd.glued_slots(pants);
                Some(match pd.kind(pants) {
                    PantsKind::OneMarked => at(pants, s[1]) - at(pants, s[0]),
                    _ => at(pants, s[0]),
                })
            }
            BranchKind::Loop { pants } => {
                let s = pd.glued_slots(pants);
                Some(half(match pd.kind(pants) {
                    PantsKind::OneMarked => at(pants, s[1]) - at(pants, s[0]),
                    _ => at(pants, s[0]),
                }))
            }
            BranchKind::Curve { .. } => None,
        })
        .collect()
}

/// Offsets of the pieces of curve `c` from piece 0, as combinations of the
/// interior branches (walking towards +θ through the switches).
pub(crate) fn piece_offsets(t: &TrainTrack, c: usize) -> Vec<Vec<(usize, i64)>> {
    let ids = &t.pieces[c];
    let m = ids.len();
    let mut out = vec![Vec::new(); m];
    for k in 1..m {
        let mut off = out[k - 1].clone();
        let sw = &t.switches[t.stop_switch[c][k]];
        let arc = *sw.incoming.iter().find(|&&b| b != ids[k] && b != ids[k - 1]).expect("arc at switch");
        // Going +θ the weight grows by the arc if piece k is outgoing.
        let sign = if sw.outgoing.contains(&ids[k]) { 1 } else { -1 };
        off.push((arc, sign));
        out[k] = off;
    }
    out
}

/// A weight vector with every entry strictly positive.
pub fn positive_solution(t: &TrainTrack) -> Vec<Q> {
    let vals = positive_cuff_values(&t.pd);
    let half = |x: Q| x / q(2);
    let interior = interior_from_cuffs(t, |c| vals[c].clone(), half);
    let mut w: Vec<Q> = interior.iter().map(|x| x.clone().unwrap_or_else(Q::zero)).collect();
    for c in 0..t.pieces.len() {
        let offs: Vec<Q> = piece_offsets(t, c).iter().map(|o| o.iter().map(|&(b, s)| &w[b] * q(s)).sum()).collect();
        let low = offs.iter().fold(Q::zero(), |m, x| if *x < m { x.clone() } else { m });
        let base = Q::one() - low;
        for (k, &b) in t.pieces[c].iter().enumerate() {
            w[b] = &base + &offs[k];
        }
    }
    debug_assert!(w.iter().all(|x| x.is_positive()));
    w
}
