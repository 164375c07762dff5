//! The curve system σ: the pants curves followed by one transverse curve per
//! pants curve, each recorded by the branches it crosses.
//!
//! A pants curve is pushed off the track into the first side's pants and
//! crosses the interior branches ending there. A transverse curve crosses
//! its pants curve at θ = 1 (handle case) or at θ = 1 and θ = 5, and in each
//! adjacent pants takes the shortest essential return route:
//! the seam opposite the cuff in a pants without marked points, the stem
//! when leaving from the lower cuff of a once-marked pants, nothing
//! otherwise.

use super::pants::{CuffRef, PantsKind};
use super::track::{interior_from_cuffs, piece_offsets, weight_space_basis, BranchKind, TrainTrack};
use crate::error::{Error, Result};
use crate::linalg::QMatrix;
use crate::numeric::{q, Q};
use num_traits::Zero;
use serde::Serialize;
use std::ops::{Add, Sub};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum SigmaKind {
    Pants(usize),
    Transverse(usize),
}

#[derive(Clone, Debug, Serialize)]
pub struct SigmaCurve {
    pub name: String,
    pub kind: SigmaKind,
    /// (branch, multiplicity)
    pub crossings: Vec<(usize, u32)>,
}

#[derive(Clone, Debug, Serialize)]
pub struct SigmaSystem {
    pub curves: Vec<SigmaCurve>,
    /// Geometric intersection of each pants curve with its transverse curve.
    pub meets: Vec<u32>,
    #[serde(skip)]
    pub track: TrainTrack,
}

fn add_crossing(v: &mut Vec<(usize, u32)>, b: usize) {
    match v.iter_mut().find(|x| x.0 == b) {
        Some(x) => x.1 += 1,
        None => v.push((b, 1)),
    }
}

/// Interior branch crossed by the return route from cuff `c` to itself.
fn return_route(t: &TrainTrack, c: CuffRef) -> Option<usize> {
    let pd = t.decomposition();
    let p = c.pants;
    let find = |pred: &dyn Fn(&BranchKind) -> bool| t.branches.iter().position(|b| pred(&b.kind));
    match pd.kind(p) {
        PantsKind::Unmarked => {
            let (i, j) = ((c.slot + 1) % 3, (c.slot + 2) % 3);
            let slots = (i.min(j), i.max(j));
            find(&|k| *k == BranchKind::Seam { pants: p, slots })
        }
        PantsKind::OneMarked if pd.glued_slots(p)[0] == c.slot => find(&|k| *k == BranchKind::Stem { pants: p }),
        _ => None,
    }
}

pub fn sigma_system(t: &TrainTrack) -> SigmaSystem {
    let pd = t.decomposition();
    let n = pd.curves().len();
    let mut curves = Vec::with_capacity(2 * n);
    for (c, pc) in pd.curves().iter().enumerate() {
        let mut x = Vec::new();
        for e in t.endpoints.iter().filter(|e| e.cuff == pc.a) {
            add_crossing(&mut x, e.branch);
        }
        curves.push(SigmaCurve { name: format!("c{}", c), kind: SigmaKind::Pants(c), crossings: x });
    }
    let mut meets = Vec::with_capacity(n);
    for (c, pc) in pd.curves().iter().enumerate() {
        let mut x = Vec::new();
        if pc.is_handle() {
            add_crossing(&mut x, t.piece_at(c, 1));
            meets.push(1);
        } else {
            add_crossing(&mut x, t.piece_at(c, 1));
            add_crossing(&mut x, t.piece_at(c, 5));
            for side in [pc.a, pc.b] {
                if let Some(b) = return_route(t, side) {
                    add_crossing(&mut x, b);
                }
            }
            meets.push(2);
        }
        curves.push(SigmaCurve { name: format!("c{}'", c), kind: SigmaKind::Transverse(c), crossings: x });
    }
    SigmaSystem { curves, meets, track: t.clone() }
}

/// Sum over crossings of the branch weights.
pub fn intersect(c: &SigmaCurve, w: &[Q]) -> Q {
    c.crossings.iter().map(|&(b, m)| &w[b] * q(m as i64)).sum()
}

impl SigmaSystem {
    pub fn len(&self) -> usize {
        self.curves.len()
    }
    pub fn is_empty(&self) -> bool {
        self.curves.is_empty()
    }

    /// i(σ, w) for every curve of σ.
    pub fn intersections(&self, w: &[Q]) -> Vec<Q> {
        self.curves.iter().map(|c| intersect(c, w)).collect()
    }

    /// |σ| x (branches) matrix of crossing multiplicities.
    pub fn intersection_matrix(&self) -> QMatrix {
        let e = self.track.branches.len();
        let rows: Vec<Vec<Q>> = self
            .curves
            .iter()
            .map(|c| {
                let mut r = vec![Q::zero(); e];
                for &(b, m) in &c.crossings {
                    r[b] += q(m as i64);
                }
                r
            })
            .collect();
        QMatrix::from_rows(&rows)
    }

    /// Rank of w ↦ i(σ, w) on the weight space.
    pub fn restricted_rank(&self) -> Result<usize> {
        let basis = weight_space_basis(&self.track)?;
        let m = self.intersection_matrix();
        let cols: Vec<Vec<Q>> = basis.iter().map(|b| m.mul_vec(b)).collect();
        Ok(QMatrix::from_rows(&cols).rank())
    }
}

/// Linear form in the σ values.
#[derive(Clone, Debug)]
struct Form(Vec<Q>);

impl Add for Form {
    type Output = Form;
    fn add(self, o: Form) -> Form {
        Form(self.0.iter().zip(&o.0).map(|(a, b)| a + b).collect())
    }
}

impl Sub for Form {
    type Output = Form;
    fn sub(self, o: Form) -> Form {
        Form(self.0.iter().zip(&o.0).map(|(a, b)| a - b).collect())
    }
}

impl Form {
    fn scale(&self, k: &Q) -> Form {
        Form(self.0.iter().map(|a| a * k).collect())
    }
}

/// Exact linear inverse A of w ↦ i(σ, w): branches x |σ|.
///
/// Interior weights come from the pants-curve values alone. Each pants
/// curve's pieces are a common unknown plus offsets fixed by its switches;
/// the transverse curve then determines that unknown. The result is checked
/// against a basis of the weight space.
pub fn recovery_matrix(sigma: &SigmaSystem) -> Result<QMatrix> {
    let t = &sigma.track;
    let n = t.pieces.len();
    let k = sigma.len();
    let unit = |i: usize| {
        let mut v = vec![Q::zero(); k];
        v[i] = q(1);
        Form(v)
    };
    let half = q(1) / q(2);
    let interior = interior_from_cuffs(t, unit, |f: Form| f.scale(&half));
    let mut rows: Vec<Option<Form>> = interior.clone();
    for c in 0..n {
        let offs: Vec<Form> = piece_offsets(t, c)
            .iter()
            .map(|o| {
                o.iter().fold(Form(vec![Q::zero(); k]), |acc, &(b, s)| {
                    let f = interior[b].clone().expect("interior branch");
                    if s > 0 {
                        acc + f
                    } else {
                        acc - f
                    }
                })
            })
            .collect();
        let tc = sigma
            .curves
            .iter()
            .position(|x| x.kind == SigmaKind::Transverse(c))
            .ok_or_else(|| Error::SingularSystem(format!("no transverse curve for c{}", c)))?;
        let mut acc = unit(tc);
        let mut meets = 0u32;
        for &(b, m) in &sigma.curves[tc].crossings {
            let mq = q(m as i64);
            match (t.branches[b].kind, &interior[b]) {
                (BranchKind::Curve { curve, piece }, _) if curve == c => {
                    meets += m;
                    acc = acc - offs[piece].scale(&mq);
                }
                (_, Some(f)) => acc = acc - f.scale(&mq),
                _ => {
                    return Err(Error::SingularSystem(format!(
                        "transverse curve of c{} crosses {} outside its pants",
                        c, t.branches[b].name
                    )))
                }
            }
        }
        if meets == 0 || meets != sigma.meets[c] {
            return Err(Error::SingularSystem(format!(
                "transverse curve of c{} meets it {} times, expected {}",
                c, meets, sigma.meets[c]
            )));
        }
        let base = acc.scale(&(q(1) / q(meets as i64)));
        for (j, &b) in t.pieces[c].iter().enumerate() {
            rows[b] = Some(base.clone() + offs[j].clone());
        }
    }
    let rows: Vec<Vec<Q>> = rows.into_iter().map(|r| r.expect("every branch recovered").0).collect();
    let a = QMatrix::from_rows(&rows);

    let im = sigma.intersection_matrix();
    for (i, w) in weight_space_basis(t)?.iter().enumerate() {
        if a.mul_vec(&im.mul_vec(w)) != *w {
            return Err(Error::SingularSystem(format!("recovery fails on basis vector {}", i)));
        }
    }
    Ok(a)
}
