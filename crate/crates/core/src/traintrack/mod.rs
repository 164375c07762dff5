//! Train tracks on pants decompositions and their weight coordinates.

pub mod pants;
pub mod sigma;
pub mod track;

pub use pants::{parse_pants, Cuff, CuffRef, PantsCurve, PantsDecomposition, PantsKind};
pub use sigma::{intersect, recovery_matrix, sigma_system, SigmaCurve, SigmaKind, SigmaSystem};
pub use track::{build_tracks, positive_solution, weight_space_basis, Branch, BranchKind, TrainTrack, Turn};

use crate::numeric::Q;

/// Weights as CSV with one `branch,weight` row per branch.
pub fn weights_csv(t: &TrainTrack, w: &[Q]) -> String {
    let mut out = String::from("branch,weight\n");
    for (b, x) in t.branches.iter().zip(w) {
        out.push_str(&format!("{},{}\n", b.name, crate::numeric::fmt_q(x)));
    }
    out
}

/// Intersection numbers as CSV with one `curve,intersection` row per curve.
pub fn intersections_csv(s: &SigmaSystem, v: &[Q]) -> String {
    let mut out = String::from("curve,intersection\n");
    for (c, x) in s.curves.iter().zip(v) {
        out.push_str(&format!("{},{}\n", c.name, crate::numeric::fmt_q(x)));
    }
    out
}

/// Weight vector of the pants curve `c`: one on each of its pieces.
pub fn pants_curve_weights(t: &TrainTrack, c: usize) -> Vec<Q> {
    let mut w = vec![Q::from_integer(0.into()); t.branches.len()];
    for &b in &t.pieces[c] {
        w[b] = Q::from_integer(1.into());
    }
    w
}
