//! Radius in period coordinates within which a geodesic keeps its shape.
//!
//! A perturbation δ of the chart coordinates with max_j |δ_j| < r moves a
//! developed vector with chart coefficients a by at most r·Σ|a_j|. The
//! radius is the largest r for which no junction angle can reach π, no
//! corridor vertex can reach a piece and no triangle can degenerate, halved
//! for safety.

use super::geodesic::{Geodesic, GeodesicKind};
use crate::numeric::{cross, C64};
use crate::periods::PeriodChart;
use crate::surface::Slot;
use serde::Serialize;
use std::f64::consts::FRAC_PI_2;

#[derive(Clone, Debug, Serialize)]
pub struct StabilityRadius {
    pub radius: f64,
    /// Smallest junction slack (angle minus π), if there are junctions.
    pub angle_slack: Option<f64>,
    /// Smallest distance from a corridor vertex to the geodesic.
    pub clearance: f64,
}

fn l1(v: &[f64]) -> f64 {
    v.iter().map(|x| x.abs()).sum()
}

/// Largest r with k_z k_w r² + (k_z|w| + |z| k_w) r < |cross(z, w)|.
fn cross_radius(z: C64, kz: f64, w: C64, kw: f64) -> f64 {
    let c = cross(z, w).abs();
    let a = kz * kw;
    let b = kz * w.norm() + z.norm() * kw;
    if c == 0.0 {
        return 0.0;
    }
    if a == 0.0 {
        return if b == 0.0 { f64::INFINITY } else { c / b };
    }
    (-b + (b * b + 4.0 * a * c).sqrt()) / (2.0 * a)
}

pub fn stability_radius(chart: &PeriodChart, g: &Geodesic) -> StabilityRadius {
    let s = chart.base();
    let mut r = f64::INFINITY;
    let mut clearance = f64::INFINITY;
    let mut angle_slack: Option<f64> = None;
    let ks: Vec<f64> = g.pieces.iter().map(|p| l1(&chart.pull_back(&p.coeffs))).collect();

    for (j, jn) in g.junctions.iter().enumerate() {
        if jn.uturn {
            continue;
        }
        let slack = jn.slack();
        angle_slack = Some(angle_slack.map_or(slack, |a: f64| a.min(slack)));
        if slack <= 0.0 {
            r = 0.0;
            continue;
        }
        let n = g.pieces.len();
        for p in [j, (j + 1) % n] {
            let z = g.pieces[p].z.norm();
            if ks[p] > 0.0 {
                r = r.min((slack / 2.0).min(FRAC_PI_2).sin() * z / ks[p]);
            }
        }
    }

    let pieces = if g.is_cylinder() { &g.pieces[..0] } else { &g.pieces[..] };
    for (p, piece) in pieces.iter().enumerate() {
        for (w, sym, _) in &piece.corridor {
            clearance = clearance.min(cross(piece.z, *w).abs() / piece.z.norm());
            let kw = l1(&chart.pull_back(sym));
            r = r.min(cross_radius(piece.z, ks[p], *w, kw));
        }
    }

    if let GeodesicKind::Cylinder { .. } = g.kind {
        let piece = &g.pieces[0];
        let (lefts, rights): (Vec<_>, Vec<_>) = piece.corridor.iter().partition(|c| c.2 > 0);
        for (wl, sl, _) in &lefts {
            for (wr, sr, _) in &rights {
                let d: Vec<i64> = sl.iter().zip(sr.iter()).map(|(a, b)| a - b).collect();
                let kd = l1(&chart.pull_back(&d));
                r = r.min(cross_radius(piece.z, ks[0], *wl - *wr, kd));
            }
        }
    }

    // Every triangle keeps positive area.
    for t in 0..s.n_tris() {
        let h0 = Slot::new(t, 0);
        let h1 = Slot::new(t, 1);
        let coeff = |h: Slot| {
            let mut c = vec![0i64; s.edges().len()];
            c[s.edge_of(h)] = s.slot_edge_sign(h);
            l1(&chart.pull_back(&c))
        };
        r = r.min(cross_radius(s.vec(h0), coeff(h0), s.vec(h1), coeff(h1)));
    }

    StabilityRadius { radius: 0.5 * r, angle_slack, clearance }
}

/// Gradient of the length with respect to the real chart coordinates
/// (Re c_0, Im c_0, Re c_1, ...), valid inside the stability radius.
pub fn length_gradient(chart: &PeriodChart, g: &Geodesic) -> Vec<f64> {
    let mut grad = vec![0.0; chart.real_dim()];
    for p in &g.pieces {
        let a = chart.pull_back(&p.coeffs);
        let u = p.z / p.z.norm();
        for (j, aj) in a.iter().enumerate() {
            grad[2 * j] += aj * u.re;
            grad[2 * j + 1] += aj * u.im;
        }
    }
    grad
}

/// Length as Σ|z_s| with each z_s recomputed from chart coordinates.
pub fn length_in_chart(chart: &PeriodChart, g: &Geodesic, coords: &[C64]) -> f64 {
    g.pieces
        .iter()
        .map(|p| {
            let a = chart.pull_back(&p.coeffs);
            a.iter().zip(coords).map(|(aj, c)| c * *aj).sum::<C64>().norm()
        })
        .sum()
}
