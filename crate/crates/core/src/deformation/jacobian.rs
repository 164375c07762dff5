//! Derivatives of lengths and area in real period coordinates
//! (Re c_0, Im c_0, Re c_1, ...), and their restriction to the slice
//! {Im c_0 = const, area = const}.

use crate::error::{Error, Result};
use crate::geodesics::{length_gradient, stability_radius, Geodesic};
use crate::linalg::{null_space, numeric_rank, singular_values};
use crate::numeric::C64;
use crate::periods::PeriodChart;
use crate::surface::Slot;
use nalgebra::DMatrix;
use serde::Serialize;

pub const RANK_TOL: f64 = 1e-9;

/// Chart coefficients of the two first slot vectors of every triangle.
pub(crate) fn triangle_coeffs(chart: &PeriodChart) -> Vec<[Vec<f64>; 2]> {
    let s = chart.base();
    let coeff = |h: Slot| {
        let mut c = vec![0i64; s.edges().len()];
        c[s.edge_of(h)] = s.slot_edge_sign(h);
        chart.pull_back(&c)
    };
    (0..s.n_tris()).map(|t| [coeff(Slot::new(t, 0)), coeff(Slot::new(t, 1))]).collect()
}

fn eval(a: &[f64], coords: &[C64]) -> C64 {
    a.iter().zip(coords).map(|(k, c)| c * *k).sum()
}

pub fn area_at(tris: &[[Vec<f64>; 2]], coords: &[C64]) -> f64 {
    tris.iter()
        .map(|[a, b]| {
            let (v0, v1) = (eval(a, coords), eval(b, coords));
            0.5 * (v0.re * v1.im - v0.im * v1.re)
        })
        .sum()
}

pub fn area_gradient_at(tris: &[[Vec<f64>; 2]], coords: &[C64]) -> Vec<f64> {
    let mut g = vec![0.0; 2 * coords.len()];
    for [a, b] in tris {
        let (v0, v1) = (eval(a, coords), eval(b, coords));
        for j in 0..coords.len() {
            g[2 * j] += 0.5 * (a[j] * v1.im - b[j] * v0.im);
            g[2 * j + 1] += 0.5 * (b[j] * v0.re - a[j] * v1.re);
        }
    }
    g
}

pub fn area_gradient(chart: &PeriodChart) -> Result<Vec<f64>> {
    let coords = chart.coordinates(chart.base())?;
    Ok(area_gradient_at(&triangle_coeffs(chart), &coords))
}

/// Rows of the slice constraints: e_{Im c_0} and ∇area.
pub fn slice_constraints(chart: &PeriodChart) -> Result<DMatrix<f64>> {
    let n = chart.real_dim();
    let mut m = DMatrix::zeros(2, n);
    m[(0, 1)] = 1.0;
    for (j, x) in area_gradient(chart)?.into_iter().enumerate() {
        m[(1, j)] = x;
    }
    Ok(m)
}

/// Orthonormal basis (columns) of the slice tangent space.
pub fn slice_tangent(chart: &PeriodChart) -> Result<DMatrix<f64>> {
    let t = null_space(&slice_constraints(chart)?, RANK_TOL);
    if t.ncols() != chart.slice_dim() {
        return Err(Error::RankDefect { rank: chart.real_dim() - t.ncols(), expected: 2 });
    }
    Ok(t)
}

/// Length gradients with each piece recomputed from `coords`.
pub fn length_gradients_at(chart: &PeriodChart, geods: &[Geodesic], coords: &[C64]) -> DMatrix<f64> {
    let mut m = DMatrix::zeros(geods.len(), chart.real_dim());
    for (i, g) in geods.iter().enumerate() {
        for p in &g.pieces {
            let a = chart.pull_back(&p.coeffs);
            let z = eval(&a, coords);
            let u = z / z.norm();
            for (j, aj) in a.iter().enumerate() {
                m[(i, 2 * j)] += aj * u.re;
                m[(i, 2 * j + 1)] += aj * u.im;
            }
        }
    }
    m
}

pub fn lengths_at(chart: &PeriodChart, geods: &[Geodesic], coords: &[C64]) -> Vec<f64> {
    geods.iter().map(|g| g.pieces.iter().map(|p| eval(&chart.pull_back(&p.coeffs), coords).norm()).sum()).collect()
}

#[derive(Clone, Debug, Serialize)]
pub struct SpectrumJacobian {
    /// |Σ| x real_dim, in (Re c_0, Im c_0, ...) order.
    pub full: Vec<Vec<f64>>,
    /// |Σ| x slice_dim, `full` times the slice tangent basis.
    pub slice: Vec<Vec<f64>>,
    pub singular_values: Vec<f64>,
    pub rank: usize,
    pub slice_dim: usize,
    /// Null-space basis in real chart coordinates.
    pub null_space: Vec<Vec<f64>>,
    /// Smallest stability radius over the curves.
    pub radius: f64,
}

impl SpectrumJacobian {
    pub fn nullity(&self) -> usize {
        self.slice_dim - self.rank
    }
}

fn rows(m: &DMatrix<f64>) -> Vec<Vec<f64>> {
    (0..m.nrows()).map(|i| m.row(i).iter().copied().collect()).collect()
}

pub fn spectrum_jacobian(chart: &PeriodChart, geods: &[Geodesic]) -> Result<SpectrumJacobian> {
    let mut radius = f64::INFINITY;
    for (i, g) in geods.iter().enumerate() {
        let r = stability_radius(chart, g).radius;
        if r <= 0.0 {
            return Err(Error::UnstablePoint(format!("curve {} has stability radius 0", i)));
        }
        radius = radius.min(r);
    }
    let mut full = DMatrix::zeros(geods.len(), chart.real_dim());
    for (i, g) in geods.iter().enumerate() {
        for (j, x) in length_gradient(chart, g).into_iter().enumerate() {
            full[(i, j)] = x;
        }
    }
    let t = slice_tangent(chart)?;
    let slice = &full * &t;
    let sv = singular_values(&slice);
    let rank = numeric_rank(&slice, RANK_TOL);
    let ns = &t * null_space(&slice, RANK_TOL);
    Ok(SpectrumJacobian {
        full: rows(&full),
        slice: rows(&slice),
        singular_values: sv,
        rank,
        slice_dim: t.ncols(),
        null_space: (0..ns.ncols()).map(|j| ns.column(j).iter().copied().collect()).collect(),
        radius,
    })
}

#[derive(Clone, Debug, Serialize)]
pub struct NullityReport {
    pub slice_dim: usize,
    pub rank: usize,
    pub nullity: usize,
    pub curves: usize,
    /// 2k₀ − 2g + ε + 1
    pub bound: i64,
    pub nullity_meets_bound: bool,
    /// Largest gap (radians, mod π) between piece directions of Σ.
    pub direction_gap: f64,
    /// Σ avoids an open arc of directions of width at least `GAP_PROXY`.
    pub hypothesis_proxy: bool,
}

pub const GAP_PROXY: f64 = 0.05;

/// Largest arc of directions mod π containing no piece direction.
pub fn direction_gap(geods: &[Geodesic]) -> f64 {
    use std::f64::consts::PI;
    let mut d: Vec<f64> = geods.iter().flat_map(|g| g.pieces.iter().map(|p| p.z.arg().rem_euclid(PI))).collect();
    if d.is_empty() {
        return PI;
    }
    d.sort_by(|a, b| a.partial_cmp(b).unwrap());
    let mut gap = d[0] + PI - d[d.len() - 1];
    for w in d.windows(2) {
        gap = gap.max(w[1] - w[0]);
    }
    gap
}

pub fn nullity_report(chart: &PeriodChart, geods: &[Geodesic], jac: &SpectrumJacobian) -> NullityReport {
    let sig = chart.signature();
    let bound = 2 * sig.k0() as i64 - 2 * sig.genus + sig.holonomy as i64 + 1;
    let gap = direction_gap(geods);
    NullityReport {
        slice_dim: jac.slice_dim,
        rank: jac.rank,
        nullity: jac.nullity(),
        curves: geods.len(),
        bound,
        nullity_meets_bound: jac.nullity() as i64 >= bound,
        direction_gap: gap,
        hypothesis_proxy: gap >= GAP_PROXY,
    }
}
