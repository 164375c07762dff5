//! Intersection of a geodesic with the vertical foliation of e^{2iθ}q and the
//! recovery of its length by integrating over θ.
//!
//! The transverse measure of the vertical foliation of dz² is |dx|, so a
//! straight piece with period z meets the rotated foliation in
//! |Re(e^{iθ} z)|.

use crate::geodesics::Geodesic;
use crate::numeric::C64;
use serde::Serialize;
use std::f64::consts::PI;

pub fn foliation_intersection(g: &Geodesic, theta: f64) -> f64 {
    let r = C64::from_polar(1.0, theta);
    g.pieces.iter().map(|p| (r * p.z).re.abs()).sum()
}

/// ½∫₀^π i(ν(θ), c) dθ integrated piecewise in closed form. Between the
/// zeros of the integrands the sum is Re(e^{iθ}Z) for a fixed signed sum Z,
/// whose antiderivative is Im(e^{iθ}Z).
pub fn integral_exact(g: &Geodesic) -> f64 {
    let mut cuts: Vec<f64> = vec![0.0, PI];
    for p in &g.pieces {
        if p.z.norm() == 0.0 {
            continue;
        }
        let t = (PI / 2.0 - p.z.arg()).rem_euclid(PI);
        cuts.push(t);
    }
    cuts.sort_by(|a, b| a.partial_cmp(b).unwrap());
    let mut total = 0.0;
    for w in cuts.windows(2) {
        let (a, b) = (w[0], w[1]);
        if b <= a {
            continue;
        }
        let mid = C64::from_polar(1.0, 0.5 * (a + b));
        let z: C64 = g.pieces.iter().map(|p| if (mid * p.z).re >= 0.0 { p.z } else { -p.z }).sum();
        total += (C64::from_polar(1.0, b) * z).im - (C64::from_polar(1.0, a) * z).im;
    }
    0.5 * total
}

fn simpson<F: Fn(f64) -> f64>(
    f: &F,
    a: f64,
    b: f64,
    fa: f64,
    fm: f64,
    fb: f64,
    whole: f64,
    tol: f64,
    depth: u32,
) -> f64 {
    let m = 0.5 * (a + b);
    let (lm, rm) = (0.5 * (a + m), 0.5 * (m + b));
    let (flm, frm) = (f(lm), f(rm));
    let left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
    let right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
    let delta = left + right - whole;
    if depth == 0 || delta.abs() <= 15.0 * tol {
        return left + right + delta / 15.0;
    }
    simpson(f, a, m, fa, flm, fm, left, 0.5 * tol, depth - 1)
        + simpson(f, m, b, fm, frm, fb, right, 0.5 * tol, depth - 1)
}

/// The same integral by adaptive Simpson quadrature, blind to the kinks.
pub fn integral_quadrature(g: &Geodesic, tol: f64) -> f64 {
    let f = |t: f64| foliation_intersection(g, t);
    let (a, b) = (0.0, PI);
    let (fa, fm, fb) = (f(a), f(0.5 * (a + b)), f(b));
    let whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
    0.5 * simpson(&f, a, b, fa, fm, fb, whole, tol, 48)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum IntegrationMode {
    Exact,
    Quadrature,
}

#[derive(Clone, Debug, Serialize)]
pub struct LengthFormulaCheck {
    pub mode: IntegrationMode,
    pub length: f64,
    pub integral: f64,
    /// |integral − length| / length
    pub residual: f64,
}

pub fn verify_length_formula(g: &Geodesic, mode: IntegrationMode) -> LengthFormulaCheck {
    let integral = match mode {
        IntegrationMode::Exact => integral_exact(g),
        IntegrationMode::Quadrature => integral_quadrature(g, 1e-13 * g.length.max(1.0)),
    };
    LengthFormulaCheck { mode, length: g.length, integral, residual: (integral - g.length).abs() / g.length }
}
