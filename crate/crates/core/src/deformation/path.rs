//! Predictor-corrector continuation along a level set of λ_Σ in the slice.

use super::jacobian::{area_at, area_gradient_at, length_gradients_at, lengths_at, spectrum_jacobian, triangle_coeffs};
use crate::error::{Error, Result};
use crate::geodesics::{tighten, CurveClass, Geodesic};
use crate::linalg::pinv_solve;
use crate::numeric::C64;
use crate::periods::PeriodChart;
use crate::surface::Surface;
use nalgebra::{DMatrix, DVector};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

#[derive(Clone, Debug, Serialize)]
pub struct PathOptions {
    pub steps: usize,
    pub h: f64,
    pub max_newton: usize,
    pub seed: u64,
}

impl Default for PathOptions {
    fn default() -> Self {
        PathOptions { steps: 50, h: 1e-3, max_newton: 10, seed: 0 }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct PathStep {
    pub coords: Vec<C64>,
    pub lengths: Vec<f64>,
    pub h: f64,
    pub newton: usize,
    /// max_i |ℓ_i(this step) − ℓ_i(previous step)|, lengths from fresh tightening.
    pub drift: f64,
    pub nullity: usize,
}

#[derive(Clone, Debug, Serialize)]
pub struct IsospectralPath {
    pub start_lengths: Vec<f64>,
    pub start_coords: Vec<C64>,
    pub steps: Vec<PathStep>,
    pub max_step_drift: f64,
    /// Σ of per-step drifts.
    pub cumulative_drift: f64,
    /// max_i |ℓ_i(end) − ℓ_i(start)|.
    pub total_drift: f64,
    /// Step at which the path hit a stability wall, if it did.
    pub wall: Option<usize>,
    #[serde(skip)]
    pub surfaces: Vec<Surface>,
}

struct Point {
    surface: Surface,
    chart: PeriodChart,
    geods: Vec<Geodesic>,
    coords: Vec<C64>,
    null: Vec<Vec<f64>>,
    radius: f64,
}

fn point(surface: Surface, curves: &[CurveClass]) -> Result<Point> {
    let chart = PeriodChart::build(&surface)?;
    let geods = curves.iter().map(|c| tighten(&surface, c)).collect::<Result<Vec<_>>>()?;
    let jac = spectrum_jacobian(&chart, &geods)?;
    let coords = chart.coordinates(&surface)?;
    Ok(Point { surface, chart, geods, coords, null: jac.null_space, radius: jac.radius })
}

fn same_shape(a: &[Geodesic], b: &[Geodesic]) -> bool {
    a.iter().zip(b).all(|(x, y)| x.corridor == y.corridor && x.is_cylinder() == y.is_cylinder())
}

/// Projection of `v` onto the span of the orthonormal `basis`, normalized.
fn project(v: &[f64], basis: &[Vec<f64>]) -> Option<Vec<f64>> {
    let mut out = vec![0.0; v.len()];
    for b in basis {
        let k: f64 = v.iter().zip(b).map(|(x, y)| x * y).sum();
        for (o, y) in out.iter_mut().zip(b) {
            *o += k * y;
        }
    }
    let n = out.iter().map(|x| x * x).sum::<f64>().sqrt();
    if n < 1e-6 {
        return None;
    }
    Some(out.into_iter().map(|x| x / n).collect())
}

fn to_real(c: &[C64]) -> Vec<f64> {
    c.iter().flat_map(|z| [z.re, z.im]).collect()
}

fn to_complex(x: &[f64]) -> Vec<C64> {
    x.chunks(2).map(|p| C64::new(p[0], p[1])).collect()
}

/// Newton-corrects `x` back to ℓ = target, Im c_0 = im0, area = area0 with
/// the pieces of `geods` held fixed. Returns the number of iterations.
fn correct(p: &Point, x: &mut Vec<f64>, target: &[f64], im0: f64, area0: f64, max_newton: usize) -> usize {
    let tris = triangle_coeffs(&p.chart);
    let k = target.len();
    for it in 0..max_newton {
        let c = to_complex(x);
        let l = lengths_at(&p.chart, &p.geods, &c);
        let mut f = DVector::zeros(k + 2);
        for i in 0..k {
            f[i] = l[i] - target[i];
        }
        f[k] = c[0].im - im0;
        f[k + 1] = area_at(&tris, &c) - area0;
        if f.amax() <= 1e-15 * area0.max(1.0) {
            return it;
        }
        let jl = length_gradients_at(&p.chart, &p.geods, &c);
        let mut j = DMatrix::zeros(k + 2, x.len());
        j.view_mut((0, 0), (k, x.len())).copy_from(&jl);
        j[(k, 1)] = 1.0;
        for (i, g) in area_gradient_at(&tris, &c).into_iter().enumerate() {
            j[(k + 1, i)] = g;
        }
        let dx = pinv_solve(&j, &f);
        for (xi, d) in x.iter_mut().zip(dx.iter()) {
            *xi -= d;
        }
    }
    max_newton
}

/// Follows a path of constant λ_Σ from the slice normalization of `s`.
pub fn follow_isospectral_path(s: &Surface, curves: &[CurveClass], opts: &PathOptions) -> Result<IsospectralPath> {
    let s0 = PeriodChart::build(s)?.slice_normalize(s)?;
    let mut cur = point(s0, curves)?;
    if cur.null.is_empty() {
        return Err(Error::NullityZero);
    }
    let target: Vec<f64> = cur.geods.iter().map(|g| g.length).collect();
    let im0 = cur.coords[0].im;
    let area0 = cur.surface.area();
    let mut rng = ChaCha8Rng::seed_from_u64(opts.seed);
    let seed_dir: Vec<f64> = (0..cur.chart.real_dim()).map(|_| rng.gen_range(-1.0..1.0)).collect();
    let mut dir = project(&seed_dir, &cur.null).ok_or(Error::NullityZero)?;

    let mut path = IsospectralPath {
        start_lengths: target.clone(),
        start_coords: cur.coords.clone(),
        steps: Vec::new(),
        max_step_drift: 0.0,
        cumulative_drift: 0.0,
        total_drift: 0.0,
        wall: None,
        surfaces: vec![cur.surface.clone()],
    };
    let mut prev = target.clone();

    'steps: for step in 0..opts.steps {
        let mut h = opts.h.min(0.5 * cur.radius);
        for _attempt in 0..2 {
            let mut x: Vec<f64> = to_real(&cur.coords).iter().zip(&dir).map(|(a, d)| a + h * d).collect();
            let newton = correct(&cur, &mut x, &target, im0, area0, opts.max_newton);
            let c = to_complex(&x);
            let delta: Vec<C64> = c.iter().zip(&cur.coords).map(|(a, b)| a - b).collect();
            let next = cur
                .chart
                .perturb(&delta, true)
                .and_then(|surf| point(surf, curves))
                .ok()
                .filter(|n| same_shape(&n.geods, &cur.geods) && n.chart.basis() == cur.chart.basis());
            let Some(next) = next else {
                h *= 0.5;
                continue;
            };
            let Some(d) = project(&dir, &next.null) else {
                return Err(Error::NullityZero);
            };
            let lengths: Vec<f64> = next.geods.iter().map(|g| g.length).collect();
            let drift = lengths.iter().zip(&prev).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max);
            path.max_step_drift = path.max_step_drift.max(drift);
            path.cumulative_drift += drift;
            path.steps.push(PathStep {
                coords: next.coords.clone(),
                lengths: lengths.clone(),
                h,
                newton,
                drift,
                nullity: next.null.len(),
            });
            path.surfaces.push(next.surface.clone());
            prev = lengths;
            dir = d;
            cur = next;
            continue 'steps;
        }
        path.wall = Some(step);
        break;
    }
    path.total_drift = prev.iter().zip(&target).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max);
    Ok(path)
}

impl IsospectralPath {
    /// The path as an error when it stopped at a wall.
    pub fn check(&self) -> Result<()> {
        match self.wall {
            Some(k) => Err(Error::StabilityWall(k)),
            None => Ok(()),
        }
    }

    /// Waypoints as CSV: step, coordinates, drift.
    pub fn waypoints_csv(&self) -> String {
        let m = self.start_coords.len();
        let mut out = String::from("step");
        for j in 0..m {
            out += &format!(",re_c{},im_c{}", j, j);
        }
        out += ",drift\n";
        let row = |k: usize, c: &[C64], d: f64| {
            let mut r = k.to_string();
            for z in c {
                r += &format!(",{:.15e},{:.15e}", z.re, z.im);
            }
            r + &format!(",{:.3e}\n", d)
        };
        out += &row(0, &self.start_coords, 0.0);
        for (k, s) in self.steps.iter().enumerate() {
            out += &row(k + 1, &s.coords, s.drift);
        }
        out
    }
}
