//! Saddle triangulations and finite sets of curves whose lengths determine
//! the flat metric near a point.

pub mod certificate;
pub mod delaunay;
pub mod segment;

pub use certificate::{certificate_for, Case, CertOptions, Certificate, Searcher};
pub use delaunay::{flip, is_delaunay, saddle_triangulation, SaddleTriangulation};
pub use segment::{angle_between, direction_segment, Segment, SegmentIndex};

use crate::deformation::{spectrum_jacobian, SpectrumJacobian};
use crate::error::{Error, Result};
use crate::geodesics::{tighten, CurveClass, Geodesic};
use crate::numeric::C64;
use crate::periods::PeriodChart;
use crate::surface::Surface;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

#[derive(Clone, Debug, Serialize)]
pub struct RigiditySet {
    /// The triangulated surface all curves live on.
    #[serde(skip)]
    pub surface: Surface,
    pub flips: usize,
    pub edge_count: usize,
    pub expected_edges: i64,
    pub certificates: Vec<Certificate>,
    /// Distinct certificate curves.
    #[serde(skip)]
    pub sigma: Vec<CurveClass>,
    #[serde(skip)]
    pub geodesics: Vec<Geodesic>,
    pub sigma_size: usize,
    /// 15(2g + k − 2)
    pub sigma_bound: i64,
    pub rank: usize,
    /// 4g + 2k + ε − 5
    pub expected_rank: i64,
    pub singular_values: Vec<f64>,
    /// Smallest validity radius over the certificates.
    pub radius: f64,
    pub max_residual: f64,
}

impl RigiditySet {
    pub fn counts_ok(&self) -> bool {
        self.edge_count as i64 == self.expected_edges && self.sigma_size as i64 <= self.sigma_bound
    }
    pub fn rank_ok(&self) -> bool {
        self.rank as i64 == self.expected_rank
    }
}

fn same_curve(s: &Surface, a: &CurveClass, b: &CurveClass) -> bool {
    a.canonical() == b.canonical() || a.canonical() == b.reversed(s).canonical()
}

/// Budget defaults: start at the longest triangulation edge and double
/// five times.
pub fn default_options(s: &Surface) -> CertOptions {
    let longest = s.edges().iter().map(|&h| s.vec(h).norm()).fold(0.0, f64::max);
    CertOptions { l0: longest * (1.0 + 1e-9), doublings: 5, max_eps_halvings: 6 }
}

pub fn certify_surface(s: &Surface) -> Result<RigiditySet> {
    let tri = saddle_triangulation(s)?;
    let opts = default_options(&tri.surface);
    certify_triangulated(&tri.surface, tri.flips, opts)
}

/// Certificates on a surface whose triangulation is used as is.
pub fn certify_triangulated(t: &Surface, flips: usize, opts: CertOptions) -> Result<RigiditySet> {
    let sig = t.stratum_signature()?;
    let chart = PeriodChart::build(t)?;
    let mut se = Searcher::new(t, opts);
    let mut certs = Vec::new();
    for e in 0..t.edges().len() {
        certs.push(certificate_for(&mut se, &chart, e)?);
    }
    let mut sigma: Vec<CurveClass> = Vec::new();
    let mut geods = Vec::new();
    for c in &certs {
        for (k, g) in c.curves.iter().zip(&c.geodesics) {
            if !sigma.iter().any(|x| same_curve(t, x, k)) {
                sigma.push(k.clone());
                geods.push(g.clone());
            }
        }
    }
    let jac: SpectrumJacobian = spectrum_jacobian(&chart, &geods)?;
    let radius = certs.iter().map(|c| c.radius).fold(f64::INFINITY, f64::min);
    let max_residual = certs.iter().map(|c| c.residual).fold(0.0, f64::max);
    Ok(RigiditySet {
        surface: t.clone(),
        flips,
        edge_count: t.edges().len(),
        expected_edges: 6 * sig.genus + 3 * sig.k as i64 - 6,
        sigma_size: sigma.len(),
        sigma_bound: 15 * (2 * sig.genus + sig.k as i64 - 2),
        certificates: certs,
        sigma,
        geodesics: geods,
        rank: jac.rank,
        expected_rank: 4 * sig.genus + 2 * sig.k as i64 + sig.holonomy as i64 - 5,
        singular_values: jac.singular_values,
        radius,
        max_residual,
    })
}

#[derive(Clone, Debug, Serialize)]
pub struct PerturbationAudit {
    pub trials: usize,
    /// Largest relative identity residual over all certificates and trials.
    pub max_residual: f64,
    /// Trials in which some certificate curve changed its crossing sequence.
    pub shape_changes: usize,
}

/// Re-checks every certificate identity at random points of sup-norm below
/// `scale` times the validity radius, with lengths from fresh tightening.
pub fn audit_perturbations(set: &RigiditySet, trials: usize, scale: f64, seed: u64) -> Result<PerturbationAudit> {
    let chart = PeriodChart::build(&set.surface)?;
    let r = scale * set.radius;
    if !(r > 0.0) {
        return Err(Error::UnstablePoint("validity radius is 0".into()));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut max_residual = 0.0f64;
    let mut shape_changes = 0;
    for _ in 0..trials {
        let d: Vec<C64> = (0..chart.dim())
            .map(|_| C64::from_polar(r * rng.gen::<f64>(), rng.gen_range(0.0..std::f64::consts::TAU)))
            .collect();
        let p = chart.perturb(&d, true)?;
        let mut changed = false;
        for c in &set.certificates {
            let mut lengths = Vec::new();
            for (k, g0) in c.curves.iter().zip(&c.geodesics) {
                let g = tighten(&p, k)?;
                changed |= g.corridor != g0.corridor;
                lengths.push(g.length);
            }
            let h = p.edges()[c.edge];
            let edge = p.vec(h).norm();
            max_residual = max_residual.max((c.combination(&lengths) - edge).abs() / edge);
        }
        if changed {
            shape_changes += 1;
        }
    }
    Ok(PerturbationAudit { trials, max_residual, shape_changes })
}
