//! Length certificates for the edges of a saddle triangulation: each edge
//! length is a fixed rational combination of lengths of closed geodesics
//! that keep their shape near the base point.

use super::segment::{junction_angles, keep_for, search, Segment, SegmentIndex, STRICT};
use crate::error::{Error, Result};
use crate::geodesics::{stability_radius, tighten, CurveClass, Geodesic, Keep, SaddleConnection};
use crate::periods::PeriodChart;
use crate::surface::{Corner, Surface};
use serde::Serialize;
use std::f64::consts::PI;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Case {
    /// Loop at an unmarked zero that is itself a closed geodesic.
    Loop,
    /// Both ends unmarked (also used for loops failing the closed-curve
    /// angle condition).
    Unmarked,
    /// Both ends marked.
    Marked,
    /// Exactly one end marked.
    OneMarked,
}

impl Case {
    pub fn number(self) -> u8 {
        match self {
            Case::Loop => 1,
            Case::Unmarked => 2,
            Case::Marked => 3,
            Case::OneMarked => 4,
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct Certificate {
    pub edge: usize,
    pub start: usize,
    pub end: usize,
    pub case: Case,
    /// Loop treated by the two-ended construction.
    pub fallback: bool,
    pub eps: Option<f64>,
    pub edge_length: f64,
    #[serde(skip)]
    pub curves: Vec<CurveClass>,
    #[serde(skip)]
    pub geodesics: Vec<Geodesic>,
    pub coeffs: Vec<f64>,
    pub lengths: Vec<f64>,
    /// |Σ coeffs·lengths − edge length| / edge length
    pub residual: f64,
    /// Smallest stability radius over the curves.
    pub radius: f64,
}

impl Certificate {
    pub fn combination(&self, lengths: &[f64]) -> f64 {
        self.coeffs.iter().zip(lengths).map(|(c, l)| c * l).sum()
    }
}

#[derive(Clone, Debug)]
pub struct CertOptions {
    /// Initial length budget for segment searches.
    pub l0: f64,
    pub doublings: u32,
    pub max_eps_halvings: u32,
}

/// Saddle-connection indices for growing length budgets, built on demand.
pub struct Searcher<'a> {
    s: &'a Surface,
    opts: CertOptions,
    levels: Vec<SegmentIndex>,
}

impl<'a> Searcher<'a> {
    pub fn new(s: &'a Surface, opts: CertOptions) -> Searcher<'a> {
        Searcher { s, opts, levels: Vec::new() }
    }

    fn level(&mut self, k: usize) -> Result<&SegmentIndex> {
        while self.levels.len() <= k {
            let l = self.opts.l0 * 2f64.powi(self.levels.len() as i32);
            self.levels.push(SegmentIndex::new(self.s, l)?);
        }
        Ok(&self.levels[k])
    }

    fn find(&mut self, a: usize, u: f64, b: usize, v: f64, tol: f64) -> Result<Option<Segment>> {
        let s = self.s;
        for k in 0..=self.opts.doublings as usize {
            if let Some(seg) = search(s, self.level(k)?, a, u, b, v, tol) {
                return Ok(Some(seg));
            }
        }
        Ok(None)
    }

    /// The triangulation edge `e` as a saddle connection from its
    /// representative slot.
    pub fn edge(&mut self, e: usize) -> Result<SaddleConnection> {
        let h = self.s.edges()[e];
        let corner = Corner::new(h.tri, h.side);
        let idx = self.level(0)?;
        idx.all
            .iter()
            .find(|c| c.crossings.is_empty() && c.start_corner == corner && c.start_within == 0.0)
            .cloned()
            .ok_or(Error::ConstructionFailed { edge: e, msg: "edge longer than the search budget".into() })
    }
}

/// Closed curve along `path`, keeping marked U-turn points on the left and
/// every other cone point on the side of the smaller angle.
fn closed_curve(s: &Surface, path: &[SaddleConnection]) -> Result<CurveClass> {
    let n = path.len();
    let keeps: Vec<Keep> = (0..n)
        .map(|j| {
            let (x, y) = (&path[j], &path[(j + 1) % n]);
            if x.crossings == y.reversed(s).crossings
                && x.end_corner == y.start_corner
                && x.end_within == y.start_within
            {
                return Keep::Left;
            }
            let (l, r) = junction_angles(s, x, y);
            keep_for(l, r)
        })
        .collect();
    CurveClass::from_path(s, path, &keeps)
}

/// Tightens and checks that the geodesic is the given concatenation.
fn witness(
    s: &Surface,
    path: &[SaddleConnection],
    allow_cylinder: bool,
) -> std::result::Result<(CurveClass, Geodesic), String> {
    let c = closed_curve(s, path).map_err(|e| e.to_string())?;
    let g = tighten(s, &c).map_err(|e| e.to_string())?;
    let want: f64 = path.iter().map(|p| p.length()).sum();
    if (g.length - want).abs() > 1e-9 * want {
        return Err(format!("geodesic has length {} instead of {}", g.length, want));
    }
    if g.is_cylinder() && !allow_cylinder {
        return Err("geodesic is a cylinder core".into());
    }
    for j in g.junctions.iter().filter(|j| !j.uturn) {
        if j.slack() <= STRICT {
            return Err(format!("angle condition not strict at vertex {}", j.vertex));
        }
    }
    Ok((c, g))
}

fn rev_all(s: &Surface, seg: &Segment) -> Vec<SaddleConnection> {
    seg.reversed(s).parts
}

fn cat(parts: &[&[SaddleConnection]]) -> Vec<SaddleConnection> {
    parts.iter().flat_map(|p| p.iter().cloned()).collect()
}

/// Closed paths (with whether a cylinder core is acceptable) and the
/// coefficients expressing the edge length.
type Attempt = (Vec<(Vec<SaddleConnection>, bool)>, Vec<f64>);

fn unmarked_case(se: &mut Searcher, g0: &SaddleConnection, eps: f64, e: usize) -> Result<Attempt> {
    let s = se.s;
    let (a, b) = (g0.start, g0.end);
    let (ca, cb) = (s.vertex(a).cone_angle(), s.vertex(b).cone_angle());
    let (ra, rb) = (g0.start_dir, g0.end_dir);
    let at_a = |x: f64| (ra + x).rem_euclid(ca);
    let at_b = |x: f64| (rb + x).rem_euclid(cb);
    let table = [
        (at_a(PI + 2.0 * eps), at_b(-PI - 2.0 * eps)),
        (at_a(-PI - 2.0 * eps), at_b(PI + 2.0 * eps)),
        (at_a(PI - 4.0 * eps), at_b(-PI + 4.0 * eps)),
        (at_a(-PI + 4.0 * eps), at_b(PI - 4.0 * eps)),
    ];
    let mut gs = Vec::new();
    for (j, &(u, v)) in table.iter().enumerate() {
        match se.find(a, u, b, v, eps / 2.0)? {
            Some(seg) => gs.push(seg),
            None => {
                return Err(Error::ConstructionFailed {
                    edge: e,
                    msg: format!("no segment for direction pair {}", j + 1),
                })
            }
        }
    }
    let g0v = std::slice::from_ref(g0);
    let r: Vec<Vec<SaddleConnection>> = gs.iter().map(|g| rev_all(s, g)).collect();
    let paths = vec![
        cat(&[g0v, &r[0]]),
        cat(&[g0v, &r[1]]),
        cat(&[&gs[0].parts, &r[3]]),
        cat(&[&gs[1].parts, &r[2]]),
        cat(&[&gs[2].parts, &r[3]]),
    ];
    Ok((paths.into_iter().map(|p| (p, false)).collect(), vec![0.5, 0.5, -0.5, -0.5, 0.5]))
}

fn one_marked_case(se: &mut Searcher, g0: &SaddleConnection, eps: f64, e: usize) -> Result<Attempt> {
    let s = se.s;
    let a = g0.start;
    let ca = s.vertex(a).cone_angle();
    let at_a = |x: f64| (g0.start_dir + x).rem_euclid(ca);
    let (u1, u2, u3, u4) = (at_a(PI + 2.0 * eps), at_a(-PI - 2.0 * eps), at_a(PI - 4.0 * eps), at_a(-PI + 4.0 * eps));
    let g1 = se.find(a, u1, a, u2, eps / 2.0)?;
    let g2 = se.find(a, u3, a, u4, eps / 2.0)?;
    let (Some(g1), Some(g2)) = (g1, g2) else {
        return Err(Error::ConstructionFailed { edge: e, msg: "no loop segment at the unmarked end".into() });
    };
    let back = g0.reversed(s);
    let paths = vec![
        cat(&[std::slice::from_ref(g0), std::slice::from_ref(&back), &g1.parts]),
        cat(&[&g1.parts, &g2.parts]),
        g2.parts.clone(),
    ];
    Ok((paths.into_iter().map(|p| (p, false)).collect(), vec![0.5, -0.5, 0.5]))
}

fn attempt(se: &mut Searcher, g0: &SaddleConnection, case: Case, eps: f64, e: usize) -> Result<Attempt> {
    let s = se.s;
    match case {
        Case::Loop => Ok((vec![(vec![g0.clone()], false)], vec![1.0])),
        Case::Marked if g0.start == g0.end => Ok((vec![(vec![g0.clone()], true)], vec![1.0])),
        Case::Marked => Ok((vec![(vec![g0.clone(), g0.reversed(s)], true)], vec![0.5])),
        Case::Unmarked => unmarked_case(se, g0, eps, e),
        Case::OneMarked => one_marked_case(se, g0, eps, e),
    }
}

fn slack(s: &Surface, v: usize) -> f64 {
    if s.vertex(v).marked {
        f64::INFINITY
    } else {
        s.vertex(v).cone_angle() - 2.0 * PI
    }
}

pub fn certificate_for(se: &mut Searcher, chart: &PeriodChart, e: usize) -> Result<Certificate> {
    let s = se.s;
    let mut g0 = se.edge(e)?;
    let (ma, mb) = (s.vertex(g0.start).marked, s.vertex(g0.end).marked);
    if ma && !mb {
        g0 = g0.reversed(s);
    }
    let mut fallback = false;
    let case = match (ma, mb) {
        (true, true) => Case::Marked,
        (false, false) if g0.start == g0.end => {
            let (l, r) = junction_angles(s, &g0, &g0);
            if l.min(r) > PI + STRICT {
                Case::Loop
            } else {
                fallback = true;
                Case::Unmarked
            }
        }
        (false, false) => Case::Unmarked,
        _ => Case::OneMarked,
    };
    let uses_eps = matches!(case, Case::Unmarked | Case::OneMarked);
    let mut eps = (PI / 16.0).min(0.5 * slack(s, g0.start).min(slack(s, g0.end)));
    let mut last = String::new();
    for _ in 0..=se.opts.max_eps_halvings {
        let (paths, coeffs) = attempt(se, &g0, case, eps, e)?;
        let mut curves = Vec::new();
        let mut geods = Vec::new();
        let mut failed = None;
        for (p, cyl) in &paths {
            match witness(s, p, *cyl) {
                Ok((c, g)) => {
                    curves.push(c);
                    geods.push(g);
                }
                Err(m) => {
                    failed = Some(m);
                    break;
                }
            }
        }
        match failed {
            Some(m) if uses_eps => {
                last = m;
                eps *= 0.5;
                continue;
            }
            Some(m) => return Err(Error::AngleViolation(format!("edge {}: {}", e, m))),
            None => {}
        }
        let lengths: Vec<f64> = geods.iter().map(|g| g.length).collect();
        let radius = geods.iter().map(|g| stability_radius(chart, g).radius).fold(f64::INFINITY, f64::min);
        let edge_length = g0.length();
        let mut cert = Certificate {
            edge: e,
            start: g0.start,
            end: g0.end,
            case,
            fallback,
            eps: uses_eps.then_some(eps),
            edge_length,
            curves,
            geodesics: geods,
            coeffs,
            lengths,
            residual: 0.0,
            radius,
        };
        cert.residual = (cert.combination(&cert.lengths) - edge_length).abs() / edge_length;
        return Ok(cert);
    }
    Err(Error::AngleViolation(format!("edge {}: {}", e, last)))
}
