//! Tightened closed geodesics.

use super::curve::Keep;
use crate::numeric::C64;
use crate::surface::{Corner, Slot, Surface};
use serde::Serialize;
use std::f64::consts::PI;

/// Angles closer than this to π count as straight.
pub const ANGLE_TOL: f64 = 1e-9;

/// A straight piece of a geodesic. For pinned geodesics it is a saddle
/// connection; a cylinder geodesic has one piece, its translation.
#[derive(Clone, Debug, Serialize)]
pub struct Piece {
    /// Period in the developing frame of the geodesic.
    pub z: C64,
    /// Expansion of `z` over the surface edges.
    pub coeffs: Vec<i64>,
    pub start: Option<(Corner, f64)>,
    pub end: Option<(Corner, f64)>,
    /// Direction at the start cone point and of the reversed piece at the end.
    pub start_dir: f64,
    pub end_dir: f64,
    pub crossings: Vec<Slot>,
    /// Corridor vertices relative to the piece start: (position, expansion,
    /// +1 if left of the piece, -1 if right).
    #[serde(skip)]
    pub corridor: Vec<(C64, Vec<i64>, i8)>,
}

impl Piece {
    pub fn length(&self) -> f64 {
        self.z.norm()
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct Junction {
    pub vertex: usize,
    pub marked: bool,
    pub cone_angle: f64,
    pub left: f64,
    pub right: f64,
    /// Side of the curve on which the cone point lies.
    pub point_side: Keep,
    pub uturn: bool,
}

impl Junction {
    /// Angle on the side away from the cone point.
    pub fn far_angle(&self) -> f64 {
        match self.point_side {
            Keep::Left => self.right,
            Keep::Right => self.left,
        }
    }

    /// Amount by which the angle condition holds; negative if violated.
    pub fn slack(&self) -> f64 {
        if self.marked {
            self.far_angle() - PI
        } else {
            self.left.min(self.right) - PI
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub enum GeodesicKind {
    /// Passes through cone points.
    Pinned,
    /// Core of a flat cylinder of the given width; not unique.
    Cylinder { width: f64 },
}

#[derive(Clone, Debug, Serialize)]
pub struct Geodesic {
    pub kind: GeodesicKind,
    pub pieces: Vec<Piece>,
    /// Junction j sits at the end of piece j.
    pub junctions: Vec<Junction>,
    pub length: f64,
    /// Tightened crossing sequence, canonical rotation.
    pub corridor: Vec<Slot>,
    pub holonomy: i8,
}

impl Geodesic {
    pub fn is_cylinder(&self) -> bool {
        matches!(self.kind, GeodesicKind::Cylinder { .. })
    }
}

/// Independent audit of the angle conditions using only the reported
/// directions of the pieces. Returns a description of the first failure.
pub fn check_angle_conditions(s: &Surface, g: &Geodesic) -> Result<(), String> {
    let total: f64 = g.pieces.iter().map(|p| p.length()).sum();
    if (total - g.length).abs() > 1e-9 * g.length.max(1.0) {
        return Err(format!("length {} differs from piece sum {}", g.length, total));
    }
    let n = g.pieces.len();
    if g.is_cylinder() {
        return if g.junctions.is_empty() && n == 1 { Ok(()) } else { Err("malformed cylinder".into()) };
    }
    if g.junctions.len() != n {
        return Err("junction count differs from piece count".into());
    }
    for (j, jn) in g.junctions.iter().enumerate() {
        let theta = s.vertex(jn.vertex).cone_angle();
        let d_in_rev = g.pieces[j].end_dir;
        let d_out = g.pieces[(j + 1) % n].start_dir;
        let left = (d_in_rev - d_out).rem_euclid(theta);
        let diff = (left - jn.left).rem_euclid(theta);
        if diff.min(theta - diff) > 1e-7 {
            return Err(format!("junction {}: left angle {} but directions give {}", j, jn.left, left));
        }
        if (jn.left + jn.right - theta).abs() > 1e-7 {
            return Err(format!("junction {}: side angles do not sum to the cone angle", j));
        }
        if jn.marked {
            if jn.far_angle() < PI - ANGLE_TOL {
                return Err(format!("junction {}: angle {} opposite marked point", j, jn.far_angle()));
            }
        } else if jn.left < PI - ANGLE_TOL || jn.right < PI - ANGLE_TOL {
            return Err(format!("junction {}: angles ({}, {}) at unmarked point", j, jn.left, jn.right));
        }
    }
    Ok(())
}
