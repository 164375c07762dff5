//! Polygons with side pairings, triangulated into surfaces.

use crate::error::{Error, Result};
use crate::numeric::QVec;
use crate::surface::{Corner, Slot, Surface};
use num_traits::Signed;

#[derive(Clone, Debug)]
pub struct Polygon {
    /// Vertices in counterclockwise order.
    pub vertices: Vec<QVec>,
    /// Side pairs `(i, j, s)`; side k runs from vertex k to vertex k+1.
    pub pairs: Vec<(usize, usize, i8)>,
    /// Polygon vertex indices whose classes are marked.
    pub marked: Vec<usize>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Triangulation {
    /// Fan from vertex 0.
    Fan,
    /// Deterministic ear clipping (first ear in index order).
    Ears,
}

fn in_closed_triangle(p: &QVec, a: &QVec, b: &QVec, c: &QVec) -> bool {
    let s1 = b.sub(a).cross(&p.sub(a));
    let s2 = c.sub(b).cross(&p.sub(b));
    let s3 = a.sub(c).cross(&p.sub(c));
    !s1.is_negative() && !s2.is_negative() && !s3.is_negative()
}

pub fn ear_clip(v: &[QVec]) -> Result<Vec<[usize; 3]>> {
    let mut idx: Vec<usize> = (0..v.len()).collect();
    let mut out = Vec::new();
    while idx.len() > 3 {
        let m = idx.len();
        let ear = (0..m).find(|&k| {
            let (a, b, c) = (idx[(k + m - 1) % m], idx[k], idx[(k + 1) % m]);
            if !v[b].sub(&v[a]).cross(&v[c].sub(&v[b])).is_positive() {
                return false;
            }
            idx.iter().all(|&p| p == a || p == b || p == c || !in_closed_triangle(&v[p], &v[a], &v[b], &v[c]))
        });
        let k = ear.ok_or_else(|| Error::DegenerateInput("polygon has no ear".into()))?;
        out.push([idx[(k + m - 1) % m], idx[k], idx[(k + 1) % m]]);
        idx.remove(k);
    }
    out.push([idx[0], idx[1], idx[2]]);
    Ok(out)
}

impl Polygon {
    pub fn build(&self, method: Triangulation) -> Result<Surface> {
        let tris = match method {
            Triangulation::Fan => (1..self.vertices.len() - 1).map(|i| [0, i, i + 1]).collect(),
            Triangulation::Ears => ear_clip(&self.vertices)?,
        };
        self.build_with(&tris)
    }

    /// Builds from an explicit list of ccw vertex triples.
    pub fn build_with(&self, tris: &[[usize; 3]]) -> Result<Surface> {
        let n = self.vertices.len();
        let p = &self.vertices;
        let mut exact = Vec::new();
        let mut names = Vec::new();
        // directed vertex pair -> slot
        let mut side_at = std::collections::HashMap::new();
        for (t, tri) in tris.iter().enumerate() {
            names.push(format!("t{}", t));
            let v = [0, 1, 2].map(|i| p[tri[(i + 1) % 3]].sub(&p[tri[i]]));
            exact.push(v);
            for i in 0..3 {
                side_at.insert((tri[i], tri[(i + 1) % 3]), Slot::new(t, i));
            }
        }
        let mut glue = Vec::new();
        for (&(a, b), &s) in side_at.iter() {
            if let Some(&o) = side_at.get(&(b, a)) {
                if s < o {
                    glue.push((s, o, 1));
                }
            }
        }
        let side = |k: usize| -> Result<Slot> {
            side_at
                .get(&(k, (k + 1) % n))
                .copied()
                .ok_or_else(|| Error::DegenerateInput(format!("polygon side {} not in triangulation", k)))
        };
        for &(i, j, s) in &self.pairs {
            glue.push((side(i)?, side(j)?, s));
        }
        glue.sort();
        let mut marks = Vec::new();
        for &m in &self.marked {
            let (t, c) = tris
                .iter()
                .enumerate()
                .find_map(|(t, tri)| tri.iter().position(|&x| x == m).map(|c| (t, c)))
                .ok_or_else(|| Error::DegenerateInput(format!("vertex {} unused", m)))?;
            marks.push(Corner::new(t, c));
        }
        Surface::new(names, exact, &glue, &marks)
    }
}
