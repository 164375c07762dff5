//! Triangulated semi-translation surfaces.
//!
//! Slot `i` of a triangle is the directed side from corner `i` to corner
//! `i+1 (mod 3)`. A gluing `(a, b, s)` identifies slots with
//! `vec(b) = -s * vec(a)`. Vectors are stored exactly; floats are a mirror.

use crate::error::{Error, Result};
use crate::numeric::{ccw_angle, q_from_f64, QVec, C64, Q};
use num_traits::{Signed, Zero};
use serde::Serialize;
use std::collections::VecDeque;
use std::f64::consts::PI;

pub const ANGLE_SNAP_TOL: f64 = 1e-9;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct Slot {
    pub tri: usize,
    pub side: usize,
}

impl Slot {
    pub fn new(tri: usize, side: usize) -> Self {
        Slot { tri, side }
    }
    /// Corner where the directed side starts.
    pub fn start(self) -> Corner {
        Corner::new(self.tri, self.side)
    }
    /// Corner where the directed side ends.
    pub fn end(self) -> Corner {
        Corner::new(self.tri, (self.side + 1) % 3)
    }
    /// Corner opposite the side.
    pub fn opposite(self) -> Corner {
        Corner::new(self.tri, (self.side + 2) % 3)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct Corner {
    pub tri: usize,
    pub corner: usize,
}

impl Corner {
    pub fn new(tri: usize, corner: usize) -> Self {
        Corner { tri, corner }
    }
    /// The side leaving this corner (first side counterclockwise).
    pub fn start_side(self) -> Slot {
        Slot::new(self.tri, self.corner)
    }
    /// The side arriving at this corner, traversed backwards from the corner.
    pub fn end_side(self) -> Slot {
        Slot::new(self.tri, (self.corner + 2) % 3)
    }
    /// The side opposite the corner.
    pub fn opposite_side(self) -> Slot {
        Slot::new(self.tri, (self.corner + 1) % 3)
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct Vertex {
    /// Corners in counterclockwise order starting at the reference corner.
    pub corners: Vec<Corner>,
    /// Direction of each corner's start side, measured from the reference.
    pub offsets: Vec<f64>,
    pub angle: f64,
    /// Cone angle divided by π.
    pub angle_pi: i64,
    pub marked: bool,
}

impl Vertex {
    pub fn order(&self) -> i64 {
        self.angle_pi - 2
    }
    pub fn cone_angle(&self) -> f64 {
        self.angle_pi as f64 * PI
    }
}

#[derive(Clone, Debug)]
pub struct Surface {
    names: Vec<String>,
    exact: Vec<[QVec; 3]>,
    vecs: Vec<[C64; 3]>,
    partner: Vec<[Slot; 3]>,
    sign: Vec<[i8; 3]>,
    marks: Vec<Corner>,
    vertex_of: Vec<[usize; 3]>,
    corner_pos: Vec<[usize; 3]>,
    corner_angle: Vec<[f64; 3]>,
    vertices: Vec<Vertex>,
    edges: Vec<Slot>,
    edge_of: Vec<[usize; 3]>,
    holonomy: i8,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct StratumSignature {
    pub zero_orders: Vec<i64>,
    pub marked_orders: Vec<i64>,
    pub holonomy: i8,
    pub genus: i64,
    pub n: usize,
    pub k: usize,
}

impl StratumSignature {
    pub fn k0(&self) -> usize {
        self.zero_orders.len()
    }
    /// Real dimension of the stratum chart.
    pub fn dim_stratum(&self) -> i64 {
        4 * self.genus + 2 * self.k as i64 + self.holonomy as i64 - 3
    }
    /// Real dimension of the unit-area, rotation-normalized slice.
    pub fn dim_slice(&self) -> i64 {
        self.dim_stratum() - 2
    }
    /// Complex dimension of the period chart.
    pub fn chart_dim(&self) -> i64 {
        let base = 2 * self.genus + self.k as i64;
        if self.holonomy == 1 {
            base - 1
        } else {
            base - 2
        }
    }
    /// (genus, number of points) of the orientation double cover: odd-order
    /// points are branch points, even-order points have two preimages.
    pub fn cover_counts(&self) -> (i64, usize) {
        let odd = self.zero_orders.iter().chain(&self.marked_orders).filter(|a| *a % 2 != 0).count();
        let even = self.k - odd;
        (2 * self.genus - 1 + odd as i64 / 2, odd + 2 * even)
    }
    pub fn orders_string(&self) -> String {
        let all: Vec<String> =
            self.zero_orders.iter().chain(self.marked_orders.iter()).map(|a| a.to_string()).collect();
        format!("({}; {})", all.join(","), if self.holonomy == 1 { "+1" } else { "-1" })
    }
}

fn corner_angle_of(v: &[C64; 3], c: usize) -> f64 {
    ccw_angle(v[c], -v[(c + 2) % 3])
}

impl Surface {
    /// Builds and validates a surface. `glue` lists each identified pair once.
    pub fn new(
        names: Vec<String>,
        exact: Vec<[QVec; 3]>,
        glue: &[(Slot, Slot, i8)],
        marks: &[Corner],
    ) -> Result<Surface> {
        let f = exact.len();
        if names.len() != f {
            return Err(Error::InvalidArgument("names/triangles length mismatch".into()));
        }
        let name = |s: Slot| format!("{}.{}", names.get(s.tri).map_or("?", |x| x.as_str()), s.side);
        let none = Slot::new(usize::MAX, 0);
        let mut partner = vec![[none; 3]; f];
        let mut sign = vec![[0i8; 3]; f];
        for &(a, b, s) in glue {
            for x in [a, b] {
                if x.tri >= f || x.side > 2 {
                    return Err(Error::UngluedSlot(format!("{}.{}", x.tri, x.side)));
                }
            }
            if s != 1 && s != -1 {
                return Err(Error::InvalidArgument(format!("gluing sign {}", s)));
            }
            if a == b || partner[a.tri][a.side] != none || partner[b.tri][b.side] != none {
                return Err(Error::UngluedSlot(name(if partner[a.tri][a.side] != none { a } else { b })));
            }
            partner[a.tri][a.side] = b;
            partner[b.tri][b.side] = a;
            sign[a.tri][a.side] = s;
            sign[b.tri][b.side] = s;
        }
        for t in 0..f {
            for i in 0..3 {
                if partner[t][i] == none {
                    return Err(Error::UngluedSlot(name(Slot::new(t, i))));
                }
            }
        }
        for (t, v) in exact.iter().enumerate() {
            let sum = v[0].add(&v[1]).add(&v[2]);
            if !sum.is_zero() || !v[0].cross(&v[1]).is_positive() {
                return Err(Error::TriangleIneq(names[t].clone()));
            }
        }
        for t in 0..f {
            for i in 0..3 {
                let p = partner[t][i];
                let s = sign[t][i] as i64;
                if exact[p.tri][p.side] != exact[t][i].scale_i(-s) {
                    return Err(Error::GluingMismatch(format!("{} {}", name(Slot::new(t, i)), name(p))));
                }
            }
        }
        let vecs: Vec<[C64; 3]> = exact.iter().map(|v| [v[0].to_c64(), v[1].to_c64(), v[2].to_c64()]).collect();
        let mut s = Surface {
            names,
            exact,
            vecs,
            partner,
            sign,
            marks: Vec::new(),
            vertex_of: vec![[usize::MAX; 3]; f],
            corner_pos: vec![[0; 3]; f],
            corner_angle: Vec::new(),
            vertices: Vec::new(),
            edges: Vec::new(),
            edge_of: vec![[0; 3]; f],
            holonomy: 1,
        };
        s.check_connected()?;
        s.holonomy = s.compute_holonomy();
        s.build_edges();
        s.build_vertices(marks)?;
        Ok(s)
    }

    /// Same combinatorics, new exact vectors.
    pub fn with_vectors(&self, exact: Vec<[QVec; 3]>) -> Result<Surface> {
        Surface::new(self.names.clone(), exact, &self.gluing_list(), &self.marks)
    }

    fn check_connected(&self) -> Result<()> {
        let f = self.n_tris();
        if f == 0 {
            return Err(Error::Disconnected);
        }
        let mut seen = vec![false; f];
        let mut q = VecDeque::from([0usize]);
        seen[0] = true;
        while let Some(t) = q.pop_front() {
            for i in 0..3 {
                let p = self.partner[t][i].tri;
                if !seen[p] {
                    seen[p] = true;
                    q.push_back(p);
                }
            }
        }
        if seen.iter().all(|&x| x) {
            Ok(())
        } else {
            Err(Error::Disconnected)
        }
    }

    /// Frame multipliers from a breadth-first spanning tree of the dual graph.
    pub fn tree_frames(&self) -> Vec<i8> {
        let f = self.n_tris();
        let mut m = vec![0i8; f];
        m[0] = 1;
        let mut q = VecDeque::from([0usize]);
        while let Some(t) = q.pop_front() {
            for i in 0..3 {
                let p = self.partner[t][i];
                if m[p.tri] == 0 {
                    m[p.tri] = self.sign[t][i] * m[t];
                    q.push_back(p.tri);
                }
            }
        }
        m
    }

    fn compute_holonomy(&self) -> i8 {
        let m = self.tree_frames();
        for t in 0..self.n_tris() {
            for i in 0..3 {
                let p = self.partner[t][i];
                if m[p.tri] != self.sign[t][i] * m[t] {
                    return -1;
                }
            }
        }
        1
    }

    fn build_edges(&mut self) {
        for t in 0..self.n_tris() {
            for i in 0..3 {
                let a = Slot::new(t, i);
                let b = self.partner(a);
                if a < b {
                    self.edge_of[a.tri][a.side] = self.edges.len();
                    self.edge_of[b.tri][b.side] = self.edges.len();
                    self.edges.push(a);
                }
            }
        }
    }

    fn build_vertices(&mut self, marks: &[Corner]) -> Result<()> {
        let f = self.n_tris();
        self.corner_angle = self.vecs.iter().map(|v| [0, 1, 2].map(|c| corner_angle_of(v, c))).collect();
        for t in 0..f {
            for c in 0..3 {
                if self.vertex_of[t][c] != usize::MAX {
                    continue;
                }
                let id = self.vertices.len();
                let start = Corner::new(t, c);
                let mut corners = Vec::new();
                let mut offsets = Vec::new();
                let mut acc = 0.0;
                let mut cur = start;
                loop {
                    if self.vertex_of[cur.tri][cur.corner] != usize::MAX {
                        return Err(Error::BadConeAngle { vertex: id, msg: "corner cycle is not simple".into() });
                    }
                    self.vertex_of[cur.tri][cur.corner] = id;
                    self.corner_pos[cur.tri][cur.corner] = corners.len();
                    corners.push(cur);
                    offsets.push(acc);
                    acc += self.corner_angle[cur.tri][cur.corner];
                    cur = self.next_ccw(cur);
                    if cur == start {
                        break;
                    }
                }
                let ratio = acc / PI;
                let m = ratio.round();
                if (ratio - m).abs() > ANGLE_SNAP_TOL || m < 1.0 {
                    return Err(Error::BadConeAngle { vertex: id, msg: format!("angle/pi = {}", ratio) });
                }
                self.vertices.push(Vertex { corners, offsets, angle: acc, angle_pi: m as i64, marked: false });
            }
        }
        for &c in marks {
            if c.tri >= f || c.corner > 2 {
                return Err(Error::InvalidArgument(format!("mark {}.{}", c.tri, c.corner)));
            }
            let v = self.vertex_of[c.tri][c.corner];
            self.vertices[v].marked = true;
            self.marks.push(c);
        }
        for (id, v) in self.vertices.iter().enumerate() {
            if self.holonomy == 1 && v.angle_pi % 2 != 0 {
                return Err(Error::BadConeAngle { vertex: id, msg: "odd multiple of pi with trivial holonomy".into() });
            }
            if !v.marked && v.angle_pi <= 2 {
                return Err(Error::BadConeAngle {
                    vertex: id,
                    msg: format!("unmarked vertex with angle {}pi", v.angle_pi),
                });
            }
        }
        Ok(())
    }

    pub fn n_tris(&self) -> usize {
        self.exact.len()
    }
    pub fn names(&self) -> &[String] {
        &self.names
    }
    pub fn tri_index(&self, name: &str) -> Option<usize> {
        self.names.iter().position(|n| n == name)
    }
    pub fn vec(&self, s: Slot) -> C64 {
        self.vecs[s.tri][s.side]
    }
    pub fn qvec(&self, s: Slot) -> &QVec {
        &self.exact[s.tri][s.side]
    }
    pub fn tri_vecs(&self, t: usize) -> &[C64; 3] {
        &self.vecs[t]
    }
    pub fn exact_vecs(&self) -> &[[QVec; 3]] {
        &self.exact
    }
    pub fn partner(&self, s: Slot) -> Slot {
        self.partner[s.tri][s.side]
    }
    pub fn sign(&self, s: Slot) -> i8 {
        self.sign[s.tri][s.side]
    }
    pub fn marks(&self) -> &[Corner] {
        &self.marks
    }
    pub fn vertex_of(&self, c: Corner) -> usize {
        self.vertex_of[c.tri][c.corner]
    }
    pub fn corner_pos(&self, c: Corner) -> usize {
        self.corner_pos[c.tri][c.corner]
    }
    pub fn corner_angle(&self, c: Corner) -> f64 {
        self.corner_angle[c.tri][c.corner]
    }
    pub fn vertices(&self) -> &[Vertex] {
        &self.vertices
    }
    pub fn vertex(&self, v: usize) -> &Vertex {
        &self.vertices[v]
    }
    /// Direction of a ray at `within` inside corner `c`, in [0, cone angle).
    pub fn direction(&self, c: Corner, within: f64) -> f64 {
        let v = &self.vertices[self.vertex_of(c)];
        let d = v.offsets[self.corner_pos(c)] + within;
        let a = v.cone_angle();
        if d >= a {
            d - a
        } else {
            d
        }
    }
    pub fn edges(&self) -> &[Slot] {
        &self.edges
    }
    pub fn edge_of(&self, s: Slot) -> usize {
        self.edge_of[s.tri][s.side]
    }
    /// Coefficient c with vec(s) = c * vec(edge representative).
    pub fn slot_edge_sign(&self, s: Slot) -> i64 {
        if self.edges[self.edge_of(s)] == s {
            1
        } else {
            -(self.sign(s) as i64)
        }
    }
    pub fn holonomy(&self) -> i8 {
        self.holonomy
    }
    pub fn next_ccw(&self, c: Corner) -> Corner {
        self.partner(c.end_side()).start()
    }
    pub fn prev_ccw(&self, c: Corner) -> Corner {
        self.partner(c.start_side()).end()
    }

    pub fn gluing_list(&self) -> Vec<(Slot, Slot, i8)> {
        let mut out = Vec::new();
        for t in 0..self.n_tris() {
            for i in 0..3 {
                let a = Slot::new(t, i);
                let b = self.partner(a);
                if a < b {
                    out.push((a, b, self.sign(a)));
                }
            }
        }
        out
    }

    pub fn area(&self) -> f64 {
        self.vecs.iter().map(|v| 0.5 * crate::numeric::cross(v[0], v[1])).sum()
    }

    pub fn exact_area(&self) -> Q {
        let mut a = Q::zero();
        for v in &self.exact {
            a += v[0].cross(&v[1]);
        }
        a / crate::numeric::q(2)
    }

    pub fn genus(&self) -> i64 {
        let v = self.vertices.len() as i64;
        let e = self.edges.len() as i64;
        let f = self.n_tris() as i64;
        (2 - v + e - f) / 2
    }

    pub fn stratum_signature(&self) -> Result<StratumSignature> {
        let g = self.genus();
        let mut zero_orders: Vec<i64> = self.vertices.iter().filter(|v| !v.marked).map(|v| v.order()).collect();
        let mut marked_orders: Vec<i64> = self.vertices.iter().filter(|v| v.marked).map(|v| v.order()).collect();
        zero_orders.sort_by(|a, b| b.cmp(a));
        marked_orders.sort_by(|a, b| b.cmp(a));
        let sum: i64 = zero_orders.iter().chain(marked_orders.iter()).sum();
        if sum != 4 * g - 4 {
            return Err(Error::GaussBonnetViolation { sum, expected: 4 * g - 4 });
        }
        let n = marked_orders.len();
        if 3 * g + n as i64 - 3 < 2 {
            return Err(Error::ComplexityTooLow { g, n });
        }
        Ok(StratumSignature {
            k: zero_orders.len() + n,
            zero_orders,
            marked_orders,
            holonomy: self.holonomy,
            genus: g,
            n,
        })
    }

    /// Applies an exact real-linear map to every vector.
    pub fn map_vectors(&self, f: impl Fn(&QVec) -> QVec) -> Result<Surface> {
        self.with_vectors(self.exact.iter().map(|v| [f(&v[0]), f(&v[1]), f(&v[2])]).collect())
    }

    /// Multiplies every vector by e^{iθ}. Quarter turns are exact; other
    /// angles use the rational value of the rounded cosine and sine.
    pub fn rotate(&self, theta: f64) -> Result<Surface> {
        let k = theta / (PI / 2.0);
        if (k - k.round()).abs() < 1e-15 {
            let turns = (k.round() as i64).rem_euclid(4);
            return self.map_vectors(|v| {
                let mut w = v.clone();
                for _ in 0..turns {
                    w = w.rot90();
                }
                w
            });
        }
        let (c, s) = (q_from_f64(theta.cos()), q_from_f64(theta.sin()));
        self.map_vectors(|v| QVec::new(&v.re * &c - &v.im * &s, &v.re * &s + &v.im * &c))
    }

    pub fn scale(&self, k: &Q) -> Result<Surface> {
        self.map_vectors(|v| v.scale(k))
    }

    /// Rescales to area 1 (up to the rounding of the scale factor).
    pub fn normalize_area(&self) -> Result<Surface> {
        let a = self.exact_area();
        if a == Q::from_integer(1.into()) {
            return Ok(self.clone());
        }
        self.scale(&q_from_f64(1.0 / self.area().sqrt()))
    }

    /// Negates triangle `t` and flips the signs of its gluings.
    pub fn gauge(&self, t: usize) -> Result<Surface> {
        let mut exact = self.exact.clone();
        for v in exact[t].iter_mut() {
            *v = v.neg();
        }
        let glue: Vec<_> = self
            .gluing_list()
            .into_iter()
            .map(|(a, b, s)| {
                let fa = if a.tri == t { -1 } else { 1 };
                let fb = if b.tri == t { -1 } else { 1 };
                (a, b, s * fa * fb)
            })
            .collect();
        Surface::new(self.names.clone(), exact, &glue, &self.marks)
    }

    /// Checks that `other` arises from `self` by gauge moves: same
    /// combinatorics and per-triangle signs consistent with the gluings.
    pub fn gauge_equivalent(&self, other: &Surface) -> bool {
        if self.n_tris() != other.n_tris() {
            return false;
        }
        let mut sig = vec![0i64; self.n_tris()];
        for t in 0..self.n_tris() {
            let s = if other.exact[t][0] == self.exact[t][0] {
                1
            } else if other.exact[t][0] == self.exact[t][0].neg() {
                -1
            } else {
                return false;
            };
            if (0..3).any(|i| other.exact[t][i] != self.exact[t][i].scale_i(s)) {
                return false;
            }
            sig[t] = s;
        }
        for t in 0..self.n_tris() {
            for i in 0..3 {
                let a = Slot::new(t, i);
                let b = self.partner(a);
                if other.partner(a) != b {
                    return false;
                }
                if other.sign(a) as i64 != self.sign(a) as i64 * sig[t] * sig[b.tri] {
                    return false;
                }
            }
        }
        true
    }
}

/// Result of the orientation double cover construction.
#[derive(Clone, Debug)]
pub struct DoubleCover {
    pub surface: Surface,
    /// Deck involution on triangles: t ↦ t ± n.
    pub deck: Vec<usize>,
    /// Projection of each cover triangle to the base.
    pub projection: Vec<usize>,
}

impl DoubleCover {
    /// Image of a slot under the deck involution.
    pub fn deck_slot(&self, s: Slot) -> Slot {
        Slot::new(self.deck[s.tri], s.side)
    }
}

/// Builds the canonical double cover of a surface with holonomy −1.
/// Copy 1 carries negated vectors; sign-(−1) gluings cross copies.
pub fn double_cover(s: &Surface) -> Result<DoubleCover> {
    if s.holonomy() == 1 {
        return Err(Error::TrivialHolonomyInput);
    }
    let n = s.n_tris();
    let mut names = Vec::with_capacity(2 * n);
    let mut exact = Vec::with_capacity(2 * n);
    for copy in 0..2 {
        for t in 0..n {
            names.push(format!("{}~{}", s.names()[t], copy));
            let v = &s.exact_vecs()[t];
            exact.push(if copy == 0 { v.clone() } else { [v[0].neg(), v[1].neg(), v[2].neg()] });
        }
    }
    let mut glue = Vec::new();
    for (a, b, sg) in s.gluing_list() {
        for copy in 0..2 {
            let other = if sg == 1 { copy } else { 1 - copy };
            glue.push((Slot::new(a.tri + copy * n, a.side), Slot::new(b.tri + other * n, b.side), 1));
        }
    }
    let mut marks = Vec::new();
    for &c in s.marks() {
        marks.push(c);
        marks.push(Corner::new(c.tri + n, c.corner));
    }
    let surface = Surface::new(names, exact, &glue, &marks)?;
    let deck = (0..2 * n).map(|t| if t < n { t + n } else { t - n }).collect();
    let projection = (0..2 * n).map(|t| t % n).collect();
    Ok(DoubleCover { surface, deck, projection })
}
