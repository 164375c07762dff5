//! Built-in example surfaces.

use crate::geodesics::{flow, saddle, tighten, CurveClass, Keep, SaddleConnection};
use crate::numeric::{parse_q, q, q_frac, QVec, C64};
use crate::polygon::{Polygon, Triangulation};
use crate::surface::{Corner, Slot, Surface};

fn qv(a: (i64, i64), b: (i64, i64)) -> QVec {
    QVec::new(q_frac(a.0, a.1), q_frac(b.0, b.1))
}

/// Unit square torus with marked points at the corner and the center,
/// cut into four triangles around the center.
pub fn square_torus() -> Surface {
    let h = |x: i64, y: i64| qv((x, 2), (y, 2));
    let exact = vec![
        [h(2, 0), h(-1, 1), h(-1, -1)],
        [h(0, 2), h(-1, -1), h(1, -1)],
        [h(-2, 0), h(1, -1), h(1, 1)],
        [h(0, -2), h(1, 1), h(-1, 1)],
    ];
    let s = |t, i| Slot::new(t, i);
    let glue = [
        (s(0, 1), s(1, 2), 1),
        (s(1, 1), s(2, 2), 1),
        (s(2, 1), s(3, 2), 1),
        (s(3, 1), s(0, 2), 1),
        (s(0, 0), s(2, 0), 1),
        (s(1, 0), s(3, 0), 1),
    ];
    let names = (0..4).map(|t| format!("t{}", t)).collect();
    Surface::new(names, exact, &glue, &[Corner::new(0, 0), Corner::new(0, 2)]).expect("square torus")
}

/// Regular octagon with unit sides, opposite sides glued by translation,
/// fan-triangulated from one vertex. √2/2 enters as a 17-digit decimal.
pub fn octagon() -> Surface {
    let r = parse_q("0.70710678118654752").unwrap();
    let half = q_frac(1, 2);
    let a = &half + &r;
    let first = [
        QVec::new(half.clone(), -a.clone()),
        QVec::new(a.clone(), -half.clone()),
        QVec::new(a.clone(), half.clone()),
        QVec::new(half.clone(), a.clone()),
    ];
    let mut vertices: Vec<QVec> = first.to_vec();
    vertices.extend(first.iter().map(|v| v.neg()));
    let pairs = (0..4).map(|k| (k, k + 4, 1)).collect();
    Polygon { vertices, pairs, marked: vec![] }.build(Triangulation::Fan).expect("octagon")
}

/// Pillowcase with four poles and one marked regular point; holonomy −1.
pub fn pillowcase() -> Surface {
    let v = |x: i64, y: (i64, i64)| QVec::new(q(x), q_frac(y.0, y.1));
    let vertices = vec![
        v(0, (0, 1)),
        v(1, (0, 1)),
        v(2, (0, 1)),
        v(2, (1, 2)),
        v(2, (1, 1)),
        v(1, (1, 1)),
        v(0, (1, 1)),
        v(0, (1, 2)),
    ];
    let pairs = vec![(0, 1, -1), (2, 3, -1), (4, 5, -1), (6, 7, -1)];
    let tris = [[0, 1, 7], [1, 6, 7], [1, 5, 6], [1, 3, 5], [1, 2, 3], [3, 4, 5]];
    Polygon { vertices, pairs, marked: vec![0, 1, 3, 5, 7] }.build_with(&tris).expect("pillowcase")
}

/// Genus-2 surface with four simple zeros and holonomy −1, from a 6×3
/// rectangle whose top and bottom are cut into unit pieces.
pub fn genus2_q1111() -> Surface {
    let mut vertices = Vec::new();
    for x in 0..=6 {
        vertices.push(QVec::new(q(x), q(0)));
    }
    for x in (0..=6).rev() {
        vertices.push(QVec::new(q(x), q(3)));
    }
    let pairs = vec![(10, 3, 1), (2, 5, -1), (7, 0, 1), (8, 1, 1), (6, 13, 1), (9, 12, -1), (11, 4, 1)];
    Polygon { vertices, pairs, marked: vec![] }.build(Triangulation::Ears).expect("genus 2 surface")
}

/// Three disjoint curves on `genus2_q1111` (or any surface with its
/// triangulation): the cores of the two vertical cylinders, of
/// circumferences 12 and 6, and the closed chain of vertical saddle
/// connections v0 → v1 → v2 → v3 → v0 which bounds the longer cylinder.
pub fn genus2_pants_curves(s: &Surface) -> crate::Result<Vec<CurveClass>> {
    let base = genus2_q1111();
    let mut out = flow::parallel_curves(&base, &QVec::new(q(0), q(1)), 400)?;
    out.sort_by_key(|c| std::cmp::Reverse(c.len()));
    let vert: Vec<SaddleConnection> =
        saddle::enumerate_directed(&base, 3.01, 100_000)?.into_iter().filter(|c| c.period.re.abs() < 1e-9).collect();
    let pick = |a: usize, b: usize| vert.iter().filter(move |c| c.start == a && c.end == b);
    for s01 in pick(0, 1) {
        for s12 in pick(1, 2) {
            for s23 in pick(2, 3) {
                for s30 in pick(3, 0) {
                    for keep in [Keep::Left, Keep::Right] {
                        let segs = [s01.clone(), s12.clone(), s23.clone(), s30.clone()];
                        let Ok(c) = CurveClass::from_path(&base, &segs, &[keep; 4]) else { continue };
                        if matches!(tighten(&base, &c), Ok(g) if !g.is_cylinder()) {
                            out.push(c);
                            return out.into_iter().map(|c| CurveClass::new(s, c.crossings)).collect();
                        }
                    }
                }
            }
        }
    }
    Err(crate::Error::InvalidCurve("no boundary chain found".into()))
}

/// `genus2_q1111` moved off the locus where its vertical saddle connections
/// line up, so that the curves of `genus2_pants_curves` have positive
/// stability radius.
pub fn genus2_generic() -> Surface {
    let s = genus2_q1111();
    let chart = crate::periods::PeriodChart::build(&s).expect("chart");
    let delta: Vec<C64> = (0..chart.dim())
        .map(|j| C64::new(((7 * j + 3) % 11) as f64 / 200.0 - 0.025, ((5 * j + 2) % 13) as f64 / 250.0 - 0.024))
        .collect();
    chart.perturb(&delta, true).expect("small perturbation")
}

/// All corpus surfaces with their short names.
pub fn all() -> Vec<(&'static str, Surface)> {
    vec![("torus2", square_torus()), ("octagon", octagon()), ("pillowcase", pillowcase()), ("genus2", genus2_q1111())]
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn signatures() {
        let t = square_torus().stratum_signature().unwrap();
        assert_eq!((t.genus, t.n, t.orders_string().as_str()), (1, 2, "(0,0; +1)"));
        let o = octagon().stratum_signature().unwrap();
        assert_eq!(o.orders_string(), "(4; +1)");
        let p = pillowcase().stratum_signature().unwrap();
        assert_eq!((p.genus, p.holonomy), (0, -1));
        assert_eq!(p.orders_string(), "(0,-1,-1,-1,-1; -1)");
        let g = genus2_q1111().stratum_signature().unwrap();
        assert_eq!(g.orders_string(), "(1,1,1,1; -1)");
        assert_eq!(g.genus, 2);
    }
}

/// Genus 2: two pants glued along three curves.
pub const PANTS_GENUS2_THETA: &str = "\
pants P
pants Q
cuff P.0 glue Q.0
cuff P.1 glue Q.1
cuff P.2 glue Q.2
";

/// Genus 2: two handles joined along a separating curve.
pub const PANTS_GENUS2_HANDLES: &str = "\
pants P
pants Q
cuff P.0 glue P.1
cuff P.2 glue Q.2
cuff Q.0 glue Q.1
";

/// Torus with two marked points: a handle and a twice-marked pants.
pub const PANTS_TORUS2_HANDLE: &str = "\
pants P
pants Q
cuff P.0 glue P.1
cuff P.2 glue Q.0
cuff Q.1 marked
cuff Q.2 marked
";

/// Torus with two marked points: two once-marked pants in a ring.
pub const PANTS_TORUS2_RING: &str = "\
pants P
pants Q
cuff P.0 glue Q.1
cuff P.1 glue Q.0
cuff P.2 marked
cuff Q.2 marked
";

pub fn pants_all() -> Vec<(&'static str, crate::traintrack::PantsDecomposition)> {
    [
        ("genus2-theta", PANTS_GENUS2_THETA),
        ("genus2-handles", PANTS_GENUS2_HANDLES),
        ("torus2-handle", PANTS_TORUS2_HANDLE),
        ("torus2-ring", PANTS_TORUS2_RING),
    ]
    .into_iter()
    .map(|(n, t)| (n, crate::traintrack::parse_pants(t).expect("corpus decomposition")))
    .collect()
}
