//! Shortest path through a sequence of portals (simple stupid funnel).

use crate::numeric::{cross, C64};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Side {
    Left,
    Right,
}

#[derive(Clone, Copy, Debug)]
pub struct PortalPt {
    pub pos: C64,
    pub id: usize,
}

/// A bend of the taut path at a portal endpoint.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Bend {
    pub portal: usize,
    pub side: Side,
    pub id: usize,
}

/// Taut path from `start` to `goal` crossing `portals` (left, right) in
/// order. Returns the bends between the endpoints.
pub fn funnel(start: C64, portals: &[(PortalPt, PortalPt)], goal: C64) -> Vec<Bend> {
    const START: usize = usize::MAX - 1;
    const GOAL: usize = usize::MAX;
    let n = portals.len() + 2;
    let at = |i: usize| -> (PortalPt, PortalPt) {
        if i == 0 {
            let p = PortalPt { pos: start, id: START };
            (p, p)
        } else if i == n - 1 {
            let p = PortalPt { pos: goal, id: GOAL };
            (p, p)
        } else {
            portals[i - 1]
        }
    };
    let mut out = Vec::new();
    let mut apex = at(0).0;
    let (mut left, mut right) = (apex, apex);
    let (mut left_i, mut right_i) = (0usize, 0usize);
    let mut apex_i;
    let mut i = 1;
    while i < n {
        let (l, r) = at(i);
        // Portal endpoints at the apex itself impose no constraint.
        if r.id != apex.id && (right.id == apex.id || cross(right.pos - apex.pos, r.pos - apex.pos) >= 0.0) {
            if left.id == apex.id || r.id == left.id || cross(left.pos - apex.pos, r.pos - apex.pos) < 0.0 {
                right = r;
                right_i = i;
            } else {
                out.push(Bend { portal: left_i - 1, side: Side::Left, id: left.id });
                apex = left;
                apex_i = left_i;
                right = apex;
                right_i = apex_i;
                i = apex_i + 1;
                continue;
            }
        }
        if l.id != apex.id && (left.id == apex.id || cross(left.pos - apex.pos, l.pos - apex.pos) <= 0.0) {
            if right.id == apex.id || l.id == right.id || cross(right.pos - apex.pos, l.pos - apex.pos) > 0.0 {
                left = l;
                left_i = i;
            } else {
                out.push(Bend { portal: right_i - 1, side: Side::Right, id: right.id });
                apex = right;
                apex_i = right_i;
                left = apex;
                left_i = apex_i;
                i = apex_i + 1;
                continue;
            }
        }
        i += 1;
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn pp(x: f64, y: f64, id: usize) -> PortalPt {
        PortalPt { pos: C64::new(x, y), id }
    }

    #[test]
    fn straight_corridor_has_no_bends() {
        let portals = vec![(pp(1.0, 1.0, 0), pp(1.0, -1.0, 1)), (pp(2.0, 1.0, 2), pp(2.0, -1.0, 3))];
        assert!(funnel(C64::new(0.0, 0.0), &portals, C64::new(3.0, 0.0)).is_empty());
    }

    #[test]
    fn bends_around_left_obstacle() {
        // Corridor squeezed below the point (1, -0.5).
        let portals = vec![(pp(1.0, -0.5, 7), pp(1.0, -2.0, 1))];
        let b = funnel(C64::new(0.0, 0.0), &portals, C64::new(2.0, 0.0));
        assert_eq!(b, vec![Bend { portal: 0, side: Side::Left, id: 7 }]);
    }
}
