//! Pants decompositions: pants with three cuff slots, each glued to another
//! slot or capped by a marked point.

use crate::error::{Error, Result};
use crate::format::{perr, tokens};
use serde::Serialize;
use std::fmt::Write as _;

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub struct CuffRef {
    pub pants: usize,
    pub slot: usize,
}

impl CuffRef {
    pub fn new(pants: usize, slot: usize) -> Self {
        CuffRef { pants, slot }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Cuff {
    Glued(CuffRef),
    Marked,
}

/// Local model of a pair of pants, by number of marked slots.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum PantsKind {
    Unmarked,
    OneMarked,
    TwoMarked,
}

/// A pants curve: the gluing of side `a` to side `b`, with `a < b`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct PantsCurve {
    pub a: CuffRef,
    pub b: CuffRef,
}

impl PantsCurve {
    /// Both sides lie on the same pants (the curve cuts off a handle).
    pub fn is_handle(&self) -> bool {
        self.a.pants == self.b.pants
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct PantsDecomposition {
    names: Vec<String>,
    cuffs: Vec<[Cuff; 3]>,
    curves: Vec<PantsCurve>,
    curve_at: Vec<[Option<usize>; 3]>,
    genus: i64,
    marked: usize,
}

impl PantsDecomposition {
    pub fn new(names: Vec<String>, cuffs: Vec<[Cuff; 3]>) -> Result<Self> {
        let np = cuffs.len();
        if np == 0 || names.len() != np {
            return Err(Error::InvalidArgument("need one name per pants and at least one pants".into()));
        }
        let mut curves = Vec::new();
        let mut curve_at = vec![[None; 3]; np];
        let mut marked = 0;
        for p in 0..np {
            for s in 0..3 {
                let here = CuffRef::new(p, s);
                match cuffs[p][s] {
                    Cuff::Marked => marked += 1,
                    Cuff::Glued(o) => {
                        let back = cuffs.get(o.pants).and_then(|c| c.get(o.slot)).copied();
                        if o == here || back != Some(Cuff::Glued(here)) {
                            return Err(Error::UngluedSlot(format!("{}.{}", names[p], s)));
                        }
                        if here < o {
                            curve_at[p][s] = Some(curves.len());
                            curve_at[o.pants][o.slot] = Some(curves.len());
                            curves.push(PantsCurve { a: here, b: o });
                        }
                    }
                }
            }
            if cuffs[p].iter().all(|c| *c == Cuff::Marked) {
                return Err(Error::DegenerateInput(format!("pants {} has three marked slots", names[p])));
            }
        }
        // Connectivity over the gluing graph.
        let mut seen = vec![false; np];
        let mut stack = vec![0];
        seen[0] = true;
        while let Some(p) = stack.pop() {
            for c in &cuffs[p] {
                if let Cuff::Glued(o) = c {
                    if !seen[o.pants] {
                        seen[o.pants] = true;
                        stack.push(o.pants);
                    }
                }
            }
        }
        if seen.iter().any(|s| !s) {
            return Err(Error::Disconnected);
        }
        // Each pants has Euler characteristic −1 with marked points removed.
        let twice_g = np as i64 - marked as i64 + 2;
        debug_assert!(twice_g % 2 == 0);
        let genus = twice_g / 2;
        Ok(PantsDecomposition { names, cuffs, curves, curve_at, genus, marked })
    }

    pub fn genus(&self) -> i64 {
        self.genus
    }
    pub fn n_marked(&self) -> usize {
        self.marked
    }
    pub fn n_pants(&self) -> usize {
        self.cuffs.len()
    }
    pub fn names(&self) -> &[String] {
        &self.names
    }
    pub fn cuffs(&self, p: usize) -> &[Cuff; 3] {
        &self.cuffs[p]
    }
    pub fn curves(&self) -> &[PantsCurve] {
        &self.curves
    }
    /// Pants curve through a glued slot.
    pub fn curve_at(&self, c: CuffRef) -> Option<usize> {
        self.curve_at[c.pants][c.slot]
    }
    /// 6g + 2n − 6.
    pub fn weight_dim(&self) -> usize {
        (6 * self.genus + 2 * self.marked as i64 - 6).max(0) as usize
    }

    pub fn kind(&self, p: usize) -> PantsKind {
        match self.cuffs[p].iter().filter(|c| **c == Cuff::Marked).count() {
            0 => PantsKind::Unmarked,
            1 => PantsKind::OneMarked,
            _ => PantsKind::TwoMarked,
        }
    }

    /// Glued slots of a marked pants ordered by the index of their curve,
    /// so that the lower curve comes first.
    pub fn glued_slots(&self, p: usize) -> Vec<usize> {
        let mut v: Vec<usize> = (0..3).filter(|&s| self.curve_at[p][s].is_some()).collect();
        v.sort_by_key(|&s| self.curve_at[p][s]);
        v
    }

    pub fn check_complexity(&self) -> Result<()> {
        if 3 * self.genus + self.marked as i64 - 3 < 2 {
            return Err(Error::ComplexityTooLow { g: self.genus, n: self.marked });
        }
        Ok(())
    }

    pub fn to_text(&self) -> String {
        let mut out = String::new();
        for (p, name) in self.names.iter().enumerate() {
            let _ = writeln!(out, "pants {}", name);
            for s in 0..3 {
                match self.cuffs[p][s] {
                    Cuff::Marked => {
                        let _ = writeln!(out, "cuff {}.{} marked", name, s);
                    }
                    Cuff::Glued(o) => {
                        let _ = writeln!(out, "cuff {}.{} glue {}.{}", name, s, self.names[o.pants], o.slot);
                    }
                }
            }
        }
        out
    }
}

pub fn parse_pants(text: &str) -> Result<PantsDecomposition> {
    let mut names: Vec<String> = Vec::new();
    let mut raw: Vec<(usize, usize, String, usize, Option<(String, usize, usize)>)> = Vec::new();
    for (ln, line) in text.lines().enumerate() {
        let ln = ln + 1;
        let line = line.split('#').next().unwrap_or("");
        let toks = tokens(line);
        let Some(&(col, kw)) = toks.first() else { continue };
        match kw {
            "pants" => {
                if toks.len() != 2 {
                    return Err(perr(ln, col, "expected `pants <id>`"));
                }
                let id = toks[1].1;
                if id.contains('.') {
                    return Err(perr(ln, toks[1].0, "pants id may not contain '.'"));
                }
                if names.iter().any(|n| n == id) {
                    return Err(perr(ln, toks[1].0, format!("duplicate pants {}", id)));
                }
                names.push(id.to_string());
            }
            "cuff" => {
                let split = |i: usize| -> Result<(String, usize)> {
                    let (c, t) = toks[i];
                    let (p, s) = t.rsplit_once('.').ok_or_else(|| perr(ln, c, "expected <pants>.<slot>"))?;
                    match s.parse::<usize>() {
                        Ok(s) if s < 3 => Ok((p.to_string(), s)),
                        _ => Err(perr(ln, c, "slot must be 0, 1 or 2")),
                    }
                };
                match toks.len() {
                    3 if toks[2].1 == "marked" => {
                        let (p, s) = split(1)?;
                        raw.push((ln, toks[1].0, p, s, None));
                    }
                    4 if toks[2].1 == "glue" => {
                        let (p, s) = split(1)?;
                        let (q, t) = split(3)?;
                        raw.push((ln, toks[1].0, p, s, Some((q, t, toks[3].0))));
                    }
                    _ => {
                        return Err(perr(
                            ln,
                            col,
                            "expected `cuff <p>.<slot> glue <p>.<slot>` or `cuff <p>.<slot> marked`",
                        ))
                    }
                }
            }
            _ => return Err(perr(ln, col, format!("unknown keyword `{}`", kw))),
        }
    }
    let idx = |name: &str, ln: usize, col: usize| {
        names.iter().position(|n| n == name).ok_or_else(|| perr(ln, col, format!("unknown pants {}", name)))
    };
    let mut cuffs: Vec<[Option<Cuff>; 3]> = vec![[None; 3]; names.len()];
    let mut put = |r: CuffRef, c: Cuff, ln: usize, col: usize| -> Result<()> {
        match cuffs[r.pants][r.slot] {
            Some(old) if old != c => Err(perr(ln, col, "conflicting description of this slot")),
            _ => {
                cuffs[r.pants][r.slot] = Some(c);
                Ok(())
            }
        }
    };
    for (ln, col, p, s, glue) in &raw {
        let here = CuffRef::new(idx(p, *ln, *col)?, *s);
        match glue {
            None => put(here, Cuff::Marked, *ln, *col)?,
            Some((q, t, c2)) => {
                let there = CuffRef::new(idx(q, *ln, *c2)?, *t);
                put(here, Cuff::Glued(there), *ln, *col)?;
                put(there, Cuff::Glued(here), *ln, *c2)?;
            }
        }
    }
    let mut full = Vec::new();
    for (p, c) in cuffs.iter().enumerate() {
        let mut row = [Cuff::Marked; 3];
        for s in 0..3 {
            row[s] = c[s].ok_or_else(|| Error::UngluedSlot(format!("{}.{}", names[p], s)))?;
        }
        full.push(row);
    }
    PantsDecomposition::new(names, full)
}
