//! Line-oriented text formats for surfaces and curves.

use crate::error::{Error, Result};
use crate::numeric::{parse_q, QVec, Q};
use crate::surface::{Corner, Slot, Surface};
use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use std::fmt::Write as _;

/// One directed crossing as written in a curve line: `t.slot+` exits the
/// triangle through `slot`, `t.slot-` enters it through `slot`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EdgeRef {
    pub tri: String,
    pub slot: usize,
    pub exit: bool,
}

#[derive(Clone, Debug)]
pub struct CurveSpec {
    pub name: String,
    pub refs: Vec<EdgeRef>,
}

#[derive(Clone, Debug)]
pub struct SurfaceFile {
    pub surface: Surface,
    pub curves: Vec<CurveSpec>,
}

pub(crate) fn perr(line: usize, col: usize, msg: impl Into<String>) -> Error {
    Error::Parse { line, col, msg: msg.into() }
}

/// Splits a line into tokens with their 1-based columns.
pub(crate) fn tokens(line: &str) -> Vec<(usize, &str)> {
    let mut out = Vec::new();
    let mut start = None;
    for (i, ch) in line.char_indices() {
        if ch.is_whitespace() {
            if let Some(s) = start.take() {
                out.push((s + 1, &line[s..i]));
            }
        } else if start.is_none() {
            start = Some(i);
        }
    }
    if let Some(s) = start {
        out.push((s + 1, &line[s..]));
    }
    out
}

fn parse_slot_ref(tok: &str, line: usize, col: usize, names: &[String]) -> Result<(usize, usize)> {
    let (t, i) = tok.rsplit_once('.').ok_or_else(|| perr(line, col, format!("expected <tri>.<index>, got {}", tok)))?;
    let ti = names.iter().position(|n| n == t).ok_or_else(|| perr(line, col, format!("unknown triangle {}", t)))?;
    let ii: usize = i.parse().map_err(|_| perr(line, col, format!("bad index {}", i)))?;
    if ii > 2 {
        return Err(perr(line, col, format!("index {} out of range", ii)));
    }
    Ok((ti, ii))
}

pub fn parse_edge_ref(tok: &str) -> Option<EdgeRef> {
    let (body, exit) = match tok.strip_suffix('-') {
        Some(b) => (b, false),
        None => (tok.strip_suffix('+').unwrap_or(tok), true),
    };
    let (t, i) = body.rsplit_once('.')?;
    let slot: usize = i.parse().ok()?;
    if slot > 2 || t.is_empty() {
        return None;
    }
    Some(EdgeRef { tri: t.to_string(), slot, exit })
}

fn parse_curve_line(rest: &str, line: usize, col: usize) -> Result<CurveSpec> {
    let (name, body) = rest.split_once(':').ok_or_else(|| perr(line, col, "expected `curve <name>: <refs>`"))?;
    let name = name.trim();
    if name.is_empty() {
        return Err(perr(line, col, "empty curve name"));
    }
    let mut refs = Vec::new();
    for part in body.split(',') {
        let p = part.trim();
        if p.is_empty() {
            continue;
        }
        refs.push(parse_edge_ref(p).ok_or_else(|| perr(line, col, format!("bad edge reference {}", p)))?);
    }
    Ok(CurveSpec { name: name.to_string(), refs })
}

/// Parses a standalone curve file (only `curve` lines and comments).
pub fn parse_curves(text: &str) -> Result<Vec<CurveSpec>> {
    let mut out = Vec::new();
    for (ln, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("");
        let toks = tokens(line);
        let Some(&(col, kw)) = toks.first() else { continue };
        if kw != "curve" {
            return Err(perr(ln + 1, col, format!("unexpected keyword {}", kw)));
        }
        out.push(parse_curve_line(&line[col - 1 + 5..], ln + 1, col)?);
    }
    Ok(out)
}

pub fn parse_surface(text: &str) -> Result<SurfaceFile> {
    let mut names: Vec<String> = Vec::new();
    let mut vecs: Vec<Vec<QVec>> = Vec::new();
    let mut glue_raw = Vec::new();
    let mut mark_raw = Vec::new();
    let mut curves = Vec::new();
    for (ln, raw) in text.lines().enumerate() {
        let ln = ln + 1;
        let line = raw.split('#').next().unwrap_or("");
        let toks = tokens(line);
        let Some(&(col, kw)) = toks.first() else { continue };
        match kw {
            "triangle" => {
                if toks.len() != 2 {
                    return Err(perr(ln, col, "expected `triangle <id>`"));
                }
                let id = toks[1].1;
                if id.contains('.') || id.contains(',') || id.contains(':') {
                    return Err(perr(ln, toks[1].0, "triangle id may not contain '.', ',' or ':'"));
                }
                if names.iter().any(|n| n == id) {
                    return Err(perr(ln, toks[1].0, format!("duplicate triangle {}", id)));
                }
                if let Some(last) = vecs.last() {
                    if last.len() != 3 {
                        return Err(perr(ln, col, "previous triangle does not have 3 vectors"));
                    }
                }
                names.push(id.to_string());
                vecs.push(Vec::new());
            }
            "v" => {
                if toks.len() != 3 {
                    return Err(perr(ln, col, "expected `v <re> <im>`"));
                }
                let cur = vecs.last_mut().ok_or_else(|| perr(ln, col, "vector before any triangle"))?;
                if cur.len() == 3 {
                    return Err(perr(ln, col, "more than 3 vectors in triangle"));
                }
                let re = parse_q(toks[1].1).ok_or_else(|| perr(ln, toks[1].0, format!("bad number {}", toks[1].1)))?;
                let im = parse_q(toks[2].1).ok_or_else(|| perr(ln, toks[2].0, format!("bad number {}", toks[2].1)))?;
                cur.push(QVec::new(re, im));
            }
            "glue" => {
                if toks.len() != 4 {
                    return Err(perr(ln, col, "expected `glue <t>.<slot> <t>.<slot> <+1|-1>`"));
                }
                let s = match toks[3].1 {
                    "+1" | "1" => 1,
                    "-1" => -1,
                    other => return Err(perr(ln, toks[3].0, format!("bad sign {}", other))),
                };
                glue_raw.push((ln, toks[1], toks[2], s));
            }
            "mark" => {
                if toks.len() != 2 {
                    return Err(perr(ln, col, "expected `mark <t>.<corner>`"));
                }
                mark_raw.push((ln, toks[1]));
            }
            "curve" => curves.push(parse_curve_line(&line[col - 1 + 5..], ln, col)?),
            other => return Err(perr(ln, col, format!("unknown keyword {}", other))),
        }
    }
    if let Some(last) = vecs.last() {
        if last.len() != 3 {
            return Err(perr(text.lines().count().max(1), 1, "last triangle does not have 3 vectors"));
        }
    }
    let mut glue = Vec::new();
    for (ln, a, b, s) in glue_raw {
        let (ta, ia) = parse_slot_ref(a.1, ln, a.0, &names)?;
        let (tb, ib) = parse_slot_ref(b.1, ln, b.0, &names)?;
        glue.push((Slot::new(ta, ia), Slot::new(tb, ib), s));
    }
    let mut marks = Vec::new();
    for (ln, m) in mark_raw {
        let (t, c) = parse_slot_ref(m.1, ln, m.0, &names)?;
        marks.push(Corner::new(t, c));
    }
    let exact: Vec<[QVec; 3]> = vecs.into_iter().map(|v| [v[0].clone(), v[1].clone(), v[2].clone()]).collect();
    let surface = Surface::new(names, exact, &glue, &marks)?;
    Ok(SurfaceFile { surface, curves })
}

/// Renders a rational as a terminating decimal when possible, else `p/q`.
pub fn fmt_number(x: &Q) -> String {
    if x.denom().is_one() {
        return x.numer().to_string();
    }
    let mut d = x.denom().clone();
    let (two, five) = (BigInt::from(2), BigInt::from(5));
    let (mut a, mut b) = (0usize, 0usize);
    while (&d % &two).is_zero() {
        d /= &two;
        a += 1;
    }
    while (&d % &five).is_zero() {
        d /= &five;
        b += 1;
    }
    if !d.is_one() || a.max(b) > 40 {
        return crate::numeric::fmt_q(x);
    }
    let k = a.max(b);
    let scaled = x * Q::from_integer(num_traits::pow(BigInt::from(10), k));
    let n = scaled.to_integer();
    let neg = n.is_negative();
    let digits = n.abs().to_string();
    let digits = if digits.len() <= k { format!("{}{}", "0".repeat(k + 1 - digits.len()), digits) } else { digits };
    let (ip, fp) = digits.split_at(digits.len() - k);
    format!("{}{}.{}", if neg { "-" } else { "" }, ip, fp)
}

pub fn serialize_surface(s: &Surface) -> String {
    let mut out = String::new();
    for (t, name) in s.names().iter().enumerate() {
        writeln!(out, "triangle {}", name).unwrap();
        for i in 0..3 {
            let v = s.qvec(Slot::new(t, i));
            writeln!(out, "v {} {}", fmt_number(&v.re), fmt_number(&v.im)).unwrap();
        }
    }
    for (a, b, sg) in s.gluing_list() {
        writeln!(
            out,
            "glue {}.{} {}.{} {}",
            s.names()[a.tri],
            a.side,
            s.names()[b.tri],
            b.side,
            if sg == 1 { "+1" } else { "-1" }
        )
        .unwrap();
    }
    let mut seen = std::collections::BTreeSet::new();
    for c in s.marks() {
        if seen.insert(s.vertex_of(*c)) {
            writeln!(out, "mark {}.{}", s.names()[c.tri], c.corner).unwrap();
        }
    }
    out
}

pub fn serialize_curve(name: &str, refs: &[EdgeRef]) -> String {
    let body: Vec<String> =
        refs.iter().map(|r| format!("{}.{}{}", r.tri, r.slot, if r.exit { "+" } else { "-" })).collect();
    format!("curve {}: {}", name, body.join(","))
}
