use super::{select_curves, Command, Emit, Mode, Report, RunConfig, TrackCommand};
use crate::deformation::{
    follow_isospectral_path, nullity_report, spectrum_jacobian, verify_length_formula, IntegrationMode, PathOptions,
};
use crate::error::{Error, Result};
use crate::format::{fmt_number, serialize_curve, serialize_surface};
use crate::geodesics::saddle::CSV_HEADER;
use crate::geodesics::{enumerate_saddle_connections, tighten, CurveClass};
use crate::numeric::{fmt_f64, parse_q, C64, Q};
use crate::periods::PeriodChart;
use crate::rigidity::{audit_perturbations, certify_triangulated, default_options, saddle_triangulation};
use crate::surface::{double_cover, StratumSignature, Surface};
use crate::traintrack::{
    build_tracks, intersections_csv, parse_pants, positive_solution, recovery_matrix, sigma_system, weights_csv,
    TrainTrack,
};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::{json, to_value, Value};
use std::f64::consts::TAU;
use std::fmt::Write as _;
use std::path::Path;

pub(super) fn execute(cfg: &RunConfig, cmd: &Command) -> Result<Report> {
    match cmd {
        Command::Validate { file } => validate(cfg, file),
        Command::Info { file } => info(cfg, file),
        Command::Saddles { file, max_length } => saddles(cfg, file, *max_length),
        Command::Length { file, curve, curves_file } => {
            spectrum(cfg, file, std::slice::from_ref(curve), curves_file.as_deref(), true)
        }
        Command::Spectrum { file, sel } => spectrum(cfg, file, &sel.curves, sel.curves_file.as_deref(), false),
        Command::DoubleCover { file } => cover(cfg, file),
        Command::Chart { file } => chart(cfg, file),
        Command::Perturb { file, radius } => perturb(cfg, file, *radius),
        Command::VerifyLengthFormula { file, curve, mode, tol } => length_formula(cfg, file, curve, *mode, *tol),
        Command::Track { cmd: TrackCommand::Build { file, second, emit } } => track_build(cfg, file, *second, *emit),
        Command::Track { cmd: TrackCommand::Recover { file, intersections, second } } => {
            track_recover(cfg, file, intersections, *second)
        }
        Command::Triangulate { file } => triangulate(cfg, file),
        Command::RigidityCert { file, doublings, audit } => rigidity(cfg, file, *doublings, *audit),
        Command::Jacobian { file, sel } => jacobian(cfg, file, &sel.curves, sel.curves_file.as_deref()),
        Command::Deform { file, sel, steps, h } => {
            deform(cfg, file, &sel.curves, sel.curves_file.as_deref(), *steps, *h)
        }
    }
}

fn is_pants(p: &Path) -> bool {
    p.extension().is_some_and(|e| e == "pants")
}

fn alpha(sig: &StratumSignature) -> String {
    sig.orders_string().replace("; ", ";")
}

fn sig_json(sig: &StratumSignature) -> Value {
    json!({
        "alpha": alpha(sig),
        "genus": sig.genus,
        "n": sig.n,
        "k": sig.k,
        "holonomy": sig.holonomy,
        "zero_orders": sig.zero_orders,
        "marked_orders": sig.marked_orders,
    })
}

fn curves_text(s: &Surface, curves: &[(String, CurveClass)]) -> String {
    curves.iter().map(|(n, c)| serialize_curve(n, &c.to_refs(s)) + "\n").collect()
}

fn validate(cfg: &RunConfig, file: &Path) -> Result<Report> {
    if is_pants(file) {
        let pd = parse_pants(&cfg.read(file)?)?;
        pd.check_complexity()?;
        let (a, b) = build_tracks(&pd)?;
        a.audit_regions()?;
        b.audit_regions()?;
        let text = format!(
            "ok pants g={} n={} curves={} weight_dim={}\n",
            pd.genus(),
            pd.n_marked(),
            pd.curves().len(),
            pd.weight_dim()
        );
        let j = json!({ "kind": "pants", "genus": pd.genus(), "n": pd.n_marked(), "curves": pd.curves().len(), "weight_dim": pd.weight_dim() });
        return Ok(Report::new(text, j));
    }
    let f = cfg.load_surface(file)?;
    let sig = f.surface.stratum_signature()?;
    for c in &f.curves {
        CurveClass::from_refs(&f.surface, &c.refs).map_err(|e| Error::InvalidCurve(format!("{}: {}", c.name, e)))?;
    }
    let text = format!(
        "ok surface α={} g={} triangles={} curves={}\n",
        alpha(&sig),
        sig.genus,
        f.surface.n_tris(),
        f.curves.len()
    );
    let j = json!({ "kind": "surface", "signature": sig_json(&sig), "triangles": f.surface.n_tris(), "curves": f.curves.len() });
    Ok(Report::new(text, j))
}

fn info(cfg: &RunConfig, file: &Path) -> Result<Report> {
    let f = cfg.load_surface(file)?;
    let s = &f.surface;
    let sig = s.stratum_signature()?;
    let text = format!(
        "α={} g={} n={} k={} ε={}\ndim QD = {}\ndim Flat = {}\nchart dim (complex) = {}\ntriangles = {}\nedges = {}\narea = {}\n",
        alpha(&sig),
        sig.genus,
        sig.n,
        sig.k,
        if sig.holonomy == 1 { "+1" } else { "-1" },
        sig.dim_stratum(),
        sig.dim_slice(),
        sig.chart_dim(),
        s.n_tris(),
        s.edges().len(),
        fmt_number(&s.exact_area()),
    );
    let j = json!({
        "signature": sig_json(&sig),
        "dim_qd": sig.dim_stratum(),
        "dim_flat": sig.dim_slice(),
        "chart_dim": sig.chart_dim(),
        "triangles": s.n_tris(),
        "edges": s.edges().len(),
        "area": fmt_number(&s.exact_area()),
    });
    Ok(Report::new(text, j))
}

fn saddles(cfg: &RunConfig, file: &Path, max_length: f64) -> Result<Report> {
    if !(max_length > 0.0 && max_length.is_finite()) {
        return Err(Error::InvalidArgument("--max-length must be positive".into()));
    }
    let f = cfg.load_surface(file)?;
    let scs = enumerate_saddle_connections(&f.surface, max_length, cfg.budget)?;
    let mut csv = String::from(CSV_HEADER);
    csv.push('\n');
    for c in &scs {
        csv += &c.csv_row();
        csv.push('\n');
    }
    let text = format!("saddle connections with length <= {}: {}\n", fmt_f64(max_length), scs.len());
    let rows: Vec<Value> = scs
        .iter()
        .map(|c| json!({ "start": c.start, "end": c.end, "re": c.period.re, "im": c.period.im, "length": c.length() }))
        .collect();
    Ok(Report::new(text, json!({ "max_length": max_length, "count": scs.len(), "connections": rows }))
        .with_artifact(csv))
}

fn spectrum(cfg: &RunConfig, file: &Path, names: &[String], extra: Option<&Path>, detail: bool) -> Result<Report> {
    let f = cfg.load_surface(file)?;
    let curves = select_curves(cfg, &f, names, extra)?;
    let mut text = String::from("curve,length\n");
    let mut rows = Vec::new();
    for (n, c) in &curves {
        let g = tighten(&f.surface, c)?;
        writeln!(text, "{},{}", n, fmt_f64(g.length)).unwrap();
        if detail {
            writeln!(text, "kind {:?}, {} pieces, {} junctions", g.kind, g.pieces.len(), g.junctions.len()).unwrap();
            rows.push(json!({ "curve": n, "length": g.length, "geodesic": to_value(&g).unwrap() }));
        } else {
            rows.push(json!({ "curve": n, "length": g.length }));
        }
    }
    let j = if detail { rows.pop().unwrap() } else { json!({ "lengths": rows }) };
    Ok(Report::new(text, j))
}

fn cover(cfg: &RunConfig, file: &Path) -> Result<Report> {
    let f = cfg.load_surface(file)?;
    let sig = f.surface.stratum_signature()?;
    let dc = double_cover(&f.surface)?;
    let cs = dc.surface.stratum_signature()?;
    let (g_want, k_want) = sig.cover_counts();
    let matches = cs.genus == g_want && cs.k == k_want && cs.holonomy == 1;
    let text = format!(
        "cover α={} holonomy={}\ng_DS = {} (expected {})\nk_DS = {} (expected {})\n",
        alpha(&cs),
        if cs.holonomy == 1 { "+1" } else { "-1" },
        cs.genus,
        g_want,
        cs.k,
        k_want
    );
    let j = json!({
        "cover": sig_json(&cs),
        "g_ds": cs.genus,
        "k_ds": cs.k,
        "expected": { "g_ds": g_want, "k_ds": k_want },
        "trivial_holonomy": cs.holonomy == 1,
        "matches": matches,
    });
    if !matches {
        return Err(Error::CheckFailed(format!(
            "double cover has (g, k) = ({}, {}), expected ({}, {})",
            cs.genus, cs.k, g_want, k_want
        )));
    }
    Ok(Report::new(text, j).with_artifact(serialize_surface(&dc.surface)))
}

fn chart(cfg: &RunConfig, file: &Path) -> Result<Report> {
    let f = cfg.load_surface(file)?;
    let s = &f.surface;
    let ch = PeriodChart::build(s)?;
    let coords = ch.exact_coordinates(s)?;
    let mut text =
        format!("complex dim = {}\nreal dim = {}\nslice dim = {}\n", ch.dim(), ch.real_dim(), ch.slice_dim());
    if let Some((p, m)) = ch.eigen_dims() {
        writeln!(text, "cover eigenspaces: +1 -> {}, -1 -> {}", p, m).unwrap();
    }
    let mut rows = Vec::new();
    for (j, (b, z)) in ch.basis().iter().zip(&coords).enumerate() {
        let name = format!("{}{}.{}", if b.sign < 0 { "-" } else { "" }, s.names()[b.slot.tri], b.slot.side);
        writeln!(text, "c{} = {} = {} {}", j, name, fmt_number(&z.re), fmt_number(&z.im)).unwrap();
        rows.push(json!({ "slot": name, "re": fmt_number(&z.re), "im": fmt_number(&z.im) }));
    }
    let j = json!({
        "dim": ch.dim(),
        "real_dim": ch.real_dim(),
        "slice_dim": ch.slice_dim(),
        "eigen_dims": ch.eigen_dims(),
        "coordinates": rows,
    });
    Ok(Report::new(text, j))
}

fn perturb(cfg: &RunConfig, file: &Path, radius: f64) -> Result<Report> {
    if !(radius > 0.0 && radius.is_finite()) {
        return Err(Error::InvalidArgument("--radius must be positive".into()));
    }
    let f = cfg.load_surface(file)?;
    let ch = PeriodChart::build(&f.surface)?;
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let d: Vec<C64> =
        (0..ch.dim()).map(|_| C64::from_polar(radius * rng.gen::<f64>(), rng.gen_range(0.0..TAU))).collect();
    let p = ch.perturb(&d, true)?;
    let sig = p.stratum_signature()?;
    let curves: Vec<(String, CurveClass)> =
        f.curves.iter().map(|c| Ok((c.name.clone(), CurveClass::from_refs(&p, &c.refs)?))).collect::<Result<_>>()?;
    let max = d.iter().map(|z| z.norm()).fold(0.0, f64::max);
    let text = format!(
        "perturbed α={} max |δ| = {} area {} -> {}\n",
        alpha(&sig),
        fmt_f64(max),
        fmt_f64(f.surface.area()),
        fmt_f64(p.area())
    );
    let j = json!({ "delta": d, "max_delta": max, "area_before": f.surface.area(), "area_after": p.area(), "signature": sig_json(&sig) });
    Ok(Report::new(text, j).with_artifact(serialize_surface(&p) + &curves_text(&p, &curves)))
}

fn length_formula(cfg: &RunConfig, file: &Path, names: &[String], mode: Mode, tol: Option<f64>) -> Result<Report> {
    let f = cfg.load_surface(file)?;
    let curves = select_curves(cfg, &f, names, None)?;
    let (mode, default_tol) = match mode {
        Mode::Exact => (IntegrationMode::Exact, 1e-10),
        Mode::Quadrature => (IntegrationMode::Quadrature, 1e-8),
    };
    let tol = tol.unwrap_or(default_tol);
    let mut text = String::from("curve,length,half_integral,residual\n");
    let mut rows = Vec::new();
    let mut worst = 0.0f64;
    for (n, c) in &curves {
        let g = tighten(&f.surface, c)?;
        let r = verify_length_formula(&g, mode);
        worst = worst.max(r.residual);
        writeln!(text, "{},{},{},{:e}", n, fmt_f64(r.length), fmt_f64(r.integral), r.residual).unwrap();
        rows.push(json!({ "curve": n, "check": to_value(&r).unwrap() }));
    }
    if worst > tol {
        return Err(Error::CheckFailed(format!("residual {:e} exceeds {:e}", worst, tol)));
    }
    Ok(Report::new(text, json!({ "tolerance": tol, "max_residual": worst, "curves": rows })))
}

fn load_track(cfg: &RunConfig, file: &Path, second: bool) -> Result<TrainTrack> {
    let pd = parse_pants(&cfg.read(file)?)?;
    let (a, b) = build_tracks(&pd)?;
    Ok(if second { b } else { a })
}

fn track_build(cfg: &RunConfig, file: &Path, second: bool, emit: Emit) -> Result<Report> {
    let t = load_track(cfg, file, second)?;
    let sigma = sigma_system(&t);
    let w = positive_solution(&t);
    let dim = t.decomposition().weight_dim();
    let text = format!(
        "track {:?}: {} branches, {} switches, weight space dim {}, |σ| = {}\n",
        t.turn,
        t.branches.len(),
        t.switches.len(),
        dim,
        sigma.len()
    );
    let artifact = match emit {
        Emit::Weights => weights_csv(&t, &w),
        Emit::Intersections => intersections_csv(&sigma, &sigma.intersections(&w)),
    };
    let j = json!({
        "turn": format!("{:?}", t.turn),
        "branches": t.branches.iter().map(|b| b.name.clone()).collect::<Vec<_>>(),
        "switches": t.switches.len(),
        "weight_dim": dim,
        "sigma": sigma.curves.iter().map(|c| c.name.clone()).collect::<Vec<_>>(),
    });
    Ok(Report::new(text, j).with_artifact(artifact))
}

fn read_intersections(cfg: &RunConfig, p: &Path, names: &[String]) -> Result<Vec<Q>> {
    let text = cfg.read(p)?;
    let mut rd = csv::ReaderBuilder::new().trim(csv::Trim::All).from_reader(text.as_bytes());
    let mut vals: Vec<Option<Q>> = vec![None; names.len()];
    for (i, rec) in rd.records().enumerate() {
        let line = i + 2;
        let rec = rec.map_err(|e| Error::Parse { line, col: 1, msg: e.to_string() })?;
        if rec.len() != 2 {
            return Err(Error::Parse { line, col: 1, msg: "expected `curve,intersection`".into() });
        }
        let k = names.iter().position(|n| n == &rec[0]).ok_or_else(|| Error::Parse {
            line,
            col: 1,
            msg: format!("unknown curve {}", &rec[0]),
        })?;
        let v = parse_q(&rec[1]).ok_or_else(|| Error::Parse {
            line,
            col: rec[0].len() + 2,
            msg: format!("bad number {}", &rec[1]),
        })?;
        vals[k] = Some(v);
    }
    vals.into_iter()
        .zip(names)
        .map(|(v, n)| v.ok_or_else(|| Error::InvalidArgument(format!("missing intersection for {}", n))))
        .collect()
}

fn track_recover(cfg: &RunConfig, file: &Path, input: &Path, second: bool) -> Result<Report> {
    let t = load_track(cfg, file, second)?;
    let sigma = sigma_system(&t);
    let names: Vec<String> = sigma.curves.iter().map(|c| c.name.clone()).collect();
    let i = read_intersections(cfg, input, &names)?;
    let a = recovery_matrix(&sigma)?;
    let w = a.mul_vec(&i);
    if !t.satisfies_switches(&w) || sigma.intersections(&w) != i {
        return Err(Error::CheckFailed("intersection numbers are not realized by a weight on this track".into()));
    }
    let text = format!("recovered {} branch weights from {} intersection numbers\n", w.len(), i.len());
    let j = json!({ "weights": w.iter().map(crate::numeric::fmt_q).collect::<Vec<_>>() });
    Ok(Report::new(text, j).with_artifact(weights_csv(&t, &w)))
}

fn triangulate(cfg: &RunConfig, file: &Path) -> Result<Report> {
    let f = cfg.load_surface(file)?;
    let t = saddle_triangulation(&f.surface)?;
    let text = format!("flips = {}\nedges = {} (expected {})\n", t.flips, t.edge_count, t.expected_edges);
    Ok(Report::new(text, to_value(&t).unwrap()).with_artifact(serialize_surface(&t.surface)))
}

fn rigidity(cfg: &RunConfig, file: &Path, doublings: u32, audit: usize) -> Result<Report> {
    let f = cfg.load_surface(file)?;
    let tri = saddle_triangulation(&f.surface)?;
    let mut opts = default_options(&tri.surface);
    opts.doublings = doublings;
    let set = certify_triangulated(&tri.surface, tri.flips, opts)?;
    let mut text = String::from("edge,case,fallback,curves,edge_length,residual,radius\n");
    for c in &set.certificates {
        writeln!(
            text,
            "{},{},{},{},{},{:e},{:e}",
            c.edge,
            c.case.number(),
            c.fallback,
            c.curves.len(),
            fmt_f64(c.edge_length),
            c.residual,
            c.radius
        )
        .unwrap();
    }
    writeln!(text, "edges = {} (expected {})", set.edge_count, set.expected_edges).unwrap();
    writeln!(text, "|Σ| = {} (bound {})", set.sigma_size, set.sigma_bound).unwrap();
    writeln!(text, "rank = {} (expected {})", set.rank, set.expected_rank).unwrap();
    writeln!(text, "radius = {:e}", set.radius).unwrap();
    let mut j = to_value(&set).unwrap();
    if audit > 0 {
        let a = audit_perturbations(&set, audit, 0.9, cfg.seed)?;
        writeln!(
            text,
            "audit: {} trials, max residual {:e}, shape changes {}",
            a.trials, a.max_residual, a.shape_changes
        )
        .unwrap();
        j["audit"] = to_value(&a).unwrap();
    }
    let curves: Vec<(String, CurveClass)> =
        set.sigma.iter().enumerate().map(|(i, c)| (format!("s{}", i), c.clone())).collect();
    let artifact = serialize_surface(&set.surface) + &curves_text(&set.surface, &curves);
    if !(set.counts_ok() && set.rank_ok()) {
        return Err(Error::CheckFailed(text));
    }
    Ok(Report::new(text, j).with_artifact(artifact))
}

fn jacobian(cfg: &RunConfig, file: &Path, names: &[String], extra: Option<&Path>) -> Result<Report> {
    let f = cfg.load_surface(file)?;
    let curves = select_curves(cfg, &f, names, extra)?;
    let ch = PeriodChart::build(&f.surface)?;
    let geods = curves.iter().map(|(_, c)| tighten(&f.surface, c)).collect::<Result<Vec<_>>>()?;
    let mut jac = spectrum_jacobian(&ch, &geods)?;
    let top = jac.singular_values.iter().copied().fold(0.0, f64::max);
    jac.rank = jac.singular_values.iter().filter(|&&x| x > cfg.rank_tol * top).count();
    let rep = nullity_report(&ch, &geods, &jac);
    let text = format!(
        "curves = {}\nslice dim = {}\nrank = {}\nnullity = {}\nbound 2k0-2g+ε+1 = {} (reported only; hypothesis proxy {}, direction gap {})\nsingular values = {}\nstability radius = {:e}\n",
        rep.curves,
        rep.slice_dim,
        rep.rank,
        rep.nullity,
        rep.bound,
        rep.hypothesis_proxy,
        fmt_f64(rep.direction_gap),
        jac.singular_values.iter().map(|x| format!("{:e}", x)).collect::<Vec<_>>().join(" "),
        jac.radius
    );
    let j = json!({ "report": to_value(&rep).unwrap(), "singular_values": jac.singular_values, "radius": jac.radius });
    Ok(Report::new(text, j))
}

fn deform(
    cfg: &RunConfig,
    file: &Path,
    names: &[String],
    extra: Option<&Path>,
    steps: usize,
    h: f64,
) -> Result<Report> {
    if !(h > 0.0 && h.is_finite()) {
        return Err(Error::InvalidArgument("--h must be positive".into()));
    }
    let f = cfg.load_surface(file)?;
    let curves = select_curves(cfg, &f, names, extra)?;
    let cs: Vec<CurveClass> = curves.into_iter().map(|(_, c)| c).collect();
    let opts = PathOptions { steps, h, seed: cfg.seed, ..PathOptions::default() };
    let path = follow_isospectral_path(&f.surface, &cs, &opts)?;
    path.check()?;
    let text = format!(
        "steps = {}\nmax step drift = {:e}\ncumulative drift = {:e}\ntotal drift = {:e}\n",
        path.steps.len(),
        path.max_step_drift,
        path.cumulative_drift,
        path.total_drift
    );
    if path.cumulative_drift > cfg.drift_tol {
        return Err(Error::CheckFailed(format!(
            "cumulative drift {:e} exceeds {:e}",
            path.cumulative_drift, cfg.drift_tol
        )));
    }
    Ok(Report::new(text, to_value(&path).unwrap()).with_artifact(path.waypoints_csv()))
}
