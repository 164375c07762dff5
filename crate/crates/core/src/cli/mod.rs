//! Command-line front end: argument handling, input resolution and report
//! assembly. Structured output (`--json`) is one object per run:
//!
//! ```text
//! {"header": {...}, "command": "<name>", "result": {...}, "artifact": "<text or null>"}
//! ```
//!
//! Failures print `error[<CODE>]: <message>` on stderr (or
//! `{"header": ..., "error": {"code": ..., "message": ...}}` on stdout with
//! `--json`) and exit with [`Error::status`].

mod commands;

use crate::deformation::RANK_TOL;
use crate::error::{Error, Result};
use crate::format::{parse_curves, parse_surface, CurveSpec, SurfaceFile};
use crate::geodesics::saddle::DEFAULT_BUDGET;
use crate::geodesics::CurveClass;
use crate::surface::ANGLE_SNAP_TOL;
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};
use std::io::Write;
use std::path::{Path, PathBuf};

/// Directory searched for relative input paths that do not exist as given.
pub const CORPUS_ENV: &str = "SEMIFLAT_CORPUS";

#[derive(Parser, Debug)]
#[command(name = "semiflat", version, about = "Flat geometry of semi-translation surfaces")]
pub struct Cli {
    /// Emit one JSON object instead of text.
    #[arg(long, global = true)]
    pub json: bool,
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,
    /// Allowed cumulative spectrum drift along deformation paths.
    #[arg(long, global = true, default_value_t = 1e-8)]
    pub drift_tol: f64,
    /// Relative singular value threshold for numerical rank.
    #[arg(long, global = true, default_value_t = RANK_TOL)]
    pub rank_tol: f64,
    /// Cap on triangles unfolded per saddle connection search.
    #[arg(long, global = true, default_value_t = DEFAULT_BUDGET)]
    pub budget: usize,
    /// Write the command's artifact (surface, CSV) here instead of stdout.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Args, Debug, Clone)]
pub struct CurveArgs {
    /// Comma-separated curve names; all curves of the input when omitted.
    #[arg(long, value_delimiter = ',')]
    pub curves: Vec<String>,
    /// Extra file of `curve` lines.
    #[arg(long)]
    pub curves_file: Option<PathBuf>,
}

#[derive(Copy, Clone, Debug, ValueEnum)]
pub enum Mode {
    Exact,
    Quadrature,
}

#[derive(Copy, Clone, Debug, ValueEnum)]
pub enum Emit {
    Weights,
    Intersections,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Parse a surface or pants file and check its invariants.
    Validate { file: PathBuf },
    /// Stratum signature and dimensions.
    Info { file: PathBuf },
    /// Saddle connections up to a length, as CSV.
    Saddles {
        file: PathBuf,
        #[arg(long)]
        max_length: f64,
    },
    /// Length of the geodesic representative of one curve.
    Length {
        file: PathBuf,
        #[arg(long)]
        curve: String,
        #[arg(long)]
        curves_file: Option<PathBuf>,
    },
    /// Lengths of several curves.
    Spectrum {
        file: PathBuf,
        #[command(flatten)]
        sel: CurveArgs,
    },
    /// Orientation double cover of a surface with holonomy −1.
    DoubleCover { file: PathBuf },
    /// Period chart basis and coordinates.
    Chart { file: PathBuf },
    /// Random in-stratum perturbation of sup-norm below `radius`.
    Perturb {
        file: PathBuf,
        #[arg(long, default_value_t = 1e-3)]
        radius: f64,
    },
    /// Length as half the integral of foliation intersections.
    #[command(name = "verify-length-formula")]
    VerifyLengthFormula {
        file: PathBuf,
        /// Curves to check (repeatable); all curves when omitted.
        #[arg(long)]
        curve: Vec<String>,
        #[arg(long, value_enum, default_value_t = Mode::Exact)]
        mode: Mode,
        /// Largest accepted residual; 1e-10 exact, 1e-8 quadrature by default.
        #[arg(long)]
        tol: Option<f64>,
    },
    /// Train tracks on a pants decomposition.
    Track {
        #[command(subcommand)]
        cmd: TrackCommand,
    },
    /// Delaunay saddle triangulation.
    Triangulate { file: PathBuf },
    /// Edge-length certificates and the rank of their length spectrum.
    RigidityCert {
        file: PathBuf,
        /// Budget doublings for segment searches.
        #[arg(long, default_value_t = 5)]
        doublings: u32,
        /// Re-check the certificates at this many random nearby points.
        #[arg(long, default_value_t = 0)]
        audit: usize,
    },
    /// Jacobian of the length spectrum on the normalized slice.
    Jacobian {
        file: PathBuf,
        #[command(flatten)]
        sel: CurveArgs,
    },
    /// Follow a path along which the given lengths stay constant.
    Deform {
        file: PathBuf,
        #[command(flatten)]
        sel: CurveArgs,
        #[arg(long, default_value_t = 50)]
        steps: usize,
        #[arg(long, default_value_t = 1e-3)]
        h: f64,
    },
}

#[derive(Subcommand, Debug)]
pub enum TrackCommand {
    /// Build the track and write a positive weight (or its intersections).
    Build {
        file: PathBuf,
        /// Use the second standard track.
        #[arg(long)]
        second: bool,
        #[arg(long, value_enum, default_value_t = Emit::Weights)]
        emit: Emit,
    },
    /// Recover branch weights from an intersection CSV.
    Recover {
        file: PathBuf,
        #[arg(long)]
        intersections: PathBuf,
        #[arg(long)]
        second: bool,
    },
}

impl Command {
    pub fn name(&self) -> &'static str {
        match self {
            Command::Validate { .. } => "validate",
            Command::Info { .. } => "info",
            Command::Saddles { .. } => "saddles",
            Command::Length { .. } => "length",
            Command::Spectrum { .. } => "spectrum",
            Command::DoubleCover { .. } => "double-cover",
            Command::Chart { .. } => "chart",
            Command::Perturb { .. } => "perturb",
            Command::VerifyLengthFormula { .. } => "verify-length-formula",
            Command::Track { cmd: TrackCommand::Build { .. } } => "track build",
            Command::Track { cmd: TrackCommand::Recover { .. } } => "track recover",
            Command::Triangulate { .. } => "triangulate",
            Command::RigidityCert { .. } => "rigidity-cert",
            Command::Jacobian { .. } => "jacobian",
            Command::Deform { .. } => "deform",
        }
    }
}

/// Settings shared by every command, echoed in each report header.
#[derive(Clone, Debug)]
pub struct RunConfig {
    pub json: bool,
    pub seed: u64,
    pub angle_snap: f64,
    pub drift_tol: f64,
    pub rank_tol: f64,
    pub budget: usize,
    pub out: Option<PathBuf>,
    pub corpus: Option<PathBuf>,
}

impl RunConfig {
    pub fn from_cli(cli: &Cli, corpus: Option<PathBuf>) -> Result<RunConfig> {
        for (name, v) in [("drift-tol", cli.drift_tol), ("rank-tol", cli.rank_tol)] {
            if !(v > 0.0 && v.is_finite()) {
                return Err(Error::InvalidArgument(format!("--{} must be positive", name)));
            }
        }
        if cli.budget == 0 {
            return Err(Error::InvalidArgument("--budget must be positive".into()));
        }
        Ok(RunConfig {
            json: cli.json,
            seed: cli.seed,
            angle_snap: ANGLE_SNAP_TOL,
            drift_tol: cli.drift_tol,
            rank_tol: cli.rank_tol,
            budget: cli.budget,
            out: cli.out.clone(),
            corpus,
        })
    }

    pub fn header_json(&self) -> Value {
        json!({
            "tool": "semiflat",
            "version": env!("CARGO_PKG_VERSION"),
            "seed": self.seed,
            "tolerances": {
                "angle_snap": self.angle_snap,
                "spectrum_drift": self.drift_tol,
                "rank": self.rank_tol,
            },
            "budgets": { "unfolding": self.budget },
        })
    }

    pub fn header_text(&self) -> String {
        format!(
            "# semiflat {}\n# seed {}\n# tolerances angle_snap={:e} spectrum_drift={:e} rank={:e}\n# budgets unfolding={}\n",
            env!("CARGO_PKG_VERSION"),
            self.seed,
            self.angle_snap,
            self.drift_tol,
            self.rank_tol,
            self.budget
        )
    }

    /// Input path as given, or under the corpus directory when it does not
    /// exist and is relative.
    pub fn resolve(&self, p: &Path) -> Result<PathBuf> {
        if p.exists() {
            return Ok(p.to_path_buf());
        }
        if p.is_relative() {
            if let Some(dir) = &self.corpus {
                let q = dir.join(p);
                if q.exists() {
                    return Ok(q);
                }
            }
        }
        Err(Error::Io(format!("{}: not found", p.display())))
    }

    pub fn read(&self, p: &Path) -> Result<String> {
        let path = self.resolve(p)?;
        std::fs::read_to_string(&path).map_err(|e| Error::Io(format!("{}: {}", path.display(), e)))
    }

    pub fn load_surface(&self, p: &Path) -> Result<SurfaceFile> {
        parse_surface(&self.read(p)?)
    }
}

/// Curves of a surface file plus an optional curve file, picked by name.
pub fn select_curves(
    cfg: &RunConfig,
    f: &SurfaceFile,
    names: &[String],
    extra: Option<&Path>,
) -> Result<Vec<(String, CurveClass)>> {
    let mut pool: Vec<CurveSpec> = f.curves.clone();
    if let Some(p) = extra {
        pool.extend(parse_curves(&cfg.read(p)?)?);
    }
    let picked: Vec<&CurveSpec> = if names.is_empty() {
        pool.iter().collect()
    } else {
        names
            .iter()
            .map(|n| {
                pool.iter()
                    .find(|c| &c.name == n)
                    .ok_or_else(|| Error::InvalidArgument(format!("no curve named {}", n)))
            })
            .collect::<Result<_>>()?
    };
    if picked.is_empty() {
        return Err(Error::InvalidArgument("no curves given".into()));
    }
    picked.into_iter().map(|c| Ok((c.name.clone(), CurveClass::from_refs(&f.surface, &c.refs)?))).collect()
}

/// What a command produces: a text body, a JSON result and optionally an
/// artifact (surface file, CSV).
pub struct Report {
    pub text: String,
    pub json: Value,
    pub artifact: Option<String>,
}

impl Report {
    pub fn new(text: String, json: Value) -> Report {
        Report { text, json, artifact: None }
    }
    pub fn with_artifact(mut self, a: String) -> Report {
        self.artifact = Some(a);
        self
    }
}

fn emit(cfg: &RunConfig, name: &str, r: Report, out: &mut dyn Write) -> Result<()> {
    let mut artifact = r.artifact;
    if let (Some(path), Some(a)) = (&cfg.out, &artifact) {
        std::fs::write(path, a).map_err(|e| Error::Io(format!("{}: {}", path.display(), e)))?;
        artifact = None;
    }
    if cfg.json {
        let v = json!({ "header": cfg.header_json(), "command": name, "result": r.json, "artifact": artifact });
        writeln!(out, "{}", serde_json::to_string_pretty(&v).unwrap())?;
    } else {
        write!(out, "{}{}", cfg.header_text(), r.text)?;
        if let Some(a) = artifact {
            write!(out, "{}", a)?;
        }
    }
    Ok(())
}

fn emit_error(cfg: Option<&RunConfig>, e: &Error, out: &mut dyn Write, err: &mut dyn Write) {
    match cfg {
        Some(c) if c.json => {
            let v = json!({ "header": c.header_json(), "error": { "code": e.code(), "message": e.to_string() } });
            let _ = writeln!(out, "{}", serde_json::to_string_pretty(&v).unwrap());
        }
        _ => {
            let _ = writeln!(err, "error[{}]: {}", e.code(), e);
        }
    }
}

/// Runs one command line; returns the process exit status.
pub fn run<I, T>(argv: I, corpus: Option<PathBuf>, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(c) => c,
        Err(e) => {
            let code = e.exit_code();
            let text = e.render().to_string();
            if code == 0 {
                let _ = write!(out, "{}", text);
            } else {
                let _ = write!(err, "{}", text);
            }
            return code;
        }
    };
    let cfg = match RunConfig::from_cli(&cli, corpus) {
        Ok(c) => c,
        Err(e) => {
            emit_error(None, &e, out, err);
            return e.status();
        }
    };
    match commands::execute(&cfg, &cli.command).and_then(|r| emit(&cfg, cli.command.name(), r, out)) {
        Ok(()) => 0,
        Err(e) => {
            emit_error(Some(&cfg), &e, out, err);
            e.status()
        }
    }
}

/// Entry point of the `semiflat` binary.
pub fn main() -> i32 {
    let corpus = std::env::var_os(CORPUS_ENV).map(PathBuf::from);
    let stdout = std::io::stdout();
    let stderr = std::io::stderr();
    run(std::env::args_os(), corpus, &mut stdout.lock(), &mut stderr.lock())
}
