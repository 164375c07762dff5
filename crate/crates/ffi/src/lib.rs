//! C ABI over `semiflat`. Surfaces are opaque handles created by
//! [`sf_surface_parse`] and released with [`sf_surface_free`]. Every call
//! returns an [`SfStatus`]; on failure the message is available from
//! [`sf_last_error_message`] until the next failing call on the same thread.

use semiflat::deformation::{verify_length_formula, IntegrationMode};
use semiflat::format::{parse_surface, serialize_curve, serialize_surface, SurfaceFile};
use semiflat::geodesics::saddle::DEFAULT_BUDGET;
use semiflat::geodesics::{enumerate_saddle_connections, tighten, CurveClass, Geodesic};
use semiflat::rigidity::certify_surface;
use semiflat::Error;
use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};

/// Status codes. Values from 10 on are the library error classes in the
/// order of `Error::CODES`.
#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SfStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidUtf8 = 2,
    Panic = 3,
    ParseError = 10,
    UngluedSlot = 11,
    TriangleIneq = 12,
    GluingMismatch = 13,
    Disconnected = 14,
    BadConeAngle = 15,
    GaussBonnetViolation = 16,
    ComplexityTooLow = 17,
    TrivialHolonomyInput = 18,
    InessentialCurve = 19,
    Nonconvergent = 20,
    BudgetExceeded = 21,
    RankDefect = 22,
    CombinatoricsMismatch = 23,
    DegenerateTriangle = 24,
    ZeroFirstCoordinate = 25,
    SingularSystem = 26,
    DegenerateInput = 27,
    NotFoundWithinBudget = 28,
    ConstructionFailed = 29,
    AngleViolation = 30,
    UnstablePoint = 31,
    NullityZero = 32,
    StabilityWall = 33,
    InvalidCurve = 34,
    InvalidArgument = 35,
    CheckFailed = 36,
    IoError = 37,
}

const DOMAIN: [SfStatus; 28] = [
    SfStatus::ParseError,
    SfStatus::UngluedSlot,
    SfStatus::TriangleIneq,
    SfStatus::GluingMismatch,
    SfStatus::Disconnected,
    SfStatus::BadConeAngle,
    SfStatus::GaussBonnetViolation,
    SfStatus::ComplexityTooLow,
    SfStatus::TrivialHolonomyInput,
    SfStatus::InessentialCurve,
    SfStatus::Nonconvergent,
    SfStatus::BudgetExceeded,
    SfStatus::RankDefect,
    SfStatus::CombinatoricsMismatch,
    SfStatus::DegenerateTriangle,
    SfStatus::ZeroFirstCoordinate,
    SfStatus::SingularSystem,
    SfStatus::DegenerateInput,
    SfStatus::NotFoundWithinBudget,
    SfStatus::ConstructionFailed,
    SfStatus::AngleViolation,
    SfStatus::UnstablePoint,
    SfStatus::NullityZero,
    SfStatus::StabilityWall,
    SfStatus::InvalidCurve,
    SfStatus::InvalidArgument,
    SfStatus::CheckFailed,
    SfStatus::IoError,
];

impl From<&Error> for SfStatus {
    fn from(e: &Error) -> Self {
        DOMAIN[(e.status() - 10) as usize]
    }
}

/// A parsed surface together with the curves of its file.
pub struct SfSurface {
    file: SurfaceFile,
}

#[repr(C)]
#[derive(Clone, Copy, Debug, Default)]
pub struct SfInfo {
    pub genus: i64,
    /// Marked points (poles and regular marked points).
    pub n: usize,
    /// Zeros plus marked points.
    pub k: usize,
    pub holonomy: i32,
    /// Real dimension of the stratum.
    pub dim_stratum: i64,
    /// Real dimension of the unit-area slice modulo rotation.
    pub dim_slice: i64,
    pub triangles: usize,
    pub edges: usize,
    pub curves: usize,
    pub area: f64,
}

#[repr(C)]
#[derive(Clone, Copy, Debug, Default)]
pub struct SfRigidity {
    pub edge_count: usize,
    pub expected_edges: i64,
    pub sigma_size: usize,
    pub sigma_bound: i64,
    pub rank: usize,
    pub expected_rank: i64,
    pub radius: f64,
    pub max_residual: f64,
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(msg: String) {
    let c = CString::new(msg.replace('\0', " ")).unwrap();
    LAST_ERROR.with(|e| *e.borrow_mut() = Some(c));
}

enum Fail {
    Status(SfStatus, String),
    Lib(Error),
}

impl From<Error> for Fail {
    fn from(e: Error) -> Self {
        Fail::Lib(e)
    }
}

fn guard(f: impl FnOnce() -> Result<(), Fail>) -> SfStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => SfStatus::Ok,
        Ok(Err(Fail::Lib(e))) => {
            set_error(format!("{}: {}", e.code(), e));
            SfStatus::from(&e)
        }
        Ok(Err(Fail::Status(s, m))) => {
            set_error(m);
            s
        }
        Err(_) => {
            set_error("internal panic".into());
            SfStatus::Panic
        }
    }
}

fn null() -> Fail {
    Fail::Status(SfStatus::NullPointer, "null pointer argument".into())
}

unsafe fn text<'a>(p: *const c_char) -> Result<&'a str, Fail> {
    if p.is_null() {
        return Err(null());
    }
    CStr::from_ptr(p).to_str().map_err(|_| Fail::Status(SfStatus::InvalidUtf8, "argument is not UTF-8".into()))
}

unsafe fn handle<'a>(p: *const SfSurface) -> Result<&'a SfSurface, Fail> {
    p.as_ref().ok_or_else(null)
}

fn curve(s: &SfSurface, name: &str) -> Result<Geodesic, Fail> {
    let spec = s
        .file
        .curves
        .iter()
        .find(|c| c.name == name)
        .ok_or_else(|| Error::InvalidArgument(format!("no curve named {}", name)))?;
    let c = CurveClass::from_refs(&s.file.surface, &spec.refs)?;
    Ok(tighten(&s.file.surface, &c)?)
}

/// Library version as a static NUL-terminated string.
#[no_mangle]
pub extern "C" fn sf_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr() as *const c_char
}

/// Message of the last failure on this thread, or NULL. Valid until the
/// next failing call on the same thread.
#[no_mangle]
pub extern "C" fn sf_last_error_message() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(std::ptr::null(), |c| c.as_ptr()))
}

/// # Safety
/// `text` must be a NUL-terminated string and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn sf_surface_parse(text: *const c_char, out: *mut *mut SfSurface) -> SfStatus {
    guard(|| {
        if out.is_null() {
            return Err(null());
        }
        let file = parse_surface(self::text(text)?)?;
        *out = Box::into_raw(Box::new(SfSurface { file }));
        Ok(())
    })
}

/// # Safety
/// `s` must come from [`sf_surface_parse`] and not have been freed; NULL is
/// ignored.
#[no_mangle]
pub unsafe extern "C" fn sf_surface_free(s: *mut SfSurface) {
    if !s.is_null() {
        drop(Box::from_raw(s));
    }
}

/// # Safety
/// `s` must be a live handle and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn sf_surface_info(s: *const SfSurface, out: *mut SfInfo) -> SfStatus {
    guard(|| {
        let h = handle(s)?;
        let out = out.as_mut().ok_or_else(null)?;
        let surf = &h.file.surface;
        let sig = surf.stratum_signature()?;
        *out = SfInfo {
            genus: sig.genus,
            n: sig.n,
            k: sig.k,
            holonomy: sig.holonomy as i32,
            dim_stratum: sig.dim_stratum(),
            dim_slice: sig.dim_slice(),
            triangles: surf.n_tris(),
            edges: surf.edges().len(),
            curves: h.file.curves.len(),
            area: surf.area(),
        };
        Ok(())
    })
}

/// Surface and curves in the text format; release with [`sf_string_free`].
///
/// # Safety
/// `s` must be a live handle and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn sf_surface_serialize(s: *const SfSurface, out: *mut *mut c_char) -> SfStatus {
    guard(|| {
        let h = handle(s)?;
        if out.is_null() {
            return Err(null());
        }
        let mut t = serialize_surface(&h.file.surface);
        for c in &h.file.curves {
            t += &serialize_curve(&c.name, &c.refs);
            t.push('\n');
        }
        *out = CString::new(t).unwrap().into_raw();
        Ok(())
    })
}

/// # Safety
/// `p` must come from this library and not have been freed; NULL is
/// ignored.
#[no_mangle]
pub unsafe extern "C" fn sf_string_free(p: *mut c_char) {
    if !p.is_null() {
        drop(CString::from_raw(p));
    }
}

/// Length of the geodesic representative of the named curve.
///
/// # Safety
/// `s` must be a live handle, `name` NUL-terminated and `out` valid.
#[no_mangle]
pub unsafe extern "C" fn sf_curve_length(s: *const SfSurface, name: *const c_char, out: *mut f64) -> SfStatus {
    guard(|| {
        let h = handle(s)?;
        let out = out.as_mut().ok_or_else(null)?;
        *out = curve(h, text(name)?)?.length;
        Ok(())
    })
}

/// Relative residual of length = ½∫ i(ν(θ), c) dθ; `quadrature` selects
/// numerical integration instead of the exact piecewise formula.
///
/// # Safety
/// `s` must be a live handle, `name` NUL-terminated and `out` valid.
#[no_mangle]
pub unsafe extern "C" fn sf_length_formula_residual(
    s: *const SfSurface,
    name: *const c_char,
    quadrature: bool,
    out: *mut f64,
) -> SfStatus {
    guard(|| {
        let h = handle(s)?;
        let out = out.as_mut().ok_or_else(null)?;
        let g = curve(h, text(name)?)?;
        let mode = if quadrature { IntegrationMode::Quadrature } else { IntegrationMode::Exact };
        *out = verify_length_formula(&g, mode).residual;
        Ok(())
    })
}

/// Number of unoriented saddle connections of length at most `max_length`.
///
/// # Safety
/// `s` must be a live handle and `out` valid.
#[no_mangle]
pub unsafe extern "C" fn sf_saddle_count(s: *const SfSurface, max_length: f64, out: *mut usize) -> SfStatus {
    guard(|| {
        let h = handle(s)?;
        let out = out.as_mut().ok_or_else(null)?;
        if !(max_length > 0.0 && max_length.is_finite()) {
            return Err(Error::InvalidArgument("max_length must be positive".into()).into());
        }
        *out = enumerate_saddle_connections(&h.file.surface, max_length, DEFAULT_BUDGET)?.len();
        Ok(())
    })
}

/// Triangulates, builds the edge-length certificates and reports counts and
/// the rank of their length spectrum.
///
/// # Safety
/// `s` must be a live handle and `out` valid.
#[no_mangle]
pub unsafe extern "C" fn sf_rigidity_certify(s: *const SfSurface, out: *mut SfRigidity) -> SfStatus {
    guard(|| {
        let h = handle(s)?;
        let out = out.as_mut().ok_or_else(null)?;
        let r = certify_surface(&h.file.surface)?;
        *out = SfRigidity {
            edge_count: r.edge_count,
            expected_edges: r.expected_edges,
            sigma_size: r.sigma_size,
            sigma_bound: r.sigma_bound,
            rank: r.rank,
            expected_rank: r.expected_rank,
            radius: r.radius,
            max_residual: r.max_residual,
        };
        Ok(())
    })
}
