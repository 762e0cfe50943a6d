//! C ABI over `rank2spec`.
//!
//! Every function returns an `R2sStatus` and writes results through out
//! pointers. Handles are opaque and must be released with their `_free`
//! function. Strings returned to the caller are owned by the caller and are
//! released with `r2s_string_free`. After a non-OK status,
//! `r2s_last_error_message` describes the failure on the calling thread.

use std::cell::RefCell;
use std::ffi::{CStr, CString};
use std::os::raw::{c_char, c_int};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use rank2spec::graphs::{build_graph, moments_exact, Family, FusionGraph};
use rank2spec::groups::{build_subgroup, FiniteSubgroup, GroupName, Weight};
use rank2spec::measures::{eval_density, find_entry, DensityEntry};
use rank2spec::orbit::{character, orthogonality_check, OrbitKind};
use rank2spec::{checks, seq, Error};

#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum R2sStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidArgument = 2,
    UnknownGroup = 3,
    Numerical = 4,
    Overflow = 5,
    Internal = 6,
    Panic = 7,
}

#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum R2sFamily {
    G = 0,
    H = 1,
}

#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum R2sOrbitKind {
    C = 0,
    S = 1,
}

pub struct R2sGroup(FiniteSubgroup);
pub struct R2sGraph(FusionGraph);
pub struct R2sDensity(DensityEntry);

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(msg: String) {
    let c = CString::new(msg.replace('\0', " ")).unwrap_or_default();
    LAST_ERROR.with(|e| *e.borrow_mut() = Some(c));
}

fn status_of(e: &Error) -> R2sStatus {
    match e {
        Error::UnknownGroup(..) => R2sStatus::UnknownGroup,
        Error::InvalidArgument(_)
        | Error::NotReflectionGroup(_)
        | Error::RadiusTooSmall { .. }
        | Error::OutsideDomain(..)
        | Error::OnBoundary(_) => R2sStatus::InvalidArgument,
        Error::NoConvergence { .. } => R2sStatus::Numerical,
        Error::SupportCap(_) => R2sStatus::Overflow,
        _ => R2sStatus::Internal,
    }
}

/// Runs `f`, turning errors and panics into a status and the thread's last error.
fn guard<F: FnOnce() -> Result<(), (R2sStatus, String)>>(f: F) -> R2sStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => R2sStatus::Ok,
        Ok(Err((s, msg))) => {
            set_error(msg);
            s
        }
        Err(p) => {
            let msg = p
                .downcast_ref::<&str>()
                .map(|s| s.to_string())
                .or_else(|| p.downcast_ref::<String>().cloned())
                .unwrap_or_else(|| "panic".into());
            set_error(format!("panic: {msg}"));
            R2sStatus::Panic
        }
    }
}

fn lib(e: Error) -> (R2sStatus, String) {
    (status_of(&e), e.to_string())
}

fn null(what: &str) -> (R2sStatus, String) {
    (R2sStatus::NullPointer, format!("{what} is null"))
}

unsafe fn read_str<'a>(p: *const c_char, what: &str) -> Result<&'a str, (R2sStatus, String)> {
    if p.is_null() {
        return Err(null(what));
    }
    CStr::from_ptr(p)
        .to_str()
        .map_err(|_| (R2sStatus::InvalidArgument, format!("{what} is not UTF-8")))
}

unsafe fn write_out<T>(out: *mut T, v: T) -> Result<(), (R2sStatus, String)> {
    if out.is_null() {
        return Err(null("output pointer"));
    }
    out.write(v);
    Ok(())
}

fn to_c(s: String) -> *mut c_char {
    CString::new(s.replace('\0', " ")).unwrap_or_default().into_raw()
}

fn family(f: R2sFamily) -> Family {
    match f {
        R2sFamily::G => Family::G,
        R2sFamily::H => Family::H,
    }
}

/// Message for the last failure on this thread, or null. Free with `r2s_string_free`.
#[no_mangle]
pub extern "C" fn r2s_last_error_message() -> *mut c_char {
    LAST_ERROR.with(|e| match &*e.borrow() {
        Some(c) => c.clone().into_raw(),
        None => ptr::null_mut(),
    })
}

/// # Safety
/// `s` must come from this library and not have been freed.
#[no_mangle]
pub unsafe extern "C" fn r2s_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// Library version as a static string.
#[no_mangle]
pub extern "C" fn r2s_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr().cast()
}

/// # Safety
/// `name` must be a NUL-terminated string; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn r2s_group_new(name: *const c_char, out: *mut *mut R2sGroup) -> R2sStatus {
    guard(|| {
        let name: GroupName = read_str(name, "name")?.parse().map_err(lib)?;
        write_out(out, Box::into_raw(Box::new(R2sGroup(build_subgroup(name)))))
    })
}

/// # Safety
/// `g` must come from `r2s_group_new` and not have been freed.
#[no_mangle]
pub unsafe extern "C" fn r2s_group_free(g: *mut R2sGroup) {
    if !g.is_null() {
        drop(Box::from_raw(g));
    }
}

/// # Safety
/// `g` must be a live group handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn r2s_group_order(g: *const R2sGroup, out: *mut usize) -> R2sStatus {
    guard(|| {
        let g = g.as_ref().ok_or_else(|| null("group"))?;
        write_out(out, g.0.order())
    })
}

/// Character of the irreducible with highest weight `(l1, l2)` as
/// `(e1,e2): coeff` lines.
///
/// # Safety
/// `g` must be a live group handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn r2s_character_text(g: *const R2sGroup, l1: i64, l2: i64, out: *mut *mut c_char) -> R2sStatus {
    guard(|| {
        let g = g.as_ref().ok_or_else(|| null("group"))?;
        let ch = character(&g.0, Weight::new(l1, l2)).map_err(lib)?;
        write_out(out, to_c(ch.poly.to_text()))
    })
}

/// Constant term of `F_a * conj(F_b)` for C- or S-functions. Fits in 64 bits
/// since it is 0 or a multiple of the group order.
///
/// # Safety
/// `g` must be a live group handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn r2s_orthogonality(
    g: *const R2sGroup,
    kind: R2sOrbitKind,
    a1: i64,
    a2: i64,
    b1: i64,
    b2: i64,
    out: *mut i64,
) -> R2sStatus {
    guard(|| {
        let g = g.as_ref().ok_or_else(|| null("group"))?;
        let kind = match kind {
            R2sOrbitKind::C => OrbitKind::C,
            R2sOrbitKind::S => OrbitKind::S,
        };
        let v = orthogonality_check(&g.0, Weight::new(a1, a2), Weight::new(b1, b2), kind);
        let v = i64::try_from(&v).map_err(|_| (R2sStatus::Overflow, format!("{v} exceeds 64 bits")))?;
        write_out(out, v)
    })
}

/// # Safety
/// `group` must be a NUL-terminated string; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn r2s_graph_new(
    fam: R2sFamily,
    group: *const c_char,
    rho1: i64,
    rho2: i64,
    radius: i64,
    out: *mut *mut R2sGraph,
) -> R2sStatus {
    guard(|| {
        let group: GroupName = read_str(group, "group")?.parse().map_err(lib)?;
        let g = build_graph(family(fam), group, Weight::new(rho1, rho2), radius).map_err(lib)?;
        write_out(out, Box::into_raw(Box::new(R2sGraph(g))))
    })
}

/// # Safety
/// `g` must come from `r2s_graph_new` and not have been freed.
#[no_mangle]
pub unsafe extern "C" fn r2s_graph_free(g: *mut R2sGraph) {
    if !g.is_null() {
        drop(Box::from_raw(g));
    }
}

/// # Safety
/// `g` must be a live graph handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn r2s_graph_vertex_count(g: *const R2sGraph, out: *mut usize) -> R2sStatus {
    guard(|| {
        let g = g.as_ref().ok_or_else(|| null("graph"))?;
        write_out(out, g.0.vertices.len())
    })
}

/// Radius needed for `r2s_graph_moment(m, n)` on this graph's generator.
///
/// # Safety
/// `g` must be a live graph handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn r2s_graph_required_radius(g: *const R2sGraph, m: u32, n: u32, out: *mut i64) -> R2sStatus {
    guard(|| {
        let g = g.as_ref().ok_or_else(|| null("graph"))?;
        write_out(out, g.0.required_radius(m, n))
    })
}

/// Path-count moment as a decimal string.
///
/// # Safety
/// `g` must be a live graph handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn r2s_graph_moment(g: *const R2sGraph, m: u32, n: u32, out: *mut *mut c_char) -> R2sStatus {
    guard(|| {
        let g = g.as_ref().ok_or_else(|| null("graph"))?;
        let v = g.0.moments_paths(m, n).map_err(lib)?;
        write_out(out, to_c(v.to_string()))
    })
}

/// # Safety
/// `g` must be a live graph handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn r2s_graph_to_json(g: *const R2sGraph, out: *mut *mut c_char) -> R2sStatus {
    guard(|| {
        let g = g.as_ref().ok_or_else(|| null("graph"))?;
        write_out(out, to_c(g.0.to_json()))
    })
}

/// Exact joint moment `int chi1^m1 conj(chi1)^n1 chi2^m2 conj(chi2)^n2` as a decimal string.
///
/// # Safety
/// `group` must be a NUL-terminated string; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn r2s_moment_exact(
    fam: R2sFamily,
    group: *const c_char,
    m1: u32,
    n1: u32,
    m2: u32,
    n2: u32,
    out: *mut *mut c_char,
) -> R2sStatus {
    guard(|| {
        let group: GroupName = read_str(group, "group")?.parse().map_err(lib)?;
        let v = moments_exact(family(fam), group, (m1, n1, m2, n2)).map_err(lib)?;
        write_out(out, to_c(v.to_string()))
    })
}

/// Number of diagonal-step quadrant walks of length 2n returning to the origin.
///
/// # Safety
/// `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn r2s_count_walks_quadrant(n: usize, out: *mut *mut c_char) -> R2sStatus {
    guard(|| write_out(out, to_c(seq::count_walks_quadrant(n).to_string())))
}

/// # Safety
/// `id` must be a NUL-terminated catalog id; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn r2s_density_new(id: *const c_char, out: *mut *mut R2sDensity) -> R2sStatus {
    guard(|| {
        let e = find_entry(read_str(id, "id")?).map_err(lib)?;
        write_out(out, Box::into_raw(Box::new(R2sDensity(e))))
    })
}

/// # Safety
/// `d` must come from `r2s_density_new` and not have been freed.
#[no_mangle]
pub unsafe extern "C" fn r2s_density_free(d: *mut R2sDensity) {
    if !d.is_null() {
        drop(Box::from_raw(d));
    }
}

/// Number of coordinates the density takes.
///
/// # Safety
/// `d` must be a live density handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn r2s_density_dim(d: *const R2sDensity, out: *mut usize) -> R2sStatus {
    guard(|| {
        let d = d.as_ref().ok_or_else(|| null("density"))?;
        write_out(out, d.0.coordinates().len())
    })
}

/// # Safety
/// `d` must be a live density handle; `point` must hold `len` doubles; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn r2s_density_eval(d: *const R2sDensity, point: *const f64, len: usize, out: *mut f64) -> R2sStatus {
    guard(|| {
        let d = d.as_ref().ok_or_else(|| null("density"))?;
        if point.is_null() {
            return Err(null("point"));
        }
        let p = std::slice::from_raw_parts(point, len);
        write_out(out, eval_density(&d.0, p).map_err(lib)?)
    })
}

/// Runs acceptance criterion `number` (1 to 12). `passed` receives 1 or 0.
///
/// # Safety
/// `passed` must be writable.
#[no_mangle]
pub unsafe extern "C" fn r2s_run_criterion(number: u32, seed: u64, passed: *mut c_int) -> R2sStatus {
    guard(|| {
        let r = checks::run(number, seed)
            .ok_or_else(|| (R2sStatus::InvalidArgument, format!("no criterion {number}")))?;
        if !r.passed {
            set_error(r.line());
        }
        write_out(passed, c_int::from(r.passed))
    })
}
