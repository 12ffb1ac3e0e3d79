//! C ABI over the `ctsp` crate.
//!
//! Instances and solutions are opaque heap handles released with their
//! `*_free` function. Every fallible call returns a [`CtspStatus`]; on failure
//! [`ctsp_last_error`] describes the problem for the calling thread.

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use ctsp::exact::dp_exact;
use ctsp::instance::{assign_groups, read_instance};
use ctsp::metaheuristic::{Preset, SearchParams};
use ctsp::{Error, Grouping, Instance, Route};

/// Result codes.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CtspStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidArgument = 2,
    Parse = 3,
    Io = 4,
    InvalidInstance = 5,
    TooLarge = 6,
    InvalidRoute = 7,
    Panic = 8,
}

/// Opaque instance handle.
pub struct CtspInstance(Instance);

/// Opaque solution handle.
pub struct CtspSolution(Route);

thread_local! {
    static LAST_ERROR: RefCell<CString> = RefCell::new(CString::default());
}

fn set_error(msg: String) {
    let msg = CString::new(msg.replace('\0', " ")).unwrap_or_default();
    LAST_ERROR.with(|e| *e.borrow_mut() = msg);
}

fn status_of(e: &Error) -> CtspStatus {
    match e {
        Error::Io(_) => CtspStatus::Io,
        Error::Parse { .. } | Error::UnsupportedWeights(_) => CtspStatus::Parse,
        Error::InvalidInstance(_) => CtspStatus::InvalidInstance,
        Error::InvalidArgument(_) => CtspStatus::InvalidArgument,
        Error::TooLarge { .. } => CtspStatus::TooLarge,
        Error::InvalidRoute(_) => CtspStatus::InvalidRoute,
    }
}

fn guard(f: impl FnOnce() -> Result<(), (CtspStatus, String)>) -> CtspStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => CtspStatus::Ok,
        Ok(Err((status, msg))) => {
            set_error(msg);
            status
        }
        Err(_) => {
            set_error("internal panic".into());
            CtspStatus::Panic
        }
    }
}

fn lib(e: Error) -> (CtspStatus, String) {
    (status_of(&e), e.to_string())
}

fn null(what: &str) -> (CtspStatus, String) {
    (CtspStatus::NullPointer, format!("{what} is null"))
}

unsafe fn c_str<'a>(s: *const c_char, what: &str) -> Result<&'a str, (CtspStatus, String)> {
    if s.is_null() {
        return Err(null(what));
    }
    CStr::from_ptr(s)
        .to_str()
        .map_err(|_| (CtspStatus::InvalidArgument, format!("{what} is not UTF-8")))
}

unsafe fn put<T>(out: *mut *mut T, value: T) {
    *out = Box::into_raw(Box::new(value));
}

/// Message describing the last failure on this thread. Valid until the next
/// failing call on the same thread.
#[no_mangle]
pub extern "C" fn ctsp_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ptr())
}

/// Parses an instance in TSPLIB format, with the optional priority keys.
///
/// # Safety
/// `text` must be a NUL-terminated string and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn ctsp_instance_parse(
    text: *const c_char,
    out: *mut *mut CtspInstance,
) -> CtspStatus {
    guard(|| {
        if out.is_null() {
            return Err(null("out"));
        }
        let inst = read_instance(c_str(text, "text")?).map_err(lib)?;
        put(out, CtspInstance(inst));
        Ok(())
    })
}

/// Loads an instance file.
///
/// # Safety
/// `path` must be a NUL-terminated string and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn ctsp_instance_load(
    path: *const c_char,
    out: *mut *mut CtspInstance,
) -> CtspStatus {
    guard(|| {
        if out.is_null() {
            return Err(null("out"));
        }
        let inst = Instance::load(c_str(path, "path")?).map_err(lib)?;
        put(out, CtspInstance(inst));
        Ok(())
    })
}

/// Releases an instance. Null is ignored.
///
/// # Safety
/// `inst` must come from this library and not be used afterwards.
#[no_mangle]
pub unsafe extern "C" fn ctsp_instance_free(inst: *mut CtspInstance) {
    if !inst.is_null() {
        drop(Box::from_raw(inst));
    }
}

/// Number of nodes, depot included; 0 for null.
///
/// # Safety
/// `inst` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn ctsp_instance_size(inst: *const CtspInstance) -> usize {
    inst.as_ref().map_or(0, |i| i.0.n())
}

/// Priority of `node` (0 for the depot, null or out of range).
///
/// # Safety
/// `inst` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn ctsp_instance_priority(inst: *const CtspInstance, node: usize) -> u32 {
    match inst.as_ref() {
        Some(i) if node < i.0.n() => i.0.priority(node),
        _ => 0,
    }
}

/// Creates a copy of `inst` with customers split into `groups` classes.
/// `clustered` selects spatial classes instead of random ones.
///
/// # Safety
/// `inst` must be a live handle and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn ctsp_instance_regroup(
    inst: *const CtspInstance,
    groups: u32,
    clustered: bool,
    seed: u64,
    out: *mut *mut CtspInstance,
) -> CtspStatus {
    guard(|| {
        let inst = inst.as_ref().ok_or_else(|| null("inst"))?;
        if out.is_null() {
            return Err(null("out"));
        }
        let mode = if clustered {
            Grouping::Clustered
        } else {
            Grouping::Random
        };
        let regrouped = assign_groups(&inst.0, groups, mode, seed).map_err(lib)?;
        put(out, CtspInstance(regrouped));
        Ok(())
    })
}

/// Sets the relaxation `d` in place.
///
/// # Safety
/// `inst` must be a live handle.
#[no_mangle]
pub unsafe extern "C" fn ctsp_instance_set_relax(inst: *mut CtspInstance, d: u32) -> CtspStatus {
    guard(|| {
        let inst = inst.as_mut().ok_or_else(|| null("inst"))?;
        inst.0 = inst.0.with_relax(d);
        Ok(())
    })
}

/// Runs the metaheuristic. `large` selects the longer search preset.
///
/// # Safety
/// `inst` must be a live handle and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn ctsp_solve(
    inst: *const CtspInstance,
    large: bool,
    seed: u64,
    out: *mut *mut CtspSolution,
) -> CtspStatus {
    guard(|| {
        let inst = inst.as_ref().ok_or_else(|| null("inst"))?;
        if out.is_null() {
            return Err(null("out"));
        }
        let preset = if large { Preset::Large } else { Preset::Fast };
        let result =
            ctsp::solve(&inst.0, &SearchParams::preset(preset).with_seed(seed)).map_err(lib)?;
        put(out, CtspSolution(result.best));
        Ok(())
    })
}

/// Solves to optimality with the dynamic program, storing at most
/// `state_budget` states.
///
/// # Safety
/// `inst` must be a live handle and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn ctsp_solve_exact(
    inst: *const CtspInstance,
    state_budget: usize,
    out: *mut *mut CtspSolution,
) -> CtspStatus {
    guard(|| {
        let inst = inst.as_ref().ok_or_else(|| null("inst"))?;
        if out.is_null() {
            return Err(null("out"));
        }
        let outcome = dp_exact(&inst.0, state_budget).map_err(lib)?;
        put(out, CtspSolution(outcome.route.expect("route requested")));
        Ok(())
    })
}

/// Releases a solution. Null is ignored.
///
/// # Safety
/// `sol` must come from this library and not be used afterwards.
#[no_mangle]
pub unsafe extern "C" fn ctsp_solution_free(sol: *mut CtspSolution) {
    if !sol.is_null() {
        drop(Box::from_raw(sol));
    }
}

/// Tour cost; 0 for null.
///
/// # Safety
/// `sol` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn ctsp_solution_cost(sol: *const CtspSolution) -> i64 {
    sol.as_ref().map_or(0, |s| s.0.cost())
}

/// Number of nodes in the tour; 0 for null.
///
/// # Safety
/// `sol` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn ctsp_solution_len(sol: *const CtspSolution) -> usize {
    sol.as_ref().map_or(0, |s| s.0.len())
}

/// Copies the 0-based visiting order, depot first, into `buf`, which must
/// hold `ctsp_solution_len` entries.
///
/// # Safety
/// `sol` must be a live handle and `buf` valid for `cap` writes.
#[no_mangle]
pub unsafe extern "C" fn ctsp_solution_order(
    sol: *const CtspSolution,
    buf: *mut usize,
    cap: usize,
) -> CtspStatus {
    guard(|| {
        let sol = sol.as_ref().ok_or_else(|| null("sol"))?;
        if buf.is_null() {
            return Err(null("buf"));
        }
        let order = sol.0.order();
        if cap < order.len() {
            return Err((
                CtspStatus::InvalidArgument,
                format!("buffer holds {cap} entries, {} needed", order.len()),
            ));
        }
        ptr::copy_nonoverlapping(order.as_ptr(), buf, order.len());
        Ok(())
    })
}

/// Checks a visiting order against the rule. `order` lists `len` 0-based
/// nodes starting with the depot. The verdict goes to `feasible`; the status
/// reports malformed orders.
///
/// # Safety
/// `inst` must be a live handle, `order` valid for `len` reads and
/// `feasible` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn ctsp_check_order(
    inst: *const CtspInstance,
    order: *const usize,
    len: usize,
    feasible: *mut bool,
) -> CtspStatus {
    guard(|| {
        let inst = inst.as_ref().ok_or_else(|| null("inst"))?;
        if order.is_null() || feasible.is_null() {
            return Err(null("order or feasible"));
        }
        let order = std::slice::from_raw_parts(order, len).to_vec();
        let route = Route::new(order, &inst.0).map_err(lib)?;
        *feasible = ctsp::is_feasible(&route, &inst.0);
        Ok(())
    })
}
