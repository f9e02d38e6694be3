//! C interface to `modgraph`.
//!
//! Objects cross the boundary as opaque handles created by `mg_*_new` style
//! constructors and released with the matching `mg_*_free`. Every fallible
//! call returns an [`MgStatus`]; on failure the message is kept per thread and
//! read back with [`mg_last_error`]. Strings handed out by the library are
//! NUL-terminated UTF-8 and must be released with [`mg_string_free`].

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use modgraph::census::{enumerate_reduced, Census, CensusError, Kind};
use modgraph::cli::{CliError, OperadChoice};
use modgraph::envelope::pi0_on_census;
use modgraph::homology::{build_complex, GraphChainComplex, Route};
use modgraph::operad::{check_axioms, LoadOptions, TableOperad};
use modgraph::structured::StructuredGraph;

/// Result of every fallible call. The nonzero codes below 6 agree with the
/// exit codes of the command-line tool.
#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum MgStatus {
    Ok = 0,
    /// A required pointer argument was null.
    NullPointer = 1,
    /// Malformed input: bad UTF-8, JSON, names or options.
    InvalidArgument = 2,
    /// The requested rank and leg count have no reduced graphs.
    ExcludedCase = 3,
    /// An operad failed the cyclic operad identities.
    AxiomViolation = 4,
    Internal = 5,
    /// A panic was caught at the boundary.
    Panic = 6,
}

/// A census of reduced graphs.
pub struct MgCensus(Census);

/// A cyclic operad: a preset or a loaded table.
pub struct MgOperad(OperadChoice);

/// A graph complex with its differentials.
pub struct MgComplex(GraphChainComplex);

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(msg: String) {
    let c = CString::new(msg.replace('\0', " ")).expect("interior NULs removed");
    LAST_ERROR.with(|e| *e.borrow_mut() = Some(c));
}

struct Failure(MgStatus, String);

impl From<CliError> for Failure {
    fn from(e: CliError) -> Self {
        let status = match e.code {
            2 => MgStatus::InvalidArgument,
            3 => MgStatus::ExcludedCase,
            4 => MgStatus::AxiomViolation,
            _ => MgStatus::Internal,
        };
        Failure(status, e.message)
    }
}

macro_rules! impl_failure_via_cli {
    ($($t:ty),*) => {$(
        impl From<$t> for Failure {
            fn from(e: $t) -> Self {
                CliError::from(e).into()
            }
        }
    )*};
}

impl_failure_via_cli!(
    CensusError,
    modgraph::operad::OperadError,
    modgraph::homology::HomologyError,
    modgraph::envelope::EnvelopeError,
    modgraph::structured::StructureError
);

fn invalid(msg: impl Into<String>) -> Failure {
    Failure(MgStatus::InvalidArgument, msg.into())
}

/// Runs `f`, recording any error or panic.
fn guard(f: impl FnOnce() -> Result<(), Failure>) -> MgStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => {
            LAST_ERROR.with(|e| *e.borrow_mut() = None);
            MgStatus::Ok
        }
        Ok(Err(Failure(status, msg))) => {
            set_error(msg);
            status
        }
        Err(payload) => {
            let msg = payload
                .downcast_ref::<&str>()
                .map(|s| s.to_string())
                .or_else(|| payload.downcast_ref::<String>().cloned())
                .unwrap_or_else(|| "panic".into());
            set_error(msg);
            MgStatus::Panic
        }
    }
}

unsafe fn str_arg<'a>(p: *const c_char, what: &str) -> Result<&'a str, Failure> {
    if p.is_null() {
        return Err(Failure(MgStatus::NullPointer, format!("{what} is null")));
    }
    CStr::from_ptr(p).to_str().map_err(|_| invalid(format!("{what} is not UTF-8")))
}

unsafe fn ref_arg<'a, T>(p: *const T, what: &str) -> Result<&'a T, Failure> {
    p.as_ref().ok_or_else(|| Failure(MgStatus::NullPointer, format!("{what} is null")))
}

unsafe fn put<T>(out: *mut T, value: T, what: &str) -> Result<(), Failure> {
    if out.is_null() {
        return Err(Failure(MgStatus::NullPointer, format!("{what} is null")));
    }
    out.write(value);
    Ok(())
}

unsafe fn put_string(out: *mut *mut c_char, s: String) -> Result<(), Failure> {
    let c = CString::new(s).map_err(|_| Failure(MgStatus::Internal, "output contains NUL".into()))?;
    put(out, c.into_raw(), "output pointer")
}

/// Message of the last failed call on this thread, or null after a success.
/// The pointer stays valid until the next call into the library.
#[no_mangle]
pub extern "C" fn mg_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |c| c.as_ptr()))
}

/// Library version as a static string.
#[no_mangle]
pub extern "C" fn mg_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr().cast()
}

/// Releases a string returned by the library. Null is ignored.
///
/// # Safety
/// `s` must come from this library and not have been freed.
#[no_mangle]
pub unsafe extern "C" fn mg_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// Enumerates reduced graphs of rank `rank` with the given leg labels.
/// `kind` is `"plain"`, `"ribbon"` or `"mobius"`. `labels` may be null when
/// `n_labels` is zero.
///
/// # Safety
/// `kind` must be a NUL-terminated string, `labels` must point to `n_labels`
/// such strings, and `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn mg_census_new(
    kind: *const c_char,
    rank: u32,
    labels: *const *const c_char,
    n_labels: usize,
    out: *mut *mut MgCensus,
) -> MgStatus {
    guard(|| {
        let kind: Kind = str_arg(kind, "kind")?.parse().map_err(invalid)?;
        let mut names = Vec::with_capacity(n_labels);
        if n_labels > 0 {
            if labels.is_null() {
                return Err(Failure(MgStatus::NullPointer, "labels is null".into()));
            }
            for k in 0..n_labels {
                names.push(str_arg(*labels.add(k), "label")?.to_string());
            }
        }
        let census = enumerate_reduced(kind, rank as usize, &names)?;
        put(out, Box::into_raw(Box::new(MgCensus(census))), "out")
    })
}

/// Number of isomorphism classes.
///
/// # Safety
/// `census` must be a live handle and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn mg_census_len(census: *const MgCensus, out: *mut usize) -> MgStatus {
    guard(|| put(out, ref_arg(census, "census")?.0.len(), "out"))
}

/// The census as a JSON document.
///
/// # Safety
/// `census` must be a live handle and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn mg_census_to_json(census: *const MgCensus, out: *mut *mut c_char) -> MgStatus {
    guard(|| put_string(out, ref_arg(census, "census")?.0.to_json()))
}

/// # Safety
/// `census` must be null or a live handle, which this call consumes.
#[no_mangle]
pub unsafe extern "C" fn mg_census_free(census: *mut MgCensus) {
    if !census.is_null() {
        drop(Box::from_raw(census));
    }
}

/// One of the presets `"comm"`, `"ass"`, `"invass"`.
///
/// # Safety
/// `name` must be a NUL-terminated string and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn mg_operad_preset(name: *const c_char, out: *mut *mut MgOperad) -> MgStatus {
    guard(|| {
        let name = str_arg(name, "name")?;
        let op = match name {
            "comm" => OperadChoice::Comm,
            "ass" => OperadChoice::Ass,
            "invass" => OperadChoice::InvAss,
            other => return Err(invalid(format!("unknown preset {other:?}"))),
        };
        put(out, Box::into_raw(Box::new(MgOperad(op))), "out")
    })
}

/// Loads an operad table document and verifies its axioms. `options` holds
/// load options as JSON and may be null for none.
///
/// # Safety
/// `json` and, when non-null, `options` must be NUL-terminated strings;
/// `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn mg_operad_from_json(
    json: *const c_char,
    options: *const c_char,
    out: *mut *mut MgOperad,
) -> MgStatus {
    guard(|| {
        let text = str_arg(json, "json")?;
        let opts: LoadOptions = if options.is_null() {
            LoadOptions::default()
        } else {
            serde_json::from_str(str_arg(options, "options")?).map_err(|e| invalid(format!("load options: {e}")))?
        };
        let table = TableOperad::from_json(text, &opts)?;
        put(out, Box::into_raw(Box::new(MgOperad(OperadChoice::Table(table)))), "out")
    })
}

/// Checks the cyclic operad identities exhaustively up to `max_arity` and
/// writes the report as JSON. Violations are reported through the JSON and
/// `clean`, not the status.
///
/// # Safety
/// `op` must be a live handle; `clean` and `report` must be writable.
#[no_mangle]
pub unsafe extern "C" fn mg_operad_check_axioms(
    op: *const MgOperad,
    max_arity: u32,
    clean: *mut bool,
    report: *mut *mut c_char,
) -> MgStatus {
    guard(|| {
        let r = check_axioms(ref_arg(op, "op")?.0.linear(), max_arity as usize);
        put(clean, r.is_clean(), "clean")?;
        put_string(report, r.to_json())
    })
}

/// # Safety
/// `op` must be null or a live handle, which this call consumes.
#[no_mangle]
pub unsafe extern "C" fn mg_operad_free(op: *mut MgOperad) {
    if !op.is_null() {
        drop(Box::from_raw(op));
    }
}

/// Builds the graph complex of `op` on a plain census.
///
/// # Safety
/// `op` and `census` must be live handles and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn mg_complex_build(
    op: *const MgOperad,
    census: *const MgCensus,
    out: *mut *mut MgComplex,
) -> MgStatus {
    guard(|| {
        let op = ref_arg(op, "op")?;
        let census = ref_arg(census, "census")?;
        let complex = build_complex(op.0.linear(), &census.0, Route::Auto)?;
        put(out, Box::into_raw(Box::new(MgComplex(complex))), "out")
    })
}

/// Dimensions, Betti numbers and Euler characteristic as JSON.
///
/// # Safety
/// `complex` must be a live handle and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn mg_complex_summary(complex: *const MgComplex, out: *mut *mut c_char) -> MgStatus {
    guard(|| {
        let s = ref_arg(complex, "complex")?.0.summary();
        put_string(out, serde_json::to_string(&s).map_err(|e| Failure(MgStatus::Internal, e.to_string()))?)
    })
}

/// Whether every composite of consecutive differentials vanishes.
///
/// # Safety
/// `complex` must be a live handle and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn mg_complex_d_squared_vanishes(complex: *const MgComplex, out: *mut bool) -> MgStatus {
    guard(|| put(out, ref_arg(complex, "complex")?.0.d_squared_failures().is_empty(), "out"))
}

/// Betti number in `degree`; zero outside the support.
///
/// # Safety
/// `complex` must be a live handle and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn mg_complex_betti(complex: *const MgComplex, degree: i64, out: *mut usize) -> MgStatus {
    guard(|| {
        let ranks = ref_arg(complex, "complex")?.0.homology_ranks();
        put(out, ranks.get(&degree).copied().unwrap_or(0), "out")
    })
}

/// # Safety
/// `complex` must be null or a live handle, which this call consumes.
#[no_mangle]
pub unsafe extern "C" fn mg_complex_free(complex: *mut MgComplex) {
    if !complex.is_null() {
        drop(Box::from_raw(complex));
    }
}

/// Connected components of the modular envelope of a preset over a plain
/// census, as JSON.
///
/// # Safety
/// `op` and `census` must be live handles and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn mg_pi0(op: *const MgOperad, census: *const MgCensus, out: *mut *mut c_char) -> MgStatus {
    guard(|| {
        let op = ref_arg(op, "op")?;
        let census = ref_arg(census, "census")?;
        let set = op.0.set().ok_or_else(|| invalid("components need a preset operad"))?;
        let components = pi0_on_census(set, &census.0)?;
        put_string(out, components.to_json(set))
    })
}

/// Surface invariant of a ribbon or Möbius graph given as JSON.
///
/// # Safety
/// `json` must be a NUL-terminated string and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn mg_thicken(json: *const c_char, out: *mut *mut c_char) -> MgStatus {
    guard(|| {
        let g = StructuredGraph::from_json(str_arg(json, "json")?)?;
        put_string(out, g.thicken()?.to_json())
    })
}
