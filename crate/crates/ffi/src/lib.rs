//! C ABI over `encap-core`.
//!
//! Systems live behind an opaque `EncapSystem` handle. Every fallible call
//! returns an `EncapStatus`; on failure the message is kept per thread and
//! read with `encap_last_error_message`. Undefined real metrics are NaN.

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use encap_core::hier::{hier_psc_enumerated, layered_psc_enumerated};
use encap_core::ingest::{parse_manifest, Model};
use encap_core::metrics::{amc_check, configuration_efficiency};
use encap_core::psc::{self, system_psc};
use encap_core::{EncapError, FlatSystem, RegionCounts};

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum EncapStatus {
    Ok = 0,
    NullPointer = 1,
    Invalid = 2,
    Parse = 3,
    CapExceeded = 4,
    Undefined = 5,
    Io = 6,
    Panic = 7,
}

/// Opaque system handle.
pub struct EncapSystem {
    model: Model,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, Default)]
pub struct EncapMetrics {
    pub nodes: u64,
    pub regions: u64,
    pub violating: u64,
    pub psc: u64,
    pub s_max: u64,
    pub s_min: f64,
    pub c_e: f64,
    pub ihv_percent: f64,
    pub r_min: f64,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, Default)]
pub struct EncapAmc {
    pub comparable: bool,
    pub is_amc: bool,
    pub below_s_min: bool,
    pub psc: u64,
    pub uniform_psc_same_r: f64,
    pub s_min: f64,
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(msg: String) {
    let c = CString::new(msg.replace('\0', " ")).expect("nul bytes removed");
    LAST_ERROR.with(|e| *e.borrow_mut() = Some(c));
}

fn status_of(err: &EncapError) -> EncapStatus {
    match err {
        EncapError::Invalid(_) | EncapError::UnknownSubsystem(_) => EncapStatus::Invalid,
        EncapError::Undefined(_) => EncapStatus::Undefined,
        EncapError::CapExceeded { .. } => EncapStatus::CapExceeded,
        EncapError::Parse { .. } => EncapStatus::Parse,
        EncapError::Io { .. } => EncapStatus::Io,
    }
}

/// Runs `f`, mapping errors and panics to a status.
fn guard<F>(f: F) -> EncapStatus
where
    F: FnOnce() -> Result<(), (EncapStatus, String)>,
{
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => {
            LAST_ERROR.with(|e| *e.borrow_mut() = None);
            EncapStatus::Ok
        }
        Ok(Err((status, msg))) => {
            set_error(msg);
            status
        }
        Err(_) => {
            set_error("internal panic".into());
            EncapStatus::Panic
        }
    }
}

fn core<T>(r: encap_core::Result<T>) -> Result<T, (EncapStatus, String)> {
    r.map_err(|e| (status_of(&e), e.to_string()))
}

fn null(what: &str) -> (EncapStatus, String) {
    (EncapStatus::NullPointer, format!("{what} is null"))
}

fn nan(x: Option<f64>) -> f64 {
    x.unwrap_or(f64::NAN)
}

/// Message of the last failed call on this thread, or null. The pointer
/// stays valid until the next call into this library on the same thread.
#[no_mangle]
pub extern "C" fn encap_last_error_message() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |c| c.as_ptr()))
}

/// Parses a manifest (UTF-8, NUL-terminated) into a new handle.
///
/// # Safety
/// `text` must be a valid C string; `out` must point to writable storage.
#[no_mangle]
pub unsafe extern "C" fn encap_system_from_manifest(text: *const c_char, out: *mut *mut EncapSystem) -> EncapStatus {
    guard(|| {
        if text.is_null() {
            return Err(null("text"));
        }
        if out.is_null() {
            return Err(null("out"));
        }
        let s = CStr::from_ptr(text)
            .to_str()
            .map_err(|_| (EncapStatus::Parse, "manifest is not valid UTF-8".to_string()))?;
        let model = core(parse_manifest(s).and_then(|m| m.to_model()))?;
        *out = Box::into_raw(Box::new(EncapSystem { model }));
        Ok(())
    })
}

/// Builds a flat system from `len` parallel hidden/violating counts.
///
/// # Safety
/// Both arrays must hold `len` elements (they may be null when `len` is 0);
/// `out` must point to writable storage.
#[no_mangle]
pub unsafe extern "C" fn encap_system_new_flat(
    hidden: *const u64,
    violating: *const u64,
    len: usize,
    out: *mut *mut EncapSystem,
) -> EncapStatus {
    guard(|| {
        if out.is_null() {
            return Err(null("out"));
        }
        if len > 0 && (hidden.is_null() || violating.is_null()) {
            return Err(null("count array"));
        }
        let regions: Vec<RegionCounts> = (0..len)
            .map(|i| RegionCounts::new(*hidden.add(i), *violating.add(i)))
            .collect();
        *out = Box::into_raw(Box::new(EncapSystem {
            model: Model::Flat(FlatSystem::new(regions)),
        }));
        Ok(())
    })
}

/// Releases a handle. Null is ignored.
///
/// # Safety
/// `sys` must come from this library and not be used afterwards.
#[no_mangle]
pub unsafe extern "C" fn encap_system_free(sys: *mut EncapSystem) {
    if !sys.is_null() {
        drop(Box::from_raw(sys));
    }
}

/// P.S.C. in the system's own context (flat closed form, or enumeration
/// for layered and hierarchical systems).
///
/// # Safety
/// `sys` must be a live handle; `out` must point to writable storage.
#[no_mangle]
pub unsafe extern "C" fn encap_system_psc(sys: *const EncapSystem, out: *mut u64) -> EncapStatus {
    guard(|| {
        let sys = sys.as_ref().ok_or_else(|| null("sys"))?;
        if out.is_null() {
            return Err(null("out"));
        }
        *out = match &sys.model {
            Model::Flat(f) => system_psc(f).total,
            Model::Layered(l) => core(layered_psc_enumerated(l))?,
            Model::Hier(h) => core(hier_psc_enumerated(h))?,
        };
        Ok(())
    })
}

/// Metrics of the system taken as one flat list of regions.
///
/// # Safety
/// `sys` must be a live handle; `out` must point to writable storage.
#[no_mangle]
pub unsafe extern "C" fn encap_system_metrics(sys: *const EncapSystem, out: *mut EncapMetrics) -> EncapStatus {
    guard(|| {
        let sys = sys.as_ref().ok_or_else(|| null("sys"))?;
        if out.is_null() {
            return Err(null("out"));
        }
        let m = configuration_efficiency(&sys.model.flatten());
        *out = EncapMetrics {
            nodes: m.n,
            regions: m.r,
            violating: m.h,
            psc: m.s,
            s_max: m.s_max,
            s_min: nan(m.s_min),
            c_e: nan(m.c_e),
            ihv_percent: nan(m.ihv_percent),
            r_min: nan(m.r_min),
        };
        Ok(())
    })
}

/// A.M.C. verdict of the system taken as one flat list of regions.
///
/// # Safety
/// `sys` must be a live handle; `out` must point to writable storage.
#[no_mangle]
pub unsafe extern "C" fn encap_system_amc(sys: *const EncapSystem, out: *mut EncapAmc) -> EncapStatus {
    guard(|| {
        let sys = sys.as_ref().ok_or_else(|| null("sys"))?;
        if out.is_null() {
            return Err(null("out"));
        }
        let v = amc_check(&sys.model.flatten());
        *out = EncapAmc {
            comparable: v.comparable,
            is_amc: v.is_amc,
            below_s_min: v.below_s_min,
            psc: v.psc,
            uniform_psc_same_r: nan(v.uniform_psc_same_r),
            s_min: nan(v.s_min_real_r),
        };
        Ok(())
    })
}

/// `n(n - 1)`.
#[no_mangle]
pub extern "C" fn encap_psc_unencapsulated(n: u64) -> u64 {
    psc::psc_unencapsulated(n)
}

unsafe fn law(out: *mut f64, f: impl FnOnce() -> encap_core::Result<f64>) -> EncapStatus {
    guard(|| {
        if out.is_null() {
            return Err(null("out"));
        }
        *out = core(f())?;
        Ok(())
    })
}

/// # Safety
/// `out` must point to writable storage.
#[no_mangle]
pub unsafe extern "C" fn encap_r_min(n: u64, p: f64, out: *mut f64) -> EncapStatus {
    law(out, || psc::r_min(n, p))
}

/// # Safety
/// `out` must point to writable storage.
#[no_mangle]
pub unsafe extern "C" fn encap_r_h(n: u64, p: f64, out: *mut f64) -> EncapStatus {
    law(out, || psc::r_h(n, p))
}

/// # Safety
/// `out` must point to writable storage.
#[no_mangle]
pub unsafe extern "C" fn encap_s_min(n: u64, p: f64, out: *mut f64) -> EncapStatus {
    law(out, || psc::s_min(n, p))
}

/// # Safety
/// `out` must point to writable storage.
#[no_mangle]
pub unsafe extern "C" fn encap_uniform_psc(n: f64, r: f64, p: f64, out: *mut f64) -> EncapStatus {
    law(out, || psc::uniform_psc_of(n, r, p))
}

/// Integer region count near `r_min` with the lower uniform P.S.C.
///
/// # Safety
/// `r_out` and `psc_out` must point to writable storage.
#[no_mangle]
pub unsafe extern "C" fn encap_recommend_regions(n: u64, p: f64, r_out: *mut u64, psc_out: *mut f64) -> EncapStatus {
    guard(|| {
        if r_out.is_null() || psc_out.is_null() {
            return Err(null("out"));
        }
        let rec = core(psc::recommend_regions(n, p))?;
        *r_out = rec.r;
        *psc_out = rec.psc;
        Ok(())
    })
}
