//! C ABI over the sumprod toolkit.
//!
//! Sets are passed as opaque `SumprodSet` handles created by
//! [`sumprod_set_new`] and released by [`sumprod_set_free`]. Every fallible
//! call returns a [`SumprodStatus`]; on failure [`sumprod_last_error`]
//! describes the most recent error on the calling thread. Strings returned
//! by the library are released with [`sumprod_string_free`].

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use sumprod::json::canonical_json;
use sumprod::search::{assemble_certificate, branch_and_bound_sp};
use sumprod::sets::{is_sidon, max_pair, IntSet};

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SumprodStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidArgument = 2,
    BudgetExhausted = 3,
    Internal = 4,
}

/// Opaque set of distinct positive integers.
pub struct SumprodSet {
    inner: IntSet,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct SumprodMaxPair {
    pub sum_size: usize,
    pub product_size: usize,
    pub maximum: usize,
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(msg: impl Into<String>) {
    let text = msg.into().replace('\0', " ");
    LAST_ERROR.with(|e| *e.borrow_mut() = CString::new(text).ok());
}

fn fail(status: SumprodStatus, msg: impl Into<String>) -> SumprodStatus {
    set_error(msg);
    status
}

fn guarded(f: impl FnOnce() -> SumprodStatus) -> SumprodStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(s) => s,
        Err(_) => fail(SumprodStatus::Internal, "panic inside sumprod"),
    }
}

/// Message for the last failed call on this thread, or NULL. The pointer
/// stays valid until the next failing call on the same thread.
#[no_mangle]
pub extern "C" fn sumprod_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |s| s.as_ptr()))
}

/// Builds a set from `len` values. Duplicates collapse; zero is rejected.
///
/// # Safety
/// `values` must point to `len` readable `uint64_t`; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn sumprod_set_new(values: *const u64, len: usize, out: *mut *mut SumprodSet) -> SumprodStatus {
    guarded(|| {
        if values.is_null() || out.is_null() {
            return fail(SumprodStatus::NullPointer, "values and out must be non-null");
        }
        let slice = std::slice::from_raw_parts(values, len);
        match IntSet::from_u64s(slice) {
            Ok(inner) => {
                *out = Box::into_raw(Box::new(SumprodSet { inner }));
                SumprodStatus::Ok
            }
            Err(e) => fail(SumprodStatus::InvalidArgument, e.to_string()),
        }
    })
}

/// # Safety
/// `set` must be NULL or a handle from [`sumprod_set_new`] not yet freed.
#[no_mangle]
pub unsafe extern "C" fn sumprod_set_free(set: *mut SumprodSet) {
    if !set.is_null() {
        drop(Box::from_raw(set));
    }
}

/// Number of distinct elements, 0 for NULL.
///
/// # Safety
/// `set` must be NULL or a live handle.
#[no_mangle]
pub unsafe extern "C" fn sumprod_set_len(set: *const SumprodSet) -> usize {
    set.as_ref().map_or(0, |s| s.inner.len())
}

/// `|A+A|`, `|AA|` and their maximum.
///
/// # Safety
/// `set` must be a live handle and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn sumprod_set_max_pair(set: *const SumprodSet, out: *mut SumprodMaxPair) -> SumprodStatus {
    guarded(|| {
        let (Some(s), false) = (set.as_ref(), out.is_null()) else {
            return fail(SumprodStatus::NullPointer, "set and out must be non-null");
        };
        let mp = max_pair(&s.inner);
        *out = SumprodMaxPair {
            sum_size: mp.sum_size,
            product_size: mp.product_size,
            maximum: mp.maximum,
        };
        SumprodStatus::Ok
    })
}

/// Writes 1 to `out` when all pairwise sums are distinct, else 0.
///
/// # Safety
/// `set` must be a live handle and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn sumprod_set_is_sidon(set: *const SumprodSet, out: *mut bool) -> SumprodStatus {
    guarded(|| {
        let (Some(s), false) = (set.as_ref(), out.is_null()) else {
            return fail(SumprodStatus::NullPointer, "set and out must be non-null");
        };
        *out = is_sidon(&s.inner);
        SumprodStatus::Ok
    })
}

/// Least `max(|A+A|, |AA|)` over `k`-subsets of `{1, ..., m}`. A `budget`
/// of 0 means unlimited; running out returns `BudgetExhausted` with the best
/// value found so far written to `value`.
///
/// # Safety
/// `value` must be writable.
#[no_mangle]
pub unsafe extern "C" fn sumprod_sp_upper_bound(k: usize, m: u64, budget: u64, value: *mut usize) -> SumprodStatus {
    guarded(|| {
        if value.is_null() {
            return fail(SumprodStatus::NullPointer, "value must be non-null");
        }
        match branch_and_bound_sp(k, m, (budget > 0).then_some(budget)) {
            Ok(u) => {
                *value = u.value;
                if u.exhaustive_up_to_m {
                    SumprodStatus::Ok
                } else {
                    fail(SumprodStatus::BudgetExhausted, "node budget exhausted")
                }
            }
            Err(e) => fail(SumprodStatus::InvalidArgument, e.to_string()),
        }
    })
}

/// Certificate for `k` at search cap `m` as canonical JSON. Release the
/// string with [`sumprod_string_free`].
///
/// # Safety
/// `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn sumprod_certificate_json(k: usize, m: u64, out: *mut *mut c_char) -> SumprodStatus {
    guarded(|| {
        if out.is_null() {
            return fail(SumprodStatus::NullPointer, "out must be non-null");
        }
        let cert = match assemble_certificate(k, m) {
            Ok(c) => c,
            Err(e) => return fail(SumprodStatus::InvalidArgument, e.to_string()),
        };
        let text = match canonical_json(&cert) {
            Ok(t) => t,
            Err(e) => return fail(SumprodStatus::Internal, e.to_string()),
        };
        match CString::new(text) {
            Ok(c) => {
                *out = c.into_raw();
                SumprodStatus::Ok
            }
            Err(e) => fail(SumprodStatus::Internal, e.to_string()),
        }
    })
}

/// # Safety
/// `s` must be NULL or a string returned by this library, not yet freed.
#[no_mangle]
pub unsafe extern "C" fn sumprod_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// Library version as a static string.
#[no_mangle]
pub extern "C" fn sumprod_version() -> *const c_char {
    static VERSION: &CStr = match CStr::from_bytes_with_nul(concat!(env!("CARGO_PKG_VERSION"), "\0").as_bytes()) {
        Ok(v) => v,
        Err(_) => panic!("version contains a nul byte"),
    };
    VERSION.as_ptr()
}
