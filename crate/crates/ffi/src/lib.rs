//! C ABI for the egz solver.
//!
//! Every entry point returns an [`EgzStatus`]. Results come back through
//! an opaque [`EgzIndexSet`] handle that the caller releases with
//! [`egz_index_set_free`]. Indices crossing this boundary are 0-based.
//! After a non-OK status, [`egz_last_error`] describes the failure on the
//! calling thread.

use std::cell::RefCell;
use std::ffi::c_char;
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use egz::prime_egz::solve_prime_egz;
use egz::{
    solve_egz, solve_prime_target, verify_certificate, Certificate, EgzInstance, Error,
    PrimeEgzInstance, PrimeTargetInstance,
};

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum EgzStatus {
    Ok = 0,
    NullPointer = 1,
    InputError = 2,
    InvariantViolation = 3,
    BufferTooSmall = 4,
    Panic = 5,
}

/// Opaque list of selected 0-based positions and the modulus they solve.
pub struct EgzIndexSet {
    indices: Vec<usize>,
    modulus: u64,
}

thread_local! {
    static LAST_ERROR: RefCell<String> = const { RefCell::new(String::new()) };
}

fn set_error(msg: impl Into<String>) {
    LAST_ERROR.with(|e| *e.borrow_mut() = msg.into());
}

fn fail(err: Error) -> EgzStatus {
    let status = match err {
        Error::Invariant(_) => EgzStatus::InvariantViolation,
        _ => EgzStatus::InputError,
    };
    set_error(err.to_string());
    status
}

fn guard(f: impl FnOnce() -> EgzStatus) -> EgzStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(s) => s,
        Err(_) => {
            set_error("panic inside egz");
            EgzStatus::Panic
        }
    }
}

/// Reads `len` elements, treating `(NULL, 0)` as an empty slice.
unsafe fn slice<'a, T>(data: *const T, len: usize) -> Option<&'a [T]> {
    if data.is_null() {
        return (len == 0).then_some(&[]);
    }
    Some(std::slice::from_raw_parts(data, len))
}

unsafe fn finish(out: *mut *mut EgzIndexSet, indices: Vec<usize>, modulus: u64) -> EgzStatus {
    *out = Box::into_raw(Box::new(EgzIndexSet { indices, modulus }));
    EgzStatus::Ok
}

macro_rules! try_slice {
    ($ptr:expr, $len:expr) => {
        match slice($ptr, $len) {
            Some(s) => s,
            None => {
                set_error(concat!(stringify!($ptr), " is null"));
                return EgzStatus::NullPointer;
            }
        }
    };
}

macro_rules! check_out {
    ($out:expr) => {
        if $out.is_null() {
            set_error("output handle pointer is null");
            return EgzStatus::NullPointer;
        }
        *$out = ptr::null_mut();
    };
}

/// Finds `n` of the `len = 2n - 1` values whose sum is divisible by `n`.
///
/// # Safety
/// `values` must point to `len` readable integers; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn egz_solve(
    n: u64,
    values: *const i64,
    len: usize,
    out: *mut *mut EgzIndexSet,
) -> EgzStatus {
    guard(|| {
        check_out!(out);
        let values = try_slice!(values, len);
        match EgzInstance::new(n, values.to_vec()).and_then(|inst| solve_egz(&inst)) {
            Ok(cert) => finish(out, cert.indices, n),
            Err(e) => fail(e),
        }
    })
}

/// Solves the zero-sum problem for a prime `p` with `2p - 1` values.
///
/// # Safety
/// As for [`egz_solve`].
#[no_mangle]
pub unsafe extern "C" fn egz_prime_egz(
    p: u64,
    values: *const i64,
    len: usize,
    out: *mut *mut EgzIndexSet,
) -> EgzStatus {
    guard(|| {
        check_out!(out);
        let values = try_slice!(values, len);
        match PrimeEgzInstance::from_values(p, values).and_then(|inst| solve_prime_egz(&inst)) {
            Ok(cert) => finish(out, cert.indices, p),
            Err(e) => fail(e),
        }
    })
}

/// Picks positions of the `p - 1` nonzero differences `d` summing to
/// `tau` modulo the prime `p`. The result may be empty.
///
/// # Safety
/// `d` must point to `len` readable integers; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn egz_prime_target(
    p: u64,
    d: *const u64,
    len: usize,
    tau: u64,
    out: *mut *mut EgzIndexSet,
) -> EgzStatus {
    guard(|| {
        check_out!(out);
        let d = try_slice!(d, len);
        match PrimeTargetInstance::new(p, d.to_vec(), tau).and_then(|i| solve_prime_target(&i)) {
            Ok(sol) => finish(out, sol.indices, p),
            Err(e) => fail(e),
        }
    })
}

/// Writes whether `indices` (0-based) certify the instance into `*valid`.
/// A rejected certificate still returns OK.
///
/// # Safety
/// `values` and `indices` must point to `len` and `count` readable
/// elements; `valid` must be writable.
#[no_mangle]
pub unsafe extern "C" fn egz_verify(
    n: u64,
    values: *const i64,
    len: usize,
    indices: *const usize,
    count: usize,
    valid: *mut bool,
) -> EgzStatus {
    guard(|| {
        if valid.is_null() {
            set_error("valid is null");
            return EgzStatus::NullPointer;
        }
        let values = try_slice!(values, len);
        let indices = try_slice!(indices, count);
        let inst = match EgzInstance::new(n, values.to_vec()) {
            Ok(i) => i,
            Err(e) => return fail(e),
        };
        let cert = Certificate {
            indices: indices.to_vec(),
            modulus: n,
        };
        let verdict = verify_certificate(&inst, &cert);
        if !verdict.is_valid() {
            set_error(verdict.to_string());
        }
        *valid = verdict.is_valid();
        EgzStatus::Ok
    })
}

/// Number of indices in the set; 0 for NULL.
///
/// # Safety
/// `set` must be NULL or a live handle.
#[no_mangle]
pub unsafe extern "C" fn egz_index_set_len(set: *const EgzIndexSet) -> usize {
    set.as_ref().map_or(0, |s| s.indices.len())
}

/// Modulus the set was computed for; 0 for NULL.
///
/// # Safety
/// `set` must be NULL or a live handle.
#[no_mangle]
pub unsafe extern "C" fn egz_index_set_modulus(set: *const EgzIndexSet) -> u64 {
    set.as_ref().map_or(0, |s| s.modulus)
}

/// Copies the ascending indices into `buf`, which must hold at least
/// [`egz_index_set_len`] entries.
///
/// # Safety
/// `set` must be a live handle and `buf` writable for `cap` entries.
#[no_mangle]
pub unsafe extern "C" fn egz_index_set_copy(
    set: *const EgzIndexSet,
    buf: *mut usize,
    cap: usize,
) -> EgzStatus {
    guard(|| {
        let Some(set) = set.as_ref() else {
            set_error("set is null");
            return EgzStatus::NullPointer;
        };
        let n = set.indices.len();
        if cap < n {
            set_error(format!("buffer holds {cap} entries, {n} needed"));
            return EgzStatus::BufferTooSmall;
        }
        if n > 0 {
            if buf.is_null() {
                set_error("buf is null");
                return EgzStatus::NullPointer;
            }
            ptr::copy_nonoverlapping(set.indices.as_ptr(), buf, n);
        }
        EgzStatus::Ok
    })
}

/// Releases a handle. NULL is ignored.
///
/// # Safety
/// `set` must be NULL or a handle not yet freed.
#[no_mangle]
pub unsafe extern "C" fn egz_index_set_free(set: *mut EgzIndexSet) {
    if !set.is_null() {
        drop(Box::from_raw(set));
    }
}

/// Copies the calling thread's last error message, NUL-terminated and
/// truncated to `cap` bytes, and returns the untruncated length plus one.
/// Pass `cap = 0` to query the size.
///
/// # Safety
/// `buf` must be writable for `cap` bytes (or NULL when `cap` is 0).
#[no_mangle]
pub unsafe extern "C" fn egz_last_error(buf: *mut c_char, cap: usize) -> usize {
    LAST_ERROR.with(|e| {
        let msg = e.borrow();
        let bytes = msg.as_bytes();
        if cap > 0 && !buf.is_null() {
            let n = bytes.len().min(cap - 1);
            ptr::copy_nonoverlapping(bytes.as_ptr().cast::<c_char>(), buf, n);
            *buf.add(n) = 0;
        }
        bytes.len() + 1
    })
}

/// Library version as a static NUL-terminated string.
#[no_mangle]
pub extern "C" fn egz_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr().cast()
}
