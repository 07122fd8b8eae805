//! C ABI over `trade-core`.
//!
//! Trades cross the boundary as opaque `TradeHandle` pointers owned by the
//! caller and released with [`trade_free`]. Every function returns a
//! [`TradeStatus`]; outputs go through pointer arguments and are written
//! only on `TRADE_STATUS_OK` (text functions also report the needed size
//! on `TRADE_STATUS_BUFFER_TOO_SMALL`). No function unwinds into C.

use std::ffi::{c_char, CStr};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use trade_core::catalog;
use trade_core::constructor::{existence_verdict, Construction, Constructor, ConstructorOptions, Status};
use trade_core::format::{parse_trade, sniff, write_trade, Format};
use trade_core::verify::{verify_homogeneous, verify_steiner, verify_trade};
use trade_core::MuWayTrade;

/// A trade owned by the caller.
pub struct TradeHandle {
    trade: MuWayTrade,
}

#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum TradeStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidUtf8 = 2,
    ParseError = 3,
    /// The requested object does not exist or is not known to exist.
    NotFound = 4,
    BudgetExhausted = 5,
    BufferTooSmall = 6,
    ParameterMismatch = 7,
    Internal = 8,
}

#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum TradeExistence {
    Exists = 0,
    NotExists = 1,
    OpenInPaper = 2,
}

#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum TradeFormat {
    Text = 0,
    Json = 1,
}

fn guarded(f: impl FnOnce() -> TradeStatus) -> TradeStatus {
    catch_unwind(AssertUnwindSafe(f)).unwrap_or(TradeStatus::Internal)
}

unsafe fn str_arg<'a>(p: *const c_char) -> Result<&'a str, TradeStatus> {
    if p.is_null() {
        return Err(TradeStatus::NullPointer);
    }
    CStr::from_ptr(p).to_str().map_err(|_| TradeStatus::InvalidUtf8)
}

unsafe fn handle<'a>(h: *const TradeHandle) -> Result<&'a TradeHandle, TradeStatus> {
    h.as_ref().ok_or(TradeStatus::NullPointer)
}

unsafe fn give(out: *mut *mut TradeHandle, trade: MuWayTrade) -> TradeStatus {
    *out = Box::into_raw(Box::new(TradeHandle { trade }));
    TradeStatus::Ok
}

/// Copy `s` plus a NUL into `buf`; `*needed` always receives the full size.
unsafe fn copy_out(s: &str, buf: *mut c_char, cap: usize, needed: *mut usize) -> TradeStatus {
    if needed.is_null() {
        return TradeStatus::NullPointer;
    }
    *needed = s.len() + 1;
    if buf.is_null() || cap < s.len() + 1 {
        return TradeStatus::BufferTooSmall;
    }
    ptr::copy_nonoverlapping(s.as_ptr(), buf.cast::<u8>(), s.len());
    *buf.add(s.len()) = 0;
    TradeStatus::Ok
}

macro_rules! try_status {
    ($e:expr) => {
        match $e {
            Ok(v) => v,
            Err(s) => return s,
        }
    };
}

/// Static, NUL-terminated description of a status code.
#[no_mangle]
pub extern "C" fn trade_status_message(status: TradeStatus) -> *const c_char {
    let s: &'static [u8] = match status {
        TradeStatus::Ok => b"ok\0",
        TradeStatus::NullPointer => b"null pointer argument\0",
        TradeStatus::InvalidUtf8 => b"string argument is not UTF-8\0",
        TradeStatus::ParseError => b"input is not a trade document\0",
        TradeStatus::NotFound => b"no such object\0",
        TradeStatus::BudgetExhausted => b"search budget exhausted\0",
        TradeStatus::BufferTooSmall => b"output buffer too small\0",
        TradeStatus::ParameterMismatch => b"parameter mismatch\0",
        TradeStatus::Internal => b"internal error\0",
    };
    s.as_ptr().cast()
}

/// Parse a trade in text or JSON form (detected).
///
/// # Safety
/// `text` must be NUL-terminated; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn trade_parse(text: *const c_char, out: *mut *mut TradeHandle) -> TradeStatus {
    guarded(|| {
        if out.is_null() {
            return TradeStatus::NullPointer;
        }
        let s = try_status!(str_arg(text));
        match parse_trade(s, sniff(s)) {
            Ok(t) => give(out, t),
            Err(_) => TradeStatus::ParseError,
        }
    })
}

/// Release a handle; null is ignored.
///
/// # Safety
/// `h` must come from this library and not be used afterwards.
#[no_mangle]
pub unsafe extern "C" fn trade_free(h: *mut TradeHandle) {
    if !h.is_null() {
        drop(Box::from_raw(h));
    }
}

/// Build a 3-way `d`-homogeneous `(v,3,2)` Steiner trade. Returns
/// `TRADE_STATUS_NOT_FOUND` unless existence is established.
///
/// # Safety
/// `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn trade_construct(d: usize, v: usize, budget: u64, seed: u64, out: *mut *mut TradeHandle) -> TradeStatus {
    guarded(|| {
        if out.is_null() {
            return TradeStatus::NullPointer;
        }
        match Constructor::new(ConstructorOptions { budget, seed }).construct(d, v) {
            Construction::Built(t) => give(out, t),
            Construction::BudgetExhausted => TradeStatus::BudgetExhausted,
            Construction::Declined(_) | Construction::NoRoute => TradeStatus::NotFound,
        }
    })
}

/// A named catalog object (see `trades catalog list`).
///
/// # Safety
/// `name` must be NUL-terminated; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn trade_catalog_emit(name: *const c_char, seed: u64, out: *mut *mut TradeHandle) -> TradeStatus {
    guarded(|| {
        if out.is_null() {
            return TradeStatus::NullPointer;
        }
        let name = try_status!(str_arg(name));
        match catalog::emit(name, seed) {
            Some(t) => give(out, t),
            None if catalog::NAMES.iter().any(|(n, _)| *n == name) => TradeStatus::BudgetExhausted,
            None => TradeStatus::NotFound,
        }
    })
}

/// `*valid` is 1 when the trade passes; `steiner` nonzero adds the at-most-once
/// check and `d` nonzero the homogeneity check.
///
/// # Safety
/// `h` must be a live handle; `valid` must be writable.
#[no_mangle]
pub unsafe extern "C" fn trade_verify(h: *const TradeHandle, steiner: i32, d: usize, valid: *mut i32) -> TradeStatus {
    guarded(|| {
        let h = try_status!(handle(h));
        if valid.is_null() {
            return TradeStatus::NullPointer;
        }
        let mut verdict = verify_trade(&h.trade);
        if steiner != 0 {
            verdict = verdict.and(verify_steiner(&h.trade));
        }
        if d != 0 {
            verdict = verdict.and(verify_homogeneous(&h.trade, d));
        }
        *valid = verdict.is_valid() as i32;
        TradeStatus::Ok
    })
}

/// Number of blocks per collection.
///
/// # Safety
/// `h` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn trade_volume(h: *const TradeHandle, out: *mut usize) -> TradeStatus {
    guarded(|| {
        let h = try_status!(handle(h));
        if out.is_null() {
            return TradeStatus::NullPointer;
        }
        *out = h.trade.volume();
        TradeStatus::Ok
    })
}

/// Number of points; `TRADE_STATUS_PARAMETER_MISMATCH` when collections
/// cover different point sets.
///
/// # Safety
/// `h` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn trade_foundation_size(h: *const TradeHandle, out: *mut usize) -> TradeStatus {
    guarded(|| {
        let h = try_status!(handle(h));
        if out.is_null() {
            return TradeStatus::NullPointer;
        }
        match h.trade.foundation() {
            Ok(f) => {
                *out = f.len();
                TradeStatus::Ok
            }
            Err(_) => TradeStatus::ParameterMismatch,
        }
    })
}

/// Disjoint union; labels of `b` are shifted past those of `a`.
///
/// # Safety
/// `a` and `b` must be live handles; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn trade_disjoint_union(a: *const TradeHandle, b: *const TradeHandle, out: *mut *mut TradeHandle) -> TradeStatus {
    guarded(|| {
        let (a, b) = (try_status!(handle(a)), try_status!(handle(b)));
        if out.is_null() {
            return TradeStatus::NullPointer;
        }
        match a.trade.disjoint_union(&b.trade) {
            Ok(t) => give(out, t),
            Err(_) => TradeStatus::ParameterMismatch,
        }
    })
}

/// Serialize into `buf` (NUL-terminated). `*needed` receives the size
/// including the NUL, so a first call with `cap = 0` sizes the buffer.
///
/// # Safety
/// `h` must be a live handle; `buf` must hold `cap` bytes; `needed` must be writable.
#[no_mangle]
pub unsafe extern "C" fn trade_write(
    h: *const TradeHandle,
    format: TradeFormat,
    one_based: i32,
    buf: *mut c_char,
    cap: usize,
    needed: *mut usize,
) -> TradeStatus {
    guarded(|| {
        let h = try_status!(handle(h));
        let format = match format {
            TradeFormat::Text => Format::Text,
            TradeFormat::Json => Format::Json,
        };
        copy_out(&write_trade(&h.trade, format, one_based != 0), buf, cap, needed)
    })
}

/// Existence status for `(d, v)` and its citation, e.g. `Theorem 19`.
///
/// # Safety
/// `status` and `needed` must be writable; `buf` must hold `cap` bytes.
#[no_mangle]
pub unsafe extern "C" fn trade_solve(
    d: usize,
    v: usize,
    status: *mut TradeExistence,
    buf: *mut c_char,
    cap: usize,
    needed: *mut usize,
) -> TradeStatus {
    guarded(|| {
        if status.is_null() {
            return TradeStatus::NullPointer;
        }
        let verdict = existence_verdict(d, v);
        *status = match verdict.status {
            Status::Exists => TradeExistence::Exists,
            Status::NotExists => TradeExistence::NotExists,
            Status::OpenInPaper => TradeExistence::OpenInPaper,
        };
        copy_out(verdict.citation(), buf, cap, needed)
    })
}
