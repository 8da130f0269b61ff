//! C ABI for the mean-set attack toolkit.
//!
//! Conventions:
//! - Handles (`MsaContext`, `MsaKeys`) are opaque; create/free in pairs.
//! - Words cross the boundary as `int32_t` arrays: letter `i` is the i-th
//!   generator, `-i` its inverse.
//! - Every function returns an [`MsaStatus`]; outputs go through pointers.
//!   On any non-OK status, `msa_last_error_message` describes the failure
//!   for the current thread.
//! - Strings returned by the library are released with `msa_string_free`.

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use meanset_attack::attack::{attack2, AttackParams};
use meanset_attack::group::GroupContext;
use meanset_attack::harness::config::parse_config;
use meanset_attack::harness::sweep::run_attack_sweep;
use meanset_attack::meanset::WorkMeter;
use meanset_attack::protocol::{
    eavesdrop, generate_keys_alternative, generate_keys_classical, run_protocol, ChallengeMode,
    KeyPair,
};
use meanset_attack::word::Word;
use meanset_attack::{rng, Error};

thread_local! {
    static LAST_ERROR: RefCell<String> = const { RefCell::new(String::new()) };
}

fn set_error(msg: impl Into<String>) {
    LAST_ERROR.with(|e| *e.borrow_mut() = msg.into());
}

/// Result code of every FFI call.
#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum MsaStatus {
    MsaOk = 0,
    /// A required pointer argument was null.
    MsaErrNullArgument = 1,
    /// Bad letters, malformed config, unusable parameter values.
    MsaErrInvalidArgument = 2,
    /// An output buffer was too small; retry with the reported length.
    MsaErrBufferTooSmall = 3,
    /// The deterministic work budget ran out.
    MsaErrWorkBudget = 4,
    /// Handle reduction exceeded its rewrite budget.
    MsaErrReductionBudget = 5,
    /// A sample or challenge class was empty.
    MsaErrEmptySample = 6,
    /// A caught panic or other library bug.
    MsaErrInternal = 7,
}

fn status_of(err: &Error) -> MsaStatus {
    match err {
        Error::WorkBudget => MsaStatus::MsaErrWorkBudget,
        Error::ReductionBudget { .. } => MsaStatus::MsaErrReductionBudget,
        Error::EmptySample | Error::EmptyChallengeClass { .. } | Error::EmptyCandidates => {
            MsaStatus::MsaErrEmptySample
        }
        _ => MsaStatus::MsaErrInvalidArgument,
    }
}

fn fail(err: Error) -> MsaStatus {
    let code = status_of(&err);
    set_error(err.to_string());
    code
}

/// Runs `body` with panics converted to `MsaErrInternal`.
fn guarded(body: impl FnOnce() -> MsaStatus) -> MsaStatus {
    match catch_unwind(AssertUnwindSafe(body)) {
        Ok(code) => code,
        Err(panic) => {
            let msg = panic
                .downcast_ref::<&str>()
                .map(|s| s.to_string())
                .or_else(|| panic.downcast_ref::<String>().cloned())
                .unwrap_or_else(|| "panic".into());
            set_error(format!("internal error: {msg}"));
            MsaStatus::MsaErrInternal
        }
    }
}

macro_rules! require {
    ($ptr:expr) => {
        match unsafe { $ptr.as_ref() } {
            Some(r) => r,
            None => {
                set_error(concat!("null argument: ", stringify!($ptr)));
                return MsaStatus::MsaErrNullArgument;
            }
        }
    };
}

/// `len` letters starting at `ptr`, or an error for null/invalid input.
unsafe fn letters_from(ptr: *const i32, len: usize) -> Option<&'static [i32]> {
    if len == 0 {
        return Some(&[]);
    }
    if ptr.is_null() {
        set_error("null letter array");
        return None;
    }
    Some(std::slice::from_raw_parts(ptr, len))
}

fn copy_word_out(word: &Word, out: *mut i32, cap: usize, out_len: *mut usize) -> MsaStatus {
    let letters = word.letters();
    if !out_len.is_null() {
        unsafe { *out_len = letters.len() };
    }
    if letters.len() > cap {
        set_error(format!(
            "buffer holds {cap} letters, word needs {}",
            letters.len()
        ));
        return MsaStatus::MsaErrBufferTooSmall;
    }
    if !letters.is_empty() {
        if out.is_null() {
            set_error("null output buffer");
            return MsaStatus::MsaErrNullArgument;
        }
        unsafe { ptr::copy_nonoverlapping(letters.as_ptr(), out, letters.len()) };
    }
    MsaStatus::MsaOk
}

// ---------------------------------------------------------------------------
// Handles
// ---------------------------------------------------------------------------

/// Opaque platform-group context handle.
pub struct MsaContext {
    inner: GroupContext,
}

/// Opaque protocol key material handle.
pub struct MsaKeys {
    inner: KeyPair,
}

/// Key generation flavor.
#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum MsaKeygenMode {
    /// Uniform words of a fixed letter count.
    MsaKeygenClassical = 0,
    /// Products of permutation-braid factors (braid contexts only).
    MsaKeygenAlternative = 1,
}

/// Which word of the key material to export.
#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum MsaKeyWord {
    /// The private conjugator `s`.
    MsaKeySecret = 0,
    /// The public base word `w`.
    MsaKeyBase = 1,
    /// The public conjugate `t = s^-1 w s`.
    MsaKeyConjugate = 2,
}

/// Scalar summary of one simulated eavesdropping attack.
#[repr(C)]
#[derive(Clone, Copy, Debug, Default)]
pub struct MsaTrialResult {
    /// Some enumerated candidate equals the secret exactly.
    pub exact_secret: bool,
    /// Some candidate solves the conjugacy equation.
    pub conjugacy_solution: bool,
    /// Letters in the residual error element, or -1 when unmeasured.
    pub error_length: i64,
    /// Distance evaluations spent.
    pub evaluations: u64,
    /// Error-ball candidates enumerated.
    pub enumerated: u64,
    /// Accepted descent steps on the two challenge classes.
    pub steps_g0: u64,
    pub steps_g1: u64,
}

fn context_new(
    build: impl FnOnce() -> meanset_attack::Result<GroupContext>,
    out: *mut *mut MsaContext,
) -> MsaStatus {
    guarded(|| {
        if out.is_null() {
            set_error("null output handle");
            return MsaStatus::MsaErrNullArgument;
        }
        match build() {
            Ok(inner) => {
                unsafe { *out = Box::into_raw(Box::new(MsaContext { inner })) };
                MsaStatus::MsaOk
            }
            Err(e) => fail(e),
        }
    })
}

/// Free group of the given rank.
#[no_mangle]
pub extern "C" fn msa_context_new_free(rank: u32, out: *mut *mut MsaContext) -> MsaStatus {
    context_new(|| GroupContext::free(rank), out)
}

/// Free-abelian group of the given rank.
#[no_mangle]
pub extern "C" fn msa_context_new_free_abelian(rank: u32, out: *mut *mut MsaContext) -> MsaStatus {
    context_new(|| GroupContext::free_abelian(rank), out)
}

/// Braid group on the given strand count (at least 2).
#[no_mangle]
pub extern "C" fn msa_context_new_braid(strands: u32, out: *mut *mut MsaContext) -> MsaStatus {
    context_new(|| GroupContext::braid(strands), out)
}

/// Releases a context handle. Null is a no-op.
#[no_mangle]
pub extern "C" fn msa_context_free(ctx: *mut MsaContext) {
    if !ctx.is_null() {
        drop(unsafe { Box::from_raw(ctx) });
    }
}

// ---------------------------------------------------------------------------
// Word operations
// ---------------------------------------------------------------------------

/// Group-specific length of the element spelled by `letters`: reduced letter
/// count (free), L1 norm of exponents (free-abelian), or the geodesic-length
/// approximation (braid).
#[no_mangle]
pub extern "C" fn msa_word_length(
    ctx: *const MsaContext,
    letters: *const i32,
    len: usize,
    out_length: *mut u64,
) -> MsaStatus {
    guarded(|| {
        let ctx = require!(ctx);
        if out_length.is_null() {
            set_error("null output pointer");
            return MsaStatus::MsaErrNullArgument;
        }
        let Some(slice) = (unsafe { letters_from(letters, len) }) else {
            return MsaStatus::MsaErrNullArgument;
        };
        let word = match Word::new(ctx.inner.alphabet(), slice.to_vec()) {
            Ok(w) => w,
            Err(e) => return fail(e),
        };
        match ctx.inner.length(&word) {
            Ok(l) => {
                unsafe { *out_length = l };
                MsaStatus::MsaOk
            }
            Err(e) => fail(e),
        }
    })
}

/// Whether two words spell the same group element.
#[no_mangle]
pub extern "C" fn msa_word_equal(
    ctx: *const MsaContext,
    u: *const i32,
    u_len: usize,
    v: *const i32,
    v_len: usize,
    out_equal: *mut bool,
) -> MsaStatus {
    guarded(|| {
        let ctx = require!(ctx);
        if out_equal.is_null() {
            set_error("null output pointer");
            return MsaStatus::MsaErrNullArgument;
        }
        let (Some(us), Some(vs)) = (unsafe { letters_from(u, u_len) }, unsafe {
            letters_from(v, v_len)
        }) else {
            return MsaStatus::MsaErrNullArgument;
        };
        let make = |s: &[i32]| Word::new(ctx.inner.alphabet(), s.to_vec());
        let (wu, wv) = match (make(us), make(vs)) {
            (Ok(a), Ok(b)) => (a, b),
            (Err(e), _) | (_, Err(e)) => return fail(e),
        };
        match ctx.inner.equal(&wu, &wv) {
            Ok(eq) => {
                unsafe { *out_equal = eq };
                MsaStatus::MsaOk
            }
            Err(e) => fail(e),
        }
    })
}

/// Shortened representative of the word (free reduction, exponent collection,
/// or handle reduction). Writes up to `cap` letters into `out` and the true
/// length into `out_len`; returns the buffer-too-small status when `cap` is
/// short, with `out_len` still set so the caller can retry.
#[no_mangle]
pub extern "C" fn msa_word_shorten(
    ctx: *const MsaContext,
    letters: *const i32,
    len: usize,
    out: *mut i32,
    cap: usize,
    out_len: *mut usize,
) -> MsaStatus {
    guarded(|| {
        let ctx = require!(ctx);
        let Some(slice) = (unsafe { letters_from(letters, len) }) else {
            return MsaStatus::MsaErrNullArgument;
        };
        let word = match Word::new(ctx.inner.alphabet(), slice.to_vec()) {
            Ok(w) => w,
            Err(e) => return fail(e),
        };
        match ctx.inner.shorten(&word) {
            Ok(short) => copy_word_out(&short, out, cap, out_len),
            Err(e) => fail(e),
        }
    })
}

// ---------------------------------------------------------------------------
// Keys and the attack
// ---------------------------------------------------------------------------

/// Generates protocol keys: a secret conjugator `s`, a base word `w`, and
/// the public conjugate `t`. `length` counts letters (classical) or
/// permutation-braid factors (alternative). Deterministic in `seed`.
#[no_mangle]
pub extern "C" fn msa_keys_generate(
    ctx: *const MsaContext,
    mode: MsaKeygenMode,
    length: u32,
    seed: u64,
    out: *mut *mut MsaKeys,
) -> MsaStatus {
    guarded(|| {
        let ctx = require!(ctx);
        if out.is_null() {
            set_error("null output handle");
            return MsaStatus::MsaErrNullArgument;
        }
        let mut rng = rng::stream(seed, "ffi-keygen", &[length as u64]);
        let keys = match mode {
            MsaKeygenMode::MsaKeygenClassical => {
                generate_keys_classical(&ctx.inner, length, &mut rng)
            }
            MsaKeygenMode::MsaKeygenAlternative => {
                generate_keys_alternative(&ctx.inner, length, &mut rng)
            }
        };
        match keys {
            Ok(inner) => {
                unsafe { *out = Box::into_raw(Box::new(MsaKeys { inner })) };
                MsaStatus::MsaOk
            }
            Err(e) => fail(e),
        }
    })
}

/// Releases a key handle. Null is a no-op.
#[no_mangle]
pub extern "C" fn msa_keys_free(keys: *mut MsaKeys) {
    if !keys.is_null() {
        drop(unsafe { Box::from_raw(keys) });
    }
}

/// Copies one of the key words into `out` (same buffer contract as
/// `msa_word_shorten`).
#[no_mangle]
pub extern "C" fn msa_keys_word(
    keys: *const MsaKeys,
    which: MsaKeyWord,
    out: *mut i32,
    cap: usize,
    out_len: *mut usize,
) -> MsaStatus {
    guarded(|| {
        let keys = require!(keys);
        let word = match which {
            MsaKeyWord::MsaKeySecret => keys.inner.secret(),
            MsaKeyWord::MsaKeyBase => keys.inner.base(),
            MsaKeyWord::MsaKeyConjugate => keys.inner.conjugate(),
        };
        copy_word_out(word, out, cap, out_len)
    })
}

/// Simulates `rounds` balanced protocol rounds, eavesdrops the transcript,
/// and runs the error-ball attack against the keys. `work_budget` caps
/// distance evaluations (0 = unlimited). Deterministic in `seed`.
#[no_mangle]
pub extern "C" fn msa_attack_trial(
    keys: *const MsaKeys,
    rounds: u32,
    k_err: u32,
    work_budget: u64,
    seed: u64,
    out: *mut MsaTrialResult,
) -> MsaStatus {
    guarded(|| {
        let keys = require!(keys);
        if out.is_null() {
            set_error("null output pointer");
            return MsaStatus::MsaErrNullArgument;
        }
        let mut rng = rng::stream(seed, "ffi-trial", &[rounds as u64, k_err as u64]);
        let transcript =
            match run_protocol(&keys.inner, rounds, ChallengeMode::Balanced, &mut rng) {
                Ok(t) => t,
                Err(e) => return fail(e),
            };
        let (r0, r1) = match eavesdrop(&transcript) {
            Ok(split) => split,
            Err(e) => return fail(e),
        };
        let mut meter = if work_budget == 0 {
            WorkMeter::unlimited()
        } else {
            WorkMeter::with_budget(work_budget)
        };
        let params = AttackParams::default();
        let outcome = match attack2(
            keys.inner.context(),
            keys.inner.base(),
            keys.inner.conjugate(),
            &r0,
            &r1,
            &params,
            k_err,
            Some(keys.inner.secret()),
            &mut rng,
            &mut meter,
        ) {
            Ok(o) => o,
            Err(e) => return fail(e),
        };
        unsafe {
            *out = MsaTrialResult {
                exact_secret: outcome.exact_secret,
                conjugacy_solution: outcome.conjugacy_solution,
                error_length: outcome
                    .error_element_length
                    .map_or(-1, |l| l as i64),
                evaluations: outcome.evaluations,
                enumerated: outcome.enumerated,
                steps_g0: outcome.steps_g0,
                steps_g1: outcome.steps_g1,
            };
        }
        MsaStatus::MsaOk
    })
}

// ---------------------------------------------------------------------------
// Sweeps
// ---------------------------------------------------------------------------

/// Runs a full experiment sweep from a JSON config (same schema as the CLI's
/// `attack-sweep --config`) and returns `{"cells": [...], "csv": "..."}` as a
/// JSON string. Release the string with `msa_string_free`.
#[no_mangle]
pub extern "C" fn msa_sweep_run_json(
    config_json: *const c_char,
    out_json: *mut *mut c_char,
) -> MsaStatus {
    guarded(|| {
        if config_json.is_null() || out_json.is_null() {
            set_error("null argument");
            return MsaStatus::MsaErrNullArgument;
        }
        let text = match unsafe { CStr::from_ptr(config_json) }.to_str() {
            Ok(t) => t,
            Err(_) => {
                set_error("config is not valid UTF-8");
                return MsaStatus::MsaErrInvalidArgument;
            }
        };
        let config = match parse_config(text) {
            Ok(c) => c,
            Err(e) => return fail(e),
        };
        let run = match run_attack_sweep(&config) {
            Ok(r) => r,
            Err(e) => return fail(e),
        };
        let payload = serde_json::json!({
            "cells": run.cells,
            "csv": meanset_attack::harness::emit::render_csv(&run.cells, config.seed),
        });
        let text = payload.to_string();
        match CString::new(text) {
            Ok(cstr) => {
                unsafe { *out_json = cstr.into_raw() };
                MsaStatus::MsaOk
            }
            Err(_) => {
                set_error("result contained an interior NUL byte");
                MsaStatus::MsaErrInternal
            }
        }
    })
}

/// Releases a string returned by this library. Null is a no-op.
#[no_mangle]
pub extern "C" fn msa_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(unsafe { CString::from_raw(s) });
    }
}

// ---------------------------------------------------------------------------
// Errors
// ---------------------------------------------------------------------------

/// Copies the current thread's last error message (NUL-terminated) into
/// `buf` and returns the full message length in bytes, excluding the NUL.
/// Call with `cap = 0` to query the length alone.
#[no_mangle]
pub extern "C" fn msa_last_error_message(buf: *mut c_char, cap: usize) -> usize {
    LAST_ERROR.with(|e| {
        let msg = e.borrow();
        let bytes = msg.as_bytes();
        if !buf.is_null() && cap > 0 {
            let n = bytes.len().min(cap - 1);
            unsafe {
                ptr::copy_nonoverlapping(bytes.as_ptr() as *const c_char, buf, n);
                *buf.add(n) = 0;
            }
        }
        bytes.len()
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn make_braid(strands: u32) -> *mut MsaContext {
        let mut ctx: *mut MsaContext = ptr::null_mut();
        assert_eq!(
            msa_context_new_braid(strands, &mut ctx),
            MsaStatus::MsaOk
        );
        assert!(!ctx.is_null());
        ctx
    }

    #[test]
    fn context_lifecycle_and_null_safety() {
        assert_eq!(
            msa_context_new_braid(5, ptr::null_mut()),
            MsaStatus::MsaErrNullArgument
        );
        let mut ctx: *mut MsaContext = ptr::null_mut();
        assert_eq!(
            msa_context_new_braid(1, &mut ctx),
            MsaStatus::MsaErrInvalidArgument
        );
        let mut msg = vec![0i8; 128];
        let len = msa_last_error_message(msg.as_mut_ptr() as *mut c_char, msg.len());
        assert!(len > 0);
        let ctx = make_braid(5);
        msa_context_free(ctx);
        msa_context_free(ptr::null_mut());
    }

    #[test]
    fn braid_word_ops_roundtrip() {
        let ctx = make_braid(3);
        // sigma_1 sigma_1^-1 is trivial
        let trivial = [1i32, -1];
        let mut len = u64::MAX;
        assert_eq!(
            msa_word_length(ctx, trivial.as_ptr(), 2, &mut len),
            MsaStatus::MsaOk
        );
        assert_eq!(len, 0);

        // braid relation: 121 = 212
        let lhs = [1i32, 2, 1];
        let rhs = [2i32, 1, 2];
        let mut eq = false;
        assert_eq!(
            msa_word_equal(ctx, lhs.as_ptr(), 3, rhs.as_ptr(), 3, &mut eq),
            MsaStatus::MsaOk
        );
        assert!(eq);

        // shorten 1 2 -2: needs 1 letter, probe then fill
        let word = [1i32, 2, -2];
        let mut needed = 0usize;
        assert_eq!(
            msa_word_shorten(ctx, word.as_ptr(), 3, ptr::null_mut(), 0, &mut needed),
            MsaStatus::MsaErrBufferTooSmall
        );
        assert_eq!(needed, 1);
        let mut out = [0i32; 4];
        assert_eq!(
            msa_word_shorten(ctx, word.as_ptr(), 3, out.as_mut_ptr(), 4, &mut needed),
            MsaStatus::MsaOk
        );
        assert_eq!(&out[..needed], &[1]);

        // out-of-range letter
        let bad = [7i32];
        assert_eq!(
            msa_word_length(ctx, bad.as_ptr(), 1, &mut len),
            MsaStatus::MsaErrInvalidArgument
        );
        msa_context_free(ctx);
    }

    #[test]
    fn keygen_attack_roundtrip() {
        let ctx = make_braid(5);
        let mut keys: *mut MsaKeys = ptr::null_mut();
        assert_eq!(
            msa_keys_generate(
                ctx,
                MsaKeygenMode::MsaKeygenClassical,
                10,
                7,
                &mut keys
            ),
            MsaStatus::MsaOk
        );

        let mut needed = 0usize;
        assert_eq!(
            msa_keys_word(keys, MsaKeyWord::MsaKeySecret, ptr::null_mut(), 0, &mut needed),
            MsaStatus::MsaErrBufferTooSmall
        );
        assert_eq!(needed, 10);
        let mut secret = vec![0i32; needed];
        assert_eq!(
            msa_keys_word(
                keys,
                MsaKeyWord::MsaKeySecret,
                secret.as_mut_ptr(),
                secret.len(),
                &mut needed
            ),
            MsaStatus::MsaOk
        );

        // t must equal s^-1 w s
        let mut base = vec![0i32; 64];
        let mut base_len = 0usize;
        assert_eq!(
            msa_keys_word(keys, MsaKeyWord::MsaKeyBase, base.as_mut_ptr(), 64, &mut base_len),
            MsaStatus::MsaOk
        );
        let mut conj = vec![0i32; 64];
        let mut conj_len = 0usize;
        assert_eq!(
            msa_keys_word(keys, MsaKeyWord::MsaKeyConjugate, conj.as_mut_ptr(), 64, &mut conj_len),
            MsaStatus::MsaOk
        );
        let mut expected: Vec<i32> = secret.iter().rev().map(|&l| -l).collect();
        expected.extend_from_slice(&base[..base_len]);
        expected.extend_from_slice(&secret);
        let mut eq = false;
        assert_eq!(
            msa_word_equal(
                ctx,
                conj.as_ptr(),
                conj_len,
                expected.as_ptr(),
                expected.len(),
                &mut eq
            ),
            MsaStatus::MsaOk
        );
        assert!(eq);

        let mut result = MsaTrialResult::default();
        assert_eq!(
            msa_attack_trial(keys, 80, 0, 0, 11, &mut result),
            MsaStatus::MsaOk
        );
        assert!(result.evaluations > 0);
        assert!(result.error_length >= 0);
        if result.exact_secret {
            assert_eq!(result.error_length, 0);
        }

        // tiny budget surfaces as a budget error
        assert_eq!(
            msa_attack_trial(keys, 80, 0, 3, 11, &mut result),
            MsaStatus::MsaErrWorkBudget
        );

        msa_keys_free(keys);
        msa_context_free(ctx);
    }

    #[test]
    fn sweep_json_roundtrip() {
        let config = CString::new(
            r#"{"group": "free-abelian", "n": 1, "L": [3], "k": [8], "trials": 4, "seed": 5}"#,
        )
        .unwrap();
        let mut out: *mut c_char = ptr::null_mut();
        assert_eq!(
            msa_sweep_run_json(config.as_ptr(), &mut out),
            MsaStatus::MsaOk
        );
        let text = unsafe { CStr::from_ptr(out) }.to_str().unwrap().to_owned();
        msa_string_free(out);
        let value: serde_json::Value = serde_json::from_str(&text).unwrap();
        assert_eq!(value["cells"][0]["trials"], 4);
        assert!(value["csv"].as_str().unwrap().starts_with("n,L,k,T"));

        let bad = CString::new(r#"{"nope": 1}"#).unwrap();
        assert_eq!(
            msa_sweep_run_json(bad.as_ptr(), &mut out),
            MsaStatus::MsaErrInvalidArgument
        );
    }
}
