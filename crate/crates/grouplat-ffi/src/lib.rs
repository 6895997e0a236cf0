//! C ABI for the grouplat solvers.
//!
//! Two surfaces are exposed: a one-call JSON task runner mirroring the
//! `grouplat run` CLI, and a handle-based API around folded subgroup
//! graphs for callers that keep a subgroup around and query it
//! repeatedly. All strings returned through out-parameters are owned by
//! the caller and must be released with [`grouplat_string_free`];
//! graph handles must be released with [`grouplat_graph_free`].
//!
//! Every function returns a [`GrouplatStatus`]; on failure the `out`
//! string parameter (when present) receives the error message instead of
//! a result.

use std::ffi::{CStr, CString};
use std::os::raw::c_char;
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::sync::Arc;

use grouplat::graph::{stallings, FoldedGraph};
use grouplat::task::{run_task, RunOptions};
use grouplat::words::{Alphabet, Word};

/// Result codes of every `grouplat_*` call. `PARSE_ERROR` and
/// `PRECONDITION` match the CLI exit codes 2 and 3.
#[repr(C)]
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum GrouplatStatus {
    Ok = 0,
    ParseError = 2,
    Precondition = 3,
    NullPointer = 4,
    InvalidUtf8 = 5,
    Internal = 6,
}

/// Opaque handle to a folded subgroup graph (a Stallings graph) together
/// with its alphabet.
pub struct GrouplatGraph {
    alphabet: Arc<Alphabet>,
    graph: FoldedGraph,
}

fn write_string(out: *mut *mut c_char, value: String) {
    if out.is_null() {
        return;
    }
    let cstring = CString::new(value).unwrap_or_else(|_| CString::new("invalid string").unwrap());
    unsafe {
        *out = cstring.into_raw();
    }
}

fn read_str<'a>(ptr: *const c_char) -> Result<&'a str, GrouplatStatus> {
    if ptr.is_null() {
        return Err(GrouplatStatus::NullPointer);
    }
    unsafe { CStr::from_ptr(ptr) }
        .to_str()
        .map_err(|_| GrouplatStatus::InvalidUtf8)
}

fn guarded<F: FnOnce() -> GrouplatStatus>(out: *mut *mut c_char, body: F) -> GrouplatStatus {
    match catch_unwind(AssertUnwindSafe(body)) {
        Ok(status) => status,
        Err(panic) => {
            let message = panic
                .downcast_ref::<&str>()
                .map(|s| s.to_string())
                .or_else(|| panic.downcast_ref::<String>().cloned())
                .unwrap_or_else(|| "internal error".to_string());
            write_string(out, message);
            GrouplatStatus::Internal
        }
    }
}

fn parse_json_strings(text: &str) -> Result<Vec<String>, String> {
    serde_json::from_str::<Vec<String>>(text).map_err(|e| format!("bad JSON string array: {e}"))
}

/// Runs one JSON task (same schema as the `grouplat run` subcommand) and
/// writes the JSON result to `out`. A negative `check_oracle_budget`
/// disables oracle verification.
///
/// # Safety
/// `task_json` must be a valid NUL-terminated string and `out` a valid
/// pointer to writable storage.
#[no_mangle]
pub unsafe extern "C" fn grouplat_run_task(
    task_json: *const c_char,
    check_oracle_budget: i64,
    compact: bool,
    out: *mut *mut c_char,
) -> GrouplatStatus {
    guarded(out, || {
        let input = match read_str(task_json) {
            Ok(s) => s,
            Err(status) => return status,
        };
        let opts = RunOptions {
            check_oracle: usize::try_from(check_oracle_budget).ok(),
            compact,
            ..RunOptions::default()
        };
        match run_task(input, &opts) {
            Ok(value) => {
                write_string(out, serde_json::to_string(&value).expect("serializable"));
                GrouplatStatus::Ok
            }
            Err(err) => {
                write_string(out, err.message);
                if err.exit_code == 2 {
                    GrouplatStatus::ParseError
                } else {
                    GrouplatStatus::Precondition
                }
            }
        }
    })
}

/// Builds the folded Stallings graph of a subgroup. `alphabet_json` is a
/// JSON array of generator names, `generators_json` a JSON array of
/// subgroup generator words in word syntax.
///
/// # Safety
/// Both strings must be valid NUL-terminated strings; `out_graph` must
/// point to writable storage. The returned handle must be freed with
/// [`grouplat_graph_free`].
#[no_mangle]
pub unsafe extern "C" fn grouplat_graph_new(
    alphabet_json: *const c_char,
    generators_json: *const c_char,
    out_graph: *mut *mut GrouplatGraph,
    out_error: *mut *mut c_char,
) -> GrouplatStatus {
    guarded(out_error, || {
        if out_graph.is_null() {
            return GrouplatStatus::NullPointer;
        }
        let (names, gens) = match (read_str(alphabet_json), read_str(generators_json)) {
            (Ok(a), Ok(g)) => (a, g),
            (Err(status), _) | (_, Err(status)) => return status,
        };
        let names = match parse_json_strings(names) {
            Ok(n) => n,
            Err(msg) => {
                write_string(out_error, msg);
                return GrouplatStatus::ParseError;
            }
        };
        let gens = match parse_json_strings(gens) {
            Ok(g) => g,
            Err(msg) => {
                write_string(out_error, msg);
                return GrouplatStatus::ParseError;
            }
        };
        let alphabet = match Alphabet::new(names) {
            Ok(a) => a,
            Err(err) => {
                write_string(out_error, err.to_string());
                return GrouplatStatus::ParseError;
            }
        };
        let mut words = Vec::with_capacity(gens.len());
        for g in &gens {
            match Word::parse(&alphabet, g) {
                Ok(w) => words.push(w),
                Err(err) => {
                    write_string(out_error, err.to_string());
                    return GrouplatStatus::ParseError;
                }
            }
        }
        let graph = stallings(&alphabet, &words);
        unsafe {
            *out_graph = Box::into_raw(Box::new(GrouplatGraph { alphabet, graph }));
        }
        GrouplatStatus::Ok
    })
}

unsafe fn graph_ref<'a>(graph: *const GrouplatGraph) -> Result<&'a GrouplatGraph, GrouplatStatus> {
    if graph.is_null() {
        Err(GrouplatStatus::NullPointer)
    } else {
        Ok(unsafe { &*graph })
    }
}

/// Subgroup membership of a word given in word syntax.
///
/// # Safety
/// `graph` must be a live handle from [`grouplat_graph_new`]; `word` a
/// valid string; `out_member` writable.
#[no_mangle]
pub unsafe extern "C" fn grouplat_graph_contains(
    graph: *const GrouplatGraph,
    word: *const c_char,
    out_member: *mut bool,
) -> GrouplatStatus {
    guarded(std::ptr::null_mut(), || {
        let handle = match graph_ref(graph) {
            Ok(h) => h,
            Err(status) => return status,
        };
        let text = match read_str(word) {
            Ok(t) => t,
            Err(status) => return status,
        };
        if out_member.is_null() {
            return GrouplatStatus::NullPointer;
        }
        match Word::parse(&handle.alphabet, text) {
            Ok(w) => {
                unsafe { *out_member = handle.graph.contains(&w) };
                GrouplatStatus::Ok
            }
            Err(_) => GrouplatStatus::ParseError,
        }
    })
}

/// Closest subgroup element to `word` and the distance.
///
/// # Safety
/// As for [`grouplat_graph_contains`]; `out_witness` receives an owned
/// string.
#[no_mangle]
pub unsafe extern "C" fn grouplat_graph_closest(
    graph: *const GrouplatGraph,
    word: *const c_char,
    out_witness: *mut *mut c_char,
    out_distance: *mut usize,
) -> GrouplatStatus {
    guarded(out_witness, || {
        let handle = match graph_ref(graph) {
            Ok(h) => h,
            Err(status) => return status,
        };
        let text = match read_str(word) {
            Ok(t) => t,
            Err(status) => return status,
        };
        if out_distance.is_null() {
            return GrouplatStatus::NullPointer;
        }
        match Word::parse(&handle.alphabet, text) {
            Ok(w) => {
                let (witness, d) = handle.graph.closest_element(&w);
                write_string(out_witness, witness.to_string());
                unsafe { *out_distance = d };
                GrouplatStatus::Ok
            }
            Err(err) => {
                write_string(out_witness, err.to_string());
                GrouplatStatus::ParseError
            }
        }
    })
}

/// Shortest nontrivial subgroup element. `out_found` is false for the
/// trivial subgroup, in which case witness and length are not written.
///
/// # Safety
/// As for [`grouplat_graph_closest`].
#[no_mangle]
pub unsafe extern "C" fn grouplat_graph_shortest(
    graph: *const GrouplatGraph,
    out_witness: *mut *mut c_char,
    out_length: *mut usize,
    out_found: *mut bool,
) -> GrouplatStatus {
    guarded(out_witness, || {
        let handle = match graph_ref(graph) {
            Ok(h) => h,
            Err(status) => return status,
        };
        if out_found.is_null() || out_length.is_null() {
            return GrouplatStatus::NullPointer;
        }
        match handle.graph.shortest_element() {
            Some((witness, len)) => {
                write_string(out_witness, witness.to_string());
                unsafe {
                    *out_length = len;
                    *out_found = true;
                }
            }
            None => unsafe {
                *out_found = false;
            },
        }
        GrouplatStatus::Ok
    })
}

/// DOT rendering of the folded graph.
///
/// # Safety
/// `graph` must be a live handle; `out_dot` writable.
#[no_mangle]
pub unsafe extern "C" fn grouplat_graph_dot(
    graph: *const GrouplatGraph,
    out_dot: *mut *mut c_char,
) -> GrouplatStatus {
    guarded(out_dot, || {
        let handle = match graph_ref(graph) {
            Ok(h) => h,
            Err(status) => return status,
        };
        write_string(out_dot, handle.graph.dot());
        GrouplatStatus::Ok
    })
}

/// Releases a graph handle.
///
/// # Safety
/// `graph` must come from [`grouplat_graph_new`] and not be used again.
#[no_mangle]
pub unsafe extern "C" fn grouplat_graph_free(graph: *mut GrouplatGraph) {
    if !graph.is_null() {
        drop(unsafe { Box::from_raw(graph) });
    }
}

/// Releases a string returned by any `grouplat_*` call.
///
/// # Safety
/// `s` must come from this library and not be used again.
#[no_mangle]
pub unsafe extern "C" fn grouplat_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(unsafe { CString::from_raw(s) });
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    unsafe fn take_string(ptr: *mut c_char) -> String {
        assert!(!ptr.is_null());
        let s = CStr::from_ptr(ptr).to_str().unwrap().to_string();
        grouplat_string_free(ptr);
        s
    }

    #[test]
    fn run_task_round_trip() {
        let task =
            CString::new(r#"{"task":"closest","alphabet":["a","b"],"subgroup":["a b a^-1"],"g":"a b"}"#)
                .unwrap();
        let mut out: *mut c_char = std::ptr::null_mut();
        let status = unsafe { grouplat_run_task(task.as_ptr(), -1, false, &mut out) };
        assert_eq!(status, GrouplatStatus::Ok);
        assert_eq!(
            unsafe { take_string(out) },
            r#"{"h":"a b a^-1","distance":1}"#
        );
    }

    #[test]
    fn run_task_reports_errors() {
        let task = CString::new("not json").unwrap();
        let mut out: *mut c_char = std::ptr::null_mut();
        let status = unsafe { grouplat_run_task(task.as_ptr(), -1, false, &mut out) };
        assert_eq!(status, GrouplatStatus::ParseError);
        assert!(unsafe { take_string(out) }.contains("bad task JSON"));
        assert_eq!(
            unsafe { grouplat_run_task(std::ptr::null(), -1, false, &mut out) },
            GrouplatStatus::NullPointer
        );
    }

    #[test]
    fn graph_handle_lifecycle() {
        let alphabet = CString::new(r#"["a","b"]"#).unwrap();
        let gens = CString::new(r#"["a b a^-1"]"#).unwrap();
        let mut graph: *mut GrouplatGraph = std::ptr::null_mut();
        let mut err: *mut c_char = std::ptr::null_mut();
        let status = unsafe {
            grouplat_graph_new(alphabet.as_ptr(), gens.as_ptr(), &mut graph, &mut err)
        };
        assert_eq!(status, GrouplatStatus::Ok);

        let word = CString::new("a b a^-1 a b a^-1").unwrap();
        let mut member = false;
        let status = unsafe { grouplat_graph_contains(graph, word.as_ptr(), &mut member) };
        assert_eq!((status, member), (GrouplatStatus::Ok, true));

        let g = CString::new("a b").unwrap();
        let mut witness: *mut c_char = std::ptr::null_mut();
        let mut distance = 0usize;
        let status =
            unsafe { grouplat_graph_closest(graph, g.as_ptr(), &mut witness, &mut distance) };
        assert_eq!(status, GrouplatStatus::Ok);
        assert_eq!(unsafe { take_string(witness) }, "a b a^-1");
        assert_eq!(distance, 1);

        let mut shortest: *mut c_char = std::ptr::null_mut();
        let mut length = 0usize;
        let mut found = false;
        let status = unsafe {
            grouplat_graph_shortest(graph, &mut shortest, &mut length, &mut found)
        };
        assert_eq!(status, GrouplatStatus::Ok);
        assert!(found);
        assert_eq!(unsafe { take_string(shortest) }, "a b a^-1");
        assert_eq!(length, 3);

        let mut dot: *mut c_char = std::ptr::null_mut();
        assert_eq!(
            unsafe { grouplat_graph_dot(graph, &mut dot) },
            GrouplatStatus::Ok
        );
        assert!(unsafe { take_string(dot) }.starts_with("digraph"));

        unsafe { grouplat_graph_free(graph) };
    }

    #[test]
    fn bad_inputs_do_not_crash() {
        let alphabet = CString::new("oops").unwrap();
        let gens = CString::new(r#"[]"#).unwrap();
        let mut graph: *mut GrouplatGraph = std::ptr::null_mut();
        let mut err: *mut c_char = std::ptr::null_mut();
        let status = unsafe {
            grouplat_graph_new(alphabet.as_ptr(), gens.as_ptr(), &mut graph, &mut err)
        };
        assert_eq!(status, GrouplatStatus::ParseError);
        assert!(unsafe { take_string(err) }.contains("bad JSON"));
        unsafe { grouplat_graph_free(std::ptr::null_mut()) };
        unsafe { grouplat_string_free(std::ptr::null_mut()) };
    }
}
