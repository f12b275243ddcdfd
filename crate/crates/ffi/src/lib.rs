//! C ABI for the extraction engine: opaque query handles, status codes, and
//! JSON-string results.
//!
//! Ownership rules: every `char *` handed out by these functions is a
//! NUL-terminated UTF-8 string owned by the caller and released with
//! [`wq_string_free`]; queries from [`wq_query_parse`] are released with
//! [`wq_query_free`]. All entry points catch panics and report
//! `WQ_STATUS_PANIC` instead of unwinding across the boundary.

use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::time::Duration;

use webquery::backend::HttpBackend;
use webquery::executor::{execute, ExecError, ExecutionOptions};
use webquery::query::{
    detect_format, output_shape, parse_query, to_json5, validate, Query, QueryError, QueryFormat,
    ShapeDescriptor,
};
use webquery::record::records_to_json;
use webquery::value::escape_json_string;

/// Result of every fallible call.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum WqStatus {
    Ok = 0,
    /// A required pointer argument was NULL.
    NullArgument = 1,
    /// Input text was not valid UTF-8.
    Utf8Error = 2,
    /// The query text failed to parse (malformed JSON5/YAML).
    SyntaxError = 3,
    /// The query document used an unknown keyword or wrong value type.
    SchemaError = 4,
    /// The query model violates an invariant; see the violations JSON.
    InvalidQuery = 5,
    /// Navigating the root URL failed.
    NavigationError = 6,
    /// An expression used an unsupported XPath construct.
    UnsupportedXpath = 7,
    /// An internal panic was caught at the boundary.
    Panic = 8,
}

/// Query text format selector.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum WqFormat {
    /// Sniff: a document starting with `{` or `[` is JSON5, otherwise YAML.
    Auto = 0,
    Json5 = 1,
    Yaml = 2,
}

/// An owned, parsed query. Opaque to C.
pub struct WqQuery {
    inner: Query,
}

/// Execution knobs for [`wq_execute`]. Obtain defaults from
/// [`wq_exec_options_default`] and adjust fields as needed.
#[repr(C)]
#[derive(Debug, Clone, Copy)]
pub struct WqExecOptions {
    /// How deep follow chains may nest.
    pub max_follow_depth: u32,
    /// Hard cap on pages per paginated step.
    pub max_pages_per_step: u32,
    /// Navigation timeout, seconds.
    pub timeout_secs: u32,
    /// Pause between navigations, milliseconds.
    pub politeness_delay_ms: u64,
    /// Escape non-ASCII characters in the records JSON as \uXXXX.
    pub ensure_ascii: bool,
}

/// Engine version as a static string; do not free.
#[no_mangle]
pub extern "C" fn wq_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr() as *const c_char
}

/// Default execution options.
#[no_mangle]
pub extern "C" fn wq_exec_options_default() -> WqExecOptions {
    WqExecOptions {
        max_follow_depth: 5,
        max_pages_per_step: 100,
        timeout_secs: 30,
        politeness_delay_ms: 0,
        ensure_ascii: true,
    }
}

/// Parses query text into a handle. On success stores the handle in
/// `out_query`. On failure stores a diagnostic in `out_error` (when
/// non-NULL) and returns the matching status.
///
/// # Safety
/// `text` must point to a NUL-terminated string; `out_query` must be a valid
/// pointer; `out_error`, when non-NULL, must be valid for writes.
#[no_mangle]
pub unsafe extern "C" fn wq_query_parse(
    text: *const c_char,
    format: WqFormat,
    out_query: *mut *mut WqQuery,
    out_error: *mut *mut c_char,
) -> WqStatus {
    clear_out(out_error);
    if text.is_null() || out_query.is_null() {
        return WqStatus::NullArgument;
    }
    let bytes = CStr::from_ptr(text);
    let Ok(text) = bytes.to_str() else {
        return WqStatus::Utf8Error;
    };

    let outcome = catch_unwind(AssertUnwindSafe(|| {
        let format = match format {
            WqFormat::Json5 => QueryFormat::Json5,
            WqFormat::Yaml => QueryFormat::Yaml,
            WqFormat::Auto => detect_format("", text),
        };
        parse_query(text, format)
    }));

    match outcome {
        Ok(Ok(query)) => {
            *out_query = Box::into_raw(Box::new(WqQuery { inner: query }));
            WqStatus::Ok
        }
        Ok(Err(e)) => {
            set_string(out_error, &e.to_string());
            match e {
                QueryError::Syntax { .. } => WqStatus::SyntaxError,
                QueryError::Schema { .. } => WqStatus::SchemaError,
                QueryError::Invalid { .. } => WqStatus::InvalidQuery,
            }
        }
        Err(_) => WqStatus::Panic,
    }
}

/// Validates a query and stores all invariant violations as a JSON array of
/// `{"path": ..., "message": ...}` objects (empty array means valid).
///
/// # Safety
/// `query` must come from [`wq_query_parse`]; `out_violations_json` must be
/// valid for writes.
#[no_mangle]
pub unsafe extern "C" fn wq_query_validate(
    query: *const WqQuery,
    out_violations_json: *mut *mut c_char,
) -> WqStatus {
    if query.is_null() || out_violations_json.is_null() {
        return WqStatus::NullArgument;
    }
    let query = &(*query).inner;
    let outcome = catch_unwind(AssertUnwindSafe(|| {
        let violations = validate(query);
        let mut json = String::from("[");
        for (i, v) in violations.iter().enumerate() {
            if i > 0 {
                json.push(',');
            }
            json.push_str("{\"path\": ");
            escape_json_string(&v.path, true, &mut json);
            json.push_str(", \"message\": ");
            escape_json_string(&v.message, true, &mut json);
            json.push('}');
        }
        json.push(']');
        json
    }));
    match outcome {
        Ok(json) => {
            set_string(out_violations_json, &json);
            WqStatus::Ok
        }
        Err(_) => WqStatus::Panic,
    }
}

/// Derives the output shape of a valid query as JSON:
/// `{"kind": "scalar"}`, `{"kind": "array", "element": ...}`, or
/// `{"kind": "object", "keys": [{"name": ..., "shape": ...}]}`.
///
/// # Safety
/// `query` must come from [`wq_query_parse`]; `out_shape_json` must be valid
/// for writes.
#[no_mangle]
pub unsafe extern "C" fn wq_query_output_shape(
    query: *const WqQuery,
    out_shape_json: *mut *mut c_char,
) -> WqStatus {
    if query.is_null() || out_shape_json.is_null() {
        return WqStatus::NullArgument;
    }
    let query = &(*query).inner;
    let outcome = catch_unwind(AssertUnwindSafe(|| output_shape(query)));
    match outcome {
        Ok(Ok(shape)) => {
            let mut json = String::new();
            shape_to_json(&shape, &mut json);
            set_string(out_shape_json, &json);
            WqStatus::Ok
        }
        Ok(Err(_)) => WqStatus::InvalidQuery,
        Err(_) => WqStatus::Panic,
    }
}

/// Renders the query back to JSON5 text.
///
/// # Safety
/// `query` must come from [`wq_query_parse`]; `out_text` must be valid for
/// writes.
#[no_mangle]
pub unsafe extern "C" fn wq_query_to_json5(
    query: *const WqQuery,
    out_text: *mut *mut c_char,
) -> WqStatus {
    if query.is_null() || out_text.is_null() {
        return WqStatus::NullArgument;
    }
    let query = &(*query).inner;
    match catch_unwind(AssertUnwindSafe(|| to_json5(query))) {
        Ok(text) => {
            set_string(out_text, &text);
            WqStatus::Ok
        }
        Err(_) => WqStatus::Panic,
    }
}

/// Executes the query over the static HTTP backend and stores the records as
/// a pretty-printed JSON array. `options` may be NULL for defaults. On
/// failure a diagnostic lands in `out_error` (when non-NULL).
///
/// # Safety
/// `query` must come from [`wq_query_parse`]; `out_records_json` must be
/// valid for writes; `options` and `out_error`, when non-NULL, must point to
/// valid memory.
#[no_mangle]
pub unsafe extern "C" fn wq_execute(
    query: *const WqQuery,
    options: *const WqExecOptions,
    out_records_json: *mut *mut c_char,
    out_error: *mut *mut c_char,
) -> WqStatus {
    clear_out(out_error);
    if query.is_null() || out_records_json.is_null() {
        return WqStatus::NullArgument;
    }
    let query = &(*query).inner;
    let opts = if options.is_null() {
        wq_exec_options_default()
    } else {
        *options
    };

    let outcome = catch_unwind(AssertUnwindSafe(|| {
        let exec_options = ExecutionOptions {
            max_follow_depth: opts.max_follow_depth,
            max_pages_per_step: opts.max_pages_per_step,
            politeness_delay: Duration::from_millis(opts.politeness_delay_ms),
        };
        let mut backend = HttpBackend::with_options(
            Duration::from_secs(opts.timeout_secs as u64),
            Duration::from_secs(10),
            5,
        );
        execute(query, &mut backend, &exec_options)
    }));

    match outcome {
        Ok(Ok(records)) => {
            set_string(out_records_json, &records_to_json(&records, opts.ensure_ascii));
            WqStatus::Ok
        }
        Ok(Err(e)) => {
            set_string(out_error, &e.to_string());
            match e {
                ExecError::InvalidQuery(_) => WqStatus::InvalidQuery,
                ExecError::RootNavigation(_) | ExecError::MalformedUrl { .. } => {
                    WqStatus::NavigationError
                }
                ExecError::Xpath(_) => WqStatus::UnsupportedXpath,
            }
        }
        Err(_) => WqStatus::Panic,
    }
}

/// Releases a query handle. NULL is a no-op.
///
/// # Safety
/// `query` must be NULL or a pointer from [`wq_query_parse`] not yet freed.
#[no_mangle]
pub unsafe extern "C" fn wq_query_free(query: *mut WqQuery) {
    if !query.is_null() {
        drop(Box::from_raw(query));
    }
}

/// Releases a string produced by this library. NULL is a no-op.
///
/// # Safety
/// `s` must be NULL or a pointer handed out by this library not yet freed.
#[no_mangle]
pub unsafe extern "C" fn wq_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

fn shape_to_json(shape: &ShapeDescriptor, out: &mut String) {
    match shape {
        ShapeDescriptor::Scalar => out.push_str("{\"kind\": \"scalar\"}"),
        ShapeDescriptor::Array(element) => {
            out.push_str("{\"kind\": \"array\", \"element\": ");
            shape_to_json(element, out);
            out.push('}');
        }
        ShapeDescriptor::Object(entries) => {
            out.push_str("{\"kind\": \"object\", \"keys\": [");
            for (i, (name, value)) in entries.iter().enumerate() {
                if i > 0 {
                    out.push_str(", ");
                }
                out.push_str("{\"name\": ");
                escape_json_string(name, true, out);
                out.push_str(", \"shape\": ");
                shape_to_json(value, out);
                out.push('}');
            }
            out.push_str("]}");
        }
    }
}

unsafe fn set_string(out: *mut *mut c_char, value: &str) {
    if out.is_null() {
        return;
    }
    // Engine output never contains NUL; replace if one ever appears.
    let cstring = CString::new(value)
        .unwrap_or_else(|_| CString::new(value.replace('\0', "\u{fffd}")).expect("no interior NUL"));
    *out = cstring.into_raw();
}

unsafe fn clear_out(out: *mut *mut c_char) {
    if !out.is_null() {
        *out = std::ptr::null_mut();
    }
}
