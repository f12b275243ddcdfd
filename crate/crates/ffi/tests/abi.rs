//! Exercises the C surface from Rust: status codes, ownership contracts, and
//! a hermetic execution against a local fixture site.

use std::ffi::{c_char, CStr, CString};
use std::ptr;

use webquery_ffi::*;

fn take_string(ptr: *mut c_char) -> String {
    assert!(!ptr.is_null(), "expected a string out-parameter");
    let s = unsafe { CStr::from_ptr(ptr) }.to_str().unwrap().to_owned();
    unsafe { wq_string_free(ptr) };
    s
}

fn parse(text: &str, format: WqFormat) -> Result<*mut WqQuery, (WqStatus, String)> {
    let c_text = CString::new(text).unwrap();
    let mut query: *mut WqQuery = ptr::null_mut();
    let mut error: *mut c_char = ptr::null_mut();
    let status = unsafe { wq_query_parse(c_text.as_ptr(), format, &mut query, &mut error) };
    if status == WqStatus::Ok {
        assert!(error.is_null());
        Ok(query)
    } else {
        let message = if error.is_null() {
            String::new()
        } else {
            take_string(error)
        };
        Err((status, message))
    }
}

const VALID_QUERY: &str = r#"{
  "@url": "https://fixture.test/catalog",
  "@steps": [{
    "@xpath": "//div[contains(@class, 'row')]",
    "@fields": {"x": "./a/@href"}
  }]
}"#;

#[test]
fn version_is_a_static_string() {
    let version = unsafe { CStr::from_ptr(wq_version()) }.to_str().unwrap();
    assert_eq!(version, env!("CARGO_PKG_VERSION"));
}

#[test]
fn parse_and_free_round_trip() {
    let query = parse(VALID_QUERY, WqFormat::Json5).unwrap();
    unsafe { wq_query_free(query) };
    unsafe { wq_query_free(ptr::null_mut()) }; // NULL is a no-op
}

#[test]
fn auto_format_sniffs_json5_and_yaml() {
    let query = parse(VALID_QUERY, WqFormat::Auto).unwrap();
    unsafe { wq_query_free(query) };

    let yaml = "\"@url\": \"https://fixture.test/x\"\n\"@steps\":\n  - \"@xpath\": \"//a\"\n    \"@fields\":\n      x: \"./@href\"\n";
    let query = parse(yaml, WqFormat::Auto).unwrap();
    unsafe { wq_query_free(query) };
}

#[test]
fn syntax_and_schema_errors_carry_status_and_message() {
    let (status, message) = parse("{ not valid", WqFormat::Json5).unwrap_err();
    assert_eq!(status, WqStatus::SyntaxError);
    assert!(!message.is_empty());

    let (status, message) = parse(
        r#"{"@url": "https://x.example", "@steps": [{"@xpath": "//a", "@bogus": 1}]}"#,
        WqFormat::Json5,
    )
    .unwrap_err();
    assert_eq!(status, WqStatus::SchemaError);
    assert!(message.contains("@bogus"));
}

#[test]
fn null_arguments_are_rejected() {
    let mut query: *mut WqQuery = ptr::null_mut();
    let status = unsafe {
        wq_query_parse(ptr::null(), WqFormat::Json5, &mut query, ptr::null_mut())
    };
    assert_eq!(status, WqStatus::NullArgument);

    let c_text = CString::new(VALID_QUERY).unwrap();
    let status = unsafe {
        wq_query_parse(c_text.as_ptr(), WqFormat::Json5, ptr::null_mut(), ptr::null_mut())
    };
    assert_eq!(status, WqStatus::NullArgument);

    let status = unsafe { wq_query_validate(ptr::null(), ptr::null_mut()) };
    assert_eq!(status, WqStatus::NullArgument);
}

#[test]
fn invalid_utf8_is_reported() {
    let bytes: &[u8] = b"{\xff\xfe}\0";
    let mut query: *mut WqQuery = ptr::null_mut();
    let status = unsafe {
        wq_query_parse(
            bytes.as_ptr() as *const c_char,
            WqFormat::Json5,
            &mut query,
            ptr::null_mut(),
        )
    };
    assert_eq!(status, WqStatus::Utf8Error);
}

#[test]
fn validate_reports_violations_as_json() {
    let query = parse(
        r#"{"@url": "https://x.example", "@steps": [{"@xpath": "//a"}]}"#,
        WqFormat::Json5,
    )
    .unwrap();
    let mut out: *mut c_char = ptr::null_mut();
    let status = unsafe { wq_query_validate(query, &mut out) };
    assert_eq!(status, WqStatus::Ok);
    let json = take_string(out);
    let parsed: serde_json::Value = serde_json::from_str(&json).unwrap();
    let violations = parsed.as_array().unwrap();
    assert_eq!(violations.len(), 1);
    assert_eq!(violations[0]["path"], "steps[0]");
    unsafe { wq_query_free(query) };
}

#[test]
fn output_shape_json_structure() {
    let query = parse(VALID_QUERY, WqFormat::Json5).unwrap();
    let mut out: *mut c_char = ptr::null_mut();
    let status = unsafe { wq_query_output_shape(query, &mut out) };
    assert_eq!(status, WqStatus::Ok);
    let shape: serde_json::Value = serde_json::from_str(&take_string(out)).unwrap();
    assert_eq!(shape["kind"], "array");
    assert_eq!(shape["element"]["kind"], "object");
    assert_eq!(shape["element"]["keys"][0]["name"], "x");
    assert_eq!(shape["element"]["keys"][0]["shape"]["kind"], "scalar");
    unsafe { wq_query_free(query) };
}

#[test]
fn to_json5_round_trips_through_parse() {
    let query = parse(VALID_QUERY, WqFormat::Json5).unwrap();
    let mut out: *mut c_char = ptr::null_mut();
    assert_eq!(unsafe { wq_query_to_json5(query, &mut out) }, WqStatus::Ok);
    let rendered = take_string(out);
    let again = parse(&rendered, WqFormat::Json5).unwrap();
    unsafe { wq_query_free(again) };
    unsafe { wq_query_free(query) };
}

#[test]
fn execute_runs_against_a_local_fixture() {
    let dir = tempfile::tempdir().unwrap();
    std::fs::write(
        dir.path().join("rows.html"),
        "<div class=\"row\"><a href=\"/one\">1</a></div><div class=\"row\"><a href=\"/two\">2</a></div>",
    )
    .unwrap();
    let site = webquery::backend::FixtureSite::new(dir.path()).route("/rows.html", "rows.html");
    let server = webquery::backend::serve_fixture(&site).unwrap();

    let text = format!(
        r#"{{"@url": "{}/rows.html", "@steps": [{{"@xpath": "//div[contains(@class, 'row')]", "@fields": {{"x": "./a/@href"}}}}]}}"#,
        server.base_url().as_str().trim_end_matches('/')
    );
    let query = parse(&text, WqFormat::Json5).unwrap();

    let mut records: *mut c_char = ptr::null_mut();
    let mut error: *mut c_char = ptr::null_mut();
    let status = unsafe { wq_execute(query, ptr::null(), &mut records, &mut error) };
    assert_eq!(status, WqStatus::Ok, "error: {:?}", unsafe {
        error.as_ref().map(|_| take_string(error))
    });
    let json = take_string(records);
    let parsed: serde_json::Value = serde_json::from_str(&json).unwrap();
    assert_eq!(parsed.as_array().unwrap().len(), 2);
    assert_eq!(parsed[0]["x"], "/one");
    assert_eq!(parsed[1]["x"], "/two");
    unsafe { wq_query_free(query) };
}

#[test]
fn execute_navigation_failure_reports_status_and_error() {
    let text = r#"{"@url": "http://127.0.0.1:1/x", "@steps": [{"@xpath": "//a", "@fields": {"x": "./@href"}}]}"#;
    let query = parse(text, WqFormat::Json5).unwrap();
    let mut options = wq_exec_options_default();
    options.timeout_secs = 2;

    let mut records: *mut c_char = ptr::null_mut();
    let mut error: *mut c_char = ptr::null_mut();
    let status = unsafe { wq_execute(query, &options, &mut records, &mut error) };
    assert_eq!(status, WqStatus::NavigationError);
    assert!(records.is_null());
    let message = take_string(error);
    assert!(message.contains("root navigation"), "{}", message);
    unsafe { wq_query_free(query) };
}

#[test]
fn generated_header_covers_the_surface() {
    let header_path = std::path::Path::new(env!("CARGO_MANIFEST_DIR")).join("include/webquery.h");
    let header = std::fs::read_to_string(&header_path).expect("header generated at build time");
    for symbol in [
        "WEBQUERY_H",
        "typedef struct WqQuery WqQuery;",
        "WqStatus",
        "WQ_STATUS_OK",
        "WQ_FORMAT_AUTO",
        "wq_query_parse",
        "wq_query_validate",
        "wq_query_output_shape",
        "wq_execute",
        "wq_query_free",
        "wq_string_free",
        "wq_exec_options_default",
        "wq_version",
    ] {
        assert!(header.contains(symbol), "header is missing `{}`", symbol);
    }
}
