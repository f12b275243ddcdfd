//! Helpers shared by the integration suites.
#![allow(dead_code)]

pub mod queries;
pub mod webdriver;
pub mod xpath_oracle;

use std::path::{Path, PathBuf};

use webquery::backend::{serve_fixture, FixtureServer, FixtureSite};

pub fn fixtures_dir() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/fixtures")
}

pub fn fixture_text(name: &str) -> String {
    let path = fixtures_dir().join(name);
    std::fs::read_to_string(&path).unwrap_or_else(|e| panic!("read {}: {}", path.display(), e))
}

pub fn fixture_bytes(name: &str) -> Vec<u8> {
    let path = fixtures_dir().join(name);
    std::fs::read(&path).unwrap_or_else(|e| panic!("read {}: {}", path.display(), e))
}

/// Serves the named fixture files on an ephemeral port, each at `/<name>`.
pub fn serve_fixture_files(names: &[&str]) -> FixtureServer {
    let mut site = FixtureSite::new(fixtures_dir());
    for name in names {
        site = site.route(&format!("/{}", name), name);
    }
    serve_fixture(&site).expect("fixture server starts")
}

/// Loads a query fixture and points it at the served base URL.
pub fn query_with_base(name: &str, base: &url::Url) -> String {
    fixture_text(name).replace("{BASE}", base.as_str().trim_end_matches('/'))
}

/// All the element-selecting and value-extracting expressions the engine's
/// query surface exercises, drawn from the catalog and childcare queries.
pub const EXPRESSION_CORPUS: &[&str] = &[
    "//div[contains(@class, 'thread')]",
    ".//div[contains(@class, 'teaser')]/text()",
    "./a/@href",
    ".//div[contains(@class, 'meta')]/text()",
    "//div[contains(@class, 'search-result')]",
    ".//div[contains(@class, 'items-baseline')]/div[1]/span[1]/text()",
    ".//div[contains(@class, 'rating')]/span[1]/text()",
    ".//span[contains(@class, 'distance')]/span[2]/normalize-space()",
    ".//div[contains(@class, 'profile-image')]//img[1]/@src",
    ".//div[contains(@class, 'profile-image')]//a[1]/@href",
    "//div[contains(@class, 'profile featured')]",
    ".//h3[text()='About Me']/../p/normalize-space()",
    ".//h3[text()='My Experience']/../p/normalize-space()",
    "//div[@id='reviews']//div[contains(@class, 'review')]",
    ".//p[2]//a/text()",
    ".//p[2]//a/@href",
    ".//div[contains(@class, 'rating')]//img/@alt",
    ".//p[1]/normalize-space()",
    "//a[contains(@class, 'next')]/@href",
    "./a[1]",
    "//*[@id='reviews']",
    ".//span[1]/text()",
    "//div[contains(@class, 'rating') and contains(@class, 'top')]",
    ".//a/text()",
];

/// Container expressions whose matches serve as evaluation contexts for the
/// relative expressions above.
pub const CONTEXT_CORPUS: &[&str] = &[
    "//div[contains(@class, 'thread')]",
    "//div[contains(@class, 'search-result')]",
    "//div[contains(@class, 'profile featured')]",
    "//div[contains(@class, 'review')]",
    "//div",
];
