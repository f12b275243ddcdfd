//! Seed-deterministic fixture sites for the three benchmark workload tiers.
//!
//! - simple: one page, a handful of scalar fields per record, small output
//! - medium: one page, more than five fields plus nested records via a
//!   same-page follow
//! - high: a next-link page chain walked by pagination, with per-record
//!   detail pages contributing nested objects

use std::io;
use std::path::Path;

use url::Url;

use super::FixtureSite;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum BenchmarkTier {
    Simple,
    Medium,
    High,
}

impl BenchmarkTier {
    pub const ALL: [BenchmarkTier; 3] = [
        BenchmarkTier::Simple,
        BenchmarkTier::Medium,
        BenchmarkTier::High,
    ];

    pub fn name(self) -> &'static str {
        match self {
            BenchmarkTier::Simple => "simple",
            BenchmarkTier::Medium => "medium",
            BenchmarkTier::High => "high",
        }
    }
}

impl std::str::FromStr for BenchmarkTier {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        match s.trim().to_ascii_lowercase().as_str() {
            "simple" => Ok(BenchmarkTier::Simple),
            "medium" => Ok(BenchmarkTier::Medium),
            "high" => Ok(BenchmarkTier::High),
            other => Err(format!("unknown tier `{}` (expected simple, medium, high)", other)),
        }
    }
}

impl std::fmt::Display for BenchmarkTier {
    fn fmt(&self, f: &mut std::fmt::Formatter) -> std::fmt::Result {
        f.write_str(self.name())
    }
}

/// SplitMix64: tiny, stable across platforms and releases, which keeps
/// generated sites byte-identical for a given seed forever.
struct Rng(u64);

impl Rng {
    fn next(&mut self) -> u64 {
        self.0 = self.0.wrapping_add(0x9e37_79b9_7f4a_7c15);
        let mut z = self.0;
        z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
        z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
        z ^ (z >> 31)
    }

    fn below(&mut self, n: usize) -> usize {
        (self.next() % n as u64) as usize
    }

    fn word(&mut self) -> &'static str {
        WORDS[self.below(WORDS.len())]
    }

    fn words(&mut self, n: usize) -> String {
        (0..n).map(|_| self.word()).collect::<Vec<_>>().join(" ")
    }
}

const WORDS: &[&str] = &[
    "amber", "basalt", "cedar", "delta", "ember", "fjord", "garnet", "harbor", "indigo",
    "juniper", "kestrel", "lagoon", "marble", "nectar", "onyx", "prairie", "quartz", "russet",
    "saffron", "thistle", "umber", "violet", "walnut", "xenon", "yarrow", "zephyr", "archway",
    "bramble", "cascade", "drift", "estuary", "flint", "grove", "heath", "inlet", "knoll",
    "meadow", "notch", "orchard", "pillar", "quarry", "ridge", "summit", "terrace", "upland",
    "vale", "willow", "yonder",
];

/// Generates the fixture site for a tier into `root` and returns the site
/// with its route table. Same tier + seed always produces identical bytes.
pub fn generate_benchmark_site(
    tier: BenchmarkTier,
    seed: u64,
    root: &Path,
) -> io::Result<FixtureSite> {
    std::fs::create_dir_all(root)?;
    let mut rng = Rng(seed ^ tier_salt(tier));
    let mut site = FixtureSite::new(root);
    match tier {
        BenchmarkTier::Simple => {
            let page = simple_page(&mut rng);
            std::fs::write(root.join("page1.html"), page)?;
            site = site.route("/page1.html", "page1.html");
        }
        BenchmarkTier::Medium => {
            let page = medium_page(&mut rng);
            std::fs::write(root.join("page1.html"), page)?;
            site = site.route("/page1.html", "page1.html");
        }
        BenchmarkTier::High => {
            let pages = 8usize;
            let per_page = 18usize;
            for page_no in 1..=pages {
                let listing = high_listing_page(&mut rng, page_no, pages, per_page);
                let name = format!("list{}.html", page_no);
                std::fs::write(root.join(&name), listing)?;
                site = site.route(&format!("/{}", name), &name);
            }
            for detail_no in 1..=(pages * per_page) {
                let detail = high_detail_page(&mut rng, detail_no);
                let name = format!("detail{}.html", detail_no);
                std::fs::write(root.join(&name), detail)?;
                site = site.route(&format!("/{}", name), &name);
            }
        }
    }
    Ok(site)
}

fn tier_salt(tier: BenchmarkTier) -> u64 {
    match tier {
        BenchmarkTier::Simple => 0x51,
        BenchmarkTier::Medium => 0x4d,
        BenchmarkTier::High => 0x48,
    }
}

/// The canonical query for a tier, pointed at `base_url`.
pub fn tier_query_json5(tier: BenchmarkTier, base_url: &Url) -> String {
    let base = base_url.as_str().trim_end_matches('/');
    match tier {
        BenchmarkTier::Simple => format!(
            r#"{{
  "@url": "{base}/page1.html",
  "@steps": [{{
    "@xpath": "//div[contains(@class, 'item')]",
    "@fields": {{
      "name": ".//h3/text()",
      "link": "./a[1]/@href",
      "blurb": ".//p[contains(@class, 'blurb')]/text()",
      "count": ".//span[contains(@class, 'count')]/text()"
    }}
  }}]
}}
"#
        ),
        BenchmarkTier::Medium => format!(
            r#"{{
  "@url": "{base}/page1.html",
  "@steps": [{{
    "@xpath": "//div[contains(@class, 'entry')]",
    "@fields": {{
      "name": ".//h3/text()",
      "link": "./a[1]/@href",
      "summary": ".//p[contains(@class, 'summary')]/normalize-space()",
      "price": ".//span[contains(@class, 'price')]/text()",
      "rating": ".//span[contains(@class, 'rating')]/text()",
      "tags": ".//span[contains(@class, 'tag')]/text()"
    }},
    "@follow": {{
      "@xpath": "./a[contains(@class, 'more')]/@href",
      "@steps": [{{
        "@xpath": "//div[contains(@class, 'spec')]",
        "@name": "specs",
        "@fields": {{
          "key": ".//span[1]/text()",
          "value": ".//span[2]/text()",
          "note": ".//p[1]/normalize-space()"
        }}
      }}]
    }}
  }}]
}}
"#
        ),
        BenchmarkTier::High => format!(
            r#"{{
  "@url": "{base}/list1.html",
  "@steps": [{{
    "@xpath": "//div[contains(@class, 'prod')]",
    "@fields": {{
      "name": ".//h3/text()",
      "sku": ".//span[contains(@class, 'sku')]/text()",
      "price": ".//span[contains(@class, 'price')]/text()"
    }},
    "@follow": {{
      "@xpath": "./a[contains(@class, 'detail')]/@href",
      "@steps": [
        {{
          "@xpath": "//div[contains(@class, 'profile')]",
          "@name": "profile",
          "@fields": {{
            "maker": ".//span[contains(@class, 'maker')]/text()",
            "origin": ".//span[contains(@class, 'origin')]/text()",
            "blurb": ".//p[1]/normalize-space()"
          }}
        }},
        {{
          "@xpath": "//div[@id='reviews']//div[contains(@class, 'review')]",
          "@name": "reviews",
          "@fields": {{
            "reviewer": ".//span[contains(@class, 'who')]/text()",
            "stars": ".//span[contains(@class, 'stars')]/text()",
            "comment": ".//p[1]/normalize-space()"
          }}
        }}
      ]
    }},
    "@pagination": {{"@xpath": "//a[contains(@class, 'next')]/@href", "@limit": 100}}
  }}]
}}
"#
        ),
    }
}

fn page_shell(title: &str, body: &str) -> String {
    format!(
        "<!DOCTYPE html>\n<html>\n<head><meta charset=\"utf-8\"><title>{}</title></head>\n<body>\n{}</body>\n</html>\n",
        title, body
    )
}

fn simple_page(rng: &mut Rng) -> String {
    let mut body = String::new();
    for i in 1..=40 {
        body.push_str(&format!(
            "<div class=\"item\">\
<h3>{name}</h3>\
<a href=\"/item/{i}\">view</a>\
<p class=\"blurb\">{blurb}</p>\
<span class=\"count\">{count}</span>\
</div>\n",
            name = rng.words(2),
            i = i,
            blurb = rng.words(10),
            count = rng.below(500),
        ));
    }
    page_shell("simple listing", &body)
}

fn medium_page(rng: &mut Rng) -> String {
    let mut body = String::new();
    for i in 1..=20 {
        let tags: String = (0..3)
            .map(|_| format!("<span class=\"tag\">{}</span>", rng.word()))
            .collect();
        body.push_str(&format!(
            "<div class=\"entry\">\
<h3>{name}</h3>\
<a href=\"/entry/{i}\">open</a>\
<p class=\"summary\"> {summary} </p>\
<span class=\"price\">{price}.00</span>\
<span class=\"rating\">{rating}/5</span>\
{tags}\
<a class=\"more\" href=\"/page1.html\">more</a>\
</div>\n",
            name = rng.words(2),
            i = i,
            summary = rng.words(20),
            price = rng.below(900) + 10,
            rating = rng.below(5) + 1,
            tags = tags,
        ));
    }
    body.push_str("<section id=\"specs\">\n");
    for _ in 0..15 {
        body.push_str(&format!(
            "<div class=\"spec\"><span>{key}</span><span>{value}</span><p> {note} </p></div>\n",
            key = rng.word(),
            value = rng.words(2),
            note = rng.words(10),
        ));
    }
    body.push_str("</section>\n");
    page_shell("medium listing", &body)
}

fn high_listing_page(rng: &mut Rng, page_no: usize, pages: usize, per_page: usize) -> String {
    let mut body = String::new();
    for slot in 1..=per_page {
        let detail_no = (page_no - 1) * per_page + slot;
        body.push_str(&format!(
            "<div class=\"prod\">\
<h3>{name}</h3>\
<span class=\"sku\">SKU-{detail_no}</span>\
<span class=\"price\">{price}.00</span>\
<a class=\"detail\" href=\"/detail{detail_no}.html\">details</a>\
</div>\n",
            name = rng.words(2),
            detail_no = detail_no,
            price = rng.below(900) + 50,
        ));
    }
    if page_no < pages {
        body.push_str(&format!(
            "<a class=\"next\" href=\"/list{}.html\">next page</a>\n",
            page_no + 1
        ));
    }
    page_shell(&format!("listing {}", page_no), &body)
}

fn high_detail_page(rng: &mut Rng, detail_no: usize) -> String {
    let mut body = String::new();
    body.push_str(&format!(
        "<div class=\"profile\">\
<span class=\"maker\">{maker}</span>\
<span class=\"origin\">{origin}</span>\
<p> {blurb} </p>\
</div>\n",
        maker = rng.words(2),
        origin = rng.word(),
        blurb = rng.words(30),
    ));
    body.push_str("<div id=\"reviews\">\n");
    for _ in 0..5 {
        body.push_str(&format!(
            "<div class=\"review\">\
<span class=\"who\">{who}</span>\
<span class=\"stars\">{stars} stars</span>\
<p> {comment} </p>\
</div>\n",
            who = rng.words(2),
            stars = rng.below(5) + 1,
            comment = rng.words(18),
        ));
    }
    body.push_str("</div>\n");
    page_shell(&format!("detail {}", detail_no), &body)
}
