//! Query-model contract tests: the canonical catalog and childcare queries
//! parse to frozen model values, JSON5 and YAML renderings are
//! model-equivalent, and serialization round-trips.

mod common;

use proptest::prelude::*;
use webquery::query::{
    output_shape, parse_query, to_json5, to_yaml, validate, Query, QueryFormat, ShapeDescriptor,
    Step,
};

const CATALOG_JSON5: &str = r#"{
  "@url": "https://boards.4chan.org/pol/catalog",
  "@steps": [
    {
      "@xpath": "//div[contains(@class, 'thread')]",  // Selecting each thread
      "@fields": {
        "title": ".//div[contains(@class, 'teaser')]/text()",  // Extracting thread title
        "link": "./a/@href",  // Link to the thread
        "number_of_posts": ".//div[contains(@class, 'meta')]/text()"  // Number of posts
      }
    }
  ]
}"#;

const CATALOG_YAML: &str = r#""@url": "https://boards.4chan.org/pol/catalog"
"@steps":
  - "@xpath": "//div[contains(@class, 'thread')]"  # Selecting each thread
    "@fields":
      title: ".//div[contains(@class, 'teaser')]/text()"  # Extracting thread title
      link: "./a/@href"  # Link to the thread
      number_of_posts: ".//div[contains(@class, 'meta')]/text()"  # Number of posts
"#;

fn catalog_model() -> Query {
    Query {
        url: "https://boards.4chan.org/pol/catalog".to_owned(),
        steps: vec![Step {
            xpath: "//div[contains(@class, 'thread')]".to_owned(),
            name: None,
            fields: Some(vec![
                ("title".to_owned(), ".//div[contains(@class, 'teaser')]/text()".to_owned()),
                ("link".to_owned(), "./a/@href".to_owned()),
                (
                    "number_of_posts".to_owned(),
                    ".//div[contains(@class, 'meta')]/text()".to_owned(),
                ),
            ]),
            follow: None,
            pagination: None,
        }],
    }
}

#[test]
fn catalog_json5_parses_to_frozen_model() {
    let query = parse_query(CATALOG_JSON5, QueryFormat::Json5).unwrap();
    assert_eq!(query, catalog_model());
    assert!(validate(&query).is_empty());
}

#[test]
fn catalog_yaml_equals_json5_model() {
    let from_yaml = parse_query(CATALOG_YAML, QueryFormat::Yaml).unwrap();
    let from_json5 = parse_query(CATALOG_JSON5, QueryFormat::Json5).unwrap();
    assert_eq!(from_yaml, from_json5);
}

#[test]
fn comments_never_affect_model_equality() {
    let no_comments: String = CATALOG_JSON5
        .lines()
        .map(|l| l.split("  //").next().unwrap_or(l))
        .collect::<Vec<_>>()
        .join("\n");
    assert_eq!(
        parse_query(&no_comments, QueryFormat::Json5).unwrap(),
        parse_query(CATALOG_JSON5, QueryFormat::Json5).unwrap(),
    );
}

#[test]
fn childcare_query_structure_is_frozen() {
    let text = common::fixture_text("childcare-query.json5").replace("{BASE}", "https://care.example");
    let query = parse_query(&text, QueryFormat::Json5).unwrap();
    assert!(validate(&query).is_empty());

    assert_eq!(query.steps.len(), 1);
    let step = &query.steps[0];
    assert_eq!(step.xpath, "//div[contains(@class, 'search-result')]");
    let field_names: Vec<&str> = step
        .fields
        .as_ref()
        .unwrap()
        .iter()
        .map(|(k, _)| k.as_str())
        .collect();
    // The "distance" line is commented out, so three fields survive.
    assert_eq!(field_names, ["full_name", "ratings", "image_url"]);

    let follow = step.follow.as_ref().unwrap();
    assert_eq!(follow.xpath, ".//div[contains(@class, 'profile-image')]//a[1]/@href");
    let names: Vec<Option<&str>> = follow.steps.iter().map(|s| s.name.as_deref()).collect();
    assert_eq!(names, [Some("profile"), Some("reviews")]);
}

#[test]
fn childcare_output_shape_matches_expected_structure() {
    let text = common::fixture_text("childcare-query.json5").replace("{BASE}", "https://care.example");
    let query = parse_query(&text, QueryFormat::Json5).unwrap();
    let shape = output_shape(&query).unwrap();

    let ShapeDescriptor::Array(element) = &shape else { panic!("top level must be an array") };
    let ShapeDescriptor::Object(entries) = element.as_ref() else { panic!("elements are objects") };
    let keys: Vec<&str> = entries.iter().map(|(k, _)| k.as_str()).collect();
    assert_eq!(keys, ["full_name", "ratings", "image_url", "profile", "reviews"]);

    let profile = &entries[3].1;
    let ShapeDescriptor::Array(profile_obj) = profile else { panic!("profile is an array") };
    assert_eq!(
        profile_obj.keys(),
        vec!["bio", "experience"],
        "profile nests its step fields"
    );
    let reviews = &entries[4].1;
    let ShapeDescriptor::Array(reviews_obj) = reviews else { panic!("reviews is an array") };
    assert_eq!(
        reviews_obj.keys(),
        vec!["reviewer", "reviewer_profile", "rating", "comment"]
    );
}

#[test]
fn catalog_output_shape() {
    let query = parse_query(CATALOG_JSON5, QueryFormat::Json5).unwrap();
    let shape = output_shape(&query).unwrap();
    let ShapeDescriptor::Array(element) = &shape else { panic!() };
    assert_eq!(element.keys(), vec!["title", "link", "number_of_posts"]);
}

// --- property tests ---------------------------------------------------------

use common::queries::arb_query;

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    /// Rendering any query to JSON5 and to YAML and reparsing yields the
    /// same model from both formats.
    #[test]
    fn format_equivalence(query in arb_query()) {
        let json5_text = to_json5(&query);
        let yaml_text = to_yaml(&query);
        let from_json5 = parse_query(&json5_text, QueryFormat::Json5).unwrap();
        let from_yaml = parse_query(&yaml_text, QueryFormat::Yaml).unwrap();
        prop_assert_eq!(&from_json5, &from_yaml);
        prop_assert_eq!(&from_json5, &query);
    }

    /// serialize(parse(t)) reparses to the same model.
    #[test]
    fn round_trip(query in arb_query()) {
        let text = to_json5(&query);
        let parsed = parse_query(&text, QueryFormat::Json5).unwrap();
        let reparsed = parse_query(&to_json5(&parsed), QueryFormat::Json5).unwrap();
        prop_assert_eq!(parsed, reparsed);
    }
}
