//! Property-test strategies for generating valid query models.

use proptest::prelude::*;
use webquery::query::{FollowSpec, PaginationSpec, Query, Step};

pub fn arb_identifier() -> impl Strategy<Value = String> {
    "[a-z][a-z0-9_]{0,7}"
}

pub fn arb_xpath() -> impl Strategy<Value = String> {
    prop::sample::select(
        super::EXPRESSION_CORPUS
            .iter()
            .map(|s| s.to_string())
            .collect::<Vec<_>>(),
    )
}

pub fn arb_fields() -> impl Strategy<Value = Vec<(String, String)>> {
    prop::collection::btree_map(arb_identifier(), arb_xpath(), 1..4)
        .prop_map(|m| m.into_iter().collect())
}

pub fn arb_step(allow_follow: bool) -> BoxedStrategy<Step> {
    let base = (
        arb_xpath(),
        prop::option::of(arb_identifier()),
        arb_fields(),
        prop::option::of((arb_xpath(), 1i64..50)),
    );
    if allow_follow {
        (base, prop::option::of((arb_xpath(), prop::collection::vec(arb_step(false), 1..3))))
            .prop_map(|((xpath, name, fields, pagination), follow)| Step {
                xpath,
                name,
                fields: Some(fields),
                follow: follow.map(|(fx, steps)| FollowSpec {
                    xpath: fx,
                    steps: dedup_names(steps),
                }),
                pagination: pagination.map(|(px, limit)| PaginationSpec { xpath: px, limit }),
            })
            .boxed()
    } else {
        base.prop_map(|(xpath, name, fields, pagination)| Step {
            xpath,
            name,
            fields: Some(fields),
            follow: None,
            pagination: pagination.map(|(px, limit)| PaginationSpec { xpath: px, limit }),
        })
        .boxed()
    }
}

pub fn dedup_names(mut steps: Vec<Step>) -> Vec<Step> {
    let mut seen = std::collections::HashSet::new();
    for (i, step) in steps.iter_mut().enumerate() {
        if let Some(name) = &step.name {
            let mut candidate = name.clone();
            while !seen.insert(candidate.clone()) {
                candidate = format!("{}_{}", candidate, i);
            }
            step.name = Some(candidate);
        }
    }
    steps
}

pub fn arb_query() -> impl Strategy<Value = Query> {
    (
        prop::sample::select(vec![
            "https://boards.example.org/pol/catalog".to_owned(),
            "http://fixture.test/search?page=1".to_owned(),
            "https://care.example/search/Babysitters/DA12+1AB".to_owned(),
        ]),
        prop::collection::vec(arb_step(true), 1..3),
    )
        .prop_map(|(url, steps)| Query {
            url,
            steps: dedup_names(steps),
        })
}
