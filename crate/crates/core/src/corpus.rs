//! The fixed span corpus used by tests, benches and `check`.

use crate::span::FiniteSpan;

pub const CIRCLE: &str = include_str!("../corpus/circle.span");
pub const INTERVAL: &str = include_str!("../corpus/interval.span");
pub const THETA: &str = include_str!("../corpus/theta.span");
pub const TREE4: &str = include_str!("../corpus/tree4.span");
pub const COPRODUCT: &str = include_str!("../corpus/coproduct.span");

/// `(name, span)` for every corpus entry.
pub fn all() -> Vec<(&'static str, FiniteSpan)> {
    [
        ("circle", CIRCLE),
        ("interval", INTERVAL),
        ("theta", THETA),
        ("tree4", TREE4),
        ("coproduct", COPRODUCT),
    ]
    .into_iter()
    .map(|(name, text)| (name, FiniteSpan::parse(text).expect("corpus spans parse")))
    .collect()
}

pub fn get(name: &str) -> Option<FiniteSpan> {
    all().into_iter().find(|(n, _)| *n == name).map(|(_, s)| s)
}
