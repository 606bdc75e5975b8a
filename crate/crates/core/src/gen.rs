//! Seeded random spans and random (unreduced) words for randomized suites.

use rand::Rng;

use crate::span::{FiniteSpan, SpanEdge, Vertex};
use crate::words::{self, Step, ZigzagWord};

/// Size limits for random spans.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SpanShape {
    pub max_a: usize,
    pub max_b: usize,
    pub max_edges: usize,
}

impl Default for SpanShape {
    fn default() -> Self {
        Self {
            max_a: 5,
            max_b: 5,
            max_edges: 8,
        }
    }
}

/// A uniformly shaped random span: `1..=max_a` A-vertices, `1..=max_b`
/// B-vertices, `0..=max_edges` edges with uniform endpoints, uniform basepoint.
pub fn random_span(rng: &mut impl Rng, shape: SpanShape) -> FiniteSpan {
    let a = rng.gen_range(1..=shape.max_a);
    let b = rng.gen_range(1..=shape.max_b);
    let s = rng.gen_range(0..=shape.max_edges);
    let edges = (0..s)
        .map(|k| SpanEdge {
            label: format!("s{k}"),
            left: rng.gen_range(0..a),
            right: rng.gen_range(0..b),
        })
        .collect();
    FiniteSpan::new(
        (0..a).map(|i| format!("a{i}")).collect(),
        (0..b).map(|j| format!("b{j}")).collect(),
        edges,
        rng.gen_range(0..a),
    )
    .expect("generated labels are distinct")
}

/// Draws random spans until one has at most `budget` reduced words of
/// length `<= max_len` from its basepoint. Dense spans on one or two vertices
/// grow like `(d - 1)^L` and are resampled.
pub fn random_span_within(
    rng: &mut impl Rng,
    shape: SpanShape,
    max_len: usize,
    budget: u64,
) -> FiniteSpan {
    loop {
        let span = random_span(rng, shape);
        if based_walk_count(&span, max_len) <= budget {
            return span;
        }
    }
}

/// Number of non-backtracking walks of length `<= max_len` from `a0`,
/// counted by dynamic programming over `(vertex, last edge)`.
pub fn based_walk_count(span: &FiniteSpan, max_len: usize) -> u64 {
    let m = span.edge_count();
    // arrivals[k]: walks whose last step used edge k, ending on its far side
    let mut into_b = vec![0u64; m];
    let mut into_a = vec![0u64; m];
    for &s in span.edges_out_of_a(span.basepoint()) {
        into_b[s.0] = 1;
    }
    let mut total = 1u64;
    for len in 1..=max_len {
        let (arrived, next_side_is_a) = if len % 2 == 1 {
            (&into_b, true)
        } else {
            (&into_a, false)
        };
        let level: u64 = arrived.iter().sum();
        total = total.saturating_add(level);
        let mut next = vec![0u64; m];
        for (k, &count) in arrived.iter().enumerate() {
            if count == 0 {
                continue;
            }
            let e = span.edge(crate::span::EdgeId(k));
            let continuations = if next_side_is_a {
                span.edges_into_b(e.right)
            } else {
                span.edges_out_of_a(e.left)
            };
            for &t in continuations {
                if t.0 != k {
                    next[t.0] = next[t.0].saturating_add(count);
                }
            }
        }
        if next_side_is_a {
            into_a = next;
        } else {
            into_b = next;
        }
    }
    total
}

/// A random alternating word of length `len` from `a0`, allowed to
/// backtrack. Stops early at a vertex with no edges.
pub fn random_word(span: &FiniteSpan, rng: &mut impl Rng, len: usize) -> ZigzagWord {
    let mut steps = Vec::with_capacity(len);
    let mut word = ZigzagWord::refl();
    for _ in 0..len {
        let options: Vec<Step> = match words::endpoint(span, &word) {
            Vertex::A(a) => span
                .edges_out_of_a(a)
                .iter()
                .map(|&s| Step::fwd(s))
                .collect(),
            Vertex::B(b) => span.edges_into_b(b).iter().map(|&s| Step::bwd(s)).collect(),
        };
        if options.is_empty() {
            break;
        }
        steps.push(options[rng.gen_range(0..options.len())]);
        word = ZigzagWord::from_steps_unchecked(steps.clone());
    }
    word
}
