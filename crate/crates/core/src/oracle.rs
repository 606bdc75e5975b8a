//! Ground truth from classical graph theory: non-backtracking walks on the
//! realized graph and the rank of its fundamental group.
//!
//! Nothing here touches the word or stage machinery; walks are plain vertex
//! and edge-id sequences found by brute-force search.

use serde::Serialize;
use thiserror::Error;

use crate::span::{component_of, FiniteSpan, RealizedGraph, Vertex};
use crate::words::{self, Dir};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum OracleError {
    #[error("vertex {0} is not in the graph")]
    UnknownVertex(usize),
}

/// A walk in the realized graph: `vertices.len() == edges.len() + 1`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Walk {
    pub vertices: Vec<usize>,
    pub edges: Vec<usize>,
}

impl Walk {
    pub fn len(&self) -> usize {
        self.edges.len()
    }

    pub fn is_empty(&self) -> bool {
        self.edges.is_empty()
    }
}

/// Every walk `from -> to` of length `<= max_len` that never uses the same
/// edge twice in a row, ordered by length then edge ids.
pub fn nbt_walks(
    graph: &RealizedGraph,
    from: usize,
    to: usize,
    max_len: usize,
) -> Result<Vec<Walk>, OracleError> {
    let n = graph.vertex_count();
    for v in [from, to] {
        if v >= n {
            return Err(OracleError::UnknownVertex(v));
        }
    }
    let mut adjacency: Vec<Vec<(usize, usize)>> = vec![Vec::new(); n];
    for (k, &(x, y)) in graph.edges.iter().enumerate() {
        adjacency[x].push((k, y));
        adjacency[y].push((k, x));
    }
    for list in &mut adjacency {
        list.sort();
    }

    let mut found = Vec::new();
    let mut stack = vec![Walk {
        vertices: vec![from],
        edges: Vec::new(),
    }];
    while let Some(walk) = stack.pop() {
        let here = *walk.vertices.last().expect("walks start somewhere");
        if here == to {
            found.push(walk.clone());
        }
        if walk.len() == max_len {
            continue;
        }
        for &(k, next) in adjacency[here].iter().rev() {
            if walk.edges.last() == Some(&k) {
                continue;
            }
            let mut longer = walk.clone();
            longer.edges.push(k);
            longer.vertices.push(next);
            stack.push(longer);
        }
    }
    found.sort_by(|x, y| x.len().cmp(&y.len()).then_with(|| x.edges.cmp(&y.edges)));
    Ok(found)
}

/// Rank of the free fundamental group of the component of `base`: the
/// number of component edges left out of a spanning tree.
pub fn pi1_rank(graph: &RealizedGraph, base: usize) -> usize {
    let component = component_of(graph, base);
    let edges_in_component = graph
        .edges
        .iter()
        .filter(|(x, _)| component.contains(*x))
        .count();
    edges_in_component - component.tree.len()
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CompareReport {
    pub words: usize,
    pub walks: usize,
    pub mismatch: Option<String>,
}

impl CompareReport {
    pub fn is_ok(&self) -> bool {
        self.mismatch.is_none()
    }
}

/// Matches the enumerated reduced words to `endpoint` against the
/// non-backtracking walks from `a0`, position by position: same count, same
/// edge at each step, and `Fwd` exactly when the walk moves from A to B.
pub fn compare_words_walks(span: &FiniteSpan, endpoint: Vertex, max_len: usize) -> CompareReport {
    let graph = span.realize();
    let from = graph
        .id_of(Vertex::A(span.basepoint()))
        .expect("basepoint is a vertex");
    let to = graph.id_of(endpoint).expect("endpoint is a vertex");
    let walks = nbt_walks(&graph, from, to, max_len).expect("ids come from the graph");
    let words = words::enumerate(span, endpoint, max_len);
    let mut report = CompareReport {
        words: words.len(),
        walks: walks.len(),
        mismatch: None,
    };
    if words.len() != walks.len() {
        report.mismatch = Some(format!("{} words but {} walks", words.len(), walks.len()));
        return report;
    }
    for (i, (word, walk)) in words.iter().zip(&walks).enumerate() {
        if word.len() != walk.len() {
            report.mismatch = Some(format!("item {i}: length {} vs {}", word.len(), walk.len()));
            return report;
        }
        for (j, step) in word.steps().iter().enumerate() {
            let leaves_a = graph.vertices[walk.vertices[j]].is_a();
            let same_dir = (step.dir == Dir::Fwd) == leaves_a;
            if step.edge.index() != walk.edges[j] || !same_dir {
                report.mismatch = Some(format!("item {i}: step {j} differs"));
                return report;
            }
        }
    }
    report
}
