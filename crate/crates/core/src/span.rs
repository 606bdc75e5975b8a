//! Finite span diagrams `A <- S -> B` and their realized bipartite graphs.
//!
//! A span file is line oriented:
//!
//! ```text
//! # comment
//! A a0 a1
//! B b
//! S s a0 b
//! base a0
//! ```
//!
//! Declaration order is significant: it is the total order used for every
//! tie-break downstream (word order, stage cell order, BFS order).

use std::collections::{HashMap, VecDeque};
use std::fmt;

use serde::Serialize;
use thiserror::Error;

/// Index of an element of `S`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct EdgeId(pub usize);

impl EdgeId {
    pub fn index(self) -> usize {
        self.0
    }
}

/// A vertex of the realized graph, tagged by the leg it comes from.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub enum Vertex {
    A(usize),
    B(usize),
}

impl Vertex {
    pub fn is_a(self) -> bool {
        matches!(self, Vertex::A(_))
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SpanEdge {
    pub label: String,
    /// `f(s)`, index into A.
    pub left: usize,
    /// `g(s)`, index into B.
    pub right: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SpanError {
    #[error("duplicate label `{0}`")]
    DuplicateLabel(String),
    #[error("invalid label `{0}`")]
    InvalidLabel(String),
    #[error("edge `{label}` has an endpoint out of range")]
    EndpointOutOfRange { label: String },
    #[error("basepoint index {0} out of range")]
    BasepointOutOfRange(usize),
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ParseErrorKind {
    #[error("duplicate label `{0}`")]
    DuplicateLabel(String),
    #[error("unknown endpoint label `{0}`")]
    UnknownEndpoint(String),
    #[error("missing basepoint")]
    MissingBasepoint,
    #[error("basepoint not in A: `{0}`")]
    BasepointNotInA(String),
    #[error("basepoint declared twice")]
    DuplicateBasepoint,
    #[error("syntax error: {0}")]
    Syntax(String),
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("line {line}: {kind}")]
pub struct ParseError {
    pub line: usize,
    pub kind: ParseErrorKind,
}

impl ParseError {
    fn new(line: usize, kind: ParseErrorKind) -> Self {
        Self { line, kind }
    }
}

fn valid_label(label: &str) -> bool {
    !label.is_empty()
        && label
            .bytes()
            .all(|c| c.is_ascii_alphanumeric() || c == b'_')
}

/// A finite span diagram `A <-f- S -g-> B` with a basepoint `a0 : A`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FiniteSpan {
    a: Vec<String>,
    b: Vec<String>,
    edges: Vec<SpanEdge>,
    base: usize,
    into_b: Vec<Vec<EdgeId>>,
    out_of_a: Vec<Vec<EdgeId>>,
}

impl FiniteSpan {
    pub fn new(
        a: Vec<String>,
        b: Vec<String>,
        edges: Vec<SpanEdge>,
        base: usize,
    ) -> Result<Self, SpanError> {
        for sort in [&a, &b, &edges.iter().map(|e| e.label.clone()).collect()] {
            let mut seen = HashMap::new();
            for label in sort.iter() {
                if !valid_label(label) {
                    return Err(SpanError::InvalidLabel(label.clone()));
                }
                if seen.insert(label.as_str(), ()).is_some() {
                    return Err(SpanError::DuplicateLabel(label.clone()));
                }
            }
        }
        if let Some(e) = edges
            .iter()
            .find(|e| e.left >= a.len() || e.right >= b.len())
        {
            return Err(SpanError::EndpointOutOfRange {
                label: e.label.clone(),
            });
        }
        if base >= a.len() {
            return Err(SpanError::BasepointOutOfRange(base));
        }
        let mut into_b = vec![Vec::new(); b.len()];
        let mut out_of_a = vec![Vec::new(); a.len()];
        for (k, e) in edges.iter().enumerate() {
            into_b[e.right].push(EdgeId(k));
            out_of_a[e.left].push(EdgeId(k));
        }
        Ok(Self {
            a,
            b,
            edges,
            base,
            into_b,
            out_of_a,
        })
    }

    /// Parses the span-file format. Vertex and edge order follow the file.
    pub fn parse(text: &str) -> Result<Self, ParseError> {
        let mut a: Vec<(String, usize)> = Vec::new();
        let mut b: Vec<(String, usize)> = Vec::new();
        let mut raw_edges: Vec<(String, String, String, usize)> = Vec::new();
        let mut base: Option<(String, usize)> = None;
        let mut last_line = 0;

        for (idx, line) in text.lines().enumerate() {
            let lineno = idx + 1;
            last_line = lineno;
            let line = line.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let mut tokens = line.split_whitespace();
            let keyword = tokens.next().unwrap_or_default();
            let rest: Vec<&str> = tokens.collect();
            if let Some(bad) = rest.iter().find(|t| !valid_label(t)) {
                return Err(ParseError::new(
                    lineno,
                    ParseErrorKind::Syntax(format!("invalid label `{bad}`")),
                ));
            }
            match keyword {
                "A" | "B" => {
                    if rest.is_empty() {
                        return Err(ParseError::new(
                            lineno,
                            ParseErrorKind::Syntax(format!("`{keyword}` needs at least one label")),
                        ));
                    }
                    let target = if keyword == "A" { &mut a } else { &mut b };
                    for label in rest {
                        if target.iter().any(|(l, _)| l == label) {
                            return Err(ParseError::new(
                                lineno,
                                ParseErrorKind::DuplicateLabel(label.to_string()),
                            ));
                        }
                        target.push((label.to_string(), lineno));
                    }
                }
                "S" => {
                    let [label, left, right] = rest[..] else {
                        return Err(ParseError::new(
                            lineno,
                            ParseErrorKind::Syntax(
                                "expected `S <edge> <A-label> <B-label>`".to_string(),
                            ),
                        ));
                    };
                    if raw_edges.iter().any(|(l, ..)| l == label) {
                        return Err(ParseError::new(
                            lineno,
                            ParseErrorKind::DuplicateLabel(label.to_string()),
                        ));
                    }
                    raw_edges.push((label.into(), left.into(), right.into(), lineno));
                }
                "base" => {
                    let [label] = rest[..] else {
                        return Err(ParseError::new(
                            lineno,
                            ParseErrorKind::Syntax("expected `base <A-label>`".to_string()),
                        ));
                    };
                    if base.is_some() {
                        return Err(ParseError::new(lineno, ParseErrorKind::DuplicateBasepoint));
                    }
                    base = Some((label.to_string(), lineno));
                }
                other => {
                    return Err(ParseError::new(
                        lineno,
                        ParseErrorKind::Syntax(format!("unknown keyword `{other}`")),
                    ))
                }
            }
        }

        let a_index: HashMap<&str, usize> = a
            .iter()
            .enumerate()
            .map(|(i, (l, _))| (l.as_str(), i))
            .collect();
        let b_index: HashMap<&str, usize> = b
            .iter()
            .enumerate()
            .map(|(i, (l, _))| (l.as_str(), i))
            .collect();

        let mut edges = Vec::with_capacity(raw_edges.len());
        for (label, left, right, lineno) in &raw_edges {
            let left = *a_index.get(left.as_str()).ok_or_else(|| {
                ParseError::new(*lineno, ParseErrorKind::UnknownEndpoint(left.clone()))
            })?;
            let right = *b_index.get(right.as_str()).ok_or_else(|| {
                ParseError::new(*lineno, ParseErrorKind::UnknownEndpoint(right.clone()))
            })?;
            edges.push(SpanEdge {
                label: label.clone(),
                left,
                right,
            });
        }

        let (base_label, base_line) =
            base.ok_or_else(|| ParseError::new(last_line, ParseErrorKind::MissingBasepoint))?;
        let base = *a_index.get(base_label.as_str()).ok_or_else(|| {
            ParseError::new(
                base_line,
                ParseErrorKind::BasepointNotInA(base_label.clone()),
            )
        })?;

        let a = a.into_iter().map(|(l, _)| l).collect();
        let b = b.into_iter().map(|(l, _)| l).collect();
        // Every invariant checked by `new` was already enforced above.
        Ok(Self::new(a, b, edges, base).expect("validated during parse"))
    }

    pub fn a_len(&self) -> usize {
        self.a.len()
    }

    pub fn b_len(&self) -> usize {
        self.b.len()
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn edge_ids(&self) -> impl Iterator<Item = EdgeId> + '_ {
        (0..self.edges.len()).map(EdgeId)
    }

    pub fn a_labels(&self) -> &[String] {
        &self.a
    }

    pub fn b_labels(&self) -> &[String] {
        &self.b
    }

    pub fn edges(&self) -> &[SpanEdge] {
        &self.edges
    }

    pub fn edge(&self, s: EdgeId) -> &SpanEdge {
        &self.edges[s.0]
    }

    pub fn edge_label(&self, s: EdgeId) -> &str {
        &self.edges[s.0].label
    }

    /// `f(s)`.
    pub fn left(&self, s: EdgeId) -> usize {
        self.edges[s.0].left
    }

    /// `g(s)`.
    pub fn right(&self, s: EdgeId) -> usize {
        self.edges[s.0].right
    }

    pub fn basepoint(&self) -> usize {
        self.base
    }

    /// Edges `s` with `g(s) = b`, in input order.
    pub fn edges_into_b(&self, b: usize) -> &[EdgeId] {
        &self.into_b[b]
    }

    /// Edges `s` with `f(s) = a`, in input order.
    pub fn edges_out_of_a(&self, a: usize) -> &[EdgeId] {
        &self.out_of_a[a]
    }

    pub fn vertices(&self) -> impl Iterator<Item = Vertex> + '_ {
        (0..self.a.len())
            .map(Vertex::A)
            .chain((0..self.b.len()).map(Vertex::B))
    }

    pub fn vertex_label(&self, v: Vertex) -> &str {
        match v {
            Vertex::A(i) => &self.a[i],
            Vertex::B(j) => &self.b[j],
        }
    }

    /// Resolves a vertex label. A label present in both A and B must be
    /// qualified as `A:label` or `B:label`.
    pub fn find_vertex(&self, label: &str) -> Result<Vertex, LookupError> {
        if let Some(rest) = label.strip_prefix("A:") {
            return self
                .a
                .iter()
                .position(|l| l == rest)
                .map(Vertex::A)
                .ok_or_else(|| LookupError::UnknownVertex(label.to_string()));
        }
        if let Some(rest) = label.strip_prefix("B:") {
            return self
                .b
                .iter()
                .position(|l| l == rest)
                .map(Vertex::B)
                .ok_or_else(|| LookupError::UnknownVertex(label.to_string()));
        }
        let in_a = self.a.iter().position(|l| l == label);
        let in_b = self.b.iter().position(|l| l == label);
        match (in_a, in_b) {
            (Some(_), Some(_)) => Err(LookupError::AmbiguousVertex(label.to_string())),
            (Some(i), None) => Ok(Vertex::A(i)),
            (None, Some(j)) => Ok(Vertex::B(j)),
            (None, None) => Err(LookupError::UnknownVertex(label.to_string())),
        }
    }

    pub fn find_edge(&self, label: &str) -> Option<EdgeId> {
        self.edges.iter().position(|e| e.label == label).map(EdgeId)
    }

    pub fn realize(&self) -> RealizedGraph {
        let offset = self.a.len();
        RealizedGraph {
            vertices: self.vertices().collect(),
            edges: self
                .edges
                .iter()
                .map(|e| (e.left, offset + e.right))
                .collect(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum LookupError {
    #[error("unknown vertex `{0}`")]
    UnknownVertex(String),
    #[error("vertex label `{0}` is in both A and B; qualify it as A:{0} or B:{0}")]
    AmbiguousVertex(String),
}

impl fmt::Display for FiniteSpan {
    /// Writes the span back in span-file syntax.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if !self.a.is_empty() {
            writeln!(f, "A {}", self.a.join(" "))?;
        }
        if !self.b.is_empty() {
            writeln!(f, "B {}", self.b.join(" "))?;
        }
        for e in &self.edges {
            writeln!(f, "S {} {} {}", e.label, self.a[e.left], self.b[e.right])?;
        }
        writeln!(f, "base {}", self.a[self.base])
    }
}

/// The geometric realization: vertices `A ⊔ B`, one undirected edge per `s`.
///
/// Vertex ids are `0..|A|` for A followed by `|A|..|A|+|B|` for B.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RealizedGraph {
    pub vertices: Vec<Vertex>,
    /// `(f s, g s)` as vertex ids.
    pub edges: Vec<(usize, usize)>,
}

impl RealizedGraph {
    pub fn vertex_count(&self) -> usize {
        self.vertices.len()
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn id_of(&self, v: Vertex) -> Option<usize> {
        self.vertices.iter().position(|&w| w == v)
    }

    /// Incident `(edge, other endpoint)` pairs in edge-index order.
    pub fn incident(&self, v: usize) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.edges
            .iter()
            .enumerate()
            .filter_map(move |(k, &(x, y))| {
                if x == v {
                    Some((k, y))
                } else if y == v {
                    Some((k, x))
                } else {
                    None
                }
            })
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Component {
    /// Vertex ids in BFS discovery order.
    pub vertices: Vec<usize>,
    /// Spanning tree edge ids in discovery order.
    pub tree: Vec<usize>,
}

impl Component {
    pub fn contains(&self, v: usize) -> bool {
        self.vertices.contains(&v)
    }
}

/// The connected component of `v`, with a BFS spanning tree that scans
/// incident edges by increasing edge index.
pub fn component_of(graph: &RealizedGraph, v: usize) -> Component {
    let mut seen = vec![false; graph.vertex_count()];
    let mut vertices = vec![v];
    let mut tree = Vec::new();
    let mut queue = VecDeque::from([v]);
    seen[v] = true;
    while let Some(x) = queue.pop_front() {
        for (k, y) in graph.incident(x) {
            if !seen[y] {
                seen[y] = true;
                vertices.push(y);
                tree.push(k);
                queue.push_back(y);
            }
        }
    }
    Component { vertices, tree }
}

/// All components, in order of their least vertex id.
pub fn components(graph: &RealizedGraph) -> Vec<Component> {
    let mut seen = vec![false; graph.vertex_count()];
    let mut out = Vec::new();
    for v in 0..graph.vertex_count() {
        if !seen[v] {
            let c = component_of(graph, v);
            for &x in &c.vertices {
                seen[x] = true;
            }
            out.push(c);
        }
    }
    out
}
