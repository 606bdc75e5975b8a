//! Path spaces of pushouts of finite span diagrams, computed three ways:
//! as staged iterated pushouts, as reduced crossing words, and as
//! non-backtracking walks on the realized graph.
//!
//! ```
//! use zigzag_core::{build_stages, corpus, words, Vertex};
//!
//! let circle = corpus::get("circle").unwrap();
//! let stages = build_stages(&circle, 3);
//! assert_eq!(stages.cardinality(3, Vertex::A(0)), 7);
//! assert_eq!(words::enumerate(&circle, Vertex::A(0), 6).len(), 7);
//! ```

pub mod colim;
pub mod corpus;
pub mod descent;
pub mod gen;
pub mod oracle;
pub mod quotient;
pub mod span;
pub mod stages;
pub mod suite;
pub mod words;

pub use colim::{FinSeqDiagram, QuotientSet, SeqMorphism, SeqZigzag};
pub use descent::{DescentFamily, Section, TableFamily};
pub use span::{EdgeId, FiniteSpan, RealizedGraph, Vertex};
pub use stages::{build_stages, StageFamily, Stages};
pub use words::{Dir, Step, ZigzagWord};
