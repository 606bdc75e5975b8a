//! The staged pushout approximations `P_A^n`, `P_B^n` of the based path
//! spaces, built literally as iterated pushouts of finite sets.
//!
//! Stage 0 has `P_B^0(b) = ∅` and `P_A^0(a) = {refl}` exactly when `a = a0`.
//! Stage `n + 1` is obtained from two families of spans:
//!
//! ```text
//! T_B(b):  P_B^n(b)  <-pr-  Σ_{s : g s = b} P_B^n(b)  -χ->  Σ_{s : g s = b} P_A^n(f s)
//!          χ(s, p) = (s, p ·_n s̄)
//! T_A(a):  P_A^n(a)  <-pr-  Σ_{s : f s = a} P_A^n(a)  -θ->  Σ_{s : f s = a} P_B^{n+1}(g s)
//!          θ(s, p) = (s, inr(s, p))
//! ```
//!
//! and `p ·_{n+1} s̄ = inr(s, p)` in `P_A^{n+1}(f s)`. The forward bridge
//! `p ·_n s = inr(s, p)` in `P_B^{n+1}(g s)` is read off after stage `n + 1`
//! exists rather than threaded through the recursion. Since A and B are
//! discrete, the `r : b = g s` component of each Σ is always `refl` and is
//! dropped. Every stage set is the π₀ of its pushout, computed by union-find
//! over cells; `cycle_diagnostic` reports whether a gluing graph has loops.

use std::collections::BTreeMap;
use std::fmt;

use serde::Serialize;
use thiserror::Error;

use crate::colim::{direct_limit, ColimError, FinSeqDiagram, SeqZigzag};
use crate::quotient::{Partition, UnionFind};
use crate::span::{EdgeId, FiniteSpan, Vertex};
use crate::words::{self, ZigzagWord};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum StageError {
    #[error("span map is not a total function into its target")]
    MapOutOfRange,
    #[error("cocone disagrees on middle element {middle}")]
    InconsistentCocone { middle: usize },
}

/// `left <-lmap- middle -rmap-> right` over `{0..k}` sets.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SpanInstance {
    pub left: usize,
    pub middle: usize,
    pub right: usize,
    pub lmap: Vec<usize>,
    pub rmap: Vec<usize>,
}

impl SpanInstance {
    pub fn new(
        left: usize,
        right: usize,
        lmap: Vec<usize>,
        rmap: Vec<usize>,
    ) -> Result<Self, StageError> {
        let middle = lmap.len();
        if rmap.len() != middle
            || lmap.iter().any(|&x| x >= left)
            || rmap.iter().any(|&y| y >= right)
        {
            return Err(StageError::MapOutOfRange);
        }
        Ok(Self {
            left,
            middle,
            right,
            lmap,
            rmap,
        })
    }
}

/// π₀ of a pushout of finite sets: `left ⊔ right` modulo
/// `inl(lmap m) ~ inr(rmap m)`. Cells are numbered `left` first.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PushoutPi0 {
    left: usize,
    partition: Partition,
}

impl PushoutPi0 {
    pub fn class_count(&self) -> usize {
        self.partition.class_count()
    }

    pub fn inl(&self, x: usize) -> usize {
        self.partition.class_of(x)
    }

    pub fn inr(&self, y: usize) -> usize {
        self.partition.class_of(self.left + y)
    }

    pub fn partition(&self) -> &Partition {
        &self.partition
    }
}

pub fn pushout_pi0(sp: &SpanInstance) -> PushoutPi0 {
    let mut uf = UnionFind::new(sp.left + sp.right);
    for (&x, &y) in sp.lmap.iter().zip(&sp.rmap) {
        uf.union(x, sp.left + y);
    }
    PushoutPi0 {
        left: sp.left,
        partition: uf.seal(),
    }
}

/// The cogap map of a cocone `(i, j)` under `sp`, as a table on pushout
/// classes. Fails if `i(lmap m) ≠ j(rmap m)` for some `m`.
pub fn cogap_set<X: Clone + PartialEq>(
    sp: &SpanInstance,
    left: &[X],
    right: &[X],
) -> Result<Vec<X>, StageError> {
    assert_eq!(left.len(), sp.left);
    assert_eq!(right.len(), sp.right);
    if let Some(middle) = (0..sp.middle).find(|&m| left[sp.lmap[m]] != right[sp.rmap[m]]) {
        return Err(StageError::InconsistentCocone { middle });
    }
    let po = pushout_pi0(sp);
    Ok((0..po.class_count())
        .map(|c| {
            let rep = po.partition.representative(c);
            if rep < sp.left {
                left[rep].clone()
            } else {
                right[rep - sp.left].clone()
            }
        })
        .collect())
}

/// Where a cell of a stage pushout came from.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub enum Cell {
    /// The single element of `P_A^0(a0)`.
    Refl,
    /// A class of the same fiber at the previous stage.
    Inl(usize),
    /// `(s, q)` with `q` a class of the opposite fiber across `s`.
    Inr { edge: EdgeId, class: usize },
}

#[derive(Debug, Clone, PartialEq, Eq)]
struct Gluing {
    span: SpanInstance,
    /// `(s, p)` for each middle element.
    middle: Vec<(EdgeId, usize)>,
    /// First right index used by each edge.
    right_offset: BTreeMap<EdgeId, usize>,
}

/// One fiber `P_A^n(a)` or `P_B^n(b)`: cells, gluing span, and π₀.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Fiber {
    cells: Vec<Cell>,
    gluing: Option<Gluing>,
    pushout: PushoutPi0,
}

impl Fiber {
    fn base(cells: Vec<Cell>) -> Self {
        let n = cells.len();
        Self {
            cells,
            gluing: None,
            pushout: PushoutPi0 {
                left: n,
                partition: Partition::discrete(n),
            },
        }
    }

    /// `left_size` previous classes, then right cells `(s, q)` for each
    /// `(s, count)` group, glued along `middle` via `rmap_of`.
    fn glued(
        left_size: usize,
        right_groups: &[(EdgeId, usize)],
        rmap_of: impl Fn(EdgeId, usize) -> usize,
    ) -> Self {
        let mut cells: Vec<Cell> = (0..left_size).map(Cell::Inl).collect();
        let mut right_offset = BTreeMap::new();
        let mut right = 0;
        for &(edge, count) in right_groups {
            right_offset.insert(edge, right);
            cells.extend((0..count).map(|class| Cell::Inr { edge, class }));
            right += count;
        }
        let mut middle = Vec::new();
        let mut lmap = Vec::new();
        let mut rmap = Vec::new();
        for &(edge, _) in right_groups {
            for p in 0..left_size {
                middle.push((edge, p));
                lmap.push(p);
                rmap.push(right_offset[&edge] + rmap_of(edge, p));
            }
        }
        let span = SpanInstance::new(left_size, right, lmap, rmap).expect("stage span is total");
        let pushout = pushout_pi0(&span);
        Self {
            cells,
            gluing: Some(Gluing {
                span,
                middle,
                right_offset,
            }),
            pushout,
        }
    }

    pub fn class_count(&self) -> usize {
        self.pushout.class_count()
    }

    pub fn cells(&self) -> &[Cell] {
        &self.cells
    }

    pub fn class_of_cell(&self, cell: usize) -> usize {
        self.pushout.partition.class_of(cell)
    }

    /// The defining span `T^n`, absent at stage 0.
    pub fn gluing_span(&self) -> Option<&SpanInstance> {
        self.gluing.as_ref().map(|g| &g.span)
    }

    /// `(s, p)` labels of the middle set, aligned with the gluing span.
    pub fn middle_labels(&self) -> &[(EdgeId, usize)] {
        self.gluing.as_ref().map_or(&[], |g| &g.middle)
    }

    /// Identified cell pairs `inl(p) ~ inr(χ/θ(s, p))`.
    pub fn glue_edges(&self) -> Vec<(usize, usize)> {
        match &self.gluing {
            None => Vec::new(),
            Some(g) => g
                .span
                .lmap
                .iter()
                .zip(&g.span.rmap)
                .map(|(&x, &y)| (x, g.span.left + y))
                .collect(),
        }
    }

    pub fn inl(&self, prev_class: usize) -> usize {
        self.pushout.inl(prev_class)
    }

    pub fn inr(&self, edge: EdgeId, class: usize) -> usize {
        let g = self.gluing.as_ref().expect("inr needs a pushout stage");
        self.pushout.inr(g.right_offset[&edge] + class)
    }

    /// First Betti number of the gluing graph: glue edges − cells + components.
    pub fn cycles(&self) -> usize {
        self.glue_edges().len() + self.class_count() - self.cells.len()
    }
}

/// All data of stage `n`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StageFamily {
    pub n: usize,
    pub pb: Vec<Fiber>,
    pub pa: Vec<Fiber>,
    /// `incl_B^{n-1} : P_B^{n-1}(b) -> P_B^n(b)`; empty at stage 0.
    pub incl_b: Vec<Vec<usize>>,
    pub incl_a: Vec<Vec<usize>>,
    /// `- ·_n s̄ : P_B^n(g s) -> P_A^n(f s)`, per edge.
    pub concat_bwd: Vec<Vec<usize>>,
    /// `- ·_n s : P_A^n(f s) -> P_B^{n+1}(g s)`, present once stage `n + 1`
    /// has been built.
    pub concat_fwd: Option<Vec<Vec<usize>>>,
}

impl StageFamily {
    fn zero(span: &FiniteSpan) -> Self {
        let pb = (0..span.b_len()).map(|_| Fiber::base(Vec::new())).collect();
        let pa = (0..span.a_len())
            .map(|a| {
                let cells = if a == span.basepoint() {
                    vec![Cell::Refl]
                } else {
                    Vec::new()
                };
                Fiber::base(cells)
            })
            .collect();
        Self {
            n: 0,
            pb,
            pa,
            incl_b: Vec::new(),
            incl_a: Vec::new(),
            concat_bwd: vec![Vec::new(); span.edge_count()],
            concat_fwd: None,
        }
    }

    pub fn fiber(&self, v: Vertex) -> &Fiber {
        match v {
            Vertex::A(a) => &self.pa[a],
            Vertex::B(b) => &self.pb[b],
        }
    }

    pub fn glue_count(&self) -> usize {
        self.pa
            .iter()
            .chain(&self.pb)
            .map(|f| f.glue_edges().len())
            .sum()
    }
}

/// Stages `0..=N` of the construction for one span.
#[derive(Debug, Clone)]
pub struct Stages {
    span: FiniteSpan,
    families: Vec<StageFamily>,
}

pub fn build_stages(span: &FiniteSpan, up_to: usize) -> Stages {
    let mut families = vec![StageFamily::zero(span)];
    for _ in 0..up_to {
        let prev = families.last_mut().expect("stage 0 exists");
        let next = successor(span, prev);
        families.push(next);
    }
    Stages {
        span: span.clone(),
        families,
    }
}

/// Builds stage `n + 1` and fills in `prev.concat_fwd`.
fn successor(span: &FiniteSpan, prev: &mut StageFamily) -> StageFamily {
    let pb: Vec<Fiber> = (0..span.b_len())
        .map(|b| {
            let groups: Vec<(EdgeId, usize)> = span
                .edges_into_b(b)
                .iter()
                .map(|&s| (s, prev.pa[span.left(s)].class_count()))
                .collect();
            // χ(s, p) = (s, p ·_n s̄)
            Fiber::glued(prev.pb[b].class_count(), &groups, |s, p| {
                prev.concat_bwd[s.0][p]
            })
        })
        .collect();

    let concat_fwd: Vec<Vec<usize>> = span
        .edge_ids()
        .map(|s| {
            let target = &pb[span.right(s)];
            (0..prev.pa[span.left(s)].class_count())
                .map(|p| target.inr(s, p))
                .collect()
        })
        .collect();

    let pa: Vec<Fiber> = (0..span.a_len())
        .map(|a| {
            let groups: Vec<(EdgeId, usize)> = span
                .edges_out_of_a(a)
                .iter()
                .map(|&s| (s, pb[span.right(s)].class_count()))
                .collect();
            // θ(s, p) = (s, inr(s, p)) = (s, p ·_n s)
            Fiber::glued(prev.pa[a].class_count(), &groups, |s, p| concat_fwd[s.0][p])
        })
        .collect();

    let concat_bwd = span
        .edge_ids()
        .map(|s| {
            let target = &pa[span.left(s)];
            (0..pb[span.right(s)].class_count())
                .map(|q| target.inr(s, q))
                .collect()
        })
        .collect();

    let incl_b = pb
        .iter()
        .zip(&prev.pb)
        .map(|(f, old)| (0..old.class_count()).map(|c| f.inl(c)).collect())
        .collect();
    let incl_a = pa
        .iter()
        .zip(&prev.pa)
        .map(|(f, old)| (0..old.class_count()).map(|c| f.inl(c)).collect())
        .collect();

    prev.concat_fwd = Some(concat_fwd);
    StageFamily {
        n: prev.n + 1,
        pb,
        pa,
        incl_b,
        incl_a,
        concat_bwd,
        concat_fwd: None,
    }
}

impl Stages {
    pub fn span(&self) -> &FiniteSpan {
        &self.span
    }

    /// The last stage index `N`.
    pub fn bound(&self) -> usize {
        self.families.len() - 1
    }

    pub fn stage(&self, n: usize) -> &StageFamily {
        &self.families[n]
    }

    pub fn families(&self) -> &[StageFamily] {
        &self.families
    }

    pub fn cardinality(&self, n: usize, v: Vertex) -> usize {
        self.families[n].fiber(v).class_count()
    }

    /// `P_A^•(a)` with the `incl_A` maps, truncated at `N`.
    pub fn diagram_a(&self, a: usize) -> FinSeqDiagram {
        self.diagram(Vertex::A(a))
    }

    /// `P_B^•(b)` with the `incl_B` maps, starting at the empty `P_B^0(b)`.
    pub fn diagram_b(&self, b: usize) -> FinSeqDiagram {
        self.diagram(Vertex::B(b))
    }

    pub fn diagram(&self, v: Vertex) -> FinSeqDiagram {
        let sizes = self
            .families
            .iter()
            .map(|f| f.fiber(v).class_count())
            .collect();
        let maps = self.families[1..]
            .iter()
            .map(|f| match v {
                Vertex::A(a) => f.incl_a[a].clone(),
                Vertex::B(b) => f.incl_b[b].clone(),
            })
            .collect();
        FinSeqDiagram::new(sizes, maps).expect("inclusions are total")
    }

    /// The zigzag `P_A^•(f s) ⇄ P_B^{•+1}(g s)` with forward maps `- ·_n s`
    /// and backward maps `- ·_{n+1} s̄`, truncated at `N - 1`.
    pub fn zigzag(&self, s: EdgeId) -> Result<SeqZigzag, ColimError> {
        let top = self.bound();
        if top == 0 {
            return Err(ColimError::EmptyShift);
        }
        let (a, b) = (self.span.left(s), self.span.right(s));
        let bound = top - 1;
        let dom = self.diagram_a(a).truncate(bound);
        let cod = self.diagram_b(b).shift()?;
        let fwd = (0..=bound)
            .map(|n| {
                self.families[n]
                    .concat_fwd
                    .as_ref()
                    .expect("below top stage")[s.0]
                    .clone()
            })
            .collect();
        let bwd = (0..bound)
            .map(|n| self.families[n + 1].concat_bwd[s.0].clone())
            .collect();
        SeqZigzag::new(dom, cod, fwd, bwd)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct FiberCycles {
    pub vertex: Vertex,
    pub cells: usize,
    pub glue_edges: usize,
    pub components: usize,
    pub cycles: usize,
}

/// Independent cycles of every fiber's gluing graph at stage `n`. A nonzero
/// count means the stage pushout has loops that π₀ does not see.
pub fn cycle_diagnostic(stages: &Stages, n: usize) -> Vec<FiberCycles> {
    let family = stages.stage(n);
    stages
        .span
        .vertices()
        .map(|v| {
            let fiber = family.fiber(v);
            FiberCycles {
                vertex: v,
                cells: fiber.cells.len(),
                glue_edges: fiber.glue_edges().len(),
                components: fiber.class_count(),
                cycles: fiber.cycles(),
            }
        })
        .collect()
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub enum Mismatch {
    /// The word cocone disagrees across a glue edge.
    InconsistentGlue {
        stage: usize,
        vertex: Vertex,
        middle: usize,
    },
    /// Two classes were assigned the same word.
    Collision {
        stage: usize,
        vertex: Vertex,
        word: ZigzagWord,
    },
    /// A reduced word in range has no class.
    Missing {
        stage: usize,
        vertex: Vertex,
        word: ZigzagWord,
    },
    /// A class was assigned a word outside the expected range.
    Extra {
        stage: usize,
        vertex: Vertex,
        word: ZigzagWord,
    },
    /// A stage map does not commute with its word-level counterpart.
    Naturality {
        stage: usize,
        map: &'static str,
        edge: Option<EdgeId>,
        vertex: Vertex,
        class: usize,
    },
    /// A colimit class disagrees with the word model.
    Colimit { vertex: Vertex, class: usize },
}

impl Mismatch {
    /// The stage the mismatch was found at; `None` for colimit mismatches.
    pub fn stage(&self) -> Option<usize> {
        match self {
            Mismatch::InconsistentGlue { stage, .. }
            | Mismatch::Collision { stage, .. }
            | Mismatch::Missing { stage, .. }
            | Mismatch::Extra { stage, .. }
            | Mismatch::Naturality { stage, .. } => Some(*stage),
            Mismatch::Colimit { .. } => None,
        }
    }
}

impl fmt::Display for Mismatch {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Mismatch::InconsistentGlue {
                stage,
                vertex,
                middle,
            } => {
                write!(
                    f,
                    "stage {stage} {vertex:?}: glue element {middle} joins different words"
                )
            }
            Mismatch::Collision {
                stage,
                vertex,
                word,
            } => {
                write!(
                    f,
                    "stage {stage} {vertex:?}: two classes share word {word:?}"
                )
            }
            Mismatch::Missing {
                stage,
                vertex,
                word,
            } => {
                write!(f, "stage {stage} {vertex:?}: no class for word {word:?}")
            }
            Mismatch::Extra {
                stage,
                vertex,
                word,
            } => {
                write!(
                    f,
                    "stage {stage} {vertex:?}: class with out-of-range word {word:?}"
                )
            }
            Mismatch::Naturality {
                stage,
                map,
                edge,
                vertex,
                class,
            } => write!(
                f,
                "stage {stage} {vertex:?}: {map} (edge {edge:?}) not natural at class {class}"
            ),
            Mismatch::Colimit { vertex, class } => {
                write!(
                    f,
                    "colimit of {vertex:?}: class {class} disagrees with words"
                )
            }
        }
    }
}

/// Words assigned to every class, per stage and fiber.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StageWords {
    pub pa: Vec<Vec<ZigzagWord>>,
    pub pb: Vec<Vec<ZigzagWord>>,
}

impl StageWords {
    pub fn fiber(&self, v: Vertex) -> &[ZigzagWord] {
        match v {
            Vertex::A(a) => &self.pa[a],
            Vertex::B(b) => &self.pb[b],
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BijectionReport {
    /// Class-to-word tables for stages `0..=n` (and `n + 1` when built).
    pub tables: Vec<StageWords>,
    pub mismatches: Vec<Mismatch>,
}

impl BijectionReport {
    pub fn is_ok(&self) -> bool {
        self.mismatches.is_empty()
    }
}

/// Assigns each cell its reduced word (`inl` keeps the word, `inr(s, q)`
/// appends a crossing), takes the cogap map to classes, and checks that stage
/// `k <= n` classes biject with reduced words of length `<= 2k` (A-fibers)
/// or `<= 2k - 1` (B-fibers), naturally in `incl`, `·s` and `·s̄`.
pub fn stage_word_bijection(stages: &Stages, n: usize) -> BijectionReport {
    let span = &stages.span;
    let last = (n + 1).min(stages.bound());
    let mut tables: Vec<StageWords> = Vec::new();
    let mut mismatches = Vec::new();

    for k in 0..=last {
        match stage_words(span, stages.stage(k), tables.last()) {
            Ok(t) => tables.push(t),
            Err(m) => {
                mismatches.push(m);
                return BijectionReport { tables, mismatches };
            }
        }
    }

    let all_words = words::enumerate_all(span, 2 * n);
    for k in 0..=n {
        let table = &tables[k];
        for v in span.vertices() {
            let max_len = match v {
                Vertex::A(_) => 2 * k,
                Vertex::B(_) => (2 * k).saturating_sub(1),
            };
            let expected: Vec<&ZigzagWord> = all_words
                .iter()
                .filter(|w| w.len() <= max_len && words::endpoint(span, w) == v)
                .collect();
            let mut actual: Vec<&ZigzagWord> = table.fiber(v).iter().collect();
            actual.sort();
            for pair in actual.windows(2) {
                if pair[0] == pair[1] {
                    mismatches.push(Mismatch::Collision {
                        stage: k,
                        vertex: v,
                        word: pair[0].clone(),
                    });
                }
            }
            actual.dedup();
            for w in &expected {
                if actual.binary_search(w).is_err() {
                    mismatches.push(Mismatch::Missing {
                        stage: k,
                        vertex: v,
                        word: (*w).clone(),
                    });
                }
            }
            for w in &actual {
                if expected.binary_search(w).is_err() {
                    mismatches.push(Mismatch::Extra {
                        stage: k,
                        vertex: v,
                        word: (*w).clone(),
                    });
                }
            }
        }
        check_naturality(stages, &tables, k, &mut mismatches);
    }
    BijectionReport { tables, mismatches }
}

fn stage_words(
    span: &FiniteSpan,
    family: &StageFamily,
    prev: Option<&StageWords>,
) -> Result<StageWords, Mismatch> {
    let Some(prev) = prev else {
        let pa = (0..span.a_len())
            .map(|a| {
                if a == span.basepoint() {
                    vec![ZigzagWord::refl()]
                } else {
                    Vec::new()
                }
            })
            .collect();
        return Ok(StageWords {
            pa,
            pb: vec![Vec::new(); span.b_len()],
        });
    };
    let stage = family.n;
    let mut pb = Vec::with_capacity(span.b_len());
    for (b, fiber) in family.pb.iter().enumerate() {
        let right = inr_words(fiber, |s, q| {
            words::concat_fwd(span, &prev.pa[span.left(s)][q], s)
        });
        pb.push(cogap_fiber(
            fiber,
            &prev.pb[b],
            &right,
            stage,
            Vertex::B(b),
        )?);
    }
    let mut pa = Vec::with_capacity(span.a_len());
    for (a, fiber) in family.pa.iter().enumerate() {
        let right = inr_words(fiber, |s, q| {
            words::concat_bwd(span, &pb[span.right(s)][q], s)
        });
        pa.push(cogap_fiber(
            fiber,
            &prev.pa[a],
            &right,
            stage,
            Vertex::A(a),
        )?);
    }
    Ok(StageWords { pa, pb })
}

fn inr_words(
    fiber: &Fiber,
    word_of: impl Fn(EdgeId, usize) -> Result<ZigzagWord, words::WordError>,
) -> Vec<ZigzagWord> {
    fiber
        .cells
        .iter()
        .filter_map(|cell| match *cell {
            Cell::Inr { edge, class } => {
                Some(word_of(edge, class).expect("inr cells sit over the edge's endpoint"))
            }
            _ => None,
        })
        .collect()
}

fn cogap_fiber(
    fiber: &Fiber,
    left: &[ZigzagWord],
    right: &[ZigzagWord],
    stage: usize,
    vertex: Vertex,
) -> Result<Vec<ZigzagWord>, Mismatch> {
    let span = fiber.gluing_span().expect("successor stages are pushouts");
    cogap_set(span, left, right).map_err(|e| match e {
        StageError::InconsistentCocone { middle } => Mismatch::InconsistentGlue {
            stage,
            vertex,
            middle,
        },
        StageError::MapOutOfRange => unreachable!("stage spans are total"),
    })
}

fn check_naturality(stages: &Stages, tables: &[StageWords], k: usize, out: &mut Vec<Mismatch>) {
    let span = &stages.span;
    let family = stages.stage(k);
    let here = &tables[k];
    if k > 0 {
        let before = &tables[k - 1];
        for a in 0..span.a_len() {
            for (c, &img) in family.incl_a[a].iter().enumerate() {
                if here.pa[a][img] != before.pa[a][c] {
                    out.push(Mismatch::Naturality {
                        stage: k,
                        map: "incl_A",
                        edge: None,
                        vertex: Vertex::A(a),
                        class: c,
                    });
                }
            }
        }
        for b in 0..span.b_len() {
            for (c, &img) in family.incl_b[b].iter().enumerate() {
                if here.pb[b][img] != before.pb[b][c] {
                    out.push(Mismatch::Naturality {
                        stage: k,
                        map: "incl_B",
                        edge: None,
                        vertex: Vertex::B(b),
                        class: c,
                    });
                }
            }
        }
    }
    for s in span.edge_ids() {
        let (a, b) = (span.left(s), span.right(s));
        for (q, &img) in family.concat_bwd[s.0].iter().enumerate() {
            let expect = words::concat_bwd(span, &here.pb[b][q], s).ok();
            if expect.as_ref() != Some(&here.pa[a][img]) {
                out.push(Mismatch::Naturality {
                    stage: k,
                    map: "concat_bwd",
                    edge: Some(s),
                    vertex: Vertex::B(b),
                    class: q,
                });
            }
        }
        if let (Some(fwd), Some(next)) = (&family.concat_fwd, tables.get(k + 1)) {
            for (p, &img) in fwd[s.0].iter().enumerate() {
                let expect = words::concat_fwd(span, &here.pa[a][p], s).ok();
                if expect.as_ref() != Some(&next.pb[b][img]) {
                    out.push(Mismatch::Naturality {
                        stage: k,
                        map: "concat_fwd",
                        edge: Some(s),
                        vertex: Vertex::A(a),
                        class: p,
                    });
                }
            }
        }
    }
}

/// Checks that the direct limit of each stage diagram bijects with the
/// reduced words of length `<= 2N` (A) or `<= 2N - 1` (B), compatibly with
/// the colimit inclusions.
pub fn colimit_agreement(stages: &Stages) -> Vec<Mismatch> {
    let span = &stages.span;
    let top = stages.bound();
    let report = stage_word_bijection(stages, top);
    if !report.is_ok() {
        return report.mismatches;
    }
    let mut out = Vec::new();
    for v in span.vertices() {
        let limit = direct_limit(&stages.diagram(v));
        let mut seen: Vec<ZigzagWord> = Vec::new();
        for class in 0..limit.class_count() {
            let mut member_words = limit
                .members(class)
                .map(|(n, x)| &report.tables[n].fiber(v)[x]);
            let first = member_words.next().expect("classes are nonempty").clone();
            if member_words.any(|w| *w != first) {
                out.push(Mismatch::Colimit { vertex: v, class });
            }
            seen.push(first);
        }
        let mut expected: Vec<ZigzagWord> = report.tables[top].fiber(v).to_vec();
        expected.sort();
        seen.sort();
        if seen != expected {
            out.push(Mismatch::Colimit {
                vertex: v,
                class: limit.class_count(),
            });
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn parse(text: &str) -> FiniteSpan {
        FiniteSpan::parse(text).unwrap()
    }

    fn circle() -> FiniteSpan {
        parse("A a\nB b\nS s a b\nS t a b\nbase a")
    }

    #[test]
    fn pushout_examples() {
        let coproduct = SpanInstance::new(1, 1, vec![], vec![]).unwrap();
        assert_eq!(pushout_pi0(&coproduct).class_count(), 2);
        let glued = SpanInstance::new(1, 1, vec![0], vec![0]).unwrap();
        let po = pushout_pi0(&glued);
        assert_eq!(po.class_count(), 1);
        assert_eq!(po.inl(0), po.inr(0));
        assert_eq!(
            SpanInstance::new(1, 1, vec![1], vec![0]),
            Err(StageError::MapOutOfRange)
        );
    }

    #[test]
    fn cogap_examples() {
        let coproduct = SpanInstance::new(1, 1, vec![], vec![]).unwrap();
        assert_eq!(cogap_set(&coproduct, &[0], &[1]).unwrap(), vec![0, 1]);
        let glued = SpanInstance::new(1, 1, vec![0], vec![0]).unwrap();
        assert_eq!(cogap_set(&glued, &[7], &[7]).unwrap(), vec![7]);
        assert_eq!(
            cogap_set(&glued, &[7], &[8]),
            Err(StageError::InconsistentCocone { middle: 0 })
        );
    }

    #[test]
    fn circle_first_gluing_span() {
        let stages = build_stages(&circle(), 1);
        let fiber = &stages.stage(1).pa[0];
        let sp = fiber.gluing_span().unwrap();
        assert_eq!((sp.left, sp.middle, sp.right), (1, 2, 4));
        assert_eq!(fiber.class_count(), 3);
        // refl, >s <s and >t <t collapse into one class.
        assert_eq!(fiber.members_of_class_count(0), 3);
    }

    impl Fiber {
        fn members_of_class_count(&self, class: usize) -> usize {
            self.pushout.partition.members(class).count()
        }
    }

    #[test]
    fn circle_cardinalities() {
        let stages = build_stages(&circle(), 2);
        let a = Vertex::A(0);
        let b = Vertex::B(0);
        let sizes: Vec<(usize, usize)> = (0..=2)
            .map(|n| (stages.cardinality(n, a), stages.cardinality(n, b)))
            .collect();
        assert_eq!(sizes, vec![(1, 0), (3, 2), (5, 4)]);
    }

    #[test]
    fn interval_collapses() {
        let stages = build_stages(&parse("A a\nB b\nS s a b\nbase a"), 4);
        for n in 0..=4 {
            assert_eq!(stages.cardinality(n, Vertex::A(0)), 1);
            assert_eq!(stages.cardinality(n, Vertex::B(0)), usize::from(n >= 1));
        }
    }

    #[test]
    fn zero_stage_axioms() {
        let span = parse("A a0 a1\nB b0 b1\nS s0 a0 b0\nS s1 a1 b0\nS s2 a1 b1\nbase a1");
        let stages = build_stages(&span, 0);
        assert_eq!(stages.cardinality(0, Vertex::A(1)), 1);
        assert_eq!(stages.cardinality(0, Vertex::A(0)), 0);
        assert!(stages.stage(0).pb.iter().all(|f| f.class_count() == 0));
    }

    #[test]
    fn circle_bijection_at_stage_two() {
        let span = circle();
        let stages = build_stages(&span, 2);
        let report = stage_word_bijection(&stages, 2);
        assert!(report.is_ok(), "{:?}", report.mismatches);
        let mut b_words: Vec<String> = report.tables[2]
            .fiber(Vertex::B(0))
            .iter()
            .map(|w| w.display(&span).to_string())
            .collect();
        b_words.sort();
        assert_eq!(b_words, [">s", ">s <t >s", ">t", ">t <s >t"]);
    }

    #[test]
    fn diagnostics_on_forests() {
        for text in [
            "A a\nB b\nS s a b\nS t a b\nbase a",
            "A a\nB b\nS s a b\nbase a",
            "A a a1\nB b\nbase a",
        ] {
            let stages = build_stages(&parse(text), 4);
            for n in 0..=4 {
                assert!(cycle_diagnostic(&stages, n).iter().all(|c| c.cycles == 0));
            }
        }
        let coproduct = build_stages(&parse("A a a1\nB b\nbase a"), 3);
        assert_eq!(coproduct.stage(3).glue_count(), 0);
    }

    #[test]
    fn construction_zigzag_conditions() {
        let span = circle();
        let stages = build_stages(&span, 4);
        for s in span.edge_ids() {
            let z = stages.zigzag(s).unwrap();
            assert_eq!(z.bound(), 3);
        }
        assert!(build_stages(&span, 0).zigzag(EdgeId(0)).is_err());
    }

    #[test]
    fn colimits_match_words() {
        let span = circle();
        let stages = build_stages(&span, 2);
        assert_eq!(direct_limit(&stages.diagram_a(0)).class_count(), 5);
        assert!(colimit_agreement(&stages).is_empty());
    }
}
