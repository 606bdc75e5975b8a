//! Descent families over the word model and the elimination that turns a
//! point of the basepoint fiber into a section.
//!
//! A family assigns a fiber to every reduced word within a bound `L`, and to
//! every edge `s` and A-word `w` ending at `f(s)` a bijection
//! `Q(w) -> Q(w · s)`. Sections are built by recursion on word length: a word
//! ending in `Fwd(s)` is reached by the transition out of its prefix, a word
//! ending in `Bwd(s)` by the inverse transition into its prefix.

use std::collections::{BTreeMap, HashMap};
use std::fmt::Debug;

use rand::seq::SliceRandom;
use rand::Rng;
use serde::Serialize;
use thiserror::Error;

use crate::span::{EdgeId, FiniteSpan, Vertex};
use crate::words::{self, Dir, ZigzagWord};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum DescentError {
    #[error(
        "transition for edge {edge:?} at {word:?} is undefined; is the family bound too small?"
    )]
    MissingTransition { edge: EdgeId, word: ZigzagWord },
    #[error("transition for edge {edge:?} at {word:?} is not a bijection")]
    NotBijective { edge: EdgeId, word: ZigzagWord },
    #[error("basepoint value is not in the fiber over refl")]
    BasepointOutsideFiber,
}

/// Fibers and transitions over reduced words of length `<= bound()`.
pub trait DescentFamily {
    type Elem: Clone + PartialEq + Debug;

    fn bound(&self) -> usize;

    /// Whether `x` belongs to the fiber over `w`.
    fn contains(&self, w: &ZigzagWord, x: &Self::Elem) -> bool;

    /// `Q_S(s, w) : Q(w) -> Q(w · s)`, for an A-word `w` ending at `f(s)`.
    fn transport(&self, s: EdgeId, w: &ZigzagWord, x: &Self::Elem) -> Option<Self::Elem>;

    /// The inverse of `transport(s, w, -)`.
    fn transport_inv(&self, s: EdgeId, w: &ZigzagWord, y: &Self::Elem) -> Option<Self::Elem>;

    /// Structural validation run before elimination.
    fn validate(&self, _span: &FiniteSpan) -> Result<(), DescentError> {
        Ok(())
    }
}

/// Values of a section on every reduced word within the bound, keyed in
/// canonical word order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Section<E> {
    values: BTreeMap<ZigzagWord, E>,
}

impl<E> Section<E> {
    pub fn from_values(values: BTreeMap<ZigzagWord, E>) -> Self {
        Self { values }
    }

    pub fn get(&self, w: &ZigzagWord) -> Option<&E> {
        self.values.get(w)
    }

    pub fn set(&mut self, w: ZigzagWord, value: E) {
        self.values.insert(w, value);
    }

    pub fn iter(&self) -> impl Iterator<Item = (&ZigzagWord, &E)> {
        self.values.iter()
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    /// Values over A-words (`t_A`).
    pub fn over_a(&self) -> impl Iterator<Item = (&ZigzagWord, &E)> {
        self.values.iter().filter(|(w, _)| w.len() % 2 == 0)
    }

    /// Values over B-words (`t_B`).
    pub fn over_b(&self) -> impl Iterator<Item = (&ZigzagWord, &E)> {
        self.values.iter().filter(|(w, _)| w.len() % 2 == 1)
    }
}

/// Builds the section determined by `q0` over `refl`.
///
/// `t(refl) = q0`, `t(p · Fwd s) = Q_S(s, p)(t(p))` and
/// `t(p · Bwd s) = Q_S(s, p · Bwd s)⁻¹(t(p))`. Each reduced word is visited
/// once, after its prefix.
pub fn elim_section<F: DescentFamily>(
    span: &FiniteSpan,
    fam: &F,
    q0: F::Elem,
) -> Result<Section<F::Elem>, DescentError> {
    fam.validate(span)?;
    if !fam.contains(&ZigzagWord::refl(), &q0) {
        return Err(DescentError::BasepointOutsideFiber);
    }
    let mut values = BTreeMap::new();
    values.insert(ZigzagWord::refl(), q0);
    for w in words::enumerate_all(span, fam.bound()).into_iter().skip(1) {
        let step = w.last().expect("nonempty");
        let prefix = w.prefix().expect("nonempty");
        let before = values[&prefix].clone();
        let value = match step.dir {
            Dir::Fwd => {
                let y = fam.transport(step.edge, &prefix, &before).ok_or_else(|| {
                    DescentError::MissingTransition {
                        edge: step.edge,
                        word: prefix.clone(),
                    }
                })?;
                ensure_inverse(fam, step.edge, &prefix, &before, &y)?;
                y
            }
            Dir::Bwd => {
                let x = fam.transport_inv(step.edge, &w, &before).ok_or_else(|| {
                    DescentError::MissingTransition {
                        edge: step.edge,
                        word: w.clone(),
                    }
                })?;
                ensure_inverse(fam, step.edge, &w, &x, &before)?;
                x
            }
        };
        if !fam.contains(&w, &value) {
            return Err(DescentError::NotBijective {
                edge: step.edge,
                word: prefix,
            });
        }
        values.insert(w, value);
    }
    Ok(Section { values })
}

fn ensure_inverse<F: DescentFamily>(
    fam: &F,
    s: EdgeId,
    w: &ZigzagWord,
    x: &F::Elem,
    y: &F::Elem,
) -> Result<(), DescentError> {
    let round_trip_x = fam.transport_inv(s, w, y);
    let round_trip_y = fam.transport(s, w, x);
    if round_trip_x.as_ref() == Some(x) && round_trip_y.as_ref() == Some(y) {
        Ok(())
    } else {
        Err(DescentError::NotBijective {
            edge: s,
            word: w.clone(),
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub enum Violation {
    /// `t(refl) ≠ q0`.
    Basepoint,
    /// The section has no value over a word in range.
    MissingValue { word: ZigzagWord },
    /// `Q_S(s, w)(t(w)) ≠ t(w · s)`.
    Coherence { edge: EdgeId, word: ZigzagWord },
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ComputationReport {
    pub checked: usize,
    pub violations: Vec<Violation>,
}

impl ComputationReport {
    pub fn is_ok(&self) -> bool {
        self.violations.is_empty()
    }
}

/// Verifies `t(refl) = q0` and, for every A-word `w` ending at `f(s)` with
/// `len(w) + 1 <= L`, that `Q_S(s, w)(t(w)) = t(reduce(w · Fwd s))`. This
/// includes the cancelling case where `w` ends in `Bwd(s)`.
pub fn check_computation<F: DescentFamily>(
    span: &FiniteSpan,
    fam: &F,
    q0: &F::Elem,
    sec: &Section<F::Elem>,
) -> ComputationReport {
    let mut violations = Vec::new();
    let mut checked = 1;
    if sec.get(&ZigzagWord::refl()) != Some(q0) {
        violations.push(Violation::Basepoint);
    }
    let bound = fam.bound();
    let all = words::enumerate_all(span, bound);
    for w in &all {
        if sec.get(w).is_none() {
            violations.push(Violation::MissingValue { word: w.clone() });
        }
    }
    for w in all.iter().filter(|w| w.len() < bound) {
        let Vertex::A(a) = words::endpoint(span, w) else {
            continue;
        };
        let Some(tw) = sec.get(w) else { continue };
        for &s in span.edges_out_of_a(a) {
            checked += 1;
            let target = words::concat_fwd(span, w, s).expect("w ends at f(s)");
            let moved = fam.transport(s, w, tw);
            if moved.is_none() || moved.as_ref() != sec.get(&target) {
                violations.push(Violation::Coherence {
                    edge: s,
                    word: w.clone(),
                });
            }
        }
    }
    ComputationReport {
        checked,
        violations,
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct UniquenessReport {
    pub compared: usize,
    /// First word, in canonical order, where the two sections differ.
    pub first_disagreement: Option<ZigzagWord>,
}

impl UniquenessReport {
    pub fn is_ok(&self) -> bool {
        self.first_disagreement.is_none()
    }
}

/// Compares `sec` with the eliminated section fiberwise.
pub fn uniqueness_check<F: DescentFamily>(
    span: &FiniteSpan,
    fam: &F,
    q0: &F::Elem,
    sec: &Section<F::Elem>,
) -> Result<UniquenessReport, DescentError> {
    let canonical = elim_section(span, fam, q0.clone())?;
    let mut compared = 0;
    for (w, value) in canonical.iter() {
        compared += 1;
        if sec.get(w) != Some(value) {
            return Ok(UniquenessReport {
                compared,
                first_disagreement: Some(w.clone()),
            });
        }
    }
    Ok(UniquenessReport {
        compared,
        first_disagreement: None,
    })
}

/// A bijection of `{0..k}` with its inverse stored alongside.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Perm {
    forward: Vec<usize>,
    inverse: Vec<usize>,
}

impl Perm {
    pub fn identity(k: usize) -> Self {
        Self {
            forward: (0..k).collect(),
            inverse: (0..k).collect(),
        }
    }

    /// Inverts `forward`; `None` unless it is a bijection.
    pub fn from_forward(forward: Vec<usize>) -> Option<Self> {
        let mut inverse = vec![usize::MAX; forward.len()];
        for (x, &y) in forward.iter().enumerate() {
            if y >= forward.len() || inverse[y] != usize::MAX {
                return None;
            }
            inverse[y] = x;
        }
        Some(Self { forward, inverse })
    }

    /// Stores both tables as given, without checking them.
    pub fn from_tables(forward: Vec<usize>, inverse: Vec<usize>) -> Self {
        Self { forward, inverse }
    }

    pub fn shift(k: usize, by: usize) -> Self {
        Self::from_forward((0..k).map(|x| (x + by) % k).collect()).expect("rotation")
    }

    pub fn len(&self) -> usize {
        self.forward.len()
    }

    pub fn is_empty(&self) -> bool {
        self.forward.is_empty()
    }

    pub fn apply(&self, x: usize) -> Option<usize> {
        self.forward.get(x).copied()
    }

    pub fn apply_inv(&self, y: usize) -> Option<usize> {
        self.inverse.get(y).copied()
    }

    pub fn is_bijective(&self) -> bool {
        self.forward.len() == self.inverse.len()
            && self
                .forward
                .iter()
                .enumerate()
                .all(|(x, &y)| self.inverse.get(y) == Some(&x))
    }
}

/// A family given by explicit tables: a fiber size per word and a
/// permutation per `(edge, A-word)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TableFamily {
    bound: usize,
    fibers: HashMap<ZigzagWord, usize>,
    transitions: HashMap<(EdgeId, ZigzagWord), Perm>,
}

impl TableFamily {
    /// Tabulates `fiber_size` and `transition` over every reduced word with
    /// length `<= bound`.
    pub fn build(
        span: &FiniteSpan,
        bound: usize,
        fiber_size: impl Fn(&ZigzagWord) -> usize,
        mut transition: impl FnMut(EdgeId, &ZigzagWord) -> Perm,
    ) -> Self {
        let all = words::enumerate_all(span, bound);
        let fibers = all.iter().map(|w| (w.clone(), fiber_size(w))).collect();
        let mut transitions = HashMap::new();
        for w in &all {
            let Vertex::A(a) = words::endpoint(span, w) else {
                continue;
            };
            for &s in span.edges_out_of_a(a) {
                let target = words::concat_fwd(span, w, s).expect("w ends at f(s)");
                if target.len() <= bound {
                    transitions.insert((s, w.clone()), transition(s, w));
                }
            }
        }
        Self {
            bound,
            fibers,
            transitions,
        }
    }

    /// Singleton fibers everywhere.
    pub fn trivial(span: &FiniteSpan, bound: usize) -> Self {
        Self::build(span, bound, |_| 1, |_, _| Perm::identity(1))
    }

    /// Fibers `{0, 1}`; edges with odd index swap, the rest fix.
    pub fn parity(span: &FiniteSpan, bound: usize) -> Self {
        Self::build(span, bound, |_| 2, |s, _| Perm::shift(2, s.index() % 2))
    }

    /// Fibers are integers in `[-L, L]` stored as `0..2L+1` with offset `L`
    /// (wrapping at the ends); crossing edge `k` forward adds `k`. On the
    /// circle this counts signed crossings of the second edge.
    pub fn winding(span: &FiniteSpan, bound: usize) -> Self {
        let k = 2 * bound + 1;
        Self::build(span, bound, |_| k, |s, _| Perm::shift(k, s.index() % k))
    }

    /// Fibers of size `k` with independent uniformly random permutations.
    pub fn random(span: &FiniteSpan, bound: usize, k: usize, rng: &mut impl Rng) -> Self {
        Self::build(
            span,
            bound,
            |_| k,
            |_, _| {
                let mut forward: Vec<usize> = (0..k).collect();
                forward.shuffle(rng);
                Perm::from_forward(forward).expect("shuffle is a bijection")
            },
        )
    }

    /// Decodes a winding-family element into its integer.
    pub fn winding_value(&self, x: usize) -> i64 {
        x as i64 - self.bound as i64
    }

    /// Encodes an integer as a winding-family element.
    pub fn winding_elem(&self, v: i64) -> usize {
        let k = 2 * self.bound as i64 + 1;
        (v + self.bound as i64).rem_euclid(k) as usize
    }

    pub fn fiber_size(&self, w: &ZigzagWord) -> Option<usize> {
        self.fibers.get(w).copied()
    }

    pub fn transition(&self, s: EdgeId, w: &ZigzagWord) -> Option<&Perm> {
        self.transitions.get(&(s, w.clone()))
    }

    /// Replaces one transition, bypassing validation.
    pub fn set_transition(&mut self, s: EdgeId, w: ZigzagWord, perm: Perm) {
        self.transitions.insert((s, w), perm);
    }
}

impl DescentFamily for TableFamily {
    type Elem = usize;

    fn bound(&self) -> usize {
        self.bound
    }

    fn contains(&self, w: &ZigzagWord, x: &usize) -> bool {
        self.fibers.get(w).is_some_and(|&k| *x < k)
    }

    fn transport(&self, s: EdgeId, w: &ZigzagWord, x: &usize) -> Option<usize> {
        self.transition(s, w)?.apply(*x)
    }

    fn transport_inv(&self, s: EdgeId, w: &ZigzagWord, y: &usize) -> Option<usize> {
        self.transition(s, w)?.apply_inv(*y)
    }

    fn validate(&self, span: &FiniteSpan) -> Result<(), DescentError> {
        for ((s, w), perm) in &self.transitions {
            let target = words::concat_fwd(span, w, *s).expect("w ends at f(s)");
            let sizes_match = self.fibers.get(w) == Some(&perm.len())
                && self.fibers.get(&target) == Some(&perm.len());
            if !sizes_match || !perm.is_bijective() {
                return Err(DescentError::NotBijective {
                    edge: *s,
                    word: w.clone(),
                });
            }
        }
        Ok(())
    }
}

/// The word family itself: the fiber over any word ending at `v` is the set
/// of reduced words to `v` of length `<= L`, and transitions are bridge
/// concatenation, defined wherever the result stays in the window.
#[derive(Debug, Clone)]
pub struct WordFamily<'a> {
    span: &'a FiniteSpan,
    bound: usize,
}

impl<'a> WordFamily<'a> {
    pub fn new(span: &'a FiniteSpan, bound: usize) -> Self {
        Self { span, bound }
    }
}

impl DescentFamily for WordFamily<'_> {
    type Elem = ZigzagWord;

    fn bound(&self) -> usize {
        self.bound
    }

    fn contains(&self, w: &ZigzagWord, x: &ZigzagWord) -> bool {
        x.len() <= self.bound
            && x.is_reduced()
            && words::check(self.span, x).is_ok()
            && words::endpoint(self.span, x) == words::endpoint(self.span, w)
    }

    fn transport(&self, s: EdgeId, _w: &ZigzagWord, x: &ZigzagWord) -> Option<ZigzagWord> {
        words::concat_fwd(self.span, x, s)
            .ok()
            .filter(|y| y.len() <= self.bound)
    }

    fn transport_inv(&self, s: EdgeId, _w: &ZigzagWord, y: &ZigzagWord) -> Option<ZigzagWord> {
        words::concat_bwd(self.span, y, s)
            .ok()
            .filter(|x| x.len() <= self.bound)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct EncodeDecodeReport {
    pub bound: usize,
    /// Window-safe words (length `<= L - 1`) on which `t(w) = w` was checked.
    pub checked: usize,
    pub identity_failures: Vec<ZigzagWord>,
    pub naturality_failures: Vec<(EdgeId, ZigzagWord)>,
    pub error: Option<String>,
}

impl EncodeDecodeReport {
    pub fn is_ok(&self) -> bool {
        self.error.is_none()
            && self.identity_failures.is_empty()
            && self.naturality_failures.is_empty()
    }
}

/// Eliminates into the word family pointed at `refl` and checks that the
/// section is the identity on window-safe words and commutes with `· s`.
pub fn encode_decode(span: &FiniteSpan, bound: usize) -> EncodeDecodeReport {
    let fam = WordFamily::new(span, bound);
    let mut report = EncodeDecodeReport {
        bound,
        checked: 0,
        identity_failures: Vec::new(),
        naturality_failures: Vec::new(),
        error: None,
    };
    let sec = match elim_section(span, &fam, ZigzagWord::refl()) {
        Ok(sec) => sec,
        Err(e) => {
            report.error = Some(e.to_string());
            return report;
        }
    };
    let safe = bound.saturating_sub(1);
    for (w, t) in sec.iter().filter(|(w, _)| w.len() <= safe) {
        report.checked += 1;
        if t != w {
            report.identity_failures.push(w.clone());
        }
        let Vertex::A(a) = words::endpoint(span, w) else {
            continue;
        };
        for &s in span.edges_out_of_a(a) {
            let moved = words::concat_fwd(span, w, s).expect("w ends at f(s)");
            let lhs = sec.get(&moved);
            let rhs = words::concat_fwd(span, t, s).ok();
            if lhs.is_none() || lhs != rhs.as_ref() {
                report.naturality_failures.push((s, w.clone()));
            }
        }
    }
    report
}
