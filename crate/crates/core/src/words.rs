//! Reduced alternating crossing words based at the basepoint.
//!
//! A word is a sequence of glue crossings starting at `a0`. `Fwd(s)` crosses
//! from `f(s)` to `g(s)` and `Bwd(s)` crosses back, so directions alternate
//! and a word of even length ends in A, one of odd length in B. Reduced words
//! (no adjacent `Fwd(s) Bwd(s)` or `Bwd(s) Fwd(s)`) are the normal forms of
//! based paths in the pushout.

use std::cmp::Ordering;
use std::fmt;

use serde::Serialize;
use thiserror::Error;

use crate::span::{EdgeId, FiniteSpan, LookupError, Vertex};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub enum Dir {
    Fwd,
    Bwd,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct Step {
    pub dir: Dir,
    pub edge: EdgeId,
}

impl Step {
    pub fn fwd(edge: EdgeId) -> Self {
        Step {
            dir: Dir::Fwd,
            edge,
        }
    }

    pub fn bwd(edge: EdgeId) -> Self {
        Step {
            dir: Dir::Bwd,
            edge,
        }
    }

    pub fn inverse(self) -> Self {
        let dir = match self.dir {
            Dir::Fwd => Dir::Bwd,
            Dir::Bwd => Dir::Fwd,
        };
        Step { dir, ..self }
    }

    fn cancels(self, next: Step) -> bool {
        self.inverse() == next
    }
}

/// A crossing sequence from `a0`. The empty word is `refl`.
///
/// Ordered canonically: by length, then lexicographically by step
/// (direction first, then edge index).
#[derive(Debug, Clone, Default, PartialEq, Eq, Hash, Serialize)]
#[serde(transparent)]
pub struct ZigzagWord {
    steps: Vec<Step>,
}

impl Ord for ZigzagWord {
    fn cmp(&self, other: &Self) -> Ordering {
        self.steps
            .len()
            .cmp(&other.steps.len())
            .then_with(|| self.steps.cmp(&other.steps))
    }
}

impl PartialOrd for ZigzagWord {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum WordError {
    #[error("step {index} breaks alternation")]
    Alternation { index: usize },
    #[error("step {index} does not start where the previous step ended")]
    EndpointMismatch { index: usize },
    #[error("edge index {0} out of range")]
    UnknownEdge(usize),
    #[error("unknown edge label `{0}`")]
    UnknownEdgeLabel(String),
    #[error("bad step token `{0}`: expected `>label` or `<label`")]
    BadToken(String),
    #[error(transparent)]
    Lookup(#[from] LookupError),
}

impl ZigzagWord {
    pub fn refl() -> Self {
        Self::default()
    }

    /// Builds a word, checking alternation and endpoint matching against
    /// `span`. The word need not be reduced.
    pub fn new(span: &FiniteSpan, steps: Vec<Step>) -> Result<Self, WordError> {
        let word = Self { steps };
        check(span, &word)?;
        Ok(word)
    }

    /// Builds a word without validation. Callers must uphold alternation and
    /// endpoint matching.
    pub fn from_steps_unchecked(steps: Vec<Step>) -> Self {
        Self { steps }
    }

    pub fn steps(&self) -> &[Step] {
        &self.steps
    }

    pub fn len(&self) -> usize {
        self.steps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.steps.is_empty()
    }

    pub fn last(&self) -> Option<Step> {
        self.steps.last().copied()
    }

    /// The word with its last step removed.
    pub fn prefix(&self) -> Option<ZigzagWord> {
        if self.steps.is_empty() {
            None
        } else {
            Some(Self {
                steps: self.steps[..self.steps.len() - 1].to_vec(),
            })
        }
    }

    pub fn is_reduced(&self) -> bool {
        self.steps.windows(2).all(|w| !w[0].cancels(w[1]))
    }

    /// Appends without reducing. Validity is the caller's concern.
    pub fn pushed(&self, step: Step) -> ZigzagWord {
        let mut steps = self.steps.clone();
        steps.push(step);
        Self { steps }
    }

    pub fn display<'a>(&'a self, span: &'a FiniteSpan) -> WordDisplay<'a> {
        WordDisplay { word: self, span }
    }
}

/// Serializes as `refl` or `>s <t >s`.
pub struct WordDisplay<'a> {
    word: &'a ZigzagWord,
    span: &'a FiniteSpan,
}

impl fmt::Display for WordDisplay<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.word.is_empty() {
            return f.write_str("refl");
        }
        for (i, step) in self.word.steps.iter().enumerate() {
            if i > 0 {
                f.write_str(" ")?;
            }
            let sigil = match step.dir {
                Dir::Fwd => '>',
                Dir::Bwd => '<',
            };
            write!(f, "{sigil}{}", self.span.edge_label(step.edge))?;
        }
        Ok(())
    }
}

/// Parses `refl` or a whitespace-separated step sequence such as `>s <t`.
pub fn parse_word(span: &FiniteSpan, text: &str) -> Result<ZigzagWord, WordError> {
    let text = text.trim();
    if text == "refl" || text.is_empty() {
        return Ok(ZigzagWord::refl());
    }
    let mut steps = Vec::new();
    for token in text.split_whitespace() {
        let (dir, label) = if let Some(l) = token.strip_prefix('>') {
            (Dir::Fwd, l)
        } else if let Some(l) = token.strip_prefix('<') {
            (Dir::Bwd, l)
        } else {
            return Err(WordError::BadToken(token.to_string()));
        };
        let edge = span
            .find_edge(label)
            .ok_or_else(|| WordError::UnknownEdgeLabel(label.to_string()))?;
        steps.push(Step { dir, edge });
    }
    ZigzagWord::new(span, steps)
}

/// Checks alternation (starting with `Fwd`) and that each step starts where
/// the previous one ended.
pub fn check(span: &FiniteSpan, word: &ZigzagWord) -> Result<(), WordError> {
    let mut at = Vertex::A(span.basepoint());
    for (index, step) in word.steps.iter().enumerate() {
        if step.edge.0 >= span.edge_count() {
            return Err(WordError::UnknownEdge(step.edge.0));
        }
        let expected = if index % 2 == 0 { Dir::Fwd } else { Dir::Bwd };
        if step.dir != expected {
            return Err(WordError::Alternation { index });
        }
        let (from, to) = match step.dir {
            Dir::Fwd => (
                Vertex::A(span.left(step.edge)),
                Vertex::B(span.right(step.edge)),
            ),
            Dir::Bwd => (
                Vertex::B(span.right(step.edge)),
                Vertex::A(span.left(step.edge)),
            ),
        };
        if from != at {
            return Err(WordError::EndpointMismatch { index });
        }
        at = to;
    }
    Ok(())
}

/// `a0` for `refl`, otherwise the far end of the last step.
pub fn endpoint(span: &FiniteSpan, word: &ZigzagWord) -> Vertex {
    match word.last() {
        None => Vertex::A(span.basepoint()),
        Some(Step {
            dir: Dir::Fwd,
            edge,
        }) => Vertex::B(span.right(edge)),
        Some(Step {
            dir: Dir::Bwd,
            edge,
        }) => Vertex::A(span.left(edge)),
    }
}

/// Rewriting strategy for explicit one-pair-at-a-time reduction.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Strategy {
    /// Always delete the leftmost adjacent inverse pair.
    Leftmost,
    /// Always delete the rightmost adjacent inverse pair.
    Rightmost,
}

/// Normal form by deleting adjacent inverse pairs, in one stack pass.
pub fn reduce(span: &FiniteSpan, word: &ZigzagWord) -> Result<ZigzagWord, WordError> {
    check(span, word)?;
    let mut out: Vec<Step> = Vec::with_capacity(word.len());
    for &step in &word.steps {
        match out.last() {
            Some(&top) if top.cancels(step) => {
                out.pop();
            }
            _ => out.push(step),
        }
    }
    Ok(ZigzagWord { steps: out })
}

/// Reduces by repeated single rewrites under `strategy`, returning the normal
/// form and the number of rewrite steps taken.
pub fn reduce_with(
    span: &FiniteSpan,
    word: &ZigzagWord,
    strategy: Strategy,
) -> Result<(ZigzagWord, usize), WordError> {
    check(span, word)?;
    let mut steps = word.steps.clone();
    let mut rewrites = 0;
    loop {
        let mut redexes =
            (0..steps.len().saturating_sub(1)).filter(|&i| steps[i].cancels(steps[i + 1]));
        let found = match strategy {
            Strategy::Leftmost => redexes.next(),
            Strategy::Rightmost => redexes.next_back(),
        };
        let Some(i) = found else { break };
        steps.drain(i..i + 2);
        rewrites += 1;
    }
    Ok((ZigzagWord { steps }, rewrites))
}

/// `reduce(w · Fwd(s))`. Requires `endpoint(w) = f(s)`.
pub fn concat_fwd(
    span: &FiniteSpan,
    word: &ZigzagWord,
    s: EdgeId,
) -> Result<ZigzagWord, WordError> {
    append(span, word, Step::fwd(s))
}

/// `reduce(w · Bwd(s))`. Requires `endpoint(w) = g(s)`.
pub fn concat_bwd(
    span: &FiniteSpan,
    word: &ZigzagWord,
    s: EdgeId,
) -> Result<ZigzagWord, WordError> {
    append(span, word, Step::bwd(s))
}

/// Transport in the canonical descent data: `p ↦ p · glue(s)`.
pub fn transport_glue(
    span: &FiniteSpan,
    word: &ZigzagWord,
    s: EdgeId,
) -> Result<ZigzagWord, WordError> {
    concat_fwd(span, word, s)
}

fn append(span: &FiniteSpan, word: &ZigzagWord, step: Step) -> Result<ZigzagWord, WordError> {
    if step.edge.0 >= span.edge_count() {
        return Err(WordError::UnknownEdge(step.edge.0));
    }
    let start = match step.dir {
        Dir::Fwd => Vertex::A(span.left(step.edge)),
        Dir::Bwd => Vertex::B(span.right(step.edge)),
    };
    if endpoint(span, word) != start {
        return Err(WordError::EndpointMismatch { index: word.len() });
    }
    let mut steps = word.steps.clone();
    match steps.last() {
        Some(&top) if top.cancels(step) => {
            steps.pop();
        }
        _ => steps.push(step),
    }
    Ok(ZigzagWord { steps })
}

/// Least stage containing the word: `⌈len / 2⌉`. A-words of length `2n` and
/// B-words of length `2n - 1` first appear at stage `n`.
pub fn stage_of(word: &ZigzagWord) -> usize {
    word.len().div_ceil(2)
}

/// All reduced words of length `<= max_len`, for every endpoint, in
/// canonical order.
pub fn enumerate_all(span: &FiniteSpan, max_len: usize) -> Vec<ZigzagWord> {
    let mut out = vec![ZigzagWord::refl()];
    let mut frontier = vec![ZigzagWord::refl()];
    for _ in 0..max_len {
        let mut next = Vec::new();
        for word in &frontier {
            for step in extensions(span, word) {
                next.push(word.pushed(step));
            }
        }
        if next.is_empty() {
            break;
        }
        out.extend(next.iter().cloned());
        frontier = next;
    }
    out
}

/// Reduced words from `a0` to `to` of length `<= max_len`, in canonical
/// order.
pub fn enumerate(span: &FiniteSpan, to: Vertex, max_len: usize) -> Vec<ZigzagWord> {
    enumerate_all(span, max_len)
        .into_iter()
        .filter(|w| endpoint(span, w) == to)
        .collect()
}

/// Non-cancelling one-step extensions in canonical order. Extending a sorted
/// level in this order keeps the next level sorted.
fn extensions<'a>(span: &'a FiniteSpan, word: &'a ZigzagWord) -> impl Iterator<Item = Step> + 'a {
    let last = word.last();
    let candidates: Box<dyn Iterator<Item = Step>> = match endpoint(span, word) {
        Vertex::A(a) => Box::new(span.edges_out_of_a(a).iter().map(|&s| Step::fwd(s))),
        Vertex::B(b) => Box::new(span.edges_into_b(b).iter().map(|&s| Step::bwd(s))),
    };
    candidates.filter(move |&step| last.is_none_or(|l| !l.cancels(step)))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn circle() -> FiniteSpan {
        FiniteSpan::parse("A a\nB b\nS s a b\nS t a b\nbase a").unwrap()
    }

    fn interval() -> FiniteSpan {
        FiniteSpan::parse("A a\nB b\nS s a b\nbase a").unwrap()
    }

    fn theta() -> FiniteSpan {
        FiniteSpan::parse("A a\nB b\nS s a b\nS t a b\nS u a b\nbase a").unwrap()
    }

    fn w(span: &FiniteSpan, text: &str) -> ZigzagWord {
        parse_word(span, text).unwrap()
    }

    #[test]
    fn reduce_examples() {
        let c = circle();
        assert_eq!(reduce(&c, &w(&c, ">s <s")).unwrap(), ZigzagWord::refl());
        assert_eq!(
            reduce(&c, &w(&c, ">s <t >t <s")).unwrap(),
            ZigzagWord::refl()
        );
        let r = w(&c, ">s <t >s");
        assert_eq!(reduce(&c, &r).unwrap(), r);
    }

    #[test]
    fn malformed_words_are_rejected() {
        let c = circle();
        let bad = ZigzagWord::from_steps_unchecked(vec![Step::bwd(EdgeId(0))]);
        assert_eq!(reduce(&c, &bad), Err(WordError::Alternation { index: 0 }));
        let bad =
            ZigzagWord::from_steps_unchecked(vec![Step::fwd(EdgeId(0)), Step::fwd(EdgeId(1))]);
        assert_eq!(reduce(&c, &bad), Err(WordError::Alternation { index: 1 }));

        let tree =
            FiniteSpan::parse("A a0 a1\nB b0 b1\nS s0 a0 b0\nS s1 a1 b0\nS s2 a1 b1\nbase a0")
                .unwrap();
        // s2 does not touch b0.
        let bad =
            ZigzagWord::from_steps_unchecked(vec![Step::fwd(EdgeId(0)), Step::bwd(EdgeId(2))]);
        assert_eq!(
            reduce(&tree, &bad),
            Err(WordError::EndpointMismatch { index: 1 })
        );
        let bad = ZigzagWord::from_steps_unchecked(vec![Step::fwd(EdgeId(1))]);
        assert_eq!(
            check(&tree, &bad),
            Err(WordError::EndpointMismatch { index: 0 })
        );
        assert!(matches!(parse_word(&c, "s"), Err(WordError::BadToken(_))));
        assert!(matches!(
            parse_word(&c, ">q"),
            Err(WordError::UnknownEdgeLabel(_))
        ));
    }

    #[test]
    fn endpoints() {
        let c = circle();
        assert_eq!(endpoint(&c, &ZigzagWord::refl()), Vertex::A(0));
        assert_eq!(endpoint(&c, &w(&c, ">s")), Vertex::B(0));
        assert_eq!(endpoint(&c, &w(&c, ">s <t")), Vertex::A(0));
    }

    #[test]
    fn concatenation_examples() {
        let c = circle();
        let (s, t) = (EdgeId(0), EdgeId(1));
        assert_eq!(concat_fwd(&c, &ZigzagWord::refl(), s).unwrap(), w(&c, ">s"));
        assert_eq!(concat_fwd(&c, &w(&c, ">s <t"), t).unwrap(), w(&c, ">s"));
        assert_eq!(
            concat_fwd(&c, &w(&c, ">s <t"), s).unwrap(),
            w(&c, ">s <t >s")
        );
        assert_eq!(concat_bwd(&c, &w(&c, ">s"), s).unwrap(), ZigzagWord::refl());
        assert_eq!(concat_bwd(&c, &w(&c, ">s"), t).unwrap(), w(&c, ">s <t"));
        assert_eq!(transport_glue(&c, &w(&c, ">s <t"), t).unwrap(), w(&c, ">s"));

        let i = interval();
        assert_eq!(
            concat_bwd(&i, &w(&i, ">s"), EdgeId(0)).unwrap(),
            ZigzagWord::refl()
        );
        assert!(matches!(
            concat_fwd(&c, &w(&c, ">s"), s),
            Err(WordError::EndpointMismatch { .. })
        ));
    }

    #[test]
    fn stages_of_words() {
        let c = circle();
        assert_eq!(stage_of(&ZigzagWord::refl()), 0);
        assert_eq!(stage_of(&w(&c, ">s")), 1);
        assert_eq!(stage_of(&w(&c, ">s <t")), 1);
        assert_eq!(stage_of(&w(&c, ">s <t >s")), 2);
    }

    #[test]
    fn enumerate_examples() {
        let c = circle();
        let words: Vec<String> = enumerate(&c, Vertex::A(0), 4)
            .iter()
            .map(|x| x.display(&c).to_string())
            .collect();
        assert_eq!(
            words,
            ["refl", ">s <t", ">t <s", ">s <t >s <t", ">t <s >t <s"]
        );

        assert_eq!(
            enumerate(&interval(), Vertex::A(0), 10),
            vec![ZigzagWord::refl()]
        );
        assert_eq!(enumerate(&theta(), Vertex::A(0), 2).len(), 7);
    }

    #[test]
    fn canonical_order_is_length_first() {
        let c = circle();
        let mut ws = [
            w(&c, ">t <s >t"),
            w(&c, ">t"),
            ZigzagWord::refl(),
            w(&c, ">s"),
        ];
        ws.sort();
        let shown: Vec<String> = ws.iter().map(|x| x.display(&c).to_string()).collect();
        assert_eq!(shown, ["refl", ">s", ">t", ">t <s >t"]);
    }

    #[test]
    fn strategies_count_rewrites() {
        let c = circle();
        let word = w(&c, ">s <t >t <s >s");
        let (left, n_left) = reduce_with(&c, &word, Strategy::Leftmost).unwrap();
        let (right, n_right) = reduce_with(&c, &word, Strategy::Rightmost).unwrap();
        assert_eq!(left, w(&c, ">s"));
        assert_eq!(left, right);
        assert_eq!((n_left, n_right), (2, 2));
    }
}
