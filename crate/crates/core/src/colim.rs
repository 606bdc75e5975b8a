//! Sequential diagrams of finite sets truncated at a bound `N`, their direct
//! limits, morphisms, and zigzags.
//!
//! At this level every homotopy of the general theory is an equality of
//! functions, so squares and triangles are checked pointwise when a value is
//! constructed and are never stored.

use serde::Serialize;
use thiserror::Error;

use crate::quotient::{Partition, UnionFind};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ColimError {
    #[error("diagram has {sizes} sets but {maps} maps")]
    Shape { sizes: usize, maps: usize },
    #[error("map at level {level} is not a total function into the next set")]
    MapOutOfRange { level: usize },
    #[error("truncation bounds differ: {0} vs {1}")]
    BoundMismatch(usize, usize),
    #[error("square fails at level {level}, element {element}")]
    SquareViolated { level: usize, element: usize },
    #[error("upper triangle fails at level {level}, element {element}")]
    UpperTriangle { level: usize, element: usize },
    #[error("lower triangle fails at level {level}, element {element}")]
    LowerTriangle { level: usize, element: usize },
    #[error("cannot shift a diagram with bound 0")]
    EmptyShift,
    #[error("truncation bound {0} is too small to verify any class (need at least 2)")]
    TruncationTooSmall(usize),
    #[error("induced map is not well defined on class {class}")]
    NotWellDefined { class: usize },
}

/// `A_0 -> A_1 -> ... -> A_N`, with `A_n = {0, .., sizes[n] - 1}`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct FinSeqDiagram {
    sizes: Vec<usize>,
    maps: Vec<Vec<usize>>,
}

impl FinSeqDiagram {
    pub fn new(sizes: Vec<usize>, maps: Vec<Vec<usize>>) -> Result<Self, ColimError> {
        if sizes.is_empty() || maps.len() + 1 != sizes.len() {
            return Err(ColimError::Shape {
                sizes: sizes.len(),
                maps: maps.len(),
            });
        }
        for (level, map) in maps.iter().enumerate() {
            check_function(map, sizes[level], sizes[level + 1])
                .map_err(|_| ColimError::MapOutOfRange { level })?;
        }
        Ok(Self { sizes, maps })
    }

    /// The constant diagram on `size` elements with identity maps.
    pub fn constant(size: usize, bound: usize) -> Self {
        Self {
            sizes: vec![size; bound + 1],
            maps: vec![(0..size).collect(); bound],
        }
    }

    /// The truncation bound `N`.
    pub fn bound(&self) -> usize {
        self.maps.len()
    }

    pub fn size(&self, n: usize) -> usize {
        self.sizes[n]
    }

    pub fn sizes(&self) -> &[usize] {
        &self.sizes
    }

    pub fn map(&self, n: usize) -> &[usize] {
        &self.maps[n]
    }

    /// `A_{•+1}`: drops the first set and map.
    pub fn shift(&self) -> Result<Self, ColimError> {
        if self.bound() == 0 {
            return Err(ColimError::EmptyShift);
        }
        Ok(Self {
            sizes: self.sizes[1..].to_vec(),
            maps: self.maps[1..].to_vec(),
        })
    }

    /// Keeps levels `0..=bound`.
    pub fn truncate(&self, bound: usize) -> Self {
        assert!(bound <= self.bound());
        Self {
            sizes: self.sizes[..=bound].to_vec(),
            maps: self.maps[..bound].to_vec(),
        }
    }

    fn offset(&self, n: usize) -> usize {
        self.sizes[..n].iter().sum()
    }
}

fn check_function(map: &[usize], dom: usize, cod: usize) -> Result<(), ()> {
    if map.len() == dom && map.iter().all(|&y| y < cod) {
        Ok(())
    } else {
        Err(())
    }
}

/// The direct limit of a truncated diagram: `⊔ A_n` modulo `x ~ a_n(x)`.
///
/// Elements are flattened stage-major, so the least element of a class is the
/// least `(stage, element)` pair.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct QuotientSet {
    offsets: Vec<usize>,
    partition: Partition,
}

impl QuotientSet {
    pub fn class_count(&self) -> usize {
        self.partition.class_count()
    }

    /// `ι_n(x)`.
    pub fn class_of(&self, stage: usize, x: usize) -> usize {
        self.partition.class_of(self.offsets[stage] + x)
    }

    /// Least `(stage, element)` in the class.
    pub fn representative(&self, class: usize) -> (usize, usize) {
        self.unflatten(self.partition.representative(class))
    }

    pub fn members(&self, class: usize) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.partition.members(class).map(|x| self.unflatten(x))
    }

    fn unflatten(&self, flat: usize) -> (usize, usize) {
        let stage = self.offsets.partition_point(|&o| o <= flat) - 1;
        (stage, flat - self.offsets[stage])
    }
}

pub fn direct_limit(diagram: &FinSeqDiagram) -> QuotientSet {
    direct_limit_with_order(diagram, |pairs| pairs)
}

/// Builds the direct limit, letting the caller permute the order in which the
/// generating identifications are applied. The result does not depend on it.
pub fn direct_limit_with_order(
    diagram: &FinSeqDiagram,
    order: impl FnOnce(Vec<(usize, usize)>) -> Vec<(usize, usize)>,
) -> QuotientSet {
    let offsets: Vec<usize> = (0..diagram.sizes.len())
        .map(|n| diagram.offset(n))
        .collect();
    let total = diagram.sizes.iter().sum();
    let mut pairs = Vec::new();
    for (n, map) in diagram.maps.iter().enumerate() {
        for (x, &y) in map.iter().enumerate() {
            pairs.push((offsets[n] + x, offsets[n + 1] + y));
        }
    }
    let mut uf = UnionFind::new(total);
    for (x, y) in order(pairs) {
        uf.union(x, y);
    }
    QuotientSet {
        offsets,
        partition: uf.seal(),
    }
}

/// A morphism of truncated diagrams `h_n : A_n -> B_n` with
/// `b_n ∘ h_n = h_{n+1} ∘ a_n`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SeqMorphism {
    dom: FinSeqDiagram,
    cod: FinSeqDiagram,
    levels: Vec<Vec<usize>>,
}

impl SeqMorphism {
    pub fn new(
        dom: FinSeqDiagram,
        cod: FinSeqDiagram,
        levels: Vec<Vec<usize>>,
    ) -> Result<Self, ColimError> {
        if dom.bound() != cod.bound() {
            return Err(ColimError::BoundMismatch(dom.bound(), cod.bound()));
        }
        if levels.len() != dom.bound() + 1 {
            return Err(ColimError::Shape {
                sizes: dom.bound() + 1,
                maps: levels.len(),
            });
        }
        for (level, h) in levels.iter().enumerate() {
            check_function(h, dom.size(level), cod.size(level))
                .map_err(|_| ColimError::MapOutOfRange { level })?;
        }
        for n in 0..dom.bound() {
            for x in 0..dom.size(n) {
                if cod.map(n)[levels[n][x]] != levels[n + 1][dom.map(n)[x]] {
                    return Err(ColimError::SquareViolated {
                        level: n,
                        element: x,
                    });
                }
            }
        }
        Ok(Self { dom, cod, levels })
    }

    pub fn identity(diagram: &FinSeqDiagram) -> Self {
        let levels = diagram.sizes.iter().map(|&k| (0..k).collect()).collect();
        Self {
            dom: diagram.clone(),
            cod: diagram.clone(),
            levels,
        }
    }

    pub fn dom(&self) -> &FinSeqDiagram {
        &self.dom
    }

    pub fn cod(&self) -> &FinSeqDiagram {
        &self.cod
    }

    pub fn level(&self, n: usize) -> &[usize] {
        &self.levels[n]
    }

    /// `self ∘ first`.
    pub fn after(&self, first: &SeqMorphism) -> Result<SeqMorphism, ColimError> {
        if first.cod != self.dom {
            return Err(ColimError::BoundMismatch(
                first.cod.bound(),
                self.dom.bound(),
            ));
        }
        let levels = first
            .levels
            .iter()
            .zip(&self.levels)
            .map(|(h1, h2)| h1.iter().map(|&y| h2[y]).collect())
            .collect();
        SeqMorphism::new(first.dom.clone(), self.cod.clone(), levels)
    }
}

/// The induced map of direct limits, as a table from domain classes to
/// codomain classes. Satisfies `f∞ ∘ ι_n = ι_n ∘ h_n`.
pub fn map_of_limits(
    m: &SeqMorphism,
    dom_limit: &QuotientSet,
    cod_limit: &QuotientSet,
) -> Result<Vec<usize>, ColimError> {
    let mut table = Vec::with_capacity(dom_limit.class_count());
    for class in 0..dom_limit.class_count() {
        let (n, x) = dom_limit.representative(class);
        let image = cod_limit.class_of(n, m.levels[n][x]);
        if dom_limit
            .members(class)
            .any(|(k, y)| cod_limit.class_of(k, m.levels[k][y]) != image)
        {
            return Err(ColimError::NotWellDefined { class });
        }
        table.push(image);
    }
    Ok(table)
}

/// Interleaved maps `fwd_n : A_n -> B_n` and `bwd_n : B_n -> A_{n+1}` with
/// `a_n = bwd_n ∘ fwd_n` and `b_n = fwd_{n+1} ∘ bwd_n`.
///
/// Both diagrams share the bound `N`; there are `N + 1` forward maps and `N`
/// backward maps.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SeqZigzag {
    dom: FinSeqDiagram,
    cod: FinSeqDiagram,
    fwd: Vec<Vec<usize>>,
    bwd: Vec<Vec<usize>>,
}

impl SeqZigzag {
    pub fn new(
        dom: FinSeqDiagram,
        cod: FinSeqDiagram,
        fwd: Vec<Vec<usize>>,
        bwd: Vec<Vec<usize>>,
    ) -> Result<Self, ColimError> {
        let bound = dom.bound();
        if cod.bound() != bound {
            return Err(ColimError::BoundMismatch(bound, cod.bound()));
        }
        if fwd.len() != bound + 1 || bwd.len() != bound {
            return Err(ColimError::Shape {
                sizes: fwd.len(),
                maps: bwd.len(),
            });
        }
        for (level, f) in fwd.iter().enumerate() {
            check_function(f, dom.size(level), cod.size(level))
                .map_err(|_| ColimError::MapOutOfRange { level })?;
        }
        for (level, g) in bwd.iter().enumerate() {
            check_function(g, cod.size(level), dom.size(level + 1))
                .map_err(|_| ColimError::MapOutOfRange { level })?;
        }
        for n in 0..bound {
            for x in 0..dom.size(n) {
                if dom.map(n)[x] != bwd[n][fwd[n][x]] {
                    return Err(ColimError::UpperTriangle {
                        level: n,
                        element: x,
                    });
                }
            }
            for y in 0..cod.size(n) {
                if cod.map(n)[y] != fwd[n + 1][bwd[n][y]] {
                    return Err(ColimError::LowerTriangle {
                        level: n,
                        element: y,
                    });
                }
            }
        }
        Ok(Self { dom, cod, fwd, bwd })
    }

    pub fn identity(diagram: &FinSeqDiagram) -> Self {
        let ids: Vec<Vec<usize>> = diagram.sizes.iter().map(|&k| (0..k).collect()).collect();
        let bwd = diagram.maps.clone();
        Self {
            dom: diagram.clone(),
            cod: diagram.clone(),
            fwd: ids,
            bwd,
        }
    }

    pub fn bound(&self) -> usize {
        self.dom.bound()
    }

    pub fn dom(&self) -> &FinSeqDiagram {
        &self.dom
    }

    pub fn cod(&self) -> &FinSeqDiagram {
        &self.cod
    }

    pub fn fwd(&self, n: usize) -> &[usize] {
        &self.fwd[n]
    }

    pub fn bwd(&self, n: usize) -> &[usize] {
        &self.bwd[n]
    }

    /// Forgets the first triangle and turns the zigzag upside down: a zigzag
    /// from `B_•` to `A_{•+1}` with bound `N - 1`.
    pub fn half_shift(&self) -> Result<SeqZigzag, ColimError> {
        let bound = self.bound();
        if bound == 0 {
            return Err(ColimError::EmptyShift);
        }
        let dom = self.cod.truncate(bound - 1);
        let cod = self.dom.shift()?;
        let fwd = self.bwd.clone();
        let bwd = self.fwd[1..bound].to_vec();
        SeqZigzag::new(dom, cod, fwd, bwd)
    }

    /// The morphism `fwd_• : A_• -> B_•`. Its square follows from the two
    /// triangles and is rechecked here.
    pub fn to_morphism(&self) -> SeqMorphism {
        SeqMorphism::new(self.dom.clone(), self.cod.clone(), self.fwd.clone())
            .expect("zigzag triangles imply the square")
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub enum EquivalenceFailure {
    /// `g∞(f∞(c)) ≠ c` for a domain class.
    BackAfterForth { class: usize },
    /// `f∞(g∞(c)) ≠ c` for a codomain class.
    ForthAfterBack { class: usize },
    /// `g∞` undefined on a truncation-safe codomain class.
    Undefined { class: usize },
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct EquivalenceReport {
    /// `f∞` as a table from domain classes to codomain classes.
    pub forward: Vec<usize>,
    /// `g∞`, defined on codomain classes with a member below stage `N`.
    pub backward: Vec<Option<usize>>,
    pub checked_dom: usize,
    pub checked_cod: usize,
    pub failures: Vec<EquivalenceFailure>,
}

impl EquivalenceReport {
    pub fn is_ok(&self) -> bool {
        self.failures.is_empty()
    }
}

/// Builds `f∞` from the zigzag and `g∞` from its half-shift, then checks
/// that both composites are identities on every class whose representative
/// sits below stage `N - 1`.
pub fn zigzag_equivalence(z: &SeqZigzag) -> Result<EquivalenceReport, ColimError> {
    let bound = z.bound();
    if bound < 2 {
        return Err(ColimError::TruncationTooSmall(bound));
    }
    let dom_limit = direct_limit(&z.dom);
    let cod_limit = direct_limit(&z.cod);
    let forward = map_of_limits(&z.to_morphism(), &dom_limit, &cod_limit)?;

    // g∞: B_• (truncated to N-1) -> A_{•+1}, then the shift identification
    // (k, x) ↦ (k + 1, x) back into A∞.
    let half = z.half_shift()?;
    let half_dom_limit = direct_limit(half.dom());
    let half_cod_limit = direct_limit(half.cod());
    let half_map = map_of_limits(&half.to_morphism(), &half_dom_limit, &half_cod_limit)?;
    let backward: Vec<Option<usize>> = (0..cod_limit.class_count())
        .map(|class| {
            let (n, y) = cod_limit.representative(class);
            (n < bound).then(|| {
                let (k, x) = half_cod_limit.representative(half_map[half_dom_limit.class_of(n, y)]);
                dom_limit.class_of(k + 1, x)
            })
        })
        .collect();

    let mut failures = Vec::new();
    let mut checked_dom = 0;
    for class in 0..dom_limit.class_count() {
        if dom_limit.representative(class).0 + 1 >= bound {
            continue;
        }
        checked_dom += 1;
        match backward[forward[class]] {
            Some(back) if back == class => {}
            Some(_) => failures.push(EquivalenceFailure::BackAfterForth { class }),
            None => failures.push(EquivalenceFailure::Undefined {
                class: forward[class],
            }),
        }
    }
    let mut checked_cod = 0;
    for (class, &back) in backward.iter().enumerate() {
        if cod_limit.representative(class).0 + 1 >= bound {
            continue;
        }
        checked_cod += 1;
        match back {
            Some(back) if forward[back] == class => {}
            Some(_) => failures.push(EquivalenceFailure::ForthAfterBack { class }),
            None => failures.push(EquivalenceFailure::Undefined { class }),
        }
    }
    Ok(EquivalenceReport {
        forward,
        backward,
        checked_dom,
        checked_cod,
        failures,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn inclusions() -> FinSeqDiagram {
        FinSeqDiagram::new(vec![1, 2, 3], vec![vec![0], vec![0, 1]]).unwrap()
    }

    #[test]
    fn direct_limit_examples() {
        assert_eq!(
            direct_limit(&FinSeqDiagram::constant(2, 3)).class_count(),
            2
        );
        let lim = direct_limit(&inclusions());
        assert_eq!(lim.class_count(), 3);
        assert_eq!(lim.representative(lim.class_of(2, 1)), (1, 1));
        assert_eq!(lim.representative(lim.class_of(2, 2)), (2, 2));
    }

    #[test]
    fn diagram_validation() {
        assert!(matches!(
            FinSeqDiagram::new(vec![1, 1], vec![vec![1]]),
            Err(ColimError::MapOutOfRange { level: 0 })
        ));
        assert!(matches!(
            FinSeqDiagram::new(vec![1, 1], vec![]),
            Err(ColimError::Shape { .. })
        ));
    }

    #[test]
    fn identity_and_constant_maps() {
        let d = inclusions();
        let lim = direct_limit(&d);
        let id = map_of_limits(&SeqMorphism::identity(&d), &lim, &lim).unwrap();
        assert_eq!(id, vec![0, 1, 2]);

        let point = FinSeqDiagram::constant(1, 2);
        let to_point = SeqMorphism::new(
            d.clone(),
            point.clone(),
            vec![vec![0], vec![0; 2], vec![0; 3]],
        )
        .unwrap();
        let pl = direct_limit(&point);
        assert_eq!(map_of_limits(&to_point, &lim, &pl).unwrap(), vec![0, 0, 0]);
    }

    #[test]
    fn squares_are_checked() {
        let d = inclusions();
        // Sends the stage-0 point to 1 at stage 1, but a_0(0) = 0 maps to 0.
        let err = SeqMorphism::new(
            d.clone(),
            d.clone(),
            vec![vec![0], vec![1, 1], vec![0, 1, 2]],
        );
        assert!(matches!(
            err,
            Err(ColimError::SquareViolated { level: 0, .. })
        ));
    }

    #[test]
    fn half_shift_of_identity_is_identity() {
        let d = FinSeqDiagram::constant(3, 4);
        let z = SeqZigzag::identity(&d);
        let h = z.half_shift().unwrap();
        assert_eq!(h, SeqZigzag::identity(&FinSeqDiagram::constant(3, 3)));
        let hh = h.half_shift().unwrap();
        assert_eq!(hh.bound(), 2);
        for n in 0..=2 {
            assert_eq!(hh.fwd(n), z.fwd(n + 1));
        }
    }

    #[test]
    fn identity_zigzag_equivalence() {
        let z = SeqZigzag::identity(&FinSeqDiagram::constant(2, 3));
        let report = zigzag_equivalence(&z).unwrap();
        assert!(report.is_ok());
        assert_eq!(report.forward, vec![0, 1]);
        assert_eq!(report.backward, vec![Some(0), Some(1)]);
        assert_eq!((report.checked_dom, report.checked_cod), (2, 2));

        let small = SeqZigzag::identity(&FinSeqDiagram::constant(2, 1));
        assert_eq!(
            zigzag_equivalence(&small),
            Err(ColimError::TruncationTooSmall(1))
        );
    }

    #[test]
    fn broken_triangles_are_rejected() {
        let d = FinSeqDiagram::constant(2, 2);
        let swap = vec![1, 0];
        let err = SeqZigzag::new(
            d.clone(),
            d.clone(),
            vec![swap.clone(), swap.clone(), swap.clone()],
            vec![vec![0, 1], vec![0, 1]],
        );
        assert!(matches!(
            err,
            Err(ColimError::UpperTriangle { level: 0, .. })
        ));
    }

    #[test]
    fn shift_invariance() {
        let d = inclusions();
        let lim = direct_limit(&d);
        let shifted = direct_limit(&d.shift().unwrap());
        assert_eq!(lim.class_count(), shifted.class_count());
        // ι_{n+1} identifies shifted classes with original classes bijectively.
        let mut image: Vec<usize> = (0..shifted.class_count())
            .map(|c| {
                let (n, x) = shifted.representative(c);
                lim.class_of(n + 1, x)
            })
            .collect();
        image.sort();
        image.dedup();
        assert_eq!(image.len(), lim.class_count());
    }
}
