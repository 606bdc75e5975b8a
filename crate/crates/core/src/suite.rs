//! The aggregated invariant suite behind `zigzag check`.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::colim::zigzag_equivalence;
use crate::descent::{
    check_computation, elim_section, encode_decode, uniqueness_check, DescentFamily, TableFamily,
};
use crate::gen;
use crate::oracle::{compare_words_walks, pi1_rank};
use crate::span::{component_of, FiniteSpan, Vertex};
use crate::stages::{build_stages, colimit_agreement, cycle_diagnostic, stage_word_bijection};
use crate::words::{self, Strategy};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct CheckOptions {
    pub seed: u64,
    /// Word-length window for enumeration and oracle comparisons.
    pub max_len: usize,
    /// Highest stage for the stage/word bijection.
    pub stages: usize,
    /// Bound `L` of the descent families.
    pub family_bound: usize,
    /// Random unreduced words for the confluence check.
    pub random_words: usize,
    pub oracle: bool,
}

impl Default for CheckOptions {
    fn default() -> Self {
        Self {
            seed: 0,
            max_len: 8,
            stages: 4,
            family_bound: 6,
            random_words: 1000,
            oracle: false,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CheckResult {
    pub name: String,
    pub passed: bool,
    pub detail: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SuiteReport {
    pub results: Vec<CheckResult>,
}

impl SuiteReport {
    pub fn passed(&self) -> bool {
        self.results.iter().all(|r| r.passed)
    }
}

fn result(name: &str, passed: bool, detail: impl Into<String>) -> CheckResult {
    CheckResult {
        name: name.to_string(),
        passed,
        detail: detail.into(),
    }
}

pub fn run_suite(span: &FiniteSpan, opts: &CheckOptions) -> SuiteReport {
    let mut rng = ChaCha8Rng::seed_from_u64(opts.seed);
    let mut results = vec![
        round_trip(span),
        confluence(span, opts, &mut rng),
        mutual_inverse(span, opts.max_len),
        enumeration_monotone(span, opts.max_len),
        stage_bijection(span, opts.stages),
        colimit(span, opts.stages),
        zigzags(span, opts.stages),
    ];
    results.extend(identity_families(span, opts.family_bound, &mut rng));
    let ed = encode_decode(span, opts.family_bound);
    results.push(result(
        "identity.encode_decode",
        ed.is_ok(),
        match &ed.error {
            Some(e) => e.clone(),
            None => format!(
                "{} window-safe words, {} identity and {} naturality failures",
                ed.checked,
                ed.identity_failures.len(),
                ed.naturality_failures.len()
            ),
        },
    ));
    if opts.oracle {
        results.push(oracle_walks(span, opts.max_len));
        results.push(oracle_rank(span, opts.max_len));
    }
    SuiteReport { results }
}

fn round_trip(span: &FiniteSpan) -> CheckResult {
    let text = span.to_string();
    let ok = FiniteSpan::parse(&text).as_ref() == Ok(span);
    result("span.round_trip", ok, "parse(serialize(span)) = span")
}

fn confluence(span: &FiniteSpan, opts: &CheckOptions, rng: &mut impl Rng) -> CheckResult {
    for i in 0..opts.random_words {
        let len = rng.gen_range(0..=2 * opts.max_len);
        let w = gen::random_word(span, rng, len);
        let stack = words::reduce(span, &w).expect("generated words are well formed");
        let (left, n_left) = words::reduce_with(span, &w, Strategy::Leftmost).expect("well formed");
        let (right, n_right) =
            words::reduce_with(span, &w, Strategy::Rightmost).expect("well formed");
        let same_end = words::endpoint(span, &stack) == words::endpoint(span, &w);
        if stack != left || stack != right || !same_end {
            return result(
                "words.confluence",
                false,
                format!("word #{i} has two normal forms"),
            );
        }
        if n_left > w.len() / 2 || n_right > w.len() / 2 || !stack.is_reduced() {
            return result(
                "words.confluence",
                false,
                format!("word #{i} took too many rewrites"),
            );
        }
    }
    result(
        "words.confluence",
        true,
        format!("{} random words, both strategies agree", opts.random_words),
    )
}

fn mutual_inverse(span: &FiniteSpan, max_len: usize) -> CheckResult {
    let mut checked = 0;
    for w in words::enumerate_all(span, max_len) {
        match words::endpoint(span, &w) {
            Vertex::A(a) => {
                for &s in span.edges_out_of_a(a) {
                    checked += 1;
                    let there = words::concat_fwd(span, &w, s).expect("w ends at f(s)");
                    if words::concat_bwd(span, &there, s).as_ref() != Ok(&w) {
                        return result("words.mutual_inverse", false, format!("{w:?} via {s:?}"));
                    }
                }
            }
            Vertex::B(b) => {
                for &s in span.edges_into_b(b) {
                    checked += 1;
                    let there = words::concat_bwd(span, &w, s).expect("w ends at g(s)");
                    if words::concat_fwd(span, &there, s).as_ref() != Ok(&w) {
                        return result("words.mutual_inverse", false, format!("{w:?} via {s:?}"));
                    }
                }
            }
        }
    }
    result(
        "words.mutual_inverse",
        true,
        format!("{checked} round trips"),
    )
}

fn enumeration_monotone(span: &FiniteSpan, max_len: usize) -> CheckResult {
    for v in span.vertices() {
        for len in 0..max_len {
            let small = words::enumerate(span, v, len);
            let big = words::enumerate(span, v, len + 1);
            let extra: Vec<_> = big.iter().filter(|w| !small.contains(w)).collect();
            let nested = small.iter().all(|w| big.contains(w));
            if !nested || extra.iter().any(|w| w.len() != len + 1) {
                return result(
                    "words.enumeration_monotone",
                    false,
                    format!("{v:?} at length {len}"),
                );
            }
        }
    }
    result(
        "words.enumeration_monotone",
        true,
        format!("lengths 0..={max_len}"),
    )
}

fn stage_bijection(span: &FiniteSpan, n: usize) -> CheckResult {
    let stages = build_stages(span, n);
    let report = stage_word_bijection(&stages, n);
    let cycles: usize = (0..=n)
        .flat_map(|k| cycle_diagnostic(&stages, k))
        .map(|c| c.cycles)
        .sum();
    let detail = match report.mismatches.first() {
        Some(m) => format!("{} mismatches, first: {m}", report.mismatches.len()),
        None => {
            format!("stages 0..={n} biject with words, naturality holds, {cycles} gluing cycles")
        }
    };
    result("stages.bijection", report.is_ok(), detail)
}

fn colimit(span: &FiniteSpan, n: usize) -> CheckResult {
    let stages = build_stages(span, n);
    let mismatches = colimit_agreement(&stages);
    let detail = match mismatches.first() {
        Some(m) => m.to_string(),
        None => format!("direct limits at N={n} match words"),
    };
    result("stages.colimit", mismatches.is_empty(), detail)
}

fn zigzags(span: &FiniteSpan, n: usize) -> CheckResult {
    let name = "stages.zigzag_equivalence";
    if span.edge_count() == 0 {
        return result(name, true, "no edges");
    }
    if n < 2 {
        return result(name, false, format!("need at least 2 stages, got {n}"));
    }
    let stages = build_stages(span, n + 1);
    let mut checked = 0;
    for s in span.edge_ids() {
        let report = stages.zigzag(s).and_then(|z| zigzag_equivalence(&z));
        match report {
            Ok(r) if r.is_ok() => checked += r.checked_dom + r.checked_cod,
            Ok(r) => {
                return result(
                    name,
                    false,
                    format!("edge {}: {:?}", span.edge_label(s), r.failures[0]),
                )
            }
            Err(e) => return result(name, false, format!("edge {}: {e}", span.edge_label(s))),
        }
    }
    result(
        name,
        true,
        format!("{checked} truncation-safe classes at N={n}"),
    )
}

fn identity_families(span: &FiniteSpan, bound: usize, rng: &mut impl Rng) -> Vec<CheckResult> {
    let families = [
        ("identity.trivial", TableFamily::trivial(span, bound), 0),
        ("identity.parity", TableFamily::parity(span, bound), 0),
        ("identity.winding", TableFamily::winding(span, bound), bound),
        (
            "identity.random",
            TableFamily::random(span, bound, 5, rng),
            0,
        ),
    ];
    families
        .into_iter()
        .map(|(name, fam, q0)| identity_family(span, name, &fam, q0))
        .collect()
}

/// Elimination, computation rules, uniqueness, and a corrupted-section
/// negative control for one table family.
pub fn identity_family(span: &FiniteSpan, name: &str, fam: &TableFamily, q0: usize) -> CheckResult {
    let sec = match elim_section(span, fam, q0) {
        Ok(sec) => sec,
        Err(e) => return result(name, false, e.to_string()),
    };
    let comp = check_computation(span, fam, &q0, &sec);
    if !comp.is_ok() {
        return result(name, false, format!("{:?}", comp.violations[0]));
    }
    match uniqueness_check(span, fam, &q0, &sec) {
        Ok(u) if u.is_ok() => {}
        Ok(u) => {
            return result(
                name,
                false,
                format!("differs at {:?}", u.first_disagreement),
            )
        }
        Err(e) => return result(name, false, e.to_string()),
    }
    // Negative control: flip the value over the first nonempty word.
    let mut control = "no corruptible word";
    if let Some((w, &v)) = sec.iter().nth(1) {
        let size = fam.fiber_size(w).unwrap_or(1);
        if size > 1 {
            let mut bad = sec.clone();
            bad.set(w.clone(), (v + 1) % size);
            let caught_comp = !check_computation(span, fam, &q0, &bad).is_ok();
            let caught_uniq = uniqueness_check(span, fam, &q0, &bad).is_ok_and(|u| !u.is_ok());
            if !(caught_comp && caught_uniq) {
                return result(name, false, "corrupted section went undetected");
            }
            control = "corruption detected";
        }
    }
    result(
        name,
        true,
        format!(
            "{} words, {} computation rules, {control}",
            sec.len(),
            comp.checked
        ),
    )
}

fn oracle_walks(span: &FiniteSpan, max_len: usize) -> CheckResult {
    let mut total = 0;
    for v in span.vertices() {
        let r = compare_words_walks(span, v, max_len);
        if let Some(m) = r.mismatch {
            return result(
                "oracle.words_walks",
                false,
                format!("{}: {m}", span.vertex_label(v)),
            );
        }
        total += r.words;
    }
    result(
        "oracle.words_walks",
        true,
        format!("{total} words match walks up to length {max_len}"),
    )
}

fn oracle_rank(span: &FiniteSpan, max_len: usize) -> CheckResult {
    let name = "oracle.pi1_rank";
    let graph = span.realize();
    let base = graph
        .id_of(Vertex::A(span.basepoint()))
        .expect("basepoint exists");
    let rank = pi1_rank(&graph, base);
    let component = component_of(&graph, base);
    let edges = graph
        .edges
        .iter()
        .filter(|(x, _)| component.contains(*x))
        .count();
    let formula = edges + 1 - component.vertices.len();
    if rank != formula {
        return result(
            name,
            false,
            format!("rank {rank} but |E|-|V|+1 = {formula}"),
        );
    }
    if rank == 0 {
        let window = max_len.max(component.vertices.len());
        for (id, &v) in graph.vertices.iter().enumerate() {
            let expected = usize::from(component.contains(id));
            let count = words::enumerate(span, v, window).len();
            if count != expected {
                return result(
                    name,
                    false,
                    format!("{} has {count} words in a tree", span.vertex_label(v)),
                );
            }
        }
    } else {
        let counts: Vec<usize> = (0..=max_len)
            .map(|l| words::enumerate_all(span, l).len())
            .collect();
        if counts.windows(2).any(|c| c[1] <= c[0]) {
            return result(name, false, format!("word counts stall: {counts:?}"));
        }
    }
    result(name, true, format!("rank {rank}"))
}

/// Checks a `DescentFamily` built by the caller, for tests that plug in
/// their own families.
pub fn family_passes<F: DescentFamily>(span: &FiniteSpan, fam: &F, q0: F::Elem) -> bool {
    let Ok(sec) = elim_section(span, fam, q0.clone()) else {
        return false;
    };
    check_computation(span, fam, &q0, &sec).is_ok()
        && uniqueness_check(span, fam, &q0, &sec).is_ok_and(|u| u.is_ok())
}
