//! Systems of equations `w_i(a_1..a_r, x_1..x_k) = 1` and their solvability
//! in finite groups (`∀ā ∃x̄`) or over them (inside a supplied overgroup).
//!
//! System files:
//!
//! ```text
//! constants 1; variables 1;
//! x1 x1 a1^-1
//! x1 x1 = a1      # same equation
//! ```

use std::collections::HashMap;

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::group::{FiniteGroup, GroupRef};
use crate::perm::{replicate, Permutation};
use crate::word::Word;

const CONSTANT_BLOCK: usize = 256;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Symbol {
    /// `a_{i+1}`.
    Constant(usize),
    /// `x_{i+1}`.
    Variable(usize),
}

/// Words over `a_1..a_r` (symbols `0..r`) and `x_1..x_k` (symbols `r..r+k`).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EquationSystem {
    constants: usize,
    variables: usize,
    words: Vec<Word>,
}

impl EquationSystem {
    pub fn new(constants: usize, variables: usize, words: Vec<Word>) -> Result<Self> {
        if words.is_empty() {
            return Err(Error::Precondition(
                "a system needs at least one word".into(),
            ));
        }
        if let Some(w) = words
            .iter()
            .find(|w| w.symbol_bound() > constants + variables)
        {
            return Err(Error::Precondition(format!(
                "word uses symbol #{} beyond the {} declared",
                w.symbol_bound() - 1,
                constants + variables
            )));
        }
        Ok(EquationSystem {
            constants,
            variables,
            words,
        })
    }

    pub fn constants(&self) -> usize {
        self.constants
    }

    pub fn variables(&self) -> usize {
        self.variables
    }

    pub fn words(&self) -> &[Word] {
        &self.words
    }

    pub fn symbol(&self, index: usize) -> Symbol {
        if index < self.constants {
            Symbol::Constant(index)
        } else {
            Symbol::Variable(index - self.constants)
        }
    }

    fn index_of(&self, s: Symbol) -> Option<usize> {
        match s {
            Symbol::Constant(i) if i < self.constants => Some(i),
            Symbol::Variable(i) if i < self.variables => Some(self.constants + i),
            _ => None,
        }
    }

    pub fn symbol_names(&self) -> Vec<String> {
        (1..=self.constants)
            .map(|i| format!("a{i}"))
            .chain((1..=self.variables).map(|i| format!("x{i}")))
            .collect()
    }

    fn lookup(&self, name: &str) -> Option<usize> {
        let (kind, index) = name.split_at_checked(1)?;
        if index.starts_with('0') || !index.bytes().all(|b| b.is_ascii_digit()) {
            return None;
        }
        let i: usize = index.parse().ok()?;
        let s = match kind {
            "a" => Symbol::Constant(i.checked_sub(1)?),
            "x" => Symbol::Variable(i.checked_sub(1)?),
            _ => return None,
        };
        self.index_of(s)
    }

    pub fn parse(text: &str) -> Result<Self> {
        let mut constants = None;
        let mut variables = None;
        let mut sys = EquationSystem {
            constants: 0,
            variables: 0,
            words: Vec::new(),
        };
        for (k, raw) in text.lines().enumerate() {
            let line_no = k + 1;
            let line = raw.split('#').next().unwrap_or("");
            let trimmed = line.trim_start();
            if trimmed.is_empty() {
                continue;
            }
            if trimmed.starts_with("constants") || trimmed.starts_with("variables") {
                if !sys.words.is_empty() {
                    return Err(Error::parse(
                        line_no,
                        1,
                        "declarations must precede the words",
                    ));
                }
                let mut offset = 0;
                for stmt in line.split(';') {
                    let col = offset + stmt.len() - stmt.trim_start().len() + 1;
                    offset += stmt.len() + 1;
                    let mut parts = stmt.split_whitespace();
                    let Some(key) = parts.next() else { continue };
                    let slot = match key {
                        "constants" => &mut constants,
                        "variables" => &mut variables,
                        other => {
                            return Err(Error::parse(
                                line_no,
                                col,
                                format!("unknown declaration `{other}`"),
                            ))
                        }
                    };
                    let value = parts
                        .next()
                        .and_then(|v| v.parse::<usize>().ok())
                        .filter(|_| parts.next().is_none())
                        .ok_or_else(|| {
                            Error::parse(line_no, col, format!("expected `{key} <count>`"))
                        })?;
                    if slot.replace(value).is_some() {
                        return Err(Error::parse(
                            line_no,
                            col,
                            format!("`{key}` declared twice"),
                        ));
                    }
                }
                sys.constants = constants.unwrap_or(0);
                sys.variables = variables.unwrap_or(0);
                continue;
            }
            if constants.is_none() || variables.is_none() {
                return Err(Error::parse(
                    line_no,
                    1,
                    "expected `constants r; variables k;` header",
                ));
            }
            let word = match line.split_once('=') {
                Some((lhs, rhs)) => {
                    let l =
                        Word::parse(lhs, |n| sys.lookup(n)).map_err(|e| e.at_line(line_no, 0))?;
                    let r = Word::parse(rhs, |n| sys.lookup(n))
                        .map_err(|e| e.at_line(line_no, lhs.len() + 1))?;
                    l.concat(&r.inverse())
                }
                None => Word::parse(line, |n| sys.lookup(n)).map_err(|e| e.at_line(line_no, 0))?,
            };
            sys.words.push(word);
        }
        if sys.words.is_empty() {
            return Err(Error::parse(
                text.lines().count().max(1),
                1,
                "system has no words",
            ));
        }
        Ok(sys)
    }

    pub fn to_text(&self) -> String {
        let names = self.symbol_names();
        let mut out = format!(
            "constants {}; variables {};\n",
            self.constants, self.variables
        );
        for w in &self.words {
            out.push_str(&w.display(&names).to_string());
            out.push('\n');
        }
        out
    }
}

/// Product of the assigned elements along `w`; the identity for the empty word.
pub fn evaluate_word(
    sys: &EquationSystem,
    w: &Word,
    assignment: &HashMap<Symbol, Permutation>,
) -> Result<Permutation> {
    let mut images = Vec::with_capacity(w.symbol_bound());
    let mut degree = None;
    for i in 0..w.symbol_bound() {
        let s = sys.symbol(i);
        let used = w.letters().iter().any(|l| l.symbol == i);
        match assignment.get(&s) {
            Some(p) => {
                if used {
                    match degree {
                        None => degree = Some(p.degree()),
                        Some(d) if d != p.degree() => {
                            return Err(Error::DegreeMismatch {
                                left: d,
                                right: p.degree(),
                            })
                        }
                        _ => {}
                    }
                }
                images.push(p.clone());
            }
            None if used => {
                let name = match s {
                    Symbol::Constant(i) => format!("a{}", i + 1),
                    Symbol::Variable(i) => format!("x{}", i + 1),
                };
                return Err(Error::UnassignedSymbol(name));
            }
            None => images.push(Permutation::identity(1)),
        }
    }
    let degree =
        degree.unwrap_or_else(|| assignment.values().next().map_or(1, Permutation::degree));
    w.evaluate(&images, degree)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Verdict {
    Solvable,
    Unsolvable,
    Unknown,
}

impl Verdict {
    pub fn as_str(self) -> &'static str {
        match self {
            Verdict::Solvable => "solvable",
            Verdict::Unsolvable => "unsolvable",
            Verdict::Unknown => "unknown",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SolveOptions {
    /// Upper bound on `|G|^r · |H|^k` assignments.
    pub budget: u64,
    /// Keep one witness `x̄` per constant tuple.
    pub witnesses: bool,
    /// Visit only constant tuples least in their simultaneous conjugation
    /// orbit; sound because `x̄ ↦ x̄^g` maps solutions for `ā` to solutions
    /// for `ā^g`.
    pub orbit_reduction: bool,
}

impl Default for SolveOptions {
    fn default() -> Self {
        SolveOptions {
            budget: 50_000_000,
            witnesses: false,
            orbit_reduction: false,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SolvabilityReport {
    pub group: String,
    /// Where the variables range, when it differs from `group`.
    pub overgroup: Option<String>,
    pub verdict: Verdict,
    /// Least constant tuple with no solution.
    pub counterexample: Option<Vec<Permutation>>,
    /// `(ā, least x̄)` per visited constant tuple, when requested.
    pub witnesses: Vec<(Vec<Permutation>, Vec<Permutation>)>,
    pub search_space: u128,
    pub budget: u64,
    pub constant_tuples_checked: u64,
    pub assignments_checked: u64,
    /// Number of constant orbit representatives, with orbit reduction on.
    pub orbit_representatives: Option<u64>,
}

fn decode(mut index: u64, base: usize, k: usize) -> Vec<usize> {
    let mut digits = vec![0; k];
    for d in digits.iter_mut().rev() {
        *d = (index % base as u64) as usize;
        index /= base as u64;
    }
    digits
}

fn checked_space(base: usize, exponent: usize) -> Option<u128> {
    (base as u128).checked_pow(exponent as u32)
}

/// Exhaustive `∀ā ∈ domain^r ∃x̄ ∈ H^k` where `domain` lists ids of `H`.
fn solve_core(
    h: &FiniteGroup,
    domain: &[usize],
    sys: &EquationSystem,
    options: SolveOptions,
    group_name: &str,
    overgroup: Option<String>,
) -> SolvabilityReport {
    let r = sys.constants;
    let k = sys.variables;
    let space = checked_space(domain.len(), r)
        .zip(checked_space(h.order(), k))
        .and_then(|(a, b)| a.checked_mul(b));
    let mut report = SolvabilityReport {
        group: group_name.to_owned(),
        overgroup,
        verdict: Verdict::Unknown,
        counterexample: None,
        witnesses: Vec::new(),
        search_space: space.unwrap_or(u128::MAX),
        budget: options.budget,
        constant_tuples_checked: 0,
        assignments_checked: 0,
        orbit_representatives: None,
    };
    if space.is_none_or(|s| s > options.budget as u128) {
        return report;
    }
    let constant_tuples = checked_space(domain.len(), r).expect("within budget") as u64;
    let variable_tuples = checked_space(h.order(), k).expect("within budget") as u64;
    let to_ids = |t: &[usize]| -> Vec<usize> { t.iter().map(|&i| domain[i]).collect() };

    let mut constants: Vec<u64> = (0..constant_tuples).collect();
    if options.orbit_reduction {
        constants.retain(|&c| {
            let ids = to_ids(&decode(c, domain.len(), r));
            (0..h.order()).all(|g| {
                let conj: Vec<usize> = ids.iter().map(|&a| h.conj(a, g)).collect();
                // only conjugates staying inside the domain are comparable
                let back: Option<Vec<usize>> = conj
                    .iter()
                    .map(|c| domain.iter().position(|d| d == c))
                    .collect();
                back.is_none_or(|t| to_ids(&t).as_slice() >= ids.as_slice())
            })
        });
        report.orbit_representatives = Some(constants.len() as u64);
    }

    // per constant tuple: least satisfying x̄ index and how many x̄ were tried
    let solve_one = |c: u64| -> (Option<u64>, u64) {
        let mut images = to_ids(&decode(c, domain.len(), r));
        images.resize(r + k, 0);
        for x in 0..variable_tuples {
            for (slot, v) in images[r..].iter_mut().zip(decode(x, h.order(), k)) {
                *slot = v;
            }
            if sys
                .words
                .iter()
                .all(|w| w.evaluate_ids(h, &images) == FiniteGroup::IDENTITY)
            {
                return (Some(x), x + 1);
            }
        }
        (None, variable_tuples)
    };
    let perms = |ids: Vec<usize>| -> Vec<Permutation> {
        ids.into_iter().map(|i| h.element(i).clone()).collect()
    };

    for block in constants.chunks(CONSTANT_BLOCK) {
        let results: Vec<(Option<u64>, u64)> = block.par_iter().map(|&c| solve_one(c)).collect();
        for (&c, (hit, tried)) in block.iter().zip(results) {
            report.constant_tuples_checked += 1;
            report.assignments_checked += tried;
            let a = perms(to_ids(&decode(c, domain.len(), r)));
            match hit {
                Some(x) => {
                    if options.witnesses {
                        report.witnesses.push((a, perms(decode(x, h.order(), k))));
                    }
                }
                None => {
                    report.verdict = Verdict::Unsolvable;
                    report.counterexample = Some(a);
                    return report;
                }
            }
        }
    }
    report.verdict = Verdict::Solvable;
    report
}

/// Exact `∀ā ∈ G^r ∃x̄ ∈ G^k: w_i(ā, x̄) = 1`; unknown when the assignment
/// space exceeds the budget.
pub fn solvable_in(
    g: &FiniteGroup,
    sys: &EquationSystem,
    options: SolveOptions,
) -> SolvabilityReport {
    let domain: Vec<usize> = (0..g.order()).collect();
    solve_core(g, &domain, sys, options, g.name(), None)
}

/// Re-check a counterexample: no `x̄ ∈ G^k` satisfies every word.
pub fn verify_counterexample(
    g: &FiniteGroup,
    sys: &EquationSystem,
    constants: &[Permutation],
) -> Result<bool> {
    if constants.len() != sys.constants {
        return Err(Error::Precondition("wrong number of constants".into()));
    }
    let ids = g.require_all(constants)?;
    let variable_tuples =
        checked_space(g.order(), sys.variables).ok_or_else(|| Error::CapExceeded {
            what: "variable assignments".into(),
            cap: u64::MAX,
        })? as u64;
    let mut images = ids;
    images.resize(sys.constants + sys.variables, 0);
    for x in 0..variable_tuples {
        for (slot, v) in images[sys.constants..]
            .iter_mut()
            .zip(decode(x, g.order(), sys.variables))
        {
            *slot = v;
        }
        if sys
            .words
            .iter()
            .all(|w| w.evaluate_ids(g, &images) == FiniteGroup::IDENTITY)
        {
            return Ok(false);
        }
    }
    Ok(true)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MembershipTable {
    pub rows: Vec<SolvabilityReport>,
    /// `Some(true)` when solvable everywhere, `Some(false)` at the first
    /// unsolvable group, `None` when only unknowns block a decision.
    pub member: Option<bool>,
    pub first_failure: Option<String>,
}

/// Solvability in every catalog group.
pub fn sys_membership(
    catalog: &[GroupRef],
    sys: &EquationSystem,
    options: SolveOptions,
) -> MembershipTable {
    let rows: Vec<SolvabilityReport> = catalog
        .iter()
        .map(|g| solvable_in(g, sys, options))
        .collect();
    let first_failure = rows
        .iter()
        .find(|r| r.verdict == Verdict::Unsolvable)
        .map(|r| r.group.clone());
    let member = if first_failure.is_some() {
        Some(false)
    } else if rows.iter().all(|r| r.verdict == Verdict::Solvable) {
        Some(true)
    } else {
        None
    };
    MembershipTable {
        rows,
        member,
        first_failure,
    }
}

/// A verified injective homomorphism between enumerated groups.
#[derive(Debug, Clone)]
pub struct Embedding {
    source: GroupRef,
    target: GroupRef,
    /// Target id of each source id.
    images: Vec<usize>,
}

impl Embedding {
    pub fn from_map(source: GroupRef, target: GroupRef, images: Vec<usize>) -> Result<Self> {
        if images.len() != source.order() || images.iter().any(|&i| i >= target.order()) {
            return Err(Error::InvalidEmbedding(
                "map is not total on the source".into(),
            ));
        }
        let mut seen = images.clone();
        seen.sort_unstable();
        seen.dedup();
        if seen.len() != images.len() {
            return Err(Error::InvalidEmbedding("map is not injective".into()));
        }
        for a in 0..source.order() {
            for b in 0..source.order() {
                if images[source.mul(a, b)] != target.mul(images[a], images[b]) {
                    return Err(Error::InvalidEmbedding(format!(
                        "not a homomorphism at ({}, {})",
                        source.element(a),
                        source.element(b)
                    )));
                }
            }
        }
        Ok(Embedding {
            source,
            target,
            images,
        })
    }

    /// Extend generator images to the whole source, then verify.
    pub fn from_generator_images(
        source: GroupRef,
        target: GroupRef,
        generator_images: &[Permutation],
    ) -> Result<Self> {
        let gens = source.generators();
        if gens.len() != generator_images.len() {
            return Err(Error::InvalidEmbedding(format!(
                "{} generator images for {} generators",
                generator_images.len(),
                gens.len()
            )));
        }
        let gen_ids = source.require_all(gens)?;
        let img_ids = target.require_all(generator_images)?;
        let mut images = vec![usize::MAX; source.order()];
        images[FiniteGroup::IDENTITY] = FiniteGroup::IDENTITY;
        let mut queue = std::collections::VecDeque::from([FiniteGroup::IDENTITY]);
        while let Some(cur) = queue.pop_front() {
            for (&s, &t) in gen_ids.iter().zip(&img_ids) {
                let next = source.mul(cur, s);
                let value = target.mul(images[cur], t);
                if images[next] == usize::MAX {
                    images[next] = value;
                    queue.push_back(next);
                } else if images[next] != value {
                    return Err(Error::InvalidEmbedding(
                        "generator images do not define a homomorphism".into(),
                    ));
                }
            }
        }
        Embedding::from_map(source, target, images)
    }

    /// `g ↦ g ⊕ g ⊕ …` (`copies` blocks) into a target of degree
    /// `copies · deg(source)`.
    pub fn diagonal(source: GroupRef, target: GroupRef, copies: usize) -> Result<Self> {
        if target.degree() != copies * source.degree() {
            return Err(Error::InvalidEmbedding(format!(
                "{copies} copies of degree {} do not give degree {}",
                source.degree(),
                target.degree()
            )));
        }
        let images = source
            .elements()
            .iter()
            .map(|g| {
                target.index_of(&replicate(g, copies)).ok_or_else(|| {
                    Error::InvalidEmbedding(format!(
                        "{g} has no diagonal image in {}",
                        target.name()
                    ))
                })
            })
            .collect::<Result<Vec<_>>>()?;
        Embedding::from_map(source, target, images)
    }

    pub fn source(&self) -> &GroupRef {
        &self.source
    }

    pub fn target(&self) -> &GroupRef {
        &self.target
    }

    pub fn image(&self, id: usize) -> usize {
        self.images[id]
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OverReport {
    pub group: String,
    /// `Solvable` or `Unknown`, never `Unsolvable`.
    pub verdict: Verdict,
    /// Overgroup that witnessed solvability.
    pub via: Option<String>,
    /// One report per supplied embedding, in order, up to the first success.
    pub attempts: Vec<SolvabilityReport>,
}

/// `∀ā ∈ ι(G)^r ∃x̄ ∈ H^k` for some supplied embedding `ι : G → H`. The
/// identity embedding is always tried first.
pub fn solvable_over_bounded(
    g: &GroupRef,
    sys: &EquationSystem,
    embeddings: &[Embedding],
    options: SolveOptions,
) -> Result<OverReport> {
    for e in embeddings {
        if !std::sync::Arc::ptr_eq(e.source(), g) && **e.source() != **g {
            return Err(Error::InvalidEmbedding(format!(
                "embedding source is not {}",
                g.name()
            )));
        }
    }
    let mut attempts = Vec::new();
    let own: Vec<usize> = (0..g.order()).collect();
    let report = solve_core(g, &own, sys, options, g.name(), Some(g.name().to_owned()));
    let solved = report.verdict == Verdict::Solvable;
    attempts.push(report);
    if solved {
        return Ok(OverReport {
            group: g.name().to_owned(),
            verdict: Verdict::Solvable,
            via: Some(g.name().to_owned()),
            attempts,
        });
    }
    for e in embeddings {
        let report = solve_core(
            e.target(),
            &e.images,
            sys,
            options,
            g.name(),
            Some(e.target().name().to_owned()),
        );
        let solved = report.verdict == Verdict::Solvable;
        attempts.push(report);
        if solved {
            return Ok(OverReport {
                group: g.name().to_owned(),
                verdict: Verdict::Solvable,
                via: Some(e.target().name().to_owned()),
                attempts,
            });
        }
    }
    Ok(OverReport {
        group: g.name().to_owned(),
        verdict: Verdict::Unknown,
        via: None,
        attempts,
    })
}

#[cfg(test)]
mod tests {
    use std::sync::Arc;

    use super::*;
    use crate::catalog::builtin;

    const SQUARE_ROOT: &str = "constants 1; variables 1;\nx1 x1 a1^-1\n";

    fn g(name: &str) -> GroupRef {
        Arc::new(builtin(name, 1_000_000).unwrap())
    }

    fn p(text: &str, degree: usize) -> Permutation {
        Permutation::parse(text, degree).unwrap()
    }

    #[test]
    fn dsl_parsing() {
        let sys = EquationSystem::parse(SQUARE_ROOT).unwrap();
        assert_eq!((sys.constants(), sys.variables()), (1, 1));
        assert_eq!(sys.words().len(), 1);
        assert_eq!(EquationSystem::parse(&sys.to_text()).unwrap(), sys);
        let eq = EquationSystem::parse("constants 1;\nvariables 1;\nx1^2 = a1 # square\n").unwrap();
        assert_eq!(eq, sys);
        assert_eq!(sys.symbol(0), Symbol::Constant(0));
        assert_eq!(sys.symbol(1), Symbol::Variable(0));
    }

    #[test]
    fn dsl_errors_have_positions() {
        let cases = [
            ("x1\n", 1, 1),
            ("constants 1; variables 1;\nx1 a2\n", 2, 4),
            ("constants 1; variables 1;\nx1 = a1 x0\n", 2, 9),
            ("constants 1; params 2;\nx1\n", 1, 14),
            ("constants one;\n", 1, 1),
            ("constants 0; variables 1;\n", 1, 1),
            ("constants 0; variables 1;\nx1^q\n", 2, 4),
        ];
        for (text, line, column) in cases {
            match EquationSystem::parse(text) {
                Err(Error::Parse {
                    line: l, column: c, ..
                }) => assert_eq!((l, c), (line, column), "{text:?}"),
                other => panic!("{text:?}: {other:?}"),
            }
        }
    }

    #[test]
    fn word_evaluation() {
        let sys =
            EquationSystem::parse("constants 1; variables 1;\n1\na1 x1 a1^-1 x1^-1\nx1 x1 a1^-1\n")
                .unwrap();
        let a = p("(1 2 3)", 3);
        let mut assignment = HashMap::from([
            (Symbol::Constant(0), a.clone()),
            (Symbol::Variable(0), a.clone()),
        ]);
        assert!(evaluate_word(&sys, &sys.words()[0], &assignment)
            .unwrap()
            .is_identity());
        assert!(evaluate_word(&sys, &sys.words()[1], &assignment)
            .unwrap()
            .is_identity());
        assignment.insert(Symbol::Variable(0), p("(1 3 2)", 3));
        assert!(evaluate_word(&sys, &sys.words()[2], &assignment)
            .unwrap()
            .is_identity());
        assignment.remove(&Symbol::Variable(0));
        assert!(matches!(
            evaluate_word(&sys, &sys.words()[2], &assignment),
            Err(Error::UnassignedSymbol(s)) if s == "x1"
        ));
        assignment.insert(Symbol::Variable(0), p("(1 2)", 4));
        assert!(matches!(
            evaluate_word(&sys, &sys.words()[2], &assignment),
            Err(Error::DegreeMismatch { .. })
        ));
    }

    #[test]
    fn square_roots() {
        let sys = EquationSystem::parse(SQUARE_ROOT).unwrap();
        for name in ["Z3", "Z5"] {
            assert_eq!(
                solvable_in(&g(name), &sys, SolveOptions::default()).verdict,
                Verdict::Solvable
            );
        }
        let s3 = g("S3");
        let report = solvable_in(&s3, &sys, SolveOptions::default());
        assert_eq!(report.verdict, Verdict::Unsolvable);
        // S3 in canonical order: 1, (2 3), (1 2), ... so (2 3) is the least failure
        let c = report.counterexample.unwrap();
        assert_eq!(c, vec![p("(2 3)", 3)]);
        assert_eq!(c[0].cycle_type(), vec![2, 1]);
        assert!(verify_counterexample(&s3, &sys, &c).unwrap());
        assert!(!verify_counterexample(&s3, &sys, &[p("(1 2 3)", 3)]).unwrap());
    }

    #[test]
    fn trivial_systems_everywhere() {
        let single = EquationSystem::parse("constants 0; variables 1;\nx1\n").unwrap();
        let commuting =
            EquationSystem::parse("constants 1; variables 1;\na1 x1 a1^-1 x1^-1\n").unwrap();
        let catalog: Vec<GroupRef> = ["Z1", "Z4", "S3", "A4", "Q8"]
            .iter()
            .map(|n| g(n))
            .collect();
        for sys in [&single, &commuting] {
            let t = sys_membership(&catalog, sys, SolveOptions::default());
            assert_eq!(t.member, Some(true));
        }
        let sq = EquationSystem::parse(SQUARE_ROOT).unwrap();
        let t = sys_membership(&[g("Z3"), g("Z5"), g("S3")], &sq, SolveOptions::default());
        assert_eq!(t.member, Some(false));
        assert_eq!(t.first_failure.as_deref(), Some("S3"));
    }

    #[test]
    fn witnesses_and_budget() {
        let sys = EquationSystem::parse(SQUARE_ROOT).unwrap();
        let z5 = g("Z5");
        let options = SolveOptions {
            witnesses: true,
            ..SolveOptions::default()
        };
        let report = solvable_in(&z5, &sys, options);
        assert_eq!(report.witnesses.len(), 5);
        for (a, x) in &report.witnesses {
            assert_eq!(&x[0].pow(2), &a[0]);
        }
        let tiny = SolveOptions {
            budget: 24,
            ..SolveOptions::default()
        };
        let report = solvable_in(&z5, &sys, tiny);
        assert_eq!(report.verdict, Verdict::Unknown);
        assert_eq!(report.search_space, 25);
        assert_eq!(report.assignments_checked, 0);
    }

    #[test]
    fn orbit_reduction_agrees() {
        let sys = EquationSystem::parse(SQUARE_ROOT).unwrap();
        for name in ["S3", "S4", "A4", "Q8", "D5"] {
            let group = g(name);
            let raw = solvable_in(&group, &sys, SolveOptions::default());
            let reduced = solvable_in(
                &group,
                &sys,
                SolveOptions {
                    orbit_reduction: true,
                    ..SolveOptions::default()
                },
            );
            assert_eq!(raw.verdict, reduced.verdict, "{name}");
            assert!(reduced.orbit_representatives.unwrap() <= group.order() as u64);
        }
    }

    #[test]
    fn diagonal_embedding_gives_square_roots() {
        let sys = EquationSystem::parse(SQUARE_ROOT).unwrap();
        let s3 = g("S3");
        let s6 = g("S6");
        let e = Embedding::diagonal(s3.clone(), s6.clone(), 2).unwrap();
        let t = s3.require(&p("(1 2)", 3)).unwrap();
        assert_eq!(s6.element(e.image(t)), &p("(1 2)(4 5)", 6));
        let options = SolveOptions {
            witnesses: true,
            ..SolveOptions::default()
        };
        let report = solvable_over_bounded(&s3, &sys, &[e], options).unwrap();
        assert_eq!(report.verdict, Verdict::Solvable);
        assert_eq!(report.via.as_deref(), Some("S6"));
        let witnesses = &report.attempts.last().unwrap().witnesses;
        assert_eq!(witnesses.len(), 6);
        for (a, x) in witnesses {
            assert_eq!(x[0].pow(2), a[0]);
        }
        let root = p("(1 4 2 5)", 6);
        assert_eq!(root.pow(2), p("(1 2)(4 5)", 6));
    }

    #[test]
    fn solvable_over_is_never_unsolvable() {
        let sys = EquationSystem::parse(SQUARE_ROOT).unwrap();
        let s3 = g("S3");
        let report = solvable_over_bounded(&s3, &sys, &[], SolveOptions::default()).unwrap();
        assert_eq!(report.verdict, Verdict::Unknown);
        let trivial = EquationSystem::parse("constants 1; variables 1;\nx1\n").unwrap();
        let report = solvable_over_bounded(&s3, &trivial, &[], SolveOptions::default()).unwrap();
        assert_eq!(
            (report.verdict, report.via.as_deref()),
            (Verdict::Solvable, Some("S3"))
        );
    }

    #[test]
    fn invalid_embeddings_are_rejected() {
        let s3 = g("S3");
        let s4 = g("S4");
        // a transposition cannot be the image of a 3-cycle generator
        let gens: Vec<Permutation> = s3.generators().to_vec();
        assert_eq!(gens.len(), 2);
        let bad = vec![p("(1 2)", 4), p("(1 2)", 4)];
        assert!(matches!(
            Embedding::from_generator_images(s3.clone(), s4.clone(), &bad),
            Err(Error::InvalidEmbedding(_))
        ));
        let good: Vec<Permutation> = gens.iter().map(|q| direct_extend(q, 4)).collect();
        assert!(Embedding::from_generator_images(s3.clone(), s4.clone(), &good).is_ok());
        let constant = vec![FiniteGroup::IDENTITY; s3.order()];
        assert!(Embedding::from_map(s3.clone(), s4, constant).is_err());
        assert!(Embedding::diagonal(s3, g("S5"), 2).is_err());
    }

    fn direct_extend(q: &Permutation, degree: usize) -> Permutation {
        let mut images: Vec<usize> = (0..q.degree()).map(|i| q.apply(i)).collect();
        images.extend(q.degree()..degree);
        Permutation::from_images(images.into_iter().map(|i| i as u32).collect()).unwrap()
    }
}
