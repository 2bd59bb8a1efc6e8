//! Approximation certificates and searches.
//!
//! A window is a finite set `Φ` of free-group words containing `1`, with its
//! partial multiplication table `{(g, h) : g, h, gh ∈ Φ}`. A certificate maps
//! the window into an enumerated group and is checked either metrically
//! (length bounds) or combinatorially (separation from the defect set).
//!
//! The searches enumerate generator images, so every candidate extends to a
//! homomorphism of the free group. Candidates are visited in lexicographic
//! order of element ids (first generator most significant) and the reported
//! hit is always the least valid candidate, whatever the thread count.

use std::collections::HashSet;

use num_integer::Integer;
use num_traits::{One, Zero};
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::group::{
    separation_from_walk, ConsequenceWalk, FiniteGroup, GroupRef, GroupSpec, SeparationReport,
};
use crate::length::LengthFunction;
use crate::perm::{
    direct_sum, embed_sym_in_alt, length_of_tensor_power, replicate, tensor_power,
    NormalizedLength, Permutation,
};
use crate::rational::{ratio, Rational};
use crate::word::{Letter, Word};

const SEARCH_BLOCK: u64 = 512;

// ---------------------------------------------------------------------------
// Presentations

/// Generators of a free group `F`, normal generators of `N`, test words
/// `Y ⊆ F ∖ N` and `Φ ⊆ N`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Presentation {
    pub generators: Vec<String>,
    pub relators: Vec<Word>,
    pub tests: Vec<Word>,
    pub normal_words: Vec<Word>,
}

impl Presentation {
    pub fn lookup(&self, name: &str) -> Option<usize> {
        self.generators.iter().position(|g| g == name)
    }

    pub fn format_word(&self, w: &Word) -> String {
        w.display(&self.generators).to_string()
    }

    /// Parse the line format
    ///
    /// ```text
    /// generators: a b
    /// relator: a b a^-1 b^-1
    /// Y: a
    /// Phi: a b a^-1 b^-1
    /// ```
    ///
    /// `relator`, `Y` and `Phi` may repeat. Without `Phi` lines the relators
    /// themselves form `Φ`. `#` starts a comment.
    pub fn parse(text: &str) -> Result<Presentation> {
        let mut generators: Option<Vec<String>> = None;
        let mut pending: Vec<(usize, usize, &str, &str)> = Vec::new();
        for (k, raw) in text.lines().enumerate() {
            let line_no = k + 1;
            let line = raw.split('#').next().unwrap_or("");
            if line.trim().is_empty() {
                continue;
            }
            let Some((key, value)) = line.split_once(':') else {
                let col = line.len() - line.trim_start().len() + 1;
                return Err(Error::parse(line_no, col, "expected `key: value`"));
            };
            let value_col = key.len() + 2;
            match key.trim() {
                "generators" => {
                    if generators.is_some() {
                        return Err(Error::parse(line_no, 1, "generators declared twice"));
                    }
                    let names: Vec<String> = value.split_whitespace().map(str::to_owned).collect();
                    for (i, n) in names.iter().enumerate() {
                        if names[..i].contains(n) {
                            return Err(Error::parse(
                                line_no,
                                value_col,
                                format!("generator `{n}` repeated"),
                            ));
                        }
                        if n == "1" || n.contains('^') {
                            return Err(Error::parse(
                                line_no,
                                value_col,
                                format!("bad generator name `{n}`"),
                            ));
                        }
                    }
                    generators = Some(names);
                }
                "relator" | "Y" | "Phi" => pending.push((line_no, value_col, key.trim(), value)),
                other => {
                    return Err(Error::parse(line_no, 1, format!("unknown key `{other}`")));
                }
            }
        }
        let generators =
            generators.ok_or_else(|| Error::parse(1, 1, "missing `generators:` line"))?;
        let mut p = Presentation {
            generators,
            relators: Vec::new(),
            tests: Vec::new(),
            normal_words: Vec::new(),
        };
        let mut saw_phi = false;
        for (line_no, col, key, value) in pending {
            let word =
                Word::parse(value, |n| p.lookup(n)).map_err(|e| e.at_line(line_no, col - 1))?;
            match key {
                "relator" => p.relators.push(word),
                "Y" => p.tests.push(word),
                _ => {
                    saw_phi = true;
                    p.normal_words.push(word);
                }
            }
        }
        if !saw_phi {
            p.normal_words = p.relators.clone();
        }
        Ok(p)
    }

    pub fn to_text(&self) -> String {
        let mut out = format!("generators: {}\n", self.generators.join(" "));
        for (key, words) in [
            ("relator", &self.relators),
            ("Y", &self.tests),
            ("Phi", &self.normal_words),
        ] {
            for w in words {
                out.push_str(&format!("{key}: {}\n", self.format_word(w)));
            }
        }
        out
    }

    /// Best-effort check that each `Φ` word is a product of at most
    /// `max_factors` conjugates `u⁻¹ r^{±1} u` with `|u| ≤ max_conjugator_len`.
    /// `false` means "not found within the bounds", not "not in N".
    pub fn check_normal_words(&self, max_factors: usize, max_conjugator_len: usize) -> Vec<bool> {
        let conjugators = reduced_words(self.generators.len(), max_conjugator_len);
        let mut pieces: Vec<Word> = Vec::new();
        for r in &self.relators {
            for s in [r.clone(), r.inverse()] {
                for u in &conjugators {
                    pieces.push(s.conjugate(u));
                }
            }
        }
        pieces.sort();
        pieces.dedup();
        let mut reached: HashSet<Word> = HashSet::from([Word::identity()]);
        let mut frontier = vec![Word::identity()];
        for _ in 0..max_factors {
            let mut next = Vec::new();
            for w in &frontier {
                for piece in &pieces {
                    let v = w.concat(piece);
                    if reached.insert(v.clone()) {
                        next.push(v);
                    }
                }
            }
            frontier = next;
        }
        self.normal_words
            .iter()
            .map(|w| reached.contains(w))
            .collect()
    }
}

/// All reduced words of length `≤ max_len` over `rank` generators.
fn reduced_words(rank: usize, max_len: usize) -> Vec<Word> {
    let mut out = vec![Word::identity()];
    let mut frontier = vec![Word::identity()];
    for _ in 0..max_len {
        let mut next = Vec::new();
        for w in &frontier {
            for s in 0..rank {
                for inv in [false, true] {
                    let l = Letter::new(s, inv);
                    if w.letters().last() == Some(&l.inverted()) {
                        continue;
                    }
                    next.push(w.concat(&Word::new([l])));
                }
            }
        }
        out.extend(next.iter().cloned());
        frontier = next;
    }
    out
}

// ---------------------------------------------------------------------------
// Windows and certificates

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ApproximationWindow {
    generators: Vec<String>,
    /// `words[0]` is the identity.
    words: Vec<Word>,
    /// `(g, h, gh)` as indices into `words`.
    table: Vec<(usize, usize, usize)>,
}

impl ApproximationWindow {
    /// The identity is added when absent; duplicates are dropped, first
    /// occurrence wins.
    pub fn new(generators: Vec<String>, words: Vec<Word>) -> Result<Self> {
        let rank = generators.len();
        let mut list = vec![Word::identity()];
        for w in words {
            if w.symbol_bound() > rank {
                return Err(Error::Precondition(format!(
                    "window word uses symbol #{} but only {rank} generators exist",
                    w.symbol_bound() - 1
                )));
            }
            if !list.contains(&w) {
                list.push(w);
            }
        }
        let mut table = Vec::new();
        for (i, g) in list.iter().enumerate() {
            for (j, h) in list.iter().enumerate() {
                let gh = g.concat(h);
                if let Some(k) = list.iter().position(|w| *w == gh) {
                    table.push((i, j, k));
                }
            }
        }
        Ok(ApproximationWindow {
            generators,
            words: list,
            table,
        })
    }

    pub fn generators(&self) -> &[String] {
        &self.generators
    }

    pub fn words(&self) -> &[Word] {
        &self.words
    }

    pub fn table(&self) -> &[(usize, usize, usize)] {
        &self.table
    }

    pub fn format_word(&self, i: usize) -> String {
        self.words[i].display(&self.generators).to_string()
    }
}

#[derive(Debug, Clone)]
pub enum CertificateMode {
    Consequence {
        n: usize,
    },
    Metric {
        length: LengthFunction,
        /// Lower bounds per window word, aligned with `window.words()`.
        alpha: Vec<Option<Rational>>,
        epsilon: Rational,
    },
}

#[derive(Debug, Clone)]
pub struct ApproximationCertificate {
    pub window: ApproximationWindow,
    pub target: GroupRef,
    /// `φ(word)` aligned with `window.words()`.
    pub images: Vec<Permutation>,
    pub mode: CertificateMode,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum InstanceFailure {
    IdentityNotFixed,
    /// Some image is inside `C_n(defects)`.
    SeparationViolated,
    /// `‖φ(g)‖ < α(g)` for this window index.
    AlphaNotMet(usize),
    /// `‖defect‖ ≥ ε` for this table row.
    DefectTooLong(usize),
}

#[derive(Debug, Clone)]
pub struct InstanceVerdict {
    pub holds: bool,
    pub failure: Option<InstanceFailure>,
    /// Distinct defect elements `φ(g)φ(h)φ(gh)⁻¹`, canonical order.
    pub defects: Vec<Permutation>,
    pub separation: Option<SeparationReport>,
}

impl ApproximationCertificate {
    fn image_ids(&self) -> Result<Vec<usize>> {
        if self.images.len() != self.window.words.len() {
            return Err(Error::Precondition(format!(
                "{} images for a window of {} words",
                self.images.len(),
                self.window.words.len()
            )));
        }
        self.target.require_all(&self.images)
    }

    /// `φ(g)φ(h)φ(gh)⁻¹` for every table row, as ids.
    fn defect_ids(&self, ids: &[usize]) -> Vec<usize> {
        let h = &self.target;
        self.window
            .table
            .iter()
            .map(|&(g, k, gk)| h.mul(h.mul(ids[g], ids[k]), h.inv(ids[gk])))
            .collect()
    }

    pub fn defects(&self) -> Result<Vec<Permutation>> {
        let ids = self.image_ids()?;
        Ok(self.distinct(&self.defect_ids(&ids)))
    }

    fn distinct(&self, ids: &[usize]) -> Vec<Permutation> {
        let mut ids = ids.to_vec();
        ids.sort_unstable();
        ids.dedup();
        ids.into_iter()
            .map(|i| self.target.element(i).clone())
            .collect()
    }
}

/// `φ(1) = 1` and `φ(Φ ∖ {1})` is `n`-separated from the defect set.
pub fn check_consequence_instance(cert: &ApproximationCertificate) -> Result<InstanceVerdict> {
    let CertificateMode::Consequence { n } = cert.mode else {
        return Err(Error::Precondition(
            "certificate is not in consequence mode".into(),
        ));
    };
    if n == 0 {
        return Err(Error::Precondition("depth must be positive".into()));
    }
    let ids = cert.image_ids()?;
    let defect_ids = cert.defect_ids(&ids);
    let defects = cert.distinct(&defect_ids);
    if ids[0] != FiniteGroup::IDENTITY {
        return Ok(InstanceVerdict {
            holds: false,
            failure: Some(InstanceFailure::IdentityNotFixed),
            defects,
            separation: None,
        });
    }
    let mut y_ids: Vec<usize> = ids[1..].to_vec();
    y_ids.sort_unstable();
    y_ids.dedup();
    let mut walk = ConsequenceWalk::new(&cert.target, &defect_ids);
    let report = separation_from_walk(&cert.target, &mut walk, &y_ids, n);
    let holds = report.verdict.is_separated();
    Ok(InstanceVerdict {
        holds,
        failure: (!holds).then_some(InstanceFailure::SeparationViolated),
        defects,
        separation: Some(report),
    })
}

/// `φ(1) = 1`, `ℓ(φ(g)) ≥ α(g)` on the window and
/// `ℓ(φ(gh)(φ(g)φ(h))⁻¹) < ε` on the table.
pub fn check_metric_instance(cert: &ApproximationCertificate) -> Result<InstanceVerdict> {
    let CertificateMode::Metric {
        length,
        alpha,
        epsilon,
    } = &cert.mode
    else {
        return Err(Error::Precondition(
            "certificate is not in metric mode".into(),
        ));
    };
    if !std::sync::Arc::ptr_eq(length.carrier(), &cert.target) && **length.carrier() != *cert.target
    {
        return Err(Error::Precondition(
            "length function lives on another group".into(),
        ));
    }
    if alpha.len() != cert.window.words.len() {
        return Err(Error::Precondition(
            "alpha profile does not match the window".into(),
        ));
    }
    for (i, a) in alpha.iter().enumerate() {
        if a.is_none() {
            return Err(Error::MissingAlpha(cert.window.format_word(i)));
        }
    }
    let ids = cert.image_ids()?;
    let defect_ids = cert.defect_ids(&ids);
    let defects = cert.distinct(&defect_ids);
    let verdict = |failure: Option<InstanceFailure>| InstanceVerdict {
        holds: failure.is_none(),
        failure,
        defects: defects.clone(),
        separation: None,
    };
    if ids[0] != FiniteGroup::IDENTITY {
        return Ok(verdict(Some(InstanceFailure::IdentityNotFixed)));
    }
    for (i, a) in alpha.iter().enumerate() {
        if length.value_at(ids[i]) < a.as_ref().expect("checked") {
            return Ok(verdict(Some(InstanceFailure::AlphaNotMet(i))));
        }
    }
    for (row, &d) in defect_ids.iter().enumerate() {
        if length.value_at(cert.target.inv(d)) >= epsilon {
            return Ok(verdict(Some(InstanceFailure::DefectTooLong(row))));
        }
    }
    Ok(verdict(None))
}

/// `α(g) = ℓ(φ(g))` for the given images: the default lower-bound profile.
pub fn alpha_from_images(
    length: &LengthFunction,
    images: &[Permutation],
) -> Result<Vec<Option<Rational>>> {
    images
        .iter()
        .map(|p| length.value(p).map(|v| Some(v.clone())))
        .collect()
}

// ---------------------------------------------------------------------------
// Searches

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SearchOptions {
    /// Maximum number of candidate assignments over the whole catalog.
    pub budget: u64,
    /// Skip assignments that are not the least in their simultaneous
    /// conjugation orbit.
    pub prune_conjugates: bool,
}

impl Default for SearchOptions {
    fn default() -> Self {
        SearchOptions {
            budget: 1_000_000,
            prune_conjugates: false,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SearchStats {
    /// Candidates visited per catalog group, in catalog order.
    pub per_group: Vec<(String, u64)>,
    pub total: u64,
}

fn decode(mut index: u64, base: usize, k: usize) -> Vec<usize> {
    let mut digits = vec![0; k];
    for d in digits.iter_mut().rev() {
        *d = (index % base as u64) as usize;
        index /= base as u64;
    }
    digits
}

fn is_conjugation_canonical(group: &FiniteGroup, tuple: &[usize]) -> bool {
    (0..group.order()).all(|g| {
        let conj: Vec<usize> = tuple.iter().map(|&t| group.conj(t, g)).collect();
        conj.as_slice() >= tuple
    })
}

/// Least accepted assignment of `k` generators into `group`, visiting at most
/// `allowance` candidates. Returns `(hit, visited, complete)`.
fn scan_group<F>(
    group: &FiniteGroup,
    k: usize,
    allowance: u64,
    prune: bool,
    accept: F,
) -> (Option<Vec<usize>>, u64, bool)
where
    F: Fn(&[usize]) -> bool + Sync,
{
    let total = (group.order() as u64)
        .checked_pow(k as u32)
        .unwrap_or(u64::MAX);
    let limit = total.min(allowance);
    let mut start = 0;
    while start < limit {
        let end = (start + SEARCH_BLOCK).min(limit);
        let hit = (start..end).into_par_iter().find_first(|&i| {
            let tuple = decode(i, group.order(), k);
            (!prune || is_conjugation_canonical(group, &tuple)) && accept(&tuple)
        });
        if let Some(i) = hit {
            return (Some(decode(i, group.order(), k)), i + 1, true);
        }
        start = end;
    }
    (None, limit, limit == total)
}

/// First hit as (catalog index, generator image ids, stats), else the stats
/// of the exhausted scan.
type ScanOutcome = std::result::Result<(usize, Vec<usize>, SearchStats), SearchStats>;

fn catalog_scan<F>(
    catalog: &[GroupRef],
    k: usize,
    options: SearchOptions,
    accept: F,
) -> Result<ScanOutcome>
where
    F: Fn(&FiniteGroup, &[usize]) -> bool + Sync,
{
    let mut stats = SearchStats {
        per_group: Vec::new(),
        total: 0,
    };
    for (gi, group) in catalog.iter().enumerate() {
        let allowance = options.budget - stats.total;
        let (hit, visited, complete) =
            scan_group(group, k, allowance, options.prune_conjugates, |t| {
                accept(group, t)
            });
        stats.total += visited;
        stats.per_group.push((group.name().to_owned(), visited));
        if let Some(tuple) = hit {
            return Ok(Ok((gi, tuple, stats)));
        }
        if !complete {
            return Err(Error::BudgetExceeded {
                budget: options.budget,
                spent: stats.total,
            });
        }
    }
    Ok(Err(stats))
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FoundHomomorphism {
    pub group: String,
    pub catalog_index: usize,
    /// Images of the free generators.
    pub generator_images: Vec<Permutation>,
    pub test_images: Vec<Permutation>,
    pub normal_images: Vec<Permutation>,
    pub separation: SeparationReport,
    pub stats: SearchStats,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum HomSearchOutcome {
    Found(FoundHomomorphism),
    Exhausted(SearchStats),
}

/// First homomorphism `F → H`, `H` in catalog order, with `φ(Y)`
/// `n`-separated from `φ(Φ)`.
pub fn search_separating_hom(
    p: &Presentation,
    n: usize,
    catalog: &[GroupRef],
    options: SearchOptions,
) -> Result<HomSearchOutcome> {
    if n == 0 {
        return Err(Error::Precondition("depth must be positive".into()));
    }
    let k = p.generators.len();
    let separated = |group: &FiniteGroup, gens: &[usize]| -> Option<SeparationReport> {
        let phi: Vec<usize> = p
            .normal_words
            .iter()
            .map(|w| w.evaluate_ids(group, gens))
            .collect();
        let mut ys: Vec<usize> = p
            .tests
            .iter()
            .map(|w| w.evaluate_ids(group, gens))
            .collect();
        ys.sort_unstable();
        ys.dedup();
        let mut walk = ConsequenceWalk::new(group, &phi);
        let report = separation_from_walk(group, &mut walk, &ys, n);
        report.verdict.is_separated().then_some(report)
    };
    let scan = catalog_scan(catalog, k, options, |g, t| separated(g, t).is_some())?;
    Ok(match scan {
        Ok((gi, tuple, stats)) => {
            let group = &catalog[gi];
            let eval = |ws: &[Word]| -> Vec<Permutation> {
                ws.iter()
                    .map(|w| group.element(w.evaluate_ids(group, &tuple)).clone())
                    .collect()
            };
            HomSearchOutcome::Found(FoundHomomorphism {
                group: group.name().to_owned(),
                catalog_index: gi,
                generator_images: tuple.iter().map(|&i| group.element(i).clone()).collect(),
                test_images: eval(&p.tests),
                normal_images: eval(&p.normal_words),
                separation: separated(group, &tuple).expect("accepted candidate"),
                stats,
            })
        }
        Err(stats) => HomSearchOutcome::Exhausted(stats),
    })
}

/// Least `r ≥ 1` with `1 − (1 − len)^r ≥ 1/2`; `None` for length 0.
pub fn amplification_exponent(len: &NormalizedLength) -> Option<u32> {
    if len.value().is_zero() {
        return None;
    }
    let half = ratio(1, 2);
    (1..).find(|&r| length_of_tensor_power(len, r).value() >= &half)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SoficCertificate {
    pub group: String,
    pub base_degree: usize,
    /// Images landed in a symmetric group and are pushed into the alternating
    /// group of twice the degree.
    pub symmetric_embedding: bool,
    pub generator_images: Vec<Permutation>,
    pub raw_test_length: NormalizedLength,
    pub amplification: u32,
    pub final_degree: u128,
    /// `‖ψ(y)‖` after amplification.
    pub test_length: NormalizedLength,
    /// `‖ψ(x)‖` for each `x ∈ Φ` after amplification.
    pub normal_lengths: Vec<NormalizedLength>,
    pub stats: SearchStats,
}

impl SoficCertificate {
    /// Recompute every length from the generator images and compare against
    /// the stored values and the thresholds `≥ 1/2` and `< ε`.
    pub fn verify(&self, p: &Presentation, epsilon: &Rational) -> Result<bool> {
        let degree = self.base_degree;
        let eval = |w: &Word| w.evaluate(&self.generator_images, degree);
        let y = eval(&p.tests[0])?;
        let r = self.amplification;
        let y_len = length_of_tensor_power(&y.hamming_length(), r);
        let mut ok = y_len == self.test_length && y_len.value() >= &ratio(1, 2);
        ok &= self.symmetric_embedding || y.is_even();
        if p.normal_words.len() != self.normal_lengths.len() {
            return Ok(false);
        }
        for (w, stored) in p.normal_words.iter().zip(&self.normal_lengths) {
            let x = eval(w)?;
            let len = length_of_tensor_power(&x.hamming_length(), r);
            ok &= &len == stored && len.value() < epsilon;
            ok &= self.symmetric_embedding || x.is_even();
        }
        Ok(ok)
    }

    /// Generator images of the amplified (and, if needed, embedded)
    /// homomorphism, when the final degree fits under `cap`.
    pub fn materialize(&self, cap: u64) -> Result<Vec<Permutation>> {
        self.generator_images
            .iter()
            .map(|g| {
                let t = tensor_power(g, self.amplification, cap)?;
                Ok(if self.symmetric_embedding {
                    embed_sym_in_alt(&t)
                } else {
                    t
                })
            })
            .collect()
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum SoficSearchOutcome {
    Found(Box<SoficCertificate>),
    Exhausted(SearchStats),
}

/// Homomorphism `φ : F → A_m` (or `S_m`, then embedded) with, after the least
/// useful amplification, `‖φ(y)‖ ≥ 1/2` and `‖φ(x)‖ < ε` on `Φ`.
pub fn search_sofic_instance(
    p: &Presentation,
    epsilon: &Rational,
    catalog: &[GroupRef],
    options: SearchOptions,
) -> Result<SoficSearchOutcome> {
    if p.tests.len() != 1 {
        return Err(Error::Precondition(format!(
            "sofic search needs exactly one test word, got {}",
            p.tests.len()
        )));
    }
    for g in catalog {
        if !matches!(
            g.spec(),
            GroupSpec::Alternating(_) | GroupSpec::Symmetric(_)
        ) {
            return Err(Error::Precondition(format!(
                "{} is neither alternating nor symmetric",
                g.name()
            )));
        }
    }
    let y = &p.tests[0];
    let lengths = |group: &FiniteGroup,
                   gens: &[usize]|
     -> Option<(
        u32,
        NormalizedLength,
        NormalizedLength,
        Vec<NormalizedLength>,
    )> {
        let raw_y = group.element(y.evaluate_ids(group, gens)).hamming_length();
        let r = amplification_exponent(&raw_y)?;
        let mut xs = Vec::with_capacity(p.normal_words.len());
        for w in &p.normal_words {
            let len = length_of_tensor_power(
                &group.element(w.evaluate_ids(group, gens)).hamming_length(),
                r,
            );
            if len.value() >= epsilon {
                return None;
            }
            xs.push(len);
        }
        let y_len = length_of_tensor_power(&raw_y, r);
        Some((r, raw_y, y_len, xs))
    };
    let scan = catalog_scan(catalog, p.generators.len(), options, |g, t| {
        lengths(g, t).is_some()
    })?;
    Ok(match scan {
        Ok((gi, tuple, stats)) => {
            let group = &catalog[gi];
            let (r, raw_y, y_len, xs) = lengths(group, &tuple).expect("accepted candidate");
            let symmetric = matches!(group.spec(), GroupSpec::Symmetric(_));
            let base = (group.degree() as u128).pow(r);
            SoficSearchOutcome::Found(Box::new(SoficCertificate {
                group: group.name().to_owned(),
                base_degree: group.degree(),
                symmetric_embedding: symmetric,
                generator_images: tuple.iter().map(|&i| group.element(i).clone()).collect(),
                raw_test_length: raw_y,
                amplification: r,
                final_degree: if symmetric { 2 * base } else { base },
                test_length: y_len,
                normal_lengths: xs,
                stats,
            }))
        }
        Err(stats) => SoficSearchOutcome::Exhausted(stats),
    })
}

/// Merge several homomorphisms (each given by generator images of a common
/// degree per homomorphism) into one: each is replicated up to the least
/// common multiple of the degrees, then all are direct-summed.
pub fn merge_by_direct_sum(homs: &[Vec<Permutation>]) -> Result<Vec<Permutation>> {
    let Some(first) = homs.first() else {
        return Err(Error::Precondition("nothing to merge".into()));
    };
    let rank = first.len();
    let mut degrees = Vec::with_capacity(homs.len());
    for h in homs {
        if h.len() != rank {
            return Err(Error::Precondition(
                "homomorphisms disagree on the generator count".into(),
            ));
        }
        let d = h.first().map_or(1, Permutation::degree);
        if h.iter().any(|g| g.degree() != d) {
            return Err(Error::Precondition(
                "generator images of one homomorphism differ in degree".into(),
            ));
        }
        degrees.push(d);
    }
    let common = degrees.iter().fold(1usize, |acc, &d| acc.lcm(&d));
    let merged = (0..rank)
        .map(|g| {
            homs.iter()
                .zip(&degrees)
                .map(|(h, &d)| replicate(&h[g], common / d))
                .reduce(|a, b| direct_sum(&a, &b))
                .expect("non-empty")
        })
        .collect();
    Ok(merged)
}

/// `‖ψ(y)‖ ≥ 1/(2|Y|)` style bound: the smallest length over `words`.
pub fn min_length(images: &[Permutation], words: &[Word]) -> Result<Rational> {
    let degree = images.first().map_or(1, Permutation::degree);
    let mut best: Option<Rational> = None;
    for w in words {
        let len = w.evaluate(images, degree)?.hamming_length().into_inner();
        best = Some(match best {
            Some(b) if b <= len => b,
            _ => len,
        });
    }
    Ok(best.unwrap_or_else(Rational::one))
}
