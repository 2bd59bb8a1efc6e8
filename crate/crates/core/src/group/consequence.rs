//! n-consequence sets `C_n(X, G)`: products of exactly `n` conjugates of
//! elements `x` with `x ∈ X` or `x⁻¹ ∈ X`.
//!
//! Layers are bitsets over element ids. `C_{k+1} = C_k · B` where `B` is the
//! conjugation-closed letter set, so the layer sequence is determined by its
//! previous term and eventually periodic; the walk detects the period and
//! answers arbitrarily deep queries from it.

use fixedbitset::FixedBitSet;
use rayon::prelude::*;
use rustc_hash::FxHashMap;

use super::FiniteGroup;
use crate::error::{Error, Result};
use crate::perm::Permutation;

/// Work size below which a layer product runs on the calling thread.
const PARALLEL_THRESHOLD: usize = 1 << 14;

/// Letter set `⋃_{x ∈ X} class(x) ∪ class(x⁻¹)`, sorted ids.
pub fn consequence_letters(group: &FiniteGroup, x_ids: &[usize]) -> Vec<usize> {
    let mut letters: Vec<usize> = x_ids
        .iter()
        .flat_map(|&x| {
            group
                .class_ids(x)
                .iter()
                .chain(group.class_ids(group.inv(x)))
                .copied()
        })
        .collect();
    letters.sort_unstable();
    letters.dedup();
    letters
}

fn product_layer(group: &FiniteGroup, layer: &FixedBitSet, letters: &[usize]) -> FixedBitSet {
    let n = group.order();
    let members: Vec<usize> = layer.ones().collect();
    let row = |acc: &mut FixedBitSet, c: usize| {
        for &b in letters {
            acc.insert(group.mul(c, b));
        }
    };
    if members.len() * letters.len() < PARALLEL_THRESHOLD {
        let mut out = FixedBitSet::with_capacity(n);
        members.iter().for_each(|&c| row(&mut out, c));
        return out;
    }
    members
        .par_chunks(64)
        .fold(
            || FixedBitSet::with_capacity(n),
            |mut acc, chunk| {
                chunk.iter().for_each(|&c| row(&mut acc, c));
                acc
            },
        )
        .reduce(
            || FixedBitSet::with_capacity(n),
            |mut a, b| {
                a.union_with(&b);
                a
            },
        )
}

/// Layer-by-layer walk `C_1, C_2, …` with period detection.
pub struct ConsequenceWalk<'g> {
    group: &'g FiniteGroup,
    letters: Vec<usize>,
    /// `layers[k]` is `C_k`; `layers[0] = {1}`.
    layers: Vec<FixedBitSet>,
    seen: FxHashMap<FixedBitSet, usize>,
    /// `(start, period)` once a repeated layer has been found.
    cycle: Option<(usize, usize)>,
}

impl<'g> ConsequenceWalk<'g> {
    pub fn new(group: &'g FiniteGroup, x_ids: &[usize]) -> Self {
        let mut start = FixedBitSet::with_capacity(group.order());
        start.insert(FiniteGroup::IDENTITY);
        let mut seen = FxHashMap::default();
        seen.insert(start.clone(), 0);
        ConsequenceWalk {
            group,
            letters: consequence_letters(group, x_ids),
            layers: vec![start],
            seen,
            cycle: None,
        }
    }

    pub fn letters(&self) -> &[usize] {
        &self.letters
    }

    /// `(start, period)` of the eventual cycle, if already detected.
    pub fn cycle(&self) -> Option<(usize, usize)> {
        self.cycle
    }

    /// Compute one more layer unless the cycle is known. Returns false when
    /// nothing new can appear.
    pub fn advance(&mut self) -> bool {
        if self.cycle.is_some() {
            return false;
        }
        let last = self.layers.last().expect("non-empty");
        let next = product_layer(self.group, last, &self.letters);
        let k = self.layers.len();
        if let Some(&j) = self.seen.get(&next) {
            self.cycle = Some((j, k - j));
            return false;
        }
        self.seen.insert(next.clone(), k);
        self.layers.push(next);
        true
    }

    fn resolve(&self, depth: usize) -> usize {
        match self.cycle {
            Some((start, period)) if depth >= self.layers.len() => start + (depth - start) % period,
            _ => depth,
        }
    }

    /// Exact-depth layer `C_depth`.
    pub fn layer(&mut self, depth: usize) -> &FixedBitSet {
        while self.layers.len() <= depth && self.advance() {}
        let k = self.resolve(depth);
        &self.layers[k]
    }

    pub fn contains(&mut self, depth: usize, id: usize) -> bool {
        self.layer(depth).contains(id)
    }
}

/// First depth at which each element appears.
#[derive(Debug, Clone)]
pub struct DepthProfile {
    pub first_depth: Vec<Option<usize>>,
    /// Deepest layer inspected.
    pub depths_searched: usize,
    /// The layer sequence became periodic before `max_depth`: elements that
    /// never appeared are unreachable at every depth.
    pub exhausted: bool,
}

impl DepthProfile {
    pub fn compute(group: &FiniteGroup, x_ids: &[usize], max_depth: usize) -> DepthProfile {
        let mut walk = ConsequenceWalk::new(group, x_ids);
        let mut first_depth = vec![None; group.order()];
        let mut unreached = group.order();
        let mut depths_searched = 0;
        let mut exhausted = false;
        for depth in 1..=max_depth {
            if walk.layers.len() <= depth && !walk.advance() {
                exhausted = true;
                break;
            }
            depths_searched = depth;
            for id in walk.layers[depth].ones() {
                if first_depth[id].is_none() {
                    first_depth[id] = Some(depth);
                    unreached -= 1;
                }
            }
            if unreached == 0 {
                break;
            }
        }
        DepthProfile {
            first_depth,
            depths_searched,
            exhausted,
        }
    }
}

/// Exact-depth `C_n(X, G)` with per-depth statistics.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ConsequenceSet {
    pub base: Vec<Permutation>,
    pub depth: usize,
    /// `C_depth(X, G)` in canonical order.
    pub elements: Vec<Permutation>,
    /// `|C_j|` for `j = 1..=depth`.
    pub layer_sizes: Vec<usize>,
    /// `⋃_{j ≤ depth} C_j` in canonical order.
    pub cumulative: Vec<Permutation>,
}

fn ids_to_perms(group: &FiniteGroup, set: &FixedBitSet) -> Vec<Permutation> {
    set.ones().map(|i| group.element(i).clone()).collect()
}

fn require_depth(n: usize) -> Result<()> {
    if n == 0 {
        return Err(Error::Precondition(
            "consequence depth must be positive".into(),
        ));
    }
    Ok(())
}

pub fn consequences(group: &FiniteGroup, x: &[Permutation], n: usize) -> Result<ConsequenceSet> {
    require_depth(n)?;
    let x_ids = group.require_all(x)?;
    let mut walk = ConsequenceWalk::new(group, &x_ids);
    let mut cumulative = FixedBitSet::with_capacity(group.order());
    let mut layer_sizes = Vec::with_capacity(n);
    for depth in 1..=n {
        let layer = walk.layer(depth);
        layer_sizes.push(layer.count_ones(..));
        cumulative.union_with(layer);
    }
    let mut base = x.to_vec();
    base.sort();
    base.dedup();
    Ok(ConsequenceSet {
        base,
        depth: n,
        elements: ids_to_perms(group, walk.layer(n)),
        layer_sizes,
        cumulative: ids_to_perms(group, &cumulative),
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SeparationVerdict {
    Separated,
    Violated,
}

impl SeparationVerdict {
    pub fn is_separated(self) -> bool {
        self == SeparationVerdict::Separated
    }

    pub fn as_str(self) -> &'static str {
        match self {
            SeparationVerdict::Separated => "separated",
            SeparationVerdict::Violated => "violated",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SeparationReport {
    pub depth: usize,
    /// Is `Y ∩ C_depth(X, G)` empty.
    pub verdict: SeparationVerdict,
    /// Least element of `Y ∩ C_depth(X, G)`.
    pub witness: Option<Permutation>,
    /// Same question against `⋃_{j ≤ depth} C_j`.
    pub cumulative_verdict: SeparationVerdict,
    pub cumulative_witness: Option<(Permutation, usize)>,
    /// Exact-depth verdict for every `j = 1..=depth`.
    pub separated_at: Vec<bool>,
}

/// Is `Y` `n`-separated from `X` in `G`, i.e. `Y ∩ C_n(X, G) = ∅`.
pub fn is_n_separated(
    group: &FiniteGroup,
    y: &[Permutation],
    x: &[Permutation],
    n: usize,
) -> Result<SeparationReport> {
    require_depth(n)?;
    let x_ids = group.require_all(x)?;
    let mut y_ids = group.require_all(y)?;
    y_ids.sort_unstable();
    y_ids.dedup();
    let mut walk = ConsequenceWalk::new(group, &x_ids);
    Ok(separation_from_walk(group, &mut walk, &y_ids, n))
}

pub(crate) fn separation_from_walk(
    group: &FiniteGroup,
    walk: &mut ConsequenceWalk<'_>,
    y_ids: &[usize],
    n: usize,
) -> SeparationReport {
    let mut separated_at = Vec::with_capacity(n);
    let mut cumulative_witness = None;
    let mut witness = None;
    for depth in 1..=n {
        let layer = walk.layer(depth);
        let hit = y_ids.iter().copied().find(|&id| layer.contains(id));
        separated_at.push(hit.is_none());
        if let Some(id) = hit {
            if cumulative_witness.is_none() {
                cumulative_witness = Some((group.element(id).clone(), depth));
            }
            if depth == n {
                witness = Some(group.element(id).clone());
            }
        }
    }
    let verdict_of = |clear: bool| {
        if clear {
            SeparationVerdict::Separated
        } else {
            SeparationVerdict::Violated
        }
    };
    SeparationReport {
        depth: n,
        verdict: verdict_of(witness.is_none()),
        witness,
        cumulative_verdict: verdict_of(cumulative_witness.is_none()),
        cumulative_witness,
        separated_at,
    }
}
