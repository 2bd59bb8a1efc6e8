//! Finite permutation groups with fully enumerated elements.
//!
//! Elements are kept sorted by their image arrays, so element ids are stable
//! and the identity is always id 0. Every ordered report in the crate relies on
//! this canonical order.

mod consequence;

pub(crate) use consequence::separation_from_walk;
pub use consequence::{
    consequence_letters, consequences, is_n_separated, ConsequenceSet, ConsequenceWalk,
    DepthProfile, SeparationReport, SeparationVerdict,
};

use std::collections::VecDeque;
use std::fmt;
use std::sync::{Arc, OnceLock};

use rustc_hash::FxHashMap;

use crate::error::{Error, Result};
use crate::perm::{direct_sum, Permutation};

/// Default cap on enumerated element sets.
pub const DEFAULT_ELEMENT_CAP: u64 = 1_000_000;

/// Groups up to this order get a cached multiplication table.
const TABLE_LIMIT: usize = 1024;

pub type GroupRef = Arc<FiniteGroup>;

/// How a group is described before it is enumerated.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum GroupSpec {
    Symmetric(usize),
    Alternating(usize),
    Generated {
        degree: usize,
        generators: Vec<Permutation>,
    },
    DirectProduct(Vec<GroupSpec>),
}

impl GroupSpec {
    pub fn degree(&self) -> usize {
        match self {
            GroupSpec::Symmetric(m) | GroupSpec::Alternating(m) => *m,
            GroupSpec::Generated { degree, .. } => *degree,
            GroupSpec::DirectProduct(factors) => factors.iter().map(GroupSpec::degree).sum(),
        }
    }

    /// Cyclic group of order `k` generated by the `k`-cycle.
    pub fn cyclic(k: usize) -> Self {
        let cycle: Vec<usize> = (1..=k).collect();
        let generators = if k > 1 {
            vec![Permutation::from_cycles(k, &[cycle]).expect("valid cycle")]
        } else {
            Vec::new()
        };
        GroupSpec::Generated {
            degree: k.max(1),
            generators,
        }
    }

    pub fn short_name(&self) -> String {
        match self {
            GroupSpec::Symmetric(m) => format!("S{m}"),
            GroupSpec::Alternating(m) => format!("A{m}"),
            GroupSpec::Generated { degree, generators } => {
                let gens: Vec<String> = generators.iter().map(ToString::to_string).collect();
                format!("<{}>[{degree}]", gens.join(", "))
            }
            GroupSpec::DirectProduct(factors) => {
                let names: Vec<String> = factors.iter().map(GroupSpec::short_name).collect();
                names.join("x")
            }
        }
    }
}

/// Conjugacy classes as a partition of element ids.
#[derive(Debug, Clone)]
pub struct ClassPartition {
    class_of: Vec<u32>,
    classes: Vec<Vec<usize>>,
}

impl ClassPartition {
    /// Classes ordered by their least element id; each class sorted.
    pub fn classes(&self) -> &[Vec<usize>] {
        &self.classes
    }

    pub fn class_of(&self, id: usize) -> usize {
        self.class_of[id] as usize
    }

    /// Least element of each class.
    pub fn representatives(&self) -> impl Iterator<Item = usize> + '_ {
        self.classes.iter().map(|c| c[0])
    }
}

pub struct FiniteGroup {
    name: String,
    spec: GroupSpec,
    degree: usize,
    generators: Vec<Permutation>,
    elements: Vec<Permutation>,
    index: FxHashMap<Permutation, u32>,
    /// `(offset, degree)` of each direct factor; a single block otherwise.
    blocks: Vec<(usize, usize)>,
    classes: OnceLock<ClassPartition>,
    table: OnceLock<Option<Vec<u32>>>,
    inverses: OnceLock<Vec<u32>>,
}

impl fmt::Debug for FiniteGroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("FiniteGroup")
            .field("name", &self.name)
            .field("degree", &self.degree)
            .field("order", &self.order())
            .finish()
    }
}

impl FiniteGroup {
    /// Enumerate the group described by `spec`; fails once more than `cap`
    /// elements would be needed.
    pub fn build(name: impl Into<String>, spec: GroupSpec, cap: u64) -> Result<FiniteGroup> {
        let name = name.into();
        let (elements, generators, blocks) = enumerate_spec(&spec, cap)?;
        Ok(FiniteGroup::from_parts(
            name, spec, generators, elements, blocks,
        ))
    }

    pub fn symmetric(m: usize) -> Result<FiniteGroup> {
        FiniteGroup::build(
            format!("S{m}"),
            GroupSpec::Symmetric(m),
            DEFAULT_ELEMENT_CAP,
        )
    }

    pub fn alternating(m: usize) -> Result<FiniteGroup> {
        FiniteGroup::build(
            format!("A{m}"),
            GroupSpec::Alternating(m),
            DEFAULT_ELEMENT_CAP,
        )
    }

    pub fn cyclic(k: usize) -> Result<FiniteGroup> {
        FiniteGroup::build(format!("Z{k}"), GroupSpec::cyclic(k), DEFAULT_ELEMENT_CAP)
    }

    pub fn generated(
        name: impl Into<String>,
        degree: usize,
        generators: Vec<Permutation>,
    ) -> Result<FiniteGroup> {
        FiniteGroup::build(
            name,
            GroupSpec::Generated { degree, generators },
            DEFAULT_ELEMENT_CAP,
        )
    }

    pub fn direct_product(
        name: impl Into<String>,
        factors: &[&FiniteGroup],
    ) -> Result<FiniteGroup> {
        let spec = GroupSpec::DirectProduct(factors.iter().map(|g| g.spec.clone()).collect());
        FiniteGroup::build(name, spec, DEFAULT_ELEMENT_CAP)
    }

    fn from_parts(
        name: String,
        spec: GroupSpec,
        generators: Vec<Permutation>,
        mut elements: Vec<Permutation>,
        blocks: Vec<(usize, usize)>,
    ) -> FiniteGroup {
        elements.sort_unstable();
        elements.dedup();
        let index = elements
            .iter()
            .enumerate()
            .map(|(i, p)| (p.clone(), i as u32))
            .collect();
        FiniteGroup {
            name,
            degree: spec.degree(),
            spec,
            generators,
            elements,
            index,
            blocks,
            classes: OnceLock::new(),
            table: OnceLock::new(),
            inverses: OnceLock::new(),
        }
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn spec(&self) -> &GroupSpec {
        &self.spec
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn order(&self) -> usize {
        self.elements.len()
    }

    pub fn generators(&self) -> &[Permutation] {
        &self.generators
    }

    /// All elements in canonical order.
    pub fn elements(&self) -> &[Permutation] {
        &self.elements
    }

    pub fn element(&self, id: usize) -> &Permutation {
        &self.elements[id]
    }

    pub const IDENTITY: usize = 0;

    pub fn index_of(&self, p: &Permutation) -> Option<usize> {
        self.index.get(p).map(|&i| i as usize)
    }

    pub fn contains(&self, p: &Permutation) -> bool {
        self.index.contains_key(p)
    }

    /// Id of `p`, or a `NotInGroup` error.
    pub fn require(&self, p: &Permutation) -> Result<usize> {
        self.index_of(p).ok_or_else(|| Error::NotInGroup {
            element: p.to_string(),
            group: self.name.clone(),
        })
    }

    pub fn require_all(&self, ps: &[Permutation]) -> Result<Vec<usize>> {
        ps.iter().map(|p| self.require(p)).collect()
    }

    /// Parse cycle notation at this group's degree and check membership.
    pub fn parse_element(&self, text: &str) -> Result<usize> {
        let p = Permutation::parse(text, self.degree)?;
        self.require(&p)
    }

    fn table(&self) -> Option<&[u32]> {
        self.table
            .get_or_init(|| {
                let n = self.order();
                if n > TABLE_LIMIT {
                    return None;
                }
                let mut t = Vec::with_capacity(n * n);
                for a in &self.elements {
                    for b in &self.elements {
                        t.push(self.index[&a.then(b)]);
                    }
                }
                Some(t)
            })
            .as_deref()
    }

    /// Product of two element ids (`a` then `b`).
    pub fn mul(&self, a: usize, b: usize) -> usize {
        match self.table() {
            Some(t) => t[a * self.order() + b] as usize,
            None => self.index[&self.elements[a].then(&self.elements[b])] as usize,
        }
    }

    pub fn inv(&self, a: usize) -> usize {
        self.inverses.get_or_init(|| {
            self.elements
                .iter()
                .map(|p| self.index[&p.inverse()])
                .collect()
        })[a] as usize
    }

    /// `g⁻¹ x g` on ids.
    pub fn conj(&self, x: usize, g: usize) -> usize {
        self.mul(self.mul(self.inv(g), x), g)
    }

    pub fn classes(&self) -> &ClassPartition {
        self.classes.get_or_init(|| self.compute_classes())
    }

    fn compute_classes(&self) -> ClassPartition {
        let n = self.order();
        let gens: Vec<&Permutation> = self.generators.iter().collect();
        let mut class_of = vec![u32::MAX; n];
        let mut classes = Vec::new();
        for start in 0..n {
            if class_of[start] != u32::MAX {
                continue;
            }
            let label = classes.len() as u32;
            class_of[start] = label;
            let mut members = vec![start];
            let mut queue = VecDeque::from([start]);
            while let Some(cur) = queue.pop_front() {
                let x = &self.elements[cur];
                for g in &gens {
                    let y = self.index[&x.conjugate_unchecked(g)] as usize;
                    if class_of[y] == u32::MAX {
                        class_of[y] = label;
                        members.push(y);
                        queue.push_back(y);
                    }
                }
            }
            members.sort_unstable();
            classes.push(members);
        }
        ClassPartition { class_of, classes }
    }

    /// `{g⁻¹xg : g ∈ G}` in canonical order.
    pub fn conjugacy_class(&self, x: &Permutation) -> Result<Vec<Permutation>> {
        let id = self.require(x)?;
        Ok(self
            .class_ids(id)
            .iter()
            .map(|&i| self.elements[i].clone())
            .collect())
    }

    pub fn class_ids(&self, id: usize) -> &[usize] {
        let classes = self.classes();
        &classes.classes()[classes.class_of(id)]
    }

    /// Number of direct factors (1 unless built as a direct product).
    pub fn factor_count(&self) -> usize {
        self.blocks.len()
    }

    /// Restriction of `p` to the `j`-th direct factor's points.
    pub fn project(&self, p: &Permutation, j: usize) -> Permutation {
        let (offset, degree) = self.blocks[j];
        Permutation::from_images_unchecked(
            p.images()[offset..offset + degree]
                .iter()
                .map(|&q| q - offset as u32)
                .collect(),
        )
    }

    /// Subgroup generated by the given ids, as sorted ids.
    pub fn subgroup_generated(&self, gens: &[usize]) -> Vec<usize> {
        let mut seen = vec![false; self.order()];
        seen[Self::IDENTITY] = true;
        let mut queue = VecDeque::from([Self::IDENTITY]);
        while let Some(cur) = queue.pop_front() {
            for &g in gens {
                let next = self.mul(cur, g);
                if !seen[next] {
                    seen[next] = true;
                    queue.push_back(next);
                }
            }
        }
        (0..self.order()).filter(|&i| seen[i]).collect()
    }

    /// Smallest normal subgroup containing the given ids.
    pub fn normal_closure(&self, ids: &[usize]) -> Vec<usize> {
        let mut gens: Vec<usize> = ids
            .iter()
            .flat_map(|&x| self.class_ids(x).iter().copied())
            .collect();
        gens.sort_unstable();
        gens.dedup();
        self.subgroup_generated(&gens)
    }

    pub fn is_normal_subgroup(&self, ids: &[usize]) -> bool {
        let mut member = vec![false; self.order()];
        for &i in ids {
            member[i] = true;
        }
        if !member[Self::IDENTITY] {
            return false;
        }
        let closed = ids
            .iter()
            .all(|&a| member[self.inv(a)] && ids.iter().all(|&b| member[self.mul(a, b)]));
        closed
            && ids.iter().all(|&a| {
                self.generators
                    .iter()
                    .all(|g| member[self.index[&self.elements[a].conjugate_unchecked(g)] as usize])
            })
    }

    /// `G/N` realized as the action of `G` on the right cosets of `N`,
    /// together with the image id (in the quotient) of every element of `G`.
    pub fn quotient(
        &self,
        name: impl Into<String>,
        normal: &[Permutation],
    ) -> Result<(FiniteGroup, Vec<usize>)> {
        let n_ids = self.require_all(normal)?;
        let mut n_ids = self.subgroup_generated(&n_ids);
        n_ids.sort_unstable();
        if !self.is_normal_subgroup(&n_ids) {
            return Err(Error::Precondition(format!(
                "supplied subgroup is not normal in {}",
                self.name
            )));
        }
        // coset labels by least element
        let mut coset_of = vec![u32::MAX; self.order()];
        let mut count = 0u32;
        for g in 0..self.order() {
            if coset_of[g] != u32::MAX {
                continue;
            }
            for &h in &n_ids {
                coset_of[self.mul(h, g)] = count;
            }
            count += 1;
        }
        let reps: Vec<usize> = {
            let mut reps = vec![usize::MAX; count as usize];
            for g in (0..self.order()).rev() {
                reps[coset_of[g] as usize] = g;
            }
            reps
        };
        let degree = count as usize;
        let action = |g: usize| -> Permutation {
            Permutation::from_images_unchecked(
                reps.iter().map(|&r| coset_of[self.mul(r, g)]).collect(),
            )
        };
        let generators: Vec<Permutation> = self
            .generators
            .iter()
            .map(|g| action(self.index[g] as usize))
            .filter(|p| !p.is_identity())
            .collect();
        let quotient = FiniteGroup::build(
            name,
            GroupSpec::Generated { degree, generators },
            self.order() as u64,
        )?;
        let images = (0..self.order())
            .map(|g| quotient.index[&action(g)] as usize)
            .collect();
        Ok((quotient, images))
    }
}

impl PartialEq for FiniteGroup {
    fn eq(&self, other: &Self) -> bool {
        self.degree == other.degree && self.elements == other.elements
    }
}

type Enumerated = (Vec<Permutation>, Vec<Permutation>, Vec<(usize, usize)>);

fn factorial_capped(m: usize, cap: u64) -> Option<u64> {
    (1..=m as u64).try_fold(1u64, |acc, k| {
        acc.checked_mul(k).filter(|&v| v <= cap.saturating_mul(2))
    })
}

fn enumerate_spec(spec: &GroupSpec, cap: u64) -> Result<Enumerated> {
    let degree = spec.degree();
    if degree == 0 {
        return Err(Error::Precondition("group degree must be positive".into()));
    }
    match spec {
        GroupSpec::Symmetric(m) | GroupSpec::Alternating(m) => {
            let alt = matches!(spec, GroupSpec::Alternating(_));
            let full = factorial_capped(*m, cap);
            let order = full.map(|f| if alt && *m > 1 { f / 2 } else { f });
            if order.is_none_or(|o| o > cap) {
                return Err(Error::CapExceeded {
                    what: format!("order of {}", spec.short_name()),
                    cap,
                });
            }
            let elements = all_permutations(*m)
                .into_iter()
                .filter(|p| !alt || p.is_even())
                .collect();
            let generators = if alt {
                alternating_generators(*m)
            } else {
                symmetric_generators(*m)
            };
            Ok((elements, generators, vec![(0, *m)]))
        }
        GroupSpec::Generated { degree, generators } => {
            for g in generators {
                if g.degree() != *degree {
                    return Err(Error::DegreeMismatch {
                        left: *degree,
                        right: g.degree(),
                    });
                }
            }
            let elements = closure(*degree, generators, cap)?;
            Ok((elements, generators.clone(), vec![(0, *degree)]))
        }
        GroupSpec::DirectProduct(factors) => {
            let mut elements = vec![Permutation::identity(0)];
            let mut generators = Vec::new();
            let mut blocks = Vec::new();
            let mut offset = 0;
            for factor in factors {
                let (f_elems, f_gens, _) = enumerate_spec(factor, cap)?;
                let size = (elements.len() as u64).saturating_mul(f_elems.len() as u64);
                if size > cap {
                    return Err(Error::CapExceeded {
                        what: format!("order of {}", spec.short_name()),
                        cap,
                    });
                }
                let fd = factor.degree();
                let id_before = Permutation::identity(offset);
                let id_factor = Permutation::identity(fd);
                for g in &mut generators {
                    *g = direct_sum(g, &id_factor);
                }
                generators.extend(f_gens.iter().map(|g| direct_sum(&id_before, g)));
                elements = elements
                    .iter()
                    .flat_map(|e| f_elems.iter().map(move |f| direct_sum(e, f)))
                    .collect();
                blocks.push((offset, fd));
                offset += fd;
            }
            Ok((elements, generators, blocks))
        }
    }
}

fn closure(degree: usize, generators: &[Permutation], cap: u64) -> Result<Vec<Permutation>> {
    let identity = Permutation::identity(degree);
    let mut seen: FxHashMap<Permutation, ()> = FxHashMap::default();
    seen.insert(identity.clone(), ());
    let mut queue = VecDeque::from([identity]);
    while let Some(cur) = queue.pop_front() {
        for g in generators {
            let next = cur.then(g);
            if !seen.contains_key(&next) {
                if seen.len() as u64 >= cap {
                    return Err(Error::CapExceeded {
                        what: format!(
                            "closure of {} generators on {degree} points",
                            generators.len()
                        ),
                        cap,
                    });
                }
                seen.insert(next.clone(), ());
                queue.push_back(next);
            }
        }
    }
    Ok(seen.into_keys().collect())
}

/// All permutations of `m` points in lexicographic order of image arrays.
fn all_permutations(m: usize) -> Vec<Permutation> {
    let mut current: Vec<u32> = (0..m as u32).collect();
    let mut out = vec![Permutation::from_images_unchecked(current.clone())];
    while let Some(i) = (1..m).rev().find(|&i| current[i - 1] < current[i]) {
        let pivot = i - 1;
        let j = (pivot + 1..m)
            .rev()
            .find(|&j| current[j] > current[pivot])
            .expect("successor");
        current.swap(pivot, j);
        current[pivot + 1..].reverse();
        out.push(Permutation::from_images_unchecked(current.clone()));
    }
    out
}

fn symmetric_generators(m: usize) -> Vec<Permutation> {
    if m < 2 {
        return Vec::new();
    }
    let mut gens = vec![Permutation::from_cycles(m, &[vec![1, 2]]).expect("transposition")];
    if m > 2 {
        gens.push(Permutation::from_cycles(m, &[(1..=m).collect()]).expect("long cycle"));
    }
    gens
}

fn alternating_generators(m: usize) -> Vec<Permutation> {
    (3..=m)
        .map(|k| Permutation::from_cycles(m, &[vec![1, 2, k]]).expect("3-cycle"))
        .collect()
}
