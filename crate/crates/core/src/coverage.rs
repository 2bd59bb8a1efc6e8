//! Covering alternating groups by products of conjugacy classes.
//!
//! Small-degree exhaustive checks of three statements about `A_m`, `m ≥ 5`:
//! the ball `{α : ‖α‖ < (n−1)ε/16}` lies inside `C_n(X, A_m)`; the fourth
//! power of a class covers every non-trivial even permutation supported in the
//! support of its elements; and `y ∈ C_{16r}({x})` with `r = ⌈‖y‖/‖x‖⌉`.

use fixedbitset::FixedBitSet;
use num_bigint::BigInt;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::group::{ConsequenceWalk, DepthProfile, FiniteGroup, GroupSpec};
use crate::perm::Permutation;
use crate::rational::{ratio, Rational};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DepthResult {
    Reached(usize),
    NotReached {
        depths_searched: usize,
        /// The layer sequence turned periodic: no depth will ever reach `y`.
        unreachable: bool,
    },
}

impl DepthResult {
    pub fn depth(self) -> Option<usize> {
        match self {
            DepthResult::Reached(d) => Some(d),
            DepthResult::NotReached { .. } => None,
        }
    }
}

/// Least `n ≤ max_n` with `y ∈ C_n(X, G)`.
pub fn min_consequence_depth(
    group: &FiniteGroup,
    x: &[Permutation],
    y: &Permutation,
    max_n: usize,
) -> Result<DepthResult> {
    let x_ids = group.require_all(x)?;
    let y_id = group.require(y)?;
    let mut walk = ConsequenceWalk::new(group, &x_ids);
    for depth in 1..=max_n {
        if walk.contains(depth, y_id) {
            return Ok(DepthResult::Reached(depth));
        }
        if let Some((start, period)) = walk.cycle() {
            // every layer has been seen once start + period is passed
            if depth >= start + period {
                return Ok(DepthResult::NotReached {
                    depths_searched: depth,
                    unreachable: true,
                });
            }
        }
    }
    Ok(DepthResult::NotReached {
        depths_searched: max_n,
        unreachable: walk.cycle().is_some(),
    })
}

fn require_large_alternating(group: &FiniteGroup) -> Result<usize> {
    match group.spec() {
        GroupSpec::Alternating(m) if *m >= 5 => Ok(*m),
        GroupSpec::Alternating(m) => Err(Error::Precondition(format!(
            "alternating degree {m} < 5 (A4 fails: the Klein subgroup is normal)"
        ))),
        _ => Err(Error::Precondition(format!(
            "{} is not an alternating group",
            group.name()
        ))),
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BrennerReport {
    pub m: usize,
    pub n: usize,
    /// Largest Hamming length over `X`.
    pub epsilon: Rational,
    /// `(n − 1) ε / 16`.
    pub threshold: Rational,
    pub ball_size: usize,
    pub consequence_size: usize,
    /// Ball elements missing from `C_n(X, A_m)`.
    pub violations: Vec<Permutation>,
    pub holds: bool,
}

/// Check `{α ∈ A_m : ‖α‖ < (n−1)ε/16} ⊆ C_n(X, A_m)`.
pub fn verify_brenner_bound(
    group: &FiniteGroup,
    x: &[Permutation],
    n: usize,
) -> Result<BrennerReport> {
    let m = require_large_alternating(group)?;
    if x.is_empty() {
        return Err(Error::Precondition("X must be non-empty".into()));
    }
    if x.iter().any(Permutation::is_identity) {
        return Err(Error::Precondition(
            "X must not contain the identity".into(),
        ));
    }
    if n == 0 {
        return Err(Error::Precondition("depth must be positive".into()));
    }
    let x_ids = group.require_all(x)?;
    let epsilon = x
        .iter()
        .map(|p| p.hamming_length().into_inner())
        .max()
        .expect("non-empty");
    let threshold = &epsilon * ratio(n as i64 - 1, 16);
    let mut walk = ConsequenceWalk::new(group, &x_ids);
    let layer = walk.layer(n).clone();
    let mut ball_size = 0;
    let mut violations = Vec::new();
    for (id, p) in group.elements().iter().enumerate() {
        if p.hamming_length().value() < &threshold {
            ball_size += 1;
            if !layer.contains(id) {
                violations.push(p.clone());
            }
        }
    }
    Ok(BrennerReport {
        m,
        n,
        epsilon,
        threshold,
        ball_size,
        consequence_size: layer.count_ones(..),
        holds: violations.is_empty(),
        violations,
    })
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SupportCoverReport {
    pub m: usize,
    pub x: Permutation,
    pub class_size: usize,
    /// Non-trivial even permutations supported inside `supp(x)`.
    pub targets: usize,
    pub violations: Vec<Permutation>,
    pub holds: bool,
}

/// Check that `class(x)^4` contains every non-trivial even permutation whose
/// support lies in `supp(x)`.
pub fn verify_support_cover(group: &FiniteGroup, x: &Permutation) -> Result<SupportCoverReport> {
    let m = require_large_alternating(group)?;
    if x.is_identity() {
        return Err(Error::Precondition("x must be non-trivial".into()));
    }
    let x_id = group.require(x)?;
    let class = group.class_ids(x_id);
    let mut power = FixedBitSet::with_capacity(group.order());
    power.insert(FiniteGroup::IDENTITY);
    for _ in 0..4 {
        let mut next = FixedBitSet::with_capacity(group.order());
        for c in power.ones() {
            for &b in class {
                next.insert(group.mul(c, b));
            }
        }
        power = next;
    }
    let mut inside = vec![false; m];
    for i in x.support() {
        inside[i] = true;
    }
    let mut targets = 0;
    let mut violations = Vec::new();
    for (id, y) in group.elements().iter().enumerate() {
        if id == FiniteGroup::IDENTITY || !y.support().iter().all(|&i| inside[i]) {
            continue;
        }
        targets += 1;
        if !power.contains(id) {
            violations.push(y.clone());
        }
    }
    Ok(SupportCoverReport {
        m,
        x: x.clone(),
        class_size: class.len(),
        targets,
        holds: violations.is_empty(),
        violations,
    })
}

/// `verify_support_cover` for one representative of every non-trivial class.
pub fn support_cover_sweep(group: &FiniteGroup) -> Result<Vec<SupportCoverReport>> {
    require_large_alternating(group)?;
    let reps: Vec<usize> = group
        .classes()
        .representatives()
        .filter(|&r| r != FiniteGroup::IDENTITY)
        .collect();
    reps.par_iter()
        .map(|&r| verify_support_cover(group, group.element(r)))
        .collect()
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CoveringRow {
    pub x: Permutation,
    /// Representative of the class of `y`.
    pub y: Permutation,
    pub y_class_size: usize,
    /// Least `n` with `y ∈ C_n({x})`.
    pub depth: Option<usize>,
    /// `⌈‖y‖/‖x‖⌉`.
    pub ratio_ceil: u64,
    /// `depth / ratio_ceil`.
    pub constant: Option<Rational>,
    /// `depth ≤ 16 · ratio_ceil`.
    pub within_chaining_bound: bool,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CoveringTable {
    pub m: usize,
    pub rows: Vec<CoveringRow>,
    /// Number of `(x, y)` pairs checked against the chaining bound, with `x`
    /// a class representative and `y` any non-trivial element.
    pub pairs_checked: usize,
    pub chaining_bound_holds: bool,
    pub max_constant: Option<Rational>,
}

/// Sweep every non-trivial class representative `x` against every
/// non-trivial `y ∈ A_m`.
pub fn empirical_covering_constant(group: &FiniteGroup) -> Result<CoveringTable> {
    let m = require_large_alternating(group)?;
    let classes = group.classes();
    let reps: Vec<usize> = classes
        .representatives()
        .filter(|&r| r != FiniteGroup::IDENTITY)
        .collect();
    let per_x: Vec<(Vec<CoveringRow>, usize, bool)> = reps
        .par_iter()
        .map(|&x_id| {
            let x = group.element(x_id);
            let profile = DepthProfile::compute(group, &[x_id], group.order());
            let moved_x = x.moved_points() as u64;
            let ceil_for = |y: &Permutation| (y.moved_points() as u64).div_ceil(moved_x);
            let within =
                |depth: Option<usize>, ceil: u64| depth.is_some_and(|d| d as u64 <= 16 * ceil);
            let mut pairs = 0;
            let mut all_within = true;
            for (y_id, y) in group.elements().iter().enumerate().skip(1) {
                pairs += 1;
                all_within &= within(profile.first_depth[y_id], ceil_for(y));
            }
            let rows = reps
                .iter()
                .map(|&y_id| {
                    let y = group.element(y_id);
                    let depth = profile.first_depth[y_id];
                    let ratio_ceil = ceil_for(y);
                    CoveringRow {
                        x: x.clone(),
                        y: y.clone(),
                        y_class_size: classes.classes()[classes.class_of(y_id)].len(),
                        depth,
                        ratio_ceil,
                        constant: depth
                            .map(|d| Rational::new(BigInt::from(d), BigInt::from(ratio_ceil))),
                        within_chaining_bound: within(depth, ratio_ceil),
                    }
                })
                .collect();
            (rows, pairs, all_within)
        })
        .collect();
    let mut rows = Vec::new();
    let mut pairs_checked = 0;
    let mut chaining_bound_holds = true;
    for (r, pairs, ok) in per_x {
        rows.extend(r);
        pairs_checked += pairs;
        chaining_bound_holds &= ok;
    }
    let max_constant = rows.iter().filter_map(|r| r.constant.clone()).max();
    Ok(CoveringTable {
        m,
        rows,
        pairs_checked,
        chaining_bound_holds,
        max_constant,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::integer;

    fn p(text: &str, degree: usize) -> Permutation {
        Permutation::parse(text, degree).unwrap()
    }

    #[test]
    fn depth_of_base_element_is_one() {
        let a5 = FiniteGroup::alternating(5).unwrap();
        let x = p("(1 2 3)", 5);
        assert_eq!(
            min_consequence_depth(&a5, std::slice::from_ref(&x), &x, 10).unwrap(),
            DepthResult::Reached(1)
        );
    }

    #[test]
    fn klein_counterexample_never_reached() {
        let a4 = FiniteGroup::alternating(4).unwrap();
        for max_n in [1, 5, 50, 500] {
            let r =
                min_consequence_depth(&a4, &[p("(1 2)(3 4)", 4)], &p("(1 2 3)", 4), max_n).unwrap();
            assert!(matches!(r, DepthResult::NotReached { .. }), "{r:?}");
            if max_n >= 5 {
                assert!(matches!(
                    r,
                    DepthResult::NotReached {
                        unreachable: true,
                        ..
                    }
                ));
            }
        }
    }

    #[test]
    fn double_transposition_from_three_cycles() {
        // (1 2 3)(2 3 4) ... two 3-cycles can give a double transposition,
        // one cannot
        let a5 = FiniteGroup::alternating(5).unwrap();
        let r = min_consequence_depth(&a5, &[p("(1 2 3)", 5)], &p("(1 2)(3 4)", 5), 10).unwrap();
        assert_eq!(r, DepthResult::Reached(2));
    }

    #[test]
    fn brenner_examples() {
        let a5 = FiniteGroup::alternating(5).unwrap();
        let x = [p("(1 2 3)", 5)];
        let r1 = verify_brenner_bound(&a5, &x, 1).unwrap();
        assert_eq!(r1.threshold, integer(0));
        assert_eq!(r1.ball_size, 0);
        assert!(r1.holds);

        let r17 = verify_brenner_bound(&a5, &x, 17).unwrap();
        assert_eq!(r17.threshold, ratio(3, 5));
        assert_eq!(r17.ball_size, 1); // only the identity moves fewer than 3 points
        assert!(r17.holds);

        let a6 = FiniteGroup::alternating(6).unwrap();
        let r33 = verify_brenner_bound(&a6, &[p("(1 2)(3 4)", 6)], 33).unwrap();
        assert_eq!(r33.threshold, ratio(4, 3));
        assert_eq!(r33.ball_size, 360);
        assert!(r33.holds, "{:?}", r33.violations);
    }

    #[test]
    fn brenner_preconditions() {
        let a4 = FiniteGroup::alternating(4).unwrap();
        assert!(verify_brenner_bound(&a4, &[p("(1 2)(3 4)", 4)], 3).is_err());
        let a5 = FiniteGroup::alternating(5).unwrap();
        assert!(verify_brenner_bound(&a5, &[], 3).is_err());
        assert!(verify_brenner_bound(&a5, &[Permutation::identity(5)], 3).is_err());
    }

    #[test]
    fn brenner_ball_is_consistent_with_depths() {
        let a6 = FiniteGroup::alternating(6).unwrap();
        let x = [p("(1 2 3)", 6)];
        for n in [5, 9, 17, 25] {
            let report = verify_brenner_bound(&a6, &x, n).unwrap();
            assert!(report.holds);
            for y in a6.elements() {
                if y.hamming_length().value() < &report.threshold {
                    let d = min_consequence_depth(&a6, &x, y, n).unwrap();
                    assert!(d.depth().is_some_and(|d| d <= n));
                }
            }
        }
    }

    #[test]
    fn support_cover_examples() {
        let a5 = FiniteGroup::alternating(5).unwrap();
        let five = verify_support_cover(&a5, &p("(1 2 3 4 5)", 5)).unwrap();
        assert_eq!(five.targets, 59);
        assert!(five.holds);
        let three = verify_support_cover(&a5, &p("(1 2 3)", 5)).unwrap();
        assert_eq!(three.targets, 2);
        assert!(three.holds);
        let a4 = FiniteGroup::alternating(4).unwrap();
        assert!(matches!(
            verify_support_cover(&a4, &p("(1 2)(3 4)", 4)),
            Err(Error::Precondition(_))
        ));
    }

    #[test]
    fn covering_table_on_a5() {
        let a5 = FiniteGroup::alternating(5).unwrap();
        let table = empirical_covering_constant(&a5).unwrap();
        assert_eq!(table.pairs_checked, 4 * 59);
        assert!(table.chaining_bound_holds);
        for row in &table.rows {
            if row.x == row.y {
                assert_eq!(row.constant, Some(integer(1)));
            }
        }
        assert!(table.max_constant.clone().unwrap() <= integer(16));
    }
}
