//! Invariant length functions on enumerated groups.
//!
//! A length function here is a value per element id of its carrier. Three
//! constructions exist: normalized Hamming, the conjugation-closed Cayley
//! word length `min(d(1, h)/n, 1)`, and explicit tables.

use std::collections::VecDeque;

use num_bigint::BigInt;
use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::group::{consequence_letters, FiniteGroup, GroupRef};
use crate::perm::Permutation;
use crate::rational::Rational;

/// At most this many violations are kept with witnesses; the counts are exact.
pub const VIOLATION_SAMPLE: usize = 64;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum LengthKind {
    Hamming,
    CayleyConjugation { base: Vec<Permutation>, n: u32 },
    Table,
}

impl LengthKind {
    pub fn label(&self) -> &'static str {
        match self {
            LengthKind::Hamming => "hamming",
            LengthKind::CayleyConjugation { .. } => "cayley-conjugation",
            LengthKind::Table => "table",
        }
    }
}

#[derive(Debug, Clone)]
pub struct LengthFunction {
    carrier: GroupRef,
    kind: LengthKind,
    values: Vec<Rational>,
}

impl LengthFunction {
    pub fn hamming(carrier: GroupRef) -> Self {
        let values = carrier
            .elements()
            .iter()
            .map(|p| p.hamming_length().into_inner())
            .collect();
        LengthFunction {
            carrier,
            kind: LengthKind::Hamming,
            values,
        }
    }

    /// `‖h‖ = min(d(1, h)/n, 1)` where `d` is the word metric of the Cayley
    /// graph over the alphabet `{x^g : x or x⁻¹ ∈ X, g ∈ G}`; unreachable
    /// elements get 1.
    pub fn cayley_conjugation(carrier: GroupRef, base: &[Permutation], n: u32) -> Result<Self> {
        if n == 0 {
            return Err(Error::Precondition(
                "Cayley length scale n must be positive".into(),
            ));
        }
        let x_ids = carrier.require_all(base)?;
        let letters = consequence_letters(&carrier, &x_ids);
        let mut dist: Vec<Option<u32>> = vec![None; carrier.order()];
        dist[FiniteGroup::IDENTITY] = Some(0);
        let mut queue = VecDeque::from([FiniteGroup::IDENTITY]);
        while let Some(cur) = queue.pop_front() {
            let d = dist[cur].expect("queued");
            if d >= n {
                // anything farther is clamped to 1 anyway
                continue;
            }
            for &b in &letters {
                let next = carrier.mul(cur, b);
                if dist[next].is_none() {
                    dist[next] = Some(d + 1);
                    queue.push_back(next);
                }
            }
        }
        let scale = BigInt::from(n);
        let values = dist
            .into_iter()
            .map(|d| match d {
                Some(d) if d < n => Rational::new(BigInt::from(d), scale.clone()),
                _ => Rational::one(),
            })
            .collect();
        let mut base = base.to_vec();
        base.sort();
        base.dedup();
        Ok(LengthFunction {
            carrier,
            kind: LengthKind::CayleyConjugation { base, n },
            values,
        })
    }

    /// Explicit values; elements not listed get 0.
    pub fn from_table(carrier: GroupRef, entries: &[(Permutation, Rational)]) -> Result<Self> {
        let mut values = vec![Rational::zero(); carrier.order()];
        let mut assigned = vec![false; carrier.order()];
        for (p, v) in entries {
            let id = carrier.require(p)?;
            if assigned[id] {
                return Err(Error::Precondition(format!("length of {p} given twice")));
            }
            if v < &Rational::zero() {
                return Err(Error::Precondition(format!("negative length {v} for {p}")));
            }
            assigned[id] = true;
            values[id] = v.clone();
        }
        Ok(LengthFunction {
            carrier,
            kind: LengthKind::Table,
            values,
        })
    }

    pub fn carrier(&self) -> &GroupRef {
        &self.carrier
    }

    pub fn kind(&self) -> &LengthKind {
        &self.kind
    }

    pub fn value_at(&self, id: usize) -> &Rational {
        &self.values[id]
    }

    pub fn value(&self, p: &Permutation) -> Result<&Rational> {
        Ok(&self.values[self.carrier.require(p)?])
    }

    /// Every element with its value, in canonical order.
    pub fn table(&self) -> Vec<(Permutation, Rational)> {
        self.carrier
            .elements()
            .iter()
            .cloned()
            .zip(self.values.iter().cloned())
            .collect()
    }

    /// `{h : ‖h‖ < radius}` as ids.
    pub fn ball_ids(&self, radius: &Rational) -> Vec<usize> {
        (0..self.values.len())
            .filter(|&i| &self.values[i] < radius)
            .collect()
    }

    /// `{h : ‖h‖ < radius}` in canonical order.
    pub fn ball(&self, radius: &Rational) -> Vec<Permutation> {
        self.ball_ids(radius)
            .into_iter()
            .map(|i| self.carrier.element(i).clone())
            .collect()
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum AxiomViolation {
    Negative {
        element: Permutation,
        value: Rational,
    },
    IdentityNonzero {
        value: Rational,
    },
    /// `‖gh‖ > ‖g‖ + ‖h‖`.
    Subadditivity {
        g: Permutation,
        h: Permutation,
    },
    /// `‖h⁻¹gh‖ ≠ ‖g‖`.
    Invariance {
        g: Permutation,
        h: Permutation,
    },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AxiomReport {
    pub valid: bool,
    pub pairs_checked: u64,
    pub subadditivity_violations: u64,
    pub invariance_violations: u64,
    /// First violations found, in canonical order.
    pub violations: Vec<AxiomViolation>,
}

/// Exhaustive check of `‖1‖ = 0`, `‖gh‖ ≤ ‖g‖ + ‖h‖` and `‖h⁻¹gh‖ = ‖g‖`.
pub fn verify_axioms(length: &LengthFunction) -> AxiomReport {
    let group = &length.carrier;
    let n = group.order();
    let mut violations = Vec::new();
    let push = |v: AxiomViolation, violations: &mut Vec<AxiomViolation>| {
        if violations.len() < VIOLATION_SAMPLE {
            violations.push(v);
        }
    };
    let zero = Rational::zero();
    for (id, v) in length.values.iter().enumerate() {
        if v < &zero {
            push(
                AxiomViolation::Negative {
                    element: group.element(id).clone(),
                    value: v.clone(),
                },
                &mut violations,
            );
        }
    }
    let identity_value = length.value_at(FiniteGroup::IDENTITY);
    let identity_ok = identity_value.is_zero();
    if !identity_ok {
        push(
            AxiomViolation::IdentityNonzero {
                value: identity_value.clone(),
            },
            &mut violations,
        );
    }
    let mut subadditivity_violations = 0;
    let mut invariance_violations = 0;
    for g in 0..n {
        let lg = length.value_at(g);
        for h in 0..n {
            let lh = length.value_at(h);
            if length.value_at(group.mul(g, h)) > &(lg + lh) {
                subadditivity_violations += 1;
                push(
                    AxiomViolation::Subadditivity {
                        g: group.element(g).clone(),
                        h: group.element(h).clone(),
                    },
                    &mut violations,
                );
            }
            if length.value_at(group.conj(g, h)) != lg {
                invariance_violations += 1;
                push(
                    AxiomViolation::Invariance {
                        g: group.element(g).clone(),
                        h: group.element(h).clone(),
                    },
                    &mut violations,
                );
            }
        }
    }
    AxiomReport {
        valid: violations.is_empty(),
        pairs_checked: (n as u64) * (n as u64),
        subadditivity_violations,
        invariance_violations,
        violations,
    }
}
