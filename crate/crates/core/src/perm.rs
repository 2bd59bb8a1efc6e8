//! Permutations of `[1..m]` acting on the right.
//!
//! Points are stored zero-based; the text form is one-based cycle notation.
//! The product `a * b` means "first `a`, then `b`": `(i)(ab) = ((i)a)b`, and
//! conjugation is `x^g = g⁻¹ x g`.

use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::rational::Rational;

/// Default largest degree a materialized tensor power may have.
pub const DEFAULT_DEGREE_CAP: u64 = 1_000_000;

#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Permutation {
    images: Vec<u32>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Parity {
    Even,
    Odd,
}

/// A normalized length: an exact rational in `[0, 1]`.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct NormalizedLength(Rational);

impl NormalizedLength {
    pub fn new(value: Rational) -> Result<Self> {
        if value < Rational::zero() || value > Rational::one() {
            return Err(Error::Precondition(format!(
                "normalized length {value} outside [0, 1]"
            )));
        }
        Ok(NormalizedLength(value))
    }

    /// `moved / degree`; `moved <= degree` is the caller's invariant.
    pub fn from_counts(moved: usize, degree: usize) -> Self {
        debug_assert!(moved <= degree && degree > 0);
        NormalizedLength(Rational::new(BigInt::from(moved), BigInt::from(degree)))
    }

    pub fn zero() -> Self {
        NormalizedLength(Rational::zero())
    }

    pub fn value(&self) -> &Rational {
        &self.0
    }

    pub fn into_inner(self) -> Rational {
        self.0
    }
}

impl fmt::Display for NormalizedLength {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}/{}", self.0.numer(), self.0.denom())
    }
}

impl Permutation {
    pub fn identity(degree: usize) -> Self {
        Permutation {
            images: (0..degree as u32).collect(),
        }
    }

    /// Build from zero-based images; `images[i]` is the image of point `i`.
    pub fn from_images(images: Vec<u32>) -> Result<Self> {
        let mut seen = vec![false; images.len()];
        for &p in &images {
            let p = p as usize;
            if p >= images.len() || seen[p] {
                return Err(Error::InvalidPermutation(format!(
                    "{images:?} is not a bijection of its index set"
                )));
            }
            seen[p] = true;
        }
        Ok(Permutation { images })
    }

    pub(crate) fn from_images_unchecked(images: Vec<u32>) -> Self {
        Permutation { images }
    }

    /// Build from one-based cycles.
    pub fn from_cycles(degree: usize, cycles: &[Vec<usize>]) -> Result<Self> {
        let mut images: Vec<u32> = (0..degree as u32).collect();
        let mut used = vec![false; degree];
        for cycle in cycles {
            for &p in cycle {
                if p == 0 || p > degree {
                    return Err(Error::InvalidPermutation(format!(
                        "point {p} outside 1..={degree}"
                    )));
                }
                if used[p - 1] {
                    return Err(Error::InvalidPermutation(format!(
                        "point {p} appears twice"
                    )));
                }
                used[p - 1] = true;
            }
            for (k, &p) in cycle.iter().enumerate() {
                let next = cycle[(k + 1) % cycle.len()];
                images[p - 1] = (next - 1) as u32;
            }
        }
        Ok(Permutation { images })
    }

    /// Parse cycle notation such as `(1 2 3)(4 5)` or `()`. Points inside a
    /// cycle may be separated by spaces or commas. Errors carry a one-based
    /// column on line 1.
    pub fn parse(text: &str, degree: usize) -> Result<Self> {
        let mut cycles: Vec<Vec<usize>> = Vec::new();
        let mut current: Option<Vec<usize>> = None;
        let mut number: Option<(usize, usize)> = None; // (value, start column)
        let mut used = vec![false; degree];

        let mut flush_number =
            |number: &mut Option<(usize, usize)>, current: &mut Option<Vec<usize>>| -> Result<()> {
                if let Some((value, col)) = number.take() {
                    if value == 0 || value > degree {
                        return Err(Error::parse(
                            1,
                            col,
                            format!("point {value} outside 1..={degree}"),
                        ));
                    }
                    if used[value - 1] {
                        return Err(Error::parse(1, col, format!("point {value} repeated")));
                    }
                    used[value - 1] = true;
                    current.as_mut().expect("number outside cycle").push(value);
                }
                Ok(())
            };

        for (i, ch) in text.chars().enumerate() {
            let col = i + 1;
            match ch {
                '(' => {
                    if current.is_some() {
                        return Err(Error::parse(1, col, "nested `(`"));
                    }
                    current = Some(Vec::new());
                }
                ')' => {
                    flush_number(&mut number, &mut current)?;
                    match current.take() {
                        Some(cycle) => cycles.push(cycle),
                        None => return Err(Error::parse(1, col, "unmatched `)`")),
                    }
                }
                '0'..='9' => {
                    if current.is_none() {
                        return Err(Error::parse(1, col, "point outside a cycle"));
                    }
                    let digit = ch as usize - '0' as usize;
                    number = Some(match number {
                        Some((v, start)) => (
                            v.checked_mul(10)
                                .and_then(|v| v.checked_add(digit))
                                .ok_or_else(|| Error::parse(1, start, "point too large"))?,
                            start,
                        ),
                        None => (digit, col),
                    });
                }
                ',' | ' ' | '\t' => flush_number(&mut number, &mut current)?,
                other => {
                    return Err(Error::parse(
                        1,
                        col,
                        format!("unexpected character `{other}`"),
                    ))
                }
            }
        }
        if current.is_some() {
            return Err(Error::parse(
                1,
                text.chars().count() + 1,
                "unterminated cycle",
            ));
        }
        if degree == 0 {
            return Err(Error::parse(1, 1, "degree must be positive"));
        }
        Permutation::from_cycles(degree, &cycles)
    }

    pub fn degree(&self) -> usize {
        self.images.len()
    }

    /// Image of the zero-based point `i`.
    pub fn apply(&self, i: usize) -> usize {
        self.images[i] as usize
    }

    pub fn images(&self) -> &[u32] {
        &self.images
    }

    pub fn is_identity(&self) -> bool {
        self.images.iter().enumerate().all(|(i, &p)| i as u32 == p)
    }

    fn check_degree(&self, other: &Permutation) -> Result<()> {
        if self.degree() != other.degree() {
            return Err(Error::DegreeMismatch {
                left: self.degree(),
                right: other.degree(),
            });
        }
        Ok(())
    }

    /// `self` then `other`.
    pub fn compose(&self, other: &Permutation) -> Result<Permutation> {
        self.check_degree(other)?;
        Ok(self.then(other))
    }

    pub(crate) fn then(&self, other: &Permutation) -> Permutation {
        Permutation {
            images: self
                .images
                .iter()
                .map(|&p| other.images[p as usize])
                .collect(),
        }
    }

    pub fn inverse(&self) -> Permutation {
        let mut images = vec![0u32; self.degree()];
        for (i, &p) in self.images.iter().enumerate() {
            images[p as usize] = i as u32;
        }
        Permutation { images }
    }

    /// `g⁻¹ self g`.
    pub fn conjugate(&self, g: &Permutation) -> Result<Permutation> {
        self.check_degree(g)?;
        Ok(self.conjugate_unchecked(g))
    }

    pub(crate) fn conjugate_unchecked(&self, g: &Permutation) -> Permutation {
        // (i g) x^g = (i x) g
        let mut images = vec![0u32; self.degree()];
        for (i, &p) in self.images.iter().enumerate() {
            images[g.images[i] as usize] = g.images[p as usize];
        }
        Permutation { images }
    }

    pub fn pow(&self, exponent: i64) -> Permutation {
        let base = if exponent < 0 {
            self.inverse()
        } else {
            self.clone()
        };
        let mut e = exponent.unsigned_abs();
        let mut acc = Permutation::identity(self.degree());
        let mut sq = base;
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.then(&sq);
            }
            sq = sq.then(&sq);
            e >>= 1;
        }
        acc
    }

    /// Number of points moved.
    pub fn moved_points(&self) -> usize {
        self.images
            .iter()
            .enumerate()
            .filter(|&(i, &p)| i as u32 != p)
            .count()
    }

    /// Zero-based moved points, ascending.
    pub fn support(&self) -> Vec<usize> {
        self.images
            .iter()
            .enumerate()
            .filter(|&(i, &p)| i as u32 != p)
            .map(|(i, _)| i)
            .collect()
    }

    /// Fraction of points moved, `|{x : xh ≠ x}| / m`.
    pub fn hamming_length(&self) -> NormalizedLength {
        NormalizedLength::from_counts(self.moved_points(), self.degree())
    }

    /// Non-trivial cycles, one-based, each starting at its least point, ordered by that point.
    pub fn cycles(&self) -> Vec<Vec<usize>> {
        let mut seen = vec![false; self.degree()];
        let mut out = Vec::new();
        for start in 0..self.degree() {
            if seen[start] || self.apply(start) == start {
                continue;
            }
            let mut cycle = Vec::new();
            let mut p = start;
            while !seen[p] {
                seen[p] = true;
                cycle.push(p + 1);
                p = self.apply(p);
            }
            out.push(cycle);
        }
        out
    }

    /// Cycle lengths including fixed points, descending.
    pub fn cycle_type(&self) -> Vec<usize> {
        let mut lengths: Vec<usize> = self.cycles().iter().map(Vec::len).collect();
        lengths.extend(std::iter::repeat_n(1, self.degree() - self.moved_points()));
        lengths.sort_unstable_by(|a, b| b.cmp(a));
        lengths
    }

    pub fn parity(&self) -> Parity {
        let transpositions: usize = self.cycles().iter().map(|c| c.len() - 1).sum();
        if transpositions.is_multiple_of(2) {
            Parity::Even
        } else {
            Parity::Odd
        }
    }

    pub fn is_even(&self) -> bool {
        self.parity() == Parity::Even
    }
}

impl fmt::Display for Permutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let cycles = self.cycles();
        if cycles.is_empty() {
            return f.write_str("()");
        }
        for cycle in cycles {
            f.write_str("(")?;
            for (k, p) in cycle.iter().enumerate() {
                if k > 0 {
                    f.write_str(" ")?;
                }
                write!(f, "{p}")?;
            }
            f.write_str(")")?;
        }
        Ok(())
    }
}

impl fmt::Debug for Permutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}[{}]", self.degree())
    }
}

/// Block-disjoint sum: `a` on the first `r` points, `b` shifted onto the next `k`.
pub fn direct_sum(a: &Permutation, b: &Permutation) -> Permutation {
    let shift = a.degree() as u32;
    let mut images = a.images.clone();
    images.extend(b.images.iter().map(|&p| p + shift));
    Permutation { images }
}

/// `copies` blocks of `a`.
pub fn replicate(a: &Permutation, copies: usize) -> Permutation {
    let m = a.degree() as u32;
    let mut images = Vec::with_capacity(a.degree() * copies);
    for c in 0..copies as u32 {
        images.extend(a.images.iter().map(|&p| p + c * m));
    }
    Permutation { images }
}

/// Coordinatewise action of `h` on `[m]^r`, tuples enumerated lexicographically
/// (first coordinate most significant).
pub fn tensor_power(h: &Permutation, r: u32, cap: u64) -> Result<Permutation> {
    if r == 0 {
        return Err(Error::Precondition(
            "tensor power exponent must be positive".into(),
        ));
    }
    let m = h.degree() as u64;
    let degree = m
        .checked_pow(r)
        .filter(|&d| d <= cap)
        .ok_or_else(|| Error::CapExceeded {
            what: format!("tensor power degree {m}^{r}"),
            cap,
        })?;
    let mut images = h.images.clone();
    for _ in 1..r {
        let mut next = Vec::with_capacity(images.len() * m as usize);
        for &hi in &images {
            for &hj in &h.images {
                next.push(hi * m as u32 + hj);
            }
        }
        images = next;
    }
    debug_assert_eq!(images.len() as u64, degree);
    Ok(Permutation { images })
}

/// `1 - (1 - len)^r`, the Hamming length of an `r`-fold tensor power.
pub fn length_of_tensor_power(len: &NormalizedLength, r: u32) -> NormalizedLength {
    let fixed = Rational::one() - len.value();
    let mut fixed_pow = Rational::one();
    for _ in 0..r {
        fixed_pow *= &fixed;
    }
    NormalizedLength(Rational::one() - fixed_pow)
}

/// `S_m → A_{2m}`: every cycle of `s` is repeated on the shifted copy of `[m]`.
pub fn embed_sym_in_alt(s: &Permutation) -> Permutation {
    direct_sum(s, s)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::ratio;

    fn p(text: &str, degree: usize) -> Permutation {
        Permutation::parse(text, degree).unwrap()
    }

    #[test]
    fn right_action_convention() {
        // 1 -(1 2)-> 2 -(2 3)-> 3
        let ab = p("(1 2)", 3).compose(&p("(2 3)", 3)).unwrap();
        assert_eq!(ab.apply(0), 2);
        assert_eq!(ab, p("(1 3 2)", 3));
        // the other order would send 1 to 2
        let ba = p("(2 3)", 3).compose(&p("(1 2)", 3)).unwrap();
        assert_eq!(ba.apply(0), 1);
    }

    #[test]
    fn compose_examples() {
        assert_eq!(
            p("(1 2)", 2).compose(&Permutation::identity(2)).unwrap(),
            p("(1 2)", 2)
        );
        assert_eq!(
            p("(1 2 3)", 3).compose(&p("(1 2 3)", 3)).unwrap(),
            p("(1 3 2)", 3)
        );
        assert!(matches!(
            p("(1 2)", 2).compose(&p("(1 2)", 3)),
            Err(Error::DegreeMismatch { left: 2, right: 3 })
        ));
    }

    #[test]
    fn conjugate_examples() {
        let x = p("(1 2)", 3);
        assert_eq!(x.conjugate(&Permutation::identity(3)).unwrap(), x);
        assert_eq!(x.conjugate(&p("(1 3)", 3)).unwrap(), p("(2 3)", 3));
        // agrees with g⁻¹ x g computed by composition
        let g = p("(1 2 3)", 3);
        let direct = g.inverse().then(&x).then(&g);
        assert_eq!(x.conjugate(&g).unwrap(), direct);
    }

    #[test]
    fn hamming_examples() {
        assert_eq!(
            Permutation::identity(5).hamming_length(),
            NormalizedLength::zero()
        );
        assert_eq!(p("(1 2 3)", 5).hamming_length().value(), &ratio(3, 5));
        assert_eq!(p("(1 2)(3 4)", 4).hamming_length().value(), &ratio(1, 1));
    }

    #[test]
    fn parity_examples() {
        assert_eq!(Permutation::identity(4).parity(), Parity::Even);
        assert_eq!(p("(1 2)", 4).parity(), Parity::Odd);
        assert_eq!(p("(1 2 3)", 4).parity(), Parity::Even);
    }

    #[test]
    fn direct_sum_examples() {
        let id = direct_sum(&Permutation::identity(2), &Permutation::identity(3));
        assert!(id.is_identity());
        assert_eq!(id.degree(), 5);

        let a = p("(1 2)", 2);
        let b3 = p("(1 2 3)", 3);
        assert_eq!(direct_sum(&a, &b3).hamming_length().value(), &ratio(1, 1));
        let b4 = p("(1 2 3)", 4);
        let s = direct_sum(&a, &b4);
        assert_eq!(s, p("(1 2)(3 4 5)", 6));
        assert_eq!(s.hamming_length().value(), &ratio(5, 6));
    }

    #[test]
    fn replication_preserves_length() {
        let h = p("(1 2 3)", 4);
        for copies in 1..5 {
            assert_eq!(replicate(&h, copies).hamming_length(), h.hamming_length());
        }
        assert_eq!(replicate(&h, 2), direct_sum(&h, &h));
    }

    #[test]
    fn tensor_power_examples() {
        let id = tensor_power(&Permutation::identity(3), 3, DEFAULT_DEGREE_CAP).unwrap();
        assert!(id.is_identity());
        assert_eq!(id.degree(), 27);

        let h = p("(1 2)", 4);
        assert_eq!(h.hamming_length().value(), &ratio(1, 2));
        let h2 = tensor_power(&h, 2, DEFAULT_DEGREE_CAP).unwrap();
        assert_eq!(h2.hamming_length().value(), &ratio(3, 4));
        // (0,1) -> (1,0): index 1 -> index 4
        assert_eq!(h2.apply(1), 4);

        assert!(matches!(
            tensor_power(&h, 3, 63),
            Err(Error::CapExceeded { .. })
        ));
    }

    #[test]
    fn tensor_length_examples() {
        assert_eq!(
            length_of_tensor_power(&NormalizedLength::zero(), 5),
            NormalizedLength::zero()
        );
        let half = NormalizedLength::new(ratio(1, 2)).unwrap();
        assert_eq!(length_of_tensor_power(&half, 2).value(), &ratio(3, 4));
        let quarter = NormalizedLength::new(ratio(1, 4)).unwrap();
        assert_eq!(length_of_tensor_power(&quarter, 3).value(), &ratio(37, 64));
    }

    #[test]
    fn embed_examples() {
        let e = embed_sym_in_alt(&Permutation::identity(3));
        assert!(e.is_identity() && e.degree() == 6);
        let t = embed_sym_in_alt(&p("(1 2)", 2));
        assert_eq!(t, p("(1 2)(3 4)", 4));
        assert!(t.is_even());
        assert_eq!(t.hamming_length().value(), &ratio(1, 1));
    }

    #[test]
    fn cycle_notation_round_trip() {
        for text in ["()", "(1 2 3)(4 5)", "(1 5)(2 3 4)"] {
            assert_eq!(p(text, 6).to_string(), text);
        }
        assert_eq!(p("(3,1,2)", 3).to_string(), "(1 2 3)");
        assert_eq!(p("(4)", 4).to_string(), "()");
    }

    #[test]
    fn parse_diagnostics() {
        let column = |text: &str, degree: usize| match Permutation::parse(text, degree) {
            Err(Error::Parse { column, .. }) => column,
            other => panic!("expected parse error, got {other:?}"),
        };
        assert_eq!(column("(1 2 9)", 5), 6);
        assert_eq!(column("(1 2)(2 3)", 5), 7);
        assert_eq!(column("(1 2", 5), 5);
        assert_eq!(column("(1 x)", 5), 4);
        assert_eq!(column("1 2", 5), 1);
    }

    #[test]
    fn cycle_type_and_pow() {
        let x = p("(1 2 3)(4 5)", 6);
        assert_eq!(x.cycle_type(), vec![3, 2, 1]);
        assert!(x.pow(6).is_identity());
        assert_eq!(x.pow(-1), x.inverse());
        assert_eq!(x.pow(2), x.then(&x));
    }
}
