//! Freely reduced words over a finite alphabet of symbols.

use std::fmt;

use crate::error::{Error, Result};
use crate::group::FiniteGroup;
use crate::perm::Permutation;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Letter {
    pub symbol: usize,
    pub inverse: bool,
}

impl Letter {
    pub fn new(symbol: usize, inverse: bool) -> Self {
        Letter { symbol, inverse }
    }

    pub fn inverted(self) -> Self {
        Letter {
            symbol: self.symbol,
            inverse: !self.inverse,
        }
    }
}

/// A freely reduced word; the empty word is the identity.
#[derive(Debug, Clone, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Word(Vec<Letter>);

impl Word {
    pub fn identity() -> Self {
        Word(Vec::new())
    }

    pub fn new(letters: impl IntoIterator<Item = Letter>) -> Self {
        let mut out: Vec<Letter> = Vec::new();
        for l in letters {
            if out.last() == Some(&l.inverted()) {
                out.pop();
            } else {
                out.push(l);
            }
        }
        Word(out)
    }

    pub fn symbol(symbol: usize) -> Self {
        Word(vec![Letter::new(symbol, false)])
    }

    pub fn letters(&self) -> &[Letter] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn inverse(&self) -> Word {
        Word(self.0.iter().rev().map(|l| l.inverted()).collect())
    }

    pub fn concat(&self, other: &Word) -> Word {
        Word::new(self.0.iter().chain(other.0.iter()).copied())
    }

    pub fn pow(&self, k: i64) -> Word {
        let base = if k < 0 { self.inverse() } else { self.clone() };
        Word::new(std::iter::repeat_n(base.0, k.unsigned_abs() as usize).flatten())
    }

    /// `u⁻¹ self u`.
    pub fn conjugate(&self, u: &Word) -> Word {
        u.inverse().concat(self).concat(u)
    }

    /// Largest symbol index used plus one.
    pub fn symbol_bound(&self) -> usize {
        self.0.iter().map(|l| l.symbol + 1).max().unwrap_or(0)
    }

    /// Evaluate with `images[symbol]`; all images must share `degree`.
    pub fn evaluate(&self, images: &[Permutation], degree: usize) -> Result<Permutation> {
        let mut acc = Permutation::identity(degree);
        for l in &self.0 {
            let img = images
                .get(l.symbol)
                .ok_or_else(|| Error::UnassignedSymbol(format!("#{}", l.symbol)))?;
            let factor = if l.inverse {
                img.inverse()
            } else {
                img.clone()
            };
            acc = acc.compose(&factor)?;
        }
        Ok(acc)
    }

    /// Evaluate on element ids of `group`.
    pub fn evaluate_ids(&self, group: &FiniteGroup, images: &[usize]) -> usize {
        self.0.iter().fold(FiniteGroup::IDENTITY, |acc, l| {
            let img = images[l.symbol];
            group.mul(acc, if l.inverse { group.inv(img) } else { img })
        })
    }

    /// Render with the given symbol names, `name^-1` for inverse letters.
    pub fn display<'a>(&'a self, names: &'a [String]) -> impl fmt::Display + 'a {
        WordDisplay { word: self, names }
    }

    /// Parse whitespace-separated tokens `name`, `name^k` (`k` a non-zero
    /// integer) or `1`. `lookup` maps names to symbols. Errors carry a column
    /// on line 1.
    pub fn parse(text: &str, lookup: impl Fn(&str) -> Option<usize>) -> Result<Word> {
        let mut letters = Vec::new();
        let mut pos = 0;
        for token in text.split_whitespace() {
            let offset = text[pos..].find(token).expect("token in text") + pos;
            pos = offset + token.len();
            let column = text[..offset].chars().count() + 1;
            if token == "1" {
                continue;
            }
            let (name, exponent) = match token.split_once('^') {
                Some((name, e)) => {
                    let e: i64 = e.parse().map_err(|_| {
                        Error::parse(
                            1,
                            column + name.chars().count() + 1,
                            format!("bad exponent `{e}`"),
                        )
                    })?;
                    (name, e)
                }
                None => (token, 1),
            };
            let symbol = lookup(name)
                .ok_or_else(|| Error::parse(1, column, format!("unknown symbol `{name}`")))?;
            let letter = Letter::new(symbol, exponent < 0);
            letters.extend(std::iter::repeat_n(
                letter,
                exponent.unsigned_abs() as usize,
            ));
        }
        Ok(Word::new(letters))
    }
}

struct WordDisplay<'a> {
    word: &'a Word,
    names: &'a [String],
}

impl fmt::Display for WordDisplay<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.word.is_empty() {
            return f.write_str("1");
        }
        for (k, l) in self.word.0.iter().enumerate() {
            if k > 0 {
                f.write_str(" ")?;
            }
            match self.names.get(l.symbol) {
                Some(name) => f.write_str(name)?,
                None => write!(f, "#{}", l.symbol)?,
            }
            if l.inverse {
                f.write_str("^-1")?;
            }
        }
        Ok(())
    }
}
