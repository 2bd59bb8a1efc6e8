//! Named groups: built-in names and line-oriented catalog files.
//!
//! Built-in names are `S<m>`, `A<m>`, `Z<k>`, `D<k>` (dihedral of the
//! `k`-gon), `V4`, `Q8`, and `x`-joined products such as `Z2xZ2`.
//!
//! Catalog records, one per line, `#` for comments:
//!
//! ```text
//! S4   symmetric   4
//! A5   alternating 5
//! Z6   cyclic      6
//! K    generated   4  (1 2)(3 4); (1 3)(2 4)
//! KxZ6 product     K Z6
//! ```

use std::path::{Path, PathBuf};
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::group::{FiniteGroup, GroupRef, GroupSpec};
use crate::perm::Permutation;

/// Directory searched for `default.catalog` when no catalog file is given.
pub const CATALOG_DIR_ENV: &str = "SOFIC_WB_CATALOG_DIR";

pub const DEFAULT_CATALOG_FILE: &str = "default.catalog";

fn parse_degree(text: &str) -> Option<usize> {
    if text.is_empty() || !text.bytes().all(|b| b.is_ascii_digit()) {
        return None;
    }
    text.parse().ok().filter(|&k| k >= 1)
}

fn dihedral(k: usize) -> Result<GroupSpec> {
    if k < 3 {
        return Err(Error::UnknownGroup(format!("D{k}")));
    }
    let rotation: Vec<usize> = (1..=k).collect();
    let reflection: Vec<Vec<usize>> = (2..=k)
        .map(|i| (i, k + 2 - i))
        .filter(|(i, j)| i < j)
        .map(|(i, j)| vec![i, j])
        .collect();
    Ok(GroupSpec::Generated {
        degree: k,
        generators: vec![
            Permutation::from_cycles(k, &[rotation])?,
            Permutation::from_cycles(k, &reflection)?,
        ],
    })
}

/// Description of a built-in name, without enumerating it.
pub fn builtin_spec(name: &str) -> Result<GroupSpec> {
    if name.contains('x') {
        let factors = name
            .split('x')
            .map(builtin_spec)
            .collect::<Result<Vec<_>>>()
            .map_err(|_| Error::UnknownGroup(name.to_owned()))?;
        return Ok(GroupSpec::DirectProduct(factors));
    }
    match name {
        "V4" => {
            return Ok(GroupSpec::Generated {
                degree: 4,
                generators: vec![
                    Permutation::parse("(1 2)(3 4)", 4)?,
                    Permutation::parse("(1 3)(2 4)", 4)?,
                ],
            })
        }
        "Q8" => {
            return Ok(GroupSpec::Generated {
                degree: 8,
                generators: vec![
                    Permutation::parse("(1 2 3 4)(5 6 7 8)", 8)?,
                    Permutation::parse("(1 5 3 7)(2 8 4 6)", 8)?,
                ],
            })
        }
        _ => {}
    }
    let unknown = || Error::UnknownGroup(name.to_owned());
    let mut chars = name.chars();
    let kind = chars.next().ok_or_else(unknown)?;
    let k = parse_degree(chars.as_str()).ok_or_else(unknown)?;
    match kind {
        'S' => Ok(GroupSpec::Symmetric(k)),
        'A' => Ok(GroupSpec::Alternating(k)),
        'Z' => Ok(GroupSpec::cyclic(k)),
        'D' => dihedral(k),
        _ => Err(unknown()),
    }
}

pub fn builtin(name: &str, cap: u64) -> Result<FiniteGroup> {
    FiniteGroup::build(name, builtin_spec(name)?, cap)
}

/// An ordered list of named groups.
#[derive(Debug, Clone, Default)]
pub struct Catalog {
    groups: Vec<GroupRef>,
}

impl Catalog {
    pub fn new(groups: Vec<GroupRef>) -> Self {
        Catalog { groups }
    }

    /// Built-in groups by name, in the given order.
    pub fn from_names(names: &[&str], cap: u64) -> Result<Self> {
        let groups = names
            .iter()
            .map(|n| builtin(n, cap).map(Arc::new))
            .collect::<Result<_>>()?;
        Ok(Catalog { groups })
    }

    pub fn parse(text: &str, cap: u64) -> Result<Self> {
        let mut catalog = Catalog::default();
        for (k, raw) in text.lines().enumerate() {
            let line_no = k + 1;
            let line = raw.split('#').next().unwrap_or("");
            let fields = field_spans(line);
            let Some(&(name_col, name)) = fields.first() else {
                continue;
            };
            if catalog.get(name).is_some() {
                return Err(Error::parse(
                    line_no,
                    name_col,
                    format!("group `{name}` defined twice"),
                ));
            }
            let Some(&(kind_col, kind)) = fields.get(1) else {
                return Err(Error::parse(
                    line_no,
                    name_col + name.len(),
                    "missing group kind",
                ));
            };
            let degree_field = |what: &str| -> Result<usize> {
                let &(col, text) = fields.get(2).ok_or_else(|| {
                    Error::parse(line_no, kind_col + kind.len(), format!("missing {what}"))
                })?;
                parse_degree(text)
                    .ok_or_else(|| Error::parse(line_no, col, format!("bad {what} `{text}`")))
            };
            let spec = match kind {
                "symmetric" | "alternating" | "cyclic" => {
                    if let Some(&(col, _)) = fields.get(3) {
                        return Err(Error::parse(line_no, col, "unexpected field"));
                    }
                    let m = degree_field("degree")?;
                    match kind {
                        "symmetric" => GroupSpec::Symmetric(m),
                        "alternating" => GroupSpec::Alternating(m),
                        _ => GroupSpec::cyclic(m),
                    }
                }
                "generated" => {
                    let degree = degree_field("degree")?;
                    let start = fields.get(3).map_or(line.len(), |&(col, _)| col - 1);
                    let mut generators = Vec::new();
                    let mut offset = start;
                    for piece in line[start..].split(';') {
                        let lead = piece.len() - piece.trim_start().len();
                        if !piece.trim().is_empty() {
                            let g = Permutation::parse(piece.trim(), degree)
                                .map_err(|e| e.at_line(line_no, offset + lead))?;
                            generators.push(g);
                        }
                        offset += piece.len() + 1;
                    }
                    GroupSpec::Generated { degree, generators }
                }
                "product" => {
                    if fields.len() < 3 {
                        return Err(Error::parse(
                            line_no,
                            kind_col + kind.len(),
                            "product needs factors",
                        ));
                    }
                    let mut factors = Vec::new();
                    for &(col, factor) in &fields[2..] {
                        let g = catalog.get(factor).ok_or_else(|| {
                            Error::parse(line_no, col, format!("unknown factor `{factor}`"))
                        })?;
                        factors.push(g.spec().clone());
                    }
                    GroupSpec::DirectProduct(factors)
                }
                other => {
                    return Err(Error::parse(
                        line_no,
                        kind_col,
                        format!("unknown kind `{other}`"),
                    ));
                }
            };
            let group = FiniteGroup::build(name, spec, cap).map_err(|e| match e {
                Error::CapExceeded { .. } => e,
                other => Error::parse(line_no, name_col, other.to_string()),
            })?;
            catalog.groups.push(Arc::new(group));
        }
        Ok(catalog)
    }

    pub fn load(path: &Path, cap: u64) -> Result<Self> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| Error::Precondition(format!("cannot read {}: {e}", path.display())))?;
        Catalog::parse(&text, cap)
    }

    /// `$SOFIC_WB_CATALOG_DIR/default.catalog`, when the variable is set.
    pub fn default_path() -> Option<PathBuf> {
        std::env::var_os(CATALOG_DIR_ENV).map(|d| PathBuf::from(d).join(DEFAULT_CATALOG_FILE))
    }

    pub fn groups(&self) -> &[GroupRef] {
        &self.groups
    }

    pub fn len(&self) -> usize {
        self.groups.len()
    }

    pub fn is_empty(&self) -> bool {
        self.groups.is_empty()
    }

    pub fn names(&self) -> Vec<&str> {
        self.groups.iter().map(|g| g.name()).collect()
    }

    pub fn get(&self, name: &str) -> Option<&GroupRef> {
        self.groups.iter().find(|g| g.name() == name)
    }

    /// A catalog entry, else a built-in name.
    pub fn resolve(&self, name: &str, cap: u64) -> Result<GroupRef> {
        match self.get(name) {
            Some(g) => Ok(g.clone()),
            None => builtin(name, cap).map(Arc::new),
        }
    }

    /// Catalog text that parses back to the same groups.
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        for g in &self.groups {
            out.push_str(&record(g.name(), g.spec(), self));
            out.push('\n');
        }
        out
    }
}

fn record(name: &str, spec: &GroupSpec, catalog: &Catalog) -> String {
    match spec {
        GroupSpec::Symmetric(m) => format!("{name} symmetric {m}"),
        GroupSpec::Alternating(m) => format!("{name} alternating {m}"),
        GroupSpec::Generated { degree, generators } => {
            let gens: Vec<String> = generators.iter().map(ToString::to_string).collect();
            format!("{name} generated {degree} {}", gens.join("; "))
        }
        GroupSpec::DirectProduct(factors) => {
            let names: Vec<&str> = factors
                .iter()
                .map(|f| {
                    catalog
                        .groups
                        .iter()
                        .find(|g| g.spec() == f)
                        .map_or("?", |g| g.name())
                })
                .collect();
            format!("{name} product {}", names.join(" "))
        }
    }
}

/// Whitespace-separated fields with 1-based starting columns.
fn field_spans(line: &str) -> Vec<(usize, &str)> {
    let mut out = Vec::new();
    let mut start = None;
    for (i, c) in line.char_indices() {
        match (c.is_whitespace(), start) {
            (false, None) => start = Some(i),
            (true, Some(s)) => {
                out.push((s + 1, &line[s..i]));
                start = None;
            }
            _ => {}
        }
    }
    if let Some(s) = start {
        out.push((s + 1, &line[s..]));
    }
    out
}
