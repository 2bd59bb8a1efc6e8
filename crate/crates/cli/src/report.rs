//! Structured reports: TOML documents with rationals as `"p/q"` strings and
//! permutations in cycle notation.

use sofic_core::group::SeparationReport;
use sofic_core::rational::format_rational;
use sofic_core::{NormalizedLength, Permutation, Rational};
use toml::{Table, Value};

pub const TOOL: &str = "sofic-wb";
pub const VERSION: &str = env!("CARGO_PKG_VERSION");

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Limits {
    pub cap: u64,
    pub budget: u64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Report {
    root: Table,
}

impl Report {
    pub fn new(command: &str, args: &[String], limits: Limits) -> Self {
        let mut meta = Table::new();
        meta.insert("tool".into(), TOOL.into());
        meta.insert("version".into(), VERSION.into());
        meta.insert("command".into(), command.into());
        meta.insert("args".into(), strings(args));
        meta.insert("cap".into(), int(limits.cap));
        meta.insert("budget".into(), int(limits.budget));
        let mut root = Table::new();
        root.insert("meta".into(), Value::Table(meta));
        Report { root }
    }

    pub fn parse(text: &str) -> Result<Self, String> {
        text.parse::<Table>()
            .map(|root| Report { root })
            .map_err(|e| e.to_string())
    }

    pub fn meta(&self) -> Option<&Table> {
        self.root.get("meta").and_then(Value::as_table)
    }

    pub fn get(&self, section: &str) -> Option<&Table> {
        self.root.get(section).and_then(Value::as_table)
    }

    /// The named top-level table, created on first use.
    pub fn section(&mut self, name: &str) -> &mut Table {
        self.root
            .entry(name.to_owned())
            .or_insert_with(|| Value::Table(Table::new()))
            .as_table_mut()
            .expect("sections are tables")
    }

    pub fn set_status(&mut self, status: &str, exit: i32) {
        let meta = self.section("meta");
        meta.insert("status".into(), status.into());
        meta.insert("exit".into(), Value::Integer(exit.into()));
    }

    pub fn render(&self) -> String {
        toml::to_string(&self.root).expect("reports serialize")
    }
}

pub fn int(v: impl TryInto<i64>) -> Value {
    Value::Integer(v.try_into().unwrap_or(i64::MAX))
}

/// Large counts that may exceed `i64` are written as decimal strings.
pub fn big(v: u128) -> Value {
    match i64::try_from(v) {
        Ok(i) => Value::Integer(i),
        Err(_) => Value::String(v.to_string()),
    }
}

pub fn rat(r: &Rational) -> Value {
    Value::String(format_rational(r))
}

pub fn len(l: &NormalizedLength) -> Value {
    rat(l.value())
}

pub fn perm(p: &Permutation) -> Value {
    Value::String(p.to_string())
}

pub fn perms<'a>(ps: impl IntoIterator<Item = &'a Permutation>) -> Value {
    Value::Array(ps.into_iter().map(perm).collect())
}

pub fn strings<S: AsRef<str>>(items: &[S]) -> Value {
    Value::Array(
        items
            .iter()
            .map(|s| Value::String(s.as_ref().to_owned()))
            .collect(),
    )
}

pub fn ints(items: impl IntoIterator<Item = usize>) -> Value {
    Value::Array(items.into_iter().map(int).collect())
}

pub fn table(entries: impl IntoIterator<Item = (&'static str, Value)>) -> Value {
    Value::Table(
        entries
            .into_iter()
            .map(|(k, v)| (k.to_owned(), v))
            .collect(),
    )
}

pub fn separation(r: &SeparationReport) -> Value {
    let mut t = Table::new();
    t.insert("depth".into(), int(r.depth));
    t.insert("verdict".into(), r.verdict.as_str().into());
    if let Some(w) = &r.witness {
        t.insert("witness".into(), perm(w));
    }
    t.insert(
        "cumulative_verdict".into(),
        r.cumulative_verdict.as_str().into(),
    );
    if let Some((w, depth)) = &r.cumulative_witness {
        t.insert("cumulative_witness".into(), perm(w));
        t.insert("cumulative_witness_depth".into(), int(*depth));
    }
    t.insert(
        "separated_at".into(),
        Value::Array(r.separated_at.iter().map(|&b| Value::Boolean(b)).collect()),
    );
    Value::Table(t)
}

#[cfg(test)]
mod tests {
    use super::*;
    use sofic_core::rational::ratio;

    #[test]
    fn render_and_parse() {
        let mut r = Report::new(
            "length",
            &["--group".into(), "A5".into()],
            Limits {
                cap: 10,
                budget: 20,
            },
        );
        r.section("result")
            .insert("hamming".into(), rat(&ratio(3, 5)));
        r.set_status("ok", 0);
        let text = r.render();
        assert!(text.contains("hamming = \"3/5\""));
        let back = Report::parse(&text).unwrap();
        assert_eq!(back, r);
        assert_eq!(back.meta().unwrap()["cap"].as_integer(), Some(10));
        assert_eq!(big(u128::MAX), Value::String(u128::MAX.to_string()));
    }
}
