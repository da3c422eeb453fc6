use std::fmt::Write as _;
use std::time::Duration;

use super::parse::Source;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Verdict {
    Holds,
    Violated,
    Error,
}

impl Verdict {
    pub fn exit_code(self) -> u8 {
        match self {
            Verdict::Holds => 0,
            Verdict::Violated => 1,
            Verdict::Error => 2,
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            Verdict::Holds => "HOLDS",
            Verdict::Violated => "VIOLATED",
            Verdict::Error => "ERROR",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct InputRecord {
    pub path: String,
    pub sha256: String,
}

impl From<&Source> for InputRecord {
    fn from(s: &Source) -> Self {
        InputRecord {
            path: s.path.display().to_string(),
            sha256: s.sha256.clone(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Table {
    pub name: String,
    pub columns: Vec<String>,
    pub rows: Vec<Vec<String>>,
}

impl Table {
    pub fn new(name: &str, columns: &[&str]) -> Self {
        Table {
            name: name.into(),
            columns: columns.iter().map(|c| c.to_string()).collect(),
            rows: Vec::new(),
        }
    }

    pub fn push(&mut self, row: Vec<String>) {
        debug_assert_eq!(row.len(), self.columns.len());
        self.rows.push(row);
    }
}

/// The first failed check, with both sides as text.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Failure {
    pub check: String,
    pub degree: Option<usize>,
    pub lhs: String,
    pub rhs: String,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RunReport {
    pub command: String,
    pub inputs: Vec<InputRecord>,
    pub facts: Vec<(String, String)>,
    pub tables: Vec<Table>,
    pub verdict: Verdict,
    pub failure: Option<Failure>,
    pub message: Option<String>,
    /// Wall-clock time; shown to humans, left out of the TSV.
    pub elapsed: Duration,
}

impl RunReport {
    pub fn new(command: &str) -> Self {
        RunReport {
            command: command.into(),
            inputs: Vec::new(),
            facts: Vec::new(),
            tables: Vec::new(),
            verdict: Verdict::Holds,
            failure: None,
            message: None,
            elapsed: Duration::ZERO,
        }
    }

    pub fn error(command: &str, inputs: Vec<InputRecord>, message: String) -> Self {
        RunReport {
            inputs,
            verdict: Verdict::Error,
            message: Some(message),
            ..Self::new(command)
        }
    }

    pub fn fact(&mut self, key: &str, value: impl ToString) {
        self.facts.push((key.into(), value.to_string()));
    }

    pub fn input(&mut self, src: &Source) {
        self.inputs.push(src.into());
    }

    /// Records a failure unless an earlier one exists.
    pub fn fail(&mut self, failure: Failure) {
        self.verdict = Verdict::Violated;
        self.failure.get_or_insert(failure);
    }

    pub fn fact_value(&self, key: &str) -> Option<&str> {
        self.facts.iter().find(|(k, _)| k == key).map(|(_, v)| v.as_str())
    }

    pub fn table(&self, name: &str) -> Option<&Table> {
        self.tables.iter().find(|t| t.name == name)
    }

    /// Machine-readable form; byte-identical for identical inputs.
    pub fn to_tsv(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "command\t{}", self.command);
        for i in &self.inputs {
            let _ = writeln!(out, "input\t{}\t{}", i.path, i.sha256);
        }
        let _ = writeln!(out, "verdict\t{}", self.verdict.as_str());
        if let Some(f) = &self.failure {
            let deg = f.degree.map_or("-".to_string(), |d| d.to_string());
            let _ = writeln!(out, "first_failure\t{}\t{}\t{}\t{}", f.check, deg, f.lhs, f.rhs);
        }
        if let Some(m) = &self.message {
            let _ = writeln!(out, "message\t{}", m.replace(['\t', '\n'], " "));
        }
        for (k, v) in &self.facts {
            let _ = writeln!(out, "fact\t{k}\t{v}");
        }
        for t in &self.tables {
            let _ = writeln!(out, "table\t{}\t{}", t.name, t.columns.join("\t"));
            for r in &t.rows {
                let _ = writeln!(out, "row\t{}\t{}", t.name, r.join("\t"));
            }
        }
        out
    }

    pub fn to_human(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "{}", self.command);
        for i in &self.inputs {
            let _ = writeln!(
                out,
                "  input  {} (sha256 {})",
                i.path,
                &i.sha256[..12.min(i.sha256.len())]
            );
        }
        let width = self.facts.iter().map(|(k, _)| k.len()).max().unwrap_or(0);
        for (k, v) in &self.facts {
            let _ = writeln!(out, "  {k:<width$}  {v}");
        }
        for t in &self.tables {
            let _ = writeln!(out, "\n  {}", t.name);
            let widths: Vec<usize> = (0..t.columns.len())
                .map(|c| {
                    t.rows
                        .iter()
                        .map(|r| r[c].chars().count())
                        .chain([t.columns[c].len()])
                        .max()
                        .unwrap_or(0)
                })
                .collect();
            let line = |cells: &[String]| {
                cells
                    .iter()
                    .zip(&widths)
                    .map(|(c, w)| format!("{c:>w$}"))
                    .collect::<Vec<_>>()
                    .join("  ")
            };
            let _ = writeln!(out, "    {}", line(&t.columns));
            for r in &t.rows {
                let _ = writeln!(out, "    {}", line(r));
            }
        }
        if let Some(m) = &self.message {
            let _ = writeln!(out, "\n  error: {m}");
        }
        if let Some(f) = &self.failure {
            let at = f.degree.map_or(String::new(), |d| format!(" at degree {d}"));
            let _ = writeln!(out, "\n  first failure: {}{at}: {} vs {}", f.check, f.lhs, f.rhs);
        }
        let _ = writeln!(
            out,
            "\n  verdict: {} ({:.3} s)",
            self.verdict.as_str(),
            self.elapsed.as_secs_f64()
        );
        out
    }
}
