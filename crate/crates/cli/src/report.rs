use std::fmt::Write as _;

use projquant_core::Poly;
use serde::Serialize;

#[derive(Clone, Debug, Serialize, PartialEq, Eq)]
pub struct Entry {
    pub label: String,
    pub value: String,
}

impl Entry {
    pub fn new(label: impl Into<String>, value: impl ToString) -> Self {
        Entry {
            label: label.into(),
            value: value.to_string(),
        }
    }
}

pub fn entries(components: Vec<(String, Poly)>) -> Vec<Entry> {
    components
        .into_iter()
        .map(|(l, p)| Entry::new(l, p))
        .collect()
}

#[derive(Clone, Debug, Serialize, PartialEq, Eq)]
pub struct Check {
    pub name: String,
    pub pass: bool,
    /// Nonzero components of the discrepancy; empty on PASS.
    pub residual: Vec<Entry>,
}

#[derive(Clone, Copy, Debug, Serialize, PartialEq, Eq)]
#[serde(rename_all = "UPPERCASE")]
pub enum Verdict {
    Pass,
    Fail,
}

#[derive(Clone, Debug, Serialize, PartialEq, Eq)]
pub struct Report {
    pub command: String,
    /// Random inputs substituted for missing document fields, as a document.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub seeded_document: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub summary: Option<String>,
    pub values: Vec<Entry>,
    pub checks: Vec<Check>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub verdict: Option<Verdict>,
}

impl Report {
    pub fn new(command: &str) -> Self {
        Report {
            command: command.to_string(),
            seeded_document: None,
            summary: None,
            values: Vec::new(),
            checks: Vec::new(),
            verdict: None,
        }
    }

    pub fn value(&mut self, label: impl Into<String>, value: impl ToString) {
        self.values.push(Entry::new(label, value));
    }

    pub fn check(&mut self, name: impl Into<String>, residual: Vec<Entry>) {
        self.checks.push(Check {
            name: name.into(),
            pass: residual.is_empty(),
            residual,
        });
    }

    /// Sets the verdict from the recorded checks.
    pub fn conclude(&mut self) {
        self.verdict = Some(if self.checks.iter().all(|c| c.pass) {
            Verdict::Pass
        } else {
            Verdict::Fail
        });
    }

    pub fn passed(&self) -> bool {
        self.verdict != Some(Verdict::Fail)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }

    pub fn to_text(&self) -> String {
        let mut out = String::new();
        if let Some(doc) = &self.seeded_document {
            out.push_str("# seeded document\n");
            for line in doc.lines() {
                writeln!(out, "{}", format!("#   {line}").trim_end()).unwrap();
            }
        }
        if let Some(s) = &self.summary {
            writeln!(out, "{s}").unwrap();
        }
        for e in &self.values {
            writeln!(out, "{} = {}", e.label, e.value).unwrap();
        }
        for c in &self.checks {
            writeln!(out, "[{}] {}", if c.pass { "PASS" } else { "FAIL" }, c.name).unwrap();
            for e in &c.residual {
                writeln!(out, "    {} = {}", e.label, e.value).unwrap();
            }
        }
        if let Some(v) = self.verdict {
            let passed = self.checks.iter().filter(|c| c.pass).count();
            let word = if v == Verdict::Pass { "PASS" } else { "FAIL" };
            writeln!(out, "{word} ({passed}/{})", self.checks.len()).unwrap();
        }
        out
    }
}
