//! Verification reports: a human-readable summary followed by a
//! `key = value` block.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use crate::complex::DeRhamComplex;

pub const KV_BEGIN: &str = "[values]";
pub const KV_END: &str = "[end]";

#[derive(Clone, Copy, Debug, PartialEq)]
pub enum Criterion {
    /// Pass/fail with no measured value.
    Exact,
    /// The value must be exactly zero.
    Zero,
    /// `value ≤ bound`
    AtMost(f64),
    /// `value ≥ bound`
    AtLeast(f64),
}

#[derive(Clone, Debug, PartialEq)]
pub struct Check {
    pub name: String,
    pub value: f64,
    pub criterion: Criterion,
    pub passed: bool,
}

impl Check {
    pub fn exact(name: &str, passed: bool) -> Self {
        Self {
            name: name.into(),
            value: if passed { 1.0 } else { 0.0 },
            criterion: Criterion::Exact,
            passed,
        }
    }

    pub fn zero(name: &str, value: f64) -> Self {
        Self {
            name: name.into(),
            value,
            criterion: Criterion::Zero,
            passed: value == 0.0,
        }
    }

    pub fn bounded(name: &str, value: f64, bound: f64) -> Self {
        Self {
            name: name.into(),
            value,
            criterion: Criterion::AtMost(bound),
            passed: value <= bound,
        }
    }

    pub fn at_least(name: &str, value: f64, bound: f64) -> Self {
        Self {
            name: name.into(),
            value,
            criterion: Criterion::AtLeast(bound),
            passed: value >= bound,
        }
    }

    fn describe(&self) -> String {
        match self.criterion {
            Criterion::Exact => String::new(),
            Criterion::Zero => format!("{:.3e} == 0", self.value),
            Criterion::AtMost(b) => format!("{:.3e} <= {:.3e}", self.value, b),
            Criterion::AtLeast(b) => format!("{:.3e} >= {:.3e}", self.value, b),
        }
    }
}

#[derive(Clone, Debug, Default, PartialEq)]
pub struct VerificationReport {
    pub title: String,
    pub counts: [usize; 4],
    pub betti: Option<[usize; 4]>,
    pub euler: Option<i64>,
    /// Dimensions of the harmonic 1- and 2-form spaces, when computed.
    pub harmonic_dims: [Option<usize>; 2],
    pub crossing: Vec<Vec<i64>>,
    pub duality: Vec<Vec<f64>>,
    pub circulation: Vec<Vec<f64>>,
    pub flux: Vec<Vec<f64>>,
    /// Extra named quantities such as solver residuals.
    pub values: Vec<(String, f64)>,
    pub checks: Vec<Check>,
    /// Wall-clock seconds per stage.
    pub timings: Vec<(String, f64)>,
}

/// Shortest round-trip form, in exponent notation outside `[1e-4, 1e6)`.
pub fn format_value(x: f64) -> String {
    let a = x.abs();
    if a == 0.0 || (1e-4..1e6).contains(&a) || !a.is_finite() {
        x.to_string()
    } else {
        format!("{x:e}")
    }
}

struct Num(f64);

impl std::fmt::Display for Num {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(&format_value(self.0))
    }
}

fn float_matrix(m: &[Vec<f64>]) -> String {
    let rows: Vec<Vec<Num>> = m.iter().map(|r| r.iter().map(|&x| Num(x)).collect()).collect();
    matrix_line(&rows)
}

fn matrix_line<T: std::fmt::Display>(m: &[Vec<T>]) -> String {
    if m.is_empty() {
        return "[]".into();
    }
    let rows: Vec<String> = m
        .iter()
        .map(|r| r.iter().map(|v| v.to_string()).collect::<Vec<_>>().join(" "))
        .collect();
    format!("[{}]", rows.join("; "))
}

impl VerificationReport {
    pub fn new(complex: &DeRhamComplex) -> Self {
        Self {
            counts: [0, 1, 2, 3].map(|k| complex.count(k)),
            ..Default::default()
        }
    }

    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    pub fn failed_checks(&self) -> impl Iterator<Item = &Check> {
        self.checks.iter().filter(|c| !c.passed)
    }

    pub fn check(&self, name: &str) -> Option<&Check> {
        self.checks.iter().find(|c| c.name == name)
    }

    /// The `key = value` pairs, in output order.
    pub fn key_values(&self) -> Vec<(String, String)> {
        let mut kv: Vec<(String, String)> = Vec::new();
        let mut put = |k: &str, v: String| kv.push((k.to_string(), v));
        if !self.title.is_empty() {
            put("title", self.title.clone());
        }
        put(
            "counts",
            self.counts.iter().map(|c| c.to_string()).collect::<Vec<_>>().join(" "),
        );
        if let Some(b) = self.betti {
            put("betti", b.iter().map(|c| c.to_string()).collect::<Vec<_>>().join(" "));
        }
        if let Some(e) = self.euler {
            put("euler", e.to_string());
        }
        for (k, d) in self.harmonic_dims.iter().enumerate() {
            if let Some(d) = d {
                put(&format!("harmonic_dim.{}", k + 1), d.to_string());
            }
        }
        put("crossing", matrix_line(&self.crossing));
        put("duality", float_matrix(&self.duality));
        put("circulation", float_matrix(&self.circulation));
        put("flux", float_matrix(&self.flux));
        for (k, v) in &self.values {
            put(&format!("value.{k}"), format_value(*v));
        }
        for c in &self.checks {
            put(
                &format!("check.{}", c.name),
                format!("{} {}", if c.passed { "pass" } else { "fail" }, format_value(c.value)),
            );
        }
        put("overall", if self.passed() { "pass" } else { "fail" }.into());
        for (k, t) in &self.timings {
            put(&format!("timing.{k}"), format!("{t:.6}"));
        }
        kv
    }

    pub fn render(&self) -> String {
        let mut s = String::new();
        let _ = writeln!(s, "harmonic verification report");
        if !self.title.is_empty() {
            let _ = writeln!(s, "  {}", self.title);
        }
        let [v, e, f, t] = self.counts;
        let _ = writeln!(s, "  mesh: {v} vertices, {e} edges, {f} faces, {t} cells");
        if let Some(b) = self.betti {
            let _ = writeln!(s, "  betti numbers: ({}, {}, {}, {})", b[0], b[1], b[2], b[3]);
        }
        if let Some(x) = self.euler {
            let _ = writeln!(s, "  euler characteristic: {x}");
        }
        for (k, d) in self.harmonic_dims.iter().enumerate() {
            if let Some(d) = d {
                let _ = writeln!(s, "  harmonic {}-forms: dimension {d}", k + 1);
            }
        }
        for (name, m) in [("duality G", &self.duality), ("flux F", &self.flux), ("lift circulation", &self.circulation)] {
            if !m.is_empty() {
                let _ = writeln!(s, "  {name}:");
                for row in m {
                    let cells: Vec<String> = row.iter().map(|x| format!("{x:>12.9}")).collect();
                    let _ = writeln!(s, "    {}", cells.join(" "));
                }
            }
        }
        if !self.crossing.is_empty() {
            let _ = writeln!(s, "  crossing matrix: {}", matrix_line(&self.crossing));
        }
        let _ = writeln!(s, "checks:");
        for c in &self.checks {
            let _ = writeln!(
                s,
                "  {} {:<28} {}",
                if c.passed { "PASS" } else { "FAIL" },
                c.name,
                c.describe()
            );
        }
        let _ = writeln!(s, "overall: {}", if self.passed() { "PASS" } else { "FAIL" });
        let _ = writeln!(s, "{KV_BEGIN}");
        for (k, v) in self.key_values() {
            let _ = writeln!(s, "{k} = {v}");
        }
        let _ = writeln!(s, "{KV_END}");
        s
    }
}

/// Extracts the `key = value` block of a rendered report.
pub fn parse_key_values(text: &str) -> BTreeMap<String, String> {
    text.lines()
        .skip_while(|l| l.trim() != KV_BEGIN)
        .skip(1)
        .take_while(|l| l.trim() != KV_END)
        .filter_map(|l| l.split_once(" = "))
        .map(|(k, v)| (k.trim().to_string(), v.trim().to_string()))
        .collect()
}
