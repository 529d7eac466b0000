//! Report documents (JSON) and their aligned-text rendering.

use std::fmt::Write as _;

use arithdeg::degree::{ComponentInfo, Delta};
use arithdeg::orbit::Verdict;
use arithdeg::{DegreeReport, IntPoly, RealEnclosure};
use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "UPPERCASE")]
pub enum Status {
    Pass,
    Fail,
}

impl Status {
    pub fn from_bool(ok: bool) -> Status {
        if ok {
            Status::Pass
        } else {
            Status::Fail
        }
    }

    pub fn all<'a>(it: impl IntoIterator<Item = &'a Status>) -> Status {
        Status::from_bool(it.into_iter().all(|s| *s == Status::Pass))
    }

    pub fn label(self) -> &'static str {
        match self {
            Status::Pass => "PASS",
            Status::Fail => "FAIL",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Check {
    pub name: String,
    pub status: Status,
    pub detail: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ComponentEstimates {
    pub torus: f64,
    pub elliptic: f64,
    /// `|joint - max(torus, elliptic)|`.
    pub max_rule_gap: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OrbitRecord {
    pub name: String,
    pub kind: String,
    pub iterations: usize,
    pub alpha_hat: Option<f64>,
    pub window: Option<(usize, usize)>,
    pub verdict: Option<Verdict>,
    pub components: Option<ComponentEstimates>,
    /// Member of the predicted degree set the estimate was compared with.
    pub predicted: Option<f64>,
    pub tolerance: f64,
    pub error: Option<String>,
    pub csv: Vec<String>,
    pub status: Status,
    pub detail: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ScenarioReport {
    pub name: String,
    pub description: String,
    pub degrees: DegreeReport,
    pub orbits: Vec<OrbitRecord>,
    pub checks: Vec<Check>,
    pub status: Status,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FactorEntry {
    pub factor: IntPoly,
    pub multiplicity: u32,
    pub degree: usize,
    pub rho: RealEnclosure,
    pub cyclotomic: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FactorReport {
    pub input: IntPoly,
    pub unit: i8,
    pub content: String,
    pub factors: Vec<FactorEntry>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VerifyEntry {
    pub name: String,
    pub status: Status,
    pub golden: Status,
    /// Unified diff against the golden file when it does not match.
    pub diff: Option<String>,
    pub error: Option<String>,
    pub report: Option<ScenarioReport>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VerifyReport {
    pub scenarios: Vec<VerifyEntry>,
    pub status: Status,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Body {
    Degrees(ScenarioReport),
    Orbit(ScenarioReport),
    Factor(FactorReport),
    Verify(VerifyReport),
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ReportDocument {
    pub tool: String,
    pub version: String,
    pub seed: u64,
    /// Maximal enclosure width.
    pub tol: String,
    pub body: Body,
}

impl ReportDocument {
    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("report serializes");
        s.push('\n');
        s
    }

    pub fn from_json(s: &str) -> serde_json::Result<ReportDocument> {
        serde_json::from_str(s)
    }
}

/// The part of a scenario report that is compared against golden files:
/// exact algebra plus estimates rounded to 6 decimals.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Golden {
    pub scenario: String,
    pub minimal_polynomial: String,
    pub components: Vec<String>,
    pub delta: String,
    pub alpha_set: Vec<String>,
    pub orbits: Vec<GoldenOrbit>,
    pub status: Status,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GoldenOrbit {
    pub name: String,
    pub verdict: String,
    pub alpha_hat: String,
    pub status: Status,
}

impl Golden {
    pub fn of(r: &ScenarioReport) -> Golden {
        let d = &r.degrees;
        Golden {
            scenario: r.name.clone(),
            minimal_polynomial: d.minimal_polynomial.to_string(),
            components: d.components.iter().map(component_line).collect(),
            delta: delta_text(&d.delta),
            alpha_set: d.alpha_set.iter().map(|a| format!("{:.9}", a.midpoint())).collect(),
            orbits: r
                .orbits
                .iter()
                .map(|o| GoldenOrbit {
                    name: o.name.clone(),
                    verdict: verdict_label(o.verdict.as_ref(), o.error.is_some()).to_string(),
                    alpha_hat: o.alpha_hat.map_or("-".into(), |a| format!("{a:.6}")),
                    status: o.status,
                })
                .collect(),
            status: r.status,
        }
    }

    pub fn to_text(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("golden serializes");
        s.push('\n');
        s
    }
}

fn component_line(c: &ComponentInfo) -> String {
    format!("({})^{} {}", c.factor, c.multiplicity, c.kind)
}

pub fn verdict_label(v: Option<&Verdict>, error: bool) -> &'static str {
    match v {
        _ if error => "error",
        Some(Verdict::Preperiodic) => "preperiodic",
        Some(Verdict::ConvergedTo(_)) => "converged",
        Some(Verdict::Inconclusive) => "inconclusive",
        None => "-",
    }
}

fn delta_text(d: &Delta) -> String {
    match d {
        Delta::Dominant(e) => format!("{:.9}", e.midpoint()),
        Delta::NotDominant { degree_growth } => {
            format!("not dominant (degree growth {:.9})", degree_growth.midpoint())
        }
    }
}

fn set_text(v: &[RealEnclosure]) -> String {
    let items: Vec<String> = v.iter().map(|e| e.to_string()).collect();
    format!("{{{}}}", items.join(", "))
}

/// Left-aligned columns separated by two spaces.
fn table(header: &[&str], rows: &[Vec<String>]) -> String {
    let mut w: Vec<usize> = header.iter().map(|h| h.chars().count()).collect();
    for r in rows {
        for (i, c) in r.iter().enumerate() {
            w[i] = w[i].max(c.chars().count());
        }
    }
    let line = |cells: Vec<&str>| {
        let mut s = String::new();
        for (i, c) in cells.iter().enumerate() {
            if i + 1 == cells.len() {
                s.push_str(c);
            } else {
                let pad = w[i] - c.chars().count();
                s.push_str(c);
                s.push_str(&" ".repeat(pad + 2));
            }
        }
        s.trim_end().to_string() + "\n"
    };
    let mut out = line(header.to_vec());
    for r in rows {
        out += &line(r.iter().map(|s| s.as_str()).collect());
    }
    out
}

pub fn render_degrees(r: &ScenarioReport) -> String {
    let d = &r.degrees;
    let mut s = String::new();
    let _ = writeln!(s, "scenario: {}", r.name);
    if !r.description.is_empty() {
        let _ = writeln!(s, "  {}", r.description);
    }
    if let Some(p) = &d.torus_polynomial {
        let _ = writeln!(s, "P_T(t) = {p}");
    }
    if let Some(p) = &d.abelian_polynomial {
        let _ = writeln!(s, "P_A(t) = {p}");
    }
    let _ = writeln!(s, "minimal polynomial F(t) = {}", d.minimal_polynomial);
    let rows: Vec<Vec<String>> = d
        .components
        .iter()
        .map(|c| {
            vec![
                c.factor.to_string(),
                c.multiplicity.to_string(),
                c.kind.to_string(),
                c.rho.to_string(),
                if c.cyclotomic { "yes" } else { "no" }.to_string(),
                set_text(&c.contributions),
            ]
        })
        .collect();
    s += &table(&["factor", "mult", "kind", "rho", "cyclotomic", "A_i"], &rows);
    match &d.delta {
        Delta::Dominant(e) => {
            let _ = writeln!(s, "delta_f = {e}");
        }
        Delta::NotDominant { degree_growth } => {
            let _ = writeln!(s, "delta_f: not dominant (degree growth {degree_growth})");
        }
    }
    let _ = writeln!(s, "A(f) = {}", set_text(&d.alpha_set));
    if let Some(l) = &d.alpha_one_locus {
        let _ = writeln!(s, "alpha = 1 locus: {}", l.describe(d.has_translation));
    }
    let _ = writeln!(
        s,
        "translation: {}; removable by conjugation: {}",
        if d.has_translation { "yes" } else { "no" },
        if d.translation_normalizable { "yes" } else { "no" }
    );
    for c in &r.checks {
        let _ = writeln!(s, "check {}: {} ({})", c.name, c.status.label(), c.detail);
    }
    s
}

pub fn render_orbits(r: &ScenarioReport) -> String {
    let rows: Vec<Vec<String>> = r
        .orbits
        .iter()
        .map(|o| {
            vec![
                o.name.clone(),
                o.kind.clone(),
                o.iterations.to_string(),
                o.alpha_hat.map_or("-".into(), |a| format!("{a:.9}")),
                verdict_label(o.verdict.as_ref(), o.error.is_some()).to_string(),
                o.predicted.map_or("-".into(), |p| format!("{p:.9}")),
                o.status.label().to_string(),
                o.detail.clone(),
            ]
        })
        .collect();
    let mut s = table(
        &["orbit", "kind", "N", "alpha_hat", "verdict", "predicted", "status", "detail"],
        &rows,
    );
    for o in &r.orbits {
        for p in &o.csv {
            let _ = writeln!(s, "heights of {}: {p}", o.name);
        }
    }
    let _ = writeln!(s, "{}: {}", r.name, r.status.label());
    s
}

pub fn render_factor(f: &FactorReport) -> String {
    let mut s = String::new();
    let _ = writeln!(s, "f(t) = {}", f.input);
    let sign = if f.unit < 0 { "-" } else { "" };
    let _ = writeln!(s, "scalar: {sign}{}", f.content);
    let rows: Vec<Vec<String>> = f
        .factors
        .iter()
        .map(|e| {
            vec![
                e.factor.to_string(),
                e.multiplicity.to_string(),
                e.degree.to_string(),
                e.rho.to_string(),
                if e.cyclotomic { "yes" } else { "no" }.to_string(),
            ]
        })
        .collect();
    s += &table(&["factor", "mult", "deg", "rho", "cyclotomic"], &rows);
    s
}

pub fn render_verify(v: &VerifyReport) -> String {
    let rows: Vec<Vec<String>> = v
        .scenarios
        .iter()
        .map(|e| {
            let (orbits, checks) = e.report.as_ref().map_or((0, 0), |r| (r.orbits.len(), r.checks.len()));
            vec![
                e.name.clone(),
                orbits.to_string(),
                checks.to_string(),
                e.golden.label().to_string(),
                e.status.label().to_string(),
            ]
        })
        .collect();
    let mut s = table(&["scenario", "orbits", "checks", "golden", "status"], &rows);
    for e in &v.scenarios {
        if let Some(err) = &e.error {
            let _ = writeln!(s, "{}: {err}", e.name);
        }
        if let Some(r) = &e.report {
            for o in r.orbits.iter().filter(|o| o.status == Status::Fail) {
                let _ = writeln!(s, "{} / {}: {}", e.name, o.name, o.detail);
            }
            for c in r.checks.iter().filter(|c| c.status == Status::Fail) {
                let _ = writeln!(s, "{} / {}: {}", e.name, c.name, c.detail);
            }
        }
        if let Some(d) = &e.diff {
            let _ = writeln!(s, "golden mismatch for {}:\n{d}", e.name);
        }
    }
    let _ = writeln!(s, "verify: {}", v.status.label());
    s
}
