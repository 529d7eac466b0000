//! Executes scenarios and assembles reports.

use std::fs;
use std::io::BufWriter;
use std::path::{Path, PathBuf};

use arithdeg::degree::{degree_report, DegreeError};
use arithdeg::exec::{map_ordered, ExecMode};
use arithdeg::orbit::{
    ec_alpha_estimate, product_alpha_estimate, torus_alpha_estimate, write_heights_csv,
    OrbitError, Verdict,
};
use arithdeg::polyfactor::{factor_over_q_seeded, is_cyclotomic, spectral_radius, PolyError};
use arithdeg::{DegreeOptions, IntPoly};
use num_rational::BigRational;
use thiserror::Error;

use crate::bundled::{ScenarioSource, Suite};
use crate::report::{
    Check, ComponentEstimates, FactorEntry, FactorReport, Golden, OrbitRecord, ScenarioReport,
    Status, VerifyEntry, VerifyReport,
};
use crate::scenario::{OrbitJob, OrbitSystem, Scenario, SchemaError};

#[derive(Debug, Error)]
pub enum CliError {
    #[error(transparent)]
    Schema(#[from] SchemaError),
    /// Bad command-line input (unreadable file, malformed polynomial, ...).
    #[error("{0}")]
    Input(String),
    #[error("computation failed: {0}")]
    Compute(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Schema(_) | CliError::Input(_) => 2,
            CliError::Compute(_) => 1,
        }
    }
}

impl From<DegreeError> for CliError {
    fn from(e: DegreeError) -> Self {
        CliError::Compute(e.to_string())
    }
}

#[derive(Debug, Clone)]
pub struct RunOptions {
    pub seed: u64,
    pub tol: BigRational,
    pub dump_heights: Option<PathBuf>,
}

impl RunOptions {
    fn degree_options(&self) -> DegreeOptions {
        DegreeOptions {
            tol: self.tol.clone(),
            seed: self.seed,
        }
    }
}

pub fn read_scenario(path: &Path) -> Result<Scenario, CliError> {
    let text = fs::read_to_string(path)
        .map_err(|e| CliError::Input(format!("cannot read {}: {e}", path.display())))?;
    let name = path
        .file_stem()
        .map_or_else(|| path.display().to_string(), |s| s.to_string_lossy().into_owned());
    Ok(Scenario::load(&text, &name)?)
}

/// Degree section only.
pub fn run_degrees(s: &Scenario, opts: &RunOptions) -> Result<ScenarioReport, CliError> {
    let degrees = degree_report(&s.endo, &opts.degree_options())?;
    let checks = degree_checks(s, &degrees);
    let status = Status::all(checks.iter().map(|c| &c.status));
    Ok(ScenarioReport {
        name: s.name.clone(),
        description: s.description.clone(),
        degrees,
        orbits: Vec::new(),
        checks,
        status,
    })
}

/// Degree section plus every orbit block.
pub fn run_scenario(s: &Scenario, opts: &RunOptions) -> Result<ScenarioReport, CliError> {
    let mut report = run_degrees(s, opts)?;
    let predicted: Vec<f64> = report.degrees.alpha_set.iter().map(|a| a.midpoint()).collect();
    let outcomes = map_ordered(ExecMode::Parallel, &s.orbits, run_orbit);
    let mut records = Vec::with_capacity(outcomes.len());
    for (job, outcome) in s.orbits.iter().zip(outcomes) {
        let mut rec = evaluate(job, &outcome, &predicted);
        if let Some(dir) = &opts.dump_heights {
            rec.csv = dump(dir, &s.name, &job.name, &outcome)?;
        }
        records.push(rec);
    }
    report.orbits = records;
    report.status = Status::all(
        report
            .checks
            .iter()
            .map(|c| &c.status)
            .chain(report.orbits.iter().map(|o| &o.status)),
    );
    Ok(report)
}

fn degree_checks(s: &Scenario, d: &arithdeg::DegreeReport) -> Vec<Check> {
    let Some(x) = &s.expect else {
        return Vec::new();
    };
    let tol = x.tolerance;
    let width_ok = |e: &arithdeg::RealEnclosure| e.width() <= BigRational::from_float(tol).unwrap();
    let mut out = Vec::new();
    if let Some(dom) = x.dominant {
        out.push(Check {
            name: "dominant".into(),
            status: Status::from_bool(d.delta.is_dominant() == dom),
            detail: format!("expected {dom}, got {}", d.delta.is_dominant()),
        });
    }
    if let Some(v) = x.delta {
        let e = d.delta.value();
        out.push(Check {
            name: "delta".into(),
            status: Status::from_bool((e.midpoint() - v).abs() <= tol && width_ok(e)),
            detail: format!("expected {v}, got {e}"),
        });
    }
    if let Some(set) = &x.alpha_set {
        let ok = set.len() == d.alpha_set.len()
            && set
                .iter()
                .zip(&d.alpha_set)
                .all(|(v, e)| (e.midpoint() - v).abs() <= tol && width_ok(e));
        let got: Vec<String> = d.alpha_set.iter().map(|e| e.to_string()).collect();
        out.push(Check {
            name: "alpha_set".into(),
            status: Status::from_bool(ok),
            detail: format!("expected {set:?}, got {{{}}}", got.join(", ")),
        });
    }
    out
}

enum Outcome {
    Single(Result<arithdeg::orbit::OrbitEstimate, OrbitError>),
    Product(Result<arithdeg::orbit::ProductEstimate, OrbitError>),
}

fn run_orbit(job: &OrbitJob) -> Outcome {
    match &job.system {
        OrbitSystem::Torus(f, x) => Outcome::Single(torus_alpha_estimate(f, x, job.iterations)),
        OrbitSystem::Elliptic(sys, p) => {
            Outcome::Single(ec_alpha_estimate(sys, p, job.iterations, job.bit_budget))
        }
        OrbitSystem::Product((f, x), (sys, p)) => Outcome::Product(product_alpha_estimate(
            (f, x),
            (sys, p),
            job.iterations,
            job.bit_budget,
        )),
    }
}

fn nearest(v: f64, set: &[f64]) -> f64 {
    set.iter()
        .copied()
        .min_by(|a, b| (a - v).abs().total_cmp(&(b - v).abs()))
        .expect("degree set contains 1")
}

fn evaluate(job: &OrbitJob, outcome: &Outcome, predicted: &[f64]) -> OrbitRecord {
    let mut rec = OrbitRecord {
        name: job.name.clone(),
        kind: job.system.kind().to_string(),
        iterations: job.iterations,
        alpha_hat: None,
        window: None,
        verdict: None,
        components: None,
        predicted: None,
        tolerance: job.tolerance,
        error: None,
        csv: Vec::new(),
        status: Status::Fail,
        detail: String::new(),
    };
    let est = match outcome {
        Outcome::Single(Ok(e)) => e,
        Outcome::Product(Ok(p)) => {
            rec.components = Some(ComponentEstimates {
                torus: p.torus.alpha_hat,
                elliptic: p.elliptic.alpha_hat,
                max_rule_gap: (p.joint.alpha_hat - p.max_component()).abs(),
            });
            &p.joint
        }
        Outcome::Single(Err(e)) | Outcome::Product(Err(e)) => {
            rec.error = Some(e.to_string());
            rec.detail = e.to_string();
            return rec;
        }
    };
    let a = est.alpha_hat;
    rec.alpha_hat = Some(a);
    rec.window = Some(est.window);
    rec.verdict = Some(est.verdict.clone());
    let preperiodic = est.verdict == Verdict::Preperiodic;
    let mut problems = Vec::new();
    let target = match job.expect {
        Some(e) => {
            if !predicted.iter().any(|p| (p - e).abs() <= 1e-9 * e.max(1.0)) {
                problems.push(format!("expected value {e} is not in the predicted set"));
            }
            e
        }
        None if preperiodic => 1.0,
        None => nearest(a, predicted),
    };
    rec.predicted = Some(target);
    if preperiodic && target != 1.0 {
        problems.push(format!("orbit is preperiodic but {target} was expected"));
    }
    if job.expect_preperiodic && !preperiodic {
        problems.push("orbit was expected to be preperiodic".to_string());
    }
    if (a - target).abs() > job.tolerance {
        problems.push(format!(
            "|alpha_hat - {target:.9}| = {:.3e} exceeds {:.1e}",
            (a - target).abs(),
            job.tolerance
        ));
    }
    if let Some(c) = &rec.components {
        if c.max_rule_gap > job.tolerance {
            problems.push(format!(
                "product rule gap {:.3e} exceeds {:.1e}",
                c.max_rule_gap, job.tolerance
            ));
        }
    }
    rec.status = Status::from_bool(problems.is_empty());
    rec.detail = if problems.is_empty() {
        format!("within {:.1e}", job.tolerance)
    } else {
        problems.join("; ")
    };
    rec
}

fn file_part(s: &str) -> String {
    s.chars()
        .map(|c| if c.is_ascii_alphanumeric() || c == '-' || c == '_' { c } else { '_' })
        .collect()
}

fn dump(dir: &Path, scenario: &str, orbit: &str, outcome: &Outcome) -> Result<Vec<String>, CliError> {
    let io = |e: std::io::Error| CliError::Input(format!("cannot write heights to {}: {e}", dir.display()));
    fs::create_dir_all(dir).map_err(io)?;
    let mut series: Vec<(String, &[Option<f64>])> = Vec::new();
    let base = format!("{}__{}", file_part(scenario), file_part(orbit));
    match outcome {
        Outcome::Single(Ok(e)) => series.push((base, &e.ln_heights)),
        Outcome::Product(Ok(p)) => {
            series.push((base.clone(), &p.joint.ln_heights));
            series.push((format!("{base}__torus"), &p.torus.ln_heights));
            series.push((format!("{base}__elliptic"), &p.elliptic.ln_heights));
        }
        Outcome::Single(Err(OrbitError::BitBudgetExceeded { ln_heights, .. }))
        | Outcome::Product(Err(OrbitError::BitBudgetExceeded { ln_heights, .. })) => {
            series.push((format!("{base}__partial"), ln_heights))
        }
        _ => {}
    }
    let mut paths = Vec::new();
    for (stem, h) in series {
        let path = dir.join(format!("{stem}.csv"));
        let file = fs::File::create(&path).map_err(io)?;
        write_heights_csv(BufWriter::new(file), h).map_err(io)?;
        paths.push(path.display().to_string());
    }
    Ok(paths)
}

/// Accepts `1,0,0,0,-1` (constant term first) or `t^4 - 1`.
pub fn parse_poly_arg(s: &str) -> Result<IntPoly, CliError> {
    let s = s.trim();
    if s.contains(|c: char| c.is_ascii_alphabetic()) {
        return s.parse().map_err(|e: PolyError| CliError::Input(e.to_string()));
    }
    let coeffs: Result<Vec<num_bigint::BigInt>, _> = s.split(',').map(|c| c.trim().parse()).collect();
    coeffs
        .map(IntPoly::new)
        .map_err(|_| CliError::Input(format!("cannot parse polynomial {s:?}: expected t-expression or comma-separated coefficients")))
}

pub fn run_factor(f: &IntPoly, opts: &RunOptions) -> Result<FactorReport, CliError> {
    let fp = factor_over_q_seeded(f, opts.seed).map_err(|e| CliError::Input(e.to_string()))?;
    let tol = opts.tol.clone().min(arithdeg::degree::dedup_width());
    let entries = map_ordered(ExecMode::Parallel, &fp.factors, |(g, e)| {
        let rho = spectral_radius(g, &tol)?;
        let cyclotomic = g.is_monic() && is_cyclotomic(g)?;
        Ok::<_, PolyError>(FactorEntry {
            factor: g.clone(),
            multiplicity: *e,
            degree: g.degree().unwrap_or(0),
            rho,
            cyclotomic,
        })
    });
    let factors: Result<Vec<FactorEntry>, PolyError> = entries.into_iter().collect();
    Ok(FactorReport {
        input: f.clone(),
        unit: fp.unit,
        content: fp.content.to_string(),
        factors: factors.map_err(|e| CliError::Compute(e.to_string()))?,
    })
}

fn diff(expected: &str, actual: &str) -> String {
    similar::TextDiff::from_lines(expected, actual)
        .unified_diff()
        .header("golden", "actual")
        .to_string()
}

/// Runs a suite and compares each scenario with its golden file. With
/// `bless`, golden files are rewritten instead of compared.
pub fn run_verify(suite: &Suite, opts: &RunOptions, bless: Option<&Path>) -> Result<VerifyReport, CliError> {
    let results = map_ordered(ExecMode::Parallel, &suite.scenarios, |src: &ScenarioSource| {
        Scenario::load(&src.toml, &src.name)
            .map_err(CliError::from)
            .and_then(|s| run_scenario(&s, opts))
    });
    let mut entries = Vec::new();
    for (src, res) in suite.scenarios.iter().zip(results) {
        let entry = match res {
            Err(e) => VerifyEntry {
                name: src.name.clone(),
                status: Status::Fail,
                golden: Status::Fail,
                diff: None,
                error: Some(e.to_string()),
                report: None,
            },
            Ok(report) => {
                let actual = Golden::of(&report).to_text();
                if let Some(dir) = bless {
                    let path = dir.join(format!("{}.golden.json", src.name));
                    fs::write(&path, &actual)
                        .map_err(|e| CliError::Input(format!("cannot write {}: {e}", path.display())))?;
                }
                let (golden, diff_text) = match (&src.golden, bless) {
                    (_, Some(_)) => (Status::Pass, None),
                    (Some(g), None) if *g == actual => (Status::Pass, None),
                    (Some(g), None) => (Status::Fail, Some(diff(g, &actual))),
                    (None, None) => (Status::Fail, Some(diff("", &actual))),
                };
                VerifyEntry {
                    name: src.name.clone(),
                    status: Status::all([&report.status, &golden]),
                    golden,
                    diff: diff_text,
                    error: None,
                    report: Some(report),
                }
            }
        };
        entries.push(entry);
    }
    let status = Status::all(entries.iter().map(|e| &e.status));
    Ok(VerifyReport {
        scenarios: entries,
        status,
    })
}
