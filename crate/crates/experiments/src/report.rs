use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use spectral::MatchedPair;
use std::collections::BTreeMap;
use std::time::Instant;

type C = Complex64;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CheckKind {
    /// Reciprocal zeros of a closed form against matrix eigenvalues.
    ZeroMatch,
    /// An identity between two formulas.
    Identity,
    /// Agreement with an independent computation.
    Oracle,
    /// A qualitative fact (count, sign, vanishing).
    Structure,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Check {
    pub name: String,
    pub kind: CheckKind,
    pub value: f64,
    pub tol: f64,
    pub pass: bool,
    pub detail: String,
}

impl Check {
    /// Passes iff `value <= tol` (NaN fails).
    pub fn at_most(name: impl Into<String>, kind: CheckKind, value: f64, tol: f64) -> Check {
        Check {
            name: name.into(),
            kind,
            value,
            tol,
            pass: value <= tol,
            detail: String::new(),
        }
    }

    pub fn holds(name: impl Into<String>, kind: CheckKind, ok: bool) -> Check {
        Check {
            name: name.into(),
            kind,
            value: if ok { 0.0 } else { 1.0 },
            tol: 0.0,
            pass: ok,
            detail: String::new(),
        }
    }

    pub fn with_detail(mut self, d: impl Into<String>) -> Check {
        self.detail = d.into();
        self
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExperimentReport {
    pub name: String,
    pub params: BTreeMap<String, String>,
    pub formulas: Vec<String>,
    pub eigenvalues: Vec<C>,
    pub zeros: Vec<C>,
    pub pairing: Vec<MatchedPair>,
    pub checks: Vec<Check>,
    pub notes: Vec<String>,
    pub elapsed_ms: f64,
    pub pass: bool,
    #[serde(skip)]
    started: Option<Instant>,
}

impl ExperimentReport {
    pub fn new(name: impl Into<String>) -> Self {
        ExperimentReport {
            name: name.into(),
            params: BTreeMap::new(),
            formulas: vec![],
            eigenvalues: vec![],
            zeros: vec![],
            pairing: vec![],
            checks: vec![],
            notes: vec![],
            elapsed_ms: 0.0,
            pass: false,
            started: Some(Instant::now()),
        }
    }

    pub fn param(&mut self, k: &str, v: impl ToString) -> &mut Self {
        self.params.insert(k.into(), v.to_string());
        self
    }

    pub fn formula(&mut self, f: impl Into<String>) -> &mut Self {
        self.formulas.push(f.into());
        self
    }

    pub fn note(&mut self, n: impl Into<String>) -> &mut Self {
        self.notes.push(n.into());
        self
    }

    pub fn check(&mut self, c: Check) -> &mut Self {
        self.checks.push(c);
        self
    }

    pub fn check_named(&self, name: &str) -> Option<&Check> {
        self.checks.iter().find(|c| c.name == name)
    }

    /// Passes iff every check passes and at least one is a zero match or identity
    /// backed by some other independent check.
    pub fn finish(mut self) -> Self {
        if let Some(t) = self.started.take() {
            self.elapsed_ms = t.elapsed().as_secs_f64() * 1e3;
        }
        self.pass = !self.checks.is_empty() && self.checks.iter().all(|c| c.pass);
        self
    }

    pub fn failed_checks(&self) -> Vec<&Check> {
        self.checks.iter().filter(|c| !c.pass).collect()
    }

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::to_value(self).expect("report serializes")
    }

    /// `instance,i,lambda_re,lambda_im,inv_zero_re,inv_zero_im,mismatch` rows.
    pub fn csv_rows(&self) -> Vec<String> {
        self.pairing
            .iter()
            .map(|p| {
                let iz = 1.0 / p.zero;
                format!(
                    "{},{},{:e},{:e},{:e},{:e},{:e}",
                    self.name, p.index, p.eigenvalue.re, p.eigenvalue.im, iz.re, iz.im, p.rel_err
                )
            })
            .collect()
    }

    pub fn summary_line(&self) -> String {
        let worst = self
            .checks
            .iter()
            .filter(|c| c.tol > 0.0)
            .map(|c| format!("{}={:.2e}/{:.0e}", c.name, c.value, c.tol))
            .collect::<Vec<_>>()
            .join(" ");
        format!("{} {} [{}]", if self.pass { "PASS" } else { "FAIL" }, self.name, worst)
    }
}

pub const CSV_HEADER: &str = "instance,i,lambda_re,lambda_im,inv_zero_re,inv_zero_im,mismatch";
