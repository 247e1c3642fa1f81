use crate::report::{ExperimentReport, CSV_HEADER};
use crate::runs::*;
use crate::ExperimentError;
use serde::{Deserialize, Serialize};

/// One experiment and its parameters; `kind` selects the run.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum ExperimentKind {
    Noroots(NorootsParams),
    Rank1(Rank1Params),
    Mahler(MahlerParams),
    Z0Constant(Z0ConstantParams),
    Z0Degenerate(DegenerateParams),
    ChiNontrivial(ChiParams),
    GenericR(GenericParams),
    UnionOverChi(UnionParams),
    Posi(PosiParams),
    ZetaAgreement(ZetaGridParams),
}

impl ExperimentKind {
    pub fn tag(&self) -> &'static str {
        match self {
            ExperimentKind::Noroots(_) => "noroots",
            ExperimentKind::Rank1(_) => "rank1",
            ExperimentKind::Mahler(_) => "mahler",
            ExperimentKind::Z0Constant(_) => "z0_constant",
            ExperimentKind::Z0Degenerate(_) => "z0_degenerate",
            ExperimentKind::ChiNontrivial(_) => "chi_nontrivial",
            ExperimentKind::GenericR(_) => "generic_r",
            ExperimentKind::UnionOverChi(_) => "union_over_chi",
            ExperimentKind::Posi(_) => "posi",
            ExperimentKind::ZetaAgreement(_) => "zeta_agreement",
        }
    }

    pub fn run(&self) -> Result<ExperimentReport, ExperimentError> {
        match self {
            ExperimentKind::Noroots(p) => run_noroots(p),
            ExperimentKind::Rank1(p) => run_rank1_perturbation(p),
            ExperimentKind::Mahler(p) => run_mahler(p),
            ExperimentKind::Z0Constant(p) => run_z0_constant(p),
            ExperimentKind::Z0Degenerate(p) => run_z0_degenerate(p),
            ExperimentKind::ChiNontrivial(p) => run_chi_nontrivial(p),
            ExperimentKind::GenericR(p) => run_generic_r(p),
            ExperimentKind::UnionOverChi(p) => run_union_over_chi(p),
            ExperimentKind::Posi(p) => run_posi(p),
            ExperimentKind::ZetaAgreement(p) => run_zeta_agreement(p),
        }
    }

    /// The same experiment with its matched formula parameter scaled.
    pub fn perturbed(&self, factor: f64) -> Self {
        let mut k = self.clone();
        match &mut k {
            ExperimentKind::Noroots(p) => p.perturb *= factor,
            ExperimentKind::Rank1(p) => p.perturb *= factor,
            ExperimentKind::Mahler(p) => p.perturb *= factor,
            ExperimentKind::Z0Constant(p) => p.perturb *= factor,
            ExperimentKind::Z0Degenerate(p) => p.perturb *= factor,
            ExperimentKind::ChiNontrivial(p) => p.perturb *= factor,
            ExperimentKind::GenericR(p) => p.perturb *= factor,
            ExperimentKind::UnionOverChi(p) => p.perturb *= factor,
            ExperimentKind::Posi(p) => p.perturb *= factor,
            ExperimentKind::ZetaAgreement(p) => p.perturb *= factor,
        }
        k
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExperimentConfig {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub name: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub output: Option<String>,
    #[serde(flatten)]
    pub kind: ExperimentKind,
}

impl ExperimentConfig {
    pub fn new(kind: ExperimentKind) -> Self {
        ExperimentConfig { name: None, output: None, kind }
    }

    pub fn named(name: impl Into<String>, kind: ExperimentKind) -> Self {
        ExperimentConfig { name: Some(name.into()), output: None, kind }
    }

    /// Runs and labels the report with the configured name.
    pub fn run(&self) -> Result<ExperimentReport, ExperimentError> {
        let mut rep = self.kind.run()?;
        if let Some(n) = &self.name {
            rep.name = n.clone();
        }
        Ok(rep)
    }
}

/// A config file: a list of `[[experiment]]` tables.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct SuiteConfig {
    #[serde(default)]
    pub experiment: Vec<ExperimentConfig>,
}

impl SuiteConfig {
    pub fn from_toml(text: &str) -> Result<Self, ExperimentError> {
        toml::from_str(text).map_err(|e| ExperimentError::Config(e.to_string()))
    }

    pub fn to_toml(&self) -> Result<String, ExperimentError> {
        toml::to_string(self).map_err(|e| ExperimentError::Config(e.to_string()))
    }
}

/// Runs independent experiments on separate threads, preserving order.
pub fn run_all(configs: &[ExperimentConfig]) -> Vec<Result<ExperimentReport, ExperimentError>> {
    std::thread::scope(|sc| {
        let handles: Vec<_> = configs.iter().map(|c| sc.spawn(move || c.run())).collect();
        handles.into_iter().map(|h| h.join().expect("experiment thread panicked")).collect()
    })
}

pub fn reports_csv(reports: &[ExperimentReport]) -> String {
    let mut out = String::from(CSV_HEADER);
    out.push('\n');
    for r in reports {
        for row in r.csv_rows() {
            out.push_str(&row);
            out.push('\n');
        }
    }
    out
}
