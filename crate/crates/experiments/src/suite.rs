use crate::config::{run_all, ExperimentConfig, ExperimentKind as K};
use crate::report::ExperimentReport;
use crate::runs::*;
use serde::Serialize;
use std::time::Instant;

/// Scale applied to the matched parameter in the negative controls.
pub const NEGATIVE_FACTOR: f64 = 1.01;

#[derive(Debug, Clone)]
pub struct Criterion {
    pub id: &'static str,
    pub title: &'static str,
    pub runs: Vec<ExperimentConfig>,
}

#[derive(Debug, Clone, Serialize)]
pub struct CriterionResult {
    pub id: String,
    pub title: String,
    pub pass: bool,
    /// Runs are negative controls, expected to fail.
    pub expect_fail: bool,
    pub reports: Vec<ExperimentReport>,
    pub errors: Vec<String>,
    pub elapsed_ms: f64,
}

impl CriterionResult {
    /// `PASS A1 title (detail)`, without timing.
    pub fn status_line(&self) -> String {
        let failed: Vec<String> = self
            .reports
            .iter()
            .filter(|r| r.pass == self.expect_fail)
            .map(|r| r.name.clone())
            .chain(self.errors.iter().cloned())
            .collect();
        let detail = if failed.is_empty() {
            match self.reports.len() {
                1 => "1 run".into(),
                n => format!("{n} runs"),
            }
        } else {
            format!("{}: {}", if self.expect_fail { "not detected" } else { "failing" }, failed.join(", "))
        };
        format!("{} {} {} ({detail})", if self.pass { "PASS" } else { "FAIL" }, self.id, self.title)
    }

    pub fn line(&self) -> String {
        format!("{} [{:.1}s]", self.status_line(), self.elapsed_ms / 1e3)
    }
}

fn named(name: impl Into<String>, k: K) -> ExperimentConfig {
    ExperimentConfig::named(name, k)
}

/// Criteria A1..A10; A11 is derived from them by [`negative_controls`].
pub fn acceptance_suite() -> Vec<Criterion> {
    let mut a2 = Vec::new();
    for p in [3, 7] {
        for s in [1.0, 1.5] {
            a2.push(named(format!("noroots p={p} s={s}"), K::Noroots(NorootsParams { p, s, ..Default::default() })));
        }
    }
    let a8 = (0..20)
        .map(|seed| {
            let g = GenericParams::for_seed(seed);
            named(format!("generic_r seed={seed} (l,r,k)=({},{},{})", g.l, g.r, g.k), K::GenericR(g))
        })
        .collect();
    vec![
        Criterion {
            id: "A1",
            title: "exact zeta vs brute force",
            runs: vec![named("zeta grid", K::ZetaAgreement(ZetaGridParams::default()))],
        },
        Criterion { id: "A2", title: "no roots mod p: J spectrum", runs: a2 },
        Criterion {
            id: "A3",
            title: "P = x - y explicit eigenvalues",
            runs: vec![named(
                "x-y p=5",
                K::Z0Constant(Z0ConstantParams { q: vec![1, -1], p: 5, ..Default::default() }),
            )],
        },
        Criterion {
            id: "A4",
            title: "rank-one perturbation: J spectrum",
            runs: vec![named("rank1", K::Rank1(Rank1Params::default()))],
        },
        Criterion {
            id: "A5",
            title: "constant Z0: 2phi1 spectrum and degenerate branch",
            runs: vec![
                named("z0 constant", K::Z0Constant(Z0ConstantParams::default())),
                named("z0 degenerate", K::Z0Degenerate(DegenerateParams::default())),
            ],
        },
        Criterion {
            id: "A6",
            title: "nontrivial character: E spectrum",
            runs: vec![
                named("chi quadratic p=5", K::ChiNontrivial(ChiParams::default())),
                named(
                    "chi quadratic p=5 d=3",
                    K::ChiNontrivial(ChiParams { d: 3, q_star: vec![1, 1], ..Default::default() }),
                ),
                named(
                    "chi quadratic p=5 d=4",
                    K::ChiNontrivial(ChiParams { d: 4, q_star: vec![1, 0, 1], ..Default::default() }),
                ),
                named(
                    "chi quadratic p=5 Q*=1+2x",
                    K::ChiNontrivial(ChiParams { d: 3, q_star: vec![1, 2], ..Default::default() }),
                ),
                named(
                    "chi order 4 p=5 Q*=2+x",
                    K::ChiNontrivial(ChiParams { d: 3, q_star: vec![2, 1], chi: Some((1, 1)), ..Default::default() }),
                ),
            ],
        },
        Criterion {
            id: "A7",
            title: "non-homogeneous kernel: K spectrum",
            runs: vec![named("mahler p=3", K::Mahler(MahlerParams::default()))],
        },
        Criterion { id: "A8", title: "generic R: Wronskian zeros and eigenvectors", runs: a8 },
        Criterion {
            id: "A9",
            title: "exact min-power determinants",
            runs: vec![named("posi", K::Posi(PosiParams::default()))],
        },
        Criterion {
            id: "A10",
            title: "spectrum as a union over characters",
            runs: vec![
                named("union x-y", K::UnionOverChi(UnionParams::default())),
                named("union x^2+y^2", K::UnionOverChi(UnionParams::noroots())),
            ],
        },
    ]
}

/// A11: every run of A1..A10 with its matched parameter perturbed.
pub fn negative_controls(suite: &[Criterion]) -> Criterion {
    let runs = suite
        .iter()
        .flat_map(|c| {
            c.runs.iter().map(move |r| ExperimentConfig {
                name: Some(format!("{}: {} perturbed", c.id, r.name.clone().unwrap_or_else(|| r.kind.tag().into()))),
                output: None,
                kind: r.kind.perturbed(NEGATIVE_FACTOR),
            })
        })
        .collect();
    Criterion { id: "A11", title: "negative controls flip to FAIL", runs }
}

/// Runs a criterion; PASS iff every run passes (for A11: every run fails).
pub fn run_criterion(c: &Criterion) -> CriterionResult {
    let t = Instant::now();
    let expect_fail = c.id == "A11";
    let mut reports = Vec::new();
    let mut errors = Vec::new();
    for (cfg, r) in c.runs.iter().zip(run_all(&c.runs)) {
        match r {
            Ok(rep) => reports.push(rep),
            Err(e) => errors.push(format!("{}: {e}", cfg.name.clone().unwrap_or_default())),
        }
    }
    let pass = if expect_fail {
        // an error is not a detected mismatch
        errors.is_empty() && reports.iter().all(|r| !r.pass)
    } else {
        errors.is_empty() && reports.iter().all(|r| r.pass)
    };
    CriterionResult {
        id: c.id.into(),
        title: c.title.into(),
        pass,
        expect_fail,
        reports,
        errors,
        elapsed_ms: t.elapsed().as_secs_f64() * 1e3,
    }
}

/// A1..A11 in order.
pub fn run_acceptance() -> Vec<CriterionResult> {
    let suite = acceptance_suite();
    let neg = negative_controls(&suite);
    suite.iter().chain(std::iter::once(&neg)).map(run_criterion).collect()
}
