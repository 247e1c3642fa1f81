use crate::common::{c, match_zeros, record};
use crate::report::{Check, CheckKind, ExperimentReport};
use crate::ExperimentError;
use num_complex::Complex64;
use operator::build_nonhomog_matrix;
use padic_core::Prime;
use qspecial::{k_mahler, k_mahler_terms, EntireFunctionHandle, QBase};
use serde::{Deserialize, Serialize};
use spectral::eigenvalues;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct MahlerParams {
    pub p: u64,
    pub s: f64,
    pub d: u32,
    pub n: usize,
    pub count: usize,
    pub tol: f64,
    /// Multiplies the argument scale of `K`.
    pub perturb: f64,
}

impl Default for MahlerParams {
    fn default() -> Self {
        MahlerParams { p: 3, s: 1.0, d: 2, n: 60, count: 4, tol: 1e-8, perturb: 1.0 }
    }
}

pub fn run_mahler(pp: &MahlerParams) -> Result<ExperimentReport, ExperimentError> {
    if pp.d < 2 {
        return Err(ExperimentError::Invalid("d must be at least 2".into()));
    }
    let mut rep = ExperimentReport::new("mahler");
    rep.param("p", pp.p).param("s", pp.s).param("d", pp.d).param("N", pp.n);
    let p = pp.p as f64;
    let d = pp.d as f64;
    let q = p.powf(-(2.0 * pp.s + 1.0) / (d - 1.0));
    let a = 1.0 / (p * q.powf(d));
    let scale = (1.0 / q - a) * pp.perturb;
    rep.param("q", q).param("K_a", a).param("K_scale", scale);
    rep.formula("det(1 - uA) = K(1/(p q^d); q, (1/q - 1/(p q^d)) u), q = p^{-(2s+1)/(d-1)}");

    let t = build_nonhomog_matrix(Prime::new(pp.p)?, pp.s, pp.d, pp.n)?;
    let sp = eigenvalues(&t)?;
    let qb = QBase::real(q)?;
    let dd = pp.d;
    let h = EntireFunctionHandle::new("K", move |u: Complex64| k_mahler(c(a), qb, dd, scale * u));
    let m = match_zeros(&mut rep, "K", &h, &sp, pp.count, pp.tol)?;
    record(&mut rep, &sp, &m, pp.count + 3);

    rep.check(Check::holds(
        "leading eigenvalues nonzero",
        CheckKind::Structure,
        sp.eigenvalues.iter().take(pp.count).all(|l| l.norm() > 0.0),
    ));
    // K at the outer radius: 60 terms against the adaptive sum
    let umax = m.zeros.radius * scale;
    let full = k_mahler(c(a), qb, dd, c(umax))?.value;
    let tail = (k_mahler_terms(c(a), qb, dd, c(umax), 60) - full).norm() / full.norm().max(1.0);
    rep.check(Check::at_most("K 60-term tail", CheckKind::Structure, tail, 1e-14));
    Ok(rep.finish())
}
