use crate::common::{c, match_zeros, record, trivial_spec};
use crate::report::{Check, CheckKind, ExperimentReport};
use crate::ExperimentError;
use operator::build_sequence_matrix;
use qspecial::{hahn_exton_j, Approx, EntireFunctionHandle, QBase, QError};
use serde::{Deserialize, Serialize};
use spectral::eigenvalues;

type C = num_complex::Complex64;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct NorootsParams {
    /// A prime `3 mod 4`, so that `1 + x^2` has no roots mod p.
    pub p: u64,
    pub s: f64,
    pub d: u32,
    /// Even; `Q = (1 + x^2)^{r/2}`.
    pub r: u32,
    pub n: usize,
    pub count: usize,
    pub tol: f64,
    /// Multiplies the `J` parameter; 1 for the genuine check.
    pub perturb: f64,
    /// Small `s` for the `s -> 0` limit checks; 0 disables them.
    pub limit_s: f64,
}

impl Default for NorootsParams {
    fn default() -> Self {
        NorootsParams { p: 3, s: 1.0, d: 2, r: 2, n: 60, count: 5, tol: 1e-8, perturb: 1.0, limit_s: 1e-6 }
    }
}

fn q_coeffs(r: u32) -> Vec<i64> {
    let mut c = vec![1i64];
    for _ in 0..r / 2 {
        let mut n = vec![0i64; c.len() + 2];
        for (i, &x) in c.iter().enumerate() {
            n[i] += x;
            n[i + 2] += x;
        }
        c = n;
    }
    c
}

pub fn run_noroots(pp: &NorootsParams) -> Result<ExperimentReport, ExperimentError> {
    if pp.p % 4 != 3 {
        return Err(ExperimentError::Invalid(format!("p = {} is not 3 mod 4", pp.p)));
    }
    if pp.r % 2 == 1 || pp.r > pp.d {
        return Err(ExperimentError::Invalid("r must be even and at most d".into()));
    }
    let mut rep = ExperimentReport::new("noroots");
    rep.param("p", pp.p).param("s", pp.s).param("d", pp.d).param("r", pp.r).param("N", pp.n);
    let spec = trivial_spec(pp.p, pp.d, &q_coeffs(pp.r), pp.s)?;
    let t = build_sequence_matrix(&spec, pp.n)?;
    let p = pp.p as f64;
    let (d, r, s) = (pp.d as f64, pp.r as f64, pp.s);
    let q = p.powf(-1.0 - d * s);
    rep.param("q", q).param("nu", -1.0 - r * s / (1.0 + d * s));

    // entries against the closed form
    let mut dev = 0.0f64;
    for m in 0..pp.n {
        for n in 0..pp.n {
            let e = -((m + n) as f64) / 2.0 - (d - r) * m as f64 * s - (m.min(n) as f64) * r * s;
            let want = p.powf(e);
            dev = dev.max((t.get(m, n) - want).norm() / want);
        }
    }
    rep.check(Check::at_most("entries vs closed form", CheckKind::Oracle, dev, 1e-12));

    let sp = eigenvalues(&t)?;
    let a = p.powf(r * s);
    if (a - 1.0).abs() < 1e-15 {
        // r = 0 or s = 0: rank one
        rep.formula("sole nonzero eigenvalue 1/(1-q)");
        let want = 1.0 / (1.0 - q * pp.perturb);
        rep.check(Check::at_most("rank-one eigenvalue", CheckKind::ZeroMatch, (sp.eigenvalues[0] - want).norm() / want, pp.tol));
        rep.check(Check::at_most("rest vanishes", CheckKind::Structure, sp.eigenvalues[1].norm(), 1e-12));
        rep.eigenvalues = sp.eigenvalues.iter().take(3).copied().collect();
        return Ok(rep.finish());
    }
    rep.formula("det(1 - uA) = J(p^{rs}, q, (1 - p^{rs}) u)");
    let qb = QBase::real(q)?;
    let aj = c(a * pp.perturb);
    let h = EntireFunctionHandle::new("J", move |u| hahn_exton_j(aj, qb, (1.0 - a) * u)).with_param("a", aj);
    let m = match_zeros(&mut rep, "J", &h, &sp, pp.count, pp.tol)?;
    record(&mut rep, &sp, &m, pp.count + 3);
    rep.check(Check::at_most("backward error", CheckKind::Structure, sp.max_backward_error(), 1e-12));
    if pp.limit_s > 0.0 {
        limit_checks(&mut rep, pp)?;
    }
    Ok(rep.finish())
}

/// `sum (-1)^n q^{n(n+1)/2} u^n / ((q;q)_n (q;q)_{n+1})`.
pub fn seq0_series(q: f64, u: C) -> C {
    let mut t = C::new(1.0 / (1.0 - q), 0.0);
    let mut sum = t;
    for n in 0..500 {
        let qn1 = q.powi(n + 1);
        t *= -qn1 * u / ((1.0 - qn1) * (1.0 - qn1 * q));
        sum += t;
        if t.norm() <= 1e-18 * sum.norm() {
            break;
        }
    }
    sum
}

/// As `s -> 0` the nonzero spectrum of `A / (1 - p^{rs})` beyond the
/// leading eigenvalue tends to the zeros of the limit series; the series
/// itself is `lim_{a -> 1} (a - 1) J(a, q, u) / u`.
fn limit_checks(rep: &mut ExperimentReport, pp: &NorootsParams) -> Result<(), ExperimentError> {
    let p = pp.p as f64;
    let q0 = 1.0 / p;
    let qb = QBase::real(q0)?;
    let h = 1e-5;
    let mut dev = 0.0f64;
    for j in 0..6 {
        let u = C::from_polar(2.0 + 8.0 * j as f64, 0.9 * j as f64);
        let f = |a: f64| -> Result<C, QError> { Ok((a - 1.0) * hahn_exton_j(c(a), qb, u)?.value / u) };
        let avg = (f(1.0 + h)? + f(1.0 - h)?) / 2.0;
        let want = seq0_series(q0, u);
        dev = dev.max((avg - want).norm() / want.norm().max(1.0));
    }
    rep.check(Check::at_most("s -> 0: lim (a-1) J(a,q,u)/u = series", CheckKind::Identity, dev, 1e-8));

    let s = pp.limit_s;
    let spec = trivial_spec(pp.p, pp.d, &q_coeffs(pp.r), s)?;
    let t = build_sequence_matrix(&spec, pp.n)?;
    let sp = eigenvalues(&t)?;
    let scale = 1.0 - p.powf(pp.r as f64 * s);
    let rest: Vec<C> = sp.eigenvalues[1..].iter().map(|l| l / scale).collect();
    let mut shifted = sp.clone();
    shifted.eigenvalues = rest;
    let qs = p.powf(-1.0 - pp.d as f64 * s);
    let hs = EntireFunctionHandle::new("seq0", move |u| Ok(Approx::exact(seq0_series(qs, u))));
    let count = pp.count.min(4);
    let mut sub = ExperimentReport::new("limit");
    let m = match_zeros(&mut sub, "seq0", &hs, &shifted, count, 1e-4)?;
    rep.param("limit_s", s);
    rep.check(Check::at_most(
        format!("s -> 0: rescaled top-{count} vs series zeros"),
        CheckKind::Oracle,
        m.report.max_rel_err,
        1e-4,
    ));
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn coefficients() {
        assert_eq!(q_coeffs(0), vec![1]);
        assert_eq!(q_coeffs(4), vec![1, 0, 2, 0, 1]);
    }
}
