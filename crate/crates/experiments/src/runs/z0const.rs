use crate::common::{c, match_zeros, record, trivial_spec};
use crate::report::{Check, CheckKind, ExperimentReport};
use crate::ExperimentError;
use num_complex::Complex64;
use operator::{build_br_matrix, build_r_from_profile, build_sequence_matrix, poly_roots, RationalR};
use qspecial::{phi_tilde_2_1, qpoch, EntireFunctionHandle, QBase};
use serde::{Deserialize, Serialize};
use spectral::{eigenvalues, wronski_char_fn, Spectrum};
use zeta::{z0_profile, ZetaMode};

type C = Complex64;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct Z0ConstantParams {
    /// Integer coefficients of `Q`, constant term first; `Q(0) = 1`.
    pub q: Vec<i64>,
    pub p: u64,
    /// Defaults to `deg Q`.
    pub d: Option<u32>,
    pub s: f64,
    pub n: usize,
    pub count: usize,
    pub tol: f64,
    /// Multiplies `beta` in every predicted formula.
    pub perturb: f64,
}

impl Default for Z0ConstantParams {
    fn default() -> Self {
        Z0ConstantParams { q: vec![1, -3, 1, 1], p: 5, d: None, s: 1.0, n: 60, count: 5, tol: 1e-7, perturb: 1.0 }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct DegenerateParams {
    pub p: u64,
    pub s: f64,
    /// `a = q^k`: `k` polynomial eigenvalues besides `beta q^j`.
    pub k: u32,
    pub n: usize,
    pub count: usize,
    pub tol: f64,
    pub perturb: f64,
}

impl Default for DegenerateParams {
    fn default() -> Self {
        DegenerateParams { p: 5, s: 1.0, k: 2, n: 60, count: 6, tol: 1e-7, perturb: 1.0 }
    }
}

/// `(number of roots of Q mod p, all of them simple)`.
fn roots_mod_p(q: &[i64], p: u64) -> (usize, bool) {
    let p = p as i128;
    let eval = |c: &[i128], x: i128| c.iter().rev().fold(0i128, |acc, &a| (acc * x + a).rem_euclid(p));
    let qc: Vec<i128> = q.iter().map(|&a| a as i128).collect();
    let dq: Vec<i128> = qc.iter().enumerate().skip(1).map(|(i, &a)| a * i as i128).collect();
    let mut m = 0;
    let mut simple = true;
    for x in 0..p {
        if eval(&qc, x) == 0 {
            m += 1;
            simple &= eval(&dq, x) != 0;
        }
    }
    (m, simple)
}

/// Closed form of `zeta(Q, 1, s) - 1` when `Q mod p` has `m` simple roots.
pub fn beta_closed_form(p: f64, s: f64, m: usize) -> f64 {
    let (ip, ps) = (1.0 / p, p.powf(-s));
    -(m as f64) * ip * (1.0 - ps) / ((1.0 - ip) * (1.0 - ps * ip))
}

/// Both roots of `beta (1 - a)(1 - pq/a) = 1 - pq`.
fn quadratic_roots(beta: C, pq: C) -> [C; 2] {
    // beta a^2 - (beta (1 + pq) - (1 - pq)) a + beta pq = 0
    let b = -(beta * (1.0 + pq) - (1.0 - pq));
    let disc = (b * b - 4.0 * beta * beta * pq).sqrt();
    let r1 = if (-b + disc).norm() >= (-b - disc).norm() { (-b + disc) / (2.0 * beta) } else { (-b - disc) / (2.0 * beta) };
    [r1, pq / r1]
}

/// `2phi1~(a/(pq), 1/a; 1/(pq); q, beta u)`.
fn handle(a: C, beta: C, pq: C, q: QBase) -> EntireFunctionHandle {
    EntireFunctionHandle::new("2phi1~", move |u| phi_tilde_2_1(a / pq, 1.0 / a, 1.0 / pq, q, beta * u))
        .with_param("a", a)
        .with_param("beta", beta)
}

/// `k` with `a = q^k` or `a = p q^{1-k}`, `k >= 1`.
fn degenerate_index(a: [C; 2], q: C, pq: C) -> Option<u32> {
    for k in 1..200u32 {
        let qk = q.powi(k as i32);
        if qk.norm() < 1e-150 {
            break;
        }
        for &x in &a {
            if (x - qk).norm() <= 1e-9 * qk.norm() || (x - pq / qk).norm() <= 1e-9 * (pq / qk).norm() {
                return Some(k);
            }
        }
    }
    None
}

/// Zeros of the terminating `2phi1(q^{-k}, q^{k-1}/p; 1/(pq); q, w)`,
/// i.e. of the little q-Jacobi polynomial `p_k(w/q; 1/(p q^2), 1; q)`.
pub fn little_jacobi_zeros(p: f64, q: C, k: u32) -> Vec<C> {
    let (a, b, cc) = (q.powi(-(k as i32)), q.powi(k as i32 - 1) / p, 1.0 / (p * q));
    let coeffs: Vec<C> = (0..=k as usize)
        .map(|n| qpoch(a, q, n) * qpoch(b, q, n) / (qpoch(cc, q, n) * qpoch(q, q, n)))
        .collect();
    poly_roots(&coeffs)
}

/// `beta q^j` together with `beta / w_i`, largest first.
fn degenerate_list(beta: C, q: C, zeros: &[C], len: usize) -> Vec<C> {
    let mut v: Vec<C> = zeros.iter().map(|w| beta / w).collect();
    v.extend((0..len).map(|j| beta * q.powi(j as i32)));
    v.sort_by(|x, y| y.norm().partial_cmp(&x.norm()).unwrap());
    v.truncate(len);
    v
}

fn list_error(eig: &[C], want: &[C]) -> f64 {
    eig.iter().zip(want).map(|(l, w)| (l - w).norm() / w.norm()).fold(0.0, f64::max)
}

/// Parameters of a degenerate branch: `beta q^j` plus `k` Jacobi eigenvalues.
struct Branch {
    p: f64,
    q: C,
    beta: C,
    k: u32,
}

fn degenerate_checks(rep: &mut ExperimentReport, sp: &Spectrum, br: Branch, count: usize, tol: f64) {
    let Branch { p, q, beta, k } = br;
    let zeros = little_jacobi_zeros(p, q, k);
    let want = degenerate_list(beta, q, &zeros, count);
    rep.note(format!("degenerate branch k = {k}: beta q^j plus {k} little q-Jacobi eigenvalues"));
    rep.check(Check::at_most(
        format!("explicit spectrum, top {count}"),
        CheckKind::Oracle,
        list_error(&sp.eigenvalues, &want),
        tol,
    ));
    // each finite eigenvalue individually recovered
    let finite = zeros
        .iter()
        .map(|w| {
            let l = beta / w;
            sp.eigenvalues.iter().map(|e| (e - l).norm() / l.norm()).fold(f64::INFINITY, f64::min)
        })
        .fold(0.0, f64::max);
    rep.check(Check::at_most("polynomial eigenvalues present", CheckKind::Oracle, finite, tol));
}

pub fn run_z0_constant(pp: &Z0ConstantParams) -> Result<ExperimentReport, ExperimentError> {
    let deg = pp.q.iter().rposition(|&a| a != 0).unwrap_or(0) as u32;
    let d = pp.d.unwrap_or(deg);
    if pp.q.first() != Some(&1) {
        return Err(ExperimentError::Invalid("Q(0) must be 1".into()));
    }
    if (pp.q[deg as usize] as i128).rem_euclid(pp.p as i128) == 0 || deg != d {
        return Err(ExperimentError::Invalid("need deg(Q mod p) = deg Q = d".into()));
    }
    let mut rep = ExperimentReport::new("z0_constant");
    rep.param("Q", format!("{:?}", pp.q)).param("p", pp.p).param("d", d).param("s", pp.s).param("N", pp.n);
    let spec = trivial_spec(pp.p, d, &pp.q, pp.s)?;
    let (p, s) = (pp.p as f64, c(pp.s));
    let q = spec.q();
    let pq = p * q;
    let qb = QBase::new(q)?;
    let profile = z0_profile(&spec.q_coeffs, &spec.chi, ZetaMode::Numeric(s))?;
    if !profile.is_constant() {
        return Err(ExperimentError::Invalid("Z_0 is not constant for this Q".into()));
    }
    let beta = profile.z0_at(s).get(&0).copied().unwrap_or(c(0.0));
    if beta.norm() < 1e-14 {
        return Err(ExperimentError::Invalid("beta(s) = 0; see the noroots run".into()));
    }
    rep.param("q", q.re).param("beta", beta.re);

    let (m, simple) = roots_mod_p(&pp.q, pp.p);
    if simple {
        let bc = beta_closed_form(p, pp.s, m);
        rep.check(Check::at_most(
            format!("beta vs closed form (m = {m})"),
            CheckKind::Oracle,
            (beta - bc).norm() / bc.abs().max(1e-300),
            1e-12,
        ));
    } else {
        rep.note("Q mod p has a multiple root; beta closed form not applicable");
    }

    let a_pair = quadratic_roots(beta, pq);
    rep.param("a", format!("{:.15e}, {:.15e}", a_pair[0], a_pair[1]));
    rep.check(Check::at_most("a a' = pq", CheckKind::Identity, (a_pair[0] * a_pair[1] - pq).norm() / pq.norm(), 1e-12));
    let (r, _) = build_r_from_profile(&spec, &profile)?;
    let pf = r.product.clone().ok_or_else(|| ExperimentError::Invalid("R did not factor".into()))?;
    let fz = pf
        .zeros
        .iter()
        .map(|z| a_pair.iter().map(|a| (z - a).norm() / a.norm()).fold(f64::INFINITY, f64::min))
        .fold(0.0, f64::max);
    rep.check(Check::at_most("zeros of R solve the quadratic", CheckKind::Identity, fz, 1e-9));

    let a = build_sequence_matrix(&spec, pp.n)?;
    let sp = eigenvalues(&a)?;
    rep.formula("det(1 - uA) = 2phi1~(a/(pq), 1/a; 1/(pq); q, beta u), beta (1-a)(1-pq/a) = 1-pq");
    let bp = beta * pp.perturb;
    let h1 = handle(a_pair[0], bp, pq, qb);
    let h2 = handle(a_pair[1], bp, pq, qb);
    let m1 = match_zeros(&mut rep, "2phi1~ at a", &h1, &sp, pp.count, pp.tol)?;
    match_zeros(&mut rep, "2phi1~ at pq/a", &h2, &sp, pp.count, pp.tol)?;
    record(&mut rep, &sp, &m1, pp.count + 3);
    let sym = (0..8)
        .map(|j| {
            let u = C::from_polar(0.5 * m1.zeros.radius, 0.7 * j as f64 + 0.2);
            (h1.value(u) - h2.value(u)).norm() / h1.value(u).norm().max(1.0)
        })
        .fold(0.0, f64::max);
    rep.check(Check::at_most("a <-> pq/a symmetry", CheckKind::Identity, sym, 1e-10));

    // the same spectrum from the difference operator B_R
    let b = build_br_matrix(&r, qb, pp.n)?;
    let sb = eigenvalues(&b)?;
    rep.check(Check::at_most(
        "B_R spectrum = sequence-matrix spectrum",
        CheckKind::Structure,
        list_error(sb.top(pp.count), sp.top(pp.count)),
        1e-9,
    ));

    if let Some(k) = degenerate_index(a_pair, q, pq) {
        rep.param("k", k);
        degenerate_checks(&mut rep, &sp, Branch { p, q, beta: bp, k }, pp.count, pp.tol);
    }
    if pp.q == [1, -1] {
        eigenlist_checks(&mut rep, &sp, p, pp.s, q.re, pp.perturb);
    }
    Ok(rep.finish())
}

/// `P = x - y`: `1/(1-q)` and `(1-pq) q^k / ((1-p)(1-q))`, plus the
/// Fourier transform of `|x|^s / (1 - 1/p)` by a direct character sum.
fn eigenlist_checks(rep: &mut ExperimentReport, sp: &Spectrum, p: f64, s: f64, q: f64, perturb: f64) {
    let mut want = vec![1.0 / (1.0 - q)];
    want.extend((0..7).map(|k| perturb * (1.0 - p * q) * q.powi(k) / ((1.0 - p) * (1.0 - q))));
    let dev = sp.eigenvalues.iter().zip(&want).map(|(l, w)| (l - w).norm()).fold(0.0, f64::max);
    rep.check(Check::at_most("eigenlist (absolute)", CheckKind::ZeroMatch, dev, 1e-10));
    let pi = p as u64;
    let ft = (0..=7u32).map(|k| fourier_abs_power(pi, s, k)).collect::<Vec<_>>();
    let dev = ft.iter().zip(&sp.eigenvalues).map(|(f, l)| (f - l).norm()).fold(0.0, f64::max);
    rep.check(Check::at_most("Fourier transform of |x|^s", CheckKind::Oracle, dev, 1e-10));
}

/// `(1 - 1/p)^{-1} int_{Z_p} |x|^s psi(x / p^k) dx`, summing over `Z/p^{k+2}`
/// and integrating the ball `p^{k+2} Z_p` in closed form.
pub fn fourier_abs_power(p: u64, s: f64, k: u32) -> f64 {
    let l = k + 2;
    let ml = p.pow(l);
    let mk = p.pow(k);
    let w = 1.0 / ml as f64;
    let pf = p as f64;
    let mut acc = 0.0;
    for x in 1..ml {
        let mut v = 0;
        let mut y = x;
        while y % p == 0 {
            y /= p;
            v += 1;
        }
        let phase = std::f64::consts::TAU * (x % mk) as f64 / mk as f64;
        acc += pf.powf(-s * v as f64) * phase.cos();
    }
    let ball = w * pf.powf(-s * l as f64) * (1.0 - 1.0 / pf) / (1.0 - pf.powf(-1.0 - s));
    (acc * w + ball) / (1.0 - 1.0 / pf)
}

/// Synthetic `R` with `a = q^k`, so `beta = (1-pq)/((1-q^k)(1-p q^{1-k}))`.
pub fn degenerate_r(p: f64, q: f64, k: u32) -> Result<(RationalR, C), ExperimentError> {
    let a = q.powi(k as i32);
    let pq = p * q;
    let beta = (1.0 - pq) / ((1.0 - a) * (1.0 - pq / a));
    let r = RationalR::from_product(c(beta), 0, vec![c(a), c(pq / a)], vec![c(1.0), c(pq)], vec![false, true], p.powf(-0.5))?;
    Ok((r, c(beta)))
}

pub fn run_z0_degenerate(pp: &DegenerateParams) -> Result<ExperimentReport, ExperimentError> {
    if pp.k == 0 {
        return Err(ExperimentError::Invalid("k must be at least 1".into()));
    }
    let mut rep = ExperimentReport::new("z0_degenerate");
    let p = pp.p as f64;
    let q = p.powf(-1.0 - pp.s);
    rep.param("p", pp.p).param("s", pp.s).param("k", pp.k).param("q", q).param("N", pp.n);
    let (r, beta) = degenerate_r(p, q, pp.k)?;
    rep.param("beta", beta.re);
    let qb = QBase::real(q)?;
    r.validate(c(q))?;
    let b = build_br_matrix(&r, qb, pp.n)?;
    let sp = eigenvalues(&b)?;
    let bp = beta * pp.perturb;
    degenerate_checks(&mut rep, &sp, Branch { p, q: c(q), beta: bp, k: pp.k }, pp.count, pp.tol);

    rep.formula("det(1 - uB_R) = 2phi1~(q^{k-1}/p, q^{-k}; 1/(pq); q, beta u)");
    let pq = c(p * q);
    let h = handle(c(q.powi(pp.k as i32)), bp, pq, qb);
    let m = match_zeros(&mut rep, "2phi1~", &h, &sp, pp.count, pp.tol)?;
    record(&mut rep, &sp, &m, pp.count + 3);
    let w = wronski_char_fn(&r, qb)?;
    match_zeros(&mut rep, "Wronskian", &w.handle, &sp, pp.count, pp.tol)?;
    Ok(rep.finish())
}
