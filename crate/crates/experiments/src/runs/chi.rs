use crate::common::{c, match_zeros, record, spec_with};
use crate::report::{Check, CheckKind, ExperimentReport};
use crate::ExperimentError;
use num_bigint::BigInt;
use num_complex::Complex64;
use num_rational::BigRational;
use operator::{build_br_matrix, build_sequence_matrix, RationalR};
use padic_core::{Prime, UnitCharacter};
use qspecial::{basic_phi, e_func, e_func_theta, watson_rhs, EntireFunctionHandle, QBase, Variant};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use spectral::eigenvalues;
use std::f64::consts::TAU;
use zeta::{z0_profile, zeta_numeric, ZetaMode};

type C = Complex64;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct ChiParams {
    pub p: u64,
    pub d: u32,
    /// Coefficients of `Q_* = P_*(x, 1)`, degree `d - 2`, constant term first.
    pub q_star: Vec<i64>,
    /// Character as (level, index); default the quadratic character.
    pub chi: Option<(u32, u64)>,
    pub s: f64,
    pub n: usize,
    pub count: usize,
    pub tol: f64,
    pub seed: u64,
    /// Multiplies `a` in `E(a, b; q, .)`.
    pub perturb: f64,
}

impl Default for ChiParams {
    fn default() -> Self {
        ChiParams { p: 5, d: 2, q_star: vec![1], chi: None, s: 1.0, n: 60, count: 5, tol: 1e-7, seed: 7, perturb: 1.0 }
    }
}

fn rat(n: i64, d: i64) -> BigRational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

/// `Q = 1 - x Q_*(x) / p + x^d`.
fn q_poly(p: u64, d: u32, q_star: &[i64]) -> Vec<BigRational> {
    let mut q = vec![rat(0, 1); d as usize + 1];
    q[0] = rat(1, 1);
    q[d as usize] += rat(1, 1);
    for (i, &a) in q_star.iter().enumerate() {
        q[i + 1] -= rat(a, p as i64);
    }
    q
}

pub fn run_chi_nontrivial(pp: &ChiParams) -> Result<ExperimentReport, ExperimentError> {
    if pp.d < 2 || pp.q_star.len() != pp.d as usize - 1 {
        return Err(ExperimentError::Invalid("need d >= 2 and deg Q_* = d - 2".into()));
    }
    let (lo, hi) = (pp.q_star[0], pp.q_star[pp.d as usize - 2]);
    if lo % pp.p as i64 == 0 || hi % pp.p as i64 == 0 {
        return Err(ExperimentError::Invalid("extreme coefficients of P_* must be units".into()));
    }
    let prime = Prime::new(pp.p)?;
    let chi = match pp.chi {
        None => UnitCharacter::quadratic(prime)?,
        Some((l, j)) => UnitCharacter::from_level_index(prime, l, j)?,
    };
    if chi.is_trivial() {
        return Err(ExperimentError::Invalid("character must be nontrivial".into()));
    }
    let mut rep = ExperimentReport::new("chi_nontrivial");
    let desc = chi.descriptor();
    rep.param("p", pp.p).param("d", pp.d).param("Q_*", format!("{:?}", pp.q_star)).param("s", pp.s);
    rep.param("chi", format!("level {} index {}", chi.level(), desc.index)).param("N", pp.n);

    let p = pp.p as f64;
    let s = c(pp.s);
    let spec = spec_with(pp.p, pp.d, q_poly(pp.p, pp.d, &pp.q_star), chi.clone(), pp.s)?;
    let q = spec.q();
    let qb = QBase::new(q)?;
    let pds = p.powf(pp.d as f64 * pp.s);

    // Z_0 = zeta_1 (z^{-1} + gamma + kappa p^{ds} z), where the extreme
    // coefficients of P_* enter through the character: zeta_1 =
    // conj chi(c_lo) zeta(1 - x), kappa = chi(c_lo c_hi)
    let profile = z0_profile(&spec.q_coeffs, &chi, ZetaMode::Numeric(s))?;
    let z0 = profile.z0_at(s);
    if z0.keys().any(|&m| !(-1..=1).contains(&m)) {
        return Err(ExperimentError::Invalid("Z_0 is not of the form z^{-1}(1-az)(1-bz)".into()));
    }
    let get = |m: i64| z0.get(&m).copied().unwrap_or(c(0.0));
    let zeta1 = get(-1);
    if zeta1.norm() < 1e-14 {
        return Err(ExperimentError::Invalid("coefficient of 1/z vanishes".into()));
    }
    let (chi_lo, chi_hi) = (chi.value(lo as i128)?, chi.value(hi as i128)?);
    let kappa = chi_lo * chi_hi;
    let lin = zeta_numeric(&[rat(1, 1), rat(-1, 1)], &chi, s)?;
    let top = chi_hi * pds * lin;
    rep.check(Check::at_most(
        "Z_0: z coefficient = chi(c_hi) p^{ds} zeta(1 - x, chi, s)",
        CheckKind::Structure,
        (get(1) - top).norm() / top.norm(),
        1e-12,
    ));
    let gamma = get(0) / zeta1;
    // |Q_*| is unchanged by the unit c_lo; the zeta wants Q_*(0) = 1
    let qs: Vec<BigRational> = pp.q_star.iter().map(|&a| rat(a, lo)).collect();
    let gamma_zeta = chi_lo * (s * p.ln()).exp() * zeta_numeric(&qs, &chi, s)? / lin;
    rep.param("zeta_1", format!("{:.15e}", zeta1)).param("gamma", format!("{:.15e}", gamma));
    rep.param("kappa", format!("{:.15e}", kappa));
    rep.check(Check::at_most("gamma: zeta values vs profile", CheckKind::Oracle, (gamma - gamma_zeta).norm() / gamma.norm().max(pds.sqrt()), 1e-12));
    let bottom = chi_lo.conj() * lin;
    rep.check(Check::at_most(
        "1/z coefficient = conj chi(c_lo) zeta(1 - x, chi, s)",
        CheckKind::Oracle,
        (zeta1 - bottom).norm() / bottom.norm(),
        1e-12,
    ));

    // 1 + gamma z + kappa p^{ds} z^2 = (1 - az)(1 - bz)
    let disc = (gamma * gamma - 4.0 * kappa * pds).sqrt();
    let (a, b) = ((-gamma + disc) / 2.0, (-gamma - disc) / 2.0);
    if (a - b).norm() <= 1e-10 * a.norm() {
        rep.note("a = b: E degenerates");
        return Err(ExperimentError::Invalid("a = b degeneration".into()));
    }
    rep.param("a", format!("{:.15e}", a)).param("b", format!("{:.15e}", b));

    let t = build_sequence_matrix(&spec, pp.n)?;
    let sp = eigenvalues(&t)?;
    let r = RationalR::from_product(c(1.0), 1, vec![a, b], vec![], vec![], 1.0)?;
    let bm = build_br_matrix(&r, qb, pp.n)?;
    let sb = eigenvalues(&bm)?;
    // nearest-neighbour, since +-pairs reorder under the scaling
    let scaled = sp
        .top(pp.count)
        .iter()
        .map(|y| sb.eigenvalues.iter().map(|x| (x * zeta1 - y).norm() / y.norm()).fold(f64::INFINITY, f64::min))
        .fold(0.0, f64::max);
    rep.check(Check::at_most("spectrum = zeta_1 x spectrum of z^{-1}(1-az)(1-bz)", CheckKind::Structure, scaled, 1e-9));

    rep.formula("det(1 - u B) = E(a, b; q, u) for R = z^{-1}(1-az)(1-bz); A = zeta_1 B");
    let ap = a * pp.perturb;
    let h = EntireFunctionHandle::new("E", move |u| e_func(ap, b, qb, u)).with_param("a", ap).with_param("b", b);
    let m = match_zeros(&mut rep, "E", &h, &sb, pp.count, pp.tol)?;
    record(&mut rep, &sp, &m, pp.count + 3);

    // E(0) from the theta form alone: mean value on a circle
    let radius = 0.5 * m.zeros.expanded().first().map_or(1.0, |z| z.norm()).min(1.0);
    let nodes = 128;
    let mut mean = c(0.0);
    for j in 0..nodes {
        mean += e_func_theta(ap, b, qb, C::from_polar(radius, TAU * (j as f64 + 0.5) / nodes as f64))?.value;
    }
    mean /= nodes as f64;
    rep.check(Check::at_most("E(a,b;q,0) = 1 (theta form, contour mean)", CheckKind::Identity, (mean - 1.0).norm(), 1e-10));

    // the two representations of E agree where both are valid
    let mut rng = ChaCha8Rng::seed_from_u64(pp.seed);
    let switch = 0.05 * (1.0 / a.norm()).min(1.0 / b.norm());
    let mut rep_dev = 0.0f64;
    for _ in 0..10 {
        let u = C::from_polar(rng.gen_range(0.2..1.0) * switch, rng.gen_range(0.0..TAU));
        let x = qspecial::e_func_series(a, b, qb, u)?.value;
        let y = e_func_theta(a, b, qb, u)?.value;
        rep_dev = rep_dev.max((x - y).norm() / x.norm());
    }
    rep.check(Check::at_most("E: series vs theta form", CheckKind::Identity, rep_dev, 1e-9));

    // Watson connection formula at random points
    let mut w_dev = 0.0f64;
    for _ in 0..20 {
        let rc = |rng: &mut ChaCha8Rng, lo: f64, hi: f64| C::from_polar(rng.gen_range(lo..hi), rng.gen_range(0.0..TAU));
        let (wa, wb, wc) = (rc(&mut rng, 0.2, 0.9), rc(&mut rng, 0.2, 0.9), rc(&mut rng, 0.1, 0.6));
        let x = rc(&mut rng, 0.3, 0.8);
        let lhs = basic_phi(&[wa, wb], &[wc], qb, x, Variant::Phi)?.value;
        let rhs = watson_rhs(wa, wb, wc, qb, x)?.value;
        w_dev = w_dev.max((lhs - rhs).norm() / lhs.norm().max(1e-300));
    }
    rep.check(Check::at_most("Watson connection residual, 20 points", CheckKind::Identity, w_dev, 1e-9));
    Ok(rep.finish())
}
