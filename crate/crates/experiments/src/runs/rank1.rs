use crate::common::{c, match_zeros, record};
use crate::report::{Check, CheckKind, ExperimentReport};
use crate::ExperimentError;
use num_bigint::BigInt;
use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::{One, Pow, Zero};
use operator::{Provenance, TruncatedOperator};
use qspecial::{hahn_exton_j, EntireFunctionHandle, QBase};
use serde::{Deserialize, Serialize};
use spectral::eigenvalues;

type C = Complex64;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct Rank1Params {
    pub p: u64,
    pub s: f64,
    pub d: u32,
    pub n: usize,
    pub count: usize,
    pub tol: f64,
    pub perturb: f64,
}

impl Default for Rank1Params {
    fn default() -> Self {
        Rank1Params { p: 3, s: 1.0, d: 1, n: 60, count: 5, tol: 1e-8, perturb: 1.0 }
    }
}

/// `(p^{-k ds} - 1) / (1 - p^{-ds})`, tending to `-k` as `s -> 0`.
fn ratio(p: f64, ds: f64, k: usize) -> f64 {
    if ds == 0.0 {
        return -(k as f64);
    }
    let t = p.powf(-ds);
    (t.powi(k as i32) - 1.0) / (1.0 - t)
}

/// The operator on sequences with `f_0 = 0`: rows and columns `m, n >= 1`.
pub fn rank_one_perturbation_matrix(p: f64, s: f64, d: u32, n: usize) -> TruncatedOperator {
    let ds = d as f64 * s;
    TruncatedOperator::from_fn(n, Provenance::new("rank-one perturbation").with("p", p).with("s", s), |i, j| {
        let (m, k) = (i + 1, j + 1);
        c(p.powf(-((m + k) as f64) / 2.0) * ratio(p, ds, m.min(k)))
    })
}

/// `L` with `(Lg)_n = q^{-n-1}(sqrt(p) g_{n+1} - (1 + pq) g_n + sqrt(p) q g_{n-1})`.
fn jacobi(p: f64, q: f64, n: usize) -> Vec<Vec<f64>> {
    let sp = p.sqrt();
    let mut l = vec![vec![0.0; n]; n];
    for i in 0..n {
        let w = q.powi(-(i as i32) - 1);
        l[i][i] = -(1.0 + p * q) * w;
        if i + 1 < n {
            l[i][i + 1] = sp * w;
        }
        if i > 0 {
            l[i][i - 1] = sp * q * w;
        }
    }
    l
}

/// Largest componentwise residual `|(L A - I)_{ij}| / (|L| |A|)_{ij}` over
/// all rows but the last.
fn interior_residual(l: &[Vec<f64>], a: &TruncatedOperator) -> f64 {
    let n = a.n;
    let mut worst = 0.0f64;
    for i in 0..n - 1 {
        for j in 0..n {
            let (mut v, mut scale) = (0.0, 0.0);
            for k in i.saturating_sub(1)..=(i + 1).min(n - 1) {
                v += l[i][k] * a.get(k, j).re;
                scale += (l[i][k] * a.get(k, j).re).abs();
            }
            let target = if i == j { 1.0 } else { 0.0 };
            worst = worst.max((v - target).abs() / scale);
        }
    }
    worst
}

/// Exact form of the interior identity for integral `ds`: with
/// `A_{ij} = p^{-(i+j+2)/2} r_{ij}` the row-`i` combination reduces to
/// `q^{-i-1} p^{-(i+j+2)/2} (-(1+pq) r_ij + r_{i+1,j} + pq r_{i-1,j})`.
fn exact_interior_identity(p: u64, ds: u32, n: usize) -> bool {
    let pr = BigRational::from_integer(BigInt::from(p));
    let t = Pow::pow(&pr.recip(), ds);
    let q = pr.recip() * &t;
    let r = |i: usize, j: usize| -> BigRational {
        let k = (i.min(j) + 1) as u32;
        if ds == 0 {
            -BigRational::from_integer(BigInt::from(k))
        } else {
            (Pow::pow(&t, k) - BigRational::one()) / (BigRational::one() - &t)
        }
    };
    let pq = &pr * &q;
    for i in 0..n - 1 {
        for j in 0..n {
            let mut b = -(BigRational::one() + &pq) * r(i, j) + r(i + 1, j);
            if i > 0 {
                b += &pq * r(i - 1, j);
            }
            if i == j {
                // q^{-i-1} p^{-i-1} b = 1
                if b != Pow::pow(&(&q * &pr), (i + 1) as u32) {
                    return false;
                }
            } else if !b.is_zero() {
                return false;
            }
        }
    }
    true
}

pub fn run_rank1_perturbation(pp: &Rank1Params) -> Result<ExperimentReport, ExperimentError> {
    let mut rep = ExperimentReport::new("rank1_perturbation");
    rep.param("p", pp.p).param("s", pp.s).param("d", pp.d).param("N", pp.n);
    let p = pp.p as f64;
    if pp.s * pp.d as f64 <= -1.0 {
        return Err(ExperimentError::Invalid("need s > -1/d".into()));
    }
    let q = p.powf(-1.0 - pp.d as f64 * pp.s);
    rep.param("q", q);
    let a = rank_one_perturbation_matrix(p, pp.s, pp.d, pp.n);
    let sp = eigenvalues(&a)?;

    rep.formula("eigenvalues solve J(1/p, q, -1/(p lambda)) = 0");
    let qb = QBase::real(q)?;
    let aj = c(pp.perturb / p);
    let h = EntireFunctionHandle::new("J", move |u: C| hahn_exton_j(aj, qb, -u / p));
    let m = match_zeros(&mut rep, "J", &h, &sp, pp.count, pp.tol)?;
    record(&mut rep, &sp, &m, pp.count + 3);

    rep.formula("L A = I off the last row, L tridiagonal");
    let l = jacobi(p, q, pp.n);
    rep.check(Check::at_most("L A - I interior (componentwise)", CheckKind::Identity, interior_residual(&l, &a), 1e-10));
    let ds = pp.d as f64 * pp.s;
    if ds >= 0.0 && ds.fract() == 0.0 {
        rep.check(Check::holds("L A - I interior (exact)", CheckKind::Identity, exact_interior_identity(pp.p, ds as u32, pp.n)));
    }

    // q-Fourier-Bessel orthogonality over zeros of J(1/p, q, .)
    let us: Vec<C> = m.zeros.expanded().iter().take(3).map(|z| -z / p).collect();
    let j = |u: C| hahn_exton_j(c(1.0 / p), qb, u).map(|x| x.value);
    let mut worst = 0.0f64;
    for x in 0..us.len() {
        for y in x + 1..us.len() {
            let mut sum = C::new(0.0, 0.0);
            for n in 0..400 {
                let w = q.powi(n + 1);
                let term = p.powi(-n) * j(w * us[x])? * j(w * us[y])?;
                sum += term;
                if term.norm() < 1e-20 {
                    break;
                }
            }
            worst = worst.max(sum.norm());
        }
    }
    rep.check(Check::at_most("orthogonality, top 3 zeros", CheckKind::Identity, worst, 1e-8));
    Ok(rep.finish())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn limit_at_zero() {
        assert!((ratio(3.0, 1e-9, 4) + 4.0).abs() < 1e-6);
        assert_eq!(ratio(3.0, 0.0, 4), -4.0);
    }

    #[test]
    fn exact_identity_fails_for_wrong_prime() {
        assert!(exact_interior_identity(3, 1, 12));
        assert!(exact_interior_identity(5, 2, 10));
    }
}
