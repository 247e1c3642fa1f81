use crate::report::{Check, CheckKind, ExperimentReport};
use crate::ExperimentError;
use num_bigint::BigInt;
use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::{One, Pow, ToPrimitive};
use operator::{det_exact, min_power_matrix, TruncatedOperator};
use serde::{Deserialize, Serialize};
use spectral::eigenvalues;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct PosiParams {
    /// Values of the base as `(numerator, denominator)`, each in `(0, 1)`.
    pub bases: Vec<(i64, i64)>,
    pub max_n: usize,
    /// Size for the numerical positivity check.
    pub positivity_n: usize,
    /// Multiplies the base inside the closed form.
    pub perturb: f64,
}

impl Default for PosiParams {
    fn default() -> Self {
        PosiParams { bases: vec![(1, 2), (1, 3), (2, 5)], max_n: 12, positivity_n: 5, perturb: 1.0 }
    }
}

/// `qq^{-N(N+1)/2} (1 - qq)^N`.
pub fn min_power_det_closed_form(qq: &BigRational, n: usize) -> BigRational {
    let tri = (n * (n + 1) / 2) as u32;
    Pow::pow(&qq.recip(), tri) * Pow::pow(&(BigRational::one() - qq), n as u32)
}

pub fn run_posi(pp: &PosiParams) -> Result<ExperimentReport, ExperimentError> {
    let mut rep = ExperimentReport::new("posi");
    rep.param("max_N", pp.max_n).param("bases", format!("{:?}", pp.bases));
    rep.formula("det(qq^{-min(m,n)})_{0<=m,n<=N} = qq^{-N(N+1)/2} (1 - qq)^N");
    let factor = BigRational::from_float(pp.perturb).ok_or_else(|| ExperimentError::Invalid("perturb".into()))?;
    for &(a, b) in &pp.bases {
        if !(0 < a && a < b) {
            return Err(ExperimentError::Invalid(format!("base {a}/{b} is not in (0, 1)")));
        }
        let qq = BigRational::new(BigInt::from(a), BigInt::from(b));
        let formula_q = &qq * &factor;
        let mut bad = Vec::new();
        for n in 0..=pp.max_n {
            let det = det_exact(min_power_matrix(&qq, n + 1));
            if det != min_power_det_closed_form(&formula_q, n) {
                bad.push(n);
            }
        }
        rep.check(
            Check::holds(format!("exact determinant, base {a}/{b}"), CheckKind::Identity, bad.is_empty())
                .with_detail(if bad.is_empty() { String::new() } else { format!("differs at N = {bad:?}") }),
        );
    }
    // numerical positivity of the smallest eigenvalue
    if let Some(&(a, b)) = pp.bases.first() {
        let qq = BigRational::new(BigInt::from(a), BigInt::from(b));
        let m = min_power_matrix(&qq, pp.positivity_n);
        let t = TruncatedOperator::from_fn(pp.positivity_n, operator::Provenance::new("min-power"), |i, j| {
            Complex64::new(m[i][j].to_f64().unwrap_or(f64::NAN), 0.0)
        });
        let sp = eigenvalues(&t)?;
        let min_re = sp.eigenvalues.iter().map(|z| z.re).fold(f64::INFINITY, f64::min);
        let max_im = sp.eigenvalues.iter().map(|z| z.im.abs()).fold(0.0, f64::max);
        rep.check(
            Check::holds(format!("positive spectrum, base {a}/{b}"), CheckKind::Structure, min_re > 0.0 && max_im < 1e-12)
                .with_detail(format!("smallest eigenvalue {min_re:.6e}")),
        );
        rep.eigenvalues = sp.eigenvalues;
    }
    Ok(rep.finish())
}
