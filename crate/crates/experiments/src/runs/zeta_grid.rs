use crate::report::{Check, CheckKind, ExperimentReport};
use crate::ExperimentError;
use num_complex::Complex64;
use num_rational::BigRational;
use padic_core::{rational_poly, Prime, UnitCharacter};
use serde::{Deserialize, Serialize};
use zeta::{zeta_exact, BruteForceTable};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct ZetaGridParams {
    pub primes: Vec<u64>,
    /// `(Re s, Im s)`.
    pub s_values: Vec<(f64, f64)>,
    pub k: u32,
    pub cap: u32,
    pub tol: f64,
    /// Multiplies the exact value.
    pub perturb: f64,
}

impl Default for ZetaGridParams {
    fn default() -> Self {
        ZetaGridParams {
            primes: vec![3, 5, 7],
            s_values: vec![(1.0, 0.0), (2.0, 0.0), (0.7, 0.3)],
            k: 8,
            cap: 40,
            tol: 1e-6,
            perturb: 1.0,
        }
    }
}

/// `1 - x`, `1 + x^2`, `1 + p x`, `(1 - x)(1 + x + x^2)`.
pub fn grid_polys(p: u64) -> Vec<(String, Vec<BigRational>)> {
    let p = p as i64;
    vec![
        ("1-x".into(), rational_poly(&[1, -1])),
        ("1+x^2".into(), rational_poly(&[1, 0, 1])),
        (format!("1+{p}x"), rational_poly(&[1, p])),
        ("1-x^3".into(), rational_poly(&[1, 0, 0, -1])),
    ]
}

pub fn run_zeta_agreement(pp: &ZetaGridParams) -> Result<ExperimentReport, ExperimentError> {
    let mut rep = ExperimentReport::new("zeta_agreement");
    rep.param("K", pp.k).param("cap", pp.cap).param("primes", format!("{:?}", pp.primes));
    rep.formula("exact rational function of t = p^{-s} against the level-K Riemann sum");
    let mut worst = 0.0f64;
    let mut worst_at = String::new();
    let mut count = 0;
    for &pv in &pp.primes {
        let p = Prime::new(pv)?;
        let chi = UnitCharacter::trivial(p)?;
        for (name, q) in grid_polys(pv) {
            let exact = zeta_exact(&q, p)?;
            let table = BruteForceTable::new(&q, p, pp.k, pp.cap, 1)?;
            for &(re, im) in &pp.s_values {
                let s = Complex64::new(re, im);
                let e = exact.eval_s(pv, s) * pp.perturb;
                let b = table.eval(&chi, s)?.value;
                let d = (e - b).norm();
                count += 1;
                if d > worst {
                    worst = d;
                    worst_at = format!("Q = {name}, p = {pv}, s = {s}");
                }
            }
        }
    }
    rep.check(
        Check::at_most("exact vs brute force", CheckKind::Oracle, worst, pp.tol)
            .with_detail(format!("{count} cases, worst at {worst_at}")),
    );
    if pp.primes.contains(&3) {
        let z = zeta_exact(&rational_poly(&[1, -1]), Prime::new(3)?)?;
        let third = BigRational::new(1.into(), 3.into());
        let five_eighths = BigRational::new(5.into(), 8.into());
        let got = z.eval(&third).map(|v| v * BigRational::from_float(pp.perturb).unwrap_or_default());
        rep.check(
            Check::holds("zeta(1 - x, 1, s = 1) = 5/8 at p = 3", CheckKind::Oracle, got.as_ref() == Some(&five_eighths))
                .with_detail(got.map(|v| v.to_string()).unwrap_or_else(|| "pole".into())),
        );
    }
    Ok(rep.finish())
}
