use crate::cells::{zeta_shift, ZetaMode, ZetaValue};
use crate::{RatFunc, ZetaError};
use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::{One, Zero};
use padic_core::{valuation, CharacterDescriptor, Prime, UnitCharacter};
use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;

/// `(m_-, m_+)`: `|Q_m| = 1` on units for `m <= m_-` and `|Q_m| = |c| p^{mr}`
/// for `m >= m_+`.
pub fn stabilization_bounds(q: &[BigRational], p: Prime) -> Result<(i64, i64), ZetaError> {
    let vals: Vec<(i64, i64)> = q
        .iter()
        .enumerate()
        .filter_map(|(j, c)| valuation(c, p).finite().map(|v| (j as i64, v)))
        .collect();
    let &(r, vr) = vals.last().ok_or(ZetaError::Degenerate)?;
    if r == 0 {
        return Err(ZetaError::Degenerate);
    }
    let lo = vals
        .iter()
        .filter(|&&(j, _)| j >= 1)
        .map(|&(j, v)| (v - 1).div_euclid(j))
        .min()
        .unwrap();
    let hi = vals
        .iter()
        .filter(|&&(j, _)| j < r)
        .map(|&(j, v)| (vr - v).div_euclid(r - j) + 1)
        .max()
        .unwrap();
    Ok((lo, hi))
}

fn ser_coeffs<S: serde::Serializer>(q: &[BigRational], s: S) -> Result<S::Ok, S::Error> {
    let v: Vec<String> = q.iter().map(|c| c.to_string()).collect();
    v.serialize(s)
}

fn de_coeffs<'de, D: serde::Deserializer<'de>>(d: D) -> Result<Vec<BigRational>, D::Error> {
    let v: Vec<String> = Vec::deserialize(d)?;
    v.iter()
        .map(|s| s.parse().map_err(serde::de::Error::custom))
        .collect()
}

/// Laurent data of `Z(Q, chi, s, z) = sum_m (zeta(Q_m) - delta) z^m`.
///
/// `Z = Z_0 + delta (|c|^s / (1 - p^{rs} z) - 1 / (1 - z))`; only the finitely
/// many coefficients of `Z_0` are stored.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ZetaProfile {
    pub p: u64,
    #[serde(serialize_with = "ser_coeffs", deserialize_with = "de_coeffs")]
    pub q: Vec<BigRational>,
    pub chi: CharacterDescriptor,
    /// The concrete `s` in numeric mode.
    pub s: Option<[f64; 2]>,
    pub m_minus: i64,
    pub m_plus: i64,
    pub degree: usize,
    /// `v_p(c_r)`, so `|c| = p^{-lead_valuation}`.
    pub lead_valuation: i64,
    pub z0: BTreeMap<i64, ZetaValue>,
}

impl ZetaProfile {
    pub fn trivial_character(&self) -> bool {
        self.chi.index == 0
    }

    fn s_or(&self, s: Complex64) -> Complex64 {
        self.s.map_or(s, |[re, im]| Complex64::new(re, im))
    }

    /// Laurent coefficients of `Z_0` at `s` (ignored in numeric mode).
    pub fn z0_at(&self, s: Complex64) -> BTreeMap<i64, Complex64> {
        let s = self.s_or(s);
        self.z0.iter().map(|(&m, v)| (m, v.at(self.p, s))).collect()
    }

    /// `Z_0(z)` at `s`.
    pub fn eval_z0(&self, s: Complex64, z: Complex64) -> Complex64 {
        self.z0_at(s)
            .into_iter()
            .map(|(m, c)| c * z.powi(m as i32))
            .sum()
    }

    /// Full `Z(Q, chi, s, z)` including the structural poles.
    pub fn eval_z(&self, s: Complex64, z: Complex64) -> Complex64 {
        let s = self.s_or(s);
        let mut v = self.eval_z0(s, z);
        if self.trivial_character() && self.degree > 0 {
            let lnp = (self.p as f64).ln();
            let c_s = (-s * (self.lead_valuation as f64 * lnp)).exp();
            let prs = (s * (self.degree as f64 * lnp)).exp();
            v += c_s / (1.0 - prs * z) - 1.0 / (1.0 - z);
        }
        v
    }

    /// `Z_0` is a constant (possibly zero) in `z`.
    pub fn is_constant(&self) -> bool {
        self.z0.keys().all(|&m| m == 0)
    }

    pub fn is_zero(&self, tol: f64) -> bool {
        self.z0.values().all(|v| match v {
            ZetaValue::Exact(f) => f.is_zero(),
            ZetaValue::Numeric([re, im]) => re.hypot(*im) <= tol,
        })
    }
}

/// Computes the Laurent part `Z_0`.
pub fn z0_profile(q: &[BigRational], chi: &UnitCharacter, mode: ZetaMode) -> Result<ZetaProfile, ZetaError> {
    if !q.first().is_some_and(|c| c.is_one()) {
        return Err(ZetaError::ConstantTerm);
    }
    if mode == ZetaMode::Exact && !chi.is_trivial() {
        return Err(ZetaError::ExactNeedsTrivial);
    }
    let p = chi.prime();
    let delta = chi.is_trivial();
    let s = match mode {
        ZetaMode::Numeric(s) => Some([s.re, s.im]),
        ZetaMode::Exact => None,
    };
    let mut prof = ZetaProfile {
        p: p.get(),
        q: q.to_vec(),
        chi: chi.descriptor(),
        s,
        m_minus: 0,
        m_plus: 0,
        degree: 0,
        lead_valuation: 0,
        z0: BTreeMap::new(),
    };
    let (lo, hi) = match stabilization_bounds(q, p) {
        Err(ZetaError::Degenerate) => return Ok(prof),
        r => r?,
    };
    let r = q.iter().rposition(|c| !c.is_zero()).unwrap();
    let vr = valuation(&q[r], p).finite().unwrap();
    prof.m_minus = lo;
    prof.m_plus = hi;
    prof.degree = r;
    prof.lead_valuation = vr;
    let (start, end) = if delta {
        ((lo + 1).min(0), hi.max(0) - 1)
    } else {
        (lo + 1, hi - 1)
    };
    for m in start..=end {
        let z = zeta_shift(q, m, chi, mode)?;
        let tail_t = vr - m * r as i64;
        let coeff = match z {
            ZetaValue::Exact(f) => {
                let mut c = f.sub(&RatFunc::one());
                if m >= 0 {
                    c = c.sub(&RatFunc::monomial(BigRational::one(), tail_t).sub(&RatFunc::one()));
                }
                if c.is_zero() {
                    continue;
                }
                ZetaValue::Exact(c)
            }
            ZetaValue::Numeric(_) => {
                let sv = mode_s(mode);
                let mut c = z.at(p.get(), sv);
                if delta {
                    c -= 1.0;
                    if m >= 0 {
                        c -= (-sv * (tail_t as f64 * p.as_f64().ln())).exp() - 1.0;
                    }
                }
                if c == Complex64::zero() {
                    continue;
                }
                ZetaValue::numeric(c)
            }
        };
        prof.z0.insert(m, coeff);
    }
    Ok(prof)
}

fn mode_s(mode: ZetaMode) -> Complex64 {
    match mode {
        ZetaMode::Numeric(s) => s,
        ZetaMode::Exact => Complex64::zero(),
    }
}
