use crate::ZetaError;
use num_bigint::BigInt;
use num_complex::Complex64;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{ToPrimitive, Zero};
use padic_core::{normalize_integral, valuation, valuation_int, Prime, UnitCharacter};
use std::collections::BTreeMap;

/// Riemann sum of `max(|Q|, p^{-cap})^s chi` over the residues mod `p^K`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BruteForce {
    pub value: Complex64,
    /// Heuristic size of the discarded part: one level-`K` cell per unit root
    /// plus the cap truncation.
    pub error_estimate: f64,
}

/// Valuation histogram of `Q` over units mod `p^K`, bucketed by the residue
/// class mod `p^L` so that characters of conductor `<= L` can be applied.
#[derive(Debug, Clone)]
pub struct BruteForceTable {
    p: Prime,
    level: u32,
    class_level: u32,
    cap: i64,
    degree: usize,
    /// (capped valuation, residue mod p^L) -> count
    counts: BTreeMap<(i64, u64), u64>,
}

impl BruteForceTable {
    pub fn new(q: &[BigRational], p: Prime, k: u32, cap: u32, class_level: u32) -> Result<Self, ZetaError> {
        let k = k.max(1);
        let class_level = class_level.clamp(1, k);
        let pk = p.pow(k).ok_or(padic_core::PadicError::LevelTooLarge(k))?;
        let pl = p.pow(class_level).unwrap();
        let cap = cap as i64;
        let degree = q.iter().rposition(|c| !c.is_zero()).unwrap_or(0);
        let mut counts = BTreeMap::new();
        let Some((vmin, qt)) = normalize_integral(q, p) else {
            counts.insert((cap, 1), pk / p.get() * (p.get() - 1));
            return Ok(BruteForceTable { p, level: k, class_level, cap, degree, counts });
        };
        // integer polynomial with the same valuations as Q~
        let den = qt.iter().fold(BigInt::from(1), |acc, c| acc.lcm(c.denom()));
        let ints: Vec<BigInt> = qt.iter().map(|c| (c * BigRational::from_integer(den.clone())).to_integer()).collect();
        // residues mod p^E with (p^E)^2 < 2^64
        let mut e = 0u32;
        while p.pow(e + 1).is_some_and(|m| m < (1u64 << 32)) {
            e += 1;
        }
        let m = p.pow(e).unwrap();
        let mb = BigInt::from(m);
        let red: Vec<u64> = ints.iter().map(|c| c.mod_floor(&mb).to_u64().unwrap()).collect();
        let pu = p.get();
        let vden = valuation_int(&den, p).unwrap_or(0) as i64;
        debug_assert_eq!(vden, 0);
        for a in 1..pk {
            if a % pu == 0 {
                continue;
            }
            let am = a % m;
            let mut acc = 0u64;
            for &c in red.iter().rev() {
                acc = (acc * am + c) % m;
            }
            let v = if acc != 0 {
                let mut v = 0;
                while acc.is_multiple_of(pu) {
                    acc /= pu;
                    v += 1;
                }
                v
            } else {
                let x = BigRational::from_integer(BigInt::from(a));
                let val = ints.iter().rev().fold(BigRational::zero(), |s, c| s * &x + BigRational::from_integer(c.clone()));
                valuation(&val, p).finite().unwrap_or(cap)
            };
            let key = ((v + vmin).min(cap), a % pl);
            *counts.entry(key).or_insert(0) += 1;
        }
        Ok(BruteForceTable { p, level: k, class_level, cap, degree, counts })
    }

    pub fn eval(&self, chi: &UnitCharacter, s: Complex64) -> Result<BruteForce, ZetaError> {
        if chi.level() > self.class_level && !chi.is_trivial() {
            return Err(padic_core::PadicError::BadCharacter {
                level: self.class_level,
                index: chi.descriptor().index,
            }
            .into());
        }
        let pf = self.p.as_f64();
        let lnp = pf.ln();
        let w = pf.powi(-(self.level as i32)) / (1.0 - 1.0 / pf);
        let mut acc = Complex64::zero();
        let mut by_val: BTreeMap<i64, Complex64> = BTreeMap::new();
        for (&(v, a), &n) in &self.counts {
            *by_val.entry(v).or_insert(Complex64::zero()) += chi.value(a as i128)? * n as f64;
        }
        for (v, c) in by_val {
            acc += c * (-s * (v as f64 * lnp)).exp();
        }
        let re = s.re.max(0.0);
        let err = 2.0 * self.degree as f64 * w * pf.powf(-(self.level as f64) * re)
            + pf.powf(-(self.cap as f64) * re);
        Ok(BruteForce { value: acc * w, error_estimate: err })
    }
}

pub fn zeta_bruteforce(q: &[BigRational], chi: &UnitCharacter, s: Complex64, k: u32, cap: u32) -> Result<BruteForce, ZetaError> {
    BruteForceTable::new(q, chi.prime(), k, cap, chi.level().min(k.max(1)))?.eval(chi, s)
}

#[cfg(test)]
mod tests {
    use super::*;
    use padic_core::rational_poly;

    fn p(n: u64) -> Prime {
        Prime::new(n).unwrap()
    }

    #[test]
    fn noroots_is_exactly_one() {
        let chi = UnitCharacter::trivial(p(3)).unwrap();
        let b = zeta_bruteforce(&rational_poly(&[1, 0, 1]), &chi, Complex64::new(2.0, 0.0), 4, 12).unwrap();
        assert!((b.value - 1.0).norm() < 1e-14);
    }

    #[test]
    fn linear_oracle() {
        let chi = UnitCharacter::trivial(p(3)).unwrap();
        let b = zeta_bruteforce(&rational_poly(&[1, -1]), &chi, Complex64::new(1.0, 0.0), 8, 12).unwrap();
        assert!((b.value - 0.625).norm() < 1e-4);
    }

    #[test]
    fn s_zero_is_one() {
        for q in [vec![1, -1], vec![1, 2, 3], vec![1, 0, 0, -1]] {
            let chi = UnitCharacter::trivial(p(5)).unwrap();
            let b = zeta_bruteforce(&rational_poly(&q), &chi, Complex64::zero(), 3, 10).unwrap();
            assert!((b.value - 1.0).norm() < 1e-13);
        }
    }

    #[test]
    fn nontrivial_character_sums_to_zero_at_s0() {
        let chi = UnitCharacter::from_level_index(p(3), 2, 1).unwrap();
        let b = zeta_bruteforce(&rational_poly(&[1, -1]), &chi, Complex64::zero(), 5, 10).unwrap();
        assert!(b.value.norm() < 1e-13);
    }

    #[test]
    fn character_level_checked() {
        let chi = UnitCharacter::from_level_index(p(3), 3, 1).unwrap();
        let t = BruteForceTable::new(&rational_poly(&[1, -1]), p(3), 4, 10, 1).unwrap();
        assert!(t.eval(&chi, Complex64::new(1.0, 0.0)).is_err());
    }
}
