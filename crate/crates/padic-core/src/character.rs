use crate::{PadicError, Prime};
use num_complex::Complex64;
use num_integer::Integer;
use serde::{Deserialize, Serialize};
use std::sync::Arc;

const MAX_TABLE: u64 = 1 << 24;

/// Smallest primitive root modulo `p^2`; for odd `p` it generates
/// `(Z/p^k)^x` for every `k`.
pub fn primitive_root(p: Prime) -> u64 {
    let p = p.get();
    if p == 2 {
        return 1;
    }
    let n = p - 1;
    let mut factors = Vec::new();
    let mut m = n;
    let mut f = 2;
    while f * f <= m {
        if m.is_multiple_of(f) {
            factors.push(f);
            while m.is_multiple_of(f) {
                m /= f;
            }
        }
        f += 1;
    }
    if m > 1 {
        factors.push(m);
    }
    let p2 = p * p;
    (2..p)
        .find(|&g| {
            factors.iter().all(|&f| pow_mod(g, n / f, p) != 1) && pow_mod(g, n, p2) != 1
        })
        .expect("primitive root exists")
}

pub(crate) fn pow_mod(mut b: u64, mut e: u64, m: u64) -> u64 {
    let mut r: u128 = 1 % m as u128;
    let mut bb = (b % m) as u128;
    while e > 0 {
        if e & 1 == 1 {
            r = r * bb % m as u128;
        }
        bb = bb * bb % m as u128;
        e >>= 1;
    }
    b = r as u64;
    b
}

/// Serializable description of a character: `chi(g^k) = exp(2 pi i index k / phi(p^level))`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct CharacterDescriptor {
    pub p: u64,
    pub conductor: u32,
    pub index: u64,
}

/// A character of `Z_p^x` of finite conductor, `p` odd.
#[derive(Clone)]
pub struct UnitCharacter {
    p: Prime,
    conductor: u32,
    level: u32,
    modulus: u64,
    phi: u64,
    index: u64,
    generator: u64,
    dlog: Arc<Vec<u32>>,
}

impl std::fmt::Debug for UnitCharacter {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("UnitCharacter")
            .field("p", &self.p.get())
            .field("conductor", &self.conductor)
            .field("index", &self.index)
            .finish()
    }
}

impl PartialEq for UnitCharacter {
    fn eq(&self, other: &Self) -> bool {
        self.descriptor() == other.descriptor()
    }
}

impl Eq for UnitCharacter {}

impl UnitCharacter {
    pub fn trivial(p: Prime) -> Result<Self, PadicError> {
        Self::from_level_index(p, 1, 0)
    }

    /// The Legendre symbol mod `p`.
    pub fn quadratic(p: Prime) -> Result<Self, PadicError> {
        Self::from_level_index(p, 1, (p.get() - 1) / 2)
    }

    /// Character number `j` of `(Z/p^k)^x` with respect to the fixed generator.
    pub fn from_level_index(p: Prime, k: u32, j: u64) -> Result<Self, PadicError> {
        if p.get() == 2 {
            return Err(PadicError::EvenPrime);
        }
        let k = k.max(1);
        let pk = p.pow(k).ok_or(PadicError::LevelTooLarge(k))?;
        let phi_k = pk / p.get() * (p.get() - 1);
        if j >= phi_k {
            return Err(PadicError::BadCharacter { level: k, index: j });
        }
        let conductor = if j == 0 {
            0
        } else {
            (1..=k)
                .find(|&l| j.is_multiple_of(p.pow(k - l).unwrap()))
                .expect("l = k always works")
        };
        let level = conductor.max(1);
        let index = j / p.pow(k - level).unwrap();
        Self::build(p, conductor, level, index)
    }

    fn build(p: Prime, conductor: u32, level: u32, index: u64) -> Result<Self, PadicError> {
        let modulus = p.pow(level).ok_or(PadicError::LevelTooLarge(level))?;
        if modulus > MAX_TABLE {
            return Err(PadicError::LevelTooLarge(level));
        }
        let phi = modulus / p.get() * (p.get() - 1);
        let generator = primitive_root(p);
        let mut dlog = vec![u32::MAX; modulus as usize];
        let mut x = 1u64;
        for k in 0..phi {
            dlog[x as usize] = k as u32;
            x = x * generator % modulus;
        }
        Ok(UnitCharacter {
            p,
            conductor,
            level,
            modulus,
            phi,
            index,
            generator,
            dlog: Arc::new(dlog),
        })
    }

    pub fn from_descriptor(d: CharacterDescriptor) -> Result<Self, PadicError> {
        let p = Prime::new(d.p)?;
        let level = d.conductor.max(1);
        Self::from_level_index(p, level, d.index)
            .and_then(|c| {
                if c.conductor == d.conductor {
                    Ok(c)
                } else {
                    Err(PadicError::BadCharacter { level, index: d.index })
                }
            })
    }

    pub fn descriptor(&self) -> CharacterDescriptor {
        CharacterDescriptor {
            p: self.p.get(),
            conductor: self.conductor,
            index: self.index,
        }
    }

    pub fn prime(&self) -> Prime {
        self.p
    }

    /// The exponent `l`: minimal with `chi` trivial on `1 + p^l Z_p`.
    pub fn conductor(&self) -> u32 {
        self.conductor
    }

    /// `max(l, 1)`, the level of the value table.
    pub fn level(&self) -> u32 {
        self.level
    }

    /// `p^level`.
    pub fn modulus(&self) -> u64 {
        self.modulus
    }

    pub fn generator(&self) -> u64 {
        self.generator
    }

    pub fn is_trivial(&self) -> bool {
        self.index == 0
    }

    /// Order of `chi` in the character group.
    pub fn order(&self) -> u64 {
        self.phi / self.index.gcd(&self.phi)
    }

    pub fn conjugate(&self) -> Self {
        let mut c = self.clone();
        c.index = (self.phi - self.index) % self.phi;
        c
    }

    /// Discrete log of `u mod p^level` to the fixed generator.
    pub fn dlog(&self, u: i128) -> Result<u64, PadicError> {
        let r = u.rem_euclid(self.modulus as i128) as usize;
        match self.dlog[r] {
            u32::MAX => Err(PadicError::NotUnit(u, self.p.get())),
            k => Ok(k as u64),
        }
    }

    /// `chi(u) = exp(2 pi i num/den)` with the fraction reduced.
    pub fn angle(&self, u: i128) -> Result<(u64, u64), PadicError> {
        let k = self.dlog(u)?;
        let num = ((self.index as u128 * k as u128) % self.phi as u128) as u64;
        let g = num.gcd(&self.phi);
        Ok((num / g, self.phi / g))
    }

    pub fn value(&self, u: i128) -> Result<Complex64, PadicError> {
        let (num, den) = self.angle(u)?;
        Ok(root_of_unity(num, den))
    }

    /// Value at `exp(2 pi i k / phi)` for a dlog `k`; no residue check.
    pub fn value_at_dlog(&self, k: u64) -> Complex64 {
        let num = ((self.index as u128 * k as u128) % self.phi as u128) as u64;
        let g = num.gcd(&self.phi);
        root_of_unity(num / g, self.phi / g)
    }
}

/// `exp(2 pi i num/den)`, exact for `den` dividing 4.
pub fn root_of_unity(num: u64, den: u64) -> Complex64 {
    match (num % den, den) {
        (0, _) => Complex64::new(1.0, 0.0),
        (1, 2) => Complex64::new(-1.0, 0.0),
        (1, 4) => Complex64::new(0.0, 1.0),
        (3, 4) => Complex64::new(0.0, -1.0),
        (n, d) => Complex64::from_polar(1.0, std::f64::consts::TAU * n as f64 / d as f64),
    }
}

/// All `phi(p^k)` characters of `(Z/p^k)^x`.
pub fn enumerate_characters(p: Prime, k: u32) -> Result<Vec<UnitCharacter>, PadicError> {
    let k = k.max(1);
    let pk = p.pow(k).ok_or(PadicError::LevelTooLarge(k))?;
    let phi = pk / p.get() * (p.get() - 1);
    (0..phi)
        .map(|j| UnitCharacter::from_level_index(p, k, j))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn p(n: u64) -> Prime {
        Prime::new(n).unwrap()
    }

    #[test]
    fn quadratic_mod_five() {
        let chi = UnitCharacter::quadratic(p(5)).unwrap();
        assert_eq!(chi.conductor(), 1);
        assert_eq!(chi.value(2).unwrap(), Complex64::new(-1.0, 0.0));
        assert_eq!(chi.value(4).unwrap(), Complex64::new(1.0, 0.0));
        assert_eq!(chi.value(7).unwrap(), Complex64::new(-1.0, 0.0));
        assert!(chi.value(10).is_err());
    }

    #[test]
    fn quadratic_is_legendre() {
        for pr in [3u64, 5, 7, 11, 13] {
            let chi = UnitCharacter::quadratic(p(pr)).unwrap();
            for u in 1..pr {
                let euler = pow_mod(u, (pr - 1) / 2, pr);
                let want = if euler == 1 { 1.0 } else { -1.0 };
                assert_eq!(chi.value(u as i128).unwrap().re, want);
            }
        }
    }

    #[test]
    fn trivial_is_one() {
        let chi = UnitCharacter::trivial(p(3)).unwrap();
        assert_eq!(chi.value(7).unwrap(), Complex64::new(1.0, 0.0));
        assert_eq!(chi.conductor(), 0);
        assert!(chi.is_trivial());
    }

    #[test]
    fn counts() {
        assert_eq!(enumerate_characters(p(3), 1).unwrap().len(), 2);
        assert_eq!(enumerate_characters(p(3), 2).unwrap().len(), 6);
        assert_eq!(enumerate_characters(p(5), 1).unwrap().len(), 4);
    }

    #[test]
    fn primitive_roots() {
        assert_eq!(primitive_root(p(3)), 2);
        assert_eq!(primitive_root(p(5)), 2);
        assert_eq!(primitive_root(p(7)), 3);
        // 14 is a primitive root of 29 but not of 29^2; the smallest lifts fine
        for pr in [3u64, 5, 7, 11, 13, 29, 37, 40487] {
            let g = primitive_root(p(pr));
            assert_ne!(pow_mod(g, pr - 1, pr * pr), 1);
        }
    }

    #[test]
    fn conductors_are_exact() {
        for pr in [3u64, 5] {
            let pp = p(pr);
            for k in 1..=3 {
                let m = pr.pow(k);
                for chi in enumerate_characters(pp, k).unwrap() {
                    let l = chi.conductor();
                    let trivial_on = |lev: u32| {
                        let step = pr.pow(lev) as i128;
                        (0..(m as i128 / step.max(1))).all(|t| {
                            let u = 1 + step * t;
                            u % pr as i128 == 0 || (chi.value(u).unwrap() - 1.0).norm() < 1e-12
                        })
                    };
                    assert!(trivial_on(l), "trivial on 1+p^l");
                    if l >= 1 {
                        assert!(!trivial_on(l - 1), "l minimal");
                    }
                }
            }
        }
    }

    #[test]
    fn descriptor_roundtrip() {
        for chi in enumerate_characters(p(5), 2).unwrap() {
            let back = UnitCharacter::from_descriptor(chi.descriptor()).unwrap();
            assert_eq!(back, chi);
        }
    }

    proptest! {
        #[test]
        fn multiplicative(j in 0u64..18, u in 1i128..10_000, v in 1i128..10_000) {
            let pp = p(3);
            prop_assume!(u % 3 != 0 && v % 3 != 0);
            let chi = UnitCharacter::from_level_index(pp, 3, j).unwrap();
            let lhs = chi.value(u * v).unwrap();
            let rhs = chi.value(u).unwrap() * chi.value(v).unwrap();
            prop_assert!((lhs - rhs).norm() < 1e-12);
        }

        #[test]
        fn multiplicative_mod_25(j in 0u64..20, u in 1i128..100_000, v in 1i128..100_000) {
            let pp = p(5);
            prop_assume!(u % 5 != 0 && v % 5 != 0);
            let chi = UnitCharacter::from_level_index(pp, 2, j).unwrap();
            let lhs = chi.value(u * v).unwrap();
            let rhs = chi.value(u).unwrap() * chi.value(v).unwrap();
            prop_assert!((lhs - rhs).norm() < 1e-12);
        }
    }
}
