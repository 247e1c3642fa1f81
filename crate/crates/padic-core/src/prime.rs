use crate::PadicError;
use serde::{Deserialize, Serialize};

/// A rational prime, checked at construction.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(try_from = "u64", into = "u64")]
pub struct Prime(u64);

impl Prime {
    pub fn new(p: u64) -> Result<Self, PadicError> {
        if is_prime(p) {
            Ok(Prime(p))
        } else {
            Err(PadicError::NotPrime(p))
        }
    }

    #[inline]
    pub fn get(self) -> u64 {
        self.0
    }

    pub fn as_f64(self) -> f64 {
        self.0 as f64
    }

    /// `p^k` if it fits in a `u64`.
    pub fn pow(self, k: u32) -> Option<u64> {
        self.0.checked_pow(k)
    }

    /// Largest `e` with `p^e <= u64::MAX / p`, used to size modular arithmetic.
    pub fn max_safe_exponent(self) -> u32 {
        let mut e = 0;
        let mut acc: u64 = 1;
        while let Some(next) = acc.checked_mul(self.0) {
            if next > u64::MAX / self.0 {
                break;
            }
            acc = next;
            e += 1;
        }
        e
    }
}

impl TryFrom<u64> for Prime {
    type Error = PadicError;
    fn try_from(p: u64) -> Result<Self, Self::Error> {
        Prime::new(p)
    }
}

impl From<Prime> for u64 {
    fn from(p: Prime) -> u64 {
        p.0
    }
}

impl std::fmt::Display for Prime {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{}", self.0)
    }
}

fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    if n < 4 {
        return true;
    }
    if n.is_multiple_of(2) {
        return false;
    }
    let mut d = 3u64;
    while d.saturating_mul(d) <= n {
        if n.is_multiple_of(d) {
            return false;
        }
        d += 2;
    }
    true
}
