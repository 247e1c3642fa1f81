use crate::Prime;
use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};
use std::cmp::Ordering;

/// Integer extended by `+infinity`, the value group of `v_p` with zero included.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum ExtInt {
    Finite(i64),
    Infinity,
}

impl ExtInt {
    pub fn finite(self) -> Option<i64> {
        match self {
            ExtInt::Finite(v) => Some(v),
            ExtInt::Infinity => None,
        }
    }

    pub fn is_infinite(self) -> bool {
        matches!(self, ExtInt::Infinity)
    }
}

impl PartialOrd for ExtInt {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for ExtInt {
    fn cmp(&self, other: &Self) -> Ordering {
        match (self, other) {
            (ExtInt::Finite(a), ExtInt::Finite(b)) => a.cmp(b),
            (ExtInt::Finite(_), ExtInt::Infinity) => Ordering::Less,
            (ExtInt::Infinity, ExtInt::Finite(_)) => Ordering::Greater,
            (ExtInt::Infinity, ExtInt::Infinity) => Ordering::Equal,
        }
    }
}

impl std::ops::Add for ExtInt {
    type Output = ExtInt;
    fn add(self, rhs: ExtInt) -> ExtInt {
        match (self, rhs) {
            (ExtInt::Finite(a), ExtInt::Finite(b)) => ExtInt::Finite(a + b),
            _ => ExtInt::Infinity,
        }
    }
}

impl std::fmt::Display for ExtInt {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            ExtInt::Finite(v) => write!(f, "{v}"),
            ExtInt::Infinity => write!(f, "+inf"),
        }
    }
}

/// `v_p(n)` for a nonzero integer; `None` for zero.
pub fn valuation_int(n: &BigInt, p: Prime) -> Option<u64> {
    if n.is_zero() {
        return None;
    }
    let pb = BigInt::from(p.get());
    let mut m = n.abs();
    let mut v = 0;
    loop {
        let (q, r) = m.div_rem(&pb);
        if !r.is_zero() {
            return Some(v);
        }
        m = q;
        v += 1;
    }
}

pub fn valuation(x: &BigRational, p: Prime) -> ExtInt {
    match valuation_int(x.numer(), p) {
        None => ExtInt::Infinity,
        Some(a) => {
            let b = valuation_int(x.denom(), p).unwrap_or(0);
            ExtInt::Finite(a as i64 - b as i64)
        }
    }
}

/// `|x|_p` as an exact rational, `0` at `x = 0`.
pub fn abs_p(x: &BigRational, p: Prime) -> BigRational {
    match valuation(x, p) {
        ExtInt::Infinity => BigRational::zero(),
        ExtInt::Finite(v) => p_power(p, -v),
    }
}

pub(crate) fn p_power(p: Prime, e: i64) -> BigRational {
    let base = BigInt::from(p.get()).pow(e.unsigned_abs() as u32);
    if e >= 0 {
        BigRational::from_integer(base)
    } else {
        BigRational::new(BigInt::one(), base)
    }
}

/// A rational number together with its cached `p`-adic valuation.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PAdicRational {
    value: BigRational,
    p: Prime,
    val: ExtInt,
}

impl PAdicRational {
    pub fn new(value: BigRational, p: Prime) -> Self {
        let val = valuation(&value, p);
        PAdicRational { value, p, val }
    }

    pub fn from_int(n: i64, p: Prime) -> Self {
        Self::new(BigRational::from_integer(n.into()), p)
    }

    pub fn value(&self) -> &BigRational {
        &self.value
    }

    pub fn prime(&self) -> Prime {
        self.p
    }

    pub fn valuation(&self) -> ExtInt {
        self.val
    }

    pub fn abs(&self) -> BigRational {
        match self.val {
            ExtInt::Infinity => BigRational::zero(),
            ExtInt::Finite(v) => p_power(self.p, -v),
        }
    }

    pub fn is_unit(&self) -> bool {
        self.val == ExtInt::Finite(0)
    }
}

impl std::ops::Mul for &PAdicRational {
    type Output = PAdicRational;
    fn mul(self, rhs: &PAdicRational) -> PAdicRational {
        assert_eq!(self.p, rhs.p, "mixed primes");
        PAdicRational {
            value: &self.value * &rhs.value,
            p: self.p,
            val: self.val + rhs.val,
        }
    }
}

impl std::ops::Add for &PAdicRational {
    type Output = PAdicRational;
    fn add(self, rhs: &PAdicRational) -> PAdicRational {
        assert_eq!(self.p, rhs.p, "mixed primes");
        PAdicRational::new(&self.value + &rhs.value, self.p)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn q(n: i64, d: i64) -> BigRational {
        BigRational::new(n.into(), d.into())
    }

    fn p(n: u64) -> Prime {
        Prime::new(n).unwrap()
    }

    #[test]
    fn examples() {
        assert_eq!(valuation(&q(18, 1), p(3)), ExtInt::Finite(2));
        assert_eq!(valuation(&q(0, 1), p(5)), ExtInt::Infinity);
        assert_eq!(valuation(&q(5, 3), p(3)), ExtInt::Finite(-1));
        assert_eq!(abs_p(&q(5, 3), p(3)), q(3, 1));
        assert_eq!(abs_p(&q(50, 7), p(5)), q(1, 25));
    }

    #[test]
    fn cached_valuation_tracks_products() {
        let a = PAdicRational::new(q(12, 5), p(2));
        let b = PAdicRational::new(q(3, 8), p(2));
        let c = &a * &b;
        assert_eq!(c.valuation(), ExtInt::Finite(-1));
        assert_eq!(c.valuation(), valuation(c.value(), p(2)));
    }

    #[test]
    fn ext_int_order() {
        assert!(ExtInt::Finite(1_000_000) < ExtInt::Infinity);
        assert!(ExtInt::Finite(-3) < ExtInt::Finite(2));
    }

    fn rat() -> impl Strategy<Value = BigRational> {
        (-5000i64..5000, 1i64..5000).prop_map(|(n, d)| q(n, d))
    }

    proptest! {
        #[test]
        fn additive(a in rat(), b in rat(), pi in 0usize..4) {
            let pr = p([2, 3, 5, 7][pi]);
            prop_assert_eq!(valuation(&(&a * &b), pr), valuation(&a, pr) + valuation(&b, pr));
        }

        #[test]
        fn ultrametric(a in rat(), b in rat(), pi in 0usize..4) {
            let pr = p([2, 3, 5, 7][pi]);
            let (x, y) = (abs_p(&a, pr), abs_p(&b, pr));
            let s = abs_p(&(&a + &b), pr);
            let m = if x > y { x.clone() } else { y.clone() };
            prop_assert!(s <= m);
            if x != y {
                prop_assert_eq!(s, m);
            }
        }
    }
}
