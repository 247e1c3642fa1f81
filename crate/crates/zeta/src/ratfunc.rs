use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};
use std::fmt;

/// Dense polynomial over `Q` in `t`, lowest degree first, no trailing zeros.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct QPoly(Vec<BigRational>);

impl QPoly {
    pub fn new(mut c: Vec<BigRational>) -> Self {
        while c.last().is_some_and(|x| x.is_zero()) {
            c.pop();
        }
        QPoly(c)
    }

    pub fn zero() -> Self {
        QPoly(Vec::new())
    }

    pub fn constant(c: BigRational) -> Self {
        QPoly::new(vec![c])
    }

    pub fn monomial(c: BigRational, k: usize) -> Self {
        let mut v = vec![BigRational::zero(); k + 1];
        v[k] = c;
        QPoly::new(v)
    }

    pub fn coeffs(&self) -> &[BigRational] {
        &self.0
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_empty()
    }

    /// Degree, `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.0.len().checked_sub(1)
    }

    pub fn lead(&self) -> Option<&BigRational> {
        self.0.last()
    }

    pub fn add(&self, o: &QPoly) -> QPoly {
        let n = self.0.len().max(o.0.len());
        let z = BigRational::zero();
        QPoly::new(
            (0..n)
                .map(|i| self.0.get(i).unwrap_or(&z) + o.0.get(i).unwrap_or(&z))
                .collect(),
        )
    }

    pub fn neg(&self) -> QPoly {
        QPoly(self.0.iter().map(|c| -c).collect())
    }

    pub fn sub(&self, o: &QPoly) -> QPoly {
        self.add(&o.neg())
    }

    pub fn mul(&self, o: &QPoly) -> QPoly {
        if self.is_zero() || o.is_zero() {
            return QPoly::zero();
        }
        let mut v = vec![BigRational::zero(); self.0.len() + o.0.len() - 1];
        for (i, a) in self.0.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in o.0.iter().enumerate() {
                v[i + j] += a * b;
            }
        }
        QPoly::new(v)
    }

    pub fn scale(&self, c: &BigRational) -> QPoly {
        QPoly::new(self.0.iter().map(|x| x * c).collect())
    }

    pub fn div_rem(&self, d: &QPoly) -> (QPoly, QPoly) {
        let dd = d.degree().expect("division by zero polynomial");
        let lead = d.lead().unwrap().clone();
        let mut r = self.0.clone();
        if r.len() <= dd {
            return (QPoly::zero(), self.clone());
        }
        let mut quo = vec![BigRational::zero(); r.len() - dd];
        for k in (0..quo.len()).rev() {
            let c = &r[k + dd] / &lead;
            if !c.is_zero() {
                for (j, dj) in d.0.iter().enumerate() {
                    r[k + j] -= &c * dj;
                }
            }
            quo[k] = c;
        }
        r.truncate(dd);
        (QPoly::new(quo), QPoly::new(r))
    }

    pub fn gcd(&self, o: &QPoly) -> QPoly {
        let (mut a, mut b) = (self.clone(), o.clone());
        while !b.is_zero() {
            let (_, r) = a.div_rem(&b);
            a = b;
            b = r;
        }
        match a.lead().cloned() {
            Some(l) => a.scale(&l.recip()),
            None => a,
        }
    }

    pub fn eval(&self, t: &BigRational) -> BigRational {
        let mut acc = BigRational::zero();
        for c in self.0.iter().rev() {
            acc = acc * t + c;
        }
        acc
    }

    pub fn eval_c(&self, t: Complex64) -> Complex64 {
        let mut acc = Complex64::zero();
        for c in self.0.iter().rev() {
            acc = acc * t + rat_to_f64(c);
        }
        acc
    }
}

pub(crate) fn rat_to_f64(c: &BigRational) -> f64 {
    c.to_f64().unwrap_or(f64::NAN)
}

/// Reduced quotient of polynomials in `t = p^{-s}`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RatFunc {
    num: QPoly,
    den: QPoly,
}

impl RatFunc {
    /// Reduces to lowest terms with a monic denominator.
    pub fn new(num: QPoly, den: QPoly) -> Self {
        assert!(!den.is_zero(), "zero denominator");
        if num.is_zero() {
            return RatFunc {
                num,
                den: QPoly::constant(BigRational::one()),
            };
        }
        let g = num.gcd(&den);
        let (n, _) = num.div_rem(&g);
        let (d, _) = den.div_rem(&g);
        let l = d.lead().unwrap().recip();
        RatFunc {
            num: n.scale(&l),
            den: d.scale(&l),
        }
    }

    pub fn zero() -> Self {
        Self::constant(BigRational::zero())
    }

    pub fn one() -> Self {
        Self::constant(BigRational::one())
    }

    pub fn constant(c: BigRational) -> Self {
        RatFunc::new(QPoly::constant(c), QPoly::constant(BigRational::one()))
    }

    /// `c t^k` for any integer `k`.
    pub fn monomial(c: BigRational, k: i64) -> Self {
        if k >= 0 {
            RatFunc::new(QPoly::monomial(c, k as usize), QPoly::constant(BigRational::one()))
        } else {
            RatFunc::new(QPoly::constant(c), QPoly::monomial(BigRational::one(), (-k) as usize))
        }
    }

    pub fn numerator(&self) -> &QPoly {
        &self.num
    }

    pub fn denominator(&self) -> &QPoly {
        &self.den
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    pub fn add(&self, o: &RatFunc) -> RatFunc {
        if self.den == o.den {
            return RatFunc::new(self.num.add(&o.num), self.den.clone());
        }
        RatFunc::new(
            self.num.mul(&o.den).add(&o.num.mul(&self.den)),
            self.den.mul(&o.den),
        )
    }

    pub fn sub(&self, o: &RatFunc) -> RatFunc {
        self.add(&o.neg())
    }

    pub fn neg(&self) -> RatFunc {
        RatFunc {
            num: self.num.neg(),
            den: self.den.clone(),
        }
    }

    pub fn mul(&self, o: &RatFunc) -> RatFunc {
        RatFunc::new(self.num.mul(&o.num), self.den.mul(&o.den))
    }

    pub fn div(&self, o: &RatFunc) -> RatFunc {
        assert!(!o.is_zero(), "division by zero rational function");
        RatFunc::new(self.num.mul(&o.den), self.den.mul(&o.num))
    }

    /// Value at a rational `t`; `None` at a pole.
    pub fn eval(&self, t: &BigRational) -> Option<BigRational> {
        let d = self.den.eval(t);
        if d.is_zero() {
            None
        } else {
            Some(self.num.eval(t) / d)
        }
    }

    pub fn eval_c(&self, t: Complex64) -> Complex64 {
        self.num.eval_c(t) / self.den.eval_c(t)
    }

    /// Value at `t = p^{-s}`.
    pub fn eval_s(&self, p: u64, s: Complex64) -> Complex64 {
        self.eval_c((-s * (p as f64).ln()).exp())
    }

    pub fn to_json_layout(&self) -> RatFuncLayout {
        RatFuncLayout {
            variable: "t".into(),
            numerator: self.num.0.iter().map(|c| c.to_string()).collect(),
            denominator: self.den.0.iter().map(|c| c.to_string()).collect(),
        }
    }

    pub fn from_json_layout(l: &RatFuncLayout) -> Result<Self, String> {
        let parse = |v: &[String]| -> Result<QPoly, String> {
            v.iter()
                .map(|s| s.parse::<BigRational>().map_err(|e| format!("{s}: {e}")))
                .collect::<Result<Vec<_>, _>>()
                .map(QPoly::new)
        };
        let den = parse(&l.denominator)?;
        if den.is_zero() {
            return Err("zero denominator".into());
        }
        Ok(RatFunc::new(parse(&l.numerator)?, den))
    }
}

/// JSON form: coefficient arrays, lowest degree first, as decimal fractions.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RatFuncLayout {
    pub variable: String,
    pub numerator: Vec<String>,
    pub denominator: Vec<String>,
}

impl Serialize for RatFunc {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        self.to_json_layout().serialize(s)
    }
}

impl<'de> Deserialize<'de> for RatFunc {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let l = RatFuncLayout::deserialize(d)?;
        RatFunc::from_json_layout(&l).map_err(serde::de::Error::custom)
    }
}

fn fmt_poly(p: &QPoly, f: &mut fmt::Formatter<'_>) -> fmt::Result {
    if p.is_zero() {
        return write!(f, "0");
    }
    let mut first = true;
    for (k, c) in p.0.iter().enumerate() {
        if c.is_zero() {
            continue;
        }
        let neg = c.is_negative();
        let a = c.abs();
        if first {
            if neg {
                write!(f, "-")?;
            }
        } else {
            write!(f, " {} ", if neg { '-' } else { '+' })?;
        }
        first = false;
        let unit = a.is_one();
        match (k, unit) {
            (0, _) => write!(f, "{a}")?,
            (_, true) => {}
            (_, false) => write!(f, "{a}*")?,
        }
        match k {
            0 => {}
            1 => write!(f, "t")?,
            _ => write!(f, "t^{k}")?,
        }
    }
    Ok(())
}

impl fmt::Display for RatFunc {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.den.degree() == Some(0) && self.den.0[0].is_one() {
            return fmt_poly(&self.num, f);
        }
        write!(f, "(")?;
        fmt_poly(&self.num, f)?;
        write!(f, ")/(")?;
        fmt_poly(&self.den, f)?;
        write!(f, ")")
    }
}

#[cfg(test)]
pub(crate) fn rat(n: i64, d: i64) -> BigRational {
    BigRational::new(n.into(), d.into())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn poly(c: &[(i64, i64)]) -> QPoly {
        QPoly::new(c.iter().map(|&(n, d)| rat(n, d)).collect())
    }

    #[test]
    fn reduces_common_factors() {
        // (1 - t^2) / (1 - t) = 1 + t
        let f = RatFunc::new(poly(&[(1, 1), (0, 1), (-1, 1)]), poly(&[(1, 1), (-1, 1)]));
        assert_eq!(f, RatFunc::new(poly(&[(1, 1), (1, 1)]), poly(&[(1, 1)])));
        assert_eq!(f.to_string(), "1 + t");
    }

    #[test]
    fn negative_monomial() {
        let f = RatFunc::monomial(rat(3, 1), -2);
        assert_eq!(f.eval(&rat(1, 2)), Some(rat(12, 1)));
        assert_eq!(f.mul(&RatFunc::monomial(rat(1, 3), 2)), RatFunc::one());
    }

    #[test]
    fn field_ops() {
        let a = RatFunc::new(poly(&[(1, 1)]), poly(&[(1, 1), (-1, 3)]));
        let b = RatFunc::new(poly(&[(0, 1), (2, 1)]), poly(&[(1, 1), (1, 1)]));
        let t = rat(2, 7);
        let v = a.add(&b).mul(&a).sub(&b).div(&b);
        let (av, bv) = (a.eval(&t).unwrap(), b.eval(&t).unwrap());
        assert_eq!(v.eval(&t).unwrap(), ((&av + &bv) * &av - &bv) / &bv);
    }

    #[test]
    fn json_roundtrip() {
        let a = RatFunc::new(poly(&[(1, 2), (-5, 3)]), poly(&[(1, 1), (-1, 3)]));
        let js = serde_json::to_string(&a).unwrap();
        assert!(js.contains("\"-3/2\""), "{js}");
        let b: RatFunc = serde_json::from_str(&js).unwrap();
        assert_eq!(a, b);
    }
}
