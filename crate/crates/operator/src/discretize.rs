use crate::{OperatorError, Provenance, TruncatedOperator};
use num_bigint::BigInt;
use num_complex::Complex64;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use padic_core::{valuation, valuation_int, Prime, UnitCharacter};

/// `sum c_{ij} x^i y^j` with rational coefficients.
#[derive(Debug, Clone, PartialEq)]
pub struct BivariatePoly {
    pub terms: Vec<(u32, u32, BigRational)>,
}

impl BivariatePoly {
    /// `x^{d-l} y^l Q(x/y)`.
    pub fn homogeneous(d: u32, l: u32, q: &[BigRational]) -> Self {
        let terms = q
            .iter()
            .enumerate()
            .filter(|(_, c)| !c.is_zero())
            .map(|(j, c)| (d - l + j as u32, l - j as u32, c.clone()))
            .collect();
        BivariatePoly { terms }
    }

    pub fn is_homogeneous(&self) -> bool {
        let mut deg = self.terms.iter().map(|(i, j, _)| i + j);
        match deg.next() {
            None => true,
            Some(d) => deg.all(|e| e == d),
        }
    }

    /// Integer coefficients and the valuation of the common denominator.
    fn cleared(&self, p: Prime) -> (Vec<(u32, u32, BigInt)>, i64) {
        let den = self
            .terms
            .iter()
            .fold(BigInt::one(), |acc, (_, _, c)| acc.lcm(c.denom()));
        let ints = self
            .terms
            .iter()
            .map(|(i, j, c)| (*i, *j, (c * BigRational::from_integer(den.clone())).to_integer()))
            .collect();
        let v = valuation(&BigRational::from_integer(den), p).finite().unwrap_or(0);
        (ints, v)
    }
}

struct Valuator {
    p: Prime,
    small: Option<Vec<(u32, u32, i128)>>,
    big: Vec<(u32, u32, BigInt)>,
    shift: i64,
}

impl Valuator {
    fn new(poly: &BivariatePoly, p: Prime) -> Self {
        let (big, shift) = poly.cleared(p);
        let small = big.iter().map(|(i, j, c)| c.to_i128().map(|c| (*i, *j, c))).collect();
        Valuator { p, small, big, shift }
    }

    /// `v_p(P(a, b))`, `None` when the value is zero.
    fn val(&self, a: u64, b: u64) -> Option<i64> {
        if let Some(small) = &self.small {
            let mut acc: Option<i128> = Some(0);
            for &(i, j, c) in small {
                acc = acc.and_then(|s| {
                    let t = (a as i128).checked_pow(i)?.checked_mul((b as i128).checked_pow(j)?)?.checked_mul(c)?;
                    s.checked_add(t)
                });
            }
            if let Some(v) = acc {
                return valuation_int(&BigInt::from(v), self.p).map(|e| e as i64 - self.shift);
            }
        }
        let (ab, bb) = (BigInt::from(a), BigInt::from(b));
        let v: BigInt = self.big.iter().map(|(i, j, c)| c * ab.pow(*i) * bb.pow(*j)).sum();
        valuation_int(&v.abs(), self.p).map(|e| e as i64 - self.shift)
    }
}

/// The functions `x -> chi(x / p^n)` on the orbits `p^n (Z/p^K)^x`, obtained
/// by averaging point masses over unit translates with weights `conj(chi)`.
pub fn isotypic_basis(p: Prime, k: u32, chi: &UnitCharacter) -> Result<Vec<Vec<Complex64>>, OperatorError> {
    let pk = p.pow(k).ok_or(padic_core::PadicError::LevelTooLarge(k))?;
    let units: Vec<u64> = (1..pk).filter(|u| u % p.get() != 0).collect();
    let g = units.len() as f64;
    let mut basis = Vec::new();
    for n in 0..=k {
        let pn = p.pow(n).unwrap() % pk;
        let mut v = vec![Complex64::new(0.0, 0.0); pk as usize];
        for &u in &units {
            // (P f)(x) = |G|^{-1} sum_u conj(chi(u)) f(u x), with f = delta at p^n
            if n == k {
                v[0] += chi.value(u as i128)?.conj() / g;
                continue;
            }
            let uinv = (1..pk).find(|w| (w * u) % pk == 1).unwrap();
            let x = (uinv * pn) % pk;
            v[x as usize] += chi.value(u as i128)?.conj() / g;
        }
        let norm = v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        if norm > 1e-12 {
            basis.push(v.into_iter().map(|z| z / norm).collect());
        }
    }
    Ok(basis)
}

/// Step-function matrix of the capped kernel
/// `(1 - p^{-1})^{-1} max(|P(a, b)|, p^{-cap})^s` at level `K`, or its
/// block on the `chi`-isotypic subspace.
pub fn discretize_kernel(
    poly: &BivariatePoly,
    p: Prime,
    s: Complex64,
    k: u32,
    cap: u32,
    chi: Option<&UnitCharacter>,
) -> Result<TruncatedOperator, OperatorError> {
    if k == 0 {
        return Err(OperatorError::InvalidSpec("K must be >= 1".into()));
    }
    if chi.is_some() && !poly.is_homogeneous() {
        return Err(OperatorError::InvalidSpec("character blocks need a homogeneous kernel".into()));
    }
    let pk = p.pow(k).ok_or(padic_core::PadicError::LevelTooLarge(k))? as usize;
    let lnp = p.as_f64().ln();
    let w = 1.0 / (pk as f64 * (1.0 - 1.0 / p.as_f64()));
    let vals = Valuator::new(poly, p);
    let mut m = vec![Complex64::new(0.0, 0.0); pk * pk];
    for b in 0..pk {
        for a in 0..pk {
            let v = vals.val(a as u64, b as u64).map_or(cap as i64, |v| v.min(cap as i64));
            m[b * pk + a] = w * (-s * (v as f64 * lnp)).exp();
        }
    }
    let mut prov = Provenance::new("discretized")
        .with("p", p.get())
        .with("K", k)
        .with("cap", cap)
        .with("s", format!("{},{}", s.re, s.im));
    let Some(chi) = chi else {
        return Ok(TruncatedOperator {
            n: pk,
            entries: m,
            provenance: prov,
            tail_estimate: f64::NAN,
            underflow_rows: 0,
            lo: None,
        });
    };
    prov = prov.with("chi", format!("{}:{}", chi.conductor(), chi.descriptor().index));
    let basis = isotypic_basis(p, k, chi)?;
    let mv: Vec<Vec<Complex64>> = basis
        .iter()
        .map(|e| (0..pk).map(|b| (0..pk).map(|a| m[b * pk + a] * e[a]).sum()).collect())
        .collect();
    let dim = basis.len();
    let mut t = TruncatedOperator::from_fn(dim, prov, |i, j| {
        basis[i].iter().zip(&mv[j]).map(|(x, y)| x.conj() * y).sum()
    });
    t.tail_estimate = f64::NAN;
    Ok(t)
}
