use crate::dd::Dd;
use crate::{OperatorError, Provenance, TruncatedOperator};
use num_complex::Complex64;
use padic_core::Prime;

/// `a_{mn} = p^{-(m+n)/2 - 2s min(m, dn)}`, the kernel `max(|x|^d, |y|)^{2s}`.
pub fn build_nonhomog_matrix(p: Prime, s: f64, d: u32, n: usize) -> Result<TruncatedOperator, OperatorError> {
    if !(s >= 0.0) {
        return Err(OperatorError::Domain(format!("s = {s} must be >= 0")));
    }
    if d < 2 {
        return Err(OperatorError::InvalidSpec(format!("d = {d} must be > 1")));
    }
    let lnp = p.as_f64().ln();
    let prov = Provenance::new("nonhomogeneous")
        .with("p", p.get())
        .with("s", s)
        .with("d", d)
        .with("N", n);
    let f = |i: usize, j: usize| {
        let e = -((i + j) as f64) / 2.0 - 2.0 * s * i.min(d as usize * j) as f64;
        Complex64::new((e * lnp).exp(), 0.0)
    };
    let mut t = TruncatedOperator::from_fn(n, prov, f);
    let mut tail = 0.0;
    for i in 0..2 * n {
        for j in 0..2 * n {
            if i >= n || j >= n {
                tail += f(i, j).norm_sqr();
            }
        }
    }
    t.tail_estimate = tail.sqrt();
    // for integral 2s every entry is p^{-k/2}; store it to double-double
    let twice = 2.0 * s;
    if twice.fract() == 0.0 && twice < 1e6 {
        let root = (Dd::from_f64(1.0) / Dd::from_f64(p.as_f64())).sqrt();
        let mut lo = Vec::with_capacity(n * n);
        for i in 0..n {
            for j in 0..n {
                let k = i + j + 2 * twice as usize * i.min(d as usize * j);
                let v = powu(root, k);
                t.entries[i * n + j] = Complex64::new(v.hi, 0.0);
                lo.push(Complex64::new(v.lo, 0.0));
            }
        }
        t.lo = Some(lo);
    }
    Ok(t)
}

fn powu(x: Dd, mut k: usize) -> Dd {
    let (mut acc, mut b) = (Dd::from_f64(1.0), x);
    while k > 0 {
        if k & 1 == 1 {
            acc *= b;
        }
        b = b * b;
        k >>= 1;
    }
    acc
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn corner_entries() {
        let t = build_nonhomog_matrix(Prime::new(3).unwrap(), 1.0, 2, 5).unwrap();
        assert_eq!(t.get(0, 0).re, 1.0);
        for m in 0..5 {
            assert!((t.get(m, 0).re - 3f64.powf(-(m as f64) / 2.0)).abs() < 1e-16);
        }
        assert!((t.get(1, 1).re - 1.0 / 27.0).abs() < 1e-16);
        assert!(build_nonhomog_matrix(Prime::new(3).unwrap(), -0.1, 2, 5).is_err());
        let lo = t.lo.as_ref().unwrap();
        // 3^{-1/2} to double-double: hi + lo squares to 1/3
        let x = Dd { hi: t.get(1, 0).re, lo: lo[5].re };
        let r = x * x * Dd::from_f64(3.0) - Dd::from_f64(1.0);
        assert!(r.to_f64().abs() < 1e-30);
        assert!(build_nonhomog_matrix(Prime::new(3).unwrap(), 0.3, 2, 5).unwrap().lo.is_none());
        assert!(build_nonhomog_matrix(Prime::new(3).unwrap(), 1.0, 1, 5).is_err());
    }
}
