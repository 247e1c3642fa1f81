use crate::{OperatorError, Provenance, RationalR, TruncatedOperator};
use num_complex::Complex64;
use qspecial::QBase;

fn entry(r: &RationalR, q: Complex64, k: usize, n: usize) -> Complex64 {
    let rho = r.disk_radius;
    let i = k as i64 - n as i64;
    let mut v = Complex64::new(0.0, 0.0);
    if let Some(&c) = r.laurent.get(&i) {
        v += c * rho.powi(i as i32) * q.powi(n as i32);
    }
    for t in &r.poles {
        let rb = t.b * rho;
        if t.marked && k < n {
            // q^n (rho b)^{k-n} = q^k (q / (rho b))^{n-k}
            v -= t.coeff * q.powi(k as i32) * (q / rb).powi((n - k) as i32);
        } else if !t.marked && k >= n {
            v += t.coeff * q.powi(n as i32) * rb.powi(i as i32);
        }
    }
    v
}

/// Matrix of `F -> R(z) F(qz) - sum pr(R(z) F(qz), z_j)` on the basis
/// `(z / radius)^n`: column `n` is the image of the `n`-th monomial.
pub fn build_br_matrix(r: &RationalR, q: QBase, n: usize) -> Result<TruncatedOperator, OperatorError> {
    let qv = q.get();
    r.validate(qv)?;
    let prov = Provenance::new("B_R")
        .with("q", format!("{},{}", qv.re, qv.im))
        .with("marked", r.marked_count())
        .with("radius", r.disk_radius)
        .with("N", n);
    let mut t = TruncatedOperator::from_fn(n, prov, |i, j| entry(r, qv, i, j));
    let mut tail = 0.0;
    for i in 0..2 * n {
        for j in 0..2 * n {
            if i >= n || j >= n {
                tail += entry(r, qv, i, j).norm_sqr();
            }
        }
    }
    t.tail_estimate = tail.sqrt();
    Ok(t)
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::collections::BTreeMap;

    fn c(x: f64) -> Complex64 {
        Complex64::new(x, 0.0)
    }

    #[test]
    fn first_order_pole_at_origin() {
        // R = z^{-1}(1 - az)(1 - bz): B e_0 = -(a+b) e_0 + ab e_1, scaled by q^n
        let (a, b, q) = (c(0.7), c(-2.0), 0.2);
        let r = RationalR::from_product(c(1.0), 1, vec![a, b], vec![], vec![], 1.0).unwrap();
        let t = build_br_matrix(&r, QBase::real(q).unwrap(), 6).unwrap();
        for n in 0..6 {
            let qn = q.powi(n as i32);
            assert!((t.get(n, n) + (a + b) * qn).norm() < 1e-15);
            if n > 0 {
                assert!((t.get(n - 1, n) - qn).norm() < 1e-15);
            }
            if n < 5 {
                assert!((t.get(n + 1, n) - a * b * qn).norm() < 1e-15);
            }
        }
    }

    #[test]
    fn all_marked_equal_degree_is_triangular() {
        let r = RationalR::from_product(
            c(0.8),
            0,
            vec![c(0.5), Complex64::new(0.2, 0.9)],
            vec![c(1.3), Complex64::new(-0.4, 1.6)],
            vec![true, true],
            1.0,
        )
        .unwrap();
        let t = build_br_matrix(&r, QBase::real(0.3).unwrap(), 12).unwrap();
        let pf = r.product.unwrap();
        let ratio = pf.beta * pf.zeros.iter().product::<Complex64>() / pf.poles.iter().product::<Complex64>();
        for i in 0..12 {
            for j in 0..i {
                assert!(t.get(i, j).norm() < 1e-14);
            }
            assert!((t.get(i, i) - ratio * 0.3f64.powi(i as i32)).norm() < 1e-13);
        }
    }

    #[test]
    fn radius_is_a_similarity() {
        let mut lau = BTreeMap::new();
        lau.insert(0, c(0.3));
        lau.insert(-1, c(0.2));
        let poles = vec![crate::PoleTerm { b: c(0.2), coeff: c(1.1), marked: false }];
        let r1 = RationalR::from_partial_fractions(lau.clone(), poles.clone(), 1.0);
        let r2 = RationalR::from_partial_fractions(lau, poles, 0.5);
        let q = QBase::real(0.25).unwrap();
        let a = build_br_matrix(&r1, q, 8).unwrap();
        let b = build_br_matrix(&r2, q, 8).unwrap();
        for i in 0..8 {
            for j in 0..8 {
                let scale = 0.5f64.powi(i as i32 - j as i32);
                assert!((a.get(i, j) * scale - b.get(i, j)).norm() < 1e-15);
            }
        }
    }
}
