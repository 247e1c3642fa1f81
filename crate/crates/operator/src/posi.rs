use num_rational::BigRational;
use num_traits::{One, Pow, Zero};

/// `b_{mn} = qq^{-min(m, n)}` for `0 <= m, n <= size - 1`.
pub fn min_power_matrix(qq: &BigRational, size: usize) -> Vec<Vec<BigRational>> {
    let inv = qq.recip();
    (0..size)
        .map(|m| (0..size).map(|n| Pow::pow(&inv, m.min(n) as u32)).collect())
        .collect()
}

/// Exact determinant by Gaussian elimination over `Q`.
pub fn det_exact(mut a: Vec<Vec<BigRational>>) -> BigRational {
    let n = a.len();
    let mut det = BigRational::one();
    for c in 0..n {
        let Some(piv) = (c..n).find(|&r| !a[r][c].is_zero()) else {
            return BigRational::zero();
        };
        if piv != c {
            a.swap(piv, c);
            det = -det;
        }
        let pv = a[c][c].clone();
        det *= &pv;
        for r in c + 1..n {
            if a[r][c].is_zero() {
                continue;
            }
            let f = &a[r][c] / &pv;
            for k in c..n {
                let t = &f * &a[c][k];
                a[r][k] -= t;
            }
        }
    }
    det
}
