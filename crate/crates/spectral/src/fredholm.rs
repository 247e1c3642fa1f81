use crate::Spectrum;
use num_complex::Complex64;

/// `prod (1 - u lambda_i)` over the computed eigenvalues.
pub fn fredholm_det_truncated(s: &Spectrum, u: Complex64) -> Complex64 {
    s.eigenvalues.iter().map(|&l| 1.0 - u * l).product()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::{eigenvalues, Precision};
    use operator::{Provenance, TruncatedOperator};

    #[test]
    fn zero_at_reciprocal_eigenvalue() {
        let t = TruncatedOperator::from_fn(3, Provenance::new("t"), |i, j| {
            Complex64::new(1.0 / (1 + i + j) as f64, 0.0)
        });
        let s = eigenvalues(&t).unwrap();
        assert_eq!(s.precision, Precision::DoubleDouble);
        assert_eq!(fredholm_det_truncated(&s, Complex64::new(0.0, 0.0)), Complex64::new(1.0, 0.0));
        assert!(fredholm_det_truncated(&s, 1.0 / s.eigenvalues[0]).norm() < 1e-14);
    }
}
