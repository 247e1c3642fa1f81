use num_bigint::BigInt;
use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::{One, Pow};
use operator::*;
use padic_core::{rational_poly, Prime, UnitCharacter};
use proptest::prelude::*;

fn rat(a: i64, b: i64) -> BigRational {
    BigRational::new(BigInt::from(a), BigInt::from(b))
}

#[test]
fn min_power_determinant_recursion() {
    for qq in [rat(1, 2), rat(1, 3), rat(2, 5)] {
        for n in 0..=12u32 {
            let d = det_exact(min_power_matrix(&qq, n as usize + 1));
            let want = Pow::pow(&qq.recip(), n * (n + 1) / 2) * Pow::pow(&(BigRational::one() - &qq), n);
            assert_eq!(d, want, "q={qq} N={n}");
        }
    }
}

fn spec(p: u64, d: u32, q: &[i64], s: f64) -> KernelSpec {
    let pr = Prime::new(p).unwrap();
    KernelSpec::new(d as f64, d, rational_poly(q), UnitCharacter::trivial(pr).unwrap(), Complex64::new(s, 0.0)).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    // Q = 1 + x^2 has no roots mod p = 3 mod 4
    #[test]
    fn noroots_entries(pi in 0usize..3, s in 0.2f64..3.0) {
        let p = [3u64, 7, 11][pi];
        let t = build_sequence_matrix(&spec(p, 2, &[1, 0, 1], s), 10).unwrap();
        for m in 0..10 {
            for n in 0..10 {
                let e = -((m + n) as f64) / 2.0 - 2.0 * s * m.min(n) as f64;
                let want = (p as f64).powf(e);
                prop_assert!((t.get(m, n) - want).norm() <= 1e-12 * want);
            }
        }
    }

    // symmetric kernels give symmetric matrices
    #[test]
    fn symmetric_kernel_symmetric_matrix(pi in 0usize..3, s in 0.3f64..2.5, c in -3i64..4) {
        let p = [3u64, 5, 7][pi];
        let built = build_sequence_matrix(&spec(p, 2, &[1, c, 1], s), 16);
        // repeated roots mod p are outside the supported domain
        prop_assume!(!matches!(built, Err(OperatorError::Zeta(zeta::ZetaError::MultipleRoot(_)))));
        let t = built.unwrap();
        prop_assert!(t.max_asymmetry() <= 1e-11 * t.frobenius().max(1.0));
    }

    #[test]
    fn nonhomog_entries(s in 0.1f64..2.0, d in 2u32..5) {
        let t = build_nonhomog_matrix(Prime::new(3).unwrap(), s, d, 8).unwrap();
        for m in 0..8 {
            for n in 0..8 {
                let e = -((m + n) as f64) / 2.0 - 2.0 * s * (m as f64).min((d as usize * n) as f64);
                prop_assert!((t.get(m, n).re - 3f64.powf(e)).abs() <= 1e-13 * 3f64.powf(e));
            }
        }
    }
}
