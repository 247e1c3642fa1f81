use num_complex::Complex64;
use operator::{build_br_matrix, RationalR};
use qspecial::QBase;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use spectral::*;

type C = Complex64;

fn rc(rng: &mut ChaCha8Rng, lo: f64, hi: f64) -> C {
    C::from_polar(rng.gen_range(lo..hi), rng.gen_range(0.0..std::f64::consts::TAU))
}

/// `beta prod(1 - a z) / prod(1 - b z)` on the unit disk, the first `k`
/// poles marked (inside `|z| < 1/|q|`), the rest outside the disk.
fn instance(seed: u64, l: usize, r: usize, k: usize) -> RationalR {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let a = (0..l).map(|_| rc(&mut rng, 0.3, 1.5)).collect();
    let mut b: Vec<C> = (0..k).map(|_| rc(&mut rng, 1.1, 2.5)).collect();
    b.extend((0..r - k).map(|_| rc(&mut rng, 0.2, 0.8)));
    let marked = (0..r).map(|i| i < k).collect();
    RationalR::from_product(C::new(0.7, 0.0), 0, a, b, marked, 1.0).unwrap()
}

fn q03() -> QBase {
    QBase::real(0.3).unwrap()
}

#[test]
fn normalized_at_origin() {
    for (seed, (l, r, k)) in [(1, 1, 1), (2, 2, 2), (2, 3, 2), (3, 3, 2), (1, 2, 1)].into_iter().enumerate() {
        let h = wronski_char_fn(&instance(seed as u64, l, r, k), q03()).unwrap();
        assert!(h.normalization_error <= 1e-12, "{}", h.construction);
    }
}

#[test]
fn reciprocal_eigenvalues_are_zeros() {
    for (seed, (l, r, k)) in [(2, 3, 2), (2, 2, 2), (1, 2, 1), (3, 2, 2), (2, 3, 1)].into_iter().enumerate() {
        let rr = instance(10 + seed as u64, l, r, k);
        let h = wronski_char_fn(&rr, q03()).unwrap();
        let spec = eigenvalues(&build_br_matrix(&rr, q03(), 80).unwrap()).unwrap();
        for &lam in spec.top(4) {
            let v = h.eval(1.0 / lam);
            assert!(v.norm() <= 1e-7, "shape {:?}: h(1/{lam}) = {v}", (l, r, k));
            // and not small merely because h is flat there
            assert!(h.eval(1.0 / (lam * 1.01)).norm() > 1e3 * v.norm());
        }
    }
}

#[test]
fn all_poles_marked_is_quasi_nilpotent() {
    let rr = instance(3, 1, 2, 2);
    let h = wronski_char_fn(&rr, q03()).unwrap();
    assert_eq!(h.eval(C::new(3.0, -2.0)), C::new(1.0, 0.0));
    let spec = eigenvalues(&build_br_matrix(&rr, q03(), 40).unwrap()).unwrap();
    assert!(spec.eigenvalues[0].norm() < 1e-10);
}

#[test]
fn m_matrix_determinant_is_proportional() {
    let mut rng = ChaCha8Rng::seed_from_u64(77);
    for (seed, (l, r, k)) in [(2, 3, 2), (1, 3, 2), (1, 2, 1), (2, 2, 2)].into_iter().enumerate() {
        let rr = instance(20 + seed as u64, l, r, k);
        let h = wronski_char_fn(&rr, q03()).unwrap();
        let m = m_matrix_char_fn(&rr, q03()).unwrap();
        let mut ratios = Vec::new();
        for _ in 0..10 {
            let u = rc(&mut rng, 0.1, 6.0);
            ratios.push(m.eval(u) / h.eval(u));
        }
        for x in &ratios {
            assert!((x - ratios[0]).norm() <= 1e-9 * ratios[0].norm(), "{:?}: {ratios:?}", (l, r, k));
        }
    }
}

#[test]
fn m_matrix_at_origin_is_identity_det() {
    let rr = instance(5, 2, 3, 2);
    let d = PoleData::from_rational(&rr).unwrap();
    let m = m_matrix(&d, q03(), C::new(0.0, 0.0)).unwrap();
    assert!((small_det(m) - 1.0).norm() < 1e-15);
}

#[test]
fn triangular_case_geometric_zeros() {
    // l = r = k: eigenvalues beta prod(a) / prod(b) q^n
    let rr = instance(8, 2, 2, 2);
    let pf = rr.product.clone().unwrap();
    let lead = pf.beta * pf.zeros.iter().product::<C>() / pf.poles.iter().product::<C>();
    let h = wronski_char_fn(&rr, q03()).unwrap();
    let radius = 30.0 / lead.norm();
    let z = find_zeros(&h.handle, radius, 1e-13).unwrap();
    assert!(z.certified);
    let want: Vec<C> = (0..6).map(|n| 1.0 / (lead * 0.3f64.powi(n))).filter(|w| w.norm() < z.radius).collect();
    assert_eq!(z.count, want.len());
    for w in want {
        assert!(z.zeros.iter().any(|y| (y.value - w).norm() <= 1e-9 * w.norm()), "{w}");
    }
}

#[test]
fn zero_search_matches_truncation() {
    let rr = instance(31, 2, 3, 2);
    let h = wronski_char_fn(&rr, q03()).unwrap();
    let spec = eigenvalues(&build_br_matrix(&rr, q03(), 80).unwrap()).unwrap();
    let radius = 1.5 / spec.eigenvalues[4].norm();
    let z = find_zeros(&h.handle, radius, 1e-13).unwrap();
    assert!(z.certified);
    let inside = spec.eigenvalues.iter().filter(|l| l.norm() > 1.0 / z.radius).count();
    assert_eq!(inside, z.count);
    let rep = match_spectra(&spec.eigenvalues, &z.expanded(), 4, 1e-8);
    assert!(rep.pass, "{rep:?}");
}

#[test]
fn resonant_poles_are_rejected() {
    let b1 = C::new(1.5, 0.0);
    let rr = RationalR::from_product(C::new(1.0, 0.0), 0, vec![C::new(0.5, 0.0); 2], vec![b1, b1 * 0.3], vec![true, true], 1.0);
    let rr = rr.unwrap();
    assert!(matches!(wronski_char_fn(&rr, q03()), Err(SpectralError::Resonance(_))));
}
