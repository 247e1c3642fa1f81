//! The E-spectrum run over characters of order 2 and 4 and over P_* whose
//! extreme coefficients are units other than 1.

use experiments::{run_chi_nontrivial, ChiParams};

/// `(p, d, Q_*, character)`.
type Case = (u64, u32, &'static [i64], Option<(u32, u64)>);

const CASES: &[Case] = &[
    (5, 2, &[1], None),
    (5, 3, &[1, 1], None),
    (5, 4, &[1, 0, 1], None),
    (5, 3, &[1, 2], None),
    (7, 3, &[1, 3], None),
    (5, 3, &[2, 1], Some((1, 1))),
    (5, 3, &[3, 2], Some((1, 3))),
    (5, 2, &[2], Some((1, 1))),
    (7, 4, &[3, 1, 2], Some((1, 2))),
];

fn params(i: usize, perturb: f64) -> ChiParams {
    let (p, d, q_star, chi) = CASES[i];
    ChiParams { p, d, q_star: q_star.to_vec(), chi, perturb, ..Default::default() }
}

#[test]
fn e_spectrum_with_character_factors() {
    for i in 0..CASES.len() {
        let r = run_chi_nontrivial(&params(i, 1.0)).unwrap();
        assert!(r.pass, "{:?}: {:?}", CASES[i], r.failed_checks());
    }
}

#[test]
fn perturbed_a_is_detected() {
    for i in 0..CASES.len() {
        let r = run_chi_nontrivial(&params(i, 1.01)).unwrap();
        assert!(!r.pass, "{:?}", CASES[i]);
        assert!(r.failed_checks().iter().all(|c| c.name.starts_with("E: top-")), "{:?}", r.failed_checks());
    }
}

#[test]
fn non_unit_extremes_are_rejected() {
    let pp = ChiParams { d: 3, q_star: vec![1, 5], ..Default::default() };
    assert!(run_chi_nontrivial(&pp).is_err());
    let pp = ChiParams { chi: Some((1, 0)), ..Default::default() };
    assert!(run_chi_nontrivial(&pp).is_err());
}
