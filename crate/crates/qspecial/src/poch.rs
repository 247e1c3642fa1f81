use crate::{Approx, QBase, QError, C64};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PochLen {
    Finite(usize),
    Infinite,
}

/// `(a; q)_n = (1 - a)(1 - aq)...(1 - aq^{n-1})`.
pub fn qpoch(a: C64, q: C64, n: usize) -> C64 {
    let mut p = C64::new(1.0, 0.0);
    let mut x = a;
    for _ in 0..n {
        p *= 1.0 - x;
        x *= q;
    }
    p
}

/// `(a; q)_inf` with a multiplicative tail bound.
pub fn qpoch_inf(a: C64, q: QBase) -> Approx {
    let qa = q.abs();
    let qv = q.get();
    let mut p = C64::new(1.0, 0.0);
    let mut x = a;
    let mut n = 0usize;
    loop {
        let tail = x.norm() / (1.0 - qa);
        if tail < 1e-18 || (x.norm() < 0.5 && tail < 1e-17) {
            let rel = 2.0 * tail + 2.0 * (n as f64 + 1.0) * f64::EPSILON;
            return Approx { value: p, err: p.norm() * rel };
        }
        p *= 1.0 - x;
        x *= qv;
        n += 1;
        if n > 100_000 {
            return Approx { value: p, err: f64::INFINITY };
        }
    }
}

pub fn qpochhammer(a: C64, q: QBase, n: PochLen) -> Approx {
    match n {
        PochLen::Finite(n) => {
            let v = qpoch(a, q.get(), n);
            Approx { value: v, err: v.norm() * 2.0 * (n as f64 + 1.0) * f64::EPSILON }
        }
        PochLen::Infinite => qpoch_inf(a, q),
    }
}

/// `theta(u; q) = (q; q)_inf (-u; q)_inf (-q/u; q)_inf`.
pub fn theta(u: C64, q: QBase) -> Result<Approx, QError> {
    if u == C64::new(0.0, 0.0) {
        return Err(QError::ZeroArgument);
    }
    let qv = q.get();
    Ok(qpoch_inf(qv, q) * qpoch_inf(-u, q) * qpoch_inf(-qv / u, q))
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};

    fn c(x: f64) -> C64 {
        C64::new(x, 0.0)
    }

    #[test]
    fn finite_values() {
        assert_eq!(qpoch(c(0.3), c(0.5), 0), c(1.0));
        assert!((qpoch(c(0.5), c(0.5), 2) - c(3.0 / 8.0)).norm() < 1e-16);
    }

    #[test]
    fn half_half_infinite() {
        let q = QBase::real(0.5).unwrap();
        let v = qpoch_inf(c(0.5), q);
        // direct product to 60 and 120 terms
        let d60 = qpoch(c(0.5), c(0.5), 60);
        let d120 = qpoch(c(0.5), c(0.5), 120);
        assert!((d60 - d120).norm() < 1e-15);
        assert!((v.value - d120).norm() < 1e-15);
        assert!((v.value.re - 0.2887880951).abs() < 1e-9);
        assert!(v.err < 1e-13 && v.err >= (v.value - d120).norm());
    }

    #[test]
    fn theta_zero_lattice() {
        let q = QBase::real(0.3).unwrap();
        assert!(theta(c(-1.0), q).unwrap().value.norm() < 1e-16);
        assert!(theta(-q.get(), q).unwrap().value.norm() < 1e-16);
        assert!(theta(c(-1.0) / q.get(), q).unwrap().value.norm() < 1e-15);
        assert_eq!(theta(c(0.0), q), Err(QError::ZeroArgument));
    }

    #[test]
    fn theta_quasi_periodic() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(11);
        for qv in [C64::new(0.3, 0.0), C64::new(0.1, 0.2), C64::new(-0.6, 0.1), C64::new(0.05, 0.0)] {
            let q = QBase::new(qv).unwrap();
            for _ in 0..50 {
                let u = C64::from_polar(rng.gen_range(0.2..3.0), rng.gen_range(0.0..std::f64::consts::TAU));
                let a = theta(u, q).unwrap().value;
                let b = theta(qv * u, q).unwrap().value * u;
                assert!((a - b).norm() <= 1e-11 * a.norm(), "q={qv} u={u}");
            }
        }
        // the point named in the contract
        let q = QBase::real(0.3).unwrap();
        let u = C64::new(0.7, 0.2);
        let a = theta(u, q).unwrap().value;
        let b = theta(q.get() * u, q).unwrap().value * u;
        assert!((a - b).norm() < 1e-12);
    }
}
