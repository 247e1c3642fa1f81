use crate::base::is_q_pole;
use crate::hyper::hahn_exton_j;
use crate::poch::{qpoch_inf, theta};
use crate::series::{sum_series, SeriesControl};
use crate::{Approx, QBase, QError, C64};

fn check_ab(a: C64, b: C64, q: QBase) -> Result<(), QError> {
    if a == b || (a - b).norm() <= 1e-14 * a.norm().max(b.norm()) {
        return Err(QError::Degenerate("a = b".into()));
    }
    if a == C64::new(0.0, 0.0) || b == C64::new(0.0, 0.0) {
        return Err(QError::Degenerate("a or b is zero".into()));
    }
    if is_q_pole(a / b, q) || is_q_pole(b / a, q) {
        return Err(QError::Degenerate("a/b is an integer power of q".into()));
    }
    Ok(())
}

/// `E(a, b; q, u)` from the theta/J representation.
pub fn e_func_theta(a: C64, b: C64, q: QBase, u: C64) -> Result<Approx, QError> {
    check_ab(a, b, q)?;
    if u == C64::new(0.0, 0.0) {
        return Err(QError::ZeroArgument);
    }
    let qv = q.get();
    let qq = qpoch_inf(qv, q);
    let half = |a: C64, b: C64| -> Result<Approx, QError> {
        let th = theta(a * u, q)?;
        let j = hahn_exton_j(a * qv / b, q, -qv * qv / (b * u))?;
        Ok(th * j / (qpoch_inf(b / a, q) * qq))
    };
    Ok(half(a, b)? + half(b, a)?)
}

/// `E(a, b; q, u)` as the power series solution, `E(0) = 1`, of
/// `ab q u^2 K(q^2 u) - (1 + (a + b) u) K(qu) + K(u) = 0`.
pub fn e_func_series(a: C64, b: C64, q: QBase, u: C64) -> Result<Approx, QError> {
    let qv = q.get();
    let qa = q.abs();
    let (s, p) = (a + b, a * b);
    let (sa, pa, ua) = (s.norm(), p.norm(), u.norm());
    let zero = C64::new(0.0, 0.0);
    // s_n = k_n u^n
    let mut prev = zero;
    let mut cur = C64::new(1.0, 0.0);
    let mut sum = cur;
    let mut abs_sum = 1.0;
    let mut quiet = 0;
    for n in 1..5000usize {
        let qn1 = qv.powi(n as i32 - 1);
        let next = (s * qn1 * u * cur - p * qn1 * qn1 / qv * u * u * prev) / (1.0 - qn1 * qv);
        sum += next;
        abs_sum += next.norm();
        prev = cur;
        cur = next;
        let scale = sum.norm().max(f64::MIN_POSITIVE);
        if cur.norm() <= crate::DEFAULT_EPS * scale {
            quiet += 1;
        } else {
            quiet = 0;
        }
        if quiet >= 5 {
            let m = n + 1;
            let qm = qa.powi(m as i32 - 1);
            let c = (sa * qm * ua + pa * qm * qm / qa * ua * ua) / (1.0 - qm * qa);
            if c < 1.0 {
                let tail = 2.0 * cur.norm().max(prev.norm()) * c / (1.0 - c);
                if tail <= crate::DEFAULT_EPS * scale {
                    return Ok(Approx {
                        value: sum,
                        err: tail + 4.0 * f64::EPSILON * abs_sum,
                    });
                }
            }
        }
    }
    Err(QError::NoConvergence(5000))
}

/// `E(a, b; q, u)`: power series for `|u| < 0.1 min(1/|a|, 1/|b|)`, the
/// theta/J form elsewhere.
pub fn e_func(a: C64, b: C64, q: QBase, u: C64) -> Result<Approx, QError> {
    check_ab(a, b, q)?;
    let switch = 0.1 * (1.0 / a.norm()).min(1.0 / b.norm());
    if u.norm() < switch {
        e_func_series(a, b, q, u)
    } else {
        e_func_theta(a, b, q, u)
    }
}

fn k_checks(a: C64, q: QBase, d: u32) -> Result<(), QError> {
    if d < 2 {
        return Err(QError::Invalid(format!("Mahler degree d = {d} must be >= 2")));
    }
    // 1 - a q^{d^n} must not vanish
    let mut e = q.get();
    for _ in 0..64 {
        if (1.0 - a * e).norm() < 1e-13 {
            return Err(QError::Pole(format!("a = {a}")));
        }
        e = e.powu(d);
        if e.norm() < 1e-300 {
            break;
        }
    }
    Ok(())
}

fn k_ratio(a: C64, q: C64, d: u32) -> impl FnMut(usize) -> C64 {
    // e = q^{d^n}, f = q^{d^{n+1} - 1}
    let mut e = q;
    let mut last = usize::MAX;
    move |n| {
        if last != usize::MAX && n == last + 1 {
            e = e.powu(d);
        }
        last = n;
        let f = e.powu(d) / q;
        -e / ((1.0 - a * e) * (1.0 - f))
    }
}

/// `K(a; q, u) = sum (-1)^n q^{(d^n - 1)/(d - 1)} u^n / ([a;q]_{d,n} [q^{-1};q^d]_{d,n})`.
pub fn k_mahler(a: C64, q: QBase, d: u32, u: C64) -> Result<Approx, QError> {
    k_checks(a, q, d)?;
    let mut r = k_ratio(a, q.get(), d);
    let (lq, aa, ua) = (q.abs().ln(), a.norm(), u.norm());
    sum_series(
        move |n| r(n) * u,
        |n| {
            let dn = (d as f64).powi(n as i32);
            let e = (dn * lq).exp();
            let f = ((dn * d as f64 - 1.0) * lq).exp();
            let den = (1.0 - aa * e) * (1.0 - f);
            if den <= 0.0 {
                f64::INFINITY
            } else {
                ua * e / den
            }
        },
        SeriesControl::default(),
    )
}

/// Partial sum of the `K` series with exactly `terms` terms.
pub fn k_mahler_terms(a: C64, q: QBase, d: u32, u: C64, terms: usize) -> C64 {
    let mut r = k_ratio(a, q.get(), d);
    let mut t = C64::new(1.0, 0.0);
    let mut s = C64::new(0.0, 0.0);
    for n in 0..terms {
        s += t;
        t *= r(n) * u;
    }
    s
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};

    fn c(x: f64) -> C64 {
        C64::new(x, 0.0)
    }

    #[test]
    fn e_at_zero_and_symmetry() {
        let q = QBase::real(0.2).unwrap();
        let (a, b) = (c(0.9), c(1.0 / (5.0 * 0.2 * 0.9)));
        assert!((e_func(a, b, q, c(0.0)).unwrap().value - 1.0).norm() < 1e-15);
        // theta form is singular at 0 but tends to 1
        let small = e_func_theta(a, b, q, C64::new(1e-3, 1e-3)).unwrap().value;
        assert!((small - 1.0).norm() < 1e-2);
        let u = C64::new(3.7, -1.1);
        let e1 = e_func(a, b, q, u).unwrap().value;
        let e2 = e_func(b, a, q, u).unwrap().value;
        assert!((e1 - e2).norm() < 1e-11 * e1.norm().max(1.0));
    }

    #[test]
    fn e_paths_agree_on_annulus() {
        let qf = 0.2;
        let q = QBase::real(qf).unwrap();
        let a = c(0.9);
        let b = c(1.0 / (5.0 * qf * 0.9));
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(5);
        for _ in 0..20 {
            let u = C64::from_polar(rng.gen_range(0.1..0.3), rng.gen_range(0.0..std::f64::consts::TAU));
            let s = e_func_series(a, b, q, u).unwrap().value;
            let t = e_func_theta(a, b, q, u).unwrap().value;
            assert!((s - t).norm() <= 1e-9, "{u}: {s} {t}");
        }
    }

    #[test]
    fn e_degenerate() {
        let q = QBase::real(0.3).unwrap();
        assert!(e_func(c(0.5), c(0.5), q, c(1.0)).is_err());
        assert!(e_func(c(0.5), c(0.15), q, c(1.0)).is_err());
    }

    #[test]
    fn k_first_order() {
        let q = QBase::real(0.3).unwrap();
        let (a, u) = (c(0.5), c(0.001));
        let k = k_mahler(a, q, 2, u).unwrap().value;
        let lin = 1.0 - 0.3 * u / ((1.0 - a * 0.3) * (1.0 - 0.3));
        assert!((k - lin).norm() < 1e-6);
    }

    #[test]
    fn k_tail_doubling() {
        let q = QBase::real(0.5).unwrap();
        let u = c(100.0);
        let k30 = k_mahler_terms(c(0.3), q, 2, u, 30);
        let k60 = k_mahler_terms(c(0.3), q, 2, u, 60);
        assert!((k30 - k60).norm() <= 1e-12);
        let k = k_mahler(c(0.3), q, 2, u).unwrap();
        assert!((k.value - k60).norm() <= k.err.max(1e-14));
    }

    #[test]
    fn k_satisfies_mahler_equation() {
        // coefficient recursion k_{n} [[a;q]] structure: K(u) = sum t_n; check against explicit products
        let q = QBase::real(0.4).unwrap();
        let (a, d, u) = (c(0.7), 3u32, C64::new(2.0, 1.0));
        let mut s = c(0.0);
        for n in 0..8u32 {
            let mut den = c(1.0);
            for j in 0..n {
                let e = 0.4f64.powi(3i32.pow(j));
                den *= (1.0 - a * e) * (1.0 - 0.4f64.powi(3i32.pow(j + 1) - 1));
            }
            let ex = (3f64.powi(n as i32) - 1.0) / 2.0;
            s += (-1.0f64).powi(n as i32) * 0.4f64.powf(ex) * u.powu(n) / den;
        }
        let k = k_mahler(a, q, d, u).unwrap().value;
        assert!((k - s).norm() < 1e-13 * s.norm());
    }

    #[test]
    fn k_rejects() {
        let q = QBase::real(0.5).unwrap();
        assert!(k_mahler(c(0.3), q, 1, c(1.0)).is_err());
        assert!(k_mahler(c(2.0), q, 2, c(1.0)).is_err());
    }
}
