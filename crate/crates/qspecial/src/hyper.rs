use crate::base::is_q_pole;
use crate::poch::qpoch_inf;
use crate::series::{sum_series, SeriesControl};
use crate::{Approx, QBase, QError, C64};

/// `phi` carries the factor `((-1)^n q^{n(n-1)/2})^{r - l}`; Bailey's
/// variant does not.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Variant {
    Phi,
    Bailey,
}

fn check_b(b: &[C64], q: QBase) -> Result<(), QError> {
    for &bj in b {
        if is_q_pole(bj, q) {
            return Err(QError::Pole(format!("{bj}")));
        }
    }
    Ok(())
}

fn term_ratio(a: &[C64], b: &[C64], q: C64, u: C64, extra: i32, n: usize) -> C64 {
    let qn = q.powi(n as i32);
    let mut r = u / (1.0 - qn * q);
    for &ai in a {
        r *= 1.0 - ai * qn;
    }
    for &bj in b {
        r /= 1.0 - bj * qn;
    }
    if extra > 0 {
        r *= (-qn).powi(extra);
    }
    r
}

fn ratio_bound(a: &[C64], b: &[C64], qa: f64, ua: f64, extra: i32, n: usize) -> f64 {
    let qn = qa.powi(n as i32);
    let mut r = ua / (1.0 - qn * qa);
    for ai in a {
        r *= 1.0 + ai.norm() * qn;
    }
    for bj in b {
        let d = 1.0 - bj.norm() * qn;
        if d <= 0.0 {
            return f64::INFINITY;
        }
        r /= d;
    }
    r * qn.powi(extra)
}

/// `l phi_{r-1}(a; b; q, u)` with `l = a.len()`, `r = b.len() + 1`.
pub fn basic_phi(a: &[C64], b: &[C64], q: QBase, u: C64, variant: Variant) -> Result<Approx, QError> {
    check_b(b, q)?;
    let l = a.len() as i32;
    let r = b.len() as i32 + 1;
    let extra = match variant {
        Variant::Phi => {
            if l > r {
                return Err(QError::Invalid(format!("phi needs l <= r, got l = {l}, r = {r}")));
            }
            r - l
        }
        Variant::Bailey => 0,
    };
    if extra == 0 && u.norm() >= 1.0 {
        return Err(QError::OutsideRadius(format!("{u}")));
    }
    let qv = q.get();
    let (qa, ua) = (q.abs(), u.norm());
    sum_series(
        |n| term_ratio(a, b, qv, u, extra, n),
        |n| ratio_bound(a, b, qa, ua, extra, n),
        SeriesControl::default(),
    )
}

/// Partial sum with exactly `terms` terms.
pub fn basic_phi_terms(a: &[C64], b: &[C64], q: QBase, u: C64, variant: Variant, terms: usize) -> C64 {
    let extra = match variant {
        Variant::Phi => b.len() as i32 + 1 - a.len() as i32,
        Variant::Bailey => 0,
    };
    let mut t = C64::new(1.0, 0.0);
    let mut s = C64::new(0.0, 0.0);
    for n in 0..terms {
        s += t;
        t *= term_ratio(a, b, q.get(), u, extra.max(0), n);
    }
    s
}

/// `J(a, q, u) = sum (-1)^n q^{n(n-1)/2} u^n / ((a;q)_n (q;q)_n)`.
pub fn hahn_exton_j(a: C64, q: QBase, u: C64) -> Result<Approx, QError> {
    if is_q_pole(a, q) {
        return Err(QError::Pole(format!("{a}")));
    }
    let qv = q.get();
    let qa = q.abs();
    let (aa, ua) = (a.norm(), u.norm());
    sum_series(
        |n| {
            let qn = qv.powi(n as i32);
            -u * qn / ((1.0 - a * qn) * (1.0 - qn * qv))
        },
        |n| {
            let qn = qa.powi(n as i32);
            let d = (1.0 - aa * qn) * (1.0 - qn * qa);
            if d <= 0.0 {
                f64::INFINITY
            } else {
                ua * qn / d
            }
        },
        SeriesControl::default(),
    )
}

/// Coefficients of `prod_i (1 - r_i X)`, constant term first.
pub fn poly_coeffs(roots: &[C64]) -> Vec<C64> {
    let mut c = vec![C64::new(1.0, 0.0)];
    for &r in roots {
        c.push(C64::new(0.0, 0.0));
        for k in (1..c.len()).rev() {
            let prev = c[k - 1];
            c[k] -= r * prev;
        }
    }
    c
}

/// The entire function `(u; q)_inf * l varphi_{r-1}(a; b; q, u)`.
///
/// Evaluated directly for `|u| <= 1/2` and continued outward with the
/// cleared q-hypergeometric difference equation
/// `f(u) = sum_{k>=1} (u alpha_k - gamma_k) prod_{i<k} (1 - q^i u) f(q^k u)`.
pub fn cleared_bailey(a: &[C64], b: &[C64], q: QBase, u: C64) -> Result<Approx, QError> {
    cleared_bailey_with(a, b, q, u, 0.5)
}

pub(crate) fn cleared_bailey_with(a: &[C64], b: &[C64], q: QBase, u: C64, direct: f64) -> Result<Approx, QError> {
    check_b(b, q)?;
    let direct_eval = |x: C64| -> Result<Approx, QError> {
        Ok(qpoch_inf(x, q) * basic_phi(a, b, q, x, Variant::Bailey)?)
    };
    if u.norm() <= direct {
        return direct_eval(u);
    }
    let qv = q.get();
    let alpha = poly_coeffs(a);
    let mut groots: Vec<C64> = b.iter().map(|&bj| bj / qv).collect();
    groots.push(C64::new(1.0, 0.0));
    let gamma = poly_coeffs(&groots);
    let m = alpha.len().max(gamma.len()) - 1;
    let mut steps = 0usize;
    let mut x = u;
    while x.norm() > direct {
        x *= qv;
        steps += 1;
    }
    // vals[j] = f(q^{steps + j} u), j < m
    let mut vals: Vec<Approx> = Vec::with_capacity(m);
    let mut y = x;
    for _ in 0..m {
        vals.push(direct_eval(y)?);
        y *= qv;
    }
    let zero = C64::new(0.0, 0.0);
    for n in (0..steps).rev() {
        let un = u * qv.powi(n as i32);
        let mut acc = Approx::exact(zero);
        let mut prod = C64::new(1.0, 0.0);
        let mut mag = 0.0;
        for k in 1..=m {
            let ak = alpha.get(k).copied().unwrap_or(zero);
            let gk = gamma.get(k).copied().unwrap_or(zero);
            let coef = (un * ak - gk) * prod;
            let term = vals[k - 1].scale(coef);
            mag += term.value.norm();
            acc = acc + term;
            prod *= 1.0 - qv.powi(k as i32) * un;
        }
        acc.err += 4.0 * f64::EPSILON * mag;
        vals.pop();
        vals.insert(0, acc);
    }
    Ok(vals[0])
}

/// `2phi1~(a, b; c; q, u) = 2phi1(a, b; c; q, u) (u; q)_inf`, entire in `u`.
pub fn phi_tilde_2_1(a: C64, b: C64, c: C64, q: QBase, u: C64) -> Result<Approx, QError> {
    cleared_bailey(&[a, b], &[c], q, u)
}

/// Right side of the Watson connection formula for Heine's `2phi1`:
/// two `2phi1` terms at `cq/(abx)` with theta-type prefactors.
pub fn watson_rhs(a: C64, b: C64, c: C64, q: QBase, x: C64) -> Result<Approx, QError> {
    let qv = q.get();
    let pi = |z: C64| qpoch_inf(z, q);
    let y = c * qv / (a * b * x);
    let half = |a: C64, b: C64| -> Result<Approx, QError> {
        let num = pi(b) * pi(c / a) * pi(a * x) * pi(qv / (a * x));
        let den = pi(c) * pi(b / a) * pi(x) * pi(qv / x);
        let f = basic_phi(&[a, a * qv / c], &[a * qv / b], q, y, Variant::Phi)?;
        Ok(num / den * f)
    };
    Ok(half(a, b)? + half(b, a)?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poch::qpoch;

    fn c(x: f64) -> C64 {
        C64::new(x, 0.0)
    }

    #[test]
    fn value_at_zero() {
        let q = QBase::real(0.3).unwrap();
        for v in [Variant::Phi, Variant::Bailey] {
            let r = basic_phi(&[c(0.2), c(2.0)], &[c(0.7)], q, c(0.0), v).unwrap();
            assert_eq!(r.value, c(1.0));
        }
        assert_eq!(hahn_exton_j(c(0.4), q, c(0.0)).unwrap().value, c(1.0));
        assert_eq!(phi_tilde_2_1(c(0.4), c(0.1), c(0.2), q, c(0.0)).unwrap().value, c(1.0));
    }

    #[test]
    fn terminating_heine() {
        for (p, s) in [(5.0f64, 1.0f64), (3.0, 0.5), (7.0, 2.0)] {
            let qf = p.powf(-1.0 - s);
            let q = QBase::real(qf).unwrap();
            let u = c(0.37);
            let v = basic_phi(&[c(1.0 / qf), c(1.0 / p)], &[c(1.0 / (p * qf))], q, u, Variant::Phi).unwrap();
            let want = 1.0 - (1.0 - p) / (1.0 - p * qf) * 0.37;
            assert!((v.value - want).norm() < 1e-13, "{} {want}", v.value);
            // cleared form for large argument
            let big = c(-40.0);
            let h = phi_tilde_2_1(c(1.0 / qf), c(1.0 / p), c(1.0 / (p * qf)), q, big).unwrap();
            let hw = (1.0 - (1.0 - p) / (1.0 - p * qf) * big) * qpoch_inf(big, q).value;
            assert!((h.value - hw).norm() < 1e-11 * hw.norm(), "{} {hw}", h.value);
        }
    }

    #[test]
    fn j_first_order() {
        let q = QBase::real(0.1).unwrap();
        let (a, u) = (c(0.2), c(0.001));
        let j = hahn_exton_j(a, q, u).unwrap().value;
        let lin = 1.0 - u / ((1.0 - a) * (1.0 - q.get()));
        assert!((j - lin).norm() < 1e-5);
        assert!((j - lin).norm() > 0.0);
    }

    #[test]
    fn j_is_1phi1() {
        let q = QBase::real(0.25).unwrap();
        let (a, u) = (c(0.3), C64::new(2.0, 1.0));
        let j = hahn_exton_j(a, q, u).unwrap().value;
        let f = basic_phi(&[c(0.0)], &[a], q, u, Variant::Phi).unwrap().value;
        assert!((j - f).norm() < 1e-12);
    }

    /// Hahn-Exton `J_nu(x; q)` from its series
    /// `x^nu (q^{nu+1};q)_inf/(q;q)_inf sum (-1)^k q^{k(k+1)/2} x^{2k} / ((q^{nu+1};q)_k (q;q)_k)`.
    #[test]
    fn j_nu_relation() {
        let (nu, qf, x) = (0.5f64, 0.4f64, 0.3f64);
        let q = QBase::real(qf).unwrap();
        let a = c(qf.powf(nu + 1.0));
        let pref = x.powf(nu) * qpoch_inf(a, q).value / qpoch_inf(c(qf), q).value;
        let lhs = pref * hahn_exton_j(a, q, c(qf * x * x)).unwrap().value;
        let mut s = c(0.0);
        for k in 0..60usize {
            let kk = k as f64;
            let num = (-1.0f64).powi(k as i32) * qf.powf(kk * (kk + 1.0) / 2.0) * x.powf(2.0 * kk);
            s += num / (qpoch(a, c(qf), k) * qpoch(c(qf), c(qf), k));
        }
        let rhs = pref * s;
        assert!((lhs - rhs).norm() < 1e-10);
    }

    #[test]
    fn poles_rejected() {
        let q = QBase::real(0.5).unwrap();
        assert!(matches!(hahn_exton_j(c(4.0), q, c(1.0)), Err(QError::Pole(_))));
        assert!(matches!(basic_phi(&[c(0.1)], &[c(1.0)], q, c(0.2), Variant::Bailey), Err(QError::Pole(_))));
        assert!(matches!(basic_phi(&[c(0.1)], &[c(0.3)], q, c(1.2), Variant::Bailey), Err(QError::OutsideRadius(_))));
    }

    #[test]
    fn cleared_matches_direct_inside_disk() {
        let q = QBase::new(C64::new(0.3, 0.1)).unwrap();
        let (a, b) = ([C64::new(0.4, 0.2), c(-1.3)], [C64::new(0.6, -0.5)]);
        for u in [C64::new(0.7, 0.1), C64::new(-0.2, 0.8), c(0.9)] {
            let direct = qpoch_inf(u, q).value * basic_phi(&a, &b, q, u, Variant::Bailey).unwrap().value;
            let cont = cleared_bailey(&a, &b, q, u).unwrap();
            assert!((direct - cont.value).norm() < 1e-12 * direct.norm().max(1.0));
        }
    }

    #[test]
    fn continuation_is_self_consistent() {
        let q = QBase::real(0.2).unwrap();
        let (a, b) = ([c(0.7), c(2.5)], [c(0.3)]);
        for u in [C64::new(1.5, 0.0), C64::new(0.0, 1.5), C64::new(-1.2, 0.9), C64::new(30.0, -7.0)] {
            let r1 = cleared_bailey_with(&a, &b, q, u, 0.5).unwrap();
            let r2 = cleared_bailey_with(&a, &b, q, u, 0.15).unwrap();
            let r3 = cleared_bailey_with(&a, &b, q, u, 0.03).unwrap();
            let sc = r1.value.norm().max(1.0);
            assert!((r1.value - r2.value).norm() <= 1e-9 * sc, "{u}");
            assert!((r1.value - r3.value).norm() <= 1e-9 * sc, "{u}");
        }
    }

    #[test]
    fn cleared_satisfies_difference_equation() {
        let q = QBase::real(0.3).unwrap();
        let (a, b) = ([c(0.5), c(-0.8), c(1.7)], [c(0.2), c(-0.6)]);
        let alpha = poly_coeffs(&a);
        let mut gr: Vec<C64> = b.iter().map(|x| x / q.get()).collect();
        gr.push(c(1.0));
        let gamma = poly_coeffs(&gr);
        for u in [c(3.0), C64::new(-5.0, 2.0), c(17.0)] {
            let f = |k: usize| cleared_bailey(&a, &b, q, u * q.get().powi(k as i32)).unwrap().value;
            let mut rhs = c(0.0);
            let mut prod = c(1.0);
            for k in 1..=3 {
                rhs += (u * alpha[k] - gamma[k]) * prod * f(k);
                prod *= 1.0 - q.get().powi(k as i32) * u;
            }
            assert!((f(0) - rhs).norm() < 1e-10 * f(0).norm().max(1.0));
        }
    }

    #[test]
    fn poly_coeffs_expand() {
        let c2 = poly_coeffs(&[c(2.0), c(3.0)]);
        assert_eq!(c2, vec![c(1.0), c(-5.0), c(6.0)]);
    }
}
