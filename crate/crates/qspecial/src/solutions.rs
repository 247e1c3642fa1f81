use crate::base::is_q_pole;
use crate::hyper::{basic_phi, cleared_bailey, poly_coeffs, Variant};
use crate::poch::qpoch_inf;
use crate::{Approx, QBase, QError, C64};

/// The solution `Phi_i = u^{nu_i} S_i(u)` of
/// `u (1 - a_1 T)...(1 - a_l T) Phi = (1 - b_1 T)...(1 - b_r T) Phi`, with
/// `b_i = q^{-nu_i}` and `S_i = l varphi_{r-1}(a / b_i; q b_m / b_i (m != i); q, u)`.
///
/// No power `u^{nu_i}` is ever formed: shifts act on the series part as
/// `T^k Phi_i = u^{nu_i} b_i^{-k} S_i(q^k u)`.
#[derive(Debug, Clone, PartialEq)]
pub struct PhiSolution {
    pub q: QBase,
    /// `b_i`, so that `q^{nu_i} = 1 / b_i`.
    pub base: C64,
    pub series_a: Vec<C64>,
    pub series_b: Vec<C64>,
    a: Vec<C64>,
    b: Vec<C64>,
}

pub fn phi_solution(a: &[C64], b: &[C64], i: usize, q: QBase) -> Result<PhiSolution, QError> {
    if i >= b.len() {
        return Err(QError::Invalid(format!("index {i} out of range for {} b-parameters", b.len())));
    }
    let zero = C64::new(0.0, 0.0);
    if b.contains(&zero) {
        return Err(QError::Invalid("b-parameters must be nonzero".into()));
    }
    for (m, &bm) in b.iter().enumerate() {
        if m != i && (bm - b[i]).norm() <= 1e-14 * bm.norm() {
            return Err(QError::Degenerate("b-parameters must be distinct".into()));
        }
    }
    let bi = b[i];
    let qv = q.get();
    let series_b: Vec<C64> = b
        .iter()
        .enumerate()
        .filter(|&(m, _)| m != i)
        .map(|(_, &bm)| qv * bm / bi)
        .collect();
    if series_b.iter().any(|&x| is_q_pole(x, q)) {
        return Err(QError::Degenerate("resonant b-ratio".into()));
    }
    Ok(PhiSolution {
        q,
        base: bi,
        series_a: a.iter().map(|&x| x / bi).collect(),
        series_b,
        a: a.to_vec(),
        b: b.to_vec(),
    })
}

impl PhiSolution {
    /// `f_i / u^{nu_i} = (u; q)_inf S_i(u)`, entire with value 1 at 0.
    pub fn cleared(&self, u: C64) -> Result<Approx, QError> {
        cleared_bailey(&self.series_a, &self.series_b, self.q, u)
    }

    /// `S_i(u)`; outside the unit disk via the cleared form.
    pub fn series(&self, u: C64) -> Result<Approx, QError> {
        if u.norm() < 0.9 {
            basic_phi(&self.series_a, &self.series_b, self.q, u, Variant::Bailey)
        } else {
            Ok(self.cleared(u)? / qpoch_inf(u, self.q))
        }
    }

    /// Relative residual of the difference equation at `u`.
    pub fn residual(&self, u: C64) -> Result<f64, QError> {
        let alpha = poly_coeffs(&self.a);
        let beta = poly_coeffs(&self.b);
        let qv = self.q.get();
        let n = alpha.len().max(beta.len());
        let zero = C64::new(0.0, 0.0);
        let mut lhs = zero;
        let mut rhs = zero;
        let mut scale = 0.0f64;
        for k in 0..n {
            let s = self.series(u * qv.powi(k as i32))?.value * self.base.powi(-(k as i32));
            let l = u * alpha.get(k).copied().unwrap_or(zero) * s;
            let r = beta.get(k).copied().unwrap_or(zero) * s;
            scale = scale.max(l.norm()).max(r.norm());
            lhs += l;
            rhs += r;
        }
        Ok((lhs - rhs).norm() / scale.max(f64::MIN_POSITIVE))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};

    fn c(x: f64) -> C64 {
        C64::new(x, 0.0)
    }

    #[test]
    fn value_one_at_origin() {
        let q = QBase::real(0.3).unwrap();
        let s = phi_solution(&[c(0.4), c(-0.7)], &[c(1.3), c(2.9)], 1, q).unwrap();
        assert_eq!(s.series(c(0.0)).unwrap().value, c(1.0));
        assert_eq!(s.cleared(c(0.0)).unwrap().value, c(1.0));
    }

    #[test]
    fn first_order_residual() {
        let q = QBase::real(0.35).unwrap();
        let s = phi_solution(&[c(0.8)], &[c(1.7)], 0, q).unwrap();
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(3);
        for _ in 0..10 {
            let u = C64::from_polar(rng.gen_range(0.05..5.0), rng.gen_range(0.0..std::f64::consts::TAU));
            assert!(s.residual(u).unwrap() <= 1e-10, "{u}");
        }
    }

    #[test]
    fn second_order_residual() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(4);
        let q = QBase::new(C64::from_polar(0.3, 0.4)).unwrap();
        for _ in 0..3 {
            let rnd = |rng: &mut rand_chacha::ChaCha8Rng| C64::from_polar(rng.gen_range(0.5..2.0), rng.gen_range(0.0..std::f64::consts::TAU));
            let a = [rnd(&mut rng), rnd(&mut rng)];
            let b = [rnd(&mut rng), rnd(&mut rng)];
            for i in 0..2 {
                let s = phi_solution(&a, &b, i, q).unwrap();
                for _ in 0..10 {
                    let u = C64::from_polar(rng.gen_range(0.05..4.0), rng.gen_range(0.0..std::f64::consts::TAU));
                    assert!(s.residual(u).unwrap() <= 1e-10, "u={u}");
                }
            }
        }
    }

    #[test]
    fn resonance_rejected() {
        let q = QBase::real(0.5).unwrap();
        // b_1 / b_0 = q^{-2}: q b_1 / b_0 = q^{-1}
        assert!(matches!(phi_solution(&[c(0.3)], &[c(1.0), c(4.0)], 0, q), Err(QError::Degenerate(_))));
        assert!(phi_solution(&[c(0.3)], &[c(1.0), c(1.0)], 0, q).is_err());
    }
}
