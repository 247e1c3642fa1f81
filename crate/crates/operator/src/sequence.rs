use crate::{KernelSpec, OperatorError, Provenance, TruncatedOperator};
use num_complex::Complex64;
use std::collections::BTreeMap;
use zeta::{stabilization_bounds, zeta_shift, ZetaError, ZetaMode};

/// `zeta(Q_k, chi, s)` for every shift `k`, stored as `coeff * p^{expo}` so
/// that stabilized values never overflow.
#[derive(Debug, Clone)]
pub struct ShiftedZetas {
    lnp: f64,
    delta: f64,
    m_minus: i64,
    m_plus: i64,
    r: i64,
    vr: i64,
    s: Complex64,
    window: BTreeMap<i64, Complex64>,
}

impl ShiftedZetas {
    pub fn new(spec: &KernelSpec) -> Result<Self, OperatorError> {
        let delta = if spec.chi.is_trivial() { 1.0 } else { 0.0 };
        let (m_minus, m_plus) = match stabilization_bounds(&spec.q_coeffs, spec.p) {
            Ok(b) => b,
            // Q = 1: every shift is stable
            Err(ZetaError::Degenerate) => (i64::MAX, i64::MAX),
            Err(e) => return Err(e.into()),
        };
        let mut window = BTreeMap::new();
        if m_minus != i64::MAX {
            for k in m_minus + 1..m_plus {
                let v = zeta_shift(&spec.q_coeffs, k, &spec.chi, ZetaMode::Numeric(spec.s))?;
                window.insert(k, v.as_complex().expect("numeric mode"));
            }
        }
        Ok(ShiftedZetas {
            lnp: spec.p.as_f64().ln(),
            delta,
            m_minus,
            m_plus,
            r: spec.degree() as i64,
            vr: spec.lead_valuation(),
            s: spec.s,
            window,
        })
    }

    pub fn bounds(&self) -> (i64, i64) {
        (self.m_minus, self.m_plus)
    }

    /// `(coeff, expo)` with `zeta(Q_k) = coeff * p^{expo}`.
    pub fn parts(&self, k: i64) -> (Complex64, Complex64) {
        let zero = Complex64::new(0.0, 0.0);
        if self.m_minus == i64::MAX || k <= self.m_minus {
            (Complex64::new(self.delta, 0.0), zero)
        } else if k >= self.m_plus {
            (Complex64::new(self.delta, 0.0), -self.s * (self.vr - k * self.r) as f64)
        } else {
            (self.window[&k], zero)
        }
    }

    pub fn value(&self, k: i64) -> Complex64 {
        let (c, e) = self.parts(k);
        c * (e * self.lnp).exp()
    }

    /// `a_{mn} = p^{-(m+n)/2 - dms} zeta(Q_{m-n})`.
    pub fn entry(&self, d: f64, m: usize, n: usize) -> Complex64 {
        let (c, e) = self.parts(m as i64 - n as i64);
        if c == Complex64::new(0.0, 0.0) {
            return c;
        }
        let w = e - (m + n) as f64 / 2.0 - self.s * (d * m as f64);
        c * (w * self.lnp).exp()
    }
}

/// The matrix `a_{mn}` of the operator on `H_chi = l^2`.
///
/// A spec with `l < d` is replaced by its `l = d` normalization, which has
/// the same nonzero eigenvalues.
pub fn build_sequence_matrix(spec: &KernelSpec, n: usize) -> Result<TruncatedOperator, OperatorError> {
    let zs = ShiftedZetas::new(spec)?;
    let mut prov = Provenance::new("sequence")
        .with("p", spec.p.get())
        .with("d", spec.d)
        .with("l", spec.d)
        .with("Q", format_coeffs(spec))
        .with("chi", format!("{}:{}", spec.chi.conductor(), spec.chi.descriptor().index))
        .with("s", format!("{},{}", spec.s.re, spec.s.im))
        .with("N", n);
    if spec.l as f64 != spec.d {
        prov = prov.with("l_input", spec.l);
    }
    let mut t = TruncatedOperator::from_fn(n, prov, |i, j| zs.entry(spec.d, i, j));
    // Hilbert-Schmidt mass of the frame n <= max(i, j) < 2n
    let mut tail = 0.0;
    for i in 0..2 * n {
        for j in 0..2 * n {
            if i >= n || j >= n {
                tail += zs.entry(spec.d, i, j).norm_sqr();
            }
        }
    }
    t.tail_estimate = tail.sqrt();
    Ok(t)
}

fn format_coeffs(spec: &KernelSpec) -> String {
    spec.q_coeffs.iter().map(|c| c.to_string()).collect::<Vec<_>>().join(",")
}

#[cfg(test)]
mod tests {
    use super::*;
    use padic_core::{rational_poly, Prime, UnitCharacter};

    fn spec(p: u64, d: f64, q: &[i64], s: f64, chi: Option<UnitCharacter>) -> KernelSpec {
        let pr = Prime::new(p).unwrap();
        let chi = chi.unwrap_or_else(|| UnitCharacter::trivial(pr).unwrap());
        KernelSpec::new(d, d as u32, rational_poly(q), chi, Complex64::new(s, 0.0)).unwrap()
    }

    #[test]
    fn noroots_closed_form() {
        let k = spec(3, 2.0, &[1, 0, 1], 1.0, None);
        let t = build_sequence_matrix(&k, 12).unwrap();
        for m in 0..12 {
            for n in 0..12 {
                let e = -((m + n) as f64) / 2.0 - 2.0 * m.min(n) as f64;
                let want = 3f64.powf(e);
                assert!((t.get(m, n).re - want).abs() <= 1e-14 * want, "{m},{n}");
            }
        }
    }

    #[test]
    fn linear_corner_entry() {
        let k = spec(3, 1.0, &[1, -1], 1.0, None);
        let t = build_sequence_matrix(&k, 4).unwrap();
        assert!((t.get(0, 0).re - 5.0 / 8.0).abs() < 1e-14);
    }

    #[test]
    fn nontrivial_character_noroots_vanishes() {
        let p = Prime::new(3).unwrap();
        let k = spec(3, 2.0, &[1, 0, 1], 1.0, Some(UnitCharacter::quadratic(p).unwrap()));
        let t = build_sequence_matrix(&k, 10).unwrap();
        assert_eq!(t.frobenius(), 0.0);
    }

    #[test]
    fn self_adjoint_when_symmetric() {
        // |x^2 + y^2| is symmetric in x, y
        let t = build_sequence_matrix(&spec(7, 2.0, &[1, 0, 1], 1.5, None), 30).unwrap();
        assert!(t.max_asymmetry() <= 1e-12);
        // |x - y| as well
        let t = build_sequence_matrix(&spec(5, 1.0, &[1, -1], 1.0, None), 30).unwrap();
        assert!(t.max_asymmetry() <= 1e-12);
        assert!(t.max_imag() == 0.0);
    }

    #[test]
    fn tail_decays() {
        let k = spec(3, 2.0, &[1, 0, 1], 1.0, None);
        let a = build_sequence_matrix(&k, 10).unwrap().tail_estimate;
        let b = build_sequence_matrix(&k, 20).unwrap().tail_estimate;
        // the first row decays like p^{-n/2}
        let ratio = b / a / 3f64.powi(-5);
        assert!((0.7..1.3).contains(&ratio), "{a} {b}");
    }

    #[test]
    fn general_l_recorded() {
        let pr = Prime::new(3).unwrap();
        let k = KernelSpec::new(2.0, 1, rational_poly(&[1, -1]), UnitCharacter::trivial(pr).unwrap(), Complex64::new(1.0, 0.0)).unwrap();
        let t = build_sequence_matrix(&k, 5).unwrap();
        assert_eq!(t.provenance.params["l_input"], "1");
        assert_eq!(t.provenance.params["l"], "2");
    }
}
