use crate::OperatorError;
use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::{One, Zero};
use padic_core::{valuation, Prime, UnitCharacter};

/// A homogeneous kernel `|P(x, y)|^s` with `P = x^{d-l} y^l Q(x/y)`,
/// restricted to the `chi`-isotypic part.
#[derive(Debug, Clone)]
pub struct KernelSpec {
    pub p: Prime,
    /// Homogeneous degree; may be non-integer.
    pub d: f64,
    pub l: u32,
    pub q_coeffs: Vec<BigRational>,
    pub chi: UnitCharacter,
    pub s: Complex64,
}

impl KernelSpec {
    pub fn new(
        d: f64,
        l: u32,
        q_coeffs: Vec<BigRational>,
        chi: UnitCharacter,
        s: Complex64,
    ) -> Result<Self, OperatorError> {
        let p = chi.prime();
        if !q_coeffs.first().is_some_and(|c| c.is_one()) {
            return Err(OperatorError::InvalidSpec("Q(0) must be 1".into()));
        }
        let spec = KernelSpec { p, d, l, q_coeffs, chi, s };
        let r = spec.degree() as f64;
        if !(r <= l as f64 && l as f64 <= d) {
            return Err(OperatorError::InvalidSpec(format!("need r <= l <= d, got r = {r}, l = {l}, d = {d}")));
        }
        let bound = spec.min_re_s();
        if !(s.re > bound) {
            return Err(OperatorError::Domain(format!("Re(s) = {} must exceed {bound}", s.re)));
        }
        if spec.q().norm() >= 1.0 {
            return Err(OperatorError::Domain(format!("|q| = {} is not < 1", spec.q().norm())));
        }
        Ok(spec)
    }

    /// `r = deg Q`.
    pub fn degree(&self) -> usize {
        self.q_coeffs.iter().rposition(|c| !c.is_zero()).unwrap_or(0)
    }

    /// Lower bound on `Re(s)` for the trace-class realization.
    pub fn min_re_s(&self) -> f64 {
        let r = self.degree() as f64;
        let l = self.l as f64;
        let m = if self.chi.is_trivial() {
            (2.0 * (self.d - l)).max(2.0 * (l - r)).max(self.d)
        } else {
            self.d
        };
        -1.0 / m
    }

    /// `q = p^{-1-ds}`.
    pub fn q(&self) -> Complex64 {
        self.p_pow(-1.0 - self.d * self.s)
    }

    /// `p^w` for complex `w`.
    pub fn p_pow(&self, w: Complex64) -> Complex64 {
        (w * self.p.as_f64().ln()).exp()
    }

    /// `v_p` of the leading coefficient, `|c| = p^{-v}`.
    pub fn lead_valuation(&self) -> i64 {
        valuation(&self.q_coeffs[self.degree()], self.p).finite().unwrap_or(0)
    }

    /// The same operator with `l = d`, which has the same nonzero spectrum.
    /// Returns `None` for non-integer `d`, where no such `l` exists.
    pub fn normalized(&self) -> Option<KernelSpec> {
        if self.d.fract() != 0.0 {
            return None;
        }
        let mut s = self.clone();
        s.l = self.d as u32;
        Some(s)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use padic_core::rational_poly;

    #[test]
    fn q_and_domain() {
        let p = Prime::new(3).unwrap();
        let chi = UnitCharacter::trivial(p).unwrap();
        let k = KernelSpec::new(2.0, 2, rational_poly(&[1, 0, 1]), chi.clone(), Complex64::new(1.0, 0.0)).unwrap();
        assert!((k.q().re - 1.0 / 27.0).abs() < 1e-15);
        assert_eq!(k.min_re_s(), -0.5);
        assert!(KernelSpec::new(2.0, 2, rational_poly(&[1, 0, 1]), chi.clone(), Complex64::new(-0.6, 0.0)).is_err());
        assert!(KernelSpec::new(2.0, 1, rational_poly(&[1, 0, 1]), chi, Complex64::new(1.0, 0.0)).is_err());
    }

    #[test]
    fn nontrivial_character_domain() {
        let p = Prime::new(5).unwrap();
        let chi = UnitCharacter::quadratic(p).unwrap();
        let k = KernelSpec::new(2.0, 1, rational_poly(&[1, -1]), chi, Complex64::new(-0.45, 0.0)).unwrap();
        assert_eq!(k.min_re_s(), -0.5);
        assert_eq!(k.normalized().unwrap().l, 2);
    }
}
