use crate::dd::{Cdd, Dd};
use num_complex::Complex64;
use std::fmt::Debug;
use std::ops::{Add, AddAssign, Div, Mul, MulAssign, Neg, Sub, SubAssign};

/// Complex field the dense eigen solver runs in.
pub trait Scalar:
    Copy
    + Debug
    + Default
    + Send
    + Sync
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Div<Output = Self>
    + Neg<Output = Self>
    + AddAssign
    + SubAssign
    + MulAssign
{
    const UNIT_ROUNDOFF: f64;
    fn from_c64(z: Complex64) -> Self;
    fn to_c64(self) -> Complex64;
    fn conj(self) -> Self;
    /// `|re| + |im|` in binary64.
    fn abs1(self) -> f64;
    /// Modulus, as a real value of `Self`.
    fn modulus(self) -> Self;
    fn scale_f64(self, r: f64) -> Self;
    fn is_zero(self) -> bool {
        self.abs1() == 0.0
    }
}

impl Scalar for Complex64 {
    const UNIT_ROUNDOFF: f64 = f64::EPSILON / 2.0;
    fn from_c64(z: Complex64) -> Self {
        z
    }
    fn to_c64(self) -> Complex64 {
        self
    }
    fn conj(self) -> Self {
        Complex64::conj(&self)
    }
    fn abs1(self) -> f64 {
        self.re.abs() + self.im.abs()
    }
    fn modulus(self) -> Self {
        Complex64::new(self.norm(), 0.0)
    }
    fn scale_f64(self, r: f64) -> Self {
        self * r
    }
}

impl Scalar for Cdd {
    const UNIT_ROUNDOFF: f64 = Dd::EPS;
    fn from_c64(z: Complex64) -> Self {
        Cdd::from_c64(z)
    }
    fn to_c64(self) -> Complex64 {
        Cdd::to_c64(self)
    }
    fn conj(self) -> Self {
        Cdd::conj(self)
    }
    fn abs1(self) -> f64 {
        self.re.hi.abs() + self.im.hi.abs()
    }
    fn modulus(self) -> Self {
        let s = self.re.hi.abs().max(self.im.hi.abs());
        if s == 0.0 {
            return Cdd::default();
        }
        // power-of-two scaling keeps the round trip exact
        let e = 2f64.powi(s.log2().floor() as i32);
        let t = self.scale_f64(1.0 / e);
        Cdd::new(t.norm_sqr().sqrt().mul_f64(e), Dd::ZERO)
    }
    fn scale_f64(self, r: f64) -> Self {
        Cdd::new(self.re.mul_f64(r), self.im.mul_f64(r))
    }
}
