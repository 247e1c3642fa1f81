use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use thiserror::Error;

pub type C64 = Complex64;

/// Relative target accuracy of series truncation.
pub const DEFAULT_EPS: f64 = 1e-14;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum QError {
    #[error("|q| = {0} is not < 1")]
    BadBase(f64),
    #[error("parameter {0} hits a pole (a power q^-m, m >= 0)")]
    Pole(String),
    #[error("u = {0} outside the disk of convergence |u| < 1")]
    OutsideRadius(String),
    #[error("argument must be nonzero")]
    ZeroArgument,
    #[error("degenerate parameters: {0}")]
    Degenerate(String),
    #[error("series did not converge in {0} terms")]
    NoConvergence(usize),
    #[error("invalid parameters: {0}")]
    Invalid(String),
}

/// The base `q`, `0 < |q| < 1`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct QBase(C64);

impl QBase {
    pub fn new(q: C64) -> Result<Self, QError> {
        let m = q.norm();
        if m < 1.0 && m > 0.0 {
            Ok(QBase(q))
        } else {
            Err(QError::BadBase(m))
        }
    }

    pub fn real(q: f64) -> Result<Self, QError> {
        Self::new(C64::new(q, 0.0))
    }

    #[inline]
    pub fn get(self) -> C64 {
        self.0
    }

    #[inline]
    pub fn abs(self) -> f64 {
        self.0.norm()
    }
}

/// A value with an absolute error estimate.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Approx {
    pub value: C64,
    pub err: f64,
}

impl Approx {
    pub fn exact(value: C64) -> Self {
        Approx { value, err: 0.0 }
    }

    pub fn scale(self, c: C64) -> Approx {
        Approx {
            value: self.value * c,
            err: self.err * c.norm(),
        }
    }
}

impl std::ops::Mul for Approx {
    type Output = Approx;

    fn mul(self, o: Approx) -> Approx {
        Approx {
            value: self.value * o.value,
            err: self.err * o.value.norm() + o.err * self.value.norm() + self.err * o.err,
        }
    }
}

impl std::ops::Add for Approx {
    type Output = Approx;

    fn add(self, o: Approx) -> Approx {
        Approx {
            value: self.value + o.value,
            err: self.err + o.err,
        }
    }
}

/// Quotient; the bound assumes `o.err < |o|`.
impl std::ops::Div for Approx {
    type Output = Approx;

    fn div(self, o: Approx) -> Approx {
        let d = o.value.norm();
        let v = self.value / o.value;
        let err = if o.err < d {
            (self.err + v.norm() * o.err) / (d - o.err)
        } else {
            f64::INFINITY
        };
        Approx { value: v, err }
    }
}

/// `|x - q^{-m}|` small for some `m >= 0`.
pub(crate) fn is_q_pole(x: C64, q: QBase) -> bool {
    if x.norm() < 1.0 - 1e-12 {
        return false;
    }
    let qv = q.get();
    let mut w = x;
    for _ in 0..200 {
        if (w - 1.0).norm() < 1e-13 {
            return true;
        }
        if w.norm() < 1.0 - 1e-12 {
            return false;
        }
        w *= qv;
    }
    false
}
