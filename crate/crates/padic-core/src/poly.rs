use crate::valuation::p_power;
use crate::{valuation, ExtInt, Prime};
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Zero;

/// Coefficients `c_0, c_1, ...` from small integers.
pub fn rational_poly(coeffs: &[i64]) -> Vec<BigRational> {
    coeffs
        .iter()
        .map(|&c| BigRational::from_integer(c.into()))
        .collect()
}

pub fn eval_poly(q: &[BigRational], x: &BigRational) -> BigRational {
    let mut acc = BigRational::zero();
    for c in q.iter().rev() {
        acc = acc * x + c;
    }
    acc
}

pub fn derivative(q: &[BigRational]) -> Vec<BigRational> {
    q.iter()
        .enumerate()
        .skip(1)
        .map(|(j, c)| c * BigRational::from_integer(BigInt::from(j)))
        .collect()
}

/// Writes `Q = p^v * Q~` with `Q~` p-integral and primitive. `None` for the
/// zero polynomial.
pub fn normalize_integral(q: &[BigRational], p: Prime) -> Option<(i64, Vec<BigRational>)> {
    let v = q.iter().map(|c| valuation(c, p)).min()?.finite()?;
    let scale = p_power(p, -v);
    Some((v, q.iter().map(|c| c * &scale).collect()))
}

/// Data for a cell containing exactly one simple root `rho`: on the cell
/// `|Q(x)|_p = p^{-scale} |x - rho|_p`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RootCell {
    pub scale: i64,
    /// One Newton step from the cell centre.
    pub root_approx: BigRational,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum CellOutcome {
    /// `|Q(x)|_p = p^{-valuation}` on the whole cell.
    ConstantAbs { valuation: ExtInt, abs: BigRational },
    SimpleRootInside(RootCell),
    Undetermined,
}

/// Behaviour of `|Q|_p` on the ball `a + p^K Z_p`.
pub fn poly_abs_on_cell(q: &[BigRational], a: &BigInt, k: u32, p: Prime) -> CellOutcome {
    let Some((vmin, qt)) = normalize_integral(q, p) else {
        return CellOutcome::ConstantAbs {
            valuation: ExtInt::Infinity,
            abs: BigRational::zero(),
        };
    };
    let k = k as i64;
    let ar = BigRational::from_integer(a.clone());
    let qa = eval_poly(&qt, &ar);
    let va = valuation(&qa, p);
    // max_{j>=1} |c_j| for the primitive form, as a valuation
    let vtail = qt.iter().skip(1).map(|c| valuation(c, p)).min();
    let tail_ok = match (vtail, va) {
        (None, _) => va.finite().is_some(),
        (Some(_), ExtInt::Infinity) => false,
        (Some(ExtInt::Infinity), ExtInt::Finite(_)) => true,
        (Some(ExtInt::Finite(vt)), ExtInt::Finite(v)) => k + vt > v,
    };
    if tail_ok {
        let v = va.finite().unwrap() + vmin;
        return CellOutcome::ConstantAbs {
            valuation: ExtInt::Finite(v),
            abs: p_power(p, -v),
        };
    }
    let dq = derivative(&qt);
    let da = eval_poly(&dq, &ar);
    if let ExtInt::Finite(e) = valuation(&da, p) {
        let inside = match va {
            ExtInt::Infinity => true,
            ExtInt::Finite(v) => v - e >= k,
        };
        if e < k && inside {
            let root_approx = &ar - &qa / &da;
            return CellOutcome::SimpleRootInside(RootCell {
                scale: vmin + e,
                root_approx,
            });
        }
    }
    CellOutcome::Undetermined
}
