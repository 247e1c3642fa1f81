use crate::{Approx, QError, C64};

/// Truncation policy for power-series evaluation.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SeriesControl {
    pub eps: f64,
    /// Consecutive negligible terms required before stopping.
    pub quiet_terms: usize,
    pub max_terms: usize,
    /// Lower bound on the number of terms summed.
    pub min_terms: usize,
}

impl Default for SeriesControl {
    fn default() -> Self {
        SeriesControl {
            eps: crate::DEFAULT_EPS,
            quiet_terms: 5,
            max_terms: 20_000,
            min_terms: 0,
        }
    }
}

/// Sums `sum_n t_n` with `t_0 = 1` and `t_{n+1} = ratio(n) t_n`.
///
/// `bound(n)` must dominate `|t_{m+1} / t_m|` for every `m >= n`; it is used
/// for the tail estimate `|t_n| / (1 - rho)` once `rho < 1`.
pub fn sum_series(
    mut ratio: impl FnMut(usize) -> C64,
    bound: impl Fn(usize) -> f64,
    ctl: SeriesControl,
) -> Result<Approx, QError> {
    let mut t = C64::new(1.0, 0.0);
    let mut s = C64::new(0.0, 0.0);
    let mut abs_sum = 0.0;
    let mut quiet = 0;
    for n in 0..ctl.max_terms {
        s += t;
        abs_sum += t.norm();
        let scale = s.norm().max(f64::MIN_POSITIVE);
        if t.norm() <= ctl.eps * scale {
            quiet += 1;
        } else {
            quiet = 0;
        }
        let next = t * ratio(n);
        let round = 4.0 * f64::EPSILON * (abs_sum + (n as f64 + 1.0) * s.norm());
        if next == C64::new(0.0, 0.0) && n + 1 >= ctl.min_terms {
            return Ok(Approx { value: s, err: round });
        }
        if quiet >= ctl.quiet_terms && n + 1 >= ctl.min_terms {
            let rho = bound(n + 1);
            if rho < 1.0 {
                let tail = next.norm() / (1.0 - rho);
                if tail <= ctl.eps * scale || tail == 0.0 {
                    return Ok(Approx { value: s, err: tail + round });
                }
            }
        }
        if !next.re.is_finite() || !next.im.is_finite() {
            return Err(QError::NoConvergence(n));
        }
        t = next;
    }
    Err(QError::NoConvergence(ctl.max_terms))
}
