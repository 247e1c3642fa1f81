use crate::SpectralError;
use num_complex::Complex64;
use operator::RationalR;
use qspecial::{basic_phi, cleared_bailey, phi_solution, qpoch_inf, Approx, EntireFunctionHandle, QBase, Variant};
use std::sync::Arc;

type C = Complex64;

/// A characteristic function `u -> det(1 - u B)` with its provenance.
#[derive(Debug, Clone)]
pub struct CharFnResult {
    pub handle: EntireFunctionHandle,
    pub construction: String,
    /// `|h(0) - 1|`.
    pub normalization_error: f64,
}

impl CharFnResult {
    pub fn new(handle: EntireFunctionHandle, construction: impl Into<String>) -> Self {
        let normalization_error = (handle.value(C::new(0.0, 0.0)) - 1.0).norm();
        CharFnResult {
            handle,
            construction: construction.into(),
            normalization_error,
        }
    }

    pub fn eval(&self, u: C) -> C {
        self.handle.value(u)
    }
}

/// `beta prod(1 - a_i z) / prod(1 - b_j z)` with marks, read off a [`RationalR`].
#[derive(Debug, Clone, PartialEq)]
pub struct PoleData {
    pub beta: C,
    pub a: Vec<C>,
    pub b: Vec<C>,
    pub marked: Vec<bool>,
}

impl PoleData {
    pub fn from_rational(r: &RationalR) -> Result<Self, SpectralError> {
        let pf = r
            .product
            .as_ref()
            .ok_or_else(|| SpectralError::InvalidInput("R has no product form".into()))?;
        if pf.origin_order != 0 {
            return Err(SpectralError::InvalidInput(format!(
                "R has a pole of order {} at the origin; use the confluent forms",
                pf.origin_order
            )));
        }
        Ok(PoleData {
            beta: pf.beta,
            a: pf.zeros.clone(),
            b: pf.poles.clone(),
            marked: pf.marked.clone(),
        })
    }

    fn marked_indices(&self) -> Vec<usize> {
        (0..self.b.len()).filter(|&i| self.marked[i]).collect()
    }

    fn check(&self, q: QBase) -> Result<Vec<usize>, SpectralError> {
        let idx = self.marked_indices();
        if idx.is_empty() {
            return Err(SpectralError::InvalidInput("no marked poles".into()));
        }
        let lq = q.get().ln();
        for (x, &i) in idx.iter().enumerate() {
            for &j in &idx[x + 1..] {
                let t = self.b[j] / self.b[i];
                let n = (t.norm().ln() / lq.re).round();
                if n.abs() < 1e4 && (t - (lq * n).exp()).norm() <= 1e-10 * t.norm() {
                    return Err(SpectralError::Resonance(format!("b_{j}/b_{i} = q^{n}")));
                }
            }
        }
        Ok(idx)
    }
}

/// Determinant of a small dense matrix by partial-pivot elimination.
pub fn small_det(mut m: Vec<Vec<C>>) -> C {
    let n = m.len();
    let mut det = C::new(1.0, 0.0);
    for c in 0..n {
        let p = (c..n)
            .max_by(|&x, &y| m[x][c].norm().partial_cmp(&m[y][c].norm()).unwrap())
            .unwrap();
        if m[p][c].norm() == 0.0 {
            return C::new(0.0, 0.0);
        }
        if p != c {
            m.swap(p, c);
            det = -det;
        }
        det *= m[c][c];
        for r in c + 1..n {
            let f = m[r][c] / m[c][c];
            for k in c..n {
                let t = f * m[c][k];
                m[r][k] -= t;
            }
        }
    }
    det
}

fn det_approx(m: Vec<Vec<Approx>>) -> Approx {
    let rel = m
        .iter()
        .flatten()
        .map(|x| if x.value.norm() > 0.0 { x.err / x.value.norm() } else { 0.0 })
        .fold(0.0, f64::max);
    let k = m.len() as f64;
    // Hadamard-type scale of the determinant
    let scale: f64 = m.iter().map(|row| row.iter().map(|x| x.value.norm()).fold(0.0, f64::max)).product();
    let v = small_det(m.into_iter().map(|r| r.into_iter().map(|x| x.value).collect()).collect());
    Approx {
        value: v,
        err: (k * rel + 16.0 * f64::EPSILON) * scale,
    }
}

/// `det(1 - u B_R)` from the q-Wronskian of the power-behaviour solutions
/// attached to the marked poles.
///
/// With `w = beta u`, `g_i = (w; q)_inf S_i(w)` and `b'` the pole list with
/// unmarked entries divided by `q`, the function is
/// `det(b'_i^{-j} g_i(q^j w)) / (prod_{i<j} (1/b'_j - 1/b'_i) prod_{j=1}^{k-1} (q^j w; q)_inf)`.
/// The last product removes the zeros at `w = q^{-j}`, `j >= 1`, that every
/// column shares once `k >= 2`. When all poles are marked and `R` vanishes
/// at infinity the operator is quasi-nilpotent and the result is `1`.
pub fn wronski_char_fn(r: &RationalR, q: QBase) -> Result<CharFnResult, SpectralError> {
    let data = PoleData::from_rational(r)?;
    let idx = data.check(q)?;
    let k = idx.len();
    let rr = data.b.len();
    if k == rr && data.a.len() < rr {
        let h = EntireFunctionHandle::new("quasi-nilpotent", |_| Ok(Approx::exact(C::new(1.0, 0.0))));
        return Ok(CharFnResult::new(h, "wronskian: all poles marked, deg num < deg den"));
    }
    let qv = q.get();
    let shifted: Vec<C> = (0..rr).map(|m| if data.marked[m] { data.b[m] } else { data.b[m] / qv }).collect();
    let sols = idx
        .iter()
        .map(|&i| phi_solution(&data.a, &shifted, i, q))
        .collect::<Result<Vec<_>, _>>()?;
    let mut vander = C::new(1.0, 0.0);
    for x in 0..k {
        for y in x + 1..k {
            vander *= 1.0 / shifted[idx[y]] - 1.0 / shifted[idx[x]];
        }
    }
    let beta = data.beta;
    let sols = Arc::new(sols);
    let handle = EntireFunctionHandle::new("wronskian", move |u| {
        let w = beta * u;
        let mut rows = Vec::with_capacity(k);
        for j in 0..k {
            let qj = qv.powi(j as i32);
            let mut row = Vec::with_capacity(k);
            for s in sols.iter() {
                let g = s.cleared(qj * w)?;
                row.push(g.scale(s.base.powi(-(j as i32))));
            }
            rows.push(row);
        }
        let mut den = Approx::exact(vander);
        for j in 1..k {
            den = den * qpoch_inf(qv.powi(j as i32) * w, q);
        }
        Ok(det_approx(rows) / den)
    })
    .with_param("beta", beta)
    .with_param("q", qv);
    Ok(CharFnResult::new(handle, format!("wronskian k={k} l={} r={rr}", data.a.len())))
}

/// Bailey series inside `|u| < 1/2`, the cleared form divided by `(u; q)_inf` outside.
fn phi_b(a: &[C], b: &[C], q: QBase, u: C) -> Result<Approx, SpectralError> {
    if u.norm() < 0.5 {
        Ok(basic_phi(a, b, q, u, Variant::Bailey)?)
    } else {
        Ok(cleared_bailey(a, b, q, u)? / qpoch_inf(u, q))
    }
}

/// The `k x k` matrix whose determinant vanishes at `u = beta / lambda`.
///
/// `M_ii = phi(a/b_i; b_m/b_i; q, u)` and, for `j != i`, `M_ji` is the
/// first difference in `u` of the same series with the `j`-th lower
/// parameter replaced by `q b_j / b_i`, divided by `1 - b_j / b_i`.
pub fn m_matrix(data: &PoleData, q: QBase, u: C) -> Result<Vec<Vec<C>>, SpectralError> {
    let idx = data.check(q)?;
    let k = idx.len();
    let qv = q.get();
    let mut m = vec![vec![C::new(0.0, 0.0); k]; k];
    for (ci, &i) in idx.iter().enumerate() {
        let a: Vec<C> = data.a.iter().map(|x| x / data.b[i]).collect();
        for (cj, &j) in idx.iter().enumerate() {
            let others = (0..data.b.len()).filter(|&x| x != i);
            if i == j {
                let b: Vec<C> = others.map(|x| data.b[x] / data.b[i]).collect();
                m[cj][ci] = phi_b(&a, &b, q, u)?.value;
            } else {
                let b: Vec<C> = others
                    .map(|x| if x == j { qv * data.b[x] / data.b[i] } else { data.b[x] / data.b[i] })
                    .collect();
                let d = phi_b(&a, &b, q, u)?.value - phi_b(&a, &b, q, qv * u)?.value;
                m[cj][ci] = d / (1.0 - data.b[j] / data.b[i]);
            }
        }
    }
    Ok(m)
}

/// `(w; q)_inf det M(w)` at `w = beta u`, which agrees with [`wronski_char_fn`].
pub fn m_matrix_char_fn(r: &RationalR, q: QBase) -> Result<CharFnResult, SpectralError> {
    let data = PoleData::from_rational(r)?;
    data.check(q)?;
    let beta = data.beta;
    let handle = EntireFunctionHandle::new("m-matrix", move |u| {
        let w = beta * u;
        let m = m_matrix(&data, q, w).map_err(|e| match e {
            SpectralError::Function(f) => f,
            other => qspecial::QError::Invalid(other.to_string()),
        })?;
        let d = small_det(m);
        Ok(Approx {
            value: d,
            err: 1e-13 * d.norm(),
        } * qpoch_inf(w, q))
    })
    .with_param("beta", beta);
    Ok(CharFnResult::new(handle, "m-matrix determinant"))
}
