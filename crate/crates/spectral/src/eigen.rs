use crate::dd::Cdd;
use crate::scalar::Scalar;
use crate::SpectralError;
use num_complex::Complex64;
use operator::TruncatedOperator;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
pub enum Precision {
    Double,
    #[default]
    DoubleDouble,
}

impl std::str::FromStr for Precision {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, String> {
        match s.to_ascii_lowercase().as_str() {
            "double" | "f64" | "binary64" => Ok(Precision::Double),
            "dd" | "double-double" | "doubledouble" => Ok(Precision::DoubleDouble),
            other => Err(format!("unknown precision '{other}'")),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Spectrum {
    /// Sorted by decreasing modulus, then argument.
    pub eigenvalues: Vec<Complex64>,
    /// `||T v - lambda v|| / ||v||` for a computed eigenvector `v`.
    pub residuals: Vec<f64>,
    /// Index pairs of equal eigenvalues whose eigenvectors are parallel.
    pub defective_pairs: Vec<(usize, usize)>,
    /// Frobenius norm of the input.
    pub norm: f64,
    pub precision: Precision,
    pub qr_iterations: usize,
}

impl Spectrum {
    /// Largest residual relative to `||T||`.
    pub fn max_backward_error(&self) -> f64 {
        let n = self.norm.max(f64::MIN_POSITIVE);
        self.residuals.iter().map(|r| r / n).fold(0.0, f64::max)
    }

    pub fn top(&self, k: usize) -> &[Complex64] {
        &self.eigenvalues[..k.min(self.eigenvalues.len())]
    }
}

pub fn eigenvalues(t: &TruncatedOperator) -> Result<Spectrum, SpectralError> {
    eigenvalues_with(t, Precision::default())
}

pub fn eigenvalues_with(t: &TruncatedOperator, precision: Precision) -> Result<Spectrum, SpectralError> {
    if t.entries.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
        return Err(SpectralError::InvalidInput("matrix has non-finite entries".into()));
    }
    match precision {
        Precision::Double => solve::<Complex64>(t, precision),
        Precision::DoubleDouble => solve::<Cdd>(t, precision),
    }
}

type Mat<S> = Vec<Vec<S>>;

fn solve<S: Scalar>(t: &TruncatedOperator, precision: Precision) -> Result<Spectrum, SpectralError> {
    let n = t.n;
    let norm = t.frobenius();
    if n == 0 {
        return Ok(Spectrum {
            eigenvalues: vec![],
            residuals: vec![],
            defective_pairs: vec![],
            norm,
            precision,
            qr_iterations: 0,
        });
    }
    let entry = |i: usize, j: usize| -> S {
        let hi = S::from_c64(t.entries[i * n + j]);
        match &t.lo {
            Some(lo) => hi + S::from_c64(lo[i * n + j]),
            None => hi,
        }
    };
    let a: Mat<S> = (0..n).map(|i| (0..n).map(|j| entry(i, j)).collect()).collect();
    let (h, reflectors) = hessenberg(a.clone());
    let mut work = h.clone();
    let (mut lambda, iters) = hessenberg_qr(&mut work)?;
    lambda.sort_by(|x, y| order(x.to_c64(), y.to_c64()));

    let hnorm = norm.max(f64::MIN_POSITIVE);
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed);
    let mut vecs: Vec<Vec<Complex64>> = Vec::with_capacity(n);
    let mut residuals = Vec::with_capacity(n);
    for &l in &lambda {
        let start: Vec<S> = (0..n)
            .map(|_| S::from_c64(Complex64::new(rng.gen_range(0.5..1.5), rng.gen_range(-0.5..0.5))))
            .collect();
        let y = inverse_iteration(&h, l, start, hnorm);
        let v = apply_q(&reflectors, y);
        let v64: Vec<Complex64> = v.iter().map(|z| z.to_c64()).collect();
        let vn = v64.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        let mut res = 0.0;
        for i in 0..n {
            let mut acc = -l * v[i];
            for j in 0..n {
                acc += a[i][j] * v[j];
            }
            res += acc.to_c64().norm_sqr();
        }
        residuals.push(res.sqrt() / vn);
        vecs.push(v64.into_iter().map(|z| z / vn).collect());
    }

    let eig: Vec<Complex64> = lambda.iter().map(|z| z.to_c64()).collect();
    let mut defective_pairs = Vec::new();
    let cluster = 1e3 * S::UNIT_ROUNDOFF.sqrt() * hnorm;
    for i in 0..n {
        for j in i + 1..n {
            if (eig[i] - eig[j]).norm() > cluster {
                continue;
            }
            let dot: Complex64 = vecs[i].iter().zip(&vecs[j]).map(|(x, y)| x.conj() * y).sum();
            if dot.norm() > 1.0 - 1e-6 {
                defective_pairs.push((i, j));
            }
        }
    }
    Ok(Spectrum {
        eigenvalues: eig,
        residuals,
        defective_pairs,
        norm,
        precision,
        qr_iterations: iters,
    })
}

fn order(x: Complex64, y: Complex64) -> std::cmp::Ordering {
    y.norm()
        .partial_cmp(&x.norm())
        .unwrap_or(std::cmp::Ordering::Equal)
        .then(x.arg().partial_cmp(&y.arg()).unwrap_or(std::cmp::Ordering::Equal))
}

/// Householder reduction `A = Q H Q^*`; returns `H` and the reflectors
/// `(k, v)` acting on rows `k + 1..`.
fn hessenberg<S: Scalar>(mut a: Mat<S>) -> (Mat<S>, Vec<(usize, Vec<S>)>) {
    let n = a.len();
    let mut refl = Vec::new();
    for k in 0..n.saturating_sub(2) {
        let scale = (k + 1..n).map(|i| a[i][k].abs1()).fold(0.0, f64::max);
        if scale < SAFE_MIN {
            // nothing representable to reflect; flush so 1/scale stays finite
            for row in a.iter_mut().skip(k + 1) {
                row[k] = S::default();
            }
            continue;
        }
        let inv = 1.0 / scale;
        let mut v: Vec<S> = (k + 1..n).map(|i| a[i][k].scale_f64(inv)).collect();
        let mut nrm2 = S::default();
        for x in &v {
            nrm2 += *x * x.conj();
        }
        let xnorm = sqrt_real(nrm2);
        let x0 = v[0];
        let x0m = x0.modulus();
        let phase = if x0m.is_zero() { S::from_c64(Complex64::new(1.0, 0.0)) } else { x0 / x0m };
        // v = x + phase |x| e_1, reflector I - 2 v v^* / (v^* v)
        v[0] = x0 + phase * xnorm;
        let mut vv = S::default();
        for x in &v {
            vv += x.conj() * *x;
        }
        if vv.is_zero() {
            continue;
        }
        let two_over = S::from_c64(Complex64::new(2.0, 0.0)) / vv;
        // left: rows k+1.., columns k..
        for j in k..n {
            let mut s = S::default();
            for (i, x) in v.iter().enumerate() {
                s += x.conj() * a[k + 1 + i][j];
            }
            let s = s * two_over;
            for (i, x) in v.iter().enumerate() {
                a[k + 1 + i][j] -= *x * s;
            }
        }
        // right: all rows, columns k+1..
        for row in a.iter_mut() {
            let mut s = S::default();
            for (i, x) in v.iter().enumerate() {
                s += row[k + 1 + i] * *x;
            }
            let s = s * two_over;
            for (i, x) in v.iter().enumerate() {
                row[k + 1 + i] -= s * x.conj();
            }
        }
        for i in k + 2..n {
            a[i][k] = S::default();
        }
        let vs: Vec<S> = v.iter().map(|x| *x * sqrt_real(two_over)).collect();
        refl.push((k, vs));
    }
    (a, refl)
}

fn sqrt_real<S: Scalar>(x: S) -> S {
    // x is real and nonnegative; modulus of a square root has modulus sqrt|x|
    let m = x.modulus();
    if m.is_zero() {
        return m;
    }
    // Newton on y^2 = m starting from the binary64 root
    let y0 = S::from_c64(Complex64::new(m.to_c64().re.sqrt(), 0.0));
    let half = S::from_c64(Complex64::new(0.5, 0.0));
    let y1 = (y0 + m / y0) * half;
    (y1 + m / y1) * half
}

/// `Q y` for `Q = H_1 H_2 ...` with `H = I - v v^*` (`v` prescaled).
fn apply_q<S: Scalar>(refl: &[(usize, Vec<S>)], mut y: Vec<S>) -> Vec<S> {
    for (k, v) in refl.iter().rev() {
        let mut s = S::default();
        for (i, x) in v.iter().enumerate() {
            s += x.conj() * y[k + 1 + i];
        }
        for (i, x) in v.iter().enumerate() {
            y[k + 1 + i] -= *x * s;
        }
    }
    y
}

/// Below this, `1 / x` can overflow.
const SAFE_MIN: f64 = f64::MIN_POSITIVE * 4.0 / f64::EPSILON;

/// Complex Givens rotation `[c s; -conj(s) c]` sending `(f, g)` to `(r, 0)`.
fn givens<S: Scalar>(f: S, g: S) -> (S, S) {
    let scale = f.abs1().max(g.abs1());
    if g.is_zero() || scale < SAFE_MIN {
        return (S::from_c64(Complex64::new(1.0, 0.0)), S::default());
    }
    let (fs, gs) = (f.scale_f64(1.0 / scale), g.scale_f64(1.0 / scale));
    let fm = fs.modulus();
    let gm = gs.modulus();
    if fm.is_zero() {
        return (S::default(), gs.conj() / gm);
    }
    let r = sqrt_real(fm * fm + gm * gm);
    let c = fm / r;
    let s = (fs / fm) * gs.conj() / r;
    (c, s)
}

/// Eigenvalues of an upper Hessenberg matrix by single-shift QR with
/// Wilkinson shifts and the Ahues-Tisseur deflation test.
fn hessenberg_qr<S: Scalar>(h: &mut Mat<S>) -> Result<(Vec<S>, usize), SpectralError> {
    let n = h.len();
    let ulp = 2.0 * S::UNIT_ROUNDOFF;
    let smlnum = f64::MIN_POSITIVE * (n as f64 / ulp);
    let mut out = vec![S::default(); n];
    let mut hi = n as isize - 1;
    let mut total = 0usize;
    let max_iter = 30 * n.max(10);
    let mut its = 0usize;
    while hi >= 0 {
        let hu = hi as usize;
        // find the active block [lo, hi]
        let mut lo = hu;
        while lo > 0 {
            let k = lo;
            let sub = h[k][k - 1].abs1();
            if sub <= smlnum {
                break;
            }
            let mut tst = h[k - 1][k - 1].abs1() + h[k][k].abs1();
            if tst == 0.0 {
                if k >= 2 {
                    tst += h[k - 1][k - 2].abs1();
                }
                if k + 1 < n {
                    tst += h[k + 1][k].abs1();
                }
            }
            if sub <= ulp * tst {
                let ab = sub.max(h[k - 1][k].abs1());
                let ba = sub.min(h[k - 1][k].abs1());
                let diff = (h[k - 1][k - 1] - h[k][k]).abs1();
                let aa = h[k][k].abs1().max(diff);
                let bb = h[k][k].abs1().min(diff);
                let s = aa + ab;
                if ba * (ab / s) <= smlnum.max(ulp * (bb * (aa / s))) {
                    break;
                }
            }
            lo -= 1;
        }
        if lo > 0 {
            h[lo][lo - 1] = S::default();
        }
        if lo == hu {
            out[hu] = h[hu][hu];
            hi -= 1;
            its = 0;
            continue;
        }
        if its >= max_iter {
            return Err(SpectralError::NoConvergence(total));
        }
        its += 1;
        total += 1;
        let shift = if its.is_multiple_of(10) {
            // exceptional shift
            h[hu][hu] + S::from_c64(Complex64::new(0.75 * h[hu][hu - 1].abs1(), 0.0))
        } else {
            wilkinson(h[hu - 1][hu - 1], h[hu - 1][hu], h[hu][hu - 1], h[hu][hu])
        };
        qr_sweep(h, lo, hu, shift);
    }
    Ok((out, total))
}

fn wilkinson<S: Scalar>(a: S, b: S, c: S, d: S) -> S {
    // eigenvalue of [[a, b], [c, d]] nearest d, as d + mu with mu in binary64;
    // the block is rescaled to order one so that graded tails do not underflow
    let t = ((a - d).to_c64()) * 0.5;
    let (b, c) = (b.to_c64(), c.to_c64());
    let (nb, nc) = (b.norm(), c.norm());
    let geo = nb.sqrt() * nc.sqrt();
    let sc = t.norm().max(geo);
    if sc == 0.0 || !sc.is_finite() {
        return d;
    }
    let t = t / sc;
    let bc = if geo == 0.0 { Complex64::new(0.0, 0.0) } else { (b / nb) * (c / nc) * ((geo / sc) * (geo / sc)) };
    let disc = (t * t + bc).sqrt();
    let den = if (t + disc).norm() >= (t - disc).norm() { t + disc } else { t - disc };
    let mu = if den.norm() == 0.0 { Complex64::new(0.0, 0.0) } else { -bc / den * sc };
    d + S::from_c64(mu)
}

fn qr_sweep<S: Scalar>(h: &mut Mat<S>, lo: usize, hi: usize, shift: S) {
    let mut f = h[lo][lo] - shift;
    let mut g = h[lo + 1][lo];
    for k in lo..hi {
        if k > lo {
            f = h[k][k - 1];
            g = h[k + 1][k - 1];
        }
        let (c, s) = givens(f, g);
        let sc = s.conj();
        // rows k, k+1
        let j0 = if k > lo { k - 1 } else { k };
        for j in j0..=hi {
            let x = h[k][j];
            let y = h[k + 1][j];
            h[k][j] = c * x + s * y;
            h[k + 1][j] = c * y - sc * x;
        }
        if k > lo {
            h[k + 1][k - 1] = S::default();
        }
        // columns k, k+1
        let i1 = (k + 2).min(hi);
        for row in h.iter_mut().take(i1 + 1).skip(lo) {
            let x = row[k];
            let y = row[k + 1];
            row[k] = c * x + sc * y;
            row[k + 1] = c * y - s * x;
        }
    }
}

/// Two steps of inverse iteration on the Hessenberg matrix.
fn inverse_iteration<S: Scalar>(h: &Mat<S>, lambda: S, mut x: Vec<S>, norm: f64) -> Vec<S> {
    let n = h.len();
    let tiny = S::UNIT_ROUNDOFF * norm;
    for _ in 0..3 {
        // LU of H - lambda with adjacent-row pivoting
        let mut u: Mat<S> = h.clone();
        for (i, row) in u.iter_mut().enumerate() {
            row[i] -= lambda;
        }
        let mut b = x.clone();
        for k in 0..n - 1 {
            if u[k + 1][k].abs1() > u[k][k].abs1() {
                u.swap(k, k + 1);
                b.swap(k, k + 1);
            }
            if u[k][k].abs1() <= tiny {
                u[k][k] = S::from_c64(Complex64::new(tiny.max(f64::MIN_POSITIVE), 0.0));
            }
            let m = u[k + 1][k] / u[k][k];
            if !m.is_zero() {
                let (top, bot) = u.split_at_mut(k + 1);
                for j in k..n {
                    let t = m * top[k][j];
                    bot[0][j] -= t;
                }
                let bk = b[k];
                b[k + 1] -= m * bk;
            }
        }
        if u[n - 1][n - 1].abs1() <= tiny {
            u[n - 1][n - 1] = S::from_c64(Complex64::new(tiny.max(f64::MIN_POSITIVE), 0.0));
        }
        for k in (0..n).rev() {
            let mut s = b[k];
            for j in k + 1..n {
                s -= u[k][j] * b[j];
            }
            b[k] = s / u[k][k];
        }
        let scale = b.iter().map(|z| z.abs1()).fold(0.0, f64::max);
        if !(scale > 0.0) || !scale.is_finite() {
            break;
        }
        x = b.into_iter().map(|z| z.scale_f64(1.0 / scale)).collect();
    }
    x
}

#[cfg(test)]
mod tests {
    use super::*;
    use operator::Provenance;

    fn op(n: usize, f: impl Fn(usize, usize) -> Complex64) -> TruncatedOperator {
        TruncatedOperator::from_fn(n, Provenance::new("test"), f)
    }

    #[test]
    fn diagonal() {
        let d = [0.5, 3.0, 1.0];
        let t = op(3, |i, j| Complex64::new(if i == j { d[i] } else { 0.0 }, 0.0));
        for p in [Precision::Double, Precision::DoubleDouble] {
            let s = eigenvalues_with(&t, p).unwrap();
            let got: Vec<f64> = s.eigenvalues.iter().map(|z| z.re).collect();
            assert_eq!(got, vec![3.0, 1.0, 0.5]);
        }
    }

    #[test]
    fn nilpotent_pair_is_flagged() {
        let t = op(2, |i, j| Complex64::new(if i == 0 && j == 1 { 1.0 } else { 0.0 }, 0.0));
        let s = eigenvalues(&t).unwrap();
        assert!(s.eigenvalues.iter().all(|z| z.norm() == 0.0));
        assert_eq!(s.defective_pairs, vec![(0, 1)]);
    }

    #[test]
    fn companion_roots() {
        // companion matrix of (x-1)(x-2)(x-3)(x-4) = x^4 - 10x^3 + 35x^2 - 50x + 24
        let c = [-24.0, 50.0, -35.0, 10.0];
        let t = op(4, |i, j| {
            let v = if i == 0 { c[3 - j] } else if j + 1 == i { 1.0 } else { 0.0 };
            Complex64::new(v, 0.0)
        });
        let s = eigenvalues(&t).unwrap();
        for (k, z) in s.eigenvalues.iter().enumerate() {
            assert!((z - (4 - k) as f64).norm() < 1e-26, "{z}");
        }
        assert!(s.max_backward_error() < 1e-13);
        assert!(s.defective_pairs.is_empty());
    }

    #[test]
    fn graded_matrix_small_eigenvalues() {
        // a_{mn} = x^{min(m,n)} has eigenvalue structure resolved far below 1e-16
        let t = op(30, |m, n| Complex64::new(0.1f64.powi(m.min(n) as i32) * 0.5f64.powi((m + n) as i32), 0.0));
        let dd = eigenvalues_with(&t, Precision::DoubleDouble).unwrap();
        assert!(dd.max_backward_error() < 1e-14);
        // product of eigenvalues is the determinant; the trace is exact
        let trace: Complex64 = (0..30).map(|i| t.get(i, i)).sum();
        let sum: Complex64 = dd.eigenvalues.iter().sum();
        assert!((trace - sum).norm() < 1e-15);
    }

    #[test]
    fn deeply_graded_tridiagonal_converges() {
        // trailing entries near 1e-175: the shift must not underflow
        let g = |n: usize| {
            op(n, |i, j| {
                let v = match i.abs_diff(j) {
                    0 => -1e-3f64.powi(i as i32),
                    1 => 0.09 * 1e-3f64.powi(i.min(j) as i32) * 0.03,
                    _ => 0.0,
                };
                Complex64::new(v, 0.0)
            })
        };
        let big = eigenvalues(&g(60)).unwrap();
        assert!(big.eigenvalues.iter().all(|z| z.re.is_finite()));
        let small = eigenvalues(&g(20)).unwrap();
        for (a, b) in big.eigenvalues.iter().zip(&small.eigenvalues).take(6) {
            assert!((a - b).norm() <= 1e-12 * b.norm(), "{a} {b}");
        }
    }

    #[test]
    fn subnormal_column_is_flushed() {
        let t = op(12, |i, j| {
            let v = if i == j { 0.5f64.powi(i as i32) } else if j == 0 && i >= 2 { 3e-321 } else { 0.0 };
            Complex64::new(v, 0.0)
        });
        let s = eigenvalues(&t).unwrap();
        for (k, z) in s.eigenvalues.iter().enumerate() {
            assert!((z - 0.5f64.powi(k as i32)).norm() < 1e-15, "{z}");
        }
    }
}
