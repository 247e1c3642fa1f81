use crate::common::{match_zeros, record};
use crate::report::{Check, CheckKind, ExperimentReport};
use crate::ExperimentError;
use num_complex::Complex64;
use operator::{build_br_matrix, RationalR, TruncatedOperator};
use qspecial::{EntireFunctionHandle, QBase};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use spectral::{eigenvalues, m_matrix, wronski_char_fn, PoleData, SpectralError};
use std::f64::consts::TAU;

type C = Complex64;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct GenericParams {
    pub seed: u64,
    /// Zeros of `R`.
    pub l: usize,
    /// Poles of `R`.
    pub r: usize,
    /// Marked poles.
    pub k: usize,
    pub n: usize,
    pub count: usize,
    pub tol: f64,
    pub vec_tol: f64,
    /// Multiplies the argument of the characteristic function.
    pub perturb: f64,
}

impl Default for GenericParams {
    fn default() -> Self {
        GenericParams { seed: 0, l: 2, r: 3, k: 2, n: 100, count: 4, tol: 1e-7, vec_tol: 1e-7, perturb: 1.0 }
    }
}

/// Shapes `(l, r, k)` cycled over seeds. `k = r > l` is left out: there
/// every truncation is nilpotent.
pub const GENERIC_SHAPES: [(usize, usize, usize); 10] =
    [(2, 2, 1), (2, 3, 2), (1, 2, 1), (3, 2, 2), (2, 3, 1), (3, 3, 2), (2, 2, 2), (3, 2, 1), (2, 1, 1), (1, 3, 1)];

impl GenericParams {
    pub fn for_seed(seed: u64) -> Self {
        let (l, r, k) = GENERIC_SHAPES[seed as usize % GENERIC_SHAPES.len()];
        GenericParams { seed, l, r, k, ..Default::default() }
    }
}

fn polar(rng: &mut ChaCha8Rng, lo: f64, hi: f64) -> C {
    C::from_polar(rng.gen_range(lo..hi), rng.gen_range(0.0..TAU))
}

/// Random `(R, q)`: poles inside the unit disk marked, one marked pole
/// outside it on every third seed, unmarked poles beyond `|z| = 1.4`.
fn draw(seed: u64, attempt: u64, l: usize, r: usize, k: usize) -> Result<(RationalR, QBase), ExperimentError> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed.wrapping_mul(0x9e37_79b9) ^ attempt);
    let q = polar(&mut rng, 0.2, 0.4);
    let beta = polar(&mut rng, 0.5, 1.5);
    let a = (0..l).map(|_| polar(&mut rng, 0.3, 1.5)).collect();
    let mut b: Vec<C> = (0..k)
        .map(|i| if i == 1 && seed % 3 == 2 { polar(&mut rng, q.norm() + 0.15, 0.95) } else { polar(&mut rng, 1.1, 2.2) })
        .collect();
    b.extend((0..r - k).map(|_| polar(&mut rng, 0.2, 0.7)));
    let marked = (0..r).map(|i| i < k).collect();
    Ok((RationalR::from_product(beta, 0, a, b, marked, 1.0)?, QBase::new(q)?))
}

/// Solution of `F(z) = 1/(1 - b_j z) + u Rh(z) F(qz)`, `Rh = R / beta`,
/// continued to all `u` away from `u = q^{-m}`.
struct ColumnSolution {
    a: Vec<C>,
    b: Vec<C>,
    bj: C,
    q: C,
    /// Taylor coefficients of `1 / (P(w) (1 - b_j w))`, `P(w) = prod Rh(q^m w)`.
    g: Vec<C>,
    /// Radius where the Taylor sum is used.
    near: f64,
}

impl ColumnSolution {
    fn new(a: &[C], b: &[C], bj: C, q: C) -> Self {
        let terms = 90;
        // -log P(w) = sum_n w^n (S_a(n) - S_b(n)) / (n (1 - q^n))
        let mut c = vec![C::new(0.0, 0.0); terms];
        for (n, cn) in c.iter_mut().enumerate().skip(1) {
            let sa: C = a.iter().map(|x| x.powi(n as i32)).sum();
            let sb: C = b.iter().map(|x| x.powi(n as i32)).sum();
            *cn = (sa - sb) / (n as f64 * (1.0 - q.powi(n as i32)));
        }
        let mut e = vec![C::new(0.0, 0.0); terms];
        e[0] = C::new(1.0, 0.0);
        for n in 1..terms {
            let s: C = (1..=n).map(|k| c[k] * e[n - k] * k as f64).sum();
            e[n] = s / n as f64;
        }
        let mut g = e.clone();
        for n in 1..terms {
            g[n] = e[n] + bj * g[n - 1];
        }
        let big = a.iter().chain(b).map(|x| x.norm()).fold(0.0, f64::max);
        ColumnSolution { a: a.to_vec(), b: b.to_vec(), bj, q, g, near: 0.35 / big }
    }

    fn rh(&self, z: C) -> C {
        let num: C = self.a.iter().map(|x| 1.0 - x * z).product();
        let den: C = self.b.iter().map(|x| 1.0 - x * z).product();
        num / den
    }

    fn p_inf(&self, w: C) -> C {
        let mut out = C::new(1.0, 0.0);
        let mut x = w;
        while x.norm() > 1e-18 {
            out *= self.rh(x);
            x *= self.q;
        }
        out
    }

    fn eval(&self, z: C, u: C) -> C {
        let mut acc = C::new(0.0, 0.0);
        let mut prod = C::new(1.0, 0.0);
        let mut un = C::new(1.0, 0.0);
        let mut x = z;
        while x.norm() > self.near {
            acc += un * prod / (1.0 - self.bj * x);
            prod *= self.rh(x);
            un *= u;
            x *= self.q;
        }
        let mut tail = C::new(0.0, 0.0);
        let mut wk = C::new(1.0, 0.0);
        let mut qk = C::new(1.0, 0.0);
        for gk in &self.g {
            tail += gk * wk / (1.0 - u * qk);
            wk *= x;
            qk *= self.q;
        }
        acc + un * prod * self.p_inf(x) * tail
    }
}

/// Null row vector `C` of `M(u)`, i.e. `sum_j C_j M_ji = 0`.
fn null_row(m: &[Vec<C>]) -> Vec<C> {
    match m.len() {
        1 => vec![C::new(1.0, 0.0)],
        2 => {
            let i = if m[0][0].norm() + m[1][0].norm() >= m[0][1].norm() + m[1][1].norm() { 0 } else { 1 };
            vec![m[1][i], -m[0][i]]
        }
        k => {
            // inverse iteration on M^T for the near-null direction
            let mut c = vec![C::new(1.0, 0.0); k];
            for _ in 0..4 {
                c = solve_transposed(m, &c);
                let nrm = c.iter().map(|x| x.norm_sqr()).sum::<f64>().sqrt();
                c.iter_mut().for_each(|x| *x /= nrm);
            }
            c
        }
    }
}

fn solve_transposed(m: &[Vec<C>], rhs: &[C]) -> Vec<C> {
    let k = m.len();
    let mut a: Vec<Vec<C>> = (0..k).map(|i| (0..k).map(|j| m[j][i]).collect()).collect();
    let mut x = rhs.to_vec();
    for col in 0..k {
        let piv = (col..k).max_by(|&i, &j| a[i][col].norm().partial_cmp(&a[j][col].norm()).unwrap()).unwrap();
        a.swap(col, piv);
        x.swap(col, piv);
        if a[col][col].norm() == 0.0 {
            a[col][col] = C::new(1e-300, 0.0);
        }
        for row in col + 1..k {
            let f = a[row][col] / a[col][col];
            for j in col..k {
                let v = a[col][j];
                a[row][j] -= f * v;
            }
            let v = x[col];
            x[row] -= f * v;
        }
    }
    for col in (0..k).rev() {
        let s: C = (col + 1..k).map(|j| a[col][j] * x[j]).sum();
        x[col] = (x[col] - s) / a[col][col];
    }
    x
}

/// `F(z) = sum_j lambda^{-1} C_j F_j(z, beta / lambda)` for eigenvalue `lambda`.
fn eigenfunction(data: &PoleData, q: QBase, lambda: C) -> Result<impl Fn(C) -> C, SpectralError> {
    let u = data.beta / lambda;
    let c = null_row(&m_matrix(data, q, u)?);
    let cols: Vec<ColumnSolution> = (0..data.b.len())
        .filter(|&i| data.marked[i])
        .map(|i| ColumnSolution::new(&data.a, &data.b, data.b[i], q.get()))
        .collect();
    Ok(move |z: C| cols.iter().zip(&c).map(|(f, cj)| cj * f.eval(z, u)).sum::<C>() / lambda)
}

/// Relative residual `|A v - lambda v| / (|lambda| |v|)` of the Taylor
/// coefficients of `f` on the unit circle.
fn vector_residual(t: &TruncatedOperator, lambda: C, f: impl Fn(C) -> C) -> f64 {
    let nodes = 512;
    let n = t.n;
    let vals: Vec<C> = (0..nodes).map(|j| f(C::from_polar(1.0, TAU * j as f64 / nodes as f64))).collect();
    let v: Vec<C> = (0..n)
        .map(|m| {
            let s: C = vals
                .iter()
                .enumerate()
                .map(|(j, x)| x * C::from_polar(1.0, -TAU * ((j * m) % nodes) as f64 / nodes as f64))
                .sum();
            s / nodes as f64
        })
        .collect();
    let vn = v.iter().map(|x| x.norm_sqr()).sum::<f64>().sqrt();
    let res = (0..n)
        .map(|i| {
            let av: C = (0..n).map(|j| t.get(i, j) * v[j]).sum();
            (av - lambda * v[i]).norm_sqr()
        })
        .sum::<f64>()
        .sqrt();
    res / (lambda.norm() * vn)
}

pub fn run_generic_r(pp: &GenericParams) -> Result<ExperimentReport, ExperimentError> {
    if pp.k == 0 || pp.k > pp.r {
        return Err(ExperimentError::Invalid("need 1 <= k <= r".into()));
    }
    if pp.k == pp.r && pp.l < pp.r {
        return Err(ExperimentError::Invalid("k = r > l has no nonzero spectrum".into()));
    }
    let mut rep = ExperimentReport::new("generic_R");
    rep.param("seed", pp.seed).param("l", pp.l).param("r", pp.r).param("k", pp.k).param("N", pp.n);
    rep.formula("det(1 - u B_R) = q-Wronskian of (u;q)_inf-cleared solutions, normalized at 0");

    let mut drawn = None;
    for attempt in 0..10 {
        let (rr, q) = draw(pp.seed, attempt, pp.l, pp.r, pp.k)?;
        match wronski_char_fn(&rr, q) {
            Ok(h) => {
                drawn = Some((rr, q, h, attempt));
                break;
            }
            Err(SpectralError::Resonance(_)) => continue,
            Err(e) => return Err(e.into()),
        }
    }
    let (rr, q, h, attempt) = drawn.ok_or_else(|| ExperimentError::Invalid("resonant after 10 draws".into()))?;
    let qv = q.get();
    rep.param("attempt", attempt).param("q", format!("{},{}", qv.re, qv.im));

    let t = build_br_matrix(&rr, q, pp.n)?;
    let sp = eigenvalues(&t)?;
    let perturb = pp.perturb;
    let hh = h.handle.clone();
    let handle = EntireFunctionHandle::new("h_R", move |u: C| hh.eval(u * perturb));
    let m = match_zeros(&mut rep, "Wronskian h", &handle, &sp, pp.count, pp.tol)?;
    record(&mut rep, &sp, &m, pp.count + 3);

    let data = PoleData::from_rational(&rr)?;
    let mut worst = 0.0f64;
    for &lam in sp.top(pp.count) {
        let f = eigenfunction(&data, q, lam * perturb)?;
        worst = worst.max(vector_residual(&t, lam, f));
    }
    rep.check(Check::at_most("reconstructed eigenvector residual", CheckKind::Identity, worst, pp.vec_tol));

    if pp.k == pp.r && pp.l == pp.r {
        let pf = rr.product.as_ref().expect("built from a product");
        let lead = pf.beta * pf.zeros.iter().product::<C>() / pf.poles.iter().product::<C>() * perturb;
        let mut err = 0.0f64;
        for j in 0..8 {
            let want = lead * qv.powi(j);
            let best = sp.eigenvalues.iter().take(12).map(|x| (x - want).norm()).fold(f64::INFINITY, f64::min);
            err = err.max(best / want.norm());
        }
        rep.check(Check::at_most("triangular geometric spectrum", CheckKind::Oracle, err, 1e-10));
        let near_family = |w: C| (0..40).map(|j| (w - lead * qv.powi(j)).norm() / w.norm()).fold(f64::INFINITY, f64::min);
        let zerr = m.zeros.expanded().iter().map(|z| near_family(1.0 / z)).fold(0.0, f64::max);
        rep.check(
            Check::at_most("triangular: Wronskian zeros on the geometric family", CheckKind::Oracle, zerr, 1e-10)
                .with_detail(format!("{} zeros", m.zeros.count)),
        );
    }
    Ok(rep.finish())
}
