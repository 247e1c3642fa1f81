use crate::SpectralError;
use num_complex::Complex64;
use qspecial::EntireFunctionHandle;
use serde::{Deserialize, Serialize};
use std::f64::consts::TAU;

type C = Complex64;

const MIN_NODES: usize = 256;
const MAX_NODES: usize = 1 << 15;
/// Zeros per annulus before it is split.
const MAX_PER_ANNULUS: i64 = 4;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FoundZero {
    pub value: C,
    pub multiplicity: usize,
    /// `|f(value)|`.
    pub residual: f64,
    /// Two or more computed roots within a relative `1e-6` were merged here.
    pub clustered: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ZeroSet {
    pub zeros: Vec<FoundZero>,
    /// Winding number of `f` on the outer contour.
    pub count: usize,
    /// Radius actually used (possibly perturbed off a near-zero).
    pub radius: f64,
    /// `sum multiplicity == count`.
    pub certified: bool,
}

impl ZeroSet {
    /// Zeros repeated by multiplicity, in increasing modulus.
    pub fn expanded(&self) -> Vec<C> {
        let mut v: Vec<C> = self
            .zeros
            .iter()
            .flat_map(|z| std::iter::repeat_n(z.value, z.multiplicity))
            .collect();
        v.sort_by(|a, b| a.norm().partial_cmp(&b.norm()).unwrap());
        v
    }
}

/// Samples of `log f - i n theta` on a circle, `theta_j = 2 pi j / M`.
struct Contour {
    r: f64,
    winding: i64,
    vals: Vec<C>,
    ltilde: Vec<C>,
    fmax: f64,
}

impl Contour {
    fn build(r: f64, vals: Vec<C>, l: &[C], n: i64) -> Contour {
        let m = vals.len();
        let fmax = vals.iter().map(|v| v.norm()).fold(0.0, f64::max);
        let ltilde = l
            .iter()
            .enumerate()
            .map(|(j, x)| x - C::new(0.0, n as f64 * TAU * j as f64 / m as f64))
            .collect();
        Contour { r, winding: n, vals, ltilde, fmax }
    }

    /// Doubles the node count; false if the winding number changes.
    fn refine(&mut self, f: &EntireFunctionHandle) -> Result<bool, SpectralError> {
        let m = self.vals.len();
        if 2 * m > MAX_NODES {
            return Ok(false);
        }
        let vals = interleave(f, self.r, std::mem::take(&mut self.vals))?;
        let (l, w, _) = unwrap(&vals);
        let same = (w - self.winding as f64).abs() < 1e-6;
        *self = Contour::build(self.r, vals, &l, self.winding);
        Ok(same)
    }
}

fn interleave(f: &EntireFunctionHandle, r: f64, vals: Vec<C>) -> Result<Vec<C>, SpectralError> {
    let m = vals.len();
    let mid = (0..m)
        .map(|j| -> Result<C, SpectralError> {
            Ok(f.eval(C::from_polar(r, TAU * (2 * j + 1) as f64 / (2 * m) as f64))?.value)
        })
        .collect::<Result<Vec<_>, _>>()?;
    Ok(vals.into_iter().zip(mid).flat_map(|(a, b)| [a, b]).collect())
}

fn sample(f: &EntireFunctionHandle, r: f64, m: usize) -> Result<Vec<C>, SpectralError> {
    (0..m)
        .map(|j| {
            let v = f.eval(C::from_polar(r, TAU * j as f64 / m as f64))?.value;
            if v.re.is_finite() && v.im.is_finite() {
                Ok(v)
            } else {
                Err(SpectralError::InvalidInput(format!("non-finite value on |u| = {r}")))
            }
        })
        .collect()
}

/// Unwrapped logarithm, the winding number and the largest phase step.
fn unwrap(vals: &[C]) -> (Vec<C>, f64, f64) {
    let m = vals.len();
    let mut l = Vec::with_capacity(m);
    let mut cur = vals[0].ln();
    let mut jump = 0.0f64;
    l.push(cur);
    for j in 1..=m {
        let d = (vals[j % m] / vals[j - 1]).ln();
        jump = jump.max(d.im.abs());
        cur += d;
        if j < m {
            l.push(cur);
        }
    }
    let w = (cur - l[0]).im / TAU;
    (l, w, jump)
}

fn contour_exact(f: &EntireFunctionHandle, r: f64) -> Result<Option<Contour>, SpectralError> {
    let mut m = MIN_NODES;
    let mut vals = sample(f, r, m)?;
    let mut prev: Option<i64> = None;
    loop {
        if vals.iter().any(|v| v.norm() == 0.0) {
            return Ok(None);
        }
        let (l, w, jump) = unwrap(&vals);
        let n = w.round();
        let ok = jump < 1.0 && (w - n).abs() < 1e-6;
        if ok && prev == Some(n as i64) {
            return Ok(Some(Contour::build(r, vals, &l, n as i64)));
        }
        prev = if ok { Some(n as i64) } else { None };
        if 2 * m > MAX_NODES {
            return Ok(None);
        }
        vals = interleave(f, r, vals)?;
        m *= 2;
    }
}

/// A certified contour at `r`, moving the radius by up to about 1% when the
/// winding number does not settle (a zero close to the circle).
fn contour(f: &EntireFunctionHandle, r: f64) -> Result<Contour, SpectralError> {
    for t in [0.0, 1.0, -1.0, 2.0, -2.0, 3.0] {
        let rr = r * (1.0 + 0.003 * t);
        if let Some(c) = contour_exact(f, rr)? {
            return Ok(c);
        }
    }
    let vals = sample(f, r, MAX_NODES)?;
    let (_, w, _) = unwrap(&vals);
    Err(SpectralError::NonIntegralWinding { radius: r, value: w })
}

/// `sum z^k / c^k` over the zeros inside the contour, `k = 1..=kmax`.
fn power_sums(ct: &Contour, kmax: usize, c: f64, stride: usize) -> Vec<C> {
    let m = ct.ltilde.len() / stride;
    let rho = ct.r / c;
    (1..=kmax)
        .map(|k| {
            let mut acc = C::new(0.0, 0.0);
            for j in 0..m {
                acc += C::from_polar(1.0, TAU * (k * j) as f64 / m as f64) * ct.ltilde[j * stride];
            }
            -(k as f64) * rho.powi(k as i32) * acc / m as f64
        })
        .collect()
}

/// Polynomial with the given power sums (Newton identities), ascending coefficients.
fn from_power_sums(s: &[C]) -> Vec<C> {
    let n = s.len();
    let mut e = vec![C::new(1.0, 0.0)];
    for k in 1..=n {
        let mut acc = C::new(0.0, 0.0);
        for i in 1..=k {
            let sign = if i % 2 == 1 { 1.0 } else { -1.0 };
            acc += sign * e[k - i] * s[i - 1];
        }
        e.push(acc / k as f64);
    }
    // prod (w - z_i) = sum_k (-1)^k e_k w^{n-k}
    (0..=n)
        .map(|deg| {
            let k = n - deg;
            if k.is_multiple_of(2) {
                e[k]
            } else {
                -e[k]
            }
        })
        .collect()
}

fn newton_polish(f: &EntireFunctionHandle, z0: C, limit: f64, stop: f64) -> C {
    let mut z = z0;
    let mut fz = f.value(z);
    for _ in 0..50 {
        if fz.norm() <= stop {
            break;
        }
        let h = 1e-7 * z.norm().max(1e-300);
        let d = (f.value(z + h) - f.value(z - h)) / (2.0 * h);
        if !(d.norm() > 0.0) {
            break;
        }
        let step = fz / d;
        let zn = z - step;
        let fzn = f.value(zn);
        if !(fzn.norm() < fz.norm()) || (zn - z0).norm() > limit {
            break;
        }
        z = zn;
        fz = fzn;
        if step.norm() <= 1e-15 * z.norm() {
            break;
        }
    }
    z
}

/// Winding number of `f` on a small circle around `z`.
fn local_winding(f: &EntireFunctionHandle, z: C, rho: f64) -> Option<i64> {
    let mut m = 64;
    let mut prev = None;
    while m <= 4096 {
        let vals: Vec<C> = (0..m).map(|j| f.value(z + C::from_polar(rho, TAU * j as f64 / m as f64))).collect();
        if vals.iter().any(|v| !v.re.is_finite() || v.norm() == 0.0) {
            return None;
        }
        let (_, w, jump) = unwrap(&vals);
        if jump < 1.0 && (w - w.round()).abs() < 1e-6 {
            if prev == Some(w.round() as i64) {
                return prev;
            }
            prev = Some(w.round() as i64);
        } else {
            prev = None;
        }
        m *= 2;
    }
    None
}

fn annulus_roots(
    f: &EntireFunctionHandle,
    inner: &mut Contour,
    outer: &mut Contour,
    depth: usize,
    stop: f64,
    out: &mut Vec<C>,
) -> Result<(), SpectralError> {
    let n = outer.winding - inner.winding;
    if n <= 0 {
        return Ok(());
    }
    if n > MAX_PER_ANNULUS && depth < 40 && outer.r / inner.r > 1.0 + 1e-4 {
        let mut mid = contour(f, (inner.r * outer.r).sqrt())?;
        if mid.r > inner.r && mid.r < outer.r {
            annulus_roots(f, inner, &mut mid, depth + 1, stop, out)?;
            return annulus_roots(f, &mut mid, outer, depth + 1, stop, out);
        }
    }
    let n = n as usize;
    let c = outer.r;
    let sums = |inner: &Contour, outer: &Contour, stride: usize| -> Vec<C> {
        let so = power_sums(outer, n, c, stride);
        let si = power_sums(inner, n, c, stride);
        so.iter().zip(&si).map(|(a, b)| a - b).collect()
    };
    // trapezoid sums converge geometrically; compare against half the nodes
    let mut s = sums(inner, outer, 1);
    loop {
        let half = sums(inner, outer, 2);
        let diff = s.iter().zip(&half).map(|(a, b)| (a - b).norm()).fold(0.0, f64::max);
        if diff <= 1e-10 * n as f64 {
            break;
        }
        let a = inner.refine(f)?;
        let b = outer.refine(f)?;
        if !(a && b) {
            break;
        }
        s = sums(inner, outer, 1);
    }
    let poly = from_power_sums(&s);
    let roots = operator::poly_roots(&poly);
    let width = outer.r - inner.r;
    for w in roots {
        let z = w * c;
        out.push(newton_polish(f, z, 0.25 * width, stop));
    }
    Ok(())
}

/// All zeros of `f` in `|u| < radius`.
pub fn find_zeros(f: &EntireFunctionHandle, radius: f64, tol: f64) -> Result<ZeroSet, SpectralError> {
    if !(radius > 0.0) {
        return Err(SpectralError::InvalidInput(format!("radius {radius}")));
    }
    let outer = contour(f, radius)?;
    let total = outer.winding;
    if total < 0 {
        return Err(SpectralError::InvalidInput("negative winding: function has poles".into()));
    }
    let rad = outer.r;
    if total == 0 {
        return Ok(ZeroSet { zeros: vec![], count: 0, radius: rad, certified: true });
    }
    let mut rings = vec![];
    let mut r = rad / 2.0;
    loop {
        let c = contour(f, r)?;
        let w = c.winding;
        rings.push(c);
        if w == 0 {
            break;
        }
        if rings.len() > 200 {
            return Err(SpectralError::InvalidInput("zero at the origin".into()));
        }
        r /= 2.0;
    }
    rings.reverse();
    rings.push(outer);
    let stop = tol * rings.last().unwrap().fmax;
    let mut roots = Vec::new();
    for i in 1..rings.len() {
        let (lo, hi) = rings.split_at_mut(i);
        annulus_roots(f, &mut lo[i - 1], &mut hi[0], 0, stop, &mut roots)?;
    }

    // merge roots within a relative 1e-6, then certify multiplicity locally
    roots.sort_by(|a, b| a.norm().partial_cmp(&b.norm()).unwrap());
    // no zero lies inside the innermost ring
    let floor = 1e-6 * rings[0].r;
    let close = |y: C, z: C| (y - z).norm() <= (1e-6 * y.norm().max(z.norm())).max(floor);
    let mut groups: Vec<Vec<C>> = Vec::new();
    for z in roots {
        match groups.iter_mut().find(|g| g.iter().any(|&y| close(y, z))) {
            Some(g) => g.push(z),
            None => groups.push(vec![z]),
        }
    }
    let centers: Vec<C> = groups.iter().map(|g| g.iter().sum::<C>() / g.len() as f64).collect();
    let mut zeros = Vec::new();
    for (gi, g) in groups.iter().enumerate() {
        let z = centers[gi];
        let nearest = centers
            .iter()
            .enumerate()
            .filter(|&(j, _)| j != gi)
            .map(|(_, y)| (y - z).norm())
            .fold(f64::INFINITY, f64::min);
        let spread = g.iter().map(|y| (y - z).norm()).fold(0.0, f64::max);
        let mut rho = (0.4 * nearest).min(0.05 * z.norm().max(floor));
        if z.norm() < rad {
            rho = rho.min(0.9 * (rad - z.norm()).max(1e-12 * rad));
        }
        rho = rho.max(10.0 * spread);
        let mult = local_winding(f, z, rho).filter(|&m| m > 0).map(|m| m as usize).unwrap_or(g.len());
        let residual = f.value(z).norm();
        zeros.push(FoundZero {
            value: z,
            multiplicity: mult,
            residual,
            clustered: g.len() > 1,
        });
    }
    let found: usize = zeros.iter().map(|z| z.multiplicity).sum();
    Ok(ZeroSet {
        zeros,
        count: total as usize,
        radius: rad,
        certified: found == total as usize,
    })
}
