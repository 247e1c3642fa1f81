use crate::{KernelSpec, OperatorError};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;
use zeta::ZetaProfile;

type C = Complex64;

/// A simple pole term `coeff / (1 - b z)`, i.e. a pole at `z = 1/b`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PoleTerm {
    pub b: C,
    pub coeff: C,
    pub marked: bool,
}

impl PoleTerm {
    pub fn location(&self) -> C {
        1.0 / self.b
    }
}

/// `R(z) = beta z^{-origin_order} prod(1 - a_i z) / prod(1 - b_j z)`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ProductForm {
    pub beta: C,
    /// Order of the pole at `0`; negative for a zero there.
    pub origin_order: i32,
    pub zeros: Vec<C>,
    pub poles: Vec<C>,
    pub marked: Vec<bool>,
}

/// A rational symbol for `B_R`: Laurent polynomial plus simple pole terms.
///
/// Functions live on the disk `|z| < disk_radius`. The principal parts at
/// the marked poles and at the origin are removed by the operator.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RationalR {
    pub laurent: BTreeMap<i64, C>,
    pub poles: Vec<PoleTerm>,
    pub disk_radius: f64,
    pub product: Option<ProductForm>,
}

/// Principal part of `R` at a marked pole.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PrincipalPart {
    pub location: C,
    /// Coefficients of `(z - location)^{-1}, (z - location)^{-2}, ...`.
    pub coeffs: Vec<C>,
}

fn poly_mul(a: &[C], b: &[C]) -> Vec<C> {
    let mut out = vec![C::new(0.0, 0.0); a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        for (j, y) in b.iter().enumerate() {
            out[i + j] += x * y;
        }
    }
    out
}

fn linear_product(roots: &[C]) -> Vec<C> {
    roots.iter().fold(vec![C::new(1.0, 0.0)], |acc, &r| poly_mul(&acc, &[C::new(1.0, 0.0), -r]))
}

fn horner(c: &[C], z: C) -> C {
    c.iter().rev().fold(C::new(0.0, 0.0), |acc, &x| acc * z + x)
}

/// `(quotient, remainder)` of ascending-coefficient polynomials.
fn poly_divrem(num: &[C], den: &[C]) -> (Vec<C>, Vec<C>) {
    let mut rem = num.to_vec();
    let dd = den.len() - 1;
    if rem.len() <= dd {
        return (vec![], rem);
    }
    let mut quot = vec![C::new(0.0, 0.0); rem.len() - dd];
    for k in (0..quot.len()).rev() {
        let c = rem[k + dd] / den[dd];
        quot[k] = c;
        for (i, &x) in den.iter().enumerate() {
            rem[k + i] -= c * x;
        }
    }
    rem.truncate(dd);
    (quot, rem)
}

/// Roots of an ascending-coefficient polynomial, by Aberth iteration.
pub fn poly_roots(c: &[C]) -> Vec<C> {
    let mut c = c.to_vec();
    while c.len() > 1 && c.last().unwrap().norm() == 0.0 {
        c.pop();
    }
    let n = c.len() - 1;
    if n == 0 {
        return vec![];
    }
    let lead = c[n];
    let monic: Vec<C> = c.iter().map(|x| x / lead).collect();
    let dc: Vec<C> = (1..=n).map(|k| monic[k] * k as f64).collect();
    let rad = 1.0 + monic[..n].iter().map(|x| x.norm()).fold(0.0, f64::max);
    let mut z: Vec<C> = (0..n)
        .map(|k| C::from_polar(rad * 0.5, 0.4 + std::f64::consts::TAU * k as f64 / n as f64))
        .collect();
    for _ in 0..500 {
        let mut moved = 0.0f64;
        for i in 0..n {
            let f = horner(&monic, z[i]);
            let df = horner(&dc, z[i]);
            if f.norm() == 0.0 {
                continue;
            }
            let ratio = f / df;
            let s: C = (0..n).filter(|&j| j != i).map(|j| 1.0 / (z[i] - z[j])).sum();
            let w = ratio / (1.0 - ratio * s);
            z[i] -= w;
            moved = moved.max(w.norm() / z[i].norm().max(1e-300));
        }
        if moved < 1e-15 {
            break;
        }
    }
    z
}

impl RationalR {
    pub fn from_product(
        beta: C,
        origin_order: u32,
        zeros: Vec<C>,
        poles: Vec<C>,
        marked: Vec<bool>,
        disk_radius: f64,
    ) -> Result<Self, OperatorError> {
        assert_eq!(poles.len(), marked.len(), "one mark per pole");
        for (i, &bi) in poles.iter().enumerate() {
            if bi.norm() == 0.0 {
                return Err(OperatorError::InvalidSpec("pole reciprocals must be nonzero".into()));
            }
            for &bj in &poles[..i] {
                if (bi - bj).norm() <= 1e-12 * bi.norm().max(bj.norm()) {
                    return Err(OperatorError::MultiplePole(format!("{}", 1.0 / bi)));
                }
            }
        }
        let num: Vec<C> = linear_product(&zeros).into_iter().map(|x| x * beta).collect();
        let den = linear_product(&poles);
        let (quot, rem) = poly_divrem(&num, &den);
        let k0 = origin_order as i64;
        let mut laurent = BTreeMap::new();
        for (i, &c) in quot.iter().enumerate() {
            *laurent.entry(i as i64 - k0).or_insert(C::new(0.0, 0.0)) += c;
        }
        let mut terms = Vec::new();
        for (j, &bj) in poles.iter().enumerate() {
            let mut e = horner(&rem, 1.0 / bj);
            for (m, &bm) in poles.iter().enumerate() {
                if m != j {
                    e /= 1.0 - bm / bj;
                }
            }
            for i in 0..k0 {
                *laurent.entry(i - k0).or_insert(C::new(0.0, 0.0)) += e * bj.powi(i as i32);
            }
            terms.push(PoleTerm {
                b: bj,
                coeff: e * bj.powi(k0 as i32),
                marked: marked[j],
            });
        }
        laurent.retain(|_, c| c.norm() != 0.0);
        Ok(RationalR {
            laurent,
            poles: terms,
            disk_radius,
            product: Some(ProductForm {
                beta,
                origin_order: origin_order as i32,
                zeros,
                poles,
                marked,
            }),
        })
    }

    /// Builds from partial fractions and factors the numerator.
    pub fn from_partial_fractions(laurent: BTreeMap<i64, C>, poles: Vec<PoleTerm>, disk_radius: f64) -> Self {
        let mut r = RationalR {
            laurent,
            poles,
            disk_radius,
            product: None,
        };
        r.product = r.factor();
        r
    }

    fn factor(&self) -> Option<ProductForm> {
        let k0 = self.laurent.keys().next().map_or(0, |&m| (-m).max(0));
        let bs: Vec<C> = self.poles.iter().map(|t| t.b).collect();
        let den = linear_product(&bs);
        let top = self.laurent.keys().last().map_or(0, |&m| m + k0);
        let mut lz = vec![C::new(0.0, 0.0); (top.max(0) + 1) as usize];
        for (&m, &c) in &self.laurent {
            lz[(m + k0) as usize] += c;
        }
        let mut num = poly_mul(&lz, &den);
        for (j, t) in self.poles.iter().enumerate() {
            let others: Vec<C> = bs.iter().enumerate().filter(|&(m, _)| m != j).map(|(_, &b)| b).collect();
            let mut part = linear_product(&others);
            part.splice(0..0, std::iter::repeat_n(C::new(0.0, 0.0), k0 as usize));
            for (i, x) in part.iter().enumerate() {
                if i >= num.len() {
                    num.push(C::new(0.0, 0.0));
                }
                num[i] += t.coeff * x;
            }
        }
        let scale = num.iter().map(|x| x.norm()).fold(0.0, f64::max);
        if scale == 0.0 {
            return None;
        }
        let tiny = 1e-14 * scale;
        while num.last().is_some_and(|x| x.norm() <= tiny) {
            num.pop();
        }
        let i0 = num.iter().position(|x| x.norm() > tiny)?;
        let beta = num[i0];
        let roots = poly_roots(&num[i0..]);
        Some(ProductForm {
            beta,
            origin_order: k0 as i32 - i0 as i32,
            zeros: roots.iter().map(|&z| 1.0 / z).collect(),
            poles: bs,
            marked: self.poles.iter().map(|t| t.marked).collect(),
        })
    }

    pub fn eval(&self, z: C) -> C {
        let mut v: C = self.laurent.iter().map(|(&m, &c)| c * z.powi(m as i32)).sum();
        for t in &self.poles {
            v += t.coeff / (1.0 - t.b * z);
        }
        v
    }

    /// Order of the pole at the origin.
    pub fn origin_order(&self) -> usize {
        self.laurent.keys().next().map_or(0, |&m| (-m).max(0) as usize)
    }

    /// `k`: marked poles counted with multiplicity, origin included.
    pub fn marked_count(&self) -> usize {
        self.origin_order() + self.poles.iter().filter(|t| t.marked).count()
    }

    /// Checks the marking rules for base `q`: every pole in the closed disk
    /// is marked and every marked pole lies in `|z| < radius / |q|`.
    pub fn validate(&self, q: C) -> Result<(), OperatorError> {
        let outer = self.disk_radius / q.norm();
        for t in &self.poles {
            let z = t.location();
            if !t.marked && z.norm() <= self.disk_radius {
                return Err(OperatorError::UnmarkedPole(format!("{z}"), self.disk_radius));
            }
            if t.marked && z.norm() >= outer {
                return Err(OperatorError::MarkedTooFar(format!("{z}"), outer));
            }
        }
        Ok(())
    }

    pub fn principal_parts(&self) -> Vec<PrincipalPart> {
        let mut out = Vec::new();
        let k0 = self.origin_order();
        if k0 > 0 {
            out.push(PrincipalPart {
                location: C::new(0.0, 0.0),
                coeffs: (1..=k0 as i64).map(|i| self.laurent.get(&-i).copied().unwrap_or_default()).collect(),
            });
        }
        for t in self.poles.iter().filter(|t| t.marked) {
            // c / (1 - b z) = (-c / b) / (z - 1/b)
            out.push(PrincipalPart {
                location: t.location(),
                coeffs: vec![-t.coeff / t.b],
            });
        }
        out
    }

    /// Residue coefficients `R_j` of the marked poles, `pr = R_j/(1 - b_j z)`
    /// up to the factor `F(q/b_j)`.
    pub fn marked_terms(&self) -> Vec<PoleTerm> {
        self.poles.iter().filter(|t| t.marked).copied().collect()
    }
}

/// `R` for `A_{P,s,chi}` in the coordinate of the disk `|z| < p^{-1/2}`:
/// structural pole terms plus `Z_0(p^{-ds} z)`; the pole at `z = p^{ds}`
/// is marked, the one at `z = p^{(d-r)s}` is not.
pub fn build_r_from_profile(
    spec: &KernelSpec,
    profile: &ZetaProfile,
) -> Result<(RationalR, Vec<PrincipalPart>), OperatorError> {
    if profile.p != spec.p.get() || profile.chi != spec.chi.descriptor() || profile.q != spec.q_coeffs {
        return Err(OperatorError::InvalidSpec("profile does not belong to this kernel".into()));
    }
    let s = spec.s;
    let spec = spec.normalized().unwrap_or_else(|| spec.clone());
    let pds = spec.p_pow(-spec.d * s);
    let mut laurent = BTreeMap::new();
    for (m, c) in profile.z0_at(s) {
        if c.norm() != 0.0 {
            laurent.insert(m, c * pds.powi(m as i32));
        }
    }
    let mut poles = Vec::new();
    let delta = spec.chi.is_trivial();
    if delta {
        let r = spec.degree() as f64;
        let c_s = spec.p_pow(-s * spec.lead_valuation() as f64);
        poles.push(PoleTerm {
            b: pds,
            coeff: C::new(-1.0, 0.0),
            marked: true,
        });
        poles.push(PoleTerm {
            b: spec.p_pow(-(spec.d - r) * s),
            coeff: c_s,
            marked: false,
        });
    }
    let radius = spec.p.as_f64().powf(-0.5);
    let r = RationalR::from_partial_fractions(laurent, poles, radius);
    r.validate(spec.q())?;
    let k0 = profile.z0.keys().next().map_or(0, |&m| (-m).max(0) as usize);
    let expected = k0 + delta as usize;
    if r.marked_count() != expected {
        return Err(OperatorError::MarkedCount {
            expected,
            found: r.marked_count(),
        });
    }
    let pp = r.principal_parts();
    Ok((r, pp))
}
