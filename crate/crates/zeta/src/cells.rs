use crate::profile::stabilization_bounds;
use crate::ratfunc::QPoly;
use crate::{RatFunc, ZetaError};
use num_bigint::BigInt;
use num_complex::Complex64;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};
use padic_core::{poly_abs_on_cell, valuation, CellOutcome, Prime, UnitCharacter};
use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CellKind {
    /// `|Q| = p^{-valuation}` on the cell.
    Constant { valuation: i64 },
    /// `|Q(x)| = p^{-scale} |x - rho|` with `rho` in the cell.
    Root { scale: i64 },
}

/// The ball `residue + p^level Z_p`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Cell {
    pub residue: BigInt,
    pub level: u32,
    pub kind: CellKind,
}

/// Partition of `Z_p^x` into balls on which `|Q|` is resolved.
#[derive(Debug, Clone)]
pub struct Decomposition {
    p: Prime,
    degree: usize,
    cells: Vec<Cell>,
}

/// Default subdivision budget: `2 * max |v(c_j)| + 10` levels.
fn depth_budget(q: &[BigRational], p: Prime) -> u32 {
    let vmax = q
        .iter()
        .filter_map(|c| valuation(c, p).finite())
        .map(|v| v.unsigned_abs())
        .max()
        .unwrap_or(0);
    (2 * vmax + 10) as u32
}

pub fn decompose(q: &[BigRational], p: Prime, start_level: u32) -> Result<Decomposition, ZetaError> {
    let start = start_level.max(1);
    let budget = depth_budget(q, p);
    let pb = BigInt::from(p.get());
    let mut cells = Vec::new();
    let top = pb.pow(start);
    let mut stack: Vec<(BigInt, u32)> = Vec::new();
    let mut a = BigInt::zero();
    // canonical order: residues increasing, children visited in order
    let mut roots: Vec<BigInt> = Vec::new();
    while a < top {
        if !a.is_multiple_of(&pb) {
            roots.push(a.clone());
        }
        a += 1;
    }
    for r in roots.into_iter().rev() {
        stack.push((r, start));
    }
    while let Some((a, k)) = stack.pop() {
        match poly_abs_on_cell(q, &a, k, p) {
            CellOutcome::ConstantAbs { valuation, .. } => {
                let v = valuation.finite().ok_or(ZetaError::ConstantTerm)?;
                cells.push(Cell {
                    residue: a,
                    level: k,
                    kind: CellKind::Constant { valuation: v },
                });
            }
            CellOutcome::SimpleRootInside(rc) => cells.push(Cell {
                residue: a,
                level: k,
                kind: CellKind::Root { scale: rc.scale },
            }),
            CellOutcome::Undetermined => {
                if k >= start + budget {
                    return Err(ZetaError::MultipleRoot(budget));
                }
                let step = pb.pow(k);
                for j in (0..p.get()).rev() {
                    stack.push((&a + &step * BigInt::from(j), k + 1));
                }
            }
        }
    }
    let degree = q.iter().rposition(|c| !c.is_zero()).unwrap_or(0);
    Ok(Decomposition { p, degree, cells })
}

impl Decomposition {
    pub fn cells(&self) -> &[Cell] {
        &self.cells
    }

    pub fn prime(&self) -> Prime {
        self.p
    }

    fn check_domain(&self, s: Complex64) -> Result<(), ZetaError> {
        if self.degree >= 1 {
            let bound = -1.0 / self.degree as f64;
            if !(s.re > bound) {
                return Err(ZetaError::Domain(format!("{s}"), bound));
            }
        }
        Ok(())
    }

    /// `(1 - p^{-1})^{-1} int |Q|^s chi` at a concrete `s`.
    pub fn eval(&self, chi: &UnitCharacter, s: Complex64) -> Result<Complex64, ZetaError> {
        self.check_domain(s)?;
        let pf = self.p.as_f64();
        let lnp = pf.ln();
        let tp = |e: i64| (-s * (e as f64 * lnp)).exp();
        let t = tp(1);
        let norm = 1.0 / (1.0 - 1.0 / pf);
        let modulus = BigInt::from(chi.modulus());
        let mut acc = Complex64::zero();
        for c in &self.cells {
            let a = c.residue.mod_floor(&modulus).to_i128().unwrap();
            let w = chi.value(a)? * pf.powi(-(c.level as i32));
            acc += match c.kind {
                CellKind::Constant { valuation } => w * norm * tp(valuation),
                CellKind::Root { scale } => w * tp(scale + c.level as i64) / (1.0 - t / pf),
            };
        }
        Ok(acc)
    }

    /// Exact value as a rational function of `t`, trivial character.
    pub fn exact(&self) -> RatFunc {
        let p = BigInt::from(self.p.get());
        let mut cst: BTreeMap<i64, BigRational> = BTreeMap::new();
        let mut root: BTreeMap<i64, BigRational> = BTreeMap::new();
        let norm = BigRational::new(p.clone(), &p - 1);
        for c in &self.cells {
            let w = BigRational::new(BigInt::one(), p.pow(c.level));
            match c.kind {
                CellKind::Constant { valuation } => {
                    *cst.entry(valuation).or_insert_with(BigRational::zero) += &w * &norm
                }
                CellKind::Root { scale } => {
                    *root.entry(scale + c.level as i64).or_insert_with(BigRational::zero) += w
                }
            }
        }
        let lower = cst.keys().chain(root.keys()).copied().min().unwrap_or(0).min(0);
        let shift = |m: &BTreeMap<i64, BigRational>| {
            let mut v = Vec::new();
            for (&e, c) in m {
                let k = (e - lower) as usize;
                if v.len() <= k {
                    v.resize(k + 1, BigRational::zero());
                }
                v[k] += c;
            }
            QPoly::new(v)
        };
        // 1 - t/p
        let geo = QPoly::new(vec![BigRational::one(), BigRational::new((-1).into(), p.clone())]);
        let num = shift(&cst).mul(&geo).add(&shift(&root));
        let den = QPoly::monomial(BigRational::one(), (-lower) as usize).mul(&geo);
        RatFunc::new(num, den)
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum ZetaMode {
    Exact,
    Numeric(Complex64),
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "mode", content = "value", rename_all = "lowercase")]
pub enum ZetaValue {
    Exact(RatFunc),
    Numeric([f64; 2]),
}

impl ZetaValue {
    pub fn numeric(z: Complex64) -> Self {
        ZetaValue::Numeric([z.re, z.im])
    }

    /// Complex value; exact values are evaluated at `t = p^{-s}`.
    pub fn at(&self, p: u64, s: Complex64) -> Complex64 {
        match self {
            ZetaValue::Exact(f) => f.eval_s(p, s),
            ZetaValue::Numeric([re, im]) => Complex64::new(*re, *im),
        }
    }

    pub fn as_exact(&self) -> Option<&RatFunc> {
        match self {
            ZetaValue::Exact(f) => Some(f),
            _ => None,
        }
    }

    pub fn as_complex(&self) -> Option<Complex64> {
        match self {
            ZetaValue::Numeric([re, im]) => Some(Complex64::new(*re, *im)),
            _ => None,
        }
    }
}

fn check_constant_term(q: &[BigRational]) -> Result<(), ZetaError> {
    if q.first().is_some_and(|c| c.is_one()) {
        Ok(())
    } else {
        Err(ZetaError::ConstantTerm)
    }
}

pub fn zeta_exact(q: &[BigRational], p: Prime) -> Result<RatFunc, ZetaError> {
    check_constant_term(q)?;
    Ok(decompose(q, p, 1)?.exact())
}

pub fn zeta_numeric(q: &[BigRational], chi: &UnitCharacter, s: Complex64) -> Result<Complex64, ZetaError> {
    check_constant_term(q)?;
    decompose(q, chi.prime(), chi.level())?.eval(chi, s)
}

pub fn zeta(q: &[BigRational], chi: &UnitCharacter, mode: ZetaMode) -> Result<ZetaValue, ZetaError> {
    check_constant_term(q)?;
    match mode {
        ZetaMode::Exact => {
            if !chi.is_trivial() {
                return Err(ZetaError::ExactNeedsTrivial);
            }
            zeta_exact(q, chi.prime()).map(ZetaValue::Exact)
        }
        ZetaMode::Numeric(s) => zeta_numeric(q, chi, s).map(ZetaValue::numeric),
    }
}

/// Coefficients of `Q_m(x) = Q(x p^{-m})`.
pub fn shift_poly(q: &[BigRational], m: i64, p: Prime) -> Vec<BigRational> {
    let pb = BigInt::from(p.get());
    q.iter()
        .enumerate()
        .map(|(j, c)| {
            let e = j as i64 * m;
            let f = pb.pow(e.unsigned_abs() as u32);
            if e >= 0 {
                c / BigRational::from_integer(f)
            } else {
                c * BigRational::from_integer(f)
            }
        })
        .collect()
}

/// `zeta(Q_m, chi, s)`, short-circuited outside the stabilization window.
pub fn zeta_shift(q: &[BigRational], m: i64, chi: &UnitCharacter, mode: ZetaMode) -> Result<ZetaValue, ZetaError> {
    check_constant_term(q)?;
    let p = chi.prime();
    let delta = chi.is_trivial();
    let stable = match stabilization_bounds(q, p) {
        Err(ZetaError::Degenerate) => Some(0i64),
        Err(e) => return Err(e),
        Ok((lo, hi)) => {
            let r = q.iter().rposition(|c| !c.is_zero()).unwrap() as i64;
            if m <= lo {
                Some(0)
            } else if m >= hi {
                let vr = valuation(&q[r as usize], p).finite().unwrap();
                Some(vr - m * r)
            } else {
                None
            }
        }
    };
    match stable {
        Some(e) => {
            let c = if delta { BigRational::one() } else { BigRational::zero() };
            Ok(match mode {
                ZetaMode::Exact => {
                    if !delta {
                        return Err(ZetaError::ExactNeedsTrivial);
                    }
                    ZetaValue::Exact(RatFunc::monomial(c, e))
                }
                ZetaMode::Numeric(s) => {
                    let v = if delta {
                        (-s * (e as f64 * p.as_f64().ln())).exp()
                    } else {
                        Complex64::zero()
                    };
                    ZetaValue::numeric(v)
                }
            })
        }
        None => zeta(&shift_poly(q, m, p), chi, mode),
    }
}
