use crate::common::{c, multiset_gap};
use crate::report::{Check, CheckKind, ExperimentReport};
use crate::ExperimentError;
use num_complex::Complex64;
use operator::{build_sequence_matrix, discretize_kernel, BivariatePoly, KernelSpec};
use padic_core::{enumerate_characters, rational_poly, Prime, UnitCharacter};
use serde::{Deserialize, Serialize};
use spectral::eigenvalues;

type C = Complex64;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct UnionParams {
    pub p: u64,
    pub d: u32,
    pub l: u32,
    /// Coefficients of `Q`, `P = x^{d-l} y^l Q(x/y)`.
    pub q: Vec<i64>,
    pub s: f64,
    /// Level of the full discretization.
    pub k: u32,
    pub cap: u32,
    pub union_tol: f64,
    /// Asserts every nontrivial block vanishes.
    pub expect_zero_blocks: bool,
    pub zero_tol: f64,
    /// Highest level for the block-top comparison; 0 picks the largest with `p^K <= 343`.
    pub compare_level: u32,
    pub block_tol: f64,
    pub n: usize,
    /// Multiplies the trivial block's spectrum.
    pub perturb: f64,
}

impl Default for UnionParams {
    fn default() -> Self {
        UnionParams {
            p: 3,
            d: 1,
            l: 1,
            q: vec![1, -1],
            s: 1.0,
            k: 3,
            cap: 60,
            union_tol: 1e-9,
            expect_zero_blocks: false,
            zero_tol: 1e-12,
            compare_level: 0,
            block_tol: 1e-4,
            n: 60,
            perturb: 1.0,
        }
    }
}

impl UnionParams {
    /// `x^2 + y^2` at `p = 3`, where only the trivial block survives.
    pub fn noroots() -> Self {
        UnionParams { d: 2, l: 2, q: vec![1, 0, 1], expect_zero_blocks: true, ..Default::default() }
    }
}

fn top(v: &[C]) -> C {
    v.first().copied().unwrap_or(C::new(0.0, 0.0))
}

/// Aitken's extrapolation of three successive levels; the last level when
/// the differences are at roundoff.
fn aitken(x0: C, x1: C, x2: C) -> C {
    let (d1, d2) = (x1 - x0, x2 - x1);
    let den = d2 - d1;
    if d1.norm() <= 1e-13 * x2.norm() || den.norm() == 0.0 {
        return x2;
    }
    x2 - d2 * d2 / den
}

pub fn run_union_over_chi(pp: &UnionParams) -> Result<ExperimentReport, ExperimentError> {
    let p = Prime::new(pp.p)?;
    let poly = BivariatePoly::homogeneous(pp.d, pp.l, &rational_poly(&pp.q));
    let s = c(pp.s);
    let mut rep = ExperimentReport::new("union_over_chi");
    rep.param("p", pp.p).param("d", pp.d).param("l", pp.l).param("Q", format!("{:?}", pp.q));
    rep.param("s", pp.s).param("K", pp.k).param("cap", pp.cap);
    rep.formula("spec(A) = union over chi of spec(A restricted to H_chi)");

    let full = eigenvalues(&discretize_kernel(&poly, p, s, pp.k, pp.cap, None)?)?;
    let chars = enumerate_characters(p, pp.k)?;
    let mut union = Vec::new();
    let mut dims = 0usize;
    let mut worst_block = 0.0f64;
    for chi in &chars {
        let b = discretize_kernel(&poly, p, s, pp.k, pp.cap, Some(chi))?;
        dims += b.n;
        let scale = if chi.is_trivial() { pp.perturb } else { 1.0 };
        union.extend(eigenvalues(&b)?.eigenvalues.iter().map(|l| l * scale));
        if !chi.is_trivial() {
            worst_block = worst_block.max(b.entries.iter().map(|z| z.norm()).fold(0.0, f64::max));
        }
    }
    let pk = p.pow(pp.k).unwrap_or(0) as usize;
    rep.check(
        Check::holds("block dimensions sum to p^K", CheckKind::Structure, dims == pk)
            .with_detail(format!("{dims} over {} characters, p^K = {pk}", chars.len())),
    );
    let gap = multiset_gap(&full.eigenvalues, &union) / top(&full.eigenvalues).norm().max(1.0);
    rep.check(Check::at_most("full spectrum = union of chi-blocks", CheckKind::Identity, gap, pp.union_tol));
    if pp.expect_zero_blocks {
        rep.check(Check::at_most("nontrivial chi-blocks vanish", CheckKind::Structure, worst_block, pp.zero_tol));
    }
    rep.eigenvalues = full.eigenvalues.iter().take(8).copied().collect();

    // block tops against the sequence matrix, extrapolated over three levels
    let kc = if pp.compare_level > 0 {
        pp.compare_level
    } else {
        (1..).take_while(|&k| p.pow(k).is_some_and(|v| v <= 343)).last().unwrap_or(1)
    };
    if kc < 3 {
        rep.note("block-top comparison skipped: needs three levels");
        return Ok(rep.finish());
    }
    let mut worst = 0.0f64;
    let mut compared = 0;
    let mut raw_worst = 0.0f64;
    for chi in enumerate_characters(p, kc - 2)? {
        let spec = KernelSpec::new(pp.d as f64, pp.l, rational_poly(&pp.q), chi.clone(), s)?;
        let want = top(&eigenvalues(&build_sequence_matrix(&spec, pp.n)?)?.eigenvalues);
        let lv: Vec<C> = (kc - 2..=kc)
            .map(|k| {
                let chi_k = UnitCharacter::from_descriptor(chi.descriptor())?;
                let b = discretize_kernel(&poly, p, s, k, pp.cap, Some(&chi_k))?;
                Ok::<C, ExperimentError>(top(&eigenvalues(&b)?.eigenvalues))
            })
            .collect::<Result<_, _>>()?;
        let scale = if chi.is_trivial() { pp.perturb } else { 1.0 };
        let got = aitken(lv[0], lv[1], lv[2]) * scale;
        // zero blocks meet a zero sequence matrix; compare absolutely there
        let den = want.norm().max(pp.zero_tol / pp.block_tol);
        worst = worst.max((got - want).norm() / den);
        raw_worst = raw_worst.max((lv[2] * scale - want).norm() / den);
        compared += 1;
    }
    rep.check(
        Check::at_most("chi-block tops vs sequence matrix", CheckKind::Oracle, worst, pp.block_tol).with_detail(format!(
            "{compared} characters of conductor <= {}, levels {}..{}; unextrapolated level {kc}: {raw_worst:.3e}",
            kc - 2,
            kc - 2,
            kc
        )),
    );
    Ok(rep.finish())
}
