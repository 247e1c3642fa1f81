use crate::report::{Check, CheckKind, ExperimentReport};
use crate::ExperimentError;
use num_complex::Complex64;
use num_rational::BigRational;
use operator::KernelSpec;
use padic_core::{rational_poly, Prime, UnitCharacter};
use qspecial::EntireFunctionHandle;
use spectral::{find_zeros, match_spectra, MatchReport, Spectrum, ZeroSet};

type C = Complex64;

pub fn c(x: f64) -> C {
    C::new(x, 0.0)
}

pub fn trivial_spec(p: u64, d: u32, q: &[i64], s: f64) -> Result<KernelSpec, ExperimentError> {
    let pr = Prime::new(p)?;
    Ok(KernelSpec::new(d as f64, d, rational_poly(q), UnitCharacter::trivial(pr)?, c(s))?)
}

pub fn spec_with(p: u64, d: u32, q: Vec<BigRational>, chi: UnitCharacter, s: f64) -> Result<KernelSpec, ExperimentError> {
    let _ = Prime::new(p)?;
    Ok(KernelSpec::new(d as f64, d, q, chi, c(s))?)
}

/// A radius separating the leading `count` eigenvalues' reciprocals from the
/// rest, placed in the first gap of modulus ratio above 1.05.
pub fn separating_radius(eig: &[C], count: usize) -> f64 {
    let mods: Vec<f64> = eig.iter().map(|l| l.norm()).collect();
    let mut j = count.max(1) - 1;
    while j + 1 < mods.len() && mods[j + 1] > 0.0 && mods[j] / mods[j + 1] < 1.05 {
        j += 1;
    }
    match mods.get(j + 1) {
        Some(&next) if next > 0.0 && mods[j] > 0.0 => 1.0 / (mods[j] * next).sqrt(),
        _ => 2.0 / mods[j],
    }
}

pub struct ZeroMatch {
    pub zeros: ZeroSet,
    pub report: MatchReport,
}

/// Finds the zeros of `h` inside the separating radius and pairs them with
/// the leading eigenvalues; records the match and the zero-count certificate.
pub fn match_zeros(
    rep: &mut ExperimentReport,
    label: &str,
    h: &EntireFunctionHandle,
    spec: &Spectrum,
    count: usize,
    tol: f64,
) -> Result<ZeroMatch, ExperimentError> {
    let radius = separating_radius(&spec.eigenvalues, count);
    let zeros = find_zeros(h, radius, 1e-14)?;
    let inside = spec.eigenvalues.iter().filter(|l| l.norm() * zeros.radius > 1.0).count();
    let report = match_spectra(&spec.eigenvalues, &zeros.expanded(), count, tol);
    rep.check(
        Check::at_most(format!("{label}: top-{count} match"), CheckKind::ZeroMatch, report.max_rel_err, tol)
            .with_detail(report.diagnostics.join("; ")),
    );
    if !report.pass && report.pairs.len() < count {
        rep.checks.last_mut().unwrap().pass = false;
    }
    rep.check(
        Check::holds(format!("{label}: zero count"), CheckKind::Structure, zeros.certified && inside == zeros.count)
            .with_detail(format!("winding {} on |u| = {:.4e}, {} eigenvalues outside", zeros.count, zeros.radius, inside)),
    );
    Ok(ZeroMatch { zeros, report })
}

/// Fills eigenvalues, zeros and pairing into the report from the first match.
pub fn record(rep: &mut ExperimentReport, spec: &Spectrum, m: &ZeroMatch, keep: usize) {
    rep.eigenvalues = spec.eigenvalues.iter().take(keep).copied().collect();
    rep.zeros = m.zeros.expanded();
    rep.pairing = m.report.pairs.clone();
}

/// Multiset distance: greedy pairing of two eigenvalue lists, max absolute gap.
pub fn multiset_gap(a: &[C], b: &[C]) -> f64 {
    if a.len() != b.len() {
        return f64::INFINITY;
    }
    let mut used = vec![false; b.len()];
    let mut worst = 0.0f64;
    for x in a {
        let (j, d) = b
            .iter()
            .enumerate()
            .filter(|&(j, _)| !used[j])
            .map(|(j, y)| (j, (x - y).norm()))
            .min_by(|u, v| u.1.partial_cmp(&v.1).unwrap())
            .unwrap();
        used[j] = true;
        worst = worst.max(d);
    }
    worst
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn radius_skips_clusters() {
        let e = [c(1.0), c(0.5), c(0.49), c(0.1)];
        let r = separating_radius(&e, 2);
        assert!(r > 1.0 / 0.49 && r < 10.0);
    }

    #[test]
    fn gap_of_permuted_lists() {
        let a = [c(1.0), c(2.0), c(3.0)];
        let b = [c(3.0), c(1.0), c(2.0 + 1e-12)];
        assert!(multiset_gap(&a, &b) < 2e-12);
    }
}
