use num_complex::Complex64;
use serde::{Deserialize, Serialize};

type C = Complex64;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MatchedPair {
    pub index: usize,
    pub eigenvalue: C,
    pub zero: C,
    /// `|lambda - 1/zero| / |lambda|`.
    pub rel_err: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MatchReport {
    pub pairs: Vec<MatchedPair>,
    pub max_rel_err: f64,
    /// Eigenvalue index with the largest mismatch.
    pub worst: Option<usize>,
    pub tol: f64,
    pub pass: bool,
    pub diagnostics: Vec<String>,
}

/// Pairs the leading `count` eigenvalues with reciprocal zeros, greedily in
/// modulus order, each zero used at most once.
pub fn match_spectra(eigenvalues: &[C], zeros: &[C], count: usize, tol: f64) -> MatchReport {
    let mut diagnostics = Vec::new();
    let mut used = vec![false; zeros.len()];
    let mut pairs = Vec::new();
    if count > eigenvalues.len() {
        diagnostics.push(format!("asked for {count} eigenvalues, {} available", eigenvalues.len()));
    }
    for (index, &l) in eigenvalues.iter().take(count).enumerate() {
        let best = zeros
            .iter()
            .enumerate()
            .filter(|&(j, _)| !used[j])
            .map(|(j, &z)| (j, (l - 1.0 / z).norm() / l.norm()))
            .min_by(|a, b| a.1.partial_cmp(&b.1).unwrap());
        match best {
            Some((j, rel_err)) => {
                used[j] = true;
                pairs.push(MatchedPair { index, eigenvalue: l, zero: zeros[j], rel_err });
            }
            None => diagnostics.push(format!("no zero left for eigenvalue #{index} = {l}")),
        }
    }
    let (worst, max_rel_err) = pairs
        .iter()
        .map(|p| (p.index, p.rel_err))
        .fold((None, 0.0f64), |acc, (i, e)| if e > acc.1 || acc.0.is_none() { (Some(i), e.max(acc.1)) } else { acc });
    let pass = diagnostics.is_empty() && pairs.len() == count && max_rel_err <= tol;
    if !pass && diagnostics.is_empty() {
        if let Some(w) = worst {
            diagnostics.push(format!("eigenvalue #{w} mismatched by {max_rel_err:.3e}"));
        }
    }
    MatchReport { pairs, max_rel_err, worst, tol, pass, diagnostics }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rank_one_exact() {
        let q = 0.2;
        let r = match_spectra(&[C::new(1.0 / (1.0 - q), 0.0)], &[C::new(1.0 - q, 0.0)], 1, 1e-15);
        assert!(r.pass);
        assert!(r.max_rel_err < 1e-15);
    }

    #[test]
    fn perturbed_index_is_reported() {
        let eig: Vec<C> = (0..5).map(|k| C::new(0.5f64.powi(k), 0.0)).collect();
        let mut zeros: Vec<C> = eig.iter().map(|l| 1.0 / l).collect();
        zeros[3] *= 1.01;
        let r = match_spectra(&eig, &zeros, 5, 1e-8);
        assert!(!r.pass);
        assert_eq!(r.worst, Some(3));
    }

    #[test]
    fn too_few_zeros_fails() {
        let r = match_spectra(&[C::new(1.0, 0.0), C::new(0.5, 0.0)], &[C::new(1.0, 0.0)], 2, 1e-8);
        assert!(!r.pass);
        assert_eq!(r.diagnostics.len(), 1);
    }
}
