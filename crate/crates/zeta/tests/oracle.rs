use num_complex::Complex64;
use padic_core::{enumerate_characters, rational_poly, Prime, UnitCharacter};
use rand::{Rng, SeedableRng};
use std::time::Instant;
use zeta::{decompose, zeta_bruteforce, zeta_exact, zeta_numeric, BruteForceTable, CellKind, ZetaError};

fn p(n: u64) -> Prime {
    Prime::new(n).unwrap()
}

#[test]
fn exact_against_riemann_sums_grid() {
    let started = Instant::now();
    let polys: [(&str, Vec<i64>); 3] = [("1-x", vec![1, -1]), ("1+x^2", vec![1, 0, 1]), ("1-x^3", vec![1, 0, 0, -1])];
    let ss = [Complex64::new(1.0, 0.0), Complex64::new(2.0, 0.0), Complex64::new(0.7, 0.3)];
    let mut worst: f64 = 0.0;
    for pr in [3u64, 5, 7] {
        let pp = p(pr);
        let triv = UnitCharacter::trivial(pp).unwrap();
        let mut qs = polys.to_vec();
        qs.push(("1+px", vec![1, pr as i64]));
        for (name, qc) in &qs {
            let q = rational_poly(qc);
            let exact = zeta_exact(&q, pp).unwrap();
            let table = BruteForceTable::new(&q, pp, 8, 40, 1).unwrap();
            for &s in &ss {
                let b = table.eval(&triv, s).unwrap();
                let d = (exact.eval_s(pr, s) - b.value).norm();
                worst = worst.max(d);
                assert!(d <= 1e-6, "{name} p={pr} s={s}: {d:e}");
            }
        }
    }
    assert!(started.elapsed().as_secs_f64() < 20.0);
    assert!(worst > 0.0);
}

#[test]
fn random_polynomials_exact_vs_bruteforce() {
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(2024);
    let mut done = 0;
    while done < 10 {
        let pr = [3u64, 5, 7][rng.gen_range(0..3)];
        let deg = rng.gen_range(1..=3);
        let mut c = vec![1i64];
        for _ in 0..deg {
            c.push(rng.gen_range(-6..=6));
        }
        if *c.last().unwrap() == 0 {
            continue;
        }
        let q = rational_poly(&c);
        let Ok(exact) = zeta_exact(&q, p(pr)) else { continue };
        let k = if pr == 3 { 9 } else { 6 };
        let cap = 30;
        let table = BruteForceTable::new(&q, p(pr), k, cap, 1).unwrap();
        let triv = UnitCharacter::trivial(p(pr)).unwrap();
        for _ in 0..5 {
            let s = Complex64::new(rng.gen_range(0.0..3.0), rng.gen_range(-2.0..2.0));
            let b = table.eval(&triv, s).unwrap();
            let tol = 10.0 * (pr as f64).powf(-(cap as f64) * s.re) + 1e-10 + 10.0 * b.error_estimate;
            let d = (exact.eval_s(pr, s) - b.value).norm();
            assert!(d <= tol, "Q={c:?} p={pr} s={s}: {d:e} > {tol:e}");
        }
        done += 1;
    }
}

#[test]
fn nontrivial_characters_vs_bruteforce() {
    let q = rational_poly(&[1, -2, -1, 3]);
    for pr in [3u64, 5] {
        for chi in enumerate_characters(p(pr), 2).unwrap() {
            let s = Complex64::new(1.2, -0.5);
            let z = zeta_numeric(&q, &chi, s).unwrap();
            let b = zeta_bruteforce(&q, &chi, s, 7, 30).unwrap();
            assert!((z - b.value).norm() < 10.0 * b.error_estimate, "p={pr} {chi:?}");
        }
    }
}

/// Averaging over all characters of level K with weight conj(chi(b))
/// isolates the ball b + p^K Z_p.
#[test]
fn character_orthogonality_isolates_balls() {
    let q = rational_poly(&[1, 1, -1]);
    let pr = 5u64;
    let k = 2;
    let s = Complex64::new(0.9, 0.4);
    let chars = enumerate_characters(p(pr), k).unwrap();
    let zs: Vec<Complex64> = chars.iter().map(|c| zeta_numeric(&q, c, s).unwrap()).collect();
    let dec = decompose(&q, p(pr), k).unwrap();
    let pf = pr as f64;
    let t = (-s * pf.ln()).exp();
    let modk = pr.pow(k) as i64;
    for b in [1i64, 2, 7, 13, 24] {
        let lhs: Complex64 = chars
            .iter()
            .zip(&zs)
            .map(|(c, z)| c.value(b as i128).unwrap().conj() * z)
            .sum::<Complex64>()
            / chars.len() as f64;
        let mut rhs = Complex64::new(0.0, 0.0);
        for cell in dec.cells() {
            let a: i64 = (cell.residue.clone() % modk).try_into().unwrap();
            if a != b {
                continue;
            }
            let w = pf.powi(-(cell.level as i32));
            rhs += match cell.kind {
                CellKind::Constant { valuation } => w / (1.0 - 1.0 / pf) * t.powi(valuation as i32),
                CellKind::Root { scale } => w * t.powi((scale + cell.level as i64) as i32) / (1.0 - t / pf),
            };
        }
        assert!((lhs - rhs).norm() < 1e-12, "b={b}: {lhs} vs {rhs}");
    }
}

#[test]
fn multiple_root_is_hard_error() {
    let q = rational_poly(&[1, -2, 1]);
    assert!(matches!(zeta_exact(&q, p(3)), Err(ZetaError::MultipleRoot(_))));
}
