use qspecial::*;
use rand::{Rng, SeedableRng};

fn c(x: f64) -> C64 {
    C64::new(x, 0.0)
}

fn rnd(rng: &mut impl Rng, lo: f64, hi: f64) -> C64 {
    C64::from_polar(rng.gen_range(lo..hi), rng.gen_range(0.0..std::f64::consts::TAU))
}

#[test]
fn watson_connection_formula() {
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(99);
    let mut n = 0;
    while n < 20 {
        let q = QBase::new(rnd(&mut rng, 0.1, 0.4)).unwrap();
        let a = rnd(&mut rng, 0.5, 1.5);
        let b = rnd(&mut rng, 0.5, 1.5);
        let cc = rnd(&mut rng, 0.1, 0.6);
        let x = rnd(&mut rng, 0.3, 0.85);
        if (cc * q.get() / (a * b * x)).norm() >= 0.85 {
            continue;
        }
        let lhs = basic_phi(&[a, b], &[cc], q, x, Variant::Phi).unwrap();
        let rhs = watson_rhs(a, b, cc, q, x).unwrap();
        let rel = (lhs.value - rhs.value).norm() / lhs.value.norm();
        assert!(rel <= 1e-9, "a={a} b={b} c={cc} x={x}: {rel:e}");
        n += 1;
    }
}

#[test]
fn confluence_to_1phi1() {
    let q = QBase::real(0.3).unwrap();
    let (alpha, beta, gamma, z) = (c(0.4), c(1.3), c(0.2), C64::new(0.8, 0.5));
    let target = basic_phi(&[alpha], &[gamma], q, beta * z, Variant::Phi).unwrap().value;
    let mut last = f64::INFINITY;
    for cc in [1e-3, 1e-4, 1e-5] {
        let v = basic_phi(&[alpha, beta / cc], &[gamma], q, cc * z, Variant::Phi).unwrap().value;
        let d = (v - target).norm();
        assert!(d < last / 5.0, "c={cc}: {d:e} not decreasing from {last:e}");
        last = d;
    }
    assert!(last < 1e-4);
}

#[test]
fn tails_survive_term_doubling() {
    let q = QBase::real(0.25).unwrap();
    let cases: [(Vec<C64>, Vec<C64>, C64, Variant); 3] = [
        (vec![c(0.0)], vec![c(0.3)], C64::new(40.0, 3.0), Variant::Phi),
        (vec![c(0.5), c(-1.2)], vec![c(0.7)], C64::new(0.6, -0.3), Variant::Bailey),
        (vec![c(0.5)], vec![c(0.7), c(0.1)], C64::new(-80.0, 1.0), Variant::Phi),
    ];
    for (a, b, u, v) in cases {
        let r = basic_phi(&a, &b, q, u, v).unwrap();
        let n = (1..400).find(|&n| (basic_phi_terms(&a, &b, q, u, v, n) - r.value).norm() <= r.err).unwrap();
        let twice = basic_phi_terms(&a, &b, q, u, v, 2 * n + 10);
        assert!((twice - r.value).norm() <= r.err.max(1e-15 * r.value.norm()), "{u}");
    }
}
