use num_bigint::BigInt;
use proptest::prelude::*;
use wittkit::fpalg::{FpAlgebra, GradedAlgebra};
use wittkit::witt::*;

fn algebras(p: u64) -> Vec<FpAlgebra> {
    vec![
        FpAlgebra::prime_field(p).unwrap(),
        FpAlgebra::galois_field(p, 2).unwrap(),
        FpAlgebra::poly_quotient(p, &[0, 1, 1]).unwrap(),
    ]
}

#[test]
fn ring_axioms_exhaustive() {
    for (p, n) in [(2u64, 2usize), (2, 3), (3, 2)] {
        for a in algebras(p) {
            let w = WittRing::new(&a, n).unwrap();
            let r = w.to_finring().unwrap();
            let c = r.check_axioms("w", 1 << 20, 0);
            assert!(c.passed, "{c:?}");
        }
    }
}

#[test]
fn shift_product_identity() {
    // i(x)·i(y) = p·i(xy) for x, y in W_2, inside W_3
    let a = FpAlgebra::poly_quotient(2, &[0, 1, 1]).unwrap();
    let w3 = WittRing::new(&a, 3).unwrap();
    let w2 = WittRing::new(&a, 2).unwrap();
    let els = w2.elements(1 << 10).unwrap();
    for x in &els {
        for y in &els {
            let lhs = w3.mul(&w3.inject(x, 1).unwrap(), &w3.inject(y, 1).unwrap()).unwrap();
            let rhs = w3.smul(2, &w3.inject(&w2.mul(x, y).unwrap(), 1).unwrap()).unwrap();
            assert_eq!(lhs, rhs);
        }
    }
}

#[test]
fn p_times_teichmuller() {
    // p·τ_{n+1}(x) = i(τ_n(x^p))
    for (p, n) in [(3u64, 1usize), (2, 2), (3, 2)] {
        let a = FpAlgebra::poly_quotient(p, &[0, 1, 1]).unwrap();
        let big = WittRing::new(&a, n + 1).unwrap();
        let small = WittRing::new(&a, n).unwrap();
        for x in a.elements(100).unwrap() {
            let lhs = big.smul(p as i64, &big.teichmuller(&x)).unwrap();
            let rhs = big.inject(&small.teichmuller(&a.frob(&x)), 1).unwrap();
            assert_eq!(lhs, rhs);
        }
    }
}

#[test]
fn teichmuller_multiplicative_and_compatible() {
    let f4 = FpAlgebra::galois_field(2, 2).unwrap();
    let w = WittRing::new(&f4, 2).unwrap();
    for x in f4.elements(4).unwrap() {
        for y in f4.elements(4).unwrap() {
            assert_eq!(w.mul(&w.teichmuller(&x), &w.teichmuller(&y)).unwrap(), w.teichmuller(&f4.mul(&x, &y)));
        }
        let w1 = WittRing::new(&f4, 1).unwrap();
        assert_eq!(w.restrict(&w.teichmuller(&x), 1).unwrap(), w1.teichmuller(&x));
    }
}

#[test]
fn truncation_sequence_exact() {
    // 0 → W_1 → W_3 → W_2 → 0 on underlying sets: kernel of π is the image of i
    let a = FpAlgebra::poly_quotient(2, &[0, 1, 1]).unwrap();
    let w3 = WittRing::new(&a, 3).unwrap();
    let w1 = WittRing::new(&a, 1).unwrap();
    let els = w3.elements(1 << 10).unwrap();
    let ker: Vec<_> = els.iter().filter(|x| WittRing::new(&a, 2).unwrap().is_zero(&w3.restrict(x, 2).unwrap())).collect();
    let img: Vec<_> = w1.elements(16).unwrap().iter().map(|x| w3.inject(x, 2).unwrap()).collect();
    assert_eq!(ker.len(), img.len());
    for k in ker {
        assert!(img.contains(k));
    }
    for x in &els {
        for y in els.iter().step_by(5) {
            let s = w3.add(x, y).unwrap();
            let w2 = WittRing::new(&a, 2).unwrap();
            assert_eq!(w3.restrict(&s, 2).unwrap(), w2.add(&w3.restrict(x, 2).unwrap(), &w3.restrict(y, 2).unwrap()).unwrap());
        }
    }
}

#[test]
fn exp_inverts_log() {
    let f3 = FpAlgebra::prime_field(3).unwrap();
    let w3 = WittRing::new(&f3, 3).unwrap();
    let w2 = WittRing::new(&f3, 2).unwrap();
    let ts = w2.elements(100).unwrap();
    assert_eq!(ts.len(), 9);
    for t in &ts {
        let e = witt_exp(&w3, t).unwrap();
        assert_eq!(e.0[0], vec![1]);
        assert_eq!(witt_log(&w3, &e).unwrap(), *t);
    }
    // all 9 elements of 1 + i(W_2), and log turns products into sums
    let units: Vec<_> = w3.elements(100).unwrap().into_iter().filter(|x| x.0[0] == vec![1]).collect();
    assert_eq!(units.len(), 9);
    for u in &units {
        assert_eq!(witt_exp(&w3, &witt_log(&w3, u).unwrap()).unwrap(), *u);
        for v in &units {
            let lhs = witt_log(&w3, &w3.mul(u, v).unwrap()).unwrap();
            let rhs = w2.add(&witt_log(&w3, u).unwrap(), &witt_log(&w3, v).unwrap()).unwrap();
            assert_eq!(lhs, rhs);
        }
    }
}

#[test]
fn exp_log_over_f9() {
    // 1 + i(W_2(F_9)) has 81 elements
    let f9 = FpAlgebra::galois_field(3, 2).unwrap();
    let w3 = WittRing::new(&f9, 3).unwrap();
    let w2 = WittRing::new(&f9, 2).unwrap();
    for t in w2.elements(100).unwrap() {
        assert_eq!(witt_log(&w3, &witt_exp(&w3, &t).unwrap()).unwrap(), t);
    }
}

#[test]
fn graded_witt_addition_stays_within_weights() {
    // adding homogeneous tuples (deg 1, deg p) never overflows the truncation p
    let s = GradedAlgebra::symmetric(2, 2, 2).unwrap();
    let w = WittRing::new(&s, 2).unwrap();
    let x = WittVector(vec![s.var(0), s.mul(&s.var(1), &s.var(1)).unwrap()]);
    let y = WittVector(vec![s.var(1), s.zero()]);
    let z = w.add(&x, &y).unwrap();
    assert!(s.is_homogeneous_of(&z.0[0], 1));
    assert!(s.is_homogeneous_of(&z.0[1], 2));
}

proptest! {
    #[test]
    fn ghost_components_are_ring_maps(x in prop::collection::vec(-20i64..20, 3), y in prop::collection::vec(-20i64..20, 3), pi in 0usize..2) {
        let p = [2u64, 3][pi];
        let w = WittPolynomials::get(p, 3).unwrap();
        let xb: Vec<BigInt> = x.iter().map(|&v| BigInt::from(v)).collect();
        let yb: Vec<BigInt> = y.iter().map(|&v| BigInt::from(v)).collect();
        let mut args = xb.clone();
        args.extend(yb.iter().cloned());
        let s: Vec<BigInt> = (0..3).map(|k| WittPolynomials::eval_int(&w.sum[k], &args)).collect();
        let m: Vec<BigInt> = (0..3).map(|k| WittPolynomials::eval_int(&w.prod[k], &args)).collect();
        for k in 0..3 {
            prop_assert_eq!(WittPolynomials::ghost_int(p, &s, k), WittPolynomials::ghost_int(p, &xb, k) + WittPolynomials::ghost_int(p, &yb, k));
            prop_assert_eq!(WittPolynomials::ghost_int(p, &m, k), WittPolynomials::ghost_int(p, &xb, k) * WittPolynomials::ghost_int(p, &yb, k));
        }
    }

    #[test]
    fn sampled_ring_laws_w3_f9(a in 0usize..729, b in 0usize..729, c in 0usize..729) {
        let f9 = FpAlgebra::galois_field(3, 2).unwrap();
        let w = WittRing::new(&f9, 3).unwrap();
        let (x, y, z) = (w.element(a), w.element(b), w.element(c));
        prop_assert_eq!(w.mul(&w.mul(&x, &y).unwrap(), &z).unwrap(), w.mul(&x, &w.mul(&y, &z).unwrap()).unwrap());
        prop_assert_eq!(w.mul(&x, &w.add(&y, &z).unwrap()).unwrap(), w.add(&w.mul(&x, &y).unwrap(), &w.mul(&x, &z).unwrap()).unwrap());
        prop_assert_eq!(w.add(&x, &y).unwrap(), w.add(&y, &x).unwrap());
    }
}
