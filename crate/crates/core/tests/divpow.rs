use proptest::prelude::*;
use std::collections::HashSet;
use wittkit::divpow::*;
use wittkit::fpalg::FpAlgebra;
use wittkit::zpn_linalg::{binomial, ModuleMap, Modulus, ZpnModule};

fn all_vectors(k: usize, q: u64) -> Vec<Vec<u64>> {
    let mut out = vec![vec![]];
    for _ in 0..k {
        out = out.into_iter().flat_map(|v: Vec<u64>| (0..q).map(move |c| { let mut w = v.clone(); w.push(c); w })).collect();
    }
    out
}

/// Subgroup of (Z/q)^k generated by the given vectors, by closure under addition.
fn closure(m: Modulus, k: usize, gens: &[Vec<u64>]) -> HashSet<Vec<u64>> {
    let mut set: HashSet<Vec<u64>> = HashSet::new();
    set.insert(vec![0; k]);
    let mut frontier = vec![vec![0; k]];
    while let Some(v) = frontier.pop() {
        for g in gens {
            let w: Vec<u64> = v.iter().zip(g).map(|(&a, &b)| m.add(a, b)).collect();
            if set.insert(w.clone()) {
                frontier.push(w);
            }
        }
    }
    set
}

#[test]
fn gamma_two_of_klein_group_by_brute_force() {
    let m = Modulus::new(2, 2).unwrap();
    let v = ZpnModule::cyclic_sum(m, &[1, 1]);
    let g = DividedPowerModule::new(&v, 2, RelatorScheme::Full).unwrap();
    assert_eq!(g.module.invariant_factors(), vec![4, 4, 2]);

    // relators [x+y]_2 − [x]_2 over all 16 x in F and all y in N = 2F
    let b = SymbolBasis::new(m, 2, 2);
    let ys: Vec<Vec<u64>> = all_vectors(2, 4).into_iter().filter(|y| y.iter().all(|c| c % 2 == 0)).collect();
    let mut rels = Vec::new();
    for x in all_vectors(2, 4) {
        for y in &ys {
            let xy: Vec<u64> = x.iter().zip(y).map(|(a, c)| (a + c) % 4).collect();
            rels.push(b.pure(&xy).iter().zip(b.pure(&x)).map(|(a, c)| (a + 4 - c) % 4).collect::<Vec<u64>>());
        }
    }
    let span = closure(m, 3, &rels);
    assert_eq!(span.len(), 2);
    assert!(span.contains(&vec![0, 2, 0]), "span is generated by 2[e1]_1[e2]_1");
    // quotient of order 64 / 2 = 32 with 8 elements killed by 2: shape (4, 4, 2)
    let killed_by_two = all_vectors(3, 4)
        .into_iter()
        .filter(|x| span.contains(&x.iter().map(|a| (2 * a) % 4).collect::<Vec<_>>()))
        .count();
    assert_eq!(64 / span.len(), 32);
    assert_eq!(killed_by_two / span.len(), 8);
}

#[test]
fn small_presented_examples() {
    let m = Modulus::new(2, 2).unwrap();
    let g = DividedPowerModule::new(&ZpnModule::cyclic_sum(m, &[1]), 2, RelatorScheme::Full).unwrap();
    assert_eq!(g.module.invariant_factors(), vec![4]);
    for (p, n, k, d) in [(2u64, 2u32, 3usize, 2u32), (3, 1, 2, 3), (3, 2, 2, 2)] {
        let m = Modulus::new(p, n).unwrap();
        let g = DividedPowerModule::new(&ZpnModule::free(m, k), d, RelatorScheme::Sparse).unwrap();
        let rank = binomial(k as u64 + d as u64 - 1, d as u64) as usize;
        assert_eq!(g.module.invariant_factors(), vec![m.q(); rank]);
    }
}

#[test]
fn integral_divided_powers_agree_with_truncated_ones() {
    let cases = [
        (Modulus::new(2, 1).unwrap(), vec![1u32], 2u32),
        (Modulus::new(2, 1).unwrap(), vec![1, 1], 2),
        (Modulus::new(2, 2).unwrap(), vec![2, 1], 2),
        (Modulus::new(3, 1).unwrap(), vec![1, 1], 3),
        (Modulus::new(3, 2).unwrap(), vec![2], 3),
    ];
    for (m, exps, d) in cases {
        let c = compare_integral_gamma(&ZpnModule::cyclic_sum(m, &exps), d).unwrap();
        assert!(c.agree, "{exps:?}: {c:?}");
    }
    // Γ^2_Z(Z/2) = Z/4
    let c = compare_integral_gamma(&ZpnModule::cyclic_sum(Modulus::new(2, 1).unwrap(), &[1]), 2).unwrap();
    assert_eq!(c.integral_factors, vec![4]);
}

fn arb_module() -> impl Strategy<Value = (u64, u32, usize, Vec<Vec<u64>>, u32)> {
    prop_oneof![Just((2u64, 2u32)), Just((2, 3)), Just((3, 1)), Just((3, 2))]
        .prop_flat_map(|(p, n)| {
            let q = p.pow(n);
            let kmax: usize = if q > 4 { 2 } else { 3 };
            (Just(p), Just(n), 1usize..=kmax).prop_flat_map(move |(p, n, k)| {
                (Just(p), Just(n), Just(k), prop::collection::vec(prop::collection::vec(0..q, k), 0..3), 2..=p as u32)
            })
        })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn sparse_relators_match_full_enumeration((p, n, k, rels, d) in arb_module()) {
        let m = Modulus::new(p, n).unwrap();
        let module = ZpnModule::new(m, k, &rels);
        let full = DividedPowerModule::new(&module, d, RelatorScheme::Full).unwrap();
        let sparse = DividedPowerModule::new(&module, d, RelatorScheme::Sparse).unwrap();
        prop_assert_eq!(&full.relator_span, &sparse.relator_span);
    }

    #[test]
    fn symbol_identities(x in prop::collection::vec(0u64..9, 2), y in prop::collection::vec(0u64..9, 2), lambda in 0u64..9) {
        let m = Modulus::new(3, 2).unwrap();
        let fam = GammaFamily::new(m, 2, 3);
        for a in 0..=3u32 {
            for b in 0..=(3 - a) {
                let lhs = fam.symbol(&[(x.clone(), a), (x.clone(), b)]);
                let rhs: Vec<u64> = fam.degree(a + b).pure(&x).iter()
                    .map(|&c| m.mul(c, (binomial((a + b) as u64, a as u64) % 9) as u64)).collect();
                prop_assert_eq!(lhs, rhs);
            }
        }
        let xy: Vec<u64> = x.iter().zip(&y).map(|(&a, &b)| m.add(a, b)).collect();
        let mut sum = vec![0; fam.degree(3).len()];
        for i in 0..=3u32 {
            let t = fam.symbol(&[(x.clone(), i), (y.clone(), 3 - i)]);
            sum = sum.iter().zip(t).map(|(&a, b)| m.add(a, b)).collect();
        }
        prop_assert_eq!(fam.degree(3).pure(&xy), sum);
        let lx: Vec<u64> = x.iter().map(|&a| m.mul(a, lambda)).collect();
        let scaled: Vec<u64> = fam.degree(3).pure(&x).iter().map(|&c| m.mul(c, m.pow(lambda, 3))).collect();
        prop_assert_eq!(fam.degree(3).pure(&lx), scaled);
    }

    #[test]
    fn functoriality(f in prop::collection::vec(0u64..4, 4), g in prop::collection::vec(0u64..4, 6)) {
        let m = Modulus::new(2, 2).unwrap();
        let (m2, m3) = (ZpnModule::free(m, 2), ZpnModule::free(m, 3));
        let fm = ModuleMap::new(m2.clone(), m2.clone(), vec![f[..2].to_vec(), f[2..].to_vec()]).unwrap();
        let gm = ModuleMap::new(m2.clone(), m3.clone(), vec![g[..3].to_vec(), g[3..].to_vec()]).unwrap();
        let g2 = DividedPowerModule::new(&m2, 2, RelatorScheme::Full).unwrap();
        let g3 = DividedPowerModule::new(&m3, 2, RelatorScheme::Sparse).unwrap();
        let composite = g2.functor_map(&fm.compose(&gm).unwrap(), &g3).unwrap();
        let separate = g2.functor_map(&fm, &g2).unwrap().compose(&g2.functor_map(&gm, &g3).unwrap()).unwrap();
        prop_assert!(composite.equals(&separate));
    }

    #[test]
    fn polynomial_law_homogeneity(seed in 0u64..1000) {
        let law = PolynomialLaw::divided_power(ZpnModule::free(Modulus::new(2, 3).unwrap(), 2), 2);
        prop_assert!(law.check_homogeneity(2, seed).unwrap());
        prop_assert!(law.check_base_change(2, seed).unwrap());
    }
}

fn fields() -> Vec<FpAlgebra> {
    vec![
        FpAlgebra::prime_field(2).unwrap(),
        FpAlgebra::prime_field(3).unwrap(),
        FpAlgebra::galois_field(2, 2).unwrap(),
    ]
}

#[test]
fn verschiebung_and_frobenius_examples() {
    let f2 = FpAlgebra::prime_field(2).unwrap();
    let v = VerFrob::new(&f2, 2).unwrap();
    assert_eq!((v.twist.rank(), v.sym.rank(), v.gamma.rank()), (2, 3, 3));
    assert_eq!(v.ver.cokernel().0.length(), 1);
    assert_eq!(v.frob.kernel().0.length(), 1);
    // α(e1²) = 0 and α(e1 e2) = [e1]_1[e2]_1 spans the kernel of Frob
    let e1e2 = v.symbols.unit_vector(&[1, 1]);
    assert_eq!(v.alpha.apply(&v.symbols.unit_vector(&[2, 0])), vec![0, 0, 0]);
    assert_eq!(v.alpha.apply(&e1e2), e1e2);
    assert_eq!(v.frob.apply(&e1e2), vec![0, 0]);

    let f3 = FpAlgebra::prime_field(3).unwrap();
    let v = VerFrob::new(&f3, 2).unwrap();
    assert_eq!((v.twist.rank(), v.sym.rank(), v.gamma.rank()), (2, 4, 4));
    let ranks: Vec<usize> = v.fundamental_2_extension()[1..4].iter().map(|f| f.domain.rank()).collect();
    assert_eq!(ranks, vec![2, 4, 4]);

    let f4 = FpAlgebra::galois_field(2, 2).unwrap();
    let v = VerFrob::new(&f4, 1).unwrap();
    assert!(v.ver.is_injective() && v.frob.is_surjective());
}

#[test]
fn sequences_are_exact_for_small_free_modules() {
    for a in fields() {
        for rank in 1..=3 {
            let v = VerFrob::new(&a, rank).unwrap();
            assert!(v.is_a_linear());
            assert!(wittkit::zpn_linalg::is_exact(&v.ver_sequence()).unwrap().exact);
            assert!(wittkit::zpn_linalg::is_exact(&v.frob_sequence()).unwrap().exact);
            assert!(v.fundamental_2_extension_exact().unwrap().exact);
            assert!(v.gamma_zero_iso().unwrap().is_isomorphism());
            assert!(duality_check(&a, rank).unwrap().holds, "p = {}, dim {}, rank {rank}", a.p(), a.dim());
        }
    }
}

#[test]
fn fundamental_extension_by_enumeration() {
    for (a, rank) in [(FpAlgebra::prime_field(2).unwrap(), 2), (FpAlgebra::prime_field(3).unwrap(), 2), (FpAlgebra::galois_field(2, 2).unwrap(), 2)] {
        let v = VerFrob::new(&a, rank).unwrap();
        let p = a.p();
        let seq = [&v.ver, &v.alpha, &v.frob];
        let image = |f: &ModuleMap| -> HashSet<Vec<u64>> { all_vectors(f.domain.rank(), p).iter().map(|x| f.apply(x)).collect() };
        let kernel = |f: &ModuleMap| -> HashSet<Vec<u64>> {
            all_vectors(f.domain.rank(), p).into_iter().filter(|x| f.apply(x).iter().all(|&c| c == 0)).collect()
        };
        assert_eq!(kernel(seq[0]).len(), 1, "Ver injective");
        assert_eq!(image(seq[0]), kernel(seq[1]));
        assert_eq!(image(seq[1]), kernel(seq[2]));
        assert_eq!(image(seq[2]).len() as u64, p.pow(v.twist.rank() as u32), "Frob surjective");
    }
}

#[test]
fn pure_symbol_formulas_over_f4() {
    let a = FpAlgebra::galois_field(2, 2).unwrap();
    let v = VerFrob::new(&a, 2).unwrap();
    let els = a.elements(1 << 10).unwrap();
    for c0 in &els {
        for c1 in &els {
            let x = vec![c0.clone(), c1.clone()];
            let tw = v.twisted(&x).unwrap();
            assert_eq!(v.frob.apply(&v.pure(&x).unwrap()), tw);
            assert_eq!(v.ver.apply(&tw), v.power(&x).unwrap());
            assert!(v.alpha.apply(&v.power(&x).unwrap()).iter().all(|&c| c == 0));
        }
    }
}

#[test]
fn gamma_algebra_pure_law_on_witt_rings() {
    use wittkit::witt::WittRing;
    for b in [FpAlgebra::prime_field(2).unwrap(), FpAlgebra::galois_field(2, 2).unwrap(), FpAlgebra::poly_quotient(2, &[0, 0, 1]).unwrap()] {
        let r = WittRing::new(&b, 2).unwrap().to_finring().unwrap();
        let g = GammaAlgebra::new(&r, Modulus::new(2, 3).unwrap(), 2, RelatorScheme::Sparse).unwrap();
        g.check_pure_law().unwrap();
    }
}
