use proptest::prelude::*;
use std::collections::HashMap;
use wittkit::deform::*;
use wittkit::error::Error;
use wittkit::finring::FinRing;
use wittkit::fpalg::{Elem, FpAlgebra};
use wittkit::witt::{WittRing, WittVector};
use wittkit::wittrec::witt_ring_table;
use wittkit::zpn_linalg::Modulus;
use wittkit::zpnalg::ZpnAlgebra;

const CAP: u64 = 1 << 16;

fn lift(p: u64, f: &[i64]) -> ZpnAlgebra {
    let m = Modulus::new(p, 2).unwrap();
    if f.is_empty() {
        ZpnAlgebra::integers(m)
    } else {
        ZpnAlgebra::poly_quotient(m, f).unwrap()
    }
}

/// Flat lifts over Z/p² of reduced algebras: F2, F4, F2[t]/(t²+t), F3, F9.
fn reduced_lifts() -> Vec<ZpnAlgebra> {
    vec![lift(2, &[]), lift(2, &[1, 1, 1]), lift(2, &[0, 1, 1]), lift(3, &[]), lift(3, &[1, 0, 1])]
}

fn flat(e: &SquareZeroExtension) -> SquareZeroExtension {
    e.clone()
}

fn scalar_map(m: &AModule, a: &Elem) -> AModuleMap {
    AModuleMap::new(m.clone(), m.clone(), m.matrix_of(a)).unwrap()
}

// Fibered-product oracles: the rings are built from the two total rings and read back through `from_ring`.

fn fibered_baer_sum(x: &SquareZeroExtension, y: &SquareZeroExtension) -> SquareZeroExtension {
    let a = &x.base;
    let k = &x.kernel;
    let an = a.size() as usize;
    let n = x.order() as usize;
    // (e1, e2) modulo (ι n, −ι n); representative (s(a), s(a) + ι(m1 + m2))
    let canon = |e1: (usize, Elem), e2: (usize, Elem)| -> usize {
        assert_eq!(e1.0, e2.0);
        e1.0 + an * k.index(&k.add(&e1.1, &e2.1))
    };
    let split = |i: usize| -> ((usize, Elem), (usize, Elem)) { ((i % an, k.zero()), (i % an, k.element(i / an))) };
    let ring = FinRing::from_ops(
        n,
        0,
        a.index(&a.one()),
        |i, j| {
            let ((u1, u2), (v1, v2)) = (split(i), split(j));
            canon(x.add(&u1, &v1), y.add(&u2, &v2))
        },
        |i, j| {
            let ((u1, u2), (v1, v2)) = (split(i), split(j));
            canon(x.mul(&u1, &v1), y.mul(&u2, &v2))
        },
    )
    .unwrap();
    let pi: Vec<usize> = (0..n).map(|i| i % an).collect();
    let iota: Vec<usize> = (0..k.size() as usize).map(|m| an * m).collect();
    SquareZeroExtension::from_ring(a, k, &ring, &pi, &iota).unwrap()
}

fn fibered_pullback(e: &SquareZeroExtension, g: &wittkit::fpalg::AlgebraMorphism) -> SquareZeroExtension {
    let a2 = &g.domain;
    let k = &e.kernel;
    let kr = k.restrict(g).unwrap();
    let an = a2.size() as usize;
    let n = an * k.size() as usize;
    let img = |i: usize| e.base.index(&g.apply(&a2.element(i)));
    // (a', e) with g(a') = π(e); e = s(g a') + ι m stored as a' + |A'|·m
    let to_pair = |i: usize| (i % an, (img(i % an), k.element(i / an)));
    let from_pair = |a: usize, z: (usize, Elem)| {
        assert_eq!(z.0, img(a));
        a + an * k.index(&z.1)
    };
    let ring = FinRing::from_ops(
        n,
        0,
        a2.index(&a2.one()),
        |i, j| {
            let ((a, x), (b, y)) = (to_pair(i), to_pair(j));
            from_pair(a2.index(&a2.add(&a2.element(a), &a2.element(b))), e.add(&x, &y))
        },
        |i, j| {
            let ((a, x), (b, y)) = (to_pair(i), to_pair(j));
            from_pair(a2.index(&a2.mul(&a2.element(a), &a2.element(b))), e.mul(&x, &y))
        },
    )
    .unwrap();
    let pi: Vec<usize> = (0..n).map(|i| i % an).collect();
    let iota: Vec<usize> = (0..k.size() as usize).map(|m| an * m).collect();
    SquareZeroExtension::from_ring(a2, &kr, &ring, &pi, &iota).unwrap()
}

fn fibered_pushforward(e: &SquareZeroExtension, f: &AModuleMap) -> SquareZeroExtension {
    let a = &e.base;
    let (k, k2) = (&e.kernel, &f.target);
    let an = a.size() as usize;
    let n = an * k2.size() as usize;
    // M' ⊕ E modulo (−f(m), ι m); representative (m' + f(m), s(a))
    let canon = |m2: Elem, z: (usize, Elem)| z.0 + an * k2.index(&k2.add(&m2, &f.apply(&z.1)));
    let split = |i: usize| (k2.element(i / an), (i % an, k.zero()));
    let ring = FinRing::from_ops(
        n,
        0,
        a.index(&a.one()),
        |i, j| {
            let ((m, x), (m2, y)) = (split(i), split(j));
            canon(k2.add(&m, &m2), e.add(&x, &y))
        },
        |i, j| {
            let ((m, x), (m2, y)) = (split(i), split(j));
            let cross = k2.add(&k2.act(&a.element(x.0), &m2), &k2.act(&a.element(y.0), &m));
            canon(cross, e.mul(&x, &y))
        },
    )
    .unwrap();
    let pi: Vec<usize> = (0..n).map(|i| i % an).collect();
    let iota: Vec<usize> = (0..k2.size() as usize).map(|m| an * m).collect();
    SquareZeroExtension::from_ring(a, k2, &ring, &pi, &iota).unwrap()
}

/// Ring endomorphisms of the total ring lifting Frobenius, found by closing candidate images of generators.
fn brute_force_frobenius_lifts(e: &SquareZeroExtension) -> usize {
    let ring = e.to_finring().unwrap();
    let a = &e.base;
    let an = a.size() as usize;
    let n = ring.size();
    let gens: Vec<usize> = (0..a.dim()).map(|i| e.index(&e.section(a.index(&a.basis(i))))).collect();
    let fibre = |x: usize| -> Vec<usize> {
        let target = a.index(&a.frob(&a.element(x % an)));
        (0..n).filter(|&y| y % an == target).collect()
    };
    let choices: Vec<Vec<usize>> = gens.iter().map(|&g| fibre(g)).collect();
    let total: usize = choices.iter().map(|c| c.len()).product();
    let mut found = 0;
    'outer: for code in 0..total {
        let mut map: HashMap<usize, usize> = HashMap::new();
        map.insert(ring.zero(), ring.zero());
        map.insert(ring.one(), ring.one());
        let mut c = code;
        for (g, ch) in gens.iter().zip(&choices) {
            let v = ch[c % ch.len()];
            c /= ch.len();
            if map.insert(*g, v).is_some_and(|old| old != v) {
                continue 'outer;
            }
        }
        loop {
            let known: Vec<(usize, usize)> = map.iter().map(|(&k, &v)| (k, v)).collect();
            let before = map.len();
            for &(x, fx) in &known {
                for &(y, fy) in &known {
                    for (z, fz) in [(ring.add(x, y), ring.add(fx, fy)), (ring.mul(x, y), ring.mul(fx, fy))] {
                        if *map.entry(z).or_insert(fz) != fz {
                            continue 'outer;
                        }
                    }
                }
            }
            if map.len() == before {
                break;
            }
        }
        let table: Vec<usize> = (0..n).map(|x| map[&x]).collect();
        if ring.is_hom_to(&ring, &table) && (0..n).all(|x| table[x] % an == a.index(&a.frob(&a.element(x % an)))) {
            found += 1;
        }
    }
    found
}

#[test]
fn witt_extension_matches_witt_ring_table() {
    for b in reduced_lifts() {
        let a = b.mod_p().unwrap();
        let an = a.size() as usize;
        let table = witt_ring_table(&a, 2).unwrap();
        let pi: Vec<usize> = (0..table.size()).map(|i| i % an).collect();
        let iota: Vec<usize> = (0..an).map(|m| an * m).collect();
        let oracle = SquareZeroExtension::from_ring(&a, &AModule::frob_pushforward(&a), &table, &pi, &iota).unwrap();
        assert_eq!(oracle, witt_extension(&a).unwrap());
    }
}

#[test]
fn kappa_examples() {
    for b in reduced_lifts() {
        let e = SquareZeroExtension::from_lift(&b).unwrap();
        let a = e.base.clone();
        assert_eq!(e.kappa().unwrap(), AModuleMap::identity(&AModule::free(&a, 1)));
        let split = SquareZeroExtension::split(&a, &AModule::free(&a, 1)).unwrap();
        assert!(split.kappa().unwrap().matrix.iter().flatten().all(|&x| x == 0));
        assert_eq!(witt_extension(&a).unwrap().kappa().unwrap(), frobenius_map(&a));
    }
    // Z/4[t]/(t²) over the dual numbers: κ = Id even though the base is not reduced
    let e = SquareZeroExtension::from_lift(&lift(2, &[0, 0, 1])).unwrap();
    assert!(!e.base.is_reduced());
    assert_eq!(e.kappa().unwrap(), AModuleMap::identity(&e.kernel));
}

fn extension_corpus(b: &ZpnAlgebra) -> Vec<SquareZeroExtension> {
    let e = SquareZeroExtension::from_lift(b).unwrap();
    let a = e.base.clone();
    let m = AModule::free(&a, 1);
    let mut out = vec![e.clone(), SquareZeroExtension::split(&a, &m).unwrap()];
    for x in a.elements(u64::MAX).unwrap().into_iter().skip(2).take(3) {
        out.push(e.pushforward(&scalar_map(&m, &x)).unwrap());
    }
    out
}

#[test]
fn kappa_is_additive_under_baer_sum() {
    for b in [lift(2, &[0, 1, 1]), lift(2, &[1, 1, 1]), lift(3, &[])] {
        let corpus = extension_corpus(&b);
        for x in &corpus {
            for y in &corpus {
                let (kx, ky) = (x.kappa().unwrap(), y.kappa().unwrap());
                let ks = x.baer_sum(y).unwrap().kappa().unwrap();
                let f = x.base.field();
                let expected: Vec<Vec<u64>> = kx.matrix.iter().zip(&ky.matrix).map(|(r, s)| r.iter().zip(s).map(|(&u, &v)| f.add(u, v)).collect()).collect();
                assert_eq!(ks.matrix, expected);
                let kd = x.baer_difference(y).unwrap().kappa().unwrap();
                let diff: Vec<Vec<u64>> = kx.matrix.iter().zip(&ky.matrix).map(|(r, s)| r.iter().zip(s).map(|(&u, &v)| f.sub(u, v)).collect()).collect();
                assert_eq!(kd.matrix, diff);
            }
        }
    }
}

#[test]
fn baer_sum_agrees_with_fibered_product() {
    for b in [lift(2, &[]), lift(2, &[0, 1, 1]), lift(3, &[])] {
        let corpus = extension_corpus(&b);
        for x in &corpus {
            for y in &corpus {
                let oracle = fibered_baer_sum(x, y);
                let ours = x.baer_sum(y).unwrap();
                assert!(ours.find_isomorphism(&oracle, CAP).unwrap().is_some());
            }
        }
    }
}

#[test]
fn baer_group_laws() {
    for b in reduced_lifts() {
        let corpus = extension_corpus(&b);
        let e = &corpus[0];
        let split = SquareZeroExtension::split(&e.base, &e.kernel).unwrap();
        assert!(e.baer_difference(e).unwrap().find_isomorphism(&split, CAP).unwrap().is_some());
        assert!(split.baer_sum(e).unwrap().find_isomorphism(e, CAP).unwrap().is_some());
        // the inverse is the pushforward along −1
        let minus = AModuleMap::scalar(&e.kernel, e.base.p() - 1);
        assert_eq!(e.baer_inverse().unwrap(), e.pushforward(&minus).unwrap());
        // a flat lift is not split: κ is an isomorphism invariant
        assert!(e.find_isomorphism(&split, CAP).unwrap().is_none());
    }
}

#[test]
fn pushforward_and_pullback_agree_with_fibered_products() {
    for b in [lift(2, &[]), lift(2, &[1, 1, 1]), lift(2, &[0, 1, 1]), lift(3, &[])] {
        let e = SquareZeroExtension::from_lift(&b).unwrap();
        let a = e.base.clone();
        let id = AModuleMap::identity(&e.kernel);
        assert!(e.pushforward(&id).unwrap().find_isomorphism(&e, CAP).unwrap().is_some());
        let frob = frobenius_map(&a);
        let pushed = e.pushforward(&frob).unwrap();
        assert!(pushed.find_isomorphism(&fibered_pushforward(&e, &frob), CAP).unwrap().is_some());
        let pulled = e.pullback(&a.frobenius()).unwrap();
        assert!(pulled.find_isomorphism(&fibered_pullback(&e, &a.frobenius()), CAP).unwrap().is_some());
        // a flat lift of a perfect algebra is W₂(A), and its Frobenius pullback again
        let w2 = witt_extension(&a).unwrap();
        let pulled_w2 = w2.pullback(&a.frobenius()).unwrap();
        assert!(pulled_w2.find_isomorphism(&fibered_pullback(&w2, &a.frobenius()), CAP).unwrap().is_some());
    }
}

#[test]
fn solver_and_exhaustive_isomorphism_search_agree() {
    for b in [lift(2, &[0, 1, 1]), lift(2, &[1, 1, 1]), lift(3, &[])] {
        let corpus = extension_corpus(&b);
        for x in &corpus {
            for y in &corpus {
                let exhaustive = x.find_isomorphism(y, u64::MAX).unwrap();
                let solved = x.find_isomorphism(y, 0).unwrap();
                assert_eq!(exhaustive.is_some(), solved.is_some());
                if let Some(iso) = solved {
                    assert_eq!(iso.mode, wittkit::report::Mode::Solver);
                    assert!(x.is_isomorphism(y, &iso.delta));
                }
            }
        }
    }
}

fn flat_by_kappa(e: &SquareZeroExtension) -> bool {
    let k = e.kappa().unwrap();
    k.source == k.target && k.is_injective() && k.is_surjective()
}

fn flat_by_group(e: &SquareZeroExtension) -> bool {
    e.is_free_over_zp2().unwrap() && reduces_to_base(e)
}

#[test]
fn flatness_criteria_agree() {
    let mut seen = (0, 0);
    for b in reduced_lifts().into_iter().chain([lift(2, &[0, 0, 1]), lift(2, &[2, 0, 1])]) {
        for e in extension_corpus(&b) {
            let (k, g) = (flat_by_kappa(&e), flat_by_group(&e));
            assert_eq!(k, g, "{}", e.summary().details);
            if k { seen.0 += 1 } else { seen.1 += 1 }
        }
    }
    assert!(seen.0 > 0 && seen.1 > 0);
}

#[test]
fn canonical_extensions_reject_non_reduced_algebras() {
    let dual = FpAlgebra::poly_quotient(2, &[0, 0, 1]).unwrap();
    assert!(matches!(CanonicalExtensions::new(&dual), Err(Error::NotReduced(_))));
}

#[test]
fn canonical_checks_and_cartier_splitting() {
    for b in reduced_lifts() {
        let a = b.mod_p().unwrap();
        let c = CanonicalExtensions::new(&a).unwrap();
        assert!(c.passed(), "{:?}", c.checks);
        // finite reduced algebras are perfect, so B¹ vanishes
        assert_eq!(c.b1.dim, 0);
        assert!(c.cartier_splits(CAP).unwrap().is_some());
    }
}

#[test]
fn phi_psi_round_trips() {
    for b in reduced_lifts() {
        let e = SquareZeroExtension::from_lift(&b).unwrap();
        let c = CanonicalExtensions::new(&e.base).unwrap();
        let d = c.phi(&e).unwrap();
        assert!(d.extension.kappa().unwrap().matrix.iter().flatten().all(|&x| x == 0));
        let back = c.psi(&d).unwrap().lift;
        assert!(back.find_isomorphism(&e, CAP).unwrap().is_some());
        let again = c.phi(&back).unwrap();
        assert!(c.datum_isomorphism(&again, &d, CAP).unwrap().is_some());
        // Ψ of the split datum is again a flat lift
        let split = SquareZeroExtension::split(&e.base, &AModule::frob_pushforward(&e.base)).unwrap();
        let datum = LiftDatum { extension: split, trivialization: vec![c.b1.zero(); e.base.size() as usize] };
        let l = c.psi(&datum).unwrap().lift;
        assert!(flat_by_kappa(&l) && flat_by_group(&l));
        assert!(c.datum_isomorphism(&c.phi(&l).unwrap(), &datum, CAP).unwrap().is_some());
    }
}

#[test]
fn phi_rejects_non_flat_input() {
    let e = SquareZeroExtension::from_lift(&lift(2, &[0, 1, 1])).unwrap();
    let c = CanonicalExtensions::new(&e.base).unwrap();
    let split = SquareZeroExtension::split(&e.base, &e.kernel).unwrap();
    assert!(matches!(c.phi(&split), Err(Error::Precondition(_))));
}

#[test]
fn frobenius_lifts_agree_with_brute_force() {
    for b in reduced_lifts().into_iter().chain([lift(2, &[0, 0, 1]), lift(2, &[2, 0, 1])]) {
        let e = SquareZeroExtension::from_lift(&b).unwrap();
        let found = frobenius_lift(&e, CAP).unwrap();
        let count = brute_force_frobenius_lifts(&e);
        assert_eq!(found.is_some(), count > 0, "{:?}", b.labels());
        if let Some(f) = found {
            let ring = e.to_finring().unwrap();
            assert!(ring.is_hom_to(&ring, &f.table));
        }
    }
    // t ↦ 2c would need 4c² = 2 in Z/4[t]/(t² − 2)
    let e = SquareZeroExtension::from_lift(&lift(2, &[2, 0, 1])).unwrap();
    assert!(frobenius_lift(&e, CAP).unwrap().is_none());
}

#[test]
fn frobenius_split_lifts_are_witt_vectors() {
    for b in reduced_lifts() {
        let a = b.mod_p().unwrap();
        let c = CanonicalExtensions::new(&a).unwrap();
        let s = c.frobenius_splitting().unwrap();
        let sl = c.frobenius_split_lift(&s).unwrap();
        assert!(sl.checks.iter().all(|k| k.passed), "{:?}", sl.checks);
        assert!(sl.checks.iter().any(|k| k.id == "split-lift.witt"));
        assert!(sl.lift.find_isomorphism(&flat(&SquareZeroExtension::from_lift(&b).unwrap()), CAP).unwrap().is_some());
    }
}

// W₂-bundle layer

/// A ⊗ F_p[X_1..X_r] truncated above degree p, with the coordinates of degree-p monomials.
fn truncated_polys(a: &FpAlgebra, r: usize) -> (FpAlgebra, Vec<Vec<u32>>) {
    let p = a.p() as u32;
    let mut monos: Vec<Vec<u32>> = vec![];
    for d in 0..=p {
        monos.extend(wittkit::divpow::exponent_vectors(r, d));
    }
    let da = a.dim();
    let n = monos.len() * da;
    let pos = |m: &[u32]| monos.iter().position(|x| x == m);
    let mut consts = vec![vec![vec![0u64; n]; n]; n];
    for (i, m1) in monos.iter().enumerate() {
        for (j, m2) in monos.iter().enumerate() {
            let s: Vec<u32> = m1.iter().zip(m2).map(|(x, y)| x + y).collect();
            if let Some(k) = pos(&s) {
                for u in 0..da {
                    for v in 0..da {
                        let prod = a.mul(&a.basis(u), &a.basis(v));
                        consts[i * da + u][j * da + v][k * da..(k + 1) * da].copy_from_slice(&prod);
                    }
                }
            }
        }
    }
    let mut unit = vec![0; n];
    unit[..da].copy_from_slice(&a.one());
    let labels = (0..n).map(|i| format!("m{}b{}", i / da, i % da)).collect();
    (FpAlgebra::from_table(a.p(), labels, consts, unit).unwrap(), monos)
}

#[test]
fn bundle_extension_matches_witt_vectors_of_polynomials() {
    for (a, r) in [(FpAlgebra::prime_field(2).unwrap(), 2), (FpAlgebra::prime_field(3).unwrap(), 2), (FpAlgebra::galois_field(2, 2).unwrap(), 1)] {
        let bundle = W2BundleExtension::new(&a, r, CAP).unwrap();
        let (big, monos) = truncated_polys(&a, r);
        let w = WittRing::new(&big, 2).unwrap();
        let da = a.dim();
        let embed = |v: &[u64]| -> Elem {
            let mut out = big.zero();
            for i in 0..r {
                let k = monos.iter().position(|m| m.iter().sum::<u32>() == 1 && m[i] == 1).unwrap();
                out[k * da..(k + 1) * da].copy_from_slice(&v[i * da..(i + 1) * da]);
            }
            out
        };
        let embed_a = |x: &Elem| -> Elem {
            let mut out = big.zero();
            out[..da].copy_from_slice(x);
            out
        };
        // degree-p part in S^p coordinates
        let read = |z: &Elem| -> Vec<u64> {
            let mut out = vec![0; bundle.vf.symbols.len() * da];
            for (k, m) in monos.iter().enumerate() {
                let deg: u32 = m.iter().sum();
                let block = &z[k * da..(k + 1) * da];
                if deg == a.p() as u32 {
                    let s = bundle.vf.symbols.index_of(m);
                    out[s * da..(s + 1) * da].copy_from_slice(block);
                } else {
                    assert!(block.iter().all(|&c| c == 0));
                }
            }
            out
        };
        let qn = bundle.v.size() as usize;
        for x in 0..qn {
            let tx = w.teichmuller(&embed(&bundle.v.element(x)));
            for y in 0..qn {
                let ty = w.teichmuller(&embed(&bundle.v.element(y)));
                let sum = w.add(&tx, &ty).unwrap();
                assert_eq!(bundle.ext.add(&bundle.ext.section(&bundle.v.element(x)), &bundle.ext.section(&bundle.v.element(y))).1, read(&sum.0[1]));
            }
            for b in a.elements(u64::MAX).unwrap() {
                let tb = w.teichmuller(&embed_a(&b));
                let vb = WittVector(vec![big.zero(), embed_a(&b)]);
                let z = bundle.ext.section(&bundle.v.element(x));
                let bi = a.index(&b);
                assert_eq!(w.mul(&tb, &tx).unwrap().0[1], big.zero());
                assert_eq!(bundle.ext.act((bi, 0), &z).1, bundle.sym.zero());
                assert_eq!(bundle.ext.act((0, bi), &z).1, read(&w.mul(&vb, &tx).unwrap().0[1]));
            }
        }
    }
}

#[test]
fn bundle_extension_checks() {
    for (a, r) in [
        (FpAlgebra::prime_field(2).unwrap(), 1),
        (FpAlgebra::prime_field(2).unwrap(), 2),
        (FpAlgebra::prime_field(3).unwrap(), 1),
        (FpAlgebra::galois_field(2, 2).unwrap(), 1),
        (FpAlgebra::poly_quotient(2, &[0, 1, 1]).unwrap(), 1),
    ] {
        let b = W2BundleExtension::new(&a, r, CAP).unwrap();
        assert!(b.checks.iter().all(|c| c.passed), "{:?}", b.checks);
    }
}

#[test]
fn bundle_extension_over_f2_of_rank_two() {
    let a = FpAlgebra::prime_field(2).unwrap();
    let b = W2BundleExtension::new(&a, 2, CAP).unwrap();
    assert_eq!(b.ext.order(), 32);
    // s(e1 + e2) = s(e1) + s(e2) − i(e1 e2), and −1 = 1 here
    let (e1, e2) = (vec![1, 0], vec![0, 1]);
    let sum = b.ext.add(&b.ext.section(&e1), &b.ext.section(&e2));
    let mut e1e2 = b.sym.zero();
    e1e2[b.vf.symbols.index_of(&[1, 1])] = 1;
    assert_eq!(sum, (b.v.index(&[1, 1]), e1e2));
    // κ(x) = x^p
    let kappa = b.ext.kappa().unwrap();
    for x in 0..4 {
        let v = b.v.element(x);
        assert_eq!(kappa.apply(&v), b.vf.power(&[vec![v[0]], vec![v[1]]]).unwrap());
    }
}

#[test]
fn free_lift_is_a_w2_module_lifting_v() {
    for (a, r) in [(FpAlgebra::prime_field(2).unwrap(), 2), (FpAlgebra::prime_field(3).unwrap(), 1), (FpAlgebra::galois_field(2, 2).unwrap(), 1)] {
        let b = W2BundleExtension::new(&a, r, CAP).unwrap();
        let free = b.free_lift().unwrap();
        assert!(free.verify_module(1 << 24, 0).unwrap().passed);
        assert_eq!(free.kappa().unwrap(), b.adjunction().unwrap());
    }
}

#[test]
fn lift_criterion_round_trips() {
    for (a, r) in [(FpAlgebra::prime_field(2).unwrap(), 1), (FpAlgebra::prime_field(2).unwrap(), 2), (FpAlgebra::prime_field(3).unwrap(), 1), (FpAlgebra::galois_field(2, 2).unwrap(), 1)] {
        let b = W2BundleExtension::new(&a, r, CAP).unwrap();
        let free = b.free_lift().unwrap();
        let d = b.datum_of_lift(&free, CAP).unwrap();
        let l = b.lift_of_datum(&d, CAP).unwrap();
        assert!(l.find_isomorphism(&free, CAP).unwrap().is_some());
        assert!(b.datum_isomorphism(&b.datum_of_lift(&l, CAP).unwrap(), &d, CAP).unwrap().is_some());
        // every witness gives a lift, and every lift of a free module is free
        let sb = &b.sbar.projection.target;
        for code in 0..(sb.size() as usize).pow(r as u32).min(64) {
            let values: Vec<Elem> = (0..r).map(|i| sb.element(code / (sb.size() as usize).pow(i as u32) % sb.size() as usize)).collect();
            let datum = b.datum_from_values(&values).unwrap();
            let l = b.lift_of_datum(&datum, CAP).unwrap();
            assert!(l.find_isomorphism(&free, CAP).unwrap().is_some());
            assert!(b.datum_isomorphism(&b.datum_of_lift(&l, CAP).unwrap(), &datum, CAP).unwrap().is_some());
        }
    }
}

#[test]
fn lift_criterion_rejects_bad_witnesses() {
    let a = FpAlgebra::prime_field(2).unwrap();
    let b = W2BundleExtension::new(&a, 2, CAP).unwrap();
    let mut d = b.datum_of_lift(&b.free_lift().unwrap(), CAP).unwrap();
    let sb = &b.sbar.projection.target;
    assert!(sb.dim > 0);
    let z = b.twist.index(&[1, 1]);
    d.witness[z] = sb.add(&d.witness[z], &sb.basis(0));
    assert!(matches!(b.lift_of_datum(&d, CAP), Err(Error::Precondition(_))));
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn transported_extensions_stay_isomorphic(seed in any::<u64>(), which in 0usize..3) {
        use rand::{Rng, SeedableRng};
        let b = [lift(2, &[0, 1, 1]), lift(2, &[1, 1, 1]), lift(3, &[])][which].clone();
        let corpus = extension_corpus(&b);
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
        let (x, y) = (&corpus[rng.gen_range(0..corpus.len())], &corpus[rng.gen_range(0..corpus.len())]);
        let k = &x.kernel;
        let one = x.base.index(&x.base.one());
        let mut random_delta = || -> Vec<Elem> {
            (0..x.base.size() as usize).map(|i| if i == 0 || i == one { k.zero() } else { k.element(rng.gen_range(0..k.size() as usize)) }).collect()
        };
        let (d1, d2) = (random_delta(), random_delta());
        let (x1, y1) = (x.transport(&d1).unwrap(), y.transport(&d2).unwrap());
        prop_assert!(x.is_isomorphism(&x1, &d1));
        let sum: Vec<Elem> = d1.iter().zip(&d2).map(|(u, v)| k.add(u, v)).collect();
        prop_assert!(x.baer_sum(y).unwrap().is_isomorphism(&x1.baer_sum(&y1).unwrap(), &sum));
        prop_assert_eq!(x.baer_sum(y).unwrap(), y.baer_sum(x).unwrap());
    }
}
