use proptest::prelude::*;
use std::collections::BTreeSet;
use wittkit::zpn_linalg::*;

fn span(m: Modulus, rows: &[Vec<u64>], ncols: usize) -> BTreeSet<Vec<u64>> {
    let mut set = BTreeSet::new();
    set.insert(vec![0; ncols]);
    let mut frontier = vec![vec![0; ncols]];
    while let Some(v) = frontier.pop() {
        for r in rows {
            let w: Vec<u64> = v.iter().zip(r).map(|(a, b)| m.add(*a, *b)).collect();
            if set.insert(w.clone()) {
                frontier.push(w);
            }
        }
    }
    set
}

fn small_modulus() -> impl Strategy<Value = Modulus> {
    prop_oneof![Just((2u64, 1u32)), Just((2, 2)), Just((2, 3)), Just((3, 1)), Just((3, 2)), Just((5, 1))]
        .prop_map(|(p, n)| Modulus::new(p, n).unwrap())
}

fn matrix(m: Modulus, rows: usize, cols: usize) -> impl Strategy<Value = Vec<Vec<u64>>> {
    prop::collection::vec(prop::collection::vec(0..m.q(), cols), rows)
}

fn modulus_and_matrix() -> impl Strategy<Value = (Modulus, usize, Vec<Vec<u64>>)> {
    small_modulus().prop_flat_map(|m| {
        (1usize..=3).prop_flat_map(move |c| (Just(m), Just(c), (0usize..=4).prop_flat_map(move |r| matrix(m, r, c))))
    })
}

fn random_map() -> impl Strategy<Value = (Modulus, Vec<u32>, Vec<u32>, Vec<Vec<u64>>)> {
    prop_oneof![Just((2u64, 2u32)), Just((2, 3)), Just((3, 2))]
        .prop_map(|(p, n)| Modulus::new(p, n).unwrap())
        .prop_flat_map(|m| {
            let n = m.n();
            (
                Just(m),
                prop::collection::vec(1..=n, 1..=2),
                prop::collection::vec(1..=n, 1..=2),
            )
        })
        .prop_flat_map(|(m, a, b)| {
            let (ra, rb) = (a.len(), b.len());
            (Just(m), Just(a), Just(b), matrix(m, ra, rb))
        })
}

/// Forces a random matrix to be a well-defined map between the two cyclic sums.
fn make_map(m: Modulus, a: &[u32], b: &[u32], mat: &[Vec<u64>]) -> ModuleMap {
    let dom = ZpnModule::cyclic_sum(m, a);
    let cod = ZpnModule::cyclic_sum(m, b);
    let fixed: Vec<Vec<u64>> = mat
        .iter()
        .enumerate()
        .map(|(i, row)| {
            row.iter()
                .enumerate()
                .map(|(j, &x)| {
                    // need p^{a_i} x = 0 mod p^{b_j}
                    let shift = b[j].saturating_sub(a[i]);
                    m.mul(x, m.p().pow(shift))
                })
                .collect()
        })
        .collect();
    ModuleMap::new(dom, cod, fixed).unwrap()
}

proptest! {
    #[test]
    fn howell_idempotent_and_span_preserving((m, c, rows) in modulus_and_matrix()) {
        let h = howell_form(m, c, &rows);
        prop_assert_eq!(howell_form(m, c, &h), h.clone());
        prop_assert_eq!(span(m, &h, c), span(m, &rows, c));
        prop_assert_eq!(span(m, &rows, c).len() as u64, m.p().pow(Howell::new(m, c, &rows).span_log_order()));
    }

    #[test]
    fn howell_depends_only_on_span((m, c, rows) in modulus_and_matrix(), coeffs in prop::collection::vec(0u64..27, 16)) {
        // a different generating set of the same span
        let mut other: Vec<Vec<u64>> = Vec::new();
        for (k, r) in rows.iter().enumerate() {
            let mut v = r.clone();
            for (l, s) in rows.iter().enumerate() {
                if l != k {
                    let t = coeffs[(k * 4 + l) % 16];
                    for (x, y) in v.iter_mut().zip(s) {
                        *x = m.add(*x, m.mul(t, *y));
                    }
                }
            }
            other.push(v);
        }
        other.extend(rows.iter().cloned());
        other.reverse();
        prop_assert_eq!(howell_form(m, c, &other), howell_form(m, c, &rows));
    }

    #[test]
    fn reduce_is_canonical((m, c, rows) in modulus_and_matrix(), v in prop::collection::vec(0u64..125, 3)) {
        let h = Howell::new(m, c, &rows);
        let v: Vec<u64> = v[..c].iter().map(|x| x % m.q()).collect();
        let r = h.reduce(&v);
        let diff: Vec<u64> = v.iter().zip(&r).map(|(a, b)| m.sub(*a, *b)).collect();
        prop_assert!(span(m, &rows, c).contains(&diff));
        for g in span(m, &rows, c) {
            let w: Vec<u64> = v.iter().zip(&g).map(|(a, b)| m.add(*a, *b)).collect();
            prop_assert_eq!(h.reduce(&w), r.clone());
        }
    }

    #[test]
    fn lengths_additive_on_kernel_image_cokernel((m, a, b, mat) in random_map()) {
        let f = make_map(m, &a, &b, &mat);
        let (k, inc) = f.kernel();
        let (c, proj) = f.cokernel();
        let zero = ZpnModule::zero(m);
        let seq = vec![
            ModuleMap::zero(zero.clone(), k.clone()),
            inc,
            f.clone(),
            proj,
            ModuleMap::zero(c.clone(), zero),
        ];
        let cert = is_exact(&seq).unwrap();
        prop_assert!(cert.exact, "{:?}", cert);
        prop_assert_eq!(k.length() + f.codomain.length(), f.domain.length() + c.length());
        // enumeration oracle for the kernel
        let els = f.domain.elements(1 << 16).unwrap();
        let nk = els.iter().filter(|x| f.codomain.is_zero_elem(&f.apply(x))).count();
        prop_assert_eq!(nk as u128, k.order());
    }

    #[test]
    fn double_dual_is_identity((m, a, _b, _mat) in random_map()) {
        let mm = ZpnModule::cyclic_sum(m, &a);
        let (ev, d1, _) = double_dual_map(&mm).unwrap();
        prop_assert!(ev.is_isomorphism());
        prop_assert_eq!(d1.module.invariant_factors(), mm.invariant_factors());
    }

    #[test]
    fn dual_of_cokernel_is_kernel_of_dual((m, a, b, mat) in random_map()) {
        let f = make_map(m, &a, &b, &mat);
        let dm = pontryagin_dual(&f.domain);
        let dn = pontryagin_dual(&f.codomain);
        let fd = dual_map(&f, &dm, &dn).unwrap();
        let (c, proj) = f.cokernel();
        let dc = pontryagin_dual(&c);
        let projd = dual_map(&proj, &dn, &dc).unwrap();
        let zero = ZpnModule::zero(m);
        let seq = vec![ModuleMap::zero(zero, dc.module.clone()), projd, fd];
        prop_assert!(is_exact(&seq).unwrap().exact);
    }

    #[test]
    fn group_presentation_recovers_cyclic_sums((m, a, _b, _mat) in random_map()) {
        let mm = ZpnModule::cyclic_sum(m, &a);
        let els = mm.elements(1 << 16).unwrap();
        let index: std::collections::HashMap<_, _> = els.iter().cloned().enumerate().map(|(i, e)| (e, i)).collect();
        let zero = index[&mm.reduce(&vec![0; a.len()])];
        let g = GroupPresentation::new(m, els.len(), zero, |x, y| index[&mm.add(&els[x], &els[y])]).unwrap();
        prop_assert_eq!(g.module.invariant_factors(), mm.invariant_factors());
    }
}
