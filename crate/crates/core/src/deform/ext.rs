//! Square-zero extensions 0 → M → B → A → 0 in cocycle form.
//!
//! B is A × M as a set, with σ(a) = (a, 0) a normalized section:
//! (a, m) + (b, n) = (a + b, m + n + c(a, b)),
//! (a, m)·(b, n) = (ab, a·n + b·m + f(a, b)).

use super::module::{AModule, AModuleMap};
use super::solve::{scalar_matrix, DeltaSystem};
use crate::error::{guard, Error, Result};
use crate::finring::{FinRing, MAX_TABLE_ORDER};
use crate::fpalg::{AlgebraMorphism, Elem, FpAlgebra};
use crate::report::{CheckOutcome, Mode};
use crate::zpn_linalg::{GroupPresentation, Modulus};
use crate::zpnalg::ZpnAlgebra;

/// Largest base for which cocycles are tabulated over all pairs.
pub const MAX_BASE_ORDER: usize = 1024;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SquareZeroExtension {
    pub base: FpAlgebra,
    pub kernel: AModule,
    /// c(a, b) at a·|A| + b, by element index.
    pub add_cocycle: Vec<Elem>,
    pub mul_cocycle: Vec<Elem>,
    order: usize,
    elements: Vec<Elem>,
    add_table: Vec<u32>,
    mul_table: Vec<u32>,
}

/// A map of extensions (a, m) ↦ (a, m + δ(a)).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ExtensionIso {
    pub delta: Vec<Elem>,
    pub mode: Mode,
}

fn base_tables(a: &FpAlgebra) -> Result<(usize, Vec<Elem>, Vec<u32>, Vec<u32>)> {
    let size = a.size();
    guard(size, MAX_BASE_ORDER as u64)?;
    let n = size as usize;
    let els = a.elements(u64::MAX)?;
    let mut at = vec![0u32; n * n];
    let mut mt = vec![0u32; n * n];
    for i in 0..n {
        for j in 0..n {
            at[i * n + j] = a.index(&a.add(&els[i], &els[j])) as u32;
            mt[i * n + j] = a.index(&a.mul(&els[i], &els[j])) as u32;
        }
    }
    Ok((n, els, at, mt))
}

impl SquareZeroExtension {
    /// Builds and validates an extension from normalized cocycles.
    pub fn new(base: &FpAlgebra, kernel: &AModule, add_cocycle: Vec<Elem>, mul_cocycle: Vec<Elem>) -> Result<Self> {
        if kernel.base != *base {
            return Err(Error::Shape("kernel is a module over a different algebra".into()));
        }
        let (order, elements, add_table, mul_table) = base_tables(base)?;
        if add_cocycle.len() != order * order || mul_cocycle.len() != order * order {
            return Err(Error::Shape("cocycles must be tabulated on all pairs".into()));
        }
        if add_cocycle.iter().chain(&mul_cocycle).any(|v| v.len() != kernel.dim) {
            return Err(Error::Shape("cocycle values must lie in the kernel".into()));
        }
        let e = SquareZeroExtension { base: base.clone(), kernel: kernel.clone(), add_cocycle, mul_cocycle, order, elements, add_table, mul_table };
        e.validate()?;
        Ok(e)
    }

    fn unchecked(base: &FpAlgebra, kernel: &AModule, add_cocycle: Vec<Elem>, mul_cocycle: Vec<Elem>) -> Result<Self> {
        let (order, elements, add_table, mul_table) = base_tables(base)?;
        Ok(SquareZeroExtension { base: base.clone(), kernel: kernel.clone(), add_cocycle, mul_cocycle, order, elements, add_table, mul_table })
    }

    /// Cocycle identities on all triples of A.
    fn validate(&self) -> Result<()> {
        let n = self.order;
        let k = &self.kernel;
        let one = self.base.index(&self.base.one());
        for a in 0..n {
            if self.c(0, a).iter().any(|&x| x != 0) || self.f(one, a).iter().any(|&x| x != 0) {
                return Err(Error::InvalidAlgebra("cocycles are not normalized".into()));
            }
            for b in 0..n {
                if self.c(a, b) != self.c(b, a) || self.f(a, b) != self.f(b, a) {
                    return Err(Error::InvalidAlgebra("cocycles are not symmetric".into()));
                }
                for d in 0..n {
                    let (ab, bd) = (self.sum(a, b), self.sum(b, d));
                    if k.add(self.c(a, b), self.c(ab, d)) != k.add(self.c(b, d), self.c(a, bd)) {
                        return Err(Error::InvalidAlgebra("addition is not associative".into()));
                    }
                    let (pab, pbd) = (self.prod(a, b), self.prod(b, d));
                    let lhs = k.add(&self.act(a, self.f(b, d)), self.f(a, pbd));
                    let rhs = k.add(&self.act(d, self.f(a, b)), self.f(pab, d));
                    if lhs != rhs {
                        return Err(Error::InvalidAlgebra("multiplication is not associative".into()));
                    }
                    let lhs = k.add(&self.act(a, self.c(b, d)), self.f(a, bd));
                    let rhs = k.add(&k.add(self.f(a, b), self.f(a, d)), self.c(pab, self.prod(a, d)));
                    if lhs != rhs {
                        return Err(Error::InvalidAlgebra("multiplication does not distribute".into()));
                    }
                }
            }
        }
        Ok(())
    }

    /// The split extension A ⊕ M.
    pub fn split(base: &FpAlgebra, kernel: &AModule) -> Result<Self> {
        let n = base.size() as usize;
        let z = vec![kernel.zero(); n * n];
        SquareZeroExtension::unchecked(base, kernel, z.clone(), z)
    }

    /// Reads off cocycles from a tabulated ring B with π: B → A and ι: M → B (by element index).
    pub fn from_ring(base: &FpAlgebra, kernel: &AModule, ring: &FinRing, pi: &[usize], iota: &[usize]) -> Result<Self> {
        let an = base.size() as usize;
        let mn = kernel.size() as usize;
        let ra = base.to_finring()?;
        if pi.len() != ring.size() || iota.len() != mn || ring.size() != an * mn {
            return Err(Error::Shape("maps do not match the orders of A, M and B".into()));
        }
        if !ring.is_hom_to(&ra, pi) {
            return Err(Error::IllDefined("π is not a ring map".into()));
        }
        let mut iota_inv = vec![usize::MAX; ring.size()];
        for (m, &b) in iota.iter().enumerate() {
            if pi[b] != ra.zero() {
                return Err(Error::IllDefined("ι(M) is not in the kernel of π".into()));
            }
            if iota_inv[b] != usize::MAX {
                return Err(Error::IllDefined("ι is not injective".into()));
            }
            iota_inv[b] = m;
        }
        for m1 in 0..mn {
            let x = kernel.element(m1);
            for m2 in 0..mn {
                let y = kernel.element(m2);
                if ring.add(iota[m1], iota[m2]) != iota[kernel.index(&kernel.add(&x, &y))] {
                    return Err(Error::IllDefined("ι is not additive".into()));
                }
                if ring.mul(iota[m1], iota[m2]) != ring.zero() {
                    return Err(Error::IllDefined("ι(M) does not square to zero".into()));
                }
            }
        }
        let mut section = vec![usize::MAX; an];
        for b in 0..ring.size() {
            if section[pi[b]] == usize::MAX {
                section[pi[b]] = b;
            }
        }
        section[ra.zero()] = ring.zero();
        section[ra.one()] = ring.one();
        let m_of = |b: usize| -> Result<Elem> {
            match iota_inv[b] {
                usize::MAX => Err(Error::IllDefined("ker π is larger than ι(M)".into())),
                m => Ok(kernel.element(m)),
            }
        };
        for b in 0..ring.size() {
            for m in 0..mn {
                let lhs = ring.mul(b, iota[m]);
                let rhs = iota[kernel.index(&kernel.act(&base.element(pi[b]), &kernel.element(m)))];
                if lhs != rhs {
                    return Err(Error::IllDefined("module structure on ι(M) differs from M".into()));
                }
            }
        }
        let mut add = Vec::with_capacity(an * an);
        let mut mul = Vec::with_capacity(an * an);
        for a in 0..an {
            for b in 0..an {
                let s = ring.sub(ring.add(section[a], section[b]), section[ra.add(a, b)]);
                let p = ring.sub(ring.mul(section[a], section[b]), section[ra.mul(a, b)]);
                add.push(m_of(s)?);
                mul.push(m_of(p)?);
            }
        }
        SquareZeroExtension::new(base, kernel, add, mul)
    }

    /// 0 → pB → B → B/p → 0 for a Z/p²-algebra B given by structure constants, with pB ≅ B/p via x ↦ p·x̃.
    pub fn from_lift(b: &ZpnAlgebra) -> Result<Self> {
        if b.modulus().n() != 2 {
            return Err(Error::Precondition("a lift must be an algebra over Z/p^2".into()));
        }
        let p = b.modulus().p();
        let a = b.mod_p()?;
        let kernel = AModule::free(&a, 1);
        let n = a.size() as usize;
        guard(n as u128, MAX_BASE_ORDER as u64)?;
        let els = a.elements(u64::MAX)?;
        let lift = |x: &Elem| b.lift(x);
        // p·y = p·(y mod p) in B, so kernel coordinates are read off as coefficient / p
        let to_kernel = |z: &Vec<u64>| -> Result<Elem> {
            if z.iter().any(|&c| c % p != 0) {
                return Err(Error::IllDefined("difference of lifts is not in pB".into()));
            }
            Ok(z.iter().map(|&c| c / p).collect())
        };
        let mut add = Vec::with_capacity(n * n);
        let mut mul = Vec::with_capacity(n * n);
        for x in &els {
            for y in &els {
                add.push(to_kernel(&b.sub(&b.add(&lift(x), &lift(y)), &lift(&a.add(x, y))))?);
                mul.push(to_kernel(&b.sub(&b.mul(&lift(x), &lift(y)), &lift(&a.mul(x, y))))?);
            }
        }
        SquareZeroExtension::new(&a, &kernel, add, mul)
    }

    pub fn order(&self) -> u128 {
        self.base.size() * self.kernel.size()
    }

    fn c(&self, a: usize, b: usize) -> &Elem {
        &self.add_cocycle[a * self.order + b]
    }
    fn f(&self, a: usize, b: usize) -> &Elem {
        &self.mul_cocycle[a * self.order + b]
    }
    fn sum(&self, a: usize, b: usize) -> usize {
        self.add_table[a * self.order + b] as usize
    }
    fn prod(&self, a: usize, b: usize) -> usize {
        self.mul_table[a * self.order + b] as usize
    }
    fn act(&self, a: usize, m: &[u64]) -> Elem {
        self.kernel.act(&self.elements[a], m)
    }

    pub fn add_cocycle_at(&self, a: usize, b: usize) -> &Elem {
        self.c(a, b)
    }
    pub fn mul_cocycle_at(&self, a: usize, b: usize) -> &Elem {
        self.f(a, b)
    }

    /// Elements of B are pairs (index in A, kernel vector).
    pub fn add(&self, x: &(usize, Elem), y: &(usize, Elem)) -> (usize, Elem) {
        let k = &self.kernel;
        (self.sum(x.0, y.0), k.add(&k.add(&x.1, &y.1), self.c(x.0, y.0)))
    }
    pub fn mul(&self, x: &(usize, Elem), y: &(usize, Elem)) -> (usize, Elem) {
        let k = &self.kernel;
        let m = k.add(&k.add(&self.act(x.0, &y.1), &self.act(y.0, &x.1)), self.f(x.0, y.0));
        (self.prod(x.0, y.0), m)
    }
    pub fn smul(&self, t: u64, x: &(usize, Elem)) -> (usize, Elem) {
        let mut acc = (0, self.kernel.zero());
        for _ in 0..t {
            acc = self.add(&acc, x);
        }
        acc
    }
    pub fn pow(&self, x: &(usize, Elem), e: u64) -> (usize, Elem) {
        let mut acc = self.one();
        for _ in 0..e {
            acc = self.mul(&acc, x);
        }
        acc
    }
    pub fn zero(&self) -> (usize, Elem) {
        (0, self.kernel.zero())
    }
    pub fn one(&self) -> (usize, Elem) {
        (self.base.index(&self.base.one()), self.kernel.zero())
    }
    pub fn index(&self, x: &(usize, Elem)) -> usize {
        x.0 + self.order * self.kernel.index(&x.1)
    }
    pub fn element(&self, i: usize) -> (usize, Elem) {
        (i % self.order, self.kernel.element(i / self.order))
    }
    pub fn section(&self, a: usize) -> (usize, Elem) {
        (a, self.kernel.zero())
    }
    pub fn iota(&self, m: &[u64]) -> (usize, Elem) {
        (0, m.to_vec())
    }

    pub fn to_finring(&self) -> Result<FinRing> {
        let size = self.order();
        guard(size, MAX_TABLE_ORDER as u64)?;
        FinRing::from_ops(
            size as usize,
            self.index(&self.zero()),
            self.index(&self.one()),
            |x, y| self.index(&self.add(&self.element(x), &self.element(y))),
            |x, y| self.index(&self.mul(&self.element(x), &self.element(y))),
        )
    }

    /// κ(a) = p·σ(a) = Σ_{j=1}^{p−1} c(j·a, a), as an A-linear map A → M.
    pub fn kappa(&self) -> Result<AModuleMap> {
        let a = &self.base;
        let p = a.p();
        let value = |x: usize| -> Elem {
            let mut acc = self.kernel.zero();
            let mut jx = x;
            for _ in 1..p {
                acc = self.kernel.add(&acc, self.c(jx, x));
                jx = self.sum(jx, x);
            }
            acc
        };
        let matrix = (0..a.dim()).map(|i| value(a.index(&a.basis(i)))).collect();
        let map = AModuleMap::new(AModule::free(a, 1), self.kernel.clone(), matrix)?;
        for x in 0..self.order {
            if map.apply(&self.elements[x]) != value(x) {
                return Err(Error::Check("κ is not additive".into()));
            }
        }
        Ok(map)
    }

    /// p·B = 0, checked on every element.
    pub fn killed_by_p(&self) -> bool {
        let p = self.base.p();
        (0..self.order).all(|a| {
            let x = self.section(a);
            self.smul(p, &x) == self.zero()
        })
    }

    /// Whether the additive group of B is free over Z/p², read off a presentation of its addition table.
    pub fn is_free_over_zp2(&self) -> Result<bool> {
        let size = self.order();
        guard(size, MAX_TABLE_ORDER as u64 * 16)?;
        let md = Modulus::new(self.base.p(), 2)?;
        let g = GroupPresentation::new(md, size as usize, 0, |x, y| self.index(&self.add(&self.element(x), &self.element(y))))?;
        let ex = g.module.invariant_exponents();
        Ok(ex.len() == self.base.dim() && ex.iter().all(|&e| e == 2))
    }

    fn same_shape(&self, other: &SquareZeroExtension) -> Result<()> {
        if self.base != other.base || self.kernel != other.kernel {
            return Err(Error::Shape("extensions of different algebras or by different modules".into()));
        }
        Ok(())
    }

    /// Baer sum: cocycles add.
    pub fn baer_sum(&self, other: &SquareZeroExtension) -> Result<Self> {
        self.same_shape(other)?;
        let k = &self.kernel;
        let add = self.add_cocycle.iter().zip(&other.add_cocycle).map(|(x, y)| k.add(x, y)).collect();
        let mul = self.mul_cocycle.iter().zip(&other.mul_cocycle).map(|(x, y)| k.add(x, y)).collect();
        SquareZeroExtension::unchecked(&self.base, k, add, mul)
    }

    /// Baer inverse, the pushforward along −1.
    pub fn baer_inverse(&self) -> Result<Self> {
        self.pushforward(&AModuleMap::scalar(&self.kernel, self.base.p() - 1))
    }

    /// self − other.
    pub fn baer_difference(&self, other: &SquareZeroExtension) -> Result<Self> {
        self.baer_sum(&other.baer_inverse()?)
    }

    /// f_*(E) for an A-linear f: M → M'.
    pub fn pushforward(&self, f: &AModuleMap) -> Result<Self> {
        if f.source != self.kernel {
            return Err(Error::Shape("pushforward along a map from a different module".into()));
        }
        let add = self.add_cocycle.iter().map(|x| f.apply(x)).collect();
        let mul = self.mul_cocycle.iter().map(|x| f.apply(x)).collect();
        SquareZeroExtension::unchecked(&self.base, &f.target, add, mul)
    }

    /// g^*(E) for a ring map g: A' → A; the kernel becomes M restricted along g.
    pub fn pullback(&self, g: &AlgebraMorphism) -> Result<Self> {
        if g.codomain != self.base {
            return Err(Error::Shape("pullback along a map into a different algebra".into()));
        }
        let a2 = &g.domain;
        let kernel = self.kernel.restrict(g)?;
        let imgs: Vec<usize> = a2.elements(u64::MAX)?.iter().map(|x| self.base.index(&g.apply(x))).collect();
        let n = imgs.len();
        let mut add = Vec::with_capacity(n * n);
        let mut mul = Vec::with_capacity(n * n);
        for &x in &imgs {
            for &y in &imgs {
                add.push(self.c(x, y).clone());
                mul.push(self.f(x, y).clone());
            }
        }
        SquareZeroExtension::unchecked(a2, &kernel, add, mul)
    }

    /// The extension with cocycles c + ∂δ and f + ∂δ, so that δ is an isomorphism self → result.
    pub fn transport(&self, delta: &[Elem]) -> Result<Self> {
        if delta.len() != self.order {
            return Err(Error::Shape("δ must be given on every element of A".into()));
        }
        let k = &self.kernel;
        let mut add = Vec::with_capacity(self.order * self.order);
        let mut mul = Vec::with_capacity(self.order * self.order);
        for a in 0..self.order {
            for b in 0..self.order {
                let cb = k.sub(&delta[self.sum(a, b)], &k.add(&delta[a], &delta[b]));
                let mb = k.sub(&delta[self.prod(a, b)], &k.add(&self.act(a, &delta[b]), &self.act(b, &delta[a])));
                add.push(k.add(self.c(a, b), &cb));
                mul.push(k.add(self.f(a, b), &mb));
            }
        }
        SquareZeroExtension::unchecked(&self.base, k, add, mul)
    }

    /// Whether (a, m) ↦ (a, m + δ(a)) is a ring isomorphism self → other; checked on all pairs.
    pub fn is_isomorphism(&self, other: &SquareZeroExtension, delta: &[Elem]) -> bool {
        if self.same_shape(other).is_err() || delta.len() != self.order {
            return false;
        }
        let k = &self.kernel;
        if delta[0].iter().any(|&x| x != 0) || delta[self.base.index(&self.base.one())].iter().any(|&x| x != 0) {
            return false;
        }
        (0..self.order).all(|a| {
            (0..self.order).all(|b| {
                let s = self.sum(a, b);
                let pr = self.prod(a, b);
                let add_ok = k.sub(other.c(a, b), self.c(a, b)) == k.sub(&delta[s], &k.add(&delta[a], &delta[b]));
                let mul_rhs = k.sub(&delta[pr], &k.add(&self.act(a, &delta[b]), &self.act(b, &delta[a])));
                add_ok && k.sub(other.f(a, b), self.f(a, b)) == mul_rhs
            })
        })
    }

    fn iso_system(&self, other: &SquareZeroExtension) -> DeltaSystem {
        let k = &self.kernel;
        let a = &self.base;
        let mut sys = DeltaSystem::new(k.field(), self.order, k.dim);
        let basis: Vec<usize> = (0..a.dim()).map(|i| a.index(&a.basis(i))).collect();
        sys.push(vec![(0, scalar_matrix(k.field(), k.dim, 1))], k.zero());
        sys.push(vec![(a.index(&a.one()), scalar_matrix(k.field(), k.dim, 1))], k.zero());
        // additivity against a basis forces it everywhere, and then the multiplicative defect is bilinear
        for x in 0..self.order {
            for &g in &basis {
                sys.push_additive(self.sum(x, g), x, g, k.sub(other.c(x, g), self.c(x, g)));
            }
        }
        for &x in &basis {
            for &y in &basis {
                let neg_x = k.matrix_of(&a.neg(&self.elements[x]));
                let neg_y = k.matrix_of(&a.neg(&self.elements[y]));
                sys.push(
                    vec![(self.prod(x, y), scalar_matrix(k.field(), k.dim, 1)), (y, neg_x), (x, neg_y)],
                    k.sub(other.f(x, y), self.f(x, y)),
                );
            }
        }
        sys
    }

    /// Searches for an isomorphism of extensions self → other.
    ///
    /// When |M|^(|A|−2) ≤ cap every normalized δ is tried; otherwise a linear system is solved
    /// and its solution verified on all pairs.
    pub fn find_isomorphism(&self, other: &SquareZeroExtension, cap: u64) -> Result<Option<ExtensionIso>> {
        self.find_isomorphism_with(other, None, cap)
    }

    /// As `find_isomorphism`, additionally imposing g(δ(a)) = targets[a] for an A-linear g out of M.
    pub fn find_isomorphism_with(&self, other: &SquareZeroExtension, constraint: Option<(&AModuleMap, &[Elem])>, cap: u64) -> Result<Option<ExtensionIso>> {
        self.same_shape(other)?;
        if let Some((g, t)) = constraint {
            if g.source != self.kernel || t.len() != self.order {
                return Err(Error::Shape("constraint must be a map out of M with a value for every a".into()));
            }
        }
        let satisfies = |delta: &[Elem]| constraint.is_none_or(|(g, t)| delta.iter().zip(t).all(|(d, v)| g.apply(d) == *v));
        let free = self.order.saturating_sub(2) as u32;
        let count = self.kernel.size().checked_pow(free);
        if count.is_some_and(|c| c <= cap as u128) && self.order >= 2 {
            let one = self.base.index(&self.base.one());
            let others: Vec<usize> = (0..self.order).filter(|&x| x != 0 && x != one).collect();
            let msize = self.kernel.size() as usize;
            for code in 0..count.unwrap() as usize {
                let mut delta = vec![self.kernel.zero(); self.order];
                let mut c = code;
                for &x in &others {
                    delta[x] = self.kernel.element(c % msize);
                    c /= msize;
                }
                if self.is_isomorphism(other, &delta) && satisfies(&delta) {
                    return Ok(Some(ExtensionIso { delta, mode: Mode::Exhaustive }));
                }
            }
            return Ok(None);
        }
        let mut sys = self.iso_system(other);
        if let Some((g, t)) = constraint {
            for (x, v) in t.iter().enumerate() {
                sys.push(vec![(x, g.matrix.clone())], v.clone());
            }
        }
        match sys.solve() {
            Some(delta) if self.is_isomorphism(other, &delta) && satisfies(&delta) => Ok(Some(ExtensionIso { delta, mode: Mode::Solver })),
            Some(_) => Err(Error::Check("linear solution fails the full isomorphism check".into())),
            None => Ok(None),
        }
    }

    /// F_p-dimension of the automorphism group of the extension (derivations A → M).
    pub fn derivation_dimension(&self) -> usize {
        self.iso_system(self).homogeneous_dimension()
    }

    /// Ring table of the map (a, m) ↦ (a, m + δ(a)) into `other`.
    pub fn apply_iso(&self, other: &SquareZeroExtension, delta: &[Elem]) -> Vec<usize> {
        (0..self.order() as usize)
            .map(|i| {
                let (a, m) = self.element(i);
                other.index(&(a, self.kernel.add(&m, &delta[a])))
            })
            .collect()
    }

    pub fn summary(&self) -> CheckOutcome {
        CheckOutcome::new(
            "extension.valid",
            self.validate().is_ok(),
            Mode::Exhaustive,
            format!("|A| = {}, dim M = {}, |B| = {}", self.base.size(), self.kernel.dim, self.order()),
        )
    }
}
