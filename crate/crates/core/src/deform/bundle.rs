//! Extensions of W₂(A)-modules whose ends are killed by p, and the W₂-lifting problem for free V = A^r.
//!
//! The middle term is Q × N as a set with section s(x) = (x, 0):
//! s(x) + s(y) = s(x + y) + i(c(x, y)), τ(a)·s(x) = s(ax) + i(t(a, x)), V(b)·s(x) = i(u(b, x)).

use super::module::{AModule, AModuleMap, Quotient};
use super::solve::{scalar_matrix, DeltaSystem};
use crate::divpow::VerFrob;
use crate::error::{guard, Error, Result};
use crate::fpalg::{Elem, FpAlgebra};
use crate::report::{CheckOutcome, Mode};
use crate::witt::WittRing;
use crate::zpn_linalg::{binomial, factorial, Solver};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ModuleExtension {
    pub base: FpAlgebra,
    pub quotient: AModule,
    pub kernel: AModule,
    /// c(x, y) at x·|Q| + y.
    pub add_cocycle: Vec<Elem>,
    /// t(a, x) at a·|Q| + x.
    pub teich_cocycle: Vec<Elem>,
    /// u(b, x) at b·|Q| + x.
    pub ver_cocycle: Vec<Elem>,
    qn: usize,
    an: usize,
}

/// Elements of the middle term: (index in Q, kernel vector).
pub type ExtElem = (usize, Elem);

impl ModuleExtension {
    pub fn new(quotient: &AModule, kernel: &AModule, add: Vec<Elem>, teich: Vec<Elem>, ver: Vec<Elem>) -> Result<Self> {
        if quotient.base != kernel.base {
            return Err(Error::Shape("ends are modules over different algebras".into()));
        }
        let qs = quotient.size();
        let an = quotient.base.size();
        guard(qs * qs, 1 << 24)?;
        guard(an * qs, 1 << 24)?;
        let (qn, an) = (qs as usize, an as usize);
        if add.len() != qn * qn || teich.len() != an * qn || ver.len() != an * qn {
            return Err(Error::Shape("cocycles must be tabulated on all pairs".into()));
        }
        let e = ModuleExtension { base: quotient.base.clone(), quotient: quotient.clone(), kernel: kernel.clone(), add_cocycle: add, teich_cocycle: teich, ver_cocycle: ver, qn, an };
        e.validate_addition()?;
        Ok(e)
    }

    pub fn split(quotient: &AModule, kernel: &AModule) -> Result<Self> {
        let qn = quotient.size() as usize;
        let an = quotient.base.size() as usize;
        ModuleExtension::new(quotient, kernel, vec![kernel.zero(); qn * qn], vec![kernel.zero(); an * qn], vec![kernel.zero(); an * qn])
    }

    fn validate_addition(&self) -> Result<()> {
        let k = &self.kernel;
        for x in 0..self.qn {
            if self.c(0, x).iter().any(|&v| v != 0) {
                return Err(Error::InvalidAlgebra("additive cocycle is not normalized".into()));
            }
            for y in 0..self.qn {
                if self.c(x, y) != self.c(y, x) {
                    return Err(Error::InvalidAlgebra("addition is not commutative".into()));
                }
            }
        }
        let q = &self.quotient;
        let gens: Vec<usize> = (0..q.dim).map(|i| q.index(&q.basis(i))).collect();
        for x in 0..self.qn {
            for y in 0..self.qn {
                for &g in &gens {
                    let (xy, yg) = (self.qsum(x, y), self.qsum(y, g));
                    if k.add(self.c(x, y), self.c(xy, g)) != k.add(self.c(y, g), self.c(x, yg)) {
                        return Err(Error::InvalidAlgebra("addition is not associative".into()));
                    }
                }
            }
        }
        Ok(())
    }

    fn c(&self, x: usize, y: usize) -> &Elem {
        &self.add_cocycle[x * self.qn + y]
    }
    fn t(&self, a: usize, x: usize) -> &Elem {
        &self.teich_cocycle[a * self.qn + x]
    }
    fn u(&self, b: usize, x: usize) -> &Elem {
        &self.ver_cocycle[b * self.qn + x]
    }
    fn qsum(&self, x: usize, y: usize) -> usize {
        let q = &self.quotient;
        q.index(&q.add(&q.element(x), &q.element(y)))
    }
    fn qact(&self, a: usize, x: usize) -> usize {
        let q = &self.quotient;
        q.index(&q.act(&self.base.element(a), &q.element(x)))
    }

    pub fn order(&self) -> u128 {
        self.quotient.size() * self.kernel.size()
    }
    pub fn element(&self, i: usize) -> ExtElem {
        (i % self.qn, self.kernel.element(i / self.qn))
    }
    pub fn index(&self, z: &ExtElem) -> usize {
        z.0 + self.qn * self.kernel.index(&z.1)
    }
    pub fn zero(&self) -> ExtElem {
        (0, self.kernel.zero())
    }
    pub fn section(&self, x: &[u64]) -> ExtElem {
        (self.quotient.index(x), self.kernel.zero())
    }
    pub fn iota(&self, n: &[u64]) -> ExtElem {
        (0, n.to_vec())
    }
    pub fn add(&self, z: &ExtElem, w: &ExtElem) -> ExtElem {
        let k = &self.kernel;
        (self.qsum(z.0, w.0), k.add(&k.add(&z.1, &w.1), self.c(z.0, w.0)))
    }
    pub fn neg(&self, z: &ExtElem) -> ExtElem {
        let mut acc = self.zero();
        let mut cur = z.clone();
        // −z = (p² − 1)·z
        let mut e = self.base.p() * self.base.p() - 1;
        while e > 0 {
            if e & 1 == 1 {
                acc = self.add(&acc, &cur);
            }
            cur = self.add(&cur, &cur);
            e >>= 1;
        }
        acc
    }
    /// (w₀, w₁) = τ(w₀) + V(w₁) acting on z, with w given by element indices in A.
    pub fn act(&self, w: (usize, usize), z: &ExtElem) -> ExtElem {
        let k = &self.kernel;
        let a = self.base.element(w.0);
        let n = k.add(&k.add(self.t(w.0, z.0), self.u(w.1, z.0)), &k.act(&a, &z.1));
        (self.qact(w.0, z.0), n)
    }

    /// κ(x) = p·s(x) = V(1)·s(x), as a map Q → N; cross-checked against Σ_j c(jx, x).
    pub fn kappa(&self) -> Result<AModuleMap> {
        let one = self.base.index(&self.base.one());
        let q = &self.quotient;
        let matrix = (0..q.dim).map(|i| self.u(one, q.index(&q.basis(i))).clone()).collect();
        let map = AModuleMap::new(q.clone(), self.kernel.clone(), matrix)?;
        for x in 0..self.qn {
            let mut acc = self.kernel.zero();
            let mut jx = x;
            for _ in 1..self.base.p() {
                acc = self.kernel.add(&acc, self.c(jx, x));
                jx = self.qsum(jx, x);
            }
            if acc != *self.u(one, x) || map.apply(&q.element(x)) != acc {
                return Err(Error::Check("p·s(x) disagrees with V(1)·s(x) or is not linear".into()));
            }
        }
        Ok(map)
    }

    /// Additive generators of the middle term: s(basis of Q) and i(basis of N).
    pub fn generators(&self) -> Vec<usize> {
        let (q, k) = (&self.quotient, &self.kernel);
        let mut g: Vec<usize> = (0..q.dim).map(|i| self.index(&self.section(&q.basis(i)))).collect();
        g.extend((0..k.dim).map(|i| self.index(&self.iota(&k.basis(i)))));
        g
    }

    /// W₂(A)-module axioms. Additivity in z is checked against generators, the rest on generators only,
    /// which implies them everywhere. Exhaustive when the work fits the cap, else sampled.
    pub fn verify_module(&self, cap: u64, seed: u64) -> Result<CheckOutcome> {
        let w2 = WittRing::new(&self.base, 2)?;
        let an = self.an;
        let en = self.order() as usize;
        let gens = self.generators();
        let widx = |v: &crate::witt::WittVector<Elem>| self.base.index(&v.0[0]) + an * self.base.index(&v.0[1]);
        let wel = |w: usize| crate::witt::WittVector(vec![self.base.element(w % an), self.base.element(w / an)]);
        let pair = |w: usize| (w % an, w / an);
        let wn = an * an;
        let work = (wn * en * gens.len()) as u128 + (wn * wn * gens.len()) as u128;
        let one = (self.base.index(&self.base.one()), 0);
        let unit = gens.iter().all(|&z| self.act(one, &self.element(z)) == self.element(z));
        let mut ok = unit;
        let ring_check = |w: usize, v: usize, z: usize| -> Result<bool> {
            let z = self.element(z);
            let sum_w = widx(&w2.add(&wel(w), &wel(v))?);
            let prod_w = widx(&w2.mul(&wel(w), &wel(v))?);
            Ok(self.act(pair(sum_w), &z) == self.add(&self.act(pair(w), &z), &self.act(pair(v), &z))
                && self.act(pair(prod_w), &z) == self.act(pair(w), &self.act(pair(v), &z)))
        };
        let lin = |w: usize, z: usize, g: usize| {
            let (z, y) = (self.element(z), self.element(g));
            self.act(pair(w), &self.add(&z, &y)) == self.add(&self.act(pair(w), &z), &self.act(pair(w), &y))
        };
        if work <= cap as u128 {
            for w in 0..wn {
                for z in 0..en {
                    ok &= gens.iter().all(|&g| lin(w, z, g));
                }
                for v in 0..wn {
                    for &g in &gens {
                        ok &= ring_check(w, v, g)?;
                    }
                }
            }
            Ok(CheckOutcome::new("module.axioms", ok, Mode::Exhaustive, format!("W₂(A)-module axioms on an extension of order {en}")))
        } else {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let n = cap.min(1 << 16);
            for _ in 0..n {
                let (w, v) = (rng.gen_range(0..wn), rng.gen_range(0..wn));
                let g = gens[rng.gen_range(0..gens.len())];
                ok &= lin(w, rng.gen_range(0..en), g) && ring_check(w, v, g)?;
            }
            Ok(CheckOutcome::new("module.axioms", ok, Mode::Sampled, format!("{n} sampled triples, seed {seed}")))
        }
    }

    fn same_shape(&self, other: &ModuleExtension) -> Result<()> {
        if self.quotient != other.quotient || self.kernel != other.kernel {
            return Err(Error::Shape("extensions with different ends".into()));
        }
        Ok(())
    }

    fn map_cocycles(&self, kernel: &AModule, f: impl Fn(&Elem) -> Elem) -> Result<Self> {
        ModuleExtension::new(
            &self.quotient,
            kernel,
            self.add_cocycle.iter().map(&f).collect(),
            self.teich_cocycle.iter().map(&f).collect(),
            self.ver_cocycle.iter().map(&f).collect(),
        )
    }

    pub fn baer_sum(&self, other: &ModuleExtension) -> Result<Self> {
        self.same_shape(other)?;
        let k = &self.kernel;
        let zip = |x: &[Elem], y: &[Elem]| -> Vec<Elem> { x.iter().zip(y).map(|(a, b)| k.add(a, b)).collect() };
        ModuleExtension::new(
            &self.quotient,
            k,
            zip(&self.add_cocycle, &other.add_cocycle),
            zip(&self.teich_cocycle, &other.teich_cocycle),
            zip(&self.ver_cocycle, &other.ver_cocycle),
        )
    }

    pub fn baer_inverse(&self) -> Result<Self> {
        let k = self.kernel.clone();
        self.map_cocycles(&k, |x| k.neg(x))
    }

    pub fn baer_difference(&self, other: &ModuleExtension) -> Result<Self> {
        self.baer_sum(&other.baer_inverse()?)
    }

    pub fn pushforward(&self, h: &AModuleMap) -> Result<Self> {
        if h.source != self.kernel {
            return Err(Error::Shape("pushforward along a map from a different module".into()));
        }
        self.map_cocycles(&h.target, |x| h.apply(x))
    }

    /// g^*(E) for an A-linear g: Q' → Q.
    pub fn pullback(&self, g: &AModuleMap) -> Result<Self> {
        if g.target != self.quotient {
            return Err(Error::Shape("pullback along a map into a different module".into()));
        }
        let q2 = &g.source;
        let n2 = q2.size() as usize;
        let img: Vec<usize> = (0..n2).map(|x| self.quotient.index(&g.apply(&q2.element(x)))).collect();
        let add = (0..n2 * n2).map(|i| self.c(img[i / n2], img[i % n2]).clone()).collect();
        let teich = (0..self.an * n2).map(|i| self.t(i / n2, img[i % n2]).clone()).collect();
        let ver = (0..self.an * n2).map(|i| self.u(i / n2, img[i % n2]).clone()).collect();
        ModuleExtension::new(q2, &self.kernel, add, teich, ver)
    }

    /// Cocycles shifted by the coboundary of δ, so that δ is an isomorphism self → result.
    pub fn transport(&self, delta: &[Elem]) -> Result<Self> {
        let k = &self.kernel;
        let add = (0..self.qn * self.qn)
            .map(|i| {
                let (x, y) = (i / self.qn, i % self.qn);
                k.add(self.c(x, y), &k.sub(&delta[self.qsum(x, y)], &k.add(&delta[x], &delta[y])))
            })
            .collect();
        let teich = (0..self.an * self.qn)
            .map(|i| {
                let (a, x) = (i / self.qn, i % self.qn);
                k.add(self.t(a, x), &k.sub(&delta[self.qact(a, x)], &k.act(&self.base.element(a), &delta[x])))
            })
            .collect();
        ModuleExtension::new(&self.quotient, k, add, teich, self.ver_cocycle.clone())
    }

    /// Whether (x, n) ↦ (x, n + δ(x)) is an isomorphism of W₂(A)-modules self → other, on all pairs.
    pub fn is_isomorphism(&self, other: &ModuleExtension, delta: &[Elem]) -> bool {
        if self.same_shape(other).is_err() || delta.len() != self.qn {
            return false;
        }
        match self.transport(delta) {
            Ok(t) => t == *other,
            Err(_) => false,
        }
    }

    pub fn find_isomorphism(&self, other: &ModuleExtension, cap: u64) -> Result<Option<super::ExtensionIso>> {
        self.find_isomorphism_with(other, None, cap)
    }

    /// Isomorphism self → other, optionally with g(δ(x)) = targets[x].
    pub fn find_isomorphism_with(&self, other: &ModuleExtension, constraint: Option<(&AModuleMap, &[Elem])>, cap: u64) -> Result<Option<super::ExtensionIso>> {
        self.same_shape(other)?;
        if self.ver_cocycle != other.ver_cocycle {
            // V(b) kills the kernel, so u is an invariant of the isomorphism class
            return Ok(None);
        }
        let satisfies = |delta: &[Elem]| constraint.is_none_or(|(g, t)| delta.iter().zip(t).all(|(d, v)| g.apply(d) == *v));
        let k = &self.kernel;
        let count = k.size().checked_pow(self.qn.saturating_sub(1) as u32);
        if count.is_some_and(|c| c <= cap as u128) {
            let ksize = k.size() as usize;
            for code in 0..count.unwrap() as usize {
                let mut delta = vec![k.zero(); self.qn];
                let mut c = code;
                for d in delta.iter_mut().skip(1) {
                    *d = k.element(c % ksize);
                    c /= ksize;
                }
                if self.is_isomorphism(other, &delta) && satisfies(&delta) {
                    return Ok(Some(super::ExtensionIso { delta, mode: Mode::Exhaustive }));
                }
            }
            return Ok(None);
        }
        let q = &self.quotient;
        let mut sys = DeltaSystem::new(k.field(), self.qn, k.dim);
        sys.push(vec![(0, scalar_matrix(k.field(), k.dim, 1))], k.zero());
        let gens: Vec<usize> = (0..q.dim).map(|i| q.index(&q.basis(i))).collect();
        for x in 0..self.qn {
            for &g in &gens {
                sys.push_additive(self.qsum(x, g), x, g, k.sub(other.c(x, g), self.c(x, g)));
            }
        }
        let abasis: Vec<usize> = (0..self.base.dim()).map(|i| self.base.index(&self.base.basis(i))).collect();
        for &a in &abasis {
            let neg_a = k.matrix_of(&self.base.neg(&self.base.element(a)));
            for &g in &gens {
                sys.push(vec![(self.qact(a, g), scalar_matrix(k.field(), k.dim, 1)), (g, neg_a.clone())], k.sub(other.t(a, g), self.t(a, g)));
            }
        }
        if let Some((g, t)) = constraint {
            for (x, v) in t.iter().enumerate() {
                sys.push(vec![(x, g.matrix.clone())], v.clone());
            }
        }
        match sys.solve() {
            Some(delta) if self.is_isomorphism(other, &delta) && satisfies(&delta) => Ok(Some(super::ExtensionIso { delta, mode: Mode::Solver })),
            Some(_) => Err(Error::Check("linear solution fails the full isomorphism check".into())),
            None => Ok(None),
        }
    }
}

/// Coordinates in S^p_A(A^r) of the product of the given linear forms (p of them).
pub fn product_of_forms(vf: &VerFrob, forms: &[&[Elem]]) -> Vec<u64> {
    let a = &vf.algebra;
    let r = vf.rank;
    let da = a.dim();
    let mut out = vec![0u64; vf.symbols.len() * da];
    let total = r.pow(forms.len() as u32);
    for code in 0..total {
        let mut c = code;
        let mut expo = vec![0u32; r];
        let mut coeff = a.one();
        for f in forms {
            let v = c % r;
            c /= r;
            expo[v] += 1;
            coeff = a.mul(&coeff, &f[v]);
        }
        let b = vf.symbols.index_of(&expo);
        for j in 0..da {
            out[b * da + j] = a.field().add(out[b * da + j], coeff[j]);
        }
    }
    out
}

/// ℰ̄W₂(V) for V = A^r, with the structure maps used to compare it with ℰ̄Frob(V).
#[derive(Clone, Debug)]
pub struct W2BundleExtension {
    pub base: FpAlgebra,
    pub rank: usize,
    pub vf: VerFrob,
    /// V = A^r.
    pub v: AModule,
    /// S^p_A(V) with its own A-action.
    pub sym: AModule,
    /// Frob^*(V) = A^r on the basis e_i ⊗ 1.
    pub twist: AModule,
    /// Ver: Frob^*(V) → S^p(V).
    pub ver: AModuleMap,
    /// q: S^p(V) → S̄^p(V).
    pub sbar: Quotient,
    /// 0 → Frob_*(S^p V) → f_*W₂(O(1)) → V → 0.
    pub ext: ModuleExtension,
    /// ℰ̄Frob(V) with section x ↦ [x]_p, kernel Frob_*(S̄^p V) through α.
    pub frob_ext: ModuleExtension,
    pub checks: Vec<CheckOutcome>,
}

/// A datum for the W₂-lifting problem: 𝓕 ∈ Ext¹(Frob^*V, S^p V) and an isomorphism q_*(𝓕) ≅ ℰFrob(V).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BundleDatum {
    pub extension: ModuleExtension,
    pub witness: Vec<Elem>,
}

impl W2BundleExtension {
    pub fn new(a: &FpAlgebra, rank: usize, cap: u64) -> Result<Self> {
        let p = a.p();
        let vf = VerFrob::new(a, rank)?;
        let nb = vf.symbols.len();
        let v = AModule::free(a, rank);
        let sym = AModule::free(a, nb);
        let twist = AModule::free(a, rank);
        let ver = AModuleMap::new(twist.clone(), sym.clone(), vf.ver.matrix().clone())?;
        let sbar = sym.quotient(&ver.matrix)?;
        let kernel = sym.frob_twist();
        let qn = v.size() as usize;
        let an = a.size() as usize;
        guard((qn * qn) as u128, cap)?;
        let vs: Vec<Vec<Elem>> = (0..qn).map(|x| split_blocks(a, &v.element(x), rank)).collect();
        let els = a.elements(u64::MAX)?;
        // s(x) + s(y) − s(x + y) = −Σ (1/p)C(p,i) x^i y^{p−i}
        let defect = |x: &[Elem], y: &[Elem]| -> Vec<u64> {
            let mut acc = sym.zero();
            for i in 1..p as usize {
                let coef = ((binomial(p, i as u64) / p as u128) % p as u128) as u64;
                let mut forms: Vec<&[Elem]> = vec![x; i];
                forms.extend(std::iter::repeat_n(y, p as usize - i));
                acc = sym.add(&acc, &sym.scale(coef, &product_of_forms(&vf, &forms)));
            }
            acc
        };
        let mut add = Vec::with_capacity(qn * qn);
        for x in 0..qn {
            for y in 0..qn {
                add.push(sym.neg(&defect(&vs[x], &vs[y])));
            }
        }
        let teich = vec![sym.zero(); an * qn];
        let mut verc = Vec::with_capacity(an * qn);
        for b in &els {
            for x in &vs {
                verc.push(sym.act(b, &vf.power(x)?));
            }
        }
        let ext = ModuleExtension::new(&v, &kernel, add, teich, verc)?;

        // ℰ̄Frob(V): c(x, y) = [x]_p + [y]_p − [x+y]_p, moved into S̄^p through α
        let alpha = Solver::new(a.field(), vf.alpha.matrix(), vf.gamma.rank());
        let to_sbar = |g: &[u64]| -> Result<Elem> {
            let m = alpha.solve(g).ok_or_else(|| Error::Check("element outside the image of α".into()))?;
            Ok(sbar.projection.apply(&m))
        };
        let gk = &vf.gamma;
        let mut fadd = Vec::with_capacity(qn * qn);
        for x in 0..qn {
            for y in 0..qn {
                let sum = v.index(&v.add(&v.element(x), &v.element(y)));
                let g = gk.sub(&gk.add(&vf.pure(&vs[x])?, &vf.pure(&vs[y])?), &vf.pure(&vs[sum])?);
                fadd.push(to_sbar(&g)?);
            }
        }
        let sbar_tw = sbar.projection.target.frob_twist();
        let zeros = vec![sbar_tw.zero(); an * qn];
        let frob_ext = ModuleExtension::new(&v, &sbar_tw, fadd, zeros.clone(), zeros)?;

        let mut out = W2BundleExtension { base: a.clone(), rank, vf, v, sym, twist, ver, sbar, ext, frob_ext, checks: vec![] };
        out.checks = out.run_checks(cap)?;
        Ok(out)
    }

    fn blocks(&self, x: usize) -> Vec<Elem> {
        split_blocks(&self.base, &self.v.element(x), self.rank)
    }

    fn run_checks(&self, cap: u64) -> Result<Vec<CheckOutcome>> {
        let mut checks = Vec::new();
        let p = self.base.p();
        let order = self.ext.order();
        let expected = self.v.size() * self.sym.size();
        checks.push(CheckOutcome::new("bundle.order", order == expected, Mode::Exhaustive, format!("|E| = {order} = |V|·|S^p V|")));
        checks.push(self.ext.verify_module(cap, 0)?);
        let kappa = self.ext.kappa()?;
        let qn = self.v.size() as usize;
        let kappa_ok = (0..qn).all(|x| kappa.apply(&self.v.element(x)) == self.vf.power(&self.blocks(x)).unwrap());
        checks.push(CheckOutcome::new("bundle.kappa", kappa_ok, Mode::Exhaustive, "κ(x) = x^p"));

        // F(s(x) + i(m)) = [x]_p + α(m)/(p−1)! is additive and τ(a) ↦ a^p semilinear
        let fac_inv = self.base.field().inv((factorial(p - 1) % p as u128) as u64).unwrap();
        let gk = &self.vf.gamma;
        let big_f = |z: &ExtElem| -> Vec<u64> {
            let am = self.vf.alpha.apply(&z.1);
            gk.add(&self.vf.pure(&self.blocks(z.0)).unwrap(), &gk.scale(fac_inv, &am))
        };
        let en = order as usize;
        let gens = self.ext.generators();
        let pairs = (en as u128) * (gens.len() as u128);
        let (ok, mode) = if pairs <= cap as u128 {
            let values: Vec<Vec<u64>> = (0..en).map(|i| big_f(&self.ext.element(i))).collect();
            let ok = (0..en).all(|i| {
                let z = self.ext.element(i);
                gens.iter().all(|&j| values[self.ext.index(&self.ext.add(&z, &self.ext.element(j)))] == gk.add(&values[i], &values[j]))
            });
            (ok, Mode::Exhaustive)
        } else {
            let mut rng = ChaCha8Rng::seed_from_u64(0);
            let ok = (0..cap.min(1 << 16)).all(|_| {
                let (z, w) = (self.ext.element(rng.gen_range(0..en)), self.ext.element(rng.gen_range(0..en)));
                big_f(&self.ext.add(&z, &w)) == gk.add(&big_f(&z), &big_f(&w))
            });
            (ok, Mode::Sampled)
        };
        let an = self.base.size() as usize;
        let semilinear = (0..an).all(|a| {
            let ap = self.base.frob(&self.base.element(a));
            (0..en).step_by((en / 64).max(1)).all(|i| {
                let z = self.ext.element(i);
                let lhs = big_f(&self.ext.act((a, 0), &z));
                let rhs = self.vf_scale(&ap, &big_f(&z));
                lhs == rhs
            })
        });
        checks.push(CheckOutcome::new("bundle.f-map", ok && semilinear, mode, "F(s_V(x)) = [x]_p extends to an additive, Frobenius-semilinear map into Γ^p"));
        checks.push(CheckOutcome::new("bundle.f-frob", self.f_lands_over_ad(), Mode::Exhaustive, "Frob_V ∘ F = ad ∘ Φ_V"));
        let q_star = self.ext.pushforward(&self.sbar_twisted_projection())?;
        let minus = self.frob_ext.baer_inverse()?;
        let iso = q_star.find_isomorphism(&minus, cap)?;
        checks.push(
            CheckOutcome::new(
                "bundle.pushforward-is-minus-frob",
                iso.is_some(),
                iso.as_ref().map_or(Mode::Exhaustive, |i| i.mode),
                "(Frob_* q_V)_*(ℰ̄W₂(V)) ≅ −ℰ̄Frob(V)",
            ),
        );
        Ok(checks)
    }

    fn vf_scale(&self, a: &Elem, g: &[u64]) -> Vec<u64> {
        let nb = self.vf.symbols.len();
        AModule::free(&self.base, nb).act(a, g)
    }

    fn f_lands_over_ad(&self) -> bool {
        let qn = self.v.size() as usize;
        (0..qn).all(|x| {
            let b = self.blocks(x);
            self.vf.frob.apply(&self.vf.pure(&b).unwrap()) == self.vf.twisted(&b).unwrap()
        })
    }

    /// Frob_*(q): Frob_*(S^p V) → Frob_*(S̄^p V).
    pub fn sbar_twisted_projection(&self) -> AModuleMap {
        let q = &self.sbar.projection;
        AModuleMap { source: q.source.frob_twist(), target: q.target.frob_twist(), matrix: q.matrix.clone() }
    }

    /// Frob_*(Ver): Frob_*(Frob^* V) → Frob_*(S^p V).
    pub fn ver_twisted(&self) -> AModuleMap {
        AModuleMap { source: self.twist.frob_twist(), target: self.sym.frob_twist(), matrix: self.ver.matrix.clone() }
    }

    /// ad: V → Frob_*(Frob^*V), x ↦ x ⊗ 1.
    pub fn adjunction(&self) -> Result<AModuleMap> {
        let matrix = (0..self.v.dim).map(|i| self.vf.twisted(&split_blocks(&self.base, &self.v.basis(i), self.rank)).unwrap()).collect();
        AModuleMap::new(self.v.clone(), self.twist.frob_twist(), matrix)
    }

    /// W₂(A)^r as an extension of V by Frob_*(Frob^*V), with componentwise Teichmüller section.
    pub fn free_lift(&self) -> Result<ModuleExtension> {
        let a = &self.base;
        let w = WittRing::new(a, 2)?;
        let qn = self.v.size() as usize;
        let els = a.elements(u64::MAX)?;
        let kernel = self.twist.frob_twist();
        let flat = |blocks: Vec<Elem>| -> Elem { blocks.into_iter().flatten().collect() };
        let mut add = Vec::with_capacity(qn * qn);
        for x in 0..qn {
            let bx = self.blocks(x);
            for y in 0..qn {
                let by = self.blocks(y);
                let c: Result<Vec<Elem>> = bx.iter().zip(&by).map(|(s, t)| Ok(w.add(&w.teichmuller(s), &w.teichmuller(t))?.0[1].clone())).collect();
                add.push(flat(c?));
            }
        }
        let mut teich = Vec::new();
        let mut ver = Vec::new();
        for b in &els {
            for x in 0..qn {
                let bx = self.blocks(x);
                let t: Result<Vec<Elem>> = bx.iter().map(|s| Ok(w.mul(&w.teichmuller(b), &w.teichmuller(s))?.0[1].clone())).collect();
                teich.push(flat(t?));
                let vb = crate::witt::WittVector(vec![a.zero(), b.clone()]);
                let u: Result<Vec<Elem>> = bx.iter().map(|s| Ok(w.mul(&vb, &w.teichmuller(s))?.0[1].clone())).collect();
                ver.push(flat(u?));
            }
        }
        ModuleExtension::new(&self.v, &kernel, add, teich, ver)
    }

    /// ℰFrob(V) on the A-linear section z ↦ Σ z_i [e_i]_p: the split extension of Frob^*V by S̄^p V.
    pub fn frob_sequence_extension(&self) -> Result<ModuleExtension> {
        ModuleExtension::split(&self.twist, &self.sbar.projection.target)
    }

    /// δ_b(x) = [x]_p − Σ x_i^p [e_i]_p in S̄^p coordinates: ℰ̄Frob(V) → ad^*Frob_*(ℰFrob(V)).
    fn section_change(&self) -> Result<Vec<Elem>> {
        let alpha = Solver::new(self.base.field(), self.vf.alpha.matrix(), self.vf.gamma.rank());
        let gk = &self.vf.gamma;
        let qn = self.v.size() as usize;
        (0..qn)
            .map(|x| {
                let b = self.blocks(x);
                let lin = self.linear_section(&self.vf.twisted(&b)?)?;
                let g = gk.sub(&self.vf.pure(&b)?, &lin);
                let m = alpha.solve(&g).ok_or_else(|| Error::Check("section change outside Γ̄".into()))?;
                Ok(self.sbar.projection.apply(&m))
            })
            .collect()
    }

    /// Σ z_i [e_i]_p for z ∈ Frob^*V.
    fn linear_section(&self, z: &[u64]) -> Result<Vec<u64>> {
        let gk = &self.vf.gamma;
        let zb = split_blocks(&self.base, z, self.rank);
        let mut acc = vec![0; gk.rank()];
        for (i, zi) in zb.iter().enumerate() {
            let e: Vec<Elem> = (0..self.rank).map(|k| if k == i { self.base.one() } else { self.base.zero() }).collect();
            let pe = self.vf.pure(&e)?;
            acc = gk.add(&acc, &self.vf_scale(zi, &pe));
        }
        Ok(acc)
    }

    /// The datum attached to a W₂-lift V₂ of V: 𝓕 = Frob^* of Ver_*(V₂) − ℰ̄W₂(V), split since Frob^*V is free,
    /// with witness read off on the basis.
    pub fn datum_of_lift(&self, lift: &ModuleExtension, cap: u64) -> Result<BundleDatum> {
        self.check_lift(lift)?;
        let fbar = self.ver_twisted_push(lift)?.baer_difference(&self.ext)?;
        let q_star = fbar.pushforward(&self.sbar_twisted_projection())?;
        let Some(iso) = q_star.find_isomorphism(&self.frob_ext, cap)? else {
            return Err(Error::Check("q_*(𝓕̄) is not isomorphic to ℰ̄Frob(V)".into()));
        };
        if fbar.ver_cocycle.iter().any(|u| u.iter().any(|&x| x != 0)) {
            return Err(Error::Check("𝓕̄ is not an extension of A-modules".into()));
        }
        // a trivialization of 𝓕̄ as A-modules on the basis gives the split 𝓕; the witness is δ̄ + δ_b there
        let change = self.section_change()?;
        let sb = &self.sbar.projection.target;
        let values: Vec<Elem> = (0..self.v.dim / self.base.dim().max(1))
            .map(|i| {
                let e = self.v.index(&block_basis(&self.base, self.rank, i));
                sb.add(&iso.delta[e], &change[e])
            })
            .collect();
        let witness = self.linear_witness(&values);
        let extension = ModuleExtension::split(&self.twist, &self.sym)?;
        let datum = BundleDatum { extension, witness };
        self.check_datum(&datum)?;
        Ok(datum)
    }

    fn ver_twisted_push(&self, lift: &ModuleExtension) -> Result<ModuleExtension> {
        lift.pushforward(&self.ver_twisted())
    }

    /// The A-linear map Frob^*V → S̄^p V with the given values on e_i ⊗ 1, tabulated.
    fn linear_witness(&self, values: &[Elem]) -> Vec<Elem> {
        let sb = &self.sbar.projection.target;
        let tn = self.twist.size() as usize;
        (0..tn)
            .map(|z| {
                let zb = split_blocks(&self.base, &self.twist.element(z), self.rank);
                zb.iter().zip(values).fold(sb.zero(), |acc, (zi, v)| sb.add(&acc, &sb.act(zi, v)))
            })
            .collect()
    }

    fn check_lift(&self, lift: &ModuleExtension) -> Result<()> {
        if lift.quotient != self.v || lift.kernel != self.twist.frob_twist() {
            return Err(Error::Shape("a W₂-lift of V is an extension of V by Frob_*(Frob^*V)".into()));
        }
        if lift.kappa()? != self.adjunction()? {
            return Err(Error::Precondition("κ of a W₂-lift must be the adjunction x ↦ x ⊗ 1".into()));
        }
        Ok(())
    }

    pub fn check_datum(&self, d: &BundleDatum) -> Result<()> {
        if d.extension.quotient != self.twist || d.extension.kernel != self.sym {
            return Err(Error::Shape("𝓕 is an extension of Frob^*V by S^p V".into()));
        }
        if d.extension.ver_cocycle.iter().any(|u| u.iter().any(|&x| x != 0)) {
            return Err(Error::Precondition("𝓕 must be an extension of A-modules".into()));
        }
        let q_star = d.extension.pushforward(&self.sbar.projection)?;
        if !q_star.is_isomorphism(&self.frob_sequence_extension()?, &d.witness) {
            return Err(Error::Precondition("witness is not an isomorphism q_*(𝓕) ≅ ℰFrob(V)".into()));
        }
        Ok(())
    }

    /// An isomorphism of data 𝓕 → 𝓕' whose pushforward along q carries one witness to the other: q∘δ = w − w'.
    pub fn datum_isomorphism(&self, x: &BundleDatum, y: &BundleDatum, cap: u64) -> Result<Option<super::ExtensionIso>> {
        let sb = &self.sbar.projection.target;
        let target: Vec<Elem> = x.witness.iter().zip(&y.witness).map(|(u, v)| sb.sub(u, v)).collect();
        x.extension.find_isomorphism_with(&y.extension, Some((&self.sbar.projection, &target)), cap)
    }

    /// The datum (split 𝓕, A-linear witness with the given values on e_i ⊗ 1).
    pub fn datum_from_values(&self, values: &[Elem]) -> Result<BundleDatum> {
        if values.len() != self.rank {
            return Err(Error::Shape("one witness value per basis vector".into()));
        }
        let datum = BundleDatum { extension: ModuleExtension::split(&self.twist, &self.sym)?, witness: self.linear_witness(values) };
        self.check_datum(&datum)?;
        Ok(datum)
    }

    /// The W₂-lift attached to a datum: Ẽ = ℰ̄W₂(V) + ad^*Frob_*(𝓕) has q_*(Ẽ) trivialized, so it descends along Ver.
    pub fn lift_of_datum(&self, datum: &BundleDatum, cap: u64) -> Result<ModuleExtension> {
        self.check_datum(datum)?;
        let ad = self.adjunction()?;
        let fe = &datum.extension;
        let an = self.base.size() as usize;
        let qn = self.v.size() as usize;
        let kernel = self.sym.frob_twist();
        // ad^* Frob_*(𝓕): c̄(x, y) = c(ad x, ad y), t̄(a, x) = t(a^p, ad x)
        let adx: Vec<usize> = (0..qn).map(|x| self.twist.index(&ad.apply(&self.v.element(x)))).collect();
        let tn = self.twist.size() as usize;
        let add = (0..qn * qn).map(|i| fe.add_cocycle[adx[i / qn] * tn + adx[i % qn]].clone()).collect();
        let teich = (0..an * qn)
            .map(|i| {
                let ap = self.base.index(&self.base.frob(&self.base.element(i / qn)));
                fe.teich_cocycle[ap * tn + adx[i % qn]].clone()
            })
            .collect();
        let fbar = ModuleExtension::new(&self.v, &kernel, add, teich, vec![kernel.zero(); an * qn])?;
        let tilde = self.ext.baer_sum(&fbar)?;
        let qproj = self.sbar_twisted_projection();
        let Some(delta_a) = self.ext.pushforward(&qproj)?.find_isomorphism(&self.frob_ext.baer_inverse()?, cap)? else {
            return Err(Error::Check("q_*(ℰ̄W₂) ≇ −ℰ̄Frob".into()));
        };
        let change = self.section_change()?;
        let sb = &qproj.target;
        let total: Vec<Elem> = (0..qn).map(|x| sb.add(&sb.sub(&delta_a.delta[x], &change[x]), &datum.witness[adx[x]])).collect();
        let q_tilde = tilde.pushforward(&qproj)?;
        if !q_tilde.is_isomorphism(&ModuleExtension::split(&self.v, sb)?, &total) {
            return Err(Error::Check("composite trivialization of q_*(Ẽ) fails".into()));
        }
        let lifted: Vec<Elem> = total.iter().map(|x| self.sbar.lift(x)).collect();
        let moved = tilde.transport(&lifted)?;
        let ver = Solver::new(self.base.field(), &self.ver.matrix, self.sym.dim);
        let pre = |v: &Elem| -> Result<Elem> { ver.solve(v).ok_or_else(|| Error::Check("cocycle does not land in Ver(Frob^*V)".into())) };
        let add: Vec<Elem> = moved.add_cocycle.iter().map(pre).collect::<Result<_>>()?;
        let teich: Vec<Elem> = moved.teich_cocycle.iter().map(pre).collect::<Result<_>>()?;
        let verc: Vec<Elem> = moved.ver_cocycle.iter().map(pre).collect::<Result<_>>()?;
        let lift = ModuleExtension::new(&self.v, &self.twist.frob_twist(), add, teich, verc)?;
        self.check_lift(&lift)?;
        if !lift.pushforward(&self.ver_twisted())?.is_isomorphism(&tilde, &lifted.iter().map(|x| kernel.neg(x)).collect::<Vec<_>>()) {
            return Err(Error::Check("Ver_*(V₂) is not identified with Ẽ".into()));
        }
        Ok(lift)
    }
}

fn split_blocks(a: &FpAlgebra, v: &[u64], r: usize) -> Vec<Elem> {
    let d = a.dim();
    (0..r).map(|i| v[i * d..(i + 1) * d].to_vec()).collect()
}

fn block_basis(a: &FpAlgebra, r: usize, i: usize) -> Elem {
    let d = a.dim();
    let mut v = vec![0; r * d];
    let one = a.one();
    v[i * d..(i + 1) * d].copy_from_slice(&one);
    v
}
