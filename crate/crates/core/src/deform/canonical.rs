//! ℰF, ℰW₂ and CW₂ of a reduced algebra, and the equivalences built from them.

use super::ext::{ExtensionIso, SquareZeroExtension};
use super::module::{frobenius_map, AModule, AModuleMap, Quotient};
use crate::error::{Error, Result};
use crate::finring::find_isomorphism;
use crate::fpalg::{Elem, FpAlgebra};
use crate::report::{CheckOutcome, Mode};
use crate::witt::WittRing;
use crate::wittrec::witt_ring_table;
use crate::zpn_linalg::{Mat, Solver};

/// 0 → Frob_*(A) → W₂(A) → A → 0, with ι(m) = V(m) and section τ.
pub fn witt_extension(a: &FpAlgebra) -> Result<SquareZeroExtension> {
    let w = WittRing::new(a, 2)?;
    let els = a.elements(u64::MAX)?;
    let n = els.len();
    let mut add = Vec::with_capacity(n * n);
    let mut mul = Vec::with_capacity(n * n);
    for x in &els {
        for y in &els {
            add.push(w.add(&w.teichmuller(x), &w.teichmuller(y))?.0[1].clone());
            mul.push(w.mul(&w.teichmuller(x), &w.teichmuller(y))?.0[1].clone());
        }
    }
    SquareZeroExtension::new(a, &AModule::frob_pushforward(a), add, mul)
}

#[derive(Clone, Debug)]
pub struct CanonicalExtensions {
    pub base: FpAlgebra,
    /// Frob: A → Frob_*(A).
    pub frob: AModuleMap,
    /// Frob_*(B¹), the cokernel of Frobenius.
    pub b1: AModule,
    /// d: Frob_*(A) → Frob_*(B¹).
    pub d: AModuleMap,
    quotient: Quotient,
    pub witt: SquareZeroExtension,
    /// d_*(ℰW₂).
    pub cartier: SquareZeroExtension,
    pub checks: Vec<CheckOutcome>,
}

/// An object (𝓕, f): 𝓕 an extension of A by Frob_*(A) with κ = 0, and δ: A → B¹ giving f: d_*(𝓕) ≅ CW₂.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LiftDatum {
    pub extension: SquareZeroExtension,
    pub trivialization: Vec<Elem>,
}

/// Ψ(𝓕, f) together with the comparison Frob_*(ℰ) ≅ ℰW₂ − 𝓕.
#[derive(Clone, Debug)]
pub struct PsiOutput {
    pub lift: SquareZeroExtension,
    pub comparison: Vec<Elem>,
}

#[derive(Clone, Debug)]
pub struct FrobeniusLift {
    /// γ with F₂(a, m) = (a^p, m^p + γ(a)).
    pub gamma: ExtensionIso,
    /// F₂ on element indices of the total ring.
    pub table: Vec<usize>,
}

#[derive(Clone, Debug)]
pub struct SplitLift {
    pub lift: SquareZeroExtension,
    pub checks: Vec<CheckOutcome>,
}

fn is_identity(m: &AModuleMap) -> bool {
    m.source == m.target && *m == AModuleMap::identity(&m.source)
}

fn is_zero_map(m: &AModuleMap) -> bool {
    m.matrix.iter().all(|r| r.iter().all(|&x| x == 0))
}

impl CanonicalExtensions {
    pub fn new(a: &FpAlgebra) -> Result<Self> {
        if !a.is_reduced() {
            return Err(Error::NotReduced("the canonical extensions are defined for reduced algebras only".into()));
        }
        let frob = frobenius_map(a);
        let fa = AModule::frob_pushforward(a);
        let quotient = fa.quotient(&frob.matrix)?;
        let d = quotient.projection.clone();
        let b1 = d.target.clone();
        let witt = witt_extension(a)?;
        let cartier = witt.pushforward(&d)?;
        let mut checks = Vec::new();
        let composite = frob.compose(&d)?;
        let exact = frob.is_injective() && d.is_surjective() && is_zero_map(&composite) && frob.rank() + b1.dim == fa.dim;
        checks.push(CheckOutcome::new("canonical.ef-exact", exact, Mode::Exhaustive, format!("0 → A → Frob_*A → B¹ → 0 with dim B¹ = {}", b1.dim)));
        let kw = witt.kappa()?;
        checks.push(CheckOutcome::new("canonical.kappa-w2", kw == frob, Mode::Exhaustive, "κ(ℰW₂) = Frob on the basis, additive on every element"));
        let kc = cartier.kappa()?;
        checks.push(CheckOutcome::new("canonical.kappa-cw2", is_zero_map(&kc), Mode::Exhaustive, "κ(CW₂) = 0"));
        checks.push(CheckOutcome::new("canonical.cw2-char-p", cartier.killed_by_p(), Mode::Exhaustive, "p kills the total ring of CW₂"));
        Ok(CanonicalExtensions { base: a.clone(), frob, b1, d, quotient, witt, cartier, checks })
    }

    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    /// Whether CW₂ is isomorphic to the split extension.
    pub fn cartier_splits(&self, cap: u64) -> Result<Option<ExtensionIso>> {
        self.cartier.find_isomorphism(&SquareZeroExtension::split(&self.base, &self.b1)?, cap)
    }

    /// Φ(ℰ) = (ℰW₂ − Frob_*(ℰ), canonical trivialization).
    pub fn phi(&self, e: &SquareZeroExtension) -> Result<LiftDatum> {
        if e.base != self.base || e.kernel != AModule::free(&self.base, 1) {
            return Err(Error::Shape("Φ applies to extensions of A by A".into()));
        }
        if !is_identity(&e.kappa()?) {
            return Err(Error::Precondition("κ ≠ Id: not a flat lift".into()));
        }
        let f = self.witt.baer_difference(&e.pushforward(&self.frob)?)?;
        let trivialization = vec![self.b1.zero(); self.base.size() as usize];
        // d ∘ Frob = 0 makes the cocycles of d_*(𝓕) and CW₂ agree on the nose
        if !f.pushforward(&self.d)?.is_isomorphism(&self.cartier, &trivialization) {
            return Err(Error::Check("canonical trivialization of d_*(𝓕) fails".into()));
        }
        Ok(LiftDatum { extension: f, trivialization })
    }

    /// Ψ(𝓕, f): lift the trivialization, move ℰW₂ − 𝓕 into Frob(A) and pull back along Frob.
    pub fn psi(&self, datum: &LiftDatum) -> Result<PsiOutput> {
        let f = &datum.extension;
        if f.base != self.base || f.kernel != AModule::frob_pushforward(&self.base) {
            return Err(Error::Shape("Ψ applies to extensions of A by Frob_*(A)".into()));
        }
        if !is_zero_map(&f.kappa()?) {
            return Err(Error::Precondition("κ(𝓕) ≠ 0".into()));
        }
        if !f.pushforward(&self.d)?.is_isomorphism(&self.cartier, &datum.trivialization) {
            return Err(Error::Precondition("the given f is not an isomorphism d_*(𝓕) ≅ CW₂".into()));
        }
        let tilde = self.witt.baer_difference(f)?;
        let lifted: Vec<Elem> = datum.trivialization.iter().map(|x| self.quotient.lift(x)).collect();
        let fa = &tilde.kernel;
        let neg: Vec<Elem> = lifted.iter().map(|x| fa.neg(x)).collect();
        let moved = tilde.transport(&neg)?;
        let solver = Solver::new(self.base.field(), &self.frob.matrix, self.base.dim());
        let pre = |v: &Elem| -> Result<Elem> { solver.solve(v).ok_or_else(|| Error::Check("cocycle does not land in Frob(A)".into())) };
        let add: Vec<Elem> = (0..self.base.size() as usize)
            .flat_map(|a| (0..self.base.size() as usize).map(move |b| (a, b)))
            .map(|(a, b)| pre(moved.add_cocycle_at(a, b)))
            .collect::<Result<_>>()?;
        let mul: Vec<Elem> = (0..self.base.size() as usize)
            .flat_map(|a| (0..self.base.size() as usize).map(move |b| (a, b)))
            .map(|(a, b)| pre(moved.mul_cocycle_at(a, b)))
            .collect::<Result<_>>()?;
        let lift = SquareZeroExtension::new(&self.base, &AModule::free(&self.base, 1), add, mul)?;
        let pushed = lift.pushforward(&self.frob)?;
        if !pushed.is_isomorphism(&tilde, &lifted) {
            return Err(Error::Check("Frob_*(Ψ) is not identified with ℰW₂ − 𝓕".into()));
        }
        if !is_identity(&lift.kappa()?) {
            return Err(Error::Check("Ψ produced an extension with κ ≠ Id".into()));
        }
        Ok(PsiOutput { lift, comparison: lifted })
    }

    /// An isomorphism 𝓕 → 𝓕' compatible with the trivializations: f' ∘ d_*(δ) = f, that is d∘δ = f − f'.
    pub fn datum_isomorphism(&self, x: &LiftDatum, y: &LiftDatum, cap: u64) -> Result<Option<ExtensionIso>> {
        let target: Vec<Elem> = x.trivialization.iter().zip(&y.trivialization).map(|(u, v)| self.b1.sub(u, v)).collect();
        x.extension.find_isomorphism_with(&y.extension, Some((&self.d, &target)), cap)
    }

    /// A splitting s: B¹ → Frob_*(A) of ℰF, by a linear solve.
    pub fn frobenius_splitting(&self) -> Option<AModuleMap> {
        let b = self.b1.dim;
        let n = self.base.dim();
        let fa = AModule::frob_pushforward(&self.base);
        if b == 0 {
            return Some(AModuleMap { source: self.b1.clone(), target: fa, matrix: vec![] });
        }
        let f = self.base.field();
        // unknown s[r][c] at r·n + c; constraints as columns
        let mut cols: Vec<(Vec<(usize, u64)>, u64)> = Vec::new();
        for r in 0..b {
            for t in 0..b {
                let terms = (0..n).map(|c| (r * n + c, self.d.matrix[c][t])).collect();
                cols.push((terms, u64::from(r == t)));
            }
        }
        for i in 0..n {
            let ab = &self.b1.action[i];
            let af = &fa.action[i];
            for r in 0..b {
                for c in 0..n {
                    // (Act_B¹ · s − s · Act_F)[r][c] = 0
                    let mut terms: Vec<(usize, u64)> = (0..b).map(|k| (k * n + c, ab[r][k])).collect();
                    terms.extend((0..n).map(|k| (r * n + k, f.neg(af[k][c]))));
                    cols.push((terms, 0));
                }
            }
        }
        let mut a: Mat = vec![vec![0; cols.len()]; b * n];
        let mut rhs = vec![0; cols.len()];
        for (j, (terms, v)) in cols.iter().enumerate() {
            for &(u, x) in terms {
                a[u][j] = f.add(a[u][j], x);
            }
            rhs[j] = *v;
        }
        let sol = Solver::new(f, &a, cols.len()).solve(&rhs)?;
        let matrix = sol.chunks(n).map(|c| c.to_vec()).collect();
        AModuleMap::new(self.b1.clone(), fa, matrix).ok()
    }

    /// Ψ(s_*(CW₂), canonical f) for a splitting s of ℰF.
    pub fn frobenius_split_lift(&self, s: &AModuleMap) -> Result<SplitLift> {
        if s.source != self.b1 || s.target != AModule::frob_pushforward(&self.base) {
            return Err(Error::Shape("a splitting maps B¹ to Frob_*(A)".into()));
        }
        if !is_identity(&s.compose(&self.d)?) {
            return Err(Error::Precondition("d ∘ s ≠ id: not a splitting".into()));
        }
        let f = self.cartier.pushforward(s)?;
        let datum = LiftDatum { extension: f, trivialization: vec![self.b1.zero(); self.base.size() as usize] };
        let lift = self.psi(&datum)?.lift;
        let mut checks = Vec::new();
        checks.push(CheckOutcome::new("split-lift.kappa", is_identity(&lift.kappa()?), Mode::Exhaustive, "κ = Id"));
        checks.push(CheckOutcome::new("split-lift.free", lift.is_free_over_zp2()?, Mode::Exhaustive, "additive group free over Z/p²"));
        checks.push(CheckOutcome::new("split-lift.reduces", reduces_to_base(&lift), Mode::Exhaustive, "pB = ker π, so B/pB = A"));
        if self.base.is_perfect() {
            let ring = lift.to_finring()?;
            let w2 = witt_ring_table(&self.base, 2)?;
            let iso = find_isomorphism(&ring, &w2).is_some();
            checks.push(CheckOutcome::new("split-lift.witt", iso, Mode::Exhaustive, "ring isomorphism onto W₂(A) found by generator search"));
        }
        Ok(SplitLift { lift, checks })
    }
}

/// pB equals ι(M), checked on the whole ring.
pub fn reduces_to_base(e: &SquareZeroExtension) -> bool {
    let p = e.base.p();
    let size = e.order() as usize;
    let mut seen = vec![false; size];
    for i in 0..size {
        seen[e.index(&e.smul(p, &e.element(i)))] = true;
    }
    (0..size).all(|i| seen[i] == (e.element(i).0 == 0))
}

/// A lift of Frobenius to the total ring, from an isomorphism Frob_*(ℰ) ≅ Frob^*(ℰ).
pub fn frobenius_lift(e: &SquareZeroExtension, cap: u64) -> Result<Option<FrobeniusLift>> {
    let a = &e.base;
    if e.kernel != AModule::free(a, 1) || !is_identity(&e.kappa()?) {
        return Err(Error::Precondition("Frobenius lifts are searched on flat lifts (κ = Id)".into()));
    }
    let pushed = e.pushforward(&frobenius_map(a))?;
    let pulled = e.pullback(&a.frobenius())?;
    let Some(gamma) = pushed.find_isomorphism(&pulled, cap)? else { return Ok(None) };
    let size = e.order() as usize;
    let table: Vec<usize> = (0..size)
        .map(|i| {
            let (x, m) = e.element(i);
            let ax = a.element(x);
            e.index(&(a.index(&a.frob(&ax)), e.kernel.add(&a.frob(&m), &gamma.delta[x])))
        })
        .collect();
    let ring = e.to_finring()?;
    let ok = ring.is_hom_to(&ring, &table);
    if !ok {
        return Err(Error::Check("constructed Frobenius lift is not a ring map".into()));
    }
    Ok(Some(FrobeniusLift { gamma, table }))
}
