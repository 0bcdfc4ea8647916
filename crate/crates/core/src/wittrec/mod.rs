//! Φ_{n+1}(R) = Γ^p(R)/J̃_p, p-elementary maps, the recursion s_{n+1} and lifting of p-elementary diagrams.

mod diagram;
mod recursion;

pub use diagram::{quotient_tower, witt_restriction, witt_tower, DiagramLift, PElementaryDiagram};
pub use recursion::{s_recursion, witt_ring_table, SRecursion};

use crate::divpow::{multinomial, GammaAlgebra, RelatorScheme, SymmetricPowerModule};
use crate::error::{guard, Error, Result};
use crate::finring::FinRing;
use crate::zpn_linalg::{factorial, Howell, ModuleMap, Modulus, ZpnModule};
use std::collections::HashMap;

/// Which preimage to pick when a construction needs a choice.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ChoiceOrder {
    First,
    Last,
}

/// A surjective ring map f: ℛ → R whose kernel I satisfies pI = I^p = 0.
#[derive(Clone, Debug)]
pub struct PElementaryMap {
    pub source: FinRing,
    pub target: FinRing,
    pub map: Vec<usize>,
    pub kernel: Vec<usize>,
    pub p: u64,
    preimages: Vec<Vec<usize>>,
    v_table: Vec<usize>,
}

impl PElementaryMap {
    pub fn new(source: FinRing, target: FinRing, map: Vec<usize>, p: u64, cap: u64) -> Result<Self> {
        if !source.is_hom_to(&target, &map) {
            return Err(Error::Precondition("not a ring homomorphism".into()));
        }
        let mut preimages = vec![Vec::new(); target.size()];
        for (x, &y) in map.iter().enumerate() {
            preimages[y].push(x);
        }
        if preimages.iter().any(|v| v.is_empty()) {
            return Err(Error::Precondition("not surjective".into()));
        }
        let kernel = preimages[target.zero()].clone();
        if kernel.iter().any(|&i| source.smul(p, i) != source.zero()) {
            return Err(Error::Precondition("p·I ≠ 0".into()));
        }
        guard((kernel.len() as u128).saturating_pow(p as u32), cap)?;
        let mut products = vec![source.one()];
        for _ in 0..p {
            let mut next: Vec<usize> = products.iter().flat_map(|&a| kernel.iter().map(move |&i| (a, i))).map(|(a, i)| source.mul(a, i)).collect();
            next.sort_unstable();
            next.dedup();
            products = next;
        }
        if products.iter().any(|&x| x != source.zero()) {
            return Err(Error::Precondition("I^p ≠ 0".into()));
        }
        let mut v_table = Vec::with_capacity(target.size());
        for pre in &preimages {
            let v = source.smul(p, pre[0]);
            if pre.iter().any(|&x| source.smul(p, x) != v) {
                return Err(Error::Check("p·X depends on the preimage X".into()));
            }
            v_table.push(v);
        }
        Ok(PElementaryMap { source, target, map, kernel, p, preimages, v_table })
    }

    pub fn lift(&self, x: usize, order: ChoiceOrder) -> usize {
        let pre = &self.preimages[x];
        match order {
            ChoiceOrder::First => pre[0],
            ChoiceOrder::Last => pre[pre.len() - 1],
        }
    }

    /// V(x) = p·X for any preimage X.
    pub fn v(&self, x: usize) -> usize {
        self.v_table[x]
    }
}

/// Σ_a v_a·images[a] in the additive group of a ring.
pub(crate) fn additive_eval(ring: &FinRing, images: &[usize], v: &[u64]) -> usize {
    images.iter().zip(v).fold(ring.zero(), |acc, (&img, &c)| ring.add(acc, ring.smul(c, img)))
}

/// Φ_{n+1}(R) for a finite Z/p^n-algebra R, with its element tables.
#[derive(Clone, Debug)]
pub struct PhiAlgebra {
    pub p: u64,
    pub n: usize,
    pub gamma: GammaAlgebra,
    /// Span of the symbol relators together with J̃_p, in Γ^p(F) coordinates.
    pub span: Howell,
    /// Generators of J̃_p as computed from J_p.
    pub jtilde: Vec<Vec<u64>>,
    /// Whether j_p(J_p) was already closed under multiplication.
    pub ideal_closed: bool,
    pub module: ZpnModule,
    pub elements: Vec<Vec<u64>>,
    pub ring: FinRing,
    lookup: HashMap<Vec<u64>, usize>,
}

impl PhiAlgebra {
    pub fn build(r: &FinRing, p: u64, n: usize, cap: u64) -> Result<Self> {
        let modulus = Modulus::new(p, n as u32 + 1)?;
        let gamma = match GammaAlgebra::new(r, modulus, p as u32, RelatorScheme::Full) {
            Err(Error::Guard { .. }) => GammaAlgebra::new(r, modulus, p as u32, RelatorScheme::Sparse)?,
            other => other?,
        };
        let pres = &gamma.presentation;
        let sym = SymmetricPowerModule::new(&pres.module, p as u32);
        let mult_rows = sym
            .basis
            .basis
            .iter()
            .map(|a| {
                let prod = a.iter().enumerate().fold(r.one(), |acc, (i, &e)| r.mul(acc, r.pow(pres.generators[i], e as u64)));
                pres.coords[prod].clone()
            })
            .collect();
        let mult = ModuleMap::new(sym.module.clone(), pres.module.clone(), mult_rows)?;
        let inv = modulus
            .inv((factorial(p - 1) % modulus.q() as u128) as u64)
            .ok_or_else(|| Error::Precondition("(p−1)! not invertible".into()))?;
        let jp = |s: &[u64]| -> Vec<u64> {
            let mut out = vec![0u64; gamma.dim()];
            for (k, a) in sym.basis.basis.iter().enumerate() {
                if s[k] == 0 {
                    continue;
                }
                let w = a.iter().fold(inv, |acc, &e| modulus.mul(acc, (factorial(e as u64) % modulus.q() as u128) as u64));
                let idx = gamma.gamma.basis().index_of(a);
                out[idx] = modulus.add(out[idx], modulus.mul(w, s[k]));
            }
            out
        };
        let jtilde: Vec<Vec<u64>> = mult.kernel_generators().iter().map(|s| jp(s)).collect();
        let mut span = gamma.gamma.relator_span.extend(&jtilde);
        let basis_vectors: Vec<Vec<u64>> = (0..gamma.dim()).map(|i| {
            let mut e = vec![0; gamma.dim()];
            e[i] = 1;
            e
        }).collect();
        let mut ideal_closed = true;
        let mut pending = jtilde.clone();
        while !pending.is_empty() {
            let mut missing = Vec::new();
            for t in &pending {
                for b in &basis_vectors {
                    let prod = gamma.mul(t, b);
                    if !span.contains(&prod) {
                        missing.push(prod);
                    }
                }
            }
            if !missing.is_empty() {
                ideal_closed = false;
                span = span.extend(&missing);
            }
            pending = missing;
        }
        let module = ZpnModule::new(modulus, gamma.dim(), &span.rows);
        guard(module.order(), cap.min(crate::finring::MAX_TABLE_ORDER as u64))?;
        let elements = module.elements(cap)?;
        let lookup: HashMap<Vec<u64>, usize> = elements.iter().enumerate().map(|(i, v)| (v.clone(), i)).collect();
        let idx = |v: &[u64]| lookup[&module.reduce(v)];
        let ring = FinRing::from_ops(
            elements.len(),
            idx(&vec![0; gamma.dim()]),
            idx(&gamma.one()),
            |a, b| idx(&module.add(&elements[a], &elements[b])),
            |a, b| idx(&gamma.mul(&elements[a], &elements[b])),
        )?;
        Ok(PhiAlgebra { p, n, gamma, span, jtilde, ideal_closed, module, elements, ring, lookup })
    }

    pub fn size(&self) -> usize {
        self.elements.len()
    }

    /// Index of the class of a vector of Γ^p(F).
    pub fn index(&self, v: &[u64]) -> usize {
        self.lookup[&self.module.reduce(v)]
    }

    /// Class of [x]_p.
    pub fn pure(&self, x: usize) -> usize {
        self.index(&self.gamma.pure(x))
    }

    /// φ_{n+1}(x) = j_p(x ⊗ 1 ⊗ .. ⊗ 1) = [x]_1[1]_{p−1}.
    pub fn phi(&self, x: usize) -> usize {
        let one = self.gamma.ring.one();
        self.index(&self.gamma.symbol(&[(x, 1), (one, self.p as u32 - 1)]).expect("degree p"))
    }

    /// j_p(1 ⊗ .. ⊗ 1) = (1/(p−1)!)·[1]_1^p.
    pub fn jp_of_one(&self) -> usize {
        let m = self.gamma.modulus();
        let one = self.gamma.ring.one();
        let inv = m.inv((factorial(self.p - 1) % m.q() as u128) as u64).expect("unit");
        let parts: Vec<(usize, u32)> = (0..self.p).map(|_| (one, 1)).collect();
        let v = self.gamma.symbol(&parts).expect("degree p");
        self.index(&v.iter().map(|&c| m.mul(c, inv)).collect::<Vec<_>>())
    }

    /// Image of the basis multi-symbols under a map Γ^p(F) → T given on generators by
    /// Π[g_i]_{a_i} ↦ multinom(a)·Π X_i^{a_i}, X_i ∈ T.
    pub(crate) fn power_law_images(&self, target: &FinRing, lifts: &[usize]) -> Vec<usize> {
        self.gamma
            .gamma
            .basis()
            .basis
            .iter()
            .map(|a| {
                let prod = a.iter().zip(lifts).fold(target.one(), |acc, (&e, &x)| target.mul(acc, target.pow(x, e as u64)));
                target.smul(multinomial(a) as u64, prod)
            })
            .collect()
    }

    /// Tabulates an additive map given on basis multi-symbols, after checking it kills the relations.
    pub(crate) fn descend(&self, target: &FinRing, images: &[usize]) -> Result<Vec<usize>> {
        for row in &self.span.rows {
            if additive_eval(target, images, row) != target.zero() {
                return Err(Error::IllDefined("map does not vanish on the relators and J̃_p".into()));
            }
        }
        Ok(self.elements.iter().map(|v| additive_eval(target, images, v)).collect())
    }

    /// Whether the image of φ is an ideal.
    pub fn phi_image_is_ideal(&self) -> bool {
        let mut image: Vec<bool> = vec![false; self.size()];
        for x in 0..self.gamma.ring.size() {
            image[self.phi(x)] = true;
        }
        (0..self.size()).all(|i| !image[i] || (0..self.size()).all(|z| image[self.ring.mul(i, z)]))
            && (0..self.size()).all(|i| !image[i] || (0..self.size()).all(|j| !image[j] || image[self.ring.add(i, j)]))
    }
}

/// L_{n+1}(f): Φ_{n+1}(R) → ℛ, [f(x)]_p ↦ x^p, tabulated on Φ.
pub fn l_map(f: &PElementaryMap, phi: &PhiAlgebra, order: ChoiceOrder) -> Result<Vec<usize>> {
    if phi.gamma.ring != f.target {
        return Err(Error::Shape("Φ is not built on the target of f".into()));
    }
    let lifts: Vec<usize> = phi.gamma.presentation.generators.iter().map(|&g| f.lift(g, order)).collect();
    let images = phi.power_law_images(&f.source, &lifts);
    let table = phi.descend(&f.source, &images)?;
    if !phi.ring.is_hom_to(&f.source, &table) {
        return Err(Error::Check("L is not a ring homomorphism".into()));
    }
    Ok(table)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::finring::integers_mod;

    #[test]
    fn phi_of_f2_is_z4() {
        let f2 = integers_mod(2);
        let phi = PhiAlgebra::build(&f2, 2, 1, 1 << 20).unwrap();
        assert_eq!(phi.size(), 4);
        assert!(phi.jtilde.iter().all(|v| phi.module.is_zero_elem(v)));
        assert!(crate::finring::find_isomorphism(&phi.ring, &integers_mod(4)).is_some());
        assert_eq!(phi.jp_of_one(), phi.ring.from_int(2));
    }
}
