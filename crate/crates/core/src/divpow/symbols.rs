//! Multi-symbol bases of Γ^d and monomial bases of S^d for a free Z/p^n-module.

use crate::zpn_linalg::{binomial, Modulus};
use std::collections::HashMap;

/// Exponent vectors a with |a| = d in k variables, lexicographically decreasing.
pub fn exponent_vectors(k: usize, d: u32) -> Vec<Vec<u32>> {
    fn rec(i: usize, k: usize, rest: u32, cur: &mut Vec<u32>, out: &mut Vec<Vec<u32>>) {
        if i + 1 == k {
            cur[i] = rest;
            out.push(cur.clone());
            cur[i] = 0;
            return;
        }
        for e in (0..=rest).rev() {
            cur[i] = e;
            rec(i + 1, k, rest - e, cur, out);
        }
        cur[i] = 0;
    }
    let mut out = Vec::new();
    if k == 0 {
        if d == 0 {
            out.push(vec![]);
        }
        return out;
    }
    rec(0, k, d, &mut vec![0; k], &mut out);
    out
}

/// Basis of Γ^d(R^k) by multi-symbols Π[e_i]_{a_i}, or of S^d(R^k) by monomials.
#[derive(Clone, Debug)]
pub struct SymbolBasis {
    pub modulus: Modulus,
    pub rank: usize,
    pub degree: u32,
    pub basis: Vec<Vec<u32>>,
    index: HashMap<Vec<u32>, usize>,
}

impl SymbolBasis {
    pub fn new(modulus: Modulus, rank: usize, degree: u32) -> Self {
        let basis = exponent_vectors(rank, degree);
        let index = basis.iter().enumerate().map(|(i, a)| (a.clone(), i)).collect();
        SymbolBasis { modulus, rank, degree, basis, index }
    }
    pub fn len(&self) -> usize {
        self.basis.len()
    }
    pub fn is_empty(&self) -> bool {
        self.basis.is_empty()
    }
    pub fn index_of(&self, a: &[u32]) -> usize {
        self.index[a]
    }
    pub fn unit_vector(&self, a: &[u32]) -> Vec<u64> {
        let mut v = vec![0; self.len()];
        v[self.index_of(a)] = 1;
        v
    }

    /// c^a = Π c_i^{a_i}.
    fn coeff_power(&self, c: &[u64], a: &[u32]) -> u64 {
        let m = &self.modulus;
        a.iter().zip(c).fold(1 % m.q(), |acc, (&e, &ci)| m.mul(acc, m.pow(ci, e as u64)))
    }

    /// [x]_d = Σ_{|a| = d} x^a Π[e_i]_{a_i}.
    pub fn pure(&self, x: &[u64]) -> Vec<u64> {
        self.basis.iter().map(|a| self.coeff_power(x, a)).collect()
    }

    /// x^d in S^d, expanded with multinomial coefficients.
    pub fn power(&self, x: &[u64]) -> Vec<u64> {
        let m = &self.modulus;
        self.basis
            .iter()
            .map(|a| m.mul(self.coeff_power(x, a), (multinomial(a) % m.q() as u128) as u64))
            .collect()
    }
}

pub fn multinomial(a: &[u32]) -> u128 {
    let mut total = 0u64;
    let mut acc = 1u128;
    for &e in a {
        total += e as u64;
        acc *= binomial(total, e as u64);
    }
    acc
}

/// Product Γ^a × Γ^b → Γ^{a+b} on multi-symbol coordinates.
pub fn gamma_product(x_basis: &SymbolBasis, x: &[u64], y_basis: &SymbolBasis, y: &[u64], out: &SymbolBasis) -> Vec<u64> {
    let m = &out.modulus;
    let mut v = vec![0u64; out.len()];
    for (i, &cx) in x.iter().enumerate() {
        if cx == 0 {
            continue;
        }
        for (j, &cy) in y.iter().enumerate() {
            if cy == 0 {
                continue;
            }
            let (a, b) = (&x_basis.basis[i], &y_basis.basis[j]);
            let s: Vec<u32> = a.iter().zip(b).map(|(u, w)| u + w).collect();
            let coef = a.iter().zip(b).fold(1u64 % m.q(), |acc, (&u, &w)| {
                m.mul(acc, (binomial((u + w) as u64, u as u64) % m.q() as u128) as u64)
            });
            let k = out.index_of(&s);
            v[k] = m.add(v[k], m.mul(coef, m.mul(cx, cy)));
        }
    }
    v
}

/// Product S^a × S^b → S^{a+b} on monomial coordinates.
pub fn sym_product(x_basis: &SymbolBasis, x: &[u64], y_basis: &SymbolBasis, y: &[u64], out: &SymbolBasis) -> Vec<u64> {
    let m = &out.modulus;
    let mut v = vec![0u64; out.len()];
    for (i, &cx) in x.iter().enumerate() {
        if cx == 0 {
            continue;
        }
        for (j, &cy) in y.iter().enumerate() {
            if cy == 0 {
                continue;
            }
            let s: Vec<u32> = x_basis.basis[i].iter().zip(&y_basis.basis[j]).map(|(u, w)| u + w).collect();
            let k = out.index_of(&s);
            v[k] = m.add(v[k], m.mul(cx, cy));
        }
    }
    v
}

/// Graded family Γ^0..Γ^d of a free module, for expanding symbol products.
#[derive(Clone, Debug)]
pub struct GammaFamily {
    pub levels: Vec<SymbolBasis>,
}

impl GammaFamily {
    pub fn new(modulus: Modulus, rank: usize, max_degree: u32) -> Self {
        GammaFamily { levels: (0..=max_degree).map(|d| SymbolBasis::new(modulus, rank, d)).collect() }
    }

    pub fn one(&self) -> Vec<u64> {
        vec![1 % self.levels[0].modulus.q()]
    }

    /// Π_j [x_j]_{a_j}, expanded on the multi-symbol basis of degree Σ a_j.
    pub fn symbol(&self, parts: &[(Vec<u64>, u32)]) -> Vec<u64> {
        let mut deg = 0u32;
        let mut acc = self.one();
        for (x, a) in parts {
            if *a == 0 {
                continue;
            }
            let px = self.levels[*a as usize].pure(x);
            let nd = deg + a;
            acc = gamma_product(&self.levels[deg as usize], &acc, &self.levels[*a as usize], &px, &self.levels[nd as usize]);
            deg = nd;
        }
        acc
    }

    pub fn degree(&self, d: u32) -> &SymbolBasis {
        &self.levels[d as usize]
    }
}
