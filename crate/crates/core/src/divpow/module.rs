//! Γ^d and S^d of a presented Z/p^n-module.

use super::symbols::{sym_product, GammaFamily, SymbolBasis};
use crate::error::{guard, Error, Result};
use crate::zpn_linalg::{Howell, Mat, ModuleMap, Modulus, ZpnModule};
use serde::Serialize;

/// How the relators [x+y]_d − [x]_d of the quotient presentation are generated.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum RelatorScheme {
    /// x runs over all of F.
    Full,
    /// x runs over vectors supported on at most d−1 coordinates.
    Sparse,
}

/// Largest free module enumerated by the full relator scheme.
pub const FULL_SCHEME_LIMIT: u128 = 1 << 16;

/// Γ^d_R(M) for M = F/N, presented as Γ^d_R(F) modulo the symbol relators.
#[derive(Clone, Debug)]
pub struct DividedPowerModule {
    pub source: ZpnModule,
    pub family: GammaFamily,
    pub relator_span: Howell,
    pub module: ZpnModule,
    pub scheme: RelatorScheme,
    pub relator_count: usize,
}

fn check_degree(modulus: Modulus, d: u32) -> Result<()> {
    if d == 0 || (d as u64) > modulus.p() {
        return Err(Error::Precondition(format!("({d}-1)! is not invertible modulo {}", modulus.q())));
    }
    Ok(())
}

fn vectors_with_support(k: usize, max_support: usize, q: u64) -> Vec<Vec<u64>> {
    let mut out = vec![vec![0u64; k]];
    fn rec(start: usize, left: usize, cur: &mut Vec<u64>, q: u64, out: &mut Vec<Vec<u64>>) {
        if left == 0 {
            return;
        }
        for i in start..cur.len() {
            for c in 1..q {
                cur[i] = c;
                out.push(cur.clone());
                rec(i + 1, left - 1, cur, q, out);
            }
            cur[i] = 0;
        }
    }
    rec(0, max_support, &mut vec![0; k], q, &mut out);
    out
}

fn all_vectors(k: usize, q: u64) -> Vec<Vec<u64>> {
    let mut out = vec![vec![]];
    for _ in 0..k {
        out = out.into_iter().flat_map(|v| (0..q).map(move |c| { let mut w = v.clone(); w.push(c); w })).collect();
    }
    out
}

impl DividedPowerModule {
    pub fn new(m: &ZpnModule, d: u32, scheme: RelatorScheme) -> Result<Self> {
        let modulus = m.modulus();
        check_degree(modulus, d)?;
        let k = m.rank();
        let q = modulus.q();
        let family = GammaFamily::new(modulus, k, d);
        let basis = family.degree(d).clone();
        let xs = match scheme {
            RelatorScheme::Full => {
                let size = (q as u128).checked_pow(k as u32).unwrap_or(u128::MAX);
                if size > FULL_SCHEME_LIMIT {
                    return Err(Error::Guard { needed: size, cap: FULL_SCHEME_LIMIT });
                }
                all_vectors(k, q)
            }
            RelatorScheme::Sparse => vectors_with_support(k, (d as usize - 1).min(k), q),
        };
        let gens = &m.relations().rows;
        guard((xs.len() as u128) * (gens.len() as u128) * (q as u128), 1 << 26)?;
        let mut span = Howell::empty(modulus, basis.len());
        let mut batch: Mat = Vec::new();
        let mut count = 0;
        for x in &xs {
            let px = basis.pure(x);
            for g in gens {
                for lambda in 1..q {
                    let xy: Vec<u64> = x.iter().zip(g).map(|(&a, &b)| modulus.add(a, modulus.mul(lambda, b))).collect();
                    let row: Vec<u64> = basis.pure(&xy).iter().zip(&px).map(|(&a, &b)| modulus.sub(a, b)).collect();
                    count += 1;
                    if !span.contains(&row) {
                        batch.push(row);
                    }
                    if batch.len() >= 64 {
                        span = span.extend(&batch);
                        batch.clear();
                    }
                }
            }
        }
        span = span.extend(&batch);
        let module = ZpnModule::new(modulus, basis.len(), &span.rows);
        Ok(DividedPowerModule { source: m.clone(), family, relator_span: span, module, scheme, relator_count: count })
    }

    pub fn degree(&self) -> u32 {
        (self.family.levels.len() - 1) as u32
    }
    pub fn basis(&self) -> &SymbolBasis {
        self.family.degree(self.degree())
    }

    /// [x]_d for x given in coordinates of M.
    pub fn pure(&self, x: &[u64]) -> Vec<u64> {
        self.module.reduce(&self.basis().pure(x))
    }

    /// Π_j [x_j]_{a_j} with Σ a_j = d.
    pub fn symbol(&self, parts: &[(Vec<u64>, u32)]) -> Result<Vec<u64>> {
        let total: u32 = parts.iter().map(|(_, a)| a).sum();
        if total != self.degree() {
            return Err(Error::Shape(format!("symbol of degree {total} in Γ^{}", self.degree())));
        }
        Ok(self.module.reduce(&self.family.symbol(parts)))
    }

    /// Γ^d(f) for f: M → M', where `target` is Γ^d(M').
    pub fn functor_map(&self, f: &ModuleMap, target: &DividedPowerModule) -> Result<ModuleMap> {
        if !f.domain.same_presentation(&self.source) || !f.codomain.same_presentation(&target.source) {
            return Err(Error::Shape("map does not match the divided power modules".into()));
        }
        let rows = self
            .basis()
            .basis
            .iter()
            .map(|a| {
                let parts: Vec<(Vec<u64>, u32)> =
                    a.iter().enumerate().map(|(i, &e)| (f.matrix()[i].clone(), e)).collect();
                target.family.symbol(&parts)
            })
            .collect();
        ModuleMap::new(self.module.clone(), target.module.clone(), rows)
    }
}

/// S^d_R(M) = S^d(F) / N·S^{d−1}(F).
#[derive(Clone, Debug)]
pub struct SymmetricPowerModule {
    pub source: ZpnModule,
    pub basis: SymbolBasis,
    pub module: ZpnModule,
}

impl SymmetricPowerModule {
    pub fn new(m: &ZpnModule, d: u32) -> Self {
        let modulus = m.modulus();
        let k = m.rank();
        let basis = SymbolBasis::new(modulus, k, d);
        let mut rels = Vec::new();
        if d > 0 {
            let b1 = SymbolBasis::new(modulus, k, 1);
            let bl = SymbolBasis::new(modulus, k, d - 1);
            for g in &m.relations().rows {
                for a in &bl.basis {
                    rels.push(sym_product(&b1, g, &bl, &bl.unit_vector(a), &basis));
                }
            }
        }
        let module = ZpnModule::new(modulus, basis.len(), &rels);
        SymmetricPowerModule { source: m.clone(), basis, module }
    }

    /// x_1 x_2 ... x_d.
    pub fn monomial(&self, xs: &[Vec<u64>]) -> Vec<u64> {
        let m = self.basis.modulus;
        let k = self.basis.rank;
        let mut acc_basis = SymbolBasis::new(m, k, 0);
        let mut acc = vec![1 % m.q()];
        let b1 = SymbolBasis::new(m, k, 1);
        for x in xs {
            let nb = SymbolBasis::new(m, k, acc_basis.degree + 1);
            acc = sym_product(&acc_basis, &acc, &b1, x, &nb);
            acc_basis = nb;
        }
        self.module.reduce(&acc)
    }
}

/// Γ^d computed over Z (through a large enough Z/p^N) and over Z/p^{n+1} for a Z/p^n-module.
#[derive(Clone, Debug, Serialize)]
pub struct IntegralComparison {
    pub integral_factors: Vec<u64>,
    pub truncated_factors: Vec<u64>,
    pub agree: bool,
}

/// Compare Γ^d_Z(M) with Γ^d_{Z/p^{n+1}}(M) for a module M over Z/p^n.
pub fn compare_integral_gamma(m: &ZpnModule, d: u32) -> Result<IntegralComparison> {
    let base = m.modulus();
    let (p, n) = (base.p(), base.n());
    let lift = |target: Modulus| -> ZpnModule {
        let k = m.rank();
        let mut rels: Mat = m.relations().rows.clone();
        for i in 0..k {
            let mut r = vec![0; k];
            r[i] = base.q();
            rels.push(r);
        }
        ZpnModule::new(target, k, &rels)
    };
    let wide = Modulus::new(p, n + 2)?;
    let narrow = Modulus::new(p, n + 1)?;
    let gw = DividedPowerModule::new(&lift(wide), d, RelatorScheme::Sparse)?;
    let gn = DividedPowerModule::new(&lift(narrow), d, RelatorScheme::Sparse)?;
    let integral_factors = gw.module.invariant_factors();
    let truncated_factors = gn.module.invariant_factors();
    // Γ^d_Z(M) is finite; it equals its reduction mod p^{n+2} once no factor reaches p^{n+2}.
    let bounded = integral_factors.iter().all(|&f| f < wide.q());
    let agree = bounded && integral_factors == truncated_factors;
    Ok(IntegralComparison { integral_factors, truncated_factors, agree })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn gamma_two_of_klein_over_z4() {
        let m = Modulus::new(2, 2).unwrap();
        let v = ZpnModule::cyclic_sum(m, &[1, 1]);
        for scheme in [RelatorScheme::Full, RelatorScheme::Sparse] {
            let g = DividedPowerModule::new(&v, 2, scheme).unwrap();
            let mut f = g.module.invariant_factors();
            f.sort_unstable_by(|a, b| b.cmp(a));
            assert_eq!(f, vec![4, 4, 2]);
            assert_eq!(g.module.order(), 32);
        }
    }

    #[test]
    fn precondition() {
        let m = Modulus::new(2, 2).unwrap();
        assert!(matches!(
            DividedPowerModule::new(&ZpnModule::free(m, 1), 3, RelatorScheme::Full),
            Err(Error::Precondition(_))
        ));
    }
}
