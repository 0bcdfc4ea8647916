//! Polynomial laws between Z/p^n-modules, evaluated over polynomial extensions Z/p^n[u].

use super::module::DividedPowerModule;
use crate::error::{Error, Result};
use crate::zpn_linalg::{Mat, ModuleMap, Modulus, ZpnModule};
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use std::collections::BTreeMap;
use std::sync::Arc;

/// A polynomial in `nvars` variables over Z/p^n.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ZpnPoly {
    pub modulus: Modulus,
    pub nvars: usize,
    pub terms: BTreeMap<Vec<u32>, u64>,
}

impl ZpnPoly {
    pub fn zero(modulus: Modulus, nvars: usize) -> Self {
        ZpnPoly { modulus, nvars, terms: BTreeMap::new() }
    }
    pub fn constant(modulus: Modulus, nvars: usize, c: u64) -> Self {
        let mut z = Self::zero(modulus, nvars);
        z.add_term(vec![0; nvars], c);
        z
    }
    pub fn var(modulus: Modulus, nvars: usize, i: usize) -> Self {
        let mut e = vec![0; nvars];
        e[i] = 1;
        let mut z = Self::zero(modulus, nvars);
        z.add_term(e, 1);
        z
    }
    pub fn add_term(&mut self, e: Vec<u32>, c: u64) {
        let m = self.modulus;
        let c = c % m.q();
        if c == 0 {
            return;
        }
        let entry = self.terms.entry(e).or_insert(0);
        *entry = m.add(*entry, c);
        if *entry == 0 {
            self.terms.retain(|_, v| *v != 0);
        }
    }
    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }
    pub fn coefficient(&self, e: &[u32]) -> u64 {
        self.terms.get(e).copied().unwrap_or(0)
    }
    pub fn add(&self, o: &ZpnPoly) -> ZpnPoly {
        let mut r = self.clone();
        for (e, &c) in &o.terms {
            r.add_term(e.clone(), c);
        }
        r
    }
    pub fn neg(&self) -> ZpnPoly {
        let m = self.modulus;
        ZpnPoly { modulus: m, nvars: self.nvars, terms: self.terms.iter().map(|(e, &c)| (e.clone(), m.neg(c))).collect() }
    }
    pub fn sub(&self, o: &ZpnPoly) -> ZpnPoly {
        self.add(&o.neg())
    }
    pub fn scale(&self, t: u64) -> ZpnPoly {
        let mut r = Self::zero(self.modulus, self.nvars);
        for (e, &c) in &self.terms {
            r.add_term(e.clone(), self.modulus.mul(c, t % self.modulus.q()));
        }
        r
    }
    pub fn mul(&self, o: &ZpnPoly) -> ZpnPoly {
        let m = self.modulus;
        let mut r = Self::zero(m, self.nvars);
        for (a, &x) in &self.terms {
            for (b, &y) in &o.terms {
                let e: Vec<u32> = a.iter().zip(b).map(|(i, j)| i + j).collect();
                r.add_term(e, m.mul(x, y));
            }
        }
        r
    }
    pub fn pow(&self, k: u64) -> ZpnPoly {
        let mut acc = Self::constant(self.modulus, self.nvars, 1);
        for _ in 0..k {
            acc = acc.mul(self);
        }
        acc
    }
    /// The same polynomial in a ring with `extra` more variables.
    pub fn widen(&self, extra: usize) -> ZpnPoly {
        let terms = self
            .terms
            .iter()
            .map(|(e, &c)| {
                let mut e = e.clone();
                e.extend(std::iter::repeat_n(0, extra));
                (e, c)
            })
            .collect();
        ZpnPoly { modulus: self.modulus, nvars: self.nvars + extra, terms }
    }
    /// Substitute the constant `value` for variable `var` (the variable stays, with degree 0).
    pub fn specialize(&self, var: usize, value: u64) -> ZpnPoly {
        let m = self.modulus;
        let mut r = Self::zero(m, self.nvars);
        for (e, &c) in &self.terms {
            let mut e2 = e.clone();
            let k = e2[var];
            e2[var] = 0;
            r.add_term(e2, m.mul(c, m.pow(value % m.q(), k as u64)));
        }
        r
    }
}

type LawFn = dyn Fn(&[ZpnPoly]) -> Vec<ZpnPoly> + Send + Sync;

/// A natural family of maps M ⊗ R[u] → R^t ⊗ R[u], given on coordinates of the free cover of M.
#[derive(Clone)]
pub struct PolynomialLaw {
    pub source: ZpnModule,
    pub target_rank: usize,
    pub degree: u32,
    eval: Arc<LawFn>,
}

impl std::fmt::Debug for PolynomialLaw {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("PolynomialLaw").field("source", &self.source).field("target_rank", &self.target_rank).field("degree", &self.degree).finish()
    }
}

impl PolynomialLaw {
    pub fn new(source: ZpnModule, target_rank: usize, degree: u32, eval: impl Fn(&[ZpnPoly]) -> Vec<ZpnPoly> + Send + Sync + 'static) -> Self {
        PolynomialLaw { source, target_rank, degree, eval: Arc::new(eval) }
    }

    /// x ↦ [x]_d into Γ^d of the free cover.
    pub fn divided_power(source: ZpnModule, d: u32) -> Self {
        let basis = super::symbols::SymbolBasis::new(source.modulus(), source.rank(), d);
        let target_rank = basis.len();
        PolynomialLaw::new(source, target_rank, d, move |x: &[ZpnPoly]| {
            basis
                .basis
                .iter()
                .map(|a| {
                    let nv = x[0].nvars;
                    a.iter().zip(x).fold(ZpnPoly::constant(x[0].modulus, nv, 1), |acc, (&e, xi)| acc.mul(&xi.pow(e as u64)))
                })
                .collect()
        })
    }

    pub fn modulus(&self) -> Modulus {
        self.source.modulus()
    }

    pub fn evaluate(&self, x: &[ZpnPoly]) -> Result<Vec<ZpnPoly>> {
        if x.len() != self.source.rank() || x.iter().any(|p| p.nvars != x[0].nvars) {
            return Err(Error::Shape("argument does not match the source module".into()));
        }
        let out = (self.eval)(x);
        if out.len() != self.target_rank {
            return Err(Error::Shape("law returned a value of the wrong rank".into()));
        }
        Ok(out)
    }

    /// Coefficient of u^a in F(Σ u_i e_i), for each exponent vector a of degree m: the
    /// linear map Γ^m(F) → R^t attached to the law.
    pub fn generic_coefficients(&self, gamma: &DividedPowerModule) -> Result<Mat> {
        let k = self.source.rank();
        let generic: Vec<ZpnPoly> = (0..k).map(|i| ZpnPoly::var(self.modulus(), k, i)).collect();
        let value = self.evaluate(&generic)?;
        Ok(gamma.basis().basis.iter().map(|a| value.iter().map(|v| v.coefficient(a)).collect()).collect())
    }

    /// The induced linear map Γ^m(M) → target; fails if the law does not factor through M.
    pub fn induced_map(&self, gamma: &DividedPowerModule, target: &ZpnModule) -> Result<ModuleMap> {
        if gamma.degree() != self.degree || !gamma.source.same_presentation(&self.source) {
            return Err(Error::Shape("divided power module does not match the law".into()));
        }
        ModuleMap::new(gamma.module.clone(), target.clone(), self.generic_coefficients(gamma)?)
    }

    fn random_argument(&self, rng: &mut ChaCha8Rng, nvars: usize, max_deg: u32) -> Vec<ZpnPoly> {
        let m = self.modulus();
        (0..self.source.rank())
            .map(|_| {
                let mut p = ZpnPoly::zero(m, nvars);
                for _ in 0..3 {
                    let e: Vec<u32> = (0..nvars).map(|_| rng.gen_range(0..=max_deg)).collect();
                    p.add_term(e, rng.gen_range(0..m.q()));
                }
                p
            })
            .collect()
    }

    /// F(t·x) = t^m F(x) for a fresh variable t, on random arguments over R[u_1, u_2].
    pub fn check_homogeneity(&self, samples: usize, seed: u64) -> Result<bool> {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        for _ in 0..samples {
            let x = self.random_argument(&mut rng, 2, 2);
            let t = ZpnPoly::var(self.modulus(), 3, 2);
            let xw: Vec<ZpnPoly> = x.iter().map(|p| p.widen(1)).collect();
            let scaled: Vec<ZpnPoly> = xw.iter().map(|p| p.mul(&t)).collect();
            let lhs = self.evaluate(&scaled)?;
            let tm = t.pow(self.degree as u64);
            let rhs: Vec<ZpnPoly> = self.evaluate(&xw)?.iter().map(|v| v.mul(&tm)).collect();
            if lhs != rhs {
                return Ok(false);
            }
        }
        Ok(true)
    }

    /// Evaluating then specializing u_1 ↦ λ equals specializing then evaluating.
    pub fn check_base_change(&self, samples: usize, seed: u64) -> Result<bool> {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        for _ in 0..samples {
            let x = self.random_argument(&mut rng, 2, 3);
            let lambda = rng.gen_range(0..self.modulus().q());
            let lhs: Vec<ZpnPoly> = self.evaluate(&x)?.iter().map(|v| v.specialize(0, lambda)).collect();
            let xs: Vec<ZpnPoly> = x.iter().map(|p| p.specialize(0, lambda)).collect();
            if lhs != self.evaluate(&xs)? {
                return Ok(false);
            }
        }
        Ok(true)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::divpow::RelatorScheme;

    #[test]
    fn divided_power_law_is_universal() {
        let m = Modulus::new(3, 2).unwrap();
        let src = ZpnModule::free(m, 2);
        let law = PolynomialLaw::divided_power(src.clone(), 3);
        assert!(law.check_homogeneity(5, 1).unwrap());
        assert!(law.check_base_change(5, 2).unwrap());
        let g = DividedPowerModule::new(&src, 3, RelatorScheme::Full).unwrap();
        let f = law.induced_map(&g, &ZpnModule::free(m, g.basis().len())).unwrap();
        assert!(f.equals(&ModuleMap::identity(g.module.clone())));
    }

    #[test]
    fn non_homogeneous_law_is_detected() {
        let m = Modulus::new(2, 2).unwrap();
        let law = PolynomialLaw::new(ZpnModule::free(m, 1), 1, 2, |x: &[ZpnPoly]| vec![x[0].pow(2).add(&x[0])]);
        assert!(!law.check_homogeneity(5, 0).unwrap());
    }
}
