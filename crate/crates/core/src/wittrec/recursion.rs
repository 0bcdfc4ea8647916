//! The surjection s_{n+1}: Φ_{n+1}(W_n(B)) → W_{n+1}(B) and its kernel.

use super::{additive_eval, l_map, ChoiceOrder, PElementaryMap, PhiAlgebra};
use crate::error::{Error, Result};
use crate::finring::{integers_mod, FinRing};
use crate::fpalg::{FpAlgebra, LaurentElem, LaurentPolys};
use crate::report::{CheckOutcome, Mode};
use crate::witt::{WittRing, WittVector};
use crate::zpn_linalg::{Howell, Solver};

/// W_n(B) as a tabulated ring indexed like `WittRing::index`; W_0(B) is the zero ring.
pub fn witt_ring_table(b: &FpAlgebra, n: usize) -> Result<FinRing> {
    if n == 0 {
        return Ok(integers_mod(1));
    }
    WittRing::new(b, n)?.to_finring()
}

/// Components of Θ with Θ(y) = Frob^{-1}((y_0, .., y_{n−1}, 0)^p) in W_{n+1}, as polynomials in y.
fn theta_polynomials(p: u64, n: usize) -> Result<Vec<LaurentElem>> {
    let lp = LaurentPolys::new(p, n);
    let w = WittRing::new(&lp, n + 1)?;
    let mut x: Vec<LaurentElem> = (0..n)
        .map(|i| {
            let mut e = vec![0i32; n];
            e[i] = 1;
            lp.monomial(e, 1)
        })
        .collect();
    x.push(lp.zero());
    let power = w.pow(&WittVector(x), p)?;
    power
        .0
        .iter()
        .map(|c| lp.frob_root(c).ok_or_else(|| Error::Check("p-th power of a Witt vector is not a Frobenius image".into())))
        .collect()
}

fn eval_poly(b: &FpAlgebra, poly: &LaurentElem, vals: &[Vec<u64>]) -> Vec<u64> {
    poly.iter().fold(b.zero(), |acc, (e, &c)| {
        let term = e.iter().zip(vals).fold(b.from_int(c as i64), |t, (&k, v)| b.mul(&t, &b.pow(v, k as u64)));
        b.add(&acc, &term)
    })
}

/// s_{n+1} tabulated on Φ_{n+1}(W_n(B)), with its verification record.
#[derive(Clone, Debug)]
pub struct SRecursion {
    pub base: FpAlgebra,
    pub n: usize,
    pub phi: PhiAlgebra,
    pub witt_next: FinRing,
    /// s on each element of Φ, as an index into W_{n+1}(B).
    pub table: Vec<usize>,
    pub kernel: Vec<usize>,
    /// Span of [i(τ_{n−1}(x))]_p − p^{p−1}φ(τ_n(x)) over x ∈ B, as elements of Φ.
    pub generator_span: Vec<usize>,
    pub checks: Vec<CheckOutcome>,
}

impl SRecursion {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }
    pub fn is_isomorphism(&self) -> bool {
        self.kernel.len() == 1 && self.phi.size() == self.witt_next.size()
    }
}

pub fn s_recursion(b: &FpAlgebra, n: usize, cap: u64) -> Result<SRecursion> {
    if n == 0 {
        return Err(Error::Precondition("the recursion starts at n = 1".into()));
    }
    let p = b.p();
    let wn = WittRing::new(b, n)?;
    let wn1 = WittRing::new(b, n + 1)?;
    let r = wn.to_finring()?;
    let big = wn1.to_finring()?;
    let phi = PhiAlgebra::build(&r, p, n, cap)?;
    let pres = &phi.gamma.presentation;
    let modulus = phi.gamma.modulus();

    let theta = theta_polynomials(p, n)?;
    let theta_at = |y: usize| -> usize {
        let comps = wn.element(y).0;
        wn1.index(&WittVector(theta.iter().map(|t| eval_poly(b, t, &comps)).collect()))
    };

    // Expand each basis multi-symbol through pure symbols [Σ c_i g_i]_p with 0 ≤ c_i < p.
    let k = pres.generators.len();
    let mut points: Vec<Vec<u64>> = vec![vec![]];
    for _ in 0..k {
        points = points.into_iter().flat_map(|v| (0..p).map(move |c| { let mut w = v.clone(); w.push(c); w })).collect();
    }
    let basis = phi.gamma.gamma.basis();
    let pures: Vec<Vec<u64>> = points.iter().map(|c| basis.pure(c)).collect();
    let solver = Solver::new(modulus, &pures, basis.len());
    let point_values: Vec<usize> = points.iter().map(|c| theta_at(pres.element(c))).collect();
    let mut images = Vec::with_capacity(basis.len());
    for i in 0..basis.len() {
        let mut e = vec![0; basis.len()];
        e[i] = 1;
        let lambda = solver.solve(&e).ok_or_else(|| Error::Check("pure symbols do not span Γ^p".into()))?;
        images.push(additive_eval(&big, &point_values, &lambda));
    }
    let table = phi.descend(&big, &images)?;

    let mut checks = Vec::new();
    checks.push(CheckOutcome::new("s.well-defined", true, Mode::Exhaustive, "vanishes on the symbol relators and on J̃_p"));
    checks.push(CheckOutcome::new("s.ring-hom", phi.ring.is_hom_to(&big, &table), Mode::Exhaustive, format!("all pairs in Φ of order {}", phi.size())));
    let mut hit = vec![false; big.size()];
    table.iter().for_each(|&w| hit[w] = true);
    checks.push(CheckOutcome::new("s.surjective", hit.iter().all(|&h| h), Mode::Exhaustive, format!("onto W_{}(B) of order {}", n + 1, big.size())));

    let teich_ok = b.elements(cap)?.iter().all(|x| table[phi.pure(wn.index(&wn.teichmuller(x)))] == wn1.index(&wn1.teichmuller(x)));
    checks.push(CheckOutcome::new("s.teichmuller", teich_ok, Mode::Exhaustive, "s([τ_n(x)]_p) = τ_{n+1}(x) for all x in B"));

    let restrict: Vec<usize> = (0..big.size()).map(|w| wn.index(&wn1.restrict(&wn1.element(w), n).unwrap())).collect();
    let pi = PElementaryMap::new(big.clone(), r.clone(), restrict, p, cap)?;
    let l = l_map(&pi, &phi, ChoiceOrder::First)?;
    let frob_ok = (0..phi.size()).all(|s| wn1.index(&wn1.frobenius(&wn1.element(table[s])).unwrap()) == l[s]);
    checks.push(CheckOutcome::new("s.frobenius", frob_ok, Mode::Exhaustive, "Frob ∘ s = L(π) on every element of Φ"));

    let kernel: Vec<usize> = (0..phi.size()).filter(|&s| table[s] == big.zero()).collect();
    let wprev = if n >= 2 { Some(WittRing::new(b, n - 1)?) } else { None };
    let pp1 = modulus.pow(p, p - 1);
    let mut gens = Vec::new();
    for x in b.elements(cap)? {
        let shifted = match &wprev {
            Some(w) => wn.inject(&w.teichmuller(&x), 1)?,
            None => wn.zero(),
        };
        let first = phi.elements[phi.pure(wn.index(&shifted))].clone();
        let second = phi.elements[phi.phi(wn.index(&wn.teichmuller(&x)))].clone();
        gens.push(phi.module.sub(&first, &phi.module.scale(pp1, &second)));
    }
    let span: Howell = phi.module.submodule_key(&gens);
    let generator_span: Vec<usize> = (0..phi.size()).filter(|&s| span.contains(&phi.elements[s])).collect();
    let gens_in_kernel = gens.iter().all(|g| table[phi.index(g)] == big.zero());
    let kernel_in_span = kernel.iter().all(|&s| span.contains(&phi.elements[s]));
    checks.push(CheckOutcome::new(
        "s.kernel",
        gens_in_kernel && kernel_in_span,
        Mode::Exhaustive,
        format!("kernel of order {} equals the span of the {} generators (order {})", kernel.len(), gens.len(), generator_span.len()),
    ));
    let iso = kernel.len() == 1;
    checks.push(CheckOutcome::new(
        "s.iso-if-perfect",
        iso || !b.is_perfect(),
        Mode::Exhaustive,
        format!("B perfect: {}, s injective: {iso}", b.is_perfect()),
    ));
    if b.is_perfect() {
        checks.push(CheckOutcome::new(
            "s.order",
            phi.size() as u128 == b.size().pow(n as u32 + 1),
            Mode::Exhaustive,
            format!("|Φ| = {} and |B|^{} = {}", phi.size(), n + 1, b.size().pow(n as u32 + 1)),
        ));
    }
    Ok(SRecursion { base: b.clone(), n, phi, witt_next: big, table, kernel, generator_span, checks })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn prime_field_n1() {
        let b = FpAlgebra::prime_field(2).unwrap();
        let s = s_recursion(&b, 1, 1 << 20).unwrap();
        assert!(s.passed(), "{:?}", s.checks);
        assert!(s.is_isomorphism());
    }
}
