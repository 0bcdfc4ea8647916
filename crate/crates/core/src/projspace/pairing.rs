//! The pairing Γ^{p^{r−1}}_{Z/p^r}(W^∨) × H⁰(W_r(O(1))) → Z/p^r and the map h to the dual.
//!
//! Over F_p the Frobenius twist W = Frob^{r−1}_*(V) is V again, so a form φ = Σ u_i φ_i
//! sends the section with Ev(s) = (g_0, .., g_{r−1}) to F_s(φ) = Σ_m p^m·g̃_m(u)^{p^{r−1−m}},
//! g̃_m being the coefficientwise lift of g_m to Z/p^r.

use super::{h0_witt_o1, H0Group, ProjectiveSpace};
use crate::divpow::{DividedPowerModule, PolynomialLaw, RelatorScheme, ZpnPoly};
use crate::error::{Error, Result};
use crate::fpalg::GradedElem;
use crate::report::{CheckOutcome, Mode};
use crate::witt::WittVector;
use crate::zpn_linalg::{pontryagin_dual, DualModule, ModuleMap, Modulus, ZpnModule};

/// Γ^{p^{r−1}}(W^∨) for one (p, d, r) instance, with the laws F_s.
#[derive(Clone, Debug)]
pub struct SectionPairing {
    pub space: ProjectiveSpace,
    /// W^∨ = F_p^d as a Z/p^r-module.
    pub dual_source: ZpnModule,
    pub gamma: DividedPowerModule,
}

fn lift_eval(g: &GradedElem, x: &[ZpnPoly], modulus: Modulus) -> ZpnPoly {
    let nv = x[0].nvars;
    let mut acc = ZpnPoly::zero(modulus, nv);
    for (m, &c) in g {
        let term = m.iter().zip(x).fold(ZpnPoly::constant(modulus, nv, c), |t, (&e, xi)| t.mul(&xi.pow(e as u64)));
        acc = acc.add(&term);
    }
    acc
}

impl SectionPairing {
    /// Needs p^{r−1} ≤ p, i.e. r ≤ 2, for the divided power presentation.
    pub fn new(space: &ProjectiveSpace) -> Result<Self> {
        let modulus = space.modulus()?;
        let degree = space.p().pow(space.r() as u32 - 1) as u32;
        let relations: Vec<Vec<u64>> = (0..space.d()).map(|i| (0..space.d()).map(|j| if i == j { space.p() % modulus.q() } else { 0 }).collect()).collect();
        let dual_source = ZpnModule::new(modulus, space.d(), &relations);
        let gamma = DividedPowerModule::new(&dual_source, degree, RelatorScheme::Sparse)?;
        Ok(SectionPairing { space: space.clone(), dual_source, gamma })
    }

    pub fn degree(&self) -> u32 {
        self.gamma.degree()
    }

    /// φ ↦ F_s(φ) for the section with Ev(s) = g.
    pub fn section_law(&self, g: &WittVector<GradedElem>) -> PolynomialLaw {
        let modulus = self.dual_source.modulus();
        let p = self.space.p();
        let r = self.space.r();
        let comps = g.0.clone();
        PolynomialLaw::new(self.dual_source.clone(), 1, self.degree(), move |x: &[ZpnPoly]| {
            let mut total = ZpnPoly::zero(modulus, x[0].nvars);
            for (m, gm) in comps.iter().enumerate() {
                let term = lift_eval(gm, x, modulus).pow(p.pow((r - 1 - m) as u32)).scale(p.pow(m as u32));
                total = total.add(&term);
            }
            vec![total]
        })
    }

    /// Values of ⟨·, s⟩ on the generators of Γ; fails if F_s does not factor through Γ.
    pub fn functional(&self, g: &WittVector<GradedElem>) -> Result<Vec<u64>> {
        let target = ZpnModule::free(self.dual_source.modulus(), 1);
        let map = self.section_law(g).induced_map(&self.gamma, &target)?;
        Ok(map.matrix().iter().map(|row| row[0]).collect())
    }

    /// Same values read off the generic form, without the factoring check.
    pub fn functional_unchecked(&self, g: &WittVector<GradedElem>) -> Result<Vec<u64>> {
        Ok(self.section_law(g).generic_coefficients(&self.gamma)?.iter().map(|row| row[0]).collect())
    }

    /// ⟨x, s⟩ for x in coordinates of Γ.
    pub fn pair(&self, x: &[u64], g: &WittVector<GradedElem>) -> Result<u64> {
        let values = self.functional_unchecked(g)?;
        if x.len() != values.len() {
            return Err(Error::Shape("element does not belong to the divided power module".into()));
        }
        let md = self.dual_source.modulus();
        Ok(x.iter().zip(&values).fold(0, |acc, (&a, &b)| md.add(acc, md.mul(a, b))))
    }

    /// [φ]_{p^{r−1}} for φ ∈ W^∨ given by its coordinates in F_p.
    pub fn pure(&self, phi: &[u64]) -> Vec<u64> {
        self.gamma.pure(phi)
    }
}

/// h_{S,r}: H⁰(W_r(O(1))) → Γ^{p^{r−1}}(W^∨)^∨ with its checks.
#[derive(Clone, Debug)]
pub struct IsoGamma {
    pub h0: H0Group,
    pub pairing: SectionPairing,
    pub dual: DualModule,
    pub h: Option<ModuleMap>,
    /// Row k: values of ⟨·, s_k⟩ on the generators of Γ, s_k the k-th generator of H⁰.
    pub pairing_matrix: Vec<Vec<u64>>,
    pub checks: Vec<CheckOutcome>,
}

impl IsoGamma {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }
}

pub fn isogamma_check(p: u64, d: usize, r: usize, cap: u64) -> Result<IsoGamma> {
    let h0 = h0_witt_o1(p, d, r, cap)?;
    let space = h0.space.clone();
    let pairing = SectionPairing::new(&space)?;
    let dual = pontryagin_dual(&pairing.gamma.module);
    let md = space.modulus()?;
    let mut checks = Vec::new();

    // the law factors through Γ for each generator
    let mut pairing_matrix = Vec::new();
    let mut factors = true;
    for &g in &h0.presentation.generators {
        match pairing.functional(&h0.element(g)) {
            Ok(v) => pairing_matrix.push(v),
            Err(_) => {
                factors = false;
                pairing_matrix.push(pairing.functional_unchecked(&h0.element(g))?);
            }
        }
    }
    checks.push(CheckOutcome::new(
        "pairing.factors",
        factors,
        Mode::Exhaustive,
        format!("F_s induces a linear map on Γ^{} = Γ of order {} for every generator s", pairing.degree(), pairing.gamma.module.order()),
    ));

    // additivity in the section
    let values: Vec<Vec<u64>> = (0..h0.size).map(|k| pairing.functional_unchecked(&h0.element(k))).collect::<Result<_>>()?;
    let mut additive = true;
    for &a in &h0.presentation.generators {
        for b in 0..h0.size {
            let s = h0.add(a, b);
            let expect: Vec<u64> = values[a].iter().zip(&values[b]).map(|(&x, &y)| md.add(x, y)).collect();
            if values[s] != expect {
                additive = false;
            }
        }
    }
    checks.push(CheckOutcome::new("pairing.bilinear", additive, Mode::Exhaustive, "⟨x, s + s'⟩ = ⟨x, s⟩ + ⟨x, s'⟩ for s a generator, s' arbitrary; linear in x by construction"));

    // only the zero section pairs trivially
    let null: Vec<usize> = (0..h0.size).filter(|&k| values[k].iter().all(|&v| v == 0)).collect();
    checks.push(CheckOutcome::new("pairing.injective", null == vec![0], Mode::Exhaustive, format!("{} section(s) pair to zero with all of Γ", null.len())));

    // h as a module map into the dual
    let rows: Option<Vec<Vec<u64>>> = pairing_matrix.iter().map(|v| dual.coordinates(v)).collect();
    let h = rows.and_then(|rows| ModuleMap::new(h0.presentation.module.clone(), dual.module.clone(), rows).ok());
    let iso = h.as_ref().is_some_and(|m| m.is_isomorphism());
    checks.push(CheckOutcome::new(
        "pairing.perfect",
        iso && h0.order() == pairing.gamma.module.order(),
        Mode::Exhaustive,
        format!(
            "h is an isomorphism; |H⁰| = {}, |Γ| = {}; invariant factors {:?} and {:?}",
            h0.order(),
            pairing.gamma.module.order(),
            h0.invariant_factors(),
            dual.module.invariant_factors()
        ),
    ));

    if r == 2 {
        checks.extend(square_checks(&h0, &pairing, &values)?);
    }
    Ok(IsoGamma { h0, pairing, dual, h, pairing_matrix, checks })
}

/// The two squares comparing h_{S,2} with h_{S,1}.
fn square_checks(h0: &H0Group, pairing: &SectionPairing, values: &[Vec<u64>]) -> Result<Vec<CheckOutcome>> {
    let space = &h0.space;
    let p = space.p();
    let md = space.modulus()?;
    let basis = pairing.gamma.basis().basis.clone();
    let mut out = Vec::new();

    // left: (0, g) pairs with the symbol of exponent a to p·(coefficient of e^a in g)
    let mut left = true;
    let mut kernel_functionals = std::collections::HashSet::new();
    let mut kernel_count = 0;
    for k in 0..h0.size {
        let g = h0.element(k);
        if !g.0[0].is_empty() {
            continue;
        }
        kernel_count += 1;
        let expect: Vec<u64> = basis.iter().map(|a| md.mul(p, g.0[1].get(a).copied().unwrap_or(0))).collect();
        if values[k] != expect {
            left = false;
        }
        kernel_functionals.insert(values[k].clone());
    }
    out.push(CheckOutcome::new(
        "pairing.left-square",
        left && kernel_functionals.len() == kernel_count,
        Mode::Exhaustive,
        format!("h(0, g) = p·(a ↦ g_a) on the {kernel_count} sections (0, g), g ∈ S^p; the left vertical arrow is injective"),
    ));

    // right: h_2(s)(p·[φ]_p) = p·h_1(res s)([φ]_1), on pure symbols
    let lower = ProjectiveSpace::new(p, space.d(), 1)?;
    let lower_pairing = SectionPairing::new(&lower)?;
    let lm = lower.modulus()?;
    let phis: Vec<Vec<u64>> = (0..p.pow(space.d() as u32))
        .map(|mut k| {
            (0..space.d())
                .map(|_| {
                    let c = k % p;
                    k /= p;
                    c
                })
                .collect()
        })
        .collect();
    let mut right = true;
    for k in 0..h0.size {
        let g = h0.element(k);
        let res = WittVector(vec![g.0[0].clone()]);
        for phi in &phis {
            let x = pairing.gamma.module.scale(p, &pairing.pure(phi));
            let lhs = x.iter().zip(&values[k]).fold(0, |acc, (&a, &b)| md.add(acc, md.mul(a, b)));
            let low = lower_pairing.pair(&lower_pairing.pure(phi), &res)?;
            if lhs != md.mul(p, lm.reduce(low as i64)) {
                right = false;
            }
        }
    }
    out.push(CheckOutcome::new(
        "pairing.right-square",
        right,
        Mode::Exhaustive,
        format!("⟨p[φ]_p, s⟩ = p·⟨[φ], s mod V⟩ for all {} sections and all {} forms φ (pure symbols only)", h0.size, phis.len()),
    ));
    Ok(out)
}
