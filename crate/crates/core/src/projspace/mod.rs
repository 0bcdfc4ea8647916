//! P(V) for V = F_p^d through its standard charts: global sections of W_r(O(1)),
//! the Teichmüller section, Ev, the divided power pairing and the tautological W₂ lift.
//!
//! Chart U_i inverts e_i. A section of W_r(O(1)) is a family s_i ∈ W_r(A_i) with
//! s_i = τ(e_j/e_i)·s_j on overlaps, so that τ(e_i)·s_i does not depend on i.
//! Chart elements are degree zero Laurent polynomials in e_1..e_d.

mod pairing;
mod tauto;

pub use pairing::*;
pub use tauto::*;

use crate::error::{guard, Error, Result};
use crate::fpalg::{GradedAlgebra, GradedElem, LaurentElem, LaurentPolys, Monomial};
use crate::report::{CheckOutcome, Mode};
use crate::witt::{WittRing, WittVector};
use crate::zpn_linalg::{binomial, GroupPresentation, Modulus};
use std::cell::RefCell;
use std::collections::HashMap;

/// The (p, d, r) instance: P^{d−1} over F_p and sections of W_r(O(1)).
#[derive(Clone, Debug)]
pub struct ProjectiveSpace {
    p: u64,
    d: usize,
    r: usize,
    laurent: LaurentPolys,
    graded: GradedAlgebra,
    /// Monomial basis of S^{p^m}(V), one list per Witt component.
    bases: Vec<Vec<Monomial>>,
}

/// Chart data of a section; `charts[i]` lives in W_r(A_i).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WittSection {
    pub r: usize,
    pub d: usize,
    pub charts: Vec<WittVector<LaurentElem>>,
}

impl ProjectiveSpace {
    pub fn new(p: u64, d: usize, r: usize) -> Result<Self> {
        if d == 0 || r == 0 {
            return Err(Error::Shape(format!("need d ≥ 1 and r ≥ 1, got d = {d}, r = {r}")));
        }
        let top = p.checked_pow(r as u32 - 1).filter(|&b| b <= u32::MAX as u64).ok_or(Error::Guard { needed: u128::MAX, cap: u32::MAX as u128 })?;
        let graded = GradedAlgebra::symmetric(p, d, top as u32)?;
        let bases = (0..r).map(|m| graded.degree_basis(p.pow(m as u32) as u32)).collect();
        Ok(ProjectiveSpace { p, d, r, laurent: LaurentPolys::new(p, d), graded, bases })
    }

    pub fn p(&self) -> u64 {
        self.p
    }
    pub fn d(&self) -> usize {
        self.d
    }
    pub fn r(&self) -> usize {
        self.r
    }
    pub fn laurent(&self) -> &LaurentPolys {
        &self.laurent
    }
    /// S(V) truncated at degree p^{r−1}.
    pub fn graded(&self) -> &GradedAlgebra {
        &self.graded
    }
    pub fn component_basis(&self, m: usize) -> &[Monomial] {
        &self.bases[m]
    }
    pub fn witt_laurent(&self) -> Result<WittRing<'_, LaurentPolys>> {
        WittRing::new(&self.laurent, self.r)
    }
    pub fn witt_graded(&self) -> Result<WittRing<'_, GradedAlgebra>> {
        WittRing::new(&self.graded, self.r)
    }
    /// Modulus p^r, the exponent of W_r(F_p).
    pub fn modulus(&self) -> Result<Modulus> {
        Modulus::new(self.p, self.r as u32)
    }

    /// ∏_m p^{dim S^{p^m}(V)}.
    pub fn expected_order(&self) -> u128 {
        let exp: u128 = (0..self.r).map(|m| binomial(self.p.pow(m as u32) + self.d as u64 - 1, self.d as u64 - 1)).sum();
        (self.p as u128).checked_pow(exp as u32).unwrap_or(u128::MAX)
    }

    pub fn coordinate(&self, i: usize) -> LaurentElem {
        let mut e = vec![0; self.d];
        e[i] = 1;
        self.laurent.monomial(e, 1)
    }
    /// e_j/e_i, regular on U_i.
    pub fn ratio(&self, j: usize, i: usize) -> LaurentElem {
        let mut e = vec![0; self.d];
        e[j] += 1;
        e[i] -= 1;
        self.laurent.monomial(e, 1)
    }

    pub fn to_laurent(&self, a: &GradedElem) -> LaurentElem {
        a.iter().map(|(m, &c)| (m.iter().map(|&e| e as i32).collect(), c)).collect()
    }
    pub fn from_laurent(&self, a: &LaurentElem) -> Option<GradedElem> {
        if !self.laurent.is_polynomial(a) {
            return None;
        }
        Some(a.iter().map(|(m, &c)| (m.iter().map(|&e| e as u32).collect(), c)).collect())
    }

    /// Degree zero and regular on U_i.
    pub fn in_chart_ring(&self, a: &LaurentElem, i: usize) -> bool {
        self.laurent.regular_on_chart(a, i) && a.keys().all(|m| m.iter().sum::<i32>() == 0)
    }

    /// Size of the homogeneous model.
    pub fn homogeneous_size(&self) -> u128 {
        self.expected_order()
    }

    /// The homogeneous tuple (g_0, .., g_{r−1}) with index `idx`, coefficients read base p.
    pub fn homogeneous_element(&self, mut idx: usize) -> WittVector<GradedElem> {
        let p = self.p as usize;
        let mut comps = Vec::with_capacity(self.r);
        for basis in &self.bases {
            let mut g = GradedElem::new();
            for m in basis {
                let c = idx % p;
                idx /= p;
                if c != 0 {
                    g.insert(m.clone(), c as u64);
                }
            }
            comps.push(g);
        }
        WittVector(comps)
    }

    /// Index of a tuple, or None if some g_m is not homogeneous of degree p^m.
    pub fn homogeneous_index(&self, g: &WittVector<GradedElem>) -> Option<usize> {
        if g.len() != self.r {
            return None;
        }
        let p = self.p as usize;
        let mut idx = 0usize;
        let mut scale = 1usize;
        for (comp, basis) in g.0.iter().zip(&self.bases) {
            if comp.keys().any(|m| !basis.contains(m)) {
                return None;
            }
            for m in basis {
                idx += scale * comp.get(m).copied().unwrap_or(0) as usize;
                scale *= p;
            }
        }
        Some(idx)
    }

    /// s_i = τ(e_i)^{-1}·g on every chart.
    pub fn section_from_homogeneous(&self, g: &WittVector<GradedElem>) -> Result<WittSection> {
        let w = self.witt_laurent()?;
        let gl = WittVector(g.0.iter().map(|c| self.to_laurent(c)).collect());
        let charts = (0..self.d)
            .map(|i| {
                let mut inv = vec![0; self.d];
                inv[i] = -1;
                w.mul(&w.teichmuller(&self.laurent.monomial(inv, 1)), &gl)
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(WittSection { r: self.r, d: self.d, charts })
    }

    /// Each s_i lies in W_r(A_i) and s_i = τ(e_j/e_i)·s_j for all i, j.
    pub fn is_section(&self, s: &WittSection) -> Result<bool> {
        if s.r != self.r || s.d != self.d || s.charts.len() != self.d || s.charts.iter().any(|c| c.len() != self.r) {
            return Ok(false);
        }
        for (i, c) in s.charts.iter().enumerate() {
            if !c.0.iter().all(|x| self.in_chart_ring(x, i)) {
                return Ok(false);
            }
        }
        let w = self.witt_laurent()?;
        for i in 0..self.d {
            for j in 0..self.d {
                if i != j && w.mul(&w.teichmuller(&self.ratio(j, i)), &s.charts[j])? != s.charts[i] {
                    return Ok(false);
                }
            }
        }
        Ok(true)
    }

    /// Chartwise sum.
    pub fn add_sections(&self, a: &WittSection, b: &WittSection) -> Result<WittSection> {
        let w = self.witt_laurent()?;
        let charts = a.charts.iter().zip(&b.charts).map(|(x, y)| w.add(x, y)).collect::<Result<Vec<_>>>()?;
        Ok(WittSection { r: self.r, d: self.d, charts })
    }

    /// Sum in the homogeneous model; a truncation error means the sum left the model.
    pub fn add_homogeneous(&self, a: &WittVector<GradedElem>, b: &WittVector<GradedElem>) -> Result<WittVector<GradedElem>> {
        let sum = self.witt_graded()?.add(a, b)?;
        if self.homogeneous_index(&sum).is_none() {
            return Err(Error::Check(format!("sum {:?} is not isobaric", sum.0)));
        }
        Ok(sum)
    }
}

/// The glued Witt vector τ(e_i)·s_i in W_r(S(V)), checked to agree on every chart.
pub fn ev_map(space: &ProjectiveSpace, s: &WittSection) -> Result<WittVector<GradedElem>> {
    if s.charts.len() != space.d() || s.r != space.r() {
        return Err(Error::Shape("section does not belong to this projective space".into()));
    }
    let w = space.witt_laurent()?;
    let mut glued: Option<WittVector<LaurentElem>> = None;
    for (i, c) in s.charts.iter().enumerate() {
        let v = w.mul(&w.teichmuller(&space.coordinate(i)), c)?;
        match &glued {
            None => glued = Some(v),
            Some(g) if *g != v => return Err(Error::IllDefined(format!("chart {} disagrees with chart 1 after multiplying by τ(e_i)", i + 1))),
            _ => {}
        }
    }
    let glued = glued.ok_or_else(|| Error::Shape("no charts".into()))?;
    let comps = glued
        .0
        .iter()
        .map(|c| space.from_laurent(c).ok_or_else(|| Error::IllDefined("glued vector has a pole".into())))
        .collect::<Result<Vec<_>>>()?;
    Ok(WittVector(comps))
}

/// (s_0, .., s_{r−2}) ↦ (s_0, .., s_{r−2}, 0) on every chart; a section of W_r(O(1)).
pub fn teichmuller_section(s: &WittSection) -> WittSection {
    let charts = s
        .charts
        .iter()
        .map(|c| {
            let mut v = c.0.clone();
            v.push(LaurentElem::new());
            WittVector(v)
        })
        .collect();
    WittSection { r: s.r + 1, d: s.d, charts }
}

/// The truncation H⁰(W_r(O(1))) → H⁰(W_{r−1}(O(1))).
pub fn restrict_section(s: &WittSection) -> Result<WittSection> {
    if s.r == 0 {
        return Err(Error::Shape("cannot restrict a section of length 0".into()));
    }
    let charts = s.charts.iter().map(|c| WittVector(c.0[..s.r - 1].to_vec())).collect();
    Ok(WittSection { r: s.r - 1, d: s.d, charts })
}

/// H⁰(W_r(O(1))) in both models, with the group structure and the comparison.
#[derive(Clone, Debug)]
pub struct H0Group {
    pub space: ProjectiveSpace,
    pub size: usize,
    /// Group structure on the homogeneous model, elements indexed as in `homogeneous_element`.
    pub presentation: GroupPresentation,
    /// Sections found by the chart search, in search order.
    pub cech_sections: Vec<WittSection>,
    /// Homogeneous index of Ev of each chart section.
    pub comparison: Vec<usize>,
    pub checks: Vec<CheckOutcome>,
}

impl H0Group {
    pub fn invariant_factors(&self) -> Vec<u64> {
        self.presentation.module.invariant_factors()
    }
    pub fn order(&self) -> u128 {
        self.presentation.module.order()
    }
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }
    pub fn element(&self, idx: usize) -> WittVector<GradedElem> {
        self.space.homogeneous_element(idx)
    }
    pub fn add(&self, a: usize, b: usize) -> usize {
        let s = self.presentation.module.add(&self.presentation.coords[a], &self.presentation.coords[b]);
        self.presentation.element(&s)
    }
}

/// Chart-1 vectors with every component a polynomial in e_j/e_1 of degree ≤ p^{r−1}.
fn chart_candidates(space: &ProjectiveSpace) -> Vec<Vec<i32>> {
    let top = space.p().pow(space.r() as u32 - 1) as u32;
    let mut out = Vec::new();
    for deg in 0..=top {
        for m in GradedAlgebra::symmetric(space.p(), space.d(), top).expect("prime checked").degree_basis(deg) {
            if m[0] != 0 {
                continue;
            }
            let mut e: Vec<i32> = m.iter().map(|&x| x as i32).collect();
            e[0] = -(deg as i32);
            out.push(e);
        }
    }
    out
}

/// Both models of H⁰(W_r(O(1))) and the checks relating them.
pub fn h0_witt_o1(p: u64, d: usize, r: usize, cap: u64) -> Result<H0Group> {
    let space = ProjectiveSpace::new(p, d, r)?;
    let size = space.expected_order();
    guard(size, cap)?;
    let size = size as usize;
    let monos = chart_candidates(&space);
    let candidates = (p as u128).checked_pow((monos.len() * r) as u32).unwrap_or(u128::MAX);
    guard(candidates, cap)?;
    let mut checks = Vec::new();

    // homogeneous model
    let failure: RefCell<Option<Error>> = RefCell::new(None);
    let cache: RefCell<HashMap<(usize, usize), usize>> = RefCell::new(HashMap::new());
    let add = |a: usize, b: usize| -> usize {
        if let Some(&c) = cache.borrow().get(&(a, b)) {
            return c;
        }
        let c = match space.add_homogeneous(&space.homogeneous_element(a), &space.homogeneous_element(b)) {
            Ok(s) => space.homogeneous_index(&s).expect("checked by add_homogeneous"),
            Err(e) => {
                failure.borrow_mut().get_or_insert(e);
                0
            }
        };
        cache.borrow_mut().insert((a, b), c);
        c
    };
    let presentation = GroupPresentation::new(space.modulus()?, size, 0, add)?;
    let closed = failure.borrow().is_none();
    checks.push(CheckOutcome::new(
        "h0.homogeneous-closed",
        closed,
        Mode::Exhaustive,
        match failure.borrow().as_ref() {
            None => format!("Witt sums of tuples g_m ∈ S^(p^m) stay isobaric ({} sums)", cache.borrow().len()),
            Some(e) => format!("sum left the model: {e}"),
        },
    ));
    let order = presentation.module.order();
    checks.push(CheckOutcome::new(
        "h0.order",
        order == size as u128,
        Mode::Exhaustive,
        format!("|H⁰| = {order}, expected ∏ p^dim S^(p^m) = {size}; invariant factors {:?}", presentation.module.invariant_factors()),
    ));

    // Čech model: search chart-1 data, keep what glues
    let w = space.witt_laurent()?;
    let mut cech_sections = Vec::new();
    let mut comparison = Vec::new();
    let mut ev_failures = 0usize;
    for idx in 0..candidates as usize {
        let mut rest = idx;
        let mut comps = Vec::with_capacity(r);
        for _ in 0..r {
            let mut c = LaurentElem::new();
            for e in &monos {
                let v = (rest % p as usize) as u64;
                rest /= p as usize;
                if v != 0 {
                    c.insert(e.clone(), v);
                }
            }
            comps.push(c);
        }
        let s1 = WittVector(comps);
        let mut charts = vec![s1.clone()];
        let mut ok = true;
        for j in 1..d {
            let sj = w.mul(&w.teichmuller(&space.ratio(0, j)), &s1)?;
            if !sj.0.iter().all(|x| space.in_chart_ring(x, j)) {
                ok = false;
                break;
            }
            charts.push(sj);
        }
        if !ok {
            continue;
        }
        let s = WittSection { r, d, charts };
        match ev_map(&space, &s).ok().and_then(|g| space.homogeneous_index(&g)) {
            Some(k) => comparison.push(k),
            None => {
                ev_failures += 1;
                comparison.push(usize::MAX);
            }
        }
        cech_sections.push(s);
    }
    let mut seen = vec![false; size];
    let mut distinct = true;
    for &k in &comparison {
        if k == usize::MAX || seen[k] {
            distinct = false;
        } else {
            seen[k] = true;
        }
    }
    let bijective = distinct && cech_sections.len() == size;
    checks.push(CheckOutcome::new(
        "h0.cech-equals-homogeneous",
        bijective && ev_failures == 0,
        Mode::Exhaustive,
        format!("{} of {candidates} chart-1 candidates glue; Ev maps them bijectively onto the {size} homogeneous tuples", cech_sections.len()),
    ));

    // Ev is additive: chart sums against model sums
    let mut position = vec![usize::MAX; size];
    for (c, &k) in comparison.iter().enumerate() {
        if k != usize::MAX {
            position[k] = c;
        }
    }
    let mut hom = bijective;
    let all_pairs = size * size <= 4096;
    if bijective {
        let lefts: Vec<usize> = if all_pairs { (0..size).collect() } else { presentation.generators.iter().map(|&g| position[g]).collect() };
        'outer: for &a in &lefts {
            for b in 0..cech_sections.len() {
                let sum = space.add_sections(&cech_sections[a], &cech_sections[b])?;
                let k = ev_map(&space, &sum).ok().and_then(|g| space.homogeneous_index(&g));
                let expected = {
                    let pa = &presentation.coords[comparison[a]];
                    let pb = &presentation.coords[comparison[b]];
                    presentation.element(&presentation.module.add(pa, pb))
                };
                if k != Some(expected) {
                    hom = false;
                    break 'outer;
                }
            }
        }
    }
    checks.push(CheckOutcome::new(
        "h0.ev-additive",
        hom,
        Mode::Exhaustive,
        if all_pairs { "Ev(s + s') = Ev(s) + Ev(s') on all pairs".to_string() } else { "Ev(s + s') = Ev(s) + Ev(s') for s a generator, s' arbitrary".to_string() },
    ));

    // chart restrictions of the glued vector give back the chart data
    let mut reproduces = bijective;
    if bijective {
        for (s, &k) in cech_sections.iter().zip(&comparison) {
            if space.section_from_homogeneous(&space.homogeneous_element(k))? != *s {
                reproduces = false;
                break;
            }
        }
    }
    checks.push(CheckOutcome::new("h0.ev-restricts", reproduces, Mode::Exhaustive, "τ(e_i)^{-1}·Ev(s) = s_i on every chart"));

    if r >= 2 {
        checks.extend(exact_sequence_checks(&space, size, &presentation)?);
    }
    Ok(H0Group { space, size, presentation, cech_sections, comparison, checks })
}

/// 0 → S^{p^{r−1}}(V) → H⁰(W_r(O(1))) → H⁰(W_{r−1}(O(1))) → 0 with the Teichmüller splitting.
fn exact_sequence_checks(space: &ProjectiveSpace, size: usize, presentation: &GroupPresentation) -> Result<Vec<CheckOutcome>> {
    let r = space.r();
    let lower = ProjectiveSpace::new(space.p(), space.d(), r - 1)?;
    let lower_size = lower.expected_order() as usize;
    let mut out = Vec::new();

    // restriction ∘ Teichmüller = id, and the Teichmüller lift is a section
    let mut splits = true;
    let mut lifts = Vec::with_capacity(lower_size);
    for k in 0..lower_size {
        let s = lower.section_from_homogeneous(&lower.homogeneous_element(k))?;
        let t = teichmuller_section(&s);
        if !space.is_section(&t)? || restrict_section(&t)? != s {
            splits = false;
        }
        lifts.push(ev_map(space, &t).ok().and_then(|g| space.homogeneous_index(&g)));
    }
    out.push(CheckOutcome::new(
        "h0.teichmuller-splits",
        splits && lifts.iter().all(Option::is_some),
        Mode::Exhaustive,
        format!("restriction ∘ Teichmüller = id on all {lower_size} sections of W_{}(O(1))", r - 1),
    ));

    // restriction is a surjective homomorphism
    let restrict = |k: usize| -> Option<usize> {
        let g = space.homogeneous_element(k);
        lower.homogeneous_index(&WittVector(g.0[..r - 1].to_vec()))
    };
    let mut restriction_hom = true;
    for &a in &presentation.generators {
        for b in 0..size {
            let sum = presentation.element(&presentation.module.add(&presentation.coords[a], &presentation.coords[b]));
            let lhs = restrict(sum);
            let rhs = match (restrict(a), restrict(b)) {
                (Some(x), Some(y)) => lower.add_homogeneous(&lower.homogeneous_element(x), &lower.homogeneous_element(y)).ok().and_then(|s| lower.homogeneous_index(&s)),
                _ => None,
            };
            if lhs.is_none() || lhs != rhs {
                restriction_hom = false;
            }
        }
    }
    out.push(CheckOutcome::new("h0.restriction-hom", restriction_hom, Mode::Exhaustive, "restriction is additive, checked for a generator against every section"));

    // kernel of restriction = V^{r−1}(S^{p^{r−1}} V)
    let kernel: Vec<usize> = (0..size).filter(|&k| restrict(k) == Some(0)).collect();
    let top = space.component_basis(r - 1).len() as u32;
    let kernel_expected = space.p().pow(top) as usize;
    let shifted = kernel.iter().all(|&k| space.homogeneous_element(k).0[..r - 1].iter().all(|c| c.is_empty()));
    let mut sections = true;
    for &k in &kernel {
        if !space.is_section(&space.section_from_homogeneous(&space.homogeneous_element(k))?)? {
            sections = false;
        }
    }
    out.push(CheckOutcome::new(
        "h0.exact-sequence",
        kernel.len() == kernel_expected && shifted && sections && size == kernel_expected * lower_size,
        Mode::Exhaustive,
        format!("kernel of restriction has {} elements, all of the form (0, .., 0, g) with g ∈ S^(p^{}); {size} = {kernel_expected}·{lower_size}", kernel.len(), r - 1),
    ));

    // the Teichmüller section is not additive
    let mut witness = None;
    'search: for a in 0..lower_size {
        for b in 0..lower_size {
            let (Some(ta), Some(tb)) = (lifts[a], lifts[b]) else { continue };
            let ab = match lower.add_homogeneous(&lower.homogeneous_element(a), &lower.homogeneous_element(b)) {
                Ok(s) => lower.homogeneous_index(&s),
                Err(_) => None,
            };
            let Some(ab) = ab else { continue };
            let Some(tab) = lifts[ab] else { continue };
            let sum = presentation.element(&presentation.module.add(&presentation.coords[ta], &presentation.coords[tb]));
            if sum != tab {
                witness = Some((a, b, sum, tab));
                break 'search;
            }
        }
    }
    let mut check = CheckOutcome::new(
        "h0.teichmuller-not-additive",
        witness.is_some(),
        Mode::Exhaustive,
        "searched all pairs for s, s' with T(s) + T(s') ≠ T(s + s')",
    );
    if let Some((a, b, sum, tab)) = witness {
        let f = |x: &WittVector<GradedElem>| x.0.iter().map(|c| space.graded().format(c)).collect::<Vec<_>>().join(", ");
        let fl = |x: &WittVector<GradedElem>| x.0.iter().map(|c| lower.graded().format(c)).collect::<Vec<_>>().join(", ");
        check = check.with_witness(format!(
            "s = ({}), s' = ({}): T(s) + T(s') = ({}), T(s + s') = ({})",
            fl(&lower.homogeneous_element(a)),
            fl(&lower.homogeneous_element(b)),
            f(&space.homogeneous_element(sum)),
            f(&space.homogeneous_element(tab))
        ));
    }
    out.push(check);
    Ok(out)
}
