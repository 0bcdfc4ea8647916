//! p-elementary diagrams W_n(B) → R_n over W_{n−1}(B) → R_{n−1}, and their canonical lifts.

use super::recursion::{s_recursion, witt_ring_table, SRecursion};
use super::{ChoiceOrder, PElementaryMap};
use crate::error::{Error, Result};
use crate::finring::FinRing;
use crate::fpalg::FpAlgebra;
use crate::witt::WittRing;
use crate::zpnalg::ZpnAlgebra;

/// f_n: W_n(B) → R_n, f_{n−1}: W_{n−1}(B) → R_{n−1} and F_n: R_n → R_{n−1}.
/// Witt rings are indexed as in `WittRing::index`.
#[derive(Clone, Debug)]
pub struct PElementaryDiagram {
    pub base: FpAlgebra,
    pub n: usize,
    pub top: FinRing,
    pub f_top: Vec<usize>,
    pub bottom: FinRing,
    pub f_bottom: Vec<usize>,
    /// F_n; absent for n = 1, where R_0 and W_0(B) are zero.
    pub down: Option<PElementaryMap>,
}

/// Output of one lifting step.
#[derive(Clone, Debug)]
pub struct DiagramLift {
    pub diagram: PElementaryDiagram,
    pub recursion: SRecursion,
    /// Whether all preimages under s gave the same value of G.
    pub independent_of_preimage: bool,
}

impl PElementaryDiagram {
    /// n = 1: a B-algebra R_1 given by a ring map f_1: B → R_1.
    pub fn base_case(base: &FpAlgebra, r1: FinRing, f1: Vec<usize>) -> Result<Self> {
        let d = PElementaryDiagram {
            base: base.clone(),
            n: 1,
            top: r1,
            f_top: f1,
            bottom: crate::finring::integers_mod(1),
            f_bottom: vec![0],
            down: None,
        };
        d.verify()?;
        Ok(d)
    }

    /// Checks the three conditions, naming the first that fails.
    pub fn verify(&self) -> Result<()> {
        let b = &self.base;
        let wn = witt_ring_table(b, self.n)?;
        if !wn.is_hom_to(&self.top, &self.f_top) {
            return Err(Error::Precondition(format!("f_{} is not a ring homomorphism", self.n)));
        }
        let Some(down) = &self.down else { return Ok(()) };
        if self.n < 2 {
            return Err(Error::Precondition("a level-1 diagram has no vertical map".into()));
        }
        if down.source != self.top || down.target != self.bottom {
            return Err(Error::Precondition("F_n does not connect R_n to R_{n−1}".into()));
        }
        let w = WittRing::new(b, self.n)?;
        let wp = WittRing::new(b, self.n - 1)?;
        for idx in 0..wn.size() {
            let x = w.element(idx);
            let lhs = self.f_bottom[wp.index(&w.restrict(&w.frobenius(&x)?, self.n - 1)?)];
            if lhs != down.map[self.f_top[idx]] {
                return Err(Error::Precondition("the square does not commute up to Frobenius".into()));
            }
        }
        for idx in 0..wp.size() as usize {
            let x = wp.element(idx);
            if self.f_top[w.index(&w.inject(&x, 1)?)] != down.v(self.f_bottom[idx]) {
                return Err(Error::Precondition("f_n(i(x)) ≠ V(f_{n−1}(x))".into()));
            }
        }
        Ok(())
    }

    /// The canonical f_{n+1}: W_{n+1}(B) → R_{n+1} over F_{n+1}: R_{n+1} → R_n.
    pub fn lift(&self, next: PElementaryMap, order: ChoiceOrder, cap: u64) -> Result<DiagramLift> {
        self.verify()?;
        if next.target != self.top {
            return Err(Error::Precondition("F_{n+1} does not land in R_n".into()));
        }
        let rec = s_recursion(&self.base, self.n, cap)?;
        let phi = &rec.phi;
        let lifts: Vec<usize> =
            phi.gamma.presentation.generators.iter().map(|&g| next.lift(self.f_top[g], order)).collect();
        let images = phi.power_law_images(&next.source, &lifts);
        let g = phi.descend(&next.source, &images)?;
        let mut f_next = vec![usize::MAX; rec.witt_next.size()];
        let mut independent = true;
        let sigmas: Box<dyn Iterator<Item = usize>> = match order {
            ChoiceOrder::First => Box::new(0..phi.size()),
            ChoiceOrder::Last => Box::new((0..phi.size()).rev()),
        };
        for s in sigmas {
            let w = rec.table[s];
            if f_next[w] == usize::MAX {
                f_next[w] = g[s];
            } else if f_next[w] != g[s] {
                independent = false;
            }
        }
        if f_next.contains(&usize::MAX) {
            return Err(Error::Check("s is not surjective".into()));
        }
        let diagram = PElementaryDiagram {
            base: self.base.clone(),
            n: self.n + 1,
            top: next.source.clone(),
            f_top: f_next,
            bottom: self.top.clone(),
            f_bottom: self.f_top.clone(),
            down: Some(next),
        };
        diagram.verify()?;
        Ok(DiagramLift { diagram, recursion: rec, independent_of_preimage: independent })
    }
}

/// π: W_{n+1}(B) → W_n(B) as a p-elementary map.
pub fn witt_restriction(b: &FpAlgebra, n: usize, cap: u64) -> Result<PElementaryMap> {
    let w = WittRing::new(b, n + 1)?;
    let big = witt_ring_table(b, n + 1)?;
    let small = witt_ring_table(b, n)?;
    let map = if n == 0 {
        vec![0; big.size()]
    } else {
        let wn = WittRing::new(b, n)?;
        (0..big.size()).map(|i| w.restrict(&w.element(i), n).map(|x| wn.index(&x))).collect::<Result<_>>()?
    };
    PElementaryMap::new(big, small, map, b.p(), cap)
}

/// Lifts f_1 = Id up the tower R_n = W_n(B), F_n = π, up to n = top.
pub fn witt_tower(b: &FpAlgebra, top: usize, order: ChoiceOrder, cap: u64) -> Result<Vec<DiagramLift>> {
    let r1 = witt_ring_table(b, 1)?;
    let mut d = PElementaryDiagram::base_case(b, r1.clone(), (0..r1.size()).collect())?;
    let mut out = Vec::new();
    for n in 1..top {
        let lift = d.lift(witt_restriction(b, n, cap)?, order, cap)?;
        d = lift.diagram.clone();
        out.push(lift);
    }
    Ok(out)
}

/// Lifts f_1 = Id over the tower A/p^i → A/p^{i−1} of a finite flat Z/p^n-algebra A.
pub fn quotient_tower(target: &ZpnAlgebra, order: ChoiceOrder, cap: u64) -> Result<PElementaryDiagram> {
    let n = target.modulus().n();
    let b = target.mod_p()?;
    let rings: Vec<FinRing> = (1..=n).map(|i| target.truncate(i)?.to_finring()).collect::<Result<_>>()?;
    let mut d = PElementaryDiagram::base_case(&b, rings[0].clone(), (0..rings[0].size()).collect())?;
    for i in 1..n as usize {
        let hi = target.truncate(i as u32 + 1)?;
        let lo = target.truncate(i as u32)?;
        let q = lo.modulus().q();
        let map = (0..rings[i].size()).map(|x| lo.index(&hi.element(x).iter().map(|c| c % q).collect::<Vec<_>>())).collect();
        let f = PElementaryMap::new(rings[i].clone(), rings[i - 1].clone(), map, b.p(), cap)?;
        d = d.lift(f, order, cap)?.diagram;
    }
    Ok(d)
}
