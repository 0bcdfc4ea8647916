//! The homomorphism W_n(𝓑/p) → 𝓑 for a Z/p^n-algebra 𝓑, and the localization isomorphism.

use super::{WittRing, WittVector};
use crate::error::{Error, Result};
use crate::finring::FinRing;
use crate::fpalg::{FpAlgebra, Localization};
use crate::report::{CheckOutcome, Mode};
use crate::zpnalg::{ZElem, ZpnAlgebra};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// f_n(x_0, .., x_{n−1}) = Σ p^i·x̃_i^{p^{n−1−i}}, tabulated on W_n(B).
#[derive(Clone, Debug)]
pub struct Corolift {
    pub target: ZpnAlgebra,
    pub base: FpAlgebra,
    pub n: usize,
    /// Image of each Witt vector, by Witt index.
    pub table: Vec<ZElem>,
    pub checks: Vec<CheckOutcome>,
}

impl Corolift {
    pub fn apply(&self, w: &WittRing<'_, FpAlgebra>, x: &WittVector<Vec<u64>>) -> ZElem {
        self.table[w.index(x)].clone()
    }
}

fn formula(t: &ZpnAlgebra, x: &WittVector<Vec<u64>>, n: usize) -> ZElem {
    let p = t.modulus().p();
    let mut acc = t.zero();
    for (i, xi) in x.0.iter().enumerate() {
        let term = t.pow(&t.lift(xi), p.pow((n - 1 - i) as u32));
        acc = t.add(&acc, &t.scale(p.pow(i as u32), &term));
    }
    acc
}

/// Whether the subring generated by the Teichmüller representatives is everything.
pub fn teichmuller_generated(w: &WittRing<'_, FpAlgebra>, ring: &FinRing) -> Result<bool> {
    let mut seen = vec![false; ring.size()];
    let mut members = Vec::new();
    for a in w.base.elements(u64::MAX)? {
        let i = w.index(&w.teichmuller(&a));
        if !std::mem::replace(&mut seen[i], true) {
            members.push(i);
        }
    }
    let mut frontier = members.clone();
    while let Some(x) = frontier.pop() {
        let cur = members.clone();
        for y in cur {
            for z in [ring.add(x, y), ring.mul(x, y), ring.neg(x)] {
                if !std::mem::replace(&mut seen[z], true) {
                    members.push(z);
                    frontier.push(z);
                }
            }
        }
    }
    Ok(members.len() == ring.size())
}

pub fn corolift(target: &ZpnAlgebra, cap: u64, seed: u64) -> Result<Corolift> {
    let n = target.modulus().n() as usize;
    let base = target.mod_p()?;
    let w = WittRing::new(&base, n)?;
    let els = w.elements(cap)?;
    let table: Vec<ZElem> = els.iter().map(|x| formula(target, x, n)).collect();
    let mut checks = Vec::new();
    let p = target.modulus().p();

    // image of τ(x) is x̃^{p^{n−1}} for every lift x̃
    let mut ok = true;
    for a in base.elements(cap)? {
        let img = &table[w.index(&w.teichmuller(&a))];
        for j in 0..target.dim() {
            let other = target.add(&target.lift(&a), &target.scale(p, &target.basis(j)));
            if target.pow(&other, p.pow(n as u32 - 1)) != *img {
                ok = false;
            }
        }
    }
    checks.push(CheckOutcome::new("corolift.teichmuller", ok, Mode::Exhaustive, "f_n(τ(x̄)) = x^{p^{n−1}} for every lift x"));

    let size = els.len();
    let hom = |a: usize, b: usize| -> bool {
        let s = w.index(&w.add(&els[a], &els[b]).unwrap());
        let m = w.index(&w.mul(&els[a], &els[b]).unwrap());
        table[s] == target.add(&table[a], &table[b]) && table[m] == target.mul(&table[a], &table[b])
    };
    let unit_ok = table[w.index(&w.one())] == target.one();
    let pairs = (size as u128) * (size as u128);
    if pairs <= cap as u128 {
        let ok = unit_ok && (0..size).all(|a| (a..size).all(|b| hom(a, b)));
        checks.push(CheckOutcome::new("corolift.ring-hom", ok, Mode::Exhaustive, format!("additive and multiplicative on all {pairs} pairs")));
    } else {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let ok = unit_ok && (0..cap).all(|_| hom(rng.gen_range(0..size), rng.gen_range(0..size)));
        checks.push(CheckOutcome::new("corolift.ring-hom", ok, Mode::Sampled, format!("{cap} sampled pairs, seed {seed}")));
    }
    if size <= crate::finring::MAX_TABLE_ORDER {
        let ring = w.to_finring()?;
        let gen = teichmuller_generated(&w, &ring)?;
        checks.push(CheckOutcome::new(
            "corolift.unique",
            gen,
            Mode::Exhaustive,
            "W_n(B) is generated as a ring by Teichmüller representatives, so a ring map is fixed by its values on them",
        ));
    }
    Ok(Corolift { target: target.clone(), base, n, table, checks })
}

/// W_n(A_f) and W_n(A) localized at τ(f), with mutually inverse maps.
#[derive(Clone, Debug)]
pub struct LocalizationIso {
    pub localization: Localization,
    /// W_n(A_f) as a table.
    pub witt_of_local: FinRing,
    /// ε·W_n(A) as a table, ε the idempotent attached to τ(f).
    pub local_of_witt: FinRing,
    /// Elements of ε·W_n(A), as indices into W_n(A).
    pub local_of_witt_members: Vec<usize>,
    pub to_local_of_witt: Vec<usize>,
    pub to_witt_of_local: Vec<usize>,
}

pub fn localization_iso(a: &FpAlgebra, f: &[u64], n: usize) -> Result<LocalizationIso> {
    let loc = a.localize(&f.to_vec())?;
    let af = &loc.algebra;
    let wa = WittRing::new(a, n)?;
    let ring = wa.to_finring()?;
    let tf = wa.index(&wa.teichmuller(&f.to_vec()));
    // idempotent limit of powers of τ(f)
    let mut seen: Vec<usize> = vec![];
    let mut cur = tf;
    let eps = loop {
        if let Some(i) = seen.iter().position(|&x| x == cur) {
            let start = i + 1;
            let period = seen.len() + 1 - start;
            let mut m = period;
            while m < start {
                m += period;
            }
            break ring.pow(tf, m as u64);
        }
        seen.push(cur);
        cur = ring.mul(cur, tf);
    };
    if eps != wa.index(&wa.teichmuller(&loc.idempotent)) {
        return Err(Error::Check("idempotent of τ(f) is not τ(e)".into()));
    }
    let mut members: Vec<usize> = (0..ring.size()).map(|x| ring.mul(eps, x)).collect();
    members.sort_unstable();
    members.dedup();
    let pos = |x: usize| members.binary_search(&x).unwrap();
    let local_of_witt = FinRing::from_ops(
        members.len(),
        pos(ring.zero()),
        pos(eps),
        |x, y| pos(ring.add(members[x], members[y])),
        |x, y| pos(ring.mul(members[x], members[y])),
    )?;
    let wl = WittRing::new(af, n)?;
    let witt_of_local = wl.to_finring()?;
    let to_local_of_witt: Vec<usize> = (0..witt_of_local.size())
        .map(|i| {
            let v = wl.element(i);
            pos(wa.index(&WittVector(v.0.iter().map(|c| loc.embed(c)).collect())))
        })
        .collect();
    let to_witt_of_local: Vec<usize> = members
        .iter()
        .map(|&i| {
            let v = wa.element(i);
            wl.index(&WittVector(v.0.iter().map(|c| loc.map.apply(c)).collect()))
        })
        .collect();
    let iso = LocalizationIso { localization: loc, witt_of_local, local_of_witt, local_of_witt_members: members, to_local_of_witt, to_witt_of_local };
    iso.verify()?;
    Ok(iso)
}

impl LocalizationIso {
    pub fn verify(&self) -> Result<()> {
        if !self.witt_of_local.is_hom_to(&self.local_of_witt, &self.to_local_of_witt)
            || !self.local_of_witt.is_hom_to(&self.witt_of_local, &self.to_witt_of_local)
        {
            return Err(Error::Check("localization comparison maps are not ring maps".into()));
        }
        let inv1 = (0..self.witt_of_local.size()).all(|i| self.to_witt_of_local[self.to_local_of_witt[i]] == i);
        let inv2 = (0..self.local_of_witt.size()).all(|i| self.to_local_of_witt[self.to_witt_of_local[i]] == i);
        if !(inv1 && inv2) {
            return Err(Error::Check("localization comparison maps are not inverse".into()));
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::zpn_linalg::Modulus;

    #[test]
    fn z4_corolift() {
        let z4 = ZpnAlgebra::integers(Modulus::new(2, 2).unwrap());
        let c = corolift(&z4, 1 << 20, 0).unwrap();
        let f2 = FpAlgebra::prime_field(2).unwrap();
        let w = WittRing::new(&f2, 2).unwrap();
        assert_eq!(c.apply(&w, &w.one()), vec![1]);
        assert_eq!(c.apply(&w, &WittVector(vec![vec![0], vec![1]])), vec![2]);
        assert!(c.checks.iter().all(|k| k.passed));
    }

    #[test]
    fn idempotent_quotient_corolift() {
        let m = Modulus::new(2, 2).unwrap();
        let b = ZpnAlgebra::poly_quotient(m, &[0, 1, 1]).unwrap();
        let c = corolift(&b, 1 << 20, 0).unwrap();
        assert!(c.checks.iter().all(|k| k.passed), "{:?}", c.checks);
        let w = WittRing::new(&c.base, 2).unwrap();
        // t^2 = -t in Z/4[t]/(t^2+t)
        assert_eq!(c.apply(&w, &w.teichmuller(&vec![0, 1])), vec![0, 3]);
    }

    #[test]
    fn n1_is_identity() {
        let b = ZpnAlgebra::poly_quotient(Modulus::new(3, 1).unwrap(), &[0, -1, 0, 1]).unwrap();
        let c = corolift(&b, 1 << 20, 0).unwrap();
        for (i, img) in c.table.iter().enumerate() {
            assert_eq!(*img, c.base.element(i));
        }
    }

    #[test]
    fn localization_examples() {
        let f2 = FpAlgebra::prime_field(2).unwrap();
        let f2f2 = f2.product(&f2).unwrap();
        let iso = localization_iso(&f2f2, &[1, 0], 2).unwrap();
        assert_eq!(iso.witt_of_local.size(), 4);
        assert_eq!(iso.local_of_witt.characteristic(), 4);
        let dual = FpAlgebra::poly_quotient(2, &[0, 0, 1]).unwrap();
        let iso = localization_iso(&dual, &[0, 1], 2).unwrap();
        assert_eq!(iso.witt_of_local.size(), 1);
        assert_eq!(iso.local_of_witt.size(), 1);
        let iso = localization_iso(&dual, &[1, 0], 2).unwrap();
        assert_eq!(iso.witt_of_local.size(), 16);
    }
}
