//! Finite commutative rings stored as full operation tables.

use crate::error::{guard, Error, Result};
use crate::report::{CheckOutcome, Mode};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Hard limit on tabulated rings; tables are quadratic in the order.
pub const MAX_TABLE_ORDER: usize = 4096;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FinRing {
    size: usize,
    zero: u32,
    one: u32,
    add: Vec<u32>,
    mul: Vec<u32>,
    neg: Vec<u32>,
}

impl FinRing {
    /// Tabulates a ring on 0..size from its operations.
    pub fn from_ops(
        size: usize,
        zero: usize,
        one: usize,
        add: impl Fn(usize, usize) -> usize,
        mul: impl Fn(usize, usize) -> usize,
    ) -> Result<Self> {
        guard(size as u128, MAX_TABLE_ORDER as u64)?;
        let mut at = vec![0u32; size * size];
        let mut mt = vec![0u32; size * size];
        for a in 0..size {
            for b in a..size {
                let s = add(a, b) as u32;
                let m = mul(a, b) as u32;
                at[a * size + b] = s;
                at[b * size + a] = s;
                mt[a * size + b] = m;
                mt[b * size + a] = m;
            }
        }
        let mut neg = vec![u32::MAX; size];
        for a in 0..size {
            for b in 0..size {
                if at[a * size + b] as usize == zero {
                    neg[a] = b as u32;
                    break;
                }
            }
            if neg[a] == u32::MAX {
                return Err(Error::InvalidAlgebra(format!("element {a} has no additive inverse")));
            }
        }
        Ok(FinRing { size, zero: zero as u32, one: one as u32, add: at, mul: mt, neg })
    }

    pub fn size(&self) -> usize {
        self.size
    }
    pub fn zero(&self) -> usize {
        self.zero as usize
    }
    pub fn one(&self) -> usize {
        self.one as usize
    }
    pub fn add(&self, a: usize, b: usize) -> usize {
        self.add[a * self.size + b] as usize
    }
    pub fn mul(&self, a: usize, b: usize) -> usize {
        self.mul[a * self.size + b] as usize
    }
    pub fn neg(&self, a: usize) -> usize {
        self.neg[a] as usize
    }
    pub fn sub(&self, a: usize, b: usize) -> usize {
        self.add(a, self.neg(b))
    }
    pub fn smul(&self, k: u64, a: usize) -> usize {
        let mut acc = self.zero();
        for _ in 0..k {
            acc = self.add(acc, a);
        }
        acc
    }
    pub fn pow(&self, a: usize, e: u64) -> usize {
        let mut acc = self.one();
        for _ in 0..e {
            acc = self.mul(acc, a);
        }
        acc
    }
    pub fn from_int(&self, k: u64) -> usize {
        self.smul(k, self.one())
    }

    /// Additive order of 1.
    pub fn characteristic(&self) -> u64 {
        let mut acc = self.one();
        let mut k = 1;
        while acc != self.zero() {
            acc = self.add(acc, self.one());
            k += 1;
        }
        k
    }

    pub fn is_unit(&self, a: usize) -> bool {
        (0..self.size).any(|b| self.mul(a, b) == self.one())
    }

    /// Ring axioms: exhaustive over triples when size^3 fits the cap, sampled otherwise.
    pub fn check_axioms(&self, id: &str, cap: u64, seed: u64) -> CheckOutcome {
        let n = self.size;
        let triple = |a: usize, b: usize, c: usize| -> Option<String> {
            if self.add(self.add(a, b), c) != self.add(a, self.add(b, c)) {
                return Some(format!("additive associativity fails at ({a},{b},{c})"));
            }
            if self.mul(self.mul(a, b), c) != self.mul(a, self.mul(b, c)) {
                return Some(format!("multiplicative associativity fails at ({a},{b},{c})"));
            }
            if self.mul(a, self.add(b, c)) != self.add(self.mul(a, b), self.mul(a, c)) {
                return Some(format!("distributivity fails at ({a},{b},{c})"));
            }
            None
        };
        for a in 0..n {
            if self.add(a, self.zero()) != a || self.mul(a, self.one()) != a {
                return CheckOutcome::new(id, false, Mode::Exhaustive, format!("identity fails at {a}"));
            }
            for b in 0..n {
                if self.add(a, b) != self.add(b, a) || self.mul(a, b) != self.mul(b, a) {
                    return CheckOutcome::new(id, false, Mode::Exhaustive, format!("commutativity fails at ({a},{b})"));
                }
            }
        }
        let total = (n as u128).pow(3);
        if total <= cap as u128 {
            for a in 0..n {
                for b in 0..n {
                    for c in 0..n {
                        if let Some(msg) = triple(a, b, c) {
                            return CheckOutcome::new(id, false, Mode::Exhaustive, msg);
                        }
                    }
                }
            }
            CheckOutcome::new(id, true, Mode::Exhaustive, format!("ring axioms on all {total} triples of a ring of order {n}"))
        } else {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let samples = cap.max(1);
            for _ in 0..samples {
                let (a, b, c) = (rng.gen_range(0..n), rng.gen_range(0..n), rng.gen_range(0..n));
                if let Some(msg) = triple(a, b, c) {
                    return CheckOutcome::new(id, false, Mode::Sampled, msg);
                }
            }
            CheckOutcome::new(
                id,
                true,
                Mode::Sampled,
                format!("ring axioms on {samples} sampled triples (seed {seed}) of a ring of order {n}"),
            )
        }
    }

    /// Checks that a table is a unital ring homomorphism into `target`.
    pub fn is_hom_to(&self, target: &FinRing, map: &[usize]) -> bool {
        if map.len() != self.size || map[self.one()] != target.one() {
            return false;
        }
        (0..self.size).all(|a| {
            (0..self.size).all(|b| {
                map[self.add(a, b)] == target.add(map[a], map[b]) && map[self.mul(a, b)] == target.mul(map[a], map[b])
            })
        })
    }

    pub fn is_bijection(map: &[usize], target_size: usize) -> bool {
        if map.len() != target_size {
            return false;
        }
        let mut seen = vec![false; target_size];
        map.iter().all(|&x| x < target_size && !std::mem::replace(&mut seen[x], true))
    }

    /// Direct product with componentwise operations; index a + |self|·b.
    pub fn product(&self, other: &FinRing) -> Result<FinRing> {
        let n = self.size;
        FinRing::from_ops(
            n * other.size,
            self.zero() + n * other.zero(),
            self.one() + n * other.one(),
            |x, y| self.add(x % n, y % n) + n * other.add(x / n, y / n),
            |x, y| self.mul(x % n, y % n) + n * other.mul(x / n, y / n),
        )
    }
}

/// Whether two tabulated rings are isomorphic, by search over images of a generating set.
pub fn find_isomorphism(a: &FinRing, b: &FinRing) -> Option<Vec<usize>> {
    if a.size() != b.size() || a.characteristic() != b.characteristic() {
        return None;
    }
    // greedy generating set of a as a ring
    let mut gens: Vec<usize> = Vec::new();
    let mut span = closure(a, &[]);
    while span.len() < a.size() {
        let g = (0..a.size()).find(|x| !span.contains(x)).unwrap();
        gens.push(g);
        span = closure(a, &gens);
    }
    let mut images = vec![0usize; gens.len()];
    search(a, b, &gens, &mut images, 0)
}

fn closure(r: &FinRing, gens: &[usize]) -> std::collections::BTreeSet<usize> {
    let mut set: std::collections::BTreeSet<usize> = [r.zero(), r.one()].into_iter().chain(gens.iter().copied()).collect();
    loop {
        let cur: Vec<usize> = set.iter().copied().collect();
        let before = set.len();
        for &x in &cur {
            for &y in &cur {
                set.insert(r.add(x, y));
                set.insert(r.mul(x, y));
            }
        }
        if set.len() == before {
            return set;
        }
    }
}

fn extend_map(a: &FinRing, b: &FinRing, gens: &[usize], images: &[usize]) -> Option<Vec<usize>> {
    let mut map = vec![usize::MAX; a.size()];
    map[a.zero()] = b.zero();
    map[a.one()] = b.one();
    for (&g, &im) in gens.iter().zip(images) {
        if map[g] != usize::MAX && map[g] != im {
            return None;
        }
        map[g] = im;
    }
    let mut known: Vec<usize> = (0..a.size()).filter(|&x| map[x] != usize::MAX).collect();
    loop {
        let mut grew = false;
        let cur = known.clone();
        for &x in &cur {
            for &y in &cur {
                for (z, w) in [(a.add(x, y), b.add(map[x], map[y])), (a.mul(x, y), b.mul(map[x], map[y]))] {
                    if map[z] == usize::MAX {
                        map[z] = w;
                        known.push(z);
                        grew = true;
                    } else if map[z] != w {
                        return None;
                    }
                }
            }
        }
        if !grew {
            break;
        }
    }
    Some(map)
}

fn search(a: &FinRing, b: &FinRing, gens: &[usize], images: &mut Vec<usize>, k: usize) -> Option<Vec<usize>> {
    if k == gens.len() {
        let map = extend_map(a, b, gens, images)?;
        if map.contains(&usize::MAX) {
            return None;
        }
        return (FinRing::is_bijection(&map, b.size()) && a.is_hom_to(b, &map)).then_some(map);
    }
    for im in 0..b.size() {
        images[k] = im;
        if extend_map(a, b, &gens[..=k], &images[..=k]).is_some() {
            if let Some(m) = search(a, b, gens, images, k + 1) {
                return Some(m);
            }
        }
    }
    None
}

/// Z/m as a tabulated ring.
pub fn integers_mod(m: usize) -> FinRing {
    FinRing::from_ops(m, 0, 1 % m, |a, b| (a + b) % m, |a, b| (a * b) % m).unwrap()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn z4_axioms() {
        let r = integers_mod(4);
        assert!(r.check_axioms("z4", 1 << 20, 0).passed);
        assert_eq!(r.characteristic(), 4);
        assert!(r.is_unit(3) && !r.is_unit(2));
    }

    #[test]
    fn broken_table_detected() {
        // a + b mod 4 with the "product" a + b: not distributive
        let r = FinRing::from_ops(4, 0, 0, |a, b| (a + b) % 4, |a, b| (a + b) % 4).unwrap();
        assert!(!r.check_axioms("bad", 1 << 20, 0).passed);
    }

    #[test]
    fn product_and_iso_search() {
        let z2 = integers_mod(2);
        let z3 = integers_mod(3);
        let z6 = integers_mod(6);
        let p = z2.product(&z3).unwrap();
        assert!(find_isomorphism(&p, &z6).is_some());
        let z4 = integers_mod(4);
        let z2z2 = z2.product(&z2).unwrap();
        assert!(find_isomorphism(&z4, &z2z2).is_none());
    }
}
