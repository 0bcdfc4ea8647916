//! Presentations of finite abelian p-groups given by an addition table.

use super::arith::Modulus;
use super::module::ZpnModule;
use crate::error::{Error, Result};

/// A finite abelian group of exponent dividing p^n, with coordinates for every element.
#[derive(Clone, Debug)]
pub struct GroupPresentation {
    pub module: ZpnModule,
    /// Element indices of the chosen generators.
    pub generators: Vec<usize>,
    /// Canonical coordinate vector of each element.
    pub coords: Vec<Vec<u64>>,
    lookup: std::collections::HashMap<Vec<u64>, usize>,
}

impl GroupPresentation {
    /// Elements are 0..size; `add` is the group law and `zero` the identity.
    pub fn new(modulus: Modulus, size: usize, zero: usize, add: impl Fn(usize, usize) -> usize) -> Result<Self> {
        let q = modulus.q() as usize;
        let mul = |k: usize, g: usize| -> usize {
            let mut acc = zero;
            for _ in 0..k {
                acc = add(acc, g);
            }
            acc
        };
        let order = |g: usize| -> Result<usize> {
            let mut acc = g;
            let mut k = 1;
            while acc != zero {
                acc = add(acc, g);
                k += 1;
                if k > q {
                    return Err(Error::Precondition(format!("group exponent exceeds {}", modulus.q())));
                }
            }
            Ok(k)
        };
        let mut orders = Vec::with_capacity(size);
        for g in 0..size {
            orders.push(order(g)?);
        }
        // raw coordinates over the generators found so far
        let mut coord: Vec<Option<Vec<u64>>> = vec![None; size];
        coord[zero] = Some(vec![]);
        let mut members = vec![zero];
        let mut gens = Vec::new();
        let mut rels: Vec<Vec<u64>> = Vec::new();
        while members.len() < size {
            let g = (0..size)
                .filter(|&x| coord[x].is_none())
                .max_by_key(|&x| (orders[x], std::cmp::Reverse(x)))
                .unwrap();
            let j = gens.len();
            gens.push(g);
            for c in coord.iter_mut().flatten() {
                c.push(0);
            }
            for r in rels.iter_mut() {
                r.push(0);
            }
            // smallest p^a with p^a g in the current subgroup
            let mut step = 1usize;
            let mut pg = g;
            while coord[pg].is_none() {
                pg = mul(modulus.p() as usize, pg);
                step *= modulus.p() as usize;
            }
            let mut rel: Vec<u64> = coord[pg].clone().unwrap().iter().map(|&x| modulus.neg(x)).collect();
            rel[j] = modulus.add(rel[j], step as u64);
            rels.push(rel);
            let old = members.clone();
            let mut cg = zero;
            for c in 1..step {
                cg = add(cg, g);
                for &h in &old {
                    let e = add(h, cg);
                    debug_assert!(coord[e].is_none());
                    let mut v = coord[h].clone().unwrap();
                    v[j] = c as u64;
                    coord[e] = Some(v);
                    members.push(e);
                }
            }
        }
        let k = gens.len();
        let module = ZpnModule::new(modulus, k, &rels);
        let coords: Vec<Vec<u64>> = coord.into_iter().map(|c| module.reduce(&c.unwrap())).collect();
        let lookup = coords.iter().enumerate().map(|(i, c)| (c.clone(), i)).collect();
        Ok(GroupPresentation { module, generators: gens, coords, lookup })
    }

    /// Element with the given coordinates.
    pub fn element(&self, v: &[u64]) -> usize {
        self.lookup[&self.module.reduce(v)]
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn z4_times_z2() {
        let m = Modulus::new(2, 2).unwrap();
        // elements (a,b) with a in Z/4, b in Z/2, index a + 4b
        let add = |x: usize, y: usize| ((x % 4 + y % 4) % 4) + 4 * ((x / 4 + y / 4) % 2);
        let g = GroupPresentation::new(m, 8, 0, add).unwrap();
        assert_eq!(g.module.invariant_factors(), vec![4, 2]);
        for x in 0..8 {
            for y in 0..8 {
                let s = g.module.add(&g.coords[x], &g.coords[y]);
                assert_eq!(g.element(&s), add(x, y));
            }
        }
    }

    #[test]
    fn exponent_guard() {
        let m = Modulus::new(2, 1).unwrap();
        assert!(GroupPresentation::new(m, 4, 0, |x, y| (x + y) % 4).is_err());
    }
}
