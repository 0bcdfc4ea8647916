//! The algebra Γ^d_{Z/p^m}(R) of a finite commutative ring R.

use super::module::{DividedPowerModule, RelatorScheme};
use crate::error::{Error, Result};
use crate::finring::FinRing;
use crate::zpn_linalg::{GroupPresentation, Modulus};

/// Non-negative integer matrices with the given row and column sums.
pub fn contingency_tables(rows: &[u32], cols: &[u32]) -> Vec<Vec<Vec<u32>>> {
    fn rec(i: usize, rows: &[u32], cols: &mut Vec<u32>, cur: &mut Vec<Vec<u32>>, out: &mut Vec<Vec<Vec<u32>>>) {
        if i == rows.len() {
            if cols.iter().all(|&c| c == 0) {
                out.push(cur.clone());
            }
            return;
        }
        fn fill(i: usize, j: usize, left: u32, rows: &[u32], cols: &mut Vec<u32>, cur: &mut Vec<Vec<u32>>, out: &mut Vec<Vec<Vec<u32>>>) {
            if j == cols.len() {
                if left == 0 {
                    rec(i + 1, rows, cols, cur, out);
                }
                return;
            }
            for c in 0..=left.min(cols[j]) {
                cur[i][j] = c;
                cols[j] -= c;
                fill(i, j + 1, left - c, rows, cols, cur, out);
                cols[j] += c;
            }
            cur[i][j] = 0;
        }
        fill(i, 0, rows[i], rows, cols, cur, out);
    }
    let mut out = Vec::new();
    let mut cur = vec![vec![0; cols.len()]; rows.len()];
    rec(0, rows, &mut cols.to_vec(), &mut cur, &mut out);
    out
}

/// Γ^d of R seen as a Z/p^m-module, with the product extending [x]_d[y]_d = [xy]_d.
#[derive(Clone, Debug)]
pub struct GammaAlgebra {
    pub ring: FinRing,
    pub presentation: GroupPresentation,
    pub gamma: DividedPowerModule,
    /// Products of basis multi-symbols, on the free cover.
    table: Vec<Vec<Vec<u64>>>,
}

/// Π[g_i]_{a_i} · Π[g_j]_{b_j} = Σ_C Π_{ij} [g_i g_j]_{c_ij} over tables C with row sums a and column sums b.
pub fn matrix_expansion_product(
    ring: &FinRing,
    pres: &GroupPresentation,
    gamma: &DividedPowerModule,
    a: &[u32],
    b: &[u32],
) -> Vec<u64> {
    let m = gamma.module.modulus();
    let gens = &pres.generators;
    let mut acc = vec![0u64; gamma.basis().len()];
    for c in contingency_tables(a, b) {
        let mut parts = Vec::new();
        for (i, row) in c.iter().enumerate() {
            for (j, &e) in row.iter().enumerate() {
                if e > 0 {
                    parts.push((pres.coords[ring.mul(gens[i], gens[j])].clone(), e));
                }
            }
        }
        let term = gamma.family.symbol(&parts);
        for (x, y) in acc.iter_mut().zip(term) {
            *x = m.add(*x, y);
        }
    }
    acc
}

impl GammaAlgebra {
    pub fn new(ring: &FinRing, modulus: Modulus, d: u32, scheme: RelatorScheme) -> Result<Self> {
        let presentation = GroupPresentation::new(modulus, ring.size(), ring.zero(), |a, b| ring.add(a, b))?;
        let gamma = DividedPowerModule::new(&presentation.module, d, scheme)?;
        let basis = gamma.basis().basis.clone();
        let table = basis
            .iter()
            .map(|a| basis.iter().map(|b| matrix_expansion_product(ring, &presentation, &gamma, a, b)).collect())
            .collect();
        Ok(GammaAlgebra { ring: ring.clone(), presentation, gamma, table })
    }

    pub fn modulus(&self) -> Modulus {
        self.gamma.module.modulus()
    }
    pub fn dim(&self) -> usize {
        self.gamma.basis().len()
    }
    pub fn coords(&self, x: usize) -> Vec<u64> {
        self.presentation.coords[x].clone()
    }
    pub fn reduce(&self, v: &[u64]) -> Vec<u64> {
        self.gamma.module.reduce(v)
    }

    /// [x]_d.
    pub fn pure(&self, x: usize) -> Vec<u64> {
        self.gamma.pure(&self.coords(x))
    }

    /// Π_j [x_j]_{a_j} for ring elements x_j.
    pub fn symbol(&self, parts: &[(usize, u32)]) -> Result<Vec<u64>> {
        let parts: Vec<(Vec<u64>, u32)> = parts.iter().map(|&(x, a)| (self.coords(x), a)).collect();
        self.gamma.symbol(&parts)
    }

    pub fn one(&self) -> Vec<u64> {
        self.pure(self.ring.one())
    }

    /// Product on the free cover, reduced modulo the relators.
    pub fn mul(&self, x: &[u64], y: &[u64]) -> Vec<u64> {
        let m = self.modulus();
        let mut acc = vec![0u64; self.dim()];
        for (i, &a) in x.iter().enumerate() {
            if a == 0 {
                continue;
            }
            for (j, &b) in y.iter().enumerate() {
                if b == 0 {
                    continue;
                }
                let c = m.mul(a, b);
                for (s, &t) in acc.iter_mut().zip(&self.table[i][j]) {
                    *s = m.add(*s, m.mul(c, t));
                }
            }
        }
        self.reduce(&acc)
    }

    /// [x]_d [y]_d = [xy]_d for all x, y.
    pub fn check_pure_law(&self) -> Result<()> {
        for x in 0..self.ring.size() {
            let px = self.pure(x);
            for y in 0..self.ring.size() {
                if self.mul(&px, &self.pure(y)) != self.pure(self.ring.mul(x, y)) {
                    return Err(Error::Check(format!("[x][y] != [xy] at x = {x}, y = {y}")));
                }
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::finring::integers_mod;

    #[test]
    fn tables() {
        assert_eq!(contingency_tables(&[1, 1], &[1, 1]).len(), 2);
        assert_eq!(contingency_tables(&[2], &[1, 1]).len(), 1);
        assert_eq!(contingency_tables(&[2, 1], &[1, 2]).len(), 2);
    }

    #[test]
    fn pure_law_on_small_rings() {
        let r = integers_mod(4);
        let g = GammaAlgebra::new(&r, Modulus::new(2, 3).unwrap(), 2, RelatorScheme::Full).unwrap();
        g.check_pure_law().unwrap();
        let f4 = crate::fpalg::FpAlgebra::galois_field(2, 2).unwrap().to_finring().unwrap();
        let g = GammaAlgebra::new(&f4, Modulus::new(2, 2).unwrap(), 2, RelatorScheme::Full).unwrap();
        g.check_pure_law().unwrap();
    }
}
