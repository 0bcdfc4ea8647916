use crate::error::{Error, Result};
use std::collections::BTreeMap;

pub type Monomial = Vec<u32>;
/// Sparse element: monomial exponent vector to nonzero coefficient.
pub type GradedElem = BTreeMap<Monomial, u64>;

/// Polynomial ring F_p[x_1..x_d] with weighted generators, truncated at a degree bound.
///
/// Products with a nonzero term above the bound are reported as errors instead
/// of being dropped.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GradedAlgebra {
    p: u64,
    degrees: Vec<u32>,
    bound: u32,
    names: Vec<String>,
}

impl GradedAlgebra {
    pub fn new(p: u64, degrees: Vec<u32>, bound: u32) -> Result<Self> {
        if !crate::zpn_linalg::is_prime(p) {
            return Err(Error::NotPrime(p));
        }
        let names = (1..=degrees.len()).map(|i| format!("x{i}")).collect();
        Ok(GradedAlgebra { p, degrees, bound, names })
    }

    /// Symmetric algebra of F_p^d, all generators in degree 1.
    pub fn symmetric(p: u64, d: usize, bound: u32) -> Result<Self> {
        GradedAlgebra::new(p, vec![1; d], bound)
    }

    pub fn p(&self) -> u64 {
        self.p
    }
    pub fn nvars(&self) -> usize {
        self.degrees.len()
    }
    pub fn bound(&self) -> u32 {
        self.bound
    }
    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn degree_of(&self, m: &Monomial) -> u32 {
        m.iter().zip(&self.degrees).map(|(e, d)| e * d).sum()
    }

    /// Monomials of exact degree m, in lexicographic order.
    pub fn degree_basis(&self, m: u32) -> Vec<Monomial> {
        let mut out = Vec::new();
        let mut cur = vec![0u32; self.nvars()];
        self.fill(0, m, &mut cur, &mut out);
        out.sort();
        out
    }

    fn fill(&self, i: usize, rest: u32, cur: &mut Monomial, out: &mut Vec<Monomial>) {
        if i == self.nvars() {
            if rest == 0 {
                out.push(cur.clone());
            }
            return;
        }
        let d = self.degrees[i];
        let mut e = 0;
        while e * d <= rest {
            cur[i] = e;
            self.fill(i + 1, rest - e * d, cur, out);
            e += 1;
        }
        cur[i] = 0;
    }

    pub fn zero(&self) -> GradedElem {
        GradedElem::new()
    }
    pub fn one(&self) -> GradedElem {
        self.monomial(vec![0; self.nvars()], 1)
    }
    pub fn var(&self, i: usize) -> GradedElem {
        let mut m = vec![0; self.nvars()];
        m[i] = 1;
        self.monomial(m, 1)
    }
    pub fn monomial(&self, m: Monomial, c: u64) -> GradedElem {
        let mut out = GradedElem::new();
        if !c.is_multiple_of(self.p) {
            out.insert(m, c % self.p);
        }
        out
    }
    pub fn from_int(&self, k: i64) -> GradedElem {
        self.monomial(vec![0; self.nvars()], k.rem_euclid(self.p as i64) as u64)
    }

    pub fn add(&self, a: &GradedElem, b: &GradedElem) -> GradedElem {
        let mut out = a.clone();
        for (m, &c) in b {
            let e = out.entry(m.clone()).or_insert(0);
            *e = (*e + c) % self.p;
            if *e == 0 {
                out.remove(m);
            }
        }
        out
    }
    pub fn neg(&self, a: &GradedElem) -> GradedElem {
        a.iter().map(|(m, &c)| (m.clone(), (self.p - c) % self.p)).collect()
    }
    pub fn scale(&self, t: u64, a: &GradedElem) -> GradedElem {
        a.iter()
            .map(|(m, &c)| (m.clone(), c * (t % self.p) % self.p))
            .filter(|(_, c)| *c != 0)
            .collect()
    }
    pub fn mul(&self, a: &GradedElem, b: &GradedElem) -> Result<GradedElem> {
        let mut out = GradedElem::new();
        for (ma, &ca) in a {
            for (mb, &cb) in b {
                let m: Monomial = ma.iter().zip(mb).map(|(x, y)| x + y).collect();
                let e = out.entry(m).or_insert(0);
                *e = (*e + ca * cb) % self.p;
            }
        }
        out.retain(|_, c| *c != 0);
        if let Some(m) = out.keys().find(|m| self.degree_of(m) > self.bound) {
            return Err(Error::Truncation { degree: self.degree_of(m), bound: self.bound });
        }
        Ok(out)
    }

    /// Some(degree) if homogeneous and nonzero.
    pub fn homogeneous_degree(&self, a: &GradedElem) -> Option<u32> {
        let mut it = a.keys().map(|m| self.degree_of(m));
        let d = it.next()?;
        it.all(|e| e == d).then_some(d)
    }

    pub fn is_homogeneous_of(&self, a: &GradedElem, d: u32) -> bool {
        a.keys().all(|m| self.degree_of(m) == d)
    }

    /// All elements of the degree-m slice, coefficient vectors in lexicographic monomial order.
    pub fn slice_elements(&self, m: u32, cap: u64) -> Result<Vec<GradedElem>> {
        let basis = self.degree_basis(m);
        let size = (self.p as u128).pow(basis.len() as u32);
        crate::error::guard(size, cap)?;
        let mut out = Vec::with_capacity(size as usize);
        for idx in 0..size as u64 {
            let mut e = GradedElem::new();
            let mut r = idx;
            for b in &basis {
                let c = r % self.p;
                r /= self.p;
                if c != 0 {
                    e.insert(b.clone(), c);
                }
            }
            out.push(e);
        }
        Ok(out)
    }

    pub fn format(&self, a: &GradedElem) -> String {
        if a.is_empty() {
            return "0".into();
        }
        a.iter()
            .map(|(m, c)| {
                let mon: Vec<String> = m
                    .iter()
                    .enumerate()
                    .filter(|(_, &e)| e > 0)
                    .map(|(i, &e)| if e == 1 { self.names[i].clone() } else { format!("{}^{}", self.names[i], e) })
                    .collect();
                match (mon.is_empty(), *c) {
                    (true, c) => c.to_string(),
                    (false, 1) => mon.join("*"),
                    (false, c) => format!("{c}*{}", mon.join("*")),
                }
            })
            .collect::<Vec<_>>()
            .join(" + ")
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::zpn_linalg::binomial;

    #[test]
    fn slice_dimensions() {
        for d in 1..=4usize {
            let s = GradedAlgebra::symmetric(3, d, 6).unwrap();
            for m in 0..=6u32 {
                assert_eq!(s.degree_basis(m).len() as u128, binomial((m as usize + d - 1) as u64, (d - 1) as u64));
            }
        }
    }

    #[test]
    fn truncation_overflow_signalled() {
        let s = GradedAlgebra::symmetric(2, 2, 2).unwrap();
        let x = s.var(0);
        let x2 = s.mul(&x, &x).unwrap();
        assert!(matches!(s.mul(&x2, &x), Err(Error::Truncation { degree: 3, bound: 2 })));
        // cancellation to zero is not an overflow
        let two = s.add(&x2, &x2);
        assert!(s.mul(&two, &x).unwrap().is_empty());
    }

    #[test]
    fn grading_respected() {
        let s = GradedAlgebra::new(2, vec![1, 2], 6).unwrap();
        let a = s.add(&s.var(1), &s.mul(&s.var(0), &s.var(0)).unwrap());
        assert_eq!(s.homogeneous_degree(&a), Some(2));
        let b = s.mul(&a, &s.var(0)).unwrap();
        assert_eq!(s.homogeneous_degree(&b), Some(3));
    }
}
