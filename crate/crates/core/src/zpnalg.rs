//! Free Z/p^n-algebras given by structure constants.

use crate::error::{guard, Error, Result};
use crate::finring::{FinRing, MAX_TABLE_ORDER};
use crate::fpalg::FpAlgebra;
use crate::zpn_linalg::Modulus;

pub type ZElem = Vec<u64>;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ZpnAlgebra {
    modulus: Modulus,
    labels: Vec<String>,
    consts: Vec<Vec<ZElem>>,
    unit: ZElem,
}

impl ZpnAlgebra {
    pub fn from_table(modulus: Modulus, labels: Vec<String>, consts: Vec<Vec<ZElem>>, unit: ZElem) -> Result<Self> {
        let d = labels.len();
        if consts.len() != d || consts.iter().any(|r| r.len() != d || r.iter().any(|v| v.len() != d)) || unit.len() != d {
            return Err(Error::Shape(format!("structure constants must be {d}x{d}x{d}")));
        }
        let q = modulus.q();
        let consts = consts.into_iter().map(|r| r.into_iter().map(|v| v.into_iter().map(|x| x % q).collect()).collect()).collect();
        let unit = unit.into_iter().map(|x| x % q).collect();
        let a = ZpnAlgebra { modulus, labels, consts, unit };
        for i in 0..d {
            let bi = a.basis(i);
            if a.mul(&a.unit, &bi) != bi {
                return Err(Error::InvalidAlgebra("unit fails".into()));
            }
            for j in 0..d {
                if a.consts[i][j] != a.consts[j][i] {
                    return Err(Error::InvalidAlgebra("not commutative".into()));
                }
                for k in 0..d {
                    if a.mul(&a.consts[i][j], &a.basis(k)) != a.mul(&bi, &a.consts[j][k]) {
                        return Err(Error::InvalidAlgebra("not associative".into()));
                    }
                }
            }
        }
        Ok(a)
    }

    /// Z/p^n[t]/(f) for monic f, constant term first.
    pub fn poly_quotient(modulus: Modulus, f: &[i64]) -> Result<Self> {
        let k = f.len().checked_sub(1).ok_or_else(|| Error::Precondition("empty polynomial".into()))?;
        if modulus.reduce(f[k]) != 1 {
            return Err(Error::Precondition("polynomial must be monic".into()));
        }
        let fm: Vec<u64> = f.iter().map(|&c| modulus.reduce(c)).collect();
        let mut powers: Vec<ZElem> = Vec::new();
        for e in 0..(2 * k).max(1) {
            if e < k {
                let mut v = vec![0; k];
                v[e] = 1;
                powers.push(v);
            } else {
                let prev = powers[e - 1].clone();
                let mut v = vec![0; k];
                v[1..k].copy_from_slice(&prev[..(k - 1)]);
                let top = prev[k - 1];
                for i in 0..k {
                    v[i] = modulus.sub(v[i], modulus.mul(top, fm[i]));
                }
                powers.push(v);
            }
        }
        let labels = (0..k).map(|e| if e == 0 { "1".into() } else if e == 1 { "t".into() } else { format!("t^{e}") }).collect();
        let consts = (0..k).map(|i| (0..k).map(|j| powers[i + j].clone()).collect()).collect();
        let mut unit = vec![0; k];
        if k > 0 {
            unit[0] = 1;
        }
        ZpnAlgebra::from_table(modulus, labels, consts, unit)
    }

    pub fn integers(modulus: Modulus) -> Self {
        ZpnAlgebra::from_table(modulus, vec!["1".into()], vec![vec![vec![1]]], vec![1]).unwrap()
    }

    pub fn modulus(&self) -> Modulus {
        self.modulus
    }
    pub fn dim(&self) -> usize {
        self.labels.len()
    }
    pub fn labels(&self) -> &[String] {
        &self.labels
    }
    pub fn size(&self) -> u128 {
        (self.modulus.q() as u128).pow(self.dim() as u32)
    }
    pub fn zero(&self) -> ZElem {
        vec![0; self.dim()]
    }
    pub fn one(&self) -> ZElem {
        self.unit.clone()
    }
    pub fn basis(&self, i: usize) -> ZElem {
        let mut v = self.zero();
        v[i] = 1;
        v
    }
    pub fn add(&self, a: &ZElem, b: &ZElem) -> ZElem {
        a.iter().zip(b).map(|(x, y)| self.modulus.add(*x, *y)).collect()
    }
    pub fn sub(&self, a: &ZElem, b: &ZElem) -> ZElem {
        a.iter().zip(b).map(|(x, y)| self.modulus.sub(*x, *y)).collect()
    }
    pub fn scale(&self, t: u64, a: &ZElem) -> ZElem {
        a.iter().map(|x| self.modulus.mul(t, *x)).collect()
    }
    pub fn mul(&self, a: &ZElem, b: &ZElem) -> ZElem {
        let m = &self.modulus;
        let mut out = self.zero();
        for (i, &x) in a.iter().enumerate() {
            if x == 0 {
                continue;
            }
            for (j, &y) in b.iter().enumerate() {
                if y == 0 {
                    continue;
                }
                let xy = m.mul(x, y);
                for (o, &c) in out.iter_mut().zip(&self.consts[i][j]) {
                    *o = m.add(*o, m.mul(xy, c));
                }
            }
        }
        out
    }
    pub fn pow(&self, a: &ZElem, mut e: u64) -> ZElem {
        let mut acc = self.one();
        let mut base = a.clone();
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(&acc, &base);
            }
            e >>= 1;
            if e > 0 {
                base = self.mul(&base, &base);
            }
        }
        acc
    }
    pub fn index(&self, a: &ZElem) -> usize {
        let q = self.modulus.q() as usize;
        a.iter().rev().fold(0, |acc, &x| acc * q + x as usize)
    }
    pub fn element(&self, mut idx: usize) -> ZElem {
        let q = self.modulus.q() as usize;
        (0..self.dim())
            .map(|_| {
                let d = idx % q;
                idx /= q;
                d as u64
            })
            .collect()
    }

    /// Reduction modulo p, as an F_p-algebra on the same basis.
    pub fn mod_p(&self) -> Result<FpAlgebra> {
        let p = self.modulus.p();
        let consts = self.consts.iter().map(|r| r.iter().map(|v| v.iter().map(|x| x % p).collect()).collect()).collect();
        FpAlgebra::from_table(p, self.labels.clone(), consts, self.unit.iter().map(|x| x % p).collect())
    }

    /// Reduction modulo p^m.
    pub fn truncate(&self, m: u32) -> Result<ZpnAlgebra> {
        let md = self.modulus.truncate(m)?;
        let q = md.q();
        let consts = self.consts.iter().map(|r| r.iter().map(|v| v.iter().map(|x| x % q).collect()).collect()).collect();
        ZpnAlgebra::from_table(md, self.labels.clone(), consts, self.unit.iter().map(|x| x % q).collect())
    }

    /// Coefficientwise lift of an element of the reduction mod p (digits in [0, p)).
    pub fn lift(&self, x: &[u64]) -> ZElem {
        x.to_vec()
    }

    pub fn to_finring(&self) -> Result<FinRing> {
        let s = self.size();
        guard(s, MAX_TABLE_ORDER as u64)?;
        let els: Vec<ZElem> = (0..s as usize).map(|i| self.element(i)).collect();
        FinRing::from_ops(
            s as usize,
            0,
            self.index(&self.unit),
            |a, b| self.index(&self.add(&els[a], &els[b])),
            |a, b| self.index(&self.mul(&els[a], &els[b])),
        )
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn quotient_and_reduction() {
        let m = Modulus::new(2, 2).unwrap();
        let a = ZpnAlgebra::poly_quotient(m, &[0, 1, 1]).unwrap();
        let t = a.basis(1);
        // t^2 = -t
        assert_eq!(a.mul(&t, &t), vec![0, 3]);
        let b = a.mod_p().unwrap();
        assert!(b.is_reduced());
        assert!(a.to_finring().unwrap().check_axioms("z4t", 1 << 20, 0).passed);
    }
}
