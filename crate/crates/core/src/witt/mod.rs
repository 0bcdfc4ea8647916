//! Truncated p-typical Witt vectors over rings of characteristic p.

mod corolift;
mod logexp;
mod polys;

pub use corolift::{corolift, localization_iso, teichmuller_generated, Corolift, LocalizationIso};
pub use logexp::{witt_exp, witt_log};
pub use polys::{int_polynomial, IntPolynomial, WittPolynomials};

use crate::error::{guard, Error, Result};
use crate::finring::FinRing;
use crate::fpalg::{FpAlgebra, GradedAlgebra, GradedElem, LaurentElem, LaurentPolys};
use std::sync::Arc;

/// A commutative ring of characteristic p, as needed to evaluate Witt polynomials.
pub trait CharPRing {
    type Elem: Clone + PartialEq + std::fmt::Debug;
    fn char_p(&self) -> u64;
    fn zero(&self) -> Self::Elem;
    fn one(&self) -> Self::Elem;
    fn from_int(&self, k: i64) -> Self::Elem;
    fn add(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn neg(&self, a: &Self::Elem) -> Self::Elem;
    fn mul(&self, a: &Self::Elem, b: &Self::Elem) -> Result<Self::Elem>;
    fn is_zero(&self, a: &Self::Elem) -> bool;

    fn sub(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem {
        self.add(a, &self.neg(b))
    }
    fn pow(&self, a: &Self::Elem, mut e: u64) -> Result<Self::Elem> {
        let mut acc = self.one();
        let mut base = a.clone();
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(&acc, &base)?;
            }
            e >>= 1;
            if e > 0 {
                base = self.mul(&base, &base)?;
            }
        }
        Ok(acc)
    }
    fn scale(&self, c: u64, a: &Self::Elem) -> Result<Self::Elem> {
        self.mul(&self.from_int(c as i64), a)
    }
}

impl CharPRing for FpAlgebra {
    type Elem = Vec<u64>;
    fn char_p(&self) -> u64 {
        self.p()
    }
    fn zero(&self) -> Self::Elem {
        FpAlgebra::zero(self)
    }
    fn one(&self) -> Self::Elem {
        FpAlgebra::one(self)
    }
    fn from_int(&self, k: i64) -> Self::Elem {
        FpAlgebra::from_int(self, k)
    }
    fn add(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem {
        FpAlgebra::add(self, a, b)
    }
    fn neg(&self, a: &Self::Elem) -> Self::Elem {
        FpAlgebra::neg(self, a)
    }
    fn mul(&self, a: &Self::Elem, b: &Self::Elem) -> Result<Self::Elem> {
        Ok(FpAlgebra::mul(self, a, b))
    }
    fn is_zero(&self, a: &Self::Elem) -> bool {
        FpAlgebra::is_zero(self, a)
    }
    fn scale(&self, c: u64, a: &Self::Elem) -> Result<Self::Elem> {
        Ok(FpAlgebra::scale(self, c % self.p(), a))
    }
}

impl CharPRing for GradedAlgebra {
    type Elem = GradedElem;
    fn char_p(&self) -> u64 {
        self.p()
    }
    fn zero(&self) -> Self::Elem {
        GradedAlgebra::zero(self)
    }
    fn one(&self) -> Self::Elem {
        GradedAlgebra::one(self)
    }
    fn from_int(&self, k: i64) -> Self::Elem {
        GradedAlgebra::from_int(self, k)
    }
    fn add(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem {
        GradedAlgebra::add(self, a, b)
    }
    fn neg(&self, a: &Self::Elem) -> Self::Elem {
        GradedAlgebra::neg(self, a)
    }
    fn mul(&self, a: &Self::Elem, b: &Self::Elem) -> Result<Self::Elem> {
        GradedAlgebra::mul(self, a, b)
    }
    fn is_zero(&self, a: &Self::Elem) -> bool {
        a.is_empty()
    }
}

impl CharPRing for LaurentPolys {
    type Elem = LaurentElem;
    fn char_p(&self) -> u64 {
        self.p()
    }
    fn zero(&self) -> Self::Elem {
        LaurentPolys::zero(self)
    }
    fn one(&self) -> Self::Elem {
        LaurentPolys::one(self)
    }
    fn from_int(&self, k: i64) -> Self::Elem {
        LaurentPolys::from_int(self, k)
    }
    fn add(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem {
        LaurentPolys::add(self, a, b)
    }
    fn neg(&self, a: &Self::Elem) -> Self::Elem {
        LaurentPolys::neg(self, a)
    }
    fn mul(&self, a: &Self::Elem, b: &Self::Elem) -> Result<Self::Elem> {
        Ok(LaurentPolys::mul(self, a, b))
    }
    fn is_zero(&self, a: &Self::Elem) -> bool {
        a.is_empty()
    }
}

/// A Witt vector of length n; component 0 first.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct WittVector<E>(pub Vec<E>);

impl<E> WittVector<E> {
    pub fn len(&self) -> usize {
        self.0.len()
    }
    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }
    pub fn components(&self) -> &[E] {
        &self.0
    }
}

/// W_n over a base ring of characteristic p.
#[derive(Clone)]
pub struct WittRing<'a, R: CharPRing> {
    pub base: &'a R,
    pub n: usize,
    polys: Arc<WittPolynomials>,
}

impl<'a, R: CharPRing> WittRing<'a, R> {
    pub fn new(base: &'a R, n: usize) -> Result<Self> {
        let polys = WittPolynomials::get(base.char_p(), n)?;
        Ok(WittRing { base, n, polys })
    }

    pub fn p(&self) -> u64 {
        self.base.char_p()
    }

    pub fn polynomials(&self) -> &WittPolynomials {
        &self.polys
    }

    fn check(&self, v: &WittVector<R::Elem>) -> Result<()> {
        if v.len() != self.n {
            return Err(Error::Shape(format!("Witt vector of length {} used in W_{}", v.len(), self.n)));
        }
        Ok(())
    }

    pub fn zero(&self) -> WittVector<R::Elem> {
        WittVector(vec![self.base.zero(); self.n])
    }
    pub fn one(&self) -> WittVector<R::Elem> {
        self.teichmuller(&self.base.one())
    }
    pub fn is_zero(&self, v: &WittVector<R::Elem>) -> bool {
        v.0.iter().all(|c| self.base.is_zero(c))
    }

    fn eval(&self, poly: &[(Vec<u32>, u64)], x: &WittVector<R::Elem>, y: &WittVector<R::Elem>) -> Result<R::Elem> {
        let b = self.base;
        let n = self.n;
        let mut acc = b.zero();
        for (m, c) in poly {
            let mut t = b.from_int(*c as i64);
            for (i, &e) in m.iter().enumerate() {
                if e == 0 {
                    continue;
                }
                let v = if i < n { &x.0[i] } else { &y.0[i - n] };
                t = b.mul(&t, &b.pow(v, e as u64)?)?;
            }
            acc = b.add(&acc, &t);
        }
        Ok(acc)
    }

    pub fn add(&self, x: &WittVector<R::Elem>, y: &WittVector<R::Elem>) -> Result<WittVector<R::Elem>> {
        self.check(x)?;
        self.check(y)?;
        let polys = self.polys.clone();
        (0..self.n).map(|k| self.eval(&polys.sum_mod_p[k], x, y)).collect::<Result<Vec<_>>>().map(WittVector)
    }

    pub fn mul(&self, x: &WittVector<R::Elem>, y: &WittVector<R::Elem>) -> Result<WittVector<R::Elem>> {
        self.check(x)?;
        self.check(y)?;
        let polys = self.polys.clone();
        (0..self.n).map(|k| self.eval(&polys.prod_mod_p[k], x, y)).collect::<Result<Vec<_>>>().map(WittVector)
    }

    /// Solves x + y = 0 one component at a time; S_k is x_k + y_k plus lower terms.
    pub fn neg(&self, x: &WittVector<R::Elem>) -> Result<WittVector<R::Elem>> {
        self.check(x)?;
        let mut y = self.zero();
        for k in 0..self.n {
            let s = self.eval(&self.polys.sum_mod_p[k], x, &y)?;
            y.0[k] = self.base.neg(&s);
        }
        Ok(y)
    }

    pub fn sub(&self, x: &WittVector<R::Elem>, y: &WittVector<R::Elem>) -> Result<WittVector<R::Elem>> {
        self.add(x, &self.neg(y)?)
    }

    /// k·x by double-and-add; k is read modulo p^n.
    pub fn smul(&self, k: i64, x: &WittVector<R::Elem>) -> Result<WittVector<R::Elem>> {
        let q = self.p().pow(self.n as u32) as i64;
        let mut k = k.rem_euclid(q) as u64;
        let mut acc = self.zero();
        let mut base = x.clone();
        while k > 0 {
            if k & 1 == 1 {
                acc = self.add(&acc, &base)?;
            }
            k >>= 1;
            if k > 0 {
                base = self.add(&base, &base)?;
            }
        }
        Ok(acc)
    }

    pub fn from_int(&self, k: i64) -> Result<WittVector<R::Elem>> {
        self.smul(k, &self.one())
    }

    pub fn pow(&self, x: &WittVector<R::Elem>, mut e: u64) -> Result<WittVector<R::Elem>> {
        let mut acc = self.one();
        let mut base = x.clone();
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(&acc, &base)?;
            }
            e >>= 1;
            if e > 0 {
                base = self.mul(&base, &base)?;
            }
        }
        Ok(acc)
    }

    pub fn teichmuller(&self, a: &R::Elem) -> WittVector<R::Elem> {
        let mut v = self.zero();
        v.0[0] = a.clone();
        v
    }

    /// The truncation W_n → W_m.
    pub fn restrict(&self, x: &WittVector<R::Elem>, m: usize) -> Result<WittVector<R::Elem>> {
        self.check(x)?;
        if m > self.n {
            return Err(Error::Shape(format!("cannot restrict W_{} to W_{m}", self.n)));
        }
        Ok(WittVector(x.0[..m].to_vec()))
    }

    /// The shift W_{n−m} → W_n, (a_0, ..) ↦ (0, .., 0, a_0, ..).
    pub fn inject(&self, x: &WittVector<R::Elem>, m: usize) -> Result<WittVector<R::Elem>> {
        if m > self.n || x.len() != self.n - m {
            return Err(Error::Shape(format!("cannot shift a vector of length {} into W_{} by {m}", x.len(), self.n)));
        }
        let mut v = vec![self.base.zero(); m];
        v.extend(x.0.iter().cloned());
        Ok(WittVector(v))
    }

    /// Componentwise p-th power.
    pub fn frobenius(&self, x: &WittVector<R::Elem>) -> Result<WittVector<R::Elem>> {
        self.check(x)?;
        x.0.iter().map(|c| self.base.pow(c, self.p())).collect::<Result<Vec<_>>>().map(WittVector)
    }
}

impl WittRing<'_, FpAlgebra> {
    pub fn size(&self) -> u128 {
        self.base.size().pow(self.n as u32)
    }

    /// Index Σ idx(w_m)·|A|^m.
    pub fn index(&self, x: &WittVector<Vec<u64>>) -> usize {
        let s = self.base.size() as usize;
        x.0.iter().rev().fold(0, |acc, c| acc * s + self.base.index(c))
    }

    pub fn element(&self, mut idx: usize) -> WittVector<Vec<u64>> {
        let s = self.base.size() as usize;
        WittVector(
            (0..self.n)
                .map(|_| {
                    let c = self.base.element(idx % s);
                    idx /= s;
                    c
                })
                .collect(),
        )
    }

    pub fn elements(&self, cap: u64) -> Result<Vec<WittVector<Vec<u64>>>> {
        guard(self.size(), cap)?;
        Ok((0..self.size() as usize).map(|i| self.element(i)).collect())
    }

    /// Full operation tables, indexed as in `index`.
    pub fn to_finring(&self) -> Result<FinRing> {
        let size = self.size();
        guard(size, crate::finring::MAX_TABLE_ORDER as u64)?;
        let els: Vec<_> = (0..size as usize).map(|i| self.element(i)).collect();
        FinRing::from_ops(
            size as usize,
            0,
            self.index(&self.one()),
            |a, b| self.index(&self.add(&els[a], &els[b]).unwrap()),
            |a, b| self.index(&self.mul(&els[a], &els[b]).unwrap()),
        )
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn w2_f2_is_z4() {
        let f2 = FpAlgebra::prime_field(2).unwrap();
        let w = WittRing::new(&f2, 2).unwrap();
        let one = w.one();
        assert_eq!(w.add(&one, &one).unwrap(), WittVector(vec![vec![0], vec![1]]));
        // transport along (a0, a1) ↦ a0 + 2 a1
        let to_int = |v: &WittVector<Vec<u64>>| (v.0[0][0] + 2 * v.0[1][0]) % 4;
        let els = w.elements(16).unwrap();
        for x in &els {
            assert_eq!(w.mul(&one, x).unwrap(), *x);
            for y in &els {
                assert_eq!(to_int(&w.add(x, y).unwrap()), (to_int(x) + to_int(y)) % 4);
                assert_eq!(to_int(&w.mul(x, y).unwrap()), (to_int(x) * to_int(y)) % 4);
            }
        }
    }

    #[test]
    fn negation_and_scalars() {
        let f9 = FpAlgebra::galois_field(3, 2).unwrap();
        let w = WittRing::new(&f9, 2).unwrap();
        for x in w.elements(100).unwrap().iter().step_by(7) {
            assert!(w.is_zero(&w.add(x, &w.neg(x).unwrap()).unwrap()));
            assert!(w.is_zero(&w.smul(9, x).unwrap()));
        }
    }
}
