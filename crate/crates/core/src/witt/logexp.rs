//! Logarithm and exponential between (1 + i(W_n))^× ⊂ W_{n+1} and W_n, p odd.

use super::{CharPRing, WittRing, WittVector};
use crate::error::{Error, Result};

fn ensure_odd(p: u64) -> Result<()> {
    if p == 2 {
        return Err(Error::Precondition(
            "log/exp need p odd: for p = 2 the logarithm is an isogeny of degree two with kernel {1, -1}".into(),
        ));
    }
    Ok(())
}

fn valuation(p: u64, mut k: u64) -> u32 {
    let mut v = 0;
    while k.is_multiple_of(p) {
        k /= p;
        v += 1;
    }
    v
}

fn p_adic_unit_part_inverse(p: u64, n: usize, u: u64) -> i64 {
    let m = crate::zpn_linalg::Modulus::new(p, n as u32).unwrap();
    m.inv(u % m.q()).unwrap() as i64
}

/// log(1 − i(a)) = Σ_{k≥1} (p^{k−1}/k)·a^k, computed in W_n.
pub fn witt_log<R: CharPRing>(big: &WittRing<'_, R>, w: &WittVector<R::Elem>) -> Result<WittVector<R::Elem>> {
    let p = big.p();
    ensure_odd(p)?;
    let n = big.n - 1;
    if n == 0 {
        return Err(Error::Precondition("log needs length at least 2".into()));
    }
    if w.len() != big.n || w.0[0] != big.base.one() {
        return Err(Error::Precondition("argument must lie in 1 + i(W_n)".into()));
    }
    let small = WittRing::new(big.base, n)?;
    let d = big.sub(&big.one(), w)?;
    let a = WittVector(d.0[1..].to_vec());
    let mut acc = small.zero();
    let mut ak = a.clone();
    let mut k = 1u64;
    loop {
        let v = valuation(p, k);
        let e = (k - 1) as i64 - v as i64;
        if e >= n as i64 && k > 1 && (k - 1) as usize >= 2 * n + 2 {
            break;
        }
        if e < n as i64 {
            let unit = k / p.pow(v);
            let coef = p.pow(e as u32) as i64 * p_adic_unit_part_inverse(p, n, unit);
            acc = small.add(&acc, &small.smul(coef, &ak)?)?;
        }
        ak = small.mul(&ak, &a)?;
        k += 1;
    }
    Ok(acc)
}

/// Inverse of `witt_log`: t ↦ 1 − i(Σ_{k≥1} (−1)^{k−1} (p^{k−1}/k!)·t^k).
pub fn witt_exp<R: CharPRing>(big: &WittRing<'_, R>, t: &WittVector<R::Elem>) -> Result<WittVector<R::Elem>> {
    let p = big.p();
    ensure_odd(p)?;
    let n = big.n - 1;
    if n == 0 || t.len() != n {
        return Err(Error::Precondition("exp takes an element of W_n into W_{n+1}".into()));
    }
    let small = WittRing::new(big.base, n)?;
    let mut acc = small.zero();
    let mut tk = t.clone();
    let mut fact_v = 0u32;
    let mut fact_unit: u64 = 1;
    let q = p.pow(n as u32);
    let mut k = 1u64;
    loop {
        fact_v += valuation(p, k);
        fact_unit = fact_unit * ((k / p.pow(valuation(p, k))) % q) % q;
        let e = (k - 1) as i64 - fact_v as i64;
        if e < 0 {
            return Err(Error::Check("exp coefficient is not p-integral".into()));
        }
        if e < n as i64 {
            let mut coef = p.pow(e as u32) as i64 * p_adic_unit_part_inverse(p, n, fact_unit);
            if k.is_multiple_of(2) {
                coef = -coef;
            }
            acc = small.add(&acc, &small.smul(coef, &tk)?)?;
        } else if (k - 1) as usize >= 2 * n + 2 {
            break;
        }
        tk = small.mul(&tk, t)?;
        k += 1;
    }
    big.sub(&big.one(), &big.inject(&acc, 1)?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fpalg::FpAlgebra;

    #[test]
    fn p2_rejected() {
        let f2 = FpAlgebra::prime_field(2).unwrap();
        let w = WittRing::new(&f2, 2).unwrap();
        assert!(witt_log(&w, &w.one()).is_err());
    }

    #[test]
    fn log_of_one_is_zero() {
        let f3 = FpAlgebra::prime_field(3).unwrap();
        let w = WittRing::new(&f3, 3).unwrap();
        assert!(WittRing::new(&f3, 2).unwrap().is_zero(&witt_log(&w, &w.one()).unwrap()));
    }

    #[test]
    fn first_order_log() {
        // n = 1: i(x)^2 = 3 i(x^2) = 0 in W_2, so log(1 − i(x)) = x
        let a = FpAlgebra::poly_quotient(3, &[0, 1, 1]).unwrap();
        let w = WittRing::new(&a, 2).unwrap();
        for x in a.elements(9).unwrap() {
            let arg = w.sub(&w.one(), &w.inject(&WittVector(vec![x.clone()]), 1).unwrap()).unwrap();
            assert_eq!(witt_log(&w, &arg).unwrap(), WittVector(vec![x]));
        }
    }
}
