//! Universal Witt addition and multiplication polynomials over the integers.

use crate::error::{Error, Result};
use num_bigint::BigInt;
use num_traits::{One, Signed, ToPrimitive, Zero};
use std::collections::{BTreeMap, HashMap};
use std::sync::{Arc, Mutex, OnceLock};

/// Integer polynomial in x_0..x_{n-1}, y_0..y_{n-1} (x_i has index i, y_i has index n+i).
pub type IntPolynomial = BTreeMap<Vec<u32>, BigInt>;

fn padd(a: &IntPolynomial, b: &IntPolynomial, sign: i32) -> IntPolynomial {
    let mut out = a.clone();
    for (m, c) in b {
        let e = out.entry(m.clone()).or_insert_with(BigInt::zero);
        if sign > 0 {
            *e += c;
        } else {
            *e -= c;
        }
    }
    out.retain(|_, c| !c.is_zero());
    out
}

fn pmul(a: &IntPolynomial, b: &IntPolynomial) -> IntPolynomial {
    let mut out = IntPolynomial::new();
    for (ma, ca) in a {
        for (mb, cb) in b {
            let m: Vec<u32> = ma.iter().zip(mb).map(|(x, y)| x + y).collect();
            *out.entry(m).or_insert_with(BigInt::zero) += ca * cb;
        }
    }
    out.retain(|_, c| !c.is_zero());
    out
}

fn ppow(a: &IntPolynomial, mut e: u64, nvars: usize) -> IntPolynomial {
    let mut acc = constant(nvars, 1);
    let mut base = a.clone();
    while e > 0 {
        if e & 1 == 1 {
            acc = pmul(&acc, &base);
        }
        e >>= 1;
        if e > 0 {
            base = pmul(&base, &base);
        }
    }
    acc
}

fn pscale(a: &IntPolynomial, t: &BigInt) -> IntPolynomial {
    let mut out: IntPolynomial = a.iter().map(|(m, c)| (m.clone(), c * t)).collect();
    out.retain(|_, c| !c.is_zero());
    out
}

fn constant(nvars: usize, c: i64) -> IntPolynomial {
    let mut out = IntPolynomial::new();
    if c != 0 {
        out.insert(vec![0; nvars], BigInt::from(c));
    }
    out
}

fn variable(nvars: usize, i: usize) -> IntPolynomial {
    let mut m = vec![0; nvars];
    m[i] = 1;
    let mut out = IntPolynomial::new();
    out.insert(m, BigInt::one());
    out
}

/// Sum polynomials S_k and product polynomials P_k for k < n.
#[derive(Debug)]
pub struct WittPolynomials {
    pub p: u64,
    pub n: usize,
    pub sum: Vec<IntPolynomial>,
    pub prod: Vec<IntPolynomial>,
    /// The same polynomials with coefficients reduced mod p, zero terms dropped.
    pub sum_mod_p: Vec<Vec<(Vec<u32>, u64)>>,
    pub prod_mod_p: Vec<Vec<(Vec<u32>, u64)>>,
}

impl WittPolynomials {
    /// Ghost-component recursion; every division by p^k is checked to be exact.
    pub fn compute(p: u64, n: usize) -> Result<Self> {
        if !crate::zpn_linalg::is_prime(p) {
            return Err(Error::NotPrime(p));
        }
        if n == 0 {
            return Err(Error::Precondition("length must be at least 1".into()));
        }
        let nv = 2 * n;
        let pb = BigInt::from(p);
        let xs: Vec<IntPolynomial> = (0..n).map(|i| variable(nv, i)).collect();
        let ys: Vec<IntPolynomial> = (0..n).map(|i| variable(nv, n + i)).collect();
        let ghost = |v: &[IntPolynomial], k: usize| -> IntPolynomial {
            let mut acc = IntPolynomial::new();
            for (i, vi) in v.iter().enumerate().take(k + 1) {
                let t = ppow(vi, p.pow((k - i) as u32), nv);
                acc = padd(&acc, &pscale(&t, &pb.pow(i as u32)), 1);
            }
            acc
        };
        let mut sum: Vec<IntPolynomial> = Vec::new();
        let mut prod: Vec<IntPolynomial> = Vec::new();
        for k in 0..n {
            let gs = padd(&ghost(&xs, k), &ghost(&ys, k), 1);
            let gp = pmul(&ghost(&xs, k), &ghost(&ys, k));
            let s = Self::solve_level(&sum, gs, k, p, nv)?;
            let q = Self::solve_level(&prod, gp, k, p, nv)?;
            sum.push(s);
            prod.push(q);
        }
        let reduce = |v: &Vec<IntPolynomial>| -> Vec<Vec<(Vec<u32>, u64)>> {
            v.iter()
                .map(|poly| {
                    poly.iter()
                        .filter_map(|(m, c)| {
                            let r = ((c % &pb) + &pb) % &pb;
                            let r = r.to_u64().unwrap();
                            (r != 0).then(|| (m.clone(), r))
                        })
                        .collect()
                })
                .collect()
        };
        let sum_mod_p = reduce(&sum);
        let prod_mod_p = reduce(&prod);
        Ok(WittPolynomials { p, n, sum, prod, sum_mod_p, prod_mod_p })
    }

    fn solve_level(prev: &[IntPolynomial], target: IntPolynomial, k: usize, p: u64, nv: usize) -> Result<IntPolynomial> {
        let pb = BigInt::from(p);
        let mut rest = target;
        for (i, pi) in prev.iter().enumerate() {
            let t = ppow(pi, p.pow((k - i) as u32), nv);
            rest = padd(&rest, &pscale(&t, &pb.pow(i as u32)), -1);
        }
        let d = pb.pow(k as u32);
        let mut out = IntPolynomial::new();
        for (m, c) in rest {
            if !(&c % &d).is_zero() {
                return Err(Error::Check(format!("ghost recursion: coefficient {c} not divisible by {d} at level {k}")));
            }
            out.insert(m, c / &d);
        }
        Ok(out)
    }

    /// Cached per (p, n).
    pub fn get(p: u64, n: usize) -> Result<Arc<WittPolynomials>> {
        static CACHE: OnceLock<Mutex<HashMap<(u64, usize), Arc<WittPolynomials>>>> = OnceLock::new();
        let cache = CACHE.get_or_init(|| Mutex::new(HashMap::new()));
        if let Some(w) = cache.lock().unwrap().get(&(p, n)) {
            return Ok(w.clone());
        }
        let w = Arc::new(WittPolynomials::compute(p, n)?);
        cache.lock().unwrap().entry((p, n)).or_insert(w.clone());
        Ok(w)
    }

    /// S_k has weight p^k; P_k has weight p^k separately in the x and the y variables.
    pub fn is_isobaric(&self) -> bool {
        let n = self.n;
        let w = |m: &Vec<u32>, range: std::ops::Range<usize>| -> u64 {
            range.map(|i| m[i] as u64 * self.p.pow((i % n) as u32)).sum()
        };
        (0..n).all(|k| {
            let target = self.p.pow(k as u32);
            self.sum[k].keys().all(|m| w(m, 0..2 * n) == target)
                && self.prod[k].keys().all(|m| w(m, 0..n) == target && w(m, n..2 * n) == target)
        })
    }

    /// Evaluates S_k or P_k at integer arguments.
    pub fn eval_int(poly: &IntPolynomial, args: &[BigInt]) -> BigInt {
        let mut acc = BigInt::zero();
        for (m, c) in poly {
            let mut t = c.clone();
            for (a, &e) in args.iter().zip(m) {
                if e > 0 {
                    t *= a.pow(e);
                }
            }
            acc += t;
        }
        acc
    }

    pub fn ghost_int(p: u64, x: &[BigInt], k: usize) -> BigInt {
        let pb = BigInt::from(p);
        (0..=k).map(|i| pb.pow(i as u32) * x[i].pow(p.pow((k - i) as u32) as u32)).sum()
    }

    /// Human-readable form of a polynomial, variables named x_i and y_i.
    pub fn format(&self, poly: &IntPolynomial) -> String {
        let n = self.n;
        let mut parts = Vec::new();
        for (m, c) in poly.iter().rev() {
            let mut mon = Vec::new();
            for (i, &e) in m.iter().enumerate() {
                if e == 0 {
                    continue;
                }
                let v = if i < n { format!("x{}", i) } else { format!("y{}", i - n) };
                mon.push(if e == 1 { v } else { format!("{v}^{e}") });
            }
            let body = mon.join("*");
            let abs = c.abs();
            let coef = if abs.is_one() && !body.is_empty() { String::new() } else { abs.to_string() };
            let term = match (coef.is_empty(), body.is_empty()) {
                (true, _) => body,
                (false, true) => coef,
                (false, false) => format!("{coef}*{body}"),
            };
            parts.push((c.is_negative(), term));
        }
        let mut s = String::new();
        for (i, (neg, t)) in parts.into_iter().enumerate() {
            match (i, neg) {
                (0, true) => s.push_str(&format!("-{t}")),
                (0, false) => s.push_str(&t),
                (_, true) => s.push_str(&format!(" - {t}")),
                (_, false) => s.push_str(&format!(" + {t}")),
            }
        }
        if s.is_empty() {
            "0".into()
        } else {
            s
        }
    }
}

/// Parses a monomial list like [(exps, coeff)] into the polynomial type.
pub fn int_polynomial(terms: &[(Vec<u32>, i64)]) -> IntPolynomial {
    let mut out = IntPolynomial::new();
    for (m, c) in terms {
        *out.entry(m.clone()).or_insert_with(BigInt::zero) += BigInt::from(*c);
    }
    out.retain(|_, c| !c.is_zero());
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn low_level_polynomials() {
        let w = WittPolynomials::compute(2, 2).unwrap();
        // x0 x1 y0 y1
        let s1 = int_polynomial(&[(vec![0, 1, 0, 0], 1), (vec![0, 0, 0, 1], 1), (vec![1, 0, 1, 0], -1)]);
        assert_eq!(w.sum[1], s1);
        let p1 = int_polynomial(&[(vec![2, 0, 0, 1], 1), (vec![0, 1, 2, 0], 1), (vec![0, 1, 0, 1], 2)]);
        assert_eq!(w.prod[1], p1);
        for p in [2, 3, 5] {
            let w = WittPolynomials::compute(p, 1).unwrap();
            assert_eq!(w.sum[0], int_polynomial(&[(vec![1, 0], 1), (vec![0, 1], 1)]));
            assert_eq!(w.prod[0], int_polynomial(&[(vec![1, 1], 1)]));
        }
    }

    #[test]
    fn isobaric() {
        for (p, n) in [(2, 3), (3, 2), (5, 2)] {
            assert!(WittPolynomials::compute(p, n).unwrap().is_isobaric());
        }
    }
}
