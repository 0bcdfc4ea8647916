use crate::error::{Error, Result};
use serde::Serialize;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

pub fn is_prime(p: u64) -> bool {
    if p < 2 {
        return false;
    }
    let mut d = 2;
    while d * d <= p {
        if p.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

/// The ring Z/p^n with p^n < 2^31.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct Modulus {
    p: u64,
    n: u32,
    q: u64,
}

impl Modulus {
    pub fn new(p: u64, n: u32) -> Result<Self> {
        if !is_prime(p) {
            return Err(Error::NotPrime(p));
        }
        if n == 0 {
            return Err(Error::Precondition("exponent n must be at least 1".into()));
        }
        let mut q: u64 = 1;
        for _ in 0..n {
            q = q
                .checked_mul(p)
                .filter(|&v| v < (1u64 << 31))
                .ok_or(Error::ModulusTooLarge { p, n })?;
        }
        Ok(Modulus { p, n, q })
    }

    pub fn p(&self) -> u64 {
        self.p
    }
    pub fn n(&self) -> u32 {
        self.n
    }
    pub fn q(&self) -> u64 {
        self.q
    }

    pub fn reduce(&self, x: i64) -> u64 {
        x.rem_euclid(self.q as i64) as u64
    }
    pub fn add(&self, a: u64, b: u64) -> u64 {
        (a + b) % self.q
    }
    pub fn sub(&self, a: u64, b: u64) -> u64 {
        (a + self.q - b % self.q) % self.q
    }
    pub fn neg(&self, a: u64) -> u64 {
        (self.q - a % self.q) % self.q
    }
    pub fn mul(&self, a: u64, b: u64) -> u64 {
        // both operands < 2^31, so the product fits in u64
        (a % self.q) * (b % self.q) % self.q
    }
    pub fn pow(&self, a: u64, mut e: u64) -> u64 {
        let mut base = a % self.q;
        let mut acc = 1 % self.q;
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(acc, base);
            }
            base = self.mul(base, base);
            e >>= 1;
        }
        acc
    }
    /// p^v, saturating to 0 once v >= n.
    pub fn p_pow(&self, v: u32) -> u64 {
        if v >= self.n {
            0
        } else {
            self.p.pow(v)
        }
    }
    /// p-adic valuation, with valuation(0) = n.
    pub fn valuation(&self, a: u64) -> u32 {
        let mut a = a % self.q;
        if a == 0 {
            return self.n;
        }
        let mut v = 0;
        while a.is_multiple_of(self.p) {
            a /= self.p;
            v += 1;
        }
        v
    }
    pub fn is_unit(&self, a: u64) -> bool {
        !a.is_multiple_of(self.p)
    }
    pub fn inv(&self, a: u64) -> Option<u64> {
        let a = a % self.q;
        if !self.is_unit(a) {
            return None;
        }
        let (mut r0, mut r1) = (self.q as i64, a as i64);
        let (mut s0, mut s1) = (0i64, 1i64);
        while r1 != 0 {
            let t = r0 / r1;
            (r0, r1) = (r1, r0 - t * r1);
            (s0, s1) = (s1, s0 - t * s1);
        }
        Some(self.reduce(s0))
    }
    /// Image of an integer coefficient; division by units is the caller's job.
    pub fn from_big(&self, x: &num_bigint::BigInt) -> u64 {
        use num_traits::ToPrimitive;
        let q = num_bigint::BigInt::from(self.q);
        let r = ((x % &q) + &q) % &q;
        r.to_u64().unwrap()
    }
    /// Reduce modulo p^m for m <= n.
    pub fn truncate(&self, m: u32) -> Result<Modulus> {
        Modulus::new(self.p, m)
    }
}

impl fmt::Display for Modulus {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Z/{}^{}", self.p, self.n)
    }
}

/// A residue class in Z/p^n.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Zpn {
    pub modulus: Modulus,
    pub value: u64,
}

impl Zpn {
    pub fn new(modulus: Modulus, value: i64) -> Self {
        Zpn { modulus, value: modulus.reduce(value) }
    }
    pub fn valuation(&self) -> u32 {
        self.modulus.valuation(self.value)
    }
    pub fn inv(&self) -> Option<Zpn> {
        self.modulus.inv(self.value).map(|v| Zpn { modulus: self.modulus, value: v })
    }
    fn check(&self, other: &Zpn) {
        assert_eq!(self.modulus, other.modulus, "mixed moduli in Z/p^n arithmetic");
    }
}

impl Add for Zpn {
    type Output = Zpn;
    fn add(self, o: Zpn) -> Zpn {
        self.check(&o);
        Zpn { modulus: self.modulus, value: self.modulus.add(self.value, o.value) }
    }
}
impl Sub for Zpn {
    type Output = Zpn;
    fn sub(self, o: Zpn) -> Zpn {
        self.check(&o);
        Zpn { modulus: self.modulus, value: self.modulus.sub(self.value, o.value) }
    }
}
impl Mul for Zpn {
    type Output = Zpn;
    fn mul(self, o: Zpn) -> Zpn {
        self.check(&o);
        Zpn { modulus: self.modulus, value: self.modulus.mul(self.value, o.value) }
    }
}
impl Neg for Zpn {
    type Output = Zpn;
    fn neg(self) -> Zpn {
        Zpn { modulus: self.modulus, value: self.modulus.neg(self.value) }
    }
}
impl fmt::Display for Zpn {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.value)
    }
}

pub fn binomial(n: u64, k: u64) -> u128 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    let mut r: u128 = 1;
    for i in 0..k {
        r = r * (n - i) as u128 / (i + 1) as u128;
    }
    r
}

pub fn factorial(n: u64) -> u128 {
    (1..=n as u128).product()
}
