use std::collections::BTreeMap;

/// Sparse Laurent polynomial: exponent vector to nonzero coefficient.
pub type LaurentElem = BTreeMap<Vec<i32>, u64>;

/// F_p[x_1^{±1}, .., x_d^{±1}], used for chart computations.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LaurentPolys {
    p: u64,
    nvars: usize,
}

impl LaurentPolys {
    pub fn new(p: u64, nvars: usize) -> Self {
        LaurentPolys { p, nvars }
    }
    pub fn p(&self) -> u64 {
        self.p
    }
    pub fn nvars(&self) -> usize {
        self.nvars
    }
    pub fn zero(&self) -> LaurentElem {
        LaurentElem::new()
    }
    pub fn monomial(&self, e: Vec<i32>, c: u64) -> LaurentElem {
        let mut out = LaurentElem::new();
        if !c.is_multiple_of(self.p) {
            out.insert(e, c % self.p);
        }
        out
    }
    pub fn one(&self) -> LaurentElem {
        self.monomial(vec![0; self.nvars], 1)
    }
    pub fn from_int(&self, k: i64) -> LaurentElem {
        self.monomial(vec![0; self.nvars], k.rem_euclid(self.p as i64) as u64)
    }
    pub fn add(&self, a: &LaurentElem, b: &LaurentElem) -> LaurentElem {
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
    pub fn neg(&self, a: &LaurentElem) -> LaurentElem {
        a.iter().map(|(m, &c)| (m.clone(), (self.p - c) % self.p)).collect()
    }
    pub fn mul(&self, a: &LaurentElem, b: &LaurentElem) -> LaurentElem {
        let mut out = LaurentElem::new();
        for (ma, &ca) in a {
            for (mb, &cb) in b {
                let m: Vec<i32> = ma.iter().zip(mb).map(|(x, y)| x + y).collect();
                let e = out.entry(m).or_insert(0);
                *e = (*e + ca * cb) % self.p;
            }
        }
        out.retain(|_, c| *c != 0);
        out
    }
    /// Regular on the chart where only x_i is inverted.
    pub fn regular_on_chart(&self, a: &LaurentElem, i: usize) -> bool {
        a.keys().all(|m| m.iter().enumerate().all(|(j, &e)| j == i || e >= 0))
    }
    pub fn is_polynomial(&self, a: &LaurentElem) -> bool {
        a.keys().all(|m| m.iter().all(|&e| e >= 0))
    }
    /// Component-wise p-th root, if every exponent and hence the element is a p-th power.
    pub fn frob_root(&self, a: &LaurentElem) -> Option<LaurentElem> {
        let p = self.p as i32;
        let mut out = LaurentElem::new();
        for (m, &c) in a {
            if m.iter().any(|e| e.rem_euclid(p) != 0) {
                return None;
            }
            out.insert(m.iter().map(|e| e / p).collect(), c);
        }
        Some(out)
    }
}
