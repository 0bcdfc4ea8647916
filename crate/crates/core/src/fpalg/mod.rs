//! Finite-dimensional commutative F_p-algebras given by structure constants.

mod graded;
mod laurent;
mod present;

pub use graded::{GradedAlgebra, GradedElem, Monomial};
pub use laurent::{LaurentElem, LaurentPolys};
pub use present::{presentation_to_algebra, IntPoly, DEFAULT_DIM_CAP};

use crate::error::{guard, Error, Result};
use crate::finring::FinRing;
use crate::zpn_linalg::{Howell, Mat, Modulus, Solver};

pub type Elem = Vec<u64>;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FpAlgebra {
    fp: Modulus,
    dim: usize,
    labels: Vec<String>,
    /// c[i][j] = b_i·b_j in coordinates.
    consts: Vec<Vec<Elem>>,
    unit: Elem,
}

impl FpAlgebra {
    /// Validates commutativity, associativity and the unit on all basis triples.
    pub fn from_table(p: u64, labels: Vec<String>, consts: Vec<Vec<Elem>>, unit: Elem) -> Result<Self> {
        let fp = Modulus::new(p, 1)?;
        let dim = labels.len();
        if consts.len() != dim
            || consts.iter().any(|r| r.len() != dim || r.iter().any(|v| v.len() != dim))
            || unit.len() != dim
        {
            return Err(Error::Shape(format!("structure constants must be {dim}x{dim}x{dim}")));
        }
        let consts = consts
            .into_iter()
            .map(|r| r.into_iter().map(|v| v.into_iter().map(|x| x % p).collect()).collect())
            .collect();
        let unit = unit.into_iter().map(|x| x % p).collect();
        let a = FpAlgebra { fp, dim, labels, consts, unit };
        a.validate()?;
        Ok(a)
    }

    fn validate(&self) -> Result<()> {
        let d = self.dim;
        for i in 0..d {
            let bi = self.basis(i);
            if self.mul(&self.unit, &bi) != bi {
                return Err(Error::InvalidAlgebra(format!("unit fails on {}", self.labels[i])));
            }
            for j in 0..d {
                if self.consts[i][j] != self.consts[j][i] {
                    return Err(Error::InvalidAlgebra(format!(
                        "not commutative on ({}, {})",
                        self.labels[i], self.labels[j]
                    )));
                }
                for k in 0..d {
                    let l = self.mul(&self.consts[i][j], &self.basis(k));
                    let r = self.mul(&bi, &self.consts[j][k]);
                    if l != r {
                        return Err(Error::InvalidAlgebra(format!(
                            "not associative on ({}, {}, {})",
                            self.labels[i], self.labels[j], self.labels[k]
                        )));
                    }
                }
            }
        }
        Ok(())
    }

    pub fn prime_field(p: u64) -> Result<Self> {
        FpAlgebra::from_table(p, vec!["1".into()], vec![vec![vec![1]]], vec![1])
    }

    /// The zero ring, of dimension 0.
    pub fn zero_ring(p: u64) -> Result<Self> {
        FpAlgebra::from_table(p, vec![], vec![], vec![])
    }

    /// F_p[t]/(f) for monic f given by coefficients, constant term first.
    pub fn poly_quotient(p: u64, f: &[i64]) -> Result<Self> {
        let k = f.len().checked_sub(1).ok_or_else(|| Error::Precondition("empty polynomial".into()))?;
        if f[k].rem_euclid(p as i64) != 1 {
            return Err(Error::Precondition("polynomial must be monic".into()));
        }
        let fm: Vec<u64> = f.iter().map(|&c| c.rem_euclid(p as i64) as u64).collect();
        // reduce t^e for e < 2k-1
        let mut powers: Vec<Elem> = Vec::new();
        for e in 0..(2 * k).max(1) {
            if e < k {
                let mut v = vec![0; k];
                v[e] = 1;
                powers.push(v);
            } else {
                let prev = powers[e - 1].clone();
                let mut v = vec![0; k];
                for i in 1..k {
                    v[i] = prev[i - 1];
                }
                let top = prev[k - 1];
                for i in 0..k {
                    v[i] = (v[i] + p * p - top * fm[i] % p) % p;
                }
                powers.push(v);
            }
        }
        let labels = (0..k)
            .map(|e| match e {
                0 => "1".to_string(),
                1 => "t".to_string(),
                _ => format!("t^{e}"),
            })
            .collect();
        let consts = (0..k).map(|i| (0..k).map(|j| powers[i + j].clone()).collect()).collect();
        let mut unit = vec![0; k];
        if k > 0 {
            unit[0] = 1;
        }
        FpAlgebra::from_table(p, labels, consts, unit)
    }

    /// The field with p^k elements, built on the first irreducible monic polynomial of degree k.
    pub fn galois_field(p: u64, k: usize) -> Result<Self> {
        if k == 0 {
            return Err(Error::Precondition("degree must be positive".into()));
        }
        let f = first_irreducible(p, k);
        let fi: Vec<i64> = f.iter().map(|&c| c as i64).collect();
        FpAlgebra::poly_quotient(p, &fi)
    }

    pub fn product(&self, other: &FpAlgebra) -> Result<Self> {
        if self.p() != other.p() {
            return Err(Error::Precondition("factors must share the prime".into()));
        }
        let d = self.dim + other.dim;
        let mut labels: Vec<String> = self.labels.iter().map(|l| format!("({l},0)")).collect();
        labels.extend(other.labels.iter().map(|l| format!("(0,{l})")));
        let mut consts = vec![vec![vec![0; d]; d]; d];
        for i in 0..self.dim {
            for j in 0..self.dim {
                consts[i][j][..self.dim].copy_from_slice(&self.consts[i][j]);
            }
        }
        for i in 0..other.dim {
            for j in 0..other.dim {
                consts[self.dim + i][self.dim + j][self.dim..].copy_from_slice(&other.consts[i][j]);
            }
        }
        let mut unit = self.unit.clone();
        unit.extend_from_slice(&other.unit);
        FpAlgebra::from_table(self.p(), labels, consts, unit)
    }

    pub fn p(&self) -> u64 {
        self.fp.p()
    }
    pub fn field(&self) -> Modulus {
        self.fp
    }
    pub fn dim(&self) -> usize {
        self.dim
    }
    pub fn labels(&self) -> &[String] {
        &self.labels
    }
    pub fn structure_constants(&self) -> &Vec<Vec<Elem>> {
        &self.consts
    }
    pub fn size(&self) -> u128 {
        (self.p() as u128).pow(self.dim as u32)
    }

    pub fn zero(&self) -> Elem {
        vec![0; self.dim]
    }
    pub fn one(&self) -> Elem {
        self.unit.clone()
    }
    pub fn basis(&self, i: usize) -> Elem {
        let mut v = vec![0; self.dim];
        v[i] = 1;
        v
    }
    pub fn from_int(&self, k: i64) -> Elem {
        self.scale(self.fp.reduce(k), &self.unit)
    }
    pub fn is_zero(&self, a: &Elem) -> bool {
        a.iter().all(|&x| x == 0)
    }
    pub fn add(&self, a: &Elem, b: &Elem) -> Elem {
        a.iter().zip(b).map(|(x, y)| self.fp.add(*x, *y)).collect()
    }
    pub fn sub(&self, a: &Elem, b: &Elem) -> Elem {
        a.iter().zip(b).map(|(x, y)| self.fp.sub(*x, *y)).collect()
    }
    pub fn neg(&self, a: &Elem) -> Elem {
        a.iter().map(|x| self.fp.neg(*x)).collect()
    }
    pub fn scale(&self, t: u64, a: &Elem) -> Elem {
        a.iter().map(|x| self.fp.mul(t, *x)).collect()
    }
    pub fn mul(&self, a: &Elem, b: &Elem) -> Elem {
        let p = self.p();
        let mut out = vec![0u64; self.dim];
        for (i, &x) in a.iter().enumerate() {
            if x == 0 {
                continue;
            }
            for (j, &y) in b.iter().enumerate() {
                if y == 0 {
                    continue;
                }
                let xy = x * y % p;
                for (o, &c) in out.iter_mut().zip(&self.consts[i][j]) {
                    *o = (*o + xy * c) % p;
                }
            }
        }
        out
    }
    pub fn pow(&self, a: &Elem, mut e: u64) -> Elem {
        let mut base = a.clone();
        let mut acc = self.one();
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(&acc, &base);
            }
            base = self.mul(&base, &base);
            e >>= 1;
        }
        acc
    }
    pub fn frob(&self, a: &Elem) -> Elem {
        self.pow(a, self.p())
    }

    /// Base-p digits of the coordinates, lowest basis index least significant.
    pub fn index(&self, a: &Elem) -> usize {
        a.iter().rev().fold(0usize, |acc, &x| acc * self.p() as usize + x as usize)
    }
    pub fn element(&self, mut idx: usize) -> Elem {
        let p = self.p() as usize;
        (0..self.dim)
            .map(|_| {
                let d = idx % p;
                idx /= p;
                d as u64
            })
            .collect()
    }
    pub fn elements(&self, cap: u64) -> Result<Vec<Elem>> {
        guard(self.size(), cap)?;
        Ok((0..self.size() as usize).map(|i| self.element(i)).collect())
    }

    pub fn to_finring(&self) -> Result<FinRing> {
        let n = self.size();
        guard(n, crate::finring::MAX_TABLE_ORDER as u64)?;
        let els: Vec<Elem> = (0..n as usize).map(|i| self.element(i)).collect();
        FinRing::from_ops(
            n as usize,
            0,
            self.index(&self.unit),
            |a, b| self.index(&self.add(&els[a], &els[b])),
            |a, b| self.index(&self.mul(&els[a], &els[b])),
        )
    }

    /// Matrix whose row i is x·b_i.
    pub fn mult_matrix(&self, x: &Elem) -> Mat {
        (0..self.dim).map(|i| self.mul(x, &self.basis(i))).collect()
    }

    pub fn frobenius(&self) -> AlgebraMorphism {
        let images = (0..self.dim).map(|i| self.frob(&self.basis(i))).collect();
        AlgebraMorphism::new(self.clone(), self.clone(), images).expect("Frobenius is a ring map in characteristic p")
    }

    fn rank(&self, rows: &[Elem]) -> usize {
        Howell::new(self.fp, self.dim, rows).rows.len()
    }

    /// No nonzero nilpotents, equivalently Frobenius injective.
    pub fn is_reduced(&self) -> bool {
        self.rank(&self.frobenius().images) == self.dim
    }

    /// Frobenius bijective.
    pub fn is_perfect(&self) -> bool {
        self.is_reduced()
    }

    /// Basis of the nilradical: the kernel of a high Frobenius power.
    pub fn nilradical(&self) -> Mat {
        let mut e = 1u64;
        while (e as usize) < self.dim.max(1) {
            e *= self.p();
        }
        let rows: Mat = (0..self.dim).map(|i| self.pow(&self.basis(i), e)).collect();
        crate::zpn_linalg::left_kernel(self.fp, &rows, self.dim)
    }

    pub fn reduced_quotient(&self) -> Result<(FpAlgebra, AlgebraMorphism)> {
        self.quotient(&self.nilradical())
    }

    /// Quotient by the ideal spanned by the given vectors (checked to be an ideal).
    pub fn quotient(&self, ideal: &[Elem]) -> Result<(FpAlgebra, AlgebraMorphism)> {
        let h = Howell::new(self.fp, self.dim, ideal);
        for v in &h.rows {
            for i in 0..self.dim {
                if !h.contains(&self.mul(v, &self.basis(i))) {
                    return Err(Error::Precondition("subspace is not an ideal".into()));
                }
            }
        }
        let pivots: Vec<usize> = h.pivots.iter().map(|p| p.col).collect();
        let free: Vec<usize> = (0..self.dim).filter(|c| !pivots.contains(c)).collect();
        let coords = |v: &Elem| -> Elem {
            let r = h.reduce(v);
            free.iter().map(|&c| r[c]).collect()
        };
        let labels = free.iter().map(|&c| self.labels[c].clone()).collect();
        let consts = free
            .iter()
            .map(|&i| free.iter().map(|&j| coords(&self.consts[i][j])).collect())
            .collect();
        let q = FpAlgebra::from_table(self.p(), labels, consts, coords(&self.unit))?;
        let images = (0..self.dim).map(|i| coords(&self.basis(i))).collect();
        let m = AlgebraMorphism::new(self.clone(), q.clone(), images)?;
        Ok((q, m))
    }

    /// The idempotent limit of the powers of f.
    pub fn stable_idempotent(&self, f: &Elem) -> Elem {
        let mut seen: Vec<Elem> = vec![];
        let mut cur = f.clone();
        loop {
            if let Some(i) = seen.iter().position(|x| *x == cur) {
                let start = i + 1;
                let period = seen.len() + 1 - start;
                let mut n = period;
                while n < start {
                    n += period;
                }
                return self.pow(f, n as u64);
            }
            seen.push(cur.clone());
            cur = self.mul(&cur, f);
        }
    }

    /// A_f realised as e·A for the idempotent e attached to f.
    pub fn localize(&self, f: &Elem) -> Result<Localization> {
        let e = self.stable_idempotent(f);
        let span: Mat = (0..self.dim).map(|i| self.mul(&e, &self.basis(i))).collect();
        let basis = Howell::new(self.fp, self.dim, &span).rows;
        let r = basis.len();
        let solver = Solver::new(self.fp, &basis, self.dim);
        let coords = |v: &Elem| -> Result<Elem> {
            if r == 0 {
                return Ok(vec![]);
            }
            solver.solve(v).ok_or_else(|| Error::Check("element outside e·A".into()))
        };
        let labels = (0..r).map(|i| format!("e{i}")).collect();
        let mut consts = vec![vec![vec![]; r]; r];
        for i in 0..r {
            for j in 0..r {
                consts[i][j] = coords(&self.mul(&basis[i], &basis[j]))?;
            }
        }
        let local = FpAlgebra::from_table(self.p(), labels, consts, coords(&e)?)?;
        let images = (0..self.dim)
            .map(|i| coords(&self.mul(&e, &self.basis(i))))
            .collect::<Result<Vec<_>>>()?;
        let map = AlgebraMorphism::new(self.clone(), local.clone(), images)?;
        let loc = Localization { algebra: local, map, idempotent: e, element: f.clone(), embedding: basis };
        loc.verify()?;
        Ok(loc)
    }
}

/// The localization A → A_f with the idempotent cutting it out.
#[derive(Clone, Debug)]
pub struct Localization {
    pub algebra: FpAlgebra,
    pub map: AlgebraMorphism,
    pub idempotent: Elem,
    pub element: Elem,
    /// Row i is the i-th basis vector of A_f = e·A inside A.
    pub embedding: Mat,
}

impl Localization {
    /// The inclusion e·A ⊂ A (not unital unless e = 1).
    pub fn embed(&self, x: &Elem) -> Elem {
        let a = &self.map.domain;
        let mut out = a.zero();
        for (c, row) in x.iter().zip(&self.embedding) {
            out = a.add(&out, &a.scale(*c, row));
        }
        out
    }
}

impl Localization {
    /// f invertible in A_f, map surjective, kernel killed by a power of f.
    pub fn verify(&self) -> Result<()> {
        let a = &self.map.domain;
        let l = &self.algebra;
        let fl = self.map.apply(&self.element);
        let inv_exists = if l.dim() == 0 {
            true
        } else {
            let s = Solver::new(l.field(), &l.mult_matrix(&fl), l.dim());
            s.solve(&l.one()).is_some()
        };
        if !inv_exists {
            return Err(Error::Check("f is not invertible after localization".into()));
        }
        if l.dim() > 0 && Howell::new(l.field(), l.dim(), &self.map.images).rows.len() != l.dim() {
            return Err(Error::Check("localization map is not surjective".into()));
        }
        let big = a.pow(&self.element, (a.dim() + 1) as u64);
        for k in self.map.kernel_basis() {
            if !a.is_zero(&a.mul(&big, &k)) {
                return Err(Error::Check("kernel element not killed by a power of f".into()));
            }
        }
        Ok(())
    }
}

/// An F_p-algebra map given by the images of the basis.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AlgebraMorphism {
    pub domain: FpAlgebra,
    pub codomain: FpAlgebra,
    pub images: Mat,
}

impl AlgebraMorphism {
    pub fn new(domain: FpAlgebra, codomain: FpAlgebra, images: Mat) -> Result<Self> {
        if images.len() != domain.dim || images.iter().any(|v| v.len() != codomain.dim) {
            return Err(Error::Shape("morphism images have the wrong shape".into()));
        }
        let m = AlgebraMorphism { domain, codomain, images };
        if m.apply(&m.domain.unit) != m.codomain.unit {
            return Err(Error::IllDefined("unit is not sent to unit".into()));
        }
        for i in 0..m.domain.dim {
            for j in i..m.domain.dim {
                let lhs = m.apply(&m.domain.consts[i][j]);
                let rhs = m.codomain.mul(&m.images[i], &m.images[j]);
                if lhs != rhs {
                    return Err(Error::IllDefined(format!(
                        "not multiplicative on ({}, {})",
                        m.domain.labels[i], m.domain.labels[j]
                    )));
                }
            }
        }
        Ok(m)
    }

    pub fn identity(a: &FpAlgebra) -> Self {
        let images = (0..a.dim).map(|i| a.basis(i)).collect();
        AlgebraMorphism::new(a.clone(), a.clone(), images).unwrap()
    }

    pub fn apply(&self, x: &Elem) -> Elem {
        let c = &self.codomain;
        let mut out = c.zero();
        for (i, &xi) in x.iter().enumerate() {
            if xi != 0 {
                out = c.add(&out, &c.scale(xi, &self.images[i]));
            }
        }
        out
    }

    pub fn compose(&self, after: &AlgebraMorphism) -> Result<AlgebraMorphism> {
        if self.codomain != after.domain {
            return Err(Error::NotComposable(0));
        }
        let images = self.images.iter().map(|v| after.apply(v)).collect();
        AlgebraMorphism::new(self.domain.clone(), after.codomain.clone(), images)
    }

    pub fn kernel_basis(&self) -> Mat {
        crate::zpn_linalg::left_kernel(self.domain.fp, &self.images, self.codomain.dim)
    }

    pub fn is_injective(&self) -> bool {
        self.kernel_basis().is_empty()
    }

    pub fn is_identity(&self) -> bool {
        self.domain == self.codomain && (0..self.domain.dim).all(|i| self.images[i] == self.domain.basis(i))
    }
}

/// Frob_*(A): the group A with a acting on m by a^p·m.
#[derive(Clone, Debug)]
pub struct FrobPushforward {
    pub algebra: FpAlgebra,
    /// action[i] is the matrix of m ↦ b_i^p·m.
    pub action: Vec<Mat>,
}

impl FrobPushforward {
    pub fn act(&self, a: &Elem, m: &Elem) -> Elem {
        let alg = &self.algebra;
        alg.mul(&alg.frob(a), m)
    }
}

pub fn frobenius_pushforward_module(a: &FpAlgebra) -> FrobPushforward {
    let action = (0..a.dim()).map(|i| a.mult_matrix(&a.frob(&a.basis(i)))).collect();
    FrobPushforward { algebra: a.clone(), action }
}

fn poly_rem(p: u64, a: &[u64], b: &[u64]) -> Vec<u64> {
    // b monic
    let mut r = a.to_vec();
    let db = b.len() - 1;
    while r.len() > db {
        let top = *r.last().unwrap();
        let shift = r.len() - 1 - db;
        for (i, &c) in b.iter().enumerate() {
            r[shift + i] = (r[shift + i] + p * p - top * c % p) % p;
        }
        r.pop();
    }
    while r.last() == Some(&0) {
        r.pop();
    }
    r
}

fn first_irreducible(p: u64, k: usize) -> Vec<u64> {
    let count = p.pow(k as u32);
    'outer: for code in 0..count {
        let mut f: Vec<u64> = (0..k).map(|i| code / p.pow(i as u32) % p).collect();
        f.push(1);
        for d in 1..=k / 2 {
            for gc in 0..p.pow(d as u32) {
                let mut g: Vec<u64> = (0..d).map(|i| gc / p.pow(i as u32) % p).collect();
                g.push(1);
                if poly_rem(p, &f, &g).is_empty() {
                    continue 'outer;
                }
            }
        }
        return f;
    }
    unreachable!("irreducible polynomials exist in every degree")
}
