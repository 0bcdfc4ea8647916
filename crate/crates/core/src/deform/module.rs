//! Finite modules over a finite F_p-algebra, as F_p-spaces with action matrices.

use crate::error::{Error, Result};
use crate::fpalg::{Elem, FpAlgebra};
use crate::zpn_linalg::{mat_mul, vec_mat, Howell, Mat, Modulus};

/// An A-module of finite F_p-dimension. Row r of `action[i]` is b_i·e_r.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AModule {
    pub base: FpAlgebra,
    pub dim: usize,
    pub action: Vec<Mat>,
}

fn identity(n: usize) -> Mat {
    (0..n).map(|i| (0..n).map(|j| u64::from(i == j)).collect()).collect()
}

impl AModule {
    pub fn new(base: &FpAlgebra, dim: usize, action: Vec<Mat>) -> Result<Self> {
        let m = AModule { base: base.clone(), dim, action };
        if m.action.len() != base.dim() || m.action.iter().any(|a| a.len() != dim || a.iter().any(|r| r.len() != dim)) {
            return Err(Error::Shape(format!("need {} action matrices of size {dim}", base.dim())));
        }
        let f = m.field();
        if m.matrix_of(&base.one()) != identity(dim) {
            return Err(Error::InvalidAlgebra("unit does not act as the identity".into()));
        }
        for i in 0..base.dim() {
            for j in 0..base.dim() {
                let prod = base.mul(&base.basis(i), &base.basis(j));
                if mat_mul(f, &m.action[j], &m.action[i], dim) != m.matrix_of(&prod) {
                    return Err(Error::InvalidAlgebra(format!("action is not multiplicative on basis pair ({i}, {j})")));
                }
            }
        }
        Ok(m)
    }

    pub fn zero_module(base: &FpAlgebra) -> Self {
        AModule { base: base.clone(), dim: 0, action: vec![vec![]; base.dim()] }
    }

    /// A^r, coordinates j·dim A + l for the l-th basis coefficient of the j-th entry.
    pub fn free(base: &FpAlgebra, r: usize) -> Self {
        let n = base.dim();
        let action = (0..n)
            .map(|i| {
                let mm = base.mult_matrix(&base.basis(i));
                let mut out = vec![vec![0; r * n]; r * n];
                for j in 0..r {
                    for l in 0..n {
                        for k in 0..n {
                            out[j * n + l][j * n + k] = mm[l][k];
                        }
                    }
                }
                out
            })
            .collect();
        AModule { base: base.clone(), dim: r * n, action }
    }

    /// Frob_*(A): a acts by multiplication with a^p.
    pub fn frob_pushforward(base: &FpAlgebra) -> Self {
        AModule::free(base, 1).frob_twist()
    }

    /// Frob_*(M): a acts as a^p.
    pub fn frob_twist(&self) -> Self {
        let action = (0..self.base.dim()).map(|i| self.matrix_of(&self.base.frob(&self.base.basis(i)))).collect();
        AModule { base: self.base.clone(), dim: self.dim, action }
    }

    pub fn field(&self) -> Modulus {
        self.base.field()
    }
    pub fn p(&self) -> u64 {
        self.base.p()
    }
    pub fn size(&self) -> u128 {
        (self.p() as u128).pow(self.dim as u32)
    }
    pub fn zero(&self) -> Elem {
        vec![0; self.dim]
    }
    pub fn basis(&self, i: usize) -> Elem {
        let mut v = self.zero();
        v[i] = 1;
        v
    }
    pub fn index(&self, v: &[u64]) -> usize {
        let p = self.p() as usize;
        v.iter().rev().fold(0, |acc, &x| acc * p + x as usize)
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
    pub fn add(&self, a: &[u64], b: &[u64]) -> Elem {
        let f = self.field();
        a.iter().zip(b).map(|(x, y)| f.add(*x, *y)).collect()
    }
    pub fn sub(&self, a: &[u64], b: &[u64]) -> Elem {
        let f = self.field();
        a.iter().zip(b).map(|(x, y)| f.sub(*x, *y)).collect()
    }
    pub fn neg(&self, a: &[u64]) -> Elem {
        let f = self.field();
        a.iter().map(|x| f.neg(*x)).collect()
    }
    pub fn scale(&self, t: u64, a: &[u64]) -> Elem {
        let f = self.field();
        a.iter().map(|x| f.mul(t % f.q(), *x)).collect()
    }

    /// Matrix of m ↦ a·m.
    pub fn matrix_of(&self, a: &Elem) -> Mat {
        let f = self.field();
        let mut out = vec![vec![0; self.dim]; self.dim];
        for (i, &c) in a.iter().enumerate() {
            if c == 0 {
                continue;
            }
            for (orow, arow) in out.iter_mut().zip(&self.action[i]) {
                for (o, &x) in orow.iter_mut().zip(arow) {
                    *o = f.add(*o, f.mul(c, x));
                }
            }
        }
        out
    }

    pub fn act(&self, a: &Elem, m: &[u64]) -> Elem {
        if self.dim == 0 {
            return vec![];
        }
        vec_mat(self.field(), m, &self.matrix_of(a), self.dim)
    }

    /// Restriction of scalars along g: A' → A.
    pub fn restrict(&self, g: &crate::fpalg::AlgebraMorphism) -> Result<Self> {
        if g.codomain != self.base {
            return Err(Error::Shape("restriction along a map into a different algebra".into()));
        }
        let a2 = &g.domain;
        let action = (0..a2.dim()).map(|i| self.matrix_of(&g.apply(&a2.basis(i)))).collect();
        Ok(AModule { base: a2.clone(), dim: self.dim, action })
    }

    /// Quotient by the submodule spanned by `rows` over F_p (checked to be A-stable).
    pub fn quotient(&self, rows: &[Vec<u64>]) -> Result<Quotient> {
        let f = self.field();
        let h = Howell::new(f, self.dim, rows);
        for r in &h.rows {
            for i in 0..self.base.dim() {
                if !h.contains(&vec_mat(f, r, &self.action[i], self.dim)) {
                    return Err(Error::IllDefined("span is not an A-submodule".into()));
                }
            }
        }
        let pivots: Vec<usize> = h.pivots.iter().map(|p| p.col).collect();
        let free_cols: Vec<usize> = (0..self.dim).filter(|c| !pivots.contains(c)).collect();
        let proj_of = |v: &[u64]| -> Elem {
            let r = h.reduce(v);
            free_cols.iter().map(|&c| r[c]).collect()
        };
        let qd = free_cols.len();
        let action = (0..self.base.dim())
            .map(|i| free_cols.iter().map(|&c| proj_of(&self.action[i][c])).collect())
            .collect();
        let target = AModule { base: self.base.clone(), dim: qd, action };
        let matrix: Mat = (0..self.dim).map(|i| proj_of(&self.basis(i))).collect();
        let projection = AModuleMap::new(self.clone(), target, matrix)?;
        Ok(Quotient { projection, sub: h, free_cols })
    }
}

/// A quotient map with a coordinate section.
#[derive(Clone, Debug)]
pub struct Quotient {
    pub projection: AModuleMap,
    pub sub: Howell,
    free_cols: Vec<usize>,
}

impl Quotient {
    /// The lift supported on the complementary coordinates.
    pub fn lift(&self, q: &[u64]) -> Elem {
        let mut v = self.projection.source.zero();
        for (&c, &x) in self.free_cols.iter().zip(q) {
            v[c] = x;
        }
        v
    }
}

/// An A-linear map; row i of `matrix` is the image of the i-th basis vector.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AModuleMap {
    pub source: AModule,
    pub target: AModule,
    pub matrix: Mat,
}

impl AModuleMap {
    pub fn new(source: AModule, target: AModule, matrix: Mat) -> Result<Self> {
        if source.base != target.base || matrix.len() != source.dim || matrix.iter().any(|r| r.len() != target.dim) {
            return Err(Error::Shape("module map has the wrong shape".into()));
        }
        let m = AModuleMap { source, target, matrix };
        let f = m.source.field();
        for i in 0..m.source.base.dim() {
            let lhs = mat_mul(f, &m.source.action[i], &m.matrix, m.target.dim);
            let rhs = mat_mul(f, &m.matrix, &m.target.action[i], m.target.dim);
            if lhs != rhs {
                return Err(Error::IllDefined(format!("map is not linear for basis element {i}")));
            }
        }
        Ok(m)
    }

    pub fn identity(m: &AModule) -> Self {
        AModuleMap { source: m.clone(), target: m.clone(), matrix: identity(m.dim) }
    }

    pub fn scalar(m: &AModule, t: u64) -> Self {
        let f = m.field();
        let t = t % f.q();
        AModuleMap { source: m.clone(), target: m.clone(), matrix: identity(m.dim).into_iter().map(|r| r.into_iter().map(|x| f.mul(x, t)).collect()).collect() }
    }

    pub fn apply(&self, x: &[u64]) -> Elem {
        if self.target.dim == 0 {
            return vec![];
        }
        vec_mat(self.source.field(), x, &self.matrix, self.target.dim)
    }

    pub fn compose(&self, after: &AModuleMap) -> Result<AModuleMap> {
        if self.target != after.source {
            return Err(Error::NotComposable(0));
        }
        Ok(AModuleMap {
            source: self.source.clone(),
            target: after.target.clone(),
            matrix: mat_mul(self.source.field(), &self.matrix, &after.matrix, after.target.dim),
        })
    }

    pub fn rank(&self) -> usize {
        Howell::new(self.source.field(), self.target.dim, &self.matrix).rows.len()
    }
    pub fn is_injective(&self) -> bool {
        self.rank() == self.source.dim
    }
    pub fn is_surjective(&self) -> bool {
        self.rank() == self.target.dim
    }

    /// A preimage of y when one exists.
    pub fn preimage(&self, y: &[u64]) -> Option<Elem> {
        if self.source.dim == 0 {
            return y.iter().all(|&x| x == 0).then(Vec::new);
        }
        crate::zpn_linalg::Solver::new(self.source.field(), &self.matrix, self.target.dim).solve(y)
    }
}

/// Frobenius A → Frob_*(A) as an A-linear map.
pub fn frobenius_map(a: &FpAlgebra) -> AModuleMap {
    let matrix = (0..a.dim()).map(|i| a.frob(&a.basis(i))).collect();
    AModuleMap { source: AModule::free(a, 1), target: AModule::frob_pushforward(a), matrix }
}
