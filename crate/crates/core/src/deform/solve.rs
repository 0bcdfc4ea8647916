//! Linear systems for unknown maps δ: X → N between finite F_p-spaces.

use crate::fpalg::Elem;
use crate::zpn_linalg::{left_kernel, Mat, Modulus, Solver};

/// Σ δ(x)·M = rhs, M a dim N × |rhs| matrix acting on row vectors.
pub(crate) struct Equation {
    pub terms: Vec<(usize, Mat)>,
    pub rhs: Elem,
}

pub(crate) struct DeltaSystem {
    pub field: Modulus,
    pub domain: usize,
    pub dim: usize,
    pub equations: Vec<Equation>,
}

pub(crate) fn scalar_matrix(f: Modulus, n: usize, t: i64) -> Mat {
    let t = f.reduce(t);
    (0..n).map(|i| (0..n).map(|j| if i == j { t } else { 0 }).collect()).collect()
}

impl DeltaSystem {
    pub fn new(field: Modulus, domain: usize, dim: usize) -> Self {
        DeltaSystem { field, domain, dim, equations: Vec::new() }
    }

    pub fn push(&mut self, terms: Vec<(usize, Mat)>, rhs: Elem) {
        self.equations.push(Equation { terms, rhs });
    }

    /// δ(x + y) − δ(x) − δ(y) = rhs.
    pub fn push_additive(&mut self, sum: usize, x: usize, y: usize, rhs: Elem) {
        let n = self.dim;
        let f = self.field;
        self.push(vec![(sum, scalar_matrix(f, n, 1)), (x, scalar_matrix(f, n, -1)), (y, scalar_matrix(f, n, -1))], rhs);
    }

    fn matrix(&self) -> (Mat, Vec<u64>) {
        let n = self.dim;
        let f = self.field;
        let ncols: usize = self.equations.iter().map(|e| e.rhs.len()).sum();
        let mut a = vec![vec![0u64; ncols]; self.domain * n];
        let mut b = vec![0u64; ncols];
        let mut off = 0;
        for eq in &self.equations {
            let w = eq.rhs.len();
            for (x, m) in &eq.terms {
                for r in 0..n {
                    for c in 0..w {
                        if m[r][c] != 0 {
                            let cell = &mut a[x * n + r][off + c];
                            *cell = f.add(*cell, m[r][c]);
                        }
                    }
                }
            }
            b[off..off + w].copy_from_slice(&eq.rhs);
            off += w;
        }
        (a, b)
    }

    /// One solution, as the list of values δ(x).
    pub fn solve(&self) -> Option<Vec<Elem>> {
        if self.dim == 0 {
            return Some(vec![vec![]; self.domain]);
        }
        let (a, b) = self.matrix();
        if self.domain == 0 {
            return b.iter().all(|&x| x == 0).then(Vec::new);
        }
        let sol = Solver::new(self.field, &a, b.len()).solve(&b)?;
        Some(sol.chunks(self.dim).map(|c| c.to_vec()).collect())
    }

    /// F_p-dimension of the solution space of the homogeneous system.
    pub fn homogeneous_dimension(&self) -> usize {
        if self.dim == 0 || self.domain == 0 {
            return 0;
        }
        let (a, b) = self.matrix();
        left_kernel(self.field, &a, b.len()).len()
    }
}
