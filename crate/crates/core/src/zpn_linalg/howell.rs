//! Howell normal form over Z/p^n and the routines built on it.

use super::arith::Modulus;

pub type Mat = Vec<Vec<u64>>;

fn is_zero(row: &[u64]) -> bool {
    row.iter().all(|&x| x == 0)
}

fn axpy(m: &Modulus, dst: &mut [u64], t: u64, src: &[u64]) {
    // dst -= t * src
    if t == 0 {
        return;
    }
    for (d, &s) in dst.iter_mut().zip(src) {
        if s != 0 {
            *d = m.sub(*d, m.mul(t, s));
        }
    }
}

fn scale(m: &Modulus, row: &mut [u64], t: u64) {
    for x in row.iter_mut() {
        *x = m.mul(*x, t);
    }
}

/// A row of a Howell form: pivot column and pivot valuation.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Pivot {
    pub col: usize,
    pub val: u32,
}

/// Canonical generating set of a row span over Z/p^n.
///
/// Every pivot entry is p^v, entries above a pivot are reduced below p^v,
/// and the rows with pivot at or past column c span every element of the
/// row span vanishing before c.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Howell {
    pub modulus: Modulus,
    pub ncols: usize,
    pub rows: Mat,
    pub pivots: Vec<Pivot>,
}

impl Howell {
    pub fn new(modulus: Modulus, ncols: usize, rows: &[Vec<u64>]) -> Self {
        let m = &modulus;
        let mut pool: Vec<Vec<u64>> = rows
            .iter()
            .map(|r| {
                assert_eq!(r.len(), ncols, "row length mismatch");
                r.iter().map(|&x| x % m.q()).collect::<Vec<u64>>()
            })
            .filter(|r| !is_zero(r))
            .collect();
        let mut out: Mat = Vec::new();
        let mut pivots = Vec::new();
        for c in 0..ncols {
            let mut best: Option<(usize, u32)> = None;
            for (i, r) in pool.iter().enumerate() {
                if r[c] != 0 {
                    let v = m.valuation(r[c]);
                    if best.is_none_or(|(_, bv)| v < bv) {
                        best = Some((i, v));
                    }
                }
            }
            let Some((bi, v)) = best else { continue };
            let mut piv = pool.swap_remove(bi);
            let unit = piv[c] / m.p_pow(v);
            scale(m, &mut piv, m.inv(unit).expect("unit part is invertible"));
            let pv = m.p_pow(v);
            for r in pool.iter_mut() {
                if r[c] != 0 {
                    let t = r[c] / pv;
                    axpy(m, r, t, &piv);
                }
            }
            if v > 0 {
                let mut extra = piv.clone();
                scale(m, &mut extra, m.p_pow(m.n() - v));
                pool.push(extra);
            }
            pool.retain(|r| !is_zero(r));
            out.push(piv);
            pivots.push(Pivot { col: c, val: v });
        }
        for i in 0..out.len() {
            let Pivot { col, val } = pivots[i];
            let pv = m.p_pow(val);
            let src = out[i].clone();
            for j in 0..i {
                let t = out[j][col] / pv;
                axpy(m, &mut out[j], t, &src);
            }
        }
        Howell { modulus, ncols, rows: out, pivots }
    }

    pub fn empty(modulus: Modulus, ncols: usize) -> Self {
        Howell { modulus, ncols, rows: vec![], pivots: vec![] }
    }

    /// Howell form of the span of these rows together with extra rows.
    pub fn extend(&self, extra: &[Vec<u64>]) -> Self {
        if extra.is_empty() {
            return self.clone();
        }
        let mut all = self.rows.clone();
        all.extend_from_slice(extra);
        Howell::new(self.modulus, self.ncols, &all)
    }

    /// Canonical representative of v modulo the row span.
    pub fn reduce(&self, v: &[u64]) -> Vec<u64> {
        let m = &self.modulus;
        let mut v: Vec<u64> = v.iter().map(|&x| x % m.q()).collect();
        for (row, piv) in self.rows.iter().zip(&self.pivots) {
            let t = v[piv.col] / m.p_pow(piv.val);
            axpy(m, &mut v, t, row);
        }
        v
    }

    pub fn contains(&self, v: &[u64]) -> bool {
        is_zero(&self.reduce(v))
    }

    /// Base-p logarithm of the number of elements of the span.
    pub fn span_log_order(&self) -> u32 {
        self.pivots.iter().map(|pv| self.modulus.n() - pv.val).sum()
    }
}

pub fn howell_form(modulus: Modulus, ncols: usize, rows: &[Vec<u64>]) -> Mat {
    Howell::new(modulus, ncols, rows).rows
}

/// Generators of the left kernel {x : x·a = 0}.
pub fn left_kernel(modulus: Modulus, a: &[Vec<u64>], ncols: usize) -> Mat {
    let m = a.len();
    let aug: Mat = a
        .iter()
        .enumerate()
        .map(|(i, r)| {
            let mut row = r.clone();
            row.extend((0..m).map(|j| u64::from(i == j)));
            row
        })
        .collect();
    let h = Howell::new(modulus, ncols + m, &aug);
    h.rows
        .iter()
        .zip(&h.pivots)
        .filter(|(_, pv)| pv.col >= ncols)
        .map(|(r, _)| r[ncols..].to_vec())
        .collect()
}

/// Solve x·a = b, returning one solution when it exists.
pub struct Solver {
    modulus: Modulus,
    nrows: usize,
    ncols: usize,
    h: Howell,
}

impl Solver {
    pub fn new(modulus: Modulus, a: &[Vec<u64>], ncols: usize) -> Self {
        let m = a.len();
        let aug: Mat = a
            .iter()
            .enumerate()
            .map(|(i, r)| {
                let mut row = r.clone();
                row.extend((0..m).map(|j| u64::from(i == j)));
                row
            })
            .collect();
        Solver { modulus, nrows: m, ncols, h: Howell::new(modulus, ncols + m, &aug) }
    }

    pub fn solve(&self, b: &[u64]) -> Option<Vec<u64>> {
        let md = &self.modulus;
        let mut v: Vec<u64> = b.iter().map(|&x| x % md.q()).collect();
        v.resize(self.ncols + self.nrows, 0);
        for (row, piv) in self.h.rows.iter().zip(&self.h.pivots) {
            if piv.col >= self.ncols {
                break;
            }
            let t = v[piv.col] / md.p_pow(piv.val);
            axpy(md, &mut v, t, row);
        }
        if !is_zero(&v[..self.ncols]) {
            return None;
        }
        Some(v[self.ncols..].iter().map(|&x| md.neg(x)).collect())
    }
}

/// Exponents a_i of the elementary divisors p^{a_i} of a matrix (nonzero ones only).
pub fn smith_valuations(modulus: Modulus, a: &[Vec<u64>], ncols: usize) -> Vec<u32> {
    let m = &modulus;
    let mut mat: Mat = a.iter().map(|r| r.iter().map(|&x| x % m.q()).collect()).collect();
    let nrows = mat.len();
    let mut out = Vec::new();
    let mut done_r = vec![false; nrows];
    let mut done_c = vec![false; ncols];
    loop {
        let mut best: Option<(usize, usize, u32)> = None;
        for i in 0..nrows {
            if done_r[i] {
                continue;
            }
            for j in 0..ncols {
                if done_c[j] || mat[i][j] == 0 {
                    continue;
                }
                let v = m.valuation(mat[i][j]);
                if best.is_none_or(|b| v < b.2) {
                    best = Some((i, j, v));
                }
            }
        }
        let Some((pi, pj, v)) = best else { break };
        let pv = m.p_pow(v);
        let unit_inv = m.inv(mat[pi][pj] / pv).unwrap();
        let prow = mat[pi].clone();
        for i in 0..nrows {
            if i != pi && !done_r[i] && mat[i][pj] != 0 {
                let t = m.mul(mat[i][pj] / pv, unit_inv);
                axpy(m, &mut mat[i], t, &prow);
            }
        }
        // column elimination only affects the pivot row since its column is cleared elsewhere
        done_r[pi] = true;
        done_c[pj] = true;
        for j in 0..ncols {
            if j != pj {
                mat[pi][j] = 0;
            }
        }
        out.push(v);
    }
    out.sort_unstable();
    out
}

pub fn transpose(a: &[Vec<u64>], ncols: usize) -> Mat {
    (0..ncols).map(|j| a.iter().map(|r| r[j]).collect()).collect()
}

pub fn mat_mul(modulus: Modulus, a: &[Vec<u64>], b: &[Vec<u64>], bcols: usize) -> Mat {
    a.iter()
        .map(|r| {
            let mut out = vec![0u64; bcols];
            for (k, &x) in r.iter().enumerate() {
                if x != 0 {
                    for (o, &y) in out.iter_mut().zip(&b[k]) {
                        *o = modulus.add(*o, modulus.mul(x, y));
                    }
                }
            }
            out
        })
        .collect()
}

pub fn vec_mat(modulus: Modulus, v: &[u64], b: &[Vec<u64>], bcols: usize) -> Vec<u64> {
    mat_mul(modulus, &[v.to_vec()], b, bcols).pop().unwrap()
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::collections::BTreeSet;

    fn span(m: Modulus, rows: &[Vec<u64>], ncols: usize) -> BTreeSet<Vec<u64>> {
        let mut set = BTreeSet::new();
        set.insert(vec![0; ncols]);
        loop {
            let cur: Vec<_> = set.iter().cloned().collect();
            let before = set.len();
            for v in &cur {
                for r in rows {
                    set.insert(v.iter().zip(r).map(|(a, b)| m.add(*a, *b)).collect());
                }
            }
            if set.len() == before {
                return set;
            }
        }
    }

    #[test]
    fn identity_and_diagonal_fixed() {
        let m = Modulus::new(2, 2).unwrap();
        let id = vec![vec![1, 0], vec![0, 1]];
        assert_eq!(howell_form(m, 2, &id), id);
        let d = vec![vec![2, 0], vec![0, 2]];
        assert_eq!(howell_form(m, 2, &d), d);
    }

    #[test]
    fn span_of_order_four() {
        let m = Modulus::new(2, 2).unwrap();
        let rows = vec![vec![2, 2], vec![0, 2]];
        let h = Howell::new(m, 2, &rows);
        let s = span(m, &rows, 2);
        assert_eq!(s.len(), 4);
        assert_eq!(span(m, &h.rows, 2), s);
        assert_eq!(h.span_log_order(), 2);
    }

    #[test]
    fn howell_property_needed() {
        // (2,1) spans {(2,1),(0,2),(2,3),(0,0)}; (0,2) has to appear in the form
        let m = Modulus::new(2, 2).unwrap();
        let h = Howell::new(m, 2, &[vec![2, 1]]);
        assert!(h.contains(&[0, 2]));
        assert!(!h.contains(&[0, 1]));
        assert_eq!(h.rows.len(), 2);
    }

    #[test]
    fn kernel_and_solver() {
        let m = Modulus::new(2, 2).unwrap();
        let a = vec![vec![1], vec![1]];
        let k = left_kernel(m, &a, 1);
        assert_eq!(span(m, &k, 2).len(), 4);
        let s = Solver::new(m, &a, 1);
        let x = s.solve(&[3]).unwrap();
        assert_eq!(vec_mat(m, &x, &a, 1), vec![3]);
        let s2 = Solver::new(m, &[vec![2]], 1);
        assert!(s2.solve(&[1]).is_none());
    }

    #[test]
    fn smith_example() {
        let m = Modulus::new(2, 3).unwrap();
        assert_eq!(smith_valuations(m, &[vec![2, 4], vec![4, 2]], 2), vec![1, 1]);
        assert_eq!(smith_valuations(m, &[vec![2, 4]], 2), vec![1]);
    }
}
