//! Structure constants for F_p[x_1..x_k]/(f_1, .., f_m) by elimination on monomials.

use super::{Elem, FpAlgebra};
use crate::error::{Error, Result};
use crate::zpn_linalg::{Howell, Modulus};
use std::collections::BTreeMap;

pub const DEFAULT_DIM_CAP: usize = 64;
const MAX_DEGREE: u32 = 40;
const MAX_MACAULAY_COLUMNS: usize = 20_000;

/// Polynomial with integer coefficients, keyed by exponent vectors.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct IntPoly {
    pub terms: BTreeMap<Vec<u32>, i64>,
}

impl IntPoly {
    pub fn degree(&self) -> u32 {
        self.terms.keys().map(|m| m.iter().sum()).max().unwrap_or(0)
    }
    fn reduce_mod(&self, p: u64) -> BTreeMap<Vec<u32>, u64> {
        self.terms
            .iter()
            .map(|(m, &c)| (m.clone(), c.rem_euclid(p as i64) as u64))
            .filter(|(_, c)| *c != 0)
            .collect()
    }
}

fn monomials_up_to(nvars: usize, deg: u32) -> Vec<Vec<u32>> {
    fn rec(i: usize, nvars: usize, rest: u32, cur: &mut Vec<u32>, out: &mut Vec<Vec<u32>>) {
        if i == nvars {
            out.push(cur.clone());
            return;
        }
        for e in 0..=rest {
            cur[i] = e;
            rec(i + 1, nvars, rest - e, cur, out);
        }
        cur[i] = 0;
    }
    let mut out = Vec::new();
    rec(0, nvars, deg, &mut vec![0; nvars], &mut out);
    // highest degree first, then reverse lexicographic inside a degree
    out.sort_by(|a, b| {
        let (da, db): (u32, u32) = (a.iter().sum(), b.iter().sum());
        db.cmp(&da).then_with(|| b.cmp(a))
    });
    out
}

fn label(vars: &[String], m: &[u32]) -> String {
    let parts: Vec<String> = m
        .iter()
        .enumerate()
        .filter(|(_, &e)| e > 0)
        .map(|(i, &e)| if e == 1 { vars[i].clone() } else { format!("{}^{}", vars[i], e) })
        .collect();
    if parts.is_empty() {
        "1".into()
    } else {
        parts.join("*")
    }
}

/// Builds the algebra table; fails if the quotient is infinite or exceeds the cap.
pub fn presentation_to_algebra(p: u64, vars: &[String], relators: &[IntPoly], dim_cap: usize) -> Result<FpAlgebra> {
    let fp = Modulus::new(p, 1)?;
    let k = vars.len();
    let rels: Vec<BTreeMap<Vec<u32>, u64>> = relators.iter().map(|f| f.reduce_mod(p)).filter(|f| !f.is_empty()).collect();
    if k == 0 {
        return if rels.is_empty() { FpAlgebra::prime_field(p) } else { FpAlgebra::zero_ring(p) };
    }
    let start = rels.iter().map(|f| f.keys().map(|m| m.iter().sum::<u32>()).max().unwrap()).max().unwrap_or(1).max(1);
    for d in start..=MAX_DEGREE {
        let cols = monomials_up_to(k, d);
        if cols.len() > MAX_MACAULAY_COLUMNS {
            break;
        }
        let col_of: BTreeMap<&Vec<u32>, usize> = cols.iter().enumerate().map(|(i, m)| (m, i)).collect();
        let mut rows = Vec::new();
        for f in &rels {
            let fd: u32 = f.keys().map(|m| m.iter().sum()).max().unwrap();
            if fd > d {
                continue;
            }
            for mult in monomials_up_to(k, d - fd) {
                let mut row = vec![0u64; cols.len()];
                for (m, &c) in f {
                    let prod: Vec<u32> = m.iter().zip(&mult).map(|(a, b)| a + b).collect();
                    row[col_of[&prod]] = fp.add(row[col_of[&prod]], c);
                }
                rows.push(row);
            }
        }
        let h = Howell::new(fp, cols.len(), &rows);
        let leading: std::collections::BTreeSet<usize> = h.pivots.iter().map(|pv| pv.col).collect();
        if leading.contains(&col_of[&vec![0u32; k]]) {
            return FpAlgebra::zero_ring(p);
        }
        // first degree in which every monomial is a leading term
        let full = (1..=d).find(|&t| {
            cols.iter().enumerate().filter(|(_, m)| m.iter().sum::<u32>() == t).all(|(i, _)| leading.contains(&i))
        });
        let Some(full) = full else {
            let open = cols.iter().enumerate().filter(|(i, m)| !leading.contains(i) && m.iter().sum::<u32>() < d).count();
            if open > dim_cap * 4 {
                return Err(Error::Precondition(format!(
                    "quotient exceeds the dimension cap {dim_cap} (or is infinite)"
                )));
            }
            continue;
        };
        let standard: Vec<Vec<u32>> = cols
            .iter()
            .enumerate()
            .filter(|(i, m)| !leading.contains(i) && m.iter().sum::<u32>() < full)
            .map(|(_, m)| m.clone())
            .collect();
        if standard.len() > dim_cap {
            return Err(Error::Precondition(format!(
                "quotient has dimension {} above the cap {dim_cap}",
                standard.len()
            )));
        }
        // basis in increasing order so that 1 comes first
        let mut basis = standard.clone();
        basis.reverse();
        let n = basis.len();
        let pos: BTreeMap<&Vec<u32>, usize> = basis.iter().enumerate().map(|(i, m)| (m, i)).collect();
        let reduce_monomial = |m: &Vec<u32>| -> Elem {
            let mut v = vec![0u64; cols.len()];
            v[col_of[m]] = 1;
            let r = h.reduce(&v);
            let mut out = vec![0u64; n];
            for (i, mm) in cols.iter().enumerate() {
                if r[i] != 0 {
                    out[pos[mm]] = r[i];
                }
            }
            out
        };
        // multiplication-by-variable operators on the standard basis
        let ops: Vec<Vec<Elem>> = (0..k)
            .map(|v| {
                basis
                    .iter()
                    .map(|m| {
                        let mut mm = m.clone();
                        mm[v] += 1;
                        reduce_monomial(&mm)
                    })
                    .collect()
            })
            .collect();
        let apply = |op: &Vec<Elem>, x: &Elem| -> Elem {
            let mut out = vec![0u64; n];
            for (i, &c) in x.iter().enumerate() {
                if c != 0 {
                    for (o, &y) in out.iter_mut().zip(&op[i]) {
                        *o = fp.add(*o, fp.mul(c, y));
                    }
                }
            }
            out
        };
        let eval_monomial = |m: &[u32], x: &Elem| -> Elem {
            let mut cur = x.clone();
            for (v, &e) in m.iter().enumerate() {
                for _ in 0..e {
                    cur = apply(&ops[v], &cur);
                }
            }
            cur
        };
        let mut e1 = vec![0u64; n];
        e1[0] = 1;
        let commute = (0..k).all(|a| {
            (0..k).all(|b| (0..n).all(|i| {
                let mut ei = vec![0u64; n];
                ei[i] = 1;
                apply(&ops[a], &apply(&ops[b], &ei)) == apply(&ops[b], &apply(&ops[a], &ei))
            }))
        });
        let faithful = basis.iter().enumerate().all(|(i, m)| {
            let mut ei = vec![0u64; n];
            ei[i] = 1;
            eval_monomial(m, &e1) == ei
        });
        let kills = rels.iter().all(|f| {
            let mut acc = vec![0u64; n];
            for (m, &c) in f {
                let t = eval_monomial(m, &e1);
                for (a, b) in acc.iter_mut().zip(&t) {
                    *a = fp.add(*a, fp.mul(c, *b));
                }
            }
            acc.iter().all(|&x| x == 0)
        });
        if !(commute && faithful && kills) {
            continue;
        }
        let consts: Vec<Vec<Elem>> = basis
            .iter()
            .map(|mi| {
                (0..n)
                    .map(|j| {
                        let mut ej = vec![0u64; n];
                        ej[j] = 1;
                        eval_monomial(mi, &ej)
                    })
                    .collect()
            })
            .collect();
        let labels = basis.iter().map(|m| label(vars, m)).collect();
        return FpAlgebra::from_table(p, labels, consts, e1);
    }
    Err(Error::Precondition(format!(
        "no finite-dimensional quotient found below degree {MAX_DEGREE}; the dimension cap is {dim_cap}"
    )))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn poly(terms: &[(&[u32], i64)]) -> IntPoly {
        IntPoly { terms: terms.iter().map(|(m, c)| (m.to_vec(), *c)).collect() }
    }

    #[test]
    fn univariate() {
        let a = presentation_to_algebra(2, &["t".into()], &[poly(&[(&[2], 1), (&[1], 1)])], 64).unwrap();
        assert_eq!(a.dim(), 2);
        assert!(a.is_reduced());
        let b = presentation_to_algebra(3, &["t".into()], &[poly(&[(&[3], 1), (&[1], -1)])], 64).unwrap();
        assert_eq!(b.dim(), 3);
        assert!(b.is_reduced());
    }

    #[test]
    fn bivariate_and_infinite() {
        let vars = vec!["x".to_string(), "y".to_string()];
        let a = presentation_to_algebra(2, &vars, &[poly(&[(&[2, 0], 1)]), poly(&[(&[0, 2], 1)])], 64).unwrap();
        assert_eq!(a.dim(), 4);
        assert!(!a.is_reduced());
        let b = presentation_to_algebra(2, &vars, &[poly(&[(&[2, 0], 1)])], 64);
        assert!(b.is_err());
        // x*y - 1 with x^2 - x: hidden lower-degree consequence y = x... gives F_2
        let c = presentation_to_algebra(
            2,
            &vars,
            &[poly(&[(&[1, 1], 1), (&[0, 0], -1)]), poly(&[(&[2, 0], 1), (&[1, 0], -1)])],
            64,
        )
        .unwrap();
        assert_eq!(c.dim(), 1);
    }

    #[test]
    fn unit_ideal() {
        let a = presentation_to_algebra(3, &["t".into()], &[poly(&[(&[0], 1)])], 64).unwrap();
        assert_eq!(a.dim(), 0);
    }
}
