//! Verschiebung and Frobenius of a free module V over an F_p-algebra A, as F_p-linear maps.

use super::symbols::SymbolBasis;
use crate::error::{Error, Result};
use crate::fpalg::{Elem, FpAlgebra};
use crate::zpn_linalg::{factorial, is_exact, pontryagin_dual, ExactnessCertificate, Mat, ModuleMap, Solver, ZpnModule};
use serde::Serialize;

/// V = A^r together with Frob^*(V), S^p_A(V), Γ^p_A(V) and the maps Ver, Frob and α,
/// all seen as F_p-vector spaces. Coordinates of a block-indexed space are (block, j)
/// for the A-basis vector b_j, flattened as block·dim(A) + j.
#[derive(Clone, Debug)]
pub struct VerFrob {
    pub algebra: FpAlgebra,
    pub rank: usize,
    pub symbols: SymbolBasis,
    pub twist: ZpnModule,
    pub sym: ZpnModule,
    pub gamma: ZpnModule,
    pub ver: ModuleMap,
    pub frob: ModuleMap,
    pub alpha: ModuleMap,
}

fn flatten(a: &FpAlgebra, blocks: &[Elem]) -> Vec<u64> {
    debug_assert!(blocks.iter().all(|e| e.len() == a.dim()));
    blocks.iter().flat_map(|e| e.iter().copied()).collect()
}

fn trace(a: &FpAlgebra, x: &Elem) -> u64 {
    let m = a.mult_matrix(x);
    (0..a.dim()).fold(0, |acc, j| a.field().add(acc, m[j][j]))
}

impl VerFrob {
    pub fn new(algebra: &FpAlgebra, rank: usize) -> Result<Self> {
        let p = algebra.p();
        let fp = algebra.field();
        let da = algebra.dim();
        let symbols = SymbolBasis::new(fp, rank, p as u32);
        let nb = symbols.len();
        let twist = ZpnModule::free(fp, rank * da);
        let sym = ZpnModule::free(fp, nb * da);
        let gamma = ZpnModule::free(fp, nb * da);
        let pure_power = |i: usize| -> Vec<u32> { (0..rank).map(|k| if k == i { p as u32 } else { 0 }).collect() };
        let zero_blocks = |n: usize| vec![algebra.zero(); n];

        let mut ver_rows = Mat::new();
        for i in 0..rank {
            for j in 0..da {
                let mut blocks = zero_blocks(nb);
                blocks[symbols.index_of(&pure_power(i))] = algebra.basis(j);
                ver_rows.push(flatten(algebra, &blocks));
            }
        }
        let mut frob_rows = Mat::new();
        let mut alpha_rows = Mat::new();
        for a in &symbols.basis {
            let pure_index = a.iter().position(|&e| e == p as u32);
            let weight = a.iter().fold(1u64, |acc, &e| fp.mul(acc, (factorial(e as u64) % p as u128) as u64));
            for j in 0..da {
                let mut blocks = zero_blocks(rank);
                if let Some(i) = pure_index {
                    blocks[i] = algebra.basis(j);
                }
                frob_rows.push(flatten(algebra, &blocks));
                let mut blocks = zero_blocks(nb);
                blocks[symbols.index_of(a)] = algebra.scale(weight, &algebra.basis(j));
                alpha_rows.push(flatten(algebra, &blocks));
            }
        }
        let ver = ModuleMap::new(twist.clone(), sym.clone(), ver_rows)?;
        let frob = ModuleMap::new(gamma.clone(), twist.clone(), frob_rows)?;
        let alpha = ModuleMap::new(sym.clone(), gamma.clone(), alpha_rows)?;
        Ok(VerFrob { algebra: algebra.clone(), rank, symbols, twist, sym, gamma, ver, frob, alpha })
    }

    pub fn p(&self) -> u64 {
        self.algebra.p()
    }

    fn check_vector(&self, v: &[Elem]) -> Result<()> {
        if v.len() != self.rank {
            return Err(Error::Shape(format!("vector of length {} in a module of rank {}", v.len(), self.rank)));
        }
        Ok(())
    }

    fn coeff_power(&self, v: &[Elem], a: &[u32]) -> Elem {
        a.iter().zip(v).fold(self.algebra.one(), |acc, (&e, c)| self.algebra.mul(&acc, &self.algebra.pow(c, e as u64)))
    }

    /// [v]_p in Γ^p_A(V).
    pub fn pure(&self, v: &[Elem]) -> Result<Vec<u64>> {
        self.check_vector(v)?;
        let blocks: Vec<Elem> = self.symbols.basis.iter().map(|a| self.coeff_power(v, a)).collect();
        Ok(flatten(&self.algebra, &blocks))
    }

    /// v^p in S^p_A(V).
    pub fn power(&self, v: &[Elem]) -> Result<Vec<u64>> {
        self.check_vector(v)?;
        let fp = self.algebra.field();
        let blocks: Vec<Elem> = self
            .symbols
            .basis
            .iter()
            .map(|a| {
                let mult = (super::symbols::multinomial(a) % fp.q() as u128) as u64;
                self.algebra.scale(mult, &self.coeff_power(v, a))
            })
            .collect();
        Ok(flatten(&self.algebra, &blocks))
    }

    /// v ⊗ 1 in Frob^*(V), that is Σ c_i^p (v_i ⊗ 1).
    pub fn twisted(&self, v: &[Elem]) -> Result<Vec<u64>> {
        self.check_vector(v)?;
        let blocks: Vec<Elem> = v.iter().map(|c| self.algebra.frob(c)).collect();
        Ok(flatten(&self.algebra, &blocks))
    }

    /// Multiplication by t on a block-indexed space with `blocks` blocks.
    fn action(&self, t: &Elem, blocks: usize) -> Mat {
        let da = self.algebra.dim();
        let mut rows = Mat::new();
        for b in 0..blocks {
            for j in 0..da {
                let mut v = vec![0u64; blocks * da];
                let prod = self.algebra.mul(t, &self.algebra.basis(j));
                v[b * da..(b + 1) * da].copy_from_slice(&prod);
                rows.push(v);
            }
        }
        rows
    }

    /// Ver, Frob and α commute with the A-action.
    pub fn is_a_linear(&self) -> bool {
        let nb = self.symbols.len();
        let r = self.rank;
        (0..self.algebra.dim()).all(|j| {
            let t = self.algebra.basis(j);
            let on = |f: &ModuleMap, dom_blocks: usize, cod_blocks: usize| {
                let left = ModuleMap::new(f.domain.clone(), f.domain.clone(), self.action(&t, dom_blocks)).unwrap();
                let right = ModuleMap::new(f.codomain.clone(), f.codomain.clone(), self.action(&t, cod_blocks)).unwrap();
                left.compose(f).unwrap().equals(&f.compose(&right).unwrap())
            };
            on(&self.ver, r, nb) && on(&self.frob, nb, r) && on(&self.alpha, nb, nb)
        })
    }

    fn zero_in(&self, m: &ZpnModule) -> ModuleMap {
        ModuleMap::zero(ZpnModule::zero(m.modulus()), m.clone())
    }
    fn zero_out(&self, m: &ZpnModule) -> ModuleMap {
        ModuleMap::zero(m.clone(), ZpnModule::zero(m.modulus()))
    }

    /// 0 → Frob^*V → S^p V → S̄^p V → 0, with S̄^p V the cokernel of Ver.
    pub fn ver_sequence(&self) -> Vec<ModuleMap> {
        let (coker, q) = self.ver.cokernel();
        vec![self.zero_in(&self.twist), self.ver.clone(), q, self.zero_out(&coker)]
    }

    /// 0 → Γ̄^p V → Γ^p V → Frob^*V → 0, with Γ̄^p V the kernel of Frob.
    pub fn frob_sequence(&self) -> Vec<ModuleMap> {
        let (ker, inc) = self.frob.kernel();
        vec![self.zero_in(&ker), inc, self.frob.clone(), self.zero_out(&self.twist)]
    }

    /// 0 → Frob^*V → S^p V → Γ^p V → Frob^*V → 0.
    pub fn fundamental_2_extension(&self) -> Vec<ModuleMap> {
        vec![
            self.zero_in(&self.twist),
            self.ver.clone(),
            self.alpha.clone(),
            self.frob.clone(),
            self.zero_out(&self.twist),
        ]
    }

    pub fn fundamental_2_extension_exact(&self) -> Result<ExactnessCertificate> {
        is_exact(&self.fundamental_2_extension())
    }

    /// The map S̄^p V → Γ̄^p V induced by α.
    pub fn gamma_zero_iso(&self) -> Result<ModuleMap> {
        let (coker, _) = self.ver.cokernel();
        let ker_gens = self.frob.kernel_generators();
        let (ker, _) = self.frob.kernel();
        let rows = if ker_gens.is_empty() {
            vec![vec![]; coker.rank()]
        } else {
            let solver = Solver::new(self.gamma.modulus(), &ker_gens, self.gamma.rank());
            self.alpha
                .matrix()
                .iter()
                .map(|img| solver.solve(img).ok_or_else(|| Error::Check("α leaves the kernel of Frob".into())))
                .collect::<Result<Mat>>()?
        };
        ModuleMap::new(coker, ker, rows)
    }

    /// Pairing of monomials in the dual basis against multi-symbols, computed by
    /// expanding each multi-symbol through rational pure symbols and evaluating.
    pub fn evaluation_pairing(&self) -> Result<Mat> {
        let fp = self.algebra.field();
        let p = fp.p();
        let mut points = vec![vec![]];
        for _ in 0..self.rank {
            points = points.into_iter().flat_map(|v: Vec<u64>| (0..p).map(move |c| { let mut w = v.clone(); w.push(c); w })).collect();
        }
        let pures: Mat = points.iter().map(|c| self.symbols.pure(c)).collect();
        let solver = Solver::new(fp, &pures, self.symbols.len());
        let mut pairing = vec![vec![0u64; self.symbols.len()]; self.symbols.len()];
        for s in 0..self.symbols.len() {
            let mut e = vec![0; self.symbols.len()];
            e[s] = 1;
            let lambda = solver.solve(&e).ok_or_else(|| Error::Check("pure symbols do not span".into()))?;
            for (m, mono) in self.symbols.basis.iter().enumerate() {
                let value = points.iter().zip(&lambda).fold(0, |acc, (c, &l)| {
                    let cm = mono.iter().zip(c).fold(1, |x, (&e, &ci)| fp.mul(x, fp.pow(ci, e as u64)));
                    fp.add(acc, fp.mul(l, cm))
                });
                pairing[m][s] = value;
            }
        }
        Ok(pairing)
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct DualityCertificate {
    pub pairing_is_dual_basis: bool,
    pub pairings_perfect: bool,
    pub squares_commute: bool,
    pub dual_sequence_exact: bool,
    pub quotient_iso: bool,
    pub holds: bool,
}

/// The dual of the Verschiebung sequence of V^∨ against the Frobenius sequence of V.
/// Duals are F_p-duals; the A-valued pairings are composed with the trace of A over F_p.
pub fn duality_check(a: &FpAlgebra, rank: usize) -> Result<DualityCertificate> {
    let v = VerFrob::new(a, rank)?;
    let vd = VerFrob::new(a, rank)?;
    let fp = a.field();
    let da = a.dim();
    let nb = v.symbols.len();
    let p_eval = v.evaluation_pairing()?;
    let pairing_is_dual_basis = (0..nb).all(|m| (0..nb).all(|s| p_eval[m][s] == u64::from(m == s)));

    let tr: Vec<Vec<u64>> = (0..da).map(|j| (0..da).map(|l| trace(a, &a.mul(&a.basis(j), &a.basis(l)))).collect()).collect();
    // D_Γ: Γ^p V → (S^p V^∨)^*, D_F: Frob^*V → (Frob^*V^∨)^*.
    let sym_dual = pontryagin_dual(&vd.sym);
    let twist_dual = pontryagin_dual(&vd.twist);
    let to_dual = |dm: &crate::zpn_linalg::DualModule, values: Vec<u64>| -> Result<Vec<u64>> {
        Solver::new(fp, &dm.functionals, values.len()).solve(&values).ok_or_else(|| Error::Check("pairing value is not a functional".into()))
    };
    let mut d_gamma_rows = Mat::new();
    for s in 0..nb {
        for l in 0..da {
            let values: Vec<u64> =
                (0..nb).flat_map(|m| { let p_eval = &p_eval; let tr = &tr; (0..da).map(move |j| fp.mul(p_eval[m][s], tr[j][l])) }).collect();
            d_gamma_rows.push(to_dual(&sym_dual, values)?);
        }
    }
    let mut d_twist_rows = Mat::new();
    for k in 0..rank {
        for l in 0..da {
            let values: Vec<u64> =
                (0..rank).flat_map(|i| { let tr = &tr; (0..da).map(move |j| if i == k { tr[j][l] } else { 0 }) }).collect();
            d_twist_rows.push(to_dual(&twist_dual, values)?);
        }
    }
    let d_gamma = ModuleMap::new(v.gamma.clone(), sym_dual.module.clone(), d_gamma_rows)?;
    let d_twist = ModuleMap::new(v.twist.clone(), twist_dual.module.clone(), d_twist_rows)?;
    let pairings_perfect = d_gamma.is_isomorphism() && d_twist.is_isomorphism();

    let dual_ver = crate::zpn_linalg::dual_map(&vd.ver, &twist_dual, &sym_dual)?;
    let squares_commute = d_gamma.compose(&dual_ver)?.equals(&v.frob.compose(&d_twist)?);

    let (coker, q) = vd.ver.cokernel();
    let coker_dual = pontryagin_dual(&coker);
    let dual_q = crate::zpn_linalg::dual_map(&q, &sym_dual, &coker_dual)?;
    let zero = ZpnModule::zero(fp);
    let dual_seq = vec![
        ModuleMap::zero(zero.clone(), coker_dual.module.clone()),
        dual_q.clone(),
        dual_ver.clone(),
        ModuleMap::zero(twist_dual.module.clone(), zero),
    ];
    let dual_sequence_exact = is_exact(&dual_seq)?.exact;

    let (ker, inc) = v.frob.kernel();
    let solver = Solver::new(fp, dual_q.matrix(), sym_dual.module.rank());
    let mut rows = Mat::new();
    let mut quotient_iso = true;
    for g in inc.matrix() {
        let image = d_gamma.apply(g);
        match if dual_q.matrix().is_empty() { image.iter().all(|&x| x == 0).then(Vec::new) } else { solver.solve(&image) } {
            Some(c) => rows.push(c),
            None => {
                quotient_iso = false;
                break;
            }
        }
    }
    if quotient_iso {
        quotient_iso = ModuleMap::new(ker, coker_dual.module.clone(), rows).map(|f| f.is_isomorphism()).unwrap_or(false);
    }
    let holds = pairing_is_dual_basis && pairings_perfect && squares_commute && dual_sequence_exact && quotient_iso;
    Ok(DualityCertificate { pairing_is_dual_basis, pairings_perfect, squares_commute, dual_sequence_exact, quotient_iso, holds })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rank_two_over_f2() {
        let a = FpAlgebra::prime_field(2).unwrap();
        let v = VerFrob::new(&a, 2).unwrap();
        assert_eq!(v.ver.apply(&[1, 0]), v.symbols.unit_vector(&[2, 0]));
        assert_eq!(v.frob.apply(&v.symbols.unit_vector(&[2, 0])), vec![1, 0]);
        assert!(v.fundamental_2_extension_exact().unwrap().exact);
        assert!(v.gamma_zero_iso().unwrap().is_isomorphism());
        assert!(v.is_a_linear());
        assert!(duality_check(&a, 2).unwrap().holds);
    }
}
