use super::arith::Modulus;
use super::howell::{left_kernel, mat_mul, smith_valuations, transpose, vec_mat, Howell, Mat, Solver};
use crate::error::{guard, Error, Result};
use serde::Serialize;

/// A finitely presented Z/p^n-module: (Z/p^n)^rank modulo a relation span.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ZpnModule {
    modulus: Modulus,
    rank: usize,
    relations: Howell,
}

impl ZpnModule {
    pub fn new(modulus: Modulus, rank: usize, relations: &[Vec<u64>]) -> Self {
        ZpnModule { modulus, rank, relations: Howell::new(modulus, rank, relations) }
    }

    pub fn free(modulus: Modulus, rank: usize) -> Self {
        ZpnModule { modulus, rank, relations: Howell::empty(modulus, rank) }
    }

    /// Z/p^{a_1} + ... + Z/p^{a_k}.
    pub fn cyclic_sum(modulus: Modulus, exps: &[u32]) -> Self {
        let k = exps.len();
        let rels: Mat = exps
            .iter()
            .enumerate()
            .map(|(i, &a)| (0..k).map(|j| if i == j { modulus.p_pow(a) } else { 0 }).collect())
            .collect();
        ZpnModule::new(modulus, k, &rels)
    }

    pub fn zero(modulus: Modulus) -> Self {
        ZpnModule::free(modulus, 0)
    }

    pub fn modulus(&self) -> Modulus {
        self.modulus
    }
    pub fn rank(&self) -> usize {
        self.rank
    }
    pub fn relations(&self) -> &Howell {
        &self.relations
    }

    pub fn reduce(&self, v: &[u64]) -> Vec<u64> {
        self.relations.reduce(v)
    }
    pub fn is_zero_elem(&self, v: &[u64]) -> bool {
        self.relations.contains(v)
    }
    pub fn add(&self, a: &[u64], b: &[u64]) -> Vec<u64> {
        let s: Vec<u64> = a.iter().zip(b).map(|(x, y)| self.modulus.add(*x, *y)).collect();
        self.reduce(&s)
    }
    pub fn scale(&self, t: u64, a: &[u64]) -> Vec<u64> {
        let s: Vec<u64> = a.iter().map(|x| self.modulus.mul(t, *x)).collect();
        self.reduce(&s)
    }
    pub fn sub(&self, a: &[u64], b: &[u64]) -> Vec<u64> {
        let s: Vec<u64> = a.iter().zip(b).map(|(x, y)| self.modulus.sub(*x, *y)).collect();
        self.reduce(&s)
    }
    pub fn basis_vector(&self, i: usize) -> Vec<u64> {
        let mut v = vec![0; self.rank];
        v[i] = 1;
        self.reduce(&v)
    }

    /// Exponents of the cyclic summands Z/p^a, largest first, zeros dropped.
    pub fn invariant_exponents(&self) -> Vec<u32> {
        let n = self.modulus.n();
        let vals = smith_valuations(self.modulus, &self.relations.rows, self.rank);
        let mut out: Vec<u32> = vals.iter().map(|&v| v.min(n)).collect();
        out.extend(std::iter::repeat_n(n, self.rank - vals.len()));
        out.retain(|&a| a > 0);
        out.sort_unstable_by(|a, b| b.cmp(a));
        out
    }

    /// Orders p^a of the cyclic summands, largest first.
    pub fn invariant_factors(&self) -> Vec<u64> {
        self.invariant_exponents().iter().map(|&a| self.modulus.p().pow(a)).collect()
    }

    /// Composition length.
    pub fn length(&self) -> u32 {
        self.invariant_exponents().iter().sum()
    }

    pub fn order(&self) -> u128 {
        (self.modulus.p() as u128).pow(self.length())
    }

    pub fn is_trivial(&self) -> bool {
        self.length() == 0
    }

    /// All elements as canonical ambient vectors, in a fixed order.
    pub fn elements(&self, cap: u64) -> Result<Vec<Vec<u64>>> {
        guard(self.order(), cap)?;
        let q = self.modulus.q();
        let mut bound = vec![q; self.rank];
        for piv in &self.relations.pivots {
            bound[piv.col] = self.modulus.p_pow(piv.val).max(1);
            if piv.val == 0 {
                bound[piv.col] = 1;
            }
        }
        let mut out = vec![vec![0u64; self.rank]];
        for (j, &b) in bound.iter().enumerate() {
            let mut next = Vec::with_capacity(out.len() * b as usize);
            for v in &out {
                for x in 0..b {
                    let mut w = v.clone();
                    w[j] = x;
                    next.push(w);
                }
            }
            out = next;
        }
        debug_assert_eq!(out.len() as u128, self.order());
        Ok(out)
    }

    /// Same module up to identical presentation data.
    pub fn same_presentation(&self, other: &ZpnModule) -> bool {
        self.modulus == other.modulus && self.rank == other.rank && self.relations == other.relations
    }

    /// Span of elements plus relations, as a Howell form (submodule identity).
    pub fn submodule_key(&self, gens: &[Vec<u64>]) -> Howell {
        self.relations.extend(gens)
    }

    /// The submodule generated by gens, presented on those generators, with its inclusion.
    pub fn submodule(&self, gens: &[Vec<u64>]) -> (ZpnModule, ModuleMap) {
        let mut stacked: Mat = gens.to_vec();
        stacked.extend(self.relations.rows.iter().cloned());
        let s = gens.len();
        let rels: Mat =
            left_kernel(self.modulus, &stacked, self.rank).into_iter().map(|r| r[..s].to_vec()).collect();
        let sub = ZpnModule::new(self.modulus, s, &rels);
        let inc = ModuleMap::new(sub.clone(), self.clone(), gens.to_vec()).expect("inclusion is well defined");
        (sub, inc)
    }

    pub fn direct_sum(&self, other: &ZpnModule) -> ZpnModule {
        assert_eq!(self.modulus, other.modulus);
        let r = self.rank + other.rank;
        let mut rels = Vec::new();
        for row in &self.relations.rows {
            let mut v = row.clone();
            v.resize(r, 0);
            rels.push(v);
        }
        for row in &other.relations.rows {
            let mut v = vec![0; self.rank];
            v.extend_from_slice(row);
            rels.push(v);
        }
        ZpnModule::new(self.modulus, r, &rels)
    }
}

/// A homomorphism given by the images of the domain generators.
#[derive(Clone, Debug)]
pub struct ModuleMap {
    pub domain: ZpnModule,
    pub codomain: ZpnModule,
    matrix: Mat,
}

impl ModuleMap {
    pub fn new(domain: ZpnModule, codomain: ZpnModule, matrix: Mat) -> Result<Self> {
        if domain.modulus != codomain.modulus {
            return Err(Error::Shape("maps must stay over one coefficient ring".into()));
        }
        if matrix.len() != domain.rank || matrix.iter().any(|r| r.len() != codomain.rank) {
            return Err(Error::Shape(format!(
                "matrix must be {}x{}",
                domain.rank, codomain.rank
            )));
        }
        let matrix: Mat = matrix.iter().map(|r| codomain.reduce(r)).collect();
        let f = ModuleMap { domain, codomain, matrix };
        for rel in &f.domain.relations.rows {
            if !f.codomain.is_zero_elem(&vec_mat(f.domain.modulus, rel, &f.matrix, f.codomain.rank)) {
                return Err(Error::IllDefined(format!("relation {rel:?} does not map to zero")));
            }
        }
        Ok(f)
    }

    pub fn zero(domain: ZpnModule, codomain: ZpnModule) -> Self {
        let m = vec![vec![0; codomain.rank]; domain.rank];
        ModuleMap::new(domain, codomain, m).unwrap()
    }

    pub fn identity(m: ZpnModule) -> Self {
        let mat = (0..m.rank).map(|i| (0..m.rank).map(|j| u64::from(i == j)).collect()).collect();
        ModuleMap::new(m.clone(), m, mat).unwrap()
    }

    pub fn matrix(&self) -> &Mat {
        &self.matrix
    }

    pub fn apply(&self, x: &[u64]) -> Vec<u64> {
        self.codomain.reduce(&vec_mat(self.domain.modulus, x, &self.matrix, self.codomain.rank))
    }

    pub fn compose(&self, after: &ModuleMap) -> Result<ModuleMap> {
        if !self.codomain.same_presentation(&after.domain) {
            return Err(Error::NotComposable(0));
        }
        let m = mat_mul(self.domain.modulus, &self.matrix, &after.matrix, after.codomain.rank);
        ModuleMap::new(self.domain.clone(), after.codomain.clone(), m)
    }

    /// Ambient vectors generating the kernel inside the domain.
    pub fn kernel_generators(&self) -> Mat {
        let mut stacked = self.matrix.clone();
        stacked.extend(self.codomain.relations.rows.iter().cloned());
        let k = left_kernel(self.domain.modulus, &stacked, self.codomain.rank);
        let dr = self.domain.rank;
        let gens: Mat = k.into_iter().map(|r| r[..dr].to_vec()).collect();
        let h = Howell::new(self.domain.modulus, dr, &gens);
        h.rows.into_iter().filter(|g| !self.domain.is_zero_elem(g)).collect()
    }

    pub fn kernel(&self) -> (ZpnModule, ModuleMap) {
        self.domain.submodule(&self.kernel_generators())
    }

    pub fn image_generators(&self) -> Mat {
        self.matrix.iter().filter(|r| !self.codomain.is_zero_elem(r)).cloned().collect()
    }

    pub fn image(&self) -> (ZpnModule, ModuleMap) {
        self.codomain.submodule(&self.image_generators())
    }

    pub fn cokernel(&self) -> (ZpnModule, ModuleMap) {
        let mut rels = self.codomain.relations.rows.clone();
        rels.extend(self.matrix.iter().cloned());
        let c = ZpnModule::new(self.codomain.modulus, self.codomain.rank, &rels);
        let proj = ModuleMap::identity_like(&self.codomain, &c);
        (c, proj)
    }

    fn identity_like(from: &ZpnModule, to: &ZpnModule) -> ModuleMap {
        let mat = (0..from.rank).map(|i| (0..from.rank).map(|j| u64::from(i == j)).collect()).collect();
        ModuleMap::new(from.clone(), to.clone(), mat).unwrap()
    }

    pub fn is_injective(&self) -> bool {
        self.kernel_generators().is_empty()
    }

    pub fn is_surjective(&self) -> bool {
        self.cokernel().0.is_trivial()
    }

    pub fn is_isomorphism(&self) -> bool {
        self.is_injective() && self.is_surjective()
    }

    /// Equality as homomorphisms.
    pub fn equals(&self, other: &ModuleMap) -> bool {
        self.domain.same_presentation(&other.domain)
            && self.codomain.same_presentation(&other.codomain)
            && self
                .matrix
                .iter()
                .zip(&other.matrix)
                .all(|(a, b)| self.codomain.is_zero_elem(&self.codomain.sub(a, b)))
    }
}

#[derive(Clone, Debug, Serialize, PartialEq, Eq)]
pub struct ExactnessCertificate {
    pub exact: bool,
    /// Index of the interior node where image and kernel differ.
    pub failing_node: Option<usize>,
    pub detail: String,
}

/// Checks image = kernel at every interior node of a chain of maps.
pub fn is_exact(seq: &[ModuleMap]) -> Result<ExactnessCertificate> {
    for (i, w) in seq.windows(2).enumerate() {
        if !w[0].codomain.same_presentation(&w[1].domain) {
            return Err(Error::NotComposable(i));
        }
    }
    for (i, w) in seq.windows(2).enumerate() {
        let node = &w[0].codomain;
        let im = node.submodule_key(&w[0].image_generators());
        let ker = node.submodule_key(&w[1].kernel_generators());
        if im != ker {
            let im_in_ker = w[0].image_generators().iter().all(|g| ker.contains(g));
            let detail = if im_in_ker {
                "kernel strictly larger than image".to_string()
            } else {
                "image not contained in kernel".to_string()
            };
            return Ok(ExactnessCertificate { exact: false, failing_node: Some(i + 1), detail });
        }
    }
    Ok(ExactnessCertificate { exact: true, failing_node: None, detail: "exact".into() })
}

/// Hom(M, Z/p^n), presented on a generating set of functionals.
#[derive(Clone, Debug)]
pub struct DualModule {
    pub module: ZpnModule,
    /// Row i is the functional attached to generator i, as values on the generators of M.
    pub functionals: Mat,
}

impl DualModule {
    fn solver(&self) -> Solver {
        Solver::new(self.module.modulus, &self.functionals, self.functional_len())
    }
    fn functional_len(&self) -> usize {
        self.functionals.first().map_or(0, |r| r.len())
    }

    /// Coordinates of a functional, given by its values on the generators of M.
    pub fn coordinates(&self, values: &[u64]) -> Option<Vec<u64>> {
        if self.functionals.is_empty() {
            return values.iter().all(|&x| x == 0).then(Vec::new);
        }
        self.solver().solve(values).map(|c| self.module.reduce(&c))
    }
}

pub fn pontryagin_dual(m: &ZpnModule) -> DualModule {
    let md = m.modulus;
    let rt = transpose(&m.relations.rows, m.rank);
    let gens = if m.relations.rows.is_empty() {
        (0..m.rank).map(|i| (0..m.rank).map(|j| u64::from(i == j)).collect()).collect()
    } else {
        Howell::new(md, m.rank, &left_kernel(md, &rt, m.relations.rows.len())).rows
    };
    let free = ZpnModule::free(md, m.rank);
    let (sub, _) = free.submodule(&gens);
    DualModule { module: sub, functionals: gens }
}

/// The transpose of f: M → N as a map N^∨ → M^∨.
pub fn dual_map(f: &ModuleMap, dm: &DualModule, dn: &DualModule) -> Result<ModuleMap> {
    let md = f.domain.modulus;
    let solver = dm.solver();
    let mut rows = Vec::new();
    for psi in &dn.functionals {
        let col: Vec<u64> = f
            .matrix
            .iter()
            .map(|r| r.iter().zip(psi).fold(0, |acc, (a, b)| md.add(acc, md.mul(*a, *b))))
            .collect();
        let c = if dm.functionals.is_empty() {
            if col.iter().any(|&x| x != 0) {
                return Err(Error::Check("pulled back functional is not in the dual".into()));
            }
            vec![]
        } else {
            solver.solve(&col).ok_or_else(|| Error::Check("pulled back functional is not in the dual".into()))?
        };
        rows.push(c);
    }
    ModuleMap::new(dn.module.clone(), dm.module.clone(), rows)
}

/// Evaluation M → (M^∨)^∨.
pub fn double_dual_map(m: &ZpnModule) -> Result<(ModuleMap, DualModule, DualModule)> {
    let d1 = pontryagin_dual(m);
    let d2 = pontryagin_dual(&d1.module);
    let solver = d2.solver();
    let mut rows = Vec::new();
    for j in 0..m.rank {
        let col: Vec<u64> = d1.functionals.iter().map(|phi| phi[j]).collect();
        let c = if d2.functionals.is_empty() {
            vec![]
        } else {
            solver.solve(&col).ok_or_else(|| Error::Check("evaluation is not a functional".into()))?
        };
        rows.push(c);
    }
    let ev = ModuleMap::new(m.clone(), d2.module.clone(), rows)?;
    Ok((ev, d1, d2))
}
