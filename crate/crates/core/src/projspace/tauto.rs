//! W_r-bundles on P^{d−1} by transition matrices, Witt lifts of O(n), twisting,
//! and the tautological lift 0 → ℋ_r → W_r(O)^d → W_r(O(1)) → 0.

use super::ProjectiveSpace;
use crate::error::{guard, Error, Result};
use crate::fpalg::LaurentElem;
use crate::report::{CheckOutcome, Mode};
use crate::witt::{WittRing, WittVector};

pub type WittEntry = WittVector<LaurentElem>;
pub type ChartMatrix = Vec<Vec<WittEntry>>;

/// A W_r-bundle of rank `rank` on the standard charts; coordinates satisfy c_i = g_ij·c_j.
#[derive(Clone, Debug)]
pub struct ChartBundle {
    pub space: ProjectiveSpace,
    pub rank: usize,
    pub transitions: Vec<Vec<ChartMatrix>>,
}

fn mat_mul(w: &WittRing<'_, crate::fpalg::LaurentPolys>, a: &ChartMatrix, b: &ChartMatrix) -> Result<ChartMatrix> {
    let n = a.len();
    let m = b.first().map_or(0, |r| r.len());
    let mut out = vec![vec![w.zero(); m]; n];
    for i in 0..n {
        for k in 0..b.len() {
            if w.is_zero(&a[i][k]) {
                continue;
            }
            for j in 0..m {
                let t = w.mul(&a[i][k], &b[k][j])?;
                out[i][j] = w.add(&out[i][j], &t)?;
            }
        }
    }
    Ok(out)
}

fn identity(w: &WittRing<'_, crate::fpalg::LaurentPolys>, n: usize) -> ChartMatrix {
    (0..n).map(|i| (0..n).map(|j| if i == j { w.one() } else { w.zero() }).collect()).collect()
}

impl ChartBundle {
    /// Checks g_ii = 1, regularity on U_i ∩ U_j and the cocycle condition.
    pub fn new(space: &ProjectiveSpace, rank: usize, transitions: Vec<Vec<ChartMatrix>>) -> Result<Self> {
        let d = space.d();
        let r = space.r();
        let shape_ok = transitions.len() == d
            && transitions.iter().all(|row| {
                row.len() == d && row.iter().all(|g| g.len() == rank && g.iter().all(|x| x.len() == rank && x.iter().all(|e| e.len() == r)))
            });
        if !shape_ok {
            return Err(Error::Shape(format!("expected {d}×{d} transition matrices of size {rank} over W_{r}")));
        }
        let w = space.witt_laurent()?;
        let id = identity(&w, rank);
        for i in 0..d {
            if transitions[i][i] != id {
                return Err(Error::IllDefined(format!("g_{0}{0} is not the identity", i + 1)));
            }
            for j in 0..d {
                let regular = transitions[i][j].iter().flatten().flat_map(|e| e.0.iter()).all(|a| {
                    a.keys().all(|m| m.iter().sum::<i32>() == 0 && m.iter().enumerate().all(|(k, &x)| x >= 0 || k == i || k == j))
                });
                if !regular {
                    return Err(Error::IllDefined(format!("g_{}{} is not regular on the overlap", i + 1, j + 1)));
                }
            }
        }
        for i in 0..d {
            for j in 0..d {
                for k in 0..d {
                    if mat_mul(&w, &transitions[i][j], &transitions[j][k])? != transitions[i][k] {
                        return Err(Error::IllDefined(format!("cocycle condition fails for charts {}, {}, {}", i + 1, j + 1, k + 1)));
                    }
                }
            }
        }
        Ok(ChartBundle { space: space.clone(), rank, transitions })
    }

    pub fn trivial(space: &ProjectiveSpace, rank: usize) -> Result<Self> {
        let w = space.witt_laurent()?;
        let id = identity(&w, rank);
        ChartBundle::new(space, rank, vec![vec![id; space.d()]; space.d()])
    }

    /// W_r(O(n)): g_ij = τ((e_j/e_i)^n).
    pub fn witt_line_bundle(space: &ProjectiveSpace, n: i32) -> Result<Self> {
        let w = space.witt_laurent()?;
        let d = space.d();
        let transitions = (0..d)
            .map(|i| {
                (0..d)
                    .map(|j| {
                        let mut e = vec![0i32; d];
                        e[j] += n;
                        e[i] -= n;
                        vec![vec![w.teichmuller(&space.laurent().monomial(e, 1))]]
                    })
                    .collect()
            })
            .collect();
        ChartBundle::new(space, 1, transitions)
    }

    /// Kronecker product of the transition matrices.
    pub fn tensor(&self, other: &ChartBundle) -> Result<ChartBundle> {
        if self.space.p() != other.space.p() || self.space.d() != other.space.d() || self.space.r() != other.space.r() {
            return Err(Error::Shape("bundles live on different spaces".into()));
        }
        let w = self.space.witt_laurent()?;
        let (n, m) = (self.rank, other.rank);
        let d = self.space.d();
        let mut transitions = vec![vec![Vec::new(); d]; d];
        for i in 0..d {
            for j in 0..d {
                let (g, h) = (&self.transitions[i][j], &other.transitions[i][j]);
                let mut out = vec![vec![w.zero(); n * m]; n * m];
                for a in 0..n {
                    for b in 0..m {
                        for a2 in 0..n {
                            for b2 in 0..m {
                                out[a * m + b][a2 * m + b2] = w.mul(&g[a][a2], &h[b][b2])?;
                            }
                        }
                    }
                }
                transitions[i][j] = out;
            }
        }
        ChartBundle::new(&self.space, n * m, transitions)
    }

    /// The truncation to W_m.
    pub fn reduce(&self, m: usize) -> Result<ChartBundle> {
        if m == 0 || m > self.space.r() {
            return Err(Error::Shape(format!("cannot reduce a W_{} bundle to W_{m}", self.space.r())));
        }
        let space = ProjectiveSpace::new(self.space.p(), self.space.d(), m)?;
        let transitions = self
            .transitions
            .iter()
            .map(|row| row.iter().map(|g| g.iter().map(|x| x.iter().map(|e| WittVector(e.0[..m].to_vec())).collect()).collect()).collect())
            .collect();
        ChartBundle::new(&space, self.rank, transitions)
    }

    pub fn same_transitions(&self, other: &ChartBundle) -> bool {
        self.rank == other.rank && self.transitions == other.transitions
    }

    /// For line bundles: constants λ_i ∈ W_r(F_p)^× with g'_ij·λ_j = λ_i·g_ij, λ_1 = 1.
    pub fn constant_isomorphism(&self, other: &ChartBundle, cap: u64) -> Result<Option<Vec<WittEntry>>> {
        if self.rank != 1 || other.rank != 1 || self.space.d() != other.space.d() || self.space.r() != other.space.r() {
            return Err(Error::Shape("constant isomorphisms are searched between line bundles on the same space".into()));
        }
        let w = self.space.witt_laurent()?;
        let lp = self.space.laurent();
        let (p, r, d) = (self.space.p(), self.space.r(), self.space.d());
        let mut units = Vec::new();
        for k in 0..p.pow(r as u32) {
            let comps: Vec<LaurentElem> = (0..r).map(|m| lp.from_int(((k / p.pow(m as u32)) % p) as i64)).collect();
            if !comps[0].is_empty() {
                units.push(WittVector(comps));
            }
        }
        let count = (units.len() as u128).checked_pow(d as u32 - 1).unwrap_or(u128::MAX);
        guard(count, cap)?;
        for k in 0..count as usize {
            let mut rest = k;
            let mut lambdas = vec![w.one()];
            for _ in 1..d {
                lambdas.push(units[rest % units.len()].clone());
                rest /= units.len();
            }
            let mut ok = true;
            'pairs: for i in 0..d {
                for j in 0..d {
                    if w.mul(&other.transitions[i][j][0][0], &lambdas[j])? != w.mul(&lambdas[i], &self.transitions[i][j][0][0])? {
                        ok = false;
                        break 'pairs;
                    }
                }
            }
            if ok {
                return Ok(Some(lambdas));
            }
        }
        Ok(None)
    }
}

/// V_r ⊗ W_r(L) for a line bundle L.
pub fn twist_lift(v: &ChartBundle, l: &ChartBundle) -> Result<ChartBundle> {
    if l.rank != 1 {
        return Err(Error::Shape(format!("twisting needs a line bundle, got rank {}", l.rank)));
    }
    v.tensor(l)
}

/// ρ_r and the kernel basis on chart U_i.
#[derive(Clone, Debug)]
pub struct ChartKernel {
    pub chart: usize,
    /// ρ on U_i: w ↦ Σ_j w_j·τ(e_j/e_i), W_r(O(1)) trivialized by τ(e_i).
    pub rho: Vec<WittEntry>,
    /// k_j = ε_j − τ(e_j/e_i)·ε_i, j ≠ i, in increasing j.
    pub basis: Vec<Vec<WittEntry>>,
    /// det of the basis completed by ε_i.
    pub determinant: WittEntry,
}

#[derive(Clone, Debug)]
pub struct TautologicalLift {
    pub space: ProjectiveSpace,
    pub charts: Vec<ChartKernel>,
    /// ℋ_r in the chart bases above.
    pub kernel: ChartBundle,
    /// For d = 2, ℋ_r in the chart bases given by the Koszul vector (−τ(e_2), τ(e_1)).
    pub koszul: Option<ChartBundle>,
    pub checks: Vec<CheckOutcome>,
}

impl TautologicalLift {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }
}

fn apply_rho(w: &WittRing<'_, crate::fpalg::LaurentPolys>, rho: &[WittEntry], v: &[WittEntry]) -> Result<WittEntry> {
    let mut acc = w.zero();
    for (a, b) in rho.iter().zip(v) {
        acc = w.add(&acc, &w.mul(a, b)?)?;
    }
    Ok(acc)
}

fn determinant(w: &WittRing<'_, crate::fpalg::LaurentPolys>, m: &ChartMatrix) -> Result<WittEntry> {
    let n = m.len();
    let mut perm: Vec<usize> = (0..n).collect();
    let mut total = w.zero();
    loop {
        let mut term = w.one();
        for (row, &col) in perm.iter().enumerate() {
            term = w.mul(&term, &m[row][col])?;
        }
        let inversions = (0..n).flat_map(|a| (a + 1..n).map(move |b| (a, b))).filter(|&(a, b)| perm[a] > perm[b]).count();
        total = if inversions % 2 == 0 { w.add(&total, &term)? } else { w.sub(&total, &term)? };
        // next permutation in lexicographic order
        let Some(k) = (0..n.saturating_sub(1)).rev().find(|&k| perm[k] < perm[k + 1]) else { break };
        let l = (k + 1..n).rev().find(|&l| perm[k] < perm[l]).expect("exists");
        perm.swap(k, l);
        perm[k + 1..].reverse();
    }
    Ok(total)
}

/// The tautological sequence lifted to W_r, with V_r = W_r(F_p)^d.
pub fn tautological_lift(p: u64, d: usize, r: usize) -> Result<TautologicalLift> {
    if d < 2 {
        return Err(Error::Shape("the tautological bundle needs d ≥ 2".into()));
    }
    guard(d as u128, 6)?;
    let space = ProjectiveSpace::new(p, d, r)?;
    let w = space.witt_laurent()?;
    let unit = |i: usize| -> Vec<WittEntry> { (0..d).map(|k| if k == i { w.one() } else { w.zero() }).collect() };
    let mut charts = Vec::with_capacity(d);
    let mut surjective = true;
    let mut in_kernel = true;
    let mut free = true;
    for i in 0..d {
        let rho: Vec<WittEntry> = (0..d).map(|j| w.teichmuller(&space.ratio(j, i))).collect();
        let basis: Vec<Vec<WittEntry>> = (0..d)
            .filter(|&j| j != i)
            .map(|j| {
                let mut v = unit(j);
                v[i] = w.neg(&rho[j])?;
                Ok(v)
            })
            .collect::<Result<_>>()?;
        surjective &= apply_rho(&w, &rho, &unit(i))? == w.one();
        for k in &basis {
            in_kernel &= w.is_zero(&apply_rho(&w, &rho, k)?);
        }
        let mut square = basis.clone();
        square.push(unit(i));
        let det = determinant(&w, &square)?;
        let lead = &det.0[0];
        free &= lead.len() == 1 && lead.keys().all(|m| m.iter().all(|&e| e == 0));
        charts.push(ChartKernel { chart: i, rho, basis, determinant: det });
    }
    let mut checks = vec![
        CheckOutcome::new("tauto.surjective", surjective, Mode::Symbolic, "ρ(ε_i) = 1 on every chart U_i"),
        CheckOutcome::new("tauto.kernel", in_kernel, Mode::Symbolic, "ρ(ε_j − τ(e_j/e_i)·ε_i) = 0 for j ≠ i on every chart"),
        CheckOutcome::new(
            "tauto.kernel-free",
            free,
            Mode::Symbolic,
            format!("the {} kernel vectors and ε_i form a basis (unit determinant), so the kernel is free of rank {} and 0 → ℋ → W_{r}(O)^{d} → W_{r}(O(1)) → 0 is exact on every chart", d - 1, d - 1),
        ),
    ];

    // ρ glues to a global map into W_r(O(1))
    let mut glues = true;
    for i in 0..d {
        for j in 0..d {
            for k in 0..d {
                glues &= charts[i].rho[k] == w.mul(&w.teichmuller(&space.ratio(j, i)), &charts[j].rho[k])?;
            }
        }
    }
    checks.push(CheckOutcome::new("tauto.rho-glues", glues, Mode::Symbolic, "ρ_i = τ(e_j/e_i)·ρ_j on every overlap"));

    // transitions of ℋ_r: k^(j)_b = Σ_a M_ba k^(i)_a, read from the non-i entries
    let others = |i: usize| -> Vec<usize> { (0..d).filter(|&k| k != i).collect() };
    let mut transitions = vec![vec![Vec::new(); d]; d];
    let mut expansions = true;
    for i in 0..d {
        for j in 0..d {
            let oi = others(i);
            let mut g = vec![vec![w.zero(); d - 1]; d - 1];
            for (b, kb) in charts[j].basis.iter().enumerate() {
                let mut rebuilt = vec![w.zero(); d];
                for (a, &pos) in oi.iter().enumerate() {
                    let c = kb[pos].clone();
                    for (t, x) in charts[i].basis[a].iter().enumerate() {
                        rebuilt[t] = w.add(&rebuilt[t], &w.mul(&c, x)?)?;
                    }
                    g[a][b] = c;
                }
                expansions &= rebuilt == *kb;
            }
            transitions[i][j] = g;
        }
    }
    checks.push(CheckOutcome::new("tauto.basis-change", expansions, Mode::Symbolic, "each chart basis expands in every other chart basis on the overlap"));
    let kernel = match ChartBundle::new(&space, d - 1, transitions) {
        Ok(k) => k,
        Err(e) => {
            checks.push(CheckOutcome::new("tauto.cocycle", false, Mode::Symbolic, e.to_string()));
            return Ok(TautologicalLift { kernel: ChartBundle::trivial(&space, d - 1)?, space, charts, koszul: None, checks });
        }
    };
    checks.push(CheckOutcome::new("tauto.cocycle", true, Mode::Symbolic, "kernel transitions are regular on overlaps and satisfy the cocycle condition"));

    if r >= 2 {
        let classical = tautological_lift(p, d, 1)?;
        let reduced = kernel.reduce(1)?;
        let bases_reduce = charts.iter().zip(&classical.charts).all(|(c, c1)| {
            c.basis.iter().zip(&c1.basis).all(|(k, k1)| k.iter().zip(k1).all(|(x, x1)| x.0[0] == x1.0[0]))
        });
        checks.push(CheckOutcome::new(
            "tauto.reduces-to-h",
            bases_reduce && reduced.same_transitions(&classical.kernel),
            Mode::Symbolic,
            "mod p the kernel bases are ε_j − (e_j/e_i)·ε_i and the transitions are those of the classical ℋ",
        ));
    }
    let mut koszul = None;
    if d == 2 {
        let o_minus_one = ChartBundle::witt_line_bundle(&space, -1)?;
        // chart bases τ(e_i)^{-1}·(−τ(e_2), τ(e_1)) cut out by the global Koszul vector
        let kv: Vec<Vec<WittEntry>> = (0..2).map(|i| Ok(vec![w.neg(&w.teichmuller(&space.ratio(1, i)))?, w.teichmuller(&space.ratio(0, i))])).collect::<Result<_>>()?;
        let mut in_kernel = true;
        for i in 0..2 {
            in_kernel &= w.is_zero(&apply_rho(&w, &charts[i].rho, &kv[i])?);
            let u = &kv[i][1 - i];
            let scaled: Vec<WittEntry> = charts[i].basis[0].iter().map(|x| w.mul(u, x)).collect::<Result<_>>()?;
            in_kernel &= scaled == kv[i] && w.mul(u, u)? == w.one();
        }
        let mut transitions = vec![vec![Vec::new(); 2]; 2];
        let mut expands = true;
        for i in 0..2 {
            for j in 0..2 {
                let g = w.mul(&kv[j][1 - i], &kv[i][1 - i])?;
                expands &= (0..2).all(|t| w.mul(&g, &kv[i][t]).ok().as_ref() == Some(&kv[j][t]));
                transitions[i][j] = vec![vec![g]];
            }
        }
        let bundle = ChartBundle::new(&space, 1, transitions)?;
        let literal = in_kernel && expands && bundle.same_transitions(&o_minus_one);
        let lambdas = kernel.constant_isomorphism(&o_minus_one, 1 << 16)?;
        let mut c = CheckOutcome::new(
            "tauto.o-minus-one",
            literal,
            Mode::Symbolic,
            format!(
                "in the chart bases τ(e_i)^(-1)·(−τ(e_2), τ(e_1)) the transition of ℋ_{r} is τ(e_1/e_2), that of W_{r}(O(−1)); the bases ε_j − τ(e_j/e_i)ε_i differ from these by the constants below"
            ),
        );
        if let Some(l) = &lambdas {
            let shown: Vec<String> = l.iter().map(|x| format!("({})", x.0.iter().map(|c| c.get(&vec![0; d]).copied().unwrap_or(0).to_string()).collect::<Vec<_>>().join(", "))).collect();
            c = c.with_witness(format!("chart constants {}", shown.join(", ")));
        }
        checks.push(c);
        koszul = Some(bundle);
    }
    Ok(TautologicalLift { space, charts, kernel, koszul, checks })
}

pub fn tautological_w2_lift(p: u64, d: usize) -> Result<TautologicalLift> {
    tautological_lift(p, d, 2)
}
