//! Characteristic p: restricted structure, the reduced Gelfand-Graev module,
//! its invariants and Whittaker vectors, the reduced W-superalgebra and the
//! dimension identities between them.

use std::collections::{BTreeMap, HashMap};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::algebra::{mat_pow, AlgebraError, Family, LieSuperalgebra, Parity};
use crate::frame::{Frame, FrameError};
use crate::linalg::{self, SparseEchelon, SparseVec};
use crate::nilpotent::NilpotentData;
use crate::pbw::{Ambient, Engine, Monomial};
use crate::scalar::{is_odd_prime, Field, PrimeField, Rationals};
use crate::w::{solve_all, WAlgebra, WError, WGenerator};
use crate::wchar0::theta_monomials_of_degree;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum ModpError {
    #[error("p = {p} violates the restriction for {family}: {rule}")]
    Restriction { p: u64, family: Family, rule: &'static str },
    #[error("p-th power of basis vector {0} leaves the algebra")]
    PowerEscapes(String),
    #[error("eta is not in chi + (m^perp)_even: {0}")]
    BadEta(String),
    #[error("reduced module has dimension {got}, expected {expected}")]
    Dimension { got: usize, expected: u128 },
    #[error(transparent)]
    Frame(#[from] FrameError),
    #[error(transparent)]
    Algebra(#[from] AlgebraError),
    #[error(transparent)]
    W(#[from] WError),
}

/// The algebra over `F_p` with its p-map on even basis vectors.
#[derive(Debug, Clone)]
pub struct ModularAlgebra {
    pub base: LieSuperalgebra<PrimeField>,
    pub p: u64,
    /// `b_i^[p]` for even basis vectors, `None` for odd ones.
    pub p_map: Vec<Option<Vec<u64>>>,
    pub restriction_ok: bool,
}

pub fn check_restriction(family: Family, m: usize, n: usize, p: u64) -> Result<(), ModpError> {
    if !is_odd_prime(p) {
        return Err(ModpError::Restriction { p, family, rule: "p must be an odd prime" });
    }
    if family == Family::Sl && (m as i64 - n as i64).rem_euclid(p as i64) == 0 {
        return Err(ModpError::Restriction { p, family, rule: "p must not divide m - n" });
    }
    Ok(())
}

pub fn reduce_mod_p(alg: &LieSuperalgebra<Rationals>, p: u64) -> Result<ModularAlgebra, ModpError> {
    let k = alg.kind;
    check_restriction(k.family, k.m, k.n, p)?;
    let base = alg.reduce_constants(p)?;
    let fp = base.field;
    let real = base.realization.as_ref().ok_or(AlgebraError::NoRealization)?;
    let mut p_map = Vec::new();
    for i in 0..base.dim() {
        if base.parity(i).is_odd() {
            p_map.push(None);
            continue;
        }
        let pow = mat_pow(&fp, &real.matrices[i], p);
        let c = real.coords(&fp, &pow).ok_or_else(|| ModpError::PowerEscapes(base.basis[i].label.clone()))?;
        p_map.push(Some(c));
    }
    Ok(ModularAlgebra { base, p, p_map, restriction_ok: true })
}

impl ModularAlgebra {
    pub fn field(&self) -> &PrimeField {
        &self.base.field
    }

    /// `x^[p]` for an even element, through the matrix realization.
    pub fn p_power(&self, x: &[u64]) -> Option<Vec<u64>> {
        let fp = self.field();
        let real = self.base.realization.as_ref()?;
        let mat = real.matrix_of(fp, x);
        real.coords(fp, &mat_pow(fp, &mat, self.p))
    }

    fn random_even(&self, rng: &mut ChaCha8Rng) -> Vec<u64> {
        (0..self.base.dim())
            .map(|i| if self.base.parity(i).is_odd() { 0 } else { rng.gen_range(0..self.p) })
            .collect()
    }

    fn random_any(&self, rng: &mut ChaCha8Rng) -> Vec<u64> {
        (0..self.base.dim()).map(|_| rng.gen_range(0..self.p)).collect()
    }

    /// Jacobson's `s_i(x, y)`: `i s_i` is the coefficient of `t^{i-1}` in
    /// `(ad(t x + y))^{p-1}(x)`.
    pub fn jacobson_terms(&self, x: &[u64], y: &[u64]) -> Vec<Vec<u64>> {
        let fp = self.field();
        let p = self.p as usize;
        let mut poly: Vec<Vec<u64>> = vec![x.to_vec()];
        for _ in 0..p - 1 {
            let mut next = vec![vec![0u64; x.len()]; poly.len() + 1];
            for (k, c) in poly.iter().enumerate() {
                next[k + 1] = linalg::add_vec(fp, &next[k + 1], &self.base.bracket(x, c));
                next[k] = linalg::add_vec(fp, &next[k], &self.base.bracket(y, c));
            }
            poly = next;
        }
        (1..p)
            .map(|i| {
                let inv = fp.inv(&(i as u64)).expect("i < p");
                linalg::scale_vec(fp, &inv, &poly[i - 1])
            })
            .collect()
    }

    /// Randomized check of the restricted Lie superalgebra axioms.
    pub fn restrictedness_trials(&self, trials: usize, seed: u64) -> RestrictednessReport {
        let fp = *self.field();
        let mut rng = ChaCha8Rng::seed_from_u64(seed ^ self.p);
        let mut report = RestrictednessReport { p: self.p, trials, homogeneity: 0, adjoint: 0, additivity: 0 };
        for _ in 0..trials {
            let x = self.random_even(&mut rng);
            let y = self.random_even(&mut rng);
            let z = self.random_any(&mut rng);
            let k = rng.gen_range(0..self.p);
            let (Some(xp), Some(yp)) = (self.p_power(&x), self.p_power(&y)) else { continue };
            // (k x)^[p] = k^p x^[p]
            let kx = linalg::scale_vec(&fp, &k, &x);
            if self.p_power(&kx) == Some(linalg::scale_vec(&fp, &fp.pow(&k, self.p), &xp)) {
                report.homogeneity += 1;
            }
            // [x^[p], z] = (ad x)^p (z)
            let mut adz = z.clone();
            for _ in 0..self.p {
                adz = self.base.bracket(&x, &adz);
            }
            if self.base.bracket(&xp, &z) == adz {
                report.adjoint += 1;
            }
            // (x + y)^[p] = x^[p] + y^[p] + sum_i s_i(x, y)
            let mut rhs = linalg::add_vec(&fp, &xp, &yp);
            for s in self.jacobson_terms(&x, &y) {
                rhs = linalg::add_vec(&fp, &rhs, &s);
            }
            if self.p_power(&linalg::add_vec(&fp, &x, &y)) == Some(rhs) {
                report.additivity += 1;
            }
        }
        report
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RestrictednessReport {
    pub p: u64,
    pub trials: usize,
    pub homogeneity: usize,
    pub adjoint: usize,
    pub additivity: usize,
}

impl RestrictednessReport {
    pub fn all_ok(&self) -> bool {
        self.homogeneity == self.trials && self.adjoint == self.trials && self.additivity == self.trials
    }
}

/// `x in g(i)_even` implies `x^[p] in g(p i)_even`, checked on every even
/// frame generator; in particular `m` is closed under the p-map.
pub fn graded_p_map_check(frame: &Frame<PrimeField>) -> bool {
    let p = frame.field.p() as i32;
    let Some(pm) = frame.p_map.as_ref() else { return false };
    (0..frame.dim()).filter(|&i| !frame.is_odd(i)).all(|i| {
        let target = p * frame.weight(i);
        pm[i].as_ref().is_some_and(|v| v.iter().all(|(k, _)| frame.weight(*k) == target && !frame.is_odd(*k)))
    })
}

/// Dense vector over `F_p`.
pub type DVec = Vec<u64>;

/// The reduced Gelfand-Graev module with explicit left action.
pub struct ReducedQ {
    pub frame: Frame<PrimeField>,
    pub basis: Vec<Monomial>,
    pub index: HashMap<Monomial, usize>,
    /// `left[g][j]` is the image of basis vector `j` under generator `g`.
    pub left: Vec<Vec<SparseVec<u64>>>,
}

fn add_scaled_dense(fp: &PrimeField, acc: &mut [u64], v: &[(usize, u64)], c: u64) {
    if c == 0 {
        return;
    }
    for (i, x) in v {
        fp.add_mul(&mut acc[*i], &c, x);
    }
}

impl ReducedQ {
    pub fn build(frame: Frame<PrimeField>) -> Result<Self, ModpError> {
        let p = frame.field.p();
        let mut basis: Vec<Monomial> = vec![vec![0; frame.dim()]];
        for g in 0..frame.n_cobasis {
            let top = if frame.is_odd(g) { 1 } else { p as u16 - 1 };
            let mut next = Vec::with_capacity(basis.len() * (top as usize + 1));
            for b in &basis {
                for e in 0..=top {
                    let mut m = b.clone();
                    m[g] = e;
                    next.push(m);
                }
            }
            basis = next;
        }
        let d = frame.dims;
        let expected = (p as u128).pow((d.m + d.s) as u32) * 2u128.pow((d.n + d.v_cobasis()) as u32);
        if basis.len() as u128 != expected {
            return Err(ModpError::Dimension { got: basis.len(), expected });
        }
        let index: HashMap<Monomial, usize> = basis.iter().enumerate().map(|(i, m)| (m.clone(), i)).collect();
        let eng = Engine::new(&frame, Ambient::GelfandGraev);
        let mut left = Vec::with_capacity(frame.dim());
        for g in 0..frame.dim() {
            let cols: Vec<SparseVec<u64>> = basis
                .iter()
                .map(|b| {
                    let mut col: SparseVec<u64> = eng.mul_gen(g, b).iter().map(|(m, c)| (index[m], *c)).collect();
                    col.sort_unstable_by_key(|(i, _)| *i);
                    col
                })
                .collect();
            left.push(cols);
        }
        drop(eng);
        Ok(ReducedQ { frame, basis, index, left })
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn p(&self) -> u64 {
        self.frame.field.p()
    }

    fn fp(&self) -> &PrimeField {
        &self.frame.field
    }

    /// Left action of a generator on a dense vector.
    pub fn apply(&self, g: usize, v: &[u64]) -> DVec {
        let mut out = vec![0; self.dim()];
        for (j, &c) in v.iter().enumerate() {
            add_scaled_dense(self.fp(), &mut out, &self.left[g][j], c);
        }
        out
    }

    /// Left action of an element of `g` in frame coordinates.
    pub fn apply_vector(&self, z: &[u64], v: &[u64]) -> DVec {
        let fp = *self.fp();
        let mut out = vec![0; self.dim()];
        for (g, &c) in z.iter().enumerate() {
            if c != 0 {
                let img = self.apply(g, v);
                for (o, x) in out.iter_mut().zip(img) {
                    fp.add_mul(o, &c, &x);
                }
            }
        }
        out
    }

    pub fn unit(&self, j: usize) -> DVec {
        let mut v = vec![0; self.dim()];
        v[j] = 1;
        v
    }

    /// Left action of an element given as module terms (lifted to the
    /// enveloping algebra).
    pub fn apply_terms(&self, u: &BTreeMap<Monomial, u64>, v: &[u64]) -> DVec {
        let fp = *self.fp();
        let mut out = vec![0; self.dim()];
        for (m, c) in u {
            let mut cur = v.to_vec();
            for g in crate::pbw::word_of(m).into_iter().rev() {
                cur = self.apply(g, &cur);
            }
            for (o, x) in out.iter_mut().zip(cur) {
                fp.add_mul(o, c, &x);
            }
        }
        out
    }

    pub fn to_dense(&self, terms: &BTreeMap<Monomial, u64>) -> DVec {
        let mut v = vec![0; self.dim()];
        for (m, c) in terms {
            v[self.index[m]] = *c;
        }
        v
    }

    /// Columns of `ad z` for a frame generator `z` acting on the module,
    /// computed with the derivation rule along the normal order.
    pub fn ad_columns(&self, z: usize) -> Vec<SparseVec<u64>> {
        let fp = *self.fp();
        let fr = &self.frame;
        let mut order: Vec<usize> = (0..self.dim()).collect();
        order.sort_by_key(|&j| self.basis[j].iter().map(|&e| u32::from(e)).sum::<u32>());
        let mut cols: Vec<Option<DVec>> = vec![None; self.dim()];
        for j in order {
            let b = &self.basis[j];
            let Some(g) = b.iter().position(|&e| e > 0) else {
                cols[j] = Some(vec![0; self.dim()]);
                continue;
            };
            let mut rest = b.clone();
            rest[g] -= 1;
            let r = self.index[&rest];
            // [z, g u'] = [z, g] u' + (-1)^{|z||g|} g [z, u']
            let mut col = vec![0u64; self.dim()];
            for (k, c) in fr.bracket_gens(z, g) {
                add_scaled_dense(&fp, &mut col, &self.left[*k][r], *c);
            }
            let s = fp.sign(fr.is_odd(z) && fr.is_odd(g));
            let inner = cols[r].as_ref().expect("lower degree first");
            let moved = self.apply(g, inner);
            for (o, x) in col.iter_mut().zip(moved) {
                fp.add_mul(o, &s, &x);
            }
            cols[j] = Some(col);
        }
        cols.into_iter().map(|c| linalg::dense_to_sparse(&fp, &c.unwrap())).collect()
    }

    /// Kernel of a family of operators given by their columns.
    fn common_kernel(&self, ops: &[Vec<SparseVec<u64>>]) -> Vec<SparseVec<u64>> {
        let fp = *self.fp();
        let n = self.dim();
        let mut rows: Vec<BTreeMap<usize, u64>> = Vec::new();
        for op in ops {
            let mut r: Vec<BTreeMap<usize, u64>> = vec![BTreeMap::new(); n];
            for (j, col) in op.iter().enumerate() {
                for (i, x) in col {
                    r[*i].insert(j, *x);
                }
            }
            rows.extend(r.into_iter().filter(|m| !m.is_empty()));
        }
        linalg::sparse_nullspace(&fp, rows.into_iter().map(|m| m.into_iter().collect()), n)
    }

    /// `Q^{ad m}` (or `Q^{ad m'}` with `prime`).
    pub fn invariant_subspace(&self, prime: bool) -> Vec<SparseVec<u64>> {
        let zs: Vec<usize> = if prime { self.frame.mprime_indices() } else { self.frame.m_indices().collect() };
        let ops: Vec<Vec<SparseVec<u64>>> = zs.iter().map(|&z| self.ad_columns(z)).collect();
        self.common_kernel(&ops)
    }

    /// Vectors on which `m` acts through `eta`.
    pub fn whittaker_subspace(&self) -> Vec<SparseVec<u64>> {
        let fp = *self.fp();
        let ops: Vec<Vec<SparseVec<u64>>> = self
            .frame
            .m_indices()
            .map(|z| {
                let c = self.frame.eta[z];
                (0..self.dim())
                    .map(|j| {
                        let mut col: BTreeMap<usize, u64> = self.left[z][j].iter().cloned().collect();
                        let e = col.entry(j).or_insert(0);
                        *e = fp.sub(e, &c);
                        col.into_iter().filter(|(_, x)| *x != 0).collect()
                    })
                    .collect()
            })
            .collect();
        self.common_kernel(&ops)
    }

    /// `x^p - x^[p] - eta(x)^p` acts as zero for every even basis vector of
    /// the original algebra.
    pub fn central_elements_vanish(&self, ma: &ModularAlgebra) -> bool {
        let fp = *self.fp();
        let p = self.p();
        let to_frame = |v: &[u64]| linalg::mat_vec(&fp, &self.frame.from_basis, v);
        for (i, xp) in ma.p_map.iter().enumerate() {
            let Some(xp) = xp else { continue };
            let x = to_frame(&ma.base.unit(i));
            let xpf = to_frame(xp);
            let eta_x = linalg::dot(&fp, &self.frame.eta, &x);
            let c = fp.pow(&eta_x, p);
            for j in 0..self.dim() {
                let mut v = self.unit(j);
                for _ in 0..p {
                    v = self.apply_vector(&x, &v);
                }
                let w = self.apply_vector(&xpf, &self.unit(j));
                for k in 0..self.dim() {
                    let lhs = fp.sub(&v[k], &w[k]);
                    let want = if k == j { c } else { 0 };
                    if lhs != want {
                        return false;
                    }
                }
            }
        }
        true
    }

    /// `L_[a,b] = L_a L_b - (-1)^{|a||b|} L_b L_a` on every basis vector.
    pub fn is_representation(&self) -> bool {
        let fp = *self.fp();
        let fr = &self.frame;
        for a in 0..fr.dim() {
            for b in 0..fr.dim() {
                let s = fp.sign(fr.is_odd(a) && fr.is_odd(b));
                let br = linalg::sparse_to_dense(&fp, fr.bracket_gens(a, b), fr.dim());
                for j in 0..self.dim() {
                    let e = self.unit(j);
                    let ab = self.apply(a, &self.apply(b, &e));
                    let ba = self.apply(b, &self.apply(a, &e));
                    let lhs = self.apply_vector(&br, &e);
                    for k in 0..self.dim() {
                        if lhs[k] != fp.sub(&ab[k], &fp.mul(&s, &ba[k])) {
                            return false;
                        }
                    }
                }
            }
        }
        true
    }
}

/// Echelon span of sparse vectors.
pub fn span_of(fp: &PrimeField, vs: &[SparseVec<u64>]) -> SparseEchelon<PrimeField> {
    let mut ech = SparseEchelon::new(fp);
    for v in vs {
        ech.insert(v);
    }
    ech
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ReducedWReport {
    pub dim_invariants: usize,
    pub pbw_count: usize,
    /// The PBW monomials are independent invariants spanning the invariant space.
    pub pbw_ok: bool,
    /// `[theta_i, theta_i] = 0` for even generators, the middle generator
    /// squares to its norm, and every bracket is a combination of PBW monomials.
    pub relations_ok: bool,
    /// Degree bound and linear part of each bracket; only meaningful when p
    /// exceeds every generator degree.
    pub filtration_ok: bool,
    pub warnings: Vec<String>,
}

/// The reduced W-superalgebra realized inside the invariants.
pub fn reduced_w(q: &ReducedQ, invariants: &[SparseVec<u64>]) -> Result<(Vec<WGenerator<u64>>, ReducedWReport), ModpError> {
    let fp = q.frame.field;
    let p = fp.p();
    let eng = Engine::new(&q.frame, Ambient::GelfandGraev);
    let gens = solve_all(&eng)?;
    let mut warnings = Vec::new();
    let max_deg = gens.iter().map(|g| g.filtration_degree()).max().unwrap_or(0);
    if (p as i32) <= max_deg {
        warnings.push(format!("p = {p} does not exceed the generator degree {max_deg}"));
    }
    let w = WAlgebra::new(&eng, gens.clone());
    let total: i32 = gens.iter().map(|g| if g.parity.is_odd() { g.filtration_degree() } else { (p as i32 - 1) * g.filtration_degree() }).sum();
    let mut pbw: Vec<Vec<u16>> = Vec::new();
    for d in 0..=total {
        pbw.extend(theta_monomials_of_degree(&w, d, Some(p as u16 - 1)));
    }
    let inv_span = span_of(&fp, invariants);
    let mut ech = SparseEchelon::new(&fp);
    let mut independent = true;
    let mut inside = true;
    let mut values: Vec<SparseVec<u64>> = Vec::new();
    for exps in &pbw {
        let v = q.to_dense(&w.eval(exps));
        let sv = linalg::dense_to_sparse(&fp, &v);
        inside &= inv_span.contains(&sv);
        independent &= ech.insert(&sv);
        values.push(sv);
    }
    let pbw_ok = independent && inside && pbw.len() == invariants.len();

    // Brackets in the PBW basis.
    let mut rows: Vec<BTreeMap<usize, u64>> = vec![BTreeMap::new(); q.dim()];
    for (c, v) in values.iter().enumerate() {
        for (i, x) in v {
            rows[*i].insert(c, *x);
        }
    }
    let rows: Vec<SparseVec<u64>> = rows.into_iter().map(|m| m.into_iter().collect()).collect();
    let n = gens.len();
    let mut relations_ok = pbw_ok;
    let mut filtration_ok = true;
    for i in 0..n {
        for j in i..n {
            let target = q.to_dense(&w.commutator(i, j));
            let Some(sol) = linalg::sparse_solve(&fp, &rows, &target, pbw.len()) else {
                relations_ok = false;
                continue;
            };
            let (gi, gj) = (&gens[i], &gens[j]);
            let nonzero: Vec<usize> = (0..pbw.len()).filter(|&c| sol[c] != 0).collect();
            if i == j && gi.parity == Parity::Even && !nonzero.is_empty() {
                relations_ok = false;
            }
            if i == j && Some(gi.lead) == q.frame.middle {
                let c = q.frame.middle_norm.unwrap_or(1);
                let zero = vec![0u16; n];
                let ok = nonzero.iter().all(|&k| pbw[k] == zero) && sol[pbw.iter().position(|e| *e == zero).unwrap()] == c;
                relations_ok &= ok;
            }
            let bound = gi.weight + gj.weight + 2;
            if nonzero.iter().any(|&k| w.degree(&pbw[k]) > bound) {
                filtration_ok = false;
            }
        }
    }
    if !filtration_ok && warnings.is_empty() {
        warnings.push("filtration bound fails".into());
    }
    Ok((gens, ReducedWReport { dim_invariants: invariants.len(), pbw_count: pbw.len(), pbw_ok, relations_ok, filtration_ok, warnings }))
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct MoritaReport {
    pub dim_u: u128,
    pub delta: u128,
    pub dim_q: u128,
    pub dim_w: u128,
    pub dim_whittaker: u128,
    /// `dim U = delta^2 dim W`.
    pub ok: bool,
    /// `dim Q = dim U / delta` and Whittaker vectors have dimension `dim Q / delta`.
    pub freeness_ok: bool,
}

pub fn morita_dim_check(
    alg_sdim: (usize, usize),
    frame: &Frame<PrimeField>,
    dim_q: usize,
    dim_w: usize,
    dim_whittaker: usize,
) -> MoritaReport {
    let p = frame.field.p() as u128;
    let dim_u = p.pow(alg_sdim.0 as u32) * 2u128.pow(alg_sdim.1 as u32);
    let m_even = frame.m_indices().filter(|&i| !frame.is_odd(i)).count();
    let m_odd = frame.m_indices().count() - m_even;
    let delta = p.pow(m_even as u32) * 2u128.pow(m_odd as u32);
    let (dim_q, dim_w, dim_whittaker) = (dim_q as u128, dim_w as u128, dim_whittaker as u128);
    MoritaReport {
        dim_u,
        delta,
        dim_q,
        dim_w,
        dim_whittaker,
        ok: dim_u == delta * delta * dim_w,
        freeness_ok: dim_q * delta == dim_u && dim_whittaker * delta == dim_q,
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PropSmallReport {
    pub applicable: bool,
    pub dim_m_invariants: usize,
    pub dim_mprime_invariants: usize,
    pub dim_image: usize,
    /// `Q^{ad m'} = ad v (Q^{ad m})`.
    pub equality: bool,
    /// `Q^{ad m'}` is a proper subspace of `Q^{ad m}`.
    pub proper: bool,
    /// `v (x) 1` is in `Q^{ad m}` but not in `Q^{ad m'}`, and `[v, v (x) 1]` is the middle norm.
    pub witness_ok: bool,
}

impl PropSmallReport {
    pub fn all_ok(&self) -> bool {
        !self.applicable || (self.equality && self.proper && self.witness_ok)
    }
}

pub fn prop_small_check(q: &ReducedQ, inv_m: &[SparseVec<u64>], inv_mprime: &[SparseVec<u64>]) -> PropSmallReport {
    let fp = q.frame.field;
    let Some(mid) = q.frame.middle else {
        let a = span_of(&fp, inv_m);
        let same = inv_mprime.len() == inv_m.len() && inv_mprime.iter().all(|v| a.contains(v));
        return PropSmallReport {
            applicable: false,
            dim_m_invariants: inv_m.len(),
            dim_mprime_invariants: inv_mprime.len(),
            dim_image: inv_m.len(),
            equality: same,
            proper: false,
            witness_ok: same,
        };
    };
    let ad_v = q.ad_columns(mid);
    let image: Vec<SparseVec<u64>> = inv_m
        .iter()
        .map(|v| {
            let mut out = vec![0u64; q.dim()];
            for (j, c) in v {
                add_scaled_dense(&fp, &mut out, &ad_v[*j], *c);
            }
            linalg::dense_to_sparse(&fp, &out)
        })
        .collect();
    let img = span_of(&fp, &image);
    let b = span_of(&fp, inv_mprime);
    let a = span_of(&fp, inv_m);
    let equality = img.rank() == b.rank() && inv_mprime.iter().all(|v| img.contains(v));
    let proper = inv_mprime.iter().all(|v| a.contains(v)) && b.rank() < a.rank();
    let mut vmon = vec![0u16; q.frame.dim()];
    vmon[mid] = 1;
    let wv: SparseVec<u64> = vec![(q.index[&vmon], 1)];
    let one = q.index[&vec![0u16; q.frame.dim()]];
    let adv_w: SparseVec<u64> = ad_v[wv[0].0].clone();
    let norm = q.frame.middle_norm.unwrap_or(1);
    let witness_ok = a.contains(&wv) && !b.contains(&wv) && adv_w == vec![(one, norm)];
    PropSmallReport {
        applicable: true,
        dim_m_invariants: inv_m.len(),
        dim_mprime_invariants: inv_mprime.len(),
        dim_image: img.rank(),
        equality,
        proper,
        witness_ok,
    }
}

/// `chi` together with `chi + xi_g` for the dual functional of each even
/// co-basis generator `g`.
pub fn eta_samples(frame: &Frame<PrimeField>) -> Vec<(String, Vec<u64>)> {
    let mut out = vec![("chi".to_string(), frame.chi.clone())];
    for g in frame.eta_directions() {
        let mut eta = frame.chi.clone();
        eta[g] = frame.field.add(&eta[g], &1);
        out.push((format!("chi+{}*", frame.gens[g].label), eta));
    }
    out
}

/// One line of a sweep report.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ModpRow {
    pub family: String,
    pub m: usize,
    pub n: usize,
    pub e_label: String,
    pub p: u64,
    pub eta_label: String,
    pub dim_q: u128,
    pub delta: u128,
    pub dim_w: u128,
    pub morita_ok: bool,
    pub prop_small_ok: Option<bool>,
    pub pbw_ok: bool,
}

/// Full analysis for one `(p, eta)`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ModpRun {
    pub p: u64,
    pub eta_label: String,
    pub morita: MoritaReport,
    pub prop_small: PropSmallReport,
    pub reduced_w: ReducedWReport,
    pub central_ok: bool,
    pub representation_ok: bool,
}

impl ModpRun {
    pub fn row(&self, nd: &NilpotentData) -> ModpRow {
        ModpRow {
            family: nd.kind.family.to_string(),
            m: nd.kind.m,
            n: nd.kind.n,
            e_label: nd.e_label.clone(),
            p: self.p,
            eta_label: self.eta_label.clone(),
            dim_q: self.morita.dim_q,
            delta: self.morita.delta,
            dim_w: self.morita.dim_w,
            morita_ok: self.morita.ok && self.morita.freeness_ok,
            prop_small_ok: self.prop_small.applicable.then(|| self.prop_small.all_ok()),
            pbw_ok: self.reduced_w.pbw_ok,
        }
    }

    pub fn all_ok(&self) -> bool {
        self.morita.ok
            && self.morita.freeness_ok
            && self.prop_small.all_ok()
            && self.reduced_w.pbw_ok
            && self.reduced_w.relations_ok
            && self.central_ok
            && self.representation_ok
    }
}

/// Builds the reduced module for one `eta` and runs every check on it.
pub fn run_one(
    alg: &LieSuperalgebra<Rationals>,
    ma: &ModularAlgebra,
    frame: Frame<PrimeField>,
    eta_label: &str,
    full_checks: bool,
) -> Result<ModpRun, ModpError> {
    let q = ReducedQ::build(frame)?;
    let inv_m = q.invariant_subspace(false);
    let inv_mp = q.invariant_subspace(true);
    let whit = q.whittaker_subspace();
    let morita = morita_dim_check(alg.sdim(), &q.frame, q.dim(), inv_m.len(), whit.len());
    let prop_small = prop_small_check(&q, &inv_m, &inv_mp);
    let (_, reduced_w) = reduced_w(&q, &inv_m)?;
    let (central_ok, representation_ok) =
        if full_checks { (q.central_elements_vanish(ma), q.is_representation()) } else { (true, true) };
    Ok(ModpRun { p: ma.p, eta_label: eta_label.to_string(), morita, prop_small, reduced_w, central_ok, representation_ok })
}

/// Sweep over primes and (optionally) several `eta`, in parallel.
pub fn sweep(
    alg: &LieSuperalgebra<Rationals>,
    frame: &Frame<Rationals>,
    primes: &[u64],
    eta_sweep: bool,
    full_checks: bool,
) -> Result<Vec<ModpRun>, ModpError> {
    let k = alg.kind;
    for &p in primes {
        check_restriction(k.family, k.m, k.n, p)?;
    }
    let mut jobs = Vec::new();
    for &p in primes {
        let ma = reduce_mod_p(alg, p)?;
        let fr = frame.modular(alg, p)?;
        let etas = if eta_sweep { eta_samples(&fr) } else { vec![("chi".to_string(), fr.chi.clone())] };
        for (label, eta) in etas {
            let fr_eta = fr.clone().with_eta(eta).map_err(|e| ModpError::BadEta(e.to_string()))?;
            jobs.push((ma.clone(), fr_eta, label));
        }
    }
    let mut runs: Vec<ModpRun> = jobs
        .into_par_iter()
        .map(|(ma, fr, label)| run_one(alg, &ma, fr, &label, full_checks))
        .collect::<Result<_, _>>()?;
    runs.sort_by(|a, b| (a.p, &a.eta_label).cmp(&(b.p, &b.eta_label)));
    Ok(runs)
}
