//! The nilpotent datum: Dynkin grading, centralizer, the forms on `g(-1)`,
//! the subalgebras `m`, `m'`, `p` and the ordered co-basis `x, y, u, v`.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::algebra::{AlgebraError, AlgebraKind, LieSuperalgebra, Matrix, Parity};
use crate::linalg::{self, Subspace};
use crate::scalar::{rational_sqrt, Rationals};
use crate::sl2::{sl2_triple, Sl2Triple};

type Q = BigRational;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum NilpotentError {
    #[error("bad input: {0}")]
    BadInput(String),
    #[error("element is not even")]
    NotEven,
    #[error("element is not ad-nilpotent")]
    NotNilpotent,
    #[error("no sl2-triple through the given element")]
    NoTriple,
    #[error("ad h is not diagonalizable with integer eigenvalues")]
    NotDiagonalizable,
    #[error("the symmetric form on g(-1)_odd has no rational hyperbolic splitting; Gram of the remaining block: {gram:?}")]
    IrrationalSplitting { gram: Vec<Vec<String>> },
    #[error("structural check failed: {0}")]
    Invariant(String),
    #[error(transparent)]
    Algebra(#[from] AlgebraError),
}

/// A homogeneous vector of `g` in basis coordinates.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct GradedVector {
    #[serde(with = "vec_q")]
    pub coords: Vec<Q>,
    pub weight: i32,
    pub parity: Parity,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Dims {
    /// `dim g^e_0`.
    pub l: usize,
    /// `dim g^e_1`.
    pub q: usize,
    /// Number of even co-basis vectors in `p`.
    pub m: usize,
    /// Number of odd co-basis vectors in `p`.
    pub n: usize,
    pub s: usize,
    pub r: usize,
    /// `floor(r / 2)`.
    pub t: usize,
}

impl Dims {
    pub fn r_odd(&self) -> bool {
        self.r % 2 == 1
    }

    /// Number of `v` vectors in the co-basis, `ceil(r / 2)`.
    pub fn v_cobasis(&self) -> usize {
        self.r.div_ceil(2)
    }

    /// `q` for even `r`, `q + 1` for odd `r`.
    pub fn q_prime(&self) -> usize {
        self.q + usize::from(self.r_odd())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Cobasis {
    pub x: Vec<GradedVector>,
    pub y: Vec<GradedVector>,
    /// `u_1 .. u_{2s}`; the second half spans the even part of `g(-1)'`.
    pub u: Vec<GradedVector>,
    /// `v_1 .. v_r`; the indices above `ceil(r/2)` span the odd part of `g(-1)'`.
    pub v: Vec<GradedVector>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct WeightSpace {
    pub weight: i32,
    pub parity: Parity,
    #[serde(with = "vecvec_q")]
    pub basis: Vec<Vec<Q>>,
}

/// Outcome of the structural checks made while analyzing a nilpotent.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct StructureReport {
    pub mperp_dim: usize,
    pub mprime_e_dim: usize,
    pub gf_dim: usize,
    /// `m^perp = [m', e] + g^f`, direct.
    pub mperp_ok: bool,
    pub p_dim: usize,
    pub f_image_dim: usize,
    pub ge_dim: usize,
    /// `p = sum_{j>=2} [f, g(j)] + g^e`, direct.
    pub p_ok: bool,
    /// Per parity: `(dim g - dim g^e, sum_{k>=2} 2 dim g(-k) + dim g(-1))`.
    pub dim_identity: [(usize, usize); 2],
    pub dim_identity_ok: bool,
    pub pairing_ok: bool,
    pub g_minus1_even_dim_even: bool,
    pub chi_support_ok: bool,
    pub forms_ok: bool,
    pub subalgebras_ok: bool,
}

impl StructureReport {
    pub fn all_ok(&self) -> bool {
        self.mperp_ok
            && self.p_ok
            && self.dim_identity_ok
            && self.pairing_ok
            && self.g_minus1_even_dim_even
            && self.chi_support_ok
            && self.forms_ok
            && self.subalgebras_ok
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct NilpotentData {
    pub kind: AlgebraKind,
    pub e_label: String,
    #[serde(with = "triple_q")]
    pub triple: Sl2Triple<Q>,
    /// Invariant form rescaled so that `(e, f) = 1` when the supertrace
    /// pairing of `e` and `f` is nonzero.
    #[serde(with = "vecvec_q")]
    pub gram: Matrix<Q>,
    /// `chi(x) = (e, x)` as a covector on the basis.
    #[serde(with = "vec_q")]
    pub chi: Vec<Q>,
    /// Eigenvalue of `ad h` on each basis vector that is an eigenvector.
    pub basis_weights: Vec<Option<i32>>,
    pub weight_spaces: Vec<WeightSpace>,
    pub cobasis: Cobasis,
    pub dims: Dims,
    pub m_basis: Vec<GradedVector>,
    pub mprime_basis: Vec<GradedVector>,
    pub p_basis: Vec<GradedVector>,
    #[serde(with = "opt_q")]
    pub middle_norm: Option<Q>,
    pub checks: StructureReport,
}

impl NilpotentData {
    pub fn weight_space(&self, weight: i32, parity: Parity) -> &[Vec<Q>] {
        self.weight_spaces
            .iter()
            .find(|w| w.weight == weight && w.parity == parity)
            .map_or(&[], |w| w.basis.as_slice())
    }

    pub fn max_weight(&self) -> i32 {
        self.weight_spaces.iter().map(|w| w.weight).max().unwrap_or(0)
    }

    /// `g^e` basis: `x_1..x_l` followed by `y_1..y_q`.
    pub fn centralizer(&self) -> Vec<GradedVector> {
        let mut out = self.cobasis.x[..self.dims.l].to_vec();
        out.extend_from_slice(&self.cobasis.y[..self.dims.q]);
        out
    }

    pub fn is_zero_orbit(&self) -> bool {
        self.triple.e.iter().all(|c| c.is_zero())
    }
}

fn graded(coords: Vec<Q>, weight: i32, parity: Parity) -> GradedVector {
    GradedVector { coords, weight, parity }
}

fn columns(m: &[Vec<Q>], cols: &[usize]) -> Vec<Vec<Q>> {
    m.iter().map(|r| cols.iter().map(|&c| r[c].clone()).collect()).collect()
}

fn embed(dim: usize, cols: &[usize], v: &[Q]) -> Vec<Q> {
    let mut out = vec![Q::zero(); dim];
    for (&c, x) in cols.iter().zip(v) {
        out[c] = x.clone();
    }
    out
}

/// Basis of `{x in g_parity : [h, x] = i x}` for every integer eigenvalue.
fn weight_decomposition(alg: &LieSuperalgebra<Rationals>, h: &[Q]) -> Result<Vec<WeightSpace>, NilpotentError> {
    let f = Rationals;
    let dim = alg.dim();
    let ad_h = alg.ad_matrix(h);
    let bound = 2 * dim as i32 + 2;
    let mut spaces = Vec::new();
    let mut total = 0;
    for parity in [Parity::Even, Parity::Odd] {
        let cols = alg.indices_of(parity);
        for w in -bound..=bound {
            let mut m = ad_h.clone();
            for (i, row) in m.iter_mut().enumerate() {
                row[i] -= Q::from_integer(w.into());
            }
            let ns = linalg::nullspace(&f, &columns(&m, &cols), cols.len());
            if ns.is_empty() {
                continue;
            }
            let vecs: Vec<Vec<Q>> = ns.iter().map(|v| embed(dim, &cols, v)).collect();
            let sub = Subspace::new(&f, dim, &vecs);
            total += sub.dim();
            spaces.push(WeightSpace { weight: w, parity, basis: sub.basis().to_vec() });
        }
    }
    if total != dim {
        return Err(NilpotentError::NotDiagonalizable);
    }
    spaces.sort_by_key(|s| (s.parity, s.weight));
    Ok(spaces)
}

fn span(vectors: &[Vec<Q>], dim: usize) -> Subspace<Rationals> {
    Subspace::new(&Rationals, dim, vectors)
}

fn coords_of(v: &[GradedVector]) -> Vec<Vec<Q>> {
    v.iter().map(|g| g.coords.clone()).collect()
}

/// Kernel of `ad x` inside the span of `basis`, echelonized.
fn centralizer_in(alg: &LieSuperalgebra<Rationals>, x: &[Q], basis: &[Vec<Q>]) -> Vec<Vec<Q>> {
    if basis.is_empty() {
        return Vec::new();
    }
    let images: Vec<Vec<Q>> = basis.iter().map(|b| alg.bracket(x, b)).collect();
    let m = linalg::transpose(&images);
    let ns = linalg::nullspace(&Rationals, &m, basis.len());
    let vecs: Vec<Vec<Q>> = ns
        .iter()
        .map(|c| {
            let mut acc = alg.zero_vec();
            for (coef, b) in c.iter().zip(basis) {
                acc = linalg::axpy(&Rationals, &acc, coef, b);
            }
            acc
        })
        .collect();
    span(&vecs, alg.dim()).basis().to_vec()
}

/// Symplectic basis `u_1..u_{2s}` with `<u_i, u_{2s+1-i}> = -1` for `i <= s`.
fn symplectic_basis(form: impl Fn(&[Q], &[Q]) -> Q, basis: &[Vec<Q>]) -> Result<Vec<Vec<Q>>, NilpotentError> {
    let f = Rationals;
    let mut rest: Vec<Vec<Q>> = basis.to_vec();
    let mut pairs = Vec::new();
    while let Some(a) = rest.first().cloned() {
        let Some(bi) = rest.iter().position(|w| !form(&a, w).is_zero()) else {
            return Err(NilpotentError::Invariant("form on g(-1)_even is degenerate".into()));
        };
        let b = linalg::scale_vec(&f, &form(&a, &rest[bi]).recip(), &rest[bi]);
        let others: Vec<Vec<Q>> =
            rest.iter().enumerate().filter(|&(i, _)| i != 0 && i != bi).map(|(_, w)| w.clone()).collect();
        rest = others
            .into_iter()
            .map(|w| {
                let wb = form(&w, &b);
                let wa = form(&w, &a);
                let w1 = linalg::axpy(&f, &w, &-wb, &a);
                linalg::axpy(&f, &w1, &wa, &b)
            })
            .filter(|w| !linalg::is_zero_vec(&f, w))
            .collect();
        pairs.push((a, b));
    }
    let s = pairs.len();
    let mut u = vec![Vec::new(); 2 * s];
    for (i, (a, b)) in pairs.into_iter().enumerate() {
        u[i] = b;
        u[2 * s - 1 - i] = a;
    }
    Ok(u)
}

fn isotropic_vector(form: &impl Fn(&[Q], &[Q]) -> Q, rest: &[Vec<Q>]) -> Option<Vec<Q>> {
    let f = Rationals;
    if let Some(w) = rest.iter().find(|w| form(w, w).is_zero()) {
        return Some(w.clone());
    }
    for i in 0..rest.len() {
        for j in i + 1..rest.len() {
            let (a, b, c) = (form(&rest[j], &rest[j]), form(&rest[i], &rest[j]), form(&rest[i], &rest[i]));
            // a t^2 + 2 b t + c = 0
            let disc = &b * &b - &a * &c;
            if let Some(root) = rational_sqrt(&disc) {
                let t = (-&b + root) / &a;
                return Some(linalg::axpy(&f, &rest[i], &t, &rest[j]));
            }
        }
    }
    None
}

/// Largest `d` with `d^2 | n` for a small integer.
fn square_part(n: &BigInt) -> BigInt {
    let mut n = n.abs();
    let mut d = BigInt::one();
    let mut k = BigInt::from(2);
    while &k * &k <= n && k < BigInt::from(100_000) {
        let kk = &k * &k;
        while n.is_multiple_of(&kk) {
            n /= &kk;
            d *= &k;
        }
        k += 1;
    }
    d
}

/// Hyperbolic basis `v_1..v_r` with `<v_i, v_{r+1-i}> = 1`; for odd `r` the
/// middle vector is returned together with its norm.
fn hyperbolic_basis(
    form: impl Fn(&[Q], &[Q]) -> Q,
    basis: &[Vec<Q>],
) -> Result<(Vec<Vec<Q>>, Option<Q>), NilpotentError> {
    let f = Rationals;
    let mut rest: Vec<Vec<Q>> = basis.to_vec();
    let mut pairs = Vec::new();
    while rest.len() >= 2 {
        let Some(a) = isotropic_vector(&form, &rest) else {
            let gram = rest
                .iter()
                .map(|x| rest.iter().map(|y| crate::scalar::format_rational(&form(x, y))).collect())
                .collect();
            return Err(NilpotentError::IrrationalSplitting { gram });
        };
        let Some(b) = rest.iter().find(|w| !form(&a, w).is_zero()).cloned() else {
            return Err(NilpotentError::Invariant("form on g(-1)_odd is degenerate".into()));
        };
        let ab = form(&a, &b);
        let b = linalg::axpy(&f, &b, &(-form(&b, &b) / (Q::from_integer(2.into()) * &ab)), &a);
        let b = linalg::scale_vec(&f, &ab.recip(), &b);
        let mut next = Vec::new();
        let mut pool = rest.clone();
        pool.retain(|w| !linalg::is_zero_vec(&f, w));
        for w in pool {
            let wb = form(&w, &b);
            let wa = form(&w, &a);
            let w1 = linalg::axpy(&f, &w, &-wb, &a);
            let w2 = linalg::axpy(&f, &w1, &-wa, &b);
            next.push(w2);
        }
        // The projection kills a and b; drop the two dependent leftovers.
        let dim_target = rest.len() - 2;
        let sub = span(&next, a.len());
        rest = sub.basis().to_vec();
        if rest.len() != dim_target {
            return Err(NilpotentError::Invariant("hyperbolic projection lost rank".into()));
        }
        pairs.push((a, b));
    }
    let t = pairs.len();
    let middle = rest.pop();
    let r = 2 * t + usize::from(middle.is_some());
    let mut v = vec![Vec::new(); r];
    for (i, (a, b)) in pairs.into_iter().enumerate() {
        v[i] = b;
        v[r - 1 - i] = a;
    }
    let mut norm = None;
    if let Some(w) = middle {
        let c = form(&w, &w);
        if c.is_zero() {
            return Err(NilpotentError::Invariant("form on g(-1)_odd is degenerate".into()));
        }
        let (w, c) = match rational_sqrt(&c) {
            Some(root) => (linalg::scale_vec(&f, &root.recip(), &w), Q::one()),
            None => {
                // Rescale to a square-free integer norm.
                let den = c.denom().clone();
                let w = linalg::scale_vec(&f, &Q::from_integer(den.clone()), &w);
                let int = c.numer() * &den;
                let d = square_part(&int);
                let w = linalg::scale_vec(&f, &Q::from_integer(d.clone()).recip(), &w);
                (w, Q::from_integer(int / (&d * &d)))
            }
        };
        v[t] = w;
        norm = Some(c);
    }
    Ok((v, norm))
}

/// Runs the full construction and every structural check.
pub fn analyze_nilpotent(
    alg: &LieSuperalgebra<Rationals>,
    triple: &Sl2Triple<Q>,
    e_label: &str,
) -> Result<NilpotentData, NilpotentError> {
    let f = Rationals;
    let dim = alg.dim();
    crate::sl2::check_triple(alg, triple)?;
    let raw_gram = crate::algebra::invariant_form(alg)?;
    let ef = alg.form(&raw_gram, &triple.e, &triple.f);
    let zero_orbit = linalg::is_zero_vec(&f, &triple.e);
    // The supertrace can pair e and f to zero (e.g. E12+E34 in gl(2|2));
    // then the form is kept as is.
    let gram: Matrix<Q> = if zero_orbit || ef.is_zero() {
        raw_gram
    } else {
        let s = ef.recip();
        raw_gram.iter().map(|r| linalg::scale_vec(&f, &s, r)).collect()
    };
    let chi = linalg::mat_vec(&f, &linalg::transpose(&gram), &triple.e);
    let form = |x: &[Q], y: &[Q]| alg.form(&gram, x, y);
    let chi_br = |x: &[Q], y: &[Q]| linalg::dot(&f, &chi, &alg.bracket(x, y));

    let spaces = weight_decomposition(alg, &triple.h)?;
    let ws = |w: i32, p: Parity| -> Vec<Vec<Q>> {
        spaces.iter().find(|s| s.weight == w && s.parity == p).map_or(Vec::new(), |s| s.basis.clone())
    };
    let max_w = spaces.iter().map(|s| s.weight).max().unwrap_or(0);
    let min_w = spaces.iter().map(|s| s.weight).min().unwrap_or(0);
    let basis_weights: Vec<Option<i32>> = (0..dim)
        .map(|i| {
            let u = alg.unit(i);
            let hu = alg.bracket(&triple.h, &u);
            spaces.iter().map(|s| s.weight).find(|&w| hu == linalg::scale_vec(&f, &Q::from_integer(w.into()), &u))
        })
        .collect();

    // Co-basis of p: centralizer first, then [f, g(i+2)].
    let mut cob_x = Vec::new();
    let mut cob_y = Vec::new();
    let mut rest_x = Vec::new();
    let mut rest_y = Vec::new();
    for parity in [Parity::Even, Parity::Odd] {
        let (ce, fi) = if parity == Parity::Even { (&mut cob_x, &mut rest_x) } else { (&mut cob_y, &mut rest_y) };
        for w in 0..=max_w {
            for c in centralizer_in(alg, &triple.e, &ws(w, parity)) {
                ce.push(graded(c, w, parity));
            }
            let images: Vec<Vec<Q>> = ws(w + 2, parity).iter().map(|b| alg.bracket(&triple.f, b)).collect();
            for c in span(&images, dim).basis() {
                fi.push(graded(c.clone(), w, parity));
            }
        }
    }
    let l = cob_x.len();
    let qd = cob_y.len();
    cob_x.extend(rest_x);
    cob_y.extend(rest_y);

    let u_all = symplectic_basis(chi_br, &ws(-1, Parity::Even))?;
    let (v_all, middle_norm) = hyperbolic_basis(chi_br, &ws(-1, Parity::Odd))?;
    let s = u_all.len() / 2;
    let r = v_all.len();
    let dims = Dims { l, q: qd, m: cob_x.len(), n: cob_y.len(), s, r, t: r / 2 };
    let u: Vec<GradedVector> = u_all.into_iter().map(|c| graded(c, -1, Parity::Even)).collect();
    let v: Vec<GradedVector> = v_all.into_iter().map(|c| graded(c, -1, Parity::Odd)).collect();

    let mut m_basis: Vec<GradedVector> = u[s..].to_vec();
    m_basis.extend_from_slice(&v[dims.v_cobasis()..]);
    for w in (min_w..=-2).rev() {
        for parity in [Parity::Even, Parity::Odd] {
            for c in ws(w, parity) {
                m_basis.push(graded(c, w, parity));
            }
        }
    }
    let mut mprime_basis = m_basis.clone();
    if dims.r_odd() {
        mprime_basis.push(v[dims.t].clone());
    }
    let mut p_basis = Vec::new();
    for w in 0..=max_w {
        for parity in [Parity::Even, Parity::Odd] {
            for c in ws(w, parity) {
                p_basis.push(graded(c, w, parity));
            }
        }
    }
    let cobasis = Cobasis { x: cob_x, y: cob_y, u, v };

    // Structural checks.
    let ad_f_kernel = centralizer_in(alg, &triple.f, &(0..dim).map(|i| alg.unit(i)).collect::<Vec<_>>());
    let ge: Vec<Vec<Q>> = centralizer_in(alg, &triple.e, &(0..dim).map(|i| alg.unit(i)).collect::<Vec<_>>());
    let m_vecs = coords_of(&m_basis);
    let mperp_rows: Vec<Vec<Q>> = m_vecs.iter().map(|z| linalg::mat_vec(&f, &gram, z)).collect();
    let mperp = span(&linalg::nullspace(&f, &mperp_rows, dim), dim);
    let mprime_e: Vec<Vec<Q>> = mprime_basis.iter().map(|z| alg.bracket(&z.coords, &triple.e)).collect();
    let mprime_e = span(&mprime_e, dim);
    let gf = span(&ad_f_kernel, dim);
    let sum1 = mprime_e.sum(&gf);
    let mperp_ok = sum1.dim() == mprime_e.dim() + gf.dim() && sum1.same_as(&mperp);

    let p_space = span(&coords_of(&p_basis), dim);
    let f_images: Vec<Vec<Q>> = (2..=max_w)
        .flat_map(|j| {
            let mut out = ws(j, Parity::Even);
            out.extend(ws(j, Parity::Odd));
            out
        })
        .map(|b| alg.bracket(&triple.f, &b))
        .collect();
    let f_image = span(&f_images, dim);
    let ge_space = span(&ge, dim);
    let sum2 = f_image.sum(&ge_space);
    let p_ok = sum2.dim() == f_image.dim() + ge_space.dim() && sum2.same_as(&p_space);

    let mut dim_identity = [(0, 0); 2];
    for (slot, parity) in [Parity::Even, Parity::Odd].into_iter().enumerate() {
        let g_dim = alg.indices_of(parity).len();
        let ge_dim = ge.iter().filter(|v| alg.parity_of(v) == Some(parity)).count();
        let rhs: usize = (min_w..=-2).map(|k| 2 * ws(k, parity).len()).sum::<usize>() + ws(-1, parity).len();
        dim_identity[slot] = (g_dim - ge_dim, rhs);
    }
    let dim_identity_ok = dim_identity.iter().all(|(a, b)| a == b);

    let mut pairing_ok = true;
    for s1 in &spaces {
        for s2 in &spaces {
            let block: Vec<Vec<Q>> =
                s1.basis.iter().map(|x| s2.basis.iter().map(|y| form(x, y)).collect()).collect();
            if s1.weight + s2.weight != 0 {
                if block.iter().flatten().any(|x| !x.is_zero()) {
                    pairing_ok = false;
                }
            } else if s1.parity == s2.parity && linalg::rank(&f, &block) != s1.basis.len() {
                pairing_ok = false;
            }
        }
    }
    let g_minus1_even_dim_even = ws(-1, Parity::Even).len() % 2 == 0;

    let mut chi_support_ok = true;
    for sp in &spaces {
        if sp.parity.is_odd() || sp.weight != -2 {
            chi_support_ok &= sp.basis.iter().all(|b| linalg::dot(&f, &chi, b).is_zero());
        }
    }
    let in_weight = |x: &[Q], w: i32| ws(w, Parity::Even).is_empty() && linalg::is_zero_vec(&f, x)
        || span(&ws(w, Parity::Even), dim).contains(x);
    chi_support_ok &= zero_orbit || (in_weight(&triple.e, 2) && in_weight(&triple.f, -2));

    let mut forms_ok = true;
    let su = &cobasis.u;
    for i in 0..2 * s {
        for j in 0..2 * s {
            let expect = if i + j + 2 == 2 * s + 1 {
                if i < s {
                    -Q::one()
                } else {
                    Q::one()
                }
            } else {
                Q::zero()
            };
            forms_ok &= chi_br(&su[i].coords, &su[j].coords) == expect;
        }
    }
    let sv = &cobasis.v;
    for i in 0..r {
        for j in 0..r {
            let expect = if i + j + 2 == r + 1 {
                if dims.r_odd() && i == dims.t {
                    middle_norm.clone().unwrap_or_default()
                } else {
                    Q::one()
                }
            } else {
                Q::zero()
            };
            forms_ok &= chi_br(&sv[i].coords, &sv[j].coords) == expect;
        }
    }

    let closed = |b: &[GradedVector]| {
        let sp = span(&coords_of(b), dim);
        b.iter().all(|x| b.iter().all(|y| sp.contains(&alg.bracket(&x.coords, &y.coords))))
    };
    let character = m_basis
        .iter()
        .all(|x| m_basis.iter().all(|y| chi_br(&x.coords, &y.coords).is_zero()));
    let subalgebras_ok = closed(&m_basis) && closed(&mprime_basis) && closed(&p_basis) && character;

    let checks = StructureReport {
        mperp_dim: mperp.dim(),
        mprime_e_dim: mprime_e.dim(),
        gf_dim: gf.dim(),
        mperp_ok,
        p_dim: p_space.dim(),
        f_image_dim: f_image.dim(),
        ge_dim: ge_space.dim(),
        p_ok,
        dim_identity,
        dim_identity_ok,
        pairing_ok,
        g_minus1_even_dim_even,
        chi_support_ok,
        forms_ok,
        subalgebras_ok,
    };
    if !checks.all_ok() {
        return Err(NilpotentError::Invariant(format!("{checks:?}")));
    }
    if dims.l + dims.q != ge_space.dim() {
        return Err(NilpotentError::Invariant("centralizer basis is incomplete".into()));
    }

    Ok(NilpotentData {
        kind: alg.kind,
        e_label: e_label.to_string(),
        triple: triple.clone(),
        gram,
        chi,
        basis_weights,
        weight_spaces: spaces,
        cobasis,
        dims,
        m_basis,
        mprime_basis,
        p_basis,
        middle_norm,
        checks,
    })
}

/// Convenience: triple plus analysis.
pub fn analyze_element(
    alg: &LieSuperalgebra<Rationals>,
    e: &[Q],
    e_label: &str,
) -> Result<NilpotentData, NilpotentError> {
    let triple = sl2_triple(alg, e)?;
    analyze_nilpotent(alg, &triple, e_label)
}

/// Resolves a nilpotent description: `zero`, `regular`, a sum of basis
/// labels such as `E12+E34`, or explicit coordinates `[c1, c2, ...]`.
pub fn nilpotent_preset(alg: &LieSuperalgebra<Rationals>, name: &str) -> Result<Vec<Q>, NilpotentError> {
    let name = name.trim();
    let f = Rationals;
    match name {
        "zero" | "0" => return Ok(alg.zero_vec()),
        "regular" => return Ok(regular_nilpotent(alg)),
        _ => {}
    }
    if let Some(list) = name.strip_prefix('[').and_then(|s| s.strip_suffix(']')) {
        let coords = list
            .split(',')
            .map(|s| crate::scalar::parse_rational(s.trim()))
            .collect::<Result<Vec<_>, _>>()
            .map_err(|e| NilpotentError::BadInput(e.to_string()))?;
        if coords.len() != alg.dim() {
            return Err(NilpotentError::BadInput(format!("expected {} coordinates", alg.dim())));
        }
        return Ok(coords);
    }
    let mut out = alg.zero_vec();
    for term in name.split('+') {
        let term = term.trim();
        let v = match alg.basis.iter().position(|b| b.label == term) {
            Some(i) => alg.unit(i),
            None => matrix_unit_coords(alg, term)
                .ok_or_else(|| NilpotentError::BadInput(format!("unknown nilpotent {term:?}")))?,
        };
        out = linalg::add_vec(&f, &out, &v);
    }
    Ok(out)
}

/// A matrix unit `Eij` expressed in the basis, when it lies in the algebra.
fn matrix_unit_coords(alg: &LieSuperalgebra<Rationals>, label: &str) -> Option<Vec<Q>> {
    let real = alg.realization.as_ref()?;
    let digits = label.strip_prefix('E')?;
    let (i, j) = match digits.split_once(',') {
        Some((a, b)) => (a.parse::<usize>().ok()?, b.parse::<usize>().ok()?),
        None if digits.len() == 2 => (digits[..1].parse().ok()?, digits[1..].parse().ok()?),
        None => return None,
    };
    if i == 0 || j == 0 || i > real.size || j > real.size {
        return None;
    }
    let mut m = vec![vec![Q::zero(); real.size]; real.size];
    m[i - 1][j - 1] = Q::one();
    real.coords(&Rationals, &m)
}

/// Sum of the even basis vectors supported on the first superdiagonal of a
/// diagonal block: a principal nilpotent of the even part for `gl`, `sl`
/// and `osp(m|2k)` with `m <= 1`.
pub fn regular_nilpotent(alg: &LieSuperalgebra<Rationals>) -> Vec<Q> {
    let Some(real) = alg.realization.as_ref() else {
        return alg.zero_vec();
    };
    let mut out = alg.zero_vec();
    for (i, m) in real.matrices.iter().enumerate() {
        if alg.parity(i).is_odd() {
            continue;
        }
        let mut entries = Vec::new();
        for (r, row) in m.iter().enumerate() {
            for (c, x) in row.iter().enumerate() {
                if !x.is_zero() {
                    entries.push((r, c));
                }
            }
        }
        let on_superdiagonal = !entries.is_empty()
            && entries.iter().all(|&(r, c)| c == r + 1 && real.row_parity[r] == real.row_parity[c]);
        if on_superdiagonal {
            out[i] = Q::one();
        }
    }
    out
}

pub(crate) mod vec_q {
    use super::*;
    use serde::{Deserializer, Serializer};

    pub fn serialize<S: Serializer>(v: &[Q], s: S) -> Result<S::Ok, S::Error> {
        let strs: Vec<String> = v.iter().map(crate::scalar::format_rational).collect();
        strs.serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Vec<Q>, D::Error> {
        let strs = Vec::<String>::deserialize(d)?;
        strs.iter()
            .map(|s| crate::scalar::parse_rational(s).map_err(serde::de::Error::custom))
            .collect()
    }
}

pub(crate) mod vecvec_q {
    use super::*;
    use serde::{Deserializer, Serializer};

    pub fn serialize<S: Serializer>(v: &[Vec<Q>], s: S) -> Result<S::Ok, S::Error> {
        let strs: Vec<Vec<String>> =
            v.iter().map(|r| r.iter().map(crate::scalar::format_rational).collect()).collect();
        strs.serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Vec<Vec<Q>>, D::Error> {
        let strs = Vec::<Vec<String>>::deserialize(d)?;
        strs.iter()
            .map(|r| {
                r.iter()
                    .map(|s| crate::scalar::parse_rational(s).map_err(serde::de::Error::custom))
                    .collect()
            })
            .collect()
    }
}

pub(crate) mod opt_q {
    use super::*;
    use serde::{Deserializer, Serializer};

    pub fn serialize<S: Serializer>(v: &Option<Q>, s: S) -> Result<S::Ok, S::Error> {
        v.as_ref().map(crate::scalar::format_rational).serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Option<Q>, D::Error> {
        Option::<String>::deserialize(d)?
            .map(|s| crate::scalar::parse_rational(&s).map_err(serde::de::Error::custom))
            .transpose()
    }
}

pub(crate) mod triple_q {
    use super::*;
    use serde::{Deserializer, Serializer};

    #[derive(Serialize, Deserialize)]
    struct Repr {
        #[serde(with = "vec_q")]
        e: Vec<Q>,
        #[serde(with = "vec_q")]
        h: Vec<Q>,
        #[serde(with = "vec_q")]
        f: Vec<Q>,
    }

    pub fn serialize<S: Serializer>(t: &Sl2Triple<Q>, s: S) -> Result<S::Ok, S::Error> {
        Repr { e: t.e.clone(), h: t.h.clone(), f: t.f.clone() }.serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Sl2Triple<Q>, D::Error> {
        let r = Repr::deserialize(d)?;
        Ok(Sl2Triple { e: r.e, h: r.h, f: r.f })
    }
}

/// Integer exponent helper used by reports.
pub fn pow_usize(base: usize, exp: usize) -> Option<u128> {
    (base as u128).checked_pow(exp as u32)
}

/// Exact integer value of a rational, when it is one.
pub fn as_integer(q: &Q) -> Option<i64> {
    if q.is_integer() {
        q.numer().to_i64()
    } else {
        None
    }
}

/// Weight histogram `(weight, parity) -> dim`, handy for reports.
pub fn weight_table(nd: &NilpotentData) -> BTreeMap<(i32, Parity), usize> {
    nd.weight_spaces.iter().map(|s| ((s.weight, s.parity), s.basis.len())).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::{build_algebra, Family};

    fn analyze(fam: Family, m: usize, n: usize, e: &str) -> NilpotentData {
        let alg = build_algebra(fam, m, n).unwrap();
        let ev = nilpotent_preset(&alg, e).unwrap();
        analyze_element(&alg, &ev, e).unwrap()
    }

    #[test]
    fn osp12_regular_dims() {
        let nd = analyze(Family::Osp, 1, 2, "regular");
        let d = nd.dims;
        assert_eq!((d.l, d.q, d.s, d.r, d.t), (1, 1, 0, 1, 0));
        assert!(d.r_odd());
        let parity_dims = |b: &[GradedVector]| {
            let odd = b.iter().filter(|v| v.parity.is_odd()).count();
            (b.len() - odd, odd)
        };
        assert_eq!(parity_dims(&nd.m_basis), (1, 0));
        assert_eq!(parity_dims(&nd.mprime_basis), (1, 1));
        assert_eq!((d.m, d.n), (2, 1));
        // (e, f) = 1 forces <v, v> = 2, which has no rational square root.
        assert_eq!(nd.middle_norm, Some(Q::from_integer(2.into())));
    }

    #[test]
    fn sl21_e12_dims() {
        let nd = analyze(Family::Sl, 2, 1, "E12");
        let d = nd.dims;
        assert_eq!((d.l, d.q, d.s, d.r, d.t), (2, 2, 0, 2, 1));
        assert_eq!(nd.m_basis.len(), 2);
        assert_eq!(nd.checks.dim_identity, [(2, 2), (2, 2)]);
        let e21 = nd.kind;
        assert_eq!(e21.to_string(), "sl(2|1)");
    }

    #[test]
    fn zero_orbit() {
        let nd = analyze(Family::Gl, 1, 1, "zero");
        assert!(nd.m_basis.is_empty());
        assert_eq!(nd.p_basis.len(), 4);
        assert_eq!(nd.dims.l + nd.dims.q, 4);
        assert_eq!(nd.dims.r, 0);
    }

    #[test]
    fn gl22_nilpotents() {
        for e in ["E12", "E12+E34", "E34"] {
            let nd = analyze(Family::Gl, 2, 2, e);
            assert!(nd.checks.all_ok());
        }
    }

    #[test]
    fn symmetric_splitting_with_rational_square_root() {
        // <v, v> = 4 normalizes to 1.
        let form = |x: &[Q], y: &[Q]| Q::from_integer(4.into()) * &x[0] * &y[0];
        let (v, c) = hyperbolic_basis(form, &[vec![Q::one()]]).unwrap();
        assert_eq!(c, Some(Q::one()));
        assert_eq!(v[0][0], Q::new(1.into(), 2.into()));
    }

    #[test]
    fn anisotropic_plane_is_reported() {
        // x^2 + y^2 has no rational isotropic vector.
        let form = |x: &[Q], y: &[Q]| &x[0] * &y[0] + &x[1] * &y[1];
        let basis = vec![vec![Q::one(), Q::zero()], vec![Q::zero(), Q::one()]];
        assert!(matches!(hyperbolic_basis(form, &basis), Err(NilpotentError::IrrationalSplitting { .. })));
    }
}
