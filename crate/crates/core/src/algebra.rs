//! Lie superalgebras given by supermatrix realizations.
//!
//! The three families `gl(m|n)`, `sl(m|n)` and `osp(m|2k)` are realized
//! inside `(m+n) x (m+n)` supermatrices whose first `m` rows are even.
//! Structure constants come from supercommutators and the invariant form
//! is the supertrace form `(a, b) = str(ab)`.

use std::fmt;
use std::str::FromStr;

use num_rational::BigRational;
use serde::{Deserialize, Serialize};

use crate::linalg::{self, SparseVec};
use crate::scalar::{Field, PrimeField, Rationals, ScalarError};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Parity {
    Even,
    Odd,
}

impl Parity {
    pub fn of_bit(odd: bool) -> Parity {
        if odd {
            Parity::Odd
        } else {
            Parity::Even
        }
    }

    pub fn is_odd(self) -> bool {
        self == Parity::Odd
    }

    pub fn bit(self) -> u8 {
        self as u8
    }

    pub fn add(self, other: Parity) -> Parity {
        Parity::of_bit(self.is_odd() != other.is_odd())
    }

    /// True when `(-1)^{|a||b|} = -1`.
    pub fn sign_flip(self, other: Parity) -> bool {
        self.is_odd() && other.is_odd()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Family {
    Gl,
    Sl,
    Osp,
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Family::Gl => "gl",
            Family::Sl => "sl",
            Family::Osp => "osp",
        })
    }
}

impl FromStr for Family {
    type Err = AlgebraError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.to_ascii_lowercase().as_str() {
            "gl" => Ok(Family::Gl),
            "sl" => Ok(Family::Sl),
            "osp" => Ok(Family::Osp),
            other => Err(AlgebraError::InvalidParameters(format!("unknown family {other:?}"))),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum AlgebraError {
    #[error("invalid parameters: {0}")]
    InvalidParameters(String),
    #[error("invariant form is degenerate (rank {rank} of {dim})")]
    DegenerateForm { rank: usize, dim: usize },
    #[error("axiom violated: {0}")]
    Axiom(String),
    #[error("no matrix realization available")]
    NoRealization,
    #[error(transparent)]
    Scalar(#[from] ScalarError),
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct BasisVector {
    pub index: usize,
    pub parity: Parity,
    pub label: String,
}

pub type Matrix<E> = Vec<Vec<E>>;

/// A faithful supermatrix representation together with a coordinate map.
#[derive(Debug, Clone, PartialEq)]
pub struct Realization<F: Field> {
    pub size: usize,
    pub row_parity: Vec<Parity>,
    pub matrices: Vec<Matrix<F::Elem>>,
    /// Pivot entry `(row, col)` and the coefficients it contributes.
    coord_pivots: Vec<((usize, usize), Vec<F::Elem>)>,
    residual_rows: Vec<Vec<F::Elem>>,
}

impl<F: Field> Realization<F> {
    pub fn new(f: &F, row_parity: Vec<Parity>, matrices: Vec<Matrix<F::Elem>>) -> Option<Self> {
        let size = row_parity.len();
        let dim = matrices.len();
        let mut rows: Vec<Vec<F::Elem>> = matrices
            .iter()
            .enumerate()
            .map(|(i, m)| {
                let mut r: Vec<F::Elem> = m.iter().flatten().cloned().collect();
                r.extend((0..dim).map(|j| if i == j { f.one() } else { f.zero() }));
                r
            })
            .collect();
        let pivots = linalg::rref(f, &mut rows);
        if pivots.len() != dim || pivots.iter().any(|&c| c >= size * size) {
            return None;
        }
        let coord_pivots = rows
            .iter()
            .zip(&pivots)
            .map(|(r, &c)| ((c / size, c % size), r[size * size..].to_vec()))
            .collect();
        let residual_rows = rows.iter().map(|r| r[..size * size].to_vec()).collect();
        Some(Realization { size, row_parity, matrices, coord_pivots, residual_rows })
    }

    /// Coordinates of `m` in the basis, or `None` when `m` is outside the span.
    pub fn coords(&self, f: &F, m: &Matrix<F::Elem>) -> Option<Vec<F::Elem>> {
        let dim = self.matrices.len();
        let mut flat: Vec<F::Elem> = m.iter().flatten().cloned().collect();
        let mut out = vec![f.zero(); dim];
        for (((r, c), coeffs), row) in self.coord_pivots.iter().zip(&self.residual_rows) {
            let a = m[*r][*c].clone();
            if f.is_zero(&a) {
                continue;
            }
            out = linalg::axpy(f, &out, &a, coeffs);
            let na = f.neg(&a);
            flat = linalg::axpy(f, &flat, &na, row);
        }
        if linalg::is_zero_vec(f, &flat) {
            Some(out)
        } else {
            None
        }
    }

    pub fn matrix_of(&self, f: &F, x: &[F::Elem]) -> Matrix<F::Elem> {
        let mut out = vec![vec![f.zero(); self.size]; self.size];
        for (c, m) in x.iter().zip(&self.matrices) {
            if f.is_zero(c) {
                continue;
            }
            for (orow, mrow) in out.iter_mut().zip(m) {
                for (o, v) in orow.iter_mut().zip(mrow) {
                    if !f.is_zero(v) {
                        f.add_mul(o, c, v);
                    }
                }
            }
        }
        out
    }

    pub fn supertrace(&self, f: &F, m: &Matrix<F::Elem>) -> F::Elem {
        let mut acc = f.zero();
        for (i, p) in self.row_parity.iter().enumerate() {
            acc = match p {
                Parity::Even => f.add(&acc, &m[i][i]),
                Parity::Odd => f.sub(&acc, &m[i][i]),
            };
        }
        acc
    }

    pub fn map<G: Field>(&self, g: &G, conv: impl Fn(&F::Elem) -> G::Elem) -> Option<Realization<G>> {
        let mats = self
            .matrices
            .iter()
            .map(|m| m.iter().map(|r| r.iter().map(&conv).collect()).collect())
            .collect();
        Realization::new(g, self.row_parity.clone(), mats)
    }
}

pub fn mat_pow<F: Field>(f: &F, m: &Matrix<F::Elem>, mut n: u64) -> Matrix<F::Elem> {
    let size = m.len();
    let mut acc: Matrix<F::Elem> =
        (0..size).map(|i| (0..size).map(|j| if i == j { f.one() } else { f.zero() }).collect()).collect();
    let mut base = m.clone();
    while n > 0 {
        if n & 1 == 1 {
            acc = linalg::mat_mul(f, &acc, &base);
        }
        base = linalg::mat_mul(f, &base, &base);
        n >>= 1;
    }
    acc
}

/// `AB - (-1)^{|A||B|} BA`.
pub fn supercommutator<F: Field>(
    f: &F,
    a: &Matrix<F::Elem>,
    pa: Parity,
    b: &Matrix<F::Elem>,
    pb: Parity,
) -> Matrix<F::Elem> {
    let ab = linalg::mat_mul(f, a, b);
    let ba = linalg::mat_mul(f, b, a);
    ab.iter()
        .zip(&ba)
        .map(|(r1, r2)| {
            r1.iter()
                .zip(r2)
                .map(|(x, y)| if pa.sign_flip(pb) { f.add(x, y) } else { f.sub(x, y) })
                .collect()
        })
        .collect()
}

/// Which realization a [`LieSuperalgebra`] came from.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct AlgebraKind {
    pub family: Family,
    pub m: usize,
    pub n: usize,
}

impl fmt::Display for AlgebraKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}({}|{})", self.family, self.m, self.n)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct LieSuperalgebra<F: Field> {
    pub field: F,
    pub kind: AlgebraKind,
    pub basis: Vec<BasisVector>,
    /// `brackets[i][j]` is `[b_i, b_j]` in basis coordinates.
    pub brackets: Vec<Vec<SparseVec<F::Elem>>>,
    /// Supertrace form on the basis, not yet normalized.
    pub gram: Matrix<F::Elem>,
    pub realization: Option<Realization<F>>,
}

impl<F: Field> LieSuperalgebra<F> {
    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    /// `(dim g_0, dim g_1)`.
    pub fn sdim(&self) -> (usize, usize) {
        let odd = self.basis.iter().filter(|b| b.parity.is_odd()).count();
        (self.dim() - odd, odd)
    }

    pub fn parity(&self, i: usize) -> Parity {
        self.basis[i].parity
    }

    pub fn indices_of(&self, p: Parity) -> Vec<usize> {
        self.basis.iter().filter(|b| b.parity == p).map(|b| b.index).collect()
    }

    pub fn unit(&self, i: usize) -> Vec<F::Elem> {
        let f = &self.field;
        (0..self.dim()).map(|j| if i == j { f.one() } else { f.zero() }).collect()
    }

    pub fn zero_vec(&self) -> Vec<F::Elem> {
        vec![self.field.zero(); self.dim()]
    }

    /// Parity of a vector, `None` for zero or inhomogeneous vectors.
    pub fn parity_of(&self, x: &[F::Elem]) -> Option<Parity> {
        let mut seen = None;
        for (i, c) in x.iter().enumerate() {
            if self.field.is_zero(c) {
                continue;
            }
            match seen {
                None => seen = Some(self.parity(i)),
                Some(p) if p != self.parity(i) => return None,
                _ => {}
            }
        }
        seen
    }

    pub fn bracket(&self, x: &[F::Elem], y: &[F::Elem]) -> Vec<F::Elem> {
        let f = &self.field;
        let mut out = self.zero_vec();
        for (i, a) in x.iter().enumerate() {
            if f.is_zero(a) {
                continue;
            }
            for (j, b) in y.iter().enumerate() {
                if f.is_zero(b) {
                    continue;
                }
                let ab = f.mul(a, b);
                for (k, c) in &self.brackets[i][j] {
                    f.add_mul(&mut out[*k], &ab, c);
                }
            }
        }
        out
    }

    /// Matrix of `ad x`; entry `[k][j]` is the `b_k` coefficient of `[x, b_j]`.
    pub fn ad_matrix(&self, x: &[F::Elem]) -> Matrix<F::Elem> {
        let cols: Vec<Vec<F::Elem>> = (0..self.dim()).map(|j| self.bracket(x, &self.unit(j))).collect();
        linalg::transpose(&cols)
    }

    pub fn form(&self, gram: &Matrix<F::Elem>, x: &[F::Elem], y: &[F::Elem]) -> F::Elem {
        linalg::bilinear(&self.field, gram, x, y)
    }

    /// Super skew-symmetry and the super Jacobi identity on all basis pairs and triples.
    pub fn check_axioms(&self) -> Result<(), AlgebraError> {
        let f = &self.field;
        let n = self.dim();
        for i in 0..n {
            for j in 0..n {
                let a = linalg::sparse_to_dense(f, &self.brackets[i][j], n);
                let b = linalg::sparse_to_dense(f, &self.brackets[j][i], n);
                let s = if self.parity(i).sign_flip(self.parity(j)) { f.one() } else { f.neg(&f.one()) };
                if a != linalg::scale_vec(f, &s, &b) {
                    return Err(AlgebraError::Axiom(format!(
                        "skew-symmetry fails for ({}, {})",
                        self.basis[i].label, self.basis[j].label
                    )));
                }
            }
        }
        for i in 0..n {
            for j in 0..n {
                for k in 0..n {
                    let (x, y, z) = (self.unit(i), self.unit(j), self.unit(k));
                    let (px, py, pz) = (self.parity(i), self.parity(j), self.parity(k));
                    let t1 = self.bracket(&x, &self.bracket(&y, &z));
                    let t2 = self.bracket(&y, &self.bracket(&z, &x));
                    let t3 = self.bracket(&z, &self.bracket(&x, &y));
                    let s1 = f.sign(px.sign_flip(pz));
                    let s2 = f.sign(py.sign_flip(px));
                    let s3 = f.sign(pz.sign_flip(py));
                    let total = linalg::add_vec(
                        f,
                        &linalg::add_vec(f, &linalg::scale_vec(f, &s1, &t1), &linalg::scale_vec(f, &s2, &t2)),
                        &linalg::scale_vec(f, &s3, &t3),
                    );
                    if !linalg::is_zero_vec(f, &total) {
                        return Err(AlgebraError::Axiom(format!(
                            "Jacobi identity fails for ({}, {}, {})",
                            self.basis[i].label, self.basis[j].label, self.basis[k].label
                        )));
                    }
                }
            }
        }
        Ok(())
    }

    /// Checks that `gram` is even, supersymmetric, invariant and nondegenerate.
    pub fn check_form(&self, gram: &Matrix<F::Elem>) -> Result<(), AlgebraError> {
        let f = &self.field;
        let n = self.dim();
        for i in 0..n {
            for j in 0..n {
                let (pi, pj) = (self.parity(i), self.parity(j));
                if pi != pj && !f.is_zero(&gram[i][j]) {
                    return Err(AlgebraError::Axiom(format!(
                        "form is not even on ({}, {})",
                        self.basis[i].label, self.basis[j].label
                    )));
                }
                let expect = f.mul(&f.sign(pi.sign_flip(pj)), &gram[j][i]);
                if gram[i][j] != expect {
                    return Err(AlgebraError::Axiom(format!(
                        "form is not supersymmetric on ({}, {})",
                        self.basis[i].label, self.basis[j].label
                    )));
                }
            }
        }
        for i in 0..n {
            for j in 0..n {
                let ab = self.bracket(&self.unit(i), &self.unit(j));
                for k in 0..n {
                    let lhs = self.form(gram, &ab, &self.unit(k));
                    let bc = self.bracket(&self.unit(j), &self.unit(k));
                    let rhs = self.form(gram, &self.unit(i), &bc);
                    if lhs != rhs {
                        return Err(AlgebraError::Axiom(format!(
                            "form is not invariant on ({}, {}, {})",
                            self.basis[i].label, self.basis[j].label, self.basis[k].label
                        )));
                    }
                }
            }
        }
        let rank = linalg::rank(f, gram);
        if rank != n {
            return Err(AlgebraError::DegenerateForm { rank, dim: n });
        }
        Ok(())
    }

    /// Reduction of every structure constant and realization entry into `g`.
    pub fn convert<G: Field>(
        &self,
        g: &G,
        conv: impl Fn(&F::Elem) -> Result<G::Elem, ScalarError>,
    ) -> Result<LieSuperalgebra<G>, AlgebraError> {
        let mut brackets = Vec::with_capacity(self.dim());
        for row in &self.brackets {
            let mut out_row = Vec::with_capacity(row.len());
            for entry in row {
                let mut v = Vec::new();
                for (k, c) in entry {
                    let r = conv(c)?;
                    if !g.is_zero(&r) {
                        v.push((*k, r));
                    }
                }
                out_row.push(v);
            }
            brackets.push(out_row);
        }
        let gram = self
            .gram
            .iter()
            .map(|r| r.iter().map(&conv).collect::<Result<Vec<_>, _>>())
            .collect::<Result<Vec<_>, _>>()?;
        let realization = match &self.realization {
            Some(real) => {
                let ok = std::cell::Cell::new(true);
                let r = real.map(g, |x| match conv(x) {
                    Ok(v) => v,
                    Err(_) => {
                        ok.set(false);
                        g.zero()
                    }
                });
                if !ok.get() {
                    return Err(AlgebraError::InvalidParameters("realization is not integral".into()));
                }
                Some(r.ok_or_else(|| {
                    AlgebraError::InvalidParameters("realization degenerates after reduction".into())
                })?)
            }
            None => None,
        };
        Ok(LieSuperalgebra { field: g.clone(), kind: self.kind, basis: self.basis.clone(), brackets, gram, realization })
    }
}

impl LieSuperalgebra<Rationals> {
    pub fn reduce_constants(&self, p: u64) -> Result<LieSuperalgebra<PrimeField>, AlgebraError> {
        let fp = PrimeField::new(p)?;
        self.convert(&fp, |q| fp.from_rational(q))
    }
}

fn unit_label(size: usize, i: usize, j: usize) -> String {
    if size <= 9 {
        format!("E{}{}", i + 1, j + 1)
    } else {
        format!("E{},{}", i + 1, j + 1)
    }
}

fn q(n: i64) -> BigRational {
    Rationals.from_i64(n)
}

/// Display name of a sparse matrix, e.g. `E11-E22`.
fn matrix_label(size: usize, m: &Matrix<BigRational>) -> String {
    let mut s = String::new();
    for i in 0..size {
        for j in 0..size {
            let c = &m[i][j];
            if c == &q(0) {
                continue;
            }
            let neg = c < &q(0);
            let abs = if neg { -c } else { c.clone() };
            if !s.is_empty() || neg {
                s.push(if neg { '-' } else { '+' });
            }
            if abs != q(1) {
                s.push_str(&format!("{abs}*"));
            }
            s.push_str(&unit_label(size, i, j));
        }
    }
    s
}

/// Antidiagonal even supersymmetric form used to define `osp(m|2k)`.
fn osp_form(m: usize, k: usize) -> Matrix<BigRational> {
    let size = m + 2 * k;
    let mut j = vec![vec![q(0); size]; size];
    for i in 0..m {
        j[i][m - 1 - i] = q(1);
    }
    for i in 0..2 * k {
        j[m + i][m + 2 * k - 1 - i] = if i < k { q(1) } else { q(-1) };
    }
    j
}

/// Supermatrices of parity `px` preserving the form `j`: solves
/// `B(Xu, w) + (-1)^{|X||u|} B(u, Xw) = 0` on basis vectors.
fn osp_solutions(row_parity: &[Parity], j: &Matrix<BigRational>, px: Parity) -> Vec<Matrix<BigRational>> {
    let f = Rationals;
    let size = row_parity.len();
    let unknowns: Vec<(usize, usize)> = (0..size)
        .flat_map(|r| (0..size).map(move |c| (r, c)))
        .filter(|&(r, c)| row_parity[r].add(row_parity[c]) == px)
        .collect();
    let mut rows = Vec::new();
    for a in 0..size {
        for b in 0..size {
            let mut eq = vec![q(0); unknowns.len()];
            let sign = f.sign(px.sign_flip(row_parity[a]));
            for (u, &(r, c)) in unknowns.iter().enumerate() {
                // X_{ca'} with c' = r: sum_c X_{c a} J_{c b}
                if c == a {
                    eq[u] += &j[r][b];
                }
                // sum_c J_{a c} X_{c b}
                if c == b {
                    eq[u] += &sign * &j[a][r];
                }
            }
            if eq.iter().any(|x| x != &q(0)) {
                rows.push(eq);
            }
        }
    }
    let ns = linalg::nullspace(&f, &rows, unknowns.len());
    ns.into_iter()
        .map(|v| {
            let mut m = vec![vec![q(0); size]; size];
            for (x, &(r, c)) in v.iter().zip(&unknowns) {
                m[r][c] = x.clone();
            }
            m
        })
        .collect()
}

/// Builds the algebra with its realization, structure constants and supertrace Gram matrix.
pub fn build_algebra(family: Family, m: usize, n: usize) -> Result<LieSuperalgebra<Rationals>, AlgebraError> {
    let f = Rationals;
    let size = m + n;
    let row_parity: Vec<Parity> = (0..size).map(|i| Parity::of_bit(i >= m)).collect();
    let unit = |i: usize, j: usize| {
        let mut mat = vec![vec![q(0); size]; size];
        mat[i][j] = q(1);
        mat
    };
    let mut mats: Vec<Matrix<BigRational>> = Vec::new();
    match family {
        Family::Gl => {
            if size == 0 {
                return Err(AlgebraError::InvalidParameters("gl(0|0) is zero".into()));
            }
            for i in 0..size {
                for j in 0..size {
                    mats.push(unit(i, j));
                }
            }
        }
        Family::Sl => {
            if size < 2 {
                return Err(AlgebraError::InvalidParameters(format!("sl({m}|{n}) has m + n < 2")));
            }
            for i in 0..size {
                for j in 0..size {
                    if i != j {
                        mats.push(unit(i, j));
                    } else if i + 1 < size {
                        let mut h = unit(i, i);
                        h[i + 1][i + 1] = if row_parity[i] == row_parity[i + 1] { q(-1) } else { q(1) };
                        mats.push(h);
                    }
                }
            }
        }
        Family::Osp => {
            if !n.is_multiple_of(2) {
                return Err(AlgebraError::InvalidParameters(format!("osp({m}|{n}) needs n even")));
            }
            if size == 0 {
                return Err(AlgebraError::InvalidParameters("osp(0|0) is zero".into()));
            }
            let j = osp_form(m, n / 2);
            for px in [Parity::Even, Parity::Odd] {
                for mut mat in osp_solutions(&row_parity, &j, px) {
                    let lead = mat.iter().flatten().find(|x| *x != &q(0)).cloned().expect("nonzero solution");
                    for x in mat.iter_mut().flatten() {
                        *x = &*x / &lead;
                    }
                    mats.push(mat);
                }
            }
            let first = |mat: &Matrix<BigRational>| mat.iter().flatten().position(|x| x != &q(0));
            mats.sort_by_key(|mat| first(mat));
            if mats.is_empty() {
                return Err(AlgebraError::InvalidParameters(format!("osp({m}|{n}) is zero")));
            }
        }
    }
    let basis: Vec<BasisVector> = mats
        .iter()
        .enumerate()
        .map(|(index, mat)| {
            let (r, c) = (0..size)
                .flat_map(|r| (0..size).map(move |c| (r, c)))
                .find(|&(r, c)| mat[r][c] != q(0))
                .expect("nonzero basis matrix");
            let label = if family == Family::Gl { unit_label(size, r, c) } else { matrix_label(size, mat) };
            BasisVector { index, parity: row_parity[r].add(row_parity[c]), label }
        })
        .collect();
    let realization = Realization::new(&f, row_parity, mats).ok_or_else(|| {
        AlgebraError::InvalidParameters("basis matrices are linearly dependent".into())
    })?;
    let dim = basis.len();
    let mut brackets = vec![vec![Vec::new(); dim]; dim];
    for i in 0..dim {
        for j in 0..dim {
            let c = supercommutator(
                &f,
                &realization.matrices[i],
                basis[i].parity,
                &realization.matrices[j],
                basis[j].parity,
            );
            let coords = realization
                .coords(&f, &c)
                .ok_or_else(|| AlgebraError::Axiom("supercommutator leaves the algebra".into()))?;
            brackets[i][j] = linalg::dense_to_sparse(&f, &coords);
        }
    }
    let gram = (0..dim)
        .map(|i| {
            (0..dim)
                .map(|j| {
                    let prod = linalg::mat_mul(&f, &realization.matrices[i], &realization.matrices[j]);
                    realization.supertrace(&f, &prod)
                })
                .collect()
        })
        .collect();
    let alg = LieSuperalgebra {
        field: f,
        kind: AlgebraKind { family, m, n },
        basis,
        brackets,
        gram,
        realization: Some(realization),
    };
    alg.check_axioms()?;
    Ok(alg)
}

/// The supertrace Gram matrix, checked against the four form axioms.
pub fn invariant_form<F: Field>(alg: &LieSuperalgebra<F>) -> Result<Matrix<F::Elem>, AlgebraError> {
    let real = alg.realization.as_ref().ok_or(AlgebraError::NoRealization)?;
    let f = &alg.field;
    let gram: Matrix<F::Elem> = (0..alg.dim())
        .map(|i| {
            (0..alg.dim())
                .map(|j| real.supertrace(f, &linalg::mat_mul(f, &real.matrices[i], &real.matrices[j])))
                .collect()
        })
        .collect();
    alg.check_form(&gram)?;
    Ok(gram)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn find(alg: &LieSuperalgebra<Rationals>, label: &str) -> usize {
        alg.basis.iter().position(|b| b.label == label).unwrap()
    }

    #[test]
    fn dimensions() {
        assert_eq!(build_algebra(Family::Gl, 1, 1).unwrap().sdim(), (2, 2));
        assert_eq!(build_algebra(Family::Sl, 2, 1).unwrap().sdim(), (4, 4));
        assert_eq!(build_algebra(Family::Osp, 1, 2).unwrap().sdim(), (3, 2));
        assert_eq!(build_algebra(Family::Gl, 2, 2).unwrap().sdim(), (8, 8));
        assert_eq!(build_algebra(Family::Osp, 2, 2).unwrap().sdim(), (4, 4));
        assert_eq!(build_algebra(Family::Osp, 3, 2).unwrap().sdim(), (6, 6));
        assert!(build_algebra(Family::Osp, 1, 3).is_err());
        assert!(build_algebra(Family::Sl, 0, 0).is_err());
    }

    #[test]
    fn sl_basis_has_zero_supertrace() {
        let alg = build_algebra(Family::Sl, 2, 1).unwrap();
        let real = alg.realization.as_ref().unwrap();
        for m in &real.matrices {
            assert_eq!(real.supertrace(&Rationals, m), q(0));
        }
    }

    #[test]
    fn osp_matrices_preserve_the_form() {
        let alg = build_algebra(Family::Osp, 1, 2).unwrap();
        let real = alg.realization.as_ref().unwrap();
        let j = osp_form(1, 1);
        let f = Rationals;
        for (b, x) in alg.basis.iter().zip(&real.matrices) {
            for u in 0..3 {
                for w in 0..3 {
                    let mut lhs = q(0);
                    for c in 0..3 {
                        lhs += &x[c][u] * &j[c][w];
                        let s = f.sign(b.parity.sign_flip(real.row_parity[u]));
                        lhs += s * &j[u][c] * &x[c][w];
                    }
                    assert_eq!(lhs, q(0));
                }
            }
        }
    }

    #[test]
    fn gl11_form_values() {
        let alg = build_algebra(Family::Gl, 1, 1).unwrap();
        let gram = invariant_form(&alg).unwrap();
        let (e11, e22) = (find(&alg, "E11"), find(&alg, "E22"));
        assert_eq!(gram[e11][e11], q(1));
        assert_eq!(gram[e11][e22], q(0));
        assert_eq!(gram[e22][e22], q(-1));
        let (e12, e21) = (find(&alg, "E12"), find(&alg, "E21"));
        assert_eq!(gram[e12][e21], -gram[e21][e12].clone());
    }

    #[test]
    fn sl_nn_form_is_degenerate() {
        let alg = build_algebra(Family::Sl, 1, 1).unwrap();
        assert!(matches!(invariant_form(&alg), Err(AlgebraError::DegenerateForm { .. })));
    }

    #[test]
    fn forms_of_test_algebras() {
        for (fam, m, n) in [(Family::Gl, 1, 1), (Family::Sl, 2, 1), (Family::Osp, 1, 2), (Family::Gl, 2, 2)] {
            let alg = build_algebra(fam, m, n).unwrap();
            invariant_form(&alg).unwrap();
        }
    }

    #[test]
    fn supercommutator_of_odd_units() {
        let alg = build_algebra(Family::Gl, 1, 1).unwrap();
        let (e12, e21) = (find(&alg, "E12"), find(&alg, "E21"));
        let b = alg.bracket(&alg.unit(e21), &alg.unit(e12));
        let mut expect = alg.zero_vec();
        expect[find(&alg, "E11")] = q(1);
        expect[find(&alg, "E22")] = q(1);
        assert_eq!(b, expect);
    }
}
