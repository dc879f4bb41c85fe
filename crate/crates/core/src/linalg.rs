//! Exact linear algebra over any [`Field`]: dense row reduction for small
//! systems and a sparse echelon form for the large invariance systems.

use std::collections::BTreeMap;

use crate::scalar::Field;

/// Sorted `(column, value)` pairs with no zero values.
pub type SparseVec<E> = Vec<(usize, E)>;

/// Reduced row echelon form in place. Zero rows are dropped and the pivot
/// column of each remaining row is returned.
pub fn rref<F: Field>(f: &F, rows: &mut Vec<Vec<F::Elem>>) -> Vec<usize> {
    let ncols = rows.first().map_or(0, |r| r.len());
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..ncols {
        if r == rows.len() {
            break;
        }
        let Some(sel) = (r..rows.len()).find(|&i| !f.is_zero(&rows[i][c])) else {
            continue;
        };
        rows.swap(r, sel);
        let inv = f.inv(&rows[r][c]).expect("nonzero pivot");
        for x in rows[r].iter_mut() {
            *x = f.mul(x, &inv);
        }
        let pivot_row = rows[r].clone();
        for (i, row) in rows.iter_mut().enumerate() {
            if i == r || f.is_zero(&row[c]) {
                continue;
            }
            let factor = row[c].clone();
            for (x, y) in row.iter_mut().zip(&pivot_row).skip(c) {
                if !f.is_zero(y) {
                    *x = f.sub(x, &f.mul(&factor, y));
                }
            }
        }
        pivots.push(c);
        r += 1;
    }
    rows.truncate(r);
    pivots
}

pub fn rank<F: Field>(f: &F, rows: &[Vec<F::Elem>]) -> usize {
    let mut m = rows.to_vec();
    rref(f, &mut m).len()
}

/// Basis of `{x : A x = 0}`, one vector per free column.
pub fn nullspace<F: Field>(f: &F, rows: &[Vec<F::Elem>], ncols: usize) -> Vec<Vec<F::Elem>> {
    let mut m = rows.to_vec();
    let pivots = rref(f, &mut m);
    let mut basis = Vec::new();
    for free in (0..ncols).filter(|c| !pivots.contains(c)) {
        let mut v = vec![f.zero(); ncols];
        v[free] = f.one();
        for (row, &pc) in m.iter().zip(&pivots) {
            v[pc] = f.neg(&row[free]);
        }
        basis.push(v);
    }
    basis
}

/// A solution of `A x = b` with every free variable set to zero.
pub fn solve<F: Field>(f: &F, a: &[Vec<F::Elem>], b: &[F::Elem]) -> Option<Vec<F::Elem>> {
    let ncols = a.first().map_or(0, |r| r.len());
    let mut m: Vec<Vec<F::Elem>> = a
        .iter()
        .zip(b)
        .map(|(row, rhs)| {
            let mut r = row.clone();
            r.push(rhs.clone());
            r
        })
        .collect();
    let pivots = rref(f, &mut m);
    if pivots.last() == Some(&ncols) {
        return None;
    }
    let mut x = vec![f.zero(); ncols];
    for (row, &pc) in m.iter().zip(&pivots) {
        x[pc] = row[ncols].clone();
    }
    Some(x)
}

pub fn inverse<F: Field>(f: &F, a: &[Vec<F::Elem>]) -> Option<Vec<Vec<F::Elem>>> {
    let n = a.len();
    let mut m: Vec<Vec<F::Elem>> = a
        .iter()
        .enumerate()
        .map(|(i, row)| {
            let mut r = row.clone();
            r.extend((0..n).map(|j| if i == j { f.one() } else { f.zero() }));
            r
        })
        .collect();
    let pivots = rref(f, &mut m);
    if pivots.len() != n || pivots.iter().enumerate().any(|(i, &c)| i != c) {
        return None;
    }
    Some(m.into_iter().map(|r| r[n..].to_vec()).collect())
}

pub fn mat_vec<F: Field>(f: &F, a: &[Vec<F::Elem>], x: &[F::Elem]) -> Vec<F::Elem> {
    a.iter()
        .map(|row| {
            let mut acc = f.zero();
            for (u, v) in row.iter().zip(x) {
                if !f.is_zero(u) && !f.is_zero(v) {
                    f.add_mul(&mut acc, u, v);
                }
            }
            acc
        })
        .collect()
}

pub fn mat_mul<F: Field>(f: &F, a: &[Vec<F::Elem>], b: &[Vec<F::Elem>]) -> Vec<Vec<F::Elem>> {
    let inner = b.len();
    let ncols = b.first().map_or(0, |r| r.len());
    a.iter()
        .map(|row| {
            let mut out = vec![f.zero(); ncols];
            for k in 0..inner {
                if f.is_zero(&row[k]) {
                    continue;
                }
                for (o, y) in out.iter_mut().zip(&b[k]) {
                    if !f.is_zero(y) {
                        f.add_mul(o, &row[k], y);
                    }
                }
            }
            out
        })
        .collect()
}

pub fn transpose<E: Clone>(a: &[Vec<E>]) -> Vec<Vec<E>> {
    let ncols = a.first().map_or(0, |r| r.len());
    (0..ncols).map(|j| a.iter().map(|r| r[j].clone()).collect()).collect()
}

pub fn is_zero_vec<F: Field>(f: &F, v: &[F::Elem]) -> bool {
    v.iter().all(|x| f.is_zero(x))
}

pub fn scale_vec<F: Field>(f: &F, c: &F::Elem, v: &[F::Elem]) -> Vec<F::Elem> {
    v.iter().map(|x| f.mul(c, x)).collect()
}

pub fn add_vec<F: Field>(f: &F, a: &[F::Elem], b: &[F::Elem]) -> Vec<F::Elem> {
    a.iter().zip(b).map(|(x, y)| f.add(x, y)).collect()
}

/// `a + c b`.
pub fn axpy<F: Field>(f: &F, a: &[F::Elem], c: &F::Elem, b: &[F::Elem]) -> Vec<F::Elem> {
    a.iter().zip(b).map(|(x, y)| f.add(x, &f.mul(c, y))).collect()
}

pub fn dot<F: Field>(f: &F, a: &[F::Elem], b: &[F::Elem]) -> F::Elem {
    let mut acc = f.zero();
    for (x, y) in a.iter().zip(b) {
        f.add_mul(&mut acc, x, y);
    }
    acc
}

/// `x^T G y`.
pub fn bilinear<F: Field>(f: &F, g: &[Vec<F::Elem>], x: &[F::Elem], y: &[F::Elem]) -> F::Elem {
    dot(f, x, &mat_vec(f, g, y))
}

/// A subspace of `F^n` held as an echelonized basis.
#[derive(Debug, Clone)]
pub struct Subspace<F: Field> {
    field: F,
    ambient: usize,
    rows: Vec<Vec<F::Elem>>,
    pivots: Vec<usize>,
}

impl<F: Field> Subspace<F> {
    pub fn new(f: &F, ambient: usize, vectors: &[Vec<F::Elem>]) -> Self {
        let mut rows = vectors.to_vec();
        let pivots = rref(f, &mut rows);
        Subspace { field: f.clone(), ambient, rows, pivots }
    }

    pub fn zero(f: &F, ambient: usize) -> Self {
        Subspace { field: f.clone(), ambient, rows: Vec::new(), pivots: Vec::new() }
    }

    pub fn dim(&self) -> usize {
        self.rows.len()
    }

    pub fn ambient(&self) -> usize {
        self.ambient
    }

    pub fn basis(&self) -> &[Vec<F::Elem>] {
        &self.rows
    }

    /// Residue of `v` after clearing the pivot coordinates.
    pub fn reduce(&self, v: &[F::Elem]) -> Vec<F::Elem> {
        let f = &self.field;
        let mut out = v.to_vec();
        for (row, &pc) in self.rows.iter().zip(&self.pivots) {
            if !f.is_zero(&out[pc]) {
                let c = f.neg(&out[pc]);
                out = axpy(f, &out, &c, row);
            }
        }
        out
    }

    pub fn contains(&self, v: &[F::Elem]) -> bool {
        is_zero_vec(&self.field, &self.reduce(v))
    }

    pub fn contains_all(&self, other: &Subspace<F>) -> bool {
        other.rows.iter().all(|v| self.contains(v))
    }

    pub fn same_as(&self, other: &Subspace<F>) -> bool {
        self.dim() == other.dim() && self.contains_all(other)
    }

    pub fn sum(&self, other: &Subspace<F>) -> Subspace<F> {
        let mut all = self.rows.clone();
        all.extend(other.rows.iter().cloned());
        Subspace::new(&self.field, self.ambient, &all)
    }
}

/// Incremental sparse echelon form. Pivot rows are normalized to a leading 1.
#[derive(Debug, Clone)]
pub struct SparseEchelon<F: Field> {
    field: F,
    pivots: BTreeMap<usize, SparseVec<F::Elem>>,
}

impl<F: Field> SparseEchelon<F> {
    pub fn new(f: &F) -> Self {
        SparseEchelon { field: f.clone(), pivots: BTreeMap::new() }
    }

    pub fn rank(&self) -> usize {
        self.pivots.len()
    }

    pub fn pivot_columns(&self) -> impl Iterator<Item = usize> + '_ {
        self.pivots.keys().copied()
    }

    /// Residue of `row` with no entries in pivot columns.
    pub fn reduce(&self, row: &[(usize, F::Elem)]) -> SparseVec<F::Elem> {
        let f = &self.field;
        let mut work: BTreeMap<usize, F::Elem> =
            row.iter().filter(|(_, v)| !f.is_zero(v)).cloned().collect();
        let mut out = Vec::new();
        while let Some((c, v)) = work.pop_first() {
            match self.pivots.get(&c) {
                Some(prow) => {
                    for (c2, v2) in &prow[1..] {
                        let entry = work.entry(*c2).or_insert_with(|| f.zero());
                        *entry = f.sub(entry, &f.mul(&v, v2));
                        if f.is_zero(entry) {
                            work.remove(c2);
                        }
                    }
                }
                None => out.push((c, v)),
            }
        }
        out
    }

    /// Adds a row; returns false when it was already in the row space.
    pub fn insert(&mut self, row: &[(usize, F::Elem)]) -> bool {
        let f = &self.field;
        let mut r = self.reduce(row);
        if r.is_empty() {
            return false;
        }
        let inv = f.inv(&r[0].1).expect("nonzero lead");
        for (_, v) in r.iter_mut() {
            *v = f.mul(v, &inv);
        }
        self.pivots.insert(r[0].0, r);
        true
    }

    pub fn contains(&self, row: &[(usize, F::Elem)]) -> bool {
        self.reduce(row).is_empty()
    }

    /// Back-substitutes so that pivot columns appear only in their own row.
    pub fn into_reduced(self) -> Vec<SparseVec<F::Elem>> {
        let f = self.field.clone();
        let mut done: BTreeMap<usize, SparseVec<F::Elem>> = BTreeMap::new();
        for (c, row) in self.pivots.into_iter().rev() {
            let mut acc: BTreeMap<usize, F::Elem> = BTreeMap::new();
            for (c2, v) in &row[1..] {
                match done.get(c2) {
                    Some(prow) => {
                        for (c3, v3) in &prow[1..] {
                            let e = acc.entry(*c3).or_insert_with(|| f.zero());
                            *e = f.sub(e, &f.mul(v, v3));
                        }
                    }
                    None => {
                        let e = acc.entry(*c2).or_insert_with(|| f.zero());
                        *e = f.add(e, v);
                    }
                }
            }
            let mut new_row = vec![(c, f.one())];
            new_row.extend(acc.into_iter().filter(|(_, v)| !f.is_zero(v)));
            done.insert(c, new_row);
        }
        done.into_values().collect()
    }
}

/// Kernel basis of the sparse system given by `rows` in `ncols` unknowns.
pub fn sparse_nullspace<F: Field>(
    f: &F,
    rows: impl IntoIterator<Item = SparseVec<F::Elem>>,
    ncols: usize,
) -> Vec<SparseVec<F::Elem>> {
    let mut ech = SparseEchelon::new(f);
    for r in rows {
        ech.insert(&r);
    }
    let reduced = ech.into_reduced();
    let mut by_col: BTreeMap<usize, Vec<(usize, F::Elem)>> = BTreeMap::new();
    let mut is_pivot = vec![false; ncols];
    for row in &reduced {
        let lead = row[0].0;
        is_pivot[lead] = true;
        for (c, v) in &row[1..] {
            by_col.entry(*c).or_default().push((lead, v.clone()));
        }
    }
    (0..ncols)
        .filter(|&c| !is_pivot[c])
        .map(|c| {
            let mut v: SparseVec<F::Elem> = vec![(c, f.one())];
            if let Some(entries) = by_col.get(&c) {
                v.extend(entries.iter().map(|(lead, x)| (*lead, f.neg(x))));
            }
            v.sort_by_key(|(i, _)| *i);
            v
        })
        .collect()
}

/// A solution of the sparse system `A x = b`, free variables zero.
pub fn sparse_solve<F: Field>(
    f: &F,
    rows: &[SparseVec<F::Elem>],
    rhs: &[F::Elem],
    ncols: usize,
) -> Option<Vec<F::Elem>> {
    let mut ech = SparseEchelon::new(f);
    for (row, b) in rows.iter().zip(rhs) {
        let mut r = row.clone();
        if !f.is_zero(b) {
            r.push((ncols, b.clone()));
        }
        ech.insert(&r);
    }
    if ech.pivots.contains_key(&ncols) {
        return None;
    }
    let mut x = vec![f.zero(); ncols];
    for row in ech.into_reduced() {
        if let Some((c, v)) = row.last() {
            if *c == ncols {
                x[row[0].0] = v.clone();
            }
        }
    }
    Some(x)
}

pub fn sparse_to_dense<F: Field>(f: &F, v: &[(usize, F::Elem)], n: usize) -> Vec<F::Elem> {
    let mut out = vec![f.zero(); n];
    for (i, x) in v {
        out[*i] = x.clone();
    }
    out
}

pub fn dense_to_sparse<F: Field>(f: &F, v: &[F::Elem]) -> SparseVec<F::Elem> {
    v.iter().enumerate().filter(|(_, x)| !f.is_zero(x)).map(|(i, x)| (i, x.clone())).collect()
}
