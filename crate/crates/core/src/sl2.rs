//! Constructive Jacobson-Morozov: completing a nilpotent `e` to an
//! sl2-triple `(e, h, f)` by linear algebra.

use serde::{Deserialize, Serialize};

use crate::algebra::{LieSuperalgebra, Parity};
use crate::linalg::{self, Subspace};
use crate::nilpotent::NilpotentError;
use crate::scalar::Field;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Sl2Triple<E> {
    pub e: Vec<E>,
    pub h: Vec<E>,
    pub f: Vec<E>,
}

/// Restricts the columns of a matrix to the given indices.
fn columns<E: Clone>(m: &[Vec<E>], cols: &[usize]) -> Vec<Vec<E>> {
    m.iter().map(|r| cols.iter().map(|&c| r[c].clone()).collect()).collect()
}

fn embed<F: Field>(f: &F, dim: usize, cols: &[usize], v: &[F::Elem]) -> Vec<F::Elem> {
    let mut out = vec![f.zero(); dim];
    for (&c, x) in cols.iter().zip(v) {
        out[c] = x.clone();
    }
    out
}

pub fn is_ad_nilpotent<F: Field>(alg: &LieSuperalgebra<F>, x: &[F::Elem]) -> bool {
    let f = &alg.field;
    let ad = alg.ad_matrix(x);
    let mut power = ad.clone();
    for _ in 1..alg.dim() {
        power = linalg::mat_mul(f, &power, &ad);
    }
    power.iter().all(|r| linalg::is_zero_vec(f, r))
}

/// Completes `e` to an sl2-triple. Among all admissible `h` the one with
/// zero entries in the pivot coordinates of the ambiguity space is chosen;
/// `f` is then unique.
pub fn sl2_triple<F: Field>(
    alg: &LieSuperalgebra<F>,
    e: &[F::Elem],
) -> Result<Sl2Triple<F::Elem>, NilpotentError> {
    let f = &alg.field;
    let dim = alg.dim();
    if e.len() != dim {
        return Err(NilpotentError::BadInput(format!("expected {dim} coordinates, got {}", e.len())));
    }
    if e.iter().enumerate().any(|(i, c)| !f.is_zero(c) && alg.parity(i).is_odd()) {
        return Err(NilpotentError::NotEven);
    }
    if linalg::is_zero_vec(f, e) {
        return Ok(Sl2Triple { e: e.to_vec(), h: alg.zero_vec(), f: alg.zero_vec() });
    }
    if !is_ad_nilpotent(alg, e) {
        return Err(NilpotentError::NotNilpotent);
    }
    let even = alg.indices_of(Parity::Even);
    let ad_e = alg.ad_matrix(e);
    let ad_e2 = linalg::mat_mul(f, &ad_e, &ad_e);
    let m = columns(&ad_e2, &even);
    let minus_two_e: Vec<F::Elem> = e.iter().map(|x| f.mul(&f.from_i64(-2), x)).collect();
    let z = linalg::solve(f, &m, &minus_two_e).ok_or(NilpotentError::NoTriple)?;
    let z = embed(f, dim, &even, &z);
    let h0 = alg.bracket(e, &z);
    let ambiguity: Vec<Vec<F::Elem>> = linalg::nullspace(f, &m, even.len())
        .into_iter()
        .map(|k| alg.bracket(e, &embed(f, dim, &even, &k)))
        .collect();
    let h = Subspace::new(f, dim, &ambiguity).reduce(&h0);

    let ad_h = alg.ad_matrix(&h);
    let mut rows = columns(&ad_e, &even);
    let mut rhs = h.clone();
    for (i, r) in columns(&ad_h, &even).into_iter().enumerate() {
        let mut row = r;
        if let Some(pos) = even.iter().position(|&c| c == i) {
            row[pos] = f.add(&row[pos], &f.from_i64(2));
        }
        rows.push(row);
        rhs.push(f.zero());
    }
    let fv = linalg::solve(f, &rows, &rhs).ok_or(NilpotentError::NoTriple)?;
    let fv = embed(f, dim, &even, &fv);
    let triple = Sl2Triple { e: e.to_vec(), h, f: fv };
    check_triple(alg, &triple)?;
    Ok(triple)
}

pub fn check_triple<F: Field>(alg: &LieSuperalgebra<F>, t: &Sl2Triple<F::Elem>) -> Result<(), NilpotentError> {
    let f = &alg.field;
    let two = f.from_i64(2);
    let ok = alg.bracket(&t.h, &t.e) == linalg::scale_vec(f, &two, &t.e)
        && alg.bracket(&t.h, &t.f) == linalg::scale_vec(f, &f.neg(&two), &t.f)
        && alg.bracket(&t.e, &t.f) == t.h;
    if ok {
        Ok(())
    } else {
        Err(NilpotentError::Invariant("sl2 relations fail".into()))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::{build_algebra, Family};
    use crate::scalar::Rationals;

    fn label_vec(alg: &LieSuperalgebra<Rationals>, label: &str) -> Vec<num_rational::BigRational> {
        alg.unit(alg.basis.iter().position(|b| b.label == label).unwrap())
    }

    #[test]
    fn sl21_triple() {
        let alg = build_algebra(Family::Sl, 2, 1).unwrap();
        let e = label_vec(&alg, "E12");
        let t = sl2_triple(&alg, &e).unwrap();
        assert_eq!(t.h, label_vec(&alg, "E11-E22"));
        assert_eq!(t.f, label_vec(&alg, "E21"));
    }

    #[test]
    fn osp12_triple_spans_even_part() {
        let alg = build_algebra(Family::Osp, 1, 2).unwrap();
        let e = label_vec(&alg, "E23");
        let t = sl2_triple(&alg, &e).unwrap();
        let even = Subspace::new(&Rationals, alg.dim(), &[t.e.clone(), t.h.clone(), t.f.clone()]);
        assert_eq!(even.dim(), 3);
        for i in alg.indices_of(Parity::Even) {
            assert!(even.contains(&alg.unit(i)));
        }
    }

    #[test]
    fn zero_and_bad_inputs() {
        let alg = build_algebra(Family::Gl, 1, 1).unwrap();
        let t = sl2_triple(&alg, &alg.zero_vec()).unwrap();
        assert_eq!(t.h, alg.zero_vec());
        assert!(matches!(sl2_triple(&alg, &label_vec(&alg, "E11")), Err(NilpotentError::NotNilpotent)));
        assert!(matches!(sl2_triple(&alg, &label_vec(&alg, "E12")), Err(NilpotentError::NotEven)));
    }

    #[test]
    fn gl22_regular_triple() {
        let alg = build_algebra(Family::Gl, 2, 2).unwrap();
        let e = linalg::add_vec(&Rationals, &label_vec(&alg, "E12"), &label_vec(&alg, "E34"));
        let t = sl2_triple(&alg, &e).unwrap();
        let expect = linalg::add_vec(
            &Rationals,
            &linalg::add_vec(&Rationals, &label_vec(&alg, "E11"), &label_vec(&alg, "E33")),
            &linalg::scale_vec(
                &Rationals,
                &Rationals.from_i64(-1),
                &linalg::add_vec(&Rationals, &label_vec(&alg, "E22"), &label_vec(&alg, "E44")),
            ),
        );
        assert_eq!(t.h, expect);
    }
}
