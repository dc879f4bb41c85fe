//! Characteristic zero driver: generators, relations and the graded
//! comparison with the symmetric algebra of the centralizer.

use std::collections::BTreeMap;

use num_rational::BigRational;
use serde::{Deserialize, Serialize};

use crate::algebra::{LieSuperalgebra, Parity};
use crate::frame::{Frame, FrameError};
use crate::linalg::{SparseEchelon, SparseVec};
use crate::nilpotent::NilpotentData;
use crate::pbw::{Ambient, Engine, Monomial};
use crate::scalar::{Field, Rationals};
use crate::w::{cobasis_monomials, solve_all, WAlgebra, WError, WPresentation};

type Q = BigRational;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum Char0Error {
    #[error(transparent)]
    Frame(#[from] FrameError),
    #[error(transparent)]
    W(#[from] WError),
    #[error("max degree {got} is below the largest generator degree {need}")]
    DegreeTooSmall { got: i32, need: i32 },
}

/// Coefficients up to `t^max` of `prod_even (1 - t^d)^-1 * prod_odd (1 + t^d)`.
pub fn super_symmetric_series(even: &[i32], odd: &[i32], max: usize) -> Vec<u64> {
    let mut c = vec![0u64; max + 1];
    c[0] = 1;
    for &d in even {
        let d = d as usize;
        assert!(d > 0, "generator degree must be positive");
        for i in d..=max {
            c[i] += c[i - d];
        }
    }
    for &d in odd {
        let d = d as usize;
        assert!(d > 0, "generator degree must be positive");
        for i in (d..=max).rev() {
            c[i] += c[i - d];
        }
    }
    c
}

/// Kazhdan degrees of the centralizer, split by parity.
pub fn centralizer_degrees(nd: &NilpotentData) -> (Vec<i32>, Vec<i32>) {
    let mut even = Vec::new();
    let mut odd = Vec::new();
    for v in nd.centralizer() {
        match v.parity {
            Parity::Even => even.push(v.weight + 2),
            Parity::Odd => odd.push(v.weight + 2),
        }
    }
    (even, odd)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct GradedReport {
    pub max_degree: usize,
    /// Ordered Theta-monomials of each Kazhdan degree.
    pub pbw_counts: Vec<u64>,
    /// Degree pieces of `S(g^e)`, tensored with an exterior factor in degree 1 when `r` is odd.
    pub expected_counts: Vec<u64>,
    pub counts_match: bool,
    /// Top-degree parts of the Theta-monomials of each degree are independent.
    pub leading_independent: bool,
    /// `dim` of the invariants inside the span of co-basis monomials of e-degree `<= d`.
    pub invariant_dims: Vec<u64>,
    pub cumulative_counts: Vec<u64>,
    pub spanning_ok: bool,
}

impl GradedReport {
    pub fn all_ok(&self) -> bool {
        self.counts_match && self.leading_independent && self.spanning_ok
    }
}

/// Exponent vectors over the generators with total degree exactly `d`.
pub fn theta_monomials_of_degree<F: Field>(w: &WAlgebra<'_, '_, F>, d: i32, cap: Option<u16>) -> Vec<Vec<u16>> {
    let degs: Vec<i32> = w.gens.iter().map(|g| g.filtration_degree()).collect();
    let odd: Vec<bool> = w.gens.iter().map(|g| g.parity.is_odd()).collect();
    let mut out = Vec::new();
    let mut cur = vec![0u16; degs.len()];
    fn rec(i: usize, left: i32, degs: &[i32], odd: &[bool], cap: Option<u16>, cur: &mut Vec<u16>, out: &mut Vec<Vec<u16>>) {
        if i == degs.len() {
            if left == 0 {
                out.push(cur.clone());
            }
            return;
        }
        let max = if odd[i] { 1 } else { cap.unwrap_or(u16::MAX) };
        let mut e = 0u16;
        while i32::from(e) * degs[i] <= left && e <= max {
            cur[i] = e;
            rec(i + 1, left - i32::from(e) * degs[i], degs, odd, cap, cur, out);
            e += 1;
        }
        cur[i] = 0;
    }
    rec(0, d, &degs, &odd, cap, &mut cur, &mut out);
    out
}

/// Compares the W-algebra with `S(g^e)` degree by degree up to `max_degree`.
pub fn graded_check<F: Field>(
    w: &WAlgebra<'_, '_, F>,
    expected_even: &[i32],
    expected_odd: &[i32],
    max_degree: usize,
) -> GradedReport {
    let eng = w.eng;
    let f = eng.field();
    let fr = eng.frame;
    let mut odd = expected_odd.to_vec();
    if fr.middle.is_some() {
        odd.push(1);
    }
    let expected_counts = super_symmetric_series(expected_even, &odd, max_degree);
    let mut pbw_counts = Vec::new();
    let mut leading_independent = true;
    for d in 0..=max_degree as i32 {
        let monos = theta_monomials_of_degree(w, d, None);
        pbw_counts.push(monos.len() as u64);
        let mut ech = SparseEchelon::new(f);
        let mut index: BTreeMap<Monomial, usize> = BTreeMap::new();
        for exps in &monos {
            let value = w.eval(exps);
            let mut row: SparseVec<F::Elem> = Vec::new();
            for (m, c) in value.iter() {
                if eng.e_degree(m) == d {
                    let n = index.len();
                    let col = *index.entry(m.clone()).or_insert(n);
                    row.push((col, c.clone()));
                }
            }
            row.sort_by_key(|(c, _)| *c);
            if !ech.insert(&row) {
                leading_independent = false;
            }
        }
    }
    let counts_match = pbw_counts == expected_counts;

    // Invariants of each filtered piece of the module.
    let monos = cobasis_monomials(eng, max_degree as i32, |_| true);
    let zs: Vec<usize> = fr.m_indices().collect();
    let mut columns: Vec<Vec<((usize, Monomial), F::Elem)>> = Vec::new();
    for m in &monos {
        let mut col = Vec::new();
        for &z in &zs {
            for (t, c) in eng.ad_gen(z, &BTreeMap::from([(m.clone(), f.one())])) {
                col.push(((z, t), c));
            }
        }
        columns.push(col);
    }
    let mut invariant_dims = Vec::new();
    let mut cumulative_counts = Vec::new();
    let mut total = 0;
    for d in 0..=max_degree as i32 {
        total += pbw_counts[d as usize];
        cumulative_counts.push(total);
        let keep: Vec<usize> = (0..monos.len()).filter(|&i| eng.e_degree(&monos[i]) <= d).collect();
        let mut rows: BTreeMap<(usize, Monomial), SparseVec<F::Elem>> = BTreeMap::new();
        for (c, &i) in keep.iter().enumerate() {
            for (key, x) in &columns[i] {
                rows.entry(key.clone()).or_default().push((c, x.clone()));
            }
        }
        let mut ech = SparseEchelon::new(f);
        for r in rows.values() {
            ech.insert(r);
        }
        invariant_dims.push((keep.len() - ech.rank()) as u64);
    }
    let spanning_ok = invariant_dims == cumulative_counts;
    GradedReport {
        max_degree,
        pbw_counts,
        expected_counts,
        counts_match,
        leading_independent,
        invariant_dims,
        cumulative_counts,
        spanning_ok,
    }
}

/// Everything computed over the rationals for one nilpotent.
pub struct Char0Run {
    pub frame: Frame<Rationals>,
}

impl Char0Run {
    pub fn new(alg: &LieSuperalgebra<Rationals>, nd: &NilpotentData) -> Result<Self, Char0Error> {
        Ok(Char0Run { frame: Frame::rational(alg, nd)? })
    }

    pub fn engine(&self) -> Engine<'_, Rationals> {
        Engine::new(&self.frame, Ambient::GelfandGraev)
    }

    /// Generators, relation table and graded comparison.
    pub fn presentation(
        &self,
        nd: &NilpotentData,
        max_degree: Option<usize>,
    ) -> Result<(WPresentation<Q>, Option<GradedReport>), Char0Error> {
        let eng = self.engine();
        let gens = solve_all(&eng)?;
        if let Some(d) = max_degree {
            let need = gens.iter().map(|g| g.filtration_degree()).max().unwrap_or(0);
            if (d as i32) < need {
                return Err(Char0Error::DegreeTooSmall { got: d as i32, need });
            }
        }
        let w = WAlgebra::new(&eng, gens);
        let pres = w.commutator_table()?;
        let graded = max_degree.map(|d| {
            let (even, odd) = centralizer_degrees(nd);
            graded_check(&w, &even, &odd, d)
        });
        Ok((pres, graded))
    }
}
