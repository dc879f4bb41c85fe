//! Generators `Theta_k` of the W-superalgebra as invariants of the
//! Gelfand-Graev module, PBW expansion of invariants, and the commutator
//! table. Everything here is generic over the base field.

use std::cell::RefCell;
use std::collections::{BTreeMap, HashMap};
use std::rc::Rc;

use serde::{Deserialize, Serialize};

use crate::algebra::Parity;
use crate::linalg::{self, SparseVec};
use crate::pbw::{add_scaled, add_term, Ambient, Engine, Monomial, PbwError, TermRecord, Terms};
use crate::scalar::{Field, Scalar};

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum WError {
    #[error("generator index {0} out of range")]
    BadIndex(usize),
    #[error("the invariance system for Theta_{0} has no solution")]
    NoSolution(usize),
    #[error("element is not ad m-invariant: {0}")]
    NotInvariant(String),
    #[error("leading term has the wrong shape: {0}")]
    LeadingShape(String),
    #[error("engine must act on the Gelfand-Graev module")]
    WrongAmbient,
    #[error(transparent)]
    Pbw(#[from] PbwError),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WGenerator<E> {
    /// 1-based position among `Theta_1 .. Theta_{l+q'}`.
    pub index: usize,
    /// Frame index of the leading co-basis generator.
    pub lead: usize,
    pub lead_label: String,
    pub parity: Parity,
    /// Dynkin weight of the leading generator.
    pub weight: i32,
    /// Value on the cyclic vector.
    pub value: Terms<E>,
}

impl<E> WGenerator<E> {
    pub fn filtration_degree(&self) -> i32 {
        self.weight + 2
    }
}

/// Exponent vector over `Theta_1 .. Theta_{l+q'}` mapped to coefficients.
pub type ThetaPolynomial<E> = BTreeMap<Vec<u16>, E>;

/// Serialized relation entry.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RelationRecord {
    pub i: usize,
    pub j: usize,
    pub terms: Vec<TermRecord>,
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct TableReport {
    pub pairs: usize,
    /// Every Theta-monomial of `[Theta_i, Theta_j]` has degree at most `m_i + m_j + 2`.
    pub filtration_ok: bool,
    /// Top-degree linear part equals the centralizer structure constants.
    pub linear_part_ok: bool,
    /// `[Theta_i, Theta_i] = 0` for even generators.
    pub even_squares_ok: bool,
    /// `[Theta_mid, Theta_mid]` equals the middle norm times the identity.
    pub middle_ok: Option<bool>,
    pub failures: Vec<String>,
}

impl TableReport {
    pub fn all_ok(&self) -> bool {
        self.filtration_ok && self.linear_part_ok && self.even_squares_ok && self.middle_ok != Some(false)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct WPresentation<E> {
    pub generators: Vec<WGenerator<E>>,
    /// `(i, j)` 1-based with `i <= j`.
    pub relations: BTreeMap<(usize, usize), ThetaPolynomial<E>>,
    pub report: TableReport,
}

/// All co-basis monomials of e-degree at most `max_degree` accepted by `keep`.
/// Even exponents are capped below the characteristic when it is positive.
pub fn cobasis_monomials<F: Field>(
    eng: &Engine<'_, F>,
    max_degree: i32,
    keep: impl Fn(&Monomial) -> bool,
) -> Vec<Monomial> {
    let fr = eng.frame;
    let cap = match eng.field().characteristic() {
        0 => u16::MAX,
        p => (p - 1) as u16,
    };
    let mut out = Vec::new();
    let mut cur = vec![0u16; fr.dim()];
    fn rec<F: Field>(
        fr: &crate::frame::Frame<F>,
        i: usize,
        budget: i32,
        cap: u16,
        cur: &mut Monomial,
        out: &mut Vec<Monomial>,
        keep: &dyn Fn(&Monomial) -> bool,
    ) {
        if i == fr.n_cobasis {
            if keep(cur) {
                out.push(cur.clone());
            }
            return;
        }
        let d = fr.gens[i].e_degree();
        debug_assert!(d > 0);
        let max = if fr.is_odd(i) { 1 } else { cap };
        let mut e = 0u16;
        loop {
            cur[i] = e;
            rec(fr, i + 1, budget - i32::from(e) * d, cap, cur, out, keep);
            if e == max || budget - i32::from(e + 1) * d < 0 {
                break;
            }
            e += 1;
        }
        cur[i] = 0;
    }
    rec(fr, 0, max_degree, cap, &mut cur, &mut out, &keep);
    out.sort_by_key(|m| (eng.e_degree(m), m.clone()));
    out
}

/// Exact sparse system `sum_c x_c * ad_z(mon_c) = rhs` over all `z` in `m`.
struct InvarianceSystem<E> {
    rows: Vec<SparseVec<E>>,
    rhs: Vec<E>,
}

fn invariance_system<F: Field>(
    eng: &Engine<'_, F>,
    zs: &[usize],
    cols: &[Monomial],
    rhs_terms: Option<&Terms<F::Elem>>,
) -> InvarianceSystem<F::Elem> {
    let f = eng.field();
    let mut index: HashMap<(usize, Monomial), usize> = HashMap::new();
    let mut rows: Vec<SparseVec<F::Elem>> = Vec::new();
    let mut rhs: Vec<F::Elem> = Vec::new();
    let mut row_of = |key: (usize, Monomial), rows: &mut Vec<SparseVec<F::Elem>>, rhs: &mut Vec<F::Elem>| {
        *index.entry(key).or_insert_with(|| {
            rows.push(Vec::new());
            rhs.push(f.zero());
            rows.len() - 1
        })
    };
    for &z in zs {
        for (c, mon) in cols.iter().enumerate() {
            let img = eng.ad_gen(z, &BTreeMap::from([(mon.clone(), f.one())]));
            for (m, x) in img {
                let r = row_of((z, m), &mut rows, &mut rhs);
                rows[r].push((c, x));
            }
        }
        if let Some(t) = rhs_terms {
            for (m, x) in eng.ad_gen(z, t) {
                let r = row_of((z, m), &mut rows, &mut rhs);
                rhs[r] = f.neg(&x);
            }
        }
    }
    InvarianceSystem { rows, rhs }
}

/// Checks `[z, q] = 0` for every basis vector `z` of `m`.
pub fn is_invariant<F: Field>(eng: &Engine<'_, F>, q: &Terms<F::Elem>) -> bool {
    eng.frame.m_indices().all(|z| eng.ad_gen(z, q).is_empty())
}

fn is_pure_monomial<F: Field>(eng: &Engine<'_, F>, m: &Monomial) -> bool {
    m.iter().enumerate().all(|(i, &e)| e == 0 || eng.frame.is_pure(i))
}

/// Solves for `Theta_k` (1-based `k`). The lower-order part is normalized to
/// contain no monomial built only from centralizer generators, which makes
/// the solution unique.
pub fn solve_theta<F: Field>(eng: &Engine<'_, F>, k: usize) -> Result<WGenerator<F::Elem>, WError> {
    if eng.ambient != Ambient::GelfandGraev {
        return Err(WError::WrongAmbient);
    }
    let f = eng.field();
    let fr = eng.frame;
    let leads = fr.theta_leads();
    let lead = *leads.get(k.wrapping_sub(1)).ok_or(WError::BadIndex(k))?;
    let gen = &fr.gens[lead];
    let mut lead_mon = eng.unit_monomial();
    lead_mon[lead] = 1;
    let lead_terms: Terms<F::Elem> = BTreeMap::from([(lead_mon.clone(), f.one())]);
    let zs: Vec<usize> = fr.m_indices().collect();
    let value = if Some(lead) == fr.middle {
        lead_terms
    } else {
        let top = gen.e_degree();
        let cands = cobasis_monomials(eng, top, |m| {
            eng.parity_of(m) == gen.parity
                && !is_pure_monomial(eng, m)
                && !(m.iter().map(|&e| u32::from(e)).sum::<u32>() == 1 && eng.e_degree(m) == top)
        });
        let sys = invariance_system(eng, &zs, &cands, Some(&lead_terms));
        let sol = linalg::sparse_solve(f, &sys.rows, &sys.rhs, cands.len()).ok_or(WError::NoSolution(k))?;
        let mut value = lead_terms;
        for (m, x) in cands.iter().zip(sol) {
            add_term(f, &mut value, m, &x);
        }
        value
    };
    if !is_invariant(eng, &value) {
        return Err(WError::NotInvariant(format!("Theta_{k} = {}", eng.format(&value))));
    }
    check_leading_shape(eng, &value)?;
    Ok(WGenerator { index: k, lead, lead_label: gen.label.clone(), parity: gen.parity, weight: gen.weight, value })
}

/// The maximal part of an invariant involves only centralizer generators
/// and the middle vector.
pub fn check_leading_shape<F: Field>(eng: &Engine<'_, F>, q: &Terms<F::Elem>) -> Result<(), WError> {
    for m in eng.leading_terms(q) {
        if !is_pure_monomial(eng, &m) {
            return Err(WError::LeadingShape(eng.format_monomial(&m)));
        }
    }
    Ok(())
}

/// All generators `Theta_1 .. Theta_{l+q'}`.
pub fn solve_all<F: Field>(eng: &Engine<'_, F>) -> Result<Vec<WGenerator<F::Elem>>, WError> {
    (1..=eng.frame.theta_leads().len()).map(|k| solve_theta(eng, k)).collect()
}

/// Products of generators inside the invariants, with memoized
/// Theta-monomial evaluation.
pub struct WAlgebra<'e, 'a, F: Field> {
    pub eng: &'e Engine<'a, F>,
    pub gens: Vec<WGenerator<F::Elem>>,
    eval_memo: RefCell<HashMap<Vec<u16>, Rc<Terms<F::Elem>>>>,
}

impl<'e, 'a, F: Field> WAlgebra<'e, 'a, F> {
    pub fn new(eng: &'e Engine<'a, F>, gens: Vec<WGenerator<F::Elem>>) -> Self {
        WAlgebra { eng, gens, eval_memo: RefCell::default() }
    }

    pub fn rank(&self) -> usize {
        self.gens.len()
    }

    pub fn degree(&self, exps: &[u16]) -> i32 {
        exps.iter().zip(&self.gens).map(|(&a, g)| i32::from(a) * g.filtration_degree()).sum()
    }

    /// `lift(a) * b` for invariants `a`, `b`.
    pub fn product(&self, a: &Terms<F::Elem>, b: &Terms<F::Elem>) -> Terms<F::Elem> {
        self.eng.act_terms(a, b)
    }

    /// `[Theta_i, Theta_j]` evaluated on the cyclic vector (0-based indices).
    pub fn commutator(&self, i: usize, j: usize) -> Terms<F::Elem> {
        let f = self.eng.field();
        let (a, b) = (&self.gens[i], &self.gens[j]);
        let mut out = self.product(&a.value, &b.value);
        let s = f.sign(a.parity.is_odd() && b.parity.is_odd());
        add_scaled(f, &mut out, &self.product(&b.value, &a.value), &f.neg(&s));
        out
    }

    /// Value of the ordered Theta-monomial with the given exponents.
    pub fn eval(&self, exps: &[u16]) -> Rc<Terms<F::Elem>> {
        if let Some(hit) = self.eval_memo.borrow().get(exps) {
            return hit.clone();
        }
        let f = self.eng.field();
        let out = match exps.iter().position(|&e| e > 0) {
            None => BTreeMap::from([(self.eng.unit_monomial(), f.one())]),
            Some(i) => {
                let mut rest = exps.to_vec();
                rest[i] -= 1;
                let tail = self.eval(&rest);
                self.product(&self.gens[i].value, &tail)
            }
        };
        let out = Rc::new(out);
        self.eval_memo.borrow_mut().insert(exps.to_vec(), out.clone());
        out
    }

    pub fn eval_poly(&self, poly: &ThetaPolynomial<F::Elem>) -> Terms<F::Elem> {
        let f = self.eng.field();
        let mut out = BTreeMap::new();
        for (exps, c) in poly {
            add_scaled(f, &mut out, &self.eval(exps), c);
        }
        out
    }

    fn theta_exponents(&self, m: &Monomial) -> Vec<u16> {
        self.gens.iter().map(|g| m[g.lead]).collect()
    }

    /// Expansion of an invariant in ordered Theta-monomials by descending
    /// elimination of leading terms.
    pub fn express(&self, q: &Terms<F::Elem>) -> Result<ThetaPolynomial<F::Elem>, WError> {
        let eng = self.eng;
        let f = eng.field();
        if !is_invariant(eng, q) {
            return Err(WError::NotInvariant(eng.format(q)));
        }
        let mut rem = q.clone();
        let mut out: ThetaPolynomial<F::Elem> = BTreeMap::new();
        while !rem.is_empty() {
            let lead = eng.leading_terms(&rem);
            for m in &lead {
                if !is_pure_monomial(eng, m) {
                    return Err(WError::LeadingShape(eng.format_monomial(m)));
                }
            }
            for m in lead {
                let Some(c) = rem.get(&m).cloned() else { continue };
                let exps = self.theta_exponents(&m);
                let value = self.eval(&exps);
                let k = value.get(&m).cloned().unwrap_or_else(|| f.zero());
                let coef = f.div(&c, &k).ok_or_else(|| WError::LeadingShape(format!(
                    "Theta-monomial {exps:?} lost its leading term"
                )))?;
                add_scaled(f, &mut rem, &value, &f.neg(&coef));
                add_term(f, &mut out, &exps, &coef);
            }
        }
        Ok(out)
    }

    /// The full relation table with its structural checks.
    pub fn commutator_table(&self) -> Result<WPresentation<F::Elem>, WError> {
        let eng = self.eng;
        let f = eng.field();
        let fr = eng.frame;
        let n = self.rank();
        let mut relations = BTreeMap::new();
        let mut report = TableReport {
            pairs: 0,
            filtration_ok: true,
            linear_part_ok: true,
            even_squares_ok: true,
            middle_ok: None,
            failures: Vec::new(),
        };
        for i in 0..n {
            for j in i..n {
                let poly = self.express(&self.commutator(i, j))?;
                report.pairs += 1;
                let (gi, gj) = (&self.gens[i], &self.gens[j]);
                let bound = gi.weight + gj.weight + 2;
                if poly.keys().any(|e| self.degree(e) > bound) {
                    report.filtration_ok = false;
                    report.failures.push(format!("filtration bound fails for ({}, {})", i + 1, j + 1));
                }
                if i == j && gi.parity == Parity::Even && !poly.is_empty() {
                    report.even_squares_ok = false;
                    report.failures.push(format!("[Theta_{0}, Theta_{0}] != 0", i + 1));
                }
                let is_mid = |g: &WGenerator<F::Elem>| Some(g.lead) == fr.middle;
                if is_mid(gi) && is_mid(gj) {
                    let c = fr.middle_norm.clone().unwrap_or_else(|| f.one());
                    let mut expect = BTreeMap::new();
                    add_term(f, &mut expect, &vec![0; n], &c);
                    let ok = poly == expect;
                    report.middle_ok = Some(ok);
                    if !ok {
                        report.failures.push("middle generator does not square to its norm".into());
                    }
                }
                if !is_mid(gi) && !is_mid(gj) {
                    // Structure constants of the centralizer in the Theta basis.
                    let br = fr.bracket_gens(gi.lead, gj.lead);
                    let mut alpha = vec![f.zero(); n];
                    let mut inside = true;
                    for (k, c) in br {
                        match self.gens.iter().position(|g| g.lead == *k && !is_mid(g)) {
                            Some(t) => alpha[t] = c.clone(),
                            None => inside = false,
                        }
                    }
                    let mut ok = inside;
                    for (t, a) in alpha.iter().enumerate() {
                        if self.gens[t].filtration_degree() != bound {
                            ok &= f.is_zero(a);
                            continue;
                        }
                        let mut unit = vec![0u16; n];
                        unit[t] = 1;
                        let got = poly.get(&unit).cloned().unwrap_or_else(|| f.zero());
                        ok &= got == *a;
                    }
                    if !ok {
                        report.linear_part_ok = false;
                        report.failures.push(format!("linear part of ({}, {}) differs from g^e", i + 1, j + 1));
                    }
                }
                relations.insert((i + 1, j + 1), poly);
            }
        }
        Ok(WPresentation { generators: self.gens.clone(), relations, report })
    }
}

pub fn polynomial_records<F: Field>(f: &F, poly: &ThetaPolynomial<F::Elem>) -> Vec<TermRecord> {
    poly.iter().map(|(e, c)| TermRecord { exponents: e.clone(), coeff: f.to_scalar(c) }).collect()
}

pub fn scalar_of<F: Field>(f: &F, c: &F::Elem) -> Scalar {
    f.to_scalar(c)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::{build_algebra, Family};
    use crate::frame::Frame;
    use crate::nilpotent::{analyze_element, nilpotent_preset};
    use crate::scalar::Rationals;

    fn frame(fam: Family, m: usize, n: usize, e: &str) -> Frame<Rationals> {
        let alg = build_algebra(fam, m, n).unwrap();
        let ev = nilpotent_preset(&alg, e).unwrap();
        let nd = analyze_element(&alg, &ev, e).unwrap();
        Frame::rational(&alg, &nd).unwrap()
    }

    #[test]
    fn zero_nilpotent_thetas_are_generators() {
        let fr = frame(Family::Gl, 1, 1, "zero");
        let eng = Engine::new(&fr, Ambient::GelfandGraev);
        let gens = solve_all(&eng).unwrap();
        assert_eq!(gens.len(), 4);
        for g in gens {
            assert_eq!(g.value.len(), 1);
            let (m, _) = g.value.iter().next().unwrap();
            assert_eq!(m[g.lead], 1);
        }
    }

    #[test]
    fn osp12_table() {
        let fr = frame(Family::Osp, 1, 2, "regular");
        let eng = Engine::new(&fr, Ambient::GelfandGraev);
        let gens = solve_all(&eng).unwrap();
        assert_eq!(gens.len(), 3);
        let w = WAlgebra::new(&eng, gens);
        let pres = w.commutator_table().unwrap();
        assert!(pres.report.all_ok(), "{:?}", pres.report);
        assert_eq!(pres.report.middle_ok, Some(true));
    }

    #[test]
    fn sl21_table_closes() {
        let fr = frame(Family::Sl, 2, 1, "E12");
        let eng = Engine::new(&fr, Ambient::GelfandGraev);
        let gens = solve_all(&eng).unwrap();
        let degs: Vec<i32> = gens.iter().map(|g| g.filtration_degree()).collect();
        assert_eq!(degs, vec![2, 4, 3, 3]);
        let w = WAlgebra::new(&eng, gens);
        let pres = w.commutator_table().unwrap();
        assert!(pres.report.all_ok(), "{:?}", pres.report);
    }
}
