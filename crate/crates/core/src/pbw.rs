//! Normal ordering in the enveloping algebra and in the generalized
//! Gelfand-Graev module, over any [`Field`].
//!
//! Two independent multiplication routes are provided. [`Engine::normalize_word`]
//! rewrites an arbitrary word by resolving the rightmost disorder first;
//! [`Engine::mul_gen`] multiplies a generator into a normal-ordered monomial by
//! recursion on the smallest generator present. Tests compare the two.

use std::cell::RefCell;
use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::rc::Rc;

use serde::{Deserialize, Serialize};

use crate::algebra::Parity;
use crate::frame::Frame;
use crate::scalar::{Field, Scalar};

/// Exponent vector aligned with the frame order.
pub type Monomial = Vec<u16>;
pub type Terms<E> = BTreeMap<Monomial, E>;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Ambient {
    /// `U(g)`, or the reduced enveloping algebra in characteristic p.
    Enveloping,
    /// `U(g) (x)_{U(m)} F_chi`, or its reduced version.
    GelfandGraev,
}

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum PbwError {
    #[error("ambient mismatch: {0:?} vs {1:?}")]
    AmbientMismatch(Ambient, Ambient),
    #[error("monomial of length {got} in a frame of dimension {dim}")]
    BadMonomial { got: usize, dim: usize },
    #[error("generator {0} out of range")]
    BadGenerator(usize),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Element<E> {
    pub ambient: Ambient,
    pub terms: Terms<E>,
}

impl<E: Clone> Element<E> {
    pub fn zero(ambient: Ambient) -> Self {
        Element { ambient, terms: BTreeMap::new() }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }
}

/// Serialized form of one term.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TermRecord {
    pub exponents: Monomial,
    pub coeff: Scalar,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct FiltrationIndex {
    pub e_degree: i32,
    pub weight: i32,
}

pub fn add_scaled<F: Field>(f: &F, acc: &mut Terms<F::Elem>, src: &Terms<F::Elem>, c: &F::Elem) {
    if f.is_zero(c) {
        return;
    }
    for (m, x) in src {
        add_term(f, acc, m, &f.mul(c, x));
    }
}

pub fn add_term<F: Field>(f: &F, acc: &mut Terms<F::Elem>, m: &Monomial, c: &F::Elem) {
    if f.is_zero(c) {
        return;
    }
    match acc.get_mut(m) {
        Some(x) => {
            let s = f.add(x, c);
            if f.is_zero(&s) {
                acc.remove(m);
            } else {
                *x = s;
            }
        }
        None => {
            acc.insert(m.clone(), c.clone());
        }
    }
}

pub fn scale_terms<F: Field>(f: &F, src: &Terms<F::Elem>, c: &F::Elem) -> Terms<F::Elem> {
    let mut out = BTreeMap::new();
    add_scaled(f, &mut out, src, c);
    out
}

pub fn sub_terms<F: Field>(f: &F, a: &Terms<F::Elem>, b: &Terms<F::Elem>) -> Terms<F::Elem> {
    let mut out = a.clone();
    add_scaled(f, &mut out, b, &f.neg(&f.one()));
    out
}

/// Generators of a monomial as a nondecreasing word.
pub fn word_of(mon: &Monomial) -> Vec<usize> {
    let mut w = Vec::new();
    for (i, &e) in mon.iter().enumerate() {
        w.extend(std::iter::repeat_n(i, e as usize));
    }
    w
}

fn binomial<F: Field>(f: &F, n: u64, k: u64) -> F::Elem {
    let mut acc = f.one();
    for i in 0..k {
        acc = f.mul(&acc, &f.from_i64((n - i) as i64));
        acc = f.div(&acc, &f.from_i64((i + 1) as i64)).expect("binomial denominator");
    }
    acc
}

/// The multiplication machinery for one frame and one ambient.
pub struct Engine<'a, F: Field> {
    pub frame: &'a Frame<F>,
    pub ambient: Ambient,
    gen_memo: RefCell<HashMap<(usize, Monomial), Rc<Terms<F::Elem>>>>,
    word_memo: RefCell<HashMap<Vec<usize>, Rc<Terms<F::Elem>>>>,
}

impl<'a, F: Field> Engine<'a, F> {
    pub fn new(frame: &'a Frame<F>, ambient: Ambient) -> Self {
        Engine { frame, ambient, gen_memo: RefCell::default(), word_memo: RefCell::default() }
    }

    pub fn field(&self) -> &F {
        &self.frame.field
    }

    pub fn dim(&self) -> usize {
        self.frame.dim()
    }

    fn char_p(&self) -> Option<u16> {
        match self.field().characteristic() {
            0 => None,
            p => Some(p as u16),
        }
    }

    fn sign(&self, a: usize, b: usize) -> F::Elem {
        let f = self.field();
        f.sign(self.frame.is_odd(a) && self.frame.is_odd(b))
    }

    pub fn unit_monomial(&self) -> Monomial {
        vec![0; self.dim()]
    }

    pub fn one(&self) -> Element<F::Elem> {
        let mut terms = BTreeMap::new();
        terms.insert(self.unit_monomial(), self.field().one());
        Element { ambient: self.ambient, terms }
    }

    pub fn monomial(&self, mon: Monomial) -> Element<F::Elem> {
        let mut terms = BTreeMap::new();
        terms.insert(mon, self.field().one());
        Element { ambient: self.ambient, terms }
    }

    pub fn generator(&self, g: usize) -> Element<F::Elem> {
        let mut m = self.unit_monomial();
        m[g] = 1;
        self.monomial(m)
    }

    /// Element of `g` (frame coordinates) as a degree-one element.
    pub fn from_vector(&self, v: &[F::Elem]) -> Element<F::Elem> {
        let f = self.field();
        let mut terms = BTreeMap::new();
        for (g, c) in v.iter().enumerate() {
            if !f.is_zero(c) {
                let mut m = self.unit_monomial();
                m[g] = 1;
                terms.insert(m, c.clone());
            }
        }
        Element { ambient: self.ambient, terms }
    }

    pub fn parity_of(&self, mon: &Monomial) -> Parity {
        let odd = mon.iter().enumerate().filter(|&(i, &e)| self.frame.is_odd(i) && e % 2 == 1).count();
        Parity::of_bit(odd % 2 == 1)
    }

    pub fn index_of(&self, mon: &Monomial) -> FiltrationIndex {
        let mut w = 0;
        let mut deg = 0;
        for (i, &e) in mon.iter().enumerate() {
            w += i32::from(e) * self.frame.weight(i);
            deg += i32::from(e);
        }
        FiltrationIndex { e_degree: w + 2 * deg, weight: w }
    }

    pub fn e_degree(&self, mon: &Monomial) -> i32 {
        self.index_of(mon).e_degree
    }

    /// Largest e-degree of a term; `None` for zero.
    pub fn max_e_degree(&self, q: &Terms<F::Elem>) -> Option<i32> {
        q.keys().map(|m| self.e_degree(m)).max()
    }

    pub fn pi_project(&self, q: &Element<F::Elem>, e_degree: i32, weight: i32) -> Element<F::Elem> {
        let want = FiltrationIndex { e_degree, weight };
        let terms = q.terms.iter().filter(|(m, _)| self.index_of(m) == want).map(|(m, c)| (m.clone(), c.clone())).collect();
        Element { ambient: q.ambient, terms }
    }

    /// The monomials of maximal e-degree and, among those, maximal weight.
    pub fn leading_terms(&self, q: &Terms<F::Elem>) -> Vec<Monomial> {
        let Some(top) = q.keys().map(|m| self.index_of(m)).max() else {
            return Vec::new();
        };
        q.keys().filter(|m| self.index_of(m) == top).cloned().collect()
    }

    pub fn format_monomial(&self, mon: &Monomial) -> String {
        let parts: Vec<String> = mon
            .iter()
            .enumerate()
            .filter(|(_, &e)| e > 0)
            .map(|(i, &e)| {
                let l = &self.frame.gens[i].label;
                if e == 1 {
                    l.clone()
                } else {
                    format!("{l}^{e}")
                }
            })
            .collect();
        if parts.is_empty() {
            "1".into()
        } else {
            parts.join(" ")
        }
    }

    pub fn format(&self, q: &Terms<F::Elem>) -> String {
        if q.is_empty() {
            return "0".into();
        }
        let f = self.field();
        q.iter()
            .map(|(m, c)| format!("({}) {}", f.to_scalar(c), self.format_monomial(m)))
            .collect::<Vec<_>>()
            .join(" + ")
    }

    pub fn to_records(&self, q: &Terms<F::Elem>) -> Vec<TermRecord> {
        let f = self.field();
        q.iter().map(|(m, c)| TermRecord { exponents: m.clone(), coeff: f.to_scalar(c) }).collect()
    }

    // ---- route 2: generator times normal-ordered monomial ----

    /// `g * mon` in normal order. In the Gelfand-Graev ambient, `mon` must
    /// only involve co-basis generators and `m` acts through `eta`.
    pub fn mul_gen(&self, g: usize, mon: &Monomial) -> Rc<Terms<F::Elem>> {
        let key = (g, mon.clone());
        if let Some(hit) = self.gen_memo.borrow().get(&key) {
            return hit.clone();
        }
        let out = Rc::new(self.mul_gen_uncached(g, mon));
        self.gen_memo.borrow_mut().insert(key, out.clone());
        out
    }

    fn mul_gen_uncached(&self, g: usize, mon: &Monomial) -> Terms<F::Elem> {
        let f = self.field();
        let fr = self.frame;
        let mut out = BTreeMap::new();
        let first = mon.iter().position(|&e| e > 0);
        let in_m = g >= fr.n_cobasis;
        match first {
            None if in_m && self.ambient == Ambient::GelfandGraev => {
                add_term(f, &mut out, mon, &fr.eta[g]);
            }
            None => {
                let mut m = mon.clone();
                m[g] = 1;
                out.insert(m, f.one());
            }
            Some(x) if g < x => {
                let mut m = mon.clone();
                m[g] = 1;
                out.insert(m, f.one());
            }
            Some(x) if g == x => {
                let mut rest = mon.clone();
                rest[g] -= 1;
                if fr.is_odd(g) {
                    let half = f.inv(&f.from_i64(2)).expect("odd characteristic");
                    for (k, c) in fr.bracket_gens(g, g) {
                        add_scaled(f, &mut out, &self.mul_gen(*k, &rest), &f.mul(&half, c));
                    }
                } else if self.char_p() == Some(mon[g] + 1) {
                    rest[g] = 0;
                    let pm = fr.p_map.as_ref().and_then(|pm| pm[g].as_ref()).expect("p-map of even generator");
                    for (k, c) in pm {
                        add_scaled(f, &mut out, &self.mul_gen(*k, &rest), c);
                    }
                    let p = u64::from(self.char_p().unwrap());
                    add_term(f, &mut out, &rest, &f.pow(&fr.eta[g], p));
                } else {
                    let mut m = mon.clone();
                    m[g] += 1;
                    out.insert(m, f.one());
                }
            }
            Some(x) => {
                let mut rest = mon.clone();
                rest[x] -= 1;
                let inner = self.mul_gen(g, &rest);
                let s = self.sign(g, x);
                for (t, c) in inner.iter() {
                    add_scaled(f, &mut out, &self.mul_gen(x, t), &f.mul(&s, c));
                }
                for (k, c) in fr.bracket_gens(g, x) {
                    add_scaled(f, &mut out, &self.mul_gen(*k, &rest), c);
                }
            }
        }
        out
    }

    /// Left action of a generator on an element.
    pub fn act_gen(&self, g: usize, q: &Terms<F::Elem>) -> Terms<F::Elem> {
        let f = self.field();
        let mut out = BTreeMap::new();
        for (m, c) in q {
            add_scaled(f, &mut out, &self.mul_gen(g, m), c);
        }
        out
    }

    /// Left action of an element of `g` given in frame coordinates.
    pub fn act_vector(&self, z: &[F::Elem], q: &Terms<F::Elem>) -> Terms<F::Elem> {
        let f = self.field();
        let mut out = BTreeMap::new();
        for (g, c) in z.iter().enumerate() {
            if !f.is_zero(c) {
                add_scaled(f, &mut out, &self.act_gen(g, q), c);
            }
        }
        out
    }

    /// Left action of a word, rightmost letter first.
    pub fn act_word(&self, word: &[usize], q: &Terms<F::Elem>) -> Terms<F::Elem> {
        let mut cur = q.clone();
        for &g in word.iter().rev() {
            cur = self.act_gen(g, &cur);
            if cur.is_empty() {
                break;
            }
        }
        cur
    }

    /// Left action of an enveloping-algebra element given by its terms.
    pub fn act_terms(&self, u: &Terms<F::Elem>, q: &Terms<F::Elem>) -> Terms<F::Elem> {
        let f = self.field();
        let mut out = BTreeMap::new();
        for (m, c) in u {
            add_scaled(f, &mut out, &self.act_word(&word_of(m), q), c);
        }
        out
    }

    pub fn multiply(&self, a: &Element<F::Elem>, b: &Element<F::Elem>) -> Result<Element<F::Elem>, PbwError> {
        if b.ambient != self.ambient {
            return Err(PbwError::AmbientMismatch(self.ambient, b.ambient));
        }
        if a.ambient != Ambient::Enveloping && self.ambient == Ambient::Enveloping {
            return Err(PbwError::AmbientMismatch(a.ambient, b.ambient));
        }
        for m in a.terms.keys().chain(b.terms.keys()) {
            if m.len() != self.dim() {
                return Err(PbwError::BadMonomial { got: m.len(), dim: self.dim() });
            }
        }
        Ok(Element { ambient: self.ambient, terms: self.act_terms(&a.terms, &b.terms) })
    }

    // ---- route 1: word rewriting ----

    /// Normal form of an arbitrary word of generators.
    pub fn normalize_word(&self, word: &[usize]) -> Rc<Terms<F::Elem>> {
        if let Some(hit) = self.word_memo.borrow().get(word) {
            return hit.clone();
        }
        let out = Rc::new(self.normalize_uncached(word));
        self.word_memo.borrow_mut().insert(word.to_vec(), out.clone());
        out
    }

    fn normalize_uncached(&self, w: &[usize]) -> Terms<F::Elem> {
        let f = self.field();
        let fr = self.frame;
        let mut out = BTreeMap::new();
        let splice = |i: usize, len: usize, mid: &[usize]| -> Vec<usize> {
            let mut v = w[..i].to_vec();
            v.extend_from_slice(mid);
            v.extend_from_slice(&w[i + len..]);
            v
        };
        for i in (0..w.len().saturating_sub(1)).rev() {
            let (a, b) = (w[i], w[i + 1]);
            if a > b {
                let swapped = splice(i, 2, &[b, a]);
                add_scaled(f, &mut out, &self.normalize_word(&swapped), &self.sign(a, b));
                for (k, c) in fr.bracket_gens(a, b) {
                    add_scaled(f, &mut out, &self.normalize_word(&splice(i, 2, &[*k])), c);
                }
                return out;
            }
            if a == b && fr.is_odd(a) {
                let half = f.inv(&f.from_i64(2)).expect("odd characteristic");
                for (k, c) in fr.bracket_gens(a, a) {
                    add_scaled(f, &mut out, &self.normalize_word(&splice(i, 2, &[*k])), &f.mul(&half, c));
                }
                return out;
            }
        }
        if let Some(p) = self.char_p() {
            let p = p as usize;
            let mut i = 0;
            while i < w.len() {
                let mut j = i;
                while j < w.len() && w[j] == w[i] {
                    j += 1;
                }
                if j - i >= p {
                    let g = w[i];
                    let pm = fr.p_map.as_ref().and_then(|pm| pm[g].as_ref()).expect("p-map of even generator");
                    for (k, c) in pm {
                        add_scaled(f, &mut out, &self.normalize_word(&splice(i, p, &[*k])), c);
                    }
                    let c = f.pow(&fr.eta[g], p as u64);
                    add_scaled(f, &mut out, &self.normalize_word(&splice(i, p, &[])), &c);
                    return out;
                }
                i = j;
            }
        }
        if self.ambient == Ambient::GelfandGraev {
            if let Some(&last) = w.last() {
                if last >= fr.n_cobasis {
                    let c = fr.eta[last].clone();
                    add_scaled(f, &mut out, &self.normalize_word(&w[..w.len() - 1]), &c);
                    return out;
                }
            }
        }
        let mut m = self.unit_monomial();
        for &g in w {
            m[g] += 1;
        }
        out.insert(m, f.one());
        out
    }

    /// Normal form of a word given as `(generator, exponent)` pairs.
    pub fn normalize(&self, word: &[(usize, u16)]) -> Element<F::Elem> {
        let w: Vec<usize> = word.iter().flat_map(|&(g, e)| std::iter::repeat_n(g, e as usize)).collect();
        Element { ambient: self.ambient, terms: (*self.normalize_word(&w)).clone() }
    }

    // ---- Gelfand-Graev specific ----

    /// Image of an enveloping-algebra element in the Gelfand-Graev module:
    /// trailing `m` generators are replaced by their `eta` values.
    pub fn q_reduce(&self, u: &Element<F::Elem>) -> Element<F::Elem> {
        let f = self.field();
        let fr = self.frame;
        let mut out = BTreeMap::new();
        for (m, c) in &u.terms {
            let mut coef = c.clone();
            let mut head = m.clone();
            for g in fr.n_cobasis..m.len() {
                if m[g] > 0 {
                    coef = f.mul(&coef, &f.pow(&fr.eta[g], u64::from(m[g])));
                    head[g] = 0;
                }
            }
            add_term(f, &mut out, &head, &coef);
        }
        Element { ambient: Ambient::GelfandGraev, terms: out }
    }

    /// `[z, q]` in the Gelfand-Graev module, for `z` homogeneous in frame coordinates.
    pub fn ad_act(&self, z: &[F::Elem], q: &Terms<F::Elem>) -> Terms<F::Elem> {
        let f = self.field();
        let z_parity = z
            .iter()
            .enumerate()
            .find(|(_, c)| !f.is_zero(c))
            .map_or(Parity::Even, |(i, _)| self.frame.parity(i));
        let z_one = self.act_vector(z, &BTreeMap::from([(self.unit_monomial(), f.one())]));
        let mut out = self.act_vector(z, q);
        for (m, c) in q {
            let s = f.sign(z_parity.is_odd() && self.parity_of(m).is_odd());
            let right = self.act_word(&word_of(m), &z_one);
            add_scaled(f, &mut out, &right, &f.neg(&f.mul(&s, c)));
        }
        out
    }

    /// `[g_i, q]` for a single frame generator.
    pub fn ad_gen(&self, g: usize, q: &Terms<F::Elem>) -> Terms<F::Elem> {
        self.ad_act(&self.frame.unit(g), q)
    }

    /// Closed formula for `w * mon` obtained by moving `w` across the `x` and
    /// `y` factors of a co-basis monomial; the remaining words are normalized
    /// by rewriting.
    pub fn commute_past_centralizer(&self, w: &[F::Elem], mon: &Monomial) -> Terms<F::Elem> {
        let f = self.field();
        let fr = self.frame;
        let d = fr.dims;
        let xy_end = d.m + d.n;
        let parity = w
            .iter()
            .enumerate()
            .find(|(_, c)| !f.is_zero(c))
            .map_or(Parity::Even, |(i, _)| fr.parity(i));
        let tail: Vec<usize> = word_of(mon).into_iter().filter(|&g| g >= xy_end).collect();
        let mut out = BTreeMap::new();
        let mut prefix = vec![0u16; self.dim()];
        self.commute_rec(0, xy_end, w.to_vec(), parity, f.one(), &mut prefix, mon, &tail, &mut out);
        out
    }

    #[allow(clippy::too_many_arguments)]
    fn commute_rec(
        &self,
        t: usize,
        end: usize,
        w: Vec<F::Elem>,
        parity: Parity,
        coef: F::Elem,
        prefix: &mut Monomial,
        mon: &Monomial,
        tail: &[usize],
        out: &mut Terms<F::Elem>,
    ) {
        let f = self.field();
        let fr = self.frame;
        if crate::linalg::is_zero_vec(f, &w) || f.is_zero(&coef) {
            return;
        }
        if t == end {
            let head = word_of(prefix);
            for (k, c) in w.iter().enumerate() {
                if f.is_zero(c) {
                    continue;
                }
                let mut word = head.clone();
                word.push(k);
                word.extend_from_slice(tail);
                add_scaled(f, out, &self.normalize_word(&word), &f.mul(&coef, c));
            }
            return;
        }
        let a = mon[t];
        if a == 0 {
            self.commute_rec(t + 1, end, w, parity, coef, prefix, mon, tail, out);
            return;
        }
        let gt = fr.unit(t);
        if !fr.is_odd(t) {
            // w x^a = sum_i C(a, i) (-1)^i x^{a-i} (ad x)^i (w)
            let mut cur = w;
            for i in 0..=a {
                let c = f.mul(&binomial(f, u64::from(a), u64::from(i)), &f.sign(i % 2 == 1));
                prefix[t] = a - i;
                self.commute_rec(t + 1, end, cur.clone(), parity, f.mul(&coef, &c), prefix, mon, tail, out);
                cur = fr.bracket(&gt, &cur);
            }
            prefix[t] = 0;
        } else {
            // w y = (-1)^{|w|} (y w - [y, w])
            let s = f.sign(parity.is_odd());
            prefix[t] = 1;
            self.commute_rec(t + 1, end, w.clone(), parity, f.mul(&coef, &s), prefix, mon, tail, out);
            prefix[t] = 0;
            let yw = fr.bracket(&gt, &w);
            self.commute_rec(t + 1, end, yw, parity.add(Parity::Odd), f.mul(&coef, &f.neg(&s)), prefix, mon, tail, out);
        }
    }

    /// Leading product of two co-basis monomials in the associated graded:
    /// the summed exponent vector and its sign, or `None` when an odd
    /// generator would be squared.
    pub fn graded_product(&self, a: &Monomial, b: &Monomial) -> Option<(Monomial, F::Elem)> {
        let f = self.field();
        let mut sum = a.clone();
        for (s, e) in sum.iter_mut().zip(b) {
            *s += e;
        }
        let odd = |i: usize| self.frame.is_odd(i);
        if sum.iter().enumerate().any(|(i, &e)| odd(i) && e > 1) {
            return None;
        }
        let mut inversions = 0;
        for i in (0..a.len()).filter(|&i| odd(i) && a[i] == 1) {
            inversions += (0..i).filter(|&j| odd(j) && b[j] == 1).count();
        }
        Some((sum, f.sign(inversions % 2 == 1)))
    }

    pub fn memo_sizes(&self) -> (usize, usize) {
        (self.gen_memo.borrow().len(), self.word_memo.borrow().len())
    }
}

impl<E: fmt::Debug> fmt::Display for Element<E> {
    fn fmt(&self, fm: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(fm, "{:?}", self.terms)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::{build_algebra, Family};
    use crate::nilpotent::{analyze_element, nilpotent_preset};
    use crate::scalar::Rationals;
    use num_rational::BigRational;

    type Q = BigRational;

    fn frame(fam: Family, m: usize, n: usize, e: &str) -> Frame<Rationals> {
        let alg = build_algebra(fam, m, n).unwrap();
        let ev = nilpotent_preset(&alg, e).unwrap();
        let nd = analyze_element(&alg, &ev, e).unwrap();
        Frame::rational(&alg, &nd).unwrap()
    }

    #[test]
    fn gl11_odd_anticommutator() {
        // Zero nilpotent: the frame is the centralizer, i.e. all of gl(1|1).
        let fr = frame(Family::Gl, 1, 1, "zero");
        let eng = Engine::new(&fr, Ambient::Enveloping);
        let e12 = fr.gens.iter().position(|g| g.expr == "E12").unwrap();
        let e21 = fr.gens.iter().position(|g| g.expr == "E21").unwrap();
        let e11 = fr.gens.iter().position(|g| g.expr == "E11").unwrap();
        let e22 = fr.gens.iter().position(|g| g.expr == "E22").unwrap();
        let lhs = eng.normalize_word(&[e21, e12]);
        let rhs = eng.normalize_word(&[e12, e21]);
        let mut sum = (*lhs).clone();
        add_scaled(&Rationals, &mut sum, &rhs, &Q::from_integer(1.into()));
        let mut expect = BTreeMap::new();
        add_term(&Rationals, &mut expect, &eng.generator(e11).terms.keys().next().unwrap().clone(), &Q::from_integer(1.into()));
        add_term(&Rationals, &mut expect, &eng.generator(e22).terms.keys().next().unwrap().clone(), &Q::from_integer(1.into()));
        assert_eq!(sum, expect);
    }

    #[test]
    fn routes_agree_on_sl21_words() {
        let fr = frame(Family::Sl, 2, 1, "E12");
        let eng = Engine::new(&fr, Ambient::Enveloping);
        let words: Vec<Vec<usize>> = vec![vec![7, 0, 3], vec![6, 6, 1, 5], vec![4, 3, 2, 1, 0], vec![5, 5, 7, 7, 2]];
        for w in words {
            let r1 = eng.normalize_word(&w);
            let r2 = eng.act_word(&w, &eng.one().terms);
            assert_eq!(*r1, r2, "word {w:?}");
        }
    }

    #[test]
    fn ordered_monomial_is_fixed() {
        let fr = frame(Family::Sl, 2, 1, "E12");
        let eng = Engine::new(&fr, Ambient::Enveloping);
        let w = vec![0, 0, 1, 3, 6];
        let r = eng.normalize_word(&w);
        assert_eq!(r.len(), 1);
        assert_eq!(r.keys().next().unwrap(), &vec![2, 1, 0, 1, 0, 0, 1, 0]);
    }
}
