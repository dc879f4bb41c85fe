use std::collections::BTreeMap;
use std::sync::OnceLock;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::One;
use proptest::prelude::*;

use wsuper::algebra::{build_algebra, Family, LieSuperalgebra};
use wsuper::frame::Frame;
use wsuper::io::{from_json, to_json, AlgebraArtifact, WPresentationArtifact};
use wsuper::modp::reduce_mod_p;
use wsuper::nilpotent::{analyze_element, nilpotent_preset, NilpotentData};
use wsuper::pbw::{Ambient, Element, Engine, Monomial, Terms};
use wsuper::scalar::{Field, PrimeField, Rationals, Scalar};
use wsuper::w::{solve_all, WAlgebra};
use wsuper::wchar0::Char0Run;

type Q = BigRational;

struct Setup {
    alg: LieSuperalgebra<Rationals>,
    nd: NilpotentData,
    frame: Frame<Rationals>,
}

fn setup(family: Family, m: usize, n: usize, e: &str) -> Setup {
    let alg = build_algebra(family, m, n).unwrap();
    let ev = nilpotent_preset(&alg, e).unwrap();
    let nd = analyze_element(&alg, &ev, e).unwrap();
    let frame = Frame::rational(&alg, &nd).unwrap();
    Setup { alg, nd, frame }
}

fn sl21() -> &'static Setup {
    static S: OnceLock<Setup> = OnceLock::new();
    S.get_or_init(|| setup(Family::Sl, 2, 1, "E12"))
}

fn osp12() -> &'static Setup {
    static S: OnceLock<Setup> = OnceLock::new();
    S.get_or_init(|| setup(Family::Osp, 1, 2, "regular"))
}

fn sl21_mod5() -> &'static Frame<PrimeField> {
    static S: OnceLock<Frame<PrimeField>> = OnceLock::new();
    S.get_or_init(|| sl21().frame.modular(&sl21().alg, 5).unwrap())
}

/// A co-basis monomial with small exponents (odd ones at most 1).
fn cobasis_monomial<F: Field>(fr: &Frame<F>, raw: &[u16]) -> Monomial {
    let mut m = vec![0u16; fr.dim()];
    for g in 0..fr.n_cobasis {
        let e = raw[g % raw.len()];
        m[g] = if fr.is_odd(g) { e % 2 } else { e % 3 };
    }
    m
}

fn word_element<F: Field>(eng: &Engine<'_, F>, word: &[usize]) -> Element<F::Elem> {
    Element { ambient: eng.ambient, terms: (*eng.normalize_word(word)).clone() }
}

fn words(dim: usize) -> impl Strategy<Value = Vec<usize>> {
    prop::collection::vec(0..dim, 0..4)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn product_is_associative_rational(a in words(8), b in words(8), c in words(8)) {
        let fr = &sl21().frame;
        let eng = Engine::new(fr, Ambient::Enveloping);
        let (x, y, z) = (word_element(&eng, &a), word_element(&eng, &b), word_element(&eng, &c));
        let left = eng.multiply(&eng.multiply(&x, &y).unwrap(), &z).unwrap();
        let right = eng.multiply(&x, &eng.multiply(&y, &z).unwrap()).unwrap();
        prop_assert_eq!(left, right);
    }

    #[test]
    fn product_is_associative_mod_p(a in words(8), b in words(8), c in words(8)) {
        let fr = sl21_mod5();
        let eng = Engine::new(fr, Ambient::Enveloping);
        let (x, y, z) = (word_element(&eng, &a), word_element(&eng, &b), word_element(&eng, &c));
        let left = eng.multiply(&eng.multiply(&x, &y).unwrap(), &z).unwrap();
        let right = eng.multiply(&x, &eng.multiply(&y, &z).unwrap()).unwrap();
        prop_assert_eq!(left, right);
    }

    #[test]
    fn rewriting_agrees_with_left_action(a in prop::collection::vec(0..8usize, 0..6), b in words(8)) {
        let fr = &sl21().frame;
        let eng = Engine::new(fr, Ambient::Enveloping);
        let mut ab = a.clone();
        ab.extend(&b);
        let by_rewriting = (*eng.normalize_word(&ab)).clone();
        let by_action = eng.act_word(&a, &eng.normalize_word(&b));
        prop_assert_eq!(by_rewriting, by_action);
    }

    #[test]
    fn commuting_formula_matches_left_action(
        coords in prop::collection::vec(-3i64..=3, 8),
        odd in any::<bool>(),
        raw in prop::collection::vec(0u16..3, 6),
    ) {
        let fr = &sl21().frame;
        let eng = Engine::new(fr, Ambient::GelfandGraev);
        let f = Rationals;
        let w: Vec<Q> = (0..fr.dim())
            .map(|i| if fr.is_odd(i) == odd { f.from_i64(coords[i]) } else { f.zero() })
            .collect();
        let mon = cobasis_monomial(fr, &raw);
        let formula = eng.commute_past_centralizer(&w, &mon);
        let direct = eng.act_vector(&w, &BTreeMap::from([(mon, Q::one())]));
        prop_assert_eq!(formula, direct);
    }

    #[test]
    fn leading_part_of_products_is_supercommutative(
        ra in prop::collection::vec(0u16..3, 6),
        rb in prop::collection::vec(0u16..3, 6),
    ) {
        let fr = &sl21().frame;
        let eng = Engine::new(fr, Ambient::GelfandGraev);
        let (a, b) = (cobasis_monomial(fr, &ra), cobasis_monomial(fr, &rb));
        let top = eng.e_degree(&a) + eng.e_degree(&b);
        let prod = eng.act_terms(&BTreeMap::from([(a.clone(), Q::one())]), &BTreeMap::from([(b.clone(), Q::one())]));
        let leading: Terms<Q> = prod.into_iter().filter(|(m, _)| eng.e_degree(m) == top).collect();
        let expected: Terms<Q> = match eng.graded_product(&a, &b) {
            Some((m, s)) => BTreeMap::from([(m, s)]),
            None => BTreeMap::new(),
        };
        prop_assert!(eng.max_e_degree(&leading).is_none_or(|d| d <= top));
        prop_assert_eq!(leading, expected);
    }

    #[test]
    fn express_inverts_eval(e0 in 0u16..3, e1 in 0u16..2, e2 in 0u16..2, e3 in 0u16..2) {
        let fr = &sl21().frame;
        let eng = Engine::new(fr, Ambient::GelfandGraev);
        let w = WAlgebra::new(&eng, solve_all(&eng).unwrap());
        let exps = vec![e0, e1, e2, e3];
        let value = w.eval(&exps);
        let poly = w.express(&value).unwrap();
        prop_assert_eq!(poly, BTreeMap::from([(exps, Q::one())]));
    }

    #[test]
    fn express_inverts_eval_odd_case(e0 in 0u16..3, e1 in 0u16..2, e2 in 0u16..2) {
        let fr = &osp12().frame;
        let eng = Engine::new(fr, Ambient::GelfandGraev);
        let w = WAlgebra::new(&eng, solve_all(&eng).unwrap());
        let exps = vec![e0, e1, e2];
        let poly = w.express(&w.eval(&exps)).unwrap();
        prop_assert_eq!(poly, BTreeMap::from([(exps, Q::one())]));
    }

    #[test]
    fn scalars_round_trip(n in any::<i64>(), d in 1i64..=i64::MAX, v in 0u64..1_000_003) {
        let q = Scalar::Rational(BigRational::new(BigInt::from(n), BigInt::from(d)));
        let back: Scalar = serde_json::from_str(&serde_json::to_string(&q).unwrap()).unwrap();
        prop_assert_eq!(back, q);
        let r = Scalar::Modular { value: v, p: 1_000_003 };
        let back: Scalar = serde_json::from_str(&serde_json::to_string(&r).unwrap()).unwrap();
        prop_assert_eq!(back, r);
    }

    #[test]
    fn restricted_axioms_hold(seed in any::<u64>(), pick in 0usize..3) {
        let p = [3u64, 5, 7][pick];
        let ma = reduce_mod_p(&sl21().alg, p).unwrap();
        let rep = ma.restrictedness_trials(4, seed);
        prop_assert!(rep.all_ok(), "{:?}", rep);
    }
}

#[test]
fn algebra_artifacts_round_trip() {
    for (fam, m, n) in [(Family::Gl, 1, 1), (Family::Sl, 2, 1), (Family::Osp, 1, 2), (Family::Gl, 2, 2), (Family::Osp, 2, 2)] {
        let alg = build_algebra(fam, m, n).unwrap();
        let art = AlgebraArtifact::from_algebra(&alg);
        let json = to_json(&art).unwrap();
        let back: AlgebraArtifact = from_json(&json).unwrap();
        assert_eq!(to_json(&back).unwrap(), json);
        let rebuilt = back.to_algebra().unwrap();
        assert_eq!(rebuilt, alg);
        // Sparse structure constants keep their order.
        assert_eq!(AlgebraArtifact::from_algebra(&rebuilt).brackets, art.brackets);
    }
}

#[test]
fn presentations_round_trip() {
    for s in [sl21(), osp12()] {
        let run = Char0Run::new(&s.alg, &s.nd).unwrap();
        let (pres, graded) = run.presentation(&s.nd, Some(6)).unwrap();
        let art = WPresentationArtifact::new(&s.nd, &run.frame, &pres, graded);
        let back: WPresentationArtifact = from_json(&to_json(&art).unwrap()).unwrap();
        assert_eq!(back, art);
        assert_eq!(back.to_presentation().unwrap(), pres);
    }
}

#[test]
fn zero_denominator_is_rejected() {
    assert!(serde_json::from_str::<Scalar>("\"1/0\"").is_err());
    assert!(serde_json::from_str::<Scalar>("\"3/4\"").is_ok());
}
