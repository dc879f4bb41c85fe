//! Acceptance suite. Every test prints one `criterion N: PASS|FAIL` line with
//! the exact quantities it compared, then asserts.

use std::collections::BTreeMap;
use std::time::{Duration, Instant};

use num_rational::BigRational;
use num_traits::{One, Zero};

use wsuper::algebra::{build_algebra, Family, LieSuperalgebra};
use wsuper::frame::Frame;
use wsuper::modp::{graded_p_map_check, reduce_mod_p, run_one, sweep, ReducedQ};
use wsuper::nilpotent::{analyze_element, nilpotent_preset, NilpotentData};
use wsuper::pbw::{word_of, Ambient, Engine};
use wsuper::scalar::{Field, PrimeField, Rationals};
use wsuper::w::{check_leading_shape, is_invariant, solve_all, WAlgebra};
use wsuper::wchar0::{centralizer_degrees, graded_check, super_symmetric_series};

type Q = BigRational;

fn report(n: u32, title: &str, ok: bool, detail: &str) {
    println!("criterion {n} [{title}]: {} | {detail}", if ok { "PASS" } else { "FAIL" });
    assert!(ok, "criterion {n} failed: {detail}");
}

fn setup(family: Family, m: usize, n: usize, e: &str) -> (LieSuperalgebra<Rationals>, NilpotentData, Frame<Rationals>) {
    let alg = build_algebra(family, m, n).unwrap();
    let ev = nilpotent_preset(&alg, e).unwrap();
    let nd = analyze_element(&alg, &ev, e).unwrap();
    let fr = Frame::rational(&alg, &nd).unwrap();
    (alg, nd, fr)
}

fn secs(d: Duration) -> String {
    format!("{:.3} s", d.as_secs_f64())
}

// ---------------------------------------------------------------------------

type Dense = Vec<Vec<u64>>;

fn mat_mul(fp: &PrimeField, a: &Dense, b: &Dense) -> Dense {
    let n = a.len();
    let mut c = vec![vec![0u64; n]; n];
    for i in 0..n {
        for k in 0..n {
            if a[i][k] == 0 {
                continue;
            }
            for j in 0..n {
                fp.add_mul(&mut c[i][j], &a[i][k], &b[k][j]);
            }
        }
    }
    c
}

#[test]
fn criterion_1_pbw_oracle_gl11() {
    let t0 = Instant::now();
    let (alg, _, fr0) = setup(Family::Gl, 1, 1, "zero");
    let fr = fr0.modular(&alg, 3).unwrap();
    let q = ReducedQ::build(fr).unwrap();
    let fp = q.frame.field;
    let n = q.dim();

    // Left-regular matrix of every basis monomial, built from the generator
    // matrices alone (column j = image of basis vector j).
    let gen_matrix = |g: usize| -> Dense {
        let mut m = vec![vec![0u64; n]; n];
        for (j, col) in q.left[g].iter().enumerate() {
            for (i, c) in col {
                m[*i][j] = *c;
            }
        }
        m
    };
    let gens: Vec<Dense> = (0..q.frame.dim()).map(gen_matrix).collect();
    let mut identity = vec![vec![0u64; n]; n];
    for (i, row) in identity.iter_mut().enumerate() {
        row[i] = 1;
    }
    let regular: Vec<Dense> = q
        .basis
        .iter()
        .map(|b| word_of(b).iter().fold(identity.clone(), |acc, &g| mat_mul(&fp, &acc, &gens[g])))
        .collect();

    // Products by word normalization.
    let eng = Engine::new(&q.frame, Ambient::GelfandGraev);
    let mut mismatches = 0usize;
    for (a, ma) in q.basis.iter().zip(&regular) {
        for (jb, (b, mb)) in q.basis.iter().zip(&regular).enumerate() {
            let mut word = word_of(a);
            word.extend(word_of(b));
            let prod = eng.normalize_word(&word);
            let mut m_prod = vec![vec![0u64; n]; n];
            for (mono, c) in prod.iter() {
                let k = q.index[mono];
                for (dst, src) in m_prod.iter_mut().zip(&regular[k]) {
                    for (d, s) in dst.iter_mut().zip(src) {
                        fp.add_mul(d, c, s);
                    }
                }
            }
            // Column b of L(a) is a*b as a vector.
            let col: Vec<u64> = ma.iter().map(|row| row[jb]).collect();
            if m_prod != mat_mul(&fp, ma, mb) || col != q.to_dense(&prod) {
                mismatches += 1;
            }
        }
    }
    let elapsed = t0.elapsed();
    report(
        1,
        "PBW oracle U_chi(gl(1|1)), p=3, e=0",
        n == 36 && mismatches == 0 && elapsed < Duration::from_secs(5),
        &format!("dim = {n} (expected 36), {} pairs, {mismatches} mismatches, {} (budget 5 s)", n * n, secs(elapsed)),
    );
}

// ---------------------------------------------------------------------------

#[test]
fn criterion_2_even_case_sl21() {
    let t0 = Instant::now();
    let (_, nd, fr) = setup(Family::Sl, 2, 1, "E12");
    let eng = Engine::new(&fr, Ambient::GelfandGraev);
    let gens = solve_all(&eng).unwrap();
    let shapes_ok = gens.iter().all(|g| check_leading_shape(&eng, &g.value).is_ok() && is_invariant(&eng, &g.value));
    let degrees: Vec<i32> = gens.iter().map(|g| g.filtration_degree()).collect();
    let w = WAlgebra::new(&eng, gens);
    let table = w.commutator_table();
    let (pairs, table_ok, linear_ok) = match &table {
        Ok(p) => (p.report.pairs, p.report.all_ok(), p.report.linear_part_ok),
        Err(_) => (0, false, false),
    };
    let (even, odd) = centralizer_degrees(&nd);
    let graded = graded_check(&w, &even, &odd, 10);
    // S(g^e) for g^e of sl(2|1) at E12: even degrees 2 (central) and 4 (e),
    // two odd of degree 3.
    let frozen: Vec<u64> = vec![1, 0, 1, 2, 2, 2, 3, 4, 4, 4, 5];
    // The closed form (1-t^2)^-2 (1+t^3)^2 counts two even generators of
    // degree 2; it disagrees with the actual centralizer.
    let closed_form = super_symmetric_series(&[2, 2], &[3, 3], 10);
    let elapsed = t0.elapsed();
    let ok = w.rank() == 4
        && shapes_ok
        && table_ok
        && linear_ok
        && graded.all_ok()
        && graded.pbw_counts == frozen
        && elapsed < Duration::from_secs(60);
    report(
        2,
        "even case sl(2|1), e=E12",
        ok,
        &format!(
            "{} generators of degrees {degrees:?}, leading shape ok = {shapes_ok}, {pairs} brackets closed = {table_ok}, \
             linear parts = {linear_ok}, counts to degree 10 = {:?} (S(g^e) = {:?}), invariant dims = {:?}, \
             closed form (1-t^2)^-2(1+t^3)^2 = {:?} differs from S(g^e) at t^2, {} (budget 60 s)",
            w.rank(),
            graded.pbw_counts,
            graded.expected_counts,
            graded.invariant_dims,
            closed_form,
            secs(elapsed)
        ),
    );
    assert_ne!(closed_form, frozen);
}

#[test]
fn criterion_3_odd_case_osp12() {
    let t0 = Instant::now();
    let (_, nd, fr) = setup(Family::Osp, 1, 2, "regular");
    let eng = Engine::new(&fr, Ambient::GelfandGraev);
    let gens = solve_all(&eng).unwrap();
    let middle = fr.middle.expect("r is odd");
    let mid_idx = gens.iter().position(|g| g.lead == middle).unwrap();
    let mut v = eng.unit_monomial();
    v[middle] = 1;
    let mid_value_ok = gens[mid_idx].value == BTreeMap::from([(v, Q::one())]);
    let mid_invariant = is_invariant(&eng, &gens[mid_idx].value);
    let w = WAlgebra::new(&eng, gens);
    let square = w.commutator(mid_idx, mid_idx);
    let norm = fr.middle_norm.clone().unwrap();
    let square_ok = square == BTreeMap::from([(eng.unit_monomial(), norm.clone())]);
    let table_ok = w.commutator_table().map(|p| p.report.all_ok()).unwrap_or(false);
    let (even, odd) = centralizer_degrees(&nd);
    let graded = graded_check(&w, &even, &odd, 10);
    // S(g^e) (x) exterior[Theta]: even degree 4, odd degrees 3 and 1.
    let frozen: Vec<u64> = vec![1, 1, 0, 1, 2, 1, 0, 1, 2, 1, 0];
    let elapsed = t0.elapsed();
    let ok = mid_value_ok
        && mid_invariant
        && square_ok
        && table_ok
        && graded.all_ok()
        && graded.pbw_counts == frozen
        && elapsed < Duration::from_secs(60);
    report(
        3,
        "odd case osp(1|2), regular e",
        ok,
        &format!(
            "Theta_mid = v (x) 1: {mid_value_ok}, invariant: {mid_invariant}, [Theta_mid, Theta_mid] = {} * id: {square_ok} \
             (norm is not a rational square so id-normalization is unavailable), table ok = {table_ok}, \
             counts to degree 10 = {:?} (expected {:?}), invariant dims = {:?}, {} (budget 60 s)",
            wsuper::scalar::format_rational(&norm),
            graded.pbw_counts,
            graded.expected_counts,
            graded.invariant_dims,
            secs(elapsed)
        ),
    );
}

// ---------------------------------------------------------------------------

#[test]
fn criterion_4_modp_dimensions_osp12() {
    let (alg, _, fr) = setup(Family::Osp, 1, 2, "regular");
    for p in [5u64, 7] {
        let t0 = Instant::now();
        let ma = reduce_mod_p(&alg, p).unwrap();
        let frp = fr.modular(&alg, p).unwrap();
        let run = run_one(&alg, &ma, frp, "chi", false).unwrap();
        let elapsed = t0.elapsed();
        let rw = &run.reduced_w;
        let ok = rw.dim_invariants as u64 == 4 * p
            && rw.pbw_count == rw.dim_invariants
            && rw.pbw_ok
            && elapsed < Duration::from_secs(10);
        report(
            4,
            &format!("reduced W dimension osp(1|2), p={p}"),
            ok,
            &format!(
                "dim Q^(ad m) = {} (4p = {}), PBW monomials = {}, independent and spanning = {}, {} (budget 10 s)",
                rw.dim_invariants,
                4 * p,
                rw.pbw_count,
                rw.pbw_ok,
                secs(elapsed)
            ),
        );
    }
}

#[test]
fn criterion_5_morita_identity() {
    for (fam, m, n, e) in [(Family::Sl, 2, 1, "E12"), (Family::Osp, 1, 2, "regular")] {
        let (alg, _, fr) = setup(fam, m, n, e);
        let runs = sweep(&alg, &fr, &[3, 5, 7], true, false).unwrap();
        for p in [3u64, 5, 7] {
            let at_p: Vec<_> = runs.iter().filter(|r| r.p == p).collect();
            let all = at_p.iter().all(|r| r.morita.ok && r.morita.freeness_ok);
            let mo = &at_p[0].morita;
            let etas: Vec<&str> = at_p.iter().map(|r| r.eta_label.as_str()).collect();
            report(
                5,
                &format!("Morita identity {}, e={e}, p={p}", alg.kind),
                all && at_p.len() >= 2,
                &format!(
                    "dim U = {} = {}^2 * {} for eta in {etas:?}; dim Q = {}, Whittaker dim = {}",
                    mo.dim_u, mo.delta, mo.dim_w, mo.dim_q, mo.dim_whittaker
                ),
            );
        }
    }
}

#[test]
fn criterion_6_mprime_invariants_osp12() {
    let (alg, _, fr) = setup(Family::Osp, 1, 2, "regular");
    for p in [3u64, 5] {
        let ma = reduce_mod_p(&alg, p).unwrap();
        let run = run_one(&alg, &ma, fr.modular(&alg, p).unwrap(), "chi", false).unwrap();
        let ps = &run.prop_small;
        report(
            6,
            &format!("ad m' invariants osp(1|2), p={p}"),
            ps.applicable && ps.equality && ps.proper && ps.witness_ok,
            &format!(
                "dim Q^(ad m') = {}, dim [v, Q^(ad m)] = {}, dim Q^(ad m) = {}, equality = {}, proper = {}, witness = {}",
                ps.dim_mprime_invariants, ps.dim_image, ps.dim_m_invariants, ps.equality, ps.proper, ps.witness_ok
            ),
        );
    }
}

// ---------------------------------------------------------------------------

#[test]
fn criterion_7_structural_decompositions() {
    let matrix: [(Family, usize, usize, &[&str]); 4] = [
        (Family::Gl, 1, 1, &["zero"]),
        (Family::Sl, 2, 1, &["zero", "E12"]),
        (Family::Osp, 1, 2, &["zero", "regular"]),
        (Family::Gl, 2, 2, &["E12", "E12+E34"]),
    ];
    for (fam, m, n, list) in matrix {
        for e in list {
            let (alg, nd, _) = setup(fam, m, n, e);
            let c = &nd.checks;
            report(
                7,
                &format!("structure {}, e={e}", alg.kind),
                c.mperp_ok && c.p_ok && c.dim_identity_ok && c.all_ok(),
                &format!(
                    "m^perp: {} = {} + {} direct ({}), p: {} = {} + {} direct ({}), dim identity {:?} ({})",
                    c.mperp_dim, c.mprime_e_dim, c.gf_dim, c.mperp_ok, c.p_dim, c.f_image_dim, c.ge_dim, c.p_ok,
                    c.dim_identity, c.dim_identity_ok
                ),
            );
        }
    }
    // gl(1|1) has abelian even part, so zero is its only even nilpotent.
    let alg = build_algebra(Family::Gl, 1, 1).unwrap();
    assert!(nilpotent_preset(&alg, "regular").unwrap().iter().all(|c| c.is_zero()));
}

#[test]
fn criterion_8_restrictedness() {
    let cases = [
        (Family::Gl, 1, 1, "zero"),
        (Family::Sl, 2, 1, "E12"),
        (Family::Osp, 1, 2, "regular"),
        (Family::Gl, 2, 2, "E12+E34"),
    ];
    for (fam, m, n, e) in cases {
        let (alg, _, fr) = setup(fam, m, n, e);
        for p in [3u64, 5, 7] {
            let ma = reduce_mod_p(&alg, p).unwrap();
            let rep = ma.restrictedness_trials(100, 1000 + p);
            let graded = graded_p_map_check(&fr.modular(&alg, p).unwrap());
            report(
                8,
                &format!("restricted structure {}, p={p}", alg.kind),
                rep.all_ok() && rep.trials == 100 && graded,
                &format!("{rep:?}, graded p-map containment = {graded}"),
            );
        }
    }
}

#[test]
fn criterion_9_zero_nilpotent() {
    for (fam, m, n, d) in [(Family::Gl, 1, 1, 10usize), (Family::Sl, 2, 1, 8)] {
        let (alg, nd, fr) = setup(fam, m, n, "zero");
        let eng = Engine::new(&fr, Ambient::GelfandGraev);
        let gens = solve_all(&eng).unwrap();
        let exact = gens.len() == alg.dim()
            && gens.iter().all(|g| {
                let mut y = eng.unit_monomial();
                y[g.lead] = 1;
                g.value == BTreeMap::from([(y, Q::one())])
            });
        let w = WAlgebra::new(&eng, gens);
        let (even, odd) = centralizer_degrees(&nd);
        let graded = graded_check(&w, &even, &odd, d);
        // PBW basis of U(g): monomials of standard degree k sit in degree 2k.
        let (de, dodd) = alg.sdim();
        let binom = |a: u64, b: u64| -> u64 { (0..b).fold(1u64, |acc, i| acc * (a - i) / (i + 1)) };
        let enveloping: Vec<u64> = (0..=d as u64)
            .map(|t| {
                if t % 2 == 1 {
                    return 0;
                }
                let k = t / 2;
                (0..=k.min(dodd as u64))
                    .map(|j| {
                        let r = k - j;
                        let even_count = if de == 0 { u64::from(r == 0) } else { binom(de as u64 + r - 1, r) };
                        binom(dodd as u64, j) * even_count
                    })
                    .sum()
            })
            .collect();
        report(
            9,
            &format!("zero nilpotent {}", alg.kind),
            exact && graded.all_ok() && graded.pbw_counts == enveloping,
            &format!(
                "Theta_k = generator k exactly: {exact}, counts to degree {d} = {:?}, U(g) PBW counts = {enveloping:?}",
                graded.pbw_counts
            ),
        );
    }
}
