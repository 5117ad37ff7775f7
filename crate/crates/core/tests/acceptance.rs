//! Acceptance suite: one PASS/FAIL line per criterion, nonzero exit on any failure.

mod common;

use std::collections::BTreeSet;
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::path::PathBuf;
use std::process::Command as Process;
use std::time::{Duration, Instant};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use rand::{seq::SliceRandom, Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde_json::{json, Value};

use tgkz::binomial::{minimal_primes_icala, power_ideal, toric_ideal_ia, toric_ideal_icala};
use tgkz::cli::{run_text, Command, RunOptions};
use tgkz::exact_algebra::{
    ideal_equal, ideal_intersect, parse_polynomial, Cyclotomic, GroebnerEngine, IdealBasis, MonomialOrder, Polynomial,
};
use tgkz::group_lattice::{smith_normal_form, AbelianGroup, GroupElement, IntMatrix};
use tgkz::hypergeometric::{
    bbgkz_primitive_presentation, default_binomial_bound, h0_face_presentation, regularity_certificate, vanishing_test,
    ModuleSpec, RelationKind, SystemPresentation, Vanishing, WeylElement,
};
use tgkz::polyhedral::{face_lattice, facet_normals, normalized_volume, PointConfig};
use tgkz::rank_duality::{character_split, dual_parameter, dual_system, rank_formula, DEFAULT_TRUNCATION};
use tgkz::semigroup::{module_generators, ModuleKind, SemigroupModule};

use common::*;

type Outcome = Result<String, String>;

macro_rules! ensure {
    ($cond:expr, $($fmt:tt)+) => {
        if !$cond {
            return Err(format!($($fmt)+));
        }
    };
}

fn eng() -> GroebnerEngine {
    GroebnerEngine::default()
}

fn poly(text: &str, n: usize) -> Polynomial {
    parse_polynomial(text, n).unwrap()
}

fn same_ideal(i: &IdealBasis, gens: &[&str]) -> Result<bool, String> {
    let n = i.nvars();
    let want = IdealBasis::new(n, gens.iter().map(|g| poly(g, n)).collect());
    ideal_equal(i, &want, &eng()).map_err(|e| e.to_string())
}

fn spec_text(c: &PointConfig, beta: &[&str]) -> String {
    let cols: Vec<Value> = c.columns().iter().map(|a| json!({"torsion": a.torsion, "free": a.free})).collect();
    json!({"torsion_orders": c.group().torsion_orders(), "columns": cols, "beta": beta, "module": "K"}).to_string()
}

fn c1_ideals() -> Outcome {
    let a = free(&[&[1], &[2]]);
    let ia = toric_ideal_ia(&a, &eng()).map_err(|e| e.to_string())?;
    ensure!(ia.to_text() == vec!["d1^2 - d2"], "I_A = {:?}", ia.to_text());
    let c = z4();
    let power = power_ideal(&c, &eng()).map_err(|e| e.to_string())?;
    ensure!(same_ideal(&power, &["d1^8 - d2^4"])?, "power ideal {:?}", power.to_text());
    let ical = toric_ideal_icala(&c, &eng()).map_err(|e| e.to_string())?;
    ensure!(same_ideal(&ical, &["d1^8 - d2^4"])?, "I_calA {:?}", ical.to_text());
    ensure!(!same_ideal(&ical, &["d1^4 - d2^2"])?, "I_calA agrees with the smaller ideal");
    let out = run_text(&spec_text(&c, &["0"]), Command::Ideals, &RunOptions::default());
    ensure!(out.exit_code == 0, "ideals exited {}", out.exit_code);
    ensure!(out.report["ideals"]["I_calA"] == json!(["d1^8 - d2^4"]), "report {}", out.report["ideals"]);
    ensure!(out.report["ideals"]["I_A"] == json!(["d1^2 - d2"]), "report {}", out.report["ideals"]);
    let notes = out.report["notes"].as_array().cloned().unwrap_or_default();
    ensure!(notes.iter().any(|n| n.to_string().contains("d1^4 - d2^2")), "discrepancy note missing: {notes:?}");
    Ok("I_A = (d1^2 - d2), power and I_calA = (d1^8 - d2^4), note present".into())
}

fn c2_primes() -> Outcome {
    let c = z4();
    let primes = minimal_primes_icala(&c, &eng()).map_err(|e| e.to_string())?;
    ensure!(primes.len() == 4, "{} primes", primes.len());
    let mut want: Vec<Polynomial> = (0..4)
        .map(|k| Polynomial::binomial(&[2, 0], &Cyclotomic::root_of_unity(4, k), &[0, 1]))
        .collect();
    for p in &primes {
        let pos = want.iter().position(|w| ideal_equal(&p.ideal, &IdealBasis::new(2, vec![w.clone()]), &eng()).unwrap());
        ensure!(pos.is_some(), "unexpected prime {:?}", p.ideal.to_text());
        want.remove(pos.unwrap());
    }
    let meet = primes
        .iter()
        .skip(1)
        .try_fold(primes[0].ideal.clone(), |acc, p| ideal_intersect(&acc, &p.ideal, &eng()))
        .map_err(|e| e.to_string())?;
    ensure!(ideal_equal(&meet, &toric_ideal_icala(&c, &eng()).unwrap(), &eng()).unwrap(), "intersection differs");
    let product = (0..4)
        .map(|k| Polynomial::binomial(&[2, 0], &Cyclotomic::root_of_unity(4, k), &[0, 1]))
        .fold(Polynomial::one(2), |acc, f| &acc * &f);
    ensure!(product == poly("d1^8 - d2^4", 2), "product = {product}");
    Ok("4 primes d1^2 - i^k d2, intersection = I_calA, product = d1^8 - d2^4".into())
}

fn c3_prod_struct() -> Outcome {
    let c = prod_struct();
    let k = SemigroupModule::k(&c).unwrap();
    let prim = module_generators(&k).unwrap();
    let want = vec![GroupElement { torsion: vec![0], free: vec![0] }, GroupElement { torsion: vec![1], free: vec![0] }];
    ensure!(prim.elements == want, "T_prim = {:?}", prim.elements);
    let beta = [Cyclotomic::from_rational(q(-2, 5))];
    for bound in 0..=16 {
        let p = bbgkz_primitive_presentation(&k, &beta, bound).unwrap();
        ensure!(p.generators.len() == 2, "bound {bound}: {} generators", p.generators.len());
        ensure!(p.binomial_relations().count() == 0, "bound {bound}: {:?}", p.relation_texts());
    }
    let p = bbgkz_primitive_presentation(&k, &beta, 16).unwrap();
    ensure!(p.stabilized == Some(true), "not stable at 16");
    let texts = p.relation_texts();
    ensure!(texts == vec!["x1*d1*g0 + 2/5*g0", "x1*d1*g1 + 2/5*g1"], "Euler relations {texts:?}");
    let s = character_split(&c, DEFAULT_TRUNCATION).unwrap();
    let m = s.matrix(&[2], &s.pieces[0].torsion_basis);
    let m: Vec<Vec<String>> = m.iter().map(|r| r.iter().map(ToString::to_string).collect()).collect();
    ensure!(m == vec![vec!["1", "1"], vec!["1", "-1"]], "matrix {m:?}");
    ensure!(s.pieces.iter().all(|p| p.determinant == Cyclotomic::from_int(-2)), "determinants differ from -2");
    Ok("T_prim of size 2, no binomials up to bound 16, split det -2".into())
}

fn c4_ranks() -> Outcome {
    let cases = [("prod_struct", prod_struct(), 2), ("z4", z4(), 8), ("segment3", free(&[&[1, 0], &[1, 1], &[1, 2]]), 2)];
    for (name, c, want) in cases {
        let k = rank_formula(&c, ModuleKind::K).map_err(|e| e.to_string())?;
        let ki = rank_formula(&c, ModuleKind::KInterior).map_err(|e| e.to_string())?;
        ensure!(k == BigInt::from(want), "{name}: rank {k}");
        ensure!(k == ki, "{name}: K {k} vs K° {ki}");
        let hull = volume_oracle(&c.free_columns());
        ensure!(normalized_volume(&c) == hull, "{name}: volume vs hull {hull}");
        ensure!(BigInt::from(c.ell()) * hull == k, "{name}: ℓ·vol");
    }
    for (name, c) in battery() {
        let k = rank_formula(&c, ModuleKind::K).unwrap();
        ensure!(k == rank_formula(&c, ModuleKind::KInterior).unwrap(), "{name}: K ≠ K°");
        if c.d() <= 2 {
            ensure!(normalized_volume(&c) == volume_oracle(&c.free_columns()), "{name}: volume");
        }
    }
    // unit square at height one: two unimodular simplices
    let square = battery().into_iter().find(|(n, _)| *n == "square").unwrap().1;
    ensure!(normalized_volume(&square) == BigInt::from(2), "square volume");
    Ok("ranks 2, 8, 2; K = K° on the battery; volumes match the hull oracle".into())
}

fn presentations_of(c: &PointConfig, beta: &[Cyclotomic]) -> Vec<SystemPresentation> {
    let mut out = Vec::new();
    for kind in [ModuleKind::K, ModuleKind::KInterior] {
        let m = SemigroupModule::of_kind(kind, c).unwrap();
        let bound = default_binomial_bound(&m, &eng()).unwrap();
        out.push(bbgkz_primitive_presentation(&m, beta, bound).unwrap());
        if kind == ModuleKind::K {
            out.push(dual_system(c, beta, bound).unwrap().0);
        }
    }
    out
}

fn c5_duality() -> Outcome {
    let battery = battery();
    let mut r = ChaCha8Rng::seed_from_u64(5);
    for _ in 0..100 {
        let (_, c) = &battery[r.gen_range(0..battery.len())];
        let beta: Vec<Cyclotomic> = (0..c.d()).map(|_| Cyclotomic::from_rational(random_rational(&mut r))).collect();
        ensure!(dual_parameter(&dual_parameter(&beta, c), c) == beta, "not an involution at {beta:?}");
    }
    let mut count = 0;
    for (name, c) in &battery {
        let beta: Vec<Cyclotomic> = (0..c.d()).map(|_| Cyclotomic::from_rational(random_rational(&mut r))).collect();
        let (_, report) = dual_system(c, &beta, 4).unwrap();
        ensure!(report.rank_primal == report.rank_dual, "{name}: rank pairing");
        ensure!(report.dual_parameter == dual_parameter(&beta, c), "{name}: dual parameter");
        for p in presentations_of(c, &beta) {
            let t = p.sign_twist();
            ensure!(t.sign_twist().relations == p.relations, "{name}: sign twist is not an involution");
            let e1: Vec<_> = p.relations.iter().filter(|r| r.kind == RelationKind::Euler).collect();
            let e2: Vec<_> = t.relations.iter().filter(|r| r.kind == RelationKind::Euler).collect();
            ensure!(e1 == e2, "{name}: Euler relations moved under the twist");
            count += 1;
        }
    }
    Ok(format!("100 involution checks, rank pairing on {} configs, {count} presentations twisted", battery.len()))
}

fn weyl_to_op(w: &WeylElement) -> Op {
    w.terms().map(|(m, c)| (m.clone(), c.to_rational().unwrap())).collect()
}

fn c6_vanishing() -> Outcome {
    let c = free(&[&[1]]);
    let faces = face_lattice(&c).unwrap();
    let origin = faces.iter().find(|f| f.column_indices.is_empty()).unwrap().clone();
    let spec = ModuleSpec::Face { face: origin.clone(), shift: vec![BigRational::zero()] };
    let rho = tgkz::binomial::PartialCharacter::trivial(1, Vec::new()).unwrap();
    let cases = [(q(0, 1), Vanishing::Nonvanishing), (q(1, 1), Vanishing::Vanishes), (q(5, 1), Vanishing::Vanishes), (q(-1, 2), Vanishing::Vanishes)];
    for (beta, want) in cases {
        let cb = [Cyclotomic::from_rational(beta.clone())];
        let got = vanishing_test(&spec, &c, &cb).unwrap();
        let oracle = one_in_left_ideal(1, &face_module_relations(&[vec![1]], &[], &[beta.clone()]), 6);
        let pres = h0_face_presentation(&c, &origin, &rho, &cb, &eng()).unwrap();
        let ops: Vec<Op> = pres.relations.iter().map(|r| weyl_to_op(&r.terms[0].1)).collect();
        let lib_oracle = one_in_left_ideal(1, &ops, 6);
        let oracle_verdict = if oracle { Vanishing::Vanishes } else { Vanishing::Nonvanishing };
        ensure!(got == want, "β = {beta}: got {got:?}");
        ensure!(oracle_verdict == want, "β = {beta}: oracle says {oracle_verdict:?}");
        ensure!(lib_oracle == oracle, "β = {beta}: emitted presentation disagrees with the oracle");
    }
    let mut r = ChaCha8Rng::seed_from_u64(6);
    for _ in 0..20 {
        let beta = random_rational(&mut r);
        let got = vanishing_test(&ModuleSpec::K, &c, &[Cyclotomic::from_rational(beta.clone())]).unwrap();
        ensure!(got == Vanishing::Nonvanishing, "K vanishes at {beta}");
        ensure!(!one_in_left_ideal(1, &face_module_relations(&[vec![1]], &[0], &[beta.clone()]), 6), "oracle kills K at {beta}");
    }
    Ok("origin face: nonvanishing only at 0, matching the Weyl oracle; K nonvanishing at 20 β".into())
}

/// Multisets of size `n` from `pool`, as index lists.
fn multisets(pool: usize, n: usize) -> Vec<Vec<usize>> {
    if n == 0 {
        return vec![Vec::new()];
    }
    multisets(pool, n - 1)
        .into_iter()
        .flat_map(|m| {
            let start = m.last().copied().unwrap_or(0);
            (start..pool).map(move |k| [m.clone(), vec![k]].concat())
        })
        .collect()
}

fn exhaustive_configs() -> Vec<PointConfig> {
    let mut out = Vec::new();
    let mut r = ChaCha8Rng::seed_from_u64(7);
    for d in 1..=2usize {
        let pool: Vec<Vec<i64>> = box_vectors(d, 0, 3).into_iter().filter(|v| v.iter().any(|&x| x != 0)).collect();
        for n in 1..=4 {
            for pick in multisets(pool.len(), n) {
                let free: Vec<Vec<i64>> = pick.iter().map(|&k| pool[k].clone()).collect();
                for order in [None, Some(2), Some(3), Some(4)] {
                    let orders: Vec<i64> = order.into_iter().collect();
                    let torsion: Vec<Vec<i64>> =
                        (0..n).map(|_| orders.iter().map(|&o| r.gen_range(0..o)).collect()).collect();
                    let group = AbelianGroup::new(orders, d).unwrap();
                    let Ok(c) = PointConfig::new(group, torsion, free.clone()) else { continue };
                    if c.free_matrix().rank() == d {
                        out.push(c);
                    }
                }
            }
        }
    }
    out
}

fn box_vectors(d: usize, lo: i64, hi: i64) -> Vec<Vec<i64>> {
    let mut out = vec![Vec::new()];
    for _ in 0..d {
        out = out.into_iter().flat_map(|p: Vec<i64>| (lo..=hi).map(move |x| [p.clone(), vec![x]].concat())).collect();
    }
    out
}

/// Checks one configuration and module kind against oracle membership.
fn check_generation(c: &PointConfig, kind: ModuleKind, normals: &BTreeSet<Vec<i64>>) -> Result<usize, String> {
    let m = SemigroupModule::of_kind(kind, c).map_err(|e| e.to_string())?;
    let prim: BTreeSet<GroupElement> = module_generators(&m).map_err(|e| e.to_string())?.elements.into_iter().collect();
    let interior = kind == ModuleKind::KInterior;
    let inside = |p: &[i64]| {
        normals.iter().all(|nrm| {
            let v: i64 = nrm.iter().zip(p).map(|(a, b)| a * b).sum();
            if interior { v > 0 } else { v >= 0 }
        })
    };
    let g = c.group();
    let non_units: Vec<usize> = (0..c.n()).filter(|&j| !c.column(j).is_free_zero()).collect();
    let reduce = |t: &GroupElement| {
        let mut cur = t.clone();
        'outer: loop {
            for &j in &non_units {
                let next = g.sub(&cur, c.column(j));
                if inside(&next.free) {
                    cur = next;
                    continue 'outer;
                }
            }
            return cur;
        }
    };
    for p in &prim {
        ensure!(inside(&p.free), "{c:?}: primitive {p:?} outside the module");
        ensure!(reduce(p) == *p, "{c:?}: primitive {p:?} reduces further");
    }
    // columns are nonnegative and h(ā_j) ≥ 1, so h ≤ 6 forces 0 ≤ x_i ≤ 6·max a_ij
    let top = 6 * c.free_columns().iter().flatten().copied().max().unwrap_or(0);
    let mut checked = 0;
    for f in box_vectors(c.d(), 0, top) {
        if m.h_degree(&f) > 6 || !inside(&f) {
            continue;
        }
        for t in g.torsion_elements() {
            let el = GroupElement { torsion: t, free: f.clone() };
            let end = reduce(&el);
            ensure!(prim.contains(&end), "{c:?} {kind:?}: {el:?} reduces to {end:?} outside T_prim");
            checked += 1;
        }
    }
    Ok(checked)
}

fn c7_generation() -> Outcome {
    let configs = exhaustive_configs();
    let results: Vec<Result<usize, String>> = configs
        .par_iter()
        .filter(|c| tgkz::polyhedral::is_pointed(c))
        .flat_map_iter(|c| {
            let normals = brute_force_facets(&c.free_columns());
            [ModuleKind::K, ModuleKind::KInterior].map(|k| check_generation(c, k, &normals))
        })
        .collect();
    let mut total = 0;
    for res in results {
        total += res?;
    }
    Ok(format!("{} configurations, {total} module elements reduced", configs.len()))
}

fn c8_exact_algebra() -> Outcome {
    let mut r = ChaCha8Rng::seed_from_u64(8);
    for _ in 0..500 {
        let rows = r.gen_range(1..=5);
        let cols = r.gen_range(1..=5);
        let m: Vec<Vec<i64>> = (0..rows).map(|_| (0..cols).map(|_| r.gen_range(-20..=20)).collect()).collect();
        let m = IntMatrix::from_rows(&m, cols);
        let s = smith_normal_form(&m);
        ensure!(s.u.mul(&m).mul(&s.v) == s.d, "U·M·V ≠ D for {m:?}");
        ensure!(s.u.determinant().magnitude().is_one() && s.v.determinant().magnitude().is_one(), "U or V not unimodular");
        let f = &s.invariant_factors;
        ensure!(f.windows(2).all(|w| (&w[1] % &w[0]).is_zero()), "divisibility chain {f:?}");
        for i in 0..s.d.rows() {
            for j in 0..s.d.cols() {
                ensure!(i == j || s.d.get(i, j).is_zero(), "D not diagonal");
            }
        }
    }
    let order = MonomialOrder::GrevLex;
    let mut ideals: Vec<Vec<Polynomial>> = Vec::new();
    for (_, c) in battery() {
        let gens = toric_ideal_icala(&c, &eng()).unwrap().generators;
        if !gens.is_empty() {
            ideals.push(gens);
        }
    }
    ideals.push(vec![poly("d1^2*d2 - d3^2", 3), poly("d1*d3 - zeta(4)*d2^2", 3), poly("d2^3 - 2*d1", 3)]);
    for gens in &ideals {
        let base = eng().basis(gens, &order).map_err(|e| e.to_string())?;
        for _ in 0..5 {
            let mut g = gens.clone();
            g.shuffle(&mut r);
            ensure!(eng().basis(&g, &order).unwrap() == base, "basis depends on generator order");
        }
    }
    let mut facets_checked = 0;
    for d in 1..=3usize {
        for _ in 0..60 {
            let n = r.gen_range(d..=d + 2);
            let cols: Vec<Vec<i64>> = (0..n).map(|_| (0..d).map(|_| r.gen_range(0..=4)).collect()).collect();
            let Ok(c) = PointConfig::free(&cols) else { continue };
            if cols.iter().any(|a| a.iter().all(|&x| x == 0)) || c.free_matrix().rank() != d {
                continue;
            }
            let got: BTreeSet<Vec<i64>> = facet_normals(&c).unwrap().into_iter().collect();
            ensure!(got == brute_force_facets(&cols), "facets of {cols:?}");
            facets_checked += 1;
        }
    }
    Ok(format!("500 SNFs, {} bases permuted, {facets_checked} facet sets", ideals.len()))
}

fn c9_regularity() -> Outcome {
    let homogeneous = homogeneous_names();
    for (name, c) in battery() {
        let cert = regularity_certificate(&c);
        if homogeneous.contains(name) {
            let h = cert.ok_or_else(|| format!("{name}: no certificate"))?;
            for a in c.free_columns() {
                ensure!(h.apply(&a) == BigRational::one(), "{name}: h·a ≠ 1 at {a:?}");
            }
        } else if let Some(h) = cert {
            for a in c.free_columns() {
                ensure!(h.apply(&a) == BigRational::one(), "{name}: bogus certificate");
            }
        }
    }
    ensure!(regularity_certificate(&free(&[&[1], &[2]])).is_none(), "A = {{1,2}} has a certificate");
    Ok(format!("{} homogeneous configs certified, none for A = {{1,2}}", homogeneous.len()))
}

fn c10_determinism() -> Outcome {
    let bin = env!("CARGO_BIN_EXE_tgkz");
    let dir: PathBuf = std::env::temp_dir().join(format!("tgkz-acceptance-{}", std::process::id()));
    std::fs::create_dir_all(&dir).map_err(|e| e.to_string())?;
    let battery = battery();
    for (name, c) in &battery {
        let beta: Vec<&str> = ["1/2", "-1/3", "2"][..c.d()].to_vec();
        let path = dir.join(format!("{name}.json"));
        std::fs::write(&path, spec_text(c, &beta)).map_err(|e| e.to_string())?;
        let run = |threads: Option<&str>| {
            let mut cmd = Process::new(bin);
            cmd.arg("report").arg("--spec").arg(&path).env_remove("TGKZ_PAIR_BUDGET");
            if let Some(t) = threads {
                cmd.args(["--threads", t]);
            }
            cmd.output().map_err(|e| e.to_string())
        };
        let first = run(None)?;
        ensure!(first.status.code() == Some(0), "{name}: exit {:?}", first.status.code());
        for threads in [None, None, Some("1"), Some("4")] {
            ensure!(run(threads)?.stdout == first.stdout, "{name}: output differs ({threads:?} threads)");
        }
    }
    let _ = std::fs::remove_dir_all(&dir);
    Ok(format!("{} battery reports identical across 3 runs and 1/4 threads", battery.len()))
}

fn main() {
    let criteria: [(&str, fn() -> Outcome); 10] = [
        ("toric, power and lattice ideals of A = [1 2]", c1_ideals),
        ("minimal primes of the Z/4 example", c2_primes),
        ("product-structure example", c3_prod_struct),
        ("rank battery", c4_ranks),
        ("duality shift and sign twist", c5_duality),
        ("vanishing criterion", c6_vanishing),
        ("primitive generation, exhaustive", c7_generation),
        ("exact-algebra suites", c8_exact_algebra),
        ("regularity certificate", c9_regularity),
        ("determinism", c10_determinism),
    ];
    let limit = Duration::from_secs(10);
    let mut failed = 0;
    for (i, (title, f)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let res = catch_unwind(AssertUnwindSafe(f)).unwrap_or_else(|e| {
            let msg = e.downcast_ref::<String>().cloned().or_else(|| e.downcast_ref::<&str>().map(|s| s.to_string()));
            Err(format!("panic: {}", msg.unwrap_or_default()))
        });
        let took = start.elapsed();
        let res = match res {
            Ok(detail) if took > limit => Err(format!("{detail}; took {took:.1?}, over {limit:?}")),
            other => other,
        };
        match res {
            Ok(detail) => println!("PASS criterion {}: {title} ({detail}; {took:.2?})", i + 1),
            Err(why) => {
                failed += 1;
                println!("FAIL criterion {}: {title}: {why}", i + 1);
            }
        }
    }
    if failed > 0 {
        std::process::exit(1);
    }
}
