//! Acceptance suite: one line per criterion, non-zero exit if any fails.
//! Expected values come from closed formulas evaluated here or from
//! published constants, never from the code under test.

use std::panic::{catch_unwind, AssertUnwindSafe};
use std::process::Command;
use std::time::{Duration, Instant};

use pgw_core::bounds::CheckStatus;
use pgw_core::commutator::naive::{all_words, naive_normal_form};
use pgw_core::commutator::{
    enumerate_basic_commutators, verify_free_nilpotent_basis, verify_struik_instance, witt_chi,
    FreeNilpotentContext,
};
use pgw_core::family::{build_family, lm_generators, BuiltFamily, FamilySpec};
use pgw_core::multiplier::{abelian_multiplier, pst_multiplier, AbelianPGroup, Catalog};
use pgw_core::report::{analyze_built, run_analysis};
use pgw_core::residue::ResidueMatrix;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha20Rng;

type Outcome = Result<String, String>;

macro_rules! ensure {
    ($cond:expr, $($msg:tt)+) => {
        if !$cond {
            return Err(format!($($msg)+));
        }
    };
}

/// Independent Witt number: Möbius by trial division, exact i128 sum.
fn oracle_chi(d: u64, n: u32) -> u64 {
    fn mu(mut m: u32) -> i128 {
        let mut sign = 1;
        let mut q = 2;
        while q * q <= m {
            if m.is_multiple_of(q) {
                m /= q;
                if m.is_multiple_of(q) {
                    return 0;
                }
                sign = -sign;
            }
            q += 1;
        }
        if m > 1 {
            -sign
        } else {
            sign
        }
    }
    let s: i128 = (1..=n)
        .filter(|k| n.is_multiple_of(*k))
        .map(|k| mu(k) * i128::from(d).pow(n / k))
        .sum();
    (s / i128::from(n)) as u64
}

struct Fleet {
    members: Vec<BuiltFamily>,
}

impl Fleet {
    fn build() -> Self {
        let specs = [
            FamilySpec::Abelian {
                p: 3,
                alphas: vec![2, 1],
            },
            FamilySpec::Abelian {
                p: 2,
                alphas: vec![2, 2],
            },
            FamilySpec::LmExample { p: 3, l: 1 },
            FamilySpec::LmExample { p: 3, l: 2 },
            FamilySpec::LmExample { p: 5, l: 1 },
            FamilySpec::Sd16,
            FamilySpec::Mod27,
            FamilySpec::Dihedral8,
        ];
        Self {
            members: specs
                .iter()
                .map(|s| build_family(s).expect("fleet builds"))
                .collect(),
        }
    }

    fn powerful(&self) -> impl Iterator<Item = &BuiltFamily> {
        self.members
            .iter()
            .filter(|b| b.spec != FamilySpec::Dihedral8)
    }

    fn get(&self, spec: &FamilySpec) -> &BuiltFamily {
        self.members
            .iter()
            .find(|b| &b.spec == spec)
            .expect("in fleet")
    }
}

fn within(elapsed: Duration, limit: Duration) -> Outcome {
    if elapsed < limit {
        Ok(format!("{elapsed:.2?} < {limit:?}"))
    } else {
        Err(format!("took {elapsed:.2?}, limit {limit:?}"))
    }
}

fn c1_witt() -> Outcome {
    let t = Instant::now();
    ensure!(witt_chi(3, 4) == 18, "chi_4(3) = {}", witt_chi(3, 4));
    ensure!(witt_chi(9, 4) == 1620, "chi_4(9) = {}", witt_chi(9, 4));
    for d in 1..=10u64 {
        ensure!(witt_chi(d, 2) == u128::from(d * (d - 1) / 2), "chi_2({d})");
    }
    within(t.elapsed(), Duration::from_secs(1))
}

fn c2_enumeration() -> Outcome {
    let t = Instant::now();
    for d in 1..=4usize {
        let basis = enumerate_basic_commutators(d, 6).map_err(|e| e.to_string())?;
        for n in 1..=6 {
            let want = oracle_chi(d as u64, n);
            ensure!(basis.count_of_weight(n) as u64 == want, "d={d} n={n}");
            ensure!(
                witt_chi(d as u64, n) == u128::from(want),
                "witt d={d} n={n}"
            );
        }
    }
    within(t.elapsed(), Duration::from_secs(5))
}

fn c3_lm_fleet(fleet: &Fleet, l2_build: Duration) -> Outcome {
    for (p, l) in [(3u64, 1u32), (3, 2), (5, 1)] {
        let b = fleet.get(&FamilySpec::LmExample { p, l });
        let inv = &b.invariants;
        ensure!(
            inv.order_exp == 3 * (l + 1),
            "({p},{l}) |P| = p^{}",
            inv.order_exp
        );
        ensure!(inv.e == l + 1, "({p},{l}) exponent p^{}", inv.e);
        ensure!(inv.cl == l + 1, "({p},{l}) class {}", inv.cl);
        ensure!(inv.powerful, "({p},{l}) not powerful");
        ensure!(
            b.assertions.iter().all(|a| a.passed),
            "({p},{l}) realization check failed"
        );

        let [x, y, z] = lm_generators(p, l).map_err(|e| e.to_string())?;
        let md = x.modulus();
        let zp = z.mat_pow(p as i64).unwrap();
        for (name, a, bb) in [("[X,Y]", &x, &y), ("[X,Z]", &x, &z), ("[Y,Z]", &y, &z)] {
            // a^-1 b^-1 a b computed by hand here.
            let c = a
                .mat_inv()
                .unwrap()
                .mat_mul(&bb.mat_inv().unwrap())
                .unwrap()
                .mat_mul(a)
                .unwrap()
                .mat_mul(bb)
                .unwrap();
            ensure!(c == zp, "({p},{l}) {name} != Z^p");
        }
        let modulus = i128::from(md.modulus());
        let mut acc = zp;
        for k in 1..=l + 1 {
            acc = acc
                .mat_inv()
                .unwrap()
                .mat_mul(&x.mat_inv().unwrap())
                .unwrap()
                .mat_mul(&acc)
                .unwrap()
                .mat_mul(&x)
                .unwrap();
            let entry = if k % 2 == 0 { 1 } else { -1 } * i128::from(p).pow(k + 2);
            let reduced = entry.rem_euclid(modulus) as i64;
            let want = ResidueMatrix::from_rows(md, &[vec![1, reduced], vec![0, 1]]).unwrap();
            ensure!(acc == want, "({p},{l}) [Z^p,{k}X]");
            ensure!(
                acc.is_identity() == (k >= l),
                "({p},{l}) vanishing at k={k}"
            );
        }
    }
    within(l2_build, Duration::from_secs(60)).map(|t| format!("(3,2) built in {t}"))
}

fn c4_c5_catalog(spec: FamilySpec, p: u64, order_exp: u32, e: u32) -> Outcome {
    let doc = run_analysis(&spec, 2, &Catalog::builtin()).map_err(|e| e.to_string())?;
    let inv = doc.invariants.as_ref().unwrap();
    ensure!(inv.order_exp == order_exp, "|G| = {p}^{}", inv.order_exp);
    ensure!(inv.d == 2, "d = {}", inv.d);
    ensure!(inv.e == e, "exp = {p}^{}", inv.e);
    ensure!(inv.powerful, "not powerful");
    let m = doc.multiplier.as_ref().ok_or("no multiplier")?;
    ensure!(m == &AbelianPGroup::new(p, vec![1, 1]).unwrap(), "M = {m}");
    let gen = doc.check("generator_bound").unwrap();
    ensure!(
        gen.lhs == Some(2) && gen.rhs == Some(2) && gen.attained,
        "generator bound {gen:?}"
    );
    let ex = doc.check("exponent_bound").unwrap();
    ensure!(
        ex.lhs == Some(1) && ex.rhs == Some(i64::from(e)) && ex.holds,
        "exponent {ex:?}"
    );
    let ord = doc.check("order_bound").unwrap();
    ensure!(
        ord.lhs == Some(2) && ord.rhs == Some(2 * i64::from(e)) && ord.holds,
        "order {ord:?}"
    );
    ensure!(doc.passed(), "report has violations");
    Ok(format!("|M| = {p}^2 <= {p}^{}", 2 * e))
}

fn c6_abelian() -> Outcome {
    let mut rng = ChaCha20Rng::seed_from_u64(41);
    let catalog = Catalog::builtin();
    for _ in 0..50 {
        let p = [2u64, 3, 5][rng.gen_range(0..3)];
        let d = rng.gen_range(1..=4usize);
        let mut alphas: Vec<u32> = (0..d).map(|_| rng.gen_range(1..=4)).collect();
        let c = rng.gen_range(1..=3u32);
        alphas.sort_unstable_by(|a, b| b.cmp(a));
        let g = AbelianPGroup::new(p, alphas.clone()).unwrap();
        let m = abelian_multiplier(&g, c).unwrap().structure_invariants();
        let b = |i: usize| oracle_chi(i as u64, c + 1);
        let e2 = if d >= 2 { alphas[1] } else { 0 };
        let order: u64 = (2..=d)
            .map(|i| u64::from(alphas[i - 1]) * (b(i) - b(i - 1)))
            .sum();
        ensure!(m.d == b(d), "{alphas:?} c={c}: d(M) = {}", m.d);
        ensure!(m.e == e2, "{alphas:?} c={c}: e(M) = {}", m.e);
        ensure!(
            m.order_exp == order,
            "{alphas:?} c={c}: order {}",
            m.order_exp
        );

        let spec = FamilySpec::Abelian {
            p,
            alphas: alphas.clone(),
        };
        let doc = analyze_built(&build_family(&spec).unwrap(), c, &catalog).unwrap();
        let all_equal = alphas.iter().all(|&a| a == alphas[0]);
        let ord = doc.check("order_bound").unwrap();
        ensure!(
            ord.rhs == Some((b(d) * u64::from(alphas[0])) as i64),
            "{alphas:?} rhs"
        );
        ensure!(
            ord.attained == all_equal,
            "{alphas:?} c={c}: attained {}",
            ord.attained
        );
        ensure!(
            doc.check("generator_bound").unwrap().attained,
            "{alphas:?}: generator bound"
        );
    }
    Ok("50 specs".into())
}

fn c7_pst() -> Outcome {
    let mut rng = ChaCha20Rng::seed_from_u64(42);
    let catalog = Catalog::builtin();
    for _ in 0..20 {
        let p = [3u64, 5, 7, 11][rng.gen_range(0..4)];
        let d = rng.gen_range(2..=5u32);
        let t = rng.gen_range(1..=3u32);
        let s = t + rng.gen_range(0..=2u32);
        let c = rng.gen_range(1..=3u32);
        let lo = oracle_chi(d.into(), c + 1);
        let hi = oracle_chi(d.into(), c + 2);
        let m = pst_multiplier(p, d, s, t, c)
            .unwrap()
            .structure_invariants();
        ensure!(m.d == lo + hi, "p={p} d={d} c={c}: d(M) = {}", m.d);
        ensure!(m.d > lo, "p={p} d={d} c={c}: not strict");
        let spec = FamilySpec::Pst { p, d, s, t };
        let doc = analyze_built(&build_family(&spec).unwrap(), c, &catalog).unwrap();
        let gen = doc.check("generator_bound").unwrap();
        ensure!(!gen.holds, "generator bound holds for {spec:?}");
        ensure!(
            gen.status == CheckStatus::ReportOnly,
            "status {:?}",
            gen.status
        );
        ensure!(gen.note.contains("non-powerful"), "note {}", gen.note);
    }
    Ok("20 specs, bound fails each time".into())
}

fn c8_powerful_structure(fleet: &Fleet) -> Outcome {
    let mut clauses = 0;
    for b in fleet.powerful() {
        let g = b.table.as_ref().unwrap();
        ensure!(g.is_powerful().unwrap(), "{} not powerful", b.spec.id());
        let r = g.verify_powerful_structure().map_err(|e| e.to_string())?;
        for clause in ["i", "ii", "iii", "iv", "v"] {
            ensure!(
                r.results.iter().any(|x| x.clause == clause),
                "{}: clause ({clause}) not evaluated",
                b.spec.id()
            );
            ensure!(
                r.clause_passed(clause),
                "{}: clause ({clause}) fails",
                b.spec.id()
            );
        }
        clauses += r.results.len();
    }
    let d8 = fleet.get(&FamilySpec::Dihedral8).table.as_ref().unwrap();
    ensure!(d8.order() == 8, "dihedral order {}", d8.order());
    ensure!(!d8.is_powerful().unwrap(), "dihedral 8 reported powerful");
    Ok(format!("{clauses} clause instances, D8 not powerful"))
}

fn c9_collection() -> Outcome {
    let mut rng = ChaCha20Rng::seed_from_u64(43);
    let mut ctxs = Vec::new();
    for d in 1..=3 {
        for class in 1..=4 {
            ctxs.push(FreeNilpotentContext::new(d, class).unwrap());
        }
    }
    for case in 0..1000 {
        let ctx = &ctxs[case % ctxs.len()];
        let d = ctx.letters() as i64;
        let mut word = || -> Vec<i64> {
            (0..rng.gen_range(0..=8))
                .map(|_| rng.gen_range(1..=d) * if rng.gen_bool(0.5) { 1 } else { -1 })
                .collect()
        };
        let (wa, wb, wc) = (word(), word(), word());
        let a = ctx.from_word(&wa).unwrap();
        let b = ctx.from_word(&wb).unwrap();
        let c = ctx.from_word(&wc).unwrap();
        let e = ctx.identity();
        ensure!(
            ctx.multiply(&ctx.multiply(&a, &b), &c) == ctx.multiply(&a, &ctx.multiply(&b, &c)),
            "associativity {wa:?} {wb:?} {wc:?}"
        );
        ensure!(
            ctx.multiply(&a, &e) == a && ctx.multiply(&e, &a) == a,
            "identity {wa:?}"
        );
        ensure!(
            ctx.multiply(&a, &ctx.inverse(&a)).is_identity(),
            "inverse {wa:?}"
        );
        ensure!(
            ctx.multiply(&ctx.inverse(&a), &a).is_identity(),
            "inverse {wa:?}"
        );
    }
    let ctx = FreeNilpotentContext::new(2, 3).unwrap();
    let words = all_words(2, 4);
    for w in &words {
        let got: Vec<String> = ctx
            .from_word(w)
            .unwrap()
            .exponents()
            .iter()
            .map(|x| x.to_string())
            .collect();
        let want: Vec<String> = naive_normal_form(w, 3)
            .iter()
            .map(|x| x.to_string())
            .collect();
        ensure!(got == want, "word {w:?}: {got:?} vs {want:?}");
    }
    for d in 1..=3usize {
        let check = verify_free_nilpotent_basis(d, 1, 4).map_err(|e| e.to_string())?;
        ensure!(check.passed(), "d={d}: {:?}", check.failures);
        for n in 1..=4u32 {
            let rank = check.ranks.iter().find(|(w, _)| *w == n).map(|x| x.1);
            ensure!(
                rank == Some(oracle_chi(d as u64, n) as usize),
                "d={d} n={n}: rank {rank:?}"
            );
        }
    }
    Ok(format!("1000 random cases, {} words", words.len()))
}

fn c10_struik() -> Outcome {
    let alphas: Vec<i64> = (0..=6).collect();
    let mut terms = 0;
    for class in [3u32, 4] {
        let check = verify_struik_instance(2, class, 2, &alphas).map_err(|e| e.to_string())?;
        ensure!(
            check.base_cases_trivial,
            "class {class}: residual at alpha 0 or 1"
        );
        ensure!(!check.terms.is_empty(), "class {class}: no terms");
        for t in &check.terms {
            ensure!(t.integral, "class {class} {}: non-integral", t.commutator);
            ensure!(
                t.degree_bound == t.weight - 1,
                "class {class} {}: bound",
                t.commutator
            );
            ensure!(
                t.coefficients.len() <= t.degree_bound as usize,
                "class {class} {}: degree {} > {}",
                t.commutator,
                t.coefficients.len(),
                t.degree_bound
            );
            ensure!(
                t.weight > 2 && t.contains_every_letter,
                "class {class} {}",
                t.commutator
            );
        }
        ensure!(check.passed(), "class {class}: check failed");
        terms += check.terms.len();
    }
    Ok(format!("{terms} fitted terms"))
}

fn c11_ellis(fleet: &Fleet) -> Outcome {
    for b in fleet.powerful() {
        let levels = b.table.as_ref().unwrap().ellis_commutator_condition();
        ensure!(
            levels.len() == b.invariants.e as usize,
            "{}: levels",
            b.spec.id()
        );
        ensure!(levels.iter().all(|l| l.1), "{}: {levels:?}", b.spec.id());
    }
    Ok(format!("{} powerful groups", fleet.powerful().count()))
}

fn pgw(args: &[&str]) -> Result<Vec<u8>, String> {
    let out = Command::new(env!("CARGO_BIN_EXE_pgw"))
        .args(args)
        .output()
        .map_err(|e| e.to_string())?;
    ensure!(
        out.status.success(),
        "pgw {args:?} exited with {}",
        out.status
    );
    Ok(out.stdout)
}

fn c12_determinism() -> Outcome {
    let args = [
        "analyze",
        "--family",
        "lm_example",
        "--p",
        "3",
        "--l",
        "1",
        "--c",
        "3",
        "--json",
    ];
    let first = pgw(&args)?;
    let second = pgw(&args)?;
    ensure!(!first.is_empty() && first == second, "outputs differ");
    let l2 = pgw(&[
        "analyze",
        "--family",
        "lm_example",
        "--p",
        "3",
        "--l",
        "2",
        "--c",
        "3",
        "--json",
    ])?;
    let v: serde_json::Value = serde_json::from_slice(&l2).map_err(|e| e.to_string())?;
    let checks = v["checks"].as_array().ok_or("no checks")?;
    let find = |name: &str| checks.iter().find(|c| c["name"] == name).cloned();
    let s = find("sandwich").ok_or("no sandwich record")?;
    ensure!(
        s["status"] == "constraint",
        "sandwich status {}",
        s["status"]
    );
    ensure!(s["lhs"] == 18 && s["rhs"] == 1620, "sandwich {s}");
    let cmp = find("order_bound_vs_sandwich").ok_or("no comparison")?;
    ensure!(cmp["lhs"] == 54 && cmp["rhs"] == 1620, "comparison {cmp}");
    ensure!(cmp["note"] == "improves", "note {}", cmp["note"]);
    for key in [
        "schema_version",
        "family",
        "p",
        "c",
        "invariants",
        "multiplier",
        "checks",
    ] {
        ensure!(v.get(key).is_some(), "missing key {key}");
    }
    Ok(format!(
        "{} identical bytes; 18 <= M <= 1620, 54 < 1620",
        first.len()
    ))
}

fn run(n: usize, name: &str, f: impl FnOnce() -> Outcome) -> bool {
    let t = Instant::now();
    let outcome = catch_unwind(AssertUnwindSafe(f)).unwrap_or_else(|e| {
        let msg = e
            .downcast_ref::<String>()
            .cloned()
            .or_else(|| e.downcast_ref::<&str>().map(|s| s.to_string()))
            .unwrap_or_default();
        Err(format!("panicked: {msg}"))
    });
    let ms = t.elapsed().as_millis();
    match &outcome {
        Ok(detail) => println!("criterion {n:>2} PASS  {name} [{detail}] ({ms} ms)"),
        Err(why) => println!("criterion {n:>2} FAIL  {name}: {why} ({ms} ms)"),
    }
    outcome.is_ok()
}

fn main() {
    let mut ok = Vec::new();
    ok.push(run(1, "Witt constants", c1_witt));
    ok.push(run(2, "basic commutator counts", c2_enumeration));

    let t = Instant::now();
    let l2 = build_family(&FamilySpec::LmExample { p: 3, l: 2 });
    let l2_build = t.elapsed();
    drop(l2);
    let fleet = Fleet::build();

    ok.push(run(3, "matrix group fleet", || {
        c3_lm_fleet(&fleet, l2_build)
    }));
    ok.push(run(4, "order 16 group with catalog multiplier", || {
        c4_c5_catalog(FamilySpec::Sd16, 2, 4, 3)
    }));
    ok.push(run(5, "order 27 group with catalog multiplier", || {
        c4_c5_catalog(FamilySpec::Mod27, 3, 3, 2)
    }));
    ok.push(run(6, "abelian multiplier properties", c6_abelian));
    ok.push(run(7, "non-powerful class-two family", c7_pst));
    ok.push(run(8, "powerful structure clauses", || {
        c8_powerful_structure(&fleet)
    }));
    ok.push(run(9, "collection engine", c9_collection));
    ok.push(run(10, "binomial fits of power commutators", c10_struik));
    ok.push(run(11, "commutator condition on powerful groups", || {
        c11_ellis(&fleet)
    }));
    ok.push(run(12, "report determinism and bounds", c12_determinism));

    let passed = ok.iter().filter(|&&b| b).count();
    println!("acceptance: {passed}/{} criteria passed", ok.len());
    if passed != ok.len() {
        std::process::exit(1);
    }
}
