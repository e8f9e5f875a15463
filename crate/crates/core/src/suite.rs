//! Property suites over the built-in fleet. Each assertion is recorded, never
//! short-circuited, so a report lists every failure at once.

use std::sync::OnceLock;

use num_bigint::BigInt;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::bounds::CheckStatus;
use crate::commutator::naive::{all_words, naive_normal_form};
use crate::commutator::{
    enumerate_basic_commutators, verify_free_nilpotent_basis, verify_struik_instance, witt,
    FreeNilpotentContext,
};
use crate::error::{Error, Result};
use crate::family::{build_family, BuiltFamily, FamilySpec};
use crate::multiplier::{AbelianPGroup, Catalog};
use crate::report::{analyze_built, Assertion, ReportDocument, SuiteResult};

pub const SUITE_NAMES: [&str; 5] = ["theorem23", "collection", "struik", "bounds", "all"];

const SEED: u64 = 0x5eed_2013;

/// Specs of the enumerated fleet, in report order.
pub fn fleet_specs() -> Vec<FamilySpec> {
    vec![
        FamilySpec::Abelian {
            p: 2,
            alphas: vec![2, 2],
        },
        FamilySpec::Abelian {
            p: 3,
            alphas: vec![2, 1],
        },
        FamilySpec::Abelian {
            p: 5,
            alphas: vec![1, 1, 1],
        },
        FamilySpec::LmExample { p: 3, l: 1 },
        FamilySpec::LmExample { p: 3, l: 2 },
        FamilySpec::LmExample { p: 5, l: 1 },
        FamilySpec::Sd16,
        FamilySpec::Mod27,
        FamilySpec::Dihedral8,
    ]
}

fn fleet() -> Result<&'static [BuiltFamily]> {
    static FLEET: OnceLock<std::result::Result<Vec<BuiltFamily>, Error>> = OnceLock::new();
    FLEET
        .get_or_init(|| fleet_specs().iter().map(build_family).collect())
        .as_deref()
        .map_err(Clone::clone)
}

pub fn run_suite(name: &str) -> Result<ReportDocument> {
    let results = match name {
        "theorem23" => vec![powerful_structure()?],
        "collection" => vec![collection()?],
        "struik" => vec![struik()?],
        "bounds" => vec![bounds()?],
        "all" => vec![powerful_structure()?, collection()?, struik()?, bounds()?],
        other => {
            return Err(Error::InvalidParameters(format!(
                "unknown suite {other:?}; expected one of {}",
                SUITE_NAMES.join(", ")
            )))
        }
    };
    Ok(ReportDocument::for_suites(results))
}

/// Realization checks, powerful structure clauses and the commutator
/// condition on every powerful fleet member; dihedral 8 must not be powerful.
pub fn powerful_structure() -> Result<SuiteResult> {
    let mut out = Vec::new();
    for b in fleet()? {
        let id = b.spec.id();
        for a in &b.assertions {
            out.push(Assertion::new(
                format!("{id}: {}", a.name),
                a.passed,
                a.detail.clone(),
            ));
        }
        let table = b.table.as_ref().expect("fleet members are enumerated");
        if b.spec == FamilySpec::Dihedral8 {
            out.push(Assertion::new(
                format!("{id}: not powerful"),
                !table.is_powerful()?,
                "",
            ));
            continue;
        }
        out.push(Assertion::new(
            format!("{id}: powerful"),
            table.is_powerful()?,
            "",
        ));
        let report = table.verify_powerful_structure()?;
        for clause in ["i", "ii", "iii", "iv", "v"] {
            let failed: Vec<&str> = report
                .results
                .iter()
                .filter(|r| r.clause == clause && !r.passed)
                .map(|r| r.label.as_str())
                .collect();
            out.push(Assertion::new(
                format!("{id}: clause ({clause})"),
                failed.is_empty(),
                failed.join("; "),
            ));
        }
        let levels = b.ellis_levels.as_deref().unwrap_or_default();
        out.push(Assertion::new(
            format!("{id}: [[O_(i-1),G],G] in O_i for 1 <= i <= e"),
            levels.len() == b.invariants.e as usize && levels.iter().all(|l| l.1),
            format!("{levels:?}"),
        ));
    }
    Ok(SuiteResult::new("theorem23", out))
}

fn random_word(rng: &mut ChaCha8Rng, d: i64, max_len: usize) -> Vec<i64> {
    let len = rng.gen_range(0..=max_len);
    (0..len)
        .map(|_| rng.gen_range(1..=d) * if rng.gen_bool(0.5) { 1 } else { -1 })
        .collect()
}

/// Witt constants, enumeration counts, group laws, the rewriting oracle and
/// lower central ranks of free nilpotent groups.
pub fn collection() -> Result<SuiteResult> {
    let mut out = Vec::new();
    out.push(Assertion::new(
        "chi_4(3) = 18",
        witt(3, 4) == 18,
        witt(3, 4).to_string(),
    ));
    out.push(Assertion::new(
        "chi_4(9) = 1620",
        witt(9, 4) == 1620,
        witt(9, 4).to_string(),
    ));
    let pairs_ok = (1..=10u64).all(|d| witt(d, 2) == d * (d - 1) / 2);
    out.push(Assertion::new(
        "chi_2(d) = d(d-1)/2 for d <= 10",
        pairs_ok,
        "",
    ));

    for d in 1..=4usize {
        let basis = enumerate_basic_commutators(d, 6)?;
        let bad: Vec<String> = (1..=6u32)
            .filter(|&n| basis.count_of_weight(n) as u64 != witt(d as u64, n))
            .map(|n| {
                format!(
                    "n={n}: {} vs {}",
                    basis.count_of_weight(n),
                    witt(d as u64, n)
                )
            })
            .collect();
        out.push(Assertion::new(
            format!("basic commutator counts on {d} letters, weights 1..6"),
            bad.is_empty(),
            bad.join("; "),
        ));
    }

    for class in [2, 3] {
        let ctx = FreeNilpotentContext::new(2, class)?;
        let mut mismatches = 0usize;
        let words = all_words(2, 4);
        for w in &words {
            let want: Vec<BigInt> = naive_normal_form(w, class)
                .into_iter()
                .map(BigInt::from)
                .collect();
            if ctx.from_word(w)?.exponents() != want.as_slice() {
                mismatches += 1;
            }
        }
        out.push(Assertion::new(
            format!(
                "collection equals rewriting, d=2, class {class}, {} words",
                words.len()
            ),
            mismatches == 0,
            format!("{mismatches} mismatches"),
        ));
    }

    let mut rng = ChaCha8Rng::seed_from_u64(SEED);
    let mut ctxs = Vec::new();
    for d in 1..=3 {
        for c in 1..=4 {
            ctxs.push(FreeNilpotentContext::new(d, c)?);
        }
    }
    let (mut assoc, mut ident, mut inv, mut hom) = (0, 0, 0, 0);
    for case in 0..1000 {
        let ctx = &ctxs[case % ctxs.len()];
        let d = ctx.letters() as i64;
        let (wa, wb, wc) = (
            random_word(&mut rng, d, 8),
            random_word(&mut rng, d, 8),
            random_word(&mut rng, d, 8),
        );
        let (a, b, c) = (
            ctx.from_word(&wa)?,
            ctx.from_word(&wb)?,
            ctx.from_word(&wc)?,
        );
        if ctx.multiply(&ctx.multiply(&a, &b), &c) != ctx.multiply(&a, &ctx.multiply(&b, &c)) {
            assoc += 1;
        }
        let e = ctx.identity();
        if ctx.multiply(&a, &e) != a || ctx.multiply(&e, &a) != a {
            ident += 1;
        }
        let ai = ctx.inverse(&a);
        if !ctx.multiply(&a, &ai).is_identity() || !ctx.multiply(&ai, &a).is_identity() {
            inv += 1;
        }
        let joined: Vec<i64> = wa.iter().chain(&wb).copied().collect();
        if ctx.from_word(&joined)? != ctx.multiply(&a, &b) {
            hom += 1;
        }
    }
    for (law, bad) in [
        ("associativity", assoc),
        ("identity", ident),
        ("inverses", inv),
        ("word concatenation is multiplication", hom),
    ] {
        out.push(Assertion::new(
            format!("{law} on 1000 random triples, d <= 3, class <= 4"),
            bad == 0,
            format!("{bad} failures"),
        ));
    }

    for d in 1..=3 {
        let check = verify_free_nilpotent_basis(d, 1, 4)?;
        let ranks: Vec<String> = check
            .ranks
            .iter()
            .map(|(w, r)| format!("{w}:{r}"))
            .collect();
        let witt_ok = check
            .ranks
            .iter()
            .all(|&(w, r)| r as u64 == witt(d as u64, w));
        out.push(Assertion::new(
            format!("rank of gamma_n/gamma_(n+1) equals chi_n({d}) for n <= 4"),
            check.passed() && witt_ok && check.ranks.len() == 4,
            format!("{} {}", ranks.join(","), check.failures.join("; ")),
        ));
    }
    Ok(SuiteResult::new("collection", out))
}

/// Binomial fits for `[b_1^α, b_2]` against `[b_1, b_2]^α`.
pub fn struik() -> Result<SuiteResult> {
    let alphas: Vec<i64> = (0..=6).collect();
    let mut out = Vec::new();
    for class in [3, 4] {
        let check = verify_struik_instance(2, class, 2, &alphas)?;
        let bad: Vec<&str> = check
            .terms
            .iter()
            .filter(|t| !t.passed())
            .map(|t| t.commutator.as_str())
            .collect();
        out.push(Assertion::new(
            format!("d=2, class {class}, r=2, alpha in 0..6: integral fits"),
            check.terms.iter().all(|t| t.integral),
            bad.join(", "),
        ));
        out.push(Assertion::new(
            format!("d=2, class {class}, r=2: degree bound weight-(r-1)"),
            check.terms.iter().all(|t| t.within_degree_bound),
            bad.join(", "),
        ));
        out.push(Assertion::new(
            format!("d=2, class {class}, r=2: full check"),
            check.passed(),
            format!("{} terms", check.terms.len()),
        ));
    }
    Ok(SuiteResult::new("struik", out))
}

fn abelian_cases(rng: &mut ChaCha8Rng, n: usize) -> Vec<(u64, Vec<u32>, u32)> {
    (0..n)
        .map(|_| {
            let p = [2, 3, 5][rng.gen_range(0..3)];
            let d = rng.gen_range(1..=4);
            let alphas = (0..d).map(|_| rng.gen_range(1..=4)).collect();
            (p, alphas, rng.gen_range(1..=3))
        })
        .collect()
}

/// Multiplier formulas and every bound on the fleet, random abelian groups
/// and the non-powerful `P_{s,t}` family.
pub fn bounds() -> Result<SuiteResult> {
    let catalog = Catalog::builtin();
    let mut out = Vec::new();
    let mut rng = ChaCha8Rng::seed_from_u64(SEED ^ 1);

    for (p, alphas, c) in abelian_cases(&mut rng, 50) {
        let g = AbelianPGroup::new(p, alphas.clone())?;
        let spec = FamilySpec::Abelian { p, alphas };
        let doc = analyze_built(&build_family(&spec)?, c, &catalog)?;
        let a = g.alphas();
        let d = a.len() as u64;
        let m = doc
            .multiplier
            .as_ref()
            .expect("formula")
            .structure_invariants();
        let b = |i: u64| witt(i, c + 1);
        let order: u64 = (2..=d)
            .map(|i| u64::from(a[i as usize - 1]) * (b(i) - b(i - 1)))
            .sum();
        let all_equal = a.windows(2).all(|w| w[0] == w[1]);
        let gen = doc.check("generator_bound").expect("present");
        let ord = doc.check("order_bound").expect("present");
        let e2 = if d >= 2 { a[1] } else { 0 };
        let ok = m.d == b(d)
            && m.e == e2
            && m.order_exp == order
            && gen.attained
            && ord.attained == all_equal
            && doc.passed();
        out.push(Assertion::new(
            format!("{}, c={c}: multiplier formula and attainment", spec.id()),
            ok,
            format!("M = {}", doc.multiplier.as_ref().unwrap()),
        ));
    }

    for _ in 0..20 {
        let p = [3, 5, 7][rng.gen_range(0..3)];
        let d = rng.gen_range(2..=4);
        let t = rng.gen_range(1..=3);
        let s = rng.gen_range(t..=t + 2);
        let c = rng.gen_range(1..=3);
        let spec = FamilySpec::Pst { p, d, s, t };
        let doc = analyze_built(&build_family(&spec)?, c, &catalog)?;
        let m = doc
            .multiplier
            .as_ref()
            .expect("formula")
            .structure_invariants();
        let (lo, hi) = (witt(d.into(), c + 1), witt(d.into(), c + 2));
        let gen = doc.check("generator_bound").expect("present");
        let ok = m.d == lo + hi
            && m.d > lo
            && !gen.holds
            && gen.status == CheckStatus::ReportOnly
            && gen.note.contains("non-powerful");
        out.push(Assertion::new(
            format!(
                "{}, c={c}: generator bound fails without powerfulness",
                spec.id()
            ),
            ok,
            format!("d(M) = {} > chi = {lo}", m.d),
        ));
    }

    for b in fleet()? {
        let id = b.spec.id();
        if let FamilySpec::LmExample { p: _, l } = b.spec {
            let inv = &b.invariants;
            out.push(Assertion::new(
                format!("{id}: order p^(3(l+1)), exponent p^(l+1), class l+1, powerful"),
                inv.order_exp == 3 * (l + 1) && inv.e == l + 1 && inv.cl == l + 1 && inv.powerful,
                format!("{inv:?}"),
            ));
        }
        if b.spec == FamilySpec::Dihedral8 {
            continue;
        }
        for c in 1..=3 {
            let doc = analyze_built(b, c, &catalog)?;
            let bad: Vec<&str> = doc
                .checks
                .iter()
                .filter(|ch| ch.is_violation())
                .map(|ch| ch.name.as_str())
                .collect();
            out.push(Assertion::new(
                format!("{id}, c={c}: every applicable bound holds"),
                bad.is_empty(),
                bad.join(", "),
            ));
        }
    }

    for (spec, p, order_exp, e) in [(FamilySpec::Sd16, 2, 4, 3), (FamilySpec::Mod27, 3, 3, 2)] {
        let b = fleet()?.iter().find(|b| b.spec == spec).expect("in fleet");
        let doc = analyze_built(b, 2, &catalog)?;
        let inv = doc.invariants.as_ref().expect("present");
        let m = doc
            .multiplier
            .as_ref()
            .map(AbelianPGroup::structure_invariants);
        let gen = doc.check("generator_bound").expect("present");
        let exp = doc.check("exponent_bound").expect("present");
        let ord = doc.check("order_bound").expect("present");
        let ok = inv.order_exp == order_exp
            && inv.d == 2
            && inv.e == e
            && inv.powerful
            && m.is_some_and(|m| (m.order_exp, m.d, m.e) == (2, 2, 1))
            && doc.multiplier.as_ref().is_some_and(|m| m.p() == p)
            && gen.attained
            && gen.rhs == Some(2)
            && exp.holds
            && ord.holds
            && ord.rhs == Some(2 * i64::from(e));
        out.push(Assertion::new(
            format!("{}, c=2: catalog multiplier and bounds", spec.id()),
            ok,
            String::new(),
        ));
    }

    let l2 = fleet()?
        .iter()
        .find(|b| b.spec == FamilySpec::LmExample { p: 3, l: 2 })
        .expect("in fleet");
    let doc = analyze_built(l2, 3, &catalog)?;
    let sandwich = doc.check("sandwich").expect("constraint present");
    let improve = doc.check("order_bound_vs_sandwich").expect("present");
    out.push(Assertion::new(
        "lm_example(p=3, l=2), c=3: 18 <= order_exp(M) <= 1620 and 54 improves on 1620",
        sandwich.status == CheckStatus::Constraint
            && (sandwich.lhs, sandwich.rhs) == (Some(18), Some(1620))
            && (improve.lhs, improve.rhs) == (Some(54), Some(1620))
            && improve.note == "improves",
        sandwich.note.clone(),
    ));

    let d8 = fleet()?
        .iter()
        .find(|b| b.spec == FamilySpec::Dihedral8)
        .expect("in fleet");
    out.push(Assertion::new(
        "dihedral8: not powerful",
        !d8.invariants.powerful,
        "",
    ));
    Ok(SuiteResult::new("bounds", out))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn struik_suite_passes() {
        let s = struik().unwrap();
        assert!(s.passed, "{:?}", s.failures().collect::<Vec<_>>());
    }

    #[test]
    fn unknown_suite() {
        assert!(run_suite("nope").is_err());
    }

    #[test]
    fn abelian_cases_are_reproducible() {
        let a = abelian_cases(&mut ChaCha8Rng::seed_from_u64(1), 5);
        let b = abelian_cases(&mut ChaCha8Rng::seed_from_u64(1), 5);
        assert_eq!(a, b);
        assert!(a
            .iter()
            .all(|(p, al, c)| [2, 3, 5].contains(p) && al.len() <= 4 && *c <= 3));
    }
}
