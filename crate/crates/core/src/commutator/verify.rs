use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Zero};
use serde::Serialize;

use super::collect::FreeNilpotentContext;
use super::witt::witt_chi;
use crate::error::{Error, Result};

/// Outcome of checking that `γ_n/γ_{n+i}` is free abelian on the basic
/// commutators of weights `n..n+i`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct BasisCheck {
    pub letters: usize,
    pub n: u32,
    pub i: u32,
    /// Basis positions of weight `n..n+i`.
    pub slots: usize,
    /// `Σ χ_w(d)` over the same weights.
    pub expected_slots: u128,
    /// Rank of the left-normed commutators of each weight, in weight order.
    pub ranks: Vec<(u32, usize)>,
    pub failures: Vec<String>,
}

impl BasisCheck {
    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }
}

/// Works in the free nilpotent group of class `n + i - 1`:
///
/// * the slot count equals the Witt sum;
/// * each basic commutator, evaluated as a group commutator, has a unit
///   exponent vector at its own slot;
/// * products and commutators of elements of `γ_n` stay on slots of weight `>= n`;
/// * left-normed commutators of weight `w` span a lattice of rank `χ_w(d)`.
pub fn verify_free_nilpotent_basis(letters: usize, n: u32, i: u32) -> Result<BasisCheck> {
    if n == 0 || i == 0 {
        return Err(Error::InvalidParameters("need n >= 1 and i >= 1".into()));
    }
    let class = n + i - 1;
    let ctx = FreeNilpotentContext::new(letters, class)?;
    let basis = ctx.basis();
    let mut failures = Vec::new();

    let slots: Vec<usize> = (n..=class).flat_map(|w| basis.weight_range(w)).collect();
    let expected_slots: u128 = (n..=class).map(|w| witt_chi(letters as u64, w)).sum();
    if slots.len() as u128 != expected_slots {
        failures.push(format!("{} slots, expected {expected_slots}", slots.len()));
    }

    for &o in &slots {
        let e = ctx.evaluate_basic(o);
        if e.support() != [o] || !e.exponents()[o].is_one() {
            failures.push(format!(
                "{} does not collect to its own slot",
                basis.format(o)
            ));
        }
    }

    // Closure of γ_n under products, inverses and commutators with letters.
    let gens: Vec<_> = slots.iter().map(|&o| ctx.basis_element(o)).collect();
    let first = basis.weight_range(n).start;
    let in_gamma_n =
        |e: &super::collect::FreeNilpotentElement| e.support().iter().all(|&s| s >= first);
    let mut samples = gens.clone();
    for (a, b) in gens.iter().zip(gens.iter().rev()) {
        let ab = ctx.multiply(a, &ctx.inverse(b));
        samples.push(ctx.multiply(&ab, &ctx.power(a, &BigInt::from(3))));
        for x in 0..letters {
            samples.push(ctx.commutator(&ab, &ctx.generator(x)));
        }
    }
    if let Some(bad) = samples.iter().find(|e| !in_gamma_n(e)) {
        failures.push(format!(
            "element {:?} of gamma_{n} leaves its slots",
            bad.support()
        ));
    }

    let mut ranks = Vec::new();
    for w in n..=class {
        let range = basis.weight_range(w);
        let target = range.len();
        let mut lattice = Echelon::default();
        let mut word = vec![0usize; w as usize];
        'words: loop {
            if lattice.rank() == target {
                break;
            }
            let head = ctx.generator(word[0]);
            let rest: Vec<_> = word[1..].iter().map(|&x| ctx.generator(x)).collect();
            let c = ctx.iterated_commutator(&head, &rest);
            if c.support().iter().any(|&s| s < range.start) {
                failures.push(format!("left-normed commutator {word:?} not in gamma_{w}"));
            }
            lattice.insert(c.exponents()[range.clone()].to_vec());
            // Next word in base `letters`.
            for pos in (0..word.len()).rev() {
                word[pos] += 1;
                if word[pos] < letters {
                    continue 'words;
                }
                word[pos] = 0;
            }
            break;
        }
        let expected = witt_chi(letters as u64, w);
        if lattice.rank() as u128 != expected {
            failures.push(format!(
                "rank of weight-{w} commutators is {}, expected {expected}",
                lattice.rank()
            ));
        }
        ranks.push((w, lattice.rank()));
    }

    Ok(BasisCheck {
        letters,
        n,
        i,
        slots: slots.len(),
        expected_slots,
        ranks,
        failures,
    })
}

/// Fraction-free row echelon form over the integers.
#[derive(Default)]
struct Echelon {
    rows: Vec<(usize, Vec<BigInt>)>,
}

impl Echelon {
    fn rank(&self) -> usize {
        self.rows.len()
    }

    fn insert(&mut self, mut v: Vec<BigInt>) {
        for (pivot, row) in &self.rows {
            if v[*pivot].is_zero() {
                continue;
            }
            let f = v[*pivot].clone();
            let g = row[*pivot].clone();
            for (x, r) in v.iter_mut().zip(row) {
                *x = &*x * &g - r * &f;
            }
            let content = v.iter().fold(BigInt::zero(), |acc, x| acc.gcd(x));
            if !content.is_zero() && !content.is_one() {
                for x in v.iter_mut() {
                    *x /= &content;
                }
            }
        }
        if let Some(p) = v.iter().position(|x| !x.is_zero()) {
            self.rows.push((p, v));
        }
    }
}

/// One residual exponent of the commutator-power expansion, fitted in the
/// binomial basis `C(α, 1), ..., C(α, degree_bound)`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct StruikTerm {
    pub ord: usize,
    pub commutator: String,
    pub weight: u32,
    pub degree_bound: u32,
    /// `a_1, a_2, ...` (trailing zeros trimmed).
    #[serde(serialize_with = "serialize_big_vec")]
    pub coefficients: Vec<BigInt>,
    pub integral: bool,
    pub within_degree_bound: bool,
    pub contains_every_letter: bool,
}

impl StruikTerm {
    pub fn passed(&self) -> bool {
        self.integral && self.within_degree_bound && self.contains_every_letter
    }
}

fn serialize_big_vec<S: serde::Serializer>(
    v: &[BigInt],
    s: S,
) -> std::result::Result<S::Ok, S::Error> {
    use serde::ser::SerializeSeq;
    let mut seq = s.serialize_seq(Some(v.len()))?;
    for x in v {
        seq.serialize_element(&x.to_string())?;
    }
    seq.end()
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct StruikCheck {
    pub letters: usize,
    pub class: u32,
    pub r: u32,
    pub alphas: Vec<i64>,
    pub terms: Vec<StruikTerm>,
    /// Whether the residual vanishes at `α = 0` and `α = 1` when sampled.
    pub base_cases_trivial: bool,
}

impl StruikCheck {
    pub fn passed(&self) -> bool {
        self.base_cases_trivial && self.terms.iter().all(StruikTerm::passed)
    }
}

/// Checks, with `b_j = x_j`, that
/// `([b_1, ..., b_r]^α)^{-1} [b_1^α, b_2, ..., b_r]` has normal-form exponents
/// that are integer combinations of `C(α, 1..w)` with `w = weight - (r - 1)`,
/// supported on commutators of weight `> r` involving every `b_j`.
pub fn verify_struik_instance(
    letters: usize,
    class: u32,
    r: u32,
    alphas: &[i64],
) -> Result<StruikCheck> {
    if r == 0 || r >= class || r as usize > letters {
        return Err(Error::InvalidParameters(format!(
            "need 1 <= r < class and r <= letters, got r = {r}"
        )));
    }
    let mut distinct = alphas.to_vec();
    distinct.sort_unstable();
    distinct.dedup();
    if distinct.len() < class as usize {
        return Err(Error::InsufficientSamples {
            needed: class as usize,
            got: distinct.len(),
        });
    }
    let ctx = FreeNilpotentContext::new(letters, class)?;
    let basis = ctx.basis();
    let gens: Vec<_> = (0..r as usize).map(|j| ctx.generator(j)).collect();
    let plain = ctx.iterated_commutator(&gens[0], &gens[1..]);

    let residuals: Vec<Vec<BigInt>> = distinct
        .iter()
        .map(|&a| {
            let alpha = BigInt::from(a);
            let powered = ctx.iterated_commutator(&ctx.power(&gens[0], &alpha), &gens[1..]);
            let res = ctx.multiply(&ctx.inverse(&ctx.power(&plain, &alpha)), &powered);
            res.exponents().to_vec()
        })
        .collect();

    let base_cases_trivial = distinct
        .iter()
        .zip(&residuals)
        .filter(|(&a, _)| a == 0 || a == 1)
        .all(|(_, res)| res.iter().all(Zero::is_zero));

    let mut terms = Vec::new();
    for ord in 0..basis.len() {
        let values: Vec<BigInt> = residuals.iter().map(|res| res[ord].clone()).collect();
        if values.iter().all(Zero::is_zero) {
            continue;
        }
        let weight = basis.get(ord).weight;
        let degree_bound = (weight + 1).saturating_sub(r);
        let coeffs = binomial_fit(&distinct, &values);
        let integral = coeffs.iter().all(|c| c.is_integer());
        let within = weight > r
            && coeffs[0].is_zero()
            && coeffs
                .iter()
                .enumerate()
                .all(|(j, c)| j <= degree_bound as usize || c.is_zero());
        let content = basis.letter_content(ord);
        let contains_every_letter = content[..r as usize].iter().all(|&x| x > 0);
        let mut coefficients: Vec<BigInt> = coeffs[1..].iter().map(|c| c.to_integer()).collect();
        while coefficients.last().is_some_and(Zero::is_zero) {
            coefficients.pop();
        }
        terms.push(StruikTerm {
            ord,
            commutator: basis.format(ord),
            weight,
            degree_bound,
            coefficients,
            integral,
            within_degree_bound: within,
            contains_every_letter,
        });
    }
    Ok(StruikCheck {
        letters,
        class,
        r,
        alphas: distinct,
        terms,
        base_cases_trivial,
    })
}

fn binomial(n: i64, k: usize) -> BigRational {
    let mut acc = BigRational::one();
    for j in 0..k {
        acc = acc * BigRational::from_integer(BigInt::from(n - j as i64))
            / BigRational::from_integer(BigInt::from(j as i64 + 1));
    }
    acc
}

/// Exact solution `a_0..a_{m-1}` of `Σ_j a_j C(α_s, j) = v_s` for `m` distinct samples.
fn binomial_fit(alphas: &[i64], values: &[BigInt]) -> Vec<BigRational> {
    let m = alphas.len();
    let mut rows: Vec<Vec<BigRational>> = alphas
        .iter()
        .zip(values)
        .map(|(&a, v)| {
            let mut row: Vec<BigRational> = (0..m).map(|j| binomial(a, j)).collect();
            row.push(BigRational::from_integer(v.clone()));
            row
        })
        .collect();
    for col in 0..m {
        let sel = (col..m)
            .find(|&i| !rows[i][col].is_zero())
            .expect("binomial matrix on distinct samples is invertible");
        rows.swap(col, sel);
        let piv = rows[col][col].clone();
        for x in rows[col].iter_mut() {
            *x = &*x / &piv;
        }
        for i in 0..m {
            if i != col && !rows[i][col].is_zero() {
                let f = rows[i][col].clone();
                let pivot_row = rows[col].clone();
                for (x, p) in rows[i].iter_mut().zip(&pivot_row) {
                    *x = &*x - &f * p;
                }
            }
        }
    }
    rows.into_iter().map(|row| row[m].clone()).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn basis_checks() {
        let r = verify_free_nilpotent_basis(2, 2, 1).unwrap();
        assert!(r.passed(), "{r:?}");
        assert_eq!(r.slots, 1);
        let r = verify_free_nilpotent_basis(3, 4, 1).unwrap();
        assert!(r.passed(), "{r:?}");
        assert_eq!(r.slots, 18);
        assert_eq!(r.ranks, vec![(4, 18)]);
        let r = verify_free_nilpotent_basis(1, 3, 1).unwrap();
        assert!(r.passed());
        assert_eq!(r.slots, 0);
        let r = verify_free_nilpotent_basis(2, 2, 3).unwrap();
        assert!(r.passed(), "{r:?}");
        assert_eq!(r.slots, 1 + 2 + 3);
    }

    #[test]
    fn ranks_for_small_parameters() {
        for d in 1..=3 {
            for n in 1..=4 {
                let r = verify_free_nilpotent_basis(d, n, 1).unwrap();
                assert!(r.passed(), "{r:?}");
                assert_eq!(r.ranks[0].1 as u128, witt_chi(d as u64, n));
            }
        }
    }

    #[test]
    fn binomial_fit_recovers_known_coefficients() {
        // f(α) = 2 C(α,1) - 3 C(α,2) + C(α,3).
        let alphas: Vec<i64> = (-2..4).collect();
        let values: Vec<BigInt> = alphas
            .iter()
            .map(|&a| {
                let v = BigRational::from_integer(BigInt::from(2)) * binomial(a, 1)
                    - BigRational::from_integer(BigInt::from(3)) * binomial(a, 2)
                    + binomial(a, 3);
                v.to_integer()
            })
            .collect();
        let c = binomial_fit(&alphas, &values);
        let ints: Vec<BigInt> = c.iter().map(|x| x.to_integer()).collect();
        assert_eq!(ints, [0, 2, -3, 1, 0, 0].map(BigInt::from));
    }

    #[test]
    fn struik_class_three_and_four() {
        for class in [3, 4] {
            let r = verify_struik_instance(2, class, 2, &(0..=6).collect::<Vec<_>>()).unwrap();
            assert!(r.passed(), "{r:?}");
            assert!(!r.terms.is_empty());
            for t in &r.terms {
                assert!(t.weight > 2);
                assert!(t.coefficients.len() <= t.degree_bound as usize);
            }
        }
    }

    #[test]
    fn struik_weight_three_term_has_degree_two() {
        // In class 3 the residual of [x1^α, x2] lies on [[x2,x1],x1] with exponent -C(α,2).
        let r = verify_struik_instance(2, 3, 2, &[0, 1, 2, 3, 4, 5]).unwrap();
        let t = r
            .terms
            .iter()
            .find(|t| t.commutator == "[[x_2,x_1],x_1]")
            .unwrap();
        assert_eq!(t.degree_bound, 2);
        assert_eq!(t.coefficients.len(), 2);
        assert!(r.terms.iter().all(|t| t.commutator != "[[x_2,x_1],x_2]"));
    }

    #[test]
    fn struik_errors() {
        assert_eq!(
            verify_struik_instance(2, 3, 2, &[0, 1, 1]),
            Err(Error::InsufficientSamples { needed: 3, got: 2 })
        );
        assert!(verify_struik_instance(2, 2, 2, &[0, 1, 2]).is_err());
        assert!(verify_struik_instance(2, 4, 3, &[0, 1, 2, 3]).is_err());
    }

    #[test]
    fn struik_three_letters() {
        let r = verify_struik_instance(3, 4, 3, &[-2, -1, 0, 1, 2, 3]).unwrap();
        assert!(r.passed(), "{r:?}");
        assert!(r.base_cases_trivial);
    }
}
