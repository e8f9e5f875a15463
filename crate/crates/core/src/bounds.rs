//! Evaluation of the multiplier and structure bounds on concrete invariants.
//!
//! Every order is handled as an exponent of `p`, and every decision is an
//! exact integer comparison.

use std::collections::BTreeMap;

use serde::Serialize;

use crate::commutator::witt;
use crate::group::GroupInvariants;
use crate::multiplier::AbelianPGroup;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum CheckStatus {
    /// Evaluated and expected to hold.
    Checked,
    /// An input is missing or a precondition fails.
    Skipped,
    /// Only a range for an unknown quantity is available.
    Constraint,
    /// Evaluated although its hypothesis fails; recorded, never asserted.
    ReportOnly,
    /// Comparison of two right-hand sides.
    Comparison,
    /// Known result that needs inputs this library cannot compute.
    Context,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct BoundCheck {
    pub name: String,
    pub lhs: Option<i64>,
    pub rhs: Option<i64>,
    pub holds: bool,
    pub attained: bool,
    pub status: CheckStatus,
    pub note: String,
    pub inputs: BTreeMap<String, i64>,
}

impl BoundCheck {
    fn compare(name: &str, lhs: i64, rhs: i64, status: CheckStatus) -> Self {
        Self {
            name: name.into(),
            lhs: Some(lhs),
            rhs: Some(rhs),
            holds: lhs <= rhs,
            attained: lhs == rhs,
            status,
            note: String::new(),
            inputs: BTreeMap::new(),
        }
    }

    fn skipped(name: &str, note: &str) -> Self {
        Self {
            name: name.into(),
            lhs: None,
            rhs: None,
            holds: false,
            attained: false,
            status: CheckStatus::Skipped,
            note: note.into(),
            inputs: BTreeMap::new(),
        }
    }

    fn context(name: &str, note: &str) -> Self {
        Self {
            status: CheckStatus::Context,
            ..Self::skipped(name, note)
        }
    }

    fn input(mut self, key: &str, value: impl Into<i64>) -> Self {
        self.inputs.insert(key.into(), value.into());
        self
    }

    fn note(mut self, note: impl Into<String>) -> Self {
        self.note = note.into();
        self
    }

    /// A failed check that was expected to hold.
    pub fn is_violation(&self) -> bool {
        self.status == CheckStatus::Checked && !self.holds
    }
}

fn chi(d: u32, n: u32) -> i64 {
    i64::try_from(witt(d.into(), n)).expect("Witt number fits in i64")
}

fn gate(powerful: bool) -> CheckStatus {
    if powerful {
        CheckStatus::Checked
    } else {
        CheckStatus::ReportOnly
    }
}

fn gated(check: BoundCheck, powerful: bool) -> BoundCheck {
    if powerful {
        check
    } else {
        let note = if check.note.is_empty() {
            "non-powerful".to_string()
        } else {
            format!("non-powerful; {}", check.note)
        };
        BoundCheck { note, ..check }
    }
}

/// `d(M^(c)(G)) <= χ_{c+1}(d(G))` for powerful `G`.
pub fn check_generator_bound(d_m: u64, d_g: u32, c: u32, powerful: bool) -> BoundCheck {
    let check = BoundCheck::compare(
        "generator_bound",
        d_m as i64,
        chi(d_g, c + 1),
        gate(powerful),
    )
    .input("d_M", d_m as i64)
    .input("d", d_g)
    .input("c", c);
    gated(check, powerful)
}

/// `e(M^(c)(G)) <= e(G)` for powerful `G`.
pub fn check_exponent_bound(e_m: u32, e_g: u32, powerful: bool) -> BoundCheck {
    let check = BoundCheck::compare("exponent_bound", e_m.into(), e_g.into(), gate(powerful))
        .input("e_M", e_m)
        .input("e", e_g);
    gated(check, powerful)
}

/// `|M^(c)(G)| <= p^{χ_{c+1}(d) e}` for powerful `G`.
pub fn check_order_bound(order_exp_m: u64, d: u32, e: u32, c: u32, powerful: bool) -> BoundCheck {
    let check = BoundCheck::compare(
        "order_bound",
        order_exp_m as i64,
        chi(d, c + 1) * i64::from(e),
        gate(powerful),
    )
    .input("order_exp_M", order_exp_m as i64)
    .input("d", d)
    .input("e", e)
    .input("c", c);
    gated(check, powerful)
}

/// Class, derived length, order and (when known) Schur multiplier bounds
/// for powerful groups of exponent `p^e`.
pub fn check_lubotzky_mann_basics(
    inv: &GroupInvariants,
    schur_order_exp: Option<u64>,
) -> Vec<BoundCheck> {
    let st = gate(inv.powerful);
    let mut out = vec![
        BoundCheck::compare("lm_class", inv.cl.into(), inv.e.into(), st)
            .input("cl", inv.cl)
            .input("e", inv.e),
    ];
    // l <= log2(e) + 1  <=>  2^(l-1) <= e, decided exactly.
    let lhs = if inv.dl == 0 { 0 } else { 1i64 << (inv.dl - 1) };
    out.push(
        BoundCheck::compare("lm_derived_length", lhs, inv.e.into(), st)
            .input("dl", inv.dl)
            .input("e", inv.e)
            .note("compares 2^(dl-1) with e"),
    );
    out.push(
        BoundCheck::compare(
            "lm_order",
            inv.order_exp.into(),
            i64::from(inv.d) * i64::from(inv.e),
            st,
        )
        .input("order_exp", inv.order_exp)
        .input("d", inv.d)
        .input("e", inv.e),
    );
    let d = i64::from(inv.d);
    out.push(match schur_order_exp {
        Some(m) => BoundCheck::compare(
            "lm_schur_order",
            m as i64,
            d * (d - 1) / 2 * i64::from(inv.e),
            st,
        )
        .input("order_exp_M1", m as i64)
        .input("d", inv.d)
        .input("e", inv.e),
        None => BoundCheck::skipped("lm_schur_order", "Schur multiplier unknown"),
    });
    out.into_iter().map(|c| gated(c, inv.powerful)).collect()
}

/// `p^{χ_{c+1}(d)} <= |M^(c)(G)| |γ_{c+1}(G)| <= p^{χ_{c+1}(n)}`. With the
/// multiplier unknown this becomes one constraint record on its order exponent.
pub fn check_sandwich_bound(
    order_exp_m: Option<u64>,
    order_exp_gamma: u32,
    d: u32,
    n: u32,
    c: u32,
) -> Vec<BoundCheck> {
    let lower = chi(d, c + 1);
    let upper = chi(n, c + 1);
    let g = i64::from(order_exp_gamma);
    match order_exp_m {
        Some(m) => {
            let mid = m as i64 + g;
            vec![
                BoundCheck::compare("sandwich_lower", lower, mid, CheckStatus::Checked)
                    .input("d", d)
                    .input("c", c)
                    .input("order_exp_gamma", order_exp_gamma),
                BoundCheck::compare("sandwich_upper", mid, upper, CheckStatus::Checked)
                    .input("n", n)
                    .input("c", c)
                    .input("order_exp_gamma", order_exp_gamma),
            ]
        }
        None => {
            let mut ch =
                BoundCheck::compare("sandwich", lower - g, upper - g, CheckStatus::Constraint)
                    .input("d", d)
                    .input("n", n)
                    .input("c", c)
                    .input("order_exp_gamma", order_exp_gamma)
                    .note(format!(
                        "{} <= order_exp(M^(c)) <= {}",
                        (lower - g).max(0),
                        upper - g
                    ));
            ch.attained = false;
            vec![ch]
        }
    }
}

/// Compares the powerful order bound `χ_{c+1}(d) e` with the sandwich upper
/// bound on `order_exp(M^(c))`.
pub fn check_order_bound_improvement(
    d: u32,
    e: u32,
    n: u32,
    c: u32,
    order_exp_gamma: u32,
) -> BoundCheck {
    let lhs = chi(d, c + 1) * i64::from(e);
    let rhs = chi(n, c + 1) - i64::from(order_exp_gamma);
    let verdict = if lhs < rhs {
        "improves"
    } else {
        "does not improve"
    };
    BoundCheck::compare("order_bound_vs_sandwich", lhs, rhs, CheckStatus::Comparison)
        .input("d", d)
        .input("e", e)
        .input("n", n)
        .input("c", c)
        .note(verdict)
}

/// `d(M^(c)(G)) <= χ_{c+1}(d) + r^{c+1} (t - 1)` with `r` the special rank
/// and `t` the class.
pub fn check_rank_class_bound(
    d_m: u64,
    d: u32,
    r: u32,
    t: u32,
    c: u32,
    powerful: bool,
) -> BoundCheck {
    let extra = i64::from(r).pow(c + 1) * (i64::from(t) - 1).max(0);
    let base = chi(d, c + 1);
    let note = if extra > 0 {
        if powerful {
            format!("generator bound is sharper by {extra}")
        } else {
            format!("exceeds chi_(c+1)(d) by {extra}")
        }
    } else {
        "coincides with the generator bound".to_string()
    };
    BoundCheck::compare(
        "rank_class_bound",
        d_m as i64,
        base + extra,
        CheckStatus::Checked,
    )
    .input("d_M", d_m as i64)
    .input("d", d)
    .input("r", r)
    .input("t", t)
    .input("c", c)
    .note(note)
}

/// `|M(G)| <= p^{(n-k)(n+k-1)/2}` and `|G'| |M(G)| <= p^{n(n-1)/2}`.
pub fn check_jones_bounds(
    order_exp_m1: u64,
    order_exp_derived: u32,
    n: u32,
    k: u32,
) -> Vec<BoundCheck> {
    let (n, k) = (i64::from(n), i64::from(k));
    let m = order_exp_m1 as i64;
    vec![
        BoundCheck::compare(
            "jones_center",
            m,
            (n - k) * (n + k - 1) / 2,
            CheckStatus::Checked,
        )
        .input("order_exp_M1", m)
        .input("n", n)
        .input("center_exp", k),
        BoundCheck::compare(
            "jones_derived",
            m + i64::from(order_exp_derived),
            n * (n - 1) / 2,
            CheckStatus::Checked,
        )
        .input("order_exp_M1", m)
        .input("order_exp_derived", order_exp_derived)
        .input("n", n),
    ]
}

/// `exp(M^(c)(G)) <= p^{e ⌈k/2⌉}` for class `k >= 2`.
pub fn check_ellis_exponent(e_mc: u32, e: u32, k: u32, c: u32) -> BoundCheck {
    if k < 2 {
        return BoundCheck::skipped("ellis_exponent", "requires class at least 2")
            .input("k", k)
            .input("c", c);
    }
    let rhs = i64::from(e) * i64::from(k.div_ceil(2));
    let cmp = match rhs.cmp(&i64::from(e)) {
        std::cmp::Ordering::Equal => "same rhs as the powerful exponent bound",
        _ => "weaker than the powerful exponent bound",
    };
    BoundCheck::compare("ellis_exponent", e_mc.into(), rhs, CheckStatus::Checked)
        .input("e_M", e_mc)
        .input("e", e)
        .input("k", k)
        .input("c", c)
        .note(cmp)
}

/// `[[℧_{i-1}(G), G], G] ⊆ ℧_i(G)` for `1 <= i <= e`, given per-level results.
/// `lhs` counts satisfied levels, `rhs` is `e`.
pub fn check_ellis_commutator_condition(levels: &[(u32, bool)], powerful: bool) -> BoundCheck {
    let ok = levels.iter().filter(|(_, b)| *b).count() as i64;
    let failed: Vec<String> = levels
        .iter()
        .filter(|(_, b)| !*b)
        .map(|(i, _)| i.to_string())
        .collect();
    let mut check = BoundCheck::compare(
        "ellis_commutator_condition",
        ok,
        levels.len() as i64,
        gate(powerful),
    );
    check.holds = failed.is_empty();
    check.attained = check.holds;
    let note = if failed.is_empty() {
        "all levels hold".to_string()
    } else {
        format!("fails at i = {}", failed.join(","))
    };
    gated(check.note(note), powerful)
}

/// Everything the report needs about one group.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BoundInputs {
    pub invariants: GroupInvariants,
    /// `log_p |γ_{c+1}(G)|`.
    pub gamma_exp: u32,
    /// `log_p |G'|`.
    pub derived_exp: u32,
    /// `M^(c)(G)` when known.
    pub multiplier: Option<AbelianPGroup>,
    /// `M(G) = M^(1)(G)` when known.
    pub schur: Option<AbelianPGroup>,
    /// Per-level results of the commutator condition, when evaluated.
    pub ellis_levels: Option<Vec<(u32, bool)>>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct BoundReport {
    pub group_id: String,
    pub p: u64,
    pub c: u32,
    pub invariants: GroupInvariants,
    pub multiplier: Option<AbelianPGroup>,
    pub checks: Vec<BoundCheck>,
}

impl BoundReport {
    pub fn check(&self, name: &str) -> Option<&BoundCheck> {
        self.checks.iter().find(|c| c.name == name)
    }

    pub fn violations(&self) -> impl Iterator<Item = &BoundCheck> {
        self.checks.iter().filter(|c| c.is_violation())
    }
}

/// Runs every check once, in a fixed order.
pub fn full_report(group_id: &str, p: u64, c: u32, input: &BoundInputs) -> BoundReport {
    let inv = &input.invariants;
    let powerful = inv.powerful;
    let m = input
        .multiplier
        .as_ref()
        .map(AbelianPGroup::structure_invariants);
    let mut checks = Vec::new();
    let unknown = "multiplier unknown";

    match m {
        Some(m) => {
            checks.push(check_generator_bound(m.d, inv.d, c, powerful));
            checks.push(check_exponent_bound(m.e, inv.e, powerful));
            checks.push(check_order_bound(m.order_exp, inv.d, inv.e, c, powerful));
        }
        None => {
            checks.push(BoundCheck::skipped("generator_bound", unknown));
            checks.push(BoundCheck::skipped("exponent_bound", unknown));
            checks.push(BoundCheck::skipped("order_bound", unknown));
        }
    }
    let schur_exp = input
        .schur
        .as_ref()
        .map(|s| s.structure_invariants().order_exp);
    checks.extend(check_lubotzky_mann_basics(inv, schur_exp));
    checks.extend(check_sandwich_bound(
        m.map(|m| m.order_exp),
        input.gamma_exp,
        inv.d,
        inv.order_exp,
        c,
    ));
    checks.push(check_order_bound_improvement(
        inv.d,
        inv.e,
        inv.order_exp,
        c,
        input.gamma_exp,
    ));
    checks.push(match (m, inv.sr) {
        (Some(m), Some(r)) => check_rank_class_bound(m.d, inv.d, r, inv.cl, c, powerful),
        (None, _) => BoundCheck::skipped("rank_class_bound", unknown),
        (_, None) => BoundCheck::skipped("rank_class_bound", "special rank not computed"),
    });
    match schur_exp {
        Some(s) => checks.extend(check_jones_bounds(
            s,
            input.derived_exp,
            inv.order_exp,
            inv.center_exp,
        )),
        None => {
            checks.push(BoundCheck::skipped(
                "jones_center",
                "Schur multiplier unknown",
            ));
            checks.push(BoundCheck::skipped(
                "jones_derived",
                "Schur multiplier unknown",
            ));
        }
    }
    checks.push(match m {
        Some(m) => check_ellis_exponent(m.e, inv.e, inv.cl, c),
        None if inv.cl < 2 => check_ellis_exponent(0, inv.e, inv.cl, c),
        None => BoundCheck::skipped("ellis_exponent", unknown),
    });
    checks.push(match &input.ellis_levels {
        Some(levels) => check_ellis_commutator_condition(levels, powerful),
        None => BoundCheck::skipped("ellis_commutator_condition", "group not enumerated"),
    });
    checks.push(BoundCheck::context(
        "context_exponent_four",
        "exp(M(G)) | 8 for exponent-4 groups; needs the Schur multiplier, not checked",
    ));
    checks.push(BoundCheck::context(
        "context_small_class",
        "exp(M(G)) <= exp(G) for class 3, 4, 5 under arithmetic conditions; not checked",
    ));
    checks.push(BoundCheck::context(
        "context_class_below_p",
        "exp(M^(c)(G)) | exp(G) when class < p; needs M^(c), not checked",
    ));

    BoundReport {
        group_id: group_id.into(),
        p,
        c,
        invariants: inv.clone(),
        multiplier: input.multiplier.clone(),
        checks,
    }
}
