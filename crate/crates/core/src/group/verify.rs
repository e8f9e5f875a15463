//! Checks of the standard structure facts about powerful p-groups, evaluated
//! on a concrete enumerated group.

use serde::Serialize;

use super::{GroupTable, SubgroupRelation, SubgroupSet};
use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ClauseResult {
    pub clause: &'static str,
    pub label: String,
    pub passed: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct PowerfulStructureReport {
    pub results: Vec<ClauseResult>,
}

impl PowerfulStructureReport {
    pub fn passed(&self) -> bool {
        self.results.iter().all(|r| r.passed)
    }

    pub fn clause_passed(&self, clause: &str) -> bool {
        self.results
            .iter()
            .filter(|r| r.clause == clause)
            .all(|r| r.passed)
    }

    fn push(&mut self, clause: &'static str, label: String, passed: bool) {
        self.results.push(ClauseResult {
            clause,
            label,
            passed,
        });
    }
}

impl GroupTable {
    /// Evaluates, for powerful `G`:
    ///
    /// * (i) `γ_i(G)`, `G^i`, `℧_i(G)` and `Φ(G)` are powerfully embedded;
    /// * (ii) `P_{i+1}(G) = ℧_i(G)` and `℧_i(℧_j(G)) = ℧_{i+j}(G)`;
    /// * (iii) `℧_i(G)` is exactly the set of `p^i`-th powers;
    /// * (iv) `℧_i(G)` is generated by the `p^i`-th powers of the generators;
    /// * (v) `d(H) <= d(G)` for every subgroup `H` computed along the way.
    pub fn verify_powerful_structure(&self) -> Result<PowerfulStructureReport> {
        if !self.is_powerful()? {
            return Err(Error::NotPowerful);
        }
        let mut report = PowerfulStructureReport {
            results: Vec::new(),
        };
        let whole = self.whole();
        let e = self.exponent(&whole);
        let d = self.min_generators(&whole)?;
        let (lcs, _) = self.lower_central_series()?;
        let agemos: Vec<SubgroupSet> = (0..=e + 1).map(|i| self.agemo(&whole, i)).collect();
        let phi = self.frattini(&whole);

        for (i, term) in lcs.iter().enumerate() {
            let ok = self.is_powerfully_embedded(term)?;
            report.push("i", format!("gamma_{} powerfully embedded", i + 1), ok);
        }
        let mut power_subgroups: Vec<SubgroupSet> = Vec::new();
        for m in 1..=self.p().pow(e) {
            let h = self.power_subgroup(&whole, m);
            if power_subgroups.contains(&h) {
                continue;
            }
            let ok = self.is_powerfully_embedded(&h)?;
            report.push("i", format!("G^{m} powerfully embedded"), ok);
            power_subgroups.push(h);
        }
        for (i, a) in agemos.iter().enumerate() {
            let ok = self.is_powerfully_embedded(a)?;
            report.push("i", format!("agemo_{i} powerfully embedded"), ok);
        }
        let ok = self.is_powerfully_embedded(&phi)?;
        report.push("i", "Frattini subgroup powerfully embedded".into(), ok);

        let p_series = self.p_series();
        for i in 0..=e as usize {
            let ok = match p_series.get(i) {
                Some(term) => *term == agemos[i],
                None => agemos[i].is_trivial(),
            };
            report.push("ii", format!("P_{} = agemo_{i}", i + 1), ok);
        }
        for i in 0..=e {
            for j in 0..=e - i {
                let lhs = self.agemo(&agemos[j as usize], i);
                let ok = lhs.relation(&agemos[(i + j) as usize]) == SubgroupRelation::Equal;
                report.push("ii", format!("agemo_{i}(agemo_{j}) = agemo_{}", i + j), ok);
            }
        }

        for (i, a) in agemos.iter().enumerate() {
            let powers = self.power_set(&whole, i as u32);
            report.push(
                "iii",
                format!("agemo_{i} equals the set of p^{i}-th powers"),
                powers.as_slice() == a.members(),
            );
        }

        for (i, a) in agemos.iter().enumerate() {
            let m = self.p().pow(i as u32);
            let gens: Vec<_> = self.generators().iter().map(|&g| self.pow(g, m)).collect();
            let h = self.subgroup_generated(&gens);
            report.push(
                "iv",
                format!("agemo_{i} generated by p^{i}-th powers of generators"),
                h == *a,
            );
        }

        let mut checked: Vec<&SubgroupSet> = Vec::new();
        for h in lcs
            .iter()
            .chain(&agemos)
            .chain(std::iter::once(&phi))
            .chain(&p_series)
            .chain(&power_subgroups)
        {
            if checked.contains(&h) {
                continue;
            }
            checked.push(h);
            let dh = self.min_generators(h)?;
            report.push(
                "v",
                format!("d(H) = {dh} <= d(G) = {d} for |H| = {}", h.order()),
                dh <= d,
            );
        }
        Ok(report)
    }

    /// Compares `℧_k(γ_{c+1}(G))` with `[℧_k(G), G, ..., G]` (`c` copies of `G`).
    pub fn compare_omega_gamma(&self, c: u32, k: u32) -> Result<SubgroupRelation> {
        let (lcs, _) = self.lower_central_series()?;
        let whole = self.whole();
        let gamma = lcs
            .get(c as usize)
            .cloned()
            .unwrap_or_else(|| self.trivial_subgroup());
        let left = self.agemo(&gamma, k);
        let right = self.iterated_commutator_subgroup(&self.agemo(&whole, k), &whole, c);
        Ok(left.relation(&right))
    }
}
