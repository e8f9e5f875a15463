use super::subgroup::Closure;
use super::{log_p, Elem, GroupTable, SubgroupSet};
use crate::error::{Error, Result};

impl GroupTable {
    /// `γ_1 = G, γ_{i+1} = [γ_i, G]` down to the trivial group, plus the class.
    pub fn lower_central_series(&self) -> Result<(Vec<SubgroupSet>, u32)> {
        let order_exp = self.order_exp().map_err(|_| Error::NotNilpotent)?;
        let whole = self.whole();
        let mut series = vec![whole.clone()];
        while !series.last().unwrap().is_trivial() {
            let next = self.commutator_subgroup(series.last().unwrap(), &whole);
            if next == *series.last().unwrap() || series.len() > order_exp as usize + 1 {
                return Err(Error::NotNilpotent);
            }
            series.push(next);
        }
        let class = (series.len() - 1) as u32;
        Ok((series, class))
    }

    /// `Z_0 = 1`, `Z_{i+1}/Z_i = Z(G/Z_i)` up to `G`, plus the exponent-exponent
    /// of the centre `Z_1`.
    pub fn upper_central_series(&self) -> Result<(Vec<SubgroupSet>, u32)> {
        let mut series = vec![self.trivial_subgroup()];
        loop {
            let current = series.last().unwrap();
            if current.order() == self.order() {
                break;
            }
            let members: Vec<Elem> = (0..self.order() as Elem)
                .filter(|&x| {
                    self.generators
                        .iter()
                        .all(|&g| current.contains(self.commutator(x, g)))
                })
                .collect();
            if members.len() == current.order() {
                return Err(Error::NotNilpotent);
            }
            series.push(self.subgroup_from_members(&members));
        }
        let center_exp = match series.get(1) {
            Some(z) => self.exponent(z),
            None => 0,
        };
        Ok((series, center_exp))
    }

    /// `G^(0) = G`, `G^(i+1) = [G^(i), G^(i)]` down to 1, plus the derived length.
    pub fn derived_series(&self) -> Result<(Vec<SubgroupSet>, u32)> {
        let mut series = vec![self.whole()];
        while !series.last().unwrap().is_trivial() {
            let last = series.last().unwrap();
            let next = self.commutator_subgroup(last, last);
            if next == *last {
                return Err(Error::NotNilpotent);
            }
            series.push(next);
        }
        let length = (series.len() - 1) as u32;
        Ok((series, length))
    }

    /// `℧_i(H)`: generated by all `p^i`-th powers of elements of `H`.
    pub fn agemo(&self, h: &SubgroupSet, i: u32) -> SubgroupSet {
        self.power_subgroup(h, self.p().pow(i))
    }

    /// The set `{h^{p^i} : h in H}` (not closed under products in general).
    pub fn power_set(&self, h: &SubgroupSet, i: u32) -> Vec<Elem> {
        let m = self.p().pow(i);
        let mut out: Vec<Elem> = h.members().iter().map(|&x| self.pow(x, m)).collect();
        out.sort_unstable();
        out.dedup();
        out
    }

    /// `P_1 = G`, `P_{i+1} = [P_i, G] ℧_1(P_i)` until it stabilises.
    pub fn p_series(&self) -> Vec<SubgroupSet> {
        let whole = self.whole();
        let mut series = vec![whole.clone()];
        loop {
            let last = series.last().unwrap();
            let next = self.join(
                &self.commutator_subgroup(last, &whole),
                &self.agemo(last, 1),
            );
            if next == *last {
                break;
            }
            series.push(next);
        }
        series
    }

    /// `Φ(H) = H' ℧_1(H)` (valid for p-groups).
    pub fn frattini(&self, h: &SubgroupSet) -> SubgroupSet {
        self.join(&self.commutator_subgroup(h, h), &self.agemo(h, 1))
    }

    /// `d(H) = log_p |H : Φ(H)|`.
    pub fn min_generators(&self, h: &SubgroupSet) -> Result<u32> {
        let phi = self.frattini(h);
        log_p(h.order() / phi.order(), self.p()).ok_or(Error::NotPGroup(h.order(), self.p()))
    }

    /// `e` with `exp(H) = p^e`.
    pub fn exponent(&self, h: &SubgroupSet) -> u32 {
        h.members()
            .iter()
            .map(|&x| self.element_order_exp(x))
            .max()
            .unwrap_or(0)
    }

    /// Level of agemo used in the powerful condition: 1, or 2 when `p = 2`.
    pub(crate) fn powerful_level(&self) -> u32 {
        if self.p() == 2 {
            2
        } else {
            1
        }
    }

    /// `G' <= ℧_1(G)` (`℧_2` when `p = 2`).
    pub fn is_powerful(&self) -> Result<bool> {
        self.order_exp()?;
        let whole = self.whole();
        Ok(self.subgroup_is_powerful(&whole))
    }

    /// Powerfulness of `H` as a group in its own right.
    pub fn subgroup_is_powerful(&self, h: &SubgroupSet) -> bool {
        self.commutator_subgroup(h, h)
            .is_subset(&self.agemo(h, self.powerful_level()))
    }

    /// `[G, N] <= ℧_1(N)` (`℧_2` when `p = 2`); `N` must be normal.
    pub fn is_powerfully_embedded(&self, n: &SubgroupSet) -> Result<bool> {
        if !self.is_normal(n) {
            return Err(Error::NotNormal);
        }
        let whole = self.whole();
        Ok(self
            .commutator_subgroup(&whole, n)
            .is_subset(&self.agemo(n, self.powerful_level())))
    }

    /// Whether `[[℧_{i-1}(G), G], G] ⊆ ℧_i(G)` for each `1 <= i <= e`.
    pub fn ellis_commutator_condition(&self) -> Vec<(u32, bool)> {
        let whole = self.whole();
        let e = self.exponent(&whole);
        let mut agemos: Vec<SubgroupSet> = vec![whole.clone()];
        for i in 1..=e {
            agemos.push(self.agemo(&whole, i));
        }
        (1..=e)
            .map(|i| {
                let inner = self.commutator_subgroup(&agemos[i as usize - 1], &whole);
                let outer = self.commutator_subgroup(&inner, &whole);
                (i, outer.is_subset(&agemos[i as usize]))
            })
            .collect()
    }

    /// Whether some `k` elements generate `G`. Exhaustive over `k`-subsets, so
    /// only sensible for small groups.
    pub fn generated_by_some_subset_of_size(&self, k: usize) -> bool {
        fn rec(g: &GroupTable, start: Elem, left: usize, acc: &SubgroupSet) -> bool {
            if acc.order() == g.order() {
                return true;
            }
            if left == 0 {
                return false;
            }
            (start..g.order() as Elem).any(|x| {
                !acc.contains(x) && {
                    let mut next = Closure::from_subgroup(g, acc);
                    next.add(x);
                    rec(g, x + 1, left - 1, &next.finish())
                }
            })
        }
        rec(self, 0, k, &self.trivial_subgroup())
    }
}
