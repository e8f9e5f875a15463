use std::collections::HashSet;

use super::subgroup::Closure;
use super::{Elem, GroupTable, SubgroupSet};
use crate::error::{Error, Result};

/// Largest group order for which subgroups are enumerated.
pub const DEFAULT_RANK_BUDGET: usize = 512;

impl GroupTable {
    /// Every subgroup of a p-group, by cyclic extension: each subgroup of
    /// order `p^{k+1}` is `<H, x>` for some `H` of order `p^k` normalised by
    /// `x` with `x^p in H`.
    pub fn all_subgroups(&self, budget: usize) -> Result<Vec<SubgroupSet>> {
        if self.order() > budget {
            return Err(Error::BudgetExceeded {
                order: self.order(),
                budget,
            });
        }
        self.order_exp()?;
        let p = self.p();
        let mut layer = vec![self.trivial_subgroup()];
        let mut all = layer.clone();
        while !layer.is_empty() {
            let mut seen: HashSet<Vec<Elem>> = HashSet::new();
            let mut next = Vec::new();
            for h in &layer {
                let mut reached: Vec<SubgroupSet> = Vec::new();
                for x in 0..self.order() as Elem {
                    if h.contains(x) || reached.iter().any(|k| k.contains(x)) {
                        continue;
                    }
                    if !h.contains(self.pow(x, p)) {
                        continue;
                    }
                    if !h
                        .generators()
                        .iter()
                        .all(|&y| h.contains(self.conjugate(y, x)))
                    {
                        continue;
                    }
                    let mut c = Closure::from_subgroup(self, h);
                    c.add(x);
                    let k = c.finish();
                    if seen.insert(k.members().to_vec()) {
                        next.push(k.clone());
                    }
                    reached.push(k);
                }
            }
            all.extend(next.iter().cloned());
            layer = next;
        }
        Ok(all)
    }

    /// `sr(G) = max d(H)` over all subgroups `H`.
    pub fn special_rank(&self, budget: usize) -> Result<u32> {
        let subgroups = self.all_subgroups(budget)?;
        subgroups
            .iter()
            .map(|h| self.min_generators(h))
            .try_fold(0, |acc, d| d.map(|d| acc.max(d)))
    }
}
