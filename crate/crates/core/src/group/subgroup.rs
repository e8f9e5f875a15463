use super::{Elem, GroupTable, IDENTITY};

/// All-pairs commutator generation is used while `|A||B|` stays below this.
pub const ALL_PAIRS_BUDGET: usize = 1 << 20;

/// Subgroup of a [`GroupTable`], as a sorted member list plus a membership mask.
///
/// `generators` is always a generating set; it is irredundant in the sense that
/// each entry lies outside the subgroup generated by the ones before it.
#[derive(Clone)]
pub struct SubgroupSet {
    members: Vec<Elem>,
    mask: Vec<u64>,
    generators: Vec<Elem>,
}

impl PartialEq for SubgroupSet {
    fn eq(&self, other: &Self) -> bool {
        self.members == other.members
    }
}

impl Eq for SubgroupSet {}

impl std::fmt::Debug for SubgroupSet {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(
            f,
            "SubgroupSet(order {}, gens {:?})",
            self.order(),
            self.generators
        )
    }
}

/// How two subgroups compare under inclusion.
#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize)]
#[serde(rename_all = "snake_case")]
pub enum SubgroupRelation {
    Equal,
    LeftInRight,
    RightInLeft,
    Incomparable,
}

impl SubgroupSet {
    pub fn order(&self) -> usize {
        self.members.len()
    }

    pub fn members(&self) -> &[Elem] {
        &self.members
    }

    pub fn generators(&self) -> &[Elem] {
        &self.generators
    }

    #[inline]
    pub fn contains(&self, x: Elem) -> bool {
        self.mask[x as usize / 64] >> (x % 64) & 1 == 1
    }

    pub fn is_trivial(&self) -> bool {
        self.members.len() == 1
    }

    pub fn is_subset(&self, other: &Self) -> bool {
        self.order() <= other.order() && self.members.iter().all(|&x| other.contains(x))
    }

    pub fn relation(&self, other: &Self) -> SubgroupRelation {
        match (self.is_subset(other), other.is_subset(self)) {
            (true, true) => SubgroupRelation::Equal,
            (true, false) => SubgroupRelation::LeftInRight,
            (false, true) => SubgroupRelation::RightInLeft,
            (false, false) => SubgroupRelation::Incomparable,
        }
    }
}

/// Incrementally grown subgroup.
pub(crate) struct Closure<'g> {
    group: &'g GroupTable,
    members: Vec<Elem>,
    mask: Vec<u64>,
    generators: Vec<Elem>,
}

impl<'g> Closure<'g> {
    pub(crate) fn trivial(group: &'g GroupTable) -> Self {
        let mut mask = vec![0u64; group.order().div_ceil(64)];
        mask[0] |= 1;
        Self {
            group,
            members: vec![IDENTITY],
            mask,
            generators: Vec::new(),
        }
    }

    pub(crate) fn from_subgroup(group: &'g GroupTable, h: &SubgroupSet) -> Self {
        Self {
            group,
            members: h.members.clone(),
            mask: h.mask.clone(),
            generators: h.generators.clone(),
        }
    }

    #[inline]
    pub(crate) fn contains(&self, x: Elem) -> bool {
        self.mask[x as usize / 64] >> (x % 64) & 1 == 1
    }

    fn push(&mut self, x: Elem) {
        self.mask[x as usize / 64] |= 1 << (x % 64);
        self.members.push(x);
    }

    /// Adjoins `x`; returns whether the subgroup grew.
    pub(crate) fn add(&mut self, x: Elem) -> bool {
        if self.contains(x) {
            return false;
        }
        self.generators.push(x);
        let old = self.members.len();
        for i in 0..old {
            let y = self.group.mult(self.members[i], x);
            if !self.contains(y) {
                self.push(y);
            }
        }
        let mut i = old;
        while i < self.members.len() {
            let m = self.members[i];
            for gi in 0..self.generators.len() {
                let y = self.group.mult(m, self.generators[gi]);
                if !self.contains(y) {
                    self.push(y);
                }
            }
            i += 1;
        }
        true
    }

    pub(crate) fn finish(mut self) -> SubgroupSet {
        self.members.sort_unstable();
        SubgroupSet {
            members: self.members,
            mask: self.mask,
            generators: self.generators,
        }
    }
}

impl GroupTable {
    pub fn trivial_subgroup(&self) -> SubgroupSet {
        Closure::trivial(self).finish()
    }

    /// `G` itself, generated by its stored generators.
    pub fn whole(&self) -> SubgroupSet {
        self.subgroup_generated(&self.generators)
    }

    pub fn subgroup_generated(&self, s: &[Elem]) -> SubgroupSet {
        let mut c = Closure::trivial(self);
        for &x in s {
            c.add(x);
        }
        c.finish()
    }

    /// Subgroup with the given members, which must form a subgroup.
    pub fn subgroup_from_members(&self, members: &[Elem]) -> SubgroupSet {
        let h = self.subgroup_generated(members);
        debug_assert_eq!(h.order(), members.len());
        h
    }

    /// Smallest subgroup containing `s` and normalised by `<conj>`.
    pub fn normal_closure_in(&self, s: &[Elem], conj: &[Elem]) -> SubgroupSet {
        let mut c = Closure::trivial(self);
        for &x in s {
            c.add(x);
        }
        let mut idx = 0;
        while idx < c.generators.len() {
            let n = c.generators[idx];
            for &k in conj {
                c.add(self.conjugate(n, k));
            }
            idx += 1;
        }
        c.finish()
    }

    /// Normal closure of `s` in `G`.
    pub fn normal_closure(&self, s: &[Elem]) -> SubgroupSet {
        self.normal_closure_in(s, &self.generators)
    }

    pub fn is_normal(&self, n: &SubgroupSet) -> bool {
        n.generators.iter().all(|&x| {
            self.generators
                .iter()
                .all(|&g| n.contains(self.conjugate(x, g)))
        })
    }

    /// `[A, B]`, by all pairs under [`ALL_PAIRS_BUDGET`] and by generator
    /// pairs plus normal closure in `<A, B>` above it.
    pub fn commutator_subgroup(&self, a: &SubgroupSet, b: &SubgroupSet) -> SubgroupSet {
        if a.order().saturating_mul(b.order()) <= ALL_PAIRS_BUDGET {
            self.commutator_subgroup_all_pairs(a, b)
        } else {
            self.commutator_subgroup_from_generators(a, b)
        }
    }

    pub fn commutator_subgroup_all_pairs(&self, a: &SubgroupSet, b: &SubgroupSet) -> SubgroupSet {
        let mut c = Closure::trivial(self);
        for &x in &a.members {
            for &y in &b.members {
                let z = self.commutator(x, y);
                c.add(z);
            }
        }
        c.finish()
    }

    pub fn commutator_subgroup_from_generators(
        &self,
        a: &SubgroupSet,
        b: &SubgroupSet,
    ) -> SubgroupSet {
        let pairs: Vec<Elem> = a
            .generators
            .iter()
            .flat_map(|&x| b.generators.iter().map(move |&y| (x, y)))
            .map(|(x, y)| self.commutator(x, y))
            .collect();
        let conj: Vec<Elem> = a.generators.iter().chain(&b.generators).copied().collect();
        self.normal_closure_in(&pairs, &conj)
    }

    /// `[A, B, ..., B]` with `b` repeated `times` times.
    pub fn iterated_commutator_subgroup(
        &self,
        a: &SubgroupSet,
        b: &SubgroupSet,
        times: u32,
    ) -> SubgroupSet {
        let mut acc = a.clone();
        for _ in 0..times {
            acc = self.commutator_subgroup(&acc, b);
        }
        acc
    }

    /// Subgroup generated by two subgroups (their product when one is normal).
    pub fn join(&self, a: &SubgroupSet, b: &SubgroupSet) -> SubgroupSet {
        let mut c = Closure::from_subgroup(self, a);
        for &x in &b.generators {
            c.add(x);
        }
        c.finish()
    }

    /// `<h^m : h in H>`.
    pub fn power_subgroup(&self, h: &SubgroupSet, m: u64) -> SubgroupSet {
        let mut c = Closure::trivial(self);
        for &x in &h.members {
            c.add(self.pow(x, m));
        }
        c.finish()
    }
}

#[cfg(test)]
mod tests {
    use super::super::fixtures::*;
    use super::*;

    #[test]
    fn generated_subgroups_in_order16() {
        let g = order16();
        let b = g.generators()[1];
        assert!(g.subgroup_generated(&[IDENTITY]).is_trivial());
        assert_eq!(g.subgroup_generated(&[b]).order(), 8);
        let b4 = g.pow(b, 4);
        assert_eq!(g.element_order(b4), 2);
        assert_eq!(g.subgroup_generated(&[b4]).order(), 2);
        assert_eq!(g.whole().order(), 16);
    }

    #[test]
    fn normal_closures() {
        let g = order16();
        let (a, b) = (g.generators()[0], g.generators()[1]);
        assert!(g.normal_closure(&[IDENTITY]).is_trivial());
        let whole = g.whole();
        let derived = g.commutator_subgroup(&whole, &whole);
        assert_eq!(g.normal_closure(&[g.commutator(a, b)]), derived);
        // b^4 is central, so its normal closure is the cyclic group it generates.
        let z = g.pow(b, 4);
        assert_eq!(g.normal_closure(&[z]), g.subgroup_generated(&[z]));
        // <a> is not normal in D8 and its normal closure is bigger.
        let d8 = dihedral8();
        let s = d8.generators()[1];
        assert!(!d8.is_normal(&d8.subgroup_generated(&[s])));
        assert_eq!(d8.normal_closure(&[s]).order(), 4);
    }

    #[test]
    fn commutator_subgroup_edge_cases() {
        let g = order27();
        let whole = g.whole();
        let triv = g.trivial_subgroup();
        assert!(g.commutator_subgroup(&whole, &triv).is_trivial());
        let ab = abelian(3, &[2, 1]);
        let w = ab.whole();
        assert!(ab.commutator_subgroup(&w, &w).is_trivial());
    }

    #[test]
    fn commutator_methods_agree() {
        for g in [order16(), order27(), dihedral8(), lm(3, 1)] {
            let whole = g.whole();
            let derived_all = g.commutator_subgroup_all_pairs(&whole, &whole);
            let derived_gen = g.commutator_subgroup_from_generators(&whole, &whole);
            assert_eq!(derived_all, derived_gen);
            let gamma3_all = g.commutator_subgroup_all_pairs(&derived_all, &whole);
            let gamma3_gen = g.commutator_subgroup_from_generators(&derived_gen, &whole);
            assert_eq!(gamma3_all, gamma3_gen);
        }
    }

    #[test]
    fn lm_commutator_relations_equal_z_to_the_p() {
        let g = lm(3, 1);
        let (x, y, z) = (g.generators()[0], g.generators()[1], g.generators()[2]);
        let zp = g.pow(z, 3);
        assert_eq!(g.commutator(x, y), zp);
        assert_eq!(g.commutator(x, z), zp);
        assert_eq!(g.commutator(y, z), zp);
        let whole = g.whole();
        assert!(g.commutator_subgroup(&whole, &whole).contains(zp));
    }

    #[test]
    fn relation_reporting() {
        let g = order16();
        let w = g.whole();
        let t = g.trivial_subgroup();
        assert_eq!(w.relation(&w), SubgroupRelation::Equal);
        assert_eq!(t.relation(&w), SubgroupRelation::LeftInRight);
        assert_eq!(w.relation(&t), SubgroupRelation::RightInLeft);
        let (a, b) = (g.generators()[0], g.generators()[1]);
        let ha = g.subgroup_generated(&[a]);
        let hb = g.subgroup_generated(&[g.pow(b, 4)]);
        assert_eq!(ha.relation(&hb), SubgroupRelation::Incomparable);
    }
}
