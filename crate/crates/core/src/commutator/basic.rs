use std::ops::Range;

use crate::error::{Error, Result};

/// Default size cap for bases built by [`enumerate_basic_commutators`].
pub const ENUMERATION_CAP: usize = 4096;

/// `Leaf(i)` is the letter `x_{i+1}`; `Pair(u, v)` is `[b_u, b_v]` with `u`, `v`
/// positions in the same basis.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Shape {
    Leaf(usize),
    Pair(usize, usize),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct BasicCommutator {
    /// Position in the total order.
    pub ord: usize,
    pub weight: u32,
    pub shape: Shape,
}

/// Hall basic commutators of weight `<= max_weight` on `letters` letters.
///
/// Order: by weight; within a weight, lexicographically by the positions of
/// `(left, right)`; letters `x_1 < x_2 < ...`. `[u, v]` is basic when `u`, `v`
/// are basic, `u > v`, and `u = [u1, u2]` implies `u2 <= v`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HallBasis {
    letters: usize,
    max_weight: u32,
    items: Vec<BasicCommutator>,
    weight_start: Vec<usize>,
}

pub fn enumerate_basic_commutators(letters: usize, max_weight: u32) -> Result<HallBasis> {
    HallBasis::with_cap(letters, max_weight, ENUMERATION_CAP)
}

impl HallBasis {
    pub fn with_cap(letters: usize, max_weight: u32, cap: usize) -> Result<Self> {
        if letters == 0 || max_weight == 0 {
            return Err(Error::InvalidParameters(
                "need at least one letter and weight >= 1".into(),
            ));
        }
        let mut items: Vec<BasicCommutator> = (0..letters)
            .map(|i| BasicCommutator {
                ord: i,
                weight: 1,
                shape: Shape::Leaf(i),
            })
            .collect();
        if items.len() > cap {
            return Err(Error::BasisTooLarge(cap));
        }
        // weight_start[w] = first position of weight w; weight_start[0] unused.
        let mut weight_start = vec![0, 0, letters];
        for w in 2..=max_weight {
            let mut pairs: Vec<(usize, usize)> = Vec::new();
            for wu in (w / 2).max(1)..w {
                let wv = w - wu;
                for u in weight_start[wu as usize]..weight_start[wu as usize + 1] {
                    for v in weight_start[wv as usize]..weight_start[wv as usize + 1] {
                        if u <= v {
                            continue;
                        }
                        if let Shape::Pair(_, u2) = items[u].shape {
                            if u2 > v {
                                continue;
                            }
                        }
                        pairs.push((u, v));
                    }
                }
            }
            pairs.sort_unstable();
            if items.len() + pairs.len() > cap {
                return Err(Error::BasisTooLarge(cap));
            }
            for (u, v) in pairs {
                let ord = items.len();
                items.push(BasicCommutator {
                    ord,
                    weight: w,
                    shape: Shape::Pair(u, v),
                });
            }
            weight_start.push(items.len());
        }
        Ok(Self {
            letters,
            max_weight,
            items,
            weight_start,
        })
    }

    pub fn letters(&self) -> usize {
        self.letters
    }

    pub fn max_weight(&self) -> u32 {
        self.max_weight
    }

    pub fn len(&self) -> usize {
        self.items.len()
    }

    pub fn is_empty(&self) -> bool {
        self.items.is_empty()
    }

    pub fn items(&self) -> &[BasicCommutator] {
        &self.items
    }

    pub fn get(&self, ord: usize) -> &BasicCommutator {
        &self.items[ord]
    }

    /// Positions of the commutators of weight `w`.
    pub fn weight_range(&self, w: u32) -> Range<usize> {
        if w == 0 || w > self.max_weight {
            return 0..0;
        }
        self.weight_start[w as usize]..self.weight_start[w as usize + 1]
    }

    pub fn count_of_weight(&self, w: u32) -> usize {
        self.weight_range(w).len()
    }

    /// How often each letter occurs in `b_ord`.
    pub fn letter_content(&self, ord: usize) -> Vec<u32> {
        let mut out = vec![0; self.letters];
        self.accumulate_content(ord, &mut out);
        out
    }

    fn accumulate_content(&self, ord: usize, out: &mut [u32]) {
        match self.items[ord].shape {
            Shape::Leaf(i) => out[i] += 1,
            Shape::Pair(u, v) => {
                self.accumulate_content(u, out);
                self.accumulate_content(v, out);
            }
        }
    }

    /// `x_i` for leaves, `[u,v]` for pairs.
    pub fn format(&self, ord: usize) -> String {
        match self.items[ord].shape {
            Shape::Leaf(i) => format!("x_{}", i + 1),
            Shape::Pair(u, v) => format!("[{},{}]", self.format(u), self.format(v)),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::super::witt::witt_chi;
    use super::*;

    #[test]
    fn single_letter() {
        let b = enumerate_basic_commutators(1, 5).unwrap();
        assert_eq!(b.len(), 1);
        assert_eq!(b.format(0), "x_1");
    }

    #[test]
    fn two_letters_weight_three() {
        let b = enumerate_basic_commutators(2, 3).unwrap();
        let names: Vec<String> = b.weight_range(3).map(|i| b.format(i)).collect();
        assert_eq!(names, ["[[x_2,x_1],x_1]", "[[x_2,x_1],x_2]"]);
        assert_eq!(b.format(2), "[x_2,x_1]");
    }

    #[test]
    fn ordering_invariants() {
        let b = enumerate_basic_commutators(3, 5).unwrap();
        for w in b.items().windows(2) {
            assert!(w[0].weight <= w[1].weight);
            if let (Shape::Pair(u0, v0), Shape::Pair(u1, v1)) = (w[0].shape, w[1].shape) {
                if w[0].weight == w[1].weight {
                    assert!((u0, v0) < (u1, v1));
                }
            }
        }
        for c in b.items() {
            if let Shape::Pair(u, v) = c.shape {
                assert!(u > v);
                assert_eq!(b.get(u).weight + b.get(v).weight, c.weight);
                if let Shape::Pair(_, u2) = b.get(u).shape {
                    assert!(u2 <= v);
                }
            }
        }
    }

    #[test]
    fn counts_match_witt_for_small_parameters() {
        for d in 1..=4usize {
            let b = enumerate_basic_commutators(d, 6).unwrap();
            for n in 1..=6 {
                assert_eq!(
                    b.count_of_weight(n) as u128,
                    witt_chi(d as u64, n),
                    "d={d} n={n}"
                );
            }
        }
    }

    #[test]
    fn size_cap() {
        assert_eq!(
            HallBasis::with_cap(4, 6, 500),
            Err(Error::BasisTooLarge(500))
        );
        assert!(HallBasis::with_cap(4, 5, 500).is_ok());
    }

    #[test]
    fn letter_content_and_weight() {
        let b = enumerate_basic_commutators(3, 4).unwrap();
        for c in b.items() {
            assert_eq!(b.letter_content(c.ord).iter().sum::<u32>(), c.weight);
        }
    }
}
