//! Finite groups generated by invertible matrices over `Z/p^k`.
//!
//! [`GroupTable::close`] enumerates the whole group breadth-first. Elements are
//! then addressed by dense `u32` indices, with index `0` the identity. Subgroups
//! are [`SubgroupSet`]s over the same index space.

mod rank;
mod series;
mod subgroup;
mod verify;

use std::collections::HashMap;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::residue::{encode_into, mul_into, ResidueMatrix, ResidueModulus, MAX_DIM};

pub use rank::DEFAULT_RANK_BUDGET;
pub use subgroup::{SubgroupRelation, SubgroupSet, ALL_PAIRS_BUDGET};
pub use verify::{ClauseResult, PowerfulStructureReport};

/// Element index inside a [`GroupTable`].
pub type Elem = u32;

/// Index of the identity in every table.
pub const IDENTITY: Elem = 0;

/// Groups up to this order get a cached multiplication table.
pub const TABLE_LIMIT: usize = 4096;

/// Fully enumerated finite matrix group.
pub struct GroupTable {
    modulus: ResidueModulus,
    dim: usize,
    entries: Vec<u64>,
    index_of: HashMap<Vec<u8>, Elem>,
    generators: Vec<Elem>,
    table: Option<Vec<u16>>,
    inv: Vec<Elem>,
    order_exp: Option<u32>,
}

impl std::fmt::Debug for GroupTable {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("GroupTable")
            .field("modulus", &self.modulus.modulus())
            .field("dim", &self.dim)
            .field("order", &self.order())
            .field("generators", &self.generators)
            .finish()
    }
}

/// Exponent `n` with `value = p^n`, if any.
pub fn log_p(value: usize, p: u64) -> Option<u32> {
    let p = p as usize;
    let mut v = value;
    let mut n = 0;
    while v > 1 {
        if !v.is_multiple_of(p) {
            return None;
        }
        v /= p;
        n += 1;
    }
    (v == 1).then_some(n)
}

/// Structural invariants of a finite p-group, orders given as p-exponents.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct GroupInvariants {
    pub order_exp: u32,
    pub d: u32,
    pub e: u32,
    pub cl: u32,
    pub dl: u32,
    pub center_exp: u32,
    pub sr: Option<u32>,
    pub powerful: bool,
}

impl GroupTable {
    /// Enumerates `<generators>` breadth-first, failing once more than `cap`
    /// elements have been found.
    pub fn close(generators: &[ResidueMatrix], cap: usize) -> Result<Self> {
        let first = generators
            .first()
            .ok_or_else(|| Error::InvalidParameters("no generators".into()))?;
        let modulus = first.modulus();
        let dim = first.dim();
        if dim == 0 || dim > MAX_DIM {
            return Err(Error::DimensionUnsupported(dim));
        }
        for g in generators {
            if g.modulus() != modulus {
                return Err(Error::ModulusMismatch(
                    modulus.modulus(),
                    g.modulus().modulus(),
                ));
            }
            if g.dim() != dim {
                return Err(Error::DimensionMismatch(dim, g.dim()));
            }
            if !g.is_invertible() {
                return Err(Error::NonUnit(modulus.modulus()));
            }
        }
        let sq = dim * dim;
        let mut entries: Vec<u64> = ResidueMatrix::identity(modulus, dim).entries().to_vec();
        let mut index_of = HashMap::new();
        index_of.insert(ResidueMatrix::identity(modulus, dim).canonical_encode(), 0);
        let mut buf = vec![0u64; sq];
        let mut key = vec![0u8; sq * 4];
        let mut head = 0;
        while head * sq < entries.len() {
            for g in generators {
                mul_into(
                    modulus.modulus(),
                    dim,
                    &entries[head * sq..(head + 1) * sq],
                    g.entries(),
                    &mut buf,
                );
                encode_into(&buf, &mut key);
                if !index_of.contains_key(key.as_slice()) {
                    let idx = index_of.len();
                    if idx >= cap {
                        return Err(Error::ClosureCapExceeded(cap));
                    }
                    index_of.insert(key.clone(), idx as Elem);
                    entries.extend_from_slice(&buf);
                }
            }
            head += 1;
        }
        let order = index_of.len();
        let mut group = Self {
            modulus,
            dim,
            entries,
            index_of,
            generators: Vec::new(),
            table: None,
            inv: Vec::new(),
            order_exp: log_p(order, modulus.p()),
        };
        group.generators = generators
            .iter()
            .map(|g| group.index_of(g).expect("generator lies in its closure"))
            .collect();
        group.inv = (0..order as Elem)
            .map(|i| {
                let m = group
                    .element(i)
                    .mat_inv()
                    .expect("group elements are units");
                group
                    .index_of(&m)
                    .expect("closure is closed under inverses")
            })
            .collect();
        if order <= TABLE_LIMIT {
            let mut table = Vec::with_capacity(order * order);
            for a in 0..order as Elem {
                for b in 0..order as Elem {
                    table.push(group.mult_direct(a, b) as u16);
                }
            }
            group.table = Some(table);
        }
        Ok(group)
    }

    pub fn modulus(&self) -> ResidueModulus {
        self.modulus
    }

    pub fn p(&self) -> u64 {
        self.modulus.p()
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn order(&self) -> usize {
        self.inv.len()
    }

    /// `n` with `|G| = p^n`, or `NotPGroup`.
    pub fn order_exp(&self) -> Result<u32> {
        self.order_exp
            .ok_or(Error::NotPGroup(self.order(), self.p()))
    }

    pub fn generators(&self) -> &[Elem] {
        &self.generators
    }

    pub fn has_cached_table(&self) -> bool {
        self.table.is_some()
    }

    pub fn element(&self, i: Elem) -> ResidueMatrix {
        let sq = self.dim * self.dim;
        let i = i as usize;
        ResidueMatrix::from_raw(
            self.modulus,
            self.dim,
            self.entries[i * sq..(i + 1) * sq].to_vec(),
        )
    }

    pub fn index_of(&self, m: &ResidueMatrix) -> Option<Elem> {
        if m.modulus() != self.modulus || m.dim() != self.dim {
            return None;
        }
        self.index_of.get(m.canonical_encode().as_slice()).copied()
    }

    fn mult_direct(&self, a: Elem, b: Elem) -> Elem {
        let sq = self.dim * self.dim;
        let mut buf = [0u64; MAX_DIM * MAX_DIM];
        let mut key = [0u8; MAX_DIM * MAX_DIM * 4];
        let (a, b) = (a as usize, b as usize);
        mul_into(
            self.modulus.modulus(),
            self.dim,
            &self.entries[a * sq..(a + 1) * sq],
            &self.entries[b * sq..(b + 1) * sq],
            &mut buf[..sq],
        );
        encode_into(&buf[..sq], &mut key[..sq * 4]);
        self.index_of[&key[..sq * 4]]
    }

    #[inline]
    pub fn mult(&self, a: Elem, b: Elem) -> Elem {
        match &self.table {
            Some(t) => t[a as usize * self.order() + b as usize] as Elem,
            None => self.mult_direct(a, b),
        }
    }

    #[inline]
    pub fn inv(&self, a: Elem) -> Elem {
        self.inv[a as usize]
    }

    pub fn pow(&self, a: Elem, e: u64) -> Elem {
        let mut acc = IDENTITY;
        let mut base = a;
        let mut e = e;
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mult(acc, base);
            }
            e >>= 1;
            if e > 0 {
                base = self.mult(base, base);
            }
        }
        acc
    }

    /// `[a, b] = a^-1 b^-1 a b`.
    pub fn commutator(&self, a: Elem, b: Elem) -> Elem {
        let ab = self.mult(a, b);
        let ai_bi = self.mult(self.inv(a), self.inv(b));
        self.mult(ai_bi, ab)
    }

    /// `g^-1 a g`.
    pub fn conjugate(&self, a: Elem, g: Elem) -> Elem {
        self.mult(self.mult(self.inv(g), a), g)
    }

    /// Left-normed `[[...[[a, b1], b2]...], bc]`.
    pub fn iterated_commutator(&self, a: Elem, bs: &[Elem]) -> Elem {
        bs.iter().fold(a, |acc, &b| self.commutator(acc, b))
    }

    /// Order of an element by repeated multiplication.
    pub fn element_order(&self, a: Elem) -> u64 {
        let mut n = 1;
        let mut x = a;
        while x != IDENTITY {
            x = self.mult(x, a);
            n += 1;
        }
        n
    }

    /// `e` with `|a| = p^e`, found by repeated p-th powering.
    pub fn element_order_exp(&self, a: Elem) -> u32 {
        let mut e = 0;
        let mut x = a;
        while x != IDENTITY {
            x = self.pow(x, self.p());
            e += 1;
        }
        e
    }

    pub fn is_abelian(&self) -> bool {
        self.generators.iter().all(|&a| {
            self.generators
                .iter()
                .all(|&b| self.mult(a, b) == self.mult(b, a))
        })
    }

    /// All invariants; special rank only when `|G|` is within `rank_budget`.
    pub fn invariants(&self, rank_budget: usize) -> Result<GroupInvariants> {
        let order_exp = self.order_exp()?;
        let whole = self.whole();
        let (_, cl) = self.lower_central_series()?;
        let (_, dl) = self.derived_series()?;
        let (_, center_exp) = self.upper_central_series()?;
        let sr = match self.special_rank(rank_budget) {
            Ok(r) => Some(r),
            Err(Error::BudgetExceeded { .. }) => None,
            Err(e) => return Err(e),
        };
        Ok(GroupInvariants {
            order_exp,
            d: self.min_generators(&whole)?,
            e: self.exponent(&whole),
            cl,
            dl,
            center_exp,
            sr,
            powerful: self.is_powerful()?,
        })
    }
}

#[cfg(test)]
pub(crate) mod fixtures {
    use super::*;

    pub fn m(md: ResidueModulus, rows: &[&[i64]]) -> ResidueMatrix {
        ResidueMatrix::from_rows(md, &rows.iter().map(|r| r.to_vec()).collect::<Vec<_>>()).unwrap()
    }

    /// `<a, b | a^2, aba = b^-3>`, order 16, via `a = diag(5,1)`, `b = [[1,1],[0,1]]` mod 8.
    pub fn order16() -> GroupTable {
        let md = ResidueModulus::new(2, 3).unwrap();
        GroupTable::close(
            &[m(md, &[&[5, 0], &[0, 1]]), m(md, &[&[1, 1], &[0, 1]])],
            1 << 16,
        )
        .unwrap()
    }

    /// `<a, b | a^3, a^-1 b a = b^-2>`, order 27, via `a = diag(4,1)` mod 9.
    pub fn order27() -> GroupTable {
        let md = ResidueModulus::new(3, 2).unwrap();
        GroupTable::close(
            &[m(md, &[&[4, 0], &[0, 1]]), m(md, &[&[1, 1], &[0, 1]])],
            1 << 16,
        )
        .unwrap()
    }

    pub fn dihedral8() -> GroupTable {
        let md = ResidueModulus::new(2, 2).unwrap();
        GroupTable::close(
            &[m(md, &[&[0, -1], &[1, 0]]), m(md, &[&[1, 0], &[0, -1]])],
            64,
        )
        .unwrap()
    }

    /// The `<X, Y, Z>` matrix group modulo `p^{l+2}`.
    pub fn lm(p: u64, l: u32) -> GroupTable {
        let md = ResidueModulus::new(p, l + 2).unwrap();
        let p = p as i64;
        let u = md.inv(md.reduce((1 - p) as i128)).unwrap() as i64;
        GroupTable::close(
            &[
                m(md, &[&[1, 0], &[0, 1 - p]]),
                m(md, &[&[u, p * u], &[0, 1]]),
                m(md, &[&[1, p], &[0, 1]]),
            ],
            1 << 20,
        )
        .unwrap()
    }

    /// Diagonal realization of `Z_{p^a1} + ... + Z_{p^ad}` for odd p.
    pub fn abelian(p: u64, alphas: &[u32]) -> GroupTable {
        let top = *alphas.iter().max().unwrap();
        let md = ResidueModulus::new(p, top + 1).unwrap();
        let n = alphas.len();
        let gens: Vec<ResidueMatrix> = alphas
            .iter()
            .enumerate()
            .map(|(i, &a)| {
                let x = md.pow(1 + p, p.pow(top - a)) as i64;
                let diag: Vec<i64> = (0..n).map(|j| if j == i { x } else { 1 }).collect();
                ResidueMatrix::diagonal(md, &diag).unwrap()
            })
            .collect();
        GroupTable::close(&gens, 1 << 16).unwrap()
    }
}
