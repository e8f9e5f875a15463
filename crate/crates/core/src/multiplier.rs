//! Closed-form c-nilpotent multipliers and a small catalog of known ones.

use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::commutator::witt;
use crate::error::{Error, Result};
use crate::residue::is_prime;

/// `Z_{p^{α_1}} ⊕ ... ⊕ Z_{p^{α_d}}` with `α_1 >= ... >= α_d >= 1`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct AbelianPGroup {
    p: u64,
    alphas: Vec<u32>,
}

/// `(order_exp, d, e)`: `|M| = p^order_exp`, `d(M)`, `exp(M) = p^e`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct StructureInvariants {
    pub order_exp: u64,
    pub d: u64,
    pub e: u32,
}

impl AbelianPGroup {
    /// Sorts `alphas` into non-increasing order. Zero exponents are dropped.
    pub fn new(p: u64, mut alphas: Vec<u32>) -> Result<Self> {
        if !is_prime(p) {
            return Err(Error::NotPrime(p));
        }
        alphas.retain(|&a| a > 0);
        alphas.sort_unstable_by(|a, b| b.cmp(a));
        Ok(Self { p, alphas })
    }

    pub fn trivial(p: u64) -> Result<Self> {
        Self::new(p, Vec::new())
    }

    pub fn p(&self) -> u64 {
        self.p
    }

    pub fn alphas(&self) -> &[u32] {
        &self.alphas
    }

    pub fn is_trivial(&self) -> bool {
        self.alphas.is_empty()
    }

    pub fn structure_invariants(&self) -> StructureInvariants {
        StructureInvariants {
            order_exp: self.alphas.iter().map(|&a| u64::from(a)).sum(),
            d: self.alphas.len() as u64,
            e: self.alphas.first().copied().unwrap_or(0),
        }
    }

    /// `α_i` for `1 <= i <= d`, else 0.
    pub fn alpha(&self, i: usize) -> u32 {
        i.checked_sub(1)
            .and_then(|j| self.alphas.get(j))
            .copied()
            .unwrap_or(0)
    }

    fn with_copies(p: u64, parts: impl IntoIterator<Item = (u32, u64)>) -> Result<Self> {
        let mut alphas = Vec::new();
        for (alpha, copies) in parts {
            let copies = usize::try_from(copies)
                .map_err(|_| Error::InvalidParameters("multiplier rank too large".into()))?;
            alphas.extend(std::iter::repeat_n(alpha, copies));
        }
        Self::new(p, alphas)
    }
}

impl std::fmt::Display for AbelianPGroup {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        if self.alphas.is_empty() {
            return write!(f, "1");
        }
        let mut first = true;
        let mut i = 0;
        while i < self.alphas.len() {
            let a = self.alphas[i];
            let run = self.alphas[i..].iter().take_while(|&&x| x == a).count();
            if !first {
                write!(f, " + ")?;
            }
            write!(f, "Z_{}^{}", self.p, a)?;
            if run > 1 {
                write!(f, " x{run}")?;
            }
            first = false;
            i += run;
        }
        Ok(())
    }
}

/// `M^(c)(G)` for finite abelian `G`: with `b_i = χ_{c+1}(i)`, the factor
/// `Z_{p^{α_i}}` occurs `b_i - b_{i-1}` times for `i >= 2`.
pub fn abelian_multiplier(g: &AbelianPGroup, c: u32) -> Result<AbelianPGroup> {
    if c == 0 {
        return Err(Error::InvalidParameters("c must be at least 1".into()));
    }
    let b = |i: usize| witt(i as u64, c + 1);
    let parts = (2..=g.alphas.len()).map(|i| (g.alpha(i), b(i) - b(i - 1)));
    AbelianPGroup::with_copies(g.p, parts)
}

/// `M^(c)(P_{s,t}) = Z_{p^s}^{(χ_{c+1}(d))} ⊕ Z_{p^t}^{(χ_{c+2}(d))}` for the
/// class-two group `P_{s,t}` on `d` generators.
pub fn pst_multiplier(p: u64, d: u32, s: u32, t: u32, c: u32) -> Result<AbelianPGroup> {
    validate_pst(p, d, s, t)?;
    if c == 0 {
        return Err(Error::InvalidParameters("c must be at least 1".into()));
    }
    AbelianPGroup::with_copies(p, [(s, witt(d.into(), c + 1)), (t, witt(d.into(), c + 2))])
}

pub(crate) fn validate_pst(p: u64, d: u32, s: u32, t: u32) -> Result<()> {
    if !is_prime(p) || p == 2 {
        return Err(Error::InvalidParameters(format!(
            "p must be an odd prime, got {p}"
        )));
    }
    if d < 2 {
        return Err(Error::InvalidParameters(format!(
            "d must be at least 2, got {d}"
        )));
    }
    if t == 0 || s < t {
        return Err(Error::InvalidParameters(format!(
            "need s >= t >= 1, got s = {s}, t = {t}"
        )));
    }
    Ok(())
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CatalogEntry {
    pub family_key: String,
    pub c: u32,
    pub p: u64,
    pub alphas: Vec<u32>,
    pub source: String,
}

impl CatalogEntry {
    pub fn multiplier(&self) -> Result<AbelianPGroup> {
        AbelianPGroup::new(self.p, self.alphas.clone())
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Catalog {
    entries: Vec<CatalogEntry>,
}

const BUILTIN_CATALOG: &str = include_str!("../data/catalog.json");

impl Catalog {
    pub fn builtin() -> Self {
        Self::from_json(BUILTIN_CATALOG).expect("bundled catalog is valid")
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let entries: Vec<CatalogEntry> =
            serde_json::from_str(text).map_err(|e| Error::Catalog(e.to_string()))?;
        for (i, e) in entries.iter().enumerate() {
            e.multiplier()?;
            if entries[..i]
                .iter()
                .any(|o| o.family_key == e.family_key && o.c == e.c)
            {
                return Err(Error::Catalog(format!(
                    "duplicate entry for {:?} with c = {}",
                    e.family_key, e.c
                )));
            }
        }
        Ok(Self { entries })
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| Error::Catalog(format!("{}: {e}", path.display())))?;
        Self::from_json(&text)
    }

    pub fn entries(&self) -> &[CatalogEntry] {
        &self.entries
    }

    pub fn lookup(&self, family_key: &str, c: u32) -> Result<&CatalogEntry> {
        self.entries
            .iter()
            .find(|e| e.family_key == family_key && e.c == c)
            .ok_or_else(|| Error::NotInCatalog {
                family: family_key.to_string(),
                c,
            })
    }
}

/// Lookup in the bundled catalog.
pub fn catalog_lookup(family_key: &str, c: u32) -> Result<CatalogEntry> {
    Catalog::builtin().lookup(family_key, c).cloned()
}
