//! Scalars and small square matrices over `Z/p^k`.
//!
//! Entries are always kept as least nonnegative residues, so equality and the
//! canonical byte encoding are pure functions of the value.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Largest supported modulus (exclusive).
pub const MODULUS_LIMIT: u64 = 1 << 32;

/// Largest supported matrix dimension.
pub const MAX_DIM: usize = 4;

pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut q = 2u64;
    while q * q <= n {
        if n.is_multiple_of(q) {
            return false;
        }
        q += 1;
    }
    true
}

/// The ring `Z/p^k`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct ResidueModulus {
    p: u64,
    k: u32,
    m: u64,
}

impl ResidueModulus {
    pub fn new(p: u64, k: u32) -> Result<Self> {
        if !is_prime(p) {
            return Err(Error::NotPrime(p));
        }
        if k == 0 {
            return Err(Error::InvalidModulus(1));
        }
        let mut m: u64 = 1;
        for _ in 0..k {
            m = m
                .checked_mul(p)
                .filter(|&m| m < MODULUS_LIMIT)
                .ok_or(Error::InvalidModulus(u64::MAX))?;
        }
        Ok(Self { p, k, m })
    }

    /// Recovers `(p, k)` from a modulus that must be a prime power.
    pub fn from_modulus(m: u64) -> Result<Self> {
        if !(2..MODULUS_LIMIT).contains(&m) {
            return Err(Error::InvalidModulus(m));
        }
        let p = (2..=m).find(|q| m.is_multiple_of(*q)).unwrap_or(m);
        let mut rest = m;
        let mut k = 0;
        while rest.is_multiple_of(p) {
            rest /= p;
            k += 1;
        }
        if rest != 1 {
            return Err(Error::InvalidModulus(m));
        }
        Ok(Self { p, k, m })
    }

    pub fn p(&self) -> u64 {
        self.p
    }

    pub fn k(&self) -> u32 {
        self.k
    }

    pub fn modulus(&self) -> u64 {
        self.m
    }

    pub fn reduce(&self, x: i128) -> u64 {
        x.rem_euclid(self.m as i128) as u64
    }

    pub fn add(&self, a: u64, b: u64) -> u64 {
        ((a as u128 + b as u128) % self.m as u128) as u64
    }

    pub fn mul(&self, a: u64, b: u64) -> u64 {
        ((a as u128 * b as u128) % self.m as u128) as u64
    }

    pub fn neg(&self, a: u64) -> u64 {
        if a == 0 {
            0
        } else {
            self.m - a
        }
    }

    pub fn is_unit(&self, a: u64) -> bool {
        !a.is_multiple_of(self.p)
    }

    /// Inverse of a unit by the extended Euclidean algorithm.
    pub fn inv(&self, a: u64) -> Result<u64> {
        if !self.is_unit(a) {
            return Err(Error::NonUnit(self.m));
        }
        let (mut r0, mut r1) = (self.m as i128, (a % self.m) as i128);
        let (mut t0, mut t1) = (0i128, 1i128);
        while r1 != 0 {
            let q = r0 / r1;
            (r0, r1) = (r1, r0 - q * r1);
            (t0, t1) = (t1, t0 - q * t1);
        }
        debug_assert_eq!(r0, 1);
        Ok(self.reduce(t0))
    }

    pub fn pow(&self, mut base: u64, mut e: u64) -> u64 {
        let mut acc = 1 % self.m;
        base %= self.m;
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(acc, base);
            }
            base = self.mul(base, base);
            e >>= 1;
        }
        acc
    }
}

/// Square matrix over `Z/p^k`, stored row-major.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct ResidueMatrix {
    modulus: ResidueModulus,
    n: usize,
    entries: Vec<u64>,
}

impl fmt::Debug for ResidueMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?} mod {}", self.rows(), self.modulus.m)
    }
}

impl fmt::Display for ResidueMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for (i, row) in self.rows().iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{row:?}")?;
        }
        write!(f, "] mod {}", self.modulus.m)
    }
}

impl ResidueMatrix {
    pub fn identity(modulus: ResidueModulus, n: usize) -> Self {
        let mut entries = vec![0; n * n];
        for i in 0..n {
            entries[i * n + i] = 1 % modulus.m;
        }
        Self {
            modulus,
            n,
            entries,
        }
    }

    /// Builds a matrix from signed integer rows, reducing every entry.
    pub fn from_rows(modulus: ResidueModulus, rows: &[Vec<i64>]) -> Result<Self> {
        let n = rows.len();
        if n == 0 || n > MAX_DIM {
            return Err(Error::DimensionUnsupported(n));
        }
        let mut entries = Vec::with_capacity(n * n);
        for row in rows {
            if row.len() != n {
                return Err(Error::DimensionMismatch(n, row.len()));
            }
            entries.extend(row.iter().map(|&x| modulus.reduce(x as i128)));
        }
        Ok(Self {
            modulus,
            n,
            entries,
        })
    }

    pub fn diagonal(modulus: ResidueModulus, diag: &[i64]) -> Result<Self> {
        let n = diag.len();
        let rows: Vec<Vec<i64>> = (0..n)
            .map(|i| (0..n).map(|j| if i == j { diag[i] } else { 0 }).collect())
            .collect();
        Self::from_rows(modulus, &rows)
    }

    pub(crate) fn from_raw(modulus: ResidueModulus, n: usize, entries: Vec<u64>) -> Self {
        debug_assert_eq!(entries.len(), n * n);
        Self {
            modulus,
            n,
            entries,
        }
    }

    pub fn modulus(&self) -> ResidueModulus {
        self.modulus
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn entries(&self) -> &[u64] {
        &self.entries
    }

    pub fn get(&self, i: usize, j: usize) -> u64 {
        self.entries[i * self.n + j]
    }

    pub fn rows(&self) -> Vec<Vec<u64>> {
        self.entries.chunks(self.n).map(|r| r.to_vec()).collect()
    }

    pub fn is_identity(&self) -> bool {
        *self == Self::identity(self.modulus, self.n)
    }

    fn check_shape(&self, other: &Self) -> Result<()> {
        if self.modulus != other.modulus {
            return Err(Error::ModulusMismatch(self.modulus.m, other.modulus.m));
        }
        if self.n != other.n {
            return Err(Error::DimensionMismatch(self.n, other.n));
        }
        Ok(())
    }

    pub fn mat_mul(&self, other: &Self) -> Result<Self> {
        self.check_shape(other)?;
        Ok(self.mul_unchecked(other))
    }

    pub(crate) fn mul_unchecked(&self, other: &Self) -> Self {
        let mut out = vec![0; self.n * self.n];
        mul_into(
            self.modulus.m,
            self.n,
            &self.entries,
            &other.entries,
            &mut out,
        );
        Self::from_raw(self.modulus, self.n, out)
    }

    /// Determinant by cofactor expansion (dimensions up to 4).
    pub fn det(&self) -> u64 {
        let rows: Vec<Vec<u64>> = self.rows();
        det_cofactor(&self.modulus, &rows)
    }

    pub fn is_invertible(&self) -> bool {
        self.modulus.is_unit(self.det())
    }

    /// Gauss-Jordan inverse, pivoting on unit entries.
    pub fn mat_inv(&self) -> Result<Self> {
        if !self.is_invertible() {
            return Err(Error::NonUnit(self.modulus.m));
        }
        let md = &self.modulus;
        let n = self.n;
        let mut a = self.rows();
        let mut b = Self::identity(*md, n).rows();
        for col in 0..n {
            let pivot = (col..n)
                .find(|&r| md.is_unit(a[r][col]))
                .ok_or(Error::NonUnit(md.m))?;
            a.swap(col, pivot);
            b.swap(col, pivot);
            let s = md.inv(a[col][col])?;
            for j in 0..n {
                a[col][j] = md.mul(a[col][j], s);
                b[col][j] = md.mul(b[col][j], s);
            }
            for r in 0..n {
                if r == col || a[r][col] == 0 {
                    continue;
                }
                let f = md.neg(a[r][col]);
                for j in 0..n {
                    a[r][j] = md.add(a[r][j], md.mul(f, a[col][j]));
                    b[r][j] = md.add(b[r][j], md.mul(f, b[col][j]));
                }
            }
        }
        Ok(Self::from_raw(*md, n, b.concat()))
    }

    /// Square-and-multiply; negative exponents go through the inverse.
    pub fn mat_pow(&self, e: i64) -> Result<Self> {
        let base = if e < 0 { self.mat_inv()? } else { self.clone() };
        Ok(base.pow_unsigned(e.unsigned_abs()))
    }

    pub(crate) fn pow_unsigned(&self, mut e: u64) -> Self {
        let mut acc = Self::identity(self.modulus, self.n);
        let mut base = self.clone();
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul_unchecked(&base);
            }
            e >>= 1;
            if e > 0 {
                base = base.mul_unchecked(&base);
            }
        }
        acc
    }

    /// Least `e >= 1` with `A^e = I`, searched up to `cap`.
    pub fn element_order(&self, cap: u64) -> Result<u64> {
        if !self.is_invertible() {
            return Err(Error::NonUnit(self.modulus.m));
        }
        let id = Self::identity(self.modulus, self.n);
        let mut acc = self.clone();
        for e in 1..=cap {
            if acc == id {
                return Ok(e);
            }
            acc = acc.mul_unchecked(self);
        }
        Err(Error::OrderCapExceeded(cap))
    }

    /// Row-major, 4-byte little-endian entries.
    pub fn canonical_encode(&self) -> Vec<u8> {
        let mut out = vec![0u8; self.entries.len() * 4];
        encode_into(&self.entries, &mut out);
        out
    }

    /// Commutator `a^-1 b^-1 a b`.
    pub fn commutator(&self, other: &Self) -> Result<Self> {
        self.check_shape(other)?;
        let ai = self.mat_inv()?;
        let bi = other.mat_inv()?;
        Ok(ai
            .mul_unchecked(&bi)
            .mul_unchecked(&self.mul_unchecked(other)))
    }
}

pub(crate) fn mul_into(m: u64, n: usize, a: &[u64], b: &[u64], out: &mut [u64]) {
    for i in 0..n {
        for j in 0..n {
            let mut acc: u128 = 0;
            for l in 0..n {
                acc += a[i * n + l] as u128 * b[l * n + j] as u128;
            }
            out[i * n + j] = (acc % m as u128) as u64;
        }
    }
}

pub(crate) fn encode_into(entries: &[u64], out: &mut [u8]) {
    for (chunk, &x) in out.chunks_exact_mut(4).zip(entries) {
        chunk.copy_from_slice(&(x as u32).to_le_bytes());
    }
}

fn det_cofactor(md: &ResidueModulus, rows: &[Vec<u64>]) -> u64 {
    let n = rows.len();
    match n {
        1 => rows[0][0],
        2 => md.add(
            md.mul(rows[0][0], rows[1][1]),
            md.neg(md.mul(rows[0][1], rows[1][0])),
        ),
        _ => {
            let mut acc = 0;
            for (j, &a) in rows[0].iter().enumerate() {
                if a == 0 {
                    continue;
                }
                let minor: Vec<Vec<u64>> = rows[1..]
                    .iter()
                    .map(|r| {
                        r.iter()
                            .enumerate()
                            .filter(|&(c, _)| c != j)
                            .map(|(_, &x)| x)
                            .collect()
                    })
                    .collect();
                let term = md.mul(a, det_cofactor(md, &minor));
                acc = if j % 2 == 0 {
                    md.add(acc, term)
                } else {
                    md.add(acc, md.neg(term))
                };
            }
            acc
        }
    }
}
