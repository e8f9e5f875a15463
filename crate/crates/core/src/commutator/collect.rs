use std::sync::OnceLock;

use num_bigint::BigInt;
use num_traits::{One, Signed, ToPrimitive, Zero};

use super::basic::HallBasis;
use super::magnus::MagnusBasis;
use crate::error::{Error, Result};

pub const MAX_LETTERS: usize = 4;
pub const MAX_CLASS: u32 = 5;
pub const BASIS_CAP: usize = 500;

/// Element of `F/γ_{c+1}(F)` as the exponent vector of its normal form
/// `b_1^{e_1} b_2^{e_2} ... b_n^{e_n}` over the Hall basis.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct FreeNilpotentElement {
    exponents: Vec<BigInt>,
}

impl FreeNilpotentElement {
    pub fn exponents(&self) -> &[BigInt] {
        &self.exponents
    }

    pub fn is_identity(&self) -> bool {
        self.exponents.iter().all(Zero::is_zero)
    }

    /// Positions with nonzero exponent.
    pub fn support(&self) -> Vec<usize> {
        (0..self.exponents.len())
            .filter(|&i| !self.exponents[i].is_zero())
            .collect()
    }
}

// Sparse image of a basis element under a conjugation.
type Image = Vec<(usize, BigInt)>;

struct Conjugation {
    by: Vec<Image>,
    by_inverse: Vec<Image>,
}

/// Free nilpotent group of class `c` on `d` letters with collection from the
/// left. Conjugation rules `b_j^{b_k^{±1}}` are derived on first use through
/// the Magnus embedding and cached.
pub struct FreeNilpotentContext {
    basis: HallBasis,
    magnus: MagnusBasis,
    // For position k, the first position whose commutator with b_k is trivial.
    limits: Vec<usize>,
    rules: Vec<OnceLock<Conjugation>>,
}

impl std::fmt::Debug for FreeNilpotentContext {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("FreeNilpotentContext")
            .field("letters", &self.letters())
            .field("class", &self.class())
            .field("basis_len", &self.basis.len())
            .finish()
    }
}

impl FreeNilpotentContext {
    pub fn new(letters: usize, class: u32) -> Result<Self> {
        Self::with_caps(letters, class, MAX_LETTERS, MAX_CLASS, BASIS_CAP)
    }

    pub fn with_caps(
        letters: usize,
        class: u32,
        max_letters: usize,
        max_class: u32,
        basis_cap: usize,
    ) -> Result<Self> {
        if letters == 0 || letters > max_letters {
            return Err(Error::InvalidParameters(format!(
                "letters must be in 1..={max_letters}, got {letters}"
            )));
        }
        if class == 0 || class > max_class {
            return Err(Error::InvalidParameters(format!(
                "class must be in 1..={max_class}, got {class}"
            )));
        }
        let basis = HallBasis::with_cap(letters, class, basis_cap)?;
        let limits = basis
            .items()
            .iter()
            .map(|b| basis.weight_range(class - b.weight).end.max(b.ord + 1))
            .collect();
        let rules = (0..basis.len()).map(|_| OnceLock::new()).collect();
        Ok(Self {
            magnus: MagnusBasis::new(basis.clone()),
            basis,
            limits,
            rules,
        })
    }

    pub fn letters(&self) -> usize {
        self.basis.letters()
    }

    pub fn class(&self) -> u32 {
        self.basis.max_weight()
    }

    pub fn basis(&self) -> &HallBasis {
        &self.basis
    }

    pub fn identity(&self) -> FreeNilpotentElement {
        FreeNilpotentElement {
            exponents: vec![BigInt::zero(); self.basis.len()],
        }
    }

    pub fn basis_element(&self, ord: usize) -> FreeNilpotentElement {
        let mut e = self.identity();
        e.exponents[ord] = BigInt::one();
        e
    }

    /// The letter `x_{i+1}`.
    pub fn generator(&self, i: usize) -> FreeNilpotentElement {
        self.basis_element(i)
    }

    pub fn from_exponents(&self, exponents: Vec<BigInt>) -> Result<FreeNilpotentElement> {
        if exponents.len() != self.basis.len() {
            return Err(Error::DimensionMismatch(exponents.len(), self.basis.len()));
        }
        Ok(FreeNilpotentElement { exponents })
    }

    /// Word in signed 1-based letters: `2` is `x_2`, `-1` is `x_1^{-1}`.
    pub fn from_word(&self, word: &[i64]) -> Result<FreeNilpotentElement> {
        let mut acc = self.identity();
        for &l in word {
            let i = l.unsigned_abs() as usize;
            if i == 0 || i > self.letters() {
                return Err(Error::InvalidParameters(format!("letter {l} out of range")));
            }
            let mut ex = acc.exponents;
            self.mul_basis_power(&mut ex, i - 1, &BigInt::from(l.signum()));
            acc = FreeNilpotentElement { exponents: ex };
        }
        Ok(acc)
    }

    pub fn multiply(
        &self,
        u: &FreeNilpotentElement,
        v: &FreeNilpotentElement,
    ) -> FreeNilpotentElement {
        let mut out = u.exponents.clone();
        self.mul_into(&mut out, &v.exponents);
        FreeNilpotentElement { exponents: out }
    }

    pub fn inverse(&self, u: &FreeNilpotentElement) -> FreeNilpotentElement {
        FreeNilpotentElement {
            exponents: self.inv_raw(&u.exponents),
        }
    }

    pub fn power(&self, u: &FreeNilpotentElement, alpha: &BigInt) -> FreeNilpotentElement {
        FreeNilpotentElement {
            exponents: self.pow_raw(&u.exponents, alpha),
        }
    }

    /// `[u, v] = u^{-1} v^{-1} u v`.
    pub fn commutator(
        &self,
        u: &FreeNilpotentElement,
        v: &FreeNilpotentElement,
    ) -> FreeNilpotentElement {
        let mut out = self.inv_raw(&u.exponents);
        self.mul_into(&mut out, &self.inv_raw(&v.exponents));
        self.mul_into(&mut out, &u.exponents);
        self.mul_into(&mut out, &v.exponents);
        FreeNilpotentElement { exponents: out }
    }

    /// Left-normed `[u, v_1, ..., v_k]`.
    pub fn iterated_commutator(
        &self,
        u: &FreeNilpotentElement,
        vs: &[FreeNilpotentElement],
    ) -> FreeNilpotentElement {
        vs.iter().fold(u.clone(), |acc, v| self.commutator(&acc, v))
    }

    /// Evaluates the basic commutator `b_ord` as a bracket of letters.
    pub fn evaluate_basic(&self, ord: usize) -> FreeNilpotentElement {
        match self.basis.get(ord).shape {
            super::basic::Shape::Leaf(i) => self.generator(i),
            super::basic::Shape::Pair(u, v) => {
                self.commutator(&self.evaluate_basic(u), &self.evaluate_basic(v))
            }
        }
    }

    fn rules(&self, k: usize) -> &Conjugation {
        self.rules[k].get_or_init(|| {
            let a = &self.magnus.algebra;
            let (bk, bk_inv) = self.magnus.image(k);
            let image = |j: usize, left: &[i128], right: &[i128]| -> Image {
                let m = a.mul(&a.mul(left, &self.magnus.image(j).0), right);
                let exps = self
                    .magnus
                    .decompose(&m)
                    .expect("conjugate of a basis element lies in the group");
                exps.into_iter()
                    .enumerate()
                    .filter(|&(_, e)| e != 0)
                    .map(|(i, e)| (i, BigInt::from(e)))
                    .collect()
            };
            let range = k + 1..self.limits[k];
            Conjugation {
                by: range.clone().map(|j| image(j, bk_inv, bk)).collect(),
                by_inverse: range.map(|j| image(j, bk, bk_inv)).collect(),
            }
        })
    }

    fn mul_into(&self, u: &mut [BigInt], v: &[BigInt]) {
        for (k, e) in v.iter().enumerate() {
            if !e.is_zero() {
                self.mul_basis_power(u, k, e);
            }
        }
    }

    /// `u <- u · b_k^e`: the tail after `k` moves past `b_k^e` and is conjugated.
    fn mul_basis_power(&self, u: &mut [BigInt], k: usize, e: &BigInt) {
        if e.is_zero() {
            return;
        }
        let lim = self.limits[k];
        if u[k + 1..lim].iter().all(Zero::is_zero) {
            u[k] += e;
            return;
        }
        let n = u.len();
        let mut low = vec![BigInt::zero(); n];
        for j in k + 1..lim {
            std::mem::swap(&mut low[j], &mut u[j]);
        }
        let mut high = vec![BigInt::zero(); n];
        for j in lim..n {
            std::mem::swap(&mut high[j], &mut u[j]);
        }
        let mut tail = self.conjugate_tail(k, e, &low);
        self.mul_into(&mut tail, &high);
        u[k] += e;
        for j in k + 1..n {
            std::mem::swap(&mut u[j], &mut tail[j]);
        }
    }

    // φ_k^e(t) for t supported strictly between k and limits[k], where
    // φ_k is conjugation by b_k.
    fn conjugate_tail(&self, k: usize, e: &BigInt, t: &[BigInt]) -> Vec<BigInt> {
        let rules = self.rules(k);
        let (images, steps) = if e.is_positive() {
            (&rules.by, e.clone())
        } else {
            (&rules.by_inverse, -e)
        };
        match steps.to_u32() {
            Some(s) if s <= 8 => {
                let mut cur = t.to_vec();
                for _ in 0..s {
                    cur = self.apply_images(k, images, &cur);
                }
                cur
            }
            _ => {
                let aut = self.power_automorphism(k, images, &steps);
                self.apply_images(k, &aut, t)
            }
        }
    }

    fn apply_images(&self, k: usize, images: &[Image], t: &[BigInt]) -> Vec<BigInt> {
        let n = t.len();
        let lim = self.limits[k];
        let mut out = vec![BigInt::zero(); n];
        for j in k + 1..n {
            if t[j].is_zero() {
                continue;
            }
            if j >= lim {
                self.mul_basis_power(&mut out, j, &t[j]);
                continue;
            }
            let img = &images[j - k - 1];
            let mut single = vec![BigInt::zero(); n];
            for (i, x) in img {
                single[*i] = x.clone();
            }
            let powered = self.pow_raw(&single, &t[j]);
            self.mul_into(&mut out, &powered);
        }
        out
    }

    fn compose_images(&self, k: usize, outer: &[Image], inner: &[Image]) -> Vec<Image> {
        let n = self.basis.len();
        inner
            .iter()
            .map(|img| {
                let mut dense = vec![BigInt::zero(); n];
                for (i, x) in img {
                    dense[*i] = x.clone();
                }
                let out = self.apply_images(k, outer, &dense);
                out.into_iter()
                    .enumerate()
                    .filter(|(_, x)| !x.is_zero())
                    .collect()
            })
            .collect()
    }

    fn power_automorphism(&self, k: usize, images: &[Image], steps: &BigInt) -> Vec<Image> {
        let identity: Vec<Image> = (k + 1..self.limits[k])
            .map(|j| vec![(j, BigInt::one())])
            .collect();
        let mut acc = identity;
        let mut base = images.to_vec();
        let mut n = steps.clone();
        let two = BigInt::from(2);
        while n.is_positive() {
            if (&n % &two).is_one() {
                acc = self.compose_images(k, &base, &acc);
            }
            n /= &two;
            if n.is_positive() {
                base = self.compose_images(k, &base, &base);
            }
        }
        acc
    }

    fn inv_raw(&self, u: &[BigInt]) -> Vec<BigInt> {
        let mut out = vec![BigInt::zero(); u.len()];
        for m in (0..u.len()).rev() {
            if !u[m].is_zero() {
                self.mul_basis_power(&mut out, m, &-&u[m]);
            }
        }
        out
    }

    fn pow_raw(&self, u: &[BigInt], alpha: &BigInt) -> Vec<BigInt> {
        let support: Vec<usize> = (0..u.len()).filter(|&i| !u[i].is_zero()).collect();
        let mut out = vec![BigInt::zero(); u.len()];
        if alpha.is_zero() || support.is_empty() {
            return out;
        }
        if support.len() == 1 {
            out[support[0]] = &u[support[0]] * alpha;
            return out;
        }
        let mut base = if alpha.is_negative() {
            self.inv_raw(u)
        } else {
            u.to_vec()
        };
        let mut n = alpha.abs();
        let two = BigInt::from(2);
        while n.is_positive() {
            if (&n % &two).is_one() {
                self.mul_into(&mut out, &base);
            }
            n /= &two;
            if n.is_positive() {
                let b2 = base.clone();
                self.mul_into(&mut base, &b2);
            }
        }
        out
    }

    /// Magnus image of a normal form; exponents must fit in `i128`.
    #[cfg(test)]
    pub(crate) fn magnus_image(&self, u: &FreeNilpotentElement) -> Vec<i128> {
        let exps: Vec<i128> = u
            .exponents
            .iter()
            .map(|x| x.to_i128().expect("small exponents"))
            .collect();
        self.magnus.compose(&exps)
    }

    #[cfg(test)]
    pub(crate) fn magnus_word(&self, word: &[i64]) -> Vec<i128> {
        let a = &self.magnus.algebra;
        word.iter().fold(a.one(), |acc, &l| {
            let (m, mi) = self.magnus.image(l.unsigned_abs() as usize - 1);
            a.mul(&acc, if l > 0 { m } else { mi })
        })
    }
}
