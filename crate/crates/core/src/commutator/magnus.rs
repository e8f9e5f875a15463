//! Truncated Magnus embedding `x_i -> 1 + X_i` of the free nilpotent group of
//! class `c` into the free associative ring truncated above degree `c`. The map
//! is faithful modulo `γ_{c+1}`, so it gives an exact ground truth for
//! collection rules and for cross-checking collected normal forms.

use std::sync::OnceLock;

use super::basic::{HallBasis, Shape};
use crate::error::{Error, Result};

/// Dense series, one block per degree; block `s` holds `d^s` coefficients
/// indexed by the base-`d` spelling of the word.
pub(crate) type Series = Vec<i128>;

// Prime used to pick pivots and solve; answers are then checked exactly.
const P: u128 = (1 << 61) - 1;

pub(crate) struct Algebra {
    c: usize,
    offsets: Vec<usize>,
    dims: Vec<usize>,
}

impl Algebra {
    pub(crate) fn new(d: usize, c: u32) -> Self {
        let c = c as usize;
        let mut offsets = Vec::with_capacity(c + 2);
        let mut dims = Vec::with_capacity(c + 1);
        let mut at = 0;
        let mut dim = 1;
        for _ in 0..=c {
            offsets.push(at);
            dims.push(dim);
            at += dim;
            dim *= d;
        }
        offsets.push(at);
        Self { c, offsets, dims }
    }

    fn len(&self) -> usize {
        self.offsets[self.c + 1]
    }

    pub(crate) fn one(&self) -> Series {
        let mut s = vec![0; self.len()];
        s[0] = 1;
        s
    }

    pub(crate) fn letter(&self, i: usize) -> Series {
        let mut s = self.one();
        if self.c >= 1 {
            s[self.offsets[1] + i] = 1;
        }
        s
    }

    pub(crate) fn block<'a>(&self, s: &'a [i128], deg: usize) -> &'a [i128] {
        &s[self.offsets[deg]..self.offsets[deg + 1]]
    }

    pub(crate) fn mul(&self, a: &[i128], b: &[i128]) -> Series {
        let mut out = vec![0i128; self.len()];
        for sa in 0..=self.c {
            let ba = self.block(a, sa);
            if ba.iter().all(|&x| x == 0) {
                continue;
            }
            for sb in 0..=self.c - sa {
                let bb = self.block(b, sb);
                let base = self.offsets[sa + sb];
                let stride = self.dims[sb];
                for (i, &x) in ba.iter().enumerate() {
                    if x == 0 {
                        continue;
                    }
                    let row = base + i * stride;
                    for (j, &y) in bb.iter().enumerate() {
                        if y != 0 {
                            let t = x.checked_mul(y).expect("Magnus coefficient overflow");
                            out[row + j] = out[row + j]
                                .checked_add(t)
                                .expect("Magnus coefficient overflow");
                        }
                    }
                }
            }
        }
        out
    }

    /// Inverse of `1 + N` as `Σ (-N)^k`.
    pub(crate) fn inv(&self, a: &[i128]) -> Series {
        debug_assert_eq!(a[0], 1);
        let mut neg_n: Series = a.iter().map(|&x| -x).collect();
        neg_n[0] = 0;
        let mut out = self.one();
        let mut term = self.one();
        for _ in 0..self.c {
            term = self.mul(&term, &neg_n);
            for (o, t) in out.iter_mut().zip(&term) {
                *o += t;
            }
        }
        out
    }

    pub(crate) fn pow(&self, a: &[i128], e: i128) -> Series {
        let mut base = if e < 0 { self.inv(a) } else { a.to_vec() };
        let mut n = e.unsigned_abs();
        let mut acc = self.one();
        while n > 0 {
            if n & 1 == 1 {
                acc = self.mul(&acc, &base);
            }
            n >>= 1;
            if n > 0 {
                base = self.mul(&base, &base);
            }
        }
        acc
    }

    #[cfg(test)]
    pub(crate) fn commutator(&self, a: &[i128], b: &[i128]) -> Series {
        let ai = self.inv(a);
        let bi = self.inv(b);
        self.mul(&self.mul(&ai, &bi), &self.mul(a, b))
    }
}

/// Per-weight solver: pivot words on which the leading parts of the basic
/// commutators of that weight form an invertible square matrix mod `P`.
struct WeightSolver {
    pivots: Vec<usize>,
    inverse: Vec<Vec<u128>>,
}

pub(crate) struct MagnusBasis {
    pub(crate) algebra: Algebra,
    basis: HallBasis,
    images: Vec<OnceLock<(Series, Series)>>,
    solvers: Vec<OnceLock<WeightSolver>>,
}

fn mod_p(x: i128) -> u128 {
    x.rem_euclid(P as i128) as u128
}

fn mul_mod(a: u128, b: u128) -> u128 {
    a * b % P
}

fn inv_mod(a: u128) -> u128 {
    let mut r = 1u128;
    let mut b = a % P;
    let mut e = P - 2;
    while e > 0 {
        if e & 1 == 1 {
            r = mul_mod(r, b);
        }
        b = mul_mod(b, b);
        e >>= 1;
    }
    r
}

fn lift(x: u128) -> i128 {
    if x > P / 2 {
        x as i128 - P as i128
    } else {
        x as i128
    }
}

impl MagnusBasis {
    pub(crate) fn new(basis: HallBasis) -> Self {
        let algebra = Algebra::new(basis.letters(), basis.max_weight());
        let images = (0..basis.len()).map(|_| OnceLock::new()).collect();
        let solvers = (0..=basis.max_weight()).map(|_| OnceLock::new()).collect();
        Self {
            algebra,
            basis,
            images,
            solvers,
        }
    }

    /// Image of `b_ord` and of its inverse.
    pub(crate) fn image(&self, ord: usize) -> &(Series, Series) {
        self.images[ord].get_or_init(|| {
            let a = &self.algebra;
            let m = match self.basis.get(ord).shape {
                Shape::Leaf(i) => a.letter(i),
                Shape::Pair(u, v) => {
                    let (mu, mu_inv) = self.image(u);
                    let (mv, mv_inv) = self.image(v);
                    a.mul(&a.mul(mu_inv, mv_inv), &a.mul(mu, mv))
                }
            };
            let inv = a.inv(&m);
            (m, inv)
        })
    }

    fn solver(&self, w: u32) -> &WeightSolver {
        self.solvers[w as usize].get_or_init(|| {
            let range = self.basis.weight_range(w);
            let cols: Vec<&[i128]> = range
                .clone()
                .map(|o| self.algebra.block(&self.image(o).0, w as usize))
                .collect();
            let k = cols.len();
            let words = self.algebra.dims[w as usize];
            // Row-reduce the k x words matrix (one row per commutator) to find pivot words.
            let mut rows: Vec<Vec<u128>> = cols
                .iter()
                .map(|c| c.iter().map(|&x| mod_p(x)).collect())
                .collect();
            let mut pivots = Vec::with_capacity(k);
            let mut r = 0;
            for col in 0..words {
                if r == k {
                    break;
                }
                let Some(sel) = (r..k).find(|&i| rows[i][col] != 0) else {
                    continue;
                };
                rows.swap(r, sel);
                let iv = inv_mod(rows[r][col]);
                for x in rows[r].iter_mut() {
                    *x = mul_mod(*x, iv);
                }
                for i in 0..k {
                    if i != r && rows[i][col] != 0 {
                        let f = rows[i][col];
                        for j in 0..words {
                            let t = mul_mod(f, rows[r][j]);
                            rows[i][j] = (rows[i][j] + P - t) % P;
                        }
                    }
                }
                pivots.push(col);
                r += 1;
            }
            assert_eq!(
                pivots.len(),
                k,
                "basic commutator images are not independent"
            );
            // Invert S[pivot][commutator] mod P by Gauss-Jordan.
            let mut aug: Vec<Vec<u128>> = pivots
                .iter()
                .enumerate()
                .map(|(i, &pw)| {
                    let mut row: Vec<u128> = cols.iter().map(|c| mod_p(c[pw])).collect();
                    row.extend((0..k).map(|j| u128::from(i == j)));
                    row
                })
                .collect();
            for col in 0..k {
                let sel = (col..k)
                    .find(|&i| aug[i][col] != 0)
                    .expect("pivot submatrix is singular");
                aug.swap(col, sel);
                let iv = inv_mod(aug[col][col]);
                for x in aug[col].iter_mut() {
                    *x = mul_mod(*x, iv);
                }
                for i in 0..k {
                    if i != col && aug[i][col] != 0 {
                        let f = aug[i][col];
                        for j in 0..2 * k {
                            let t = mul_mod(f, aug[col][j]);
                            aug[i][j] = (aug[i][j] + P - t) % P;
                        }
                    }
                }
            }
            let inverse = aug.into_iter().map(|row| row[k..].to_vec()).collect();
            WeightSolver { pivots, inverse }
        })
    }

    /// Normal-form exponents of the group element whose image is `m`.
    pub(crate) fn decompose(&self, m: &[i128]) -> Result<Vec<i128>> {
        let a = &self.algebra;
        let mut exps = vec![0i128; self.basis.len()];
        let mut rest = m.to_vec();
        if rest[0] != 1 {
            return Err(Error::InvalidParameters("not a group element image".into()));
        }
        for w in 1..=self.basis.max_weight() {
            let comp = a.block(&rest, w as usize).to_vec();
            if comp.iter().all(|&x| x == 0) {
                continue;
            }
            let range = self.basis.weight_range(w);
            let solver = self.solver(w);
            let rhs: Vec<u128> = solver.pivots.iter().map(|&pw| mod_p(comp[pw])).collect();
            let sol: Vec<i128> = solver
                .inverse
                .iter()
                .map(|row| {
                    lift(
                        row.iter()
                            .zip(&rhs)
                            .fold(0, |s, (&x, &y)| (s + mul_mod(x, y)) % P),
                    )
                })
                .collect();
            // Exact check that the lifted solution reproduces the whole block.
            let mut recon = vec![0i128; comp.len()];
            for (o, &e) in range.clone().zip(&sol) {
                if e != 0 {
                    for (r, &x) in recon.iter_mut().zip(a.block(&self.image(o).0, w as usize)) {
                        *r += e * x;
                    }
                }
            }
            if recon != comp {
                return Err(Error::InvalidParameters(format!(
                    "weight {w} component is not an integral combination of basic commutators"
                )));
            }
            for (o, &e) in range.zip(&sol) {
                if e != 0 {
                    exps[o] = e;
                    let (mb, mb_inv) = self.image(o);
                    let peel = if e == 1 {
                        mb_inv.clone()
                    } else if e == -1 {
                        mb.clone()
                    } else {
                        a.pow(mb, -e)
                    };
                    rest = a.mul(&peel, &rest);
                }
            }
        }
        if rest != a.one() {
            return Err(Error::InvalidParameters("residual above the class".into()));
        }
        Ok(exps)
    }

    #[cfg(test)]
    /// Image of the normal-form product `∏ b_i^{e_i}`.
    pub(crate) fn compose(&self, exps: &[i128]) -> Series {
        let a = &self.algebra;
        let mut acc = a.one();
        for (o, &e) in exps.iter().enumerate() {
            if e != 0 {
                acc = a.mul(&acc, &a.pow(&self.image(o).0, e));
            }
        }
        acc
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn basis(d: usize, c: u32) -> MagnusBasis {
        MagnusBasis::new(HallBasis::with_cap(d, c, 4096).unwrap())
    }

    #[test]
    fn inverse_and_power() {
        let a = Algebra::new(2, 4);
        let x = a.letter(0);
        let y = a.letter(1);
        let xy = a.mul(&x, &y);
        assert_eq!(a.mul(&xy, &a.inv(&xy)), a.one());
        assert_eq!(a.pow(&xy, 3), a.mul(&xy, &a.mul(&xy, &xy)));
        assert_eq!(a.mul(&a.pow(&xy, -2), &a.pow(&xy, 2)), a.one());
        // (1+X)^3 = 1 + 3X + 3X^2 + X^3.
        let x3 = a.pow(&x, 3);
        assert_eq!(x3[a.offsets[1]], 3);
        assert_eq!(x3[a.offsets[2]], 3);
        assert_eq!(x3[a.offsets[3]], 1);
        assert_eq!(x3[a.offsets[4]], 0);
    }

    #[test]
    fn commutator_leading_term() {
        // [x2, x1] = 1 + X2X1 - X1X2 + higher terms.
        let a = Algebra::new(2, 3);
        let c = a.commutator(&a.letter(1), &a.letter(0));
        let b2 = a.block(&c, 2);
        assert_eq!(b2, &[0, -1, 1, 0]);
        assert!(a.block(&c, 1).iter().all(|&x| x == 0));
    }

    #[test]
    fn decompose_round_trips() {
        let mb = basis(3, 4);
        let n = mb.basis.len();
        for seed in 0..30i128 {
            let exps: Vec<i128> = (0..n as i128)
                .map(|i| ((i * 7 + seed * 13) % 5) - 2)
                .collect();
            let m = mb.compose(&exps);
            assert_eq!(mb.decompose(&m).unwrap(), exps);
        }
    }

    #[test]
    fn basis_elements_decompose_to_unit_vectors() {
        let mb = basis(2, 5);
        for o in 0..mb.basis.len() {
            let e = mb.decompose(&mb.image(o).0).unwrap();
            for (i, &x) in e.iter().enumerate() {
                assert_eq!(x, i128::from(i == o));
            }
        }
    }
}
