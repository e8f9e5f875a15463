//! Constructors for the example families, with self-validating realizations.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::group::{log_p, GroupInvariants, GroupTable, DEFAULT_RANK_BUDGET};
use crate::multiplier::{validate_pst, AbelianPGroup};
use crate::report::Assertion;
use crate::residue::{is_prime, ResidueMatrix, ResidueModulus};

/// Largest closure attempted for any family.
pub const CLOSURE_CAP: usize = 1 << 20;

/// Abelian groups up to this order are realized as matrices; larger ones
/// are handled symbolically.
pub const ABELIAN_ENGINE_LIMIT: u64 = 729;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum FamilySpec {
    Abelian {
        p: u64,
        alphas: Vec<u32>,
    },
    LmExample {
        p: u64,
        l: u32,
    },
    Sd16,
    Mod27,
    Dihedral8,
    Pst {
        p: u64,
        d: u32,
        s: u32,
        t: u32,
    },
    CustomMatrix {
        modulus: u64,
        generators: Vec<Vec<Vec<i64>>>,
    },
}

/// Input file format for `custom_matrix`.
#[derive(Debug, Clone, PartialEq, Eq, Deserialize)]
pub struct CustomMatrixFile {
    pub modulus: u64,
    pub generators: Vec<Vec<Vec<i64>>>,
}

impl FamilySpec {
    pub fn key(&self) -> &'static str {
        match self {
            Self::Abelian { .. } => "abelian",
            Self::LmExample { .. } => "lm_example",
            Self::Sd16 => "sd16",
            Self::Mod27 => "mod27",
            Self::Dihedral8 => "dihedral8",
            Self::Pst { .. } => "pst",
            Self::CustomMatrix { .. } => "custom_matrix",
        }
    }

    /// Short human-readable identifier, stable across runs.
    pub fn id(&self) -> String {
        match self {
            Self::Abelian { p, alphas } => {
                let a: Vec<String> = alphas.iter().map(u32::to_string).collect();
                format!("abelian(p={p}; {})", a.join(","))
            }
            Self::LmExample { p, l } => format!("lm_example(p={p}, l={l})"),
            Self::Pst { p, d, s, t } => format!("pst(p={p}, d={d}, s={s}, t={t})"),
            Self::CustomMatrix {
                modulus,
                generators,
            } => {
                format!(
                    "custom_matrix(mod {modulus}, {} generators)",
                    generators.len()
                )
            }
            other => other.key().to_string(),
        }
    }

    pub fn custom_from_json(text: &str) -> Result<Self> {
        let f: CustomMatrixFile =
            serde_json::from_str(text).map_err(|e| Error::InvalidParameters(e.to_string()))?;
        Ok(Self::CustomMatrix {
            modulus: f.modulus,
            generators: f.generators,
        })
    }

    pub fn validate(&self) -> Result<()> {
        let prime = |p: u64| {
            if is_prime(p) {
                Ok(())
            } else {
                Err(Error::NotPrime(p))
            }
        };
        match self {
            Self::Abelian { p, .. } => prime(*p),
            Self::LmExample { p, l } => {
                prime(*p)?;
                if *l == 0 {
                    return Err(Error::InvalidParameters("l must be at least 1".into()));
                }
                Ok(())
            }
            Self::Pst { p, d, s, t } => validate_pst(*p, *d, *s, *t),
            Self::CustomMatrix {
                modulus,
                generators,
            } => {
                ResidueModulus::from_modulus(*modulus)?;
                if generators.is_empty() {
                    return Err(Error::InvalidParameters("no generators".into()));
                }
                Ok(())
            }
            Self::Sd16 | Self::Mod27 | Self::Dihedral8 => Ok(()),
        }
    }
}

fn mat(md: ResidueModulus, rows: &[&[i64]]) -> Result<ResidueMatrix> {
    ResidueMatrix::from_rows(md, &rows.iter().map(|r| r.to_vec()).collect::<Vec<_>>())
}

/// `X`, `Y`, `Z` modulo `p^{l+2}`.
pub fn lm_generators(p: u64, l: u32) -> Result<[ResidueMatrix; 3]> {
    let md = ResidueModulus::new(p, l + 2)?;
    let u = md.inv(md.reduce(1 - i128::from(p)))? as i64;
    let p = p as i64;
    Ok([
        mat(md, &[&[1, 0], &[0, 1 - p]])?,
        mat(md, &[&[u, p * u], &[0, 1]])?,
        mat(md, &[&[1, p], &[0, 1]])?,
    ])
}

/// `a = diag(5, 1)`, `b = [[1,1],[0,1]]` modulo 8.
pub fn sd16_generators() -> Result<[ResidueMatrix; 2]> {
    let md = ResidueModulus::new(2, 3)?;
    Ok([mat(md, &[&[5, 0], &[0, 1]])?, mat(md, &[&[1, 1], &[0, 1]])?])
}

/// `a = diag(4, 1)`, `b = [[1,1],[0,1]]` modulo 9.
pub fn mod27_generators() -> Result<[ResidueMatrix; 2]> {
    let md = ResidueModulus::new(3, 2)?;
    Ok([mat(md, &[&[4, 0], &[0, 1]])?, mat(md, &[&[1, 1], &[0, 1]])?])
}

/// Rotation and reflection modulo 4.
pub fn dihedral8_generators() -> Result<[ResidueMatrix; 2]> {
    let md = ResidueModulus::new(2, 2)?;
    Ok([
        mat(md, &[&[0, -1], &[1, 0]])?,
        mat(md, &[&[1, 0], &[0, -1]])?,
    ])
}

/// Diagonal generators of `Z_{p^α1} + ... + Z_{p^αd}`, using the cyclic
/// subgroup generated by `1 + p` (or `5` when `p = 2`) of the unit group.
pub fn abelian_generators(g: &AbelianPGroup) -> Result<Vec<ResidueMatrix>> {
    let alphas = g.alphas();
    let top = *alphas
        .first()
        .ok_or_else(|| Error::InvalidParameters("trivial group has no generators".into()))?;
    let p = g.p();
    let (md, base) = if p == 2 {
        (ResidueModulus::new(2, top + 2)?, 5)
    } else {
        (ResidueModulus::new(p, top + 1)?, 1 + p)
    };
    alphas
        .iter()
        .enumerate()
        .map(|(i, &a)| {
            let x = md.pow(base, p.pow(top - a)) as i64;
            let diag: Vec<i64> = (0..alphas.len())
                .map(|j| if j == i { x } else { 1 })
                .collect();
            ResidueMatrix::diagonal(md, &diag)
        })
        .collect()
}

/// A family member: enumerated when feasible, otherwise described by its
/// invariants alone.
#[derive(Debug)]
pub struct BuiltFamily {
    pub spec: FamilySpec,
    pub p: u64,
    pub table: Option<GroupTable>,
    pub invariants: GroupInvariants,
    /// `log_p |γ_i|` for `i = 1..`, ending with the trivial term.
    pub lower_central_exps: Vec<u32>,
    pub ellis_levels: Option<Vec<(u32, bool)>>,
    /// Relation and realization checks run before the table is trusted.
    pub assertions: Vec<Assertion>,
}

impl BuiltFamily {
    /// `log_p |γ_i(G)|` for `i >= 1`.
    pub fn gamma_exp(&self, i: u32) -> u32 {
        let i = i.max(1) as usize;
        self.lower_central_exps.get(i - 1).copied().unwrap_or(0)
    }
}

fn from_table(spec: &FamilySpec, g: GroupTable, assertions: Vec<Assertion>) -> Result<BuiltFamily> {
    let invariants = g.invariants(DEFAULT_RANK_BUDGET)?;
    let (lcs, _) = g.lower_central_series()?;
    let lower_central_exps = lcs
        .iter()
        .map(|h| log_p(h.order(), g.p()).expect("subgroup of a p-group"))
        .collect();
    Ok(BuiltFamily {
        spec: spec.clone(),
        p: g.p(),
        ellis_levels: Some(g.ellis_commutator_condition()),
        table: Some(g),
        invariants,
        lower_central_exps,
        assertions,
    })
}

fn check(name: impl Into<String>, passed: bool) -> Assertion {
    Assertion::new(name, passed, "")
}

fn equals(name: &str, got: &ResidueMatrix, want: &ResidueMatrix) -> Assertion {
    Assertion::new(name, got == want, format!("{:?}", got.rows()))
}

pub fn build_family(spec: &FamilySpec) -> Result<BuiltFamily> {
    spec.validate()?;
    match spec {
        FamilySpec::LmExample { p, l } => build_lm(spec, *p, *l),
        FamilySpec::Sd16 => {
            let [a, b] = sd16_generators()?;
            let aba = a.mat_mul(&b)?.mat_mul(&a)?;
            let assertions = vec![
                check("a^2 = 1", a.mat_pow(2)?.is_identity()),
                equals("aba = b^-3", &aba, &b.mat_pow(-3)?),
            ];
            let g = GroupTable::close(&[a, b], CLOSURE_CAP)?;
            let mut assertions = assertions;
            assertions.push(check("|G| = 16", g.order() == 16));
            from_table(spec, g, assertions)
        }
        FamilySpec::Mod27 => {
            let [a, b] = mod27_generators()?;
            let conj = a.mat_inv()?.mat_mul(&b)?.mat_mul(&a)?;
            let mut assertions = vec![
                check("a^3 = 1", a.mat_pow(3)?.is_identity()),
                equals("a^-1 b a = b^-2", &conj, &b.mat_pow(-2)?),
            ];
            let g = GroupTable::close(&[a, b], CLOSURE_CAP)?;
            assertions.push(check("|G| = 27", g.order() == 27));
            from_table(spec, g, assertions)
        }
        FamilySpec::Dihedral8 => {
            let [r, s] = dihedral8_generators()?;
            let srs = s.mat_mul(&r)?.mat_mul(&s)?;
            let mut assertions = vec![
                check(
                    "r^4 = 1",
                    r.mat_pow(4)?.is_identity() && !r.mat_pow(2)?.is_identity(),
                ),
                check("s^2 = 1", s.mat_pow(2)?.is_identity()),
                equals("srs = r^-1", &srs, &r.mat_inv()?),
            ];
            let g = GroupTable::close(&[r, s], CLOSURE_CAP)?;
            assertions.push(check("|G| = 8", g.order() == 8));
            from_table(spec, g, assertions)
        }
        FamilySpec::Abelian { p, alphas } => {
            let g = AbelianPGroup::new(*p, alphas.clone())?;
            let n = g.structure_invariants().order_exp;
            let small = p
                .checked_pow(n as u32)
                .is_some_and(|o| o <= ABELIAN_ENGINE_LIMIT);
            if g.is_trivial() || !small || g.alphas().len() > crate::residue::MAX_DIM {
                return Ok(symbolic_abelian(spec, &g));
            }
            let gens = abelian_generators(&g)?;
            let mut assertions = Vec::new();
            for (i, (m, &a)) in gens.iter().zip(g.alphas()).enumerate() {
                let order = m.element_order(p.pow(a) * p)?;
                assertions.push(check(
                    format!("generator {} has order p^{a}", i + 1),
                    order == p.pow(a),
                ));
            }
            let table = GroupTable::close(&gens, CLOSURE_CAP)?;
            assertions.push(check(
                format!("|G| = p^{n}"),
                table.order() as u64 == p.pow(n as u32),
            ));
            from_table(spec, table, assertions)
        }
        FamilySpec::Pst { p, d, s, t } => Ok(symbolic_pst(spec, *p, *d, *s, *t)),
        FamilySpec::CustomMatrix {
            modulus,
            generators,
        } => {
            let md = ResidueModulus::from_modulus(*modulus)?;
            let gens = generators
                .iter()
                .map(|rows| ResidueMatrix::from_rows(md, rows))
                .collect::<Result<Vec<_>>>()?;
            let mut assertions = Vec::new();
            for (i, m) in gens.iter().enumerate() {
                assertions.push(check(
                    format!("generator {} invertible", i + 1),
                    m.is_invertible(),
                ));
            }
            let g = GroupTable::close(&gens, CLOSURE_CAP)?;
            from_table(spec, g, assertions)
        }
    }
}

fn build_lm(spec: &FamilySpec, p: u64, l: u32) -> Result<BuiltFamily> {
    let [x, y, z] = lm_generators(p, l)?;
    let md = x.modulus();
    let zp = z.mat_pow(p as i64)?;
    let mut assertions = vec![
        equals("[X,Y] = Z^p", &x.commutator(&y)?, &zp),
        equals("[X,Z] = Z^p", &x.commutator(&z)?, &zp),
        equals("[Y,Z] = Z^p", &y.commutator(&z)?, &zp),
    ];
    let top = (p as i64).pow(l + 1);
    for (name, m) in [("X", &x), ("Y", &y), ("Z", &z)] {
        assertions.push(check(
            format!("{name}^(p^(l+1)) = 1"),
            m.mat_pow(top)?.is_identity() && !m.mat_pow(top / p as i64)?.is_identity(),
        ));
    }
    // [Z^p, _k X] = [[1, (-1)^(k+2) p^(k+2)], [0, 1]], zero from k = l on.
    let mut acc = zp.clone();
    for k in 1..=l + 1 {
        acc = acc.commutator(&x)?;
        let sign: i128 = if k % 2 == 0 { 1 } else { -1 };
        let entry = sign * i128::from(p).pow(k + 2);
        let want = mat(md, &[&[1, md.reduce(entry) as i64], &[0, 1]])?;
        assertions.push(equals(&format!("[Z^p, {k} X] formula"), &acc, &want));
        assertions.push(check(
            format!("[Z^p, {k} X] trivial iff k >= l"),
            acc.is_identity() == (k >= l),
        ));
    }
    let g = GroupTable::close(&[x.clone(), y.clone(), z.clone()], CLOSURE_CAP)?;
    assertions.push(check(
        "|P| = p^(3(l+1))",
        g.order() as u64 == p.pow(3 * (l + 1)),
    ));
    assertions.push(check(
        "X^a Y^b Z^c normal form is a bijection",
        normal_form_bijection(&g, p, l)?,
    ));
    from_table(spec, g, assertions)
}

/// Every element equals exactly one `X^a Y^b Z^c` with `0 <= a, b, c < p^{l+1}`,
/// and that product matches the closed matrix formula.
fn normal_form_bijection(g: &GroupTable, p: u64, l: u32) -> Result<bool> {
    let md = g.modulus();
    let n = p.pow(l + 1);
    if (n * n * n) as usize != g.order() {
        return Ok(false);
    }
    let gens = g.generators();
    let powers = |e| {
        let mut out = Vec::with_capacity(n as usize);
        let mut cur = crate::group::IDENTITY;
        for _ in 0..n {
            out.push(cur);
            cur = g.mult(cur, e);
        }
        out
    };
    let (xs, ys, zs) = (powers(gens[0]), powers(gens[1]), powers(gens[2]));
    let q = md.reduce(1 - i128::from(p));
    let u = md.inv(q)?;
    let mut seen = vec![false; g.order()];
    for a in 0..n {
        for b in 0..n {
            let ub = md.pow(u, b);
            let qb = md.pow(q, b);
            for c in 0..n {
                let elem = g.mult(g.mult(xs[a as usize], ys[b as usize]), zs[c as usize]);
                let top_right = md.mul(
                    md.reduce(1 + i128::from(p) * i128::from(c) - i128::from(qb)),
                    ub,
                );
                let formula = ResidueMatrix::from_rows(
                    md,
                    &[
                        vec![ub as i64, top_right as i64],
                        vec![0, md.pow(q, a) as i64],
                    ],
                )?;
                if g.element(elem) != formula || seen[elem as usize] {
                    return Ok(false);
                }
                seen[elem as usize] = true;
            }
        }
    }
    Ok(seen.into_iter().all(|s| s))
}

fn symbolic_abelian(spec: &FamilySpec, g: &AbelianPGroup) -> BuiltFamily {
    let s = g.structure_invariants();
    let n = s.order_exp as u32;
    let d = s.d as u32;
    let nontrivial = u32::from(n > 0);
    BuiltFamily {
        spec: spec.clone(),
        p: g.p(),
        table: None,
        invariants: GroupInvariants {
            order_exp: n,
            d,
            e: s.e,
            cl: nontrivial,
            dl: nontrivial,
            center_exp: s.e,
            // Subgroups of a d-generator abelian p-group need at most d generators.
            sr: Some(d),
            powerful: true,
        },
        lower_central_exps: if n > 0 { vec![n, 0] } else { vec![0] },
        ellis_levels: Some((1..=s.e).map(|i| (i, true)).collect()),
        assertions: Vec::new(),
    }
}

/// `P_{s,t}`: `|G| = p^{ds + t d(d-1)/2}` and `G'` of order `p^{t d(d-1)/2}`.
/// The centre is generated by `G'` (exponent `p^t`) and the `y_i^{p^t}`
/// (order `p^{s-t}`).
fn symbolic_pst(spec: &FamilySpec, p: u64, d: u32, s: u32, t: u32) -> BuiltFamily {
    let pairs = d * (d - 1) / 2;
    let derived = t * pairs;
    let order_exp = d * s + derived;
    BuiltFamily {
        spec: spec.clone(),
        p,
        table: None,
        invariants: GroupInvariants {
            order_exp,
            d,
            e: s,
            cl: 2,
            dl: 2,
            center_exp: (s - t).max(t),
            sr: None,
            powerful: false,
        },
        lower_central_exps: vec![order_exp, derived, 0],
        ellis_levels: None,
        assertions: Vec::new(),
    }
}
