//! Report documents shared by the analysis driver, the suites and the CLI.

use serde::Serialize;

use crate::bounds::{full_report, BoundCheck, BoundInputs};
use crate::error::{Error, Result};
use crate::family::{build_family, BuiltFamily, FamilySpec};
use crate::group::GroupInvariants;
use crate::multiplier::{abelian_multiplier, pst_multiplier, AbelianPGroup, Catalog};

pub const SCHEMA_VERSION: u32 = 1;

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Assertion {
    pub name: String,
    pub passed: bool,
    pub detail: String,
}

impl Assertion {
    pub fn new(name: impl Into<String>, passed: bool, detail: impl Into<String>) -> Self {
        Self {
            name: name.into(),
            passed,
            detail: detail.into(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SuiteResult {
    pub suite: String,
    pub passed: bool,
    pub assertions: Vec<Assertion>,
}

impl SuiteResult {
    pub fn new(suite: &str, assertions: Vec<Assertion>) -> Self {
        Self {
            suite: suite.into(),
            passed: assertions.iter().all(|a| a.passed),
            assertions,
        }
    }

    pub fn failures(&self) -> impl Iterator<Item = &Assertion> {
        self.assertions.iter().filter(|a| !a.passed)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum MultiplierSource {
    Formula,
    Catalog,
    Unknown,
}

/// Top-level JSON document. Field order is the serialized key order.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ReportDocument {
    pub schema_version: u32,
    pub family: Option<FamilySpec>,
    pub group_id: Option<String>,
    pub p: Option<u64>,
    pub c: Option<u32>,
    pub invariants: Option<GroupInvariants>,
    pub multiplier: Option<AbelianPGroup>,
    pub multiplier_source: Option<MultiplierSource>,
    pub checks: Vec<BoundCheck>,
    pub suite_results: Vec<SuiteResult>,
}

impl ReportDocument {
    pub fn for_suites(suite_results: Vec<SuiteResult>) -> Self {
        Self {
            schema_version: SCHEMA_VERSION,
            family: None,
            group_id: None,
            p: None,
            c: None,
            invariants: None,
            multiplier: None,
            multiplier_source: None,
            checks: Vec::new(),
            suite_results,
        }
    }

    /// True iff no asserted check is violated and every assertion passed.
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| !c.is_violation()) && self.suite_results.iter().all(|s| s.passed)
    }

    pub fn check(&self, name: &str) -> Option<&BoundCheck> {
        self.checks.iter().find(|c| c.name == name)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }
}

/// `M^(c)(G)` and `M(G)` when a closed form or catalog entry supplies them.
pub fn family_multipliers(
    built: &BuiltFamily,
    c: u32,
    catalog: &Catalog,
) -> Result<(
    Option<AbelianPGroup>,
    Option<AbelianPGroup>,
    MultiplierSource,
)> {
    let lookup = |key: &str, c: u32| match catalog.lookup(key, c) {
        Ok(entry) => entry.multiplier().map(Some),
        Err(Error::NotInCatalog { .. }) => Ok(None),
        Err(e) => Err(e),
    };
    Ok(match &built.spec {
        FamilySpec::Abelian { p, alphas } => {
            let g = AbelianPGroup::new(*p, alphas.clone())?;
            (
                Some(abelian_multiplier(&g, c)?),
                Some(abelian_multiplier(&g, 1)?),
                MultiplierSource::Formula,
            )
        }
        // The closed form at c = 1 is not used as M(G): for the Heisenberg
        // case it exceeds the known Schur multiplier Z_p^2.
        FamilySpec::Pst { p, d, s, t } => (
            Some(pst_multiplier(*p, *d, *s, *t, c)?),
            None,
            MultiplierSource::Formula,
        ),
        spec @ (FamilySpec::Sd16 | FamilySpec::Mod27) => {
            let m = lookup(spec.key(), c)?;
            let schur = lookup(spec.key(), 1)?;
            let source = if m.is_some() {
                MultiplierSource::Catalog
            } else {
                MultiplierSource::Unknown
            };
            (m, schur, source)
        }
        _ => (None, None, MultiplierSource::Unknown),
    })
}

/// Builds the family, attaches what is known about its multipliers and runs
/// every bound check. Realization checks land in `suite_results`.
pub fn run_analysis(spec: &FamilySpec, c: u32, catalog: &Catalog) -> Result<ReportDocument> {
    if c == 0 {
        return Err(Error::InvalidParameters("c must be at least 1".into()));
    }
    let built = build_family(spec)?;
    analyze_built(&built, c, catalog)
}

pub fn analyze_built(built: &BuiltFamily, c: u32, catalog: &Catalog) -> Result<ReportDocument> {
    let (multiplier, schur, source) = family_multipliers(built, c, catalog)?;
    let inputs = BoundInputs {
        invariants: built.invariants.clone(),
        gamma_exp: built.gamma_exp(c + 1),
        derived_exp: built.gamma_exp(2),
        multiplier,
        schur,
        ellis_levels: built.ellis_levels.clone(),
    };
    let id = built.spec.id();
    let report = full_report(&id, built.p, c, &inputs);
    let suite_results = if built.assertions.is_empty() {
        Vec::new()
    } else {
        vec![SuiteResult::new("realization", built.assertions.clone())]
    };
    Ok(ReportDocument {
        schema_version: SCHEMA_VERSION,
        family: Some(built.spec.clone()),
        group_id: Some(id),
        p: Some(built.p),
        c: Some(c),
        invariants: Some(report.invariants),
        multiplier: report.multiplier,
        multiplier_source: Some(source),
        checks: report.checks,
        suite_results,
    })
}
