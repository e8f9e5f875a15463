use std::fmt::Write as _;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use pgw_core::bounds::{BoundCheck, CheckStatus};
use pgw_core::commutator::{enumerate_basic_commutators, witt_chi, FreeNilpotentContext};
use pgw_core::family::FamilySpec;
use pgw_core::multiplier::Catalog;
use pgw_core::report::{run_analysis, ReportDocument};
use pgw_core::suite::run_suite;
use serde_json::json;

#[derive(Parser)]
#[command(
    name = "pgw",
    version,
    about = "Invariants and multiplier bounds for finite p-groups"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
#[value(rename_all = "snake_case")]
enum Kind {
    Abelian,
    LmExample,
    Sd16,
    Mod27,
    Dihedral8,
    Pst,
    CustomMatrix,
}

#[derive(Clone, Copy, ValueEnum)]
enum Suite {
    Theorem23,
    Collection,
    Struik,
    Bounds,
    All,
}

#[derive(Subcommand)]
enum Command {
    /// Build a family member and evaluate every bound.
    Analyze {
        #[arg(long, value_enum)]
        family: Kind,
        #[arg(long)]
        p: Option<u64>,
        #[arg(long)]
        l: Option<u32>,
        /// Comma-separated exponents of the cyclic factors.
        #[arg(long, value_delimiter = ',')]
        alphas: Option<Vec<u32>>,
        /// Generator count for `pst`.
        #[arg(long)]
        d: Option<u32>,
        #[arg(long)]
        s: Option<u32>,
        #[arg(long)]
        t: Option<u32>,
        /// JSON file `{"modulus": M, "generators": [...]}` for `custom_matrix`.
        #[arg(long)]
        gens: Option<PathBuf>,
        /// Replacement multiplier catalog.
        #[arg(long)]
        catalog: Option<PathBuf>,
        #[arg(long)]
        c: u32,
        #[arg(long)]
        json: bool,
    },
    /// Run a property suite over the built-in fleet.
    Suite {
        #[arg(value_enum)]
        name: Suite,
        #[arg(long)]
        json: bool,
    },
    /// Witt number χ_weight(letters).
    Witt {
        #[arg(long)]
        letters: u64,
        #[arg(long)]
        weight: u32,
        #[arg(long)]
        json: bool,
    },
    /// List basic commutators up to a weight.
    BasicCommutators {
        #[arg(long)]
        letters: usize,
        #[arg(long)]
        max_weight: u32,
        #[arg(long)]
        json: bool,
    },
    /// Collect a word into basic-commutator normal form.
    Collect {
        #[arg(long)]
        letters: usize,
        #[arg(long)]
        class: u32,
        /// Signed 1-based letters, e.g. `2,1,-2,-1`.
        #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
        word: Vec<i64>,
        #[arg(long)]
        json: bool,
    },
}

type CliResult<T> = Result<T, String>;

fn need<T>(v: Option<T>, flag: &str, kind: &str) -> CliResult<T> {
    v.ok_or_else(|| format!("--{flag} is required for --family {kind}"))
}

fn family_spec(
    kind: Kind,
    p: Option<u64>,
    l: Option<u32>,
    alphas: Option<Vec<u32>>,
    (d, s, t): (Option<u32>, Option<u32>, Option<u32>),
    gens: Option<PathBuf>,
) -> CliResult<FamilySpec> {
    Ok(match kind {
        Kind::Abelian => FamilySpec::Abelian {
            p: need(p, "p", "abelian")?,
            alphas: need(alphas, "alphas", "abelian")?,
        },
        Kind::LmExample => FamilySpec::LmExample {
            p: need(p, "p", "lm_example")?,
            l: need(l, "l", "lm_example")?,
        },
        Kind::Sd16 => FamilySpec::Sd16,
        Kind::Mod27 => FamilySpec::Mod27,
        Kind::Dihedral8 => FamilySpec::Dihedral8,
        Kind::Pst => FamilySpec::Pst {
            p: need(p, "p", "pst")?,
            d: d.unwrap_or(2),
            s: need(s, "s", "pst")?,
            t: need(t, "t", "pst")?,
        },
        Kind::CustomMatrix => {
            let path = need(gens, "gens", "custom_matrix")?;
            let text = std::fs::read_to_string(&path)
                .map_err(|e| format!("reading {}: {e}", path.display()))?;
            FamilySpec::custom_from_json(&text).map_err(|e| e.to_string())?
        }
    })
}

fn opt<T: ToString>(v: Option<T>) -> String {
    v.map_or_else(|| "-".to_string(), |x| x.to_string())
}

fn status_name(s: CheckStatus) -> &'static str {
    match s {
        CheckStatus::Checked => "checked",
        CheckStatus::Skipped => "skipped",
        CheckStatus::Constraint => "constraint",
        CheckStatus::ReportOnly => "report_only",
        CheckStatus::Comparison => "comparison",
        CheckStatus::Context => "context",
    }
}

fn check_row(c: &BoundCheck) -> String {
    let yn = |b: bool| if b { "yes" } else { "no" };
    let (holds, attained) = match c.status {
        CheckStatus::Skipped | CheckStatus::Context => ("-", "-"),
        _ => (yn(c.holds), yn(c.attained)),
    };
    format!(
        "{:<28} {:<11} {:>6} {:>6} {:<5} {:<8} {}",
        c.name,
        status_name(c.status),
        opt(c.lhs),
        opt(c.rhs),
        holds,
        attained,
        c.note
    )
}

fn render_text(doc: &ReportDocument) -> String {
    let mut out = String::new();
    if let Some(id) = &doc.group_id {
        let _ = writeln!(out, "group       {id}");
        let _ = writeln!(out, "p           {}", opt(doc.p));
        let _ = writeln!(out, "c           {}", opt(doc.c));
    }
    if let Some(inv) = &doc.invariants {
        let _ = writeln!(
            out,
            "invariants  order_exp={} d={} e={} cl={} dl={} center_exp={} sr={} powerful={}",
            inv.order_exp,
            inv.d,
            inv.e,
            inv.cl,
            inv.dl,
            inv.center_exp,
            opt(inv.sr),
            inv.powerful
        );
    }
    if doc.group_id.is_some() {
        let source = doc
            .multiplier_source
            .map(|s| {
                serde_json::to_value(s)
                    .expect("serializes")
                    .as_str()
                    .unwrap_or("")
                    .to_string()
            })
            .unwrap_or_default();
        match &doc.multiplier {
            Some(m) => {
                let _ = writeln!(out, "multiplier  {m} ({source})");
            }
            None => {
                let _ = writeln!(out, "multiplier  unknown");
            }
        }
    }
    if !doc.checks.is_empty() {
        let _ = writeln!(
            out,
            "\n{:<28} {:<11} {:>6} {:>6} {:<5} {:<8} note",
            "check", "status", "lhs", "rhs", "holds", "attained"
        );
        for c in &doc.checks {
            let _ = writeln!(out, "{}", check_row(c));
        }
    }
    for s in &doc.suite_results {
        let passed = s.assertions.iter().filter(|a| a.passed).count();
        let _ = writeln!(
            out,
            "\nsuite {} ({passed}/{} passed)",
            s.suite,
            s.assertions.len()
        );
        for a in &s.assertions {
            let mark = if a.passed { "ok  " } else { "FAIL" };
            if a.passed || a.detail.is_empty() {
                let _ = writeln!(out, "  [{mark}] {}", a.name);
            } else {
                let _ = writeln!(out, "  [{mark}] {}: {}", a.name, a.detail);
            }
        }
    }
    let _ = writeln!(
        out,
        "\nresult: {}",
        if doc.passed() { "PASS" } else { "FAIL" }
    );
    out
}

fn emit(doc: &ReportDocument, json: bool) -> ExitCode {
    if json {
        println!("{}", doc.to_json());
    } else {
        print!("{}", render_text(doc));
    }
    if doc.passed() {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(1)
    }
}

fn run(cli: Cli) -> CliResult<ExitCode> {
    match cli.command {
        Command::Analyze {
            family,
            p,
            l,
            alphas,
            d,
            s,
            t,
            gens,
            catalog,
            c,
            json,
        } => {
            let spec = family_spec(family, p, l, alphas, (d, s, t), gens)?;
            let catalog = match catalog {
                Some(path) => Catalog::load(&path).map_err(|e| e.to_string())?,
                None => Catalog::builtin(),
            };
            let doc = run_analysis(&spec, c, &catalog).map_err(|e| e.to_string())?;
            Ok(emit(&doc, json))
        }
        Command::Suite { name, json } => {
            let name = name.to_possible_value().expect("not skipped");
            let doc = run_suite(name.get_name()).map_err(|e| e.to_string())?;
            Ok(emit(&doc, json))
        }
        Command::Witt {
            letters,
            weight,
            json,
        } => {
            if weight == 0 {
                return Err("--weight must be at least 1".into());
            }
            if i128::from(letters).checked_pow(weight).is_none() {
                return Err(format!("{letters}^{weight} is too large"));
            }
            let chi = witt_chi(letters, weight);
            if json {
                let v = json!({"letters": letters, "weight": weight, "chi": chi.to_string()});
                println!("{}", serde_json::to_string_pretty(&v).expect("serializes"));
            } else {
                println!("chi_{weight}({letters}) = {chi}");
            }
            Ok(ExitCode::SUCCESS)
        }
        Command::BasicCommutators {
            letters,
            max_weight,
            json,
        } => {
            let basis =
                enumerate_basic_commutators(letters, max_weight).map_err(|e| e.to_string())?;
            if json {
                let items: Vec<_> = basis
                    .items()
                    .iter()
                    .map(|b| json!({"index": b.ord + 1, "weight": b.weight, "commutator": basis.format(b.ord)}))
                    .collect();
                let v = json!({"letters": letters, "max_weight": max_weight, "basic_commutators": items});
                println!("{}", serde_json::to_string_pretty(&v).expect("serializes"));
            } else {
                for w in 1..=max_weight {
                    println!(
                        "weight {w}: {} (chi = {})",
                        basis.count_of_weight(w),
                        witt_chi(letters as u64, w)
                    );
                    for ord in basis.weight_range(w) {
                        println!("  b_{:<4} {}", ord + 1, basis.format(ord));
                    }
                }
            }
            Ok(ExitCode::SUCCESS)
        }
        Command::Collect {
            letters,
            class,
            word,
            json,
        } => {
            let ctx = FreeNilpotentContext::new(letters, class).map_err(|e| e.to_string())?;
            let elem = ctx.from_word(&word).map_err(|e| e.to_string())?;
            let basis = ctx.basis();
            let terms: Vec<(String, String)> = elem
                .support()
                .into_iter()
                .map(|ord| (basis.format(ord), elem.exponents()[ord].to_string()))
                .collect();
            if json {
                let exps: Vec<String> = elem.exponents().iter().map(ToString::to_string).collect();
                let ts: Vec<_> = terms
                    .iter()
                    .map(|(c, e)| json!({"commutator": c, "exponent": e}))
                    .collect();
                let v = json!({
                    "letters": letters,
                    "class": class,
                    "word": word,
                    "exponents": exps,
                    "normal_form": ts,
                });
                println!("{}", serde_json::to_string_pretty(&v).expect("serializes"));
            } else if terms.is_empty() {
                println!("1");
            } else {
                let parts: Vec<String> = terms.iter().map(|(c, e)| format!("{c}^{e}")).collect();
                println!("{}", parts.join(" "));
            }
            Ok(ExitCode::SUCCESS)
        }
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(code) => code,
        Err(msg) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
    }
}
