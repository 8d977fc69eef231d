//! `frlab`: command-line front end.

mod modspec;
mod suite;
mod table;

use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::sync::Arc;

use clap::{Parser, Subcommand, ValueEnum};
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use frlab::freering::stabilized_quotient;
use frlab::frlang::{self, apply_kuzmin, kuzmin_poly, parse_query, EvalStatus, Query, Ring};
use frlab::gmodule::GroupRef;
use frlab::homology::{group_homology_with, Coefficients, ResolutionKind};
use frlab::relmod::relation_module;
use frlab::{Caps, Error, PresentedGroup};

#[derive(Parser, Debug)]
#[command(name = "frlab", version, about = "Exact computations with fr-codes, group homology and relation modules")]
struct Cli {
    /// TOML configuration file; flags given on the command line win.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    #[arg(long, global = true, value_enum)]
    format: Option<Format>,
    /// Directory used to resolve bare group names.
    #[arg(long, global = true)]
    corpus: Option<PathBuf>,
    #[arg(long, global = true)]
    max_group_order: Option<usize>,
    #[arg(long, global = true)]
    max_bar_degree: Option<usize>,
    #[arg(long, global = true)]
    max_monomials: Option<usize>,
    #[arg(long, global = true)]
    max_dense_dim: Option<usize>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
enum Format {
    Json,
    Table,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Parse and print a code in normal form.
    Parse {
        #[arg(long)]
        code: String,
    },
    /// Rules matching a code, without a group.
    Translate {
        #[arg(long)]
        code: String,
        #[arg(long, default_value_t = 1)]
        i: u64,
        #[arg(long, default_value = "Z")]
        ring: String,
    },
    /// Evaluate a code on a group through the rule base.
    Eval {
        #[arg(long)]
        code: String,
        #[arg(long, default_value_t = 1)]
        i: u64,
        #[arg(long, default_value = "Z")]
        ring: String,
        #[arg(long)]
        group: String,
    },
    /// H_n(G; M) with coefficients.
    Homology {
        #[arg(long)]
        group: String,
        /// trivial, g, ZG, P, relmod, or a functor of one of them such as S2:g, Ex3:relmod, Lie2:relmod.
        #[arg(long, default_value = "trivial")]
        module: String,
        #[arg(long)]
        degree: usize,
        #[arg(long, default_value = "Z")]
        coeff: String,
        #[arg(long, value_enum, default_value = "reduced")]
        resolution: Resolution,
    },
    /// The relation module R_ab of a presentation.
    Relmod {
        #[arg(long)]
        group: String,
        /// Functor-power coinvariants to report, as FUNC:n (T, S, Ex, Gamma, Lie).
        #[arg(long)]
        coinv: Vec<String>,
        #[arg(long)]
        torsion_only: bool,
    },
    /// Truncated quotient num/den over lengths lmin..=lmax.
    Quotient {
        #[arg(long)]
        group: String,
        #[arg(long)]
        num: String,
        #[arg(long)]
        den: String,
        #[arg(long)]
        lmin: Option<usize>,
        #[arg(long)]
        lmax: Option<usize>,
    },
    /// Kuz'min polynomial f_n^(p), optionally applied to a group.
    Kuzmin {
        #[arg(long)]
        n: u64,
        #[arg(long)]
        p: u64,
        #[arg(long, requires = "apply")]
        group: Option<String>,
        /// Homology degree the polynomial is applied at.
        #[arg(long, requires = "group")]
        apply: Option<u64>,
    },
    /// Run the verification suite over the corpus.
    VerifySuite {
        /// Run only checks whose id starts with one of these prefixes.
        #[arg(long)]
        only: Vec<String>,
        /// Use shorter truncations and fewer random samples.
        #[arg(long)]
        quick: bool,
        /// Include per-check runtimes (makes output nondeterministic).
        #[arg(long)]
        timings: bool,
    },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Resolution {
    Bar,
    Reduced,
    Periodic,
    Gruenberg,
}

impl From<Resolution> for ResolutionKind {
    fn from(r: Resolution) -> Self {
        match r {
            Resolution::Bar => ResolutionKind::Bar,
            Resolution::Reduced => ResolutionKind::Reduced,
            Resolution::Periodic => ResolutionKind::Periodic,
            Resolution::Gruenberg => ResolutionKind::Gruenberg,
        }
    }
}

#[derive(Debug, Default, Deserialize)]
#[serde(default, deny_unknown_fields)]
struct ConfigFile {
    format: Option<Format>,
    corpus: Option<PathBuf>,
    caps: Option<Caps>,
}

pub struct Settings {
    pub caps: Caps,
    pub corpus: PathBuf,
    format: Format,
}

/// A failure with its exit code.
pub struct Failure {
    code: u8,
    message: String,
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let code = match &e {
            _ if e.is_cap() => 3,
            Error::Parse { .. } | Error::Invalid(_) | Error::Io { .. } | Error::NotPrime(_) => 2,
            _ => 1,
        };
        Failure { code, message: e.to_string() }
    }
}

fn usage(msg: impl Into<String>) -> Failure {
    Failure { code: 2, message: msg.into() }
}

fn default_corpus() -> PathBuf {
    std::env::var_os("FRLAB_CORPUS")
        .map(PathBuf::from)
        .unwrap_or_else(|| Path::new(env!("CARGO_MANIFEST_DIR")).join("../../corpus"))
}

fn settings(cli: &Cli) -> Result<Settings, Failure> {
    let file = match &cli.config {
        Some(p) => {
            let text = std::fs::read_to_string(p).map_err(|e| usage(format!("config {}: {e}", p.display())))?;
            toml::from_str::<ConfigFile>(&text).map_err(|e| usage(format!("config {}: {e}", p.display())))?
        }
        None => ConfigFile::default(),
    };
    let mut caps = file.caps.unwrap_or_default();
    let overrides = [
        (cli.max_group_order, &mut caps.max_group_order),
        (cli.max_bar_degree, &mut caps.max_bar_degree),
        (cli.max_monomials, &mut caps.max_monomials),
        (cli.max_dense_dim, &mut caps.max_dense_dim),
    ];
    for (flag, slot) in overrides {
        if let Some(v) = flag {
            *slot = v;
        }
    }
    Ok(Settings {
        caps,
        corpus: cli.corpus.clone().or(file.corpus).unwrap_or_else(default_corpus),
        format: cli.format.or(file.format).unwrap_or(Format::Json),
    })
}

/// Loads a group from a path, or by name from the corpus directory.
pub fn load_group(spec: &str, s: &Settings) -> Result<GroupRef, Failure> {
    let direct = PathBuf::from(spec);
    let candidates = [
        direct.clone(),
        s.corpus.join(spec),
        s.corpus.join(format!("{spec}.json")),
        s.corpus.join(direct.file_name().unwrap_or_default()),
    ];
    let path = candidates.iter().find(|p| p.is_file()).unwrap_or(&direct);
    Ok(Arc::new(PresentedGroup::from_file(path, &s.caps)?))
}

fn parse_ring(s: &str) -> Result<Ring, Failure> {
    s.parse::<Ring>().map_err(Failure::from)
}

fn run(cli: &Cli, s: &Settings) -> Result<(Value, u8), Failure> {
    let caps = &s.caps;
    Ok(match &cli.command {
        Command::Parse { code } => {
            let q = parse_query(code)?;
            let kind = match q {
                Query::Code(_) => "ideal",
                Query::Module(_) => "module",
            };
            (json!({"code": q.to_string(), "kind": kind}), 0)
        }
        Command::Translate { code, i, ring } => {
            let q = parse_query(code)?;
            let rules = frlang::translate_query(&q, *i, parse_ring(ring)?);
            let status = if rules.is_empty() { EvalStatus::NoRule } else { EvalStatus::Symbolic };
            (json!({"code": q.to_string(), "rules": rules, "value": null, "status": status}), 0)
        }
        Command::Eval { code, i, ring, group } => {
            let q = parse_query(code)?;
            let pg = load_group(group, s)?;
            let ev = frlang::evaluate_query(&q, *i, parse_ring(ring)?, &pg, caps)?;
            let code = u8::from(!ev.check_failures.is_empty());
            (serde_json::to_value(&ev).expect("serializable"), code)
        }
        Command::Homology { group, module, degree, coeff, resolution } => {
            let pg = load_group(group, s)?;
            let m = modspec::build(module, &pg)?;
            let coeff: Coefficients = coeff.parse()?;
            let h = group_homology_with(&m, *degree, coeff, (*resolution).into(), caps)?;
            (serde_json::to_value(&h).expect("serializable"), 0)
        }
        Command::Relmod { group, coinv, torsion_only } => {
            let pg = load_group(group, s)?;
            let rm = relation_module(&pg)?;
            let actions: Vec<Vec<Vec<i64>>> = (0..pg.generator_count())
                .map(|g| {
                    let a = rm.module.generator_action(g);
                    (0..a.rows()).map(|r| a.row(r).to_vec()).collect()
                })
                .collect();
            let mut coinvariants = serde_json::Map::new();
            for spec in coinv {
                let (f, n) = modspec::functor_arg(spec)?;
                let m = frlang::functor_power(&rm.module, f, n)?;
                let mut c = m.coinvariants().invariants;
                if *torsion_only {
                    c = c.torsion_part();
                }
                coinvariants.insert(spec.clone(), serde_json::to_value(&c).expect("serializable"));
            }
            let out = json!({
                "group": pg.name(),
                "rank": rm.rank(),
                "actions": actions,
                "hopf_h2": rm.hopf_h2()?,
                "coinvariants": coinvariants,
            });
            (out, 0)
        }
        Command::Quotient { group, num, den, lmin, lmax } => {
            let pg = load_group(group, s)?;
            let num = frlang::parse(num)?;
            let den = frlang::parse(den)?;
            let (lo, hi) = (lmin.unwrap_or(caps.l_min), lmax.unwrap_or(caps.l_max));
            let rep = stabilized_quotient(&num, &den, &pg, lo, hi, caps)?;
            let code = u8::from(!rep.stable);
            (serde_json::to_value(&rep).expect("serializable"), code)
        }
        Command::Kuzmin { n, p, group, apply } => {
            let poly = kuzmin_poly(*n, *p)?;
            let mut out = json!({ "poly": poly });
            if let (Some(g), Some(d)) = (group, apply) {
                let pg = load_group(g, s)?;
                let v = apply_kuzmin(&poly, *d, *p, &pg, caps)?;
                out["group"] = json!(pg.name());
                out["value"] = serde_json::to_value(&v).expect("serializable");
            }
            (out, 0)
        }
        Command::VerifySuite { only, quick, timings } => {
            let report = suite::run(s, only, *quick, *timings)?;
            let code = u8::from(!report.pass);
            (serde_json::to_value(&report).expect("serializable"), code)
        }
    })
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let outcome = settings(&cli).and_then(|s| run(&cli, &s).map(|r| (r, s.format)));
    match outcome {
        Ok(((value, code), format)) => {
            match format {
                Format::Json => println!("{}", serde_json::to_string(&value).expect("serializable")),
                Format::Table => print!("{}", table::render(&value)),
            }
            ExitCode::from(code)
        }
        Err(f) => {
            eprintln!("error: {}", f.message);
            ExitCode::from(f.code)
        }
    }
}
