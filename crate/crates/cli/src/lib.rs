//! Command implementations for the `bn-atlas` binary.
//!
//! Every command writes to a caller-supplied sink and returns an exit code,
//! so the binary and the tests drive exactly the same code.

pub mod render;
pub mod scan;

use std::io::Write;
use std::path::{Path, PathBuf};

use anyhow::{Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

use bn_atlas_core::chains::{build_chain_prop31, build_chain_search, ChainDecomposition};
use bn_atlas_core::dimension::{expected_dim_certificate, render_tree, verify_dim_certificate};
use bn_atlas_core::locus::{adjusted_rho, PointedLocusId, VanishingSequence};
use bn_atlas_core::maximal::{conjecture_status, expected_maximal_entries};
use bn_atlas_core::noncontainment::{build_stratification_graph, consistency_check, to_dot, to_json};
use bn_atlas_core::prym::{cor54_certificates, cor55_check, prym_params, Cor55Outcome};
use bn_atlas_core::{Int, LocusId};

pub const EXIT_OK: u8 = 0;
pub const EXIT_DOMAIN: u8 = 2;
pub const EXIT_FINDING: u8 = 3;
pub const EXIT_REVERIFY: u8 = 4;

#[derive(Parser, Debug)]
#[command(name = "bn-atlas", version, about = "Brill-Noether loci: numbers, chains, certificates")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Brill-Noether number, adjusted by imposed vanishing sequences
    Rho(RhoArgs),
    /// Expected maximal loci of one genus
    Maximal(MaximalArgs),
    /// Chain-curve decomposition of a locus
    Chain(ChainArgs),
    /// Stratification graph of the expected maximal loci of one genus
    Poset(PosetArgs),
    /// Recursion certificate for a component of expected dimension
    Dimcert(DimcertArgs),
    /// Prym parameters and the non-containments they give
    Prym(PrymArgs),
    /// Batch graphs for a range of genera with on-disk persistence
    Scan(ScanArgs),
}

#[derive(Args, Debug, Clone, Copy)]
pub struct Triple {
    #[arg(long)]
    pub g: Int,
    #[arg(long)]
    pub r: Int,
    #[arg(long)]
    pub d: Int,
}

impl Triple {
    fn locus(&self) -> bn_atlas_core::Result<LocusId> {
        LocusId::new(self.g, self.r, self.d)
    }
}

/// `--json` alone writes to stdout, `--json PATH` writes a file.
#[derive(Args, Debug, Clone)]
pub struct JsonOut {
    #[arg(long, num_args = 0..=1, value_name = "PATH")]
    pub json: Option<Option<PathBuf>>,
}

#[derive(Args, Debug)]
pub struct RhoArgs {
    #[command(flatten)]
    pub triple: Triple,
    /// Vanishing sequence a0,a1,...,ar at a marked point; repeatable
    #[arg(long, value_delimiter = ',', num_args = 1, action = clap::ArgAction::Append)]
    pub ram: Vec<Int>,
    #[arg(skip)]
    pub ram_groups: Vec<Vec<Int>>,
    #[arg(long)]
    pub json: bool,
}

#[derive(Args, Debug)]
pub struct MaximalArgs {
    #[arg(long)]
    pub g: Int,
    #[command(flatten)]
    pub out: JsonOut,
}

#[derive(ValueEnum, Debug, Clone, Copy, PartialEq, Eq)]
pub enum ChainModeArg {
    Prop31,
    Search,
}

#[derive(Args, Debug)]
pub struct ChainArgs {
    #[command(flatten)]
    pub triple: Triple,
    #[arg(long, value_enum, default_value_t = ChainModeArg::Prop31)]
    pub mode: ChainModeArg,
    /// Allowed component rho values in search mode
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true, default_value = "-1,-2,-3")]
    pub allowed: Vec<Int>,
    #[command(flatten)]
    pub out: JsonOut,
}

#[derive(Args, Debug)]
pub struct PosetArgs {
    #[arg(long)]
    pub g: Int,
    #[arg(long, value_name = "PATH")]
    pub dot: Option<PathBuf>,
    #[arg(long, value_name = "PATH")]
    pub json: Option<PathBuf>,
}

#[derive(Args, Debug)]
pub struct DimcertArgs {
    #[command(flatten)]
    pub triple: Triple,
    #[command(flatten)]
    pub out: JsonOut,
}

#[derive(Args, Debug)]
pub struct PrymArgs {
    #[arg(long)]
    pub r: Int,
    #[arg(long, default_value_t = 0)]
    pub eps: Int,
    /// Check the r^2 + r + 1 family instead of listing certificates
    #[arg(long)]
    pub cor55: bool,
    #[command(flatten)]
    pub out: JsonOut,
}

#[derive(Args, Debug)]
pub struct ScanArgs {
    #[arg(long)]
    pub from: Int,
    #[arg(long)]
    pub to: Int,
    #[arg(long)]
    pub out: PathBuf,
    #[arg(long, default_value_t = 1)]
    pub jobs: usize,
}

/// Machine-readable finding printed as one JSON line.
#[derive(Debug, Serialize)]
pub struct Finding<T: Serialize> {
    pub finding: &'static str,
    pub detail: T,
}

/// Maps a library error to the exit-code contract.
pub fn exit_code_for(err: &anyhow::Error) -> u8 {
    match err.downcast_ref::<bn_atlas_core::Error>() {
        Some(e) => match e.code() {
            "domain" | "overflow" | "star-violated" | "oracle-scale" => EXIT_DOMAIN,
            "no-decomposition-found" => EXIT_FINDING,
            _ => 1,
        },
        None => match err.downcast_ref::<scan::ScanError>() {
            Some(scan::ScanError::Unwritable(..)) | Some(scan::ScanError::BadRange(..)) => EXIT_DOMAIN,
            Some(scan::ScanError::Reverify(_)) => EXIT_REVERIFY,
            None => 1,
        },
    }
}

pub fn run(cli: &Cli, out: &mut dyn Write) -> Result<u8> {
    match &cli.command {
        Command::Rho(a) => cmd_rho(a, out),
        Command::Maximal(a) => cmd_maximal(a, out),
        Command::Chain(a) => cmd_chain(a, out),
        Command::Poset(a) => cmd_poset(a, out),
        Command::Dimcert(a) => cmd_dimcert(a, out),
        Command::Prym(a) => cmd_prym(a, out),
        Command::Scan(a) => scan::cmd_scan(a, out),
    }
}

fn write_json<T: Serialize>(value: &T, target: &Option<Option<PathBuf>>, out: &mut dyn Write) -> Result<bool> {
    match target {
        None => Ok(false),
        Some(None) => {
            writeln!(out, "{}", serde_json::to_string_pretty(value)?)?;
            Ok(true)
        }
        Some(Some(path)) => {
            write_file(path, &(serde_json::to_string_pretty(value)? + "\n"))?;
            Ok(false)
        }
    }
}

pub(crate) fn write_file(path: &Path, text: &str) -> Result<()> {
    std::fs::write(path, text).with_context(|| format!("writing {}", path.display()))
}

pub fn cmd_rho(a: &RhoArgs, out: &mut dyn Write) -> Result<u8> {
    let base = a.triple.locus()?;
    let marks = a
        .ram_groups
        .iter()
        .map(|v| VanishingSequence::new(v.clone(), base.d()))
        .collect::<bn_atlas_core::Result<Vec<_>>>()?;
    let value = if marks.is_empty() {
        base.rho()
    } else {
        adjusted_rho(&PointedLocusId::from_vanishing(base, marks)?)?
    };
    if a.json {
        writeln!(out, "{}", serde_json::json!({ "rho": value }))?;
    } else {
        writeln!(out, "{value}")?;
    }
    Ok(EXIT_OK)
}

pub fn cmd_maximal(a: &MaximalArgs, out: &mut dyn Write) -> Result<u8> {
    let rows = expected_maximal_entries(a.g)?;
    let status = conjecture_status(a.g)?;
    let payload = serde_json::json!({ "genus": a.g, "status": status, "loci": rows });
    if !write_json(&payload, &a.out.json, out)? {
        out.write_all(render::maximal_table(&rows).as_bytes())?;
    }
    Ok(EXIT_OK)
}

pub fn cmd_chain(a: &ChainArgs, out: &mut dyn Write) -> Result<u8> {
    let l = a.triple.locus()?;
    let built = match a.mode {
        ChainModeArg::Prop31 => build_chain_prop31(&l),
        ChainModeArg::Search => build_chain_search(&l, &a.allowed),
    };
    let chain: ChainDecomposition = match built {
        Ok(c) => c,
        Err(e @ bn_atlas_core::Error::NoDecompositionFound { .. }) => {
            let f = Finding {
                finding: "no-decomposition-found",
                detail: serde_json::json!({ "locus": l, "allowed": a.allowed, "message": e.to_string() }),
            };
            writeln!(out, "{}", serde_json::to_string(&f)?)?;
            return Ok(EXIT_FINDING);
        }
        Err(e) => return Err(e.into()),
    };
    if !write_json(&chain, &a.out.json, out)? {
        out.write_all(render::chain_text(&chain).as_bytes())?;
    }
    if !chain.report.passed() {
        let f = Finding {
            finding: "verification-failed",
            detail: chain.report.failures(),
        };
        writeln!(out, "{}", serde_json::to_string(&f)?)?;
        return Ok(EXIT_FINDING);
    }
    Ok(EXIT_OK)
}

pub fn cmd_poset(a: &PosetArgs, out: &mut dyn Write) -> Result<u8> {
    let graph = build_stratification_graph(a.g)?;
    let report = consistency_check(&graph);
    if let Some(p) = &a.dot {
        write_file(p, &to_dot(&graph))?;
    }
    if let Some(p) = &a.json {
        write_file(p, &(to_json(&graph) + "\n"))?;
    }
    out.write_all(render::graph_text(&graph, &report).as_bytes())?;
    Ok(if report.passed { EXIT_OK } else { EXIT_REVERIFY })
}

pub fn cmd_dimcert(a: &DimcertArgs, out: &mut dyn Write) -> Result<u8> {
    let l = a.triple.locus()?;
    let cert = expected_dim_certificate(&l)?;
    let report = verify_dim_certificate(&cert);
    let payload = serde_json::json!({ "certificate": cert, "report": report });
    if !write_json(&payload, &a.out.json, out)? {
        out.write_all(render_tree(&cert).as_bytes())?;
        writeln!(out, "nodes: {}, verification: {}", report.nodes, if report.passed { "pass" } else { "FAIL" })?;
        for f in &report.failures {
            writeln!(out, "  {}: {}", f.path, f.check)?;
        }
    }
    Ok(if report.passed { EXIT_OK } else { EXIT_FINDING })
}

pub fn cmd_prym(a: &PrymArgs, out: &mut dyn Write) -> Result<u8> {
    if a.cor55 {
        return match cor55_check(a.r)? {
            Cor55Outcome::Certificate(c) => {
                if !write_json(&c, &a.out.json, out)? {
                    writeln!(out, "{}", render::certificate_line(&c))?;
                }
                Ok(EXIT_OK)
            }
            Cor55Outcome::HypothesisGap(gap) => {
                let f = Finding {
                    finding: "hypothesis-gap",
                    detail: gap,
                };
                writeln!(out, "{}", serde_json::to_string(&f)?)?;
                Ok(EXIT_FINDING)
            }
        };
    }
    let params = prym_params(a.r, a.eps)?;
    let certs = cor54_certificates(a.r, a.eps)?;
    let payload = serde_json::json!({ "params": params, "certificates": certs });
    if !write_json(&payload, &a.out.json, out)? {
        out.write_all(render::prym_text(&params, &certs).as_bytes())?;
    }
    Ok(EXIT_OK)
}

/// Splits repeated `--ram` occurrences back into groups using the raw matches.
pub fn parse_cli<I, T>(args: I) -> Result<Cli, clap::Error>
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    use clap::{CommandFactory, FromArgMatches};
    let matches = Cli::command().try_get_matches_from(args)?;
    let mut cli = Cli::from_arg_matches(&matches)?;
    if let Command::Rho(a) = &mut cli.command {
        if let Some(("rho", sub)) = matches.subcommand() {
            if let Some(groups) = sub.get_occurrences::<Int>("ram") {
                a.ram_groups = groups.map(|g| g.copied().collect()).collect();
            }
        }
    }
    Ok(cli)
}
