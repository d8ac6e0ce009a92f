//! Command-line interface: table reproduction, certificates, chain diagrams,
//! two-progression tools and the Freiman checkers.

use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};
use num_rational::BigRational;
use serde::{Deserialize, Serialize};
use serde_json::json;

use crate::chains::{certify_all, certify_case, dot_file_name, emit_dot, summarize, CaseInput, CaseReport};
use crate::freiman::{check_freiman_3k4_prod, check_freiman_3k4_sum, FreimanReport};
use crate::gpunion::{
    count_family_solutions, sumset_breakdown, theorem_gpsum_bound, EquationInstance, EquationKind, GpUnion,
};
use crate::json::{canonical_json, sha256_hex};
use crate::num::{format_rational, parse_rational};
use crate::search::{
    assemble_certificate_cached, resolve_cache_dir, SearchError, DEFAULT_MAX_ELEMENT, EXAMPLE_SETS,
};
use crate::sets::{max_pair, IntSet};

pub const EXIT_OK: i32 = 0;
pub const EXIT_MISMATCH: i32 = 1;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_IO: i32 = 3;
pub const EXIT_BUDGET: i32 = 4;

/// Default cap for the ten-element exploration.
pub const SP10_DEFAULT_MAX_ELEMENT: u64 = 24;

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("usage: {0}")]
    Usage(String),
    #[error("i/o: {0}")]
    Io(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) => EXIT_USAGE,
            CliError::Io(_) => EXIT_IO,
        }
    }
}

fn usage(e: impl ToString) -> CliError {
    CliError::Usage(e.to_string())
}

#[derive(Debug, Parser)]
#[command(name = "sumprod", version, about = "Exact sum-product search and certificates")]
pub struct Cli {
    /// Output directory for result files and the run manifest.
    #[arg(long, global = true, default_value = "sumprod-out")]
    pub out: PathBuf,
    /// Worker threads; 0 picks automatically.
    #[arg(long, global = true, default_value_t = 0)]
    pub threads: usize,
    /// Directory for cached search results; SUMPROD_CACHE overrides it.
    #[arg(long, global = true)]
    pub cache_dir: Option<PathBuf>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Recompute the table of small-doubling examples.
    Table1,
    /// Certificate for SP(k), or the upper bound alone for k = 10.
    Sp(SpArgs),
    /// Pair-poset chain certificates and diagrams.
    Chains(ChainsArgs),
    /// Unions of two geometric progressions.
    Gp {
        #[command(subcommand)]
        command: GpCommand,
    },
    /// Exhaustive small-range Freiman checks.
    Freiman(FreimanArgs),
}

#[derive(Debug, Args)]
pub struct SpArgs {
    #[arg(long)]
    pub k: usize,
    /// Search cap; 64 by default, 24 for k = 10.
    #[arg(long = "M")]
    pub max_element: Option<u64>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Dot,
    Csv,
}

#[derive(Debug, Args)]
pub struct ChainsArgs {
    /// A single k or a range such as 4..7.
    #[arg(long)]
    pub k: String,
    /// One normalized case, e.g. 0,4,5,6,7,8.
    #[arg(long = "case")]
    pub case: Option<String>,
    #[arg(long, value_enum, default_value_t = Format::Dot)]
    pub format: Format,
}

#[derive(Debug, Subcommand)]
pub enum GpCommand {
    /// Sizes and overlaps of B+B, C+C and B+C.
    Breakdown {
        #[arg(long)]
        x: String,
        #[arg(long)]
        y: String,
        #[arg(long)]
        r: String,
        #[arg(long)]
        m: usize,
        #[arg(long)]
        n: usize,
    },
    /// Case bounds on |A+A| for k elements and ratio r.
    Bounds {
        #[arg(long)]
        k: usize,
        #[arg(long)]
        r: String,
    },
    /// Solutions of one coincidence equation in an exponent window.
    Families {
        #[arg(long)]
        r: String,
        #[arg(long)]
        z: String,
        #[arg(long)]
        kind: EquationKind,
        #[arg(long, default_value_t = 10)]
        window: i64,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum SideArg {
    Sum,
    Prod,
}

#[derive(Debug, Args)]
pub struct FreimanArgs {
    #[arg(long, value_enum)]
    pub side: SideArg,
    #[arg(long)]
    pub k: usize,
    #[arg(long = "N")]
    pub n: u64,
    /// Cap on candidate sets; exceeding it exits with code 4.
    #[arg(long)]
    pub budget: Option<u64>,
}

/// Record of one invocation. Every output file is listed with its hash.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct RunManifest {
    pub command_line: Vec<String>,
    pub parameters: serde_json::Value,
    pub tool_version: String,
    pub input_hashes: std::collections::BTreeMap<String, String>,
    pub wall_time_ms: u128,
    pub outputs: Vec<OutputFile>,
    pub exit_code: i32,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct OutputFile {
    pub path: String,
    pub sha256: String,
}

/// Outputs collected while a command runs.
pub struct Session {
    out: PathBuf,
    files: Vec<OutputFile>,
    stdout: String,
}

impl Session {
    fn new(out: &Path) -> Self {
        Session {
            out: out.to_path_buf(),
            files: Vec::new(),
            stdout: String::new(),
        }
    }

    fn write(&mut self, name: &str, contents: &str) -> Result<(), CliError> {
        let path = self.out.join(name);
        fs::write(&path, contents).map_err(|e| CliError::Io(format!("{}: {e}", path.display())))?;
        self.files.push(OutputFile {
            path: name.to_string(),
            sha256: sha256_hex(contents.as_bytes()),
        });
        Ok(())
    }

    fn say(&mut self, line: impl AsRef<str>) {
        self.stdout.push_str(line.as_ref());
        self.stdout.push('\n');
    }
}

/// Result of [`run`]: exit code, captured stdout and the manifest written.
pub struct Outcome {
    pub code: i32,
    pub stdout: String,
    pub manifest: Option<RunManifest>,
}

fn rational_arg(name: &str, text: &str) -> Result<BigRational, CliError> {
    parse_rational(text).map_err(|e| CliError::Usage(format!("--{name}: {e}")))
}

/// Parses `6`, `4..7` or `4..=7` into an inclusive range.
pub fn parse_k_range(text: &str) -> Result<(usize, usize), CliError> {
    let bad = || CliError::Usage(format!("--k: cannot read {text:?} as k or lo..hi"));
    let num = |s: &str| s.trim().parse::<usize>().map_err(|_| bad());
    let (lo, hi) = match text.split_once("..") {
        Some((a, b)) => (num(a)?, num(b.strip_prefix('=').unwrap_or(b))?),
        None => {
            let k = num(text)?;
            (k, k)
        }
    };
    if lo > hi || lo < 4 || hi > 7 {
        return Err(CliError::Usage(format!("--k: range {lo}..{hi} must lie within 4..7")));
    }
    Ok((lo, hi))
}

/// Parses `0,4,5,6,7,8`, optionally prefixed by a name and `=`.
pub fn parse_case(text: &str) -> Result<Vec<u64>, CliError> {
    let body = text.rsplit_once('=').map_or(text, |(_, b)| b);
    let body = body.trim().trim_start_matches('{').trim_end_matches('}');
    body.split(',')
        .map(|t| t.trim().parse::<u64>().map_err(|_| CliError::Usage(format!("--case: bad element {t:?}"))))
        .collect()
}

fn braces(v: &[u64]) -> String {
    let parts: Vec<String> = v.iter().map(u64::to_string).collect();
    format!("{{{}}}", parts.join(","))
}

fn cmd_table1(s: &mut Session) -> Result<i32, CliError> {
    let mut csv = String::from("k,A,sumset,product_set,expected_sumset,expected_product_set,match\n");
    let mut ok = true;
    for (k, a, want_s, want_p) in EXAMPLE_SETS {
        let mp = max_pair(&IntSet::from_u64s(a).expect("positive"));
        let hit = mp.sum_size == want_s && mp.product_size == want_p;
        ok &= hit;
        let set = braces(a);
        s.say(format!("{k} | {set} | {} | {}", mp.sum_size, mp.product_size));
        if !hit {
            s.say(format!("  mismatch: expected {want_s} | {want_p}"));
        }
        let _ = writeln!(csv, "{k},\"{set}\",{},{},{want_s},{want_p},{hit}", mp.sum_size, mp.product_size);
    }
    s.write("table1.csv", &csv)?;
    Ok(if ok { EXIT_OK } else { EXIT_MISMATCH })
}

fn cmd_sp(s: &mut Session, a: &SpArgs, cache: Option<&Path>) -> Result<i32, CliError> {
    if !(2..=10).contains(&a.k) {
        return Err(CliError::Usage(format!("--k must lie in 2..=10, got {}", a.k)));
    }
    let default = if a.k == 10 { SP10_DEFAULT_MAX_ELEMENT } else { DEFAULT_MAX_ELEMENT };
    let m = a.max_element.unwrap_or(default);
    let cert = assemble_certificate_cached(a.k, m, cache).map_err(|e| match e {
        SearchError::Cache(msg) => CliError::Io(msg),
        other => usage(other),
    })?;
    let name = format!("sp_k{}_M{m}.json", a.k);
    s.write(&name, &canonical_json(&cert).expect("serializable"))?;
    match cert.claimed_value {
        Some(c) => s.say(format!(
            "k={} claimed {c} upper {} lower {} ({}) all_pass={}",
            a.k,
            cert.upper.value,
            cert.lower.bound.map_or("-".into(), |b| b.to_string()),
            cert.lower.mode,
            cert.all_pass
        )),
        None => s.say(format!("k={}: upper bound {}, lower bound open", a.k, cert.upper.value)),
    }
    s.say(format!("certificate written to {name}"));
    Ok(if cert.all_pass { EXIT_OK } else { EXIT_MISMATCH })
}

fn case_output(s: &mut Session, report: &CaseReport, format: Format) -> Result<(), CliError> {
    match format {
        Format::Dot => s.write(&dot_file_name(report), &emit_dot(report)),
        Format::Json => {
            let name = dot_file_name(report).replace(".dot", ".json");
            s.write(&name, &canonical_json(report).expect("serializable"))
        }
        Format::Csv => Err(CliError::Usage("--format csv is not available for chains".into())),
    }
}

fn cmd_chains(s: &mut Session, a: &ChainsArgs) -> Result<i32, CliError> {
    let (lo, hi) = parse_k_range(&a.k)?;
    if a.format == Format::Csv {
        return Err(CliError::Usage("--format csv is not available for chains".into()));
    }
    if let Some(case) = &a.case {
        if lo != hi {
            return Err(CliError::Usage("--case needs a single --k".into()));
        }
        let input = CaseInput::new(lo, parse_case(case)?).map_err(usage)?;
        let report = certify_case(input);
        case_output(s, &report, a.format)?;
        s.say(format!(
            "k={} case {} {}: longest chain {} pass={}",
            lo,
            report.index,
            braces(&report.input.elements),
            report.longest,
            report.pass
        ));
        return Ok(if report.pass { EXIT_OK } else { EXIT_MISMATCH });
    }
    let mut summaries = Vec::new();
    for k in lo..=hi {
        let reports = certify_all(k).map_err(usage)?;
        for r in &reports {
            case_output(s, r, a.format)?;
        }
        let sm = summarize(k, &reports);
        s.say(format!(
            "k={k}: {} cases, min longest chain {}, all_pass={}",
            sm.cases, sm.min_longest_chain, sm.all_pass
        ));
        summaries.push(sm);
    }
    let all_pass = summaries.iter().all(|x| x.all_pass);
    let total: usize = summaries.iter().map(|x| x.cases).sum();
    let summary = json!({ "per_k": summaries, "total_cases": total, "all_pass": all_pass });
    s.write("chains_summary.json", &canonical_json(&summary).expect("serializable"))?;
    s.say(format!("total {total} cases, all_pass={all_pass}"));
    Ok(if all_pass { EXIT_OK } else { EXIT_MISMATCH })
}

fn cmd_gp(s: &mut Session, c: &GpCommand) -> Result<i32, CliError> {
    match c {
        GpCommand::Breakdown { x, y, r, m, n } => {
            let u = GpUnion::new(rational_arg("x", x)?, rational_arg("y", y)?, rational_arg("r", r)?, *m, *n)
                .map_err(usage)?;
            let bd = sumset_breakdown(&u);
            let list = |v: &[BigRational]| v.iter().map(format_rational).collect::<Vec<_>>().join(",");
            s.say(format!("{u}"));
            s.say(format!("|B+B| = {}  |C+C| = {}  |B+C| = {}", bd.bb, bd.cc, bd.bc));
            s.say(format!("(B+B)∩(C+C) = {{{}}}", list(&bd.bb_cc)));
            s.say(format!("(B+B)∩(B+C) = {{{}}}", list(&bd.bb_bc)));
            s.say(format!("(C+C)∩(B+C) = {{{}}}", list(&bd.cc_bc)));
            s.say(format!("|A+A| = {}", bd.total));
            let doc = json!({ "union": u, "breakdown": bd });
            s.write("gp_breakdown.json", &canonical_json(&doc).expect("serializable"))?;
        }
        GpCommand::Bounds { k, r } => {
            let r = rational_arg("r", r)?;
            let b = theorem_gpsum_bound(*k, &r).map_err(usage)?;
            let show = |v: Option<i64>| v.map_or("n/a".to_string(), |x| x.to_string());
            s.say(format!(
                "k={k} r={}: r!=2 odd {} | r!=2 even {} | growth {} | k=8 {} | selected {}",
                format_rational(&r),
                show(b.odd_neq2),
                show(b.even_neq2),
                show(b.growth),
                show(b.k8),
                b.selected()
            ));
            let doc = json!({ "k": k, "r": format_rational(&r), "case_bounds": b, "selected": b.selected() });
            s.write("gp_bounds.json", &canonical_json(&doc).expect("serializable"))?;
        }
        GpCommand::Families { r, z, kind, window } => {
            let e = EquationInstance::new(*kind, rational_arg("r", r)?, rational_arg("z", z)?).map_err(usage)?;
            let sols = count_family_solutions(&e, *window).map_err(usage)?;
            s.say(format!(
                "kind {:?} r={} z={} window {}: {} solution(s)",
                kind,
                format_rational(&e.r),
                format_rational(&e.z),
                window,
                sols.len()
            ));
            for t in &sols {
                s.say(format!("  a={} b={} c={}", t.a, t.b, t.c));
            }
            let doc = json!({ "equation": e, "window": window, "solutions": sols });
            s.write("gp_families.json", &canonical_json(&doc).expect("serializable"))?;
        }
    }
    Ok(EXIT_OK)
}

fn cmd_freiman(s: &mut Session, a: &FreimanArgs) -> Result<i32, CliError> {
    let report: FreimanReport = match a.side {
        SideArg::Sum => check_freiman_3k4_sum(a.k, a.n, a.budget),
        SideArg::Prod => check_freiman_3k4_prod(a.k, a.n, a.budget),
    }
    .map_err(usage)?;
    let side = match a.side {
        SideArg::Sum => "sum",
        SideArg::Prod => "prod",
    };
    s.write(
        &format!("freiman_{side}_k{}_N{}.json", a.k, a.n),
        &canonical_json(&report).expect("serializable"),
    )?;
    s.say(format!(
        "side={side} k={} N={}: {} sets, {} hypothesis hits, {} violations{}",
        a.k,
        a.n,
        report.sets_scanned,
        report.hypothesis_hits,
        report.violations.len(),
        if report.complete { "" } else { " (partial: budget exhausted)" }
    ));
    for v in &report.violations {
        s.say(format!("  {}: {}", braces(&v.set), v.what));
    }
    Ok(if !report.violations.is_empty() {
        EXIT_MISMATCH
    } else if !report.complete {
        EXIT_BUDGET
    } else {
        EXIT_OK
    })
}

fn parameters(cli: &Cli) -> serde_json::Value {
    let cmd = match &cli.command {
        Command::Table1 => json!({ "command": "table1" }),
        Command::Sp(a) => json!({ "command": "sp", "k": a.k, "M": a.max_element }),
        Command::Chains(a) => json!({ "command": "chains", "k": a.k, "case": a.case, "format": format!("{:?}", a.format) }),
        Command::Gp { command } => json!({ "command": "gp", "gp": format!("{command:?}") }),
        Command::Freiman(a) => json!({ "command": "freiman", "side": format!("{:?}", a.side), "k": a.k, "N": a.n, "budget": a.budget }),
    };
    json!({ "command": cmd, "threads": cli.threads })
}

/// Runs one parsed invocation, writing outputs and the manifest under
/// `cli.out`.
pub fn run(cli: &Cli, argv: &[String]) -> Outcome {
    let start = Instant::now();
    if cli.threads > 0 {
        // Fails only when the global pool already exists, which is harmless.
        let _ = rayon::ThreadPoolBuilder::new().num_threads(cli.threads).build_global();
    }
    if let Err(e) = fs::create_dir_all(&cli.out) {
        return Outcome {
            code: EXIT_IO,
            stdout: format!("error: i/o: {}: {e}\n", cli.out.display()),
            manifest: None,
        };
    }
    let cache = resolve_cache_dir(cli.cache_dir.as_deref());
    let mut s = Session::new(&cli.out);
    let result = match &cli.command {
        Command::Table1 => cmd_table1(&mut s),
        Command::Sp(a) => cmd_sp(&mut s, a, cache.as_deref()),
        Command::Chains(a) => cmd_chains(&mut s, a),
        Command::Gp { command } => cmd_gp(&mut s, command),
        Command::Freiman(a) => cmd_freiman(&mut s, a),
    };
    let code = match result {
        Ok(c) => c,
        Err(e) => {
            s.say(format!("error: {e}"));
            e.exit_code()
        }
    };
    let params = parameters(cli);
    let mut input_hashes = std::collections::BTreeMap::new();
    input_hashes.insert("parameters".to_string(), sha256_hex(canonical_json(&params).expect("json").as_bytes()));
    let manifest = RunManifest {
        command_line: argv.to_vec(),
        parameters: params,
        tool_version: env!("CARGO_PKG_VERSION").to_string(),
        input_hashes,
        wall_time_ms: start.elapsed().as_millis(),
        outputs: s.files.clone(),
        exit_code: code,
    };
    let path = cli.out.join("manifest.json");
    let code = match fs::write(&path, canonical_json(&manifest).expect("serializable")) {
        Ok(()) => code,
        Err(e) => {
            s.say(format!("error: i/o: {}: {e}", path.display()));
            EXIT_IO
        }
    };
    Outcome {
        code,
        stdout: s.stdout,
        manifest: Some(manifest),
    }
}

/// Parses `argv` (program name first) and runs it. Usage errors print the
/// clap message and return exit code 2.
pub fn main_with_args(argv: Vec<String>) -> Outcome {
    match Cli::try_parse_from(&argv) {
        Ok(cli) => run(&cli, &argv),
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            Outcome {
                code,
                stdout: e.render().to_string(),
                manifest: None,
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn args(v: &[&str]) -> Vec<String> {
        std::iter::once("sumprod").chain(v.iter().copied()).map(String::from).collect()
    }

    #[test]
    fn k_ranges() {
        assert_eq!(parse_k_range("4..7").unwrap(), (4, 7));
        assert_eq!(parse_k_range("4..=6").unwrap(), (4, 6));
        assert_eq!(parse_k_range("6").unwrap(), (6, 6));
        assert!(parse_k_range("8").is_err());
        assert!(parse_k_range("7..4").is_err());
        assert!(parse_k_range("x").is_err());
    }

    #[test]
    fn case_parsing() {
        assert_eq!(parse_case("Ã=0,4,5,6,7,8").unwrap(), vec![0, 4, 5, 6, 7, 8]);
        assert_eq!(parse_case("{0, 1,2}").unwrap(), vec![0, 1, 2]);
        assert!(parse_case("0,a").is_err());
    }

    #[test]
    fn decimals_are_usage_errors() {
        let dir = tempfile::tempdir().unwrap();
        let out = dir.path().to_str().unwrap();
        let o = main_with_args(args(&["--out", out, "gp", "bounds", "--k", "8", "--r", "2.5"]));
        assert_eq!(o.code, EXIT_USAGE);
        let o = main_with_args(args(&["--out", out, "gp", "bounds", "--k", "8", "--r", "1"]));
        assert_eq!(o.code, EXIT_USAGE);
    }

    #[test]
    fn unknown_flag_is_usage() {
        assert_eq!(main_with_args(args(&["table1", "--bogus"])).code, EXIT_USAGE);
    }
}
