mod literal;

use std::fs;
use std::io::{self, Write};
use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

use repfn_core::verify::{self, Scope, VerifyConfig};
use repfn_core::{
    balanced_by_factors, balanced_oracle, balanced_predicate, canonical_balanced_set, canonicalize,
    count_balanced, count_balanced_exact, enumerate_balanced, exists_divisibility, exists_parity,
    gcd_profile, pair_search, rep_naive, t_ary_balanced_search, Decider, Error, GcdProfile,
    Instance, RepProfile, ResidueSet, SearchConfig, SearchLimits, SearchReport, Witness,
};

const EXIT_TRUE: u8 = 0;
const EXIT_FALSE: u8 = 1;
const EXIT_VIOLATION: u8 = 2;
const EXIT_USAGE: u8 = 64;
const EXIT_RANGE: u8 = 65;
const EXIT_IO: u8 = 74;

#[derive(Parser)]
#[command(
    name = "repfn",
    version,
    about = "Weighted representation functions on Z_m"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Decide whether A and its complement share a representation profile.
    Check(CheckArgs),
    /// Decide whether any complement-balanced set exists for (m, k1, k2).
    Exists(InstanceArgs),
    /// Print the representation profile of A and of its complement (any number of weights).
    Profile(CheckArgs),
    /// List every complement-balanced set.
    Enumerate(EnumerateArgs),
    /// List unordered pairs of distinct sets with equal profiles.
    Pairs(PairsArgs),
    /// Complement-balanced sets for three or more weights.
    Tary(SearchArgs),
    /// Run the verification sweeps.
    Verify(VerifyArgs),
}

#[derive(Args)]
struct OutputArgs {
    /// Emit one JSON document instead of text.
    #[arg(long)]
    json: bool,
    /// Write output to this file instead of stdout.
    #[arg(long, value_name = "PATH")]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct InstanceArgs {
    #[arg(short = 'm', value_name = "M", allow_hyphen_values = true)]
    m: i64,
    /// Comma-separated weights, e.g. `4,6`.
    #[arg(short = 'k', value_name = "K1,K2,...", allow_hyphen_values = true)]
    k: String,
    #[command(flatten)]
    output: OutputArgs,
}

#[derive(Args)]
struct CheckArgs {
    #[command(flatten)]
    instance: InstanceArgs,
    /// Comma-separated residues, e.g. `0,1,5`.
    #[arg(
        short = 'A',
        value_name = "A",
        allow_hyphen_values = true,
        default_value = ""
    )]
    set: String,
    /// Largest m for which the brute-force oracle also runs.
    #[arg(long, env = "REPFN_MAX_M")]
    max_m: Option<u32>,
}

#[derive(Args)]
struct SearchArgs {
    #[command(flatten)]
    instance: InstanceArgs,
    #[arg(long, default_value_t = default_workers())]
    workers: usize,
    #[arg(long, default_value_t = 1_000_000)]
    witness_cap: usize,
    /// Raise the search bound to this m.
    #[arg(long, env = "REPFN_MAX_M")]
    max_m: Option<u32>,
    /// Write witnesses as CSV, one set literal per field.
    #[arg(long, conflicts_with = "json")]
    csv: bool,
}

#[derive(Args)]
struct EnumerateArgs {
    #[command(flatten)]
    search: SearchArgs,
    #[arg(long, value_enum, default_value_t = ModeArg::Oracle)]
    mode: ModeArg,
}

#[derive(Args)]
struct PairsArgs {
    #[command(flatten)]
    search: SearchArgs,
    /// Drop pairs where B is the complement of A.
    #[arg(long)]
    exclude_trivial: bool,
}

#[derive(Clone, Copy, ValueEnum)]
enum ModeArg {
    Oracle,
    Predicate,
    /// Uniformity modulo d1/d3 and d2/d3 separately.
    Factors,
}

#[derive(Args)]
struct VerifyArgs {
    #[arg(long, default_value_t = 12)]
    max_m: u32,
    #[arg(long, default_value = "all")]
    scope: Scope,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, default_value_t = default_workers())]
    workers: usize,
    #[command(flatten)]
    output: OutputArgs,
}

fn default_workers() -> usize {
    std::thread::available_parallelism().map_or(1, |n| n.get())
}

/// A failed command and the exit status it maps to.
struct Failure {
    code: u8,
    message: String,
}

impl Failure {
    fn usage(message: impl Into<String>) -> Self {
        Self {
            code: EXIT_USAGE,
            message: message.into(),
        }
    }
}

impl From<Error> for Failure {
    fn from(err: Error) -> Self {
        let code = match err {
            Error::ResidueOutOfRange { .. }
            | Error::BoundExceeded { .. }
            | Error::ModulusTooLarge { .. } => EXIT_RANGE,
            _ => EXIT_USAGE,
        };
        Self {
            code,
            message: err.to_string(),
        }
    }
}

impl From<literal::LiteralError> for Failure {
    fn from(err: literal::LiteralError) -> Self {
        Self::usage(err.0)
    }
}

impl From<io::Error> for Failure {
    fn from(err: io::Error) -> Self {
        Self {
            code: EXIT_IO,
            message: err.to_string(),
        }
    }
}

type CmdResult = Result<u8, Failure>;

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(err) => {
            let code = if err.use_stderr() {
                EXIT_USAGE
            } else {
                EXIT_TRUE
            };
            let _ = err.print();
            return ExitCode::from(code);
        }
    };
    let result = match cli.command {
        Command::Check(args) => cmd_check(&args),
        Command::Exists(args) => cmd_exists(&args),
        Command::Profile(args) => cmd_profile(&args),
        Command::Enumerate(args) => cmd_enumerate(&args),
        Command::Pairs(args) => cmd_pairs(&args),
        Command::Tary(args) => cmd_tary(&args),
        Command::Verify(args) => cmd_verify(&args),
    };
    match result {
        Ok(code) => ExitCode::from(code),
        Err(failure) => {
            eprintln!("error: {}", failure.message);
            ExitCode::from(failure.code)
        }
    }
}

fn instance(args: &InstanceArgs) -> Result<Instance, Failure> {
    let weights = literal::parse_list(&args.k)?;
    Ok(canonicalize(args.m, &weights)?)
}

fn residue_set(inst: &Instance, literal: &str) -> Result<ResidueSet, Failure> {
    let members = literal::parse_set(literal)?;
    Ok(ResidueSet::from_members(inst.m(), members)?)
}

fn emit(output: &OutputArgs, text: &str) -> io::Result<()> {
    match &output.out {
        Some(path) => fs::write(path, text),
        None => io::stdout().lock().write_all(text.as_bytes()),
    }
}

fn emit_json<T: Serialize>(output: &OutputArgs, value: &T) -> Result<(), Failure> {
    let mut text = serde_json::to_string_pretty(value).expect("reports serialize");
    text.push('\n');
    Ok(emit(output, &text)?)
}

fn join(values: &[u64]) -> String {
    values
        .iter()
        .map(u64::to_string)
        .collect::<Vec<_>>()
        .join(",")
}

#[derive(Serialize)]
struct Verdicts {
    predicate: bool,
    factors: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    oracle: Option<bool>,
}

#[derive(Serialize)]
struct Profiles {
    set: RepProfile,
    complement: RepProfile,
}

#[derive(Serialize)]
struct CheckReport {
    instance: Instance,
    set: ResidueSet,
    gcd_profile: GcdProfile,
    verdicts: Verdicts,
    profiles: Profiles,
    elapsed_ms: u64,
}

fn cmd_check(args: &CheckArgs) -> CmdResult {
    let start = Instant::now();
    let inst = instance(&args.instance)?;
    let set = residue_set(&inst, &args.set)?;
    let gcd = gcd_profile(&inst)?;
    let oracle_bound = SearchLimits::default()
        .raised_to(args.max_m.unwrap_or(0))
        .enumerate_oracle;
    let predicate = balanced_predicate(&set, &inst)?;
    let factors = balanced_by_factors(&set, &inst)?;
    let oracle = if inst.m() <= oracle_bound {
        Some(balanced_oracle(&set, &inst)?)
    } else {
        None
    };
    let profiles = Profiles {
        set: rep_naive(&set, &inst)?,
        complement: rep_naive(&set.complement(), &inst)?,
    };
    let code = match oracle {
        Some(o) if o != predicate => EXIT_VIOLATION,
        _ if predicate => EXIT_TRUE,
        _ => EXIT_FALSE,
    };
    let report = CheckReport {
        instance: inst,
        set,
        gcd_profile: gcd,
        verdicts: Verdicts {
            predicate,
            factors,
            oracle,
        },
        profiles,
        elapsed_ms: start.elapsed().as_millis() as u64,
    };
    let output = &args.instance.output;
    if output.json {
        emit_json(output, &report)?;
    } else {
        let mut text = format!("instance: {}\nA: {{{}}}\n", report.instance, report.set);
        text += &format!(
            "gcd profile: d1={} d2={} d3={} d={}\n",
            gcd.d1, gcd.d2, gcd.d3, gcd.d
        );
        text += &format!("balanced (predicate): {predicate}\n");
        text += &format!("balanced (factors): {factors}\n");
        match oracle {
            Some(o) => text += &format!("balanced (oracle): {o}\n"),
            None => text += &format!("balanced (oracle): skipped, m > {oracle_bound}\n"),
        }
        text += &format!("profile A:  [{}]\n", join(&report.profiles.set.counts));
        text += &format!(
            "profile B:  [{}]\n",
            join(&report.profiles.complement.counts)
        );
        if code == EXIT_VIOLATION {
            text += "VIOLATION: predicate and oracle disagree\n";
        }
        emit(output, &text)?;
    }
    Ok(code)
}

#[derive(Serialize)]
struct ExistsReport {
    instance: Instance,
    gcd_profile: GcdProfile,
    verdicts: ExistsVerdicts,
    counts: u128,
    exact_counts: u128,
    #[serde(skip_serializing_if = "Option::is_none")]
    witness: Option<ResidueSet>,
    elapsed_ms: u64,
}

#[derive(Serialize)]
struct ExistsVerdicts {
    divisibility: bool,
    parity: bool,
}

fn cmd_exists(args: &InstanceArgs) -> CmdResult {
    let start = Instant::now();
    let inst = instance(args)?;
    let gcd = gcd_profile(&inst)?;
    let divisibility = exists_divisibility(&inst)?;
    let parity = exists_parity(&inst)?;
    let witness = if divisibility {
        Some(canonical_balanced_set(&inst)?)
    } else {
        None
    };
    let counts = count_balanced(&inst)?;
    let exact_counts = count_balanced_exact(&inst)?;
    let code = if divisibility != parity {
        EXIT_VIOLATION
    } else if divisibility {
        EXIT_TRUE
    } else {
        EXIT_FALSE
    };
    let report = ExistsReport {
        instance: inst,
        gcd_profile: gcd,
        verdicts: ExistsVerdicts {
            divisibility,
            parity,
        },
        counts,
        exact_counts,
        witness,
        elapsed_ms: start.elapsed().as_millis() as u64,
    };
    if args.output.json {
        emit_json(&args.output, &report)?;
    } else {
        let mut text = format!("instance: {}\n", report.instance);
        text += &format!(
            "gcd profile: d1={} d2={} d3={} d={}\n",
            gcd.d1, gcd.d2, gcd.d3, gcd.d
        );
        text += &format!("exists (2d | m): {divisibility}\n");
        text += &format!("exists (parity/2-adic): {parity}\n");
        text += &format!("count (closed form): {counts}\n");
        text += &format!("count (exact): {exact_counts}\n");
        if let Some(w) = &report.witness {
            text += &format!("witness: {{{w}}}\n");
        }
        if code == EXIT_VIOLATION {
            text += "VIOLATION: existence criteria disagree\n";
        }
        emit(&args.output, &text)?;
    }
    Ok(code)
}

fn cmd_profile(args: &CheckArgs) -> CmdResult {
    let inst = instance(&args.instance)?;
    let set = residue_set(&inst, &args.set)?;
    let profiles = Profiles {
        set: rep_naive(&set, &inst)?,
        complement: rep_naive(&set.complement(), &inst)?,
    };
    let output = &args.instance.output;
    if output.json {
        emit_json(output, &profiles)?;
    } else {
        let text = format!(
            "instance: {inst}\nA: {{{set}}}\nprofile A:  [{}]\nprofile B:  [{}]\n",
            join(&profiles.set.counts),
            join(&profiles.complement.counts)
        );
        emit(output, &text)?;
    }
    Ok(EXIT_TRUE)
}

fn search_config(args: &SearchArgs) -> SearchConfig {
    let limits = SearchLimits::default().raised_to(args.max_m.unwrap_or(0));
    SearchConfig {
        workers: args.workers.max(1),
        witness_cap: args.witness_cap,
        limits,
        size_prefilter: true,
    }
}

fn witness_fields(w: &Witness) -> Vec<String> {
    match w {
        Witness::Set(s) => vec![s.to_string()],
        Witness::Pair(a, b) => vec![a.to_string(), b.to_string()],
    }
}

fn emit_search(args: &SearchArgs, report: &SearchReport) -> CmdResult {
    let output = &args.instance.output;
    if output.json {
        emit_json(output, report)?;
    } else if args.csv {
        let mut writer = csv::WriterBuilder::new()
            .flexible(true)
            .from_writer(Vec::new());
        for w in &report.witnesses {
            writer
                .write_record(witness_fields(w))
                .map_err(|e| Failure {
                    code: EXIT_IO,
                    message: e.to_string(),
                })?;
        }
        let bytes = writer.into_inner().map_err(|e| Failure {
            code: EXIT_IO,
            message: e.to_string(),
        })?;
        emit(
            output,
            &String::from_utf8(bytes).expect("csv of ascii literals"),
        )?;
    } else {
        let mut text = format!("instance: {}\n", report.instance);
        for w in &report.witnesses {
            text += &match w {
                Witness::Set(s) => format!("{{{s}}}\n"),
                Witness::Pair(a, b) => format!("{{{a}}} / {{{b}}}\n"),
            };
        }
        text += &format!("count: {}\n", report.counts);
        if report.truncated {
            text += &format!("(witness list truncated to {})\n", report.witnesses.len());
        }
        text += &format!("elapsed: {} ms\n", report.elapsed_ms);
        emit(output, &text)?;
    }
    Ok(if report.witness_exists {
        EXIT_TRUE
    } else {
        EXIT_FALSE
    })
}

fn cmd_enumerate(args: &EnumerateArgs) -> CmdResult {
    let inst = instance(&args.search.instance)?;
    let decider = match args.mode {
        ModeArg::Oracle => Decider::Oracle,
        ModeArg::Predicate => Decider::Predicate,
        ModeArg::Factors => Decider::Factors,
    };
    let report = enumerate_balanced(&inst, decider, &search_config(&args.search))?;
    emit_search(&args.search, &report)
}

fn cmd_pairs(args: &PairsArgs) -> CmdResult {
    let inst = instance(&args.search.instance)?;
    let report = pair_search(&inst, args.exclude_trivial, &search_config(&args.search))?;
    emit_search(&args.search, &report)
}

fn cmd_tary(args: &SearchArgs) -> CmdResult {
    let inst = instance(&args.instance)?;
    let report = t_ary_balanced_search(&inst, &search_config(args))?;
    emit_search(args, &report)
}

fn cmd_verify(args: &VerifyArgs) -> CmdResult {
    if args.max_m < 2 {
        return Err(Failure::usage(format!(
            "--max-m must be at least 2, got {}",
            args.max_m
        )));
    }
    let report = verify::run(&VerifyConfig {
        max_m: args.max_m,
        scope: args.scope,
        seed: args.seed,
        workers: args.workers.max(1),
    })?;
    if args.output.json {
        emit_json(&args.output, &report)?;
    } else {
        let mut text = String::new();
        for check in &report.checks {
            text += &format!("{check}\n");
        }
        text += if report.passed() {
            "all checks passed\n"
        } else {
            "VERIFICATION FAILED\n"
        };
        emit(&args.output, &text)?;
    }
    if !report.passed() {
        if let Some(cex) = report
            .checks
            .iter()
            .find_map(|c| c.first_counterexample.as_ref())
        {
            eprintln!("first counterexample: {cex}");
        }
        return Ok(EXIT_VIOLATION);
    }
    Ok(EXIT_TRUE)
}
