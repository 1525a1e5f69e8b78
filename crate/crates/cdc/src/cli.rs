//! The `cdcw` command-line front end. Machine-readable results go to stdout
//! as JSON lines, human summaries to stderr.
//!
//! Exit codes: 0 success, 1 I/O failure, 2 invalid arguments or violated
//! hypotheses, 3 registry miss, 4 failed verification or table mismatch.

use std::collections::BTreeMap;
use std::ffi::OsString;
use std::io::Write;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};
use num_bigint::BigUint;
use serde::Serialize;

use crate::bounds::{
    cor45_poly, evaluate, optimize_parameters, reproduce_table, BoundPlan, Dependency, Family, Manifest, Registry, Target,
    TABLE_TITLES,
};
use crate::constructions::{build, BuildOptions, ConstructionFamily, ConstructionPlan};
use crate::counting::{bounded_rank_size, delsarte_rank_count, gauss_binomial, mrd_size};
use crate::error::{Error, Result};
use crate::limits;
use crate::subspaces::{verify_min_distance, Cdc, VerifyMode, VerifyReport};

#[derive(Parser, Debug)]
#[command(name = "cdcw", version, about = "Constructions, bounds and verification for constant-dimension subspace codes")]
struct Cli {
    /// Worker threads for verification, grid search and builds.
    #[arg(long, global = true)]
    jobs: Option<usize>,
    /// Extra registry file merged over the shipped base values.
    #[arg(long, global = true)]
    registry: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Exact counts: gauss N K Q | mrd Q A B D | delsarte Q A B D U | bounded Q A B D U.
    Count { expr: String, args: Vec<u64> },
    /// Evaluate a lower bound at given parameters, or optimize them.
    Bound(BoundArgs),
    /// Recompute published table rows.
    Table {
        /// Table number; all tables when omitted.
        #[arg(long)]
        table: Option<u32>,
        /// Only rows at this field order.
        #[arg(long)]
        q: Option<u64>,
        /// Manifest file replacing the shipped one.
        #[arg(long)]
        manifest: Option<PathBuf>,
    },
    /// Run a construction, optionally writing and verifying the code.
    Build(BuildArgs),
    /// Check the minimum distance of a code file.
    Verify {
        file: PathBuf,
        /// exhaustive or sample:N[:SEED].
        #[arg(long, default_value = "exhaustive")]
        mode: String,
        /// Seed for "sample:N" modes that omit one.
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Inspect the base-value registry.
    Registry {
        #[command(subcommand)]
        action: RegistryAction,
    },
}

#[derive(Subcommand, Debug)]
enum RegistryAction {
    /// Print every entry.
    List,
    /// Resolve A_q(n,d,k) through the rules and entries.
    Lookup { q: u64, n: u64, d: u64, k: u64 },
}

#[derive(Args, Debug, Default)]
struct Params {
    #[arg(long)]
    n1: Option<u64>,
    #[arg(long)]
    a1: Option<u64>,
    #[arg(long)]
    b1: Option<u64>,
    #[arg(long)]
    b2: Option<u64>,
    #[arg(long)]
    t1: Option<u64>,
    #[arg(long)]
    t2: Option<u64>,
    #[arg(long)]
    c1: Option<u64>,
    #[arg(long)]
    c2: Option<u64>,
    #[arg(long)]
    u1: Option<u64>,
    #[arg(long)]
    lambda: Option<u64>,
}

impl Params {
    fn map(&self) -> BTreeMap<String, u64> {
        let all = [
            ("n1", self.n1),
            ("a1", self.a1),
            ("b1", self.b1),
            ("b2", self.b2),
            ("t1", self.t1),
            ("t2", self.t2),
            ("c1", self.c1),
            ("c2", self.c2),
            ("u1", self.u1),
            ("lambda", self.lambda),
        ];
        all.into_iter().filter_map(|(k, v)| v.map(|v| (k.to_string(), v))).collect()
    }
}

#[derive(Args, Debug)]
struct TargetArgs {
    #[arg(long)]
    q: u64,
    #[arg(long)]
    n: u64,
    #[arg(long)]
    d: u64,
    #[arg(long)]
    k: u64,
}

#[derive(Args, Debug)]
struct BoundArgs {
    /// linkage, cor41, cor42, cor43, cor44 or cor45 (closed-form polynomial).
    #[arg(long)]
    family: String,
    #[command(flatten)]
    target: TargetArgs,
    #[command(flatten)]
    params: Params,
    /// Search the admissible grid instead of taking parameters.
    #[arg(long)]
    optimize: bool,
}

#[derive(Args, Debug)]
struct BuildArgs {
    /// Plan file; otherwise --family and the target and parameter flags.
    #[arg(long, conflicts_with = "family")]
    plan: Option<PathBuf>,
    /// linkage, blocks, multiblocks, parallel_blocks, multilevel_I or multilevel_II.
    #[arg(long, requires_all = ["q", "n", "d", "k"])]
    family: Option<String>,
    #[arg(long)]
    q: Option<u64>,
    #[arg(long)]
    n: Option<u64>,
    #[arg(long)]
    d: Option<u64>,
    #[arg(long)]
    k: Option<u64>,
    #[command(flatten)]
    params: Params,
    /// Count codewords without enumerating them.
    #[arg(long)]
    count_only: bool,
    /// Explicit-build cutoff in codewords.
    #[arg(long)]
    cutoff: Option<u64>,
    /// Where to write the canonical code file.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Verify the built code: exhaustive or sample:N[:SEED].
    #[arg(long)]
    mode: Option<String>,
    /// Seed for "sample:N" modes that omit one.
    #[arg(long, default_value_t = 0)]
    seed: u64,
}

/// Runs the CLI on `args` (program name first) and returns the exit code.
pub fn run<I, T>(args: I, out: &mut (dyn Write + Send), err: &mut (dyn Write + Send)) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let text = e.render().to_string();
            let _ = if code == 0 { out.write_all(text.as_bytes()) } else { err.write_all(text.as_bytes()) };
            return code;
        }
    };
    let result = match cli.jobs {
        Some(jobs) => match rayon::ThreadPoolBuilder::new().num_threads(jobs).build() {
            Ok(pool) => pool.install(|| dispatch(&cli, out, err)),
            Err(e) => Err(Error::InvalidParameters(format!("--jobs {jobs}: {e}"))),
        },
        None => dispatch(&cli, out, err),
    };
    match result {
        Ok(code) => code,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            e.exit_code()
        }
    }
}

fn emit<T: Serialize>(out: &mut (dyn Write + Send), value: &T) -> Result<()> {
    let line = serde_json::to_string(value).map_err(|e| Error::InvalidParameters(e.to_string()))?;
    writeln!(out, "{line}")?;
    Ok(())
}

fn registry(cli: &Cli) -> Result<Registry> {
    let mut reg = Registry::shipped();
    if let Some(path) = &cli.registry {
        reg.merge(Registry::load(path)?);
    }
    Ok(reg)
}

fn dispatch(cli: &Cli, out: &mut (dyn Write + Send), err: &mut (dyn Write + Send)) -> Result<i32> {
    match &cli.command {
        Command::Count { expr, args } => run_count(expr, args, out),
        Command::Bound(b) => run_bound(&registry(cli)?, b, out, err),
        Command::Table { table, q, manifest } => {
            let manifest = match manifest {
                Some(p) => Manifest::parse(&std::fs::read_to_string(p)?)?,
                None => Manifest::shipped(),
            };
            run_table(&registry(cli)?, &manifest, *table, *q, out, err)
        }
        Command::Build(b) => run_build(&registry(cli)?, b, out, err),
        Command::Verify { file, mode, seed } => {
            let code = Cdc::read(file)?;
            run_verify(&code, &parse_mode(mode, *seed)?, out, err)
        }
        Command::Registry { action } => {
            let reg = registry(cli)?;
            match action {
                RegistryAction::List => write!(out, "{}", reg.to_text())?,
                RegistryAction::Lookup { q, n, d, k } => emit(out, &reg.lookup(*q, *n, *d, *k)?)?,
            }
            Ok(0)
        }
    }
}

fn run_count(expr: &str, args: &[u64], out: &mut (dyn Write + Send)) -> Result<i32> {
    let arity = |n: usize, usage: &str| {
        if args.len() == n {
            Ok(())
        } else {
            Err(Error::InvalidParameters(format!("count {expr} takes {usage}, got {} arguments", args.len())))
        }
    };
    let value = match expr {
        "gauss" => {
            arity(3, "N K Q")?;
            gauss_binomial(args[0], args[1], args[2])
        }
        "mrd" => {
            arity(4, "Q A B D")?;
            mrd_size(args[0], args[1], args[2], args[3])?
        }
        "delsarte" => {
            arity(5, "Q A B D U")?;
            delsarte_rank_count(args[0], args[1], args[2], args[3], args[4])?
        }
        "bounded" => {
            arity(5, "Q A B D U")?;
            bounded_rank_size(args[0], args[1], args[2], args[3], args[4])?
        }
        _ => return Err(Error::InvalidParameters(format!("unknown count {expr:?}; expected gauss, mrd, delsarte or bounded"))),
    };
    writeln!(out, "{value}")?;
    Ok(0)
}

#[derive(Serialize)]
struct PolyReport {
    family: &'static str,
    target: Target,
    #[serde(serialize_with = "crate::bounds::ser_big")]
    total: BigUint,
    registry_dependencies: Vec<Dependency>,
}

fn run_bound(reg: &Registry, b: &BoundArgs, out: &mut (dyn Write + Send), err: &mut (dyn Write + Send)) -> Result<i32> {
    let t = &b.target;
    let target = Target::new(t.q, t.n, t.d, t.k);
    if b.family == "cor45" {
        let (total, deps) = cor45_poly(reg, (t.n, t.d, t.k), t.q)?;
        writeln!(err, "cor45 {target} >= {total}")?;
        emit(out, &PolyReport { family: "cor45", target, total, registry_dependencies: deps })?;
        return Ok(0);
    }
    let family = Family::parse(&b.family)?;
    let result = if b.optimize {
        optimize_parameters(reg, target, family)?
    } else {
        evaluate(reg, target, &BoundPlan::from_map(family, &target, &b.params.map())?)?
    };
    let params: Vec<String> = result.params.iter().map(|(k, v)| format!("{k}={v}")).collect();
    writeln!(err, "{family} {target} >= {} with {}", result.total, params.join(" "))?;
    for c in &result.components {
        writeln!(err, "  {} = {} = {}", c.name, c.factors.join("·"), c.value)?;
    }
    emit(out, &result)?;
    Ok(0)
}

fn run_table(
    reg: &Registry,
    manifest: &Manifest,
    table: Option<u32>,
    q: Option<u64>,
    out: &mut (dyn Write + Send),
    err: &mut (dyn Write + Send),
) -> Result<i32> {
    let tables: Vec<u32> = match table {
        Some(t) => vec![t],
        None => {
            let mut ids: Vec<u32> = manifest.rows.iter().map(|r| r.table).collect();
            ids.dedup();
            ids
        }
    };
    let mut mismatches = 0;
    for id in tables {
        let rows = reproduce_table(reg, manifest, id, q)?;
        let title = TABLE_TITLES.get(id as usize - 1).copied().unwrap_or("");
        let ok = rows.iter().filter(|r| r.matches).count();
        writeln!(err, "table {id} ({title}): {ok}/{} rows match", rows.len())?;
        for r in &rows {
            if !r.matches {
                mismatches += 1;
                writeln!(err, "  row {} {}: computed {}, published {}", r.row, r.target, r.computed, r.published_new)?;
            }
            emit(out, r)?;
        }
    }
    Ok(if mismatches == 0 { 0 } else { 4 })
}

fn parse_mode(mode: &str, seed: u64) -> Result<VerifyMode> {
    if mode.starts_with("sample:") && mode.matches(':').count() == 1 {
        return VerifyMode::parse(&format!("{mode}:{seed}"));
    }
    VerifyMode::parse(mode)
}

fn print_verification(
    report: &VerifyReport,
    code: &Cdc,
    out: &mut (dyn Write + Send),
    err: &mut (dyn Write + Send),
) -> Result<i32> {
    let found = report.min_found.map_or("none".to_string(), |d| d.to_string());
    writeln!(
        err,
        "{} codewords, claimed d = {}, min found = {found}, {} pairs checked: {}",
        report.codewords,
        report.claimed_distance,
        report.pairs_checked,
        if report.passed { "PASS" } else { "FAIL" }
    )?;
    if let (false, Some((i, j))) = (report.passed, report.witness) {
        for (label, idx) in [("first", i), ("second", j)] {
            writeln!(err, "{label} witness (codeword {idx}):")?;
            for r in 0..code.dim() {
                let row: Vec<String> = code.codewords()[idx].rref().row(r).iter().map(|e| e.to_string()).collect();
                writeln!(err, "  {}", row.join(" "))?;
            }
        }
    }
    emit(out, report)?;
    Ok(if report.passed { 0 } else { 4 })
}

fn run_verify(code: &Cdc, mode: &VerifyMode, out: &mut (dyn Write + Send), err: &mut (dyn Write + Send)) -> Result<i32> {
    let report = verify_min_distance(code, *mode)?;
    print_verification(&report, code, out, err)
}

fn run_build(reg: &Registry, b: &BuildArgs, out: &mut (dyn Write + Send), err: &mut (dyn Write + Send)) -> Result<i32> {
    let plan = match (&b.plan, &b.family) {
        (Some(path), _) => ConstructionPlan::load(path)?,
        (None, Some(family)) => {
            let need = |v: Option<u64>| v.expect("clap enforces the target flags");
            ConstructionPlan::new(
                ConstructionFamily::parse(family)?,
                need(b.q),
                need(b.n),
                need(b.d),
                need(b.k),
                &b.params.map(),
            )?
        }
        (None, None) => return Err(Error::InvalidParameters("build needs --plan or --family".into())),
    };
    let opts = BuildOptions { count_only: b.count_only, cutoff: b.cutoff.unwrap_or_else(limits::build_cutoff) };
    let output = build(&plan, reg, opts)?;
    writeln!(err, "{}", plan.tag())?;
    for c in &output.components {
        writeln!(err, "  {} = {}", c.name, c.count)?;
    }
    writeln!(err, "  total = {} ({})", output.total, if output.is_explicit() { "explicit" } else { "counts only" })?;
    for note in &output.notes {
        writeln!(err, "  note: {note}")?;
    }
    emit(out, &output.report())?;
    let Some(cdc) = &output.cdc else {
        if b.out.is_some() || b.mode.is_some() {
            writeln!(err, "no explicit code: nothing written or verified")?;
        }
        return Ok(0);
    };
    if let Some(path) = &b.out {
        cdc.write(path)?;
        writeln!(err, "wrote {} codewords to {}", cdc.len(), path.display())?;
    }
    match &b.mode {
        Some(mode) => run_verify(cdc, &parse_mode(mode, b.seed)?, out, err),
        None => Ok(0),
    }
}
