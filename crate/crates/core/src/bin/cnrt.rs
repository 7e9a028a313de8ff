use std::fs::File;
use std::io::{BufReader, BufWriter, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::json;

use cnrt::disbursement::{canonical_disbursement, SpinState};
use cnrt::solver::{factorial, load_or_build, unrank_permutation, DistanceTable, DEFAULT_MAX_N, OVERRIDE_MAX_N};
use cnrt::suite::{default_range, run_suite, SuiteOptions};
use cnrt::{classify_extremal, route_extremal, route_odd_even, Error, ExtremalKind, Permutation, Topology, TopologyKind};

#[derive(Parser)]
#[command(name = "cnrt", version, about = "Permutation routing on cycles and paths")]
struct Cli {
    /// Directory for cached distance tables (CNRT_CACHE takes precedence).
    #[arg(long, global = true)]
    cache_dir: Option<PathBuf>,
    /// Machine-readable output.
    #[arg(long, global = true)]
    json: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Route one permutation and print the trace.
    Route(RouteArgs),
    /// Exact routing number of one permutation, or a whole table summary.
    Exact(ExactArgs),
    /// Largest routing number and its maximizers for a range of n.
    Census(CensusArgs),
    /// Extremal windows of one permutation, or of every slowest one.
    Classify(ClassifyArgs),
    /// Run a verification suite.
    Verify(VerifyArgs),
    /// Distance table files.
    #[command(subcommand)]
    Table(TableCommand),
}

#[derive(Clone, Copy, ValueEnum)]
enum Strategy {
    OddEven,
    Extremal,
}

#[derive(Args)]
struct RouteArgs {
    #[arg(long)]
    perm: Permutation,
    #[arg(long, default_value = "cycle")]
    topology: TopologyKind,
    #[arg(long, value_enum, default_value = "odd-even")]
    strategy: Strategy,
    /// First-round edge as `u,v` (odd-even only; default `1,2`).
    #[arg(long, value_parser = parse_edge)]
    odd_edge: Option<(usize, usize)>,
    /// Disbursement as comma-separated spins (default: canonical).
    #[arg(long, allow_hyphen_values = true)]
    spins: Option<String>,
    /// Write the trace here instead of stdout.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct ExactArgs {
    #[arg(long, conflicts_with = "n")]
    perm: Option<Permutation>,
    #[arg(long)]
    n: Option<usize>,
    #[arg(long, default_value = "cycle")]
    topology: TopologyKind,
    /// Allow tables up to n = 12.
    #[arg(long)]
    allow_large: bool,
}

#[derive(Args)]
struct CensusArgs {
    #[arg(long)]
    n: Option<usize>,
    #[arg(long, default_value_t = 3)]
    n_min: usize,
    #[arg(long, default_value_t = 8)]
    n_max: usize,
    #[arg(long, default_value = "cycle")]
    topology: TopologyKind,
    #[arg(long)]
    allow_large: bool,
}

#[derive(Args)]
struct ClassifyArgs {
    #[arg(long, conflicts_with = "n")]
    perm: Option<Permutation>,
    /// Classify every permutation of C_n needing n - 1 rounds.
    #[arg(long)]
    n: Option<usize>,
}

#[derive(Args)]
struct VerifyArgs {
    suite: String,
    #[arg(long)]
    n: Option<usize>,
    #[arg(long)]
    n_min: Option<usize>,
    #[arg(long)]
    n_max: Option<usize>,
    #[arg(long, default_value_t = SuiteOptions::default().seed)]
    seed: u64,
    #[arg(long, default_value_t = SuiteOptions::default().random_cases)]
    cases: u64,
    #[arg(long, default_value_t = SuiteOptions::default().exhaustive_max)]
    exhaustive_max: usize,
}

#[derive(Subcommand)]
enum TableCommand {
    /// Build (or load from cache) a table and write it to a file.
    Export {
        #[arg(long)]
        n: usize,
        #[arg(long, default_value = "cycle")]
        topology: TopologyKind,
        #[arg(long)]
        out: PathBuf,
        #[arg(long)]
        allow_large: bool,
    },
    /// Validate a table file, summarize it, and copy it into the cache.
    Import { file: PathBuf },
}

fn parse_edge(s: &str) -> Result<(usize, usize), String> {
    let (u, v) = s.split_once(',').ok_or("expected `u,v`")?;
    let u = u.trim().parse().map_err(|e| format!("{e}"))?;
    let v = v.trim().parse().map_err(|e| format!("{e}"))?;
    Ok((u, v))
}

fn parse_spins(s: &str) -> Result<Vec<i32>, Error> {
    s.split(',')
        .map(|t| t.trim().parse().map_err(|_| Error::InvalidDisbursement(format!("bad spin `{t}`"))))
        .collect()
}

/// Failure kinds: bad input is a usage error, anything else a failure.
enum Failure {
    Usage(String),
    Fail(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::InvalidTopology(_)
            | Error::InvalidPermutation(_)
            | Error::InvalidMatching(_)
            | Error::LengthMismatch { .. }
            | Error::InvalidDisbursement(_)
            | Error::NotMinimized { .. }
            | Error::FlipNotApplicable { .. }
            | Error::BoundExceeded { .. }
            | Error::PebbleOutOfRange { .. }
            | Error::UnsupportedTopology(_)
            | Error::UnknownSuite(_) => Failure::Usage(e.to_string()),
            _ => Failure::Fail(e.to_string()),
        }
    }
}

impl From<std::io::Error> for Failure {
    fn from(e: std::io::Error) -> Self {
        Failure::Fail(e.to_string())
    }
}

type CmdResult = Result<bool, Failure>;

fn main() -> ExitCode {
    let cli = Cli::parse();
    let cache = std::env::var_os("CNRT_CACHE").map(PathBuf::from).or(cli.cache_dir.clone());
    let out = match &cli.command {
        Command::Route(a) => route(a, cli.json),
        Command::Exact(a) => exact(a, cache.as_deref(), cli.json),
        Command::Census(a) => census(a, cache.as_deref(), cli.json),
        Command::Classify(a) => classify(a, cache.as_deref(), cli.json),
        Command::Verify(a) => verify(a, cache, cli.json),
        Command::Table(t) => table(t, cache.as_deref(), cli.json),
    };
    match out {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
        Err(Failure::Fail(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(1)
        }
    }
}

fn print_json(v: &impl serde::Serialize) {
    println!("{}", serde_json::to_string(v).expect("serializable"));
}

fn route(a: &RouteArgs, json: bool) -> CmdResult {
    let n = a.perm.n();
    let topology = Topology::new(a.topology, n)?;
    let trace = match a.strategy {
        Strategy::OddEven => {
            let spins = match (&a.spins, a.topology) {
                (Some(s), _) => parse_spins(s)?,
                (None, TopologyKind::Cycle) => canonical_disbursement(&a.perm),
                (None, TopologyKind::Path) => SpinState::for_path(&a.perm)?.spins().to_vec(),
            };
            route_odd_even(topology, &a.perm, &spins, a.odd_edge.unwrap_or((1, 2)))?
        }
        Strategy::Extremal => {
            if a.topology != TopologyKind::Cycle {
                return Err(Failure::Usage("the extremal strategy routes cycles only".into()));
            }
            let classes = classify_extremal(&a.perm)?;
            let class = classes
                .iter()
                .find(|c| c.kind != ExtremalKind::Type1)
                .ok_or_else(|| Failure::Fail(format!("{} has no routable extremal window", a.perm)))?;
            route_extremal(&a.perm, class)?
        }
    };
    let file = trace.to_file();
    match &a.out {
        Some(path) => {
            let mut w = BufWriter::new(File::create(path)?);
            serde_json::to_writer(&mut w, &file).map_err(Error::from)?;
            w.write_all(b"\n")?;
            if json {
                print_json(&json!({ "out": path, "rounds_used": file.rounds_used }));
            } else {
                println!("{} rounds, trace written to {}", file.rounds_used, path.display());
            }
        }
        None => print_json(&file),
    }
    Ok(true)
}

fn limit(allow_large: bool) -> usize {
    if allow_large {
        OVERRIDE_MAX_N
    } else {
        DEFAULT_MAX_N
    }
}

fn exact(a: &ExactArgs, cache: Option<&Path>, json: bool) -> CmdResult {
    let n = match (&a.perm, a.n) {
        (Some(p), _) => p.n(),
        (None, Some(n)) => n,
        (None, None) => return Err(Failure::Usage("give --perm or --n".into())),
    };
    let topology = Topology::new(a.topology, n)?;
    let table = load_or_build(topology, cache, limit(a.allow_large))?;
    match &a.perm {
        Some(pi) => {
            let route = table.exact_rt(pi)?;
            if json {
                let schedule: Vec<Vec<[usize; 2]>> =
                    route.schedule.iter().map(|m| m.edges().iter().map(|&(u, v)| [u, v]).collect()).collect();
                print_json(&json!({ "topology": topology.to_string(), "perm": pi.images(), "rounds": route.rounds, "schedule": schedule }));
            } else {
                println!("rt({topology}, {pi}) = {}", route.rounds);
                for (k, m) in route.schedule.iter().enumerate() {
                    let edges: Vec<String> = m.edges().iter().map(|(u, v)| format!("{u}-{v}")).collect();
                    println!("  round {}: {}", k + 1, edges.join(" "));
                }
            }
        }
        None => summarize(&table, json),
    }
    Ok(true)
}

fn summarize(table: &DistanceTable, json: bool) {
    let max = table.max_distance() as usize;
    let mut histogram = vec![0u64; max + 1];
    for &d in table.distances() {
        histogram[d as usize] += 1;
    }
    let census = table.census();
    let argmax: Vec<String> = census.argmax.iter().map(|p| p.to_string()).collect();
    if json {
        print_json(&json!({
            "topology": table.topology().to_string(),
            "max": max,
            "histogram": histogram,
            "argmax": argmax,
        }));
    } else {
        println!("{}: max {max}, {} maximizers", table.topology(), argmax.len());
        for (d, c) in histogram.iter().enumerate() {
            println!("  {d:>2} {c}");
        }
    }
}

fn census(a: &CensusArgs, cache: Option<&Path>, json: bool) -> CmdResult {
    let range = match a.n {
        Some(n) => n..=n,
        None => a.n_min..=a.n_max,
    };
    for n in range {
        let table = load_or_build(Topology::new(a.topology, n)?, cache, limit(a.allow_large))?;
        let c = table.census();
        let argmax: Vec<String> = c.argmax.iter().map(|p| p.to_string()).collect();
        if json {
            print_json(&json!({ "topology": c.topology.to_string(), "max": c.max_distance, "argmax": argmax }));
        } else {
            println!("{}: max {}, argmax ({}) {}", c.topology, c.max_distance, argmax.len(), argmax.join("; "));
        }
    }
    Ok(true)
}

fn classify(a: &ClassifyArgs, cache: Option<&Path>, json: bool) -> CmdResult {
    let perms: Vec<(u64, Permutation)> = match (&a.perm, a.n) {
        (Some(p), _) => vec![(cnrt::solver::rank_permutation(p), p.clone())],
        (None, Some(n)) => {
            let table = load_or_build(Topology::cycle(n)?, cache, DEFAULT_MAX_N)?;
            let worst = (n - 1) as u8;
            (0..factorial(n))
                .filter(|&r| table.distance_of_rank(r) == worst)
                .map(|r| (r, unrank_permutation(n, r)))
                .collect()
        }
        (None, None) => return Err(Failure::Usage("give --perm or --n".into())),
    };
    let mut all_found = true;
    for (r, pi) in perms {
        let classes = classify_extremal(&pi)?;
        all_found &= !classes.is_empty();
        if classes.is_empty() && !json {
            println!("{r} {pi} - none -");
        }
        for c in classes {
            let kind = if c.mirrored { format!("{}-mirror", c.kind) } else { c.kind.to_string() };
            let spins: Vec<String> = c.disbursement.iter().map(|s| s.to_string()).collect();
            if json {
                print_json(&json!({ "rank": r, "perm": pi.images(), "anchor": c.anchor, "type": kind, "disbursement": c.disbursement }));
            } else {
                println!("{r} {pi} {} {kind} {}", c.anchor, spins.join(","));
            }
        }
    }
    // with --n every listed permutation is a slowest one, so each must classify
    Ok(a.n.is_none() || all_found)
}

fn verify(a: &VerifyArgs, cache: Option<PathBuf>, json: bool) -> CmdResult {
    let mut range = default_range(&a.suite)?;
    if let Some(n) = a.n {
        range = n..=n;
    }
    let range = a.n_min.unwrap_or(*range.start())..=a.n_max.unwrap_or(*range.end());
    let options = SuiteOptions {
        random_cases: a.cases,
        seed: a.seed,
        exhaustive_max: a.exhaustive_max,
        cache_dir: cache,
        ..SuiteOptions::default()
    };
    let report = run_suite(&a.suite, range, &options)?;
    if json {
        print_json(&report);
    } else {
        print!("{}", report.render_text());
    }
    Ok(report.passed())
}

fn table(t: &TableCommand, cache: Option<&Path>, json: bool) -> CmdResult {
    match t {
        TableCommand::Export { n, topology, out, allow_large } => {
            let table = load_or_build(Topology::new(*topology, *n)?, cache, limit(*allow_large))?;
            table.save(out)?;
            if json {
                print_json(&json!({ "topology": table.topology().to_string(), "out": out, "max": table.max_distance() }));
            } else {
                println!("wrote {} ({} entries) to {}", table.topology(), table.distances().len(), out.display());
            }
        }
        TableCommand::Import { file } => {
            let table = DistanceTable::read_from(BufReader::new(File::open(file)?))?;
            if let Some(dir) = cache {
                std::fs::create_dir_all(dir)?;
                table.save(&dir.join(DistanceTable::file_name(table.topology())))?;
            }
            summarize(&table, json);
        }
    }
    Ok(true)
}
