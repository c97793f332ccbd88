use std::fs::File;
use std::io::{self, BufReader, BufWriter, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{bail, Context};
use clap::{Args, Parser, Subcommand, ValueEnum};
use random_fuchsian::acceptance::{verify, Level};
use random_fuchsian::analytic::DensityFn;
use random_fuchsian::arcs::ArcRecord;
use random_fuchsian::discreteness::verdict_for;
use random_fuchsian::experiments::{registry, run, run_all, Outcome, Report, RunConfig, DEFAULT_STREAMS};
use random_fuchsian::io::{read_generator_groups, write_jsonl};
use random_fuchsian::mobius::TransformRecord;
use random_fuchsian::sampling::{sample_arc, sample_hyperbolic, sample_mobius, sample_parabolic, StreamSeed, Support};
use random_fuchsian::Error;
use serde::Serialize;

#[derive(Parser)]
#[command(
    name = "rfg",
    version,
    about = "Random elements of the disk's isometry group and the groups they generate"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Draw random elements or arcs.
    Sample(SampleArgs),
    /// Tabulate a density as `x,density` CSV.
    Pdf(PdfArgs),
    /// Monte Carlo experiments.
    #[command(subcommand)]
    Experiment(ExperimentCommand),
    /// Discreteness verdicts for generator sets read from JSON lines.
    Verdict(VerdictArgs),
    /// Run the acceptance suite.
    Verify(VerifyArgs),
}

#[derive(Clone, Copy, ValueEnum)]
enum SampleKind {
    Mobius,
    Arc,
    Hyperbolic,
    Parabolic,
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Jsonl,
    Csv,
}

#[derive(Clone, Copy, ValueEnum)]
enum ArcSupport {
    Half,
    Full,
}

#[derive(Args)]
struct SeedArg {
    #[arg(long, env = "RFG_SEED", default_value_t = 42)]
    seed: u64,
}

#[derive(Args)]
struct SampleArgs {
    kind: SampleKind,
    #[arg(long, default_value_t = 10)]
    n: u64,
    #[command(flatten)]
    seed: SeedArg,
    #[arg(long, value_enum, default_value = "jsonl")]
    format: Format,
    /// Arc length law for `arc`: uniform on [0, π] or [0, 2π].
    #[arg(long, value_enum, default_value = "half")]
    support: ArcSupport,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct PdfArgs {
    /// Density name; `rfg pdf list` prints the catalog.
    name: String,
    #[arg(long, allow_hyphen_values = true, default_value_t = 0.0)]
    from: f64,
    #[arg(long, allow_hyphen_values = true, default_value_t = 1.0)]
    to: f64,
    #[arg(long, default_value_t = 0.01)]
    step: f64,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct RunArgs {
    #[arg(long)]
    n: Option<u64>,
    #[command(flatten)]
    seed: SeedArg,
    #[arg(long, default_value_t = DEFAULT_STREAMS)]
    streams: u64,
    /// Worker threads; results do not depend on it.
    #[arg(long)]
    workers: Option<usize>,
    #[arg(long)]
    out: Option<PathBuf>,
    /// Directory for `<histogram>.csv` dumps.
    #[arg(long)]
    hist_dir: Option<PathBuf>,
}

#[derive(Subcommand)]
enum ExperimentCommand {
    /// Run one experiment and write its JSON report.
    Run {
        name: String,
        #[command(flatten)]
        args: RunArgs,
    },
    /// Run every experiment; one JSON report per line.
    All {
        #[command(flatten)]
        args: RunArgs,
    },
    /// List registered experiments.
    List,
}

#[derive(Args)]
struct VerdictArgs {
    /// Generator file; `-` reads standard input.
    #[arg(long = "in", default_value = "-")]
    input: PathBuf,
}

#[derive(Clone, Copy, ValueEnum)]
enum LevelArg {
    Quick,
    Full,
}

#[derive(Args)]
struct VerifyArgs {
    #[arg(long, value_enum, default_value = "quick")]
    level: LevelArg,
    #[command(flatten)]
    seed: SeedArg,
}

/// Checked outcome that maps to exit code 1.
#[derive(Debug)]
struct AssertionFailed(String);

impl std::fmt::Display for AssertionFailed {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(&self.0)
    }
}

impl std::error::Error for AssertionFailed {}

fn output(path: &Option<PathBuf>) -> anyhow::Result<Box<dyn Write>> {
    Ok(match path {
        Some(p) => Box::new(BufWriter::new(
            File::create(p).with_context(|| format!("creating {}", p.display()))?,
        )),
        None => Box::new(BufWriter::new(io::stdout().lock())),
    })
}

fn sample(args: SampleArgs) -> anyhow::Result<()> {
    let mut rng = StreamSeed::new(args.seed.seed, 0).rng();
    let mut w = output(&args.out)?;
    let n = args.n;
    match args.kind {
        SampleKind::Arc => {
            let support = match args.support {
                ArcSupport::Half => Support::HalfTurn,
                ArcSupport::Full => Support::FullTurn,
            };
            let arcs = (0..n).map(|_| ArcRecord::from(sample_arc(&mut rng, support)));
            match args.format {
                Format::Jsonl => write_jsonl(&mut w, arcs)?,
                Format::Csv => {
                    writeln!(w, "mid_arg,len")?;
                    for r in arcs {
                        writeln!(w, "{},{}", r.mid_arg, r.len)?;
                    }
                }
            }
        }
        kind => {
            let draw = match kind {
                SampleKind::Mobius => sample_mobius,
                SampleKind::Hyperbolic => sample_hyperbolic,
                _ => sample_parabolic,
            };
            let items = (0..n).map(|_| TransformRecord::from(draw(&mut rng)));
            match args.format {
                Format::Jsonl => write_jsonl(&mut w, items)?,
                Format::Csv => {
                    writeln!(w, "a_re,a_im,c_re,c_im")?;
                    for r in items {
                        writeln!(w, "{},{},{},{}", r.a_re, r.a_im, r.c_re, r.c_im)?;
                    }
                }
            }
        }
    }
    w.flush()?;
    Ok(())
}

fn pdf(args: PdfArgs) -> anyhow::Result<()> {
    if args.name == "list" {
        for name in DensityFn::catalog() {
            println!("{name}");
        }
        return Ok(());
    }
    let d = DensityFn::by_name(&args.name).ok_or_else(|| Error::Config(format!("unknown density '{}'", args.name)))?;
    if !(args.step > 0.0
        && args.step.is_finite()
        && args.from.is_finite()
        && args.to.is_finite()
        && args.from <= args.to)
    {
        return Err(Error::Config("need finite --from <= --to and --step > 0".into()).into());
    }
    let steps = ((args.to - args.from) / args.step * (1.0 + 1e-12)).floor() as u64;
    let mut w = output(&args.out)?;
    writeln!(w, "x,density")?;
    for k in 0..=steps {
        let x = args.from + args.step * k as f64;
        writeln!(w, "{x},{}", d.eval(x))?;
    }
    w.flush()?;
    Ok(())
}

/// Report with its headline estimate lifted to the top level.
#[derive(Serialize)]
struct ReportJson<'a> {
    name: &'a str,
    n: u64,
    seed: u64,
    streams: u64,
    p_hat: Option<f64>,
    std_err: Option<f64>,
    target: Option<f64>,
    sigma_distance: Option<f64>,
    pass: bool,
    outcomes: &'a [Outcome],
}

impl<'a> From<&'a Report> for ReportJson<'a> {
    fn from(r: &'a Report) -> Self {
        let est = r.outcomes.iter().filter_map(|o| match o {
            Outcome::Estimate(e) => Some(e),
            _ => None,
        });
        let head = est.clone().find(|e| e.target.is_some()).or_else(|| est.clone().next());
        let value = r.outcomes.iter().find_map(|o| match o {
            Outcome::Value(v) => Some(v),
            _ => None,
        });
        let (p_hat, std_err, target, sigma_distance) = match (head, value) {
            (Some(e), _) => (Some(e.p_hat), Some(e.std_err), e.target, e.sigma_distance),
            (None, Some(v)) => (Some(v.value), None, Some(v.target), None),
            _ => (None, None, None, None),
        };
        ReportJson {
            name: &r.name,
            n: r.n,
            seed: r.seed,
            streams: r.streams,
            p_hat,
            std_err,
            target,
            sigma_distance,
            pass: r.pass(),
            outcomes: &r.outcomes,
        }
    }
}

fn dump_histograms(r: &Report, dir: &Path) -> anyhow::Result<()> {
    std::fs::create_dir_all(dir).with_context(|| format!("creating {}", dir.display()))?;
    for o in &r.outcomes {
        if let Outcome::Histogram(h) = o {
            let p = dir.join(format!("{}.csv", h.name));
            std::fs::write(&p, h.histogram.to_csv()).with_context(|| format!("writing {}", p.display()))?;
        }
    }
    Ok(())
}

fn experiment(cmd: ExperimentCommand) -> anyhow::Result<()> {
    let (reports, args, single) = match cmd {
        ExperimentCommand::List => {
            for e in registry() {
                println!("{:<28} n={:<9} {}", e.name, e.default_n, e.claim);
            }
            return Ok(());
        }
        ExperimentCommand::Run { name, args } => {
            let exp = random_fuchsian::experiments::find(&name)?;
            let cfg = RunConfig {
                n: args.n.unwrap_or(exp.default_n),
                seed: args.seed.seed,
                streams: args.streams,
                workers: args.workers,
            };
            (vec![run(&name, &cfg)?], args, true)
        }
        ExperimentCommand::All { args } => (
            run_all(args.n, args.seed.seed, args.streams, args.workers)?,
            args,
            false,
        ),
    };
    let mut w = output(&args.out)?;
    for r in &reports {
        let json = ReportJson::from(r);
        if single {
            serde_json::to_writer_pretty(&mut w, &json)?;
            writeln!(w)?;
        } else {
            write_jsonl(&mut w, [json])?;
        }
        if let Some(dir) = &args.hist_dir {
            dump_histograms(r, dir)?;
        }
        for o in &r.outcomes {
            eprintln!("{}: {}", r.name, o.summary());
        }
    }
    w.flush()?;
    let failed: Vec<&str> = reports.iter().filter(|r| !r.pass()).map(|r| r.name.as_str()).collect();
    if !failed.is_empty() {
        bail!(AssertionFailed(format!("targets missed: {}", failed.join(", "))));
    }
    Ok(())
}

#[derive(Serialize)]
struct VerdictLine {
    group: usize,
    generators: usize,
    #[serde(flatten)]
    verdict: random_fuchsian::discreteness::Verdict,
}

fn verdict(args: VerdictArgs) -> anyhow::Result<()> {
    let groups = if args.input.as_os_str() == "-" {
        read_generator_groups(io::stdin().lock())?
    } else {
        let f = File::open(&args.input).with_context(|| format!("opening {}", args.input.display()))?;
        read_generator_groups(BufReader::new(f))?
    };
    if groups.is_empty() {
        return Err(Error::Parse("no generators".into()).into());
    }
    let mut lines = Vec::with_capacity(groups.len());
    for (group, gens) in groups.iter().enumerate() {
        lines.push(VerdictLine {
            group,
            generators: gens.len(),
            verdict: verdict_for(gens)?,
        });
    }
    write_jsonl(io::stdout().lock(), lines)?;
    Ok(())
}

fn verify_cmd(args: VerifyArgs) -> anyhow::Result<()> {
    let level = match args.level {
        LevelArg::Quick => Level::Quick,
        LevelArg::Full => Level::Full,
    };
    let results = verify(level, args.seed.seed)?;
    let mut out = io::stdout().lock();
    writeln!(out, "{:<4} {:<16} {:<44} claim", "id", "status", "check")?;
    for r in &results {
        let status = match (r.pass(), r.ran_all()) {
            (false, _) => "FAIL",
            (true, true) => "PASS",
            (true, false) => "PASS (partial)",
        };
        writeln!(out, "{:<4} {:<16} {:<44} {}", r.id, status, "", r.claim)?;
        for c in &r.checks {
            let mark = match c.pass {
                Some(true) => "ok",
                Some(false) => "FAIL",
                None => "-",
            };
            writeln!(out, "{:<4} {:<16} {:<44} {}", "", mark, c.label, c.detail)?;
        }
    }
    let failed: Vec<u8> = results.iter().filter(|r| !r.pass()).map(|r| r.id).collect();
    if !failed.is_empty() {
        bail!(AssertionFailed(format!("criteria failed: {failed:?}")));
    }
    Ok(())
}

fn exit_code(err: &anyhow::Error) -> u8 {
    if err.is::<AssertionFailed>() {
        return 1;
    }
    match err.downcast_ref::<Error>() {
        Some(
            Error::UnknownExperiment(_)
            | Error::SampleSizeTooSmall(_)
            | Error::Domain { .. }
            | Error::Config(_)
            | Error::Parse(_)
            | Error::NotInGroup { .. },
        ) => 2,
        _ => 1,
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Sample(a) => sample(a),
        Command::Pdf(a) => pdf(a),
        Command::Experiment(c) => experiment(c),
        Command::Verdict(a) => verdict(a),
        Command::Verify(a) => verify_cmd(a),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("rfg: {e:#}");
            ExitCode::from(exit_code(&e))
        }
    }
}
