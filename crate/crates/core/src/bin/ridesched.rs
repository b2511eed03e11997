use std::collections::BTreeMap;
use std::fs::File;
use std::io::{BufReader, BufWriter, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand};

use ridesched::bench::{audit_jobs, schedule_rows, Algorithm, BenchOptions, BenchReport, Job};
use ridesched::ingest::report::write_rows;
use ridesched::ingest::{load_instance, read_corpus, write_corpus, Format, Instance};
use ridesched::routegen::{generate_records, Bias, GenConfig};

#[derive(Parser)]
#[command(name = "ridesched", version, about = "Excess ride time scheduling of dial-a-ride routes")]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Generate a route corpus from an instance.
    Gen(GenArgs),
    /// Schedule every route of a corpus with one algorithm.
    Schedule(RunArgs),
    /// Audit algorithms against the oracle and write the summary table.
    Bench(BenchArgs),
}

#[derive(Args)]
struct InstanceArgs {
    /// Instance file; repeat for corpora spanning several instances.
    #[arg(long, required = true)]
    instance: Vec<PathBuf>,
    #[arg(long, default_value = "darp")]
    format: Format,
}

#[derive(Args)]
struct GenArgs {
    #[command(flatten)]
    inst: InstanceArgs,
    #[arg(long, default_value_t = 1)]
    seed: u64,
    #[arg(long, default_value_t = 1000)]
    count: usize,
    #[arg(long, default_value_t = 4)]
    min_size: usize,
    #[arg(long, default_value_t = 40)]
    max_size: usize,
    #[arg(long, default_value_t = 0.0)]
    station_density: f64,
    /// Pick requests uniformly at random instead of following a simulated vehicle.
    #[arg(long)]
    random: bool,
    #[arg(long)]
    out: PathBuf,
}

#[derive(Args)]
struct RunArgs {
    #[command(flatten)]
    inst: InstanceArgs,
    #[arg(long)]
    corpus: PathBuf,
    #[arg(long, default_value = "alg1")]
    alg: Algorithm,
    #[arg(long, default_value_t = 3)]
    repeats: usize,
    #[arg(long)]
    out: PathBuf,
}

#[derive(Args)]
struct BenchArgs {
    #[command(flatten)]
    inst: InstanceArgs,
    #[arg(long)]
    corpus: PathBuf,
    #[arg(long, value_delimiter = ',', default_value = "alg1,eight-step")]
    alg: Vec<Algorithm>,
    #[arg(long, default_value_t = 3)]
    repeats: usize,
    #[arg(long)]
    out: PathBuf,
    /// Exit with status 1 when the main scheduler misses its targets.
    #[arg(long)]
    check: bool,
}

fn instances(args: &InstanceArgs) -> Result<BTreeMap<String, Instance>> {
    let mut out = BTreeMap::new();
    for path in &args.instance {
        let inst = load_instance(path, args.format).with_context(|| format!("reading {}", path.display()))?;
        out.insert(inst.name.clone(), inst);
    }
    Ok(out)
}

fn jobs(args: &InstanceArgs, corpus: &Path) -> Result<Vec<Job>> {
    let insts = instances(args)?;
    let file = File::open(corpus).with_context(|| format!("reading {}", corpus.display()))?;
    let records = read_corpus(BufReader::new(file))?;
    let mut out = Vec::with_capacity(records.len());
    for (i, rec) in records.into_iter().enumerate() {
        let Some(inst) = insts.get(&rec.instance_id) else {
            bail!("record {}: unknown instance `{}`", i + 1, rec.instance_id);
        };
        let route = inst
            .route_from_ids(&rec.node_ids)
            .with_context(|| format!("record {}", i + 1))?;
        out.push(Job {
            record: i,
            instance_id: rec.instance_id,
            vehicle_id: rec.vehicle_id,
            route,
            battery: inst.battery_params(),
        });
    }
    Ok(out)
}

fn create(path: &Path) -> Result<BufWriter<File>> {
    Ok(BufWriter::new(
        File::create(path).with_context(|| format!("writing {}", path.display()))?,
    ))
}

fn gen(args: &GenArgs) -> Result<()> {
    let cfg = GenConfig {
        seed: args.seed,
        routes_per_instance: args.count,
        size_range: (args.min_size, args.max_size),
        station_density: args.station_density,
        bias: if args.random { Bias::Random } else { Bias::GreedyNearest },
    };
    let mut records = Vec::new();
    for inst in instances(&args.inst)?.values() {
        records.extend(generate_records(inst, &cfg)?);
    }
    write_corpus(create(&args.out)?, &records)?;
    eprintln!("{} routes written", records.len());
    Ok(())
}

fn schedule(args: &RunArgs) -> Result<()> {
    let jobs = jobs(&args.inst, &args.corpus)?;
    let rows = schedule_rows(&jobs, args.alg, args.repeats);
    write_rows(create(&args.out)?, &rows)?;
    eprintln!("{} routes scheduled", rows.len());
    Ok(())
}

fn bench(args: &BenchArgs) -> Result<bool> {
    let jobs = jobs(&args.inst, &args.corpus)?;
    let opts = BenchOptions {
        repeats: args.repeats,
        parallel: true,
    };
    let audits = audit_jobs(&jobs, &args.alg, opts);
    let report = BenchReport::from_audits(&audits, &args.alg);
    let mut out = create(&args.out)?;
    write_rows(&mut out, &report.rows())?;
    out.flush()?;
    for s in &report.summaries {
        eprintln!(
            "{} {}: {} routes, {} infeasible {:?}, {} incorrect, {} unsound, {} deviating, median {:.1} us",
            s.name,
            s.alg,
            s.n_routes,
            s.n_infeasible,
            s.by_reason,
            s.n_incorrect_infeasible,
            s.n_unsound,
            s.n_deviating,
            s.median_cpu_us
        );
    }
    let problems = report.check();
    for p in &problems {
        eprintln!("check failed: {p}");
    }
    Ok(problems.is_empty())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match &cli.cmd {
        Cmd::Gen(a) => gen(a).map(|_| true),
        Cmd::Schedule(a) => schedule(a).map(|_| true),
        Cmd::Bench(a) => bench(a).map(|ok| ok || !a.check),
    };
    match result {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}
