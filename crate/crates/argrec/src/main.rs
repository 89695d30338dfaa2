//! Command-line entry points: train, recommend, evaluate, stats, serve,
//! and the reference heavy scorer. Every command writes machine-readable
//! JSON to stdout and a short human summary to stderr; failures exit
//! nonzero with a structured error document.

use std::io::BufReader;
use std::path::PathBuf;
use std::time::Duration;

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand};

use argrec::bundle::{load_bundle, save_bundle, Bundle};
use argrec::corpus::{load_manifest, stats::corpus_stats};
use argrec::interface::{
    build_bundle, evaluate, load_split, serve_loop, Scenario, ServeState, TrainOptions,
};
use argrec::lm::LmParams;
use argrec::pipeline::heavy::{serve_scorer, DEFAULT_TIMEOUT};
use argrec::pipeline::HeavyClient;
use argrec::typesys::{builtin_stubs, parse_stub_file, StubFile};
use argrec::Score;

#[derive(Parser)]
#[command(
    name = "argrec",
    about = "Argument recommendation for a Java subset: analysis-backed candidates ranked by an n-gram model and positional features"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Clone)]
struct StubArgs {
    /// Extra stub library files (JSON); bundled java.lang/java.util are
    /// always loaded.
    #[arg(long = "stubs")]
    stubs: Vec<PathBuf>,
}

impl StubArgs {
    fn load(&self) -> Result<Vec<StubFile>> {
        let mut all = builtin_stubs();
        for p in &self.stubs {
            let text = std::fs::read_to_string(p)
                .with_context(|| format!("cannot read stub file {}", p.display()))?;
            all.push(
                parse_stub_file(&text)
                    .with_context(|| format!("bad stub file {}", p.display()))?,
            );
        }
        Ok(all)
    }
}

fn bundle_path(flag: Option<PathBuf>) -> Result<PathBuf> {
    if let Some(p) = flag {
        return Ok(p);
    }
    if let Ok(env) = std::env::var("ARGREC_BUNDLE") {
        return Ok(PathBuf::from(env));
    }
    bail!("no bundle: pass --bundle or set ARGREC_BUNDLE")
}

fn heavy_timeout() -> Duration {
    std::env::var("ARGREC_TIMEOUT_MS")
        .ok()
        .and_then(|v| v.parse::<u64>().ok())
        .map(Duration::from_millis)
        .unwrap_or(DEFAULT_TIMEOUT)
}

fn spawn_heavy(cmd: &Option<String>) -> Result<Option<HeavyClient>> {
    match cmd {
        None => Ok(None),
        Some(line) => {
            let argv: Vec<String> = line.split_whitespace().map(|s| s.to_string()).collect();
            let client =
                HeavyClient::spawn(&argv, heavy_timeout()).context("spawning heavy scorer")?;
            Ok(Some(client))
        }
    }
}

#[derive(Subcommand)]
enum Command {
    /// Train a model bundle from a corpus manifest.
    Train {
        /// Manifest listing project root directories, one per line.
        #[arg(long)]
        corpus: PathBuf,
        /// Output bundle directory.
        #[arg(long)]
        out: PathBuf,
        #[command(flatten)]
        stubs: StubArgs,
        /// N-gram order of the light model.
        #[arg(long, default_value_t = 6)]
        order: usize,
        /// Jelinek-Mercer confidence.
        #[arg(long, default_value_t = 0.5)]
        lambda: f64,
        /// Blend weight toward inner layers.
        #[arg(long, default_value_t = 0.5)]
        layer_weight: f64,
        /// Tokens seen fewer times than this become UNK.
        #[arg(long, default_value_t = 2)]
        min_count: u64,
        /// Reducing threshold stored in the bundle.
        #[arg(long, default_value_t = 20)]
        rt: u32,
        /// Distance bucket cap of the recentness tables.
        #[arg(long, default_value_t = 16)]
        bucket_cap: u32,
        /// Lower bound of normalized parameter similarity.
        #[arg(long, default_value_t = 0.1)]
        parasim_floor: f64,
        /// Also train the reference heavy model.
        #[arg(long)]
        with_heavy: bool,
        /// N-gram order of the reference heavy model.
        #[arg(long, default_value_t = 8)]
        heavy_order: usize,
    },
    /// Recommend arguments for a call at a file position.
    Recommend {
        #[arg(long)]
        bundle: Option<PathBuf>,
        #[arg(long)]
        file: PathBuf,
        #[arg(long)]
        line: u32,
        #[arg(long)]
        col: u32,
        #[arg(short, default_value_t = 10)]
        k: usize,
        /// Corpus manifest providing the surrounding project types.
        #[arg(long)]
        project: Option<PathBuf>,
        #[command(flatten)]
        stubs: StubArgs,
        /// External heavy scorer command; enables the heavy stage.
        #[arg(long)]
        heavy_cmd: Option<String>,
        /// Identity/inheritance compatibility only (no widening or boxing).
        #[arg(long)]
        strict_compat: bool,
        /// Enable the Object-to-type-parameter refinement.
        #[arg(long)]
        object_mapping: bool,
    },
    /// Evaluate a bundle on a train/test split.
    Evaluate {
        #[arg(long)]
        bundle: Option<PathBuf>,
        /// JSON file with "train" and "test" file lists.
        #[arg(long)]
        split: PathBuf,
        #[arg(long)]
        scenario: String,
        #[command(flatten)]
        stubs: StubArgs,
        #[arg(long)]
        heavy_cmd: Option<String>,
        #[arg(long)]
        strict_compat: bool,
        /// Write the report here instead of stdout.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Corpus statistics: expression types, expected types, uniqueness,
    /// callee origin, parameter-similarity histogram.
    Stats {
        #[arg(long)]
        corpus: PathBuf,
        /// Output directory for stats.json and the per-distribution CSVs.
        #[arg(long)]
        out: PathBuf,
        #[command(flatten)]
        stubs: StubArgs,
    },
    /// Serve recommendations over line-delimited JSON on stdin/stdout.
    Serve {
        #[arg(long)]
        bundle: Option<PathBuf>,
        #[arg(long)]
        project: Option<PathBuf>,
        #[command(flatten)]
        stubs: StubArgs,
        #[arg(long)]
        heavy_cmd: Option<String>,
    },
    /// Reference heavy scorer: speaks the scorer protocol on stdin/stdout
    /// using the bundle's heavy model (or the light model if none).
    HeavyScore {
        #[arg(long)]
        bundle: Option<PathBuf>,
    },
}

fn main() {
    let cli = Cli::parse();
    match run(cli.command) {
        Ok(()) => {}
        Err(e) => {
            let doc = serde_json::json!({ "error": format!("{e:#}") });
            println!("{doc}");
            eprintln!("error: {e:#}");
            std::process::exit(1);
        }
    }
}

fn run(command: Command) -> Result<()> {
    match command {
        Command::Train {
            corpus,
            out,
            stubs,
            order,
            lambda,
            layer_weight,
            min_count,
            rt,
            bucket_cap,
            parasim_floor,
            with_heavy,
            heavy_order,
        } => {
            let projects = load_manifest(&corpus).context("loading corpus")?;
            let stub_files = stubs.load()?;
            let config = argrec::Config {
                reduction_threshold: Some(rt),
                parasim_floor,
                ..Default::default()
            };
            let opts = TrainOptions::<Score> {
                lm: LmParams {
                    order,
                    lambda,
                    layer_weight,
                    min_count,
                },
                bucket_cap,
                config,
                with_heavy,
                heavy_order,
            };
            let (bundle, summary) =
                build_bundle(&projects, &stub_files, &opts).context("training")?;
            save_bundle(&out, &bundle).context("writing bundle")?;
            println!("{}", serde_json::to_string(&summary)?);
            eprintln!(
                "trained on {} files ({} tokens, {} requests); bundle at {}",
                summary.files,
                summary.tokens,
                summary.requests,
                out.display()
            );
            Ok(())
        }
        Command::Recommend {
            bundle,
            file,
            line,
            col,
            k,
            project,
            stubs,
            heavy_cmd,
            strict_compat,
            object_mapping,
        } => {
            let dir = bundle_path(bundle)?;
            let mut b: Bundle<Score> = load_bundle(&dir).context("loading bundle")?;
            b.config.gen.strict_compat = strict_compat;
            b.config.object_mapping = object_mapping;
            let heavy = spawn_heavy(&heavy_cmd)?;
            if heavy.is_some() {
                b.config.heavy_enabled = true;
            }
            let project_units = match project {
                Some(m) => load_manifest(&m)
                    .context("loading project")?
                    .into_iter()
                    .flat_map(|p| p.units)
                    .collect(),
                None => Vec::new(),
            };
            let mut state = ServeState {
                bundle: b,
                stubs: stubs.load()?,
                project_units,
                heavy,
            };
            let value = state
                .recommend_at(&file.to_string_lossy(), line, col, k)
                .map_err(|e| anyhow::anyhow!(e))?;
            println!("{value}");
            let n = value["candidates"].as_array().map(|a| a.len()).unwrap_or(0);
            eprintln!("{} candidate(s) for {}:{}:{}", n, file.display(), line, col);
            Ok(())
        }
        Command::Evaluate {
            bundle,
            split,
            scenario,
            stubs,
            heavy_cmd,
            strict_compat,
            out,
        } => {
            let dir = bundle_path(bundle)?;
            let mut b: Bundle<Score> = load_bundle(&dir).context("loading bundle")?;
            b.config.gen.strict_compat = strict_compat;
            let scenario: Scenario = scenario.parse().map_err(|e: String| anyhow::anyhow!(e))?;
            let (split, base) = load_split(&split).context("loading split")?;
            let stub_files = stubs.load()?;
            let mut heavy = spawn_heavy(&heavy_cmd)?;
            let mut cfg = b.config.clone();
            if heavy.is_some() {
                cfg.heavy_enabled = true;
            }
            let report = evaluate(
                &split,
                &base,
                scenario,
                &b,
                &stub_files,
                &cfg,
                heavy.as_mut(),
            )
            .context("evaluating")?;
            let text = serde_json::to_string_pretty(&report)?;
            match &out {
                Some(p) => {
                    std::fs::write(p, text.clone() + "\n").context("writing report")?;
                    println!(
                        "{}",
                        serde_json::json!({
                            "report": p.to_string_lossy(),
                            "scenario": report.scenario,
                        })
                    );
                }
                None => println!("{text}"),
            }
            eprintln!(
                "{}: A={} S={} top-1={:.4} MRR={:.4} mean-latency={:.3}ms",
                report.scenario,
                report.a,
                report.s,
                report.top1(),
                report.mrr,
                report.mean_latency_ms
            );
            Ok(())
        }
        Command::Stats { corpus, out, stubs } => {
            let projects = load_manifest(&corpus).context("loading corpus")?;
            let stub_files = stubs.load()?;
            let units: Vec<_> = projects
                .iter()
                .flat_map(|p| p.units.iter().cloned().map(std::sync::Arc::new))
                .collect();
            let index = argrec::typesys::build_type_index(&units, &stub_files)
                .context("indexing corpus")?;
            let report = corpus_stats(&projects, &index);
            std::fs::create_dir_all(&out).context("creating output dir")?;
            let json = serde_json::to_string_pretty(&report)?;
            std::fs::write(out.join("stats.json"), json.clone() + "\n")
                .context("writing stats.json")?;
            for (name, csv) in report.csv_sections() {
                std::fs::write(out.join(format!("{name}.csv")), csv).context("writing csv")?;
            }
            println!("{json}");
            eprintln!(
                "{} files, {} requests ({} resolved); reports in {}",
                report.files,
                report.requests_total,
                report.requests_resolved,
                out.display()
            );
            Ok(())
        }
        Command::Serve {
            bundle,
            project,
            stubs,
            heavy_cmd,
        } => {
            let dir = bundle_path(bundle)?;
            let mut b: Bundle<Score> = load_bundle(&dir).context("loading bundle")?;
            let heavy = spawn_heavy(&heavy_cmd)?;
            if heavy.is_some() {
                b.config.heavy_enabled = true;
            }
            let project_units = match project {
                Some(m) => load_manifest(&m)
                    .context("loading project")?
                    .into_iter()
                    .flat_map(|p| p.units)
                    .collect(),
                None => Vec::new(),
            };
            let mut state = ServeState {
                bundle: b,
                stubs: stubs.load()?,
                project_units,
                heavy,
            };
            eprintln!("serving on stdin/stdout; one JSON request per line");
            let stdin = std::io::stdin();
            let stdout = std::io::stdout();
            serve_loop(&mut state, stdin.lock(), stdout.lock()).context("service loop")?;
            Ok(())
        }
        Command::HeavyScore { bundle } => {
            let dir = bundle_path(bundle)?;
            let b: Bundle<Score> = load_bundle(&dir).context("loading bundle")?;
            let model = b.heavy.as_ref().unwrap_or(&b.model);
            let scope = argrec::lm::QueryScope::global();
            let stdin = std::io::stdin();
            let stdout = std::io::stdout();
            serve_scorer(BufReader::new(stdin.lock()), stdout.lock(), |ctx, cands| {
                let ctx_ids = model.encode(ctx);
                cands
                    .iter()
                    .map(|c| model.sequence_prob(&scope, &ctx_ids, &model.encode(c)))
                    .collect()
            })
            .context("scorer loop")?;
            Ok(())
        }
    }
}
