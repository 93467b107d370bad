use std::error::Error;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::sync::atomic::{AtomicBool, Ordering};
use std::sync::Arc;
use std::time::Instant;

use clap::{Parser, Subcommand, ValueEnum};
use serde::Deserialize;
use serde_json::json;

use qpp_ldpc::alist::to_alist;
use qpp_ldpc::codespec::CodeSpecFile;
use qpp_ldpc::distance::{dmin_recursive, dmin_upper_bound, nncs_search, NncsConfig, NncsMode};
use qpp_ldpc::gf2::{qc_analysis, rank_gf2, WeightMatrix};
use qpp_ldpc::montecarlo::{simulate, SimConfig};
use qpp_ldpc::search::{search_with_checkpoint, SearchConfig};
use qpp_ldpc::tanner::{automorphism_params, girth, CodeProfile, GirthMode, DEFAULT_GIRTH_CAP};

type CliResult<T> = Result<T, Box<dyn Error>>;

#[derive(Parser)]
#[command(name = "qppldpc", version, about = "Construct and analyze LDPC codes built from quadratic permutation polynomials")]
struct Cli {
    /// Cap on worker threads (default: all cores).
    #[arg(long, global = true)]
    workers: Option<usize>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum Mode {
    Single,
    Pair,
}

#[derive(Subcommand)]
enum Command {
    /// Build the code, export H as alist and print girth, beta, gamma and rank.
    Construct {
        #[arg(long)]
        spec: PathBuf,
        #[arg(long)]
        alist: PathBuf,
    },
    /// Girth of the Tanner graph.
    Girth {
        #[arg(long)]
        spec: PathBuf,
        /// BFS from every variable node instead of one per automorphism class.
        #[arg(long)]
        exhaustive: bool,
        #[arg(long, default_value_t = DEFAULT_GIRTH_CAP)]
        cap: usize,
    },
    /// Quasi-cyclic form: weight matrix and circulant first rows.
    Qc {
        #[arg(long)]
        spec: PathBuf,
        #[arg(long)]
        weights: PathBuf,
    },
    /// Permanent-based minimum distance upper bound from a weight matrix.
    Dmin {
        #[arg(long)]
        weights: PathBuf,
        /// Also refine column sets whose bound vanishes by dropping zero rows.
        #[arg(long)]
        recursive: bool,
    },
    /// Nearest-nonzero-codeword search for a minimum distance upper bound.
    Nncs {
        #[arg(long)]
        spec: PathBuf,
        #[arg(long, value_enum, default_value = "pair")]
        mode: Mode,
        #[arg(long, default_value_t = 10_000)]
        budget: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        bias: Option<f64>,
        /// LLR of the unpinned positions; repeat or comma-separate for several levels.
        #[arg(long, value_delimiter = ',')]
        zero_llr: Vec<f64>,
        #[arg(long, default_value_t = 20)]
        iters: usize,
        /// Plain BP only, no re-encoding of non-converged decodes.
        #[arg(long)]
        no_reencode: bool,
        /// Write every hit to this JSON file.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Search (f1, f2) for a given profile.
    Search {
        #[arg(long)]
        profile: PathBuf,
        #[arg(long)]
        girth_target: usize,
        #[arg(long)]
        out: PathBuf,
        /// Primes not dividing N that may enter f2.
        #[arg(long, value_delimiter = ',')]
        extra_primes: Vec<u64>,
        #[arg(long, default_value_t = 0)]
        patience: usize,
        #[arg(long, default_value_t = 4)]
        max_stages: usize,
        /// Resume from / keep writing this checkpoint file.
        #[arg(long)]
        checkpoint: Option<PathBuf>,
    },
    /// BPSK/AWGN Monte Carlo simulation.
    Simulate {
        #[arg(long)]
        spec: PathBuf,
        #[arg(long, value_delimiter = ',', required = true)]
        ebno: Vec<f64>,
        #[arg(long, default_value_t = 1_000_000)]
        max_frames: u64,
        #[arg(long, default_value_t = 50)]
        stop_errors: u64,
        #[arg(long, default_value_t = 200)]
        iters: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// CSV output; stdout when omitted.
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long)]
        nc_log: Option<PathBuf>,
    },
}

fn write_json(path: &Path, value: &impl serde::Serialize) -> CliResult<()> {
    std::fs::write(path, serde_json::to_string_pretty(value)? + "\n")?;
    Ok(())
}

fn print_json(value: serde_json::Value) {
    let text = serde_json::to_string_pretty(&value).expect("JSON values always serialize");
    // A closed pipe (e.g. `| head`) is not an error worth reporting.
    let _ = writeln!(std::io::stdout().lock(), "{text}");
}

#[derive(Deserialize)]
struct WeightsFile {
    weights: Vec<Vec<u32>>,
}

fn run(cli: Cli) -> CliResult<()> {
    if let Some(w) = cli.workers {
        if w == 0 {
            return Err("--workers must be positive".into());
        }
        rayon::ThreadPoolBuilder::new().num_threads(w).build_global()?;
    }
    match cli.command {
        Command::Construct { spec, alist } => {
            let spec = CodeSpecFile::load(&spec)?;
            let graph = spec.graph()?;
            let h = spec.parity_check()?;
            std::fs::write(&alist, to_alist(&h))?;
            let p = automorphism_params(graph.qpp(), graph.profile())?;
            let g = girth(&graph, GirthMode::Pruned, DEFAULT_GIRTH_CAP)?;
            let rank = rank_gf2(&h);
            print_json(json!({
                "name": spec.name,
                "n": h.cols(),
                "r": h.rows(),
                "girth": g.girth,
                "beta": p.beta,
                "gamma": p.gamma,
                "delta": p.delta,
                "rank": rank,
                "k": h.cols() - rank,
                "k_expected": spec.k_expected,
            }));
        }
        Command::Girth { spec, exhaustive, cap } => {
            let spec = CodeSpecFile::load(&spec)?;
            let mode = if exhaustive { GirthMode::Exhaustive } else { GirthMode::Pruned };
            let start = Instant::now();
            let g = girth(&spec.graph()?, mode, cap)?;
            print_json(json!({
                "name": spec.name,
                "girth": g.girth,
                "shortest_cycles": g.shortest_cycles,
                "roots": g.roots,
                "mode": if exhaustive { "exhaustive" } else { "pruned" },
                "elapsed": start.elapsed().as_secs_f64(),
            }));
        }
        Command::Qc { spec, weights } => {
            let spec = CodeSpecFile::load(&spec)?;
            let graph = spec.graph()?;
            let p = automorphism_params(graph.qpp(), graph.profile())?;
            let qc = qc_analysis(&graph)?;
            let doc = json!({
                "name": spec.name,
                "beta": p.beta,
                "gamma": p.gamma,
                "delta": p.delta,
                "block_size": qc.blocks.block_size,
                "weights": qc.weights.to_rows(),
                "first_rows": qc.blocks.first_rows,
            });
            write_json(&weights, &doc)?;
            print_json(json!({ "name": spec.name, "weights": qc.weights.to_rows(), "block_size": qc.blocks.block_size }));
        }
        Command::Dmin { weights, recursive } => {
            let text = std::fs::read_to_string(&weights)?;
            let file: WeightsFile =
                serde_json::from_str(&text).map_err(|e| format!("{}: {e}", weights.display()))?;
            let a = WeightMatrix::from_rows(file.weights)?;
            let start = Instant::now();
            let r = if recursive { dmin_recursive(&a)? } else { dmin_upper_bound(&a)? };
            print_json(json!({
                "bound": r.bound,
                "S": r.columns,
                "method": if recursive { "permanent-recursive" } else { "permanent" },
                "improved": r.improved,
                "zero_sets": r.zero_sets,
                "elapsed": start.elapsed().as_secs_f64(),
            }));
        }
        Command::Nncs { spec, mode, budget, seed, bias, zero_llr, iters, no_reencode, out } => {
            let spec = CodeSpecFile::load(&spec)?;
            let graph = spec.graph()?;
            let h = spec.parity_check()?;
            let beta = automorphism_params(graph.qpp(), graph.profile())?.beta as usize;
            let defaults = NncsConfig::default();
            let cfg = NncsConfig {
                bias: bias.unwrap_or(defaults.bias),
                zero_llrs: if zero_llr.is_empty() { defaults.zero_llrs } else { zero_llr },
                mode: match mode {
                    Mode::Single => NncsMode::Single,
                    Mode::Pair => NncsMode::Pair,
                },
                max_iters: iters,
                budget,
                seed,
                class_shift: Some(beta),
                reencode: !no_reencode,
                ..defaults
            };
            let start = Instant::now();
            let r = nncs_search(&h, &cfg)?;
            if let Some(path) = out {
                write_json(&path, &r)?;
            }
            print_json(json!({
                "name": spec.name,
                "best_weight": r.best_weight,
                "codeword": r.codeword,
                "decodes": r.decodes,
                "hits": r.log.len(),
                "elapsed": start.elapsed().as_secs_f64(),
            }));
        }
        Command::Search { profile, girth_target, out, extra_primes, patience, max_stages, checkpoint } => {
            let text = std::fs::read_to_string(&profile)?;
            let prof: CodeProfile =
                serde_json::from_str(&text).map_err(|e| format!("{}: {e}", profile.display()))?;
            prof.validate()?;
            let cfg = SearchConfig { girth_target, extra_primes, patience, max_stages, ..Default::default() };
            let report = search_with_checkpoint(&prof, &cfg, checkpoint.as_deref())?;
            write_json(&out, &report)?;
            let best = report.candidates.first();
            print_json(json!({
                "candidates": report.candidates.len(),
                "examined": report.examined,
                "skipped": report.skipped,
                "best": best,
            }));
        }
        Command::Simulate { spec, ebno, max_frames, stop_errors, iters, seed, out, nc_log } => {
            let spec = CodeSpecFile::load(&spec)?;
            let h = spec.parity_check()?;
            let k = h.cols() - rank_gf2(&h);
            let cfg = SimConfig {
                ebno_db: ebno,
                max_frames,
                stop_errors,
                max_iters: iters,
                seed,
                workers: cli.workers.unwrap_or(0),
                ..Default::default()
            };
            let stop = Arc::new(AtomicBool::new(false));
            let flag = stop.clone();
            ctrlc::set_handler(move || flag.store(true, Ordering::Relaxed))?;
            let stats = simulate(&h, k, &cfg, Some(&stop))?;
            match out {
                Some(path) => stats.write_csv(std::fs::File::create(path)?)?,
                None => stats.write_csv(std::io::stdout().lock())?,
            }
            if let Some(path) = nc_log {
                write_json(&path, &stats.near_codeword_log())?;
            }
            if stats.partial {
                eprintln!("interrupted: statistics are partial");
            }
            if let Some(d) = stats.dmin_upper_bound() {
                eprintln!("undetected error of weight {d}: d_min <= {d}");
            }
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::FAILURE
        }
    }
}
