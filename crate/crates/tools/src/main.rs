use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use rfc_core::codec::DecodeOutcome;
use rfc_core::{CodeConfig, Field, FieldSpec, LogBase, Ratio};
use rfc_tools::commands::{decode_files, encode_file, repair_shard, EncodeOptions, ToolError};
use rfc_tools::parse::{parse_field, parse_grid, parse_log_base, parse_ratio, parse_seed};
use rfc_tools::sim::{self, ErasureExperiment, SweepMode};

#[derive(Parser)]
#[command(name = "rfc", version, about = "Rateless erasure coding with logarithmic-locality repair")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Split a file into k source symbols and write shards plus a manifest.
    Encode {
        input: PathBuf,
        #[arg(long)]
        k: u32,
        #[arg(long, default_value_t = 0.5)]
        rate: f64,
        #[arg(long, value_parser = parse_ratio, default_value = "4")]
        c: Ratio,
        #[arg(long, value_parser = parse_seed, default_value = "0")]
        seed: u64,
        #[arg(long, value_parser = parse_field, default_value = "gf256")]
        field: FieldSpec,
        #[arg(long = "log-base", value_parser = parse_log_base, default_value = "natural")]
        log_base: LogBase,
        #[arg(long)]
        out: PathBuf,
        /// Append this many shards after the last one in the manifest.
        #[arg(long)]
        extend: Option<u64>,
    },
    /// Rebuild the original file from shard files or directories.
    Decode {
        #[arg(required = true)]
        inputs: Vec<PathBuf>,
        #[arg(long)]
        out: PathBuf,
    },
    /// Regenerate one missing shard from a local group.
    Repair {
        dir: PathBuf,
        #[arg(long)]
        target: u64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Run Monte-Carlo experiments and print CSV.
    #[command(subcommand)]
    Simulate(Simulate),
}

#[derive(Args, Clone)]
struct CodeArgs {
    #[arg(long, value_delimiter = ',', default_value = "100")]
    k: Vec<u32>,
    #[arg(long, value_parser = parse_ratio, default_value = "4")]
    c: Ratio,
    #[arg(long, value_parser = parse_field, default_value = "gf256")]
    field: FieldSpec,
    #[arg(long = "log-base", value_parser = parse_log_base, default_value = "natural")]
    log_base: LogBase,
    #[arg(long, value_parser = parse_seed, default_value = "1")]
    seed: u64,
    /// Write CSV here instead of stdout.
    #[arg(long)]
    out: Option<PathBuf>,
}

impl CodeArgs {
    fn configs(&self) -> Result<Vec<CodeConfig>, ToolError> {
        self.k
            .iter()
            .map(|&k| {
                CodeConfig::new(k, self.c, self.field, 0, self.log_base).map_err(|e| ToolError::ConfigInvalid(e.to_string()))
            })
            .collect()
    }
}

#[derive(Args, Clone)]
struct SweepArgs {
    #[command(flatten)]
    code: CodeArgs,
    #[arg(long, default_value_t = 0.5)]
    rate: f64,
    #[arg(long, default_value_t = 200)]
    instances: usize,
    #[arg(long, default_value_t = 100)]
    trials: usize,
}

/// Grid of sweep values, `start:stop:step` or a comma list.
#[derive(Clone)]
struct Grid(Vec<f64>);

fn grid(s: &str) -> Result<Grid, String> {
    parse_grid(s).map(Grid)
}

#[derive(Subcommand)]
enum Simulate {
    /// Failure probability versus i.i.d. erasure probability.
    ErasureSweep {
        #[command(flatten)]
        sweep: SweepArgs,
        #[arg(long, value_parser = grid, default_value = "0.1:0.5:0.05")]
        pe: Grid,
    },
    /// Failure probability versus decoding overhead.
    OverheadSweep {
        #[command(flatten)]
        sweep: SweepArgs,
        #[arg(long, value_parser = grid, default_value = "0:0.3:0.05")]
        eps: Grid,
    },
    /// Both sweeps: erasure axis with --c-erasure, overhead axis with --c-overhead.
    Figures {
        #[command(flatten)]
        sweep: SweepArgs,
        #[arg(long = "c-erasure", value_parser = parse_ratio, default_value = "6")]
        c_erasure: Ratio,
        #[arg(long = "c-overhead", value_parser = parse_ratio, default_value = "4")]
        c_overhead: Ratio,
        #[arg(long, value_parser = grid, default_value = "0.1:0.5:0.05")]
        pe: Grid,
        #[arg(long, value_parser = grid, default_value = "0:0.3:0.05")]
        eps: Grid,
    },
    /// Number of parities covering each input symbol.
    Coverage {
        #[command(flatten)]
        code: CodeArgs,
        #[arg(long, default_value_t = 1.0)]
        r: f64,
        #[arg(long, default_value_t = 50)]
        seeds: usize,
    },
    /// Per-symbol availability (pairwise isolated local groups).
    Availability {
        #[command(flatten)]
        code: CodeArgs,
        #[arg(long, default_value_t = 1.0)]
        r: f64,
        #[arg(long, default_value_t = 50)]
        seeds: usize,
        /// Print the availability histogram instead of per-seed rows.
        #[arg(long)]
        histogram: bool,
    },
    /// Perfect matching versus full rank on random decoding sets.
    Crosscheck {
        #[command(flatten)]
        code: CodeArgs,
        #[arg(long, default_value_t = 0.0)]
        eps: f64,
        /// Systematic column counts; defaults to 0, k/2, k-1, k.
        #[arg(long, value_delimiter = ',')]
        s: Vec<usize>,
        #[arg(long, default_value_t = 1250)]
        trials: usize,
    },
    /// Decoding from parities of constant degree.
    Converse {
        #[command(flatten)]
        code: CodeArgs,
        #[arg(long, default_value_t = 3)]
        d: u32,
        #[arg(long, default_value_t = 0.2)]
        eps: f64,
        #[arg(long, default_value_t = 500)]
        trials: usize,
    },
    /// Singular fraction of random realizations of supports with a perfect matching.
    SchwartzZippel {
        #[command(flatten)]
        code: CodeArgs,
        #[arg(long)]
        s: Option<usize>,
        #[arg(long, default_value_t = 20)]
        supports: usize,
        #[arg(long, default_value_t = 100)]
        assignments: usize,
    },
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = Cli::parse();
    match run(cli.command) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            if let Some(report) = e.report() {
                eprintln!("{}", render_report(report));
            }
            ExitCode::from(e.exit_code() as u8)
        }
    }
}

fn render_report(r: &rfc_core::DecodeReport) -> String {
    let outcome = match &r.outcome {
        DecodeOutcome::Success => "success".to_string(),
        DecodeOutcome::RankDeficient { rank, missing_rows } => {
            format!("rank deficient (rank {rank}, {} unresolved rows: {missing_rows:?})", missing_rows.len())
        }
    };
    format!(
        "outcome: {outcome}\nsymbols used: {}\npeeled rows: {}\nelimination dimension: {}",
        r.symbols_used, r.peel_count, r.elimination_dim
    )
}

fn run(command: Command) -> Result<(), ToolError> {
    match command {
        Command::Encode {
            input,
            k,
            rate,
            c,
            seed,
            field,
            log_base,
            out,
            extend,
        } => {
            let opts = EncodeOptions {
                k,
                rate,
                c,
                seed,
                field,
                log_base,
                out_dir: out,
                extend,
            };
            let summary = encode_file(&input, &opts)?;
            for w in &summary.warnings {
                log::warn!("{w}");
            }
            println!(
                "wrote {} shards (k = {}, degree = {}, symbol size = {})",
                summary.written.len(),
                k,
                summary.config.degree(),
                summary.symbol_size
            );
        }
        Command::Decode { inputs, out } => {
            let summary = decode_files(&inputs, &out)?;
            println!("{}", render_report(&summary.report));
            println!("read {} shards, wrote {} bytes", summary.shards_read, summary.bytes_written);
        }
        Command::Repair { dir, target, out } => {
            let summary = repair_shard(&dir, target, out.as_deref())?;
            println!("rebuilt shard {target} at {}", summary.path.display());
            println!("shards read: {}", summary.reads);
        }
        Command::Simulate(sim) => {
            let (csv, out) = simulate(sim)?;
            match out {
                Some(path) => std::fs::write(&path, csv).map_err(|source| ToolError::Io { path, source })?,
                None => std::io::stdout()
                    .write_all(csv.as_bytes())
                    .map_err(|source| ToolError::Io { path: "<stdout>".into(), source })?,
            }
        }
    }
    Ok(())
}

fn sweep_csv(sweep: &SweepArgs, c: Ratio, mode: SweepMode, grid: &[f64], header: bool) -> Result<String, ToolError> {
    let mut out = if header { format!("{}\n", sim::CSV_HEADER) } else { String::new() };
    for cfg in sweep.code.configs()? {
        let cfg = CodeConfig::new(cfg.k(), c, cfg.field(), 0, cfg.log_base()).map_err(|e| ToolError::ConfigInvalid(e.to_string()))?;
        for w in cfg.warnings() {
            log::warn!("k = {}: {w}", cfg.k());
        }
        let exp = ErasureExperiment {
            cfg,
            rate: sweep.rate,
            mode,
            instances: sweep.instances,
            trials_per_instance: sweep.trials,
            sweep_seed: sweep.code.seed,
        };
        let result = sim::run_erasure_sweep(&exp, grid).map_err(|e| ToolError::ConfigInvalid(e.to_string()))?;
        log::info!("k = {} {} sweep took {:?}", cfg.k(), mode.as_str(), result.wall_time);
        out += &result.csv_rows();
    }
    Ok(out)
}

fn simulate(cmd: Simulate) -> Result<(String, Option<PathBuf>), ToolError> {
    match cmd {
        Simulate::ErasureSweep { sweep, pe } => {
            let csv = sweep_csv(&sweep, sweep.code.c, SweepMode::IidErasure, &pe.0, true)?;
            Ok((csv, sweep.code.out))
        }
        Simulate::OverheadSweep { sweep, eps } => {
            let csv = sweep_csv(&sweep, sweep.code.c, SweepMode::FixedSubset, &eps.0, true)?;
            Ok((csv, sweep.code.out))
        }
        Simulate::Figures {
            sweep,
            c_erasure,
            c_overhead,
            pe,
            eps,
        } => {
            let mut csv = sweep_csv(&sweep, c_erasure, SweepMode::IidErasure, &pe.0, true)?;
            csv += &sweep_csv(&sweep, c_overhead, SweepMode::FixedSubset, &eps.0, false)?;
            Ok((csv, sweep.code.out))
        }
        Simulate::Coverage { code, r, seeds } => {
            if !(r > 0.0) {
                return Err(ToolError::ConfigInvalid("r must be positive".into()));
            }
            let mut csv = String::new();
            for cfg in code.configs()? {
                let stats = sim::coverage_stats(&cfg, r, seeds, code.seed);
                let body = stats.to_csv();
                csv += if csv.is_empty() { &body } else { body.split_once('\n').map_or("", |x| x.1) };
            }
            Ok((csv, code.out))
        }
        Simulate::Availability { code, r, seeds, histogram } => {
            let mut csv = String::new();
            for cfg in code.configs()? {
                let (study, _) = sim::availability_study(&cfg, r, seeds, code.seed);
                let body = if histogram { study.histogram_csv() } else { study.to_csv() };
                csv += if csv.is_empty() { &body } else { body.split_once('\n').map_or("", |x| x.1) };
            }
            Ok((csv, code.out))
        }
        Simulate::Crosscheck { code, eps, s, trials } => {
            let field = Field::new(code.field);
            let mut csv = String::from("k,s,trials,matching_full_rank,matching_rank_deficient,no_matching_full_rank,no_matching_rank_deficient\n");
            for cfg in code.configs()? {
                let k = cfg.k() as usize;
                let s_values = if s.is_empty() { vec![0, k / 2, k - 1, k] } else { s.clone() };
                if s_values.iter().any(|&v| v > k) {
                    return Err(ToolError::ConfigInvalid("s must not exceed k".into()));
                }
                for cell in sim::matching_rank_crosscheck(&field, cfg.k(), cfg.degree(), eps, &s_values, trials, code.seed) {
                    let t = cell.table;
                    csv += &format!(
                        "{k},{},{},{},{},{},{}\n",
                        cell.s,
                        t.total(),
                        t.matching_full_rank,
                        t.matching_rank_deficient,
                        t.no_matching_full_rank,
                        t.no_matching_rank_deficient
                    );
                }
            }
            Ok((csv, code.out))
        }
        Simulate::Converse { code, d, eps, trials } => {
            if d == 0 {
                return Err(ToolError::ConfigInvalid("d must be at least 1".into()));
            }
            let field = Field::new(code.field);
            let mut csv = String::new();
            for cfg in code.configs()? {
                let body = sim::converse_check(&field, cfg.k(), d, eps, trials, code.seed).to_csv();
                csv += if csv.is_empty() { &body } else { body.split_once('\n').map_or("", |x| x.1) };
            }
            Ok((csv, code.out))
        }
        Simulate::SchwartzZippel {
            code,
            s,
            supports,
            assignments,
        } => {
            let field = Field::new(code.field);
            let mut csv = String::from("k,q,s,samples,singular,singular_fraction,bound,sigma\n");
            for cfg in code.configs()? {
                let s = s.unwrap_or(cfg.k() as usize / 2).min(cfg.k() as usize);
                let r = sim::schwartz_zippel_check(&field, cfg.k(), cfg.degree(), s, supports, assignments, code.seed);
                csv += &format!(
                    "{},{},{s},{},{},{:.6},{:.6},{:.6}\n",
                    r.k,
                    r.q,
                    r.samples,
                    r.singular,
                    r.singular_fraction(),
                    r.bound(),
                    r.sigma()
                );
            }
            Ok((csv, code.out))
        }
    }
}
