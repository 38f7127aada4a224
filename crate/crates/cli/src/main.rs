//! `slfnet` command-line front end.

mod commands;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use slfnet::{Point, WeightKind};

#[derive(Parser, Debug)]
#[command(
    name = "slfnet",
    version,
    about = "Antiderivative-network pathloss modelling"
)]
struct Cli {
    /// Worker threads (defaults to all cores). Results do not depend on it.
    #[arg(long, global = true)]
    threads: Option<usize>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Rasterize a floor plan's loss field to CSV and PGM.
    Rasterize {
        #[arg(long)]
        plan: PathBuf,
        #[arg(long, default_value_t = 0.05)]
        cell_size: f64,
        #[arg(long)]
        out: PathBuf,
    },
    /// Generate SLF and ISLF training samples for a floor plan.
    GenData(GenDataArgs),
    /// Train a network on a generated dataset.
    Train(TrainArgs),
    /// Predict ISLF and RSSI for one transmitter/receiver pair.
    Predict {
        #[arg(long)]
        ckpt: PathBuf,
        #[arg(long, value_parser = parse_point)]
        tx: Point,
        #[arg(long, value_parser = parse_point)]
        rx: Point,
        #[command(flatten)]
        budget: BudgetArgs,
        /// Raise negative ISLF predictions to 0.
        #[arg(long)]
        clamp: bool,
    },
    /// Render a predicted RSSI map for one transmitter.
    Map {
        #[arg(long)]
        ckpt: PathBuf,
        #[command(flatten)]
        map: MapArgs,
        #[arg(long)]
        clamp: bool,
    },
    /// Render a Motley-Keenan RSSI map for one transmitter.
    BaselineMap {
        #[arg(long)]
        plan: PathBuf,
        #[command(flatten)]
        map: MapArgs,
    },
    /// Evaluate a checkpoint on the ISLF samples of a dataset (JSON to stdout).
    Eval {
        #[arg(long)]
        ckpt: PathBuf,
        #[arg(long)]
        data: PathBuf,
    },
}

#[derive(Args, Debug)]
struct GenDataArgs {
    #[arg(long)]
    plan: PathBuf,
    #[arg(long, default_value_t = 2000)]
    n_islf: usize,
    #[arg(long, default_value_t = 5000)]
    n_slf: usize,
    /// Fraction of SLF samples drawn inside walls.
    #[arg(long, default_value_t = 0.5)]
    in_wall_fraction: f64,
    /// Standard deviation of Gaussian RSSI noise, dB.
    #[arg(long, default_value_t = 0.0)]
    noise_sigma: f64,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, default_value_t = 20.0)]
    g0: f64,
    #[arg(long, default_value_t = 20.0)]
    gamma: f64,
    #[arg(long, value_enum, default_value_t = WeightArg::Line)]
    weight: WeightArg,
    #[arg(long, default_value_t = 0.5)]
    nesh_exponent: f64,
    #[arg(long)]
    out: PathBuf,
}

#[derive(Args, Debug)]
struct TrainArgs {
    #[arg(long, required_unless_present = "print_defaults")]
    data: Option<PathBuf>,
    /// TOML run configuration; missing keys take their defaults.
    #[arg(long)]
    config: Option<PathBuf>,
    #[arg(long, required_unless_present = "print_defaults")]
    out: Option<PathBuf>,
    /// Training report CSV (default: `<out>.report.csv`).
    #[arg(long)]
    report: Option<PathBuf>,
    /// Print the default configuration as TOML and exit.
    #[arg(long)]
    print_defaults: bool,
    #[arg(long)]
    steps: Option<usize>,
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long)]
    init_seed: Option<u64>,
    #[arg(long)]
    learning_rate: Option<f64>,
    #[arg(long)]
    lambda_islf: Option<f64>,
    #[arg(long)]
    eval_every: Option<usize>,
}

#[derive(Args, Debug)]
struct BudgetArgs {
    /// Reference gain G0, dBm (default: the dataset's value stored in the checkpoint, else 20).
    #[arg(long)]
    g0: Option<f64>,
    /// Path-loss exponent term γ (default: as for `--g0`).
    #[arg(long)]
    gamma: Option<f64>,
}

#[derive(Args, Debug)]
struct MapArgs {
    #[arg(long, value_parser = parse_point)]
    tx: Point,
    /// `x0,y0,cell_size,nx,ny`.
    #[arg(long, value_parser = parse_grid)]
    grid: GridSpec,
    #[command(flatten)]
    budget: BudgetArgs,
    /// PGM gray-level window `min,max` in dBm (default: data range).
    #[arg(long, value_parser = parse_window)]
    window: Option<(f64, f64)>,
    #[arg(long)]
    out: PathBuf,
}

#[derive(Debug, Clone, Copy)]
struct GridSpec {
    origin: Point,
    cell_size: f64,
    nx: usize,
    ny: usize,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum WeightArg {
    Line,
    Nesh,
}

impl From<WeightArg> for WeightKind {
    fn from(w: WeightArg) -> Self {
        match w {
            WeightArg::Line => WeightKind::Line,
            WeightArg::Nesh => WeightKind::Nesh,
        }
    }
}

fn parse_floats(text: &str, n: usize) -> Result<Vec<f64>, String> {
    let parts: Vec<&str> = text.split(',').collect();
    if parts.len() != n {
        return Err(format!(
            "expected {n} comma-separated numbers, got `{text}`"
        ));
    }
    parts
        .iter()
        .map(|p| {
            let v: f64 = p
                .trim()
                .parse()
                .map_err(|_| format!("not a number: `{p}`"))?;
            if v.is_finite() {
                Ok(v)
            } else {
                Err(format!("not finite: `{p}`"))
            }
        })
        .collect()
}

fn parse_point(text: &str) -> Result<Point, String> {
    let v = parse_floats(text, 2)?;
    Ok(Point::new(v[0], v[1]))
}

fn parse_window(text: &str) -> Result<(f64, f64), String> {
    let v = parse_floats(text, 2)?;
    Ok((v[0], v[1]))
}

fn parse_grid(text: &str) -> Result<GridSpec, String> {
    let v = parse_floats(text, 5)?;
    let count = |x: f64| {
        if x >= 1.0 && x.fract() == 0.0 {
            Ok(x as usize)
        } else {
            Err(format!("cell counts must be positive integers, got {x}"))
        }
    };
    Ok(GridSpec {
        origin: Point::new(v[0], v[1]),
        cell_size: v[2],
        nx: count(v[3])?,
        ny: count(v[4])?,
    })
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Some(n) = cli.threads {
        if n == 0 {
            eprintln!(
                "{}",
                commands::error_line("UsageError", "--threads must be at least 1")
            );
            return ExitCode::from(2);
        }
        if let Err(e) = rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build_global()
        {
            eprintln!("{}", commands::error_line("UsageError", &e.to_string()));
            return ExitCode::from(2);
        }
    }
    match commands::run(cli.command) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("{}", commands::error_line(e.kind(), &e.to_string()));
            ExitCode::from(1)
        }
    }
}
