use cavlab_cli::commands::{self, CliError, SweepAxis};
use cavlab_cli::config::RunConfig;
use clap::{Args, Parser, Subcommand};
use std::path::PathBuf;

/// Numerical laboratory for planar incompressible cavitation maps: explicit
/// two-cavity constructions, elastic-energy quadrature, lower/upper bound
/// comparisons, parameter sweeps, and vector renderings.
#[derive(Parser)]
#[command(name = "cavlab", version, max_term_width = 100)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Clone)]
struct CommonArgs {
    /// Flat key = value configuration file; flags override its entries.
    #[arg(long)]
    config: Option<PathBuf>,
    /// Distance between the two cavitation points.
    #[arg(long)]
    d: Option<f64>,
    /// Overlap parameter in [0, 1] (0: tangent, 1: round union).
    #[arg(long)]
    delta: Option<f64>,
    /// First cavity volume (v1 >= v2).
    #[arg(long)]
    v1: Option<f64>,
    /// Second cavity volume.
    #[arg(long)]
    v2: Option<f64>,
    /// Hole radius at the first cavitation point.
    #[arg(long)]
    eps1: Option<f64>,
    /// Hole radius at the second cavitation point.
    #[arg(long)]
    eps2: Option<f64>,
    /// Outer integration/rendering radius about the star center.
    #[arg(long)]
    r: Option<f64>,
    /// Angular quadrature nodes per revolution.
    #[arg(long)]
    n_theta: Option<usize>,
    /// Radial quadrature nodes per decade.
    #[arg(long)]
    n_r: Option<usize>,
    /// Attach the transition-to-radial annulus.
    #[arg(long)]
    transition: bool,
    /// Bulk constant of the closed-form upper bound.
    #[arg(long)]
    c1: Option<f64>,
    /// Interaction constant of the closed-form upper bound.
    #[arg(long)]
    c2: Option<f64>,
    /// Interaction constant of the two-cavity lower bound.
    #[arg(long)]
    c: Option<f64>,
    /// Distortion-estimate constant.
    #[arg(long)]
    cn: Option<f64>,
    /// Output file (stdout when omitted).
    #[arg(long)]
    output: Option<String>,
}

#[derive(Subcommand)]
enum Command {
    /// Solve the two-ball geometry and print its fields and residuals.
    Construct(CommonArgs),
    /// One CSV row comparing lower bound, numeric energy, and upper bound.
    Sandwich(CommonArgs),
    /// Deterministic SVG of the reference and deformed configurations.
    Render(CommonArgs),
    /// Sandwich rows over a grid of one parameter.
    Sweep {
        #[command(flatten)]
        common: CommonArgs,
        /// Swept parameter: delta | d | eps | ratio.
        #[arg(long)]
        axis: SweepAxis,
        /// Comma-separated grid values, e.g. 0.1,0.4,0.9.
        #[arg(long, value_delimiter = ',')]
        grid: Vec<f64>,
    },
    /// Solve the three-ball distortion problem and cross-check it against
    /// the raster brute-force oracle.
    Distortion {
        /// Radius of the enclosing ball.
        #[arg(long)]
        r_outer: f64,
        /// Radius of the first enclosed ball.
        #[arg(long)]
        r1: f64,
        /// Radius of the second enclosed ball.
        #[arg(long)]
        r2: f64,
        /// Random placements to try.
        #[arg(long, default_value_t = 10_000)]
        trials: u32,
        /// Raster resolution of the measurement window.
        #[arg(long, default_value_t = 512)]
        resolution: usize,
        /// RNG seed.
        #[arg(long, default_value_t = 0x5eed)]
        seed: u64,
        /// Output file (stdout when omitted).
        #[arg(long)]
        output: Option<String>,
    },
    /// Fraenkel asymmetry of the opened cavities.
    Asymmetry {
        #[command(flatten)]
        common: CommonArgs,
        /// Raster resolution per cavity window.
        #[arg(long, default_value_t = 1024)]
        resolution: usize,
    },
    /// Solve the transition annulus and report its diagnostics.
    Transition {
        #[command(flatten)]
        common: CommonArgs,
        /// Radial grid nodes of the solve.
        #[arg(long, default_value_t = cavlab::transition::DEFAULT_N_S)]
        n_s: usize,
        /// Angular grid nodes of the solve.
        #[arg(long, default_value_t = cavlab::transition::DEFAULT_N_T)]
        n_t: usize,
    },
}

fn build_config(args: &CommonArgs) -> Result<RunConfig, CliError> {
    let mut cfg = match &args.config {
        Some(path) => RunConfig::from_file(path)?,
        None => RunConfig::default(),
    };
    if let Some(v) = args.d {
        cfg.d = v;
    }
    if let Some(v) = args.delta {
        cfg.delta = v;
    }
    if let Some(v) = args.v1 {
        cfg.v1 = v;
    }
    if let Some(v) = args.v2 {
        cfg.v2 = v;
    }
    if let Some(v) = args.eps1 {
        cfg.eps1 = v;
    }
    if let Some(v) = args.eps2 {
        cfg.eps2 = v;
    }
    if let Some(v) = args.r {
        cfg.r = v;
    }
    if let Some(v) = args.n_theta {
        cfg.n_theta = v;
    }
    if let Some(v) = args.n_r {
        cfg.n_r = v;
    }
    if args.transition {
        cfg.transition = true;
    }
    if let Some(v) = args.c1 {
        cfg.c1 = v;
    }
    if let Some(v) = args.c2 {
        cfg.c2 = v;
    }
    if let Some(v) = args.c {
        cfg.c = v;
    }
    if let Some(v) = args.cn {
        cfg.cn = v;
    }
    if args.output.is_some() {
        cfg.output = args.output.clone();
    }
    cfg.validate()?;
    Ok(cfg)
}

fn emit(output: &Option<String>, text: &str) -> Result<(), CliError> {
    match output {
        Some(path) => std::fs::write(path, text)
            .map_err(|e| CliError::Io(format!("cannot write {path}: {e}"))),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn run() -> Result<(), CliError> {
    let cli = Cli::parse();
    match cli.command {
        Command::Construct(args) => {
            let cfg = build_config(&args)?;
            emit(&cfg.output, &commands::construct(&cfg)?)
        }
        Command::Sandwich(args) => {
            let cfg = build_config(&args)?;
            emit(&cfg.output, &commands::sandwich(&cfg)?)
        }
        Command::Render(args) => {
            let cfg = build_config(&args)?;
            emit(&cfg.output, &commands::render(&cfg)?)
        }
        Command::Sweep { common, axis, grid } => {
            let cfg = build_config(&common)?;
            emit(&cfg.output, &commands::sweep(&cfg, axis, &grid)?)
        }
        Command::Distortion { r_outer, r1, r2, trials, resolution, seed, output } => {
            emit(&output, &commands::distortion(r_outer, r1, r2, trials, resolution, seed)?)
        }
        Command::Asymmetry { common, resolution } => {
            let cfg = build_config(&common)?;
            emit(&cfg.output, &commands::asymmetry(&cfg, resolution)?)
        }
        Command::Transition { common, n_s, n_t } => {
            let cfg = build_config(&common)?;
            emit(&cfg.output, &commands::transition_report(&cfg, n_s, n_t)?)
        }
    }
}

fn main() {
    if let Err(e) = run() {
        eprintln!("cavlab: {e}");
        std::process::exit(e.exit_code());
    }
}
