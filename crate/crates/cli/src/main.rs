mod checks;
mod commands;
mod config;
mod json;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use crate::commands::{CliError, Ctx};
use crate::config::RunConfig;

#[derive(Parser, Debug)]
#[command(name = "fab", version, about = "Dynamics of the real birational family f = τ∘σ")]
struct Cli {
    #[command(flatten)]
    global: Global,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Debug)]
struct Global {
    /// JSON run configuration; flags below override it.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// Parameter a as an exact rational, e.g. -2 or -1/4.
    #[arg(long, global = true, allow_hyphen_values = true)]
    a: Option<String>,
    #[arg(long, global = true, allow_hyphen_values = true)]
    b: Option<String>,
    #[arg(long, global = true)]
    seed: Option<u64>,
    /// Output directory for report-all.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Run the invariant suite; exit 0 iff no check fails.
    Verify,
    /// Degrees of fⁿ against the Picard prediction.
    Degrees {
        #[arg(long)]
        n: Option<usize>,
    },
    /// Picard data, characteristic polynomials and ρ.
    Spectrum,
    #[command(subcommand)]
    Regions(RegionsCmd),
    #[command(subcommand)]
    Arcs(ArcsCmd),
    /// Itinerary w_{-k} .. w_k of a point.
    Code {
        #[arg(long, allow_hyphen_values = true)]
        x: String,
        #[arg(long, allow_hyphen_values = true)]
        y: String,
        #[arg(long, default_value_t = 5)]
        k: usize,
    },
    #[command(subcommand)]
    Sft(SftCmd),
    /// Count, points and itineraries of f⁻ⁿH_s ∩ fⁿτH_t.
    Intersections {
        #[arg(long, default_value_t = 1)]
        n: usize,
        #[arg(long, default_value_t = 0.3)]
        s: f64,
        #[arg(long, default_value_t = 0.7)]
        t: f64,
    },
    #[command(subcommand)]
    Measure(MeasureCmd),
    /// Stable and unstable manifolds of the saddle fixed point.
    Manifold {
        #[arg(long, value_enum, default_value_t = SideArg::Both)]
        side: SideArg,
        /// Stop once the traced disk length reaches this value.
        #[arg(long)]
        budget: Option<f64>,
        #[arg(long, default_value_t = 24)]
        iterates: usize,
        #[arg(long)]
        svg: Option<PathBuf>,
        #[arg(long)]
        csv: Option<PathBuf>,
    },
    /// Escape verdict for the orbit of a point.
    Basin {
        #[arg(long, allow_hyphen_values = true)]
        x: String,
        #[arg(long, allow_hyphen_values = true)]
        y: String,
        #[arg(long, default_value_t = 50)]
        maxiter: usize,
    },
    /// Write every JSON report and the figure into the output directory.
    ReportAll,
}

#[derive(Subcommand, Debug)]
enum RegionsCmd {
    /// Region labels of a point on both sides.
    Classify {
        #[arg(long, allow_hyphen_values = true)]
        x: String,
        #[arg(long, allow_hyphen_values = true)]
        y: String,
    },
    /// Sampled transition table.
    Table {
        #[arg(long, default_value_t = 120)]
        grid: usize,
    },
    /// The intervals E_j^s and E_j^u.
    Intervals,
}

#[derive(Subcommand, Debug)]
enum ArcsCmd {
    /// Pull a canonical s-arc back (or push a u-arc forward) n times and count typed pieces.
    Pullback {
        #[arg(long = "type", default_value = "3s")]
        arc_type: String,
        #[arg(long, default_value_t = 1)]
        n: u32,
        #[arg(long)]
        csv: Option<PathBuf>,
    },
    /// Forced crossings sᵀQu against the complex pairing, with real crossings.
    Pairing {
        /// Print the plain-text report instead of JSON.
        #[arg(long)]
        text: bool,
    },
}

#[derive(Subcommand, Debug)]
enum SftCmd {
    /// Parry mass of a cylinder.
    Nu {
        #[arg(long)]
        word: String,
    },
    Entropy,
    /// Admissible words of a length with optional end pins.
    Count {
        #[arg(long)]
        len: usize,
        #[arg(long)]
        first: Option<String>,
        #[arg(long)]
        last: Option<String>,
    },
}

#[derive(Subcommand, Debug)]
enum MeasureCmd {
    /// Empirical cylinder frequencies against the Parry measure.
    Compare {
        #[arg(long, default_value_t = 3)]
        n: usize,
        #[arg(long, default_value_t = 1)]
        depth: usize,
        #[arg(long)]
        grid: Option<usize>,
    },
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum SideArg {
    Stable,
    Unstable,
    Both,
}

fn load(g: &Global) -> Result<RunConfig, CliError> {
    let mut cfg = match &g.config {
        Some(p) => RunConfig::load(p).map_err(CliError::Config)?,
        None => RunConfig::default(),
    };
    if let Some(a) = &g.a {
        cfg.a = a.clone();
    }
    if let Some(b) = &g.b {
        cfg.b = b.clone();
    }
    if let Some(s) = g.seed {
        cfg.seed = s;
    }
    if let Some(o) = &g.out {
        cfg.out_dir = o.clone();
    }
    Ok(cfg)
}

fn run(cli: Cli) -> Result<bool, CliError> {
    let cfg = load(&cli.global)?;
    let ctx = Ctx::new(cfg)?;
    match cli.command {
        Command::Verify => ctx.verify(),
        Command::Degrees { n } => ctx.degrees(n),
        Command::Spectrum => ctx.spectrum(),
        Command::Regions(RegionsCmd::Classify { x, y }) => ctx.classify(&x, &y),
        Command::Regions(RegionsCmd::Table { grid }) => ctx.table(grid),
        Command::Regions(RegionsCmd::Intervals) => ctx.intervals(),
        Command::Arcs(ArcsCmd::Pullback { arc_type, n, csv }) => ctx.pullback(&arc_type, n, csv.as_deref()),
        Command::Arcs(ArcsCmd::Pairing { text }) => ctx.pairing(text),
        Command::Code { x, y, k } => ctx.code(&x, &y, k),
        Command::Sft(SftCmd::Nu { word }) => ctx.nu(&word),
        Command::Sft(SftCmd::Entropy) => ctx.entropy(),
        Command::Sft(SftCmd::Count { len, first, last }) => ctx.count(len, first.as_deref(), last.as_deref()),
        Command::Intersections { n, s, t } => ctx.intersections(n, s, t),
        Command::Measure(MeasureCmd::Compare { n, depth, grid }) => ctx.measure(n, depth, grid),
        Command::Manifold { side, budget, iterates, svg, csv } => {
            let (stable, unstable) = match side {
                SideArg::Stable => (true, false),
                SideArg::Unstable => (false, true),
                SideArg::Both => (true, true),
            };
            ctx.manifold(stable, unstable, budget, iterates, svg.as_deref(), csv.as_deref())
        }
        Command::Basin { x, y, maxiter } => ctx.basin(&x, &y, maxiter),
        Command::ReportAll => ctx.report_all(),
    }
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = Cli::parse();
    match run(cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(CliError::Config(m)) => {
            eprintln!("fab: configuration error: {m}");
            ExitCode::from(2)
        }
        Err(CliError::Run(m)) => {
            eprintln!("fab: {m}");
            ExitCode::from(1)
        }
    }
}
