use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use rocbird::run::{run, Outputs, RunConfig};
use rocbird::ChartKind;

#[derive(Parser)]
#[command(
    name = "rocbird",
    version,
    about = "Chance-corrected classifier evaluation charts and summaries"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Write summary.json with per-class and multiclass measures.
    Summary(CommonArgs),
    /// Write one <chart>.csv curve table per requested chart.
    Curves(CommonArgs),
    /// Write <chart>.svg and <chart>.csv per requested chart, plus summary.json.
    Chart(CommonArgs),
}

#[derive(Args)]
struct CommonArgs {
    /// Input CSV with header `label,score_<class>,...`.
    #[arg(long)]
    input: PathBuf,

    /// Output directory, created if missing.
    #[arg(long, default_value = "out")]
    out: PathBuf,

    /// Comma-separated chart kinds (PN, DELTA_PN, ROC, BOC, PR, PR_RECIPROCAL,
    /// PR_LOG, LIFT, BIFT, BPRD, BIRD). Defaults to all.
    #[arg(long, value_delimiter = ',')]
    charts: Vec<ChartKind>,

    /// Comma-separated class names to evaluate. Defaults to all.
    #[arg(long, value_delimiter = ',')]
    classes: Vec<String>,

    /// Laplace smoothing constant added to counts (BPRD and BIRD need > 0).
    #[arg(long, default_value_t = 1.0)]
    smoothing: f64,

    /// Isocost gradient used to pick each class's operating point.
    #[arg(long = "cost-skew", default_value_t = 1.0)]
    cost_skew: f64,

    /// Comma-separated informedness levels drawn as isobars.
    #[arg(long, value_delimiter = ',', allow_negative_numbers = true)]
    isobars: Option<Vec<f64>>,

    /// Skip classes with no positives or no negatives instead of failing.
    #[arg(long = "skip-degenerate")]
    skip_degenerate: bool,
}

impl CommonArgs {
    fn into_config(self, outputs: Outputs) -> RunConfig {
        let mut config = RunConfig::new(self.input, self.out);
        if !self.charts.is_empty() {
            config.charts = self.charts;
        }
        if !self.classes.is_empty() {
            config.classes = Some(self.classes);
        }
        if let Some(levels) = self.isobars {
            config.isobar_levels = levels;
        }
        config.smoothing = self.smoothing;
        config.cost_skew = self.cost_skew;
        config.skip_degenerate = self.skip_degenerate;
        config.outputs = outputs;
        config
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let config = match cli.command {
        Command::Summary(args) => args.into_config(Outputs {
            summary: true,
            curve_tables: false,
            charts: false,
        }),
        Command::Curves(args) => args.into_config(Outputs {
            summary: false,
            curve_tables: true,
            charts: false,
        }),
        Command::Chart(args) => args.into_config(Outputs::ALL),
    };
    match run(&config) {
        Ok(report) => {
            for w in &report.warnings {
                eprintln!("warning: {w}");
            }
            for path in &report.written {
                println!("{}", path.display());
            }
            ExitCode::SUCCESS
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::FAILURE
        }
    }
}
