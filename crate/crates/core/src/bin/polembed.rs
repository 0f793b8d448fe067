use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use log::info;
use polariton_embed::scenario::{self, output, presets, Scenario};
use polariton_embed::{Error, Result};

/// Spectral densities of emitter ensembles in cavities.
#[derive(Parser, Debug)]
#[command(name = "polembed", version)]
struct Cli {
    /// Relative tolerance for the planar-cavity quadrature.
    #[arg(long, global = true)]
    tolerance: Option<f64>,
    /// Worker threads for the frequency scan (default: all cores).
    #[arg(long, global = true)]
    threads: Option<usize>,
    /// Skip SVG output.
    #[arg(long, global = true)]
    no_plot: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Run every scenario in a TOML file.
    Run {
        file: PathBuf,
        /// Directory for relative output paths (default: current directory).
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Run a built-in preset.
    Preset {
        name: String,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// List the built-in presets.
    ListPresets,
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("info")).init();
    let cli = Cli::parse();
    match execute(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::FAILURE
        }
    }
}

fn execute(cli: &Cli) -> Result<()> {
    if let Some(n) = cli.threads {
        if n == 0 {
            return Err(Error::InvalidParameter("--threads must be >= 1".into()));
        }
        rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build_global()
            .map_err(|e| Error::Config(format!("thread pool: {e}")))?;
    }
    let (scenarios, out) = match &cli.command {
        Command::ListPresets => {
            for (name, description) in presets::list_presets() {
                println!("{name:8} {description}");
            }
            return Ok(());
        }
        Command::Run { file, out } => (scenario::load_scenarios(file)?, out.clone()),
        Command::Preset { name, out } => {
            let text = presets::preset_toml(name).ok_or_else(|| {
                let known: Vec<_> = presets::list_presets().map(|(n, _)| n).collect();
                Error::Config(format!("unknown preset `{name}` (known: {})", known.join(", ")))
            })?;
            (scenario::parse_scenarios(text, Path::new("."), name)?, out.clone())
        }
    };
    let out = out.unwrap_or_else(|| PathBuf::from("."));
    std::fs::create_dir_all(&out).map_err(|e| Error::io(&out, e))?;

    let scenarios: Vec<Scenario> = scenarios
        .into_iter()
        .map(|s| match cli.tolerance {
            Some(t) => s.with_tolerance(t),
            None => s,
        })
        .collect();
    let mut results = Vec::with_capacity(scenarios.len());
    for s in &scenarios {
        let start = std::time::Instant::now();
        results.push(scenario::run_scenario(s)?);
        info!("{}: {} points in {:.2?}", s.name, s.scan.points, start.elapsed());
    }
    for r in &results {
        let csv = out.join(&r.scenario.output.csv);
        output::emit_csv(r, &csv)?;
        println!("{}", csv.display());
        if !cli.no_plot {
            let svg = out.join(&r.scenario.output.plot);
            output::emit_plot(r, &svg)?;
            println!("{}", svg.display());
        }
    }
    Ok(())
}
