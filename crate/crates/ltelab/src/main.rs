//! Command-line front end for the LTE interference laboratory.

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand};
use std::path::PathBuf;

use ltelab::detector::{self, DetectionConfig, DistanceMetric, FeatureVector, KnnModel};
use ltelab::grid::{build_dl_grid, build_ul_grid, CellConfig, Direction, ResourceGrid};
use ltelab::harness::{self, ExportFormat, RunConfig};
use ltelab::interference::iq::{synthesize_iq, write_iq_file, IqSidecar, SampleParams, SpectralGrid};
use ltelab::interference::{InterferenceScenario, ScenarioKind};

#[derive(Parser)]
#[command(name = "ltelab", version, about = "Desk-scale LTE interference laboratory")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Inspect resource grids and channel occupancies
    Grid {
        #[command(subcommand)]
        command: GridCommand,
    },
    /// Evaluate interference scenarios
    Scenario {
        #[command(subcommand)]
        command: ScenarioCommand,
    },
    /// Run the scenario catalog over the configured ISR points
    Sweep(SweepArgs),
    /// Synthesize and export baseband IQ recordings
    Iq {
        #[command(subcommand)]
        command: IqCommand,
    },
    /// Train, apply, and evaluate the PM-counter detector
    Detect {
        #[command(subcommand)]
        command: DetectCommand,
    },
}

#[derive(Args)]
struct CellArgs {
    /// Channel bandwidth in resource blocks
    #[arg(long)]
    bandwidth_rb: Option<usize>,
    /// Physical cell identity (0..=503)
    #[arg(long)]
    cell_id: Option<u16>,
    /// Control format indicator (1..=3)
    #[arg(long)]
    cfi: Option<u8>,
}

impl CellArgs {
    fn apply(&self, cell: &mut CellConfig) {
        if let Some(rb) = self.bandwidth_rb {
            cell.bandwidth_rb = rb;
        }
        if let Some(id) = self.cell_id {
            cell.cell_id = id;
        }
        if let Some(cfi) = self.cfi {
            cell.cfi = cfi;
        }
    }
}

#[derive(Subcommand)]
enum GridCommand {
    /// Print the per-channel occupancy table
    Inspect {
        #[command(flatten)]
        cell: CellArgs,
        /// Link direction: dl or ul
        #[arg(long, default_value = "dl")]
        direction: String,
        /// Emit the full grid as JSON instead of a table
        #[arg(long)]
        json: bool,
    },
}

#[derive(Subcommand)]
enum ScenarioCommand {
    /// Evaluate one catalog scenario at a given ISR_RE
    Run {
        /// Catalog row id (0..=6)
        #[arg(long)]
        scenario: usize,
        /// Interference-to-signal ratio per RE, dB
        #[arg(long, default_value_t = 0.0)]
        isr_re: f64,
        /// Run configuration JSON (defaults apply when omitted)
        #[arg(long)]
        config: Option<PathBuf>,
        /// Emit the report as JSON
        #[arg(long)]
        json: bool,
    },
}

#[derive(Args)]
struct SweepArgs {
    /// Run configuration JSON (defaults apply when omitted)
    #[arg(long)]
    config: Option<PathBuf>,
    /// Output directory for sweep.csv / sweep.json / sweep.plot.json
    #[arg(long)]
    out_dir: Option<PathBuf>,
    /// Use the dense 21-point ISR sweep (-10..=10 dB)
    #[arg(long)]
    dense: bool,
    /// Stamp outputs with wall-clock time
    #[arg(long)]
    timestamps: bool,
}

#[derive(Subcommand)]
enum IqCommand {
    /// Write a raw f32-interleaved IQ file plus its JSON sidecar
    Export {
        /// Catalog scenario to synthesize (mutually exclusive with --grid)
        #[arg(long)]
        scenario: Option<usize>,
        /// Synthesize a full grid instead: dl or ul
        #[arg(long)]
        grid: Option<String>,
        /// Interference-to-signal ratio per RE, dB
        #[arg(long, default_value_t = 0.0)]
        isr_re: f64,
        /// Number of 10 ms frames
        #[arg(long, default_value_t = 1)]
        frames: usize,
        #[command(flatten)]
        cell: CellArgs,
        /// Output IQ path
        #[arg(long)]
        out: PathBuf,
    },
}

#[derive(Subcommand)]
enum DetectCommand {
    /// Generate labeled PM-counter data and fit a k-NN model
    Train {
        /// Model output path (JSON); a CSV of the samples sits alongside
        #[arg(long)]
        out: PathBuf,
        #[arg(long, default_value_t = 40)]
        samples: usize,
        #[arg(long, default_value_t = 3)]
        k: usize,
        #[arg(long, default_value_t = 0.05)]
        noise_sd: f64,
        #[arg(long, default_value_t = 7)]
        seed: u64,
    },
    /// Classify a feature vector with a trained model
    Classify {
        /// Model JSON written by `detect train`
        #[arg(long)]
        model: PathBuf,
        /// Comma-separated feature values, e.g. "0.9,0.85"
        #[arg(long)]
        features: String,
    },
    /// Run the two-class detection experiment
    Experiment {
        #[arg(long, default_value_t = 40)]
        samples: usize,
        #[arg(long, default_value_t = 3)]
        k: usize,
        #[arg(long, default_value_t = 0.05)]
        noise_sd: f64,
        #[arg(long, default_value_t = 7)]
        seed: u64,
        /// ISR_RE of the interference class, dB
        #[arg(long, default_value_t = 5.0)]
        isr_re: f64,
        /// Emit the report as JSON
        #[arg(long)]
        json: bool,
        /// Also write the report to this path
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

fn main() {
    if let Err(err) = run() {
        eprintln!("error: {err:#}");
        std::process::exit(1);
    }
}

fn run() -> Result<()> {
    match Cli::parse().command {
        Command::Grid { command } => grid_command(command),
        Command::Scenario { command } => scenario_command(command),
        Command::Sweep(args) => sweep_command(args),
        Command::Iq { command } => iq_command(command),
        Command::Detect { command } => detect_command(command),
    }
}

fn load_config(path: Option<&PathBuf>) -> Result<RunConfig> {
    match path {
        Some(path) => {
            let text = std::fs::read_to_string(path)
                .with_context(|| format!("reading {}", path.display()))?;
            let config: RunConfig =
                serde_json::from_str(&text).with_context(|| format!("parsing {}", path.display()))?;
            config.validate()?;
            Ok(config)
        }
        None => Ok(RunConfig::default()),
    }
}

fn parse_direction(text: &str) -> Result<Direction> {
    match text.to_ascii_lowercase().as_str() {
        "dl" | "downlink" => Ok(Direction::Downlink),
        "ul" | "uplink" => Ok(Direction::Uplink),
        other => bail!("direction must be dl or ul, got {other}"),
    }
}

fn build_grid(cell: &CellConfig, direction: Direction) -> Result<ResourceGrid> {
    Ok(match direction {
        Direction::Downlink => build_dl_grid(cell)?,
        Direction::Uplink => build_ul_grid(cell)?,
    })
}

fn grid_command(command: GridCommand) -> Result<()> {
    match command {
        GridCommand::Inspect { cell, direction, json } => {
            let mut config = CellConfig::default();
            cell.apply(&mut config);
            let direction = parse_direction(&direction)?;
            let grid = build_grid(&config, direction)?;
            if json {
                println!("{}", grid.to_json());
                return Ok(());
            }
            println!(
                "{:?} grid: {} RB, cell id {}, cfi {} -> {} subcarriers x 140 symbols = {} REs",
                direction,
                config.bandwidth_rb,
                config.cell_id,
                config.cfi,
                grid.n_subcarriers(),
                grid.n_res()
            );
            println!("{:<8} {:>10} {:>10}", "channel", "REs", "fraction");
            for &kind in grid.kinds() {
                let count = grid.count(kind);
                println!(
                    "{:<8} {:>10} {:>9.4}%",
                    kind.name(),
                    count,
                    100.0 * count as f64 / grid.n_res() as f64
                );
            }
            Ok(())
        }
    }
}

fn scenario_command(command: ScenarioCommand) -> Result<()> {
    match command {
        ScenarioCommand::Run { scenario, isr_re, config, json } => {
            let config = load_config(config.as_ref())?;
            let scenario = config.scenario_by_id(scenario)?;
            let (report, metrics) = harness::run_scenario(&config, &scenario, isr_re)?;
            if json {
                let record = harness::ExperimentRecord {
                    scenario: scenario.with_isr(isr_re),
                    metrics,
                    report,
                };
                println!("{}", serde_json::to_string_pretty(&record)?);
                return Ok(());
            }
            println!("{} at ISR_RE = {isr_re} dB", scenario.kind.name());
            if let Some(m) = metrics {
                println!(
                    "  footprint fraction {:.4}% -> ISR_F = {:.3} dB",
                    100.0 * m.fraction,
                    m.isr_f_db
                );
            }
            println!(
                "  DL {:.3} Mbps, UL {:.3} Mbps, degradation {:.2}%",
                report.dl_mbps,
                report.ul_mbps,
                100.0 * report.degradation_fraction
            );
            println!(
                "  gates tripped: pcfich {}, pdcch {}, pbch {}, pucch {}; sync_lost {}",
                report.gates_tripped.pcfich,
                report.gates_tripped.pdcch,
                report.gates_tripped.pbch,
                report.gates_tripped.pucch,
                report.sync_lost
            );
            Ok(())
        }
    }
}

fn sweep_command(args: SweepArgs) -> Result<()> {
    let mut config = load_config(args.config.as_ref())?;
    if args.dense {
        config.isr_re_sweep_db = RunConfig::dense_sweep().isr_re_sweep_db;
    }
    if args.timestamps {
        config.emit_timestamps = true;
    }
    if let Some(dir) = args.out_dir {
        config.output_dir = Some(dir);
    }

    let result = harness::sweep(&config)?;
    println!("{}", harness::to_csv(&result));
    println!("footprint fractions (ISR_F relative to ISR_RE):");
    for row in harness::fraction_table(&config)? {
        println!(
            "  {:<24} {:>8.2}% {:>8.2} dB",
            row.scenario,
            100.0 * row.fraction,
            row.isr_f_over_isr_re_db
        );
    }

    if let Some(dir) = &config.output_dir {
        std::fs::create_dir_all(dir)
            .with_context(|| format!("creating {}", dir.display()))?;
        for format in [ExportFormat::Csv, ExportFormat::Json, ExportFormat::PlotData] {
            let path = dir.join(format!("sweep.{}", format.extension()));
            harness::export(&result, format, &path)?;
            println!("wrote {}", path.display());
        }
    }
    Ok(())
}

fn iq_command(command: IqCommand) -> Result<()> {
    match command {
        IqCommand::Export { scenario, grid, isr_re, frames, cell, out } => {
            let mut config = CellConfig::default();
            cell.apply(&mut config);
            let params = SampleParams::for_bandwidth(config.bandwidth_rb)?;

            let (spectral, source, scenario_echo) = match (scenario, grid) {
                (Some(id), None) => {
                    let kind = ScenarioKind::from_id(id)
                        .ok_or_else(|| anyhow::anyhow!("unknown scenario id {id}"))?;
                    let scenario = InterferenceScenario::new(kind, isr_re);
                    let dl = build_dl_grid(&config)?;
                    let target = if scenario.direction.covers(Direction::Downlink) {
                        dl
                    } else {
                        build_ul_grid(&config)?
                    };
                    let spectral = SpectralGrid::for_scenario(&scenario, &target)?;
                    (spectral, kind.name().to_string(), Some(scenario))
                }
                (None, Some(direction)) => {
                    let direction = parse_direction(&direction)?;
                    let grid = build_grid(&config, direction)?;
                    let spectral = SpectralGrid::from_grid(&grid)?;
                    (spectral, format!("{direction:?} grid"), None)
                }
                _ => bail!("pass exactly one of --scenario or --grid"),
            };

            let samples = synthesize_iq(&spectral, frames, params.sample_rate)?;
            write_iq_file(&out, &samples)?;
            let sidecar = IqSidecar {
                sample_rate: params.sample_rate,
                frames,
                source,
                isr_re_db: scenario_echo.as_ref().map(|s| s.isr_re_db),
                scenario: scenario_echo,
            };
            let sidecar_path = sidecar.write(&out)?;
            println!(
                "wrote {} ({} samples at {} Msps) and {}",
                out.display(),
                samples.len(),
                params.sample_rate / 1e6,
                sidecar_path.display()
            );
            Ok(())
        }
    }
}

fn detect_command(command: DetectCommand) -> Result<()> {
    match command {
        DetectCommand::Train { out, samples, k, noise_sd, seed } => {
            let config = DetectionConfig {
                samples_per_class: samples,
                k,
                noise_sd,
                seed,
                ..DetectionConfig::default()
            };
            let training = detector::generate_labeled_samples(&config)?;
            let model = KnnModel::fit(training, k, DistanceMetric::Euclidean, true)?;
            std::fs::write(&out, serde_json::to_string_pretty(&model)?)
                .with_context(|| format!("writing {}", out.display()))?;
            let csv_path = out.with_extension("csv");
            std::fs::write(&csv_path, model.training.to_csv())
                .with_context(|| format!("writing {}", csv_path.display()))?;
            println!(
                "wrote {} ({} samples, k = {}) and {}",
                out.display(),
                model.training.samples.len(),
                model.k,
                csv_path.display()
            );
            Ok(())
        }
        DetectCommand::Classify { model, features } => {
            let text = std::fs::read_to_string(&model)
                .with_context(|| format!("reading {}", model.display()))?;
            let model: KnnModel = serde_json::from_str(&text)?;
            let values: Vec<f64> = features
                .split(',')
                .map(|v| v.trim().parse::<f64>().context("parsing feature value"))
                .collect::<Result<_>>()?;
            let label = model.classify(&FeatureVector(values))?;
            println!("{}", model.category_name(label));
            Ok(())
        }
        DetectCommand::Experiment { samples, k, noise_sd, seed, isr_re, json, out } => {
            let config = DetectionConfig {
                samples_per_class: samples,
                k,
                noise_sd,
                seed,
                isr_re_db: isr_re,
                ..DetectionConfig::default()
            };
            let report = detector::run_detection_experiment(&config)?;
            let rendered = serde_json::to_string_pretty(&report)?;
            if json {
                println!("{rendered}");
            } else {
                println!(
                    "{}-NN over {} training / {} held-out samples",
                    config.k, report.n_train, report.n_holdout
                );
                for class in &report.per_class_accuracy {
                    println!(
                        "  {:<16} {:>3}/{:<3} correct ({:.1}%)",
                        class.category,
                        class.correct,
                        class.total,
                        100.0 * class.accuracy
                    );
                }
                println!("  overall accuracy {:.1}%", 100.0 * report.overall_accuracy);
                if let Some(ok) = report.displaced_point_correct {
                    println!("  displaced point classified correctly: {ok}");
                }
            }
            if let Some(path) = out {
                std::fs::write(&path, rendered)
                    .with_context(|| format!("writing {}", path.display()))?;
                println!("wrote {}", path.display());
            }
            Ok(())
        }
    }
}
