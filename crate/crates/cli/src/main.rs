use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;
use std::sync::Arc;

use adaudit_audience::{generate_synthetic_roll, write_roll_csv, CountyWeights, RollConfig};
use adaudit_cli::runner::load_run;
use adaudit_cli::{render, run_scenario, write_artifacts, InputError, ScenarioBundle, Summary, Target};
use adaudit_platform::{Platform, ProfileName, ProfileSelection, ServiceConfig, WorldConfig};
use adaudit_stats::{critical_z, required_sample_size, simulate_power};
use anyhow::{Context, Result};
use clap::{Parser, Subcommand};

#[derive(Parser)]
#[command(name = "audit", version, about = "Audit ad delivery for gender skew with paired job ads")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run the audit suites of a scenario bundle and write a run directory.
    Run {
        /// Bundle file, or a preset name (delivery-driver, software-engineer,
        /// sales-associate, neutral).
        #[arg(long)]
        scenario: PathBuf,
        /// Trials per job pair and objective.
        #[arg(long, default_value_t = 3)]
        seeds: usize,
        #[arg(long)]
        out: PathBuf,
        /// Seed of the first trial (overrides the bundle).
        #[arg(long)]
        seed: Option<u64>,
        /// Reporting profile (overrides the bundle).
        #[arg(long)]
        profile: Option<ProfileName>,
        /// Audit a running `audit serve` instance instead of an in-process platform.
        #[arg(long, conflicts_with = "http")]
        endpoint: Option<String>,
        /// Start the HTTP service in-process and audit over the wire.
        #[arg(long)]
        http: bool,
    },
    /// Serve the mock marketing API over HTTP.
    Serve {
        /// Reporting profile; facebook-like unless a config says otherwise.
        #[arg(long)]
        profile: Option<ProfileName>,
        #[arg(long, default_value = "127.0.0.1:8080")]
        listen: String,
        /// Service configuration (profile, platform, world) as JSON.
        #[arg(long, conflicts_with = "scenario")]
        config: Option<PathBuf>,
        /// Serve the platform of a scenario bundle file or preset.
        #[arg(long)]
        scenario: Option<PathBuf>,
    },
    /// Write a synthetic voter roll as CSV.
    GenRoll {
        #[arg(long, default_value_t = 100)]
        counties: u32,
        #[arg(long, default_value_t = 200_000)]
        rows: usize,
        #[arg(long, default_value_t = 1)]
        seed: u64,
        /// Zipf exponent for county sizes; uniform when absent.
        #[arg(long)]
        zipf: Option<f64>,
        #[arg(long, default_value_t = 0.5)]
        female_share: f64,
        /// Output file; standard output when absent.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Recipients per ad needed to detect a difference in female fraction.
    Power {
        #[arg(long)]
        effect: f64,
        #[arg(long, default_value_t = 0.05)]
        alpha: f64,
        #[arg(long, default_value_t = 0.8)]
        power: f64,
        #[arg(long, default_value_t = 0.5)]
        baseline: f64,
        /// Also estimate the achieved power from this many simulated trials.
        #[arg(long)]
        simulate: Option<u64>,
    },
    /// Recompute and print the tables of a run directory.
    Summary {
        dir: PathBuf,
        #[arg(long)]
        json: bool,
    },
}

fn main() -> ExitCode {
    match dispatch(Cli::parse().command) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e:#}");
            if e.downcast_ref::<InputError>().is_some() {
                ExitCode::from(2)
            } else {
                ExitCode::FAILURE
            }
        }
    }
}

fn dispatch(command: Command) -> Result<()> {
    match command {
        Command::Run { scenario, seeds, out, seed, profile, endpoint, http } => {
            let mut bundle = ScenarioBundle::load(&scenario)?;
            if let Some(s) = seed {
                bundle.objective_plan.seed = s;
            }
            if let Some(p) = profile {
                bundle.platform_profile = ProfileSelection::Named(p);
            }
            let target = match (endpoint, http) {
                (Some(url), _) => Target::Remote(url),
                (None, true) => Target::LocalHttp,
                (None, false) => Target::InProcess,
            };
            let (manifest, outcomes) = run_scenario(&bundle, seeds, &target)?;
            let summary = write_artifacts(&out, &manifest, &outcomes)?;
            print!("{}", render(&summary));
            eprintln!("wrote {}", out.display());
        }
        Command::Serve { profile, listen, config, scenario } => {
            let mut service = match (config, scenario) {
                (Some(path), _) => ServiceConfig::from_path(&path)
                    .map_err(|e| InputError(format!("service config {}: {e}", path.display())))?,
                (None, Some(path)) => ScenarioBundle::load(&path)?.service_config(),
                (None, None) => ServiceConfig {
                    profile: ProfileSelection::Named(ProfileName::FacebookLike),
                    platform: Default::default(),
                    world: WorldConfig { roll: RollConfig::new(100, 200_000, 1), population: Default::default(), seed: 0 },
                },
            };
            if let Some(p) = profile {
                service.profile = ProfileSelection::Named(p);
            }
            let platform = Arc::new(Platform::from_config(&service)?);
            let rt = tokio::runtime::Runtime::new()?;
            rt.block_on(async {
                let listener = tokio::net::TcpListener::bind(&listen).await.with_context(|| format!("binding {listen}"))?;
                eprintln!("serving {} on http://{}", platform.profile().name, listener.local_addr()?);
                adaudit_platform::server::serve(listener, platform).await?;
                anyhow::Ok(())
            })?;
        }
        Command::GenRoll { counties, rows, seed, zipf, female_share, out } => {
            let mut config = RollConfig::new(counties, rows, seed);
            config.female_share = female_share;
            if let Some(exponent) = zipf {
                config.county_weights = CountyWeights::Zipf { exponent };
            }
            let roll = generate_synthetic_roll(&config).map_err(|e| InputError(e.to_string()))?;
            match out {
                Some(path) => {
                    let file = std::fs::File::create(&path).with_context(|| format!("creating {}", path.display()))?;
                    write_roll_csv(&roll, std::io::BufWriter::new(file))?;
                }
                None => write_roll_csv(&roll, std::io::stdout().lock())?,
            }
        }
        Command::Power { effect, alpha, power, baseline, simulate } => {
            let n = required_sample_size(baseline, effect, alpha, power).map_err(|e| InputError(e.to_string()))?;
            let mut stdout = std::io::stdout().lock();
            writeln!(stdout, "{n} recipients per ad")?;
            writeln!(stdout, "(baseline {baseline}, effect {effect}, alpha {alpha}, power {power})")?;
            if let Some(trials) = simulate {
                let z = critical_z(1.0 - alpha).map_err(|e| InputError(e.to_string()))?;
                let achieved = simulate_power(baseline, baseline + effect, n, z, trials, 0)?;
                writeln!(stdout, "simulated power over {trials} trials: {achieved:.4}")?;
            }
        }
        Command::Summary { dir, json } => {
            let (manifest, outcomes) = load_run(&dir).map_err(|e| InputError(format!("{e:#}")))?;
            let summary = Summary::from_outcomes(&manifest, &outcomes);
            if json {
                println!("{}", serde_json::to_string_pretty(&summary)?);
            } else {
                print!("{}", render(&summary));
            }
        }
    }
    Ok(())
}
