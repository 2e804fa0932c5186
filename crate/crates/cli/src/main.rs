//! `dimlab` — command-line front end.
//!
//! Exit codes: 0 success, 1 contract/structure violation (diagnostic JSON on
//! stderr), 2 a verification run found a counterexample, 64 malformed input.
//!
//! All artifacts are written without timestamps so identical invocations with
//! identical seeds are byte-identical; run metadata goes to stderr.

use std::path::PathBuf;
use std::process::ExitCode;
use std::str::FromStr;

use clap::{Args, Parser, Subcommand};

use dimlab_core::bounds::{self, Mode, TheoremId};
use dimlab_core::fractal::{self, ExperimentConfig};
use dimlab_core::geometry;
use dimlab_core::partition::{
    admissible_partition, find_rgb_sequence, good_partition, no_rgb_admissible_partition,
    rgb_partition,
};
use dimlab_core::search::{self, Constraint, SearchMode, SearchSpec};
use dimlab_core::{classify, ComplexityProfile, Error, Interval, Rat};

#[derive(Parser)]
#[command(name = "dimlab", version, about = "Complexity-profile calculus laboratory")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct ModeArgs {
    /// Evaluate bounds with idealized (exact) guarantees.
    #[arg(long, conflicts_with = "slack", default_value_t = true)]
    idealized: bool,
    /// Evaluate bounds with slack `epsilon*r + log-coeff*ceil(log2 r)`.
    #[arg(long)]
    slack: bool,
    /// Slack epsilon (rational `p/q`).
    #[arg(long, default_value = "0")]
    epsilon: String,
    /// Slack logarithmic coefficient (rational `p/q`).
    #[arg(long = "log-coeff", default_value = "0")]
    log_coeff: String,
}

impl ModeArgs {
    fn mode(&self) -> Result<Mode, Error> {
        if self.slack {
            Ok(Mode::Slack {
                epsilon: Rat::from_str(&self.epsilon)?,
                log_coeff: Rat::from_str(&self.log_coeff)?,
            })
        } else {
            Ok(Mode::Idealized)
        }
    }
}

#[derive(Args)]
struct OutputArgs {
    /// Write the JSON artifact here instead of stdout.
    #[arg(long, short)]
    output: Option<PathBuf>,
}

#[derive(Subcommand)]
enum Command {
    /// Color-classify an interval under a profile.
    Classify {
        /// Profile JSON file.
        #[arg(long)]
        profile: PathBuf,
        /// Interval as `lo:hi` with rational endpoints, e.g. `1/1:3/1`.
        #[arg(long)]
        interval: String,
        /// Scale parameter (rational).
        #[arg(long)]
        t: String,
        #[command(flatten)]
        out: OutputArgs,
    },
    /// Build a partition (admissible, good, or the all-yellow construction).
    Partition {
        #[arg(long)]
        profile: PathBuf,
        /// One of: admissible, good, no-rgb.
        #[arg(long)]
        kind: String,
        /// Left endpoint (admissible only).
        #[arg(long, default_value = "0")]
        a: String,
        /// Right endpoint (admissible only; defaults to the horizon).
        #[arg(long)]
        b: Option<String>,
        /// Scale parameter (admissible / no-rgb).
        #[arg(long)]
        t: Option<String>,
        /// Interval budget; defaults to 3*ceil(r/t).
        #[arg(long)]
        m: Option<usize>,
        /// Precision (good / no-rgb; defaults to the horizon).
        #[arg(long)]
        r: Option<u32>,
        #[command(flatten)]
        out: OutputArgs,
    },
    /// Decompose [0, r] into red, blue and green pieces.
    Rgb {
        #[arg(long)]
        profile: PathBuf,
        #[arg(long)]
        r: Option<u32>,
        #[arg(long)]
        t: String,
        #[command(flatten)]
        out: OutputArgs,
    },
    /// Evaluate one bound on one profile.
    Bound {
        #[arg(long)]
        profile: PathBuf,
        /// proj-main, dist-main, pinned-effdim, proj-partition, dist-partition.
        #[arg(long)]
        theorem: String,
        #[arg(long)]
        r: Option<u32>,
        #[arg(long)]
        t: Option<String>,
        /// Dimension parameter for pinned-effdim (rational).
        #[arg(long)]
        d: Option<String>,
        #[command(flatten)]
        mode: ModeArgs,
        #[command(flatten)]
        out: OutputArgs,
    },
    /// Sweep profile space for counterexamples to a theorem.
    Verify {
        #[arg(long)]
        theorem: String,
        #[arg(long)]
        horizon: u32,
        #[arg(long, default_value_t = 2)]
        slope_cap: u32,
        /// none, dim-gt-1, or a rational d for `f(s) >= d*s`.
        #[arg(long, default_value = "dim-gt-1")]
        constraint: String,
        #[arg(long, conflicts_with_all = ["dp", "random"], default_value_t = true)]
        exhaustive: bool,
        #[arg(long)]
        dp: bool,
        /// Random mode: number of seeded samples.
        #[arg(long)]
        random: Option<u64>,
        /// Seed (required for random mode).
        #[arg(long)]
        seed: Option<u64>,
        /// Also emit counterexample/argmin rows as CSV here.
        #[arg(long)]
        csv: Option<PathBuf>,
        #[command(flatten)]
        out: OutputArgs,
    },
    /// Report the k smallest-gap witnesses of a theorem.
    Frontier {
        #[arg(long)]
        theorem: String,
        #[arg(long)]
        horizon: u32,
        #[arg(long, default_value_t = 2)]
        slope_cap: u32,
        #[arg(long, default_value = "dim-gt-1")]
        constraint: String,
        #[arg(long, default_value_t = 20)]
        k: usize,
        /// Write `increments,r,t,gap,guaranteed,certified` rows here.
        #[arg(long)]
        csv: Option<PathBuf>,
        #[command(flatten)]
        out: OutputArgs,
    },
    /// Randomized sweep of the planar identities.
    GeometryCheck {
        #[arg(long, default_value_t = 100_000)]
        trials: u64,
        #[arg(long)]
        seed: u64,
        #[command(flatten)]
        out: OutputArgs,
    },
    /// Run a fractal distance-set experiment from a JSON config.
    Fractal {
        /// Experiment config JSON file.
        #[arg(long)]
        config: PathBuf,
        /// Write `pin_x,pin_y,estimate` rows here.
        #[arg(long)]
        csv: Option<PathBuf>,
        #[command(flatten)]
        out: OutputArgs,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli.command) {
        Ok(code) => code,
        Err(err) => {
            let diagnostic = serde_json::json!({
                "error": err.to_string(),
                "kind": error_kind(&err),
            });
            eprintln!("{diagnostic}");
            match err {
                Error::Parse(_) => ExitCode::from(64),
                _ => ExitCode::from(1),
            }
        }
    }
}

fn error_kind(err: &Error) -> &'static str {
    match err {
        Error::Domain(_) => "domain",
        Error::Contract(_) => "contract",
        Error::Admissibility { .. } => "admissibility",
        Error::Structure(_) => "structure",
        Error::Capacity { .. } => "capacity",
        Error::Singularity(_) => "singularity",
        Error::Parse(_) => "parse",
    }
}

fn load_profile(path: &PathBuf) -> Result<ComplexityProfile, Error> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| Error::parse(format!("cannot read {}: {e}", path.display())))?;
    serde_json::from_str(&text).map_err(|e| Error::parse(format!("bad profile JSON: {e}")))
}

fn emit(out: &OutputArgs, value: &impl serde::Serialize) -> Result<(), Error> {
    let json = serde_json::to_string_pretty(value)
        .map_err(|e| Error::parse(format!("serialization failed: {e}")))?;
    match &out.output {
        Some(path) => std::fs::write(path, json.as_bytes())
            .map_err(|e| Error::parse(format!("cannot write {}: {e}", path.display()))),
        None => {
            println!("{json}");
            Ok(())
        }
    }
}

fn write_file(path: &PathBuf, contents: &str) -> Result<(), Error> {
    std::fs::write(path, contents.as_bytes())
        .map_err(|e| Error::parse(format!("cannot write {}: {e}", path.display())))
}

fn parse_constraint(s: &str) -> Result<Constraint, Error> {
    match s {
        "none" => Ok(Constraint::None),
        "dim-gt-1" => Ok(Constraint::DimGt1),
        other => Ok(Constraint::DimGeD {
            d: Rat::from_str(other)?,
        }),
    }
}

fn build_spec(
    theorem: &str,
    horizon: u32,
    slope_cap: u32,
    constraint: &str,
    dp: bool,
    random: Option<u64>,
    seed: Option<u64>,
) -> Result<SearchSpec, Error> {
    let mode = if let Some(count) = random {
        let seed = seed.ok_or_else(|| Error::parse("random mode requires --seed".to_string()))?;
        SearchMode::Random { seed, count }
    } else if dp {
        SearchMode::Dp
    } else {
        SearchMode::Exhaustive
    };
    Ok(SearchSpec {
        horizon,
        slope_cap,
        constraint: parse_constraint(constraint)?,
        theorem: TheoremId::from_str(theorem)?,
        mode,
    })
}

fn run(command: Command) -> Result<ExitCode, Error> {
    match command {
        Command::Classify {
            profile,
            interval,
            t,
            out,
        } => {
            let profile = load_profile(&profile)?;
            let interval: Interval = interval.parse()?;
            let colors = classify(&profile, &interval, Rat::from_str(&t)?)?;
            emit(&out, &colors)?;
            Ok(ExitCode::SUCCESS)
        }
        Command::Partition {
            profile,
            kind,
            a,
            b,
            t,
            m,
            r,
            out,
        } => {
            let profile = load_profile(&profile)?;
            let horizon = profile.horizon();
            match kind.as_str() {
                "admissible" => {
                    let a = Rat::from_str(&a)?;
                    let b = match b {
                        Some(b) => Rat::from_str(&b)?,
                        None => Rat::int(horizon as i64),
                    };
                    let t = Rat::from_str(
                        &t.ok_or_else(|| Error::parse("admissible needs --t".to_string()))?,
                    )?;
                    let m = m.unwrap_or_else(|| bounds::interval_budget(horizon, t));
                    let partition = admissible_partition(&profile, a, b, t, m)?;
                    emit(&out, &partition)?;
                }
                "good" => {
                    let r = r.unwrap_or(horizon);
                    let partition = good_partition(&profile, r)?;
                    emit(&out, &partition)?;
                }
                "no-rgb" => {
                    let r = r.unwrap_or(horizon);
                    let t = Rat::from_str(
                        &t.ok_or_else(|| Error::parse("no-rgb needs --t".to_string()))?,
                    )?;
                    let m = m.unwrap_or_else(|| bounds::interval_budget(r, t));
                    let (partition, bad_length) =
                        no_rgb_admissible_partition(&profile, r, t, m)?;
                    emit(
                        &out,
                        &serde_json::json!({
                            "partition": partition,
                            "bad_length": bad_length,
                        }),
                    )?;
                }
                other => return Err(Error::parse(format!("unknown partition kind {other:?}"))),
            }
            Ok(ExitCode::SUCCESS)
        }
        Command::Rgb { profile, r, t, out } => {
            let profile = load_profile(&profile)?;
            let r = r.unwrap_or(profile.horizon());
            let t = Rat::from_str(&t)?;
            let rgb = rgb_partition(&profile, r, t)?;
            let sequence = find_rgb_sequence(&rgb, t)?;
            emit(
                &out,
                &serde_json::json!({
                    "partition": rgb,
                    "rgb_sequence": sequence,
                }),
            )?;
            Ok(ExitCode::SUCCESS)
        }
        Command::Bound {
            profile,
            theorem,
            r,
            t,
            d,
            mode,
            out,
        } => {
            let profile = load_profile(&profile)?;
            let r = r.unwrap_or(profile.horizon());
            let mode = mode.mode()?;
            let report = match TheoremId::from_str(&theorem)? {
                TheoremId::ProjMain => {
                    let t = Rat::from_str(
                        &t.ok_or_else(|| Error::parse("proj-main needs --t".to_string()))?,
                    )?;
                    bounds::projection_upper_bound(&profile, r, t, mode)?
                }
                TheoremId::DistMain => bounds::distance_lower_bound(&profile, r, mode)?,
                TheoremId::PinnedEffDim => {
                    let d = Rat::from_str(
                        &d.ok_or_else(|| Error::parse("pinned-effdim needs --d".to_string()))?,
                    )?;
                    bounds::pinned_effdim_bound(&profile, d, r, mode)?
                }
                TheoremId::ProjPartition => {
                    let t = Rat::from_str(
                        &t.ok_or_else(|| Error::parse("proj-partition needs --t".to_string()))?,
                    )?;
                    let m = bounds::interval_budget(r, t);
                    let partition =
                        admissible_partition(&profile, Rat::ZERO, Rat::int(r as i64), t, m)?;
                    bounds::partition_projection_report(&profile, &partition, r, mode)?
                }
                TheoremId::DistPartition => {
                    bounds::partition_distance_report(&profile, r, mode)?
                }
            };
            emit(&out, &report)?;
            Ok(ExitCode::SUCCESS)
        }
        Command::Verify {
            theorem,
            horizon,
            slope_cap,
            constraint,
            exhaustive: _,
            dp,
            random,
            seed,
            csv,
            out,
        } => {
            let spec = build_spec(&theorem, horizon, slope_cap, &constraint, dp, random, seed)?;
            let report = search::verify_theorem(&spec)?;
            if let Some(path) = csv {
                let mut rows = String::from(bounds::CSV_HEADER);
                rows.push('\n');
                for ce in &report.counterexamples {
                    rows.push_str(&counterexample_csv_row(&spec, &ce.r, &ce.t, &ce.guaranteed, &ce.certified));
                }
                if let Some(w) = &report.argmin {
                    rows.push_str(&counterexample_csv_row(&spec, &w.r, &w.t, &w.guaranteed, &w.certified));
                }
                write_file(&path, &rows)?;
            }
            emit(&out, &report)?;
            if report.found_counterexample() {
                Ok(ExitCode::from(2))
            } else {
                Ok(ExitCode::SUCCESS)
            }
        }
        Command::Frontier {
            theorem,
            horizon,
            slope_cap,
            constraint,
            k,
            csv,
            out,
        } => {
            let spec = build_spec(&theorem, horizon, slope_cap, &constraint, false, None, None)?;
            let frontier = search::tightness_frontier(&spec, k)?;
            if let Some(path) = csv {
                let mut rows = String::from("increments,r,t,gap,guaranteed,certified\n");
                for w in &frontier {
                    let incs: Vec<String> = w.increments.iter().map(|d| d.to_string()).collect();
                    rows.push_str(&format!(
                        "{},{},{},{},{},{}\n",
                        incs.join(" "),
                        w.r,
                        w.t.map(|t| t.to_string()).unwrap_or_default(),
                        w.gap,
                        w.guaranteed,
                        w.certified
                    ));
                }
                write_file(&path, &rows)?;
            }
            emit(&out, &frontier)?;
            Ok(ExitCode::SUCCESS)
        }
        Command::GeometryCheck { trials, seed, out } => {
            let report = geometry::geometry_check(trials, seed);
            emit(&out, &report)?;
            if report.pass {
                Ok(ExitCode::SUCCESS)
            } else {
                Ok(ExitCode::from(2))
            }
        }
        Command::Fractal { config, csv, out } => {
            let text = std::fs::read_to_string(&config)
                .map_err(|e| Error::parse(format!("cannot read {}: {e}", config.display())))?;
            let config: ExperimentConfig = serde_json::from_str(&text)
                .map_err(|e| Error::parse(format!("bad experiment config: {e}")))?;
            let report = fractal::run_experiment(&config)?;
            if let Some(path) = csv {
                write_file(&path, &fractal::report_csv(&report))?;
            }
            emit(&out, &report)?;
            Ok(ExitCode::SUCCESS)
        }
    }
}

fn counterexample_csv_row(
    spec: &SearchSpec,
    r: &u32,
    t: &Option<Rat>,
    guaranteed: &Rat,
    certified: &Rat,
) -> String {
    let d = match &spec.constraint {
        Constraint::DimGeD { d } => d.to_string(),
        _ => String::new(),
    };
    format!(
        "{},{},{},{},{},{}\n",
        spec.theorem.as_str(),
        r,
        t.map(|t| t.to_string()).unwrap_or_default(),
        d,
        guaranteed,
        certified
    )
}
