//! Command-line front end for the polya library.
//!
//! Every computation is a library call; this binary only parses flags,
//! formats tables and maps failures to exit codes. Output is
//! byte-deterministic for a fixed invocation and seed: stable column order,
//! 17 significant digits for reals, LF line endings.
//!
//! Exit codes: 0 success, 1 verification failure, 2 usage error, 3 I/O
//! error.

mod output;

use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use polya::distributions::{polya_log_pmf, polya_pmf};
use polya::fock::{apply_annihilation_power, polya_state};
use polya::grid::ParamGrid;
use polya::limits::{convergence_report, LimitSchedule};
use polya::statistics::{
    linear_axis, moments_brute, moments_closed, q_zero_crossing, squeezing_scan,
};
use polya::urn::{empirical_tv, sample_counts, urn_to_polya, UrnSpec};
use polya::verify::run_all;
use polya::PolyaParams;

use output::{csv_table, g17, write_documents, Document, Format};

#[derive(Parser)]
#[command(
    name = "polya",
    version,
    about = "Pólya photon statistics: pmfs, states, moments, squeezing, limits, urn sampling"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct OutputOpts {
    /// Output format
    #[arg(long, value_enum, default_value_t = Format::Csv)]
    format: Format,
    /// Write to this file instead of stdout
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Clone, Copy, ValueEnum)]
enum LimitKindArg {
    Bs,
    Nbs,
}

#[derive(Subcommand)]
enum Command {
    /// Tabulate the photon-number pmf
    Pmf {
        #[arg(long = "M")]
        m: u32,
        #[arg(long)]
        gamma: f64,
        #[arg(long)]
        eta: f64,
        #[command(flatten)]
        output: OutputOpts,
    },
    /// State amplitudes, optionally after k-fold annihilation
    State {
        #[arg(long = "M")]
        m: u32,
        #[arg(long)]
        gamma: f64,
        #[arg(long)]
        eta: f64,
        /// Apply the annihilation operator k times first
        #[arg(long, default_value_t = 0)]
        k: u32,
        #[command(flatten)]
        output: OutputOpts,
    },
    /// Photon-number moments from both evaluation routes
    Moments {
        #[arg(long = "M")]
        m: u32,
        #[arg(long)]
        gamma: f64,
        #[arg(long)]
        eta: f64,
        #[command(flatten)]
        output: OutputOpts,
    },
    /// Mandel Q against eta at fixed (M, gamma), plus the zero crossing
    Qline {
        #[arg(long = "M")]
        m: u32,
        #[arg(long)]
        gamma: f64,
        /// Number of eta samples on [0, 1]
        #[arg(long, default_value_t = 101)]
        points: u32,
        #[command(flatten)]
        output: OutputOpts,
    },
    /// Quadrature-variance grid over (gamma, eta)
    Squeeze {
        /// Grid size M; omitted runs the stock pair M = 5 and M = 20
        #[arg(long = "M")]
        m: Option<u32>,
        /// Samples per axis
        #[arg(long, default_value_t = 101)]
        points: u32,
        /// Upper end of the gamma axis
        #[arg(long, default_value_t = 5.0)]
        gamma_max: f64,
        #[command(flatten)]
        output: OutputOpts,
    },
    /// Convergence of the pmf along a limit schedule
    Limits {
        #[arg(long, value_enum)]
        kind: LimitKindArg,
        /// Fixed M (bs schedules)
        #[arg(long = "M")]
        m: Option<u32>,
        /// Fixed eta (bs schedules)
        #[arg(long)]
        eta: Option<f64>,
        /// M eta anchor (nbs schedules)
        #[arg(long)]
        lambda: Option<f64>,
        /// 1 / (M gamma) anchor (nbs schedules)
        #[arg(long)]
        rho: Option<f64>,
        /// Schedule length; defaults to 8 (bs) or 4 (nbs)
        #[arg(long)]
        points: Option<u32>,
        /// Support cap for targets with unbounded support
        #[arg(long, default_value_t = 200)]
        support_cap: u32,
        #[command(flatten)]
        output: OutputOpts,
    },
    /// Sample the reinforced urn and compare with the exact pmf
    Urn {
        /// White ball count
        #[arg(long)]
        a: f64,
        /// Black ball count
        #[arg(long)]
        b: f64,
        /// Balls of the drawn color returned after each draw
        #[arg(long)]
        c: f64,
        /// Draws per trial
        #[arg(long = "M")]
        m: u32,
        #[arg(long, default_value_t = 100_000)]
        trials: u64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[command(flatten)]
        output: OutputOpts,
    },
    /// Run the verification battery; nonzero exit if any check fails
    Verify {
        /// Grid config (TOML); defaults to the built-in standard grid
        #[arg(long)]
        grid: Option<PathBuf>,
        #[command(flatten)]
        output: OutputOpts,
    },
}

enum CliError {
    Usage(String),
    Io(String),
    ChecksFailed,
}

impl From<polya::PolyaError> for CliError {
    fn from(e: polya::PolyaError) -> Self {
        CliError::Usage(e.to_string())
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli.command) {
        Ok(()) => ExitCode::SUCCESS,
        Err(CliError::ChecksFailed) => {
            eprintln!("verification failed");
            ExitCode::from(1)
        }
        Err(CliError::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
        Err(CliError::Io(msg)) => {
            eprintln!("I/O error: {msg}");
            ExitCode::from(3)
        }
    }
}

fn run(command: Command) -> Result<(), CliError> {
    match command {
        Command::Pmf {
            m,
            gamma,
            eta,
            output,
        } => {
            let params = PolyaParams::new(m, gamma, eta)?;
            let pmf = polya_pmf(&params);
            let doc = match output.format {
                Format::Csv => {
                    let mut rows = Vec::new();
                    for n in 0..=m {
                        rows.push(vec![
                            n.to_string(),
                            g17(pmf.prob(n)),
                            g17(polya_log_pmf(&params, n)?),
                        ]);
                    }
                    csv_table(&["n", "p", "log_p"], rows)
                }
                Format::Json => {
                    let rows: Vec<_> = (0..=m)
                        .map(|n| {
                            Ok(serde_json::json!({
                                "n": n,
                                "p": pmf.prob(n),
                                "log_p": polya_log_pmf(&params, n)?,
                            }))
                        })
                        .collect::<Result<_, CliError>>()?;
                    output::json(&serde_json::json!({ "params": params, "rows": rows }))
                }
            };
            write_documents(vec![Document::single(doc)], output.out.as_deref())
        }
        Command::State {
            m,
            gamma,
            eta,
            k,
            output,
        } => {
            let params = PolyaParams::new(m, gamma, eta)?;
            let action = apply_annihilation_power(&params, k);
            let Some(mapped) = action.params else {
                return Err(CliError::Usage(format!(
                    "k = {k} exceeds M = {m}: the state is annihilated entirely"
                )));
            };
            let state = polya_state(&mapped);
            let doc = match output.format {
                Format::Csv => {
                    let rows = state
                        .amps()
                        .iter()
                        .enumerate()
                        .map(|(n, &amp)| {
                            vec![
                                n.to_string(),
                                g17(amp),
                                g17(action.scalar),
                                mapped.m().to_string(),
                                g17(mapped.gamma()),
                                g17(mapped.eta()),
                            ]
                        })
                        .collect();
                    csv_table(&["n", "amplitude", "scalar", "m", "gamma", "eta"], rows)
                }
                Format::Json => output::json(&serde_json::json!({
                    "scalar": action.scalar,
                    "params": mapped,
                    "amplitudes": state.amps(),
                })),
            };
            write_documents(vec![Document::single(doc)], output.out.as_deref())
        }
        Command::Moments {
            m,
            gamma,
            eta,
            output,
        } => {
            let params = PolyaParams::new(m, gamma, eta)?;
            let closed = moments_closed(&params);
            let brute = moments_brute(&params);
            let entries = [
                ("mean_n", closed.mean_n, brute.mean_n),
                ("mean_n2", closed.mean_n2, brute.mean_n2),
                ("var_n", closed.var_n, brute.var_n),
                ("q_factor", closed.q_factor, brute.q_factor),
            ];
            let doc = match output.format {
                Format::Csv => {
                    let rows = entries
                        .iter()
                        .map(|(name, c, b)| {
                            vec![name.to_string(), g17(*c), g17(*b), g17((c - b).abs())]
                        })
                        .collect();
                    csv_table(
                        &["quantity", "closed_form", "brute_force", "abs_diff"],
                        rows,
                    )
                }
                Format::Json => output::json(&serde_json::json!({
                    "params": params,
                    "closed": closed,
                    "brute": brute,
                })),
            };
            write_documents(vec![Document::single(doc)], output.out.as_deref())
        }
        Command::Qline {
            m,
            gamma,
            points,
            output,
        } => {
            if points < 2 {
                return Err(CliError::Usage("qline needs at least 2 points".into()));
            }
            let etas = linear_axis(0.0, 1.0, points as usize);
            let crossing = q_zero_crossing(m, gamma);
            let q_at = |e: f64| -> Result<f64, CliError> {
                Ok(moments_closed(&PolyaParams::new(m, gamma, e)?).q_factor)
            };
            let mut table: Vec<(f64, f64)> = Vec::with_capacity(etas.len() + 1);
            for &e in &etas {
                table.push((e, q_at(e)?));
            }
            table.push((crossing, q_at(crossing)?));
            let doc = match output.format {
                Format::Csv => {
                    let rows = table.iter().map(|(e, q)| vec![g17(*e), g17(*q)]).collect();
                    csv_table(&["eta", "q"], rows)
                }
                Format::Json => {
                    let rows: Vec<_> = table
                        .iter()
                        .map(|(e, q)| serde_json::json!({ "eta": e, "q": q }))
                        .collect();
                    output::json(&serde_json::json!({
                        "m": m,
                        "gamma": gamma,
                        "zero_crossing": crossing,
                        "rows": rows,
                    }))
                }
            };
            write_documents(vec![Document::single(doc)], output.out.as_deref())
        }
        Command::Squeeze {
            m,
            points,
            gamma_max,
            output,
        } => {
            if points < 2 {
                return Err(CliError::Usage("squeeze needs at least 2 points".into()));
            }
            if !gamma_max.is_finite() || gamma_max < 0.0 {
                return Err(CliError::Usage(format!(
                    "gamma_max must be finite and >= 0, got {gamma_max}"
                )));
            }
            let ms = m.map_or_else(|| vec![5, 20], |v| vec![v]);
            let etas = linear_axis(0.0, 1.0, points as usize);
            let gammas = linear_axis(0.0, gamma_max, points as usize);
            let multiple = ms.len() > 1;
            let mut docs = Vec::new();
            for grid_m in ms {
                let grid = squeezing_scan(grid_m, &gammas, &etas)?;
                let text = match output.format {
                    Format::Csv => {
                        let mut rows = Vec::new();
                        for (gi, &g) in grid.gamma_axis.iter().enumerate() {
                            for (ei, &e) in grid.eta_axis.iter().enumerate() {
                                let cell = grid.cell(gi, ei);
                                rows.push(vec![
                                    grid_m.to_string(),
                                    g17(g),
                                    g17(e),
                                    g17(cell.var_x),
                                    g17(cell.var_p),
                                    g17(cell.product),
                                    cell.squeezed_x.to_string(),
                                    cell.squeezed_p.to_string(),
                                ]);
                            }
                        }
                        csv_table(
                            &[
                                "m",
                                "gamma",
                                "eta",
                                "var_x",
                                "var_p",
                                "product",
                                "squeezed_x",
                                "squeezed_p",
                            ],
                            rows,
                        )
                    }
                    Format::Json => output::json(&grid),
                };
                docs.push(Document {
                    suffix: multiple.then(|| format!("_m{grid_m}")),
                    text,
                });
            }
            write_documents(docs, output.out.as_deref())
        }
        Command::Limits {
            kind,
            m,
            eta,
            lambda,
            rho,
            points,
            support_cap,
            output,
        } => {
            let schedule = match kind {
                LimitKindArg::Bs => {
                    let (Some(m), Some(eta)) = (m, eta) else {
                        return Err(CliError::Usage("bs schedules need --M and --eta".into()));
                    };
                    LimitSchedule::bs(m, eta, points.unwrap_or(8))?
                }
                LimitKindArg::Nbs => {
                    let (Some(lambda), Some(rho)) = (lambda, rho) else {
                        return Err(CliError::Usage(
                            "nbs schedules need --lambda and --rho".into(),
                        ));
                    };
                    LimitSchedule::nbs(lambda, rho, points.unwrap_or(4))?
                }
            };
            let report = convergence_report(&schedule, support_cap)?;
            let doc = match output.format {
                Format::Csv => {
                    let rows = report
                        .iter()
                        .enumerate()
                        .map(|(i, point)| {
                            vec![
                                i.to_string(),
                                point.params.m().to_string(),
                                g17(point.params.gamma()),
                                g17(point.params.eta()),
                                g17(point.tv_distance),
                            ]
                        })
                        .collect();
                    csv_table(&["index", "m", "gamma", "eta", "tv_distance"], rows)
                }
                Format::Json => output::json(&serde_json::json!({
                    "target": schedule.target(),
                    "points": report,
                })),
            };
            write_documents(vec![Document::single(doc)], output.out.as_deref())
        }
        Command::Urn {
            a,
            b,
            c,
            m,
            trials,
            seed,
            output,
        } => {
            let spec = UrnSpec::new(a, b, c, m)?;
            let histogram = sample_counts(&spec, trials, seed)?;
            let tv = empirical_tv(&spec, trials, seed)?;
            let exact = polya_pmf(&urn_to_polya(&spec));
            let doc = match output.format {
                Format::Csv => {
                    let rows = histogram
                        .iter()
                        .enumerate()
                        .map(|(n, &count)| {
                            vec![
                                n.to_string(),
                                count.to_string(),
                                g17(count as f64 / trials as f64),
                                g17(exact.prob(n as u32)),
                                g17(tv),
                            ]
                        })
                        .collect();
                    csv_table(&["n", "count", "empirical_p", "exact_p", "tv_total"], rows)
                }
                Format::Json => output::json(&serde_json::json!({
                    "params": urn_to_polya(&spec),
                    "trials": trials,
                    "seed": seed,
                    "histogram": histogram,
                    "exact": exact.probs(),
                    "tv": tv,
                })),
            };
            write_documents(vec![Document::single(doc)], output.out.as_deref())
        }
        Command::Verify { grid, output } => {
            let grid = load_grid(grid.as_deref())?;
            let results = run_all(&grid)?;
            let doc = match output.format {
                Format::Csv => {
                    let rows = results
                        .iter()
                        .map(|r| {
                            vec![
                                r.name.to_string(),
                                g17(r.residual),
                                g17(r.tolerance),
                                r.passed.to_string(),
                            ]
                        })
                        .collect();
                    csv_table(&["check", "residual", "tolerance", "passed"], rows)
                }
                Format::Json => output::json(&results),
            };
            write_documents(vec![Document::single(doc)], output.out.as_deref())?;
            if results.iter().all(|r| r.passed) {
                Ok(())
            } else {
                Err(CliError::ChecksFailed)
            }
        }
    }
}

/// The stock grid shipped with the binary; `--grid` overrides it.
const DEFAULT_GRID: &str = include_str!("../config/standard_grid.toml");

fn load_grid(path: Option<&Path>) -> Result<ParamGrid, CliError> {
    let text = match path {
        Some(p) => {
            std::fs::read_to_string(p).map_err(|e| CliError::Io(format!("{}: {e}", p.display())))?
        }
        None => DEFAULT_GRID.to_string(),
    };
    toml::from_str(&text).map_err(|e| CliError::Usage(format!("bad grid config: {e}")))
}
