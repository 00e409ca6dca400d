//! Command-line front end for the 4-component pairing solvers.
//!
//! Every subcommand builds the same [`config::RunConfig`] that `run
//! --config` reads from a file, so flags and config files cannot drift
//! apart. Exit codes: 0 success, 2 solver non-convergence, 3 invalid
//! configuration, 4 sector dimension over the cap, 1 other failures.
//! Errors are printed to stderr as one-line JSON.

mod config;
mod output;
mod tasks;
mod verify;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use config::{RunConfig, TaskKind};
use tasks::TaskError;

#[derive(Parser)]
#[command(
    name = "pairkit",
    version,
    about = "Solvers for 4-component fermion pairing models: exact diagonalization, seniority formulas, BCS mean field, and 1/N extrapolation"
)]
struct Cli {
    /// Worker threads for sweeps (default: PAIRKIT_THREADS, then all cores)
    #[arg(long, global = true)]
    threads: Option<usize>,
    /// Output path; '-' writes to stdout
    #[arg(long, global = true)]
    out: Option<String>,
    /// Output format for single-run tasks
    #[arg(long, global = true, value_parser = ["json", "csv"])]
    format: Option<String>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct ModelFlags {
    /// Model class: identical | isovector | su4-seniority | su4-rg | spin32-rg
    #[arg(long, default_value = "su4-rg")]
    class: String,
    /// Number of spatial levels
    #[arg(long)]
    omega: Option<usize>,
    /// Particle number (defaults to quarter filling n = omega)
    #[arg(long)]
    n: Option<usize>,
    /// Bulk-scaled coupling g (the Hamiltonian uses G = g/omega)
    #[arg(long)]
    g: Option<f64>,
    /// Raw pair coupling G
    #[arg(long = "big-g")]
    big_g: Option<f64>,
    /// Explicit level energies, comma separated
    #[arg(long)]
    levels: Option<String>,
}

#[derive(Subcommand)]
enum Command {
    /// Run a task described by a config file, with optional overrides
    Run {
        /// Config file with [model], [task], [output] sections
        #[arg(long)]
        config: PathBuf,
        /// Override entries, e.g. --set task.k=4
        #[arg(long = "set", value_name = "SECTION.KEY=VALUE")]
        sets: Vec<String>,
    },
    /// Closed-form seniority energies and gaps
    Seniority {
        #[command(flatten)]
        model: ModelFlags,
        /// Formula family: identical | isovector | su4
        #[arg(long = "model", default_value = "su4")]
        family: String,
        /// Seniority v
        #[arg(long, default_value_t = 0)]
        v: usize,
        /// Total isospin T (isovector family)
        #[arg(long, default_value_t = 0.0)]
        t: f64,
        /// SU(4) label lambda2 (v = 0 branch)
        #[arg(long, default_value_t = 0)]
        lambda2: u32,
    },
    /// Sparse diagonalization of one sector, with labels
    Ed {
        #[command(flatten)]
        model: ModelFlags,
        /// Number of eigenstates
        #[arg(long, default_value_t = 4)]
        k: usize,
        /// Residual tolerance
        #[arg(long, default_value_t = 1e-10)]
        tol: f64,
        /// Sector dimension cap
        #[arg(long = "dim-cap")]
        dim_cap: Option<usize>,
    },
    /// Bulk mean-field solution at coupling g and filling x
    BcsBulk {
        /// Bulk-scaled coupling g
        #[arg(long)]
        g: f64,
        /// Filling x = N / omega
        #[arg(long, default_value_t = 1.0)]
        filling: f64,
        /// Blocked-level energy for the quasiparticle output
        #[arg(long = "eps-q")]
        eps_q: Option<f64>,
    },
    /// Discrete-level mean-field solution
    BcsFinite {
        #[command(flatten)]
        model: ModelFlags,
        /// Blocked-level energy for the quasiparticle output
        #[arg(long = "eps-q")]
        eps_q: Option<f64>,
    },
    /// Evaluate observables over a grid of sizes, emitting the series CSV
    Sweep {
        #[command(flatten)]
        model: ModelFlags,
        /// Point solver: bcs | ed
        #[arg(long, default_value = "bcs")]
        solver: String,
        /// Sweep variable: omega | n
        #[arg(long, default_value = "omega")]
        variable: String,
        /// Grid values, comma separated
        #[arg(long)]
        values: String,
        /// Blocked-level energy override
        #[arg(long = "eps-q")]
        eps_q: Option<f64>,
        /// Sector dimension cap (ed solver)
        #[arg(long = "dim-cap")]
        dim_cap: Option<usize>,
        /// Residual tolerance (ed solver)
        #[arg(long, default_value_t = 1e-10)]
        tol: f64,
    },
    /// Fit a series CSV against the 1/N expansion
    Extrapolate {
        /// Input series CSV (from sweep)
        #[arg(long)]
        input: String,
        /// Observable column to fit
        #[arg(long, default_value = "e_per_n")]
        observable: String,
        /// Expansion degree (1..=4)
        #[arg(long, default_value_t = 3)]
        degree: usize,
    },
    /// Run the invariant suite and print one line per property
    Verify,
}

fn apply_model_flags(cfg: &mut RunConfig, m: &ModelFlags) -> Result<(), TaskError> {
    let set = |cfg: &mut RunConfig, key: &str, value: &str| {
        cfg.set("model", key, value)
            .map_err(|e| TaskError::Config(e.to_string()))
    };
    set(cfg, "class", &m.class)?;
    if let Some(omega) = m.omega {
        set(cfg, "omega", &omega.to_string())?;
    }
    if let Some(n) = m.n {
        set(cfg, "n", &n.to_string())?;
    }
    if let Some(g) = m.g {
        set(cfg, "g", &g.to_string())?;
    }
    if let Some(g) = m.big_g {
        set(cfg, "G", &g.to_string())?;
    }
    if let Some(levels) = &m.levels {
        set(cfg, "levels", levels)?;
    }
    Ok(())
}

fn build_config(cli: &Cli) -> Result<RunConfig, TaskError> {
    let cfg_err = |e: config::ConfigError| TaskError::Config(e.to_string());
    let mut cfg = match &cli.command {
        Command::Run { config, sets } => {
            let mut cfg = RunConfig::from_file(config).map_err(cfg_err)?;
            for assignment in sets {
                let (key_path, value) = assignment.split_once('=').ok_or_else(|| {
                    TaskError::Config(format!(
                        "--set expects SECTION.KEY=VALUE, got `{assignment}`"
                    ))
                })?;
                let (section, key) = key_path.split_once('.').ok_or_else(|| {
                    TaskError::Config(format!("--set key must be SECTION.KEY, got `{key_path}`"))
                })?;
                cfg.set(section.trim(), key.trim(), value.trim())
                    .map_err(cfg_err)?;
            }
            cfg
        }
        Command::Seniority {
            model,
            family,
            v,
            t,
            lambda2,
        } => {
            let mut cfg = RunConfig::default();
            cfg.task.kind = TaskKind::Seniority;
            apply_model_flags(&mut cfg, model)?;
            cfg.set("task", "model", family).map_err(cfg_err)?;
            cfg.task.v = *v;
            cfg.task.t = *t;
            cfg.task.lambda2 = *lambda2;
            if cfg.model.n.is_none() {
                cfg.model.n = Some(cfg.model.omega);
            }
            cfg
        }
        Command::Ed {
            model,
            k,
            tol,
            dim_cap,
        } => {
            let mut cfg = RunConfig::default();
            cfg.task.kind = TaskKind::Ed;
            apply_model_flags(&mut cfg, model)?;
            cfg.task.k = *k;
            cfg.task.tol = *tol;
            if let Some(cap) = dim_cap {
                cfg.task.dim_cap = *cap;
            }
            cfg
        }
        Command::BcsBulk { g, filling, eps_q } => {
            let mut cfg = RunConfig::default();
            cfg.task.kind = TaskKind::BcsBulk;
            cfg.model.g_bulk = Some(*g);
            cfg.task.filling = *filling;
            cfg.task.eps_q = *eps_q;
            cfg
        }
        Command::BcsFinite { model, eps_q } => {
            let mut cfg = RunConfig::default();
            cfg.task.kind = TaskKind::BcsFinite;
            apply_model_flags(&mut cfg, model)?;
            cfg.task.eps_q = *eps_q;
            cfg
        }
        Command::Sweep {
            model,
            solver,
            variable,
            values,
            eps_q,
            dim_cap,
            tol,
        } => {
            let mut cfg = RunConfig::default();
            cfg.task.kind = TaskKind::Sweep;
            apply_model_flags(&mut cfg, model)?;
            cfg.set("task", "solver", solver).map_err(cfg_err)?;
            cfg.set("task", "variable", variable).map_err(cfg_err)?;
            cfg.set("task", "values", values).map_err(cfg_err)?;
            cfg.task.eps_q = *eps_q;
            cfg.task.tol = *tol;
            if let Some(cap) = dim_cap {
                cfg.task.dim_cap = *cap;
            }
            cfg
        }
        Command::Extrapolate {
            input,
            observable,
            degree,
        } => {
            let mut cfg = RunConfig::default();
            cfg.task.kind = TaskKind::Extrapolate;
            cfg.task.input = Some(input.clone());
            cfg.task.observable = observable.clone();
            cfg.task.degree = *degree;
            cfg
        }
        Command::Verify => {
            let mut cfg = RunConfig::default();
            cfg.task.kind = TaskKind::Verify;
            cfg
        }
    };
    if let Some(threads) = cli.threads {
        cfg.threads = threads.max(1);
    }
    if let Some(out) = &cli.out {
        cfg.output.path = out.clone();
    }
    if let Some(format) = &cli.format {
        cfg.set("output", "format", format)
            .map_err(|e| TaskError::Config(e.to_string()))?;
    }
    Ok(cfg)
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            if e.use_stderr() {
                // invalid usage maps to the invalid-config exit code
                let msg = e.to_string().replace('"', "'");
                let first_line = msg.lines().next().unwrap_or("invalid arguments");
                eprintln!("{{\"error\":\"{first_line}\",\"exit\":3}}");
                return ExitCode::from(3);
            }
            // --help / --version
            print!("{e}");
            return ExitCode::SUCCESS;
        }
    };

    let result = build_config(&cli).and_then(|cfg| tasks::run(&cfg));
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(err) => {
            let msg = err.message().replace('\\', "\\\\").replace('"', "\\\"");
            eprintln!("{{\"error\":\"{msg}\",\"exit\":{}}}", err.exit_code());
            ExitCode::from(err.exit_code() as u8)
        }
    }
}
