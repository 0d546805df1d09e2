//! Command-line front end: closed-form tables, raw simulations, profile
//! construction, and the Monte Carlo experiments, emitted as CSV or JSON.
//!
//! Exit codes: 0 = success (and experiment PASS), 2 = experiment ran but
//! a verdict failed, 1 = usage or runtime error.  Outputs are written
//! atomically (temp file + rename) and contain no timestamps, so a given
//! argv + seed reproduces byte-identical files.

use clap::{Args, Parser, Subcommand, ValueEnum};
use sphere_profile_core::mc;
use sphere_profile_core::profile;
use sphere_profile_core::rng::{stream, StreamDomain};
use sphere_profile_core::sde::{simulate_z, Scheme, SimConfig};
use sphere_profile_core::special;
use std::error::Error;
use std::fmt::Write as _;
use std::io::Write as _;
use std::path::{Path, PathBuf};

const VERSION: &str = env!("CARGO_PKG_VERSION");

#[derive(Parser)]
#[command(name = "sphere-profile", version, about = "Sphere-area process toolkit for the Brownian plane")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Csv,
    Json,
}

#[derive(Args)]
struct OutputArgs {
    /// Output file (stdout when omitted); written atomically
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long, value_enum, default_value = "csv")]
    format: Format,
}

#[derive(Args)]
struct GridArgs {
    #[arg(long, allow_hyphen_values = true)]
    xmin: f64,
    #[arg(long, allow_hyphen_values = true)]
    xmax: f64,
    #[arg(long)]
    step: f64,
}

#[derive(Subcommand)]
enum Command {
    /// Table of the stable density p_t and its derivative
    DensityTable {
        #[arg(long, default_value_t = 1.0)]
        t: f64,
        #[command(flatten)]
        grid: GridArgs,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Table of the drift h(t, x) (both forms) and b(x)
    DriftTable {
        #[arg(long, default_value_t = 1.0)]
        t: f64,
        #[command(flatten)]
        grid: GridArgs,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Table of the invariant density theta and its derivative
    ThetaTable {
        #[command(flatten)]
        grid: GridArgs,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Euler-Maruyama path of dZ = 4 dB + b(Z) dt with running integral
    SimulateZ {
        #[arg(long, default_value_t = 0.0, allow_hyphen_values = true)]
        w0: f64,
        #[arg(long = "T", default_value_t = 10.0)]
        t_horizon: f64,
        #[arg(long, default_value_t = 1e-3)]
        dt: f64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Build one W* realization and emit the profile curve (x, L, Ldot, tau*)
    BuildProfile {
        #[arg(long, default_value_t = 2.0)]
        x_max: f64,
        #[arg(long, default_value_t = 50)]
        points: usize,
        #[arg(long, default_value_t = 1e-3)]
        tol: f64,
        #[arg(long, default_value_t = 1e-3)]
        dt: f64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Realization stream index
        #[arg(long, default_value_t = 0)]
        index: u64,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Run a verification experiment; exit 2 if a verdict fails
    Experiment {
        #[command(subcommand)]
        which: ExperimentCmd,
    },
}

#[derive(Args)]
struct ExperimentArgs {
    #[arg(long, default_value_t = 10_000)]
    n: u64,
    #[arg(long, default_value_t = 42)]
    seed: u64,
    #[arg(long, default_value_t = 1e-3)]
    dt: f64,
    /// Output file for the JSON report (stdout when omitted)
    #[arg(long)]
    out: Option<PathBuf>,
    /// Also rerun at dt/2 and require that no verdict flips
    #[arg(long, default_value_t = false)]
    check_dt: bool,
}

#[derive(Subcommand)]
enum ExperimentCmd {
    /// Mean L(x) against (8/21) x^3 and the cubic ratio
    Moments {
        #[command(flatten)]
        common: ExperimentArgs,
        #[arg(long, value_delimiter = ',', default_value = "0.5,1.0,2.0")]
        x_list: Vec<f64>,
    },
    /// Scale invariance (lam^-3 L(lam x), lam^-2 Ldot(lam x)) vs (L(x), Ldot(x))
    Scale {
        #[command(flatten)]
        common: ExperimentArgs,
        #[arg(long, default_value_t = 2.0)]
        lambda: f64,
        #[arg(long, default_value_t = 1.0)]
        x: f64,
    },
    /// Time-reversal identities at the last visit of the integral to -a
    Reversal {
        #[command(flatten)]
        common: ExperimentArgs,
        #[arg(long, default_value_t = 3.0)]
        a: f64,
    },
    /// Time-change construction vs the direct (L, Ldot) SDE
    TwoRoute {
        #[command(flatten)]
        common: ExperimentArgs,
        #[arg(long, default_value_t = 0.5)]
        eps: f64,
        #[arg(long, default_value_t = 0.5)]
        t_step: f64,
    },
    /// Transition-kernel representation through (Z, Lambda) and eta_s
    MarkovKernel {
        #[command(flatten)]
        common: ExperimentArgs,
        #[arg(long, default_value_t = 0.5)]
        eps: f64,
        #[arg(long, default_value_t = 0.25)]
        s_step: f64,
    },
    /// Initial-condition independence and density cross-check of mu
    MuCoupling {
        #[command(flatten)]
        common: ExperimentArgs,
    },
    /// Sign structure of gamma(x)
    Gamma {
        #[command(flatten)]
        common: ExperimentArgs,
    },
}

fn main() {
    if let Ok(v) = std::env::var("SPHERE_PROFILE_THREADS") {
        if let Ok(n) = v.parse::<usize>() {
            let _ = rayon::ThreadPoolBuilder::new().num_threads(n.max(1)).build_global();
        }
    }
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            // clap prints help/version through the error path too
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            std::process::exit(code);
        }
    };
    match dispatch(cli) {
        Ok(code) => std::process::exit(code),
        Err(e) => {
            eprintln!("error: {e}");
            std::process::exit(1);
        }
    }
}

/// Write atomically: temp file in the target directory, then rename.
fn write_output(out: &Option<PathBuf>, content: &str) -> Result<(), Box<dyn Error>> {
    match out {
        None => {
            print!("{content}");
            std::io::stdout().flush()?;
        }
        Some(path) => {
            let dir = path.parent().filter(|p| !p.as_os_str().is_empty()).unwrap_or(Path::new("."));
            std::fs::create_dir_all(dir)?;
            let tmp = dir.join(format!(
                ".{}.tmp",
                path.file_name().and_then(|n| n.to_str()).unwrap_or("out")
            ));
            std::fs::write(&tmp, content)?;
            std::fs::rename(&tmp, path)?;
        }
    }
    Ok(())
}

fn grid_points(g: &GridArgs) -> Result<Vec<f64>, Box<dyn Error>> {
    if !(g.step > 0.0) || !(g.xmax > g.xmin) {
        return Err("grid requires xmax > xmin and step > 0".into());
    }
    let n = ((g.xmax - g.xmin) / g.step + 1e-9).floor() as usize;
    Ok((0..=n).map(|i| g.xmin + i as f64 * g.step).collect())
}

struct Table {
    meta: serde_json::Value,
    columns: Vec<&'static str>,
    rows: Vec<Vec<f64>>,
}

fn render_table(t: &Table, format: Format) -> String {
    match format {
        Format::Csv => {
            let mut s = String::new();
            let _ = writeln!(s, "# sphere-profile {VERSION}");
            let _ = writeln!(s, "# config: {}", t.meta);
            let _ = writeln!(s, "{}", t.columns.join(","));
            for row in &t.rows {
                let cells: Vec<String> = row.iter().map(|v| format!("{v:.16e}")).collect();
                let _ = writeln!(s, "{}", cells.join(","));
            }
            s
        }
        Format::Json => {
            let mut s = serde_json::to_string_pretty(&serde_json::json!({
                "meta": {"tool": "sphere-profile", "version": VERSION, "config": t.meta},
                "columns": t.columns,
                "rows": t.rows,
            }))
            .expect("table serializes");
            s.push('\n');
            s
        }
    }
}

fn run_experiment(
    name: &str,
    common: &ExperimentArgs,
    f: impl Fn(&SimConfig) -> Result<mc::ExperimentReport, mc::McError>,
) -> Result<i32, Box<dyn Error>> {
    let cfg = SimConfig {
        dt: common.dt,
        seed: common.seed,
        max_time: 1e4,
        scheme: Scheme::Euler,
    };
    let report = f(&cfg)?;
    eprintln!("{}", report.to_table());
    let mut pass = report.passed();
    let mut json = report.to_json();
    if common.check_dt {
        let cfg_half = mc::with_halved_dt(&cfg);
        let report_half = f(&cfg_half)?;
        eprintln!("--- rerun at dt/2 ---\n{}", report_half.to_table());
        let flipped = report.passed() != report_half.passed();
        if flipped {
            eprintln!("verdict flipped between dt and dt/2");
        }
        pass = pass && report_half.passed() && !flipped;
        json = serde_json::to_string_pretty(&serde_json::json!({
            "dt": serde_json::from_str::<serde_json::Value>(&report.to_json())?,
            "dt_half": serde_json::from_str::<serde_json::Value>(&report_half.to_json())?,
        }))?;
    }
    json.push('\n');
    write_output(&common.out, &json)?;
    let _ = name;
    Ok(if pass { 0 } else { 2 })
}

fn dispatch(cli: Cli) -> Result<i32, Box<dyn Error>> {
    match cli.command {
        Command::DensityTable { t, grid, output } => {
            let xs = grid_points(&grid)?;
            let mut rows = Vec::with_capacity(xs.len());
            for &x in &xs {
                let d = special::stable_density(t, x)?;
                rows.push(vec![x, d.p, d.p_prime]);
            }
            let table = Table {
                meta: serde_json::json!({"command": "density-table", "t": t, "xmin": grid.xmin, "xmax": grid.xmax, "step": grid.step}),
                columns: vec!["x", "p", "p_prime"],
                rows,
            };
            write_output(&output.out, &render_table(&table, output.format))?;
            Ok(0)
        }
        Command::DriftTable { t, grid, output } => {
            let xs = grid_points(&grid)?;
            let mut rows = Vec::with_capacity(xs.len());
            for &x in &xs {
                rows.push(vec![
                    x,
                    special::drift_h(t, x)?,
                    special::drift_h_airy(t, x)?,
                    special::drift_b(x),
                ]);
            }
            let table = Table {
                meta: serde_json::json!({"command": "drift-table", "t": t, "xmin": grid.xmin, "xmax": grid.xmax, "step": grid.step}),
                columns: vec!["x", "h_ratio", "h_airy", "b"],
                rows,
            };
            write_output(&output.out, &render_table(&table, output.format))?;
            Ok(0)
        }
        Command::ThetaTable { grid, output } => {
            let xs = grid_points(&grid)?;
            let mut rows = Vec::with_capacity(xs.len());
            for &x in &xs {
                rows.push(vec![x, special::theta(x)?, special::theta_prime(x)?]);
            }
            let table = Table {
                meta: serde_json::json!({"command": "theta-table", "xmin": grid.xmin, "xmax": grid.xmax, "step": grid.step}),
                columns: vec!["x", "theta", "theta_prime"],
                rows,
            };
            write_output(&output.out, &render_table(&table, output.format))?;
            Ok(0)
        }
        Command::SimulateZ { w0, t_horizon, dt, seed, output } => {
            let cfg = SimConfig { dt, seed, max_time: t_horizon.max(1.0) * 2.0, scheme: Scheme::Euler };
            let path = simulate_z(w0, t_horizon, &cfg, stream(seed, StreamDomain::ZPath, 0))?;
            let rows: Vec<Vec<f64>> = (0..path.len())
                .map(|k| vec![path.time_at(k), path.values[k], path.running_integral[k]])
                .collect();
            let table = Table {
                meta: serde_json::json!({"command": "simulate-z", "w0": w0, "T": t_horizon, "dt": dt, "seed": seed}),
                columns: vec!["t", "z", "running_integral"],
                rows,
            };
            write_output(&output.out, &render_table(&table, output.format))?;
            Ok(0)
        }
        Command::BuildProfile { x_max, points, tol, dt, seed, index, output } => {
            if points == 0 {
                return Err("points must be positive".into());
            }
            let cfg = SimConfig { dt, seed, max_time: 1e4, scheme: Scheme::Euler };
            let real = profile::build_wstar(x_max, tol, &cfg, index)?;
            let xs: Vec<f64> = (1..=points).map(|k| k as f64 * x_max / points as f64).collect();
            let curve = profile::extract_profile(&real, &xs)?;
            let header = serde_json::json!({
                "command": "build-profile",
                "anchor_b": real.anchor_b,
                "s_b": real.s_b,
                "coverage": real.coverage(),
                "fwd_tail_estimate": real.fwd_tail_estimate,
                "fwd_tail_bound": real.fwd_tail_bound,
                "info": real.info,
            });
            let rows: Vec<Vec<f64>> = (0..curve.xs.len())
                .map(|i| vec![curve.xs[i], curve.l[i], curve.ldot[i], curve.tau_star[i]])
                .collect();
            let table = Table { meta: header, columns: vec!["x", "L", "Ldot", "tau_star"], rows };
            write_output(&output.out, &render_table(&table, output.format))?;
            Ok(0)
        }
        Command::Experiment { which } => match which {
            ExperimentCmd::Moments { common, x_list } => {
                run_experiment("moments", &common, |cfg| mc::moment_experiment(&x_list, common.n, cfg))
            }
            ExperimentCmd::Scale { common, lambda, x } => run_experiment("scale", &common, |cfg| {
                mc::scale_invariance_experiment(lambda, x, common.n, cfg)
            }),
            ExperimentCmd::Reversal { common, a } => {
                run_experiment("reversal", &common, |cfg| mc::reversal_experiment(a, common.n, cfg))
            }
            ExperimentCmd::TwoRoute { common, eps, t_step } => run_experiment("two-route", &common, |cfg| {
                mc::two_route_experiment(eps, t_step, common.n, cfg)
            }),
            ExperimentCmd::MarkovKernel { common, eps, s_step } => {
                run_experiment("markov-kernel", &common, |cfg| {
                    mc::markov_kernel_experiment(eps, s_step, common.n, cfg)
                })
            }
            ExperimentCmd::MuCoupling { common } => {
                run_experiment("mu-coupling", &common, |cfg| mc::mu_coupling_experiment(common.n, cfg))
            }
            ExperimentCmd::Gamma { common } => {
                run_experiment("gamma", &common, |cfg| mc::gamma_experiment(common.n, cfg))
            }
        },
    }
}
