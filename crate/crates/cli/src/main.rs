use std::collections::HashMap;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::str::FromStr;

use clap::{error::ErrorKind, Parser, Subcommand};

use modeq::exec::with_workers;
use modeq::extensions::{solve_ad_boycott, solve_hybrid};
use modeq::imperfect_tech::TechModel;
use modeq::perfect_eq::thresholds;
use modeq::planner::{alpha_p, solve_planner_at_k, solve_planner_perfect};
use modeq::sweep::{figure_data, fmt9, run_sweep, FigureOverrides, SweepConfig, SweepModel};
use modeq::{Equilibrium, Error, ModelParams};

const EXIT_USAGE: u8 = 64;

#[derive(Parser, Debug)]
#[command(
    name = "modeq",
    version,
    about = "Content-moderation equilibrium solver"
)]
struct Cli {
    /// File of `key = value` lines; explicit flags take precedence.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand, Debug)]
enum Cmd {
    /// Solve one equilibrium and print it as key=value lines.
    Solve {
        #[arg(long, value_parser = ["ad", "sub", "hybrid", "planner", "boycott"])]
        model: Option<String>,
        #[arg(long)]
        alpha: Option<f64>,
        #[arg(long)]
        v: Option<f64>,
        /// Pruning cost; defaults to alpha + 2v.
        #[arg(long)]
        c: Option<f64>,
        #[arg(long)]
        k: Option<f64>,
        #[arg(long)]
        zeta: Option<f64>,
        #[arg(long)]
        delta: Option<f64>,
        #[arg(long)]
        a: Option<f64>,
        #[arg(long = "a-prime")]
        a_prime: Option<f64>,
        #[arg(long)]
        beta: Option<f64>,
    },
    /// Print the critical values for one v.
    Thresholds {
        #[arg(long)]
        v: Option<f64>,
        /// Alpha at which zeta_bar and zeta_hat are evaluated.
        #[arg(long)]
        alpha: Option<f64>,
    },
    /// Run the exhaustive parameter sweep and write a CSV table.
    Sweep {
        #[arg(long, value_parser = ["ad", "sub", "planner"])]
        model: Option<String>,
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long = "param-step")]
        param_step: Option<f64>,
        #[arg(long = "k-step")]
        k_step: Option<f64>,
        #[arg(long)]
        jobs: Option<usize>,
    },
    /// Write the data series behind a figure.
    Figure {
        #[arg(long)]
        name: Option<String>,
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long)]
        alpha: Option<f64>,
        #[arg(long)]
        v: Option<f64>,
        #[arg(long)]
        c: Option<f64>,
        #[arg(long)]
        zeta: Option<f64>,
        #[arg(long)]
        jobs: Option<usize>,
    },
}

#[derive(Debug)]
enum Failure {
    Usage(String),
    Model(Error),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Model(e)
    }
}

type Outcome<T> = std::result::Result<T, Failure>;

/// `key = value` settings from `--config`.
#[derive(Debug, Default)]
struct Settings(HashMap<String, String>);

impl Settings {
    fn load(path: Option<&Path>) -> Outcome<Self> {
        let Some(path) = path else {
            return Ok(Settings::default());
        };
        let text = std::fs::read_to_string(path).map_err(Error::from)?;
        let mut map = HashMap::new();
        for (n, line) in text.lines().enumerate() {
            let line = line.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (k, v) = line.split_once('=').ok_or_else(|| {
                Failure::Usage(format!(
                    "{}:{}: expected key = value",
                    path.display(),
                    n + 1
                ))
            })?;
            map.insert(k.trim().replace('-', "_"), v.trim().to_string());
        }
        Ok(Settings(map))
    }

    fn get<T: FromStr>(&self, key: &str) -> Outcome<Option<T>> {
        match self.0.get(key) {
            None => Ok(None),
            Some(raw) => raw
                .parse()
                .map(Some)
                .map_err(|_| Failure::Usage(format!("config value for {key} is invalid: {raw:?}"))),
        }
    }

    /// Flag value if given, else the config value.
    fn pick<T: FromStr>(&self, flag: Option<T>, key: &str) -> Outcome<Option<T>> {
        match flag {
            Some(v) => Ok(Some(v)),
            None => self.get(key),
        }
    }

    fn require<T: FromStr>(&self, flag: Option<T>, key: &str) -> Outcome<T> {
        self.pick(flag, key)?.ok_or_else(|| {
            Failure::Usage(format!(
                "missing required value --{}",
                key.replace('_', "-")
            ))
        })
    }
}

fn default_out(file: &str) -> PathBuf {
    match std::env::var_os("MODEQ_OUT_DIR") {
        Some(dir) if !dir.is_empty() => PathBuf::from(dir).join(file),
        _ => PathBuf::from(file),
    }
}

fn print_kv(key: &str, value: impl std::fmt::Display) {
    println!("{key}={value}");
}

fn print_equilibrium(e: &Equilibrium, objective: &str) {
    print_kv("y_star", fmt9(e.policy_y));
    print_kv("price", e.price.map_or_else(|| "NA".to_string(), fmt9));
    print_kv(objective, fmt9(e.objective));
    print_kv("x1", fmt9(e.x1));
    print_kv("x2", fmt9(e.x2));
    print_kv("user_base", fmt9(e.user_base.measure()));
    print_kv("avg_extremeness", fmt9(e.avg_extremeness));
    print_kv("pruned_extreme", fmt9(e.pruned_extreme));
    print_kv("pruned_moderate", fmt9(e.pruned_moderate));
    print_kv("moderated", e.moderated);
    print_kv("regime", e.regime.as_str());
}

fn run(cli: Cli) -> Outcome<()> {
    let cfg = Settings::load(cli.config.as_deref())?;
    match cli.cmd {
        Cmd::Solve {
            model,
            alpha,
            v,
            c,
            k,
            zeta,
            delta,
            a,
            a_prime,
            beta,
        } => {
            let model: String = cfg.require(model, "model")?;
            let alpha: f64 = cfg.require(alpha, "alpha")?;
            let v: f64 = cfg.require(v, "v")?;
            let c = cfg.pick(c, "c")?.unwrap_or(alpha + 2.0 * v);
            let mut params = ModelParams::new(alpha, v, c);
            if let Some(k) = cfg.pick(k, "k")? {
                params = params.with_k(k);
            }
            if let Some(z) = cfg.pick(zeta, "zeta")? {
                params = params.with_zeta(z);
            }
            if let Some(d) = cfg.pick(delta, "delta")? {
                params = params.with_delta(d);
            }
            if let Some(a) = cfg.pick(a, "a")? {
                params = params.with_a(a);
            }
            let ap = cfg.pick(a_prime, "a_prime")?.unwrap_or(params.a_prime);
            let b = cfg.pick(beta, "beta")?.unwrap_or(params.beta);
            params = params.with_boycott(ap, b);
            params.validate()?;
            print_kv("model", &model);
            match model.as_str() {
                "ad" => print_equilibrium(&TechModel::Ad.solve(&params)?, "profit"),
                "sub" => print_equilibrium(&TechModel::Sub.solve(&params)?, "profit"),
                "boycott" => print_equilibrium(&solve_ad_boycott(&params)?, "profit"),
                "planner" if params.k < 0.5 => {
                    print_equilibrium(&solve_planner_at_k(&params)?, "welfare")
                }
                "planner" => {
                    let o = solve_planner_perfect(&params)?;
                    print_kv("y_star", fmt9(o.policy_y));
                    print_kv("welfare", fmt9(o.welfare));
                    print_kv("alpha_p", fmt9(o.alpha_p));
                    print_kv("contribution_at_cutoff", fmt9(o.contribution_at_cutoff));
                    print_kv("moderated", o.moderated);
                }
                "hybrid" => {
                    let h = solve_hybrid(&params)?;
                    print_kv("y_star", fmt9(h.policy_y));
                    print_kv("price", h.price.map_or_else(|| "NA".to_string(), fmt9));
                    print_kv("profit", fmt9(h.profit));
                    print_kv("free_lo", fmt9(h.free_segment.lo));
                    print_kv("free_hi", fmt9(h.free_segment.hi));
                    print_kv("paid_lo", fmt9(h.paid_segment.lo));
                    print_kv("paid_hi", fmt9(h.paid_segment.hi));
                    print_kv("chosen_model", h.chosen_model.as_str());
                }
                other => return Err(Failure::Usage(format!("unknown model {other:?}"))),
            }
        }
        Cmd::Thresholds { v, alpha } => {
            let v: f64 = cfg.require(v, "v")?;
            let alpha = cfg.pick(alpha, "alpha")?.unwrap_or(0.0);
            let t = thresholds(v, alpha)?;
            print_kv("v", fmt9(v));
            print_kv("alpha_A", fmt9(t.alpha_a));
            print_kv("alpha_S", fmt9(t.alpha_s));
            print_kv("alpha_1", fmt9(t.alpha_1));
            print_kv("alpha_P", fmt9(alpha_p(v)?));
            print_kv("zeta_bar", fmt9(t.zeta_bar));
            print_kv("zeta_hat", fmt9(t.zeta_hat));
        }
        Cmd::Sweep {
            model,
            out,
            param_step,
            k_step,
            jobs,
        } => {
            let model: String = cfg.require(model, "model")?;
            let model = SweepModel::from_str(&model)?;
            let out = cfg
                .pick(out, "out")?
                .unwrap_or_else(|| default_out(&format!("sweep_{model}.csv")));
            let mut sc = SweepConfig::new(model, out);
            if let Some(s) = cfg.pick(param_step, "param_step")? {
                sc.param_step = s;
            }
            if let Some(s) = cfg.pick(k_step, "k_step")? {
                sc.k_step = s;
            }
            sc.jobs = cfg.pick(jobs, "jobs")?;
            let n = run_sweep(&sc)?;
            print_kv("rows", n);
            print_kv("out", sc.out.display());
        }
        Cmd::Figure {
            name,
            out,
            alpha,
            v,
            c,
            zeta,
            jobs,
        } => {
            let name: String = cfg.require(name, "name")?;
            let overrides = FigureOverrides {
                alpha: cfg.pick(alpha, "alpha")?,
                v: cfg.pick(v, "v")?,
                c: cfg.pick(c, "c")?,
                zeta: cfg.pick(zeta, "zeta")?,
            };
            let jobs = cfg.pick(jobs, "jobs")?;
            let data = with_workers(jobs, |exec| figure_data(&name, &overrides, exec))??;
            let out = cfg
                .pick(out, "out")?
                .unwrap_or_else(|| default_out(&format!("{name}.csv")));
            data.write_csv(&out)?;
            print_kv("rows", data.rows.len());
            print_kv("out", out.display());
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => ExitCode::SUCCESS,
                _ => ExitCode::from(EXIT_USAGE),
            };
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(EXIT_USAGE)
        }
        Err(Failure::Model(e)) => {
            eprintln!("error: {e}");
            ExitCode::from(match e {
                Error::Io(_) => 2,
                Error::UnknownFigure(_) => EXIT_USAGE,
                _ => 1,
            })
        }
    }
}
