//! Exhaustive parameter sweeps, CSV output and figure data.
//!
//! Output is deterministic: grids are rounded to nine decimals, rows are
//! assembled in canonical order regardless of worker count, and numbers are
//! printed with a fixed nine decimal places.

use std::fmt;
use std::fs::File;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::exec::{with_workers, Execution};
use crate::imperfect_tech::{profit_curve_k, TechModel};
use crate::model_core::{Equilibrium, ModelParams};
use crate::perfect_eq::{alpha_s, zeta_bar, zeta_hat};
use crate::planner::{solve_planner_at_k, solve_planner_imperfect};

fn round9(x: f64) -> f64 {
    let r = (x * 1e9).round() / 1e9;
    if r == 0.0 {
        0.0
    } else {
        r
    }
}

/// `{lo, lo + step, ..., hi}`. The step must divide `hi - lo` evenly.
pub fn even_grid(lo: f64, hi: f64, step: f64, name: &str) -> Result<Vec<f64>> {
    if !(step.is_finite() && step > 0.0) || !(hi >= lo) {
        return Err(Error::InvalidGrid(format!(
            "{name} grid needs a positive step and lo <= hi (got step {step})"
        )));
    }
    let n = ((hi - lo) / step).round();
    if (n * step - (hi - lo)).abs() > 1e-9 {
        return Err(Error::InvalidGrid(format!(
            "{name} step {step} does not divide [{lo}, {hi}] evenly"
        )));
    }
    Ok((0..=n as usize)
        .map(|i| round9(lo + step * i as f64))
        .collect())
}

/// Prints `x` with nine decimals, without a negative zero.
pub fn fmt9(x: f64) -> String {
    let s = format!("{x:.9}");
    if s.trim_start_matches('-')
        .bytes()
        .all(|b| b == b'0' || b == b'.')
    {
        s.trim_start_matches('-').to_string()
    } else {
        s
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SweepModel {
    Ad,
    Sub,
    Planner,
}

impl SweepModel {
    pub fn as_str(&self) -> &'static str {
        match self {
            SweepModel::Ad => "ad",
            SweepModel::Sub => "sub",
            SweepModel::Planner => "planner",
        }
    }
}

impl fmt::Display for SweepModel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for SweepModel {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "ad" => Ok(SweepModel::Ad),
            "sub" => Ok(SweepModel::Sub),
            "planner" => Ok(SweepModel::Planner),
            _ => Err(Error::InvalidParams(format!(
                "unknown sweep model {s:?} (expected ad, sub or planner)"
            ))),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepConfig {
    pub model: SweepModel,
    pub param_step: f64,
    pub k_step: f64,
    pub out: PathBuf,
    pub jobs: Option<usize>,
    /// Replace the default alpha grid.
    pub alpha: Option<Vec<f64>>,
    /// Replace the default v grid.
    pub v: Option<Vec<f64>>,
    /// Replace the default c grid.
    pub c: Option<Vec<f64>>,
    /// Replace the default k grid.
    pub k: Option<Vec<f64>>,
}

impl SweepConfig {
    pub fn new(model: SweepModel, out: impl Into<PathBuf>) -> Self {
        SweepConfig {
            model,
            param_step: 0.05,
            k_step: 0.01,
            out: out.into(),
            jobs: None,
            alpha: None,
            v: None,
            c: None,
            k: None,
        }
    }

    fn grids(&self) -> Result<(Vec<f64>, Vec<f64>, Vec<f64>, Vec<f64>)> {
        let s = self.param_step;
        let pick = |own: &Option<Vec<f64>>, lo, hi, step, name| match own {
            Some(g) => {
                if g.is_empty() || g.windows(2).any(|w| !(w[0] < w[1])) {
                    Err(Error::InvalidGrid(format!(
                        "{name} grid must be nonempty and ascending"
                    )))
                } else {
                    Ok(g.iter().map(|&x| round9(x)).collect())
                }
            }
            None => even_grid(lo, hi, step, name),
        };
        let alpha = pick(&self.alpha, 0.0, 1.0, s, "alpha")?;
        let v: Vec<f64> = pick(&self.v, 0.0, 0.5, s, "v")?
            .into_iter()
            .filter(|&v| v > 0.0 && v < 0.5)
            .collect();
        let c = pick(&self.c, 0.0, 2.0, s, "c")?;
        let k = pick(&self.k, 0.0, 0.5, self.k_step, "k")?;
        if v.is_empty() {
            return Err(Error::InvalidGrid("v grid has no point in (0, 1/2)".into()));
        }
        Ok((alpha, v, c, k))
    }
}

pub const SWEEP_HEADER: [&str; 15] = [
    "alpha",
    "v",
    "c",
    "k",
    "y_star",
    "price",
    "objective",
    "x1",
    "x2",
    "user_base",
    "avg_extremeness",
    "pruned_extreme",
    "pruned_moderate",
    "moderated",
    "regime",
];

pub const EXCLUDED_HEADER: [&str; 4] = ["alpha", "v", "c", "reason"];

#[derive(Debug, Clone, PartialEq)]
pub struct SweepRow {
    pub alpha: f64,
    pub v: f64,
    pub c: f64,
    pub k: f64,
    pub equilibrium: Equilibrium,
}

impl SweepRow {
    pub fn record(&self) -> Vec<String> {
        let e = &self.equilibrium;
        vec![
            fmt9(self.alpha),
            fmt9(self.v),
            fmt9(self.c),
            fmt9(self.k),
            fmt9(e.policy_y),
            e.price.map_or_else(|| "NA".to_string(), fmt9),
            fmt9(e.objective),
            fmt9(e.x1),
            fmt9(e.x2),
            fmt9(e.user_base.measure()),
            fmt9(e.avg_extremeness),
            fmt9(e.pruned_extreme),
            fmt9(e.pruned_moderate),
            e.moderated.to_string(),
            e.regime.as_str().to_string(),
        ]
    }
}

/// A parameter tuple left out of the sweep, with the reason.
#[derive(Debug, Clone, PartialEq)]
pub struct Excluded {
    pub alpha: f64,
    pub v: f64,
    pub c: f64,
    pub reason: &'static str,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepTable {
    pub rows: Vec<SweepRow>,
    pub excluded: Vec<Excluded>,
}

fn solve_row(model: SweepModel, params: &ModelParams) -> Result<Equilibrium> {
    match model {
        SweepModel::Ad => TechModel::Ad.solve(params),
        SweepModel::Sub => TechModel::Sub.solve(params),
        SweepModel::Planner => solve_planner_at_k(params),
    }
}

/// Solves every admissible `(alpha, v, c, k)` tuple. Rows come out sorted by
/// `(alpha, v, c, k)`.
pub fn sweep_table(cfg: &SweepConfig, exec: Execution) -> Result<SweepTable> {
    let (alphas, vs, cs, ks) = cfg.grids()?;
    let mut tuples = Vec::new();
    let mut excluded = Vec::new();
    for &alpha in &alphas {
        for &v in &vs {
            let a_s = alpha_s(v)?;
            for &c in &cs {
                if c < v || c > alpha + 2.0 * v + 1e-9 {
                    continue;
                }
                let reason = if c == v {
                    Some("c_equals_v")
                } else if alpha > a_s {
                    Some("alpha_above_alpha_s")
                } else {
                    None
                };
                match reason {
                    Some(reason) => excluded.push(Excluded {
                        alpha,
                        v,
                        c,
                        reason,
                    }),
                    None => tuples.push((alpha, v, c)),
                }
            }
        }
    }
    let model = cfg.model;
    let blocks = exec.try_map(&tuples, |&(alpha, v, c)| {
        let base = ModelParams::new(alpha, v, c);
        ks.iter()
            .map(|&k| {
                let params = base.with_k(k);
                params.validate()?;
                let equilibrium = solve_row(model, &params)?;
                equilibrium.validate()?;
                Ok(SweepRow {
                    alpha,
                    v,
                    c,
                    k,
                    equilibrium,
                })
            })
            .collect::<Result<Vec<_>>>()
    })?;
    Ok(SweepTable {
        rows: blocks.into_iter().flatten().collect(),
        excluded,
    })
}

fn csv_writer(path: &Path) -> Result<csv::Writer<File>> {
    if let Some(dir) = path.parent().filter(|d| !d.as_os_str().is_empty()) {
        std::fs::create_dir_all(dir)?;
    }
    Ok(csv::WriterBuilder::new()
        .terminator(csv::Terminator::Any(b'\n'))
        .from_path(path)?)
}

/// `<dir>/<stem>_excluded.csv` next to `out`.
pub fn excluded_path(out: &Path) -> PathBuf {
    let stem = out
        .file_stem()
        .map(|s| s.to_string_lossy().into_owned())
        .unwrap_or_else(|| "sweep".into());
    out.with_file_name(format!("{stem}_excluded.csv"))
}

pub fn write_table(table: &SweepTable, out: &Path) -> Result<()> {
    let mut w = csv_writer(out)?;
    w.write_record(SWEEP_HEADER)?;
    for row in &table.rows {
        w.write_record(row.record())?;
    }
    w.flush()?;
    let mut w = csv_writer(&excluded_path(out))?;
    w.write_record(EXCLUDED_HEADER)?;
    for e in &table.excluded {
        w.write_record([fmt9(e.alpha), fmt9(e.v), fmt9(e.c), e.reason.to_string()])?;
    }
    w.flush()?;
    Ok(())
}

/// Runs the sweep and writes the table plus its excluded-tuple file.
/// Returns the number of rows written.
pub fn run_sweep(cfg: &SweepConfig) -> Result<usize> {
    let table = with_workers(cfg.jobs, |exec| sweep_table(cfg, exec))??;
    write_table(&table, &cfg.out)?;
    Ok(table.rows.len())
}

pub const FIGURES: [&str; 6] = [
    "zeta_vs_alpha",
    "pi_k_ad",
    "pi_k_sub",
    "ysk_xbar_vs_k",
    "m1_m2_xbar_vs_k",
    "welfare_vs_k",
];

/// Parameter overrides for figure data; unset fields use the figure's
/// defaults.
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct FigureOverrides {
    pub alpha: Option<f64>,
    pub v: Option<f64>,
    pub c: Option<f64>,
    pub zeta: Option<f64>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct FigureData {
    pub name: String,
    pub columns: Vec<&'static str>,
    pub rows: Vec<Vec<f64>>,
}

impl FigureData {
    pub fn column(&self, name: &str) -> Option<Vec<f64>> {
        let i = self.columns.iter().position(|c| *c == name)?;
        Some(self.rows.iter().map(|r| r[i]).collect())
    }

    pub fn write_csv(&self, out: &Path) -> Result<()> {
        let mut w = csv_writer(out)?;
        w.write_record(&self.columns)?;
        for row in &self.rows {
            w.write_record(row.iter().map(|&x| fmt9(x)))?;
        }
        w.flush()?;
        Ok(())
    }
}

fn figure_params(defaults: (f64, f64, f64, f64), o: &FigureOverrides) -> ModelParams {
    ModelParams::new(
        o.alpha.unwrap_or(defaults.0),
        o.v.unwrap_or(defaults.1),
        o.c.unwrap_or(defaults.2),
    )
    .with_zeta(o.zeta.unwrap_or(defaults.3))
}

/// Data series behind one of the named figures.
pub fn figure_data(name: &str, o: &FigureOverrides, exec: Execution) -> Result<FigureData> {
    let ks = crate::imperfect_tech::k_grid(0.01)?;
    let curve = |model: TechModel, p: &ModelParams| profit_curve_k(model, p, &ks, exec);
    let (columns, rows): (Vec<&'static str>, Vec<Vec<f64>>) = match name {
        "zeta_vs_alpha" => {
            let v = o.v.unwrap_or(0.25);
            if !(v > 0.0 && v < 0.5) {
                return Err(Error::InvalidParams(format!(
                    "v must satisfy 0 < v < 1/2 (got {v})"
                )));
            }
            let top = (2.0 * v).sqrt();
            let alphas: Vec<f64> = even_grid(0.0, 1.0, 0.01, "alpha")?
                .into_iter()
                .filter(|&a| a < top)
                .collect();
            let rows = exec.map(&alphas, |&a| vec![a, zeta_bar(a, v), zeta_hat(a, v)]);
            (vec!["alpha", "zeta_bar", "zeta_hat"], rows)
        }
        "pi_k_ad" => {
            let p = figure_params((0.2, 0.25, 0.3, 0.1), o);
            let rows = curve(TechModel::Ad, &p)?
                .into_iter()
                .map(|pt| {
                    let e = pt.equilibrium;
                    vec![pt.k, e.policy_y, e.objective, e.x1, e.x2]
                })
                .collect();
            (vec!["k", "y_star", "profit", "x1", "x2"], rows)
        }
        "pi_k_sub" => {
            let p = figure_params((0.2, 0.25, 0.3, 1.0), o);
            let rows = curve(TechModel::Sub, &p)?
                .into_iter()
                .map(|pt| {
                    let e = pt.equilibrium;
                    vec![pt.k, e.policy_y, e.price.unwrap_or(f64::NAN), e.objective]
                })
                .collect();
            (vec!["k", "y_star", "price", "profit"], rows)
        }
        "ysk_xbar_vs_k" => {
            let p = figure_params((0.0, 0.25, 0.5, 1.0), o);
            let rows = curve(TechModel::Sub, &p)?
                .into_iter()
                .map(|pt| {
                    vec![
                        pt.k,
                        pt.equilibrium.policy_y,
                        pt.equilibrium.avg_extremeness,
                    ]
                })
                .collect();
            (vec!["k", "y_star", "avg_extremeness"], rows)
        }
        "m1_m2_xbar_vs_k" => {
            let p = figure_params((0.05, 0.2, 0.25, 1.0), o);
            let rows = curve(TechModel::Ad, &p)?
                .into_iter()
                .map(|pt| {
                    let e = pt.equilibrium;
                    vec![pt.k, e.pruned_extreme, e.pruned_moderate, e.avg_extremeness]
                })
                .collect();
            (vec!["k", "m1", "m2", "avg_extremeness"], rows)
        }
        "welfare_vs_k" => {
            let p = figure_params((0.2, 0.25, 0.3, 1.0), o);
            let rows = solve_planner_imperfect(&p, &ks, exec)?
                .into_iter()
                .map(|pt| vec![pt.k, pt.equilibrium.policy_y, pt.equilibrium.objective])
                .collect();
            (vec!["k", "y_star", "welfare"], rows)
        }
        other => return Err(Error::UnknownFigure(other.to_string())),
    };
    Ok(FigureData {
        name: name.to_string(),
        columns,
        rows,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn grid_examples() {
        assert_eq!(
            even_grid(0.0, 0.5, 0.25, "k").unwrap(),
            vec![0.0, 0.25, 0.5]
        );
        let g = even_grid(0.0, 0.5, 0.01, "k").unwrap();
        assert_eq!(g.len(), 51);
        assert_eq!(g[7], 0.07);
        assert_eq!(*g.last().unwrap(), 0.5);
        assert!(matches!(
            even_grid(0.0, 1.0, 0.3, "a"),
            Err(Error::InvalidGrid(_))
        ));
        assert!(matches!(
            even_grid(0.0, 1.0, 0.0, "a"),
            Err(Error::InvalidGrid(_))
        ));
    }

    #[test]
    fn fmt_examples() {
        assert_eq!(fmt9(0.5), "0.500000000");
        assert_eq!(fmt9(-0.0), "0.000000000");
        assert_eq!(fmt9(-1e-12), "0.000000000");
        assert_eq!(fmt9(-0.25), "-0.250000000");
        assert_eq!(fmt9(2.0f64.sqrt()), "1.414213562");
    }

    #[test]
    fn model_names_round_trip() {
        for m in [SweepModel::Ad, SweepModel::Sub, SweepModel::Planner] {
            assert_eq!(m.as_str().parse::<SweepModel>().unwrap(), m);
        }
        assert!("hybrid".parse::<SweepModel>().is_err());
    }

    #[test]
    fn single_tuple_matches_solver() {
        let mut cfg = SweepConfig::new(SweepModel::Ad, "unused.csv");
        cfg.alpha = Some(vec![0.2]);
        cfg.v = Some(vec![0.25]);
        cfg.c = Some(vec![0.3]);
        cfg.k = Some(vec![0.5]);
        let t = sweep_table(&cfg, Execution::Sequential).unwrap();
        assert_eq!(t.rows.len(), 1);
        let e = crate::perfect_eq::solve_ad_perfect(&ModelParams::new(0.2, 0.25, 0.3)).unwrap();
        assert_eq!(t.rows[0].equilibrium.policy_y, e.policy_y);
        assert_eq!(t.rows[0].equilibrium.objective, e.objective);
    }

    #[test]
    fn filters_are_recorded() {
        let mut cfg = SweepConfig::new(SweepModel::Ad, "unused.csv");
        cfg.alpha = Some(vec![0.0, 0.9]);
        cfg.v = Some(vec![0.25]);
        cfg.c = Some(vec![0.2, 0.25, 0.5, 0.8]);
        cfg.k = Some(vec![0.5]);
        let t = sweep_table(&cfg, Execution::Sequential).unwrap();
        let reasons: Vec<_> = t
            .excluded
            .iter()
            .map(|e| (e.alpha, e.c, e.reason))
            .collect();
        assert_eq!(
            reasons,
            vec![
                (0.0, 0.25, "c_equals_v"),
                (0.9, 0.25, "c_equals_v"),
                (0.9, 0.5, "alpha_above_alpha_s"),
                (0.9, 0.8, "alpha_above_alpha_s"),
            ]
        );
        assert_eq!(t.rows.len(), 1);
    }

    #[test]
    fn unknown_figure() {
        let r = figure_data("nope", &FigureOverrides::default(), Execution::Sequential);
        assert!(matches!(r, Err(Error::UnknownFigure(_))));
    }
}
