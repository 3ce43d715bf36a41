//! Sweep orchestration and CSV/JSON emission for the `sweep`, `hist` and
//! `compare` subcommands.
//!
//! Numbers are written as `{:.11e}` (12 significant digits); output is
//! byte-identical for identical configuration, whatever the worker count.

use std::fs;
use std::path::{Path, PathBuf};

use serde::Serialize;

use crate::config::RunConfig;
use crate::error::{Error, Result};
use crate::exec::{map_indexed, Backend};
use crate::linalg::DensityOperator;
use crate::model::{
    gate_angle, propagator_analytic, thermal_state, trajectory_coherence, ModelParams,
};
use crate::photonic::conditional_at;
use crate::sampler::{error_report, sample_tpm, tv_distance, Curve, SampleConfig};
use crate::tpm::{
    conditional_matrix, delta_e_distribution, initial_probs, moments, JointTable, TpmStats,
};

/// Slack allowed on probabilities and on the second-law/Landauer inequalities.
pub const PROB_SLACK: f64 = 1e-12;
/// Tolerance on per-row normalization and the fluctuation identity.
pub const SUM_TOL: f64 = 1e-10;

/// Formats one CSV number.
pub fn fmt_num(x: f64) -> String {
    let x = if x == 0.0 { 0.0 } else { x };
    format!("{x:.11e}")
}

fn push_row(out: &mut String, cells: impl IntoIterator<Item = String>) {
    let row: Vec<String> = cells.into_iter().collect();
    out.push_str(&row.join(","));
    out.push('\n');
}

/// Everything computed at one sweep time.
#[derive(Debug, Clone)]
pub struct SweepPoint {
    /// `omega_L t`
    pub wt: f64,
    pub flip_probability: f64,
    pub coherence: f64,
    pub stats: TpmStats,
}

struct Context {
    model: ModelParams,
    rho0: DensityOperator,
    beta: f64,
    h_max: usize,
}

impl Context {
    fn new(cfg: &RunConfig) -> Result<Self> {
        cfg.validate()?;
        let model = cfg.model()?;
        let rho0 = thermal_state(&cfg.thermal()?, &model)?;
        Ok(Self {
            model,
            rho0,
            beta: cfg.beta_b,
            h_max: cfg.moments_max,
        })
    }

    fn time(&self, wt: f64) -> f64 {
        wt / self.model.omega_l()
    }

    fn point(&self, wt: f64) -> Result<SweepPoint> {
        let prop = propagator_analytic(&self.model, self.time(wt));
        let stats = TpmStats::compute(
            initial_probs(&self.rho0),
            conditional_matrix(&prop)?,
            self.h_max,
            self.beta,
        )?;
        Ok(SweepPoint {
            wt,
            flip_probability: prop.flip_probability(),
            coherence: trajectory_coherence(&prop, 2),
            stats,
        })
    }
}

fn check_point(p: &SweepPoint) -> Result<()> {
    let fail = |what: String| Err(Error::Invariant(format!("omega_L t = {}: {what}", p.wt)));
    let j = p.stats.joint.flat();
    if let Some(x) = j.iter().find(|&&x| !(-PROB_SLACK..=1.0 + PROB_SLACK).contains(&x)) {
        return fail(format!("joint probability {x} out of range"));
    }
    let total: f64 = j.iter().sum();
    if (total - 1.0).abs() > SUM_TOL {
        return fail(format!("joint table sums to {total}"));
    }
    if !p.stats.conditional.is_doubly_stochastic(SUM_TOL) {
        return fail("conditional matrix is not doubly stochastic".into());
    }
    let r = &p.stats.report;
    if (r.ift - 1.0).abs() > SUM_TOL {
        return fail(format!("<exp(-ds)> = {}", r.ift));
    }
    if r.ds_mean < -PROB_SLACK {
        return fail(format!("<ds> = {} is negative", r.ds_mean));
    }
    if r.landauer_slack < -PROB_SLACK {
        return fail(format!("Landauer slack {} is negative", r.landauer_slack));
    }
    Ok(())
}

#[derive(Debug, Clone, Serialize)]
pub struct Peak {
    pub omega_l_t: f64,
    pub value: f64,
}

#[derive(Debug, Clone, Serialize)]
pub struct Summary {
    pub config: RunConfig,
    /// Analytic location of the first maximum, `pi / (2 Delta)` in `omega_L t`.
    pub first_peak_analytic: f64,
    pub grid_step: f64,
    pub de_moments: Vec<Peak>,
    pub ds_moments: Vec<Peak>,
    pub flip_probability: Peak,
    pub coherence_l1: Peak,
    pub ds_mean: Peak,
    pub ratio: Option<Peak>,
    pub min_landauer_slack: f64,
    pub max_ift_deviation: f64,
}

fn argmax(points: &[SweepPoint], f: &dyn Fn(&SweepPoint) -> Option<f64>) -> Option<Peak> {
    let mut best: Option<Peak> = None;
    for p in points {
        if let Some(v) = f(p) {
            if best.as_ref().is_none_or(|b| v > b.value) {
                best = Some(Peak {
                    omega_l_t: p.wt,
                    value: v,
                });
            }
        }
    }
    best
}

#[derive(Debug, Clone)]
pub struct SweepOutput {
    pub points: Vec<SweepPoint>,
    pub summary: Summary,
}

pub fn run_sweep(cfg: &RunConfig, backend: Backend) -> Result<SweepOutput> {
    let ctx = Context::new(cfg)?;
    let grid = cfg.time_grid();
    let points = map_indexed(backend, grid.len(), |i| ctx.point(grid[i]))
        .into_iter()
        .collect::<Result<Vec<_>>>()?;
    for p in &points {
        check_point(p)?;
    }
    // every statistic repeats with period pi/Delta, so later maxima only tie the first one
    let period_end = cfg.t_min + ctx.model.omega_l() * ctx.model.quarter_period(2);
    let first_period: Vec<SweepPoint> = points
        .iter()
        .filter(|p| p.wt < period_end)
        .cloned()
        .collect();
    let scan = if first_period.is_empty() { &points } else { &first_period };
    let argmax = |f: &dyn Fn(&SweepPoint) -> Option<f64>| argmax(scan, f);
    let moment_peaks = |sel: fn(&SweepPoint) -> &Vec<f64>| {
        (0..cfg.moments_max)
            .map(|h| argmax(&|p: &SweepPoint| Some(sel(p)[h])).expect("non-empty grid"))
            .collect::<Vec<_>>()
    };
    let summary = Summary {
        config: cfg.clone(),
        first_peak_analytic: ctx.model.omega_l() * ctx.model.quarter_period(1),
        grid_step: (cfg.t_max - cfg.t_min) / (cfg.n_points - 1) as f64,
        de_moments: moment_peaks(|p| &p.stats.de_moments),
        ds_moments: moment_peaks(|p| &p.stats.ds_moments),
        flip_probability: argmax(&|p: &SweepPoint| Some(p.flip_probability)).expect("non-empty grid"),
        coherence_l1: argmax(&|p: &SweepPoint| Some(p.coherence)).expect("non-empty grid"),
        ds_mean: argmax(&|p: &SweepPoint| Some(p.stats.report.ds_mean)).expect("non-empty grid"),
        ratio: argmax(&|p: &SweepPoint| p.stats.report.ratio),
        min_landauer_slack: points
            .iter()
            .map(|p| p.stats.report.landauer_slack)
            .fold(f64::INFINITY, f64::min),
        max_ift_deviation: points
            .iter()
            .map(|p| (p.stats.report.ift - 1.0).abs())
            .fold(0.0, f64::max),
    };
    Ok(SweepOutput { points, summary })
}

impl SweepOutput {
    pub fn sweep_csv(&self) -> String {
        let h_max = self.summary.config.moments_max;
        let mut out = String::new();
        let mut header = vec!["omega_L_t".to_string()];
        header.extend(JointTable::column_names("j_"));
        header.extend((1..=h_max).map(|h| format!("dE_m{h}")));
        header.extend((1..=h_max).map(|h| format!("ds_m{h}")));
        header.extend(
            ["coherence_l1", "ift", "landauer_lhs", "ds_mean", "ratio"].map(String::from),
        );
        push_row(&mut out, header);
        for p in &self.points {
            let s = &p.stats;
            let mut row = vec![fmt_num(p.wt)];
            row.extend(s.joint.flat().map(fmt_num));
            row.extend(s.de_moments.iter().map(|&x| fmt_num(x)));
            row.extend(s.ds_moments.iter().map(|&x| fmt_num(x)));
            row.push(fmt_num(p.coherence));
            row.push(fmt_num(s.report.ift));
            row.push(fmt_num(s.report.landauer_lhs));
            row.push(fmt_num(s.report.ds_mean));
            row.push(s.report.ratio.map(fmt_num).unwrap_or_default());
            push_row(&mut out, row);
        }
        out
    }

    pub fn realizations_csv(&self) -> String {
        let mut out = String::new();
        let mut header = vec!["omega_L_t".to_string()];
        header.extend(JointTable::column_names("ds_"));
        push_row(&mut out, header);
        for p in &self.points {
            let mut row = vec![fmt_num(p.wt)];
            for n in 0..4 {
                for m in 0..4 {
                    row.push(p.stats.realizations.get(n, m).map(fmt_num).unwrap_or_default());
                }
            }
            push_row(&mut out, row);
        }
        out
    }

    pub fn summary_json(&self) -> Result<String> {
        let mut s = serde_json::to_string_pretty(&self.summary)?;
        s.push('\n');
        Ok(s)
    }

    pub fn write(&self, dir: &Path) -> Result<Vec<PathBuf>> {
        fs::create_dir_all(dir)?;
        let files = [
            ("sweep.csv", self.sweep_csv()),
            ("realizations.csv", self.realizations_csv()),
            ("summary.json", self.summary_json()?),
        ];
        write_all(dir, &files)
    }
}

fn write_all(dir: &Path, files: &[(&str, String)]) -> Result<Vec<PathBuf>> {
    let mut written = Vec::new();
    for (name, body) in files {
        let path = dir.join(name);
        fs::write(&path, body)?;
        written.push(path);
    }
    Ok(written)
}

/// `(omega_L t, value, probability)` rows for both distributions.
#[derive(Debug, Clone)]
pub struct Histograms {
    pub de: Vec<(f64, f64, f64)>,
    pub ds: Vec<(f64, f64, f64)>,
}

pub fn emit_distributions(cfg: &RunConfig) -> Result<Histograms> {
    let ctx = Context::new(cfg)?;
    let mut hist = Histograms {
        de: Vec::new(),
        ds: Vec::new(),
    };
    for &wt in &cfg.hist_times {
        if wt < cfg.t_min || wt > cfg.t_max {
            return Err(Error::Config(format!(
                "`hist_times`: {wt} outside [{}, {}]",
                cfg.t_min, cfg.t_max
            )));
        }
        let p = ctx.point(wt)?;
        check_point(&p)?;
        for (target, dist) in [(&mut hist.de, &p.stats.de), (&mut hist.ds, &p.stats.ds)] {
            if (dist.total() - 1.0).abs() > SUM_TOL {
                return Err(Error::Invariant(format!(
                    "omega_L t = {wt}: distribution sums to {}",
                    dist.total()
                )));
            }
            target.extend(dist.atoms().iter().map(|&(v, pr)| (wt, v, pr)));
        }
    }
    Ok(hist)
}

impl Histograms {
    fn csv(rows: &[(f64, f64, f64)]) -> String {
        let mut out = String::from("omega_L_t,value,probability\n");
        for &(t, v, p) in rows {
            push_row(&mut out, [fmt_num(t), fmt_num(v), fmt_num(p)]);
        }
        out
    }

    pub fn de_csv(&self) -> String {
        Self::csv(&self.de)
    }

    pub fn ds_csv(&self) -> String {
        Self::csv(&self.ds)
    }

    pub fn write(&self, dir: &Path) -> Result<Vec<PathBuf>> {
        fs::create_dir_all(dir)?;
        write_all(dir, &[("hist_dE.csv", self.de_csv()), ("hist_ds.csv", self.ds_csv())])
    }
}

#[derive(Debug, Clone)]
pub struct CompareOutput {
    /// Per time: 16 joint-cell errors, then `moments_max` moment errors,
    /// then TV distance and max-cell error.
    pub mc: Curve,
    pub photonic: Option<Curve>,
}

fn curve_csv(c: &Curve) -> String {
    let mut out = String::new();
    let mut header = vec!["omega_L_t".to_string()];
    header.extend(c.names.iter().cloned());
    push_row(&mut out, header);
    for (t, row) in c.times.iter().zip(&c.rows) {
        let mut cells = vec![fmt_num(*t)];
        cells.extend(row.iter().map(|&x| fmt_num(x)));
        push_row(&mut out, cells);
    }
    out
}

/// Sampled-vs-exact errors on the sweep grid; point `i` is sampled with seed
/// `seed + i`.
pub fn run_compare(cfg: &RunConfig, backend: Backend) -> Result<CompareOutput> {
    let ctx = Context::new(cfg)?;
    let grid = cfg.time_grid();
    let h_max = cfg.moments_max;

    let mut names = JointTable::column_names("err_j_");
    names.extend((1..=h_max).map(|h| format!("err_dE_m{h}")));
    let exact_names = names.clone();

    // sampling is parallel inside each point, so points run in order
    let mut exact_rows = Vec::with_capacity(grid.len());
    let mut sampled_rows = Vec::with_capacity(grid.len());
    let mut tv_rows = Vec::with_capacity(grid.len());
    for (i, &wt) in grid.iter().enumerate() {
        let t = ctx.time(wt);
        let prop = propagator_analytic(&ctx.model, t);
        let exact = ctx.point(wt)?;
        let sample_cfg = SampleConfig::new(cfg.samples, cfg.seed.wrapping_add(i as u64), t)?;
        let table = sample_tpm(&ctx.rho0, &prop.u, &sample_cfg, backend)?;
        let freq = table.frequencies()?;
        let dev = tv_distance(&table, &exact.stats.joint)?;

        let mut e = exact.stats.joint.flat().to_vec();
        e.extend(&exact.stats.de_moments);
        let mut s = freq.flat().to_vec();
        s.extend(moments(&delta_e_distribution(&freq), h_max)?);
        exact_rows.push(e);
        sampled_rows.push(s);
        tv_rows.push([dev.tv, dev.max_cell]);
    }
    let theory = Curve {
        times: grid.clone(),
        names: exact_names.clone(),
        rows: exact_rows,
    };
    let estimate = Curve {
        times: grid.clone(),
        names: exact_names,
        rows: sampled_rows,
    };
    let mut mc = error_report(&theory, &estimate)?;
    mc.names.extend(["tv".to_string(), "max_cell".to_string()]);
    for (row, extra) in mc.rows.iter_mut().zip(tv_rows) {
        row.extend(extra);
    }

    let photonic = if cfg.photonic.enabled {
        let optical = cfg.photonic.optical();
        let rows = map_indexed(backend, grid.len(), |i| -> Result<(Vec<f64>, Vec<f64>)> {
            let t = ctx.time(grid[i]);
            let ideal = conditional_matrix(&propagator_analytic(&ctx.model, t))?;
            let real = conditional_at(&optical, gate_angle(&ctx.model, t))?;
            // laid out [in][fin] like the joint columns
            let flat = |c: &crate::tpm::ConditionalMatrix| {
                (0..16).map(|k| c.get(k % 4, k / 4)).collect::<Vec<f64>>()
            };
            Ok((flat(&ideal), flat(&real)))
        })
        .into_iter()
        .collect::<Result<Vec<_>>>()?;
        let names = JointTable::column_names("dc_");
        let (ideal, real): (Vec<_>, Vec<_>) = rows.into_iter().unzip();
        Some(error_report(
            &Curve {
                times: grid.clone(),
                names: names.clone(),
                rows: ideal,
            },
            &Curve {
                times: grid,
                names,
                rows: real,
            },
        )?)
    } else {
        None
    };
    Ok(CompareOutput { mc, photonic })
}

impl CompareOutput {
    pub fn mc_csv(&self) -> String {
        curve_csv(&self.mc)
    }

    pub fn photonic_csv(&self) -> Option<String> {
        self.photonic.as_ref().map(curve_csv)
    }

    pub fn write(&self, dir: &Path) -> Result<Vec<PathBuf>> {
        fs::create_dir_all(dir)?;
        let mut files = vec![("mc_error.csv", self.mc_csv())];
        if let Some(p) = self.photonic_csv() {
            files.push(("photonic_error.csv", p));
        }
        write_all(dir, &files)
    }
}
