//! Acceptance gate. Run with `cargo test --test acceptance -- --nocapture`
//! to see one PASS/FAIL line per criterion.

use std::f64::consts::PI;

use gatetherm::config::RunConfig;
use gatetherm::exec::Backend;
use gatetherm::linalg::{c, expm_hermitian, op_distance};
use gatetherm::model::{
    gate_angle, h_coeffs, hamiltonians, propagator_analytic, thermal_state, trajectory_coherence,
    ModelParams, ThermalSpec,
};
use gatetherm::photonic::{
    compose_circuit, conditional_at, cz, postselect, OpticalParams,
};
use gatetherm::run::{run_compare, run_sweep};
use gatetherm::sampler::{sample_tpm, tv_distance, SampleConfig};
use gatetherm::tpm::{conditional_matrix, initial_probs, TpmStats};

type Outcome = Result<String, String>;
type Criterion = (&'static str, fn() -> Outcome);

fn params() -> ModelParams {
    ModelParams::default()
}

fn peak_time() -> f64 {
    PI / 26f64.sqrt()
}

/// `omega_L t` grid of the default sweep.
fn grid() -> Vec<f64> {
    RunConfig::default().time_grid()
}

fn grid_step() -> f64 {
    let g = grid();
    g[1] - g[0]
}

fn stats(cond: gatetherm::tpm::ConditionalMatrix) -> TpmStats {
    let p = params();
    let rho = thermal_state(&ThermalSpec::default(), &p).unwrap();
    TpmStats::compute(initial_probs(&rho), cond, 5, 0.5).unwrap()
}

fn model_stats(t: f64) -> TpmStats {
    stats(conditional_matrix(&propagator_analytic(&params(), t)).unwrap())
}

/// Thermal populations evaluated by hand: `p(1_A) = 1 - alpha`, `p(1_B) = 1/(1+e)`.
fn oracle_populations() -> [f64; 4] {
    let a1 = 0.8;
    let b1 = 1.0 / (1.0 + 1f64.exp());
    [(1.0 - a1) * (1.0 - b1), (1.0 - a1) * b1, a1 * (1.0 - b1), a1 * b1]
}

fn check(cond: bool, msg: String) -> Outcome {
    if cond {
        Ok(msg)
    } else {
        Err(msg)
    }
}

fn ac01_oracle_equivalence() -> Outcome {
    let p = params();
    let (_, _, h) = hamiltonians(&p);
    let mut worst: f64 = 0.0;
    for wt in grid() {
        let analytic = propagator_analytic(&p, wt).u;
        let oracle = expm_hermitian(&h, -wt).map_err(|e| e.to_string())?;
        worst = worst.max(op_distance(&analytic, &oracle));
    }
    check(worst <= 1e-10, format!("max entry difference {worst:.3e} <= 1e-10 over 200 points"))
}

fn ac02_normalization() -> Outcome {
    let worst = grid()
        .into_iter()
        .map(|t| {
            let (h1, h2) = h_coeffs(&params(), t);
            (h1.norm_sqr() + h2.norm_sqr() - 1.0).abs()
        })
        .fold(0.0, f64::max);
    check(worst <= 1e-12, format!("max | |h1|^2+|h2|^2 - 1 | = {worst:.3e} <= 1e-12"))
}

fn ac03_conditional_structure() -> Outcome {
    let mut worst_unit: f64 = 0.0;
    let mut worst_ds: f64 = 0.0;
    for t in grid() {
        let c = conditional_matrix(&propagator_analytic(&params(), t)).map_err(|e| e.to_string())?;
        for input in [0, 1] {
            for fin in 0..4 {
                let want = if fin == input { 1.0 } else { 0.0 };
                if fin != input && c.get(fin, input) != 0.0 {
                    return Err(format!("c({fin}|{input}) = {} at t = {t}", c.get(fin, input)));
                }
                worst_unit = worst_unit.max((c.get(fin, input) - want).abs());
            }
            // rows of the joint/conditional layout: p(fin | in) for fixed in
        }
        worst_ds = worst_ds.max(c.column_defect().max(c.row_defect()));
    }
    check(
        worst_unit <= 1e-15 && worst_ds <= 1e-10,
        format!("unit rows in=00,01 (dev {worst_unit:.1e}); doubly stochastic (dev {worst_ds:.1e})"),
    )
}

fn ac04_peak_location() -> Outcome {
    let out = run_sweep(&RunConfig::default(), Backend::Parallel).map_err(|e| e.to_string())?;
    let step = grid_step();
    let de_peak = out.summary.de_moments[0].omega_l_t;
    let flip_peak = out.summary.flip_probability.omega_l_t;
    let at_peak = model_stats(peak_time()).de_moments[0];
    let pops = oracle_populations();
    let oracle = 2.0 * (25.0 / 26.0) * (pops[2] - pops[3]);
    let stated = 0.710959;
    check(
        (de_peak - peak_time()).abs() <= step
            && (flip_peak - peak_time()).abs() <= step
            && (at_peak - oracle).abs() <= 1e-6,
        format!(
            "argmax <dE> at {de_peak:.5}, argmax |h2|^2 at {flip_peak:.5} (pi/sqrt26 = {:.5}, step {step:.5}); \
             <dE>(pi/sqrt26) = {at_peak:.7} vs closed form {oracle:.7} (|diff| {:.1e}); rounded-input literal {stated} differs by {:.1e}",
            peak_time(),
            (at_peak - oracle).abs(),
            (at_peak - stated).abs()
        ),
    )
}

fn ac05_fluctuation_theorem() -> Outcome {
    let mut ift_dev: f64 = 0.0;
    let mut min_ds = f64::INFINITY;
    for t in grid() {
        let s = model_stats(t);
        ift_dev = ift_dev.max((s.report.ift - 1.0).abs());
        min_ds = min_ds.min(s.report.ds_mean);
    }
    check(
        ift_dev <= 1e-10 && min_ds >= -1e-12,
        format!("max |<exp(-ds)> - 1| = {ift_dev:.1e}; min <ds> = {min_ds:.3e}"),
    )
}

fn ac06_landauer() -> Outcome {
    let min_slack = grid()
        .into_iter()
        .map(|t| model_stats(t).report.landauer_slack)
        .fold(f64::INFINITY, f64::min);
    let ds_peak = model_stats(peak_time()).report.ds_mean;
    // numpy oracle value of <ds> at the peak
    let oracle = 0.013584893846;
    check(
        min_slack >= -1e-12 && ds_peak <= 0.02 && (ds_peak - oracle).abs() < 1e-9,
        format!("min beta<dE> - <ds> = {min_slack:.4e}; <ds>(pi/sqrt26) = {ds_peak:.6} <= 0.02"),
    )
}

fn ac07_realization_structure() -> Outcome {
    let series: Vec<_> = grid().into_iter().map(|t| model_stats(t).realizations).collect();
    let mut constant = Vec::new();
    for n in 0..4 {
        for m in 0..4 {
            let vals: Vec<f64> = series.iter().map(|r| r.get(n, m).unwrap()).collect();
            let lo = vals.iter().cloned().fold(f64::INFINITY, f64::min);
            let hi = vals.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
            if hi - lo <= 1e-12 {
                constant.push((n, m));
            } else if hi - lo < 1e-3 {
                return Err(format!("realization ({n},{m}) varies only by {:.1e}", hi - lo));
            }
        }
    }
    let expected: Vec<_> = (0..4).flat_map(|n| [(n, 0), (n, 1)]).collect();
    let zero = series.iter().all(|r| r.get(0, 0).unwrap().abs() <= 1e-15);
    check(
        constant == expected && zero,
        format!("{} of 16 realizations constant, exactly those with fin in {{00, 01}}; ds(00->00) == 0: {zero}", constant.len()),
    )
}

fn ac08_coherence() -> Outcome {
    let p = params();
    let coh = |t: f64| trajectory_coherence(&propagator_analytic(&p, t), 2);
    let mut worst: f64 = 0.0;
    for t in grid() {
        let (h1, h2) = h_coeffs(&p, t);
        worst = worst.max((coh(t) - 2.0 * h1.norm() * h2.norm()).abs());
    }
    let h = 1e-5;
    let derivs: Vec<f64> = (1..=3)
        .map(|k| {
            let t = k as f64 * peak_time();
            (coh(t + h) - coh(t - h)) / (2.0 * h)
        })
        .collect();
    let at_peak = coh(peak_time());
    check(
        worst <= 1e-12 && derivs.iter().all(|d| d.abs() <= 1e-6) && (at_peak - 5.0 / 13.0).abs() <= 1e-12,
        format!("max |C - 2|h1||h2|| = {worst:.1e}; max |dC/dt| at k=1..3 = {:.1e}; C(pi/sqrt26) = {at_peak:.9}",
            derivs.iter().fold(0.0f64, |m, d| m.max(d.abs()))
        ),
    )
}

fn ac09_photonic_ideal() -> Outcome {
    let ideal = OpticalParams::default();
    let gate = postselect(&compose_circuit(&ideal, 0.0).map_err(|e| e.to_string())?);
    let cz_dev = op_distance(&gate.g.scale(c(3.0, 0.0)), &cz());
    let succ_dev = gate.success.iter().map(|s| (s - 1.0 / 9.0).abs()).fold(0.0, f64::max);
    let p = params();
    let mut worst: f64 = 0.0;
    for k in 0..50 {
        let t = 3.0 * peak_time() * k as f64 / 49.0;
        let model = conditional_matrix(&propagator_analytic(&p, t)).map_err(|e| e.to_string())?;
        let optical = conditional_at(&ideal, gate_angle(&p, t)).map_err(|e| e.to_string())?;
        worst = worst.max(model.max_abs_diff(&optical));
    }
    check(
        cz_dev <= 1e-12 && succ_dev <= 1e-12 && worst <= 1e-10,
        format!("||3G - CZ|| = {cz_dev:.1e}; success 1/9 (dev {succ_dev:.1e}); photonic vs Hamiltonian conditional {worst:.1e} over 50 times"),
    )
}

fn ac10_imperfection() -> Outcome {
    let p = params();
    let gamma = gate_angle(&p, peak_time());
    let lossy = OpticalParams {
        t_h: 0.985,
        ..OpticalParams::default()
    };
    let ideal = model_stats(peak_time()).de_moments[4];
    let real = stats(conditional_at(&lossy, gamma).map_err(|e| e.to_string())?).de_moments[4];
    check(
        real < ideal,
        format!("<dE^5> at pi/sqrt26: T_H=0.985 gives {real:.6} < ideal {ideal:.6}"),
    )
}

fn ac11_monte_carlo() -> Outcome {
    let p = params();
    let rho = thermal_state(&ThermalSpec::default(), &p).map_err(|e| e.to_string())?;
    let t = peak_time();
    let prop = propagator_analytic(&p, t);
    let exact = model_stats(t).joint;
    let cfg = SampleConfig::new(1_000_000, 42, t).map_err(|e| e.to_string())?;
    let table = sample_tpm(&rho, &prop.u, &cfg, Backend::Parallel).map_err(|e| e.to_string())?;
    let dev = tv_distance(&table, &exact).map_err(|e| e.to_string())?;

    let run_cfg = RunConfig {
        n_points: 3,
        t_max: 2.0 * peak_time(),
        ..RunConfig::default()
    };
    let first = run_compare(&run_cfg, Backend::Parallel).map_err(|e| e.to_string())?;
    let second = run_compare(&run_cfg, Backend::Parallel).map_err(|e| e.to_string())?;
    let identical = first.mc_csv() == second.mc_csv();
    let sweep_max_cell = first
        .mc
        .rows
        .iter()
        .map(|r| r[r.len() - 1])
        .fold(0.0, f64::max);
    let sweep_tv = first.mc.rows.iter().map(|r| r[r.len() - 2]).fold(0.0, f64::max);
    check(
        dev.max_cell <= 0.005 && dev.tv <= 0.01 && sweep_max_cell <= 0.005 && sweep_tv <= 0.01 && identical,
        format!(
            "n=1e6 seed 42 at pi/sqrt26: max cell {:.2e}, TV {:.2e}; compare grid: max cell {sweep_max_cell:.2e}, TV {sweep_tv:.2e}; byte-identical re-run: {identical}",
            dev.max_cell, dev.tv
        ),
    )
}

fn ac12_distribution_shape() -> Outcome {
    let d = model_stats(peak_time()).de;
    let values: Vec<f64> = d.atoms().iter().map(|a| a.0).collect();
    let got = [d.prob_of(-2.0), d.prob_of(0.0), d.prob_of(2.0)];
    let stated = [0.2069, 0.2308, 0.5624];
    let ok = values == vec![-2.0, 0.0, 2.0]
        && got.iter().zip(stated).all(|(a, b)| (a - b).abs() <= 5e-5)
        && got[2] > got[0];
    check(ok, format!("Prob(dE = -2, 0, +2) = {got:.5?} vs {stated:?}; right tail heavier"))
}

#[test]
fn acceptance_criteria() {
    let criteria: [Criterion; 12] = [
        ("AC01 oracle equivalence", ac01_oracle_equivalence),
        ("AC02 trajectory normalization", ac02_normalization),
        ("AC03 conditional structure", ac03_conditional_structure),
        ("AC04 peak location", ac04_peak_location),
        ("AC05 fluctuation theorem", ac05_fluctuation_theorem),
        ("AC06 Landauer bound", ac06_landauer),
        ("AC07 realization structure", ac07_realization_structure),
        ("AC08 coherence", ac08_coherence),
        ("AC09 photonic ideal gate", ac09_photonic_ideal),
        ("AC10 imperfection", ac10_imperfection),
        ("AC11 Monte Carlo convergence", ac11_monte_carlo),
        ("AC12 distribution shape", ac12_distribution_shape),
    ];
    let mut failed = Vec::new();
    for (name, f) in criteria {
        match f() {
            Ok(msg) => println!("PASS {name}: {msg}"),
            Err(msg) => {
                println!("FAIL {name}: {msg}");
                failed.push(name);
            }
        }
    }
    assert!(failed.is_empty(), "failed criteria: {failed:?}");
}
