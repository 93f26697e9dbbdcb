use std::f64::consts::PI;

use num_complex::Complex64;

use super::config::{RunConfig, Scenario};
use super::output::ScanResult;
use super::RunError;
use crate::coherent::CoherentMixture;
use crate::finite_bath::evolve_both;
use crate::model::{apply_probe_pulse, BranchAmplitudes, SystemParams, TwoBranchState};
use crate::observables::{
    blp_from_moments, cavity_state, nami_curve, trajectory, wigner, CatSnapshot, PairFamily, WignerGrid,
};
use crate::structured::{
    ContinuumGrid, LinearReservoir, LorentzParams, LorentzianReservoir, MarkovReservoir, ReservoirMoments,
};

/// Computes every table of a validated configuration.
pub fn compute(cfg: &RunConfig) -> Result<Vec<ScanResult>, RunError> {
    match cfg.scenario {
        Scenario::FiniteNami => finite_nami(cfg),
        Scenario::StructuredTraj => structured_traj(cfg),
        Scenario::Concurrence => concurrence(cfg),
        Scenario::Blp => blp(cfg),
        Scenario::Wigner => wigner_snapshot(cfg),
    }
}

fn label(x: f64) -> String {
    format!("{x}")
}

fn wigner_table(name: String, grid: &WignerGrid<f64>) -> ScanResult {
    let mut r = ScanResult::new(name, vec!["re".into(), "im".into(), "w".into()], "cavity frame rotating at omega_c");
    for j in 0..grid.im.count {
        for i in 0..grid.re.count {
            r.rows.push(vec![grid.re.point(i), grid.im.point(j), grid.value(i, j)]);
        }
    }
    r
}

/// Post-pulse qubit-`|1>` state with the cavity labels moved into the frame
/// rotating at `omega_c`.
fn rotating_post_pulse(params: &SystemParams<f64>, amps: &BranchAmplitudes<f64>, i: usize) -> TwoBranchState<f64> {
    let pre = TwoBranchState::at_slice(params, amps, i);
    let (mut one, _) = apply_probe_pulse(&pre);
    let rot = Complex64::from_polar(1.0, params.omega_c * amps.times[i]);
    one.alpha *= rot;
    one.beta *= rot;
    one
}

fn finite_times(cfg: &RunConfig) -> (Vec<f64>, usize, f64) {
    let unit = PI / cfg.physics.omega.abs();
    let mut times: Vec<f64> = cfg.time_values().iter().map(|s| s * unit).collect();
    let offset = if times.first() != Some(&0.0) {
        times.insert(0, 0.0);
        1
    } else {
        0
    };
    (times, offset, unit)
}

fn excitation_defect(amps: &BranchAmplitudes<f64>, i: usize, n0: f64) -> [f64; 2] {
    let e = |cav: Complex64, bath: &[Complex64]| cav.norm_sqr() + bath.iter().map(|z| z.norm_sqr()).sum::<f64>();
    [
        (e(amps.alpha[i], &amps.lambda[i]) - n0).abs() / n0.max(f64::MIN_POSITIVE),
        (e(amps.beta[i], &amps.chi[i]) - n0).abs() / n0.max(f64::MIN_POSITIVE),
    ]
}

fn finite_nami(cfg: &RunConfig) -> Result<Vec<ScanResult>, RunError> {
    let params = cfg.system_params();
    let bath = cfg.finite_bath().expect("validated");
    let seed = cfg.seed.expect("validated");
    let fractions = cfg.fractions();
    let (re_ax, im_ax) = cfg.wigner_axes();
    let (times, offset, unit) = finite_times(cfg);
    let amps = evolve_both(&params, &bath, &times).map_err(crate::Error::from)?;
    let n0 = params.mean_photons();

    let stamps = times.len() - offset;
    let mut nami_cols = vec!["f".to_string()];
    nami_cols.extend((0..stamps).map(|i| format!("nami_{i}")));
    let mut nami = ScanResult::new("nami", nami_cols, "stamp times in units of pi/omega, see the stamps table");
    let mut diag = ScanResult::new(
        "stamps",
        [
            "stamp",
            "t_over_pi_omega",
            "t",
            "cavity_entropy_bits",
            "mean_photons",
            "plateau_deviation",
            "wigner_min",
            "wigner_integral",
            "excitation_defect_plus",
            "excitation_defect_minus",
        ]
        .map(String::from)
        .to_vec(),
        "",
    );
    let mut curves = Vec::with_capacity(stamps);
    let mut tables = Vec::new();
    for s in 0..stamps {
        let i = s + offset;
        let state = rotating_post_pulse(&params, &amps, i);
        let curve = nami_curve(&state, &fractions, bath.realizations, seed).map_err(crate::Error::from)?;
        let rho = cavity_state(&state).map_err(crate::Error::from)?;
        let grid = wigner(&rho, re_ax, im_ax).map_err(crate::Error::from)?;
        let ex = excitation_defect(&amps, i, n0);
        diag.push(vec![
            s as f64,
            times[i] / unit,
            times[i],
            curve.cavity_entropy,
            rho.mean_photon_number(),
            curve.max_deviation(0.5, 0.1, 0.9),
            grid.min(),
            grid.integral(),
            ex[0],
            ex[1],
        ])?;
        tables.push(wigner_table(format!("wigner_{s}"), &grid));
        curves.push(curve);
    }
    for (k, &f) in fractions.iter().enumerate() {
        let mut row = vec![f];
        row.extend(curves.iter().map(|c| c.values[k]));
        nami.push(row)?;
    }
    let mut out = vec![nami, diag];
    out.extend(tables);
    Ok(out)
}

fn reservoirs(cfg: &RunConfig, params: &SystemParams<f64>) -> Result<Vec<Box<dyn LinearReservoir<f64>>>, RunError> {
    let l = cfg.lorentzian().expect("validated");
    let mut out: Vec<Box<dyn LinearReservoir<f64>>> = Vec::new();
    for &x in &l.lambda_over_gamma {
        let p = LorentzParams::new(l.gamma, x * l.gamma, params.omega).map_err(crate::Error::from)?;
        let grid = ContinuumGrid::new(&p, params.omega_c, l.grid_modes, l.half_width_factor * x * l.gamma)
            .map_err(crate::Error::from)?;
        out.push(Box::new(LorentzianReservoir::new(p, grid).map_err(crate::Error::from)?));
    }
    if l.markov_reference {
        out.push(Box::new(MarkovReservoir { kappa: l.gamma / 2.0, omega: params.omega }));
    }
    Ok(out)
}

fn structured_times(cfg: &RunConfig) -> Vec<f64> {
    let gamma = cfg.lorentzian().expect("validated").gamma;
    cfg.time_values().iter().map(|v| v / gamma).collect()
}

fn structured_traj(cfg: &RunConfig) -> Result<Vec<ScanResult>, RunError> {
    let params = cfg.system_params();
    let gamma = cfg.lorentzian().expect("validated").gamma;
    let times = structured_times(cfg);
    let which = cfg.trajectory_state();
    let res = reservoirs(cfg, &params)?;
    let mut cols = vec!["t".to_string()];
    let mut series = Vec::new();
    for r in &res {
        let pts = trajectory(&params, r.as_ref(), &times, which)?;
        cols.push(format!("n_{}", r.label()));
        cols.push(format!("gamma_{}", r.label()));
        series.push(pts);
    }
    let mut table = ScanResult::new("traj", cols, "time in units of 1/gamma");
    for (k, &t) in times.iter().enumerate() {
        let mut row = vec![t * gamma];
        for pts in &series {
            row.push(pts[k].mean_photons);
            row.push(pts[k].idempotency_defect);
        }
        table.push(row)?;
    }
    Ok(vec![table])
}

fn with_photons(params: &SystemParams<f64>, n: f64, phi: f64) -> SystemParams<f64> {
    let phase = if params.alpha0.norm() > 0.0 { params.alpha0.arg() } else { 0.0 };
    SystemParams { alpha0: Complex64::from_polar(n.sqrt(), phase), phi, ..params.clone() }
}

fn concurrence(cfg: &RunConfig) -> Result<Vec<ScanResult>, RunError> {
    let params = cfg.system_params();
    let gamma = cfg.lorentzian().expect("validated").gamma;
    let times = structured_times(cfg);
    let which = cfg.trajectory_state();
    let res = reservoirs(cfg, &params)?;
    let mut cols = vec!["t".to_string()];
    let mut series = Vec::new();
    for r in &res {
        for &phi in &cfg.phis() {
            for &n in &cfg.photon_numbers() {
                let p = with_photons(&params, n, phi);
                let pts = trajectory(&p, r.as_ref(), &times, which)?;
                cols.push(format!("c_{}_phi_{}_n_{}", r.label(), label(phi), label(n)));
                series.push(pts);
            }
        }
    }
    let mut table = ScanResult::new("concurrence", cols, "time in units of 1/gamma");
    for (k, &t) in times.iter().enumerate() {
        let mut row = vec![t * gamma];
        row.extend(series.iter().map(|pts| pts[k].concurrence));
        table.push(row)?;
    }
    Ok(vec![table])
}

fn moments(r: &dyn LinearReservoir<f64>, times: &[f64]) -> Result<Vec<ReservoirMoments<f64>>, RunError> {
    use rayon::prelude::*;
    let m: Result<Vec<_>, _> = times.par_iter().map(|&t| r.moments(t)).collect();
    Ok(m.map_err(crate::Error::from)?)
}

fn blp(cfg: &RunConfig) -> Result<Vec<ScanResult>, RunError> {
    let params = cfg.system_params();
    let l = cfg.lorentzian().expect("validated");
    let times = structured_times(cfg);
    let photons = cfg.photon_numbers();
    let phases = cfg.phases();
    let mut cols = vec!["lambda_over_gamma".to_string(), "markov".to_string()];
    cols.extend(photons.iter().map(|n| format!("blp_n_{}", label(*n))));
    cols.extend(photons.iter().map(|n| format!("phase_n_{}", label(*n))));
    let mut table = ScanResult::new("blp", cols, "markov rows carry NaN in lambda_over_gamma");
    let res = reservoirs(cfg, &params)?;
    let xs: Vec<Option<f64>> = l
        .lambda_over_gamma
        .iter()
        .map(|&x| Some(x))
        .chain(l.markov_reference.then_some(None))
        .collect();
    for (r, x) in res.iter().zip(xs) {
        let m = moments(r.as_ref(), &times)?;
        let mut measures = Vec::new();
        let mut best = Vec::new();
        for &n in &photons {
            let family = PairFamily { photon_number: n, phases: phases.clone() };
            let v = blp_from_moments(&m, &family)?;
            measures.push(v.measure);
            best.push(v.best_phase);
        }
        let mut row = vec![x.unwrap_or(f64::NAN), if x.is_none() { 1.0 } else { 0.0 }];
        row.extend(measures);
        row.extend(best);
        table.push(row)?;
    }
    Ok(vec![table])
}

fn wigner_snapshot(cfg: &RunConfig) -> Result<Vec<ScanResult>, RunError> {
    let params = cfg.system_params();
    let (re_ax, im_ax) = cfg.wigner_axes();
    let stamp = cfg.wigner.as_ref().and_then(|w| w.time).expect("validated");
    let rho: CoherentMixture<f64> = if let Some(bath) = cfg.finite_bath() {
        let t = stamp * PI / params.omega.abs();
        let times = if t == 0.0 { vec![0.0] } else { vec![0.0, t] };
        let amps = evolve_both(&params, &bath, &times).map_err(crate::Error::from)?;
        let state = rotating_post_pulse(&params, &amps, times.len() - 1);
        cavity_state(&state).map_err(crate::Error::from)?
    } else {
        let l = cfg.lorentzian().expect("validated");
        let t = stamp / l.gamma;
        let res = reservoirs(cfg, &params)?;
        let m = res[0].moments(t).map_err(crate::Error::from)?;
        let q = match cfg.trajectory_state() {
            crate::observables::TrajectoryState::Outcome(q) => q,
            crate::observables::TrajectoryState::SingleBranch(_) => {
                return Err(RunError::Invalid {
                    field: "trajectory.state".into(),
                    message: "the wigner scenario needs a post-pulse state".into(),
                })
            }
        };
        CatSnapshot::from_moments(&params, &m, t, q).cavity_state().map_err(crate::Error::from)?
    };
    let grid = wigner(&rho, re_ax, im_ax).map_err(crate::Error::from)?;
    Ok(vec![wigner_table("wigner".into(), &grid)])
}
