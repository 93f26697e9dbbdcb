//! TOML run configuration.
//!
//! Unknown keys anywhere in the file are rejected.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::RunError;
use crate::finite_bath::FiniteBathConfig;
use crate::model::{Branch, Qubit, SystemParams};
use crate::observables::{fraction_grid, GridAxis, TrajectoryState};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Scenario {
    FiniteNami,
    StructuredTraj,
    Concurrence,
    Blp,
    Wigner,
}

impl Scenario {
    pub fn name(self) -> &'static str {
        match self {
            Scenario::FiniteNami => "finite-nami",
            Scenario::StructuredTraj => "structured-traj",
            Scenario::Concurrence => "concurrence",
            Scenario::Blp => "blp",
            Scenario::Wigner => "wigner",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    pub scenario: Scenario,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub output_prefix: Option<String>,
    pub physics: PhysicsConfig,
    pub bath: BathConfig,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub times: Option<TimesConfig>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub nami: Option<NamiConfig>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub wigner: Option<WignerConfig>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub scan: Option<ScanConfig>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub trajectory: Option<TrajectoryConfig>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PhysicsConfig {
    #[serde(default)]
    pub omega_x: f64,
    pub omega_c: f64,
    pub omega: f64,
    pub phi: f64,
    /// `[re, im]`
    pub alpha0: [f64; 2],
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum BathConfig {
    Finite(FiniteBathSection),
    Lorentzian(LorentzianSection),
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FiniteBathSection {
    pub n_modes: usize,
    pub omega_min: f64,
    pub omega_max: f64,
    pub gamma_k: f64,
    #[serde(default = "default_realizations")]
    pub realizations: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub coupling_profile: Option<Vec<f64>>,
}

fn default_realizations() -> usize {
    100
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct LorentzianSection {
    pub gamma: f64,
    pub lambda_over_gamma: Vec<f64>,
    #[serde(default = "default_true")]
    pub markov_reference: bool,
    #[serde(default = "default_grid_modes")]
    pub grid_modes: usize,
    #[serde(default = "default_half_width_factor")]
    pub half_width_factor: f64,
}

fn default_true() -> bool {
    true
}

fn default_grid_modes() -> usize {
    4000
}

fn default_half_width_factor() -> f64 {
    50.0
}

/// Either explicit `values` or an even grid `start..=stop` with `count`
/// points. Finite-bath runs measure time in units of `pi/omega`, Lorentzian
/// runs in units of `1/gamma`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TimesConfig {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub values: Option<Vec<f64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub start: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub stop: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub count: Option<usize>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct NamiConfig {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub fractions: Option<Vec<f64>>,
    #[serde(default = "default_fraction_count")]
    pub fraction_count: usize,
}

fn default_fraction_count() -> usize {
    50
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct WignerConfig {
    /// `[min, max, count]`
    #[serde(default = "default_axis")]
    pub re: [f64; 3],
    #[serde(default = "default_axis")]
    pub im: [f64; 3],
    /// Snapshot time for the `wigner` scenario.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub time: Option<f64>,
}

fn default_axis() -> [f64; 3] {
    [-7.0, 7.0, 141.0]
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ScanConfig {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub photon_numbers: Option<Vec<f64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub phis: Option<Vec<f64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub phases: Option<Vec<f64>>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum TrajectoryStateConfig {
    PostPulseOne,
    PostPulseZero,
    BranchPlus,
    BranchMinus,
}

impl From<TrajectoryStateConfig> for TrajectoryState {
    fn from(c: TrajectoryStateConfig) -> Self {
        match c {
            TrajectoryStateConfig::PostPulseOne => TrajectoryState::Outcome(Qubit::One),
            TrajectoryStateConfig::PostPulseZero => TrajectoryState::Outcome(Qubit::Zero),
            TrajectoryStateConfig::BranchPlus => TrajectoryState::SingleBranch(Branch::Plus),
            TrajectoryStateConfig::BranchMinus => TrajectoryState::SingleBranch(Branch::Minus),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TrajectoryConfig {
    #[serde(default = "default_state")]
    pub state: TrajectoryStateConfig,
}

fn default_state() -> TrajectoryStateConfig {
    TrajectoryStateConfig::PostPulseOne
}

fn invalid(field: &str, message: impl Into<String>) -> RunError {
    RunError::Invalid { field: field.to_string(), message: message.into() }
}

fn finite(field: &str, v: f64) -> Result<(), RunError> {
    if v.is_finite() {
        Ok(())
    } else {
        Err(invalid(field, "must be finite"))
    }
}

impl RunConfig {
    pub fn from_toml(text: &str) -> Result<Self, RunError> {
        toml::from_str(text).map_err(|e| RunError::Parse(e.message().to_string()))
    }

    pub fn to_toml(&self) -> String {
        toml::to_string(self).expect("config serializes")
    }

    pub fn system_params(&self) -> SystemParams<f64> {
        SystemParams {
            omega_x: self.physics.omega_x,
            omega_c: self.physics.omega_c,
            omega: self.physics.omega,
            phi: self.physics.phi,
            alpha0: Complex64::new(self.physics.alpha0[0], self.physics.alpha0[1]),
        }
    }

    pub fn prefix(&self) -> String {
        self.output_prefix.clone().unwrap_or_else(|| self.scenario.name().to_string())
    }

    pub fn finite_bath(&self) -> Option<FiniteBathConfig<f64>> {
        match &self.bath {
            BathConfig::Finite(b) => Some(FiniteBathConfig {
                n_modes: b.n_modes,
                omega_min: b.omega_min,
                omega_max: b.omega_max,
                gamma_k: b.gamma_k,
                coupling_profile: b.coupling_profile.clone(),
                seed: self.seed.unwrap_or(0),
                realizations: b.realizations,
            }),
            BathConfig::Lorentzian(_) => None,
        }
    }

    pub fn lorentzian(&self) -> Option<&LorentzianSection> {
        match &self.bath {
            BathConfig::Lorentzian(l) => Some(l),
            BathConfig::Finite(_) => None,
        }
    }

    /// Time points in the scenario's unit.
    pub fn time_values(&self) -> Vec<f64> {
        let default = match self.scenario {
            Scenario::FiniteNami => TimesConfig {
                values: Some(vec![0.0, 0.05, 0.25, 3.0]),
                start: None,
                stop: None,
                count: None,
            },
            Scenario::Blp => TimesConfig { values: None, start: Some(0.0), stop: Some(20.0), count: Some(2000) },
            _ => TimesConfig { values: None, start: Some(0.0), stop: Some(20.0), count: Some(401) },
        };
        let t = self.times.clone().unwrap_or(default);
        if let Some(v) = t.values {
            return v;
        }
        let start = t.start.unwrap_or(0.0);
        let stop = t.stop.unwrap_or(start);
        let count = t.count.unwrap_or(0);
        if count == 1 {
            return vec![start];
        }
        (0..count)
            .map(|i| start + (stop - start) * i as f64 / (count - 1) as f64)
            .collect()
    }

    pub fn fractions(&self) -> Vec<f64> {
        match &self.nami {
            Some(NamiConfig { fractions: Some(f), .. }) => f.clone(),
            Some(n) => fraction_grid(n.fraction_count),
            None => fraction_grid(default_fraction_count()),
        }
    }

    pub fn wigner_axes(&self) -> (GridAxis<f64>, GridAxis<f64>) {
        let (re, im) = match &self.wigner {
            Some(w) => (w.re, w.im),
            None => (default_axis(), default_axis()),
        };
        (
            GridAxis::new(re[0], re[1], re[2] as usize),
            GridAxis::new(im[0], im[1], im[2] as usize),
        )
    }

    pub fn photon_numbers(&self) -> Vec<f64> {
        self.scan
            .as_ref()
            .and_then(|s| s.photon_numbers.clone())
            .unwrap_or_else(|| vec![5.0, 10.0, 20.0])
    }

    pub fn phis(&self) -> Vec<f64> {
        self.scan
            .as_ref()
            .and_then(|s| s.phis.clone())
            .unwrap_or_else(|| vec![self.physics.phi])
    }

    pub fn phases(&self) -> Vec<f64> {
        self.scan
            .as_ref()
            .and_then(|s| s.phases.clone())
            .unwrap_or_else(|| vec![0.0, std::f64::consts::FRAC_PI_2, std::f64::consts::PI])
    }

    pub fn trajectory_state(&self) -> TrajectoryState {
        self.trajectory.as_ref().map_or(TrajectoryStateConfig::PostPulseOne, |t| t.state).into()
    }

    pub fn validate(&self) -> Result<(), RunError> {
        self.system_params()
            .validate()
            .map_err(|e| invalid(&format!("physics.{}", e.field), e.reason))?;

        match (&self.bath, self.scenario) {
            (BathConfig::Finite(_), Scenario::FiniteNami | Scenario::Wigner) => {}
            (BathConfig::Lorentzian(_), Scenario::StructuredTraj | Scenario::Concurrence | Scenario::Blp | Scenario::Wigner) => {}
            (BathConfig::Finite(_), s) => {
                return Err(invalid("bath", format!("scenario {} needs [bath.lorentzian]", s.name())))
            }
            (BathConfig::Lorentzian(_), s) => {
                return Err(invalid("bath", format!("scenario {} needs [bath.finite]", s.name())))
            }
        }
        match &self.bath {
            BathConfig::Finite(b) => {
                let cfg = self.finite_bath().expect("finite bath");
                cfg.validate().map_err(|e| invalid(&format!("bath.finite.{}", e.field), e.reason))?;
                if b.realizations == 0 {
                    return Err(invalid("bath.finite.realizations", "must be at least 1"));
                }
            }
            BathConfig::Lorentzian(l) => {
                if !(l.gamma > 0.0) || !l.gamma.is_finite() {
                    return Err(invalid("bath.lorentzian.gamma", "must be positive and finite"));
                }
                if l.lambda_over_gamma.is_empty() {
                    return Err(invalid("bath.lorentzian.lambda_over_gamma", "must not be empty"));
                }
                if l.lambda_over_gamma.iter().any(|&x| !(x > 0.0) || !x.is_finite()) {
                    return Err(invalid("bath.lorentzian.lambda_over_gamma", "entries must be positive and finite"));
                }
                if l.grid_modes == 0 {
                    return Err(invalid("bath.lorentzian.grid_modes", "must be at least 1"));
                }
                if !(l.half_width_factor > 0.0) || !l.half_width_factor.is_finite() {
                    return Err(invalid("bath.lorentzian.half_width_factor", "must be positive and finite"));
                }
            }
        }

        if let Some(t) = &self.times {
            match (&t.values, t.start, t.stop, t.count) {
                (Some(_), None, None, None) => {}
                (None, Some(_), Some(_), Some(_)) => {}
                _ => return Err(invalid("times", "give either `values` or all of `start`, `stop`, `count`")),
            }
            if let Some(start) = t.start {
                finite("times.start", start)?;
            }
            if let Some(stop) = t.stop {
                finite("times.stop", stop)?;
            }
            if let (Some(start), Some(stop)) = (t.start, t.stop) {
                if stop < start {
                    return Err(invalid("times.stop", "must not be below times.start"));
                }
            }
        }
        if self.scenario != Scenario::Wigner {
            let times = self.time_values();
            if times.is_empty() {
                return Err(invalid("times", "time grid is empty"));
            }
            if times.iter().any(|t| !t.is_finite() || *t < 0.0) {
                return Err(invalid("times", "times must be finite and non-negative"));
            }
            if times.windows(2).any(|w| w[1] < w[0]) {
                return Err(invalid("times", "times must be sorted ascending"));
            }
        }

        if matches!(self.bath, BathConfig::Finite(_)) && self.physics.omega == 0.0 {
            return Err(invalid("physics.omega", "finite-bath times are measured in pi/omega and need omega != 0"));
        }
        if self.scenario == Scenario::Wigner && matches!(self.trajectory_state(), TrajectoryState::SingleBranch(_)) {
            return Err(invalid("trajectory.state", "the wigner scenario needs a post-pulse state"));
        }

        if self.seed.is_some_and(|s| s > i64::MAX as u64) {
            return Err(invalid("seed", format!("must be at most {}", i64::MAX)));
        }
        if self.scenario == Scenario::FiniteNami {
            if self.seed.is_none() {
                return Err(invalid("seed", "required for fragment sampling"));
            }
            let f = self.fractions();
            if f.is_empty() {
                return Err(invalid("nami.fractions", "must not be empty"));
            }
            if f.iter().any(|x| !(0.0..=1.0).contains(x)) {
                return Err(invalid("nami.fractions", "fractions must lie in [0, 1]"));
            }
        }

        if let Some(w) = &self.wigner {
            for (name, ax) in [("wigner.re", w.re), ("wigner.im", w.im)] {
                if !(ax[0].is_finite() && ax[1].is_finite()) || !(ax[0] < ax[1]) {
                    return Err(invalid(name, "need finite min < max"));
                }
                if !(ax[2] >= 2.0) || ax[2].fract() != 0.0 || ax[2] > 1e5 {
                    return Err(invalid(name, "count must be an integer in [2, 100000]"));
                }
            }
            if let Some(t) = w.time {
                if !(t >= 0.0) || !t.is_finite() {
                    return Err(invalid("wigner.time", "must be finite and non-negative"));
                }
            }
        }
        if self.scenario == Scenario::Wigner && self.wigner.as_ref().and_then(|w| w.time).is_none() {
            return Err(invalid("wigner.time", "required for the wigner scenario"));
        }

        let photons = self.photon_numbers();
        if photons.is_empty() || photons.iter().any(|n| !(n.is_finite() && *n > 0.0)) {
            return Err(invalid("scan.photon_numbers", "need at least one positive, finite value"));
        }
        let phis = self.phis();
        if phis.is_empty() || phis.iter().any(|p| !(0.0..=std::f64::consts::FRAC_PI_2 + 1e-12).contains(p)) {
            return Err(invalid("scan.phis", "values must lie in [0, pi/2]"));
        }
        let phases = self.phases();
        if phases.is_empty() || phases.iter().any(|p| !p.is_finite()) {
            return Err(invalid("scan.phases", "need at least one finite value"));
        }

        if let Some(prefix) = &self.output_prefix {
            if prefix.is_empty() || prefix.contains(['/', '\\']) || prefix == "." || prefix == ".." {
                return Err(invalid("output_prefix", "must be a plain, non-empty file name prefix"));
            }
        }
        Ok(())
    }
}
