//! Scenario files: parsing, validation and the bundled figure scenarios.

use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::path::Path;

use serde::Deserialize;
use wgamp_core::model::{DriveSet, RateSet, Topology};
use wgamp_core::optimize::{geomspace, linspace};

pub const MAX_SWEEP_AXES: usize = 2;

#[derive(Debug, Clone, PartialEq)]
pub struct ScenarioError(pub String);

impl fmt::Display for ScenarioError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl std::error::Error for ScenarioError {}

fn invalid<T>(msg: impl Into<String>) -> Result<T, ScenarioError> {
    Err(ScenarioError(msg.into()))
}

#[derive(Debug, Clone, Copy, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RatesSpec {
    pub gamma_p: f64,
    pub gamma_d: f64,
    #[serde(default)]
    pub gamma_nr: f64,
    #[serde(default)]
    pub gamma_l2: f64,
    #[serde(default)]
    pub gamma_l3: f64,
}

/// Beam parameters; a Rabi frequency may instead be given as a mean photon
/// number, which is converted with the topology's rates.
#[derive(Debug, Clone, Copy, Default, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DrivesSpec {
    pub omega_p: Option<f64>,
    pub omega_d: Option<f64>,
    pub mean_probe_photons: Option<f64>,
    pub mean_drive_photons: Option<f64>,
    #[serde(default)]
    pub delta_p: f64,
    #[serde(default)]
    pub delta_d: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Scale {
    #[default]
    Linear,
    Log,
}

#[derive(Debug, Clone, PartialEq, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GridSpec {
    pub start: Option<f64>,
    pub stop: Option<f64>,
    pub count: Option<usize>,
    #[serde(default)]
    pub scale: Scale,
    pub values: Option<Vec<f64>>,
}

impl GridSpec {
    pub fn points(&self) -> Result<Vec<f64>, ScenarioError> {
        if let Some(v) = &self.values {
            if self.start.is_some() || self.stop.is_some() || self.count.is_some() {
                return invalid("grid has both `values` and a start/stop/count range");
            }
            if v.is_empty() {
                return invalid("grid `values` is empty");
            }
            if v.iter().any(|x| !x.is_finite()) {
                return invalid("grid values must be finite");
            }
            return Ok(v.clone());
        }
        let (Some(start), Some(stop), Some(count)) = (self.start, self.stop, self.count) else {
            return invalid("grid needs `values` or all of start, stop and count");
        };
        if count < 1 {
            return invalid("grid count must be at least 1");
        }
        if !start.is_finite() || !stop.is_finite() {
            return invalid("grid bounds must be finite");
        }
        match self.scale {
            Scale::Linear => Ok(linspace(start, stop, count)),
            Scale::Log => {
                if start <= 0.0 || stop <= 0.0 {
                    return invalid("log grid bounds must be positive");
                }
                Ok(geomspace(start, stop, count))
            }
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Parameter {
    OmegaP,
    OmegaD,
    MeanProbePhotons,
    MeanDrivePhotons,
    DeltaP,
    DeltaD,
    GammaP,
    GammaD,
    GammaNr,
    GammaL2,
    GammaL3,
}

impl Parameter {
    pub fn name(self) -> &'static str {
        match self {
            Parameter::OmegaP => "omega_p",
            Parameter::OmegaD => "omega_d",
            Parameter::MeanProbePhotons => "mean_probe_photons",
            Parameter::MeanDrivePhotons => "mean_drive_photons",
            Parameter::DeltaP => "delta_p",
            Parameter::DeltaD => "delta_d",
            Parameter::GammaP => "gamma_p",
            Parameter::GammaD => "gamma_d",
            Parameter::GammaNr => "gamma_nr",
            Parameter::GammaL2 => "gamma_l2",
            Parameter::GammaL3 => "gamma_l3",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SweepAxis {
    pub parameter: Parameter,
    #[serde(flatten)]
    pub grid: GridSpec,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Observable {
    Transport,
    EtaC,
    EtaCApprox,
    EtaCMax,
    EtaInc,
    EtaIncApprox,
    EtaTotal,
    G2Curve,
    G2Zero,
    PhaseResponse,
    AmplitudeResponse,
    KerrCoefficient,
    KkCheck,
}

impl Observable {
    pub fn name(self) -> &'static str {
        match self {
            Observable::Transport => "transport",
            Observable::EtaC => "eta_c",
            Observable::EtaCApprox => "eta_c_approx",
            Observable::EtaCMax => "eta_c_max",
            Observable::EtaInc => "eta_inc",
            Observable::EtaIncApprox => "eta_inc_approx",
            Observable::EtaTotal => "eta_total",
            Observable::G2Curve => "g2_curve",
            Observable::G2Zero => "g2_zero",
            Observable::PhaseResponse => "phase_response",
            Observable::AmplitudeResponse => "amplitude_response",
            Observable::KerrCoefficient => "kerr_coefficient",
            Observable::KkCheck => "kk_check",
        }
    }

    /// Gain decompositions exist only where a population inversion can form.
    pub fn supports(self, topology: Topology) -> bool {
        match self {
            Observable::EtaC
            | Observable::EtaCApprox
            | Observable::EtaCMax
            | Observable::EtaInc
            | Observable::EtaIncApprox => topology != Topology::Ladder,
            _ => true,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Deserialize)]
#[serde(untagged)]
pub enum DeltaGridSpec {
    Keyword(String),
    Grid(GridSpec),
}

#[derive(Debug, Clone, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
struct ScenarioFile {
    name: String,
    #[serde(default)]
    description: String,
    topologies: Vec<String>,
    rates: RatesSpec,
    #[serde(default)]
    rates_by_topology: BTreeMap<String, RatesSpec>,
    #[serde(default)]
    drives: DrivesSpec,
    #[serde(default)]
    sweeps: Vec<SweepAxis>,
    observables: Vec<Observable>,
    delta_grid: Option<DeltaGridSpec>,
    tau_grid: Option<GridSpec>,
}

/// Probe-detuning samples for spectral observables.
#[derive(Debug, Clone, PartialEq)]
pub enum DeltaGrid {
    /// ±20 of the largest linewidth, 801 points.
    Default,
    Explicit(Vec<f64>),
    /// Report the detuning that maximizes the response instead of a curve.
    Maximize,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Sweep {
    pub parameter: Parameter,
    pub values: Vec<f64>,
}

/// One fully specified parameter point.
#[derive(Debug, Clone, PartialEq)]
pub struct Point {
    pub topology: Topology,
    /// Sweep values in axis order.
    pub coords: Vec<f64>,
    pub rates: RateSet,
    pub drives: DriveSet,
}

/// A validated scenario.
#[derive(Debug, Clone, PartialEq)]
pub struct Scenario {
    pub name: String,
    pub description: String,
    pub topologies: Vec<Topology>,
    pub rates: RatesSpec,
    pub rates_by_topology: HashMap<Topology, RatesSpec>,
    pub drives: DrivesSpec,
    pub sweeps: Vec<Sweep>,
    pub observables: Vec<Observable>,
    pub delta_grid: DeltaGrid,
    pub tau_grid: Option<Vec<f64>>,
}

impl Scenario {
    pub fn from_json(text: &str) -> Result<Self, ScenarioError> {
        let raw: ScenarioFile =
            serde_json::from_str(text).map_err(|e| ScenarioError(format!("parse error: {e}")))?;
        Self::validate(raw)
    }

    pub fn from_path(path: &Path) -> Result<Self, ScenarioError> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| ScenarioError(format!("cannot read {}: {e}", path.display())))?;
        Self::from_json(&text)
    }

    fn validate(raw: ScenarioFile) -> Result<Self, ScenarioError> {
        if raw.name.trim().is_empty() {
            return invalid("scenario name is empty");
        }
        if raw.topologies.is_empty() {
            return invalid("no topologies given");
        }
        let mut topologies = Vec::new();
        for t in &raw.topologies {
            let t: Topology = t.parse().map_err(|_| ScenarioError(format!("unknown topology `{t}`")))?;
            if topologies.contains(&t) {
                return invalid(format!("topology `{t}` listed twice"));
            }
            topologies.push(t);
        }
        let mut rates_by_topology = HashMap::new();
        for (k, v) in raw.rates_by_topology {
            let t: Topology = k.parse().map_err(|_| ScenarioError(format!("unknown topology `{k}`")))?;
            rates_by_topology.insert(t, v);
        }

        if raw.sweeps.len() > MAX_SWEEP_AXES {
            return invalid(format!("at most {MAX_SWEEP_AXES} sweep axes are allowed"));
        }
        let mut sweeps: Vec<Sweep> = Vec::new();
        for axis in &raw.sweeps {
            if sweeps.iter().any(|s| s.parameter == axis.parameter) {
                return invalid(format!("parameter `{}` swept twice", axis.parameter.name()));
            }
            let values = axis
                .grid
                .points()
                .map_err(|e| ScenarioError(format!("sweep `{}`: {e}", axis.parameter.name())))?;
            sweeps.push(Sweep {
                parameter: axis.parameter,
                values,
            });
        }
        let swept = |p: Parameter| sweeps.iter().any(|s| s.parameter == p);
        for (rabi, photons, label) in [
            (Parameter::OmegaP, Parameter::MeanProbePhotons, "probe"),
            (Parameter::OmegaD, Parameter::MeanDrivePhotons, "drive"),
        ] {
            let fixed = [
                (rabi, if rabi == Parameter::OmegaP { raw.drives.omega_p } else { raw.drives.omega_d }),
                (
                    photons,
                    if photons == Parameter::MeanProbePhotons {
                        raw.drives.mean_probe_photons
                    } else {
                        raw.drives.mean_drive_photons
                    },
                ),
            ];
            let given = fixed.iter().filter(|(p, v)| v.is_some() || swept(*p)).count();
            if given != 1 {
                return invalid(format!(
                    "the {label} strength must be given exactly once (Rabi frequency or mean photon number)"
                ));
            }
        }

        if raw.observables.is_empty() {
            return invalid("no observables requested");
        }
        let mut observables: Vec<Observable> = Vec::new();
        for &o in &raw.observables {
            if observables.contains(&o) {
                return invalid(format!("observable `{}` listed twice", o.name()));
            }
            for &t in &topologies {
                if !o.supports(t) {
                    return invalid(format!("observable `{}` is not defined for topology `{t}`", o.name()));
                }
            }
            observables.push(o);
        }

        let delta_grid = match raw.delta_grid {
            None => DeltaGrid::Default,
            Some(DeltaGridSpec::Keyword(k)) if k == "maximize" => DeltaGrid::Maximize,
            Some(DeltaGridSpec::Keyword(k)) => return invalid(format!("unknown delta_grid keyword `{k}`")),
            Some(DeltaGridSpec::Grid(g)) => {
                DeltaGrid::Explicit(g.points().map_err(|e| ScenarioError(format!("delta_grid: {e}")))?)
            }
        };
        let tau_grid = match raw.tau_grid {
            None => None,
            Some(g) => {
                let v = g.points().map_err(|e| ScenarioError(format!("tau_grid: {e}")))?;
                if v.iter().any(|&t| t < 0.0) || v.windows(2).any(|w| w[1] < w[0]) {
                    return invalid("tau_grid must be non-negative and ascending");
                }
                Some(v)
            }
        };

        let scenario = Scenario {
            name: raw.name,
            description: raw.description,
            topologies,
            rates: raw.rates,
            rates_by_topology,
            drives: raw.drives,
            sweeps,
            observables,
            delta_grid,
            tau_grid,
        };
        // Surface out-of-range parameters before any work starts.
        for t in &scenario.topologies {
            for i in 0..scenario.point_count() {
                scenario.point(*t, i)?;
            }
        }
        Ok(scenario)
    }

    pub fn rates_for(&self, topology: Topology) -> RatesSpec {
        self.rates_by_topology.get(&topology).copied().unwrap_or(self.rates)
    }

    /// Number of sweep points per topology.
    pub fn point_count(&self) -> usize {
        self.sweeps.iter().map(|s| s.values.len()).product()
    }

    /// Sweep coordinates of the `index`-th point; the first axis varies slowest.
    pub fn coords(&self, index: usize) -> Vec<f64> {
        let mut rest = index;
        let mut coords = vec![0.0; self.sweeps.len()];
        for (k, s) in self.sweeps.iter().enumerate().rev() {
            coords[k] = s.values[rest % s.values.len()];
            rest /= s.values.len();
        }
        coords
    }

    pub fn point(&self, topology: Topology, index: usize) -> Result<Point, ScenarioError> {
        let coords = self.coords(index);
        let mut r = self.rates_for(topology);
        let mut d = self.drives;
        for (s, &v) in self.sweeps.iter().zip(&coords) {
            match s.parameter {
                Parameter::OmegaP => d.omega_p = Some(v),
                Parameter::OmegaD => d.omega_d = Some(v),
                Parameter::MeanProbePhotons => d.mean_probe_photons = Some(v),
                Parameter::MeanDrivePhotons => d.mean_drive_photons = Some(v),
                Parameter::DeltaP => d.delta_p = v,
                Parameter::DeltaD => d.delta_d = v,
                Parameter::GammaP => r.gamma_p = v,
                Parameter::GammaD => r.gamma_d = v,
                Parameter::GammaNr => r.gamma_nr = v,
                Parameter::GammaL2 => r.gamma_l2 = v,
                Parameter::GammaL3 => r.gamma_l3 = v,
            }
        }
        let ctx = |e: wgamp_core::error::Error| ScenarioError(format!("{topology} point {index}: {e}"));
        let rates = RateSet::with_dephasing(r.gamma_p, r.gamma_d, r.gamma_nr, r.gamma_l2, r.gamma_l3).map_err(ctx)?;
        let rabi = |given: Option<f64>, photons: Option<f64>, probe: bool| match (given, photons) {
            (Some(w), _) => Ok(w),
            (None, Some(n)) if probe => DriveSet::from_photon_numbers(&rates, n, 0.0).map(|x| x.omega_p()),
            (None, Some(n)) => DriveSet::from_photon_numbers(&rates, 0.0, n).map(|x| x.omega_d()),
            (None, None) => Ok(0.0),
        };
        let omega_p = rabi(d.omega_p, d.mean_probe_photons, true).map_err(ctx)?;
        let omega_d = rabi(d.omega_d, d.mean_drive_photons, false).map_err(ctx)?;
        let drives = DriveSet::detuned(omega_p, omega_d, d.delta_p, d.delta_d).map_err(ctx)?;
        Ok(Point {
            topology,
            coords,
            rates,
            drives,
        })
    }
}

const BUNDLED: [(&str, &str); 8] = [
    ("fig2a", include_str!("../scenarios/fig2a.json")),
    ("fig3", include_str!("../scenarios/fig3.json")),
    ("fig4", include_str!("../scenarios/fig4.json")),
    ("fig5", include_str!("../scenarios/fig5.json")),
    ("fig6", include_str!("../scenarios/fig6.json")),
    ("fig7", include_str!("../scenarios/fig7.json")),
    ("fig8", include_str!("../scenarios/fig8.json")),
    ("fig9", include_str!("../scenarios/fig9.json")),
];

pub fn bundled_names() -> Vec<&'static str> {
    BUNDLED.iter().map(|(n, _)| *n).collect()
}

pub fn bundled_source(name: &str) -> Option<&'static str> {
    BUNDLED.iter().find(|(n, _)| *n == name).map(|(_, s)| *s)
}

pub fn bundled(name: &str) -> Option<Result<Scenario, ScenarioError>> {
    bundled_source(name).map(Scenario::from_json)
}
