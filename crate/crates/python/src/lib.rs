//! Python bindings for `wgamp-core`. Topologies are passed as the strings
//! `"lambda"`, `"v"` and `"ladder"`.

use pyo3::create_exception;
use pyo3::exceptions::PyValueError;
use pyo3::prelude::*;

use wgamp_core::dynamics;
use wgamp_core::error::Error;
use wgamp_core::kerr::{self, PhaseDefinition};
use wgamp_core::kk;
use wgamp_core::linalg::C64;
use wgamp_core::model::{self, Topology};
use wgamp_core::observables as obs;

create_exception!(wgamp, WgampError, PyValueError, "Raised when a computation is undefined or an input is invalid.");

fn err(e: Error) -> PyErr {
    WgampError::new_err(e.to_string())
}

fn topology(name: &str) -> PyResult<Topology> {
    name.parse().map_err(|e: Error| err(e))
}

#[pyclass(frozen, module = "wgamp")]
struct RateSet(model::RateSet);

#[pymethods]
impl RateSet {
    #[new]
    #[pyo3(signature = (gamma_p, gamma_d, gamma_nr=0.0, gamma_l2=0.0, gamma_l3=0.0))]
    fn new(gamma_p: f64, gamma_d: f64, gamma_nr: f64, gamma_l2: f64, gamma_l3: f64) -> PyResult<Self> {
        model::RateSet::with_dephasing(gamma_p, gamma_d, gamma_nr, gamma_l2, gamma_l3)
            .map(Self)
            .map_err(err)
    }

    #[getter]
    fn gamma_p(&self) -> f64 {
        self.0.gamma_p()
    }
    #[getter]
    fn gamma_d(&self) -> f64 {
        self.0.gamma_d()
    }
    #[getter]
    fn gamma_nr(&self) -> f64 {
        self.0.gamma_nr()
    }
    #[getter]
    fn gamma_l2(&self) -> f64 {
        self.0.gamma_l2()
    }
    #[getter]
    fn gamma_l3(&self) -> f64 {
        self.0.gamma_l3()
    }

    fn probe_linewidth(&self, topology_name: &str) -> PyResult<f64> {
        Ok(self.0.probe_linewidth(topology(topology_name)?))
    }

    fn max_linewidth(&self) -> f64 {
        self.0.max_linewidth()
    }

    fn __repr__(&self) -> String {
        let r = &self.0;
        format!(
            "RateSet(gamma_p={}, gamma_d={}, gamma_nr={}, gamma_l2={}, gamma_l3={})",
            r.gamma_p(),
            r.gamma_d(),
            r.gamma_nr(),
            r.gamma_l2(),
            r.gamma_l3()
        )
    }
}

#[pyclass(frozen, module = "wgamp")]
struct DriveSet(model::DriveSet);

#[pymethods]
impl DriveSet {
    #[new]
    #[pyo3(signature = (omega_p, omega_d, delta_p=0.0, delta_d=0.0))]
    fn new(omega_p: f64, omega_d: f64, delta_p: f64, delta_d: f64) -> PyResult<Self> {
        model::DriveSet::detuned(omega_p, omega_d, delta_p, delta_d).map(Self).map_err(err)
    }

    /// Rabi frequencies from mean photon numbers, Ω = √(8N)·Γ.
    #[staticmethod]
    #[pyo3(signature = (rates, n_p, n_d, delta_p=0.0, delta_d=0.0))]
    fn from_photon_numbers(rates: &RateSet, n_p: f64, n_d: f64, delta_p: f64, delta_d: f64) -> PyResult<Self> {
        let d = model::DriveSet::from_photon_numbers(&rates.0, n_p, n_d).map_err(err)?;
        Ok(Self(d.with_delta_p(delta_p).with_delta_d(delta_d)))
    }

    #[getter]
    fn omega_p(&self) -> f64 {
        self.0.omega_p()
    }
    #[getter]
    fn omega_d(&self) -> f64 {
        self.0.omega_d()
    }
    #[getter]
    fn delta_p(&self) -> f64 {
        self.0.delta_p()
    }
    #[getter]
    fn delta_d(&self) -> f64 {
        self.0.delta_d()
    }

    fn with_omega_p(&self, omega_p: f64) -> Self {
        Self(self.0.with_omega_p(omega_p))
    }
    fn with_omega_d(&self, omega_d: f64) -> Self {
        Self(self.0.with_omega_d(omega_d))
    }
    fn with_delta_p(&self, delta_p: f64) -> Self {
        Self(self.0.with_delta_p(delta_p))
    }

    fn mean_probe_photons(&self, rates: &RateSet) -> PyResult<f64> {
        self.0.mean_probe_photons(&rates.0).map_err(err)
    }

    fn mean_drive_photons(&self, rates: &RateSet) -> PyResult<f64> {
        self.0.mean_drive_photons(&rates.0).map_err(err)
    }

    fn __repr__(&self) -> String {
        let d = &self.0;
        format!(
            "DriveSet(omega_p={}, omega_d={}, delta_p={}, delta_d={})",
            d.omega_p(),
            d.omega_d(),
            d.delta_p(),
            d.delta_d()
        )
    }
}

/// Tracked expectations of the emitter.
#[pyclass(frozen, module = "wgamp")]
struct StateVector(dynamics::StateVector);

#[pymethods]
impl StateVector {
    #[getter]
    fn topology(&self) -> &'static str {
        self.0.topology().name()
    }

    #[getter]
    fn slots(&self) -> Vec<C64> {
        self.0.slots().to_vec()
    }

    /// Populations of levels 1, 2 and 3.
    #[getter]
    fn populations(&self) -> [f64; 3] {
        self.0.populations()
    }

    fn slot_labels(&self) -> Vec<&'static str> {
        self.0.topology().slot_labels().to_vec()
    }
}

#[pyclass(frozen, get_all, module = "wgamp")]
struct Transport {
    t_probe: f64,
    r_probe: f64,
    t_drive: Option<f64>,
    r_drive: Option<f64>,
}

#[pyclass(frozen, get_all, module = "wgamp")]
struct Amplification {
    eta_coherent: f64,
    eta_incoherent: f64,
    eta_total: f64,
}

#[pyclass(frozen, get_all, module = "wgamp")]
struct ResponseCurve {
    delta_grid: Vec<f64>,
    amplitude: Vec<f64>,
    phase: Vec<f64>,
    floored: Vec<usize>,
}

impl ResponseCurve {
    fn to_core(&self) -> kerr::ResponseCurve {
        kerr::ResponseCurve {
            delta_grid: self.delta_grid.clone(),
            amplitude: self.amplitude.clone(),
            phase: self.phase.clone(),
            unwrapped: true,
            floored: self.floored.clone(),
        }
    }
}

impl From<kerr::ResponseCurve> for ResponseCurve {
    fn from(c: kerr::ResponseCurve) -> Self {
        Self {
            delta_grid: c.delta_grid,
            amplitude: c.amplitude,
            phase: c.phase,
            floored: c.floored,
        }
    }
}

#[pymethods]
impl ResponseCurve {
    #[new]
    fn new(delta_grid: Vec<f64>, amplitude: Vec<f64>, phase: Vec<f64>) -> PyResult<Self> {
        if amplitude.len() != delta_grid.len() || phase.len() != delta_grid.len() {
            return Err(WgampError::new_err("delta_grid, amplitude and phase must have equal lengths"));
        }
        Ok(Self {
            delta_grid,
            amplitude,
            phase,
            floored: vec![],
        })
    }
}

#[pyclass(frozen, get_all, module = "wgamp")]
struct ShiftCurve {
    delta_grid: Vec<f64>,
    phase_shift: Vec<f64>,
    amplitude_shift: Vec<f64>,
}

impl From<kerr::ShiftCurve> for ShiftCurve {
    fn from(c: kerr::ShiftCurve) -> Self {
        Self {
            delta_grid: c.delta_grid,
            phase_shift: c.phase_shift,
            amplitude_shift: c.amplitude_shift,
        }
    }
}

#[pyclass(frozen, module = "wgamp")]
struct KKGrid(kk::KKGrid);

#[pymethods]
impl KKGrid {
    #[new]
    fn new(half_width: f64, n_points: usize) -> PyResult<Self> {
        kk::KKGrid::new(half_width, n_points).map(Self).map_err(err)
    }

    /// Narrowest admissible grid for the rates.
    #[staticmethod]
    #[pyo3(signature = (rates, n_points=kk::MIN_POINTS))]
    fn for_rates(rates: &RateSet, n_points: usize) -> PyResult<Self> {
        kk::KKGrid::for_rates(&rates.0, n_points).map(Self).map_err(err)
    }

    #[getter]
    fn delta_grid(&self) -> Vec<f64> {
        self.0.delta_grid().to_vec()
    }
    #[getter]
    fn half_width(&self) -> f64 {
        self.0.half_width()
    }
    #[getter]
    fn n_points(&self) -> usize {
        self.0.n_points()
    }
}

fn system(t: &str, rates: &RateSet, drives: &DriveSet) -> PyResult<model::EmitterSystem> {
    Ok(model::build_system(topology(t)?, &rates.0, &drives.0))
}

#[pyfunction]
fn steady_state(topology: &str, rates: &RateSet, drives: &DriveSet) -> PyResult<StateVector> {
    dynamics::steady_state(&system(topology, rates, drives)?)
        .map(StateVector)
        .map_err(err)
}

/// State at time `t` starting from the ground state. `stepping` selects the
/// adaptive Runge-Kutta integrator instead of the matrix exponential.
#[pyfunction]
#[pyo3(signature = (topology, rates, drives, t, stepping=false))]
fn evolve(topology: &str, rates: &RateSet, drives: &DriveSet, t: f64, stepping: bool) -> PyResult<StateVector> {
    if !(t >= 0.0) {
        return Err(WgampError::new_err("evolution time must be non-negative"));
    }
    let sys = system(topology, rates, drives)?;
    let m0 = dynamics::initial_state(sys.topology());
    Ok(StateVector(if stepping {
        dynamics::evolve_stepping(&sys, &m0, t)
    } else {
        dynamics::evolve(&sys, &m0, t)
    }))
}

#[pyfunction]
fn transport(rates: &RateSet, drives: &DriveSet, state: &StateVector) -> PyResult<Transport> {
    let t = obs::transport(&rates.0, &drives.0, &state.0).map_err(err)?;
    Ok(Transport {
        t_probe: t.t_probe,
        r_probe: t.r_probe,
        t_drive: t.t_drive,
        r_drive: t.r_drive,
    })
}

#[pyfunction]
fn amplification(rates: &RateSet, drives: &DriveSet, state: &StateVector) -> PyResult<Amplification> {
    let a = obs::amplification(&rates.0, &drives.0, &state.0).map_err(err)?;
    Ok(Amplification {
        eta_coherent: a.eta_coherent,
        eta_incoherent: a.eta_incoherent,
        eta_total: a.eta_total,
    })
}

#[pyfunction]
fn coherent_amplification_approx(topology_name: &str, rates: &RateSet, drives: &DriveSet) -> PyResult<f64> {
    obs::coherent_amplification_approx(topology(topology_name)?, &rates.0, &drives.0).map_err(err)
}

#[pyfunction]
fn incoherent_amplification_approx(topology_name: &str, rates: &RateSet, drives: &DriveSet) -> PyResult<f64> {
    obs::incoherent_amplification_approx(topology(topology_name)?, &rates.0, &drives.0).map_err(err)
}

/// `(omega_d, eta)` maximizing the exact coherent gain over `[lo, hi]`.
#[pyfunction]
fn max_coherent_gain(topology_name: &str, rates: &RateSet, omega_p: f64, lo: f64, hi: f64) -> PyResult<(f64, f64)> {
    let g = obs::max_coherent_gain(topology(topology_name)?, &rates.0, omega_p, lo, hi).map_err(err)?;
    Ok((g.omega_d, g.eta))
}

#[pyfunction]
fn critical_drive_lambda(rates: &RateSet) -> f64 {
    obs::critical_drive_lambda(&rates.0)
}

#[pyfunction]
fn threshold_drive_v(rates: &RateSet) -> PyResult<f64> {
    obs::threshold_drive_v(&rates.0).map_err(err)
}

#[pyfunction]
fn g2_curve(topology: &str, rates: &RateSet, drives: &DriveSet, tau_grid: Vec<f64>) -> PyResult<Vec<f64>> {
    let sys = system(topology, rates, drives)?;
    obs::g2_curve(&sys, &rates.0, &drives.0, &tau_grid)
        .map(|c| c.values)
        .map_err(err)
}

#[pyfunction]
fn g2_zero(topology_name: &str, rates: &RateSet, drives: &DriveSet) -> PyResult<f64> {
    let state = obs::steady(topology(topology_name)?, &rates.0, &drives.0).map_err(err)?;
    let t = obs::transport(&rates.0, &drives.0, &state).map_err(err)?;
    obs::g2_zero(&t).map_err(err)
}

/// Complex probe transmission amplitude at steady state.
#[pyfunction]
fn transmission(topology_name: &str, rates: &RateSet, drives: &DriveSet) -> PyResult<C64> {
    kerr::exact_transmission(topology(topology_name)?, &rates.0, &drives.0)
        .map(|t| t.amplitude)
        .map_err(err)
}

#[pyfunction]
fn linear_susceptibility(topology_name: &str, rates: &RateSet, drives: &DriveSet, delta_p: f64) -> PyResult<C64> {
    kerr::linear_susceptibility(topology(topology_name)?, &rates.0, &drives.0, delta_p).map_err(err)
}

#[pyfunction]
fn response_curve(topology_name: &str, rates: &RateSet, drives: &DriveSet, delta_grid: Vec<f64>) -> PyResult<ResponseCurve> {
    kerr::response_curve(topology(topology_name)?, &rates.0, &drives.0, &delta_grid)
        .map(Into::into)
        .map_err(err)
}

/// Drive-induced shift; `modified=True` references the linear response.
#[pyfunction]
#[pyo3(signature = (topology_name, rates, drives, delta_grid, modified=false))]
fn phase_shift(
    topology_name: &str,
    rates: &RateSet,
    drives: &DriveSet,
    delta_grid: Vec<f64>,
    modified: bool,
) -> PyResult<ShiftCurve> {
    let t = topology(topology_name)?;
    let shift = if modified {
        kerr::modified_phase_shift(t, &rates.0, &drives.0, &delta_grid)
    } else {
        kerr::cross_kerr_shift(t, &rates.0, &drives.0, &delta_grid)
    };
    shift.map(Into::into).map_err(err)
}

/// `(delta_p, delta_phi)` with the largest |Δφ|.
#[pyfunction]
#[pyo3(signature = (topology_name, rates, drives, modified=false))]
fn max_phase_shift(topology_name: &str, rates: &RateSet, drives: &DriveSet, modified: bool) -> PyResult<(f64, f64)> {
    let def = if modified { PhaseDefinition::Modified } else { PhaseDefinition::Standard };
    kerr::max_phase_shift(topology(topology_name)?, &rates.0, &drives.0, def).map_err(err)
}

#[pyfunction]
fn kerr_coefficient(topology_name: &str, rates: &RateSet, delta_p: f64) -> PyResult<f64> {
    kerr::kerr_coefficient(topology(topology_name)?, &rates.0, delta_p).map_err(err)
}

#[pyfunction]
#[pyo3(signature = (curve, allow_floor=false))]
fn kk_phase_from_amplitude(curve: &ResponseCurve, allow_floor: bool) -> PyResult<ResponseCurve> {
    kk::kk_phase_from_amplitude(&curve.to_core(), allow_floor)
        .map(Into::into)
        .map_err(err)
}

#[pyfunction]
fn kk_amplitude_from_phase(curve: &ResponseCurve) -> PyResult<ResponseCurve> {
    kk::kk_amplitude_from_phase(&curve.to_core()).map(Into::into).map_err(err)
}

#[pymodule]
fn wgamp(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add("WgampError", m.py().get_type::<WgampError>())?;
    m.add_class::<RateSet>()?;
    m.add_class::<DriveSet>()?;
    m.add_class::<StateVector>()?;
    m.add_class::<Transport>()?;
    m.add_class::<Amplification>()?;
    m.add_class::<ResponseCurve>()?;
    m.add_class::<ShiftCurve>()?;
    m.add_class::<KKGrid>()?;
    m.add_function(wrap_pyfunction!(steady_state, m)?)?;
    m.add_function(wrap_pyfunction!(evolve, m)?)?;
    m.add_function(wrap_pyfunction!(transport, m)?)?;
    m.add_function(wrap_pyfunction!(amplification, m)?)?;
    m.add_function(wrap_pyfunction!(coherent_amplification_approx, m)?)?;
    m.add_function(wrap_pyfunction!(incoherent_amplification_approx, m)?)?;
    m.add_function(wrap_pyfunction!(max_coherent_gain, m)?)?;
    m.add_function(wrap_pyfunction!(critical_drive_lambda, m)?)?;
    m.add_function(wrap_pyfunction!(threshold_drive_v, m)?)?;
    m.add_function(wrap_pyfunction!(g2_curve, m)?)?;
    m.add_function(wrap_pyfunction!(g2_zero, m)?)?;
    m.add_function(wrap_pyfunction!(transmission, m)?)?;
    m.add_function(wrap_pyfunction!(linear_susceptibility, m)?)?;
    m.add_function(wrap_pyfunction!(response_curve, m)?)?;
    m.add_function(wrap_pyfunction!(phase_shift, m)?)?;
    m.add_function(wrap_pyfunction!(max_phase_shift, m)?)?;
    m.add_function(wrap_pyfunction!(kerr_coefficient, m)?)?;
    m.add_function(wrap_pyfunction!(kk_phase_from_amplitude, m)?)?;
    m.add_function(wrap_pyfunction!(kk_amplitude_from_phase, m)?)?;
    Ok(())
}
