//! Evaluation of a scenario's observables over its sweep points.

use rayon::prelude::*;
use wgamp_core::dynamics::default_tau_grid;
use wgamp_core::error::{Error, Result};
use wgamp_core::kerr::{
    cross_kerr_shift, exact_transmission, kerr_coefficient, max_phase_shift, modified_phase_shift, response_curve,
    PhaseDefinition,
};
use wgamp_core::kk::{kk_amplitude_from_phase, kk_phase_from_amplitude, KKGrid};
use wgamp_core::model::{build_system, Topology};
use wgamp_core::observables::{
    coherent_amplification, coherent_amplification_approx, g2_curve, g2_zero, incoherent_amplification,
    incoherent_amplification_approx, max_coherent_gain, steady, total_amplification, transport,
};
use wgamp_core::optimize::{geomspace, linspace, scan_then_refine};

use crate::scenario::{DeltaGrid, Observable, Point, Scenario};

/// `kk_check` grid: the phase tail decays only as 1/Δ, so the grid spans 20
/// times the minimum half-width, at the spacing 16001 nodes give on the
/// minimum grid.
pub const KK_WIDTH_FACTOR: f64 = 20.0;
pub const KK_POINTS: usize = 320_001;
const DEFAULT_DELTA_POINTS: usize = 801;
const DEFAULT_TAU_POINTS: usize = 200;

/// One output row: the topology, then numeric cells (sweep coordinates
/// followed by observable columns). `None` is an empty cell.
#[derive(Debug, Clone, PartialEq)]
pub struct Row {
    pub topology: Topology,
    pub cells: Vec<Option<f64>>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Table {
    pub observable: Observable,
    pub header: Vec<String>,
    pub rows: Vec<Row>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct PointError {
    pub observable: Observable,
    pub topology: Topology,
    pub point: usize,
    pub coords: Vec<f64>,
    pub message: String,
}

#[derive(Debug, Clone, PartialEq)]
pub struct RunOutput {
    pub tables: Vec<Table>,
    pub errors: Vec<PointError>,
}

pub fn columns(observable: Observable, delta_grid: &DeltaGrid) -> &'static [&'static str] {
    let maximize = *delta_grid == DeltaGrid::Maximize;
    match observable {
        Observable::Transport => &["t_probe", "r_probe", "t_drive", "r_drive"],
        Observable::EtaC => &["eta_c"],
        Observable::EtaCApprox => &["eta_c_approx"],
        Observable::EtaCMax => &["omega_d_opt", "eta_c_max", "omega_d_opt_approx", "eta_c_max_approx"],
        Observable::EtaInc => &["eta_inc"],
        Observable::EtaIncApprox => &["eta_inc_approx"],
        Observable::EtaTotal => &["eta_total"],
        Observable::G2Curve => &["tau", "g2"],
        Observable::G2Zero => &["g2_zero"],
        Observable::PhaseResponse if maximize => &[
            "delta_p_max",
            "delta_phi_max",
            "delta_p_max_modified",
            "delta_phi_max_modified",
        ],
        Observable::PhaseResponse => &["delta_p", "chi_re", "chi_im", "phase", "delta_phi", "delta_phi_modified"],
        Observable::AmplitudeResponse => &["delta_p", "t_re", "t_im", "amplitude", "delta_amplitude"],
        Observable::KerrCoefficient if maximize => &["delta_p_max", "k_max"],
        Observable::KerrCoefficient => &["delta_p", "k"],
        Observable::KkCheck => &["delta_p", "amplitude_exact", "amplitude_kk", "phase_exact", "phase_kk"],
    }
}

type Cells = Vec<Vec<Option<f64>>>;

fn single(values: &[f64]) -> Cells {
    vec![values.iter().map(|&v| Some(v)).collect()]
}

fn detunings(scenario: &Scenario, p: &Point) -> Vec<f64> {
    match &scenario.delta_grid {
        DeltaGrid::Explicit(v) => v.clone(),
        DeltaGrid::Default | DeltaGrid::Maximize => {
            let w = 20.0 * p.rates.max_linewidth();
            linspace(-w, w, DEFAULT_DELTA_POINTS)
        }
    }
}

fn eta_c_max(p: &Point) -> Result<Cells> {
    let scale = p.rates.gamma_total();
    let (lo, hi) = (1e-4 * scale, 10.0 * scale);
    let exact = max_coherent_gain(p.topology, &p.rates, p.drives.omega_p(), lo, hi)?;
    let grid: Vec<f64> = geomspace(lo, hi, 81).iter().map(|x| x.ln()).collect();
    let f = |x: f64| {
        coherent_amplification_approx(p.topology, &p.rates, &p.drives.with_omega_d(x.exp())).unwrap_or(f64::NEG_INFINITY)
    };
    let (x, approx) = scan_then_refine(f, &grid, 1e-6);
    Ok(single(&[exact.omega_d, exact.eta, x.exp(), approx]))
}

fn phase_response(scenario: &Scenario, p: &Point) -> Result<Cells> {
    let (t, r, d) = (p.topology, &p.rates, &p.drives);
    if scenario.delta_grid == DeltaGrid::Maximize {
        let (dp, phi) = max_phase_shift(t, r, d, PhaseDefinition::Standard)?;
        let modified = if t == Topology::V {
            [None, None]
        } else {
            let (dm, pm) = max_phase_shift(t, r, d, PhaseDefinition::Modified)?;
            [Some(dm), Some(pm)]
        };
        return Ok(vec![vec![Some(dp), Some(phi), modified[0], modified[1]]]);
    }
    let grid = detunings(scenario, p);
    let curve = response_curve(t, r, d, &grid)?;
    let standard = cross_kerr_shift(t, r, d, &grid)?;
    let modified = if t == Topology::V {
        None
    } else {
        Some(modified_phase_shift(t, r, d, &grid)?)
    };
    let mut rows = Vec::with_capacity(grid.len());
    for (k, &dp) in grid.iter().enumerate() {
        let chi = exact_transmission(t, r, &d.with_delta_p(dp))?.chi;
        rows.push(vec![
            Some(dp),
            Some(chi.re),
            Some(chi.im),
            Some(curve.phase[k]),
            Some(standard.phase_shift[k]),
            modified.as_ref().map(|m| m.phase_shift[k]),
        ]);
    }
    Ok(rows)
}

fn amplitude_response(scenario: &Scenario, p: &Point) -> Result<Cells> {
    let grid = detunings(scenario, p);
    let shift = cross_kerr_shift(p.topology, &p.rates, &p.drives, &grid)?;
    let mut rows = Vec::with_capacity(grid.len());
    for (k, &dp) in grid.iter().enumerate() {
        let t = exact_transmission(p.topology, &p.rates, &p.drives.with_delta_p(dp))?.amplitude;
        rows.push(vec![Some(dp), Some(t.re), Some(t.im), Some(t.norm()), Some(shift.amplitude_shift[k])]);
    }
    Ok(rows)
}

fn kerr(scenario: &Scenario, p: &Point) -> Result<Cells> {
    let grid = detunings(scenario, p);
    if scenario.delta_grid == DeltaGrid::Maximize {
        let f = |x: f64| kerr_coefficient(p.topology, &p.rates, x).map(f64::abs).unwrap_or(f64::NEG_INFINITY);
        let (dp, _) = scan_then_refine(f, &grid, 1e-12 * p.rates.max_linewidth());
        return Ok(single(&[dp, kerr_coefficient(p.topology, &p.rates, dp)?]));
    }
    grid.iter()
        .map(|&dp| Ok(vec![Some(dp), Some(kerr_coefficient(p.topology, &p.rates, dp)?)]))
        .collect()
}

fn kk_check(p: &Point) -> Result<Cells> {
    let half_width = KK_WIDTH_FACTOR * wgamp_core::kk::MIN_HALF_WIDTH_FACTOR * p.rates.max_linewidth();
    let grid = KKGrid::new(half_width, KK_POINTS)?;
    let exact = response_curve(p.topology, &p.rates, &p.drives, grid.delta_grid())?;
    let from_amplitude = kk_phase_from_amplitude(&exact, false)?;
    let from_phase = kk_amplitude_from_phase(&exact)?;
    let window = 20.0 * p.rates.max_linewidth();
    Ok(grid
        .delta_grid()
        .iter()
        .enumerate()
        .filter(|(_, d)| d.abs() <= window)
        .map(|(k, &d)| {
            vec![
                Some(d),
                Some(exact.amplitude[k]),
                Some(from_phase.amplitude[k]),
                Some(exact.phase[k]),
                Some(from_amplitude.phase[k]),
            ]
        })
        .collect())
}

fn evaluate(scenario: &Scenario, observable: Observable, p: &Point) -> Result<Cells> {
    let (t, r, d) = (p.topology, &p.rates, &p.drives);
    match observable {
        Observable::Transport => {
            let tr = transport(r, d, &steady(t, r, d)?)?;
            Ok(vec![vec![Some(tr.t_probe), Some(tr.r_probe), tr.t_drive, tr.r_drive]])
        }
        Observable::EtaC => Ok(single(&[coherent_amplification(r, d, &steady(t, r, d)?)?])),
        Observable::EtaCApprox => Ok(single(&[coherent_amplification_approx(t, r, d)?])),
        Observable::EtaCMax => eta_c_max(p),
        Observable::EtaInc => Ok(single(&[incoherent_amplification(r, d, &steady(t, r, d)?)?])),
        Observable::EtaIncApprox => Ok(single(&[incoherent_amplification_approx(t, r, d)?])),
        Observable::EtaTotal => Ok(single(&[total_amplification(r, d, &steady(t, r, d)?)?])),
        Observable::G2Zero => Ok(single(&[g2_zero(&transport(r, d, &steady(t, r, d)?)?)?])),
        Observable::G2Curve => {
            let taus = match &scenario.tau_grid {
                Some(g) => g.clone(),
                None => {
                    let slowest = r
                        .min_positive_rate()
                        .ok_or(Error::UndefinedCoefficient("intensity correlation"))?;
                    default_tau_grid(slowest, DEFAULT_TAU_POINTS)
                }
            };
            let curve = g2_curve(&build_system(t, r, d), r, d, &taus)?;
            Ok(curve
                .tau_grid
                .iter()
                .zip(&curve.values)
                .map(|(&tau, &g)| vec![Some(tau), Some(g)])
                .collect())
        }
        Observable::PhaseResponse => phase_response(scenario, p),
        Observable::AmplitudeResponse => amplitude_response(scenario, p),
        Observable::KerrCoefficient => kerr(scenario, p),
        Observable::KkCheck => kk_check(p),
    }
}

/// Runs every observable at every point. Points are evaluated in parallel
/// on the current rayon pool; output order follows the point index.
pub fn run(scenario: &Scenario) -> RunOutput {
    let tasks: Vec<(Topology, usize)> = scenario
        .topologies
        .iter()
        .flat_map(|&t| (0..scenario.point_count()).map(move |i| (t, i)))
        .collect();

    let results: Vec<Vec<std::result::Result<Cells, String>>> = tasks
        .par_iter()
        .map(|&(t, i)| {
            let point = scenario.point(t, i);
            scenario
                .observables
                .iter()
                .map(|&o| match &point {
                    Ok(p) => evaluate(scenario, o, p).map_err(|e| e.to_string()),
                    Err(e) => Err(e.to_string()),
                })
                .collect()
        })
        .collect();

    let mut tables: Vec<Table> = scenario
        .observables
        .iter()
        .map(|&o| {
            let mut header = vec!["topology".to_string()];
            header.extend(scenario.sweeps.iter().map(|s| s.parameter.name().to_string()));
            header.extend(columns(o, &scenario.delta_grid).iter().map(|c| c.to_string()));
            Table {
                observable: o,
                header,
                rows: Vec::new(),
            }
        })
        .collect();
    let mut errors = Vec::new();

    for (&(t, i), per_obs) in tasks.iter().zip(results) {
        let coords = scenario.coords(i);
        for (table, result) in tables.iter_mut().zip(per_obs) {
            let width = columns(table.observable, &scenario.delta_grid).len();
            let rows = match result {
                Ok(rows) => rows,
                Err(message) => {
                    errors.push(PointError {
                        observable: table.observable,
                        topology: t,
                        point: i,
                        coords: coords.clone(),
                        message,
                    });
                    vec![vec![None; width]]
                }
            };
            for cells in rows {
                let mut full: Vec<Option<f64>> = coords.iter().map(|&c| Some(c)).collect();
                full.extend(cells);
                table.rows.push(Row { topology: t, cells: full });
            }
        }
    }
    RunOutput { tables, errors }
}
