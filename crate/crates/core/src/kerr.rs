//! Complex probe transmission, phase responses and cross-Kerr coefficients.

use std::f64::consts::PI;

use crate::dynamics::{relaxed_state, StateVector};
use crate::error::{Error, Result};
use crate::linalg::{C64, I};
use crate::model::{build_system, DriveSet, RateSet, Topology};
use crate::optimize::{golden_max, linspace};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ComplexTransmission {
    /// t̃ = 1 + 2iχ
    pub amplitude: C64,
    pub chi: C64,
}

impl ComplexTransmission {
    pub fn from_chi(chi: C64) -> Self {
        Self {
            amplitude: 1.0 + 2.0 * I * chi,
            chi,
        }
    }

    pub fn phase(&self) -> Result<f64> {
        phase(self.chi)
    }
}

/// Samples of |t̃| and φ over a probe-detuning grid.
#[derive(Debug, Clone, PartialEq)]
pub struct ResponseCurve {
    pub delta_grid: Vec<f64>,
    pub amplitude: Vec<f64>,
    pub phase: Vec<f64>,
    /// Phase has been made continuous along the grid.
    pub unwrapped: bool,
    /// Grid indices where the amplitude was clamped to the floor.
    pub floored: Vec<usize>,
}

/// Drive-induced change of the probe response over a detuning grid.
#[derive(Debug, Clone, PartialEq)]
pub struct ShiftCurve {
    pub delta_grid: Vec<f64>,
    /// Δφ in radians.
    pub phase_shift: Vec<f64>,
    /// Δ|t̃|.
    pub amplitude_shift: Vec<f64>,
}

impl ShiftCurve {
    /// Sample with the largest |Δφ| as `(Δp, Δφ)`.
    pub fn max_abs_phase(&self) -> (f64, f64) {
        self.delta_grid
            .iter()
            .zip(&self.phase_shift)
            .max_by(|a, b| a.1.abs().total_cmp(&b.1.abs()))
            .map(|(&d, &p)| (d, p))
            .unwrap_or((0.0, 0.0))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PhaseDefinition {
    /// φ(Ωd) − φ(Ωd = 0)
    Standard,
    /// φ(Ωd) − φ′(Ωd), with φ′ from the linear susceptibility.
    Modified,
}

/// Steady-state transmission amplitude from the probe coherence.
pub fn transmission_amplitude(rates: &RateSet, drives: &DriveSet, state: &StateVector) -> Result<ComplexTransmission> {
    rates.require_probe("transmission amplitude")?;
    if drives.omega_p() <= 0.0 {
        return Err(Error::UndefinedCoefficient("transmission amplitude"));
    }
    let zeta = state.slots()[state.topology().zeta_slot()];
    Ok(ComplexTransmission::from_chi(rates.gamma_p() * zeta.conj() / drives.omega_p()))
}

/// Exact transmission at the drives' detuning, from the long-time state.
pub fn exact_transmission(topology: Topology, rates: &RateSet, drives: &DriveSet) -> Result<ComplexTransmission> {
    let system = build_system(topology, rates, drives);
    let slowest = rates
        .min_positive_rate()
        .ok_or(Error::UndefinedCoefficient("transmission amplitude"))?;
    let state = relaxed_state(&system, slowest)?;
    transmission_amplitude(rates, drives, &state)
}

/// φ = atan2(2 Re χ, 1 − 2 Im χ).
pub fn phase(chi: C64) -> Result<f64> {
    let (y, x) = (2.0 * chi.re, 1.0 - 2.0 * chi.im);
    if x == 0.0 && y == 0.0 {
        return Err(Error::UndefinedPhase);
    }
    Ok(y.atan2(x))
}

/// Removes 2π jumps between neighbouring samples.
pub fn unwrap(phases: &mut [f64]) {
    let mut offset = 0.0;
    for i in 1..phases.len() {
        let prev = phases[i - 1];
        let mut cur = phases[i] + offset;
        while cur - prev > PI {
            cur -= 2.0 * PI;
            offset -= 2.0 * PI;
        }
        while cur - prev < -PI {
            cur += 2.0 * PI;
            offset += 2.0 * PI;
        }
        phases[i] = cur;
    }
}

fn wrap(x: f64) -> f64 {
    let y = (x + PI).rem_euclid(2.0 * PI) - PI;
    if y == -PI {
        PI
    } else {
        y
    }
}

fn curve_from<F>(delta_grid: &[f64], mut t_at: F) -> Result<ResponseCurve>
where
    F: FnMut(f64) -> Result<ComplexTransmission>,
{
    let mut amplitude = Vec::with_capacity(delta_grid.len());
    let mut phases = Vec::with_capacity(delta_grid.len());
    for &d in delta_grid {
        let t = t_at(d)?;
        amplitude.push(t.amplitude.norm());
        phases.push(t.phase()?);
    }
    unwrap(&mut phases);
    Ok(ResponseCurve {
        delta_grid: delta_grid.to_vec(),
        amplitude,
        phase: phases,
        unwrapped: true,
        floored: vec![],
    })
}

/// Exact amplitude and phase response over a probe-detuning grid.
pub fn response_curve(topology: Topology, rates: &RateSet, drives: &DriveSet, delta_grid: &[f64]) -> Result<ResponseCurve> {
    curve_from(delta_grid, |d| exact_transmission(topology, rates, &drives.with_delta_p(d)))
}

/// Response predicted by the linear susceptibility.
pub fn linear_response_curve(topology: Topology, rates: &RateSet, drives: &DriveSet, delta_grid: &[f64]) -> Result<ResponseCurve> {
    curve_from(delta_grid, |d| {
        Ok(ComplexTransmission::from_chi(linear_susceptibility(topology, rates, drives, d)?))
    })
}

fn shift(a: &ResponseCurve, b: &ResponseCurve) -> ShiftCurve {
    // Anchor the difference on the principal branch at the first sample.
    let mut phase_shift: Vec<f64> = a.phase.iter().zip(&b.phase).map(|(x, y)| x - y).collect();
    if let Some(&first) = phase_shift.first() {
        let k = (first - wrap(first)) / (2.0 * PI);
        phase_shift.iter_mut().for_each(|p| *p -= 2.0 * PI * k);
    }
    ShiftCurve {
        delta_grid: a.delta_grid.clone(),
        phase_shift,
        amplitude_shift: a.amplitude.iter().zip(&b.amplitude).map(|(x, y)| x - y).collect(),
    }
}

/// Δφ and Δ|t̃| relative to the same system without the drive.
pub fn cross_kerr_shift(topology: Topology, rates: &RateSet, drives: &DriveSet, delta_grid: &[f64]) -> Result<ShiftCurve> {
    let on = response_curve(topology, rates, drives, delta_grid)?;
    let off = response_curve(topology, rates, &drives.with_omega_d(0.0), delta_grid)?;
    Ok(shift(&on, &off))
}

/// Δφ′ and Δ|t̃|′ relative to the linear-susceptibility response.
pub fn modified_phase_shift(topology: Topology, rates: &RateSet, drives: &DriveSet, delta_grid: &[f64]) -> Result<ShiftCurve> {
    if topology == Topology::V {
        return Err(Error::UnsupportedTopology {
            operation: "modified phase shift",
            topology,
        });
    }
    let exact = response_curve(topology, rates, drives, delta_grid)?;
    let linear = linear_response_curve(topology, rates, drives, delta_grid)?;
    Ok(shift(&exact, &linear))
}

/// Phase shift at the drives' own probe detuning, on the principal branch.
pub fn phase_shift_at(topology: Topology, rates: &RateSet, drives: &DriveSet, definition: PhaseDefinition) -> Result<f64> {
    let on = exact_transmission(topology, rates, drives)?;
    let reference = match definition {
        PhaseDefinition::Standard => exact_transmission(topology, rates, &drives.with_omega_d(0.0))?,
        PhaseDefinition::Modified => {
            if topology == Topology::V {
                return Err(Error::UnsupportedTopology {
                    operation: "modified phase shift",
                    topology,
                });
            }
            ComplexTransmission::from_chi(linear_susceptibility(topology, rates, drives, drives.delta_p())?)
        }
    };
    Ok(wrap(on.phase()? - reference.phase()?))
}

/// Probe detuning maximizing |Δφ| within ±20 of the largest linewidth,
/// returned as `(Δp, Δφ)`.
pub fn max_phase_shift(topology: Topology, rates: &RateSet, drives: &DriveSet, definition: PhaseDefinition) -> Result<(f64, f64)> {
    let w = 20.0 * rates.max_linewidth();
    let grid = linspace(-w, w, 801);
    let mut samples = Vec::with_capacity(grid.len());
    for &d in &grid {
        samples.push(phase_shift_at(topology, rates, &drives.with_delta_p(d), definition)?);
    }
    let best = samples
        .iter()
        .enumerate()
        .max_by(|a, b| a.1.abs().total_cmp(&b.1.abs()))
        .map(|(i, _)| i)
        .unwrap_or(0);
    let lo = grid[best.saturating_sub(1)];
    let hi = grid[(best + 1).min(grid.len() - 1)];
    let f = |d: f64| {
        phase_shift_at(topology, rates, &drives.with_delta_p(d), definition)
            .map(f64::abs)
            .unwrap_or(f64::NEG_INFINITY)
    };
    let (d, _) = golden_max(f, lo, hi, 1e-9 * w);
    let refined = phase_shift_at(topology, rates, &drives.with_delta_p(d), definition)?;
    if refined.abs() >= samples[best].abs() {
        Ok((d, refined))
    } else {
        Ok((grid[best], samples[best]))
    }
}

/// Weak-field susceptibility of the probe transition.
pub fn linear_susceptibility(topology: Topology, rates: &RateSet, drives: &DriveSet, delta_p: f64) -> Result<C64> {
    rates.require_probe("linear susceptibility")?;
    let gp = rates.gamma_p();
    match topology {
        Topology::Lambda => {
            if drives.omega_d() == 0.0 {
                // The undriven Λ emitter is pumped out of the probe transition.
                return Ok(C64::new(0.0, 0.0));
            }
            let (g31, g32) = (rates.gamma_31(), rates.gamma_32());
            // Ip/Id = (Ωp²/2Γp)/(Ωd²/2Γd)
            let ratio = drives.omega_p().powi(2) * rates.gamma_d() / (gp * drives.omega_d().powi(2));
            let bracket = 1.0 - g31 * g32 * ratio / (g32 * g32 + g31 * g32 * ratio + delta_p * delta_p);
            Ok(-gp / (delta_p + I * g32) * bracket)
        }
        Topology::V | Topology::Ladder => Ok(-gp / (delta_p + I * rates.gamma_21_primed())),
    }
}

/// Small-drive coefficient k in Δφ ≈ k Ωd².
pub fn kerr_coefficient(topology: Topology, rates: &RateSet, delta_p: f64) -> Result<f64> {
    rates.require_probe("Kerr coefficient")?;
    if delta_p == 0.0 {
        return Ok(0.0);
    }
    let gp = rates.gamma_p();
    let d2 = delta_p * delta_p;
    match topology {
        Topology::Lambda => {
            let (g21, g32) = (rates.gamma_21(), rates.gamma_32());
            let num = 2.0 * gp * delta_p * (g21 * g32 + (g21 + g32) * (g32 - 2.0 * gp) - d2);
            let den = (g21 * g21 + d2) * (g32 * g32 + d2) * ((g32 - 2.0 * gp).powi(2) + d2);
            Ok(num / den)
        }
        Topology::V => {
            let gd = rates.gamma_d();
            if gd == 0.0 {
                return Err(Error::UndefinedCoefficient("V Kerr coefficient"));
            }
            let (a, b) = (rates.gamma_21_primed(), rates.gamma_31_primed());
            let num = gp * delta_p * (a * a + 4.0 * gd * (a - gp) + d2);
            let den = b * gd * (a * a + d2) * ((a - 2.0 * gp).powi(2) + d2);
            Ok(num / den)
        }
        Topology::Ladder => {
            let (a, b) = (rates.gamma_21_primed(), rates.gamma_31_primed());
            let num = 2.0 * gp * delta_p * (a * b + (a + b) * (a - 2.0 * gp) - d2);
            let den = (a * a + d2) * (b * b + d2) * ((a - 2.0 * gp).powi(2) + d2);
            Ok(num / den)
        }
    }
}

/// Vanishing-probe susceptibility including the drive to all orders.
pub fn approx_susceptibility(topology: Topology, rates: &RateSet, drives: &DriveSet, delta_p: f64) -> Result<C64> {
    rates.require_probe("approximate susceptibility")?;
    let gp = rates.gamma_p();
    let od2 = drives.omega_d().powi(2);
    let dp = C64::from(delta_p);
    match topology {
        Topology::Lambda => {
            let (g21, g32) = (rates.gamma_21(), rates.gamma_32());
            let pre = -gp / (dp + I * g32);
            Ok(pre * (1.0 - od2 / (od2 - (dp + I * g21) * (dp + I * g32))))
        }
        Topology::Ladder => {
            let chi_l = linear_susceptibility(topology, rates, drives, delta_p)?;
            let (a, b) = (rates.gamma_21_primed(), rates.gamma_31_primed());
            Ok(chi_l * (1.0 - od2 / (od2 - (dp + I * a) * (dp + I * b))))
        }
        Topology::V => {
            let chi_l = linear_susceptibility(topology, rates, drives, delta_p)?;
            let gd = rates.gamma_d();
            let (a, b, ab) = (rates.gamma_21_primed(), rates.gamma_31_primed(), rates.gamma_32_primed());
            let num = od2 * ((dp + I * a + 2.0 * I * gd) * (dp + I * ab) - 2.0 * od2);
            let den = 2.0 * (od2 + gd * b) * (od2 - (dp + I * a) * (dp + I * ab));
            // Drive-induced depletion reduces the response: the correction adds.
            Ok(chi_l * (1.0 + num / den))
        }
    }
}
