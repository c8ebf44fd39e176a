//! Kramers–Kronig transforms between log-amplitude and phase of the probe
//! transmission on a uniform detuning grid.
//!
//! The principal value `P∫ f(x′)/(x′ − x) dx′` is evaluated by subtracting
//! the singularity, `∫ (f(x′) − f(x))/(x′ − x) dx′ + f(x) log|(b − x)/(x − a)|`,
//! and applying the trapezoidal rule to the regular part. The discrete sum
//! is a Toeplitz product and is done with one FFT convolution.

use std::f64::consts::PI;

use rustfft::FftPlanner;

use crate::error::{Error, Result};
use crate::kerr::ResponseCurve;
use crate::linalg::C64;
use crate::model::RateSet;

pub const AMPLITUDE_FLOOR: f64 = 1e-12;
pub const MIN_POINTS: usize = 4001;
/// Required grid half-width in units of the largest composite linewidth.
pub const MIN_HALF_WIDTH_FACTOR: f64 = 200.0;

#[derive(Debug, Clone, PartialEq)]
pub struct KKGrid {
    delta_grid: Vec<f64>,
    half_width: f64,
    n_points: usize,
}

impl KKGrid {
    /// Symmetric grid `[-half_width, half_width]` with an odd number of nodes.
    pub fn new(half_width: f64, n_points: usize) -> Result<Self> {
        if !(half_width > 0.0 && half_width.is_finite()) {
            return Err(Error::InvalidGrid("half width must be positive".into()));
        }
        check_count(n_points)?;
        let h = 2.0 * half_width / (n_points - 1) as f64;
        let delta_grid = (0..n_points).map(|i| -half_width + h * i as f64).collect();
        Ok(Self {
            delta_grid,
            half_width,
            n_points,
        })
    }

    /// Grid spanning the minimum required multiple of the largest linewidth.
    pub fn for_rates(rates: &RateSet, n_points: usize) -> Result<Self> {
        Self::new(MIN_HALF_WIDTH_FACTOR * rates.max_linewidth(), n_points)
    }

    /// Validates an existing sample grid.
    pub fn from_samples(delta_grid: &[f64]) -> Result<Self> {
        check_count(delta_grid.len())?;
        let n = delta_grid.len();
        let h = (delta_grid[n - 1] - delta_grid[0]) / (n - 1) as f64;
        if !(h > 0.0) {
            return Err(Error::InvalidGrid("grid must be increasing".into()));
        }
        let uniform = delta_grid
            .iter()
            .enumerate()
            .all(|(i, &x)| (x - (delta_grid[0] + h * i as f64)).abs() <= 1e-9 * h.max(x.abs()));
        if !uniform {
            return Err(Error::InvalidGrid("grid spacing is not uniform".into()));
        }
        Ok(Self {
            delta_grid: delta_grid.to_vec(),
            half_width: 0.5 * (delta_grid[n - 1] - delta_grid[0]),
            n_points: n,
        })
    }

    pub fn delta_grid(&self) -> &[f64] {
        &self.delta_grid
    }
    pub fn half_width(&self) -> f64 {
        self.half_width
    }
    pub fn n_points(&self) -> usize {
        self.n_points
    }
    pub fn spacing(&self) -> f64 {
        2.0 * self.half_width / (self.n_points - 1) as f64
    }

    /// Checks the half-width against the emitter's linewidths.
    pub fn covers(&self, rates: &RateSet) -> Result<()> {
        let need = MIN_HALF_WIDTH_FACTOR * rates.max_linewidth();
        if self.half_width < need {
            return Err(Error::InvalidGrid(format!(
                "half width {:.4e} is below {need:.4e}",
                self.half_width
            )));
        }
        Ok(())
    }
}

fn check_count(n: usize) -> Result<()> {
    if n < MIN_POINTS || n % 2 == 0 {
        return Err(Error::InvalidGrid(format!(
            "need an odd number of at least {MIN_POINTS} points, got {n}"
        )));
    }
    Ok(())
}

/// `Σ_{j≠i} g_j / (j − i)` for every `i`, by FFT convolution.
fn hilbert_sum(g: &[f64]) -> Vec<f64> {
    let n = g.len();
    let len = (2 * n - 1).next_power_of_two();
    let mut planner = FftPlanner::<f64>::new();
    let fwd = planner.plan_fft_forward(len);
    let inv = planner.plan_fft_inverse(len);

    let mut a: Vec<C64> = (0..len)
        .map(|i| C64::new(if i < n { g[i] } else { 0.0 }, 0.0))
        .collect();
    // Kernel K(m) = 1/m stored circularly, m in -(n-1)..=(n-1).
    let mut k = vec![C64::new(0.0, 0.0); len];
    for m in 1..n {
        let v = 1.0 / m as f64;
        k[m] = C64::new(v, 0.0);
        k[len - m] = C64::new(-v, 0.0);
    }
    fwd.process(&mut a);
    fwd.process(&mut k);
    for (x, y) in a.iter_mut().zip(&k) {
        *x *= y;
    }
    inv.process(&mut a);
    // (g * K)_i = Σ_j g_j K(i − j) = −Σ_j g_j / (j − i)
    let scale = 1.0 / len as f64;
    a[..n].iter().map(|c| -c.re * scale).collect()
}

/// `P∫ f(x′)/(x′ − x) dx′` at every node of a uniform grid with spacing `h`.
pub fn principal_value(f: &[f64], h: f64) -> Vec<f64> {
    let n = f.len();
    assert!(n >= 3, "principal value needs at least three nodes");
    let w = |j: usize| if j == 0 || j == n - 1 { 0.5 } else { 1.0 };
    let g: Vec<f64> = (0..n).map(|j| w(j) * f[j]).collect();
    let weights: Vec<f64> = (0..n).map(w).collect();
    let s = hilbert_sum(&g);
    let ws = hilbert_sum(&weights);

    (0..n)
        .map(|i| {
            let deriv = if i == 0 {
                (f[1] - f[0]) / h
            } else if i == n - 1 {
                (f[n - 1] - f[n - 2]) / h
            } else {
                (f[i + 1] - f[i - 1]) / (2.0 * h)
            };
            // Distances to the ends in cells; half a cell at the ends themselves.
            let right = ((n - 1 - i) as f64).max(0.5);
            let left = (i as f64).max(0.5);
            s[i] - f[i] * ws[i] + h * w(i) * deriv + f[i] * (right / left).ln()
        })
        .collect()
}

fn check_decay(f: &[f64]) -> Result<()> {
    let peak = f.iter().map(|x| x.abs()).fold(0.0, f64::max);
    if peak == 0.0 {
        return Ok(());
    }
    let endpoint = f[0].abs().max(f[f.len() - 1].abs());
    if endpoint >= 1e-3 * peak {
        return Err(Error::GridTooNarrow { endpoint, peak });
    }
    Ok(())
}

/// Phase from the amplitude: φ = −(1/π) P∫ log|t̃(x′)|/(x′ − x) dx′.
///
/// Amplitudes at or below [`AMPLITUDE_FLOOR`] are an error unless
/// `allow_floor` is set, in which case they are clamped and listed in
/// `floored`.
pub fn kk_phase_from_amplitude(curve: &ResponseCurve, allow_floor: bool) -> Result<ResponseCurve> {
    let grid = KKGrid::from_samples(&curve.delta_grid)?;
    let mut floored = Vec::new();
    let mut log_amp = Vec::with_capacity(curve.amplitude.len());
    for (i, &a) in curve.amplitude.iter().enumerate() {
        if !(a > AMPLITUDE_FLOOR) {
            if !allow_floor {
                return Err(Error::NonPositiveAmplitude { index: i, value: a });
            }
            floored.push(i);
            log_amp.push(AMPLITUDE_FLOOR.ln());
        } else {
            log_amp.push(a.ln());
        }
    }
    check_decay(&log_amp)?;
    let phase = principal_value(&log_amp, grid.spacing())
        .into_iter()
        .map(|v| -v / PI)
        .collect();
    Ok(ResponseCurve {
        delta_grid: curve.delta_grid.clone(),
        amplitude: curve.amplitude.clone(),
        phase,
        unwrapped: true,
        floored,
    })
}

/// Amplitude from the (unwrapped) phase: log|t̃| = (1/π) P∫ φ(x′)/(x′ − x) dx′.
pub fn kk_amplitude_from_phase(curve: &ResponseCurve) -> Result<ResponseCurve> {
    let grid = KKGrid::from_samples(&curve.delta_grid)?;
    check_decay(&curve.phase)?;
    let amplitude = principal_value(&curve.phase, grid.spacing())
        .into_iter()
        .map(|v| (v / PI).exp())
        .collect();
    Ok(ResponseCurve {
        delta_grid: curve.delta_grid.clone(),
        amplitude,
        phase: curve.phase.clone(),
        unwrapped: curve.unwrapped,
        floored: vec![],
    })
}
