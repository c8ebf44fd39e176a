//! Transport coefficients, amplification efficiencies and intensity
//! correlations of the transmitted probe.

use crate::dynamics::{correlators, steady_state, Correlator, StateVector};
use crate::error::{Error, Result};
use crate::linalg::C64;
use crate::model::{build_system, DriveSet, EmitterSystem, RateSet, Topology};
use crate::optimize::{bisect, geomspace, scan_then_refine};

/// Transmission and reflection of each beam, normalized to its incident flux.
/// Drive coefficients are `None` when the drive (or its decay) is zero.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TransportCoefficients {
    pub t_probe: f64,
    pub r_probe: f64,
    pub t_drive: Option<f64>,
    pub r_drive: Option<f64>,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AmplificationResult {
    pub eta_coherent: f64,
    pub eta_incoherent: f64,
    pub eta_total: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct G2Curve {
    pub tau_grid: Vec<f64>,
    pub values: Vec<f64>,
}

fn probe_scales(rates: &RateSet, drives: &DriveSet) -> Result<(f64, f64)> {
    rates.require_probe("probe transport")?;
    if drives.omega_p() <= 0.0 {
        return Err(Error::UndefinedCoefficient("probe transport"));
    }
    let r = rates.gamma_p() / drives.omega_p();
    Ok((4.0 * r * r, 4.0 * r))
}

/// Population of the upper level of the probe transition.
fn probe_upper_population(state: &StateVector) -> f64 {
    let [_, p2, p3] = state.populations();
    match state.topology() {
        Topology::Lambda => p3,
        Topology::V | Topology::Ladder => p2,
    }
}

fn zeta(state: &StateVector) -> C64 {
    state.slots()[state.topology().zeta_slot()]
}

/// Expectation of the lowering operator of the drive transition.
fn drive_lowering(state: &StateVector) -> C64 {
    let s = state.slots();
    match state.topology() {
        Topology::Lambda | Topology::V => s[0],
        Topology::Ladder => s[5],
    }
}

pub fn transport(rates: &RateSet, drives: &DriveSet, state: &StateVector) -> Result<TransportCoefficients> {
    let (a, b) = probe_scales(rates, drives)?;
    let up = probe_upper_population(state);
    let r_probe = a * up;
    let t_probe = 1.0 + r_probe + b * zeta(state).im;

    let (t_drive, r_drive) = if drives.omega_d() > 0.0 && rates.gamma_d() > 0.0 {
        let r = rates.gamma_d() / drives.omega_d();
        let (c, d) = (4.0 * r * r, 4.0 * r);
        let r_drive = c * state.populations()[2];
        (Some(1.0 + r_drive + d * drive_lowering(state).im), Some(r_drive))
    } else {
        (None, None)
    };
    Ok(TransportCoefficients {
        t_probe,
        r_probe,
        t_drive,
        r_drive,
    })
}

fn require_amplifier(topology: Topology, operation: &'static str) -> Result<()> {
    if topology == Topology::Ladder {
        Err(Error::UnsupportedTopology { operation, topology })
    } else {
        Ok(())
    }
}

/// Coherent gain `2(Γp|ζ|² + Ωp Im ζ)/(v_g I_p)` of the probe.
pub fn coherent_amplification(rates: &RateSet, drives: &DriveSet, state: &StateVector) -> Result<f64> {
    require_amplifier(state.topology(), "coherent amplification")?;
    let flux = drives.probe_flux(rates)?;
    if flux == 0.0 {
        return Err(Error::UndefinedCoefficient("coherent amplification"));
    }
    let z = zeta(state);
    Ok(2.0 * (rates.gamma_p() * z.norm_sqr() + drives.omega_p() * z.im) / flux)
}

pub fn incoherent_amplification(rates: &RateSet, drives: &DriveSet, state: &StateVector) -> Result<f64> {
    require_amplifier(state.topology(), "incoherent amplification")?;
    let flux = drives.probe_flux(rates)?;
    if flux == 0.0 {
        return Err(Error::UndefinedCoefficient("incoherent amplification"));
    }
    let z = zeta(state);
    Ok(2.0 * rates.gamma_p() / flux * (probe_upper_population(state) - z.norm_sqr()))
}

/// `T_p − 1`; defined for every topology.
pub fn total_amplification(rates: &RateSet, drives: &DriveSet, state: &StateVector) -> Result<f64> {
    Ok(transport(rates, drives, state)?.t_probe - 1.0)
}

pub fn amplification(rates: &RateSet, drives: &DriveSet, state: &StateVector) -> Result<AmplificationResult> {
    Ok(AmplificationResult {
        eta_coherent: coherent_amplification(rates, drives, state)?,
        eta_incoherent: incoherent_amplification(rates, drives, state)?,
        eta_total: total_amplification(rates, drives, state)?,
    })
}

/// Weak-probe amplitude gain η₀ at zero detunings.
pub fn eta0(topology: Topology, rates: &RateSet, omega_d: f64) -> Result<f64> {
    let (gp, gd, gg) = (rates.gamma_p(), rates.gamma_d(), rates.gamma_nr());
    let (gtl, gt) = (rates.gamma_tilde(), rates.gamma_total());
    let od2 = omega_d * omega_d;
    match topology {
        Topology::Lambda => {
            let num = gp * gg * od2 * (2.0 * gd + gg);
            let den = (od2 + gt * gg) * (gtl * gtl * gg + 2.0 * od2 * (gg + gp));
            Ok(if num == 0.0 { 0.0 } else { num / den })
        }
        Topology::V => {
            let s = (2.0 * gd + gg).powi(2);
            let num = gp * (gt * (gg * od2 - 2.0 * gp * s) - 4.0 * gp * gp * od2);
            let den = (2.0 * gp * gt + od2) * (2.0 * gp * s + od2 * (gg + 4.0 * gp));
            Ok(num / den)
        }
        Topology::Ladder => Err(Error::UnsupportedTopology {
            operation: "approximate coherent amplification",
            topology,
        }),
    }
}

pub fn coherent_amplification_approx(topology: Topology, rates: &RateSet, drives: &DriveSet) -> Result<f64> {
    let e = eta0(topology, rates, drives.omega_d())?;
    Ok(4.0 * e * (e + 1.0))
}

pub fn incoherent_amplification_approx(topology: Topology, rates: &RateSet, drives: &DriveSet) -> Result<f64> {
    require_amplifier(topology, "approximate incoherent amplification")?;
    let flux = drives.probe_flux(rates)?;
    if flux == 0.0 {
        return Err(Error::UndefinedCoefficient("approximate incoherent amplification"));
    }
    let (gp, gd, gg) = (rates.gamma_p(), rates.gamma_d(), rates.gamma_nr());
    let od2 = drives.omega_d().powi(2);
    let dd2 = drives.delta_d().powi(2);
    let num = 2.0 * gp * gg * od2;
    if num == 0.0 {
        return Ok(0.0);
    }
    let den = match topology {
        Topology::Lambda => gg * (rates.gamma_tilde().powi(2) + dd2) + 2.0 * od2 * (gp + gg),
        _ => 2.0 * gp * ((gg + 2.0 * gd).powi(2) + dd2) + od2 * (4.0 * gp + gg),
    };
    Ok(num / (flux * den))
}

/// Drive Rabi frequency maximizing the weak-probe Λ gain.
pub fn critical_drive_lambda(rates: &RateSet) -> f64 {
    let (gp, gg) = (rates.gamma_p(), rates.gamma_nr());
    if gg == 0.0 {
        return 0.0;
    }
    let sq = rates.gamma_total().sqrt() * rates.gamma_tilde() * gg / (2.0 * (gg + gp)).sqrt();
    sq.sqrt()
}

/// Drive Rabi frequency where the weak-probe V gain changes sign.
pub fn threshold_drive_v(rates: &RateSet) -> Result<f64> {
    let (gp, gd, gg) = (rates.gamma_p(), rates.gamma_d(), rates.gamma_nr());
    let gt = rates.gamma_total();
    let disc = gg * gt - 4.0 * gp * gp;
    if disc <= 0.0 {
        return Err(Error::UndefinedCoefficient("V amplification threshold"));
    }
    Ok((2.0 * gp * gt).sqrt() * (2.0 * gd + gg) / disc.sqrt())
}

pub fn g2_zero(transport: &TransportCoefficients) -> Result<f64> {
    let t = transport.t_probe;
    if t == 0.0 {
        return Err(Error::DivisionByZero);
    }
    Ok((2.0 * (transport.r_probe + t) - 1.0) / (t * t))
}

/// `⟨ζ†ζ⟩`-type functional of correlator slots with the given weight.
fn upper_population(topology: Topology, slots: &[C64; 8], weight: C64) -> C64 {
    match topology {
        Topology::Lambda => slots[3],
        Topology::V | Topology::Ladder => weight - slots[3] - slots[4],
    }
}

/// Unnormalized steady-state intensity correlation `G(τ)` of the
/// transmitted probe, assembled from the two-time correlators.
pub fn g2_numerator(topology: Topology, c: f64, t_probe: f64, zdag_v: &Correlator, zdag_v_z: &Correlator) -> Vec<f64> {
    let (zs, zds) = (topology.zeta_slot(), topology.zeta_dag_slot());
    zdag_v
        .values
        .iter()
        .zip(&zdag_v_z.values)
        .map(|(x1, x2)| {
            let a = x1[zs];
            let b = x1[zds];
            let z1 = upper_population(topology, x1, zdag_v.weight);
            let z2 = x2[zds];
            let d = upper_population(topology, x2, zdag_v_z.weight);
            2.0 * t_probe - 1.0 - 2.0 * c.powi(3) * (z1 + z2).im
                + 2.0 * c * c * (a - b).re
                + c.powi(4) * d.re
        })
        .collect()
}

pub fn g2_curve(system: &EmitterSystem, rates: &RateSet, drives: &DriveSet, tau_grid: &[f64]) -> Result<G2Curve> {
    let steady = steady_state(system)?;
    let tr = transport(rates, drives, &steady)?;
    if tr.t_probe == 0.0 {
        return Err(Error::DivisionByZero);
    }
    let cs = correlators(system, &steady, tau_grid)?;
    let c = 2.0 * rates.gamma_p() / drives.omega_p();
    let g = g2_numerator(system.topology(), c, tr.t_probe, &cs.zdag_v, &cs.zdag_v_z);
    let t2 = tr.t_probe * tr.t_probe;
    Ok(G2Curve {
        tau_grid: tau_grid.to_vec(),
        values: g.into_iter().map(|v| v / t2).collect(),
    })
}

/// Steady state for a topology at the given parameters.
pub fn steady(topology: Topology, rates: &RateSet, drives: &DriveSet) -> Result<StateVector> {
    steady_state(&build_system(topology, rates, drives))
}

/// Exact coherent gain evaluated at steady state.
pub fn coherent_gain_at(topology: Topology, rates: &RateSet, drives: &DriveSet) -> Result<f64> {
    coherent_amplification(rates, drives, &steady(topology, rates, drives)?)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GainOptimum {
    pub omega_d: f64,
    pub eta: f64,
}

/// Maximizes the exact coherent gain over the drive Rabi frequency in
/// `[lo, hi]` (log scan, then golden-section in log Ωd).
pub fn max_coherent_gain(topology: Topology, rates: &RateSet, omega_p: f64, lo: f64, hi: f64) -> Result<GainOptimum> {
    require_amplifier(topology, "coherent amplification")?;
    let base = DriveSet::new(omega_p, lo)?;
    let eval = |log_od: f64| {
        coherent_gain_at(topology, rates, &base.with_omega_d(log_od.exp())).unwrap_or(f64::NEG_INFINITY)
    };
    let grid: Vec<f64> = geomspace(lo, hi, 81).iter().map(|x| x.ln()).collect();
    let (x, eta) = scan_then_refine(eval, &grid, 1e-6);
    if !eta.is_finite() {
        return Err(Error::UndefinedCoefficient("coherent amplification"));
    }
    Ok(GainOptimum { omega_d: x.exp(), eta })
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LambdaOptimum {
    pub ratio: f64,
    pub omega_d: f64,
    pub eta: f64,
}

/// Best Λ coherent gain over Γp/Γγ ∈ `ratios` and the drive strength, with
/// Γγ and Γd held fixed.
pub fn lambda_gain_optimum(gamma_nr: f64, gamma_d: f64, omega_p: f64, ratios: &[f64]) -> Result<LambdaOptimum> {
    let mut best: Option<LambdaOptimum> = None;
    for &ratio in ratios {
        let rates = RateSet::new(ratio * gamma_nr, gamma_d, gamma_nr)?;
        let scale = rates.gamma_total();
        let opt = max_coherent_gain(Topology::Lambda, &rates, omega_p, 1e-4 * scale, 10.0 * scale)?;
        if best.map_or(true, |b| opt.eta > b.eta) {
            best = Some(LambdaOptimum {
                ratio,
                omega_d: opt.omega_d,
                eta: opt.eta,
            });
        }
    }
    best.ok_or_else(|| Error::InvalidParameter("empty ratio scan".into()))
}

/// Numerically located drive where the exact V coherent gain turns positive.
pub fn coherent_threshold_v(rates: &RateSet, omega_p: f64) -> Result<f64> {
    let scale = rates.gamma_total();
    let base = DriveSet::new(omega_p, 0.0)?;
    let f = |od: f64| coherent_gain_at(Topology::V, rates, &base.with_omega_d(od)).unwrap_or(f64::NAN);
    let grid = geomspace(1e-6 * scale, 1e3 * scale, 400);
    for w in grid.windows(2) {
        let (fa, fb) = (f(w[0]), f(w[1]));
        if fa < 0.0 && fb >= 0.0 {
            return bisect(f, w[0], w[1], 1e-13)
                .ok_or(Error::UndefinedCoefficient("V amplification threshold"));
        }
    }
    Err(Error::UndefinedCoefficient("V amplification threshold"))
}

/// Golden-section maximization of the weak-probe Λ gain over the drive.
pub fn numeric_critical_drive_lambda(rates: &RateSet) -> f64 {
    let scale = rates.gamma_total();
    let grid: Vec<f64> = geomspace(1e-4 * scale, 1e2 * scale, 121).iter().map(|x| x.ln()).collect();
    let f = |x: f64| eta0(Topology::Lambda, rates, x.exp()).unwrap_or(f64::NEG_INFINITY);
    let (x, _) = scan_then_refine(f, &grid, 1e-9);
    x.exp()
}
