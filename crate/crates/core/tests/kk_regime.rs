//! Kramers-Kronig reconstructions of the exact emitter response in the
//! weak-probe regime with a small non-radiative rate.

use wgamp_core::kerr::response_curve;
use wgamp_core::kk::{kk_amplitude_from_phase, kk_phase_from_amplitude, KKGrid, MIN_HALF_WIDTH_FACTOR};
use wgamp_core::model::{DriveSet, RateSet, Topology};

fn rates() -> RateSet {
    RateSet::with_dephasing(0.0025, 0.005, 0.001, 0.0028, 0.0118).unwrap()
}

/// Largest deviation over |Δp| ≤ 20 linewidths, away from the grid ends.
fn central_deviation(grid: &[f64], a: &[f64], b: &[f64], window: f64) -> f64 {
    grid.iter()
        .zip(a.iter().zip(b))
        .filter(|(x, _)| x.abs() <= window)
        .map(|(_, (x, y))| (x - y).abs())
        .fold(0.0, f64::max)
}

#[test]
fn phase_from_amplitude_matches_exact_phase() {
    let r = rates();
    let grid = KKGrid::for_rates(&r, 16001).unwrap();
    let d = DriveSet::from_photon_numbers(&r, 0.01, 1.0).unwrap();
    for t in Topology::ALL {
        let exact = response_curve(t, &r, &d, grid.delta_grid()).unwrap();
        let kk = kk_phase_from_amplitude(&exact, false).unwrap();
        let dev = central_deviation(&exact.delta_grid, &exact.phase, &kk.phase, 20.0 * r.max_linewidth());
        assert!(dev < 0.01, "{t}: {dev} rad");
    }
}

/// The phase tail falls off as 1/Δ, so this direction uses a grid twenty
/// times wider than the minimum at the same spacing.
#[test]
fn amplitude_from_phase_matches_exact_amplitude() {
    let r = rates();
    let grid = KKGrid::new(20.0 * MIN_HALF_WIDTH_FACTOR * r.max_linewidth(), 320_001).unwrap();
    let d = DriveSet::from_photon_numbers(&r, 0.01, 1.0).unwrap();
    let mut failures = vec![];
    for t in Topology::ALL {
        let exact = response_curve(t, &r, &d, grid.delta_grid()).unwrap();
        let kk = kk_amplitude_from_phase(&exact).unwrap();
        let dev = central_deviation(&exact.delta_grid, &exact.amplitude, &kk.amplitude, 20.0 * r.max_linewidth());
        println!("{t}: max ||t|_KK − |t|| = {dev:.3e}");
        if dev >= 1e-3 {
            failures.push(format!("{t}: {dev:.3e}"));
        }
    }
    assert!(failures.is_empty(), "amplitude deviation ≥ 1e-3: {failures:?}");
}

/// With the probe far below saturation the quadrature error alone is well
/// inside 1e-3; the ladder excess at ⟨Np⟩ = 0.01 grows with probe power.
#[test]
fn amplitude_reconstruction_error_tracks_probe_power() {
    let r = rates();
    let grid = KKGrid::new(20.0 * MIN_HALF_WIDTH_FACTOR * r.max_linewidth(), 320_001).unwrap();
    let window = 20.0 * r.max_linewidth();
    let dev = |t: Topology, n_p: f64| {
        let d = DriveSet::from_photon_numbers(&r, n_p, 1.0).unwrap();
        let exact = response_curve(t, &r, &d, grid.delta_grid()).unwrap();
        let kk = kk_amplitude_from_phase(&exact).unwrap();
        central_deviation(&exact.delta_grid, &exact.amplitude, &kk.amplitude, window)
    };
    for t in Topology::ALL {
        let floor = dev(t, 1e-4);
        assert!(floor < 1e-4, "{t}: {floor}");
    }
    let (weak, weaker) = (dev(Topology::Ladder, 1e-2), dev(Topology::Ladder, 1e-4));
    assert!(weak > 10.0 * weaker, "{weak} vs {weaker}");
}
