//! Steady states, time evolution and two-time correlators of the tracked
//! expectations.

use crate::error::{Error, Result};
use crate::linalg::{max_abs, Matrix, C64, ONE, ZERO};
use crate::model::{EmitterSystem, RotatingFrame, Topology, Vec8, DIM};
use crate::ode::{self, Tolerance};
use crate::operator::{reduce_product, OperatorExpr};
use crate::optimize::geomspace;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StateVector {
    topology: Topology,
    frame: RotatingFrame,
    slots: Vec8,
}

impl StateVector {
    pub fn new(topology: Topology, slots: Vec8) -> Self {
        Self {
            topology,
            frame: RotatingFrame::for_topology(topology),
            slots,
        }
    }

    pub fn topology(&self) -> Topology {
        self.topology
    }
    pub fn frame(&self) -> &RotatingFrame {
        &self.frame
    }
    pub fn slots(&self) -> &Vec8 {
        &self.slots
    }

    /// Populations of |1⟩, |2⟩, |3⟩ (real parts).
    pub fn populations(&self) -> [f64; 3] {
        let p3 = self.slots[3].re;
        let p1 = self.slots[4].re;
        [p1, 1.0 - p1 - p3, p3]
    }

    pub fn expectation(&self, op: &OperatorExpr) -> C64 {
        op.expectation(&self.slots, ONE)
    }

    /// Largest violation of the conjugate-pair and real-population structure.
    pub fn symmetry_defect(&self) -> f64 {
        let s = &self.slots;
        let pairs = (0..3)
            .map(|k| (s[k] - s[DIM - 1 - k].conj()).norm())
            .fold(0.0, f64::max);
        pairs.max(s[3].im.abs()).max(s[4].im.abs())
    }
}

/// Emitter in the ground state |1⟩.
pub fn initial_state(topology: Topology) -> StateVector {
    let mut slots = [ZERO; DIM];
    slots[4] = ONE;
    StateVector::new(topology, slots)
}

/// Fixed point `M = −R⁻¹Ω`.
pub fn steady_state(system: &EmitterSystem) -> Result<StateVector> {
    let rhs = system.drive_vector().map(|w| -w);
    let m = system.r_matrix().solve(&rhs)?;
    Ok(StateVector::new(system.topology(), m))
}

/// Long-time state reached from the ground state. Equals the steady state
/// when it is unique; otherwise the closed-form evolution over many
/// relaxation times selects the branch connected to |1⟩.
pub fn relaxed_state(system: &EmitterSystem, slowest_rate: f64) -> Result<StateVector> {
    match steady_state(system) {
        Err(Error::SingularSystem { .. }) => {
            let t = 1e4 / slowest_rate;
            Ok(evolve(system, &initial_state(system.topology()), t))
        }
        other => other,
    }
}

fn augmented(system: &EmitterSystem, t: f64) -> Matrix<{ DIM + 1 }> {
    let mut a = Matrix::<{ DIM + 1 }>::zeros();
    let r = system.r_matrix();
    for i in 0..DIM {
        for j in 0..DIM {
            a[(i, j)] = r[(i, j)] * t;
        }
        a[(i, DIM)] = system.drive_vector()[i] * t;
    }
    a
}

/// Evolves slots carrying a scalar `weight` (the trace of the underlying
/// operator) through `exp([[R, Ω], [0, 0]] t)`.
fn propagate(system: &EmitterSystem, y0: &Vec8, weight: C64, t: f64) -> Vec8 {
    if t == 0.0 {
        return *y0;
    }
    let e = augmented(system, t).expm();
    let ext: [C64; DIM + 1] = std::array::from_fn(|i| if i < DIM { y0[i] } else { weight });
    let out = e.mul_vec(&ext);
    std::array::from_fn(|i| out[i])
}

/// Closed-form evolution by the matrix exponential.
pub fn evolve(system: &EmitterSystem, state0: &StateVector, t: f64) -> StateVector {
    assert!(t >= 0.0, "evolution time must be non-negative");
    StateVector::new(system.topology(), propagate(system, state0.slots(), ONE, t))
}

/// Adaptive Runge–Kutta evolution (local relative error 1e-10).
pub fn evolve_stepping(system: &EmitterSystem, state0: &StateVector, t: f64) -> StateVector {
    assert!(t >= 0.0, "evolution time must be non-negative");
    let slots = ode::integrate(|m| system.rhs(m, ONE), *state0.slots(), t, Tolerance::default());
    StateVector::new(system.topology(), slots)
}

/// Geometric delay grid from 0 to 20 over the smallest nonzero rate.
pub fn default_tau_grid(min_rate: f64, n: usize) -> Vec<f64> {
    let tau_max = 20.0 / min_rate;
    let mut grid = vec![0.0];
    grid.extend(geomspace(tau_max * 1e-4, tau_max, n.saturating_sub(1)));
    grid
}

/// Two-time correlators `⟨A V(τ) B⟩` for the tracked `V`, with the scalar
/// weight `⟨A B⟩` that multiplies the drive vector.
#[derive(Debug, Clone)]
pub struct Correlator {
    pub weight: C64,
    pub values: Vec<Vec8>,
}

#[derive(Debug, Clone)]
pub struct CorrelatorSet {
    pub topology: Topology,
    pub tau_grid: Vec<f64>,
    /// `⟨ζ†(0) V(τ)⟩`
    pub zdag_v: Correlator,
    /// `⟨ζ†(0) V(τ) ζ(0)⟩`
    pub zdag_v_z: Correlator,
    /// `⟨V(τ) ζ(0)⟩`
    pub v_z: Correlator,
}

/// Equal-time values `⟨A V_k B⟩` and weight `⟨A B⟩` in a state.
pub fn sandwich(steady: &StateVector, left: &OperatorExpr, right: &OperatorExpr) -> (Vec8, C64) {
    let slots = std::array::from_fn(|k| {
        steady.expectation(&reduce_product(&[*left, OperatorExpr::slot(k), *right]))
    });
    (slots, steady.expectation(&reduce_product(&[*left, *right])))
}

pub fn correlators(
    system: &EmitterSystem,
    steady: &StateVector,
    tau_grid: &[f64],
) -> Result<CorrelatorSet> {
    if tau_grid.iter().any(|&t| !(t >= 0.0)) || tau_grid.windows(2).any(|w| w[1] < w[0]) {
        return Err(Error::InvalidGrid("delays must be non-negative and ascending".into()));
    }
    let z = OperatorExpr::zeta(system.topology());
    let zd = z.dagger();
    let id = OperatorExpr::identity();
    let exps: Vec<Matrix<{ DIM + 1 }>> = tau_grid
        .iter()
        .map(|&t| augmented(system, t).expm())
        .collect();
    let run = |left: &OperatorExpr, right: &OperatorExpr| {
        let (y0, weight) = sandwich(steady, left, right);
        let ext: [C64; DIM + 1] = std::array::from_fn(|i| if i < DIM { y0[i] } else { weight });
        let values = exps
            .iter()
            .map(|e| {
                let out = e.mul_vec(&ext);
                std::array::from_fn(|i| out[i])
            })
            .collect();
        Correlator { weight, values }
    };
    Ok(CorrelatorSet {
        topology: system.topology(),
        tau_grid: tau_grid.to_vec(),
        zdag_v: run(&zd, &id),
        zdag_v_z: run(&zd, &z),
        v_z: run(&id, &z),
    })
}

/// Max-norm residual `‖R M + Ω‖∞ / ‖Ω‖∞`.
pub fn steady_residual(system: &EmitterSystem, state: &StateVector) -> f64 {
    let res = system.rhs(state.slots(), ONE);
    max_abs(&res) / max_abs(system.drive_vector()).max(f64::MIN_POSITIVE)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::max_abs_diff;
    use crate::model::{build_system, DriveSet, RateSet};

    fn fig2a() -> EmitterSystem {
        let rates = RateSet::new(0.01, 0.01, 0.02).unwrap();
        let drives = DriveSet::new(0.005, 0.03).unwrap();
        build_system(Topology::Lambda, &rates, &drives)
    }

    #[test]
    fn initial_states() {
        for t in Topology::ALL {
            let s = initial_state(t);
            assert_eq!(s.slots()[4], ONE);
            assert_eq!(s.populations(), [1.0, 0.0, 0.0]);
        }
    }

    #[test]
    fn steady_state_residual_is_tiny() {
        let sys = fig2a();
        let m = steady_state(&sys).unwrap();
        assert!(steady_residual(&sys, &m) <= 1e-12);
        assert!(m.symmetry_defect() < 1e-14);
    }

    #[test]
    fn zero_time_is_identity() {
        let sys = fig2a();
        let s0 = initial_state(Topology::Lambda);
        assert_eq!(evolve(&sys, &s0, 0.0), s0);
        assert_eq!(evolve_stepping(&sys, &s0, 0.0), s0);
    }

    #[test]
    fn stepping_and_exponential_agree() {
        let sys = fig2a();
        let s0 = initial_state(Topology::Lambda);
        let a = evolve(&sys, &s0, 100.0);
        let b = evolve_stepping(&sys, &s0, 100.0);
        assert!(max_abs_diff(a.slots(), b.slots()) < 1e-9);
    }

    #[test]
    fn closed_form_matches_resolvent_expression() {
        // e^{Rt}(M0 + R⁻¹Ω) − R⁻¹Ω
        let sys = fig2a();
        let s0 = initial_state(Topology::Lambda);
        let t = 37.0;
        let m_inf = steady_state(&sys).unwrap();
        let shifted: Vec8 = std::array::from_fn(|i| s0.slots()[i] - m_inf.slots()[i]);
        let e = sys.r_matrix().scale(C64::from(t)).expm().mul_vec(&shifted);
        let want: Vec8 = std::array::from_fn(|i| e[i] + m_inf.slots()[i]);
        let got = evolve(&sys, &s0, t);
        assert!(max_abs_diff(got.slots(), &want) < 1e-13);
    }

    #[test]
    fn long_time_reaches_steady_state() {
        let sys = fig2a();
        let m = steady_state(&sys).unwrap();
        let s = evolve(&sys, &initial_state(Topology::Lambda), 2e4);
        assert!(max_abs_diff(s.slots(), m.slots()) < 1e-8);
    }

    #[test]
    fn all_rates_zero_is_singular() {
        let rates = RateSet::new(0.0, 0.0, 0.0).unwrap();
        let drives = DriveSet::new(0.01, 0.01).unwrap();
        let sys = build_system(Topology::V, &rates, &drives);
        assert!(matches!(steady_state(&sys), Err(Error::SingularSystem { .. })));
    }

    #[test]
    fn decoupled_lambda_relaxes_to_ground() {
        // With both beams off and Γγ = 0, |2⟩ has neither a source nor a sink.
        let rates = RateSet::with_dephasing(0.0025, 0.005, 0.0, 0.0028, 0.0118).unwrap();
        let drives = DriveSet::detuned(0.0, 0.0, 0.003, 0.0).unwrap();
        let sys = build_system(Topology::Lambda, &rates, &drives);
        assert!(steady_state(&sys).is_err());
        let s = relaxed_state(&sys, rates.min_positive_rate().unwrap()).unwrap();
        assert!(max_abs_diff(s.slots(), initial_state(Topology::Lambda).slots()) < 1e-12);
    }

    #[test]
    fn correlators_at_zero_and_infinity() {
        let sys = fig2a();
        let m = steady_state(&sys).unwrap();
        let tau = [0.0, 1.0, 5e3];
        let c = correlators(&sys, &m, &tau).unwrap();
        let zz = Topology::Lambda;
        // ⟨ζ†ζ†ζζ⟩ = 0
        let p3 = c.zdag_v_z.values[0][3];
        assert_eq!(p3, ZERO);
        // ⟨ζ†V⟩ at τ=0 on the ζ slot is ⟨ζ†ζ⟩ = P3 for Λ.
        assert!((c.zdag_v.values[0][zz.zeta_slot()] - m.slots()[3]).norm() < 1e-15);
        // Factorization at long delay.
        let zd = m.slots()[zz.zeta_dag_slot()];
        let want: Vec8 = std::array::from_fn(|k| zd * m.slots()[k]);
        assert!(max_abs_diff(&c.zdag_v.values[2], &want) < 1e-12);
        assert!((c.zdag_v.weight - zd).norm() < 1e-15);
    }

    #[test]
    fn tau_grid_shape() {
        let g = default_tau_grid(0.01, 400);
        assert_eq!(g.len(), 400);
        assert_eq!(g[0], 0.0);
        assert!((g[399] - 2000.0).abs() < 1e-9);
        assert!(g.windows(2).all(|w| w[1] > w[0]));
    }
}
