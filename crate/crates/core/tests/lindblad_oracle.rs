//! Independent density-matrix model of the emitter: the 8-slot equations,
//! steady states, correlators and g² are compared with a Lindblad master
//! equation built from the Hamiltonian and jump operators.

use nalgebra::{DMatrix, DVector, Matrix3};
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};
use wgamp_core::dynamics::{correlators, evolve, initial_state, steady_state, StateVector};
use wgamp_core::linalg::C64;
use wgamp_core::model::{build_system, DriveSet, RateSet, Topology};
use wgamp_core::observables::{g2_curve, transport};

type M3 = Matrix3<C64>;

fn unit(i: usize, j: usize) -> M3 {
    let mut m = M3::zeros();
    m[(i - 1, j - 1)] = C64::new(1.0, 0.0);
    m
}

fn re(x: f64) -> C64 {
    C64::new(x, 0.0)
}

/// Hamiltonian and jump operators in the frame rotating with the beams.
fn master_equation(t: Topology, r: &RateSet, d: &DriveSet) -> (M3, Vec<M3>) {
    let (op, od, dp, dd) = (d.omega_p(), d.omega_d(), d.delta_p(), d.delta_d());
    let (p2, p3) = (unit(2, 2), unit(3, 3));
    let rate = |g: f64| re(g.sqrt());
    let (h, jumps) = match t {
        Topology::Lambda => (
            p3 * re(dd) + p2 * re(dd - dp) + (unit(3, 2) + unit(2, 3)) * re(op) + (unit(3, 1) + unit(1, 3)) * re(od),
            vec![
                unit(2, 3) * rate(4.0 * r.gamma_p()),
                unit(1, 3) * rate(4.0 * r.gamma_d()),
                unit(1, 2) * rate(2.0 * r.gamma_nr()),
            ],
        ),
        Topology::V => (
            p2 * re(dp) + p3 * re(dd) + (unit(2, 1) + unit(1, 2)) * re(op) + (unit(3, 1) + unit(1, 3)) * re(od),
            vec![
                unit(1, 2) * rate(4.0 * r.gamma_p()),
                unit(1, 3) * rate(4.0 * r.gamma_d()),
                unit(2, 3) * rate(2.0 * r.gamma_nr()),
            ],
        ),
        Topology::Ladder => (
            p2 * re(dp) + p3 * re(dp + dd) + (unit(2, 1) + unit(1, 2)) * re(op) + (unit(3, 2) + unit(2, 3)) * re(od),
            vec![
                unit(1, 2) * rate(4.0 * r.gamma_p()),
                unit(2, 3) * rate(4.0 * r.gamma_d()),
                unit(1, 3) * rate(2.0 * r.gamma_nr()),
            ],
        ),
    };
    let mut jumps = jumps;
    jumps.push(p2 * rate(2.0 * r.gamma_l2()));
    jumps.push(p3 * rate(2.0 * r.gamma_l3()));
    (h, jumps)
}

fn lindblad(rho: &M3, h: &M3, jumps: &[M3]) -> M3 {
    let i = C64::new(0.0, 1.0);
    let mut out = (h * rho - rho * h) * (-i);
    for l in jumps {
        let ld = l.adjoint();
        out += l * rho * ld - (ld * l * rho + rho * ld * l) * re(0.5);
    }
    out
}

/// Superoperator on row-major vec(ρ).
fn liouvillian(h: &M3, jumps: &[M3]) -> DMatrix<C64> {
    let mut l = DMatrix::zeros(9, 9);
    for c in 0..9 {
        let basis = unit(c / 3 + 1, c % 3 + 1);
        let out = lindblad(&basis, h, jumps);
        for r in 0..9 {
            l[(r, c)] = out[(r / 3, r % 3)];
        }
    }
    l
}

fn to_vec(m: &M3) -> DVector<C64> {
    DVector::from_fn(9, |k, _| m[(k / 3, k % 3)])
}

fn from_vec(v: &DVector<C64>) -> M3 {
    M3::from_fn(|i, j| v[3 * i + j])
}

/// Slot operators in the tracked order.
fn slot_ops() -> [M3; 8] {
    [
        unit(1, 3),
        unit(1, 2),
        unit(3, 2),
        unit(3, 3),
        unit(1, 1),
        unit(2, 3),
        unit(2, 1),
        unit(3, 1),
    ]
}

fn slots_of(rho: &M3) -> [C64; 8] {
    let ops = slot_ops();
    std::array::from_fn(|k| (ops[k] * rho).trace())
}

fn oracle_steady(l: &DMatrix<C64>) -> M3 {
    let mut a = l.clone();
    let mut b = DVector::zeros(9);
    for c in 0..9 {
        a[(0, c)] = if c % 4 == 0 { re(1.0) } else { re(0.0) };
    }
    b[0] = re(1.0);
    from_vec(&a.lu().solve(&b).expect("oracle steady state"))
}

fn max_diff(a: &[C64], b: &[C64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y).norm()).fold(0.0, f64::max)
}

fn random_density(g: &mut StdRng) -> M3 {
    let a = M3::from_fn(|_, _| C64::new(g.random::<f64>() - 0.5, g.random::<f64>() - 0.5));
    let rho = a * a.adjoint();
    rho / rho.trace()
}

fn random_params(g: &mut StdRng, nr: f64, dephasing: bool) -> (RateSet, DriveSet) {
    let (l2, l3) = if dephasing { (g.random::<f64>() * 0.5, g.random::<f64>() * 0.5) } else { (0.0, 0.0) };
    let rates = RateSet::with_dephasing(0.1 + g.random::<f64>(), 0.1 + g.random::<f64>(), nr, l2, l3).unwrap();
    let drives = DriveSet::detuned(g.random::<f64>(), g.random::<f64>(), 2.0 * g.random::<f64>() - 1.0, 2.0 * g.random::<f64>() - 1.0).unwrap();
    (rates, drives)
}

#[test]
fn slot_equations_match_master_equation() {
    let mut g = StdRng::seed_from_u64(7);
    for t in Topology::ALL {
        for (nr, deph) in [(0.0, false), (0.3, false), (0.3, true), (0.0, true)] {
            let (rates, drives) = random_params(&mut g, nr, deph);
            let sys = build_system(t, &rates, &drives);
            let (h, jumps) = master_equation(t, &rates, &drives);
            for _ in 0..10 {
                let rho = random_density(&mut g);
                let want = slots_of(&lindblad(&rho, &h, &jumps));
                let got = sys.rhs(&slots_of(&rho), rho.trace());
                let err = max_diff(&want, &got);
                assert!(err < 1e-12, "{t} nr={nr} dephasing={deph}: {err}");
            }
        }
    }
}

#[test]
fn steady_state_matches_master_equation() {
    let mut g = StdRng::seed_from_u64(11);
    for t in Topology::ALL {
        for _ in 0..10 {
            let nr = 0.05 + g.random::<f64>();
            let (rates, drives) = random_params(&mut g, nr, true);
            let sys = build_system(t, &rates, &drives);
            let (h, jumps) = master_equation(t, &rates, &drives);
            let rho = oracle_steady(&liouvillian(&h, &jumps));
            let m = steady_state(&sys).unwrap();
            let err = max_diff(m.slots(), &slots_of(&rho));
            assert!(err < 1e-10, "{t}: {err}");
        }
    }
}

#[test]
fn time_evolution_matches_master_equation() {
    let rates = RateSet::with_dephasing(0.01, 0.01, 0.02, 0.001, 0.003).unwrap();
    let drives = DriveSet::detuned(0.005, 0.03, 0.002, -0.001).unwrap();
    for t in Topology::ALL {
        let sys = build_system(t, &rates, &drives);
        let (h, jumps) = master_equation(t, &rates, &drives);
        let l = liouvillian(&h, &jumps);
        let rho0 = to_vec(&unit(1, 1));
        for time in [1.0, 30.0, 700.0] {
            let rho = from_vec(&((&l * re(time)).exp() * &rho0));
            let m = evolve(&sys, &initial_state(t), time);
            let err = max_diff(m.slots(), &slots_of(&rho));
            assert!(err < 1e-10, "{t} t={time}: {err}");
        }
    }
}

/// ⟨A(0) V(τ) B(0)⟩ = Tr[V e^{Lτ}(B ρ A)].
fn oracle_correlator(l: &DMatrix<C64>, rho: &M3, a: &M3, b: &M3, tau: f64) -> [C64; 8] {
    let x = from_vec(&((l * re(tau)).exp() * to_vec(&(b * rho * a))));
    slots_of(&x)
}

#[test]
fn correlators_match_quantum_regression_on_density_matrix() {
    // Weak probe, moderate drive, Γγ = 2Γp.
    let rates = RateSet::new(0.01, 0.01, 0.02).unwrap();
    let drives = DriveSet::new(0.005, 0.04).unwrap();
    let taus = [0.0, 5.0, 37.0, 150.0, 600.0];
    for t in Topology::ALL {
        let sys = build_system(t, &rates, &drives);
        let (h, jumps) = master_equation(t, &rates, &drives);
        let l = liouvillian(&h, &jumps);
        let rho = oracle_steady(&l);
        let steady = StateVector::new(t, slots_of(&rho));
        let cs = correlators(&sys, &steady, &taus).unwrap();
        let z = if t == Topology::Lambda { unit(2, 3) } else { unit(1, 2) };
        let zd = z.adjoint();
        let id = M3::identity();
        for (k, &tau) in taus.iter().enumerate() {
            let pairs = [
                (&cs.zdag_v.values[k], oracle_correlator(&l, &rho, &zd, &id, tau)),
                (&cs.zdag_v_z.values[k], oracle_correlator(&l, &rho, &zd, &z, tau)),
                (&cs.v_z.values[k], oracle_correlator(&l, &rho, &id, &z, tau)),
            ];
            for (got, want) in pairs {
                let err = max_diff(got, &want);
                assert!(err < 1e-11, "{t} τ={tau}: {err}");
            }
        }
    }
}

#[test]
fn g2_matches_density_matrix_route() {
    let taus = [0.0, 10.0, 80.0, 300.0, 3000.0];
    let cases = [
        (RateSet::new(0.01, 0.01, 0.02).unwrap(), DriveSet::new(0.005, 0.03).unwrap()),
        (RateSet::new(0.01, 0.01, 0.1).unwrap(), DriveSet::new(0.005, 0.09).unwrap()),
    ];
    for (rates, drives) in &cases {
        for t in Topology::ALL {
            let sys = build_system(t, rates, drives);
            let curve = g2_curve(&sys, rates, drives, &taus).unwrap();
            let (h, jumps) = master_equation(t, rates, drives);
            let l = liouvillian(&h, &jumps);
            let rho = oracle_steady(&l);
            // Transmitted probe field in units of the incident amplitude.
            let c = 2.0 * rates.gamma_p() / drives.omega_p();
            let z = if t == Topology::Lambda { unit(2, 3) } else { unit(1, 2) };
            let b = M3::identity() - z * C64::new(0.0, c);
            let n = (b.adjoint() * b * rho).trace().re;
            let tr = transport(rates, drives, &steady_state(&sys).unwrap()).unwrap();
            assert!((n - tr.t_probe).abs() < 1e-10, "{t}: ⟨b†b⟩ {n} vs T {}", tr.t_probe);
            for (k, &tau) in taus.iter().enumerate() {
                let x = from_vec(&((&l * re(tau)).exp() * to_vec(&(b * rho * b.adjoint()))));
                let g = (b.adjoint() * b * x).trace().re / (n * n);
                let err = (g - curve.values[k]).abs();
                assert!(err < 1e-9 * g.abs().max(1.0), "{t} τ={tau}: {g} vs {}", curve.values[k]);
            }
        }
    }
}
