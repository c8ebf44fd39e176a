//! Physical parameters and the linear evolution `dM/dt = R M + Ω` for the
//! three emitter topologies.
//!
//! Every topology uses the same slot layout. Slot `k` holds `⟨V_k⟩` for
//! the matrix units
//! `V = (|1⟩⟨3|, |1⟩⟨2|, |3⟩⟨2|, |3⟩⟨3|, |1⟩⟨1|, |2⟩⟨3|, |2⟩⟨1|, |3⟩⟨1|)`,
//! so slots (0,7), (1,6) and (2,5) are conjugate pairs and slots 3, 4 are
//! the populations of |3⟩ and |1⟩. In terms of the lowering operators
//! `σ = |1⟩⟨2|`, `μ = |2⟩⟨3|`, `ν = |3⟩⟨1|` this is
//! `(⟨ν†⟩, ⟨σ⟩, ⟨μ†⟩, ⟨νν†⟩, ⟨σσ†⟩, ⟨μ⟩, ⟨σ†⟩, ⟨ν⟩)`.

use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::linalg::{Matrix, C64, I, ZERO};

pub const DIM: usize = 8;

pub type Mat8 = Matrix<DIM>;
pub type Vec8 = [C64; DIM];

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Topology {
    Lambda,
    V,
    Ladder,
}

impl Topology {
    pub const ALL: [Topology; 3] = [Topology::Lambda, Topology::V, Topology::Ladder];

    pub fn name(self) -> &'static str {
        match self {
            Topology::Lambda => "lambda",
            Topology::V => "v",
            Topology::Ladder => "ladder",
        }
    }

    /// Slot holding `⟨ζ⟩`, the lowering operator of the probe transition.
    pub fn zeta_slot(self) -> usize {
        match self {
            Topology::Lambda => 5,
            Topology::V | Topology::Ladder => 1,
        }
    }

    /// Slot holding `⟨ζ†⟩`.
    pub fn zeta_dag_slot(self) -> usize {
        DIM - 1 - self.zeta_slot()
    }

    /// Symbolic names of the tracked expectations, in slot order.
    pub fn slot_labels(self) -> [&'static str; DIM] {
        match self {
            Topology::Lambda => ["N1*", "S1", "M1*", "N2", "S2", "M1", "S1*", "N1"],
            Topology::V => ["N3*", "S3", "M3*", "N4", "S4", "M3", "S3*", "N3"],
            Topology::Ladder => ["N5*", "S5", "M5*", "N6", "S6", "M5", "S5*", "N5"],
        }
    }
}

impl fmt::Display for Topology {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Topology {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "lambda" | "λ" => Ok(Topology::Lambda),
            "v" => Ok(Topology::V),
            "ladder" | "xi" | "ξ" => Ok(Topology::Ladder),
            other => Err(Error::InvalidParameter(format!("unknown topology `{other}`"))),
        }
    }
}

/// Decay and dephasing rates, in units of the reference transition frequency.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RateSet {
    gamma_p: f64,
    gamma_d: f64,
    gamma_nr: f64,
    gamma_l2: f64,
    gamma_l3: f64,
}

impl RateSet {
    /// Radiative rates into the probe and drive modes plus non-radiative decay.
    pub fn new(gamma_p: f64, gamma_d: f64, gamma_nr: f64) -> Result<Self> {
        Self::with_dephasing(gamma_p, gamma_d, gamma_nr, 0.0, 0.0)
    }

    pub fn with_dephasing(
        gamma_p: f64,
        gamma_d: f64,
        gamma_nr: f64,
        gamma_l2: f64,
        gamma_l3: f64,
    ) -> Result<Self> {
        let named = [
            ("gamma_p", gamma_p),
            ("gamma_d", gamma_d),
            ("gamma_nr", gamma_nr),
            ("gamma_l2", gamma_l2),
            ("gamma_l3", gamma_l3),
        ];
        for (name, v) in named {
            if !(v.is_finite() && v >= 0.0) {
                return Err(Error::InvalidParameter(format!(
                    "{name} must be finite and non-negative, got {v}"
                )));
            }
        }
        Ok(Self {
            gamma_p,
            gamma_d,
            gamma_nr,
            gamma_l2,
            gamma_l3,
        })
    }

    pub fn gamma_p(&self) -> f64 {
        self.gamma_p
    }
    pub fn gamma_d(&self) -> f64 {
        self.gamma_d
    }
    pub fn gamma_nr(&self) -> f64 {
        self.gamma_nr
    }
    pub fn gamma_l2(&self) -> f64 {
        self.gamma_l2
    }
    pub fn gamma_l3(&self) -> f64 {
        self.gamma_l3
    }

    /// Same rates with the drive-mode decay switched off (classical drive).
    pub fn without_drive_decay(&self) -> Self {
        Self {
            gamma_d: 0.0,
            ..*self
        }
    }

    /// Γ̃ = 2(Γp + Γd).
    pub fn gamma_tilde(&self) -> f64 {
        2.0 * (self.gamma_p + self.gamma_d)
    }

    /// Γt = Γ̃ + Γγ.
    pub fn gamma_total(&self) -> f64 {
        self.gamma_tilde() + self.gamma_nr
    }

    pub fn gamma_31(&self) -> f64 {
        self.gamma_tilde() + self.gamma_l3
    }
    pub fn gamma_21(&self) -> f64 {
        self.gamma_l2
    }
    pub fn gamma_32(&self) -> f64 {
        self.gamma_31() + self.gamma_21()
    }
    pub fn gamma_21_primed(&self) -> f64 {
        2.0 * self.gamma_p + self.gamma_l2
    }
    pub fn gamma_31_primed(&self) -> f64 {
        2.0 * self.gamma_d + self.gamma_l3
    }
    pub fn gamma_32_primed(&self) -> f64 {
        self.gamma_31_primed() + self.gamma_21_primed()
    }

    /// Probe-transition linewidth used to scale detuning windows.
    pub fn probe_linewidth(&self, topology: Topology) -> f64 {
        match topology {
            Topology::Lambda => self.gamma_32(),
            Topology::V | Topology::Ladder => self.gamma_21_primed(),
        }
    }

    /// Largest composite linewidth.
    pub fn max_linewidth(&self) -> f64 {
        [
            self.gamma_31(),
            self.gamma_32(),
            self.gamma_21_primed(),
            self.gamma_31_primed(),
            self.gamma_32_primed(),
        ]
        .into_iter()
        .fold(0.0, f64::max)
    }

    /// Smallest strictly positive rate, if any.
    pub fn min_positive_rate(&self) -> Option<f64> {
        [
            self.gamma_p,
            self.gamma_d,
            self.gamma_nr,
            self.gamma_l2,
            self.gamma_l3,
        ]
        .into_iter()
        .filter(|&g| g > 0.0)
        .reduce(f64::min)
    }

    pub(crate) fn require_probe(&self, what: &'static str) -> Result<()> {
        if self.gamma_p > 0.0 {
            Ok(())
        } else {
            Err(Error::UndefinedCoefficient(what))
        }
    }
}

/// Rabi frequencies and detunings of the probe and drive beams.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DriveSet {
    omega_p: f64,
    omega_d: f64,
    delta_p: f64,
    delta_d: f64,
}

impl DriveSet {
    pub fn new(omega_p: f64, omega_d: f64) -> Result<Self> {
        Self::detuned(omega_p, omega_d, 0.0, 0.0)
    }

    pub fn detuned(omega_p: f64, omega_d: f64, delta_p: f64, delta_d: f64) -> Result<Self> {
        for (name, v) in [("omega_p", omega_p), ("omega_d", omega_d)] {
            if !(v.is_finite() && v >= 0.0) {
                return Err(Error::InvalidParameter(format!(
                    "{name} must be finite and non-negative, got {v}"
                )));
            }
        }
        for (name, v) in [("delta_p", delta_p), ("delta_d", delta_d)] {
            if !v.is_finite() {
                return Err(Error::InvalidParameter(format!("{name} must be finite")));
            }
        }
        Ok(Self {
            omega_p,
            omega_d,
            delta_p,
            delta_d,
        })
    }

    /// Drive chosen by mean photon numbers ⟨N⟩ = Ω²/(8Γ²) of each beam.
    pub fn from_photon_numbers(rates: &RateSet, n_p: f64, n_d: f64) -> Result<Self> {
        if n_p < 0.0 || n_d < 0.0 {
            return Err(Error::InvalidParameter("photon numbers must be non-negative".into()));
        }
        let omega = |n: f64, g: f64| (8.0 * n).sqrt() * g;
        Self::new(omega(n_p, rates.gamma_p), omega(n_d, rates.gamma_d))
    }

    pub fn omega_p(&self) -> f64 {
        self.omega_p
    }
    pub fn omega_d(&self) -> f64 {
        self.omega_d
    }
    pub fn delta_p(&self) -> f64 {
        self.delta_p
    }
    pub fn delta_d(&self) -> f64 {
        self.delta_d
    }

    pub fn with_omega_p(self, omega_p: f64) -> Self {
        Self { omega_p, ..self }
    }
    pub fn with_omega_d(self, omega_d: f64) -> Self {
        Self { omega_d, ..self }
    }
    pub fn with_delta_p(self, delta_p: f64) -> Self {
        Self { delta_p, ..self }
    }
    pub fn with_delta_d(self, delta_d: f64) -> Self {
        Self { delta_d, ..self }
    }

    pub fn mean_probe_photons(&self, rates: &RateSet) -> Result<f64> {
        rates.require_probe("mean probe photon number")?;
        Ok(self.omega_p.powi(2) / (8.0 * rates.gamma_p.powi(2)))
    }

    pub fn mean_drive_photons(&self, rates: &RateSet) -> Result<f64> {
        if rates.gamma_d > 0.0 {
            Ok(self.omega_d.powi(2) / (8.0 * rates.gamma_d.powi(2)))
        } else {
            Err(Error::UndefinedCoefficient("mean drive photon number"))
        }
    }

    /// Normalized incident probe flux v_g·I_p = Ωp²/(2Γp).
    pub fn probe_flux(&self, rates: &RateSet) -> Result<f64> {
        rates.require_probe("probe flux")?;
        Ok(self.omega_p.powi(2) / (2.0 * rates.gamma_p))
    }

    /// Normalized incident drive flux v_g·I_d = Ωd²/(2Γd).
    pub fn drive_flux(&self, rates: &RateSet) -> Result<f64> {
        if rates.gamma_d > 0.0 {
            Ok(self.omega_d.powi(2) / (2.0 * rates.gamma_d))
        } else {
            Err(Error::UndefinedCoefficient("drive flux"))
        }
    }
}

/// Phase convention of the tracked expectations.
///
/// Level `i` rotates at `a_i ω_p + b_i ω_d`; slot `|i⟩⟨j|` is stored as
/// `⟨|i⟩⟨j|⟩ e^{i(f_j − f_i)t}`, which makes every steady-state slot constant.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct RotatingFrame {
    /// `(a_i, b_i)` for levels |1⟩, |2⟩, |3⟩.
    pub level_frequencies: [(i32, i32); 3],
}

impl RotatingFrame {
    pub fn for_topology(topology: Topology) -> Self {
        let level_frequencies = match topology {
            Topology::Lambda => [(0, 0), (-1, 1), (0, 1)],
            Topology::V => [(0, 0), (1, 0), (0, 1)],
            Topology::Ladder => [(0, 0), (1, 0), (1, 1)],
        };
        Self { level_frequencies }
    }

    /// Frequency `(a, b)` in `e^{i(a ω_p + b ω_d)t}` attached to a slot.
    pub fn slot_rotation(&self, slot: usize) -> (i32, i32) {
        let (i, j) = SLOT_UNITS[slot];
        let fi = self.level_frequencies[i - 1];
        let fj = self.level_frequencies[j - 1];
        (fj.0 - fi.0, fj.1 - fi.1)
    }
}

/// Matrix unit `|i⟩⟨j|` (1-based levels) tracked in each slot.
pub const SLOT_UNITS: [(usize, usize); DIM] = [
    (1, 3),
    (1, 2),
    (3, 2),
    (3, 3),
    (1, 1),
    (2, 3),
    (2, 1),
    (3, 1),
];

#[derive(Debug, Clone, PartialEq)]
pub struct EmitterSystem {
    topology: Topology,
    r_matrix: Mat8,
    drive_vector: Vec8,
}

impl EmitterSystem {
    pub fn topology(&self) -> Topology {
        self.topology
    }
    pub fn r_matrix(&self) -> &Mat8 {
        &self.r_matrix
    }
    pub fn drive_vector(&self) -> &Vec8 {
        &self.drive_vector
    }
    pub fn slot_labels(&self) -> [&'static str; DIM] {
        self.topology.slot_labels()
    }

    /// `R M + Ω·trace`.
    pub fn rhs(&self, m: &Vec8, trace: C64) -> Vec8 {
        let mut out = self.r_matrix.mul_vec(m);
        for (o, w) in out.iter_mut().zip(&self.drive_vector) {
            *o += w * trace;
        }
        out
    }
}

pub fn build_system(topology: Topology, rates: &RateSet, drives: &DriveSet) -> EmitterSystem {
    let (mut r, w) = match topology {
        Topology::Lambda => lambda_matrix(rates, drives),
        Topology::V => v_matrix(rates, drives),
        Topology::Ladder => ladder_matrix(rates, drives),
    };
    apply_dephasing(&mut r, rates);
    EmitterSystem {
        topology,
        r_matrix: r,
        drive_vector: w,
    }
}

/// Λ emitter with the drive treated as a classical field (no Γd decay).
pub fn classical_drive_system(rates: &RateSet, drives: &DriveSet) -> EmitterSystem {
    build_system(Topology::Lambda, &rates.without_drive_decay(), drives)
}

/// Pure dephasing only broadens coherences that involve |2⟩ or |3⟩.
fn apply_dephasing(r: &mut Mat8, rates: &RateSet) {
    let (l2, l3) = (rates.gamma_l2, rates.gamma_l3);
    for (slot, &(i, j)) in SLOT_UNITS.iter().enumerate() {
        if i == j {
            continue;
        }
        let width: f64 = [i, j]
            .iter()
            .map(|&lvl| match lvl {
                2 => l2,
                3 => l3,
                _ => 0.0,
            })
            .sum();
        r[(slot, slot)] -= width;
    }
}

fn c(re: f64) -> C64 {
    C64::new(re, 0.0)
}

fn lambda_matrix(rates: &RateSet, drives: &DriveSet) -> (Mat8, Vec8) {
    let (gd, gg) = (rates.gamma_d, rates.gamma_nr);
    let (op, od) = (I * drives.omega_p, I * drives.omega_d);
    let gt = c(rates.gamma_tilde());
    let k1 = -I * drives.delta_d - gt;
    let k2 = -I * drives.delta_p - gt - gg;
    let k3 = k2 - k1;
    let z = ZERO;
    let r = Mat8::from_rows([
        [k1, -op, z, od, -od, z, z, z],
        [-op, k3.conj(), od, z, z, z, z, z],
        [z, od, k2.conj(), -op * 2.0, -op, z, z, z],
        [od, z, -op, -gt * 2.0, z, op, z, -od],
        [-od, z, z, c(4.0 * gd - 2.0 * gg), c(-2.0 * gg), z, z, od],
        [z, z, z, op * 2.0, op, k2, -od, z],
        [z, z, z, z, z, -od, k3, op],
        [z, z, z, -od, od, z, op, k1.conj()],
    ]);
    let w = [z, z, op, z, c(2.0 * gg), -op, z, z];
    (r, w)
}

fn v_matrix(rates: &RateSet, drives: &DriveSet) -> (Mat8, Vec8) {
    let (gp, gd, gg) = (rates.gamma_p, rates.gamma_d, rates.gamma_nr);
    let (op, od) = (I * drives.omega_p, I * drives.omega_d);
    let k4 = -I * drives.delta_d - gg - 2.0 * gd;
    let k5 = -I * drives.delta_p - 2.0 * gp;
    let k6 = k4.conj() + k5;
    let z = ZERO;
    let r = Mat8::from_rows([
        [k4, z, z, od, -od, op, z, z],
        [z, k5, od, -op, -op * 2.0, z, z, z],
        [z, od, k6, z, z, z, z, -op],
        [od, z, z, c(-4.0 * gd - 2.0 * gg), z, z, z, -od],
        [-od, -op, z, c(4.0 * gd - 4.0 * gp), c(-4.0 * gp), z, op, od],
        [op, z, z, z, z, k6.conj(), -od, z],
        [z, z, z, op, op * 2.0, -od, k5.conj(), z],
        [z, z, -op, -od, od, z, z, k4.conj()],
    ]);
    let w = [z, op, z, z, c(4.0 * gp), z, -op, z];
    (r, w)
}

fn ladder_matrix(rates: &RateSet, drives: &DriveSet) -> (Mat8, Vec8) {
    let (gp, gd, gg) = (rates.gamma_p, rates.gamma_d, rates.gamma_nr);
    let (op, od) = (I * drives.omega_p, I * drives.omega_d);
    // Coherences with |3⟩ also decay through the non-radiative |3⟩→|1⟩ channel.
    let k7 = -I * drives.delta_d - rates.gamma_tilde() - gg;
    let k5 = -I * drives.delta_p - 2.0 * gp;
    let k8 = k7 - k5.conj();
    let z = ZERO;
    let r = Mat8::from_rows([
        [k8, -od, z, z, z, op, z, z],
        [-od, k5, z, -op, -op * 2.0, z, z, z],
        [z, z, k7.conj(), -od * 2.0, -od, z, z, -op],
        [z, z, -od, c(-4.0 * gd - 2.0 * gg), z, od, z, z],
        [z, -op, z, c(2.0 * gg - 4.0 * gp), c(-4.0 * gp), z, op, z],
        [op, z, z, od * 2.0, od, k7, z, z],
        [z, z, z, op, op * 2.0, z, k5.conj(), od],
        [z, z, -op, z, z, z, od, k8.conj()],
    ]);
    let w = [z, op, od, z, c(4.0 * gp), -od, -op, z];
    (r, w)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn fig2(omega_p: f64, omega_d: f64) -> (RateSet, DriveSet) {
        (
            RateSet::new(0.01, 0.01, 0.02).unwrap(),
            DriveSet::new(omega_p, omega_d).unwrap(),
        )
    }

    #[test]
    fn lambda_diagonal_entries() {
        let (rates, drives) = fig2(0.005, 0.03);
        let r = *build_system(Topology::Lambda, &rates, &drives).r_matrix();
        // κ1 = -0.04, κ2 = -0.06, κ3 = κ2 - κ1 = -0.02.
        assert_eq!(r[(0, 0)], c(-0.04));
        assert!((r[(5, 5)] - c(-0.06)).norm() < 1e-15);
        assert!((r[(6, 6)] - c(-0.02)).norm() < 1e-15);
    }

    /// Independent row-by-row transcription of the printed V matrix.
    fn v_reference(gp: f64, gd: f64, gg: f64, op: f64, od: f64, dp: f64, dd: f64) -> [[C64; 8]; 8] {
        let i = I;
        let k4 = C64::new(-gg - 2.0 * gd, -dd);
        let k5 = C64::new(-2.0 * gp, -dp);
        let k6 = C64::new(-gg - 2.0 * gd - 2.0 * gp, dd - dp);
        let mut m = [[ZERO; 8]; 8];
        m[0][0] = k4;
        m[0][3] = i * od;
        m[0][4] = -i * od;
        m[0][5] = i * op;
        m[1][1] = k5;
        m[1][2] = i * od;
        m[1][3] = -i * op;
        m[1][4] = -2.0 * i * op;
        m[2][1] = i * od;
        m[2][2] = k6;
        m[2][7] = -i * op;
        m[3][0] = i * od;
        m[3][3] = c(-4.0 * gd - 2.0 * gg);
        m[3][7] = -i * od;
        m[4][0] = -i * od;
        m[4][1] = -i * op;
        m[4][3] = c(4.0 * gd - 4.0 * gp);
        m[4][4] = c(-4.0 * gp);
        m[4][6] = i * op;
        m[4][7] = i * od;
        m[5][0] = i * op;
        m[5][5] = k6.conj();
        m[5][6] = -i * od;
        m[6][3] = i * op;
        m[6][4] = 2.0 * i * op;
        m[6][5] = -i * od;
        m[6][6] = k5.conj();
        m[7][2] = -i * op;
        m[7][3] = -i * od;
        m[7][4] = i * od;
        m[7][7] = k4.conj();
        m
    }

    #[test]
    fn v_matrix_matches_hand_transcription() {
        let (rates, drives) = fig2(0.01, 0.03);
        let sys = build_system(Topology::V, &rates, &drives);
        let want = v_reference(0.01, 0.01, 0.02, 0.01, 0.03, 0.0, 0.0);
        assert_eq!(sys.r_matrix().rows(), &want);

        let drives = drives.with_delta_p(0.013).with_delta_d(-0.007);
        let sys = build_system(Topology::V, &rates, &drives);
        let want = v_reference(0.01, 0.01, 0.02, 0.01, 0.03, 0.013, -0.007);
        for (a, b) in sys.r_matrix().rows().iter().flatten().zip(want.iter().flatten()) {
            assert!((a - b).norm() < 1e-15);
        }
    }

    #[test]
    fn drive_vectors() {
        let (rates, drives) = fig2(0.005, 0.03);
        let l = build_system(Topology::Lambda, &rates, &drives);
        assert_eq!(l.drive_vector()[2], I * 0.005);
        assert_eq!(l.drive_vector()[4], c(0.04));
        let x = build_system(Topology::Ladder, &rates, &drives);
        assert_eq!(x.drive_vector()[2], I * 0.03);
        assert_eq!(x.drive_vector()[5], -I * 0.03);
        assert_eq!(x.drive_vector()[4], c(0.04));
    }

    #[test]
    fn dephasing_only_touches_coherence_diagonal() {
        let bare = RateSet::new(0.0025, 0.005, 0.0).unwrap();
        let deph = RateSet::with_dephasing(0.0025, 0.005, 0.0, 0.0028, 0.0118).unwrap();
        let drives = DriveSet::detuned(0.001, 0.01414, 0.002, 0.0).unwrap();
        for t in Topology::ALL {
            let a = build_system(t, &bare, &drives);
            let b = build_system(t, &deph, &drives);
            let d = *b.r_matrix() - *a.r_matrix();
            let expect = [0.0118, 0.0028, 0.0146, 0.0, 0.0, 0.0146, 0.0028, 0.0118];
            for i in 0..8 {
                for j in 0..8 {
                    let want = if i == j { -expect[i] } else { 0.0 };
                    assert!((d[(i, j)] - c(want)).norm() < 1e-15, "{t} ({i},{j})");
                }
            }
        }
    }

    #[test]
    fn classical_drive_removes_drive_decay() {
        let (rates, drives) = fig2(0.005, 0.03);
        let a = classical_drive_system(&rates, &drives);
        let b = build_system(
            Topology::Lambda,
            &RateSet::new(0.01, 0.0, 0.02).unwrap(),
            &drives,
        );
        assert_eq!(a, b);
    }

    #[test]
    fn frame_rotations_match_definitions() {
        let l = RotatingFrame::for_topology(Topology::Lambda);
        assert_eq!(l.slot_rotation(7), (0, -1)); // N1 = ⟨ν⟩ e^{-iω_d t}
        assert_eq!(l.slot_rotation(5), (1, 0)); // M1 = ⟨μ⟩ e^{iω_p t}
        assert_eq!(l.slot_rotation(1), (-1, 1)); // S1 = ⟨σ⟩ e^{i(ω_d-ω_p)t}
        let x = RotatingFrame::for_topology(Topology::Ladder);
        assert_eq!(x.slot_rotation(7), (-1, -1));
        assert_eq!(x.slot_rotation(5), (0, 1));
        let v = RotatingFrame::for_topology(Topology::V);
        assert_eq!(v.slot_rotation(1), (1, 0));
        for t in Topology::ALL {
            let f = RotatingFrame::for_topology(t);
            assert_eq!(f.slot_rotation(3), (0, 0));
            assert_eq!(f.slot_rotation(4), (0, 0));
        }
    }

    #[test]
    fn photon_numbers_round_trip() {
        let rates = RateSet::new(0.0025, 0.005, 0.0).unwrap();
        let d = DriveSet::from_photon_numbers(&rates, 0.1, 1.0).unwrap();
        assert!((d.mean_probe_photons(&rates).unwrap() - 0.1).abs() < 1e-15);
        assert!((d.mean_drive_photons(&rates).unwrap() - 1.0).abs() < 1e-14);
        assert!((d.omega_d() - 0.01414).abs() < 1e-4);
    }

    #[test]
    fn rejects_negative_rates() {
        assert!(RateSet::new(-0.1, 0.0, 0.0).is_err());
        assert!(RateSet::with_dephasing(0.1, 0.0, 0.0, f64::NAN, 0.0).is_err());
        assert!(DriveSet::new(-1.0, 0.0).is_err());
    }

    #[test]
    fn composite_widths() {
        let r = RateSet::with_dephasing(0.0025, 0.005, 0.0, 0.0028, 0.0118).unwrap();
        assert!((r.gamma_31() - 0.0268).abs() < 1e-15);
        assert!((r.gamma_32() - 0.0296).abs() < 1e-15);
        assert!((r.gamma_21_primed() - 0.0078).abs() < 1e-15);
        assert!((r.gamma_31_primed() - 0.0218).abs() < 1e-15);
        assert!((r.gamma_32_primed() - 0.0296).abs() < 1e-15);
    }
}
