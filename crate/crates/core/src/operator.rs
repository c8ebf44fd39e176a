//! Operators on the three-level space as combinations of matrix units
//! `|i⟩⟨j|`, and their expectations in terms of tracked slots.

use std::ops::{Add, Mul};

use crate::linalg::{C64, ONE, ZERO};
use crate::model::{Topology, Vec8, SLOT_UNITS};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OperatorExpr {
    /// `coeffs[i][j]` multiplies `|i+1⟩⟨j+1|`.
    pub coeffs: [[C64; 3]; 3],
}

impl OperatorExpr {
    pub fn zero() -> Self {
        Self {
            coeffs: [[ZERO; 3]; 3],
        }
    }

    pub fn identity() -> Self {
        let mut op = Self::zero();
        for k in 0..3 {
            op.coeffs[k][k] = ONE;
        }
        op
    }

    /// `|i⟩⟨j|` with 1-based level indices.
    pub fn unit(i: usize, j: usize) -> Self {
        assert!((1..=3).contains(&i) && (1..=3).contains(&j), "levels are 1, 2, 3");
        let mut op = Self::zero();
        op.coeffs[i - 1][j - 1] = ONE;
        op
    }

    /// σ = |1⟩⟨2|.
    pub fn sigma() -> Self {
        Self::unit(1, 2)
    }
    /// μ = |2⟩⟨3|.
    pub fn mu() -> Self {
        Self::unit(2, 3)
    }
    /// ν = |3⟩⟨1|.
    pub fn nu() -> Self {
        Self::unit(3, 1)
    }

    /// Lowering operator ζ of the probe transition.
    pub fn zeta(topology: Topology) -> Self {
        match topology {
            Topology::Lambda => Self::mu(),
            Topology::V | Topology::Ladder => Self::sigma(),
        }
    }

    /// Operator tracked in `slot`.
    pub fn slot(slot: usize) -> Self {
        let (i, j) = SLOT_UNITS[slot];
        Self::unit(i, j)
    }

    pub fn dagger(&self) -> Self {
        let mut op = Self::zero();
        for i in 0..3 {
            for j in 0..3 {
                op.coeffs[j][i] = self.coeffs[i][j].conj();
            }
        }
        op
    }

    pub fn scale(&self, s: C64) -> Self {
        let mut op = *self;
        op.coeffs.iter_mut().flatten().for_each(|x| *x *= s);
        op
    }

    /// Expectation given tracked slots and the trace of the underlying
    /// (possibly unnormalized) operator; the |2⟩⟨2| population follows
    /// from completeness.
    pub fn expectation(&self, slots: &Vec8, trace: C64) -> C64 {
        let mut acc = ZERO;
        for i in 0..3 {
            for j in 0..3 {
                let c = self.coeffs[i][j];
                if c != ZERO {
                    acc += c * unit_expectation(i + 1, j + 1, slots, trace);
                }
            }
        }
        acc
    }
}

fn unit_expectation(i: usize, j: usize, slots: &Vec8, trace: C64) -> C64 {
    if (i, j) == (2, 2) {
        return trace - slots[3] - slots[4];
    }
    let k = SLOT_UNITS
        .iter()
        .position(|&u| u == (i, j))
        .expect("every off-diagonal unit and P1, P3 are tracked");
    slots[k]
}

impl Mul for OperatorExpr {
    type Output = Self;
    fn mul(self, rhs: Self) -> Self {
        // |i⟩⟨j| |k⟩⟨l| = δ_jk |i⟩⟨l|
        let mut out = Self::zero();
        for i in 0..3 {
            for j in 0..3 {
                let a = self.coeffs[i][j];
                if a == ZERO {
                    continue;
                }
                for l in 0..3 {
                    out.coeffs[i][l] += a * rhs.coeffs[j][l];
                }
            }
        }
        out
    }
}

impl Add for OperatorExpr {
    type Output = Self;
    fn add(mut self, rhs: Self) -> Self {
        for (a, b) in self.coeffs.iter_mut().flatten().zip(rhs.coeffs.iter().flatten()) {
            *a += b;
        }
        self
    }
}

/// Exact product of a sequence of operators (identity for an empty slice).
pub fn reduce_product(ops: &[OperatorExpr]) -> OperatorExpr {
    ops.iter().fold(OperatorExpr::identity(), |acc, op| acc * *op)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn reduction_examples() {
        let s = OperatorExpr::sigma();
        assert_eq!(reduce_product(&[s, s.dagger(), s]), s);
        let m = OperatorExpr::mu();
        assert_eq!(reduce_product(&[m.dagger(), m]), OperatorExpr::unit(3, 3));
        let n = OperatorExpr::nu();
        assert_eq!(reduce_product(&[n, n.dagger()]), OperatorExpr::unit(3, 3));
        assert_eq!(reduce_product(&[s, s]), OperatorExpr::zero());
    }

    #[test]
    fn unit_multiplication_table() {
        for i in 1..=3 {
            for j in 1..=3 {
                for k in 1..=3 {
                    for l in 1..=3 {
                        let p = OperatorExpr::unit(i, j) * OperatorExpr::unit(k, l);
                        let want = if j == k {
                            OperatorExpr::unit(i, l)
                        } else {
                            OperatorExpr::zero()
                        };
                        assert_eq!(p, want);
                    }
                }
            }
        }
    }

    #[test]
    fn slot_operators_are_lowering_combinations() {
        let (s, m, n) = (OperatorExpr::sigma(), OperatorExpr::mu(), OperatorExpr::nu());
        assert_eq!(OperatorExpr::slot(0), n.dagger());
        assert_eq!(OperatorExpr::slot(1), s);
        assert_eq!(OperatorExpr::slot(2), m.dagger());
        assert_eq!(OperatorExpr::slot(3), n * n.dagger());
        assert_eq!(OperatorExpr::slot(4), s * s.dagger());
        assert_eq!(OperatorExpr::slot(5), m);
        assert_eq!(OperatorExpr::slot(6), s.dagger());
        assert_eq!(OperatorExpr::slot(7), n);
    }

    #[test]
    fn expectation_uses_completeness() {
        let slots = [
            C64::new(0.1, 0.2),
            ZERO,
            ZERO,
            C64::new(0.25, 0.0),
            C64::new(0.5, 0.0),
            ZERO,
            ZERO,
            C64::new(0.1, -0.2),
        ];
        let p2 = OperatorExpr::unit(2, 2).expectation(&slots, ONE);
        assert!((p2 - C64::new(0.25, 0.0)).norm() < 1e-15);
        let id = OperatorExpr::identity().expectation(&slots, ONE);
        assert!((id - ONE).norm() < 1e-15);
        let nu = OperatorExpr::nu().expectation(&slots, ONE);
        assert_eq!(nu, slots[7]);
    }
}
