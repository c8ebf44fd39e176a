//! Dormand–Prince 5(4) adaptive integrator for small complex systems.

use crate::linalg::{C64, ZERO};

#[derive(Debug, Clone, Copy)]
pub struct Tolerance {
    /// Local error bound relative to the max-norm of the state.
    pub rtol: f64,
    /// Absolute floor for states that pass through zero.
    pub atol: f64,
}

impl Default for Tolerance {
    fn default() -> Self {
        Self {
            rtol: 1e-10,
            atol: 1e-14,
        }
    }
}

const A21: f64 = 1.0 / 5.0;
const A31: f64 = 3.0 / 40.0;
const A32: f64 = 9.0 / 40.0;
const A41: f64 = 44.0 / 45.0;
const A42: f64 = -56.0 / 15.0;
const A43: f64 = 32.0 / 9.0;
const A51: f64 = 19372.0 / 6561.0;
const A52: f64 = -25360.0 / 2187.0;
const A53: f64 = 64448.0 / 6561.0;
const A54: f64 = -212.0 / 729.0;
const A61: f64 = 9017.0 / 3168.0;
const A62: f64 = -355.0 / 33.0;
const A63: f64 = 46732.0 / 5247.0;
const A64: f64 = 49.0 / 176.0;
const A65: f64 = -5103.0 / 18656.0;
const B1: f64 = 35.0 / 384.0;
const B3: f64 = 500.0 / 1113.0;
const B4: f64 = 125.0 / 192.0;
const B5: f64 = -2187.0 / 6784.0;
const B6: f64 = 11.0 / 84.0;
// Difference between the 5th- and embedded 4th-order weights.
const E1: f64 = 71.0 / 57600.0;
const E3: f64 = -71.0 / 16695.0;
const E4: f64 = 71.0 / 1920.0;
const E5: f64 = -17253.0 / 339200.0;
const E6: f64 = 22.0 / 525.0;
const E7: f64 = -1.0 / 40.0;

fn axpy<const N: usize>(y: &[C64; N], terms: &[(f64, &[C64; N])], h: f64) -> [C64; N] {
    let mut out = *y;
    for (w, k) in terms {
        let s = w * h;
        for (o, ki) in out.iter_mut().zip(k.iter()) {
            *o += ki * s;
        }
    }
    out
}

/// Integrates the autonomous system `y' = f(y)` from `y0` over `[0, t]`.
pub fn integrate<const N: usize, F>(f: F, y0: [C64; N], t: f64, tol: Tolerance) -> [C64; N]
where
    F: Fn(&[C64; N]) -> [C64; N],
{
    if t <= 0.0 {
        return y0;
    }
    let norm = |v: &[C64; N]| v.iter().map(|x| x.norm()).fold(0.0, f64::max);

    let mut y = y0;
    let mut k1 = f(&y);
    let mut time = 0.0;
    let d0 = norm(&y).max(tol.atol);
    let d1 = norm(&k1);
    let mut h = if d1 > 0.0 { 0.01 * d0 / d1 } else { 1e-3 * t };
    h = h.min(t);
    let mut last_rejected = false;

    while time < t {
        if time + h > t {
            h = t - time;
        }
        let k2 = f(&axpy(&y, &[(A21, &k1)], h));
        let k3 = f(&axpy(&y, &[(A31, &k1), (A32, &k2)], h));
        let k4 = f(&axpy(&y, &[(A41, &k1), (A42, &k2), (A43, &k3)], h));
        let k5 = f(&axpy(&y, &[(A51, &k1), (A52, &k2), (A53, &k3), (A54, &k4)], h));
        let k6 = f(&axpy(
            &y,
            &[(A61, &k1), (A62, &k2), (A63, &k3), (A64, &k4), (A65, &k5)],
            h,
        ));
        let y_new = axpy(
            &y,
            &[(B1, &k1), (B3, &k3), (B4, &k4), (B5, &k5), (B6, &k6)],
            h,
        );
        let k7 = f(&y_new);

        let mut err = [ZERO; N];
        for i in 0..N {
            err[i] = (k1[i] * E1 + k3[i] * E3 + k4[i] * E4 + k5[i] * E5 + k6[i] * E6 + k7[i] * E7)
                * h;
        }
        let scale = tol.atol + tol.rtol * norm(&y).max(norm(&y_new));
        let e = norm(&err) / scale;

        if e <= 1.0 {
            time += h;
            y = y_new;
            k1 = k7;
            let grow = if e == 0.0 { 5.0 } else { (0.9 * e.powf(-0.2)).clamp(0.2, 5.0) };
            h *= if last_rejected { grow.min(1.0) } else { grow };
            last_rejected = false;
        } else {
            let shrink = if e.is_finite() { (0.9 * e.powf(-0.2)).clamp(0.1, 0.9) } else { 0.1 };
            h *= shrink;
            last_rejected = true;
        }
        assert!(h > 0.0 && h.is_finite(), "step size underflow");
    }
    y
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn exponential_decay_with_rotation() {
        let lam = C64::new(-0.3, 2.0);
        let y = integrate(|y: &[C64; 1]| [lam * y[0]], [C64::new(1.0, 0.0)], 7.5, Tolerance::default());
        let exact = (lam * 7.5).exp();
        assert!((y[0] - exact).norm() < 1e-9);
    }

    #[test]
    fn affine_relaxation_reaches_fixed_point() {
        // y' = -y + 2, fixed point 2.
        let y = integrate(
            |y: &[C64; 1]| [-y[0] + C64::new(2.0, 0.0)],
            [ZERO],
            60.0,
            Tolerance::default(),
        );
        assert!((y[0] - C64::new(2.0, 0.0)).norm() < 1e-9);
    }

    #[test]
    fn zero_duration_is_identity() {
        let y0 = [C64::new(0.3, -0.1), C64::new(2.0, 0.5)];
        let y = integrate(|y: &[C64; 2]| [y[1], -y[0]], y0, 0.0, Tolerance::default());
        assert_eq!(y, y0);
    }
}
