//! Numerical oracle: adaptive Dormand-Prince 5(4) on the unreduced Lorentz
//! equation `nabla_{g'} g' = q phi g'` written in the coordinates `(x, y, theta)`.
//!
//! With `X = x'/(2y)`, `Y = y'/(2y)` and `eta = theta' + X` the equation reads
//! `X' = 2XY + 2Y eta - qY`, `Y' = -2X^2 - 2X eta + qX`, `eta' = 0`. Nothing
//! here uses the phase reduction, so agreement with the closed forms is an
//! independent check of it.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geometry::FrameVector;
use crate::trajectory::{MagneticParams, TrajectoryState};

/// Default local error tolerance.
pub const DEFAULT_TOLERANCE: f64 = 1e-10;

type State = [f64; 6];

/// One output point of the oracle: position and coordinate velocity.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct OracleSample {
    pub s: f64,
    pub x: f64,
    pub y: f64,
    pub theta: f64,
    pub dx: f64,
    pub dy: f64,
    pub dtheta: f64,
}

impl OracleSample {
    fn from_state(s: f64, z: &State) -> Self {
        Self { s, x: z[0], y: z[1], theta: z[2], dx: z[3], dy: z[4], dtheta: z[5] }
    }

    pub fn frame_velocity(&self) -> FrameVector {
        let w = self.dx / (2.0 * self.y);
        FrameVector::new(w, self.dy / (2.0 * self.y), self.dtheta + w)
    }

    pub fn speed(&self) -> f64 {
        self.frame_velocity().norm()
    }

    /// `eta(g') = cos(sigma)` for a unit-speed trajectory.
    pub fn contact_cosine(&self) -> f64 {
        self.frame_velocity().eta()
    }
}

fn lorentz_second_order(q: f64, z: &State) -> State {
    let [_, y, _, dx, dy, dtheta] = *z;
    let big_x = dx / (2.0 * y);
    let big_y = dy / (2.0 * y);
    let eta = dtheta + big_x;
    let dbx = 2.0 * big_x * big_y + 2.0 * big_y * eta - q * big_y;
    let dby = -2.0 * big_x * big_x - 2.0 * big_x * eta + q * big_x;
    [dx, dy, dtheta, 2.0 * y * dbx + dx * dy / y, 2.0 * y * dby + dy * dy / y, -dbx]
}

fn error_scale(tol: f64, a: &State, b: &State) -> State {
    let m = |i: usize| a[i].abs().max(b[i].abs());
    let y = a[1].abs().min(b[1].abs());
    [tol * (1.0 + m(0)), tol * y, tol * (1.0 + m(2)), tol * (m(3) + y), tol * (m(4) + y), tol * (1.0 + m(5))]
}

// Dormand-Prince 5(4) coefficients; the system is autonomous so the nodes are not needed.
const A: [[f64; 6]; 7] = [
    [0.0; 6],
    [1.0 / 5.0, 0.0, 0.0, 0.0, 0.0, 0.0],
    [3.0 / 40.0, 9.0 / 40.0, 0.0, 0.0, 0.0, 0.0],
    [44.0 / 45.0, -56.0 / 15.0, 32.0 / 9.0, 0.0, 0.0, 0.0],
    [19372.0 / 6561.0, -25360.0 / 2187.0, 64448.0 / 6561.0, -212.0 / 729.0, 0.0, 0.0],
    [9017.0 / 3168.0, -355.0 / 33.0, 46732.0 / 5247.0, 49.0 / 176.0, -5103.0 / 18656.0, 0.0],
    [35.0 / 384.0, 0.0, 500.0 / 1113.0, 125.0 / 192.0, -2187.0 / 6784.0, 11.0 / 84.0],
];
const B5: [f64; 7] = [35.0 / 384.0, 0.0, 500.0 / 1113.0, 125.0 / 192.0, -2187.0 / 6784.0, 11.0 / 84.0, 0.0];
const B4: [f64; 7] =
    [5179.0 / 57600.0, 0.0, 7571.0 / 16695.0, 393.0 / 640.0, -92097.0 / 339200.0, 187.0 / 2100.0, 1.0 / 40.0];

/// One DP45 step; returns the fifth-order solution and the embedded error.
fn dp45_step<F: Fn(&State) -> State>(f: &F, z: &State, h: f64) -> (State, State) {
    let mut k = [[0.0; 6]; 7];
    k[0] = f(z);
    for stage in 1..7 {
        let mut arg = *z;
        for (i, a) in arg.iter_mut().enumerate() {
            let mut acc = 0.0;
            for j in 0..stage {
                acc += A[stage][j] * k[j][i];
            }
            *a += h * acc;
        }
        k[stage] = f(&arg);
    }
    let mut next = *z;
    let mut err = [0.0; 6];
    for i in 0..6 {
        let (mut hi, mut lo) = (0.0, 0.0);
        for s in 0..7 {
            hi += B5[s] * k[s][i];
            lo += B4[s] * k[s][i];
        }
        next[i] += h * hi;
        err[i] = h * (hi - lo);
    }
    (next, err)
}

/// Integrates from `init` and returns samples at the requested arclengths,
/// which must be sorted and not precede `init.s`.
pub fn integrate_oracle_at(
    init: &TrajectoryState,
    params: &MagneticParams,
    sample_at: &[f64],
    tol: f64,
) -> Result<Vec<OracleSample>> {
    if !(init.y > 0.0) {
        return Err(Error::NonpositiveY(init.y));
    }
    let q = params.q;
    let f = move |z: &State| lorentz_second_order(q, z);
    let (dx, dy, dtheta) = init.coordinate_velocity(params);
    let mut z: State = [init.x, init.y, init.theta, dx, dy, dtheta];
    let mut s = init.s;
    let mut h: f64 = 1e-2;
    let mut out = Vec::with_capacity(sample_at.len());
    for &target in sample_at {
        while target - s > 1e-14 * target.abs().max(1.0) {
            let step = h.min(target - s);
            let (next, err) = dp45_step(&f, &z, step);
            let scale = error_scale(tol, &z, &next);
            let mut norm = 0.0f64;
            for i in 0..6 {
                norm = norm.max(err[i].abs() / scale[i]);
            }
            if !norm.is_finite() || !(next[1] > 0.0) {
                norm = 1e10;
            }
            if norm <= 1.0 {
                s += step;
                z = next;
                if step < h {
                    // clipped to the sample point; keep the proposed size
                    continue;
                }
            }
            let factor = if norm == 0.0 { 5.0 } else { (0.9 * norm.powf(-0.2)).clamp(0.2, 5.0) };
            h = step * factor;
            if h < 1e-13 * s.abs().max(1.0) {
                return Err(Error::StepUnderflow { s, y: z[1] });
            }
        }
        out.push(OracleSample::from_state(target, &z));
    }
    Ok(out)
}

/// Integrates over `[init.s, s_end]`, returning `samples` equally spaced points (at least 2).
pub fn integrate_oracle(
    init: &TrajectoryState,
    params: &MagneticParams,
    s_end: f64,
    tol: f64,
    samples: usize,
) -> Result<Vec<OracleSample>> {
    let n = samples.max(2);
    let grid: Vec<f64> = (0..n).map(|i| init.s + (s_end - init.s) * i as f64 / (n - 1) as f64).collect();
    integrate_oracle_at(init, params, &grid, tol)
}
