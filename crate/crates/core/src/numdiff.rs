//! Five-point central differences and coordinate jets of sampled curves.

use std::f64::consts::PI;

use crate::geometry::{covariant_acceleration, FrameVector};

/// Default step for the five-point stencils.
pub const DEFAULT_STEP: f64 = 1e-3;

const OFFSETS: [f64; 5] = [-2.0, -1.0, 0.0, 1.0, 2.0];

pub fn stencil<F: Fn(f64) -> f64>(f: F, s: f64, h: f64) -> [f64; 5] {
    OFFSETS.map(|o| f(s + o * h))
}

pub fn first(v: &[f64; 5], h: f64) -> f64 {
    (v[0] - 8.0 * v[1] + 8.0 * v[3] - v[4]) / (12.0 * h)
}

pub fn second(v: &[f64; 5], h: f64) -> f64 {
    (-v[0] + 16.0 * v[1] - 30.0 * v[2] + 16.0 * v[3] - v[4]) / (12.0 * h * h)
}

pub fn derivative<F: Fn(f64) -> f64>(f: F, s: f64, h: f64) -> f64 {
    first(&stencil(f, s, h), h)
}

pub fn second_derivative<F: Fn(f64) -> f64>(f: F, s: f64, h: f64) -> f64 {
    second(&stencil(f, s, h), h)
}

/// Shifts each value by a multiple of `2pi` to lie within `pi` of the centre value.
pub fn unwrap_stencil(v: &mut [f64; 5]) {
    let c = v[2];
    for x in v.iter_mut() {
        *x -= 2.0 * PI * ((*x - c) / (2.0 * PI)).round();
    }
}

/// Position with first and second derivatives of a curve `s -> (x, y, theta)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CoordJet {
    pub x: f64,
    pub y: f64,
    pub theta: f64,
    pub dx: f64,
    pub dy: f64,
    pub dtheta: f64,
    pub ddx: f64,
    pub ddy: f64,
    pub ddtheta: f64,
}

impl CoordJet {
    /// Finite-difference jet; `theta` may be reported modulo `2pi`.
    pub fn from_curve<F: Fn(f64) -> [f64; 3]>(curve: F, s: f64, h: f64) -> Self {
        let pts = OFFSETS.map(|o| curve(s + o * h));
        let xs = pts.map(|p| p[0]);
        let ys = pts.map(|p| p[1]);
        let mut ts = pts.map(|p| p[2]);
        unwrap_stencil(&mut ts);
        Self {
            x: xs[2],
            y: ys[2],
            theta: ts[2],
            dx: first(&xs, h),
            dy: first(&ys, h),
            dtheta: first(&ts, h),
            ddx: second(&xs, h),
            ddy: second(&ys, h),
            ddtheta: second(&ts, h),
        }
    }

    /// Velocity in the frame `e1 = 2y d_x - d_theta`, `e2 = 2y d_y`, `e3 = d_theta`.
    pub fn velocity(&self) -> FrameVector {
        let w = self.dx / (2.0 * self.y);
        FrameVector::new(w, self.dy / (2.0 * self.y), self.dtheta + w)
    }

    /// Ordinary derivative of the frame components of the velocity.
    pub fn velocity_derivative(&self) -> FrameVector {
        let y2 = 2.0 * self.y * self.y;
        let dw = self.ddx / (2.0 * self.y) - self.dx * self.dy / y2;
        let dv2 = self.ddy / (2.0 * self.y) - self.dy * self.dy / y2;
        FrameVector::new(dw, dv2, self.ddtheta + dw)
    }

    /// `nabla_{g'} g'` in the frame.
    pub fn acceleration(&self) -> FrameVector {
        covariant_acceleration(&self.velocity(), &self.velocity_derivative())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn stencils_on_polynomials_and_exp() {
        let h = 1e-3;
        assert!((derivative(|s| s.powi(4), 1.5, h) - 4.0 * 1.5f64.powi(3)).abs() < 1e-10);
        assert!((second_derivative(|s| s.powi(4), 1.5, h) - 12.0 * 1.5f64.powi(2)).abs() < 1e-8);
        assert!((derivative(f64::exp, 0.3, h) - 0.3f64.exp()).abs() < 1e-12);
        assert!((second_derivative(f64::exp, 0.3, h) - 0.3f64.exp()).abs() < 1e-9);
    }

    #[test]
    fn unwrapping_handles_branch_cut() {
        let h = 1e-3;
        let wrapped = |s: f64| {
            let t = PI - 1e-4 + s;
            t - 2.0 * PI * ((t + PI) / (2.0 * PI)).floor()
        };
        let mut v = stencil(wrapped, 0.0, h);
        unwrap_stencil(&mut v);
        assert!((first(&v, h) - 1.0).abs() < 1e-9);
    }

    #[test]
    fn fibre_has_zero_acceleration() {
        let jet = CoordJet::from_curve(|s| [0.3, 2.0, s], 0.7, DEFAULT_STEP);
        assert!((jet.velocity() - FrameVector::XI).max_abs() < 1e-12);
        assert!(jet.acceleration().max_abs() < 1e-9);
    }
}
