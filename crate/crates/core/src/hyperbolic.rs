//! The base plane: upper half plane with metric `(dx^2 + dy^2)/(4y^2)`, of curvature -4.
//!
//! Constant-curvature curves are parametrised by arclength `s` through the
//! direction angle `mu`, with `x' = 2y cos mu`, `y' = 2y sin mu` and
//! `mu' = k - 2 cos mu`.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::lie::TRACE_TOLERANCE;

/// Unit-speed tolerance for [`signed_curvature`].
pub const UNIT_SPEED_TOLERANCE: f64 = 1e-8;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct HalfPlanePoint {
    pub x: f64,
    pub y: f64,
}

impl HalfPlanePoint {
    pub fn new(x: f64, y: f64) -> Result<Self> {
        if !(y > 0.0) {
            return Err(Error::NonpositiveY(y));
        }
        Ok(Self { x, y })
    }

    pub fn euclidean_distance(&self, other: &Self) -> f64 {
        (self.x - other.x).hypot(self.y - other.y)
    }
}

/// Geometric type of a constant-curvature curve.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum CircleClass {
    ClosedCircle,
    Horocycle,
    Equidistant,
    Geodesic,
}

impl CircleClass {
    /// Classification by `|k|` against 2, with tolerance [`TRACE_TOLERANCE`].
    pub fn from_curvature(k: f64) -> Self {
        let a = k.abs();
        if a <= TRACE_TOLERANCE {
            CircleClass::Geodesic
        } else if (a - 2.0).abs() <= TRACE_TOLERANCE {
            CircleClass::Horocycle
        } else if a > 2.0 {
            CircleClass::ClosedCircle
        } else {
            CircleClass::Equidistant
        }
    }

    pub fn is_closed(&self) -> bool {
        matches!(self, CircleClass::ClosedCircle)
    }
}

/// Euclidean trace of a constant-curvature curve.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub enum EuclideanShape {
    Circle {
        center: (f64, f64),
        radius: f64,
    },
    /// Ray `point + t direction`, `t` real, restricted to `y > 0`.
    Line {
        point: (f64, f64),
        direction: (f64, f64),
    },
}

impl EuclideanShape {
    /// Implicit-equation residual of a point.
    pub fn residual(&self, x: f64, y: f64) -> f64 {
        match *self {
            EuclideanShape::Circle { center, radius } => {
                (x - center.0).powi(2) + (y - center.1).powi(2) - radius * radius
            }
            EuclideanShape::Line { point, direction } => {
                let n = direction.0.hypot(direction.1);
                ((x - point.0) * direction.1 - (y - point.1) * direction.0) / n
            }
        }
    }
}

/// Continuous solution of `mu' = k - 2 amp cos(mu)`, `mu(0) = mu0`, with `amp >= 0`.
///
/// Uses the half-angle substitution `t = tan(mu/2)`, which turns the equation
/// into the Riccati equation `t' = (k - 2amp)/2 + (k + 2amp)/2 t^2`. The
/// returned angle is continuous in `s` across poles of `t`.
pub fn angle_flow(k: f64, amp: f64, mu0: f64, s: f64) -> f64 {
    if amp == 0.0 {
        return mu0 + k * s;
    }
    let alpha = 0.5 * (k - 2.0 * amp);
    let beta = 0.5 * (k + 2.0 * amp);
    let disc = k * k - 4.0 * amp * amp;
    let scale = 4.0 * amp * amp;
    if disc > TRACE_TOLERANCE * scale {
        // rotating: t = c tan(psi), psi' = sgn(k) omega/2
        let omega = disc.sqrt();
        let c = (alpha / beta).sqrt();
        let psi0 = tan_rescale(0.5 * mu0, 1.0 / c);
        2.0 * tan_rescale(psi0 + k.signum() * 0.5 * omega * s, c)
    } else if disc < -TRACE_TOLERANCE * scale {
        librating_flow(k, amp, mu0, s)
    } else if k < 0.0 {
        // beta = 0: t' = alpha = -2amp
        let (n, half) = split_half_angle(mu0);
        if half_angle_is_pole(half) {
            return mu0;
        }
        2.0 * (half.tan() - 2.0 * amp * s).atan() + 2.0 * std::f64::consts::PI * n
    } else {
        // alpha = 0: 1/t is affine with slope -2amp; angle = pi - 2 atan(1/t)
        let (n, half) = split_half_angle(mu0 - std::f64::consts::PI);
        if half_angle_is_pole(half) {
            return mu0;
        }
        let w0 = -half.tan();
        std::f64::consts::PI - 2.0 * (w0 - 2.0 * amp * s).atan() + 2.0 * std::f64::consts::PI * n
    }
}

/// Continuous, increasing map `psi -> atan(c tan psi)` on the whole line (`c > 0`).
pub fn tan_rescale(psi: f64, c: f64) -> f64 {
    let (s, co) = psi.sin_cos();
    psi + ((c - 1.0) * s * co).atan2(co * co + c * s * s)
}

/// Writes `mu = 2 pi n + 2 half` with `half` in `[-pi/2, pi/2)`.
fn split_half_angle(mu: f64) -> (f64, f64) {
    let two_pi = 2.0 * std::f64::consts::PI;
    let n = ((mu + std::f64::consts::PI) / two_pi).floor();
    (n, 0.5 * (mu - two_pi * n))
}

fn half_angle_is_pole(half: f64) -> bool {
    (half + std::f64::consts::FRAC_PI_2).abs() < 1e-15
}

/// `|k| < 2 amp`: two equilibria `t = +-d`, `d = sqrt((2amp - k)/(2amp + k))`.
fn librating_flow(k: f64, amp: f64, mu0: f64, s: f64) -> f64 {
    use std::f64::consts::PI;
    let omega = (4.0 * amp * amp - k * k).sqrt();
    let d = ((2.0 * amp - k) / (2.0 * amp + k)).sqrt();
    let z = 0.5 * omega * s;
    let (sh, ch) = (0.5 * mu0).sin_cos();
    if sh.abs() > d * ch.abs() * (1.0 + 1e-15) {
        // passes through mu = pi: w = cot(mu/2) = -tanh(z0 + z)/d, mu in (0, 2pi) + 2pi m
        let m = (mu0 / (2.0 * PI)).floor();
        let w0 = ch / sh;
        let z0 = (-w0 * d).atanh();
        2.0 * PI * m + PI - 2.0 * (-(z0 + z).tanh() / d).atan()
    } else if sh.abs() >= d * ch.abs() * (1.0 - 1e-15) {
        mu0
    } else {
        // t = tan(mu/2) = -d tanh(z0 + z), mu in (-pi, pi) + 2pi n
        let (n, half) = split_half_angle(mu0);
        let z0 = (-half.tan() / d).atanh();
        2.0 * PI * n - 2.0 * (d * (z0 + z).tanh()).atan()
    }
}

/// Signed curvature of a unit-speed curve.
pub fn signed_curvature(x: f64, y: f64, dx: f64, dy: f64, ddx: f64, ddy: f64) -> Result<f64> {
    let _ = x;
    let speed2 = (dx * dx + dy * dy) / (4.0 * y * y);
    if (speed2 - 1.0).abs() > UNIT_SPEED_TOLERANCE {
        return Err(Error::NotUnitSpeed(speed2));
    }
    Ok(signed_curvature_unchecked(y, dx, dy, ddx, ddy))
}

/// [`signed_curvature`] without the unit-speed precondition.
pub fn signed_curvature_unchecked(y: f64, dx: f64, dy: f64, ddx: f64, ddy: f64) -> f64 {
    (dx * ddy - ddx * dy) / (4.0 * y * y) + dx / y
}

/// Position, angle and first two derivatives of a curve at one arclength.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CurveSample {
    pub s: f64,
    pub x: f64,
    pub y: f64,
    pub mu: f64,
    pub dx: f64,
    pub dy: f64,
    pub ddx: f64,
    pub ddy: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
enum Trace {
    /// `x = 2r sin mu + a`, `y = r(k - 2cos mu)`; `r` carries the sign of `k - 2cos mu`.
    Circle { r: f64, a: f64, mu0: f64 },
    /// Fixed angle: `y = y0 exp(2 sin(mu) s)`.
    Line { x0: f64, y0: f64, mu: f64 },
}

/// Unit-speed curve of constant signed curvature `k`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ConstantCurvatureCurve {
    pub k: f64,
    trace: Trace,
}

impl ConstantCurvatureCurve {
    /// Curve through `start` with initial direction angle `dir`.
    pub fn from_initial(k: f64, start: HalfPlanePoint, dir: f64) -> Self {
        let w = k - 2.0 * dir.cos();
        let trace = if w.abs() <= TRACE_TOLERANCE * k.abs().max(1.0) {
            Trace::Line { x0: start.x, y0: start.y, mu: dir }
        } else {
            let r = start.y / w;
            Trace::Circle { r, a: start.x - 2.0 * r * dir.sin(), mu0: dir }
        };
        Self { k, trace }
    }

    pub fn class(&self) -> CircleClass {
        CircleClass::from_curvature(self.k)
    }

    pub fn shape(&self) -> EuclideanShape {
        match self.trace {
            Trace::Circle { r, a, .. } => EuclideanShape::Circle { center: (a, r * self.k), radius: 2.0 * r.abs() },
            Trace::Line { x0, y0, mu } => EuclideanShape::Line { point: (x0, y0), direction: (mu.cos(), mu.sin()) },
        }
    }

    /// Arclength after which the curve returns to its start, if closed.
    pub fn period(&self) -> Option<f64> {
        match (self.class(), self.trace) {
            (CircleClass::ClosedCircle, Trace::Circle { .. }) => {
                Some(2.0 * std::f64::consts::PI / (self.k * self.k - 4.0).sqrt())
            }
            _ => None,
        }
    }

    pub fn sample(&self, s: f64) -> CurveSample {
        let (x, y, mu, dmu) = match self.trace {
            Trace::Circle { r, a, mu0 } => {
                let mu = angle_flow(self.k, 1.0, mu0, s);
                let (sm, cm) = mu.sin_cos();
                (2.0 * r * sm + a, r * (self.k - 2.0 * cm), mu, self.k - 2.0 * cm)
            }
            Trace::Line { x0, y0, mu } => {
                let (sm, cm) = mu.sin_cos();
                let y = y0 * (2.0 * sm * s).exp();
                let x = if sm.abs() < 1e-15 { x0 + 2.0 * y0 * cm * s } else { x0 + cm / sm * (y - y0) };
                (x, y, mu, 0.0)
            }
        };
        let (sm, cm) = mu.sin_cos();
        let (dx, dy) = (2.0 * y * cm, 2.0 * y * sm);
        CurveSample {
            s,
            x,
            y,
            mu,
            dx,
            dy,
            ddx: 2.0 * dy * cm - 2.0 * y * sm * dmu,
            ddy: 2.0 * dy * sm + 2.0 * y * cm * dmu,
        }
    }

    pub fn point(&self, s: f64) -> HalfPlanePoint {
        let p = self.sample(s);
        HalfPlanePoint { x: p.x, y: p.y }
    }
}

/// Riemannian circle with curvature `k`, parameters `r > 0`, `a`, initial angle `mu0`.
///
/// For `|k| > 2` (and `|k| = 2` with `k - 2cos(mu0) != 0`) this is the Euclidean
/// circle `(x - a)^2 + (y - r|k|)^2 = 4r^2`. For `|k| < 2` the equidistant ray
/// through `(a, r)` with `cos(mu) = k/2` is returned; `k = 0` gives the vertical geodesic.
pub fn riemannian_circle(k: f64, r: f64, a: f64, mu0: f64) -> Result<ConstantCurvatureCurve> {
    if !(r > 0.0) || !r.is_finite() {
        return Err(Error::InvalidRadius(r));
    }
    let class = CircleClass::from_curvature(k);
    let on_line = matches!(class, CircleClass::Equidistant | CircleClass::Geodesic)
        || (class == CircleClass::Horocycle && (k.abs() - 2.0 * mu0.cos() * k.signum()).abs() <= TRACE_TOLERANCE);
    if on_line {
        let mu = if class == CircleClass::Horocycle {
            if k > 0.0 {
                0.0
            } else {
                std::f64::consts::PI
            }
        } else {
            (0.5 * k).clamp(-1.0, 1.0).acos()
        };
        return Ok(ConstantCurvatureCurve { k, trace: Trace::Line { x0: a, y0: r, mu } });
    }
    let r = if k < 0.0 { -r } else { r };
    Ok(ConstantCurvatureCurve { k, trace: Trace::Circle { r, a, mu0 } })
}

/// Projection of a contact magnetic trajectory: the curve of curvature `qbar`
/// through `init` with direction angle `dir`.
pub fn kahler_magnetic_project(qbar: f64, init: HalfPlanePoint, dir: f64) -> ConstantCurvatureCurve {
    ConstantCurvatureCurve::from_initial(qbar, init, dir)
}

/// Cayley transform `z -> (z - i)/(z + i)` onto the unit disk.
pub fn cayley_to_disk(p: &HalfPlanePoint) -> (f64, f64) {
    cayley_unchecked(p.x, p.y)
}

/// [`cayley_to_disk`] for any `y >= 0`; boundary points map to the unit circle.
pub fn cayley_unchecked(x: f64, y: f64) -> (f64, f64) {
    let den = x * x + (y + 1.0).powi(2);
    ((x * x + y * y - 1.0) / den, -2.0 * x / den)
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::{FRAC_PI_2, PI};

    fn fd_angle(k: f64, amp: f64, mu0: f64, s: f64) -> f64 {
        let h = 1e-5;
        (angle_flow(k, amp, mu0, s + h) - angle_flow(k, amp, mu0, s - h)) / (2.0 * h)
    }

    #[test]
    fn angle_flow_solves_its_ode_in_every_regime() {
        for &(k, amp) in &[(3.0, 1.0), (-3.0, 1.0), (1.0, 1.0), (-0.5, 0.7), (2.0, 1.0), (-2.0, 1.0), (0.0, 1.0)] {
            for &mu0 in &[0.0, 0.7, -2.5, PI, 4.0] {
                assert!((angle_flow(k, amp, mu0, 0.0) - mu0).abs() < 1e-12, "k={k} mu0={mu0}");
                for i in 0..40 {
                    let s = -3.0 + 0.15 * i as f64;
                    let mu = angle_flow(k, amp, mu0, s);
                    let res = fd_angle(k, amp, mu0, s) - (k - 2.0 * amp * mu.cos());
                    assert!(res.abs() < 1e-6, "k={k} amp={amp} mu0={mu0} s={s} res={res}");
                }
            }
        }
    }

    #[test]
    fn tan_rescale_is_continuous_across_poles() {
        let c = 0.3;
        let mut prev = tan_rescale(-4.0, c);
        for i in 1..=8000 {
            let psi = -4.0 + i as f64 * 1e-3;
            let v = tan_rescale(psi, c);
            assert!(v >= prev && v - prev < 0.01);
            prev = v;
        }
        assert!((tan_rescale(PI, c) - PI).abs() < 1e-15);
        assert!((tan_rescale(0.4, c) - (c * 0.4f64.tan()).atan()).abs() < 1e-15);
    }

    #[test]
    fn curvature_examples() {
        assert_eq!(signed_curvature(0.0, 1.0, 2.0, 0.0, 0.0, 0.0).unwrap(), 2.0);
        let s: f64 = 0.37;
        let y = (2.0 * s).exp();
        let k = signed_curvature(0.0, y, 0.0, 2.0 * y, 0.0, 4.0 * y).unwrap();
        assert_eq!(k, 0.0);
        // circle k = 3, r = 1 at mu = 0: x' = 2, y' = 0, x'' = 0, y'' = 2
        assert_eq!(signed_curvature(0.0, 1.0, 2.0, 0.0, 0.0, 2.0).unwrap(), 3.0);
        assert!(matches!(signed_curvature(0.0, 1.0, 1.0, 0.0, 0.0, 0.0), Err(Error::NotUnitSpeed(_))));
    }

    #[test]
    fn circle_k4_is_euclidean_circle() {
        let c = riemannian_circle(4.0, 1.0, 0.0, 0.0).unwrap();
        assert_eq!(c.class(), CircleClass::ClosedCircle);
        assert_eq!(c.shape(), EuclideanShape::Circle { center: (0.0, 4.0), radius: 2.0 });
        for i in 0..50 {
            let p = c.point(0.1 * i as f64);
            assert!((p.x * p.x + (p.y - 4.0).powi(2) - 4.0).abs() < 1e-12);
        }
    }

    #[test]
    fn circle_classes_by_k() {
        assert_eq!(riemannian_circle(2.0, 1.0, 0.0, 0.5).unwrap().class(), CircleClass::Horocycle);
        assert_eq!(riemannian_circle(0.0, 1.0, 0.0, 0.0).unwrap().class(), CircleClass::Geodesic);
        assert_eq!(riemannian_circle(1.0, 1.0, 0.0, 0.0).unwrap().class(), CircleClass::Equidistant);
        assert_eq!(riemannian_circle(1.0, 0.0, 0.0, 0.0), Err(Error::InvalidRadius(0.0)));
        let g = riemannian_circle(0.0, 1.0, 0.5, 0.0).unwrap();
        let p = g.point(1.3);
        assert!((p.x - 0.5).abs() < 1e-15 && (p.y - 2.6f64.exp()).abs() < 1e-12);
    }

    #[test]
    fn horocycle_with_zero_angle_is_horizontal_line() {
        let h = riemannian_circle(2.0, 1.5, 0.0, 0.0).unwrap();
        let p = h.point(2.0);
        assert_eq!((p.x, p.y), (6.0, 1.5));
    }

    #[test]
    fn circles_have_constant_curvature() {
        for &k in &[-3.5, -2.0, -1.2, 0.0, 0.5, 2.0, 2.5, 4.0] {
            for &mu0 in &[0.0, 1.0, -2.0] {
                let c = riemannian_circle(k, 0.8, 0.3, mu0).unwrap();
                for i in 0..30 {
                    let p = c.sample(-1.0 + 0.1 * i as f64);
                    let kk = signed_curvature(p.x, p.y, p.dx, p.dy, p.ddx, p.ddy).unwrap();
                    assert!((kk - k).abs() < 1e-9, "k={k} mu0={mu0} got {kk}");
                    assert!(p.y > 0.0);
                }
            }
        }
    }

    #[test]
    fn closed_circle_returns_after_period() {
        let c = riemannian_circle(3.0, 1.0, 0.0, 0.0).unwrap();
        let t = c.period().unwrap();
        assert!((t - 2.0 * PI / 5f64.sqrt()).abs() < 1e-15);
        assert!(c.point(0.0).euclidean_distance(&c.point(t)) < 1e-12);
        assert!(c.point(0.0).euclidean_distance(&c.point(0.5 * t)) > 1.0);
    }

    #[test]
    fn projection_through_initial_point() {
        let init = HalfPlanePoint::new(0.0, 1.0).unwrap();
        let g = kahler_magnetic_project(0.0, init, FRAC_PI_2);
        assert_eq!(g.class(), CircleClass::Geodesic);
        let h = kahler_magnetic_project(2.0, init, 0.0);
        assert_eq!(h.class(), CircleClass::Horocycle);
        assert!((h.point(1.0).y - 1.0).abs() < 1e-15);
        let c = kahler_magnetic_project(3.0, init, 0.7);
        assert!(c.point(0.0).euclidean_distance(&init) < 1e-15);
        assert!((c.period().unwrap() - 2.0 * PI / 5f64.sqrt()).abs() < 1e-15);
        let neg = kahler_magnetic_project(-3.0, init, 0.7);
        assert!(neg.point(0.0).euclidean_distance(&init) < 1e-15);
        assert!(neg.point(0.0).euclidean_distance(&neg.point(neg.period().unwrap())) < 1e-12);
    }

    #[test]
    fn cayley_examples() {
        assert_eq!(cayley_to_disk(&HalfPlanePoint::new(0.0, 1.0).unwrap()), (0.0, 0.0));
        let (u, v) = cayley_to_disk(&HalfPlanePoint::new(1.0, 1.0).unwrap());
        assert!((u - 0.2).abs() < 1e-15 && (v + 0.4).abs() < 1e-15);
        for &x in &[-3.0, 0.0, 0.5, 10.0] {
            let (u, v) = cayley_unchecked(x, 0.0);
            assert!((u.hypot(v) - 1.0).abs() < 1e-15);
        }
    }

    fn circumcircle(p: [(f64, f64); 3]) -> ((f64, f64), f64) {
        let [(ax, ay), (bx, by), (cx, cy)] = p;
        let d = 2.0 * (ax * (by - cy) + bx * (cy - ay) + cx * (ay - by));
        let a2 = ax * ax + ay * ay;
        let b2 = bx * bx + by * by;
        let c2 = cx * cx + cy * cy;
        let ux = (a2 * (by - cy) + b2 * (cy - ay) + c2 * (ay - by)) / d;
        let uy = (a2 * (cx - bx) + b2 * (ax - cx) + c2 * (bx - ax)) / d;
        ((ux, uy), (ax - ux).hypot(ay - uy))
    }

    #[test]
    fn horocycle_maps_to_circle_tangent_to_boundary() {
        let h = riemannian_circle(2.0, 0.7, 0.4, 1.0).unwrap();
        let img = |s: f64| {
            let p = h.point(s);
            cayley_to_disk(&p)
        };
        let (center, radius) = circumcircle([img(0.0), img(0.5), img(-0.8)]);
        assert!((center.0.hypot(center.1) + radius - 1.0).abs() < 1e-12);
        // the tangency point is the image of the base point (a, 0)
        let (u, v) = cayley_unchecked(0.4, 0.0);
        assert!(((u - center.0).hypot(v - center.1) - radius).abs() < 1e-12);
    }
}
