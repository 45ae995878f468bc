//! Hopf tubes: preimages of base curves under the projection to the half-plane.
//!
//! The tube over a unit-speed base curve `beta` is `F(t, u) = lift(u) k(t)`, which
//! in Iwasawa coordinates is `(x(u), y(u), theta_lift(u) + t)`. The horizontal lift
//! solves `theta' = -x'/(2y)`.

use serde::{Deserialize, Serialize};

use crate::geometry::{coord_to_frame, nabla_constant, phi_frame, FrameVector};
use crate::hyperbolic::{CircleClass, ConstantCurvatureCurve, CurveSample};
use crate::lie::IwasawaCoord;
use crate::numdiff::{self, CoordJet, DEFAULT_STEP};
use crate::trajectory::ClosedFormTrajectory;

/// Unit-speed curve in the half-plane with a known horizontal lift.
pub trait BaseCurve {
    fn sample(&self, u: f64) -> CurveSample;
    fn curvature(&self, u: f64) -> f64;
    /// `-int_0^u x'/(2y)`.
    fn lift_angle(&self, u: f64) -> f64;
}

impl BaseCurve for ConstantCurvatureCurve {
    fn sample(&self, u: f64) -> CurveSample {
        ConstantCurvatureCurve::sample(self, u)
    }

    fn curvature(&self, _u: f64) -> f64 {
        self.k
    }

    fn lift_angle(&self, u: f64) -> f64 {
        // x' = 2y cos(mu) and mu' = k - 2cos(mu), so -x'/(2y) = (mu' - k)/2
        let mu0 = ConstantCurvatureCurve::sample(self, 0.0).mu;
        0.5 * (ConstantCurvatureCurve::sample(self, u).mu - mu0) - 0.5 * self.k * u
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum CmcTube {
    /// `kappa = 0`: minimal tube over a geodesic.
    MinimalOverGeodesic,
    /// `0 < kappa^2 < 4`: tube over an equidistant curve.
    OverEquidistant,
    /// `kappa^2 = 4`.
    OverHorocycle,
    /// `kappa^2 > 4`: embedded Hopf torus over a closed circle.
    HopfTorus,
}

pub fn classify_cmc_tube(kappa: f64) -> CmcTube {
    match CircleClass::from_curvature(kappa) {
        CircleClass::Geodesic => CmcTube::MinimalOverGeodesic,
        CircleClass::Equidistant => CmcTube::OverEquidistant,
        CircleClass::Horocycle => CmcTube::OverHorocycle,
        CircleClass::ClosedCircle => CmcTube::HopfTorus,
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct HopfTube<B> {
    pub base: B,
    pub theta0: f64,
}

/// Second fundamental form with respect to `N = phi T`, `T` the horizontal unit tangent.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SecondFundamentalForm {
    pub h_tt: f64,
    pub h_txi: f64,
    pub h_xixi: f64,
}

impl<B: BaseCurve> HopfTube<B> {
    pub fn new(base: B, theta0: f64) -> Self {
        Self { base, theta0 }
    }

    /// Horizontal lift of the base curve, in Iwasawa coordinates.
    pub fn horizontal_lift(&self, u: f64) -> [f64; 3] {
        let p = self.base.sample(u);
        [p.x, p.y, self.theta0 + self.base.lift_angle(u)]
    }

    /// `F(t, u)`.
    pub fn point(&self, t: f64, u: f64) -> [f64; 3] {
        let [x, y, theta] = self.horizontal_lift(u);
        [x, y, theta + t]
    }

    pub fn mean_curvature(&self, u: f64) -> f64 {
        0.5 * self.base.curvature(u)
    }

    pub fn classify(&self, u: f64) -> CmcTube {
        classify_cmc_tube(self.base.curvature(u))
    }

    /// Horizontal unit tangent `T` at parameter `u`, in the frame.
    pub fn horizontal_tangent(&self, u: f64) -> FrameVector {
        let (s, c) = self.base.sample(u).mu.sin_cos();
        FrameVector::new(c, s, 0.0)
    }

    /// `|eta(lift')|` by finite differences.
    pub fn lift_contact_residual(&self, u: f64) -> f64 {
        CoordJet::from_curve(|v| self.horizontal_lift(v), u, DEFAULT_STEP).velocity().eta().abs()
    }

    /// Frame components of `d_u F` and `d_t F` by finite differences.
    fn partials(&self, t: f64, u: f64) -> (FrameVector, FrameVector) {
        let du = CoordJet::from_curve(|v| self.point(t, v), u, DEFAULT_STEP).velocity();
        let dt = CoordJet::from_curve(|v| self.point(v, u), t, DEFAULT_STEP).velocity();
        (du, dt)
    }

    /// `h(A, B) = g(nabla_A B, N)` with `nabla_A B` from nested differences plus the connection table.
    pub fn second_fundamental_form(&self, t: f64, u: f64) -> SecondFundamentalForm {
        let h = DEFAULT_STEP;
        let n = phi_frame(&self.horizontal_tangent(u));
        let (du, dt) = self.partials(t, u);
        let along_u = |f: &dyn Fn(f64, f64) -> FrameVector| -> FrameVector {
            let pts = [-2.0, -1.0, 1.0, 2.0].map(|o| f(t, u + o * h));
            (pts[0] - 8.0 * pts[1] + 8.0 * pts[2] - pts[3]) * (1.0 / (12.0 * h))
        };
        let along_t = |f: &dyn Fn(f64, f64) -> FrameVector| -> FrameVector {
            let pts = [-2.0, -1.0, 1.0, 2.0].map(|o| f(t + o * h, u));
            (pts[0] - 8.0 * pts[1] + 8.0 * pts[2] - pts[3]) * (1.0 / (12.0 * h))
        };
        let u_field = |t: f64, u: f64| self.partials(t, u).0;
        let t_field = |t: f64, u: f64| self.partials(t, u).1;
        let nabla_uu = along_u(&u_field) + nabla_constant(&du, &du);
        let nabla_ut = along_u(&t_field) + nabla_constant(&du, &dt);
        let nabla_tt = along_t(&t_field) + nabla_constant(&dt, &dt);
        SecondFundamentalForm { h_tt: nabla_uu.dot(&n), h_txi: nabla_ut.dot(&n), h_xixi: nabla_tt.dot(&n) }
    }

    /// Induced metric `(E, F, G)` in the chart `(u, v) -> (x(u), y(u), v)`.
    pub fn chart_metric(&self, u: f64, v: f64) -> (f64, f64, f64) {
        let p = self.base.sample(u);
        let base = IwasawaCoord { x: p.x, y: p.y, theta: v };
        let xs = numdiff::stencil(|w| self.base.sample(w).x, u, DEFAULT_STEP);
        let ys = numdiff::stencil(|w| self.base.sample(w).y, u, DEFAULT_STEP);
        let fu = coord_to_frame(&base, numdiff::first(&xs, DEFAULT_STEP), numdiff::first(&ys, DEFAULT_STEP), 0.0)
            .expect("base curve has y > 0");
        let fv = FrameVector::XI;
        (fu.dot(&fu), fu.dot(&fv), fv.dot(&fv))
    }

    /// Gauss curvature of the induced metric in the chart of [`Self::chart_metric`].
    pub fn gauss_curvature(&self, u: f64, v: f64) -> f64 {
        brioschi(|a, b| self.chart_metric(a, b), u, v, 1e-2)
    }
}

/// Gauss curvature of a metric `(E, F, G)(u, v)` by the Brioschi formula, with
/// the partial derivatives taken by five-point differences of step `h`.
pub fn brioschi<M: Fn(f64, f64) -> (f64, f64, f64)>(metric: M, u: f64, v: f64, h: f64) -> f64 {
    let comp = |i: usize, a: f64, b: f64| {
        let m = metric(a, b);
        [m.0, m.1, m.2][i]
    };
    let du = |i: usize, a: f64, b: f64| numdiff::derivative(|w| comp(i, w, b), a, h);
    let dv = |i: usize, a: f64, b: f64| numdiff::derivative(|w| comp(i, a, w), b, h);
    let (e, f, g) = metric(u, v);
    let (e_u, e_v) = (du(0, u, v), dv(0, u, v));
    let (f_u, f_v) = (du(1, u, v), dv(1, u, v));
    let (g_u, g_v) = (du(2, u, v), dv(2, u, v));
    let e_vv = numdiff::second_derivative(|w| comp(0, u, w), v, h);
    let g_uu = numdiff::second_derivative(|w| comp(2, w, v), u, h);
    let f_uv = numdiff::derivative(|w| dv(1, w, v), u, h);
    let det3 = |m: [[f64; 3]; 3]| {
        m[0][0] * (m[1][1] * m[2][2] - m[1][2] * m[2][1]) - m[0][1] * (m[1][0] * m[2][2] - m[1][2] * m[2][0])
            + m[0][2] * (m[1][0] * m[2][1] - m[1][1] * m[2][0])
    };
    let m1 =
        [[-0.5 * e_vv + f_uv - 0.5 * g_uu, 0.5 * e_u, f_u - 0.5 * e_v], [f_v - 0.5 * g_u, e, f], [0.5 * g_v, f, g]];
    let m2 = [[0.0, 0.5 * e_v, 0.5 * g_u], [0.5 * e_v, e, f], [0.5 * g_u, f, g]];
    let w = e * g - f * f;
    (det3(m1) - det3(m2)) / (w * w)
}

/// Decomposition of `nabla_{g'} g'` along a Hopf tube.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TubeResidual {
    /// Largest component along the tube (`T` and `xi`).
    pub max_tangential: f64,
    /// Largest `|g(nabla_{g'} g', N) - expected|`.
    pub max_normal_defect: f64,
    pub samples: usize,
}

fn split(acc: &FrameVector, tangent: &FrameVector) -> (f64, f64) {
    let tangential = acc.dot(tangent).abs().max(acc.dot(&FrameVector::XI).abs());
    (tangential, acc.dot(&phi_frame(tangent)))
}

fn grid(s_span: f64, samples: usize) -> impl Iterator<Item = f64> {
    let n = samples.max(2);
    (0..n).map(move |i| s_span * i as f64 / (n - 1) as f64)
}

/// Checks that a magnetic trajectory is a geodesic of the tube over its projection.
/// The normal part is compared with `q sin(sigma)`.
pub fn tube_geodesic_residual(traj: &ClosedFormTrajectory, s_span: f64, samples: usize) -> TubeResidual {
    let expected = traj.params.q * traj.params.sin_sigma();
    let curve = |s: f64| {
        let st = traj.state(s);
        [st.x, st.y, st.theta]
    };
    let mut out = TubeResidual { max_tangential: 0.0, max_normal_defect: 0.0, samples: samples.max(2) };
    for s in grid(s_span, samples) {
        let jet = CoordJet::from_curve(curve, s, DEFAULT_STEP);
        let v = jet.velocity();
        let horizontal = FrameVector::new(v.v1, v.v2, 0.0);
        let n = horizontal.norm();
        let tangent = if n < 1e-12 { FrameVector::new(1.0, 0.0, 0.0) } else { horizontal * (1.0 / n) };
        let acc = jet.acceleration();
        let (tangential, normal) = split(&acc, &tangent);
        let normal_defect = if n < 1e-12 { acc.norm() } else { (normal - expected).abs() };
        out.max_tangential = out.max_tangential.max(tangential);
        out.max_normal_defect = out.max_normal_defect.max(normal_defect);
    }
    out
}

/// Tangential residual of the curve `s -> F(t(s), u(s))` on a tube; the normal
/// part is reported against zero.
pub fn tube_path_residual<B: BaseCurve, P: Fn(f64) -> (f64, f64)>(
    tube: &HopfTube<B>,
    path: P,
    s_span: f64,
    samples: usize,
) -> TubeResidual {
    let curve = |s: f64| {
        let (t, u) = path(s);
        tube.point(t, u)
    };
    let mut out = TubeResidual { max_tangential: 0.0, max_normal_defect: 0.0, samples: samples.max(2) };
    for s in grid(s_span, samples) {
        let jet = CoordJet::from_curve(curve, s, DEFAULT_STEP);
        let (tangential, normal) = split(&jet.acceleration(), &tube.horizontal_tangent(path(s).1));
        out.max_tangential = out.max_tangential.max(tangential);
        out.max_normal_defect = out.max_normal_defect.max(normal.abs());
    }
    out
}
