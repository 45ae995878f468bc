//! Closed-form contact magnetic trajectories.
//!
//! A unit-speed trajectory with strength `q` and contact angle `sigma` has
//! frame velocity `(sin(sigma) cos U, sin(sigma) sin U, cos(sigma))`, where the
//! phase `U` obeys `U' = qbar - 2 sin(sigma) cos U` with `qbar = q - 2cos(sigma)`.

use std::f64::consts::{FRAC_PI_2, PI};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geometry::FrameVector;
use crate::hyperbolic::{angle_flow, signed_curvature_unchecked, tan_rescale};

/// Tolerance on `|qbar -+ 2 sin(sigma)|` for the two degenerate phase cases.
pub const CASE_TOLERANCE: f64 = 1e-10;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MagneticParams {
    pub q: f64,
    pub sigma: f64,
}

impl MagneticParams {
    pub fn new(q: f64, sigma: f64) -> Result<Self> {
        if !(0.0..=PI).contains(&sigma) || !q.is_finite() {
            return Err(Error::InvalidContactAngle(sigma));
        }
        Ok(Self { q, sigma })
    }

    /// Effective strength `q - 2cos(sigma)` of the projected curve.
    pub fn qbar(&self) -> f64 {
        self.q - 2.0 * self.sigma.cos()
    }

    pub fn sin_sigma(&self) -> f64 {
        self.sigma.sin()
    }

    pub fn cos_sigma(&self) -> f64 {
        self.sigma.cos()
    }

    /// `qbar^2 - 4 sin^2(sigma)`.
    pub fn discriminant(&self) -> f64 {
        let (qb, s) = (self.qbar(), self.sin_sigma());
        (qb - 2.0 * s) * (qb + 2.0 * s)
    }

    /// Trajectories with `sigma` in `{0, pi}` are fibres of the Hopf map.
    pub fn is_reeb(&self) -> bool {
        self.sin_sigma().abs() < 1e-15
    }

    /// Phase case, or `None` for Reeb parameters.
    pub fn phase_case(&self) -> Option<PhaseCase> {
        if self.is_reeb() {
            return None;
        }
        let (qb, s) = (self.qbar(), self.sin_sigma());
        let tol = CASE_TOLERANCE * qb.abs().max(1.0);
        Some(if (qb + 2.0 * s).abs() <= tol {
            PhaseCase::Case1
        } else if (qb - 2.0 * s).abs() <= tol {
            PhaseCase::Case2
        } else if qb.abs() > 2.0 * s {
            PhaseCase::Case3
        } else {
            PhaseCase::Case4
        })
    }

    /// Signed curvature `qbar / sin(sigma)` of the projection.
    pub fn projection_curvature(&self) -> f64 {
        self.qbar() / self.sin_sigma()
    }
}

/// Regimes of the phase equation.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum PhaseCase {
    /// `qbar = -2 sin(sigma)`.
    Case1,
    /// `qbar = 2 sin(sigma)`.
    Case2,
    /// `qbar^2 > 4 sin^2(sigma)`: `U` rotates with period `2pi/sqrt(qbar^2 - 4sin^2)`.
    Case3,
    /// `qbar^2 < 4 sin^2(sigma)`: `U` tends to an equilibrium.
    Case4,
}

impl PhaseCase {
    pub fn id(&self) -> u8 {
        match self {
            PhaseCase::Case1 => 1,
            PhaseCase::Case2 => 2,
            PhaseCase::Case3 => 3,
            PhaseCase::Case4 => 4,
        }
    }

    /// Initial phase used by [`phase_solution`].
    pub fn initial_phase(&self) -> f64 {
        match self {
            PhaseCase::Case2 => FRAC_PI_2,
            _ => 0.0,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TrajectoryState {
    pub x: f64,
    pub y: f64,
    /// Unwrapped fibre coordinate.
    pub theta: f64,
    pub u: f64,
    pub s: f64,
}

impl TrajectoryState {
    /// Frame velocity `(sin(sigma) cos U, sin(sigma) sin U, cos(sigma))`.
    pub fn velocity(&self, params: &MagneticParams) -> FrameVector {
        let s = params.sin_sigma();
        FrameVector::new(s * self.u.cos(), s * self.u.sin(), params.cos_sigma())
    }

    /// Coordinate velocity `(x', y', theta')`.
    pub fn coordinate_velocity(&self, params: &MagneticParams) -> (f64, f64, f64) {
        let (su, cu) = self.u.sin_cos();
        let s = params.sin_sigma();
        (2.0 * self.y * s * cu, 2.0 * self.y * s * su, params.cos_sigma() - s * cu)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ReconstructionParams {
    pub rbar: f64,
    pub x0: f64,
    pub theta0: f64,
}

impl ReconstructionParams {
    pub fn new(rbar: f64, x0: f64, theta0: f64) -> Result<Self> {
        if rbar == 0.0 || !rbar.is_finite() {
            return Err(Error::InvalidRadius(rbar));
        }
        Ok(Self { rbar, x0, theta0 })
    }
}

/// Derivative of `(x, y, theta, U)`.
pub fn lorentz_rhs(state: &TrajectoryState, params: &MagneticParams) -> Result<[f64; 4]> {
    if !(state.y > 0.0) {
        return Err(Error::NonpositiveY(state.y));
    }
    let (dx, dy, dtheta) = state.coordinate_velocity(params);
    let du = params.qbar() - 2.0 * params.sin_sigma() * state.u.cos();
    Ok([dx, dy, dtheta, du])
}

/// Closed-form phase for the selected case with the case's standard initial phase.
pub fn phase_solution(params: &MagneticParams, case: PhaseCase, s: f64) -> Result<f64> {
    let actual = params.phase_case();
    if actual != Some(case) {
        return Err(Error::CaseMismatch { requested: case, actual: actual.unwrap_or(case) });
    }
    let (qb, sn) = (params.qbar(), params.sin_sigma());
    Ok(match case {
        PhaseCase::Case1 => -2.0 * (2.0 * s * sn).atan(),
        // pole-free form of 2 atan(1/(1 - 2s sin))
        PhaseCase::Case2 => PI - 2.0 * (1.0 - 2.0 * s * sn).atan(),
        PhaseCase::Case3 => {
            let omega = params.discriminant().sqrt();
            let c = ((qb - 2.0 * sn) / (qb + 2.0 * sn)).sqrt();
            2.0 * tan_rescale(qb.signum() * 0.5 * omega * s, c)
        }
        PhaseCase::Case4 => {
            let omega = (-params.discriminant()).sqrt();
            let d = ((2.0 * sn - qb) / (2.0 * sn + qb)).sqrt();
            -2.0 * (d * (0.5 * omega * s).tanh()).atan()
        }
    })
}

/// Sign `rbar` must carry for `y > 0` along the standard-phase solution of a case.
pub fn required_rbar_sign(params: &MagneticParams) -> f64 {
    match params.phase_case() {
        Some(PhaseCase::Case2) => 1.0,
        Some(PhaseCase::Case3) if params.qbar() > 0.0 => 1.0,
        _ => -1.0,
    }
}

/// Trajectory from the standard phase of its case and reconstruction constants.
pub fn reconstruct_curve(params: &MagneticParams, recon: &ReconstructionParams, s: f64) -> Result<TrajectoryState> {
    let case = params.phase_case().ok_or(Error::InvalidContactAngle(params.sigma))?;
    let u = phase_solution(params, case, s)?;
    let state = reconstruct_from_phase(params, recon, u, s);
    if !(state.y > 0.0) {
        return Err(Error::NonpositiveYReached);
    }
    Ok(state)
}

fn reconstruct_from_phase(params: &MagneticParams, recon: &ReconstructionParams, u: f64, s: f64) -> TrajectoryState {
    let (qb, sn) = (params.qbar(), params.sin_sigma());
    let (su, cu) = u.sin_cos();
    TrajectoryState {
        x: 2.0 * recon.rbar * sn * su + recon.x0,
        y: recon.rbar * (qb - 2.0 * sn * cu),
        theta: (params.cos_sigma() - 0.5 * qb) * s + 0.5 * u + recon.theta0,
        u,
        s,
    }
}

/// Legendre trajectory (`sigma = pi/2`) with closed projection, `|q| > 2`.
///
/// `(x, y) = (r sin(mu) + x0, r(|q|/2 - cos(mu)))`, `theta = mu/2 - |q|s/2 + theta0`
/// with `mu' = |q| - 2cos(mu)`, `mu(0) = 0`. Negative `q` is obtained through the
/// orientation-reversing isometry `(x, theta) -> (2x0 - x, 2theta0 - theta)`.
pub fn legendre_trajectory(q: f64, r: f64, x0: f64, theta0: f64, s: f64) -> Result<TrajectoryState> {
    if !(q.abs() > 2.0) {
        return Err(Error::StrengthTooSmall(q));
    }
    if !(r > 0.0) {
        return Err(Error::InvalidRadius(r));
    }
    let aq = q.abs();
    let mu = legendre_angle(aq, s);
    let dx = r * mu.sin();
    let dtheta = 0.5 * mu - 0.5 * aq * s;
    let sign = q.signum();
    Ok(TrajectoryState {
        x: x0 + sign * dx,
        y: r * (0.5 * aq - mu.cos()),
        theta: theta0 + sign * dtheta,
        u: if sign > 0.0 { mu } else { PI - mu },
        s,
    })
}

/// Continuous solution of `mu' = |q| - 2cos(mu)`, `mu(0) = 0`.
pub fn legendre_angle(abs_q: f64, s: f64) -> f64 {
    let omega = (abs_q * abs_q - 4.0).sqrt();
    let c = ((abs_q - 2.0) / (abs_q + 2.0)).sqrt();
    2.0 * tan_rescale(0.5 * omega * s, c)
}

/// Fibre through `(x0, y0, theta0)` traversed along `sign * xi`.
pub fn reeb_trajectory(x0: f64, y0: f64, theta0: f64, sign: f64, s: f64) -> TrajectoryState {
    TrajectoryState { x: x0, y: y0, theta: theta0 + sign.signum() * s, u: 0.0, s }
}

/// Coordinate derivatives of a trajectory at one arclength.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TrajectoryJet {
    pub state: TrajectoryState,
    pub dx: f64,
    pub dy: f64,
    pub dtheta: f64,
    pub ddx: f64,
    pub ddy: f64,
    pub du: f64,
}

impl TrajectoryJet {
    /// Signed curvature of the projection, reparametrised by its own arclength.
    pub fn projection_curvature(&self, sin_sigma: f64) -> f64 {
        let (a, b) = (1.0 / sin_sigma, 1.0 / (sin_sigma * sin_sigma));
        signed_curvature_unchecked(self.state.y, self.dx * a, self.dy * a, self.ddx * b, self.ddy * b)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
enum Orbit {
    /// `theta' = cos(sigma)`, `(x, y)` fixed.
    Fibre,
    /// Phase at equilibrium: the projection is a ray of fixed direction.
    Equilibrium,
    Generic(ReconstructionParams),
}

/// Closed-form trajectory through an arbitrary initial state.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ClosedFormTrajectory {
    pub params: MagneticParams,
    pub initial: TrajectoryState,
    orbit: Orbit,
}

impl ClosedFormTrajectory {
    /// `initial.s` is taken as the arclength origin.
    pub fn new(params: MagneticParams, initial: TrajectoryState) -> Result<Self> {
        if !(initial.y > 0.0) {
            return Err(Error::NonpositiveY(initial.y));
        }
        let (qb, sn) = (params.qbar(), params.sin_sigma());
        let w = qb - 2.0 * sn * initial.u.cos();
        let orbit = if params.is_reeb() {
            Orbit::Fibre
        } else if w.abs() <= 1e-14 * qb.abs().max(1.0) {
            Orbit::Equilibrium
        } else {
            let rbar = initial.y / w;
            Orbit::Generic(ReconstructionParams {
                rbar,
                x0: initial.x - 2.0 * rbar * sn * initial.u.sin(),
                theta0: initial.theta - 0.5 * initial.u,
            })
        };
        Ok(Self { params, initial, orbit })
    }

    /// Standard trajectory of a case: standard initial phase through `(x0, y0, theta0)`.
    pub fn standard(params: MagneticParams, x0: f64, y0: f64, theta0: f64) -> Result<Self> {
        let u = params.phase_case().map_or(0.0, |c| c.initial_phase());
        Self::new(params, TrajectoryState { x: x0, y: y0, theta: theta0, u, s: 0.0 })
    }

    pub fn phase_case(&self) -> Option<PhaseCase> {
        self.params.phase_case()
    }

    pub fn state(&self, s: f64) -> TrajectoryState {
        self.jet(s).state
    }

    pub fn jet(&self, s: f64) -> TrajectoryJet {
        let p = &self.params;
        let (qb, sn, cs) = (p.qbar(), p.sin_sigma(), p.cos_sigma());
        let ds = s - self.initial.s;
        let i = &self.initial;
        let state = match self.orbit {
            Orbit::Fibre => TrajectoryState { x: i.x, y: i.y, theta: i.theta + cs * ds, u: i.u, s },
            Orbit::Equilibrium => {
                let (su, cu) = i.u.sin_cos();
                let y = i.y * (2.0 * sn * su * ds).exp();
                let x =
                    if (sn * su).abs() < 1e-15 { i.x + 2.0 * i.y * sn * cu * ds } else { i.x + cu / su * (y - i.y) };
                TrajectoryState { x, y, theta: i.theta + (cs - sn * cu) * ds, u: i.u, s }
            }
            Orbit::Generic(recon) => {
                let u = angle_flow(qb, sn, i.u, ds);
                let mut st = reconstruct_from_phase(p, &recon, u, ds);
                st.s = s;
                st
            }
        };
        let (su, cu) = state.u.sin_cos();
        let du = match self.orbit {
            Orbit::Generic(_) => qb - 2.0 * sn * cu,
            _ => 0.0,
        };
        let dx = 2.0 * state.y * sn * cu;
        let dy = 2.0 * state.y * sn * su;
        TrajectoryJet {
            state,
            dx,
            dy,
            dtheta: cs - sn * cu,
            ddx: 2.0 * dy * sn * cu - 2.0 * state.y * sn * su * du,
            ddy: 2.0 * dy * sn * su + 2.0 * state.y * sn * cu * du,
            du,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::{nabla_constant, phi_frame};

    fn params(q: f64, sigma: f64) -> MagneticParams {
        MagneticParams::new(q, sigma).unwrap()
    }

    /// Strengths realising each case at a given angle.
    fn case_strength(case: PhaseCase, sigma: f64) -> f64 {
        let (s, c) = sigma.sin_cos();
        match case {
            PhaseCase::Case1 => 2.0 * c - 2.0 * s,
            PhaseCase::Case2 => 2.0 * c + 2.0 * s,
            PhaseCase::Case3 => 2.0 * c + 3.0 * s,
            PhaseCase::Case4 => 2.0 * c + 0.5 * s,
        }
    }

    #[test]
    fn rejects_bad_angle() {
        assert_eq!(MagneticParams::new(1.0, -0.1), Err(Error::InvalidContactAngle(-0.1)));
        assert!(MagneticParams::new(1.0, 4.0).is_err());
    }

    #[test]
    fn rhs_examples() {
        let st = TrajectoryState { x: 0.0, y: 2.0, theta: 0.0, u: 0.3, s: 0.0 };
        let d = lorentz_rhs(&st, &params(1.5, 0.0)).unwrap();
        assert!(d[0].abs() < 1e-15 && d[1].abs() < 1e-15 && d[2] == 1.0);
        let st = TrajectoryState { u: FRAC_PI_2, ..st };
        let p = params(3.0, FRAC_PI_2);
        let d = lorentz_rhs(&st, &p).unwrap();
        assert!(d[0].abs() < 1e-15);
        assert!((d[1] - 4.0).abs() < 1e-15);
        assert!(d[2].abs() < 1e-15);
        assert!((d[3] - p.qbar()).abs() < 1e-15);
        let bad = TrajectoryState { y: 0.0, ..st };
        assert_eq!(lorentz_rhs(&bad, &p), Err(Error::NonpositiveY(0.0)));
    }

    #[test]
    fn case_detection() {
        for case in [PhaseCase::Case1, PhaseCase::Case2, PhaseCase::Case3, PhaseCase::Case4] {
            for &sigma in &[0.4, FRAC_PI_2, 2.5] {
                let p = params(case_strength(case, sigma), sigma);
                assert_eq!(p.phase_case(), Some(case), "{case:?} sigma={sigma}");
            }
        }
        assert_eq!(params(1.0, 0.0).phase_case(), None);
        let p = params(case_strength(PhaseCase::Case3, 1.0), 1.0);
        assert!(matches!(
            phase_solution(&p, PhaseCase::Case4, 1.0),
            Err(Error::CaseMismatch { requested: PhaseCase::Case4, actual: PhaseCase::Case3 })
        ));
    }

    #[test]
    fn phase_solutions_satisfy_phase_equation() {
        let cases = [PhaseCase::Case1, PhaseCase::Case2, PhaseCase::Case3, PhaseCase::Case4];
        for case in cases {
            for &sigma in &[0.3, 1.2, FRAC_PI_2, 2.7] {
                for &sign in &[1.0, -1.0] {
                    let q = if case == PhaseCase::Case3 && sign < 0.0 {
                        2.0 * sigma.cos() - 3.0 * sigma.sin()
                    } else {
                        case_strength(case, sigma)
                    };
                    let p = params(q, sigma);
                    assert_eq!(p.phase_case(), Some(case));
                    let u0 = phase_solution(&p, case, 0.0).unwrap();
                    assert!((u0 - case.initial_phase()).abs() < 1e-15);
                    let h = 1e-5;
                    for i in 0..60 {
                        let s = -4.0 + 0.15 * i as f64;
                        let u = phase_solution(&p, case, s).unwrap();
                        let du = (phase_solution(&p, case, s + h).unwrap() - phase_solution(&p, case, s - h).unwrap())
                            / (2.0 * h);
                        let res = du + 2.0 * sigma.sin() * u.cos() - p.qbar();
                        assert!(res.abs() < 1e-7, "{case:?} sigma={sigma} s={s} res={res}");
                    }
                }
            }
        }
    }

    #[test]
    fn case_formulas_match_literal_expressions() {
        let sigma: f64 = 1.1;
        let sn = sigma.sin();
        let p = params(case_strength(PhaseCase::Case1, sigma), sigma);
        let s = 0.8;
        assert!((phase_solution(&p, PhaseCase::Case1, s).unwrap() + 2.0 * (2.0 * s * sn).atan()).abs() < 1e-15);
        let p = params(case_strength(PhaseCase::Case2, sigma), sigma);
        let s = 0.2; // before the pole at s = 1/(2 sin)
        let lit = 2.0 * (1.0 / (1.0 - 2.0 * s * sn)).atan();
        assert!((phase_solution(&p, PhaseCase::Case2, s).unwrap() - lit).abs() < 1e-14);
        let p = params(case_strength(PhaseCase::Case3, sigma), sigma);
        let qb = p.qbar();
        let omega = (qb * qb - 4.0 * sn * sn).sqrt();
        let s = 0.3;
        let lit = 2.0 * (((qb - 2.0 * sn) / (qb + 2.0 * sn)).sqrt() * (s * omega / 2.0).tan()).atan();
        assert!((phase_solution(&p, PhaseCase::Case3, s).unwrap() - lit).abs() < 1e-14);
    }

    #[test]
    fn case4_tends_to_equilibrium() {
        let sigma: f64 = 0.9;
        let p = params(case_strength(PhaseCase::Case4, sigma), sigma);
        let far = phase_solution(&p, PhaseCase::Case4, 60.0).unwrap();
        let limit = (p.qbar() / (2.0 * sigma.sin())).acos();
        assert!((far + limit).abs() < 1e-12);
        let mut prev = 0.0;
        for i in 1..100 {
            let u = phase_solution(&p, PhaseCase::Case4, 0.1 * i as f64).unwrap();
            assert!(u < prev);
            prev = u;
        }
    }

    #[test]
    fn reconstruction_example_circle() {
        let p = params(3.0, FRAC_PI_2);
        let recon = ReconstructionParams::new(1.0, 0.0, 0.0).unwrap();
        let (mut lo, mut hi) = (f64::INFINITY, 0.0f64);
        for i in 0..400 {
            let st = reconstruct_curve(&p, &recon, 0.01 * i as f64).unwrap();
            lo = lo.min(st.y);
            hi = hi.max(st.y);
            assert!((st.x * st.x + (st.y - 3.0).powi(2) - 4.0).abs() < 1e-12);
        }
        assert!((lo - 1.0).abs() < 1e-3 && (hi - 5.0).abs() < 1e-3);
        let st = reconstruct_curve(&p, &ReconstructionParams::new(1.0, 0.5, 0.25).unwrap(), 0.0).unwrap();
        assert_eq!((st.x, st.y, st.theta), (0.5, 1.0, 0.25));
    }

    #[test]
    fn reconstruction_rejects_wrong_rbar_sign() {
        let p = params(3.0, FRAC_PI_2);
        let recon = ReconstructionParams::new(-1.0, 0.0, 0.0).unwrap();
        assert_eq!(reconstruct_curve(&p, &recon, 0.1), Err(Error::NonpositiveYReached));
        assert_eq!(required_rbar_sign(&p), 1.0);
        assert_eq!(ReconstructionParams::new(0.0, 0.0, 0.0), Err(Error::InvalidRadius(0.0)));
    }

    #[test]
    fn reconstruction_preserves_speed_and_contact_angle() {
        for case in [PhaseCase::Case1, PhaseCase::Case2, PhaseCase::Case3, PhaseCase::Case4] {
            let sigma: f64 = 1.3;
            let p = params(case_strength(case, sigma), sigma);
            let recon = ReconstructionParams::new(required_rbar_sign(&p) * 0.7, 0.1, 0.2).unwrap();
            let h = 1e-5;
            // Case 4 and Case 1 approach y = 0, where differencing loses accuracy
            for i in 0..8 {
                let s = 0.37 * i as f64;
                let a = reconstruct_curve(&p, &recon, s - h).unwrap();
                let b = reconstruct_curve(&p, &recon, s + h).unwrap();
                let m = reconstruct_curve(&p, &recon, s).unwrap();
                let (dx, dy, dt) = ((b.x - a.x) / (2.0 * h), (b.y - a.y) / (2.0 * h), (b.theta - a.theta) / (2.0 * h));
                let w = dx / (2.0 * m.y);
                let speed2 = w * w + (dy / (2.0 * m.y)).powi(2) + (dt + w).powi(2);
                assert!((speed2 - 1.0).abs() < 1e-8, "{case:?} s={s}");
                assert!((dt + w - sigma.cos()).abs() < 1e-8, "{case:?} s={s}");
            }
        }
    }

    #[test]
    fn projection_has_constant_curvature() {
        for case in [PhaseCase::Case1, PhaseCase::Case2, PhaseCase::Case3, PhaseCase::Case4] {
            let sigma: f64 = 0.8;
            let p = params(case_strength(case, sigma), sigma);
            let t = ClosedFormTrajectory::standard(p, 0.0, 1.0, 0.0).unwrap();
            for i in 0..30 {
                let k = t.jet(0.2 * i as f64).projection_curvature(sigma.sin());
                assert!((k - p.projection_curvature()).abs() < 1e-10, "{case:?}");
            }
        }
    }

    #[test]
    fn closed_form_satisfies_lorentz_equation_in_the_frame() {
        let p = params(1.7, 1.0);
        let init = TrajectoryState { x: 0.2, y: 1.3, theta: 0.4, u: 2.2, s: 0.0 };
        let t = ClosedFormTrajectory::new(p, init).unwrap();
        for i in 0..20 {
            let jet = t.jet(0.3 * i as f64);
            let v = jet.state.velocity(&p);
            let (su, cu) = jet.state.u.sin_cos();
            let sn = p.sin_sigma();
            let dv = FrameVector::new(-sn * su * jet.du, sn * cu * jet.du, 0.0);
            let acc = dv + nabla_constant(&v, &v);
            assert!((acc - phi_frame(&v) * p.q).max_abs() < 1e-13);
        }
        let st = t.state(0.0);
        assert!((st.x - 0.2).abs() < 1e-15 && (st.y - 1.3).abs() < 1e-15 && (st.theta - 0.4).abs() < 1e-15);
    }

    #[test]
    fn frenet_curvatures() {
        // kappa1 = |q| sin(sigma), kappa2 = |q cos(sigma) - 1|
        for &(q, sigma) in &[(1.7, 1.0), (-2.5, 0.6), (0.8, 2.2), (3.0, FRAC_PI_2)] {
            let p = params(q, sigma);
            let t = ClosedFormTrajectory::standard(p, 0.0, 1.0, 0.0).unwrap();
            let sn = p.sin_sigma();
            for i in 0..10 {
                let jet = t.jet(0.4 * i as f64);
                let v = jet.state.velocity(&p);
                let (su, cu) = jet.state.u.sin_cos();
                let dv = FrameVector::new(-sn * su * jet.du, sn * cu * jet.du, 0.0);
                let acc = dv + nabla_constant(&v, &v);
                let k1 = acc.norm();
                assert!((k1 - q.abs() * sn).abs() < 1e-12);
                let n = acc * (1.0 / k1);
                let dn = FrameVector::new(-cu * jet.du, -su * jet.du, 0.0) * q.signum();
                let tn = dn + nabla_constant(&v, &n) + v * k1;
                assert!((tn.norm() - (q * sigma.cos() - 1.0).abs()).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn legendre_examples() {
        let q = 3.0;
        let t = legendre_trajectory(q, 1.0, 0.0, 0.0, 0.0).unwrap();
        assert_eq!((t.x, t.y, t.theta), (0.0, 0.5, 0.0));
        let omega = (q * q - 4.0f64).sqrt();
        for i in 0..50 {
            let s = 0.13 * i as f64;
            let mu = legendre_angle(q, s);
            let lit = omega * (omega * s).sin() / (q + 2.0 * (omega * s).cos());
            assert!((mu.sin() - lit).abs() < 1e-13);
        }
        let period = 2.0 * PI / omega;
        let a = legendre_trajectory(q, 1.0, 0.0, 0.0, 0.3).unwrap();
        let b = legendre_trajectory(q, 1.0, 0.0, 0.0, 0.3 + period).unwrap();
        assert!((a.x - b.x).abs() < 1e-12 && (a.y - b.y).abs() < 1e-12);
        assert_eq!(legendre_trajectory(2.0, 1.0, 0.0, 0.0, 0.0), Err(Error::StrengthTooSmall(2.0)));
    }

    #[test]
    fn legendre_matches_generic_path() {
        for &q in &[3.0, -2.5] {
            let p = params(q, FRAC_PI_2);
            let r = 1.2;
            let leg0 = legendre_trajectory(q, r, 0.4, 0.1, 0.0).unwrap();
            let init = TrajectoryState { u: leg0.u, ..leg0 };
            let gen = ClosedFormTrajectory::new(p, init).unwrap();
            for i in 0..40 {
                let s = 0.21 * i as f64;
                let a = legendre_trajectory(q, r, 0.4, 0.1, s).unwrap();
                let b = gen.state(s);
                assert!((a.x - b.x).abs() < 1e-12 && (a.y - b.y).abs() < 1e-12, "q={q} s={s}");
                assert!((a.theta - b.theta).abs() < 1e-12, "q={q} s={s}");
            }
        }
    }

    #[test]
    fn legendre_is_horizontal() {
        let h = 1e-5;
        for i in 0..30 {
            let s = 0.2 * i as f64;
            let a = legendre_trajectory(-3.0, 1.0, 0.0, 0.0, s - h).unwrap();
            let b = legendre_trajectory(-3.0, 1.0, 0.0, 0.0, s + h).unwrap();
            let m = legendre_trajectory(-3.0, 1.0, 0.0, 0.0, s).unwrap();
            let eta = (b.theta - a.theta) / (2.0 * h) + (b.x - a.x) / (2.0 * h) / (2.0 * m.y);
            assert!(eta.abs() < 1e-9);
        }
    }

    #[test]
    fn reeb_examples() {
        let st = reeb_trajectory(1.0, 2.0, 0.5, 1.0, 0.0);
        assert_eq!((st.x, st.y, st.theta), (1.0, 2.0, 0.5));
        let st = reeb_trajectory(1.0, 2.0, 0.5, 1.0, 2.0 * PI);
        assert!((st.theta - 0.5 - 2.0 * PI).abs() < 1e-15);
        let t = ClosedFormTrajectory::standard(params(5.0, PI), 1.0, 2.0, 0.0).unwrap();
        assert_eq!(t.state(1.5).theta, -1.5);
        let v = t.state(0.0).velocity(&t.params);
        assert!((v.norm() - 1.0).abs() < 1e-15 && (v.eta() + 1.0).abs() < 1e-15);
    }

    #[test]
    fn equilibrium_phase_is_a_ray() {
        let sigma: f64 = 1.0;
        let p = params(case_strength(PhaseCase::Case4, sigma), sigma);
        let ustar = (p.qbar() / (2.0 * sigma.sin())).acos();
        let init = TrajectoryState { x: 0.0, y: 1.0, theta: 0.0, u: ustar, s: 0.0 };
        let t = ClosedFormTrajectory::new(p, init).unwrap();
        let jet = t.jet(0.7);
        assert!((jet.projection_curvature(sigma.sin()) - p.projection_curvature()).abs() < 1e-12);
    }
}
