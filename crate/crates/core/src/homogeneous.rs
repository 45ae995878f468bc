//! Trajectories that are one-parameter subgroups `exp(tX)`.
//!
//! For `X = aE1 + bE2 + cE3`, `U(X, X) = (2c(b - a), 2c(b - a), 2(a^2 - b^2))` and
//! `phi X = (-c/sqrt2, -c/sqrt2, (a + b)/sqrt2)`. Comparing the two gives the
//! magnetic criterion `a - b = q/(2sqrt2)` except on the Reeb line `c = 0, a = -b`,
//! where both sides vanish and every `q` works.

use std::f64::consts::{FRAC_1_SQRT_2, SQRT_2};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geometry::{phi_algebra, phi_frame, u_tensor};
use crate::hyperbolic::{CircleClass, EuclideanShape};
use crate::lie::{exp_algebra, iwasawa_decompose, AlgebraVector};
use crate::numdiff::{CoordJet, DEFAULT_STEP};
use crate::par::{self, Execution};

/// Tolerance for the linear criteria, relative to `|X|`.
pub const CRITERION_TOLERANCE: f64 = 1e-12;
/// Acceptance for the finite-difference Lorentz residual.
pub const RESIDUAL_TOLERANCE: f64 = 1e-7;

fn nonzero(x: &AlgebraVector) -> Result<f64> {
    let n = x.norm();
    if n == 0.0 || !n.is_finite() {
        return Err(Error::ZeroVector);
    }
    Ok(n)
}

/// `c = 0` and `a = -b`: `X` is a multiple of the Reeb direction.
fn on_reeb_line(x: &AlgebraVector, tol: f64) -> bool {
    x.c.abs() <= tol && (x.a + x.b).abs() <= tol
}

/// `exp(tX)` is a geodesic. Both closed forms are evaluated and must agree.
pub fn is_homogeneous_geodesic(x: &AlgebraVector) -> Result<bool> {
    let n = nonzero(x)?;
    let tol = CRITERION_TOLERANCE * n;
    let linear = (x.a - x.b).abs() <= tol || on_reeb_line(x, tol);
    let tensor = u_tensor(x, x).max_abs() <= CRITERION_TOLERANCE * n * n * 2.0;
    debug_assert_eq!(linear, tensor, "criteria disagree for {x:?}");
    Ok(linear)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
pub enum Convention {
    /// The curve `t -> exp(tX)` as parametrised.
    Raw,
    /// Reparametrised by arclength, i.e. `X` normalised first.
    #[default]
    UnitSpeed,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub enum HomogeneousStrength {
    /// Reeb line: magnetic for every strength.
    Any,
    Unique(f64),
}

/// Strength for which `exp(tX)` is a contact magnetic trajectory.
pub fn magnetic_strength(x: &AlgebraVector, convention: Convention) -> Result<HomogeneousStrength> {
    let n = nonzero(x)?;
    if on_reeb_line(x, CRITERION_TOLERANCE * n) {
        return Ok(HomogeneousStrength::Any);
    }
    let scale = match convention {
        Convention::Raw => 1.0,
        Convention::UnitSpeed => n,
    };
    Ok(HomogeneousStrength::Unique(2.0 * SQRT_2 * (x.a - x.b) / scale))
}

/// `exp(tX)` satisfies the Lorentz equation with strength `q`.
pub fn is_homogeneous_magnetic(x: &AlgebraVector, q: f64, convention: Convention) -> Result<bool> {
    let n = nonzero(x)?;
    Ok(match magnetic_strength(x, convention)? {
        HomogeneousStrength::Any => true,
        HomogeneousStrength::Unique(q0) => {
            let scale = match convention {
                Convention::Raw => n,
                Convention::UnitSpeed => 1.0,
            };
            (q - q0).abs() <= 2.0 * SQRT_2 * CRITERION_TOLERANCE * scale.max(1.0)
        }
    })
}

/// Contact angle of `exp(tX)`, in `[0, pi]`.
pub fn contact_angle(x: &AlgebraVector) -> Result<f64> {
    let n = nonzero(x)?;
    Ok(((x.a - x.b) * FRAC_1_SQRT_2 / n).clamp(-1.0, 1.0).acos())
}

/// Trace of `pi(exp(tX))` through `(0, 1)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ProjectionConic {
    pub shape: EuclideanShape,
    pub class: CircleClass,
    /// Signed curvature, for the orientation given by increasing `t`.
    pub curvature: f64,
}

/// Projection conic of `exp(tX)`.
pub fn project_exp_curve(x: &AlgebraVector) -> Result<ProjectionConic> {
    let n = nonzero(x)?;
    let (a, b, c) = (x.a, x.b, x.c);
    let horizontal = ((a + b) * (a + b) + 2.0 * c * c).sqrt();
    if horizontal <= CRITERION_TOLERANCE * n {
        return Err(Error::DegenerateProjection);
    }
    let curvature = 2.0 * (a - b) / horizontal;
    let shape = if b.abs() <= CRITERION_TOLERANCE * n {
        // sqrt2 c x - a (y - 1) = 0
        EuclideanShape::Line { point: (0.0, 1.0), direction: (a, SQRT_2 * c) }
    } else {
        EuclideanShape::Circle { center: (c / (b * SQRT_2), (b - a) / (2.0 * b)), radius: horizontal / (2.0 * b.abs()) }
    };
    Ok(ProjectionConic { shape, class: CircleClass::from_curvature(curvature), curvature })
}

/// Point of `pi(exp(tX))`.
pub fn projected_point(x: &AlgebraVector, t: f64) -> (f64, f64) {
    exp_algebra(x, t).act(0.0, 1.0)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ExpResidual {
    /// `max |nabla_{g'} g' - q phi g'|` over the samples.
    pub max_residual: f64,
    pub max_speed_error: f64,
    pub samples: usize,
}

impl ExpResidual {
    pub fn passed(&self, tol: f64) -> bool {
        self.max_residual < tol
    }
}

/// Finite-difference Lorentz residual of the arclength-parametrised `exp(tX)`
/// at `samples` equally spaced points of `[0, s_span]`.
pub fn exp_trajectory_check(x: &AlgebraVector, q: f64, s_span: f64, samples: usize) -> Result<ExpResidual> {
    let n = nonzero(x)?;
    let unit = *x * (1.0 / n);
    let curve = |s: f64| {
        let c = iwasawa_decompose(&exp_algebra(&unit, s)).expect("exp stays in SL2");
        [c.x, c.y, c.theta]
    };
    let count = samples.max(1);
    let mut report = ExpResidual { max_residual: 0.0, max_speed_error: 0.0, samples: count };
    for i in 0..count {
        let s = if count == 1 { 0.0 } else { s_span * i as f64 / (count - 1) as f64 };
        let jet = CoordJet::from_curve(curve, s, DEFAULT_STEP);
        let v = jet.velocity();
        let r = (jet.acceleration() - q * phi_frame(&v)).norm();
        report.max_residual = report.max_residual.max(r);
        report.max_speed_error = report.max_speed_error.max((v.norm() - 1.0).abs());
    }
    Ok(report)
}

/// Exact defect `|U(X, X) - q phi X|` for unit `X`.
pub fn lorentz_defect(x: &AlgebraVector, q: f64) -> Result<f64> {
    let n = nonzero(x)?;
    let unit = *x * (1.0 / n);
    Ok((u_tensor(&unit, &unit) - q * phi_algebra(&unit)).norm())
}

/// One sample of [`magnetic_sweep`].
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SweepRecord {
    pub x: AlgebraVector,
    pub q: f64,
    pub predicted: bool,
    pub residual: f64,
    pub observed: bool,
}

impl SweepRecord {
    pub fn agrees(&self) -> bool {
        self.predicted == self.observed
    }
}

/// Random unit `X`; half the samples use the predicted strength, the rest a
/// strength offset by `0.05..1` in either direction.
pub fn sweep_inputs(count: usize, seed: u64) -> Vec<(AlgebraVector, f64)> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..count)
        .map(|i| {
            let x = loop {
                let v =
                    AlgebraVector::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0));
                let n = v.norm();
                if n > 0.1 && n <= 1.0 {
                    break v * (1.0 / n);
                }
            };
            let q0 = 2.0 * SQRT_2 * (x.a - x.b);
            let offset = rng.gen_range(0.05..1.0) * if rng.gen_bool(0.5) { 1.0 } else { -1.0 };
            (x, if i % 2 == 0 { q0 } else { q0 + offset })
        })
        .collect()
}

/// Compares the linear criterion with the finite-difference residual on random inputs.
pub fn magnetic_sweep(count: usize, seed: u64, s_span: f64, execution: Execution) -> Vec<SweepRecord> {
    let inputs = sweep_inputs(count, seed);
    par::map(&inputs, execution, |&(x, q)| {
        let predicted = is_homogeneous_magnetic(&x, q, Convention::UnitSpeed).expect("unit vector");
        let residual = exp_trajectory_check(&x, q, s_span, 5).expect("unit vector").max_residual;
        SweepRecord { x, q, predicted, residual, observed: residual < RESIDUAL_TOLERANCE }
    })
}
