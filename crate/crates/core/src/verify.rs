//! Verification suites: each runs a family of checks and reports the largest
//! residual against its tolerance.

use std::f64::consts::{FRAC_PI_2, FRAC_PI_3, PI, SQRT_2};
use std::fmt;
use std::str::FromStr;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::Result;
use crate::geometry::{check_tables, verify_sasakian, FrameTables};
use crate::homogeneous::{self, project_exp_curve, projected_point};
use crate::hopf_tube::{tube_geodesic_residual, HopfTube};
use crate::hyperbolic::{riemannian_circle, CircleClass, ConstantCurvatureCurve, EuclideanShape, HalfPlanePoint};
use crate::integrator::{integrate_oracle, DEFAULT_TOLERANCE};
use crate::lie::{exp_algebra, exp_oracle, iwasawa_decompose, AlgebraVector};
use crate::numdiff::{first, second, stencil, DEFAULT_STEP};
use crate::par::Execution;
use crate::periodicity::{self, legendre_branch_count, legendre_strength, phase_period, wrap_angle};
use crate::trajectory::{ClosedFormTrajectory, MagneticParams, PhaseCase, TrajectoryState};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Suite {
    Connection,
    Curvature,
    Sasakian,
    Exp,
    Trajectories,
    Periodicity,
    Circles,
    Hopf,
    Homogeneous,
}

impl Suite {
    pub const ALL: [Suite; 9] = [
        Suite::Connection,
        Suite::Curvature,
        Suite::Sasakian,
        Suite::Exp,
        Suite::Trajectories,
        Suite::Periodicity,
        Suite::Circles,
        Suite::Hopf,
        Suite::Homogeneous,
    ];

    pub fn name(&self) -> &'static str {
        match self {
            Suite::Connection => "connection",
            Suite::Curvature => "curvature",
            Suite::Sasakian => "sasakian",
            Suite::Exp => "exp",
            Suite::Trajectories => "trajectories",
            Suite::Periodicity => "periodicity",
            Suite::Circles => "circles",
            Suite::Hopf => "hopf",
            Suite::Homogeneous => "homogeneous",
        }
    }
}

impl fmt::Display for Suite {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Suite {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
        Suite::ALL.into_iter().find(|suite| suite.name() == s).ok_or_else(|| format!("unknown suite '{s}'"))
    }
}

/// One measured quantity; passes when `value < tolerance`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Check {
    pub name: String,
    pub value: f64,
    pub tolerance: f64,
}

impl Check {
    pub fn new(name: impl Into<String>, value: f64, tolerance: f64) -> Self {
        Self { name: name.into(), value, tolerance }
    }

    pub fn passed(&self) -> bool {
        self.value < self.tolerance
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SuiteReport {
    pub suite: Suite,
    pub checks: Vec<Check>,
}

impl SuiteReport {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(Check::passed)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct VerifyOptions {
    pub tables: FrameTables,
    /// Sample count for the randomised suites.
    pub samples: usize,
    /// Number of random `(q, sigma)` pairs in the trajectory suite.
    pub trajectories: usize,
    pub seed: u64,
    pub execution: Execution,
}

impl Default for VerifyOptions {
    fn default() -> Self {
        Self {
            tables: FrameTables::canonical(),
            samples: 1000,
            trajectories: 12,
            seed: 2024,
            execution: Execution::default(),
        }
    }
}

pub fn run_suite(suite: Suite, opts: &VerifyOptions) -> SuiteReport {
    let checks = match suite {
        Suite::Connection => connection_checks(&opts.tables),
        Suite::Curvature => curvature_checks(&opts.tables),
        Suite::Sasakian => sasakian_checks(opts.samples, opts.seed),
        Suite::Exp => exp_checks(opts.samples, opts.seed),
        Suite::Trajectories => trajectory_checks(opts.trajectories, opts.seed),
        Suite::Periodicity => periodicity_checks(),
        Suite::Circles => circle_checks(),
        Suite::Hopf => hopf_checks(),
        Suite::Homogeneous => homogeneous_checks(opts.samples, opts.seed, opts.execution),
    };
    SuiteReport { suite, checks }
}

pub fn connection_checks(tables: &FrameTables) -> Vec<Check> {
    let t = check_tables(tables);
    vec![
        Check::new("connection entries differing from Koszul", t.connection_mismatches as f64, 0.5),
        Check::new("metric compatibility violations", t.metric_compatibility_violations as f64, 0.5),
    ]
}

pub fn curvature_checks(tables: &FrameTables) -> Vec<Check> {
    let t = check_tables(tables);
    vec![
        Check::new("curvature triples differing from connection", t.curvature_mismatches as f64, 0.5),
        Check::new("curvature triples differing from closed formula", t.formula_mismatches as f64, 0.5),
        Check::new("|phi-sectional curvature + 7|", (t.phi_sectional_curvature + 7.0).abs(), 1e-12),
    ]
}

pub fn sasakian_checks(samples: usize, seed: u64) -> Vec<Check> {
    let r = verify_sasakian(samples, seed);
    vec![
        Check::new("phi^2 = -I + eta (x) xi", r.phi_squared, 1e-9),
        Check::new("d eta = g(phi., .)", r.d_eta, 1e-9),
        Check::new("g(phi X, phi Y) = g(X, Y) - eta eta", r.compatibility, 1e-9),
        Check::new("nabla xi = phi", r.nabla_xi, 1e-9),
        Check::new("(nabla_X phi) Y = g(X, Y) xi - eta(Y) X", r.nabla_phi, 1e-9),
        Check::new("d eta finite-difference cross-check", r.d_eta_finite_difference, 1e-7),
    ]
}

/// Uniform random `X` in `[-1, 1]^3` and `t` in `[-3, 3]`.
pub fn random_exp_inputs(samples: usize, seed: u64) -> Vec<(AlgebraVector, f64)> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..samples)
        .map(|_| {
            let x = AlgebraVector::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0));
            (x, rng.gen_range(-3.0..3.0))
        })
        .collect()
}

/// Largest entry error of the closed-form exponential and largest Iwasawa round-trip error.
pub fn exp_errors(inputs: &[(AlgebraVector, f64)]) -> Result<(f64, f64)> {
    let (mut exp_err, mut iwasawa_err) = (0.0f64, 0.0f64);
    for (x, t) in inputs {
        let p = exp_algebra(x, *t);
        exp_err = exp_err.max(p.distance(&exp_oracle(x, *t)));
        iwasawa_err = iwasawa_err.max(iwasawa_decompose(&p)?.to_matrix().distance(&p));
    }
    Ok((exp_err, iwasawa_err))
}

pub fn exp_checks(samples: usize, seed: u64) -> Vec<Check> {
    let (e, i) = exp_errors(&random_exp_inputs(samples, seed)).unwrap_or((f64::INFINITY, f64::INFINITY));
    vec![Check::new("closed-form exp vs scaling-and-squaring", e, 1e-10), Check::new("Iwasawa round trip", i, 1e-12)]
}

/// Random parameters of a given phase case, `sigma` in `[0.2, pi - 0.2]`.
pub fn random_case_params<R: Rng>(rng: &mut R, case: PhaseCase) -> MagneticParams {
    let sigma: f64 = rng.gen_range(0.2..PI - 0.2);
    let (s, c) = sigma.sin_cos();
    let qbar = match case {
        PhaseCase::Case1 => -2.0 * s,
        PhaseCase::Case2 => 2.0 * s,
        PhaseCase::Case3 => {
            let sign = if rng.gen_bool(0.5) { 1.0 } else { -1.0 };
            sign * (2.0 * s + rng.gen_range(0.3..3.0))
        }
        PhaseCase::Case4 => 2.0 * s * rng.gen_range(-0.9..0.9),
    };
    MagneticParams { q: qbar + 2.0 * c, sigma }
}

/// Closed form against the numerical oracle.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CrossCheck {
    pub params: MagneticParams,
    pub sup_distance: f64,
    pub speed_drift: f64,
    pub contact_drift: f64,
}

pub fn trajectory_crosscheck(traj: &ClosedFormTrajectory, s_end: f64, samples: usize) -> Result<CrossCheck> {
    let p = traj.params;
    let oracle = integrate_oracle(&traj.initial, &p, s_end, DEFAULT_TOLERANCE, samples)?;
    let mut out = CrossCheck { params: p, sup_distance: 0.0, speed_drift: 0.0, contact_drift: 0.0 };
    for o in &oracle {
        let c = traj.state(o.s);
        let d = (o.x - c.x).abs().max((o.y - c.y).abs()).max((o.theta - c.theta).abs());
        out.sup_distance = out.sup_distance.max(d);
        out.speed_drift = out.speed_drift.max((o.speed() - 1.0).abs());
        out.contact_drift = out.contact_drift.max((o.contact_cosine() - p.cos_sigma()).abs());
    }
    Ok(out)
}

/// `count` random parameter sets cycling through the four cases, each with a random start.
pub fn random_trajectories(count: usize, seed: u64) -> Vec<ClosedFormTrajectory> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let cases = [PhaseCase::Case1, PhaseCase::Case2, PhaseCase::Case3, PhaseCase::Case4];
    (0..count)
        .map(|i| {
            let p = random_case_params(&mut rng, cases[i % 4]);
            let (x0, y0, t0) = (rng.gen_range(-1.0..1.0), rng.gen_range(0.5..2.0), rng.gen_range(-PI..PI));
            ClosedFormTrajectory::standard(p, x0, y0, t0).expect("valid start")
        })
        .collect()
}

pub fn trajectory_checks(count: usize, seed: u64) -> Vec<Check> {
    let mut worst = CrossCheck {
        params: MagneticParams { q: 0.0, sigma: 0.0 },
        sup_distance: 0.0,
        speed_drift: 0.0,
        contact_drift: 0.0,
    };
    for traj in random_trajectories(count, seed) {
        match trajectory_crosscheck(&traj, 10.0, 201) {
            Ok(c) => {
                worst.sup_distance = worst.sup_distance.max(c.sup_distance);
                worst.speed_drift = worst.speed_drift.max(c.speed_drift);
                worst.contact_drift = worst.contact_drift.max(c.contact_drift);
            }
            Err(_) => worst.sup_distance = f64::INFINITY,
        }
    }
    vec![
        Check::new("closed form vs oracle, sup over s in [0, 10]", worst.sup_distance, 1e-6),
        Check::new("speed drift", worst.speed_drift, 1e-8),
        Check::new("contact angle drift", worst.contact_drift, 1e-8),
    ]
}

/// Closure measurements at the certified number of phase periods.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FigureClosure {
    pub q: f64,
    pub n_periods: u32,
    pub t_total: f64,
    pub endpoint_distance: f64,
    pub theta_defect: f64,
    /// Smallest closure defect at an earlier period count.
    pub early_defect: f64,
    /// Smallest defect within `n_periods` for `q (1 -+ 1%)`.
    pub perturbed_defect: [f64; 2],
}

fn closure_defect(traj: &ClosedFormTrajectory, s: f64) -> (f64, f64) {
    let (a, b) = (traj.state(0.0), traj.state(s));
    ((a.x - b.x).hypot(a.y - b.y), wrap_angle(b.theta - a.theta).abs())
}

/// Closure of the standard trajectory from `(0, 1, 0)` after `n_periods` phase periods.
pub fn figure_closure(q: f64, sigma: f64, n_periods: u32) -> Result<FigureClosure> {
    let traj = ClosedFormTrajectory::standard(MagneticParams::new(q, sigma)?, 0.0, 1.0, 0.0)?;
    let t = phase_period(&traj.params)?;
    let (endpoint_distance, theta_defect) = closure_defect(&traj, n_periods as f64 * t);
    let early_defect = (1..n_periods)
        .map(|n| {
            let (d, th) = closure_defect(&traj, n as f64 * t);
            d.max(th)
        })
        .fold(f64::INFINITY, f64::min);
    let mut perturbed_defect = [0.0; 2];
    for (slot, f) in perturbed_defect.iter_mut().zip([1.0 + periodicity::PERTURBATION, 1.0 - periodicity::PERTURBATION])
    {
        let pt = ClosedFormTrajectory::standard(MagneticParams::new(q * f, sigma)?, 0.0, 1.0, 0.0)?;
        let tp = phase_period(&pt.params)?;
        *slot = (1..=n_periods)
            .map(|n| {
                let (d, th) = closure_defect(&pt, n as f64 * tp);
                d.max(th)
            })
            .fold(f64::INFINITY, f64::min);
    }
    Ok(FigureClosure {
        q,
        n_periods,
        t_total: n_periods as f64 * t,
        endpoint_distance,
        theta_defect,
        early_defect,
        perturbed_defect,
    })
}

/// Parameter sets of the five reference figures.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FigureCase {
    pub id: &'static str,
    pub m: u32,
    pub k: u32,
    pub sigma: f64,
    /// Branch count, for the Legendre figures.
    pub h: Option<u32>,
}

pub const FIGURES: [FigureCase; 5] = [
    FigureCase { id: "L1", m: 1, k: 3, sigma: FRAC_PI_2, h: Some(0) },
    FigureCase { id: "L2", m: 3, k: 5, sigma: FRAC_PI_2, h: Some(2) },
    FigureCase { id: "L3", m: 2, k: 7, sigma: FRAC_PI_2, h: Some(3) },
    FigureCase { id: "M4", m: 1, k: 3, sigma: 2.0 * PI / 5.0, h: None },
    FigureCase { id: "M5", m: 3, k: 5, sigma: FRAC_PI_3, h: None },
];

pub fn figure_case(id: &str) -> Option<FigureCase> {
    FIGURES.iter().copied().find(|f| f.id.eq_ignore_ascii_case(id))
}

impl FigureCase {
    /// Strength used for the figure: the Legendre quantization, or the accepted root.
    pub fn strength(&self) -> Result<f64> {
        match self.h {
            Some(_) => legendre_strength(self.m, self.k),
            None => {
                let roots = periodicity::quantized_strength(self.m, self.k, self.sigma)?;
                roots.accepted.first().copied().ok_or(crate::Error::NonRotationalPhase(0.0))
            }
        }
    }

    /// Phase periods to closure.
    pub fn periods(&self) -> Result<u32> {
        match self.h {
            Some(_) => Ok(legendre_branch_count(self.m, self.k)? + 1),
            None => Ok(periodicity::closing_period_count(self.m, self.k)),
        }
    }

    pub fn closure(&self) -> Result<FigureClosure> {
        figure_closure(self.strength()?, self.sigma, self.periods()?)
    }
}

pub fn periodicity_checks() -> Vec<Check> {
    let mut checks = Vec::new();
    for f in FIGURES {
        match f.closure() {
            Ok(c) => {
                let tol = if f.h.is_some() { 1e-6 } else { 1e-8 };
                checks.push(Check::new(format!("{} endpoint distance", f.id), c.endpoint_distance, tol));
                checks.push(Check::new(format!("{} theta defect", f.id), c.theta_defect, tol));
                checks.push(Check::new(format!("{} no earlier closure (1/defect)", f.id), 1.0 / c.early_defect, 1e6));
                let p = c.perturbed_defect[0].min(c.perturbed_defect[1]);
                checks.push(Check::new(format!("{} perturbed q closes (1/defect)", f.id), 1.0 / p, 1e3));
            }
            Err(_) => checks.push(Check::new(format!("{} closure", f.id), f64::INFINITY, 0.0)),
        }
    }
    let branch_mismatches =
        FIGURES.iter().filter(|f| f.h.is_some_and(|h| legendre_branch_count(f.m, f.k).ok() != Some(h))).count();
    checks.push(Check::new("Legendre branch count mismatches", branch_mismatches as f64, 0.5));
    checks
}

/// Circle-grid classification: `k in {0, 0.5, ..., 4}`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CircleRow {
    pub k: f64,
    pub class: CircleClass,
    pub closes: bool,
    pub residual: f64,
    pub closure_distance: Option<f64>,
}

pub fn circle_grid() -> Result<Vec<CircleRow>> {
    (0..=8)
        .map(|i| {
            let k = 0.5 * i as f64;
            let curve = riemannian_circle(k, 0.8, 0.3, 0.2)?;
            let mut residual = 0.0f64;
            for j in 0..64 {
                let p = curve.point(0.1 * j as f64);
                residual = residual.max(curve.shape().residual(p.x, p.y).abs());
            }
            let closure_distance = curve.period().map(|t| {
                let (a, b) = (curve.point(0.0), curve.point(t));
                a.euclidean_distance(&b)
            });
            Ok(CircleRow { k, class: curve.class(), closes: curve.period().is_some(), residual, closure_distance })
        })
        .collect()
}

pub fn circle_checks() -> Vec<Check> {
    let Ok(rows) = circle_grid() else {
        return vec![Check::new("circle grid", f64::INFINITY, 0.0)];
    };
    let misclassified = rows
        .iter()
        .filter(|r| {
            r.closes != (r.k.abs() > 2.0) || ((r.k.abs() - 2.0).abs() < 1e-12) != (r.class == CircleClass::Horocycle)
        })
        .count();
    let closed_residual = rows.iter().filter(|r| r.closes).map(|r| r.residual).fold(0.0, f64::max);
    let closure = rows.iter().filter_map(|r| r.closure_distance).fold(0.0, f64::max);
    vec![
        Check::new("misclassified grid points", misclassified as f64, 0.5),
        Check::new("closed circle implicit residual", closed_residual, 1e-10),
        Check::new("closed circle return distance", closure, 1e-10),
    ]
}

/// Projected speed and curvature of a trajectory by differences of its closed form.
pub fn projection_samples(traj: &ClosedFormTrajectory, s_span: f64, samples: usize) -> Vec<(f64, f64)> {
    let n = samples.max(2);
    (0..n)
        .map(|i| {
            let s = s_span * i as f64 / (n - 1) as f64;
            let xs = stencil(|v| traj.state(v).x, s, DEFAULT_STEP);
            let ys = stencil(|v| traj.state(v).y, s, DEFAULT_STEP);
            let (dx, dy) = (first(&xs, DEFAULT_STEP), first(&ys, DEFAULT_STEP));
            let (ddx, ddy) = (second(&xs, DEFAULT_STEP), second(&ys, DEFAULT_STEP));
            let y = ys[2];
            let v = dx.hypot(dy) / (2.0 * y);
            (v, (dx * ddy - ddx * dy) / (4.0 * y * y * v.powi(3)) + dx / (v * y))
        })
        .collect()
}

/// Mean and population standard deviation.
pub fn mean_std(values: &[f64]) -> (f64, f64) {
    let n = values.len() as f64;
    let mean = values.iter().sum::<f64>() / n;
    let var = values.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / n;
    (mean, var.sqrt())
}

pub fn hopf_checks() -> Vec<Check> {
    let start = HalfPlanePoint { x: 0.0, y: 1.0 };
    let (mut flat, mut sff, mut lift) = (0.0f64, 0.0f64, 0.0f64);
    for k in [-3.0, -2.0, -1.0, 0.0, 1.5, 2.0, 2.5, 4.0] {
        let tube = HopfTube::new(ConstantCurvatureCurve::from_initial(k, start, 0.4), 0.0);
        for &u in &[0.0, 0.3, 0.8] {
            flat = flat.max(tube.gauss_curvature(u, 0.2).abs());
            let h = tube.second_fundamental_form(0.5, u);
            sff = sff.max((h.h_tt - k).abs()).max((h.h_txi - 1.0).abs()).max(h.h_xixi.abs());
            lift = lift.max(tube.lift_contact_residual(u));
        }
    }
    let (mut tangential, mut normal, mut kappa_std, mut speed) = (0.0f64, 0.0f64, 0.0f64, 0.0f64);
    for traj in projection_trajectories() {
        let r = tube_geodesic_residual(&traj, 3.0, 31);
        tangential = tangential.max(r.max_tangential);
        normal = normal.max(r.max_normal_defect);
        let samples = projection_samples(&traj, 3.0, 31);
        let ks: Vec<f64> = samples.iter().map(|s| s.1).collect();
        let (mean, std) = mean_std(&ks);
        kappa_std = kappa_std.max(std).max((mean - traj.params.projection_curvature()).abs());
        speed = samples.iter().map(|s| (s.0 - traj.params.sin_sigma()).abs()).fold(speed, f64::max);
    }
    vec![
        Check::new("tube Gauss curvature", flat, 1e-7),
        Check::new("second fundamental form (kappa, 1, 0)", sff, 1e-6),
        Check::new("lift horizontality", lift, 1e-9),
        Check::new("tube-geodesic tangential residual", tangential, 1e-7),
        Check::new("tube normal component vs q sin(sigma)", normal, 1e-7),
        Check::new("projection curvature spread and offset from qbar/sin(sigma)", kappa_std, 1e-8),
        Check::new("projection speed vs sin(sigma)", speed, 1e-9),
    ]
}

/// Magnetic trajectories used by the projection checks.
pub fn projection_trajectories() -> Vec<ClosedFormTrajectory> {
    let params = [(3.0, FRAC_PI_2), (1.0, FRAC_PI_3), (-2.5, 2.0), (0.4, 0.7), (5.0, 1.0), (2.2, 2.6)];
    params
        .iter()
        .map(|&(q, sigma)| {
            let init = TrajectoryState { x: 0.1, y: 1.2, theta: 0.3, u: 0.4, s: 0.0 };
            ClosedFormTrajectory::new(MagneticParams { q, sigma }, init).expect("valid start")
        })
        .collect()
}

/// Worst implicit residual of the three reference conics along sampled projections.
pub fn reference_conic_residual() -> f64 {
    let cases: [(AlgebraVector, EuclideanShape); 4] = [
        (AlgebraVector::new(1.0, -1.0, SQRT_2), EuclideanShape::Circle { center: (-1.0, 1.0), radius: 1.0 }),
        (AlgebraVector::new(1.0, -1.0, -SQRT_2), EuclideanShape::Circle { center: (1.0, 1.0), radius: 1.0 }),
        (AlgebraVector::E2, EuclideanShape::Circle { center: (0.0, 0.5), radius: 0.5 }),
        (AlgebraVector::E1, EuclideanShape::Line { point: (0.0, 1.0), direction: (1.0, 0.0) }),
    ];
    let mut worst = 0.0f64;
    for (x, expected) in cases {
        let conic = match project_exp_curve(&x) {
            Ok(c) => c,
            Err(_) => return f64::INFINITY,
        };
        for i in 0..101 {
            let t = -3.0 + 0.06 * i as f64;
            let (px, py) = projected_point(&x, t);
            worst = worst.max(expected.residual(px, py).abs()).max(conic.shape.residual(px, py).abs());
        }
    }
    worst
}

pub fn homogeneous_checks(samples: usize, seed: u64, execution: Execution) -> Vec<Check> {
    let sweep = homogeneous::magnetic_sweep(samples, seed, 2.0, execution);
    let disagreements = sweep.iter().filter(|r| !r.agrees()).count();
    vec![
        Check::new("criterion vs Lorentz residual disagreements", disagreements as f64, 0.5),
        Check::new("reference conic residual", reference_conic_residual(), 1e-9),
    ]
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn suite_names_round_trip() {
        for s in Suite::ALL {
            assert_eq!(s.name().parse::<Suite>().unwrap(), s);
        }
        assert!("nope".parse::<Suite>().is_err());
    }

    #[test]
    fn corrupted_tables_fail_table_suites() {
        let mut opts = VerifyOptions::default();
        opts.tables.connection[0][0][1] = 3;
        assert!(!run_suite(Suite::Connection, &opts).passed());
        let mut opts = VerifyOptions::default();
        opts.tables.curvature[0][1][0][1] = 6;
        assert!(!run_suite(Suite::Curvature, &opts).passed());
    }

    #[test]
    fn cheap_suites_pass() {
        let opts = VerifyOptions { samples: 100, trajectories: 4, ..VerifyOptions::default() };
        for s in [Suite::Connection, Suite::Curvature, Suite::Sasakian, Suite::Exp, Suite::Circles, Suite::Periodicity]
        {
            let r = run_suite(s, &opts);
            assert!(r.passed(), "{r:?}");
        }
    }

    #[test]
    fn figure_lookup() {
        assert_eq!(figure_case("l3").unwrap().k, 7);
        assert!(figure_case("X9").is_none());
    }
}
