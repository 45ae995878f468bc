//! Periodicity of trajectories in the rotating phase regime.
//!
//! Over one phase period `T = 2pi/omega`, `omega = sqrt(qbar^2 - 4sin^2(sigma))`,
//! the projection closes and the fibre coordinate advances by
//! `D = (cos(sigma) - qbar/2) T + pi sgn(qbar)`. The trajectory is periodic iff
//! `D/pi` is rational. Strengths with `omega = (m/k)(qbar - 2cos(sigma))` give
//! `D = pi (1 - k/m)`.

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::par::{self, Execution};
use crate::trajectory::MagneticParams;

/// Default tolerance on the fibre defect for [`detect_closure`].
pub const CLOSURE_TOLERANCE: f64 = 1e-8;
/// Relative tolerance used to sort roots by the sign of the quantization relation.
const RELATION_TOLERANCE: f64 = 1e-8;
/// Relative perturbation used for the negative-control column of scans.
pub const PERTURBATION: f64 = 0.01;

pub fn gcd(mut a: u32, mut b: u32) -> u32 {
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}

fn check_coprime(m: u32, k: u32) -> Result<()> {
    if m == 0 || k == 0 {
        return Err(Error::InvalidRatio { m, k });
    }
    if gcd(m, k) != 1 {
        return Err(Error::NotCoprime { m, k });
    }
    Ok(())
}

/// `a = 1 - 2(m/k)^2`.
pub fn quantization_parameter(m: u32, k: u32) -> f64 {
    let r = m as f64 / k as f64;
    1.0 - 2.0 * r * r
}

/// Legendre quantization `|q| = 2/sqrt(1 - (m/k)^2)`, `0 < m < k` coprime.
pub fn legendre_strength(m: u32, k: u32) -> Result<f64> {
    if m == 0 || m >= k {
        return Err(Error::InvalidRatio { m, k });
    }
    check_coprime(m, k)?;
    let r = m as f64 / k as f64;
    Ok(2.0 / (1.0 - r * r).sqrt())
}

/// Period of the phase `U` in the rotating regime.
pub fn phase_period(params: &MagneticParams) -> Result<f64> {
    let disc = params.discriminant();
    if !(disc > 0.0) {
        return Err(Error::NonRotationalPhase(disc));
    }
    Ok(2.0 * PI / disc.sqrt())
}

/// Fibre advance over one phase period.
pub fn theta_advance(params: &MagneticParams) -> Result<f64> {
    let t = phase_period(params)?;
    Ok((params.cos_sigma() - 0.5 * params.qbar()) * t + PI * params.qbar().signum())
}

/// Representative of `angle` modulo `2pi` in `(-pi, pi]`.
pub fn wrap_angle(angle: f64) -> f64 {
    let r = angle.rem_euclid(2.0 * PI);
    if r > PI {
        r - 2.0 * PI
    } else {
        r
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Closure {
    pub n_periods: u32,
    pub theta_defect: f64,
}

/// Outcome of a closure search over `1..=max_phase_periods`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ClosureSearch {
    pub closure: Option<Closure>,
    /// Smallest defect seen in the window, with the period count where it occurs.
    pub min_defect: f64,
    pub min_defect_at: u32,
}

/// Searches for the first period count whose fibre defect is below `tol`.
pub fn closure_search(params: &MagneticParams, max_phase_periods: u32, tol: f64) -> Result<ClosureSearch> {
    let d = theta_advance(params)?;
    let mut best = (f64::INFINITY, 0);
    for n in 1..=max_phase_periods {
        let defect = wrap_angle(n as f64 * d).abs();
        if defect < best.0 {
            best = (defect, n);
        }
        if defect < tol {
            return Ok(ClosureSearch {
                closure: Some(Closure { n_periods: n, theta_defect: defect }),
                min_defect: defect,
                min_defect_at: n,
            });
        }
    }
    Ok(ClosureSearch { closure: None, min_defect: best.0, min_defect_at: best.1 })
}

/// Smallest number of phase periods after which the trajectory closes, if any.
/// Non-rotational parameters never close and yield `None`.
pub fn detect_closure(params: &MagneticParams, max_phase_periods: u32, tol: f64) -> Option<Closure> {
    closure_search(params, max_phase_periods, tol).ok().and_then(|c| c.closure)
}

/// Smallest `h >= 0` with `(h + 1)(k - m)/m` an even integer.
pub fn legendre_branch_count(m: u32, k: u32) -> Result<u32> {
    if m == 0 || m >= k {
        return Err(Error::InvalidRatio { m, k });
    }
    check_coprime(m, k)?;
    Ok(closing_period_count(m, k) - 1)
}

/// `2m / gcd(2m, k - m)`: phase periods needed when `D = pi(1 - k/m)`.
pub fn closing_period_count(m: u32, k: u32) -> u32 {
    let diff = (k as i64 - m as i64).unsigned_abs() as u32;
    2 * m / gcd(2 * m, diff)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum RejectReason {
    /// Satisfies `omega = -(m/k)(qbar - 2cos(sigma))`: the root of the squared
    /// relation belonging to the opposite sign.
    MirroredRelation,
    /// `|qbar| <= 2 sin(sigma)`: the phase does not rotate.
    NotRotational,
    /// Relation holds but the closure oracle did not confirm it.
    NoClosure,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RejectedRoot {
    pub q: f64,
    pub reason: RejectReason,
    /// Closure of the rejected root, when it is rotational.
    pub closure: Option<Closure>,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CertifiedStrength {
    pub q: f64,
    pub qbar: f64,
    pub t_phase: f64,
    pub n_periods: u32,
    pub t_total: f64,
    pub theta_defect: f64,
    /// `2sin(sigma) < |qbar| <= 2`: closed, though outside the bound `|qbar| > 2`.
    pub in_gap: bool,
    /// Smallest defect within `n_periods` for `q (1 + PERTURBATION)`.
    pub perturbed_defect: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct QuantizedRoots {
    pub accepted: Vec<f64>,
    pub rejected: Vec<RejectedRoot>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PeriodicityCert {
    pub m: u32,
    pub k: u32,
    pub sigma: f64,
    pub a: f64,
    pub strengths: Vec<CertifiedStrength>,
    pub rejected: Vec<RejectedRoot>,
    /// Branch count, for Legendre parameters with `m < k`.
    pub h: Option<u32>,
}

impl PeriodicityCert {
    pub fn q_values(&self) -> Vec<f64> {
        self.strengths.iter().map(|c| c.q).collect()
    }
}

/// Real roots of the quadratic `((1+a)/2) q^2 - 4a cos(sigma) q + (8a cos^2(sigma) - 4) = 0`.
pub fn quantization_roots(m: u32, k: u32, sigma: f64) -> Result<Vec<f64>> {
    check_coprime(m, k)?;
    if m == k {
        return Err(Error::DegenerateDenominator);
    }
    if sigma.sin().abs() < 1e-15 {
        return Err(Error::InvalidContactAngle(sigma));
    }
    let a = quantization_parameter(m, k);
    let c = sigma.cos();
    let rad = 2.0 * (1.0 - a * (2.0 * sigma).cos());
    if rad < 0.0 {
        return Ok(Vec::new());
    }
    let den = 0.5 * (1.0 + a);
    let root = rad.sqrt();
    let mut roots = vec![(2.0 * a * c + root) / den, (2.0 * a * c - root) / den];
    if root == 0.0 {
        roots.pop();
    }
    Ok(roots)
}

/// Signed residual of `omega - (m/k)(qbar - 2cos(sigma))`.
pub fn relation_residual(m: u32, k: u32, params: &MagneticParams) -> Option<f64> {
    let disc = params.discriminant();
    if disc < 0.0 {
        return None;
    }
    Some(disc.sqrt() - m as f64 / k as f64 * (params.qbar() - 2.0 * params.cos_sigma()))
}

fn classify_root(
    m: u32,
    k: u32,
    sigma: f64,
    q: f64,
    window: u32,
) -> std::result::Result<CertifiedStrength, RejectedRoot> {
    let params = MagneticParams { q, sigma };
    let rotational = params.discriminant() > 0.0;
    let closure = if rotational { detect_closure(&params, window, CLOSURE_TOLERANCE) } else { None };
    if !rotational {
        return Err(RejectedRoot { q, reason: RejectReason::NotRotational, closure });
    }
    let scale = (params.qbar() - 2.0 * params.cos_sigma()).abs().max(1.0);
    let residual = relation_residual(m, k, &params).unwrap_or(f64::INFINITY);
    if residual.abs() > RELATION_TOLERANCE * scale {
        return Err(RejectedRoot { q, reason: RejectReason::MirroredRelation, closure });
    }
    let Some(c) = closure else {
        return Err(RejectedRoot { q, reason: RejectReason::NoClosure, closure });
    };
    let t_phase = phase_period(&params).expect("rotational");
    let qbar = params.qbar();
    let perturbed = MagneticParams { q: q * (1.0 + PERTURBATION), sigma };
    let perturbed_defect = closure_search(&perturbed, c.n_periods, 0.0).map(|s| s.min_defect).unwrap_or(f64::INFINITY);
    Ok(CertifiedStrength {
        q,
        qbar,
        t_phase,
        n_periods: c.n_periods,
        t_total: c.n_periods as f64 * t_phase,
        theta_defect: c.theta_defect,
        in_gap: qbar.abs() <= 2.0,
        perturbed_defect,
    })
}

/// Default closure window `4k`.
pub fn default_window(k: u32) -> u32 {
    4 * k
}

/// Roots of the quantization equation, split into accepted and rejected.
pub fn quantized_strength(m: u32, k: u32, sigma: f64) -> Result<QuantizedRoots> {
    let cert = certify(m, k, sigma)?;
    Ok(QuantizedRoots { accepted: cert.q_values(), rejected: cert.rejected })
}

/// Full periodicity certificate for `(m, k, sigma)`.
pub fn certify(m: u32, k: u32, sigma: f64) -> Result<PeriodicityCert> {
    let roots = quantization_roots(m, k, sigma)?;
    let window = default_window(k);
    let mut strengths = Vec::new();
    let mut rejected = Vec::new();
    for q in roots {
        match classify_root(m, k, sigma, q, window) {
            Ok(c) => strengths.push(c),
            Err(r) => rejected.push(r),
        }
    }
    let h = if m < k && (sigma - PI / 2.0).abs() < 1e-15 { legendre_branch_count(m, k).ok() } else { None };
    Ok(PeriodicityCert { m, k, sigma, a: quantization_parameter(m, k), strengths, rejected, h })
}

/// One row of a periodicity scan.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ScanRow {
    pub m: u32,
    pub k: u32,
    pub sigma: f64,
    pub cert: std::result::Result<PeriodicityCert, String>,
}

/// Coprime pairs `(m, k)` with `1 <= m <= m_max`, `1 <= k <= k_max`, `m != k`, in row-major order.
pub fn coprime_pairs(m_max: u32, k_max: u32) -> Vec<(u32, u32)> {
    let mut out = Vec::new();
    for m in 1..=m_max {
        for k in 1..=k_max {
            if m != k && gcd(m, k) == 1 {
                out.push((m, k));
            }
        }
    }
    out
}

/// Certificates for every coprime pair and angle, ordered by `(m, k, sigma index)`.
pub fn scan_periodic(m_max: u32, k_max: u32, sigmas: &[f64], execution: Execution) -> Vec<ScanRow> {
    let jobs: Vec<(u32, u32, f64)> =
        coprime_pairs(m_max, k_max).into_iter().flat_map(|(m, k)| sigmas.iter().map(move |&s| (m, k, s))).collect();
    par::map(&jobs, execution, |&(m, k, sigma)| ScanRow {
        m,
        k,
        sigma,
        cert: certify(m, k, sigma).map_err(|e| e.to_string()),
    })
}
