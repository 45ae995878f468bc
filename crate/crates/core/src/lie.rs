//! Matrix-group layer: SL(2,R) elements, the algebra sl(2,R) in the orthonormal
//! basis `E1 = sqrt2 E`, `E2 = sqrt2 F`, `E3 = H`, closed-form one-parameter
//! subgroups, the NAK (Iwasawa) coordinates and the Möbius classification.

use std::f64::consts::SQRT_2;
use std::ops::{Add, Mul, Neg, Sub};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Unit-determinant check: `|det - 1| <= DET_TOLERANCE * max(1, |p|_max^2)`.
pub const DET_TOLERANCE: f64 = 1e-12;
/// Trace tolerance separating parabolic elements from elliptic/hyperbolic ones.
pub const TRACE_TOLERANCE: f64 = 1e-9;
/// `|det X| < DET_DISPATCH * |X|^2` selects the affine (nilpotent) exponential.
pub const DET_DISPATCH: f64 = 1e-12;

/// A real 2x2 matrix of unit determinant.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Sl2Matrix {
    pub p11: f64,
    pub p12: f64,
    pub p21: f64,
    pub p22: f64,
}

impl Sl2Matrix {
    pub const IDENTITY: Sl2Matrix = Sl2Matrix { p11: 1.0, p12: 0.0, p21: 0.0, p22: 1.0 };

    /// Validating constructor.
    pub fn new(p11: f64, p12: f64, p21: f64, p22: f64) -> Result<Self> {
        let p = Self::from_entries(p11, p12, p21, p22);
        p.check_unimodular()?;
        Ok(p)
    }

    /// Builds a matrix without checking the determinant. Used for numerically
    /// produced matrices whose determinant is 1 only up to rounding.
    pub const fn from_entries(p11: f64, p12: f64, p21: f64, p22: f64) -> Self {
        Self { p11, p12, p21, p22 }
    }

    pub fn from_rows(rows: [[f64; 2]; 2]) -> Self {
        Self::from_entries(rows[0][0], rows[0][1], rows[1][0], rows[1][1])
    }

    pub fn rows(&self) -> [[f64; 2]; 2] {
        [[self.p11, self.p12], [self.p21, self.p22]]
    }

    pub fn det(&self) -> f64 {
        self.p11 * self.p22 - self.p12 * self.p21
    }

    pub fn trace(&self) -> f64 {
        self.p11 + self.p22
    }

    pub fn max_abs(&self) -> f64 {
        self.p11.abs().max(self.p12.abs()).max(self.p21.abs()).max(self.p22.abs())
    }

    pub fn check_unimodular(&self) -> Result<()> {
        let det = self.det();
        let tolerance = DET_TOLERANCE * self.max_abs().powi(2).max(1.0);
        if (det - 1.0).abs() > tolerance || !det.is_finite() {
            return Err(Error::NonUnitDeterminant { det, tolerance });
        }
        Ok(())
    }

    pub fn inverse(&self) -> Self {
        Self::from_entries(self.p22, -self.p12, -self.p21, self.p11)
    }

    /// Entrywise sup-norm distance.
    pub fn distance(&self, other: &Self) -> f64 {
        (self.p11 - other.p11)
            .abs()
            .max((self.p12 - other.p12).abs())
            .max((self.p21 - other.p21).abs())
            .max((self.p22 - other.p22).abs())
    }

    /// Nilpotent factor `n(x)`.
    pub fn nilpotent(x: f64) -> Self {
        Self::from_entries(1.0, x, 0.0, 1.0)
    }

    /// Abelian factor `a(y) = diag(sqrt y, 1/sqrt y)`.
    pub fn abelian(y: f64) -> Self {
        let r = y.sqrt();
        Self::from_entries(r, 0.0, 0.0, 1.0 / r)
    }

    /// Rotation factor `k(theta)`.
    pub fn rotation(theta: f64) -> Self {
        let (s, c) = theta.sin_cos();
        Self::from_entries(c, s, -s, c)
    }

    /// Linear fractional action on the upper half plane, `z -> (p11 z + p12)/(p21 z + p22)`.
    pub fn act(&self, x: f64, y: f64) -> (f64, f64) {
        // (a z + b)/(c z + d) with z = x + i y
        let (nr, ni) = (self.p11 * x + self.p12, self.p11 * y);
        let (dr, di) = (self.p21 * x + self.p22, self.p21 * y);
        let den = dr * dr + di * di;
        ((nr * dr + ni * di) / den, (ni * dr - nr * di) / den)
    }
}

impl Mul for Sl2Matrix {
    type Output = Sl2Matrix;

    fn mul(self, rhs: Sl2Matrix) -> Sl2Matrix {
        Sl2Matrix::from_entries(
            self.p11 * rhs.p11 + self.p12 * rhs.p21,
            self.p11 * rhs.p12 + self.p12 * rhs.p22,
            self.p21 * rhs.p11 + self.p22 * rhs.p21,
            self.p21 * rhs.p12 + self.p22 * rhs.p22,
        )
    }
}

/// Element `a E1 + b E2 + c E3` of sl(2,R), with matrix `[[c, sqrt2 a], [sqrt2 b, -c]]`.
///
/// The basis is orthonormal for `<X, Y> = tr(X^t Y) / 2`.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct AlgebraVector {
    pub a: f64,
    pub b: f64,
    pub c: f64,
}

impl AlgebraVector {
    pub const E1: AlgebraVector = AlgebraVector::new(1.0, 0.0, 0.0);
    pub const E2: AlgebraVector = AlgebraVector::new(0.0, 1.0, 0.0);
    pub const E3: AlgebraVector = AlgebraVector::new(0.0, 0.0, 1.0);
    pub const ZERO: AlgebraVector = AlgebraVector::new(0.0, 0.0, 0.0);

    pub const fn new(a: f64, b: f64, c: f64) -> Self {
        Self { a, b, c }
    }

    /// Unit Reeb direction `xi = (E1 - E2)/sqrt2`, the generator of the rotation group K.
    pub fn reeb() -> Self {
        Self::new(1.0 / SQRT_2, -1.0 / SQRT_2, 0.0)
    }

    pub fn basis(index: usize) -> Result<Self> {
        match index {
            1 => Ok(Self::E1),
            2 => Ok(Self::E2),
            3 => Ok(Self::E3),
            i => Err(Error::IndexOutOfRange(i)),
        }
    }

    pub fn components(&self) -> [f64; 3] {
        [self.a, self.b, self.c]
    }

    pub fn from_components(v: [f64; 3]) -> Self {
        Self::new(v[0], v[1], v[2])
    }

    pub fn matrix(&self) -> [[f64; 2]; 2] {
        [[self.c, SQRT_2 * self.a], [SQRT_2 * self.b, -self.c]]
    }

    /// Inverse of [`AlgebraVector::matrix`]; the trace part of `m` is discarded.
    pub fn from_matrix(m: [[f64; 2]; 2]) -> Self {
        Self::new(m[0][1] / SQRT_2, m[1][0] / SQRT_2, 0.5 * (m[0][0] - m[1][1]))
    }

    /// Determinant of the matrix form, `-(c^2 + 2ab)`.
    pub fn det(&self) -> f64 {
        let m = self.matrix();
        m[0][0] * m[1][1] - m[0][1] * m[1][0]
    }

    pub fn dot(&self, other: &Self) -> f64 {
        self.a * other.a + self.b * other.b + self.c * other.c
    }

    pub fn norm_squared(&self) -> f64 {
        self.dot(self)
    }

    pub fn norm(&self) -> f64 {
        self.norm_squared().sqrt()
    }

    pub fn max_abs(&self) -> f64 {
        self.a.abs().max(self.b.abs()).max(self.c.abs())
    }

    pub fn normalized(&self) -> Result<Self> {
        let n = self.norm();
        if n == 0.0 || !n.is_finite() {
            return Err(Error::ZeroVector);
        }
        Ok(*self * (1.0 / n))
    }

    /// Lie bracket using `[E1,E2] = 2E3`, `[E2,E3] = 2E2`, `[E3,E1] = 2E1`.
    pub fn bracket(&self, other: &Self) -> Self {
        let (x, y) = (self, other);
        Self::new(2.0 * (x.c * y.a - x.a * y.c), 2.0 * (x.b * y.c - x.c * y.b), 2.0 * (x.a * y.b - x.b * y.a))
    }
}

impl Add for AlgebraVector {
    type Output = AlgebraVector;
    fn add(self, rhs: Self) -> Self {
        Self::new(self.a + rhs.a, self.b + rhs.b, self.c + rhs.c)
    }
}

impl Sub for AlgebraVector {
    type Output = AlgebraVector;
    fn sub(self, rhs: Self) -> Self {
        Self::new(self.a - rhs.a, self.b - rhs.b, self.c - rhs.c)
    }
}

impl Neg for AlgebraVector {
    type Output = AlgebraVector;
    fn neg(self) -> Self {
        Self::new(-self.a, -self.b, -self.c)
    }
}

impl Mul<f64> for AlgebraVector {
    type Output = AlgebraVector;
    fn mul(self, s: f64) -> Self {
        Self::new(self.a * s, self.b * s, self.c * s)
    }
}

impl Mul<AlgebraVector> for f64 {
    type Output = AlgebraVector;
    fn mul(self, v: AlgebraVector) -> AlgebraVector {
        v * self
    }
}

/// Global coordinates `(x, y, theta)` of `n(x) a(y) k(theta)`; `theta` may be unwrapped.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct IwasawaCoord {
    pub x: f64,
    pub y: f64,
    pub theta: f64,
}

impl IwasawaCoord {
    pub fn new(x: f64, y: f64, theta: f64) -> Result<Self> {
        if !(y > 0.0) {
            return Err(Error::NonpositiveY(y));
        }
        Ok(Self { x, y, theta })
    }

    pub fn to_matrix(&self) -> Sl2Matrix {
        Sl2Matrix::nilpotent(self.x) * Sl2Matrix::abelian(self.y) * Sl2Matrix::rotation(self.theta)
    }
}

/// NAK decomposition of `p`. `theta` is the principal value in `(-pi, pi]`.
pub fn iwasawa_decompose(p: &Sl2Matrix) -> Result<IwasawaCoord> {
    p.check_unimodular()?;
    let r2 = p.p21 * p.p21 + p.p22 * p.p22;
    let x = (p.p11 * p.p21 + p.p12 * p.p22) / r2;
    let y = 1.0 / r2;
    let mut theta = (-p.p21).atan2(p.p22);
    if theta == -std::f64::consts::PI {
        theta = std::f64::consts::PI;
    }
    Ok(IwasawaCoord { x, y, theta })
}

/// Closed-form `exp(tX)` dispatched on the sign of `det X`.
pub fn exp_algebra(x: &AlgebraVector, t: f64) -> Sl2Matrix {
    let m = x.matrix();
    let det = x.det();
    let (c0, c1) = if det.abs() < DET_DISPATCH * x.norm_squared() {
        (1.0, t)
    } else if det > 0.0 {
        let delta = det.sqrt();
        let (s, c) = (delta * t).sin_cos();
        (c, s / delta)
    } else {
        let delta = (-det).sqrt();
        ((delta * t).cosh(), (delta * t).sinh() / delta)
    };
    Sl2Matrix::from_entries(c0 + c1 * m[0][0], c1 * m[0][1], c1 * m[1][0], c0 + c1 * m[1][1])
}

/// Number of halvings used by [`exp_oracle`] for the matrix `tX`.
fn oracle_squarings(m: &[[f64; 2]; 2]) -> u32 {
    let norm = (m[0][0].abs() + m[0][1].abs()).max(m[1][0].abs() + m[1][1].abs());
    if norm <= 0.125 {
        0
    } else {
        (norm / 0.125).log2().ceil() as u32
    }
}

fn mat_mul(a: &[[f64; 2]; 2], b: &[[f64; 2]; 2]) -> [[f64; 2]; 2] {
    [
        [a[0][0] * b[0][0] + a[0][1] * b[1][0], a[0][0] * b[0][1] + a[0][1] * b[1][1]],
        [a[1][0] * b[0][0] + a[1][1] * b[1][0], a[1][0] * b[0][1] + a[1][1] * b[1][1]],
    ]
}

/// Scaling-and-squaring Taylor exponential of a general 2x2 matrix with
/// `extra` additional halvings beyond the default schedule.
pub fn series_exp(m: [[f64; 2]; 2], extra: u32) -> [[f64; 2]; 2] {
    let squarings = oracle_squarings(&m) + extra;
    let scale = 0.5f64.powi(squarings as i32);
    let b = [[m[0][0] * scale, m[0][1] * scale], [m[1][0] * scale, m[1][1] * scale]];
    let mut sum = [[1.0, 0.0], [0.0, 1.0]];
    let mut term = [[1.0, 0.0], [0.0, 1.0]];
    for n in 1..40 {
        term = mat_mul(&term, &b);
        let inv = 1.0 / n as f64;
        for row in term.iter_mut() {
            for v in row.iter_mut() {
                *v *= inv;
            }
        }
        let mut largest = 0.0f64;
        for i in 0..2 {
            for j in 0..2 {
                sum[i][j] += term[i][j];
                largest = largest.max(term[i][j].abs());
            }
        }
        if largest < 1e-20 {
            break;
        }
    }
    for _ in 0..squarings {
        sum = mat_mul(&sum, &sum);
    }
    sum
}

/// Independent series exponential of `tX`, used to validate [`exp_algebra`].
pub fn exp_oracle(x: &AlgebraVector, t: f64) -> Sl2Matrix {
    let m = x.matrix();
    let tm = [[t * m[0][0], t * m[0][1]], [t * m[1][0], t * m[1][1]]];
    Sl2Matrix::from_rows(series_exp(tm, 0))
}

/// Classification of the linear fractional transformation induced by an element.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum MobiusClass {
    Identity,
    Elliptic,
    Parabolic,
    Hyperbolic,
}

pub fn classify_mobius(p: &Sl2Matrix) -> MobiusClass {
    let id = Sl2Matrix::IDENTITY;
    let minus_id = Sl2Matrix::from_entries(-1.0, 0.0, 0.0, -1.0);
    if p.distance(&id) < TRACE_TOLERANCE || p.distance(&minus_id) < TRACE_TOLERANCE {
        return MobiusClass::Identity;
    }
    let tr = p.trace().abs();
    if (tr - 2.0).abs() <= TRACE_TOLERANCE {
        MobiusClass::Parabolic
    } else if tr < 2.0 {
        MobiusClass::Elliptic
    } else {
        MobiusClass::Hyperbolic
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::{E, FRAC_PI_4, PI};

    #[test]
    fn iwasawa_of_identity() {
        let c = iwasawa_decompose(&Sl2Matrix::IDENTITY).unwrap();
        assert_eq!((c.x, c.y, c.theta), (0.0, 1.0, 0.0));
    }

    #[test]
    fn iwasawa_of_unipotent() {
        let c = iwasawa_decompose(&Sl2Matrix::new(1.0, 1.0, 0.0, 1.0).unwrap()).unwrap();
        assert_eq!((c.x, c.y, c.theta), (1.0, 1.0, 0.0));
    }

    #[test]
    fn iwasawa_of_diagonal() {
        let p = Sl2Matrix::new(E, 0.0, 0.0, 1.0 / E).unwrap();
        let c = iwasawa_decompose(&p).unwrap();
        assert!(c.x.abs() < 1e-15);
        assert!((c.y - E * E).abs() < 1e-13);
        assert_eq!(c.theta, 0.0);
        let from_exp = iwasawa_decompose(&exp_algebra(&AlgebraVector::E3, 1.0)).unwrap();
        assert!((from_exp.y - E * E).abs() < 1e-13);
    }

    #[test]
    fn iwasawa_theta_principal_value() {
        let c = iwasawa_decompose(&Sl2Matrix::rotation(PI)).unwrap();
        assert!((c.theta - PI).abs() < 1e-15);
        let c = iwasawa_decompose(&Sl2Matrix::rotation(-3.0)).unwrap();
        assert!((c.theta + 3.0).abs() < 1e-14);
    }

    #[test]
    fn rejects_non_unit_determinant() {
        assert!(matches!(Sl2Matrix::new(2.0, 0.0, 0.0, 1.0), Err(Error::NonUnitDeterminant { .. })));
        let p = Sl2Matrix::from_entries(1.0, 0.0, 0.0, 1.1);
        assert!(iwasawa_decompose(&p).is_err());
    }

    #[test]
    fn exp_of_e1_is_unipotent() {
        for &t in &[-2.0, 0.3, 1.7] {
            let p = exp_algebra(&AlgebraVector::E1, t);
            assert!(p.distance(&Sl2Matrix::from_entries(1.0, SQRT_2 * t, 0.0, 1.0)) < 1e-15);
        }
    }

    #[test]
    fn exp_of_e3_is_diagonal() {
        let t = 0.8;
        let p = exp_algebra(&AlgebraVector::E3, t);
        let expected = Sl2Matrix::from_entries(t.exp(), 0.0, 0.0, (-t).exp());
        assert!(p.distance(&expected) < 1e-14);
    }

    #[test]
    fn exp_at_zero_is_identity() {
        for x in [AlgebraVector::E1, AlgebraVector::new(0.3, -1.2, 2.0), AlgebraVector::new(1.0, -1.0, 0.0)] {
            assert_eq!(exp_algebra(&x, 0.0), Sl2Matrix::IDENTITY);
            assert!(exp_oracle(&x, 0.0).distance(&Sl2Matrix::IDENTITY) < 1e-16);
        }
    }

    #[test]
    fn oracle_matches_e3_closed_form() {
        let p = exp_oracle(&AlgebraVector::E3, 1.0);
        assert!(p.distance(&Sl2Matrix::from_entries(E, 0.0, 0.0, 1.0 / E)) < 1e-12);
    }

    #[test]
    fn reeb_direction_exponentiates_to_rotation() {
        // E1 - E2 has matrix sqrt2 (E - F), det = 2, so exp(t(E1-E2)) = k(sqrt2 t).
        let x = AlgebraVector::new(1.0, -1.0, 0.0);
        for &t in &[0.1, 1.0, PI / SQRT_2, -2.5] {
            let p = exp_oracle(&x, t);
            assert!(p.distance(&Sl2Matrix::rotation(SQRT_2 * t)) < 1e-12);
            // orthogonal: p p^t = I
            let pt = Sl2Matrix::from_entries(p.p11, p.p21, p.p12, p.p22);
            assert!((p * pt).distance(&Sl2Matrix::IDENTITY) < 1e-12);
        }
    }

    #[test]
    fn oracle_is_stable_under_extra_squaring() {
        let x = AlgebraVector::new(0.7, -1.1, 0.4);
        let m = x.matrix();
        let tm = [[2.5 * m[0][0], 2.5 * m[0][1]], [2.5 * m[1][0], 2.5 * m[1][1]]];
        let a = Sl2Matrix::from_rows(series_exp(tm, 0));
        let b = Sl2Matrix::from_rows(series_exp(tm, 3));
        assert!(a.distance(&b) / a.max_abs() < 1e-12);
    }

    #[test]
    fn mobius_classes() {
        assert_eq!(classify_mobius(&Sl2Matrix::rotation(FRAC_PI_4)), MobiusClass::Elliptic);
        assert_eq!(classify_mobius(&Sl2Matrix::from_entries(1.0, 1.0, 0.0, 1.0)), MobiusClass::Parabolic);
        assert_eq!(classify_mobius(&Sl2Matrix::from_entries(2.0, 0.0, 0.0, 0.5)), MobiusClass::Hyperbolic);
        assert_eq!(classify_mobius(&Sl2Matrix::IDENTITY), MobiusClass::Identity);
        assert_eq!(classify_mobius(&Sl2Matrix::rotation(PI)), MobiusClass::Identity);
    }

    #[test]
    fn bracket_matches_matrix_commutator() {
        let x = AlgebraVector::new(0.3, -0.7, 1.9);
        let y = AlgebraVector::new(-1.2, 0.4, 0.5);
        let (mx, my) = (x.matrix(), y.matrix());
        let xy = mat_mul(&mx, &my);
        let yx = mat_mul(&my, &mx);
        let comm = [[xy[0][0] - yx[0][0], xy[0][1] - yx[0][1]], [xy[1][0] - yx[1][0], xy[1][1] - yx[1][1]]];
        let b = AlgebraVector::from_matrix(comm);
        assert!((b - x.bracket(&y)).max_abs() < 1e-14);
    }

    #[test]
    fn inner_product_is_half_trace() {
        let x = AlgebraVector::new(0.3, -0.7, 1.9);
        let y = AlgebraVector::new(-1.2, 0.4, 0.5);
        let (mx, my) = (x.matrix(), y.matrix());
        let mut tr = 0.0;
        for i in 0..2 {
            for j in 0..2 {
                tr += mx[j][i] * my[j][i];
            }
        }
        assert!((0.5 * tr - x.dot(&y)).abs() < 1e-14);
    }

    #[test]
    fn moebius_action_projects_iwasawa_point() {
        let c = IwasawaCoord::new(0.4, 2.3, 1.1).unwrap();
        let (x, y) = c.to_matrix().act(0.0, 1.0);
        assert!((x - 0.4).abs() < 1e-14 && (y - 2.3).abs() < 1e-14);
    }
}
