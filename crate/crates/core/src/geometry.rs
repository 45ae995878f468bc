//! Riemannian and Sasakian structure of SL(2,R).
//!
//! Tangent vectors live either in the orthonormal frame
//! `e1 = 2y d/dx - d/dtheta`, `e2 = 2y d/dy`, `e3 = d/dtheta` ([`FrameVector`])
//! or in the Lie algebra ([`AlgebraVector`]). The two are related by a
//! rotation through `2 theta`, see [`frame_to_algebra`].

use std::f64::consts::{FRAC_1_SQRT_2, SQRT_2};
use std::ops::{Add, Mul, Neg, Sub};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::lie::{AlgebraVector, IwasawaCoord};

/// Components in the orthonormal frame `{e1, e2, e3 = xi}`.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct FrameVector {
    pub v1: f64,
    pub v2: f64,
    pub v3: f64,
}

impl FrameVector {
    pub const ZERO: FrameVector = FrameVector::new(0.0, 0.0, 0.0);
    pub const XI: FrameVector = FrameVector::new(0.0, 0.0, 1.0);

    pub const fn new(v1: f64, v2: f64, v3: f64) -> Self {
        Self { v1, v2, v3 }
    }

    pub fn basis(index: usize) -> Result<Self> {
        let i = check_index(index)?;
        let mut v = [0.0; 3];
        v[i] = 1.0;
        Ok(Self::from_array(v))
    }

    pub fn from_array(v: [f64; 3]) -> Self {
        Self::new(v[0], v[1], v[2])
    }

    pub fn to_array(&self) -> [f64; 3] {
        [self.v1, self.v2, self.v3]
    }

    pub fn dot(&self, other: &Self) -> f64 {
        self.v1 * other.v1 + self.v2 * other.v2 + self.v3 * other.v3
    }

    pub fn norm(&self) -> f64 {
        self.dot(self).sqrt()
    }

    pub fn max_abs(&self) -> f64 {
        self.v1.abs().max(self.v2.abs()).max(self.v3.abs())
    }

    /// Contact form `eta(v) = v3`.
    pub fn eta(&self) -> f64 {
        self.v3
    }
}

impl Add for FrameVector {
    type Output = FrameVector;
    fn add(self, r: Self) -> Self {
        Self::new(self.v1 + r.v1, self.v2 + r.v2, self.v3 + r.v3)
    }
}

impl Sub for FrameVector {
    type Output = FrameVector;
    fn sub(self, r: Self) -> Self {
        Self::new(self.v1 - r.v1, self.v2 - r.v2, self.v3 - r.v3)
    }
}

impl Neg for FrameVector {
    type Output = FrameVector;
    fn neg(self) -> Self {
        Self::new(-self.v1, -self.v2, -self.v3)
    }
}

impl Mul<f64> for FrameVector {
    type Output = FrameVector;
    fn mul(self, s: f64) -> Self {
        Self::new(self.v1 * s, self.v2 * s, self.v3 * s)
    }
}

impl Mul<FrameVector> for f64 {
    type Output = FrameVector;
    fn mul(self, v: FrameVector) -> FrameVector {
        v * self
    }
}

/// A frame vector attached to a base point.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TangentAtPoint {
    pub base: IwasawaCoord,
    pub vec: FrameVector,
}

impl TangentAtPoint {
    pub fn new(base: IwasawaCoord, vec: FrameVector) -> Result<Self> {
        if !(base.y > 0.0) {
            return Err(Error::NonpositiveY(base.y));
        }
        Ok(Self { base, vec })
    }

    /// Coordinate components `(dx, dy, dtheta)`.
    pub fn coordinates(&self) -> (f64, f64, f64) {
        frame_to_coord_unchecked(self.base.y, &self.vec)
    }
}

fn check_index(index: usize) -> Result<usize> {
    if (1..=3).contains(&index) {
        Ok(index - 1)
    } else {
        Err(Error::IndexOutOfRange(index))
    }
}

/// Coframe evaluation: `(dx/(2y), dy/(2y), dtheta + dx/(2y))`.
pub fn coord_to_frame(base: &IwasawaCoord, dx: f64, dy: f64, dtheta: f64) -> Result<FrameVector> {
    if !(base.y > 0.0) {
        return Err(Error::NonpositiveY(base.y));
    }
    let w = dx / (2.0 * base.y);
    Ok(FrameVector::new(w, dy / (2.0 * base.y), dtheta + w))
}

/// Inverse of [`coord_to_frame`].
pub fn frame_to_coord(base: &IwasawaCoord, v: &FrameVector) -> Result<(f64, f64, f64)> {
    if !(base.y > 0.0) {
        return Err(Error::NonpositiveY(base.y));
    }
    Ok(frame_to_coord_unchecked(base.y, v))
}

fn frame_to_coord_unchecked(y: f64, v: &FrameVector) -> (f64, f64, f64) {
    (2.0 * y * v.v1, 2.0 * y * v.v2, v.v3 - v.v1)
}

/// Frame structure constants: `[e_i, e_j] = sum_k BRACKETS[i][j][k] e_k`.
pub const BRACKETS: [[[i8; 3]; 3]; 3] =
    [[[0, 0, 0], [-2, 0, -2], [0, 0, 0]], [[2, 0, 2], [0, 0, 0], [0, 0, 0]], [[0, 0, 0], [0, 0, 0], [0, 0, 0]]];

/// `nabla_{e_i} e_j`.
pub const CONNECTION: [[[i8; 3]; 3]; 3] =
    [[[0, 2, 0], [-2, 0, -1], [0, 1, 0]], [[0, 0, 1], [0, 0, 0], [-1, 0, 0]], [[0, 1, 0], [-1, 0, 0], [0, 0, 0]]];

/// Nonzero entries `R(e_i, e_j) e_k` with `i < j`, stored 1-based.
const CURVATURE_ENTRIES: [((usize, usize, usize), [i8; 3]); 6] = [
    ((1, 2, 1), [0, 7, 0]),
    ((1, 2, 2), [-7, 0, 0]),
    ((1, 3, 1), [0, 0, -1]),
    ((1, 3, 3), [1, 0, 0]),
    ((2, 3, 2), [0, 0, -1]),
    ((2, 3, 3), [0, 1, 0]),
];

/// Integer connection and curvature tables in the frame.
///
/// The canonical instance is the ground truth; the struct exists so the
/// verification routines can be exercised against a corrupted copy.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FrameTables {
    pub connection: [[[i8; 3]; 3]; 3],
    pub curvature: [[[[i8; 3]; 3]; 3]; 3],
}

impl FrameTables {
    pub fn canonical() -> Self {
        let mut curvature = [[[[0i8; 3]; 3]; 3]; 3];
        for &((i, j, k), v) in CURVATURE_ENTRIES.iter() {
            curvature[i - 1][j - 1][k - 1] = v;
            curvature[j - 1][i - 1][k - 1] = [-v[0], -v[1], -v[2]];
        }
        Self { connection: CONNECTION, curvature }
    }
}

fn to_frame(v: [i8; 3]) -> FrameVector {
    FrameVector::new(v[0] as f64, v[1] as f64, v[2] as f64)
}

/// Table entry `nabla_{e_i} e_j` (1-based indices).
pub fn nabla_frame(i: usize, j: usize) -> Result<FrameVector> {
    Ok(to_frame(CONNECTION[check_index(i)?][check_index(j)?]))
}

/// Table entry `R(e_i, e_j) e_k` (1-based indices).
pub fn curvature_frame(i: usize, j: usize, k: usize) -> Result<FrameVector> {
    let (i, j, k) = (check_index(i)?, check_index(j)?, check_index(k)?);
    Ok(to_frame(FrameTables::canonical().curvature[i][j][k]))
}

/// Covariant derivative of the constant-component field `y` along `x`.
pub fn nabla_constant(x: &FrameVector, y: &FrameVector) -> FrameVector {
    nabla_with(&CONNECTION, x, y)
}

fn nabla_with(table: &[[[i8; 3]; 3]; 3], x: &FrameVector, y: &FrameVector) -> FrameVector {
    let (xa, ya) = (x.to_array(), y.to_array());
    let mut out = [0.0; 3];
    for i in 0..3 {
        for j in 0..3 {
            let w = xa[i] * ya[j];
            if w != 0.0 {
                for (k, o) in out.iter_mut().enumerate() {
                    *o += w * table[i][j][k] as f64;
                }
            }
        }
    }
    FrameVector::from_array(out)
}

/// Covariant acceleration of a curve from its frame velocity `v` and the
/// derivative `dv` of those frame components.
pub fn covariant_acceleration(v: &FrameVector, dv: &FrameVector) -> FrameVector {
    *dv + nabla_constant(v, v)
}

/// `R(x, y) z` evaluated from the canonical table.
pub fn curvature(x: &FrameVector, y: &FrameVector, z: &FrameVector) -> FrameVector {
    let table = FrameTables::canonical().curvature;
    let (xa, ya, za) = (x.to_array(), y.to_array(), z.to_array());
    let mut out = FrameVector::ZERO;
    for i in 0..3 {
        for j in 0..3 {
            for k in 0..3 {
                let w = xa[i] * ya[j] * za[k];
                if w != 0.0 {
                    out = out + to_frame(table[i][j][k]) * w;
                }
            }
        }
    }
    out
}

/// Closed-form curvature in terms of `(phi, xi, eta, g)`.
pub fn curvature_formula(x: &FrameVector, y: &FrameVector, z: &FrameVector) -> FrameVector {
    let g = |a: &FrameVector, b: &FrameVector| a.dot(b);
    let xi = FrameVector::XI;
    let (px, py, pz) = (phi_frame(x), phi_frame(y), phi_frame(z));
    let bracket = *y * (z.eta() * x.eta()) - *x * (y.eta() * z.eta()) + xi * (g(z, x) * y.eta())
        - xi * (g(y, z) * x.eta())
        - px * g(y, &pz)
        - py * g(z, &px)
        + pz * (2.0 * g(x, &py));
    *y * g(z, x) - *x * g(y, z) - bracket * 2.0
}

/// Connection re-derived from the bracket table by the Koszul formula
/// `g(nabla_i e_j, e_k) = (c_ij^k - c_jk^i + c_ki^j) / 2`.
pub fn koszul_connection() -> [[[f64; 3]; 3]; 3] {
    let c = |i: usize, j: usize, k: usize| BRACKETS[i][j][k] as f64;
    let mut out = [[[0.0; 3]; 3]; 3];
    for i in 0..3 {
        for j in 0..3 {
            for k in 0..3 {
                out[i][j][k] = 0.5 * (c(i, j, k) - c(j, k, i) + c(k, i, j));
            }
        }
    }
    out
}

/// Curvature `R(e_i,e_j)e_k = nabla_i nabla_j e_k - nabla_j nabla_i e_k - nabla_[e_i,e_j] e_k`
/// computed from a connection table with constant coefficients.
pub fn curvature_from_connection(conn: &[[[i8; 3]; 3]; 3]) -> [[[[f64; 3]; 3]; 3]; 3] {
    let mut out = [[[[0.0; 3]; 3]; 3]; 3];
    let e = |l: usize| {
        let mut v = [0.0; 3];
        v[l] = 1.0;
        FrameVector::from_array(v)
    };
    for i in 0..3 {
        for j in 0..3 {
            for k in 0..3 {
                let njk = to_frame(conn[j][k]);
                let nik = to_frame(conn[i][k]);
                let t1 = nabla_with(conn, &e(i), &njk);
                let t2 = nabla_with(conn, &e(j), &nik);
                let t3 = nabla_with(conn, &to_frame(BRACKETS[i][j]), &e(k));
                out[i][j][k] = (t1 - t2 - t3).to_array();
            }
        }
    }
    out
}

/// Result of comparing integer tables against their re-derivations.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TableCheck {
    pub connection_mismatches: usize,
    pub curvature_mismatches: usize,
    pub formula_mismatches: usize,
    pub metric_compatibility_violations: usize,
    pub phi_sectional_curvature: f64,
}

impl TableCheck {
    pub fn passed(&self) -> bool {
        self.connection_mismatches == 0
            && self.curvature_mismatches == 0
            && self.formula_mismatches == 0
            && self.metric_compatibility_violations == 0
            && self.phi_sectional_curvature == -7.0
    }
}

/// Checks the connection table against Koszul and the curvature table
/// against both the connection and the closed-form formula.
pub fn check_tables(tables: &FrameTables) -> TableCheck {
    let koszul = koszul_connection();
    let mut connection_mismatches = 0;
    let mut metric_compatibility_violations = 0;
    for i in 0..3 {
        for j in 0..3 {
            for k in 0..3 {
                if tables.connection[i][j][k] as f64 != koszul[i][j][k] {
                    connection_mismatches += 1;
                }
                if tables.connection[i][j][k] + tables.connection[i][k][j] != 0 {
                    metric_compatibility_violations += 1;
                }
            }
        }
    }
    let derived = curvature_from_connection(&tables.connection);
    let basis = [FrameVector::new(1.0, 0.0, 0.0), FrameVector::new(0.0, 1.0, 0.0), FrameVector::XI];
    let mut curvature_mismatches = 0;
    let mut formula_mismatches = 0;
    for i in 0..3 {
        for j in 0..3 {
            for k in 0..3 {
                let stored = to_frame(tables.curvature[i][j][k]);
                if stored.to_array() != derived[i][j][k] {
                    curvature_mismatches += 1;
                }
                if stored != curvature_formula(&basis[i], &basis[j], &basis[k]) {
                    formula_mismatches += 1;
                }
            }
        }
    }
    // g(R(e1, phi e1) phi e1, e1) with phi e1 = e2
    let phi_sectional_curvature = tables.curvature[0][1][1][0] as f64;
    TableCheck {
        connection_mismatches,
        curvature_mismatches,
        formula_mismatches,
        metric_compatibility_violations,
        phi_sectional_curvature,
    }
}

/// `phi(v1, v2, v3) = (-v2, v1, 0)`.
pub fn phi_frame(v: &FrameVector) -> FrameVector {
    FrameVector::new(-v.v2, v.v1, 0.0)
}

/// `phi` on the algebra: `-(c/sqrt2)(E1 + E2) + ((a + b)/sqrt2) E3`.
pub fn phi_algebra(x: &AlgebraVector) -> AlgebraVector {
    let s = -x.c * FRAC_1_SQRT_2;
    AlgebraVector::new(s, s, (x.a + x.b) * FRAC_1_SQRT_2)
}

/// `eta` on the algebra, the component along `xi = (E1 - E2)/sqrt2`.
pub fn eta_algebra(x: &AlgebraVector) -> f64 {
    x.dot(&AlgebraVector::reeb())
}

/// Symmetric tensor `U` with `nabla_X Y = [X, Y]/2 + U(X, Y)` on left-invariant fields.
pub fn u_tensor(x: &AlgebraVector, y: &AlgebraVector) -> AlgebraVector {
    // U(E1,E1) = 2E3, U(E2,E2) = -2E3, U(E1,E3) = -(E1+E2), U(E2,E3) = E1+E2
    let k = -(x.a * y.c + x.c * y.a) + (x.b * y.c + x.c * y.b);
    AlgebraVector::new(k, k, 2.0 * (x.a * y.a - x.b * y.b))
}

pub fn nabla_leftinvariant(x: &AlgebraVector, y: &AlgebraVector) -> AlgebraVector {
    x.bracket(y) * 0.5 + u_tensor(x, y)
}

/// Algebra element (body velocity `p^-1 dp`) of a frame vector at a point with angle `theta`.
pub fn frame_to_algebra(v: &FrameVector, theta: f64) -> AlgebraVector {
    let (s, c) = (2.0 * theta).sin_cos();
    // E + F = (E1 + E2)/sqrt2, H = E3, E - F = (E1 - E2)/sqrt2
    let ef = c * v.v1 + s * v.v2;
    let h = -s * v.v1 + c * v.v2;
    AlgebraVector::new((ef + v.v3) * FRAC_1_SQRT_2, (ef - v.v3) * FRAC_1_SQRT_2, h)
}

/// Inverse of [`frame_to_algebra`].
pub fn algebra_to_frame(x: &AlgebraVector, theta: f64) -> FrameVector {
    let (s, c) = (2.0 * theta).sin_cos();
    let ef = (x.a + x.b) / SQRT_2;
    let v3 = (x.a - x.b) / SQRT_2;
    FrameVector::new(c * ef - s * x.c, s * ef + c * x.c, v3)
}

/// Maximum residual per Sasakian identity over random samples.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SasakianReport {
    pub samples: usize,
    pub phi_squared: f64,
    pub d_eta: f64,
    pub d_eta_finite_difference: f64,
    pub compatibility: f64,
    pub nabla_xi: f64,
    pub nabla_phi: f64,
}

impl SasakianReport {
    pub fn max_residual(&self) -> f64 {
        self.phi_squared.max(self.d_eta).max(self.compatibility).max(self.nabla_xi).max(self.nabla_phi)
    }
}

/// `d eta(X, Y) = (X(eta(Y)) - Y(eta(X)) - eta([X, Y]))/2` on constant-component fields.
fn d_eta_frame(x: &FrameVector, y: &FrameVector) -> f64 {
    let xa = x.to_array();
    let ya = y.to_array();
    let mut eta_bracket = 0.0;
    for i in 0..3 {
        for j in 0..3 {
            eta_bracket += xa[i] * ya[j] * BRACKETS[i][j][2] as f64;
        }
    }
    -0.5 * eta_bracket
}

/// `d eta` from the coordinate expression `eta = dtheta + dx/(2y)` by central
/// differences of the component functions, in the same half convention.
fn d_eta_coordinates(base: &IwasawaCoord, x: &FrameVector, y: &FrameVector) -> f64 {
    let eta_components = |p: [f64; 3]| [1.0 / (2.0 * p[1]), 0.0, 1.0];
    let h = 1e-5 * base.y;
    let p0 = [base.x, base.y, base.theta];
    let mut jac = [[0.0; 3]; 3]; // jac[a][b] = d eta_b / d coordinate_a
    for (a, row) in jac.iter_mut().enumerate() {
        let (mut pp, mut pm) = (p0, p0);
        pp[a] += h;
        pm[a] -= h;
        let (ep, em) = (eta_components(pp), eta_components(pm));
        for b in 0..3 {
            row[b] = (ep[b] - em[b]) / (2.0 * h);
        }
    }
    let (xc, yc) = (frame_to_coord_unchecked(base.y, x), frame_to_coord_unchecked(base.y, y));
    let (xv, yv) = ([xc.0, xc.1, xc.2], [yc.0, yc.1, yc.2]);
    let mut total = 0.0;
    for a in 0..3 {
        for b in 0..3 {
            total += (jac[a][b] - jac[b][a]) * xv[a] * yv[b];
        }
    }
    0.5 * total
}

/// Evaluates the Sasakian identities at `point_samples` random points and vectors.
pub fn verify_sasakian(point_samples: usize, seed: u64) -> SasakianReport {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut report = SasakianReport {
        samples: point_samples,
        phi_squared: 0.0,
        d_eta: 0.0,
        d_eta_finite_difference: 0.0,
        compatibility: 0.0,
        nabla_xi: 0.0,
        nabla_phi: 0.0,
    };
    let random_vec = |rng: &mut ChaCha8Rng| {
        FrameVector::new(rng.gen_range(-2.0..2.0), rng.gen_range(-2.0..2.0), rng.gen_range(-2.0..2.0))
    };
    for _ in 0..point_samples {
        let base =
            IwasawaCoord { x: rng.gen_range(-5.0..5.0), y: rng.gen_range(0.1..5.0), theta: rng.gen_range(-10.0..10.0) };
        // Sample coordinate vectors and pass through the coframe, so the
        // conversion is part of what is checked.
        let x = coord_of(&base, random_vec(&mut rng));
        let y = coord_of(&base, random_vec(&mut rng));
        let xi = FrameVector::XI;

        let phi2 = phi_frame(&phi_frame(&x)) - (-x + xi * x.eta());
        report.phi_squared = report.phi_squared.max(phi2.max_abs());

        let de = d_eta_frame(&x, &y);
        report.d_eta = report.d_eta.max((de - phi_frame(&x).dot(&y)).abs());
        let fd = d_eta_coordinates(&base, &x, &y);
        report.d_eta_finite_difference = report.d_eta_finite_difference.max((fd - de).abs());

        let compat = phi_frame(&x).dot(&phi_frame(&y)) - (x.dot(&y) - x.eta() * y.eta());
        report.compatibility = report.compatibility.max(compat.abs());

        let nxi = nabla_constant(&x, &xi) - phi_frame(&x);
        report.nabla_xi = report.nabla_xi.max(nxi.max_abs());

        let lhs = nabla_constant(&x, &phi_frame(&y)) - phi_frame(&nabla_constant(&x, &y));
        let rhs = -xi * x.dot(&y) + x * y.eta();
        report.nabla_phi = report.nabla_phi.max((lhs - rhs).max_abs());
    }
    report
}

fn coord_of(base: &IwasawaCoord, v: FrameVector) -> FrameVector {
    coord_to_frame(base, v.v1, v.v2, v.v3).expect("sampled y is positive")
}
