use std::f64::consts::{FRAC_1_SQRT_2, PI, SQRT_2};

use proptest::prelude::*;

use sl2mag_core::geometry::{
    algebra_to_frame, curvature, curvature_formula, frame_to_algebra, nabla_constant, phi_frame, u_tensor, FrameVector,
};
use sl2mag_core::homogeneous::{
    contact_angle, exp_trajectory_check, is_homogeneous_geodesic, is_homogeneous_magnetic, project_exp_curve,
    projected_point, Convention, RESIDUAL_TOLERANCE,
};
use sl2mag_core::hyperbolic::{angle_flow, cayley_unchecked, tan_rescale, EuclideanShape};
use sl2mag_core::lie::{classify_mobius, exp_algebra, iwasawa_decompose, AlgebraVector, IwasawaCoord, MobiusClass};
use sl2mag_core::numdiff::{derivative, DEFAULT_STEP};
use sl2mag_core::periodicity::{
    closing_period_count, detect_closure, quantization_parameter, quantization_roots, wrap_angle, CLOSURE_TOLERANCE,
};
use sl2mag_core::trajectory::{lorentz_rhs, ClosedFormTrajectory, MagneticParams, TrajectoryState};

fn algebra() -> impl Strategy<Value = AlgebraVector> {
    (-1.0..1.0f64, -1.0..1.0f64, -1.0..1.0f64).prop_map(|(a, b, c)| AlgebraVector::new(a, b, c))
}

fn unit_algebra() -> impl Strategy<Value = AlgebraVector> {
    algebra().prop_filter("not too small", |x| x.norm() > 0.2).prop_map(|x| x.normalized().unwrap())
}

fn frame() -> impl Strategy<Value = FrameVector> {
    (-2.0..2.0f64, -2.0..2.0f64, -2.0..2.0f64).prop_map(|(a, b, c)| FrameVector::new(a, b, c))
}

fn coord() -> impl Strategy<Value = IwasawaCoord> {
    (-3.0..3.0f64, 0.05..20.0f64, -PI..PI).prop_map(|(x, y, t)| IwasawaCoord { x, y, theta: t })
}

proptest! {
    #[test]
    fn exp_is_a_one_parameter_group(x in algebra(), s in -1.5..1.5f64, t in -1.5..1.5f64) {
        let lhs = exp_algebra(&x, s + t);
        let rhs = exp_algebra(&x, s) * exp_algebra(&x, t);
        prop_assert!(lhs.distance(&rhs) < 1e-11 * lhs.max_abs().max(1.0));
        prop_assert!((lhs.det() - 1.0).abs() < 1e-11 * lhs.max_abs().powi(2).max(1.0));
    }

    #[test]
    fn iwasawa_round_trip(c in coord()) {
        let back = iwasawa_decompose(&c.to_matrix()).unwrap();
        prop_assert!((back.x - c.x).abs() < 1e-10 * (1.0 + c.x.abs()));
        prop_assert!((back.y - c.y).abs() < 1e-12 * c.y.max(1.0 / c.y));
        prop_assert!(wrap_angle(back.theta - c.theta).abs() < 1e-10);
    }

    #[test]
    fn mobius_class_follows_determinant_sign(x in unit_algebra(), t in 0.2..1.2f64) {
        // X^2 = -det(X) I: elliptic for det > 0 (as long as t sqrt(det) < pi), hyperbolic for det < 0
        let d = x.det();
        prop_assume!(d.abs() > 1e-3);
        let class = classify_mobius(&exp_algebra(&x, t));
        let expected = if d > 0.0 { MobiusClass::Elliptic } else { MobiusClass::Hyperbolic };
        prop_assert_eq!(class, expected);
    }

    #[test]
    fn frame_and_algebra_are_inverse(v in frame(), theta in -PI..PI) {
        let back = algebra_to_frame(&frame_to_algebra(&v, theta), theta);
        prop_assert!((back - v).max_abs() < 1e-13);
        // the correspondence is an isometry
        prop_assert!((frame_to_algebra(&v, theta).norm() - v.norm()).abs() < 1e-13);
    }

    #[test]
    fn sasakian_identities(x in frame(), y in frame()) {
        let xi = FrameVector::XI;
        let phi2 = phi_frame(&phi_frame(&x));
        prop_assert!((phi2 - (-1.0 * x + x.eta() * xi)).max_abs() < 1e-14);
        prop_assert!((phi_frame(&x).dot(&phi_frame(&y)) - (x.dot(&y) - x.eta() * y.eta())).abs() < 1e-13);
        prop_assert!((nabla_constant(&x, &xi) - phi_frame(&x)).max_abs() < 1e-14);
    }

    #[test]
    fn curvature_table_agrees_with_formula(x in frame(), y in frame(), z in frame()) {
        let a = curvature(&x, &y, &z);
        let b = curvature_formula(&x, &y, &z);
        prop_assert!((a - b).max_abs() < 1e-11);
    }

    #[test]
    fn geodesic_criterion_matches_tensor(a in -1.0..1.0f64, c in -1.0..1.0f64) {
        let x = AlgebraVector::new(a, a, c);
        prop_assume!(x.norm() > 1e-3);
        prop_assert!(is_homogeneous_geodesic(&x).unwrap());
        prop_assert!(u_tensor(&x, &x).max_abs() < 1e-15);
        let y = AlgebraVector::new(a, a + 0.5, c);
        prop_assert!(!is_homogeneous_geodesic(&y).unwrap() || (y.c == 0.0 && y.a == -y.b));
    }

    #[test]
    fn magnetic_criterion_matches_residual(x in unit_algebra(), dq in 0.05..1.0f64) {
        let q = 2.0 * SQRT_2 * (x.a - x.b);
        prop_assert!(is_homogeneous_magnetic(&x, q, Convention::UnitSpeed).unwrap());
        prop_assert!(exp_trajectory_check(&x, q, 1.0, 3).unwrap().passed(RESIDUAL_TOLERANCE));
        // phi X vanishes only on the Reeb line; elsewhere a wrong strength leaves a residual
        let horizontal = ((x.a + x.b).powi(2) / 2.0 + x.c * x.c).sqrt();
        prop_assume!(horizontal > 1e-3);
        prop_assert!(!is_homogeneous_magnetic(&x, q + dq, Convention::UnitSpeed).unwrap());
        prop_assert!(exp_trajectory_check(&x, q + dq, 1.0, 3).unwrap().max_residual > 10.0 * RESIDUAL_TOLERANCE);
    }

    #[test]
    fn contact_angle_is_eta_over_norm(x in unit_algebra()) {
        let sigma = contact_angle(&x).unwrap();
        prop_assert!((sigma.cos() - (x.a - x.b) * FRAC_1_SQRT_2).abs() < 1e-12);
    }

    #[test]
    fn projection_conic_contains_projection(x in unit_algebra(), t in -2.0..2.0f64) {
        let conic = match project_exp_curve(&x) {
            Ok(c) => c,
            Err(_) => return Ok(()),
        };
        let (px, py) = projected_point(&x, t);
        let scale = match conic.shape {
            EuclideanShape::Circle { radius, .. } => radius.max(1.0).powi(2),
            EuclideanShape::Line { .. } => 1.0,
        };
        prop_assert!(conic.shape.residual(px, py).abs() < 1e-9 * scale);
    }

    #[test]
    fn tan_rescale_is_increasing_and_consistent(psi in -20.0..20.0f64, c in 0.05..5.0f64) {
        prop_assert!(tan_rescale(psi + 1e-3, c) > tan_rescale(psi, c));
        let r = tan_rescale(psi, c);
        prop_assume!(psi.cos().abs() > 1e-3);
        prop_assert!((r.tan() - c * psi.tan()).abs() < 1e-8 * (1.0 + (c * psi.tan()).abs()).powi(2));
    }

    #[test]
    fn angle_flow_solves_its_equation(k in -4.0..4.0f64, amp in 0.1..2.0f64, mu0 in -PI..PI, s in 0.0..3.0f64) {
        let d = derivative(|v| angle_flow(k, amp, mu0, v), s, DEFAULT_STEP);
        let mu = angle_flow(k, amp, mu0, s);
        prop_assert!((d - (k - 2.0 * amp * mu.cos())).abs() < 1e-6);
    }

    #[test]
    fn closed_form_solves_reduced_system(q in -5.0..5.0f64, sigma in 0.1..3.0f64, u0 in -PI..PI, s in 0.0..2.0f64) {
        let p = MagneticParams::new(q, sigma).unwrap();
        let traj = ClosedFormTrajectory::new(p, TrajectoryState { x: 0.3, y: 1.0, theta: 0.0, u: u0, s: 0.0 }).unwrap();
        let st = traj.state(s);
        prop_assume!(st.y > 1e-3);
        let rhs = lorentz_rhs(&st, &p).unwrap();
        let h = 1e-4 * st.y.min(1.0);
        let num = [
            derivative(|v| traj.state(v).x, s, h),
            derivative(|v| traj.state(v).y, s, h),
            derivative(|v| traj.state(v).theta, s, h),
            derivative(|v| traj.state(v).u, s, h),
        ];
        for i in 0..4 {
            prop_assert!((num[i] - rhs[i]).abs() < 1e-6 * (1.0 + rhs[i].abs()), "component {} {} vs {}", i, num[i], rhs[i]);
        }
        // unit speed, constant contact angle
        let v = st.velocity(&p);
        prop_assert!((v.norm() - 1.0).abs() < 1e-14 && (v.eta() - p.cos_sigma()).abs() < 1e-15);
    }

    #[test]
    fn quantization_roots_solve_quadratic(m in 1u32..12, k in 1u32..12, sigma in 0.1..3.0f64) {
        prop_assume!(m != k && sl2mag_core::periodicity::gcd(m, k) == 1);
        let a = quantization_parameter(m, k);
        let c = sigma.cos();
        for q in quantization_roots(m, k, sigma).unwrap() {
            let v = 0.5 * (1.0 + a) * q * q - 4.0 * a * c * q + 8.0 * a * c * c - 4.0;
            prop_assert!(v.abs() < 1e-9 * (1.0 + q * q));
        }
    }

    #[test]
    fn accepted_roots_close_after_predicted_periods(m in 1u32..12, k in 1u32..12, sigma in 0.1..3.0f64) {
        prop_assume!(m != k && sl2mag_core::periodicity::gcd(m, k) == 1);
        let cert = sl2mag_core::periodicity::certify(m, k, sigma).unwrap();
        for s in cert.strengths {
            let c = detect_closure(&MagneticParams::new(s.q, sigma).unwrap(), 4 * k, CLOSURE_TOLERANCE).unwrap();
            prop_assert_eq!(c.n_periods, closing_period_count(m, k));
        }
    }

    #[test]
    fn cayley_lands_in_unit_disk(x in -50.0..50.0f64, y in 1e-3..50.0f64) {
        let (u, v) = cayley_unchecked(x, y);
        prop_assert!(u * u + v * v < 1.0);
    }

    #[test]
    fn wrap_angle_range(a in -100.0..100.0f64) {
        let w = wrap_angle(a);
        prop_assert!(w > -PI - 1e-12 && w <= PI);
        prop_assert!(((a - w) / (2.0 * PI) - ((a - w) / (2.0 * PI)).round()).abs() < 1e-9);
    }
}
