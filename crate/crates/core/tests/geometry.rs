use curvquad::geometry::{closest_point, frame_curvatures, fundamental_forms, h_hat_range, local_frame, normal_curvature, Element, Vec3};
use nalgebra::{Matrix2, Rotation3, Vector2};
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn sphere_element() -> Element {
    Element::spherical(1.5, Vec3::new(1.0, 0.1, 0.2), Vec3::new(0.2, 1.0, 0.1), Vec3::new(0.1, 0.3, 1.0))
}

/// Curvature of the cross-section of the surface with the normal plane
/// spanned by `t` and `n` at `r(u0, v0)`, from the second difference of the
/// height of the section curve over the tangent line.
fn section_curvature(elem: &Element, u0: f64, v0: f64, t: &Vec3, step: f64) -> f64 {
    let s0 = elem.sample(u0, v0).unwrap();
    let b = s0.n.cross(t);
    let height = |sarc: f64| {
        let (mut u, mut v) = (u0, v0);
        for _ in 0..50 {
            let s = elem.sample(u, v).unwrap();
            let d = s.r - s0.r;
            let res = Vector2::new(d.dot(&b), d.dot(t) - sarc);
            let jac = Matrix2::new(s.r_u.dot(&b), s.r_v.dot(&b), s.r_u.dot(t), s.r_v.dot(t));
            let dx = jac.lu().solve(&res).unwrap();
            u -= dx.x;
            v -= dx.y;
            if dx.norm() < 1e-15 {
                break;
            }
        }
        (elem.point(u, v) - s0.r).dot(&s0.n)
    };
    (height(step) + height(-step)) / (step * step)
}

#[test]
fn normal_curvature_matches_cross_section() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for elem in [Element::paraboloid(-0.6), Element::paraboloid(0.6), sphere_element()] {
        for _ in 0..20 {
            let (u, v) = (rng.gen_range(0.2..0.4), rng.gen_range(0.2..0.4));
            let s = elem.sample(u, v).unwrap();
            let a: f64 = rng.gen_range(0.0..std::f64::consts::TAU);
            let t = (s.r_u.normalize() * a.cos() + s.n.cross(&s.r_u).normalize() * a.sin()).normalize();
            let want = section_curvature(&elem, u, v, &t, 1e-3);
            let got = normal_curvature(&s, &t).unwrap();
            assert!((got - want).abs() < 1e-5, "{got} vs {want}");
        }
    }
}

#[test]
fn sphere_curvature_is_isotropic() {
    let e = sphere_element();
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    for _ in 0..200 {
        let (u, v) = (rng.gen_range(0.0..0.5), rng.gen_range(0.0..0.5));
        let s = e.sample(u, v).unwrap();
        let r_p = Vec3::new(rng.gen_range(-3.0..3.0), rng.gen_range(-3.0..3.0), rng.gen_range(-3.0..3.0));
        let (k1, k2) = frame_curvatures(&s, &local_frame(&s, &r_p));
        assert!((k1 + 1.0 / 1.5).abs() < 1e-12 && (k2 + 1.0 / 1.5).abs() < 1e-12, "{k1} {k2}");
        let ff = fundamental_forms(&s);
        assert!((ff.gaussian_curvature() - 1.0 / 2.25).abs() < 1e-12);
    }
}

fn element_strategy() -> impl Strategy<Value = Element> {
    prop_oneof![(-1.0..1.0f64).prop_map(Element::paraboloid), Just(sphere_element())]
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(256))]

    #[test]
    fn frame_identities(
        elem in element_strategy(),
        u in 0.0..0.5f64,
        v in 0.0..0.5f64,
        p in prop::array::uniform3(-2.0..2.0f64),
    ) {
        let s = elem.sample(u, v).unwrap();
        let r_p = Vec3::from(p);
        let f = local_frame(&s, &r_p);
        prop_assume!(f.r > 1e-6);
        prop_assert!((f.r * f.r - f.rho * f.rho - f.h * f.h).abs() < 1e-12 * f.r * f.r.max(1.0));
        prop_assert!((f.h - s.n.dot(&(r_p - s.r))).abs() < 1e-14 * f.r.max(1.0));
        prop_assert!(f.rho_hat.dot(&s.n).abs() < 1e-12);
        prop_assert!((f.rho_hat.norm() - 1.0).abs() < 1e-12);
        prop_assert!((f.rho_tilde - s.n.cross(&f.rho_hat)).norm() < 1e-15);
        prop_assert!((f.rho_vec - f.rho_hat * f.rho).norm() < 1e-12 * f.r.max(1.0));
    }

    #[test]
    fn rigid_motion_invariance(
        sigma in -1.0..1.0f64,
        u in 0.05..0.45f64,
        v in 0.05..0.45f64,
        axis in prop::array::uniform3(-1.0..1.0f64),
        angle in 0.0..6.0f64,
        shift in prop::array::uniform3(-5.0..5.0f64),
        h in 0.05..1.0f64,
    ) {
        prop_assume!(Vec3::from(axis).norm() > 0.1);
        let rot = Rotation3::from_axis_angle(&nalgebra::Unit::new_normalize(Vec3::from(axis)), angle).into_inner();
        let shift = Vec3::from(shift);
        let e = Element::paraboloid(sigma);
        let moved = e.transformed(&rot, &shift);
        let s = e.sample(u, v).unwrap();
        let r_p = s.r + s.n * h;
        let sm = moved.sample(u, v).unwrap();
        let r_pm = rot * r_p + shift;
        let (a1, a2) = frame_curvatures(&s, &local_frame(&s, &r_p));
        let (b1, b2) = frame_curvatures(&sm, &local_frame(&sm, &r_pm));
        prop_assert!((a1 - b1).abs() < 1e-10 && (a2 - b2).abs() < 1e-10);
        let c1 = closest_point(&e, &r_p, 1e-13);
        let c2 = closest_point(&moved, &r_pm, 1e-13);
        prop_assert!((c1.dist - c2.dist).abs() < 1e-9);
        let (l1, h1) = h_hat_range(&e, &r_p, 16).unwrap();
        let (l2, h2) = h_hat_range(&moved, &r_pm, 16).unwrap();
        prop_assert!((l1 - l2).abs() < 1e-8 && (h1 - h2).abs() < 1e-8);
    }

    #[test]
    fn closest_point_recovers_normal_offset(u in 0.1..0.4f64, v in 0.1..0.4f64, h in 1e-4..0.2f64, sigma in -0.6..0.6f64) {
        let e = Element::paraboloid(sigma);
        let s = e.sample(u, v).unwrap();
        let c = closest_point(&e, &(s.r + s.n * h), 1e-13);
        prop_assert!(c.converged);
        prop_assert!((c.u - u).abs() < 1e-7 && (c.v - v).abs() < 1e-7, "({}, {}) vs ({u}, {v})", c.u, c.v);
        prop_assert!((c.dist - h).abs() < 1e-10);
    }
}
