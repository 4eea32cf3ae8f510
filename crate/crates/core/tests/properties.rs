use maxwell_core::composite::{Bulk, CompositeModel, EquilibriumParams};
use maxwell_core::constitutive::{
    ifebm_step_lagrangian, quad_root_x, solve_phi, stress_2pk, LagrangianState, MaterialParams, Method,
};
use maxwell_core::sampling;
use maxwell_core::tensor3::{SymTensor3, Tensor3};
use proptest::prelude::*;

fn params() -> impl Strategy<Value = MaterialParams> {
    (0.0..2.0f64, 0.0..2.0f64, -3.0..3.0f64)
        .prop_filter("positive shear modulus", |(a, b, _)| a + b > 1e-3)
        .prop_map(|(c10, c01, log_eta)| MaterialParams { c10, c01, eta: 10f64.powf(log_eta) })
}

/// Right Cauchy-Green tensor with principal stretches in roughly [1/3, 3].
fn strain(seed: u64) -> SymTensor3 {
    sampling::spd(&mut sampling::rng(seed), 0.1, 10.0)
}

fn state(seed: u64) -> LagrangianState {
    LagrangianState::new(sampling::unimodular_spd(&mut sampling::rng(seed ^ 0x5eed), 3.0)).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(2000))]

    #[test]
    fn unimodular_part_has_unit_determinant(seed: u64, scale in -3.0..3.0f64) {
        // the cofactor determinant itself loses about cond(A) ulps
        let a = sampling::spd(&mut sampling::rng(seed), 1.0 / 3.0, 3.0) * 10f64.powf(scale);
        let u = a.unimodular().unwrap();
        prop_assert!((u.det() - 1.0).abs() < 1e-14, "det = {}", u.det());
    }

    #[test]
    fn square_root_squares_back(seed: u64) {
        // condition numbers up to 1e6
        let a = sampling::spd(&mut sampling::rng(seed), 1e-3, 1e3);
        let s = a.spd_sqrt().unwrap();
        let back = s.dot(&s).sym_part();
        prop_assert!((back - a).norm() <= 1e-12 * a.norm());
    }

    #[test]
    fn eigen_handles_near_degenerate_spectra(seed: u64, gap in -12.0..-6.0f64, repeated in 0.1..10.0f64) {
        let mut rng = sampling::rng(seed);
        let q = sampling::rotation(&mut rng);
        let d = SymTensor3::from_diag([repeated, repeated * (1.0 + 10f64.powf(gap)), 2.5]);
        let a = d.pull(&q);
        let e = a.eigen();
        prop_assert!((e.reconstruct() - a).norm() < 1e-13 * a.norm());
        let v = e.vectors;
        prop_assert!(((v.transpose() * v) - Tensor3::IDENTITY).norm() < 1e-13);
    }

    #[test]
    fn exp_determinant_is_exp_trace(entries in proptest::array::uniform9(-1.0..1.0f64), scale in 0.0..5.0f64) {
        let m = Tensor3([[entries[0], entries[1], entries[2]], [entries[3], entries[4], entries[5]], [entries[6], entries[7], entries[8]]]);
        let norm = m.norm();
        prop_assume!(norm > 0.0);
        let a = m * (scale / norm);
        let got = a.exp().det();
        let want = a.trace().exp();
        prop_assert!((got - want).abs() < 1e-11 * want, "{got} vs {want}");
    }

    #[test]
    fn stable_root_solves_the_quadratic(seed: u64, log_eps in -12.0..1.0f64) {
        let a = sampling::spd(&mut sampling::rng(seed), 0.1, 10.0);
        let eps = 10f64.powf(log_eps);
        let (_, phi) = solve_phi(&a, eps).unwrap();
        let x = quad_root_x(&a, phi, eps).unwrap();
        let residual = x * phi + x.dot(&x).sym_part() * eps - a;
        prop_assert!(residual.norm() < 1e-11 * a.norm());
        prop_assert!(x.is_positive_definite());
    }

    #[test]
    fn stable_root_has_the_right_small_eps_limit(seed: u64) {
        // unimodular A as in a step; the true O(ε) change stays below 1e-11
        let a = sampling::unimodular_spd(&mut sampling::rng(seed), 4.0);
        let (phi0, _) = solve_phi(&a, 0.0).unwrap();
        let limit = quad_root_x(&a, phi0, 0.0).unwrap();
        let small = quad_root_x(&a, phi0, 1e-12).unwrap();
        prop_assert!((small - limit).norm() < 1e-10, "{:e}", (small - limit).norm());
    }

    #[test]
    fn stress_is_orthogonal_to_strain(seed: u64, p in params()) {
        let c = strain(seed);
        let t = stress_2pk(&c, &state(seed).ci, &p).unwrap();
        prop_assert!(c.ddot(&t).abs() <= 1e-12 * c.norm() * t.norm().max(1e-300));
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(300))]

    #[test]
    fn steppers_stay_on_the_manifold(seed: u64, p in params(), log_dt in -4.0..3.0f64) {
        let c = strain(seed);
        let s = state(seed);
        for m in Method::ALL {
            // Newton from Ci_n may fail at the deepest bisection on very stiff steps
            let r = match m.step(&c, &s, 10f64.powf(log_dt), &p) {
                Err(maxwell_core::Error::Convergence(_)) if matches!(m, Method::Mebm | Method::Em) => continue,
                other => other.unwrap(),
            };
            prop_assert!((r.state.ci.det() - 1.0).abs() < 1e-12, "{m}: det = {}", r.state.ci.det());
            prop_assert!(r.state.ci.min_eigenvalue() > 0.0);
        }
    }

    /// Round-off grows with the conditioning of the moved strain, so all three
    /// tensors are drawn as `exp(0.3 dev G)` (stretches within about 2.5).
    #[test]
    fn closed_form_steps_are_w_invariant(seed: u64, p in params(), dt in 0.0..2.0f64) {
        let mut rng = sampling::rng(seed);
        let mut draw = || SymTensor3::IDENTITY.pull(&sampling::unimodular_near_identity(&mut rng, 0.3));
        let (c, s) = (draw(), LagrangianState { ci: draw() });
        let f0_inv = sampling::unimodular_near_identity(&mut rng, 0.3).inverse().unwrap();
        for m in [Method::Ifebm, Method::TwoIter] {
            let direct = m.step(&c, &s, dt, &p).unwrap().state.ci;
            let moved = LagrangianState { ci: s.ci.pull(&f0_inv) };
            let r = m.step(&c.pull(&f0_inv), &moved, dt, &p).unwrap().state.ci;
            let want = direct.pull(&f0_inv);
            prop_assert!((r - want).norm() < 5e-14 * want.norm(), "{m}: {:e}", (r - want).norm() / want.norm());
        }
    }

    #[test]
    fn closed_form_step_depends_smoothly_on_dt(seed: u64, p in params(), dt in 0.01..5.0f64) {
        let c = strain(seed);
        let s = state(seed);
        let at = |dt: f64| ifebm_step_lagrangian(&c, &s, dt, &p).unwrap().state.ci;
        let base = at(dt);
        let coarse = (at(dt + 1e-4) - base).norm() / 1e-4;
        let fine = (at(dt + 1e-6) - base).norm() / 1e-6;
        // Lipschitz quotients at two scales agree: no jumps
        prop_assert!((coarse - fine).abs() <= 0.05 * coarse.max(fine) + 1e-6, "{coarse} vs {fine}");
    }

    #[test]
    fn ifebm_iterate_solves_the_modified_backward_euler_equation(seed: u64, p in params(), dt in 0.0..3.0f64) {
        let c = strain(seed);
        let s = state(seed);
        let c_bar = c.unimodular().unwrap();
        let root = c_bar.spd_sqrt().unwrap();
        let inv_root = c_bar.spd_inv_sqrt().unwrap();
        let k = p.flow_factor(dt);
        let a = s.ci.sandwich(&inv_root) + SymTensor3::IDENTITY * (k * p.c10);
        let eps = p.epsilon(dt);
        let (_, phi) = solve_phi(&a, eps).unwrap();
        let x = quad_root_x(&a, phi, eps).unwrap();
        let ci_hat = x.sandwich(&root);
        // φ Ĉi = Ci_n + k c10 C̄ - ε Ĉi C̄⁻¹ Ĉi
        let rhs = s.ci + c_bar * (k * p.c10) - c_bar.inverse().unwrap().sandwich(&ci_hat) * eps;
        prop_assert!((ci_hat * phi - rhs).norm() < 1e-10 * rhs.norm());
        let step = ifebm_step_lagrangian(&c, &s, dt, &p).unwrap();
        prop_assert!((step.state.ci - ci_hat.unimodular().unwrap()).norm() < 1e-12);
    }

    #[test]
    fn branch_order_does_not_change_the_stress(seed: u64, a in params(), b in params(), c3 in params()) {
        let eq = EquilibriumParams { c10: 0.2, c01: 0.1, bulk: Bulk::Finite(20.0) };
        let c = strain(seed);
        let mut forward = CompositeModel::new(eq, vec![a, b, c3]).unwrap();
        let mut backward = CompositeModel::new(eq, vec![c3, b, a]).unwrap();
        for step in 1..4 {
            let ck = SymTensor3::IDENTITY + (c - SymTensor3::IDENTITY) * (step as f64 / 3.0);
            forward.step(&ck, 0.1, Method::Ifebm).unwrap();
            backward.step(&ck, 0.1, Method::Ifebm).unwrap();
        }
        // branch stresses summed in a fixed order
        let sorted = |m: &CompositeModel| {
            let mut parts: Vec<_> = m.branches.iter().zip(&m.states)
                .map(|(p, s)| stress_2pk(&c, &s.ci, p).unwrap())
                .collect();
            parts.sort_by(|x, y| x.0.partial_cmp(&y.0).unwrap());
            parts.into_iter().fold(SymTensor3::ZERO, |acc, t| acc + t)
        };
        prop_assert_eq!(sorted(&forward), sorted(&backward));
        let rev: Vec<_> = backward.states.iter().rev().copied().collect();
        prop_assert_eq!(forward.states, rev);
    }
}
