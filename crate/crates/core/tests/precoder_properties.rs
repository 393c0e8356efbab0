mod common;

use common::*;
use precoderlab::metrics::slnr_value;
use precoderlab::numerics::hpd_solve;
use precoderlab::precoders::slnr_eigenpair;
use precoderlab::{
    alignment, build_precoder_matrix, rzf_direction, slnr_closed_form, slnr_eig, zf_direction,
    Complex64, ComplexVector, Method,
};
use proptest::prelude::*;

#[test]
fn zf_matches_dense_pseudo_inverse() {
    let mut g = rng(0xf00d_0001);
    for (nt, k_users) in [(4, 4), (6, 4), (5, 2), (3, 1)] {
        for _ in 0..10 {
            let ch = random_channel(&mut g, nt, k_users);
            let pinv = to_na(ch.matrix()).pseudo_inverse(1e-300).unwrap();
            for k in 0..k_users {
                let w = zf_direction(&ch, k).unwrap();
                let oracle: ComplexVector = pinv.row(k).iter().map(|z| z.conj()).collect();
                assert!(cos_angle(&w, &oracle) >= 1.0 - 1e-10);
                for j in (0..k_users).filter(|&j| j != k) {
                    assert!(ch.user(j).unwrap().dot(&w).norm() <= 1e-10);
                }
            }
        }
    }
}

#[test]
fn rzf_matches_dense_inverse() {
    let mut g = rng(0xf00d_0002);
    for _ in 0..20 {
        let ch = random_channel(&mut g, 4, 4);
        let h = to_na(ch.matrix());
        let inv = (Oracle::identity(4, 4) + &h * h.adjoint()).try_inverse().unwrap();
        for k in 0..4 {
            let hk = ch.user(k).unwrap();
            let oracle = na_to_vec(&(&inv * vec_to_na(&hk)));
            let w = rzf_direction(&ch, k, 1.0).unwrap();
            assert!(cos_angle(&w, &oracle) >= 1.0 - 1e-10);
        }
    }
}

#[test]
fn slnr_lambda_matches_solver() {
    let mut g = rng(0xf00d_0003);
    for _ in 0..20 {
        let ch = random_channel(&mut g, 4, 4);
        for k in 0..4 {
            let hk = ch.user(k).unwrap();
            let a = ch.leave_one_out(k).unwrap().outer_gram(1.0);
            let oracle = hk.dot(&hpd_solve(&a, &hk).unwrap()).re;
            let s = slnr_closed_form(&ch, k, 1.0).unwrap();
            assert!((s.lambda - oracle).abs() <= 1e-10 * oracle);
            assert!(s.lambda > 0.0);
            // gamma is the squared norm of the unnormalized direction
            let d = hpd_solve(&a, &hk).unwrap();
            assert!((s.gamma - d.norm_sqr()).abs() <= 1e-12 * s.gamma);
        }
    }
}

#[test]
fn slnr_eig_agrees_with_closed_form_on_tall_channel() {
    let mut g = rng(0xf00d_0004);
    for _ in 0..20 {
        let ch = random_channel(&mut g, 6, 4);
        for k in 0..4 {
            let closed = slnr_closed_form(&ch, k, 1.0).unwrap();
            let eig = slnr_eig(&ch, k, 1.0).unwrap();
            assert!(alignment(&eig, &closed.w).unwrap() >= 1.0 - 1e-10);
        }
    }
}

#[test]
fn build_slnr_equals_build_rzf() {
    let mut g = rng(0xf00d_0005);
    for (nt, k_users, sigma2) in [(4, 4, 1.0), (2, 4, 0.3), (8, 4, 2.0)] {
        let ch = random_channel(&mut g, nt, k_users);
        let slnr = build_precoder_matrix(&ch, Method::SlnrClosed, sigma2, sigma2).unwrap();
        let rzf = build_precoder_matrix(&ch, Method::Rzf, sigma2, sigma2).unwrap();
        let eig = build_precoder_matrix(&ch, Method::SlnrEig, sigma2, sigma2).unwrap();
        for k in 0..k_users {
            assert!(alignment(slnr.column(k), rzf.column(k)).unwrap() >= 1.0 - 1e-10);
            assert!(alignment(eig.column(k), rzf.column(k)).unwrap() >= 1.0 - 1e-10);
        }
    }
}

fn random_unit(g: &mut rand_chacha::ChaCha20Rng, n: usize) -> ComplexVector {
    unit(&random_vector(g, n))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(150))]

    #[test]
    fn slnr_is_rzf_with_alpha_sigma2(seed in any::<u64>(), nt in 1usize..9, k_users in 1usize..9, sigma2 in 1e-2f64..10.0) {
        let mut g = rng(seed);
        let ch = random_channel(&mut g, nt, k_users);
        for k in 0..k_users {
            let s = slnr_closed_form(&ch, k, sigma2).unwrap();
            let r = rzf_direction(&ch, k, sigma2).unwrap();
            prop_assert!(alignment(&s.w, &r).unwrap() >= 1.0 - 1e-10);
            let e = slnr_eig(&ch, k, sigma2).unwrap();
            prop_assert!(alignment(&e, &s.w).unwrap() >= 1.0 - 1e-10);
            prop_assert!((s.w.norm() - 1.0).abs() <= 1e-12);
        }
    }

    #[test]
    fn slnr_is_maximal(seed in any::<u64>(), nt in 1usize..7, k_users in 1usize..7, sigma2 in 0.1f64..4.0) {
        let mut g = rng(seed);
        let ch = random_channel(&mut g, nt, k_users);
        for k in 0..k_users {
            let s = slnr_closed_form(&ch, k, sigma2).unwrap();
            let at_w = slnr_value(&ch, k, &s.w, sigma2).unwrap();
            prop_assert!((at_w - s.lambda).abs() <= 1e-10 * s.lambda);
            for eps in [1e-2, 1e-1, 1.0] {
                let u = random_unit(&mut g, nt);
                let perturbed = unit(&s.w.add(&u.scale_real(eps)));
                prop_assert!(slnr_value(&ch, k, &perturbed, sigma2).unwrap() <= s.lambda + 1e-9);
            }
        }
    }

    #[test]
    fn push_through_identity(seed in any::<u64>(), nt in 1usize..8, k_users in 1usize..8, alpha in 1e-2f64..10.0) {
        let mut g = rng(seed);
        let ch = random_channel(&mut g, nt, k_users);
        let h = to_na(ch.matrix());
        let inner = (Oracle::identity(k_users, k_users) * Complex64::new(alpha, 0.0) + h.adjoint() * &h)
            .try_inverse()
            .unwrap();
        let other_route = &h * inner;
        for k in 0..k_users {
            let col: ComplexVector = other_route.column(k).iter().copied().collect();
            let w = rzf_direction(&ch, k, alpha).unwrap();
            prop_assert!(cos_angle(&w, &col) >= 1.0 - 1e-10);
        }
    }

    #[test]
    fn zf_nulls_interference(seed in any::<u64>(), k_users in 1usize..7, extra in 0usize..4) {
        let mut g = rng(seed);
        let nt = k_users + extra;
        let ch = random_channel(&mut g, nt, k_users);
        if let Ok(p) = build_precoder_matrix(&ch, Method::Zf, 1.0, 0.0) {
            for k in 0..k_users {
                prop_assert!((p.column(k).norm() - 1.0).abs() <= 1e-12);
                for j in (0..k_users).filter(|&j| j != k) {
                    let hj = ch.user(j).unwrap();
                    prop_assert!(hj.dot(p.column(k)).norm() <= 1e-9 * hj.norm());
                }
            }
        }
    }

    #[test]
    fn rzf_tends_to_zf(seed in any::<u64>(), n in 1usize..7) {
        let mut g = rng(seed);
        let ch = random_channel(&mut g, n, n);
        let sv = to_na(ch.matrix()).singular_values();
        prop_assume!(sv.max() / sv.min() <= 1e3);
        for k in 0..n {
            let r = rzf_direction(&ch, k, 1e-12).unwrap();
            let z = zf_direction(&ch, k).unwrap();
            prop_assert!(alignment(&r, &z).unwrap() >= 1.0 - 1e-6);
        }
    }

    #[test]
    fn eigenvalue_is_lambda(seed in any::<u64>(), nt in 1usize..8, k_users in 1usize..8) {
        let mut g = rng(seed);
        let ch = random_channel(&mut g, nt, k_users);
        for k in 0..k_users {
            let pair = slnr_eigenpair(&ch, k, 1.0).unwrap();
            let s = slnr_closed_form(&ch, k, 1.0).unwrap();
            prop_assert!((pair.value.re - s.lambda).abs() <= 1e-9 * s.lambda);
            prop_assert!(pair.value.im.abs() <= 1e-10 * s.lambda);
        }
    }
}
