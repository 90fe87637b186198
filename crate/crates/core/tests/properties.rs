use proptest::prelude::*;
use simlev_core::heat::fixtures::bump;
use simlev_core::heat::{solve_1d, InitialProfile1D};
use simlev_core::linalg::{norm, Orthogonal};
use simlev_core::numerics::{adaptive_integrate, gauss_nodes, refine_root, sign_scan, Bracket};
use simlev_core::special::{funk_hecke_lambda_closed, harmonic_poly, legendre_eval};

fn config() -> ProptestConfig {
    ProptestConfig {
        cases: 48,
        ..ProptestConfig::default()
    }
}

proptest! {
    #![proptest_config(config())]

    #[test]
    fn gauss_rule_is_exact_for_low_degree(order in 1usize..24, p in 0usize..48, lo in -3.0f64..0.0, len in 0.1f64..4.0) {
        prop_assume!(p <= 2 * order - 1);
        let hi = lo + len;
        let rule = gauss_nodes(order, lo, hi).unwrap();
        let got = rule.integrate(|x| x.powi(p as i32));
        let want = (hi.powi(p as i32 + 1) - lo.powi(p as i32 + 1)) / (p as f64 + 1.0);
        let scale = lo.abs().max(hi.abs()).powi(p as i32) * len;
        prop_assert!((got - want).abs() <= 1e-13 * scale.max(1.0), "{got} vs {want}");
    }

    #[test]
    fn adaptive_integral_is_additive(a in -2.0f64..0.0, b in 0.0f64..1.0, c in 1.0f64..3.0, w in 0.5f64..8.0) {
        let f = move |x: f64| (w * x).sin() * (-x * x).exp() + 0.3;
        let whole = adaptive_integrate(f, a, c, 1e-13).unwrap().value;
        let parts = adaptive_integrate(f, a, b, 1e-13).unwrap().value + adaptive_integrate(f, b, c, 1e-13).unwrap().value;
        prop_assert!((whole - parts).abs() <= 1e-12 * (c - a));
    }

    #[test]
    fn root_does_not_depend_on_bracket(root in -2.0f64..2.0, left in 0.01f64..3.0, right in 0.01f64..3.0, k in 0.2f64..5.0) {
        let f = move |x: f64| (x - root) * (1.0 + k * (x - root) * (x - root));
        let (lo, hi) = (root - left, root + right);
        let b = Bracket::new(lo, hi, f(lo), f(hi)).unwrap();
        let r = refine_root(f, b, 1e-12).unwrap();
        prop_assert!((r.x - root).abs() <= 1e-12 + 4.0 * f64::EPSILON * root.abs());
        prop_assert!(r.width() <= (1e-12f64).max(4.0 * f64::EPSILON * r.x.abs()));
    }

    #[test]
    fn sign_scan_counts_sine_zeros(m in 1usize..8) {
        let grid: Vec<f64> = (0..=400).map(|i| 0.05 + (m as f64 * std::f64::consts::PI) * i as f64 / 400.0).collect();
        let found = sign_scan(f64::sin, &grid).unwrap();
        prop_assert_eq!(found.len(), m);
        for b in &found {
            prop_assert!(b.f_lo * b.f_hi < 0.0);
        }
    }

    #[test]
    fn heat_solution_is_positive_and_ordered(s in -4.0f64..4.0, t in 0.05f64..5.0, shift in -0.5f64..0.5, amp in 0.0f64..2.0) {
        let base = InitialProfile1D::new(1.5, 1.0, move |y| bump(y - shift, 1.0)).unwrap();
        let more = InitialProfile1D::new(1.5, 1.0 + amp, move |y| bump(y - shift, 1.0) + amp * bump(y, 0.5)).unwrap();
        let v = solve_1d(&base, s, t).unwrap();
        let w = solve_1d(&more, s, t).unwrap();
        prop_assert!(v >= 0.0);
        prop_assert!(w >= v * (1.0 - 1e-13));
        // bounded by the supremum of the data
        prop_assert!(v <= (-1.0f64).exp() * (1.0 + 1e-13));
    }

    #[test]
    fn heat_solution_rescales(s in -3.0f64..3.0, t in 0.1f64..3.0, lambda in 0.3f64..3.0) {
        let g = InitialProfile1D::new(1.0, 1.0, |y| bump(y, 1.0)).unwrap().even();
        let scaled = g.rescaled(lambda).unwrap();
        let a = solve_1d(&scaled, s, t).unwrap();
        let b = solve_1d(&g, lambda * s, lambda * lambda * t).unwrap();
        prop_assert!((a - b).abs() <= 1e-12 * b.abs().max(1e-300) + 1e-300);
    }

    #[test]
    fn legendre_is_bounded_and_has_parity(k in 0usize..12, n in 2usize..7, t in -1.0f64..=1.0) {
        let p = legendre_eval(k, n, t).unwrap();
        prop_assert!(p.abs() <= 1.0 + 1e-12);
        let m = legendre_eval(k, n, -t).unwrap();
        let sign = if k % 2 == 0 { 1.0 } else { -1.0 };
        prop_assert!((m - sign * p).abs() <= 1e-14);
    }

    #[test]
    fn eigenvalue_parity_in_l(k in 0usize..7, n in 2usize..5, l in 0.1f64..3.0) {
        let plus = funk_hecke_lambda_closed(k, n, l).unwrap();
        let minus = funk_hecke_lambda_closed(k, n, -l).unwrap();
        let sign = if k % 2 == 0 { 1.0 } else { -1.0 };
        prop_assert!(plus > 0.0);
        prop_assert!((minus - sign * plus).abs() <= 1e-13 * plus);
    }

    #[test]
    fn harmonics_are_homogeneous(k in 0usize..7, v in 0usize..13, x in prop::array::uniform3(-2.0f64..2.0), c in 0.1f64..3.0) {
        prop_assume!(v < 2 * k + 1);
        let p = harmonic_poly(k, v, &x).unwrap();
        let q = harmonic_poly(k, v, &[c * x[0], c * x[1], c * x[2]]).unwrap();
        let scale = norm(&x).powi(k as i32) * 1e3_f64.max(1.0);
        prop_assert!((q - c.powi(k as i32) * p).abs() <= 1e-13 * scale * c.powi(k as i32).max(1.0));
    }

    #[test]
    fn seeded_rotations_preserve_length(seed in 0u64..1000, x in prop::array::uniform3(-5.0f64..5.0)) {
        let a = Orthogonal::seeded(3, seed);
        let y = a.apply(&x);
        prop_assert!((norm(&y) - norm(&x)).abs() <= 1e-13 * norm(&x).max(1.0));
    }
}
