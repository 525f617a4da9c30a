//! Properties of the potential, actions, H functions and branch formulas.

use std::f64::consts::{FRAC_PI_2, PI};

use proptest::prelude::*;
use sturm_branches::actions::{self, Thresholds};
use sturm_branches::asymptotics::{Branches, Refinement};
use sturm_branches::harness::config::CALIBRATED;
use sturm_branches::specfun::{self, Branch, ExpansionKind};
use sturm_branches::{Potential, PotentialSpec};

/// Frozen from one fit of `max |H± − small expansion| / |x|⁵` on `0 < |x| ≤ 0.2`.
const SMALL_X_C: f64 = 14.0;

fn admissible_spec() -> impl Strategy<Value = PotentialSpec> {
    (0.3f64..2.5, 0.5f64..2.0, -0.08f64..0.08, -0.02f64..0.02)
        .prop_map(|(lift, c1, c2, c3)| PotentialSpec::new(vec![c1 + lift, -c1, c2 * c1, c3 * c1]).unwrap())
}

proptest! {
    #[test]
    fn g_and_h_are_even(spec in admissible_spec(), x in -PI..PI) {
        prop_assert!((spec.g(x) - spec.g(-x)).abs() <= 1e-12);
        if let (Ok(h), Ok(hm)) = (spec.eval_h(x), spec.eval_h(-x)) {
            prop_assert!((h - hm).abs() <= 1e-12);
        }
    }

    #[test]
    fn termwise_derivatives_match_differences(spec in admissible_spec(), x in 0.2f64..2.9, k in 0u32..5) {
        let step = 1e-5;
        let fd = (spec.eval_g(x + step, k).unwrap() - spec.eval_g(x - step, k).unwrap()) / (2.0 * step);
        let exact = spec.eval_g(x, k + 1).unwrap();
        prop_assert!((fd - exact).abs() <= 1e-6 * exact.abs().max(1e-3), "k = {}: {} vs {}", k, fd, exact);
    }

    #[test]
    fn extrema_sit_at_zero_and_pi(spec in admissible_spec()) {
        let p = Potential::new(&spec);
        prop_assume!(p.is_ok());
        let p = p.unwrap();
        let n = 4096;
        let samples: Vec<f64> = (0..=n).map(|i| p.g(-PI + 2.0 * PI * i as f64 / n as f64)).collect();
        let lo = samples.iter().copied().fold(f64::INFINITY, f64::min);
        let hi = samples.iter().copied().fold(f64::NEG_INFINITY, f64::max);
        prop_assert!((p.a2() - lo).abs() <= 1e-6 && (p.a2() - p.g(0.0)).abs() <= 1e-14);
        prop_assert!((p.a1() - hi).abs() <= 1e-6 && (p.a1() - p.g(PI)).abs() <= 1e-14);
    }

    #[test]
    fn h_difference_identity(x in -20.0f64..20.0) {
        let h = specfun::h_pm(x);
        prop_assert!((h.h_plus - h.h_minus - 2.0 * specfun::arctan_exp_pi(x)).abs() <= 1e-12);
    }

    #[test]
    fn h_reflection_identity(x in -20.0f64..20.0) {
        let (h, r) = (specfun::h_pm(x), specfun::h_pm(-x));
        prop_assert!((r.h_plus - (FRAC_PI_2 - h.h_plus)).abs() <= 1e-12);
        prop_assert!((r.h_minus - (-FRAC_PI_2 - h.h_minus)).abs() <= 1e-12);
    }

    #[test]
    fn arg_gamma_is_odd(x in 0.0f64..200.0) {
        prop_assert!((specfun::arg_gamma(-x) + specfun::arg_gamma(x)).abs() <= 1e-14);
    }

    #[test]
    fn h_is_bounded(x in -100.0f64..100.0) {
        let h = specfun::h_pm(x);
        prop_assert!(h.h_plus.abs() <= FRAC_PI_2 + 0.05 && h.h_minus.abs() <= FRAC_PI_2 + 0.05);
    }

    /// The stated `8 (7/2880) |x|⁻⁵` holds once the dropped `e^{−π|x|}` of
    /// `arctan e^{πx}` is below it, i.e. from `|x| ≈ 3.05` on.
    #[test]
    fn large_x_expansion(m in 3.1f64..30.0, negative in any::<bool>()) {
        let x = if negative { -m } else { m };
        let bound = 8.0 * 7.0 / 2880.0 * m.powi(-5);
        for b in [Branch::Plus, Branch::Minus] {
            let err = (specfun::h_branch(x, b) - specfun::h_expansion(x, ExpansionKind::Large, b).unwrap()).abs();
            prop_assert!(err <= bound, "x = {}: {:e} > {:e}", x, err, bound);
        }
    }

    #[test]
    fn large_x_expansion_with_exponential_term(m in 3.0f64..30.0, negative in any::<bool>()) {
        let x = if negative { -m } else { m };
        let bound = 8.0 * 7.0 / 2880.0 * m.powi(-5) + (-PI * m).exp();
        for b in [Branch::Plus, Branch::Minus] {
            let err = (specfun::h_branch(x, b) - specfun::h_expansion(x, ExpansionKind::Large, b).unwrap()).abs();
            prop_assert!(err <= bound, "x = {}: {:e} > {:e}", x, err, bound);
        }
    }

    #[test]
    fn small_x_expansion(x in -0.2f64..0.2) {
        prop_assume!(x != 0.0);
        for b in [Branch::Plus, Branch::Minus] {
            let err = (specfun::h_branch(x, b) - specfun::h_expansion(x, ExpansionKind::Small, b).unwrap()).abs();
            prop_assert!(err <= SMALL_X_C * x.abs().powi(5) + 1e-15, "x = {}: {:e}", x, err);
        }
    }

    #[test]
    fn connection_coefficient(b in -5.0f64..5.0, db in 1e-3f64..1.0) {
        let k = specfun::k_of_b(b);
        prop_assert!(k > 0.0 && k < 1.0);
        prop_assert!(specfun::k_of_b(b + db) < k);
        // arccos y = 2 arcsin √((1 − y)/2), with 1 − y = (1 − k)²/(1 + k²)
        let angle = 2.0 * ((1.0 - k) / (2.0 * (1.0 + k * k)).sqrt()).asin();
        prop_assert!((angle - specfun::arctan_exp_pi(b)).abs() <= 1e-12);
        if b > -2.0 {
            prop_assert!(((2.0 * k / (1.0 + k * k)).acos() - specfun::arctan_exp_pi(b)).abs() <= 1e-12);
        }
    }

    #[test]
    fn branches_interlace(a in 0.3f64..2.8, p in 10u32..60) {
        let pot = Potential::canonical();
        let m = Branches::new(&pot, a, &Thresholds::default()).unwrap();
        let plus = m.branch(p, Branch::Plus, Refinement::None, &CALIBRATED).unwrap();
        let minus = m.branch(p + 1, Branch::Minus, Refinement::None, &CALIBRATED).unwrap();
        prop_assert!(minus.lambda - plus.lambda >= 0.9 * m.gap_width(m.lambda0(p)));
        let own = m.branch(p, Branch::Minus, Refinement::None, &CALIBRATED).unwrap();
        let split = 2.0 * specfun::arctan_exp_pi(plus.b2_used) / m.action();
        prop_assert!((plus.lambda - own.lambda - split).abs() <= 1e-12 * plus.lambda);
        if a > 1.0 {
            prop_assert!(plus.lambda > own.lambda);
        }
    }
}

#[test]
fn k_of_b_limits() {
    assert!(specfun::k_of_b(-40.0) <= 1.0 && specfun::k_of_b(-40.0) > 1.0 - 1e-15);
    assert!(specfun::k_of_b(40.0) > 0.0);
}

#[test]
fn action_decreases_in_a() {
    let p = Potential::canonical();
    let f: Vec<f64> = (0..20).map(|i| actions::action_f(&p, 2.9 * i as f64 / 19.0).unwrap()).collect();
    assert!(f.windows(2).all(|w| w[1] < w[0]), "{f:?}");
}

#[test]
fn action_closed_forms() {
    let p = Potential::canonical();
    assert!((actions::action_f(&p, 1.0).unwrap() - 4.0 * 2f64.sqrt()).abs() <= 1e-9);
    // ∫_{−π/2}^{π/2} √cos x dx = B(3/4, 1/2) = √π Γ(3/4) / Γ(5/4)
    let gamma = |x: f64| statrs::function::gamma::gamma(x);
    let beta = PI.sqrt() * gamma(0.75) / gamma(1.25);
    assert!((actions::action_f(&p, 2.0).unwrap() - beta).abs() <= 1e-9);
}

#[test]
fn alpha2_vanishes_linearly_at_coalescence() {
    let p = Potential::canonical();
    let t = Thresholds::default();
    for side in [-1.0, 1.0] {
        let ratios: Vec<f64> = [1e-2, 1e-3, 1e-4]
            .iter()
            .map(|&d| actions::alpha_squares(&p, 1.0 + side * d, &t).unwrap().1 / d)
            .collect();
        let (lo, hi) = ratios.iter().fold((f64::INFINITY, 0.0f64), |(l, h), &r| (l.min(r), h.max(r)));
        assert!(lo > 0.0 && hi / lo < 1.1, "side {side}: {ratios:?}");
    }
}

#[test]
fn zeta2_back_substitution_across_a() {
    let p = Potential::canonical();
    let t = Thresholds::default();
    for i in 1..30 {
        let a = 0.1 * i as f64;
        let g = actions::well_geometry(&p, a, &t).unwrap();
        let lhs = actions::zeta2_lhs(&p, a, g.coarse).unwrap();
        assert!(actions::zeta2_residual(&g, lhs).abs() <= 1e-10, "a = {a}");
    }
}

#[test]
fn branch_is_continuous_across_coalescence() {
    let pot = Potential::canonical();
    for sign in [Branch::Minus, Branch::Plus] {
        let values: Vec<f64> = (0..=200)
            .map(|i| {
                let a = 0.9 + 0.001 * i as f64;
                let m = Branches::new(&pot, a, &Thresholds::default()).unwrap();
                m.branch(30, sign, Refinement::None, &CALIBRATED).unwrap().lambda
            })
            .collect();
        let jumps: Vec<f64> = values.windows(2).map(|w| (w[1] - w[0]).abs()).collect();
        for i in 1..jumps.len() - 1 {
            let local = 0.5 * (jumps[i - 1] + jumps[i + 1]);
            assert!(jumps[i] <= 10.0 * local, "{sign:?} at a = {}: {} vs {}", 0.9 + 0.001 * i as f64, jumps[i], local);
        }
    }
}

/// Away from the exact coalescence the lemma equations are solved for `λ` and
/// compared with the closed-form branch.
#[test]
fn lemma_roots_agree_with_branch_formula() {
    let pot = Potential::canonical();
    for (a, p) in [(2.0, 20), (1.3, 30), (1.0, 30), (1.02, 40)] {
        let m = Branches::new(&pot, a, &Thresholds::default()).unwrap();
        for sign in [Branch::Minus, Branch::Plus] {
            let e = m.branch(p, sign, Refinement::None, &CALIBRATED).unwrap();
            let root = m.lemma_lambda(p, sign).unwrap();
            assert!(
                (root - e.lambda).abs() <= 2.0 * e.remainder_budget,
                "a = {a} {sign:?} ({}): {root} vs {} (budget {})",
                m.fine_region(e.lambda0),
                e.lambda,
                e.remainder_budget
            );
        }
    }
}
