//! One PASS/FAIL line per acceptance criterion, with the tolerances pinned here.
//!
//! Run with `cargo test --test acceptance -- --nocapture` to see the lines.

use std::f64::consts::{FRAC_PI_2, FRAC_PI_4, PI};
use std::time::{Duration, Instant};

use sturm_branches::actions::action_f;
use sturm_branches::asymptotics::{order_map, OrderedBranch};
use sturm_branches::harness::config::GridSection;
use sturm_branches::harness::{compare, sweep_transition, CompareReport, RunConfig};
use sturm_branches::oracle::extended::{splitting, ExtendedShooter};
use sturm_branches::oracle::{Oracle, OracleConfig, Symmetry};
use sturm_branches::specfun::{self, Branch};
use sturm_branches::Potential;

const IDENTITY_TOL: f64 = 1e-12;
const MINIMUM_TOL: f64 = 2e-3;
const STIRLING_TOL: f64 = 1e-8;
const SERIES_TOL: f64 = 1e-10;
const ACTION_TOL: f64 = 1e-9;
const SLOPE_MAX: f64 = 0.1;
const SPLIT_REL_MAX: f64 = 1e-6;
const JUMP_RATIO_MAX: f64 = 10.0;
const WRONSKIAN_MAX: f64 = 1e-9;
const DISCRIMINANT_MAX: f64 = 1e-6;
const HALVING_REL_MAX: f64 = 1e-8;

struct Verdict {
    passed: bool,
    detail: String,
}

fn verdict(passed: bool, detail: String) -> Verdict {
    Verdict { passed, detail }
}

fn weyl_points(n: usize, lo: f64, hi: f64) -> impl Iterator<Item = f64> {
    let golden = 0.5 * (5f64.sqrt() - 1.0);
    (1..=n).map(move |i| lo + (hi - lo) * (i as f64 * golden).fract())
}

fn log_slope(points: &[(f64, f64)]) -> f64 {
    let n = points.len() as f64;
    let (mx, my) = points.iter().fold((0.0, 0.0), |(sx, sy), &(x, y)| (sx + x / n, sy + y.ln() / n));
    let (sxy, sxx) = points.iter().fold((0.0, 0.0), |(a, b), &(x, y)| (a + (x - mx) * (y.ln() - my), b + (x - mx) * (x - mx)));
    sxy / sxx
}

/// `arg Γ(½ + ix) = ψ(½) x + Σ_{n≥0} [2x/(2n+1) − arctan(2x/(2n+1))]`, summed
/// to `n = 10⁶` with a compensated sum and the integral of the remaining tail.
fn arg_gamma_series(x: f64) -> f64 {
    let psi_half = -0.577_215_664_901_532_9 - 2.0 * std::f64::consts::LN_2;
    let c = 2.0 * x;
    let term = |t: f64| {
        let u = c / t;
        if u.abs() < 1e-2 {
            let u2 = u * u;
            u * u2 * (1.0 / 3.0 - u2 * (1.0 / 5.0 - u2 * (1.0 / 7.0 - u2 / 9.0)))
        } else {
            u - u.atan()
        }
    };
    let n = 1_000_000u32;
    let (mut sum, mut carry) = (0.0f64, 0.0f64);
    for k in (0..n).rev() {
        let y = term(2.0 * k as f64 + 1.0) - carry;
        let s = sum + y;
        carry = (s - sum) - y;
        sum = s;
    }
    // ∫_{n−½}^∞ term dn = ½ [T arctan(c/T) + (c/2) ln(1 + c²/T²) − c], T = 2n
    let big_t = 2.0 * n as f64;
    let r = c / big_t;
    let tail = 0.5 * (big_t * (r.atan() - r) + 0.5 * c * (r * r).ln_1p());
    psi_half * x + sum + tail
}

fn report(config: RunConfig) -> CompareReport {
    compare(&config).expect("comparison runs")
}

fn criterion_1() -> Verdict {
    let mut diff = 0.0f64;
    let mut refl = 0.0f64;
    for x in weyl_points(1000, -20.0, 20.0) {
        let (h, r) = (specfun::h_pm(x), specfun::h_pm(-x));
        diff = diff.max((h.h_plus - h.h_minus - 2.0 * specfun::arctan_exp_pi(x)).abs());
        refl = refl.max((r.h_plus - (FRAC_PI_2 - h.h_plus)).abs()).max((r.h_minus - (-FRAC_PI_2 - h.h_minus)).abs());
    }
    verdict(diff <= IDENTITY_TOL && refl <= IDENTITY_TOL, format!("difference {diff:.1e}, reflection {refl:.1e}"))
}

fn criterion_2() -> Verdict {
    let plus = specfun::h_minimum(Branch::Plus);
    let minus = specfun::h_minimum(Branch::Minus);
    let errors = [
        (plus.x_star - 0.0293).abs(),
        (plus.h_star - (FRAC_PI_4 - 0.0293)).abs(),
        (minus.x_star - 1.683).abs(),
        (minus.h_star - (-FRAC_PI_2 - 0.02)).abs(),
    ];
    let worst = errors.iter().copied().fold(0.0, f64::max);
    verdict(
        worst <= MINIMUM_TOL,
        format!(
            "H+ min {:.5} at {:.5}, H- min {:.5} at {:.5}, worst offset {worst:.1e}",
            plus.h_star, plus.x_star, minus.h_star, minus.x_star
        ),
    )
}

fn criterion_3() -> Verdict {
    let stirling = [10.0f64, 20.0, 50.0]
        .iter()
        .map(|&x| (specfun::arg_gamma(x) - (x * x.ln() - x + 1.0 / (24.0 * x) + 7.0 / (2880.0 * x.powi(3)))).abs())
        .fold(0.0, f64::max);
    let series = [0.1f64, 0.5, 1.0]
        .iter()
        .map(|&x| (specfun::arg_gamma(x) - arg_gamma_series(x)).abs())
        .fold(0.0, f64::max);
    verdict(
        stirling <= STIRLING_TOL && series <= SERIES_TOL,
        format!("Stirling {stirling:.1e}, series {series:.1e}, arg Γ(½ + i) = {:.10}", specfun::arg_gamma(1.0)),
    )
}

fn criterion_4() -> Verdict {
    let p = Potential::canonical();
    let gamma = statrs::function::gamma::gamma;
    let f1 = action_f(&p, 1.0).unwrap();
    let f2 = action_f(&p, 2.0).unwrap();
    let beta = PI.sqrt() * gamma(0.75) / gamma(1.25);
    let (e1, e2) = ((f1 - 4.0 * 2f64.sqrt()).abs(), (f2 - beta).abs());
    verdict(e1 <= ACTION_TOL && e2 <= ACTION_TOL, format!("F(1) err {e1:.1e}, F(2) = {f2:.12} err {e2:.1e}"))
}

fn scaling(r: &CompareReport, sign: Branch, shape: impl Fn(f64) -> f64) -> f64 {
    let points: Vec<(f64, f64)> =
        r.rows.iter().filter(|row| row.sign == sign).map(|row| (row.p as f64, row.residual_scaled / shape(row.lambda_oracle))).collect();
    log_slope(&points)
}

fn criterion_5(r: &CompareReport) -> Verdict {
    let over = r.rows.iter().filter(|row| !row.within_budget()).count();
    let shape = |l: f64| l.powf(-2.0 / 3.0) * l.ln();
    let slopes = [scaling(r, Branch::Minus, shape), scaling(r, Branch::Plus, shape)];
    let worst = r.rows.iter().map(|row| row.residual_scaled / row.budget).fold(0.0, f64::max);
    verdict(
        r.unmatched.is_empty() && over == 0 && r.rows.len() == 62 && slopes.iter().all(|&s| s <= SLOPE_MAX),
        format!("{} rows, max residual/budget {worst:.3}, log slopes {:.3} / {:.3}", r.rows.len(), slopes[0], slopes[1]),
    )
}

fn criterion_6(r: &CompareReport) -> Verdict {
    let over = r.rows.iter().filter(|row| !row.within_budget()).count();
    let p = Potential::canonical();
    let oracle = Oracle::new(&p, 0.5, OracleConfig::default()).unwrap();
    let ps = [10u32, 20, 30, 40];
    let mut gaps = Vec::new();
    for &pp in &ps {
        let row = r.row(0.5, pp, Branch::Minus).expect("row present");
        let d = oracle.find_by_nodes(Symmetry::Dirichlet, pp - 1, row.lambda_oracle).unwrap();
        let n = oracle.find_by_nodes(Symmetry::Neumann, pp, row.lambda_oracle).unwrap();
        let shooter = ExtendedShooter::new(p.spec(), 0.5, 1.05 * d.lambda.max(n.lambda));
        let s = splitting(&shooter, d.lambda, n.lambda).unwrap();
        gaps.push((d.lambda, s.gap));
    }
    let small = gaps[1].1 > 0.0 && gaps[1].1 < SPLIT_REL_MAX * gaps[1].0;
    let fast = gaps.windows(2).zip(ps.windows(2)).all(|(g, q)| g[1].1 > 0.0 && g[1].1 / g[0].1 < (q[0] as f64 / q[1] as f64).powi(4));
    let slope = scaling(r, Branch::Minus, |l| l.powf(-0.5) * l.ln().sqrt());
    verdict(
        r.unmatched.is_empty() && over == 0 && small && fast && slope <= SLOPE_MAX,
        format!(
            "over budget {over}, log slope {slope:.3}, splittings {:.2e} {:.2e} {:.2e} {:.2e}",
            gaps[0].1, gaps[1].1, gaps[2].1, gaps[3].1
        ),
    )
}

fn criterion_7() -> Verdict {
    let mut config = RunConfig::canonical(Vec::new(), 30, 30);
    config.grid = Some(GridSection { a_min: Some(0.7), a_max: Some(1.3), a_step: Some(0.05), ..config.grid.unwrap() });
    let s = sweep_transition(&config).unwrap();
    let ratios = [s.jumps_plus.unwrap().ratio(), s.jumps_minus.unwrap().ratio()];
    let minus = s.rows.iter().find(|r| r.a == 1.0 && r.sign == Branch::Minus).unwrap();
    let plus = s.rows.iter().find(|r| r.a == 1.0 && r.sign == Branch::Plus).unwrap();
    let f = action_f(&Potential::canonical(), 1.0).unwrap();
    let offset = plus.lambda_oracle - minus.lambda_oracle;
    let err = (offset - FRAC_PI_2 / f).abs() * f;
    let ends = s.ends.iter().all(|e| e.residual.abs() <= e.budget);
    verdict(
        ratios.iter().all(|&q| q <= JUMP_RATIO_MAX) && minus.b2 == 0.0 && plus.b2 == 0.0 && err <= minus.budget + plus.budget && ends,
        format!(
            "jump ratios {:.2} / {:.2}, D/N offset {offset:.6} vs (π/2)/F {:.6}, scaled err {err:.1e}",
            ratios[0],
            ratios[1],
            FRAC_PI_2 / f
        ),
    )
}

fn criterion_8(reports: &[&CompareReport]) -> Verdict {
    let rows: Vec<_> = reports.iter().flat_map(|r| &r.rows).collect();
    let nodes_ok = rows.iter().all(|r| r.nodes_full == 2 * r.p);
    let p = Potential::canonical();
    let oracle = Oracle::new(&p, 2.0, OracleConfig::default()).unwrap();
    let spectrum = oracle.periodic_spectrum((0.2, 30.0)).unwrap();
    let mut order_ok = !spectrum.is_empty();
    let mut ambiguous = 0;
    for (i, e) in spectrum.iter().enumerate() {
        let n = i as u32 + 1;
        // even n ↦ (+, n/2), odd n ↦ (−, (n+1)/2)
        let (sign, pp) = if n.is_multiple_of(2) { (Branch::Plus, n / 2) } else { (Branch::Minus, n.div_ceil(2)) };
        order_ok &= e.eigen.symmetry == Symmetry::from_branch(sign) && e.eigen.nodes_full == 2 * pp;
        match order_map(n, 2.0, p.a2(), e.eigen.lambda) {
            Ok(OrderedBranch::Single(index)) => order_ok &= index.sign == sign && index.p == pp,
            Ok(OrderedBranch::Pair(_)) => order_ok = false,
            // the collar π/λ exceeds the distance to a₂ at the lowest eigenvalues
            Err(_) => ambiguous += 1,
        }
    }
    verdict(
        nodes_ok && order_ok,
        format!(
            "{} matched rows with 2p zeros: {nodes_ok}; first {} eigenvalues at a = 2 in order: {order_ok} ({ambiguous} inside the collar)",
            rows.len(),
            spectrum.len()
        ),
    )
}

fn criterion_9(reports: &[&CompareReport]) -> Verdict {
    let p = Potential::canonical();
    let mut worst = 0.0f64;
    let mut checked = 0;
    for r in reports {
        for row in r.rows.iter().filter(|row| row.sign == Branch::Plus && row.p >= 10) {
            let Some(next) = r.row(row.a, row.p + 1, Branch::Minus) else { continue };
            let f = action_f(&p, row.a).unwrap();
            let err = (row.gap_observed.unwrap() - row.gap_predicted.unwrap()).abs() * f;
            worst = worst.max(err / (row.budget + next.budget));
            checked += 1;
        }
    }
    verdict(checked > 0 && worst <= 1.0, format!("{checked} gaps, max error/budget {worst:.3}"))
}

fn criterion_10(reports: &[&CompareReport]) -> Verdict {
    let p = Potential::canonical();
    let base = OracleConfig::default();
    let (mut wronskian, mut discriminant, mut halving) = (0.0f64, 0.0f64, 0.0f64);
    for r in reports {
        let a = r.rows[0].a;
        let coarse = Oracle::new(&p, a, base).unwrap();
        let fine = Oracle::new(&p, a, base.with_tol(0.5 * base.tol)).unwrap();
        for row in &r.rows {
            let m = coarse.monodromy(row.lambda_oracle).unwrap();
            wronskian = wronskian.max(m.wronskian_error);
            discriminant = discriminant.max(m.discriminant_residual());
            let sym = Symmetry::from_branch(row.sign);
            let f = fine.find_by_nodes(sym, sym.nodes_half_for(row.p), row.lambda_oracle).unwrap();
            halving = halving.max((f.lambda - row.lambda_oracle).abs() / row.lambda_oracle);
        }
        for l in (1..=40).map(|i| 1.0 * i as f64) {
            wronskian = wronskian.max(coarse.monodromy(l).unwrap().wronskian_error);
        }
    }
    verdict(
        wronskian <= WRONSKIAN_MAX && discriminant <= DISCRIMINANT_MAX && halving <= HALVING_REL_MAX,
        format!("Wronskian {wronskian:.1e}, discriminant {discriminant:.1e}, halving {halving:.1e}"),
    )
}

#[test]
fn acceptance() {
    let mut lines = Vec::new();
    let mut run = |n: u32, limit: Option<Duration>, f: &dyn Fn() -> Verdict| {
        let start = Instant::now();
        let v = f();
        let elapsed = start.elapsed();
        let in_time = limit.is_none_or(|l| elapsed <= l);
        let passed = v.passed && in_time;
        lines.push((n, passed));
        println!("{} {n:>2}: {} ({:.2} s)", if passed { "PASS" } else { "FAIL" }, v.detail, elapsed.as_secs_f64());
    };
    run(1, Some(Duration::from_secs(1)), &criterion_1);
    run(2, None, &criterion_2);
    run(3, None, &criterion_3);
    run(4, None, &criterion_4);

    let start = Instant::now();
    let indefinite = report(RunConfig::canonical(vec![2.0], 10, 40));
    let compare_time = start.elapsed();
    run(5, Some(Duration::from_secs(180).saturating_sub(compare_time)), &|| criterion_5(&indefinite));
    let definite = report(RunConfig::canonical(vec![0.5], 10, 40));
    run(6, None, &|| criterion_6(&definite));
    run(7, None, &criterion_7);
    let middle = report(RunConfig::canonical(vec![1.0], 10, 40));
    let all = [&definite, &middle, &indefinite];
    run(8, None, &|| criterion_8(&all));
    run(9, None, &|| criterion_9(&all));
    run(10, None, &|| criterion_10(&all));

    let failed: Vec<u32> = lines.iter().filter(|(_, p)| !p).map(|(n, _)| *n).collect();
    assert!(failed.is_empty(), "failed criteria: {failed:?}");
}
