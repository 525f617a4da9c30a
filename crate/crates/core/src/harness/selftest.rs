//! Reduced-size versions of every invariant suite, for a quick health check.

use std::f64::consts::{FRAC_PI_2, FRAC_PI_4, PI};
use std::fmt;
use std::time::{Duration, Instant};

use super::compare::{compare, Station};
use super::config::RunConfig;
use crate::actions::{self, Thresholds};
use crate::asymptotics::{order_map, OrderedBranch};
use crate::oracle::extended::{splitting, ExtendedShooter};
use crate::oracle::{Oracle, OracleConfig, Symmetry};
use crate::potential::{validate_class_g, Potential, PotentialSpec};
use crate::specfun::{self, Branch};

#[derive(Debug, Clone, PartialEq)]
pub struct Check {
    pub name: &'static str,
    pub passed: bool,
    pub detail: String,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SelftestReport {
    pub checks: Vec<Check>,
    pub elapsed: Duration,
}

impl SelftestReport {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    pub fn failures(&self) -> impl Iterator<Item = &Check> {
        self.checks.iter().filter(|c| !c.passed)
    }
}

impl fmt::Display for SelftestReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for c in &self.checks {
            writeln!(f, "{} {:<32} {}", if c.passed { "PASS" } else { "FAIL" }, c.name, c.detail)?;
        }
        let failed = self.failures().count();
        write!(f, "{} checks, {} failed, {:.1} s", self.checks.len(), failed, self.elapsed.as_secs_f64())
    }
}

fn check(name: &'static str, passed: bool, detail: impl Into<String>) -> Check {
    Check { name, passed, detail: detail.into() }
}

/// Deterministic points in `[lo, hi]` (a Weyl sequence).
fn sample(n: usize, lo: f64, hi: f64) -> impl Iterator<Item = f64> {
    let golden = 0.5 * (5f64.sqrt() - 1.0);
    (1..=n).map(move |i| lo + (hi - lo) * (i as f64 * golden).fract())
}

pub fn selftest() -> SelftestReport {
    selftest_with(&specfun::arg_gamma)
}

/// Runs all suites; the `H±` identity suites evaluate `H±` with the given
/// `arg Γ(½ + ix)` so that a corrupted implementation can be injected.
pub fn selftest_with(arg_gamma: &(dyn Fn(f64) -> f64 + Sync)) -> SelftestReport {
    let start = Instant::now();
    let mut checks = Vec::new();
    checks.extend(specfun_suite(arg_gamma));
    checks.extend(potential_suite());
    checks.extend(actions_suite());
    checks.extend(asymptotics_suite());
    checks.extend(oracle_suite());
    checks.extend(harness_suite());
    SelftestReport { checks, elapsed: start.elapsed() }
}

fn specfun_suite(arg_gamma: &(dyn Fn(f64) -> f64 + Sync)) -> Vec<Check> {
    let h = |x: f64| specfun::h_pm_with(x, arg_gamma);
    let mut out = Vec::new();

    let difference = sample(1000, -20.0, 20.0)
        .map(|x| {
            let e = h(x);
            (e.h_plus - e.h_minus - 2.0 * specfun::arctan_exp_pi(x)).abs()
        })
        .fold(0.0, f64::max);
    out.push(check("H+ - H- identity", difference <= 1e-12, format!("max error {difference:.2e}")));

    let reflection = sample(1000, -20.0, 20.0)
        .map(|x| {
            let (e, r) = (h(x), h(-x));
            (r.h_plus - (FRAC_PI_2 - e.h_plus)).abs().max((r.h_minus - (-FRAC_PI_2 - e.h_minus)).abs())
        })
        .fold(0.0, f64::max);
    out.push(check("H(-x) reflection identity", reflection <= 1e-12, format!("max error {reflection:.2e}")));

    let zero = h(0.0);
    let at_zero = (zero.h_plus - FRAC_PI_4).abs().max((zero.h_minus + FRAC_PI_4).abs());
    out.push(check("H(0) = ±π/4", at_zero <= 1e-12, format!("error {at_zero:.2e}")));

    let odd = sample(200, 0.0, 50.0).map(|x| (arg_gamma(-x) + arg_gamma(x)).abs()).fold(0.0, f64::max);
    out.push(check("arg Γ oddness", odd <= 1e-14, format!("max |f(-x) + f(x)| {odd:.2e}")));

    let stirling = [10.0f64, 20.0, 50.0]
        .iter()
        .map(|&x| (arg_gamma(x) - (x * x.ln() - x + 1.0 / (24.0 * x) + 7.0 / (2880.0 * x.powi(3)))).abs())
        .fold(0.0, f64::max);
    out.push(check("arg Γ Stirling form", stirling <= 1e-8, format!("max error {stirling:.2e}")));

    let plus = specfun::h_minimum(Branch::Plus);
    let minus = specfun::h_minimum(Branch::Minus);
    let minima = (plus.x_star - 0.0293).abs() <= 2e-3
        && (plus.h_star - (FRAC_PI_4 - 0.0293)).abs() <= 2e-3
        && (minus.x_star - 1.683).abs() <= 2e-3
        && (minus.h_star - (-FRAC_PI_2 - 0.02)).abs() <= 2e-3;
    out.push(check(
        "H± minima",
        minima,
        format!("x+ = {:.5}, H+ = {:.5}, x- = {:.5}, H- = {:.5}", plus.x_star, plus.h_star, minus.x_star, minus.h_star),
    ));

    let bound = sample(400, -30.0, 30.0)
        .map(|x| {
            let e = h(x);
            e.h_plus.abs().max(e.h_minus.abs())
        })
        .fold(0.0, f64::max);
    out.push(check("|H±| ≤ π/2 + 0.05", bound <= FRAC_PI_2 + 0.05, format!("max {bound:.5}")));
    out
}

fn potential_suite() -> Vec<Check> {
    let mut out = Vec::new();
    let canonical = validate_class_g(&PotentialSpec::canonical(), 512);
    out.push(check("2 - cos x admissible", canonical.passed(), ""));
    let reflected = validate_class_g(&PotentialSpec::new(vec![2.0, 1.0]).expect("finite"), 512);
    out.push(check("2 + cos x reindexed", reflected.passed() && reflected.reindexed, ""));
    let double_well = validate_class_g(&PotentialSpec::new(vec![2.0, 0.0, -1.0]).expect("finite"), 512);
    out.push(check("2 - cos 2x rejected", !double_well.passed(), ""));
    let p = Potential::canonical();
    let even = sample(1000, -PI, PI).map(|x| (p.g(x) - p.g(-x)).abs().max((p.h(x) - p.h(-x)).abs())).fold(0.0, f64::max);
    out.push(check("g and h even", even <= 1e-12, format!("max asymmetry {even:.2e}")));
    out
}

fn actions_suite() -> Vec<Check> {
    let p = Potential::canonical();
    let mut out = Vec::new();
    let f1 = actions::action_f(&p, 1.0).unwrap_or(f64::NAN);
    out.push(check("F(1) = 4√2", (f1 - 4.0 * 2f64.sqrt()).abs() <= 1e-9, format!("F(1) = {f1:.15}")));
    let t = Thresholds::default();
    let worst = [0.3, 0.8, 1.5, 2.2, 2.9]
        .iter()
        .map(|&a| {
            let g = actions::well_geometry(&p, a, &t).expect("a inside (0, a₁)");
            let lhs = actions::zeta2_lhs(&p, a, g.coarse).expect("a inside (0, a₁)");
            actions::zeta2_residual(&g, lhs).abs()
        })
        .fold(0.0, f64::max);
    out.push(check("ζ₂ back-substitution", worst <= 1e-10, format!("max residual {worst:.2e}")));
    out
}

fn asymptotics_suite() -> Vec<Check> {
    let p = Potential::canonical();
    let mut out = Vec::new();
    let t = Thresholds::default();
    let mut worst: f64 = 0.0;
    for a in [0.5, 1.0, 2.0] {
        let s = Station::new(&p, a, &t, OracleConfig::default(), Default::default(), Default::default()).expect("valid a");
        let f = s.branches.action();
        for pp in [10, 20] {
            for sign in [Branch::Minus, Branch::Plus] {
                let b = s.asymptotic(pp, sign).expect("p ≥ 1");
                worst = worst.max((b.lambda - b.lambda0).abs() * f / (FRAC_PI_2 + 0.1));
            }
        }
    }
    out.push(check("|λ± - λ⁰| ≤ (π/2 + 0.1)/F", worst <= 1.0, format!("max ratio {worst:.3}")));
    let order = matches!(order_map(20, 2.0, 1.0, 50.0), Ok(OrderedBranch::Single(i)) if i.p == 10 && i.sign == Branch::Plus)
        && matches!(order_map(21, 2.0, 1.0, 50.0), Ok(OrderedBranch::Single(i)) if i.p == 11 && i.sign == Branch::Minus);
    out.push(check("ordering map", order, ""));
    out
}

fn oracle_suite() -> Vec<Check> {
    let p = Potential::canonical();
    let mut out = Vec::new();
    let oracle = Oracle::new(&p, 2.0, OracleConfig::default()).expect("valid a");
    let det = [12.0, 21.7, 30.0]
        .iter()
        .map(|&l| oracle.monodromy(l).map(|m| m.wronskian_error).unwrap_or(f64::INFINITY))
        .fold(0.0, f64::max);
    out.push(check("monodromy det = 1", det <= 1e-9, format!("max relative drift {det:.2e}")));
    let disc = oracle
        .find_by_nodes(Symmetry::Dirichlet, 9, 26.0)
        .and_then(|e| oracle.monodromy(e.lambda))
        .map(|m| m.discriminant_residual())
        .unwrap_or(f64::INFINITY);
    out.push(check("discriminant 2 at D eigenvalue", disc <= 1e-6, format!("residual {disc:.2e}")));
    let definite = Oracle::new(&p, 0.5, OracleConfig::default()).expect("valid a");
    let gaps: Vec<f64> = [10u32, 20]
        .iter()
        .map(|&pp| {
            let d = definite.find_by_nodes(Symmetry::Dirichlet, pp - 1, 8.43 * pp as f64 / 10.0);
            let n = definite.find_by_nodes(Symmetry::Neumann, pp, 8.43 * pp as f64 / 10.0);
            match (d, n) {
                (Ok(d), Ok(n)) => {
                    let shooter = ExtendedShooter::new(p.spec(), 0.5, 1.05 * d.lambda.max(n.lambda));
                    splitting(&shooter, d.lambda, n.lambda).map(|s| s.gap).unwrap_or(f64::NAN)
                }
                _ => f64::NAN,
            }
        })
        .collect();
    let decays = gaps[1] > 0.0 && gaps[1] < gaps[0] / 16.0 && gaps[1] < 1e-6 * 16.86;
    out.push(check("definite D/N splitting decays", decays, format!("p=10: {:.2e}, p=20: {:.2e}", gaps[0], gaps[1])));
    out
}

fn harness_suite() -> Vec<Check> {
    let config = RunConfig::canonical(vec![2.0], 10, 11);
    let detail;
    let passed = match compare(&config) {
        Ok(r) => {
            let ok = r.unmatched.is_empty() && r.rows.iter().all(|row| row.within_budget() && row.nodes_full == 2 * row.p);
            let worst = r.rows.iter().map(|row| row.residual_scaled / row.budget).fold(0.0, f64::max);
            detail = format!("{} rows, max residual/budget {worst:.3}", r.rows.len());
            ok
        }
        Err(e) => {
            detail = e.to_string();
            false
        }
    };
    vec![check("compare a=2, p=10..11", passed, detail)]
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn biased_arg_gamma_is_detected() {
        let biased = |x: f64| specfun::arg_gamma(x) + 1e-3;
        let checks = specfun_suite(&biased);
        let reflection = checks.iter().find(|c| c.name == "H(-x) reflection identity").unwrap();
        assert!(!reflection.passed);
        assert!(specfun_suite(&specfun::arg_gamma).iter().all(|c| c.passed));
    }
}
