//! The fixed-header CSV tables behind each CLI subcommand.

use super::csv::{num, opt, Table};
use super::HarnessError;
use crate::actions::{well_geometry, Thresholds};
use crate::asymptotics::{Branches, Refinement, RemainderConstants};
use crate::oracle::{Oracle, OracleConfig, Symmetry};
use crate::potential::{validate_class_g, ClassGReport, Potential, PotentialSpec};
use crate::specfun::{self, Branch};

pub const VALIDATE_HEADER: [&str; 3] = ["condition", "passed", "note"];
pub const GEOMETRY_HEADER: [&str; 7] = ["a", "region", "x2", "alpha_sq", "alpha2_sq", "F", "zeta2"];
pub const HFUN_HEADER: [&str; 4] = ["x", "H_plus", "H_minus", "arg_gamma"];
pub const SPECTRUM_HEADER: [&str; 7] = ["p", "sign", "lambda0", "lambda", "b2", "gap_pred", "region"];
pub const ORACLE_HEADER: [&str; 5] = ["lambda", "symmetry", "nodes_half", "nodes_full", "discriminant_residual"];

/// Grid used for the class checks.
pub const VALIDATION_GRID: usize = 2048;

/// One row per class condition, plus the advisory coefficient test.
pub fn validate(spec: &PotentialSpec) -> (Table, ClassGReport) {
    let report = validate_class_g(spec, VALIDATION_GRID);
    let mut t = Table::new(&VALIDATE_HEADER);
    for (name, v) in report.conditions() {
        t.push(vec![name.into(), v.passed.to_string(), v.note.clone()]);
    }
    let note = if report.reindexed { "advisory; series reflected x -> x + pi" } else { "advisory" };
    t.push(vec!["coefficients".into(), report.coefficient_advisory.to_string(), note.into()]);
    (t, report)
}

pub fn geometry(potential: &Potential, a_values: &[f64], thresholds: &Thresholds) -> Result<Table, HarnessError> {
    let mut t = Table::new(&GEOMETRY_HEADER);
    for &a in a_values {
        let g = well_geometry(potential, a, thresholds)?;
        t.push(vec![num(a), g.coarse.to_string(), num(g.x2), num(g.alpha_sq), num(g.alpha2_sq), num(g.action), num(g.zeta2)]);
    }
    Ok(t)
}

pub fn hfun(x_min: f64, x_max: f64, step: f64) -> Result<Table, HarnessError> {
    if !(x_min.is_finite() && x_max.is_finite() && step.is_finite()) || step <= 0.0 || x_max < x_min {
        return Err(HarnessError::Usage(format!("need finite x_min ≤ x_max and step > 0, got {x_min}, {x_max}, {step}")));
    }
    let n = ((x_max - x_min) / step + 1e-9).floor() as usize;
    let mut t = Table::new(&HFUN_HEADER);
    for i in 0..=n {
        let x = x_min + step * i as f64;
        let h = specfun::h_pm(x);
        t.push(vec![num(x), num(h.h_plus), num(h.h_minus), num(specfun::arg_gamma(x))]);
    }
    Ok(t)
}

/// Asymptotic branch values; `gap_pred` is filled on `+` rows only.
pub fn spectrum(
    potential: &Potential,
    a: f64,
    p_range: (u32, u32),
    refinement: Refinement,
    thresholds: &Thresholds,
    constants: &RemainderConstants,
) -> Result<Table, HarnessError> {
    let branches = Branches::new(potential, a, thresholds)?.with_p_min(1);
    let mut t = Table::new(&SPECTRUM_HEADER);
    for p in p_range.0..=p_range.1 {
        for sign in [Branch::Minus, Branch::Plus] {
            let b = branches.branch(p, sign, refinement, constants)?;
            let gap = (sign == Branch::Plus).then(|| {
                branches.gap_width(0.5 * (branches.lambda0(p) + branches.lambda0(p + 1)))
            });
            t.push(vec![
                p.to_string(),
                sign.symbol().to_string(),
                num(b.lambda0),
                num(b.lambda),
                num(b.b2_used),
                opt(gap),
                branches.fine_region(b.lambda0).to_string(),
            ]);
        }
    }
    Ok(t)
}

/// Shooting eigenvalues in `window`, sorted by `λ`.
pub fn oracle(
    potential: &Potential,
    a: f64,
    window: (f64, f64),
    symmetries: &[Symmetry],
    config: OracleConfig,
) -> Result<Table, HarnessError> {
    let oracle = Oracle::new(potential, a, config)?;
    let mut found = Vec::new();
    for &s in symmetries {
        found.extend(oracle.shoot_eigen(s, window)?);
    }
    found.sort_by(|x, y| x.lambda.total_cmp(&y.lambda));
    let mut t = Table::new(&ORACLE_HEADER);
    for e in found {
        let m = oracle.monodromy(e.lambda)?;
        t.push(vec![
            num(e.lambda),
            e.symmetry.letter().into(),
            e.nodes_half.to_string(),
            e.nodes_full.to_string(),
            num(m.discriminant_residual()),
        ]);
    }
    Ok(t)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn headers_and_row_counts() {
        let p = Potential::canonical();
        let (v, report) = validate(p.spec());
        assert!(report.passed());
        assert_eq!(v.rows.len(), 5);
        let h = hfun(-1.0, 1.0, 0.5).unwrap();
        assert_eq!(h.rows.len(), 5);
        assert_eq!(h.rows[2][0], num(0.0));
        assert!(hfun(1.0, 0.0, 0.1).is_err());
        let g = geometry(&p, &[0.5, 2.0], &Thresholds::default()).unwrap();
        assert_eq!(g.rows[0][1], "U3");
        assert_eq!(g.rows[1][1], "U2");
        let s = spectrum(&p, 2.0, (10, 11), Refinement::None, &Thresholds::default(), &RemainderConstants::default()).unwrap();
        assert_eq!(s.rows.len(), 4);
        assert!(s.rows[0][5].is_empty() && !s.rows[1][5].is_empty());
    }

    #[test]
    fn oracle_rows_are_sorted() {
        let p = Potential::canonical();
        let t = oracle(&p, 2.0, (10.0, 14.0), &Symmetry::BOTH, OracleConfig::default()).unwrap();
        assert!(!t.rows.is_empty());
        let lambdas: Vec<f64> = t.rows.iter().map(|r| r[0].parse().unwrap()).collect();
        assert!(lambdas.windows(2).all(|w| w[0] <= w[1]));
        for r in &t.rows {
            assert!(r[4].parse::<f64>().unwrap() <= 1e-6, "{r:?}");
        }
    }
}
