//! Asymptotic branches against oracle eigenvalues.

use rayon::prelude::*;

use super::config::RunConfig;
use super::csv::{num, opt, Table};
use super::HarnessError;
use crate::actions::{Fine, Thresholds};
use crate::asymptotics::{Branches, Refinement, RemainderConstants};
use crate::oracle::{Oracle, OracleConfig, OracleEigenvalue, Symmetry};
use crate::potential::Potential;
use crate::specfun::Branch;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ComparisonRow {
    pub a: f64,
    pub p: u32,
    pub sign: Branch,
    /// Fine region at `λ⁰ₚ`.
    pub region: Fine,
    pub lambda_asym: f64,
    pub lambda_oracle: f64,
    /// `|λ_oracle − λ_asym|·F(a)`
    pub residual_scaled: f64,
    /// Remainder bound in the same units, `F(a)·|R|`.
    pub budget: f64,
    pub b2: f64,
    /// Zeros of the eigenfunction on `[−π, π)`, counted on its trajectory.
    pub nodes_full: u32,
    /// `λ₋(p+1) − λ₊(p)` from the oracle; only on `+` rows.
    pub gap_observed: Option<f64>,
    pub gap_predicted: Option<f64>,
}

impl ComparisonRow {
    pub fn within_budget(&self) -> bool {
        self.residual_scaled <= self.budget
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct UnmatchedEigenvalue {
    pub a: f64,
    pub p: u32,
    pub sign: Branch,
    pub reason: String,
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct CompareReport {
    pub rows: Vec<ComparisonRow>,
    pub unmatched: Vec<UnmatchedEigenvalue>,
}

impl CompareReport {
    pub const HEADER: [&'static str; 12] = [
        "a",
        "p",
        "sign",
        "region",
        "lambda_asym",
        "lambda_oracle",
        "residual_scaled",
        "budget",
        "b2",
        "nodes_full",
        "gap_observed",
        "gap_predicted",
    ];

    pub fn table(&self) -> Table {
        let mut t = Table::new(&Self::HEADER);
        for r in &self.rows {
            t.push(vec![
                num(r.a),
                r.p.to_string(),
                r.sign.symbol().to_string(),
                r.region.to_string(),
                num(r.lambda_asym),
                num(r.lambda_oracle),
                num(r.residual_scaled),
                num(r.budget),
                num(r.b2),
                r.nodes_full.to_string(),
                opt(r.gap_observed),
                opt(r.gap_predicted),
            ]);
        }
        t
    }

    pub fn row(&self, a: f64, p: u32, sign: Branch) -> Option<&ComparisonRow> {
        self.rows.iter().find(|r| r.a == a && r.p == p && r.sign == sign)
    }
}

/// Everything needed at one value of `a`.
pub struct Station<'p> {
    pub branches: Branches<'p>,
    pub oracle: Oracle<'p, Potential>,
    pub refinement: Refinement,
    pub constants: RemainderConstants,
}

impl<'p> Station<'p> {
    pub fn new(
        potential: &'p Potential,
        a: f64,
        thresholds: &Thresholds,
        oracle: OracleConfig,
        refinement: Refinement,
        constants: RemainderConstants,
    ) -> Result<Self, HarnessError> {
        let branches = Branches::new(potential, a, thresholds)?.with_p_min(1);
        let oracle = Oracle::new(potential, a, oracle)?;
        Ok(Station { branches, oracle, refinement, constants })
    }

    pub fn a(&self) -> f64 {
        self.branches.a()
    }

    pub fn asymptotic(&self, p: u32, sign: Branch) -> Result<crate::asymptotics::BranchEigenvalue, HarnessError> {
        Ok(self.branches.branch(p, sign, self.refinement, &self.constants)?)
    }

    /// Oracle eigenvalue of the class matching `sign` whose eigenfunction has
    /// `2p` zeros, searched from the asymptotic value outward.
    pub fn oracle_eigen(&self, p: u32, sign: Branch) -> Result<OracleEigenvalue, HarnessError> {
        let near = self.asymptotic(p, sign)?.lambda;
        let symmetry = Symmetry::from_branch(sign);
        let e = self.oracle.find_by_nodes(symmetry, symmetry.nodes_half_for(p), near)?;
        if e.nodes_full != 2 * p {
            return Err(HarnessError::NodeCount { expected: 2 * p, found: e.nodes_full });
        }
        Ok(e)
    }

    pub fn row(&self, p: u32, sign: Branch) -> Result<ComparisonRow, HarnessError> {
        let asym = self.asymptotic(p, sign)?;
        let e = self.oracle_eigen(p, sign)?;
        let f = self.branches.action();
        let (gap_observed, gap_predicted) = match sign {
            Branch::Plus => {
                let next = self.oracle_eigen(p + 1, Branch::Minus)?;
                (Some(next.lambda - e.lambda), Some(self.predicted_gap(p)))
            }
            Branch::Minus => (None, None),
        };
        Ok(ComparisonRow {
            a: self.a(),
            p,
            sign,
            region: self.branches.fine_region(asym.lambda0),
            lambda_asym: asym.lambda,
            lambda_oracle: e.lambda,
            residual_scaled: (e.lambda - asym.lambda).abs() * f,
            budget: asym.remainder_budget * f,
            b2: asym.b2_used,
            nodes_full: count_zeros_full(&self.oracle, &e)?,
            gap_observed,
            gap_predicted,
        })
    }

    /// Gap between the `p` and `p + 1` cells with `b₂` taken midway.
    pub fn predicted_gap(&self, p: u32) -> f64 {
        let mid = 0.5 * (self.branches.lambda0(p) + self.branches.lambda0(p + 1));
        self.branches.gap_width(mid)
    }

    /// Sum of the remainder budgets of the two eigenvalues bounding the gap
    /// after `(p, +)`, in `λ` units.
    pub fn gap_budget(&self, p: u32) -> Result<f64, HarnessError> {
        Ok(self.asymptotic(p, Branch::Plus)?.remainder_budget + self.asymptotic(p + 1, Branch::Minus)?.remainder_budget)
    }
}

/// Zeros on `[−π, π)` of the symmetric eigenfunction, counted as sign
/// changes along two fresh integrations from `x = 0`, plus the zeros at `0`
/// and `−π` when the solution vanishes there.
pub fn count_zeros_full(oracle: &Oracle<'_, Potential>, e: &OracleEigenvalue) -> Result<u32, HarnessError> {
    let init = match e.symmetry {
        Symmetry::Dirichlet => (0.0, 1.0),
        Symmetry::Neumann => (1.0, 0.0),
    };
    let right = oracle.integrate(e.lambda, init, (0.0, std::f64::consts::PI))?;
    let left = oracle.integrate(e.lambda, init, (0.0, -std::f64::consts::PI))?;
    let interior = |u: &[f64]| {
        // the last sample sits at ±π, whose zero is handled separately
        let mut last = 0.0;
        let mut count = 0;
        for &v in &u[..u.len() - 1] {
            if v != 0.0 {
                if last != 0.0 && v.signum() != last {
                    count += 1;
                }
                last = v.signum();
            }
        }
        count
    };
    let peak = left.u.iter().chain(&right.u).fold(0.0f64, |m, v| m.max(v.abs()));
    let at_zero = u32::from(init.0 == 0.0);
    let at_minus_pi = u32::from(left.u.last().is_some_and(|v| v.abs() < 1e-6 * peak));
    Ok(interior(&right.u) + interior(&left.u) + at_zero + at_minus_pi)
}

fn stations<'p>(config: &RunConfig, potential: &'p Potential) -> Result<Vec<Station<'p>>, HarnessError> {
    let grid = config.grid()?;
    config
        .a_values()?
        .into_iter()
        .map(|a| {
            Station::new(potential, a, &config.region_thresholds(), config.oracle_config(), grid.refinement, config.constants())
        })
        .collect()
}

/// All `(a, p, ±)` of the config's grid, sorted by `(a, p, sign)` with `−` first.
pub fn compare(config: &RunConfig) -> Result<CompareReport, HarnessError> {
    let potential = config.validated_potential()?;
    let grid = config.grid()?;
    let stations = stations(config, &potential)?;
    let jobs: Vec<(usize, u32, Branch)> = (0..stations.len())
        .flat_map(|i| (grid.p_min..=grid.p_max).flat_map(move |p| [(i, p, Branch::Minus), (i, p, Branch::Plus)]))
        .collect();
    let results: Vec<Result<ComparisonRow, UnmatchedEigenvalue>> = jobs
        .par_iter()
        .map(|&(i, p, sign)| {
            let s = &stations[i];
            s.row(p, sign).map_err(|e| UnmatchedEigenvalue { a: s.a(), p, sign, reason: e.to_string() })
        })
        .collect();
    let mut report = CompareReport::default();
    for r in results {
        match r {
            Ok(row) => report.rows.push(row),
            Err(u) => report.unmatched.push(u),
        }
    }
    let key = |a: f64, p: u32, sign: Branch| (a, p, sign == Branch::Plus);
    report.rows.sort_by(|x, y| key(x.a, x.p, x.sign).partial_cmp(&key(y.a, y.p, y.sign)).expect("finite a"));
    report.unmatched.sort_by(|x, y| key(x.a, x.p, x.sign).partial_cmp(&key(y.a, y.p, y.sign)).expect("finite a"));
    Ok(report)
}

/// Ratio of the largest to the median consecutive jump of a sampled curve.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct JumpStatistic {
    pub max_jump: f64,
    pub median_jump: f64,
}

impl JumpStatistic {
    pub fn of(values: &[f64]) -> Option<Self> {
        let mut jumps: Vec<f64> = values.windows(2).map(|w| (w[1] - w[0]).abs()).collect();
        if jumps.is_empty() {
            return None;
        }
        let max_jump = jumps.iter().copied().fold(0.0, f64::max);
        jumps.sort_by(f64::total_cmp);
        let n = jumps.len();
        let median_jump = if n % 2 == 1 { jumps[n / 2] } else { 0.5 * (jumps[n / 2 - 1] + jumps[n / 2]) };
        Some(JumpStatistic { max_jump, median_jump })
    }

    pub fn ratio(&self) -> f64 {
        self.max_jump / self.median_jump
    }
}

/// Lemma residual at an oracle eigenvalue, against the scaled budget.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LemmaCheck {
    pub a: f64,
    pub p: u32,
    pub sign: Branch,
    pub region: Fine,
    pub residual: f64,
    pub budget: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepReport {
    pub p: u32,
    pub rows: Vec<ComparisonRow>,
    pub unmatched: Vec<UnmatchedEigenvalue>,
    /// Continuity of the asymptotic `λ₊(a)` and `λ₋(a)`.
    pub jumps_plus: Option<JumpStatistic>,
    pub jumps_minus: Option<JumpStatistic>,
    /// Lemma residuals at both ends of the grid.
    pub ends: Vec<LemmaCheck>,
}

/// Fixed-`p` sweep over the config's `a`-grid (`p_min` must equal `p_max`).
pub fn sweep_transition(config: &RunConfig) -> Result<SweepReport, HarnessError> {
    let grid = config.grid()?;
    if grid.p_min != grid.p_max {
        return Err(HarnessError::Usage(format!("sweep needs a single p, got {}..={}", grid.p_min, grid.p_max)));
    }
    let p = grid.p_min;
    let report = compare(config)?;
    let potential = config.validated_potential()?;
    let curve = |sign: Branch| -> Vec<f64> {
        report.rows.iter().filter(|r| r.sign == sign).map(|r| r.lambda_asym).collect()
    };
    let a_values = config.a_values()?;
    let mut ends = Vec::new();
    if let (Some(&first), Some(&last)) = (a_values.first(), a_values.last()) {
        for a in [first, last] {
            let s = Station::new(&potential, a, &config.region_thresholds(), config.oracle_config(), grid.refinement, config.constants())?;
            for sign in [Branch::Minus, Branch::Plus] {
                if let Some(row) = report.row(a, p, sign) {
                    ends.push(LemmaCheck {
                        a,
                        p,
                        sign,
                        region: s.branches.fine_region(row.lambda_oracle),
                        residual: s.branches.lemma_residual(row.lambda_oracle, p, sign),
                        budget: row.budget,
                    });
                }
            }
        }
    }
    Ok(SweepReport {
        p,
        jumps_plus: JumpStatistic::of(&curve(Branch::Plus)),
        jumps_minus: JumpStatistic::of(&curve(Branch::Minus)),
        rows: report.rows,
        unmatched: report.unmatched,
        ends,
    })
}
