//! The two asymptotic branches `λ±(a, p)`, the gap width, the ordering of
//! the periodic spectrum by branch, and the per-region lemma residuals.

use std::f64::consts::{FRAC_PI_2, PI};
use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::actions::{self, ActionError, Fine, SpectralParameters, Thresholds, WellGeometry};
use crate::potential::Potential;
use crate::roots;
use crate::specfun::{self, Branch};

/// Below this action the quotient `2πp/F` is not trusted.
pub const MIN_ACTION: f64 = 1e-8;
/// Half-width of the collar `|a − a₂| < C/λ` where the ordering is ambiguous.
pub const ORDER_COLLAR: f64 = PI;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum AsymptoticError {
    #[error(transparent)]
    Action(#[from] ActionError),
    #[error("F(a) = {action:e} too small at a = {a}")]
    DegenerateAction { a: f64, action: f64 },
    #[error("branch index p = {p} below p_min = {p_min}")]
    IndexTooSmall { p: u32, p_min: u32 },
    #[error("ordering ambiguous: |a − a₂| = {distance:e} < C/λ = {collar:e}")]
    AmbiguousOrder { distance: f64, collar: f64 },
    #[error("lemma equation has no root near λ⁰ = {lambda0}")]
    LemmaNoRoot { lambda0: f64 },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct BranchIndex {
    pub p: u32,
    pub sign: Branch,
}

impl fmt::Display for BranchIndex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {})", self.sign.symbol(), self.p)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Refinement {
    #[default]
    None,
    FixedPoint,
}

/// Constants of the remainder bounds, calibrated on the canonical potential.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct RemainderConstants {
    /// `F·|R| ≤ indefinite · λ^{−2/3} ln λ` for `a ≥ a₂`.
    pub indefinite: f64,
    /// `|R| ≤ definite · λ^{−1/2} (ln λ)^{1/2}` for `a < a₂`.
    pub definite: f64,
}

impl Default for RemainderConstants {
    fn default() -> Self {
        RemainderConstants { indefinite: 1.0, definite: 1.0 }
    }
}

impl RemainderConstants {
    /// Bound on `|λ − λ±(a, p)|` at `λ⁰`.
    pub fn budget(&self, a: f64, a2: f64, action: f64, lambda0: f64) -> f64 {
        let log = lambda0.ln().max(0.0);
        if a >= a2 {
            self.indefinite * lambda0.powf(-2.0 / 3.0) * log / action
        } else {
            self.definite * lambda0.powf(-0.5) * log.sqrt()
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BranchEigenvalue {
    pub index: BranchIndex,
    pub a: f64,
    pub lambda0: f64,
    pub lambda: f64,
    pub b2_used: f64,
    pub remainder_budget: f64,
    pub refinement: Refinement,
    /// `false` when fixed-point refinement did not converge and the
    /// unrefined value was returned instead.
    pub converged: bool,
}

/// How the `n`-th periodic eigenvalue relates to the branches.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum OrderedBranch {
    Single(BranchIndex),
    /// Either `(+, p)` or `(−, p)`; the two are not ordered by the asymptotics.
    Pair(u32),
}

/// Asymptotic model at one fixed `a`.
#[derive(Debug, Clone)]
pub struct Branches<'p> {
    potential: &'p Potential,
    geometry: WellGeometry,
    thresholds: Thresholds,
    pub p_min: u32,
}

impl<'p> Branches<'p> {
    pub fn new(potential: &'p Potential, a: f64, thresholds: &Thresholds) -> Result<Self, AsymptoticError> {
        let geometry = actions::well_geometry(potential, a, thresholds)?;
        if geometry.action < MIN_ACTION {
            return Err(AsymptoticError::DegenerateAction { a, action: geometry.action });
        }
        Ok(Branches { potential, geometry, thresholds: *thresholds, p_min: 5 })
    }

    pub fn with_p_min(mut self, p_min: u32) -> Self {
        self.p_min = p_min;
        self
    }

    pub fn geometry(&self) -> &WellGeometry {
        &self.geometry
    }

    pub fn a(&self) -> f64 {
        self.geometry.a
    }

    pub fn action(&self) -> f64 {
        self.geometry.action
    }

    pub fn spectral(&self, lambda: f64) -> SpectralParameters {
        self.geometry.spectral(lambda)
    }

    pub fn fine_region(&self, lambda: f64) -> Fine {
        self.geometry.fine_region(self.potential, lambda, &self.thresholds)
    }

    /// `λ⁰ₚ = 2πp / F(a)`.
    pub fn lambda0(&self, p: u32) -> f64 {
        2.0 * PI * p as f64 / self.geometry.action
    }

    fn formula(&self, lambda_at: f64, p: u32, sign: Branch) -> (f64, f64) {
        let b2 = self.spectral(lambda_at).b2;
        (self.lambda0(p) + specfun::h_branch(b2, sign) / self.geometry.action, b2)
    }

    pub fn branch(&self, p: u32, sign: Branch, refinement: Refinement, constants: &RemainderConstants) -> Result<BranchEigenvalue, AsymptoticError> {
        if p < self.p_min {
            return Err(AsymptoticError::IndexTooSmall { p, p_min: self.p_min });
        }
        let lambda0 = self.lambda0(p);
        let (plain, plain_b2) = self.formula(lambda0, p, sign);
        let (lambda, b2_used, converged) = match refinement {
            Refinement::None => (plain, plain_b2, true),
            Refinement::FixedPoint => {
                let mut current = plain;
                let mut result = None;
                for _ in 0..50 {
                    let (next, b2) = self.formula(current, p, sign);
                    if (next - current).abs() <= 1e-12 * next.abs() {
                        result = Some((next, b2));
                        break;
                    }
                    current = next;
                }
                match result {
                    Some((l, b2)) => (l, b2, true),
                    None => (plain, plain_b2, false),
                }
            }
        };
        let remainder_budget = constants.budget(self.a(), self.potential.a2(), self.geometry.action, lambda0);
        Ok(BranchEigenvalue {
            index: BranchIndex { p, sign },
            a: self.a(),
            lambda0,
            lambda,
            b2_used,
            remainder_budget,
            refinement,
            converged,
        })
    }

    /// Predicted gap `(2π − 2 arctan e^{πb₂(λ)}) / F` between consecutive pairs.
    pub fn gap_width(&self, lambda: f64) -> f64 {
        (2.0 * PI - 2.0 * specfun::arctan_exp_pi(self.spectral(lambda).b2)) / self.geometry.action
    }

    /// Branch carrying the `n`-th periodic eigenvalue (`n ≥ 1`, natural order).
    pub fn order(&self, n: u32, lambda_scale: f64) -> Result<OrderedBranch, AsymptoticError> {
        order_map(n, self.a(), self.potential.a2(), lambda_scale)
    }

    /// Signed residual of the region's lemma equation at `λ`.
    pub fn lemma_residual(&self, lambda: f64, p: u32, sign: Branch) -> f64 {
        let params = self.spectral(lambda);
        let s = sign.sign();
        let lf = lambda * self.geometry.action;
        let two_pi_p = 2.0 * PI * p as f64;
        match self.fine_region(lambda) {
            Fine::A1 => lf - two_pi_p - s * FRAC_PI_2,
            Fine::A2 => lf - two_pi_p - s * FRAC_PI_2 + 1.0 / (24.0 * params.b),
            Fine::A3 | Fine::A4 => {
                let k = params.k_of_b;
                let connection = (2.0 * k / (1.0 + k * k)).min(1.0).acos();
                let z2 = self.geometry.zeta2 * self.geometry.zeta2;
                params.psi - two_pi_p - s * connection + params.b * params.b / (2.0 * z2 * lambda)
            }
            Fine::A5 => lf - two_pi_p + 1.0 / (24.0 * params.b),
        }
    }

    /// Root in `λ` of the lemma equation with its `O(·)` term dropped,
    /// searched within half a level spacing of `λ⁰ₚ`.
    pub fn lemma_lambda(&self, p: u32, sign: Branch) -> Result<f64, AsymptoticError> {
        let lambda0 = self.lambda0(p);
        let half_spacing = PI / self.geometry.action;
        let f = |l: f64| self.lemma_residual(l, p, sign);
        let (lo, hi) = (lambda0 - half_spacing, lambda0 + half_spacing);
        let fdf = |l: f64| {
            let h = 1e-7 * l;
            (f(l), (f(l + h) - f(l - h)) / (2.0 * h))
        };
        // the region (and with it the residual's form) can change across the
        // window, so fall back to bisection on a sub-bracket if Newton cannot start
        roots::newton_bracketed(fdf, lo, hi, 1e-13 * lambda0, 1e-14 * lambda0)
            .or_else(|_| {
                let n = 64;
                let grid: Vec<f64> = (0..=n).map(|i| lo + (hi - lo) * i as f64 / n as f64).collect();
                let values: Vec<f64> = grid.iter().map(|&l| f(l)).collect();
                let nearest = grid
                    .windows(2)
                    .zip(values.windows(2))
                    .filter(|(_, v)| v[0].signum() != v[1].signum())
                    .map(|(x, _)| (x[0], x[1]))
                    .min_by(|a, b| (a.0 - lambda0).abs().total_cmp(&(b.0 - lambda0).abs()));
                match nearest {
                    Some((l, r)) => roots::bisect(f, l, r, 1e-13 * lambda0, 200),
                    None => Err(roots::RootError::NotFinite(lambda0)),
                }
            })
            .map_err(|_| AsymptoticError::LemmaNoRoot { lambda0 })
    }
}

/// `λ⁰ₚ = 2πp / F(a)`.
pub fn lambda0(potential: &Potential, a: f64, p: u32) -> Result<f64, AsymptoticError> {
    let action = actions::action_f(potential, a)?;
    if action < MIN_ACTION {
        return Err(AsymptoticError::DegenerateAction { a, action });
    }
    Ok(2.0 * PI * p as f64 / action)
}

pub fn branch_lambda(
    potential: &Potential,
    a: f64,
    p: u32,
    sign: Branch,
    refinement: Refinement,
    thresholds: &Thresholds,
    constants: &RemainderConstants,
) -> Result<BranchEigenvalue, AsymptoticError> {
    Branches::new(potential, a, thresholds)?.branch(p, sign, refinement, constants)
}

pub fn gap_width(potential: &Potential, a: f64, lambda: f64, thresholds: &Thresholds) -> Result<f64, AsymptoticError> {
    Ok(Branches::new(potential, a, thresholds)?.gap_width(lambda))
}

/// Ordering of the `n`-th periodic eigenvalue (`n ≥ 1`) by branch.
pub fn order_map(n: u32, a: f64, a2: f64, lambda_scale: f64) -> Result<OrderedBranch, AsymptoticError> {
    order_map_with(n, a, a2, lambda_scale, ORDER_COLLAR)
}

/// [`order_map`] with collar constant `c` in place of [`ORDER_COLLAR`].
pub fn order_map_with(n: u32, a: f64, a2: f64, lambda_scale: f64, c: f64) -> Result<OrderedBranch, AsymptoticError> {
    if n == 0 {
        return Err(AsymptoticError::IndexTooSmall { p: 0, p_min: 1 });
    }
    let collar = c / lambda_scale;
    if a >= a2 + collar {
        Ok(OrderedBranch::Single(if n.is_multiple_of(2) {
            BranchIndex { p: n / 2, sign: Branch::Plus }
        } else {
            BranchIndex { p: n.div_ceil(2), sign: Branch::Minus }
        }))
    } else if a <= a2 - collar {
        Ok(OrderedBranch::Pair(n.div_ceil(2)))
    } else {
        Err(AsymptoticError::AmbiguousOrder { distance: (a - a2).abs(), collar })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::FRAC_PI_4;

    fn model(a: f64) -> Branches<'static> {
        let potential: &'static Potential = Box::leak(Box::new(Potential::canonical()));
        Branches::new(potential, a, &Thresholds::default()).unwrap()
    }

    #[test]
    fn lambda0_examples() {
        let at_a2 = model(1.0);
        assert!((at_a2.lambda0(1) - 2.0 * PI / (4.0 * 2f64.sqrt())).abs() < 1e-12);
        let m = model(2.0);
        assert_eq!(m.lambda0(20), 2.0 * m.lambda0(10));
        assert!((m.lambda0(10) - 26.2207).abs() < 1e-3);
    }

    #[test]
    fn at_coalescence_branches_sit_a_quarter_period_off() {
        let m = model(1.0);
        let c = RemainderConstants::default();
        for sign in [Branch::Plus, Branch::Minus] {
            let e = m.branch(12, sign, Refinement::None, &c).unwrap();
            assert!((e.lambda - (e.lambda0 + sign.sign() * FRAC_PI_4 / m.action())).abs() < 1e-13);
        }
    }

    #[test]
    fn deep_indefinite_branch_matches_large_b_form() {
        let m = model(2.0);
        let e = m.branch(30, Branch::Plus, Refinement::None, &RemainderConstants::default()).unwrap();
        let b2 = e.b2_used;
        let expected = e.lambda0 + (FRAC_PI_2 - 1.0 / (24.0 * b2)) / m.action();
        assert!((e.lambda - expected).abs() < e.remainder_budget);
        assert!((e.lambda - e.lambda0).abs() <= (FRAC_PI_2 + 0.1) / m.action());
    }

    #[test]
    fn definite_branches_nearly_coincide() {
        let m = model(0.5);
        let c = RemainderConstants::default();
        let plus = m.branch(30, Branch::Plus, Refinement::None, &c).unwrap();
        let minus = m.branch(30, Branch::Minus, Refinement::None, &c).unwrap();
        let expected = 2.0 * specfun::arctan_exp_pi(plus.b2_used) / m.action();
        assert!(plus.b2_used < -5.0);
        assert!(((plus.lambda - minus.lambda) - expected).abs() < 1e-13);
    }

    #[test]
    fn fixed_point_refinement_converges() {
        let m = model(1.3);
        let e = m.branch(20, Branch::Minus, Refinement::FixedPoint, &RemainderConstants::default()).unwrap();
        assert!(e.converged);
        let (again, _) = m.formula(e.lambda, 20, Branch::Minus);
        assert!((again - e.lambda).abs() < 1e-10);
    }

    #[test]
    fn p_below_minimum_is_rejected() {
        let m = model(2.0);
        assert!(matches!(
            m.branch(2, Branch::Plus, Refinement::None, &RemainderConstants::default()),
            Err(AsymptoticError::IndexTooSmall { .. })
        ));
    }

    #[test]
    fn gap_limits() {
        let m = model(1.0);
        assert!((m.gap_width(50.0) - 1.5 * PI / m.action()).abs() < 1e-14);
        let deep = model(0.2);
        assert!((deep.gap_width(200.0) - 2.0 * PI / deep.action()).abs() < 1e-12);
        let high = model(2.5);
        assert!((high.gap_width(200.0) - PI / high.action()).abs() < 1e-12);
    }

    #[test]
    fn order_examples() {
        assert_eq!(order_map(20, 2.0, 1.0, 50.0).unwrap(), OrderedBranch::Single(BranchIndex { p: 10, sign: Branch::Plus }));
        assert_eq!(order_map(21, 2.0, 1.0, 50.0).unwrap(), OrderedBranch::Single(BranchIndex { p: 11, sign: Branch::Minus }));
        assert_eq!(order_map(20, 0.5, 1.0, 50.0).unwrap(), OrderedBranch::Pair(10));
        assert!(matches!(order_map(20, 1.01, 1.0, 50.0), Err(AsymptoticError::AmbiguousOrder { .. })));
    }

    #[test]
    fn lemma_residual_examples() {
        let m = model(0.3);
        let l0 = m.lambda0(40);
        assert_eq!(m.fine_region(l0), Fine::A5);
        let b = m.spectral(l0).b;
        assert!((m.lemma_residual(l0, 40, Branch::Plus) - 1.0 / (24.0 * b)).abs() < 1e-10);

        let high = model(2.0);
        let l = high.lambda0(30);
        assert_eq!(high.fine_region(l), Fine::A2);
        let flip = high.lemma_residual(l, 30, Branch::Plus) - high.lemma_residual(l, 30, Branch::Minus);
        assert!((flip + PI).abs() < 1e-12);
    }

    #[test]
    fn lemma_root_agrees_with_branch_formula_near_coalescence() {
        let c = RemainderConstants::default();
        for a in [0.98, 1.0, 1.02] {
            let m = model(a);
            for sign in [Branch::Plus, Branch::Minus] {
                let root = m.lemma_lambda(30, sign).unwrap();
                let e = m.branch(30, sign, Refinement::FixedPoint, &c).unwrap();
                assert!((root - e.lambda).abs() < 1e-3, "a = {a} {sign:?}: {root} vs {}", e.lambda);
            }
        }
    }
}
