//! Brute-force eigenvalues of `u'' + λ²(g − a)u = 0` with period-2π
//! boundary conditions.
//!
//! For an even `g` the periodic spectrum is the union of the Dirichlet and
//! Neumann spectra on `(0, π)`. Both are found by shooting from `x = 0` with
//! the phase `θ = atan2(u, u′/λ)` as shooting function: `θ` only ever
//! increases through multiples of `π` (at a zero of `u`, `θ′ = λ`), so
//! `θ(π; λ)` determines the node count, and each node count is hit by
//! exactly one positive eigenvalue of the separated problem. The monodromy
//! matrix over `[−π, π]` is computed by a separate integration and serves as
//! an independent check through the Floquet discriminant.

pub mod dop853;
pub mod extended;

use std::f64::consts::{FRAC_PI_2, PI};
use std::fmt;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::actions::{self, ActionError};
use crate::potential::Potential;
use crate::roots::{self, RootError};
use crate::specfun::Branch;
use dop853::{Dop853, StepError};

/// Coefficient `g` of the equation. Implemented for validated potentials and
/// for [`ConstantPotential`], which exists to test the integrator against
/// closed forms.
pub trait Coefficient: Sync {
    fn g(&self, x: f64) -> f64;
}

impl Coefficient for Potential {
    fn g(&self, x: f64) -> f64 {
        Potential::g(self, x)
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ConstantPotential(pub f64);

impl Coefficient for ConstantPotential {
    fn g(&self, _x: f64) -> f64 {
        self.0
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct OracleConfig {
    /// Local relative tolerance of the integrator.
    pub tol: f64,
    pub lambda_max: f64,
    /// Step cap `oscillation_cap / (λ√(g − a))` where `g > a`.
    pub oscillation_cap: f64,
    /// Step cap `forbidden_cap / (λ√(a − g))` where `g < a`.
    pub forbidden_cap: f64,
    pub h_max: f64,
    /// Eigenvalue brackets are shrunk to `bracket_rel · λ`.
    pub bracket_rel: f64,
    pub max_steps: usize,
}

impl Default for OracleConfig {
    fn default() -> Self {
        OracleConfig {
            tol: 1e-12,
            lambda_max: 500.0,
            oscillation_cap: 0.125,
            forbidden_cap: 0.5,
            h_max: 0.1,
            bracket_rel: 1e-10,
            max_steps: 2_000_000,
        }
    }
}

impl OracleConfig {
    fn refined(&self) -> Self {
        OracleConfig { oscillation_cap: 0.25 * self.oscillation_cap, forbidden_cap: 0.25 * self.forbidden_cap, h_max: 0.25 * self.h_max, ..*self }
    }

    pub fn with_tol(self, tol: f64) -> Self {
        OracleConfig { tol, ..self }
    }
}

#[derive(Debug, Error, Clone, PartialEq)]
pub enum OracleError {
    #[error("λ = {lambda} exceeds λ_max = {max}")]
    LambdaTooLarge { lambda: f64, max: f64 },
    #[error("step size underflow at x = {x} (h = {h:e}); tolerance unreachable")]
    StepUnderflow { x: f64, h: f64 },
    #[error("solution overflowed at x = {x} (λ = {lambda})")]
    Overflow { x: f64, lambda: f64 },
    #[error("more than {0} steps")]
    MaxSteps(usize),
    #[error("{symmetry} shooting at λ = {lambda}: {sign_changes} sign changes but phase implies {phase_count}")]
    MissedRoot { symmetry: Symmetry, lambda: f64, sign_changes: u32, phase_count: u32 },
    #[error("invalid λ window [{lo}, {hi}]")]
    BadWindow { lo: f64, hi: f64 },
    #[error("no {symmetry} eigenvalue with {nodes} interior zeros near λ = {near}")]
    NotFound { symmetry: Symmetry, nodes: u32, near: f64 },
    #[error(transparent)]
    Action(#[from] ActionError),
    #[error(transparent)]
    Root(#[from] RootError),
}

impl OracleError {
    fn from_step(e: StepError, lambda: f64) -> Self {
        match e {
            StepError::Underflow { x, h } => OracleError::StepUnderflow { x, h },
            StepError::NonFinite { x } => OracleError::Overflow { x, lambda },
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Symmetry {
    Dirichlet,
    Neumann,
}

impl Symmetry {
    pub const BOTH: [Symmetry; 2] = [Symmetry::Dirichlet, Symmetry::Neumann];

    /// Dirichlet eigenvalues continue `λ₋`, Neumann eigenvalues `λ₊`.
    pub fn branch(self) -> Branch {
        match self {
            Symmetry::Dirichlet => Branch::Minus,
            Symmetry::Neumann => Branch::Plus,
        }
    }

    pub fn from_branch(branch: Branch) -> Self {
        match branch {
            Branch::Minus => Symmetry::Dirichlet,
            Branch::Plus => Symmetry::Neumann,
        }
    }

    fn initial(self) -> (f64, f64) {
        match self {
            Symmetry::Dirichlet => (0.0, 1.0),
            Symmetry::Neumann => (1.0, 0.0),
        }
    }

    /// Phase at `x = 0`.
    fn phase0(self) -> f64 {
        match self {
            Symmetry::Dirichlet => 0.0,
            Symmetry::Neumann => FRAC_PI_2,
        }
    }

    /// Phase at `x = π` of the eigenfunction with `nodes` zeros in `(0, π)`.
    pub fn target_phase(self, nodes: u32) -> f64 {
        match self {
            Symmetry::Dirichlet => PI * (nodes + 1) as f64,
            Symmetry::Neumann => FRAC_PI_2 + PI * nodes as f64,
        }
    }

    /// Zeros on `[−π, π)` of the symmetric extension of an eigenfunction
    /// with `nodes_half` zeros in `(0, π)`: the odd extension adds `0` and `−π`.
    pub fn nodes_full(self, nodes_half: u32) -> u32 {
        match self {
            Symmetry::Dirichlet => 2 * nodes_half + 2,
            Symmetry::Neumann => 2 * nodes_half,
        }
    }

    /// Interior zero count of the eigenfunction belonging to `(p, branch)`.
    pub fn nodes_half_for(self, p: u32) -> u32 {
        match self {
            Symmetry::Dirichlet => p.saturating_sub(1),
            Symmetry::Neumann => p,
        }
    }

    pub fn letter(self) -> &'static str {
        match self {
            Symmetry::Dirichlet => "D",
            Symmetry::Neumann => "N",
        }
    }
}

impl fmt::Display for Symmetry {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.letter())
    }
}

impl std::str::FromStr for Symmetry {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "d" | "D" | "dirichlet" => Ok(Symmetry::Dirichlet),
            "n" | "N" | "neumann" => Ok(Symmetry::Neumann),
            other => Err(format!("unknown symmetry {other:?}")),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Trajectory {
    pub x: Vec<f64>,
    pub u: Vec<f64>,
    pub du: Vec<f64>,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MonodromyRecord {
    pub lambda: f64,
    pub a: f64,
    /// `matrix[i][j]`: component `i` (u, u′) at `x = π` of the solution
    /// with unit data in component `j` at `x = −π`.
    pub matrix: [[f64; 2]; 2],
    pub discriminant: f64,
    pub determinant: f64,
    /// `|det − 1|` relative to the largest value the Wronskian's two terms
    /// can take along the integration, `λ·max‖y₁‖·max‖y₂‖` with
    /// `‖y‖² = u² + (u′/λ)²` (and at least 1). Through a forbidden zone the
    /// columns grow like `e^{λ∫√(a−g)}`, which makes the raw `|det − 1|`
    /// meaningless in floating point.
    pub wronskian_error: f64,
    pub steps: usize,
}

impl MonodromyRecord {
    /// `|Δ − 2|` relative to the largest matrix entry.
    pub fn discriminant_residual(&self) -> f64 {
        let scale = self.matrix.iter().flatten().fold(1.0f64, |m, v| m.max(v.abs()));
        (self.discriminant - 2.0).abs() / scale
    }
}

/// State of one shooting column at `x = π`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ColumnEnd {
    pub u: f64,
    pub du: f64,
    /// The true solution is `e^{log_scale}·(u, u′)`.
    pub log_scale: f64,
    /// Unwrapped `atan2(u, u′/λ)` at `x = π`.
    pub phase: f64,
    /// Sign changes of `u` in `(0, π]` on accepted steps.
    pub sign_changes: u32,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OracleEigenvalue {
    pub lambda: f64,
    pub symmetry: Symmetry,
    pub nodes_half: u32,
    pub nodes_full: u32,
    pub bracket_width: f64,
}

impl OracleEigenvalue {
    /// Branch label `(p, ±)` implied by the node count, `nodes_full = 2p`.
    pub fn p(&self) -> u32 {
        self.nodes_full / 2
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PeriodicEigenvalue {
    pub eigen: OracleEigenvalue,
    pub discriminant_residual: f64,
    pub wronskian_error: f64,
}

/// Shooting and monodromy for one `(g, a)`.
pub struct Oracle<'c, C: Coefficient> {
    coefficient: &'c C,
    a: f64,
    config: OracleConfig,
    scan_step: f64,
}

const RENORMALIZE_ABOVE: f64 = 1e150;

impl<'c> Oracle<'c, Potential> {
    /// Scan step `π/(4F(a))`, half the smallest predicted gap.
    pub fn new(potential: &'c Potential, a: f64, config: OracleConfig) -> Result<Self, OracleError> {
        let action = actions::action_f(potential, a)?;
        Ok(Oracle { coefficient: potential, a, config, scan_step: PI / (4.0 * action) })
    }
}

impl<'c, C: Coefficient> Oracle<'c, C> {
    pub fn with_scan_step(coefficient: &'c C, a: f64, config: OracleConfig, scan_step: f64) -> Self {
        Oracle { coefficient, a, config, scan_step }
    }

    pub fn a(&self) -> f64 {
        self.a
    }

    pub fn config(&self) -> &OracleConfig {
        &self.config
    }

    pub fn scan_step(&self) -> f64 {
        self.scan_step
    }

    fn check_lambda(&self, lambda: f64) -> Result<(), OracleError> {
        if lambda > self.config.lambda_max || !lambda.is_finite() {
            return Err(OracleError::LambdaTooLarge { lambda, max: self.config.lambda_max });
        }
        Ok(())
    }

    fn step_cap(&self, config: &OracleConfig, lambda: f64, x: f64) -> f64 {
        let q = lambda * lambda * (self.coefficient.g(x) - self.a);
        let cap = if q > 0.0 {
            config.oscillation_cap / q.sqrt()
        } else if q < 0.0 {
            config.forbidden_cap / (-q).sqrt()
        } else {
            config.h_max
        };
        cap.min(config.h_max)
    }

    /// Cap for a step starting at `x` in direction `dir`, checked at both ends.
    fn cap_from(&self, config: &OracleConfig, lambda: f64, x: f64, dir: f64) -> f64 {
        let first = self.step_cap(config, lambda, x);
        first.min(self.step_cap(config, lambda, x + dir * first))
    }

    /// Solution through `init = (u, u′)` at `interval.0`, sampled on every
    /// accepted step up to `interval.1` (either direction).
    pub fn integrate(&self, lambda: f64, init: (f64, f64), interval: (f64, f64)) -> Result<Trajectory, OracleError> {
        self.check_lambda(lambda)?;
        let (x0, x1) = interval;
        let dir = if x1 >= x0 { 1.0 } else { -1.0 };
        let length = (x1 - x0).abs();
        let l2 = lambda * lambda;
        let rhs = |t: f64, y: &[f64; 2], dy: &mut [f64; 2]| {
            let x = x0 + dir * t;
            dy[0] = dir * y[1];
            dy[1] = -dir * l2 * (self.coefficient.g(x) - self.a) * y[0];
        };
        let weights = [lambda.max(1.0), 1.0];
        let cfg = self.config;
        let mut s = Dop853::new(&rhs, 0.0, [init.0, init.1], self.step_cap(&cfg, lambda, x0), cfg.tol, weights);
        let mut out = Trajectory { x: vec![x0], u: vec![init.0], du: vec![init.1] };
        while s.x < length {
            if s.accepted > cfg.max_steps {
                return Err(OracleError::MaxSteps(cfg.max_steps));
            }
            let cap = self.cap_from(&cfg, lambda, x0 + dir * s.x, dir);
            s.step(&rhs, length, cap).map_err(|e| OracleError::from_step(e, lambda))?;
            out.x.push(x0 + dir * s.x);
            out.u.push(s.y[0]);
            out.du.push(s.y[1]);
        }
        Ok(out)
    }

    /// Monodromy matrix over `[−π, π]` from identity data; no renormalization.
    pub fn monodromy(&self, lambda: f64) -> Result<MonodromyRecord, OracleError> {
        self.monodromy_with(lambda, &self.config)
    }

    fn monodromy_with(&self, lambda: f64, cfg: &OracleConfig) -> Result<MonodromyRecord, OracleError> {
        self.check_lambda(lambda)?;
        let l2 = lambda * lambda;
        let rhs = |x: f64, y: &[f64; 4], dy: &mut [f64; 4]| {
            let q = l2 * (self.coefficient.g(x) - self.a);
            dy[0] = y[1];
            dy[1] = -q * y[0];
            dy[2] = y[3];
            dy[3] = -q * y[2];
        };
        let w = lambda.max(1.0);
        let mut s = Dop853::new(&rhs, -PI, [1.0, 0.0, 0.0, 1.0], self.step_cap(cfg, lambda, -PI), cfg.tol, [w, 1.0, w, 1.0]);
        let norm = |u: f64, du: f64| u.hypot(du / w);
        let mut peak = [1.0f64, 1.0 / w];
        while s.x < PI {
            if s.accepted > cfg.max_steps {
                return Err(OracleError::MaxSteps(cfg.max_steps));
            }
            let cap = self.cap_from(cfg, lambda, s.x, 1.0);
            s.step(&rhs, PI, cap).map_err(|e| OracleError::from_step(e, lambda))?;
            peak[0] = peak[0].max(norm(s.y[0], s.y[1]));
            peak[1] = peak[1].max(norm(s.y[2], s.y[3]));
        }
        let y = s.y;
        let matrix = [[y[0], y[2]], [y[1], y[3]]];
        let det = y[0] * y[3] - y[2] * y[1];
        let scale = w * peak[0] * peak[1];
        Ok(MonodromyRecord {
            lambda,
            a: self.a,
            matrix,
            discriminant: y[0] + y[3],
            determinant: det,
            wronskian_error: (det - 1.0).abs() / scale.max(1.0),
            steps: s.accepted,
        })
    }

    /// Integrates shooting columns (`S = 2·columns.len()`) over `[0, π]`
    /// together, tracking phase and sign changes of each.
    fn shoot<const S: usize>(&self, lambda: f64, columns: &[Symmetry], cfg: &OracleConfig) -> Result<Vec<ColumnEnd>, OracleError> {
        debug_assert_eq!(2 * columns.len(), S);
        self.check_lambda(lambda)?;
        let l2 = lambda * lambda;
        let rhs = |x: f64, y: &[f64; S], dy: &mut [f64; S]| {
            let q = l2 * (self.coefficient.g(x) - self.a);
            for c in 0..S / 2 {
                dy[2 * c] = y[2 * c + 1];
                dy[2 * c + 1] = -q * y[2 * c];
            }
        };
        let mut y0 = [0.0; S];
        let mut weights = [1.0; S];
        for (c, sym) in columns.iter().enumerate() {
            let (u, du) = sym.initial();
            y0[2 * c] = u;
            y0[2 * c + 1] = du;
            weights[2 * c] = lambda;
        }
        let mut s = Dop853::new(&rhs, 0.0, y0, self.step_cap(cfg, lambda, 0.0), cfg.tol, weights);
        let mut ends: Vec<ColumnEnd> = columns
            .iter()
            .map(|sym| ColumnEnd { u: 0.0, du: 0.0, log_scale: 0.0, phase: sym.phase0(), sign_changes: 0 })
            .collect();
        // last nonzero sign of u per column
        let mut last_sign: Vec<f64> = columns.iter().map(|sym| if sym.initial().0 == 0.0 { 0.0 } else { 1.0 }).collect();
        while s.x < PI {
            if s.accepted > cfg.max_steps {
                return Err(OracleError::MaxSteps(cfg.max_steps));
            }
            let before = s.y;
            let cap = self.cap_from(cfg, lambda, s.x, 1.0);
            s.step(&rhs, PI, cap).map_err(|e| OracleError::from_step(e, lambda))?;
            for c in 0..S / 2 {
                let (u0, v0) = (before[2 * c], before[2 * c + 1] / lambda);
                let (u1, v1) = (s.y[2 * c], s.y[2 * c + 1] / lambda);
                ends[c].phase += (v0 * u1 - u0 * v1).atan2(v0 * v1 + u0 * u1);
                if u1 != 0.0 {
                    let sign = u1.signum();
                    if last_sign[c] != 0.0 && sign != last_sign[c] {
                        ends[c].sign_changes += 1;
                    }
                    last_sign[c] = sign;
                }
                let amplitude = s.y[2 * c].abs().max(s.y[2 * c + 1].abs());
                if amplitude > RENORMALIZE_ABOVE {
                    s.rescale_column(c, 1.0 / amplitude);
                    ends[c].log_scale += amplitude.ln();
                }
            }
        }
        for (c, end) in ends.iter_mut().enumerate() {
            end.u = s.y[2 * c];
            end.du = s.y[2 * c + 1];
        }
        Ok(ends)
    }

    /// Number of zeros of `u` in `(0, π]` implied by the phase at `π`:
    /// the multiples `kπ`, `k ≥ 1`, that the phase has passed.
    fn phase_zero_count(phase: f64) -> u32 {
        ((phase / PI).ceil() - 1.0).max(0.0) as u32
    }

    fn checked_column(&self, lambda: f64, symmetry: Symmetry, cfg: &OracleConfig) -> Result<ColumnEnd, OracleError> {
        let end = self.shoot::<2>(lambda, &[symmetry], cfg)?[0];
        let phase_count = Self::phase_zero_count(end.phase);
        if end.sign_changes != phase_count {
            return Err(OracleError::MissedRoot { symmetry, lambda, sign_changes: end.sign_changes, phase_count });
        }
        Ok(end)
    }

    /// Shooting data at `π` for one symmetry class. A disagreement between
    /// sign changes and phase triggers one retry with 4× finer step caps.
    pub fn shooting(&self, lambda: f64, symmetry: Symmetry) -> Result<ColumnEnd, OracleError> {
        match self.checked_column(lambda, symmetry, &self.config) {
            Err(OracleError::MissedRoot { .. }) => self.checked_column(lambda, symmetry, &self.config.refined()),
            other => other,
        }
    }

    /// Phase at `π` of both classes in one integration.
    pub fn phases(&self, lambda: f64) -> Result<(f64, f64), OracleError> {
        let ends = self.shoot::<4>(lambda, &Symmetry::BOTH, &self.config)?;
        Ok((ends[0].phase, ends[1].phase))
    }

    fn eigen_in_bracket(&self, symmetry: Symmetry, nodes: u32, lo: f64, hi: f64) -> Result<OracleEigenvalue, OracleError> {
        let target = symmetry.target_phase(nodes);
        let failure = std::cell::Cell::new(None);
        let f = |l: f64| match self.shooting(l, symmetry) {
            Ok(end) => end.phase - target,
            Err(e) => {
                failure.set(Some(e));
                f64::NAN
            }
        };
        let found = roots::brent_root(f, lo, hi, self.config.bracket_rel * lo, 200);
        if let Some(e) = failure.take() {
            return Err(e);
        }
        let (lambda, bracket_width) = found?;
        let end = self.shooting(lambda, symmetry)?;
        // interior zeros of the eigenfunction; a Dirichlet one also vanishes at π
        let nodes_half = match symmetry {
            Symmetry::Dirichlet => ((end.phase / PI).round() as u32).saturating_sub(1),
            Symmetry::Neumann => ((end.phase - FRAC_PI_2) / PI).round().max(0.0) as u32,
        };
        Ok(OracleEigenvalue { lambda, symmetry, nodes_half, nodes_full: symmetry.nodes_full(nodes_half), bracket_width })
    }

    /// All eigenvalues of one symmetry class in `[lo, hi]`.
    pub fn shoot_eigen(&self, symmetry: Symmetry, window: (f64, f64)) -> Result<Vec<OracleEigenvalue>, OracleError> {
        let grid = self.scan(window)?;
        let phases: Vec<f64> = grid
            .par_iter()
            .map(|&l| self.shooting(l, symmetry).map(|e| e.phase))
            .collect::<Result<_, _>>()?;
        let mut brackets = Vec::new();
        for i in 0..grid.len() - 1 {
            let (p0, p1) = (phases[i], phases[i + 1]);
            for nodes in targets_between(symmetry, p0, p1) {
                brackets.push((nodes, grid[i], grid[i + 1]));
            }
        }
        let mut found: Vec<OracleEigenvalue> = brackets
            .par_iter()
            .map(|&(nodes, lo, hi)| self.eigen_in_bracket(symmetry, nodes, lo, hi))
            .collect::<Result<_, _>>()?;
        found.sort_by(|x, y| x.lambda.total_cmp(&y.lambda));
        Ok(found)
    }

    fn scan(&self, (lo, hi): (f64, f64)) -> Result<Vec<f64>, OracleError> {
        if !(lo > 0.0 && hi > lo && hi.is_finite()) {
            return Err(OracleError::BadWindow { lo, hi });
        }
        self.check_lambda(hi)?;
        let n = ((hi - lo) / self.scan_step).ceil().max(1.0) as usize;
        Ok((0..=n).map(|i| lo + (hi - lo) * i as f64 / n as f64).collect())
    }

    /// The eigenvalue of `symmetry` whose eigenfunction has `nodes` zeros in
    /// `(0, π)`, searched outward from `near`.
    pub fn find_by_nodes(&self, symmetry: Symmetry, nodes: u32, near: f64) -> Result<OracleEigenvalue, OracleError> {
        let target = symmetry.target_phase(nodes);
        let step = self.scan_step;
        let phase_at = |l: f64| self.shooting(l, symmetry).map(|e| e.phase - target);
        let mut lo = (near - step).max(1e-3);
        let mut hi = (near + step).min(self.config.lambda_max);
        let (mut flo, mut fhi) = (phase_at(lo)?, phase_at(hi)?);
        for _ in 0..200 {
            if flo <= 0.0 && fhi >= 0.0 || flo >= 0.0 && fhi <= 0.0 {
                return self.eigen_in_bracket(symmetry, nodes, lo, hi);
            }
            if flo > 0.0 && fhi > 0.0 {
                if lo <= 1e-3 {
                    break;
                }
                hi = lo;
                fhi = flo;
                lo = (lo - step).max(1e-3);
                flo = phase_at(lo)?;
            } else {
                if hi >= self.config.lambda_max {
                    break;
                }
                lo = hi;
                flo = fhi;
                hi = (hi + step).min(self.config.lambda_max);
                fhi = phase_at(hi)?;
            }
        }
        Err(OracleError::NotFound { symmetry, nodes, near })
    }

    /// Root of `Δ(λ) − 2` in `[lo, hi]`, found from the monodromy alone; it
    /// does not use the even symmetry of the coefficient.
    pub fn discriminant_root(&self, (lo, hi): (f64, f64)) -> Result<f64, OracleError> {
        self.check_lambda(hi)?;
        let f = |l: f64| self.monodromy(l).map_or(f64::NAN, |m| m.discriminant - 2.0);
        let (root, _) = roots::brent_root(f, lo, hi, 1e-13 * hi, 200)?;
        Ok(root)
    }

    /// Union of the Dirichlet and Neumann spectra in the window, sorted, each
    /// checked against the Floquet discriminant.
    pub fn periodic_spectrum(&self, window: (f64, f64)) -> Result<Vec<PeriodicEigenvalue>, OracleError> {
        let mut all = self.shoot_eigen(Symmetry::Dirichlet, window)?;
        all.extend(self.shoot_eigen(Symmetry::Neumann, window)?);
        all.sort_by(|x, y| x.lambda.total_cmp(&y.lambda));
        all.par_iter()
            .map(|e| {
                let m = self.monodromy(e.lambda)?;
                Ok(PeriodicEigenvalue { eigen: *e, discriminant_residual: m.discriminant_residual(), wronskian_error: m.wronskian_error })
            })
            .collect()
    }
}

/// Interior node counts `m` whose target phase lies between `p0` and `p1`.
fn targets_between(symmetry: Symmetry, p0: f64, p1: f64) -> Vec<u32> {
    let (lo, hi) = if p0 <= p1 { (p0, p1) } else { (p1, p0) };
    let offset = symmetry.phase0();
    let first = ((lo - offset) / PI).ceil().max(if symmetry == Symmetry::Dirichlet { 1.0 } else { 0.0 });
    let mut out = Vec::new();
    let mut k = first;
    while offset + k * PI <= hi {
        let nodes = match symmetry {
            Symmetry::Dirichlet => k as u32 - 1,
            Symmetry::Neumann => k as u32,
        };
        out.push(nodes);
        k += 1.0;
    }
    out
}
