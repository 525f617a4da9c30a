//! Turning points, action integrals and the parameters `b`, `b₂`, `ζ₂`, `Ψ`
//! that feed the asymptotic formulas.

use std::f64::consts::{FRAC_2_PI, PI};
use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::potential::Potential;
use crate::quadrature::{integrate, integrate_sqrt_left};
use crate::roots::{self, RootError};
use crate::specfun;

const QUAD_TOL: f64 = 1e-13;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum ActionError {
    #[error("a = {a} outside [0, a₁ = {a1})")]
    OutOfRange { a: f64, a1: f64 },
    #[error("no turning point for a = {a}: {source}")]
    NoRoot { a: f64, source: RootError },
    #[error("action integral vanishes at a = {a}")]
    DegenerateAction { a: f64 },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Coarse {
    U1,
    U2,
    U3,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Fine {
    A1,
    A2,
    A3,
    A4,
    A5,
}

impl fmt::Display for Coarse {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            Coarse::U1 => "U1",
            Coarse::U2 => "U2",
            Coarse::U3 => "U3",
        };
        f.write_str(s)
    }
}

impl fmt::Display for Fine {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            Fine::A1 => "A1",
            Fine::A2 => "A2",
            Fine::A3 => "A3",
            Fine::A4 => "A4",
            Fine::A5 => "A5",
        };
        f.write_str(s)
    }
}

impl std::str::FromStr for Fine {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "A1" => Ok(Fine::A1),
            "A2" => Ok(Fine::A2),
            "A3" => Ok(Fine::A3),
            "A4" => Ok(Fine::A4),
            "A5" => Ok(Fine::A5),
            other => Err(format!("unknown region {other:?}")),
        }
    }
}

/// Coarse region plus, once `λ` is known, the fine one.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct RegionTag {
    pub coarse: Coarse,
    pub fine: Option<Fine>,
}

impl fmt::Display for RegionTag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.fine {
            Some(fine) => write!(f, "{fine}"),
            None => write!(f, "{}", self.coarse),
        }
    }
}

/// Region boundaries. `a0 = None` picks the largest `a` with
/// `π − x₂(a) ≥ a0_margin`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct Thresholds {
    pub a0: Option<f64>,
    pub a0_margin: f64,
    /// `A₂/A₃` boundary `b₂ = c_a2_a3 · λ^{2/9}`.
    pub c_a2_a3: f64,
    /// `A₄/A₅` boundary `|b| = c_a4_a5 · λ^{1/3}`.
    pub c_a4_a5: f64,
}

impl Default for Thresholds {
    fn default() -> Self {
        Thresholds { a0: None, a0_margin: 0.5, c_a2_a3: 1.0, c_a4_a5: 1.0 }
    }
}

impl Thresholds {
    pub fn a0(&self, potential: &Potential) -> f64 {
        self.a0.unwrap_or_else(|| potential.g(PI - self.a0_margin))
    }

    pub fn coarse(&self, potential: &Potential, a: f64) -> Coarse {
        if a >= self.a0(potential) {
            Coarse::U1
        } else if a >= potential.a2() {
            Coarse::U2
        } else {
            Coarse::U3
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct WellGeometry {
    pub a: f64,
    pub coarse: Coarse,
    /// Root of `g = a` on `(0, π)` for `a > a₂`, of `h = a` on `(0, x₀]` for `a < a₂`.
    pub x2: f64,
    pub alpha_sq: f64,
    pub alpha2_sq: f64,
    pub action: f64,
    pub zeta2: f64,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SpectralParameters {
    pub lambda: f64,
    pub b: f64,
    pub b2: f64,
    pub k_of_b: f64,
    pub psi: f64,
}

fn check_range(potential: &Potential, a: f64) -> Result<(), ActionError> {
    if !(0.0..potential.a1()).contains(&a) {
        return Err(ActionError::OutOfRange { a, a1: potential.a1() });
    }
    Ok(())
}

/// Turning point `x₂(a)`; zero at `a = a₂`.
pub fn turning_point(potential: &Potential, a: f64) -> Result<f64, ActionError> {
    check_range(potential, a)?;
    let a2 = potential.a2();
    let ftol = 1e-13 * potential.a1().max(1.0);
    let found = if a > a2 {
        roots::newton_bracketed(|x| (potential.g(x) - a, potential.g_prime(x)), 0.0, PI, 1e-15, ftol)
    } else if a < a2 {
        roots::newton_bracketed(|x| (potential.h(x) - a, potential.h_prime(x)), 0.0, potential.x0(), 1e-15, ftol)
    } else {
        return Ok(0.0);
    };
    found.map_err(|source| ActionError::NoRoot { a, source })
}

/// `∫₀^{x₂} f` for an integrand with a square-root zero at `x₂`.
fn sqrt_right(f: impl Fn(f64) -> f64, x2: f64) -> f64 {
    if x2 <= 0.0 {
        return 0.0;
    }
    integrate_sqrt_left(|t| f(x2 - t), 0.0, x2, QUAD_TOL).value
}

/// `F(a) = ∫_{g > a} √(g − a)` over one period.
pub fn action_f(potential: &Potential, a: f64) -> Result<f64, ActionError> {
    check_range(potential, a)?;
    let root = |x: f64| (potential.g(x) - a).max(0.0).sqrt();
    if a > potential.a2() {
        let x2 = turning_point(potential, a)?;
        Ok(2.0 * integrate_sqrt_left(root, x2, PI - x2, QUAD_TOL).value)
    } else {
        Ok(2.0 * integrate(root, 0.0, PI, QUAD_TOL, 1e-15, 400).value)
    }
}

/// `(α², α₂²)` for the coarse region containing `a`.
pub fn alpha_squares(potential: &Potential, a: f64, thresholds: &Thresholds) -> Result<(f64, f64), ActionError> {
    let geometry = well_geometry(potential, a, thresholds)?;
    Ok((geometry.alpha_sq, geometry.alpha2_sq))
}

/// Closed-form `ζ`-side of the implicit relation for `ζ₂` and its derivative in `ζ`.
fn zeta_side(coarse: Coarse, alpha: f64, zeta: f64) -> (f64, f64) {
    if alpha == 0.0 {
        return (0.5 * zeta * zeta, zeta);
    }
    let a2 = alpha * alpha;
    match coarse {
        Coarse::U1 | Coarse::U2 => {
            let z = zeta.max(alpha);
            let root = (z * z - a2).max(0.0).sqrt();
            (0.5 * z * root - 0.5 * a2 * (z / alpha).acosh(), root)
        }
        Coarse::U3 => {
            let root = (zeta * zeta + a2).sqrt();
            (0.5 * zeta * root + 0.5 * a2 * (zeta / alpha).asinh(), root)
        }
    }
}

/// Solves `zeta_side(ζ) = lhs` for `ζ₂`.
fn solve_zeta(coarse: Coarse, alpha: f64, lhs: f64, a: f64) -> Result<f64, ActionError> {
    let (lo, hi) = match coarse {
        Coarse::U1 | Coarse::U2 => (alpha, alpha + (2.0 * lhs).sqrt() + 1e-12),
        Coarse::U3 => (0.0, (2.0 * lhs).sqrt() + 1e-12),
    };
    let ftol = 1e-14 * lhs.max(1.0);
    roots::newton_bracketed(
        |z| {
            let (v, dv) = zeta_side(coarse, alpha, z);
            (v - lhs, dv)
        },
        lo,
        hi,
        1e-15,
        ftol,
    )
    .map_err(|source| ActionError::NoRoot { a, source })
}

/// `ζ₂(a)` from the region's implicit relation.
pub fn zeta2(potential: &Potential, a: f64, thresholds: &Thresholds) -> Result<f64, ActionError> {
    Ok(well_geometry(potential, a, thresholds)?.zeta2)
}

/// Residual of the implicit `ζ₂` relation, for checking back-substitution.
pub fn zeta2_residual(geometry: &WellGeometry, lhs: f64) -> f64 {
    zeta_side(geometry.coarse, geometry.alpha_sq.sqrt(), geometry.zeta2).0 - lhs
}

/// The `x`-side integral of the `ζ₂` relation.
pub fn zeta2_lhs(potential: &Potential, a: f64, coarse: Coarse) -> Result<f64, ActionError> {
    let x2 = turning_point(potential, a)?;
    match coarse {
        Coarse::U1 => Ok(sqrt_right(|x| (a - potential.g(x)).max(0.0).sqrt(), x2)),
        Coarse::U2 | Coarse::U3 => Ok(0.5 * action_f(potential, a)?),
    }
}

pub fn well_geometry(potential: &Potential, a: f64, thresholds: &Thresholds) -> Result<WellGeometry, ActionError> {
    check_range(potential, a)?;
    let coarse = thresholds.coarse(potential, a);
    let x2 = turning_point(potential, a)?;
    let action = action_f(potential, a)?;
    if action <= 0.0 {
        return Err(ActionError::DegenerateAction { a });
    }
    let (alpha_sq, alpha2_sq, lhs) = match coarse {
        Coarse::U1 => {
            let forbidden = sqrt_right(|x| (a - potential.g(x)).max(0.0).sqrt(), x2);
            (FRAC_2_PI * action, 2.0 * FRAC_2_PI * forbidden, forbidden)
        }
        Coarse::U2 => {
            let well = 2.0 * sqrt_right(|x| (a - potential.g(x)).max(0.0).sqrt(), x2);
            (FRAC_2_PI * well, FRAC_2_PI * well, 0.5 * action)
        }
        Coarse::U3 => {
            let well = 2.0 * sqrt_right(|x| (potential.h(x) - a).max(0.0).sqrt(), x2);
            (FRAC_2_PI * well, FRAC_2_PI * well, 0.5 * action)
        }
    };
    let zeta2 = solve_zeta(coarse, alpha_sq.sqrt(), lhs, a)?;
    Ok(WellGeometry { a, coarse, x2, alpha_sq, alpha2_sq, action, zeta2 })
}

impl WellGeometry {
    /// `b`, `b₂`, `k(b)` and `Ψ` at spectral parameter `λ`.
    pub fn spectral(&self, lambda: f64) -> SpectralParameters {
        let half = 0.5 * lambda;
        let b = match self.coarse {
            Coarse::U2 => half * self.alpha_sq,
            Coarse::U1 | Coarse::U3 => -half * self.alpha_sq,
        };
        let b2 = match self.coarse {
            Coarse::U1 | Coarse::U2 => half * self.alpha2_sq,
            Coarse::U3 => b,
        };
        let psi = lambda * self.zeta2 * self.zeta2 - 2.0 * b * (self.zeta2 * (2.0 * lambda).sqrt()).ln()
            + specfun::arg_gamma(b);
        SpectralParameters { lambda, b, b2, k_of_b: specfun::k_of_b(b), psi }
    }

    /// Fine region at spectral parameter `λ`.
    pub fn fine_region(&self, potential: &Potential, lambda: f64, thresholds: &Thresholds) -> Fine {
        let params = self.spectral(lambda);
        let a2 = potential.a2();
        if self.coarse == Coarse::U1 {
            Fine::A1
        } else if self.a >= a2 {
            if self.a > a2 && params.b2 >= thresholds.c_a2_a3 * lambda.powf(2.0 / 9.0) {
                Fine::A2
            } else {
                Fine::A3
            }
        } else if params.b.abs() < thresholds.c_a4_a5 * lambda.cbrt() {
            Fine::A4
        } else {
            Fine::A5
        }
    }

    pub fn region(&self, potential: &Potential, lambda: f64, thresholds: &Thresholds) -> RegionTag {
        RegionTag { coarse: self.coarse, fine: Some(self.fine_region(potential, lambda, thresholds)) }
    }
}

pub fn spectral_params(potential: &Potential, a: f64, lambda: f64, thresholds: &Thresholds) -> Result<SpectralParameters, ActionError> {
    Ok(well_geometry(potential, a, thresholds)?.spectral(lambda))
}

pub fn classify_region(potential: &Potential, a: f64, lambda: f64, thresholds: &Thresholds) -> Result<RegionTag, ActionError> {
    Ok(well_geometry(potential, a, thresholds)?.region(potential, lambda, thresholds))
}
