//! Double-double shooting on `(0, π)` for cosine-series potentials.
//!
//! At `a < a₂` the Dirichlet and Neumann eigenvalues of one cell differ by an
//! amount that decays exponentially in `p` and drops below the resolution of
//! `f64` around `p = 40`. This integrator resolves it: on a uniform grid
//! `x_k = kπ/M` the solution is advanced by its Taylor series, whose
//! coefficients follow from the exact Taylor coefficients of `g` at `x_k`,
//! all in double-double arithmetic (about 32 significant digits). Eigenvalues
//! from the `f64` oracle are then polished by a secant iteration.

use std::f64::consts::PI;

use thiserror::Error;
use twofloat::TwoFloat;

use super::Symmetry;
use crate::potential::PotentialSpec;

type Dd = TwoFloat;

fn dd(x: f64) -> Dd {
    TwoFloat::from_f64(x)
}

/// Target size of `λ√max|g − a|·h` and `n_max·h`; the Taylor terms then decay
/// at least like `2^{−k}/k!`.
const STEP_SCALE: f64 = 0.5;
const MAX_ORDER: usize = 64;
const SERIES_EPS: f64 = 1e-34;
const OVERFLOW: f64 = 1e250;

/// Finite and below the overflow guard; `false` for NaN.
fn bounded(v: f64) -> bool {
    v.abs() < OVERFLOW
}

#[derive(Debug, Error, Clone, PartialEq)]
pub enum ExtendedError {
    #[error("λ = {lambda} exceeds the grid limit {max}")]
    LambdaTooLarge { lambda: f64, max: f64 },
    #[error("solution overflowed at λ = {0}")]
    Overflow(f64),
    #[error("secant iteration from λ = {start} did not converge")]
    NoConvergence { start: f64 },
}

/// `a / b` by two correction steps. The crate's own double-double quotient
/// loses the low word (its reciprocal residual is formed without an fma).
pub fn div(a: Dd, b: Dd) -> Dd {
    let q1 = a.hi() / b.hi();
    let r = a - b * q1;
    let q2 = r.hi() / b.hi();
    let r = r - b * q2;
    let q3 = r.hi() / b.hi();
    TwoFloat::new_add(q1, q2) + q3
}

/// Sine and cosine of `x` in double-double, `|x| ≤ 2π`.
pub fn sin_cos(x: Dd) -> (Dd, Dd) {
    let half_pi = twofloat::consts::FRAC_PI_2;
    let q = (x / half_pi).hi().round();
    let t = x - half_pi * q;
    let t2 = t * t;
    let (mut s, mut c) = (t, dd(1.0));
    let (mut ts, mut tc) = (t, dd(1.0));
    let mut k = 1.0;
    while ts.hi().abs() > 1e-36 || tc.hi().abs() > 1e-36 {
        tc = -tc * t2 / (k * (k + 1.0));
        ts = -ts * t2 / ((k + 1.0) * (k + 2.0));
        c += tc;
        s += ts;
        k += 2.0;
    }
    match (q as i64).rem_euclid(4) {
        0 => (s, c),
        1 => (c, -s),
        2 => (-s, -c),
        _ => (-c, s),
    }
}

/// Taylor integrator state for one `(g, a)` and `λ ≤ lambda_max`.
#[derive(Debug, Clone)]
pub struct ExtendedShooter {
    a: f64,
    lambda_max: f64,
    steps: usize,
    /// `h²·w_j·h^j` per grid point, `w₀ = g(x_k) − a`, `w_j = g^{(j)}(x_k)/j!`.
    weights: Vec<Vec<Dd>>,
}

impl ExtendedShooter {
    pub fn new(spec: &PotentialSpec, a: f64, lambda_max: f64) -> Self {
        let c = spec.coefficients();
        let n_max = (c.len() - 1).max(1) as f64;
        let bound: f64 = (c.iter().map(|x| x.abs()).sum::<f64>() + a.abs()).sqrt();
        let rate = (lambda_max * bound).max(n_max);
        let steps = ((PI * rate / STEP_SCALE).ceil() as usize).max(16);
        let h = twofloat::consts::PI / steps as f64;
        let h2 = h * h;

        // cos and sin of mπ/M for m in 0..2M
        let table: Vec<(Dd, Dd)> = (0..2 * steps)
            .map(|m| {
                let theta = twofloat::consts::PI * (m as f64) / steps as f64;
                let theta = if m > steps { theta - twofloat::consts::PI * 2.0 } else { theta };
                sin_cos(theta)
            })
            .collect();

        let weights = (0..steps)
            .map(|k| {
                let mut w = vec![dd(0.0); MAX_ORDER];
                for (n, &cn) in c.iter().enumerate() {
                    if cn == 0.0 {
                        continue;
                    }
                    let (s, co) = table[(n * k) % (2 * steps)];
                    // d^j/dx^j cos(nx) = n^j cos(nx + jπ/2)
                    let mut factor = dd(cn);
                    for (j, wj) in w.iter_mut().enumerate() {
                        let phase = match j % 4 {
                            0 => co,
                            1 => -s,
                            2 => -co,
                            _ => s,
                        };
                        *wj += factor * phase;
                        factor = factor * (n as f64) * h / (j + 1) as f64;
                        if n == 0 {
                            break;
                        }
                    }
                }
                w[0] -= a;
                w.iter().map(|&x| x * h2).collect()
            })
            .collect();
        ExtendedShooter { a, lambda_max, steps, weights }
    }

    pub fn a(&self) -> f64 {
        self.a
    }

    pub fn steps(&self) -> usize {
        self.steps
    }

    /// `(u(π), u′(π))` of the solution with symmetric initial data at `0`.
    pub fn shoot(&self, lambda: Dd, symmetry: Symmetry) -> Result<(Dd, Dd), ExtendedError> {
        if lambda.hi() > self.lambda_max {
            return Err(ExtendedError::LambdaTooLarge { lambda: lambda.hi(), max: self.lambda_max });
        }
        let h = twofloat::consts::PI / self.steps as f64;
        let l2 = lambda * lambda;
        // v holds u_j h^j; u′h is Σ j v_j
        let (mut u, mut du_h) = match symmetry {
            Symmetry::Dirichlet => (dd(0.0), h),
            Symmetry::Neumann => (dd(1.0), dd(0.0)),
        };
        let mut v = [dd(0.0); MAX_ORDER + 2];
        for w in &self.weights {
            v[0] = u;
            v[1] = du_h;
            let scale = u.hi().abs() + du_h.hi().abs();
            let mut order = MAX_ORDER;
            for i in 0..MAX_ORDER {
                let mut acc = dd(0.0);
                for j in 0..=i {
                    acc += w[j] * v[i - j];
                }
                v[i + 2] = -l2 * acc / ((i + 2) * (i + 1)) as f64;
                if i > 6 && (v[i + 2].hi().abs() + v[i + 1].hi().abs()) < SERIES_EPS * scale {
                    order = i + 2;
                    break;
                }
            }
            u = dd(0.0);
            du_h = dd(0.0);
            for (j, vj) in v.iter().enumerate().take(order + 1) {
                u += *vj;
                du_h += *vj * j as f64;
            }
            if !bounded(u.hi()) || !bounded(du_h.hi()) {
                return Err(ExtendedError::Overflow(lambda.hi()));
            }
        }
        Ok((u, div(du_h, h)))
    }

    /// Shooting function whose zeros are the eigenvalues of `symmetry`.
    pub fn residual(&self, lambda: Dd, symmetry: Symmetry) -> Result<Dd, ExtendedError> {
        let (u, du) = self.shoot(lambda, symmetry)?;
        Ok(match symmetry {
            Symmetry::Dirichlet => u,
            Symmetry::Neumann => div(du, lambda),
        })
    }

    /// Polishes an eigenvalue estimate to double-double accuracy.
    pub fn refine(&self, symmetry: Symmetry, start: f64) -> Result<Dd, ExtendedError> {
        let mut x0 = dd(start);
        let mut x1 = dd(start * (1.0 + 1e-9));
        let mut f0 = self.residual(x0, symmetry)?;
        let mut f1 = self.residual(x1, symmetry)?;
        for _ in 0..40 {
            if f1.hi() == 0.0 {
                return Ok(x1);
            }
            let denom = f1 - f0;
            if denom.hi() == 0.0 {
                break;
            }
            let x2 = x1 - div(f1 * (x1 - x0), denom);
            let step = (x2 - x1).hi().abs();
            x0 = x1;
            f0 = f1;
            x1 = x2;
            if step <= 1e-30 * start.abs() {
                return Ok(x1);
            }
            f1 = self.residual(x1, symmetry)?;
        }
        Err(ExtendedError::NoConvergence { start })
    }
}

/// Dirichlet and Neumann eigenvalues of one cell refined together.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Splitting {
    pub dirichlet: (f64, f64),
    pub neumann: (f64, f64),
    /// `λ_N − λ_D`
    pub gap: f64,
}

pub fn splitting(shooter: &ExtendedShooter, dirichlet: f64, neumann: f64) -> Result<Splitting, ExtendedError> {
    let d = shooter.refine(Symmetry::Dirichlet, dirichlet)?;
    let n = shooter.refine(Symmetry::Neumann, neumann)?;
    Ok(Splitting { dirichlet: (d.hi(), d.lo()), neumann: (n.hi(), n.lo()), gap: (n - d).hi() })
}
