//! `arg Γ(½ + ix)`, `ψ(½)`, and the interpolation functions `H±`.
//!
//! ```text
//! H±(x) = ±arctan e^{πx} − x + x ln|x| − arg Γ(½ + ix)
//! ```
//!
//! `H±` is always evaluated from this definition. The truncated expansions in
//! [`h_expansion`] exist only to cross-check it.

use std::f64::consts::{FRAC_PI_2, FRAC_PI_4, PI};

use thiserror::Error;

use crate::roots;

/// Euler–Mascheroni constant.
pub const EULER_GAMMA: f64 = 0.577_215_664_901_532_9;
/// `ζ(3)`.
pub const ZETA_3: f64 = 1.202_056_903_159_594_3;

/// `|x|` at which `arg_gamma` switches from the partial-fraction series to Stirling.
pub const SERIES_CROSSOVER: f64 = 4.0;
const SERIES_TERMS: usize = 200;
const STIRLING_MIN_MODULUS: f64 = 15.0;

/// `B₂ₙ` for n = 1..8.
const BERNOULLI: [f64; 8] = [
    1.0 / 6.0,
    -1.0 / 30.0,
    1.0 / 42.0,
    -1.0 / 30.0,
    5.0 / 66.0,
    -691.0 / 2730.0,
    7.0 / 6.0,
    -3617.0 / 510.0,
];

#[derive(Debug, Error, Clone, PartialEq)]
pub enum SpecfunError {
    #[error("{kind:?} expansion is not valid at x = {x} (needs |x| {window})")]
    Domain { x: f64, kind: ExpansionKind, window: &'static str },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Branch {
    Plus,
    Minus,
}

impl Branch {
    pub fn sign(self) -> f64 {
        match self {
            Branch::Plus => 1.0,
            Branch::Minus => -1.0,
        }
    }

    pub fn symbol(self) -> char {
        match self {
            Branch::Plus => '+',
            Branch::Minus => '-',
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ExpansionKind {
    Small,
    Large,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum HMethod {
    Direct,
    SmallXSeries,
    LargeXSeries,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HEvaluation {
    pub x: f64,
    pub h_plus: f64,
    pub h_minus: f64,
    pub method: HMethod,
}

impl HEvaluation {
    pub fn get(&self, branch: Branch) -> f64 {
        match branch {
            Branch::Plus => self.h_plus,
            Branch::Minus => self.h_minus,
        }
    }
}

#[derive(Clone, Copy)]
struct Complex {
    re: f64,
    im: f64,
}

impl Complex {
    fn mul(self, o: Complex) -> Complex {
        Complex { re: self.re * o.re - self.im * o.im, im: self.re * o.im + self.im * o.re }
    }

    fn recip(self) -> Complex {
        let d = self.re * self.re + self.im * self.im;
        Complex { re: self.re / d, im: -self.im / d }
    }
}

/// `ψ(½) = −γ − 2 ln 2 = −1.9635…`.
pub fn psi_half() -> f64 {
    -EULER_GAMMA - 2.0 * std::f64::consts::LN_2
}

/// `arg Γ(½ + ix)` on the continuous branch through `arg Γ(½) = 0`.
/// Odd in `x`; absolute error below `1e-13` for `|x| ≤ 10³`.
pub fn arg_gamma(x: f64) -> f64 {
    let ax = x.abs();
    let value = if ax <= SERIES_CROSSOVER { arg_gamma_series(ax) } else { arg_gamma_stirling(ax) };
    if x < 0.0 {
        -value
    } else {
        value
    }
}

/// `xψ(½) + Σₙ (2x/(2n+1) − arctan(2x/(2n+1)))`, summed to `SERIES_TERMS`
/// terms, with the tail by Euler–Maclaurin.
pub(crate) fn arg_gamma_series(x: f64) -> f64 {
    let c = 2.0 * x;
    let term = |s: f64| c / s - (c / s).atan();
    let head: f64 = (0..SERIES_TERMS).map(|n| term(2.0 * n as f64 + 1.0)).sum();
    // ∫_N^∞ term dt, with s = 2t + 1
    let s = 2.0 * SERIES_TERMS as f64 + 1.0;
    let integral = 0.5 * (-c + s * (c / s).atan() + 0.5 * c * (c / s).mul_add(c / s, 0.0).ln_1p());
    let derivative = -2.0 * c.powi(3) / (s * s * (s * s + c * c));
    let tail = integral + 0.5 * term(s) - derivative / 12.0;
    x * psi_half() + head + tail
}

/// `Im ln Γ(½ + ix)` through Stirling's series after shifting the argument
/// to modulus at least `STIRLING_MIN_MODULUS`.
pub(crate) fn arg_gamma_stirling(x: f64) -> f64 {
    let shift = if x >= STIRLING_MIN_MODULUS { 0 } else { (STIRLING_MIN_MODULUS - 0.5).ceil() as usize };
    let re = 0.5 + shift as f64;
    let z = Complex { re, im: x };
    let modulus = re.hypot(x);
    let theta = x.atan2(re);
    // Im[(z − ½) ln z − z]
    let mut value = (re - 0.5) * theta + x * modulus.ln() - x;
    let inv = z.recip();
    let inv2 = inv.mul(inv);
    let mut power = inv;
    for (n, b) in BERNOULLI.iter().enumerate() {
        let k = 2.0 * (n + 1) as f64;
        value += b / (k * (k - 1.0)) * power.im;
        power = power.mul(inv2);
    }
    let correction: f64 = (0..shift).map(|k| x.atan2(0.5 + k as f64)).sum();
    value - correction
}

/// `Re ψ(½ + ix)`, i.e. `d/dx arg Γ(½ + ix)`.
pub fn re_digamma_half_line(x: f64) -> f64 {
    let x = x.abs();
    let shift = if x >= STIRLING_MIN_MODULUS { 0 } else { (STIRLING_MIN_MODULUS - 0.5).ceil() as usize };
    let re = 0.5 + shift as f64;
    let w = Complex { re, im: x };
    let inv = w.recip();
    let inv2 = inv.mul(inv);
    let mut value = re.hypot(x).ln() - 0.5 * inv.re;
    let mut power = inv2;
    for (n, b) in BERNOULLI.iter().enumerate() {
        let k = 2.0 * (n + 1) as f64;
        value -= b / k * power.re;
        power = power.mul(inv2);
    }
    let correction: f64 = (0..shift)
        .map(|k| {
            let r = 0.5 + k as f64;
            r / (r * r + x * x)
        })
        .sum();
    value - correction
}

fn x_log_abs_x(x: f64) -> f64 {
    if x == 0.0 {
        0.0
    } else {
        x * x.abs().ln()
    }
}

/// `H±(x)` from the definition.
pub fn h_pm(x: f64) -> HEvaluation {
    h_pm_with(x, arg_gamma)
}

/// `H±(x)` with a caller-supplied `arg Γ(½ + ix)`; used for fault injection.
pub fn h_pm_with<G: Fn(f64) -> f64>(x: f64, arg_gamma: G) -> HEvaluation {
    let common = -x + x_log_abs_x(x) - arg_gamma(x);
    let arctan = (PI * x).exp().atan();
    HEvaluation { x, h_plus: arctan + common, h_minus: -arctan + common, method: HMethod::Direct }
}

pub fn h_branch(x: f64, branch: Branch) -> f64 {
    h_pm(x).get(branch)
}

/// `dH±/dx = ±π/(2 cosh πx) + ln|x| − Re ψ(½ + ix)`; singular at 0.
pub fn h_derivative(x: f64, branch: Branch) -> f64 {
    branch.sign() * PI / (2.0 * (PI * x).cosh()) + x.abs().ln() - re_digamma_half_line(x)
}

/// Coefficient of `x³` in the small-`x` series of `arg Γ(½ + ix)`: `(7/3) ζ(3)`.
pub fn a3_coefficient() -> f64 {
    7.0 / 3.0 * ZETA_3
}

/// Truncated expansions of `H±`: large `|x| ≥ 2` keeps `1/x` and `1/x³`,
/// small `|x| ≤ 0.2` keeps terms through `x³`.
pub fn h_expansion(x: f64, kind: ExpansionKind, branch: Branch) -> Result<f64, SpecfunError> {
    let s = branch.sign();
    match kind {
        ExpansionKind::Large => {
            if x.abs() < 2.0 {
                return Err(SpecfunError::Domain { x, kind, window: ">= 2" });
            }
            let inverse = -1.0 / (24.0 * x) - 7.0 / (2880.0 * x.powi(3));
            Ok(if x > 0.0 { s * FRAC_PI_2 + inverse } else { inverse })
        }
        ExpansionKind::Small => {
            if x.abs() > 0.2 {
                return Err(SpecfunError::Domain { x, kind, window: "<= 0.2" });
            }
            let linear = s * FRAC_PI_2 - 1.0 - psi_half();
            let cubic = -s * PI.powi(3) / 12.0 - a3_coefficient();
            Ok(s * FRAC_PI_4 + x_log_abs_x(x) + x * linear + x.powi(3) * cubic)
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HMinimum {
    pub x_star: f64,
    pub h_star: f64,
    /// Central-difference derivative at `x_star`.
    pub derivative: f64,
}

/// Minimum of `H±` on `x > 0`.
pub fn h_minimum(branch: Branch) -> HMinimum {
    let (lo, hi) = match branch {
        Branch::Plus => (1e-4, 0.3),
        Branch::Minus => (0.5, 5.0),
    };
    let (coarse, _) = roots::brent_minimize(|x| h_branch(x, branch), lo, hi, 1e-9, 200);
    // the parabolic minimizer stalls near √ε relative; finish on H' = 0
    let width = 1e-3 * coarse;
    let x_star = roots::bisect(|x| h_derivative(x, branch), coarse - width, coarse + width, 1e-16, 200)
        .unwrap_or(coarse);
    HMinimum { x_star, h_star: h_branch(x_star, branch), derivative: central_derivative(|x| h_branch(x, branch), x_star) }
}

/// Five-point central difference with a step scaled to `x`.
pub fn central_derivative<F: Fn(f64) -> f64>(f: F, x: f64) -> f64 {
    let h = 1e-3 * x.abs().max(1e-2);
    (-f(x + 2.0 * h) + 8.0 * f(x + h) - 8.0 * f(x - h) + f(x - 2.0 * h)) / (12.0 * h)
}

/// Connection coefficient `k(b) = √(1 + e^{2πb}) − e^{πb}`, evaluated without
/// cancellation or overflow.
pub fn k_of_b(b: f64) -> f64 {
    if b > 0.0 {
        let t = (-PI * b).exp();
        t / ((1.0 + t * t).sqrt() + 1.0)
    } else {
        let t = (PI * b).exp();
        1.0 / ((1.0 + t * t).sqrt() + t)
    }
}

/// `arctan e^{πb}` without overflow for large `b`.
pub fn arctan_exp_pi(b: f64) -> f64 {
    if b > 0.0 {
        FRAC_PI_2 - (-PI * b).exp().atan()
    } else {
        (PI * b).exp().atan()
    }
}
