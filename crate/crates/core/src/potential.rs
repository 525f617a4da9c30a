//! Even 2π-periodic potentials given as finite cosine series.
//!
//! A [`PotentialSpec`] is the raw series `g(x) = Σ cₙ cos nx`. Any series can
//! be evaluated; only one that passes [`validate_class_g`] becomes a
//! [`Potential`], the object the rest of the crate works with. A `Potential`
//! always has its minimum at `x = 0` and its maximum at `x = π`; a series with
//! the opposite orientation is reflected (`cₙ ↦ (−1)ⁿ cₙ`) on construction.

use std::f64::consts::PI;
use std::fmt;

use thiserror::Error;

use crate::roots;

/// Largest `n·|x|` for which `cosh(n x)` is evaluated.
const COSH_ARGUMENT_LIMIT: f64 = 700.0;

/// Minimal distance between the root `x₀` of `h` and `π`.
pub const X0_MARGIN: f64 = 0.1;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum PotentialError {
    #[error("coefficient c{index} is not finite ({value})")]
    NonFiniteCoefficient { index: usize, value: f64 },
    #[error("series has no coefficients")]
    Empty,
    #[error("derivative order {0} exceeds 6")]
    DerivativeOrder(u32),
    #[error("cosh overflow: n·|x| = {0} exceeds {COSH_ARGUMENT_LIMIT}")]
    ContinuationOverflow(f64),
    #[error("potential is not in class G: {0}")]
    NotClassG(String),
    #[error("config: {0}")]
    Config(String),
}

/// Raw cosine-series potential `g(x) = Σ cₙ cos nx` on the period `[-π, π)`.
#[derive(Debug, Clone, PartialEq)]
pub struct PotentialSpec {
    pub name: Option<String>,
    coefficients: Vec<f64>,
}

impl PotentialSpec {
    pub fn new(coefficients: Vec<f64>) -> Result<Self, PotentialError> {
        if coefficients.is_empty() {
            return Err(PotentialError::Empty);
        }
        if let Some((index, &value)) = coefficients.iter().enumerate().find(|(_, c)| !c.is_finite()) {
            return Err(PotentialError::NonFiniteCoefficient { index, value });
        }
        Ok(Self { name: None, coefficients })
    }

    pub fn with_name(mut self, name: impl Into<String>) -> Self {
        self.name = Some(name.into());
        self
    }

    /// The project-wide test potential `g(x) = 2 − cos x` (`a₂ = 1`, `a₁ = 3`).
    pub fn canonical() -> Self {
        Self { name: Some("canonical".into()), coefficients: vec![2.0, -1.0] }
    }

    pub fn coefficients(&self) -> &[f64] {
        &self.coefficients
    }

    pub fn degree(&self) -> usize {
        self.coefficients.len() - 1
    }

    /// `d^k g / dx^k` at `x` by termwise differentiation, `k ≤ 6`.
    pub fn eval_g(&self, x: f64, derivative_order: u32) -> Result<f64, PotentialError> {
        if derivative_order > 6 {
            return Err(PotentialError::DerivativeOrder(derivative_order));
        }
        Ok(self.g_derivative(x, derivative_order))
    }

    /// `g(x)`; the hot path used by the quadratures and the ODE right-hand side.
    #[inline]
    pub fn g(&self, x: f64) -> f64 {
        match self.coefficients.as_slice() {
            [c0] => *c0,
            [c0, c1] => c0 + c1 * x.cos(),
            coefficients => {
                // cos(nx) by the Chebyshev recurrence
                let c = x.cos();
                let (mut prev, mut cur) = (1.0, c);
                let mut sum = coefficients[0] + coefficients[1] * c;
                for &cn in &coefficients[2..] {
                    let next = 2.0 * c * cur - prev;
                    prev = cur;
                    cur = next;
                    sum += cn * cur;
                }
                sum
            }
        }
    }

    fn g_derivative(&self, x: f64, k: u32) -> f64 {
        if k == 0 {
            return self.g(x);
        }
        let shift = f64::from(k) * PI / 2.0;
        self.coefficients
            .iter()
            .enumerate()
            .skip(1)
            .map(|(n, &cn)| {
                let n = n as f64;
                cn * n.powi(k as i32) * (n * x + shift).cos()
            })
            .sum()
    }

    /// Continuation `h(x) = g(ix) = Σ cₙ cosh nx`, `|x| ≤ π`.
    pub fn eval_h(&self, x: f64) -> Result<f64, PotentialError> {
        let reach = self.degree() as f64 * x.abs();
        if reach > COSH_ARGUMENT_LIMIT {
            return Err(PotentialError::ContinuationOverflow(reach));
        }
        Ok(self.h(x))
    }

    pub(crate) fn h(&self, x: f64) -> f64 {
        self.coefficients
            .iter()
            .enumerate()
            .map(|(n, &cn)| cn * (n as f64 * x).cosh())
            .sum()
    }

    pub(crate) fn h_prime(&self, x: f64) -> f64 {
        self.coefficients
            .iter()
            .enumerate()
            .skip(1)
            .map(|(n, &cn)| {
                let n = n as f64;
                cn * n * (n * x).sinh()
            })
            .sum()
    }

    /// Reflection `x ↦ x − π`, i.e. `cₙ ↦ (−1)ⁿ cₙ`.
    pub fn reflected(&self) -> Self {
        let coefficients = self
            .coefficients
            .iter()
            .enumerate()
            .map(|(n, &c)| if n % 2 == 1 { -c } else { c })
            .collect();
        Self { name: self.name.clone(), coefficients }
    }

    /// Parses the plain-text potential config: TOML keys `c0`, `c1`, … and an
    /// optional `name`. Any other key is rejected.
    pub fn from_config_str(text: &str) -> Result<Self, PotentialError> {
        let table: toml::Table =
            text.parse().map_err(|e: toml::de::Error| PotentialError::Config(e.to_string()))?;
        Self::from_table(&table)
    }

    pub(crate) fn from_table(table: &toml::Table) -> Result<Self, PotentialError> {
        let mut name = None;
        let mut indexed = Vec::new();
        for (key, value) in table {
            if key == "name" {
                let s = value
                    .as_str()
                    .ok_or_else(|| PotentialError::Config("`name` must be a string".into()))?;
                name = Some(s.to_owned());
                continue;
            }
            let index = key
                .strip_prefix('c')
                .filter(|digits| !digits.is_empty() && digits.bytes().all(|b| b.is_ascii_digit()))
                .and_then(|digits| digits.parse::<usize>().ok())
                .ok_or_else(|| PotentialError::Config(format!("unknown key `{key}`")))?;
            let number = match value {
                toml::Value::Float(f) => *f,
                toml::Value::Integer(i) => *i as f64,
                _ => return Err(PotentialError::Config(format!("`{key}` must be a number"))),
            };
            indexed.push((index, number));
        }
        let len = indexed.iter().map(|(i, _)| i + 1).max().ok_or(PotentialError::Empty)?;
        let mut coefficients = vec![0.0; len];
        for (i, c) in indexed {
            coefficients[i] = c;
        }
        let mut spec = Self::new(coefficients)?;
        spec.name = name;
        Ok(spec)
    }

    pub fn to_config_string(&self) -> String {
        let mut out = String::new();
        if let Some(name) = &self.name {
            out.push_str(&format!("name = {name:?}\n"));
        }
        for (n, c) in self.coefficients.iter().enumerate() {
            out.push_str(&format!("c{n} = {c:?}\n"));
        }
        out
    }
}

/// One class-G condition verdict with the sample points that violated it.
#[derive(Debug, Clone, PartialEq)]
pub struct ConditionVerdict {
    pub passed: bool,
    pub note: String,
    pub witnesses: Vec<f64>,
}

impl ConditionVerdict {
    fn pass(note: impl Into<String>) -> Self {
        Self { passed: true, note: note.into(), witnesses: Vec::new() }
    }

    fn fail(note: impl Into<String>, witnesses: Vec<f64>) -> Self {
        Self { passed: false, note: note.into(), witnesses }
    }
}

/// Outcome of checking conditions (1)–(4) of the admissible class on a grid.
#[derive(Debug, Clone, PartialEq)]
pub struct ClassGReport {
    pub smoothness: ConditionVerdict,
    pub extrema: ConditionVerdict,
    pub evenness: ConditionVerdict,
    pub continuation: ConditionVerdict,
    /// The series had its minimum at `π` and was reflected before checking.
    pub reindexed: bool,
    /// Series as checked (after reflection, if any).
    pub normalized: PotentialSpec,
    pub a1: f64,
    pub a2: f64,
    /// Root of `h` on `(0, π)`, if one was found.
    pub x0: Option<f64>,
    /// Advisory Fourier-coefficient test; never part of [`ClassGReport::passed`].
    pub coefficient_advisory: bool,
}

impl ClassGReport {
    pub fn passed(&self) -> bool {
        self.smoothness.passed && self.extrema.passed && self.evenness.passed && self.continuation.passed
    }

    pub fn conditions(&self) -> [(&'static str, &ConditionVerdict); 4] {
        [
            ("smoothness", &self.smoothness),
            ("extrema", &self.extrema),
            ("evenness", &self.evenness),
            ("continuation", &self.continuation),
        ]
    }
}

impl fmt::Display for ClassGReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (label, verdict) in self.conditions() {
            let mark = if verdict.passed { "pass" } else { "FAIL" };
            write!(f, "{label}: {mark} ({})", verdict.note)?;
            if !verdict.witnesses.is_empty() {
                let shown: Vec<String> = verdict.witnesses.iter().take(5).map(|w| format!("{w:.6}")).collect();
                write!(f, " at x = [{}]", shown.join(", "))?;
            }
            writeln!(f)?;
        }
        if self.reindexed {
            writeln!(f, "note: minimum found at x = π; series reflected so that x_min = 0")?;
        }
        write!(f, "a2 = {:.12}, a1 = {:.12}, overall: {}", self.a2, self.a1, if self.passed() { "pass" } else { "FAIL" })
    }
}

/// Checks conditions (1)–(4) numerically on a uniform grid of `grid_size`
/// points per half period (at least 256).
pub fn validate_class_g(spec: &PotentialSpec, grid_size: usize) -> ClassGReport {
    let grid_size = grid_size.max(256);
    let reindexed = spec.g_derivative(0.0, 2) < 0.0 && spec.g_derivative(PI, 2) > 0.0;
    let g = if reindexed { spec.reflected() } else { spec.clone() };
    let step = PI / grid_size as f64;
    let grid: Vec<f64> = (0..=grid_size).map(|i| i as f64 * step).collect();

    let smoothness = {
        let bounds: Vec<f64> = (0..=6)
            .map(|k| grid.iter().map(|&x| g.g_derivative(x, k).abs()).fold(0.0, f64::max))
            .collect();
        if bounds.iter().all(|b| b.is_finite()) {
            ConditionVerdict::pass(format!("max |g^(6)| = {:.3e}", bounds[6]))
        } else {
            ConditionVerdict::fail("non-finite derivative samples", Vec::new())
        }
    };

    let a2 = g.g(0.0);
    let a1 = g.g(PI);
    let extrema = {
        let interior = &grid[1..grid_size];
        let slope_witnesses: Vec<f64> =
            interior.iter().copied().filter(|&x| g.g_derivative(x, 1) <= 0.0).collect();
        let curvature_min = g.g_derivative(0.0, 2);
        let curvature_max = g.g_derivative(PI, 2);
        let mut witnesses = slope_witnesses;
        let mut problems = Vec::new();
        if !witnesses.is_empty() {
            problems.push("g' vanishes or changes sign inside (0, π)".to_owned());
        }
        if curvature_min <= 0.0 {
            problems.push(format!("g''(0) = {curvature_min:.3e} not positive"));
            witnesses.push(0.0);
        }
        if curvature_max >= 0.0 {
            problems.push(format!("g''(π) = {curvature_max:.3e} not negative"));
            witnesses.push(PI);
        }
        if a2 <= 0.0 {
            problems.push(format!("a2 = {a2:.3e} not positive"));
        }
        if problems.is_empty() {
            ConditionVerdict::pass(format!("simple min at 0 (g'' = {curvature_min:.3e}), simple max at π (g'' = {curvature_max:.3e})"))
        } else {
            ConditionVerdict::fail(problems.join("; "), witnesses)
        }
    };

    let evenness = {
        let witnesses: Vec<f64> = grid
            .iter()
            .copied()
            .filter(|&x| {
                (g.g(x) - g.g(-x)).abs() > 1e-12 * a1.abs().max(1.0)
                    || (g.g(PI + x) - g.g(PI - x)).abs() > 1e-12 * a1.abs().max(1.0)
            })
            .collect();
        if witnesses.is_empty() {
            ConditionVerdict::pass("g(x) and g(x - π) even")
        } else {
            ConditionVerdict::fail("asymmetric samples", witnesses)
        }
    };

    let (continuation, x0) = check_continuation(&g, a2, &grid);

    ClassGReport {
        smoothness,
        extrema,
        evenness,
        continuation,
        reindexed,
        coefficient_advisory: coefficient_advisory(&g),
        normalized: g,
        a1,
        a2,
        x0,
    }
}

fn check_continuation(g: &PotentialSpec, a2: f64, grid: &[f64]) -> (ConditionVerdict, Option<f64>) {
    if g.degree() as f64 * PI > COSH_ARGUMENT_LIMIT {
        return (ConditionVerdict::fail("h overflows on [0, π]", Vec::new()), None);
    }
    if (g.h(0.0) - a2).abs() > 1e-12 * a2.abs().max(1.0) {
        return (ConditionVerdict::fail("h(0) != a2", vec![0.0]), None);
    }
    // first sign change of h on the grid, then bisection
    let bracket = grid.windows(2).find(|w| g.h(w[0]) > 0.0 && g.h(w[1]) <= 0.0);
    let Some(&[lo, hi]) = bracket else {
        return (ConditionVerdict::fail("h has no root on (0, π]", Vec::new()), None);
    };
    let x0 = roots::bisect(|x| g.h(x), lo, hi, 1e-15, 200).unwrap_or(0.5 * (lo + hi));
    let mut problems = Vec::new();
    let mut witnesses: Vec<f64> = grid
        .iter()
        .copied()
        .filter(|&x| x > 0.0 && x <= x0 && g.h_prime(x) >= 0.0)
        .collect();
    if !witnesses.is_empty() {
        problems.push("h not strictly decreasing on (0, x0]".to_owned());
    }
    if x0 > PI - X0_MARGIN {
        problems.push(format!("x0 = {x0:.6} closer than {X0_MARGIN} to π"));
        witnesses.push(x0);
    }
    if problems.is_empty() {
        (ConditionVerdict::pass(format!("h decreasing to root x0 = {x0:.12}")), Some(x0))
    } else {
        (ConditionVerdict::fail(problems.join("; "), witnesses), Some(x0))
    }
}

/// The published sufficient conditions on the Fourier coefficients. Some
/// admissible series (`2 − cos x`) fail them, so this is reported only.
fn coefficient_advisory(g: &PotentialSpec) -> bool {
    let c = g.coefficients();
    let tail = || c.iter().enumerate().skip(1);
    let signs = tail().all(|(_, &cn)| cn <= 0.0);
    let c1 = c.get(1).copied().unwrap_or(0.0).abs();
    let weighted: f64 = tail().skip(1).map(|(n, &cn)| n as f64 * cn.abs()).sum();
    let abs_sum: f64 = tail().map(|(_, &cn)| cn.abs()).sum();
    let cosh_sum: f64 = tail().map(|(n, &cn)| cn.abs() * (PI * n as f64).cosh()).sum();
    signs && c1 <= PI / 2.0 * weighted && abs_sum < c[0] && c[0] < cosh_sum
}

/// A validated potential: minimum `a₂ = g(0)`, maximum `a₁ = g(π)`, and the
/// root `x₀` of the continuation `h`. Immutable and `Sync`.
#[derive(Debug, Clone, PartialEq)]
pub struct Potential {
    spec: PotentialSpec,
    a1: f64,
    a2: f64,
    x0: f64,
    reindexed: bool,
}

pub const DEFAULT_GRID: usize = 1024;

impl Potential {
    pub fn new(spec: &PotentialSpec) -> Result<Self, PotentialError> {
        let report = validate_class_g(spec, DEFAULT_GRID);
        Self::from_report(report)
    }

    pub fn from_report(report: ClassGReport) -> Result<Self, PotentialError> {
        if !report.passed() {
            return Err(PotentialError::NotClassG(report.to_string()));
        }
        Ok(Self {
            a1: report.a1,
            a2: report.a2,
            x0: report.x0.expect("continuation verdict passed"),
            reindexed: report.reindexed,
            spec: report.normalized,
        })
    }

    pub fn canonical() -> Self {
        Self::new(&PotentialSpec::canonical()).expect("2 - cos x is admissible")
    }

    pub fn spec(&self) -> &PotentialSpec {
        &self.spec
    }

    /// Maximum value `g(π)`.
    pub fn a1(&self) -> f64 {
        self.a1
    }

    /// Minimum value `g(0)`.
    pub fn a2(&self) -> f64 {
        self.a2
    }

    /// Root of `h` on `(0, π − 0.1]`.
    pub fn x0(&self) -> f64 {
        self.x0
    }

    pub fn reindexed(&self) -> bool {
        self.reindexed
    }

    #[inline]
    pub fn g(&self, x: f64) -> f64 {
        self.spec.g(x)
    }

    pub fn g_prime(&self, x: f64) -> f64 {
        self.spec.g_derivative(x, 1)
    }

    pub fn h(&self, x: f64) -> f64 {
        self.spec.h(x)
    }

    pub fn h_prime(&self, x: f64) -> f64 {
        self.spec.h_prime(x)
    }
}
