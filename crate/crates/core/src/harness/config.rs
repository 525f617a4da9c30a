//! Run configuration, read from TOML.
//!
//! ```toml
//! [potential]
//! name = "canonical"
//! c0 = 2.0
//! c1 = -1.0
//!
//! [grid]
//! a = [0.5, 2.0]          # or a_min / a_max / a_step
//! p_min = 10
//! p_max = 40
//!
//! [calibration]
//! indefinite = 0.065
//! definite = 0.005
//! ```
//!
//! `[thresholds]`, `[oracle]` and `[output]` are optional. Unknown keys are
//! rejected everywhere.

use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::actions::Thresholds;
use crate::asymptotics::{Refinement, RemainderConstants, ORDER_COLLAR};
use crate::oracle::OracleConfig;
use crate::potential::{Potential, PotentialError, PotentialSpec};

#[derive(Debug, Error)]
pub enum ConfigError {
    #[error("cannot read {path}: {source}")]
    Io { path: PathBuf, source: std::io::Error },
    #[error("config is empty")]
    Empty,
    #[error("config: {0}")]
    Parse(#[from] toml::de::Error),
    #[error("config: {0}")]
    Potential(#[from] PotentialError),
    #[error("config: `{key}` = {value} is not finite")]
    NonFinite { key: &'static str, value: f64 },
    #[error("config: {0}")]
    Invalid(String),
}

/// Values fixed by the calibration run on `2 − cos x`, `a ∈ {0.5, 0.7, 1, 1.3, 2}`,
/// `p = 10, 15, …, 60`: twice the largest observed ratio of the oracle
/// residual to the unit-constant bound, rounded up.
pub const CALIBRATED: RemainderConstants = RemainderConstants { indefinite: 0.065, definite: 0.005 };
pub const CALIBRATION_PROVENANCE: &str =
    "2 - cos x, a in {0.5, 0.7, 1.0, 1.3, 2.0}, p = 10..60 step 5, both signs: 2 x max ratio, rounded up";

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GridSection {
    #[serde(default)]
    pub a: Vec<f64>,
    pub a_min: Option<f64>,
    pub a_max: Option<f64>,
    pub a_step: Option<f64>,
    pub p_min: u32,
    pub p_max: u32,
    #[serde(default)]
    pub refinement: Refinement,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct ThresholdSection {
    pub a0: Option<f64>,
    pub a0_margin: f64,
    pub c_a2_a3: f64,
    pub c_a4_a5: f64,
    /// `C` of the ordering collar `|a − a₂| < C/λ`.
    pub collar: f64,
    pub lambda_max: f64,
}

impl Default for ThresholdSection {
    fn default() -> Self {
        let t = Thresholds::default();
        ThresholdSection {
            a0: t.a0,
            a0_margin: t.a0_margin,
            c_a2_a3: t.c_a2_a3,
            c_a4_a5: t.c_a4_a5,
            collar: ORDER_COLLAR,
            lambda_max: OracleConfig::default().lambda_max,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct OracleSection {
    pub tol: f64,
    pub oscillation_cap: f64,
    pub forbidden_cap: f64,
    pub h_max: f64,
    pub bracket_rel: f64,
    pub max_steps: usize,
}

impl Default for OracleSection {
    fn default() -> Self {
        let c = OracleConfig::default();
        OracleSection {
            tol: c.tol,
            oscillation_cap: c.oscillation_cap,
            forbidden_cap: c.forbidden_cap,
            h_max: c.h_max,
            bracket_rel: c.bracket_rel,
            max_steps: c.max_steps,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct CalibrationSection {
    pub indefinite: f64,
    pub definite: f64,
    pub provenance: String,
}

impl Default for CalibrationSection {
    fn default() -> Self {
        CalibrationSection {
            indefinite: CALIBRATED.indefinite,
            definite: CALIBRATED.definite,
            provenance: CALIBRATION_PROVENANCE.into(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct OutputSection {
    pub path: Option<PathBuf>,
}

#[derive(Debug, Clone, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawConfig {
    potential: toml::Table,
    grid: Option<GridSection>,
    #[serde(default)]
    thresholds: ThresholdSection,
    #[serde(default)]
    oracle: OracleSection,
    #[serde(default)]
    calibration: CalibrationSection,
    #[serde(default)]
    output: OutputSection,
}

#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub potential: PotentialSpec,
    pub grid: Option<GridSection>,
    pub thresholds: ThresholdSection,
    pub oracle: OracleSection,
    pub calibration: CalibrationSection,
    pub output: OutputSection,
}

impl RunConfig {
    /// Canonical potential with default sections and the given grid.
    pub fn canonical(a: Vec<f64>, p_min: u32, p_max: u32) -> Self {
        RunConfig {
            potential: PotentialSpec::canonical(),
            grid: Some(GridSection { a, a_min: None, a_max: None, a_step: None, p_min, p_max, refinement: Refinement::None }),
            thresholds: ThresholdSection::default(),
            oracle: OracleSection::default(),
            calibration: CalibrationSection::default(),
            output: OutputSection::default(),
        }
    }

    pub fn from_toml(text: &str) -> Result<Self, ConfigError> {
        if text.trim().is_empty() {
            return Err(ConfigError::Empty);
        }
        let raw: RawConfig = toml::from_str(text)?;
        let potential = PotentialSpec::from_table(&raw.potential)?;
        let config = RunConfig {
            potential,
            grid: raw.grid,
            thresholds: raw.thresholds,
            oracle: raw.oracle,
            calibration: raw.calibration,
            output: raw.output,
        };
        config.check()?;
        Ok(config)
    }

    pub fn load(path: &Path) -> Result<Self, ConfigError> {
        let text = std::fs::read_to_string(path).map_err(|source| ConfigError::Io { path: path.into(), source })?;
        Self::from_toml(&text)
    }

    fn check(&self) -> Result<(), ConfigError> {
        let t = &self.thresholds;
        let o = &self.oracle;
        let c = &self.calibration;
        let mut values: Vec<(&'static str, f64)> = vec![
            ("thresholds.a0_margin", t.a0_margin),
            ("thresholds.c_a2_a3", t.c_a2_a3),
            ("thresholds.c_a4_a5", t.c_a4_a5),
            ("thresholds.collar", t.collar),
            ("thresholds.lambda_max", t.lambda_max),
            ("oracle.tol", o.tol),
            ("oracle.oscillation_cap", o.oscillation_cap),
            ("oracle.forbidden_cap", o.forbidden_cap),
            ("oracle.h_max", o.h_max),
            ("oracle.bracket_rel", o.bracket_rel),
            ("calibration.indefinite", c.indefinite),
            ("calibration.definite", c.definite),
        ];
        if let Some(a0) = t.a0 {
            values.push(("thresholds.a0", a0));
        }
        if let Some(g) = &self.grid {
            values.extend(g.a.iter().map(|&v| ("grid.a", v)));
            for (key, v) in [("grid.a_min", g.a_min), ("grid.a_max", g.a_max), ("grid.a_step", g.a_step)] {
                if let Some(v) = v {
                    values.push((key, v));
                }
            }
        }
        if let Some(&(key, value)) = values.iter().find(|(_, v)| !v.is_finite()) {
            return Err(ConfigError::NonFinite { key, value });
        }
        if let Some(g) = &self.grid {
            if g.p_min > g.p_max {
                return Err(ConfigError::Invalid(format!("grid.p_min = {} exceeds grid.p_max = {}", g.p_min, g.p_max)));
            }
            if g.a.is_empty() && (g.a_min.is_none() || g.a_max.is_none() || g.a_step.is_none()) {
                return Err(ConfigError::Invalid("grid needs `a` or all of `a_min`, `a_max`, `a_step`".into()));
            }
            if matches!(g.a_step, Some(s) if s <= 0.0) {
                return Err(ConfigError::Invalid("grid.a_step must be positive".into()));
            }
        }
        Ok(())
    }

    pub fn validated_potential(&self) -> Result<Potential, ConfigError> {
        Ok(Potential::new(&self.potential)?)
    }

    pub fn grid(&self) -> Result<&GridSection, ConfigError> {
        self.grid.as_ref().ok_or_else(|| ConfigError::Invalid("missing [grid] section".into()))
    }

    /// `a` values of the grid; an explicit list wins over the range keys.
    pub fn a_values(&self) -> Result<Vec<f64>, ConfigError> {
        let g = self.grid()?;
        if !g.a.is_empty() {
            return Ok(g.a.clone());
        }
        let (lo, hi, step) = (g.a_min.unwrap_or(0.0), g.a_max.unwrap_or(0.0), g.a_step.unwrap_or(1.0));
        let n = ((hi - lo) / step + 1e-9).floor().max(0.0) as usize;
        // round to the step's decimal grid so that e.g. a₂ = 1 is hit exactly
        Ok((0..=n).map(|i| round_to_step(lo + step * i as f64, step)).collect())
    }

    pub fn region_thresholds(&self) -> Thresholds {
        let t = &self.thresholds;
        Thresholds { a0: t.a0, a0_margin: t.a0_margin, c_a2_a3: t.c_a2_a3, c_a4_a5: t.c_a4_a5 }
    }

    pub fn oracle_config(&self) -> OracleConfig {
        let o = &self.oracle;
        OracleConfig {
            tol: o.tol,
            lambda_max: self.thresholds.lambda_max,
            oscillation_cap: o.oscillation_cap,
            forbidden_cap: o.forbidden_cap,
            h_max: o.h_max,
            bracket_rel: o.bracket_rel,
            max_steps: o.max_steps,
        }
    }

    pub fn constants(&self) -> RemainderConstants {
        RemainderConstants { indefinite: self.calibration.indefinite, definite: self.calibration.definite }
    }
}

fn round_to_step(x: f64, step: f64) -> f64 {
    let digits = (-step.log10()).ceil().max(0.0) as i32 + 2;
    let scale = 10f64.powi(digits);
    (x * scale).round() / scale
}

#[cfg(test)]
mod tests {
    use super::*;

    const SAMPLE: &str = r#"
[potential]
name = "canonical"
c0 = 2.0
c1 = -1

[grid]
a_min = 0.7
a_max = 1.3
a_step = 0.05
p_min = 30
p_max = 30

[thresholds]
collar = 3.0

[calibration]
indefinite = 0.1
"#;

    #[test]
    fn parses_sample() {
        let c = RunConfig::from_toml(SAMPLE).unwrap();
        assert_eq!(c.potential.coefficients(), &[2.0, -1.0]);
        let a = c.a_values().unwrap();
        assert_eq!(a.len(), 13);
        assert!(a.contains(&1.0));
        assert_eq!(c.thresholds.collar, 3.0);
        assert_eq!(c.calibration.indefinite, 0.1);
        assert_eq!(c.calibration.definite, CALIBRATED.definite);
    }

    #[test]
    fn rejects_unknown_keys() {
        let bad = SAMPLE.replace("collar = 3.0", "collar = 3.0\nfoo = 1");
        assert!(RunConfig::from_toml(&bad).is_err());
        let bad = SAMPLE.replace("c1 = -1", "c1 = -1\nd2 = 0.5");
        assert!(RunConfig::from_toml(&bad).is_err());
        let bad = format!("{SAMPLE}\n[extra]\nx = 1\n");
        assert!(RunConfig::from_toml(&bad).is_err());
    }

    #[test]
    fn rejects_empty_and_non_finite() {
        assert!(matches!(RunConfig::from_toml("  \n"), Err(ConfigError::Empty)));
        let bad = SAMPLE.replace("indefinite = 0.1", "indefinite = nan");
        assert!(matches!(RunConfig::from_toml(&bad), Err(ConfigError::NonFinite { .. })));
        let bad = SAMPLE.replace("p_min = 30", "p_min = 31").replace("p_max = 30", "p_max = 29");
        assert!(RunConfig::from_toml(&bad).is_err());
    }
}
