//! Comparison runs, configuration, CSV output and the self-test.

pub mod compare;
pub mod config;
pub mod csv;
pub mod selftest;
pub mod tables;

use thiserror::Error;

use crate::actions::ActionError;
use crate::asymptotics::AsymptoticError;
use crate::oracle::OracleError;
use crate::potential::PotentialError;

pub use compare::{compare, sweep_transition, CompareReport, ComparisonRow, SweepReport, UnmatchedEigenvalue};
pub use config::{ConfigError, RunConfig};
pub use selftest::{selftest, SelftestReport};

#[derive(Debug, Error)]
pub enum HarnessError {
    #[error(transparent)]
    Config(#[from] ConfigError),
    #[error(transparent)]
    Potential(#[from] PotentialError),
    #[error(transparent)]
    Action(#[from] ActionError),
    #[error(transparent)]
    Asymptotic(#[from] AsymptoticError),
    #[error(transparent)]
    Oracle(#[from] OracleError),
    #[error("eigenfunction has {found} zeros on [-π, π), expected {expected}")]
    NodeCount { expected: u32, found: u32 },
    #[error("usage: {0}")]
    Usage(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error(transparent)]
    Csv(#[from] ::csv::Error),
}
