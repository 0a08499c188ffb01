//! Small enums shared across modules.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::BouncerError;

/// Velocity-dependent drag law.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Law {
    /// Force `-alpha v`.
    Linear,
    /// Force `-gamma v |v|`.
    Quadratic,
}

/// Which classical object is quantized.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Route {
    /// Constant of motion with the velocity operator.
    K,
    /// Hamiltonian with the momentum operator.
    H,
}

/// Sign branch of the quadratic-drag quantities: `Up` for `v >= 0`
/// (upper sign), `Down` for `v < 0`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Branch {
    Up,
    Down,
}

impl Branch {
    /// `+1` for `Up`, `-1` for `Down`: the upper/lower sign of `±`.
    pub fn sign(self) -> f64 {
        match self {
            Branch::Up => 1.0,
            Branch::Down => -1.0,
        }
    }

    pub fn for_velocity(v: f64) -> Self {
        if v >= 0.0 {
            Branch::Up
        } else {
            Branch::Down
        }
    }

    pub fn flip(self) -> Self {
        match self {
            Branch::Up => Branch::Down,
            Branch::Down => Branch::Up,
        }
    }
}

/// Exact closed forms or their expansion to second order in the drag.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize, Default)]
#[serde(rename_all = "lowercase")]
pub enum Formulation {
    #[default]
    Exact,
    Series2,
}

macro_rules! text_enum {
    ($ty:ty, $kind:literal, { $($text:literal => $variant:expr),+ $(,)? }) => {
        impl FromStr for $ty {
            type Err = BouncerError;
            fn from_str(s: &str) -> Result<Self, Self::Err> {
                match s.to_ascii_lowercase().as_str() {
                    $($text => Ok($variant),)+
                    other => Err(BouncerError::Config(format!(
                        concat!("unknown ", $kind, " `{}`"), other
                    ))),
                }
            }
        }
    };
}

text_enum!(Law, "law", { "linear" => Law::Linear, "quadratic" => Law::Quadratic });
text_enum!(Route, "route", { "k" => Route::K, "h" => Route::H });
text_enum!(Branch, "branch", { "up" => Branch::Up, "down" => Branch::Down });
text_enum!(Formulation, "formulation", { "exact" => Formulation::Exact, "series2" => Formulation::Series2 });

impl fmt::Display for Law {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Law::Linear => "linear",
            Law::Quadratic => "quadratic",
        })
    }
}

impl fmt::Display for Route {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Route::K => "K",
            Route::H => "H",
        })
    }
}

impl fmt::Display for Branch {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Branch::Up => "up",
            Branch::Down => "down",
        })
    }
}
