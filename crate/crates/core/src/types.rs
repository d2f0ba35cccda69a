//! Small enums shared by every module.

use serde::{Deserialize, Serialize};
use std::fmt;

/// Stable (`s`) or unstable (`u`) foliation.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Foliation {
    S,
    U,
}

impl Foliation {
    pub fn other(self) -> Self {
        match self {
            Foliation::S => Foliation::U,
            Foliation::U => Foliation::S,
        }
    }
}

impl fmt::Display for Foliation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Foliation::S => "s",
            Foliation::U => "u",
        })
    }
}

/// A sign, used for plug components U^± and for orbit labels γ^{j,±}.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Sign {
    #[serde(rename = "+")]
    Plus,
    #[serde(rename = "-")]
    Minus,
}

impl Sign {
    pub fn flip(self) -> Self {
        match self {
            Sign::Plus => Sign::Minus,
            Sign::Minus => Sign::Plus,
        }
    }

    pub fn as_i64(self) -> i64 {
        match self {
            Sign::Plus => 1,
            Sign::Minus => -1,
        }
    }

    pub fn of(value: i64) -> Option<Self> {
        match value.signum() {
            1 => Some(Sign::Plus),
            -1 => Some(Sign::Minus),
            _ => None,
        }
    }
}

impl fmt::Display for Sign {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Sign::Plus => "+",
            Sign::Minus => "-",
        })
    }
}

/// Entrance or exit side of a boundary torus.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Side {
    In,
    Out,
}

impl Side {
    pub fn flip(self) -> Self {
        match self {
            Side::In => Side::Out,
            Side::Out => Side::In,
        }
    }
}

/// Handedness of an odd-length SA annulus.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Handedness {
    L,
    R,
}

impl Handedness {
    pub fn flip(self) -> Self {
        match self {
            Handedness::L => Handedness::R,
            Handedness::R => Handedness::L,
        }
    }
}

impl fmt::Display for Handedness {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Handedness::L => "L",
            Handedness::R => "R",
        })
    }
}

/// Which family of rectangle components a gluing produces on a torus.
///
/// `R` comes from the `τ_{+1/2}∘σ` gluing, `L` from `τ_{−1/2}∘σ`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Chirality {
    R,
    L,
}
