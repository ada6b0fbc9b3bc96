use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::Error;

/// One-dimensional function applied on top of a term's monomial.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum TransformId {
    #[serde(rename = "id")]
    Identity,
    Sin,
    Cos,
    Tan,
    #[serde(rename = "sqrtabs")]
    SqrtAbs,
    Log,
    Log1p,
}

impl TransformId {
    pub const ALL: [TransformId; 7] = [
        TransformId::Identity,
        TransformId::Sin,
        TransformId::Cos,
        TransformId::Tan,
        TransformId::SqrtAbs,
        TransformId::Log,
        TransformId::Log1p,
    ];

    /// The non-identity set used by the benchmark protocol:
    /// sin, cos, tan, sqrt(|x|), log(x), log(x + 1).
    pub fn default_set() -> Vec<TransformId> {
        TransformId::ALL[1..].to_vec()
    }

    /// Applies the transform. Points outside the domain yield NaN rather
    /// than a panic.
    pub fn apply(self, z: f64) -> f64 {
        match self {
            TransformId::Identity => z,
            TransformId::Sin => z.sin(),
            TransformId::Cos => z.cos(),
            TransformId::Tan => z.tan(),
            TransformId::SqrtAbs => z.abs().sqrt(),
            TransformId::Log => {
                if z > 0.0 {
                    z.ln()
                } else {
                    f64::NAN
                }
            }
            TransformId::Log1p => {
                if z > -1.0 {
                    z.ln_1p()
                } else {
                    f64::NAN
                }
            }
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            TransformId::Identity => "id",
            TransformId::Sin => "sin",
            TransformId::Cos => "cos",
            TransformId::Tan => "tan",
            TransformId::SqrtAbs => "sqrtabs",
            TransformId::Log => "log",
            TransformId::Log1p => "log1p",
        }
    }

    pub fn is_identity(self) -> bool {
        self == TransformId::Identity
    }
}

impl fmt::Display for TransformId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for TransformId {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        TransformId::ALL
            .iter()
            .copied()
            .find(|t| t.name() == s)
            .ok_or_else(|| Error::Parse(format!("unknown transform `{s}`")))
    }
}
