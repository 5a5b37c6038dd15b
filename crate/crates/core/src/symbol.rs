//! Symbol input format, shared between the library and the CLI.
//!
//! A symbol is a JSON object in one of three shapes:
//!
//! ```json
//! {"coeffs": [[1.0, 0.0], [0.0, -0.5]]}
//! {"preset": "plus_eps", "eps": 0.5}
//! {"preset": "geometric", "ratio": 0.5, "dim": 16, "seed": 7}
//! ```
//!
//! The geometric preset has `û_n = ratio^n e^{iφ_n}` with phases drawn
//! deterministically from the named seed.

use num_complex::Complex64;
use rand::{RngExt, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use std::f64::consts::TAU;

use crate::error::{Error, Result};
use crate::hardy::FourierVector;

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(untagged)]
pub enum SymbolSpec {
    Coeffs { coeffs: Vec<(f64, f64)> },
    Preset(PresetSpec),
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(tag = "preset", rename_all = "snake_case")]
pub enum PresetSpec {
    PlusEps { eps: f64 },
    Geometric { ratio: f64, dim: usize, seed: u64 },
}

impl SymbolSpec {
    pub fn parse(json: &str) -> Result<Self> {
        serde_json::from_str(json).map_err(|e| Error::InvalidParameter {
            name: "symbol",
            reason: e.to_string(),
        })
    }

    pub fn build(&self) -> Result<FourierVector> {
        match self {
            SymbolSpec::Coeffs { coeffs } => FourierVector::new(
                coeffs
                    .iter()
                    .map(|&(re, im)| Complex64::new(re, im))
                    .collect(),
            ),
            SymbolSpec::Preset(PresetSpec::PlusEps { eps }) => plus_eps(*eps),
            SymbolSpec::Preset(PresetSpec::Geometric { ratio, dim, seed }) => {
                geometric(*ratio, *dim, *seed)
            }
        }
    }
}

/// The symbol `z + ε`.
pub fn plus_eps(eps: f64) -> Result<FourierVector> {
    if !eps.is_finite() {
        return Err(Error::NonFinite { context: "eps" });
    }
    FourierVector::new(vec![Complex64::new(eps, 0.0), Complex64::new(1.0, 0.0)])
}

/// Geometric-decay symbol `û_n = ratio^n e^{iφ_n}` with seeded phases.
pub fn geometric(ratio: f64, dim: usize, seed: u64) -> Result<FourierVector> {
    if !(ratio > 0.0 && ratio < 1.0) {
        return Err(Error::InvalidParameter {
            name: "ratio",
            reason: format!("must lie in (0, 1), got {ratio}"),
        });
    }
    if dim == 0 {
        return Err(Error::EmptyVector);
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let coeffs = (0..dim)
        .map(|n| {
            let phase = TAU * rng.random::<f64>();
            Complex64::new(0.0, phase).exp() * ratio.powi(n as i32)
        })
        .collect();
    FourierVector::new(coeffs)
}
