//! Input files for the subcommands.
//!
//! ```json
//! {
//!   "norm": {"kind": "lp", "p": 2},
//!   "triangle": [[0, 0], [4, 0], [0, 3]],
//!   "p4": [2, 1.5],
//!   "render": {"size": 800, "samples": 512}
//! }
//! ```
//!
//! `p4` is optional for `construct`; without it the first circumcenter found
//! by the solver is used. `verify` reads `points` (four of them) instead of
//! `triangle`; `plot` reads `x`, `r` and `arc`.

use std::fs;
use std::path::Path;

use ortho_core::detectors::ArcChoice;
use ortho_core::{NormSpec, Vec2};
use serde::de::DeserializeOwned;
use serde::Deserialize;

use crate::CliError;

/// Fewest samples accepted for a circle polyline.
pub const MIN_SAMPLES: usize = 256;

#[derive(Clone, Debug, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct RenderOptions {
    /// Width of the SVG canvas in pixels; the height follows the aspect ratio.
    pub size: u32,
    /// Polyline samples per circle.
    pub samples: usize,
    pub stroke: f64,
    pub unit_circle: bool,
    pub circles: bool,
    pub six_point: bool,
    pub labels: bool,
}

impl Default for RenderOptions {
    fn default() -> Self {
        Self {
            size: 800,
            samples: 512,
            stroke: 1.5,
            unit_circle: true,
            circles: true,
            six_point: true,
            labels: true,
        }
    }
}

impl RenderOptions {
    pub fn validate(&self) -> Result<(), CliError> {
        if self.samples < MIN_SAMPLES {
            return Err(CliError::Validation(format!(
                "render.samples must be at least {MIN_SAMPLES}"
            )));
        }
        if self.size == 0 || self.stroke.is_nan() || self.stroke <= 0.0 {
            return Err(CliError::Validation(
                "render.size and render.stroke must be positive".into(),
            ));
        }
        Ok(())
    }
}

#[derive(Clone, Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ConstructScene {
    pub norm: NormSpec,
    pub triangle: [Vec2; 3],
    pub p4: Option<Vec2>,
    #[serde(default)]
    pub render: RenderOptions,
}

#[derive(Clone, Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct VerifyScene {
    pub norm: NormSpec,
    pub points: [Vec2; 4],
}

#[derive(Clone, Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PlotScene {
    pub norm: NormSpec,
    pub x: Vec2,
    /// Norm of the isosceles partner `y`.
    #[serde(default = "one")]
    pub r: f64,
    #[serde(default = "plus")]
    pub arc: ArcChoice,
    #[serde(default)]
    pub render: RenderOptions,
}

fn one() -> f64 {
    1.0
}

fn plus() -> ArcChoice {
    ArcChoice::Plus
}

pub fn read_json<T: DeserializeOwned>(path: &Path) -> Result<T, CliError> {
    let text = fs::read_to_string(path)
        .map_err(|e| CliError::Validation(format!("cannot read {}: {e}", path.display())))?;
    serde_json::from_str(&text)
        .map_err(|e| CliError::Validation(format!("{}: {e}", path.display())))
}
