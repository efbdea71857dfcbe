//! Isosceles and Birkhoff orthogonality, measured as nonnegative defects.

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::error::{GeomError, Result};
use crate::plane::{Circle, NormSpec, Vec2};
use crate::search::{first_root, golden_section_min};

/// Which orthogonality relation a defect measures.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum OrthoKind {
    Isosceles,
    Birkhoff,
}

/// A defect value; zero means orthogonal.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct OrthoDefect {
    pub value: f64,
    pub kind: OrthoKind,
}

impl OrthoDefect {
    pub fn holds(&self, tol: f64) -> bool {
        self.value <= tol
    }
}

/// Bracket width for the Birkhoff line search.
pub const BIRKHOFF_WIDTH: f64 = 1e-12;

/// `| ||x+y|| - ||x-y|| |`; zero iff `x` is isosceles orthogonal to `y`.
pub fn isosceles_defect(spec: &NormSpec, x: Vec2, y: Vec2) -> f64 {
    (spec.norm(x + y) - spec.norm(x - y)).abs()
}

/// Search interval `|t| <= 2||x||/||y|| + 1` for `min_t ||x + t y||`.
pub fn birkhoff_bracket(spec: &NormSpec, x: Vec2, y: Vec2) -> f64 {
    2.0 * spec.norm(x) / spec.norm(y) + 1.0
}

/// `||x|| - min_t ||x + t y||`; zero iff `x` is Birkhoff orthogonal to `y`.
///
/// `t -> ||x + t y||` is convex, so golden-section search on the bracket
/// from [`birkhoff_bracket`] finds its minimum. `y = 0` gives 0.
pub fn birkhoff_defect(spec: &NormSpec, x: Vec2, y: Vec2) -> Result<f64> {
    x.ensure_finite("birkhoff x")?;
    y.ensure_finite("birkhoff y")?;
    if y == Vec2::ZERO {
        return Ok(0.0);
    }
    let nx = spec.norm(x);
    let bound = birkhoff_bracket(spec, x, y);
    let m = golden_section_min(|t| spec.norm(x + y * t), -bound, bound, BIRKHOFF_WIDTH);
    Ok((nx - m.value.min(nx)).max(0.0))
}

pub fn isosceles(spec: &NormSpec, x: Vec2, y: Vec2) -> OrthoDefect {
    OrthoDefect {
        value: isosceles_defect(spec, x, y),
        kind: OrthoKind::Isosceles,
    }
}

pub fn birkhoff(spec: &NormSpec, x: Vec2, y: Vec2) -> Result<OrthoDefect> {
    Ok(OrthoDefect {
        value: birkhoff_defect(spec, x, y)?,
        kind: OrthoKind::Birkhoff,
    })
}

const PARTNER_SCAN_STEPS: usize = 256;

/// A vector `y` with `||y|| = r` and `x` isosceles orthogonal to `y`.
///
/// Scans `g(theta) = ||x + y(theta)|| - ||x - y(theta)||` over
/// `theta in [0, pi]` (note `g(theta + pi) = -g(theta)`) and bisects the
/// first sign change, so the partner with the smallest angle is returned;
/// `-y` is the other one.
pub fn isosceles_partner(spec: &NormSpec, x: Vec2, r: f64) -> Result<Vec2> {
    x.ensure_finite("isosceles_partner x")?;
    if x == Vec2::ZERO {
        return Err(GeomError::Precondition(
            "isosceles partner of the zero vector".into(),
        ));
    }
    let circle = Circle::new(Vec2::ZERO, r)?;
    let g = |theta: f64| {
        let y = spec.circle_point(&circle, theta);
        spec.norm(x + y) - spec.norm(x - y)
    };
    let theta = first_root(g, 0.0, PI, PARTNER_SCAN_STEPS).ok_or_else(|| {
        GeomError::Numerical(format!(
            "no isosceles partner bracketed for {x} at radius {r}"
        ))
    })?;
    Ok(spec.circle_point(&circle, theta))
}
