//! Busemann angular bisectors and an affine line-membership defect.

use serde::{Deserialize, Serialize};

use crate::error::{GeomError, Result};
use crate::plane::{NormSpec, Vec2};

/// Ray `[origin, through>`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Ray {
    pub origin: Vec2,
    pub through: Vec2,
}

impl Ray {
    pub fn new(origin: Vec2, through: Vec2) -> Result<Self> {
        if origin == through {
            return Err(GeomError::Degenerate(
                "ray needs two distinct points".into(),
            ));
        }
        Ok(Self { origin, through })
    }

    pub fn direction(&self) -> Vec2 {
        self.through - self.origin
    }
}

/// Ray from `p` through `p + (u + v)/2`, with `u`, `v` the norm-unit
/// directions towards `a` and `b`.
pub fn busemann_bisector(spec: &NormSpec, p: Vec2, a: Vec2, b: Vec2) -> Result<Ray> {
    if a == p || b == p {
        return Err(GeomError::Degenerate(
            "bisector ray endpoint equals its origin".into(),
        ));
    }
    let u = (a - p) / spec.norm(a - p);
    let v = (b - p) / spec.norm(b - p);
    let dir = (u + v) * 0.5;
    if spec.norm(dir) <= 1e-12 {
        return Err(GeomError::UndefinedBisector);
    }
    Ray::new(p, p + dir)
}

/// Euclidean distance from `point` to the line through `line_p` and `line_q`.
///
/// Collinearity is affine, so the auxiliary Euclidean metric is only a
/// reporting scale; zero means the point is on the line regardless of norm.
pub fn line_membership_defect(point: Vec2, line_p: Vec2, line_q: Vec2) -> Result<f64> {
    let d = line_q - line_p;
    let len = d.euclid_len();
    if len == 0.0 {
        return Err(GeomError::Degenerate(
            "line through coincident points".into(),
        ));
    }
    Ok((point - line_p).cross(d).abs() / len)
}

/// Signed version of [`line_membership_defect`] for a line through
/// `origin` with direction `dir`.
pub(crate) fn signed_side(point: Vec2, origin: Vec2, dir: Vec2) -> f64 {
    dir.cross(point - origin) / dir.euclid_len()
}
