//! Circumcenter sets `{x : ||x-a|| = ||x-b|| = ||x-c||}` found by multi-start
//! damped Newton iteration on the bisector residuals.
//!
//! In strictly convex norms a non-collinear triangle has at most one
//! circumcenter. Polyhedral norms can produce several, or a whole continuum;
//! the solver then reports one representative per converged cluster.

use serde::{Deserialize, Serialize};

use crate::error::{GeomError, Result};
use crate::exec::Execution;
use crate::plane::{NormSpec, Vec2, DEFAULT_TOL};

/// Ordered vertex triple.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Triangle {
    pub a: Vec2,
    pub b: Vec2,
    pub c: Vec2,
}

impl Triangle {
    /// Finite, pairwise distinct vertices.
    pub fn new(a: Vec2, b: Vec2, c: Vec2) -> Result<Self> {
        a.ensure_finite("triangle vertex")?;
        b.ensure_finite("triangle vertex")?;
        c.ensure_finite("triangle vertex")?;
        if a == b || b == c || a == c {
            return Err(GeomError::Degenerate("duplicate triangle vertices".into()));
        }
        Ok(Self { a, b, c })
    }

    pub fn vertices(&self) -> [Vec2; 3] {
        [self.a, self.b, self.c]
    }

    /// Longest side in the auxiliary Euclidean metric.
    pub fn diameter(&self) -> f64 {
        self.a
            .euclid_dist(self.b)
            .max(self.b.euclid_dist(self.c))
            .max(self.a.euclid_dist(self.c))
    }

    /// Twice the signed Euclidean area.
    pub fn signed_area2(&self) -> f64 {
        (self.b - self.a).cross(self.c - self.a)
    }

    /// Collinear when the edge cross product vanishes relative to the size.
    pub fn is_collinear(&self) -> bool {
        let d = self.diameter();
        self.signed_area2().abs() <= 1e-12 * d * d
    }

    pub fn barycenter(&self) -> Vec2 {
        (self.a + self.b + self.c) / 3.0
    }

    pub fn translate(&self, v: Vec2) -> Triangle {
        Triangle {
            a: self.a + v,
            b: self.b + v,
            c: self.c + v,
        }
    }

    pub fn scale(&self, s: f64) -> Triangle {
        Triangle {
            a: self.a * s,
            b: self.b * s,
            c: self.c * s,
        }
    }

    fn bbox(&self) -> (Vec2, Vec2) {
        let v = self.vertices();
        let lo = Vec2::new(
            v.iter().map(|p| p.x).fold(f64::INFINITY, f64::min),
            v.iter().map(|p| p.y).fold(f64::INFINITY, f64::min),
        );
        let hi = Vec2::new(
            v.iter().map(|p| p.x).fold(f64::NEG_INFINITY, f64::max),
            v.iter().map(|p| p.y).fold(f64::NEG_INFINITY, f64::max),
        );
        (lo, hi)
    }
}

/// `(||x-a|| - ||x-b||, ||x-a|| - ||x-c||)`; both zero iff `x` is a circumcenter.
#[inline]
pub fn bisector_residual(spec: &NormSpec, tri: &Triangle, x: Vec2) -> (f64, f64) {
    let da = spec.distance(x, tri.a);
    (da - spec.distance(x, tri.b), da - spec.distance(x, tri.c))
}

#[inline]
fn max_abs_residual(spec: &NormSpec, tri: &Triangle, x: Vec2) -> f64 {
    let (r1, r2) = bisector_residual(spec, tri, x);
    r1.abs().max(r2.abs())
}

/// Knobs of the multi-start solver.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SearchParams {
    /// Starts per axis of the start grid.
    pub grid: usize,
    /// Bounding box margin as a multiple of the triangle diameter.
    pub inflate: f64,
    pub max_iter: usize,
    /// Maximum absolute residual per component for an accepted center.
    pub accept_tol: f64,
    /// Cluster radius as a fraction of the triangle diameter.
    pub dedup_factor: f64,
    pub exec: Execution,
}

impl Default for SearchParams {
    fn default() -> Self {
        Self {
            grid: 16,
            inflate: 2.0,
            max_iter: 60,
            accept_tol: DEFAULT_TOL,
            dedup_factor: 1e-6,
            exec: Execution::default(),
        }
    }
}

/// Deduplicated circumcenters with their radii and residuals.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CircumcenterSet {
    pub centers: Vec<Vec2>,
    pub radius_at: Vec<f64>,
    pub residual_at: Vec<f64>,
    pub collinear: bool,
    /// Three or more mutually distant centers: a flat bisector piece is likely.
    pub possibly_continuum: bool,
}

impl CircumcenterSet {
    pub fn is_empty(&self) -> bool {
        self.centers.is_empty()
    }

    pub fn len(&self) -> usize {
        self.centers.len()
    }

    /// More than one center (impossible in strictly convex norms).
    pub fn multiple(&self) -> bool {
        self.centers.len() > 1
    }

    /// Error when nothing was found; collinear input is reported as degenerate.
    pub fn require_nonempty(&self) -> Result<()> {
        match (self.is_empty(), self.collinear) {
            (false, _) => Ok(()),
            (true, true) => Err(GeomError::Degenerate("collinear".into())),
            (true, false) => Err(GeomError::Numerical("no circumcenter found".into())),
        }
    }
}

fn newton(
    spec: &NormSpec,
    tri: &Triangle,
    start: Vec2,
    p: &SearchParams,
    h: f64,
) -> Option<(Vec2, f64)> {
    let f = |x: Vec2| bisector_residual(spec, tri, x);
    let mut x = start;
    let (mut f1, mut f2) = f(x);
    let mut r = f1.abs().max(f2.abs());
    let floor = 4.0 * f64::EPSILON * spec.distance(x, tri.a).max(1.0);
    for _ in 0..p.max_iter {
        if r <= floor {
            break;
        }
        let dx = Vec2::new(h, 0.0);
        let dy = Vec2::new(0.0, h);
        let (px1, px2) = f(x + dx);
        let (mx1, mx2) = f(x - dx);
        let (py1, py2) = f(x + dy);
        let (my1, my2) = f(x - dy);
        let j11 = (px1 - mx1) / (2.0 * h);
        let j21 = (px2 - mx2) / (2.0 * h);
        let j12 = (py1 - my1) / (2.0 * h);
        let j22 = (py2 - my2) / (2.0 * h);
        let det = j11 * j22 - j12 * j21;
        let jn = j11.abs().max(j12.abs()).max(j21.abs()).max(j22.abs());
        if !det.is_finite() || det.abs() <= 1e-12 * jn * jn {
            // singular Jacobian: abandon this start
            return None;
        }
        let step = Vec2::new(-(j22 * f1 - j12 * f2) / det, -(-j21 * f1 + j11 * f2) / det);
        let mut damp = 1.0;
        let mut improved = false;
        for _ in 0..40 {
            let xn = x + step * damp;
            let (g1, g2) = f(xn);
            let rn = g1.abs().max(g2.abs());
            if rn < r {
                x = xn;
                f1 = g1;
                f2 = g2;
                r = rn;
                improved = true;
                break;
            }
            damp *= 0.5;
        }
        if !improved {
            break;
        }
    }
    (r <= p.accept_tol && x.is_finite()).then_some((x, r))
}

/// All circumcenters reachable from the start grid.
pub fn circumcenters(
    spec: &NormSpec,
    tri: &Triangle,
    params: &SearchParams,
) -> Result<CircumcenterSet> {
    let diam = tri.diameter();
    if diam == 0.0 {
        return Err(GeomError::Degenerate(
            "triangle collapses to a point".into(),
        ));
    }
    let (lo, hi) = tri.bbox();
    let margin = params.inflate * diam;
    let (lo, hi) = (
        lo - Vec2::new(margin, margin),
        hi + Vec2::new(margin, margin),
    );
    let n = params.grid.max(1);
    let cell = |k: usize, lo: f64, hi: f64| lo + (hi - lo) * (k as f64 + 0.5) / n as f64;
    let h = 1e-7 * diam;
    let mut found: Vec<(Vec2, f64)> = params
        .exec
        .map_indexed(n * n, |k| {
            let start = Vec2::new(cell(k % n, lo.x, hi.x), cell(k / n, lo.y, hi.y));
            newton(spec, tri, start, params, h)
        })
        .into_iter()
        .flatten()
        .collect();
    found.sort_by(|a, b| a.0.x.total_cmp(&b.0.x).then(a.0.y.total_cmp(&b.0.y)));

    let radius = params.dedup_factor * diam;
    let mut reps: Vec<(Vec2, f64)> = Vec::new();
    for (x, r) in found {
        match reps.iter_mut().find(|(c, _)| c.euclid_dist(x) < radius) {
            Some(rep) => {
                if r < rep.1 {
                    *rep = (x, r);
                }
            }
            None => reps.push((x, r)),
        }
    }
    let centers: Vec<Vec2> = reps.iter().map(|(c, _)| *c).collect();
    Ok(CircumcenterSet {
        radius_at: centers.iter().map(|c| spec.distance(*c, tri.a)).collect(),
        residual_at: reps.iter().map(|(_, r)| *r).collect(),
        possibly_continuum: centers.len() >= 3,
        collinear: tri.is_collinear(),
        centers,
    })
}

/// `||center - a||`, after checking that `center` is a circumcenter.
pub fn circumradius(spec: &NormSpec, tri: &Triangle, center: Vec2) -> Result<f64> {
    let r = spec.distance(center, tri.a);
    let res = max_abs_residual(spec, tri, center);
    if res > DEFAULT_TOL * (1.0 + r) {
        return Err(GeomError::Precondition(format!(
            "{center} is not a circumcenter (residual {res:.3e})"
        )));
    }
    Ok(r)
}

/// Largest bisector residual component at `x`.
pub fn circumcenter_residual(spec: &NormSpec, tri: &Triangle, x: Vec2) -> f64 {
    max_abs_residual(spec, tri, x)
}
