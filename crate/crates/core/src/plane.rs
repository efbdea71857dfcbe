//! The Minkowski plane: vectors, pluggable symmetric norms and norm circles.
//!
//! A [`NormSpec`] is the gauge of a centrally symmetric convex body. Three
//! families are supported: `lp` norms (closed forms for `p = 1`, `2`, `inf`),
//! polygonal unit balls, and user supplied black-box gauges that are screened
//! by random sampling when constructed.

use std::f64::consts::{FRAC_PI_2, TAU};
use std::fmt;
use std::ops::{Add, AddAssign, Div, Mul, Neg, Sub};
use std::sync::Arc;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{GeomError, Result};

/// Default absolute/relative tolerance for norm-equality checks.
pub const DEFAULT_TOL: f64 = 1e-9;

/// Point or vector of the plane. Serialized as `[x, y]`.
#[derive(Clone, Copy, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(from = "[f64; 2]", into = "[f64; 2]")]
pub struct Vec2 {
    pub x: f64,
    pub y: f64,
}

impl Vec2 {
    pub const ZERO: Vec2 = Vec2 { x: 0.0, y: 0.0 };

    #[inline]
    pub const fn new(x: f64, y: f64) -> Self {
        Self { x, y }
    }

    /// Like [`Vec2::new`] but rejects NaN and infinite components.
    pub fn try_new(x: f64, y: f64) -> Result<Self> {
        let v = Self { x, y };
        v.ensure_finite("vector component")?;
        Ok(v)
    }

    /// Euclidean unit vector at angle `theta`.
    #[inline]
    pub fn from_angle(theta: f64) -> Self {
        let (s, c) = theta.sin_cos();
        Self { x: c, y: s }
    }

    #[inline]
    pub fn is_finite(self) -> bool {
        self.x.is_finite() && self.y.is_finite()
    }

    pub(crate) fn ensure_finite(self, what: &'static str) -> Result<()> {
        if self.is_finite() {
            Ok(())
        } else {
            Err(GeomError::NonFinite(what))
        }
    }

    #[inline]
    pub fn dot(self, o: Vec2) -> f64 {
        self.x * o.x + self.y * o.y
    }

    /// z-component of the 3-D cross product; positive when `o` is
    /// counterclockwise from `self`.
    #[inline]
    pub fn cross(self, o: Vec2) -> f64 {
        self.x * o.y - self.y * o.x
    }

    /// Length in the auxiliary Euclidean metric.
    #[inline]
    pub fn euclid_len(self) -> f64 {
        self.x.hypot(self.y)
    }

    #[inline]
    pub fn euclid_dist(self, o: Vec2) -> f64 {
        (self - o).euclid_len()
    }

    /// Euclidean polar angle in `(-pi, pi]`.
    #[inline]
    pub fn angle(self) -> f64 {
        self.y.atan2(self.x)
    }

    #[inline]
    pub fn midpoint(self, o: Vec2) -> Vec2 {
        (self + o) * 0.5
    }

    /// Counterclockwise rotation by a right angle.
    #[inline]
    pub fn perp(self) -> Vec2 {
        Vec2::new(-self.y, self.x)
    }

    #[inline]
    pub fn max_abs(self) -> f64 {
        self.x.abs().max(self.y.abs())
    }
}

impl From<[f64; 2]> for Vec2 {
    fn from(a: [f64; 2]) -> Self {
        Vec2::new(a[0], a[1])
    }
}

impl From<Vec2> for [f64; 2] {
    fn from(v: Vec2) -> Self {
        [v.x, v.y]
    }
}

impl From<(f64, f64)> for Vec2 {
    fn from((x, y): (f64, f64)) -> Self {
        Vec2::new(x, y)
    }
}

impl fmt::Display for Vec2 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {})", self.x, self.y)
    }
}

impl Add for Vec2 {
    type Output = Vec2;
    #[inline]
    fn add(self, o: Vec2) -> Vec2 {
        Vec2::new(self.x + o.x, self.y + o.y)
    }
}

impl AddAssign for Vec2 {
    #[inline]
    fn add_assign(&mut self, o: Vec2) {
        self.x += o.x;
        self.y += o.y;
    }
}

impl Sub for Vec2 {
    type Output = Vec2;
    #[inline]
    fn sub(self, o: Vec2) -> Vec2 {
        Vec2::new(self.x - o.x, self.y - o.y)
    }
}

impl Neg for Vec2 {
    type Output = Vec2;
    #[inline]
    fn neg(self) -> Vec2 {
        Vec2::new(-self.x, -self.y)
    }
}

impl Mul<f64> for Vec2 {
    type Output = Vec2;
    #[inline]
    fn mul(self, s: f64) -> Vec2 {
        Vec2::new(self.x * s, self.y * s)
    }
}

impl Mul<Vec2> for f64 {
    type Output = Vec2;
    #[inline]
    fn mul(self, v: Vec2) -> Vec2 {
        v * self
    }
}

impl Div<f64> for Vec2 {
    type Output = Vec2;
    #[inline]
    fn div(self, s: f64) -> Vec2 {
        Vec2::new(self.x / s, self.y / s)
    }
}

/// `C(center, radius) = center + radius * C`, the norm circle.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Circle {
    pub center: Vec2,
    pub radius: f64,
}

impl Circle {
    pub fn new(center: Vec2, radius: f64) -> Result<Self> {
        center.ensure_finite("circle center")?;
        if !(radius.is_finite() && radius > 0.0) {
            return Err(GeomError::Precondition(format!(
                "circle radius must be positive and finite, got {radius}"
            )));
        }
        Ok(Self { center, radius })
    }
}

/// Exponent of an `lp` norm, `1 <= p <= inf`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Lp {
    p: f64,
}

impl Lp {
    pub fn p(&self) -> f64 {
        self.p
    }

    #[inline]
    fn eval(&self, v: Vec2) -> f64 {
        let (ax, ay) = (v.x.abs(), v.y.abs());
        let p = self.p;
        if p == 1.0 {
            ax + ay
        } else if p == 2.0 {
            ax.hypot(ay)
        } else if p.is_infinite() {
            ax.max(ay)
        } else {
            let m = ax.max(ay);
            if m == 0.0 {
                return 0.0;
            }
            let (a, b) = (ax / m, ay / m);
            m * (a.powf(p) + b.powf(p)).powf(1.0 / p)
        }
    }
}

/// Gauge of a centrally symmetric convex polygon.
///
/// Evaluated as `max_i |a_i . v|` over one representative facet functional
/// per antipodal edge pair, where `a_i . w = 1` on the edge. This is the
/// scaling factor that moves `v` onto the boundary edge hit by the ray from
/// the origin, and it is exactly symmetric in `v`.
#[derive(Clone, Debug, PartialEq)]
pub struct PolygonalGauge {
    vertices: Vec<Vec2>,
    facets: Vec<Vec2>,
}

impl PolygonalGauge {
    /// Boundary vertices in counterclockwise order.
    pub fn vertices(&self) -> &[Vec2] {
        &self.vertices
    }

    fn new(raw: &[Vec2]) -> Result<Self> {
        let n = raw.len();
        if n < 4 || !n.is_multiple_of(2) {
            return Err(GeomError::InvalidNorm(format!(
                "polygonal unit ball needs an even number (>= 4) of vertices, got {n}"
            )));
        }
        if raw.iter().any(|v| !v.is_finite()) {
            return Err(GeomError::InvalidNorm("non-finite polygon vertex".into()));
        }
        let scale = raw.iter().map(|v| v.max_abs()).fold(0.0, f64::max);
        if scale == 0.0 {
            return Err(GeomError::InvalidNorm(
                "polygon collapses to the origin".into(),
            ));
        }
        if raw.iter().any(|v| v.max_abs() <= 1e-12 * scale) {
            return Err(GeomError::InvalidNorm(
                "origin must lie in the interior of the polygon".into(),
            ));
        }
        let mut verts = raw.to_vec();
        verts.sort_by(|a, b| a.angle().total_cmp(&b.angle()));
        let tol = 1e-12 * scale.max(1.0);
        for i in 0..n {
            let j = (i + 1) % n;
            if verts[i].euclid_dist(verts[j]) <= tol {
                return Err(GeomError::InvalidNorm(format!(
                    "duplicate polygon vertex {}",
                    verts[i]
                )));
            }
        }
        let half = n / 2;
        for i in 0..half {
            let s = verts[i] + verts[i + half];
            if s.max_abs() > tol {
                return Err(GeomError::InvalidNorm(format!(
                    "polygon is not centrally symmetric: {} has no antipode",
                    verts[i]
                )));
            }
        }
        // Rebuild the second half as exact negations so the gauge is exactly even.
        for i in 0..half {
            verts[i + half] = -verts[i];
        }
        for i in 0..n {
            let a = verts[i];
            let b = verts[(i + 1) % n];
            let c = verts[(i + 2) % n];
            let turn = (b - a).cross(c - b);
            if turn < -tol * scale {
                return Err(GeomError::InvalidNorm(format!(
                    "polygon is not convex at vertex {b}"
                )));
            }
        }
        let mut facets = Vec::with_capacity(half);
        for i in 0..half {
            let a = verts[i];
            let b = verts[i + 1];
            let e = b - a;
            let normal = Vec2::new(e.y, -e.x);
            let offset = normal.dot(a);
            if offset <= tol * scale {
                return Err(GeomError::InvalidNorm(
                    "origin must lie in the interior of the polygon".into(),
                ));
            }
            facets.push(normal / offset);
        }
        Ok(Self {
            vertices: verts,
            facets,
        })
    }

    #[inline]
    fn eval(&self, v: Vec2) -> f64 {
        self.facets
            .iter()
            .map(|a| a.dot(v).abs())
            .fold(0.0, f64::max)
    }
}

type GaugeFn = dyn Fn(Vec2) -> f64 + Send + Sync;

/// User supplied gauge, screened by sampling at construction.
#[derive(Clone)]
pub struct CustomGauge {
    name: String,
    gauge: Arc<GaugeFn>,
}

impl CustomGauge {
    pub fn name(&self) -> &str {
        &self.name
    }
}

impl fmt::Debug for CustomGauge {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("CustomGauge")
            .field("name", &self.name)
            .finish_non_exhaustive()
    }
}

/// A symmetric convex gauge defining the Minkowski plane.
#[derive(Clone, Debug)]
pub enum NormSpec {
    Lp(Lp),
    Polygonal(PolygonalGauge),
    Custom(CustomGauge),
}

/// Number of random pairs used to screen custom gauges.
pub const CUSTOM_CHECK_PAIRS: usize = 10_000;

impl NormSpec {
    /// `lp` norm; `p` may be `f64::INFINITY`.
    pub fn lp(p: f64) -> Result<Self> {
        if p.is_nan() || p < 1.0 {
            return Err(GeomError::InvalidNorm(format!(
                "lp exponent must be >= 1, got {p}"
            )));
        }
        Ok(NormSpec::Lp(Lp { p }))
    }

    pub fn euclidean() -> Self {
        NormSpec::Lp(Lp { p: 2.0 })
    }

    pub fn linf() -> Self {
        NormSpec::Lp(Lp { p: f64::INFINITY })
    }

    pub fn l1() -> Self {
        NormSpec::Lp(Lp { p: 1.0 })
    }

    /// Polygonal unit ball from its boundary vertices (any order).
    pub fn polygonal(vertices: &[Vec2]) -> Result<Self> {
        PolygonalGauge::new(vertices).map(NormSpec::Polygonal)
    }

    /// The square with vertices `(+-1, +-1)`.
    pub fn square() -> Self {
        Self::polygonal(&[
            Vec2::new(1.0, 1.0),
            Vec2::new(-1.0, 1.0),
            Vec2::new(-1.0, -1.0),
            Vec2::new(1.0, -1.0),
        ])
        .expect("square is a valid unit ball")
    }

    /// Black-box gauge screened with [`CUSTOM_CHECK_PAIRS`] random pairs.
    pub fn custom<F>(name: impl Into<String>, gauge: F) -> Result<Self>
    where
        F: Fn(Vec2) -> f64 + Send + Sync + 'static,
    {
        Self::custom_with_checks(name, gauge, CUSTOM_CHECK_PAIRS, 0)
    }

    pub fn custom_with_checks<F>(
        name: impl Into<String>,
        gauge: F,
        pairs: usize,
        seed: u64,
    ) -> Result<Self>
    where
        F: Fn(Vec2) -> f64 + Send + Sync + 'static,
    {
        let g = CustomGauge {
            name: name.into(),
            gauge: Arc::new(gauge),
        };
        screen_custom(&g, pairs, seed)?;
        Ok(NormSpec::Custom(g))
    }

    /// Short identifier used in reports, e.g. `lp(2)` or `polygonal[4]`.
    pub fn id(&self) -> String {
        match self {
            NormSpec::Lp(lp) if lp.p.is_infinite() => "lp(inf)".to_string(),
            NormSpec::Lp(lp) => format!("lp({})", lp.p),
            NormSpec::Polygonal(poly) => format!("polygonal[{}]", poly.vertices.len()),
            NormSpec::Custom(c) => format!("custom:{}", c.name),
        }
    }

    /// Minkowski functional of the unit ball at `v`.
    #[inline]
    pub fn norm(&self, v: Vec2) -> f64 {
        match self {
            NormSpec::Lp(lp) => lp.eval(v),
            NormSpec::Polygonal(poly) => poly.eval(v),
            NormSpec::Custom(c) => (c.gauge)(v),
        }
    }

    #[inline]
    pub fn distance(&self, a: Vec2, b: Vec2) -> f64 {
        self.norm(a - b)
    }

    /// Unit-norm vector in Euclidean direction `theta`.
    #[inline]
    pub fn unit(&self, theta: f64) -> Vec2 {
        let d = Vec2::from_angle(theta);
        d / self.norm(d)
    }

    /// Point of `circle` in Euclidean direction `theta` from its center.
    #[inline]
    pub fn circle_point(&self, circle: &Circle, theta: f64) -> Vec2 {
        circle.center + self.unit(theta) * circle.radius
    }

    /// Randomized search for a flat spot on the unit sphere.
    ///
    /// Returns `false` as soon as two distinct unit vectors have a midpoint of
    /// norm `>= 1 - tol`. `true` is only a probabilistic certificate.
    pub fn strict_convexity_probe(&self, samples: usize) -> bool {
        let mut rng = ChaCha8Rng::seed_from_u64(0x5eed_c0de);
        for _ in 0..samples.max(1) {
            let theta = rng.gen_range(0.0..TAU);
            let gap = rng.gen_range(0.2..FRAC_PI_2);
            let u = self.unit(theta);
            let v = self.unit(theta + gap);
            if self.norm((u + v) * 0.5) >= 1.0 - DEFAULT_TOL {
                return false;
            }
        }
        true
    }
}

/// Random vector with uniform direction and log-uniform magnitude in `[lo, hi]`.
pub(crate) fn random_vector<R: Rng>(rng: &mut R, lo: f64, hi: f64) -> Vec2 {
    let theta = rng.gen_range(0.0..TAU);
    let mag = (rng.gen_range(lo.ln()..hi.ln())).exp();
    Vec2::from_angle(theta) * mag
}

fn screen_custom(g: &CustomGauge, pairs: usize, seed: u64) -> Result<()> {
    let f = &g.gauge;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let bad = |what: &str, v: Vec2| {
        Err(GeomError::InvalidNorm(format!(
            "custom gauge '{}' fails {what} at {v}",
            g.name
        )))
    };
    let zero = f(Vec2::ZERO);
    if !(zero.is_finite() && zero.abs() <= DEFAULT_TOL) {
        return bad("zero at the origin", Vec2::ZERO);
    }
    for _ in 0..pairs {
        let u = random_vector(&mut rng, 0.1, 10.0);
        let v = random_vector(&mut rng, 0.1, 10.0);
        let (fu, fv) = (f(u), f(v));
        if !(fu.is_finite() && fv.is_finite() && fu > 0.0 && fv > 0.0) {
            return bad("strict positivity", u);
        }
        if (f(-u) - fu).abs() > DEFAULT_TOL * fu.max(1.0) {
            return bad("symmetry", u);
        }
        let t = rng.gen_range(0.1..10.0);
        if (f(u * t) - t * fu).abs() > DEFAULT_TOL * (t * fu).max(1.0) {
            return bad("positive homogeneity", u);
        }
        if f(u + v) > fu + fv + DEFAULT_TOL * (fu + fv) {
            return bad("the triangle inequality", u + v);
        }
    }
    Ok(())
}

#[derive(Serialize, Deserialize)]
#[serde(untagged)]
enum Exponent {
    Num(f64),
    Text(String),
}

#[derive(Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
enum NormSpecRepr {
    Lp { p: Exponent },
    Polygonal { vertices: Vec<Vec2> },
    Custom { name: String },
}

impl TryFrom<NormSpecRepr> for NormSpec {
    type Error = GeomError;

    fn try_from(r: NormSpecRepr) -> Result<Self> {
        match r {
            NormSpecRepr::Lp {
                p: Exponent::Num(p),
            } => NormSpec::lp(p),
            NormSpecRepr::Lp {
                p: Exponent::Text(s),
            } => match s.to_ascii_lowercase().as_str() {
                "inf" | "infinity" => Ok(NormSpec::linf()),
                other => other
                    .parse::<f64>()
                    .map_err(|_| GeomError::InvalidNorm(format!("bad lp exponent '{s}'")))
                    .and_then(NormSpec::lp),
            },
            NormSpecRepr::Polygonal { vertices } => NormSpec::polygonal(&vertices),
            NormSpecRepr::Custom { name } => Err(GeomError::InvalidNorm(format!(
                "custom gauge '{name}' cannot be loaded from JSON"
            ))),
        }
    }
}

impl From<&NormSpec> for NormSpecRepr {
    fn from(n: &NormSpec) -> Self {
        match n {
            NormSpec::Lp(lp) if lp.p.is_infinite() => NormSpecRepr::Lp {
                p: Exponent::Text("inf".into()),
            },
            NormSpec::Lp(lp) => NormSpecRepr::Lp {
                p: Exponent::Num(lp.p),
            },
            NormSpec::Polygonal(poly) => NormSpecRepr::Polygonal {
                vertices: poly.vertices.clone(),
            },
            NormSpec::Custom(c) => NormSpecRepr::Custom {
                name: c.name.clone(),
            },
        }
    }
}

impl Serialize for NormSpec {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        NormSpecRepr::from(self).serialize(s)
    }
}

impl<'de> Deserialize<'de> for NormSpec {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let repr = NormSpecRepr::deserialize(d)?;
        NormSpec::try_from(repr).map_err(serde::de::Error::custom)
    }
}
