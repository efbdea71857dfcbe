//! Antitriangles, C-orthocenters and the circles attached to them.
//!
//! The construction itself is affine algebra and does not look at the norm:
//! given `x1, x2, x3` and a reference point `p4`, reflect `p4` through the side
//! midpoints to get the antitriangle `p1 p2 p3`. Both triangles are point
//! reflections of each other through a common center `q`, and `x4 = S_q(p4)`
//! is the orthocenter associated with `p4`. The norm only enters through the
//! verification predicates, which require `p4` to be a circumcenter.

use serde::{Deserialize, Serialize};

use crate::circumcenter::{circumcenter_residual, circumcenters, SearchParams, Triangle};
use crate::error::{GeomError, Result};
use crate::plane::{NormSpec, Vec2, DEFAULT_TOL};

/// `S_p(w) = 2p - w`, the point reflection through `p`.
#[inline]
pub fn point_symmetry(p: Vec2, w: Vec2) -> Vec2 {
    p * 2.0 - w
}

/// `H_{g,-2}(w) = 3g - 2w`, the homothety with center `g` and ratio -2.
#[inline]
pub fn homothety_minus2(g: Vec2, w: Vec2) -> Vec2 {
    g * 3.0 - w * 2.0
}

/// A base triangle, its `p4`-antitriangle and all derived points.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct OrthocentricConfig {
    pub x1: Vec2,
    pub x2: Vec2,
    pub x3: Vec2,
    pub p4: Vec2,
    /// Midpoints of `[x2,x3]`, `[x1,x3]`, `[x1,x2]`.
    pub m1: Vec2,
    pub m2: Vec2,
    pub m3: Vec2,
    /// `p_i = S_{m_i}(p4)`.
    pub p1: Vec2,
    pub p2: Vec2,
    pub p3: Vec2,
    /// Common midpoint of the segments `[x_i, p_i]`.
    pub q: Vec2,
    /// `S_q(p4)`.
    pub x4: Vec2,
    /// Midpoints of `[p2,p3]`, `[p1,p3]`, `[p1,p2]`.
    pub d1: Vec2,
    pub d2: Vec2,
    pub d3: Vec2,
    pub g: Vec2,
    pub g1: Vec2,
    /// Circumradius, set only once `p4` has been verified as a circumcenter.
    pub lambda: Option<f64>,
    /// Base points are collinear or repeated.
    pub degenerate: bool,
}

impl OrthocentricConfig {
    pub fn base(&self) -> [Vec2; 4] {
        [self.x1, self.x2, self.x3, self.x4]
    }

    pub fn anti(&self) -> [Vec2; 4] {
        [self.p1, self.p2, self.p3, self.p4]
    }

    pub fn midpoints(&self) -> [Vec2; 6] {
        [self.m1, self.m2, self.m3, self.d1, self.d2, self.d3]
    }

    fn require_lambda(&self) -> Result<f64> {
        if self.degenerate {
            return Err(GeomError::Degenerate("configuration is degenerate".into()));
        }
        self.lambda.ok_or_else(|| {
            GeomError::Precondition("p4 has not been verified as a circumcenter".into())
        })
    }
}

/// The `p4`-antitriangle of `x1 x2 x3` with every derived point.
pub fn antitriangle(x1: Vec2, x2: Vec2, x3: Vec2, p4: Vec2) -> OrthocentricConfig {
    let m1 = x2.midpoint(x3);
    let m2 = x1.midpoint(x3);
    let m3 = x1.midpoint(x2);
    let p1 = point_symmetry(m1, p4);
    let p2 = point_symmetry(m2, p4);
    let p3 = point_symmetry(m3, p4);
    let q = x1.midpoint(p1);
    let x4 = point_symmetry(q, p4);
    let degenerate = x1 == x2
        || x2 == x3
        || x1 == x3
        || Triangle {
            a: x1,
            b: x2,
            c: x3,
        }
        .is_collinear();
    OrthocentricConfig {
        x1,
        x2,
        x3,
        p4,
        m1,
        m2,
        m3,
        p1,
        p2,
        p3,
        q,
        x4,
        d1: p2.midpoint(p3),
        d2: p1.midpoint(p3),
        d3: p1.midpoint(p2),
        g: (x1 + x2 + x3) / 3.0,
        g1: (p1 + p2 + p3) / 3.0,
        lambda: None,
        degenerate,
    }
}

/// The orthocenter configuration associated with the circumcenter `p4`.
///
/// Fails if the triangle is collinear or `p4` is not a circumcenter; on
/// success `x4` is certified to be the circumcenter of the antitriangle.
pub fn orthocenter_from_circumcenter(
    spec: &NormSpec,
    tri: &Triangle,
    p4: Vec2,
) -> Result<OrthocentricConfig> {
    p4.ensure_finite("p4")?;
    if tri.is_collinear() {
        return Err(GeomError::Degenerate("collinear".into()));
    }
    let lambda = spec.distance(p4, tri.a);
    let res = circumcenter_residual(spec, tri, p4);
    let tol = DEFAULT_TOL * (1.0 + lambda);
    if res > tol {
        return Err(GeomError::Precondition(format!(
            "p4 = {p4} is not a circumcenter (residual {res:.3e})"
        )));
    }
    let mut cfg = antitriangle(tri.a, tri.b, tri.c, p4);
    let anti_defect = [cfg.p1, cfg.p2, cfg.p3]
        .iter()
        .map(|p| (spec.distance(cfg.x4, *p) - lambda).abs())
        .fold(0.0, f64::max);
    if anti_defect > tol {
        return Err(GeomError::Numerical(format!(
            "x4 is not the antitriangle circumcenter (defect {anti_defect:.3e})"
        )));
    }
    cfg.lambda = Some(lambda);
    Ok(cfg)
}

/// Max over `i != j` of `| ||x_i - p_j|| - lambda |`.
///
/// Covers the three circles `C(x_i, lambda)` through `p4` meeting pairwise in
/// `p_k`, and `{p1,p2,p3}` on `C(x4, lambda)`.
pub fn three_circles_check(spec: &NormSpec, cfg: &OrthocentricConfig) -> Result<f64> {
    let lambda = cfg.require_lambda()?;
    let xs = cfg.base();
    let ps = cfg.anti();
    let mut worst = 0.0f64;
    for (i, x) in xs.iter().enumerate() {
        for (j, p) in ps.iter().enumerate() {
            if i != j {
                worst = worst.max((spec.distance(*x, *p) - lambda).abs());
            }
        }
    }
    Ok(worst)
}

/// Circle through the six side midpoints of a triangle and its antitriangle.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct SixPointCircle {
    pub center: Vec2,
    pub radius: f64,
    pub max_defect: f64,
}

/// Center `q`, radius `lambda / 2`, and the worst distance defect of
/// `m1, m2, m3, d1, d2, d3`.
pub fn six_point_circle(spec: &NormSpec, cfg: &OrthocentricConfig) -> Result<SixPointCircle> {
    let lambda = cfg.require_lambda()?;
    let radius = 0.5 * lambda;
    let max_defect = cfg
        .midpoints()
        .iter()
        .map(|m| (spec.distance(cfg.q, *m) - radius).abs())
        .fold(0.0, f64::max);
    Ok(SixPointCircle {
        center: cfg.q,
        radius,
        max_defect,
    })
}

/// Orthocenters of `tri`: the `H_{g,-2}` images of its circumcenters.
pub fn orthocenters(spec: &NormSpec, tri: &Triangle, params: &SearchParams) -> Result<Vec<Vec2>> {
    let g = tri.barycenter();
    let set = circumcenters(spec, tri, params)?;
    Ok(set
        .centers
        .iter()
        .map(|c| homothety_minus2(g, *c))
        .collect())
}

/// Why a quadruple is orthocentric: `points[index]` is the orthocenter of the
/// other three associated with `circumcenter`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Witness {
    /// Zero-based position in the input quadruple.
    pub index: usize,
    pub circumcenter: Vec2,
    pub radius: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "verdict", rename_all = "snake_case")]
pub enum OrthocentricVerdict {
    Orthocentric(Witness),
    NotOrthocentric,
    Indeterminate { reason: String },
}

/// Decides whether one of the four points is a C-orthocenter of the other three.
///
/// For each choice of `p_i`, the only circumcenter that can have `p_i` as its
/// orthocenter is `(p_j + p_k + p_l - p_i) / 2`; that candidate is checked
/// first, then the circumcenters found by the solver.
pub fn is_orthocentric_system(
    spec: &NormSpec,
    points: [Vec2; 4],
    params: &SearchParams,
) -> OrthocentricVerdict {
    if points.iter().any(|p| !p.is_finite()) {
        return OrthocentricVerdict::Indeterminate {
            reason: "non-finite point".into(),
        };
    }
    let scale = points.iter().map(|p| p.max_abs()).fold(1.0, f64::max);
    for i in 0..4 {
        for j in i + 1..4 {
            if points[i].euclid_dist(points[j]) <= 1e-12 * scale {
                return OrthocentricVerdict::Indeterminate {
                    reason: "degenerate: duplicate points".into(),
                };
            }
        }
    }
    let mut failure = None;
    for i in 0..4 {
        let others: Vec<Vec2> = (0..4).filter(|&k| k != i).map(|k| points[k]).collect();
        let tri = match Triangle::new(others[0], others[1], others[2]) {
            Ok(t) => t,
            Err(e) => {
                failure = Some(e.to_string());
                continue;
            }
        };
        if tri.is_collinear() {
            continue;
        }
        let sum = others[0] + others[1] + others[2];
        let candidate = (sum - points[i]) * 0.5;
        let radius = spec.distance(candidate, tri.a);
        if circumcenter_residual(spec, &tri, candidate) <= DEFAULT_TOL * (1.0 + radius) {
            return OrthocentricVerdict::Orthocentric(Witness {
                index: i,
                circumcenter: candidate,
                radius,
            });
        }
        match circumcenters(spec, &tri, params) {
            Ok(set) => {
                for (c, r) in set.centers.iter().zip(&set.radius_at) {
                    let orth = sum - *c * 2.0;
                    if orth.euclid_dist(points[i]) <= 1e-8 * (1.0 + scale) {
                        return OrthocentricVerdict::Orthocentric(Witness {
                            index: i,
                            circumcenter: *c,
                            radius: *r,
                        });
                    }
                }
            }
            Err(e) => failure = Some(e.to_string()),
        }
    }
    match failure {
        Some(reason) => OrthocentricVerdict::Indeterminate { reason },
        None => OrthocentricVerdict::NotOrthocentric,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn v(x: f64, y: f64) -> Vec2 {
        Vec2::new(x, y)
    }

    fn near(a: Vec2, b: Vec2) -> bool {
        (a - b).max_abs() <= 1e-12
    }

    #[test]
    fn symmetry_and_homothety_examples() {
        assert_eq!(point_symmetry(v(1.0, 1.0), v(3.0, 0.0)), v(-1.0, 2.0));
        let w = v(7.0, 7.0);
        assert_eq!(point_symmetry(w, w), w);
        let p = v(0.5, -2.0);
        assert_eq!(point_symmetry(p, point_symmetry(p, w)), w);
        assert_eq!(homothety_minus2(Vec2::ZERO, v(1.0, 2.0)), v(-2.0, -4.0));
        assert_eq!(homothety_minus2(w, w), w);
        assert!(near(
            homothety_minus2(v(4.0 / 3.0, 1.0), v(1.0, 1.0)),
            v(2.0, 1.0)
        ));
    }

    #[test]
    fn antitriangle_right_triangle() {
        let c = antitriangle(v(0.0, 0.0), v(4.0, 0.0), v(0.0, 3.0), v(1.0, 1.0));
        assert_eq!([c.m1, c.m2, c.m3], [v(2.0, 1.5), v(0.0, 1.5), v(2.0, 0.0)]);
        assert_eq!(
            [c.p1, c.p2, c.p3],
            [v(3.0, 2.0), v(-1.0, 2.0), v(3.0, -1.0)]
        );
        assert_eq!(c.q, v(1.5, 1.0));
        assert_eq!(c.x4, v(2.0, 1.0));
        assert!(near(c.g, v(4.0 / 3.0, 1.0)));
        assert!(near(c.g1, v(5.0 / 3.0, 1.0)));
        assert!(c.lambda.is_none());
        assert!(!c.degenerate);
    }

    #[test]
    fn antitriangle_total_degeneracy() {
        let c = antitriangle(Vec2::ZERO, Vec2::ZERO, Vec2::ZERO, Vec2::ZERO);
        for p in c
            .base()
            .iter()
            .chain(c.anti().iter())
            .chain(c.midpoints().iter())
        {
            assert_eq!(*p, Vec2::ZERO);
        }
        assert_eq!(c.q, Vec2::ZERO);
        assert!(c.degenerate);
    }

    #[test]
    fn antitriangle_of_symmetric_instance() {
        let s2 = 2f64.sqrt();
        let c = antitriangle(v(1.0, 0.0), v(-1.0, 0.0), v(0.0, 1.0 + s2), v(0.0, 1.0));
        assert!(near(c.q, v(0.0, s2 / 2.0)));
        assert!(near(c.p1, v(-1.0, s2)));
        assert!(near(c.p2, v(1.0, s2)));
        assert!(near(c.p3, v(0.0, -1.0)));
        assert!(near(c.x4, v(0.0, s2 - 1.0)));
    }

    #[test]
    fn orthocenter_examples() {
        let e = NormSpec::euclidean();
        let tri = Triangle::new(v(0.0, 0.0), v(4.0, 0.0), v(0.0, 3.0)).unwrap();
        let c = orthocenter_from_circumcenter(&e, &tri, v(2.0, 1.5)).unwrap();
        assert_eq!(c.x4, Vec2::ZERO);
        assert_eq!(c.lambda, Some(2.5));

        let l1 = NormSpec::l1();
        let tri = Triangle::new(v(1.0, 0.0), v(-1.0, 0.0), v(0.0, 1.0)).unwrap();
        let c = orthocenter_from_circumcenter(&l1, &tri, Vec2::ZERO).unwrap();
        assert_eq!(c.x4, v(0.0, 1.0));
        assert_eq!(c.lambda, Some(1.0));
        for p in [c.p1, c.p2, c.p3] {
            assert!((l1.distance(c.x4, p) - 1.0).abs() < 1e-15);
        }
    }

    #[test]
    fn equilateral_orthocenter_is_barycenter() {
        let n = NormSpec::lp(3.0).unwrap();
        let pts: Vec<Vec2> = (0..3)
            .map(|k| Vec2::from_angle(0.2 + k as f64 * std::f64::consts::TAU / 3.0))
            .collect();
        let g = (pts[0] + pts[1] + pts[2]) / 3.0;
        let cfg = antitriangle(pts[0], pts[1], pts[2], g);
        assert!((cfg.x4 - g).max_abs() < 1e-15);
        // only the affine identity holds here; g is not an lp(3) circumcenter
        let tri = Triangle::new(pts[0], pts[1], pts[2]).unwrap();
        assert!(orthocenter_from_circumcenter(&NormSpec::euclidean(), &tri, g).is_ok());
        assert!(orthocenter_from_circumcenter(&n, &tri, g).is_err());
    }

    #[test]
    fn orthocenter_rejects_non_circumcenter_and_collinear() {
        let e = NormSpec::euclidean();
        let tri = Triangle::new(v(0.0, 0.0), v(4.0, 0.0), v(0.0, 3.0)).unwrap();
        assert!(matches!(
            orthocenter_from_circumcenter(&e, &tri, v(2.1, 1.5)),
            Err(GeomError::Precondition(_))
        ));
        let flat = Triangle::new(v(0.0, 0.0), v(1.0, 0.0), v(2.0, 0.0)).unwrap();
        assert!(matches!(
            orthocenter_from_circumcenter(&e, &flat, v(1.0, 5.0)),
            Err(GeomError::Degenerate(_))
        ));
    }

    #[test]
    fn three_circles_examples() {
        let e = NormSpec::euclidean();
        let tri = Triangle::new(v(0.0, 0.0), v(4.0, 0.0), v(0.0, 3.0)).unwrap();
        let c = orthocenter_from_circumcenter(&e, &tri, v(2.0, 1.5)).unwrap();
        assert!(three_circles_check(&e, &c).unwrap() <= 1e-12);

        let linf = NormSpec::linf();
        let tri = Triangle::new(v(1.0, 0.3), v(-0.4, 1.0), v(-1.0, -0.2)).unwrap();
        let c = orthocenter_from_circumcenter(&linf, &tri, Vec2::ZERO).unwrap();
        assert!(three_circles_check(&linf, &c).unwrap() <= 1e-9);

        // p4 moved off the circumcenter: lambda forced, defect appears
        let mut bad = antitriangle(v(0.0, 0.0), v(4.0, 0.0), v(0.0, 3.0), v(2.1, 1.5));
        bad.lambda = Some(2.5);
        assert!(three_circles_check(&e, &bad).unwrap() > 0.05);
        let unset = antitriangle(v(0.0, 0.0), v(4.0, 0.0), v(0.0, 3.0), v(2.0, 1.5));
        assert!(three_circles_check(&e, &unset).is_err());
    }

    #[test]
    fn six_point_examples() {
        let e = NormSpec::euclidean();
        let tri = Triangle::new(v(0.0, 0.0), v(4.0, 0.0), v(0.0, 3.0)).unwrap();
        let c = orthocenter_from_circumcenter(&e, &tri, v(2.0, 1.5)).unwrap();
        let s = six_point_circle(&e, &c).unwrap();
        assert_eq!(s.center, v(1.0, 0.75));
        assert_eq!(s.radius, 1.25);
        assert!(s.max_defect <= 1e-15);

        let l1 = NormSpec::l1();
        let tri = Triangle::new(v(1.0, 0.0), v(-1.0, 0.0), v(0.0, 1.0)).unwrap();
        let c = orthocenter_from_circumcenter(&l1, &tri, Vec2::ZERO).unwrap();
        let s = six_point_circle(&l1, &c).unwrap();
        assert_eq!(s.radius, 0.5);
        assert!(s.max_defect <= 1e-12);

        let off = antitriangle(v(0.0, 0.0), v(4.0, 0.0), v(0.0, 3.0), v(1.0, 1.0));
        assert!(matches!(
            six_point_circle(&e, &off),
            Err(GeomError::Precondition(_))
        ));
    }

    #[test]
    fn orthocentric_system_examples() {
        let e = NormSpec::euclidean();
        let p = SearchParams::default();
        let s2 = 2f64.sqrt();
        let quad = [v(-1.0, s2), v(1.0, s2), v(0.0, -1.0), v(0.0, 1.0)];
        match is_orthocentric_system(&e, quad, &p) {
            OrthocentricVerdict::Orthocentric(w) => {
                let others: Vec<Vec2> = (0..4).filter(|&k| k != w.index).map(|k| quad[k]).collect();
                let orth = others[0] + others[1] + others[2] - w.circumcenter * 2.0;
                assert!((orth - quad[w.index]).max_abs() < 1e-12);
            }
            other => panic!("expected orthocentric, got {other:?}"),
        }
        let line = [v(0.0, 0.0), v(1.0, 0.0), v(2.5, 0.0), v(4.0, 0.0)];
        assert_eq!(
            is_orthocentric_system(&e, line, &p),
            OrthocentricVerdict::NotOrthocentric
        );
        let dup = [v(4.0, 0.0), v(0.0, 3.0), v(0.0, 0.0), v(0.0, 0.0)];
        assert!(matches!(
            is_orthocentric_system(&e, dup, &p),
            OrthocentricVerdict::Indeterminate { .. }
        ));
        let generic = [v(0.0, 0.0), v(3.0, 0.2), v(1.0, 2.0), v(5.0, 5.0)];
        assert_eq!(
            is_orthocentric_system(&e, generic, &p),
            OrthocentricVerdict::NotOrthocentric
        );
    }

    #[test]
    fn euler_line_images_are_orthocenters() {
        let p = SearchParams::default();
        for spec in [
            NormSpec::euclidean(),
            NormSpec::lp(1.5).unwrap(),
            NormSpec::lp(4.0).unwrap(),
        ] {
            let tri = Triangle::new(v(0.0, 0.0), v(3.0, 0.5), v(1.0, 2.0)).unwrap();
            let hs = orthocenters(&spec, &tri, &p).unwrap();
            assert_eq!(hs.len(), 1);
            let quad = [tri.a, tri.b, tri.c, hs[0]];
            // any of the four may serve as witness
            match is_orthocentric_system(&spec, quad, &p) {
                OrthocentricVerdict::Orthocentric(w) => {
                    let others: Vec<Vec2> =
                        (0..4).filter(|&k| k != w.index).map(|k| quad[k]).collect();
                    let t = Triangle::new(others[0], others[1], others[2]).unwrap();
                    assert!(circumcenter_residual(&spec, &t, w.circumcenter) < 1e-8);
                }
                other => panic!("expected orthocentric, got {other:?}"),
            }
            let cfg = orthocenter_from_circumcenter(
                &spec,
                &tri,
                circumcenters(&spec, &tri, &p).unwrap().centers[0],
            )
            .unwrap();
            assert!((cfg.x4 - hs[0]).max_abs() < 1e-12);
        }
    }

    #[test]
    fn config_json_has_explicit_null_lambda() {
        let c = antitriangle(v(0.0, 0.0), v(4.0, 0.0), v(0.0, 3.0), v(1.0, 1.0));
        let j = serde_json::to_value(&c).unwrap();
        assert!(j["lambda"].is_null());
        assert_eq!(j["x4"], serde_json::json!([2.0, 1.0]));
    }
}
