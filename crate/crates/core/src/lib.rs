//! Orthocentric systems and circumcenters in normed planes.
//!
//! The crate works in a two-dimensional real normed space given by a
//! [`NormSpec`]: `l_p` norms, centrally symmetric polygons, or a user gauge.
//! It computes isosceles and Birkhoff orthogonality defects, all
//! circumcenters of a triangle, C-orthocenters and their antitriangle,
//! Busemann bisectors, and a family of numerical detectors whose defects
//! vanish in Euclidean planes.
//!
//! Coordinates are fixed; the norm is the only metric. Collinearity and
//! midpoints are affine and need no metric.

pub mod busemann;
pub mod circumcenter;
pub mod detectors;
pub mod error;
pub mod exec;
pub mod orthocentric;
pub mod orthogonality;
pub mod plane;
mod search;

pub use busemann::{busemann_bisector, line_membership_defect, Ray};
pub use circumcenter::{
    bisector_residual, circumcenter_residual, circumcenters, circumradius, CircumcenterSet,
    SearchParams, Triangle,
};
pub use detectors::{
    detector_t2, detector_t3, detector_t4, detector_t5a, detector_t5b, euclideanity_report,
    euclideanity_report_with, lemma1_construct, ArcChoice, DetectorReport, DetectorStats,
    Lemma1Instance, ReportParams,
};
pub use error::{GeomError, Result};
pub use exec::Execution;
pub use orthocentric::{
    antitriangle, is_orthocentric_system, orthocenter_from_circumcenter, orthocenters,
    six_point_circle, three_circles_check, OrthocentricConfig, OrthocentricVerdict, SixPointCircle,
    Witness,
};
pub use orthogonality::{birkhoff_defect, isosceles_defect, isosceles_partner};
pub use plane::{Circle, NormSpec, Vec2, DEFAULT_TOL};
