//! Euclideanity detectors.
//!
//! Every detector samples C-orthocentric systems built from an isosceles
//! orthogonal pair `x, y` (with `p4 = y`, `p3 = -y`, `x1 = x`, `x2 = -x`,
//! `lambda = ||x + y||`) and measures how far a property that holds in every
//! Euclidean plane is from holding. All defects are divided by `lambda`, so
//! they are scale invariant. In a Euclidean plane every detector vanishes;
//! a non-Euclidean norm makes at least one of them positive somewhere, but a
//! finite sweep can only ever report "consistent with Euclidean".
//!
//! | detector | property checked |
//! |----------|------------------|
//! | T2  | `(p_i - p_j)` Birkhoff orthogonal to `(p_k - p_l)` |
//! | T3  | `p4` on the line through `p3` and `(p1 + p2)/2` |
//! | T4  | `||p3 - p1|| = ||p3 - p2||` for the explicit points `p1,2 = lambda y/||y|| -+ x` |
//! | T5a | `p4` on the line of the Busemann bisector of `[p3,p1>`, `[p3,p2>` |
//! | T5b | `||p3 - p1|| = ||p3 - p2||` once `p4` is forced onto that bisector line |

use std::f64::consts::TAU;
use std::fmt;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::busemann::{busemann_bisector, line_membership_defect, signed_side};
use crate::error::{GeomError, Result};
use crate::exec::Execution;
use crate::orthocentric::point_symmetry;
use crate::orthogonality::{birkhoff_defect, isosceles_defect, isosceles_partner};
use crate::plane::{random_vector, Circle, NormSpec, Vec2, DEFAULT_TOL};
use crate::search::bisect;

/// Tolerance for the instance invariants and detector preconditions.
pub const INSTANCE_TOL: f64 = 1e-8;

/// Which arc of `C(p4, lambda)` between `x1` and `x2` hosts `x3`.
///
/// `Plus` is swept counterclockwise around `p4` from `x1` to `x2`, i.e. it
/// lies on the right of the directed chord `x1 -> x2`; `Minus` is the other.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ArcChoice {
    Plus,
    Minus,
}

/// An orthocentric system built from an isosceles orthogonal pair.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Lemma1Instance {
    pub x: Vec2,
    pub y: Vec2,
    pub lambda: f64,
    pub arc: ArcChoice,
    pub x1: Vec2,
    pub x2: Vec2,
    pub x3: Vec2,
    pub x4: Vec2,
    pub p1: Vec2,
    pub p2: Vec2,
    pub p3: Vec2,
    pub p4: Vec2,
    pub q: Vec2,
}

/// Worst deviation of each invariant group of a [`Lemma1Instance`].
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct InstanceDefects {
    /// `| ||x+y|| - ||x-y|| |`
    pub isosceles: f64,
    /// `x3` on `C(p4, lambda)` and equidistant from `x1`, `x2`.
    pub circle: f64,
    /// `| ||q|| - lambda/2 |`
    pub q_norm: f64,
    /// `||x1-p2||`, `||x2-p1||`, `||p3-x4||` against `lambda`.
    pub memberships: f64,
}

impl InstanceDefects {
    pub fn max(&self) -> f64 {
        self.isosceles
            .max(self.circle)
            .max(self.q_norm)
            .max(self.memberships)
    }
}

impl Lemma1Instance {
    /// The orthocentric system `{p1, p2, p3, p4}`.
    pub fn quadruple(&self) -> [Vec2; 4] {
        [self.p1, self.p2, self.p3, self.p4]
    }

    pub fn defects(&self, spec: &NormSpec) -> InstanceDefects {
        let l = self.lambda;
        let d = |a: Vec2, b: Vec2| spec.distance(a, b);
        InstanceDefects {
            isosceles: isosceles_defect(spec, self.x, self.y),
            circle: (d(self.x3, self.p4) - l)
                .abs()
                .max((d(self.x1, self.x3) - d(self.x2, self.x3)).abs()),
            q_norm: (spec.norm(self.q) - 0.5 * l).abs(),
            memberships: [
                d(self.x1, self.p2),
                d(self.x2, self.p1),
                d(self.p3, self.x4),
            ]
            .iter()
            .map(|v| (v - l).abs())
            .fold(0.0, f64::max),
        }
    }
}

fn check_pair(spec: &NormSpec, x: Vec2, y: Vec2) -> Result<f64> {
    x.ensure_finite("x")?;
    y.ensure_finite("y")?;
    if x == Vec2::ZERO || y == Vec2::ZERO {
        return Err(GeomError::Precondition("x and y must be nonzero".into()));
    }
    let lambda = spec.norm(x + y);
    let iso = isosceles_defect(spec, x, y);
    if iso > DEFAULT_TOL * lambda.max(1.0) {
        return Err(GeomError::Precondition(format!(
            "x is not isosceles orthogonal to y (defect {iso:.3e})"
        )));
    }
    Ok(lambda)
}

/// Counterclockwise angular span from `from` to `to`, or the clockwise one.
fn sweep(from: f64, to: f64, ccw: bool) -> f64 {
    if ccw {
        (to - from).rem_euclid(TAU)
    } else {
        -(from - to).rem_euclid(TAU)
    }
}

/// Builds the orthocentric system for `x` isosceles orthogonal to `y`.
///
/// `x3` is the point of the chosen arc of `C(p4, lambda)` equidistant from
/// `x1` and `x2`, found by bisection on `||x2 - x3|| - ||x1 - x3||`, which is
/// positive at `x1` and negative at `x2`.
pub fn lemma1_construct(
    spec: &NormSpec,
    x: Vec2,
    y: Vec2,
    arc: ArcChoice,
) -> Result<Lemma1Instance> {
    let lambda = check_pair(spec, x, y)?;
    let (x1, x2, p3, p4) = (x, -x, -y, y);
    let circle = Circle::new(p4, lambda)?;
    let start = (x1 - p4).angle();
    let span = sweep(start, (x2 - p4).angle(), arc == ArcChoice::Plus);
    let point = |s: f64| spec.circle_point(&circle, start + s * span);
    let f = |s: f64| {
        let w = point(s);
        spec.distance(x2, w) - spec.distance(x1, w)
    };
    let s = bisect(f, 0.0, 1.0).ok_or_else(|| {
        GeomError::Numerical(format!(
            "no equidistant point on the {arc:?} arc (f(0) = {:.3e}, f(1) = {:.3e})",
            f(0.0),
            f(1.0)
        ))
    })?;
    let x3 = point(s);
    let q = p3.midpoint(x3);
    let inst = Lemma1Instance {
        x,
        y,
        lambda,
        arc,
        x1,
        x2,
        x3,
        x4: point_symmetry(q, p4),
        p1: point_symmetry(q, x1),
        p2: point_symmetry(q, x2),
        p3,
        p4,
        q,
    };
    let defects = inst.defects(spec);
    if defects.max() > INSTANCE_TOL {
        return Err(GeomError::Numerical(format!(
            "instance invariants violated: {defects:?}"
        )));
    }
    Ok(inst)
}

/// Position of the line `<p1, p2>` relative to `L1 = <S_{x1}(p3), S_{x2}(p3)>`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Separation {
    /// `p3` and `<p1, p2>` lie on opposite sides of `L1`.
    Separated,
    /// `<p1, p2>` coincides with `L1`.
    OnL1,
    SameSide,
}

/// Diagnostic describing the instance geometry; not a detector.
pub fn arc_separation(inst: &Lemma1Instance) -> Separation {
    let a = point_symmetry(inst.x1, inst.p3);
    let b = point_symmetry(inst.x2, inst.p3);
    let dir = b - a;
    let s_line = signed_side(inst.p1, a, dir);
    let s_p3 = signed_side(inst.p3, a, dir);
    if s_line.abs() <= INSTANCE_TOL * inst.lambda.max(1.0) {
        Separation::OnL1
    } else if s_line.signum() != s_p3.signum() {
        Separation::Separated
    } else {
        Separation::SameSide
    }
}

/// The six ordered pairings `(i, j | k, l)` of `{1,2,3,4}`, as zero-based indices.
pub const T2_PAIRINGS: [[usize; 4]; 6] = [
    [0, 1, 2, 3],
    [2, 3, 0, 1],
    [0, 2, 1, 3],
    [1, 3, 0, 2],
    [0, 3, 1, 2],
    [1, 2, 0, 3],
];

/// `birkhoff_defect(p_i - p_j, p_k - p_l) / ||p_i - p_j||` for each entry of
/// [`T2_PAIRINGS`]. Birkhoff orthogonality is not symmetric, so both orders
/// of each pair are measured.
pub fn t2_pairings(spec: &NormSpec, inst: &Lemma1Instance) -> Result<[f64; 6]> {
    let p = inst.quadruple();
    let mut out = [0.0; 6];
    for (slot, [i, j, k, l]) in out.iter_mut().zip(T2_PAIRINGS) {
        let u = p[i] - p[j];
        let w = p[k] - p[l];
        let nu = spec.norm(u);
        if nu <= INSTANCE_TOL * inst.lambda {
            return Err(GeomError::Degenerate(
                "coincident points in the system".into(),
            ));
        }
        *slot = birkhoff_defect(spec, u, w)? / nu;
    }
    Ok(out)
}

/// T2: worst Birkhoff defect between opposite sides of the system.
pub fn detector_t2(spec: &NormSpec, inst: &Lemma1Instance) -> Result<f64> {
    Ok(t2_pairings(spec, inst)?.into_iter().fold(0.0, f64::max))
}

fn equal_legs(spec: &NormSpec, inst: &Lemma1Instance) -> Result<()> {
    let gap = (spec.distance(inst.p3, inst.p1) - spec.distance(inst.p3, inst.p2)).abs();
    if gap > INSTANCE_TOL * inst.lambda.max(1.0) {
        return Err(GeomError::Precondition(format!(
            "||p3-p1|| != ||p3-p2|| (gap {gap:.3e})"
        )));
    }
    Ok(())
}

/// T3: distance of `p4` from the line `<p3, (p1+p2)/2>`, over `lambda`.
pub fn detector_t3(spec: &NormSpec, inst: &Lemma1Instance) -> Result<f64> {
    equal_legs(spec, inst)?;
    let mid = inst.p1.midpoint(inst.p2);
    if mid.euclid_dist(inst.p3) <= 1e-12 * inst.lambda {
        return Err(GeomError::Degenerate("p3 coincides with (p1+p2)/2".into()));
    }
    Ok(line_membership_defect(inst.p4, inst.p3, mid)? / inst.lambda)
}

/// T4: leg inequality for `p1 = lambda y/||y|| - x`, `p2 = lambda y/||y|| + x`,
/// `p3 = -y`, over `lambda`. Equals the isosceles defect of `x` and
/// `(1 + lambda/||y||) y`, divided by `lambda`.
pub fn detector_t4(spec: &NormSpec, x: Vec2, y: Vec2) -> Result<f64> {
    let lambda = check_pair(spec, x, y)?;
    let top = y * (lambda / spec.norm(y));
    let (p1, p2, p3) = (top - x, top + x, -y);
    Ok((spec.distance(p3, p1) - spec.distance(p3, p2)).abs() / lambda)
}

/// T5a: distance of `p4` from the line carrying the Busemann bisector of
/// `[p3, p1>` and `[p3, p2>`, over `lambda`.
pub fn detector_t5a(spec: &NormSpec, inst: &Lemma1Instance) -> Result<f64> {
    equal_legs(spec, inst)?;
    let ray = busemann_bisector(spec, inst.p3, inst.p1, inst.p2)?;
    Ok(line_membership_defect(inst.p4, ray.origin, ray.through)? / inst.lambda)
}

/// System in which `p4` lies on the line of the Busemann bisector at `p3`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct BisectorAligned {
    pub lambda: f64,
    pub x3: Vec2,
    pub q: Vec2,
    pub p1: Vec2,
    pub p2: Vec2,
    pub p3: Vec2,
    pub p4: Vec2,
}

/// Moves `x3` along the arc of `C(p4, lambda)` between `S_{p4}(x1)` and
/// `S_{p4}(x2)` that avoids `x1`, and bisects on the signed side of `p4`
/// relative to the bisector line. At the two ends `p2 = p4` and `p1 = p4`
/// respectively, so the side changes sign.
pub fn bisector_aligned_instance(spec: &NormSpec, x: Vec2, y: Vec2) -> Result<BisectorAligned> {
    let lambda = check_pair(spec, x, y)?;
    let (x1, x2, p3, p4) = (x, -x, -y, y);
    let circle = Circle::new(p4, lambda)?;
    let start = (point_symmetry(p4, x1) - p4).angle();
    let end = (point_symmetry(p4, x2) - p4).angle();
    let avoid = (x1 - p4).angle();
    let ccw_span = sweep(start, end, true);
    let span = if (avoid - start).rem_euclid(TAU) < ccw_span {
        sweep(start, end, false)
    } else {
        ccw_span
    };
    let system = |s: f64| {
        let x3 = spec.circle_point(&circle, start + s * span);
        let q = p3.midpoint(x3);
        (x3, q, point_symmetry(q, x1), point_symmetry(q, x2))
    };
    let side = |s: f64| {
        let (_, _, p1, p2) = system(s);
        let u = p1 - p3;
        let v = p2 - p3;
        let nu = spec.norm(u);
        let nv = spec.norm(v);
        if nu == 0.0 || nv == 0.0 {
            // p1 or p2 sits on p3: use the other leg alone
            let w = if nu == 0.0 { v } else { u };
            return signed_side(p4, p3, w);
        }
        let dir = u / nu + v / nv;
        if dir.euclid_len() <= 1e-14 {
            return f64::NAN;
        }
        signed_side(p4, p3, dir)
    };
    let s = bisect(side, 0.0, 1.0)
        .ok_or_else(|| GeomError::Numerical("bisector never sweeps across p4".into()))?;
    let residual = side(s);
    if residual.is_nan() || residual.abs() > INSTANCE_TOL * lambda.max(1.0) {
        return Err(GeomError::Numerical(format!(
            "bisector alignment jumped instead of crossing p4 (residual {residual:.3e})"
        )));
    }
    let (x3, q, p1, p2) = system(s);
    Ok(BisectorAligned {
        lambda,
        x3,
        q,
        p1,
        p2,
        p3,
        p4,
    })
}

/// T5b: leg inequality `| ||p3-p1|| - ||p3-p2|| | / lambda` of the
/// bisector-aligned system.
pub fn detector_t5b(spec: &NormSpec, x: Vec2, y: Vec2) -> Result<f64> {
    let a = bisector_aligned_instance(spec, x, y)?;
    Ok((spec.distance(a.p3, a.p1) - spec.distance(a.p3, a.p2)).abs() / a.lambda)
}

/// Detector names in report order.
pub const DETECTORS: [&str; 5] = ["T2", "T3", "T4", "T5a", "T5b"];

/// Aggregated values of one detector.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DetectorStats {
    pub name: String,
    pub max: f64,
    pub mean: f64,
    pub n: usize,
    /// Evaluations skipped because the instance was degenerate for this
    /// detector or its construction failed.
    pub excluded: usize,
}

/// Per-norm detector statistics over a seeded sample sweep.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DetectorReport {
    pub norm_id: String,
    pub samples: usize,
    pub seed: u64,
    pub constructions_attempted: usize,
    pub construction_failures: usize,
    pub detectors: Vec<DetectorStats>,
}

/// One line of the sweep summary.
#[derive(Clone, Debug, PartialEq)]
pub struct Verdict {
    pub detector: String,
    pub max: f64,
    pub tau: f64,
}

impl Verdict {
    pub fn consistent(&self) -> bool {
        self.max <= self.tau
    }
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.consistent() {
            write!(
                f,
                "{}: consistent with Euclidean (max defect {:.3e} <= {:.1e})",
                self.detector, self.max, self.tau
            )
        } else {
            write!(
                f,
                "{}: non-Euclidean signature (max defect {:.3e} >= {:.1e})",
                self.detector, self.max, self.tau
            )
        }
    }
}

#[derive(Serialize)]
struct CsvRow<'a> {
    name: &'a str,
    max: f64,
    mean: f64,
    n: usize,
    excluded: usize,
}

impl DetectorReport {
    pub fn detector(&self, name: &str) -> Option<&DetectorStats> {
        self.detectors.iter().find(|d| d.name == name)
    }

    /// Largest max defect over all detectors.
    pub fn worst(&self) -> f64 {
        self.detectors.iter().map(|d| d.max).fold(0.0, f64::max)
    }

    pub fn verdicts(&self, tau: f64) -> Vec<Verdict> {
        self.detectors
            .iter()
            .map(|d| Verdict {
                detector: d.name.clone(),
                max: d.max,
                tau,
            })
            .collect()
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes") + "\n"
    }

    /// One row per detector: `name,max,mean,n,excluded`.
    pub fn to_csv(&self) -> Result<String> {
        let mut w = csv::Writer::from_writer(Vec::new());
        for d in &self.detectors {
            w.serialize(CsvRow {
                name: &d.name,
                max: d.max,
                mean: d.mean,
                n: d.n,
                excluded: d.excluded,
            })
            .map_err(|e| GeomError::Numerical(format!("csv: {e}")))?;
        }
        let bytes = w
            .into_inner()
            .map_err(|e| GeomError::Numerical(format!("csv: {e}")))?;
        Ok(String::from_utf8(bytes).expect("csv output is utf-8"))
    }
}

/// Settings of a detector sweep.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ReportParams {
    pub samples: usize,
    pub seed: u64,
    /// Magnitudes of `x` and `y` are log-uniform in this range.
    pub magnitude: (f64, f64),
    pub exec: Execution,
}

impl ReportParams {
    pub fn new(samples: usize, seed: u64) -> Self {
        Self {
            samples,
            seed,
            magnitude: (0.1, 10.0),
            exec: Execution::default(),
        }
    }
}

/// Outcome of one detector on one sample: `None` = excluded.
#[derive(Default)]
struct SampleOutcome {
    values: [Vec<Option<f64>>; 5],
    attempted: usize,
    failed: usize,
}

/// The isosceles orthogonal pair drawn for sample `index`.
pub fn sample_pair(spec: &NormSpec, params: &ReportParams, index: usize) -> Result<(Vec2, Vec2)> {
    let mut rng = ChaCha8Rng::seed_from_u64(params.seed);
    rng.set_stream(index as u64);
    let (lo, hi) = params.magnitude;
    let x = random_vector(&mut rng, lo, hi);
    let r = rng.gen_range(lo.ln()..hi.ln()).exp();
    let flip: bool = rng.gen();
    let y = isosceles_partner(spec, x, r)?;
    Ok((x, if flip { -y } else { y }))
}

fn evaluate_sample(spec: &NormSpec, params: &ReportParams, index: usize) -> SampleOutcome {
    let mut out = SampleOutcome {
        // partner + two arcs + bisector alignment
        attempted: 4,
        ..Default::default()
    };
    let (x, y) = match sample_pair(spec, params, index) {
        Ok(pair) => pair,
        Err(_) => {
            out.failed = out.attempted;
            for v in out.values.iter_mut() {
                v.push(None);
            }
            return out;
        }
    };
    for arc in [ArcChoice::Plus, ArcChoice::Minus] {
        match lemma1_construct(spec, x, y, arc) {
            Ok(inst) => {
                out.values[0].push(detector_t2(spec, &inst).ok());
                out.values[1].push(detector_t3(spec, &inst).ok());
                out.values[3].push(detector_t5a(spec, &inst).ok());
            }
            Err(_) => {
                out.failed += 1;
                for k in [0, 1, 3] {
                    out.values[k].push(None);
                }
            }
        }
    }
    out.values[2].push(detector_t4(spec, x, y).ok());
    match detector_t5b(spec, x, y) {
        Ok(v) => out.values[4].push(Some(v)),
        Err(_) => {
            out.failed += 1;
            out.values[4].push(None);
        }
    }
    out
}

/// Runs all five detectors over `samples` seeded draws (parallel when enabled).
pub fn euclideanity_report(spec: &NormSpec, samples: usize, seed: u64) -> Result<DetectorReport> {
    euclideanity_report_with(spec, &ReportParams::new(samples, seed))
}

pub fn euclideanity_report_with(spec: &NormSpec, params: &ReportParams) -> Result<DetectorReport> {
    if params.samples == 0 {
        return Err(GeomError::Precondition(
            "at least one sample is required".into(),
        ));
    }
    let outcomes = params
        .exec
        .map_indexed(params.samples, |k| evaluate_sample(spec, params, k));
    let attempted: usize = outcomes.iter().map(|o| o.attempted).sum();
    let failed: usize = outcomes.iter().map(|o| o.failed).sum();
    if 2 * failed > attempted {
        return Err(GeomError::Numerical(format!(
            "{failed} of {attempted} constructions failed"
        )));
    }
    let mut detectors = Vec::with_capacity(DETECTORS.len());
    for (k, name) in DETECTORS.iter().enumerate() {
        let (mut max, mut sum, mut n, mut excluded) = (0.0f64, 0.0f64, 0usize, 0usize);
        for v in outcomes.iter().flat_map(|o| o.values[k].iter()) {
            match v {
                Some(v) => {
                    max = max.max(*v);
                    sum += v;
                    n += 1;
                }
                None => excluded += 1,
            }
        }
        if n == 0 {
            return Err(GeomError::Numerical(format!(
                "detector {name} has no valid samples"
            )));
        }
        detectors.push(DetectorStats {
            name: name.to_string(),
            max,
            mean: sum / n as f64,
            n,
            excluded,
        });
    }
    Ok(DetectorReport {
        norm_id: spec.id(),
        samples: params.samples,
        seed: params.seed,
        constructions_attempted: attempted,
        construction_failures: failed,
        detectors,
    })
}
