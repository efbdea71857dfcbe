//! `ortho`: constructions, orthocentric checks and Euclideanity sweeps.
//!
//! Exit codes: 0 success or "true", 1 verified "false", 2 invalid input,
//! 3 numerical failure.

mod scene;
mod svg;

use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use ortho_core::detectors::{arc_separation, bisector_aligned_instance, ReportParams};
use ortho_core::orthocentric::SixPointCircle;
use ortho_core::{
    antitriangle, circumcenters, euclideanity_report_with, isosceles_partner, lemma1_construct,
    orthocenter_from_circumcenter, six_point_circle, three_circles_check, Circle, Execution,
    GeomError, NormSpec, OrthocentricConfig, OrthocentricVerdict, SearchParams, Triangle, Vec2,
};
use serde::Serialize;

use scene::{read_json, ConstructScene, PlotScene, RenderOptions, VerifyScene};
use svg::Figure;

#[derive(Debug)]
pub enum CliError {
    Validation(String),
    Numerical(String),
}

impl CliError {
    fn code(&self) -> u8 {
        match self {
            CliError::Validation(_) => 2,
            CliError::Numerical(_) => 3,
        }
    }
}

impl std::fmt::Display for CliError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            CliError::Validation(m) | CliError::Numerical(m) => f.write_str(m),
        }
    }
}

impl From<GeomError> for CliError {
    fn from(e: GeomError) -> Self {
        match e {
            GeomError::Numerical(_) | GeomError::UndefinedBisector => {
                CliError::Numerical(e.to_string())
            }
            _ => CliError::Validation(e.to_string()),
        }
    }
}

#[derive(Parser)]
#[command(
    name = "ortho",
    version,
    about = "Orthocentric systems in normed planes"
)]
struct Cli {
    /// Seed for every random choice.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Antitriangle, orthocenter and six-point circle of a triangle.
    Construct {
        #[arg(long)]
        scene: PathBuf,
        #[arg(long)]
        svg: Option<PathBuf>,
        /// Configuration JSON; stdout when omitted.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Decide whether four points form an orthocentric system.
    Verify {
        #[arg(long)]
        scene: PathBuf,
    },
    /// Run the Euclideanity detectors over random samples.
    Detect {
        /// Norm JSON file, or the JSON itself.
        #[arg(long)]
        norm: String,
        #[arg(long, default_value_t = 1000)]
        samples: usize,
        #[arg(long, default_value = "report.json")]
        out: PathBuf,
        #[arg(long, default_value = "report.csv")]
        csv: PathBuf,
        /// Defect threshold separating the two verdicts.
        #[arg(long, default_value_t = 1e-7)]
        tau: f64,
        /// Evaluate samples on the calling thread only.
        #[arg(long)]
        sequential: bool,
    },
    /// Draw the orthocentric system built from an isosceles orthogonal pair.
    Plot {
        #[arg(long)]
        scene: PathBuf,
        /// SVG output; stdout when omitted.
        #[arg(long)]
        svg: Option<PathBuf>,
        /// Instance JSON.
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

fn write_file(path: &Path, contents: &str) -> Result<(), CliError> {
    fs::write(path, contents)
        .map_err(|e| CliError::Validation(format!("cannot write {}: {e}", path.display())))
}

fn emit(path: Option<&Path>, contents: &str) -> Result<(), CliError> {
    match path {
        Some(p) => write_file(p, contents),
        None => {
            print!("{contents}");
            Ok(())
        }
    }
}

fn to_json<T: Serialize>(value: &T) -> String {
    serde_json::to_string_pretty(value).expect("output serializes") + "\n"
}

#[derive(Serialize)]
struct ConstructOutput {
    norm: String,
    circumcenter_verified: bool,
    circumcenters_found: Option<usize>,
    config: OrthocentricConfig,
    three_circles_defect: Option<f64>,
    six_point_circle: Option<SixPointCircle>,
}

fn construct(scene: &Path, svg_path: Option<&Path>, out: Option<&Path>) -> Result<u8, CliError> {
    let s: ConstructScene = read_json(scene)?;
    s.render.validate()?;
    let [a, b, c] = s.triangle;
    let tri = Triangle::new(a, b, c)?;
    if tri.is_collinear() {
        return Err(GeomError::Degenerate("collinear".into()).into());
    }
    let mut found = None;
    let cfg = match s.p4 {
        Some(p4) => match orthocenter_from_circumcenter(&s.norm, &tri, p4) {
            Ok(cfg) => cfg,
            Err(GeomError::Precondition(msg)) => {
                eprintln!("warning: {msg}; emitting the plain antitriangle");
                antitriangle(a, b, c, p4)
            }
            Err(e) => return Err(e.into()),
        },
        None => {
            let set = circumcenters(&s.norm, &tri, &SearchParams::default())?;
            set.require_nonempty()?;
            if set.multiple() {
                eprintln!(
                    "warning: {} circumcenters found{}; using the first",
                    set.len(),
                    if set.possibly_continuum {
                        " (possibly a continuum)"
                    } else {
                        ""
                    }
                );
            }
            found = Some(set.len());
            orthocenter_from_circumcenter(&s.norm, &tri, set.centers[0])?
        }
    };
    let verified = cfg.lambda.is_some();
    let output = ConstructOutput {
        norm: s.norm.id(),
        circumcenter_verified: verified,
        circumcenters_found: found,
        three_circles_defect: if verified {
            Some(three_circles_check(&s.norm, &cfg)?)
        } else {
            None
        },
        six_point_circle: if verified {
            Some(six_point_circle(&s.norm, &cfg)?)
        } else {
            None
        },
        config: cfg,
    };
    if let Some(path) = svg_path {
        write_file(path, &construct_figure(&s.norm, &output.config, &s.render)?)?;
    }
    emit(out, &to_json(&output))?;
    Ok(0)
}

fn construct_figure(
    spec: &NormSpec,
    cfg: &OrthocentricConfig,
    r: &RenderOptions,
) -> Result<String, CliError> {
    let mut f = Figure::new(r.size, r.stroke);
    if r.unit_circle {
        f.circle(spec, Circle::new(Vec2::ZERO, 1.0)?, r.samples, "#bbbbbb");
    }
    if let Some(lambda) = cfg.lambda {
        if r.circles {
            f.circle(spec, Circle::new(cfg.p4, lambda)?, r.samples, "#2b6cb0");
            f.circle(spec, Circle::new(cfg.x4, lambda)?, r.samples, "#c05621");
        }
        if r.six_point {
            f.circle(
                spec,
                Circle::new(cfg.q, lambda / 2.0)?,
                r.samples,
                "#2f855a",
            );
        }
    }
    f.polygon(&[cfg.x1, cfg.x2, cfg.x3], "black");
    f.polygon(&[cfg.p1, cfg.p2, cfg.p3], "#6b46c1");
    let named = [
        ("x1", cfg.x1),
        ("x2", cfg.x2),
        ("x3", cfg.x3),
        ("x4", cfg.x4),
        ("p1", cfg.p1),
        ("p2", cfg.p2),
        ("p3", cfg.p3),
        ("p4", cfg.p4),
        ("q", cfg.q),
    ];
    for (name, p) in named {
        f.dot(p, "black");
        if r.labels {
            f.label(p, name);
        }
    }
    Ok(f.render())
}

fn verify(scene: &Path) -> Result<u8, CliError> {
    let s: VerifyScene = read_json(scene)?;
    let verdict = ortho_core::is_orthocentric_system(&s.norm, s.points, &SearchParams::default());
    print!("{}", to_json(&verdict));
    Ok(match verdict {
        OrthocentricVerdict::Orthocentric(_) => 0,
        OrthocentricVerdict::NotOrthocentric => 1,
        OrthocentricVerdict::Indeterminate { .. } => 3,
    })
}

fn parse_norm(arg: &str) -> Result<NormSpec, CliError> {
    if arg.trim_start().starts_with('{') {
        serde_json::from_str(arg).map_err(|e| CliError::Validation(format!("--norm: {e}")))
    } else {
        read_json(Path::new(arg))
    }
}

fn detect(
    norm: &str,
    samples: usize,
    seed: u64,
    out: &Path,
    csv: &Path,
    tau: f64,
    sequential: bool,
) -> Result<u8, CliError> {
    let spec = parse_norm(norm)?;
    if samples == 0 {
        return Err(CliError::Validation("--samples must be at least 1".into()));
    }
    if tau.is_nan() || tau <= 0.0 {
        return Err(CliError::Validation("--tau must be positive".into()));
    }
    let mut params = ReportParams::new(samples, seed);
    if sequential {
        params.exec = Execution::Sequential;
    }
    let report = euclideanity_report_with(&spec, &params)?;
    write_file(out, &report.to_json())?;
    write_file(csv, &report.to_csv()?)?;
    println!(
        "{} over {} samples (seed {}, {} of {} constructions failed)",
        report.norm_id,
        report.samples,
        report.seed,
        report.construction_failures,
        report.constructions_attempted
    );
    for v in report.verdicts(tau) {
        println!("{v}");
    }
    Ok(0)
}

#[derive(Serialize)]
struct PlotOutput {
    norm: String,
    instance: ortho_core::Lemma1Instance,
    separation: ortho_core::detectors::Separation,
}

fn plot(scene: &Path, svg_path: Option<&Path>, out: Option<&Path>) -> Result<u8, CliError> {
    let s: PlotScene = read_json(scene)?;
    s.render.validate()?;
    let spec = &s.norm;
    let y = isosceles_partner(spec, s.x, s.r)?;
    let inst = lemma1_construct(spec, s.x, y, s.arc)?;
    let r = &s.render;
    let mut f = Figure::new(r.size, r.stroke);
    if r.unit_circle {
        f.circle(spec, Circle::new(Vec2::ZERO, 1.0)?, r.samples, "#bbbbbb");
    }
    if r.circles {
        f.circle(
            spec,
            Circle::new(inst.p4, inst.lambda)?,
            r.samples,
            "#2b6cb0",
        );
        f.circle(
            spec,
            Circle::new(Vec2::ZERO, inst.lambda / 2.0)?,
            r.samples,
            "#2f855a",
        );
    }
    f.polygon(&[inst.x1, inst.x2, inst.x3], "black");
    f.polygon(&[inst.p1, inst.p2, inst.p3], "#6b46c1");
    // L1 through S_{x1}(p3) and S_{x2}(p3)
    let l1a = inst.x1 * 2.0 - inst.p3;
    let l1b = inst.x2 * 2.0 - inst.p3;
    f.segment(l1a, l1b, "#999999", true);
    if let Ok(a) = bisector_aligned_instance(spec, s.x, y) {
        f.segment(a.p3, a.p4, "#c05621", true);
    }
    let named = [
        ("x1", inst.x1),
        ("x2", inst.x2),
        ("x3", inst.x3),
        ("x4", inst.x4),
        ("p1", inst.p1),
        ("p2", inst.p2),
        ("p3", inst.p3),
        ("p4", inst.p4),
        ("q", inst.q),
        ("O", Vec2::ZERO),
    ];
    for (name, p) in named {
        f.dot(p, "black");
        if r.labels {
            f.label(p, name);
        }
    }
    if let Some(path) = out {
        let o = PlotOutput {
            norm: spec.id(),
            instance: inst,
            separation: arc_separation(&inst),
        };
        write_file(path, &to_json(&o))?;
    }
    emit(svg_path, &f.render())?;
    Ok(0)
}

fn run(cli: Cli) -> Result<u8, CliError> {
    match cli.command {
        Command::Construct { scene, svg, out } => construct(&scene, svg.as_deref(), out.as_deref()),
        Command::Verify { scene } => verify(&scene),
        Command::Detect {
            norm,
            samples,
            out,
            csv,
            tau,
            sequential,
        } => detect(&norm, samples, cli.seed, &out, &csv, tau, sequential),
        Command::Plot { scene, svg, out } => plot(&scene, svg.as_deref(), out.as_deref()),
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.code())
        }
    }
}
