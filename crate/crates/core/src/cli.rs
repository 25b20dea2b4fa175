//! Command-line front end: problem files, solution reports and SVG figures.
//!
//! Exit status is 0 when solutions were found, 2 when the input is valid but
//! nothing verifies, and 1 on any error.

use std::fmt::{self, Write as _};
use std::fs;
use std::path::{Path, PathBuf};
use std::str::FromStr;
use std::time::Instant;

use clap::{Parser, Subcommand};
use serde::Deserialize;
use thiserror::Error;
use toml::Spanned;

use crate::geom::{Angle, Circle, GeneralizedCircle, GeomError, Line, Point};
use crate::inversion::{
    concentricity_residual, concentricizing_inversion, Inversion, InversionError,
};
use crate::steiner::{
    concentricize_pair, solve_detailed, AngleSpec, Pair, SignVariant, SolverOptions, SteinerError,
    SteinerProblem,
};
use crate::trace::{all_programs, replay, right_triangle_givens, Object, Trace, TraceError};

pub const EXIT_OK: u8 = 0;
pub const EXIT_ERROR: u8 = 1;
pub const EXIT_NO_SOLUTION: u8 = 2;

const REPORT_HEADER: &str = "steiner-report v1";
const INVERSION_HEADER: &str = "steiner-inversion v1";

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{}: {source}", path.display())]
    Io {
        path: PathBuf,
        source: std::io::Error,
    },
    #[error("{}: {source}", path.display())]
    Parse { path: PathBuf, source: ParseError },
    #[error(transparent)]
    Steiner(#[from] SteinerError),
    #[error(transparent)]
    Inversion(#[from] InversionError),
    #[error(transparent)]
    Geom(#[from] GeomError),
    #[error(transparent)]
    Trace(#[from] TraceError),
    #[error("{0}")]
    Usage(String),
}

/// A diagnostic with the 1-based line it refers to, when known.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub struct ParseError {
    pub line: Option<usize>,
    pub message: String,
}

impl ParseError {
    fn at(line: usize, message: impl Into<String>) -> Self {
        ParseError {
            line: Some(line),
            message: message.into(),
        }
    }

    fn general(message: impl Into<String>) -> Self {
        ParseError {
            line: None,
            message: message.into(),
        }
    }
}

impl fmt::Display for ParseError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.line {
            Some(line) => write!(f, "line {line}: {}", self.message),
            None => f.write_str(&self.message),
        }
    }
}

#[derive(Debug, Parser)]
#[command(
    name = "steiner",
    version,
    about = "Circles meeting three given circles at prescribed angles"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Solve a problem file and write a solution report.
    Solve {
        input: PathBuf,
        /// Report path; standard output when omitted.
        #[arg(short, long)]
        output: Option<PathBuf>,
        /// Try every sign choice, not just the all-plus one.
        #[arg(long)]
        all: bool,
        /// Largest accepted angle residual, radians.
        #[arg(long)]
        tol: Option<f64>,
        /// Pair to concentricize first.
        #[arg(long)]
        pair: Option<Pair>,
        /// Relative degeneracy tolerance.
        #[arg(long)]
        eps: Option<f64>,
        /// Record the solve time in the report.
        #[arg(long)]
        timing: bool,
    },
    /// Draw a problem and its solutions as SVG.
    Render {
        input: PathBuf,
        report: PathBuf,
        #[arg(short, long)]
        output: PathBuf,
        /// Also draw the inversion circle and the inverted configuration.
        #[arg(long)]
        show_inversion: bool,
    },
    /// Apply an inversion, or concentricize a pair of circles.
    Invert {
        input: PathBuf,
        /// Pair to concentricize when the file holds three circles.
        #[arg(long)]
        pair: Option<Pair>,
    },
    /// Print or replay the straightedge-and-compass programs.
    #[command(subcommand)]
    Trace(TraceCommand),
}

#[derive(Debug, Subcommand)]
pub enum TraceCommand {
    /// List the built-in programs.
    List,
    /// Print a built-in program in the trace text format.
    Show { name: String },
    /// Replay a built-in program or a trace file on given points `x,y`.
    Replay {
        program: String,
        #[arg(allow_hyphen_values = true)]
        givens: Vec<String>,
    },
    /// Legs of a right triangle from a hypotenuse and an angle in degrees.
    /// The angle is drawn as a pair of rays before the program runs.
    Legs { hypotenuse: f64, angle_deg: f64 },
}

/// Parses arguments and runs one command, writing to the given streams.
pub fn run<I, T>(args: I, out: &mut dyn std::io::Write, err: &mut dyn std::io::Write) -> u8
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_ERROR } else { EXIT_OK };
            let text = e.render().to_string();
            let _ = if e.use_stderr() {
                err.write_all(text.as_bytes())
            } else {
                out.write_all(text.as_bytes())
            };
            return code;
        }
    };
    match execute(cli.command, out) {
        Ok(code) => code,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            EXIT_ERROR
        }
    }
}

fn execute(command: Command, out: &mut dyn std::io::Write) -> Result<u8, CliError> {
    match command {
        Command::Solve {
            input,
            output,
            all,
            tol,
            pair,
            eps,
            timing,
        } => {
            let mut file = read_problem(&input)?;
            if all {
                file.options.enumerate_all = true;
            }
            if let Some(tol) = tol {
                file.options.tolerance = positive("--tol", tol)?;
            }
            if let Some(eps) = eps {
                file.options.eps_rel = positive("--eps", eps)?;
            }
            if let Some(pair) = pair {
                file.options.pair = pair;
            }
            let started = Instant::now();
            let report = solve_detailed(&file.problem, &file.options)?;
            let mut report = SolutionReport::from_solve(&report, &file.options);
            if timing {
                report.timing_ms = Some(started.elapsed().as_secs_f64() * 1e3);
            }
            let text = report.to_string();
            match output {
                Some(path) => write_file(&path, &text)?,
                None => write_out(out, &text)?,
            }
            Ok(if report.solutions.is_empty() {
                EXIT_NO_SOLUTION
            } else {
                EXIT_OK
            })
        }
        Command::Render {
            input,
            report,
            output,
            show_inversion,
        } => {
            let file = read_problem(&input)?;
            let text = read_file(&report)?;
            let report = SolutionReport::parse(&text).map_err(|source| CliError::Parse {
                path: report.clone(),
                source,
            })?;
            let svg = render_svg(&file.problem, &report, show_inversion);
            write_file(&output, &svg)?;
            Ok(EXIT_OK)
        }
        Command::Invert { input, pair } => {
            let text = read_file(&input)?;
            let file = parse_invert_file(&text).map_err(|source| CliError::Parse {
                path: input.clone(),
                source,
            })?;
            write_out(out, &run_invert(&file, pair)?)?;
            Ok(EXIT_OK)
        }
        Command::Trace(cmd) => {
            write_out(out, &run_trace(cmd)?)?;
            Ok(EXIT_OK)
        }
    }
}

fn positive(flag: &str, v: f64) -> Result<f64, CliError> {
    if v.is_finite() && v > 0.0 {
        Ok(v)
    } else {
        Err(CliError::Usage(format!(
            "{flag} must be a positive number, got {v}"
        )))
    }
}

fn read_file(path: &Path) -> Result<String, CliError> {
    fs::read_to_string(path).map_err(|source| CliError::Io {
        path: path.to_path_buf(),
        source,
    })
}

fn write_file(path: &Path, text: &str) -> Result<(), CliError> {
    fs::write(path, text).map_err(|source| CliError::Io {
        path: path.to_path_buf(),
        source,
    })
}

fn write_out(out: &mut dyn std::io::Write, text: &str) -> Result<(), CliError> {
    out.write_all(text.as_bytes())
        .map_err(|source| CliError::Io {
            path: PathBuf::from("<stdout>"),
            source,
        })
}

fn read_problem(path: &Path) -> Result<ProblemFile, CliError> {
    let text = read_file(path)?;
    parse_problem(&text).map_err(|source| CliError::Parse {
        path: path.to_path_buf(),
        source,
    })
}

// ---------------------------------------------------------------------------
// problem files

/// A parsed problem file.
///
/// ```toml
/// angles_deg = [90.0, 90.0, 90.0]
///
/// [[circle]]
/// center = [0.0, 0.0]
/// radius = 1.0
/// # two more [[circle]] tables
///
/// [options]            # optional
/// tolerance = 1e-7     # radians
/// eps_rel = 1e-9
/// enumerate_all = false
/// pair = "23"
/// ```
#[derive(Debug, Clone, PartialEq)]
pub struct ProblemFile {
    pub problem: SteinerProblem,
    pub options: SolverOptions,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawCircle {
    center: [f64; 2],
    radius: Spanned<f64>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawOptions {
    tolerance: Option<Spanned<f64>>,
    eps_rel: Option<Spanned<f64>>,
    enumerate_all: Option<bool>,
    pair: Option<Spanned<String>>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawProblem {
    angles_deg: Spanned<Vec<f64>>,
    #[serde(rename = "circle", default)]
    circles: Vec<RawCircle>,
    options: Option<RawOptions>,
}

fn line_of(text: &str, offset: usize) -> usize {
    text[..offset.min(text.len())].matches('\n').count() + 1
}

fn toml_error(text: &str, e: toml::de::Error) -> ParseError {
    let message = e.message().to_string();
    match e.span() {
        Some(span) => ParseError::at(line_of(text, span.start), message),
        None => ParseError::general(message),
    }
}

fn parse_circles(text: &str, raw: &[RawCircle]) -> Result<Vec<Circle>, ParseError> {
    raw.iter()
        .enumerate()
        .map(|(i, c)| {
            let r = *c.radius.get_ref();
            let line = line_of(text, c.radius.span().start);
            if !(r.is_finite() && r > 0.0) {
                return Err(ParseError::at(
                    line,
                    format!("circle[{}].radius: must be positive, got {r}", i + 1),
                ));
            }
            let center = Point::new(c.center[0], c.center[1]);
            Circle::new(center, r)
                .map_err(|e| ParseError::at(line, format!("circle[{}]: {e}", i + 1)))
        })
        .collect()
}

pub fn parse_problem(text: &str) -> Result<ProblemFile, ParseError> {
    let raw: RawProblem = toml::from_str(text).map_err(|e| toml_error(text, e))?;
    if raw.circles.len() != 3 {
        return Err(ParseError::general(format!(
            "expected exactly 3 [[circle]] tables, got {}",
            raw.circles.len()
        )));
    }
    let circles = parse_circles(text, &raw.circles)?;

    let angles_line = line_of(text, raw.angles_deg.span().start);
    let degrees = raw.angles_deg.get_ref();
    if degrees.len() != 3 {
        return Err(ParseError::at(
            angles_line,
            format!("angles_deg: expected 3 angles, got {}", degrees.len()),
        ));
    }
    for (i, &a) in degrees.iter().enumerate() {
        if !(0.0..=90.0).contains(&a) {
            return Err(ParseError::at(
                angles_line,
                format!("angles_deg[{}]: {a} is outside [0, 90]", i + 1),
            ));
        }
    }
    let angles = AngleSpec::from_degrees([degrees[0], degrees[1], degrees[2]])
        .map_err(|e| ParseError::at(angles_line, format!("angles_deg: {e}")))?;

    let mut options = SolverOptions::default();
    if let Some(o) = raw.options {
        let positive_field = |name: &str, v: &Spanned<f64>| {
            let x = *v.get_ref();
            if x.is_finite() && x > 0.0 {
                Ok(x)
            } else {
                Err(ParseError::at(
                    line_of(text, v.span().start),
                    format!("options.{name}: must be positive, got {x}"),
                ))
            }
        };
        if let Some(t) = &o.tolerance {
            options.tolerance = positive_field("tolerance", t)?;
        }
        if let Some(e) = &o.eps_rel {
            options.eps_rel = positive_field("eps_rel", e)?;
        }
        if let Some(all) = o.enumerate_all {
            options.enumerate_all = all;
        }
        if let Some(p) = &o.pair {
            options.pair = Pair::from_str(p.get_ref()).map_err(|e| {
                ParseError::at(line_of(text, p.span().start), format!("options.pair: {e}"))
            })?;
        }
    }

    Ok(ProblemFile {
        problem: SteinerProblem::new(circles[0], circles[1], circles[2], angles),
        options,
    })
}

// ---------------------------------------------------------------------------
// solution reports

/// A solution as written in a report.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Shape {
    Circle { center: Point, radius: f64 },
    Line { normal: Point, offset: f64 },
}

impl Shape {
    pub fn from_generalized(g: &GeneralizedCircle) -> Self {
        match g {
            GeneralizedCircle::Circle(c) => Shape::Circle {
                center: c.center,
                radius: c.radius,
            },
            GeneralizedCircle::Line(l) => Shape::Line {
                normal: l.normal(),
                offset: l.offset(),
            },
        }
    }

    pub fn to_generalized(&self) -> Result<GeneralizedCircle, GeomError> {
        Ok(match *self {
            Shape::Circle { center, radius } => {
                GeneralizedCircle::Circle(Circle::new(center, radius)?)
            }
            Shape::Line { normal, offset } => GeneralizedCircle::Line(Line::new(normal, offset)?),
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ReportedSolution {
    pub shape: Shape,
    pub variant: SignVariant,
    /// |achieved - prescribed| per given circle, degrees.
    pub residuals_deg: [f64; 3],
}

/// Machine-readable solver output; see [`SolutionReport::parse`] for the
/// format.
#[derive(Debug, Clone, PartialEq)]
pub struct SolutionReport {
    pub pair: Pair,
    /// Given circle (0-based) playing each role: remaining, smaller ring,
    /// larger ring.
    pub roles: [usize; 3],
    /// Centre and radius of the inversion used; `None` for the identity.
    pub inversion: Option<(Point, f64)>,
    pub concentricity_residual: f64,
    pub eps_rel: f64,
    pub tolerance: f64,
    pub enumerate_all: bool,
    pub solutions: Vec<ReportedSolution>,
    pub timing_ms: Option<f64>,
}

fn num(v: f64) -> String {
    format!("{v:.16e}")
}

impl SolutionReport {
    pub fn from_solve(report: &crate::steiner::SolveReport, options: &SolverOptions) -> Self {
        let cfg = &report.config;
        SolutionReport {
            pair: cfg.pair,
            roles: cfg.roles,
            inversion: cfg.inversion.map(|inv| (inv.center(), inv.radius())),
            concentricity_residual: cfg.concentricity_residual,
            eps_rel: options.eps_rel,
            tolerance: options.tolerance,
            enumerate_all: options.enumerate_all,
            solutions: report
                .solutions
                .iter()
                .map(|s| ReportedSolution {
                    shape: Shape::from_generalized(&s.circle),
                    variant: s.variant,
                    residuals_deg: s.residuals.map(f64::to_degrees),
                })
                .collect(),
            timing_ms: None,
        }
    }

    pub fn status(&self) -> &'static str {
        if self.solutions.is_empty() {
            "no_solution"
        } else {
            "solved"
        }
    }

    /// Parses the text written by `Display`.
    ///
    /// ```text
    /// steiner-report v1
    /// status solved
    /// pair 23
    /// roles 1 2 3
    /// inversion center <x> <y> radius <r>     (or: inversion identity)
    /// concentricity_residual <v>
    /// eps_rel <v>
    /// tolerance <v>
    /// enumerate_all false
    /// solutions 1
    /// circle <x> <y> <r> variant +++ residuals_deg <a> <b> <c>
    /// line <nx> <ny> <offset> variant +++ residuals_deg <a> <b> <c>
    /// timing_ms <v>                            (optional)
    /// ```
    pub fn parse(text: &str) -> Result<Self, ParseError> {
        let mut lines = text.lines().enumerate().map(|(i, l)| (i + 1, l));
        let mut next = |key: &str| -> Result<(usize, Vec<String>), ParseError> {
            let (n, line) = lines
                .next()
                .ok_or_else(|| ParseError::general(format!("missing `{key}` line")))?;
            let mut tokens = line.split_whitespace().map(str::to_string);
            match tokens.next() {
                Some(k) if k == key => Ok((n, tokens.collect())),
                _ => Err(ParseError::at(
                    n,
                    format!("expected `{key}`, found {line:?}"),
                )),
            }
        };
        let float = |n: usize, t: &str| {
            t.parse::<f64>()
                .map_err(|e| ParseError::at(n, format!("bad number {t:?}: {e}")))
        };
        let single = |n: usize, v: &[String]| {
            if v.len() == 1 {
                Ok(v[0].clone())
            } else {
                Err(ParseError::at(
                    n,
                    format!("expected one value, got {}", v.len()),
                ))
            }
        };

        let (n, head) = next("steiner-report")?;
        if head != ["v1"] {
            return Err(ParseError::at(
                n,
                format!("unsupported report version {head:?}"),
            ));
        }
        let (status_line, status) = next("status")?;
        let status = single(status_line, &status)?;
        let (n, v) = next("pair")?;
        let pair = Pair::from_str(&single(n, &v)?).map_err(|e| ParseError::at(n, e))?;
        let (n, v) = next("roles")?;
        let roles: Vec<usize> = v
            .iter()
            .map(|t| match t.parse::<usize>() {
                Ok(k @ 1..=3) => Ok(k - 1),
                _ => Err(ParseError::at(n, format!("bad role {t:?}"))),
            })
            .collect::<Result<_, _>>()?;
        let roles: [usize; 3] = roles
            .try_into()
            .map_err(|_| ParseError::at(n, "expected three roles"))?;
        let (n, v) = next("inversion")?;
        let inversion = match v.as_slice() {
            [id] if id == "identity" => None,
            [c, x, y, r, radius] if c == "center" && r == "radius" => {
                Some((Point::new(float(n, x)?, float(n, y)?), float(n, radius)?))
            }
            _ => {
                return Err(ParseError::at(
                    n,
                    "expected `center <x> <y> radius <r>` or `identity`",
                ))
            }
        };
        let (n, v) = next("concentricity_residual")?;
        let concentricity_residual = float(n, &single(n, &v)?)?;
        let (n, v) = next("eps_rel")?;
        let eps_rel = float(n, &single(n, &v)?)?;
        let (n, v) = next("tolerance")?;
        let tolerance = float(n, &single(n, &v)?)?;
        let (n, v) = next("enumerate_all")?;
        let enumerate_all = single(n, &v)?
            .parse::<bool>()
            .map_err(|e| ParseError::at(n, format!("enumerate_all: {e}")))?;
        let (n, v) = next("solutions")?;
        let count = single(n, &v)?
            .parse::<usize>()
            .map_err(|e| ParseError::at(n, format!("solutions: {e}")))?;

        let mut solutions = Vec::with_capacity(count);
        let mut timing_ms = None;
        for (n, line) in lines {
            let tokens: Vec<&str> = line.split_whitespace().collect();
            match tokens.as_slice() {
                [] => continue,
                ["timing_ms", v] if timing_ms.is_none() => timing_ms = Some(float(n, v)?),
                [kind @ ("circle" | "line"), a, b, c, "variant", variant, "residuals_deg", r1, r2, r3]
                    if timing_ms.is_none() =>
                {
                    let (a, b, c) = (float(n, a)?, float(n, b)?, float(n, c)?);
                    let shape = if *kind == "circle" {
                        Shape::Circle {
                            center: Point::new(a, b),
                            radius: c,
                        }
                    } else {
                        Shape::Line {
                            normal: Point::new(a, b),
                            offset: c,
                        }
                    };
                    solutions.push(ReportedSolution {
                        shape,
                        variant: SignVariant::from_str(variant)
                            .map_err(|e| ParseError::at(n, e))?,
                        residuals_deg: [float(n, r1)?, float(n, r2)?, float(n, r3)?],
                    });
                }
                _ => return Err(ParseError::at(n, format!("unexpected line {line:?}"))),
            }
        }
        if solutions.len() != count {
            return Err(ParseError::general(format!(
                "header announces {count} solutions, found {}",
                solutions.len()
            )));
        }
        let report = SolutionReport {
            pair,
            roles,
            inversion,
            concentricity_residual,
            eps_rel,
            tolerance,
            enumerate_all,
            solutions,
            timing_ms,
        };
        if report.status() != status {
            return Err(ParseError::at(
                status_line,
                format!("status {status:?} contradicts the solution count"),
            ));
        }
        Ok(report)
    }
}

impl fmt::Display for SolutionReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "{REPORT_HEADER}")?;
        writeln!(f, "status {}", self.status())?;
        writeln!(f, "pair {}", self.pair)?;
        let [a, b, c] = self.roles.map(|r| r + 1);
        writeln!(f, "roles {a} {b} {c}")?;
        match self.inversion {
            Some((center, radius)) => writeln!(
                f,
                "inversion center {} {} radius {}",
                num(center.x),
                num(center.y),
                num(radius)
            )?,
            None => writeln!(f, "inversion identity")?,
        }
        writeln!(
            f,
            "concentricity_residual {}",
            num(self.concentricity_residual)
        )?;
        writeln!(f, "eps_rel {}", num(self.eps_rel))?;
        writeln!(f, "tolerance {}", num(self.tolerance))?;
        writeln!(f, "enumerate_all {}", self.enumerate_all)?;
        writeln!(f, "solutions {}", self.solutions.len())?;
        for s in &self.solutions {
            let (kind, a, b, c) = match s.shape {
                Shape::Circle { center, radius } => ("circle", center.x, center.y, radius),
                Shape::Line { normal, offset } => ("line", normal.x, normal.y, offset),
            };
            let [r1, r2, r3] = s.residuals_deg.map(num);
            writeln!(
                f,
                "{kind} {} {} {} variant {} residuals_deg {r1} {r2} {r3}",
                num(a),
                num(b),
                num(c),
                s.variant
            )?;
        }
        if let Some(ms) = self.timing_ms {
            writeln!(f, "timing_ms {}", num(ms))?;
        }
        Ok(())
    }
}

// ---------------------------------------------------------------------------
// SVG

#[derive(Debug, Clone, Copy)]
struct Bounds {
    min: Point,
    max: Point,
}

impl Bounds {
    fn of_circles<'a>(circles: impl IntoIterator<Item = &'a Circle>) -> Option<Bounds> {
        circles.into_iter().fold(None, |acc: Option<Bounds>, c| {
            let (lo, hi) = c.bounds();
            Some(match acc {
                None => Bounds { min: lo, max: hi },
                Some(b) => Bounds {
                    min: Point::new(b.min.x.min(lo.x), b.min.y.min(lo.y)),
                    max: Point::new(b.max.x.max(hi.x), b.max.y.max(hi.y)),
                },
            })
        })
    }

    fn padded(self, fraction: f64) -> Bounds {
        let pad = (self.max.x - self.min.x).max(self.max.y - self.min.y) * fraction;
        Bounds {
            min: self.min - Point::new(pad, pad),
            max: self.max + Point::new(pad, pad),
        }
    }

    /// Part of a line inside the box.
    fn clip(&self, line: &Line) -> Option<(Point, Point)> {
        let a = line.anchor();
        let d = line.direction();
        let (mut lo, mut hi) = (f64::NEG_INFINITY, f64::INFINITY);
        for (p, v, min, max) in [
            (a.x, d.x, self.min.x, self.max.x),
            (a.y, d.y, self.min.y, self.max.y),
        ] {
            if v.abs() < 1e-15 {
                if p < min || p > max {
                    return None;
                }
            } else {
                let (t0, t1) = ((min - p) / v, (max - p) / v);
                lo = lo.max(t0.min(t1));
                hi = hi.min(t0.max(t1));
            }
        }
        (lo <= hi).then(|| (a + d * lo, a + d * hi))
    }
}

/// SVG y grows downwards; `0.0 - y` also avoids printing `-0`.
fn flip(y: f64) -> f64 {
    0.0 - y
}

fn svg_shape(out: &mut String, g: &GeneralizedCircle, class: &str, bounds: &Bounds) {
    match g {
        GeneralizedCircle::Circle(c) => {
            let _ = writeln!(
                out,
                r#"  <circle class="{class}" cx="{}" cy="{}" r="{}"/>"#,
                c.center.x,
                flip(c.center.y),
                c.radius
            );
        }
        GeneralizedCircle::Line(l) => {
            if let Some((p, q)) = bounds.clip(l) {
                let _ = writeln!(
                    out,
                    r#"  <line class="{class}" x1="{}" y1="{}" x2="{}" y2="{}"/>"#,
                    p.x,
                    flip(p.y),
                    q.x,
                    flip(q.y)
                );
            }
        }
    }
}

/// SVG 1.1 figure: given circles solid, solutions dashed, and optionally the
/// inversion circle with the images of everything else. The y axis points
/// up.
pub fn render_svg(
    problem: &SteinerProblem,
    report: &SolutionReport,
    show_inversion: bool,
) -> String {
    let solutions: Vec<GeneralizedCircle> = report
        .solutions
        .iter()
        .filter_map(|s| s.shape.to_generalized().ok())
        .collect();
    let inversion = report
        .inversion
        .filter(|_| show_inversion)
        .and_then(|(c, r)| Inversion::new(c, r).ok());
    let given_images: Vec<GeneralizedCircle> = inversion
        .map(|inv| {
            problem
                .circles
                .iter()
                .map(|c| inv.invert_circle(c))
                .collect()
        })
        .unwrap_or_default();
    let solution_images: Vec<GeneralizedCircle> = inversion
        .map(|inv| solutions.iter().map(|g| inv.invert(g)).collect())
        .unwrap_or_default();

    let mut extent: Vec<Circle> = problem.circles.to_vec();
    extent.extend(solutions.iter().filter_map(|g| g.as_circle().copied()));
    if let Some(inv) = inversion {
        extent.push(inv.circle());
        extent.extend(given_images.iter().filter_map(|g| g.as_circle().copied()));
    }
    let bounds = Bounds::of_circles(&extent)
        .expect("a problem has three circles")
        .padded(0.1);
    let (w, h) = (bounds.max.x - bounds.min.x, bounds.max.y - bounds.min.y);
    let width = 800.0;
    let height = (width * h / w).round();

    let mut out = String::new();
    let _ = writeln!(
        out,
        r#"<?xml version="1.0" encoding="UTF-8" standalone="no"?>"#
    );
    let _ = writeln!(
        out,
        r#"<svg xmlns="http://www.w3.org/2000/svg" version="1.1" width="{width}" height="{height}" viewBox="{} {} {w} {h}">"#,
        bounds.min.x,
        flip(bounds.max.y)
    );
    out.push_str(concat!(
        "  <style>\n",
        "    circle, line { fill: none; vector-effect: non-scaling-stroke; stroke-width: 1.5; }\n",
        "    .given { stroke: #000000; }\n",
        "    .solution { stroke: #c0392b; stroke-dasharray: 6 4; }\n",
        "    .inversion { stroke: #2471a3; stroke-width: 1; stroke-dasharray: 2 3; }\n",
        "    .image { stroke: #7f8c8d; }\n",
        "    .solution-image { stroke: #e59866; stroke-dasharray: 6 4; }\n",
        "  </style>\n",
    ));
    for c in &problem.circles {
        svg_shape(&mut out, &GeneralizedCircle::Circle(*c), "given", &bounds);
    }
    for g in &solutions {
        svg_shape(&mut out, g, "solution", &bounds);
    }
    if let Some(inv) = inversion {
        svg_shape(
            &mut out,
            &GeneralizedCircle::Circle(inv.circle()),
            "inversion",
            &bounds,
        );
        for g in &given_images {
            svg_shape(&mut out, g, "image", &bounds);
        }
        for g in &solution_images {
            svg_shape(&mut out, g, "solution-image", &bounds);
        }
    }
    out.push_str("</svg>\n");
    out
}

// ---------------------------------------------------------------------------
// invert

/// Input of the `invert` command: an explicit inversion with objects to map,
/// or two or three circles (nothing else) to concentricize.
///
/// ```toml
/// [inversion]
/// center = [0.0, 0.0]
/// radius = 2.0
///
/// [[circle]]
/// center = [3.0, 0.0]
/// radius = 1.0
///
/// [[line]]
/// through = [[1.0, 0.0], [1.0, 1.0]]   # or: normal = [1.0, 0.0], offset = 1.0
///
/// [[point]]
/// at = [4.0, 0.0]
/// ```
#[derive(Debug, Clone, PartialEq)]
pub struct InvertFile {
    pub inversion: Option<Inversion>,
    pub circles: Vec<Circle>,
    pub lines: Vec<Line>,
    pub points: Vec<Point>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawInversion {
    center: [f64; 2],
    radius: Spanned<f64>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawLine {
    through: Option<[[f64; 2]; 2]>,
    normal: Option<[f64; 2]>,
    offset: Option<f64>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawPoint {
    at: [f64; 2],
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawInvertFile {
    inversion: Option<RawInversion>,
    #[serde(rename = "circle", default)]
    circles: Vec<RawCircle>,
    #[serde(rename = "line", default)]
    lines: Vec<Spanned<RawLine>>,
    #[serde(rename = "point", default)]
    points: Vec<RawPoint>,
    // problem files are accepted as they are
    #[allow(dead_code)]
    angles_deg: Option<toml::Value>,
    #[allow(dead_code)]
    options: Option<toml::Value>,
}

pub fn parse_invert_file(text: &str) -> Result<InvertFile, ParseError> {
    let raw: RawInvertFile = toml::from_str(text).map_err(|e| toml_error(text, e))?;
    let circles = parse_circles(text, &raw.circles)?;
    let inversion = match &raw.inversion {
        Some(inv) => {
            let r = *inv.radius.get_ref();
            let line = line_of(text, inv.radius.span().start);
            if !(r.is_finite() && r > 0.0) {
                return Err(ParseError::at(
                    line,
                    format!("inversion.radius: must be positive, got {r}"),
                ));
            }
            Some(
                Inversion::new(Point::new(inv.center[0], inv.center[1]), r)
                    .map_err(|e| ParseError::at(line, format!("inversion: {e}")))?,
            )
        }
        None => None,
    };
    let lines = raw
        .lines
        .iter()
        .enumerate()
        .map(|(i, l)| {
            let n = line_of(text, l.span().start);
            let l = l.get_ref();
            let line = match (l.through, l.normal, l.offset) {
                (Some([p, q]), None, None) => {
                    Line::through(Point::new(p[0], p[1]), Point::new(q[0], q[1]))
                }
                (None, Some(n), Some(c)) => Line::new(Point::new(n[0], n[1]), c),
                _ => {
                    return Err(ParseError::at(
                        n,
                        format!(
                            "line[{}]: give either `through` or `normal` and `offset`",
                            i + 1
                        ),
                    ))
                }
            };
            line.map_err(|e| ParseError::at(n, format!("line[{}]: {e}", i + 1)))
        })
        .collect::<Result<Vec<_>, _>>()?;
    let points: Vec<Point> = raw
        .points
        .iter()
        .map(|p| Point::new(p.at[0], p.at[1]))
        .collect();

    let concentricizable =
        (2..=3).contains(&circles.len()) && lines.is_empty() && points.is_empty();
    if inversion.is_none() && !concentricizable {
        return Err(ParseError::general(
            "without an [inversion] table the file must hold two or three circles and nothing else",
        ));
    }
    Ok(InvertFile {
        inversion,
        circles,
        lines,
        points,
    })
}

fn write_shape(out: &mut String, g: &GeneralizedCircle) {
    let _ = match g {
        GeneralizedCircle::Circle(c) => write!(
            out,
            "circle {} {} {}",
            num(c.center.x),
            num(c.center.y),
            num(c.radius)
        ),
        GeneralizedCircle::Line(l) => write!(
            out,
            "line {} {} {}",
            num(l.normal().x),
            num(l.normal().y),
            num(l.offset())
        ),
    };
}

fn write_inversion(out: &mut String, inv: &Inversion) {
    let _ = writeln!(
        out,
        "inversion center {} {} radius {}",
        num(inv.center().x),
        num(inv.center().y),
        num(inv.radius())
    );
}

/// Runs the `invert` command and returns its text output.
pub fn run_invert(file: &InvertFile, pair: Option<Pair>) -> Result<String, CliError> {
    let mut out = String::new();
    let _ = writeln!(out, "{INVERSION_HEADER}");
    let inversion = match file.inversion {
        Some(inv) => {
            let _ = writeln!(out, "mode explicit");
            write_inversion(&mut out, &inv);
            inv
        }
        None => {
            let _ = writeln!(out, "mode concentricize");
            let pair = match file.circles.len() {
                2 => Pair::P12,
                _ => pair.unwrap_or(Pair::P23),
            };
            let (_, a, b) = pair.indices();
            let res = concentricizing_inversion(&file.circles[a], &file.circles[b])?;
            let _ = writeln!(out, "pair {pair}");
            write_limiting(&mut out, &res.limiting_points);
            // with a third circle, pick the limiting point the solver would
            let inv = match file.circles.as_slice() {
                &[c1, c2, c3] => {
                    let zero = AngleSpec::new(Angle::ZERO, Angle::ZERO, Angle::ZERO);
                    let problem = SteinerProblem::new(c1, c2, c3, zero);
                    concentricize_pair(&problem, pair)?
                        .inversion
                        .unwrap_or(res.chosen)
                }
                _ => res.chosen,
            };
            write_inversion(&mut out, &inv);
            let residual = concentricity_residual(&inv, &file.circles[a], &file.circles[b])
                .ok_or(InversionError::CenterPoint)?;
            let _ = writeln!(out, "concentricity_residual {}", num(residual));
            let axis = res.radical_axis;
            let _ = writeln!(
                out,
                "radical_axis {} {} {}",
                num(axis.normal().x),
                num(axis.normal().y),
                num(axis.offset())
            );
            let o = res.orthogonal_circle;
            let _ = writeln!(
                out,
                "orthogonal_circle {} {} {}",
                num(o.center.x),
                num(o.center.y),
                num(o.radius)
            );
            inv
        }
    };
    for (i, c) in file.circles.iter().enumerate() {
        let _ = write!(out, "image circle {} -> ", i + 1);
        write_shape(&mut out, &inversion.invert_circle(c));
        out.push('\n');
    }
    for (i, l) in file.lines.iter().enumerate() {
        let _ = write!(out, "image line {} -> ", i + 1);
        write_shape(&mut out, &inversion.invert_line(l));
        out.push('\n');
    }
    for (i, p) in file.points.iter().enumerate() {
        let q = inversion.invert_point(*p)?;
        let _ = writeln!(
            out,
            "image point {} -> point {} {}",
            i + 1,
            num(q.x),
            num(q.y)
        );
    }
    Ok(out)
}

fn write_limiting(out: &mut String, points: &[Point; 2]) {
    let _ = writeln!(
        out,
        "limiting_points {} {} {} {}",
        num(points[0].x),
        num(points[0].y),
        num(points[1].x),
        num(points[1].y)
    );
}

// ---------------------------------------------------------------------------
// trace

fn find_program(name: &str) -> Option<Trace> {
    all_programs().into_iter().find(|t| t.name() == name)
}

fn parse_point(s: &str) -> Result<Point, CliError> {
    let bad = || CliError::Usage(format!("expected a point `x,y`, got {s:?}"));
    let (x, y) = s.split_once(',').ok_or_else(bad)?;
    let x = x.trim().parse::<f64>().map_err(|_| bad())?;
    let y = y.trim().parse::<f64>().map_err(|_| bad())?;
    Ok(Point::new(x, y))
}

fn write_objects(out: &mut String, trace: &Trace, objects: &[Object]) {
    for (&step, obj) in trace.outputs().iter().zip(objects) {
        let label = trace.steps()[step].label.as_deref().unwrap_or("-");
        let _ = write!(out, "{step} {label} ");
        match obj {
            Object::Point(p) => {
                let _ = write!(out, "point {} {}", num(p.x), num(p.y));
            }
            Object::Line(l) => write_shape(out, &GeneralizedCircle::Line(*l)),
            Object::Circle(c) => write_shape(out, &GeneralizedCircle::Circle(*c)),
        }
        out.push('\n');
    }
}

fn run_trace(cmd: TraceCommand) -> Result<String, CliError> {
    let mut out = String::new();
    match cmd {
        TraceCommand::List => {
            for t in all_programs() {
                let _ = writeln!(
                    out,
                    "{} {} steps, {} givens",
                    t.name(),
                    t.len(),
                    t.given_count()
                );
            }
        }
        TraceCommand::Show { name } => {
            let t = find_program(&name)
                .ok_or_else(|| CliError::Usage(format!("unknown program {name:?}")))?;
            out.push_str(&t.to_text());
        }
        TraceCommand::Replay { program, givens } => {
            let trace = match find_program(&program) {
                Some(t) => t,
                None => Trace::parse(&read_file(Path::new(&program))?)?,
            };
            let givens = givens
                .iter()
                .map(|s| parse_point(s))
                .collect::<Result<Vec<_>, _>>()?;
            let objects = replay(&trace, &givens)?;
            write_objects(&mut out, &trace, &objects);
        }
        TraceCommand::Legs {
            hypotenuse,
            angle_deg,
        } => {
            if !(hypotenuse.is_finite() && hypotenuse > 0.0) {
                return Err(CliError::Usage(format!(
                    "hypotenuse must be positive, got {hypotenuse}"
                )));
            }
            if !(angle_deg > 0.0 && angle_deg < 90.0) {
                return Err(CliError::Usage(format!(
                    "the angle must be acute, got {angle_deg} degrees"
                )));
            }
            let trace = find_program("right_triangle_legs").expect("built-in program");
            let objects = replay(
                &trace,
                &right_triangle_givens(hypotenuse, angle_deg.to_radians()),
            )?;
            let [p, q, t] = [0, 1, 2].map(|i| objects[i].as_point().expect("point outputs"));
            let _ = writeln!(out, "opposite {}", num(crate::geom::distance(q, t)));
            let _ = writeln!(out, "adjacent {}", num(crate::geom::distance(p, t)));
        }
    }
    Ok(out)
}
