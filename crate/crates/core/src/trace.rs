//! Straightedge-and-compass construction traces.
//!
//! A [`Trace`] is a list of elementary steps in topological order. Each step
//! draws a line, a circle or a point from earlier steps; intersection steps
//! carry a branch selector so that replaying a trace on new given points is
//! deterministic. Midpoints, perpendiculars and parallels are taken as
//! primitive steps.
//!
//! The programs here witness that each object the solver computes
//! analytically can also be drawn: the circumcircle of three points, the
//! fourth proportional `ab/c`, the legs `c sin(a)` and `c cos(a)` of a right
//! triangle, the inverse of a point, and the limiting points of two disjoint
//! circles.
//!
//! # Text format
//!
//! ```text
//! trace v1 circumcircle
//! 0 given_point label=A
//! 3 midpoint 0 1 label=M_AB
//! 9 intersect_ll 5 8 label=O
//! 12 intersect_cc 7 9 second
//! 16 intersect_lc 13 15 away 0
//! outputs 10
//! ```
//!
//! One step per line: index, kind, operand indices, then for intersections
//! with a circle a branch selector (`first`, `second`, `near <i>`,
//! `away <i>`), then an optional `label=`. Blank lines and lines starting
//! with `#` are ignored.

use std::fmt;

use thiserror::Error;

use crate::geom::{
    bbox_diagonal, circle_circle_intersection_eps, distance, line_circle_intersection_eps,
    line_line_intersection, Circle, GeomError, Line, Point, EPS_REL,
};

pub const FORMAT_VERSION: &str = "v1";

#[derive(Debug, Clone, PartialEq, Error)]
pub enum TraceError {
    #[error("step {step}: operand {operand} does not precede it")]
    OperandOrder { step: usize, operand: usize },
    #[error("step {step}: operand {operand} is a {found}, expected a {expected}")]
    TypeMismatch {
        step: usize,
        operand: usize,
        expected: ObjectKind,
        found: ObjectKind,
    },
    #[error("step {index}: index out of sequence")]
    IndexSequence { index: usize },
    #[error("output {0} is not a step")]
    BadOutput(usize),
    #[error("expected {expected} given points, got {got}")]
    GivenCount { expected: usize, got: usize },
    #[error("BranchMiss: step {step} has no intersection on the recorded branch")]
    BranchMiss { step: usize },
    #[error("step {step}: degenerate construction ({source})")]
    Degenerate { step: usize, source: GeomError },
    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ObjectKind {
    Point,
    Line,
    Circle,
}

impl fmt::Display for ObjectKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            ObjectKind::Point => "point",
            ObjectKind::Line => "line",
            ObjectKind::Circle => "circle",
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Object {
    Point(Point),
    Line(Line),
    Circle(Circle),
}

impl Object {
    pub fn kind(&self) -> ObjectKind {
        match self {
            Object::Point(_) => ObjectKind::Point,
            Object::Line(_) => ObjectKind::Line,
            Object::Circle(_) => ObjectKind::Circle,
        }
    }

    pub fn as_point(&self) -> Option<Point> {
        match self {
            Object::Point(p) => Some(*p),
            _ => None,
        }
    }

    pub fn as_line(&self) -> Option<Line> {
        match self {
            Object::Line(l) => Some(*l),
            _ => None,
        }
    }

    pub fn as_circle(&self) -> Option<Circle> {
        match self {
            Object::Circle(c) => Some(*c),
            _ => None,
        }
    }
}

/// Which intersection point an intersection step keeps.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Branch {
    /// First in (y, x) order.
    First,
    /// Second in (y, x) order; requires two intersection points.
    Second,
    /// Closest to the point produced by the given step.
    Near(usize),
    /// Farthest from the point produced by the given step.
    Away(usize),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum StepKind {
    GivenPoint,
    LineThrough(usize, usize),
    /// Circle about the first point through the second.
    CircleCenterPoint(usize, usize),
    /// Circle about the first point with radius `|ab|` of the other two.
    CircleCenterRadiusOf(usize, usize, usize),
    IntersectLL(usize, usize),
    IntersectLC(usize, usize, Branch),
    IntersectCC(usize, usize, Branch),
    Midpoint(usize, usize),
    /// Line through the point perpendicular to the line.
    PerpendicularAt(usize, usize),
    /// Line through the point parallel to the line.
    ParallelThrough(usize, usize),
}

impl StepKind {
    fn name(&self) -> &'static str {
        match self {
            StepKind::GivenPoint => "given_point",
            StepKind::LineThrough(..) => "line_through",
            StepKind::CircleCenterPoint(..) => "circle_center_point",
            StepKind::CircleCenterRadiusOf(..) => "circle_center_radius_of",
            StepKind::IntersectLL(..) => "intersect_ll",
            StepKind::IntersectLC(..) => "intersect_lc",
            StepKind::IntersectCC(..) => "intersect_cc",
            StepKind::Midpoint(..) => "midpoint",
            StepKind::PerpendicularAt(..) => "perpendicular_at",
            StepKind::ParallelThrough(..) => "parallel_through",
        }
    }

    /// Operands paired with the kind each must have.
    fn operands(&self) -> Vec<(usize, ObjectKind)> {
        use ObjectKind::*;
        match *self {
            StepKind::GivenPoint => vec![],
            StepKind::LineThrough(p, q)
            | StepKind::CircleCenterPoint(p, q)
            | StepKind::Midpoint(p, q) => {
                vec![(p, Point), (q, Point)]
            }
            StepKind::CircleCenterRadiusOf(o, a, b) => vec![(o, Point), (a, Point), (b, Point)],
            StepKind::IntersectLL(a, b) => vec![(a, Line), (b, Line)],
            StepKind::IntersectLC(l, c, br) => with_branch(vec![(l, Line), (c, Circle)], br),
            StepKind::IntersectCC(a, b, br) => with_branch(vec![(a, Circle), (b, Circle)], br),
            StepKind::PerpendicularAt(l, p) | StepKind::ParallelThrough(l, p) => {
                vec![(l, Line), (p, Point)]
            }
        }
    }

    fn output_kind(&self) -> ObjectKind {
        match self {
            StepKind::GivenPoint
            | StepKind::IntersectLL(..)
            | StepKind::IntersectLC(..)
            | StepKind::IntersectCC(..)
            | StepKind::Midpoint(..) => ObjectKind::Point,
            StepKind::LineThrough(..)
            | StepKind::PerpendicularAt(..)
            | StepKind::ParallelThrough(..) => ObjectKind::Line,
            StepKind::CircleCenterPoint(..) | StepKind::CircleCenterRadiusOf(..) => {
                ObjectKind::Circle
            }
        }
    }
}

fn with_branch(mut ops: Vec<(usize, ObjectKind)>, branch: Branch) -> Vec<(usize, ObjectKind)> {
    if let Branch::Near(i) | Branch::Away(i) = branch {
        ops.push((i, ObjectKind::Point));
    }
    ops
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TraceStep {
    pub kind: StepKind,
    pub label: Option<String>,
}

/// A validated construction program.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Trace {
    name: String,
    steps: Vec<TraceStep>,
    outputs: Vec<usize>,
}

impl Trace {
    /// Checks operand order and operand kinds.
    pub fn new(
        name: impl Into<String>,
        steps: Vec<TraceStep>,
        outputs: Vec<usize>,
    ) -> Result<Self, TraceError> {
        let mut kinds = Vec::with_capacity(steps.len());
        for (step, s) in steps.iter().enumerate() {
            for (operand, expected) in s.kind.operands() {
                if operand >= step {
                    return Err(TraceError::OperandOrder { step, operand });
                }
                let found = kinds[operand];
                if found != expected {
                    return Err(TraceError::TypeMismatch {
                        step,
                        operand,
                        expected,
                        found,
                    });
                }
            }
            kinds.push(s.kind.output_kind());
        }
        if let Some(&bad) = outputs.iter().find(|&&o| o >= steps.len()) {
            return Err(TraceError::BadOutput(bad));
        }
        Ok(Trace {
            name: name.into(),
            steps,
            outputs,
        })
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn steps(&self) -> &[TraceStep] {
        &self.steps
    }

    pub fn outputs(&self) -> &[usize] {
        &self.outputs
    }

    pub fn len(&self) -> usize {
        self.steps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.steps.is_empty()
    }

    pub fn given_count(&self) -> usize {
        self.steps
            .iter()
            .filter(|s| s.kind == StepKind::GivenPoint)
            .count()
    }

    /// Serializes to the versioned text format.
    pub fn to_text(&self) -> String {
        self.to_string()
    }

    pub fn parse(text: &str) -> Result<Self, TraceError> {
        parse_trace(text)
    }
}

impl fmt::Display for Trace {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "trace {} {}", FORMAT_VERSION, self.name)?;
        for (i, s) in self.steps.iter().enumerate() {
            write!(f, "{i} {}", s.kind.name())?;
            let (ops, branch): (Vec<usize>, Option<Branch>) = match s.kind {
                StepKind::GivenPoint => (vec![], None),
                StepKind::LineThrough(a, b)
                | StepKind::CircleCenterPoint(a, b)
                | StepKind::IntersectLL(a, b)
                | StepKind::Midpoint(a, b)
                | StepKind::PerpendicularAt(a, b)
                | StepKind::ParallelThrough(a, b) => (vec![a, b], None),
                StepKind::CircleCenterRadiusOf(a, b, c) => (vec![a, b, c], None),
                StepKind::IntersectLC(a, b, br) | StepKind::IntersectCC(a, b, br) => {
                    (vec![a, b], Some(br))
                }
            };
            for op in ops {
                write!(f, " {op}")?;
            }
            match branch {
                Some(Branch::First) => write!(f, " first")?,
                Some(Branch::Second) => write!(f, " second")?,
                Some(Branch::Near(i)) => write!(f, " near {i}")?,
                Some(Branch::Away(i)) => write!(f, " away {i}")?,
                None => {}
            }
            if let Some(label) = &s.label {
                write!(f, " label={label}")?;
            }
            writeln!(f)?;
        }
        write!(f, "outputs")?;
        for o in &self.outputs {
            write!(f, " {o}")?;
        }
        writeln!(f)
    }
}

fn parse_trace(text: &str) -> Result<Trace, TraceError> {
    let err = |line: usize, message: String| TraceError::Parse { line, message };
    let mut lines = text
        .lines()
        .enumerate()
        .map(|(n, l)| (n + 1, l.trim()))
        .filter(|(_, l)| !l.is_empty() && !l.starts_with('#'));

    let (n, header) = lines.next().ok_or_else(|| err(1, "empty trace".into()))?;
    let mut head = header.split_whitespace();
    if head.next() != Some("trace") {
        return Err(err(n, "expected `trace <version> <name>` header".into()));
    }
    match head.next() {
        Some(FORMAT_VERSION) => {}
        other => return Err(err(n, format!("unsupported version {other:?}"))),
    }
    let name = head.next().unwrap_or("").to_string();

    let mut steps = Vec::new();
    let mut outputs = None;
    for (n, line) in lines {
        if outputs.is_some() {
            return Err(err(n, "content after `outputs`".into()));
        }
        let mut tokens: Vec<&str> = line.split_whitespace().collect();
        if tokens[0] == "outputs" {
            let outs = tokens[1..]
                .iter()
                .map(|t| {
                    t.parse::<usize>()
                        .map_err(|e| err(n, format!("output {t:?}: {e}")))
                })
                .collect::<Result<Vec<_>, _>>()?;
            outputs = Some(outs);
            continue;
        }
        let label = match tokens.last().and_then(|t| t.strip_prefix("label=")) {
            Some(l) => {
                let l = l.to_string();
                tokens.pop();
                Some(l)
            }
            None => None,
        };
        let index: usize = tokens[0]
            .parse()
            .map_err(|e| err(n, format!("step index {:?}: {e}", tokens[0])))?;
        if index != steps.len() {
            return Err(TraceError::IndexSequence { index });
        }
        let kind_name = *tokens
            .get(1)
            .ok_or_else(|| err(n, "missing step kind".into()))?;
        let rest = &tokens[2..];
        let num = |i: usize| -> Result<usize, TraceError> {
            let t = rest
                .get(i)
                .ok_or_else(|| err(n, format!("{kind_name}: missing operand {}", i + 1)))?;
            t.parse()
                .map_err(|e| err(n, format!("{kind_name}: operand {t:?}: {e}")))
        };
        let expect_len = |len: usize| {
            if rest.len() == len {
                Ok(())
            } else {
                Err(err(
                    n,
                    format!("{kind_name}: expected {len} fields, got {}", rest.len()),
                ))
            }
        };
        let branch = |at: usize| -> Result<Branch, TraceError> {
            match rest.get(at).copied() {
                Some("first") => expect_len(at + 1).map(|_| Branch::First),
                Some("second") => expect_len(at + 1).map(|_| Branch::Second),
                Some("near") => {
                    expect_len(at + 2)?;
                    Ok(Branch::Near(num(at + 1)?))
                }
                Some("away") => {
                    expect_len(at + 2)?;
                    Ok(Branch::Away(num(at + 1)?))
                }
                other => Err(err(
                    n,
                    format!("{kind_name}: bad branch selector {other:?}"),
                )),
            }
        };
        let kind = match kind_name {
            "given_point" => {
                expect_len(0)?;
                StepKind::GivenPoint
            }
            "line_through" => {
                expect_len(2)?;
                StepKind::LineThrough(num(0)?, num(1)?)
            }
            "circle_center_point" => {
                expect_len(2)?;
                StepKind::CircleCenterPoint(num(0)?, num(1)?)
            }
            "circle_center_radius_of" => {
                expect_len(3)?;
                StepKind::CircleCenterRadiusOf(num(0)?, num(1)?, num(2)?)
            }
            "intersect_ll" => {
                expect_len(2)?;
                StepKind::IntersectLL(num(0)?, num(1)?)
            }
            "intersect_lc" => StepKind::IntersectLC(num(0)?, num(1)?, branch(2)?),
            "intersect_cc" => StepKind::IntersectCC(num(0)?, num(1)?, branch(2)?),
            "midpoint" => {
                expect_len(2)?;
                StepKind::Midpoint(num(0)?, num(1)?)
            }
            "perpendicular_at" => {
                expect_len(2)?;
                StepKind::PerpendicularAt(num(0)?, num(1)?)
            }
            "parallel_through" => {
                expect_len(2)?;
                StepKind::ParallelThrough(num(0)?, num(1)?)
            }
            other => return Err(err(n, format!("unknown step kind {other:?}"))),
        };
        steps.push(TraceStep { kind, label });
    }
    let outputs =
        outputs.ok_or_else(|| err(text.lines().count(), "missing `outputs` line".into()))?;
    Trace::new(name, steps, outputs)
}

/// Runs a trace on concrete given points and returns the object drawn at
/// every step.
pub fn replay_all(trace: &Trace, givens: &[Point]) -> Result<Vec<Object>, TraceError> {
    let expected = trace.given_count();
    if givens.len() != expected {
        return Err(TraceError::GivenCount {
            expected,
            got: givens.len(),
        });
    }
    let eps = EPS_REL * bbox_diagonal(givens.iter().copied());
    let mut given = givens.iter();
    let mut objects: Vec<Object> = Vec::with_capacity(trace.len());
    for (step, s) in trace.steps.iter().enumerate() {
        let degenerate = |source: GeomError| TraceError::Degenerate { step, source };
        let pt = |i: usize| {
            objects[i]
                .as_point()
                .expect("operand kinds checked on construction")
        };
        let ln = |i: usize| {
            objects[i]
                .as_line()
                .expect("operand kinds checked on construction")
        };
        let cr = |i: usize| {
            objects[i]
                .as_circle()
                .expect("operand kinds checked on construction")
        };
        let pick = |pts: Vec<Point>, branch: Branch| -> Result<Point, TraceError> {
            let miss = TraceError::BranchMiss { step };
            let by_distance = |reference: Point| {
                move |a: &&Point, b: &&Point| {
                    distance(**a, reference).total_cmp(&distance(**b, reference))
                }
            };
            match branch {
                Branch::First => pts.first().copied(),
                Branch::Second if pts.len() == 2 => Some(pts[1]),
                Branch::Second => None,
                Branch::Near(i) => pts.iter().min_by(by_distance(pt(i))).copied(),
                Branch::Away(i) => pts.iter().max_by(by_distance(pt(i))).copied(),
            }
            .ok_or(miss)
        };
        let obj = match s.kind {
            StepKind::GivenPoint => Object::Point(*given.next().expect("given count checked")),
            StepKind::LineThrough(p, q) => {
                Object::Line(Line::through(pt(p), pt(q)).map_err(degenerate)?)
            }
            StepKind::CircleCenterPoint(o, p) => {
                Object::Circle(Circle::new(pt(o), distance(pt(o), pt(p))).map_err(degenerate)?)
            }
            StepKind::CircleCenterRadiusOf(o, a, b) => {
                Object::Circle(Circle::new(pt(o), distance(pt(a), pt(b))).map_err(degenerate)?)
            }
            StepKind::IntersectLL(a, b) => Object::Point(
                line_line_intersection(&ln(a), &ln(b)).ok_or(TraceError::BranchMiss { step })?,
            ),
            StepKind::IntersectLC(l, c, branch) => Object::Point(pick(
                line_circle_intersection_eps(&ln(l), &cr(c), eps),
                branch,
            )?),
            StepKind::IntersectCC(a, b, branch) => {
                let pts = circle_circle_intersection_eps(&cr(a), &cr(b), eps)
                    .map_err(|_| TraceError::BranchMiss { step })?;
                Object::Point(pick(pts, branch)?)
            }
            StepKind::Midpoint(p, q) => Object::Point(pt(p).midpoint(pt(q))),
            StepKind::PerpendicularAt(l, p) => Object::Line(ln(l).perpendicular_through(pt(p))),
            StepKind::ParallelThrough(l, p) => Object::Line(ln(l).parallel_through(pt(p))),
        };
        objects.push(obj);
    }
    Ok(objects)
}

/// Runs a trace and returns its designated outputs.
pub fn replay(trace: &Trace, givens: &[Point]) -> Result<Vec<Object>, TraceError> {
    let all = replay_all(trace, givens)?;
    Ok(trace.outputs.iter().map(|&i| all[i]).collect())
}

/// Incremental trace construction; each method returns the new step index.
#[derive(Debug, Default)]
pub struct TraceBuilder {
    steps: Vec<TraceStep>,
}

impl TraceBuilder {
    pub fn new() -> Self {
        Self::default()
    }

    fn push(&mut self, kind: StepKind, label: &str) -> usize {
        self.steps.push(TraceStep {
            kind,
            label: (!label.is_empty()).then(|| label.to_string()),
        });
        self.steps.len() - 1
    }

    pub fn given(&mut self, label: &str) -> usize {
        self.push(StepKind::GivenPoint, label)
    }

    pub fn line(&mut self, p: usize, q: usize, label: &str) -> usize {
        self.push(StepKind::LineThrough(p, q), label)
    }

    pub fn circle(&mut self, center: usize, through: usize, label: &str) -> usize {
        self.push(StepKind::CircleCenterPoint(center, through), label)
    }

    pub fn circle_radius_of(&mut self, center: usize, a: usize, b: usize, label: &str) -> usize {
        self.push(StepKind::CircleCenterRadiusOf(center, a, b), label)
    }

    pub fn meet_ll(&mut self, a: usize, b: usize, label: &str) -> usize {
        self.push(StepKind::IntersectLL(a, b), label)
    }

    pub fn meet_lc(&mut self, l: usize, c: usize, branch: Branch, label: &str) -> usize {
        self.push(StepKind::IntersectLC(l, c, branch), label)
    }

    pub fn meet_cc(&mut self, a: usize, b: usize, branch: Branch, label: &str) -> usize {
        self.push(StepKind::IntersectCC(a, b, branch), label)
    }

    pub fn midpoint(&mut self, p: usize, q: usize, label: &str) -> usize {
        self.push(StepKind::Midpoint(p, q), label)
    }

    pub fn perpendicular(&mut self, l: usize, p: usize, label: &str) -> usize {
        self.push(StepKind::PerpendicularAt(l, p), label)
    }

    pub fn parallel(&mut self, l: usize, p: usize, label: &str) -> usize {
        self.push(StepKind::ParallelThrough(l, p), label)
    }

    pub fn finish(self, name: &str, outputs: Vec<usize>) -> Result<Trace, TraceError> {
        Trace::new(name, self.steps, outputs)
    }
}

/// Circle through three given points `A, B, C` from two perpendicular
/// bisectors. 11 steps; output: the circle.
pub fn program_circumcircle() -> Trace {
    let mut t = TraceBuilder::new();
    let a = t.given("A");
    let b = t.given("B");
    let c = t.given("C");
    let m_ab = t.midpoint(a, b, "M_AB");
    let ab = t.line(a, b, "AB");
    let bis_ab = t.perpendicular(ab, m_ab, "bisector_AB");
    let m_bc = t.midpoint(b, c, "M_BC");
    let bc = t.line(b, c, "BC");
    let bis_bc = t.perpendicular(bc, m_bc, "bisector_BC");
    let o = t.meet_ll(bis_ab, bis_bc, "O");
    let circle = t.circle(o, a, "circumcircle");
    t.finish("circumcircle", vec![circle])
        .expect("well-formed program")
}

/// Fourth proportional. Givens `O, A, C` on one ray with `|OA| = a`,
/// `|OC| = c`, and `B` on another ray with `|OB| = b`; the parallel to `BC`
/// through `A` meets `OB` at `X` with `|OX| = ab/c`. 8 steps; outputs: `O`,
/// `X`.
pub fn program_fourth_proportional() -> Trace {
    let mut t = TraceBuilder::new();
    let o = t.given("O");
    let a = t.given("A");
    let c = t.given("C");
    let b = t.given("B");
    let bc = t.line(b, c, "BC");
    let ob = t.line(o, b, "OB");
    let par = t.parallel(bc, a, "parallel_BC_through_A");
    let x = t.meet_ll(par, ob, "X");
    t.finish("fourth_proportional", vec![o, x])
        .expect("well-formed program")
}

/// Legs of a right triangle from its hypotenuse `PQ` and an acute angle
/// drawn as two rays `VU1`, `VU2`. The angle is copied to `P` along `PQ`
/// and the copy meets the circle on diameter `PQ` at `T`, so
/// `|PT| = c cos(a)` and `|QT| = c sin(a)`. 17 steps; outputs: `P`, `Q`, `T`.
pub fn program_right_triangle_legs() -> Trace {
    let mut t = TraceBuilder::new();
    let p = t.given("P");
    let q = t.given("Q");
    let v = t.given("V");
    let u1 = t.given("U1");
    let u2 = t.given("U2");
    let ray2 = t.line(v, u2, "ray_VU2");
    let arc_v = t.circle(v, u1, "arc_at_V");
    let w = t.meet_lc(ray2, arc_v, Branch::Near(u2), "W");
    let pq = t.line(p, q, "PQ");
    let arc_p = t.circle_radius_of(p, v, u1, "arc_at_P");
    let e = t.meet_lc(pq, arc_p, Branch::Near(q), "E");
    let chord = t.circle_radius_of(e, u1, w, "chord_at_E");
    let f = t.meet_cc(arc_p, chord, Branch::First, "F");
    let pf = t.line(p, f, "copied_ray");
    let m = t.midpoint(p, q, "M");
    let thales = t.circle(m, p, "thales");
    let foot = t.meet_lc(pf, thales, Branch::Away(p), "T");
    t.finish("right_triangle_legs", vec![p, q, foot])
        .expect("well-formed program")
}

/// Inverse of a point `P` outside the circle of inversion about `O` through
/// `S`: the circle on diameter `OP` meets the inversion circle at a tangent
/// point `A`, and the perpendicular from `A` to `OP` has foot `P'`.
/// 10 steps; output: `P'`.
pub fn program_invert_point() -> Trace {
    let mut t = TraceBuilder::new();
    let o = t.given("O");
    let s = t.given("S");
    let p = t.given("P");
    let ci = t.circle(o, s, "inversion_circle");
    let m = t.midpoint(o, p, "M");
    let diam = t.circle(m, o, "circle_on_OP");
    let a = t.meet_cc(ci, diam, Branch::First, "A");
    let op = t.line(o, p, "OP");
    let perp = t.perpendicular(op, a, "perpendicular_from_A");
    let image = t.meet_ll(op, perp, "P'");
    t.finish("invert_point", vec![image])
        .expect("well-formed program")
}

/// Inverse of a point `P'` inside the circle of inversion: the perpendicular
/// to `OP'` at `P'` meets the circle at `A`, and the tangent at `A` meets
/// `OP'` at `P`. 10 steps; output: `P`.
pub fn program_invert_point_inside() -> Trace {
    let mut t = TraceBuilder::new();
    let o = t.given("O");
    let s = t.given("S");
    let p = t.given("P'");
    let ci = t.circle(o, s, "inversion_circle");
    let op = t.line(o, p, "OP'");
    let perp = t.perpendicular(op, p, "perpendicular_at_P'");
    let a = t.meet_lc(perp, ci, Branch::First, "A");
    let oa = t.line(o, a, "OA");
    let tangent = t.perpendicular(oa, a, "tangent_at_A");
    let image = t.meet_ll(tangent, op, "P");
    t.finish("invert_point_inside", vec![image])
        .expect("well-formed program")
}

/// Limiting points of two separated circles with different radii, the
/// larger one first. Givens: `O1`, a point `X1` on circle 1, `O2`, a point
/// `X2` on circle 2.
///
/// A right triangle with hypotenuse `O1O2` and leg `r1 - r2` gives the
/// directions of the two outer common tangents; the midpoints of the tangent
/// segments span the radical axis, which meets `O1O2` at `C`. The tangent
/// length from `C` is the radius of the circle about `C` orthogonal to both
/// inputs, and that circle cuts `O1O2` at the limiting points.
/// 33 steps; outputs: both limiting points, `C`, the orthogonal circle and
/// the radical axis.
pub fn program_concentricizer() -> Trace {
    let mut t = TraceBuilder::new();
    let o1 = t.given("O1");
    let x1 = t.given("X1");
    let o2 = t.given("O2");
    let x2 = t.given("X2");
    let o1x1 = t.line(o1, x1, "O1X1");
    let r2_at_x1 = t.circle_radius_of(x1, o2, x2, "r2_about_X1");
    let y = t.meet_lc(o1x1, r2_at_x1, Branch::Near(o1), "Y");
    let leg = t.circle(o1, y, "radius_difference");
    let n = t.midpoint(o1, o2, "N");
    let thales = t.circle(n, o1, "thales_O1O2");
    let t1 = t.meet_cc(leg, thales, Branch::First, "T1");
    let t2 = t.meet_cc(leg, thales, Branch::Second, "T2");
    let c1 = t.circle(o1, x1, "C1");
    let c2 = t.circle(o2, x2, "C2");
    let tangent_midpoint = |t: &mut TraceBuilder, foot: usize, k: &str| {
        let radial = t.line(o1, foot, &format!("O1T{k}"));
        let a = t.meet_lc(radial, c1, Branch::Near(foot), &format!("A{k}"));
        let parallel = t.parallel(radial, o2, &format!("O2_parallel_{k}"));
        let b = t.meet_lc(parallel, c2, Branch::Near(a), &format!("B{k}"));
        t.midpoint(a, b, &format!("M{k}"))
    };
    let m1 = tangent_midpoint(&mut t, t1, "1");
    let m2 = tangent_midpoint(&mut t, t2, "2");
    let axis = t.line(m1, m2, "radical_axis");
    finish_concentricizer(t, "concentricizer", o1, o2, c1, axis)
}

/// Limiting points of two separated circles with equal radii, where the
/// outer tangents are parallel to the line of centres. Same givens and
/// outputs as [`program_concentricizer`]. 23 steps.
pub fn program_concentricizer_equal_radii() -> Trace {
    let mut t = TraceBuilder::new();
    let o1 = t.given("O1");
    let x1 = t.given("X1");
    let o2 = t.given("O2");
    let x2 = t.given("X2");
    let c1 = t.circle(o1, x1, "C1");
    let c2 = t.circle(o2, x2, "C2");
    let centers = t.line(o1, o2, "O1O2");
    let perp1 = t.perpendicular(centers, o1, "normal_at_O1");
    let a1 = t.meet_lc(perp1, c1, Branch::First, "A1");
    let a2 = t.meet_lc(perp1, c1, Branch::Second, "A2");
    let perp2 = t.perpendicular(centers, o2, "normal_at_O2");
    let b1 = t.meet_lc(perp2, c2, Branch::Near(a1), "B1");
    let b2 = t.meet_lc(perp2, c2, Branch::Near(a2), "B2");
    let m1 = t.midpoint(a1, b1, "M1");
    let m2 = t.midpoint(a2, b2, "M2");
    let axis = t.line(m1, m2, "radical_axis");
    finish_concentricizer(t, "concentricizer_equal_radii", o1, o2, c1, axis)
}

fn finish_concentricizer(
    mut t: TraceBuilder,
    name: &str,
    o1: usize,
    o2: usize,
    c1: usize,
    axis: usize,
) -> Trace {
    let centers = match t
        .steps
        .iter()
        .position(|s| s.kind == StepKind::LineThrough(o1, o2))
    {
        Some(i) => i,
        None => t.line(o1, o2, "O1O2"),
    };
    let c = t.meet_ll(axis, centers, "C");
    let mid = t.midpoint(c, o1, "midpoint_CO1");
    let diam = t.circle(mid, c, "circle_on_CO1");
    let d1 = t.meet_cc(diam, c1, Branch::First, "D1");
    let c0 = t.circle(c, d1, "C0");
    let l1 = t.meet_lc(centers, c0, Branch::First, "O_I1");
    let l2 = t.meet_lc(centers, c0, Branch::Second, "O_I2");
    t.finish(name, vec![l1, l2, c, c0, axis])
        .expect("well-formed program")
}

/// Given points for [`program_circumcircle`].
pub fn circumcircle_givens(a: Point, b: Point, c: Point) -> Vec<Point> {
    vec![a, b, c]
}

/// Given points for [`program_fourth_proportional`]: lengths on the x-axis
/// and on a ray at 60 degrees from the origin.
pub fn fourth_proportional_givens(a: f64, b: f64, c: f64) -> Vec<Point> {
    let dir = Point::new(0.5, 0.75f64.sqrt());
    vec![
        Point::ORIGIN,
        Point::new(a, 0.0),
        Point::new(c, 0.0),
        dir * b,
    ]
}

/// Given points for [`program_right_triangle_legs`]: hypotenuse from the
/// origin along the x-axis, and the angle drawn as two unit rays. Turning a
/// numeric angle into rays is a convenience outside the straightedge and
/// compass model.
pub fn right_triangle_givens(hypotenuse: f64, angle: f64) -> Vec<Point> {
    vec![
        Point::ORIGIN,
        Point::new(hypotenuse, 0.0),
        Point::new(-3.0, 2.0),
        Point::new(-2.0, 2.0),
        Point::new(-3.0 + angle.cos(), 2.0 + angle.sin()),
    ]
}

/// Given points for the point-inversion programs.
pub fn invert_point_givens(center: Point, radius: f64, p: Point) -> Vec<Point> {
    vec![center, center + Point::new(radius, 0.0), p]
}

/// Picks the concentricizer program for a pair of separated circles and
/// orders the givens so the larger circle comes first.
pub fn concentricizer_for(c1: &Circle, c2: &Circle) -> (Trace, Vec<Point>) {
    let (big, small) = if c1.radius >= c2.radius {
        (c1, c2)
    } else {
        (c2, c1)
    };
    let givens = vec![
        big.center,
        big.center + Point::new(big.radius, 0.0),
        small.center,
        small.center + Point::new(small.radius, 0.0),
    ];
    let eps = EPS_REL * crate::geom::circles_scale([c1, c2]);
    let program = if big.radius - small.radius <= eps {
        program_concentricizer_equal_radii()
    } else {
        program_concentricizer()
    };
    (program, givens)
}

/// Every named program, for listing and serialization.
pub fn all_programs() -> Vec<Trace> {
    vec![
        program_circumcircle(),
        program_fourth_proportional(),
        program_right_triangle_legs(),
        program_invert_point(),
        program_invert_point_inside(),
        program_concentricizer(),
        program_concentricizer_equal_radii(),
    ]
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::inversion::concentricizing_inversion;
    use std::f64::consts::FRAC_PI_4;

    fn pt(x: f64, y: f64) -> Point {
        Point::new(x, y)
    }

    fn out_point(o: &Object) -> Point {
        o.as_point().expect("point output")
    }

    #[test]
    fn step_counts() {
        let counts: Vec<(String, usize)> = all_programs()
            .iter()
            .map(|t| (t.name().to_string(), t.len()))
            .collect();
        let expected = [
            ("circumcircle", 11),
            ("fourth_proportional", 8),
            ("right_triangle_legs", 17),
            ("invert_point", 10),
            ("invert_point_inside", 10),
            ("concentricizer", 33),
            ("concentricizer_equal_radii", 23),
        ];
        for ((name, len), (en, el)) in counts.iter().zip(expected) {
            assert_eq!((name.as_str(), *len), (en, el));
        }
    }

    #[test]
    fn circumcircle_examples() {
        let t = program_circumcircle();
        let c = replay(&t, &[pt(1.0, 0.0), pt(0.0, 1.0), pt(-1.0, 0.0)]).unwrap()[0]
            .as_circle()
            .unwrap();
        assert!(c.center.norm() < 1e-15 && (c.radius - 1.0).abs() < 1e-15);

        let givens = [pt(0.0, 0.0), pt(2.0, 0.0), pt(1.0, 1.0)];
        let c = replay(&t, &givens).unwrap()[0].as_circle().unwrap();
        assert!((c.center - pt(1.0, 0.0)).norm() < 1e-15 && (c.radius - 1.0).abs() < 1e-15);
        assert_eq!(replay(&t, &givens), replay(&t, &givens));

        assert_eq!(
            replay(&t, &[pt(0.0, 0.0), pt(1.0, 0.0), pt(2.0, 0.0)]),
            Err(TraceError::BranchMiss { step: 9 })
        );
    }

    #[test]
    fn fourth_proportional_examples() {
        let t = program_fourth_proportional();
        for (a, b, c, x) in [
            (2.0, 3.0, 4.0, 1.5),
            (2.5, 3.0, 2.5, 3.0),
            (1.0, 1.0, 1.0, 1.0),
        ] {
            let out = replay(&t, &fourth_proportional_givens(a, b, c)).unwrap();
            let len = distance(out_point(&out[0]), out_point(&out[1]));
            assert!((len - x).abs() < 1e-14, "{a} {b} {c}: {len}");
        }
    }

    #[test]
    fn right_triangle_examples() {
        let t = program_right_triangle_legs();
        for (c, angle, sin_leg, cos_leg) in [
            (2.0, 30f64.to_radians(), 1.0, 3f64.sqrt()),
            (1.0, FRAC_PI_4, 0.5f64.sqrt(), 0.5f64.sqrt()),
        ] {
            let out = replay(&t, &right_triangle_givens(c, angle)).unwrap();
            let [p, q, foot] = [0, 1, 2].map(|i| out_point(&out[i]));
            assert!((distance(q, foot) - sin_leg).abs() < 1e-14);
            assert!((distance(p, foot) - cos_leg).abs() < 1e-14);
        }
    }

    #[test]
    fn invert_point_examples() {
        let t = program_invert_point();
        let out = replay(&t, &invert_point_givens(Point::ORIGIN, 2.0, pt(4.0, 0.0))).unwrap();
        assert!((out_point(&out[0]) - pt(1.0, 0.0)).norm() < 1e-15);
        // on the circle the two circles touch at P itself
        let out = replay(&t, &invert_point_givens(Point::ORIGIN, 2.0, pt(0.0, 2.0))).unwrap();
        assert!((out_point(&out[0]) - pt(0.0, 2.0)).norm() < 1e-12);

        let inside = program_invert_point_inside();
        let out = replay(
            &inside,
            &invert_point_givens(Point::ORIGIN, 2.0, pt(1.0, 0.0)),
        )
        .unwrap();
        assert!((out_point(&out[0]) - pt(4.0, 0.0)).norm() < 1e-14);
    }

    #[test]
    fn concentricizer_examples() {
        let (a, b) = (
            Circle::new(Point::ORIGIN, 1.0).unwrap(),
            Circle::new(pt(4.0, 0.0), 1.0).unwrap(),
        );
        let (t, givens) = concentricizer_for(&a, &b);
        assert_eq!(t.name(), "concentricizer_equal_radii");
        let out = replay(&t, &givens).unwrap();
        let s = 3f64.sqrt();
        let mut lp = [out_point(&out[0]), out_point(&out[1])];
        lp.sort_by(Point::cmp_xy);
        assert!((lp[0] - pt(2.0 - s, 0.0)).norm() < 1e-14);
        assert!((lp[1] - pt(2.0 + s, 0.0)).norm() < 1e-14);
        // equal radii: C is the midpoint of the centres
        assert!((out_point(&out[2]) - pt(2.0, 0.0)).norm() < 1e-15);

        let b = Circle::new(pt(5.0, 1.0), 2.0).unwrap();
        let (t, givens) = concentricizer_for(&a, &b);
        assert_eq!(t.name(), "concentricizer");
        let out = replay(&t, &givens).unwrap();
        let mut lp = [out_point(&out[0]), out_point(&out[1])];
        lp.sort_by(Point::cmp_xy);
        let analytic = concentricizing_inversion(&a, &b).unwrap().limiting_points;
        for k in 0..2 {
            assert!((lp[k] - analytic[k]).norm() < 1e-12);
        }
    }

    #[test]
    fn construction_rejects_bad_programs() {
        let step = |kind| TraceStep { kind, label: None };
        assert_eq!(
            Trace::new("x", vec![step(StepKind::LineThrough(0, 1))], vec![]),
            Err(TraceError::OperandOrder {
                step: 0,
                operand: 0
            })
        );
        let bad = vec![
            step(StepKind::GivenPoint),
            step(StepKind::GivenPoint),
            step(StepKind::Midpoint(0, 1)),
            step(StepKind::PerpendicularAt(0, 2)),
        ];
        assert!(matches!(
            Trace::new("x", bad, vec![]),
            Err(TraceError::TypeMismatch {
                step: 3,
                operand: 0,
                ..
            })
        ));
        assert_eq!(
            replay(&program_circumcircle(), &[pt(0.0, 0.0)]),
            Err(TraceError::GivenCount {
                expected: 3,
                got: 1
            })
        );
    }

    #[test]
    fn text_round_trip() {
        for t in all_programs() {
            let text = t.to_text();
            assert_eq!(Trace::parse(&text).unwrap(), t, "{text}");
        }
    }

    #[test]
    fn parse_errors_carry_line_numbers() {
        let text = "trace v1 x\n0 given_point\n1 given_point\n2 line_through 0\noutputs 2\n";
        assert!(matches!(
            Trace::parse(text),
            Err(TraceError::Parse { line: 4, .. })
        ));
        assert!(matches!(
            Trace::parse("trace v9 x\noutputs\n"),
            Err(TraceError::Parse { line: 1, .. })
        ));
        let text = "trace v1 x\n0 given_point\n1 given_point\n2 line_through 0 1\n";
        assert!(matches!(Trace::parse(text), Err(TraceError::Parse { .. })));
    }
}
