//! Points, circles, lines and the handful of measurements the rest of the
//! crate is built on.
//!
//! All degeneracy decisions (tangency, collinearity, concentricity) go through
//! one relative tolerance, [`EPS_REL`], multiplied by the bounding-box diagonal
//! of whatever objects are being compared. Functions without an `_eps` suffix
//! derive that scale from their own arguments.

use std::cmp::Ordering;
use std::f64::consts::FRAC_PI_2;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use thiserror::Error;

/// Default relative tolerance for degeneracy tests.
pub const EPS_REL: f64 = 1e-9;

/// Components of a unit normal smaller than this are treated as zero when
/// choosing the canonical line orientation.
const ORIENTATION_EPS: f64 = 1e-12;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum GeomError {
    #[error("non-finite coordinate")]
    NonFinite,
    #[error("radius must be positive and finite, got {0}")]
    DegenerateRadius(f64),
    #[error("line normal must be non-zero")]
    DegenerateNormal,
    #[error("circles do not intersect")]
    NoIntersection,
    #[error("points are collinear")]
    CollinearPoints,
    #[error("circles are identical")]
    IdenticalCircles,
    #[error("circles are concentric")]
    ConcentricCircles,
    #[error("points coincide")]
    CoincidentPoints,
    #[error("angle {0} rad outside [0, pi/2]")]
    AngleOutOfRange(f64),
}

#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct Point {
    pub x: f64,
    pub y: f64,
}

impl Point {
    pub const ORIGIN: Point = Point { x: 0.0, y: 0.0 };

    pub const fn new(x: f64, y: f64) -> Self {
        Point { x, y }
    }

    pub fn is_finite(self) -> bool {
        self.x.is_finite() && self.y.is_finite()
    }

    pub fn dot(self, other: Point) -> f64 {
        self.x * other.x + self.y * other.y
    }

    /// z-component of the 2D cross product.
    pub fn cross(self, other: Point) -> f64 {
        self.x * other.y - self.y * other.x
    }

    pub fn norm(self) -> f64 {
        self.x.hypot(self.y)
    }

    pub fn norm_sq(self) -> f64 {
        self.dot(self)
    }

    /// Counter-clockwise perpendicular.
    pub fn perp(self) -> Point {
        Point::new(-self.y, self.x)
    }

    pub fn lerp(self, other: Point, t: f64) -> Point {
        self + (other - self) * t
    }

    pub fn midpoint(self, other: Point) -> Point {
        Point::new(0.5 * (self.x + other.x), 0.5 * (self.y + other.y))
    }

    /// Ordering by y, then x.
    pub fn cmp_yx(&self, other: &Point) -> Ordering {
        self.y.total_cmp(&other.y).then(self.x.total_cmp(&other.x))
    }

    /// Ordering by x, then y.
    pub fn cmp_xy(&self, other: &Point) -> Ordering {
        self.x.total_cmp(&other.x).then(self.y.total_cmp(&other.y))
    }
}

impl Add for Point {
    type Output = Point;
    fn add(self, rhs: Point) -> Point {
        Point::new(self.x + rhs.x, self.y + rhs.y)
    }
}

impl Sub for Point {
    type Output = Point;
    fn sub(self, rhs: Point) -> Point {
        Point::new(self.x - rhs.x, self.y - rhs.y)
    }
}

impl Mul<f64> for Point {
    type Output = Point;
    fn mul(self, rhs: f64) -> Point {
        Point::new(self.x * rhs, self.y * rhs)
    }
}

impl Neg for Point {
    type Output = Point;
    fn neg(self) -> Point {
        Point::new(-self.x, -self.y)
    }
}

impl fmt::Display for Point {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {})", self.x, self.y)
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Circle {
    pub center: Point,
    pub radius: f64,
}

impl Circle {
    pub fn new(center: Point, radius: f64) -> Result<Self, GeomError> {
        if !center.is_finite() {
            return Err(GeomError::NonFinite);
        }
        if !(radius.is_finite() && radius > 0.0) {
            return Err(GeomError::DegenerateRadius(radius));
        }
        Ok(Circle { center, radius })
    }

    /// Axis-aligned bounding box as `(min, max)`.
    pub fn bounds(&self) -> (Point, Point) {
        let r = Point::new(self.radius, self.radius);
        (self.center - r, self.center + r)
    }

    /// Point on the circle at polar angle `theta`.
    pub fn point_at(&self, theta: f64) -> Point {
        self.center + Point::new(theta.cos(), theta.sin()) * self.radius
    }

    pub fn scaled(&self, factor: f64) -> Circle {
        Circle {
            center: self.center * factor,
            radius: self.radius * factor,
        }
    }
}

impl fmt::Display for Circle {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "circle(center={}, r={})", self.center, self.radius)
    }
}

/// The locus `normal · p = offset` with a unit normal in canonical orientation
/// (first non-zero component positive).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Line {
    normal: Point,
    offset: f64,
}

impl Line {
    pub fn new(normal: Point, offset: f64) -> Result<Self, GeomError> {
        if !normal.is_finite() || !offset.is_finite() {
            return Err(GeomError::NonFinite);
        }
        let len = normal.norm();
        if len == 0.0 {
            return Err(GeomError::DegenerateNormal);
        }
        let (n, c) = (normal * (1.0 / len), offset / len);
        let flip = if n.x.abs() > ORIENTATION_EPS {
            n.x < 0.0
        } else {
            n.y < 0.0
        };
        Ok(if flip {
            Line {
                normal: -n,
                offset: -c,
            }
        } else {
            Line {
                normal: n,
                offset: c,
            }
        })
    }

    pub fn through(p: Point, q: Point) -> Result<Self, GeomError> {
        let dir = q - p;
        if dir.norm() == 0.0 {
            return Err(GeomError::CoincidentPoints);
        }
        let n = dir.perp();
        Line::new(n, n.dot(p))
    }

    /// Line through `p` with direction `dir`.
    pub fn with_direction(p: Point, dir: Point) -> Result<Self, GeomError> {
        let n = dir.perp();
        Line::new(n, n.dot(p))
    }

    pub fn normal(&self) -> Point {
        self.normal
    }

    pub fn offset(&self) -> f64 {
        self.offset
    }

    pub fn direction(&self) -> Point {
        -self.normal.perp()
    }

    /// Signed distance of `p` from the line, positive on the normal side.
    pub fn signed_distance(&self, p: Point) -> f64 {
        self.normal.dot(p) - self.offset
    }

    pub fn foot_of(&self, p: Point) -> Point {
        p - self.normal * self.signed_distance(p)
    }

    /// Closest point of the line to the origin.
    pub fn anchor(&self) -> Point {
        self.normal * self.offset
    }

    pub fn perpendicular_through(&self, p: Point) -> Line {
        Line::with_direction(p, self.normal).expect("unit normal is non-zero")
    }

    pub fn parallel_through(&self, p: Point) -> Line {
        Line::new(self.normal, self.normal.dot(p)).expect("unit normal is non-zero")
    }

    pub fn scaled(&self, factor: f64) -> Line {
        Line {
            normal: self.normal,
            offset: self.offset * factor,
        }
    }
}

impl fmt::Display for Line {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "line({}*x + {}*y = {})",
            self.normal.x, self.normal.y, self.offset
        )
    }
}

/// A circle or a line: the family closed under inversion.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum GeneralizedCircle {
    Circle(Circle),
    Line(Line),
}

impl GeneralizedCircle {
    pub fn as_circle(&self) -> Option<&Circle> {
        match self {
            GeneralizedCircle::Circle(c) => Some(c),
            GeneralizedCircle::Line(_) => None,
        }
    }

    pub fn as_line(&self) -> Option<&Line> {
        match self {
            GeneralizedCircle::Line(l) => Some(l),
            GeneralizedCircle::Circle(_) => None,
        }
    }

    pub fn is_line(&self) -> bool {
        matches!(self, GeneralizedCircle::Line(_))
    }

    /// Approximate equality. Circles compare centre and radius, lines compare
    /// normal and offset, all against `tol`.
    pub fn approx_eq(&self, other: &GeneralizedCircle, tol: f64) -> bool {
        match (self, other) {
            (GeneralizedCircle::Circle(a), GeneralizedCircle::Circle(b)) => {
                (a.center - b.center).norm() <= tol && (a.radius - b.radius).abs() <= tol
            }
            (GeneralizedCircle::Line(a), GeneralizedCircle::Line(b)) => {
                let same =
                    (a.normal - b.normal).norm() <= tol && (a.offset - b.offset).abs() <= tol;
                let flipped =
                    (a.normal + b.normal).norm() <= tol && (a.offset + b.offset).abs() <= tol;
                same || flipped
            }
            _ => false,
        }
    }
}

impl From<Circle> for GeneralizedCircle {
    fn from(c: Circle) -> Self {
        GeneralizedCircle::Circle(c)
    }
}

impl From<Line> for GeneralizedCircle {
    fn from(l: Line) -> Self {
        GeneralizedCircle::Line(l)
    }
}

impl fmt::Display for GeneralizedCircle {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            GeneralizedCircle::Circle(c) => c.fmt(f),
            GeneralizedCircle::Line(l) => l.fmt(f),
        }
    }
}

/// Acute intersection angle in radians, `0 <= value <= pi/2`.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd)]
pub struct Angle(f64);

impl Angle {
    pub const ZERO: Angle = Angle(0.0);
    pub const RIGHT: Angle = Angle(FRAC_PI_2);

    pub fn new(radians: f64) -> Result<Self, GeomError> {
        // absorbs the last-ulp error of degree conversions
        const SLACK: f64 = 1e-15;
        if !(-SLACK..=FRAC_PI_2 + SLACK).contains(&radians) {
            return Err(GeomError::AngleOutOfRange(radians));
        }
        Ok(Angle(radians.clamp(0.0, FRAC_PI_2)))
    }

    pub fn from_degrees(degrees: f64) -> Result<Self, GeomError> {
        if degrees == 90.0 {
            return Ok(Angle::RIGHT);
        }
        Angle::new(degrees.to_radians())
    }

    pub fn radians(self) -> f64 {
        self.0
    }

    pub fn degrees(self) -> f64 {
        self.0.to_degrees()
    }

    pub fn cos(self) -> f64 {
        if self.is_right() {
            0.0
        } else {
            self.0.cos()
        }
    }

    pub fn is_right(self) -> bool {
        self.0 >= FRAC_PI_2 - 1e-12
    }
}

/// Diagonal of the bounding box of a set of points.
pub fn bbox_diagonal<I: IntoIterator<Item = Point>>(points: I) -> f64 {
    let mut min = Point::new(f64::INFINITY, f64::INFINITY);
    let mut max = Point::new(f64::NEG_INFINITY, f64::NEG_INFINITY);
    let mut any = false;
    for p in points {
        any = true;
        min = Point::new(min.x.min(p.x), min.y.min(p.y));
        max = Point::new(max.x.max(p.x), max.y.max(p.y));
    }
    if any {
        (max - min).norm()
    } else {
        0.0
    }
}

/// Bounding-box diagonal of a set of circles, including their extent.
pub fn circles_scale<'a, I: IntoIterator<Item = &'a Circle>>(circles: I) -> f64 {
    bbox_diagonal(circles.into_iter().flat_map(|c| {
        let (lo, hi) = c.bounds();
        [lo, hi]
    }))
}

pub fn distance(p: Point, q: Point) -> f64 {
    (q - p).norm()
}

/// `|p - center|^2 - radius^2`: positive outside, zero on, negative inside.
pub fn power_of_point(p: Point, c: &Circle) -> f64 {
    (p - c.center).norm_sq() - c.radius * c.radius
}

/// Side of a triangle opposite the angle `gamma` enclosed by sides `a` and `b`.
pub fn law_of_cosines_side(a: f64, b: f64, gamma: f64) -> f64 {
    // (a-b)^2 + 4ab sin^2(gamma/2) avoids cancellation for small gamma
    let s = (0.5 * gamma).sin();
    ((a - b) * (a - b) + 4.0 * a * b * s * s).max(0.0).sqrt()
}

/// Triangle area from side lengths, Kahan's stable form of Heron's formula.
fn triangle_area(a: f64, b: f64, c: f64) -> f64 {
    let mut s = [a, b, c];
    s.sort_by(|x, y| y.total_cmp(x));
    let [a, b, c] = s;
    let p = (a + (b + c)) * (c - (a - b)) * (c + (a - b)) * (a + (b - c));
    0.25 * p.max(0.0).sqrt()
}

/// Acute angle between two circles at a common point.
pub fn angle_between_circles(c1: &Circle, c2: &Circle) -> Result<Angle, GeomError> {
    angle_between_circles_eps(c1, c2, EPS_REL * circles_scale([c1, c2]))
}

/// [`angle_between_circles`] with an absolute tolerance `eps`: pairs within
/// `eps` of tangency, on either side, give [`Angle::ZERO`].
pub fn angle_between_circles_eps(c1: &Circle, c2: &Circle, eps: f64) -> Result<Angle, GeomError> {
    circle_circle_angle(c1, c2, eps, eps)
}

/// Like [`angle_between_circles_eps`] but only pairs at or outside tangency
/// snap to zero; slightly overlapping pairs report their true small angle.
pub fn angle_between_circles_unsnapped_eps(
    c1: &Circle,
    c2: &Circle,
    eps: f64,
) -> Result<Angle, GeomError> {
    circle_circle_angle(c1, c2, eps, 0.0)
}

fn circle_circle_angle(c1: &Circle, c2: &Circle, eps: f64, band: f64) -> Result<Angle, GeomError> {
    let (r1, r2) = (c1.radius, c2.radius);
    let d = distance(c1.center, c2.center);
    if d <= eps && (r1 - r2).abs() <= eps {
        return Err(GeomError::IdenticalCircles);
    }
    let (outer, inner) = (r1 + r2, (r1 - r2).abs());
    if d > outer + eps || d < inner - eps {
        return Err(GeomError::NoIntersection);
    }
    if d >= outer - band || d <= inner + band {
        return Ok(Angle::ZERO);
    }
    let (big, small) = if r1 >= r2 { (r1, r2) } else { (r2, r1) };
    let cos = (small * small + (big - d) * (big + d)) / (2.0 * r1 * r2);
    let sin = 2.0 * triangle_area(r1, r2, d) / (r1 * r2);
    Ok(Angle(sin.atan2(cos.abs()).clamp(0.0, FRAC_PI_2)))
}

/// Acute angle between a line and a circle at a common point.
pub fn angle_line_circle_eps(l: &Line, c: &Circle, eps: f64) -> Result<Angle, GeomError> {
    line_circle_angle(l, c, eps, eps)
}

fn line_circle_angle(l: &Line, c: &Circle, eps: f64, band: f64) -> Result<Angle, GeomError> {
    let h = l.signed_distance(c.center).abs();
    let r = c.radius;
    if h > r + eps {
        return Err(GeomError::NoIntersection);
    }
    if h >= r - band {
        return Ok(Angle::ZERO);
    }
    let s = ((r - h) * (r + h)).sqrt();
    Ok(Angle(s.atan2(h).clamp(0.0, FRAC_PI_2)))
}

/// Acute angle between two lines. Distinct parallel lines meet tangentially
/// at infinity and give zero.
pub fn angle_between_lines_eps(l1: &Line, l2: &Line, eps: f64) -> Result<Angle, GeomError> {
    let cross = l1.normal.cross(l2.normal).abs();
    let dot = l1.normal.dot(l2.normal);
    if cross <= ORIENTATION_EPS {
        let off = if dot >= 0.0 { l2.offset } else { -l2.offset };
        if (l1.offset - off).abs() <= eps {
            return Err(GeomError::IdenticalCircles);
        }
        return Ok(Angle::ZERO);
    }
    Ok(Angle(cross.atan2(dot.abs()).clamp(0.0, FRAC_PI_2)))
}

/// Acute angle between any two generalized circles, with the tangency band
/// of [`angle_between_circles_eps`].
pub fn angle_between_eps(
    a: &GeneralizedCircle,
    b: &GeneralizedCircle,
    eps: f64,
) -> Result<Angle, GeomError> {
    generalized_angle(a, b, eps, eps)
}

/// Acute angle between any two generalized circles without the inner
/// tangency band.
pub fn angle_between_unsnapped_eps(
    a: &GeneralizedCircle,
    b: &GeneralizedCircle,
    eps: f64,
) -> Result<Angle, GeomError> {
    generalized_angle(a, b, eps, 0.0)
}

fn generalized_angle(
    a: &GeneralizedCircle,
    b: &GeneralizedCircle,
    eps: f64,
    band: f64,
) -> Result<Angle, GeomError> {
    use GeneralizedCircle as G;
    match (a, b) {
        (G::Circle(c1), G::Circle(c2)) => circle_circle_angle(c1, c2, eps, band),
        (G::Line(l), G::Circle(c)) | (G::Circle(c), G::Line(l)) => {
            line_circle_angle(l, c, eps, band)
        }
        (G::Line(l1), G::Line(l2)) => angle_between_lines_eps(l1, l2, eps),
    }
}

/// Circumcircle of three points.
pub fn circle_through_three_points(a: Point, b: Point, c: Point) -> Result<Circle, GeomError> {
    let scale = bbox_diagonal([a, b, c]);
    circle_through_three_points_eps(a, b, c, EPS_REL * scale * scale)
}

/// [`circle_through_three_points`] with an explicit threshold on twice the
/// oriented triangle area.
pub fn circle_through_three_points_eps(
    a: Point,
    b: Point,
    c: Point,
    area_eps: f64,
) -> Result<Circle, GeomError> {
    if !(a.is_finite() && b.is_finite() && c.is_finite()) {
        return Err(GeomError::NonFinite);
    }
    let (ab, ac) = (b - a, c - a);
    let det = ab.cross(ac);
    if det.abs() <= area_eps {
        return Err(GeomError::CollinearPoints);
    }
    // perpendicular bisectors of ab and ac, solved relative to a
    let (lb, lc) = (ab.norm_sq(), ac.norm_sq());
    let rel = Point::new(ac.y * lb - ab.y * lc, ab.x * lc - ac.x * lb) * (0.5 / det);
    let center = a + rel;
    let radius = (rel.norm() + (center - b).norm() + (center - c).norm()) / 3.0;
    Circle::new(center, radius)
}

/// Intersection points of two circles sorted by y then x.
pub fn circle_circle_intersection(c1: &Circle, c2: &Circle) -> Result<Vec<Point>, GeomError> {
    circle_circle_intersection_eps(c1, c2, EPS_REL * circles_scale([c1, c2]))
}

pub fn circle_circle_intersection_eps(
    c1: &Circle,
    c2: &Circle,
    eps: f64,
) -> Result<Vec<Point>, GeomError> {
    let (r1, r2) = (c1.radius, c2.radius);
    let delta = c2.center - c1.center;
    let d = delta.norm();
    if d <= eps && (r1 - r2).abs() <= eps {
        return Err(GeomError::IdenticalCircles);
    }
    let (outer, inner) = (r1 + r2, (r1 - r2).abs());
    if d > outer + eps || d < inner - eps || d == 0.0 {
        return Ok(Vec::new());
    }
    let u = delta * (1.0 / d);
    let a = ((d * d + r1 * r1 - r2 * r2) / (2.0 * d)).clamp(-r1, r1);
    let foot = c1.center + u * a;
    if d >= outer - eps || d <= inner + eps {
        return Ok(vec![foot]);
    }
    let h = ((r1 - a) * (r1 + a)).max(0.0).sqrt();
    let mut pts = vec![foot + u.perp() * h, foot - u.perp() * h];
    pts.sort_by(Point::cmp_yx);
    Ok(pts)
}

/// Intersection points of a line and a circle sorted by y then x.
pub fn line_circle_intersection_eps(l: &Line, c: &Circle, eps: f64) -> Vec<Point> {
    let h = l.signed_distance(c.center);
    let r = c.radius;
    if h.abs() > r + eps {
        return Vec::new();
    }
    let foot = c.center - l.normal * h;
    if h.abs() >= r - eps {
        return vec![foot];
    }
    let t = ((r - h.abs()) * (r + h.abs())).sqrt();
    let dir = l.direction();
    let mut pts = vec![foot + dir * t, foot - dir * t];
    pts.sort_by(Point::cmp_yx);
    pts
}

/// Intersection of two lines, `None` when parallel.
pub fn line_line_intersection(l1: &Line, l2: &Line) -> Option<Point> {
    let det = l1.normal.cross(l2.normal);
    if det.abs() <= ORIENTATION_EPS {
        return None;
    }
    let x = (l1.offset * l2.normal.y - l2.offset * l1.normal.y) / det;
    let y = (l1.normal.x * l2.offset - l2.normal.x * l1.offset) / det;
    Some(Point::new(x, y))
}

/// Locus of equal power with respect to two circles with distinct centres.
pub fn radical_axis(c1: &Circle, c2: &Circle) -> Result<Line, GeomError> {
    radical_axis_eps(c1, c2, EPS_REL * circles_scale([c1, c2]))
}

pub fn radical_axis_eps(c1: &Circle, c2: &Circle, eps: f64) -> Result<Line, GeomError> {
    let delta = c2.center - c1.center;
    let d = delta.norm();
    if d <= eps {
        return Err(GeomError::ConcentricCircles);
    }
    let u = delta * (1.0 / d);
    let along = (d * d + c1.radius * c1.radius - c2.radius * c2.radius) / (2.0 * d);
    Line::new(u, u.dot(c1.center) + along)
}
