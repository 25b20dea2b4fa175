//! Circles meeting three given circles at prescribed angles.
//!
//! The solver inverts the plane so that two of the given circles become
//! concentric. In that picture a candidate circle of radius `r'` meets the
//! inner and outer rings at angles `beta` and `gamma` exactly when its centre
//! sits at the same distance from the common centre under both law-of-cosines
//! readings, which pins `r'`:
//!
//! ```text
//! 2 r' (r2' cos beta + r3' cos gamma) = r3'^2 - r2'^2
//! ```
//!
//! The distances from the candidate centre to the centre of the remaining
//! image circle and to the common centre then follow from the law of cosines,
//! the centre is placed by intersecting two circles, and the result is mapped
//! back through the same inversion. Flipping the sign in front of each cosine
//! leaves the acute intersection angles unchanged, so every sign choice (and
//! both placements of the centre) is a candidate; each is checked against the
//! original circles before it is reported.
//!
//! When all three angles are right angles the candidate in the inverted
//! picture is the line through the two image centres.

use std::cmp::Ordering;
use std::fmt;
use std::str::FromStr;

use thiserror::Error;

use crate::geom::{
    angle_between_eps, angle_between_unsnapped_eps, circle_circle_intersection_eps, circles_scale,
    distance, law_of_cosines_side, Angle, Circle, GeneralizedCircle, GeomError, Line, Point,
    EPS_REL,
};
use crate::inversion::{concentricizing_inversion, Inversion, InversionError};

/// Default bound on the angle residual of an accepted solution, radians.
pub const DEFAULT_TOLERANCE: f64 = 1e-7;

/// Relative tolerance under which two solutions are considered the same.
pub const DEDUP_REL: f64 = 1e-7;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum SteinerError {
    #[error("DegenerateRadius: circle {0} has a non-positive radius")]
    DegenerateRadius(usize),
    #[error("ImproperTriangle: the three centers are collinear")]
    ImproperTriangle,
    #[error("OverlappingCircles: circles {0} and {1} overlap")]
    OverlappingCircles(usize, usize),
    #[error("TangentPair: the circles to be made concentric touch")]
    TangentPair,
    #[error("DegenerateImage: the remaining circle passes through the inversion center")]
    DegenerateImage,
    #[error("OrthogonalDegenerate: both ring angles are right angles")]
    OrthogonalDegenerate,
    #[error("InfeasibleVariant: no positive radius for this sign choice")]
    InfeasibleVariant,
    #[error("NoPlacement: the center distances admit no point")]
    NoPlacement,
    #[error("CoincidentCenters: the image centers coincide")]
    CoincidentCenters,
    #[error("MissedCircle: candidate does not meet circle {0}")]
    MissedCircle(usize),
    #[error("NoSolution: no candidate verified")]
    NoSolution,
    #[error(transparent)]
    Inversion(#[from] InversionError),
    #[error(transparent)]
    Geom(#[from] GeomError),
}

/// Prescribed angles with circles 1, 2 and 3.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AngleSpec {
    pub alpha: Angle,
    pub beta: Angle,
    pub gamma: Angle,
}

impl AngleSpec {
    pub fn new(alpha: Angle, beta: Angle, gamma: Angle) -> Self {
        AngleSpec { alpha, beta, gamma }
    }

    pub fn from_degrees(degrees: [f64; 3]) -> Result<Self, GeomError> {
        Ok(AngleSpec {
            alpha: Angle::from_degrees(degrees[0])?,
            beta: Angle::from_degrees(degrees[1])?,
            gamma: Angle::from_degrees(degrees[2])?,
        })
    }

    pub fn as_array(&self) -> [Angle; 3] {
        [self.alpha, self.beta, self.gamma]
    }

    fn from_array(a: [Angle; 3]) -> Self {
        AngleSpec::new(a[0], a[1], a[2])
    }

    pub fn all_right(&self) -> bool {
        self.as_array().iter().all(|a| a.is_right())
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SteinerProblem {
    pub circles: [Circle; 3],
    pub angles: AngleSpec,
}

impl SteinerProblem {
    pub fn new(c1: Circle, c2: Circle, c3: Circle, angles: AngleSpec) -> Self {
        SteinerProblem {
            circles: [c1, c2, c3],
            angles,
        }
    }

    /// Bounding-box diagonal of the three circles.
    pub fn scale(&self) -> f64 {
        circles_scale(&self.circles)
    }

    pub fn scaled(&self, factor: f64) -> SteinerProblem {
        SteinerProblem {
            circles: self.circles.map(|c| c.scaled(factor)),
            angles: self.angles,
        }
    }
}

/// Which pair of circles is made concentric.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Pair {
    P23,
    P13,
    P12,
}

impl Pair {
    pub const ALL: [Pair; 3] = [Pair::P23, Pair::P13, Pair::P12];

    /// Zero-based indices `(remaining, first of pair, second of pair)`.
    pub fn indices(self) -> (usize, usize, usize) {
        match self {
            Pair::P23 => (0, 1, 2),
            Pair::P13 => (1, 0, 2),
            Pair::P12 => (2, 0, 1),
        }
    }

    /// Preference order starting with `self`, then the default order.
    pub fn preference(self) -> Vec<Pair> {
        let mut order = vec![self];
        order.extend(Pair::ALL.iter().copied().filter(|&p| p != self));
        order
    }
}

impl fmt::Display for Pair {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Pair::P23 => "23",
            Pair::P13 => "13",
            Pair::P12 => "12",
        })
    }
}

impl FromStr for Pair {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "23" | "32" => Ok(Pair::P23),
            "13" | "31" => Ok(Pair::P13),
            "12" | "21" => Ok(Pair::P12),
            other => Err(format!("unknown pair {other:?}, expected 23, 13 or 12")),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SolverOptions {
    /// Relative degeneracy tolerance, scaled by the instance size.
    pub eps_rel: f64,
    /// Largest accepted angle residual, radians.
    pub tolerance: f64,
    /// Try all eight sign choices instead of only the all-plus one.
    pub enumerate_all: bool,
    /// First pair to try for the concentricizing inversion.
    pub pair: Pair,
}

impl Default for SolverOptions {
    fn default() -> Self {
        SolverOptions {
            eps_rel: EPS_REL,
            tolerance: DEFAULT_TOLERANCE,
            enumerate_all: false,
            pair: Pair::P23,
        }
    }
}

/// The problem after the concentricizing inversion.
///
/// Roles are numbered as in the formulas: role 0 is the circle left over,
/// roles 1 and 2 are the concentric pair with the smaller image first.
#[derive(Debug, Clone, PartialEq)]
pub struct InvertedConfiguration {
    /// `None` when the pair was already concentric and no inversion applies.
    pub inversion: Option<Inversion>,
    pub pair: Pair,
    /// Original (zero-based) circle index for each role.
    pub roles: [usize; 3],
    /// Images of the role 0, 1 and 2 circles.
    pub images: [Circle; 3],
    pub concentric_center: Point,
    /// Prescribed angles in role order.
    pub angles: AngleSpec,
    /// Distance between the two ring centres before averaging.
    pub concentricity_residual: f64,
    /// Bounding-box diagonal of the images.
    pub scale: f64,
}

impl InvertedConfiguration {
    pub fn r1p(&self) -> f64 {
        self.images[0].radius
    }

    pub fn r2p(&self) -> f64 {
        self.images[1].radius
    }

    pub fn r3p(&self) -> f64 {
        self.images[2].radius
    }

    /// Applies the configuration's inversion (or the identity).
    pub fn map(&self, g: &GeneralizedCircle) -> GeneralizedCircle {
        match &self.inversion {
            Some(inv) => inv.invert(g),
            None => *g,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Sign {
    Plus,
    Minus,
}

impl Sign {
    pub fn value(self) -> f64 {
        match self {
            Sign::Plus => 1.0,
            Sign::Minus => -1.0,
        }
    }

    pub fn symbol(self) -> char {
        match self {
            Sign::Plus => '+',
            Sign::Minus => '-',
        }
    }
}

/// Sign in front of each cosine (role order) plus the choice between the two
/// mirror-image placements of the candidate centre.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct SignVariant {
    pub signs: [Sign; 3],
    pub mirror: bool,
}

impl SignVariant {
    pub const CANONICAL: SignVariant = SignVariant {
        signs: [Sign::Plus; 3],
        mirror: false,
    };

    /// Variants in enumeration order: sign triples in binary order, each with
    /// both placements.
    pub fn enumerate(all_signs: bool) -> Vec<SignVariant> {
        let triples = if all_signs { 8 } else { 1 };
        let pick = |bit: bool| if bit { Sign::Minus } else { Sign::Plus };
        (0..triples)
            .flat_map(|k: u32| {
                let signs = [pick(k & 4 != 0), pick(k & 2 != 0), pick(k & 1 != 0)];
                [false, true].map(|mirror| SignVariant { signs, mirror })
            })
            .collect()
    }

    pub fn sign(&self, role: usize) -> f64 {
        self.signs[role].value()
    }
}

impl fmt::Display for SignVariant {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for s in self.signs {
            write!(f, "{}", s.symbol())?;
        }
        if self.mirror {
            f.write_str("/m")?;
        }
        Ok(())
    }
}

impl FromStr for SignVariant {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let bad = || format!("bad sign variant {s:?}, expected e.g. \"+-+\" or \"+-+/m\"");
        let (signs, mirror) = match s.strip_suffix("/m") {
            Some(rest) => (rest, true),
            None => (s, false),
        };
        let signs: Vec<Sign> = signs
            .chars()
            .map(|c| match c {
                '+' => Ok(Sign::Plus),
                '-' => Ok(Sign::Minus),
                _ => Err(bad()),
            })
            .collect::<Result<_, _>>()?;
        let signs: [Sign; 3] = signs.try_into().map_err(|_| bad())?;
        Ok(SignVariant { signs, mirror })
    }
}

/// The candidate in the inverted picture.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum InvertedSolution {
    Circle {
        circle: Circle,
        /// Distance from the candidate centre to the role 0 image centre.
        dist_first: f64,
        /// Distance from the candidate centre to the common centre.
        dist_common: f64,
    },
    Line(Line),
}

#[derive(Debug, Clone, PartialEq)]
pub struct SteinerSolution {
    pub circle: GeneralizedCircle,
    pub variant: SignVariant,
    /// |achieved - prescribed| for circles 1, 2, 3 in the original plane.
    pub residuals: [f64; 3],
    pub inverted: InvertedSolution,
}

impl SteinerSolution {
    pub fn max_residual(&self) -> f64 {
        self.residuals.iter().copied().fold(0.0, f64::max)
    }
}

/// Full solver output: the configuration used and every verified solution.
#[derive(Debug, Clone, PartialEq)]
pub struct SolveReport {
    pub config: InvertedConfiguration,
    pub solutions: Vec<SteinerSolution>,
}

/// Checks the standing assumptions: positive radii, a proper triangle of
/// centres and pairwise separated (possibly touching) circles.
pub fn validate(problem: &SteinerProblem, eps_rel: f64) -> Result<(), SteinerError> {
    for (i, c) in problem.circles.iter().enumerate() {
        if !(c.radius.is_finite() && c.radius > 0.0) || !c.center.is_finite() {
            return Err(SteinerError::DegenerateRadius(i + 1));
        }
    }
    let scale = problem.scale();
    let [a, b, c] = problem.circles.map(|c| c.center);
    if (b - a).cross(c - a).abs() * 0.5 <= eps_rel * scale * scale {
        return Err(SteinerError::ImproperTriangle);
    }
    let eps = eps_rel * scale;
    for (i, j) in [(0, 1), (0, 2), (1, 2)] {
        let (ci, cj) = (&problem.circles[i], &problem.circles[j]);
        if distance(ci.center, cj.center) < ci.radius + cj.radius - eps {
            return Err(SteinerError::OverlappingCircles(i + 1, j + 1));
        }
    }
    Ok(())
}

/// Concentricizes one specific pair. The limiting point farther from the
/// remaining circle's centre is tried first, the other one if the remaining
/// circle would map to a line.
pub fn concentricize_pair(
    problem: &SteinerProblem,
    pair: Pair,
) -> Result<InvertedConfiguration, SteinerError> {
    let (i, j, k) = pair.indices();
    let [ci, cj, ck] = [i, j, k].map(|n| problem.circles[n]);
    let candidates: Vec<Option<Inversion>> = match concentricizing_inversion(&cj, &ck) {
        Ok(res) => {
            let mut order = [0, 1];
            let dist = |n: usize| distance(res.limiting_points[n], ci.center);
            if dist(1) > dist(0) {
                order.swap(0, 1);
            }
            order.iter().map(|&n| Some(res.inversion_at(n))).collect()
        }
        Err(InversionError::ConcentricInput) => vec![None],
        Err(InversionError::TangentPair) => return Err(SteinerError::TangentPair),
        Err(e) => return Err(e.into()),
    };

    let angles = problem.angles.as_array();
    for inversion in candidates {
        let map = |c: &Circle| match &inversion {
            Some(inv) => inv.invert_circle(c),
            None => GeneralizedCircle::Circle(*c),
        };
        let (Some(&first), Some(&a), Some(&b)) = (
            map(&ci).as_circle(),
            map(&cj).as_circle(),
            map(&ck).as_circle(),
        ) else {
            continue;
        };
        let (roles, images) = if a.radius <= b.radius {
            ([i, j, k], [first, a, b])
        } else {
            ([i, k, j], [first, b, a])
        };
        let scale = circles_scale(&images);
        return Ok(InvertedConfiguration {
            inversion,
            pair,
            roles,
            images,
            concentric_center: a.center.midpoint(b.center),
            angles: AngleSpec::from_array(roles.map(|n| angles[n])),
            concentricity_residual: distance(a.center, b.center),
            scale,
        });
    }
    Err(SteinerError::DegenerateImage)
}

/// Concentricizes the first workable pair in preference order. Unless all
/// three angles are right, pairs whose two angles are both right are skipped
/// so the radius formula stays well defined.
pub fn concentricize(
    problem: &SteinerProblem,
    options: &SolverOptions,
) -> Result<InvertedConfiguration, SteinerError> {
    let all_right = problem.angles.all_right();
    let angles = problem.angles.as_array();
    let mut last_err = SteinerError::TangentPair;
    for pair in options.pair.preference() {
        let (_, j, k) = pair.indices();
        if !all_right && angles[j].is_right() && angles[k].is_right() {
            continue;
        }
        match concentricize_pair(problem, pair) {
            Ok(cfg) => return Ok(cfg),
            Err(e @ (SteinerError::TangentPair | SteinerError::DegenerateImage)) => last_err = e,
            Err(e) => return Err(e),
        }
    }
    Err(last_err)
}

/// Radius of the candidate in the inverted picture for one sign choice.
pub fn solve_radius(
    cfg: &InvertedConfiguration,
    variant: &SignVariant,
    eps_rel: f64,
) -> Result<f64, SteinerError> {
    let (beta, gamma) = (cfg.angles.beta, cfg.angles.gamma);
    if beta.is_right() && gamma.is_right() {
        return Err(SteinerError::OrthogonalDegenerate);
    }
    let (r2, r3) = (cfg.r2p(), cfg.r3p());
    let denom = 2.0 * (variant.sign(1) * r2 * beta.cos() + variant.sign(2) * r3 * gamma.cos());
    let eps = eps_rel * cfg.scale;
    if denom.abs() <= eps {
        return Err(SteinerError::InfeasibleVariant);
    }
    let r = (r3 - r2) * (r3 + r2) / denom;
    if r <= eps || !r.is_finite() {
        return Err(SteinerError::InfeasibleVariant);
    }
    Ok(r)
}

/// Distances from the candidate centre to the role 0 image centre and to the
/// common centre.
pub fn center_distances(
    cfg: &InvertedConfiguration,
    variant: &SignVariant,
    r_prime: f64,
) -> (f64, f64) {
    // r^2 + s^2 + 2 r s cos(t) is the side opposite the angle pi - t
    let side = |other: f64, angle: Angle, sign: f64| {
        let enclosed = if sign > 0.0 {
            std::f64::consts::PI - angle.radians()
        } else {
            angle.radians()
        };
        law_of_cosines_side(r_prime, other, enclosed)
    };
    (
        side(cfg.r1p(), cfg.angles.alpha, variant.sign(0)),
        side(cfg.r2p(), cfg.angles.beta, variant.sign(1)),
    )
}

/// Candidate centres: the intersections of the circles about the role 0 image
/// centre and the common centre with the two distances as radii.
pub fn solve_center(
    cfg: &InvertedConfiguration,
    variant: &SignVariant,
    r_prime: f64,
    eps_rel: f64,
) -> Result<Vec<Point>, SteinerError> {
    let (d1, d2) = center_distances(cfg, variant, r_prime);
    let (Ok(a), Ok(b)) = (
        Circle::new(cfg.images[0].center, d1),
        Circle::new(cfg.concentric_center, d2),
    ) else {
        return Err(SteinerError::NoPlacement);
    };
    match circle_circle_intersection_eps(&a, &b, eps_rel * cfg.scale) {
        Ok(pts) if !pts.is_empty() => Ok(pts),
        _ => Err(SteinerError::NoPlacement),
    }
}

/// The line through the role 0 image centre and the common centre.
pub fn solve_orthogonal(cfg: &InvertedConfiguration, eps_rel: f64) -> Result<Line, SteinerError> {
    let (p, q) = (cfg.images[0].center, cfg.concentric_center);
    if distance(p, q) <= eps_rel * cfg.scale {
        return Err(SteinerError::CoincidentCenters);
    }
    Ok(Line::through(p, q)?)
}

/// Angle residuals of `candidate` against the three original circles.
pub fn verify(
    candidate: &GeneralizedCircle,
    problem: &SteinerProblem,
    eps_rel: f64,
) -> Result<[f64; 3], SteinerError> {
    let eps = eps_rel * problem.scale();
    let prescribed = problem.angles.as_array();
    let mut residuals = [0.0; 3];
    for (n, c) in problem.circles.iter().enumerate() {
        let target = GeneralizedCircle::Circle(*c);
        // a zero target means tangency, decided with the tolerance band; any
        // other target is compared against the true angle
        let achieved = if prescribed[n].radians() == 0.0 {
            angle_between_eps(candidate, &target, eps)
        } else {
            angle_between_unsnapped_eps(candidate, &target, eps)
        }
        .map_err(|_| SteinerError::MissedCircle(n + 1))?;
        residuals[n] = (achieved.radians() - prescribed[n].radians()).abs();
    }
    Ok(residuals)
}

/// Solves the problem and returns every verified solution, or
/// [`SteinerError::NoSolution`].
pub fn solve(
    problem: &SteinerProblem,
    options: &SolverOptions,
) -> Result<Vec<SteinerSolution>, SteinerError> {
    let report = solve_detailed(problem, options)?;
    if report.solutions.is_empty() {
        return Err(SteinerError::NoSolution);
    }
    Ok(report.solutions)
}

/// Like [`solve`] but keeps the inverted configuration and returns an empty
/// list instead of an error when nothing verifies.
pub fn solve_detailed(
    problem: &SteinerProblem,
    options: &SolverOptions,
) -> Result<SolveReport, SteinerError> {
    let eps_rel = options.eps_rel;
    validate(problem, eps_rel)?;
    let config = concentricize(problem, options)?;

    let mut found = Vec::new();
    let mut accept = |inverted: InvertedSolution, variant: SignVariant| {
        let image = match inverted {
            InvertedSolution::Circle { circle, .. } => GeneralizedCircle::Circle(circle),
            InvertedSolution::Line(l) => GeneralizedCircle::Line(l),
        };
        let circle = config.map(&image);
        if let Ok(residuals) = verify(&circle, problem, eps_rel) {
            let sol = SteinerSolution {
                circle,
                variant,
                residuals,
                inverted,
            };
            if sol.max_residual() <= options.tolerance {
                found.push(sol);
            }
        }
    };

    if problem.angles.all_right() {
        let line = solve_orthogonal(&config, eps_rel)?;
        accept(InvertedSolution::Line(line), SignVariant::CANONICAL);
    } else {
        for variant in SignVariant::enumerate(options.enumerate_all) {
            let Ok(r_prime) = solve_radius(&config, &variant, eps_rel) else {
                continue;
            };
            let Ok(centers) = solve_center(&config, &variant, r_prime, eps_rel) else {
                continue;
            };
            if variant.mirror && centers.len() < 2 {
                continue;
            }
            let center = if variant.mirror {
                centers[1]
            } else {
                centers[0]
            };
            let (dist_first, dist_common) = center_distances(&config, &variant, r_prime);
            let circle = Circle::new(center, r_prime)?;
            accept(
                InvertedSolution::Circle {
                    circle,
                    dist_first,
                    dist_common,
                },
                variant,
            );
        }
    }

    let tol = DEDUP_REL * problem.scale();
    let mut solutions: Vec<SteinerSolution> = Vec::with_capacity(found.len());
    for sol in found {
        if !solutions
            .iter()
            .any(|s| s.circle.approx_eq(&sol.circle, tol))
        {
            solutions.push(sol);
        }
    }
    solutions.sort_by(|a, b| compare_generalized(&a.circle, &b.circle));
    Ok(SolveReport { config, solutions })
}

/// Circles before lines; circles by radius then centre, lines by normal then
/// offset.
fn compare_generalized(a: &GeneralizedCircle, b: &GeneralizedCircle) -> Ordering {
    use GeneralizedCircle as G;
    match (a, b) {
        (G::Circle(a), G::Circle(b)) => a
            .radius
            .total_cmp(&b.radius)
            .then(a.center.cmp_xy(&b.center)),
        (G::Line(a), G::Line(b)) => a
            .normal()
            .cmp_xy(&b.normal())
            .then(a.offset().total_cmp(&b.offset())),
        (G::Circle(_), G::Line(_)) => Ordering::Less,
        (G::Line(_), G::Circle(_)) => Ordering::Greater,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn circle(x: f64, y: f64, r: f64) -> Circle {
        Circle::new(Point::new(x, y), r).unwrap()
    }

    fn reference(degrees: [f64; 3]) -> SteinerProblem {
        SteinerProblem::new(
            circle(0.0, 0.0, 1.0),
            circle(4.0, 0.0, 1.0),
            circle(2.0, 4.0, 1.0),
            AngleSpec::from_degrees(degrees).unwrap(),
        )
    }

    /// Concentric configuration with hand-picked image radii.
    fn ring_config(r2: f64, r3: f64, beta: f64, gamma: f64) -> InvertedConfiguration {
        let images = [
            circle(5.0, 0.0, 1.0),
            circle(0.0, 0.0, r2),
            circle(0.0, 0.0, r3),
        ];
        InvertedConfiguration {
            inversion: None,
            pair: Pair::P23,
            roles: [0, 1, 2],
            images,
            concentric_center: Point::ORIGIN,
            angles: AngleSpec::from_degrees([45.0, beta, gamma]).unwrap(),
            concentricity_residual: 0.0,
            scale: circles_scale(&images),
        }
    }

    fn signs(s: [Sign; 3]) -> SignVariant {
        SignVariant {
            signs: s,
            mirror: false,
        }
    }

    #[test]
    fn validate_examples() {
        assert_eq!(validate(&reference([0.0; 3]), EPS_REL), Ok(()));

        let mut p = reference([0.0; 3]);
        p.circles[1] = circle(1.5, 0.0, 1.0);
        assert_eq!(
            validate(&p, EPS_REL),
            Err(SteinerError::OverlappingCircles(1, 2))
        );

        let mut p = reference([0.0; 3]);
        p.circles[1] = circle(4.0, 0.0, 1.0);
        p.circles[2] = circle(8.0, 0.0, 1.0);
        assert_eq!(validate(&p, EPS_REL), Err(SteinerError::ImproperTriangle));

        let mut p = reference([0.0; 3]);
        p.circles[2].radius = 0.0;
        assert_eq!(
            validate(&p, EPS_REL),
            Err(SteinerError::DegenerateRadius(3))
        );
    }

    #[test]
    fn touching_circles_are_allowed() {
        let mut p = reference([30.0; 3]);
        p.circles[1] = circle(2.0, 0.0, 1.0);
        assert_eq!(validate(&p, EPS_REL), Ok(()));
    }

    #[test]
    fn concentricize_reference_pair() {
        let p = reference([30.0; 3]);
        let cfg = concentricize_pair(&p, Pair::P23).unwrap();
        assert!(cfg.concentricity_residual <= 1e-9 * cfg.scale);
        assert!(cfg.r2p() < cfg.r3p());
        assert_eq!(cfg.roles[0], 0);
    }

    #[test]
    fn concentricize_tangent_pair() {
        let mut p = reference([30.0; 3]);
        p.circles[2] = circle(4.0, 2.0, 1.0);
        assert_eq!(
            concentricize_pair(&p, Pair::P23),
            Err(SteinerError::TangentPair)
        );
        // falls back to another pair
        let cfg = concentricize(&p, &SolverOptions::default()).unwrap();
        assert_eq!(cfg.pair, Pair::P13);
    }

    #[test]
    fn concentricize_skips_right_angle_pairs() {
        let p = reference([40.0, 90.0, 90.0]);
        let cfg = concentricize(&p, &SolverOptions::default()).unwrap();
        assert_ne!(cfg.pair, Pair::P23);
        assert!(!(cfg.angles.beta.is_right() && cfg.angles.gamma.is_right()));
    }

    #[test]
    fn already_concentric_pair_is_identity() {
        let p = SteinerProblem::new(
            circle(10.0, 0.0, 1.0),
            circle(0.0, 0.0, 1.0),
            circle(0.0, 0.0, 3.0),
            AngleSpec::from_degrees([10.0, 20.0, 30.0]).unwrap(),
        );
        let cfg = concentricize_pair(&p, Pair::P23).unwrap();
        assert!(cfg.inversion.is_none());
        assert_eq!(cfg.images, p.circles);
    }

    #[test]
    fn radius_examples() {
        let cfg = ring_config(1.0, 2.0, 60.0, 60.0);
        let r = solve_radius(&cfg, &SignVariant::CANONICAL, EPS_REL).unwrap();
        assert!((r - 1.0).abs() < 1e-15);

        let cfg = ring_config(1.0, 2.0, 90.0, 90.0);
        assert_eq!(
            solve_radius(&cfg, &SignVariant::CANONICAL, EPS_REL),
            Err(SteinerError::OrthogonalDegenerate)
        );

        let cfg = ring_config(1.0, 2.0, 0.0, 0.0);
        let minus = signs([Sign::Plus, Sign::Minus, Sign::Minus]);
        assert_eq!(
            solve_radius(&cfg, &minus, EPS_REL),
            Err(SteinerError::InfeasibleVariant)
        );
    }

    #[test]
    fn center_distance_examples() {
        let mut cfg = ring_config(1.0, 2.0, 60.0, 60.0);
        cfg.angles = AngleSpec::from_degrees([90.0, 60.0, 60.0]).unwrap();
        let (d1, d2) = center_distances(&cfg, &SignVariant::CANONICAL, 1.0);
        assert!((d1 - 2f64.sqrt()).abs() < 1e-15);
        assert!((d2 - 3f64.sqrt()).abs() < 1e-15);

        cfg.angles.alpha = Angle::ZERO;
        let (d1, _) = center_distances(&cfg, &SignVariant::CANONICAL, 1.0);
        assert!((d1 - 2.0).abs() < 1e-15);
    }

    #[test]
    fn orthogonal_line_examples() {
        let mut cfg = ring_config(1.0, 2.0, 90.0, 90.0);
        cfg.images[0] = circle(0.0, 0.0, 1.0);
        cfg.concentric_center = Point::new(5.0, 0.0);
        let l = solve_orthogonal(&cfg, EPS_REL).unwrap();
        assert_eq!((l.normal(), l.offset()), (Point::new(0.0, 1.0), 0.0));

        cfg.concentric_center = Point::new(0.0, 3.0);
        let l = solve_orthogonal(&cfg, EPS_REL).unwrap();
        assert_eq!((l.normal(), l.offset()), (Point::new(1.0, 0.0), 0.0));

        cfg.concentric_center = Point::ORIGIN;
        assert_eq!(
            solve_orthogonal(&cfg, EPS_REL),
            Err(SteinerError::CoincidentCenters)
        );
    }

    #[test]
    fn orthogonal_reference_solution() {
        let sols = solve(&reference([90.0; 3]), &SolverOptions::default()).unwrap();
        assert_eq!(sols.len(), 1);
        let c = sols[0].circle.as_circle().unwrap();
        assert!((c.center - Point::new(2.0, 1.5)).norm() < 1e-9);
        assert!((c.radius - 5.25f64.sqrt()).abs() < 1e-9);
        assert!(sols[0].max_residual() <= 1e-7);
        assert!(matches!(sols[0].inverted, InvertedSolution::Line(_)));
    }

    #[test]
    fn verify_flags_missed_and_identical_circles() {
        let p = reference([0.0; 3]);
        let far = GeneralizedCircle::Circle(circle(100.0, 100.0, 1.0));
        assert_eq!(
            verify(&far, &p, EPS_REL),
            Err(SteinerError::MissedCircle(1))
        );
        let same = GeneralizedCircle::Circle(p.circles[0]);
        assert_eq!(
            verify(&same, &p, EPS_REL),
            Err(SteinerError::MissedCircle(1))
        );
    }

    #[test]
    fn sign_variants_enumerate() {
        assert_eq!(SignVariant::enumerate(false).len(), 2);
        let all = SignVariant::enumerate(true);
        assert_eq!(all.len(), 16);
        assert_eq!(all[0], SignVariant::CANONICAL);
        assert_eq!(all[15].signs, [Sign::Minus; 3]);
    }

    #[test]
    fn solve_is_deterministic() {
        let p = reference([20.0, 35.0, 50.0]);
        let opts = SolverOptions {
            enumerate_all: true,
            ..SolverOptions::default()
        };
        let a = solve(&p, &opts).unwrap();
        let b = solve(&p, &opts).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn pair_parse_and_display() {
        for p in Pair::ALL {
            assert_eq!(p.to_string().parse::<Pair>().unwrap(), p);
        }
        assert!("14".parse::<Pair>().is_err());
        assert_eq!(
            Pair::P12.preference(),
            vec![Pair::P12, Pair::P23, Pair::P13]
        );
    }
}
