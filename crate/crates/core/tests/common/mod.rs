//! Seeded random instances shared by the integration tests.
#![allow(dead_code)]

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use steiner_circles::geom::{distance, Circle, Point};
use steiner_circles::inversion::Inversion;
use steiner_circles::steiner::{AngleSpec, SteinerProblem};

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn point(rng: &mut ChaCha8Rng, half_width: f64) -> Point {
    Point::new(
        rng.random_range(-half_width..half_width),
        rng.random_range(-half_width..half_width),
    )
}

pub fn circle(rng: &mut ChaCha8Rng) -> Circle {
    Circle::new(point(rng, 10.0), rng.random_range(0.2..5.0)).unwrap()
}

pub fn inversion(rng: &mut ChaCha8Rng) -> Inversion {
    Inversion::new(point(rng, 5.0), rng.random_range(0.1..10.0)).unwrap()
}

/// Inversion whose centre keeps a clear distance from every circle.
pub fn inversion_avoiding(rng: &mut ChaCha8Rng, circles: &[Circle]) -> Inversion {
    loop {
        let inv = inversion(rng);
        let clear = circles
            .iter()
            .all(|c| (distance(inv.center(), c.center) - c.radius).abs() > 0.1 * c.radius);
        if clear {
            return inv;
        }
    }
}

/// Two circles crossing at an angle of at least about 3 degrees.
pub fn intersecting_pair(rng: &mut ChaCha8Rng) -> (Circle, Circle) {
    let a = circle(rng);
    let r = rng.random_range(0.2..5.0);
    let (lo, hi) = ((a.radius - r).abs(), a.radius + r);
    let margin = 0.05 * (hi - lo);
    let d = rng.random_range(lo + margin..hi - margin);
    let theta = rng.random_range(0.0..std::f64::consts::TAU);
    let b = Circle::new(a.center + Point::new(theta.cos(), theta.sin()) * d, r).unwrap();
    (a, b)
}

/// Two disjoint circles: separated (`nested == false`) or one inside the
/// other, with a gap of at least 5% of the smaller radius.
pub fn disjoint_pair(rng: &mut ChaCha8Rng, nested: bool) -> (Circle, Circle) {
    let a = circle(rng);
    let theta = rng.random_range(0.0..std::f64::consts::TAU);
    let dir = Point::new(theta.cos(), theta.sin());
    if nested {
        let r = rng.random_range(0.1..0.8) * a.radius;
        let room = a.radius - r;
        let d = rng.random_range(0.05 * room..0.95 * room);
        (a, Circle::new(a.center + dir * d, r).unwrap())
    } else {
        let r: f64 = rng.random_range(0.2..5.0);
        let gap = rng.random_range(0.05..10.0) * r.min(a.radius);
        let d = a.radius + r + gap;
        (a, Circle::new(a.center + dir * d, r).unwrap())
    }
}

/// Three pairwise separated circles with clearly non-collinear centres.
pub fn three_circles(rng: &mut ChaCha8Rng) -> [Circle; 3] {
    loop {
        let cs = [circle(rng), circle(rng), circle(rng)];
        let separated = [(0, 1), (0, 2), (1, 2)].iter().all(|&(i, j)| {
            distance(cs[i].center, cs[j].center) > cs[i].radius + cs[j].radius + 0.1
        });
        let [a, b, c] = cs.map(|c| c.center);
        if separated && (b - a).cross(c - a).abs() > 2.0 {
            return cs;
        }
    }
}

pub fn angles_deg(rng: &mut ChaCha8Rng) -> [f64; 3] {
    [0; 3].map(|_| rng.random_range(0.0..=90.0))
}

pub fn problem(rng: &mut ChaCha8Rng, degrees: [f64; 3]) -> SteinerProblem {
    let [a, b, c] = three_circles(rng);
    SteinerProblem::new(a, b, c, AngleSpec::from_degrees(degrees).unwrap())
}

/// The symmetric instance: unit circles at (0,0), (4,0), (2,4).
pub fn reference_circles() -> [Circle; 3] {
    [(0.0, 0.0), (4.0, 0.0), (2.0, 4.0)].map(|(x, y)| Circle::new(Point::new(x, y), 1.0).unwrap())
}

pub fn reference_problem(degrees: [f64; 3]) -> SteinerProblem {
    let [a, b, c] = reference_circles();
    SteinerProblem::new(a, b, c, AngleSpec::from_degrees(degrees).unwrap())
}
