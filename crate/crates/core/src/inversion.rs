//! Inversion in a circle, and the inversion that turns two disjoint circles
//! into concentric ones.
//!
//! An inversion with centre `O` and radius `R` sends `P != O` to the point
//! `P'` on the ray `OP` with `|OP| * |OP'| = R^2`. It is an involution, fixes
//! its own circle pointwise, and maps generalized circles to generalized
//! circles: a circle through `O` becomes a line and vice versa.

use thiserror::Error;

use crate::geom::{
    circles_scale, power_of_point, radical_axis_eps, Circle, GeneralizedCircle, GeomError, Line,
    Point, EPS_REL,
};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum InversionError {
    #[error("point coincides with the inversion center")]
    CenterPoint,
    #[error("IntersectingCircles: the circles intersect")]
    IntersectingCircles,
    #[error("TangentPair: the circles touch, the orthogonal circle degenerates to a point")]
    TangentPair,
    #[error("ConcentricInput: the circles are already concentric")]
    ConcentricInput,
    #[error(transparent)]
    Geom(#[from] GeomError),
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Inversion {
    center: Point,
    radius: f64,
}

impl Inversion {
    pub fn new(center: Point, radius: f64) -> Result<Self, GeomError> {
        let c = Circle::new(center, radius)?;
        Ok(Inversion {
            center: c.center,
            radius: c.radius,
        })
    }

    pub fn center(&self) -> Point {
        self.center
    }

    pub fn radius(&self) -> f64 {
        self.radius
    }

    /// The circle of inversion, fixed pointwise by the map.
    pub fn circle(&self) -> Circle {
        Circle {
            center: self.center,
            radius: self.radius,
        }
    }

    pub fn invert_point(&self, p: Point) -> Result<Point, InversionError> {
        invert_point(self, p)
    }

    pub fn invert_circle(&self, c: &Circle) -> GeneralizedCircle {
        invert_circle(self, c)
    }

    pub fn invert_line(&self, l: &Line) -> GeneralizedCircle {
        invert_line(self, l)
    }

    pub fn invert(&self, g: &GeneralizedCircle) -> GeneralizedCircle {
        invert_generalized(self, g)
    }
}

pub fn invert_point(inv: &Inversion, p: Point) -> Result<Point, InversionError> {
    let v = p - inv.center;
    let d2 = v.norm_sq();
    if d2.sqrt() <= EPS_REL * inv.radius {
        return Err(InversionError::CenterPoint);
    }
    let k = inv.radius * inv.radius / d2;
    Ok(inv.center + v * k)
}

/// Image of a circle. Circles whose boundary passes within `EPS_REL` (relative
/// to the circle's reach from the centre) of the inversion centre map to lines.
pub fn invert_circle(inv: &Inversion, c: &Circle) -> GeneralizedCircle {
    invert_circle_eps(inv, c, EPS_REL)
}

pub fn invert_circle_eps(inv: &Inversion, c: &Circle, eps_rel: f64) -> GeneralizedCircle {
    let r2 = inv.radius * inv.radius;
    let v = c.center - inv.center;
    let d = v.norm();
    let reach = d + c.radius;
    let gap = d - c.radius;
    if gap.abs() <= eps_rel * reach {
        // farthest point of the circle from O lands at distance R^2/reach
        let u = v * (1.0 / d);
        let line = Line::new(u, u.dot(inv.center) + r2 / reach)
            .expect("unit normal from a non-zero offset");
        return GeneralizedCircle::Line(line);
    }
    let power = gap * reach;
    GeneralizedCircle::Circle(Circle {
        center: inv.center + v * (r2 / power),
        radius: r2 * c.radius / power.abs(),
    })
}

/// Image of a line: itself when it passes through the centre, otherwise a
/// circle through the centre.
pub fn invert_line(inv: &Inversion, l: &Line) -> GeneralizedCircle {
    let h = -l.signed_distance(inv.center);
    if h.abs() <= EPS_REL * inv.radius {
        return GeneralizedCircle::Line(*l);
    }
    let r2 = inv.radius * inv.radius;
    GeneralizedCircle::Circle(Circle {
        center: inv.center + l.normal() * (r2 / (2.0 * h)),
        radius: r2 / (2.0 * h.abs()),
    })
}

pub fn invert_generalized(inv: &Inversion, g: &GeneralizedCircle) -> GeneralizedCircle {
    match g {
        GeneralizedCircle::Circle(c) => invert_circle(inv, c),
        GeneralizedCircle::Line(l) => invert_line(inv, l),
    }
}

/// Everything produced while building the concentricizing inversion of two
/// disjoint circles.
#[derive(Debug, Clone, PartialEq)]
pub struct ConcentricizingResult {
    /// The two limiting points, ordered by x then y.
    pub limiting_points: [Point; 2],
    /// Unit-radius inversion centred at one of the limiting points.
    pub chosen: Inversion,
    /// Circle centred where the radical axis meets the line of centres,
    /// orthogonal to both inputs.
    pub orthogonal_circle: Circle,
    pub radical_axis: Line,
}

impl ConcentricizingResult {
    /// Unit-radius inversion centred at `limiting_points[index]`.
    pub fn inversion_at(&self, index: usize) -> Inversion {
        Inversion {
            center: self.limiting_points[index],
            radius: self.chosen.radius,
        }
    }
}

/// Builds the inversion that makes two disjoint circles concentric.
///
/// The pair may be separated or nested, but must be strictly disjoint. The
/// radical axis meets the line of centres at `C`; the circle about `C` with
/// radius equal to the tangent length from `C` cuts both inputs at right
/// angles and meets the line of centres at the two limiting points. Inverting
/// about either limiting point sends both inputs to concentric circles. The
/// returned `chosen` inversion uses the lexicographically smaller one.
pub fn concentricizing_inversion(
    c1: &Circle,
    c2: &Circle,
) -> Result<ConcentricizingResult, InversionError> {
    let eps = EPS_REL * circles_scale([c1, c2]);
    let (r1, r2) = (c1.radius, c2.radius);
    let delta = c2.center - c1.center;
    let d = delta.norm();
    if d <= eps {
        return Err(InversionError::ConcentricInput);
    }
    let (outer, inner) = (r1 + r2, (r1 - r2).abs());
    if (d - outer).abs() <= eps || (d - inner).abs() <= eps {
        return Err(InversionError::TangentPair);
    }
    if d > inner && d < outer {
        return Err(InversionError::IntersectingCircles);
    }

    let axis = radical_axis_eps(c1, c2, eps)?;
    let u = delta * (1.0 / d);
    let along = (d * d + r1 * r1 - r2 * r2) / (2.0 * d);
    let foot = c1.center + u * along;
    let tangent = ((along - r1) * (along + r1)).sqrt();
    let orthogonal_circle = Circle::new(foot, tangent)?;

    // positions along u solve p^2 - 2*along*p + r1^2 = 0; take the root
    // without cancellation and recover the other from the product r1^2
    let far = along + along.signum() * tangent;
    let near = r1 * r1 / far;
    let mut limiting_points = [c1.center + u * far, c1.center + u * near];
    limiting_points.sort_by(Point::cmp_xy);

    Ok(ConcentricizingResult {
        limiting_points,
        chosen: Inversion {
            center: limiting_points[0],
            radius: 1.0,
        },
        orthogonal_circle,
        radical_axis: axis,
    })
}

/// Distance between the centres of the images of `c1` and `c2`, or `None`
/// if either image is a line.
pub fn concentricity_residual(inv: &Inversion, c1: &Circle, c2: &Circle) -> Option<f64> {
    let a = invert_circle(inv, c1);
    let b = invert_circle(inv, c2);
    match (a.as_circle(), b.as_circle()) {
        (Some(a), Some(b)) => Some((a.center - b.center).norm()),
        _ => None,
    }
}

/// Power of the inversion centre with respect to `c`; zero when `c` passes
/// through the centre.
pub fn center_power(inv: &Inversion, c: &Circle) -> f64 {
    power_of_point(inv.center, c)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geom::circle_through_three_points;

    fn circle(x: f64, y: f64, r: f64) -> Circle {
        Circle::new(Point::new(x, y), r).unwrap()
    }

    fn inv(x: f64, y: f64, r: f64) -> Inversion {
        Inversion::new(Point::new(x, y), r).unwrap()
    }

    fn assert_circle(g: GeneralizedCircle, center: Point, r: f64, tol: f64) {
        let c = g.as_circle().expect("expected a circle");
        assert!(
            (c.center - center).norm() <= tol && (c.radius - r).abs() <= tol,
            "{c} vs center {center} r {r}"
        );
    }

    #[test]
    fn invert_point_examples() {
        let i = inv(0.0, 0.0, 2.0);
        assert_eq!(
            i.invert_point(Point::new(1.0, 0.0)).unwrap(),
            Point::new(4.0, 0.0)
        );
        assert_eq!(
            i.invert_point(Point::new(2.0, 0.0)).unwrap(),
            Point::new(2.0, 0.0)
        );
        assert_eq!(
            i.invert_point(Point::new(0.0, 5.0)).unwrap(),
            Point::new(0.0, 0.8)
        );
        assert_eq!(
            i.invert_point(Point::ORIGIN),
            Err(InversionError::CenterPoint)
        );
    }

    #[test]
    fn invert_circle_examples() {
        let i = inv(0.0, 0.0, 1.0);
        // endpoints (2,0) -> (1/2,0) and (4,0) -> (1/4,0)
        assert_circle(
            i.invert_circle(&circle(3.0, 0.0, 1.0)),
            Point::new(0.375, 0.0),
            0.125,
            1e-15,
        );
        let line = i.invert_circle(&circle(1.0, 0.0, 1.0));
        let l = line
            .as_line()
            .expect("circle through the center maps to a line");
        assert_eq!((l.normal(), l.offset()), (Point::new(1.0, 0.0), 0.5));
        assert_circle(i.invert_circle(&i.circle()), Point::ORIGIN, 1.0, 0.0);
    }

    #[test]
    fn invert_circle_matches_three_point_images() {
        let i = inv(0.3, -0.7, 1.7);
        let c = circle(2.0, 1.5, 0.8);
        let pts: Vec<Point> = [0.1, 2.0, 4.0]
            .iter()
            .map(|&t| i.invert_point(c.point_at(t)).unwrap())
            .collect();
        let oracle = circle_through_three_points(pts[0], pts[1], pts[2]).unwrap();
        assert_circle(i.invert_circle(&c), oracle.center, oracle.radius, 1e-12);
    }

    #[test]
    fn invert_line_examples() {
        let x1 = Line::new(Point::new(1.0, 0.0), 1.0).unwrap();
        assert_circle(
            inv(0.0, 0.0, 1.0).invert_line(&x1),
            Point::new(0.5, 0.0),
            0.5,
            0.0,
        );
        assert_circle(
            inv(0.0, 0.0, 2.0).invert_line(&x1),
            Point::new(2.0, 0.0),
            2.0,
            0.0,
        );
        let y0 = Line::new(Point::new(0.0, 1.0), 0.0).unwrap();
        for r in [0.5, 1.0, 7.0] {
            assert_eq!(
                inv(0.0, 0.0, r).invert_line(&y0),
                GeneralizedCircle::Line(y0)
            );
        }
    }

    #[test]
    fn generalized_round_trips() {
        let i = inv(1.0, 2.0, 1.5);
        let c: GeneralizedCircle = circle(-2.0, 0.5, 1.25).into();
        assert!(i.invert(&i.invert(&c)).approx_eq(&c, 1e-12));

        let through = circle(2.0, 2.0, 1.0);
        let image = i.invert(&through.into());
        assert!(image.is_line());
        assert!(i.invert(&image).approx_eq(&through.into(), 1e-12));

        let l = Line::through(Point::new(1.0, 2.0), Point::new(3.0, -1.0)).unwrap();
        assert_eq!(i.invert(&l.into()), GeneralizedCircle::Line(l));
    }

    #[test]
    fn concentricizing_symmetric_pair() {
        let (a, b) = (circle(0.0, 0.0, 1.0), circle(4.0, 0.0, 1.0));
        let res = concentricizing_inversion(&a, &b).unwrap();
        let s = 3f64.sqrt();
        assert!((res.limiting_points[0] - Point::new(2.0 - s, 0.0)).norm() < 1e-15);
        assert!((res.limiting_points[1] - Point::new(2.0 + s, 0.0)).norm() < 1e-15);
        assert!((res.orthogonal_circle.center - Point::new(2.0, 0.0)).norm() < 1e-15);
        assert!((res.orthogonal_circle.radius - s).abs() < 1e-15);
        assert_eq!(res.chosen.center(), res.limiting_points[0]);
        for k in 0..2 {
            let r = concentricity_residual(&res.inversion_at(k), &a, &b).unwrap();
            assert!(r < 1e-12, "residual {r}");
        }
    }

    #[test]
    fn concentricizing_nested_pair() {
        let (a, b) = (circle(0.0, 0.0, 5.0), circle(1.0, 0.5, 1.5));
        let res = concentricizing_inversion(&a, &b).unwrap();
        for k in 0..2 {
            let r = concentricity_residual(&res.inversion_at(k), &a, &b).unwrap();
            assert!(r < 1e-12, "residual {r}");
        }
    }

    #[test]
    fn concentricizing_errors() {
        let a = circle(0.0, 0.0, 1.0);
        assert_eq!(
            concentricizing_inversion(&a, &circle(0.0, 0.0, 2.0)),
            Err(InversionError::ConcentricInput)
        );
        assert_eq!(
            concentricizing_inversion(&a, &circle(2.0, 0.0, 1.0)),
            Err(InversionError::TangentPair)
        );
        assert_eq!(
            concentricizing_inversion(&circle(0.0, 0.0, 3.0), &circle(1.0, 0.0, 2.0)),
            Err(InversionError::TangentPair)
        );
        assert_eq!(
            concentricizing_inversion(&a, &circle(1.5, 0.0, 1.0)),
            Err(InversionError::IntersectingCircles)
        );
    }
}
