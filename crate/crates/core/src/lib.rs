//! Circles that cut three given circles at prescribed angles, constructed by
//! inversion.
//!
//! * [`geom`]: points, circles, lines, intersections and the angle between
//!   circles.
//! * [`inversion`]: inversion in a circle and the inversion that makes two
//!   disjoint circles concentric.
//! * [`steiner`]: the solver.
//! * [`trace`]: replayable straightedge-and-compass programs for the
//!   sub-constructions the solver relies on.
//! * [`cli`]: file formats, SVG output and the command implementations.
//!
//! ```
//! use steiner_circles::{solve, AngleSpec, Circle, Point, SolverOptions, SteinerProblem};
//!
//! let unit = |x, y| Circle::new(Point::new(x, y), 1.0).unwrap();
//! let problem = SteinerProblem::new(
//!     unit(0.0, 0.0),
//!     unit(4.0, 0.0),
//!     unit(2.0, 4.0),
//!     AngleSpec::from_degrees([90.0, 90.0, 90.0]).unwrap(),
//! );
//! let found = solve(&problem, &SolverOptions::default()).unwrap();
//! let circle = found[0].circle.as_circle().unwrap();
//! assert!((circle.center - Point::new(2.0, 1.5)).norm() < 1e-9);
//! assert!((circle.radius - 5.25f64.sqrt()).abs() < 1e-9);
//! ```

pub mod cli;
pub mod geom;
pub mod inversion;
pub mod steiner;
pub mod trace;

pub use geom::{Angle, Circle, GeneralizedCircle, Line, Point};
pub use inversion::Inversion;
pub use steiner::{solve, AngleSpec, SolverOptions, SteinerProblem, SteinerSolution};
