//! Oriented complete geodesics and segment utilities.
//!
//! A geodesic is stored as a single incidence vector `n`:
//!
//! * hyperbolic / spherical: the unit normal of the plane through the origin
//!   cutting the geodesic out of the model surface,
//! * euclidean: (nx, ny, -c) with nx^2 + ny^2 = 1 for the line nx x + ny y = c.
//!
//! In every model the signed distance from p to the geodesic satisfies
//! sigma(dist) = <p, n>, positive on the left of the orientation, so incidence
//! constraints on circles and tangent lines are linear in `n` and in `p`.

use crate::error::{GeomError, Result};
use crate::plane::{ModelKind, Plane, Point, Vec3, EPS_GEO};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Geodesic {
    pub(crate) n: Vec3,
}

impl Geodesic {
    pub(crate) fn from_raw(plane: &Plane, raw: &Vec3) -> Result<Self> {
        let q = match plane.kind {
            ModelKind::Euclidean => raw.x * raw.x + raw.y * raw.y,
            _ => plane.ip(raw, raw),
        };
        if q <= 1e-28 {
            return Err(GeomError::DegenerateGeodesic);
        }
        Ok(Geodesic { n: raw / q.sqrt() })
    }

    /// Reverse the orientation (swaps the sign of signed distances).
    pub fn reversed(&self) -> Self {
        Geodesic { n: -self.n }
    }
}

/// Oriented geodesic through p then q; points to the left get positive
/// signed distance.
pub fn geodesic_through(plane: &Plane, p: &Point, q: &Point) -> Result<Geodesic> {
    let raw = match plane.kind {
        ModelKind::Euclidean => p.coords.cross(&q.coords),
        _ => plane.mcross(&p.coords, &q.coords),
    };
    Geodesic::from_raw(plane, &raw).map_err(|_| {
        if plane.kind == ModelKind::Spherical && plane.distance(p, q) > 1.0 / plane.k {
            GeomError::AntipodalPoints
        } else {
            GeomError::DegenerateGeodesic
        }
    })
}

/// Geodesic of points equidistant from p and q. In the curved models the
/// coordinate difference p - q is already the incidence vector; the
/// euclidean line needs its constant term.
pub fn point_bisector(plane: &Plane, p: &Point, q: &Point) -> Result<Geodesic> {
    let raw = match plane.kind {
        ModelKind::Euclidean => Vec3::new(
            p.x() - q.x(),
            p.y() - q.y(),
            0.5 * (q.x() * q.x() + q.y() * q.y() - p.x() * p.x() - p.y() * p.y()),
        ),
        _ => p.coords - q.coords,
    };
    Geodesic::from_raw(plane, &raw)
}

/// Oriented geodesic through p with initial unit direction u; the positive
/// side is the left of travel.
pub fn geodesic_from_direction(plane: &Plane, p: &Point, u: &Vec3) -> Result<Geodesic> {
    let raw = match plane.kind {
        ModelKind::Euclidean => Vec3::new(-u.y, u.x, u.y * p.x() - u.x * p.y()),
        _ => plane.mcross(&p.coords, u),
    };
    Geodesic::from_raw(plane, &raw)
}

/// Point at arclength fraction t along the geodesic from p to q
/// (t = 0 gives p, t = 1 gives q; t may leave [0, 1]).
pub fn geodesic_point(plane: &Plane, p: &Point, q: &Point, t: f64) -> Result<Point> {
    let d = plane.distance(p, q);
    if d < 1e-15 {
        return Ok(*p);
    }
    let u = plane.unit_tangent_toward(p, q)?;
    Ok(plane.exp(p, &u, t * d))
}

/// Signed distance from p to the geodesic: positive on the left.
pub fn signed_distance(plane: &Plane, p: &Point, g: &Geodesic) -> f64 {
    plane.sigma_inv(plane.ip(&p.coords, &g.n))
}

/// Foot of the perpendicular from p onto the geodesic.
pub fn project_to_geodesic(plane: &Plane, p: &Point, g: &Geodesic) -> Point {
    match plane.kind {
        ModelKind::Euclidean => {
            let d = p.coords.dot(&g.n);
            Point::new(Vec3::new(p.x() - d * g.n.x, p.y() - d * g.n.y, 1.0))
        }
        _ => {
            let c = plane.ip(&p.coords, &g.n);
            let w = p.coords - g.n * c;
            plane
                .normalize_to_surface(&w)
                // p is the pole of g: every point of g is a foot; pick one.
                .unwrap_or_else(|_| point_on(plane, g))
        }
    }
}

/// Gradient direction of the signed distance at p: the unit tangent pointing
/// toward the positive side of g.
pub fn distance_gradient(plane: &Plane, p: &Point, g: &Geodesic) -> Result<Vec3> {
    let w = match plane.kind {
        ModelKind::Euclidean => Vec3::new(g.n.x, g.n.y, 0.0),
        ModelKind::Hyperbolic => {
            let c = plane.ip(&g.n, &p.coords);
            g.n + p.coords * (plane.k * plane.k * c)
        }
        ModelKind::Spherical => {
            let c = plane.ip(&g.n, &p.coords);
            g.n - p.coords * (plane.k * plane.k * c)
        }
    };
    let n2 = plane.tangent_ip(&w, &w);
    if n2 <= 1e-28 {
        // p is a pole of g (spherical): no preferred direction.
        return Err(GeomError::DegenerateGeodesic);
    }
    Ok(w / n2.sqrt())
}

/// Some point on the geodesic.
pub fn point_on(plane: &Plane, g: &Geodesic) -> Point {
    match plane.kind {
        ModelKind::Euclidean => {
            let c = -g.n.z;
            Point::new(Vec3::new(c * g.n.x, c * g.n.y, 1.0))
        }
        _ => {
            let o = plane.origin();
            let c = plane.ip(&o.coords, &g.n);
            let w = o.coords - g.n * c;
            plane.normalize_to_surface(&w).unwrap_or_else(|_| {
                // Origin is a pole of g: take any direction in the plane of g.
                let trial = if g.n.x.abs() < 0.9 {
                    Vec3::new(1.0, 0.0, 0.0)
                } else {
                    Vec3::new(0.0, 1.0, 0.0)
                };
                let w = trial - g.n * plane.ip(&trial, &g.n);
                plane.normalize_to_surface(&w).expect("geodesic has points")
            })
        }
    }
}

/// Unit tangent of the geodesic at a point on it, oriented so the positive
/// side lies to the left.
pub fn tangent_at(plane: &Plane, g: &Geodesic, p: &Point) -> Vec3 {
    match plane.kind {
        ModelKind::Euclidean => Vec3::new(g.n.y, -g.n.x, 0.0),
        _ => {
            let w = plane.mcross(&g.n, &p.coords);
            let n2 = plane.tangent_ip(&w, &w);
            w / n2.sqrt()
        }
    }
}

/// Intersection points of two geodesics (0, 1, or, on the sphere, 2).
pub fn intersect_geodesics(plane: &Plane, a: &Geodesic, b: &Geodesic) -> Vec<Point> {
    match plane.kind {
        ModelKind::Euclidean => {
            let h = a.n.cross(&b.n);
            if h.z.abs() < 1e-14 * (1.0 + h.norm()) {
                return vec![];
            }
            vec![Point::new(h / h.z)]
        }
        ModelKind::Hyperbolic => {
            let w = plane.mcross(&a.n, &b.n);
            match plane.normalize_to_surface(&w) {
                Ok(p) => vec![p],
                Err(_) => vec![],
            }
        }
        ModelKind::Spherical => {
            let w = a.n.cross(&b.n);
            match plane.normalize_to_surface(&w) {
                Ok(p) => {
                    let q = Point::new(-p.coords);
                    vec![p, q]
                }
                Err(_) => vec![],
            }
        }
    }
}

/// Perpendicular bisector of the pair {p, q}, oriented with p on the
/// positive side.
pub fn equidistant_bisector(plane: &Plane, p: &Point, q: &Point) -> Result<Geodesic> {
    let raw = match plane.kind {
        ModelKind::Euclidean => {
            let dx = p.x() - q.x();
            let dy = p.y() - q.y();
            let c = 0.5 * (p.x() * p.x() + p.y() * p.y() - q.x() * q.x() - q.y() * q.y());
            Vec3::new(dx, dy, -c)
        }
        // <x, p - q> = 0 is exactly equal incidence with both points.
        _ => p.coords - q.coords,
    };
    Geodesic::from_raw(plane, &raw)
}

/// Distance from x to the geodesic segment [a, b], together with the nearest
/// segment point.
pub fn segment_distance(plane: &Plane, x: &Point, a: &Point, b: &Point) -> (f64, Point) {
    let dab = plane.distance(a, b);
    if dab < 1e-14 {
        return (plane.distance(x, a), *a);
    }
    let g = match geodesic_through(plane, a, b) {
        Ok(g) => g,
        Err(_) => return (plane.distance(x, a), *a),
    };
    let f = project_to_geodesic(plane, x, &g);
    let da = plane.distance(a, &f);
    let db = plane.distance(b, &f);
    if da + db <= dab + EPS_GEO {
        (plane.distance(x, &f), f)
    } else if plane.distance(x, a) <= plane.distance(x, b) {
        (plane.distance(x, a), *a)
    } else {
        (plane.distance(x, b), *b)
    }
}

/// Whether a point lies on the segment [a, b] within tolerance eps.
pub fn on_segment(plane: &Plane, x: &Point, a: &Point, b: &Point, eps: f64) -> bool {
    segment_distance(plane, x, a, b).0 <= eps
}

/// Proper crossing point of segments [a,b] and [c,d], if any. Endpoint
/// touching within eps does not count as a crossing.
pub fn segments_cross(
    plane: &Plane,
    a: &Point,
    b: &Point,
    c: &Point,
    d: &Point,
    eps: f64,
) -> Option<Point> {
    let g1 = geodesic_through(plane, a, b).ok()?;
    let g2 = geodesic_through(plane, c, d).ok()?;
    for x in intersect_geodesics(plane, &g1, &g2) {
        let on1 = on_segment(plane, &x, a, b, eps);
        let on2 = on_segment(plane, &x, c, d, eps);
        if on1 && on2 {
            let near_end = plane.distance(&x, a) <= eps
                || plane.distance(&x, b) <= eps
                || plane.distance(&x, c) <= eps
                || plane.distance(&x, d) <= eps;
            if !near_end {
                return Some(x);
            }
        }
    }
    None
}
