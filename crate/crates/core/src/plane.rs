//! The three constant-curvature planes in their linear models.
//!
//! All three geometries live on a surface inside R^3 and share one code path
//! wherever a bilinear form expresses the construction:
//!
//! * hyperbolic, curvature -k^2: upper sheet of x^2 + y^2 - z^2 = -1/k^2
//!   with the Minkowski form <u,v> = ux vx + uy vy - uz vz,
//! * euclidean: the affine chart z = 1 with the plain dot product,
//! * spherical, curvature +k^2: the sphere of radius 1/k.
//!
//! Distances, exponential maps, frames and circle measurements are provided
//! here; oriented geodesics live in `geodesic`.

use nalgebra::{Matrix3, Vector3};
use serde::{Deserialize, Serialize};

use crate::error::{GeomError, Result};

/// Absolute tolerance used by geometric predicates on lengths.
pub const EPS_GEO: f64 = 1e-9;

/// Looser tolerance for surface-membership residuals after long isometry chains.
pub const EPS_SURFACE: f64 = 1e-7;

pub type Vec3 = Vector3<f64>;
pub type Mat3 = Matrix3<f64>;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ModelKind {
    Hyperbolic,
    Euclidean,
    Spherical,
}

/// A constant-curvature plane. `k` is the curvature scale: the Gaussian
/// curvature is -k^2, 0, or +k^2 depending on the kind. `k` is ignored for
/// the euclidean kind and normalized to 1.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Plane {
    pub kind: ModelKind,
    pub k: f64,
}

/// A point of the plane, stored as coordinates on the model surface.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Point {
    pub coords: Vec3,
}

impl Point {
    pub fn new(coords: Vec3) -> Self {
        Point { coords }
    }

    pub fn x(&self) -> f64 {
        self.coords.x
    }

    pub fn y(&self) -> f64 {
        self.coords.y
    }

    pub fn z(&self) -> f64 {
        self.coords.z
    }
}

impl Plane {
    pub fn hyperbolic(k: f64) -> Result<Self> {
        if !(k.is_finite() && k > 0.0) {
            return Err(GeomError::InvalidCurvature(k));
        }
        Ok(Plane { kind: ModelKind::Hyperbolic, k })
    }

    pub fn euclidean() -> Self {
        Plane { kind: ModelKind::Euclidean, k: 1.0 }
    }

    pub fn spherical(k: f64) -> Result<Self> {
        if !(k.is_finite() && k > 0.0) {
            return Err(GeomError::InvalidCurvature(k));
        }
        Ok(Plane { kind: ModelKind::Spherical, k })
    }

    pub fn curvature(&self) -> f64 {
        match self.kind {
            ModelKind::Hyperbolic => -self.k * self.k,
            ModelKind::Euclidean => 0.0,
            ModelKind::Spherical => self.k * self.k,
        }
    }

    /// Upper bound on valid disk radii: pi/(2k) on the sphere (disks stay
    /// inside an open hemisphere), unbounded otherwise.
    pub fn max_disk_radius(&self) -> f64 {
        match self.kind {
            ModelKind::Spherical => std::f64::consts::FRAC_PI_2 / self.k,
            _ => f64::INFINITY,
        }
    }

    pub fn origin(&self) -> Point {
        match self.kind {
            ModelKind::Euclidean => Point::new(Vec3::new(0.0, 0.0, 1.0)),
            _ => Point::new(Vec3::new(0.0, 0.0, 1.0 / self.k)),
        }
    }

    /// Bilinear form of the ambient model space applied to raw vectors.
    /// For the euclidean chart this is the plain dot product; incidence
    /// conventions for euclidean lines are handled in `geodesic`.
    pub(crate) fn ip(&self, a: &Vec3, b: &Vec3) -> f64 {
        match self.kind {
            ModelKind::Hyperbolic => a.x * b.x + a.y * b.y - a.z * b.z,
            _ => a.dot(b),
        }
    }

    /// Cross-product adapted to the bilinear form: the result is
    /// form-orthogonal to both arguments. Used to solve pairs of incidence
    /// constraints. Not meaningful for euclidean point pairs.
    pub(crate) fn mcross(&self, a: &Vec3, b: &Vec3) -> Vec3 {
        let c = a.cross(b);
        match self.kind {
            ModelKind::Hyperbolic => Vec3::new(c.x, c.y, -c.z),
            _ => c,
        }
    }

    /// Inner product of tangent vectors (positive definite on tangent spaces
    /// in all three models).
    pub(crate) fn tangent_ip(&self, u: &Vec3, v: &Vec3) -> f64 {
        self.ip(u, v)
    }

    fn surface_value(&self, v: &Vec3) -> f64 {
        match self.kind {
            ModelKind::Hyperbolic => self.ip(v, v) + 1.0 / (self.k * self.k),
            ModelKind::Euclidean => v.z - 1.0,
            ModelKind::Spherical => v.norm_squared() - 1.0 / (self.k * self.k),
        }
    }

    pub fn validate_point(&self, p: &Point) -> Result<()> {
        let r = self.surface_value(&p.coords).abs();
        let ok = r <= EPS_SURFACE * (1.0 + p.coords.norm_squared());
        let upper = self.kind != ModelKind::Hyperbolic || p.coords.z > 0.0;
        if ok && upper {
            Ok(())
        } else {
            Err(GeomError::InvalidPoint(r))
        }
    }

    /// Rescale a raw vector onto the model surface. Fails when the vector
    /// cannot reach the surface (e.g. a spacelike vector in the hyperbolic
    /// model, or a zero vector).
    pub fn normalize_to_surface(&self, v: &Vec3) -> Result<Point> {
        match self.kind {
            ModelKind::Hyperbolic => {
                let q = self.ip(v, v);
                if q >= 0.0 {
                    return Err(GeomError::InvalidPoint(q));
                }
                let s = 1.0 / (self.k * (-q).sqrt());
                let mut w = v * s;
                if w.z < 0.0 {
                    w = -w;
                }
                Ok(Point::new(w))
            }
            ModelKind::Euclidean => {
                if v.z.abs() < 1e-300 {
                    return Err(GeomError::InvalidPoint(v.z));
                }
                Ok(Point::new(v / v.z))
            }
            ModelKind::Spherical => {
                let n = v.norm();
                if n < 1e-300 {
                    return Err(GeomError::InvalidPoint(0.0));
                }
                Ok(Point::new(v / (self.k * n)))
            }
        }
    }

    /// Project a drifted point back onto the surface (cheap insurance after
    /// isometry chains).
    pub fn renormalize(&self, p: &Point) -> Point {
        match self.kind {
            ModelKind::Euclidean => Point::new(Vec3::new(p.x() / p.z(), p.y() / p.z(), 1.0)),
            _ => self
                .normalize_to_surface(&p.coords)
                .unwrap_or(*p),
        }
    }

    /// Build a point from chart coordinates: (x, y) euclidean, and for the
    /// curved models the pair is interpreted as the tangent-space image of
    /// the exponential map at the origin (polar: direction and distance).
    pub fn point_from_xy(&self, x: f64, y: f64) -> Point {
        match self.kind {
            ModelKind::Euclidean => Point::new(Vec3::new(x, y, 1.0)),
            _ => {
                let d = (x * x + y * y).sqrt();
                if d < 1e-300 {
                    return self.origin();
                }
                let dir = Vec3::new(x / d, y / d, 0.0);
                self.exp(&self.origin(), &dir, d)
            }
        }
    }

    pub fn distance(&self, p: &Point, q: &Point) -> f64 {
        match self.kind {
            ModelKind::Hyperbolic => {
                // sinh(k d / 2) = k sqrt(<p-q, p-q>) / 2: the form on the
                // difference vector stays accurate near d = 0, where the
                // acosh of the inner product loses all precision.
                let w = p.coords - q.coords;
                let q2 = self.ip(&w, &w).max(0.0);
                2.0 / self.k * (0.5 * self.k * q2.sqrt()).asinh()
            }
            ModelKind::Euclidean => (p.x() - q.x()).hypot(p.y() - q.y()),
            ModelKind::Spherical => {
                // Angle between unit vectors via atan2 of chord lengths:
                // accurate at both the coincident and the antipodal end.
                let a = (p.coords - q.coords).norm();
                let b = (p.coords + q.coords).norm();
                2.0 / self.k * a.atan2(b)
            }
        }
    }

    /// Geodesic circle radius function: sinh(kr)/k, r, sin(kr)/k.
    /// A circle of radius r has circumference 2*pi*sigma(r), and sigma(r) is
    /// the incidence value of a geodesic at signed distance r.
    pub fn sigma(&self, r: f64) -> f64 {
        match self.kind {
            ModelKind::Hyperbolic => (self.k * r).sinh() / self.k,
            ModelKind::Euclidean => r,
            ModelKind::Spherical => (self.k * r).sin() / self.k,
        }
    }

    /// Inverse of `sigma` on its principal branch.
    pub fn sigma_inv(&self, v: f64) -> f64 {
        match self.kind {
            ModelKind::Hyperbolic => (self.k * v).asinh() / self.k,
            ModelKind::Euclidean => v,
            ModelKind::Spherical => (self.k * v).clamp(-1.0, 1.0).asin() / self.k,
        }
    }

    fn check_radius(&self, r: f64) -> Result<()> {
        if !(r.is_finite() && r >= 0.0) || r > self.max_disk_radius() + EPS_GEO {
            return Err(GeomError::InvalidRadius(r));
        }
        Ok(())
    }

    pub fn circle_perimeter(&self, r: f64) -> Result<f64> {
        self.check_radius(r)?;
        Ok(2.0 * std::f64::consts::PI * self.sigma(r))
    }

    pub fn circle_area(&self, r: f64) -> Result<f64> {
        self.check_radius(r)?;
        let two_pi = 2.0 * std::f64::consts::PI;
        Ok(match self.kind {
            ModelKind::Hyperbolic => two_pi * ((self.k * r).cosh() - 1.0) / (self.k * self.k),
            ModelKind::Euclidean => std::f64::consts::PI * r * r,
            ModelKind::Spherical => two_pi * (1.0 - (self.k * r).cos()) / (self.k * self.k),
        })
    }

    /// Geodesic curvature of a circle of radius r: k*coth(kr), 1/r, k*cot(kr).
    /// Radius zero is rejected (curvature diverges).
    pub fn circle_geodesic_curvature(&self, r: f64) -> Result<f64> {
        self.check_radius(r)?;
        if r <= 0.0 {
            return Err(GeomError::InvalidRadius(r));
        }
        Ok(match self.kind {
            ModelKind::Hyperbolic => self.k / (self.k * r).tanh(),
            ModelKind::Euclidean => 1.0 / r,
            ModelKind::Spherical => self.k / (self.k * r).tan(),
        })
    }

    /// Unit-speed geodesic from p with unit tangent u, evaluated at arclength s.
    pub fn exp(&self, p: &Point, u: &Vec3, s: f64) -> Point {
        match self.kind {
            ModelKind::Hyperbolic => {
                let ks = self.k * s;
                Point::new(p.coords * ks.cosh() + u * (ks.sinh() / self.k))
            }
            ModelKind::Euclidean => Point::new(p.coords + u * s),
            ModelKind::Spherical => {
                let ks = self.k * s;
                Point::new(p.coords * ks.cos() + u * (ks.sin() / self.k))
            }
        }
    }

    /// Unit tangent at p pointing toward q. Errors on coincident points and,
    /// on the sphere, on antipodal pairs.
    pub fn unit_tangent_toward(&self, p: &Point, q: &Point) -> Result<Vec3> {
        let w = match self.kind {
            ModelKind::Hyperbolic => {
                let c = self.ip(&p.coords, &q.coords);
                q.coords + p.coords * (self.k * self.k * c)
            }
            ModelKind::Euclidean => Vec3::new(q.x() - p.x(), q.y() - p.y(), 0.0),
            ModelKind::Spherical => {
                let c = self.ip(&p.coords, &q.coords);
                q.coords - p.coords * (self.k * self.k * c)
            }
        };
        let n2 = self.tangent_ip(&w, &w);
        if n2 <= 1e-28 {
            let d = self.distance(p, q);
            if self.kind == ModelKind::Spherical && d > 1.0 / self.k {
                return Err(GeomError::AntipodalPoints);
            }
            return Err(GeomError::DegenerateGeodesic);
        }
        Ok(w / n2.sqrt())
    }

    /// Rotate a unit tangent vector at p by +90 degrees (counterclockwise in
    /// the standard orientation).
    pub fn rot90(&self, p: &Point, u: &Vec3) -> Vec3 {
        match self.kind {
            ModelKind::Euclidean => Vec3::new(-u.y, u.x, 0.0),
            _ => self.mcross(&(p.coords * self.k), u),
        }
    }

    /// Canonical orthonormal tangent frame (e1, e2) at p.
    pub fn frame_at(&self, p: &Point) -> (Vec3, Vec3) {
        let trial = if p.coords.x.abs() <= p.coords.y.abs() {
            Vec3::new(1.0, 0.0, 0.0)
        } else {
            Vec3::new(0.0, 1.0, 0.0)
        };
        let e1 = match self.kind {
            ModelKind::Euclidean => Vec3::new(1.0, 0.0, 0.0),
            _ => {
                let c = self.ip(&p.coords, &trial);
                let w = match self.kind {
                    ModelKind::Hyperbolic => trial + p.coords * (self.k * self.k * c),
                    _ => trial - p.coords * (self.k * self.k * c),
                };
                w / self.tangent_ip(&w, &w).sqrt()
            }
        };
        let e2 = self.rot90(p, &e1);
        (e1, e2)
    }

    /// Signed angle from tangent u to tangent v at p, in (-pi, pi].
    pub fn oriented_angle(&self, p: &Point, u: &Vec3, v: &Vec3) -> f64 {
        let c = self.tangent_ip(u, v);
        let s = self.tangent_ip(v, &self.rot90(p, u));
        s.atan2(c)
    }

    /// Unsigned angle at p between the geodesics toward q1 and q2.
    pub fn angle_at(&self, p: &Point, q1: &Point, q2: &Point) -> Result<f64> {
        let u = self.unit_tangent_toward(p, q1)?;
        let v = self.unit_tangent_toward(p, q2)?;
        Ok(self.oriented_angle(p, &u, &v).abs())
    }

    /// Point reached from the circle center c at angle theta (measured in the
    /// canonical frame at c) and radius r.
    pub fn circle_point(&self, c: &Point, r: f64, theta: f64) -> Point {
        let (e1, e2) = self.frame_at(c);
        let u = e1 * theta.cos() + e2 * theta.sin();
        self.exp(c, &u, r)
    }

    /// Angle of the direction from c toward x in the canonical frame at c.
    pub fn direction_angle(&self, c: &Point, x: &Point) -> Result<f64> {
        let u = self.unit_tangent_toward(c, x)?;
        let (e1, e2) = self.frame_at(c);
        Ok(self.tangent_ip(&u, &e2).atan2(self.tangent_ip(&u, &e1)))
    }

    /// Angle of a tangent direction u at c in the canonical frame at c.
    pub fn tangent_angle(&self, c: &Point, u: &Vec3) -> f64 {
        let (e1, e2) = self.frame_at(c);
        self.tangent_ip(u, &e2).atan2(self.tangent_ip(u, &e1))
    }
}

/// Relative-and-absolute closeness test for lengths.
pub fn close(a: f64, b: f64, eps: f64) -> bool {
    (a - b).abs() <= eps * (1.0 + a.abs().max(b.abs()))
}
