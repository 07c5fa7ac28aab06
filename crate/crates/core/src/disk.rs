//! Closed metric disks.

use crate::error::{GeomError, Result};
use crate::plane::{close, ModelKind, Plane, Point, Vec3, EPS_GEO};
use serde::{Deserialize, Serialize};

/// Closed disk of center `center` and radius `radius` >= 0. On the sphere the
/// radius must stay within a hemisphere cap: radius <= pi / (2k).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Disk {
    pub center: Point,
    pub radius: f64,
}

impl Disk {
    pub fn new(plane: &Plane, center: Point, radius: f64) -> Result<Self> {
        if !radius.is_finite() || radius < 0.0 {
            return Err(GeomError::InvalidRadius(radius));
        }
        if radius > plane.max_disk_radius() + EPS_GEO {
            return Err(GeomError::InvalidRadius(radius));
        }
        plane.validate_point(&center)?;
        Ok(Disk { center, radius })
    }

    /// Point of the disk, boundary included.
    pub fn contains(&self, plane: &Plane, x: &Point, eps: f64) -> bool {
        plane.distance(&self.center, x) <= self.radius + eps
    }

    /// Boundary point at the given direction angle (measured in the canonical
    /// frame of the center).
    pub fn boundary_point(&self, plane: &Plane, angle: f64) -> Point {
        plane.circle_point(&self.center, self.radius, angle)
    }

    /// Whether this disk is contained in `other`, allowing slack eps.
    pub fn nested_in(&self, plane: &Plane, other: &Disk, eps: f64) -> bool {
        plane.distance(&self.center, &other.center) <= other.radius - self.radius + eps
    }

    pub fn perimeter(&self, plane: &Plane) -> f64 {
        plane.circle_perimeter(self.radius).expect("valid radius")
    }

    pub fn area(&self, plane: &Plane) -> f64 {
        plane.circle_area(self.radius).expect("valid radius")
    }

    pub fn is_degenerate(&self) -> bool {
        self.radius < 1e-14
    }
}

/// Two disks coincide within tolerance.
pub fn same_disk(plane: &Plane, a: &Disk, b: &Disk, eps: f64) -> bool {
    close(a.radius, b.radius, eps) && plane.distance(&a.center, &b.center) <= eps
}

/// Incidence value of points at distance r from a center: <x, c> for the
/// model form. d(x, c) = r is a linear constraint on x in the curved models.
fn tau(plane: &Plane, r: f64) -> f64 {
    let k = plane.k;
    match plane.kind {
        ModelKind::Hyperbolic => -(k * r).cosh() / (k * k),
        ModelKind::Euclidean => unreachable!("euclidean incidence is not linear in x"),
        ModelKind::Spherical => (k * r).cos() / (k * k),
    }
}

/// Intersection points of the two boundary circles: two points crossing
/// transversally, one point when tangent (within tolerance), none otherwise.
/// Concentric circle pairs yield none.
pub fn circle_intersection_points(plane: &Plane, a: &Disk, b: &Disk) -> Vec<Point> {
    match plane.kind {
        ModelKind::Euclidean => {
            let (ax, ay) = (a.center.x(), a.center.y());
            let (bx, by) = (b.center.x(), b.center.y());
            let d = (bx - ax).hypot(by - ay);
            if d < 1e-14 {
                return vec![];
            }
            let along = (d * d + a.radius * a.radius - b.radius * b.radius) / (2.0 * d);
            let h2 = a.radius * a.radius - along * along;
            let scale = (a.radius + b.radius + d).powi(2).max(1e-30);
            let ux = (bx - ax) / d;
            let uy = (by - ay) / d;
            let base = (ax + along * ux, ay + along * uy);
            if h2 > 1e-13 * scale {
                let h = h2.sqrt();
                vec![
                    Point::new(Vec3::new(base.0 - h * uy, base.1 + h * ux, 1.0)),
                    Point::new(Vec3::new(base.0 + h * uy, base.1 - h * ux, 1.0)),
                ]
            } else if h2 > -1e-13 * scale {
                vec![Point::new(Vec3::new(base.0, base.1, 1.0))]
            } else {
                vec![]
            }
        }
        _ => {
            // Two linear incidence constraints <x, c_i> = tau(r_i) plus the
            // surface quadric. Solve in the basis (c_a, c_b, mcross).
            let ca = &a.center.coords;
            let cb = &b.center.coords;
            let gaa = plane.ip(ca, ca);
            let gab = plane.ip(ca, cb);
            let gbb = plane.ip(cb, cb);
            let det = gaa * gbb - gab * gab;
            let scale = gaa.abs().max(gbb.abs());
            if det.abs() < 1e-14 * scale * scale {
                return vec![];
            }
            let ta = tau(plane, a.radius);
            let tb = tau(plane, b.radius);
            let alpha = (gbb * ta - gab * tb) / det;
            let beta = (gaa * tb - gab * ta) / det;
            let x0 = ca * alpha + cb * beta;
            // <x0, x0> collapses to alpha ta + beta tb.
            let q0 = alpha * ta + beta * tb;
            let m = plane.mcross(ca, cb);
            let qm = plane.ip(&m, &m);
            let target = match plane.kind {
                ModelKind::Hyperbolic => -1.0 / (plane.k * plane.k),
                _ => 1.0 / (plane.k * plane.k),
            };
            let g2 = (target - q0) / qm;
            let tol = 1e-12 / (plane.k * plane.k) / qm.abs().max(1e-30);
            // Order matches the euclidean branch: left of the center-to-center
            // travel direction first (positive side of that geodesic).
            let mut out = Vec::new();
            if g2 > tol {
                let g = g2.sqrt();
                out.push(plane.renormalize(&Point::new(x0 + m * g)));
                out.push(plane.renormalize(&Point::new(x0 - m * g)));
            } else if g2 > -tol {
                out.push(plane.renormalize(&Point::new(x0)));
            }
            out
        }
    }
}

/// Precomputed membership test for a fixed disk: one inner product per query,
/// no inverse trig. Used by the bulk samplers.
pub struct FastMembership {
    center: Point,
    threshold: f64,
    kind: ModelKind,
    k: f64,
}

impl FastMembership {
    pub fn new(plane: &Plane, disk: &Disk) -> Self {
        let threshold = match plane.kind {
            // d(c, x) <= r  <=>  -k^2 <c, x> <= cosh(k r)
            ModelKind::Hyperbolic => (plane.k * disk.radius).cosh(),
            // d <= r  <=>  d^2 <= r^2
            ModelKind::Euclidean => disk.radius * disk.radius,
            // d <= r  <=>  k^2 <c, x> >= cos(k r)
            ModelKind::Spherical => (plane.k * disk.radius).cos(),
        };
        FastMembership {
            center: disk.center,
            threshold,
            kind: plane.kind,
            k: plane.k,
        }
    }

    #[inline]
    pub fn contains(&self, x: &Point) -> bool {
        match self.kind {
            ModelKind::Hyperbolic => {
                let ip = self.center.coords.x * x.coords.x + self.center.coords.y * x.coords.y
                    - self.center.coords.z * x.coords.z;
                -(self.k * self.k) * ip <= self.threshold + 1e-12
            }
            ModelKind::Euclidean => {
                let dx = x.coords.x - self.center.coords.x;
                let dy = x.coords.y - self.center.coords.y;
                dx * dx + dy * dy <= self.threshold + 1e-12
            }
            ModelKind::Spherical => {
                let ip = self.center.coords.dot(&x.coords);
                (self.k * self.k) * ip >= self.threshold - 1e-12
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::prelude::*;
    use rand_chacha::ChaCha8Rng;

    fn planes() -> Vec<Plane> {
        vec![
            Plane::hyperbolic(1.0).unwrap(),
            Plane::euclidean(),
            Plane::spherical(1.0).unwrap(),
        ]
    }

    #[test]
    fn rejects_bad_radii() {
        let e = Plane::euclidean();
        assert!(Disk::new(&e, e.origin(), -0.1).is_err());
        assert!(Disk::new(&e, e.origin(), f64::NAN).is_err());
        let s = Plane::spherical(2.0).unwrap();
        let lim = std::f64::consts::FRAC_PI_2 / 2.0;
        assert!(Disk::new(&s, s.origin(), lim - 0.01).is_ok());
        assert!(Disk::new(&s, s.origin(), lim + 0.01).is_err());
    }

    #[test]
    fn containment_and_nesting() {
        for plane in planes() {
            let big = Disk::new(&plane, plane.point_from_xy(0.1, 0.0), 0.8).unwrap();
            let small = Disk::new(&plane, plane.point_from_xy(0.3, 0.1), 0.3).unwrap();
            assert!(small.nested_in(&plane, &big, 1e-12));
            assert!(!big.nested_in(&plane, &small, 1e-12));
            assert!(big.contains(&plane, &small.center, 0.0));
            let far = plane.point_from_xy(1.2, 0.0);
            assert!(!big.contains(&plane, &far, 0.0));
        }
    }

    #[test]
    fn boundary_points_at_radius() {
        for plane in planes() {
            let d = Disk::new(&plane, plane.point_from_xy(0.2, -0.1), 0.5).unwrap();
            for i in 0..12 {
                let a = i as f64 * std::f64::consts::TAU / 12.0;
                let b = d.boundary_point(&plane, a);
                assert!((plane.distance(&d.center, &b) - 0.5).abs() < 1e-10);
            }
        }
    }

    #[test]
    fn frozen_lens_vertices() {
        // Unit circles centered at (0,0) and (1,0) cross at (1/2, +-sqrt(3)/2):
        // equating the two circle equations gives x = 1/2, then
        // y^2 = 1 - 1/4.
        let e = Plane::euclidean();
        let a = Disk::new(&e, e.point_from_xy(0.0, 0.0), 1.0).unwrap();
        let b = Disk::new(&e, e.point_from_xy(1.0, 0.0), 1.0).unwrap();
        let pts = circle_intersection_points(&e, &a, &b);
        assert_eq!(pts.len(), 2);
        let s3 = 3.0_f64.sqrt() / 2.0;
        // Left of the travel direction (+x) comes first.
        assert!((pts[0].x() - 0.5).abs() < 1e-12 && (pts[0].y() - s3).abs() < 1e-12);
        assert!((pts[1].x() - 0.5).abs() < 1e-12 && (pts[1].y() + s3).abs() < 1e-12);
    }

    #[test]
    fn circle_crossings_at_correct_distances() {
        use crate::geodesic::{geodesic_through, signed_distance};
        for plane in planes() {
            let mut rng = ChaCha8Rng::seed_from_u64(59);
            let mut crossing = 0;
            for _ in 0..400 {
                let c1 = plane.point_from_xy(rng.gen_range(-0.6..0.6), rng.gen_range(-0.6..0.6));
                let c2 = plane.point_from_xy(rng.gen_range(-0.6..0.6), rng.gen_range(-0.6..0.6));
                let d = plane.distance(&c1, &c2);
                if d < 1e-3 {
                    continue;
                }
                let r1 = rng.gen_range(0.05..0.8);
                let r2 = rng.gen_range(0.05..0.8);
                let a = Disk::new(&plane, c1, r1).unwrap();
                let b = Disk::new(&plane, c2, r2).unwrap();
                let pts = circle_intersection_points(&plane, &a, &b);
                let should_cross = d < r1 + r2 - 1e-9 && d > (r1 - r2).abs() + 1e-9;
                if should_cross {
                    assert_eq!(pts.len(), 2, "{:?}", plane.kind);
                    crossing += 1;
                    let g = geodesic_through(&plane, &c1, &c2).unwrap();
                    assert!(signed_distance(&plane, &pts[0], &g) > 0.0);
                    assert!(signed_distance(&plane, &pts[1], &g) < 0.0);
                } else if d > r1 + r2 + 1e-9 || d < (r1 - r2).abs() - 1e-9 {
                    assert!(pts.is_empty());
                }
                for p in pts {
                    assert!((plane.distance(&p, &c1) - r1).abs() < 1e-9);
                    assert!((plane.distance(&p, &c2) - r2).abs() < 1e-9);
                    plane.validate_point(&p).unwrap();
                }
            }
            assert!(crossing > 50);
        }
    }

    #[test]
    fn tangent_circles_touch_once() {
        for plane in planes() {
            let c1 = plane.point_from_xy(-0.3, 0.0);
            let u = plane
                .unit_tangent_toward(&c1, &plane.point_from_xy(0.5, 0.0))
                .unwrap();
            let c2 = plane.exp(&c1, &u, 0.7);
            let a = Disk::new(&plane, c1, 0.3).unwrap();
            let b = Disk::new(&plane, c2, 0.4).unwrap();
            let pts = circle_intersection_points(&plane, &a, &b);
            assert_eq!(pts.len(), 1, "{:?}", plane.kind);
            assert!((plane.distance(&pts[0], &c1) - 0.3).abs() < 1e-6);
        }
    }

    #[test]
    fn fast_membership_matches_distance() {
        for plane in planes() {
            let mut rng = ChaCha8Rng::seed_from_u64(53);
            for _ in 0..50 {
                let c = plane.point_from_xy(rng.gen_range(-0.5..0.5), rng.gen_range(-0.5..0.5));
                let r = rng.gen_range(0.05..0.9);
                let d = Disk::new(&plane, c, r).unwrap();
                let fast = FastMembership::new(&plane, &d);
                for _ in 0..200 {
                    let x =
                        plane.point_from_xy(rng.gen_range(-1.5..1.5), rng.gen_range(-1.5..1.5));
                    let slow = d.contains(&plane, &x, 0.0);
                    let dist = plane.distance(&d.center, &x);
                    if (dist - r).abs() < 1e-9 {
                        continue;
                    }
                    assert_eq!(fast.contains(&x), slow);
                }
            }
        }
    }
}
