//! Conformal charts: the Poincare disk for the hyperbolic plane and
//! stereographic projection for the sphere.
//!
//! Both are used as mapping layers (rendering, and the dual central-set
//! cross-check); all metric computation stays in the linear models.

use crate::error::{GeomError, Result};
use crate::plane::{ModelKind, Plane, Point, Vec3};

/// Hyperbolic point to Poincare disk coordinates (open unit disk).
pub fn to_poincare(plane: &Plane, p: &Point) -> Result<(f64, f64)> {
    if plane.kind != ModelKind::Hyperbolic {
        return Err(GeomError::Domain("poincare chart needs a hyperbolic plane".into()));
    }
    let k = plane.k;
    let denom = 1.0 + k * p.z();
    Ok((k * p.x() / denom, k * p.y() / denom))
}

/// Poincare disk coordinates back to the hyperboloid model.
pub fn from_poincare(plane: &Plane, x: f64, y: f64) -> Result<Point> {
    if plane.kind != ModelKind::Hyperbolic {
        return Err(GeomError::Domain("poincare chart needs a hyperbolic plane".into()));
    }
    let rho2 = x * x + y * y;
    if rho2 >= 1.0 {
        return Err(GeomError::InvalidPoint(rho2));
    }
    let k = plane.k;
    let w = (1.0 + rho2) / (1.0 - rho2);
    let scale = (1.0 + w) / k;
    plane.validate_point(&Point::new(Vec3::new(x * scale, y * scale, w / k)))?;
    Ok(Point::new(Vec3::new(x * scale, y * scale, w / k)))
}

/// Deterministic orthonormal basis of the plane through the sphere center
/// perpendicular to the pole direction.
fn pole_basis(plane: &Plane, w: &Point) -> (Vec3, Vec3) {
    let axis = w.coords * plane.k;
    let trial = if axis.x.abs() <= axis.y.abs().min(axis.z.abs()) {
        Vec3::new(1.0, 0.0, 0.0)
    } else if axis.y.abs() <= axis.z.abs() {
        Vec3::new(0.0, 1.0, 0.0)
    } else {
        Vec3::new(0.0, 0.0, 1.0)
    };
    let b1 = (trial - axis * trial.dot(&axis)).normalize();
    let b2 = axis.cross(&b1);
    (b1, b2)
}

/// Stereographic projection from the pole w: w goes to infinity, its antipode
/// to the origin, the equator of w to the circle of radius 1/k.
pub fn stereographic_project(plane: &Plane, w: &Point, p: &Point) -> Result<(f64, f64)> {
    if plane.kind != ModelKind::Spherical {
        return Err(GeomError::Domain("stereographic chart needs a spherical plane".into()));
    }
    let k = plane.k;
    let denom = 1.0 - k * k * p.coords.dot(&w.coords);
    if denom <= 1e-10 {
        return Err(GeomError::PoleProximity);
    }
    let x = w.coords + (p.coords - w.coords) / denom;
    let (b1, b2) = pole_basis(plane, w);
    Ok((x.dot(&b1), x.dot(&b2)))
}

/// Inverse of `stereographic_project` for the same pole.
pub fn stereographic_lift(plane: &Plane, w: &Point, x: f64, y: f64) -> Result<Point> {
    if plane.kind != ModelKind::Spherical {
        return Err(GeomError::Domain("stereographic chart needs a spherical plane".into()));
    }
    let k = plane.k;
    let (b1, b2) = pole_basis(plane, w);
    let chart = b1 * x + b2 * y;
    let s = (2.0 / (k * k)) / (chart.norm_squared() + 1.0 / (k * k));
    plane.normalize_to_surface(&(w.coords + (chart - w.coords) * s))
}

/// Center and radius of the euclidean circle through three chart points.
pub fn euclidean_circumcircle(
    a: (f64, f64),
    b: (f64, f64),
    c: (f64, f64),
) -> Result<((f64, f64), f64)> {
    let d = 2.0 * (a.0 * (b.1 - c.1) + b.0 * (c.1 - a.1) + c.0 * (a.1 - b.1));
    let span = (a.0 - b.0).hypot(a.1 - b.1)
        + (b.0 - c.0).hypot(b.1 - c.1)
        + (c.0 - a.0).hypot(c.1 - a.1);
    if d.abs() < 1e-13 * span * span.max(1.0) {
        return Err(GeomError::DegenerateGeodesic);
    }
    let na = a.0 * a.0 + a.1 * a.1;
    let nb = b.0 * b.0 + b.1 * b.1;
    let nc = c.0 * c.0 + c.1 * c.1;
    let ux = (na * (b.1 - c.1) + nb * (c.1 - a.1) + nc * (a.1 - b.1)) / d;
    let uy = (na * (c.0 - b.0) + nb * (a.0 - c.0) + nc * (b.0 - a.0)) / d;
    let r = (a.0 - ux).hypot(a.1 - uy);
    Ok(((ux, uy), r))
}

/// Spherical cap whose boundary passes through three points, on the side of
/// `inside`. The returned radius may exceed the hemisphere bound; callers
/// needing a `Disk` must check it.
pub fn spherical_cap_through(
    plane: &Plane,
    a: &Point,
    b: &Point,
    c: &Point,
    inside: &Point,
) -> Result<(Point, f64)> {
    if plane.kind != ModelKind::Spherical {
        return Err(GeomError::Domain("cap construction needs a spherical plane".into()));
    }
    let n = (b.coords - a.coords).cross(&(c.coords - a.coords));
    let center = plane.normalize_to_surface(&n)?;
    let r = plane.distance(&center, a);
    let din = plane.distance(&center, inside);
    if din <= r {
        Ok((center, r))
    } else {
        let anti = Point::new(-center.coords);
        Ok((anti, std::f64::consts::PI / plane.k - r))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use nalgebra::{Matrix3, Vector3};
    use rand::prelude::*;
    use rand_chacha::ChaCha8Rng;

    fn fit_circle(pts: &[(f64, f64)]) -> ((f64, f64), f64, f64) {
        // Least squares on x^2 + y^2 + d x + e y + f = 0.
        let mut m = Matrix3::zeros();
        let mut rhs = Vector3::zeros();
        for &(x, y) in pts {
            let row = Vector3::new(x, y, 1.0);
            m += row * row.transpose();
            rhs -= row * (x * x + y * y);
        }
        let sol = m.try_inverse().expect("well-spread samples") * rhs;
        let cx = -sol.x / 2.0;
        let cy = -sol.y / 2.0;
        let r = (cx * cx + cy * cy - sol.z).sqrt();
        let resid = pts
            .iter()
            .map(|&(x, y)| ((x - cx).hypot(y - cy) - r).abs())
            .fold(0.0, f64::max);
        ((cx, cy), r, resid)
    }

    #[test]
    fn poincare_roundtrip_and_frozen_value() {
        let h = Plane::hyperbolic(1.0).unwrap();
        let p = h.point_from_xy(0.0, 0.0);
        assert_eq!(to_poincare(&h, &p).unwrap(), (0.0, 0.0));

        // Distance-1 point along the x axis lands at tanh(1/2).
        let q = h.point_from_xy(1.0, 0.0);
        let (x, y) = to_poincare(&h, &q).unwrap();
        assert!((x - 0.46211715726000974_f64).abs() < 1e-15);
        assert!(y.abs() < 1e-15);

        let mut rng = ChaCha8Rng::seed_from_u64(83);
        for _ in 0..200 {
            let p = h.point_from_xy(rng.gen_range(-2.0..2.0), rng.gen_range(-2.0..2.0));
            let (x, y) = to_poincare(&h, &p).unwrap();
            assert!(x * x + y * y < 1.0);
            let back = from_poincare(&h, x, y).unwrap();
            assert!(h.distance(&p, &back) < 1e-9);
        }
        assert!(from_poincare(&h, 0.8, 0.7).is_err());
    }

    #[test]
    fn poincare_is_conformal_on_distances_through_formula() {
        // Chart distance formula of the conformal disk model must agree with
        // the model metric: d = 2/k * atanh(|z1 - z2| / |1 - z1 conj(z2)|).
        let h = Plane::hyperbolic(0.8).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(89);
        for _ in 0..200 {
            let p = h.point_from_xy(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0));
            let q = h.point_from_xy(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0));
            let (x1, y1) = to_poincare(&h, &p).unwrap();
            let (x2, y2) = to_poincare(&h, &q).unwrap();
            let num = (x1 - x2).hypot(y1 - y2);
            let den = ((1.0 - x1 * x2 - y1 * y2).powi(2) + (x1 * y2 - x2 * y1).powi(2)).sqrt();
            let chart_d = 2.0 / h.k * (num / den).atanh();
            assert!((chart_d - h.distance(&p, &q)).abs() < 1e-10);
        }
    }

    #[test]
    fn stereographic_antipode_equator_roundtrip() {
        for k in [1.0, 1.7] {
            let s = Plane::spherical(k).unwrap();
            let w = s.point_from_xy(0.3, -0.2);
            let anti = Point::new(-w.coords);
            let (x, y) = stereographic_project(&s, &w, &anti).unwrap();
            assert!(x.hypot(y) < 1e-12);

            // Equator of w: points at spherical distance pi/(2k).
            let quarter = std::f64::consts::FRAC_PI_2 / k;
            let (e1, _) = s.frame_at(&w);
            let eq = s.exp(&w, &e1, quarter);
            let (x, y) = stereographic_project(&s, &w, &eq).unwrap();
            assert!((x.hypot(y) - 1.0 / k).abs() < 1e-12);

            let mut rng = ChaCha8Rng::seed_from_u64(97);
            for _ in 0..300 {
                let v = Vec3::new(
                    rng.gen_range(-1.0..1.0),
                    rng.gen_range(-1.0..1.0),
                    rng.gen_range(-1.0..1.0),
                );
                if v.norm() < 1e-3 {
                    continue;
                }
                let p = s.normalize_to_surface(&v).unwrap();
                if s.distance(&p, &w) < 1e-3 {
                    continue;
                }
                let (x, y) = stereographic_project(&s, &w, &p).unwrap();
                let back = stereographic_lift(&s, &w, x, y).unwrap();
                assert!(s.distance(&p, &back) < 1e-9);
            }
            assert!(matches!(
                stereographic_project(&s, &w, &w),
                Err(GeomError::PoleProximity)
            ));
        }
    }

    #[test]
    fn stereographic_maps_circles_to_circles() {
        let s = Plane::spherical(1.0).unwrap();
        let w = s.point_from_xy(-0.4, 0.9);
        let mut rng = ChaCha8Rng::seed_from_u64(101);
        for _ in 0..40 {
            let c = s.point_from_xy(rng.gen_range(-0.8..0.8), rng.gen_range(-0.8..0.8));
            let r = rng.gen_range(0.1..1.2);
            // Keep the circle clear of the pole.
            if (s.distance(&c, &w) - r).abs() < 0.2 {
                continue;
            }
            let mut pts = Vec::new();
            for i in 0..100 {
                let th = i as f64 * std::f64::consts::TAU / 100.0;
                let p = s.circle_point(&c, r, th);
                pts.push(stereographic_project(&s, &w, &p).unwrap());
            }
            let (_, radius, resid) = fit_circle(&pts);
            assert!(resid < 1e-9 * (1.0 + radius), "resid {resid}");
            // Circumcircle of any three samples agrees with the fit.
            let ((ex, ey), er) = euclidean_circumcircle(pts[0], pts[33], pts[66]).unwrap();
            for &(x, y) in &pts {
                assert!(((x - ex).hypot(y - ey) - er).abs() < 1e-9 * (1.0 + er));
            }
        }
    }

    #[test]
    fn cap_through_three_points_picks_requested_side() {
        let s = Plane::spherical(1.0).unwrap();
        let c = s.point_from_xy(0.2, 0.3);
        let r = 0.7;
        let a = s.circle_point(&c, r, 0.3);
        let b = s.circle_point(&c, r, 2.1);
        let d = s.circle_point(&c, r, 4.4);
        let (center, rad) = spherical_cap_through(&s, &a, &b, &d, &c).unwrap();
        assert!(s.distance(&center, &c) < 1e-9);
        assert!((rad - r).abs() < 1e-9);
        // Asking for the complementary side returns the antipodal cap.
        let anti = Point::new(-c.coords);
        let (center2, rad2) = spherical_cap_through(&s, &a, &b, &d, &anti).unwrap();
        assert!(s.distance(&center2, &anti) < 1e-9);
        assert!((rad + rad2 - std::f64::consts::PI).abs() < 1e-9);
    }
}
