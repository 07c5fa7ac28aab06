//! Isometries of the model planes as 3x3 matrices.
//!
//! Hyperbolic uses O(2,1) acting on the hyperboloid, euclidean uses rigid
//! motions in homogeneous coordinates, spherical uses O(3). One matrix type
//! covers all three; constructors conjugate a standard motion by the frame
//! matrix of the anchor point.

use crate::disk::Disk;
use crate::error::Result;
use crate::geodesic::{point_on, tangent_at, Geodesic};
use crate::plane::{Mat3, ModelKind, Plane, Point, Vec3};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Isometry {
    pub(crate) m: Mat3,
}

fn minkowski_g() -> Mat3 {
    Mat3::from_diagonal(&Vec3::new(1.0, 1.0, -1.0))
}

/// Matrix whose columns are (u, rot90 u, vertical) at p: maps the origin
/// frame to the frame (u, rot90 u) at p, and is itself an isometry.
fn frame_matrix(plane: &Plane, p: &Point, u: &Vec3) -> Mat3 {
    let v = plane.rot90(p, u);
    match plane.kind {
        ModelKind::Euclidean => Mat3::new(
            u.x, v.x, p.x(),
            u.y, v.y, p.y(),
            0.0, 0.0, 1.0,
        ),
        _ => Mat3::from_columns(&[*u, v, p.coords * plane.k]),
    }
}

fn frame_inverse(plane: &Plane, f: &Mat3) -> Mat3 {
    match plane.kind {
        ModelKind::Hyperbolic => {
            let g = minkowski_g();
            g * f.transpose() * g
        }
        ModelKind::Spherical => f.transpose(),
        ModelKind::Euclidean => f.try_inverse().expect("frame matrices are invertible"),
    }
}

impl Isometry {
    pub fn identity() -> Self {
        Isometry { m: Mat3::identity() }
    }

    /// Rotation by `angle` about the fixed point p (counterclockwise in the
    /// canonical frame at p).
    pub fn rotation_about(plane: &Plane, p: &Point, angle: f64) -> Self {
        let (e1, _) = plane.frame_at(p);
        let f = frame_matrix(plane, p, &e1);
        let (s, c) = angle.sin_cos();
        let rz = Mat3::new(
            c, -s, 0.0,
            s, c, 0.0,
            0.0, 0.0, 1.0,
        );
        Isometry { m: f * rz * frame_inverse(plane, &f) }
    }

    /// Translation by arclength `dist` along the oriented geodesic g.
    pub fn translation_along(plane: &Plane, g: &Geodesic, dist: f64) -> Self {
        let p = point_on(plane, g);
        let t = tangent_at(plane, g, &p);
        let f = frame_matrix(plane, &p, &t);
        let std = match plane.kind {
            ModelKind::Euclidean => Mat3::new(
                1.0, 0.0, dist,
                0.0, 1.0, 0.0,
                0.0, 0.0, 1.0,
            ),
            ModelKind::Hyperbolic => {
                let a = plane.k * dist;
                Mat3::new(
                    a.cosh(), 0.0, a.sinh(),
                    0.0, 1.0, 0.0,
                    a.sinh(), 0.0, a.cosh(),
                )
            }
            ModelKind::Spherical => {
                let a = plane.k * dist;
                Mat3::new(
                    a.cos(), 0.0, a.sin(),
                    0.0, 1.0, 0.0,
                    -a.sin(), 0.0, a.cos(),
                )
            }
        };
        Isometry { m: f * std * frame_inverse(plane, &f) }
    }

    /// Reflection fixing the geodesic g pointwise.
    pub fn reflection(plane: &Plane, g: &Geodesic) -> Self {
        let n = g.n;
        let m = match plane.kind {
            // x - 2 (x . (nx, ny, -c)) (nx, ny, 0) keeps the affine chart.
            ModelKind::Euclidean => {
                Mat3::identity() - 2.0 * Vec3::new(n.x, n.y, 0.0) * n.transpose()
            }
            // x - 2 <x, n> n with the model form; n is form-unit.
            ModelKind::Hyperbolic => {
                Mat3::identity() - 2.0 * n * (minkowski_g() * n).transpose()
            }
            ModelKind::Spherical => Mat3::identity() - 2.0 * n * n.transpose(),
        };
        Isometry { m }
    }

    /// The isometry taking the ray (a, toward a2) onto the ray (b, toward b2):
    /// maps a to b and the initial direction of [a, a2] to that of [b, b2].
    pub fn between_rays(
        plane: &Plane,
        a: &Point,
        a2: &Point,
        b: &Point,
        b2: &Point,
    ) -> Result<Self> {
        let ua = plane.unit_tangent_toward(a, a2)?;
        let ub = plane.unit_tangent_toward(b, b2)?;
        let fa = frame_matrix(plane, a, &ua);
        let fb = frame_matrix(plane, b, &ub);
        Ok(Isometry { m: fb * frame_inverse(plane, &fa) })
    }

    pub fn compose(&self, other: &Isometry) -> Self {
        Isometry { m: self.m * other.m }
    }

    pub fn inverse(&self, plane: &Plane) -> Self {
        Isometry { m: frame_inverse(plane, &self.m) }
    }

    pub fn apply(&self, plane: &Plane, p: &Point) -> Point {
        plane.renormalize(&Point::new(self.m * p.coords))
    }

    pub fn apply_disk(&self, plane: &Plane, d: &Disk) -> Disk {
        Disk { center: self.apply(plane, &d.center), radius: d.radius }
    }

    pub fn apply_geodesic(&self, plane: &Plane, g: &Geodesic) -> Result<Geodesic> {
        let raw = match plane.kind {
            // Line vectors transform by the inverse transpose.
            ModelKind::Euclidean => {
                self.m.try_inverse().expect("isometries are invertible").transpose() * g.n
            }
            // The model form is preserved, so normals map directly.
            _ => self.m * g.n,
        };
        Geodesic::from_raw(plane, &raw)
    }

    /// Largest deviation of the matrix from preserving the model's quadratic
    /// form (and, euclidean, from fixing the affine chart).
    pub fn metric_defect(&self, plane: &Plane) -> f64 {
        match plane.kind {
            ModelKind::Hyperbolic => {
                let g = minkowski_g();
                (self.m.transpose() * g * self.m - g).abs().max()
            }
            ModelKind::Spherical => {
                (self.m.transpose() * self.m - Mat3::identity()).abs().max()
            }
            ModelKind::Euclidean => {
                let r = self.m.fixed_view::<2, 2>(0, 0);
                let ortho = (r.transpose() * r - nalgebra::Matrix2::identity())
                    .abs()
                    .max();
                let chart = (self.m.m31.abs()).max(self.m.m32.abs()).max((self.m.m33 - 1.0).abs());
                ortho.max(chart)
            }
        }
    }

    pub fn preserves_metric(&self, plane: &Plane, tol: f64) -> bool {
        self.metric_defect(plane) <= tol
    }
}
