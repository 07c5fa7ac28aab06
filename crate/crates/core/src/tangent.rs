//! Outer common tangent geodesics of disk pairs.
//!
//! A tangent with both disks on its positive side satisfies two linear
//! incidence constraints <c_i, n> = sigma(r_i) plus the quadratic
//! normalization of n, so the solutions are the real roots of one quadratic
//! along the kernel line of the constraint matrix. Zero, one, or two real
//! roots correspond to nested, internally tangent, and generic pairs.

use crate::disk::Disk;
use crate::error::{GeomError, Result};
use crate::geodesic::{
    geodesic_from_direction, project_to_geodesic, signed_distance, Geodesic,
};
use crate::plane::{ModelKind, Plane, Point, Vec3};

/// One outer common tangent: the oriented line plus its two tangency points.
#[derive(Debug, Clone, Copy)]
pub struct TangentLine {
    /// Both disks lie on the positive (left) side.
    pub line: Geodesic,
    /// Tangency point on the boundary of the first disk.
    pub foot_a: Point,
    /// Tangency point on the boundary of the second disk.
    pub foot_b: Point,
}

fn incidence_row(plane: &Plane, p: &Point) -> Vec3 {
    match plane.kind {
        // <p, n> = (G p) . n
        ModelKind::Hyperbolic => Vec3::new(p.coords.x, p.coords.y, -p.coords.z),
        _ => p.coords,
    }
}

fn quad_form(plane: &Plane, a: &Vec3, b: &Vec3) -> f64 {
    match plane.kind {
        ModelKind::Euclidean => a.x * b.x + a.y * b.y,
        _ => plane.ip(a, b),
    }
}

/// Both outer common tangents of a disk pair, ordered deterministically.
///
/// Errors: `NoTangent` if one disk is nested in the other,
/// `InfiniteTangentFamily` for coincident disks (every direction works).
pub fn outer_common_tangents(plane: &Plane, a: &Disk, b: &Disk) -> Result<Vec<TangentLine>> {
    let r1 = incidence_row(plane, &a.center);
    let r2 = incidence_row(plane, &b.center);
    let s1 = plane.sigma(a.radius);
    let s2 = plane.sigma(b.radius);

    // Gram matrix of the two constraint rows.
    let g11 = r1.dot(&r1);
    let g12 = r1.dot(&r2);
    let g22 = r2.dot(&r2);
    let det = g11 * g22 - g12 * g12;
    let scale = g11.max(g22);
    if det <= 1e-14 * scale * scale {
        // Rows are parallel: coincident (or antipodal) centers. Consistent
        // right-hand sides mean every support line of one disk works.
        let mismatch = if g11 >= g22 {
            s2 - (g12 / g11) * s1
        } else {
            s1 - (g12 / g22) * s2
        };
        return if mismatch.abs() <= 1e-12 * (1.0 + s1.abs() + s2.abs()) {
            Err(GeomError::InfiniteTangentFamily)
        } else {
            Err(GeomError::NoTangent)
        };
    }

    // Minimum-norm particular solution n0 = A^T (A A^T)^{-1} (s1, s2).
    let y1 = (g22 * s1 - g12 * s2) / det;
    let y2 = (g11 * s2 - g12 * s1) / det;
    let n0 = r1 * y1 + r2 * y2;

    // Kernel direction of both incidence constraints.
    let m = match plane.kind {
        ModelKind::Hyperbolic => plane.mcross(&a.center.coords, &b.center.coords),
        _ => a.center.coords.cross(&b.center.coords),
    };

    // Q(n0 + t m) = 1 with Q the line normalization form.
    let qm = quad_form(plane, &m, &m);
    let qcross = quad_form(plane, &n0, &m);
    let q0 = quad_form(plane, &n0, &n0) - 1.0;
    debug_assert!(qm > 0.0);
    let disc = qcross * qcross - qm * q0;
    let tol = 1e-12 * qm.max(1.0);
    if disc < -tol {
        return Err(GeomError::NoTangent);
    }
    let sq = disc.max(0.0).sqrt();
    let mut roots = vec![(-qcross - sq) / qm];
    if disc > tol {
        roots.push((-qcross + sq) / qm);
    }

    let mut out = Vec::with_capacity(roots.len());
    for t in roots {
        let line = Geodesic::from_raw(plane, &(n0 + m * t))?;
        let foot_a = project_to_geodesic(plane, &a.center, &line);
        let foot_b = project_to_geodesic(plane, &b.center, &line);
        out.push(TangentLine { line, foot_a, foot_b });
    }
    Ok(out)
}

/// Tangent geodesic touching the circle at the boundary point of direction
/// angle `theta`, oriented counterclockwise (disk on the left). The disk must
/// have positive radius.
pub fn circle_tangent_at(plane: &Plane, disk: &Disk, theta: f64) -> Result<Geodesic> {
    if disk.is_degenerate() {
        return Err(GeomError::InvalidRadius(disk.radius));
    }
    let f = disk.boundary_point(plane, theta);
    let u_in = plane.unit_tangent_toward(&f, &disk.center)?;
    let w = plane.rot90(&f, &(-u_in));
    geodesic_from_direction(plane, &f, &w)
}

/// Tangent line residual: how far the disk pokes through to the negative
/// side of g (0 for a line with the disk entirely on the positive side,
/// touching it). Used to characterize tangency in tests and oracles.
pub fn support_violation(plane: &Plane, disk: &Disk, g: &Geodesic) -> f64 {
    disk.radius - signed_distance(plane, &disk.center, g)
}
