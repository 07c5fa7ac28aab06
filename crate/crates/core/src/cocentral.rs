//! Co-central sets of disk intersections: the geodesic tree of minimal
//! covering disks.
//!
//! For U the intersection of a disk family, the covering radius R(x) is the
//! farthest boundary distance, so D(x, R(x)) is the smallest covering disk
//! centered at x. Such a disk is minimal (no covering disk sits strictly
//! inside it) exactly when its circle touches U in two or more points: with
//! a single contact the disk slides toward the contact and shrinks. Contacts
//! sit at region vertices, except at an input arc's center, where the whole
//! arc is the contact set. Centers sharing a fixed contact pair {q_i, q_j}
//! sweep one stretch of the pair's bisector geodesic, so the co-central set
//! is assembled pairwise: every vertex pair contributes its feasible
//! bisector stretch, stretches share endpoints at triple contacts and arc
//! centers, and the assembled graph is certified to be a tree.

use std::collections::HashSet;
use std::f64::consts::{PI, TAU};

use crate::central::{nearest_on_tree, GeodesicTree, TreeVertex};
use crate::disk::{circle_intersection_points, same_disk, Disk};
use crate::error::{GeomError, Result};
use crate::geodesic::{geodesic_point, point_bisector, segment_distance, Geodesic};
use crate::hull::{ChainPiece, Configuration};
use crate::intersect::{intersect_disks, IntersectionRegion};
use crate::plane::{ModelKind, Plane, Point, EPS_GEO};

/// Intersection of every radius-rho disk containing both p and q: the lens
/// cut by the two extreme disks, whose centers sit where the radius-rho
/// circles around p and q cross.
#[derive(Debug, Clone, Copy)]
pub struct Spindle {
    pub p: Point,
    pub q: Point,
    pub rho: f64,
    /// Centers of the two boundary arcs (equal when d(p,q) = 2*rho).
    pub arc_centers: (Point, Point),
}

impl Spindle {
    pub fn contains(&self, plane: &Plane, x: &Point, eps: f64) -> bool {
        plane.distance(x, &self.arc_centers.0) <= self.rho + eps
            && plane.distance(x, &self.arc_centers.1) <= self.rho + eps
    }

    /// Boundary sample points, per_arc + 1 along each of the two arcs.
    pub fn boundary_points(&self, plane: &Plane, per_arc: usize) -> Vec<Point> {
        if plane.distance(&self.p, &self.q) <= 1e-12 {
            return vec![self.p];
        }
        let (c1, c2) = self.arc_centers;
        if plane.distance(&c1, &c2) <= 1e-12 {
            // single covering disk: the boundary is its whole circle
            let n = 2 * per_arc;
            return (0..n)
                .map(|s| plane.circle_point(&c1, self.rho, TAU * s as f64 / n as f64))
                .collect();
        }
        let mut out = Vec::with_capacity(2 * per_arc + 2);
        for (cen, other) in [(c1, c2), (c2, c1)] {
            let (Ok(ap), Ok(aq)) =
                (plane.direction_angle(&cen, &self.p), plane.direction_angle(&cen, &self.q))
            else {
                continue;
            };
            // of the two arcs from p to q, keep the one inside the other disk
            let mut start = ap;
            let mut sweep = (aq - ap).rem_euclid(TAU);
            let mid = plane.circle_point(&cen, self.rho, start + 0.5 * sweep);
            if plane.distance(&mid, &other) > self.rho + 1e-9 {
                start = aq;
                sweep = TAU - sweep;
            }
            for s in 0..=per_arc {
                let ang = start + sweep * s as f64 / per_arc as f64;
                out.push(plane.circle_point(&cen, self.rho, ang));
            }
        }
        out
    }
}

/// The rho-spindle of p and q, defined when d(p,q) <= 2*rho. Coincident
/// endpoints give the single point, a pair at full separation gives the
/// whole radius-rho disk around the midpoint.
pub fn spindle(plane: &Plane, p: &Point, q: &Point, rho: f64) -> Result<Spindle> {
    if !rho.is_finite() || rho < 0.0 || rho > plane.max_disk_radius() + EPS_GEO {
        return Err(GeomError::InvalidRadius(rho));
    }
    let d = plane.distance(p, q);
    if d > 2.0 * rho + EPS_GEO {
        return Err(GeomError::SpindleUndefined(d, 2.0 * rho));
    }
    let arc_centers = if d <= 1e-12 {
        // externally tangent disks meeting exactly at p
        let (u, _) = plane.frame_at(p);
        (plane.exp(p, &u, rho), plane.exp(p, &(-u), rho))
    } else if 2.0 * rho - d <= 1e-12 {
        let mid = geodesic_point(plane, p, q, 0.5)?;
        (mid, mid)
    } else {
        let pts = circle_intersection_points(
            plane,
            &Disk::new(plane, *p, rho)?,
            &Disk::new(plane, *q, rho)?,
        );
        if pts.len() < 2 {
            // numerically tangent: the two centers collapse to the midpoint
            let mid = geodesic_point(plane, p, q, 0.5)?;
            (mid, mid)
        } else {
            (pts[0], pts[1])
        }
    };
    Ok(Spindle { p: *p, q: *q, rho, arc_centers })
}

/// Farthest boundary point of the region from c, with its distance. The
/// distance is the covering radius: D(c, R) is the smallest disk centered at
/// c containing the region, since boundary coverage implies region coverage
/// by convexity. Per arc the maximum sits at the circle point diametrically
/// away from c when that point lies on the arc, else at an arc endpoint.
pub fn farthest_on_region(region: &IntersectionRegion, c: &Point) -> (f64, Point) {
    let plane = &region.chain.plane;
    let mut cands: Vec<(f64, Point)> = Vec::new();
    for piece in &region.chain.pieces {
        match piece {
            ChainPiece::Segment { start, end } => {
                cands.push((plane.distance(c, start), *start));
                cands.push((plane.distance(c, end), *end));
            }
            ChainPiece::Arc { disk_index, start_angle, sweep } => {
                let d = &region.chain.disks[*disk_index];
                let sep = plane.distance(c, &d.center);
                if sep < 1e-13 {
                    // every arc point is equally far
                    cands.push((d.radius, d.boundary_point(plane, *start_angle + 0.5 * *sweep)));
                    continue;
                }
                let p0 = d.boundary_point(plane, *start_angle);
                let p1 = d.boundary_point(plane, *start_angle + *sweep);
                cands.push((plane.distance(c, &p0), p0));
                cands.push((plane.distance(c, &p1), p1));
                if let Ok(toward) = plane.direction_angle(&d.center, c) {
                    let far = toward + PI;
                    if (far - *start_angle).rem_euclid(TAU) <= *sweep {
                        let pf = d.boundary_point(plane, far);
                        cands.push((plane.distance(c, &pf), pf));
                    }
                }
            }
        }
    }
    cands.into_iter().fold((0.0, *c), |acc, x| if x.0 > acc.0 { x } else { acc })
}

/// Radius of the smallest covering disk of the region centered at c.
pub fn covering_radius(region: &IntersectionRegion, c: &Point) -> f64 {
    farthest_on_region(region, c).0
}

/// Region boundary samples: all vertices plus per_arc interior points of
/// each arc. Coverage checks over these points certify coverage of the whole
/// region.
pub fn region_boundary_samples(region: &IntersectionRegion, per_arc: usize) -> Vec<Point> {
    let plane = &region.chain.plane;
    let mut out = region.vertices.clone();
    for piece in &region.chain.pieces {
        let ChainPiece::Arc { disk_index, start_angle, sweep } = piece else { continue };
        let d = &region.chain.disks[*disk_index];
        for s in 0..per_arc {
            let ang = start_angle + sweep * (s as f64 + 0.5) / per_arc as f64;
            out.push(d.boundary_point(plane, ang));
        }
    }
    out
}

/// The smallest covering disk centered at c with its contact points on the
/// region boundary. Two or more contacts certify that the disk is minimal:
/// with a single contact it could slide toward the contact and shrink.
#[derive(Debug, Clone)]
pub struct CoveringDisk {
    pub disk: Disk,
    pub contacts: Vec<Point>,
}

pub fn covering_disk_at(region: &IntersectionRegion, c: &Point) -> Result<CoveringDisk> {
    let plane = &region.chain.plane;
    let (r, _) = farthest_on_region(region, c);
    let mut contacts: Vec<Point> = Vec::new();
    let push = |contacts: &mut Vec<Point>, p: Point| {
        if !contacts.iter().any(|q| plane.distance(q, &p) <= 1e-9) {
            contacts.push(p);
        }
    };
    for q in &region.vertices {
        if (plane.distance(c, q) - r).abs() <= 1e-7 {
            push(&mut contacts, *q);
        }
    }
    for piece in &region.chain.pieces {
        let ChainPiece::Arc { disk_index, start_angle, sweep } = piece else { continue };
        let d = &region.chain.disks[*disk_index];
        let sep = plane.distance(c, &d.center);
        if sep < 1e-9 {
            if (d.radius - r).abs() <= 1e-7 {
                // the whole arc is contact; record its ends and middle
                push(&mut contacts, d.boundary_point(plane, *start_angle));
                push(&mut contacts, d.boundary_point(plane, *start_angle + 0.5 * *sweep));
                push(&mut contacts, d.boundary_point(plane, *start_angle + *sweep));
            }
            continue;
        }
        if let Ok(toward) = plane.direction_angle(&d.center, c) {
            let far = toward + PI;
            if (far - *start_angle).rem_euclid(TAU) <= *sweep {
                let pf = d.boundary_point(plane, far);
                if (plane.distance(c, &pf) - r).abs() <= 1e-7 {
                    push(&mut contacts, pf);
                }
            }
        }
    }
    Ok(CoveringDisk { disk: Disk::new(plane, *c, r)?, contacts })
}

/// The stretch of the (q_i, q_j) bisector whose points center minimal
/// covering disks through both vertices, returned as its two endpoints (equal
/// for a single point, None when no bisector point is feasible). Feasibility
/// means the covering radius equals the common vertex distance; the interior
/// of the stretch touches the region exactly at {q_i, q_j}, the endpoints
/// pick up a third contact or a whole arc.
pub fn min_covering_disk_on_bisector(
    region: &IntersectionRegion,
    i: usize,
    j: usize,
) -> Result<Option<(Point, Point)>> {
    let plane = &region.chain.plane;
    let m = region.vertices.len();
    if i >= m || j >= m || i == j {
        return Err(GeomError::Domain("bisector needs two distinct region vertices".into()));
    }
    let (qi, qj) = (region.vertices[i], region.vertices[j]);
    if plane.distance(&qi, &qj) <= 1e-9 {
        return Err(GeomError::Domain("coincident region vertices".into()));
    }
    let pm = geodesic_point(plane, &qi, &qj, 0.5)?;
    let dir = plane.rot90(&pm, &plane.unit_tangent_toward(&pm, &qj)?);
    let at = |t: f64| plane.exp(&pm, &dir, t);
    let slack = |x: &Point| {
        covering_radius(region, x) - 0.5 * (plane.distance(x, &qi) + plane.distance(x, &qj))
    };
    let feasible = |t: f64| slack(&at(t)) <= 1e-9;

    // covering centers stay within one covering radius of the region
    let mut reach = 0.0f64;
    for v in &region.vertices {
        reach = reach.max(plane.distance(&pm, v));
    }
    let mut rmax = 0.0f64;
    for piece in &region.chain.pieces {
        if let ChainPiece::Arc { disk_index, .. } = piece {
            rmax = rmax.max(region.chain.disks[*disk_index].radius);
        }
    }
    let mut cap = reach + rmax + 1.0;
    if plane.kind == ModelKind::Spherical {
        cap = cap.min(0.999 * PI / plane.k);
    }

    // signed bisector coordinate of a candidate point
    let coord = |x: &Point| -> Option<f64> {
        let d = plane.distance(&pm, x);
        if d <= 1e-12 {
            return Some(0.0);
        }
        if plane.distance(&at(d), x) <= 1e-6 * (1.0 + d) {
            return Some(d);
        }
        if plane.distance(&at(-d), x) <= 1e-6 * (1.0 + d) {
            return Some(-d);
        }
        None
    };

    // Stretch endpoints are always structured points: input arc centers or
    // points equidistant from q_i, q_j and a third vertex. An arc whose far
    // point is in range pushes the covering radius strictly above the vertex
    // distance (the vertices lie inside that arc's disk), so nothing else
    // can terminate the stretch.
    let mut structured: Vec<(f64, Point)> = Vec::new();
    for piece in &region.chain.pieces {
        let ChainPiece::Arc { disk_index, .. } = piece else { continue };
        let c = region.chain.disks[*disk_index].center;
        if (plane.distance(&c, &qi) - plane.distance(&c, &qj)).abs() <= 1e-6 {
            if let Some(t) = coord(&c) {
                structured.push((t, c));
            }
        }
    }
    let b1 = point_bisector(plane, &qi, &qj)?;
    for k in 0..m {
        if k == i || k == j {
            continue;
        }
        let qk = region.vertices[k];
        if plane.distance(&qk, &qi) <= 1e-9 || plane.distance(&qk, &qj) <= 1e-9 {
            continue;
        }
        let b2 = point_bisector(plane, &qj, &qk)?;
        let raw = match plane.kind {
            ModelKind::Euclidean => b1.n.cross(&b2.n),
            _ => plane.mcross(&b1.n, &b2.n),
        };
        let Ok(x0) = plane.normalize_to_surface(&raw) else { continue };
        let mut cands = vec![x0];
        if plane.kind == ModelKind::Spherical {
            cands.push(Point::new(-x0.coords));
        }
        for x in cands {
            let (da, db, dc) =
                (plane.distance(&x, &qi), plane.distance(&x, &qj), plane.distance(&x, &qk));
            if (da - db).abs() <= 1e-6 && (da - dc).abs() <= 1e-6 {
                if let Some(t) = coord(&x) {
                    structured.push((t, x));
                }
            }
        }
    }

    // grow the stretch from points inside it: the feasible structured seeds
    // and the pair midpoint, with a near-first grid fallback
    let mut lo = f64::INFINITY;
    let mut hi = f64::NEG_INFINITY;
    for (t, p) in &structured {
        if t.abs() <= cap && slack(p) <= 1e-9 {
            lo = lo.min(*t);
            hi = hi.max(*t);
        }
    }
    if feasible(0.0) {
        lo = lo.min(0.0);
        hi = hi.max(0.0);
    }
    if lo > hi {
        let grid = 64;
        let mut fallback: Option<f64> = None;
        for s in -grid..=grid {
            let t = cap * s as f64 / grid as f64;
            if feasible(t) && fallback.map_or(true, |b: f64| t.abs() < b.abs()) {
                fallback = Some(t);
            }
        }
        match fallback {
            Some(t) => {
                lo = t;
                hi = t;
            }
            None => return Ok(None),
        }
    }

    // push each end outward to an infeasible bracket, then bisect onto the
    // feasibility boundary
    let step = cap / 512.0;
    let refine = |mut inside: f64, sgn: f64| -> f64 {
        let mut outside = None;
        loop {
            let next = inside + sgn * step;
            if next.abs() > cap {
                break;
            }
            if feasible(next) {
                inside = next;
            } else {
                outside = Some(next);
                break;
            }
        }
        let Some(mut out) = outside else { return inside };
        for _ in 0..70 {
            let mid = 0.5 * (inside + out);
            if feasible(mid) {
                inside = mid;
            } else {
                out = mid;
            }
        }
        inside
    };
    // the slack slope vanishes where the new contact is nearly aligned with
    // the bisector, letting the bisection overshoot the true endpoint; snap
    // back to the outermost feasible structured point within the overshoot
    // window
    let snap = |t_star: f64, sgn: f64| -> (f64, Option<Point>) {
        let mut best: Option<(f64, Point)> = None;
        for (ts, p) in &structured {
            if slack(p) > 1e-9 {
                continue;
            }
            let beyond = sgn * (t_star - ts);
            if (-1e-9..=2e-3).contains(&beyond)
                && best.map_or(true, |(bt, _)| sgn * (ts - bt) > 0.0)
            {
                best = Some((*ts, *p));
            }
        }
        match best {
            Some((ts, p)) => (ts, Some(p)),
            None => (t_star, None),
        }
    };
    let (tlo, plo) = snap(refine(lo, -1.0), -1.0);
    let (thi, phi) = snap(refine(hi, 1.0), 1.0);
    let a = plo.unwrap_or_else(|| at(tlo));
    let b = phi.unwrap_or_else(|| at(thi));
    Ok(Some((a, b)))
}

// Endpoints of different bisector stretches land on a shared junction only
// to within the feasibility tolerance, so vertices merge coarser than the
// geodesic epsilon.
fn merge_vertex(plane: &Plane, vertices: &mut Vec<TreeVertex>, p: Point, r: f64) -> usize {
    for (i, v) in vertices.iter().enumerate() {
        if plane.distance(&v.point, &p) <= 1e-7 {
            return i;
        }
    }
    vertices.push(TreeVertex { point: p, radius: r });
    vertices.len() - 1
}

/// Tree of minimal covering disks of the region. Vertices carry the covering
/// radius; both entries of edge_sides hold the vertex-pair bisector carrying
/// the edge. Leaves sit at the input arc centers, where the whole arc is the
/// contact set; junctions are equidistant from three or more vertices.
pub fn cocentral_tree(region: &IntersectionRegion) -> Result<GeodesicTree> {
    let plane = &region.chain.plane;
    if region.empty || region.is_degenerate_point() {
        return Err(GeomError::Domain("co-central set needs a region with interior".into()));
    }
    if let Some(i) = region.full_disk {
        let d = &region.chain.disks[i];
        return Ok(GeodesicTree {
            vertices: vec![TreeVertex { point: d.center, radius: d.radius }],
            edges: Vec::new(),
            edge_sides: Vec::new(),
        });
    }
    let m = region.vertices.len();
    let mut vertices: Vec<TreeVertex> = Vec::new();
    let mut edges: Vec<(usize, usize)> = Vec::new();
    let mut edge_sides: Vec<(Geodesic, Geodesic)> = Vec::new();
    let mut seen = HashSet::new();
    for i in 0..m {
        for j in i + 1..m {
            if plane.distance(&region.vertices[i], &region.vertices[j]) <= 1e-9 {
                continue;
            }
            let Some((a, b)) = min_covering_disk_on_bisector(region, i, j)? else { continue };
            let ia = merge_vertex(plane, &mut vertices, a, covering_radius(region, &a));
            let ib = merge_vertex(plane, &mut vertices, b, covering_radius(region, &b));
            if ia == ib {
                continue;
            }
            let key = (ia.min(ib), ia.max(ib));
            if seen.insert(key) {
                let bis = point_bisector(plane, &region.vertices[i], &region.vertices[j])?;
                edges.push(key);
                edge_sides.push((bis, bis));
            }
        }
    }
    let tree = GeodesicTree { vertices, edges, edge_sides };
    if !tree.is_tree() {
        return Err(GeomError::TreeStructure(
            "bisector stretches did not assemble into a tree".into(),
        ));
    }
    Ok(tree)
}

/// Smallest phi(x) = covering_radius(x) + d(x, center) over the tree: the
/// best minimal covering disk nested inside the given disk.
fn minimal_cover(
    plane: &Plane,
    region: &IntersectionRegion,
    tree: &GeodesicTree,
    d: &Disk,
) -> Result<Disk> {
    // already minimal: keep the disk bit-identical
    let (dist_tree, _) = nearest_on_tree(plane, tree, &d.center);
    if dist_tree <= 1e-7 && (covering_radius(region, &d.center) - d.radius).abs() <= 1e-8 {
        return Ok(*d);
    }

    let phi = |x: &Point| covering_radius(region, x) + plane.distance(x, &d.center);
    let mut best_p = tree.vertices[0].point;
    let mut best = phi(&best_p);
    let consider = |p: Point, best: &mut f64, best_p: &mut Point| {
        let v = phi(&p);
        if v < *best {
            *best = v;
            *best_p = p;
        }
    };
    for v in &tree.vertices {
        consider(v.point, &mut best, &mut best_p);
    }
    for (ia, ib) in &tree.edges {
        let pu = tree.vertices[*ia].point;
        let pv = tree.vertices[*ib].point;
        // the projection of the center is a kink of phi along the edge
        let (_, foot) = segment_distance(plane, &d.center, &pu, &pv);
        consider(foot, &mut best, &mut best_p);
        let n = 32;
        let mut bt = 0.0;
        let mut bv = f64::INFINITY;
        for i in 0..=n {
            let t = i as f64 / n as f64;
            let v = phi(&geodesic_point(plane, &pu, &pv, t)?);
            if v < bv {
                bv = v;
                bt = t;
            }
        }
        // golden-section polish on the bracketing subinterval
        let gr = 0.5 * (5.0f64.sqrt() - 1.0);
        let mut lo = (bt - 1.0 / n as f64).max(0.0);
        let mut hi = (bt + 1.0 / n as f64).min(1.0);
        let mut t1 = hi - gr * (hi - lo);
        let mut t2 = lo + gr * (hi - lo);
        let mut f1 = phi(&geodesic_point(plane, &pu, &pv, t1)?);
        let mut f2 = phi(&geodesic_point(plane, &pu, &pv, t2)?);
        for _ in 0..90 {
            if f1 > f2 {
                lo = t1;
                t1 = t2;
                f1 = f2;
                t2 = lo + gr * (hi - lo);
                f2 = phi(&geodesic_point(plane, &pu, &pv, t2)?);
            } else {
                hi = t2;
                t2 = t1;
                f2 = f1;
                t1 = hi - gr * (hi - lo);
                f1 = phi(&geodesic_point(plane, &pu, &pv, t1)?);
            }
        }
        consider(geodesic_point(plane, &pu, &pv, 0.5 * (lo + hi))?, &mut best, &mut best_p);
    }
    let r = covering_radius(region, &best_p);
    Disk::new(plane, best_p, r)
}

/// Replace every disk by a minimal covering disk of the intersection nested
/// inside it and add the tree vertex disks. The intersection is unchanged:
/// every output disk still covers it and sits inside the disk it replaces,
/// which is asserted per disk.
pub fn cocentral_sharpen(config: &Configuration) -> Result<Configuration> {
    let plane = &config.plane;
    let region = intersect_disks(config)?;
    if region.empty || region.is_degenerate_point() {
        return Err(GeomError::Domain("sharpening needs an intersection with interior".into()));
    }
    let tree = cocentral_tree(&region)?;
    let mut out: Vec<Disk> = Vec::new();
    let keep = |out: &mut Vec<Disk>, d: Disk| {
        if !out.iter().any(|e| same_disk(plane, e, &d, 1e-7)) {
            out.push(d);
        }
    };
    for d in &config.disks {
        let rep = minimal_cover(plane, &region, &tree, d)?;
        assert!(
            d.radius - rep.radius >= plane.distance(&rep.center, &d.center) - EPS_GEO,
            "replacement disk fails to nest inside its original",
        );
        keep(&mut out, rep);
    }
    for v in &tree.vertices {
        keep(&mut out, Disk::new(plane, v.point, v.radius)?);
    }
    Configuration::new(*plane, out)
}
