//! Convex hulls of disk unions: boundary chains, perimeter, area,
//! containment.
//!
//! The boundary of conv(D_1 u ... u D_k) alternates circle arcs and geodesic
//! segments lying on outer common tangents. The chain is built by gift
//! wrapping: start at a support point, repeatedly take the departure tangent
//! of minimal counterclockwise advance along the current circle. Radius-0
//! disks are first-class; their "arcs" are zero-length corner markers whose
//! sweep equals the exterior turn.

use crate::disk::Disk;
use crate::error::{GeomError, Result};
use crate::geodesic::{
    distance_gradient, geodesic_from_direction, geodesic_through, signed_distance, tangent_at,
    Geodesic,
};
use crate::minimax::weighted_center;
use crate::plane::{ModelKind, Plane, Point, Vec3, EPS_GEO};
use crate::tangent::{outer_common_tangents, TangentLine};

const TAU: f64 = std::f64::consts::TAU;
const PI: f64 = std::f64::consts::PI;

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum ChainPiece {
    /// Circle arc of the indexed disk, swept counterclockwise from
    /// start_angle by sweep >= 0 (angles in the canonical frame of the disk
    /// center). Radius-0 disks contribute zero-length corner arcs whose
    /// sweep is the exterior turn of the boundary.
    Arc {
        disk_index: usize,
        start_angle: f64,
        sweep: f64,
    },
    /// Geodesic segment of an outer common tangent.
    Segment { start: Point, end: Point },
}

/// Closed CCW boundary of a convex hull of disks, with the disks it
/// references. Pieces alternate Arc, Segment, ... except for the single-arc
/// full-circle case.
#[derive(Debug, Clone)]
pub struct BoundaryChain {
    pub plane: Plane,
    pub disks: Vec<Disk>,
    pub pieces: Vec<ChainPiece>,
}

/// An ordered disk family in one plane. On the sphere, construction certifies
/// that every disk lies in one closed hemisphere (margin >= -eps of the
/// smallest cap enclosing all disks vs the quarter-circumference).
#[derive(Debug, Clone)]
pub struct Configuration {
    pub plane: Plane,
    pub disks: Vec<Disk>,
    hemisphere_pole: Option<Point>,
}

impl Configuration {
    pub fn new(plane: Plane, disks: Vec<Disk>) -> Result<Self> {
        if disks.is_empty() {
            return Err(GeomError::EmptyConfiguration);
        }
        for d in &disks {
            plane.validate_point(&d.center)?;
            if d.radius < 0.0 || d.radius > plane.max_disk_radius() + EPS_GEO {
                return Err(GeomError::InvalidRadius(d.radius));
            }
        }
        let hemisphere_pole = match plane.kind {
            ModelKind::Spherical => Some(certify_hemisphere(&plane, &disks)?),
            _ => None,
        };
        Ok(Configuration { plane, disks, hemisphere_pole })
    }

    /// Pole of a closed hemisphere containing all disks (spherical only).
    pub fn hemisphere_pole(&self) -> Option<Point> {
        self.hemisphere_pole
    }
}

/// Smallest-cap hemisphere certificate: returns the cap center if the
/// enclosing radius stays within a quarter circumference.
fn certify_hemisphere(plane: &Plane, disks: &[Disk]) -> Result<Point> {
    let sites: Vec<Point> = disks.iter().map(|d| d.center).collect();
    let weights: Vec<f64> = disks.iter().map(|d| d.radius).collect();
    let sol = weighted_center(plane, &sites, &weights)?;
    let quarter = PI / (2.0 * plane.k);
    let margin = quarter - sol.value;
    if margin >= -EPS_GEO {
        return Ok(sol.point);
    }
    Err(GeomError::HemisphereViolation(margin))
}

/// Keep only disks not contained in another disk of the family. Returns the
/// original indices, sorted by decreasing radius then index.
fn prune_nested(plane: &Plane, disks: &[Disk]) -> Vec<usize> {
    let mut order: Vec<usize> = (0..disks.len()).collect();
    order.sort_by(|&a, &b| {
        disks[b]
            .radius
            .total_cmp(&disks[a].radius)
            .then(a.cmp(&b))
    });
    let mut kept: Vec<usize> = Vec::new();
    'next: for &i in &order {
        for &j in &kept {
            if disks[i].nested_in(plane, &disks[j], EPS_GEO) {
                continue 'next;
            }
        }
        kept.push(i);
    }
    kept
}

/// Boundary angle at which a travel direction u departs the circle around c:
/// the canonical-frame angle of the tangency point whose CCW circle tangent
/// is u. Works for radius 0, where the boundary point is c itself.
fn departure_angle(plane: &Plane, c: &Point, u: &Vec3) -> f64 {
    plane.tangent_angle(c, u) - PI / 2.0
}

struct Departure {
    kept_pos: usize,
    theta_dep: f64,
    theta_arr: f64,
    foot_a: Point,
    foot_b: Point,
}

fn arr_angle(plane: &Plane, disk: &Disk, line: &Geodesic, foot: &Point) -> Result<f64> {
    if disk.is_degenerate() {
        Ok(departure_angle(plane, &disk.center, &tangent_at(plane, line, foot)))
    } else {
        plane.direction_angle(&disk.center, foot)
    }
}

/// CCW angular advance from a to b in [0, 2*pi); sub-tolerance wraps count
/// as zero advance (corner), since a genuine full-circle arc cannot occur
/// between two tangency events.
fn ccw_advance(a: f64, b: f64) -> f64 {
    let d = (b - a).rem_euclid(TAU);
    if d > TAU - 1e-8 {
        0.0
    } else {
        d
    }
}

fn select_departure(
    plane: &Plane,
    disks: &[Disk],
    kept: &[usize],
    from_pos: usize,
    theta_cur: f64,
) -> Result<Departure> {
    let i = kept[from_pos];
    let di = &disks[i];
    let mut best: Option<(f64, f64, f64, usize, Departure)> = None;
    for (pos, &j) in kept.iter().enumerate() {
        if pos == from_pos {
            continue;
        }
        let dj = &disks[j];
        let tangents = match outer_common_tangents(plane, di, dj) {
            Ok(t) => t,
            Err(GeomError::NoTangent) | Err(GeomError::InfiniteTangentFamily) => continue,
            Err(e) => return Err(e),
        };
        for t in tangents {
            // Keep only the tangent traversed from this disk toward the
            // other; the reverse-oriented one serves the return trip.
            let travel = tangent_at(plane, &t.line, &t.foot_a);
            if plane.distance(&t.foot_a, &t.foot_b) > 1e-12 {
                match plane.unit_tangent_toward(&t.foot_a, &t.foot_b) {
                    Ok(toward) => {
                        if plane.ip(&travel, &toward) <= 0.0 {
                            continue;
                        }
                    }
                    Err(_) => continue,
                }
            }
            let theta_dep = if di.is_degenerate() {
                departure_angle(plane, &di.center, &travel)
            } else {
                plane.direction_angle(&di.center, &t.foot_a)?
            };
            let adv = ccw_advance(theta_cur, theta_dep);
            let theta_arr = arr_angle(plane, dj, &t.line, &t.foot_b)?;
            // Advance ties mean several disks touch the same tangent line.
            // Ride it to the farthest tangency: disks touching the line at
            // earlier points never turn the boundary there. Coincident feet
            // (internally tangent circles) resolve to the larger disk.
            let gap = plane.distance(&t.foot_a, &t.foot_b);
            let better = match &best {
                None => true,
                Some((badv, bgap, brad, bidx, _)) => {
                    adv < badv - 1e-12
                        || (adv < badv + 1e-12
                            && (gap > bgap + 1e-12
                                || (gap > bgap - 1e-12
                                    && (dj.radius > *brad + 1e-12
                                        || (dj.radius > *brad - 1e-12 && j < *bidx)))))
                }
            };
            if better {
                best = Some((
                    adv,
                    gap,
                    dj.radius,
                    j,
                    Departure {
                        kept_pos: pos,
                        theta_dep,
                        theta_arr,
                        foot_a: t.foot_a,
                        foot_b: t.foot_b,
                    },
                ));
            }
        }
    }
    best.map(|(_, _, _, _, d)| d)
        .ok_or_else(|| GeomError::ChainIntegrity("no departure tangent found".into()))
}

/// Boundary chain of conv(union of the disks), counterclockwise.
pub fn hull_boundary(config: &Configuration) -> Result<BoundaryChain> {
    let plane = &config.plane;
    let disks = &config.disks;
    let kept = prune_nested(plane, disks);

    if kept.len() == 1 {
        return Ok(BoundaryChain {
            plane: *plane,
            disks: disks.clone(),
            pieces: vec![ChainPiece::Arc {
                disk_index: kept[0],
                start_angle: 0.0,
                sweep: TAU,
            }],
        });
    }

    // Support start: extremal disk against a reference geodesic placed with
    // every disk strictly on its positive side. There sigma(sd) is positive
    // and convex along geodesics, so the maximum of (signed distance +
    // radius) over the hull equals the maximum over the disks and is
    // attained at a boundary support point. On the sphere sigma(sd) is
    // concave instead and the mirrored argument applies to the minimum of
    // (signed distance - radius) against the equator of the hemisphere pole.
    let (ref_geodesic, pick_max) = match plane.kind {
        ModelKind::Spherical => {
            let pole = config.hemisphere_pole.expect("spherical configs carry a pole");
            let (e1, _) = plane.frame_at(&pole);
            let on_eq = plane.exp(&pole, &e1, PI / (2.0 * plane.k));
            let u = plane
                .unit_tangent_toward(&on_eq, &pole)
                .expect("pole off equator");
            // Orient the equator with the pole (and every disk) on the
            // positive side.
            let dir = -plane.rot90(&on_eq, &u);
            (geodesic_from_direction(plane, &on_eq, &dir)?, false)
        }
        _ => {
            let o = plane.origin();
            let (e1, e2) = plane.frame_at(&o);
            let axis = geodesic_from_direction(plane, &o, &e1)?;
            let lowest = kept
                .iter()
                .map(|&i| signed_distance(plane, &disks[i].center, &axis) - disks[i].radius)
                .fold(f64::INFINITY, f64::min);
            let g = if lowest >= 1.0 {
                axis
            } else {
                // Drop the reference a unit below the lowest disk point.
                let q = plane.exp(&o, &(-e2), 1.0 - lowest);
                let w = plane
                    .unit_tangent_toward(&q, &o)
                    .expect("offset point distinct from origin");
                geodesic_from_direction(plane, &q, &(-plane.rot90(&q, &w)))?
            };
            (g, true)
        }
    };
    let mut start_pos = 0;
    let mut start_score = f64::NEG_INFINITY;
    for (pos, &i) in kept.iter().enumerate() {
        let sd = signed_distance(plane, &disks[i].center, &ref_geodesic);
        let score = if pick_max {
            sd + disks[i].radius
        } else {
            -(sd - disks[i].radius)
        };
        if score > start_score + 1e-12
            || (score > start_score - 1e-12 && disks[i].radius > disks[kept[start_pos]].radius)
        {
            start_score = score;
            start_pos = pos;
        }
    }
    let start_disk = &disks[kept[start_pos]];
    let grad = distance_gradient(plane, &start_disk.center, &ref_geodesic)
        .map_err(|_| GeomError::ChainIntegrity("support gradient undefined".into()))?;
    let outward = if pick_max { grad } else { -grad };
    let theta_star = plane.tangent_angle(&start_disk.center, &outward);

    let mut pieces: Vec<ChainPiece> = Vec::new();
    let mut cur_pos = start_pos;
    let mut theta_cur = theta_star;
    let mut first: Option<(usize, f64, Point)> = None;
    let limit = 4 * kept.len() + 16;
    for _ in 0..limit {
        let dep = select_departure(plane, disks, &kept, cur_pos, theta_cur)?;
        match &first {
            None => first = Some((dep.kept_pos, dep.theta_dep, dep.foot_a)),
            Some((fpos, _ftheta, ffoot)) => {
                if cur_pos == start_pos
                    && dep.kept_pos == *fpos
                    && plane.distance(&dep.foot_a, ffoot) <= 1e-7
                    && !pieces.is_empty()
                {
                    // Closed: merge the wrap-around arc into the first piece.
                    if let ChainPiece::Arc { start_angle, sweep, .. } = &mut pieces[0] {
                        let total = ccw_advance(theta_cur, *start_angle + *sweep);
                        *start_angle = theta_cur;
                        *sweep = total;
                    }
                    return Ok(BoundaryChain {
                        plane: *plane,
                        disks: disks.clone(),
                        pieces,
                    });
                }
            }
        }
        pieces.push(ChainPiece::Arc {
            disk_index: kept[cur_pos],
            start_angle: theta_cur,
            sweep: ccw_advance(theta_cur, dep.theta_dep),
        });
        pieces.push(ChainPiece::Segment { start: dep.foot_a, end: dep.foot_b });
        cur_pos = dep.kept_pos;
        theta_cur = dep.theta_arr;
    }
    Err(GeomError::ChainIntegrity("hull walk failed to close".into()))
}

impl BoundaryChain {
    /// Endpoints of a piece (start, end).
    pub fn piece_endpoints(&self, piece: &ChainPiece) -> (Point, Point) {
        match piece {
            ChainPiece::Arc { disk_index, start_angle, sweep } => {
                let d = &self.disks[*disk_index];
                (
                    d.boundary_point(&self.plane, *start_angle),
                    d.boundary_point(&self.plane, *start_angle + *sweep),
                )
            }
            ChainPiece::Segment { start, end } => (*start, *end),
        }
    }

    /// Sum of arc lengths and segment lengths.
    pub fn perimeter(&self) -> f64 {
        self.pieces
            .iter()
            .map(|p| match p {
                ChainPiece::Arc { disk_index, sweep, .. } => {
                    self.plane.sigma(self.disks[*disk_index].radius) * sweep
                }
                ChainPiece::Segment { start, end } => self.plane.distance(start, end),
            })
            .sum()
    }

    /// True when the chain is one full circle.
    pub fn is_full_circle(&self) -> bool {
        matches!(self.pieces.as_slice(), [ChainPiece::Arc { sweep, .. }] if (*sweep - TAU).abs() < 1e-9)
    }

    fn validate(&self) -> Result<()> {
        if self.pieces.is_empty() {
            return Err(GeomError::ChainIntegrity("empty chain".into()));
        }
        let n = self.pieces.len();
        for (idx, piece) in self.pieces.iter().enumerate() {
            let (_, end) = self.piece_endpoints(piece);
            let (next_start, _) = self.piece_endpoints(&self.pieces[(idx + 1) % n]);
            if self.plane.distance(&end, &next_start) > 1e-6 {
                return Err(GeomError::ChainIntegrity(format!(
                    "pieces {idx} and {} do not share endpoints",
                    (idx + 1) % n
                )));
            }
        }
        Ok(())
    }
}

pub fn hull_perimeter(chain: &BoundaryChain) -> Result<f64> {
    chain.validate()?;
    Ok(chain.perimeter())
}

/// Closed-form perimeter of the hull of two disks: twice (arc stub of each
/// disk plus one tangent segment). Falls back to the enclosing circle when
/// one disk contains the other.
pub fn two_disk_perimeter(plane: &Plane, a: &Disk, b: &Disk) -> Result<f64> {
    if b.nested_in(plane, a, EPS_GEO) {
        return plane.circle_perimeter(a.radius);
    }
    if a.nested_in(plane, b, EPS_GEO) {
        return plane.circle_perimeter(b.radius);
    }
    let tangents = outer_common_tangents(plane, a, b)?;
    let t: &TangentLine = &tangents[0];
    let seg = plane.distance(&t.foot_a, &t.foot_b);
    let ang_a = if a.is_degenerate() {
        PI
    } else {
        plane.angle_at(&a.center, &t.foot_a, &b.center)?
    };
    let ang_b = if b.is_degenerate() {
        PI
    } else {
        plane.angle_at(&b.center, &t.foot_b, &a.center)?
    };
    Ok(2.0
        * ((PI - ang_a) * plane.sigma(a.radius)
            + seg
            + (PI - ang_b) * plane.sigma(b.radius)))
}

/// Subdivide arcs so each sub-arc sweeps at most pi/2, yielding polygon
/// vertices plus minor circular caps. Shared helper for area and sampling.
fn arc_subdivisions(sweep: f64) -> usize {
    ((sweep / (PI / 2.0)).ceil() as usize).max(1)
}

/// Area of a geodesic polygon given its CCW vertices (turning-angle form for
/// the curved planes, shoelace for the euclidean one). Duplicate consecutive
/// vertices must be removed beforehand.
fn polygon_area(plane: &Plane, vs: &[Point]) -> Result<f64> {
    let n = vs.len();
    if n < 3 {
        return Ok(0.0);
    }
    match plane.kind {
        ModelKind::Euclidean => {
            let mut s = 0.0;
            for i in 0..n {
                let a = &vs[i];
                let b = &vs[(i + 1) % n];
                s += a.x() * b.y() - b.x() * a.y();
            }
            Ok(0.5 * s)
        }
        _ => {
            let mut turn_sum = 0.0;
            for i in 0..n {
                let prev = &vs[(i + n - 1) % n];
                let here = &vs[i];
                let next = &vs[(i + 1) % n];
                // Arrival direction at `here` on the geodesic from prev.
                let arrived = plane.unit_tangent_toward(here, prev).map(|v| -v)?;
                let outgoing = plane.unit_tangent_toward(here, next)?;
                turn_sum += plane.oriented_angle(here, &arrived, &outgoing);
            }
            Ok((TAU - turn_sum) / plane.curvature())
        }
    }
}

/// Area of the circular cap between an arc (sweep <= pi/2 + eps) and its
/// chord: sector minus isoceles center triangle.
fn cap_area(plane: &Plane, disk: &Disk, start: f64, sweep: f64) -> Result<f64> {
    if disk.radius < 1e-12 || sweep < 1e-14 {
        return Ok(0.0);
    }
    let sector = sweep / TAU * disk.area(plane);
    let a = disk.boundary_point(plane, start);
    let b = disk.boundary_point(plane, start + sweep);
    let tri = match plane.kind {
        ModelKind::Euclidean => {
            0.5 * disk.radius * disk.radius * sweep.sin()
        }
        _ => {
            let alpha = plane.angle_at(&disk.center, &a, &b)?;
            let beta = plane.angle_at(&a, &disk.center, &b)?;
            let gamma = plane.angle_at(&b, &disk.center, &a)?;
            (alpha + beta + gamma - PI) / plane.curvature()
        }
    };
    Ok(sector - tri)
}

/// Area of the convex region bounded by the chain: the geodesic polygon of
/// arc endpoints (arcs subdivided to quarter turns) plus the caps.
pub fn hull_area(chain: &BoundaryChain) -> Result<f64> {
    chain.validate()?;
    if chain.is_full_circle() {
        if let ChainPiece::Arc { disk_index, .. } = chain.pieces[0] {
            return Ok(chain.disks[disk_index].area(&chain.plane));
        }
    }
    let plane = &chain.plane;
    let mut verts: Vec<Point> = Vec::new();
    let mut caps = 0.0;
    for piece in &chain.pieces {
        match piece {
            ChainPiece::Segment { start, .. } => verts.push(*start),
            ChainPiece::Arc { disk_index, start_angle, sweep } => {
                let d = &chain.disks[*disk_index];
                let m = arc_subdivisions(*sweep);
                let step = sweep / m as f64;
                for s in 0..m {
                    let a0 = start_angle + s as f64 * step;
                    verts.push(d.boundary_point(plane, a0));
                    caps += cap_area(plane, d, a0, step)?;
                }
            }
        }
    }
    // Drop duplicate consecutive vertices (radius-0 corner arcs).
    let mut poly: Vec<Point> = Vec::new();
    for v in verts {
        if poly
            .last()
            .map_or(true, |p| plane.distance(p, &v) > 1e-10)
        {
            poly.push(v);
        }
    }
    while poly.len() > 1
        && plane.distance(poly.first().unwrap(), poly.last().unwrap()) <= 1e-10
    {
        poly.pop();
    }
    Ok(polygon_area(plane, &poly)? + caps)
}

/// Membership in the closed hull region: the region decomposes exactly into
/// the input disks and the geodesic polygon of tangency feet.
pub fn hull_contains(chain: &BoundaryChain, p: &Point, eps: f64) -> bool {
    let plane = &chain.plane;
    if chain
        .disks
        .iter()
        .any(|d| d.contains(plane, p, eps))
    {
        return true;
    }
    // Feet polygon: endpoints of the segments in order.
    let mut verts: Vec<Point> = Vec::new();
    for piece in &chain.pieces {
        if let ChainPiece::Segment { start, end } = piece {
            verts.push(*start);
            verts.push(*end);
        }
    }
    let mut poly: Vec<Point> = Vec::new();
    for v in verts {
        if poly
            .last()
            .map_or(true, |q| plane.distance(q, &v) > 1e-12)
        {
            poly.push(v);
        }
    }
    while poly.len() > 1
        && plane.distance(poly.first().unwrap(), poly.last().unwrap()) <= 1e-12
    {
        poly.pop();
    }
    if poly.len() < 3 {
        if poly.len() == 2 {
            return crate::geodesic::on_segment(plane, p, &poly[0], &poly[1], eps);
        }
        return false;
    }
    let n = poly.len();
    for i in 0..n {
        let a = &poly[i];
        let b = &poly[(i + 1) % n];
        if plane.distance(a, b) <= 1e-12 {
            continue;
        }
        match geodesic_through(plane, a, b) {
            Ok(g) => {
                if signed_distance(plane, p, &g) < -eps {
                    return false;
                }
            }
            Err(_) => continue,
        }
    }
    true
}

/// Gauss-Bonnet residual of a chain: total turning plus integrated geodesic
/// curvature plus curvature times enclosed area, minus 2*pi. Near zero for a
/// valid convex chain; used as a structural certificate.
pub fn gauss_bonnet_residual(chain: &BoundaryChain) -> Result<f64> {
    chain.validate()?;
    let plane = &chain.plane;
    if chain.is_full_circle() {
        if let ChainPiece::Arc { disk_index, .. } = chain.pieces[0] {
            let d = &chain.disks[disk_index];
            let kg = if d.radius < 1e-12 {
                return Ok(0.0);
            } else {
                plane.circle_geodesic_curvature(d.radius)?
            };
            let total = kg * plane.circle_perimeter(d.radius)?
                + plane.curvature() * d.area(plane);
            return Ok(total - TAU);
        }
    }
    // Integrated geodesic curvature over an arc collapses to
    // sweep * cosh(kr) | sweep | sweep * cos(kr), which also covers the
    // radius-0 corner limit (pure turning).
    let arc_term = |d: &Disk, sweep: f64| -> f64 {
        match plane.kind {
            ModelKind::Hyperbolic => sweep * (plane.k * d.radius).cosh(),
            ModelKind::Euclidean => sweep,
            ModelKind::Spherical => sweep * (plane.k * d.radius).cos(),
        }
    };
    let mut total = 0.0;
    let n = chain.pieces.len();
    for (idx, piece) in chain.pieces.iter().enumerate() {
        if let ChainPiece::Arc { disk_index, sweep, .. } = piece {
            total += arc_term(&chain.disks[*disk_index], *sweep);
        }
        // Junction turn between this piece and the next (zero for exact
        // tangency; measuring it certifies tangency).
        let (_, end) = chain.piece_endpoints(piece);
        let u_in = piece_direction_at_end(chain, piece)?;
        let u_out = piece_direction_at_start(chain, &chain.pieces[(idx + 1) % n])?;
        total += plane.oriented_angle(&end, &u_in, &u_out);
    }
    total += plane.curvature() * hull_area(chain)?;
    Ok(total - TAU)
}

fn piece_direction_at_end(chain: &BoundaryChain, piece: &ChainPiece) -> Result<Vec3> {
    let plane = &chain.plane;
    match piece {
        ChainPiece::Arc { disk_index, start_angle, sweep } => {
            let d = &chain.disks[*disk_index];
            let end = d.boundary_point(plane, start_angle + sweep);
            if d.radius < 1e-12 {
                // Corner marker: direction is the rotated frame angle.
                let (e1, e2) = plane.frame_at(&end);
                let a = start_angle + sweep + PI / 2.0;
                return Ok(e1 * a.cos() + e2 * a.sin());
            }
            let u_out = plane.unit_tangent_toward(&end, &d.center).map(|v| -v)?;
            Ok(plane.rot90(&end, &u_out))
        }
        ChainPiece::Segment { start, end } => plane.unit_tangent_toward(end, start).map(|v| -v),
    }
}

fn piece_direction_at_start(chain: &BoundaryChain, piece: &ChainPiece) -> Result<Vec3> {
    let plane = &chain.plane;
    match piece {
        ChainPiece::Arc { disk_index, start_angle, .. } => {
            let d = &chain.disks[*disk_index];
            let start = d.boundary_point(plane, *start_angle);
            if d.radius < 1e-12 {
                let (e1, e2) = plane.frame_at(&start);
                let a = start_angle + PI / 2.0;
                return Ok(e1 * a.cos() + e2 * a.sin());
            }
            let u_out = plane.unit_tangent_toward(&start, &d.center).map(|v| -v)?;
            Ok(plane.rot90(&start, &u_out))
        }
        ChainPiece::Segment { start, end } => plane.unit_tangent_toward(start, end),
    }
}

/// Evenly spaced boundary points (piece-length weighted), for sampling
/// oracles and Hausdorff comparisons.
pub fn sample_boundary(chain: &BoundaryChain, total: usize) -> Vec<Point> {
    let plane = &chain.plane;
    let lengths: Vec<f64> = chain
        .pieces
        .iter()
        .map(|p| match p {
            ChainPiece::Arc { disk_index, sweep, .. } => {
                plane.sigma(chain.disks[*disk_index].radius) * sweep
            }
            ChainPiece::Segment { start, end } => plane.distance(start, end),
        })
        .collect();
    let sum: f64 = lengths.iter().sum();
    let mut out = Vec::with_capacity(total + chain.pieces.len());
    for (piece, len) in chain.pieces.iter().zip(&lengths) {
        let n = if sum > 0.0 {
            ((len / sum) * total as f64).ceil() as usize
        } else {
            1
        }
        .max(1);
        for s in 0..n {
            let t = s as f64 / n as f64;
            let p = match piece {
                ChainPiece::Arc { disk_index, start_angle, sweep } => chain.disks[*disk_index]
                    .boundary_point(plane, start_angle + t * sweep),
                ChainPiece::Segment { start, end } => {
                    crate::geodesic::geodesic_point(plane, start, end, t)
                        .unwrap_or(*start)
                }
            };
            out.push(p);
        }
    }
    out
}

/// Support test margin: the smallest slack of any disk against any segment
/// line of the chain (negative means some disk pokes outside the hull).
pub fn support_margin(chain: &BoundaryChain) -> f64 {
    let plane = &chain.plane;
    let mut worst = f64::INFINITY;
    for piece in &chain.pieces {
        if let ChainPiece::Segment { start, end } = piece {
            if plane.distance(start, end) <= 1e-12 {
                continue;
            }
            if let Ok(g) = geodesic_through(plane, start, end) {
                for d in &chain.disks {
                    let slack = signed_distance(plane, &d.center, &g) - d.radius;
                    worst = worst.min(slack);
                }
            }
        }
    }
    worst
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

    fn random_config(plane: &Plane, rng: &mut impl Rng, n: usize) -> Option<Configuration> {
        let scale = if plane.kind == ModelKind::Spherical { 0.45 } else { 0.8 };
        let rmax = if plane.kind == ModelKind::Spherical { 0.4 } else { 0.6 };
        let disks: Vec<Disk> = (0..n)
            .map(|_| {
                Disk::new(
                    plane,
                    plane.point_from_xy(
                        rng.gen_range(-scale..scale),
                        rng.gen_range(-scale..scale),
                    ),
                    rng.gen_range(0.0..rmax),
                )
                .unwrap()
            })
            .collect();
        Configuration::new(*plane, disks).ok()
    }

    #[test]
    fn single_disk_hull_is_full_circle() {
        for plane in planes() {
            let d = Disk::new(&plane, plane.point_from_xy(0.2, -0.1), 0.5).unwrap();
            let config = Configuration::new(plane, vec![d]).unwrap();
            let chain = hull_boundary(&config).unwrap();
            assert!(chain.is_full_circle());
            assert!(
                (hull_perimeter(&chain).unwrap() - plane.circle_perimeter(0.5).unwrap()).abs()
                    < 1e-12
            );
            assert!((hull_area(&chain).unwrap() - plane.circle_area(0.5).unwrap()).abs() < 1e-12);
        }
    }

    #[test]
    fn covered_disks_collapse_to_the_big_circle() {
        for plane in planes() {
            let big = Disk::new(&plane, plane.point_from_xy(0.0, 0.0), 0.7).unwrap();
            let small1 = Disk::new(&plane, plane.point_from_xy(0.2, 0.0), 0.3).unwrap();
            let small2 = Disk::new(&plane, plane.point_from_xy(-0.1, 0.1), 0.1).unwrap();
            let config = Configuration::new(plane, vec![small1, big, small2]).unwrap();
            let chain = hull_boundary(&config).unwrap();
            assert!(chain.is_full_circle());
            if let ChainPiece::Arc { disk_index, .. } = chain.pieces[0] {
                assert_eq!(disk_index, 1);
            }
        }
    }

    #[test]
    fn frozen_euclidean_two_disk_hull() {
        // Two unit disks, centers 3 apart: two half circles plus two tangent
        // segments of length 3; perimeter 2*pi + 6.
        let e = Plane::euclidean();
        let a = Disk::new(&e, e.point_from_xy(0.0, 0.0), 1.0).unwrap();
        let b = Disk::new(&e, e.point_from_xy(3.0, 0.0), 1.0).unwrap();
        let config = Configuration::new(e, vec![a, b]).unwrap();
        let chain = hull_boundary(&config).unwrap();
        let arcs: Vec<_> = chain
            .pieces
            .iter()
            .filter(|p| matches!(p, ChainPiece::Arc { .. }))
            .collect();
        let segs: Vec<_> = chain
            .pieces
            .iter()
            .filter_map(|p| match p {
                ChainPiece::Segment { start, end } => Some(e.distance(start, end)),
                _ => None,
            })
            .collect();
        assert_eq!(arcs.len(), 2);
        assert_eq!(segs.len(), 2);
        for s in &segs {
            assert!((s - 3.0).abs() < 1e-10);
        }
        let per = hull_perimeter(&chain).unwrap();
        assert!((per - (TAU + 6.0)).abs() < 1e-10);
        // Area: rectangle 3 x 2 plus two half disks.
        let area = hull_area(&chain).unwrap();
        assert!((area - (6.0 + PI)).abs() < 1e-9, "{area}");
    }

    #[test]
    fn doubled_segment_hull_of_two_points() {
        for plane in planes() {
            let p = plane.point_from_xy(0.0, 0.0);
            let u = plane
                .unit_tangent_toward(&p, &plane.point_from_xy(1.0, 0.3))
                .unwrap();
            let q = plane.exp(&p, &u, 2.0);
            let a = Disk::new(&plane, p, 0.0).unwrap();
            let b = Disk::new(&plane, q, 0.0).unwrap();
            let config = Configuration::new(plane, vec![a, b]).unwrap();
            let chain = hull_boundary(&config).unwrap();
            let per = hull_perimeter(&chain).unwrap();
            assert!((per - 4.0).abs() < 1e-9, "{:?} {}", plane.kind, per);
            assert!(hull_area(&chain).unwrap().abs() < 1e-9);
            // Alternating with two corner arcs of sweep pi each.
            assert_eq!(chain.pieces.len(), 4);
            let sweeps: Vec<f64> = chain
                .pieces
                .iter()
                .filter_map(|p| match p {
                    ChainPiece::Arc { sweep, .. } => Some(*sweep),
                    _ => None,
                })
                .collect();
            assert_eq!(sweeps.len(), 2);
            for s in sweeps {
                assert!((s - PI).abs() < 1e-9);
            }
        }
    }

    #[test]
    fn chains_alternate_and_share_endpoints() {
        for plane in planes() {
            let mut rng = ChaCha8Rng::seed_from_u64(113);
            let mut built = 0;
            for _ in 0..120 {
                let n = rng.gen_range(2..8);
                let Some(config) = random_config(&plane, &mut rng, n) else { continue };
                let chain = hull_boundary(&config).unwrap();
                built += 1;
                if chain.is_full_circle() {
                    continue;
                }
                assert_eq!(chain.pieces.len() % 2, 0);
                for (i, piece) in chain.pieces.iter().enumerate() {
                    let arc_expected = i % 2 == 0;
                    assert_eq!(
                        matches!(piece, ChainPiece::Arc { .. }),
                        arc_expected,
                        "{:?}: piece {i} breaks alternation",
                        plane.kind
                    );
                }
                chain.validate().unwrap();
                assert!(support_margin(&chain) > -1e-9, "{:?}", plane.kind);
            }
            assert!(built > 60, "{:?}", plane.kind);
        }
    }

    #[test]
    fn gauss_bonnet_closes_on_random_hulls() {
        for plane in planes() {
            let mut rng = ChaCha8Rng::seed_from_u64(127);
            let mut checked = 0;
            for _ in 0..80 {
                let n = rng.gen_range(1..7);
                let Some(config) = random_config(&plane, &mut rng, n) else { continue };
                let chain = hull_boundary(&config).unwrap();
                let resid = gauss_bonnet_residual(&chain).unwrap();
                assert!(
                    resid.abs() <= 1e-7,
                    "{:?}: Gauss-Bonnet residual {resid}",
                    plane.kind
                );
                checked += 1;
            }
            assert!(checked > 40);
        }
    }

    #[test]
    fn perimeter_matches_polygonal_approximation() {
        // Independent length: sample many boundary points, sum the chords.
        for plane in planes() {
            let mut rng = ChaCha8Rng::seed_from_u64(131);
            for _ in 0..10 {
                let n = rng.gen_range(2..6);
                let Some(config) = random_config(&plane, &mut rng, n) else { continue };
                let chain = hull_boundary(&config).unwrap();
                let per = hull_perimeter(&chain).unwrap();
                let pts = sample_boundary(&chain, 20_000);
                let mut poly = 0.0;
                for i in 0..pts.len() {
                    poly += plane.distance(&pts[i], &pts[(i + 1) % pts.len()]);
                }
                assert!(
                    (poly - per).abs() < 1e-5 * (1.0 + per),
                    "{:?}: chain {per} vs polygon {poly}",
                    plane.kind
                );
            }
        }
    }

    #[test]
    fn insertion_grows_perimeter_and_area() {
        for plane in planes() {
            let mut rng = ChaCha8Rng::seed_from_u64(137);
            let mut done = 0;
            while done < 200 {
                let Some(config) = random_config(&plane, &mut rng, 4) else { continue };
                let chain = hull_boundary(&config).unwrap();
                let per = hull_perimeter(&chain).unwrap();
                let area = hull_area(&chain).unwrap();
                let mut disks = config.disks.clone();
                let scale = if plane.kind == ModelKind::Spherical { 0.45 } else { 0.8 };
                disks.push(
                    Disk::new(
                        &plane,
                        plane.point_from_xy(
                            rng.gen_range(-scale..scale),
                            rng.gen_range(-scale..scale),
                        ),
                        rng.gen_range(0.0..0.3),
                    )
                    .unwrap(),
                );
                let Ok(bigger) = Configuration::new(plane, disks) else { continue };
                let chain2 = hull_boundary(&bigger).unwrap();
                assert!(hull_perimeter(&chain2).unwrap() >= per - 1e-9);
                assert!(hull_area(&chain2).unwrap() >= area - 1e-9);
                done += 1;
            }
        }
    }

    #[test]
    fn two_disk_formula_matches_generic_hull() {
        for plane in planes() {
            let mut rng = ChaCha8Rng::seed_from_u64(139);
            let mut done = 0;
            while done < 150 {
                let c1 = plane.point_from_xy(rng.gen_range(-0.5..0.5), rng.gen_range(-0.5..0.5));
                let c2 = plane.point_from_xy(rng.gen_range(-0.5..0.5), rng.gen_range(-0.5..0.5));
                let r1 = rng.gen_range(0.0..0.4);
                let r2 = rng.gen_range(0.0..0.4);
                let (Ok(a), Ok(b)) = (Disk::new(&plane, c1, r1), Disk::new(&plane, c2, r2))
                else {
                    continue;
                };
                let Ok(config) = Configuration::new(plane, vec![a, b]) else { continue };
                let chain = hull_boundary(&config).unwrap();
                let generic = hull_perimeter(&chain).unwrap();
                let closed = two_disk_perimeter(&plane, &a, &b).unwrap();
                assert!(
                    (generic - closed).abs() < 1e-9 * (1.0 + generic),
                    "{:?}: {generic} vs {closed}",
                    plane.kind
                );
                done += 1;
            }
        }
    }

    #[test]
    fn containment_agrees_with_disks_and_boundary() {
        for plane in planes() {
            let mut rng = ChaCha8Rng::seed_from_u64(149);
            for _ in 0..25 {
                let Some(config) = random_config(&plane, &mut rng, 4) else { continue };
                let chain = hull_boundary(&config).unwrap();
                for d in &config.disks {
                    assert!(hull_contains(&chain, &d.center, 1e-9));
                }
                for p in sample_boundary(&chain, 60) {
                    assert!(hull_contains(&chain, &p, 1e-7));
                }
                // A point clearly beyond every disk.
                let far = plane.point_from_xy(0.0, -1.4);
                let outside = config
                    .disks
                    .iter()
                    .all(|d| plane.distance(&d.center, &far) > d.radius + 0.05);
                if outside
                    && !sample_boundary(&chain, 200)
                        .iter()
                        .any(|b| plane.distance(b, &far) < 0.05)
                {
                    // Far point must fail the test unless the hull reaches it.
                    let inside = hull_contains(&chain, &far, 1e-9);
                    if inside {
                        // Allowed only if genuinely within the feet polygon:
                        // re-check via support margin against segment lines.
                        let mut supported = true;
                        for piece in &chain.pieces {
                            if let ChainPiece::Segment { start, end } = piece {
                                if plane.distance(start, end) <= 1e-12 {
                                    continue;
                                }
                                let g = geodesic_through(&plane, start, end).unwrap();
                                if signed_distance(&plane, &far, &g) < -1e-9 {
                                    supported = false;
                                }
                            }
                        }
                        assert!(supported);
                    }
                }
            }
        }
    }

    #[test]
    fn hemisphere_certificate_rejects_spread_configs() {
        let s = Plane::spherical(1.0).unwrap();
        // Three disks spread far beyond one hemisphere.
        let d = |x: f64, y: f64| Disk::new(&s, s.point_from_xy(x, y), 0.8).unwrap();
        let res = Configuration::new(s, vec![d(0.0, 0.0), d(2.4, 0.0), d(0.0, 2.4)]);
        assert!(matches!(res, Err(GeomError::HemisphereViolation(_))));
        // Tight configs pass with a pole.
        let ok = Configuration::new(
            s,
            vec![d(0.0, 0.0), d(0.3, 0.1)],
        )
        .unwrap();
        assert!(ok.hemisphere_pole().is_some());
    }

    #[test]
    fn hull_idempotent_on_its_own_disks() {
        for plane in planes() {
            let mut rng = ChaCha8Rng::seed_from_u64(151);
            for _ in 0..20 {
                let Some(config) = random_config(&plane, &mut rng, 5) else { continue };
                let chain = hull_boundary(&config).unwrap();
                let arc_disks: Vec<Disk> = chain
                    .pieces
                    .iter()
                    .filter_map(|p| match p {
                        ChainPiece::Arc { disk_index, .. } => Some(chain.disks[*disk_index]),
                        _ => None,
                    })
                    .collect();
                if arc_disks.is_empty() {
                    continue;
                }
                let again = Configuration::new(plane, arc_disks).unwrap();
                let chain2 = hull_boundary(&again).unwrap();
                // Hausdorff one way: every resampled point of one boundary is
                // near the other region and vice versa.
                for p in sample_boundary(&chain2, 120) {
                    assert!(hull_contains(&chain, &p, 1e-7));
                }
                for p in sample_boundary(&chain, 120) {
                    assert!(hull_contains(&chain2, &p, 1e-7));
                }
                assert!(
                    (hull_perimeter(&chain).unwrap() - hull_perimeter(&chain2).unwrap()).abs()
                        < 1e-8
                );
            }
        }
    }
}
