//! Intersections of disk families: the convex curvilinear polygon
//! U = D_1 n ... n D_k, its boundary arcs, area, and emptiness certificate.
//!
//! Each boundary circle contributes the angular intervals of its points that
//! lie inside every other disk; the surviving arcs are stitched into a closed
//! counterclockwise chain. Emptiness is decided by the weighted minimax
//! center with weights -r_i: the intersection is nonempty exactly when
//! min_p max_i (d(p, c_i) - r_i) <= 0.

use crate::disk::{circle_intersection_points, same_disk, Disk};
use crate::error::{GeomError, Result};
use crate::hull::{BoundaryChain, ChainPiece, Configuration};
use crate::minimax::weighted_center;
use crate::plane::{ModelKind, Plane, Point, EPS_GEO};

const TAU: f64 = std::f64::consts::TAU;

/// Emptiness tolerance: minimax values below this count as nonempty.
pub const EPS_EMPTY: f64 = 1e-10;

/// The intersection region of a disk family.
#[derive(Debug, Clone)]
pub struct IntersectionRegion {
    /// Boundary arcs in counterclockwise order (no segments). Empty when the
    /// region is empty or degenerates to a single point.
    pub chain: BoundaryChain,
    /// Arc meeting points; vertices[i] starts the i-th arc.
    pub vertices: Vec<Point>,
    pub empty: bool,
    /// Set when the region equals one input disk.
    pub full_disk: Option<usize>,
    /// A point of the region (the minimax witness) when nonempty.
    pub witness: Option<Point>,
}

impl IntersectionRegion {
    pub fn contains(&self, p: &Point, eps: f64) -> bool {
        !self.empty
            && self
                .chain
                .disks
                .iter()
                .all(|d| d.contains(&self.chain.plane, p, eps))
    }

    pub fn is_degenerate_point(&self) -> bool {
        !self.empty && self.chain.pieces.is_empty()
    }
}

/// Whether the intersection is nonempty, with a witness point. The witness
/// minimizes max_i (d(p, c_i) - r_i).
pub fn is_nonempty(config: &Configuration) -> Result<(bool, Option<Point>)> {
    let sites: Vec<Point> = config.disks.iter().map(|d| d.center).collect();
    let weights: Vec<f64> = config.disks.iter().map(|d| -d.radius).collect();
    let sol = weighted_center(&config.plane, &sites, &weights)?;
    if sol.value <= EPS_EMPTY {
        Ok((true, Some(sol.point)))
    } else {
        Ok((false, None))
    }
}

/// Angular intervals (start, sweep), all sweeps in (0, 2*pi].
type Intervals = Vec<(f64, f64)>;

fn intersect_with(intervals: &Intervals, s: f64, w: f64) -> Intervals {
    let mut out = Vec::new();
    for &(a, l) in intervals {
        let rel = (s - a).rem_euclid(TAU);
        // Constraint occupies [rel, rel + w] in the coordinates of [0, l].
        let first = (rel, (rel + w).min(l));
        if first.1 - first.0 > 1e-12 && first.0 < l {
            out.push((a + first.0, first.1 - first.0));
        }
        if rel + w > TAU {
            let second = (0.0, (rel + w - TAU).min(l));
            if second.1 - second.0 > 1e-12 {
                out.push((a + second.0, second.1 - second.0));
            }
        }
    }
    out
}

/// Rejoin intervals split by the wrap at angle 0 (or by clipping order):
/// whenever one interval ends where another starts, they are one arc.
fn merge_adjacent(mut iv: Intervals) -> Intervals {
    loop {
        let n = iv.len();
        if n <= 1 {
            return iv;
        }
        let mut merged = false;
        'scan: for i in 0..n {
            for j in 0..n {
                if i == j {
                    continue;
                }
                let (ai, li) = iv[i];
                let (aj, _) = iv[j];
                let gap = (ai + li - aj).rem_euclid(TAU);
                if gap.min(TAU - gap) < 1e-10 {
                    let lj = iv[j].1;
                    iv[i] = (ai, (li + lj).min(TAU));
                    iv.remove(j);
                    merged = true;
                    break 'scan;
                }
            }
        }
        if !merged {
            return iv;
        }
    }
}

/// Portion of circle i lying inside disk j: Full, None, or one interval.
enum CirclePortion {
    Full,
    Nothing,
    Span(f64, f64),
}

fn circle_inside_disk(plane: &Plane, di: &Disk, dj: &Disk) -> Result<CirclePortion> {
    let pts = circle_intersection_points(plane, di, dj);
    if pts.len() == 2 {
        // Entering crossing sits right of the center travel direction,
        // exiting crossing left: the inside span runs CCW from right to left.
        let th_l = plane.direction_angle(&di.center, &pts[0])?;
        let th_r = plane.direction_angle(&di.center, &pts[1])?;
        let sweep = (th_l - th_r).rem_euclid(TAU);
        if sweep <= 1e-12 {
            return Ok(CirclePortion::Nothing);
        }
        return Ok(CirclePortion::Span(th_r, sweep));
    }
    let d = plane.distance(&di.center, &dj.center);
    if d <= dj.radius - di.radius + EPS_GEO {
        Ok(CirclePortion::Full)
    } else if d >= di.radius + dj.radius - EPS_GEO || d <= di.radius - dj.radius + EPS_GEO {
        Ok(CirclePortion::Nothing)
    } else if d < dj.radius {
        // Razor-thin tangency fallback.
        Ok(CirclePortion::Full)
    } else {
        Ok(CirclePortion::Nothing)
    }
}

/// Compute U as a boundary chain of circle arcs.
pub fn intersect_disks(config: &Configuration) -> Result<IntersectionRegion> {
    let plane = &config.plane;
    let disks = &config.disks;
    let empty_region = |witness: Option<Point>| IntersectionRegion {
        chain: BoundaryChain {
            plane: *plane,
            disks: disks.clone(),
            pieces: vec![],
        },
        vertices: vec![],
        empty: witness.is_none(),
        full_disk: None,
        witness,
    };

    let (nonempty, witness) = is_nonempty(config)?;
    if !nonempty {
        return Ok(empty_region(None));
    }

    // Coincident circles would stitch ambiguously; keep the first of each.
    let mut active: Vec<usize> = Vec::new();
    for i in 0..disks.len() {
        if !active
            .iter()
            .any(|&j| same_disk(plane, &disks[i], &disks[j], EPS_GEO))
        {
            active.push(i);
        }
    }

    // Angular intervals of each active circle inside all other active disks.
    let mut arcs: Vec<(usize, f64, f64)> = Vec::new();
    for &i in &active {
        let mut intervals: Intervals = vec![(0.0, TAU)];
        for &j in &active {
            if i == j {
                continue;
            }
            match circle_inside_disk(plane, &disks[i], &disks[j])? {
                CirclePortion::Full => {}
                CirclePortion::Nothing => {
                    intervals.clear();
                }
                CirclePortion::Span(s, w) => {
                    intervals = intersect_with(&intervals, s, w);
                }
            }
            if intervals.is_empty() {
                break;
            }
        }
        let intervals = merge_adjacent(intervals);
        for (s, w) in intervals {
            if w > 1e-10 {
                arcs.push((i, s, w));
            }
        }
    }

    if arcs.is_empty() {
        // Nonempty with no boundary arcs: the region is a single point.
        return Ok(empty_region(witness));
    }

    if arcs.len() == 1 && (arcs[0].2 - TAU).abs() < 1e-9 {
        let i = arcs[0].0;
        return Ok(IntersectionRegion {
            chain: BoundaryChain {
                plane: *plane,
                disks: disks.clone(),
                pieces: vec![ChainPiece::Arc {
                    disk_index: i,
                    start_angle: 0.0,
                    sweep: TAU,
                }],
            },
            vertices: vec![],
            empty: false,
            full_disk: Some(i),
            witness,
        });
    }

    // Stitch arcs into one closed CCW cycle by endpoint proximity.
    let endpoints: Vec<(Point, Point)> = arcs
        .iter()
        .map(|&(i, s, w)| {
            (
                disks[i].boundary_point(plane, s),
                disks[i].boundary_point(plane, s + w),
            )
        })
        .collect();
    let mut used = vec![false; arcs.len()];
    let mut order = vec![0usize];
    used[0] = true;
    for _ in 1..arcs.len() {
        let cur_end = &endpoints[*order.last().unwrap()].1;
        let mut best: Option<(f64, usize)> = None;
        for (idx, done) in used.iter().enumerate() {
            if *done {
                continue;
            }
            let gap = plane.distance(cur_end, &endpoints[idx].0);
            if best.map_or(true, |(g, _)| gap < g) {
                best = Some((gap, idx));
            }
        }
        let (gap, idx) = best.expect("unused arc remains");
        if gap > 1e-6 {
            return Err(GeomError::ChainIntegrity(format!(
                "intersection arcs do not join: gap {gap}"
            )));
        }
        used[idx] = true;
        order.push(idx);
    }
    let closing_gap = plane.distance(&endpoints[*order.last().unwrap()].1, &endpoints[order[0]].0);
    if closing_gap > 1e-6 {
        return Err(GeomError::ChainIntegrity(format!(
            "intersection boundary does not close: gap {closing_gap}"
        )));
    }

    let pieces: Vec<ChainPiece> = order
        .iter()
        .map(|&idx| ChainPiece::Arc {
            disk_index: arcs[idx].0,
            start_angle: arcs[idx].1,
            sweep: arcs[idx].2,
        })
        .collect();
    let vertices: Vec<Point> = order.iter().map(|&idx| endpoints[idx].0).collect();

    Ok(IntersectionRegion {
        chain: BoundaryChain {
            plane: *plane,
            disks: disks.clone(),
            pieces,
        },
        vertices,
        empty: false,
        full_disk: None,
        witness,
    })
}

/// Area of the intersection region. Curved planes evaluate the boundary
/// integral (2*pi - sum of turning - integrated circle curvature) divided by
/// the Gaussian curvature; the euclidean plane sums the vertex polygon and
/// the circular segments.
pub fn region_area(region: &IntersectionRegion) -> Result<f64> {
    if region.empty {
        return Err(GeomError::EmptyConfiguration);
    }
    let plane = &region.chain.plane;
    if region.chain.pieces.is_empty() {
        return Ok(0.0);
    }
    if let Some(i) = region.full_disk {
        return Ok(region.chain.disks[i].area(plane));
    }
    let n = region.chain.pieces.len();
    match plane.kind {
        ModelKind::Euclidean => {
            let vs = &region.vertices;
            let m = vs.len();
            let mut area = 0.0;
            for i in 0..m {
                let a = &vs[i];
                let b = &vs[(i + 1) % m];
                area += 0.5 * (a.x() * b.y() - b.x() * a.y());
            }
            for piece in &region.chain.pieces {
                if let ChainPiece::Arc { disk_index, sweep, .. } = piece {
                    let r = region.chain.disks[*disk_index].radius;
                    area += 0.5 * r * r * (sweep - sweep.sin());
                }
            }
            Ok(area)
        }
        _ => {
            let mut boundary = 0.0;
            for (idx, piece) in region.chain.pieces.iter().enumerate() {
                let ChainPiece::Arc { disk_index, start_angle, sweep } = piece else {
                    return Err(GeomError::ChainIntegrity(
                        "intersection chains carry only arcs".into(),
                    ));
                };
                let d = &region.chain.disks[*disk_index];
                // Integrated geodesic curvature over the arc: kappa_g * length
                // collapses to sweep * cosh(kr) or sweep * cos(kr).
                boundary += match plane.kind {
                    ModelKind::Hyperbolic => sweep * (plane.k * d.radius).cosh(),
                    ModelKind::Spherical => sweep * (plane.k * d.radius).cos(),
                    ModelKind::Euclidean => unreachable!(),
                };
                // Turning at the vertex joining this arc to the next.
                let v = d.boundary_point(plane, start_angle + sweep);
                let u_in = arc_direction(plane, d, start_angle + sweep);
                let next = &region.chain.pieces[(idx + 1) % n];
                let ChainPiece::Arc {
                    disk_index: nd,
                    start_angle: ns,
                    ..
                } = next
                else {
                    unreachable!();
                };
                let u_out = arc_direction(plane, &region.chain.disks[*nd], *ns);
                boundary += plane.oriented_angle(&v, &u_in, &u_out);
            }
            Ok((TAU - boundary) / plane.curvature())
        }
    }
}

/// CCW travel direction of a circle at the boundary point of given angle.
fn arc_direction(plane: &Plane, d: &Disk, angle: f64) -> crate::plane::Vec3 {
    let p = d.boundary_point(plane, angle);
    let outward = plane
        .unit_tangent_toward(&p, &d.center)
        .map(|v| -v)
        .expect("positive radius");
    plane.rot90(&p, &outward)
}
