//! Dual cross-check of the intersection tree: the configuration is carried
//! onto the sphere by conformal embeddings, every disk is swapped for the
//! closure of its complement, and the result is projected back to the
//! euclidean plane from a pole chosen inside the region. Minimal covering
//! disks of the intersection turn into maximal inscribed disks of the
//! projected union, so the tree of the region must reappear, vertex for
//! vertex, as the medial tree of a plain union of euclidean disks. The union
//! side is rebuilt here from scratch in flat 2D arithmetic, which makes the
//! comparison an independent certificate rather than a restatement.

use crate::chart::{
    euclidean_circumcircle, spherical_cap_through, stereographic_lift, stereographic_project,
    to_poincare,
};
use crate::cocentral::cocentral_tree;
use crate::error::{GeomError, Result};
use crate::hull::Configuration;
use crate::intersect::IntersectionRegion;
use crate::plane::{ModelKind, Plane, Point, Vec3};

const TAU: f64 = std::f64::consts::TAU;

/// Disk in the flat chart the dual union lives in.
#[derive(Debug, Clone, Copy)]
pub struct ChartDisk {
    pub x: f64,
    pub y: f64,
    pub r: f64,
}

#[derive(Debug, Clone, Copy)]
pub struct ChartVertex {
    pub x: f64,
    pub y: f64,
    /// Inscribed radius of the maximal disk centered here.
    pub radius: f64,
}

/// Medial tree of a union of chart disks.
#[derive(Debug, Clone)]
pub struct ChartTree {
    pub vertices: Vec<ChartVertex>,
    pub edges: Vec<(usize, usize)>,
}

#[derive(Debug, Clone)]
pub struct DualityReport {
    pub region_vertices: usize,
    pub region_edges: usize,
    pub dual_vertices: usize,
    pub dual_edges: usize,
    /// Worst chart distance between a mapped region-tree vertex and its
    /// matched dual vertex.
    pub max_vertex_mismatch: f64,
    pub matched: bool,
}

fn d2(a: (f64, f64), b: (f64, f64)) -> f64 {
    (a.0 - b.0).hypot(a.1 - b.1)
}

/// Signed membership margin: <= 0 when p lies in the union.
fn union_margin(disks: &[ChartDisk], p: (f64, f64)) -> f64 {
    disks
        .iter()
        .map(|d| d2((d.x, d.y), p) - d.r)
        .fold(f64::INFINITY, f64::min)
}

/// Total angle covered by a family of intervals, unwrapped onto [0, tau).
fn covered_angle(intervals: &[(f64, f64)]) -> f64 {
    let mut spans: Vec<(f64, f64)> = Vec::new();
    for &(a, b) in intervals {
        let a0 = a.rem_euclid(TAU);
        let b0 = a0 + (b - a);
        if b0 <= TAU {
            spans.push((a0, b0));
        } else {
            spans.push((a0, TAU));
            spans.push((0.0, b0 - TAU));
        }
    }
    spans.sort_by(|p, q| p.0.total_cmp(&q.0));
    let mut covered = 0.0;
    let mut reach = 0.0f64;
    for (a, b) in spans {
        let lo = a.max(reach);
        if b > lo {
            covered += b - lo;
            reach = b;
        }
    }
    covered
}

/// Whether the disk of radius rr at c stays inside the union. Exact interval
/// arithmetic on the boundary circle: the union has no holes (it is the
/// complement of one connected unbounded face), so boundary containment
/// extends to the whole disk. Sampling would miss the slimmest escape, a
/// boundary corner entering the open disk with its exterior wedge.
fn disk_in_union(disks: &[ChartDisk], c: (f64, f64), rr: f64) -> bool {
    if rr < 0.0 || union_margin(disks, c) > 1e-9 {
        return false;
    }
    if rr <= 1e-12 {
        return true;
    }
    let mut intervals: Vec<(f64, f64)> = Vec::new();
    for d in disks {
        let dist = d2((d.x, d.y), c);
        if dist + rr <= d.r + 1e-12 {
            return true;
        }
        if dist >= d.r + rr - 1e-12 || dist + d.r <= rr + 1e-12 {
            continue;
        }
        let cosv = ((dist * dist + rr * rr - d.r * d.r) / (2.0 * dist * rr)).clamp(-1.0, 1.0);
        let half = cosv.acos();
        let mid = (d.y - c.1).atan2(d.x - c.0);
        intervals.push((mid - half, mid + half));
    }
    covered_angle(&intervals) >= TAU - 1e-9
}

/// Crossing points of two chart circles (empty for separated, nested, or
/// effectively tangent pairs).
fn circle_crossings(a: &ChartDisk, b: &ChartDisk) -> Vec<(f64, f64)> {
    let d = d2((a.x, a.y), (b.x, b.y));
    if d <= 1e-12 || d >= a.r + b.r - 1e-12 || d <= (a.r - b.r).abs() + 1e-12 {
        return vec![];
    }
    let along = (d * d + a.r * a.r - b.r * b.r) / (2.0 * d);
    let h2 = a.r * a.r - along * along;
    if h2 <= 0.0 {
        return vec![];
    }
    let h = h2.sqrt();
    let ux = (b.x - a.x) / d;
    let uy = (b.y - a.y) / d;
    let base = (a.x + along * ux, a.y + along * uy);
    vec![
        (base.0 - h * uy, base.1 + h * ux),
        (base.0 + h * uy, base.1 - h * ux),
    ]
}

/// Whether any piece of circle j survives on the union boundary.
fn has_free_arc(disks: &[ChartDisk], j: usize) -> bool {
    let dj = disks[j];
    let mut intervals: Vec<(f64, f64)> = Vec::new();
    for (l, dl) in disks.iter().enumerate() {
        if l == j {
            continue;
        }
        let d = d2((dj.x, dj.y), (dl.x, dl.y));
        if d + dj.r <= dl.r + 1e-12 {
            return false;
        }
        if d >= dj.r + dl.r - 1e-12 || d + dl.r <= dj.r + 1e-12 {
            continue;
        }
        let cosv = ((d * d + dj.r * dj.r - dl.r * dl.r) / (2.0 * d * dj.r)).clamp(-1.0, 1.0);
        let half = cosv.acos();
        let mid = (dl.y - dj.y).atan2(dl.x - dj.x);
        intervals.push((mid - half, mid + half));
    }
    covered_angle(&intervals) < TAU - 1e-9
}

/// Corner points of the union boundary: pairwise circle crossings not
/// strictly interior to any other disk.
fn union_corners(disks: &[ChartDisk]) -> Vec<(f64, f64)> {
    let mut corners: Vec<(f64, f64)> = Vec::new();
    for i in 0..disks.len() {
        for j in i + 1..disks.len() {
            'cand: for p in circle_crossings(&disks[i], &disks[j]) {
                for (t, dt) in disks.iter().enumerate() {
                    if t != i && t != j && d2((dt.x, dt.y), p) < dt.r - 1e-9 {
                        continue 'cand;
                    }
                }
                if corners.iter().all(|c| d2(*c, p) > 1e-9) {
                    corners.push(p);
                }
            }
        }
    }
    corners
}

/// The stretch of the (u, v) corner bisector whose points center maximal
/// inscribed disks through both corners, as endpoint (x, y, radius) triples.
/// Mirrors the covering-disk stretch of the region tree on the union side:
/// interiors touch the boundary exactly at {u, v}, endpoints pick up a third
/// contact (a corner-triple circumcenter) or a whole free circle (its
/// center).
fn inscribed_stretch(
    disks: &[ChartDisk],
    corners: &[(f64, f64)],
    u: (f64, f64),
    v: (f64, f64),
) -> Option<((f64, f64, f64), (f64, f64, f64))> {
    let chord = d2(u, v);
    if chord <= 1e-9 {
        return None;
    }
    let m = ((u.0 + v.0) / 2.0, (u.1 + v.1) / 2.0);
    let dir = ((v.1 - u.1) / chord, (u.0 - v.0) / chord);
    let at = |t: f64| (m.0 + t * dir.0, m.1 + t * dir.1);
    let feasible_at = |x: (f64, f64)| disk_in_union(disks, x, 0.5 * (d2(x, u) + d2(x, v)));
    let feasible = |t: f64| feasible_at(at(t));

    let mut cap = disks.iter().map(|d| d.r).fold(0.0, f64::max) + 1.0;
    for c in corners {
        cap = cap.max(d2(*c, m));
    }
    let coord = |x: (f64, f64)| (x.0 - m.0) * dir.0 + (x.1 - m.1) * dir.1;

    // endpoints are structured: centers of circles through both corners
    // (where the inscribed disk becomes that whole disk), or circumcenters
    // of the pair with a third corner
    let mut structured: Vec<(f64, f64, f64, f64)> = Vec::new();
    for d in disks {
        if (d2((d.x, d.y), u) - d.r).abs() <= 1e-6 && (d2((d.x, d.y), v) - d.r).abs() <= 1e-6 {
            structured.push((coord((d.x, d.y)), d.x, d.y, d.r));
        }
    }
    for c in corners {
        if d2(*c, u) <= 1e-9 || d2(*c, v) <= 1e-9 {
            continue;
        }
        let Ok(((x, y), r)) = euclidean_circumcircle(u, v, *c) else { continue };
        structured.push((coord((x, y)), x, y, r));
    }

    let mut lo = f64::INFINITY;
    let mut hi = f64::NEG_INFINITY;
    for &(t, x, y, r) in &structured {
        if t.abs() <= cap && disk_in_union(disks, (x, y), r) {
            lo = lo.min(t);
            hi = hi.max(t);
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
            None => return None,
        }
    }

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
    let snap = |t_star: f64, sgn: f64| -> (f64, f64, f64) {
        let mut best: Option<(f64, f64, f64, f64)> = None;
        for &(ts, x, y, r) in &structured {
            if !disk_in_union(disks, (x, y), r) {
                continue;
            }
            let beyond = sgn * (t_star - ts);
            if (-1e-9..=2e-3).contains(&beyond)
                && best.map_or(true, |(bt, _, _, _)| sgn * (ts - bt) > 0.0)
            {
                best = Some((ts, x, y, r));
            }
        }
        match best {
            Some((_, x, y, r)) => (x, y, r),
            None => {
                let p = at(t_star);
                (p.0, p.1, 0.5 * (d2(p, u) + d2(p, v)))
            }
        }
    };
    let a = snap(refine(lo, -1.0), -1.0);
    let b = snap(refine(hi, 1.0), 1.0);
    Some((a, b))
}

fn merge_chart_vertex(vertices: &mut Vec<ChartVertex>, x: f64, y: f64, r: f64) -> usize {
    for (i, v) in vertices.iter().enumerate() {
        if d2((v.x, v.y), (x, y)) <= 1e-7 {
            return i;
        }
    }
    vertices.push(ChartVertex { x, y, radius: r });
    vertices.len() - 1
}

/// Medial tree of a union of chart disks, restricted to unions arising as
/// complements of a convex region (connected boundary, no holes). Duplicate
/// and swallowed disks are ignored.
pub fn union_medial_tree(input: &[ChartDisk]) -> Result<ChartTree> {
    let mut disks: Vec<ChartDisk> = Vec::new();
    for d in input {
        if !(d.r.is_finite() && d.r > 0.0 && d.x.is_finite() && d.y.is_finite()) {
            return Err(GeomError::InvalidRadius(d.r));
        }
        if disks
            .iter()
            .all(|e| d2((e.x, e.y), (d.x, d.y)) > 1e-9 || (e.r - d.r).abs() > 1e-9)
        {
            disks.push(*d);
        }
    }
    if disks.is_empty() {
        return Err(GeomError::Domain("medial tree needs at least one disk".into()));
    }
    let corners = union_corners(&disks);
    if corners.len() < 2 {
        // boundary is a single free circle
        let free: Vec<usize> = (0..disks.len()).filter(|&j| has_free_arc(&disks, j)).collect();
        if corners.is_empty() && free.len() == 1 {
            let d = disks[free[0]];
            return Ok(ChartTree {
                vertices: vec![ChartVertex { x: d.x, y: d.y, radius: d.r }],
                edges: vec![],
            });
        }
        return Err(GeomError::Domain("union boundary is degenerate".into()));
    }

    let mut vertices: Vec<ChartVertex> = Vec::new();
    let mut edges: Vec<(usize, usize)> = Vec::new();
    for i in 0..corners.len() {
        for j in i + 1..corners.len() {
            let Some((a, b)) = inscribed_stretch(&disks, &corners, corners[i], corners[j]) else {
                continue;
            };
            let ia = merge_chart_vertex(&mut vertices, a.0, a.1, a.2);
            let ib = merge_chart_vertex(&mut vertices, b.0, b.1, b.2);
            if ia != ib {
                let e = (ia.min(ib), ia.max(ib));
                if !edges.contains(&e) {
                    edges.push(e);
                }
            }
        }
    }
    let tree = ChartTree { vertices, edges };
    if !chart_is_tree(&tree) {
        return Err(GeomError::TreeStructure(
            "inscribed stretches did not assemble into a tree".into(),
        ));
    }
    Ok(tree)
}

fn chart_is_tree(tree: &ChartTree) -> bool {
    let n = tree.vertices.len();
    if n == 0 || tree.edges.len() + 1 != n {
        return false;
    }
    let mut adj = vec![vec![]; n];
    for &(a, b) in &tree.edges {
        adj[a].push(b);
        adj[b].push(a);
    }
    let mut seen = vec![false; n];
    let mut stack = vec![0];
    seen[0] = true;
    while let Some(v) = stack.pop() {
        for &w in &adj[v] {
            if !seen[w] {
                seen[w] = true;
                stack.push(w);
            }
        }
    }
    seen.iter().all(|&s| s)
}

/// Sphere hosting the conformal embedding (the input plane itself when
/// already spherical).
fn embedding_sphere(plane: &Plane) -> Result<Plane> {
    match plane.kind {
        ModelKind::Spherical => Ok(*plane),
        _ => Plane::spherical(1.0),
    }
}

fn embed_point(plane: &Plane, sphere: &Plane, p: &Point) -> Result<Point> {
    let north = sphere.normalize_to_surface(&Vec3::new(0.0, 0.0, 1.0))?;
    match plane.kind {
        ModelKind::Spherical => Ok(*p),
        ModelKind::Hyperbolic => {
            let (x, y) = to_poincare(plane, p)?;
            stereographic_lift(sphere, &north, x, y)
        }
        ModelKind::Euclidean => stereographic_lift(sphere, &north, p.x(), p.y()),
    }
}

/// Image of one disk under complement-swap and projection from the pole:
/// three boundary points ride the whole chain (the boundary circle is shared
/// with the complement), and the chart circle through them is recovered by
/// circumcircle.
fn chart_image_of_circle(
    plane: &Plane,
    sphere: &Plane,
    pole: &Point,
    center: &Point,
    radius: f64,
) -> Result<ChartDisk> {
    let mut pts = Vec::with_capacity(3);
    for ang in [0.0, 2.1, 4.2] {
        let b = plane.circle_point(center, radius, ang);
        let s = embed_point(plane, sphere, &b)?;
        pts.push(stereographic_project(sphere, pole, &s)?);
    }
    let ((x, y), r) = euclidean_circumcircle(pts[0], pts[1], pts[2])?;
    Ok(ChartDisk { x, y, r })
}

/// Complement-swapped, pole-projected images of the configuration disks.
/// The pole must sit inside every disk by a solid margin.
pub fn dual_chart_disks(config: &Configuration, pole: &Point) -> Result<Vec<ChartDisk>> {
    let plane = &config.plane;
    let sphere = embedding_sphere(plane)?;
    let w = embed_point(plane, &sphere, pole)?;
    for d in &config.disks {
        // cap image of the disk, for the pole-margin guard
        let b0 = embed_point(plane, &sphere, &d.boundary_point(plane, 0.0))?;
        let b1 = embed_point(plane, &sphere, &d.boundary_point(plane, 2.1))?;
        let b2 = embed_point(plane, &sphere, &d.boundary_point(plane, 4.2))?;
        let inside = embed_point(plane, &sphere, &d.center)?;
        let (cap_c, cap_r) = spherical_cap_through(&sphere, &b0, &b1, &b2, &inside)?;
        if cap_r - sphere.distance(&cap_c, &w) < 1e-4 {
            return Err(GeomError::PoleProximity);
        }
    }
    config
        .disks
        .iter()
        .map(|d| chart_image_of_circle(plane, &sphere, &w, &d.center, d.radius))
        .collect()
}

/// Certify that the region tree and the dual union medial tree are the same
/// tree: equal counts, a vertex bijection within 1e-6 in the chart (centers
/// and inscribed radii), and edges carried onto edges.
pub fn duality_check(region: &IntersectionRegion, config: &Configuration) -> Result<DualityReport> {
    let tree = cocentral_tree(region)?;
    let pole = region
        .witness
        .ok_or_else(|| GeomError::Domain("region has no interior point".into()))?;
    let chart_disks = dual_chart_disks(config, &pole)?;
    let dual = union_medial_tree(&chart_disks)?;

    let plane = &config.plane;
    let sphere = embedding_sphere(plane)?;
    let w = embed_point(plane, &sphere, &pole)?;
    let mut mapped = Vec::with_capacity(tree.vertices.len());
    for v in &tree.vertices {
        mapped.push(chart_image_of_circle(plane, &sphere, &w, &v.point, v.radius)?);
    }

    let mut report = DualityReport {
        region_vertices: tree.vertices.len(),
        region_edges: tree.edges.len(),
        dual_vertices: dual.vertices.len(),
        dual_edges: dual.edges.len(),
        max_vertex_mismatch: 0.0,
        matched: tree.vertices.len() == dual.vertices.len()
            && tree.edges.len() == dual.edges.len(),
    };

    // bijection by nearest unused dual vertex
    let mut assigned: Vec<Option<usize>> = vec![None; mapped.len()];
    let mut used = vec![false; dual.vertices.len()];
    for (i, mv) in mapped.iter().enumerate() {
        let mut best: Option<(usize, f64)> = None;
        for (j, dv) in dual.vertices.iter().enumerate() {
            if used[j] {
                continue;
            }
            let dist = d2((mv.x, mv.y), (dv.x, dv.y));
            if best.map_or(true, |(_, bd)| dist < bd) {
                best = Some((j, dist));
            }
        }
        let Some((j, dist)) = best else {
            report.matched = false;
            break;
        };
        used[j] = true;
        assigned[i] = Some(j);
        report.max_vertex_mismatch = report.max_vertex_mismatch.max(dist);
        if dist > 1e-6 || (mv.r - dual.vertices[j].radius).abs() > 1e-6 {
            report.matched = false;
        }
    }

    if report.matched {
        for &(a, b) in &tree.edges {
            let (Some(da), Some(db)) = (assigned[a], assigned[b]) else {
                report.matched = false;
                break;
            };
            let e = (da.min(db), da.max(db));
            if !dual.edges.contains(&e) {
                report.matched = false;
                break;
            }
        }
    }
    Ok(report)
}
