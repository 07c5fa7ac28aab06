//! Central sets of disk hulls: the geodesic tree of maximal inscribed disks.
//!
//! The boundary of a hull alternates circle arcs and tangent segments. A
//! maximal inscribed disk either is one of the hull disks itself or touches
//! two or more segment sides, so its center lies on an equidistant geodesic
//! of a side pair: since sigma(signed distance) is linear in the incidence
//! vector, the locus sd(x, a) = sd(x, b) is the geodesic with raw vector
//! n_a - n_b in every model. The centers therefore form a tree whose edges
//! are geodesic segments: leaves sit at hull disk centers, junctions at
//! points equidistant from three sides. We recover it directly: every side
//! triple proposes its equidistant point, kept when the distance to the
//! boundary chain certifies it as a maximal center, and every side pair
//! links the kept points along its bisector wherever a midpoint passes the
//! same certificate. Note the inscribed radius need not grow toward the
//! middle of the tree: a hull disk tangent to four sides (one whose arc is
//! interrupted by a protruding neighbor) is a local maximum and the edge
//! leaving its center descends.

use std::collections::HashSet;
use std::f64::consts::TAU;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::contraction::sample_in_disk;
use crate::disk::{same_disk, Disk};
use crate::error::{GeomError, Result};
use crate::geodesic::{geodesic_point, geodesic_through, segment_distance, signed_distance, Geodesic};
use crate::hull::{hull_boundary, hull_contains, BoundaryChain, ChainPiece, Configuration};
use crate::minimax::weighted_center;
use crate::plane::{ModelKind, Plane, Point, EPS_GEO};
use crate::tangent::circle_tangent_at;

/// Center and radius of one maximal inscribed disk.
#[derive(Debug, Clone, Copy)]
pub struct TreeVertex {
    pub point: Point,
    pub radius: f64,
}

/// Tree of maximal inscribed disks of a hull. Every maximal disk's center
/// lies on a vertex or on one of the geodesic edges; along an edge the
/// inscribed radius is the distance to the edge's two generating sides.
#[derive(Debug, Clone)]
pub struct GeodesicTree {
    pub vertices: Vec<TreeVertex>,
    /// Index pairs into vertices; each edge is a geodesic segment.
    pub edges: Vec<(usize, usize)>,
    /// Side pair whose equidistant geodesic carries each edge.
    pub edge_sides: Vec<(Geodesic, Geodesic)>,
}

impl GeodesicTree {
    pub fn degree(&self, v: usize) -> usize {
        self.edges.iter().filter(|(a, b)| *a == v || *b == v).count()
    }

    pub fn leaves(&self) -> Vec<usize> {
        (0..self.vertices.len()).filter(|v| self.degree(*v) == 1).collect()
    }

    /// Connected with |E| = |V| - 1.
    pub fn is_tree(&self) -> bool {
        let n = self.vertices.len();
        if n == 0 || self.edges.len() + 1 != n {
            return n == 1 && self.edges.is_empty();
        }
        let mut adj = vec![Vec::new(); n];
        for (a, b) in &self.edges {
            adj[*a].push(*b);
            adj[*b].push(*a);
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
        seen.into_iter().all(|s| s)
    }
}

/// Distance from p to the nearest tree point (vertex or edge point).
pub fn distance_to_tree(plane: &Plane, tree: &GeodesicTree, p: &Point) -> f64 {
    nearest_on_tree(plane, tree, p).0
}

pub(crate) fn nearest_on_tree(plane: &Plane, tree: &GeodesicTree, p: &Point) -> (f64, Point) {
    let mut best = (f64::INFINITY, tree.vertices[0].point);
    for v in &tree.vertices {
        let d = plane.distance(p, &v.point);
        if d < best.0 {
            best = (d, v.point);
        }
    }
    for (a, b) in &tree.edges {
        let (d, foot) =
            segment_distance(plane, p, &tree.vertices[*a].point, &tree.vertices[*b].point);
        if d < best.0 {
            best = (d, foot);
        }
    }
    best
}

/// Distance from p to one boundary piece of the chain, with the nearest
/// point of the piece.
fn piece_nearest(chain: &BoundaryChain, piece: &ChainPiece, p: &Point) -> (f64, Point) {
    let plane = &chain.plane;
    match piece {
        ChainPiece::Arc { disk_index, start_angle, sweep } => {
            let disk = &chain.disks[*disk_index];
            let d = plane.distance(p, &disk.center);
            if disk.radius < 1e-13 || d < 1e-13 {
                return (d.max(disk.radius - d), disk.boundary_point(plane, *start_angle));
            }
            let theta = plane
                .direction_angle(&disk.center, p)
                .expect("p distinct from the arc center");
            if (theta - start_angle).rem_euclid(TAU) <= *sweep {
                // nearest circle point is radial and lands on the arc
                ((d - disk.radius).abs(), disk.boundary_point(plane, theta))
            } else {
                let ea = disk.boundary_point(plane, *start_angle);
                let eb = disk.boundary_point(plane, start_angle + sweep);
                let (da, db) = (plane.distance(p, &ea), plane.distance(p, &eb));
                if da <= db { (da, ea) } else { (db, eb) }
            }
        }
        ChainPiece::Segment { start, end } => segment_distance(plane, p, start, end),
    }
}

/// Distances from p to each boundary piece, in chain order.
pub fn piece_distances(chain: &BoundaryChain, p: &Point) -> Vec<f64> {
    chain.pieces.iter().map(|piece| piece_nearest(chain, piece, p).0).collect()
}

/// Nearest boundary point of the hull.
pub fn nearest_boundary_point(chain: &BoundaryChain, p: &Point) -> (f64, Point) {
    chain
        .pieces
        .iter()
        .map(|piece| piece_nearest(chain, piece, p))
        .min_by(|a, b| a.0.total_cmp(&b.0))
        .expect("chain has pieces")
}

/// Radius of the largest disk centered at p that fits inside the hull:
/// the distance from p to the boundary chain. Errors if p lies outside.
pub fn inscribed_radius(chain: &BoundaryChain, p: &Point) -> Result<f64> {
    if !hull_contains(chain, p, EPS_GEO) {
        return Err(GeomError::OutsideRegion);
    }
    let mut best = f64::INFINITY;
    for piece in &chain.pieces {
        best = best.min(piece_nearest(chain, piece, p).0);
    }
    Ok(best.max(0.0))
}

/// Point equidistant from sides a, s, c on the inner side, with its
/// clearance. None when the bisectors do not meet.
fn triple_point(plane: &Plane, sides: &[Geodesic], a: usize, s: usize, c: usize) -> Option<(Point, f64)> {
    let d1 = sides[a].n - sides[s].n;
    let d2 = sides[s].n - sides[c].n;
    let raw = match plane.kind {
        ModelKind::Euclidean => d1.cross(&d2),
        _ => plane.mcross(&d1, &d2),
    };
    let mut x = plane.normalize_to_surface(&raw).ok()?;
    let mut v = signed_distance(plane, &x, &sides[s]);
    if plane.kind == ModelKind::Spherical && v < 0.0 {
        // the antipode solves the same incidence system; take the inner one
        x = Point::new(-x.coords);
        v = -v;
    }
    if !v.is_finite() || v < -1e-9 {
        return None;
    }
    Some((x, v.max(0.0)))
}

pub(crate) fn add_or_merge(plane: &Plane, vertices: &mut Vec<TreeVertex>, p: Point, r: f64) -> usize {
    for (i, v) in vertices.iter().enumerate() {
        if plane.distance(&v.point, &p) <= EPS_GEO {
            return i;
        }
    }
    vertices.push(TreeVertex { point: p, radius: r });
    vertices.len() - 1
}

/// Tree of maximal inscribed disks of the hull. The chain must come from
/// hull_boundary on the same configuration.
pub fn central_tree(config: &Configuration, chain: &BoundaryChain) -> Result<GeodesicTree> {
    let plane = &config.plane;
    if chain.is_full_circle() {
        let ChainPiece::Arc { disk_index, .. } = chain.pieces[0] else { unreachable!() };
        let d = &chain.disks[disk_index];
        return Ok(GeodesicTree {
            vertices: vec![TreeVertex { point: d.center, radius: d.radius }],
            edges: Vec::new(),
            edge_sides: Vec::new(),
        });
    }

    // Peel sides and corners off the chain: arc j sits between segment j-1
    // and segment j.
    let h = chain.pieces.len() / 2;
    let mut sides: Vec<Geodesic> = Vec::with_capacity(h);
    let mut corners: Vec<(Point, f64)> = Vec::with_capacity(h);
    for j in 0..h {
        let ChainPiece::Arc { disk_index, start_angle, sweep } = chain.pieces[2 * j] else {
            return Err(GeomError::ChainIntegrity("expected arc at even position".into()));
        };
        let ChainPiece::Segment { start, end } = chain.pieces[2 * j + 1] else {
            return Err(GeomError::ChainIntegrity("expected segment at odd position".into()));
        };
        let disk = &chain.disks[disk_index];
        corners.push((disk.center, disk.radius));
        let side = if plane.distance(&start, &end) > 1e-9 {
            geodesic_through(plane, &start, &end)?
        } else {
            // zero-length side between barely separated arcs: fall back to
            // the tangent at the departure point
            circle_tangent_at(plane, disk, start_angle + sweep)
                .map_err(|_| GeomError::ChainIntegrity("degenerate tangent segment".into()))?
        };
        sides.push(side);
    }

    // Consecutive sides on one geodesic arise from collinear degenerate
    // disks or from a hull disk tangent to the side from inside; neither
    // corner is a leaf (the tangent disk's center lies mid-edge), so the
    // duplicate side is dropped.
    loop {
        let h = sides.len();
        if h < 2 {
            return Err(GeomError::ChainIntegrity("hull with a single side".into()));
        }
        let mut merged = false;
        for i in 0..h {
            let j = (i + 1) % h;
            let (c, r) = corners[j];
            if i != j && (sides[i].n - sides[j].n).norm() < 1e-8 {
                if r > 1e-7 && (signed_distance(plane, &c, &sides[i]) - r).abs() > 1e-6 {
                    return Err(GeomError::TreeStructure(
                        "non-tangent corner between coincident sides".into(),
                    ));
                }
                sides.remove(j);
                corners.remove(j);
                merged = true;
                break;
            }
        }
        if !merged {
            break;
        }
    }
    let h = sides.len();

    let mut vertices: Vec<TreeVertex> = Vec::new();
    let mut edges: Vec<(usize, usize)> = Vec::new();
    let mut edge_sides: Vec<(Geodesic, Geodesic)> = Vec::new();
    let mut seen = HashSet::new();
    let mut push_edge = |edges: &mut Vec<(usize, usize)>,
                         edge_sides: &mut Vec<(Geodesic, Geodesic)>,
                         a: usize,
                         b: usize,
                         pair: (Geodesic, Geodesic)| {
        let key = (a.min(b), a.max(b));
        if a != b && seen.insert(key) {
            edges.push(key);
            edge_sides.push(pair);
        }
    };

    // Hull disk centers are maximal (their arcs lie on the boundary); a
    // disk with two arcs contributes one vertex, merged by position.
    for (p, r) in &corners {
        add_or_merge(plane, &mut vertices, *p, *r);
    }
    // Junction candidates: equidistant points of side triples, kept when
    // the distance to the chain certifies them as maximal centers.
    for i in 0..h {
        for j in i + 1..h {
            for k in j + 1..h {
                let Some((x, v)) = triple_point(plane, &sides, i, j, k) else { continue };
                if inscribed_radius(chain, &x).map_or(false, |rho| (rho - v).abs() <= 1e-7) {
                    add_or_merge(plane, &mut vertices, x, v);
                }
            }
        }
    }

    // Link the vertices on each pair bisector wherever the stretch between
    // consecutive ones stays maximal, checked at the midpoint.
    for i in 0..h {
        for j in i + 1..h {
            let mut on: Vec<usize> = (0..vertices.len())
                .filter(|&m| {
                    let (p, rho) = (&vertices[m].point, vertices[m].radius);
                    (signed_distance(plane, p, &sides[i]) - rho).abs() <= 1e-7
                        && (signed_distance(plane, p, &sides[j]) - rho).abs() <= 1e-7
                })
                .collect();
            if on.len() < 2 {
                continue;
            }
            // order along the bisector by distance from one end of the
            // farthest vertex pair
            let mut ea = on[0];
            let mut dmax = -1.0;
            for &a in &on {
                for &b in &on {
                    let d = plane.distance(&vertices[a].point, &vertices[b].point);
                    if d > dmax {
                        dmax = d;
                        ea = a;
                    }
                }
            }
            on.sort_by(|a, b| {
                let da = plane.distance(&vertices[ea].point, &vertices[*a].point);
                let db = plane.distance(&vertices[ea].point, &vertices[*b].point);
                da.total_cmp(&db)
            });
            for w in on.windows(2) {
                let m = geodesic_point(plane, &vertices[w[0]].point, &vertices[w[1]].point, 0.5)?;
                let (vi, vj) = (
                    signed_distance(plane, &m, &sides[i]),
                    signed_distance(plane, &m, &sides[j]),
                );
                let genuine = (vi - vj).abs() <= 1e-7
                    && inscribed_radius(chain, &m)
                        .map_or(false, |rho| (rho - 0.5 * (vi + vj)).abs() <= 1e-7);
                if genuine {
                    push_edge(&mut edges, &mut edge_sides, w[0], w[1], (sides[i], sides[j]));
                }
            }
        }
    }

    let tree = GeodesicTree { vertices, edges, edge_sides };
    if !tree.is_tree() {
        return Err(GeomError::TreeStructure("wavefront produced a non-tree graph".into()));
    }
    Ok(tree)
}

/// Largest phi(x) = inscribed_radius(x) - d(x, center) over the tree: the
/// best maximal disk for covering the given disk.
fn maximal_cover(plane: &Plane, chain: &BoundaryChain, tree: &GeodesicTree, d: &Disk) -> Result<Disk> {
    // already maximal: keep the disk bit-identical
    let (dist_tree, _) = nearest_on_tree(plane, tree, &d.center);
    if dist_tree <= 1e-9 {
        let rho = inscribed_radius(chain, &d.center)?;
        if (rho - d.radius).abs() <= 1e-8 {
            return Ok(*d);
        }
    }

    let phi = |x: &Point| match inscribed_radius(chain, x) {
        Ok(r) => r - plane.distance(x, &d.center),
        Err(_) => f64::NEG_INFINITY,
    };
    let mut best_p = tree.vertices[0].point;
    let mut best = phi(&best_p);
    let consider = |p: Point, best: &mut f64, best_p: &mut Point| {
        let v = phi(&p);
        if v > *best {
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
        let mut bv = f64::NEG_INFINITY;
        for i in 0..=n {
            let t = i as f64 / n as f64;
            let v = phi(&geodesic_point(plane, &pu, &pv, t)?);
            if v > bv {
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
            if f1 < f2 {
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
    let r = inscribed_radius(chain, &best_p)?;
    Disk::new(plane, best_p, r)
}

pub(crate) fn push_unique(plane: &Plane, out: &mut Vec<Disk>, d: Disk) {
    if !out.iter().any(|e| same_disk(plane, e, &d, 1e-8)) {
        out.push(d);
    }
}

/// Replace every disk by a maximal inscribed disk of the hull containing it
/// and add the tree vertex disks. The hull is unchanged: replacements are
/// inscribed and nest their originals, which is asserted per disk.
pub fn sharpen(config: &Configuration) -> Result<Configuration> {
    let plane = &config.plane;
    let chain = hull_boundary(config)?;
    let tree = central_tree(config, &chain)?;
    let mut out: Vec<Disk> = Vec::new();
    for d in &config.disks {
        let rep = maximal_cover(plane, &chain, &tree, d)?;
        assert!(
            rep.radius - d.radius >= plane.distance(&rep.center, &d.center) - EPS_GEO,
            "replacement disk fails to nest its original",
        );
        push_unique(plane, &mut out, rep);
    }
    for v in &tree.vertices {
        let r = inscribed_radius(&chain, &v.point)?;
        push_unique(plane, &mut out, Disk::new(plane, v.point, r)?);
    }
    Configuration::new(*plane, out)
}

/// Splitting certificate for one induction step on a sharpened system.
#[derive(Debug, Clone)]
pub struct DecompositionReport {
    /// Input index of the chosen leaf disk.
    pub leaf: usize,
    /// Input index of its unique neighbor on the tree.
    pub neighbor: usize,
    pub samples: usize,
    /// Samples discarded for sitting within 1e-6 of some region boundary.
    pub skipped: usize,
    /// Points violating hull = part-hull union pair-hull.
    pub union_mismatches: usize,
    /// Points violating part-hull intersect pair-hull = neighbor disk.
    pub intersection_mismatches: usize,
    /// |per(hull) - per(part) - per(pair) + per(neighbor disk)|.
    pub perimeter_residual: f64,
    pub ok: bool,
}

/// Adjacency between disk centers along the tree: two centers are adjacent
/// when the tree path between them passes no third center. Every tree vertex
/// must carry a disk and every center must sit on the tree.
fn center_adjacency(plane: &Plane, tree: &GeodesicTree, disks: &[Disk]) -> Result<Vec<Vec<usize>>> {
    let n = disks.len();
    let mut vertex_disk = vec![usize::MAX; tree.vertices.len()];
    let mut placed = vec![false; n];
    for (vi, v) in tree.vertices.iter().enumerate() {
        let mut best = (f64::INFINITY, usize::MAX);
        for (di, d) in disks.iter().enumerate() {
            let dist = plane.distance(&v.point, &d.center);
            if dist < best.0 {
                best = (dist, di);
            }
        }
        if best.0 > 1e-7 || (tree.vertices[vi].radius - disks[best.1].radius).abs() > 1e-6 {
            return Err(GeomError::TreeStructure(
                "tree vertex carries no input disk; sharpen the system first".into(),
            ));
        }
        if placed[best.1] {
            return Err(GeomError::TreeStructure("two tree vertices share one center".into()));
        }
        vertex_disk[vi] = best.1;
        placed[best.1] = true;
    }

    // remaining centers must sit in edge interiors; split edges there
    let mut splits: Vec<Vec<(f64, usize)>> = vec![Vec::new(); tree.edges.len()];
    for (di, d) in disks.iter().enumerate() {
        if placed[di] {
            continue;
        }
        let mut best = (f64::INFINITY, usize::MAX, 0.0);
        for (ei, (a, b)) in tree.edges.iter().enumerate() {
            let pu = tree.vertices[*a].point;
            let pv = tree.vertices[*b].point;
            let (dist, foot) = segment_distance(plane, &d.center, &pu, &pv);
            if dist < best.0 {
                let t = plane.distance(&pu, &foot) / plane.distance(&pu, &pv);
                best = (dist, ei, t);
            }
        }
        if best.0 > 1e-7 {
            return Err(GeomError::TreeStructure(
                "disk center off the tree; sharpen the system first".into(),
            ));
        }
        splits[best.1].push((best.2, di));
    }

    let mut adj: Vec<Vec<usize>> = vec![Vec::new(); n];
    for (ei, (a, b)) in tree.edges.iter().enumerate() {
        splits[ei].sort_by(|x, y| x.0.total_cmp(&y.0));
        let mut prev = vertex_disk[*a];
        for (_, di) in &splits[ei] {
            adj[prev].push(*di);
            adj[*di].push(prev);
            prev = *di;
        }
        let last = vertex_disk[*b];
        adj[prev].push(last);
        adj[last].push(prev);
    }
    Ok(adj)
}

/// Certify the splitting step of a sharpened system: pick the lowest-index
/// leaf disk, split the hull against its tree neighbor, and verify the
/// region identities by indicator sampling and the perimeter identity
/// per(hull) + per(neighbor disk) = per(rest hull) + per(pair hull).
pub fn tree_decomposition_check(config: &Configuration) -> Result<DecompositionReport> {
    let plane = &config.plane;
    let chain = hull_boundary(config)?;
    for d in &config.disks {
        let rho = inscribed_radius(&chain, &d.center)?;
        if (rho - d.radius).abs() > 1e-6 {
            return Err(GeomError::TreeStructure(
                "non-maximal disk; sharpen the system first".into(),
            ));
        }
    }
    let tree = central_tree(config, &chain)?;
    let adj = center_adjacency(plane, &tree, &config.disks)?;
    let leaf = (0..config.disks.len())
        .find(|i| adj[*i].len() == 1)
        .ok_or_else(|| GeomError::TreeStructure("no leaf disk to split off".into()))?;
    let neighbor = adj[leaf][0];

    let rest: Vec<Disk> = config
        .disks
        .iter()
        .enumerate()
        .filter(|(i, _)| *i != leaf)
        .map(|(_, d)| *d)
        .collect();
    let pair = vec![config.disks[neighbor], config.disks[leaf]];
    let chain_rest = hull_boundary(&Configuration::new(*plane, rest)?)?;
    let chain_pair = hull_boundary(&Configuration::new(*plane, pair)?)?;

    let neighbor_per = plane.circle_perimeter(config.disks[neighbor].radius)?;
    let perimeter_residual =
        (chain.perimeter() + neighbor_per - chain_rest.perimeter() - chain_pair.perimeter()).abs();

    // indicator sampling over a disk covering the hull
    let centers: Vec<Point> = config.disks.iter().map(|d| d.center).collect();
    let weights: Vec<f64> = config.disks.iter().map(|d| d.radius).collect();
    let cover = weighted_center(plane, &centers, &weights)?;
    let radius = (cover.value + 0.1).min(plane.max_disk_radius());
    let mut rng = ChaCha8Rng::seed_from_u64(424242);
    let band = 1e-6;
    let (mut skipped, mut union_mismatches, mut intersection_mismatches) = (0usize, 0usize, 0usize);
    let samples = 10_000;
    let nd = &config.disks[neighbor];
    for _ in 0..samples {
        let p = sample_in_disk(plane, &mut rng, &cover.point, radius);
        let chains = [&chain, &chain_rest, &chain_pair];
        if chains.iter().any(|c| hull_contains(c, &p, band) != hull_contains(c, &p, -band))
            || nd.contains(plane, &p, band) != nd.contains(plane, &p, -band)
        {
            skipped += 1;
            continue;
        }
        let in_u = hull_contains(&chain, &p, 0.0);
        let in_rest = hull_contains(&chain_rest, &p, 0.0);
        let in_pair = hull_contains(&chain_pair, &p, 0.0);
        if in_u != (in_rest || in_pair) {
            union_mismatches += 1;
        }
        if (in_rest && in_pair) != nd.contains(plane, &p, 0.0) {
            intersection_mismatches += 1;
        }
    }

    let ok = union_mismatches == 0 && intersection_mismatches == 0 && perimeter_residual <= 1e-7;
    Ok(DecompositionReport {
        leaf,
        neighbor,
        samples,
        skipped,
        union_mismatches,
        intersection_mismatches,
        perimeter_residual,
        ok,
    })
}
