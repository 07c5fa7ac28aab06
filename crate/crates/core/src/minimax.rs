//! Weighted minimax centers: minimize p -> max_i (d(p, s_i) + w_i).
//!
//! With w = -r this finds the deepest point of an intersection of disks (the
//! emptiness witness); with w = +r it finds the smallest disk enclosing a
//! family of disks (covering certificates). The objective is convex on a
//! hemisphere-sized domain in every model, and an optimal solution is pinned
//! by at most three sites, so the solver walks from basis to basis, each step
//! re-solving a four-constraint subproblem exactly by enumeration.

use crate::disk::{circle_intersection_points, Disk};
use crate::error::{GeomError, Result};
use crate::geodesic::geodesic_point;
use crate::plane::{Plane, Point};

#[derive(Debug, Clone)]
pub struct WeightedCenter {
    pub point: Point,
    /// max_i (d(point, s_i) + w_i), recomputed over all sites on return.
    pub value: f64,
    /// Indices of the sites pinning the optimum (at most three).
    pub basis: Vec<usize>,
}

fn objective(plane: &Plane, sites: &[Point], weights: &[f64], p: &Point) -> f64 {
    sites
        .iter()
        .zip(weights)
        .map(|(s, w)| plane.distance(p, s) + w)
        .fold(f64::NEG_INFINITY, f64::max)
}

fn argmax_violation(
    plane: &Plane,
    sites: &[Point],
    weights: &[f64],
    p: &Point,
) -> (usize, f64) {
    let mut best = (0, f64::NEG_INFINITY);
    for (i, (s, w)) in sites.iter().zip(weights).enumerate() {
        let v = plane.distance(p, s) + w;
        if v > best.1 {
            best = (i, v);
        }
    }
    best
}

/// A point lying in all three disks, if one exists. Exact up to tolerance:
/// any nonempty triple intersection contains one of the candidate points
/// (a center or a pairwise boundary crossing).
pub fn three_disk_common_point(plane: &Plane, disks: &[Disk; 3], eps: f64) -> Option<Point> {
    let mut best: Option<(f64, Point)> = None;
    let mut consider = |p: Point| {
        let depth = disks
            .iter()
            .map(|d| d.radius - plane.distance(&p, &d.center))
            .fold(f64::INFINITY, f64::min);
        if best.as_ref().map_or(true, |(b, _)| depth > *b) {
            best = Some((depth, p));
        }
    };
    for d in disks.iter() {
        consider(d.center);
    }
    for (i, j) in [(0, 1), (0, 2), (1, 2)] {
        for p in circle_intersection_points(plane, &disks[i], &disks[j]) {
            consider(p);
        }
    }
    match best {
        Some((depth, p)) if depth >= -eps => Some(p),
        _ => None,
    }
}

fn solve_singleton(sites: &[Point], weights: &[f64], i: usize) -> (Point, f64) {
    (sites[i], weights[i])
}

fn solve_pair(
    plane: &Plane,
    sites: &[Point],
    weights: &[f64],
    i: usize,
    j: usize,
) -> (Point, f64) {
    let d = plane.distance(&sites[i], &sites[j]);
    if d < 1e-14 {
        return if weights[i] >= weights[j] {
            solve_singleton(sites, weights, i)
        } else {
            solve_singleton(sites, weights, j)
        };
    }
    // Balance d_i + w_i = d_j + w_j along the connecting segment.
    let di = (0.5 * (d + weights[j] - weights[i])).clamp(0.0, d);
    match geodesic_point(plane, &sites[i], &sites[j], di / d) {
        Ok(p) => {
            let v = (di + weights[i]).max(d - di + weights[j]);
            (p, v)
        }
        // Antipodal sites: everything is on a connecting geodesic; fall back
        // to the better endpoint.
        Err(_) => {
            let vi = weights[i].max(d + weights[j]);
            let vj = weights[j].max(d + weights[i]);
            if vi <= vj {
                (sites[i], vi)
            } else {
                (sites[j], vj)
            }
        }
    }
}

fn solve_triple(
    plane: &Plane,
    sites: &[Point],
    weights: &[f64],
    idx: [usize; 3],
) -> Option<(Point, f64)> {
    // Lower bound: any pair subproblem; upper bound: the objective at any
    // candidate point. Bisect the level v on feasibility of the three-disk
    // intersection with radii v - w_i.
    let mut lo = f64::NEG_INFINITY;
    let mut hi = f64::INFINITY;
    let mut hi_witness = sites[idx[0]];
    let ws: Vec<f64> = idx.iter().map(|&i| weights[i]).collect();
    let ss: Vec<Point> = idx.iter().map(|&i| sites[i]).collect();
    for a in 0..3 {
        for b in (a + 1)..3 {
            let (p, v) = solve_pair(plane, &ss, &ws, a, b);
            lo = lo.max(v);
            let up = (0..3)
                .map(|c| plane.distance(&p, &ss[c]) + ws[c])
                .fold(f64::NEG_INFINITY, f64::max);
            if up < hi {
                hi = up;
                hi_witness = p;
            }
        }
    }
    let max_r = plane.max_disk_radius();
    let feasible = |v: f64| -> Option<Point> {
        let mut ds = Vec::with_capacity(3);
        for c in 0..3 {
            let r = v - ws[c];
            if r < 0.0 {
                return None;
            }
            // Covering levels beyond the model's disk range cannot be
            // represented as disks; treat as infeasible.
            let r = if r > max_r { return None } else { r };
            ds.push(Disk { center: ss[c], radius: r });
        }
        three_disk_common_point(plane, &[ds[0], ds[1], ds[2]], 1e-12 * (1.0 + v.abs()))
    };
    if hi - lo > 1e-15 {
        for _ in 0..80 {
            let mid = 0.5 * (lo + hi);
            if mid <= lo || mid >= hi {
                break;
            }
            match feasible(mid) {
                Some(p) => {
                    hi = mid;
                    hi_witness = p;
                }
                None => lo = mid,
            }
        }
    }
    Some((hi_witness, hi))
}

fn solve_subset(
    plane: &Plane,
    sites: &[Point],
    weights: &[f64],
    subset: &[usize],
) -> Option<(Point, f64)> {
    match *subset {
        [i] => Some(solve_singleton(sites, weights, i)),
        [i, j] => Some(solve_pair(plane, sites, weights, i, j)),
        [i, j, l] => solve_triple(plane, sites, weights, [i, j, l]),
        _ => None,
    }
}

/// Minimize max_i (d(p, sites_i) + weights_i).
///
/// Returns the optimal point, the objective recomputed over all sites at
/// that point, and the pinning basis. The enclosing-family use cases on the
/// sphere must keep sites within an open hemisphere for the convexity the
/// solver relies on; the returned value is honest (recomputed) regardless.
pub fn weighted_center(plane: &Plane, sites: &[Point], weights: &[f64]) -> Result<WeightedCenter> {
    if sites.is_empty() || sites.len() != weights.len() {
        return Err(GeomError::EmptyConfiguration);
    }
    let n = sites.len();
    // Start from the heaviest site: its weight lower-bounds the optimum.
    let start = (0..n)
        .max_by(|a, b| weights[*a].total_cmp(&weights[*b]))
        .unwrap();
    let mut basis = vec![start];
    let (mut point, mut value) = solve_singleton(sites, weights, start);

    let mut stall = 0;
    for _ in 0..200 {
        let (viol, fmax) = argmax_violation(plane, sites, weights, &point);
        if fmax <= value + 1e-10 * (1.0 + value.abs()) {
            break;
        }
        let mut cand: Vec<usize> = basis.clone();
        if !cand.contains(&viol) {
            cand.push(viol);
        }
        cand.sort_unstable();
        cand.dedup();

        // Re-solve the at-most-four-constraint subproblem exactly: the first
        // subset whose solution satisfies every candidate constraint is a
        // basis of the subproblem (all such subsets share the optimal value).
        let mut found = false;
        'subsets: for size in (1..=3.min(cand.len())).rev() {
            for subset in subsets_of(&cand, size) {
                if let Some((p, v)) = solve_subset(plane, sites, weights, &subset) {
                    let worst = cand
                        .iter()
                        .map(|&i| plane.distance(&p, &sites[i]) + weights[i])
                        .fold(f64::NEG_INFINITY, f64::max);
                    if worst <= v + 1e-9 * (1.0 + v.abs()) {
                        if v <= value + 1e-13 * (1.0 + value.abs()) {
                            stall += 1;
                        } else {
                            stall = 0;
                        }
                        basis = subset;
                        point = p;
                        value = v;
                        found = true;
                        break 'subsets;
                    }
                }
            }
        }
        if !found || stall >= 4 {
            break;
        }
    }

    let value = objective(plane, sites, weights, &point);
    Ok(WeightedCenter { point, value, basis })
}

fn subsets_of(items: &[usize], size: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let n = items.len();
    match size {
        1 => {
            for i in 0..n {
                out.push(vec![items[i]]);
            }
        }
        2 => {
            for i in 0..n {
                for j in (i + 1)..n {
                    out.push(vec![items[i], items[j]]);
                }
            }
        }
        3 => {
            for i in 0..n {
                for j in (i + 1)..n {
                    for l in (j + 1)..n {
                        out.push(vec![items[i], items[j], items[l]]);
                    }
                }
            }
        }
        _ => {}
    }
    out
}
