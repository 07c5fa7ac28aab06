//! Independent numerical oracles.
//!
//! These deliberately avoid the closed-form machinery they are used to
//! check: boundary length by inscribed geodesic polygons, area by seeded
//! Monte-Carlo counting against the raw all-disks membership test.

use crate::hull::{sample_boundary, BoundaryChain};
use crate::hull::Configuration;
use crate::error::{GeomError, Result};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

/// Perimeter of the inscribed geodesic polygon on `vertices` boundary
/// points. Converges to the true boundary length from below as the vertex
/// count grows.
pub fn polygonal_perimeter(chain: &BoundaryChain, vertices: usize) -> f64 {
    let plane = &chain.plane;
    let pts = sample_boundary(chain, vertices);
    let mut total = 0.0;
    for (i, p) in pts.iter().enumerate() {
        let q = &pts[(i + 1) % pts.len()];
        total += plane.distance(p, q);
    }
    total
}

/// Monte-Carlo estimate of the intersection area: uniform draws over the
/// smallest input disk (a superset of the intersection), counted against
/// direct distance-to-every-center membership. Returns the estimate and its
/// standard error.
///
/// Sampling is split into `shards` substreams of one counter-based
/// generator, so the result is reproducible for a fixed seed and shard
/// count regardless of how shards are scheduled.
pub fn monte_carlo_region_area(
    config: &Configuration,
    samples: usize,
    seed: u64,
    shards: u64,
) -> Result<(f64, f64)> {
    if samples == 0 || shards == 0 || shards as usize > samples {
        return Err(GeomError::Domain("bad sample or shard count".into()));
    }
    let plane = &config.plane;
    let smallest = config
        .disks
        .iter()
        .min_by(|a, b| a.radius.total_cmp(&b.radius))
        .ok_or(GeomError::EmptyConfiguration)?;
    let total_area = plane.circle_area(smallest.radius)?;
    let mut hits = 0usize;
    for shard in 0..shards {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        rng.set_stream(shard + 1);
        let quota = samples / shards as usize
            + if shard < (samples % shards as usize) as u64 { 1 } else { 0 };
        for _ in 0..quota {
            let p = crate::contraction::sample_in_disk(plane, &mut rng, &smallest.center, smallest.radius);
            if config.disks.iter().all(|d| plane.distance(&d.center, &p) <= d.radius) {
                hits += 1;
            }
        }
    }
    let frac = hits as f64 / samples as f64;
    let estimate = total_area * frac;
    let se = total_area * (frac * (1.0 - frac) / samples as f64).sqrt();
    Ok((estimate, se))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::disk::Disk;
    use crate::hull::hull_boundary;
    use crate::intersect::region_area;
    use crate::intersect::intersect_disks;
    use crate::plane::Plane;

    fn planes() -> Vec<Plane> {
        vec![Plane::hyperbolic(1.0).unwrap(), Plane::euclidean(), Plane::spherical(1.0).unwrap()]
    }

    fn disk_at(plane: &Plane, x: f64, y: f64, r: f64) -> Disk {
        Disk::new(plane, plane.point_from_xy(x, y), r).unwrap()
    }

    #[test]
    fn polygon_length_converges_to_circle_perimeter() {
        for plane in planes() {
            let config =
                Configuration::new(plane, vec![disk_at(&plane, 0.1, -0.2, 0.8)]).unwrap();
            let chain = hull_boundary(&config).unwrap();
            let exact = plane.circle_perimeter(0.8).unwrap();
            let poly = polygonal_perimeter(&chain, 10_000);
            assert!(poly <= exact + 1e-12);
            assert!((exact - poly) / exact < 1e-6);
        }
    }

    #[test]
    fn polygon_length_tracks_a_two_disk_hull() {
        for plane in planes() {
            let config = Configuration::new(
                plane,
                vec![disk_at(&plane, -0.4, 0.0, 0.5), disk_at(&plane, 0.45, 0.1, 0.35)],
            )
            .unwrap();
            let chain = hull_boundary(&config).unwrap();
            let closed = chain.perimeter();
            let poly = polygonal_perimeter(&chain, 20_000);
            assert!(
                (closed - poly).abs() / closed < 1e-6,
                "closed {closed} vs polygon {poly}"
            );
        }
    }

    #[test]
    fn lens_area_is_inside_three_standard_errors() {
        let plane = Plane::euclidean();
        let config = Configuration::new(
            plane,
            vec![disk_at(&plane, 0.0, 0.0, 1.0), disk_at(&plane, 1.0, 0.0, 1.0)],
        )
        .unwrap();
        // circular segment pair at unit separation
        let exact = 2.0 * std::f64::consts::FRAC_PI_3 - 3.0f64.sqrt() / 2.0;
        let (mc, se) = monte_carlo_region_area(&config, 400_000, 2024, 4).unwrap();
        assert!((mc - exact).abs() <= 3.0 * se, "mc {mc} exact {exact} se {se}");
        let region = intersect_disks(&config).unwrap();
        let gb = region_area(&region).unwrap();
        assert!((gb - exact).abs() < 1e-12);
    }

    #[test]
    fn sharded_runs_are_reproducible() {
        let plane = Plane::hyperbolic(1.0).unwrap();
        let config = Configuration::new(
            plane,
            vec![disk_at(&plane, -0.2, 0.1, 0.7), disk_at(&plane, 0.3, -0.1, 0.6)],
        )
        .unwrap();
        let (a, _) = monte_carlo_region_area(&config, 100_000, 99, 8).unwrap();
        let (b, _) = monte_carlo_region_area(&config, 100_000, 99, 8).unwrap();
        assert_eq!(a, b);
        let (c, se) = monte_carlo_region_area(&config, 100_000, 99, 1).unwrap();
        assert!(c != a, "different shard splits draw different samples");
        let region = intersect_disks(&config).unwrap();
        let gb = region_area(&region).unwrap();
        assert!((a - gb).abs() <= 4.0 * se);
        assert!((c - gb).abs() <= 4.0 * se);
    }
}
