//! Contraction pairs: center relabelings that do not increase any pairwise
//! distance, with certified generators for producing them.
//!
//! A generator output is always re-checked against the defining property
//! before it is returned; a violation is a bug in the generator, not a
//! recoverable input condition, so the check is a hard assertion.

use crate::disk::Disk;
use crate::error::{GeomError, Result};
use crate::geodesic::geodesic_point;
use crate::hull::Configuration;
use crate::plane::{ModelKind, Point, EPS_GEO};
use rand::Rng;
use rand_chacha::ChaCha8Rng;

/// A configuration and a relabeled copy: same plane, same radii in the same
/// order, centers moved so that no pairwise distance grows.
#[derive(Debug, Clone)]
pub struct ContractionPair {
    pub original: Configuration,
    pub contracted: Configuration,
}

/// Outcome of checking the defining property. `max_violation` is the largest
/// increase of a pairwise distance (negative when every pair shrank) and
/// `worst_pair` the indices attaining it.
#[derive(Debug, Clone, Copy)]
pub struct ContractionReport {
    pub ok: bool,
    pub max_violation: f64,
    pub worst_pair: (usize, usize),
}

/// One certified contraction step, applied by [`compose`].
#[derive(Debug, Clone, Copy)]
pub enum Generator {
    /// Pull every center toward `anchor` to the fraction `lambda` of its
    /// distance. Valid on the hyperbolic and euclidean planes only.
    Radial { anchor: Point, lambda: f64 },
    /// Resample center `index` uniformly in the set of points no farther
    /// from each other center than it currently is.
    SinglePoint { index: usize, trials: usize },
}

/// Check the defining property: every pairwise distance of `contracted` is
/// at most the matching distance of `original`, up to the geometric epsilon.
/// Structural mismatches (plane, length, radii) are domain errors.
pub fn is_contraction(pair: &ContractionPair) -> Result<ContractionReport> {
    let a = &pair.original;
    let b = &pair.contracted;
    if a.plane.kind != b.plane.kind || a.plane.k != b.plane.k {
        return Err(GeomError::Domain("contraction pair mixes planes".into()));
    }
    if a.disks.len() != b.disks.len() {
        return Err(GeomError::Domain("contraction pair lengths differ".into()));
    }
    if a.disks.iter().zip(&b.disks).any(|(x, y)| x.radius != y.radius) {
        return Err(GeomError::Domain("contraction pair radii differ".into()));
    }
    let plane = &a.plane;
    let mut max_violation = f64::NEG_INFINITY;
    let mut worst_pair = (0, 0);
    for i in 0..a.disks.len() {
        for j in i + 1..a.disks.len() {
            let before = plane.distance(&a.disks[i].center, &a.disks[j].center);
            let after = plane.distance(&b.disks[i].center, &b.disks[j].center);
            if after - before > max_violation {
                max_violation = after - before;
                worst_pair = (i, j);
            }
        }
    }
    if a.disks.len() < 2 {
        max_violation = 0.0;
    }
    Ok(ContractionReport { ok: max_violation <= EPS_GEO, max_violation, worst_pair })
}

fn certify(original: &Configuration, contracted: Configuration, what: &str) -> Configuration {
    let pair = ContractionPair { original: original.clone(), contracted };
    let report = is_contraction(&pair).expect("generator preserves structure");
    assert!(
        report.ok,
        "{what} produced a distance increase of {:.3e} at pair {:?}",
        report.max_violation, report.worst_pair
    );
    pair.contracted
}

/// Move every center to the point at fraction `lambda` of its distance from
/// `anchor`, along the connecting geodesic. Distance convexity makes this a
/// contraction when the curvature is nonpositive; the spherical plane is
/// rejected because the argument fails there globally.
pub fn radial_contraction(
    config: &Configuration,
    anchor: &Point,
    lambda: f64,
) -> Result<Configuration> {
    if config.plane.kind == ModelKind::Spherical {
        return Err(GeomError::UnsupportedGenerator(
            "radial contraction needs nonpositive curvature",
        ));
    }
    if !(0.0..=1.0).contains(&lambda) {
        return Err(GeomError::Domain(format!("lambda {lambda} outside [0, 1]")));
    }
    config.plane.validate_point(anchor)?;
    let mut disks = Vec::with_capacity(config.disks.len());
    for d in &config.disks {
        let center = geodesic_point(&config.plane, anchor, &d.center, lambda)?;
        disks.push(Disk { center, radius: d.radius });
    }
    let moved = Configuration::new(config.plane, disks)?;
    Ok(certify(config, moved, "radial contraction"))
}

/// Resample center `index` uniformly, by rejection, in the intersection of
/// the balls around the other centers with radii the current distances. Any
/// accepted point leaves every pairwise distance at most what it was. On the
/// sphere a draw that breaks the hemisphere certificate is rejected too.
///
/// A configuration with a single disk has no distance constraints; the new
/// center is drawn from the unit-scale disk around the old one.
pub fn single_point_move(
    config: &Configuration,
    index: usize,
    trials: usize,
    rng: &mut ChaCha8Rng,
) -> Result<Configuration> {
    if index >= config.disks.len() {
        return Err(GeomError::Domain(format!("center index {index} out of range")));
    }
    let plane = &config.plane;
    let old = config.disks[index].center;
    let others: Vec<(Point, f64)> = config
        .disks
        .iter()
        .enumerate()
        .filter(|(j, _)| *j != index)
        .map(|(_, d)| (d.center, plane.distance(&d.center, &old)))
        .collect();
    // tightest ball containing the target set; its center anchors the sampler
    let (hub, spread) = others
        .iter()
        .min_by(|a, b| a.1.total_cmp(&b.1))
        .map(|(p, r)| (*p, *r))
        .unwrap_or((old, 1.0 / plane.k));
    for _ in 0..trials {
        let candidate = sample_in_disk(plane, rng, &hub, spread);
        if others.iter().any(|(p, r)| plane.distance(p, &candidate) > *r) {
            continue;
        }
        let mut disks = config.disks.clone();
        disks[index].center = candidate;
        match Configuration::new(*plane, disks) {
            Ok(moved) => return Ok(certify(config, moved, "single point move")),
            Err(GeomError::HemisphereViolation(_)) => continue,
            Err(e) => return Err(e),
        }
    }
    Err(GeomError::SamplerExhausted(trials))
}

/// Apply the steps in order, certifying each one, then re-certify the whole
/// composition end to end. The empty composition is the identity.
pub fn compose(
    config: &Configuration,
    steps: &[Generator],
    rng: &mut ChaCha8Rng,
) -> Result<Configuration> {
    let mut current = config.clone();
    for step in steps {
        current = match step {
            Generator::Radial { anchor, lambda } => {
                radial_contraction(&current, anchor, *lambda)?
            }
            Generator::SinglePoint { index, trials } => {
                single_point_move(&current, *index, *trials, rng)?
            }
        };
    }
    Ok(certify(config, current, "composition"))
}

/// Area-uniform point in the metric disk `B(c, radius)`. The radial CDF is
/// the area ratio, inverted in closed form per model.
pub fn sample_in_disk(
    plane: &crate::plane::Plane,
    rng: &mut ChaCha8Rng,
    c: &Point,
    radius: f64,
) -> Point {
    let u: f64 = rng.gen();
    let theta: f64 = rng.gen::<f64>() * std::f64::consts::TAU;
    let k = plane.k;
    let rho = match plane.kind {
        ModelKind::Hyperbolic => (1.0 + u * ((k * radius).cosh() - 1.0)).acosh() / k,
        ModelKind::Euclidean => radius * u.sqrt(),
        ModelKind::Spherical => (1.0 - u * (1.0 - (k * radius).cos())).acos() / k,
    };
    plane.circle_point(c, rho, theta)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::plane::Plane;
    use proptest::prelude::*;
    use rand::{Rng, SeedableRng};

    fn disk_at(plane: &Plane, x: f64, y: f64, r: f64) -> Disk {
        Disk::new(plane, plane.point_from_xy(x, y), r).unwrap()
    }

    fn random_config(plane: &Plane, rng: &mut ChaCha8Rng, n: usize) -> Configuration {
        let disks: Vec<Disk> = (0..n)
            .map(|_| {
                let x = rng.gen::<f64>() * 1.2 - 0.6;
                let y = rng.gen::<f64>() * 1.2 - 0.6;
                disk_at(plane, x, y, 0.2 + 0.6 * rng.gen::<f64>())
            })
            .collect();
        Configuration::new(*plane, disks).unwrap()
    }

    #[test]
    fn identity_and_collapse_are_contractions() {
        for plane in [Plane::hyperbolic(1.0).unwrap(), Plane::euclidean()] {
            let mut rng = ChaCha8Rng::seed_from_u64(11);
            let config = random_config(&plane, &mut rng, 5);
            let identity = ContractionPair {
                original: config.clone(),
                contracted: config.clone(),
            };
            let report = is_contraction(&identity).unwrap();
            assert!(report.ok);
            assert!(report.max_violation.abs() <= 1e-12);

            let anchor = config.disks[0].center;
            let collapsed: Vec<Disk> = config
                .disks
                .iter()
                .map(|d| Disk { center: anchor, radius: d.radius })
                .collect();
            let collapse = ContractionPair {
                original: config.clone(),
                contracted: Configuration::new(plane, collapsed).unwrap(),
            };
            assert!(is_contraction(&collapse).unwrap().ok);
        }
    }

    #[test]
    fn outward_move_is_flagged_with_its_pair() {
        let plane = Plane::euclidean();
        let disks = vec![
            disk_at(&plane, -1.0, 0.0, 0.5),
            disk_at(&plane, 1.0, 0.0, 0.5),
            disk_at(&plane, 0.0, 1.0, 0.5),
        ];
        let config = Configuration::new(plane, disks.clone()).unwrap();
        let mut moved = disks;
        moved[1] = disk_at(&plane, 1.5, 0.0, 0.5);
        let pair = ContractionPair {
            original: config,
            contracted: Configuration::new(plane, moved).unwrap(),
        };
        let report = is_contraction(&pair).unwrap();
        assert!(!report.ok);
        assert!((report.max_violation - 0.5).abs() < 1e-12);
        assert_eq!(report.worst_pair, (0, 1));
    }

    #[test]
    fn mismatched_pairs_are_domain_errors() {
        let plane = Plane::euclidean();
        let a = Configuration::new(plane, vec![disk_at(&plane, 0.0, 0.0, 1.0)]).unwrap();
        let b = Configuration::new(
            plane,
            vec![disk_at(&plane, 0.0, 0.0, 1.0), disk_at(&plane, 1.0, 0.0, 1.0)],
        )
        .unwrap();
        let lengths = is_contraction(&ContractionPair { original: a.clone(), contracted: b });
        assert!(matches!(lengths, Err(GeomError::Domain(_))));

        let c = Configuration::new(plane, vec![disk_at(&plane, 0.0, 0.0, 0.5)]).unwrap();
        let radii = is_contraction(&ContractionPair { original: a, contracted: c });
        assert!(matches!(radii, Err(GeomError::Domain(_))));
    }

    #[test]
    fn radial_limits_are_identity_and_collapse() {
        let plane = Plane::hyperbolic(1.0).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(13);
        let config = random_config(&plane, &mut rng, 4);
        let anchor = plane.point_from_xy(0.1, -0.2);

        let same = radial_contraction(&config, &anchor, 1.0).unwrap();
        for (a, b) in config.disks.iter().zip(&same.disks) {
            assert!(plane.distance(&a.center, &b.center) < 1e-9);
        }

        let collapsed = radial_contraction(&config, &anchor, 0.0).unwrap();
        for d in &collapsed.disks {
            assert!(plane.distance(&d.center, &anchor) < 1e-12);
        }
    }

    #[test]
    fn radial_scales_anchor_distances_and_certifies() {
        let plane = Plane::hyperbolic(1.0).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(17);
        let config = random_config(&plane, &mut rng, 6);
        let anchor = plane.point_from_xy(0.0, 0.0);
        let moved = radial_contraction(&config, &anchor, 0.7).unwrap();
        for (a, b) in config.disks.iter().zip(&moved.disks) {
            let before = plane.distance(&anchor, &a.center);
            let after = plane.distance(&anchor, &b.center);
            assert!((after - 0.7 * before).abs() < 1e-12);
        }
        let report = is_contraction(&ContractionPair {
            original: config,
            contracted: moved,
        })
        .unwrap();
        assert!(report.ok);
    }

    #[test]
    fn radial_rejects_the_sphere() {
        let plane = Plane::spherical(1.0).unwrap();
        let config =
            Configuration::new(plane, vec![disk_at(&plane, 0.1, 0.0, 0.3)]).unwrap();
        let res = radial_contraction(&config, &plane.origin(), 0.5);
        assert!(matches!(res, Err(GeomError::UnsupportedGenerator(_))));
    }

    #[test]
    fn single_point_move_respects_the_binding_distances() {
        let plane = Plane::euclidean();
        let config = Configuration::new(
            plane,
            vec![disk_at(&plane, 0.0, 0.0, 0.4), disk_at(&plane, 1.0, 0.0, 0.4)],
        )
        .unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(19);
        for _ in 0..50 {
            let moved = single_point_move(&config, 0, 200, &mut rng).unwrap();
            let d = plane.distance(&moved.disks[0].center, &config.disks[1].center);
            assert!(d <= 1.0 + 1e-12);
            assert_eq!(moved.disks[0].radius, 0.4);
        }
    }

    #[test]
    fn single_point_move_certifies_on_random_configs() {
        // tight configurations may legitimately exhaust the rejection budget;
        // they must do so loudly, and the rest must certify
        let plane = Plane::hyperbolic(1.0).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(23);
        let mut moved_count = 0;
        for _ in 0..20 {
            let config = random_config(&plane, &mut rng, 5);
            let index = rng.gen_range(0..5);
            match single_point_move(&config, index, 2_000, &mut rng) {
                Ok(moved) => {
                    let report = is_contraction(&ContractionPair {
                        original: config,
                        contracted: moved,
                    })
                    .unwrap();
                    assert!(report.ok);
                    moved_count += 1;
                }
                Err(GeomError::SamplerExhausted(_)) => {}
                Err(e) => panic!("unexpected error {e}"),
            }
        }
        assert!(moved_count >= 15, "only {moved_count} of 20 moves landed");
    }

    #[test]
    fn single_point_move_keeps_the_hemisphere_certificate() {
        let plane = Plane::spherical(1.0).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(29);
        let disks = vec![
            disk_at(&plane, 0.2, 0.1, 0.4),
            disk_at(&plane, -0.3, 0.2, 0.5),
            disk_at(&plane, 0.1, -0.3, 0.3),
        ];
        let config = Configuration::new(plane, disks).unwrap();
        for _ in 0..20 {
            let moved = single_point_move(&config, 1, 400, &mut rng).unwrap();
            assert!(moved.hemisphere_pole().is_some());
        }
    }

    #[test]
    fn lone_disk_moves_freely() {
        let plane = Plane::euclidean();
        let config = Configuration::new(plane, vec![disk_at(&plane, 0.3, 0.4, 1.0)]).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(31);
        let moved = single_point_move(&config, 0, 10, &mut rng).unwrap();
        let d = plane.distance(&moved.disks[0].center, &config.disks[0].center);
        assert!(d <= 1.0 + 1e-12);
    }

    #[test]
    fn exhausted_sampler_reports_the_budget() {
        // an over-tight third constraint leaves almost no room: three far
        // centers whose balls pairwise touch near a single point still give
        // the sampler a positive but tiny acceptance region, so zero trials
        // must exhaust
        let plane = Plane::euclidean();
        let config = Configuration::new(
            plane,
            vec![disk_at(&plane, 0.0, 0.0, 0.1), disk_at(&plane, 2.0, 0.0, 0.1)],
        )
        .unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(37);
        let res = single_point_move(&config, 0, 0, &mut rng);
        assert!(matches!(res, Err(GeomError::SamplerExhausted(0))));
    }

    #[test]
    fn composed_radial_steps_multiply() {
        let plane = Plane::euclidean();
        let mut rng = ChaCha8Rng::seed_from_u64(41);
        let config = random_config(&plane, &mut rng, 5);
        let anchor = plane.point_from_xy(0.05, 0.15);
        let two = compose(
            &config,
            &[
                Generator::Radial { anchor, lambda: 0.8 },
                Generator::Radial { anchor, lambda: 0.5 },
            ],
            &mut rng,
        )
        .unwrap();
        let one = radial_contraction(&config, &anchor, 0.4).unwrap();
        for (a, b) in two.disks.iter().zip(&one.disks) {
            assert!(plane.distance(&a.center, &b.center) < 1e-12);
        }
    }

    #[test]
    fn empty_composition_is_identity() {
        let plane = Plane::hyperbolic(1.0).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(43);
        let config = random_config(&plane, &mut rng, 3);
        let same = compose(&config, &[], &mut rng).unwrap();
        for (a, b) in config.disks.iter().zip(&same.disks) {
            assert!(plane.distance(&a.center, &b.center) == 0.0);
            assert_eq!(a.radius, b.radius);
        }
    }

    #[test]
    fn mixed_composition_certifies_on_hyperbolic_configs() {
        let plane = Plane::hyperbolic(1.0).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(47);
        let mut done = 0;
        for _ in 0..10 {
            let config = random_config(&plane, &mut rng, 4);
            let anchor = config.disks[0].center;
            let steps = [
                Generator::Radial { anchor, lambda: 0.9 },
                Generator::SinglePoint { index: 2, trials: 2_000 },
                Generator::Radial { anchor, lambda: 0.85 },
            ];
            match compose(&config, &steps, &mut rng) {
                Ok(moved) => {
                    let report = is_contraction(&ContractionPair {
                        original: config,
                        contracted: moved,
                    })
                    .unwrap();
                    assert!(report.ok);
                    done += 1;
                }
                Err(GeomError::SamplerExhausted(_)) => {}
                Err(e) => panic!("unexpected error {e}"),
            }
        }
        assert!(done >= 7, "only {done} of 10 compositions landed");
    }

    proptest! {
        #[test]
        fn radial_never_grows_a_distance(
            seed in 0u64..1_000,
            lambda in 0.0f64..=1.0,
            n in 2usize..6,
        ) {
            for plane in [Plane::hyperbolic(1.0).unwrap(), Plane::euclidean()] {
                let mut rng = ChaCha8Rng::seed_from_u64(seed);
                let config = random_config(&plane, &mut rng, n);
                let anchor = plane.point_from_xy(
                    rng.gen::<f64>() - 0.5,
                    rng.gen::<f64>() - 0.5,
                );
                let moved = radial_contraction(&config, &anchor, lambda).unwrap();
                for i in 0..n {
                    for j in i + 1..n {
                        let before = plane.distance(&config.disks[i].center, &config.disks[j].center);
                        let after = plane.distance(&moved.disks[i].center, &moved.disks[j].center);
                        prop_assert!(after <= before + EPS_GEO);
                    }
                }
            }
        }
    }
}
