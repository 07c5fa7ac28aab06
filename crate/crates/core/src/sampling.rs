//! Seeded scenario generation for the verification campaigns.
//!
//! Everything here is deterministic given the caller's generator state, so a
//! campaign that derives one generator per trial id reproduces bit-identical
//! scenarios no matter how trials are scheduled.

use crate::contraction::{compose, radial_contraction, sample_in_disk, single_point_move, Generator};
use crate::disk::Disk;
use crate::error::{GeomError, Result};
use crate::hull::Configuration;
use crate::intersect::is_nonempty;
use crate::plane::{ModelKind, Plane};
use rand::Rng;
use rand_chacha::ChaCha8Rng;

/// Random configuration: centers area-uniform in the disk of radius `spread`
/// about the origin, radii uniform in `[rmin, rmax]`. Spherical draws that
/// fail the hemisphere certificate are redrawn a bounded number of times.
pub fn random_configuration(
    plane: &Plane,
    rng: &mut ChaCha8Rng,
    n: usize,
    spread: f64,
    rmin: f64,
    rmax: f64,
) -> Result<Configuration> {
    let origin = plane.origin();
    for _ in 0..64 {
        let disks: Vec<Disk> = (0..n)
            .map(|_| {
                let center = sample_in_disk(plane, rng, &origin, spread);
                let radius = rmin + (rmax - rmin) * rng.gen::<f64>();
                Disk { center, radius }
            })
            .collect();
        match Configuration::new(*plane, disks) {
            Ok(config) => return Ok(config),
            Err(GeomError::HemisphereViolation(_)) => continue,
            Err(e) => return Err(e),
        }
    }
    Err(GeomError::SamplerExhausted(64))
}

/// Random configuration with a nonempty common intersection, by redrawing.
/// The spread is kept below the radius floor so overlaps are likely.
pub fn random_nonempty_configuration(
    plane: &Plane,
    rng: &mut ChaCha8Rng,
    n: usize,
    spread: f64,
    rmin: f64,
    rmax: f64,
) -> Result<Configuration> {
    for _ in 0..256 {
        let config = random_configuration(plane, rng, n, spread, rmin, rmax)?;
        if is_nonempty(&config)?.0 {
            return Ok(config);
        }
    }
    Err(GeomError::SamplerExhausted(256))
}

/// Random certified contraction of `config`, drawn from the generator mix:
/// radial pull (not on the sphere), a single-point move, or a short
/// composition. Rejection-sampled moves may exhaust their budget on tight
/// configurations; that error is returned for the caller to redraw.
pub fn random_contraction(
    config: &Configuration,
    rng: &mut ChaCha8Rng,
    trials: usize,
) -> Result<Configuration> {
    let plane = &config.plane;
    let n = config.disks.len();
    let spherical = plane.kind == ModelKind::Spherical;
    let mode = if spherical { 1 + rng.gen_range(0..2) } else { rng.gen_range(0..3) };
    let anchor_of = |rng: &mut ChaCha8Rng| config.disks[rng.gen_range(0..n)].center;
    match mode {
        0 => {
            let anchor = anchor_of(rng);
            radial_contraction(config, &anchor, rng.gen::<f64>())
        }
        1 => {
            // a cramped index can exhaust; give a couple of others a chance
            let mut last = GeomError::SamplerExhausted(trials);
            for _ in 0..3 {
                let index = rng.gen_range(0..n);
                match single_point_move(config, index, trials, rng) {
                    Ok(moved) => return Ok(moved),
                    Err(e @ GeomError::SamplerExhausted(_)) => last = e,
                    Err(e) => return Err(e),
                }
            }
            Err(last)
        }
        _ => {
            let steps: Vec<Generator> = if spherical {
                (0..2)
                    .map(|_| Generator::SinglePoint { index: rng.gen_range(0..n), trials })
                    .collect()
            } else {
                vec![
                    Generator::Radial { anchor: anchor_of(rng), lambda: 0.6 + 0.4 * rng.gen::<f64>() },
                    Generator::SinglePoint { index: rng.gen_range(0..n), trials },
                ]
            };
            compose(config, &steps, rng)
        }
    }
}
