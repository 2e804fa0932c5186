//! Planar identities used by the distance arguments: chord projections,
//! midpoint directions, and radial projection onto a circle.
//!
//! Everything here is binary64; the identities involve square roots, so each
//! operation states its tolerance.

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha12Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub const DIRECTION_TOL: f64 = 1e-12;
pub const CHORD_REL_TOL: f64 = 1e-9;
pub const SPHERE_REL_TOL: f64 = 1e-12;

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct PlanarPoint {
    pub x: f64,
    pub y: f64,
}

impl PlanarPoint {
    pub fn new(x: f64, y: f64) -> PlanarPoint {
        PlanarPoint { x, y }
    }

    pub fn sub(&self, other: &PlanarPoint) -> PlanarPoint {
        PlanarPoint::new(self.x - other.x, self.y - other.y)
    }

    pub fn add(&self, other: &PlanarPoint) -> PlanarPoint {
        PlanarPoint::new(self.x + other.x, self.y + other.y)
    }

    pub fn scale(&self, k: f64) -> PlanarPoint {
        PlanarPoint::new(k * self.x, k * self.y)
    }

    pub fn norm(&self) -> f64 {
        self.x.hypot(self.y)
    }

    pub fn dist(&self, other: &PlanarPoint) -> f64 {
        self.sub(other).norm()
    }
}

/// A unit vector; the constructor normalizes and rejects near-zero input.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Direction {
    pub x: f64,
    pub y: f64,
}

impl Direction {
    pub fn new(x: f64, y: f64) -> Result<Direction> {
        let n = x.hypot(y);
        if !n.is_finite() || n < 1e-300 {
            return Err(Error::Singularity("cannot normalize a zero vector".into()));
        }
        Ok(Direction { x: x / n, y: y / n })
    }

    pub fn towards(from: &PlanarPoint, to: &PlanarPoint) -> Result<Direction> {
        let d = to.sub(from);
        Direction::new(d.x, d.y)
    }

    pub fn norm_error(&self) -> f64 {
        (self.x.hypot(self.y) - 1.0).abs()
    }
}

/// Scalar projection of `x` onto the line through the origin in direction `e`.
pub fn project(e: &Direction, x: &PlanarPoint) -> f64 {
    e.x * x.x + e.y * x.y
}

fn equal_radii(x: &PlanarPoint, y: &PlanarPoint, z: &PlanarPoint) -> Result<f64> {
    let ry = x.dist(y);
    let rz = x.dist(z);
    if (ry - rz).abs() > CHORD_REL_TOL * ry.max(1.0) {
        return Err(Error::contract(format!(
            "y and z must be equidistant from x (|{ry} - {rz}| too large)"
        )));
    }
    if ry == 0.0 {
        return Err(Error::Singularity("x coincides with y".into()));
    }
    Ok(ry)
}

/// For `y`, `z` on a common circle around `x`: the measured chord projection
/// gap `|p_e1 y - p_e1 z|` along `e1 = (y-x)/|y-x|` and its closed form
/// `|y-z|^2 / (2 |x-y|)`.
pub fn chord_projection_gap(
    x: &PlanarPoint,
    y: &PlanarPoint,
    z: &PlanarPoint,
) -> Result<(f64, f64)> {
    let radius = equal_radii(x, y, z)?;
    let chord = y.dist(z);
    if chord == 0.0 {
        return Ok((0.0, 0.0));
    }
    let e1 = Direction::towards(x, y)?;
    let measured = (project(&e1, y) - project(&e1, z)).abs();
    let predicted = chord * chord / (2.0 * radius);
    Ok((measured, predicted))
}

/// For `y`, `z` on a common circle around `x`: the gap between the direction
/// to `y` and the direction to the chord midpoint, and its strict upper bound
/// `|y-z| / |x-y|`.
pub fn midpoint_direction_gap(
    x: &PlanarPoint,
    y: &PlanarPoint,
    z: &PlanarPoint,
) -> Result<(f64, f64)> {
    let radius = equal_radii(x, y, z)?;
    let chord = y.dist(z);
    if chord == 0.0 {
        return Err(Error::contract("y and z must be distinct"));
    }
    let midpoint = y.add(z).scale(0.5);
    let e1 = Direction::towards(x, y)?;
    let e3 = Direction::towards(x, &midpoint)?;
    let gap = ((e1.x - e3.x).powi(2) + (e1.y - e3.y).powi(2)).sqrt();
    Ok((gap, chord / radius))
}

/// Radial projection of `p` onto the circle of radius `d` around `x`:
/// `y = p + (d - |x-p|) (p-x)/|x-p|`, so `|x-y| = d` and
/// `|y-p| = |d - |x-p||`.
pub fn project_to_sphere(x: &PlanarPoint, d: f64, p: &PlanarPoint) -> Result<PlanarPoint> {
    if !(d > 0.0) || !d.is_finite() {
        return Err(Error::domain("radius must be positive and finite"));
    }
    let offset = p.sub(x);
    let dist = offset.norm();
    if dist == 0.0 {
        return Err(Error::Singularity("p coincides with the center x".into()));
    }
    Ok(p.add(&offset.scale((d - dist) / dist)))
}

// ---------------------------------------------------------------------------
// Randomized check harness.
// ---------------------------------------------------------------------------

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct GeometryCheckReport {
    pub trials: u64,
    pub seed: u64,
    pub chord_identity_failures: u64,
    pub midpoint_bound_failures: u64,
    pub sphere_projection_failures: u64,
    pub max_chord_rel_err: f64,
    pub pass: bool,
}

/// Seeded randomized sweep of the three identities over circles with radii
/// spanning `[1e-3, 1e3]`.
///
/// Each comparison is relative at the stated tolerance, with an absolute
/// floor at the binary64 noise level of the coordinates involved: below that
/// floor a subtraction of nearby ~10-magnitude coordinates carries no signal.
pub fn geometry_check(trials: u64, seed: u64) -> GeometryCheckReport {
    let mut rng = ChaCha12Rng::seed_from_u64(seed);
    let mut chord_failures = 0;
    let mut midpoint_failures = 0;
    let mut sphere_failures = 0;
    let mut max_rel = 0.0f64;

    for _ in 0..trials {
        let cx = rng.random_range(-10.0..10.0);
        let cy = rng.random_range(-10.0..10.0);
        let radius = 10f64.powf(rng.random_range(-3.0..3.0));
        let a1 = rng.random_range(0.0..std::f64::consts::TAU);
        let a2 = rng.random_range(0.0..std::f64::consts::TAU);
        let x = PlanarPoint::new(cx, cy);
        let y = PlanarPoint::new(cx + radius * a1.cos(), cy + radius * a1.sin());
        let z = PlanarPoint::new(cx + radius * a2.cos(), cy + radius * a2.sin());
        let coord_scale = x.norm().max(y.norm()).max(z.norm()).max(radius);
        let noise_floor = 64.0 * f64::EPSILON * coord_scale;

        let (measured, predicted) = chord_projection_gap(&x, &y, &z).unwrap();
        let err = (measured - predicted).abs();
        if err > (CHORD_REL_TOL * predicted).max(noise_floor) {
            chord_failures += 1;
        }
        if predicted > noise_floor / CHORD_REL_TOL {
            max_rel = max_rel.max(err / predicted);
        }

        if y.dist(&z) > noise_floor {
            let (gap, bound) = midpoint_direction_gap(&x, &y, &z).unwrap();
            if !(gap < bound) {
                midpoint_failures += 1;
            }
        }

        // Radial projection onto a fresh circle.
        let d = 10f64.powf(rng.random_range(-3.0..3.0));
        let p = PlanarPoint::new(rng.random_range(-10.0..10.0), rng.random_range(-10.0..10.0));
        if p.dist(&x) > 0.0 {
            let scale = d.max(x.dist(&p));
            let projected = project_to_sphere(&x, d, &p).unwrap();
            let radial_err = (x.dist(&projected) - d).abs() / scale;
            let residual_err = (projected.dist(&p) - (d - x.dist(&p)).abs()).abs() / scale;
            let twice = project_to_sphere(&x, d, &projected).unwrap();
            let idempotent_err = twice.dist(&projected) / scale;
            if radial_err > SPHERE_REL_TOL
                || residual_err > SPHERE_REL_TOL
                || idempotent_err > SPHERE_REL_TOL
            {
                sphere_failures += 1;
            }
        }
    }

    GeometryCheckReport {
        trials,
        seed,
        chord_identity_failures: chord_failures,
        midpoint_bound_failures: midpoint_failures,
        sphere_projection_failures: sphere_failures,
        max_chord_rel_err: max_rel,
        pass: chord_failures == 0 && midpoint_failures == 0 && sphere_failures == 0,
    }
}
