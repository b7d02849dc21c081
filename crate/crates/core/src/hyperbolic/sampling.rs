//! Seeded sampling of points and group elements for the verification runs.

use std::f64::consts::{PI, TAU};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::lifted::{LiftedIsometry, UpperHalfPoint};
use super::mobius::MobiusElement;

pub type SampleRng = ChaCha8Rng;

pub fn rng(seed: u64) -> SampleRng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// `x` in [-2, 2], `log y` in [-1.5, 1.5], `t` in [-pi, pi].
pub fn sample_point<R: Rng>(rng: &mut R) -> UpperHalfPoint {
    UpperHalfPoint {
        x: rng.gen_range(-2.0..=2.0),
        y: rng.gen_range(-1.5f64..=1.5).exp(),
        t: rng.gen_range(-PI..=PI),
    }
}

pub fn sample_points<R: Rng>(rng: &mut R, count: usize) -> Vec<UpperHalfPoint> {
    (0..count).map(|_| sample_point(rng)).collect()
}

/// Entries uniform in [-2, 2], first row negated if the determinant is
/// negative, then scaled to determinant 1. Nearly singular draws are redrawn.
pub fn sample_mobius<R: Rng>(rng: &mut R) -> MobiusElement {
    loop {
        let [a, b, c, d]: [f64; 4] = std::array::from_fn(|_| rng.gen_range(-2.0..=2.0));
        let det = a * d - b * c;
        if det.abs() < 0.1 {
            continue;
        }
        let (a, b) = if det < 0.0 { (-a, -b) } else { (a, b) };
        if let Ok(m) = MobiusElement::normalized(a, b, c, d) {
            return m;
        }
    }
}

/// A sampled base element with a lift shifted by a random central power in -2..=2.
pub fn sample_lifted<R: Rng>(rng: &mut R) -> LiftedIsometry {
    let base = sample_mobius(rng);
    let k: i32 = rng.gen_range(-2..=2);
    let p = LiftedIsometry::principal(base);
    LiftedIsometry {
        base,
        winding_offset: p.winding_offset + TAU * k as f64,
    }
}
