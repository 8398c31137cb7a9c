//! Seeded randomness shared by the probabilistic certifiers.

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub type SeededRng = ChaCha8Rng;

pub fn seeded(seed: u64) -> SeededRng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Complex number with real and imaginary parts uniform in `[-1, 1)`.
pub fn complex_uniform(rng: &mut impl Rng) -> Complex64 {
    Complex64::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0))
}

/// Uniformly random point on the unit circle.
pub fn unit_phase(rng: &mut impl Rng) -> Complex64 {
    Complex64::from_polar(1.0, rng.random_range(0.0..std::f64::consts::TAU))
}
