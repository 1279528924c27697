//! Test-only oracles, independent of the library's code paths.

#![allow(dead_code)]

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha20Rng;

pub const INV_SQRT_2PI: f64 = std::f64::consts::FRAC_2_SQRT_PI * std::f64::consts::FRAC_1_SQRT_2 * 0.5;

pub fn normal_density(x: f64) -> f64 {
    INV_SQRT_2PI * (-0.5 * x * x).exp()
}

/// Composite Simpson rule with `n` (even) panels.
pub fn simpson<F: Fn(f64) -> f64>(f: F, a: f64, b: f64, n: usize) -> f64 {
    assert!(n.is_multiple_of(2));
    let h = (b - a) / n as f64;
    let mut s = f(a) + f(b);
    for i in 1..n {
        let x = a + h * i as f64;
        s += if i % 2 == 1 { 4.0 } else { 2.0 } * f(x);
    }
    s * h / 3.0
}

/// Φ(x) for moderate |x| by integrating the density from 0.
pub fn phi_by_quadrature(x: f64) -> f64 {
    0.5 + simpson(normal_density, 0.0, x, 20_000)
}

/// E[X | lo < X < hi] for X ~ N(mu, sigma²) by quadrature of x φ and φ,
/// with infinite ends cut at 40 sd.
pub fn trunc_mean_by_quadrature(mu: f64, sigma: f64, lo: f64, hi: f64) -> f64 {
    let a = ((lo - mu) / sigma).max(-40.0);
    let b = ((hi - mu) / sigma).min(40.0);
    let n = 200_000;
    let mass = simpson(normal_density, a, b, n);
    let first = simpson(|z| z * normal_density(z), a, b, n);
    mu + sigma * first / mass
}

/// Seeded standard normal draws by Box-Muller.
pub struct BoxMuller {
    rng: ChaCha20Rng,
    spare: Option<f64>,
}

impl BoxMuller {
    pub fn new(seed: u64) -> Self {
        Self {
            rng: ChaCha20Rng::seed_from_u64(seed),
            spare: None,
        }
    }

    pub fn next(&mut self) -> f64 {
        if let Some(z) = self.spare.take() {
            return z;
        }
        let u1: f64 = 1.0 - self.rng.gen::<f64>();
        let u2: f64 = self.rng.gen::<f64>();
        let r = (-2.0 * u1.ln()).sqrt();
        let t = 2.0 * std::f64::consts::PI * u2;
        self.spare = Some(r * t.sin());
        r * t.cos()
    }
}

/// Binomial standard error of a proportion `p` over `n` trials.
pub fn binom_se(p: f64, n: usize) -> f64 {
    (p * (1.0 - p) / n as f64).sqrt()
}
