//! Counter-addressed Gaussian measurement noise.
//!
//! Sample `(seed, channel, step)` is drawn from ChaCha8 stream `channel`,
//! positioned at word `4 * step`, so any sample can be regenerated on its
//! own regardless of the order in which other samples were requested.

use rand_chacha::ChaCha8Rng;
use rand_core::{RngCore, SeedableRng};

#[derive(Debug, Clone, PartialEq)]
pub struct NoiseSpec {
    /// Standard deviation per measurement channel; channels beyond the end
    /// of the list are noise free.
    pub sigma: Vec<f64>,
    pub seed: u64,
}

impl NoiseSpec {
    pub fn none() -> Self {
        Self { sigma: Vec::new(), seed: 0 }
    }

    pub fn uniform(channels: usize, sigma: f64, seed: u64) -> Self {
        Self {
            sigma: vec![sigma; channels],
            seed,
        }
    }

    pub fn on_channel(channels: usize, channel: usize, sigma: f64, seed: u64) -> Self {
        let mut s = vec![0.0; channels];
        s[channel] = sigma;
        Self { sigma: s, seed }
    }

    pub fn sigma(&self, channel: usize) -> f64 {
        self.sigma.get(channel).copied().unwrap_or(0.0)
    }

    pub fn is_silent(&self) -> bool {
        self.sigma.iter().all(|&s| s == 0.0)
    }
}

/// Zero-mean Gaussian sample with deviation `spec.sigma(channel)`.
pub fn gaussian_noise(spec: &NoiseSpec, channel: usize, step: u64) -> f64 {
    let sigma = spec.sigma(channel);
    if sigma == 0.0 {
        return 0.0;
    }
    sigma * standard_normal(spec.seed, channel as u64, step)
}

/// Box-Muller transform over two 64-bit words of the addressed stream.
pub fn standard_normal(seed: u64, channel: u64, step: u64) -> f64 {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(channel);
    rng.set_word_pos(u128::from(step) * 4);
    // 53-bit uniforms; u1 in (0, 1] keeps the logarithm finite
    let u1 = ((rng.next_u64() >> 11) + 1) as f64 / (1u64 << 53) as f64;
    let u2 = (rng.next_u64() >> 11) as f64 / (1u64 << 53) as f64;
    (-2.0 * u1.ln()).sqrt() * (std::f64::consts::TAU * u2).cos()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn zero_sigma_is_silent() {
        let spec = NoiseSpec::uniform(2, 0.0, 7);
        assert!((0..100).all(|k| gaussian_noise(&spec, 1, k) == 0.0));
        assert_eq!(gaussian_noise(&spec, 5, 3), 0.0);
    }

    #[test]
    fn addressing_is_order_independent() {
        let spec = NoiseSpec::uniform(3, 1.0, 42);
        let forward: Vec<f64> = (0..50).map(|k| gaussian_noise(&spec, 0, k)).collect();
        let backward: Vec<f64> = (0..50).rev().map(|k| gaussian_noise(&spec, 0, k)).collect();
        assert!(forward.iter().eq(backward.iter().rev()));
        assert_ne!(gaussian_noise(&spec, 0, 7), gaussian_noise(&spec, 1, 7));
        assert_ne!(gaussian_noise(&spec, 0, 7), gaussian_noise(&spec, 0, 8));
    }

    #[test]
    fn pinned_value() {
        // regression pin for the generator: any change here alters every
        // recorded noisy trace
        let spec = NoiseSpec::uniform(1, 1.0, 42);
        let v = gaussian_noise(&spec, 0, 7);
        assert_eq!(v.to_bits(), PINNED_SEED42_CH0_K7);
    }

    const PINNED_SEED42_CH0_K7: u64 = 4_599_842_989_988_990_251;

    #[test]
    fn moments() {
        let n = 1_000_000u64;
        let spec = NoiseSpec::uniform(1, 1.0, 2024);
        let (mut sum, mut sq) = (0.0, 0.0);
        for k in 0..n {
            let x = gaussian_noise(&spec, 0, k);
            sum += x;
            sq += x * x;
        }
        let mean = sum / n as f64;
        let sd = (sq / n as f64 - mean * mean).sqrt();
        assert!(mean.abs() < 4.0 / (n as f64).sqrt(), "mean {mean}");
        assert!((sd - 1.0).abs() < 0.01, "sd {sd}");
    }
}
