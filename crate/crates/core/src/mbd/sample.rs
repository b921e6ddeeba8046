use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::{pmf, ModelParams};

/// Inverse-cdf sampler over a precomputed table.
#[derive(Debug, Clone)]
pub struct Sampler {
    cumulative: Vec<f64>,
}

impl Sampler {
    pub fn new(params: &ModelParams) -> Self {
        let mut cumulative = pmf(params).cdf_table();
        if let Some(last) = cumulative.last_mut() {
            *last = 1.0;
        }
        Self { cumulative }
    }

    /// Smallest `y` with `F(y) > u`, `u ~ U[0, 1)`.
    pub fn draw<R: Rng + ?Sized>(&self, rng: &mut R) -> usize {
        let u: f64 = rng.random();
        self.cumulative.partition_point(|&c| c <= u)
    }
}

/// `count` i.i.d. draws of `Y`, reproducible from `seed`.
pub fn sample(params: &ModelParams, count: usize, seed: u64) -> Vec<usize> {
    let sampler = Sampler::new(params);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..count).map(|_| sampler.draw(&mut rng)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::mbd::moments;

    fn frequencies(draws: &[usize], n: usize) -> Vec<f64> {
        let mut f = vec![0.0; n + 1];
        for &d in draws {
            f[d] += 1.0;
        }
        f.iter().map(|c| c / draws.len() as f64).collect()
    }

    #[test]
    fn degenerate_psi() {
        let p = ModelParams::new(6, 0.0, 2.0).unwrap();
        assert!(sample(&p, 1000, 3).iter().all(|&y| y == 0));
        let p = ModelParams::new(6, 1.0, 2.0).unwrap();
        assert!(sample(&p, 1000, 3).iter().all(|&y| y == 6));
    }

    #[test]
    fn reproducible() {
        let p = ModelParams::new(8, 0.4, 0.9).unwrap();
        assert_eq!(sample(&p, 500, 11), sample(&p, 500, 11));
        assert_ne!(sample(&p, 500, 11), sample(&p, 500, 12));
    }

    #[test]
    fn binomial_frequencies() {
        let count = 100_000;
        let p = ModelParams::new(3, 0.6, 1.0).unwrap();
        let f = frequencies(&sample(&p, count, 2024), 3);
        for (fy, py) in f.iter().zip([0.064, 0.288, 0.432, 0.216]) {
            let bound = 3.0 * (py * (1.0 - py) / count as f64).sqrt();
            assert!((fy - py).abs() <= bound, "{fy} vs {py}");
        }
    }

    #[test]
    fn dependent_mean() {
        let count = 100_000;
        let p = ModelParams::new(7, 0.4, 1.6).unwrap();
        let draws = sample(&p, count, 99);
        let mean = draws.iter().sum::<usize>() as f64 / count as f64;
        let m = moments(&p);
        assert!((mean - m.mean).abs() <= 3.0 * (m.variance / count as f64).sqrt());
    }
}
