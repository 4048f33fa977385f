//! Random smooth solenoidal fields for verification runs and property tests.

use num_complex::Complex64;
use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha12Rng;
use rand_distr::StandardNormal;

use crate::field::SpectralVectorField;
use crate::grid::Grid;

/// Mixed-helicity divergence-free field with a smooth spectrum peaking at
/// moderate wavenumbers and cut at integer frequency `max_freq`, rescaled to
/// the requested L2 norm. Deterministic per seed.
pub fn random_solenoidal(grid: Grid, seed: u64, max_freq: i64, amplitude: f64) -> SpectralVectorField {
    let mut rng = ChaCha12Rng::seed_from_u64(seed);
    let mut field = SpectralVectorField::zeros(grid);
    let half = grid.n() as i64 / 2;
    let mf = max_freq.min(half - 1);
    let peak = (mf as f64 / 2.0).max(1.0);

    for m1 in -mf..=mf {
        for m2 in -mf..=mf {
            for m3 in -mf..=mf {
                let canonical = m1 > 0
                    || (m1 == 0 && m2 > 0)
                    || (m1 == 0 && m2 == 0 && m3 > 0);
                if !canonical {
                    continue;
                }
                let msq = (m1 * m1 + m2 * m2 + m3 * m3) as f64;
                if msq > (mf * mf) as f64 {
                    continue;
                }
                let envelope = msq * (-msq / (peak * peak)).exp();
                let mut c = [Complex64::ZERO; 3];
                for v in &mut c {
                    let re: f64 = rng.sample(StandardNormal);
                    let im: f64 = rng.sample(StandardNormal);
                    *v = Complex64::new(re, im) * envelope;
                }
                field.set_mode([m1, m2, m3], c);
            }
        }
    }

    let mut field = field.leray_project();
    field.zero_mean();
    let norm = field.l2_norm();
    if norm > 0.0 {
        field.scale(amplitude / norm);
    }
    field
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn is_solenoidal_real_and_normalized() {
        let grid = Grid::new(16, 2.0 * std::f64::consts::PI).unwrap();
        let u = random_solenoidal(grid, 11, 5, 3.0);
        assert!(u.divergence_residual() < 1e-13);
        assert!((u.l2_norm() - 3.0).abs() < 1e-12);
        assert!(u.mean_is_zero());
        let real = u.to_real();
        let round = SpectralVectorField::from_real(&real);
        for d in 0..3 {
            for (a, b) in round.component(d).iter().zip(u.component(d)) {
                assert!((a - b).norm() < 1e-13);
            }
        }
    }

    #[test]
    fn different_seeds_differ() {
        let grid = Grid::new(16, 2.0 * std::f64::consts::PI).unwrap();
        let a = random_solenoidal(grid, 1, 5, 1.0);
        let b = random_solenoidal(grid, 2, 5, 1.0);
        let diff = &a - &b;
        assert!(diff.l2_norm() > 0.1);
    }
}
