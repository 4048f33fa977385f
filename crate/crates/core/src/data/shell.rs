//! Random helical fields with spectrum supported on a spherical shell.

use num_complex::Complex64;
use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha12Rng;
use rand_distr::StandardNormal;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::field::SpectralVectorField;
use crate::grid::Grid;

/// Helicity polarity of a shell field: every mode is a `+` or `-` curl
/// eigenvector.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Polarity {
    Plus,
    Minus,
}

impl Polarity {
    pub fn sign(self) -> f64 {
        match self {
            Polarity::Plus => 1.0,
            Polarity::Minus => -1.0,
        }
    }
}

/// Spectral shell description: modes with `k0 (1 - delta) < |k| < k0 (1 + delta)`.
#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
pub struct ShellSpec {
    /// Center radius of the shell (wavenumber units).
    pub k0: f64,
    /// Relative half-width, `0 < delta < 1`.
    pub delta: f64,
    pub sign: Polarity,
    pub seed: u64,
    /// Target L2 norm of the generated field.
    pub amplitude: f64,
}

/// Orthonormal helical eigenvector `h_sign(k) = (e1 + i sign e2)/sqrt(2)`
/// where `(e1, e2, k/|k|)` is a right-handed orthonormal triple.
pub fn helical_eigenvector(k: [f64; 3], sign: f64) -> [Complex64; 3] {
    let knorm = (k[0] * k[0] + k[1] * k[1] + k[2] * k[2]).sqrt();
    let khat = [k[0] / knorm, k[1] / knorm, k[2] / knorm];
    // axis least aligned with k keeps e1 well conditioned
    let aux = if khat[2].abs() < 0.9 {
        [0.0, 0.0, 1.0]
    } else {
        [1.0, 0.0, 0.0]
    };
    let mut e1 = [
        khat[1] * aux[2] - khat[2] * aux[1],
        khat[2] * aux[0] - khat[0] * aux[2],
        khat[0] * aux[1] - khat[1] * aux[0],
    ];
    let norm = (e1[0] * e1[0] + e1[1] * e1[1] + e1[2] * e1[2]).sqrt();
    for v in &mut e1 {
        *v /= norm;
    }
    let e2 = [
        khat[1] * e1[2] - khat[2] * e1[1],
        khat[2] * e1[0] - khat[0] * e1[2],
        khat[0] * e1[1] - khat[1] * e1[0],
    ];
    let inv_sqrt2 = std::f64::consts::FRAC_1_SQRT_2;
    [
        Complex64::new(e1[0], sign * e2[0]) * inv_sqrt2,
        Complex64::new(e1[1], sign * e2[1]) * inv_sqrt2,
        Complex64::new(e1[2], sign * e2[2]) * inv_sqrt2,
    ]
}

/// Draw a random complex amplitude for every lattice mode inside the shell,
/// aligned with the `sign` helical eigenvector, impose conjugate symmetry and
/// rescale to the target L2 norm. The output is solenoidal, mean-zero and of
/// pure polarity.
pub fn shell_field(spec: &ShellSpec, grid: Grid) -> Result<SpectralVectorField> {
    if !(spec.delta > 0.0 && spec.delta < 1.0) {
        return Err(Error::InvalidShell {
            reason: "delta must lie in (0, 1)",
        });
    }
    if !(spec.k0 > 0.0) || !(spec.amplitude > 0.0) {
        return Err(Error::InvalidShell {
            reason: "k0 and amplitude must be positive",
        });
    }
    let lo = spec.k0 * (1.0 - spec.delta);
    let hi = spec.k0 * (1.0 + spec.delta);
    let mut rng = ChaCha12Rng::seed_from_u64(spec.seed);
    let mut field = SpectralVectorField::zeros(grid);
    let mut populated = 0usize;

    let half = grid.n() as i64 / 2;
    // canonical half-lattice representative of each conjugate pair, in a
    // fixed order so the construction is deterministic per seed
    for m1 in -(half - 1)..half {
        for m2 in -(half - 1)..half {
            for m3 in -(half - 1)..half {
                let canonical = m1 > 0
                    || (m1 == 0 && m2 > 0)
                    || (m1 == 0 && m2 == 0 && m3 > 0);
                if !canonical {
                    continue;
                }
                let k = [
                    grid.k_unit() * m1 as f64,
                    grid.k_unit() * m2 as f64,
                    grid.k_unit() * m3 as f64,
                ];
                let knorm = (k[0] * k[0] + k[1] * k[1] + k[2] * k[2]).sqrt();
                if knorm <= lo || knorm >= hi {
                    continue;
                }
                let re: f64 = rng.sample(StandardNormal);
                let im: f64 = rng.sample(StandardNormal);
                let amp = Complex64::new(re, im);
                let h = helical_eigenvector(k, spec.sign.sign());
                field.set_mode([m1, m2, m3], [amp * h[0], amp * h[1], amp * h[2]]);
                populated += 1;
            }
        }
    }

    if populated == 0 {
        return Err(Error::EmptyShell { lo, hi });
    }
    let norm = field.l2_norm();
    field.scale(spec.amplitude / norm);
    Ok(field)
}
