//! ABC (Arnold-Beltrami-Childress) flows: eigenvalue-1 Beltrami fields.

use crate::error::{Error, Result};
use crate::field::{RealVectorField, SpectralVectorField};
use crate::grid::Grid;

/// Sample the ABC flow
/// `u = (A sin z + C cos y, B sin x + A cos z, C sin y + B cos x)`
/// on the grid and transform. The result is solenoidal, mean-zero and
/// satisfies `curl u = u` exactly in spectral representation.
///
/// The trigonometric functions have period `2*pi`, so the box length must be
/// a positive integer multiple of `2*pi` (and that multiple must be
/// resolvable on the lattice); otherwise the eigenrelation would fail and
/// the grid is rejected.
pub fn abc_flow(a: f64, b: f64, c: f64, grid: Grid) -> Result<SpectralVectorField> {
    let two_pi = 2.0 * std::f64::consts::PI;
    let q = (grid.box_length() / two_pi).round();
    let fits = q >= 1.0
        && (grid.box_length() - q * two_pi).abs() <= 1e-9 * grid.box_length()
        && (q as usize) < grid.n() / 2;
    if !fits {
        return Err(Error::BoxNotTwoPiMultiple {
            box_length: grid.box_length(),
            n: grid.n(),
        });
    }

    let real = RealVectorField::from_fn(grid, |x| {
        [
            a * x[2].sin() + c * x[1].cos(),
            b * x[0].sin() + a * x[2].cos(),
            c * x[1].sin() + b * x[0].cos(),
        ]
    });
    let mut field = SpectralVectorField::from_real(&real);
    field.enforce_reality();
    field.zero_mean();
    Ok(field)
}
