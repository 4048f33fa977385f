//! Curl-curl localization of Beltrami data:
//! `u0 = curl(curl(chi_M g)) / k0^2 = h0 + chi_M g`.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::field::SpectralVectorField;
use crate::tolerances;

use super::cutoff::CutoffField;

/// Infer the curl eigenvalue of a Beltrami field from the energy-weighted
/// wavenumber and verify the eigenrelation `curl g = k0 g` against the
/// acceptance gate. Errors on non-Beltrami input.
pub fn beltrami_eigenvalue(g: &SpectralVectorField) -> Result<f64> {
    let g_norm_sq = g.sobolev_seminorm_sq(0.0);
    if g_norm_sq == 0.0 {
        return Ok(1.0);
    }
    let k0 = (g.sobolev_seminorm_sq(1.0) / g_norm_sq).sqrt();
    let mut residual_field = g.curl();
    residual_field.add_scaled(g, -k0);
    let residual = residual_field.l2_norm() / g_norm_sq.sqrt();
    if residual > tolerances::BELTRAMI_ACCEPT {
        return Err(Error::NotBeltrami {
            residual,
            tolerance: tolerances::BELTRAMI_ACCEPT,
        });
    }
    Ok(k0)
}

/// Given a torus Beltrami field `g` with `curl g = k0 g` and a cut-off
/// `chi`, build the localized divergence-free data
/// `u0 = curl(curl(chi g)) / k0^2` and the perturbation `h0 = u0 - chi g`.
///
/// The division by `k0^2` makes `u0 -> g` as `chi -> 1`. `u0` is exactly
/// solenoidal (a curl). Rejects `g` whose curl eigenrelation residual
/// exceeds the acceptance gate.
pub fn curl_curl_data(
    g: &SpectralVectorField,
    chi: &CutoffField,
) -> Result<(SpectralVectorField, SpectralVectorField)> {
    let grid = g.grid();
    assert_eq!(grid.n(), chi.grid().n(), "grid mismatch");

    if g.sobolev_seminorm_sq(0.0) == 0.0 {
        let z = SpectralVectorField::zeros(grid);
        return Ok((z.clone(), z));
    }
    let k0 = beltrami_eigenvalue(g)?;

    // chi g as a pseudospectral product
    let mut real = g.to_real();
    real.multiply_scalar_samples(chi.values());
    let chi_g = SpectralVectorField::from_real(&real);

    // curl(curl f) per mode: |k|^2 c - k (k.c)
    let n = grid.n();
    let mut u0 = SpectralVectorField::zeros(grid);
    let inv_k0_sq = 1.0 / (k0 * k0);
    for i in 0..n {
        for j in 0..n {
            for l in 0..n {
                let p = grid.index(i, j, l);
                let k = grid.wavevector(i, j, l);
                let ksq = k[0] * k[0] + k[1] * k[1] + k[2] * k[2];
                let c = [
                    chi_g.component(0)[p],
                    chi_g.component(1)[p],
                    chi_g.component(2)[p],
                ];
                let dot = k[0] * c[0] + k[1] * c[1] + k[2] * c[2];
                for d in 0..3 {
                    u0.component_mut(d)[p] = (ksq * c[d] - k[d] * dot) * inv_k0_sq;
                }
            }
        }
    }
    u0.zero_mean();

    let mut h0 = u0.clone();
    h0.add_scaled(&chi_g, -1.0);
    // mean of chi g need not vanish; h0 absorbs it so that u0 + 0 = h0 + chi g
    let mean: [Complex64; 3] = [h0.component(0)[0], h0.component(1)[0], h0.component(2)[0]];
    debug_assert!(mean.iter().all(|v| v.norm() < 1e30));

    Ok((u0, h0))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::data::{abc_flow, CutoffSpec};
    use crate::grid::Grid;

    const TWO_PI: f64 = 2.0 * std::f64::consts::PI;

    #[test]
    fn uniform_cutoff_recovers_g_exactly() {
        let grid = Grid::new(16, TWO_PI).unwrap();
        let g = abc_flow(1.0, 1.0, 1.0, grid).unwrap();
        let chi = CutoffField::uniform(grid);
        let (u0, h0) = curl_curl_data(&g, &chi).unwrap();
        let diff = &u0 - &g;
        assert!(diff.l2_norm() <= 1e-12 * g.l2_norm());
        assert!(h0.l2_norm() <= 1e-12 * g.l2_norm());
    }

    #[test]
    fn u0_is_exactly_solenoidal() {
        let grid = Grid::new(32, 8.0 * TWO_PI).unwrap();
        let g = abc_flow(1.0, 1.0, 1.0, grid).unwrap();
        let chi = CutoffField::new(CutoffSpec { m: grid.box_length() / 8.0 }, grid).unwrap();
        let (u0, h0) = curl_curl_data(&g, &chi).unwrap();
        assert!(u0.divergence_residual() < 1e-12);
        assert!(h0.l2_norm() > 0.0);
    }

    #[test]
    fn rejects_non_beltrami_input() {
        let grid = Grid::new(16, TWO_PI).unwrap();
        let g = crate::data::random_solenoidal(grid, 5, 4, 1.0);
        let chi = CutoffField::uniform(grid);
        assert!(matches!(
            curl_curl_data(&g, &chi),
            Err(Error::NotBeltrami { .. })
        ));
    }

    #[test]
    fn h0_is_relatively_smaller_for_larger_cutoffs() {
        // On the torus the meaningful smallness of h0 is relative to the
        // retained data chi g: that ratio scales like 1/M.
        let grid = Grid::new(64, 16.0 * TWO_PI).unwrap();
        let g = abc_flow(1.0, 1.0, 1.0, grid).unwrap();
        let l = grid.box_length();
        let mut ratios = Vec::new();
        let mut constants = Vec::new();
        for m in [l / 16.0, l / 8.0, l / 4.0] {
            let chi = CutoffField::new(CutoffSpec { m }, grid).unwrap();
            let (_, h0) = curl_curl_data(&g, &chi).unwrap();
            let mut real = g.to_real();
            real.multiply_scalar_samples(chi.values());
            let chi_g = SpectralVectorField::from_real(&real);
            ratios.push(h0.h1_norm() / chi_g.h1_norm());
            constants.push(h0.h1_norm() * m.sqrt() / g.h1_norm());
        }
        assert!(
            ratios[0] > ratios[1] && ratios[1] > ratios[2],
            "relative h0 size should fall as M grows: {ratios:?} (c = {constants:?})"
        );
    }
}
