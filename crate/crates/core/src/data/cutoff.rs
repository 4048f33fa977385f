//! Smooth radial cut-off fields `chi_M` on the torus.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::grid::Grid;

/// Radial cut-off description: `chi = 1` inside radius `M` of the box
/// center, `chi = 0` outside `2M`, with a C2 monotone transition.
///
/// The support must not wrap: `2M <= L/2` (the profile and its first two
/// derivatives vanish where the support touches the half-box sphere, so
/// equality is still wrap-free).
#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
pub struct CutoffSpec {
    pub m: f64,
}

/// Sampled cut-off plus its analytic radial profile.
#[derive(Debug, Clone)]
pub struct CutoffField {
    grid: Grid,
    m: f64,
    values: Vec<f64>,
}

// Quintic smoothstep on the transition [M, 2M]: C2 at both ends, monotone,
// |chi'| <= 1.875/M. (No C2 profile on a width-M transition can keep the
// second derivative below 4/M^2; this one stays below 5.8/M^2.)
fn profile(r: f64, m: f64) -> f64 {
    if r <= m {
        1.0
    } else if r >= 2.0 * m {
        0.0
    } else {
        let s = (r - m) / m;
        1.0 - s * s * s * (10.0 - 15.0 * s + 6.0 * s * s)
    }
}

fn profile_derivative(r: f64, m: f64) -> f64 {
    if r <= m || r >= 2.0 * m {
        0.0
    } else {
        let s = (r - m) / m;
        -30.0 * s * s * (1.0 - s) * (1.0 - s) / m
    }
}

impl CutoffField {
    pub fn new(spec: CutoffSpec, grid: Grid) -> Result<Self> {
        if !(spec.m > 0.0) || !spec.m.is_finite() {
            return Err(Error::InvalidCutoff { m: spec.m });
        }
        let half_l = grid.box_length() / 2.0;
        if 2.0 * spec.m > half_l {
            return Err(Error::CutoffWraps {
                two_m: 2.0 * spec.m,
                half_l,
            });
        }
        let center = grid.box_length() / 2.0;
        let mut values = vec![0.0; grid.points()];
        for (i, j, l) in grid.iter_indices() {
            let x = grid.coordinate(i, j, l);
            let r = ((x[0] - center).powi(2) + (x[1] - center).powi(2) + (x[2] - center).powi(2))
                .sqrt();
            values[grid.index(i, j, l)] = profile(r, spec.m);
        }
        Ok(Self {
            grid,
            m: spec.m,
            values,
        })
    }

    /// The constant-one field, the formal `M -> infinity` limit.
    pub fn uniform(grid: Grid) -> Self {
        Self {
            grid,
            m: f64::INFINITY,
            values: vec![1.0; grid.points()],
        }
    }

    #[inline]
    pub fn grid(&self) -> Grid {
        self.grid
    }

    #[inline]
    pub fn radius(&self) -> f64 {
        self.m
    }

    #[inline]
    pub fn values(&self) -> &[f64] {
        &self.values
    }

    /// Radial profile value at distance `r` from the center.
    pub fn profile_at(&self, r: f64) -> f64 {
        profile(r, self.m)
    }

    /// `|d chi / dr|` at distance `r`.
    pub fn profile_slope_at(&self, r: f64) -> f64 {
        profile_derivative(r, self.m).abs()
    }

    /// Numeric maximum of `|grad chi_M|` over the grid (the gradient of a
    /// radial function is radial, so the slope magnitude is exact).
    pub fn gradient_max(&self) -> f64 {
        if !self.m.is_finite() {
            return 0.0;
        }
        let grid = self.grid;
        let center = grid.box_length() / 2.0;
        let mut best = 0.0f64;
        for (i, j, l) in grid.iter_indices() {
            let x = grid.coordinate(i, j, l);
            let r = ((x[0] - center).powi(2) + (x[1] - center).powi(2) + (x[2] - center).powi(2))
                .sqrt();
            best = best.max(profile_derivative(r, self.m).abs());
        }
        best
    }
}
