//! Vector fields on the torus in spectral and real-space representation.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::fft;
use crate::grid::Grid;

/// A 3-component velocity field stored as physical Fourier coefficients
/// `c_k` (one complex 3-vector per lattice wavevector), so that
/// `u(x) = sum_k c_k e^{i k.x}`.
///
/// Invariants maintained by every constructor in this crate:
/// - reality: `c(-k) = conj(c(k))`,
/// - mean zero: `c(0) = 0` (negative powers of `D = sqrt(-Laplace)` stay
///   well defined).
///
/// Solenoidality is a property of particular constructions and operators and
/// is checked where an operation requires it, see [`divergence_residual`].
///
/// [`divergence_residual`]: SpectralVectorField::divergence_residual
#[derive(Debug, Clone)]
pub struct SpectralVectorField {
    grid: Grid,
    comps: [Vec<Complex64>; 3],
}

/// Real-space samples of a 3-component field on the lattice.
#[derive(Debug, Clone)]
pub struct RealVectorField {
    grid: Grid,
    comps: [Vec<f64>; 3],
}

impl SpectralVectorField {
    pub fn zeros(grid: Grid) -> Self {
        let len = grid.points();
        Self {
            grid,
            comps: [
                vec![Complex64::ZERO; len],
                vec![Complex64::ZERO; len],
                vec![Complex64::ZERO; len],
            ],
        }
    }

    /// Build from raw per-component coefficient buffers (row-major layout).
    pub fn from_components(grid: Grid, comps: [Vec<Complex64>; 3]) -> Self {
        for c in &comps {
            assert_eq!(c.len(), grid.points(), "component length mismatch");
        }
        Self { grid, comps }
    }

    #[inline]
    pub fn grid(&self) -> Grid {
        self.grid
    }

    #[inline]
    pub fn component(&self, d: usize) -> &[Complex64] {
        &self.comps[d]
    }

    #[inline]
    pub fn component_mut(&mut self, d: usize) -> &mut [Complex64] {
        &mut self.comps[d]
    }

    pub fn components_mut(&mut self) -> [&mut Vec<Complex64>; 3] {
        let [a, b, c] = &mut self.comps;
        [a, b, c]
    }

    /// Coefficient at signed integer frequency `m`.
    pub fn mode(&self, m: [i64; 3]) -> [Complex64; 3] {
        let p = self.mode_index(m);
        [self.comps[0][p], self.comps[1][p], self.comps[2][p]]
    }

    /// Set the coefficient at `m` and its conjugate partner at `-m`,
    /// preserving reality. `m = 0` sets the (normally zero) mean mode.
    pub fn set_mode(&mut self, m: [i64; 3], c: [Complex64; 3]) {
        let p = self.mode_index(m);
        let q = self.mode_index([-m[0], -m[1], -m[2]]);
        for d in 0..3 {
            self.comps[d][p] = c[d];
            if q != p {
                self.comps[d][q] = c[d].conj();
            }
        }
    }

    fn mode_index(&self, m: [i64; 3]) -> usize {
        let n = self.grid.n() as i64;
        let wrap = |v: i64| -> usize {
            debug_assert!(v >= -n / 2 && v < n / 2, "frequency {v} out of range");
            ((v % n + n) % n) as usize
        };
        self.grid.index(wrap(m[0]), wrap(m[1]), wrap(m[2]))
    }

    /// Transform real-space samples to coefficients.
    pub fn from_real(real: &RealVectorField) -> Self {
        let grid = real.grid;
        let n = grid.n();
        let mut comps: [Vec<Complex64>; 3] = [
            real.comps[0].iter().map(|&v| Complex64::new(v, 0.0)).collect(),
            real.comps[1].iter().map(|&v| Complex64::new(v, 0.0)).collect(),
            real.comps[2].iter().map(|&v| Complex64::new(v, 0.0)).collect(),
        ];
        {
            let mut bufs: Vec<&mut [Complex64]> = comps.iter_mut().map(|c| c.as_mut_slice()).collect();
            fft::forward3_many(&mut bufs, n);
        }
        let mut out = Self { grid, comps };
        out.zero_mean();
        out
    }

    /// Evaluate the field on the lattice. Reality of the result is enforced
    /// by keeping only the real part of the inverse transform.
    pub fn to_real(&self) -> RealVectorField {
        let n = self.grid.n();
        let mut work: [Vec<Complex64>; 3] = [
            self.comps[0].clone(),
            self.comps[1].clone(),
            self.comps[2].clone(),
        ];
        {
            let mut bufs: Vec<&mut [Complex64]> = work.iter_mut().map(|c| c.as_mut_slice()).collect();
            fft::inverse3_many(&mut bufs, n);
        }
        RealVectorField {
            grid: self.grid,
            comps: [
                work[0].iter().map(|v| v.re).collect(),
                work[1].iter().map(|v| v.re).collect(),
                work[2].iter().map(|v| v.re).collect(),
            ],
        }
    }

    /// Force exact conjugate symmetry by averaging each `(k, -k)` pair.
    pub fn enforce_reality(&mut self) {
        let grid = self.grid;
        let n = grid.n();
        for i in 0..n {
            for j in 0..n {
                for l in 0..n {
                    let p = grid.index(i, j, l);
                    let (ci, cj, cl) = grid.conjugate_index(i, j, l);
                    let q = grid.index(ci, cj, cl);
                    if p < q {
                        for d in 0..3 {
                            let avg = 0.5 * (self.comps[d][p] + self.comps[d][q].conj());
                            self.comps[d][p] = avg;
                            self.comps[d][q] = avg.conj();
                        }
                    } else if p == q {
                        // self-conjugate mode: must be real
                        for d in 0..3 {
                            self.comps[d][p] = Complex64::new(self.comps[d][p].re, 0.0);
                        }
                    }
                }
            }
        }
    }

    pub fn zero_mean(&mut self) {
        for d in 0..3 {
            self.comps[d][0] = Complex64::ZERO;
        }
    }

    pub fn mean_is_zero(&self) -> bool {
        (0..3).all(|d| self.comps[d][0] == Complex64::ZERO)
    }

    /// Relative divergence residual `||k.c(k)|| / ||c||` in coefficient l2.
    pub fn divergence_residual(&self) -> f64 {
        let grid = self.grid;
        let n = grid.n();
        let mut div_sq = 0.0;
        let mut norm_sq = 0.0;
        for i in 0..n {
            for j in 0..n {
                for l in 0..n {
                    let p = grid.index(i, j, l);
                    let k = grid.wavevector(i, j, l);
                    let mut dot = Complex64::ZERO;
                    for d in 0..3 {
                        let c = self.comps[d][p];
                        dot += k[d] * c;
                        norm_sq += c.norm_sqr();
                    }
                    div_sq += dot.norm_sqr();
                }
            }
        }
        if norm_sq == 0.0 {
            0.0
        } else {
            (div_sq / norm_sq).sqrt()
        }
    }

    /// Sum of squared coefficient magnitudes over all modes and components.
    pub fn coeff_norm_sq(&self) -> f64 {
        self.comps
            .iter()
            .map(|c| c.iter().map(|v| v.norm_sqr()).sum::<f64>())
            .sum()
    }

    /// Zero every mode removed by the 2/3-rule dealias mask.
    pub fn apply_dealias_mask(&mut self) {
        let grid = self.grid;
        let n = grid.n();
        for i in 0..n {
            let ki = grid.dealias_keep(grid.freq(i));
            for j in 0..n {
                let kj = ki && grid.dealias_keep(grid.freq(j));
                for l in 0..n {
                    if !(kj && grid.dealias_keep(grid.freq(l))) {
                        let p = grid.index(i, j, l);
                        for d in 0..3 {
                            self.comps[d][p] = Complex64::ZERO;
                        }
                    }
                }
            }
        }
    }

    pub fn scale(&mut self, a: f64) {
        for c in &mut self.comps {
            for v in c.iter_mut() {
                *v *= a;
            }
        }
    }

    /// Multiply every coefficient by a per-mode real factor (diagonal
    /// Fourier multiplier, e.g. a viscous semigroup).
    pub fn apply_mode_multiplier(&mut self, factors: &[f64]) {
        assert_eq!(factors.len(), self.grid.points());
        for c in &mut self.comps {
            for (v, &f) in c.iter_mut().zip(factors) {
                *v *= f;
            }
        }
    }

    /// Coefficients of the scalar divergence field, `i k . c(k)`.
    pub fn divergence_coeffs(&self) -> Vec<Complex64> {
        let grid = self.grid;
        let n = grid.n();
        let mut out = vec![Complex64::ZERO; grid.points()];
        for i in 0..n {
            for j in 0..n {
                for l in 0..n {
                    let p = grid.index(i, j, l);
                    let k = grid.wavevector(i, j, l);
                    let dot = k[0] * self.comps[0][p]
                        + k[1] * self.comps[1][p]
                        + k[2] * self.comps[2][p];
                    out[p] = Complex64::new(0.0, 1.0) * dot;
                }
            }
        }
        out
    }

    /// `self += a * other`.
    pub fn add_scaled(&mut self, other: &Self, a: f64) {
        assert_eq!(self.grid.n(), other.grid.n(), "grid mismatch");
        for d in 0..3 {
            for (s, o) in self.comps[d].iter_mut().zip(&other.comps[d]) {
                *s += a * o;
            }
        }
    }

    /// Check solenoidality against a tolerance, for operations whose
    /// contract requires a divergence-free input.
    pub fn require_solenoidal(&self, tolerance: f64) -> Result<()> {
        let residual = self.divergence_residual();
        if residual > tolerance {
            Err(Error::NotSolenoidal {
                residual,
                tolerance,
            })
        } else {
            Ok(())
        }
    }
}

impl std::ops::Add for &SpectralVectorField {
    type Output = SpectralVectorField;
    fn add(self, rhs: Self) -> SpectralVectorField {
        let mut out = self.clone();
        out.add_scaled(rhs, 1.0);
        out
    }
}

impl std::ops::Sub for &SpectralVectorField {
    type Output = SpectralVectorField;
    fn sub(self, rhs: Self) -> SpectralVectorField {
        let mut out = self.clone();
        out.add_scaled(rhs, -1.0);
        out
    }
}

impl RealVectorField {
    /// Sample a field `x -> (u1, u2, u3)` on the lattice.
    pub fn from_fn(grid: Grid, f: impl Fn([f64; 3]) -> [f64; 3]) -> Self {
        let len = grid.points();
        let mut comps = [vec![0.0; len], vec![0.0; len], vec![0.0; len]];
        for (i, j, l) in grid.iter_indices() {
            let p = grid.index(i, j, l);
            let v = f(grid.coordinate(i, j, l));
            for d in 0..3 {
                comps[d][p] = v[d];
            }
        }
        Self { grid, comps }
    }

    #[inline]
    pub fn grid(&self) -> Grid {
        self.grid
    }

    #[inline]
    pub fn component(&self, d: usize) -> &[f64] {
        &self.comps[d]
    }

    /// Pointwise maximum of `|u(x)|` over the lattice.
    pub fn max_abs(&self) -> f64 {
        let mut best = 0.0f64;
        for p in 0..self.grid.points() {
            let s = self.comps[0][p] * self.comps[0][p]
                + self.comps[1][p] * self.comps[1][p]
                + self.comps[2][p] * self.comps[2][p];
            best = best.max(s);
        }
        best.sqrt()
    }

    /// Quadrature of `|u|^2` over the box, `(L/n)^3 sum_x |u(x)|^2`.
    pub fn l2_norm_sq(&self) -> f64 {
        let w = self.grid.cell_volume();
        let mut s = 0.0;
        for c in &self.comps {
            s += c.iter().map(|v| v * v).sum::<f64>();
        }
        w * s
    }

    /// Multiply every component pointwise by a scalar sample array.
    pub fn multiply_scalar_samples(&mut self, scalar: &[f64]) {
        assert_eq!(scalar.len(), self.grid.points());
        for c in &mut self.comps {
            for (v, s) in c.iter_mut().zip(scalar) {
                *v *= s;
            }
        }
    }
}
