//! Lattice and transform geometry of the periodic box.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Geometry of the periodic box `[0, L)^3` sampled on `n` points per axis.
///
/// The wavevector of lattice index `(i, j, l)` is `k = (2*pi/L) * (m1, m2, m3)`
/// with `m` the signed integer frequency in standard FFT layout: index `i`
/// maps to `m = i` for `i < n/2` and `m = i - n` otherwise. This map is total
/// and invertible on the lattice.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Grid {
    n: usize,
    box_length: f64,
}

impl Grid {
    /// `n` must be even and at least 4 (dealiasing convention); `box_length > 0`.
    pub fn new(n: usize, box_length: f64) -> Result<Self> {
        if n < 4 || n % 2 != 0 {
            return Err(Error::GridSize { n });
        }
        if !(box_length > 0.0) || !box_length.is_finite() {
            return Err(Error::BoxLength { box_length });
        }
        Ok(Self { n, box_length })
    }

    #[inline]
    pub fn n(&self) -> usize {
        self.n
    }

    #[inline]
    pub fn box_length(&self) -> f64 {
        self.box_length
    }

    /// Total number of lattice points, `n^3`.
    #[inline]
    pub fn points(&self) -> usize {
        self.n * self.n * self.n
    }

    /// Grid spacing `L/n`.
    #[inline]
    pub fn dx(&self) -> f64 {
        self.box_length / self.n as f64
    }

    /// Fundamental wavenumber `2*pi/L`.
    #[inline]
    pub fn k_unit(&self) -> f64 {
        2.0 * std::f64::consts::PI / self.box_length
    }

    /// Quadrature weight of one lattice cell, `(L/n)^3`.
    #[inline]
    pub fn cell_volume(&self) -> f64 {
        let dx = self.dx();
        dx * dx * dx
    }

    #[inline]
    pub fn volume(&self) -> f64 {
        self.box_length * self.box_length * self.box_length
    }

    /// Signed integer frequency of a lattice index along one axis.
    #[inline]
    pub fn freq(&self, i: usize) -> i64 {
        if i < self.n / 2 {
            i as i64
        } else {
            i as i64 - self.n as i64
        }
    }

    /// Flat storage index of lattice point `(i, j, l)` (row-major, `l` fastest).
    #[inline]
    pub fn index(&self, i: usize, j: usize, l: usize) -> usize {
        (i * self.n + j) * self.n + l
    }

    /// Lattice index of the conjugate partner `-k mod n` of `(i, j, l)`.
    #[inline]
    pub fn conjugate_index(&self, i: usize, j: usize, l: usize) -> (usize, usize, usize) {
        let n = self.n;
        ((n - i) % n, (n - j) % n, (n - l) % n)
    }

    /// Physical wavevector at lattice index `(i, j, l)`.
    #[inline]
    pub fn wavevector(&self, i: usize, j: usize, l: usize) -> [f64; 3] {
        let k0 = self.k_unit();
        [
            k0 * self.freq(i) as f64,
            k0 * self.freq(j) as f64,
            k0 * self.freq(l) as f64,
        ]
    }

    /// Physical coordinate of lattice point `(i, j, l)`.
    #[inline]
    pub fn coordinate(&self, i: usize, j: usize, l: usize) -> [f64; 3] {
        let dx = self.dx();
        [i as f64 * dx, j as f64 * dx, l as f64 * dx]
    }

    /// Whether the signed frequency `m` survives the 2/3-rule dealias mask.
    ///
    /// Strict inequality: modes with `3|m| >= n` are zeroed. Strictness keeps
    /// quadratic products alias-free on every even grid, including `3 | n`.
    #[inline]
    pub fn dealias_keep(&self, m: i64) -> bool {
        3 * m.unsigned_abs() < self.n as u64
    }

    /// Largest signed frequency magnitude kept by the dealias mask.
    #[inline]
    pub fn dealias_max_freq(&self) -> i64 {
        ((self.n as i64) - 1) / 3
    }

    /// Iterate over all lattice indices `(i, j, l)` in storage order.
    pub fn iter_indices(&self) -> impl Iterator<Item = (usize, usize, usize)> + '_ {
        let n = self.n;
        (0..n).flat_map(move |i| (0..n).flat_map(move |j| (0..n).map(move |l| (i, j, l))))
    }
}
