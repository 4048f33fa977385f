//! Cached 3D complex FFTs over flat row-major buffers.
//!
//! Transform convention: [`forward3`] maps real-space samples to the physical
//! Fourier coefficients `c_k` of the trigonometric interpolant, i.e. it
//! divides the unnormalized DFT by `n^3`, so that `u(x) = sum_k c_k e^{i k.x}`.
//! [`inverse3`] is the exact inverse (unnormalized inverse DFT).

use std::cell::RefCell;
use std::collections::HashMap;
use std::sync::{Arc, Mutex, OnceLock};

use num_complex::Complex64;
use rayon::prelude::*;
use rustfft::{Fft, FftDirection, FftPlanner};

fn plan(n: usize, dir: FftDirection) -> Arc<dyn Fft<f64>> {
    static PLANS: OnceLock<Mutex<HashMap<(usize, bool), Arc<dyn Fft<f64>>>>> = OnceLock::new();
    let cache = PLANS.get_or_init(|| Mutex::new(HashMap::new()));
    let key = (n, dir == FftDirection::Forward);
    let mut cache = cache.lock().expect("fft plan cache poisoned");
    cache
        .entry(key)
        .or_insert_with(|| {
            let mut planner = FftPlanner::new();
            planner.plan_fft(n, dir)
        })
        .clone()
}

thread_local! {
    static SCRATCH: RefCell<Vec<Complex64>> = const { RefCell::new(Vec::new()) };
    static FFT_SCRATCH: RefCell<Vec<Complex64>> = const { RefCell::new(Vec::new()) };
}

fn with_scratch<R>(len: usize, f: impl FnOnce(&mut [Complex64]) -> R) -> R {
    SCRATCH.with(|s| {
        let mut s = s.borrow_mut();
        if s.len() < len {
            s.resize(len, Complex64::ZERO);
        }
        f(&mut s[..len])
    })
}

/// Run the batched 1D transform over every contiguous chunk of `buf`.
fn process_rows(fft: &Arc<dyn Fft<f64>>, buf: &mut [Complex64]) {
    FFT_SCRATCH.with(|s| {
        let mut s = s.borrow_mut();
        let need = fft.get_inplace_scratch_len();
        if s.len() < need {
            s.resize(need, Complex64::ZERO);
        }
        fft.process_with_scratch(buf, &mut s[..need]);
    });
}

/// In-place 3D FFT of a flat row-major `n^3` buffer (last axis fastest).
pub fn fft3(data: &mut [Complex64], n: usize, dir: FftDirection) {
    debug_assert_eq!(data.len(), n * n * n);
    let fft = plan(n, dir);
    let n2 = n * n;

    // axis 2: contiguous rows
    process_rows(&fft, data);

    // axis 1: per i-slab transpose (j,l) -> (l,j), batch, transpose back
    with_scratch(n2, |t| {
        for slab in data.chunks_exact_mut(n2) {
            for j in 0..n {
                for l in 0..n {
                    t[l * n + j] = slab[j * n + l];
                }
            }
            process_rows(&fft, t);
            for l in 0..n {
                for j in 0..n {
                    slab[j * n + l] = t[l * n + j];
                }
            }
        }
    });

    // axis 0: gather (i, q) -> (q, i) across slabs, batch, scatter back
    with_scratch(n * n2, |t| {
        for i in 0..n {
            for q in 0..n2 {
                t[q * n + i] = data[i * n2 + q];
            }
        }
        process_rows(&fft, t);
        for i in 0..n {
            for q in 0..n2 {
                data[i * n2 + q] = t[q * n + i];
            }
        }
    });
}

/// Samples -> physical coefficients (DFT scaled by `1/n^3`).
pub fn forward3(data: &mut [Complex64], n: usize) {
    fft3(data, n, FftDirection::Forward);
    let scale = 1.0 / (n * n * n) as f64;
    for v in data.iter_mut() {
        *v *= scale;
    }
}

/// Physical coefficients -> samples (unnormalized inverse DFT).
pub fn inverse3(data: &mut [Complex64], n: usize) {
    fft3(data, n, FftDirection::Inverse);
}

/// Forward-transform several buffers, one rayon task per buffer.
pub fn forward3_many(buffers: &mut [&mut [Complex64]], n: usize) {
    buffers.par_iter_mut().for_each(|b| forward3(b, n));
}

/// Inverse-transform several buffers, one rayon task per buffer.
pub fn inverse3_many(buffers: &mut [&mut [Complex64]], n: usize) {
    buffers.par_iter_mut().for_each(|b| inverse3(b, n));
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn round_trip_is_identity() {
        let n = 8;
        let mut data: Vec<Complex64> = (0..n * n * n)
            .map(|i| Complex64::new((i % 17) as f64 - 8.0, (i % 5) as f64))
            .collect();
        let orig = data.clone();
        forward3(&mut data, n);
        inverse3(&mut data, n);
        for (a, b) in data.iter().zip(&orig) {
            assert!((a - b).norm() < 1e-12);
        }
    }

    #[test]
    fn single_mode_transforms_to_delta() {
        // u(x) = e^{i k.x} with m = (1, 2, -3) on n = 8 has c_m = 1, others 0
        let n = 8usize;
        let m = [1i64, 2, -3];
        let mut data = vec![Complex64::ZERO; n * n * n];
        for i in 0..n {
            for j in 0..n {
                for l in 0..n {
                    let phase = 2.0 * std::f64::consts::PI / n as f64
                        * (m[0] * i as i64 + m[1] * j as i64 + m[2] * l as i64) as f64;
                    data[(i * n + j) * n + l] = Complex64::new(phase.cos(), phase.sin());
                }
            }
        }
        forward3(&mut data, n);
        let idx = |m: i64| ((m + n as i64) % n as i64) as usize;
        let target = (idx(m[0]) * n + idx(m[1])) * n + idx(m[2]);
        for (p, v) in data.iter().enumerate() {
            let expect = if p == target { 1.0 } else { 0.0 };
            assert!(
                (v - Complex64::new(expect, 0.0)).norm() < 1e-13,
                "coefficient {p} = {v}"
            );
        }
    }
}
