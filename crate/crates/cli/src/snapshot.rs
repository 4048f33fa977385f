//! Binary state snapshots.
//!
//! Format `HNSF1`, all numbers little-endian:
//!
//! ```text
//! bytes 0..5   magic "HNSF1"
//! u64          n (points per axis)
//! f64          box_length
//! f64          t
//! f64          diss_total
//! f64          diss_half_plus
//! f64          diss_half_minus
//! then n^3 lattice sites in row-major (i, j, l) order, each a triplet of
//! complex coefficients (components 1..3), each complex a (re, im) f64 pair
//! ```
//!
//! Round trips are coefficient-exact.

use std::path::Path;

use helical_ns::{Grid, SimState, SpectralVectorField};
use num_complex::Complex64;

use crate::error::CliError;

const MAGIC: &[u8; 5] = b"HNSF1";
const HEADER_LEN: usize = 5 + 8 + 8 * 5;

pub fn write_snapshot(state: &SimState, path: &Path) -> Result<(), CliError> {
    let grid = state.u.grid();
    let points = grid.points();
    let mut buf = Vec::with_capacity(HEADER_LEN + points * 3 * 16);
    buf.extend_from_slice(MAGIC);
    buf.extend_from_slice(&(grid.n() as u64).to_le_bytes());
    buf.extend_from_slice(&grid.box_length().to_le_bytes());
    buf.extend_from_slice(&state.t.to_le_bytes());
    buf.extend_from_slice(&state.diss_total.to_le_bytes());
    buf.extend_from_slice(&state.diss_half_plus.to_le_bytes());
    buf.extend_from_slice(&state.diss_half_minus.to_le_bytes());
    for p in 0..points {
        for d in 0..3 {
            let c = state.u.component(d)[p];
            buf.extend_from_slice(&c.re.to_le_bytes());
            buf.extend_from_slice(&c.im.to_le_bytes());
        }
    }
    std::fs::write(path, buf)?;
    Ok(())
}

fn read_f64(bytes: &[u8], pos: &mut usize) -> f64 {
    let v = f64::from_le_bytes(bytes[*pos..*pos + 8].try_into().expect("length checked"));
    *pos += 8;
    v
}

pub fn read_snapshot(path: &Path) -> Result<SimState, CliError> {
    let bytes = std::fs::read(path)?;
    if bytes.len() < HEADER_LEN {
        return Err(CliError::Parse(format!(
            "snapshot truncated: expected at least {HEADER_LEN} header bytes, found {}",
            bytes.len()
        )));
    }
    if &bytes[..5] != MAGIC {
        return Err(CliError::Parse(format!(
            "bad snapshot magic: expected {:?}, found {:?}",
            MAGIC,
            &bytes[..5]
        )));
    }
    let n = u64::from_le_bytes(bytes[5..13].try_into().expect("length checked")) as usize;
    let mut pos = 13;
    let box_length = read_f64(&bytes, &mut pos);
    let grid = Grid::new(n, box_length)?;
    let t = read_f64(&bytes, &mut pos);
    let diss_total = read_f64(&bytes, &mut pos);
    let diss_half_plus = read_f64(&bytes, &mut pos);
    let diss_half_minus = read_f64(&bytes, &mut pos);

    let points = grid.points();
    let expected = HEADER_LEN + points * 3 * 16;
    if bytes.len() != expected {
        return Err(CliError::Parse(format!(
            "snapshot length mismatch: expected {expected} bytes for n = {n}, found {}",
            bytes.len()
        )));
    }

    let mut comps = [
        vec![Complex64::ZERO; points],
        vec![Complex64::ZERO; points],
        vec![Complex64::ZERO; points],
    ];
    for (p, comp) in (0..points).flat_map(|p| (0..3).map(move |d| (p, d))) {
        let re = read_f64(&bytes, &mut pos);
        let im = read_f64(&bytes, &mut pos);
        comps[comp][p] = Complex64::new(re, im);
    }
    Ok(SimState {
        t,
        u: SpectralVectorField::from_components(grid, comps),
        diss_total,
        diss_half_plus,
        diss_half_minus,
    })
}

/// Grid compatibility gate for restarts.
pub fn check_restart_grid(state: &SimState, expected: Grid) -> Result<(), CliError> {
    let got = state.u.grid();
    if got.n() != expected.n()
        || (got.box_length() - expected.box_length()).abs() > 1e-12 * expected.box_length()
    {
        return Err(CliError::Validation(format!(
            "snapshot grid ({} points, L = {}) does not match the configured grid ({} points, L = {})",
            got.n(),
            got.box_length(),
            expected.n(),
            expected.box_length()
        )));
    }
    Ok(())
}
