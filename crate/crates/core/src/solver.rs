//! Time evolution: dealiased pseudo-spectral Navier-Stokes right-hand side,
//! integrating-factor RK4 stepping (viscous semigroup exact, advection
//! explicit), exact spectral heat flow, and running accumulation of the
//! dissipation integrals entering the critical energy.

use num_complex::Complex64;

use crate::data::{beltrami_eigenvalue, CutoffField};
use crate::error::{Error, Result};
use crate::field::SpectralVectorField;
use crate::grid::Grid;
use crate::tolerances;
use crate::verify::{diagnostics_row, DiagnosticsRow};

/// Simulation state: the velocity field, current time and the accumulated
/// dissipation integrals (all nonnegative and nondecreasing in time).
#[derive(Debug, Clone)]
pub struct SimState {
    pub t: f64,
    pub u: SpectralVectorField,
    /// `nu int_0^t ||grad u||^2 ds`
    pub diss_total: f64,
    /// `nu int_0^t ||D^{1/2} grad u_plus||^2 ds`
    pub diss_half_plus: f64,
    /// `nu int_0^t ||D^{1/2} grad u_minus||^2 ds`
    pub diss_half_minus: f64,
}

impl SimState {
    pub fn initial(u: SpectralVectorField) -> Self {
        Self {
            t: 0.0,
            u,
            diss_total: 0.0,
            diss_half_plus: 0.0,
            diss_half_minus: 0.0,
        }
    }
}

/// Cut-off perturbation experiment: evolve `u0 = h0 + chi_M g` and monitor
/// `h = u - chi_M v` against the heat flow `v` of the uncut `g`.
#[derive(Debug, Clone)]
pub struct PerturbationExperiment {
    pub g: SpectralVectorField,
    pub chi: CutoffField,
    pub m: f64,
}

/// Run parameters. The initial field is a separate argument of [`run`].
#[derive(Debug, Clone)]
pub struct RunSpec {
    pub nu: f64,
    pub dt: f64,
    pub t_end: f64,
    /// Steps between diagnostics rows.
    pub record_every: usize,
    /// Keep a copy of the state at every recorded step.
    pub keep_states: bool,
    /// Steps between state snapshots (0 = never).
    pub snapshot_every: usize,
    pub experiment: Option<PerturbationExperiment>,
}

impl RunSpec {
    pub fn new(nu: f64, dt: f64, t_end: f64, record_every: usize) -> Self {
        Self {
            nu,
            dt,
            t_end,
            record_every,
            keep_states: false,
            snapshot_every: 0,
            experiment: None,
        }
    }
}

/// One recorded energy-balance sample.
#[derive(Debug, Clone, Copy, serde::Serialize)]
pub struct EnergySample {
    pub t: f64,
    /// `E = 0.5 ||u||^2`
    pub e: f64,
    pub diss_total: f64,
}

#[derive(Debug)]
pub struct RunOutput {
    pub rows: Vec<DiagnosticsRow>,
    pub energy: Vec<EnergySample>,
    /// Recorded states (empty unless `keep_states`).
    pub states: Vec<SimState>,
    /// `(step, state)` snapshots (empty unless `snapshot_every > 0`).
    pub snapshots: Vec<(usize, SimState)>,
    pub final_state: SimState,
    /// `E_c(u_plus)(0) - E_c(u_minus)(0)`.
    pub c0: f64,
}

/// Projected advection term `-P(u . grad u)` of the dealiased field.
///
/// The quadratic term is evaluated pseudospectrally: transform to real
/// space, form the momentum-flux products `u_i u_j`, transform back and take
/// the spectral divergence (equal to the convective form coefficient-wise
/// for solenoidal dealiased input), then dealias, Leray-project and negate.
/// The viscous term is handled separately by the integrating factor.
pub fn nonlinear_rhs(u: &SpectralVectorField) -> SpectralVectorField {
    let grid = u.grid();
    let n = grid.n();
    let len = grid.points();

    let mut masked = u.clone();
    masked.apply_dealias_mask();
    let real = masked.to_real();

    // symmetric products u_i u_j: indices (00, 11, 22, 01, 02, 12)
    const PAIRS: [(usize, usize); 6] = [(0, 0), (1, 1), (2, 2), (0, 1), (0, 2), (1, 2)];
    let mut prods: Vec<Vec<Complex64>> = PAIRS
        .iter()
        .map(|&(a, b)| {
            let ca = real.component(a);
            let cb = real.component(b);
            (0..len)
                .map(|p| Complex64::new(ca[p] * cb[p], 0.0))
                .collect()
        })
        .collect();
    {
        let mut bufs: Vec<&mut [Complex64]> = prods.iter_mut().map(|v| v.as_mut_slice()).collect();
        crate::fft::forward3_many(&mut bufs, n);
    }
    // flux tensor lookup: w[d][j] symmetric
    let pair_index = |a: usize, b: usize| -> usize {
        match (a.min(b), a.max(b)) {
            (0, 0) => 0,
            (1, 1) => 1,
            (2, 2) => 2,
            (0, 1) => 3,
            (0, 2) => 4,
            (1, 2) => 5,
            _ => unreachable!(),
        }
    };

    let mut out = SpectralVectorField::zeros(grid);
    for i in 0..n {
        let mi = grid.freq(i);
        for j in 0..n {
            let mj = grid.freq(j);
            for l in 0..n {
                let ml = grid.freq(l);
                let keep = grid.dealias_keep(mi) && grid.dealias_keep(mj) && grid.dealias_keep(ml);
                if !keep {
                    continue;
                }
                let p = grid.index(i, j, l);
                let k = grid.wavevector(i, j, l);
                let ksq = k[0] * k[0] + k[1] * k[1] + k[2] * k[2];
                if ksq == 0.0 {
                    continue;
                }
                // conv_d = i sum_j k_j (u_d u_j)^
                let mut conv = [Complex64::ZERO; 3];
                for d in 0..3 {
                    let mut s = Complex64::ZERO;
                    for q in 0..3 {
                        s += k[q] * prods[pair_index(d, q)][p];
                    }
                    conv[d] = Complex64::new(0.0, 1.0) * s;
                }
                // Leray projection and negation
                let dot = k[0] * conv[0] + k[1] * conv[1] + k[2] * conv[2];
                for d in 0..3 {
                    out.component_mut(d)[p] = -(conv[d] - k[d] * dot / ksq);
                }
            }
        }
    }
    out
}

/// Exact spectral heat flow: `c(k) -> exp(-nu |k|^2 t) c(k)`, `t >= 0`.
pub fn heat_flow(u0: &SpectralVectorField, nu: f64, t: f64) -> SpectralVectorField {
    assert!(t >= 0.0, "heat flow runs forward in time");
    let grid = u0.grid();
    let n = grid.n();
    let mut out = u0.clone();
    for i in 0..n {
        for j in 0..n {
            for l in 0..n {
                let k = grid.wavevector(i, j, l);
                let ksq = k[0] * k[0] + k[1] * k[1] + k[2] * k[2];
                let f = (-nu * ksq * t).exp();
                let p = grid.index(i, j, l);
                for d in 0..3 {
                    out.component_mut(d)[p] *= f;
                }
            }
        }
    }
    out
}

/// Integrating-factor RK4 stepper with precomputed viscous semigroup factors.
pub struct Stepper {
    dt: f64,
    e_full: Vec<f64>,
    e_half: Vec<f64>,
}

impl Stepper {
    pub fn new(grid: Grid, nu: f64, dt: f64) -> Self {
        let n = grid.n();
        let mut e_full = vec![0.0; grid.points()];
        let mut e_half = vec![0.0; grid.points()];
        for i in 0..n {
            for j in 0..n {
                for l in 0..n {
                    let k = grid.wavevector(i, j, l);
                    let ksq = k[0] * k[0] + k[1] * k[1] + k[2] * k[2];
                    let p = grid.index(i, j, l);
                    e_full[p] = (-nu * ksq * dt).exp();
                    e_half[p] = (-nu * ksq * dt * 0.5).exp();
                }
            }
        }
        Self { dt, e_full, e_half }
    }

    /// One IF-RK4 step of the field: the viscous semigroup is applied
    /// exactly, the advection term through the classical RK4 stages of the
    /// integrating-factor variable.
    pub fn advance(&self, u: &SpectralVectorField) -> SpectralVectorField {
        let dt = self.dt;

        let a = nonlinear_rhs(u);

        let mut u1 = u.clone();
        u1.add_scaled(&a, 0.5 * dt);
        u1.apply_mode_multiplier(&self.e_half);
        let b = nonlinear_rhs(&u1);

        let mut u2 = u.clone();
        u2.apply_mode_multiplier(&self.e_half);
        u2.add_scaled(&b, 0.5 * dt);
        let c = nonlinear_rhs(&u2);

        let mut u3 = u.clone();
        u3.apply_mode_multiplier(&self.e_full);
        let mut c_half = c.clone();
        c_half.apply_mode_multiplier(&self.e_half);
        u3.add_scaled(&c_half, dt);
        let d = nonlinear_rhs(&u3);

        // u' = E u + dt/6 (E a + 2 E_h b + 2 E_h c + d)
        let mut out = u.clone();
        out.apply_mode_multiplier(&self.e_full);
        let mut a_full = a;
        a_full.apply_mode_multiplier(&self.e_full);
        out.add_scaled(&a_full, dt / 6.0);
        let mut b_half = b;
        b_half.apply_mode_multiplier(&self.e_half);
        out.add_scaled(&b_half, dt / 3.0);
        out.add_scaled(&c_half, dt / 3.0);
        out.add_scaled(&d, dt / 6.0);
        out
    }
}

/// Instantaneous dissipation-rate integrands
/// `(nu ||grad u||^2, nu ||D^{1/2} grad u_plus||^2, nu ||D^{1/2} grad u_minus||^2)`.
fn dissipation_integrands(u: &SpectralVectorField, nu: f64) -> Result<[f64; 3]> {
    let pair = u.helical_split()?;
    Ok([
        nu * u.sobolev_seminorm_sq(1.0),
        nu * pair.plus.sobolev_seminorm_sq(1.5),
        nu * pair.minus.sobolev_seminorm_sq(1.5),
    ])
}

/// Advective CFL bound `CFL_SAFETY * dx / max|u|` (infinite for a zero field).
pub fn cfl_bound(u: &SpectralVectorField) -> f64 {
    let umax = u.to_real().max_abs();
    if umax == 0.0 {
        f64::INFINITY
    } else {
        tolerances::CFL_SAFETY * u.grid().dx() / umax
    }
}

/// Advance one step, updating the dissipation accumulators by the
/// trapezoidal rule on the step endpoints.
pub fn step(state: &SimState, nu: f64, dt: f64) -> Result<SimState> {
    let stepper = Stepper::new(state.u.grid(), nu, dt);
    let i0 = dissipation_integrands(&state.u, nu)?;
    let u_new = stepper.advance(&state.u);
    let h1_old = state.u.h1_norm();
    let h1_new = u_new.h1_norm();
    if h1_old > 0.0 && h1_new > tolerances::BLOWUP_GROWTH * h1_old {
        return Err(Error::BlowUp {
            t: state.t + dt,
            growth: h1_new / h1_old,
        });
    }
    let i1 = dissipation_integrands(&u_new, nu)?;
    Ok(SimState {
        t: state.t + dt,
        u: u_new,
        diss_total: state.diss_total + 0.5 * dt * (i0[0] + i1[0]),
        diss_half_plus: state.diss_half_plus + 0.5 * dt * (i0[1] + i1[1]),
        diss_half_minus: state.diss_half_minus + 0.5 * dt * (i0[2] + i1[2]),
    })
}

fn validate_spec(spec: &RunSpec) -> Result<()> {
    if !(spec.dt > 0.0) || !(spec.nu > 0.0) || !(spec.t_end >= 0.0) || spec.record_every == 0 {
        return Err(Error::InvalidRunParameters {
            reason: "need dt > 0, nu > 0, t_end >= 0, record_every >= 1",
        });
    }
    Ok(())
}

/// Run from fresh initial data: the field is dealiased, centered, checked
/// solenoidal and against the CFL bound, then stepped to `t_end` with a
/// diagnostics row every `record_every` steps.
pub fn run(u0: &SpectralVectorField, spec: &RunSpec) -> Result<RunOutput> {
    validate_spec(spec)?;
    let mut u = u0.clone();
    u.apply_dealias_mask();
    u.zero_mean();
    u.require_solenoidal(tolerances::SOLENOIDAL_INPUT)?;
    run_loop(SimState::initial(u), spec)
}

/// Continue a run from a restored state; `spec.t_end` is absolute time.
pub fn resume(state: SimState, spec: &RunSpec) -> Result<RunOutput> {
    validate_spec(spec)?;
    run_loop(state, spec)
}

fn run_loop(mut state: SimState, spec: &RunSpec) -> Result<RunOutput> {
    let grid = state.u.grid();
    let bound = cfl_bound(&state.u);
    if spec.dt > bound {
        return Err(Error::CflExceeded { dt: spec.dt, bound });
    }
    if let Some(exp) = &spec.experiment {
        if exp.chi.grid().n() != grid.n() || exp.g.grid().n() != grid.n() {
            return Err(Error::GridMismatch {
                left: grid.n(),
                right: exp.g.grid().n(),
            });
        }
        beltrami_eigenvalue(&exp.g)?;
    }

    let steps = ((spec.t_end - state.t) / spec.dt).round().max(0.0) as usize;
    let stepper = Stepper::new(grid, spec.nu, spec.dt);
    let t0 = state.t;
    let h1_init = state.u.h1_norm();

    // c0 from the starting state: instantaneous Hdot^{1/2} asymmetry plus
    // whatever the accumulators already carry (zero for a fresh run)
    let pair = state.u.helical_split()?;
    let (hp, hm) = pair.hhalf_sq();
    let c0 = (0.5 * hp + state.diss_half_plus) - (0.5 * hm + state.diss_half_minus);
    // startup self-test: the split form of the helicity must agree with the
    // direct integral (unit prefactor)
    debug_assert!(
        (state.u.helicity() - pair.helicity_split_value()).abs()
            <= tolerances::TRANSFORM_ROUND_TRIP * (hp + hm + 1.0),
        "helicity split-form disagrees with the direct integral"
    );

    let mut rows = Vec::new();
    let mut energy = Vec::new();
    let mut states = Vec::new();
    let mut snapshots = Vec::new();

    let record = |state: &SimState,
                  rows: &mut Vec<DiagnosticsRow>,
                  energy: &mut Vec<EnergySample>,
                  states: &mut Vec<SimState>|
     -> Result<()> {
        let row = diagnostics_row(state, c0, spec.nu, spec.experiment.as_ref())?;
        energy.push(EnergySample {
            t: state.t,
            e: row.e,
            diss_total: state.diss_total,
        });
        rows.push(row);
        if spec.keep_states {
            states.push(state.clone());
        }
        Ok(())
    };

    record(&state, &mut rows, &mut energy, &mut states)?;

    let mut integrand_prev = dissipation_integrands(&state.u, spec.nu)?;
    for istep in 1..=steps {
        let u_new = stepper.advance(&state.u);
        let integrand_new = dissipation_integrands(&u_new, spec.nu)?;
        state.diss_total += 0.5 * spec.dt * (integrand_prev[0] + integrand_new[0]);
        state.diss_half_plus += 0.5 * spec.dt * (integrand_prev[1] + integrand_new[1]);
        state.diss_half_minus += 0.5 * spec.dt * (integrand_prev[2] + integrand_new[2]);
        state.u = u_new;
        state.t = t0 + istep as f64 * spec.dt;
        integrand_prev = integrand_new;

        let h1 = state.u.h1_norm();
        if h1_init > 0.0 && h1 > tolerances::BLOWUP_GROWTH * h1_init {
            return Err(Error::BlowUp {
                t: state.t,
                growth: h1 / h1_init,
            });
        }

        if istep % spec.record_every == 0 || istep == steps {
            record(&state, &mut rows, &mut energy, &mut states)?;
        }
        if spec.snapshot_every > 0 && istep % spec.snapshot_every == 0 {
            snapshots.push((istep, state.clone()));
        }
    }

    Ok(RunOutput {
        rows,
        energy,
        states,
        snapshots,
        final_state: state,
        c0,
    })
}
