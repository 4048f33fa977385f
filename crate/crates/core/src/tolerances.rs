//! Central acceptance thresholds with their numerical origin.
//!
//! Three error classes cover everything in this crate:
//! single-pass spectral identities (pure f64 roundoff), identities crossing
//! one FFT round trip (roundoff amplified ~ n log n), and time-integration
//! residuals (O(dt^2) from the trapezoidal dissipation accumulators, the RK4
//! field error being O(dt^4) and negligible next to them).

/// Identities evaluated in one coefficient pass: curl eigenrelations of the
/// helical split, Beltrami eigenrelations, polarity purity.
pub const SPECTRAL_IDENTITY: f64 = 1e-12;

/// Identities crossing a transform round trip (Parseval vs real-space
/// quadrature, helicity vs its split form, advective neutrality).
pub const TRANSFORM_ROUND_TRIP: f64 = 1e-11;

/// Exact compositions with no transform, e.g. `D^{1/2}` then `D^{-1/2}`,
/// Leray idempotency, heat-semigroup composition.
pub const EXACT_COMPOSITION: f64 = 1e-14;

/// Normalized helical-orthogonality inner products (pointwise-in-k zeros).
pub const ORTHOGONALITY: f64 = 1e-11;

/// Divergence residual above which operations requiring solenoidal input
/// reject the field. Solver-maintained fields stay below `SOLENOIDAL_DRIFT`;
/// genuinely non-solenoidal data sit many orders above this gate.
pub const SOLENOIDAL_INPUT: f64 = 1e-9;

/// Divergence residual the time stepper is allowed to accumulate.
pub const SOLENOIDAL_DRIFT: f64 = 1e-11;

/// Default normalized critical-energy drift for generic runs. Scales as
/// O(dt^2) through the trapezoidal accumulators; the default covers
/// dt = 1e-3 runs with an order of magnitude to spare.
pub const THEOREM1_DRIFT: f64 = 1e-5;

/// Critical-energy drift for Beltrami runs (closed-form dynamics; only the
/// accumulator truncation remains, so small steps reach 1e-10).
pub const THEOREM1_DRIFT_BELTRAMI: f64 = 1e-10;

/// Relative error floor of the helicity-balance check on generic runs.
pub const HELICITY_ODE_REL: f64 = 1e-3;

/// Curvature constant in the centered-difference tolerance
/// `max(HELICITY_ODE_REL, HELICITY_ODE_CURV * (dt * record_every)^2)`.
pub const HELICITY_ODE_CURV: f64 = 10.0;

/// Absolute floor factor (times the initial energy) for the helicity
/// balance when both sides are near zero.
pub const HELICITY_ODE_ABS_FLOOR: f64 = 1e-10;

/// Energy-balance identity `E(t) + dissipation(t) = E(0)`, relative.
pub const ENERGY_BALANCE: f64 = 1e-6;

/// Relative mismatch of the lambda = 2 scaling-symmetry run pair.
pub const SCALING_PAIR: f64 = 1e-8;

/// Curl eigenrelation residual accepted when localizing Beltrami data
/// (inputs constructed here sit at roundoff; this gate catches wrong data).
pub const BELTRAMI_ACCEPT: f64 = 1e-8;

/// Growth factor allowed between inner-half and outer-half maxima of the
/// weighted decay profile `(1 + |x|)(|g| + |grad g|)/A`.
pub const DECAY_GROWTH: f64 = 1.5;

/// Acceptance envelope for `max_t ||h||_{H1} * M^{1/2}` in the cut-off
/// perturbation experiment. The underlying bound carries an implicit
/// constant; the envelope pins a reproducible one and the measured value
/// is always reported alongside.
pub const PERTURBATION_ENVELOPE: f64 = 5.0;

/// Normalized divergence-constraint residual of the perturbation field.
pub const CONSTRAINT_RESIDUAL: f64 = 1e-8;

/// H1 growth factor over the initial value that trips the blow-up guard.
pub const BLOWUP_GROWTH: f64 = 1e6;

/// Safety factor of the advective CFL bound `dt <= CFL_SAFETY * dx / max|u|`.
pub const CFL_SAFETY: f64 = 0.5;

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn tolerance_ordering() {
        assert!(EXACT_COMPOSITION < SPECTRAL_IDENTITY);
        assert!(SPECTRAL_IDENTITY < TRANSFORM_ROUND_TRIP);
        assert!(TRANSFORM_ROUND_TRIP < SOLENOIDAL_INPUT);
        assert!(THEOREM1_DRIFT_BELTRAMI < THEOREM1_DRIFT);
    }
}
