//! Initial-data constructions: torus Beltrami (ABC) flows, shell-supported
//! helical random fields, smooth radial cut-offs, the curl-curl localization
//! of Beltrami data, random solenoidal fields, and the free-space annulus
//! profile with its spherical quadrature evaluator.

mod annulus;
mod beltrami;
mod curlcurl;
mod cutoff;
mod random;
mod shell;

pub use annulus::{
    amplitude_bound_at, eval_streaming, AnnulusProfile, AnnulusSpec, DecaySample, QuadResolution,
};
pub use beltrami::abc_flow;
pub use curlcurl::{beltrami_eigenvalue, curl_curl_data};
pub use cutoff::{CutoffField, CutoffSpec};
pub use random::random_solenoidal;
pub use shell::{helical_eigenvector, shell_field, Polarity, ShellSpec};
