//! Run descriptions in TOML. Every field has a documented default except
//! `grid.n` and `data`; parsing either succeeds totally or fails with a
//! line/field diagnostic.

use std::collections::BTreeMap;
use std::path::Path;

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use helical_ns::data::{
    abc_flow, curl_curl_data, shell_field, AnnulusSpec, CutoffField, CutoffSpec, Polarity,
    QuadResolution, ShellSpec,
};
use helical_ns::solver::{PerturbationExperiment, RunSpec};
use helical_ns::{Grid, SpectralVectorField};

use crate::error::CliError;

fn two_pi() -> f64 {
    2.0 * std::f64::consts::PI
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GridSection {
    /// Points per axis (even, >= 4). Required.
    pub n: usize,
    /// Physical side length of the box. Default `2 pi`.
    #[serde(default = "two_pi")]
    pub box_length: f64,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct PhysicsSection {
    /// Viscosity. Default 1.
    pub nu: f64,
}

impl Default for PhysicsSection {
    fn default() -> Self {
        Self { nu: 1.0 }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct TimeSection {
    /// Time step. Default 1e-3. Must satisfy the advective CFL bound.
    pub dt: f64,
    /// Horizon. Default 1.
    pub t_end: f64,
    /// Steps between diagnostics rows. Default 10.
    pub record_every: usize,
}

impl Default for TimeSection {
    fn default() -> Self {
        Self {
            dt: 1e-3,
            t_end: 1.0,
            record_every: 10,
        }
    }
}

/// Initial-data variants.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(tag = "variant", rename_all = "lowercase")]
pub enum DataSpec {
    /// ABC flow `(A sin z + C cos y, B sin x + A cos z, C sin y + B cos x)`.
    Abc { a: f64, b: f64, c: f64 },
    /// Random helical field on the shell `k0 (1 +- delta)`.
    Shell {
        k0: f64,
        delta: f64,
        /// Helicity polarity: +1 or -1.
        sign: i8,
        seed: u64,
        amplitude: f64,
    },
    /// Localized Beltrami data `u0 = curl(curl(chi_M g))/k0^2`.
    Curlcurl {
        /// Cut-off radius M (plateau to M, support to 2M).
        m: f64,
        inner: Box<DataSpec>,
    },
}

#[derive(Debug, Clone, Default, Serialize, Deserialize)]
#[serde(tag = "variant", rename_all = "lowercase")]
pub enum ExperimentSpec {
    /// Plain run. Default.
    #[default]
    None,
    /// Cut-off perturbation experiment: monitor `h = u - chi_M v` with `v`
    /// the heat flow of the uncut Beltrami profile. Requires curlcurl data
    /// with the same `m`.
    Perturbation { m: f64 },
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct ChecksSection {
    /// Check names for `verify`: prop1, prop2, helicity_split, polarity,
    /// theorem1, helicity_ode, energy_balance, scaling, decay, perturbation.
    pub names: Vec<String>,
    /// Seed for the random verification fields. Default 0.
    pub seed: u64,
    /// Number of random fields for the spectral-identity checks. Default 20.
    pub random_fields: usize,
    /// Per-check tolerance overrides (honored by theorem1 and helicity_ode,
    /// whose tolerances scale with the run; other checks carry fixed
    /// roundoff-class tolerances).
    pub tolerances: BTreeMap<String, f64>,
}

impl Default for ChecksSection {
    fn default() -> Self {
        Self {
            names: Vec::new(),
            seed: 0,
            random_fields: 20,
            tolerances: BTreeMap::new(),
        }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct OutputSection {
    /// Output directory; relative paths live under the current directory or
    /// under `HELICAL_NS_OUTPUT_ROOT` when that is set.
    pub directory: String,
    /// Steps between binary state snapshots (0 = never). Default 0.
    pub snapshot_every: usize,
}

impl Default for OutputSection {
    fn default() -> Self {
        Self {
            directory: "out".to_string(),
            snapshot_every: 0,
        }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct DecaySection {
    /// Annulus half-width.
    pub delta: f64,
    /// Amplitude of the annulus profile.
    pub amplitude: f64,
    pub quad_radial: usize,
    pub quad_polar: usize,
    pub quad_azimuthal: usize,
    /// Largest sampled radius.
    pub r_max: f64,
    /// Samples per ray.
    pub samples: usize,
    /// `nu * t` of the heat-evolved sweep (0 disables it).
    pub heat_nu_t: f64,
}

impl Default for DecaySection {
    fn default() -> Self {
        let q = QuadResolution::default();
        Self {
            delta: 0.1,
            amplitude: 1.0,
            quad_radial: q.radial,
            quad_polar: q.polar,
            quad_azimuthal: q.azimuthal,
            r_max: 50.0,
            samples: 50,
            heat_nu_t: 0.0,
        }
    }
}

/// The whole run description.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ConfigDocument {
    pub grid: GridSection,
    #[serde(default)]
    pub physics: PhysicsSection,
    #[serde(default)]
    pub time: TimeSection,
    pub data: DataSpec,
    #[serde(default)]
    pub experiment: ExperimentSpec,
    #[serde(default)]
    pub checks: ChecksSection,
    #[serde(default)]
    pub output: OutputSection,
    #[serde(default)]
    pub decay: DecaySection,
}

impl ConfigDocument {
    pub fn parse(text: &str) -> Result<Self, CliError> {
        toml::from_str(text).map_err(|e| CliError::Parse(e.to_string()))
    }

    pub fn load(path: &Path) -> Result<Self, CliError> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| CliError::Io(format!("{}: {e}", path.display())))?;
        Self::parse(&text)
    }

    /// Canonical serialization with every default materialized.
    pub fn canonical_toml(&self) -> String {
        toml::to_string(self).expect("config serializes")
    }

    /// SHA-256 of the canonical serialization, for the report metadata.
    pub fn digest(&self) -> String {
        let bytes = Sha256::digest(self.canonical_toml().as_bytes());
        bytes.iter().map(|b| format!("{b:02x}")).collect()
    }

    pub fn grid(&self) -> Result<Grid, CliError> {
        Ok(Grid::new(self.grid.n, self.grid.box_length)?)
    }

    pub fn annulus_spec(&self) -> AnnulusSpec {
        AnnulusSpec {
            delta: self.decay.delta,
            amplitude: self.decay.amplitude,
            quad: QuadResolution {
                radial: self.decay.quad_radial,
                polar: self.decay.quad_polar,
                azimuthal: self.decay.quad_azimuthal,
            },
        }
    }

    /// Build the initial field, the run parameters and the optional
    /// perturbation experiment.
    pub fn build(&self) -> Result<BuiltRun, CliError> {
        let grid = self.grid()?;
        if !(self.physics.nu > 0.0) {
            return Err(CliError::Validation(format!(
                "viscosity must be positive, got {}",
                self.physics.nu
            )));
        }
        if !(self.time.dt > 0.0) || !(self.time.t_end >= 0.0) || self.time.record_every == 0 {
            return Err(CliError::Validation(
                "time section needs dt > 0, t_end >= 0, record_every >= 1".to_string(),
            ));
        }

        let (u0, localized) = build_data(&self.data, grid)?;

        let experiment = match &self.experiment {
            ExperimentSpec::None => None,
            ExperimentSpec::Perturbation { m } => {
                let Some(loc) = localized else {
                    return Err(CliError::Validation(
                        "perturbation experiment requires curlcurl data".to_string(),
                    ));
                };
                if (loc.m - *m).abs() > 1e-12 * m.abs().max(1.0) {
                    return Err(CliError::Validation(format!(
                        "experiment cutoff m = {m} does not match data cutoff m = {}",
                        loc.m
                    )));
                }
                Some(PerturbationExperiment {
                    g: loc.g,
                    chi: loc.chi,
                    m: *m,
                })
            }
        };

        let mut run_spec = RunSpec::new(
            self.physics.nu,
            self.time.dt,
            self.time.t_end,
            self.time.record_every,
        );
        run_spec.snapshot_every = self.output.snapshot_every;
        run_spec.experiment = experiment;

        Ok(BuiltRun { grid, u0, run_spec })
    }
}

/// Byproducts of curlcurl data needed by the perturbation experiment.
#[derive(Debug)]
pub struct LocalizedData {
    pub g: SpectralVectorField,
    pub chi: CutoffField,
    pub m: f64,
}

#[derive(Debug)]
pub struct BuiltRun {
    pub grid: Grid,
    pub u0: SpectralVectorField,
    pub run_spec: RunSpec,
}

fn build_data(
    spec: &DataSpec,
    grid: Grid,
) -> Result<(SpectralVectorField, Option<LocalizedData>), CliError> {
    match spec {
        DataSpec::Abc { a, b, c } => Ok((abc_flow(*a, *b, *c, grid)?, None)),
        DataSpec::Shell {
            k0,
            delta,
            sign,
            seed,
            amplitude,
        } => {
            let polarity = match sign {
                1 => Polarity::Plus,
                -1 => Polarity::Minus,
                other => {
                    return Err(CliError::Validation(format!(
                        "shell sign must be +1 or -1, got {other}"
                    )))
                }
            };
            let field = shell_field(
                &ShellSpec {
                    k0: *k0,
                    delta: *delta,
                    sign: polarity,
                    seed: *seed,
                    amplitude: *amplitude,
                },
                grid,
            )?;
            Ok((field, None))
        }
        DataSpec::Curlcurl { m, inner } => {
            if matches!(**inner, DataSpec::Curlcurl { .. }) {
                return Err(CliError::Validation(
                    "curlcurl data cannot be nested".to_string(),
                ));
            }
            let (g, _) = build_data(inner, grid)?;
            let chi = CutoffField::new(CutoffSpec { m: *m }, grid)?;
            let (u0, _h0) = curl_curl_data(&g, &chi)?;
            Ok((
                u0,
                Some(LocalizedData {
                    g,
                    chi,
                    m: *m,
                }),
            ))
        }
    }
}
