//! Maps check names from the config onto the verification harness and
//! collects verdict records.

use std::path::Path;

use helical_ns::data::{random_solenoidal, AnnulusProfile};
use helical_ns::solver::{run, RunOutput};
use helical_ns::verify::{
    check_beltrami_polarity, check_curl_eigenrelations, check_decay, check_energy_balance,
    check_helicity_ode, check_helicity_split, check_orthogonality_many, check_scaling,
    check_theorem1, perturbation_report, CheckReport, DecayParams,
};
use helical_ns::{tolerances, SpectralVectorField};

use crate::config::ConfigDocument;
use crate::error::CliError;
use crate::output::write_decay_csv;

pub const CHECK_NAMES: [&str; 10] = [
    "prop1",
    "prop2",
    "helicity_split",
    "polarity",
    "theorem1",
    "helicity_ode",
    "energy_balance",
    "scaling",
    "decay",
    "perturbation",
];

fn needs_simulation(name: &str) -> bool {
    matches!(
        name,
        "theorem1" | "helicity_ode" | "energy_balance" | "perturbation"
    )
}

fn needs_random_fields(name: &str) -> bool {
    matches!(name, "prop1" | "prop2" | "helicity_split")
}

/// Execute the configured checks. Decay sweeps are also written as CSV
/// under `outdir`.
pub fn run_checks(cfg: &ConfigDocument, outdir: &Path) -> Result<Vec<CheckReport>, CliError> {
    for name in &cfg.checks.names {
        if !CHECK_NAMES.contains(&name.as_str()) {
            return Err(CliError::Parse(format!(
                "unknown check name {name:?}; known checks: {}",
                CHECK_NAMES.join(", ")
            )));
        }
    }
    if cfg.checks.names.is_empty() {
        return Err(CliError::Validation(
            "verify needs at least one check in [checks] names".to_string(),
        ));
    }

    let grid = cfg.grid()?;
    let nu = cfg.physics.nu;

    // one simulation shared by every run-based check
    let mut sim: Option<RunOutput> = None;
    let mut sim_m = 0.0;
    if cfg.checks.names.iter().any(|n| needs_simulation(n)) {
        let built = cfg.build()?;
        let mut spec = built.run_spec;
        spec.keep_states = cfg.checks.names.iter().any(|n| n == "helicity_ode");
        sim_m = spec.experiment.as_ref().map(|e| e.m).unwrap_or(0.0);
        sim = Some(run(&built.u0, &spec)?);
    }

    let fields: Vec<SpectralVectorField> = if cfg.checks.names.iter().any(|n| needs_random_fields(n))
    {
        let max_freq = grid.dealias_max_freq().min(8);
        (0..cfg.checks.random_fields)
            .map(|i| random_solenoidal(grid, cfg.checks.seed + i as u64, max_freq, 1.0))
            .collect()
    } else {
        Vec::new()
    };

    let mut reports = Vec::new();
    for name in &cfg.checks.names {
        let report = match name.as_str() {
            "prop1" => check_curl_eigenrelations(&fields)?,
            "prop2" => check_orthogonality_many(&fields, nu, true)?,
            "helicity_split" => check_helicity_split(&fields)?,
            "polarity" => {
                let built = cfg.build()?;
                check_beltrami_polarity(&built.u0)?
            }
            "theorem1" => {
                let tol = cfg
                    .checks
                    .tolerances
                    .get("theorem1")
                    .copied()
                    .unwrap_or(tolerances::THEOREM1_DRIFT);
                check_theorem1(&sim.as_ref().expect("simulation ran").rows, tol)?
            }
            "helicity_ode" => {
                let tol = cfg.checks.tolerances.get("helicity_ode").copied();
                check_helicity_ode(&sim.as_ref().expect("simulation ran").states, nu, tol)?
            }
            "energy_balance" => check_energy_balance(&sim.as_ref().expect("simulation ran").energy)?,
            "scaling" => {
                let built = cfg.build()?;
                check_scaling(
                    &built.u0,
                    nu,
                    cfg.time.dt,
                    cfg.time.t_end,
                    cfg.time.record_every,
                    2.0,
                )?
            }
            "decay" => {
                let profile = AnnulusProfile::new(cfg.annulus_spec());
                let params = DecayParams {
                    r_max: cfg.decay.r_max,
                    samples: cfg.decay.samples,
                    heat_nu_t: (cfg.decay.heat_nu_t > 0.0).then_some(cfg.decay.heat_nu_t),
                    ..Default::default()
                };
                let (report, sweeps) = check_decay(&profile, &params)?;
                for (i, sweep) in sweeps.iter().enumerate() {
                    write_decay_csv(&outdir.join(format!("decay_ray{i}.csv")), &sweep.base)?;
                    if let Some(heat) = &sweep.heat {
                        write_decay_csv(&outdir.join(format!("decay_ray{i}_heat.csv")), heat)?;
                    }
                }
                report
            }
            "perturbation" => {
                if sim_m == 0.0 {
                    return Err(CliError::Validation(
                        "perturbation check needs a perturbation experiment in the config"
                            .to_string(),
                    ));
                }
                perturbation_report(&sim.as_ref().expect("simulation ran").rows, sim_m)?
            }
            _ => unreachable!("names validated above"),
        };
        reports.push(report);
    }
    Ok(reports)
}
