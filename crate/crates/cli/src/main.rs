use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Instant;

use clap::{Parser, Subcommand};

use helical_ns::solver::run;
use helical_ns_cli::checks::run_checks;
use helical_ns_cli::config::ConfigDocument;
use helical_ns_cli::error::CliError;
use helical_ns_cli::output::{write_diagnostics_csv, VerdictReport};
use helical_ns_cli::snapshot::{read_snapshot, write_snapshot};

/// Pseudo-spectral incompressible Navier-Stokes solver on the periodic box
/// with helical-decomposition diagnostics.
#[derive(Parser)]
#[command(name = "helical-ns", version, about)]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Run a simulation and write diagnostics.csv (plus optional snapshots).
    Run { config: PathBuf },
    /// Run the checks selected in the config and write report.json;
    /// exits 0 only if every check passes.
    Verify { config: PathBuf },
    /// Sweep the free-space annulus profile along rays and write decay CSVs.
    Decay { config: PathBuf },
    /// Print the metadata of a binary snapshot.
    SnapshotInfo { file: PathBuf },
}

fn outdir(cfg: &ConfigDocument) -> Result<PathBuf, CliError> {
    let dir = match std::env::var_os("HELICAL_NS_OUTPUT_ROOT") {
        Some(root) => Path::new(&root).join(&cfg.output.directory),
        None => PathBuf::from(&cfg.output.directory),
    };
    std::fs::create_dir_all(&dir)?;
    Ok(dir)
}

fn cmd_run(config: &Path) -> Result<(), CliError> {
    let cfg = ConfigDocument::load(config)?;
    let built = cfg.build()?;
    let dir = outdir(&cfg)?;
    let out = run(&built.u0, &built.run_spec)?;

    let csv_path = dir.join("diagnostics.csv");
    write_diagnostics_csv(&csv_path, &out.rows)?;
    for (step, state) in &out.snapshots {
        write_snapshot(state, &dir.join(format!("snapshot_{step:08}.hnsf")))?;
    }
    println!(
        "run complete: {} rows to t = {:.6}, c0 = {:.6e}, wrote {}",
        out.rows.len(),
        out.final_state.t,
        out.c0,
        csv_path.display()
    );
    if !out.snapshots.is_empty() {
        println!("wrote {} snapshots under {}", out.snapshots.len(), dir.display());
    }
    Ok(())
}

fn cmd_verify(config: &Path) -> Result<bool, CliError> {
    let cfg = ConfigDocument::load(config)?;
    let dir = outdir(&cfg)?;
    let start = Instant::now();
    let reports = run_checks(&cfg, &dir)?;
    let verdict = VerdictReport::new(
        cfg.digest(),
        cfg.checks.seed,
        start.elapsed().as_secs_f64(),
        reports,
    );
    verdict.write(&dir.join("report.json"))?;
    for c in &verdict.checks {
        println!(
            "{} {}: metric {:.3e} vs tolerance {:.3e}{}",
            if c.pass { "PASS" } else { "FAIL" },
            c.name,
            c.metric,
            c.tolerance,
            if c.warnings.is_empty() {
                String::new()
            } else {
                format!(" ({})", c.warnings.join("; "))
            }
        );
    }
    println!(
        "report: {} ({} checks, overall {})",
        dir.join("report.json").display(),
        verdict.checks.len(),
        if verdict.pass { "PASS" } else { "FAIL" }
    );
    Ok(verdict.pass)
}

fn cmd_decay(config: &Path) -> Result<(), CliError> {
    let cfg = ConfigDocument::load(config)?;
    let dir = outdir(&cfg)?;
    let mut decay_cfg = cfg.clone();
    decay_cfg.checks.names = vec!["decay".to_string()];
    let start = Instant::now();
    let reports = run_checks(&decay_cfg, &dir)?;
    let verdict = VerdictReport::new(
        cfg.digest(),
        cfg.checks.seed,
        start.elapsed().as_secs_f64(),
        reports,
    );
    verdict.write(&dir.join("decay_report.json"))?;
    let c = &verdict.checks[0];
    println!(
        "decay sweep: growth ratio {:.4} (tolerance {}), CSVs under {}",
        c.metric,
        c.tolerance,
        dir.display()
    );
    for w in &c.warnings {
        println!("warning: {w}");
    }
    Ok(())
}

fn cmd_snapshot_info(file: &Path) -> Result<(), CliError> {
    let state = read_snapshot(file)?;
    let grid = state.u.grid();
    println!("snapshot {}", file.display());
    println!("  grid: {} points per axis, box length {:.12}", grid.n(), grid.box_length());
    println!("  t = {:.12}", state.t);
    println!("  diss_total      = {:.12e}", state.diss_total);
    println!("  diss_half_plus  = {:.12e}", state.diss_half_plus);
    println!("  diss_half_minus = {:.12e}", state.diss_half_minus);
    println!("  ||u||_L2 = {:.12e}", state.u.l2_norm());
    println!("  coefficients: {} complex triplets", grid.points());
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result: Result<bool, CliError> = match &cli.cmd {
        Cmd::Run { config } => cmd_run(config).map(|()| true),
        Cmd::Verify { config } => cmd_verify(config),
        Cmd::Decay { config } => cmd_decay(config).map(|()| true),
        Cmd::SnapshotInfo { file } => cmd_snapshot_info(file).map(|()| true),
    };
    match result {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("{e}");
            ExitCode::from(e.exit_code())
        }
    }
}
