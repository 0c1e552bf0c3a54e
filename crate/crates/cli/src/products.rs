//! The preset data products and the engine sweep: deterministic CSV
//! emission (LF line endings, '.' decimal, header row first, complex
//! values as re/im column pairs).

use std::f64::consts::FRAC_PI_2;
use std::fs;
use std::path::{Path, PathBuf};

use exciton_core::analytics::{
    compute_fgs, fg_recursion, markov_hop_exponent, stage_label, TABLE_STAGES,
};
use exciton_core::channels::Environment;
use exciton_core::protocol::{run_protocol, ChainConfig, EngineKind, PhaseKind};
use exciton_core::witness::{default_threshold, evaluate_witness};
use rayon::prelude::*;

use crate::manifest::{resolve_config, Grid};
use crate::{CliError, RunArgs, SweepArgs};

/// Shared header of every η-scan product.
const FIG_HEADER: &str = "eta,value_a,value_b";

/// Dense default for the closed-form η scans.
const DEFAULT_SCAN_GRID: Grid = Grid::new(0.0, FRAC_PI_2, 513);
/// Coarser default where every point is a full protocol run.
const DEFAULT_ENGINE_GRID: Grid = Grid::new(0.0, FRAC_PI_2, 33);

/// Scientific-notation float formatting: compact and deterministic for
/// values spanning hundreds of orders of magnitude (plain `Display` would
/// print cos¹⁸(π/2) ≈ 1.5e-298 as a 300-digit decimal).
fn fmt(x: f64) -> String {
    format!("{x:e}")
}

fn csv(header: &str, rows: impl IntoIterator<Item = String>) -> String {
    let mut body = String::from(header);
    body.push('\n');
    for row in rows {
        body.push_str(&row);
        body.push('\n');
    }
    body
}

fn write_product(out_dir: &Path, name: &str, body: &str) -> Result<PathBuf, CliError> {
    fs::create_dir_all(out_dir).map_err(|e| {
        CliError::Validation(format!(
            "cannot create output directory {}: {e}",
            out_dir.display()
        ))
    })?;
    let path = out_dir.join(name);
    fs::write(&path, body)
        .map_err(|e| CliError::Validation(format!("cannot write {}: {e}", path.display())))?;
    println!("wrote {}", path.display());
    Ok(path)
}

pub fn cmd_run(args: &RunArgs) -> Result<(), CliError> {
    let resolved = resolve_config(
        args.config.as_deref(),
        args.engine.as_deref(),
        args.env.as_deref(),
    )?;
    match args.preset.as_str() {
        "table1" => table1(&args.out),
        "fig4" | "fig5" | "fig6" => {
            let grid = args.grid.unwrap_or(DEFAULT_SCAN_GRID);
            fig_scan(&args.out, &args.preset, grid)
        }
        "figs7-9" => {
            let grid = args.grid.unwrap_or(DEFAULT_SCAN_GRID);
            figs7_to_9(&args.out, grid)
        }
        "trace" => trace_product(&args.out, &resolved.config),
        "witness" => {
            let grid = args.grid.unwrap_or(DEFAULT_ENGINE_GRID);
            witness_product(&args.out, &resolved, grid)
        }
        other => Err(CliError::Validation(format!(
            "unknown preset '{other}' (expected table1|fig4|fig5|fig6|figs7-9|trace|witness)"
        ))),
    }
}

/// The η = 0.1 stage table: six decoherence-phase stages of the second
/// iteration, Markov column plus non-Markov F and G.
fn table1(out: &Path) -> Result<(), CliError> {
    let rec = fg_recursion(0.1);
    let rows = TABLE_STAGES
        .iter()
        .zip(rec.stages.iter())
        .map(|(stage, c)| {
            format!(
                "{},{},{},{},{},{}",
                stage_label(*stage),
                fmt(c.markov),
                fmt(c.f.re),
                fmt(c.f.im),
                fmt(c.g.re),
                fmt(c.g.im)
            )
        });
    write_product(
        out,
        "table1.csv",
        &csv("stage,markov,F_re,F_im,G_re,G_im", rows),
    )?;
    Ok(())
}

/// Closed-form η scans: fig4 = (Re F, cos¹⁸η), fig5 = (Re F, Im G),
/// fig6 = (s, cos¹²η).
fn fig_scan(out: &Path, preset: &str, grid: Grid) -> Result<(), CliError> {
    grid.validate()?;
    let rows = grid.points().into_iter().map(|eta| {
        let c = compute_fgs(eta);
        let (a, b) = match preset {
            "fig4" => (c.f.re, eta.cos().powi(18)),
            "fig5" => (c.f.re, c.g.im),
            "fig6" => (c.s, eta.cos().powi(12)),
            _ => unreachable!("fig_scan called with {preset}"),
        };
        format!("{},{},{}", fmt(eta), fmt(a), fmt(b))
    });
    write_product(out, &format!("{preset}.csv"), &csv(FIG_HEADER, rows))?;
    Ok(())
}

/// Full complex scans of F, G and s: three files in the fig schema with
/// (value_a, value_b) = (re, im).
fn figs7_to_9(out: &Path, grid: Grid) -> Result<(), CliError> {
    grid.validate()?;
    let scans = grid
        .points()
        .into_iter()
        .map(compute_fgs)
        .collect::<Vec<_>>();
    let etas = grid.points();
    let f_rows = etas
        .iter()
        .zip(&scans)
        .map(|(eta, c)| format!("{},{},{}", fmt(*eta), fmt(c.f.re), fmt(c.f.im)));
    write_product(out, "fig7_f.csv", &csv(FIG_HEADER, f_rows))?;
    let g_rows = etas
        .iter()
        .zip(&scans)
        .map(|(eta, c)| format!("{},{},{}", fmt(*eta), fmt(c.g.re), fmt(c.g.im)));
    write_product(out, "fig8_g.csv", &csv(FIG_HEADER, g_rows))?;
    let s_rows = etas
        .iter()
        .zip(&scans)
        .map(|(eta, c)| format!("{},{},{}", fmt(*eta), fmt(c.s), fmt(0.0)));
    write_product(out, "fig9_s.csv", &csv(FIG_HEADER, s_rows))?;
    Ok(())
}

/// One full protocol run in long format: per-iteration monomer/reservoir
/// Bloch-z values, the conservation account, and the recombined photon.
fn trace_product(out: &Path, config: &ChainConfig) -> Result<(), CliError> {
    let trace = run_protocol(config)?;
    let mut rows = Vec::new();
    for rec in &trace.iterations {
        let phase = match rec.phase {
            PhaseKind::DecoherenceAndTransfer => "decoherence+transfer",
            PhaseKind::Recombination => "recombination",
        };
        for (i, z) in rec.monomer_z.iter().enumerate() {
            rows.push(format!(
                "{},{phase},monomer_z,{},{}",
                rec.iteration,
                i + 1,
                fmt(*z)
            ));
        }
        for (i, z) in rec.reservoir_z.iter().enumerate() {
            rows.push(format!(
                "{},{phase},reservoir_z,{},{}",
                rec.iteration,
                i + 1,
                fmt(*z)
            ));
        }
        rows.push(format!(
            "{},{phase},conservation_total,0,{}",
            rec.iteration,
            fmt(rec.conservation_total)
        ));
    }
    let last = trace.iterations.len();
    for (i, p) in trace.photon.populations.iter().enumerate() {
        rows.push(format!("{last},recombination,photon_p,{i},{}", fmt(*p)));
    }
    write_product(
        out,
        "trace.csv",
        &csv("iteration,phase,record,index,value", rows),
    )?;
    Ok(())
}

/// Witness report over an η grid: one protocol run per point (worker
/// pool; rows ordered by η). Uses the exact engine unless one was
/// requested explicitly.
fn witness_product(
    out: &Path,
    resolved: &crate::manifest::Resolved,
    grid: Grid,
) -> Result<(), CliError> {
    grid.validate()?;
    let mut base = resolved.config.clone();
    if !resolved.engine_explicit {
        base.engine = EngineKind::Exact;
    }
    let j1 = base.spec.couplings.first().copied().unwrap_or(1.0);
    let threshold = default_threshold(base.t, j1);
    let rows = grid
        .points()
        .par_iter()
        .map(|&eta| {
            let mut cfg = base.clone();
            cfg.eta = eta;
            let trace = run_protocol(&cfg)?;
            let report = evaluate_witness(&trace, threshold)?;
            Ok(format!(
                "{},{},{},{}",
                fmt(eta),
                fmt(report.coherence),
                fmt(report.conservation_residual),
                report.verdict
            ))
        })
        .collect::<Result<Vec<String>, CliError>>()?;
    write_product(
        out,
        "witness.csv",
        &csv("eta,coherence,residual,verdict", rows),
    )?;
    Ok(())
}

/// Engine sweep: hop12_antisym from a full protocol run per η (value_a)
/// next to the closed-form reference (value_b) — the Markov damping
/// exponent for the configured (N, M), or the N = M = 3 non-Markov F.
pub fn cmd_sweep(args: &SweepArgs) -> Result<(), CliError> {
    let resolved = resolve_config(
        args.config.as_deref(),
        args.engine.as_deref(),
        args.env.as_deref(),
    )?;
    let grid = args.grid.unwrap_or(DEFAULT_ENGINE_GRID);
    grid.validate()?;
    let base = resolved.config;
    let rows = grid
        .points()
        .par_iter()
        .map(|&eta| {
            let mut cfg = base.clone();
            cfg.eta = eta;
            let trace = run_protocol(&cfg)?;
            let engine_hop = trace
                .final_coefficients()
                .and_then(|t| t.get("hop12_antisym"))
                .map(|v| v.re)
                .unwrap_or(0.0);
            let reference = match cfg.environment {
                Environment::Markov => eta
                    .cos()
                    .powi(markov_hop_exponent(cfg.n_monomers, cfg.n_reservoir) as i32),
                Environment::NonMarkov => compute_fgs(eta).f.re,
            };
            Ok(format!(
                "{},{},{}",
                fmt(eta),
                fmt(engine_hop),
                fmt(reference)
            ))
        })
        .collect::<Result<Vec<String>, CliError>>()?;
    write_product(&args.out, "sweep.csv", &csv(FIG_HEADER, rows))?;
    Ok(())
}
