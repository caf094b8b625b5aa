use std::f64::consts::FRAC_1_SQRT_2;
use std::process::ExitCode;
use std::sync::Arc;

use anyhow::{anyhow, Context};
use serde::Serialize;
use wcf_core::adversary::{
    alice_cheat_bruteforce, alice_cheat_lossless, alice_cheat_lossy, alice_optimal_amplitudes, bob_cheat, scf_solve,
    ScfResult,
};
use wcf_core::fock::{FockBasis, DEFAULT_TRUNCATION};
use wcf_core::protocol::{honest_closed_form, honest_simulated, LossBudget, OutcomeDistribution, ProtocolParams};
use wcf_core::solver::{crossover_bracket, link_budget, solve_fair_balanced, sweep_link, LinkModel, SolveResult};
use wcf_core::verify::{run_all, VerifyConfig, VerifyReport};

use crate::config::{DistanceRange, Format, RunConfig};
use crate::output::{Cell, Rendered, Table};
use crate::{Cli, Command, LinkArgs, LossArgs, ParamArgs, RangeArgs};

pub enum Failure {
    /// Bad flags or configuration; exit code 2.
    Config(anyhow::Error),
    /// A computation could not be carried out; exit code 1.
    Compute(anyhow::Error),
}

fn config_err(e: impl Into<anyhow::Error>) -> Failure {
    Failure::Config(e.into())
}

fn compute_err(e: impl Into<anyhow::Error>) -> Failure {
    Failure::Compute(e.into())
}

const HONEST_TOLERANCE: f64 = 1e-10;
const ORACLE_TOLERANCE: f64 = 1e-9;

/// Resolved settings shared by every command.
struct Ctx {
    cfg: RunConfig,
    format: Option<Format>,
    out: Option<std::path::PathBuf>,
    truncation: Option<usize>,
    oracle: bool,
}

pub fn run(cli: &Cli) -> Result<ExitCode, Failure> {
    let cfg = match &cli.common.config {
        Some(path) => RunConfig::load(path).map_err(config_err)?,
        None => RunConfig::default(),
    };
    let ctx = Ctx {
        format: cli.common.format.or(cfg.format),
        out: cli.common.out.clone().or_else(|| cfg.out.clone()),
        truncation: cli.common.truncation.or(cfg.truncation),
        oracle: cli.common.oracle || cfg.oracle.unwrap_or(false),
        cfg,
    };
    match &cli.command {
        Command::Honest { params, losses } => honest(&ctx, params, losses),
        Command::Cheat { params, losses } => cheat(&ctx, params, losses),
        Command::Solve {
            z,
            eta_d,
            distance,
            link,
            losses,
        } => solve(&ctx, *z, *eta_d, *distance, link, losses),
        Command::Sweep { z, eta_d, link, range } => sweep(&ctx, *z, *eta_d, link, range),
        Command::Scf => scf(&ctx),
        Command::Verify { seed, samples } => verify(&ctx, *seed, *samples),
    }
}

fn emit<T: Serialize>(ctx: &Ctx, default: Format, rendered: &Rendered<T>) -> Result<(), Failure> {
    let text = rendered.render(ctx.format.unwrap_or(default));
    match &ctx.out {
        Some(path) => std::fs::write(path, text)
            .with_context(|| format!("writing {}", path.display()))
            .map_err(compute_err),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn exit(passed: bool) -> ExitCode {
    if passed {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(1)
    }
}

fn resolve_params(ctx: &Ctx, flags: &ParamArgs) -> Result<ProtocolParams, Failure> {
    let x0 = 1.0 - FRAC_1_SQRT_2;
    let base = match ctx.cfg.params {
        Some(p) => p,
        None => ProtocolParams::fair_lossless(x0).map_err(config_err)?,
    };
    let p = ProtocolParams {
        x: flags.x.unwrap_or(base.x),
        y: flags.y.unwrap_or(base.y),
        z: flags.z.unwrap_or(base.z),
    };
    p.validate().map_err(config_err)?;
    Ok(p)
}

fn resolve_losses(ctx: &Ctx, flags: &LossArgs) -> Result<LossBudget, Failure> {
    let base = ctx.cfg.losses.unwrap_or_else(LossBudget::lossless);
    let l = LossBudget {
        eta_t: flags.eta_t.unwrap_or(base.eta_t),
        eta_f_a: flags.eta_f_a.unwrap_or(base.eta_f_a),
        eta_f_b: flags.eta_f_b.unwrap_or(base.eta_f_b),
        eta_d_a: flags.eta_d_a.unwrap_or(base.eta_d_a),
        eta_d_b: flags.eta_d_b.unwrap_or(base.eta_d_b),
        p_dc: flags.p_dc.unwrap_or(base.p_dc),
    };
    l.validate().map_err(config_err)?;
    Ok(l)
}

fn resolve_link(ctx: &Ctx, flags: &LinkArgs, distance: Option<f64>) -> Result<LinkModel, Failure> {
    let base = ctx.cfg.link.unwrap_or_default();
    let l = LinkModel {
        distance_km: distance.unwrap_or(base.distance_km),
        attenuation_db_per_km: flags.attenuation_db_per_km.unwrap_or(base.attenuation_db_per_km),
        switch_time_ns: flags.switch_time_ns.unwrap_or(base.switch_time_ns),
        group_velocity_km_per_s: flags.group_velocity_km_per_s.unwrap_or(base.group_velocity_km_per_s),
    };
    l.validate().map_err(config_err)?;
    Ok(l)
}

fn resolve_z_eta(ctx: &Ctx, z: Option<f64>, eta_d: Option<f64>) -> Result<(f64, f64), Failure> {
    let z = z.or(ctx.cfg.z).unwrap_or(0.57);
    let eta_d = eta_d.or(ctx.cfg.eta_d).unwrap_or(0.95);
    if !(0.0..=1.0).contains(&z) {
        return Err(config_err(anyhow!("z = {z} is outside [0, 1]")));
    }
    if !(eta_d > 0.0 && eta_d <= 1.0) {
        return Err(config_err(anyhow!("eta_d = {eta_d} is outside (0, 1]")));
    }
    Ok((z, eta_d))
}

fn distribution_row(label: &str, d: &OutcomeDistribution) -> Vec<Cell> {
    vec![label.into(), d.p_alice_wins.into(), d.p_bob_wins.into(), d.p_abort.into()]
}

#[derive(Serialize)]
struct HonestReport {
    params: ProtocolParams,
    losses: LossBudget,
    truncation: usize,
    closed_form: OutcomeDistribution,
    simulated: OutcomeDistribution,
    max_deviation: f64,
    passed: bool,
}

fn honest(ctx: &Ctx, params: &ParamArgs, losses: &LossArgs) -> Result<ExitCode, Failure> {
    let p = resolve_params(ctx, params)?;
    let l = resolve_losses(ctx, losses)?;
    let cap = ctx.truncation.unwrap_or(DEFAULT_TRUNCATION);
    let basis = Arc::new(FockBasis::new(3, cap).map_err(config_err)?);
    let closed = honest_closed_form(&p, &l).map_err(compute_err)?;
    let simulated = honest_simulated(&p, &l, basis).map_err(compute_err)?;
    let dev = closed.max_deviation(&simulated);
    let passed = dev <= HONEST_TOLERANCE;

    let mut table = Table::new(vec!["source", "p_alice_wins", "p_bob_wins", "p_abort"]);
    table.push(distribution_row("closed_form", &closed));
    table.push(distribution_row("simulated", &simulated));
    let report = HonestReport {
        params: p,
        losses: l,
        truncation: cap,
        closed_form: closed,
        simulated,
        max_deviation: dev,
        passed,
    };
    emit(
        ctx,
        Format::Table,
        &Rendered {
            table,
            value: report,
            notes: vec![format!("max deviation {dev:.3e} ({})", if passed { "ok" } else { "FAILED" })],
        },
    )?;
    if !passed && l.p_dc > 0.0 {
        eprintln!("wcf: dark counts enter the simulation only; the closed form ignores them");
    }
    Ok(exit(passed))
}

#[derive(Serialize)]
struct OracleReport {
    truncation: usize,
    eigenvalue: f64,
    deviation: f64,
    fidelity: f64,
    passed: bool,
}

#[derive(Serialize)]
struct CheatReport {
    params: ProtocolParams,
    losses: LossBudget,
    p_d_alice: f64,
    p_d_alice_lossless: f64,
    p_d_bob: f64,
    l_one: usize,
    bias: f64,
    product: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    oracle: Option<OracleReport>,
}

fn cheat(ctx: &Ctx, params: &ParamArgs, losses: &LossArgs) -> Result<ExitCode, Failure> {
    let p = resolve_params(ctx, params)?;
    let l = resolve_losses(ctx, losses)?;
    let alice = alice_cheat_lossy(&p, &l).map_err(compute_err)?;
    let p_d_bob = bob_cheat(&p, &l).map_err(compute_err)?;
    let oracle = if ctx.oracle {
        let cap = ctx.truncation.unwrap_or(alice.l_one + 2);
        let basis = Arc::new(FockBasis::new(3, cap).map_err(config_err)?);
        let bf = alice_cheat_bruteforce(&p, &l, basis).map_err(config_err)?;
        let phi = alice_optimal_amplitudes(&p, &l, bf.state.basis()).map_err(compute_err)?;
        let deviation = (bf.probability - alice.probability).abs();
        Some(OracleReport {
            truncation: cap,
            eigenvalue: bf.probability,
            deviation,
            fidelity: bf.state.fidelity_with_pure(&phi).map_err(compute_err)?,
            passed: deviation <= ORACLE_TOLERANCE,
        })
    } else {
        None
    };
    let report = CheatReport {
        params: p,
        losses: l,
        p_d_alice: alice.probability,
        p_d_alice_lossless: alice_cheat_lossless(&p).map_err(compute_err)?,
        p_d_bob,
        l_one: alice.l_one,
        bias: alice.probability.max(p_d_bob) - 0.5,
        product: alice.probability * p_d_bob,
        oracle,
    };

    let mut header = vec!["p_d_alice", "p_d_bob", "l_one", "bias", "product"];
    let mut row: Vec<Cell> = vec![
        report.p_d_alice.into(),
        report.p_d_bob.into(),
        report.l_one.into(),
        report.bias.into(),
        report.product.into(),
    ];
    let mut notes = Vec::new();
    if let Some(o) = &report.oracle {
        header.extend(["oracle", "oracle_deviation", "oracle_fidelity"]);
        row.extend([o.eigenvalue.into(), o.deviation.into(), o.fidelity.into()]);
        notes.push(format!(
            "oracle at truncation {}: deviation {:.3e} ({})",
            o.truncation,
            o.deviation,
            if o.passed { "ok" } else { "FAILED" }
        ));
    }
    let mut table = Table::new(header);
    table.push(row);
    let passed = report.oracle.as_ref().is_none_or(|o| o.passed);
    emit(ctx, Format::Table, &Rendered { table, value: report, notes })?;
    Ok(exit(passed))
}

const SOLVE_HEADER: [&str; 11] = [
    "d_km",
    "x",
    "y",
    "z",
    "p_h",
    "p_ab",
    "p_d_quantum",
    "p_d_classical",
    "l_one",
    "advantage",
    "converged",
];

fn solve_row(d_km: Cell, outcome: &Result<SolveResult, String>) -> Vec<Cell> {
    let mut row = vec![d_km];
    match outcome {
        Ok(r) => {
            row.extend([
                r.x.into(),
                r.y.into(),
                r.z.into(),
                r.p_h.into(),
                r.p_ab.into(),
                r.p_d_quantum.into(),
                r.p_d_classical.into(),
                r.l_one.into(),
                r.advantage.into(),
                r.converged.into(),
                "".into(),
            ]);
        }
        Err(e) => {
            row.extend((0..8).map(|_| Cell::from("")));
            row.extend([false.into(), false.into(), e.clone().into()]);
        }
    }
    row
}

fn solve_table() -> Table {
    let mut header = SOLVE_HEADER.to_vec();
    header.push("error");
    Table::new(header)
}

#[derive(Serialize)]
struct SolveReport {
    #[serde(skip_serializing_if = "Option::is_none")]
    link: Option<LinkModel>,
    losses: LossBudget,
    result: SolveResult,
}

fn solve(
    ctx: &Ctx,
    z: Option<f64>,
    eta_d: Option<f64>,
    distance: Option<f64>,
    link: &LinkArgs,
    losses: &LossArgs,
) -> Result<ExitCode, Failure> {
    let (z, eta_d) = resolve_z_eta(ctx, z, eta_d)?;
    // an explicit loss budget replaces the link model
    let (link, losses) = if ctx.cfg.losses.is_some() || losses.any() {
        (None, resolve_losses(ctx, losses)?)
    } else {
        let link = resolve_link(ctx, link, distance)?;
        (Some(link), link_budget(&link, eta_d, eta_d).map_err(config_err)?)
    };
    let result = solve_fair_balanced(z, &losses).map_err(compute_err)?;
    let mut table = solve_table();
    let d = link.map_or(Cell::from(""), |l| Cell::from(l.distance_km));
    table.push(solve_row(d, &Ok(result)));
    emit(
        ctx,
        Format::Table,
        &Rendered {
            table,
            value: SolveReport { link, losses, result },
            notes: vec![format!("converged after {} iterations", result.iterations)],
        },
    )?;
    Ok(ExitCode::SUCCESS)
}

fn resolve_distances(ctx: &Ctx, flags: &RangeArgs) -> Result<Vec<f64>, Failure> {
    if let Some(d) = &flags.distances {
        return Ok(d.clone());
    }
    let base = if flags.d_start.is_some() || flags.d_stop.is_some() || flags.d_step.is_some() {
        DistanceRange::default()
    } else if let Some(d) = &ctx.cfg.distances {
        return Ok(d.clone());
    } else {
        ctx.cfg.range.unwrap_or_default()
    };
    DistanceRange {
        start: flags.d_start.unwrap_or(base.start),
        stop: flags.d_stop.unwrap_or(base.stop),
        step: flags.d_step.unwrap_or(base.step),
    }
    .values()
    .map_err(config_err)
}

#[derive(Serialize)]
struct SweepEntry {
    d_km: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    result: Option<SolveResult>,
    #[serde(skip_serializing_if = "Option::is_none")]
    error: Option<String>,
}

#[derive(Serialize)]
struct SweepReport {
    z: f64,
    eta_d: f64,
    link: LinkModel,
    /// Last distance with advantage and first without.
    crossover: Option<(f64, f64)>,
    rows: Vec<SweepEntry>,
}

fn sweep(ctx: &Ctx, z: Option<f64>, eta_d: Option<f64>, link: &LinkArgs, range: &RangeArgs) -> Result<ExitCode, Failure> {
    let (z, eta_d) = resolve_z_eta(ctx, z, eta_d)?;
    let link = resolve_link(ctx, link, None)?;
    let distances = resolve_distances(ctx, range)?;
    let rows = sweep_link(&link, &distances, z, eta_d, eta_d).map_err(config_err)?;
    let crossover = crossover_bracket(&rows);

    let mut table = solve_table();
    let mut entries = Vec::with_capacity(rows.len());
    for r in &rows {
        let outcome = r.outcome.clone().map_err(|e| e.to_string());
        table.push(solve_row(r.d_km.into(), &outcome));
        let (result, error) = match outcome {
            Ok(s) => (Some(s), None),
            Err(e) => (None, Some(e)),
        };
        entries.push(SweepEntry {
            d_km: r.d_km,
            result,
            error,
        });
    }
    let failed = entries.iter().filter(|e| e.error.is_some()).count();
    let mut notes = vec![match crossover {
        Some((a, b)) => format!("crossover between {a} and {b} km"),
        None => "no crossover in range".into(),
    }];
    if failed > 0 {
        notes.push(format!("{failed} rows failed"));
    }
    emit(
        ctx,
        Format::Csv,
        &Rendered {
            table,
            value: SweepReport {
                z,
                eta_d,
                link,
                crossover,
                rows: entries,
            },
            notes,
        },
    )?;
    if failed > 0 {
        eprintln!("wcf: {failed} of {} distances have no operating point", rows.len());
    }
    Ok(exit(failed == 0))
}

fn scf(ctx: &Ctx) -> Result<ExitCode, Failure> {
    let r: ScfResult = scf_solve().map_err(compute_err)?;
    let mut table = Table::new(vec!["x", "y", "z", "p", "epsilon", "bias"]);
    table.push(vec![r.x.into(), r.y.into(), r.z.into(), r.p.into(), r.epsilon.into(), r.bias.into()]);
    emit(
        ctx,
        Format::Table,
        &Rendered {
            table,
            value: r,
            notes: Vec::new(),
        },
    )?;
    Ok(ExitCode::SUCCESS)
}

fn verify(ctx: &Ctx, seed: Option<u64>, samples: Option<usize>) -> Result<ExitCode, Failure> {
    let defaults = VerifyConfig::default();
    let cfg = VerifyConfig {
        seed: seed.or(ctx.cfg.seed).unwrap_or(defaults.seed),
        samples: samples.or(ctx.cfg.samples).unwrap_or(defaults.samples),
    };
    let report: VerifyReport = run_all(&cfg);
    let mut table = Table::new(vec!["check", "passed", "worst", "tolerance", "detail"]);
    for c in &report.checks {
        table.push(vec![
            c.name.clone().into(),
            c.passed.into(),
            c.worst.into(),
            c.tolerance.into(),
            c.detail.clone().into(),
        ]);
    }
    let summary = format!("{} passed, {} failed", report.passed(), report.failed());
    let all = report.all_passed();
    emit(
        ctx,
        Format::Table,
        &Rendered {
            table,
            value: report,
            notes: vec![summary.clone()],
        },
    )?;
    if !all {
        eprintln!("wcf: verification: {summary}");
    }
    Ok(exit(all))
}
