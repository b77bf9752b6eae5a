//! `canoma` — cooperative (a)synchronous NOMA link analysis from the
//! command line.
//!
//! Subcommands:
//!   rates           exact and closed-form throughputs for a scenario
//!   bounds          baseline / lower / asymptotic / upper chains
//!   optimal-tau     grid search for the best timing mismatch
//!   minimize-power  weighted-sum power minimization under QoS targets
//!   compare         asynchronous vs synchronous minimized power
//!   figure <id>     figure-style sweep tables (fig4 .. fig10)
//!   campaign        seeded randomized verification campaign
//!
//! Exit codes: 0 success, 1 usage/parse error, 2 infeasible scenario
//! (minimize-power), 3 campaign check failure.

mod campaign;
mod presets;
mod scenario;
mod table;

use std::path::PathBuf;
use std::process::ExitCode;

use canoma_core::closed_form::{
    noma_rates, optimal_tau, rate_strong_cross, rate_strong_own, rate_weak, strong_cross_bounds,
    weak_bounds, BoundChain, TauObjective,
};
use canoma_core::matrix::{
    rate_strong_cross_matrix, rate_strong_own_matrix, rate_weak_matrix, MAX_MATRIX_FRAME,
    TAU_WINDOW,
};
use canoma_core::model::derive_snrs;
use canoma_core::power::{compare_weighted_power, minimize_power, verify_qos};
use clap::{Parser, Subcommand};

use campaign::random_campaign;
use presets::{run_preset, FigureId};
use scenario::{load_scenario, LoadedScenario};
use table::{emit, Cell, OutputFormat, ResultTable, TableMeta};

#[derive(Parser, Debug)]
#[command(name = "canoma", version, about = "Cooperative (a)synchronous NOMA link analysis")]
struct Cli {
    /// Scenario file (JSON); required by the scenario-driven subcommands.
    #[arg(long, global = true)]
    scenario: Option<PathBuf>,

    /// Write the result table to this path instead of stdout.
    #[arg(long, global = true)]
    out: Option<PathBuf>,

    /// Output format of the result table.
    #[arg(long, global = true, value_enum, default_value_t = OutputFormat::Csv)]
    format: OutputFormat,

    /// Seed for randomized subcommands.
    #[arg(long, global = true, default_value_t = 1)]
    seed: u64,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Throughputs of the scenario's frame, powers, and channels.
    Rates,
    /// Baseline / lower / asymptotic / upper chains for both rate families.
    Bounds,
    /// Grid search for the throughput-maximizing timing mismatch.
    OptimalTau {
        /// Search grid step (in (0, 0.1]).
        #[arg(long, default_value_t = 0.005)]
        grid_step: f64,
    },
    /// Weighted-sum power minimization under the scenario's QoS targets.
    MinimizePower,
    /// Minimized power of the scenario's mismatch vs the synchronous system.
    Compare,
    /// Figure-style sweep presets.
    Figure {
        #[arg(value_enum)]
        id: FigureId,
    },
    /// Seeded randomized verification campaign.
    Campaign {
        /// Number of random draws.
        #[arg(long, default_value_t = 200)]
        draws: u32,
        /// Pin the timing mismatch instead of drawing it.
        #[arg(long)]
        tau: Option<f64>,
    },
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            // clap renders its own message; help/version requests are success
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(cli) {
        Ok(code) => code,
        Err(msg) => {
            eprintln!("error: {msg}");
            ExitCode::from(1)
        }
    }
}

/// Canonical command string recorded in table provenance.
fn command_string(cli: &Cli) -> String {
    let mut parts = vec!["canoma".to_string()];
    match &cli.command {
        Command::Rates => parts.push("rates".into()),
        Command::Bounds => parts.push("bounds".into()),
        Command::OptimalTau { grid_step } => {
            parts.push("optimal-tau".into());
            parts.push(format!("--grid-step {grid_step}"));
        }
        Command::MinimizePower => parts.push("minimize-power".into()),
        Command::Compare => parts.push("compare".into()),
        Command::Figure { id } => parts.push(format!("figure {}", id.name())),
        Command::Campaign { draws, tau } => {
            parts.push(format!("campaign --draws {draws} --seed {}", cli.seed));
            if let Some(t) = tau {
                parts.push(format!("--tau {t}"));
            }
        }
    }
    if let Some(p) = &cli.scenario {
        parts.push(format!("--scenario {}", p.display()));
    }
    parts.join(" ")
}

fn require_scenario(cli: &Cli) -> Result<LoadedScenario, String> {
    let path = cli
        .scenario
        .as_ref()
        .ok_or_else(|| "this subcommand needs --scenario <path>".to_string())?;
    load_scenario(path).map_err(|e| e.to_string())
}

fn run(cli: Cli) -> Result<ExitCode, String> {
    let meta = TableMeta::new(command_string(&cli));
    let (table, code) = match &cli.command {
        Command::Rates => (rates_table(&require_scenario(&cli)?, meta)?, ExitCode::SUCCESS),
        Command::Bounds => (bounds_table(&require_scenario(&cli)?, meta)?, ExitCode::SUCCESS),
        Command::OptimalTau { grid_step } => (
            optimal_tau_table(&require_scenario(&cli)?, *grid_step, meta)?,
            ExitCode::SUCCESS,
        ),
        Command::MinimizePower => {
            let loaded = require_scenario(&cli)?;
            let (table, feasible) = minimize_table(&loaded, meta)?;
            (table, if feasible { ExitCode::SUCCESS } else { ExitCode::from(2) })
        }
        Command::Compare => (compare_table(&require_scenario(&cli)?, meta)?, ExitCode::SUCCESS),
        Command::Figure { id } => {
            let overrides = match &cli.scenario {
                Some(p) => Some(load_scenario(p).map_err(|e| e.to_string())?),
                None => None,
            };
            (run_preset(*id, overrides.as_ref(), meta), ExitCode::SUCCESS)
        }
        Command::Campaign { draws, tau } => {
            if *draws == 0 {
                return Err("campaign needs at least one draw".into());
            }
            let outcome = random_campaign(cli.seed, *draws, *tau, meta);
            emit(&outcome.table, cli.format, cli.out.as_deref()).map_err(|e| e.to_string())?;
            // summary goes to stderr so the table stream stays clean
            eprintln!("{}", outcome.summary);
            return Ok(if outcome.failures == 0 {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(3)
            });
        }
    };
    emit(&table, cli.format, cli.out.as_deref()).map_err(|e| e.to_string())?;
    Ok(code)
}

// ---------------------------------------------------------------------------
// Scenario-driven tables
// ---------------------------------------------------------------------------

fn rates_table(loaded: &LoadedScenario, mut meta: TableMeta) -> Result<ResultTable, String> {
    let frame = loaded.frame;
    let ch = loaded.scenario.channels;
    let pw = loaded.powers;
    let (snrs, _) = derive_snrs(ch, pw);
    let baseline = noma_rates(ch, pw);
    let with_matrix =
        frame.n <= MAX_MATRIX_FRAME && (TAU_WINDOW..=1.0 - TAU_WINDOW).contains(&frame.tau);
    if !with_matrix {
        meta.note("matrix columns omitted: frame outside the sampled-matrix window");
    }
    let mut columns = vec![
        "n",
        "tau",
        "r_own",
        "r_cross",
        "r_weak",
        "r_own_noma",
        "r_cross_noma",
        "r_weak_noma",
    ];
    if with_matrix {
        columns.extend(["r_own_matrix", "r_cross_matrix", "r_weak_matrix"]);
    }
    let mut table = ResultTable::new(columns, meta);
    let mut row: Vec<Cell> = vec![
        frame.n.into(),
        frame.tau.into(),
        rate_strong_own(frame, snrs.mu1).into(),
        rate_strong_cross(frame, snrs).into(),
        rate_weak(frame, ch, pw).into(),
        baseline.r_own_strong.into(),
        baseline.r_cross_strong.into(),
        baseline.r_weak.into(),
    ];
    if with_matrix {
        row.push(rate_strong_own_matrix(frame, snrs).map_err(|e| e.to_string())?.into());
        row.push(rate_strong_cross_matrix(frame, snrs).map_err(|e| e.to_string())?.into());
        row.push(rate_weak_matrix(frame, ch, pw).map_err(|e| e.to_string())?.into());
    }
    table.push_row(row);
    Ok(table)
}

fn bounds_table(loaded: &LoadedScenario, meta: TableMeta) -> Result<ResultTable, String> {
    let ch = loaded.scenario.channels;
    let pw = loaded.powers;
    let tau = loaded.frame.tau;
    let (snrs, _) = derive_snrs(ch, pw);
    let cross = strong_cross_bounds(snrs, tau).map_err(|e| e.to_string())?;
    let weak = weak_bounds(ch, pw, tau).map_err(|e| e.to_string())?;
    let mut table = ResultTable::new(
        vec!["family", "tau", "baseline_noma", "lower", "asymptotic", "upper"],
        meta,
    );
    let mut push = |name: &str, c: BoundChain| {
        table.push_row(vec![
            name.into(),
            tau.into(),
            c.baseline_noma.into(),
            c.lower.into(),
            c.asymptotic.into(),
            c.upper.into(),
        ]);
    };
    push("strong_cross", cross);
    push("weak", weak);
    Ok(table)
}

fn optimal_tau_table(
    loaded: &LoadedScenario,
    grid_step: f64,
    meta: TableMeta,
) -> Result<ResultTable, String> {
    let ch = loaded.scenario.channels;
    let pw = loaded.powers;
    let n = loaded.frame.n;
    let mut table = ResultTable::new(vec!["objective", "n", "grid_step", "tau_star"], meta);
    for (name, obj) in [("strong_cross", TauObjective::StrongCross), ("weak", TauObjective::Weak)] {
        let t = optimal_tau(n, obj, ch, pw, grid_step).map_err(|e| e.to_string())?;
        table.push_row(vec![name.into(), n.into(), grid_step.into(), t.into()]);
    }
    Ok(table)
}

fn minimize_table(loaded: &LoadedScenario, meta: TableMeta) -> Result<(ResultTable, bool), String> {
    let scenario = &loaded.scenario;
    let sol = minimize_power(scenario).map_err(|e| e.to_string())?;
    let mut table = ResultTable::new(
        vec![
            "feasible",
            "case",
            "infeasible_reason",
            "p1",
            "p2",
            "pr",
            "bs_power",
            "weighted_sum",
            "slack_own",
            "slack_cross",
            "slack_weak",
        ],
        meta,
    );
    let a = sol.allocation;
    let slacks = if sol.feasible {
        Some(verify_qos(&sol, scenario, loaded.frame.n).map_err(|e| e.to_string())?)
    } else {
        None
    };
    let s = |v: Option<f64>| v.map_or(Cell::Text(String::new()), Cell::Num);
    table.push_row(vec![
        sol.feasible.into(),
        sol.case_label.map_or(Cell::Text(String::new()), |c| c.label().into()),
        sol.infeasible_reason.map_or(Cell::Text(String::new()), |r| r.label().into()),
        a.p1.into(),
        a.p2.into(),
        a.pr.into(),
        (a.p1 + a.p2).into(),
        sol.weighted_sum.into(),
        s(slacks.map(|x| x.own_strong)),
        s(slacks.map(|x| x.cross_strong)),
        s(slacks.map(|x| x.weak)),
    ]);
    Ok((table, sol.feasible))
}

fn compare_table(loaded: &LoadedScenario, meta: TableMeta) -> Result<ResultTable, String> {
    let cmp = compare_weighted_power(&loaded.scenario).map_err(|e| e.to_string())?;
    let mut table = ResultTable::new(
        vec![
            "region",
            "delta",
            "anoma_sum",
            "anoma_feasible",
            "anoma_case",
            "noma_sum",
            "noma_feasible",
            "noma_case",
        ],
        meta,
    );
    let case = |s: &canoma_core::power::PowerSolution| -> Cell {
        s.case_label.map_or(Cell::Text(String::new()), |c| c.label().into())
    };
    table.push_row(vec![
        cmp.region.label().into(),
        cmp.delta.map_or(Cell::Text(String::new()), Cell::Num),
        cmp.anoma.weighted_sum.into(),
        cmp.anoma.feasible.into(),
        case(&cmp.anoma),
        cmp.noma.weighted_sum.into(),
        cmp.noma.feasible.into(),
        case(&cmp.noma),
    ]);
    Ok(table)
}
