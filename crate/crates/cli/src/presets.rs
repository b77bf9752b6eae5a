//! Figure-style sweep presets: each preset reproduces one of the
//! standard result sweeps as a plot-ready table.
//!
//! Sweep grids (point counts, ranges) are documented choices covering
//! the plotted domains at desk-scale cost: gain sweeps use 50 log-spaced
//! points over [0.1, 10]; frame-length sweeps use the decade ladder
//! {1, 2, 5, ..., 1000}; target-SINR grids are 40 x 40 linear over
//! [0.1, 30]; the weight sweep steps omega_s by 0.02.
//!
//! A scenario file may override the preset's channels, limits, weights,
//! `n_star`, mismatch, and (where the preset does not sweep them)
//! powers. Every preset is deterministic given (figure, overrides).

use canoma_core::closed_form::{
    noma_rates, optimal_tau, rate_strong_cross, rate_strong_own, rate_weak, strong_cross_bounds,
    weak_bounds, TauObjective,
};
use canoma_core::matrix::{
    rate_strong_cross_matrix, rate_strong_own_matrix, rate_weak_matrix, MAX_MATRIX_FRAME,
    TAU_WINDOW,
};
use canoma_core::model::{
    FrameConfig, LinkChannels, PowerAllocation, PowerScenario, StrongUserSnrs,
};
use canoma_core::power::{compare_weighted_power, minimize_power, rate_target_from_sinr};

use crate::scenario::LoadedScenario;
use crate::table::{Cell, ResultTable, TableMeta};

/// The available figure presets.
#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum FigureId {
    /// Strong-user rates vs the BS -> strong-user gain.
    Fig4,
    /// Weak-user rate vs the relay-link gain.
    Fig5,
    /// Rates vs frame length against asymptotes and bounds.
    Fig6,
    /// Optimal timing mismatch vs frame length.
    Fig7,
    /// Minimized weighted sum power over the target-SINR grid.
    Fig8,
    /// Power saving of the asynchronous system and feasibility regions.
    Fig9,
    /// Power split vs the BS weight.
    Fig10,
}

impl FigureId {
    pub fn name(&self) -> &'static str {
        match self {
            FigureId::Fig4 => "fig4",
            FigureId::Fig5 => "fig5",
            FigureId::Fig6 => "fig6",
            FigureId::Fig7 => "fig7",
            FigureId::Fig8 => "fig8",
            FigureId::Fig9 => "fig9",
            FigureId::Fig10 => "fig10",
        }
    }
}

/// Preset parameters after applying scenario overrides.
struct PresetContext {
    channels: LinkChannels,
    powers: Option<PowerAllocation>,
    tau: f64,
    weights: (f64, f64),
    limits: (f64, f64),
    n_star: u32,
}

impl PresetContext {
    fn new(default_channels: LinkChannels, overrides: Option<&LoadedScenario>) -> Self {
        match overrides {
            Some(s) => PresetContext {
                channels: s.scenario.channels,
                powers: Some(s.powers),
                tau: s.frame.tau,
                weights: (s.scenario.omega_s, s.scenario.omega_r),
                limits: (s.scenario.ps_max, s.scenario.pr_max),
                n_star: s.scenario.n_star,
            },
            None => PresetContext {
                channels: default_channels,
                powers: None,
                tau: 0.5,
                weights: (0.2, 0.8),
                limits: (20.0, 5.0),
                n_star: 100,
            },
        }
    }
}

fn log_spaced(lo: f64, hi: f64, points: usize) -> Vec<f64> {
    let (l0, l1) = (lo.log10(), hi.log10());
    (0..points)
        .map(|k| 10f64.powf(l0 + (l1 - l0) * k as f64 / (points - 1) as f64))
        .collect()
}

const FRAME_LADDER: [u32; 10] = [1, 2, 5, 10, 20, 50, 100, 200, 500, 1000];

/// The two BS power splits the rate sweeps are evaluated at, scaled to
/// the given total.
fn splits(total: f64) -> [(f64, f64); 2] {
    [(total / 5.0, 4.0 * total / 5.0), (2.0 * total / 5.0, 3.0 * total / 5.0)]
}

fn matrix_ok(n: u32, tau: f64) -> bool {
    n <= MAX_MATRIX_FRAME && (TAU_WINDOW..=1.0 - TAU_WINDOW).contains(&tau)
}

/// Run a figure preset, optionally overridden by a scenario file.
pub fn run_preset(id: FigureId, overrides: Option<&LoadedScenario>, meta: TableMeta) -> ResultTable {
    match id {
        FigureId::Fig4 => fig4(overrides, meta),
        FigureId::Fig5 => fig5(overrides, meta),
        FigureId::Fig6 => fig6(overrides, meta),
        FigureId::Fig7 => fig7(overrides, meta),
        FigureId::Fig8 => fig8(overrides, meta, false),
        FigureId::Fig9 => fig8(overrides, meta, true),
        FigureId::Fig10 => fig10(overrides, meta),
    }
}

/// Strong-user rates vs |h1|^2 at N = 10, total BS power 5, relay
/// silent; sampled-matrix and closed-form columns side by side.
fn fig4(overrides: Option<&LoadedScenario>, mut meta: TableMeta) -> ResultTable {
    let ctx = PresetContext::new(LinkChannels { h1_sq: 1.0, h2_sq: 1.0, h12_sq: 1.0 }, overrides);
    let n = 10;
    let total = ctx.powers.map_or(5.0, |p| p.p1 + p.p2).max(f64::MIN_POSITIVE);
    let with_matrix = matrix_ok(n, ctx.tau);
    if !with_matrix {
        meta.note("matrix columns omitted: frame outside the sampled-matrix window");
    }
    let mut columns = vec!["h1_sq", "p1", "p2", "r_own", "r_own_noma", "r_cross", "r_cross_noma"];
    if with_matrix {
        columns.extend(["r_own_matrix", "r_cross_matrix"]);
    }
    let mut table = ResultTable::new(columns, meta);
    let frame = FrameConfig::new(n, ctx.tau).expect("preset frame");
    for h1_sq in log_spaced(0.1, 10.0, 50) {
        for (p1, p2) in splits(total) {
            let snrs = StrongUserSnrs { mu1: p1 * h1_sq, mu2: p2 * h1_sq };
            let ch = LinkChannels { h1_sq, ..ctx.channels };
            let pw = PowerAllocation { p1, p2, pr: 0.0 };
            let baseline = noma_rates(ch, pw);
            let mut row: Vec<Cell> = vec![
                h1_sq.into(),
                p1.into(),
                p2.into(),
                rate_strong_own(frame, snrs.mu1).into(),
                baseline.r_own_strong.into(),
                rate_strong_cross(frame, snrs).into(),
                baseline.r_cross_strong.into(),
            ];
            if with_matrix {
                row.push(rate_strong_own_matrix(frame, snrs).expect("in window").into());
                row.push(rate_strong_cross_matrix(frame, snrs).expect("in window").into());
            }
            table.push_row(row);
        }
    }
    table
}

/// Weak-user rate vs |h12|^2 at N = 10, total BS power 5, pr = 2,
/// |h2|^2 = 1.
fn fig5(overrides: Option<&LoadedScenario>, mut meta: TableMeta) -> ResultTable {
    let ctx = PresetContext::new(LinkChannels { h1_sq: 1.0, h2_sq: 1.0, h12_sq: 1.0 }, overrides);
    let n = 10;
    let total = ctx.powers.map_or(5.0, |p| p.p1 + p.p2).max(f64::MIN_POSITIVE);
    let pr = ctx.powers.map_or(2.0, |p| p.pr);
    let with_matrix = matrix_ok(n, ctx.tau);
    if !with_matrix {
        meta.note("matrix column omitted: frame outside the sampled-matrix window");
    }
    let mut columns = vec!["h12_sq", "p1", "p2", "pr", "r_weak", "r_weak_noma"];
    if with_matrix {
        columns.push("r_weak_matrix");
    }
    let mut table = ResultTable::new(columns, meta);
    let frame = FrameConfig::new(n, ctx.tau).expect("preset frame");
    for h12_sq in log_spaced(0.1, 10.0, 50) {
        for (p1, p2) in splits(total) {
            let ch = LinkChannels { h12_sq, ..ctx.channels };
            let pw = PowerAllocation { p1, p2, pr };
            let mut row: Vec<Cell> = vec![
                h12_sq.into(),
                p1.into(),
                p2.into(),
                pr.into(),
                rate_weak(frame, ch, pw).into(),
                noma_rates(ch, pw).r_weak.into(),
            ];
            if with_matrix {
                row.push(rate_weak_matrix(frame, ch, pw).expect("in window").into());
            }
            table.push_row(row);
        }
    }
    table
}

/// Rates vs frame length at p = (1.5, 3.5, 2), gains (1, 0.8, 1),
/// with asymptote, lower and upper bounds, and synchronous baseline.
fn fig6(overrides: Option<&LoadedScenario>, meta: TableMeta) -> ResultTable {
    let ctx = PresetContext::new(LinkChannels { h1_sq: 1.0, h2_sq: 0.8, h12_sq: 1.0 }, overrides);
    let pw = ctx.powers.unwrap_or(PowerAllocation { p1: 1.5, p2: 3.5, pr: 2.0 });
    let ch = ctx.channels;
    let snrs = StrongUserSnrs { mu1: pw.p1 * ch.h1_sq, mu2: pw.p2 * ch.h1_sq };
    let cross_chain = strong_cross_bounds(snrs, ctx.tau).expect("positive SNRs");
    let weak_chain = weak_bounds(ch, pw, ctx.tau).expect("positive SNRs");
    let mut table = ResultTable::new(
        vec![
            "n",
            "r_cross",
            "r_cross_asymp",
            "r_cross_lower",
            "r_cross_upper",
            "r_cross_noma",
            "r_weak",
            "r_weak_asymp",
            "r_weak_lower",
            "r_weak_upper",
            "r_weak_noma",
        ],
        meta,
    );
    for n in FRAME_LADDER {
        let frame = FrameConfig::new(n, ctx.tau).expect("preset frame");
        table.push_row(vec![
            n.into(),
            rate_strong_cross(frame, snrs).into(),
            cross_chain.asymptotic.into(),
            cross_chain.lower.into(),
            cross_chain.upper.into(),
            cross_chain.baseline_noma.into(),
            rate_weak(frame, ch, pw).into(),
            weak_chain.asymptotic.into(),
            weak_chain.lower.into(),
            weak_chain.upper.into(),
            weak_chain.baseline_noma.into(),
        ]);
    }
    table
}

/// Optimal mismatch vs frame length at gains (1, 0.5, 2), total BS
/// power 5, pr = 2, for both power splits and both objectives.
fn fig7(overrides: Option<&LoadedScenario>, meta: TableMeta) -> ResultTable {
    let ctx = PresetContext::new(LinkChannels { h1_sq: 1.0, h2_sq: 0.5, h12_sq: 2.0 }, overrides);
    let total = ctx.powers.map_or(5.0, |p| p.p1 + p.p2).max(f64::MIN_POSITIVE);
    let pr = ctx.powers.map_or(2.0, |p| p.pr);
    let mut table = ResultTable::new(vec!["n", "p1", "p2", "tau_star_cross", "tau_star_weak"], meta);
    for n in FRAME_LADDER {
        for (p1, p2) in splits(total) {
            let pw = PowerAllocation { p1, p2, pr };
            let cross = optimal_tau(n, TauObjective::StrongCross, ctx.channels, pw, 0.005)
                .expect("valid grid step");
            let weak = optimal_tau(n, TauObjective::Weak, ctx.channels, pw, 0.005)
                .expect("valid grid step");
            table.push_row(vec![n.into(), p1.into(), p2.into(), cross.into(), weak.into()]);
        }
    }
    table
}

fn sinr_grid() -> Vec<f64> {
    (0..40).map(|k| 0.1 + k as f64 * (29.9 / 39.0)).collect()
}

/// Minimized weighted sums over the 40 x 40 target-SINR grid for both
/// variants (`fig8`), or their difference with region labels (`fig9`).
fn fig8(overrides: Option<&LoadedScenario>, meta: TableMeta, delta_view: bool) -> ResultTable {
    let ctx = PresetContext::new(LinkChannels { h1_sq: 1.0, h2_sq: 0.5, h12_sq: 2.0 }, overrides);
    let columns: Vec<&str> = if delta_view {
        vec!["gamma1", "gamma2", "anoma_sum", "noma_sum", "delta", "region"]
    } else {
        vec![
            "gamma1",
            "gamma2",
            "anoma_sum",
            "anoma_feasible",
            "anoma_case",
            "noma_sum",
            "noma_feasible",
            "noma_case",
        ]
    };
    let mut table = ResultTable::new(columns, meta);
    for g1 in sinr_grid() {
        for g2 in sinr_grid() {
            let scenario = PowerScenario {
                channels: ctx.channels,
                r1_star: rate_target_from_sinr(g1),
                r2_star: rate_target_from_sinr(g2),
                omega_s: ctx.weights.0,
                omega_r: ctx.weights.1,
                ps_max: ctx.limits.0,
                pr_max: ctx.limits.1,
                tau: ctx.tau,
                n_star: ctx.n_star,
            };
            let cmp = compare_weighted_power(&scenario).expect("valid scenario");
            if delta_view {
                table.push_row(vec![
                    g1.into(),
                    g2.into(),
                    cmp.anoma.weighted_sum.into(),
                    cmp.noma.weighted_sum.into(),
                    cmp.delta.map_or(Cell::Text(String::new()), Cell::Num),
                    cmp.region.label().into(),
                ]);
            } else {
                let case = |s: &canoma_core::power::PowerSolution| -> Cell {
                    s.case_label.map_or(Cell::Text(String::new()), |c| c.label().into())
                };
                table.push_row(vec![
                    g1.into(),
                    g2.into(),
                    cmp.anoma.weighted_sum.into(),
                    cmp.anoma.feasible.into(),
                    case(&cmp.anoma),
                    cmp.noma.weighted_sum.into(),
                    cmp.noma.feasible.into(),
                    case(&cmp.noma),
                ]);
            }
        }
    }
    table
}

/// Power split vs the BS weight omega_s at unit target SINRs.
fn fig10(overrides: Option<&LoadedScenario>, meta: TableMeta) -> ResultTable {
    let ctx = PresetContext::new(LinkChannels { h1_sq: 1.0, h2_sq: 0.5, h12_sq: 2.0 }, overrides);
    // targets come from the scenario when given, else unit SINRs
    let (r1_star, r2_star) = overrides
        .map(|s| (s.scenario.r1_star, s.scenario.r2_star))
        .unwrap_or((rate_target_from_sinr(1.0), rate_target_from_sinr(1.0)));
    let mut table = ResultTable::new(
        vec!["omega_s", "omega_r", "feasible", "case", "p1", "p2", "pr", "bs_power", "weighted_sum"],
        meta,
    );
    for k in 0..=50 {
        let omega_s = 0.02 * k as f64;
        let scenario = PowerScenario {
            channels: ctx.channels,
            r1_star,
            r2_star,
            omega_s,
            omega_r: 1.0 - omega_s,
            ps_max: ctx.limits.0,
            pr_max: ctx.limits.1,
            tau: ctx.tau,
            n_star: ctx.n_star,
        };
        let sol = minimize_power(&scenario).expect("valid scenario");
        let a = sol.allocation;
        table.push_row(vec![
            omega_s.into(),
            (1.0 - omega_s).into(),
            sol.feasible.into(),
            sol.case_label.map_or(Cell::Text(String::new()), |c| c.label().into()),
            a.p1.into(),
            a.p2.into(),
            a.pr.into(),
            (a.p1 + a.p2).into(),
            sol.weighted_sum.into(),
        ]);
    }
    table
}
