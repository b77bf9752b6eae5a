//! Weighted-sum transmit-power minimization under per-message QoS
//! constraints, for both the asynchronous system and its synchronous
//! special case (`tau = 0`).
//!
//! The exact finite-frame rate constraints are intractable, so the
//! solver follows the standard relaxation: replace the two rate
//! constraints on the weak user's message with their large-frame lower
//! bounds, and strengthen the strong user's own-rate constraint by the
//! finite-frame correction `epsilon_star` so the solution stays safe for
//! every frame length `n >= n_star`. The relaxed problem is piecewise
//! linear in `p2` after substituting the optimal `p1` and `pr`, and
//! splits into three cases by where the relay-power requirement reaches
//! zero. [`minimize_power`] implements that case analysis exactly;
//! [`brute_force_power`] is an independent grid-sweep oracle used only
//! to validate it.
//!
//! Targets live in the scenario as rates (bits per channel use). The
//! SINR map `gamma = 2^(2 r) - 1` is applied in exactly one place
//! ([`QosDerived`]); scenario builders accepting SINR targets invert it
//! with [`rate_target_from_sinr`].

use crate::closed_form::{rate_strong_cross, rate_strong_own, rate_weak};
use crate::model::{FrameConfig, PowerAllocation, PowerScenario, StrongUserSnrs};
use crate::{Error, Result};

/// Relative tolerance for the knife-edge weight comparison in Case 2.
const WEIGHT_TIE_TOL: f64 = 1e-12;

/// `gamma = 2^(2 r) - 1`: target SINR equivalent to rate target `r`.
pub fn sinr_from_rate_target(rate: f64) -> f64 {
    (2.0 * rate * std::f64::consts::LN_2).exp_m1()
}

/// Inverse map `r = log2(1 + gamma) / 2`.
pub fn rate_target_from_sinr(gamma: f64) -> f64 {
    0.5 * (1.0 + gamma).log2()
}

/// Finite-frame safety margin added to the strong user's SINR target:
/// `2^(2 r1) (2^((tau / n_star) r1) - 1)`. Zero iff `tau = 0` or the
/// target is zero; shrinks as `n_star` grows.
pub fn epsilon_star(r1_star: f64, tau: f64, n_star: u32) -> f64 {
    let ln2 = std::f64::consts::LN_2;
    (2.0 * r1_star * ln2).exp() * (tau / n_star as f64 * r1_star * ln2).exp_m1()
}

// ---------------------------------------------------------------------------
// Derived QoS quantities and thresholds
// ---------------------------------------------------------------------------

/// SINR targets and solver constants derived once from a scenario.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QosDerived {
    /// `2^(2 r1*) - 1`.
    pub gamma1: f64,
    /// `2^(2 r2*) - 1`.
    pub gamma2: f64,
    /// Finite-frame correction for the strong user's constraint.
    pub epsilon_star: f64,
    /// `gamma1 + epsilon_star`, the effective strong-user SINR floor.
    pub gamma1_eff: f64,
    /// `Q = 2 tau (1 - tau)`.
    pub q: f64,
}

impl QosDerived {
    pub fn from_scenario(scenario: &PowerScenario) -> QosDerived {
        let gamma1 = sinr_from_rate_target(scenario.r1_star);
        let eps = epsilon_star(scenario.r1_star, scenario.tau, scenario.n_star);
        QosDerived {
            gamma1,
            gamma2: sinr_from_rate_target(scenario.r2_star),
            epsilon_star: eps,
            gamma1_eff: gamma1 + eps,
            q: scenario.q(),
        }
    }
}

/// The `p2`-axis landmarks of the piecewise-linear objective.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Thresholds {
    /// Feasibility floor for `p2`: the larger of the interference
    /// constraint at the strong user and the level at which even
    /// `pr = pr_max` cannot close the weak user's budget.
    pub zeta2: f64,
    /// `p2` level at which the relay-power requirement reaches zero.
    pub zeta2_star: f64,
    /// `gamma1_eff / |h1|^2`, the fixed optimal `p1`.
    pub p1_floor: f64,
    /// `ps_max - p1_floor`, the `p2` budget (may be negative when the
    /// scenario is infeasible).
    pub p2_ceiling: f64,
}

fn check_channels(scenario: &PowerScenario) -> Result<()> {
    let ch = scenario.channels;
    for (field, v) in [("h1_sq", ch.h1_sq), ("h2_sq", ch.h2_sq), ("h12_sq", ch.h12_sq)] {
        if v <= 0.0 {
            return Err(Error::DegenerateChannel { field });
        }
    }
    Ok(())
}

/// Interference attenuation factor of the weak user's broadcast link at
/// `p1 = p1_floor`: `(h1^2 + Q/2 g1' h2^2) / (h1^2 + g1' h2^2)`.
fn relay_slope_factor(scenario: &PowerScenario, qos: &QosDerived) -> f64 {
    let ch = scenario.channels;
    (ch.h1_sq + 0.5 * qos.q * qos.gamma1_eff * ch.h2_sq) / (ch.h1_sq + qos.gamma1_eff * ch.h2_sq)
}

/// Compute the solver thresholds for a scenario. Rejects zero channel
/// gains (they appear in denominators).
pub fn compute_thresholds(scenario: &PowerScenario) -> Result<Thresholds> {
    scenario.validate()?;
    check_channels(scenario)?;
    let qos = QosDerived::from_scenario(scenario);
    Ok(thresholds_inner(scenario, &qos))
}

fn thresholds_inner(scenario: &PowerScenario, qos: &QosDerived) -> Thresholds {
    let ch = scenario.channels;
    let g1e = qos.gamma1_eff;
    let strong_floor = (qos.gamma2 / ch.h1_sq) * (1.0 + g1e) / (1.0 + 0.5 * qos.q * g1e);
    let relay_floor = (qos.gamma2 / ch.h12_sq - scenario.pr_max) * (ch.h12_sq / ch.h2_sq)
        / relay_slope_factor(scenario, qos);
    let zeta2 = strong_floor.max(relay_floor);
    let zeta2_star = (qos.gamma2 / ch.h2_sq) / relay_slope_factor(scenario, qos);
    let p1_floor = g1e / ch.h1_sq;
    Thresholds { zeta2, zeta2_star, p1_floor, p2_ceiling: scenario.ps_max - p1_floor }
}

/// Minimum relay power that closes the weak user's QoS gap for the given
/// BS powers, clamped at zero:
/// `max{0, gamma2 / h12^2 - (p2 h2^2 / h12^2) (1 + Q/2 p1 h2^2) / (1 + p1 h2^2)}`.
pub fn zeta_r(scenario: &PowerScenario, p1: f64, p2: f64) -> f64 {
    let ch = scenario.channels;
    let qos = QosDerived::from_scenario(scenario);
    let atten = (1.0 + 0.5 * qos.q * p1 * ch.h2_sq) / (1.0 + p1 * ch.h2_sq);
    (qos.gamma2 / ch.h12_sq - p2 * ch.h2_sq / ch.h12_sq * atten).max(0.0)
}

// ---------------------------------------------------------------------------
// Solution types
// ---------------------------------------------------------------------------

/// Which branch of the case analysis produced the solution.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SolverCase {
    /// `zeta2* < zeta2`: the direct link is strong enough, no relay
    /// transmission needed.
    Case1,
    /// `zeta2* > p2_ceiling`: the relay must transmit at every feasible
    /// `p2`; the weight sign test picks an endpoint.
    Case2,
    /// Case 2 with the weights exactly on the critical ratio: every
    /// `p2` in the interval attains the same objective; the lower end
    /// is returned deterministically.
    Case2Degenerate,
    /// Interior case, sub-problem on `[zeta2*, p2_ceiling]` won
    /// (`pr = 0`).
    Case3A,
    /// Interior case, sub-problem on `[zeta2, zeta2*]` won.
    Case3B,
}

impl SolverCase {
    pub fn label(&self) -> &'static str {
        match self {
            SolverCase::Case1 => "case1",
            SolverCase::Case2 => "case2",
            SolverCase::Case2Degenerate => "case2-degenerate",
            SolverCase::Case3A => "case3a",
            SolverCase::Case3B => "case3b",
        }
    }
}

/// Why a scenario admits no solution.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum InfeasibleReason {
    /// `p1_floor > ps_max`: the strong user's SINR floor alone exceeds
    /// the BS budget.
    P1FloorExceedsPsMax,
    /// `zeta2 > ps_max - p1_floor`: the weak user's `p2` floor does not
    /// fit in what the budget leaves.
    Zeta2ExceedsBudget,
}

impl InfeasibleReason {
    pub fn label(&self) -> &'static str {
        match self {
            InfeasibleReason::P1FloorExceedsPsMax => "p1-floor-exceeds-ps-max",
            InfeasibleReason::Zeta2ExceedsBudget => "zeta2-exceeds-budget",
        }
    }
}

/// Result of a power minimization. Infeasible scenarios come back with
/// zero powers (transmitters stay silent), `feasible = false`, and the
/// violated guard in `infeasible_reason`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PowerSolution {
    pub allocation: PowerAllocation,
    /// `omega_s (p1 + p2) + omega_r pr` of the allocation.
    pub weighted_sum: f64,
    /// Case label; `None` for infeasible results and for the
    /// grid-search oracle, which has no case analysis.
    pub case_label: Option<SolverCase>,
    pub feasible: bool,
    pub infeasible_reason: Option<InfeasibleReason>,
}

impl PowerSolution {
    fn infeasible(reason: InfeasibleReason) -> Self {
        PowerSolution {
            allocation: PowerAllocation { p1: 0.0, p2: 0.0, pr: 0.0 },
            weighted_sum: 0.0,
            case_label: None,
            feasible: false,
            infeasible_reason: Some(reason),
        }
    }
}

// ---------------------------------------------------------------------------
// The solver
// ---------------------------------------------------------------------------

fn weighted_sum(scenario: &PowerScenario, p1: f64, p2: f64, pr: f64) -> f64 {
    scenario.omega_s * (p1 + p2) + scenario.omega_r * pr
}

/// Solve the relaxed weighted-sum power minimization exactly.
///
/// `p1` is always pinned to its floor (raising it only hurts: it forces
/// `p2` and `pr` up through the interference terms). The remaining
/// one-dimensional problem in `p2` is piecewise linear with a single
/// kink at `zeta2_star`, so the optimum is at `zeta2`, `zeta2_star`, or
/// the budget ceiling; the three cases select among them.
pub fn minimize_power(scenario: &PowerScenario) -> Result<PowerSolution> {
    scenario.validate()?;
    check_channels(scenario)?;
    let qos = QosDerived::from_scenario(scenario);
    let th = thresholds_inner(scenario, &qos);

    if th.p1_floor > scenario.ps_max {
        return Ok(PowerSolution::infeasible(InfeasibleReason::P1FloorExceedsPsMax));
    }
    if th.zeta2 > th.p2_ceiling {
        return Ok(PowerSolution::infeasible(InfeasibleReason::Zeta2ExceedsBudget));
    }

    let p1 = th.p1_floor;
    // Effective floor: zeta2 can sit below zero when the weak target is
    // tiny; p2 is still a power.
    let lo = th.zeta2.max(0.0);
    let hi = th.p2_ceiling;

    // Weight sign test for the descending segment p2 < zeta2*: the
    // objective slope is omega_s - omega_r * k with k the relay slope.
    let k = scenario.channels.h2_sq / scenario.channels.h12_sq * relay_slope_factor(scenario, &qos);
    let crit = scenario.omega_r * k;
    let tie = (scenario.omega_s - crit).abs() <= WEIGHT_TIE_TOL * crit.max(1.0);

    let solve_descending = |lo: f64, hi: f64| -> (f64, bool) {
        // minimize (omega_s - omega_r k) p2 on [lo, hi]
        if tie {
            (lo, true)
        } else if scenario.omega_s > crit {
            (lo, false)
        } else {
            (hi, false)
        }
    };

    let (p2, case) = if th.zeta2_star < th.zeta2 {
        (lo, SolverCase::Case1)
    } else if th.zeta2_star > hi {
        let (p2, degenerate) = solve_descending(lo, hi);
        (p2, if degenerate { SolverCase::Case2Degenerate } else { SolverCase::Case2 })
    } else {
        // Sub-problem A: pr = 0 on [zeta2*, hi] -> p2 = zeta2*.
        let p2_a = th.zeta2_star.max(lo);
        let obj_a = weighted_sum(scenario, p1, p2_a, 0.0);
        // Sub-problem B: descending segment on [lo, zeta2*].
        let (p2_b, _) = solve_descending(lo, th.zeta2_star);
        let pr_b = zeta_r(scenario, p1, p2_b).min(scenario.pr_max);
        let obj_b = weighted_sum(scenario, p1, p2_b, pr_b);
        if obj_b < obj_a {
            (p2_b, SolverCase::Case3B)
        } else {
            (p2_a, SolverCase::Case3A)
        }
    };

    // at or above zeta2* the relay requirement is analytically zero;
    // evaluating zeta_r there would leave rounding dust
    let pr = if p2 >= th.zeta2_star {
        0.0
    } else {
        zeta_r(scenario, p1, p2).min(scenario.pr_max)
    };
    debug_assert!(
        zeta_r(scenario, p1, p2) <= scenario.pr_max + 1e-9,
        "relay power requirement exceeded pr_max past the feasibility guards"
    );
    let allocation = PowerAllocation { p1, p2, pr };
    Ok(PowerSolution {
        allocation,
        weighted_sum: weighted_sum(scenario, p1, p2, pr),
        case_label: Some(case),
        feasible: true,
        infeasible_reason: None,
    })
}

/// Grid-sweep oracle: fix `p1` at its floor, sweep `p2` over
/// `[zeta2, ps_max - p1_floor]` in steps of `p2_step` (both endpoints
/// included), set `pr` to its minimum, keep the feasible point with the
/// smallest weighted sum. Exists solely to validate [`minimize_power`];
/// agreement is within `omega_s * p2_step` of the exact optimum.
pub fn brute_force_power(scenario: &PowerScenario, p2_step: f64) -> Result<PowerSolution> {
    scenario.validate()?;
    check_channels(scenario)?;
    let limit = 1e-3 * scenario.ps_max;
    if p2_step <= 0.0 || p2_step.is_nan() || p2_step > limit {
        return Err(Error::StepTooCoarse { step: p2_step, limit });
    }
    let th = compute_thresholds(scenario)?;
    if th.p1_floor > scenario.ps_max {
        return Ok(PowerSolution::infeasible(InfeasibleReason::P1FloorExceedsPsMax));
    }
    if th.zeta2 > th.p2_ceiling {
        return Ok(PowerSolution::infeasible(InfeasibleReason::Zeta2ExceedsBudget));
    }
    let p1 = th.p1_floor;
    let lo = th.zeta2.max(0.0);
    let hi = th.p2_ceiling;
    let steps = ((hi - lo) / p2_step).floor() as u64;
    let mut best: Option<(f64, f64, f64)> = None; // (obj, p2, pr)
    let mut k = 0u64;
    loop {
        let p2 = if k > steps { hi } else { (lo + k as f64 * p2_step).min(hi) };
        let pr = zeta_r(scenario, p1, p2);
        if pr <= scenario.pr_max {
            let obj = weighted_sum(scenario, p1, p2, pr);
            if best.is_none_or(|(b, _, _)| obj < b) {
                best = Some((obj, p2, pr));
            }
        }
        if k > steps {
            break;
        }
        k += 1;
    }
    let (obj, p2, pr) = best.expect("zeta2 <= ceiling guarantees at least one feasible grid point");
    Ok(PowerSolution {
        allocation: PowerAllocation { p1, p2, pr },
        weighted_sum: obj,
        case_label: None,
        feasible: true,
        infeasible_reason: None,
    })
}

// ---------------------------------------------------------------------------
// QoS verification
// ---------------------------------------------------------------------------

/// Exact finite-frame rate slacks (rate minus target) of a solution.
/// Nonnegative slacks mean the QoS holds at that frame length.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QosSlacks {
    /// Strong user's own message vs `r1_star`.
    pub own_strong: f64,
    /// Strong user decoding the weak user's message vs `r2_star`.
    pub cross_strong: f64,
    /// Weak user vs `r2_star`.
    pub weak: f64,
}

impl QosSlacks {
    pub fn min(&self) -> f64 {
        self.own_strong.min(self.cross_strong).min(self.weak)
    }
}

/// Evaluate the exact finite-frame rates of the closed-form module at a
/// solution and report the three slacks for frame length `n`.
pub fn verify_qos(solution: &PowerSolution, scenario: &PowerScenario, n: u32) -> Result<QosSlacks> {
    let frame = FrameConfig::new(n, scenario.tau)?;
    let pw = solution.allocation;
    let snrs = StrongUserSnrs {
        mu1: pw.p1 * scenario.channels.h1_sq,
        mu2: pw.p2 * scenario.channels.h1_sq,
    };
    Ok(QosSlacks {
        own_strong: rate_strong_own(frame, snrs.mu1) - scenario.r1_star,
        cross_strong: rate_strong_cross(frame, snrs) - scenario.r2_star,
        weak: rate_weak(frame, scenario.channels, pw) - scenario.r2_star,
    })
}

// ---------------------------------------------------------------------------
// Asynchronous vs synchronous comparison
// ---------------------------------------------------------------------------

/// Joint feasibility classification of the two system variants.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FeasibilityRegion {
    /// Both feasible; the asynchronous system consumes no more power.
    BothFeasible,
    /// Only the asynchronous system can meet the QoS.
    AnomaOnly,
    /// Neither variant fits the power budgets.
    NeitherFeasible,
    /// Only the synchronous system is feasible. Possible in principle
    /// because the finite-frame correction raises the asynchronous
    /// `p1` floor slightly; does not occur on the studied grids.
    NomaOnly,
}

impl FeasibilityRegion {
    /// Region letter used in the sweep tables.
    pub fn label(&self) -> &'static str {
        match self {
            FeasibilityRegion::BothFeasible => "A",
            FeasibilityRegion::AnomaOnly => "B",
            FeasibilityRegion::NeitherFeasible => "C",
            FeasibilityRegion::NomaOnly => "noma-only",
        }
    }
}

/// Output of [`compare_weighted_power`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PowerComparison {
    /// Solution at the scenario's own `tau`.
    pub anoma: PowerSolution,
    /// Solution with `tau` forced to zero.
    pub noma: PowerSolution,
    /// `noma.weighted_sum - anoma.weighted_sum` when both feasible.
    pub delta: Option<f64>,
    pub region: FeasibilityRegion,
}

/// Solve the scenario twice — at its own `tau` and at `tau = 0` — and
/// report both weighted sums, their difference, and the feasibility
/// region.
pub fn compare_weighted_power(scenario: &PowerScenario) -> Result<PowerComparison> {
    let anoma = minimize_power(scenario)?;
    let noma = minimize_power(&scenario.synchronous())?;
    let region = match (anoma.feasible, noma.feasible) {
        (true, true) => FeasibilityRegion::BothFeasible,
        (true, false) => FeasibilityRegion::AnomaOnly,
        (false, false) => FeasibilityRegion::NeitherFeasible,
        (false, true) => FeasibilityRegion::NomaOnly,
    };
    let delta = (anoma.feasible && noma.feasible).then_some(noma.weighted_sum - anoma.weighted_sum);
    Ok(PowerComparison { anoma, noma, delta, region })
}

// ---------------------------------------------------------------------------
// Tests
// ---------------------------------------------------------------------------

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::LinkChannels;

    /// Base-station/user geometry of the power-sweep studies:
    /// `|h1|^2 = 1, |h2|^2 = 0.5, |h12|^2 = 2`, budgets 20 and 5,
    /// weights (0.2, 0.8).
    fn scenario(gamma1: f64, gamma2: f64, tau: f64) -> PowerScenario {
        PowerScenario {
            channels: LinkChannels::new(1.0, 0.5, 2.0).unwrap(),
            r1_star: rate_target_from_sinr(gamma1),
            r2_star: rate_target_from_sinr(gamma2),
            omega_s: 0.2,
            omega_r: 0.8,
            ps_max: 20.0,
            pr_max: 5.0,
            tau,
            n_star: 100,
        }
    }

    #[test]
    fn sinr_rate_map_round_trips() {
        for g in [0.0, 0.1, 1.0, 3.0, 30.0] {
            let r = rate_target_from_sinr(g);
            assert!((sinr_from_rate_target(r) - g).abs() < 1e-12 * (1.0 + g));
        }
    }

    #[test]
    fn epsilon_star_values() {
        assert_eq!(epsilon_star(1.0, 0.0, 100), 0.0);
        assert_eq!(epsilon_star(0.0, 0.5, 100), 0.0);
        assert!((epsilon_star(1.0, 0.5, 100) - 0.013_886_994_038).abs() < 1e-10);
    }

    #[test]
    fn thresholds_synchronous_worked_values() {
        let th = compute_thresholds(&scenario(1.0, 1.0, 0.0)).unwrap();
        assert!((th.zeta2 - 2.0).abs() < 1e-12);
        assert!((th.zeta2_star - 3.0).abs() < 1e-12);
        assert!((th.p1_floor - 1.0).abs() < 1e-12);
        assert!((th.p2_ceiling - 19.0).abs() < 1e-12);
    }

    #[test]
    fn thresholds_asynchronous_worked_values() {
        // gamma1 = 1 -> r1* = 0.5, eps* = 2 (2^(0.0025) - 1)
        let th = compute_thresholds(&scenario(1.0, 1.0, 0.5)).unwrap();
        assert!((th.p1_floor - 1.003_468_740_47).abs() < 1e-10, "{}", th.p1_floor);
        assert!((th.zeta2 - 1.601_663_841_14).abs() < 1e-10, "{}", th.zeta2);
        assert!((th.zeta2_star - 2.668_721_424_64).abs() < 1e-10, "{}", th.zeta2_star);
    }

    #[test]
    fn thresholds_zero_weak_target() {
        let th = compute_thresholds(&scenario(1.0, 0.0, 0.5)).unwrap();
        assert!(th.zeta2 <= 0.0); // relay branch is negative, strong branch 0
        assert_eq!(th.zeta2_star, 0.0);
    }

    #[test]
    fn thresholds_reject_zero_gain() {
        let mut s = scenario(1.0, 1.0, 0.5);
        s.channels = LinkChannels::new(1.0, 0.0, 2.0).unwrap();
        assert!(matches!(
            compute_thresholds(&s),
            Err(Error::DegenerateChannel { field: "h2_sq" })
        ));
    }

    #[test]
    fn zeta_r_worked_values() {
        let s = scenario(1.0, 1.0, 0.0);
        // p1 = 1, p2 = 2: 0.5 - 0.5 * (2/3) = 1/6
        let z = zeta_r(&s, 1.0, 2.0);
        assert!((z - 1.0 / 6.0).abs() < 1e-12);
        // large p2 clamps at zero
        assert_eq!(zeta_r(&s, 1.0, 50.0), 0.0);
        // zero weak target needs no relay power
        assert_eq!(zeta_r(&scenario(1.0, 0.0, 0.0), 1.0, 0.0), 0.0);
    }

    #[test]
    fn minimize_synchronous_worked_trace() {
        let sol = minimize_power(&scenario(1.0, 1.0, 0.0)).unwrap();
        assert!(sol.feasible);
        assert_eq!(sol.case_label, Some(SolverCase::Case3B));
        let a = sol.allocation;
        assert!((a.p1 - 1.0).abs() < 1e-12);
        assert!((a.p2 - 2.0).abs() < 1e-12);
        assert!((a.pr - 1.0 / 6.0).abs() < 1e-12);
        assert!((sol.weighted_sum - 11.0 / 15.0).abs() < 1e-12);
    }

    #[test]
    fn minimize_asynchronous_worked_trace() {
        let sol = minimize_power(&scenario(1.0, 1.0, 0.5)).unwrap();
        assert!(sol.feasible);
        assert_eq!(sol.case_label, Some(SolverCase::Case3B));
        let a = sol.allocation;
        assert!((a.p1 - 1.003_468_740_47).abs() < 1e-10);
        assert!((a.p2 - 1.601_663_841_14).abs() < 1e-10);
        assert!((a.pr - 0.199_919_252_277).abs() < 1e-10);
        assert!((sol.weighted_sum - 0.680_961_918_143).abs() < 1e-10);
    }

    #[test]
    fn minimize_infeasible_guards() {
        // strong-user floor alone busts the budget
        let sol = minimize_power(&scenario(1e9, 1.0, 0.0)).unwrap();
        assert!(!sol.feasible);
        assert_eq!(sol.infeasible_reason, Some(InfeasibleReason::P1FloorExceedsPsMax));
        assert_eq!(sol.weighted_sum, 0.0);
        assert_eq!(sol.allocation, PowerAllocation { p1: 0.0, p2: 0.0, pr: 0.0 });

        // p1 floor fits, but the weak user's p2 floor does not
        let sol = minimize_power(&scenario(10.0, 30.0, 0.0)).unwrap();
        assert!(!sol.feasible);
        assert_eq!(sol.infeasible_reason, Some(InfeasibleReason::Zeta2ExceedsBudget));
    }

    #[test]
    fn minimize_zero_targets_is_silent() {
        let sol = minimize_power(&scenario(0.0, 0.0, 0.5)).unwrap();
        assert!(sol.feasible);
        assert_eq!(sol.weighted_sum, 0.0);
        let a = sol.allocation;
        assert_eq!((a.p1, a.p2, a.pr), (0.0, 0.0, 0.0));
    }

    #[test]
    fn case1_no_relay_needed() {
        // very strong relay-link budget + strong direct link: zeta2* < zeta2
        // reached via a large pr_max making the relay branch deeply negative
        // and gamma2 big enough that the strong-user floor dominates.
        let mut s = scenario(1.0, 1.0, 0.5);
        s.channels = LinkChannels::new(1.0, 5.0, 0.1).unwrap();
        let th = compute_thresholds(&s).unwrap();
        assert!(th.zeta2_star < th.zeta2, "setup: {th:?}");
        let sol = minimize_power(&s).unwrap();
        assert_eq!(sol.case_label, Some(SolverCase::Case1));
        assert_eq!(sol.allocation.pr, 0.0);
        assert!((sol.allocation.p2 - th.zeta2).abs() < 1e-12);
    }

    #[test]
    fn case2_endpoints_by_weight() {
        // tight BS budget pushes zeta2* past the ceiling:
        // zeta2 = 2 <= ceiling = 2.5 < zeta2* = 3
        let mut s = scenario(1.0, 1.0, 0.0);
        s.ps_max = 3.5;
        let th = compute_thresholds(&s).unwrap();
        assert!(th.zeta2 <= th.p2_ceiling && th.zeta2_star > th.p2_ceiling, "setup: {th:?}");

        // omega_s heavy: p2 stays at the floor, relay picks up the rest
        s.omega_s = 0.9;
        s.omega_r = 0.1;
        let sol = minimize_power(&s).unwrap();
        assert_eq!(sol.case_label, Some(SolverCase::Case2));
        assert!((sol.allocation.p2 - th.zeta2.max(0.0)).abs() < 1e-12);
        assert!(sol.allocation.pr > 0.0);

        // omega_r heavy: p2 takes the whole ceiling
        s.omega_s = 0.1;
        s.omega_r = 0.9;
        let sol = minimize_power(&s).unwrap();
        assert_eq!(sol.case_label, Some(SolverCase::Case2));
        assert!((sol.allocation.p2 - th.p2_ceiling).abs() < 1e-12);
    }

    #[test]
    fn case2_degenerate_weights_pick_lower_end() {
        let mut s = scenario(1.0, 1.0, 0.0);
        s.ps_max = 3.5;
        // critical ratio: omega_s = omega_r * k -> omega_s = k/(1+k)
        let k = 0.5 / 2.0 * 1.0 / (1.0 + 1.0 * 0.5); // h2/h12 * (h1 + 0)/(h1 + g1 h2)
        s.omega_s = k / (1.0 + k);
        s.omega_r = 1.0 - s.omega_s;
        let sol = minimize_power(&s).unwrap();
        assert_eq!(sol.case_label, Some(SolverCase::Case2Degenerate));
        let th = compute_thresholds(&s).unwrap();
        assert!((sol.allocation.p2 - th.zeta2.max(0.0)).abs() < 1e-12);
    }

    #[test]
    fn solution_invariants_on_a_grid() {
        for &tau in &[0.0, 0.25, 0.5] {
            for i in 0..8 {
                for j in 0..8 {
                    let g1 = 0.2 + 1.1 * i as f64;
                    let g2 = 0.2 + 1.1 * j as f64;
                    let s = scenario(g1, g2, tau);
                    let sol = minimize_power(&s).unwrap();
                    if !sol.feasible {
                        continue;
                    }
                    let th = compute_thresholds(&s).unwrap();
                    let a = sol.allocation;
                    assert!((a.p1 - th.p1_floor).abs() < 1e-12, "p1 must sit on its floor");
                    let zr = zeta_r(&s, a.p1, a.p2).min(s.pr_max);
                    assert!((a.pr - zr).abs() < 1e-12, "pr must equal clamped zeta_r");
                    assert!(a.pr <= s.pr_max + 1e-12);
                    assert!(a.p1 + a.p2 <= s.ps_max + 1e-9);
                    let ws = s.omega_s * (a.p1 + a.p2) + s.omega_r * a.pr;
                    assert!((sol.weighted_sum - ws).abs() < 1e-12);
                    if sol.case_label == Some(SolverCase::Case1) {
                        assert_eq!(a.pr, 0.0);
                    }
                }
            }
        }
    }

    #[test]
    fn weighted_sum_monotone_in_targets() {
        for &tau in &[0.0, 0.5] {
            let mut prev = -1.0;
            for i in 0..12 {
                let g = 0.2 + i as f64;
                let sol = minimize_power(&scenario(g, 1.0, tau)).unwrap();
                if !sol.feasible {
                    break;
                }
                assert!(sol.weighted_sum >= prev - 1e-12, "not monotone in gamma1 at {g}");
                prev = sol.weighted_sum;
            }
            let mut prev = -1.0;
            for i in 0..12 {
                let g = 0.2 + i as f64;
                let sol = minimize_power(&scenario(1.0, g, tau)).unwrap();
                if !sol.feasible {
                    break;
                }
                assert!(sol.weighted_sum >= prev - 1e-12, "not monotone in gamma2 at {g}");
                prev = sol.weighted_sum;
            }
        }
    }

    #[test]
    fn brute_force_agrees_on_worked_example() {
        let s = scenario(1.0, 1.0, 0.0);
        let exact = minimize_power(&s).unwrap();
        let grid = brute_force_power(&s, 1e-4).unwrap();
        assert!((grid.weighted_sum - exact.weighted_sum).abs() <= 2e-5);
        assert!((grid.weighted_sum - 11.0 / 15.0).abs() <= 2e-5);
    }

    #[test]
    fn brute_force_matches_infeasibility() {
        let s = scenario(1e9, 1.0, 0.5);
        let exact = minimize_power(&s).unwrap();
        let grid = brute_force_power(&s, 1e-3).unwrap();
        assert!(!exact.feasible && !grid.feasible);
        assert_eq!(exact.infeasible_reason, grid.infeasible_reason);
    }

    #[test]
    fn brute_force_rejects_coarse_step() {
        let s = scenario(1.0, 1.0, 0.5);
        assert!(matches!(
            brute_force_power(&s, 0.5),
            Err(Error::StepTooCoarse { .. })
        ));
    }

    #[test]
    fn verify_qos_synchronous_binding() {
        // tau = 0 solutions sit exactly on the constraint boundary and the
        // rates are frame-length independent.
        let s = scenario(1.0, 1.0, 0.0);
        let sol = minimize_power(&s).unwrap();
        for n in [1, 10, 100] {
            let sl = verify_qos(&sol, &s, n).unwrap();
            assert!(sl.min() >= -1e-9, "n={n}: {sl:?}");
            assert!(sl.own_strong.abs() < 1e-9);
            assert!(sl.cross_strong.abs() < 1e-9);
            assert!(sl.weak.abs() < 1e-9);
        }
    }

    #[test]
    fn verify_qos_asynchronous_solution() {
        let s = scenario(1.0, 1.0, 0.5);
        let sol = minimize_power(&s).unwrap();
        let sl = verify_qos(&sol, &s, 100).unwrap();
        assert!(sl.min() >= -1e-9, "{sl:?}");
    }

    #[test]
    fn verify_qos_zero_targets_reports_raw_rates() {
        let s = scenario(0.0, 0.0, 0.5);
        let sol = minimize_power(&s).unwrap();
        let sl = verify_qos(&sol, &s, 50).unwrap();
        // zero powers, zero targets: slacks are the raw (zero) rates
        assert_eq!((sl.own_strong, sl.cross_strong, sl.weak), (0.0, 0.0, 0.0));
    }

    #[test]
    fn compare_worked_example() {
        let cmp = compare_weighted_power(&scenario(1.0, 1.0, 0.5)).unwrap();
        assert_eq!(cmp.region, FeasibilityRegion::BothFeasible);
        assert!((cmp.noma.weighted_sum - 11.0 / 15.0).abs() < 1e-10);
        assert!((cmp.anoma.weighted_sum - 0.680_961_918_143).abs() < 1e-10);
        assert!((cmp.delta.unwrap() - 0.052_371_415_190).abs() < 1e-10);
    }

    #[test]
    fn compare_zero_targets() {
        let cmp = compare_weighted_power(&scenario(0.0, 0.0, 0.5)).unwrap();
        assert_eq!(cmp.delta, Some(0.0));
        assert_eq!(cmp.anoma.weighted_sum, 0.0);
        assert_eq!(cmp.noma.weighted_sum, 0.0);
    }

    #[test]
    fn compare_flags_neither_feasible() {
        let cmp = compare_weighted_power(&scenario(1e9, 1e9, 0.5)).unwrap();
        assert_eq!(cmp.region, FeasibilityRegion::NeitherFeasible);
        assert_eq!(cmp.delta, None);
    }

    #[test]
    fn compare_flags_anoma_only() {
        // from the sweep-grid study: gamma1 moderate, gamma2 high enough
        // that the synchronous p2 floor busts the budget while the
        // asynchronous one still fits.
        let cmp = compare_weighted_power(&scenario(10.0, 2.0, 0.5)).unwrap();
        assert_eq!(cmp.region, FeasibilityRegion::AnomaOnly);
        assert!(cmp.anoma.feasible && !cmp.noma.feasible);
    }
}
