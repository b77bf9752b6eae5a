//! Closed-form finite-frame throughputs, their large-frame asymptotes,
//! upper/lower bound chains, the synchronous baselines, and the
//! optimal-mismatch grid search.
//!
//! The sampled-matrix determinants reduce to a two-root recursion: with
//! `a = 1/s1 + 1/s2 + 1/(s1 s2) + Q` and `Q = 2 tau (1 - tau)`, the
//! roots `(a +- sqrt(a^2 - Q^2)) / 2` drive a geometric expression whose
//! `N`-th powers would overflow long before `N = 1000`. Everything here
//! therefore evaluates the overflow-safe form: factor `big^N` out of the
//! bracket and track only `rho^N = (small/big)^N in [0, 1)`.
//!
//! Degenerate SNRs (exact zeros) are returned as their analytic limits
//! instead of evaluating logs of vanishing products; the limits are the
//! values the sampled-matrix path produces at the same inputs.

use crate::model::{q_of_tau, FrameConfig, LinkChannels, PowerAllocation, RateReport, StrongUserSnrs};
use crate::{Error, Result};

// ---------------------------------------------------------------------------
// Characteristic roots
// ---------------------------------------------------------------------------

/// The root pair of the determinant recursion. `big * small = Q^2 / 4`
/// and `big + small = a` (Vieta), with `big > small >= 0` strictly for
/// finite positive SNRs.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RootPair {
    pub big: f64,
    pub small: f64,
}

impl RootPair {
    /// `small / big`, in `[0, 1)`.
    pub fn ratio(&self) -> f64 {
        self.small / self.big
    }
}

/// Roots of the characteristic quadratic for SNR pair `(snr_a, snr_b)`
/// and `q = 2 tau (1 - tau)`.
///
/// `big` uses the stable `+` branch; `small` comes from the Vieta
/// product `q^2 / 4 / big`, which avoids the cancellation in the `-`
/// branch when `q` is small.
pub fn characteristic_roots(snr_a: f64, snr_b: f64, q: f64) -> Result<RootPair> {
    for s in [snr_a, snr_b] {
        if s <= 0.0 || !s.is_finite() {
            return Err(Error::NonPositiveSnr(s));
        }
    }
    if !(0.0..=0.5).contains(&q) {
        return Err(Error::QOutOfRange(q));
    }
    let a = 1.0 / snr_a + 1.0 / snr_b + 1.0 / (snr_a * snr_b) + q;
    // a > q always (the SNR terms are strictly positive), so a - q is
    // cancellation-free and the pair is never confluent.
    let disc = ((a - q) * (a + q)).sqrt();
    let big = 0.5 * (a + disc);
    let small = if q == 0.0 { 0.0 } else { (0.5 * q) * (0.5 * q) / big };
    Ok(RootPair { big, small })
}

// ---------------------------------------------------------------------------
// Finite-frame rates
// ---------------------------------------------------------------------------

/// Overflow-safe log2 of the determinant bracket
/// `(big^{N+1} - small^{N+1} + tau^2 (big^N - small^N)) / (big - small)`.
fn log2_bracket(roots: RootPair, n: u32, tau: f64) -> f64 {
    let rho_n = roots.ratio().powi(n as i32);
    let num = roots.big - roots.small * rho_n + tau * tau * (1.0 - rho_n);
    n as f64 * roots.big.log2() + (num / (roots.big - roots.small)).log2()
}

/// Strong user, own message: `(N / (2N + tau)) log2(1 + mu1)`.
/// Independent of `tau` apart from the channel-use prefactor.
pub fn rate_strong_own(frame: FrameConfig, mu1: f64) -> f64 {
    frame.n as f64 / frame.channel_uses() * (1.0 + mu1).log2()
}

/// Strong user decoding the weak user's message, finite frame.
///
/// At `tau = 0` this reduces exactly to the synchronous form
/// `log2(1 + mu2 / (1 + mu1)) / 2`, which is returned directly so the
/// reduction is bit-clean.
pub fn rate_strong_cross(frame: FrameConfig, snrs: StrongUserSnrs) -> f64 {
    let StrongUserSnrs { mu1, mu2 } = snrs;
    if frame.tau == 0.0 {
        return 0.5 * (1.0 + mu2 / (1.0 + mu1)).log2();
    }
    if mu2 == 0.0 {
        return 0.0;
    }
    if mu1 == 0.0 {
        // limit of the general expression: no interfering stream
        return frame.n as f64 / frame.channel_uses() * (1.0 + mu2).log2();
    }
    let roots = characteristic_roots(mu1, mu2, frame.q()).expect("positive SNRs");
    let g = log2_bracket(roots, frame.n, frame.tau);
    (g + frame.n as f64 * (mu1 * mu2 / (1.0 + mu1)).log2()) / frame.channel_uses()
}

/// Weak user combining the asynchronous broadcast block with the
/// interference-free relay block, finite frame.
///
/// Degenerate edges are analytic limits of the same expression: with
/// `nu2 = 0` only the relay link carries the message; with `nu1 = 0`
/// there is no interfering stream.
pub fn rate_weak(frame: FrameConfig, channels: LinkChannels, powers: PowerAllocation) -> f64 {
    let relay = powers.pr * channels.h12_sq;
    if frame.tau == 0.0 {
        return noma_weak(channels, powers);
    }
    let nu1 = powers.p1 * channels.h2_sq;
    let nu2 = powers.p2 * channels.h2_sq / (1.0 + relay);
    let pre = frame.n as f64 / frame.channel_uses();
    if nu2 == 0.0 {
        return pre * (1.0 + relay).log2();
    }
    if nu1 == 0.0 {
        return pre * ((1.0 + nu2) * (1.0 + relay)).log2();
    }
    let roots = characteristic_roots(nu1, nu2, frame.q()).expect("positive SNRs");
    let g = log2_bracket(roots, frame.n, frame.tau);
    // nu1 nu2 (1 + pr h12^2) = p1 p2 |h2|^4
    (g + frame.n as f64 * (nu1 * nu2 * (1.0 + relay) / (1.0 + nu1)).log2()) / frame.channel_uses()
}

// ---------------------------------------------------------------------------
// Synchronous baselines
// ---------------------------------------------------------------------------

fn noma_weak(channels: LinkChannels, powers: PowerAllocation) -> f64 {
    0.5 * (1.0
        + powers.pr * channels.h12_sq
        + powers.p2 * channels.h2_sq / (powers.p1 * channels.h2_sq + 1.0))
        .log2()
}

/// The three throughputs of the synchronous (`tau = 0`) system with
/// perfect SIC at the strong user and maximal ratio combining at the
/// weak user. Independent of the frame length.
pub fn noma_rates(channels: LinkChannels, powers: PowerAllocation) -> RateReport {
    let mu1 = powers.p1 * channels.h1_sq;
    let mu2 = powers.p2 * channels.h1_sq;
    RateReport {
        r_own_strong: 0.5 * (1.0 + mu1).log2(),
        r_cross_strong: 0.5 * (1.0 + mu2 / (1.0 + mu1)).log2(),
        r_weak: noma_weak(channels, powers),
    }
}

// ---------------------------------------------------------------------------
// Bound chains
// ---------------------------------------------------------------------------

/// The four-point comparison `baseline <= lower <= asymptotic <= upper`
/// of a finite-frame rate family: the synchronous baseline, the simple
/// lower and upper bounds on the large-frame limit, and the limit
/// itself. All four coincide iff `tau = 0`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BoundChain {
    pub baseline_noma: f64,
    pub lower: f64,
    pub asymptotic: f64,
    pub upper: f64,
}

/// Bound chain for the strong user's cross rate.
pub fn strong_cross_bounds(snrs: StrongUserSnrs, tau: f64) -> Result<BoundChain> {
    let StrongUserSnrs { mu1, mu2 } = snrs;
    for s in [mu1, mu2] {
        if s <= 0.0 || !s.is_finite() {
            return Err(Error::NonPositiveSnr(s));
        }
    }
    let q = q_of_tau(tau)?;
    let roots = characteristic_roots(mu1, mu2, q)?;
    Ok(BoundChain {
        baseline_noma: 0.5 * (1.0 + mu2 / (1.0 + mu1)).log2(),
        lower: 0.5 * (1.0 + (mu2 + 0.5 * mu1 * mu2 * q) / (1.0 + mu1)).log2(),
        asymptotic: 0.5 * (mu1 * mu2 * roots.big / (1.0 + mu1)).log2(),
        upper: 0.5 * (1.0 + (mu2 + mu1 * mu2 * q) / (1.0 + mu1)).log2(),
    })
}

/// Bound chain for the weak user's rate.
pub fn weak_bounds(channels: LinkChannels, powers: PowerAllocation, tau: f64) -> Result<BoundChain> {
    let q = q_of_tau(tau)?;
    let relay = powers.pr * channels.h12_sq;
    let nu1 = powers.p1 * channels.h2_sq;
    let nu2 = powers.p2 * channels.h2_sq / (1.0 + relay);
    for s in [nu1, nu2] {
        if s <= 0.0 || !s.is_finite() {
            return Err(Error::NonPositiveSnr(s));
        }
    }
    let s = powers.p2 * channels.h2_sq;
    let interf = 1.0 + powers.p1 * channels.h2_sq;
    let e = powers.p1 * channels.h2_sq * powers.p2 * channels.h2_sq; // p1 p2 |h2|^4
    let roots = characteristic_roots(nu1, nu2, q)?;
    Ok(BoundChain {
        baseline_noma: 0.5 * (1.0 + relay + s / interf).log2(),
        lower: 0.5 * (1.0 + relay + (s + 0.5 * e * q) / interf).log2(),
        asymptotic: 0.5 * (e * roots.big / interf).log2(),
        upper: 0.5 * (1.0 + relay + (s + e * q) / interf).log2(),
    })
}

// ---------------------------------------------------------------------------
// Optimal timing mismatch
// ---------------------------------------------------------------------------

/// Which finite-frame rate the mismatch search maximizes.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TauObjective {
    /// Strong user decoding the weak user's message.
    StrongCross,
    /// Weak user decoding its own message.
    Weak,
}

/// Exhaustive grid search of the chosen finite-frame rate over
/// `tau in {0, step, 2 step, ...} up to 1 - step`, ties broken toward
/// the smaller mismatch. The asymptotic optimum is `tau = 0.5`; for
/// small frames the argmax can sit noticeably off it.
pub fn optimal_tau(
    frame_n: u32,
    objective: TauObjective,
    channels: LinkChannels,
    powers: PowerAllocation,
    grid_step: f64,
) -> Result<f64> {
    if !grid_step.is_finite() || !(0.0..=0.1).contains(&grid_step) || grid_step == 0.0 {
        return Err(Error::InvalidValue {
            field: "grid_step",
            expected: "in (0, 0.1]",
            value: grid_step,
        });
    }
    if frame_n == 0 {
        return Err(Error::EmptyFrame);
    }
    let mu = StrongUserSnrs {
        mu1: powers.p1 * channels.h1_sq,
        mu2: powers.p2 * channels.h1_sq,
    };
    let mut best_tau = 0.0;
    let mut best_rate = f64::NEG_INFINITY;
    let mut k = 0u64;
    loop {
        let tau = k as f64 * grid_step;
        if tau > 1.0 - grid_step + 1e-12 {
            break;
        }
        let frame = FrameConfig::new(frame_n, tau.min(1.0 - f64::EPSILON))?;
        let rate = match objective {
            TauObjective::StrongCross => rate_strong_cross(frame, mu),
            TauObjective::Weak => rate_weak(frame, channels, powers),
        };
        if rate > best_rate {
            best_rate = rate;
            best_tau = tau;
        }
        k += 1;
    }
    Ok(best_tau)
}

// ---------------------------------------------------------------------------
// Tests
// ---------------------------------------------------------------------------

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::derive_snrs;

    fn frame(n: u32, tau: f64) -> FrameConfig {
        FrameConfig::new(n, tau).unwrap()
    }

    const FIG6_CHANNELS: (f64, f64, f64) = (1.0, 0.8, 1.0);
    const FIG6_POWERS: (f64, f64, f64) = (1.5, 3.5, 2.0);

    #[test]
    fn roots_q_zero() {
        let r = characteristic_roots(1.0, 1.0, 0.0).unwrap();
        assert_eq!(r.small, 0.0);
        assert!((r.big - 3.0).abs() < 1e-15);
    }

    #[test]
    fn roots_worked_values() {
        // a = 3.5, disc = sqrt(12), product Q^2/4 = 0.0625
        let r = characteristic_roots(1.0, 1.0, 0.5).unwrap();
        assert!((r.big - 3.482_050_807_57).abs() < 1e-10);
        assert!((r.small - 0.017_949_192_431).abs() < 1e-10);
        assert!((r.big * r.small - 0.0625).abs() < 1e-15);
    }

    #[test]
    fn roots_reject_bad_inputs() {
        assert!(matches!(characteristic_roots(0.0, 1.0, 0.1), Err(Error::NonPositiveSnr(_))));
        assert!(matches!(characteristic_roots(1.0, -2.0, 0.1), Err(Error::NonPositiveSnr(_))));
        assert!(matches!(characteristic_roots(1.0, 1.0, 0.7), Err(Error::QOutOfRange(_))));
    }

    #[test]
    fn rate_strong_own_values() {
        assert_eq!(rate_strong_own(frame(7, 0.3), 0.0), 0.0);
        let r = rate_strong_own(frame(10, 0.5), 1.5);
        assert!((r - 0.644_842_973_116).abs() < 1e-10);
        // tau = 0: (1/2) log2(4) = 1 for any N
        for n in [1, 10, 1000] {
            assert!((rate_strong_own(frame(n, 0.0), 3.0) - 1.0).abs() < 1e-15);
        }
    }

    #[test]
    fn rate_strong_own_tau_only_scales_prefactor() {
        let n = 25;
        let base = rate_strong_own(frame(n, 0.0), 2.3) * 2.0 * n as f64 / n as f64;
        for &tau in &[0.1, 0.37, 0.5, 0.9] {
            let f = frame(n, tau);
            let scaled = rate_strong_own(f, 2.3) * f.channel_uses() / n as f64;
            assert!((scaled - base).abs() < 1e-13);
        }
    }

    #[test]
    fn rate_strong_cross_synchronous_reduction() {
        let r = rate_strong_cross(frame(12, 0.0), StrongUserSnrs { mu1: 1.0, mu2: 3.0 });
        assert!((r - 0.660_964_047_444).abs() < 1e-10);
    }

    #[test]
    fn rate_strong_cross_approaches_asymptote() {
        // large-frame surrogate: N = 10^6 sits on the asymptote
        let snrs = StrongUserSnrs { mu1: 1.0, mu2: 1.0 };
        let r = rate_strong_cross(frame(1_000_000, 0.5), snrs);
        assert!((r - 0.399_968_626_953).abs() < 1e-6, "{r}");
    }

    #[test]
    fn rate_strong_cross_edges() {
        assert_eq!(rate_strong_cross(frame(4, 0.5), StrongUserSnrs { mu1: 1.0, mu2: 0.0 }), 0.0);
        let r = rate_strong_cross(frame(4, 0.5), StrongUserSnrs { mu1: 0.0, mu2: 3.0 });
        assert!((r - 4.0 / 8.5 * 4.0f64.log2()).abs() < 1e-14);
    }

    #[test]
    fn rate_weak_synchronous_reduction() {
        let ch = LinkChannels::new(1.0, 0.8, 1.0).unwrap();
        let pw = PowerAllocation::new(1.5, 3.5, 2.0).unwrap();
        let r = rate_weak(frame(30, 0.0), ch, pw);
        assert!((r - 1.047_578_616_52).abs() < 1e-10, "{r}");
    }

    #[test]
    fn rate_weak_dead_relay_equals_cross_form() {
        let ch = LinkChannels::new(0.4, 0.8, 1.3).unwrap();
        let pw = PowerAllocation::new(1.5, 3.5, 0.0).unwrap();
        let f = frame(9, 0.45);
        let (_, w) = derive_snrs(ch, pw);
        let weak = rate_weak(f, ch, pw);
        let cross = rate_strong_cross(f, StrongUserSnrs { mu1: w.nu1, mu2: pw.p2 * ch.h2_sq });
        assert!((weak - cross).abs() < 1e-15);
    }

    #[test]
    fn rate_weak_degenerate_edges() {
        let ch = LinkChannels::new(1.0, 0.8, 1.0).unwrap();
        let f = frame(4, 0.5);
        // no intended signal at all
        let r = rate_weak(f, ch, PowerAllocation::new(1.5, 0.0, 0.0).unwrap());
        assert_eq!(r, 0.0);
        // relay-only: (N/(2N+tau)) log2(1 + pr h12^2)
        let r = rate_weak(f, ch, PowerAllocation::new(1.5, 0.0, 2.0).unwrap());
        assert!((r - 4.0 / 8.5 * 3.0f64.log2()).abs() < 1e-14);
        // no interfering stream: (N/(2N+tau)) log2((1+nu2)(1+pr h12^2))
        let r = rate_weak(f, ch, PowerAllocation::new(0.0, 3.5, 2.0).unwrap());
        let nu2: f64 = 3.5 * 0.8 / 3.0;
        assert!((r - 4.0 / 8.5 * ((1.0 + nu2) * 3.0).log2()).abs() < 1e-14);
    }

    #[test]
    fn noma_rates_values() {
        let ch = LinkChannels::new(1.0, 0.8, 1.0).unwrap();
        let zero = noma_rates(ch, PowerAllocation::new(0.0, 0.0, 0.0).unwrap());
        assert_eq!((zero.r_own_strong, zero.r_cross_strong, zero.r_weak), (0.0, 0.0, 0.0));

        let r = noma_rates(ch, PowerAllocation::new(1.0, 3.0, 0.0).unwrap());
        assert!((r.r_cross_strong - 0.660_964_047_444).abs() < 1e-10);

        let ch = LinkChannels::new(1.0, 0.8, 1.0).unwrap();
        let r = noma_rates(ch, PowerAllocation::new(1.5, 3.5, 2.0).unwrap());
        assert!((r.r_weak - 1.047_578_616_52).abs() < 1e-10);
    }

    #[test]
    fn strong_chain_worked_values() {
        let chain = strong_cross_bounds(StrongUserSnrs { mu1: 1.0, mu2: 1.0 }, 0.5).unwrap();
        assert!((chain.baseline_noma - 0.292_481_250_4).abs() < 1e-9);
        assert!((chain.lower - 0.350_219_859_1).abs() < 1e-9);
        assert!((chain.asymptotic - 0.399_968_627_0).abs() < 1e-9);
        assert!((chain.upper - 0.403_677_461_0).abs() < 1e-9);
    }

    #[test]
    fn strong_chain_collapses_at_tau_zero() {
        let chain = strong_cross_bounds(StrongUserSnrs { mu1: 0.7, mu2: 2.2 }, 0.0).unwrap();
        for v in [chain.lower, chain.asymptotic, chain.upper] {
            assert!((v - chain.baseline_noma).abs() < 1e-12);
        }
    }

    #[test]
    fn strong_chain_strictly_increasing() {
        let chain = strong_cross_bounds(StrongUserSnrs { mu1: 2.0, mu2: 2.0 }, 0.25).unwrap();
        assert!(chain.baseline_noma < chain.lower);
        assert!(chain.lower < chain.asymptotic);
        assert!(chain.asymptotic < chain.upper);
    }

    #[test]
    fn weak_chain_collapses_at_tau_zero() {
        let ch = LinkChannels::new(1.0, 0.5, 2.0).unwrap();
        let pw = PowerAllocation::new(1.0, 2.0, 1.0).unwrap();
        let chain = weak_bounds(ch, pw, 0.0).unwrap();
        for v in [chain.lower, chain.asymptotic, chain.upper] {
            assert!((v - chain.baseline_noma).abs() < 1e-12);
        }
    }

    #[test]
    fn weak_chain_dead_relay_matches_strong_asymptote() {
        let ch = LinkChannels::new(1.0, 1.0, 0.7).unwrap();
        let pw = PowerAllocation::new(1.0, 1.0, 0.0).unwrap();
        let chain = weak_bounds(ch, pw, 0.5).unwrap();
        assert!((chain.asymptotic - 0.399_968_626_953).abs() < 1e-9);
    }

    #[test]
    fn weak_chain_strictly_increasing() {
        let ch = LinkChannels::new(1.0, 0.5, 2.0).unwrap();
        let pw = PowerAllocation::new(1.0, 2.0, 1.0).unwrap();
        let chain = weak_bounds(ch, pw, 0.5).unwrap();
        assert!(chain.baseline_noma < chain.lower);
        assert!(chain.lower < chain.asymptotic);
        assert!(chain.asymptotic < chain.upper);
    }

    #[test]
    fn finite_frame_converges_to_asymptote() {
        let ch = LinkChannels::new(FIG6_CHANNELS.0, FIG6_CHANNELS.1, FIG6_CHANNELS.2).unwrap();
        let pw = PowerAllocation::new(FIG6_POWERS.0, FIG6_POWERS.1, FIG6_POWERS.2).unwrap();
        let snrs = StrongUserSnrs { mu1: pw.p1 * ch.h1_sq, mu2: pw.p2 * ch.h1_sq };
        let cross_chain = strong_cross_bounds(snrs, 0.5).unwrap();
        let weak_chain = weak_bounds(ch, pw, 0.5).unwrap();

        let gap_cross = |n| (rate_strong_cross(frame(n, 0.5), snrs) - cross_chain.asymptotic).abs();
        let gap_weak = |n| (rate_weak(frame(n, 0.5), ch, pw) - weak_chain.asymptotic).abs();

        assert!(gap_cross(1000) < 1e-3);
        assert!(gap_weak(1000) < 1e-3);
        assert!(gap_cross(1000) < gap_cross(100));
        assert!(gap_weak(1000) < gap_weak(100));
    }

    #[test]
    fn optimal_tau_large_frame_is_half() {
        // asymptotic surrogate: huge frame; objective maximized at 0.5
        let ch = LinkChannels::new(1.0, 0.5, 2.0).unwrap();
        let pw = PowerAllocation::new(1.0, 4.0, 2.0).unwrap();
        let t = optimal_tau(1_000_000, TauObjective::StrongCross, ch, pw, 0.01).unwrap();
        assert!((t - 0.5).abs() <= 0.01 + 1e-12, "{t}");
        let t = optimal_tau(1_000_000, TauObjective::Weak, ch, pw, 0.01).unwrap();
        assert!((t - 0.5).abs() <= 0.01 + 1e-12, "{t}");
    }

    #[test]
    fn optimal_tau_n500_near_half() {
        let ch = LinkChannels::new(1.0, 0.5, 2.0).unwrap();
        let pw = PowerAllocation::new(1.0, 4.0, 2.0).unwrap();
        let t = optimal_tau(500, TauObjective::StrongCross, ch, pw, 0.005).unwrap();
        assert!((t - 0.5).abs() < 0.02, "{t}");
    }

    #[test]
    fn optimal_tau_rejects_bad_step() {
        let ch = LinkChannels::new(1.0, 0.5, 2.0).unwrap();
        let pw = PowerAllocation::new(1.0, 4.0, 2.0).unwrap();
        assert!(optimal_tau(10, TauObjective::Weak, ch, pw, 0.0).is_err());
        assert!(optimal_tau(10, TauObjective::Weak, ch, pw, 0.2).is_err());
    }

    #[test]
    fn asymptote_nondecreasing_in_q() {
        // Q(tau) is increasing on [0, 0.5], so a tau grid is a Q grid.
        let snrs = StrongUserSnrs { mu1: 1.7, mu2: 0.4 };
        let ch = LinkChannels::new(1.0, 0.5, 2.0).unwrap();
        let pw = PowerAllocation::new(1.0, 2.0, 1.0).unwrap();
        let mut prev_s = f64::NEG_INFINITY;
        let mut prev_w = f64::NEG_INFINITY;
        for k in 0..=50 {
            let tau = 0.01 * k as f64;
            let s = strong_cross_bounds(snrs, tau).unwrap().asymptotic;
            let w = weak_bounds(ch, pw, tau).unwrap().asymptotic;
            assert!(s >= prev_s - 1e-14, "strong asymptote decreased at tau={tau}");
            assert!(w >= prev_w - 1e-14, "weak asymptote decreased at tau={tau}");
            prev_s = s;
            prev_w = w;
        }
    }
}
