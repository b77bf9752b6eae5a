//! Core domain types shared by every other module: channel gains, frame
//! configuration, transmit powers, derived SNRs, rate reports, and the
//! full power-minimization scenario.
//!
//! Conventions, fixed once here and relied on everywhere else:
//!
//! * channel gains are squared magnitudes, linear scale, noise-normalized
//!   (unit noise variance);
//! * transmit powers are linear;
//! * rates are bits per channel use (base-2 logs);
//! * `tau` is the timing mismatch normalized to the symbol interval,
//!   `0 <= tau < 1`, with `tau = 0` the synchronous system.

use crate::{Error, Result};

/// Tolerance on `omega_s + omega_r = 1` (double-precision input hygiene).
pub const WEIGHT_SUM_TOL: f64 = 1e-12;

fn check_gain(field: &'static str, value: f64) -> Result<()> {
    if !value.is_finite() || value < 0.0 {
        return Err(Error::InvalidValue {
            field,
            expected: "finite and >= 0",
            value,
        });
    }
    Ok(())
}

// ---------------------------------------------------------------------------
// Channels, frame, powers
// ---------------------------------------------------------------------------

/// Squared channel gains of the three links: base station to User 1
/// (strong), base station to User 2 (weak), and User 1 to User 2 (relay).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LinkChannels {
    /// |h1|^2, BS -> User 1.
    pub h1_sq: f64,
    /// |h2|^2, BS -> User 2.
    pub h2_sq: f64,
    /// |h12|^2, User 1 -> User 2.
    pub h12_sq: f64,
}

impl LinkChannels {
    pub fn new(h1_sq: f64, h2_sq: f64, h12_sq: f64) -> Result<Self> {
        check_gain("h1_sq", h1_sq)?;
        check_gain("h2_sq", h2_sq)?;
        check_gain("h12_sq", h12_sq)?;
        Ok(Self { h1_sq, h2_sq, h12_sq })
    }
}

/// Frame length and normalized timing mismatch of the broadcast phase.
///
/// A frame of `n` symbols occupies `2n + tau` channel uses end to end:
/// `n` in the broadcast phase, `n` in the relay phase, plus the `tau`
/// stub that creates the sampling diversity.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FrameConfig {
    /// Symbols per frame, `n >= 1`.
    pub n: u32,
    /// Normalized timing mismatch in `[0, 1)`.
    pub tau: f64,
}

impl FrameConfig {
    pub fn new(n: u32, tau: f64) -> Result<Self> {
        if n == 0 {
            return Err(Error::EmptyFrame);
        }
        if !tau.is_finite() || !(0.0..1.0).contains(&tau) {
            return Err(Error::TauOutOfRange(tau));
        }
        Ok(Self { n, tau })
    }

    /// Channel uses consumed per frame, `2n + tau`.
    pub fn channel_uses(&self) -> f64 {
        2.0 * self.n as f64 + self.tau
    }

    /// `Q = 2 tau (1 - tau)`, valid by construction.
    pub fn q(&self) -> f64 {
        2.0 * self.tau * (1.0 - self.tau)
    }
}

/// Linear transmit powers: `p1`/`p2` are the BS split for the two users'
/// messages, `pr` is the relay (User 1) transmit power.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PowerAllocation {
    pub p1: f64,
    pub p2: f64,
    pub pr: f64,
}

impl PowerAllocation {
    pub fn new(p1: f64, p2: f64, pr: f64) -> Result<Self> {
        check_gain("p1", p1)?;
        check_gain("p2", p2)?;
        check_gain("pr", pr)?;
        Ok(Self { p1, p2, pr })
    }
}

// ---------------------------------------------------------------------------
// Derived SNRs and rate reports
// ---------------------------------------------------------------------------

/// Receive SNRs seen by the strong user: `mu1 = p1 |h1|^2`,
/// `mu2 = p2 |h1|^2`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StrongUserSnrs {
    pub mu1: f64,
    pub mu2: f64,
}

/// Effective SNRs seen by the weak user: `nu1 = p1 |h2|^2` and
/// `nu2 = p2 |h2|^2 / (1 + pr |h12|^2)`, the broadcast-link SNR of its
/// own message discounted by the relay-link contribution.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct WeakUserSnrs {
    pub nu1: f64,
    pub nu2: f64,
}

/// The three per-message throughputs of one system variant, bits per
/// channel use: the strong user decoding its own message (`r_own_strong`),
/// the strong user decoding the weak user's message (`r_cross_strong`),
/// and the weak user decoding its own message (`r_weak`).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RateReport {
    pub r_own_strong: f64,
    pub r_cross_strong: f64,
    pub r_weak: f64,
}

/// Map `(channels, powers)` to the strong- and weak-user receive SNRs.
pub fn derive_snrs(channels: LinkChannels, powers: PowerAllocation) -> (StrongUserSnrs, WeakUserSnrs) {
    let strong = StrongUserSnrs {
        mu1: powers.p1 * channels.h1_sq,
        mu2: powers.p2 * channels.h1_sq,
    };
    let weak = WeakUserSnrs {
        nu1: powers.p1 * channels.h2_sq,
        nu2: powers.p2 * channels.h2_sq / (1.0 + powers.pr * channels.h12_sq),
    };
    (strong, weak)
}

/// `Q = 2 tau (1 - tau)` for `tau` in `[0, 1)`; result lies in `[0, 0.5]`.
pub fn q_of_tau(tau: f64) -> Result<f64> {
    if !tau.is_finite() || !(0.0..1.0).contains(&tau) {
        return Err(Error::TauOutOfRange(tau));
    }
    Ok(2.0 * tau * (1.0 - tau))
}

// ---------------------------------------------------------------------------
// Power-minimization scenario
// ---------------------------------------------------------------------------

/// Full input to the weighted-sum power minimization: channels, QoS rate
/// targets, objective weights, power limits, the timing mismatch, and the
/// guaranteed minimum frame length `n_star` under which the solution must
/// remain QoS-safe.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PowerScenario {
    pub channels: LinkChannels,
    /// Target rate for User 1's own message, bits per channel use.
    pub r1_star: f64,
    /// Target rate for User 2's message (applies to both the relay
    /// decoding it and User 2 itself), bits per channel use.
    pub r2_star: f64,
    /// Weight on the BS transmit power `p1 + p2`.
    pub omega_s: f64,
    /// Weight on the relay transmit power `pr`.
    pub omega_r: f64,
    /// BS power budget, `p1 + p2 <= ps_max`.
    pub ps_max: f64,
    /// Relay power budget, `pr <= pr_max`.
    pub pr_max: f64,
    /// Timing mismatch the solved system will run with.
    pub tau: f64,
    /// Minimum frame length for which the solution is guaranteed safe.
    pub n_star: u32,
}

impl PowerScenario {
    /// Validate every scenario invariant. Solvers call this on entry.
    pub fn validate(&self) -> Result<()> {
        LinkChannels::new(self.channels.h1_sq, self.channels.h2_sq, self.channels.h12_sq)?;
        for (field, v) in [("r1_star", self.r1_star), ("r2_star", self.r2_star)] {
            if !v.is_finite() || v < 0.0 {
                return Err(Error::InvalidValue { field, expected: "finite and >= 0", value: v });
            }
        }
        for (field, v) in [("omega_s", self.omega_s), ("omega_r", self.omega_r)] {
            if !v.is_finite() || v < 0.0 {
                return Err(Error::InvalidValue { field, expected: "finite and >= 0", value: v });
            }
        }
        let sum = self.omega_s + self.omega_r;
        if (sum - 1.0).abs() > WEIGHT_SUM_TOL {
            return Err(Error::WeightSum(sum));
        }
        for (field, v) in [("ps_max", self.ps_max), ("pr_max", self.pr_max)] {
            if !v.is_finite() || v <= 0.0 {
                return Err(Error::InvalidValue { field, expected: "finite and > 0", value: v });
            }
        }
        if !self.tau.is_finite() || !(0.0..1.0).contains(&self.tau) {
            return Err(Error::TauOutOfRange(self.tau));
        }
        if self.n_star == 0 {
            return Err(Error::EmptyFrame);
        }
        Ok(())
    }

    /// `Q = 2 tau (1 - tau)` for the scenario's mismatch.
    pub fn q(&self) -> f64 {
        2.0 * self.tau * (1.0 - self.tau)
    }

    /// Same scenario with the mismatch forced to zero (the synchronous
    /// baseline the comparison operations run against).
    pub fn synchronous(&self) -> Self {
        Self { tau: 0.0, ..*self }
    }
}

// ---------------------------------------------------------------------------
// Tests
// ---------------------------------------------------------------------------

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn derive_snrs_unit_gains() {
        let ch = LinkChannels::new(1.0, 1.0, 1.0).unwrap();
        let pw = PowerAllocation::new(1.0, 1.0, 0.0).unwrap();
        let (s, w) = derive_snrs(ch, pw);
        assert_eq!((s.mu1, s.mu2), (1.0, 1.0));
        assert_eq!((w.nu1, w.nu2), (1.0, 1.0));
    }

    #[test]
    fn derive_snrs_worked_values() {
        let ch = LinkChannels::new(1.0, 0.8, 1.0).unwrap();
        let pw = PowerAllocation::new(1.5, 3.5, 2.0).unwrap();
        let (s, w) = derive_snrs(ch, pw);
        assert_eq!(s.mu1, 1.5);
        assert_eq!(s.mu2, 3.5);
        assert!((w.nu1 - 1.2).abs() < 1e-15);
        // nu2 = 3.5 * 0.8 / (1 + 2) = 2.8 / 3
        assert!((w.nu2 - 2.8 / 3.0).abs() < 1e-15);
    }

    #[test]
    fn derive_snrs_zero_power() {
        let ch = LinkChannels::new(3.0, 0.7, 2.0).unwrap();
        let pw = PowerAllocation::new(0.0, 0.0, 0.0).unwrap();
        let (s, w) = derive_snrs(ch, pw);
        assert_eq!((s.mu1, s.mu2, w.nu1, w.nu2), (0.0, 0.0, 0.0, 0.0));
    }

    #[test]
    fn q_of_tau_values() {
        assert_eq!(q_of_tau(0.0).unwrap(), 0.0);
        assert_eq!(q_of_tau(0.5).unwrap(), 0.5);
        assert_eq!(q_of_tau(0.25).unwrap(), 0.375);
    }

    #[test]
    fn q_of_tau_rejects_out_of_range() {
        assert!(matches!(q_of_tau(-0.1), Err(Error::TauOutOfRange(_))));
        assert!(matches!(q_of_tau(1.0), Err(Error::TauOutOfRange(_))));
        assert!(matches!(q_of_tau(f64::NAN), Err(Error::TauOutOfRange(_))));
    }

    #[test]
    fn q_of_tau_reflection_symmetry() {
        for k in 1..100 {
            let tau = k as f64 / 100.0;
            let a = q_of_tau(tau).unwrap();
            let b = q_of_tau(1.0 - tau).unwrap();
            assert!((a - b).abs() < 1e-15, "tau={tau}: {a} vs {b}");
        }
    }

    #[test]
    fn q_of_tau_maximized_at_half() {
        let q_half = q_of_tau(0.5).unwrap();
        for k in 0..1000 {
            let tau = k as f64 / 1000.0;
            assert!(q_of_tau(tau).unwrap() <= q_half + 1e-15);
        }
    }

    #[test]
    fn channels_reject_invalid() {
        assert!(LinkChannels::new(-1.0, 1.0, 1.0).is_err());
        assert!(LinkChannels::new(1.0, f64::INFINITY, 1.0).is_err());
        assert!(LinkChannels::new(1.0, 1.0, f64::NAN).is_err());
    }

    #[test]
    fn frame_rejects_invalid() {
        assert!(matches!(FrameConfig::new(0, 0.5), Err(Error::EmptyFrame)));
        assert!(matches!(FrameConfig::new(4, 1.0), Err(Error::TauOutOfRange(_))));
        assert!(FrameConfig::new(1, 0.0).is_ok());
    }

    #[test]
    fn frame_channel_uses() {
        let f = FrameConfig::new(10, 0.5).unwrap();
        assert_eq!(f.channel_uses(), 20.5);
        assert_eq!(f.q(), 0.5);
    }

    fn fig8_scenario() -> PowerScenario {
        PowerScenario {
            channels: LinkChannels::new(1.0, 0.5, 2.0).unwrap(),
            r1_star: 0.5,
            r2_star: 0.5,
            omega_s: 0.2,
            omega_r: 0.8,
            ps_max: 20.0,
            pr_max: 5.0,
            tau: 0.5,
            n_star: 100,
        }
    }

    #[test]
    fn scenario_validates() {
        assert!(fig8_scenario().validate().is_ok());
    }

    #[test]
    fn scenario_rejects_bad_weights() {
        let mut s = fig8_scenario();
        s.omega_s = 0.3;
        assert!(matches!(s.validate(), Err(Error::WeightSum(_))));
    }

    #[test]
    fn scenario_rejects_nonpositive_limits() {
        let mut s = fig8_scenario();
        s.ps_max = 0.0;
        assert!(s.validate().is_err());
    }

    #[test]
    fn synchronous_clone_zeroes_tau() {
        let s = fig8_scenario().synchronous();
        assert_eq!(s.tau, 0.0);
        assert_eq!(s.n_star, 100);
    }
}
