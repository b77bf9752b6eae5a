//! Scenario files: a small JSON document describing channels, powers,
//! frame, QoS targets, weights, and power limits. Unknown keys are
//! rejected; missing sections fall back to the documented defaults.
//!
//! ```json
//! {
//!   "channels": { "h1_sq": 1.0, "h2_sq": 0.5, "h12_sq": 2.0 },
//!   "powers":   { "p1": 1.5, "p2": 3.5, "pr": 2.0 },
//!   "frame":    { "n": 100, "tau": 0.5 },
//!   "qos":      { "gamma1": 1.0, "gamma2": 1.0 },
//!   "weights":  { "omega_s": 0.2, "omega_r": 0.8 },
//!   "limits":   { "ps_max": 20.0, "pr_max": 5.0 },
//!   "n_star":   100
//! }
//! ```
//!
//! QoS targets take exactly one form per user: a rate (`r1_star`,
//! `r2_star`, bits per channel use) or a SINR (`gamma1`, `gamma2`);
//! SINRs are converted on load via `r = log2(1 + gamma) / 2`.

use std::fmt;
use std::fs;
use std::path::Path;

use canoma_core::model::{FrameConfig, LinkChannels, PowerAllocation, PowerScenario};
use canoma_core::power::rate_target_from_sinr;
use serde::Deserialize;

pub const DEFAULT_TAU: f64 = 0.5;
pub const DEFAULT_FRAME_N: u32 = 100;
pub const DEFAULT_N_STAR: u32 = 100;
pub const DEFAULT_WEIGHTS: (f64, f64) = (0.2, 0.8);
pub const DEFAULT_LIMITS: (f64, f64) = (20.0, 5.0);

#[derive(Debug)]
pub struct ScenarioError(pub String);

impl fmt::Display for ScenarioError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

impl std::error::Error for ScenarioError {}

fn err(msg: impl Into<String>) -> ScenarioError {
    ScenarioError(msg.into())
}

// ---------------------------------------------------------------------------
// Raw file schema
// ---------------------------------------------------------------------------

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct ScenarioFile {
    channels: ChannelsSection,
    powers: Option<PowersSection>,
    frame: Option<FrameSection>,
    qos: Option<QosSection>,
    weights: Option<WeightsSection>,
    limits: Option<LimitsSection>,
    n_star: Option<u32>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct ChannelsSection {
    h1_sq: f64,
    h2_sq: f64,
    h12_sq: f64,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct PowersSection {
    p1: f64,
    p2: f64,
    pr: f64,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct FrameSection {
    n: Option<u32>,
    tau: Option<f64>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct QosSection {
    r1_star: Option<f64>,
    gamma1: Option<f64>,
    r2_star: Option<f64>,
    gamma2: Option<f64>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct WeightsSection {
    omega_s: f64,
    omega_r: f64,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct LimitsSection {
    ps_max: f64,
    pr_max: f64,
}

// ---------------------------------------------------------------------------
// Loading and validation
// ---------------------------------------------------------------------------

/// The validated domain objects a scenario file describes.
#[derive(Debug, Clone, Copy)]
pub struct LoadedScenario {
    pub scenario: PowerScenario,
    pub powers: PowerAllocation,
    pub frame: FrameConfig,
}

fn finite(section: &str, field: &str, v: f64) -> Result<f64, ScenarioError> {
    if v.is_finite() {
        Ok(v)
    } else {
        Err(err(format!("{section}.{field}: must be finite, got {v}")))
    }
}

fn target(
    section: &str,
    rate_name: &str,
    rate: Option<f64>,
    sinr_name: &str,
    sinr: Option<f64>,
) -> Result<f64, ScenarioError> {
    match (rate, sinr) {
        (Some(_), Some(_)) => Err(err(format!(
            "{section}: {rate_name} and {sinr_name} are mutually exclusive; give exactly one"
        ))),
        (Some(r), None) => {
            let r = finite(section, rate_name, r)?;
            if r < 0.0 {
                return Err(err(format!("{section}.{rate_name}: must be >= 0, got {r}")));
            }
            Ok(r)
        }
        (None, Some(g)) => {
            let g = finite(section, sinr_name, g)?;
            if g < 0.0 {
                return Err(err(format!("{section}.{sinr_name}: must be >= 0, got {g}")));
            }
            Ok(rate_target_from_sinr(g))
        }
        (None, None) => Ok(0.0),
    }
}

/// Parse and validate a scenario document.
pub fn parse_scenario(text: &str) -> Result<LoadedScenario, ScenarioError> {
    let file: ScenarioFile =
        serde_json::from_str(text).map_err(|e| err(format!("scenario parse error: {e}")))?;

    let ch = &file.channels;
    finite("channels", "h1_sq", ch.h1_sq)?;
    finite("channels", "h2_sq", ch.h2_sq)?;
    finite("channels", "h12_sq", ch.h12_sq)?;
    let channels = LinkChannels::new(ch.h1_sq, ch.h2_sq, ch.h12_sq)
        .map_err(|e| err(format!("channels: {e}")))?;

    let powers = match &file.powers {
        Some(p) => {
            finite("powers", "p1", p.p1)?;
            finite("powers", "p2", p.p2)?;
            finite("powers", "pr", p.pr)?;
            PowerAllocation::new(p.p1, p.p2, p.pr).map_err(|e| err(format!("powers: {e}")))?
        }
        None => PowerAllocation { p1: 0.0, p2: 0.0, pr: 0.0 },
    };

    let (n, tau) = match &file.frame {
        Some(f) => (
            f.n.unwrap_or(DEFAULT_FRAME_N),
            match f.tau {
                Some(t) => finite("frame", "tau", t)?,
                None => DEFAULT_TAU,
            },
        ),
        None => (DEFAULT_FRAME_N, DEFAULT_TAU),
    };
    let frame = FrameConfig::new(n, tau).map_err(|e| err(format!("frame: {e}")))?;

    let (r1_star, r2_star) = match &file.qos {
        Some(q) => (
            target("qos", "r1_star", q.r1_star, "gamma1", q.gamma1)?,
            target("qos", "r2_star", q.r2_star, "gamma2", q.gamma2)?,
        ),
        None => (0.0, 0.0),
    };

    let (omega_s, omega_r) = match &file.weights {
        Some(w) => (
            finite("weights", "omega_s", w.omega_s)?,
            finite("weights", "omega_r", w.omega_r)?,
        ),
        None => DEFAULT_WEIGHTS,
    };

    let (ps_max, pr_max) = match &file.limits {
        Some(l) => (
            finite("limits", "ps_max", l.ps_max)?,
            finite("limits", "pr_max", l.pr_max)?,
        ),
        None => DEFAULT_LIMITS,
    };

    let scenario = PowerScenario {
        channels,
        r1_star,
        r2_star,
        omega_s,
        omega_r,
        ps_max,
        pr_max,
        tau,
        n_star: file.n_star.unwrap_or(DEFAULT_N_STAR),
    };
    scenario.validate().map_err(|e| err(format!("scenario: {e}")))?;

    Ok(LoadedScenario { scenario, powers, frame })
}

/// Read and parse a scenario file from disk.
pub fn load_scenario(path: &Path) -> Result<LoadedScenario, ScenarioError> {
    let text = fs::read_to_string(path)
        .map_err(|e| err(format!("cannot read scenario {}: {e}", path.display())))?;
    parse_scenario(&text)
}
