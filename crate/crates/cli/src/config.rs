//! Experiment configuration: one TOML document per run, with CLI flags
//! overriding individual keys.  The fully resolved form is serialized
//! into every artifact the run writes, which is enough to replay it
//! byte-identically.

use std::fs;
use std::path::{Path, PathBuf};

use anyhow::{bail, Context};
use metameans::harness::{self, Format, GridPoint, RateFormula};
use metameans::metatest::{self, TestSpec};
use metameans::model::{Scenario, SignalLaw};
use serde::{Deserialize, Serialize};

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    /// Root seed.  Required — runs never pull silent entropy, so every
    /// artifact names the seed that regenerates it.
    pub seed: Option<u64>,
    /// Monte Carlo replications for the main estimate.
    #[serde(default = "default_reps")]
    pub reps: u64,
    /// Registry test names; an empty or missing list means the whole
    /// registry.
    #[serde(default)]
    pub tests: Vec<String>,
    /// Levels to evaluate: an explicit list, or `{start, stop, count}`
    /// for an even grid.  Missing means each subcommand's default.
    pub alphas: Option<AlphaSpec>,
    /// Artifact path.
    pub out: Option<PathBuf>,
    /// Artifact format: csv, json, or svg (svg for ROC curves only).
    #[serde(default = "default_format")]
    pub format: String,
    pub scenario: Option<ScenarioConfig>,
    #[serde(default)]
    pub calibration: CalibrationConfig,
    pub rates: Option<RatesConfig>,
    pub quantize: Option<QuantizeConfig>,
}

fn default_reps() -> u64 {
    1_000
}

fn default_format() -> String {
    "csv".into()
}

impl ExperimentConfig {
    pub fn load(path: &Path) -> anyhow::Result<Self> {
        let text = fs::read_to_string(path)
            .with_context(|| format!("reading config {}", path.display()))?;
        let config: Self =
            toml::from_str(&text).with_context(|| format!("parsing {}", path.display()))?;
        Ok(config)
    }

    pub fn seed(&self) -> anyhow::Result<u64> {
        self.seed.context(
            "a root seed is required for reproducible runs: set `seed` in the config \
             or pass --seed",
        )
    }

    /// The configured tests, or the full registry when none are named.
    pub fn specs(&self) -> metameans::Result<Vec<TestSpec>> {
        let names = if self.tests.is_empty() {
            metatest::registry_names()
        } else {
            self.tests.clone()
        };
        names.iter().map(|name| TestSpec::parse(name)).collect()
    }

    pub fn alphas(&self, default: &[f64]) -> anyhow::Result<Vec<f64>> {
        match &self.alphas {
            Some(spec) => spec.resolve(),
            None => Ok(default.to_vec()),
        }
    }

    pub fn format(&self) -> metameans::Result<Format> {
        Format::parse(&self.format)
    }

    pub fn out(&self) -> anyhow::Result<&Path> {
        self.out.as_deref().context(
            "an output path is required: set `out` in the config or pass --out",
        )
    }

    pub fn scenario(&self) -> anyhow::Result<Scenario> {
        self.scenario
            .as_ref()
            .context("this subcommand needs a [scenario] table")?
            .build()
    }

    /// The resolved config as the JSON echo embedded in artifacts.
    pub fn echo_json(&self) -> anyhow::Result<String> {
        serde_json::to_string(self).context("serializing the resolved config")
    }
}

/// Levels as a list or an evenly spaced grid.
#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(untagged)]
pub enum AlphaSpec {
    List(Vec<f64>),
    Grid { start: f64, stop: f64, count: usize },
}

impl AlphaSpec {
    pub fn resolve(&self) -> anyhow::Result<Vec<f64>> {
        match self {
            AlphaSpec::List(levels) => {
                if levels.is_empty() {
                    bail!("`alphas` must not be empty");
                }
                Ok(levels.clone())
            }
            AlphaSpec::Grid { start, stop, count } => {
                if *count < 2 {
                    bail!("`alphas.count` must be at least 2");
                }
                if !(start.is_finite() && stop.is_finite() && start < stop) {
                    bail!("`alphas` grid needs start < stop");
                }
                let step = (stop - start) / (*count as f64 - 1.0);
                Ok((0..*count).map(|i| start + step * i as f64).collect())
            }
        }
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ScenarioConfig {
    pub d: usize,
    pub n: u64,
    pub m: usize,
    /// Squared signal norm under the alternative.
    #[serde(default)]
    pub rho2: f64,
    /// Signal law: "rademacher" (random signs at norm ρ), "fixed" (the
    /// vector `f`), or "null".
    #[serde(default = "default_signal")]
    pub signal: String,
    /// Fixed signal vector, for `signal = "fixed"`.
    pub f: Option<Vec<f64>>,
    /// Replace the signal law with the axis signal ρ·e₁ before running —
    /// the adversarial direction for sign-based tests.
    #[serde(default)]
    pub worst_case: bool,
}

fn default_signal() -> String {
    "rademacher".into()
}

impl ScenarioConfig {
    pub fn build(&self) -> anyhow::Result<Scenario> {
        if self.d == 0 || self.m == 0 || self.n == 0 {
            bail!("[scenario] d, m, and n must all be positive");
        }
        let scenario = match self.signal.as_str() {
            "null" => Scenario::null(self.d, self.n, self.m),
            "rademacher" => {
                if !(self.rho2.is_finite() && self.rho2 >= 0.0) {
                    bail!("[scenario] rho2 must be a nonnegative number");
                }
                Scenario::rademacher(self.d, self.n, self.m, self.rho2)
            }
            "fixed" => {
                let f = self
                    .f
                    .clone()
                    .context("signal = \"fixed\" needs an `f` vector")?;
                if f.len() != self.d {
                    bail!("[scenario] f has {} entries but d = {}", f.len(), self.d);
                }
                let rho = f.iter().map(|x| x * x).sum::<f64>().sqrt();
                if self.rho2 != 0.0 && (rho * rho - self.rho2).abs() > 1e-9 {
                    bail!(
                        "[scenario] rho2 = {} disagrees with ‖f‖² = {}",
                        self.rho2,
                        rho * rho
                    );
                }
                Scenario {
                    d: self.d,
                    n: self.n,
                    m: self.m,
                    rho,
                    signal_law: SignalLaw::Fixed(f),
                }
            }
            other => bail!(
                "unknown signal law `{other}` (expected rademacher, fixed, or null)"
            ),
        };
        Ok(if self.worst_case {
            harness::worst_case_scenario(&scenario)
        } else {
            scenario
        })
    }
}

#[derive(Clone, Debug, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CalibrationConfig {
    /// Monte Carlo size for calibrated threshold tables (minimum 1000).
    pub reps: Option<u64>,
}

impl CalibrationConfig {
    pub fn reps(&self) -> u64 {
        self.reps.unwrap_or(100_000)
    }
}

/// Grid specification for the `rates` subcommand: power is measured at
/// ρ² = c · rate(d, m, n) on the product grid d × m.
#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RatesConfig {
    pub d: Vec<usize>,
    pub m: Vec<usize>,
    pub n: u64,
    pub c: Vec<f64>,
    /// One of: single, pooled, sqrt-m, directional, coordinated.
    pub rate: String,
    #[serde(default = "default_rate_alpha")]
    pub alpha: f64,
}

fn default_rate_alpha() -> f64 {
    0.05
}

impl RatesConfig {
    pub fn grid(&self) -> anyhow::Result<Vec<GridPoint>> {
        if self.d.is_empty() || self.m.is_empty() {
            bail!("[rates] d and m lists must not be empty");
        }
        Ok(self
            .d
            .iter()
            .flat_map(|&d| self.m.iter().map(move |&m| GridPoint { d, m, n: self.n }))
            .collect())
    }

    pub fn formula(&self) -> metameans::Result<RateFormula> {
        RateFormula::parse(&self.rate)
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct QuantizeConfig {
    #[serde(default = "default_inputs")]
    pub inputs: u64,
    #[serde(default = "default_eps")]
    pub eps: Vec<f64>,
    /// Input law: "normal" or "exponential", scaled by `scale`.
    #[serde(default = "default_law")]
    pub law: String,
    #[serde(default = "default_scale")]
    pub scale: f64,
}

fn default_inputs() -> u64 {
    100_000
}

fn default_eps() -> Vec<f64> {
    vec![0.1, 0.01]
}

fn default_law() -> String {
    "normal".into()
}

fn default_scale() -> f64 {
    1.0
}

impl Default for QuantizeConfig {
    fn default() -> Self {
        QuantizeConfig {
            inputs: default_inputs(),
            eps: default_eps(),
            law: default_law(),
            scale: default_scale(),
        }
    }
}
