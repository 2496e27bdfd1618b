//! Signals and observations for the many normal means model.
//!
//! `m` independent trials each observe a `d`-vector `X⁽ʲ⁾ = f + Z⁽ʲ⁾/√n`
//! with `Z⁽ʲ⁾ ~ N(0, I_d)`. The null is `f = 0`; alternatives have
//! `‖f‖₂ = ρ`. Signals are drawn fresh per Monte Carlo rep (Rademacher
//! coordinate signs at fixed norm), with a fixed-`f` mode for worst-case
//! probing of direction-sensitive tests.

use crate::rng::RandomStream;
use crate::{Error, Result};
use serde::{Deserialize, Serialize};

/// How the alternative's mean vector is produced.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SignalLaw {
    /// A caller-supplied vector; must satisfy ‖f‖₂ = ρ.
    Fixed(Vec<f64>),
    /// f_i = d^{−1/2}·ρ·R_i with iid fair signs R_i; ‖f‖₂ = ρ exactly.
    RademacherScaled,
    /// f = 0 (forces ρ = 0).
    Null,
}

/// One experiment configuration.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Scenario {
    /// Dimension of each trial's observation.
    pub d: usize,
    /// Per-trial sample size; the noise scale is 1/√n.
    pub n: u64,
    /// Number of trials combined by a meta test.
    pub m: usize,
    /// Signal norm ‖f‖₂ under the alternative.
    pub rho: f64,
    pub signal_law: SignalLaw,
}

impl Scenario {
    /// A null scenario (ρ = 0) with the given shape.
    pub fn null(d: usize, n: u64, m: usize) -> Self {
        Scenario {
            d,
            n,
            m,
            rho: 0.0,
            signal_law: SignalLaw::Null,
        }
    }

    /// A Rademacher-signed alternative at squared norm `rho2`.
    pub fn rademacher(d: usize, n: u64, m: usize, rho2: f64) -> Self {
        Scenario {
            d,
            n,
            m,
            rho: rho2.sqrt(),
            signal_law: SignalLaw::RademacherScaled,
        }
    }

    /// Validate the invariants that the type system cannot express.
    pub fn validate(&self) -> Result<()> {
        if self.d == 0 || self.m == 0 || self.n == 0 {
            return Err(Error::InvalidConfig(format!(
                "scenario requires d, n, m ≥ 1 (got d={}, n={}, m={})",
                self.d, self.n, self.m
            )));
        }
        if !self.rho.is_finite() || self.rho < 0.0 {
            return Err(Error::InvalidConfig(format!(
                "signal norm must be finite and ≥ 0 (got {})",
                self.rho
            )));
        }
        match &self.signal_law {
            SignalLaw::Null if self.rho != 0.0 => Err(Error::InvalidConfig(
                "null signal law requires rho = 0".into(),
            )),
            SignalLaw::Fixed(f) if f.len() != self.d => Err(Error::InvalidConfig(format!(
                "fixed signal has length {} but d = {}",
                f.len(),
                self.d
            ))),
            _ => Ok(()),
        }
    }
}

/// A mean vector under the alternative (or zero under the null).
#[derive(Clone, Debug, PartialEq)]
pub struct Signal {
    pub f: Vec<f64>,
}

impl Signal {
    pub fn norm(&self) -> f64 {
        self.f.iter().map(|v| v * v).sum::<f64>().sqrt()
    }
}

/// The m×d observations of one rep, with provenance for replay.
#[derive(Clone, Debug)]
pub struct TrialSet {
    /// Row j is X⁽ʲ⁾.
    x: Vec<f64>,
    pub scenario: Scenario,
    /// Root seed of the experiment this rep belongs to.
    pub root_seed: u64,
    /// Rep index within the experiment.
    pub rep: u64,
}

impl TrialSet {
    /// Build a trial set from explicit observation rows (mainly for tests
    /// and replaying recorded data); row count must equal m, row length d.
    pub fn from_rows(scenario: &Scenario, rows: Vec<Vec<f64>>) -> Self {
        assert_eq!(rows.len(), scenario.m, "row count must equal m");
        let mut x = Vec::with_capacity(scenario.m * scenario.d);
        for row in rows {
            assert_eq!(row.len(), scenario.d, "row length must equal d");
            x.extend(row);
        }
        TrialSet {
            x,
            scenario: scenario.clone(),
            root_seed: 0,
            rep: 0,
        }
    }

    /// Trial j's observation vector.
    pub fn trial(&self, j: usize) -> &[f64] {
        let d = self.scenario.d;
        &self.x[j * d..(j + 1) * d]
    }

    pub fn m(&self) -> usize {
        self.scenario.m
    }

    pub fn d(&self) -> usize {
        self.scenario.d
    }

    /// Per-coordinate mean over all trials.
    pub fn pooled_mean(&self) -> Vec<f64> {
        let (m, d) = (self.scenario.m, self.scenario.d);
        let mut mean = vec![0.0; d];
        for j in 0..m {
            for (i, v) in self.trial(j).iter().enumerate() {
                mean[i] += v;
            }
        }
        for v in &mut mean {
            *v /= m as f64;
        }
        mean
    }
}

/// Draw the rep's signal according to the scenario's law.
///
/// Errors: a fixed signal whose norm differs from ρ by more than 1e-12.
pub fn draw_signal(scenario: &Scenario, stream: &mut RandomStream) -> Result<Signal> {
    scenario.validate()?;
    match &scenario.signal_law {
        SignalLaw::Null => Ok(Signal {
            f: vec![0.0; scenario.d],
        }),
        SignalLaw::Fixed(f) => {
            let norm = f.iter().map(|v| v * v).sum::<f64>().sqrt();
            if (norm - scenario.rho).abs() > 1e-12 {
                return Err(Error::InvalidConfig(format!(
                    "fixed signal norm {} does not match rho = {}",
                    norm, scenario.rho
                )));
            }
            Ok(Signal { f: f.clone() })
        }
        SignalLaw::RademacherScaled => {
            let scale = scenario.rho / (scenario.d as f64).sqrt();
            let f = stream
                .rademacher_vector(scenario.d)
                .into_iter()
                .map(|r| scale * r)
                .collect();
            Ok(Signal { f })
        }
    }
}

/// Generate one rep's trials: row j = f + z⁽ʲ⁾/√n, fresh Gaussian noise per
/// trial. `root_seed`/`rep` are provenance only; all randomness comes from
/// `stream`.
pub fn gen_trials(
    signal: &Signal,
    scenario: &Scenario,
    stream: &mut RandomStream,
    root_seed: u64,
    rep: u64,
) -> TrialSet {
    let (m, d) = (scenario.m, scenario.d);
    assert_eq!(signal.f.len(), d, "signal length must equal d");
    let inv_sqrt_n = 1.0 / (scenario.n as f64).sqrt();
    let mut x = Vec::with_capacity(m * d);
    for _ in 0..m {
        for f_i in &signal.f {
            x.push(f_i + inv_sqrt_n * stream.next_gaussian());
        }
    }
    TrialSet {
        x,
        scenario: scenario.clone(),
        root_seed,
        rep,
    }
}
