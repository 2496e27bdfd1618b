//! Per-trial statistics: one real number per study, computed from that
//! study's data alone (plus, for the projection statistic, a rotation known
//! to every study in advance).
//!
//! Every statistic here is the input side of a meta test: the combination
//! rules in [`crate::combine`] only ever see these m values, never the raw
//! data — that information boundary is the whole point of the model.

use crate::model::TrialSet;
use crate::rng::OrthogonalMatrix;
use crate::specfun;
use crate::{diag, Error, Result};

/// Largest e-value we emit; exp() beyond this is capped and counted in
/// diagnostics rather than returned as +∞.
const EVALUE_CAP: f64 = 1e300;

/// What the per-trial values are.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum StatKind {
    Raw,
    Pvalue,
    Evalue,
}

/// Which randomness a statistic consumed beyond its own trial's data.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Randomness {
    /// Only trial-local data (and possibly trial-local auxiliary noise).
    Local,
    /// A shared rotation, identified by the drawing stream's fingerprint.
    Shared(u64),
}

/// The m local statistics S⁽¹⁾…S⁽ᵐ⁾ of one rep.
#[derive(Clone, Debug)]
pub struct StatisticVector {
    pub values: Vec<f64>,
    pub kind: StatKind,
    pub randomness: Randomness,
}

/// Assignment of trials to coordinates for the directional statistics:
/// trial j (0-based) works on coordinate j mod d, so block sizes differ by
/// at most one and the layout is deterministic.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Partition {
    m: usize,
    d: usize,
}

impl Partition {
    /// Coordinate handled by trial j.
    pub fn coordinate_of(&self, j: usize) -> usize {
        j % self.d
    }

    pub fn d(&self) -> usize {
        self.d
    }

    pub fn m(&self) -> usize {
        self.m
    }

    /// |J_i| for each coordinate i.
    pub fn block_sizes(&self) -> Vec<usize> {
        let mut sizes = vec![self.m / self.d; self.d];
        for s in sizes.iter_mut().take(self.m % self.d) {
            *s += 1;
        }
        sizes
    }

    /// True when every block has exactly m/d trials (d divides m); only
    /// then does the directional statistic have its exact chi-square null.
    pub fn is_balanced(&self) -> bool {
        self.m % self.d == 0
    }

    /// Trials in block i (0-based coordinate).
    pub fn block(&self, i: usize) -> Vec<usize> {
        (i..self.m).step_by(self.d).collect()
    }
}

/// Round-robin partition of m trials over d coordinates.
///
/// Errors: m < d (some coordinate would get no trial) is an unsupported
/// regime; harnesses report it as zero power rather than crashing.
pub fn make_partition(m: usize, d: usize) -> Result<Partition> {
    if d == 0 {
        return Err(Error::Domain("partition needs d ≥ 1".into()));
    }
    if m < d {
        return Err(Error::UnsupportedRegime(format!(
            "directional partition needs m ≥ d (got m={m}, d={d})"
        )));
    }
    Ok(Partition { m, d })
}

/// S⁽ʲ⁾ = n·‖X⁽ʲ⁾‖₂² — the locally optimal norm statistic. Under H₀,
/// χ²_d for every trial.
pub fn chisq_norm_stats(trials: &TrialSet) -> StatisticVector {
    let n = trials.scenario.n as f64;
    let values = (0..trials.m())
        .map(|j| n * trials.trial(j).iter().map(|v| v * v).sum::<f64>())
        .collect();
    StatisticVector {
        values,
        kind: StatKind::Raw,
        randomness: Randomness::Local,
    }
}

/// Upper-tail p-values 1 − F_{χ²_d}(S⁽ʲ⁾) for chi-square norm statistics;
/// U(0,1) per trial under H₀.
///
/// Errors: input that is not a raw statistic vector.
pub fn chisq_pvalues(stats: &StatisticVector, d: u32) -> Result<StatisticVector> {
    if stats.kind != StatKind::Raw {
        return Err(Error::Domain(
            "chisq_pvalues expects raw chi-square norm statistics".into(),
        ));
    }
    let a = f64::from(d) / 2.0;
    let values = stats
        .values
        .iter()
        .map(|&s| specfun::gamma_q(a, s / 2.0))
        .collect();
    Ok(StatisticVector {
        values,
        kind: StatKind::Pvalue,
        randomness: stats.randomness,
    })
}

/// Directional statistics over a partition: S⁽ʲ⁾ = √n·X⁽ʲ⁾_{i(j)} where
/// i(j) is trial j's block coordinate. N(0,1) per trial under H₀.
pub fn directional_stats(trials: &TrialSet, part: &Partition) -> StatisticVector {
    assert_eq!(part.m(), trials.m(), "partition sized for a different m");
    assert_eq!(part.d(), trials.d(), "partition sized for a different d");
    let sqrt_n = (trials.scenario.n as f64).sqrt();
    let values = (0..trials.m())
        .map(|j| sqrt_n * trials.trial(j)[part.coordinate_of(j)])
        .collect();
    StatisticVector {
        values,
        kind: StatKind::Raw,
        randomness: Randomness::Local,
    }
}

/// Shared-rotation projections: S⁽ʲ⁾ = (√n·U·X⁽ʲ⁾)₁ with the same U for
/// every trial. N(0,1) per trial under H₀.
pub fn projected_stats(trials: &TrialSet, u: &OrthogonalMatrix) -> StatisticVector {
    assert_eq!(u.dim(), trials.d(), "rotation sized for a different d");
    let sqrt_n = (trials.scenario.n as f64).sqrt();
    let values = (0..trials.m())
        .map(|j| sqrt_n * u.first_component(trials.trial(j)))
        .collect();
    StatisticVector {
        values,
        kind: StatKind::Raw,
        randomness: Randomness::Shared(u.tag()),
    }
}

/// Likelihood-ratio e-values against the simple alternative mean `g`:
/// E⁽ʲ⁾ = exp(n·⟨g, X⁽ʲ⁾⟩ − n‖g‖²/2). Null expectation is exactly 1 for
/// any g, which is what makes thresholding at 1/α a valid level-α test.
pub fn lr_evalues(trials: &TrialSet, g: &[f64]) -> StatisticVector {
    assert_eq!(g.len(), trials.d(), "alternative mean sized for a different d");
    let n = trials.scenario.n as f64;
    let half_norm2 = 0.5 * n * g.iter().map(|v| v * v).sum::<f64>();
    let values = (0..trials.m())
        .map(|j| {
            let dot: f64 = trials
                .trial(j)
                .iter()
                .zip(g)
                .map(|(x, gi)| x * gi)
                .sum();
            let log_e = n * dot - half_norm2;
            if log_e > EVALUE_CAP.ln() {
                diag::note_evalue_overflow();
                EVALUE_CAP
            } else {
                log_e.exp()
            }
        })
        .collect();
    StatisticVector {
        values,
        kind: StatKind::Evalue,
        randomness: Randomness::Local,
    }
}
