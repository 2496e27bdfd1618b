//! Monte Carlo experiment drivers: risk estimation, ROC curves, and rate
//! sweeps, with persisted, replayable outputs.
//!
//! Replications are independent work items keyed by rep index.  Every rep
//! derives its own stream family from the experiment's base stream
//! (`rep:{i}` → `signal` / `data-null` / `data-alt` / `shared-u` /
//! `evalue-g`), so the simulated datasets are a pure function of
//! (scenario, seed, rep) — in particular they do not depend on which
//! tests are being evaluated or on the worker count.  All tests at all
//! levels see identical data within one experiment (common random
//! numbers), which is what makes the power curves directly comparable.
//!
//! Aggregation is count-based and order-insensitive; files are written
//! single-threaded after aggregation.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt::Write as _;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::exec;
use crate::metatest::{calibrate, CalibrationTable, MetaTest, Resources, TestSpec};
use crate::model::{draw_signal, gen_trials, Scenario, Signal, SignalLaw, TrialSet};
use crate::rng::RandomStream;
use crate::{Error, Result};

/// Three-sigma binomial band for a frequency estimated from `reps` trials.
pub fn binomial_band(p_hat: f64, reps: u64) -> f64 {
    3.0 * (p_hat * (1.0 - p_hat) / reps as f64).sqrt()
}

/// Width of the comparison margin for two independently estimated
/// frequencies: the bands add in quadrature.
pub fn joint_band(band_a: f64, band_b: f64) -> f64 {
    band_a.hypot(band_b)
}

/// An estimated probability with its three-sigma binomial band.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Frequency {
    pub rate: f64,
    pub band: f64,
}

impl Frequency {
    fn from_counts(hits: u64, reps: u64) -> Self {
        let rate = hits as f64 / reps as f64;
        Frequency {
            rate,
            band: binomial_band(rate, reps),
        }
    }
}

/// Estimated testing risk: Type I error plus worst-case Type II error,
/// the latter approximated by the scenario's signal law (random signs at
/// fixed norm by default, or a fixed adversarial direction).
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RiskEstimate {
    pub test: String,
    pub scenario: Scenario,
    pub alpha: f64,
    pub type1: Frequency,
    pub type2: Frequency,
    pub reps: u64,
    pub seed: u64,
}

impl RiskEstimate {
    /// Point estimate of the risk sum.
    pub fn risk(&self) -> f64 {
        self.type1.rate + self.type2.rate
    }
}

/// One operating point of a ROC curve.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct RocPoint {
    pub alpha: f64,
    pub fpr: f64,
    pub tpr: f64,
}

/// Empirical ROC curve of one test in one scenario.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RocCurve {
    pub test: String,
    pub scenario: Scenario,
    pub points: Vec<RocPoint>,
    pub reps: u64,
    pub seed: u64,
}

impl RocCurve {
    /// True positive rate at a target false positive rate, linearly
    /// interpolated along the empirical curve (anchored at (0,0) and
    /// (1,1); ties in FPR resolve to the best observed TPR).
    pub fn tpr_at_fpr(&self, target: f64) -> f64 {
        if target <= 0.0 {
            return 0.0;
        }
        if target >= 1.0 {
            return 1.0;
        }
        let mut pts: Vec<(f64, f64)> = self.points.iter().map(|p| (p.fpr, p.tpr)).collect();
        pts.push((0.0, 0.0));
        pts.push((1.0, 1.0));
        pts.sort_by(|a, b| a.partial_cmp(b).expect("rates are never NaN"));
        // Keep the largest TPR seen at each distinct FPR.
        pts.dedup_by(|next, kept| {
            if next.0 == kept.0 {
                kept.1 = kept.1.max(next.1);
                true
            } else {
                false
            }
        });
        let hi = pts
            .iter()
            .position(|&(fpr, _)| fpr >= target)
            .expect("curve is anchored at fpr = 1");
        if pts[hi].0 == target || hi == 0 {
            return pts[hi].1;
        }
        let (x0, y0) = pts[hi - 1];
        let (x1, y1) = pts[hi];
        y0 + (target - x0) / (x1 - x0) * (y1 - y0)
    }
}

/// The all-zero curve recorded for a test that cannot run in a scenario
/// (e.g. a directional test with fewer trials than coordinates): it never
/// rejects, so every operating point sits at the origin.
pub fn never_reject_curve(
    test: &str,
    scenario: &Scenario,
    alphas: &[f64],
    reps: u64,
    seed: u64,
) -> RocCurve {
    RocCurve {
        test: test.to_string(),
        scenario: scenario.clone(),
        points: alphas
            .iter()
            .map(|&alpha| RocPoint {
                alpha,
                fpr: 0.0,
                tpr: 0.0,
            })
            .collect(),
        reps,
        seed,
    }
}

/// The level grid used for full ROC curves: α ∈ {0.01, 0.02, …, 0.99}.
pub fn default_alpha_grid() -> Vec<f64> {
    (1..=99).map(|i| f64::from(i) / 100.0).collect()
}

/// Everything one replication shares across tests and levels: a null
/// dataset, an alternative dataset with a freshly drawn signal, and the
/// per-rep shared resources.
pub struct RepData {
    pub null_trials: TrialSet,
    pub alt_trials: TrialSet,
    pub resources: Resources,
}

/// Draw one replication's datasets and resources.  The null arm uses the
/// scenario's shape with the signal forced to zero; both arms and all
/// resources come from disjoint substreams of `rep:{rep}`, so adding or
/// removing tests never perturbs the data.
pub fn draw_rep(
    scenario: &Scenario,
    specs: &[TestSpec],
    base: &RandomStream,
    rep: u64,
) -> Result<RepData> {
    let rep_stream = base.derive(&format!("rep:{rep}"));
    let null_scenario = Scenario::null(scenario.d, scenario.n, scenario.m);
    let zero = Signal {
        f: vec![0.0; scenario.d],
    };
    let mut null_stream = rep_stream.derive("data-null");
    let null_trials = gen_trials(&zero, &null_scenario, &mut null_stream, base.seed(), rep);
    let alt_trials = draw_alt_trials(scenario, &rep_stream, base.seed(), rep)?;
    let resources = crate::metatest::draw_resources(specs, scenario, &rep_stream);
    Ok(RepData {
        null_trials,
        alt_trials,
        resources,
    })
}

fn draw_alt_trials(
    scenario: &Scenario,
    rep_stream: &RandomStream,
    root_seed: u64,
    rep: u64,
) -> Result<TrialSet> {
    let mut signal_stream = rep_stream.derive("signal");
    let signal = draw_signal(scenario, &mut signal_stream)?;
    let mut data_stream = rep_stream.derive("data-alt");
    Ok(gen_trials(&signal, scenario, &mut data_stream, root_seed, rep))
}

/// Build a runnable test for a scenario, Monte Carlo-calibrating the
/// threshold map at exactly `alphas` when the analytic null law is out of
/// reach.  Calibration draws from the dedicated substream
/// `calibrate:<test>:d{d}-n{n}-m{m}` of `base`, independent of every
/// experiment rep stream.
pub fn prepare_test(
    spec: &TestSpec,
    scenario: &Scenario,
    alphas: &[f64],
    calib_reps: u64,
    base: &RandomStream,
) -> Result<MetaTest> {
    if !spec.needs_calibration(scenario) {
        return MetaTest::new(spec.clone(), scenario);
    }
    let label = format!(
        "calibrate:{}:d{}-n{}-m{}",
        spec.name(),
        scenario.d,
        scenario.n,
        scenario.m
    );
    let table = calibrate(spec, scenario, alphas, calib_reps, &base.derive(&label))?;
    MetaTest::with_calibration(spec.clone(), scenario, table)
}

/// Validate levels and return them sorted ascending with duplicates
/// removed, matching the strictly-increasing invariant of [`RocCurve`].
fn sorted_levels(alphas: &[f64]) -> Result<Vec<f64>> {
    if alphas.is_empty() {
        return Err(Error::InvalidConfig("no test levels given".into()));
    }
    for &alpha in alphas {
        if !(alpha > 0.0 && alpha < 1.0) || !alpha.is_finite() {
            return Err(Error::Domain(format!(
                "test level must lie in (0,1), got {alpha}"
            )));
        }
    }
    let mut sorted = alphas.to_vec();
    sorted.sort_by(f64::total_cmp);
    sorted.dedup();
    Ok(sorted)
}

/// Reject-count grid for a batch of tests over a batch of levels,
/// evaluated on common random numbers.  Returns, per test and level, the
/// null-arm and alternative-arm rejection counts.
fn count_rejections(
    tests: &[MetaTest],
    scenario: &Scenario,
    alphas: &[f64],
    reps: u64,
    base: &RandomStream,
) -> Result<Vec<Vec<(u64, u64)>>> {
    let specs: Vec<TestSpec> = tests.iter().map(|t| t.spec().clone()).collect();
    let thresholds: Vec<Vec<f64>> = tests
        .iter()
        .map(|t| alphas.iter().map(|&a| t.threshold(a)).collect::<Result<_>>())
        .collect::<Result<_>>()?;
    // Fail fast on anything per-rep evaluation could trip over, so the
    // parallel loop below can treat draws as infallible.
    scenario.validate()?;
    draw_signal(scenario, &mut base.derive("signal-probe"))?;
    let n_alphas = alphas.len();
    let counts: Vec<u64> = exec::run_reps(reps, |rep| {
        let data = draw_rep(scenario, &specs, base, rep)
            .expect("per-rep draws cannot fail after scenario validation");
        let mut cells = vec![0u64; 2 * tests.len() * n_alphas];
        for (t, test) in tests.iter().enumerate() {
            let stat_null = test
                .statistic(&data.null_trials, &data.resources)
                .expect("statistic evaluation cannot fail after construction");
            let stat_alt = test
                .statistic(&data.alt_trials, &data.resources)
                .expect("statistic evaluation cannot fail after construction");
            for (a, &kappa) in thresholds[t].iter().enumerate() {
                let cell = 2 * (t * n_alphas + a);
                cells[cell] = u64::from(test.decide(stat_null, kappa));
                cells[cell + 1] = u64::from(test.decide(stat_alt, kappa));
            }
        }
        cells
    });
    Ok(tests
        .iter()
        .enumerate()
        .map(|(t, _)| {
            (0..n_alphas)
                .map(|a| {
                    let cell = 2 * (t * n_alphas + a);
                    (counts[cell], counts[cell + 1])
                })
                .collect()
        })
        .collect())
}

/// Estimate the testing risk of one test at one level: Type I error from
/// null replications, Type II error from alternative replications with a
/// per-rep fresh signal.
pub fn estimate_risk(
    test: &MetaTest,
    scenario: &Scenario,
    alpha: f64,
    reps: u64,
    stream: &RandomStream,
) -> Result<RiskEstimate> {
    if reps < 100 {
        return Err(Error::InvalidConfig(format!(
            "risk estimation needs at least 100 replications, got {reps}"
        )));
    }
    let counts = count_rejections(
        std::slice::from_ref(test),
        scenario,
        &[alpha],
        reps,
        stream,
    )?;
    let (reject_null, reject_alt) = counts[0][0];
    Ok(RiskEstimate {
        test: test.name().to_string(),
        scenario: scenario.clone(),
        alpha,
        type1: Frequency::from_counts(reject_null, reps),
        type2: Frequency::from_counts(reps - reject_alt, reps),
        reps,
        seed: stream.seed(),
    })
}

/// ROC curves for a batch of tests on shared per-rep data.
pub fn roc_curves(
    tests: &[MetaTest],
    scenario: &Scenario,
    alphas: &[f64],
    reps: u64,
    stream: &RandomStream,
) -> Result<Vec<RocCurve>> {
    if reps == 0 {
        return Err(Error::InvalidConfig("roc estimation needs reps ≥ 1".into()));
    }
    let alphas = sorted_levels(alphas)?;
    let counts = count_rejections(tests, scenario, &alphas, reps, stream)?;
    Ok(tests
        .iter()
        .zip(counts)
        .map(|(test, per_alpha)| RocCurve {
            test: test.name().to_string(),
            scenario: scenario.clone(),
            points: alphas
                .iter()
                .zip(per_alpha)
                .map(|(&alpha, (fp, tp))| RocPoint {
                    alpha,
                    fpr: fp as f64 / reps as f64,
                    tpr: tp as f64 / reps as f64,
                })
                .collect(),
            reps,
            seed: stream.seed(),
        })
        .collect())
}

/// ROC curve of a single test; identical to its curve from a batched
/// [`roc_curves`] call with the same stream, because per-rep data never
/// depends on the test list.
pub fn roc_curve(
    test: &MetaTest,
    scenario: &Scenario,
    alphas: &[f64],
    reps: u64,
    stream: &RandomStream,
) -> Result<RocCurve> {
    Ok(roc_curves(std::slice::from_ref(test), scenario, alphas, reps, stream)?
        .pop()
        .expect("one test in, one curve out"))
}

/// Replace the scenario's signal law with the fixed direction ρe₁ — the
/// worst case for direction-sensitive tests.
pub fn worst_case_scenario(scenario: &Scenario) -> Scenario {
    let mut f = vec![0.0; scenario.d];
    f[0] = scenario.rho;
    Scenario {
        signal_law: SignalLaw::Fixed(f),
        ..scenario.clone()
    }
}

/// Signal-strength scaling laws for rate sweeps: ρ² = c · rate(d, m, n).
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum RateFormula {
    /// √d/n — what a single trial can detect.
    Single,
    /// √d/(mn) — what the pooled dataset can detect.
    Pooled,
    /// √d/(√m·n) — the norm-combination scaling.
    SqrtM,
    /// (√m ∧ d)·√d/(mn) — the directional scaling, with its elbow at
    /// m ≍ d².
    Directional,
    /// d/(mn) — the shared-rotation scaling.
    Coordinated,
}

impl RateFormula {
    pub fn parse(tag: &str) -> Result<Self> {
        match tag {
            "single" => Ok(RateFormula::Single),
            "pooled" => Ok(RateFormula::Pooled),
            "sqrt-m" => Ok(RateFormula::SqrtM),
            "directional" => Ok(RateFormula::Directional),
            "coordinated" => Ok(RateFormula::Coordinated),
            other => Err(Error::InvalidConfig(format!(
                "unknown rate formula '{other}' (expected single, pooled, sqrt-m, \
                 directional, or coordinated)"
            ))),
        }
    }

    pub fn tag(&self) -> &'static str {
        match self {
            RateFormula::Single => "single",
            RateFormula::Pooled => "pooled",
            RateFormula::SqrtM => "sqrt-m",
            RateFormula::Directional => "directional",
            RateFormula::Coordinated => "coordinated",
        }
    }

    /// The rate value at one grid point.
    pub fn value(&self, d: usize, m: usize, n: u64) -> f64 {
        let (d, m, n) = (d as f64, m as f64, n as f64);
        match self {
            RateFormula::Single => d.sqrt() / n,
            RateFormula::Pooled => d.sqrt() / (m * n),
            RateFormula::SqrtM => d.sqrt() / (m.sqrt() * n),
            RateFormula::Directional => m.sqrt().min(d) * d.sqrt() / (m * n),
            RateFormula::Coordinated => d / (m * n),
        }
    }
}

/// One (d, m, n) shape in a rate sweep grid.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GridPoint {
    pub d: usize,
    pub m: usize,
    pub n: u64,
}

/// Power of one test at one grid cell.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RateCell {
    pub d: usize,
    pub m: usize,
    pub n: u64,
    pub c: f64,
    pub rho2: f64,
    pub test: String,
    pub power: f64,
    pub band: f64,
    pub reps: u64,
    pub seed: u64,
}

/// TPR-at-FPR-0.1 comparison of the norm-combining test against the
/// directional one, across m at fixed d — the elbow diagnostic.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ElbowEntry {
    pub d: usize,
    pub m: usize,
    pub n: u64,
    pub c: f64,
    pub rho2: f64,
    pub chisq_tpr: f64,
    pub directional_tpr: f64,
    pub gap: f64,
    pub band: f64,
}

/// Power surface over a (d, m, n) × c grid, plus the elbow report.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RateSweepResult {
    pub rate: String,
    pub alpha: f64,
    pub cells: Vec<RateCell>,
    pub elbow: Vec<ElbowEntry>,
    pub seed: u64,
}

/// Sweep the tests over the grid at signal strengths ρ² = c·rate(d,m,n),
/// recording level-α power per cell.  Tests that need Monte Carlo
/// thresholds are calibrated per cell from dedicated substreams; tests
/// that cannot run at a cell's shape (m < d directional) are recorded as
/// zero-power cells rather than errors.
///
/// Whenever the grid holds several m values at a fixed (d, n), an elbow
/// report is appended: TPR at FPR 0.1 for the norm-combining test versus
/// the calibrated directional one at each such shape, from full ROC
/// passes on common random numbers.
pub fn rate_sweep(
    specs: &[TestSpec],
    grid: &[GridPoint],
    c_values: &[f64],
    rate: RateFormula,
    alpha: f64,
    reps: u64,
    calib_reps: u64,
    stream: &RandomStream,
) -> Result<RateSweepResult> {
    if grid.is_empty() {
        return Err(Error::InvalidConfig("rate sweep needs a nonempty grid".into()));
    }
    if c_values.is_empty() {
        return Err(Error::InvalidConfig(
            "rate sweep needs at least one scale value c".into(),
        ));
    }
    if reps < 100 {
        return Err(Error::InvalidConfig(format!(
            "rate sweep needs at least 100 replications per cell, got {reps}"
        )));
    }
    sorted_levels(&[alpha])?;
    let mut cells = Vec::with_capacity(grid.len() * c_values.len() * specs.len());
    for point in grid {
        for &c in c_values {
            let rho2 = c * rate.value(point.d, point.m, point.n);
            let scenario = Scenario::rademacher(point.d, point.n, point.m, rho2);
            let cell_stream = stream.derive(&format!(
                "cell:d{}-m{}-n{}-c{}",
                point.d, point.m, point.n, c
            ));
            for spec in specs {
                let power = match prepare_test(spec, &scenario, &[alpha], calib_reps, stream) {
                    Ok(test) => {
                        let risk = estimate_risk(&test, &scenario, alpha, reps, &cell_stream)?;
                        Frequency {
                            rate: 1.0 - risk.type2.rate,
                            band: risk.type2.band,
                        }
                    }
                    Err(Error::UnsupportedRegime(_)) => Frequency {
                        rate: 0.0,
                        band: 0.0,
                    },
                    Err(other) => return Err(other),
                };
                cells.push(RateCell {
                    d: point.d,
                    m: point.m,
                    n: point.n,
                    c,
                    rho2,
                    test: spec.name(),
                    power: power.rate,
                    band: power.band,
                    reps,
                    seed: stream.seed(),
                });
            }
        }
    }
    let elbow = elbow_report(grid, c_values, rate, reps, calib_reps, stream)?;
    Ok(RateSweepResult {
        rate: rate.tag().to_string(),
        alpha,
        cells,
        elbow,
        seed: stream.seed(),
    })
}

fn elbow_report(
    grid: &[GridPoint],
    c_values: &[f64],
    rate: RateFormula,
    reps: u64,
    calib_reps: u64,
    stream: &RandomStream,
) -> Result<Vec<ElbowEntry>> {
    let mut m_by_shape: BTreeMap<(usize, u64), BTreeSet<usize>> = BTreeMap::new();
    for point in grid {
        m_by_shape
            .entry((point.d, point.n))
            .or_default()
            .insert(point.m);
    }
    let alphas = default_alpha_grid();
    let mut entries = Vec::new();
    for ((d, n), ms) in m_by_shape {
        if ms.len() < 2 {
            continue;
        }
        for &c in c_values {
            for &m in &ms {
                let rho2 = c * rate.value(d, m, n);
                let scenario = Scenario::rademacher(d, n, m, rho2);
                let chisq = prepare_test(
                    &TestSpec::ChisqCombined,
                    &scenario,
                    &alphas,
                    calib_reps,
                    stream,
                )?;
                let directional = match prepare_test(
                    &TestSpec::EdgingtonDirectional,
                    &scenario,
                    &alphas,
                    calib_reps,
                    stream,
                ) {
                    Ok(test) => Some(test),
                    Err(Error::UnsupportedRegime(_)) => None,
                    Err(other) => return Err(other),
                };
                let elbow_stream = stream.derive(&format!("elbow:d{d}-m{m}-n{n}-c{c}"));
                let (chisq_tpr, directional_tpr) = match directional {
                    Some(directional) => {
                        let curves = roc_curves(
                            &[chisq, directional],
                            &scenario,
                            &alphas,
                            reps,
                            &elbow_stream,
                        )?;
                        (curves[0].tpr_at_fpr(0.1), curves[1].tpr_at_fpr(0.1))
                    }
                    None => {
                        let curve =
                            roc_curve(&chisq, &scenario, &alphas, reps, &elbow_stream)?;
                        (curve.tpr_at_fpr(0.1), 0.0)
                    }
                };
                entries.push(ElbowEntry {
                    d,
                    m,
                    n,
                    c,
                    rho2,
                    chisq_tpr,
                    directional_tpr,
                    gap: directional_tpr - chisq_tpr,
                    band: joint_band(
                        binomial_band(chisq_tpr, reps),
                        binomial_band(directional_tpr, reps),
                    ),
                });
            }
        }
    }
    Ok(entries)
}

/// A calibration table annotated with the test and shape it belongs to,
/// for persisting `calibrate` runs.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct NamedCalibration {
    pub test: String,
    pub scenario: Scenario,
    pub table: CalibrationTable,
}

/// Output file formats.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Format {
    Csv,
    Json,
    Svg,
}

impl Format {
    pub fn parse(name: &str) -> Result<Self> {
        match name {
            "csv" => Ok(Format::Csv),
            "json" => Ok(Format::Json),
            "svg" => Ok(Format::Svg),
            other => Err(Error::InvalidConfig(format!(
                "unknown output format '{other}' (expected csv, json, or svg)"
            ))),
        }
    }
}

/// Anything the harness can persist: a flat record view for CSV, serde
/// for JSON, and optionally a drawing.
pub trait Report: Serialize {
    fn csv_header(&self) -> &'static str;
    fn csv_rows(&self) -> Vec<String>;
    /// Extra trailing comment lines for the CSV form.
    fn csv_footnotes(&self) -> Vec<String> {
        Vec::new()
    }
    fn svg(&self) -> Option<String> {
        None
    }
}

impl Report for Vec<RocCurve> {
    fn csv_header(&self) -> &'static str {
        "alpha,fpr,tpr,test,reps,seed"
    }

    fn csv_rows(&self) -> Vec<String> {
        self.iter()
            .flat_map(|curve| {
                curve.points.iter().map(move |p| {
                    format!(
                        "{},{},{},{},{},{}",
                        p.alpha, p.fpr, p.tpr, curve.test, curve.reps, curve.seed
                    )
                })
            })
            .collect()
    }

    fn svg(&self) -> Option<String> {
        Some(render_roc_svg(self))
    }
}

impl Report for Vec<RiskEstimate> {
    fn csv_header(&self) -> &'static str {
        "test,alpha,type1,type1_band,type2,type2_band,risk,reps,seed"
    }

    fn csv_rows(&self) -> Vec<String> {
        self.iter()
            .map(|r| {
                format!(
                    "{},{},{},{},{},{},{},{},{}",
                    r.test,
                    r.alpha,
                    r.type1.rate,
                    r.type1.band,
                    r.type2.rate,
                    r.type2.band,
                    r.risk(),
                    r.reps,
                    r.seed
                )
            })
            .collect()
    }
}

impl Report for RateSweepResult {
    fn csv_header(&self) -> &'static str {
        "d,m,n,c,rho2,test,power,band,reps,seed"
    }

    fn csv_rows(&self) -> Vec<String> {
        self.cells
            .iter()
            .map(|cell| {
                format!(
                    "{},{},{},{},{},{},{},{},{},{}",
                    cell.d,
                    cell.m,
                    cell.n,
                    cell.c,
                    cell.rho2,
                    cell.test,
                    cell.power,
                    cell.band,
                    cell.reps,
                    cell.seed
                )
            })
            .collect()
    }

    fn csv_footnotes(&self) -> Vec<String> {
        let mut notes = Vec::new();
        if !self.elbow.is_empty() {
            notes.push(
                "# elbow: d,m,n,c,rho2,chisq_tpr,directional_tpr,gap,band".to_string(),
            );
            for e in &self.elbow {
                notes.push(format!(
                    "# elbow: {},{},{},{},{},{},{},{},{}",
                    e.d, e.m, e.n, e.c, e.rho2, e.chisq_tpr, e.directional_tpr, e.gap, e.band
                ));
            }
        }
        notes
    }
}

impl Report for Vec<NamedCalibration> {
    fn csv_header(&self) -> &'static str {
        "test,d,m,n,alpha,kappa,reps,seed_fingerprint"
    }

    fn csv_rows(&self) -> Vec<String> {
        self.iter()
            .flat_map(|named| {
                named
                    .table
                    .alphas
                    .iter()
                    .zip(&named.table.kappas)
                    .map(move |(&alpha, &kappa)| {
                        format!(
                            "{},{},{},{},{},{},{},{}",
                            named.test,
                            named.scenario.d,
                            named.scenario.m,
                            named.scenario.n,
                            alpha,
                            kappa,
                            named.table.reps,
                            named.table.seed_fingerprint
                        )
                    })
            })
            .collect()
    }
}

/// Write a report to `path`.  CSV puts the header first, one record per
/// line, and embeds the resolved run configuration as a trailing comment;
/// JSON nests the configuration next to the results; SVG (ROC only)
/// carries the configuration in its description element.  Given the same
/// report and configuration the bytes are identical on every run.
pub fn emit<R: Report>(
    report: &R,
    format: Format,
    path: &Path,
    config_json: &str,
) -> Result<()> {
    let contents = match format {
        Format::Csv => {
            let mut out = String::new();
            out.push_str(report.csv_header());
            out.push('\n');
            for row in report.csv_rows() {
                out.push_str(&row);
                out.push('\n');
            }
            for note in report.csv_footnotes() {
                out.push_str(&note);
                out.push('\n');
            }
            let _ = writeln!(out, "# config={config_json}");
            out
        }
        Format::Json => {
            let config: serde_json::Value = serde_json::from_str(config_json)
                .map_err(|e| Error::InvalidConfig(format!("config echo is not JSON: {e}")))?;
            let body = serde_json::json!({
                "config": config,
                "results": serde_json::to_value(report)
                    .map_err(|e| Error::InvalidConfig(format!("unserializable report: {e}")))?,
            });
            let mut out = serde_json::to_string_pretty(&body)
                .map_err(|e| Error::InvalidConfig(format!("unserializable report: {e}")))?;
            out.push('\n');
            out
        }
        Format::Svg => {
            let body = report.svg().ok_or_else(|| {
                Error::InvalidConfig(
                    "svg output is only available for roc results".into(),
                )
            })?;
            body.replace("__CONFIG__", &xml_escape(config_json))
        }
    };
    std::fs::write(path, contents)?;
    Ok(())
}

fn xml_escape(raw: &str) -> String {
    raw.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;")
}

const PALETTE: [&str; 10] = [
    "#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b", "#e377c2", "#7f7f7f",
    "#bcbd22", "#17becf",
];

/// One polyline per test over an identity diagonal, with a legend.
fn render_roc_svg(curves: &[RocCurve]) -> String {
    const W: f64 = 640.0;
    const H: f64 = 520.0;
    const L: f64 = 70.0;
    const R: f64 = 610.0;
    const T: f64 = 40.0;
    const B: f64 = 470.0;
    let x = |fpr: f64| L + fpr * (R - L);
    let y = |tpr: f64| B - tpr * (B - T);
    let mut svg = String::new();
    let _ = writeln!(
        svg,
        "<svg xmlns=\"http://www.w3.org/2000/svg\" viewBox=\"0 0 {W} {H}\" \
         font-family=\"sans-serif\" font-size=\"13\">"
    );
    svg.push_str("<desc>config=__CONFIG__</desc>\n");
    let _ = writeln!(
        svg,
        "<rect x=\"{L}\" y=\"{T}\" width=\"{}\" height=\"{}\" fill=\"none\" \
         stroke=\"#333\"/>",
        R - L,
        B - T
    );
    let _ = writeln!(
        svg,
        "<line x1=\"{:.2}\" y1=\"{:.2}\" x2=\"{:.2}\" y2=\"{:.2}\" stroke=\"#999\" \
         stroke-dasharray=\"6 4\"/>",
        x(0.0),
        y(0.0),
        x(1.0),
        y(1.0)
    );
    for tick in [0.0, 0.25, 0.5, 0.75, 1.0] {
        let _ = writeln!(
            svg,
            "<text x=\"{:.2}\" y=\"{:.2}\" text-anchor=\"middle\">{tick}</text>",
            x(tick),
            B + 20.0
        );
        let _ = writeln!(
            svg,
            "<text x=\"{:.2}\" y=\"{:.2}\" text-anchor=\"end\">{tick}</text>",
            L - 8.0,
            y(tick) + 4.0
        );
    }
    let _ = writeln!(
        svg,
        "<text x=\"{:.2}\" y=\"{:.2}\" text-anchor=\"middle\">false positive rate</text>",
        (L + R) / 2.0,
        H - 8.0
    );
    let _ = writeln!(
        svg,
        "<text x=\"16\" y=\"{:.2}\" text-anchor=\"middle\" \
         transform=\"rotate(-90 16 {:.2})\">true positive rate</text>",
        (T + B) / 2.0,
        (T + B) / 2.0
    );
    for (i, curve) in curves.iter().enumerate() {
        let color = PALETTE[i % PALETTE.len()];
        let mut pts = vec![(0.0f64, 0.0f64)];
        pts.extend(curve.points.iter().map(|p| (p.fpr, p.tpr)));
        pts.push((1.0, 1.0));
        pts.sort_by(|a, b| a.partial_cmp(b).expect("rates are never NaN"));
        let coords: Vec<String> = pts
            .iter()
            .map(|&(fpr, tpr)| format!("{:.2},{:.2}", x(fpr), y(tpr)))
            .collect();
        let _ = writeln!(
            svg,
            "<polyline points=\"{}\" fill=\"none\" stroke=\"{color}\" stroke-width=\"1.5\"/>",
            coords.join(" ")
        );
        let ly = B - 16.0 * (curves.len() - i) as f64 - 8.0;
        let _ = writeln!(
            svg,
            "<line x1=\"{:.2}\" y1=\"{ly:.2}\" x2=\"{:.2}\" y2=\"{ly:.2}\" \
             stroke=\"{color}\" stroke-width=\"3\"/>",
            R - 200.0,
            R - 172.0
        );
        let _ = writeln!(
            svg,
            "<text x=\"{:.2}\" y=\"{:.2}\">{}</text>",
            R - 164.0,
            ly + 4.0,
            xml_escape(&curve.test)
        );
    }
    svg.push_str("</svg>\n");
    svg
}
