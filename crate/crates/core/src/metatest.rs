//! Meta-level decision rules over m repeated trials.
//!
//! A meta test is a pipeline — local statistic per trial, combination rule
//! across trials — together with a strictly decreasing threshold map
//! α ↦ κ_α.  Where the combined statistic's null law is known the map is
//! analytic; everywhere else κ_α is a Monte Carlo quantile frozen into a
//! [`CalibrationTable`].  Every statistic is oriented so that large values
//! are evidence against the null; two-sided rules take an absolute value
//! and keep a one-sided threshold.
//!
//! Tests are identified in configuration files by the registry names
//! returned from [`registry_names`], e.g. `chisq-combined` or
//! `pvalue:fisher`.

use serde::{Deserialize, Serialize};

use crate::combine::{self, EvalueMode, Method};
use crate::exec;
use crate::localstat::{self, Partition};
use crate::model::{gen_trials, Scenario, Signal, TrialSet};
use crate::rng::{OrthogonalMatrix, RandomStream};
use crate::specfun;
use crate::{Error, Result};

/// Identifier for one entry of the test registry.
#[derive(Clone, Debug, PartialEq)]
pub enum TestSpec {
    /// Sum of per-trial squared norms against a χ²_{dm} threshold.
    ChisqCombined,
    /// Blockwise sums of directional statistics, χ²_d-based when the
    /// partition is balanced, Monte Carlo-calibrated otherwise.
    UncoordinatedDirectional,
    /// Blockwise sums of centered directional p-values, always calibrated.
    EdgingtonDirectional,
    /// First component after a per-rep shared rotation, two-sided normal.
    CoordinatedProjection,
    /// χ²_d test on the first trial alone.
    SingleTrial,
    /// χ²_d test on the pooled mean of all trials.
    Pooled,
    /// A p-value combination rule applied to per-trial χ²_d p-values.
    Pvalue(Method),
    /// Likelihood-ratio e-values merged by product or average.
    Evalue(EvalueMode),
}

impl TestSpec {
    /// Parse a registry name, e.g. `"pooled"` or `"evalue:product"`.
    pub fn parse(name: &str) -> Result<Self> {
        let unknown = || Error::UnknownTest {
            name: name.to_string(),
            registry: registry_names().join(", "),
        };
        match name {
            "chisq-combined" => Ok(TestSpec::ChisqCombined),
            "uncoordinated-directional" => Ok(TestSpec::UncoordinatedDirectional),
            "edgington-directional" => Ok(TestSpec::EdgingtonDirectional),
            "coordinated-projection" => Ok(TestSpec::CoordinatedProjection),
            "single-trial" => Ok(TestSpec::SingleTrial),
            "pooled" => Ok(TestSpec::Pooled),
            "evalue:product" => Ok(TestSpec::Evalue(EvalueMode::Product)),
            "evalue:average" => Ok(TestSpec::Evalue(EvalueMode::Average)),
            other => {
                let method_name = other.strip_prefix("pvalue:").ok_or_else(unknown)?;
                let method = Method::parse(method_name).map_err(|_| unknown())?;
                match method {
                    Method::Fisher
                    | Method::Pearson
                    | Method::MudholkarGeorge
                    | Method::Edgington
                    | Method::Stouffer
                    | Method::Tippett
                    | Method::GeneralizedMean(_) => Ok(TestSpec::Pvalue(method)),
                    _ => Err(unknown()),
                }
            }
        }
    }

    /// The canonical registry name.
    pub fn name(&self) -> String {
        match self {
            TestSpec::ChisqCombined => "chisq-combined".into(),
            TestSpec::UncoordinatedDirectional => "uncoordinated-directional".into(),
            TestSpec::EdgingtonDirectional => "edgington-directional".into(),
            TestSpec::CoordinatedProjection => "coordinated-projection".into(),
            TestSpec::SingleTrial => "single-trial".into(),
            TestSpec::Pooled => "pooled".into(),
            TestSpec::Pvalue(method) => format!("pvalue:{}", method.name()),
            TestSpec::Evalue(EvalueMode::Product) => "evalue:product".into(),
            TestSpec::Evalue(EvalueMode::Average) => "evalue:average".into(),
        }
    }

    /// Whether evaluating this test consumes the per-rep shared rotation.
    pub fn needs_shared_u(&self) -> bool {
        matches!(self, TestSpec::CoordinatedProjection)
    }

    /// Whether evaluating this test consumes the per-rep e-value
    /// alternative direction.
    pub fn needs_evalue_g(&self) -> bool {
        matches!(self, TestSpec::Evalue(_))
    }

    /// Whether the threshold map must come from Monte Carlo calibration
    /// for the given scenario shape.
    pub fn needs_calibration(&self, scenario: &Scenario) -> bool {
        match self {
            TestSpec::EdgingtonDirectional => true,
            // The χ²_d scaling is exact only for equal block sizes.
            TestSpec::UncoordinatedDirectional => scenario.m % scenario.d != 0,
            TestSpec::Pvalue(Method::MudholkarGeorge) | TestSpec::Pvalue(Method::Edgington) => {
                true
            }
            TestSpec::Pvalue(Method::GeneralizedMean(r)) => {
                !(*r == f64::NEG_INFINITY || *r == 1.0 || *r == f64::INFINITY)
            }
            _ => false,
        }
    }
}

/// Every name accepted by [`TestSpec::parse`], in presentation order.
/// Generalized means are listed at the three exponents with closed-form
/// thresholds; other exponents parse too and calibrate by Monte Carlo.
pub fn registry_names() -> Vec<String> {
    [
        "chisq-combined",
        "uncoordinated-directional",
        "edgington-directional",
        "coordinated-projection",
        "single-trial",
        "pooled",
        "pvalue:fisher",
        "pvalue:pearson",
        "pvalue:mudholkar_george",
        "pvalue:edgington",
        "pvalue:stouffer",
        "pvalue:tippett",
        "pvalue:generalized_mean(-inf)",
        "pvalue:generalized_mean(1)",
        "pvalue:generalized_mean(inf)",
        "evalue:product",
        "evalue:average",
    ]
    .iter()
    .map(|s| s.to_string())
    .collect()
}

/// Whether a test rejects in one tail of its statistic or folds two tails
/// into one through an absolute value.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Sides {
    One,
    Two,
}

/// Monte Carlo threshold grid: κ_α at each calibrated α, with provenance.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CalibrationTable {
    /// Calibrated levels, strictly increasing in (0,1).
    pub alphas: Vec<f64>,
    /// Empirical null quantiles matching `alphas`, non-increasing.
    pub kappas: Vec<f64>,
    /// Null replications behind each quantile.
    pub reps: u64,
    /// Fingerprint of the stream the null sample was drawn from.
    pub seed_fingerprint: u64,
}

impl CalibrationTable {
    /// Check the structural invariants: levels strictly increasing inside
    /// (0,1) and thresholds non-increasing.  (Continuous statistics give
    /// strictly decreasing thresholds; a constant statistic legitimately
    /// yields a constant κ, so equality is allowed here and strictness is
    /// asserted by the tests of each continuous pipeline.)
    pub fn validate(&self) -> Result<()> {
        if self.alphas.is_empty() || self.alphas.len() != self.kappas.len() {
            return Err(Error::InvalidConfig(
                "calibration table needs matching, non-empty alpha and kappa grids".into(),
            ));
        }
        for window in self.alphas.windows(2) {
            if !(window[0] < window[1]) {
                return Err(Error::InvalidConfig(
                    "calibration alphas must be strictly increasing".into(),
                ));
            }
        }
        if self.alphas[0] <= 0.0 || *self.alphas.last().unwrap() >= 1.0 {
            return Err(Error::InvalidConfig(
                "calibration alphas must lie inside (0,1)".into(),
            ));
        }
        for window in self.kappas.windows(2) {
            if window[0] < window[1] {
                return Err(Error::InvalidConfig(
                    "calibration thresholds must be non-increasing in alpha".into(),
                ));
            }
        }
        Ok(())
    }

    /// Threshold at exactly `alpha`, if that level was calibrated.
    pub fn threshold(&self, alpha: f64) -> Option<f64> {
        self.alphas
            .iter()
            .position(|&a| (a - alpha).abs() <= 1e-12)
            .map(|idx| self.kappas[idx])
    }
}

/// How a test turns a level into a threshold.
#[derive(Clone, Debug)]
pub enum ThresholdMap {
    /// Closed-form quantile of the known null law.
    Analytic,
    /// Monte Carlo table; decisions use strict inequality so the level
    /// constraint holds on the calibration sample itself.
    Calibrated(CalibrationTable),
    /// Calibration required but not yet supplied; thresholds error.
    Missing,
}

/// Per-replication resources shared by every test evaluated on the same
/// data: the common rotation for coordinated projections and the
/// alternative direction e-values are measured against.
#[derive(Clone, Debug, Default)]
pub struct Resources {
    pub shared_u: Option<OrthogonalMatrix>,
    pub evalue_g: Option<Vec<f64>>,
}

/// Draw the per-rep shared rotation from its dedicated substream.
pub fn draw_shared_u(d: usize, rep_stream: &RandomStream) -> OrthogonalMatrix {
    let mut stream = rep_stream.derive("shared-u");
    stream.haar_orthogonal(d)
}

/// Draw the per-rep e-value alternative: an isotropic direction scaled to
/// the scenario's signal norm ρ.
pub fn draw_evalue_g(scenario: &Scenario, rep_stream: &RandomStream) -> Vec<f64> {
    let mut stream = rep_stream.derive("evalue-g");
    let raw = stream.gaussian_vector(scenario.d);
    let norm = raw.iter().map(|v| v * v).sum::<f64>().sqrt();
    if norm == 0.0 || scenario.rho == 0.0 {
        return vec![0.0; scenario.d];
    }
    raw.iter().map(|v| v * scenario.rho / norm).collect()
}

/// Fill exactly the resources the given specs will consume this rep.
pub fn draw_resources(specs: &[TestSpec], scenario: &Scenario, rep_stream: &RandomStream) -> Resources {
    let mut resources = Resources::default();
    if specs.iter().any(TestSpec::needs_shared_u) {
        resources.shared_u = Some(draw_shared_u(scenario.d, rep_stream));
    }
    if specs.iter().any(TestSpec::needs_evalue_g) {
        resources.evalue_g = Some(draw_evalue_g(scenario, rep_stream));
    }
    resources
}

/// A ready-to-evaluate decision rule: statistic pipeline plus threshold
/// map, bound to a scenario shape.
#[derive(Clone, Debug)]
pub struct MetaTest {
    spec: TestSpec,
    name: String,
    d: usize,
    m: usize,
    threshold_map: ThresholdMap,
    sides: Sides,
}

impl MetaTest {
    /// Build a test whose threshold map is analytic for this scenario;
    /// specs that need calibration get a `Missing` map and error at
    /// threshold time until [`MetaTest::with_calibration`] is used.
    pub fn new(spec: TestSpec, scenario: &Scenario) -> Result<Self> {
        validate_shape(&spec, scenario)?;
        let threshold_map = if spec.needs_calibration(scenario) {
            ThresholdMap::Missing
        } else {
            ThresholdMap::Analytic
        };
        Ok(Self::assemble(spec, scenario, threshold_map))
    }

    /// Build a test around a Monte Carlo calibration table.
    pub fn with_calibration(
        spec: TestSpec,
        scenario: &Scenario,
        table: CalibrationTable,
    ) -> Result<Self> {
        validate_shape(&spec, scenario)?;
        table.validate()?;
        Ok(Self::assemble(spec, scenario, ThresholdMap::Calibrated(table)))
    }

    fn assemble(spec: TestSpec, scenario: &Scenario, threshold_map: ThresholdMap) -> Self {
        let sides = match spec {
            TestSpec::CoordinatedProjection | TestSpec::Pvalue(Method::Edgington) => Sides::Two,
            _ => Sides::One,
        };
        MetaTest {
            name: spec.name(),
            spec,
            d: scenario.d,
            m: scenario.m,
            threshold_map,
            sides,
        }
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn spec(&self) -> &TestSpec {
        &self.spec
    }

    pub fn sides(&self) -> Sides {
        self.sides
    }

    pub fn threshold_map(&self) -> &ThresholdMap {
        &self.threshold_map
    }

    /// The oriented test statistic for one replication.
    pub fn statistic(&self, trials: &TrialSet, resources: &Resources) -> Result<f64> {
        compute_statistic(&self.spec, trials, resources)
    }

    /// κ_α.  Analytic maps evaluate their closed form; calibrated maps
    /// look the level up and insist it was calibrated exactly.
    pub fn threshold(&self, alpha: f64) -> Result<f64> {
        if !(alpha > 0.0 && alpha < 1.0) || !alpha.is_finite() {
            return Err(Error::Domain(format!(
                "test level must lie in (0,1), got {alpha}"
            )));
        }
        match &self.threshold_map {
            ThresholdMap::Analytic => self.analytic_threshold(alpha),
            ThresholdMap::Calibrated(table) => {
                table.threshold(alpha).ok_or(Error::MissingCalibration {
                    test: self.name.clone(),
                    alpha,
                })
            }
            ThresholdMap::Missing => Err(Error::MissingCalibration {
                test: self.name.clone(),
                alpha,
            }),
        }
    }

    /// Decide at level α.  Analytic thresholds reject on ≥; calibrated
    /// thresholds reject on > so the empirical level constraint holds on
    /// the calibration sample.
    pub fn reject(&self, statistic: f64, alpha: f64) -> Result<bool> {
        let kappa = self.threshold(alpha)?;
        Ok(self.decide(statistic, kappa))
    }

    /// Decision against a precomputed threshold, with the same strictness
    /// convention as [`MetaTest::reject`].  For hot loops that look the
    /// threshold up once per level instead of once per replication.
    pub fn decide(&self, statistic: f64, kappa: f64) -> bool {
        match self.threshold_map {
            ThresholdMap::Analytic => statistic >= kappa,
            _ => statistic > kappa,
        }
    }

    fn analytic_threshold(&self, alpha: f64) -> Result<f64> {
        let d = self.d as u32;
        let m = self.m;
        match &self.spec {
            TestSpec::ChisqCombined => {
                specfun::chisq_quantile(1.0 - alpha, d * m as u32)
            }
            TestSpec::UncoordinatedDirectional => {
                Ok(specfun::chisq_quantile(1.0 - alpha, d)? / f64::from(d).sqrt())
            }
            TestSpec::CoordinatedProjection => specfun::std_normal_quantile(1.0 - alpha / 2.0),
            TestSpec::SingleTrial | TestSpec::Pooled => {
                specfun::chisq_quantile(1.0 - alpha, d)
            }
            TestSpec::Pvalue(Method::Fisher) => {
                specfun::chisq_quantile(1.0 - alpha, 2 * m as u32)
            }
            TestSpec::Pvalue(Method::Pearson) => {
                Ok(-specfun::chisq_quantile(alpha, 2 * m as u32)? / 2.0)
            }
            TestSpec::Pvalue(Method::Stouffer) => specfun::std_normal_quantile(1.0 - alpha),
            TestSpec::Pvalue(Method::Tippett) => Ok((-alpha).ln_1p()),
            TestSpec::Pvalue(Method::GeneralizedMean(r)) if *r == f64::NEG_INFINITY => Ok(-alpha),
            TestSpec::Pvalue(Method::GeneralizedMean(r)) if *r == 1.0 => Ok(-alpha),
            TestSpec::Pvalue(Method::GeneralizedMean(r)) if *r == f64::INFINITY => {
                Ok(-alpha.powf(1.0 / m as f64))
            }
            TestSpec::Evalue(EvalueMode::Product) => Ok(-alpha.ln()),
            TestSpec::Evalue(EvalueMode::Average) => Ok(alpha.recip()),
            other => Err(Error::MissingCalibration {
                test: other.name(),
                alpha,
            }),
        }
    }
}

/// Shape preconditions that do not depend on data.
fn validate_shape(spec: &TestSpec, scenario: &Scenario) -> Result<()> {
    scenario.validate()?;
    match spec {
        TestSpec::UncoordinatedDirectional | TestSpec::EdgingtonDirectional
            if scenario.m < scenario.d =>
        {
            Err(Error::UnsupportedRegime(format!(
                "directional partitions need m ≥ d, got m = {} < d = {}",
                scenario.m, scenario.d
            )))
        }
        TestSpec::Pvalue(method) => match method {
            Method::Fisher
            | Method::Pearson
            | Method::MudholkarGeorge
            | Method::Edgington
            | Method::Stouffer
            | Method::Tippett => Ok(()),
            Method::GeneralizedMean(r) if !r.is_nan() => Ok(()),
            other => Err(Error::InvalidConfig(format!(
                "{} is not a p-value combination rule",
                other.name()
            ))),
        },
        _ => Ok(()),
    }
}

/// (√d/m)·Σᵢ(block sum)² over the partition blocks.
fn directional_quadratic(values: &[f64], part: &Partition) -> f64 {
    let mut total = 0.0;
    for i in 0..part.d() {
        let block_sum: f64 = part.block(i).into_iter().map(|j| values[j]).sum();
        total += block_sum * block_sum;
    }
    (part.d() as f64).sqrt() / part.m() as f64 * total
}

fn compute_statistic(spec: &TestSpec, trials: &TrialSet, resources: &Resources) -> Result<f64> {
    let d = trials.d();
    let m = trials.m();
    let n = trials.scenario.n as f64;
    match spec {
        TestSpec::ChisqCombined => {
            Ok(combine::sum(&localstat::chisq_norm_stats(trials).values))
        }
        TestSpec::SingleTrial => Ok(localstat::chisq_norm_stats(trials).values[0]),
        TestSpec::Pooled => {
            let mean = trials.pooled_mean();
            Ok(n * m as f64 * mean.iter().map(|v| v * v).sum::<f64>())
        }
        TestSpec::UncoordinatedDirectional => {
            let part = localstat::make_partition(m, d)?;
            let s = localstat::directional_stats(trials, &part);
            Ok(directional_quadratic(&s.values, &part))
        }
        TestSpec::EdgingtonDirectional => {
            let part = localstat::make_partition(m, d)?;
            let s = localstat::directional_stats(trials, &part);
            let centered: Vec<f64> = s
                .values
                .iter()
                .map(|&v| specfun::norm_cdf(v) - 0.5)
                .collect();
            Ok(directional_quadratic(&centered, &part))
        }
        TestSpec::CoordinatedProjection => {
            let u = resources.shared_u.as_ref().ok_or_else(|| {
                Error::Domain(
                    "coordinated-projection needs the per-rep shared rotation".into(),
                )
            })?;
            let proj = localstat::projected_stats(trials, u);
            Ok((combine::sum(&proj.values) / (m as f64).sqrt()).abs())
        }
        TestSpec::Pvalue(method) => {
            let raw = localstat::chisq_norm_stats(trials);
            let p = localstat::chisq_pvalues(&raw, d as u32)?.values;
            match method {
                Method::Fisher => Ok(combine::fisher(&p)),
                Method::Pearson => Ok(-combine::pearson(&p)),
                Method::MudholkarGeorge => Ok(combine::mudholkar_george(&p)),
                Method::Edgington => Ok(combine::edgington(&p).abs()),
                Method::Stouffer => Ok(-combine::stouffer(&p)),
                Method::Tippett => Ok(combine::tippett(&p)),
                Method::GeneralizedMean(r) if *r == f64::NEG_INFINITY => {
                    Ok(-(m as f64) * combine::generalized_mean(&p, *r))
                }
                Method::GeneralizedMean(r) if *r == 1.0 => {
                    Ok(-2.0 * combine::generalized_mean(&p, 1.0))
                }
                Method::GeneralizedMean(r) => Ok(-combine::generalized_mean(&p, *r)),
                other => Err(Error::InvalidConfig(format!(
                    "{} is not a p-value combination rule",
                    other.name()
                ))),
            }
        }
        TestSpec::Evalue(mode) => {
            let g = resources.evalue_g.as_deref().ok_or_else(|| {
                Error::Domain("e-value tests need the per-rep alternative direction".into())
            })?;
            let e = localstat::lr_evalues(trials, g);
            Ok(match mode {
                EvalueMode::Product => combine::evalue_product_log(&e.values),
                EvalueMode::Average => combine::evalue_combine(&e.values, EvalueMode::Average),
            })
        }
    }
}

/// Empirical null quantiles for an arbitrary statistic sampler.
///
/// `null_statistic(stream, rep)` must return one independent draw of the
/// statistic under H₀ per rep index, deriving all of its randomness from
/// the given base stream so the table replays exactly.  κ_α is the
/// ⌊(1−α)·reps⌋-th order statistic of the sorted sample; paired with
/// strict-inequality rejection this keeps the empirical level at or below
/// α on the calibration sample itself.
pub fn calibrate_threshold<F>(
    null_statistic: F,
    alphas: &[f64],
    reps: u64,
    stream: &RandomStream,
) -> Result<CalibrationTable>
where
    F: Fn(&RandomStream, u64) -> f64 + Sync + Send,
{
    if reps < 1_000 {
        return Err(Error::InvalidConfig(format!(
            "threshold calibration needs at least 1000 replications, got {reps}"
        )));
    }
    if alphas.is_empty() {
        return Err(Error::InvalidConfig("no levels to calibrate".into()));
    }
    let mut sorted_alphas = alphas.to_vec();
    sorted_alphas.sort_by(f64::total_cmp);
    sorted_alphas.dedup();
    for &alpha in &sorted_alphas {
        if !(alpha > 0.0 && alpha < 1.0) {
            return Err(Error::InvalidConfig(format!(
                "calibration level {alpha} lies outside (0,1)"
            )));
        }
        if alpha * (reps as f64) < 20.0 {
            log::warn!(
                "calibrating level {alpha} from only {reps} replications puts fewer than \
                 20 samples in the tail; the threshold will be unstable"
            );
        }
    }
    let mut stats = exec::map_collect(reps, |rep| null_statistic(stream, rep));
    stats.sort_by(f64::total_cmp);
    let kappas = sorted_alphas
        .iter()
        .map(|&alpha| {
            let idx = (((1.0 - alpha) * reps as f64).floor() as usize).min(stats.len() - 1);
            stats[idx]
        })
        .collect();
    let table = CalibrationTable {
        alphas: sorted_alphas,
        kappas,
        reps,
        seed_fingerprint: stream.fingerprint(),
    };
    table.validate()?;
    Ok(table)
}

/// Calibrate a registry test's threshold map under H₀ at the scenario's
/// shape, deriving per-rep substreams from the given base stream.
pub fn calibrate(
    spec: &TestSpec,
    scenario: &Scenario,
    alphas: &[f64],
    reps: u64,
    stream: &RandomStream,
) -> Result<CalibrationTable> {
    validate_shape(spec, scenario)?;
    let null_scenario = Scenario::null(scenario.d, scenario.n, scenario.m);
    let zero = Signal {
        f: vec![0.0; scenario.d],
    };
    let spec_for_reps = spec.clone();
    let eval_scenario = scenario.clone();
    calibrate_threshold(
        move |base, rep| {
            let rep_stream = base.derive(&format!("rep:{rep}"));
            let mut data = rep_stream.derive("data-null");
            let trials = gen_trials(&zero, &null_scenario, &mut data, base.seed(), rep);
            let mut resources = Resources::default();
            if spec_for_reps.needs_shared_u() {
                resources.shared_u = Some(draw_shared_u(eval_scenario.d, &rep_stream));
            }
            if spec_for_reps.needs_evalue_g() {
                resources.evalue_g = Some(draw_evalue_g(&eval_scenario, &rep_stream));
            }
            compute_statistic(&spec_for_reps, &trials, &resources)
                .expect("statistic evaluation cannot fail after shape validation")
        },
        alphas,
        reps,
        stream,
    )
}

/// Sum-of-squared-norms test with its χ²_{dm} threshold.
pub fn chisq_combined_test(scenario: &Scenario) -> Result<MetaTest> {
    MetaTest::new(TestSpec::ChisqCombined, scenario)
}

/// Blockwise directional test; analytic χ²_d threshold for balanced
/// partitions, `Missing` map otherwise until calibrated.
pub fn uncoordinated_directional_test(scenario: &Scenario) -> Result<MetaTest> {
    MetaTest::new(TestSpec::UncoordinatedDirectional, scenario)
}

/// Directional variant of Edgington's rule; always calibrated.
pub fn edgington_directional_test(
    scenario: &Scenario,
    calib: CalibrationTable,
) -> Result<MetaTest> {
    MetaTest::with_calibration(TestSpec::EdgingtonDirectional, scenario, calib)
}

/// Shared-rotation projection test with its two-sided normal threshold.
pub fn coordinated_projection_test(scenario: &Scenario) -> Result<MetaTest> {
    MetaTest::new(TestSpec::CoordinatedProjection, scenario)
}

/// χ²_d test using only the first trial.
pub fn single_trial_test(scenario: &Scenario) -> Result<MetaTest> {
    MetaTest::new(TestSpec::SingleTrial, scenario)
}

/// χ²_d test on the pooled mean across trials.
pub fn pooled_test(scenario: &Scenario) -> Result<MetaTest> {
    MetaTest::new(TestSpec::Pooled, scenario)
}

/// A p-value combination test by combiner name, e.g. `"fisher"`.
pub fn pvalue_method_test(method_name: &str, scenario: &Scenario) -> Result<MetaTest> {
    MetaTest::new(TestSpec::parse(&format!("pvalue:{method_name}"))?, scenario)
}
