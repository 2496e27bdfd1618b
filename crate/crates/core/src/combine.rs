//! Combination rules for per-trial summaries.
//!
//! Given one p-value, e-value, or raw statistic per trial, these functions
//! collapse the vector into a single scalar whose null law (or a Markov
//! bound on it) supplies a rejection threshold.  Every rule is symmetric in
//! its inputs; internal sums are evaluated in a canonical order so the
//! symmetry holds exactly in floating point, not merely up to rounding.
//!
//! Boundary p-values are clamped to `[CLAMP_MIN, CLAMP_MAX]` before any
//! logarithm or normal inversion, and each clamp is recorded in [`diag`]
//! counters so long runs can assert the guard never fired.

use crate::specfun::{self, CLAMP_MAX, CLAMP_MIN};
use crate::{diag, Error, Result};

/// Clamp a p-value away from zero, recording the event.
fn clamp_low(p: f64) -> f64 {
    if p < CLAMP_MIN {
        diag::note_pvalue_clamp_low();
        CLAMP_MIN
    } else {
        p
    }
}

/// Clamp a p-value away from one, recording the event.
fn clamp_high(p: f64) -> f64 {
    if p > CLAMP_MAX {
        diag::note_pvalue_clamp_high();
        CLAMP_MAX
    } else {
        p
    }
}

/// Sum addends in a canonical order so that permuting the inputs cannot
/// change the floating-point result.
fn canonical_sum(mut terms: Vec<f64>) -> f64 {
    terms.sort_by(f64::total_cmp);
    terms.iter().sum()
}

/// Fisher's combination `Σⱼ −2 log p⁽ʲ⁾`, distributed χ²₂ₘ under the null
/// when the inputs are independent U(0,1).  Zero inputs are clamped to the
/// representable floor before the logarithm.
pub fn fisher(pvec: &[f64]) -> f64 {
    debug_assert!(!pvec.is_empty());
    canonical_sum(pvec.iter().map(|&p| -2.0 * clamp_low(p).ln()).collect())
}

/// Pearson's combination `Σⱼ −log(1 − p⁽ʲ⁾)`, the mirror image of Fisher's
/// rule.  Small values of the sum indicate small p-values, so tests built
/// on it reject in the lower tail.  Inputs at one are clamped first.
pub fn pearson(pvec: &[f64]) -> f64 {
    debug_assert!(!pvec.is_empty());
    canonical_sum(pvec.iter().map(|&p| -(-clamp_high(p)).ln_1p()).collect())
}

/// The logit-style combination `Σⱼ −log(p⁽ʲ⁾(1 − p⁽ʲ⁾))` of Mudholkar and
/// George; both boundaries are clamped.
pub fn mudholkar_george(pvec: &[f64]) -> f64 {
    debug_assert!(!pvec.is_empty());
    canonical_sum(
        pvec.iter()
            .map(|&p| {
                let p = clamp_high(clamp_low(p));
                -(p.ln() + (-p).ln_1p())
            })
            .collect(),
    )
}

/// Edgington's centered sum `m^{−1/2} Σⱼ (p⁽ʲ⁾ − ½)`.  The summand is
/// bounded, so no clamping is required and the rule accepts the closed
/// interval [0, 1].
pub fn edgington(pvec: &[f64]) -> f64 {
    debug_assert!(!pvec.is_empty());
    let m = pvec.len() as f64;
    canonical_sum(pvec.iter().map(|&p| p - 0.5).collect()) / m.sqrt()
}

/// Stouffer's combination `m^{−1/2} Σⱼ Φ^{−1}(p⁽ʲ⁾)`, standard normal
/// under the null; boundary inputs are clamped before inversion.
pub fn stouffer(pvec: &[f64]) -> f64 {
    debug_assert!(!pvec.is_empty());
    let m = pvec.len() as f64;
    canonical_sum(
        pvec.iter()
            .map(|&p| specfun::norm_quantile(clamp_high(clamp_low(p))))
            .collect(),
    ) / m.sqrt()
}

/// Tippett's rule through the exponential transform `S⁽ʲ⁾ = −log(1−p⁽ʲ⁾)`:
/// returns `−m·minⱼ S⁽ʲ⁾`, so a small minimum p-value maps to a large
/// statistic.  Accepts the closed interval [0, 1]; an input of exactly one
/// contributes +∞ to the minimum and therefore never determines it unless
/// every entry is one.
pub fn tippett(pvec: &[f64]) -> f64 {
    debug_assert!(!pvec.is_empty());
    let m = pvec.len() as f64;
    let min = pvec
        .iter()
        .map(|&p| -(-p).ln_1p())
        .fold(f64::INFINITY, f64::min);
    -m * min
}

/// Exponent magnitude beyond which the power mean is evaluated as the
/// exact minimum or maximum.  Past this point the two differ by far less
/// than one ulp for inputs in [0, 1] while the direct formula has lost all
/// precision.
const POWER_MEAN_COLLAPSE: f64 = 1e6;

/// Generalized-mean combination `(m^{−1} Σⱼ (p⁽ʲ⁾)^r)^{1/r}`.
///
/// `r = 0` is the geometric mean, `r = −∞` the minimum and `r = +∞` the
/// maximum; finite exponents of magnitude at least 10⁶ collapse to the
/// corresponding extreme.  A zero entry forces the result to zero whenever
/// `r ≤ 0`.  Evaluation runs in log space (log-sum-exp) so that large |r|
/// cannot overflow `p^r`.
pub fn generalized_mean(pvec: &[f64], r: f64) -> f64 {
    debug_assert!(!pvec.is_empty());
    let min = pvec.iter().copied().fold(f64::INFINITY, f64::min);
    let max = pvec.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    if r.is_infinite() || r.abs() >= POWER_MEAN_COLLAPSE {
        return if r > 0.0 { max } else { min };
    }
    if r == 0.0 {
        // Geometric mean; ln 0 = −∞ makes a zero entry absorbing.
        let mean_log =
            canonical_sum(pvec.iter().map(|&p| p.ln()).collect()) / pvec.len() as f64;
        return mean_log.exp();
    }
    if r < 0.0 && min == 0.0 {
        // 0^r diverges for negative r; the limiting value of the mean is 0.
        return 0.0;
    }
    let a: Vec<f64> = pvec.iter().map(|&p| r * p.ln()).collect();
    let peak = a.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    if peak == f64::NEG_INFINITY {
        // Every entry is zero (only reachable for r > 0).
        return 0.0;
    }
    let log_mean = peak
        + canonical_sum(a.iter().map(|&v| (v - peak).exp()).collect()).ln()
        - (pvec.len() as f64).ln();
    (log_mean / r).exp()
}

/// How a vector of e-values is merged into one.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum EvalueMode {
    /// Product of independent e-values.
    Product,
    /// Plain average, valid even without independence.
    Average,
}

/// Merge e-values by product or average.
///
/// The product is evaluated directly and can overflow to +∞ for extreme
/// inputs; threshold comparisons should use [`evalue_product_log`], which
/// stays finite.
pub fn evalue_combine(evec: &[f64], mode: EvalueMode) -> f64 {
    debug_assert!(!evec.is_empty());
    match mode {
        EvalueMode::Product => {
            let mut sorted = evec.to_vec();
            sorted.sort_by(f64::total_cmp);
            sorted.iter().product()
        }
        EvalueMode::Average => canonical_sum(evec.to_vec()) / evec.len() as f64,
    }
}

/// Natural logarithm of the product of e-values, `Σⱼ log e⁽ʲ⁾`, immune to
/// overflow of the raw product.  A zero e-value yields −∞.
pub fn evalue_product_log(evec: &[f64]) -> f64 {
    debug_assert!(!evec.is_empty());
    canonical_sum(evec.iter().map(|&e| e.ln()).collect())
}

/// Plain sum of raw per-trial statistics.
pub fn sum(svec: &[f64]) -> f64 {
    canonical_sum(svec.to_vec())
}

/// Identifier for a combination rule, as written in configuration files.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum Method {
    Fisher,
    Pearson,
    MudholkarGeorge,
    Edgington,
    Stouffer,
    Tippett,
    GeneralizedMean(f64),
    EvalueProduct,
    EvalueAverage,
    Sum,
}

impl Method {
    /// Parse a method name as it appears in configuration files, e.g.
    /// `"fisher"` or `"generalized_mean(-inf)"`.
    pub fn parse(name: &str) -> Result<Self> {
        let method = match name {
            "fisher" => Method::Fisher,
            "pearson" => Method::Pearson,
            "mudholkar_george" => Method::MudholkarGeorge,
            "edgington" => Method::Edgington,
            "stouffer" => Method::Stouffer,
            "tippett" => Method::Tippett,
            "evalue_product" => Method::EvalueProduct,
            "evalue_average" => Method::EvalueAverage,
            "sum" => Method::Sum,
            other => {
                let inner = other
                    .strip_prefix("generalized_mean(")
                    .and_then(|rest| rest.strip_suffix(')'))
                    .ok_or_else(|| {
                        Error::InvalidConfig(format!("unknown combination method `{other}`"))
                    })?;
                let r: f64 = inner.parse().map_err(|_| {
                    Error::InvalidConfig(format!(
                        "generalized_mean exponent `{inner}` is not a number"
                    ))
                })?;
                if r.is_nan() {
                    return Err(Error::InvalidConfig(
                        "generalized_mean exponent must not be NaN".into(),
                    ));
                }
                Method::GeneralizedMean(r)
            }
        };
        Ok(method)
    }

    /// The canonical configuration-file name of this method.
    pub fn name(&self) -> String {
        match self {
            Method::Fisher => "fisher".into(),
            Method::Pearson => "pearson".into(),
            Method::MudholkarGeorge => "mudholkar_george".into(),
            Method::Edgington => "edgington".into(),
            Method::Stouffer => "stouffer".into(),
            Method::Tippett => "tippett".into(),
            Method::GeneralizedMean(r) if *r == f64::INFINITY => "generalized_mean(inf)".into(),
            Method::GeneralizedMean(r) if *r == f64::NEG_INFINITY => {
                "generalized_mean(-inf)".into()
            }
            Method::GeneralizedMean(r) => format!("generalized_mean({r})"),
            Method::EvalueProduct => "evalue_product".into(),
            Method::EvalueAverage => "evalue_average".into(),
            Method::Sum => "sum".into(),
        }
    }

    /// Apply the rule to a vector of per-trial summaries.
    pub fn combine(&self, values: &[f64]) -> f64 {
        match self {
            Method::Fisher => fisher(values),
            Method::Pearson => pearson(values),
            Method::MudholkarGeorge => mudholkar_george(values),
            Method::Edgington => edgington(values),
            Method::Stouffer => stouffer(values),
            Method::Tippett => tippett(values),
            Method::GeneralizedMean(r) => generalized_mean(values, *r),
            Method::EvalueProduct => evalue_combine(values, EvalueMode::Product),
            Method::EvalueAverage => evalue_combine(values, EvalueMode::Average),
            Method::Sum => sum(values),
        }
    }
}

/// A combination rule bundled with optional Hölder-continuity constants
/// `(L, p, q)` asserting `|C(s) − C(s′)| ≤ L·(Σⱼ |sⱼ − s′ⱼ|^p)^q` on the
/// scale the rule consumes.
#[derive(Clone, Debug)]
pub struct Combiner {
    pub method: Method,
    pub holder_constants: Option<(f64, f64, f64)>,
}

impl Combiner {
    pub fn new(method: Method) -> Self {
        Combiner {
            method,
            holder_constants: None,
        }
    }

    pub fn with_holder(mut self, l: f64, p: f64, q: f64) -> Self {
        self.holder_constants = Some((l, p, q));
        self
    }

    pub fn combine(&self, values: &[f64]) -> f64 {
        self.method.combine(values)
    }
}

/// Outcome of a Monte Carlo Hölder-continuity check.
#[derive(Clone, Copy, Debug)]
pub struct HolderReport {
    /// Largest observed `|C(s) − C(s′)| / (Σⱼ |sⱼ − s′ⱼ|^p)^q`.
    pub max_ratio: f64,
    /// Constant `L` the ratios are compared against.
    pub bound: f64,
    /// Pairs that contributed a ratio.
    pub pairs_tested: u64,
    /// Degenerate pairs (`s = s′`) that were skipped.
    pub pairs_skipped: u64,
}

impl HolderReport {
    /// Whether every sampled pair satisfied the bound.
    pub fn pass(&self) -> bool {
        self.max_ratio <= self.bound
    }
}

/// Estimate the Hölder ratio of a combination rule over sampled input
/// pairs.
///
/// Draws `trials` pairs `(s, s′)` from `sampler`, evaluates the ratio
/// `|C(s) − C(s′)| / (Σⱼ |sⱼ − s′ⱼ|^p)^q` for each, and reports the
/// maximum together with the bound `l`.  Pairs with `s = s′` have a zero
/// denominator and are skipped.  For rules such as the rescaled minimum
/// the certificate is relative to the sampling law: an adversarial sampler
/// that perturbs only the minimizing coordinate drives the ratio to `m`
/// even though typical independent draws stay far below one.
pub fn holder_certificate<C, S>(
    combiner: C,
    l: f64,
    p: f64,
    q: f64,
    mut sampler: S,
    trials: u64,
) -> HolderReport
where
    C: Fn(&[f64]) -> f64,
    S: FnMut() -> (Vec<f64>, Vec<f64>),
{
    assert!(trials >= 1, "holder_certificate needs at least one trial");
    let mut max_ratio = 0.0f64;
    let mut tested = 0u64;
    let mut skipped = 0u64;
    for _ in 0..trials {
        let (s, s2) = sampler();
        assert_eq!(s.len(), s2.len(), "sampler returned mismatched lengths");
        let denom_sum: f64 = s
            .iter()
            .zip(&s2)
            .map(|(a, b)| (a - b).abs().powf(p))
            .sum();
        if denom_sum == 0.0 {
            skipped += 1;
            continue;
        }
        let ratio = (combiner(&s) - combiner(&s2)).abs() / denom_sum.powf(q);
        max_ratio = max_ratio.max(ratio);
        tested += 1;
    }
    HolderReport {
        max_ratio,
        bound: l,
        pairs_tested: tested,
        pairs_skipped: skipped,
    }
}
