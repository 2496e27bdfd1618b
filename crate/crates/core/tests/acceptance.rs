//! Release-gate checks, one test per criterion.  Each test prints a
//! single `criterion N (...): PASS` line with the measured numbers once
//! its assertions hold; tolerances are pinned Monte Carlo bands or the
//! deterministic bounds quoted in the module docs.
//!
//! Rate constants marked "frozen" were chosen by the `pilot` target
//! (run with `--ignored --nocapture`) against the closed-form oracles
//! in `support`, then fixed here.

mod support;

use std::collections::BTreeMap;

use metameans::combine;
use metameans::harness::{self, binomial_band, joint_band, GridPoint, RateFormula, RocCurve};
use metameans::localstat;
use metameans::metatest::{self, TestSpec};
use metameans::model::{gen_trials, Scenario, Signal, SignalLaw};
use metameans::quantize;
use metameans::rng::RandomStream;
use metameans::specfun;
use support::*;

fn find_curve<'a>(curves: &'a [RocCurve], name: &str) -> &'a RocCurve {
    curves
        .iter()
        .find(|c| c.test == name)
        .unwrap_or_else(|| panic!("no curve for test `{name}`"))
}

fn tpr_at_alpha(curve: &RocCurve, alpha: f64) -> f64 {
    curve
        .points
        .iter()
        .find(|pt| (pt.alpha - alpha).abs() < 1e-9)
        .unwrap_or_else(|| panic!("no grid point at alpha={alpha} for `{}`", curve.test))
        .tpr
}

/// Every registered test, calibrated where the scenario demands it.
fn registry_tests(
    scenario: &Scenario,
    alphas: &[f64],
    calib_reps: u64,
    base: &RandomStream,
) -> Vec<metameans::metatest::MetaTest> {
    metatest::registry_names()
        .iter()
        .map(|name| {
            let spec = TestSpec::parse(name).unwrap();
            harness::prepare_test(&spec, scenario, alphas, calib_reps, base).unwrap()
        })
        .collect()
}

#[test]
fn criterion_1_level_validity() {
    let reps = 100_000u64;
    let calib_reps = 400_000u64;
    let levels = [0.01, 0.05, 0.1];
    // Balanced shape so the directional block test keeps its analytic map.
    let scenario = Scenario::rademacher(4, 30, 12, 2.0 / 120.0);
    let base = RandomStream::from_seed(101);

    // Tests whose analytic thresholds hit the level exactly: continuous
    // statistics with closed-form null laws.  The rest are conservative
    // (Markov or Bonferroni style) or carry calibrated thresholds, so
    // only the upper bound applies to them.
    let exact: &[&str] = &[
        "chisq-combined",
        "uncoordinated-directional",
        "coordinated-projection",
        "single-trial",
        "pooled",
        "pvalue:fisher",
        "pvalue:pearson",
        "pvalue:stouffer",
        "pvalue:tippett",
        "pvalue:generalized_mean(inf)",
    ];

    let tests = registry_tests(&scenario, &levels, calib_reps, &base);
    let curves =
        harness::roc_curves(&tests, &scenario, &levels, reps, &base.derive("eval")).unwrap();

    let mut worst_excess = f64::NEG_INFINITY;
    for curve in &curves {
        for pt in &curve.points {
            let band = 3.0 * (pt.alpha * (1.0 - pt.alpha) / reps as f64).sqrt();
            assert!(
                pt.fpr <= pt.alpha + band,
                "`{}` at alpha={}: fpr {} above {}",
                curve.test,
                pt.alpha,
                pt.fpr,
                pt.alpha + band
            );
            if exact.contains(&curve.test.as_str()) {
                assert!(
                    pt.fpr >= pt.alpha - band,
                    "`{}` at alpha={}: fpr {} below {}",
                    curve.test,
                    pt.alpha,
                    pt.fpr,
                    pt.alpha - band
                );
            }
            worst_excess = worst_excess.max(pt.fpr - pt.alpha);
        }
    }
    println!(
        "criterion 1 (level validity): PASS — {} tests at alpha in {:?}, worst fpr excess \
         {worst_excess:.5} within the 3-sigma bands ({reps} reps)",
        curves.len(),
        levels,
    );
}

#[test]
fn criterion_2_desk_scale_orderings() {
    let (m, n) = (20usize, 30u64);
    let reps = 2_000u64;
    let calib_reps = 100_000u64;
    let alphas = harness::default_alpha_grid();
    let base = RandomStream::from_seed(202);

    let mut curves_by_d: BTreeMap<usize, Vec<RocCurve>> = BTreeMap::new();
    for d in [2usize, 5, 10, 20] {
        let rho2 = (d as f64).sqrt() / (4.0 * n as f64);
        let scenario = Scenario::rademacher(d, n, m, rho2);
        let tests = registry_tests(&scenario, &alphas, calib_reps, &base.derive(&format!("prep:d{d}")));
        let curves = harness::roc_curves(
            &tests,
            &scenario,
            &alphas,
            reps,
            &base.derive(&format!("eval:d{d}")),
        )
        .unwrap();
        curves_by_d.insert(d, curves);
    }

    let tpr01 =
        |d: usize, name: &str| find_curve(&curves_by_d[&d], name).tpr_at_fpr(0.1);
    let band = |p: f64| binomial_band(p, reps);

    // (a) At d = 20 the norm combination dominates the directional test.
    let chisq20 = tpr01(20, "chisq-combined");
    let unc20 = tpr01(20, "uncoordinated-directional");
    let gap_a = chisq20 - unc20;
    assert!(
        gap_a > 2.0 * joint_band(band(chisq20), band(unc20)),
        "d=20 tpr@fpr0.1: chisq {chisq20:.4} vs directional {unc20:.4}"
    );

    // (b) At d = 2 the shared-rotation projection keeps up with the block
    // test at the 0.05 level, and both clear the norm combination.
    let coord2 = tpr_at_alpha(find_curve(&curves_by_d[&2], "coordinated-projection"), 0.05);
    let unc2 = tpr_at_alpha(
        find_curve(&curves_by_d[&2], "uncoordinated-directional"),
        0.05,
    );
    let chisq2 = tpr_at_alpha(find_curve(&curves_by_d[&2], "chisq-combined"), 0.05);
    assert!(
        coord2 >= unc2 - joint_band(band(coord2), band(unc2)),
        "d=2 alpha=0.05: coordinated {coord2:.4} vs directional {unc2:.4}"
    );
    assert!(
        coord2 - chisq2 > 2.0 * joint_band(band(coord2), band(chisq2)),
        "d=2 alpha=0.05: coordinated {coord2:.4} vs chisq {chisq2:.4}"
    );
    assert!(
        unc2 - chisq2 > 2.0 * joint_band(band(unc2), band(chisq2)),
        "d=2 alpha=0.05: directional {unc2:.4} vs chisq {chisq2:.4}"
    );

    // (c) Pooling an order of magnitude more data per test beats every
    // meta test, and every meta test beats a single trial, with 2-band
    // slack for the Monte Carlo noise.
    for (&d, curves) in &curves_by_d {
        let pooled = tpr01(d, "pooled");
        let single = tpr01(d, "single-trial");
        for curve in curves {
            if curve.test == "pooled" || curve.test == "single-trial" {
                continue;
            }
            let t = curve.tpr_at_fpr(0.1);
            let slack_hi = 2.0 * joint_band(band(pooled), band(t));
            let slack_lo = 2.0 * joint_band(band(single), band(t));
            assert!(
                pooled >= t - slack_hi,
                "d={d}: pooled {pooled:.4} under `{}` {t:.4}",
                curve.test
            );
            assert!(
                t >= single - slack_lo,
                "d={d}: `{}` {t:.4} under single-trial {single:.4}",
                curve.test
            );
        }
    }

    println!(
        "criterion 2 (desk-scale orderings): PASS — d=20 chisq-directional gap {gap_a:.3}; \
         d=2 at alpha=0.05 coordinated {coord2:.3} / directional {unc2:.3} / chisq {chisq2:.3}; \
         pooled and single-trial bracket all tests on d in {{2,5,10,20}} ({reps} reps)"
    );
}

#[test]
fn criterion_3_directional_gap_grows_with_m() {
    let (d, n) = (5usize, 30u64);
    let reps = 200_000u64;
    let alphas = harness::default_alpha_grid();
    let base = RandomStream::from_seed(303);

    let mut gap = BTreeMap::new();
    for m in [30usize, 200] {
        // Signal pinned to three quarters of the directional detection
        // scale: the block test's noncentrality (m/d)·n·rho^2 = 9/16 stays
        // fixed while the norm test's per-coordinate share shrinks.
        let rho2 = 9.0 * d as f64 / (16.0 * n as f64 * m as f64);
        let scenario = Scenario::rademacher(d, n, m, rho2);
        let tests = [
            harness::prepare_test(&TestSpec::UncoordinatedDirectional, &scenario, &alphas, 0, &base)
                .unwrap(),
            harness::prepare_test(&TestSpec::ChisqCombined, &scenario, &alphas, 0, &base).unwrap(),
        ];
        let curves = harness::roc_curves(
            &tests,
            &scenario,
            &alphas,
            reps,
            &base.derive(&format!("eval:m{m}")),
        )
        .unwrap();
        let dir = find_curve(&curves, "uncoordinated-directional").tpr_at_fpr(0.1);
        let chisq = find_curve(&curves, "chisq-combined").tpr_at_fpr(0.1);
        let band = joint_band(binomial_band(dir, reps), binomial_band(chisq, reps));
        gap.insert(m, (dir - chisq, band));
    }

    let (gap30, band30) = gap[&30];
    let (gap200, band200) = gap[&200];
    assert!(
        gap200 - gap30 > 2.0 * joint_band(band30, band200),
        "gap at m=200 {gap200:.4} vs m=30 {gap30:.4}"
    );
    println!(
        "criterion 3 (m-growth of the directional edge): PASS — tpr gap at fpr 0.1 grows \
         {gap30:.4} -> {gap200:.4} from m=30 to m=200 ({reps} reps)"
    );
}

#[test]
fn criterion_4_separation_rates_attained() {
    let alpha = 0.05;
    let reps = 20_000u64;
    let base = RandomStream::from_seed(404);
    let grid = [
        GridPoint { d: 8, m: 16, n: 30 },
        GridPoint { d: 8, m: 64, n: 30 },
        GridPoint { d: 32, m: 16, n: 30 },
        GridPoint { d: 32, m: 64, n: 30 },
    ];

    // (chisq-combined, sqrt(d)/(sqrt(m) n), C = 16): the noncentral
    // oracle puts every grid cell's power above 0.999 at C = 16 and at
    // 0.054 for the smallness scale 0.05.
    // (coordinated-projection, d/(mn), C = 128): frozen from the sphere
    // quadrature pilot — min grid power 0.866, smallness 0.056.
    let checks = [
        (TestSpec::ChisqCombined, RateFormula::SqrtM, 16.0),
        (TestSpec::CoordinatedProjection, RateFormula::Coordinated, 128.0),
    ];
    let mut summaries = Vec::new();
    for (spec, rate, c_strong) in checks {
        let sweep = harness::rate_sweep(
            std::slice::from_ref(&spec),
            &grid,
            &[0.05, c_strong],
            rate,
            alpha,
            reps,
            20_000,
            &base.derive(spec.name().as_str()),
        )
        .unwrap();
        let mut min_strong = f64::INFINITY;
        let mut max_small = f64::NEG_INFINITY;
        for cell in &sweep.cells {
            if cell.c == c_strong {
                assert!(
                    cell.power >= 0.8,
                    "`{}` d={} m={} at C={}: power {:.4}",
                    cell.test,
                    cell.d,
                    cell.m,
                    cell.c,
                    cell.power
                );
                min_strong = min_strong.min(cell.power);
            } else {
                assert!(
                    cell.power <= alpha + 0.1,
                    "`{}` d={} m={} at C={}: power {:.4} not small",
                    cell.test,
                    cell.d,
                    cell.m,
                    cell.c,
                    cell.power
                );
                max_small = max_small.max(cell.power);
            }
        }
        summaries.push(format!(
            "{} C={c_strong}: min power {min_strong:.3}, smallness max {max_small:.3}",
            spec.name()
        ));
    }
    println!(
        "criterion 4 (rate attainability): PASS — {} ({reps} reps per cell)",
        summaries.join("; ")
    );
}

#[test]
fn criterion_5_rotation_invariance_and_direction_sensitivity() {
    let (d, n, m) = (5usize, 30u64, 30usize);
    let rho2: f64 = 0.075;
    let rho = rho2.sqrt();
    let reps = 100_000u64;
    let alpha = 0.05;
    let base = RandomStream::from_seed(505);

    let fixed = |f: Vec<f64>| Scenario {
        d,
        n,
        m,
        rho,
        signal_law: SignalLaw::Fixed(f),
    };
    let mut axis = vec![0.0; d];
    axis[0] = rho;
    let rotated = {
        let q = base.derive("rotation").haar_orthogonal(d);
        let image = q.apply(&axis);
        let norm = image.iter().map(|x| x * x).sum::<f64>().sqrt();
        image.iter().map(|x| x * rho / norm).collect::<Vec<_>>()
    };
    let spread = vec![rho / (d as f64).sqrt(); d];

    // Norm combination: the same signal strength along the axis and under
    // one Haar rotation must reject equally often.
    let chisq =
        harness::prepare_test(&TestSpec::ChisqCombined, &fixed(axis.clone()), &[alpha], 0, &base)
            .unwrap();
    let p_axis = harness::estimate_risk(&chisq, &fixed(axis.clone()), alpha, reps, &base.derive("chisq:axis"))
        .unwrap();
    let p_rot = harness::estimate_risk(&chisq, &fixed(rotated), alpha, reps, &base.derive("chisq:rotated"))
        .unwrap();
    let power = |r: &harness::RiskEstimate| 1.0 - r.type2.rate;
    let diff_norm = (power(&p_axis) - power(&p_rot)).abs();
    let band_norm = joint_band(p_axis.type2.band, p_rot.type2.band);
    assert!(
        diff_norm <= 2.0 * band_norm,
        "chisq power moved under rotation: {:.4} vs {:.4}",
        power(&p_axis),
        power(&p_rot)
    );

    // The sign-based directional test is not rotation invariant: spreading
    // the same norm across all coordinates beats concentrating it.
    let edg = harness::prepare_test(
        &TestSpec::EdgingtonDirectional,
        &fixed(axis.clone()),
        &[alpha],
        100_000,
        &base,
    )
    .unwrap();
    let e_axis = harness::estimate_risk(&edg, &fixed(axis), alpha, reps, &base.derive("edg:axis"))
        .unwrap();
    let e_spread = harness::estimate_risk(&edg, &fixed(spread), alpha, reps, &base.derive("edg:spread"))
        .unwrap();
    let diff_dir = power(&e_spread) - power(&e_axis);
    let band_dir = joint_band(e_axis.type2.band, e_spread.type2.band);
    assert!(
        diff_dir > 2.0 * band_dir,
        "directional power did not separate: axis {:.4}, spread {:.4}",
        power(&e_axis),
        power(&e_spread)
    );

    println!(
        "criterion 5 (rotation behaviour): PASS — chisq power axis/rotated differ by \
         {diff_norm:.4} (≤ {:.4}); directional power spread-vs-axis gap {diff_dir:.4} \
         (> {:.4}) at {reps} reps",
        2.0 * band_norm,
        2.0 * band_dir
    );
}

#[test]
fn criterion_6_combiner_null_laws() {
    let reps = 100_000usize;
    let level = 1e-3;
    let scenario = Scenario::null(3, 30, 8);
    let m = scenario.m;
    let dm = (scenario.d * m) as u32;
    let base = RandomStream::from_seed(606);
    let zero = Signal {
        f: vec![0.0; scenario.d],
    };

    let mut fisher = Vec::with_capacity(reps);
    let mut stouffer = Vec::with_capacity(reps);
    let mut tippett_u = Vec::with_capacity(reps);
    let mut sums = Vec::with_capacity(reps);
    for rep in 0..reps as u64 {
        let mut stream = base.derive(&format!("rep:{rep}")).derive("data-null");
        let trials = gen_trials(&zero, &scenario, &mut stream, base.seed(), rep);
        let stats = localstat::chisq_norm_stats(&trials);
        let pvals = localstat::chisq_pvalues(&stats, scenario.d as u32)
            .unwrap()
            .values;
        fisher.push(combine::fisher(&pvals));
        stouffer.push(combine::stouffer(&pvals));
        let min_p = pvals.iter().cloned().fold(f64::INFINITY, f64::min);
        tippett_u.push(specfun::tippett_cdf(min_p, m as u32).unwrap());
        sums.push(combine::sum(&stats.values));
    }

    let threshold = ks_threshold(reps, level);
    let cases: [(&str, &mut Vec<f64>, Box<dyn Fn(f64) -> f64>); 4] = [
        (
            "fisher vs chisq(2m)",
            &mut fisher,
            Box::new(move |x| chisq_cdf_oracle(x, 2 * m as u32)),
        ),
        (
            "stouffer vs standard normal",
            &mut stouffer,
            Box::new(normal_cdf_oracle),
        ),
        (
            "tippett transform vs uniform",
            &mut tippett_u,
            Box::new(|x: f64| x.clamp(0.0, 1.0)),
        ),
        (
            "trial sum vs chisq(dm)",
            &mut sums,
            Box::new(move |x| chisq_cdf_oracle(x, dm)),
        ),
    ];
    let mut worst = f64::NEG_INFINITY;
    for (label, sample, cdf) in cases {
        let d_stat = ks_statistic(sample, cdf);
        assert!(
            d_stat <= threshold,
            "{label}: KS statistic {d_stat:.5} above {threshold:.5}"
        );
        worst = worst.max(d_stat);
    }
    println!(
        "criterion 6 (combiner null laws): PASS — four KS checks at level {level}, worst \
         statistic {worst:.5} vs threshold {threshold:.5} ({reps} reps)"
    );
}

#[test]
fn criterion_7_holder_certificates() {
    let m = 50usize;
    let pairs = 100_000u64;
    let base = RandomStream::from_seed(707);
    let mf = m as f64;

    let pair_from = |label: &str, draw: fn(&mut RandomStream) -> f64| {
        let mut stream = base.derive(label);
        move || -> (Vec<f64>, Vec<f64>) {
            let a = (0..m).map(|_| draw(&mut stream)).collect();
            let b = (0..m).map(|_| draw(&mut stream)).collect();
            (a, b)
        }
    };
    let uniform = |s: &mut RandomStream| s.next_f64();
    let exponential = |s: &mut RandomStream| -(1.0 - s.next_f64()).ln();
    let lognormal = |s: &mut RandomStream| (s.next_gaussian() - 0.5).exp();
    let shifted_normal = |s: &mut RandomStream| s.next_gaussian() - 0.5;

    // Constants certified by the combination lemmas: (L, p, q) per rule,
    // on that rule's own input scale.
    let mut reports = Vec::new();
    let report = combine::holder_certificate(
        combine::edgington,
        mf.sqrt().recip(),
        1.0,
        1.0,
        pair_from("edgington", uniform),
        pairs,
    );
    reports.push(("edgington", report));
    let report = combine::holder_certificate(
        |s: &[f64]| -mf * s.iter().cloned().fold(f64::INFINITY, f64::min),
        1.0,
        1.0,
        1.0,
        pair_from("tippett-form", exponential),
        pairs,
    );
    reports.push(("tippett-form", report));
    let report = combine::holder_certificate(
        |e: &[f64]| e.iter().sum::<f64>() / mf,
        mf.recip(),
        1.0,
        1.0,
        pair_from("evalue-average", lognormal),
        pairs,
    );
    reports.push(("evalue-average", report));
    let report = combine::holder_certificate(
        combine::sum,
        1.0,
        1.0,
        1.0,
        pair_from("evalue-product-log", shifted_normal),
        pairs,
    );
    reports.push(("evalue-product-log", report));

    for (label, r) in &reports {
        assert_eq!(r.pairs_skipped, 0, "{label}: degenerate pairs");
        assert_eq!(r.pairs_tested, pairs, "{label}: pair count");
        assert!(
            r.pass(),
            "{label}: max ratio {:.4} above bound {:.4}",
            r.max_ratio,
            r.bound
        );
    }
    let shown: Vec<String> = reports
        .iter()
        .map(|(label, r)| format!("{label} {:.3}/{:.3}", r.max_ratio, r.bound))
        .collect();
    println!(
        "criterion 7 (Hölder certificates): PASS — zero violations over {pairs} pairs each; \
         max-ratio/bound: {}",
        shown.join(", ")
    );
}

#[test]
fn criterion_8_quantizer_bounds() {
    let n = 1_000_000u64;
    let mut stream = RandomStream::from_seed(808).derive("gaussian-inputs");
    let mut worst_margin = f64::INFINITY;
    for _ in 0..n {
        let x = 10.0 * stream.next_gaussian();
        let mut k = 0u32;
        while f64::from(k + 1).exp2() - 1.0 <= x.abs() {
            k += 1;
        }
        let extra = ((stream.next_f64() * 21.0).floor() as u32).min(20);
        let bits = k + 2 + extra;
        let approx = quantize::binary_expand(x, bits).unwrap();
        let bound = (-f64::from(extra)).exp2();
        let err = (x - approx.value).abs();
        assert!(
            err <= bound,
            "budget {bits} on {x}: error {err:e} above 2^-{extra}"
        );
        assert_eq!(approx.fractional_digits.len(), extra as usize);
        assert_eq!(approx.reconstruct(), approx.value);
        worst_margin = worst_margin.min(bound - err);
    }

    // Budget expectation on Exp(1) inputs: the per-input ceiling
    // max(log2 x, 0) + 1 + log2(1/eps) + 2 averages to the bound below;
    // the integral is the positive part of log2 under the Exp(1) law.
    let e_log2_plus = simpson(
        |v: f64| v.ln() / std::f64::consts::LN_2 * (-v).exp(),
        1.0,
        60.0,
        4_000,
    );
    let mut stream = RandomStream::from_seed(808).derive("exponential-inputs");
    let mut means = Vec::new();
    for eps in [0.1, 0.01] {
        let mut total_bits = 0u64;
        for _ in 0..n {
            let v = -(1.0 - stream.next_f64()).ln();
            let bits = quantize::bits_for_accuracy(v, eps);
            total_bits += u64::from(bits);
            debug_assert!(
                (v - quantize::binary_expand(v, bits).unwrap().value).abs() <= eps
            );
        }
        let mean = total_bits as f64 / n as f64;
        let bound = e_log2_plus + 1.0 + (1.0 / eps).log2() + 2.0;
        assert!(
            mean <= bound,
            "eps={eps}: mean budget {mean:.3} above bound {bound:.3}"
        );
        means.push(format!("eps={eps}: {mean:.3} ≤ {bound:.3}"));
    }
    println!(
        "criterion 8 (quantizer): PASS — error bound held on {n} Gaussian inputs \
         (closest margin {worst_margin:.2e}); Exp(1) mean budgets {}",
        means.join(", ")
    );
}

#[test]
fn criterion_9_special_function_accuracy() {
    // 10^4-point sweeps per function against the independent oracles.
    let mut worst = [0.0f64; 4];
    for i in 0..10_000 {
        let x = -8.0 + 16.0 * (i as f64 + 0.5) / 10_000.0;
        let diff = (specfun::std_normal_cdf(x).unwrap() - normal_cdf_oracle(x)).abs();
        worst[0] = worst[0].max(diff);
        assert!(diff <= 1e-9, "normal cdf at {x}: off by {diff:e}");
    }
    for i in 0..10_000 {
        let p = (i as f64 + 0.5) / 10_000.0;
        let diff =
            (specfun::std_normal_quantile(p).unwrap() - normal_quantile_oracle(p)).abs();
        worst[1] = worst[1].max(diff);
        assert!(diff <= 1e-9, "normal quantile at {p}: off by {diff:e}");
    }
    for k in [1u32, 2, 7, 40] {
        let hi = f64::from(k) + 10.0 * (2.0 * f64::from(k)).sqrt() + 20.0;
        for i in 0..2_500 {
            let x = hi * (i as f64 + 0.5) / 2_500.0;
            let diff = (specfun::chisq_cdf(x, k).unwrap() - chisq_cdf_oracle(x, k)).abs();
            worst[2] = worst[2].max(diff);
            assert!(diff <= 1e-9, "chisq cdf at ({x}, {k}): off by {diff:e}");
        }
    }
    for k in [2u32, 9, 40, 150] {
        for i in 0..2_500 {
            let p = 0.001 + 0.998 * (i as f64 + 0.5) / 2_500.0;
            let diff =
                (specfun::chisq_quantile(p, k).unwrap() - chisq_quantile_oracle(p, k)).abs();
            worst[3] = worst[3].max(diff);
            assert!(diff <= 1e-9, "chisq quantile at ({p}, {k}): off by {diff:e}");
        }
    }

    // Central-limit behaviour of the quantile at huge degrees of freedom.
    let dm = 1_000_000u32;
    let mut eta_checks = Vec::new();
    for alpha in [0.05, 0.5, 0.95] {
        let q = specfun::chisq_quantile(1.0 - alpha, dm).unwrap();
        let eta = (q - f64::from(dm)) / (2.0 * f64::from(dm)).sqrt();
        let z = normal_quantile_oracle(1.0 - alpha);
        assert!(
            (eta - z).abs() <= 0.01,
            "eta at alpha={alpha}: {eta:.5} vs {z:.5}"
        );
        eta_checks.push(format!("alpha={alpha}: |eta-z|={:.1e}", (eta - z).abs()));
    }
    println!(
        "criterion 9 (special functions): PASS — max oracle deviations {:.1e}/{:.1e}/{:.1e}/{:.1e} \
         over 10^4-point grids; quantile CLT at dm=10^6: {}",
        worst[0],
        worst[1],
        worst[2],
        worst[3],
        eta_checks.join(", ")
    );
}
