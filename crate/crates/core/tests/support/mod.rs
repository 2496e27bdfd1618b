//! Reference implementations used to check the library's numerics and
//! Monte Carlo estimates from the outside.
//!
//! Everything here is deliberately built from different algorithms than
//! the library: the normal CDF comes from the erf Taylor series and the
//! Abramowitz–Stegun continued fraction instead of the incomplete gamma
//! backbone, chi-square CDFs come from the closed-form Poisson/erf
//! recurrences instead of series/fraction routing, quantiles come from
//! bisection, and gamma values at integer and half-integer arguments are
//! built by direct products.  Agreement between the two stacks is then
//! meaningful evidence rather than a tautology.

#![allow(dead_code)]

use std::f64::consts::{FRAC_2_SQRT_PI, PI};

/// erf via Taylor series for small arguments, continued fraction beyond.
pub fn erf_oracle(x: f64) -> f64 {
    if x < 0.0 {
        return -erf_oracle(-x);
    }
    if x <= 3.0 {
        erf_taylor(x)
    } else {
        1.0 - erfc_cf(x)
    }
}

pub fn erfc_oracle(x: f64) -> f64 {
    if x > 3.0 {
        erfc_cf(x)
    } else {
        1.0 - erf_oracle(x)
    }
}

/// erf(x) = (2/√π) Σ_{n≥0} (−1)ⁿ x^{2n+1} / (n! (2n+1)), |x| ≤ 3.
fn erf_taylor(x: f64) -> f64 {
    let mut power = x; // (−1)ⁿ x^{2n+1}/n!
    let mut sum = x;
    let mut n = 1.0;
    loop {
        power *= -x * x / n;
        let term = power / (2.0 * n + 1.0);
        sum += term;
        if term.abs() <= 1e-18 * sum.abs() {
            break;
        }
        n += 1.0;
    }
    sum * FRAC_2_SQRT_PI
}

/// √π e^{x²} erfc(x) = 1/(x + (1/2)/(x + 1/(x + (3/2)/(x + …)))), x > 0,
/// evaluated by modified Lentz.
fn erfc_cf(x: f64) -> f64 {
    const TINY: f64 = 1e-300;
    let mut f = x.max(TINY);
    let mut c = f;
    let mut d = 0.0;
    let mut a = 0.5;
    for _ in 0..500 {
        d = x + a * d;
        if d.abs() < TINY {
            d = TINY;
        }
        c = x + a / c;
        if c.abs() < TINY {
            c = TINY;
        }
        d = 1.0 / d;
        let delta = c * d;
        f *= delta;
        if (delta - 1.0).abs() < 1e-16 {
            break;
        }
        a += 0.5;
    }
    (-x * x).exp() / (PI.sqrt() * f)
}

pub fn normal_cdf_oracle(x: f64) -> f64 {
    0.5 * erfc_oracle(-x / std::f64::consts::SQRT_2)
}

pub fn normal_pdf_oracle(x: f64) -> f64 {
    (-0.5 * x * x).exp() / (2.0 * PI).sqrt()
}

/// Φ⁻¹ by bisection on the oracle CDF.
pub fn normal_quantile_oracle(p: f64) -> f64 {
    assert!(p > 0.0 && p < 1.0);
    let (mut lo, mut hi) = (-45.0f64, 45.0f64);
    while hi - lo > 1e-13 {
        let mid = 0.5 * (lo + hi);
        if normal_cdf_oracle(mid) < p {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    0.5 * (lo + hi)
}

/// Γ(k/2) by direct products from Γ(1) = 1 and Γ(1/2) = √π.
/// Overflows beyond k ≈ 340; the test grids stay far below that.
pub fn gamma_half_oracle(k: u32) -> f64 {
    assert!(k >= 1);
    let mut value = if k % 2 == 0 { 1.0 } else { PI.sqrt() };
    let mut arg = if k % 2 == 0 { 1.0 } else { 0.5 };
    while arg < k as f64 / 2.0 {
        value *= arg;
        arg += 1.0;
    }
    value
}

fn ln_factorial(n: u64) -> f64 {
    let mut sum = 0.0;
    for i in 2..=n {
        sum += (i as f64).ln();
    }
    sum
}

/// χ²_k CDF via the closed forms: for even k the Poisson partial sum
/// 1 − Σ_{j<k/2} e^{−z} z^j/j!; for odd k the erf seed P(1/2, z) = erf(√z)
/// minus the half-integer series Σ_j z^{j+1/2} e^{−z}/Γ(j+3/2), with
/// z = x/2.  Both sums are anchored at their largest term in log space
/// and swept outward, so they survive the e^{−z} underflow that a
/// term-zero start hits once z ≳ 745 (large degrees of freedom).
pub fn chisq_cdf_oracle(x: f64, k: u32) -> f64 {
    assert!(k >= 1 && x.is_finite());
    if x <= 0.0 {
        return 0.0;
    }
    let z = x / 2.0;
    if k % 2 == 0 {
        let half = u64::from(k / 2);
        let j0 = (z.floor() as u64).min(half - 1);
        let peak = (-z + j0 as f64 * z.ln() - ln_factorial(j0)).exp();
        let mut cum = 0.0;
        let mut term = peak;
        let mut j = j0;
        loop {
            cum += term;
            if j == 0 || term < 1e-20 * peak {
                break;
            }
            term *= j as f64 / z;
            j -= 1;
        }
        term = peak;
        for j in j0 + 1..half {
            term *= z / j as f64;
            cum += term;
            if term < 1e-20 * peak {
                break;
            }
        }
        (1.0 - cum).clamp(0.0, 1.0)
    } else {
        let seed = erf_oracle(z.sqrt());
        let steps = u64::from((k - 1) / 2);
        if steps == 0 {
            return seed.clamp(0.0, 1.0);
        }
        let j_max = steps - 1;
        let j0 = (z.floor() as u64).min(j_max);
        let mut ln_gamma = 0.5 * PI.ln() - 2f64.ln();
        for i in 1..=j0 {
            ln_gamma += (i as f64 + 0.5).ln();
        }
        let peak = ((j0 as f64 + 0.5) * z.ln() - z - ln_gamma).exp();
        let mut sum = 0.0;
        let mut term = peak;
        let mut j = j0;
        loop {
            sum += term;
            if j == 0 || term < 1e-20 * peak {
                break;
            }
            term *= (j as f64 + 0.5) / z;
            j -= 1;
        }
        term = peak;
        for j in j0 + 1..=j_max {
            term *= z / (j as f64 + 0.5);
            sum += term;
            if term < 1e-20 * peak {
                break;
            }
        }
        (seed - sum).clamp(0.0, 1.0)
    }
}

pub fn chisq_pdf_oracle(x: f64, k: u32) -> f64 {
    assert!(k >= 1);
    if x <= 0.0 {
        return 0.0;
    }
    let a = k as f64 / 2.0;
    x.powf(a - 1.0) * (-x / 2.0).exp() / (2f64.powf(a) * gamma_half_oracle(k))
}

/// χ²_k quantile by bisection on the oracle CDF.
pub fn chisq_quantile_oracle(p: f64, k: u32) -> f64 {
    assert!(p > 0.0 && p < 1.0);
    let kf = k as f64;
    let (mut lo, mut hi) = (0.0f64, kf + 60.0 * (2.0 * kf).sqrt() + 200.0);
    for _ in 0..80 {
        let mid = 0.5 * (lo + hi);
        if chisq_cdf_oracle(mid, k) < p {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    0.5 * (lo + hi)
}

/// Noncentral χ²_k(λ) CDF as the Poisson(λ/2) mixture of central CDFs.
pub fn noncentral_chisq_cdf_oracle(x: f64, k: u32, lambda: f64) -> f64 {
    assert!(lambda >= 0.0);
    if lambda == 0.0 {
        return chisq_cdf_oracle(x, k);
    }
    if x <= 0.0 {
        return 0.0;
    }
    let h = lambda / 2.0;
    let spread = (40.0 * h.sqrt() + 40.0) as i64;
    let lo = ((h as i64) - spread).max(0) as u64;
    let hi = (h as i64 + spread) as u64;
    let mut ln_pmf = -h + lo as f64 * h.ln();
    for t in 1..=lo {
        ln_pmf -= (t as f64).ln();
    }
    let mut pmf = ln_pmf.exp();
    let mut total = 0.0;
    for j in lo..=hi {
        if pmf > 0.0 {
            total += pmf * chisq_cdf_oracle(x, k + 2 * j as u32);
        }
        pmf *= h / (j + 1) as f64;
    }
    total.clamp(0.0, 1.0)
}

/// Power of the level-α upper-tail χ²_k test under noncentrality λ.
pub fn noncentral_chisq_power_oracle(k: u32, lambda: f64, alpha: f64) -> f64 {
    let kappa = chisq_quantile_oracle(1.0 - alpha, k);
    1.0 - noncentral_chisq_cdf_oracle(kappa, k, lambda)
}

/// Power of the two-sided level-α Gaussian test whose shift is s·V₁,
/// with V₁ the first coordinate of a uniform point on the unit sphere in
/// d dimensions: E[Φ(s|V₁| − z) + Φ(−s|V₁| − z)], z = Φ⁻¹(1 − α/2).
///
/// V₁ has density c_d (1−v²)^{(d−3)/2}; substituting v = sin θ removes
/// the d = 2 endpoint singularity, leaving a smooth integrand for
/// Simpson's rule on [0, π/2].
pub fn coordinated_power_oracle(d: u32, s: f64, alpha: f64) -> f64 {
    assert!(d >= 2);
    let z = normal_quantile_oracle(1.0 - alpha / 2.0);
    let c_d = gamma_half_oracle(d) / (PI.sqrt() * gamma_half_oracle(d - 1));
    let integrand = |theta: f64| {
        let v = theta.sin();
        let weight = 2.0 * c_d * theta.cos().powi(d as i32 - 2);
        weight * (normal_cdf_oracle(s * v - z) + normal_cdf_oracle(-s * v - z))
    };
    simpson(integrand, 0.0, PI / 2.0, 2_000)
}

/// Composite Simpson's rule with `panels` panels (made even internally).
pub fn simpson(f: impl Fn(f64) -> f64, a: f64, b: f64, panels: usize) -> f64 {
    let n = if panels % 2 == 0 { panels } else { panels + 1 };
    let h = (b - a) / n as f64;
    let mut sum = f(a) + f(b);
    for i in 1..n {
        let weight = if i % 2 == 1 { 4.0 } else { 2.0 };
        sum += weight * f(a + i as f64 * h);
    }
    sum * h / 3.0
}

/// Two-sided Kolmogorov–Smirnov distance between a sample and a CDF.
pub fn ks_statistic(sample: &mut [f64], cdf: impl Fn(f64) -> f64) -> f64 {
    assert!(!sample.is_empty());
    sample.sort_by(f64::total_cmp);
    let n = sample.len() as f64;
    let mut dist = 0.0f64;
    for (i, &x) in sample.iter().enumerate() {
        let f = cdf(x);
        dist = dist.max((f - i as f64 / n).abs());
        dist = dist.max((f - (i as f64 + 1.0) / n).abs());
    }
    dist
}

/// Asymptotic two-sided KS critical value at the given level:
/// √(−ln(level/2)/2) / √n.
pub fn ks_threshold(n: usize, level: f64) -> f64 {
    (-(level / 2.0).ln() / 2.0).sqrt() / (n as f64).sqrt()
}
