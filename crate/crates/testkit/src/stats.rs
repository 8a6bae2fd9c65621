//! Test statistics: Kolmogorov-Smirnov (one- and two-sample) and a chi-square
//! upper tail with its own incomplete-gamma implementation.

pub fn mean(xs: &[f64]) -> f64 {
    xs.iter().sum::<f64>() / xs.len() as f64
}

pub fn variance(xs: &[f64]) -> f64 {
    let m = mean(xs);
    xs.iter().map(|x| (x - m) * (x - m)).sum::<f64>() / (xs.len() - 1) as f64
}

/// One-sample KS statistic for sorted samples whose theoretical CDF values at
/// those points are `cdf` (same length, nondecreasing).
pub fn ks_statistic_sorted(n: usize, cdf: &[f64]) -> f64 {
    assert_eq!(n, cdf.len());
    let nf = n as f64;
    let mut d = 0.0f64;
    for (i, &f) in cdf.iter().enumerate() {
        let hi = ((i + 1) as f64 / nf - f).abs();
        let lo = (f - i as f64 / nf).abs();
        d = d.max(hi).max(lo);
    }
    d
}

/// Survival function of the Kolmogorov distribution,
/// `Q(x) = 2 sum_{k>=1} (-1)^{k-1} exp(-2 k^2 x^2)`.
pub fn kolmogorov_sf(x: f64) -> f64 {
    if x <= 0.0 {
        return 1.0;
    }
    let mut s = 0.0;
    let mut sign = 1.0;
    for k in 1..=100 {
        let t = (-2.0 * (k as f64) * (k as f64) * x * x).exp();
        s += sign * t;
        sign = -sign;
        if t < 1e-16 {
            break;
        }
    }
    (2.0 * s).clamp(0.0, 1.0)
}

/// Two-sample KS test. Returns `(d, p)` with the asymptotic p-value
/// (Stephens' small-sample correction applied to the effective size).
pub fn ks_two_sample(a: &[f64], b: &[f64]) -> (f64, f64) {
    let mut xa = a.to_vec();
    let mut xb = b.to_vec();
    xa.sort_by(f64::total_cmp);
    xb.sort_by(f64::total_cmp);
    let (na, nb) = (xa.len(), xb.len());
    let (mut i, mut j) = (0usize, 0usize);
    let mut d = 0.0f64;
    while i < na && j < nb {
        let x = xa[i].min(xb[j]);
        while i < na && xa[i] <= x {
            i += 1;
        }
        while j < nb && xb[j] <= x {
            j += 1;
        }
        let fa = i as f64 / na as f64;
        let fb = j as f64 / nb as f64;
        d = d.max((fa - fb).abs());
    }
    let ne = (na as f64 * nb as f64) / (na + nb) as f64;
    let lambda = (ne.sqrt() + 0.12 + 0.11 / ne.sqrt()) * d;
    (d, kolmogorov_sf(lambda))
}

/// Upper tail of the chi-square distribution with `k` degrees of freedom.
pub fn chi_square_sf(x: f64, k: f64) -> f64 {
    reg_upper_gamma(0.5 * k, 0.5 * x)
}

/// Chi-square goodness-of-fit p-value for observed counts vs expected counts.
/// Cells with expected count below `min_expected` are pooled into the last
/// kept cell.
pub fn chi_square_pvalue(observed: &[f64], expected: &[f64], min_expected: f64) -> f64 {
    assert_eq!(observed.len(), expected.len());
    let mut obs = Vec::new();
    let mut exp = Vec::new();
    let mut o_pool = 0.0;
    let mut e_pool = 0.0;
    for (&o, &e) in observed.iter().zip(expected) {
        if e < min_expected {
            o_pool += o;
            e_pool += e;
        } else {
            obs.push(o);
            exp.push(e);
        }
    }
    if e_pool > 0.0 {
        if let (Some(o), Some(e)) = (obs.last_mut(), exp.last_mut()) {
            *o += o_pool;
            *e += e_pool;
        }
    }
    assert!(obs.len() >= 2, "need at least two cells after pooling");
    let stat: f64 = obs
        .iter()
        .zip(&exp)
        .map(|(o, e)| (o - e) * (o - e) / e)
        .sum();
    chi_square_sf(stat, (obs.len() - 1) as f64)
}

// ---- standalone incomplete gamma (series + continued fraction) ----

fn ln_gamma_local(x: f64) -> f64 {
    // Stirling series with argument shift; plenty for test tolerances.
    let mut x = x;
    let mut shift = 0.0;
    while x < 12.0 {
        shift -= x.ln();
        x += 1.0;
    }
    let inv = 1.0 / x;
    let inv2 = inv * inv;
    let series = inv / 12.0 - inv * inv2 / 360.0 + inv * inv2 * inv2 / 1260.0
        - inv * inv2 * inv2 * inv2 / 1680.0;
    shift + 0.5 * (2.0 * std::f64::consts::PI).ln() + (x - 0.5) * x.ln() - x + series
}

fn reg_upper_gamma(a: f64, x: f64) -> f64 {
    if x <= 0.0 {
        return 1.0;
    }
    if x < a + 1.0 {
        1.0 - reg_lower_series(a, x)
    } else {
        upper_cf(a, x)
    }
}

fn reg_lower_series(a: f64, x: f64) -> f64 {
    let mut term = 1.0 / a;
    let mut sum = term;
    let mut ap = a;
    for _ in 0..500 {
        ap += 1.0;
        term *= x / ap;
        sum += term;
        if term.abs() < sum.abs() * 1e-16 {
            break;
        }
    }
    (sum.ln() + a * x.ln() - x - ln_gamma_local(a)).exp()
}

fn upper_cf(a: f64, x: f64) -> f64 {
    // Lentz continued fraction for Q(a, x).
    let tiny = 1e-300;
    let mut b = x + 1.0 - a;
    let mut c = 1.0 / tiny;
    let mut d = 1.0 / b;
    let mut h = d;
    for i in 1..500 {
        let an = -(i as f64) * (i as f64 - a);
        b += 2.0;
        d = an * d + b;
        if d.abs() < tiny {
            d = tiny;
        }
        c = b + an / c;
        if c.abs() < tiny {
            c = tiny;
        }
        d = 1.0 / d;
        let del = d * c;
        h *= del;
        if (del - 1.0).abs() < 1e-16 {
            break;
        }
    }
    (a * x.ln() - x - ln_gamma_local(a)).exp() * h
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn chi_square_known_values() {
        // P(chi2_1 > 3.841) ~ 0.05, P(chi2_5 > 11.07) ~ 0.05
        assert!((chi_square_sf(3.8415, 1.0) - 0.05).abs() < 1e-3);
        assert!((chi_square_sf(11.0705, 5.0) - 0.05).abs() < 1e-3);
    }

    #[test]
    fn kolmogorov_known_value() {
        // Q(1.3581) ~ 0.05
        assert!((kolmogorov_sf(1.3581) - 0.05).abs() < 5e-4);
    }

    #[test]
    fn two_sample_same_distribution() {
        // Deterministic low-discrepancy "samples" from the same uniform law.
        let a: Vec<f64> = (0..5000).map(|i| ((i as f64 + 0.5) / 5000.0).fract()).collect();
        let b: Vec<f64> = (0..4000).map(|i| ((i as f64 + 0.25) / 4000.0).fract()).collect();
        let (d, p) = ks_two_sample(&a, &b);
        assert!(d < 0.01, "d = {d}");
        assert!(p > 0.9, "p = {p}");
    }
}
