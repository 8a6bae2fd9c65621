//! Chain summaries: effective sample size, time-standardized ESS, and mean
//! squared error across replications.

use crate::{Error, Result};

/// Draws and bookkeeping of one finished chain.
#[derive(Debug, Clone)]
pub struct ChainResult {
    pub draws: DrawMatrix,
    pub param_names: Vec<String>,
    /// Acceptance rate per MH block (empty for pure Gibbs samplers).
    pub accept_rate: Vec<f64>,
    /// Wall time around the sampling loop only.
    pub wall_seconds: f64,
    pub seed_info: (u64, u64),
}

/// Row-major iterations x parameters matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct DrawMatrix {
    data: Vec<f64>,
    n_params: usize,
}

impl DrawMatrix {
    pub fn new(n_params: usize) -> Self {
        DrawMatrix {
            data: Vec::new(),
            n_params,
        }
    }

    pub fn with_capacity(n_params: usize, rows: usize) -> Self {
        DrawMatrix {
            data: Vec::with_capacity(n_params * rows),
            n_params,
        }
    }

    pub fn push_row(&mut self, row: &[f64]) {
        assert_eq!(row.len(), self.n_params);
        self.data.extend_from_slice(row);
    }

    pub fn n_rows(&self) -> usize {
        if self.n_params == 0 {
            0
        } else {
            self.data.len() / self.n_params
        }
    }

    pub fn n_params(&self) -> usize {
        self.n_params
    }

    pub fn column(&self, j: usize) -> Vec<f64> {
        assert!(j < self.n_params);
        self.data
            .iter()
            .skip(j)
            .step_by(self.n_params)
            .copied()
            .collect()
    }

    pub fn raw(&self) -> &[f64] {
        &self.data
    }
}

/// Effective sample size by Geyer's initial monotone positive sequence
/// estimator: `N / (1 + 2 sum_k rho_k)` with the autocorrelation sum
/// truncated where consecutive-lag pair sums stop being positive and forced
/// nonincreasing. The result is capped at `2 N` (antithetic chains).
pub fn ess(series: &[f64]) -> Result<f64> {
    let n = series.len();
    if n < 10 {
        return Err(Error::TooFewObservations {
            what: "ess",
            needed: 10,
            got: n,
        });
    }
    let mean = series.iter().sum::<f64>() / n as f64;
    let centered: Vec<f64> = series.iter().map(|x| x - mean).collect();
    let gamma0 = centered.iter().map(|z| z * z).sum::<f64>() / n as f64;
    if gamma0 <= 0.0 || !gamma0.is_finite() {
        return Err(Error::DegenerateSeries(format!(
            "variance {gamma0} not positive"
        )));
    }
    let autocov = |k: usize| -> f64 {
        centered[..n - k]
            .iter()
            .zip(&centered[k..])
            .map(|(a, b)| a * b)
            .sum::<f64>()
            / n as f64
    };

    // Pair sums Gamma_m = gamma_{2m} + gamma_{2m+1}, kept while positive and
    // clipped to be nonincreasing.
    let mut sigma2 = -gamma0;
    let mut prev = f64::INFINITY;
    let mut m = 0usize;
    while 2 * m + 1 < n {
        let pair = autocov(2 * m) + autocov(2 * m + 1);
        if pair <= 0.0 {
            break;
        }
        let clipped = pair.min(prev);
        sigma2 += 2.0 * clipped;
        prev = clipped;
        m += 1;
    }
    if sigma2 <= 0.0 {
        // Strong negative correlation: the estimator collapses; report the cap.
        return Ok(2.0 * n as f64);
    }
    Ok((n as f64 * gamma0 / sigma2).min(2.0 * n as f64))
}

/// Time-standardized ESS. Both arguments must be positive.
pub fn sess(ess_value: f64, wall_seconds: f64) -> f64 {
    assert!(ess_value > 0.0, "ess must be positive, got {ess_value}");
    assert!(
        wall_seconds > 0.0,
        "wall_seconds must be positive, got {wall_seconds}"
    );
    ess_value / wall_seconds
}

/// Mean squared error of per-replication estimates around a known truth,
/// optionally with the MSE ratio `comparator / this`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MseReport {
    pub mse: f64,
    pub ratio_vs: Option<f64>,
}

pub fn mse_report(estimates: &[f64], truth: f64, comparator: Option<&[f64]>) -> Result<MseReport> {
    if estimates.len() < 2 {
        return Err(Error::TooFewObservations {
            what: "mse_report",
            needed: 2,
            got: estimates.len(),
        });
    }
    let mse = estimates
        .iter()
        .map(|e| (e - truth) * (e - truth))
        .sum::<f64>()
        / estimates.len() as f64;
    let ratio_vs = match comparator {
        None => None,
        Some(other) => {
            let other_mse = mse_report(other, truth, None)?.mse;
            Some(other_mse / mse)
        }
    };
    Ok(MseReport { mse, ratio_vs })
}
