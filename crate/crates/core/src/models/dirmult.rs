//! Dirichlet-multinomial rows with unknown concentration vector.
//!
//! Model: `x_i ~ Multinomial(N_i, p_i)`, `p_i ~ Dirichlet(alpha_0..alpha_L)`,
//! `alpha_l ~ Gamma(a, b)` independently. No change of variables removes the
//! `alpha_l^(-n alpha_l)` factor here, so the sweep uses the gamma power
//! latent route: each coordinate's shape conditional becomes a PTN whose
//! dropped factor is the squared Stirling term, and the proposal can be drawn
//! three ways:
//!
//! - `PtnDirect`: sample the PTN itself by rejection;
//! - `Poisson`: Poisson/GIG tilt latents, shape = sqrt(gamma draw);
//! - `Normal`: normal/GIG tilt latents, shape = sqrt(GIG draw).
//!
//! All three target the same posterior; they differ only in cost per sweep.

use super::{mh_shape_update, MhCounter};
use crate::augment::{
    propose_shape_given_tilt, sample_power_latent, sample_tilt_normal, sample_tilt_poisson,
    BetaLatents, ShapeConditionalParams,
};
use crate::{dist, Error, Result, RngStream};

/// How the PTN-shaped conditional of each `alpha_l` is proposed from.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PtnVariant {
    PtnDirect,
    Poisson,
    Normal,
}

#[derive(Debug, Clone, Copy)]
pub struct DirMultConfig {
    /// alpha_l ~ Gamma(a, b).
    pub a: f64,
    pub b: f64,
    pub variant: PtnVariant,
}

#[derive(Debug, Clone)]
pub struct DirMultModel {
    /// Counts, row-major `n x k` with `k = L + 1` categories.
    counts: Vec<u64>,
    n: usize,
    k: usize,
    cfg: DirMultConfig,
}

#[derive(Debug, Clone)]
pub struct DirMultState {
    /// Row-stochastic `n x k` matrix.
    pub p: Vec<f64>,
    pub alpha: Vec<f64>,
    pub z: Vec<f64>,
    pub w: Vec<f64>,
    /// One beta-latent block per category.
    pub rho: Vec<BetaLatents>,
    pub counters: Vec<MhCounter>,
    pub rho_clamped: u64,
}

impl DirMultModel {
    pub fn new(counts: &[u64], n: usize, k: usize, cfg: DirMultConfig) -> Result<Self> {
        if !(cfg.a > 0.0) || !cfg.a.is_finite() {
            return Err(Error::domain("dirmult", "a", cfg.a));
        }
        if !(cfg.b > 0.0) || !cfg.b.is_finite() {
            return Err(Error::domain("dirmult", "b", cfg.b));
        }
        if n < 2 {
            return Err(Error::TooFewObservations {
                what: "dirmult",
                needed: 2,
                got: n,
            });
        }
        if k < 2 || counts.len() != n * k {
            return Err(Error::domain("dirmult", "counts_len", counts.len() as f64));
        }
        Ok(DirMultModel {
            counts: counts.to_vec(),
            n,
            k,
            cfg,
        })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn categories(&self) -> usize {
        self.k
    }

    pub fn init_state(&self, rng: &mut RngStream) -> Result<DirMultState> {
        let alpha = vec![1.0; self.k];
        // p rows at the smoothed empirical frequencies.
        let mut p = vec![0.0; self.n * self.k];
        for i in 0..self.n {
            let total: u64 = self.counts[i * self.k..(i + 1) * self.k].iter().sum();
            for l in 0..self.k {
                p[i * self.k + l] =
                    (self.counts[i * self.k + l] as f64 + 1.0) / (total as f64 + self.k as f64);
            }
        }
        let mut state = DirMultState {
            p,
            alpha,
            z: vec![1.0; self.n],
            w: vec![1.0; self.k],
            rho: vec![BetaLatents::default(); self.k],
            counters: vec![MhCounter::default(); self.k],
            rho_clamped: 0,
        };
        self.refresh_latents(&mut state, rng)?;
        Ok(state)
    }

    fn refresh_latents(&self, state: &mut DirMultState, rng: &mut RngStream) -> Result<()> {
        let alpha_sum: f64 = state.alpha.iter().sum();
        for z in state.z.iter_mut() {
            // z feeds ln z; keep underflowed draws representable.
            *z = dist::gamma(alpha_sum, 1.0, rng)?.max(f64::MIN_POSITIVE);
        }
        for l in 0..self.k {
            state.w[l] = sample_power_latent(state.alpha[l], self.n as u32, rng)?;
            state.rho[l] = BetaLatents::sample(state.alpha[l], self.n as u32, rng)?;
            state.rho_clamped += state.rho[l].clamped;
        }
        Ok(())
    }

    /// One full sweep: p rows, z, w, rho, then each coordinate's shape update
    /// with the squared Stirling acceptance ratio.
    pub fn step(&self, state: &mut DirMultState, rng: &mut RngStream) -> Result<()> {
        let n = self.n as f64;
        let k = self.k;

        let mut dir_params = vec![0.0; k];
        for i in 0..self.n {
            for l in 0..k {
                dir_params[l] = self.counts[i * k + l] as f64 + state.alpha[l];
            }
            let row = dist::dirichlet(&dir_params, rng)?;
            state.p[i * k..(i + 1) * k].copy_from_slice(&row);
        }

        self.refresh_latents(state, rng)?;

        let log_z_sum: f64 = state.z.iter().map(|z| z.ln()).sum();
        for l in 0..k {
            let log_p_sum: f64 = (0..self.n).map(|i| state.p[i * k + l].ln()).sum();
            // The alpha-linear data terms fold into the effective prior rate.
            let ptn = ShapeConditionalParams::with_prior(
                self.cfg.a,
                self.cfg.b - log_p_sum - log_z_sum,
                self.n as u32,
                state.rho[l].log_inv_sum(),
            )
            .to_ptn(self.n as u32, state.w[l])?;
            debug_assert!((ptn.c - (n + self.cfg.a)).abs() < 1e-9);
            let proposal = match self.cfg.variant {
                PtnVariant::PtnDirect => dist::sample_ptn(&ptn, rng)?,
                PtnVariant::Poisson => {
                    let latents = sample_tilt_poisson(state.alpha[l], &ptn, rng)?;
                    propose_shape_given_tilt(&latents, &ptn, rng)?
                }
                PtnVariant::Normal => {
                    let latents = sample_tilt_normal(state.alpha[l], &ptn, rng)?;
                    propose_shape_given_tilt(&latents, &ptn, rng)?
                }
            };
            state.alpha[l] = mh_shape_update(
                n,
                state.alpha[l],
                proposal,
                2,
                &mut state.counters[l],
                rng,
            )?;
        }
        Ok(())
    }

    /// The `b` coefficient of one coordinate's PTN conditional as a pure
    /// function of the sweep inputs; the algebra is testable in isolation.
    pub fn ptn_tilt_coefficient(
        &self,
        p_column_log_sum: f64,
        log_z_sum: f64,
        w_l: f64,
        rho_log_inv_sum: f64,
    ) -> f64 {
        let n = self.n as f64;
        p_column_log_sum + log_z_sum + 2.0 * n + n * w_l.ln() - rho_log_inv_sum - self.cfg.b
    }
}
