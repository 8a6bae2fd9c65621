//! Negative binomial counts with unknown shape.
//!
//! Model: `y_i ~ NB(alpha, p_i)` with known success probabilities `p_i` and
//! `alpha ~ Gamma(a, b)`. The latent `z_i ~ Gamma(alpha + y_i, 1)` absorbs
//! the `Gamma(alpha + y_i)` numerators, one shared power latent `w` and the
//! beta latents handle `1 / Gamma(alpha)^n`, and the shape conditional is a
//! PTN accepted with the squared Stirling ratio, exactly as in the
//! Dirichlet-multinomial sweep but with a single coordinate.

use super::{mh_shape_update, MhCounter};
use crate::augment::{
    propose_shape_given_tilt, sample_power_latent, sample_tilt_normal, sample_tilt_poisson,
    BetaLatents, ShapeConditionalParams,
};
use crate::models::PtnVariant;
use crate::{dist, Error, Result, RngStream};

#[derive(Debug, Clone, Copy)]
pub struct NegBinConfig {
    /// alpha ~ Gamma(a, b).
    pub a: f64,
    pub b: f64,
    pub variant: PtnVariant,
}

#[derive(Debug, Clone)]
pub struct NegBinModel {
    y: Vec<u64>,
    /// Sum of the logs of the known success probabilities.
    sum_log_p: f64,
    cfg: NegBinConfig,
}

#[derive(Debug, Clone)]
pub struct NegBinState {
    pub alpha: f64,
    pub z: Vec<f64>,
    pub w: f64,
    pub rho: BetaLatents,
    pub counter: MhCounter,
    pub rho_clamped: u64,
}

impl NegBinModel {
    pub fn new(y: &[u64], p: &[f64], cfg: NegBinConfig) -> Result<Self> {
        if !(cfg.a > 0.0) || !cfg.a.is_finite() {
            return Err(Error::domain("negbin", "a", cfg.a));
        }
        if !(cfg.b > 0.0) || !cfg.b.is_finite() {
            return Err(Error::domain("negbin", "b", cfg.b));
        }
        if y.len() < 2 {
            return Err(Error::TooFewObservations {
                what: "negbin",
                needed: 2,
                got: y.len(),
            });
        }
        if p.len() != y.len() {
            return Err(Error::domain("negbin", "p_len", p.len() as f64));
        }
        for &pi in p {
            if !(pi > 0.0 && pi < 1.0) {
                return Err(Error::domain("negbin", "p", pi));
            }
        }
        Ok(NegBinModel {
            y: y.to_vec(),
            sum_log_p: p.iter().map(|v| v.ln()).sum(),
            cfg,
        })
    }

    pub fn n(&self) -> usize {
        self.y.len()
    }

    pub fn init_state(&self, rng: &mut RngStream) -> Result<NegBinState> {
        let alpha = 1.0;
        let mut state = NegBinState {
            alpha,
            z: vec![1.0; self.n()],
            w: 1.0,
            rho: BetaLatents::default(),
            counter: MhCounter::default(),
            rho_clamped: 0,
        };
        self.refresh_latents(&mut state, rng)?;
        Ok(state)
    }

    fn refresh_latents(&self, state: &mut NegBinState, rng: &mut RngStream) -> Result<()> {
        for (z, &y) in state.z.iter_mut().zip(&self.y) {
            // z feeds ln z; keep underflowed draws representable.
            *z = dist::gamma(state.alpha + y as f64, 1.0, rng)?.max(f64::MIN_POSITIVE);
        }
        state.w = sample_power_latent(state.alpha, self.n() as u32, rng)?;
        state.rho = BetaLatents::sample(state.alpha, self.n() as u32, rng)?;
        state.rho_clamped += state.rho.clamped;
        Ok(())
    }

    /// One full sweep: z, w, rho, then the PTN-routed shape update.
    pub fn step(&self, state: &mut NegBinState, rng: &mut RngStream) -> Result<()> {
        let n = self.n() as f64;
        self.refresh_latents(state, rng)?;

        let log_z_sum: f64 = state.z.iter().map(|z| z.ln()).sum();
        // The alpha-linear data terms fold into the effective prior rate.
        let ptn = ShapeConditionalParams::with_prior(
            self.cfg.a,
            self.cfg.b - self.sum_log_p - log_z_sum,
            self.n() as u32,
            state.rho.log_inv_sum(),
        )
        .to_ptn(self.n() as u32, state.w)?;
        debug_assert!((ptn.c - (n + self.cfg.a)).abs() < 1e-9);
        let proposal = match self.cfg.variant {
            PtnVariant::PtnDirect => dist::sample_ptn(&ptn, rng)?,
            PtnVariant::Poisson => {
                let latents = sample_tilt_poisson(state.alpha, &ptn, rng)?;
                propose_shape_given_tilt(&latents, &ptn, rng)?
            }
            PtnVariant::Normal => {
                let latents = sample_tilt_normal(state.alpha, &ptn, rng)?;
                propose_shape_given_tilt(&latents, &ptn, rng)?
            }
        };
        state.alpha = mh_shape_update(n, state.alpha, proposal, 2, &mut state.counter, rng)?;
        Ok(())
    }
}

/// Draw one NB(alpha, p) count through its Poisson-gamma mixture:
/// `lambda ~ Gamma(alpha, p / (1 - p))`, `y | lambda ~ Poisson(lambda)`.
pub fn sample_negbin(alpha: f64, p: f64, rng: &mut RngStream) -> Result<u64> {
    if !(alpha > 0.0) || !alpha.is_finite() {
        return Err(Error::domain("sample_negbin", "alpha", alpha));
    }
    if !(p > 0.0 && p < 1.0) {
        return Err(Error::domain("sample_negbin", "p", p));
    }
    let lambda = dist::gamma(alpha, p / (1.0 - p), rng)?;
    if lambda == 0.0 {
        return Ok(0);
    }
    dist::poisson(lambda, rng)
}
