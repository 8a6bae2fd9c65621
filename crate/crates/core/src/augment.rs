//! Reusable augmentation blocks shared by the model sweeps.
//!
//! Four kinds of latent variables appear across the samplers:
//!
//! - **beta latents** `rho_2..rho_m`, whose product of beta kernels replaces
//!   the gamma-ratio factors of the multiplication-formula rewrite; their
//!   full conditionals are `Beta(xi + (j-1)/m, (m-j+1)/m)`;
//! - the **gamma power latent** `w`, with full conditional
//!   `Gamma(m xi, m xi^2)`, which converts the leftover `xi^(-m xi)` factor
//!   into a power-truncated-normal conditional for `xi`;
//! - **exponential-tilt latents** that decompose the PTN's `exp(M xi)` term
//!   so the shape update becomes the square root of a gamma (Poisson route)
//!   or generalized-inverse-Gaussian (normal route) draw;
//! - **duplication-level latents** `t_1..t_K`, gamma-distributed, which drive
//!   the acceptance lower bound from `1 - 1/(12 m xi*)` up to
//!   `1 - 1/(12 2^K m xi*)`.

use crate::dist::{self, GigParams, PtnParams};
use crate::{Result, RngStream};

/// The beta latents of one shape block. `m = 1` holds an empty vector.
#[derive(Debug, Clone, Default)]
pub struct BetaLatents {
    /// rho_j for j = 2..m, each strictly inside (0, 1).
    pub rho: Vec<f64>,
    pub m: u32,
    /// Number of draws that underflowed to exactly 0 or 1 and were nudged to
    /// the nearest representable interior value. Nonzero counts are reported
    /// by callers, never hidden.
    pub clamped: u64,
}

impl BetaLatents {
    /// Draw rho_j ~ Beta(xi + (j-1)/m, (m-j+1)/m) independently, j = 2..m.
    pub fn sample(xi: f64, m: u32, rng: &mut RngStream) -> Result<Self> {
        let mf = m as f64;
        let mut rho = Vec::with_capacity((m.max(1) - 1) as usize);
        let mut clamped = 0;
        for j in 2..=m {
            let jf = j as f64;
            let mut r = dist::beta(xi + (jf - 1.0) / mf, (mf - jf + 1.0) / mf, rng)?;
            if r <= 0.0 {
                r = f64::MIN_POSITIVE;
                clamped += 1;
            } else if r >= 1.0 {
                r = 1.0 - f64::EPSILON / 2.0;
                clamped += 1;
            }
            rho.push(r);
        }
        Ok(BetaLatents { rho, m, clamped })
    }

    /// `sum_j ln(1 / rho_j)`; finite and nonnegative by construction.
    pub fn log_inv_sum(&self) -> f64 {
        self.rho.iter().map(|r| -r.ln()).sum()
    }

    pub fn len(&self) -> usize {
        self.rho.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rho.is_empty()
    }
}

/// Duplication-level latents `t_1..t_K`; empty for `K = 0`.
#[derive(Debug, Clone, Default)]
pub struct KLevelLatents {
    pub t: Vec<f64>,
    pub k_levels: u32,
}

impl KLevelLatents {
    /// Draw t_k ~ Gamma(2^(k-1) m xi + 1/2, 2^K m xi), k = 1..K.
    pub fn sample(xi: f64, m: u32, k_levels: u32, rng: &mut RngStream) -> Result<Self> {
        assert!(k_levels <= 10, "duplication levels beyond 10 add nothing");
        let mf = m as f64;
        let rate = (1u64 << k_levels) as f64 * mf * xi;
        let mut t = Vec::with_capacity(k_levels as usize);
        for k in 1..=k_levels {
            let shape = (1u64 << (k - 1)) as f64 * mf * xi + 0.5;
            t.push(dist::gamma(shape, rate, rng)?);
        }
        Ok(KLevelLatents { t, k_levels })
    }
}

/// Gamma power latent: w ~ Gamma(m xi, m xi^2), so E[w] = 1/xi. The draw
/// feeds `ln w`, so an underflow to zero (possible when `m xi` is far below
/// one) is nudged to the smallest positive double.
pub fn sample_power_latent(xi: f64, m: u32, rng: &mut RngStream) -> Result<f64> {
    let mf = m as f64;
    Ok(dist::gamma(mf * xi, mf * xi * xi, rng)?.max(f64::MIN_POSITIVE))
}

/// Gamma-proposal coefficients of a shape full conditional after the beta
/// latents are in place: shape `a1 + m - 1/2` and rate
/// `b1 - m + sum_j ln(1/rho_j)` for a Gamma(a1, b1) prior factor.
#[derive(Debug, Clone, Copy)]
pub struct ShapeConditionalParams {
    pub shape: f64,
    pub rate: f64,
}

impl ShapeConditionalParams {
    pub fn with_prior(a1: f64, b1: f64, m: u32, rho_log_inv_sum: f64) -> Self {
        ShapeConditionalParams {
            shape: a1 + m as f64 - 0.5,
            rate: b1 - m as f64 + rho_log_inv_sum,
        }
    }

    /// The PTN conditional reached after adding the power latent `w`.
    pub fn to_ptn(self, m: u32, w: f64) -> Result<PtnParams> {
        ptn_params_from_conditional(self.shape, self.rate, m, w)
    }
}

/// PTN coefficients of the shape conditional given the power latent:
/// `c = a3 + 1/2`, `a = m w`, `b = m ln w + m - b3`.
pub fn ptn_params_from_conditional(a3: f64, b3: f64, m: u32, w: f64) -> Result<PtnParams> {
    let mf = m as f64;
    PtnParams::new(a3 + 0.5, mf * w, mf * w.ln() + mf - b3)
}

/// Which tilt decomposition produced a [`TiltLatents`] draw.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TiltKind {
    Poisson,
    Normal,
}

/// Exponential-tilt latents for one PTN shape update.
#[derive(Debug, Clone, Copy)]
pub struct TiltLatents {
    pub kind: TiltKind,
    /// Poisson route count latent.
    pub zeta: Option<u64>,
    /// Normal route location latent.
    pub theta: Option<f64>,
    pub eta: f64,
    /// Tilt constant `M = 1 + max(0, b)`.
    pub tilt: f64,
    /// `b' = M - b`, positive by construction.
    pub b_prime: f64,
}

fn tilt_constants(b: f64) -> (f64, f64) {
    let tilt = 1.0 + b.max(0.0);
    (tilt, tilt - b)
}

/// Poisson-route tilt draw given the current shape value:
/// `zeta ~ Poisson(M xi)`, `eta ~ GIG(1/2, 1, (b' xi)^2)`.
pub fn sample_tilt_poisson(xi: f64, ptn: &PtnParams, rng: &mut RngStream) -> Result<TiltLatents> {
    let (tilt, b_prime) = tilt_constants(ptn.b);
    let zeta = dist::poisson(tilt * xi, rng)?;
    let eta = dist::sample_gig(&GigParams::new(0.5, 1.0, (b_prime * xi).powi(2))?, rng)?;
    Ok(TiltLatents {
        kind: TiltKind::Poisson,
        zeta: Some(zeta),
        theta: None,
        eta,
        tilt,
        b_prime,
    })
}

/// Normal-route tilt draw given the current shape value, compositional:
/// `theta ~ N(2 M xi, 2 M xi)` with eta marginalized out, then
/// `eta ~ GIG(1/2, 1, (b' xi + theta^2 / (4 M xi))^2)`.
pub fn sample_tilt_normal(xi: f64, ptn: &PtnParams, rng: &mut RngStream) -> Result<TiltLatents> {
    let (tilt, b_prime) = tilt_constants(ptn.b);
    let theta = dist::normal(2.0 * tilt * xi, (2.0 * tilt * xi).sqrt(), rng)?;
    let s = b_prime * xi + theta * theta / (4.0 * tilt * xi);
    let eta = dist::sample_gig(&GigParams::new(0.5, 1.0, s * s)?, rng)?;
    Ok(TiltLatents {
        kind: TiltKind::Normal,
        zeta: None,
        theta: Some(theta),
        eta,
        tilt,
        b_prime,
    })
}

/// Shape proposal given tilt latents: the square root of a gamma draw on the
/// Poisson route, of a GIG draw on the normal route.
pub fn propose_shape_given_tilt(
    latents: &TiltLatents,
    ptn: &PtnParams,
    rng: &mut RngStream,
) -> Result<f64> {
    let b2 = latents.b_prime * latents.b_prime;
    let u = match latents.kind {
        TiltKind::Poisson => {
            let zeta = latents.zeta.expect("poisson latents carry zeta") as f64;
            dist::gamma(
                0.5 * (zeta + ptn.c),
                ptn.a + b2 / (2.0 * latents.eta),
                rng,
            )?
        }
        TiltKind::Normal => {
            let theta = latents.theta.expect("normal latents carry theta");
            let gig = GigParams::new(
                0.5 * ptn.c - 0.25,
                2.0 * ptn.a + b2 / latents.eta,
                theta.powi(4) / (16.0 * latents.tilt * latents.tilt * latents.eta),
            )?;
            dist::sample_gig(&gig, rng)?
        }
    };
    Ok(u.sqrt())
}
