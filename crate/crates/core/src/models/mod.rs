//! One Gibbs / MH-within-Gibbs sampler per model family.
//!
//! Each model is a struct holding the data's sufficient statistics and the
//! prior configuration; `init_state` builds a proper-support starting state
//! and `step` performs exactly one full sweep in the printed update order of
//! the corresponding algorithm (scale-type parameters first, latents, shape
//! last). States own their latents plus acceptance bookkeeping, so chains are
//! resumable and replayable from `(seed, stream_id)`.

pub mod dirmult;
pub mod gamma;
pub mod negbin;
pub mod onedir;
pub mod student_t;
pub mod wishart;

pub use dirmult::{DirMultConfig, DirMultModel, DirMultState, PtnVariant};
pub use gamma::{GammaAmhState, GammaModel, GammaModelConfig, GammaModelState};
pub use negbin::{NegBinConfig, NegBinModel, NegBinState};
pub use onedir::{OneDirConfig, OneDirModel, OneDirState};
pub use student_t::{TAmhState, TModel, TModelConfig, TModelState};
pub use wishart::{WishartConfig, WishartModel, WishartState};

use crate::special::{mh_accept_bound, mh_log_accept};
use crate::{Result, RngStream};

/// Acceptance bookkeeping for one independence-MH shape block, including the
/// per-step slack against the Stirling acceptance bound. The slack is a
/// deterministic inequality given the proposal, so `min_bound_slack < 0`
/// anywhere flags a defect.
#[derive(Debug, Clone)]
pub struct MhCounter {
    pub accepted: u64,
    pub steps: u64,
    pub last_log_accept: f64,
    pub last_bound: f64,
    pub min_bound_slack: f64,
}

impl Default for MhCounter {
    fn default() -> Self {
        MhCounter {
            accepted: 0,
            steps: 0,
            last_log_accept: 0.0,
            last_bound: 0.0,
            min_bound_slack: f64::INFINITY,
        }
    }
}

impl MhCounter {
    pub fn rate(&self) -> f64 {
        if self.steps == 0 {
            0.0
        } else {
            self.accepted as f64 / self.steps as f64
        }
    }
}

/// Independence-MH update of a shape value whose dropped factor is the
/// Stirling factor at `m_eff * xi` (`power` = 1) or its square (`power` = 2).
pub(crate) fn mh_shape_update(
    m_eff: f64,
    current: f64,
    proposal: f64,
    power: u8,
    counter: &mut MhCounter,
    rng: &mut RngStream,
) -> Result<f64> {
    let log_accept = mh_log_accept(m_eff, proposal, current, power)?;
    let bound = mh_accept_bound(m_eff, proposal, power);
    let accept = log_accept == 0.0 || rng.uniform_open().ln() < log_accept;
    counter.steps += 1;
    counter.last_log_accept = log_accept;
    counter.last_bound = bound;
    counter.min_bound_slack = counter.min_bound_slack.min(log_accept - bound);
    if accept {
        counter.accepted += 1;
        Ok(proposal)
    } else {
        Ok(current)
    }
}

/// Plain accept/reject bookkeeping (used by the A-MH baseline, which has no
/// Stirling bound).
#[derive(Debug, Clone, Default)]
pub struct AcceptCounter {
    pub accepted: u64,
    pub steps: u64,
}

impl AcceptCounter {
    pub fn record(&mut self, accepted: bool) {
        self.steps += 1;
        if accepted {
            self.accepted += 1;
        }
    }

    pub fn rate(&self) -> f64 {
        if self.steps == 0 {
            0.0
        } else {
            self.accepted as f64 / self.steps as f64
        }
    }
}
