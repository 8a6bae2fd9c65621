//! Replicated experiment execution and aggregation.

use crate::config::{ExperimentSpec, Method, PriorSpec};
use crate::data::{gen_data, Dataset};
use crate::report::ReportRow;
use crate::{HarnessError, Result};
use recipgamma::diag::{ess, mse_report, ChainResult, DrawMatrix};
use recipgamma::models::{
    DirMultConfig, DirMultModel, GammaModel, GammaModelConfig, NegBinConfig, NegBinModel,
    OneDirConfig, OneDirModel, PtnVariant, TModel, TModelConfig, WishartConfig, WishartModel,
};
use recipgamma::RngStream;
use serde::{Deserialize, Serialize};
use std::sync::atomic::{AtomicUsize, Ordering};
use std::sync::Mutex;
use std::time::Instant;

/// Convergence tolerance and iteration cap of the fitted-gamma baseline.
const AMH_EPS: f64 = 1e-8;
const AMH_MAX_ITERS: u32 = 10;

/// Per-replication diagnostics (persisted as JSON).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RepSummary {
    pub rep_index: usize,
    pub posterior_means: Vec<f64>,
    pub ess: Vec<f64>,
    pub sess: Vec<f64>,
    pub accept_rate: Vec<f64>,
    pub wall_seconds: f64,
    pub seed: u64,
    pub stream_id: u64,
}

/// Everything the `report` command needs to rebuild the table.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PersistedExperiment {
    pub model: String,
    pub method: String,
    pub scenario: String,
    pub n: usize,
    pub param_names: Vec<String>,
    pub truths: Vec<f64>,
    pub seed: u64,
    pub burn_in: usize,
    pub draws: usize,
    pub replications: usize,
    pub reps: Vec<RepSummary>,
}

#[derive(Debug)]
pub struct ExperimentResult {
    pub rows: Vec<ReportRow>,
    pub persisted: PersistedExperiment,
    /// (rep_index, error message) of failed replications (at most 5%).
    pub failures: Vec<(usize, String)>,
    /// Full chains, retained only when `chain.keep_draws` is set.
    pub chains: Vec<Option<ChainResult>>,
}

/// Run one replication's chain. Wall time covers exactly the sampling loop.
pub fn run_chain(
    spec: &ExperimentSpec,
    dataset: &Dataset,
    rep_index: usize,
) -> recipgamma::Result<ChainResult> {
    let mut rng = RngStream::new(spec.seed, rep_index as u64);
    let names = spec.param_names();
    let total = spec.chain.burn_in + spec.chain.draws;
    let mut draws = DrawMatrix::with_capacity(names.len(), spec.chain.draws);

    let (wall, accept): (f64, Vec<f64>) = match (dataset, spec.method, spec.prior) {
        (Dataset::Gamma { x }, Method::Da, PriorSpec::Gamma { a, b, c, d }) => {
            let model = GammaModel::new(x, GammaModelConfig { a, b, c, d, k_levels: 0 })?;
            run_gamma_da(&model, total, spec.chain.burn_in, &mut draws, &mut rng)?
        }
        (Dataset::Gamma { x }, Method::DaK { k }, PriorSpec::Gamma { a, b, c, d }) => {
            let model = GammaModel::new(x, GammaModelConfig { a, b, c, d, k_levels: k })?;
            run_gamma_da(&model, total, spec.chain.burn_in, &mut draws, &mut rng)?
        }
        (Dataset::Gamma { x }, Method::Amh, PriorSpec::Gamma { a, b, c, d }) => {
            let model = GammaModel::new(x, GammaModelConfig { a, b, c, d, k_levels: 0 })?;
            let mut state = model.init_amh_state();
            let start = Instant::now();
            for it in 0..total {
                model.amh_step(&mut state, AMH_EPS, AMH_MAX_ITERS, &mut rng)?;
                if it >= spec.chain.burn_in {
                    draws.push_row(&[state.alpha, state.beta]);
                }
            }
            (start.elapsed().as_secs_f64(), vec![state.counter.rate()])
        }
        (Dataset::StudentT { x }, Method::Da, PriorSpec::StudentT { a, b, c, d, a0, b0, alpha_lower }) => {
            let model = TModel::new(
                x,
                TModelConfig { a, b, c, d, a0, b0, alpha_lower },
            )?;
            let mut state = model.init_state(&mut rng)?;
            let start = Instant::now();
            for it in 0..total {
                model.step(&mut state, &mut rng)?;
                if it >= spec.chain.burn_in {
                    draws.push_row(&[state.theta, state.tau, state.alpha]);
                }
            }
            (start.elapsed().as_secs_f64(), vec![state.counter.rate()])
        }
        (Dataset::StudentT { x }, Method::Amh, PriorSpec::StudentT { a, b, c, d, a0, b0, alpha_lower }) => {
            let model = TModel::new(
                x,
                TModelConfig { a, b, c, d, a0, b0, alpha_lower },
            )?;
            let mut state = model.init_amh_state(&mut rng)?;
            let start = Instant::now();
            for it in 0..total {
                model.amh_step(&mut state, AMH_EPS, AMH_MAX_ITERS, &mut rng)?;
                if it >= spec.chain.burn_in {
                    draws.push_row(&[state.theta, state.tau, state.alpha]);
                }
            }
            (start.elapsed().as_secs_f64(), vec![state.counter.rate()])
        }
        (
            Dataset::DirMult { n, categories, counts },
            method @ (Method::DaN | Method::DaP | Method::DaPt),
            PriorSpec::DirMult { a, b },
        ) => {
            let variant = match method {
                Method::DaN => PtnVariant::Normal,
                Method::DaP => PtnVariant::Poisson,
                _ => PtnVariant::PtnDirect,
            };
            let model = DirMultModel::new(counts, *n, *categories, DirMultConfig { a, b, variant })?;
            let mut state = model.init_state(&mut rng)?;
            let start = Instant::now();
            for it in 0..total {
                model.step(&mut state, &mut rng)?;
                if it >= spec.chain.burn_in {
                    draws.push_row(&state.alpha);
                }
            }
            (
                start.elapsed().as_secs_f64(),
                state.counters.iter().map(|c| c.rate()).collect(),
            )
        }
        (
            Dataset::NegBin { y, p },
            method @ (Method::DaN | Method::DaP | Method::DaPt),
            PriorSpec::NegBin { a, b },
        ) => {
            let variant = match method {
                Method::DaN => PtnVariant::Normal,
                Method::DaP => PtnVariant::Poisson,
                _ => PtnVariant::PtnDirect,
            };
            let model = NegBinModel::new(y, p, NegBinConfig { a, b, variant })?;
            let mut state = model.init_state(&mut rng)?;
            let start = Instant::now();
            for it in 0..total {
                model.step(&mut state, &mut rng)?;
                if it >= spec.chain.burn_in {
                    draws.push_row(&[state.alpha]);
                }
            }
            (start.elapsed().as_secs_f64(), vec![state.counter.rate()])
        }
        (Dataset::OneDir { n, l, counts }, Method::Da, PriorSpec::OneDir { a, b }) => {
            let model = OneDirModel::new(counts, *n, *l, OneDirConfig { a, b })?;
            let mut state = model.init_state(&mut rng)?;
            let start = Instant::now();
            for it in 0..total {
                model.step(&mut state, &mut rng)?;
                if it >= spec.chain.burn_in {
                    draws.push_row(&[state.alpha]);
                }
            }
            (start.elapsed().as_secs_f64(), Vec::new())
        }
        (Dataset::Wishart { n, p, data }, Method::Da, PriorSpec::Wishart { a, b, c, d }) => {
            let model = WishartModel::new(data, *n, *p, WishartConfig { a, b, c, d })?;
            let mut state = model.init_state(&mut rng)?;
            let start = Instant::now();
            for it in 0..total {
                model.step(&mut state, &mut rng)?;
                if it >= spec.chain.burn_in {
                    draws.push_row(&[state.alpha, state.gamma_ratio]);
                }
            }
            (start.elapsed().as_secs_f64(), vec![state.counter.rate()])
        }
        _ => unreachable!("validated method/model combination"),
    };

    Ok(ChainResult {
        draws,
        param_names: names,
        accept_rate: accept,
        wall_seconds: wall,
        seed_info: (spec.seed, rep_index as u64),
    })
}

fn run_gamma_da(
    model: &GammaModel,
    total: usize,
    burn_in: usize,
    draws: &mut DrawMatrix,
    rng: &mut RngStream,
) -> recipgamma::Result<(f64, Vec<f64>)> {
    let mut state = model.init_state(rng)?;
    let start = Instant::now();
    for it in 0..total {
        model.step(&mut state, rng)?;
        if it >= burn_in {
            draws.push_row(&[state.alpha, state.beta()]);
        }
    }
    Ok((start.elapsed().as_secs_f64(), vec![state.counter.rate()]))
}

fn summarize(spec: &ExperimentSpec, rep_index: usize, chain: &ChainResult) -> Result<RepSummary> {
    let p = chain.param_names.len();
    let mut means = Vec::with_capacity(p);
    let mut esses = Vec::with_capacity(p);
    let mut sesses = Vec::with_capacity(p);
    for j in 0..p {
        let col = chain.draws.column(j);
        let m = col.iter().sum::<f64>() / col.len() as f64;
        let e = ess(&col)?;
        means.push(m);
        esses.push(e);
        sesses.push(e / chain.wall_seconds);
    }
    Ok(RepSummary {
        rep_index,
        posterior_means: means,
        ess: esses,
        sess: sesses,
        accept_rate: chain.accept_rate.clone(),
        wall_seconds: chain.wall_seconds,
        seed: spec.seed,
        stream_id: rep_index as u64,
    })
}

fn run_one(
    spec: &ExperimentSpec,
    rep_index: usize,
) -> Result<(RepSummary, Option<ChainResult>)> {
    let dataset = gen_data(spec, rep_index)?;
    let chain = run_chain(spec, &dataset, rep_index)?;
    let summary = summarize(spec, rep_index, &chain)?;
    let keep = spec.chain.keep_draws.then_some(chain);
    Ok((summary, keep))
}

/// Run all replications (`parallel` worker threads; 1 = serial) and
/// aggregate. Aggregates are a deterministic fold in replication order
/// regardless of scheduling.
pub fn run_experiment(spec: &ExperimentSpec, parallel: usize) -> Result<ExperimentResult> {
    spec.validate()?;
    let reps = spec.replications;
    let mut outcomes: Vec<Option<Result<(RepSummary, Option<ChainResult>)>>> =
        (0..reps).map(|_| None).collect();

    let workers = parallel.max(1).min(reps);
    if workers == 1 {
        for (rep, slot) in outcomes.iter_mut().enumerate() {
            *slot = Some(run_one(spec, rep));
        }
    } else {
        let next = AtomicUsize::new(0);
        let slots: Vec<Mutex<Option<Result<(RepSummary, Option<ChainResult>)>>>> =
            (0..reps).map(|_| Mutex::new(None)).collect();
        std::thread::scope(|scope| {
            for _ in 0..workers {
                scope.spawn(|| loop {
                    let rep = next.fetch_add(1, Ordering::Relaxed);
                    if rep >= reps {
                        break;
                    }
                    let out = run_one(spec, rep);
                    *slots[rep].lock().unwrap() = Some(out);
                });
            }
        });
        for (slot, cell) in outcomes.iter_mut().zip(slots) {
            *slot = cell.into_inner().unwrap();
        }
    }

    let mut summaries = Vec::with_capacity(reps);
    let mut chains = Vec::with_capacity(reps);
    let mut failures = Vec::new();
    for (rep, outcome) in outcomes.into_iter().enumerate() {
        match outcome.expect("every slot filled") {
            Ok((summary, chain)) => {
                summaries.push(summary);
                chains.push(chain);
            }
            Err(e) => {
                failures.push((rep, e.to_string()));
                chains.push(None);
            }
        }
    }
    if failures.len() * 20 > reps {
        return Err(HarnessError::TooManyFailures {
            failed: failures.len(),
            total: reps,
            first: failures[0].1.clone(),
        });
    }

    let persisted = PersistedExperiment {
        model: spec.model().label().to_string(),
        method: spec.method.label(),
        scenario: spec.data.scenario(),
        n: spec.data.n(),
        param_names: spec.param_names(),
        truths: spec.truths()?,
        seed: spec.seed,
        burn_in: spec.chain.burn_in,
        draws: spec.chain.draws,
        replications: reps,
        reps: summaries,
    };
    let rows = aggregate_rows(&persisted)?;
    Ok(ExperimentResult {
        rows,
        persisted,
        failures,
        chains,
    })
}

/// Aggregate replication summaries into one report row per parameter.
/// The fold runs in `rep_index` order whatever the input order, so the
/// output is bit-identical under any execution schedule.
pub fn aggregate_rows(exp: &PersistedExperiment) -> Result<Vec<ReportRow>> {
    if exp.reps.is_empty() {
        return Err(HarnessError::EmptyReport);
    }
    let mut reps: Vec<&RepSummary> = exp.reps.iter().collect();
    reps.sort_by_key(|s| s.rep_index);
    let p = exp.param_names.len();
    let r = reps.len() as f64;
    let mut rows = Vec::with_capacity(p);
    for j in 0..p {
        let mean_ess = reps.iter().map(|s| s.ess[j]).sum::<f64>() / r;
        let mean_sess = reps.iter().map(|s| s.sess[j]).sum::<f64>() / r;
        let ct = reps.iter().map(|s| s.wall_seconds).sum::<f64>() / r;
        let estimates: Vec<f64> = reps.iter().map(|s| s.posterior_means[j]).collect();
        let mse = if estimates.len() >= 2 {
            mse_report(&estimates, exp.truths[j], None)
                .map_err(HarnessError::Sampler)?
                .mse
        } else {
            let d = estimates[0] - exp.truths[j];
            d * d
        };
        // Per-block acceptance: one block per coordinate for the
        // concentration models, one shared block otherwise; pure Gibbs
        // reports 1.
        let accept = reps
            .iter()
            .map(|s| {
                if s.accept_rate.is_empty() {
                    1.0
                } else if s.accept_rate.len() == p {
                    s.accept_rate[j]
                } else {
                    s.accept_rate[0]
                }
            })
            .sum::<f64>()
            / r;
        rows.push(ReportRow {
            model: exp.model.clone(),
            method: exp.method.clone(),
            scenario: exp.scenario.clone(),
            n: exp.n,
            param: exp.param_names[j].clone(),
            ess: mean_ess,
            sess: mean_sess,
            ct_seconds: ct,
            mse,
            accept_rate: accept,
        });
    }
    Ok(rows)
}
