//! Declarative experiment configuration (one JSON document per experiment).

use crate::{HarnessError, Result};
use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ModelKind {
    Gamma,
    StudentT,
    DirMult,
    OneDir,
    NegBin,
    Wishart,
}

impl ModelKind {
    pub fn label(&self) -> &'static str {
        match self {
            ModelKind::Gamma => "gamma",
            ModelKind::StudentT => "student_t",
            ModelKind::DirMult => "dir_mult",
            ModelKind::OneDir => "one_dir",
            ModelKind::NegBin => "neg_bin",
            ModelKind::Wishart => "wishart",
        }
    }
}

/// Sampling method. `da` is the data-augmentation sampler; `da_k` adds K
/// duplication levels (gamma model only); `da_pt` / `da_p` / `da_n` choose
/// the PTN proposal route (direct, Poisson tilt, normal tilt); `amh` is the
/// fitted-gamma comparison baseline.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Method {
    Da,
    DaK { k: u32 },
    DaN,
    DaP,
    DaPt,
    Amh,
}

impl Method {
    pub fn label(&self) -> String {
        match self {
            Method::Da => "da".into(),
            Method::DaK { k } => format!("da_k{k}"),
            Method::DaN => "da_n".into(),
            Method::DaP => "da_p".into(),
            Method::DaPt => "da_pt".into(),
            Method::Amh => "amh".into(),
        }
    }
}

/// Truth concentration vector for the Dirichlet-multinomial data generator:
/// either a named scenario or explicit values.
///
/// Scenarios (for `categories` entries): `"I"` = 0.1 everywhere, `"II"` =
/// (0.1, 0.2, ...), `"III"` = 1.0 everywhere, `"IV"` = 0.5 on the first half
/// and 1.0 on the second.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Alpha0 {
    Scenario(String),
    Values(Vec<f64>),
}

impl Alpha0 {
    pub fn resolve(&self, categories: usize) -> Result<Vec<f64>> {
        match self {
            Alpha0::Values(v) => {
                if v.len() != categories {
                    return Err(HarnessError::config(
                        "data.alpha0",
                        format!("expected {categories} values, got {}", v.len()),
                    ));
                }
                Ok(v.clone())
            }
            Alpha0::Scenario(name) => match name.as_str() {
                "I" => Ok(vec![0.1; categories]),
                "II" => Ok((0..categories).map(|l| 0.1 * (l as f64 + 1.0)).collect()),
                "III" => Ok(vec![1.0; categories]),
                "IV" => {
                    if categories % 2 != 0 {
                        return Err(HarnessError::config(
                            "data.alpha0",
                            "scenario IV needs an even number of categories",
                        ));
                    }
                    let half = categories / 2;
                    Ok((0..categories)
                        .map(|l| if l < half { 0.5 } else { 1.0 })
                        .collect())
                }
                other => Err(HarnessError::config(
                    "data.alpha0",
                    format!("unknown scenario {other:?} (expected I..IV or a value list)"),
                )),
            },
        }
    }

    pub fn label(&self) -> String {
        match self {
            Alpha0::Scenario(s) => format!("({s})"),
            Alpha0::Values(_) => "custom".into(),
        }
    }
}

/// Model-specific truth parameters and sizes.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "model", rename_all = "snake_case")]
pub enum DataSpec {
    Gamma {
        n: usize,
        alpha0: f64,
        beta0: f64,
    },
    StudentT {
        n: usize,
        theta0: f64,
        tau0: f64,
        two_alpha0: f64,
    },
    DirMult {
        n: usize,
        categories: usize,
        trials: u64,
        alpha0: Alpha0,
    },
    OneDir {
        n: usize,
        l: usize,
        trials: u64,
        alpha0: f64,
    },
    NegBin {
        n: usize,
        alpha0: f64,
        p: f64,
    },
    Wishart {
        n: usize,
        p: usize,
        alpha0: f64,
        beta0: f64,
    },
}

impl DataSpec {
    pub fn model(&self) -> ModelKind {
        match self {
            DataSpec::Gamma { .. } => ModelKind::Gamma,
            DataSpec::StudentT { .. } => ModelKind::StudentT,
            DataSpec::DirMult { .. } => ModelKind::DirMult,
            DataSpec::OneDir { .. } => ModelKind::OneDir,
            DataSpec::NegBin { .. } => ModelKind::NegBin,
            DataSpec::Wishart { .. } => ModelKind::Wishart,
        }
    }

    pub fn n(&self) -> usize {
        match self {
            DataSpec::Gamma { n, .. }
            | DataSpec::StudentT { n, .. }
            | DataSpec::DirMult { n, .. }
            | DataSpec::OneDir { n, .. }
            | DataSpec::NegBin { n, .. }
            | DataSpec::Wishart { n, .. } => *n,
        }
    }

    /// Scenario tag used in report rows.
    pub fn scenario(&self) -> String {
        match self {
            DataSpec::Gamma { alpha0, beta0, .. } => format!("alpha0={alpha0},beta0={beta0}"),
            DataSpec::StudentT { two_alpha0, .. } => format!("2a0={two_alpha0}"),
            DataSpec::DirMult { alpha0, .. } => alpha0.label(),
            DataSpec::OneDir { alpha0, .. } => format!("alpha0={alpha0}"),
            DataSpec::NegBin { alpha0, p, .. } => format!("alpha0={alpha0},p={p}"),
            DataSpec::Wishart { alpha0, beta0, .. } => {
                format!("alpha0={alpha0},beta0={beta0}")
            }
        }
    }
}

/// Prior hyperparameters, tagged by model.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "model", rename_all = "snake_case")]
pub enum PriorSpec {
    Gamma {
        a: f64,
        b: f64,
        c: f64,
        d: f64,
    },
    StudentT {
        a: f64,
        b: f64,
        c: f64,
        d: f64,
        a0: f64,
        b0: f64,
        #[serde(default)]
        alpha_lower: f64,
    },
    DirMult {
        a: f64,
        b: f64,
    },
    OneDir {
        a: f64,
        b: f64,
    },
    NegBin {
        a: f64,
        b: f64,
    },
    Wishart {
        a: f64,
        b: f64,
        c: f64,
        d: f64,
    },
}

impl PriorSpec {
    pub fn model(&self) -> ModelKind {
        match self {
            PriorSpec::Gamma { .. } => ModelKind::Gamma,
            PriorSpec::StudentT { .. } => ModelKind::StudentT,
            PriorSpec::DirMult { .. } => ModelKind::DirMult,
            PriorSpec::OneDir { .. } => ModelKind::OneDir,
            PriorSpec::NegBin { .. } => ModelKind::NegBin,
            PriorSpec::Wishart { .. } => ModelKind::Wishart,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct ChainSpec {
    pub burn_in: usize,
    pub draws: usize,
    /// Retain full draw matrices in memory (determinism checks); never
    /// persisted.
    #[serde(default)]
    pub keep_draws: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExperimentSpec {
    pub method: Method,
    pub data: DataSpec,
    pub prior: PriorSpec,
    pub chain: ChainSpec,
    pub replications: usize,
    pub seed: u64,
}

impl ExperimentSpec {
    pub fn model(&self) -> ModelKind {
        self.data.model()
    }

    pub fn validate(&self) -> Result<()> {
        if self.prior.model() != self.data.model() {
            return Err(HarnessError::config(
                "prior.model",
                format!(
                    "prior is for {} but data is for {}",
                    self.prior.model().label(),
                    self.data.model().label()
                ),
            ));
        }
        if self.chain.draws == 0 {
            return Err(HarnessError::config("chain.draws", "must be positive"));
        }
        if self.replications == 0 {
            return Err(HarnessError::config("replications", "must be at least 1"));
        }
        let model = self.model();
        let ok = matches!(
            (model, self.method),
            (ModelKind::Gamma, Method::Da)
                | (ModelKind::Gamma, Method::DaK { .. })
                | (ModelKind::Gamma, Method::Amh)
                | (ModelKind::StudentT, Method::Da)
                | (ModelKind::StudentT, Method::Amh)
                | (ModelKind::DirMult, Method::DaN)
                | (ModelKind::DirMult, Method::DaP)
                | (ModelKind::DirMult, Method::DaPt)
                | (ModelKind::NegBin, Method::DaN)
                | (ModelKind::NegBin, Method::DaP)
                | (ModelKind::NegBin, Method::DaPt)
                | (ModelKind::OneDir, Method::Da)
                | (ModelKind::Wishart, Method::Da)
        );
        if !ok {
            return Err(HarnessError::config(
                "method",
                format!(
                    "{} is not valid for model {}",
                    self.method.label(),
                    model.label()
                ),
            ));
        }
        match &self.data {
            DataSpec::Gamma { n, alpha0, beta0 } => {
                positive("data.n", *n)?;
                positive_f("data.alpha0", *alpha0)?;
                positive_f("data.beta0", *beta0)?;
            }
            DataSpec::StudentT {
                n,
                tau0,
                two_alpha0,
                ..
            } => {
                positive("data.n", *n)?;
                positive_f("data.tau0", *tau0)?;
                positive_f("data.two_alpha0", *two_alpha0)?;
            }
            DataSpec::DirMult {
                n,
                categories,
                trials,
                alpha0,
            } => {
                if *n < 2 {
                    return Err(HarnessError::config("data.n", "needs n >= 2"));
                }
                if *categories < 2 {
                    return Err(HarnessError::config("data.categories", "needs >= 2"));
                }
                positive("data.trials", *trials as usize)?;
                for v in alpha0.resolve(*categories)? {
                    positive_f("data.alpha0", v)?;
                }
            }
            DataSpec::OneDir {
                n,
                l,
                trials,
                alpha0,
            } => {
                positive("data.n", *n)?;
                positive("data.l", *l)?;
                positive("data.trials", *trials as usize)?;
                positive_f("data.alpha0", *alpha0)?;
            }
            DataSpec::NegBin { n, alpha0, p } => {
                if *n < 2 {
                    return Err(HarnessError::config("data.n", "needs n >= 2"));
                }
                positive_f("data.alpha0", *alpha0)?;
                if !(*p > 0.0 && *p < 1.0) {
                    return Err(HarnessError::config("data.p", "needs 0 < p < 1"));
                }
            }
            DataSpec::Wishart { n, p, alpha0, beta0 } => {
                positive("data.n", *n)?;
                if *p < 2 || *p % 2 != 0 {
                    return Err(HarnessError::config("data.p", "needs even p >= 2"));
                }
                positive_f("data.alpha0", *alpha0)?;
                positive_f("data.beta0", *beta0)?;
            }
        }
        Ok(())
    }

    /// Parameter labels of the report rows for this model.
    pub fn param_names(&self) -> Vec<String> {
        match &self.data {
            DataSpec::Gamma { .. } => vec!["alpha".into(), "beta".into()],
            DataSpec::StudentT { .. } => vec!["theta".into(), "tau".into(), "alpha".into()],
            DataSpec::DirMult { categories, .. } => {
                (0..*categories).map(|l| format!("alpha{l}")).collect()
            }
            DataSpec::OneDir { .. } => vec!["alpha".into()],
            DataSpec::NegBin { .. } => vec!["alpha".into()],
            DataSpec::Wishart { .. } => vec!["alpha".into(), "gamma_ratio".into()],
        }
    }

    /// Truth values aligned with `param_names`.
    pub fn truths(&self) -> Result<Vec<f64>> {
        Ok(match &self.data {
            DataSpec::Gamma { alpha0, beta0, .. } => vec![*alpha0, *beta0],
            DataSpec::StudentT {
                theta0,
                tau0,
                two_alpha0,
                ..
            } => vec![*theta0, *tau0, 0.5 * two_alpha0],
            DataSpec::DirMult {
                categories, alpha0, ..
            } => alpha0.resolve(*categories)?,
            DataSpec::OneDir { alpha0, .. } => vec![*alpha0],
            DataSpec::NegBin { alpha0, .. } => vec![*alpha0],
            DataSpec::Wishart { alpha0, beta0, .. } => vec![*alpha0, beta0 / alpha0],
        })
    }
}

fn positive(field: &str, v: usize) -> Result<()> {
    if v == 0 {
        Err(HarnessError::config(field, "must be positive"))
    } else {
        Ok(())
    }
}

fn positive_f(field: &str, v: f64) -> Result<()> {
    if !(v > 0.0) || !v.is_finite() {
        Err(HarnessError::config(field, format!("must be positive, got {v}")))
    } else {
        Ok(())
    }
}
