//! Experiment configuration (JSON).
//!
//! ```json
//! {
//!   "models": [{"topology": "ring2"}, {"topology": "moore8", "depletion": 2}],
//!   "params": {"alpha": 4, "beta": 0.5, "steps": 8192},
//!   "replicates": 30,
//!   "seed": 1,
//!   "min_count": 5,
//!   "output_dir": "results"
//! }
//! ```
//!
//! Every field may be omitted; omitted model parameters take the defaults
//! of [`ModelParams`].

use std::fmt;
use std::fs;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};
use spinmarket_core::network::{
    build_moore_torus, build_ring, build_von_neumann_torus, eliminate_random_in_links,
};
use spinmarket_core::rng::SimRng;
use spinmarket_core::stats::DEFAULT_MIN_COUNT;
use spinmarket_core::{ModelParams, Network};

use crate::error::{AppError, Result};

/// Agents per network.
pub const AGENTS: usize = 16;
const SIDE: usize = 4;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Topology {
    #[serde(rename = "ring2")]
    Ring2,
    #[serde(rename = "vn4")]
    VonNeumann4,
    #[serde(rename = "moore8")]
    Moore8,
}

impl Topology {
    pub fn name(self) -> &'static str {
        match self {
            Topology::Ring2 => "ring2",
            Topology::VonNeumann4 => "vn4",
            Topology::Moore8 => "moore8",
        }
    }

    pub fn degree(self) -> usize {
        match self {
            Topology::Ring2 => 2,
            Topology::VonNeumann4 => 4,
            Topology::Moore8 => 8,
        }
    }

    pub fn parse(s: &str) -> Option<Self> {
        match s {
            "ring2" => Some(Topology::Ring2),
            "vn4" => Some(Topology::VonNeumann4),
            "moore8" => Some(Topology::Moore8),
            _ => None,
        }
    }

    fn lattice(self) -> Network {
        match self {
            Topology::Ring2 => build_ring(AGENTS),
            Topology::VonNeumann4 => build_von_neumann_torus(SIDE, SIDE),
            Topology::Moore8 => build_moore_torus(SIDE, SIDE),
        }
        .expect("default lattice dimensions are valid")
    }
}

impl fmt::Display for Topology {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ModelSpec {
    pub topology: Topology,
    /// In-links removed per agent.
    #[serde(default)]
    pub depletion: usize,
}

impl ModelSpec {
    pub fn lattice(topology: Topology) -> Self {
        Self {
            topology,
            depletion: 0,
        }
    }

    pub fn depleted(k: usize) -> Self {
        Self {
            topology: Topology::Moore8,
            depletion: k,
        }
    }

    /// `ring2`, `vn4`, `moore8`, or `moore8-minus{k}`.
    pub fn label(&self) -> String {
        if self.depletion == 0 {
            self.topology.name().to_string()
        } else {
            format!("{}-minus{}", self.topology.name(), self.depletion)
        }
    }

    /// Inverse of [`label`](Self::label).
    pub fn from_label(label: &str) -> Option<Self> {
        if let Some((base, k)) = label.split_once("-minus") {
            let spec = Self {
                topology: Topology::parse(base)?,
                depletion: k.parse().ok()?,
            };
            return (spec.depletion > 0).then_some(spec);
        }
        Topology::parse(label).map(Self::lattice)
    }

    pub fn degree(&self) -> usize {
        self.topology.degree() - self.depletion
    }

    pub fn is_lattice(&self) -> bool {
        self.depletion == 0
    }

    /// The model's network; depleted models draw their missing links from `rng`.
    pub fn build(&self, rng: &mut SimRng) -> spinmarket_core::Result<Network> {
        let base = self.topology.lattice();
        eliminate_random_in_links(&base, self.depletion, rng)
    }

    fn validate(&self) -> Result<()> {
        if self.depletion > 0 && self.topology != Topology::Moore8 {
            return Err(AppError::Config(format!(
                "depletion is only defined for moore8, got {}",
                self.label()
            )));
        }
        if self.depletion >= self.topology.degree() {
            return Err(AppError::Config(format!(
                "{}: cannot remove {} of {} links",
                self.topology,
                self.depletion,
                self.topology.degree()
            )));
        }
        Ok(())
    }
}

/// JSON face of [`ModelParams`], every field optional.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ParamsConfig {
    pub alpha: f64,
    pub beta: f64,
    pub steps: usize,
    pub tracked_site: usize,
    pub threshold: f64,
    pub burn_in: usize,
}

impl Default for ParamsConfig {
    fn default() -> Self {
        ModelParams::default().into()
    }
}

impl From<ModelParams> for ParamsConfig {
    fn from(p: ModelParams) -> Self {
        Self {
            alpha: p.alpha,
            beta: p.beta,
            steps: p.steps,
            tracked_site: p.tracked_site,
            threshold: p.threshold,
            burn_in: p.burn_in,
        }
    }
}

impl From<ParamsConfig> for ModelParams {
    fn from(p: ParamsConfig) -> Self {
        Self {
            alpha: p.alpha,
            beta: p.beta,
            steps: p.steps,
            tracked_site: p.tracked_site,
            threshold: p.threshold,
            burn_in: p.burn_in,
        }
    }
}

fn default_models() -> Vec<ModelSpec> {
    vec![
        ModelSpec::lattice(Topology::Ring2),
        ModelSpec::lattice(Topology::VonNeumann4),
        ModelSpec::lattice(Topology::Moore8),
        ModelSpec::depleted(1),
        ModelSpec::depleted(2),
        ModelSpec::depleted(3),
    ]
}

fn default_replicates() -> usize {
    30
}

fn default_seed() -> u64 {
    1
}

fn default_min_count() -> u64 {
    DEFAULT_MIN_COUNT
}

fn default_output_dir() -> PathBuf {
    PathBuf::from("results")
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    #[serde(default = "default_models")]
    pub models: Vec<ModelSpec>,
    #[serde(default)]
    pub params: ParamsConfig,
    #[serde(default = "default_replicates")]
    pub replicates: usize,
    #[serde(default = "default_seed")]
    pub seed: u64,
    #[serde(default = "default_min_count")]
    pub min_count: u64,
    #[serde(default = "default_output_dir")]
    pub output_dir: PathBuf,
}

impl Default for ExperimentConfig {
    fn default() -> Self {
        Self {
            models: default_models(),
            params: ParamsConfig::default(),
            replicates: default_replicates(),
            seed: default_seed(),
            min_count: default_min_count(),
            output_dir: default_output_dir(),
        }
    }
}

impl ExperimentConfig {
    pub fn from_json(text: &str) -> Result<Self> {
        let config: Self =
            serde_json::from_str(text).map_err(|e| AppError::Config(e.to_string()))?;
        config.validate()?;
        Ok(config)
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = fs::read_to_string(path).map_err(|e| AppError::io(path, e))?;
        Self::from_json(&text).map_err(|e| match e {
            AppError::Config(msg) => AppError::Config(format!("{}: {msg}", path.display())),
            other => other,
        })
    }

    pub fn model_params(&self) -> ModelParams {
        self.params.into()
    }

    pub fn validate(&self) -> Result<()> {
        if self.models.is_empty() {
            return Err(AppError::Config("at least one model is required".into()));
        }
        if self.replicates == 0 {
            return Err(AppError::Config("replicates must be at least 1".into()));
        }
        for (i, m) in self.models.iter().enumerate() {
            m.validate()?;
            if self.models[..i].contains(m) {
                return Err(AppError::Config(format!(
                    "model {} listed twice",
                    m.label()
                )));
            }
        }
        self.model_params()
            .validate(AGENTS)
            .map_err(|e| AppError::Config(format!("params: {e}")))
    }
}
