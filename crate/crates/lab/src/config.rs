//! Experiment configuration files (TOML) and their resolution into kernel
//! types.

use std::path::Path;

use bis_core::sim::{CodebookMode, IdentifiedMode, SimOptions};
use bis_core::{
    AuxiliaryPair, Channel, FiniteDistribution, RegionSpec, RegionVariant, SearchConfig, SystemModel,
};
use serde::{Deserialize, Serialize};

use crate::error::LabError;

pub const SCHEMA_VERSION: u32 = 1;

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ConfigFile {
    pub schema_version: u32,
    pub seed: Option<u64>,
    pub model: ModelSection,
    pub aux: Option<AuxSection>,
    pub region: Option<RegionSection>,
    pub simulate: Option<SimulateSection>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ModelSection {
    pub source: Vec<f64>,
    pub enroll: Vec<Vec<f64>>,
    pub identify: Vec<Vec<f64>>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AuxSection {
    pub u_given_y: Vec<Vec<f64>>,
    pub v_given_u: Vec<Vec<f64>>,
}

#[derive(Debug, Clone, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RegionSection {
    pub variant: Option<String>,
    pub u_cardinality: Option<usize>,
    pub v_cardinality: Option<usize>,
    pub r_i_grid: Option<Vec<f64>>,
    pub grid_steps: Option<usize>,
    pub refinement_rounds: Option<usize>,
    pub tolerance: Option<f64>,
    pub max_candidates: Option<u64>,
}

#[derive(Debug, Clone, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SimulateSection {
    pub n: Option<usize>,
    pub n_list: Option<Vec<usize>>,
    pub delta_rate: Option<f64>,
    pub typicality_delta: Option<f64>,
    pub trials: Option<usize>,
    pub identified: Option<String>,
    pub codebook: Option<String>,
    pub permute: Option<bool>,
    pub exact_budget: Option<u64>,
    pub counts: Option<Counts>,
}

/// Explicit code sizes replacing the derived ones.
#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Counts {
    pub m_i: usize,
    pub m_s: usize,
    pub n_v: usize,
    pub n_b: usize,
}

/// Region settings after defaults.
#[derive(Debug, Clone, Serialize)]
pub struct RegionResolved {
    pub variant: String,
    pub u_cardinality: usize,
    pub v_cardinality: usize,
    pub r_i_grid: Option<Vec<f64>>,
    pub grid_steps: usize,
    pub refinement_rounds: usize,
    pub tolerance: f64,
    pub max_candidates: u64,
}

/// Simulation settings after defaults.
#[derive(Debug, Clone, Serialize)]
pub struct SimulateResolved {
    pub n_list: Vec<usize>,
    pub delta_rate: f64,
    pub typicality_delta: Option<f64>,
    pub trials: usize,
    pub identified: String,
    pub codebook: String,
    pub permute: bool,
    pub exact_budget: u64,
    pub counts: Option<Counts>,
}

/// The whole configuration after defaults, as echoed in every report.
#[derive(Debug, Clone, Serialize)]
pub struct Resolved {
    pub schema_version: u32,
    pub seed: Option<u64>,
    pub model: ModelSection,
    pub aux: Option<AuxSection>,
    pub region: RegionResolved,
    pub simulate: Option<SimulateResolved>,
}

fn model_err(block: &str, e: bis_core::Error) -> LabError {
    if e.is_budget() {
        return LabError::Core(e);
    }
    LabError::Config(format!("{block}: {e}"))
}

impl Resolved {
    pub fn load(path: &Path) -> Result<Self, LabError> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| LabError::Usage(format!("cannot read config {}: {e}", path.display())))?;
        Self::parse(&text)
    }

    pub fn parse(text: &str) -> Result<Self, LabError> {
        let file: ConfigFile = toml::from_str(text).map_err(|e| LabError::Config(e.to_string()))?;
        Self::resolve(file)
    }

    pub fn resolve(file: ConfigFile) -> Result<Self, LabError> {
        if file.schema_version != SCHEMA_VERSION {
            return Err(LabError::Config(format!(
                "unsupported schema_version {} (expected {SCHEMA_VERSION})",
                file.schema_version
            )));
        }
        let defaults = SearchConfig::default();
        let region = file.region.unwrap_or_default();
        let variant = match region.variant.as_deref().unwrap_or("A1") {
            "A1" | "a1" => RegionVariant::A1,
            "A2" | "a2" => RegionVariant::A2,
            other => return Err(LabError::Config(format!("region.variant: unknown variant `{other}`"))),
        };
        let y_size = file.model.enroll.first().map_or(0, |r| r.len());
        let spec = RegionSpec::default_for(variant, y_size);
        let region = RegionResolved {
            variant: variant.to_string(),
            u_cardinality: region.u_cardinality.unwrap_or(spec.u_cardinality),
            v_cardinality: region.v_cardinality.unwrap_or(spec.v_cardinality),
            r_i_grid: region.r_i_grid,
            grid_steps: region.grid_steps.unwrap_or(defaults.grid_steps),
            refinement_rounds: region.refinement_rounds.unwrap_or(defaults.refinement_rounds),
            tolerance: region.tolerance.unwrap_or(defaults.tolerance),
            max_candidates: region.max_candidates.unwrap_or(defaults.max_candidates as u64),
        };
        let sim_defaults = SimOptions::default();
        let simulate = match file.simulate {
            None => None,
            Some(s) => {
                let n_list = match (s.n, s.n_list) {
                    (Some(n), None) => vec![n],
                    (None, Some(list)) => list,
                    (None, None) => return Err(LabError::Config("simulate: one of `n` or `n_list` is required".into())),
                    (Some(_), Some(_)) => {
                        return Err(LabError::Config("simulate: give either `n` or `n_list`, not both".into()))
                    }
                };
                if s.counts.is_some() && n_list.len() != 1 {
                    return Err(LabError::Config("simulate.counts: requires a single block length `n`".into()));
                }
                Some(SimulateResolved {
                    n_list,
                    delta_rate: s.delta_rate.ok_or_else(|| LabError::Config("simulate.delta_rate is required".into()))?,
                    typicality_delta: s.typicality_delta,
                    trials: s.trials.unwrap_or(sim_defaults.trials),
                    identified: s.identified.unwrap_or_else(|| "uniform".into()),
                    codebook: s.codebook.unwrap_or_else(|| "fixed".into()),
                    permute: s.permute.unwrap_or(sim_defaults.permute),
                    exact_budget: s.exact_budget.unwrap_or(sim_defaults.exact_budget as u64),
                    counts: s.counts,
                })
            }
        };
        let resolved =
            Self { schema_version: file.schema_version, seed: file.seed, model: file.model, aux: file.aux, region, simulate };
        // validate everything up front so that errors are config errors
        resolved.system_model()?;
        if resolved.aux.is_some() {
            resolved.aux_pair()?;
        }
        resolved.search_config()?;
        if let Some(s) = &resolved.simulate {
            sim_options(s)?;
        }
        Ok(resolved)
    }

    pub fn system_model(&self) -> Result<SystemModel, LabError> {
        let m = &self.model;
        let source = FiniteDistribution::new(m.source.clone()).map_err(|e| model_err("model.source", e))?;
        let enroll = Channel::new(m.enroll.clone()).map_err(|e| model_err("model.enroll", e))?;
        let identify = Channel::new(m.identify.clone()).map_err(|e| model_err("model.identify", e))?;
        SystemModel::new(source, enroll, identify).map_err(|e| model_err("model", e))
    }

    pub fn aux_pair(&self) -> Result<AuxiliaryPair, LabError> {
        let a = self.aux.as_ref().ok_or_else(|| LabError::Usage("this command needs an [aux] block".into()))?;
        let u = Channel::new(a.u_given_y.clone()).map_err(|e| model_err("aux.u_given_y", e))?;
        let v = Channel::new(a.v_given_u.clone()).map_err(|e| model_err("aux.v_given_u", e))?;
        let pair = AuxiliaryPair::new(u, v).map_err(|e| model_err("aux", e))?;
        pair.check_against(&self.system_model()?).map_err(|e| model_err("aux", e))?;
        Ok(pair)
    }

    pub fn search_config(&self) -> Result<SearchConfig, LabError> {
        let r = &self.region;
        let cfg = SearchConfig {
            grid_steps: r.grid_steps,
            refinement_rounds: r.refinement_rounds,
            tolerance: r.tolerance,
            max_candidates: r.max_candidates as u128,
        };
        cfg.validate().map_err(|e| model_err("region", e))?;
        Ok(cfg)
    }

    pub fn region_spec(&self) -> Result<RegionSpec, LabError> {
        let variant = if self.region.variant == "A2" { RegionVariant::A2 } else { RegionVariant::A1 };
        RegionSpec::new(variant, self.region.u_cardinality, self.region.v_cardinality, self.model.enroll[0].len())
            .map_err(|e| model_err("region", e))
    }

    pub fn simulate(&self) -> Result<&SimulateResolved, LabError> {
        self.simulate.as_ref().ok_or_else(|| LabError::Usage("this command needs a [simulate] block".into()))
    }
}

pub fn sim_options(s: &SimulateResolved) -> Result<SimOptions, LabError> {
    let identified = match s.identified.as_str() {
        "uniform" => IdentifiedMode::Uniform,
        "sweep" => IdentifiedMode::Sweep,
        other => return Err(LabError::Config(format!("simulate.identified: unknown mode `{other}`"))),
    };
    let codebook = match s.codebook.as_str() {
        "fixed" => CodebookMode::Fixed,
        "fresh" => CodebookMode::Fresh,
        other => return Err(LabError::Config(format!("simulate.codebook: unknown mode `{other}`"))),
    };
    if s.trials == 0 {
        return Err(LabError::Config("simulate.trials must be positive".into()));
    }
    Ok(SimOptions { trials: s.trials, identified, codebook, permute: s.permute, exact_budget: s.exact_budget as u128 })
}
