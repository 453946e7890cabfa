//! The five subcommands. Each one turns a resolved config into a JSON value
//! (or CSV text) and never touches the file system itself.

use bis_core::region::{boundary_sweep, check_equivalence, extreme_tuple_a2, reduction_checks, summarize};
use bis_core::sim::{achievability_trend, default_typicality, derive_params, run_trials, CodeParams};
use bis_core::{Executor, TypicalityParams};
use serde_json::{json, Value};

use crate::config::Resolved;
use crate::error::LabError;
use crate::report;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Command {
    Rates,
    Region,
    Simulate,
    Equiv,
    Reduce,
}

impl Command {
    pub fn name(self) -> &'static str {
        match self {
            Command::Rates => "rates",
            Command::Region => "region",
            Command::Simulate => "simulate",
            Command::Equiv => "equiv",
            Command::Reduce => "reduce",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Format {
    Json,
    Csv,
}

/// Rendered output of one command.
#[derive(Debug, Clone, PartialEq)]
pub struct Output {
    pub body: String,
    /// Provenance envelope to store next to a CSV body.
    pub meta: Option<String>,
}

pub fn rates(cfg: &Resolved) -> Result<Value, LabError> {
    let s = summarize(&cfg.system_model()?, &cfg.aux_pair()?)?;
    Ok(json!({ "summary": report::summary(&s), "extreme_tuple_a2": report::tuple(&extreme_tuple_a2(&s)) }))
}

fn region_rows<E: Executor>(cfg: &Resolved, exec: &E) -> Result<Vec<bis_core::region::BoundaryPoint>, LabError> {
    let grid = cfg
        .region
        .r_i_grid
        .as_ref()
        .ok_or_else(|| LabError::Usage("region needs `region.r_i_grid`".into()))?;
    Ok(boundary_sweep(&cfg.system_model()?, &cfg.region_spec()?, &cfg.search_config()?, grid, exec)?)
}

pub fn simulate<E: Executor>(cfg: &Resolved, exec: &E) -> Result<Value, LabError> {
    let seed = cfg.seed.ok_or_else(|| LabError::Config("simulate needs a top-level `seed`".into()))?;
    let sim = cfg.simulate()?;
    let model = cfg.system_model()?;
    let aux = cfg.aux_pair()?;
    let opts = crate::config::sim_options(sim)?;
    let typ = match sim.typicality_delta {
        Some(d) => TypicalityParams::new(d).map_err(|e| LabError::Config(format!("simulate.typicality_delta: {e}")))?,
        None => default_typicality(&model, &aux)?,
    };
    if let [n] = sim.n_list[..] {
        let params = match sim.counts {
            Some(c) => CodeParams::new(n, sim.delta_rate, c.m_i, c.m_s, c.n_v, c.n_b)
                .map_err(|e| LabError::Config(format!("simulate.counts: {e}")))?,
            None => derive_params(&model, &aux, n, sim.delta_rate)?,
        };
        let r = run_trials(&model, &aux, &params, &typ, &opts, seed, exec)?;
        return Ok(json!({ "params": report::params(&params), "report": report::sim_report(&r) }));
    }
    let points = achievability_trend(&model, &aux, sim.delta_rate, Some(&typ), &sim.n_list, &opts, seed, exec)?;
    Ok(report::trend(&points))
}

pub fn equiv<E: Executor>(cfg: &Resolved, exec: &E) -> Result<Value, LabError> {
    let r = check_equivalence(&cfg.system_model()?, &cfg.search_config()?, exec)?;
    Ok(report::equivalence(&r))
}

pub fn reduce<E: Executor>(cfg: &Resolved, exec: &E) -> Result<Value, LabError> {
    let r = reduction_checks(&cfg.system_model()?, &cfg.search_config()?, exec)?;
    Ok(report::reductions(&r))
}

/// Runs `command` and renders it in `format`.
pub fn execute<E: Executor>(command: Command, format: Format, cfg: &Resolved, exec: &E) -> Result<Output, LabError> {
    if format == Format::Csv && command != Command::Region {
        return Err(LabError::Usage(format!("--format csv is only available for `region`, not `{}`", command.name())));
    }
    let result = match command {
        Command::Rates => rates(cfg)?,
        Command::Region => {
            let rows = region_rows(cfg, exec)?;
            let variant = cfg.region.variant.as_str();
            let steps = cfg.region.grid_steps;
            if format == Format::Csv {
                let meta = report::envelope(command.name(), cfg, json!({ "rows": rows.len(), "format": "csv", "convex_hull": false }));
                return Ok(Output {
                    body: report::boundary_csv(&rows, steps, variant)?,
                    meta: Some(report::to_json_text(&meta)?),
                });
            }
            report::boundary_json(&rows, steps, variant)
        }
        Command::Simulate => simulate(cfg, exec)?,
        Command::Equiv => equiv(cfg, exec)?,
        Command::Reduce => reduce(cfg, exec)?,
    };
    let body = report::to_json_text(&report::envelope(command.name(), cfg, result))?;
    Ok(Output { body, meta: None })
}
