//! JSON and CSV rendering of kernel results.

use bis_core::region::{
    BoundaryPoint, DirectionReport, EquivalenceReport, ReductionCheck, ReductionReport, Witness,
};
use bis_core::sim::{CodeParams, SimReport, TrendPoint};
use bis_core::{Channel, MutualInfoSummary, RateTuple};
use serde_json::{json, Value};

use crate::config::{Resolved, SCHEMA_VERSION};
use crate::error::LabError;

pub const TOOL: &str = "bislab";

/// Wraps a command result with provenance.
pub fn envelope(command: &str, config: &Resolved, result: Value) -> Value {
    json!({
        "tool": TOOL,
        "version": env!("CARGO_PKG_VERSION"),
        "schema_version": SCHEMA_VERSION,
        "command": command,
        "seed": config.seed,
        "config": config,
        "result": result,
    })
}

pub fn to_json_text(v: &Value) -> Result<String, LabError> {
    let mut s = serde_json::to_string_pretty(v).map_err(|e| LabError::Internal(e.to_string()))?;
    s.push('\n');
    Ok(s)
}

/// At most 12 significant digits, plain decimal where short enough.
pub fn fmt_num(x: f64) -> String {
    if !x.is_finite() {
        return x.to_string();
    }
    let r: f64 = format!("{x:.11e}").parse().expect("float round trip");
    if r == 0.0 {
        return "0".into();
    }
    format!("{r}")
}

pub fn summary(s: &MutualInfoSummary) -> Value {
    json!({
        "i_zu": s.i_zu,
        "i_zv": s.i_zv,
        "i_yu": s.i_yu,
        "i_yv": s.i_yv,
        "i_xu": s.i_xu,
        "i_yu_given_v": s.i_yu_given_v,
        "i_zu_given_v": s.i_zu_given_v,
    })
}

pub fn tuple(t: &RateTuple) -> Value {
    json!({ "r_i": t.r_i, "r_s": t.r_s, "r_j": t.r_j, "r_l": t.r_l })
}

fn channel(c: &Channel) -> Value {
    json!(c.rows())
}

pub fn boundary_json(rows: &[BoundaryPoint], grid_steps: usize, variant: &str) -> Value {
    let rows: Vec<Value> = rows
        .iter()
        .map(|row| match &row.values {
            None => json!({ "r_i": row.r_i, "feasible": false }),
            Some(v) => {
                let witness = match &v.witness {
                    Witness::U(u) => json!({ "u_given_y": channel(u) }),
                    Witness::Pair(p) => json!({ "u_given_y": channel(&p.u_given_y), "v_given_u": channel(&p.v_given_u) }),
                };
                json!({
                    "r_i": row.r_i,
                    "feasible": true,
                    "max_r_s": v.max_r_s,
                    "min_r_j": v.min_r_j,
                    "min_r_l": v.min_r_l,
                    "witness": witness,
                })
            }
        })
        .collect();
    json!({ "variant": variant, "grid_steps": grid_steps, "convex_hull": false, "rows": rows })
}

pub fn boundary_csv(rows: &[BoundaryPoint], grid_steps: usize, variant: &str) -> Result<String, LabError> {
    let mut w = csv::Writer::from_writer(Vec::new());
    let csv_err = |e: csv::Error| LabError::Internal(e.to_string());
    w.write_record(["r_i", "max_r_s", "min_r_j", "min_r_l", "feasible", "grid_steps", "variant"]).map_err(csv_err)?;
    for row in rows {
        let (s, j, l, feasible) = match &row.values {
            Some(v) => (fmt_num(v.max_r_s), fmt_num(v.min_r_j), fmt_num(v.min_r_l), "true"),
            None => (String::new(), String::new(), String::new(), "false"),
        };
        w.write_record([fmt_num(row.r_i), s, j, l, feasible.into(), grid_steps.to_string(), variant.into()])
            .map_err(csv_err)?;
    }
    let bytes = w.into_inner().map_err(|e| LabError::Internal(e.to_string()))?;
    String::from_utf8(bytes).map_err(|e| LabError::Internal(e.to_string()))
}

pub fn params(p: &CodeParams) -> Value {
    json!({
        "n": p.n,
        "delta_rate": p.delta_rate,
        "m_i": p.m_i,
        "m_s": p.m_s,
        "m_j_c": p.m_j_c,
        "m_j_g": p.m_j_g,
        "n_v": p.n_v,
        "n_u": p.n_u,
        "n_b": p.n_b,
        "clamped": p.clamped,
    })
}

pub fn sim_report(r: &SimReport) -> Value {
    json!({
        "trials": r.trials,
        "error_rate": r.error_rate,
        "error_rate_ci95": r.error_rate_ci95,
        "per_individual_error_rates": r.per_individual_error_rates,
        "enrollment_failures": r.enrollment_failures,
        "enrollments": r.enrollments,
        "exact_mode": r.exact_mode,
        "secrecy_leakage_bits": r.secrecy_leakage_bits,
        "privacy_leakage_rate": r.privacy_leakage_rate,
        "gs_privacy_leakage_rate": r.gs_privacy_leakage_rate,
        "gs_secret_entropy_bits": r.gs_secret_entropy_bits,
        "typicality_delta": r.typicality_delta,
        "params_echo": params(&r.params_echo),
    })
}

pub fn trend(points: &[TrendPoint]) -> Value {
    let rows: Vec<Value> = points
        .iter()
        .map(|p| {
            json!({
                "n": p.n,
                "target_privacy_rate": p.target_privacy_rate,
                "target_secrecy_leakage": p.target_secrecy_leakage,
                "report": sim_report(&p.report),
            })
        })
        .collect();
    json!({ "trend": rows })
}

fn direction(d: &DirectionReport) -> Value {
    json!({
        "checked": d.checked,
        "max_violation": d.max_violation,
        "worst": d.worst.as_ref().map(tuple),
    })
}

pub fn equivalence(r: &EquivalenceReport) -> Value {
    json!({
        "grid_steps": r.grid_steps,
        "tolerance": r.tolerance,
        "a1_u_cardinality": r.a1_u_cardinality,
        "a2_u_cardinality": r.a2_u_cardinality,
        "a2_v_cardinality": r.a2_v_cardinality,
        "a2_in_a1": direction(&r.a2_in_a1),
        "a1_in_a2": direction(&r.a1_in_a2),
        "max_violation": r.max_violation,
        "within_tolerance": r.within(r.tolerance),
    })
}

fn check(c: &ReductionCheck) -> Value {
    json!({ "max_deviation": c.max_deviation, "matches": c.matches })
}

pub fn reductions(r: &ReductionReport) -> Value {
    json!({
        "r_i_grid": r.r_i_grid,
        "tolerance": r.tolerance,
        "grid_steps": r.grid_steps,
        "noiseless_enrollment": check(&r.noiseless_enrollment),
        "single_individual": check(&r.single_individual),
        "single_individual_pointwise": r.single_individual_pointwise,
        "matches": r.noiseless_enrollment.matches && r.single_individual.matches,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn number_format() {
        assert_eq!(fmt_num(0.0), "0");
        assert_eq!(fmt_num(-0.0), "0");
        assert_eq!(fmt_num(1.0), "1");
        assert_eq!(fmt_num(0.1), "0.1");
        assert_eq!(fmt_num(0.5310044064107188), "0.531004406411");
        assert_eq!(fmt_num(1234567.891234567), "1234567.89123");
        assert_eq!(fmt_num(1e-20), "0.00000000000000000001");
    }

    #[test]
    fn csv_layout() {
        let rows = vec![BoundaryPoint { r_i: 0.25, values: None }];
        let text = boundary_csv(&rows, 8, "A1").unwrap();
        assert_eq!(text, "r_i,max_r_s,min_r_j,min_r_l,feasible,grid_steps,variant\n0.25,,,,false,8,A1\n");
    }
}
