//! Grid-plus-refinement search over auxiliary channels.

use alloc::vec;
use alloc::vec::Vec;

use super::eval::{InfoEvaluator, ULaws, UStats};
use super::{RateTuple, RegionSpec, RegionVariant, SearchConfig};
use crate::error::{Error, Result};
use crate::exec::Executor;
use crate::prob::{AuxiliaryPair, Channel, SystemModel};
use crate::simplex::{ChannelGrid, Refiner};

/// Differences below this are ties.
const TIE: f64 = 1e-12;

#[derive(Debug, Clone, PartialEq)]
pub enum Witness {
    /// `P(u|y)` for A1.
    U(Channel),
    /// `(P(u|y), P(v|u))` for A2.
    Pair(AuxiliaryPair),
}

/// Outcome of an A1 membership search.
#[derive(Debug, Clone, PartialEq)]
pub struct Membership {
    pub member: bool,
    /// Smallest worst-constraint violation found, in bits.
    pub violation: f64,
    /// `P(u|y)` attaining `violation`.
    pub witness: Channel,
    pub grid_steps: usize,
    pub u_cardinality: usize,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepValues {
    pub max_r_s: f64,
    pub min_r_j: f64,
    pub min_r_l: f64,
    pub witness: Witness,
}

/// One row of a boundary sweep; `values` is `None` when `r_i` is
/// infeasible at this quantization.
#[derive(Debug, Clone, PartialEq)]
pub struct BoundaryPoint {
    pub r_i: f64,
    pub values: Option<SweepValues>,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub(crate) struct Score {
    pub r_s: f64,
    pub r_l: f64,
    pub r_j: f64,
}

/// Larger `r_s` first, then smaller `r_l`, then (optionally) smaller `r_j`.
pub(crate) fn better(a: &Score, b: &Score, use_rj: bool) -> bool {
    if a.r_s > b.r_s + TIE {
        return true;
    }
    if a.r_s < b.r_s - TIE {
        return false;
    }
    if a.r_l < b.r_l - TIE {
        return true;
    }
    if a.r_l > b.r_l + TIE {
        return false;
    }
    use_rj && a.r_j < b.r_j - TIE
}

fn nonneg(v: f64) -> f64 {
    if v > 0.0 {
        v
    } else {
        0.0
    }
}

pub(crate) fn a1_score(s: &UStats, r_i: f64, tol: f64) -> Option<Score> {
    if s.i_zu < r_i - tol {
        return None;
    }
    Some(Score { r_s: nonneg(s.i_zu - r_i), r_l: nonneg(s.excess() + r_i), r_j: s.i_yu })
}

/// A2 score after degrading `V` until `I(Z;V) = r_i`, which any feasible
/// pair allows.
fn a2_degraded_score(s: &UStats, i_zv: f64, r_i: f64, tol: f64) -> Option<Score> {
    if i_zv < r_i - tol {
        return None;
    }
    a2_score(s, r_i, r_i, tol)
}

/// Mixes every row of `v` toward the uniform row by the largest weight that
/// keeps `I(Z;V) >= r_i`.
fn degrade_v(ev: &InfoEvaluator, laws: &ULaws, v: &mut [f64], nv: usize, r_i: f64) {
    if ev.i_zv(laws, v, nv) <= r_i {
        return;
    }
    let base = v.to_vec();
    let mix = |lambda: f64, out: &mut [f64]| {
        for (o, &b) in out.iter_mut().zip(&base) {
            *o = (1.0 - lambda) * b + lambda / nv as f64;
        }
    };
    let (mut lo, mut hi) = (0.0, 1.0);
    for _ in 0..64 {
        let mid = 0.5 * (lo + hi);
        mix(mid, v);
        if ev.i_zv(laws, v, nv) >= r_i {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    mix(lo, v);
}

pub(crate) fn a2_score(s: &UStats, i_zv: f64, r_i: f64, tol: f64) -> Option<Score> {
    if i_zv < r_i - tol {
        return None;
    }
    let zv = i_zv.max(r_i);
    Some(Score { r_s: nonneg(s.i_zu - zv), r_l: nonneg(s.i_xu - s.i_zu + zv), r_j: s.i_yu })
}

/// Worst A1 constraint violation of `t` under a fixed `U`.
pub(crate) fn a1_violation(s: &UStats, t: &RateTuple) -> f64 {
    let v = (t.r_i + t.r_s - s.i_zu).max(s.i_yu - t.r_j).max(s.excess() + t.r_i - t.r_l);
    nonneg(v)
}

/// Worst A2 constraint violation of `t` under a fixed pair.
pub(crate) fn a2_violation(s: &UStats, i_zv: f64, t: &RateTuple) -> f64 {
    let v = (t.r_i - i_zv)
        .max(t.r_s - (s.i_zu - i_zv))
        .max(s.i_yu - t.r_j)
        .max(s.i_xu - s.i_zu + i_zv - t.r_l);
    nonneg(v)
}

/// Sum of squared A1 constraint violations; a smooth objective for
/// refinement.
pub(crate) fn a1_penalty(s: &UStats, t: &RateTuple) -> f64 {
    let sq = |v: f64| nonneg(v) * nonneg(v);
    sq(t.r_i + t.r_s - s.i_zu) + sq(s.i_yu - t.r_j) + sq(s.excess() + t.r_i - t.r_l)
}

pub(crate) fn a2_penalty(s: &UStats, i_zv: f64, t: &RateTuple) -> f64 {
    let sq = |v: f64| nonneg(v) * nonneg(v);
    sq(t.r_i - i_zv) + sq(t.r_s - (s.i_zu - i_zv)) + sq(s.i_yu - t.r_j) + sq(s.i_xu - s.i_zu + i_zv - t.r_l)
}

/// Penalty-driven refinement result: `(penalty, violation)`.
pub(crate) fn by_penalty(a: &(f64, f64), b: &(f64, f64)) -> bool {
    a.0 < b.0
}

/// Every `P(u|y)` on the grid with its information quantities, plus the
/// Pareto front for (max `I(Z;U)`, min `I(Y;U)`, min `I(X;U) - I(Z;U)`).
pub(crate) struct A1Grid {
    pub grid: ChannelGrid,
    pub nu: usize,
    pub stats: Vec<UStats>,
    pub front: Vec<usize>,
}

impl A1Grid {
    pub fn build<E: Executor>(ev: &InfoEvaluator, nu: usize, cfg: &SearchConfig, exec: &E) -> Result<Self> {
        let grid = ChannelGrid::new(ev.y_size(), nu, cfg.grid_steps, cfg.max_candidates)?;
        let stats = exec.map_range(grid.len(), |i| ev.u_stats(&grid.channel(i), nu).0);
        let front = pareto_front(&stats);
        Ok(Self { grid, nu, stats, front })
    }

    /// Front point with the smallest violation; ties go to the earliest.
    pub fn best_match(&self, t: &RateTuple) -> (usize, f64) {
        let mut best = (self.front[0], f64::INFINITY);
        for &i in &self.front {
            let v = a1_violation(&self.stats[i], t);
            if v < best.1 {
                best = (i, v);
            }
        }
        best
    }

    /// Membership of `t`: front scan, then refinement of the best point.
    pub fn membership(&self, ev: &InfoEvaluator, t: &RateTuple, cfg: &SearchConfig) -> (bool, f64, Vec<f64>) {
        let (idx, v) = self.best_match(t);
        let mut point = self.grid.channel(idx);
        if v <= cfg.tolerance || cfg.refinement_rounds == 0 {
            return (v <= cfg.tolerance, v, point);
        }
        let widths = vec![self.nu; ev.y_size()];
        let refiner = Refiner::new(cfg.refinement_rounds, cfg.grid_steps);
        let nu = self.nu;
        let refined = refiner
            .run(
                &mut point,
                &widths,
                &[],
                |p| {
                    let s = ev.u_stats(p, nu).0;
                    Some((a1_penalty(&s, t), a1_violation(&s, t)))
                },
                by_penalty,
            )
            .map_or(v, |r| r.1);
        (refined <= cfg.tolerance, refined, point)
    }
}

fn pareto_front(stats: &[UStats]) -> Vec<usize> {
    let mut order: Vec<usize> = (0..stats.len()).collect();
    order.sort_by(|&a, &b| {
        let (sa, sb) = (&stats[a], &stats[b]);
        sb.i_zu
            .total_cmp(&sa.i_zu)
            .then(sa.i_yu.total_cmp(&sb.i_yu))
            .then(sa.excess().total_cmp(&sb.excess()))
            .then(a.cmp(&b))
    });
    let mut front: Vec<usize> = Vec::new();
    for i in order {
        let s = &stats[i];
        let dominated = front.iter().any(|&k| {
            let f = &stats[k];
            f.i_zu >= s.i_zu && f.i_yu <= s.i_yu && f.excess() <= s.excess()
        });
        if !dominated {
            front.push(i);
        }
    }
    front
}

/// Searches `P(u|y)` with `|U| = |Y|+2` for a witness of `tuple` in A1.
/// `member == false` means no witness at this quantization, not a proof of
/// non-membership.
pub fn is_member_a1<E: Executor>(
    model: &SystemModel,
    tuple: &RateTuple,
    cfg: &SearchConfig,
    exec: &E,
) -> Result<Membership> {
    cfg.validate()?;
    if ![tuple.r_i, tuple.r_s, tuple.r_j, tuple.r_l].iter().all(|v| v.is_finite()) {
        return Err(Error::param("rate tuple", "entries must be finite"));
    }
    let ev = InfoEvaluator::new(model);
    let nu = model.y_size() + 2;
    let grid = A1Grid::build(&ev, nu, cfg, exec)?;
    let (member, violation, point) = grid.membership(&ev, tuple, cfg);
    Ok(Membership {
        member,
        violation,
        witness: Channel::from_flat(model.y_size(), nu, point)?,
        grid_steps: cfg.grid_steps,
        u_cardinality: nu,
    })
}

/// For each `r_i`, the largest `r_s` and, among maximizers, the
/// lexicographically smallest `(r_l, r_j)`.
pub fn boundary_sweep<E: Executor>(
    model: &SystemModel,
    spec: &RegionSpec,
    cfg: &SearchConfig,
    r_i_grid: &[f64],
    exec: &E,
) -> Result<Vec<BoundaryPoint>> {
    cfg.validate()?;
    check_r_i_grid(r_i_grid)?;
    // revalidate: the fields are public
    RegionSpec::new(spec.variant, spec.u_cardinality, spec.v_cardinality, model.y_size())?;
    let ev = InfoEvaluator::new(model);
    match spec.variant {
        RegionVariant::A1 => a1_sweep(&ev, spec.u_cardinality, cfg, r_i_grid, true, exec),
        RegionVariant::A2 => a2_sweep(&ev, spec.u_cardinality, spec.v_cardinality, cfg, r_i_grid, exec),
    }
}

pub(crate) fn check_r_i_grid(r_i_grid: &[f64]) -> Result<()> {
    if r_i_grid.is_empty() {
        return Err(Error::param("r_i_grid", "empty grid"));
    }
    if let Some(r) = r_i_grid.iter().find(|r| !r.is_finite() || **r < 0.0) {
        return Err(Error::param("r_i_grid", alloc::format!("entries must be finite and nonnegative, got {r}")));
    }
    Ok(())
}

/// A1 sweep at an arbitrary `|U|` (no cardinality-bound check).
pub(crate) fn a1_sweep<E: Executor>(
    ev: &InfoEvaluator,
    nu: usize,
    cfg: &SearchConfig,
    r_i_grid: &[f64],
    use_rj: bool,
    exec: &E,
) -> Result<Vec<BoundaryPoint>> {
    let ny = ev.y_size();
    let grid = ChannelGrid::new(ny, nu, cfg.grid_steps, cfg.max_candidates)?;
    let stats = exec.map_range(grid.len(), |i| ev.u_stats(&grid.channel(i), nu).0);
    let rows = exec.map_range(r_i_grid.len(), |k| {
        let r_i = r_i_grid[k];
        let mut best: Option<(usize, Score)> = None;
        for (i, s) in stats.iter().enumerate() {
            if let Some(sc) = a1_score(s, r_i, cfg.tolerance) {
                if best.as_ref().is_none_or(|(_, b)| better(&sc, b, use_rj)) {
                    best = Some((i, sc));
                }
            }
        }
        let (idx, score) = best?;
        let mut point = grid.channel(idx);
        let widths = vec![nu; ny];
        let score = Refiner::new(cfg.refinement_rounds, cfg.grid_steps)
            .run(&mut point, &widths, &[], |p| a1_score(&ev.u_stats(p, nu).0, r_i, cfg.tolerance), |a, b| {
                better(a, b, use_rj)
            })
            .unwrap_or(score);
        Some((score, point))
    });
    r_i_grid
        .iter()
        .zip(rows)
        .map(|(&r_i, row)| {
            let values = match row {
                None => None,
                Some((score, point)) => Some(SweepValues {
                    max_r_s: score.r_s,
                    min_r_j: score.r_j,
                    min_r_l: score.r_l,
                    witness: Witness::U(Channel::from_flat(ny, nu, point)?),
                }),
            };
            Ok(BoundaryPoint { r_i, values })
        })
        .collect()
}

pub(crate) fn a2_sweep<E: Executor>(
    ev: &InfoEvaluator,
    nu: usize,
    nv: usize,
    cfg: &SearchConfig,
    r_i_grid: &[f64],
    exec: &E,
) -> Result<Vec<BoundaryPoint>> {
    let ny = ev.y_size();
    let ugrid = ChannelGrid::new(ny, nu, cfg.grid_steps, cfg.max_candidates)?;
    let vgrid = ChannelGrid::new(nu, nv, cfg.grid_steps, cfg.max_candidates)?;
    let pairs = (ugrid.len() as u128).saturating_mul(vgrid.len() as u128);
    if pairs > cfg.max_candidates {
        return Err(Error::BudgetExceeded { guard: "auxiliary pair grid size", required: pairs, limit: cfg.max_candidates });
    }
    let per_u = exec.map_range(ugrid.len(), |ui| {
        let (stats, laws) = ev.u_stats(&ugrid.channel(ui), nu);
        let mut best: Vec<Option<(usize, Score)>> = vec![None; r_i_grid.len()];
        let mut v = vec![0.0; nu * nv];
        for vi in 0..vgrid.len() {
            vgrid.write_channel(vi, &mut v);
            let zv = ev.i_zv(&laws, &v, nv);
            for (k, &r_i) in r_i_grid.iter().enumerate() {
                if let Some(sc) = a2_degraded_score(&stats, zv, r_i, cfg.tolerance) {
                    if best[k].as_ref().is_none_or(|(_, b)| better(&sc, b, true)) {
                        best[k] = Some((vi, sc));
                    }
                }
            }
        }
        best
    });
    let mut best: Vec<Option<(usize, usize, Score)>> = vec![None; r_i_grid.len()];
    for (ui, row) in per_u.iter().enumerate() {
        for (k, cand) in row.iter().enumerate() {
            if let Some((vi, sc)) = cand {
                if best[k].as_ref().is_none_or(|(_, _, b)| better(sc, b, true)) {
                    best[k] = Some((ui, *vi, *sc));
                }
            }
        }
    }
    let split = ny * nu;
    let mut widths = vec![nu; ny];
    widths.extend(core::iter::repeat_n(nv, nu));
    let rows = exec.map_range(r_i_grid.len(), |k| {
        let r_i = r_i_grid[k];
        let (ui, vi, score) = best[k]?;
        let mut point = ugrid.channel(ui);
        point.extend(vgrid.channel(vi));
        let score = Refiner::new(cfg.refinement_rounds, cfg.grid_steps)
            .run(
                &mut point,
                &widths,
                &[],
                |p| {
                    let (s, laws) = ev.u_stats(&p[..split], nu);
                    a2_degraded_score(&s, ev.i_zv(&laws, &p[split..], nv), r_i, cfg.tolerance)
                },
                |a, b| better(a, b, true),
            )
            .unwrap_or(score);
        let (s, laws) = ev.u_stats(&point[..split], nu);
        degrade_v(ev, &laws, &mut point[split..], nv, r_i);
        let score = a2_score(&s, ev.i_zv(&laws, &point[split..], nv), r_i, cfg.tolerance).unwrap_or(score);
        Some((score, point))
    });
    r_i_grid
        .iter()
        .zip(rows)
        .map(|(&r_i, row)| {
            let values = match row {
                None => None,
                Some((score, point)) => {
                    let u = Channel::from_flat(ny, nu, point[..split].to_vec())?;
                    let v = Channel::from_flat(nu, nv, point[split..].to_vec())?;
                    Some(SweepValues {
                        max_r_s: score.r_s,
                        min_r_j: score.r_j,
                        min_r_l: score.r_l,
                        witness: Witness::Pair(AuxiliaryPair::new(u, v)?),
                    })
                }
            };
            Ok(BoundaryPoint { r_i, values })
        })
        .collect()
}
