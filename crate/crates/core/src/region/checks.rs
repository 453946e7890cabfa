//! Numerical consistency checks on the region descriptions: two-way
//! containment between A1 and A2, the two special-case reductions, and the
//! effect of enlarging `|U|` beyond its cardinality bound.

use alloc::vec;
use alloc::vec::Vec;

use super::eval::{InfoEvaluator, UStats};
use super::search::{a1_score, a1_sweep, a2_penalty, a2_violation, better, by_penalty, check_r_i_grid, A1Grid, BoundaryPoint, Score};
use super::{clamp_noise, summarize, RateTuple, SearchConfig};
use crate::error::{Error, Result};
use crate::exec::Executor;
use crate::math::plogp;
use crate::prob::{mutual_information, AuxiliaryPair, Channel, JointDistribution, SystemModel};
use crate::simplex::{ChannelGrid, Refiner};

/// Largest `|X|`, `|Y|`, `|Z|` accepted by the exhaustive checks.
pub const CHECK_ALPHABET_LIMIT: usize = 3;

fn alphabet_guard(model: &SystemModel) -> Result<()> {
    let largest = model.x_size().max(model.y_size()).max(model.z_size());
    if largest > CHECK_ALPHABET_LIMIT {
        return Err(Error::BudgetExceeded {
            guard: "check alphabet size",
            required: largest as u128,
            limit: CHECK_ALPHABET_LIMIT as u128,
        });
    }
    Ok(())
}

/// `I(Z;X)` of the model.
fn i_zx(model: &SystemModel) -> Result<f64> {
    let (nz, nx) = (model.z_size(), model.x_size());
    let mut mass = Vec::with_capacity(nz * nx);
    for z in 0..nz {
        for x in 0..nx {
            mass.push(model.source.prob(x) * model.identify.prob(x, z));
        }
    }
    let joint = JointDistribution::new(vec![nz, nx], mass)?;
    Ok(clamp_noise(mutual_information(&joint, &[0], &[1])?))
}

/// `{k/steps · I(Z;X) : k = 0..=steps}`; `I(Z;X)` bounds every feasible
/// identification rate.
fn default_r_i_grid(model: &SystemModel, steps: usize) -> Result<Vec<f64>> {
    let top = i_zx(model)?;
    Ok((0..=steps).map(|k| top * k as f64 / steps as f64).collect())
}

/// One direction of the containment check.
#[derive(Debug, Clone, PartialEq)]
pub struct DirectionReport {
    /// Number of extreme tuples tested.
    pub checked: usize,
    /// Largest (over tuples) of the smallest violation found for the tuple.
    pub max_violation: f64,
    /// Tuple attaining `max_violation`.
    pub worst: Option<RateTuple>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct EquivalenceReport {
    pub grid_steps: usize,
    pub tolerance: f64,
    pub a1_u_cardinality: usize,
    pub a2_u_cardinality: usize,
    pub a2_v_cardinality: usize,
    /// Every A2 grid corner tested for A1 membership.
    pub a2_in_a1: DirectionReport,
    /// Every A1 grid corner, split at each grid point, matched by an A2 pair.
    pub a1_in_a2: DirectionReport,
    pub max_violation: f64,
}

impl EquivalenceReport {
    pub fn within(&self, bound: f64) -> bool {
        self.max_violation <= bound
    }
}

fn merge_direction(parts: Vec<(usize, f64, Option<RateTuple>)>) -> DirectionReport {
    let mut out = DirectionReport { checked: 0, max_violation: 0.0, worst: None };
    for (n, v, t) in parts {
        out.checked += n;
        if t.is_some() && (out.worst.is_none() || v > out.max_violation) {
            out.max_violation = v;
            out.worst = t;
        }
    }
    out
}

/// Two-way containment between A1 and A2 at the quantization of `cfg`.
///
/// * A2 in A1: every pair on the grid `|U| = |Y|+1`, `|V| = 2` yields its
///   A2 corner, which is searched for in A1 with `|U| = |Y|+2`.
/// * A1 in A2: every `U` on the A1 grid yields the corners
///   `(θ I(Z;U), (1-θ) I(Z;U), I(Y;U), I(X;U) - I(Z;U) + θ I(Z;U))` for
///   `θ = k/steps`. Each is matched with the same `U` and a `V` that erases
///   `U` with probability `ε = j/steps` (`|V| = |U|+1`), refined over the
///   full `P(v|u)` when the grid match misses.
pub fn check_equivalence<E: Executor>(model: &SystemModel, cfg: &SearchConfig, exec: &E) -> Result<EquivalenceReport> {
    cfg.validate()?;
    alphabet_guard(model)?;
    let ev = InfoEvaluator::new(model);
    let ny = model.y_size();
    let a1_nu = ny + 2;
    let a1 = A1Grid::build(&ev, a1_nu, cfg, exec)?;

    let (a2_nu, a2_nv) = (ny + 1, 2);
    let ugrid = ChannelGrid::new(ny, a2_nu, cfg.grid_steps, cfg.max_candidates)?;
    let vgrid = ChannelGrid::new(a2_nu, a2_nv, cfg.grid_steps, cfg.max_candidates)?;
    let pairs = (ugrid.len() as u128).saturating_mul(vgrid.len() as u128);
    if pairs > cfg.max_candidates {
        return Err(Error::BudgetExceeded { guard: "auxiliary pair grid size", required: pairs, limit: cfg.max_candidates });
    }

    let a2_parts = exec.map_range(ugrid.len(), |ui| {
        let (s, laws) = ev.u_stats(&ugrid.channel(ui), a2_nu);
        let mut v = vec![0.0; a2_nu * a2_nv];
        let mut worst: (f64, Option<RateTuple>) = (0.0, None);
        for vi in 0..vgrid.len() {
            vgrid.write_channel(vi, &mut v);
            let zv = ev.i_zv(&laws, &v, a2_nv);
            let t = a2_corner(&s, zv);
            let (_, mut viol) = a1.best_match(&t);
            if viol > cfg.tolerance {
                viol = a1.membership(&ev, &t, cfg).1;
            }
            if worst.1.is_none() || viol > worst.0 {
                worst = (viol, Some(t));
            }
        }
        (vgrid.len(), worst.0, worst.1)
    });
    let a2_in_a1 = merge_direction(a2_parts);

    let steps = cfg.grid_steps;
    let nv = a1_nu + 1;
    let a1_parts = exec.map_range(a1.grid.len(), |i| {
        let (s, laws) = ev.u_stats(&a1.grid.channel(i), a1_nu);
        let erasures: Vec<(Vec<f64>, f64)> = (0..=steps)
            .map(|j| {
                let q = erasure_channel(a1_nu, j as f64 / steps as f64);
                let zv = ev.i_zv(&laws, &q, nv);
                (q, zv)
            })
            .collect();
        let mut worst: (f64, Option<RateTuple>) = (0.0, None);
        for k in 0..=steps {
            let theta = k as f64 / steps as f64;
            let t = a1_corner(&s, theta);
            let (mut best_j, mut viol) = (0, f64::INFINITY);
            for (j, (_, zv)) in erasures.iter().enumerate() {
                let v = a2_violation(&s, *zv, &t);
                if v < viol {
                    best_j = j;
                    viol = v;
                }
            }
            if viol > cfg.tolerance && cfg.refinement_rounds > 0 {
                let mut q = erasures[best_j].0.clone();
                let widths = vec![nv; a1_nu];
                viol = Refiner::new(cfg.refinement_rounds, steps)
                    .run(
                        &mut q,
                        &widths,
                        &[],
                        |p| {
                            let zv = ev.i_zv(&laws, p, nv);
                            Some((a2_penalty(&s, zv, &t), a2_violation(&s, zv, &t)))
                        },
                        by_penalty,
                    )
                    .map_or(viol, |r| r.1);
            }
            if worst.1.is_none() || viol > worst.0 {
                worst = (viol, Some(t));
            }
        }
        (steps + 1, worst.0, worst.1)
    });
    let a1_in_a2 = merge_direction(a1_parts);

    Ok(EquivalenceReport {
        grid_steps: cfg.grid_steps,
        tolerance: cfg.tolerance,
        a1_u_cardinality: a1_nu,
        a2_u_cardinality: a2_nu,
        a2_v_cardinality: a2_nv,
        max_violation: a2_in_a1.max_violation.max(a1_in_a2.max_violation),
        a2_in_a1,
        a1_in_a2,
    })
}

fn a2_corner(s: &UStats, zv: f64) -> RateTuple {
    let nonneg = |v: f64| if v > 0.0 { v } else { 0.0 };
    RateTuple { r_i: zv, r_s: nonneg(s.i_zu - zv), r_j: s.i_yu, r_l: nonneg(s.i_xu - s.i_zu + zv) }
}

fn a1_corner(s: &UStats, theta: f64) -> RateTuple {
    let r_i = theta * s.i_zu;
    RateTuple { r_i, r_s: s.i_zu - r_i, r_j: s.i_yu, r_l: s.excess() + r_i }
}

/// `P(v|u)` with `v = u` w.p. `1 - eps` and the extra symbol `nu` w.p. `eps`.
fn erasure_channel(nu: usize, eps: f64) -> Vec<f64> {
    let nv = nu + 1;
    let mut q = vec![0.0; nu * nv];
    for u in 0..nu {
        q[u * nv + u] = 1.0 - eps;
        q[u * nv + nu] = eps;
    }
    q
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ReductionCheck {
    pub max_deviation: f64,
    pub matches: bool,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ReductionReport {
    pub r_i_grid: Vec<f64>,
    pub tolerance: f64,
    pub grid_steps: usize,
    /// A1 with `Y` replaced by `X` and `R_J` ignored, against the direct
    /// two-constraint region.
    pub noiseless_enrollment: ReductionCheck,
    /// The `R_I = 0` row of A1 against the single-individual region.
    pub single_individual: ReductionCheck,
    /// Largest per-grid-point gap between the two `R_I = 0` corner formulas.
    pub single_individual_pointwise: f64,
}

fn row_deviation(a: &BoundaryPoint, b: &BoundaryPoint, with_rj: bool) -> f64 {
    match (&a.values, &b.values) {
        (None, None) => 0.0,
        (Some(x), Some(y)) => {
            let d = (x.max_r_s - y.max_r_s).abs().max((x.min_r_l - y.min_r_l).abs());
            if with_rj {
                d.max((x.min_r_j - y.min_r_j).abs())
            } else {
                d
            }
        }
        _ => f64::INFINITY,
    }
}

/// Direct evaluation of `I(Z;U)` and `I(X;U)` for `P(u|x)`, without a `Y`
/// axis.
struct TwoConstraint<'a> {
    model: &'a SystemModel,
    h_z: f64,
    h_x: f64,
}

impl<'a> TwoConstraint<'a> {
    fn new(model: &'a SystemModel) -> Self {
        let mut p_z = vec![0.0; model.z_size()];
        for x in 0..model.x_size() {
            for (z, pz) in p_z.iter_mut().enumerate() {
                *pz += model.source.prob(x) * model.identify.prob(x, z);
            }
        }
        let h_z = p_z.iter().map(|&p| plogp(p)).sum();
        let h_x = model.source.probs().iter().map(|&p| plogp(p)).sum();
        Self { model, h_z, h_x }
    }

    /// `(I(Z;U), I(X;U))`.
    fn eval(&self, u_given_x: &[f64], nu: usize) -> (f64, f64) {
        let (nx, nz) = (self.model.x_size(), self.model.z_size());
        let mut p_u = vec![0.0; nu];
        let mut h_xu = 0.0;
        let mut p_zu = vec![0.0; nz * nu];
        for x in 0..nx {
            let px = self.model.source.prob(x);
            for u in 0..nu {
                let p = px * u_given_x[x * nu + u];
                p_u[u] += p;
                h_xu += plogp(p);
                for z in 0..nz {
                    p_zu[z * nu + u] += p * self.model.identify.prob(x, z);
                }
            }
        }
        let h_u: f64 = p_u.iter().map(|&p| plogp(p)).sum();
        let h_zu: f64 = p_zu.iter().map(|&p| plogp(p)).sum();
        let nonneg = |v: f64| if v > 0.0 { v } else { 0.0 };
        (nonneg(self.h_z + h_u - h_zu), nonneg(self.h_x + h_u - h_xu))
    }

    fn score(&self, u_given_x: &[f64], nu: usize, r_i: f64, tol: f64) -> Option<Score> {
        let (zu, xu) = self.eval(u_given_x, nu);
        if zu < r_i - tol {
            return None;
        }
        let nonneg = |v: f64| if v > 0.0 { v } else { 0.0 };
        Some(Score { r_s: nonneg(zu - r_i), r_l: nonneg(nonneg(xu - zu) + r_i), r_j: 0.0 })
    }
}

fn two_constraint_boundary<E: Executor>(
    model: &SystemModel,
    nu: usize,
    cfg: &SearchConfig,
    r_i_grid: &[f64],
    exec: &E,
) -> Result<Vec<BoundaryPoint>> {
    let tc = TwoConstraint::new(model);
    let nx = model.x_size();
    let grid = ChannelGrid::new(nx, nu, cfg.grid_steps, cfg.max_candidates)?;
    let rows = exec.map_range(r_i_grid.len(), |k| {
        let r_i = r_i_grid[k];
        let mut best: Option<(usize, Score)> = None;
        let mut w = vec![0.0; nx * nu];
        for i in 0..grid.len() {
            grid.write_channel(i, &mut w);
            if let Some(sc) = tc.score(&w, nu, r_i, cfg.tolerance) {
                if best.as_ref().is_none_or(|(_, b)| better(&sc, b, false)) {
                    best = Some((i, sc));
                }
            }
        }
        let (idx, score) = best?;
        let mut point = grid.channel(idx);
        let score = Refiner::new(cfg.refinement_rounds, cfg.grid_steps)
            .run(&mut point, &vec![nu; nx], &[], |p| tc.score(p, nu, r_i, cfg.tolerance), |a, b| better(a, b, false))
            .unwrap_or(score);
        Some((score, point))
    });
    r_i_grid
        .iter()
        .zip(rows)
        .map(|(&r_i, row)| {
            let values = match row {
                None => None,
                Some((s, point)) => Some(super::SweepValues {
                    max_r_s: s.r_s,
                    min_r_j: 0.0,
                    min_r_l: s.r_l,
                    witness: super::Witness::U(Channel::from_flat(nx, nu, point)?),
                }),
            };
            Ok(BoundaryPoint { r_i, values })
        })
        .collect()
}

/// `(R_S, R_J, R_L) = (I(Z;U), I(Y;U), I(X;U) - I(Z;U))` through the full
/// composed joint.
fn single_individual_corner(model: &SystemModel, u_given_y: &[f64], nu: usize) -> Result<Score> {
    let u = Channel::from_flat(model.y_size(), nu, u_given_y.to_vec())?;
    let s = summarize(model, &AuxiliaryPair::with_constant_v(u)?)?;
    let nonneg = |v: f64| if v > 0.0 { v } else { 0.0 };
    Ok(Score { r_s: s.i_zu, r_l: nonneg(s.i_xu - s.i_zu), r_j: s.i_yu })
}

fn single_individual_boundary<E: Executor>(
    model: &SystemModel,
    nu: usize,
    cfg: &SearchConfig,
    exec: &E,
) -> Result<(Score, Vec<Score>)> {
    let grid = ChannelGrid::new(model.y_size(), nu, cfg.grid_steps, cfg.max_candidates)?;
    let corners: Vec<Score> =
        exec.map_range(grid.len(), |i| single_individual_corner(model, &grid.channel(i), nu)).into_iter().collect::<Result<_>>()?;
    let mut best = (0usize, corners[0]);
    for (i, c) in corners.iter().enumerate().skip(1) {
        if better(c, &best.1, true) {
            best = (i, *c);
        }
    }
    let mut point = grid.channel(best.0);
    let score = Refiner::new(cfg.refinement_rounds, cfg.grid_steps)
        .run(&mut point, &vec![nu; model.y_size()], &[], |p| single_individual_corner(model, p, nu).ok(), |a, b| {
            better(a, b, true)
        })
        .unwrap_or(best.1);
    Ok((score, corners))
}

/// Checks the two special cases of A1: noiseless enrollment with no
/// template constraint, and a single enrolled individual.
pub fn reduction_checks<E: Executor>(model: &SystemModel, cfg: &SearchConfig, exec: &E) -> Result<ReductionReport> {
    cfg.validate()?;
    let r_i_grid = default_r_i_grid(model, cfg.grid_steps)?;

    let noiseless = model.with_noiseless_enrollment()?;
    let nu_x = model.x_size() + 2;
    let via_a1 = a1_sweep(&InfoEvaluator::new(&noiseless), nu_x, cfg, &r_i_grid, false, exec)?;
    let direct = two_constraint_boundary(model, nu_x, cfg, &r_i_grid, exec)?;
    let iw_dev = via_a1.iter().zip(&direct).map(|(a, b)| row_deviation(a, b, false)).fold(0.0, f64::max);

    let ev = InfoEvaluator::new(model);
    let nu = model.y_size() + 2;
    let row0 = &a1_sweep(&ev, nu, cfg, &[0.0], true, exec)?[0];
    let (gk, corners) = single_individual_boundary(model, nu, cfg, exec)?;
    let gk_dev = match &row0.values {
        Some(v) => (v.max_r_s - gk.r_s).abs().max((v.min_r_l - gk.r_l).abs()).max((v.min_r_j - gk.r_j).abs()),
        None => f64::INFINITY,
    };
    let grid = ChannelGrid::new(model.y_size(), nu, cfg.grid_steps, cfg.max_candidates)?;
    let pointwise = exec
        .map_range(grid.len(), |i| {
            let fast = a1_score(&ev.u_stats(&grid.channel(i), nu).0, 0.0, cfg.tolerance);
            let c = &corners[i];
            match fast {
                Some(f) => (f.r_s - c.r_s).abs().max((f.r_l - c.r_l).abs()).max((f.r_j - c.r_j).abs()),
                None => f64::INFINITY,
            }
        })
        .into_iter()
        .fold(0.0, f64::max);

    Ok(ReductionReport {
        r_i_grid,
        tolerance: cfg.tolerance,
        grid_steps: cfg.grid_steps,
        noiseless_enrollment: ReductionCheck { max_deviation: iw_dev, matches: iw_dev <= cfg.tolerance },
        single_individual: ReductionCheck {
            max_deviation: gk_dev.max(pointwise),
            matches: gk_dev.max(pointwise) <= cfg.tolerance,
        },
        single_individual_pointwise: pointwise,
    })
}

#[derive(Debug, Clone, PartialEq)]
pub struct CardinalityRow {
    pub u_cardinality: usize,
    /// Largest gain over the base boundary in any of `max_r_s`, `min_r_l`,
    /// `min_r_j` (bits); infinite when a row becomes feasible only with the
    /// larger alphabet.
    pub improvement: f64,
    pub boundary: Vec<BoundaryPoint>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct CardinalityReport {
    pub r_i_grid: Vec<f64>,
    pub grid_steps: usize,
    pub base_cardinality: usize,
    pub base: Vec<BoundaryPoint>,
    pub rows: Vec<CardinalityRow>,
    pub max_improvement: f64,
}

fn improvement(base: &BoundaryPoint, wider: &BoundaryPoint) -> f64 {
    match (&base.values, &wider.values) {
        (_, None) => 0.0,
        (None, Some(_)) => f64::INFINITY,
        (Some(b), Some(w)) => (w.max_r_s - b.max_r_s).max(b.min_r_l - w.min_r_l).max(b.min_r_j - w.min_r_j).max(0.0),
    }
}

/// A1 boundary at `|U| = |Y|+2+e` for `e = 1..=max_extra`, compared with
/// the boundary at the bound `|U| = |Y|+2`.
pub fn cardinality_sweep<E: Executor>(
    model: &SystemModel,
    cfg: &SearchConfig,
    max_extra: usize,
    exec: &E,
) -> Result<CardinalityReport> {
    cfg.validate()?;
    alphabet_guard(model)?;
    if max_extra == 0 {
        return Err(Error::param("max_extra", "must be positive"));
    }
    let r_i_grid = default_r_i_grid(model, cfg.grid_steps)?;
    check_r_i_grid(&r_i_grid)?;
    let ev = InfoEvaluator::new(model);
    let base_nu = model.y_size() + 2;
    let base = a1_sweep(&ev, base_nu, cfg, &r_i_grid, true, exec)?;
    let mut rows = Vec::with_capacity(max_extra);
    for e in 1..=max_extra {
        let boundary = a1_sweep(&ev, base_nu + e, cfg, &r_i_grid, true, exec)?;
        let imp = base.iter().zip(&boundary).map(|(b, w)| improvement(b, w)).fold(0.0, f64::max);
        rows.push(CardinalityRow { u_cardinality: base_nu + e, improvement: imp, boundary });
    }
    let max_improvement = rows.iter().map(|r| r.improvement).fold(0.0, f64::max);
    Ok(CardinalityReport { r_i_grid, grid_steps: cfg.grid_steps, base_cardinality: base_nu, base, rows, max_improvement })
}
