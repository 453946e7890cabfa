//! Quantized probability simplices and local refinement on them.
//!
//! A channel with `r` inputs and `k` outputs is a point of a product of `r`
//! copies of the `(k-1)`-simplex. The grid enumerates every row whose
//! entries are multiples of `1/steps`; the refiner then moves mass between
//! pairs of entries of one row with a step that halves every round.

use alloc::vec;
use alloc::vec::Vec;

use crate::error::{Error, Result};

/// Number of grid points on the `(dim-1)`-simplex at resolution `1/steps`,
/// i.e. `C(steps + dim - 1, dim - 1)`. Saturates instead of overflowing.
pub fn simplex_grid_len(dim: usize, steps: usize) -> u128 {
    if dim == 0 {
        return 0;
    }
    let mut acc: u128 = 1;
    for i in 1..dim as u128 {
        acc = acc.saturating_mul(steps as u128 + i) / i;
    }
    acc
}

/// All compositions of `steps` into `dim` nonnegative parts, scaled by
/// `1/steps`. The first coordinate runs from `steps` down to 0, so vertices
/// come first.
pub fn simplex_grid(dim: usize, steps: usize) -> Vec<Vec<f64>> {
    fn rec(dim: usize, left: usize, steps: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<f64>>) {
        if cur.len() + 1 == dim {
            cur.push(left);
            out.push(cur.iter().map(|&c| c as f64 / steps as f64).collect());
            cur.pop();
            return;
        }
        for c in (0..=left).rev() {
            cur.push(c);
            rec(dim, left - c, steps, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    if dim == 0 {
        return out;
    }
    if dim == 1 {
        out.push(vec![1.0]);
        return out;
    }
    rec(dim, steps, steps, &mut Vec::with_capacity(dim), &mut out);
    out
}

/// Every channel `inputs -> outputs` whose rows lie on the simplex grid.
#[derive(Debug, Clone)]
pub struct ChannelGrid {
    inputs: usize,
    outputs: usize,
    rows: Vec<Vec<f64>>,
    len: usize,
}

impl ChannelGrid {
    /// Fails with a budget error when the grid would hold more than `limit`
    /// channels.
    pub fn new(inputs: usize, outputs: usize, steps: usize, limit: u128) -> Result<Self> {
        if inputs == 0 || outputs == 0 || steps == 0 {
            return Err(Error::param("channel grid", "dimensions and steps must be positive"));
        }
        let per_row = simplex_grid_len(outputs, steps);
        let mut total: u128 = 1;
        for _ in 0..inputs {
            total = total.saturating_mul(per_row);
        }
        if total > limit {
            return Err(Error::BudgetExceeded { guard: "channel grid size", required: total, limit });
        }
        Ok(Self { inputs, outputs, rows: simplex_grid(outputs, steps), len: total as usize })
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    pub fn inputs(&self) -> usize {
        self.inputs
    }

    pub fn outputs(&self) -> usize {
        self.outputs
    }

    /// Row-major flat matrix of channel `index`; input 0 is the most
    /// significant digit.
    pub fn channel(&self, index: usize) -> Vec<f64> {
        let mut out = vec![0.0; self.inputs * self.outputs];
        self.write_channel(index, &mut out);
        out
    }

    pub fn write_channel(&self, mut index: usize, out: &mut [f64]) {
        let base = self.rows.len();
        for i in (0..self.inputs).rev() {
            let r = &self.rows[index % base];
            out[i * self.outputs..(i + 1) * self.outputs].copy_from_slice(r);
            index /= base;
        }
    }
}

/// Pairwise mass-transfer local search over a concatenation of simplex rows.
#[derive(Debug, Clone, Copy)]
pub struct Refiner {
    pub rounds: usize,
    pub initial_step: f64,
    pub max_sweeps: usize,
}

impl Refiner {
    pub fn new(rounds: usize, grid_steps: usize) -> Self {
        Self { rounds, initial_step: 0.5 / grid_steps as f64, max_sweeps: 256 }
    }

    /// Improves `point` in place. `widths` lists the length of each row;
    /// rows listed in `frozen` are never touched. `eval` returns `None` for
    /// infeasible points and `better(a, b)` must be a strict improvement
    /// test. Returns the score of the final point.
    pub fn run<S, F, B>(
        &self,
        point: &mut [f64],
        widths: &[usize],
        frozen: &[usize],
        mut eval: F,
        better: B,
    ) -> Option<S>
    where
        F: FnMut(&[f64]) -> Option<S>,
        B: Fn(&S, &S) -> bool,
    {
        let mut best = eval(point)?;
        let mut offsets = Vec::with_capacity(widths.len());
        let mut off = 0;
        for &w in widths {
            offsets.push(off);
            off += w;
        }
        debug_assert_eq!(off, point.len());
        let mut step = self.initial_step;
        for _ in 0..self.rounds {
            for _ in 0..self.max_sweeps {
                let mut improved = false;
                for (r, (&o, &w)) in offsets.iter().zip(widths).enumerate() {
                    if frozen.contains(&r) {
                        continue;
                    }
                    for j in 0..w {
                        for k in 0..w {
                            if j == k || point[o + j] <= 0.0 {
                                continue;
                            }
                            let (old_j, old_k) = (point[o + j], point[o + k]);
                            let t = step.min(old_j);
                            point[o + j] = if t == old_j { 0.0 } else { old_j - t };
                            point[o + k] = old_k + t;
                            match eval(point) {
                                Some(s) if better(&s, &best) => {
                                    best = s;
                                    improved = true;
                                }
                                _ => {
                                    point[o + j] = old_j;
                                    point[o + k] = old_k;
                                }
                            }
                        }
                    }
                }
                if !improved {
                    break;
                }
            }
            step *= 0.5;
        }
        Some(best)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn grid_counts() {
        assert_eq!(simplex_grid_len(2, 8), 9);
        assert_eq!(simplex_grid_len(4, 8), 165);
        assert_eq!(simplex_grid_len(5, 8), 495);
        assert_eq!(simplex_grid_len(1, 8), 1);
        for (d, s) in [(1, 3), (2, 4), (3, 5), (4, 8)] {
            let g = simplex_grid(d, s);
            assert_eq!(g.len() as u128, simplex_grid_len(d, s));
            for row in &g {
                assert!((row.iter().sum::<f64>() - 1.0).abs() < 1e-12);
            }
        }
        assert_eq!(simplex_grid(3, 2)[0], vec![1.0, 0.0, 0.0]);
    }

    #[test]
    fn channel_grid_indexing() {
        let g = ChannelGrid::new(2, 2, 2, 1000).unwrap();
        assert_eq!(g.len(), 9);
        assert_eq!(g.channel(0), vec![1.0, 0.0, 1.0, 0.0]);
        assert_eq!(g.channel(1), vec![1.0, 0.0, 0.5, 0.5]);
        assert_eq!(g.channel(3), vec![0.5, 0.5, 1.0, 0.0]);
        assert!(ChannelGrid::new(2, 4, 8, 1000).unwrap_err().is_budget());
    }

    #[test]
    fn refiner_reaches_interior_optimum() {
        // maximize -(p0 - 0.3)^2 over the 1-simplex, starting at a vertex
        let mut p = vec![1.0, 0.0];
        let r = Refiner::new(30, 8);
        let best = r
            .run(&mut p, &[2], &[], |x| Some(-(x[0] - 0.3) * (x[0] - 0.3)), |a: &f64, b: &f64| a > b)
            .unwrap();
        assert!((p[0] - 0.3).abs() < 1e-8, "{p:?}");
        assert!(best > -1e-15);
        assert!((p[0] + p[1] - 1.0).abs() < 1e-12);
    }

    #[test]
    fn refiner_respects_frozen_rows_and_infeasibility() {
        let mut p = vec![1.0, 0.0, 1.0, 0.0];
        let r = Refiner::new(10, 4);
        r.run(
            &mut p,
            &[2, 2],
            &[0],
            |x| if x[2] < 0.5 { None } else { Some(-x[2]) },
            |a: &f64, b: &f64| a > b,
        );
        assert_eq!(&p[..2], &[1.0, 0.0]);
        assert!((p[2] - 0.5).abs() < 1e-12);
    }
}
