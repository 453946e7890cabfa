//! Allocation-light evaluation of the information quantities a region
//! search needs, for one candidate `P(u|y)` (and optionally `P(v|u)`).
//!
//! This path is what the grid search runs millions of times. It is checked
//! against [`super::summarize`], which goes through the full composed joint.

use alloc::vec;
use alloc::vec::Vec;

use crate::math::plogp;
use crate::prob::SystemModel;

fn entropy(p: &[f64]) -> f64 {
    p.iter().map(|&q| plogp(q)).sum()
}

#[inline]
fn clamp_mi(v: f64) -> f64 {
    // tiny negatives are floating-point noise
    if v < 0.0 {
        0.0
    } else {
        v
    }
}

/// Pairwise laws of the model with `Y`, precomputed once per model.
#[derive(Debug, Clone)]
pub(crate) struct InfoEvaluator {
    nx: usize,
    ny: usize,
    nz: usize,
    p_y: Vec<f64>,
    /// `P(z, y)` row-major `z * ny + y`
    p_zy: Vec<f64>,
    /// `P(x, y)` row-major `x * ny + y`
    p_xy: Vec<f64>,
    h_x: f64,
    h_y: f64,
    h_z: f64,
}

/// Information quantities that depend on `U` only.
#[derive(Debug, Clone, Copy, PartialEq)]
pub(crate) struct UStats {
    pub i_zu: f64,
    pub i_yu: f64,
    pub i_xu: f64,
}

impl UStats {
    /// `I(X;U) - I(Z;U)`, the privacy cost not offset by identification.
    pub fn excess(&self) -> f64 {
        clamp_mi(self.i_xu - self.i_zu)
    }
}

/// Scratch laws kept from a `U` evaluation so that `V` candidates can reuse
/// them.
#[derive(Debug, Clone)]
pub(crate) struct ULaws {
    pub nu: usize,
    pub p_u: Vec<f64>,
    pub p_zu: Vec<f64>,
}

impl InfoEvaluator {
    pub fn new(model: &SystemModel) -> Self {
        let (nx, ny, nz) = (model.x_size(), model.y_size(), model.z_size());
        let mut p_y = vec![0.0; ny];
        let mut p_zy = vec![0.0; nz * ny];
        let mut p_xy = vec![0.0; nx * ny];
        let mut p_z = vec![0.0; nz];
        for x in 0..nx {
            let px = model.source.prob(x);
            for y in 0..ny {
                let pxy = px * model.enroll.prob(x, y);
                p_xy[x * ny + y] = pxy;
                p_y[y] += pxy;
                for z in 0..nz {
                    p_zy[z * ny + y] += pxy * model.identify.prob(x, z);
                }
            }
            for z in 0..nz {
                p_z[z] += px * model.identify.prob(x, z);
            }
        }
        Self {
            nx,
            ny,
            nz,
            h_x: entropy(model.source.probs()),
            h_y: entropy(&p_y),
            h_z: entropy(&p_z),
            p_y,
            p_zy,
            p_xy,
        }
    }

    pub fn y_size(&self) -> usize {
        self.ny
    }

    /// `u_given_y` is row-major `y * nu + u`.
    pub fn u_stats(&self, u_given_y: &[f64], nu: usize) -> (UStats, ULaws) {
        let ny = self.ny;
        let mut p_u = vec![0.0; nu];
        let mut h_yu = 0.0;
        for y in 0..ny {
            for u in 0..nu {
                let p = self.p_y[y] * u_given_y[y * nu + u];
                p_u[u] += p;
                h_yu += plogp(p);
            }
        }
        let h_u = entropy(&p_u);

        let mut p_zu = vec![0.0; self.nz * nu];
        for z in 0..self.nz {
            for y in 0..ny {
                let pzy = self.p_zy[z * ny + y];
                if pzy == 0.0 {
                    continue;
                }
                for u in 0..nu {
                    p_zu[z * nu + u] += pzy * u_given_y[y * nu + u];
                }
            }
        }
        let h_zu = entropy(&p_zu);

        let mut h_xu = 0.0;
        let mut row = vec![0.0; nu];
        for x in 0..self.nx {
            row.iter_mut().for_each(|r| *r = 0.0);
            for y in 0..ny {
                let pxy = self.p_xy[x * ny + y];
                if pxy == 0.0 {
                    continue;
                }
                for u in 0..nu {
                    row[u] += pxy * u_given_y[y * nu + u];
                }
            }
            h_xu += entropy(&row);
        }

        let stats = UStats {
            i_zu: clamp_mi(self.h_z + h_u - h_zu),
            i_yu: clamp_mi(self.h_y + h_u - h_yu),
            i_xu: clamp_mi(self.h_x + h_u - h_xu),
        };
        (stats, ULaws { nu, p_u, p_zu })
    }

    /// `I(Z;V)` for `v_given_u` row-major `u * nv + v`.
    pub fn i_zv(&self, laws: &ULaws, v_given_u: &[f64], nv: usize) -> f64 {
        let nu = laws.nu;
        let mut p_v = [0.0f64; 16];
        let mut p_v_heap;
        let p_v: &mut [f64] = if nv <= 16 {
            &mut p_v[..nv]
        } else {
            p_v_heap = vec![0.0; nv];
            &mut p_v_heap
        };
        for u in 0..nu {
            let pu = laws.p_u[u];
            if pu == 0.0 {
                continue;
            }
            for v in 0..nv {
                p_v[v] += pu * v_given_u[u * nv + v];
            }
        }
        let h_v = entropy(p_v);
        let mut h_zv = 0.0;
        for z in 0..self.nz {
            for v in 0..nv {
                let mut p = 0.0;
                for u in 0..nu {
                    p += laws.p_zu[z * nu + u] * v_given_u[u * nv + v];
                }
                h_zv += plogp(p);
            }
        }
        clamp_mi(self.h_z + h_v - h_zv)
    }
}
