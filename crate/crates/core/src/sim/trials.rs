//! Monte Carlo trials of the full enroll/identify cycle.

use alloc::vec;
use alloc::vec::Vec;

use rand::Rng;

use super::codec::{Coder, Decision, Enrollment};
use super::{derive_params, exact_leakage, stream_rng, CodeParams, Codebook, RowSampler};
use crate::error::{Error, Result};
use crate::exec::Executor;
use crate::math::sqrt;
use crate::prob::{axis, compose_joint, AuxiliaryPair, SystemModel};
use crate::region::summarize;
use crate::typical::TypicalityParams;

/// Which individual is presented for identification.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum IdentifiedMode {
    /// One uniformly chosen individual per trial.
    Uniform,
    /// Every individual per trial; the reported rate is the worst one.
    Sweep,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CodebookMode {
    /// One codebook drawn from the master seed and reused by every trial.
    Fixed,
    /// A new codebook per trial.
    Fresh,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SimOptions {
    pub trials: usize,
    pub identified: IdentifiedMode,
    pub codebook: CodebookMode,
    pub permute: bool,
    /// Work limit for exact leakage; above it leakage is not reported.
    pub exact_budget: u128,
}

impl Default for SimOptions {
    fn default() -> Self {
        Self {
            trials: 1000,
            identified: IdentifiedMode::Uniform,
            codebook: CodebookMode::Fixed,
            permute: true,
            exact_budget: 1 << 24,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SimReport {
    pub trials: usize,
    pub error_rate: f64,
    /// Half-width of the normal-approximation 95% interval.
    pub error_rate_ci95: f64,
    /// Per-individual rates in sweep mode.
    pub per_individual_error_rates: Option<Vec<f64>>,
    /// Enrollments (over all individuals and trials) with no typical pair.
    pub enrollment_failures: usize,
    pub enrollments: usize,
    /// Leakage is only reported when computed exactly.
    pub exact_mode: bool,
    pub secrecy_leakage_bits: Option<f64>,
    pub privacy_leakage_rate: Option<f64>,
    pub gs_privacy_leakage_rate: Option<f64>,
    pub gs_secret_entropy_bits: Option<f64>,
    pub typicality_delta: f64,
    pub options: SimOptions,
    pub params_echo: CodeParams,
}

struct Setup<'a> {
    model: &'a SystemModel,
    aux: &'a AuxiliaryPair,
    params: &'a CodeParams,
    typ: &'a TypicalityParams,
    opts: &'a SimOptions,
    source: RowSampler,
    enroll: RowSampler,
    identify: RowSampler,
}

struct Outcome {
    errors: Vec<bool>,
    failures: usize,
}

fn trial(s: &Setup<'_>, fixed: Option<&Coder<'_>>, seed: u64, t: usize) -> Result<Outcome> {
    let mut rng = stream_rng(seed, t as u64 + 1);
    let fresh;
    let fresh_coder;
    let coder = match fixed {
        Some(c) => c,
        None => {
            fresh = Codebook::draw(s.model, s.aux, s.params.clone(), s.opts.permute, &mut rng)?;
            fresh_coder = Coder::new(&fresh, s.typ);
            &fresh_coder
        }
    };
    let (n, m_i, m_s) = (s.params.n, s.params.m_i, s.params.m_s);
    let mut xs = Vec::with_capacity(m_i);
    let mut enrolled: Vec<(usize, Enrollment)> = Vec::with_capacity(m_i);
    let mut buf = Vec::new();
    for _ in 0..m_i {
        let x = s.source.iid(n, &mut rng);
        let y = s.enroll.pass(&x, &mut rng);
        let secret = rng.random_range(0..m_s);
        enrolled.push((secret, coder.enroll(&y, secret, &mut buf, &mut rng)));
        xs.push(x);
    }
    let db: Vec<_> = enrolled.iter().map(|(_, e)| e.template).collect();
    let failures = enrolled.iter().filter(|(_, e)| e.is_failure()).count();
    let check = |w: usize, rng: &mut rand_chacha::ChaCha8Rng| {
        let z = s.identify.pass(&xs[w], rng);
        let (secret, e) = &enrolled[w];
        e.is_failure() || coder.identify(&db, &z) != Decision::Identified { individual: w, secret: *secret }
    };
    let errors = match s.opts.identified {
        IdentifiedMode::Uniform => {
            let w = rng.random_range(0..m_i);
            vec![check(w, &mut rng)]
        }
        IdentifiedMode::Sweep => (0..m_i).map(|w| check(w, &mut rng)).collect(),
    };
    Ok(Outcome { errors, failures })
}

/// Runs `opts.trials` independent trials. Trial `t` draws everything from
/// stream `t + 1` of `seed`, so the report does not depend on `exec`.
pub fn run_trials<E: Executor>(
    model: &SystemModel,
    aux: &AuxiliaryPair,
    params: &CodeParams,
    typ: &TypicalityParams,
    opts: &SimOptions,
    seed: u64,
    exec: &E,
) -> Result<SimReport> {
    params.validate()?;
    aux.check_against(model)?;
    if opts.trials == 0 {
        return Err(Error::param("trials", "must be positive"));
    }
    let setup = Setup {
        model,
        aux,
        params,
        typ,
        opts,
        source: RowSampler::single(model.source.probs()),
        enroll: RowSampler::new(model.enroll.as_flat(), model.x_size(), model.y_size()),
        identify: RowSampler::new(model.identify.as_flat(), model.x_size(), model.z_size()),
    };
    let fixed = match opts.codebook {
        CodebookMode::Fixed => Some(Codebook::draw(model, aux, params.clone(), opts.permute, &mut stream_rng(seed, 0))?),
        CodebookMode::Fresh => {
            // surface size errors before the trials start
            super::codebook::size_guard(params)?;
            None
        }
    };
    let coder = fixed.as_ref().map(|cb| Coder::new(cb, typ));
    let outcomes: Vec<Outcome> =
        exec.map_range(opts.trials, |t| trial(&setup, coder.as_ref(), seed, t)).into_iter().collect::<Result<_>>()?;

    let width = outcomes[0].errors.len();
    let mut per = vec![0usize; width];
    let mut failures = 0;
    for o in &outcomes {
        failures += o.failures;
        for (c, &e) in per.iter_mut().zip(&o.errors) {
            *c += e as usize;
        }
    }
    let tf = opts.trials as f64;
    let rates: Vec<f64> = per.iter().map(|&c| c as f64 / tf).collect();
    let error_rate = rates.iter().cloned().fold(0.0, f64::max);

    let leak = match &fixed {
        Some(cb) => match exact_leakage(model, cb, typ, opts.exact_budget) {
            Ok(l) => Some(l),
            Err(e) if e.is_budget() => None,
            Err(e) => return Err(e),
        },
        None => None,
    };
    Ok(SimReport {
        trials: opts.trials,
        error_rate,
        error_rate_ci95: 1.96 * sqrt(error_rate * (1.0 - error_rate) / tf),
        per_individual_error_rates: match opts.identified {
            IdentifiedMode::Sweep => Some(rates),
            IdentifiedMode::Uniform => None,
        },
        enrollment_failures: failures,
        enrollments: opts.trials * params.m_i,
        exact_mode: leak.is_some(),
        secrecy_leakage_bits: leak.map(|l| l.secrecy_leakage_bits),
        privacy_leakage_rate: leak.map(|l| l.privacy_leakage_rate),
        gs_privacy_leakage_rate: leak.map(|l| l.gs_privacy_leakage_rate),
        gs_secret_entropy_bits: leak.map(|l| l.gs_secret_entropy_bits),
        typicality_delta: typ.delta(),
        options: *opts,
        params_echo: params.clone(),
    })
}

#[derive(Debug, Clone, PartialEq)]
pub struct TrendPoint {
    pub n: usize,
    pub report: SimReport,
    /// `I(X;U) - I(Z;U) + I(Z;V) + δ`.
    pub target_privacy_rate: f64,
    pub target_secrecy_leakage: f64,
}

/// Default typicality slack for `(model, aux)`: a tenth of the smallest
/// positive mass of the two reference laws.
pub fn default_typicality(model: &SystemModel, aux: &AuxiliaryPair) -> Result<TypicalityParams> {
    let joint = compose_joint(model, aux)?;
    let a = joint.marginalize(&[axis::Y, axis::U, axis::V])?;
    let b = joint.marginalize(&[axis::Z, axis::U, axis::V])?;
    TypicalityParams::default_for(&[&a, &b])
}

/// Runs [`run_trials`] at every block length of `n_list` with derived
/// parameters, next to the asymptotic targets.
#[allow(clippy::too_many_arguments)]
pub fn achievability_trend<E: Executor>(
    model: &SystemModel,
    aux: &AuxiliaryPair,
    delta_rate: f64,
    typ: Option<&TypicalityParams>,
    n_list: &[usize],
    opts: &SimOptions,
    seed: u64,
    exec: &E,
) -> Result<Vec<TrendPoint>> {
    if n_list.is_empty() || n_list.windows(2).any(|w| w[0] >= w[1]) {
        return Err(Error::param("n_list", "must be nonempty and strictly increasing"));
    }
    let s = summarize(model, aux)?;
    let typ = match typ {
        Some(t) => *t,
        None => default_typicality(model, aux)?,
    };
    n_list
        .iter()
        .map(|&n| {
            let params = derive_params(model, aux, n, delta_rate)?;
            let report = run_trials(model, aux, &params, &typ, opts, seed, exec)?;
            Ok(TrendPoint {
                n,
                report,
                target_privacy_rate: s.i_xu - s.i_zu + s.i_zv + delta_rate,
                target_secrecy_leakage: 0.0,
            })
        })
        .collect()
}
