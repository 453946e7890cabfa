//! Enrollment encoder, masking layer and identification decoder.

use alloc::format;
use alloc::vec;
use alloc::vec::Vec;

use rand::Rng;

use super::{stream_rng, Codebook};
use crate::error::{Error, Result};
use crate::typical::{SymbolSequence, TypicalityParams, TypicalityTable};

/// Helper data stored for one individual.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Template {
    pub m_index: usize,
    pub b_index: usize,
    pub masked_secret: usize,
}

/// One template per enrolled individual, in enrollment order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Database {
    templates: Vec<Template>,
}

impl Database {
    pub fn new(codebook: &Codebook, templates: Vec<Template>) -> Result<Self> {
        let p = codebook.params();
        if templates.len() != p.m_i {
            return Err(Error::DimensionMismatch { context: "database size", expected: p.m_i, found: templates.len() });
        }
        for (i, t) in templates.iter().enumerate() {
            if t.m_index >= p.n_v || t.b_index >= p.n_b || t.masked_secret >= p.m_s {
                return Err(Error::param("template", format!("template {i} is out of range")));
            }
        }
        Ok(Self { templates })
    }

    pub fn templates(&self) -> &[Template] {
        &self.templates
    }

    pub fn len(&self) -> usize {
        self.templates.len()
    }

    pub fn is_empty(&self) -> bool {
        self.templates.is_empty()
    }
}

/// Result of enrolling one observation. `satellite` is `None` when no
/// typical pair existed; the template is then the fallback `(0, 0)` masked
/// with `s_G = 0`, and the event counts as an error.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Enrollment {
    pub template: Template,
    pub gs_secret: usize,
    pub satellite: Option<(usize, usize)>,
}

impl Enrollment {
    pub fn is_failure(&self) -> bool {
        self.satellite.is_none()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Decision {
    Identified { individual: usize, secret: usize },
    /// No match, or more than one; `matches` is capped at 2.
    Failure { matches: usize },
}

fn check_range(name: &'static str, v: usize, m_s: usize) -> Result<()> {
    if v >= m_s {
        return Err(Error::param(name, format!("{v} is outside [0, {m_s})")));
    }
    Ok(())
}

/// `(s_c + s_g) mod m_s`.
pub fn mask(s_c: usize, s_g: usize, m_s: usize) -> Result<usize> {
    check_range("s_c", s_c, m_s)?;
    check_range("s_g", s_g, m_s)?;
    Ok((s_c + s_g) % m_s)
}

/// `(masked - s_g) mod m_s`.
pub fn unmask(masked: usize, s_g: usize, m_s: usize) -> Result<usize> {
    check_range("masked", masked, m_s)?;
    check_range("s_g", s_g, m_s)?;
    Ok((masked + m_s - s_g) % m_s)
}

/// Codebook paired with typicality tables for one δ.
pub(crate) struct Coder<'a> {
    cb: &'a Codebook,
    enc: TypicalityTable,
    dec: TypicalityTable,
}

impl<'a> Coder<'a> {
    pub fn new(cb: &'a Codebook, typ: &TypicalityParams) -> Self {
        Self {
            cb,
            enc: TypicalityTable::new(cb.enroll_law(), typ, cb.n()),
            dec: TypicalityTable::new(cb.identify_law(), typ, cb.n()),
        }
    }

    pub fn candidates(&self, y: &[usize], out: &mut Vec<(usize, usize)>) {
        out.clear();
        let p = self.cb.params();
        let mut scratch = vec![0usize; self.enc.cells()];
        for m in 0..p.n_v {
            let v = self.cb.cloud(m);
            for k in 0..p.n_u {
                if self.enc.check(&[y, self.cb.satellite(m, k), v], &mut scratch) {
                    out.push((m, k));
                }
            }
        }
    }

    /// Template for a chosen satellite, or the fallback when `None`.
    pub fn template(&self, chosen: Option<(usize, usize)>, secret: usize) -> (Template, usize) {
        let m_s = self.cb.params().m_s;
        match chosen {
            Some((m, k)) => {
                let (b, s_g) = self.cb.bin_slot(m, k);
                (Template { m_index: m, b_index: b, masked_secret: (secret + s_g) % m_s }, s_g)
            }
            None => (Template { m_index: 0, b_index: 0, masked_secret: secret % m_s }, 0),
        }
    }

    pub fn enroll<R: Rng + ?Sized>(
        &self,
        y: &[usize],
        secret: usize,
        buf: &mut Vec<(usize, usize)>,
        rng: &mut R,
    ) -> Enrollment {
        self.candidates(y, buf);
        let chosen = if buf.is_empty() { None } else { Some(buf[rng.random_range(0..buf.len())]) };
        let (template, gs_secret) = self.template(chosen, secret);
        Enrollment { template, gs_secret, satellite: chosen }
    }

    pub fn identify(&self, db: &[Template], z: &[usize]) -> Decision {
        let m_s = self.cb.params().m_s;
        let mut scratch = vec![0usize; self.dec.cells()];
        let mut hit = None;
        let mut matches = 0;
        for (i, t) in db.iter().enumerate() {
            let v = self.cb.cloud(t.m_index);
            for s in 0..m_s {
                let k = self.cb.satellite_at(t.m_index, t.b_index, s);
                if self.dec.check(&[z, self.cb.satellite(t.m_index, k), v], &mut scratch) {
                    matches += 1;
                    if matches > 1 {
                        return Decision::Failure { matches };
                    }
                    hit = Some((i, s));
                }
            }
        }
        match hit {
            Some((i, s)) => Decision::Identified { individual: i, secret: (db[i].masked_secret + m_s - s) % m_s },
            None => Decision::Failure { matches: 0 },
        }
    }
}

fn check_sequence(seq: &SymbolSequence, alphabet: usize, n: usize, what: &'static str) -> Result<()> {
    if seq.alphabet_size() != alphabet {
        return Err(Error::DimensionMismatch { context: what, expected: alphabet, found: seq.alphabet_size() });
    }
    if seq.len() != n {
        return Err(Error::DimensionMismatch { context: "sequence length", expected: n, found: seq.len() });
    }
    Ok(())
}

impl Codebook {
    /// Every `(m, k)` with `(y, u_{k|m}, v_m)` jointly typical, in
    /// lexicographic order.
    pub fn encoder_candidates(&self, y: &SymbolSequence, typ: &TypicalityParams) -> Result<Vec<(usize, usize)>> {
        check_sequence(y, self.y_size(), self.n(), "enrollment alphabet")?;
        let mut out = Vec::new();
        Coder::new(self, typ).candidates(y.symbols(), &mut out);
        Ok(out)
    }

    /// Enrolls `y` with chosen secret `secret`, breaking ties uniformly with
    /// `rng`.
    pub fn enroll_with<R: Rng + ?Sized>(
        &self,
        y: &SymbolSequence,
        secret: usize,
        typ: &TypicalityParams,
        rng: &mut R,
    ) -> Result<Enrollment> {
        check_sequence(y, self.y_size(), self.n(), "enrollment alphabet")?;
        check_range("chosen_secret", secret, self.params().m_s)?;
        Ok(Coder::new(self, typ).enroll(y.symbols(), secret, &mut Vec::new(), rng))
    }
}

/// [`Codebook::enroll_with`] with a generator seeded from `seed`.
pub fn enroll(
    codebook: &Codebook,
    y: &SymbolSequence,
    chosen_secret: usize,
    typ: &TypicalityParams,
    seed: u64,
) -> Result<Enrollment> {
    codebook.enroll_with(y, chosen_secret, typ, &mut stream_rng(seed, 0))
}

/// Looks for the unique `(i, s)` with `(z, u, v_{m(i)})` jointly typical,
/// where `u` is the satellite in slot `s` of bin `b(i)`.
pub fn identify(codebook: &Codebook, db: &Database, z: &SymbolSequence, typ: &TypicalityParams) -> Result<Decision> {
    check_sequence(z, codebook.z_size(), codebook.n(), "identification alphabet")?;
    for t in db.templates() {
        let p = codebook.params();
        if t.m_index >= p.n_v || t.b_index >= p.n_b || t.masked_secret >= p.m_s {
            return Err(Error::param("template", "does not fit this codebook"));
        }
    }
    Ok(Coder::new(codebook, typ).identify(db.templates(), z.symbols()))
}
