use std::cmp::Ordering;
use std::fmt;

use num_integer::Integer;
use serde::{Deserialize, Serialize};

use super::chain::ChainCertificate;
use super::combine::CombinationCertificate;
use super::packing::PackingCertificate;
use crate::error::{Error, Result};
use crate::model::{bq, LinearForm, Rational, SystemParams};

/// How a bound was derived.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Provenance {
    CutSet { q: usize },
    Chain(ChainCertificate),
    Packing(PackingCertificate),
    Combination(CombinationCertificate),
}

impl Provenance {
    pub fn label(&self) -> &'static str {
        match self {
            Provenance::CutSet { .. } => "cutset",
            Provenance::Chain(_) => "chain",
            Provenance::Packing(_) => "packing",
            Provenance::Combination(_) => "combination",
        }
    }
}

/// `c·B ≤ a·α + b·β`, valid for every exact-repair code with the given
/// `(k, d)`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct LinearBound {
    #[serde(flatten)]
    pub params: SystemParams,
    pub c: i64,
    #[serde(flatten)]
    pub form: LinearForm,
    pub provenance: Provenance,
}

/// Normalized `(c, a, b)`; the deduplication and ordering key for bounds.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct BoundKey {
    pub c: i64,
    pub a: i64,
    pub b: i64,
}

impl BoundKey {
    pub fn id(&self) -> String {
        format!("c{}a{}b{}", self.c, self.a, self.b)
    }

    /// Parses an id produced by [`BoundKey::id`].
    pub fn parse_id(text: &str) -> Result<BoundKey> {
        let bad = || Error::Parse(format!("not a bound id: {text:?}"));
        let rest = text.strip_prefix('c').ok_or_else(bad)?;
        let (c, rest) = rest.split_once('a').ok_or_else(bad)?;
        let (a, b) = rest.split_once('b').ok_or_else(bad)?;
        Ok(BoundKey {
            c: c.parse().map_err(|_| bad())?,
            a: a.parse().map_err(|_| bad())?,
            b: b.parse().map_err(|_| bad())?,
        })
    }
}

impl fmt::Display for BoundKey {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.id())
    }
}

impl LinearBound {
    pub fn new(
        params: SystemParams,
        c: i64,
        form: LinearForm,
        provenance: Provenance,
    ) -> Result<Self> {
        if c < 1 {
            return Err(Error::Argument(format!(
                "B multiplier must be positive, got {c}"
            )));
        }
        if form.alpha_coeff < 0 {
            return Err(Error::Argument(format!(
                "α coefficient must be non-negative, got {}",
                form.alpha_coeff
            )));
        }
        Ok(LinearBound {
            params,
            c,
            form,
            provenance,
        })
    }

    /// `B ≤ B_q`.
    pub fn cutset(params: SystemParams, q: usize) -> Result<Self> {
        LinearBound::new(params, 1, bq(&params, q)?, Provenance::CutSet { q })
    }

    pub fn key(&self) -> BoundKey {
        let g = self
            .c
            .gcd(&self.form.alpha_coeff)
            .gcd(&self.form.beta_coeff)
            .max(1);
        BoundKey {
            c: self.c / g,
            a: self.form.alpha_coeff / g,
            b: self.form.beta_coeff / g,
        }
    }

    pub fn id(&self) -> String {
        self.key().id()
    }

    /// Same inequality divided through by `gcd(c, a, b)`.
    pub fn normalize(&self) -> LinearBound {
        let key = self.key();
        LinearBound {
            c: key.c,
            form: LinearForm::new(key.a, key.b),
            ..self.clone()
        }
    }

    /// Upper bound on `B` at the given `(α, β)`.
    pub fn value_at(&self, alpha: &Rational, beta: &Rational) -> Rational {
        self.form.eval(alpha, beta) / Rational::from_integer(self.c as i128)
    }

    /// Upper bound on `B/β` at `ᾱ = α/β`.
    pub fn value_normalized(&self, alpha_bar: &Rational) -> Rational {
        self.value_at(alpha_bar, &Rational::from_integer(1))
    }

    /// Slope `a/c` of the bound in `(ᾱ, B̄)` coordinates.
    pub fn slope(&self) -> Rational {
        Rational::new(self.form.alpha_coeff as i128, self.c as i128)
    }

    /// Intercept `b/c` of the bound in `(ᾱ, B̄)` coordinates.
    pub fn intercept(&self) -> Rational {
        Rational::new(self.form.beta_coeff as i128, self.c as i128)
    }

    /// Size of the certificate: chain steps, packed copies or refinements.
    pub fn complexity(&self) -> usize {
        match &self.provenance {
            Provenance::CutSet { .. } => 1,
            Provenance::Chain(cert) => cert.steps.len(),
            Provenance::Packing(cert) => 1 + cert.rectangles.len(),
            Provenance::Combination(cert) => cert.base.steps.len() + cert.refinements.len(),
        }
    }

    /// Order by key, then by certificate size.
    pub fn cmp_key(&self, other: &LinearBound) -> Ordering {
        self.key()
            .cmp(&other.key())
            .then(self.complexity().cmp(&other.complexity()))
    }
}

impl fmt::Display for LinearBound {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let coeff = |v: i64, sym: &str| match v {
            1 => sym.to_string(),
            _ => format!("{v}{sym}"),
        };
        let lhs = coeff(self.c, "B");
        let a = self.form.alpha_coeff;
        let b = self.form.beta_coeff;
        let rhs = match (a, b) {
            (0, b) => coeff(b, "β"),
            (a, 0) => coeff(a, "α"),
            (a, b) if b < 0 => format!("{} - {}", coeff(a, "α"), coeff(-b, "β")),
            (a, b) => format!("{} + {}", coeff(a, "α"), coeff(b, "β")),
        };
        write!(f, "{lhs} <= {rhs}")
    }
}

/// `B ≤ B_q` for every `q = 0..=k`.
pub fn cutset_bounds(params: &SystemParams) -> Vec<LinearBound> {
    (0..=params.k())
        .map(|q| LinearBound::cutset(*params, q).expect("q in range"))
        .collect()
}
