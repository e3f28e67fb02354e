use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use super::gf2::{gf2_rank, Gf2Matrix};
use crate::error::{Error, Result};
use crate::model::SystemParams;

/// A linear code over GF(2) on `n = d + 1` nodes with its repair scheme.
///
/// Column block `i` (1-based) of the generator holds node `i`'s `alpha`
/// symbols; row `r` is message bit `r + 1`. `repair[(i, j)]` selects what
/// helper `i` sends toward node `j`, as combinations of `i`'s symbols.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RegeneratingCodeSpec {
    pub params: SystemParams,
    pub b: usize,
    pub alpha: usize,
    pub beta: usize,
    pub generator: Gf2Matrix,
    pub repair: BTreeMap<(usize, usize), Gf2Matrix>,
    pub parity: Option<Gf2Matrix>,
}

impl RegeneratingCodeSpec {
    pub fn node_count(&self) -> usize {
        self.params.node_count()
    }

    /// Node `i`'s stored symbols as functionals of the message, one per row.
    pub fn node_rows(&self, node: usize) -> Gf2Matrix {
        let cols: Vec<usize> = ((node - 1) * self.alpha..node * self.alpha).collect();
        self.generator.select_columns(&cols).transpose()
    }

    /// Full invariants: shape, generator rank, helper bandwidth, and
    /// orthogonality to the parity matrix when present.
    pub fn validate(&self) -> Result<()> {
        self.check_shape()?;
        if gf2_rank(&self.generator) != self.b {
            return Err(Error::Spec(format!(
                "generator does not have rank B = {}",
                self.b
            )));
        }
        for (&(i, j), map) in &self.repair {
            if map.rows() > self.beta {
                return Err(Error::Spec(format!(
                    "repair map {i}->{j} has {} rows, beta is {}",
                    map.rows(),
                    self.beta
                )));
            }
        }
        if let Some(h) = &self.parity {
            if !self.generator.mul(&h.transpose())?.is_zero() {
                return Err(Error::Spec("generator is not orthogonal to parity".into()));
            }
        }
        Ok(())
    }

    /// Dimensions and index ranges only; rank conditions are left to the
    /// verifiers.
    pub fn check_shape(&self) -> Result<()> {
        let n = self.node_count();
        if self.alpha == 0 || self.beta == 0 {
            return Err(Error::Spec("alpha and beta must be positive".into()));
        }
        if self.generator.rows() != self.b || self.generator.cols() != n * self.alpha {
            return Err(Error::Spec(format!(
                "generator is {}x{}, expected {}x{}",
                self.generator.rows(),
                self.generator.cols(),
                self.b,
                n * self.alpha
            )));
        }
        for (&(i, j), map) in &self.repair {
            if i == j || !self.params.contains_node(i) || !self.params.contains_node(j) {
                return Err(Error::Spec(format!(
                    "repair map {i}->{j} names an invalid pair"
                )));
            }
            if map.cols() != self.alpha {
                return Err(Error::Spec(format!(
                    "repair map {i}->{j} has {} columns, expected {}",
                    map.cols(),
                    self.alpha
                )));
            }
        }
        if let Some(h) = &self.parity {
            if h.rows() != n * self.alpha || h.cols() != n * self.alpha {
                return Err(Error::Spec(format!(
                    "parity is {}x{}, expected square of side {}",
                    h.rows(),
                    h.cols(),
                    n * self.alpha
                )));
            }
        }
        Ok(())
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(&RawSpec::from(self)).expect("spec serializes")
    }

    /// Parses the JSON form and checks its shape.
    pub fn from_json(text: &str) -> Result<Self> {
        let raw: RawSpec = serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))?;
        let spec = raw.into_spec()?;
        spec.check_shape()?;
        Ok(spec)
    }
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawSpec {
    k: usize,
    d: usize,
    #[serde(rename = "B")]
    b: usize,
    alpha: usize,
    beta: usize,
    generator: Vec<String>,
    repair: BTreeMap<String, Vec<String>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    parity: Option<Vec<String>>,
}

impl From<&RegeneratingCodeSpec> for RawSpec {
    fn from(spec: &RegeneratingCodeSpec) -> Self {
        RawSpec {
            k: spec.params.k(),
            d: spec.params.d(),
            b: spec.b,
            alpha: spec.alpha,
            beta: spec.beta,
            generator: spec.generator.to_bitstrings(),
            repair: spec
                .repair
                .iter()
                .map(|(&(i, j), m)| (format!("{i}->{j}"), m.to_bitstrings()))
                .collect(),
            parity: spec.parity.as_ref().map(Gf2Matrix::to_bitstrings),
        }
    }
}

fn parse_pair(key: &str) -> Result<(usize, usize)> {
    let bad = || Error::Spec(format!("repair key {key:?} is not of the form \"i->j\""));
    let (i, j) = key.split_once("->").ok_or_else(bad)?;
    Ok((
        i.trim().parse().map_err(|_| bad())?,
        j.trim().parse().map_err(|_| bad())?,
    ))
}

impl RawSpec {
    fn into_spec(self) -> Result<RegeneratingCodeSpec> {
        let params = SystemParams::new(self.k, self.d).map_err(|e| Error::Spec(e.to_string()))?;
        let width = params.node_count() * self.alpha;
        let generator = Gf2Matrix::from_bitstrings(&self.generator, width)?;
        let mut repair = BTreeMap::new();
        for (key, rows) in &self.repair {
            let pair = parse_pair(key)?;
            if repair
                .insert(pair, Gf2Matrix::from_bitstrings(rows, self.alpha)?)
                .is_some()
            {
                return Err(Error::Spec(format!("repair map {key} given twice")));
            }
        }
        let parity = self
            .parity
            .map(|rows| Gf2Matrix::from_bitstrings(&rows, width))
            .transpose()?;
        Ok(RegeneratingCodeSpec {
            params,
            b: self.b,
            alpha: self.alpha,
            beta: self.beta,
            generator,
            repair,
            parity,
        })
    }
}
