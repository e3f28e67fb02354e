use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Recovery threshold `k` and repair degree `d` of an `(n, k, d)` code.
///
/// Everything is computed on the `d + 1` node universe; outer bounds for
/// `n = d + 1` carry over to any larger `n`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(try_from = "RawParams", into = "RawParams")]
pub struct SystemParams {
    k: usize,
    d: usize,
}

impl SystemParams {
    pub fn new(k: usize, d: usize) -> Result<Self> {
        if k == 0 || k > d {
            return Err(Error::ParameterRange(format!(
                "need 1 <= k <= d, got k={k}, d={d}"
            )));
        }
        Ok(SystemParams { k, d })
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn d(&self) -> usize {
        self.d
    }

    pub fn node_count(&self) -> usize {
        self.d + 1
    }

    /// Nodes are numbered `1..=d+1`.
    pub fn nodes(&self) -> std::ops::RangeInclusive<usize> {
        1..=self.node_count()
    }

    pub fn contains_node(&self, node: usize) -> bool {
        (1..=self.node_count()).contains(&node)
    }
}

#[derive(Serialize, Deserialize)]
struct RawParams {
    k: usize,
    d: usize,
}

impl TryFrom<RawParams> for SystemParams {
    type Error = Error;

    fn try_from(raw: RawParams) -> Result<Self> {
        SystemParams::new(raw.k, raw.d)
    }
}

impl From<SystemParams> for RawParams {
    fn from(p: SystemParams) -> Self {
        RawParams { k: p.k, d: p.d }
    }
}
