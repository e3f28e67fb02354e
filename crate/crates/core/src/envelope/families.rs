use std::collections::BTreeMap;

use serde::Serialize;

use crate::error::Result;
use crate::generators::{
    cutset_bounds, enumerate_bounds, enumerate_packings, BoundKey, EnumerationLimits, LinearBound,
};
use crate::model::SystemParams;

/// The four nested bound families drawn as trade-off curves.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Family {
    /// `B ≤ B_q` only: the functional-repair bound.
    Cutset,
    /// Packings of single-helper rectangles that all share one `ℓ`.
    SingletonFixedEll,
    /// Packings of single-helper rectangles with any mix of `ℓ`.
    SingletonMixedEll,
    /// Every generated bound.
    All,
}

impl Family {
    pub const ALL: [Family; 4] = [
        Family::Cutset,
        Family::SingletonFixedEll,
        Family::SingletonMixedEll,
        Family::All,
    ];

    pub fn name(&self) -> &'static str {
        match self {
            Family::Cutset => "cutset",
            Family::SingletonFixedEll => "singleton-fixed-ell",
            Family::SingletonMixedEll => "singleton-mixed-ell",
            Family::All => "all",
        }
    }
}

/// Bound sets of the four families, weakest first. Each later family
/// contains the earlier ones, so its curve lies on or outside theirs.
pub fn figure_families(
    params: &SystemParams,
    limits: &EnumerationLimits,
) -> Result<Vec<(Family, Vec<LinearBound>)>> {
    let cutset = cutset_bounds(params);

    let mut fixed: BTreeMap<BoundKey, LinearBound> =
        cutset.iter().map(|b| (b.key(), b.clone())).collect();
    for ell in 2..params.k() {
        for bound in enumerate_packings(params, limits, |l, m| l == ell && m == 1)?.bounds {
            fixed.entry(bound.key()).or_insert(bound);
        }
    }
    let fixed: Vec<LinearBound> = fixed.into_values().collect();

    let mut mixed: BTreeMap<BoundKey, LinearBound> =
        fixed.iter().map(|b| (b.key(), b.clone())).collect();
    for bound in enumerate_packings(params, limits, |_, m| m == 1)?.bounds {
        mixed.entry(bound.key()).or_insert(bound);
    }
    let mixed: Vec<LinearBound> = mixed.into_values().collect();

    let mut all: BTreeMap<BoundKey, LinearBound> =
        mixed.iter().map(|b| (b.key(), b.clone())).collect();
    for bound in enumerate_bounds(params, limits)?.bounds {
        all.entry(bound.key()).or_insert(bound);
    }
    let all: Vec<LinearBound> = all.into_values().collect();

    Ok(vec![
        (Family::Cutset, cutset),
        (Family::SingletonFixedEll, fixed),
        (Family::SingletonMixedEll, mixed),
        (Family::All, all),
    ])
}
