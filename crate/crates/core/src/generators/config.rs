use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::model::{cutset::bq_unchecked, LinearForm, SystemParams, VarSet};

/// A min-cut configuration: `q` intact nodes, `k − q` nodes repaired in
/// ascending order, and `d + 1 − k` unused nodes that only send helper data.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct MinimalConfiguration {
    pub intact: Vec<usize>,
    pub repaired: Vec<usize>,
    pub unused: Vec<usize>,
}

impl MinimalConfiguration {
    pub fn new(
        params: &SystemParams,
        intact: Vec<usize>,
        repaired: Vec<usize>,
        unused: Vec<usize>,
    ) -> Result<Self> {
        let mut config = MinimalConfiguration {
            intact,
            repaired,
            unused,
        };
        config.intact.sort_unstable();
        config.repaired.sort_unstable();
        config.unused.sort_unstable();
        config.validate(params)?;
        Ok(config)
    }

    /// Builds a configuration with the given intact set, keeping
    /// `force_repaired` among the repaired nodes and `force_unused` among the
    /// unused ones. Remaining unused slots go to the highest free nodes.
    pub fn choose(
        params: &SystemParams,
        intact: &[usize],
        force_repaired: &[usize],
        force_unused: &[usize],
    ) -> Result<Self> {
        let unused_size = params.d() + 1 - params.k();
        let mut unused: Vec<usize> = force_unused.to_vec();
        let free: Vec<usize> = params
            .nodes()
            .filter(|v| {
                !intact.contains(v) && !force_repaired.contains(v) && !force_unused.contains(v)
            })
            .collect();
        if unused.len() > unused_size {
            return Err(Error::Feasibility(format!(
                "{} forced unused nodes exceed d+1-k = {unused_size}",
                unused.len()
            )));
        }
        let needed = unused_size - unused.len();
        if needed > free.len() {
            return Err(Error::Feasibility(
                "not enough free nodes for the unused set".into(),
            ));
        }
        unused.extend_from_slice(&free[free.len() - needed..]);
        let repaired: Vec<usize> = params
            .nodes()
            .filter(|v| !intact.contains(v) && !unused.contains(v))
            .collect();
        MinimalConfiguration::new(params, intact.to_vec(), repaired, unused)
    }

    /// The canonical configuration `V' = {1..q}`, repaired `{q+1..k}`,
    /// unused `{k+1..d+1}`.
    pub fn canonical(params: &SystemParams, q: usize) -> Result<Self> {
        if q > params.k() {
            return Err(Error::ParameterRange(format!(
                "q={q} exceeds k={}",
                params.k()
            )));
        }
        MinimalConfiguration::new(
            params,
            (1..=q).collect(),
            (q + 1..=params.k()).collect(),
            (params.k() + 1..=params.node_count()).collect(),
        )
    }

    pub fn validate(&self, params: &SystemParams) -> Result<()> {
        let q = self.intact.len();
        if q > params.k()
            || self.repaired.len() != params.k() - q
            || self.unused.len() != params.d() + 1 - params.k()
        {
            return Err(Error::Feasibility(format!(
                "configuration sizes ({}, {}, {}) do not match (q, k-q, d+1-k)",
                q,
                self.repaired.len(),
                self.unused.len()
            )));
        }
        let mut all: Vec<usize> = self
            .intact
            .iter()
            .chain(&self.repaired)
            .chain(&self.unused)
            .copied()
            .collect();
        all.sort_unstable();
        if all != params.nodes().collect::<Vec<_>>() {
            return Err(Error::Feasibility(
                "configuration does not partition the nodes".into(),
            ));
        }
        Ok(())
    }

    pub fn q(&self) -> usize {
        self.intact.len()
    }

    /// `W_{V'} ∪ {S_i^j : i, j repaired, i > j} ∪ S_U^{repaired}`.
    pub fn expand(&self) -> VarSet {
        let mut set = VarSet::nodes(self.intact.iter().copied());
        for (pos, &j) in self.repaired.iter().enumerate() {
            set.extend_from(&VarSet::helpers(&self.repaired[pos + 1..], &[j]));
        }
        set.extend_from(&VarSet::helpers(&self.unused, &self.repaired));
        set
    }

    pub fn weight(&self, params: &SystemParams) -> LinearForm {
        bq_unchecked(params, self.q())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::{dependency_closure, var_weight, Variable};

    #[test]
    fn expansion_weight_is_bq_and_recovers_message() {
        for (k, d) in [(1, 1), (2, 3), (3, 3), (4, 4), (6, 7), (3, 8)] {
            let params = SystemParams::new(k, d).unwrap();
            for q in 0..=k {
                let config = MinimalConfiguration::canonical(&params, q).unwrap();
                let vars = config.expand();
                assert_eq!(var_weight(&vars), config.weight(&params));
                assert!(dependency_closure(&params, &vars).contains(&Variable::Message));
            }
        }
    }

    #[test]
    fn paper_433_copy() {
        // (V', V, U) = ({1}, {2,3}, {4})
        let params = SystemParams::new(3, 3).unwrap();
        let config = MinimalConfiguration::new(&params, vec![1], vec![2, 3], vec![4]).unwrap();
        let expected: VarSet = ["W1", "S3^2", "S4^2", "S4^3"]
            .iter()
            .map(|s| s.parse().unwrap())
            .collect();
        assert_eq!(config.expand(), expected);
    }

    #[test]
    fn rejects_non_partition() {
        let params = SystemParams::new(3, 3).unwrap();
        assert!(MinimalConfiguration::new(&params, vec![1], vec![1, 3], vec![4]).is_err());
        assert!(MinimalConfiguration::new(&params, vec![1, 2], vec![3, 4], vec![]).is_err());
    }

    #[test]
    fn choose_respects_forced_sets() {
        let params = SystemParams::new(4, 6).unwrap();
        let c = MinimalConfiguration::choose(&params, &[5], &[1, 2], &[3]).unwrap();
        assert_eq!(c.intact, vec![5]);
        assert!(c.unused.contains(&3));
        assert!(c.repaired.contains(&1) && c.repaired.contains(&2));
        assert_eq!(c.unused.len(), 3);
    }
}
