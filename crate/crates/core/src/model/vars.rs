//! Symbolic random variables of a regenerating code on the `d + 1` node
//! universe: the message `M`, node contents `W_i` and helper transfers
//! `S_i^j` (from node `i`, used to repair node `j`).

use std::collections::BTreeSet;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use super::params::SystemParams;
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Variable {
    Message,
    Node(usize),
    Helper { from: usize, to: usize },
}

impl Variable {
    pub fn node(i: usize) -> Result<Self> {
        if i == 0 {
            return Err(Error::ParameterRange("nodes are numbered from 1".into()));
        }
        Ok(Variable::Node(i))
    }

    pub fn helper(from: usize, to: usize) -> Result<Self> {
        if from == 0 || to == 0 {
            return Err(Error::ParameterRange("nodes are numbered from 1".into()));
        }
        if from == to {
            return Err(Error::ParameterRange(format!(
                "helper S_{from}^{to} needs distinct nodes"
            )));
        }
        Ok(Variable::Helper { from, to })
    }

    pub fn is_valid_for(&self, params: &SystemParams) -> bool {
        match *self {
            Variable::Message => true,
            Variable::Node(i) => params.contains_node(i),
            Variable::Helper { from, to } => {
                from != to && params.contains_node(from) && params.contains_node(to)
            }
        }
    }
}

impl fmt::Display for Variable {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Variable::Message => write!(f, "M"),
            Variable::Node(i) => write!(f, "W{i}"),
            Variable::Helper { from, to } => write!(f, "S{from}^{to}"),
        }
    }
}

impl FromStr for Variable {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let bad = || Error::Parse(format!("not a variable: {s:?}"));
        let s = s.trim();
        if s == "M" {
            return Ok(Variable::Message);
        }
        if let Some(rest) = s.strip_prefix('W') {
            return Variable::node(rest.parse().map_err(|_| bad())?);
        }
        if let Some(rest) = s.strip_prefix('S') {
            let (from, to) = rest.split_once('^').ok_or_else(bad)?;
            return Variable::helper(
                from.parse().map_err(|_| bad())?,
                to.parse().map_err(|_| bad())?,
            );
        }
        Err(bad())
    }
}

impl Serialize for Variable {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for Variable {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let text = String::deserialize(d)?;
        text.parse().map_err(serde::de::Error::custom)
    }
}

/// A finite set of variables with set semantics.
#[derive(Debug, Clone, Default, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct VarSet(BTreeSet<Variable>);

impl VarSet {
    pub fn new() -> Self {
        VarSet(BTreeSet::new())
    }

    /// `W_J` for the given nodes.
    pub fn nodes<I: IntoIterator<Item = usize>>(nodes: I) -> Self {
        nodes.into_iter().map(Variable::Node).collect()
    }

    /// `S_I^J`: every transfer from a node in `sources` to a distinct node in
    /// `targets`.
    pub fn helpers(sources: &[usize], targets: &[usize]) -> Self {
        let mut set = VarSet::new();
        for &i in sources {
            for &j in targets {
                if i != j {
                    set.insert(Variable::Helper { from: i, to: j });
                }
            }
        }
        set
    }

    pub fn insert(&mut self, var: Variable) -> bool {
        self.0.insert(var)
    }

    pub fn remove(&mut self, var: &Variable) -> bool {
        self.0.remove(var)
    }

    pub fn contains(&self, var: &Variable) -> bool {
        self.0.contains(var)
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = &Variable> + '_ {
        self.0.iter()
    }

    pub fn is_subset(&self, other: &VarSet) -> bool {
        self.0.is_subset(&other.0)
    }

    pub fn is_disjoint(&self, other: &VarSet) -> bool {
        self.0.is_disjoint(&other.0)
    }

    pub fn union(&self, other: &VarSet) -> VarSet {
        VarSet(self.0.union(&other.0).copied().collect())
    }

    pub fn difference(&self, other: &VarSet) -> VarSet {
        VarSet(self.0.difference(&other.0).copied().collect())
    }

    pub fn extend_from(&mut self, other: &VarSet) {
        self.0.extend(other.0.iter().copied());
    }

    /// First member of `self` missing from `other`.
    pub fn first_missing_from(&self, other: &VarSet) -> Option<Variable> {
        self.0.iter().find(|v| !other.contains(v)).copied()
    }

    pub fn node_count(&self) -> usize {
        self.0
            .iter()
            .filter(|v| matches!(v, Variable::Node(_)))
            .count()
    }

    pub fn helper_count(&self) -> usize {
        self.0
            .iter()
            .filter(|v| matches!(v, Variable::Helper { .. }))
            .count()
    }
}

impl FromIterator<Variable> for VarSet {
    fn from_iter<I: IntoIterator<Item = Variable>>(iter: I) -> Self {
        VarSet(iter.into_iter().collect())
    }
}

impl Extend<Variable> for VarSet {
    fn extend<I: IntoIterator<Item = Variable>>(&mut self, iter: I) {
        self.0.extend(iter)
    }
}

impl<'a> IntoIterator for &'a VarSet {
    type Item = &'a Variable;
    type IntoIter = std::collections::btree_set::Iter<'a, Variable>;

    fn into_iter(self) -> Self::IntoIter {
        self.0.iter()
    }
}

impl fmt::Display for VarSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{")?;
        for (n, v) in self.0.iter().enumerate() {
            if n > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{v}")?;
        }
        write!(f, "}}")
    }
}
