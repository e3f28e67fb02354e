use serde::{Deserialize, Serialize};

use super::bound::{LinearBound, Provenance};
use super::config::MinimalConfiguration;
use crate::error::{Error, Result};
use crate::model::{bq, var_weight, LinearForm, SystemParams, VarSet, Variable};

/// One copy `(A_i, a_i)` of the chain.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ChainStep {
    pub big: VarSet,
    pub small: VarSet,
}

/// How the joint entropy of the small sets is accounted for.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "rule", rename_all = "snake_case")]
pub enum ChainClosing {
    /// `a_n` is determined by `a_1 … a_{n−1}` and is not counted.
    DropLast,
    /// Every small set is counted; a single helper `tail` with entropy
    /// exactly `β`, determined by every `A_i` and by the union of the small
    /// sets, is subtracted once.
    ExactTail { tail: Variable },
}

/// Parameters the certificate was generated from (informational).
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "theorem", rename_all = "snake_case")]
pub enum ChainOrigin {
    Rs {
        q: usize,
        ell: usize,
        m: usize,
        q_list: Vec<usize>,
    },
    RsUnit {
        q_list: Vec<usize>,
    },
    Custom,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ChainCertificate {
    pub origin: ChainOrigin,
    pub steps: Vec<ChainStep>,
    pub closing: ChainClosing,
    /// Set when the certificate rests on a premise the checker cannot
    /// establish; such certificates verify as unverified at best.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub unverified_premise: Option<String>,
}

impl ChainCertificate {
    /// `(n, Σ w(A_i) + Σ w(a_i) − correction)` as prescribed by the closing
    /// rule.
    pub fn claim(&self) -> (i64, LinearForm) {
        let n = self.steps.len();
        let mut form: LinearForm = self.steps.iter().map(|s| var_weight(&s.big)).sum();
        match &self.closing {
            ChainClosing::DropLast => {
                form += self
                    .steps
                    .iter()
                    .take(n.saturating_sub(1))
                    .map(|s| var_weight(&s.small))
                    .sum();
            }
            ChainClosing::ExactTail { tail } => {
                form += self.steps.iter().map(|s| var_weight(&s.small)).sum();
                form -= var_weight(&[*tail].into_iter().collect());
            }
        }
        (n as i64, form)
    }

    /// Union of all small sets `a_1 … a_n`.
    pub fn small_union(&self, upto: usize) -> VarSet {
        let mut set = VarSet::new();
        for step in &self.steps[..upto] {
            set.extend_from(&step.small);
        }
        set
    }
}

/// Options for [`thm_rs_bound_with`].
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct RsOptions {
    /// Allow `m > d + 1 − k`. The last copy then cannot be built and the
    /// certificate carries an unverified premise.
    pub relax_helper_count: bool,
}

struct RsLayout {
    l: Vec<usize>,
    m: Vec<usize>,
    u: Vec<usize>,
    /// `(V_i, U_i)` per entry of `q_list`.
    parts: Vec<(Vec<usize>, Vec<usize>)>,
}

fn rs_layout(
    params: &SystemParams,
    q: usize,
    ell: usize,
    m: usize,
    q_list: &[usize],
    relax: bool,
) -> Result<RsLayout> {
    let (k, d) = (params.k(), params.d());
    if ell == 0 || m == 0 {
        return Err(Error::Feasibility("ℓ and m must be at least 1".into()));
    }
    if q + ell + m > k {
        return Err(Error::Feasibility(format!(
            "q + ℓ + m = {} exceeds k = {k}",
            q + ell + m
        )));
    }
    if !relax && m > d + 1 - k {
        return Err(Error::Feasibility(format!(
            "m = {m} exceeds d + 1 − k = {}",
            d + 1 - k
        )));
    }
    if q_list.is_empty() {
        return Err(Error::Feasibility("q_list must be nonempty".into()));
    }
    let u = d + 1 - ell - m;
    let q_max = (k - ell - m).min(u);
    if let Some(bad) = q_list.iter().find(|&&qi| qi == 0 || qi > q_max) {
        return Err(Error::Feasibility(format!(
            "q_i = {bad} outside [1, {q_max}]"
        )));
    }
    let total: usize = q_list.iter().map(|qi| u - qi).sum();
    if total < u {
        return Err(Error::Feasibility(format!(
            "sets V_i cannot have empty intersection: Σ(u − q_i) = {total} < u = {u}"
        )));
    }
    let l: Vec<usize> = (1..=ell).collect();
    let mm: Vec<usize> = (ell + 1..=ell + m).collect();
    let uu: Vec<usize> = (ell + m + 1..=d + 1).collect();

    // Complements C_i are consecutive cyclic runs of U, so together they
    // cover U; U_i takes the members of C_i not claimed earlier.
    let mut cursor = 0;
    let mut claimed = vec![false; uu.len()];
    let mut parts = Vec::with_capacity(q_list.len());
    for &qi in q_list {
        let mut in_complement = vec![false; uu.len()];
        let mut owned = Vec::new();
        for _ in 0..u - qi {
            in_complement[cursor] = true;
            if !claimed[cursor] {
                claimed[cursor] = true;
                owned.push(uu[cursor]);
            }
            cursor = (cursor + 1) % uu.len();
        }
        let vi: Vec<usize> = uu
            .iter()
            .zip(&in_complement)
            .filter(|(_, &c)| !c)
            .map(|(&x, _)| x)
            .collect();
        owned.sort_unstable();
        parts.push((vi, owned));
    }
    if claimed.iter().any(|c| !c) {
        return Err(Error::Internal("helper sets U_i do not cover U".into()));
    }
    Ok(RsLayout {
        l,
        m: mm,
        u: uu,
        parts,
    })
}

fn step_from(config: &MinimalConfiguration, small: VarSet) -> Result<ChainStep> {
    let all = config.expand();
    if let Some(missing) = small.first_missing_from(&all) {
        return Err(Error::Internal(format!(
            "{missing} is not part of the configuration"
        )));
    }
    Ok(ChainStep {
        big: all.difference(&small),
        small,
    })
}

/// Copies `1 … c−1` shared by both variants: the `V_i` copies followed by
/// the copy with `V' = L ∪ M`.
fn rs_common_steps(params: &SystemParams, layout: &RsLayout) -> Result<Vec<ChainStep>> {
    let lm: Vec<usize> = layout.l.iter().chain(&layout.m).copied().collect();
    let mut steps = Vec::new();
    let last = layout.parts.len() - 1;
    for (idx, (vi, ui)) in layout.parts.iter().enumerate() {
        let config = MinimalConfiguration::choose(params, vi, &lm, &[])?;
        let mut small = VarSet::helpers(ui, &layout.m);
        if idx == last {
            for (pos, &j) in layout.m.iter().enumerate() {
                small.extend_from(&VarSet::helpers(&layout.m[pos + 1..], &[j]));
            }
        }
        steps.push(step_from(&config, small)?);
    }
    let config = MinimalConfiguration::choose(params, &lm, &[], &[])?;
    steps.push(step_from(&config, VarSet::nodes(layout.l.iter().copied()))?);
    Ok(steps)
}

/// `c·B ≤ B_q + Σ B_{q_i} + B_{ℓ+m} − ℓmβ` with `c = |q_list| + 2`.
pub fn thm_rs_bound(
    params: &SystemParams,
    q: usize,
    ell: usize,
    m: usize,
    q_list: &[usize],
) -> Result<LinearBound> {
    thm_rs_bound_with(params, q, ell, m, q_list, RsOptions::default())
}

pub fn thm_rs_bound_with(
    params: &SystemParams,
    q: usize,
    ell: usize,
    m: usize,
    q_list: &[usize],
    options: RsOptions,
) -> Result<LinearBound> {
    if q == 0 {
        return Err(Error::Feasibility("q must be at least 1".into()));
    }
    let layout = rs_layout(params, q, ell, m, q_list, options.relax_helper_count)?;
    let mut expected = bq(params, q)? + bq(params, ell + m)? - LinearForm::beta((ell * m) as i64);
    for &qi in q_list {
        expected += bq(params, qi)?;
    }
    let c = (q_list.len() + 2) as i64;
    let origin = ChainOrigin::Rs {
        q,
        ell,
        m,
        q_list: q_list.to_vec(),
    };
    let mut steps = rs_common_steps(params, &layout)?;

    if m > params.d() + 1 - params.k() {
        let cert = ChainCertificate {
            origin,
            steps,
            closing: ChainClosing::DropLast,
            unverified_premise: Some(format!(
                "copy {c} needs the {m} helpers of M among the d+1-k = {} unused nodes",
                params.d() + 1 - params.k()
            )),
        };
        return LinearBound::new(*params, c, expected, Provenance::Chain(cert));
    }

    let intact: Vec<usize> = layout.u[..q].to_vec();
    let config = MinimalConfiguration::choose(params, &intact, &layout.l, &layout.m)?;
    steps.push(step_from(&config, VarSet::helpers(&layout.m, &layout.l))?);
    let cert = ChainCertificate {
        origin,
        steps,
        closing: ChainClosing::DropLast,
        unverified_premise: None,
    };
    let (n, form) = cert.claim();
    if n != c || form != expected {
        return Err(Error::Internal(format!(
            "chain accounting {n}B ≤ {form} differs from {c}B ≤ {expected}"
        )));
    }
    LinearBound::new(*params, c, expected, Provenance::Chain(cert))
}

/// `(c−1)·B ≤ Σ B_{q_i} + B_2 − β` for `ℓ = m = 1`, the last small set being
/// bounded by the exact entropy of `S_2^1`.
pub fn thm_rs_bound_unit(params: &SystemParams, q_list: &[usize]) -> Result<LinearBound> {
    let layout = rs_layout(params, 0, 1, 1, q_list, false)?;
    let mut expected = bq(params, 2)? - LinearForm::beta(1);
    for &qi in q_list {
        expected += bq(params, qi)?;
    }
    let c = (q_list.len() + 1) as i64;
    let steps = rs_common_steps(params, &layout)?;
    let cert = ChainCertificate {
        origin: ChainOrigin::RsUnit {
            q_list: q_list.to_vec(),
        },
        steps,
        closing: ChainClosing::ExactTail {
            tail: Variable::Helper { from: 2, to: 1 },
        },
        unverified_premise: None,
    };
    let (n, form) = cert.claim();
    if n != c || form != expected {
        return Err(Error::Internal(format!(
            "chain accounting {n}B ≤ {form} differs from {c}B ≤ {expected}"
        )));
    }
    LinearBound::new(*params, c, expected, Provenance::Chain(cert))
}
