use std::fmt;

use rayon::prelude::*;
use serde::Serialize;

use super::gf2::{gf2_rank, gf2_solve, Gf2Matrix};
use super::spec::RegeneratingCodeSpec;
use crate::error::{Error, Result};
use crate::generators::Verdict;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum CodeCheck {
    Recovery,
    Repair,
    Parity,
}

impl fmt::Display for CodeCheck {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            CodeCheck::Recovery => "recovery",
            CodeCheck::Repair => "repair",
            CodeCheck::Parity => "parity",
        })
    }
}

/// Outcome of one verifier. `checked` counts the conditions examined
/// before stopping; `failure` describes the first violation.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CodeReport {
    pub check: CodeCheck,
    pub verdict: Verdict,
    pub checked: usize,
    pub failure: Option<String>,
}

impl CodeReport {
    fn pass(check: CodeCheck, checked: usize) -> Self {
        CodeReport {
            check,
            verdict: Verdict::Pass,
            checked,
            failure: None,
        }
    }

    fn fail(check: CodeCheck, checked: usize, why: String) -> Self {
        CodeReport {
            check,
            verdict: Verdict::Fail,
            checked,
            failure: Some(why),
        }
    }

    pub fn passed(&self) -> bool {
        self.verdict == Verdict::Pass
    }
}

impl fmt::Display for CodeReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{}: {} ({} checked)",
            self.check, self.verdict, self.checked
        )?;
        if let Some(why) = &self.failure {
            write!(f, ": {why}")?;
        }
        Ok(())
    }
}

/// All `size`-subsets of `items`, lexicographic.
pub(crate) fn subsets(items: &[usize], size: usize) -> Vec<Vec<usize>> {
    fn go(
        items: &[usize],
        size: usize,
        start: usize,
        cur: &mut Vec<usize>,
        out: &mut Vec<Vec<usize>>,
    ) {
        if cur.len() == size {
            out.push(cur.clone());
            return;
        }
        for idx in start..items.len() {
            if items.len() - idx < size - cur.len() {
                break;
            }
            cur.push(items[idx]);
            go(items, size, idx + 1, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    go(items, size, 0, &mut Vec::new(), &mut out);
    out
}

fn node_columns(spec: &RegeneratingCodeSpec, nodes: &[usize]) -> Vec<usize> {
    nodes
        .iter()
        .flat_map(|&i| (i - 1) * spec.alpha..i * spec.alpha)
        .collect()
}

fn fmt_set(nodes: &[usize]) -> String {
    let inner: Vec<String> = nodes.iter().map(usize::to_string).collect();
    format!("{{{}}}", inner.join(","))
}

/// Every `k` nodes together determine the message.
pub fn verify_recovery(spec: &RegeneratingCodeSpec) -> CodeReport {
    let nodes: Vec<usize> = spec.params.nodes().collect();
    let all = subsets(&nodes, spec.params.k());
    let bad = all.par_iter().find_map_first(|set| {
        let rank = gf2_rank(&spec.generator.select_columns(&node_columns(spec, set)));
        (rank != spec.b).then(|| (set.clone(), rank))
    });
    match bad {
        None => CodeReport::pass(CodeCheck::Recovery, all.len()),
        Some((set, rank)) => {
            let pos = all.iter().position(|s| *s == set).unwrap_or(0);
            CodeReport::fail(
                CodeCheck::Recovery,
                pos + 1,
                format!("nodes {} have rank {rank}, need {}", fmt_set(&set), spec.b),
            )
        }
    }
}

/// Every node is rebuilt from what any `d` others send it.
pub fn verify_repair(spec: &RegeneratingCodeSpec) -> Result<CodeReport> {
    let n = spec.node_count();
    for j in 1..=n {
        for i in (1..=n).filter(|&i| i != j) {
            if !spec.repair.contains_key(&(i, j)) {
                return Err(Error::Spec(format!("missing repair map {i}->{j}")));
            }
        }
    }
    let mut checked = 0;
    for (&(i, j), map) in &spec.repair {
        checked += 1;
        if map.rows() > spec.beta {
            return Ok(CodeReport::fail(
                CodeCheck::Repair,
                checked,
                format!(
                    "repair map {i}->{j} sends {} symbols, beta is {}",
                    map.rows(),
                    spec.beta
                ),
            ));
        }
    }
    let mut cases = Vec::new();
    for j in 1..=n {
        let others: Vec<usize> = (1..=n).filter(|&i| i != j).collect();
        for helpers in subsets(&others, spec.params.d()) {
            cases.push((j, helpers));
        }
    }
    let bad = cases.par_iter().find_map_first(|(j, helpers)| {
        let mut sent = Gf2Matrix::zeros(0, spec.b);
        for &i in helpers {
            let part = spec.repair[&(i, *j)].mul(&spec.node_rows(i)).ok()?;
            sent = sent.vstack(&part).ok()?;
        }
        match gf2_solve(&sent, &spec.node_rows(*j)) {
            Ok(Some(_)) => None,
            _ => Some((*j, helpers.clone())),
        }
    });
    Ok(match bad {
        None => CodeReport::pass(CodeCheck::Repair, checked + cases.len()),
        Some((j, helpers)) => {
            let pos = cases
                .iter()
                .position(|(jj, h)| *jj == j && *h == helpers)
                .unwrap_or(0);
            CodeReport::fail(
                CodeCheck::Repair,
                checked + pos + 1,
                format!(
                    "node {j} is not spanned by what helpers {} send",
                    fmt_set(&helpers)
                ),
            )
        }
    })
}

/// Ranks of the `alpha × alpha` blocks of the parity matrix, row-major by
/// block.
pub fn parity_block_ranks(spec: &RegeneratingCodeSpec) -> Option<Vec<Vec<usize>>> {
    let h = spec.parity.as_ref()?;
    let n = spec.node_count();
    Some(
        (0..n)
            .map(|bi| {
                (0..n)
                    .map(|bj| gf2_rank(&h.block(bi, bj, spec.alpha, spec.alpha)))
                    .collect()
            })
            .collect(),
    )
}

/// Orthogonality to the generator, total rank `nα − B`, full-rank diagonal
/// blocks and off-diagonal blocks of rank at most `β`.
pub fn verify_parity_structure(spec: &RegeneratingCodeSpec) -> CodeReport {
    let Some(h) = &spec.parity else {
        return CodeReport::fail(CodeCheck::Parity, 0, "no parity matrix".into());
    };
    let orthogonal = spec
        .generator
        .mul(&h.transpose())
        .map(|p| p.is_zero())
        .unwrap_or(false);
    if !orthogonal {
        return CodeReport::fail(
            CodeCheck::Parity,
            1,
            "generator is not orthogonal to parity".into(),
        );
    }
    let n = spec.node_count();
    let want = n * spec.alpha - spec.b.min(n * spec.alpha);
    let rank = gf2_rank(h);
    if rank != want {
        return CodeReport::fail(
            CodeCheck::Parity,
            2,
            format!("parity has rank {rank}, expected {want}"),
        );
    }
    let ranks = parity_block_ranks(spec).expect("parity present");
    let mut checked = 2;
    for (bi, row) in ranks.iter().enumerate() {
        for (bj, &r) in row.iter().enumerate() {
            checked += 1;
            if bi == bj && r != spec.alpha {
                return CodeReport::fail(
                    CodeCheck::Parity,
                    checked,
                    format!(
                        "diagonal block ({},{}) has rank {r}, need {}",
                        bi + 1,
                        bj + 1,
                        spec.alpha
                    ),
                );
            }
            if bi != bj && r > spec.beta {
                return CodeReport::fail(
                    CodeCheck::Parity,
                    checked,
                    format!(
                        "block ({},{}) has rank {r}, above beta = {}",
                        bi + 1,
                        bj + 1,
                        spec.beta
                    ),
                );
            }
        }
    }
    CodeReport::pass(CodeCheck::Parity, checked)
}
