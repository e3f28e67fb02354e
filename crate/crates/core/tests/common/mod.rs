//! Independent oracles shared by the integration tests.
#![allow(dead_code)]

use regen_bounds::codes::Gf2Matrix;
use regen_bounds::generators::{LinearBound, Provenance};
use regen_bounds::model::{LinearForm, Rational, SystemParams};

pub fn r(p: i128, q: i128) -> Rational {
    Rational::new(p, q)
}

pub fn params(k: usize, d: usize) -> SystemParams {
    SystemParams::new(k, d).unwrap()
}

/// `(a, b)` of `B_q = qα + [C(k−q, 2) + (d+1−k)(k−q)]β`, straight from the
/// formula.
pub fn cutset_coeffs(k: i128, d: i128, q: i128) -> (i128, i128) {
    let rest = k - q;
    (q, rest * (rest - 1) / 2 + (d + 1 - k) * rest)
}

pub fn cutset_value(k: i128, d: i128, q: i128, alpha_bar: &Rational) -> Rational {
    let (a, b) = cutset_coeffs(k, d, q);
    alpha_bar * Rational::from_integer(a) + Rational::from_integer(b)
}

/// `min_q B_q` at `β = 1`.
pub fn functional(k: i128, d: i128, alpha_bar: &Rational) -> Rational {
    (0..=k)
        .map(|q| cutset_value(k, d, q, alpha_bar))
        .min()
        .unwrap()
}

/// `min_i (a_i ᾱ + b_i)/c_i` by direct evaluation.
pub fn brute_min(bounds: &[LinearBound], alpha_bar: &Rational) -> Rational {
    bounds
        .iter()
        .map(|b| b.value_normalized(alpha_bar))
        .min()
        .unwrap()
}

pub fn bare_bound(params: SystemParams, c: i64, a: i64, b: i64) -> LinearBound {
    LinearBound::new(
        params,
        c,
        LinearForm::new(a, b),
        Provenance::CutSet { q: 0 },
    )
    .unwrap()
}

/// `0, step, 2·step, …` up to and including `hi`, starting at `lo`.
pub fn grid(lo: Rational, hi: Rational, step: Rational) -> Vec<Rational> {
    let mut out = Vec::new();
    let mut x = lo;
    while x <= hi {
        out.push(x);
        x += step;
    }
    out
}

/// Rank as `log2 |row span|`, by listing all `2^rows` row combinations.
pub fn span_rank(m: &Gf2Matrix) -> usize {
    let rows: Vec<u128> = (0..m.rows())
        .map(|r| (0..m.cols()).fold(0u128, |acc, c| acc | ((m.get(r, c) as u128) << c)))
        .collect();
    let mut seen = std::collections::HashSet::new();
    for mask in 0u32..(1 << rows.len()) {
        let v = rows
            .iter()
            .enumerate()
            .filter(|(i, _)| mask >> i & 1 == 1)
            .fold(0, |acc, (_, r)| acc ^ r);
        seen.insert(v);
    }
    seen.len().trailing_zeros() as usize
}

use regen_bounds::generators::ChainCertificate;
use regen_bounds::model::Variable;

/// Every certificate obtained from `bound` by deleting one variable from,
/// or adding one node variable to, a single chain set; for packings, by
/// shifting one rectangle index or `q`.
pub fn tamperings(bound: &LinearBound) -> Vec<LinearBound> {
    let mut out = Vec::new();
    let n = bound.params.node_count();
    let mut chain_variants =
        |cert: &ChainCertificate, wrap: &dyn Fn(ChainCertificate) -> Provenance| {
            for (i, step) in cert.steps.iter().enumerate() {
                for which in 0..2 {
                    let set = if which == 0 { &step.big } else { &step.small };
                    for var in set.iter() {
                        let mut c = cert.clone();
                        let target = if which == 0 {
                            &mut c.steps[i].big
                        } else {
                            &mut c.steps[i].small
                        };
                        target.remove(var);
                        out.push(LinearBound {
                            provenance: wrap(c),
                            ..bound.clone()
                        });
                    }
                    if let Some(extra) = (1..=n).map(Variable::Node).find(|v| !set.contains(v)) {
                        let mut c = cert.clone();
                        let target = if which == 0 {
                            &mut c.steps[i].big
                        } else {
                            &mut c.steps[i].small
                        };
                        target.insert(extra);
                        out.push(LinearBound {
                            provenance: wrap(c),
                            ..bound.clone()
                        });
                    }
                }
            }
        };
    match &bound.provenance {
        Provenance::CutSet { .. } => {}
        Provenance::Chain(cert) => chain_variants(cert, &|c| Provenance::Chain(c)),
        Provenance::Combination(comb) => {
            let refinements = comb.refinements.clone();
            chain_variants(&comb.base, &move |c| {
                Provenance::Combination(regen_bounds::generators::CombinationCertificate {
                    base: c,
                    refinements: refinements.clone(),
                })
            });
            if !comb.refinements.is_empty() {
                let mut c = comb.clone();
                c.refinements.pop();
                out.push(LinearBound {
                    provenance: Provenance::Combination(c),
                    ..bound.clone()
                });
            }
        }
        Provenance::Packing(cert) => {
            for delta in [-1i64, 1] {
                let shift = |v: usize| (v as i64 + delta).max(0) as usize;
                let mut c = cert.clone();
                c.q = shift(c.q);
                out.push(LinearBound {
                    provenance: Provenance::Packing(c),
                    ..bound.clone()
                });
                for idx in 0..cert.rectangles.len() {
                    let mut c = cert.clone();
                    c.rectangles[idx].r = shift(c.rectangles[idx].r);
                    out.push(LinearBound {
                        provenance: Provenance::Packing(c),
                        ..bound.clone()
                    });
                }
            }
        }
    }
    out.retain(|t| t.provenance != bound.provenance);
    out
}
