use std::collections::{BTreeMap, HashMap, HashSet};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::bound::{cutset_bounds, BoundKey, LinearBound, Provenance};
use super::chain::{thm_rs_bound, thm_rs_bound_unit, ChainCertificate};
use super::combine::{CombinationCertificate, Refinement};
use super::packing::{as_stated_term, p0_term, LmMode, PackingCertificate, Rectangle};
use crate::envelope::lines::{lower_envelope, Line};
use crate::error::{Error, Result};
use crate::model::{bq, LinearForm, Rational, SystemParams, VarSet, Variable};

/// Caps on the search. Rectangles are always contiguous runs of nodes.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct EnumerationLimits {
    /// Longest chain (number of configuration copies).
    pub max_chain: usize,
    /// Most rectangles in one packing.
    pub max_rectangles: usize,
    /// Most rectangle refinements added to one chain.
    pub max_refinements: usize,
    pub mode: LmMode,
}

impl Default for EnumerationLimits {
    fn default() -> Self {
        EnumerationLimits {
            max_chain: 6,
            max_rectangles: 4,
            max_refinements: 8,
            mode: LmMode::Auto,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Enumeration {
    pub params: SystemParams,
    /// Sorted by normalized key, one bound per key.
    pub bounds: Vec<LinearBound>,
    /// Some instance was left out because of a cap.
    pub truncated: bool,
    pub notes: Vec<String>,
}

/// Largest supported universe: helper pairs are tracked in 256-bit masks.
pub const MAX_NODES: usize = 16;

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Hash)]
struct Mask([u64; 4]);

impl Mask {
    fn cell(from: usize, to: usize) -> usize {
        (from - 1) * MAX_NODES + (to - 1)
    }

    fn insert(&mut self, idx: usize) {
        self.0[idx / 64] |= 1 << (idx % 64);
    }

    fn rectangle(l0: usize, ell: usize, m0: usize, m: usize) -> Mask {
        let mut mask = Mask::default();
        for i in m0..m0 + m {
            for j in l0..l0 + ell {
                mask.insert(Mask::cell(i, j));
            }
        }
        mask
    }

    fn helpers_of(vars: &VarSet) -> Mask {
        let mut mask = Mask::default();
        for v in vars {
            if let Variable::Helper { from, to } = *v {
                mask.insert(Mask::cell(from, to));
            }
        }
        mask
    }

    fn intersects(&self, other: &Mask) -> bool {
        self.0.iter().zip(&other.0).any(|(a, b)| a & b != 0)
    }

    fn is_subset(&self, other: &Mask) -> bool {
        self.0.iter().zip(&other.0).all(|(a, b)| a & !b == 0)
    }

    fn union(&self, other: &Mask) -> Mask {
        let mut out = *self;
        for (a, b) in out.0.iter_mut().zip(&other.0) {
            *a |= b;
        }
        out
    }

    fn count(&self) -> usize {
        self.0.iter().map(|w| w.count_ones() as usize).sum()
    }
}

#[derive(Debug, Clone, Copy)]
struct Placement {
    l0: usize,
    m0: usize,
    mask: Mask,
}

/// A rectangle shape with the undominated choices of `(r, t, s)` for it.
#[derive(Debug, Clone)]
struct Shape {
    ell: usize,
    m: usize,
    /// Pieces of the lower envelope of the term, left to right.
    terms: Vec<(LinearForm, usize, usize, usize)>,
    breakpoints: Vec<Rational>,
}

impl Shape {
    fn new(params: &SystemParams, ell: usize, m: usize, mode: LmMode) -> Shape {
        let k = params.k();
        let mut candidates: Vec<(LinearForm, usize, usize, usize)> = Vec::new();
        for r in ell..=k - m {
            match mode {
                LmMode::AsStated => {
                    let rect = Rectangle::interval(1, ell, ell + 1, m, r, r + m, r);
                    candidates.push((as_stated_term(params, &rect).expect("valid"), r, r + m, r));
                }
                _ => {
                    for t in r + m..=k {
                        for s in r..=k {
                            let rect = Rectangle::interval(1, ell, ell + 1, m, r, t, s);
                            let form = p0_term(params, &rect).expect("valid")
                                - LinearForm::beta((ell * m) as i64);
                            candidates.push((form, r, t, s));
                        }
                    }
                }
            }
        }
        let lines: Vec<Line> = candidates
            .iter()
            .map(|(f, ..)| {
                Line::new(
                    Rational::from_integer(f.alpha_coeff as i128),
                    Rational::from_integer(f.beta_coeff as i128),
                )
            })
            .collect();
        let pieces = lower_envelope(&lines);
        Shape {
            ell,
            m,
            terms: pieces.iter().map(|p| candidates[p.index]).collect(),
            breakpoints: pieces.iter().filter_map(|p| p.hi).collect(),
        }
    }

    fn area(&self) -> usize {
        self.ell * self.m
    }

    /// Index of the piece active at a point that is not a breakpoint.
    fn piece_at(&self, x: &Rational) -> usize {
        self.breakpoints.iter().take_while(|b| *b < x).count()
    }

    fn rectangle(&self, at: &Placement, piece: usize) -> Rectangle {
        let (_, r, t, s) = self.terms[piece];
        Rectangle::interval(at.l0, self.ell, at.m0, self.m, r, t, s)
    }
}

/// Points strictly inside each elementary interval cut out by `breaks`.
fn sample_points(mut breaks: Vec<Rational>) -> Vec<Rational> {
    breaks.sort();
    breaks.dedup();
    let two = Rational::from_integer(2);
    let mut points = Vec::with_capacity(breaks.len() + 1);
    let mut prev = Rational::from_integer(0);
    for b in &breaks {
        points.push((prev + b) / two);
        prev = *b;
    }
    points.push(prev + Rational::from_integer(1));
    points
}

/// Budget of search nodes for a single packing problem.
const SEARCH_BUDGET: usize = 200_000;

enum Packed {
    Found(Vec<usize>),
    Infeasible,
    OutOfBudget,
}

/// Finds disjoint placements for the multiset `items` (shape indices).
fn pack(
    items: &[usize],
    shapes: &[Shape],
    placements: &[Vec<Placement>],
    free_cells: usize,
) -> Packed {
    let mut order: Vec<usize> = (0..items.len()).collect();
    order.sort_by_key(|&i| (std::cmp::Reverse(shapes[items[i]].area()), items[i]));
    let areas: Vec<usize> = order.iter().map(|&i| shapes[items[i]].area()).collect();
    let mut suffix = vec![0; areas.len() + 1];
    for i in (0..areas.len()).rev() {
        suffix[i] = suffix[i + 1] + areas[i];
    }
    if suffix[0] > free_cells {
        return Packed::Infeasible;
    }
    let mut chosen = vec![0; items.len()];
    let mut budget = SEARCH_BUDGET;

    #[allow(clippy::too_many_arguments)]
    fn go(
        depth: usize,
        used: Mask,
        order: &[usize],
        items: &[usize],
        placements: &[Vec<Placement>],
        suffix: &[usize],
        free_cells: usize,
        chosen: &mut [usize],
        budget: &mut usize,
    ) -> Option<bool> {
        if depth == order.len() {
            return Some(true);
        }
        if *budget == 0 {
            return None;
        }
        *budget -= 1;
        if used.count() + suffix[depth] > free_cells {
            return Some(false);
        }
        let shape = items[order[depth]];
        let start = if depth > 0 && items[order[depth - 1]] == shape {
            chosen[order[depth - 1]] + 1
        } else {
            0
        };
        for (idx, p) in placements[shape].iter().enumerate().skip(start) {
            if p.mask.intersects(&used) {
                continue;
            }
            chosen[order[depth]] = idx;
            match go(
                depth + 1,
                used.union(&p.mask),
                order,
                items,
                placements,
                suffix,
                free_cells,
                chosen,
                budget,
            ) {
                Some(true) => return Some(true),
                Some(false) => {}
                None => return None,
            }
        }
        Some(false)
    }

    match go(
        0,
        Mask::default(),
        &order,
        items,
        placements,
        &suffix,
        free_cells,
        &mut chosen,
        &mut budget,
    ) {
        Some(true) => Packed::Found(chosen),
        Some(false) => Packed::Infeasible,
        None => Packed::OutOfBudget,
    }
}

/// Largest set of pairwise disjoint masks (branch and bound, anytime).
fn max_disjoint(masks: &[Mask], area: usize) -> Vec<usize> {
    struct Search<'a> {
        masks: &'a [Mask],
        area: usize,
        best: Vec<usize>,
        current: Vec<usize>,
        budget: usize,
    }
    impl Search<'_> {
        fn go(&mut self, from: usize, used: Mask) {
            if self.current.len() > self.best.len() {
                self.best = self.current.clone();
            }
            if self.budget == 0 {
                return;
            }
            self.budget -= 1;
            let rest: Vec<usize> = (from..self.masks.len())
                .filter(|&i| !self.masks[i].intersects(&used))
                .collect();
            let cover = rest
                .iter()
                .fold(Mask::default(), |acc, &i| acc.union(&self.masks[i]));
            let optimistic = rest.len().min(cover.count() / self.area);
            if self.current.len() + optimistic <= self.best.len() {
                return;
            }
            for &i in &rest {
                self.current.push(i);
                self.go(i + 1, used.union(&self.masks[i]));
                self.current.pop();
            }
        }
    }
    let mut search = Search {
        masks,
        area,
        best: Vec::new(),
        current: Vec::new(),
        budget: SEARCH_BUDGET,
    };
    search.go(0, Mask::default());
    search.best
}

/// A bound waiting to be materialized once it survives deduplication.
#[derive(Debug, Clone)]
enum Candidate {
    Ready(LinearBound),
    Packing {
        q: usize,
        items: Vec<usize>,
        chosen: Vec<usize>,
        pieces: Vec<usize>,
    },
    Combination {
        chain: usize,
        shape: usize,
        piece: usize,
    },
}

struct Collected {
    best: BTreeMap<BoundKey, (usize, Candidate)>,
    truncated: bool,
    notes: Vec<String>,
}

impl Collected {
    fn new() -> Self {
        Collected {
            best: BTreeMap::new(),
            truncated: false,
            notes: Vec::new(),
        }
    }

    fn offer(&mut self, key: BoundKey, complexity: usize, candidate: Candidate) {
        match self.best.get(&key) {
            Some((existing, _)) if *existing <= complexity => {}
            _ => {
                self.best.insert(key, (complexity, candidate));
            }
        }
    }

    fn truncate(&mut self, note: String) {
        self.truncated = true;
        self.notes.push(note);
    }

    fn absorb(&mut self, other: Collected) {
        for (key, (complexity, candidate)) in other.best {
            self.offer(key, complexity, candidate);
        }
        self.truncated |= other.truncated;
        self.notes.extend(other.notes);
    }
}

fn key_of(c: i64, form: LinearForm) -> BoundKey {
    let probe = LinearBound {
        params: SystemParams::new(1, 1).expect("valid"),
        c,
        form,
        provenance: Provenance::CutSet { q: 0 },
    };
    probe.key()
}

/// Non-increasing sequences of the given length over `1..=max`.
fn multisets(len: usize, max: usize) -> Vec<Vec<usize>> {
    fn go(len: usize, top: usize, current: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if current.len() == len {
            out.push(current.clone());
            return;
        }
        for v in (1..=top).rev() {
            current.push(v);
            go(len, v, current, out);
            current.pop();
        }
    }
    let mut out = Vec::new();
    go(len, max, &mut Vec::new(), &mut out);
    out
}

/// Chain instances of both variants within the length cap.
fn chain_bounds(
    params: &SystemParams,
    limits: &EnumerationLimits,
    out: &mut Collected,
) -> Vec<LinearBound> {
    let (k, d) = (params.k(), params.d());
    let mut jobs: Vec<(usize, usize, usize, Vec<usize>)> = Vec::new();
    let mut unit_jobs: Vec<Vec<usize>> = Vec::new();
    let record = |out: &mut Collected, u: usize, q_max: usize, max_len: usize, label: String| {
        let min_len = u.div_ceil(u - q_max);
        if min_len > max_len {
            out.truncate(format!(
                "{label}: shortest feasible q_list has length {min_len}"
            ));
        }
        (min_len..=max_len)
            .flat_map(|len| multisets(len, q_max))
            .filter(|list| list.iter().map(|qi| u - qi).sum::<usize>() >= u)
            .collect::<Vec<_>>()
    };
    for ell in 1..k {
        for m in 1..k - ell {
            if m > d + 1 - k {
                continue;
            }
            let u = d + 1 - ell - m;
            let q_max = (k - ell - m).min(u);
            let lists = record(
                out,
                u,
                q_max,
                limits.max_chain.saturating_sub(2),
                format!("chain ℓ={ell} m={m}"),
            );
            for q in 1..=k - ell - m {
                for list in &lists {
                    jobs.push((q, ell, m, list.clone()));
                }
            }
        }
    }
    if k >= 3 {
        let u = d - 1;
        unit_jobs = record(
            out,
            u,
            (k - 2).min(u),
            limits.max_chain.saturating_sub(1),
            "unit chain".into(),
        );
    }
    let mut bounds: Vec<LinearBound> = jobs
        .par_iter()
        .map(|(q, ell, m, list)| {
            thm_rs_bound(params, *q, *ell, *m, list).expect("feasible by construction")
        })
        .collect();
    bounds.extend(
        unit_jobs
            .par_iter()
            .map(|list| thm_rs_bound_unit(params, list).expect("feasible by construction"))
            .collect::<Vec<_>>(),
    );
    bounds
}

/// Interval placements of `shape` whose cells satisfy `allowed`.
fn placements_where(
    n: usize,
    shape: &Shape,
    targets: std::ops::RangeInclusive<usize>,
    allowed: impl Fn(&Mask) -> bool,
) -> Vec<Placement> {
    let mut out = Vec::new();
    let (lo, hi) = (*targets.start(), *targets.end());
    for l0 in lo..=hi {
        if l0 + shape.ell - 1 > hi {
            break;
        }
        for m0 in l0 + shape.ell..=n {
            if m0 + shape.m - 1 > n {
                break;
            }
            let mask = Mask::rectangle(l0, shape.ell, m0, shape.m);
            if allowed(&mask) {
                out.push(Placement { l0, m0, mask });
            }
        }
    }
    out
}

fn packing_bounds(
    params: &SystemParams,
    limits: &EnumerationLimits,
    q: usize,
    shapes: &[Shape],
) -> Collected {
    let mut out = Collected::new();
    let (k, n) = (params.k(), params.node_count());
    let usable: Vec<usize> = (0..shapes.len())
        .filter(|&i| shapes[i].ell <= k - q)
        .collect();
    let placements: Vec<Vec<Placement>> = shapes
        .iter()
        .enumerate()
        .map(|(i, s)| {
            if usable.contains(&i) {
                placements_where(n, s, q + 1..=k, |_| true)
            } else {
                Vec::new()
            }
        })
        .collect();
    let usable: Vec<usize> = usable
        .into_iter()
        .filter(|&i| !placements[i].is_empty())
        .collect();
    let free_cells: usize = (q + 1..=k).map(|j| n - j).sum();
    let base = bq(params, q).expect("q ≤ k");

    let mut items = Vec::new();
    explore(
        0,
        &usable,
        &mut items,
        shapes,
        &placements,
        free_cells,
        limits,
        q,
        base,
        &mut out,
    );
    out
}

#[allow(clippy::too_many_arguments)]
fn explore(
    from: usize,
    usable: &[usize],
    items: &mut Vec<usize>,
    shapes: &[Shape],
    placements: &[Vec<Placement>],
    free_cells: usize,
    limits: &EnumerationLimits,
    q: usize,
    base: LinearForm,
    out: &mut Collected,
) {
    for pos in from..usable.len() {
        items.push(usable[pos]);
        match pack(items, shapes, placements, free_cells) {
            Packed::Found(chosen) => {
                emit_packing(q, items, &chosen, shapes, base, out);
                if items.len() < limits.max_rectangles {
                    explore(
                        pos, usable, items, shapes, placements, free_cells, limits, q, base, out,
                    );
                } else if !out.truncated {
                    let more = usable.iter().any(|&s| {
                        items.push(s);
                        let fits = !matches!(
                            pack(items, shapes, placements, free_cells),
                            Packed::Infeasible
                        );
                        items.pop();
                        fits
                    });
                    if more {
                        out.truncate(format!(
                            "packings with q={q} exceed {} rectangles",
                            limits.max_rectangles
                        ));
                    }
                }
            }
            Packed::Infeasible => {}
            Packed::OutOfBudget => {
                out.truncate(format!("packing search budget exhausted for q={q}"))
            }
        }
        items.pop();
    }
}

fn emit_packing(
    q: usize,
    items: &[usize],
    chosen: &[usize],
    shapes: &[Shape],
    base: LinearForm,
    out: &mut Collected,
) {
    let mut distinct: Vec<usize> = items.to_vec();
    distinct.dedup();
    let breaks: Vec<Rational> = distinct
        .iter()
        .flat_map(|&s| shapes[s].breakpoints.iter().copied())
        .collect();
    let mut seen = HashSet::new();
    for x in sample_points(breaks) {
        let pieces: Vec<usize> = items.iter().map(|&s| shapes[s].piece_at(&x)).collect();
        if !seen.insert(pieces.clone()) {
            continue;
        }
        let mut c = 1;
        let mut form = base;
        for (&s, &piece) in items.iter().zip(&pieces) {
            c += shapes[s].ell as i64;
            form += shapes[s].terms[piece].0;
        }
        let candidate = Candidate::Packing {
            q,
            items: items.to_vec(),
            chosen: chosen.to_vec(),
            pieces,
        };
        out.offer(key_of(c, form), 1 + items.len(), candidate);
    }
}

fn materialize_packing(
    params: &SystemParams,
    limits: &EnumerationLimits,
    shapes: &[Shape],
    q: usize,
    items: &[usize],
    chosen: &[usize],
    pieces: &[usize],
) -> LinearBound {
    let rectangles = items
        .iter()
        .zip(chosen)
        .zip(pieces)
        .map(|((&s, &p), &piece)| {
            let placements =
                placements_where(params.node_count(), &shapes[s], q + 1..=params.k(), |_| {
                    true
                });
            shapes[s].rectangle(&placements[p], piece)
        })
        .collect();
    let cert = PackingCertificate {
        q,
        mode: limits.mode,
        rectangles,
    };
    let (c, form) = cert.claim(params).expect("packing valid by construction");
    LinearBound::new(*params, c, form, Provenance::Packing(cert)).expect("valid coefficients")
}

fn shape_pairs(
    params: &SystemParams,
    filter: impl Fn(usize, usize) -> bool,
) -> Vec<(usize, usize)> {
    let k = params.k();
    // Rectangles with a single target never beat the cut-set bounds.
    (2..k)
        .flat_map(|ell| (1..=k - ell).map(move |m| (ell, m)))
        .filter(|&(ell, m)| filter(ell, m))
        .collect()
}

fn check_inputs(params: &SystemParams, limits: &EnumerationLimits) -> Result<()> {
    if params.node_count() > MAX_NODES {
        return Err(Error::ParameterRange(format!(
            "enumeration supports at most {MAX_NODES} nodes (d ≤ {}), got d = {}",
            MAX_NODES - 1,
            params.d()
        )));
    }
    if limits.max_chain == 0 || limits.max_rectangles == 0 || limits.max_refinements == 0 {
        return Err(Error::Argument("caps must be positive".into()));
    }
    Ok(())
}

fn all_packings(
    params: &SystemParams,
    limits: &EnumerationLimits,
    shapes: &[Shape],
    out: &mut Collected,
) {
    let per_q: Vec<Collected> = (0..params.k().saturating_sub(1))
        .into_par_iter()
        .map(|q| packing_bounds(params, limits, q, shapes))
        .collect();
    for collected in per_q {
        out.absorb(collected);
    }
}

/// Cut-set bounds plus the packing bounds whose rectangle shapes `(ℓ, m)`
/// pass `filter`.
pub fn enumerate_packings(
    params: &SystemParams,
    limits: &EnumerationLimits,
    filter: impl Fn(usize, usize) -> bool,
) -> Result<Enumeration> {
    check_inputs(params, limits)?;
    let mut out = Collected::new();
    for bound in cutset_bounds(params) {
        out.offer(bound.key(), bound.complexity(), Candidate::Ready(bound));
    }
    let shapes: Vec<Shape> = shape_pairs(params, filter)
        .iter()
        .map(|&(ell, m)| Shape::new(params, ell, m, limits.mode.resolve(m)))
        .collect();
    all_packings(params, limits, &shapes, &mut out);
    let Collected {
        best,
        truncated,
        mut notes,
    } = out;
    notes.sort();
    notes.dedup();
    let bounds = best
        .into_values()
        .map(|(_, candidate)| match candidate {
            Candidate::Ready(bound) => bound,
            Candidate::Packing {
                q,
                items,
                chosen,
                pieces,
            } => materialize_packing(params, limits, &shapes, q, &items, &chosen, &pieces),
            Candidate::Combination { .. } => unreachable!("no chains in a packing enumeration"),
        })
        .collect();
    Ok(Enumeration {
        params: *params,
        bounds,
        truncated,
        notes,
    })
}

/// Per chain step and shape, a largest disjoint set of placements inside
/// the step's big set.
type StepPackings = HashMap<Mask, Vec<Vec<usize>>>;

fn step_packings(masks: Vec<Mask>, shapes: &[Shape], universe: &[Vec<Placement>]) -> StepPackings {
    masks
        .into_par_iter()
        .map(|mask| {
            let per_shape = shapes
                .iter()
                .zip(universe)
                .map(|(shape, all)| {
                    let inside: Vec<usize> = (0..all.len())
                        .filter(|&i| all[i].mask.is_subset(&mask))
                        .collect();
                    let masks: Vec<Mask> = inside.iter().map(|&i| all[i].mask).collect();
                    max_disjoint(&masks, shape.area())
                        .into_iter()
                        .map(|i| inside[i])
                        .collect()
                })
                .collect();
            (mask, per_shape)
        })
        .collect()
}

fn refinements_for(
    chain: &ChainCertificate,
    shape_idx: usize,
    packings: &StepPackings,
    limit: usize,
) -> (Vec<(usize, usize)>, bool) {
    let mut out = Vec::new();
    for (step, s) in chain.steps.iter().enumerate() {
        for &p in &packings[&Mask::helpers_of(&s.big)][shape_idx] {
            out.push((step, p));
        }
    }
    let over = out.len() > limit;
    out.truncate(limit);
    (out, over)
}

/// All bounds within `limits`, each with a certificate, deduplicated by
/// normalized key and sorted by it.
pub fn enumerate_bounds(params: &SystemParams, limits: &EnumerationLimits) -> Result<Enumeration> {
    check_inputs(params, limits)?;
    let n = params.node_count();
    let mut out = Collected::new();
    for bound in cutset_bounds(params) {
        out.offer(bound.key(), bound.complexity(), Candidate::Ready(bound));
    }

    let chains = chain_bounds(params, limits, &mut out);
    for bound in &chains {
        out.offer(
            bound.key(),
            bound.complexity(),
            Candidate::Ready(bound.clone()),
        );
    }

    let pairs = shape_pairs(params, |_, _| true);
    let packing_shapes: Vec<Shape> = pairs
        .iter()
        .map(|&(ell, m)| Shape::new(params, ell, m, limits.mode.resolve(m)))
        .collect();
    let derived_shapes: Vec<Shape> = pairs
        .iter()
        .map(|&(ell, m)| Shape::new(params, ell, m, LmMode::Derived))
        .collect();
    all_packings(params, limits, &packing_shapes, &mut out);

    let universe: Vec<Vec<Placement>> = derived_shapes
        .iter()
        .map(|s| placements_where(n, s, 1..=n, |_| true))
        .collect();
    let chain_certs: Vec<&ChainCertificate> = chains
        .iter()
        .map(|b| match &b.provenance {
            Provenance::Chain(cert) => cert,
            _ => unreachable!("chain bounds carry chain certificates"),
        })
        .collect();
    let mut masks: Vec<Mask> = chain_certs
        .iter()
        .flat_map(|c| c.steps.iter().map(|s| Mask::helpers_of(&s.big)))
        .collect();
    masks.sort_by_key(|m| m.0);
    masks.dedup();
    let packings = step_packings(masks, &derived_shapes, &universe);

    let combos: Vec<Collected> = chains
        .par_iter()
        .enumerate()
        .map(|(idx, bound)| {
            let mut local = Collected::new();
            for (shape_idx, shape) in derived_shapes.iter().enumerate() {
                let (refs, over) = refinements_for(
                    chain_certs[idx],
                    shape_idx,
                    &packings,
                    limits.max_refinements,
                );
                if over && !local.truncated {
                    local.truncate(format!(
                        "chain {} holds more than {} rectangles",
                        bound.id(),
                        limits.max_refinements
                    ));
                }
                if refs.is_empty() {
                    continue;
                }
                let count = refs.len() as i64;
                for (piece, term) in shape.terms.iter().enumerate() {
                    let c = bound.c + count * shape.ell as i64;
                    let form = bound.form + term.0 * count;
                    let candidate = Candidate::Combination {
                        chain: idx,
                        shape: shape_idx,
                        piece,
                    };
                    local.offer(key_of(c, form), bound.complexity() + refs.len(), candidate);
                }
            }
            local
        })
        .collect();
    for collected in combos {
        out.absorb(collected);
    }

    let Collected {
        best,
        truncated,
        mut notes,
    } = out;
    notes.sort();
    notes.dedup();
    let bounds = best
        .into_values()
        .map(|(_, candidate)| match candidate {
            Candidate::Ready(bound) => bound,
            Candidate::Packing {
                q,
                items,
                chosen,
                pieces,
            } => materialize_packing(params, limits, &packing_shapes, q, &items, &chosen, &pieces),
            Candidate::Combination {
                chain,
                shape,
                piece,
            } => {
                let base = chain_certs[chain].clone();
                let (refs, _) = refinements_for(&base, shape, &packings, limits.max_refinements);
                let refinements = refs
                    .into_iter()
                    .map(|(step, p)| Refinement {
                        step,
                        rectangle: derived_shapes[shape].rectangle(&universe[shape][p], piece),
                    })
                    .collect();
                let cert = CombinationCertificate { base, refinements };
                let (c, form) = cert
                    .claim(params)
                    .expect("refinements valid by construction");
                LinearBound::new(*params, c, form, Provenance::Combination(cert))
                    .expect("valid coefficients")
            }
        })
        .collect();
    Ok(Enumeration {
        params: *params,
        bounds,
        truncated,
        notes,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn multisets_are_non_increasing() {
        assert_eq!(multisets(2, 2), vec![vec![2, 2], vec![2, 1], vec![1, 1]]);
        assert_eq!(multisets(3, 1), vec![vec![1, 1, 1]]);
    }

    #[test]
    fn sample_points_fall_inside_intervals() {
        use crate::model::rational::{int, rat};
        assert_eq!(
            sample_points(vec![int(2), int(1)]),
            vec![rat(1, 2), rat(3, 2), int(3)]
        );
        assert_eq!(sample_points(vec![]), vec![int(1)]);
    }

    #[test]
    fn max_disjoint_finds_optimum() {
        // Greedy takes the middle interval and gets one; the optimum is two.
        let cells = |range: std::ops::Range<usize>| {
            let mut m = Mask::default();
            for i in range {
                m.insert(i);
            }
            m
        };
        let masks = [cells(1..3), cells(0..2), cells(2..4)];
        assert_eq!(max_disjoint(&masks, 2).len(), 2);
    }

    #[test]
    fn small_cases_contain_cutset_and_verify() {
        let params = SystemParams::new(1, 1).unwrap();
        let e = enumerate_bounds(&params, &EnumerationLimits::default()).unwrap();
        assert_eq!(e.bounds.len(), 2);
        assert!(!e.truncated);
    }

    #[test]
    fn rejects_large_universes() {
        let params = SystemParams::new(3, 16).unwrap();
        assert!(enumerate_bounds(&params, &EnumerationLimits::default()).is_err());
    }
}
