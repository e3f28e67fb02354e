//! Functional-dependency closure of a variable set.
//!
//! Four rules, applied until nothing changes:
//!
//! * R1: `W_i` determines every `S_i^j`.
//! * R2: helpers into `j` from at least `d` distinct sources determine `W_j`.
//! * R3: any `k` node contents determine `M`.
//! * R4: `M` determines every `W_i`.
//!
//! Each rule only ever adds variables, so the least fixpoint is unique and
//! independent of rule order.

use super::params::SystemParams;
use super::vars::{VarSet, Variable};

#[allow(clippy::needless_range_loop)]
pub fn dependency_closure(params: &SystemParams, seed: &VarSet) -> VarSet {
    let n = params.node_count();
    let mut message = false;
    let mut node = vec![false; n + 1];
    let mut helper = vec![vec![false; n + 1]; n + 1];
    let mut foreign = Vec::new();

    for var in seed {
        match *var {
            Variable::Message => message = true,
            Variable::Node(i) if i <= n => node[i] = true,
            Variable::Helper { from, to } if from <= n && to <= n && from != to => {
                helper[from][to] = true
            }
            other => foreign.push(other),
        }
    }

    loop {
        let mut changed = false;

        if message {
            for i in 1..=n {
                if !node[i] {
                    node[i] = true;
                    changed = true;
                }
            }
        }

        for i in 1..=n {
            if node[i] {
                for j in 1..=n {
                    if j != i && !helper[i][j] {
                        helper[i][j] = true;
                        changed = true;
                    }
                }
            }
        }

        for j in 1..=n {
            if !node[j] {
                let sources = (1..=n).filter(|&i| i != j && helper[i][j]).count();
                if sources >= params.d() {
                    node[j] = true;
                    changed = true;
                }
            }
        }

        if !message && node.iter().filter(|&&x| x).count() >= params.k() {
            message = true;
            changed = true;
        }

        if !changed {
            break;
        }
    }

    let mut out: VarSet = foreign.into_iter().collect();
    if message {
        out.insert(Variable::Message);
    }
    for i in 1..=n {
        if node[i] {
            out.insert(Variable::Node(i));
        }
        for j in 1..=n {
            if helper[i][j] {
                out.insert(Variable::Helper { from: i, to: j });
            }
        }
    }
    out
}

/// Every variable of the `d + 1` node universe.
pub fn universe(params: &SystemParams) -> VarSet {
    let nodes: Vec<usize> = params.nodes().collect();
    let mut all = VarSet::nodes(nodes.iter().copied());
    all.insert(Variable::Message);
    all.extend_from(&VarSet::helpers(&nodes, &nodes));
    all
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn s(from: usize, to: usize) -> Variable {
        Variable::Helper { from, to }
    }

    #[test]
    fn two_nodes_recover_everything_for_k2() {
        let p = SystemParams::new(2, 3).unwrap();
        let closure = dependency_closure(&p, &VarSet::nodes([2, 3]));
        assert_eq!(closure, universe(&p));
    }

    #[test]
    fn repair_of_node_one() {
        let p = SystemParams::new(2, 3).unwrap();
        let seed: VarSet = [s(2, 1), s(3, 1), s(4, 1)].into_iter().collect();
        let mut expected = seed.clone();
        expected.insert(Variable::Node(1));
        expected.extend([s(1, 2), s(1, 3), s(1, 4)]);
        assert_eq!(dependency_closure(&p, &seed), expected);
    }

    #[test]
    fn closure_reaches_s32_in_433() {
        let p = SystemParams::new(3, 3).unwrap();
        let seed: VarSet = [Variable::Node(2), s(4, 3), s(1, 3)].into_iter().collect();
        let closure = dependency_closure(&p, &seed);
        assert!(closure.contains(&Variable::Node(3)));
        assert!(closure.contains(&s(3, 2)));
        assert!(!closure.contains(&Variable::Message));
    }

    #[test]
    fn empty_seed_is_fixpoint() {
        let p = SystemParams::new(3, 4).unwrap();
        assert!(dependency_closure(&p, &VarSet::new()).is_empty());
    }

    fn arb_seed(n: usize) -> impl Strategy<Value = VarSet> {
        let vars: Vec<Variable> = {
            let nodes: Vec<usize> = (1..=n).collect();
            let mut all = VarSet::nodes(nodes.iter().copied());
            all.extend_from(&VarSet::helpers(&nodes, &nodes));
            all.iter().copied().collect()
        };
        proptest::sample::subsequence(vars.clone(), 0..vars.len())
            .prop_map(|v| v.into_iter().collect())
    }

    proptest! {
        #[test]
        fn closure_is_extensive_idempotent_monotone(
            (k, d) in (1usize..=4).prop_flat_map(|k| (Just(k), k..=5)),
            seed_a in arb_seed(6),
            seed_b in arb_seed(6),
        ) {
            let p = SystemParams::new(k, d).unwrap();
            let keep = |set: VarSet| -> VarSet { set.iter().copied().filter(|v| v.is_valid_for(&p)).collect() };
            let a = keep(seed_a);
            let b = keep(seed_b);
            let ca = dependency_closure(&p, &a);
            prop_assert!(a.is_subset(&ca));
            prop_assert_eq!(dependency_closure(&p, &ca), ca.clone());
            let ab = a.union(&b);
            prop_assert!(ca.is_subset(&dependency_closure(&p, &ab)));
        }
    }
}
