//! Cut-set values `B_q` and the functional-repair envelope.

use num_traits::Signed;

use super::form::LinearForm;
use super::params::SystemParams;
use super::rational::Rational;
use super::vars::{VarSet, Variable};
use crate::error::{Error, Result};

/// `B_q = qα + [C(k−q, 2) + (d+1−k)(k−q)]β` for `0 ≤ q ≤ k`.
pub fn bq(params: &SystemParams, q: usize) -> Result<LinearForm> {
    let k = params.k();
    if q > k {
        return Err(Error::ParameterRange(format!("q={q} outside [0, k={k}]")));
    }
    let repaired = (k - q) as i64;
    let unused = (params.d() + 1 - k) as i64;
    let beta = repaired * (repaired - 1) / 2 + unused * repaired;
    Ok(LinearForm::new(q as i64, beta))
}

/// Shorthand for indices already known to be in range.
pub(crate) fn bq_unchecked(params: &SystemParams, q: usize) -> LinearForm {
    bq(params, q).expect("cut-set index in range")
}

/// `min_q B_q(α, β)` together with the smallest minimizing `q`.
pub fn functional_envelope_value(
    params: &SystemParams,
    alpha: &Rational,
    beta: &Rational,
) -> Result<(Rational, usize)> {
    if alpha.is_negative() || beta.is_negative() {
        return Err(Error::ParameterRange("α and β must be non-negative".into()));
    }
    if *alpha == Rational::from_integer(0) && *beta == Rational::from_integer(0) {
        return Err(Error::ParameterRange("α and β cannot both be zero".into()));
    }
    let mut best: Option<(Rational, usize)> = None;
    for q in 0..=params.k() {
        let value = bq_unchecked(params, q).eval(alpha, beta);
        if best.as_ref().is_none_or(|(b, _)| value < *b) {
            best = Some((value, q));
        }
    }
    Ok(best.expect("k >= 1"))
}

/// Weight of a variable set: `α` per node content, `β` per helper transfer.
/// The message carries no weight.
pub fn var_weight(vars: &VarSet) -> LinearForm {
    vars.iter()
        .map(|v| match v {
            Variable::Message => LinearForm::ZERO,
            Variable::Node(_) => LinearForm::alpha(1),
            Variable::Helper { .. } => LinearForm::beta(1),
        })
        .sum()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::rational::int;
    use proptest::prelude::*;

    fn p(k: usize, d: usize) -> SystemParams {
        SystemParams::new(k, d).unwrap()
    }

    #[test]
    fn bq_examples() {
        assert_eq!(bq(&p(3, 3), 1).unwrap(), LinearForm::new(1, 3));
        assert_eq!(bq(&p(2, 3), 0).unwrap(), LinearForm::new(0, 5));
        assert_eq!(bq(&p(6, 7), 2).unwrap(), LinearForm::new(2, 14));
        assert_eq!(bq(&p(5, 9), 5).unwrap(), LinearForm::new(5, 0));
        assert!(bq(&p(3, 3), 4).is_err());
    }

    #[test]
    fn e1_cross_check() {
        let params = p(6, 7);
        let total = bq(&params, 2).unwrap() * 3 + bq(&params, 4).unwrap() - LinearForm::beta(4);
        assert_eq!(total, LinearForm::new(10, 43));
    }

    #[test]
    fn functional_envelope_examples() {
        let (v, q) = functional_envelope_value(&p(2, 3), &int(2), &int(1)).unwrap();
        assert_eq!((v, q), (int(4), 1));
        let (v, _) = functional_envelope_value(&p(6, 7), &int(5), &int(1)).unwrap();
        assert_eq!(v, int(24));
        let (v, q) = functional_envelope_value(&p(4, 6), &int(0), &int(1)).unwrap();
        assert_eq!((v, q), (int(0), 4));
        assert!(functional_envelope_value(&p(2, 3), &int(-1), &int(1)).is_err());
        assert!(functional_envelope_value(&p(2, 3), &int(0), &int(0)).is_err());
    }

    #[test]
    fn zero_alpha_is_attained_by_b_k() {
        // B_k = kα is the only cut-set value without a β term.
        let params = p(3, 5);
        let (v, q) = functional_envelope_value(&params, &int(0), &int(1)).unwrap();
        assert_eq!((v, q), (int(0), 3));
    }

    #[test]
    fn var_weight_examples() {
        let set: VarSet = ["W1", "S3^2", "S4^2", "S4^3", "M"]
            .iter()
            .map(|s| s.parse().unwrap())
            .collect();
        assert_eq!(var_weight(&set), LinearForm::new(1, 3));
        assert_eq!(var_weight(&VarSet::new()), LinearForm::ZERO);
    }

    proptest! {
        #[test]
        fn bq_matches_direct_formula((k, d) in (1usize..=12).prop_flat_map(|k| (Just(k), k..=12))) {
            let params = p(k, d);
            for q in 0..=k {
                let x = (k - q) as i64;
                let direct = LinearForm::new(q as i64, x * (x - 1) / 2 + (d as i64 + 1 - k as i64) * x);
                prop_assert_eq!(bq(&params, q).unwrap(), direct);
            }
        }

        #[test]
        fn consecutive_difference_identity((k, d) in (1usize..=12).prop_flat_map(|k| (Just(k), k..=12))) {
            let params = p(k, d);
            for r in 0..k {
                let diff = bq(&params, r + 1).unwrap() - bq(&params, r).unwrap();
                prop_assert_eq!(diff, LinearForm::new(1, -((d - r) as i64)));
            }
        }

        #[test]
        fn second_difference_identity((k, d) in (2usize..=12).prop_flat_map(|k| (Just(k), k..=12))) {
            let params = p(k, d);
            for r in 1..k {
                for m in 1..=(k - r) {
                    let lhs = bq(&params, r + m).unwrap() - bq(&params, r + m - 1).unwrap()
                        + bq(&params, r).unwrap() - bq(&params, r + 1).unwrap();
                    prop_assert_eq!(lhs, LinearForm::beta(m as i64 - 1));
                }
            }
        }
    }
}
