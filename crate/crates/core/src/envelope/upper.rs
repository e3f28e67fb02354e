use serde::Serialize;

use super::lines::{lower_envelope, Line};
use crate::error::{Error, Result};
use crate::generators::LinearBound;
use crate::model::{rational::is_nonnegative, Rational};

/// On `[lo, hi]` (in `ᾱ = α/β`) the bound `bound` is the tightest.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct EnvelopeSegment {
    #[serde(with = "crate::model::rational::serde_rational")]
    pub lo: Rational,
    #[serde(with = "crate::model::rational::serde_rational_opt")]
    pub hi: Option<Rational>,
    pub bound: LinearBound,
}

/// Pointwise minimum of a bound set in normalized coordinates
/// `(ᾱ, B̄) = (α/β, B/β)`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct PiecewiseLinearEnvelope {
    pub segments: Vec<EnvelopeSegment>,
}

impl PiecewiseLinearEnvelope {
    /// `min_i B̄_i(ᾱ)`.
    pub fn value_at(&self, alpha_bar: &Rational) -> Rational {
        self.segment_at(alpha_bar).bound.value_normalized(alpha_bar)
    }

    /// The segment whose closed interval contains `alpha_bar` (the left one
    /// at a breakpoint).
    pub fn segment_at(&self, alpha_bar: &Rational) -> &EnvelopeSegment {
        self.segments
            .iter()
            .find(|s| s.hi.is_none_or(|hi| *alpha_bar <= hi))
            .expect("segments cover [0, ∞)")
    }

    /// Interior breakpoints in increasing order.
    pub fn breakpoints(&self) -> Vec<Rational> {
        self.segments.iter().filter_map(|s| s.hi).collect()
    }

    /// Breakpoints together with the envelope value there.
    pub fn vertices(&self) -> Vec<(Rational, Rational)> {
        self.breakpoints()
            .into_iter()
            .map(|x| (x, self.value_at(&x)))
            .collect()
    }
}

/// Bounds sorted by key and certificate size, with duplicate keys removed.
pub(crate) fn canonical_order(bounds: &[LinearBound]) -> Vec<&LinearBound> {
    let mut sorted: Vec<&LinearBound> = bounds.iter().collect();
    sorted.sort_by(|a, b| a.cmp_key(b));
    sorted.dedup_by(|b, a| a.key() == b.key());
    sorted
}

/// Exact lower envelope of the lines `B̄ = (aᾱ + b)/c` over `ᾱ ≥ 0`.
pub fn upper_envelope(bounds: &[LinearBound]) -> Result<PiecewiseLinearEnvelope> {
    if bounds.is_empty() {
        return Err(Error::Argument(
            "cannot take the envelope of an empty bound set".into(),
        ));
    }
    let sorted = canonical_order(bounds);
    let lines: Vec<Line> = sorted
        .iter()
        .map(|b| Line::new(b.slope(), b.intercept()))
        .collect();
    let segments = lower_envelope(&lines)
        .into_iter()
        .map(|p| EnvelopeSegment {
            lo: p.lo,
            hi: p.hi,
            bound: sorted[p.index].clone(),
        })
        .collect();
    Ok(PiecewiseLinearEnvelope { segments })
}

/// `min_i (a_i α + b_i β)/c_i` and a bound attaining it (smallest key on
/// ties).
pub fn evaluate_best<'a>(
    bounds: &'a [LinearBound],
    alpha: &Rational,
    beta: &Rational,
) -> Result<(Rational, &'a LinearBound)> {
    if !is_nonnegative(alpha) || !is_nonnegative(beta) {
        return Err(Error::ParameterRange("α and β must be non-negative".into()));
    }
    if *alpha == Rational::from_integer(0) && *beta == Rational::from_integer(0) {
        return Err(Error::ParameterRange("α and β cannot both be zero".into()));
    }
    let mut best: Option<(Rational, &LinearBound)> = None;
    for bound in bounds {
        let value = bound.value_at(alpha, beta);
        let better = match &best {
            None => true,
            Some((v, b)) => value < *v || (value == *v && bound.cmp_key(b).is_lt()),
        };
        if better {
            best = Some((value, bound));
        }
    }
    best.ok_or_else(|| Error::Argument("cannot evaluate an empty bound set".into()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::generators::{cutset_bounds, thm_rs_bound_unit};
    use crate::model::rational::{int, rat};
    use crate::model::SystemParams;

    #[test]
    fn cutset_envelope_k2_d3() {
        let params = SystemParams::new(2, 3).unwrap();
        let env = upper_envelope(&cutset_bounds(&params)).unwrap();
        let ids: Vec<String> = env.segments.iter().map(|s| s.bound.id()).collect();
        assert_eq!(ids, vec!["c1a2b0", "c1a1b2", "c1a0b5"]);
        assert_eq!(env.breakpoints(), vec![int(2), int(3)]);
    }

    #[test]
    fn single_bound() {
        let params = SystemParams::new(2, 3).unwrap();
        let env = upper_envelope(&cutset_bounds(&params)[..1]).unwrap();
        assert_eq!(env.segments.len(), 1);
        assert!(env.segments[0].hi.is_none());
        assert!(upper_envelope(&[]).is_err());
    }

    #[test]
    fn eq3_point() {
        let params = SystemParams::new(3, 3).unwrap();
        let mut bounds = cutset_bounds(&params);
        bounds.push(thm_rs_bound_unit(&params, &[1, 1]).unwrap());
        let (value, witness) = evaluate_best(&bounds, &int(3), &int(2)).unwrap();
        assert_eq!(value, int(8));
        assert_eq!(witness.id(), "c1a2b1");
        let env = upper_envelope(&bounds).unwrap();
        assert_eq!(env.breakpoints(), vec![int(1), rat(3, 2), int(3)]);
    }

    #[test]
    fn zero_alpha() {
        let params = SystemParams::new(3, 5).unwrap();
        let bounds = cutset_bounds(&params);
        let (value, witness) = evaluate_best(&bounds, &int(0), &int(1)).unwrap();
        assert_eq!(value, int(0));
        assert_eq!(witness.id(), "c1a3b0");
        assert!(evaluate_best(&cutset_bounds(&params), &int(0), &int(0)).is_err());
    }
}
