use serde::Serialize;

use super::upper::{upper_envelope, PiecewiseLinearEnvelope};
use crate::error::{Error, Result};
use crate::generators::{cutset_bounds, LinearBound};
use crate::model::rational::{serde_rational, serde_rational_opt};
use crate::model::{Rational, SystemParams};

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct GapRow {
    #[serde(with = "serde_rational")]
    pub alpha_bar: Rational,
    #[serde(with = "serde_rational")]
    pub functional: Rational,
    #[serde(with = "serde_rational")]
    pub exact: Rational,
    #[serde(with = "serde_rational")]
    pub gap: Rational,
}

/// Open interval of `ᾱ` (closed at 0 when the gap is positive there).
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct GapInterval {
    #[serde(with = "serde_rational")]
    pub lo: Rational,
    #[serde(with = "serde_rational_opt")]
    pub hi: Option<Rational>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct GapReport {
    pub rows: Vec<GapRow>,
    pub positive_intervals: Vec<GapInterval>,
    /// Largest gap (`None` if it grows without bound).
    #[serde(with = "serde_rational_opt")]
    pub max_gap: Option<Rational>,
    /// Smallest `ᾱ` where the largest gap is attained.
    #[serde(with = "serde_rational_opt")]
    pub argmax: Option<Rational>,
}

/// Gap between the functional-repair envelope `min_q B_q` and the envelope
/// of `bounds` together with the cut-set bounds, in units of `β`.
pub fn gap_report(
    params: &SystemParams,
    bounds: &[LinearBound],
    grid_step: &Rational,
) -> Result<GapReport> {
    let zero = Rational::from_integer(0);
    if *grid_step <= zero {
        return Err(Error::Argument("grid step must be positive".into()));
    }
    let cutset = cutset_bounds(params);
    let functional = upper_envelope(&cutset)?;
    let mut all = cutset;
    all.extend_from_slice(bounds);
    let exact = upper_envelope(&all)?;
    let gap = |x: &Rational| functional.value_at(x) - exact.value_at(x);

    let mut rows = Vec::new();
    let limit = Rational::from_integer(params.d() as i128);
    let mut x = zero;
    while x <= limit {
        let (f, e) = (functional.value_at(&x), exact.value_at(&x));
        rows.push(GapRow {
            alpha_bar: x,
            functional: f,
            exact: e,
            gap: f - e,
        });
        x += grid_step;
    }

    let mut xs = vec![zero];
    xs.extend(functional.breakpoints());
    xs.extend(exact.breakpoints());
    xs.sort();
    xs.dedup();
    let last = *xs.last().expect("nonempty");
    let tail_slope = tail_slope(&functional) - tail_slope(&exact);

    let mut intervals = Vec::new();
    let mut open: Option<Rational> = None;
    for pair in xs.windows(2) {
        let (gl, gr) = (gap(&pair[0]), gap(&pair[1]));
        if gl > zero || gr > zero {
            open.get_or_insert(pair[0]);
            if gr == zero {
                intervals.push(GapInterval {
                    lo: open.take().expect("open"),
                    hi: Some(pair[1]),
                });
            }
        }
    }
    let unbounded = tail_slope > zero;
    if gap(&last) > zero || unbounded {
        intervals.push(GapInterval {
            lo: open.take().unwrap_or(last),
            hi: None,
        });
    }

    let (max_gap, argmax) = if unbounded {
        (None, None)
    } else {
        let mut best = (gap(&xs[0]), xs[0]);
        for x in &xs[1..] {
            let g = gap(x);
            if g > best.0 {
                best = (g, *x);
            }
        }
        (Some(best.0), Some(best.1))
    };
    Ok(GapReport {
        rows,
        positive_intervals: intervals,
        max_gap,
        argmax,
    })
}

fn tail_slope(env: &PiecewiseLinearEnvelope) -> Rational {
    env.segments.last().expect("nonempty").bound.slope()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::generators::thm_rs_bound;
    use crate::model::rational::{int, rat};

    #[test]
    fn example_e1_gap() {
        let params = SystemParams::new(6, 7).unwrap();
        let bound = thm_rs_bound(&params, 2, 2, 2, &[2, 2]).unwrap();
        let report = gap_report(&params, &[bound], &rat(1, 2)).unwrap();
        assert_eq!(
            report.positive_intervals,
            vec![GapInterval {
                lo: rat(23, 6),
                hi: Some(rat(37, 6))
            }]
        );
        assert_eq!(report.max_gap, Some(rat(3, 4)));
        assert_eq!(report.argmax, Some(int(5)));
        let at5 = report.rows.iter().find(|r| r.alpha_bar == int(5)).unwrap();
        assert_eq!((at5.functional, at5.exact), (int(24), rat(93, 4)));
        assert_eq!(report.rows.last().unwrap().alpha_bar, int(7));
    }

    #[test]
    fn no_gap_for_cutset() {
        let params = SystemParams::new(3, 4).unwrap();
        let report = gap_report(&params, &[], &int(1)).unwrap();
        assert!(report.positive_intervals.is_empty());
        assert_eq!(report.max_gap, Some(int(0)));
        assert!(gap_report(&params, &[], &int(0)).is_err());
    }
}
