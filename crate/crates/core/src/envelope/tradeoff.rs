use super::upper::canonical_order;
use crate::error::{Error, Result};
use crate::generators::LinearBound;
use crate::model::Rational;

/// Lower-left boundary of `{(x, y) ≥ 0 : a·x + b·y ≥ c for every bound}`
/// with `x = α/B`, `y = β/B`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TradeoffBoundary {
    /// Corners with `x` strictly increasing and `y` strictly decreasing.
    pub vertices: Vec<(Rational, Rational)>,
    /// `facets[i]` is the bound active on the edge from vertex `i` to `i+1`.
    pub facets: Vec<LinearBound>,
}

/// `y = slope·x + intercept`, from bound `source` (or the axis `y = 0`).
struct Constraint {
    slope: Rational,
    intercept: Rational,
    source: Option<usize>,
}

fn crossing(a: &Constraint, b: &Constraint) -> Rational {
    (b.intercept - a.intercept) / (a.slope - b.slope)
}

/// Half-plane intersection: the constraints with `b > 0` become lower
/// bounds `y ≥ (c − a·x)/b`; those with `b = 0` bound `x` from below. The
/// boundary is the upper hull of these lines for `x ≥ x0`, built with a
/// slope-ordered stack.
pub fn tradeoff_boundary(bounds: &[LinearBound]) -> Result<TradeoffBoundary> {
    if bounds.is_empty() {
        return Err(Error::Argument(
            "cannot intersect an empty bound set".into(),
        ));
    }
    let sorted = canonical_order(bounds);
    let zero = Rational::from_integer(0);
    let mut x0 = zero;
    let mut constraints = vec![Constraint {
        slope: zero,
        intercept: zero,
        source: None,
    }];
    for (idx, bound) in sorted.iter().enumerate() {
        let (a, b, c) = (
            bound.form.alpha_coeff as i128,
            bound.form.beta_coeff as i128,
            bound.c as i128,
        );
        if b < 0 {
            return Err(Error::Argument(format!(
                "bound {} has a negative β coefficient",
                bound.id()
            )));
        }
        if b == 0 {
            if a == 0 {
                return Err(Error::Argument(format!(
                    "bound {} forces B = 0",
                    bound.id()
                )));
            }
            x0 = x0.max(Rational::new(c, a));
        } else {
            constraints.push(Constraint {
                slope: Rational::new(-a, b),
                intercept: Rational::new(c, b),
                source: Some(idx),
            });
        }
    }
    // Ascending slope; among parallel lines only the highest matters.
    constraints.sort_by(|p, q| p.slope.cmp(&q.slope).then(q.intercept.cmp(&p.intercept)));
    constraints.dedup_by(|later, kept| later.slope == kept.slope);

    let mut hull: Vec<Constraint> = Vec::new();
    for line in constraints {
        while hull.len() >= 2 {
            let n = hull.len();
            if crossing(&hull[n - 2], &line) <= crossing(&hull[n - 2], &hull[n - 1]) {
                hull.pop();
            } else {
                break;
            }
        }
        hull.push(line);
    }
    // Drop pieces that end before x0.
    let mut start = 0;
    while start + 1 < hull.len() && crossing(&hull[start], &hull[start + 1]) <= x0 {
        start += 1;
    }
    let hull = &hull[start..];
    let height = |x: &Rational| {
        hull.iter()
            .map(|l| l.slope * x + l.intercept)
            .max()
            .expect("nonempty")
    };

    let mut vertices = vec![(x0, height(&x0))];
    let mut facets = Vec::new();
    for pair in hull.windows(2) {
        let x = crossing(&pair[0], &pair[1]);
        if x <= x0 {
            continue;
        }
        match pair[0].source {
            Some(idx) => facets.push(sorted[idx].clone()),
            None => break,
        }
        vertices.push((x, pair[1].slope * x + pair[1].intercept));
    }
    Ok(TradeoffBoundary { vertices, facets })
}
