//! Lower envelope of lines on `[0, ∞)` by a left-to-right sweep.

use crate::model::Rational;

/// A line `y = slope·x + intercept`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Line {
    pub slope: Rational,
    pub intercept: Rational,
}

impl Line {
    pub fn new(slope: Rational, intercept: Rational) -> Self {
        Line { slope, intercept }
    }

    pub fn at(&self, x: &Rational) -> Rational {
        self.slope * x + self.intercept
    }
}

/// One piece of a lower envelope: line `index` is minimal on `[lo, hi]`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Piece {
    pub lo: Rational,
    pub hi: Option<Rational>,
    pub index: usize,
}

/// Exact lower envelope of `lines` over `x ≥ 0`. Ties are broken towards the
/// smaller slope and then towards the earlier line, so callers control the
/// tie-break by ordering the input. Returns no pieces for empty input.
pub fn lower_envelope(lines: &[Line]) -> Vec<Piece> {
    let zero = Rational::from_integer(0);
    let Some(mut current) = (0..lines.len()).min_by(|&i, &j| {
        (lines[i].intercept, lines[i].slope, i).cmp(&(lines[j].intercept, lines[j].slope, j))
    }) else {
        return Vec::new();
    };
    let mut x = zero;
    let mut pieces = Vec::new();
    loop {
        // Next line to take over: earliest crossing among flatter lines.
        let cur = &lines[current];
        let mut next: Option<(Rational, usize)> = None;
        for (j, line) in lines.iter().enumerate() {
            if line.slope >= cur.slope {
                continue;
            }
            let cross = (line.intercept - cur.intercept) / (cur.slope - line.slope);
            if cross < x {
                continue;
            }
            let better = match &next {
                None => true,
                Some((bx, bj)) => {
                    cross < *bx || (cross == *bx && (line.slope, j) < (lines[*bj].slope, *bj))
                }
            };
            if better {
                next = Some((cross, j));
            }
        }
        match next {
            Some((cross, j)) if cross == x => {
                current = j;
            }
            Some((cross, j)) => {
                pieces.push(Piece {
                    lo: x,
                    hi: Some(cross),
                    index: current,
                });
                x = cross;
                current = j;
            }
            None => {
                pieces.push(Piece {
                    lo: x,
                    hi: None,
                    index: current,
                });
                return pieces;
            }
        }
    }
}
