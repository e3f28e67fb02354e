use std::fmt;

use serde::{Deserialize, Serialize};

use super::bound::{LinearBound, Provenance};
use crate::error::{Error, Result};
use crate::model::{bq, LinearForm, SystemParams, VarSet};

/// The helper block `S_M^L` together with the indices `r, t, s` used to
/// bound it.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Rectangle {
    /// `L`, the repaired nodes.
    pub targets: Vec<usize>,
    /// `M`, the nodes sending helper data.
    pub helpers: Vec<usize>,
    pub r: usize,
    pub t: usize,
    pub s: usize,
}

impl Rectangle {
    pub fn new(targets: Vec<usize>, helpers: Vec<usize>, r: usize, t: usize, s: usize) -> Self {
        Rectangle {
            targets,
            helpers,
            r,
            t,
            s,
        }
    }

    /// Contiguous `L = [l0, l0+ℓ)`, `M = [m0, m0+m)`.
    pub fn interval(
        l0: usize,
        ell: usize,
        m0: usize,
        m: usize,
        r: usize,
        t: usize,
        s: usize,
    ) -> Self {
        Rectangle::new((l0..l0 + ell).collect(), (m0..m0 + m).collect(), r, t, s)
    }

    pub fn ell(&self) -> usize {
        self.targets.len()
    }

    pub fn m(&self) -> usize {
        self.helpers.len()
    }

    pub fn vars(&self) -> VarSet {
        VarSet::helpers(&self.helpers, &self.targets)
    }

    pub fn validate(&self, params: &SystemParams) -> Result<()> {
        let bad = |why: String| Err(Error::Feasibility(format!("rectangle {self}: {why}")));
        let (ell, m, k) = (self.ell(), self.m(), params.k());
        if ell == 0 || m == 0 {
            return bad("L and M must be nonempty".into());
        }
        for set in [&self.targets, &self.helpers] {
            if set.windows(2).any(|w| w[0] >= w[1]) {
                return bad("node lists must be strictly increasing".into());
            }
            if set.iter().any(|&v| !params.contains_node(v)) {
                return bad("node outside 1..=d+1".into());
            }
        }
        if self.helpers[0] <= *self.targets.last().expect("nonempty") {
            return bad("min(M) must exceed max(L)".into());
        }
        if self.r < ell {
            return bad(format!("r = {} < ℓ = {ell}", self.r));
        }
        if self.r + m > k {
            return bad(format!("r + m = {} > k = {k}", self.r + m));
        }
        if self.t < self.r + m || self.t > k {
            return bad(format!(
                "t = {} outside [r+m, k] = [{}, {k}]",
                self.t,
                self.r + m
            ));
        }
        if self.s < self.r || self.s > k {
            return bad(format!("s = {} outside [r, k] = [{}, {k}]", self.s, self.r));
        }
        Ok(())
    }
}

impl fmt::Display for Rectangle {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "L={:?} M={:?} r={} t={} s={}",
            self.targets, self.helpers, self.r, self.t, self.s
        )
    }
}

/// Which per-rectangle term a packing bound uses.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum LmMode {
    /// `B_{r+m−1} + (ℓ−1)(B_{r+m−2} − β)` as published. Proven here only for
    /// `m = 1`; larger `m` verifies as unverified.
    AsStated,
    /// `B_t + (ℓ−1)B_s − ℓα + ℓ(d−r+1)β − ℓmβ`.
    Derived,
    /// As-stated for `m = 1`, derived for `m ≥ 2`.
    #[default]
    Auto,
}

impl LmMode {
    pub fn resolve(self, m: usize) -> LmMode {
        match self {
            LmMode::Auto if m == 1 => LmMode::AsStated,
            LmMode::Auto => LmMode::Derived,
            other => other,
        }
    }
}

impl std::str::FromStr for LmMode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "as-stated" | "as-published" => Ok(LmMode::AsStated),
            "derived" => Ok(LmMode::Derived),
            "auto" => Ok(LmMode::Auto),
            _ => Err(Error::Parse(format!(
                "unknown mode {s:?} (expected as-stated, derived or auto)"
            ))),
        }
    }
}

/// `B_t + (ℓ−1)B_s − ℓα + ℓ(d−r+1)β`: the bound on `H(S_M^L) + ℓB` obtained
/// from the repair of each node of `L`.
pub fn p0_term(params: &SystemParams, rect: &Rectangle) -> Result<LinearForm> {
    rect.validate(params)?;
    let ell = rect.ell() as i64;
    Ok(
        bq(params, rect.t)? + bq(params, rect.s)? * (ell - 1) - LinearForm::alpha(ell)
            + LinearForm::beta(ell * (params.d() - rect.r + 1) as i64),
    )
}

/// `B_{r+m−1} + (ℓ−1)(B_{r+m−2} − β)`.
pub fn as_stated_term(params: &SystemParams, rect: &Rectangle) -> Result<LinearForm> {
    rect.validate(params)?;
    let ell = rect.ell() as i64;
    let top = rect.r + rect.m();
    Ok(bq(params, top - 1)? + (bq(params, top - 2)? - LinearForm::beta(1)) * (ell - 1))
}

/// Amount a rectangle adds to the right-hand side of a packing bound.
pub fn rectangle_term(params: &SystemParams, rect: &Rectangle, mode: LmMode) -> Result<LinearForm> {
    match mode.resolve(rect.m()) {
        LmMode::AsStated => as_stated_term(params, rect),
        _ => Ok(p0_term(params, rect)? - LinearForm::beta((rect.ell() * rect.m()) as i64)),
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PackingCertificate {
    pub q: usize,
    pub mode: LmMode,
    pub rectangles: Vec<Rectangle>,
}

impl PackingCertificate {
    /// Checks region, ranges and disjointness of the packing.
    pub fn validate(&self, params: &SystemParams) -> Result<()> {
        if self.q > params.k() {
            return Err(Error::Feasibility(format!(
                "q = {} exceeds k = {}",
                self.q,
                params.k()
            )));
        }
        let mut used = VarSet::new();
        for rect in &self.rectangles {
            rect.validate(params)?;
            if rect.targets[0] <= self.q || *rect.targets.last().expect("nonempty") > params.k() {
                return Err(Error::Feasibility(format!(
                    "rectangle {rect}: L must lie in [{}, {}]",
                    self.q + 1,
                    params.k()
                )));
            }
            let vars = rect.vars();
            if let Some(shared) = vars.iter().find(|v| used.contains(v)) {
                return Err(Error::Feasibility(format!(
                    "rectangle {rect}: overlaps another rectangle at {shared}"
                )));
            }
            used.extend_from(&vars);
        }
        Ok(())
    }

    /// `(1 + Σℓ, B_q + Σ term)`.
    pub fn claim(&self, params: &SystemParams) -> Result<(i64, LinearForm)> {
        self.validate(params)?;
        let mut c = 1;
        let mut form = bq(params, self.q)?;
        for rect in &self.rectangles {
            c += rect.ell() as i64;
            form += rectangle_term(params, rect, self.mode)?;
        }
        Ok((c, form))
    }

    /// True when some rectangle relies on the as-published term with `m ≥ 2`.
    pub fn uses_unproven_term(&self) -> bool {
        self.rectangles
            .iter()
            .any(|r| r.m() >= 2 && self.mode.resolve(r.m()) == LmMode::AsStated)
    }
}

/// `(1 + Σℓ)·B ≤ B_q + Σ term(rect)`.
pub fn thm_lm_bound(
    params: &SystemParams,
    q: usize,
    rectangles: &[Rectangle],
    mode: LmMode,
) -> Result<LinearBound> {
    let cert = PackingCertificate {
        q,
        mode,
        rectangles: rectangles.to_vec(),
    };
    let (c, form) = cert.claim(params)?;
    LinearBound::new(*params, c, form, Provenance::Packing(cert))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::generators::verify::{verify_certificate, Verdict};

    fn p(k: usize, d: usize) -> SystemParams {
        SystemParams::new(k, d).unwrap()
    }

    fn abc(b: &LinearBound) -> (i64, i64, i64) {
        (b.c, b.form.alpha_coeff, b.form.beta_coeff)
    }

    #[test]
    fn e544_single_rectangle() {
        let params = p(4, 4);
        let rect = Rectangle::interval(3, 2, 5, 1, 3, 4, 3);
        let bound = thm_lm_bound(&params, 2, &[rect], LmMode::Auto).unwrap();
        assert_eq!(abc(&bound), (3, 7, 6));
        assert_eq!(verify_certificate(&bound).verdict, Verdict::Pass);
    }

    #[test]
    fn e544_two_rectangles() {
        let params = p(4, 4);
        let rects = [
            Rectangle::interval(2, 2, 4, 1, 2, 3, 2),
            Rectangle::interval(2, 2, 5, 1, 2, 3, 2),
        ];
        let bound = thm_lm_bound(&params, 1, &rects, LmMode::Auto).unwrap();
        assert_eq!(abc(&bound), (5, 7, 22));
        assert_eq!(verify_certificate(&bound).verdict, Verdict::Pass);
    }

    #[test]
    fn section5_packings() {
        let params = p(6, 7);
        let b2 = bq(&params, 2).unwrap();
        let b3 = bq(&params, 3).unwrap();
        let rects = [
            Rectangle::interval(4, 3, 7, 1, 3, 4, 3),
            Rectangle::interval(4, 3, 8, 1, 3, 4, 3),
        ];
        let bound = thm_lm_bound(&params, 3, &rects, LmMode::Auto).unwrap();
        let expected = b2 * 4 + b3 * 3 - LinearForm::beta(4);
        assert_eq!(abc(&bound), (7, expected.alpha_coeff, expected.beta_coeff));
        assert_eq!(verify_certificate(&bound).verdict, Verdict::Pass);

        let rects = [
            Rectangle::interval(3, 2, 5, 1, 3, 4, 3),
            Rectangle::interval(3, 3, 6, 1, 3, 4, 3),
            Rectangle::interval(4, 3, 7, 1, 3, 4, 3),
            Rectangle::interval(4, 3, 8, 1, 3, 4, 3),
        ];
        let bound = thm_lm_bound(&params, 2, &rects, LmMode::Auto).unwrap();
        let expected = b2 * 8 + b3 * 4 - LinearForm::beta(7);
        assert_eq!(abc(&bound), (12, expected.alpha_coeff, expected.beta_coeff));
        assert_eq!(verify_certificate(&bound).verdict, Verdict::Pass);
    }

    #[test]
    fn p0_term_examples() {
        let params = p(4, 4);
        let rect = Rectangle::interval(2, 2, 4, 1, 2, 3, 2);
        assert_eq!(p0_term(&params, &rect).unwrap(), LinearForm::new(3, 10));
        let b = |q| bq(&params, q).unwrap();
        assert_eq!(
            p0_term(&params, &rect).unwrap() - LinearForm::beta(2),
            b(2) + b(1) - LinearForm::beta(1)
        );
        let rect = Rectangle::interval(2, 2, 5, 1, 3, 4, 3);
        assert_eq!(
            p0_term(&params, &rect).unwrap() - LinearForm::beta(2),
            b(3) + b(2) - LinearForm::beta(1)
        );
    }

    #[test]
    fn ell_one_gives_no_gain() {
        // ℓ = 1: term = B_t − α + (d−r+1)β − mβ, and B + (B_t − α + (d−r)β)
        // at m = 1, t = r+1 equals B + B_r.
        let params = p(5, 7);
        for r in 1..=4 {
            let rect = Rectangle::interval(1, 1, 7, 1, r, r + 1, r);
            assert_eq!(
                rectangle_term(&params, &rect, LmMode::Derived).unwrap(),
                bq(&params, r).unwrap()
            );
        }
    }

    #[test]
    fn modes_agree_for_single_helper() {
        for d in 1..=10 {
            for k in 1..=d {
                let params = p(k, d);
                for ell in 1..k {
                    for r in ell..k {
                        let rect = Rectangle::interval(r + 1 - ell, ell, d + 1, 1, r, r + 1, r);
                        assert_eq!(
                            as_stated_term(&params, &rect).unwrap(),
                            rectangle_term(&params, &rect, LmMode::Derived).unwrap(),
                            "k={k} d={d} ℓ={ell} r={r}"
                        );
                    }
                }
            }
        }
    }

    #[test]
    fn rejects_bad_packings() {
        let params = p(4, 4);
        let a = Rectangle::interval(2, 2, 4, 1, 2, 3, 2);
        assert!(matches!(
            thm_lm_bound(&params, 1, &[a.clone(), a.clone()], LmMode::Auto),
            Err(Error::Feasibility(_))
        ));
        assert!(thm_lm_bound(&params, 2, std::slice::from_ref(&a), LmMode::Auto).is_err());
        let inverted = Rectangle::new(vec![3, 4], vec![2], 2, 3, 2);
        assert!(thm_lm_bound(&params, 0, &[inverted], LmMode::Auto).is_err());
        let bad_t = Rectangle::interval(2, 2, 4, 1, 2, 2, 2);
        assert!(thm_lm_bound(&params, 1, &[bad_t], LmMode::Auto).is_err());
    }

    #[test]
    fn as_stated_with_wide_helpers_is_unverified() {
        let params = p(6, 7);
        let rect = Rectangle::interval(3, 2, 5, 2, 2, 4, 2);
        let bound =
            thm_lm_bound(&params, 2, std::slice::from_ref(&rect), LmMode::AsStated).unwrap();
        assert_eq!(verify_certificate(&bound).verdict, Verdict::Unverified);
        let bound = thm_lm_bound(&params, 2, &[rect], LmMode::Derived).unwrap();
        assert_eq!(verify_certificate(&bound).verdict, Verdict::Pass);
    }
}
