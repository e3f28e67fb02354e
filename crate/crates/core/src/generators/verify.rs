use std::fmt;

use serde::Serialize;

use super::bound::{LinearBound, Provenance};
use super::chain::{ChainCertificate, ChainClosing};
use super::combine::CombinationCertificate;
use super::config::MinimalConfiguration;
use super::packing::{PackingCertificate, Rectangle};
use crate::model::{
    bq, dependency_closure, var_weight, LinearForm, SystemParams, VarSet, Variable,
};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "UPPERCASE")]
pub enum Verdict {
    Pass,
    Fail,
    /// Every checkable condition holds but the certificate rests on a
    /// premise outside the checker's reach.
    Unverified,
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Verdict::Pass => "PASS",
            Verdict::Fail => "FAIL",
            Verdict::Unverified => "UNVERIFIED",
        })
    }
}

/// First violated condition with the sets that witness it.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Failure {
    pub condition: String,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub witness: Vec<VarSet>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct VerificationReport {
    pub bound_id: String,
    pub verdict: Verdict,
    pub checks: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub failure: Option<Failure>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub note: Option<String>,
}

impl VerificationReport {
    pub fn passed(&self) -> bool {
        self.verdict == Verdict::Pass
    }
}

impl fmt::Display for VerificationReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{} {} ({} checks)",
            self.verdict, self.bound_id, self.checks
        )?;
        if let Some(failure) = &self.failure {
            write!(f, "\n  failed: {}", failure.condition)?;
            for set in &failure.witness {
                write!(f, "\n  witness: {set}")?;
            }
        }
        if let Some(note) = &self.note {
            write!(f, "\n  note: {note}")?;
        }
        Ok(())
    }
}

struct Checker<'a> {
    params: &'a SystemParams,
    checks: usize,
}

type Outcome = std::result::Result<(), Failure>;

fn fail(condition: String, witness: Vec<VarSet>) -> Outcome {
    Err(Failure { condition, witness })
}

impl<'a> Checker<'a> {
    fn closure(&self, set: &VarSet) -> VarSet {
        dependency_closure(self.params, set)
    }

    fn require(
        &mut self,
        ok: bool,
        condition: impl FnOnce() -> String,
        witness: Vec<VarSet>,
    ) -> Outcome {
        self.checks += 1;
        if ok {
            Ok(())
        } else {
            fail(condition(), witness)
        }
    }

    fn well_formed(&mut self, label: &str, set: &VarSet) -> Outcome {
        let bad = set
            .iter()
            .find(|v| **v == Variable::Message || !v.is_valid_for(self.params));
        self.require(
            bad.is_none(),
            || format!("{label} contains invalid variable {}", bad.unwrap()),
            vec![set.clone()],
        )
    }

    fn claim_matches(&mut self, bound: &LinearBound, c: i64, form: LinearForm) -> Outcome {
        self.require(
            bound.c == c && bound.form == form,
            || {
                format!(
                    "claimed {}B ≤ {} but certificate gives {c}B ≤ {form}",
                    bound.c, bound.form
                )
            },
            vec![],
        )
    }

    /// Conditions of the chain that do not depend on the closing rule.
    fn chain_core(&mut self, cert: &ChainCertificate) -> Outcome {
        self.require(
            !cert.steps.is_empty(),
            || "chain has no steps".into(),
            vec![],
        )?;
        for (i, step) in cert.steps.iter().enumerate() {
            self.well_formed(&format!("A_{}", i + 1), &step.big)?;
            self.well_formed(&format!("a_{}", i + 1), &step.small)?;
        }
        for (i, step) in cert.steps.iter().enumerate() {
            let both = step.big.union(&step.small);
            let closure = self.closure(&both);
            self.require(
                closure.contains(&Variable::Message),
                || format!("M is not determined by A_{0} ∪ a_{0}", i + 1),
                vec![both.clone()],
            )?;
            let closure = self.closure(&step.big);
            for (j, later) in cert.steps.iter().enumerate().skip(i + 1) {
                let missing = later.small.first_missing_from(&closure);
                self.require(
                    missing.is_none(),
                    || {
                        format!(
                            "a_{} is not determined by A_{}: {} missing",
                            j + 1,
                            i + 1,
                            missing.unwrap()
                        )
                    },
                    vec![step.big.clone(), later.small.clone()],
                )?;
            }
        }
        Ok(())
    }

    fn chain_closing(&mut self, cert: &ChainCertificate) -> Outcome {
        let n = cert.steps.len();
        match &cert.closing {
            ChainClosing::DropLast => {
                self.require(
                    n >= 2,
                    || "dropping the last small set needs two steps".into(),
                    vec![],
                )?;
                let earlier = cert.small_union(n - 1);
                let closure = self.closure(&earlier);
                let last = &cert.steps[n - 1].small;
                let missing = last.first_missing_from(&closure);
                self.require(
                    missing.is_none(),
                    || {
                        format!(
                            "a_{n} is not determined by a_1 … a_{}: {} missing",
                            n - 1,
                            missing.unwrap()
                        )
                    },
                    vec![earlier.clone(), last.clone()],
                )
            }
            ChainClosing::ExactTail { tail } => {
                self.require(
                    matches!(tail, Variable::Helper { .. }) && tail.is_valid_for(self.params),
                    || format!("tail {tail} must be a helper variable"),
                    vec![],
                )?;
                for (i, step) in cert.steps.iter().enumerate() {
                    let ok = self.closure(&step.big).contains(tail);
                    self.require(
                        ok,
                        || format!("{tail} is not determined by A_{}", i + 1),
                        vec![step.big.clone()],
                    )?;
                }
                let all = cert.small_union(n);
                let ok = self.closure(&all).contains(tail);
                self.require(
                    ok,
                    || format!("{tail} is not determined by a_1 … a_{n}"),
                    vec![all.clone()],
                )
            }
        }
    }

    fn configuration(&mut self, label: &str, config: &MinimalConfiguration, q: usize) -> Outcome {
        let vars = config.expand();
        let ok = self.closure(&vars).contains(&Variable::Message);
        self.require(
            ok,
            || format!("{label}: configuration does not determine M"),
            vec![vars.clone()],
        )?;
        let weight = var_weight(&vars);
        let expected = bq(self.params, q).expect("q ≤ k");
        self.require(
            weight == expected,
            || format!("{label}: weight {weight} differs from B_{q} = {expected}"),
            vec![vars],
        )
    }

    /// Hypotheses behind the rectangle estimate: the sets `R`, `R ∪ M` embed
    /// in min-cut configurations of sizes `s` and `t`, and every node of `L`
    /// is repairable from `d` helpers.
    fn rectangle_hypotheses(&mut self, rect: &Rectangle) -> Outcome {
        let params = self.params;
        if let Err(e) = rect.validate(params) {
            return fail(e.to_string(), vec![]);
        }
        let outside: Vec<usize> = params
            .nodes()
            .filter(|v| !rect.targets.contains(v) && !rect.helpers.contains(v))
            .collect();
        let mut r_set = rect.targets.clone();
        r_set.extend(outside.iter().take(rect.r - rect.ell()));
        let label = format!("rectangle {rect}");
        self.require(
            r_set.len() == rect.r,
            || format!("{label}: cannot form R"),
            vec![],
        )?;

        let fill = |base: &[usize], size: usize| -> Vec<usize> {
            let mut out = base.to_vec();
            out.extend(
                params
                    .nodes()
                    .filter(|v| !base.contains(v))
                    .take(size - base.len()),
            );
            out
        };
        let eq2 = fill(&r_set, rect.s);
        let mut rm = r_set.clone();
        rm.extend(&rect.helpers);
        let eq3 = fill(&rm, rect.t);
        for (name, intact, size) in [("R", eq2, rect.s), ("R ∪ M", eq3, rect.t)] {
            match MinimalConfiguration::choose(params, &intact, &[], &[]) {
                Ok(config) => self.configuration(&format!("{label}, {name}"), &config, size)?,
                Err(e) => return fail(format!("{label}, {name}: {e}"), vec![]),
            }
        }
        for &i in &rect.targets {
            let others: Vec<usize> = params.nodes().filter(|&v| v != i).collect();
            let helpers = VarSet::helpers(&others, &[i]);
            let ok = self.closure(&helpers).contains(&Variable::Node(i));
            self.require(
                ok,
                || format!("{label}: W{i} not repairable"),
                vec![helpers.clone()],
            )?;
        }
        Ok(())
    }

    fn packing(&mut self, bound: &LinearBound, cert: &PackingCertificate) -> Outcome {
        let claim = match cert.claim(self.params) {
            Ok(claim) => claim,
            Err(e) => return fail(e.to_string(), vec![]),
        };
        self.checks += 1;
        let config = match MinimalConfiguration::canonical(self.params, cert.q) {
            Ok(config) => config,
            Err(e) => return fail(e.to_string(), vec![]),
        };
        self.configuration("base copy", &config, cert.q)?;
        let region = config.expand();
        for rect in &cert.rectangles {
            let vars = rect.vars();
            let missing = vars.first_missing_from(&region);
            self.require(
                missing.is_none(),
                || {
                    format!(
                        "rectangle {rect}: {} outside the base configuration",
                        missing.unwrap()
                    )
                },
                vec![region.clone(), vars.clone()],
            )?;
            self.rectangle_hypotheses(rect)?;
        }
        self.claim_matches(bound, claim.0, claim.1)
    }

    fn combination(&mut self, bound: &LinearBound, cert: &CombinationCertificate) -> Outcome {
        self.require(
            cert.base.unverified_premise.is_none(),
            || "base chain has an unverified premise".into(),
            vec![],
        )?;
        self.chain_core(&cert.base)?;
        self.chain_closing(&cert.base)?;
        let claim = match cert.claim(self.params) {
            Ok(claim) => claim,
            Err(e) => return fail(e.to_string(), vec![]),
        };
        self.checks += 1;
        for refinement in &cert.refinements {
            self.rectangle_hypotheses(&refinement.rectangle)?;
        }
        self.claim_matches(bound, claim.0, claim.1)
    }
}

/// Re-checks a bound's certificate from scratch: closure conditions,
/// configuration weights and the claimed coefficients.
pub fn verify_certificate(bound: &LinearBound) -> VerificationReport {
    let mut checker = Checker {
        params: &bound.params,
        checks: 0,
    };
    let mut note = None;
    let outcome = (|| -> Outcome {
        checker.require(
            bound.c >= 1 && bound.form.alpha_coeff >= 0,
            || "coefficients out of range".into(),
            vec![],
        )?;
        match &bound.provenance {
            Provenance::CutSet { q } => {
                if *q > bound.params.k() {
                    return fail(format!("q = {q} exceeds k"), vec![]);
                }
                let config = MinimalConfiguration::canonical(&bound.params, *q).expect("q ≤ k");
                checker.configuration("cut-set copy", &config, *q)?;
                let form = bq(&bound.params, *q).expect("q ≤ k");
                checker.claim_matches(bound, 1, form)
            }
            Provenance::Chain(cert) => {
                checker.chain_core(cert)?;
                if let Some(premise) = &cert.unverified_premise {
                    note = Some(premise.clone());
                    return Ok(());
                }
                checker.chain_closing(cert)?;
                let (c, form) = cert.claim();
                checker.claim_matches(bound, c, form)
            }
            Provenance::Packing(cert) => {
                checker.packing(bound, cert)?;
                if cert.uses_unproven_term() {
                    note = Some("as-published rectangle term with m ≥ 2".into());
                }
                Ok(())
            }
            Provenance::Combination(cert) => checker.combination(bound, cert),
        }
    })();
    let (verdict, failure) = match outcome {
        Err(failure) => (Verdict::Fail, Some(failure)),
        Ok(()) if note.is_some() => (Verdict::Unverified, None),
        Ok(()) => (Verdict::Pass, None),
    };
    VerificationReport {
        bound_id: bound.id(),
        verdict,
        checks: checker.checks,
        failure,
        note,
    }
}
