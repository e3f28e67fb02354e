use serde::{Deserialize, Serialize};

use super::bound::{LinearBound, Provenance};
use super::chain::ChainCertificate;
use super::packing::{p0_term, Rectangle};
use crate::error::{Error, Result};
use crate::model::{LinearForm, SystemParams};

/// A rectangle found inside the big set of chain step `step` (0-based).
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Refinement {
    pub step: usize,
    pub rectangle: Rectangle,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CombinationCertificate {
    pub base: ChainCertificate,
    pub refinements: Vec<Refinement>,
}

impl CombinationCertificate {
    /// Checks containment and disjointness of the refinements.
    pub fn validate(&self, params: &SystemParams) -> Result<()> {
        for (idx, refinement) in self.refinements.iter().enumerate() {
            let step = refinement.step;
            let rect = &refinement.rectangle;
            let big = &self
                .base
                .steps
                .get(step)
                .ok_or_else(|| Error::Refinement {
                    step,
                    reason: format!("chain has {} steps", self.base.steps.len()),
                })?
                .big;
            rect.validate(params).map_err(|e| Error::Refinement {
                step,
                reason: e.to_string(),
            })?;
            let vars = rect.vars();
            if let Some(missing) = vars.first_missing_from(big) {
                return Err(Error::Refinement {
                    step,
                    reason: format!("{missing} of rectangle {rect} is not in A_{}", step + 1),
                });
            }
            for earlier in &self.refinements[..idx] {
                if earlier.step == step && !earlier.rectangle.vars().is_disjoint(&vars) {
                    return Err(Error::Refinement {
                        step,
                        reason: format!("rectangles {} and {rect} overlap", earlier.rectangle),
                    });
                }
            }
        }
        Ok(())
    }

    /// Base chain claim plus `ℓ` and `p0_term − ℓmβ` per refinement.
    pub fn claim(&self, params: &SystemParams) -> Result<(i64, LinearForm)> {
        self.validate(params)?;
        let (mut c, mut form) = self.base.claim();
        for refinement in &self.refinements {
            let rect = &refinement.rectangle;
            c += rect.ell() as i64;
            form += p0_term(params, rect)? - LinearForm::beta((rect.ell() * rect.m()) as i64);
        }
        Ok((c, form))
    }
}

/// Strengthens a chain bound by applying the rectangle estimate to copies of
/// `S_M^L` sitting inside the big sets of the chain.
pub fn combine_rs_p0(
    params: &SystemParams,
    base: &ChainCertificate,
    refinements: &[Refinement],
) -> Result<LinearBound> {
    let cert = CombinationCertificate {
        base: base.clone(),
        refinements: refinements.to_vec(),
    };
    let (c, form) = cert.claim(params)?;
    if refinements.is_empty() {
        return LinearBound::new(*params, c, form, Provenance::Chain(base.clone()));
    }
    LinearBound::new(*params, c, form, Provenance::Combination(cert))
}
