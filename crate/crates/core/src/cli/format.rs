//! Bit-exact output formats. Rationals are always written as `p/q`.

use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::envelope::{Family, PiecewiseLinearEnvelope, TradeoffBoundary};
use crate::error::{Error, Result};
use crate::generators::{Enumeration, LinearBound, Provenance};
use crate::model::rational::format_rational;
use crate::model::{LinearForm, Rational, SystemParams};

#[derive(Serialize, Deserialize)]
struct BoundEntry {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    id: Option<String>,
    c: i64,
    a: i64,
    b: i64,
    provenance: Provenance,
}

#[derive(Serialize, Deserialize)]
struct BoundsFile {
    k: usize,
    d: usize,
    bounds: Vec<BoundEntry>,
    #[serde(default)]
    truncated: bool,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    evaluation: Option<Evaluation>,
}

/// The tightest bound at one `(α, β)`.
#[derive(Serialize, Deserialize)]
pub struct Evaluation {
    pub alpha: String,
    pub beta: String,
    pub value: String,
    pub id: String,
}

impl Evaluation {
    pub fn new(alpha: &Rational, beta: &Rational, value: &Rational, bound: &LinearBound) -> Self {
        Evaluation {
            alpha: format_rational(alpha),
            beta: format_rational(beta),
            value: format_rational(value),
            id: bound.id(),
        }
    }
}

/// `{"k","d","bounds":[{"id","c","a","b","provenance"}],"truncated"}`.
pub fn bounds_json(enumeration: &Enumeration, evaluation: Option<Evaluation>) -> String {
    let file = BoundsFile {
        k: enumeration.params.k(),
        d: enumeration.params.d(),
        bounds: enumeration
            .bounds
            .iter()
            .map(|b| BoundEntry {
                id: Some(b.id()),
                c: b.c,
                a: b.form.alpha_coeff,
                b: b.form.beta_coeff,
                provenance: b.provenance.clone(),
            })
            .collect(),
        truncated: enumeration.truncated,
        evaluation,
    };
    let mut text = serde_json::to_string_pretty(&file).expect("bounds serialize");
    text.push('\n');
    text
}

/// Columns `id,c,a,b,kind`.
pub fn bounds_csv(enumeration: &Enumeration) -> String {
    let mut out = String::from("id,c,a,b,kind\n");
    for b in &enumeration.bounds {
        out.push_str(&format!(
            "{},{},{},{},{}\n",
            b.id(),
            b.c,
            b.form.alpha_coeff,
            b.form.beta_coeff,
            b.provenance.label()
        ));
    }
    out
}

/// Reads either a bounds file or a single bound object.
pub fn parse_bounds(text: &str) -> Result<Vec<LinearBound>> {
    let value: Value = serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))?;
    if value.get("bounds").is_some() {
        let file: BoundsFile =
            serde_json::from_value(value).map_err(|e| Error::Parse(e.to_string()))?;
        let params = SystemParams::new(file.k, file.d)?;
        Ok(file
            .bounds
            .into_iter()
            .map(|e| LinearBound {
                params,
                c: e.c,
                form: LinearForm::new(e.a, e.b),
                provenance: e.provenance,
            })
            .collect())
    } else {
        let bound: LinearBound =
            serde_json::from_value(value).map_err(|e| Error::Parse(e.to_string()))?;
        Ok(vec![bound])
    }
}

/// Columns `alpha_over_beta,B_over_beta,active_bound_id`, one row per
/// segment start; the bound is active from that row to the next.
pub fn envelope_csv(envelope: &PiecewiseLinearEnvelope) -> String {
    let mut out = String::from("alpha_over_beta,B_over_beta,active_bound_id\n");
    for seg in &envelope.segments {
        let value = seg.bound.value_normalized(&seg.lo);
        out.push_str(&format!(
            "{},{},{}\n",
            format_rational(&seg.lo),
            format_rational(&value),
            seg.bound.id()
        ));
    }
    out
}

#[derive(Serialize)]
struct SegmentRow {
    lo: String,
    hi: Option<String>,
    value_lo: String,
    id: String,
}

pub fn envelope_json(params: &SystemParams, envelope: &PiecewiseLinearEnvelope) -> String {
    let rows: Vec<SegmentRow> = envelope
        .segments
        .iter()
        .map(|s| SegmentRow {
            lo: format_rational(&s.lo),
            hi: s.hi.as_ref().map(format_rational),
            value_lo: format_rational(&s.bound.value_normalized(&s.lo)),
            id: s.bound.id(),
        })
        .collect();
    let value = serde_json::json!({ "k": params.k(), "d": params.d(), "segments": rows });
    let mut text = serde_json::to_string_pretty(&value).expect("envelope serializes");
    text.push('\n');
    text
}

/// Columns `curve,x,y` with `x = α/B`, `y = β/B`.
pub fn tradeoff_csv(curves: &[(Family, TradeoffBoundary)]) -> String {
    let mut out = String::from("curve,x,y\n");
    for (family, boundary) in curves {
        for (x, y) in &boundary.vertices {
            out.push_str(&format!(
                "{},{},{}\n",
                family.name(),
                format_rational(x),
                format_rational(y)
            ));
        }
    }
    out
}

#[derive(Serialize)]
struct CurveRow {
    curve: &'static str,
    vertices: Vec<[String; 2]>,
    facets: Vec<String>,
}

pub fn tradeoff_json(params: &SystemParams, curves: &[(Family, TradeoffBoundary)]) -> String {
    let rows: Vec<CurveRow> = curves
        .iter()
        .map(|(family, boundary)| CurveRow {
            curve: family.name(),
            vertices: boundary
                .vertices
                .iter()
                .map(|(x, y)| [format_rational(x), format_rational(y)])
                .collect(),
            facets: boundary.facets.iter().map(LinearBound::id).collect(),
        })
        .collect();
    let value = serde_json::json!({ "k": params.k(), "d": params.d(), "curves": rows });
    let mut text = serde_json::to_string_pretty(&value).expect("tradeoff serializes");
    text.push('\n');
    text
}
