//! Text and JSON renderings of classifications and idempotent families.
//!
//! Every exact value in JSON is an array of coordinate strings over the
//! ambient power basis ("p/q" rationals or residues), never a float.

use std::fmt::Write as _;

use serde::Serialize;

use crate::builder::IdempotentFamily;
use crate::classify::Classification;
use crate::field::{Elem, FieldDescriptor};
use crate::oracle::{Primitivity, VerificationReport};

#[derive(Debug, Serialize)]
pub struct ClassificationJson {
    #[serde(rename = "type")]
    pub field_type: String,
    pub m: u32,
    pub emulates: String,
}

impl From<&Classification> for ClassificationJson {
    fn from(c: &Classification) -> Self {
        ClassificationJson {
            field_type: c.field_type.to_string(),
            m: c.m,
            emulates: c.emulates.to_string(),
        }
    }
}

#[derive(Debug, Serialize)]
pub struct ClassifyJson {
    pub field: String,
    pub classification: ClassificationJson,
}

#[derive(Debug, Serialize)]
pub struct CosetJson {
    pub form: String,
    pub b: Vec<String>,
}

#[derive(Debug, Serialize)]
pub struct MinPolyJson {
    pub coeffs: Vec<Vec<String>>,
    pub text: String,
}

#[derive(Debug, Serialize)]
pub struct IdempotentJson {
    pub label: String,
    pub coeffs: Vec<Vec<String>>,
    pub dim: usize,
    pub min_poly: MinPolyJson,
}

#[derive(Debug, Serialize)]
pub struct FamilyJson<'a> {
    pub field: String,
    pub classification: ClassificationJson,
    pub n: u32,
    pub a: Vec<String>,
    pub s: u32,
    pub coset: CosetJson,
    pub idempotents: Vec<IdempotentJson>,
    pub verification: Option<&'a VerificationReport>,
}

fn coords(x: &Elem) -> Vec<String> {
    x.coord_strings()
}

pub fn classify_json(field: &FieldDescriptor, c: &Classification) -> String {
    let doc = ClassifyJson {
        field: field.to_string(),
        classification: c.into(),
    };
    serde_json::to_string_pretty(&doc).expect("serializable") + "\n"
}

pub fn classify_text(field: &FieldDescriptor, c: &Classification) -> String {
    format!(
        "field: {field}\ntype: {}\nm: {}\nemulates: {}\n",
        c.field_type, c.m, c.emulates
    )
}

pub fn family_json(family: &IdempotentFamily, verification: Option<&VerificationReport>) -> String {
    let spec = &family.spec;
    let doc = FamilyJson {
        field: spec.field().to_string(),
        classification: (&family.classification).into(),
        n: spec.n(),
        a: coords(spec.a()),
        s: family.decomposition.s,
        coset: CosetJson {
            form: family.decomposition.form.to_string(),
            b: coords(&family.decomposition.b),
        },
        idempotents: family
            .items
            .iter()
            .map(|it| IdempotentJson {
                label: it.label.to_string(),
                coeffs: it.element.coeffs().iter().map(coords).collect(),
                dim: it.component_dim,
                min_poly: MinPolyJson {
                    coeffs: it.component_min_poly.coeffs().iter().map(coords).collect(),
                    text: it.component_min_poly.to_string(),
                },
            })
            .collect(),
        verification,
    };
    serde_json::to_string_pretty(&doc).expect("serializable") + "\n"
}

pub fn family_text(family: &IdempotentFamily, verification: Option<&VerificationReport>) -> String {
    let spec = &family.spec;
    let c = &family.classification;
    let d = &family.decomposition;
    let mut out = String::new();
    let _ = writeln!(
        out,
        "field: {} (type {}, m = {}, emulates {})",
        spec.field(),
        c.field_type,
        c.m,
        c.emulates
    );
    let _ = writeln!(out, "algebra: g^{} = {}", spec.order(), spec.a());
    let _ = writeln!(out, "s = {}, coset {}, b = {}", d.s, d.form, d.b);
    let _ = writeln!(out, "case: {}", family.case);
    let _ = writeln!(out, "minimal idempotents: {}", family.items.len());
    for it in &family.items {
        let _ = writeln!(out, "  {} = {}", it.label, it.element);
        let _ = writeln!(
            out,
            "      dim {}, min poly of g·e: {}",
            it.component_dim, it.component_min_poly
        );
    }
    if let Some(v) = verification {
        out.push_str(&verification_text(v));
    }
    out
}

fn flag(ok: bool) -> &'static str {
    if ok {
        "ok"
    } else {
        "FAIL"
    }
}

pub fn verification_text(v: &VerificationReport) -> String {
    let mut out = String::new();
    let _ = writeln!(
        out,
        "verification: {}",
        if v.overall { "pass" } else { "FAIL" }
    );
    for it in &v.items {
        let prim = match &it.primitive {
            Primitivity::Certified(c) => format!("primitive ({c})"),
            Primitivity::Reducible(why) => format!("REDUCIBLE: {why}"),
            Primitivity::NotCertified => "primitivity not certified".to_string(),
        };
        let _ = writeln!(
            out,
            "  {}: idempotent {}, K-rational {}, {}",
            it.label,
            flag(it.idempotent),
            flag(it.k_rational),
            prim
        );
    }
    let _ = writeln!(out, "  orthogonal: {}", flag(v.orthogonal));
    let _ = writeln!(out, "  sum is one: {}", flag(v.sum_is_one));
    let _ = writeln!(
        out,
        "  dims {:?} sum to 2^n: {}",
        v.dims,
        flag(v.dim_sum_ok)
    );
    if let Some(first) = &v.first_counterexample {
        let _ = writeln!(out, "  first failure: {first}");
    }
    out
}
