//! Field descriptors and element literals.
//!
//! Fields: `Q`, `QC:L`, `QR:L`, `QE:L`, `F:q`. Elements: comma-separated
//! coordinates over the power basis of the ambient field, rationals `p/q`
//! for cyclotomic ambients and integers over {1, i} for finite ones. Missing
//! trailing coordinates are zero.

use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;

use crate::error::{Error, Result};
use crate::field::{AmbientKind, Elem, FieldDescriptor, Involution, MAX_LEVEL};

fn level(text: &str, min: u32, form: &str) -> Result<u32> {
    let l: u32 = text
        .parse()
        .map_err(|_| Error::Parse(format!("{form}: level must be an integer, got {text:?}")))?;
    if l < min || l > MAX_LEVEL {
        return Err(Error::Parse(format!(
            "{form}: level must satisfy {min} ≤ L ≤ {MAX_LEVEL}, got {l}"
        )));
    }
    Ok(l)
}

pub fn parse_field(text: &str) -> Result<FieldDescriptor> {
    let text = text.trim();
    if text == "Q" {
        return Ok(FieldDescriptor::rationals());
    }
    let Some((head, tail)) = text.split_once(':') else {
        return Err(Error::Parse(format!(
            "unknown field {text:?}; expected Q, QC:L, QR:L, QE:L or F:q"
        )));
    };
    match head {
        "QC" => FieldDescriptor::cyclotomic(level(tail, 2, "QC:L")?, Involution::Identity),
        "QR" => FieldDescriptor::cyclotomic(level(tail, 2, "QR:L")?, Involution::InverseConj),
        "QE" => {
            FieldDescriptor::cyclotomic(level(tail, 3, "QE:L")?, Involution::NegatedInverseConj)
        }
        "F" => {
            let q: u64 = tail
                .parse()
                .map_err(|_| Error::Parse(format!("F:q: q must be an integer, got {tail:?}")))?;
            FieldDescriptor::prime_field(q).map_err(|_| {
                Error::Parse(format!("F:q: q must be an odd prime below 2^31, got {q}"))
            })
        }
        _ => Err(Error::Parse(format!(
            "unknown field {text:?}; expected Q, QC:L, QR:L, QE:L or F:q"
        ))),
    }
}

pub fn parse_element(field: &FieldDescriptor, text: &str) -> Result<Elem> {
    let parts: Vec<&str> = text.split(',').map(str::trim).collect();
    if parts.len() > field.dim() {
        return Err(Error::Parse(format!(
            "{} coordinates given, the ambient of {field} has dimension {}",
            parts.len(),
            field.dim()
        )));
    }
    match field.ambient() {
        AmbientKind::Cyclotomic { .. } => {
            let coords = parts
                .iter()
                .map(|p| {
                    BigRational::from_str(p)
                        .map_err(|_| Error::Parse(format!("not a rational number: {p:?}")))
                })
                .collect::<Result<Vec<_>>>()?;
            let mut full = vec![BigRational::from_integer(BigInt::from(0)); field.dim()];
            full[..coords.len()].clone_from_slice(&coords);
            field.from_rationals(&full)
        }
        AmbientKind::Finite { .. } => {
            let coords = parts
                .iter()
                .map(|p| {
                    p.parse::<i64>()
                        .map_err(|_| Error::Parse(format!("not an integer: {p:?}")))
                })
                .collect::<Result<Vec<_>>>()?;
            field.from_residues(&coords)
        }
    }
}
