//! The built-in regression suite behind `tga selftest`.

use std::collections::HashSet;
use std::io::{self, Write};
use std::sync::Arc;

use crate::algebra::AlgebraSpec;
use crate::builder::{build_with, BuildOptions, FormulaVariant, IdempotentFamily};
use crate::classify::{classify, ks_membership, FieldType};
use crate::error::Result;
use crate::field::{FieldDescriptor, Involution};
use crate::oracle::{conjugate_pairing_check, cross_check, verify_family, DEFAULT_BUDGET};
use crate::parse::{parse_element, parse_field};

/// One instance of the case-coverage matrix.
#[derive(Debug, Clone, Copy)]
pub struct MatrixEntry {
    pub field: &'static str,
    pub n: u32,
    pub a: &'static str,
    pub branch: &'static str,
}

const fn entry(field: &'static str, n: u32, a: &'static str, branch: &'static str) -> MatrixEntry {
    MatrixEntry {
        field,
        n,
        a,
        branch,
    }
}

/// Instances chosen so that every branch of the construction fires.
pub const MATRIX: &[MatrixEntry] = &[
    entry("F:5", 2, "1", "diagonal, s = m"),
    entry("QC:3", 2, "4", "diagonal, s < m"),
    entry("QC:3", 1, "-1", "diagonal, s = 1"),
    entry("QC:4", 2, "16", "diagonal, emulated A"),
    entry("F:5", 3, "1", "diagonal tower, s > m"),
    entry("F:5", 2, "2", "diagonal, s = 0"),
    entry("Q", 2, "2", "trivial, s = 0"),
    entry("QE:3", 2, "3", "trivial, s = 0, type E"),
    entry("F:3", 2, "1", "paired low"),
    entry("Q", 3, "4", "paired low, s = 1"),
    entry("QR:5", 2, "16", "paired low, emulated C"),
    entry("F:3", 3, "1", "paired high, type E"),
    entry("QE:3", 3, "16", "paired high, type E"),
    entry("QR:3", 3, "16", "paired high, type D"),
    entry("Q", 2, "-1", "paired negated, lambda = 1"),
    entry("F:3", 1, "2", "paired negated, n = 1"),
    entry("QE:3", 2, "-1", "paired negated, lambda = -1"),
    entry("Q", 2, "-4", "eps coset, s = m"),
    entry("Q", 3, "16", "eps coset, s = m + 1"),
    entry(
        "QR:3",
        4,
        "9232,6528,0,-6528",
        "eps coset, s = m + 1, m = 3",
    ),
    entry("Q", 4, "256", "eps coset, s = m + 2"),
    entry("Q", 5, "65536", "eps coset, s = m + 3"),
];

impl MatrixEntry {
    pub fn spec(&self) -> Result<Arc<AlgebraSpec>> {
        let k = parse_field(self.field)?;
        let a = parse_element(&k, self.a)?;
        AlgebraSpec::new(k, self.n, a)
    }

    pub fn command(&self) -> String {
        format!("tga verify {} {} {}", self.field, self.n, self.a)
    }
}

/// Deliberate corruptions used to prove that the suite catches bugs.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Fault {
    DropItem,
    FlipLambda,
    SkipR0,
    NegatedFromOne,
}

#[derive(Debug, Clone, Copy)]
pub struct SelftestOptions {
    pub max_enum: u128,
    pub fault: Option<Fault>,
}

impl Default for SelftestOptions {
    fn default() -> Self {
        SelftestOptions {
            max_enum: DEFAULT_BUDGET,
            fault: None,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Failure {
    pub check: String,
    pub invariant: String,
    pub repro: String,
}

fn build_for_test(spec: &Arc<AlgebraSpec>, fault: Option<Fault>) -> Result<IdempotentFamily> {
    let mut variant = FormulaVariant::default();
    match fault {
        Some(Fault::FlipLambda) => variant.flip_lambda = true,
        Some(Fault::SkipR0) => variant.high_with_r0 = false,
        Some(Fault::NegatedFromOne) => variant.negated_from_zero = false,
        _ => {}
    }
    let opts = BuildOptions {
        checked: false,
        variant,
    };
    let mut family = build_with(spec, &opts)?;
    if fault == Some(Fault::DropItem) {
        family.items.pop();
    }
    Ok(family)
}

fn check_entry(e: &MatrixEntry, fault: Option<Fault>) -> std::result::Result<String, String> {
    let spec = e.spec().map_err(|err| err.to_string())?;
    let family = build_for_test(&spec, fault).map_err(|err| err.to_string())?;
    let report = verify_family(&family);
    if !report.overall {
        return Err(report.first_counterexample.unwrap_or_default());
    }
    if spec.field().involution() != Involution::Identity && fault.is_none() {
        match conjugate_pairing_check(&family) {
            Ok(true) => {}
            Ok(false) => return Err("σ-orbit sums of the ambient family differ".into()),
            Err(err) => return Err(err.to_string()),
        }
    }
    Ok(format!(
        "{} items, dims {:?}",
        family.items.len(),
        report.dims
    ))
}

fn odd_primes(below: u64) -> impl Iterator<Item = u64> {
    (3..below).step_by(2).filter(|&p| {
        (3..)
            .step_by(2)
            .take_while(|f| f * f <= p)
            .all(|f| p % f != 0)
    })
}

/// Type law and K_s membership against exhaustive power tables.
fn structure_law() -> std::result::Result<String, String> {
    for q in odd_primes(200) {
        let k = FieldDescriptor::prime_field(q).map_err(|e| e.to_string())?;
        let c = classify(&k);
        let expected = if q % 4 == 1 {
            (FieldType::B, (q - 1).trailing_zeros())
        } else {
            (FieldType::E, 1 + (q + 1).trailing_zeros())
        };
        if (c.field_type, c.m) != expected {
            return Err(format!("F:{q} classified as ({}, {})", c.field_type, c.m));
        }
    }
    for q in odd_primes(32) {
        let k = FieldDescriptor::prime_field(q).map_err(|e| e.to_string())?;
        let ambient = k.elements().map_err(|e| e.to_string())?;
        for s in 0..=3u32 {
            let table: HashSet<_> = ambient
                .iter()
                .filter(|x| !x.is_zero())
                .map(|x| x.pow(1 << s).expect("nonnegative"))
                .filter(|y| k.is_in_k(y))
                .collect();
            for r in 1..q as i64 {
                let a = k.from_i64(r);
                let got = ks_membership(&k, &a, s).map_err(|e| e.to_string())?;
                if got != table.contains(&a) {
                    return Err(format!("F:{q}: membership of {r} in K_{s} is wrong"));
                }
            }
        }
    }
    Ok("type law for q < 200, membership for q ≤ 31, s ≤ 3".into())
}

/// Finite instances whose algebra fits in the enumeration budget.
pub fn cross_check_instances(max_enum: u128) -> Vec<(u64, u32, u64)> {
    let mut out = Vec::new();
    for q in [3u64, 5, 7, 11, 13] {
        for n in 1..=4u32 {
            if (q as u128)
                .checked_pow(1 << n)
                .is_none_or(|size| size > max_enum)
            {
                break;
            }
            for a in 1..q {
                out.push((q, n, a));
            }
        }
    }
    out
}

/// Run everything, writing one line per check. Returns the first failure.
pub fn run(opts: &SelftestOptions, out: &mut dyn Write) -> io::Result<Option<Failure>> {
    for e in MATRIX {
        let name = format!("matrix ({}, {}, {}) [{}]", e.field, e.n, e.a, e.branch);
        match check_entry(e, opts.fault) {
            Ok(detail) => writeln!(out, "ok    {name}: {detail}")?,
            Err(why) => {
                writeln!(out, "FAIL  {name}: {why}")?;
                return Ok(Some(Failure {
                    check: name,
                    invariant: why,
                    repro: e.command(),
                }));
            }
        }
    }

    let name = "structure law".to_string();
    match structure_law() {
        Ok(detail) => writeln!(out, "ok    {name}: {detail}")?,
        Err(why) => {
            writeln!(out, "FAIL  {name}: {why}")?;
            return Ok(Some(Failure {
                check: name,
                invariant: why,
                repro: "tga selftest".into(),
            }));
        }
    }

    let instances = cross_check_instances(opts.max_enum);
    if instances.is_empty() {
        writeln!(
            out,
            "skip  finite cross-checks: budget {} too small",
            opts.max_enum
        )?;
    }
    for &(q, n, a) in &instances {
        let repro = format!("tga verify F:{q} {n} {a} --max-enum {}", opts.max_enum);
        let outcome = FieldDescriptor::prime_field(q)
            .and_then(|k| AlgebraSpec::new(k, n, k.from_i64(a as i64)))
            .and_then(|spec| cross_check(&spec, opts.max_enum));
        match outcome {
            Ok(true) => {}
            Ok(false) => {
                let name = format!("cross-check (F:{q}, {n}, {a})");
                writeln!(out, "FAIL  {name}: builder and enumeration disagree")?;
                return Ok(Some(Failure {
                    check: name,
                    invariant: "builder family equals the enumerated minimal idempotents".into(),
                    repro,
                }));
            }
            Err(err) => {
                let name = format!("cross-check (F:{q}, {n}, {a})");
                writeln!(out, "FAIL  {name}: {err}")?;
                return Ok(Some(Failure {
                    check: name,
                    invariant: err.to_string(),
                    repro,
                }));
            }
        }
        if (a + 1) == q {
            writeln!(out, "ok    cross-check F:{q}, n = {n}, all a ∈ F_{q}*")?;
        }
    }
    Ok(None)
}
