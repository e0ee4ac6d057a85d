//! Complete families of minimal idempotents of K_t⟨g⟩.
//!
//! With s = H_n(a) and a twisted by b ∈ K as recorded in the coset
//! decomposition, h = b^(-1) ḡ^(2^(n−s)) generates a cyclic group H of order
//! 2^s (up to the sign or (1 + ε_m) twist), and every minimal idempotent of
//! the algebra is a character sum over H or over one of its subgroups H^(2^r).
//! When K ≠ A the sums come from the ambient family by adding σ-conjugate
//! pairs, which turns the characters into the two-term weights below.

use std::fmt;
use std::sync::Arc;

use serde::Serialize;

use crate::algebra::{min_poly_in_component, AlgebraElement, AlgebraSpec, Poly};
use crate::classify::{
    classify, h_n, ks_decompose, Classification, CosetDecomposition, CosetForm, FieldType,
};
use crate::error::{Error, Result};
use crate::field::{Elem, Involution};
use crate::oracle;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
#[serde(untagged)]
pub enum Label {
    Single(u64),
    Double(u64, u64),
}

impl fmt::Display for Label {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Label::Single(i) => write!(f, "e_{i}"),
            Label::Double(r, i) => write!(f, "e_{{{r},{i}}}"),
        }
    }
}

/// Which family of closed formulas produced the idempotents.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Case {
    /// K = A, s ≤ m: 2^s characters of H.
    Diagonal,
    /// K = A, s > m: characters of H with root ε_m plus the tower over H^(2^r).
    DiagonalTower,
    /// K ≠ A, s = 0: the algebra is a field.
    Trivial,
    /// K ≠ A, a = b^(2^s), 1 ≤ s ≤ m − 1.
    PairedLow,
    /// K ≠ A, a = b^(2^s), s ≥ m.
    PairedHigh,
    /// K ≠ A, a = −b^(2^s).
    PairedNegated,
    /// Type D, a = (1 + ε_m)^(2^s) b^(2^s).
    PairedEpsCoset,
}

impl fmt::Display for Case {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            Case::Diagonal => "diagonal",
            Case::DiagonalTower => "diagonal_tower",
            Case::Trivial => "trivial",
            Case::PairedLow => "paired_low",
            Case::PairedHigh => "paired_high",
            Case::PairedNegated => "paired_negated",
            Case::PairedEpsCoset => "paired_eps_coset",
        };
        f.write_str(s)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FamilyItem {
    pub label: Label,
    pub element: AlgebraElement,
    pub component_dim: usize,
    pub component_min_poly: Poly,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IdempotentFamily {
    pub spec: Arc<AlgebraSpec>,
    pub classification: Classification,
    pub decomposition: CosetDecomposition,
    pub case: Case,
    pub items: Vec<FamilyItem>,
}

impl IdempotentFamily {
    pub fn elements(&self) -> impl Iterator<Item = &AlgebraElement> {
        self.items.iter().map(|it| &it.element)
    }
}

/// Alternative index ranges kept for regression tests of the adopted ones.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct FormulaVariant {
    /// Negated coset: run i over 0..2^(s−1) rather than 1..2^(s−1).
    pub negated_from_zero: bool,
    /// Plain coset with s ≥ m: include r = 0 in the e_{r,i} family.
    pub high_with_r0: bool,
    /// Use −λ in place of λ.
    pub flip_lambda: bool,
}

impl Default for FormulaVariant {
    fn default() -> Self {
        FormulaVariant {
            negated_from_zero: true,
            high_with_r0: true,
            flip_lambda: false,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct BuildOptions {
    /// Run the full verification before returning.
    pub checked: bool,
    pub variant: FormulaVariant,
}

impl Default for BuildOptions {
    fn default() -> Self {
        BuildOptions {
            checked: true,
            variant: FormulaVariant::default(),
        }
    }
}

/// Build and verify the family of minimal idempotents.
pub fn build(spec: &Arc<AlgebraSpec>) -> Result<IdempotentFamily> {
    build_with(spec, &BuildOptions::default())
}

pub fn build_with(spec: &Arc<AlgebraSpec>, opts: &BuildOptions) -> Result<IdempotentFamily> {
    let field = spec.field();
    let n = spec.n();
    let classification = classify(&field).for_order(n);
    let s = h_n(&field, spec.a(), n)?;
    let decomposition = ks_decompose(&field, spec.a(), s)?;
    let case = dispatch(&classification, field.involution(), &decomposition)?;
    let ctx = Ctx::new(spec, &decomposition.b, s)?;
    let v = opts.variant;
    let m = classification.m;
    let elements = match case {
        Case::Diagonal => ctx.diagonal()?,
        Case::DiagonalTower => ctx.diagonal_tower(m)?,
        Case::Trivial => vec![(Label::Single(0), AlgebraElement::one(spec))],
        Case::PairedLow => ctx.paired_low()?,
        Case::PairedHigh => {
            let lambda = match classification.field_type {
                FieldType::E => -1,
                _ => 1,
            };
            ctx.paired_high(m, flip(lambda, v.flip_lambda), v.high_with_r0)?
        }
        Case::PairedNegated => {
            let lambda = match classification.field_type {
                FieldType::E if s + 1 == m => -1,
                _ => 1,
            };
            ctx.paired_negated(flip(lambda, v.flip_lambda), v.negated_from_zero)?
        }
        Case::PairedEpsCoset => ctx.paired_eps_coset(m)?,
    };
    let mut items = Vec::with_capacity(elements.len());
    let g = AlgebraElement::g_power(spec, 1);
    for (label, element) in elements {
        let (component_dim, component_min_poly) = if element.is_idempotent() {
            let p = min_poly_in_component(&element, &g)?;
            (p.degree(), p)
        } else if opts.checked {
            return Err(Error::Verification(format!(
                "{label} is not a nonzero idempotent"
            )));
        } else {
            // Unchecked builds of deliberately wrong variants still report.
            (0, Poly::new(vec![field.one()])?)
        };
        items.push(FamilyItem {
            label,
            element,
            component_dim,
            component_min_poly,
        });
    }
    let family = IdempotentFamily {
        spec: spec.clone(),
        classification,
        decomposition,
        case,
        items,
    };
    if opts.checked {
        let report = oracle::verify_family(&family);
        if !report.overall {
            return Err(Error::Verification(
                report
                    .first_counterexample
                    .unwrap_or_else(|| "unknown failure".into()),
            ));
        }
    }
    Ok(family)
}

fn flip(lambda: i64, yes: bool) -> i64 {
    if yes {
        -lambda
    } else {
        lambda
    }
}

/// Exactly one case applies to every (type, s, coset form).
pub fn dispatch(
    class: &Classification,
    involution: Involution,
    dec: &CosetDecomposition,
) -> Result<Case> {
    let (s, m) = (dec.s, class.m);
    let case = match (involution == Involution::Identity, dec.form) {
        (true, CosetForm::Plain) if s <= m => Case::Diagonal,
        (true, CosetForm::Plain) => Case::DiagonalTower,
        (false, _) if s == 0 => Case::Trivial,
        (false, CosetForm::Plain) if s < m => Case::PairedLow,
        (false, CosetForm::Plain) => Case::PairedHigh,
        (false, CosetForm::Negated) if s < m => Case::PairedNegated,
        (false, CosetForm::EpsCoset) if s >= m && class.field_type == FieldType::D => {
            Case::PairedEpsCoset
        }
        _ => {
            return Err(Error::Internal(format!(
                "no case for type {} with s = {s}, m = {m}, form {}",
                class.field_type, dec.form
            )))
        }
    };
    Ok(case)
}

type Items = Vec<(Label, AlgebraElement)>;

struct Ctx<'a> {
    spec: &'a Arc<AlgebraSpec>,
    tower: Vec<Elem>,
    b: Elem,
    s: u32,
}

impl<'a> Ctx<'a> {
    fn new(spec: &'a Arc<AlgebraSpec>, b: &Elem, s: u32) -> Result<Self> {
        Ok(Ctx {
            spec,
            tower: spec.field().root_tower(),
            b: b.clone(),
            s,
        })
    }

    /// ε_t^k for any integer k.
    fn root(&self, t: u32, k: i64) -> Elem {
        let k = k.rem_euclid(1i64 << t);
        self.tower[t as usize].pow(k).expect("nonnegative exponent")
    }

    fn sign(&self, j: u64) -> Elem {
        let one = self.spec.field().one();
        if j.is_multiple_of(2) {
            one
        } else {
            -one
        }
    }

    /// 2^(-(s−r)) Σ_{j<2^(s−r)} w(j) (b^(-2^r) ḡ^(2^(n−s+r)))^j.
    ///
    /// The powers never wrap past ḡ^(2^n), so each term is a single monomial.
    fn character_sum(
        &self,
        r: u32,
        weight: impl Fn(u64) -> Result<Elem>,
    ) -> Result<AlgebraElement> {
        let field = self.spec.field();
        let len = 1u64 << (self.s - r);
        let stride = 1u64 << (self.spec.n() - self.s + r);
        let scale = field.from_i64(len as i64).inv()?;
        let b_step = self.b.pow(-(1i64 << r))?;
        let mut coeffs = vec![field.zero(); self.spec.order()];
        let mut b_pow = scale;
        for j in 0..len {
            coeffs[(j * stride) as usize] = &weight(j)? * &b_pow;
            b_pow = &b_pow * &b_step;
        }
        AlgebraElement::from_coeffs(self.spec, coeffs)
    }

    fn diagonal(&self) -> Result<Items> {
        let s = self.s;
        (0..1u64 << s)
            .map(|i| {
                let e = self.character_sum(0, |j| Ok(self.root(s, -((i * j) as i64))))?;
                Ok((Label::Single(i), e))
            })
            .collect()
    }

    fn diagonal_tower(&self, m: u32) -> Result<Items> {
        let s = self.s;
        let mut out = Vec::new();
        for i in 0..1u64 << m {
            let e = self.character_sum(0, |j| Ok(self.root(m, -((i * j) as i64))))?;
            out.push((Label::Single(i), e));
        }
        for r in 1..=s - m {
            for i in 0..1u64 << (m - 1) {
                let e = self.character_sum(r, |j| {
                    let j = j as i64;
                    Ok(&self.root(m, -j) * &self.root(m - 1, -(i as i64) * j))
                })?;
                out.push((Label::Double(r as u64, i), e));
            }
        }
        Ok(out)
    }

    fn paired_low(&self) -> Result<Items> {
        let s = self.s;
        let half = 1u64 << (s - 1);
        let mut out = Vec::new();
        for i in 0..=half {
            let e = self.character_sum(0, |j| {
                Ok(match i {
                    0 => self.spec.field().one(),
                    _ if i == half => self.sign(j),
                    _ => {
                        let k = (i * j) as i64;
                        &self.root(s, k) + &self.root(s, -k)
                    }
                })
            })?;
            out.push((Label::Single(i), e));
        }
        Ok(out)
    }

    fn paired_high(&self, m: u32, lambda: i64, with_r0: bool) -> Result<Items> {
        let s = self.s;
        let quarter = 1u64 << (m - 2);
        let mut out = Vec::new();
        for i in 0..=quarter {
            let e = self.character_sum(0, |j| {
                Ok(match i {
                    0 => self.spec.field().one(),
                    _ if i == quarter => self.sign(j),
                    _ => {
                        let k = (i * j) as i64;
                        &self.root(m - 1, k) + &self.root(m - 1, -k)
                    }
                })
            })?;
            out.push((Label::Single(i), e));
        }
        let first_r = if with_r0 { 0 } else { 1 };
        for r in first_r..=s - m {
            for i in 0..quarter {
                let e = self.character_sum(r, |j| {
                    let (jj, k) = (j as i64, (i * j) as i64);
                    let left = &self.root(m, -jj) * &self.root(m - 2, -k);
                    let right = &self.root(m, jj) * &self.root(m - 2, k);
                    let right = if lambda == -1 {
                        &self.sign(j) * &right
                    } else {
                        right
                    };
                    Ok(&left + &right)
                })?;
                out.push((Label::Double(r as u64, i), e));
            }
        }
        Ok(out)
    }

    fn paired_negated(&self, lambda: i64, from_zero: bool) -> Result<Items> {
        let s = self.s;
        let first = if from_zero { 0 } else { 1 };
        let mut out = Vec::new();
        for i in first..1u64 << (s - 1) {
            let e = self.character_sum(0, |j| {
                let (jj, k) = (j as i64, (i * j) as i64);
                let left = &self.root(s + 1, -jj) * &self.root(s - 1, -k);
                let right = &self.root(s + 1, jj) * &self.root(s - 1, k);
                let right = if lambda == -1 {
                    &self.sign(j) * &right
                } else {
                    right
                };
                Ok(&left + &right)
            })?;
            out.push((Label::Single(i), e));
        }
        Ok(out)
    }

    fn paired_eps_coset(&self, m: u32) -> Result<Items> {
        let s = self.s;
        let field = self.spec.field();
        let one = field.one();
        let eps = self.root(m, 1);
        let shift_inv = (&one + &eps).inv()?;
        // 2 + ε_m + ε_m^(-1) = (1 + ε_m)² ε_m^(-1) lies in K.
        let c_inv = (&(&field.from_i64(2) + &eps) + &eps.inv()?).inv()?;
        let mut out = Vec::new();
        for i in 0..1u64 << (m - 1) {
            let e = self.character_sum(0, |j| {
                let (jj, k) = (j as i64, (i * j) as i64);
                let chars = &self.root(m - 1, -k) + &(&self.root(m, jj) * &self.root(m - 1, k));
                Ok(&shift_inv.pow(jj)? * &chars)
            })?;
            out.push((Label::Single(i), e));
        }
        if s > m {
            let quarter = 1u64 << (m - 2);
            for i in 0..quarter.saturating_sub(1) {
                let e = self.character_sum(1, |j| {
                    let k = (j * (1 + i)) as i64;
                    let chars = &self.root(m - 1, -k) + &self.root(m - 1, k);
                    Ok(&c_inv.pow(j as i64)? * &chars)
                })?;
                out.push((Label::Double(1, i), e));
            }
            let e = self.character_sum(1, |j| Ok(&self.sign(j) * &c_inv.pow(j as i64)?))?;
            out.push((Label::Double(1, quarter - 1), e));
            let e = self.character_sum(1, |j| c_inv.pow(j as i64))?;
            out.push((Label::Double(1, 2 * quarter - 1), e));
        }
        for r in 2..=s.saturating_sub(m) {
            for i in 0..1u64 << (m - 2) {
                let e = self.character_sum(r, |j| {
                    let jj = j as i64;
                    let left = &self.root(m, -jj) * &self.root(m - 2, -((i * j) as i64));
                    let shifted = (j * (i + (1u64 << (r - 2)))) as i64;
                    let right = &self.root(m, jj) * &self.root(m - 2, shifted);
                    Ok(&shift_inv.pow(jj << r)? * &(&left + &right))
                })?;
                out.push((Label::Double(r as u64, i), e));
            }
        }
        Ok(out)
    }
}
