//! Field types, the constant m, the invariant H_n(a), and the coset
//! decomposition of the defining constant a.
//!
//! Types A and C (fields of the second kind) have no literal representative
//! here. A type-B (resp. type-D) field whose constant satisfies m ≥ n + 1
//! behaves exactly like type A (resp. C) for an algebra of order 2^n, and is
//! annotated as emulating it.

use std::fmt;

use serde::Serialize;

use num_traits::{Signed, Zero};

use crate::error::{Error, Result};
use crate::field::{Elem, FieldDescriptor, Involution, PowerTarget, POWER_CAP};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub enum FieldType {
    /// K = K(ε₂)
    B,
    /// K ≠ K(ε₂), σ(ε_m) = ε_m^(-1)
    D,
    /// K ≠ K(ε₂), σ(ε_m) = −ε_m^(-1)
    E,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub enum Emulation {
    None,
    A,
    C,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Classification {
    pub field_type: FieldType,
    pub m: u32,
    pub emulates: Emulation,
}

impl Classification {
    /// Annotate emulation of a second-kind field for an algebra of order 2^n.
    pub fn for_order(mut self, n: u32) -> Self {
        self.emulates = match self.field_type {
            _ if self.m < n + 1 => Emulation::None,
            FieldType::B => Emulation::A,
            FieldType::D => Emulation::C,
            FieldType::E => Emulation::None,
        };
        self
    }
}

impl fmt::Display for FieldType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            FieldType::B => "B",
            FieldType::D => "D",
            FieldType::E => "E",
        };
        f.write_str(s)
    }
}

impl fmt::Display for Emulation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            Emulation::None => "none",
            Emulation::A => "A",
            Emulation::C => "C",
        };
        f.write_str(s)
    }
}

pub fn classify(field: &FieldDescriptor) -> Classification {
    let m = field.two_power_exponent();
    let field_type = if field.involution() == Involution::Identity {
        FieldType::B
    } else {
        let eps = field.eps(m).expect("ε_m exists by definition of m");
        let image = field.sigma(&eps);
        let inv = eps.inv().expect("roots of unity are units");
        if image == inv {
            FieldType::D
        } else if image == -&inv {
            FieldType::E
        } else {
            unreachable!("σ(ε_m) ∉ {{ε_m^-1, −ε_m^-1}} for an order-2 automorphism")
        }
    };
    Classification {
        field_type,
        m,
        emulates: Emulation::None,
    }
}

fn check_constant(field: &FieldDescriptor, a: &Elem) -> Result<()> {
    if a.field() != *field {
        return Err(Error::FieldMismatch {
            left: field.to_string(),
            right: a.field().to_string(),
        });
    }
    if a.is_zero() {
        return Err(Error::ZeroConstant);
    }
    if !field.is_in_k(a) {
        return Err(Error::NotInFixedField(a.to_string()));
    }
    Ok(())
}

/// H_n(a) together with an ambient witness α, α^(2^s) = a.
pub fn h_n_with_witness(field: &FieldDescriptor, a: &Elem, n: u32) -> Result<(u32, Elem)> {
    check_constant(field, a)?;
    if n > POWER_CAP {
        return Err(Error::PowerCapExceeded {
            exponent: n,
            cap: POWER_CAP,
        });
    }
    let mut best = (0, a.clone());
    for s in 1..=n {
        match field.power_root(a, s, PowerTarget::Ambient)? {
            Some(w) => best = (s, w),
            None => break,
        }
    }
    Ok(best)
}

/// The greatest s ∈ [0, n] with a ∈ K* ∩ A*^(2^s).
pub fn h_n(field: &FieldDescriptor, a: &Elem, n: u32) -> Result<u32> {
    h_n_with_witness(field, a, n).map(|(s, _)| s)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum CosetForm {
    /// a = b^(2^s)
    Plain,
    /// a = −b^(2^s)
    Negated,
    /// a = (1 + ε_m)^(2^s) · b^(2^s)
    EpsCoset,
}

impl fmt::Display for CosetForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            CosetForm::Plain => "plain",
            CosetForm::Negated => "negated",
            CosetForm::EpsCoset => "eps_coset",
        };
        f.write_str(s)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CosetDecomposition {
    pub s: u32,
    pub form: CosetForm,
    /// b ∈ K
    pub b: Elem,
}

impl CosetDecomposition {
    /// Rebuild a from (s, form, b).
    pub fn recompose(&self, field: &FieldDescriptor) -> Result<Elem> {
        let power = self.b.pow(1i64 << self.s)?;
        Ok(match self.form {
            CosetForm::Plain => power,
            CosetForm::Negated => -power,
            CosetForm::EpsCoset => {
                let m = classify(field).m;
                let shift = &field.one() + &field.eps(m)?;
                &shift.pow(1i64 << self.s)? * &power
            }
        })
    }
}

/// Locate ζ among the 2^m roots of unity: returns k with ε_m^k = ζ.
fn root_index(tower: &[Elem], m: u32, zeta: &Elem) -> Option<u64> {
    let gen = &tower[m as usize];
    let mut acc = gen.field().one();
    for k in 0..(1u64 << m) {
        if acc == *zeta {
            return Some(k);
        }
        acc = &acc * gen;
    }
    None
}

/// Write a ∈ K_s as b^(2^s), −b^(2^s) or (1 + ε_m)^(2^s) b^(2^s) with b ∈ K.
///
/// Follows the constructive norm argument: take α with α^(2^s) = a, set
/// c = N(α), read off the root of unity α²/c = ε_t, and twist α by a root of
/// unity (or by 1 + ε_m when t = m) to land in K.
pub fn ks_decompose(field: &FieldDescriptor, a: &Elem, s: u32) -> Result<CosetDecomposition> {
    check_constant(field, a)?;
    if s == 0 {
        return Ok(CosetDecomposition {
            s,
            form: CosetForm::Plain,
            b: a.clone(),
        });
    }
    let alpha = field
        .power_root(a, s, PowerTarget::Ambient)?
        .ok_or_else(|| {
            Error::Precondition(format!("{a} is not a 2^{s}-th power in the ambient"))
        })?;
    if field.involution() == Involution::Identity {
        return finish(
            field,
            a,
            CosetDecomposition {
                s,
                form: CosetForm::Plain,
                b: alpha,
            },
        );
    }

    let class = classify(field);
    let m = class.m;
    let tower = field.root_tower();
    let eps_m = &tower[m as usize];
    let c = field.norm(&alpha)?;
    let zeta0 = alpha.checked_div(&c)?.checked_mul(&alpha)?;
    let k = root_index(&tower, m, &zeta0).ok_or_else(|| {
        Error::Internal(format!("α²/N(α) = {zeta0} is not a 2-power root of unity"))
    })?;
    let t = if k == 0 { 0 } else { m - k.trailing_zeros() };
    if t > s {
        return Err(Error::Internal(format!("t = {t} exceeds s = {s}")));
    }

    if t == m {
        if class.field_type != FieldType::D {
            return Err(Error::Internal("t = m forces type D".into()));
        }
        // σ(α) = ε_m^(-k) α with k odd; b = α ε_m^((1-k)/2) / (1 + ε_m) is
        // fixed by σ, and the root-of-unity factor dies under 2^s ≥ 2^m.
        let one = field.one();
        let b = (&alpha * &eps_m.pow((1 - k as i64) / 2)?).checked_div(&(&one + eps_m))?;
        let dec = CosetDecomposition {
            s,
            form: CosetForm::EpsCoset,
            b,
        };
        return finish(field, a, dec);
    }

    let beta = if t == m - 1 && class.field_type == FieldType::E {
        // N(ε_m) = −1: β = α ε₂ ρ^-1 gives c = −β².
        let rho = eps_m.pow((k / 2) as i64)?;
        (&alpha * &tower[2]).checked_div(&rho)?
    } else {
        // N(ρ) = 1 for ρ² = α²/c: β = α ρ^-1 gives c = β².
        let rho = eps_m.pow((k / 2) as i64)?;
        alpha.checked_div(&rho)?
    };
    // α = β·ω with ω a 2^(s+1)-th root of unity, so a = ±β^(2^s).
    let ratio = a.checked_div(&beta.pow(1i64 << s)?)?;
    let form = if ratio.is_one() {
        CosetForm::Plain
    } else if ratio == -field.one() {
        CosetForm::Negated
    } else {
        return Err(Error::Internal(format!(
            "a / β^(2^s) = {ratio}, expected ±1"
        )));
    };
    finish(field, a, CosetDecomposition { s, form, b: beta })
}

/// Of ±b, the one whose first nonzero coordinate is positive (a residue
/// counts as positive when it is at most (q − 1)/2).
fn normalize_sign(b: Elem) -> Elem {
    let negative = if let Some(c) = b.rational_coords() {
        c.iter()
            .find(|r| !r.is_zero())
            .is_some_and(|r| r.is_negative())
    } else {
        let q = b.field().characteristic().unwrap_or(0);
        let c = b.residues().unwrap_or(&[]);
        c.iter()
            .find(|&&r| r != 0)
            .is_some_and(|&r| r > (q - 1) / 2)
    };
    if negative {
        -b
    } else {
        b
    }
}

fn finish(
    field: &FieldDescriptor,
    a: &Elem,
    mut dec: CosetDecomposition,
) -> Result<CosetDecomposition> {
    dec.b = normalize_sign(dec.b);
    if !field.is_in_k(&dec.b) {
        return Err(Error::Internal(format!("b = {} is not in K", dec.b)));
    }
    if dec.recompose(field)? != *a {
        return Err(Error::Internal(
            "decomposition does not recompose to a".into(),
        ));
    }
    Ok(dec)
}

/// a ∈ K_s, decided from the structure of K_s through power tests in K.
pub fn ks_membership(field: &FieldDescriptor, a: &Elem, s: u32) -> Result<bool> {
    check_constant(field, a)?;
    if s == 0 {
        return Ok(true);
    }
    let in_k_power = |x: &Elem| -> Result<bool> {
        Ok(field.power_root(x, s, PowerTarget::FixedField)?.is_some())
    };
    let class = classify(field);
    match class.field_type {
        FieldType::B => in_k_power(a),
        // ⟨−1⟩ × K*^(2^s)
        FieldType::D | FieldType::E if s < class.m => Ok(in_k_power(a)? || in_k_power(&-a)?),
        // ⟨(1 + ε_m)^(2^s)⟩ K*^(2^s)
        FieldType::D => {
            if in_k_power(a)? {
                return Ok(true);
            }
            let shift = (&field.one() + &field.eps(class.m)?).pow(1i64 << s)?;
            in_k_power(&a.checked_div(&shift)?)
        }
        // K*^(2^s)
        FieldType::E => in_k_power(a),
    }
}
