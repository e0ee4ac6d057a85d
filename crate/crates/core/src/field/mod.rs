//! Exact arithmetic in the ambient field A = K(ε₂).
//!
//! A field K is never represented directly. A [`FieldDescriptor`] names an
//! ambient field A (a 2-power cyclotomic field or F_q / F_q[i]) together with
//! an involution σ of A whose fixed field is K. When σ is the identity, K = A.

mod cyclo;
mod finite;

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Signed, Zero};

use crate::error::{Error, Result};

/// Largest 2-power exponent accepted by the branching power test.
pub const POWER_CAP: u32 = 16;

/// Largest supported cyclotomic level (Q(ε_L) has dimension 2^(L-1)).
pub const MAX_LEVEL: u32 = 12;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum AmbientKind {
    /// Q(ε_L), dimension 2^(L-1) over Q. Level 1 is Q itself.
    Cyclotomic { level: u32 },
    /// F_q (degree 1) or F_q[i] with i² = −1 (degree 2).
    Finite { q: u64, degree: u32 },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Involution {
    Identity,
    /// ε_L ↦ ε_L^(-1)
    InverseConj,
    /// ε_L ↦ −ε_L^(-1)
    NegatedInverseConj,
    /// x ↦ x^q on F_q[i]
    Frobenius,
}

/// Where a root extracted by [`FieldDescriptor::power_root`] must live.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PowerTarget {
    Ambient,
    FixedField,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct FieldDescriptor {
    ambient: AmbientKind,
    involution: Involution,
    // Generator of the Sylow 2-subgroup of A* (finite ambients only).
    sylow: [u64; 2],
}

fn is_odd_prime(q: u64) -> bool {
    if q < 3 || q.is_multiple_of(2) {
        return false;
    }
    let mut f = 3;
    while f * f <= q {
        if q.is_multiple_of(f) {
            return false;
        }
        f += 2;
    }
    true
}

impl FieldDescriptor {
    pub fn cyclotomic(level: u32, involution: Involution) -> Result<Self> {
        if !(2..=MAX_LEVEL).contains(&level) {
            return Err(Error::InvalidDescriptor(format!(
                "cyclotomic level must be in 2..={MAX_LEVEL} so that ε₂ lies in the ambient, got {level}"
            )));
        }
        match involution {
            Involution::Identity => {}
            Involution::InverseConj if level >= 2 => {}
            Involution::NegatedInverseConj if level >= 3 => {}
            Involution::Frobenius => {
                return Err(Error::InvalidDescriptor(
                    "frobenius involution needs a finite ambient".into(),
                ))
            }
            other => {
                return Err(Error::InvalidDescriptor(format!(
                    "involution {other:?} is not of order 2 on Q(ε_{level})"
                )))
            }
        }
        Ok(FieldDescriptor {
            ambient: AmbientKind::Cyclotomic { level },
            involution,
            sylow: [0, 0],
        })
    }

    pub fn finite(q: u64, degree: u32, involution: Involution) -> Result<Self> {
        if !is_odd_prime(q) || q >= 1 << 31 {
            return Err(Error::InvalidDescriptor(format!(
                "q must be an odd prime below 2^31, got {q}"
            )));
        }
        match degree {
            1 if q % 4 == 1 => {}
            1 => {
                return Err(Error::InvalidDescriptor(format!(
                    "F_q contains ε₂ only for q ≡ 1 mod 4, got q = {q}; use F_q[i]"
                )))
            }
            2 if q % 4 == 3 => {}
            2 => {
                return Err(Error::InvalidDescriptor(format!(
                    "F_q[i] needs q ≡ 3 mod 4 so that −1 is a non-square, got q = {q}"
                )))
            }
            _ => {
                return Err(Error::InvalidDescriptor(format!(
                    "finite ambient degree must be 1 or 2, got {degree}"
                )))
            }
        }
        match (involution, degree) {
            (Involution::Identity, _) | (Involution::Frobenius, 2) => {}
            (inv, _) => {
                return Err(Error::InvalidDescriptor(format!(
                    "involution {inv:?} unsupported on F_{q}^{degree}"
                )))
            }
        }
        let d = degree as usize;
        let (_, odd) = finite::two_adic(finite::order(q, d) - 1);
        let g = finite::pow(&finite::least_non_square(q, d), odd, q);
        // ε_w = g^((q^d − 1)/2^w) = g^odd
        let top = finite::pow(&g, odd, q);
        let mut sylow = [0, 0];
        sylow[..d].copy_from_slice(&top);
        Ok(FieldDescriptor {
            ambient: AmbientKind::Finite { q, degree },
            involution,
            sylow,
        })
    }

    /// K = Q inside A = Q(i).
    pub fn rationals() -> Self {
        FieldDescriptor {
            ambient: AmbientKind::Cyclotomic { level: 2 },
            involution: Involution::InverseConj,
            sylow: [0, 0],
        }
    }

    /// K = F_q with A = K(ε₂).
    pub fn prime_field(q: u64) -> Result<Self> {
        if q % 4 == 3 {
            Self::finite(q, 2, Involution::Frobenius)
        } else {
            Self::finite(q, 1, Involution::Identity)
        }
    }

    pub fn ambient(&self) -> AmbientKind {
        self.ambient
    }

    pub fn involution(&self) -> Involution {
        self.involution
    }

    /// The ambient field viewed as a field in its own right (σ = id).
    pub fn ambient_descriptor(&self) -> Self {
        FieldDescriptor {
            involution: Involution::Identity,
            ..*self
        }
    }

    pub fn is_finite(&self) -> bool {
        matches!(self.ambient, AmbientKind::Finite { .. })
    }

    /// Characteristic, or `None` for characteristic 0.
    pub fn characteristic(&self) -> Option<u64> {
        match self.ambient {
            AmbientKind::Finite { q, .. } => Some(q),
            AmbientKind::Cyclotomic { .. } => None,
        }
    }

    /// Number of coordinates of an ambient element.
    pub fn dim(&self) -> usize {
        match self.ambient {
            AmbientKind::Cyclotomic { level } => 1 << (level - 1),
            AmbientKind::Finite { degree, .. } => degree as usize,
        }
    }

    /// log₂ of the order of the Sylow 2-subgroup of A*.
    pub fn two_power_exponent(&self) -> u32 {
        match self.ambient {
            AmbientKind::Cyclotomic { level } => level,
            AmbientKind::Finite { q, degree } => {
                finite::two_adic(finite::order(q, degree as usize) - 1).0
            }
        }
    }

    fn check(&self, x: &Elem) -> Result<()> {
        if x.field != *self {
            return Err(Error::FieldMismatch {
                left: self.to_string(),
                right: x.field.to_string(),
            });
        }
        Ok(())
    }

    pub fn zero(&self) -> Elem {
        let coords = match self.ambient {
            AmbientKind::Cyclotomic { .. } => Coords::Rational(cyclo::zero(self.dim())),
            AmbientKind::Finite { .. } => Coords::Residue(vec![0; self.dim()]),
        };
        Elem {
            field: *self,
            coords,
        }
    }

    pub fn one(&self) -> Elem {
        self.from_i64(1)
    }

    pub fn from_i64(&self, n: i64) -> Elem {
        self.from_rational(&BigRational::from_integer(BigInt::from(n)))
            .expect("integers embed in every odd-characteristic field")
    }

    /// Embed a rational. Fails in characteristic q when q divides the denominator.
    pub fn from_rational(&self, r: &BigRational) -> Result<Elem> {
        match self.ambient {
            AmbientKind::Cyclotomic { .. } => {
                let mut c = cyclo::zero(self.dim());
                c[0] = r.clone();
                Ok(Elem {
                    field: *self,
                    coords: Coords::Rational(c),
                })
            }
            AmbientKind::Finite { q, .. } => {
                let qi = BigInt::from(q);
                let num = residue_of(r.numer(), &qi);
                let den = residue_of(r.denom(), &qi);
                let den_inv = finite::inv(&[den], q).ok_or(Error::DivisionByZero)?;
                let mut c = vec![0; self.dim()];
                c[0] = (num as u128 * den_inv[0] as u128 % q as u128) as u64;
                Ok(Elem {
                    field: *self,
                    coords: Coords::Residue(c),
                })
            }
        }
    }

    /// Build an element from rational coordinates; missing trailing
    /// coordinates are zero.
    pub fn from_rationals(&self, coords: &[BigRational]) -> Result<Elem> {
        if coords.len() > self.dim() {
            return Err(Error::Parse(format!(
                "{} coordinates given, {self} has dimension {}",
                coords.len(),
                self.dim()
            )));
        }
        match self.ambient {
            AmbientKind::Cyclotomic { .. } => {
                let mut c = cyclo::zero(self.dim());
                c[..coords.len()].clone_from_slice(coords);
                Ok(Elem {
                    field: *self,
                    coords: Coords::Rational(c),
                })
            }
            AmbientKind::Finite { .. } => {
                let mut acc = self.zero();
                let basis = self.basis();
                for (r, e) in coords.iter().zip(basis) {
                    acc = &acc + &(&self.from_rational(r)? * &e);
                }
                Ok(acc)
            }
        }
    }

    /// Build an element of a finite ambient from integer coordinates over {1, i}.
    pub fn from_residues(&self, coords: &[i64]) -> Result<Elem> {
        let AmbientKind::Finite { q, .. } = self.ambient else {
            return Err(Error::NotFinite(self.to_string()));
        };
        if coords.len() > self.dim() {
            return Err(Error::Parse(format!(
                "{} coordinates given, {self} has dimension {}",
                coords.len(),
                self.dim()
            )));
        }
        let mut c = vec![0; self.dim()];
        for (slot, &v) in c.iter_mut().zip(coords) {
            *slot = finite::reduce(v as i128, q);
        }
        Ok(Elem {
            field: *self,
            coords: Coords::Residue(c),
        })
    }

    /// The power basis 1, ζ, … (cyclotomic) or 1, i (finite).
    pub fn basis(&self) -> Vec<Elem> {
        (0..self.dim())
            .map(|k| match self.ambient {
                AmbientKind::Cyclotomic { .. } => Elem {
                    field: *self,
                    coords: Coords::Rational(cyclo::zeta_pow(self.dim(), k as i64)),
                },
                AmbientKind::Finite { .. } => {
                    let mut c = vec![0; self.dim()];
                    c[k] = 1;
                    Elem {
                        field: *self,
                        coords: Coords::Residue(c),
                    }
                }
            })
            .collect()
    }

    /// Every element of a finite ambient, in coordinate order.
    pub fn elements(&self) -> Result<Vec<Elem>> {
        let AmbientKind::Finite { q, degree } = self.ambient else {
            return Err(Error::NotFinite(self.to_string()));
        };
        Ok(finite::enumerate(q, degree as usize)
            .map(|c| Elem {
                field: *self,
                coords: Coords::Residue(c),
            })
            .collect())
    }

    fn sylow_generator(&self) -> Elem {
        match self.ambient {
            AmbientKind::Cyclotomic { level } => Elem {
                field: *self,
                coords: Coords::Rational(cyclo::zeta_pow(1 << (level - 1), 1)),
            },
            AmbientKind::Finite { degree, .. } => Elem {
                field: *self,
                coords: Coords::Residue(self.sylow[..degree as usize].to_vec()),
            },
        }
    }

    /// The canonical primitive 2^t-th root of unity ε_t.
    pub fn eps(&self, t: u32) -> Result<Elem> {
        let max = self.two_power_exponent();
        if t > max {
            return Err(Error::RootUnavailable { t, max });
        }
        let top = self.sylow_generator();
        Ok(top.pow_u(1u128 << (max - t)))
    }

    /// ε_0, ε_1, …, ε_w with ε_{t-1} = ε_t², w = [`Self::two_power_exponent`].
    pub fn root_tower(&self) -> Vec<Elem> {
        let w = self.two_power_exponent();
        let mut tower = vec![self.sylow_generator()];
        for _ in 0..w {
            let last = tower.last().unwrap();
            tower.push(last * last);
        }
        tower.reverse();
        tower
    }

    pub fn sigma(&self, x: &Elem) -> Elem {
        let coords = match (&x.coords, self.involution) {
            (_, Involution::Identity) => x.coords.clone(),
            (Coords::Rational(c), Involution::InverseConj) => {
                Coords::Rational(cyclo::inverse_conj(c))
            }
            (Coords::Rational(c), Involution::NegatedInverseConj) => {
                Coords::Rational(cyclo::negated_inverse_conj(c))
            }
            (Coords::Residue(c), Involution::Frobenius) => {
                let AmbientKind::Finite { q, .. } = self.ambient else {
                    unreachable!()
                };
                Coords::Residue(finite::frobenius(c, q))
            }
            _ => unreachable!("descriptor constructors reject this combination"),
        };
        Elem {
            field: *self,
            coords,
        }
    }

    pub fn is_in_k(&self, x: &Elem) -> bool {
        self.sigma(x) == *x
    }

    /// N(x) = x·σ(x) for the quadratic extension A/K.
    pub fn norm(&self, x: &Elem) -> Result<Elem> {
        if self.involution == Involution::Identity {
            return Err(Error::NormOnIdentity);
        }
        self.check(x)?;
        Ok(x * &self.sigma(x))
    }

    /// A square root of `x` in A, sign-canonicalized, or `None`.
    pub fn sqrt(&self, x: &Elem) -> Option<Elem> {
        let coords = match (&x.coords, self.ambient) {
            (Coords::Rational(c), _) => Coords::Rational(cyclo::sqrt(c)?),
            (Coords::Residue(c), AmbientKind::Finite { q, degree }) => {
                let r = finite::sqrt(c, q, &self.sylow[..degree as usize])?;
                let minus = finite::neg(&r, q);
                Coords::Residue(r.min(minus))
            }
            _ => unreachable!(),
        };
        Some(Elem {
            field: *self,
            coords,
        })
    }

    /// Decide whether `x` is a 2^e-th power (in A, or in K) and return a root.
    ///
    /// Walks both sign branches at every level: every 2^e-th root is reachable
    /// by a sequence of sign choices on successive square roots.
    pub fn power_root(&self, x: &Elem, e: u32, target: PowerTarget) -> Result<Option<Elem>> {
        if e > POWER_CAP {
            return Err(Error::PowerCapExceeded {
                exponent: e,
                cap: POWER_CAP,
            });
        }
        self.check(x)?;
        if target == PowerTarget::FixedField && !self.is_in_k(x) {
            return Ok(None);
        }
        if x.is_zero() || x.is_one() {
            return Ok(Some(x.clone()));
        }
        Ok(self.power_root_branching(x, e, target))
    }

    fn power_root_branching(&self, x: &Elem, e: u32, target: PowerTarget) -> Option<Elem> {
        if e == 0 {
            return match target {
                PowerTarget::Ambient => Some(x.clone()),
                PowerTarget::FixedField => self.is_in_k(x).then(|| x.clone()),
            };
        }
        let y = self.sqrt(x)?;
        let minus = -&y;
        if let Some(w) = self.power_root_branching(&y, e - 1, target) {
            return Some(w);
        }
        self.power_root_branching(&minus, e - 1, target)
    }
}

fn residue_of(n: &BigInt, q: &BigInt) -> u64 {
    let r = ((n % q) + q) % q;
    u64::try_from(r).expect("residue below q")
}

impl fmt::Display for FieldDescriptor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match (self.ambient, self.involution) {
            (AmbientKind::Cyclotomic { level: 2 }, Involution::InverseConj) => write!(f, "Q"),
            (AmbientKind::Cyclotomic { level }, Involution::Identity) => write!(f, "QC:{level}"),
            (AmbientKind::Cyclotomic { level }, Involution::InverseConj) => write!(f, "QR:{level}"),
            (AmbientKind::Cyclotomic { level }, Involution::NegatedInverseConj) => {
                write!(f, "QE:{level}")
            }
            (AmbientKind::Finite { q, degree: 1 }, Involution::Identity) => write!(f, "F:{q}"),
            (AmbientKind::Finite { q, degree: 2 }, Involution::Frobenius) => write!(f, "F:{q}"),
            (AmbientKind::Finite { q, degree: 2 }, Involution::Identity) => write!(f, "F:{q}^2"),
            (ambient, inv) => write!(f, "{ambient:?}/{inv:?}"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
enum Coords {
    Rational(Vec<BigRational>),
    Residue(Vec<u64>),
}

/// An exact element of the ambient field of its owning descriptor.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Elem {
    field: FieldDescriptor,
    coords: Coords,
}

impl Elem {
    pub fn field(&self) -> FieldDescriptor {
        self.field
    }

    pub fn rational_coords(&self) -> Option<&[BigRational]> {
        match &self.coords {
            Coords::Rational(c) => Some(c),
            Coords::Residue(_) => None,
        }
    }

    pub fn residues(&self) -> Option<&[u64]> {
        match &self.coords {
            Coords::Residue(c) => Some(c),
            Coords::Rational(_) => None,
        }
    }

    /// Coordinates rendered as exact strings ("p/q" rationals or residues).
    pub fn coord_strings(&self) -> Vec<String> {
        match &self.coords {
            Coords::Rational(c) => c.iter().map(|r| r.to_string()).collect(),
            Coords::Residue(c) => c.iter().map(|r| r.to_string()).collect(),
        }
    }

    pub fn is_zero(&self) -> bool {
        match &self.coords {
            Coords::Rational(c) => cyclo::is_zero(c),
            Coords::Residue(c) => finite::is_zero(c),
        }
    }

    pub fn is_one(&self) -> bool {
        *self == self.field.one()
    }

    fn q(&self) -> u64 {
        match self.field.ambient {
            AmbientKind::Finite { q, .. } => q,
            AmbientKind::Cyclotomic { .. } => 0,
        }
    }

    fn zip_with(
        &self,
        other: &Elem,
        rat: impl Fn(&[BigRational], &[BigRational]) -> Vec<BigRational>,
        res: impl Fn(&[u64], &[u64], u64) -> Vec<u64>,
    ) -> Elem {
        assert_eq!(
            self.field, other.field,
            "field mismatch: {} vs {}",
            self.field, other.field
        );
        let coords = match (&self.coords, &other.coords) {
            (Coords::Rational(a), Coords::Rational(b)) => Coords::Rational(rat(a, b)),
            (Coords::Residue(a), Coords::Residue(b)) => Coords::Residue(res(a, b, self.q())),
            _ => unreachable!(),
        };
        Elem {
            field: self.field,
            coords,
        }
    }

    pub fn checked_add(&self, other: &Elem) -> Result<Elem> {
        self.field.check(other)?;
        Ok(self + other)
    }

    pub fn checked_sub(&self, other: &Elem) -> Result<Elem> {
        self.field.check(other)?;
        Ok(self - other)
    }

    pub fn checked_mul(&self, other: &Elem) -> Result<Elem> {
        self.field.check(other)?;
        Ok(self * other)
    }

    pub fn checked_div(&self, other: &Elem) -> Result<Elem> {
        self.field.check(other)?;
        Ok(self * &other.inv()?)
    }

    pub fn inv(&self) -> Result<Elem> {
        let coords = match &self.coords {
            Coords::Rational(c) => Coords::Rational(cyclo::inv(c).ok_or(Error::DivisionByZero)?),
            Coords::Residue(c) => {
                Coords::Residue(finite::inv(c, self.q()).ok_or(Error::DivisionByZero)?)
            }
        };
        Ok(Elem {
            field: self.field,
            coords,
        })
    }

    pub fn scale(&self, r: &BigRational) -> Result<Elem> {
        Ok(self * &self.field.from_rational(r)?)
    }

    fn pow_u(&self, mut e: u128) -> Elem {
        if let Coords::Residue(c) = &self.coords {
            return Elem {
                field: self.field,
                coords: Coords::Residue(finite::pow(c, e, self.q())),
            };
        }
        let mut base = self.clone();
        let mut acc = self.field.one();
        while e > 0 {
            if e & 1 == 1 {
                acc = &acc * &base;
            }
            e >>= 1;
            if e > 0 {
                base = &base * &base;
            }
        }
        acc
    }

    /// Integer power; negative exponents need a nonzero base.
    pub fn pow(&self, e: i64) -> Result<Elem> {
        if e >= 0 {
            Ok(self.pow_u(e as u128))
        } else {
            Ok(self.inv()?.pow_u(e.unsigned_abs() as u128))
        }
    }

    /// The same ambient element, owned by another descriptor over the same
    /// ambient field.
    pub fn in_field(&self, field: FieldDescriptor) -> Result<Elem> {
        if field.ambient != self.field.ambient {
            return Err(Error::FieldMismatch {
                left: self.field.to_string(),
                right: field.to_string(),
            });
        }
        Ok(Elem {
            field,
            coords: self.coords.clone(),
        })
    }

    /// Total order used for sign canonicalization and deterministic sorting.
    pub fn canonical_cmp(&self, other: &Elem) -> Ordering {
        match (&self.coords, &other.coords) {
            (Coords::Rational(a), Coords::Rational(b)) => a.cmp(b),
            (Coords::Residue(a), Coords::Residue(b)) => a.cmp(b),
            (Coords::Rational(_), Coords::Residue(_)) => Ordering::Less,
            (Coords::Residue(_), Coords::Rational(_)) => Ordering::Greater,
        }
    }
}

impl Add for &Elem {
    type Output = Elem;
    fn add(self, rhs: &Elem) -> Elem {
        self.zip_with(rhs, cyclo::add, finite::add)
    }
}

impl Sub for &Elem {
    type Output = Elem;
    fn sub(self, rhs: &Elem) -> Elem {
        self.zip_with(rhs, cyclo::sub, finite::sub)
    }
}

impl Mul for &Elem {
    type Output = Elem;
    fn mul(self, rhs: &Elem) -> Elem {
        self.zip_with(rhs, cyclo::mul, finite::mul)
    }
}

impl Neg for &Elem {
    type Output = Elem;
    fn neg(self) -> Elem {
        let coords = match &self.coords {
            Coords::Rational(c) => Coords::Rational(cyclo::neg(c)),
            Coords::Residue(c) => Coords::Residue(finite::neg(c, self.q())),
        };
        Elem {
            field: self.field,
            coords,
        }
    }
}

macro_rules! forward_owned {
    ($tr:ident, $m:ident) => {
        impl $tr for Elem {
            type Output = Elem;
            fn $m(self, rhs: Elem) -> Elem {
                (&self).$m(&rhs)
            }
        }
        impl $tr<&Elem> for Elem {
            type Output = Elem;
            fn $m(self, rhs: &Elem) -> Elem {
                (&self).$m(rhs)
            }
        }
    };
}
forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);

impl Neg for Elem {
    type Output = Elem;
    fn neg(self) -> Elem {
        -&self
    }
}

fn root_symbol(field: &FieldDescriptor) -> &'static str {
    match field.ambient {
        AmbientKind::Cyclotomic { level: 2 } | AmbientKind::Finite { .. } => "i",
        AmbientKind::Cyclotomic { .. } => "z",
    }
}

impl fmt::Display for Elem {
    /// Sum of nonzero terms over the power basis, e.g. `1/2 - 3z^2`.
    /// For cyclotomic fields of level ≥ 3, `z` is the primitive 2^L-th root ζ.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let sym = root_symbol(&self.field);
        let terms: Vec<(bool, String, usize)> = match &self.coords {
            Coords::Rational(c) => c
                .iter()
                .enumerate()
                .filter(|(_, r)| !r.is_zero())
                .map(|(k, r)| (r.is_negative(), r.abs().to_string(), k))
                .collect(),
            Coords::Residue(c) => c
                .iter()
                .enumerate()
                .filter(|(_, r)| **r != 0)
                .map(|(k, r)| (false, r.to_string(), k))
                .collect(),
        };
        if terms.is_empty() {
            return write!(f, "0");
        }
        for (idx, (negative, mag, k)) in terms.iter().enumerate() {
            match (idx, negative) {
                (0, true) => write!(f, "-")?,
                (0, false) => {}
                (_, true) => write!(f, " - ")?,
                (_, false) => write!(f, " + ")?,
            }
            let mono = match k {
                0 => String::new(),
                1 => sym.to_string(),
                k => format!("{sym}^{k}"),
            };
            match (*k, mag.as_str()) {
                (0, m) => write!(f, "{m}")?,
                (_, "1") => write!(f, "{mono}")?,
                (_, m) => write!(f, "{m}{mono}")?,
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_traits::One;

    fn qe(level: u32) -> FieldDescriptor {
        FieldDescriptor::cyclotomic(level, Involution::NegatedInverseConj).unwrap()
    }

    fn qr(level: u32) -> FieldDescriptor {
        FieldDescriptor::cyclotomic(level, Involution::InverseConj).unwrap()
    }

    fn f3() -> FieldDescriptor {
        FieldDescriptor::prime_field(3).unwrap()
    }

    #[test]
    fn descriptor_validation() {
        assert!(FieldDescriptor::cyclotomic(2, Involution::NegatedInverseConj).is_err());
        assert!(FieldDescriptor::finite(5, 2, Involution::Frobenius).is_err());
        assert!(FieldDescriptor::finite(9, 1, Involution::Identity).is_err());
        assert!(FieldDescriptor::finite(7, 1, Involution::Frobenius).is_err());
        assert!(FieldDescriptor::cyclotomic(3, Involution::Frobenius).is_err());
    }

    #[test]
    fn arith_examples() {
        let q = FieldDescriptor::rationals();
        let i = q.eps(2).unwrap();
        let one = q.one();
        assert_eq!(&(&one + &i) * &(&one - &i), q.from_i64(2));

        let f = f3();
        let x = f.from_residues(&[1, 1]).unwrap();
        assert_eq!(&x * &x, f.from_residues(&[0, -1]).unwrap());

        let c = FieldDescriptor::cyclotomic(3, Involution::Identity).unwrap();
        let z = &c.basis()[1];
        assert!((z * &z.pow(7).unwrap()).is_one());
    }

    #[test]
    fn division_by_zero_and_mismatch() {
        let q = FieldDescriptor::rationals();
        assert_eq!(q.zero().inv(), Err(Error::DivisionByZero));
        assert!(matches!(
            q.one().checked_add(&f3().one()),
            Err(Error::FieldMismatch { .. })
        ));
    }

    #[test]
    fn eps_examples() {
        for field in [FieldDescriptor::rationals(), qe(3), f3()] {
            assert_eq!(field.eps(1).unwrap(), field.from_i64(-1));
        }
        let e2 = qe(3).eps(2).unwrap();
        assert_eq!(e2.rational_coords().unwrap()[2], BigRational::one());
        assert_eq!(f3().eps(3).unwrap(), f3().from_residues(&[1, 1]).unwrap());
        assert!(matches!(f3().eps(4), Err(Error::RootUnavailable { .. })));
    }

    #[test]
    fn eps_orders() {
        for field in [
            FieldDescriptor::rationals(),
            qr(4),
            qe(3),
            f3(),
            FieldDescriptor::prime_field(17).unwrap(),
        ] {
            for t in 1..=field.two_power_exponent() {
                let e = field.eps(t).unwrap();
                assert!(e.pow(1 << t).unwrap().is_one());
                assert_eq!(e.pow(1 << (t - 1)).unwrap(), field.from_i64(-1));
            }
            let tower = field.root_tower();
            for (t, e) in tower.iter().enumerate() {
                assert_eq!(*e, field.eps(t as u32).unwrap());
            }
        }
    }

    #[test]
    fn sigma_examples() {
        let q = FieldDescriptor::rationals();
        let i = q.eps(2).unwrap();
        assert_eq!(q.sigma(&i), -&i);

        let e = qe(3);
        let z = e.eps(3).unwrap();
        assert_eq!(e.sigma(&z), z.pow(3).unwrap());

        let f = f3();
        let i = f.from_residues(&[0, 1]).unwrap();
        assert_eq!(f.sigma(&i), i.pow(3).unwrap());
    }

    #[test]
    fn fixed_field_membership() {
        let q = FieldDescriptor::rationals();
        assert!(q.is_in_k(&q.from_i64(2)));
        assert!(!q.is_in_k(&q.eps(2).unwrap()));
        let e = qe(3);
        let z = e.eps(3).unwrap();
        assert!(e.is_in_k(&(&z - &z.inv().unwrap())));
        assert!(!e.is_in_k(&(&z + &z.inv().unwrap())));
    }

    #[test]
    fn norm_examples() {
        let q = FieldDescriptor::rationals();
        let x = &q.one() + &q.eps(2).unwrap();
        assert_eq!(q.norm(&x).unwrap(), q.from_i64(2));
        assert!(qr(3).norm(&qr(3).eps(3).unwrap()).unwrap().is_one());
        assert_eq!(
            qe(3).norm(&qe(3).eps(3).unwrap()).unwrap(),
            qe(3).from_i64(-1)
        );
        let b = FieldDescriptor::cyclotomic(3, Involution::Identity).unwrap();
        assert_eq!(b.norm(&b.one()), Err(Error::NormOnIdentity));
    }

    #[test]
    fn sqrt_examples() {
        let q = FieldDescriptor::rationals();
        let two_i = q
            .from_rationals(&[BigRational::zero(), BigRational::from_integer(2.into())])
            .unwrap();
        let r = q.sqrt(&two_i).unwrap();
        assert_eq!(&r * &r, two_i);
        assert!(q.sqrt(&q.from_i64(2)).is_none());
        let f = f3();
        let r = f.sqrt(&f.from_i64(-1)).unwrap();
        assert_eq!(&r * &r, f.from_i64(-1));
        assert!(r == f.from_residues(&[0, 1]).unwrap() || r == f.from_residues(&[0, 2]).unwrap());
    }

    #[test]
    fn branching_power_test_examples() {
        let q = FieldDescriptor::rationals();
        let w = q
            .power_root(&q.from_i64(16), 3, PowerTarget::Ambient)
            .unwrap()
            .unwrap();
        assert_eq!(w.pow(8).unwrap(), q.from_i64(16));
        assert!(q
            .power_root(&q.from_i64(2), 1, PowerTarget::Ambient)
            .unwrap()
            .is_none());
        for field in [q, f3(), qe(4)] {
            let w = field
                .power_root(&field.one(), 5, PowerTarget::Ambient)
                .unwrap();
            assert_eq!(w, Some(field.one()));
        }
        assert!(matches!(
            q.power_root(&q.one(), 17, PowerTarget::Ambient),
            Err(Error::PowerCapExceeded { .. })
        ));
    }

    #[test]
    fn the_positive_branch_of_16_dead_ends() {
        let q = FieldDescriptor::rationals();
        assert!(q
            .power_root(&q.from_i64(4), 2, PowerTarget::Ambient)
            .unwrap()
            .is_none());
        assert!(q
            .power_root(&q.from_i64(-4), 2, PowerTarget::Ambient)
            .unwrap()
            .is_some());
    }

    #[test]
    fn fixed_field_power_test() {
        let q = FieldDescriptor::rationals();
        // −4 = (1+i)^4 in Q(i) but not a 4th power in Q.
        assert!(q
            .power_root(&q.from_i64(-4), 2, PowerTarget::FixedField)
            .unwrap()
            .is_none());
        let w = q
            .power_root(&q.from_i64(81), 2, PowerTarget::FixedField)
            .unwrap()
            .unwrap();
        assert!(q.is_in_k(&w));
        assert_eq!(w.pow(4).unwrap(), q.from_i64(81));
    }

    #[test]
    fn display_forms() {
        let q = FieldDescriptor::rationals();
        let x = q
            .from_rationals(&[
                BigRational::new(1.into(), 2.into()),
                BigRational::from_integer((-3).into()),
            ])
            .unwrap();
        assert_eq!(x.to_string(), "1/2 - 3i");
        assert_eq!(q.zero().to_string(), "0");
        let z = qe(3).basis()[3].clone();
        assert_eq!((-z).to_string(), "-z^3");
    }
}
