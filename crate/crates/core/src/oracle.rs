//! Independent checks of idempotent families: algebraic properties for any
//! field, and exhaustive ground truth over small finite fields.

use std::cmp::Ordering;
use std::fmt;
use std::sync::Arc;

use serde::Serialize;

use crate::algebra::{
    binomial_irreducible, min_poly_in_component, AlgebraElement, AlgebraSpec, Over, Poly,
};
use crate::builder::{build_with, BuildOptions, IdempotentFamily};
use crate::error::{Error, Result};
use crate::field::{Elem, FieldDescriptor, Involution, PowerTarget};

/// Default cap on the number of elements an exhaustive search may visit.
pub const DEFAULT_BUDGET: u128 = 1_000_000;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Certificate {
    /// x^(2^k) − c with c outside K² and −4K⁴.
    Binomial,
    /// No monic divisor of degree ≤ d/2 over F_q.
    Exhaustive,
    /// Quadratic with a non-square discriminant.
    Discriminant,
    /// The ambient minimal idempotents below e form one σ-orbit.
    ScalarExtension,
}

impl fmt::Display for Certificate {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            Certificate::Binomial => "binomial criterion",
            Certificate::Exhaustive => "exhaustive search",
            Certificate::Discriminant => "discriminant",
            Certificate::ScalarExtension => "scalar extension",
        };
        f.write_str(s)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Primitivity {
    Certified(Certificate),
    Reducible(String),
    NotCertified,
}

impl Primitivity {
    pub fn is_certified(&self) -> bool {
        matches!(self, Primitivity::Certified(_))
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ItemReport {
    pub label: String,
    pub idempotent: bool,
    pub k_rational: bool,
    pub primitive: Primitivity,
    pub dim: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct VerificationReport {
    pub items: Vec<ItemReport>,
    pub orthogonal: bool,
    /// Label pairs whose product is nonzero.
    pub orthogonality_failures: Vec<(String, String)>,
    pub sum_is_one: bool,
    pub dims: Vec<usize>,
    pub dim_sum_ok: bool,
    pub overall: bool,
    pub first_counterexample: Option<String>,
}

/// Check e² = e, e_i e_j = 0, Σe = 1, K-rationality, primitivity and Σ dim = 2^n.
pub fn verify_family(family: &IdempotentFamily) -> VerificationReport {
    let spec = &family.spec;
    let field = spec.field();
    let g = AlgebraElement::g_power(spec, 1);
    let mut ambient = AmbientCache::default();
    let mut failures: Vec<String> = Vec::new();

    let mut items = Vec::with_capacity(family.items.len());
    for item in &family.items {
        let e = &item.element;
        let label = item.label.to_string();
        let idempotent = e.is_idempotent();
        let k_rational = e.is_k_rational();
        let (dim, primitive) = if idempotent {
            match min_poly_in_component(e, &g) {
                Ok(p) => {
                    let prim = if k_rational {
                        certify(&field, e, &p, &mut ambient)
                    } else {
                        Primitivity::NotCertified
                    };
                    (p.degree(), prim)
                }
                Err(err) => (0, Primitivity::Reducible(err.to_string())),
            }
        } else {
            (0, Primitivity::NotCertified)
        };
        if !idempotent {
            failures.push(format!("{label} is not a nonzero idempotent"));
        }
        if !k_rational {
            failures.push(format!("{label} has a coefficient outside K"));
        }
        match &primitive {
            Primitivity::Certified(_) => {}
            Primitivity::Reducible(why) => {
                failures.push(format!("{label} is not primitive: {why}"))
            }
            Primitivity::NotCertified => {
                failures.push(format!("{label}: primitivity not certified"))
            }
        }
        items.push(ItemReport {
            label,
            idempotent,
            k_rational,
            primitive,
            dim,
        });
    }

    let mut orthogonality_failures = Vec::new();
    for (i, x) in family.items.iter().enumerate() {
        for y in &family.items[i + 1..] {
            if !(&x.element * &y.element).is_zero() {
                orthogonality_failures.push((x.label.to_string(), y.label.to_string()));
            }
        }
    }
    if let Some((x, y)) = orthogonality_failures.first() {
        failures.push(format!("{x}·{y} ≠ 0"));
    }

    let mut sum = AlgebraElement::zero(spec);
    for e in family.elements() {
        sum = &sum + e;
    }
    let sum_is_one = sum.is_one();
    if !sum_is_one {
        failures.push(format!("Σe = {sum} ≠ 1"));
    }

    let dims: Vec<usize> = items.iter().map(|it| it.dim).collect();
    let dim_sum: usize = dims.iter().sum();
    let dim_sum_ok = dim_sum == spec.order();
    if !dim_sum_ok {
        failures.push(format!("Σ dim = {dim_sum} ≠ {}", spec.order()));
    }

    let orthogonal = orthogonality_failures.is_empty();
    let overall = failures.is_empty();
    VerificationReport {
        items,
        orthogonal,
        orthogonality_failures,
        sum_is_one,
        dims,
        dim_sum_ok,
        overall,
        first_counterexample: failures.into_iter().next(),
    }
}

/// The verified ambient family, built on first use.
#[derive(Default)]
struct AmbientCache {
    family: Option<Option<IdempotentFamily>>,
}

impl AmbientCache {
    fn get(&mut self, spec: &Arc<AlgebraSpec>) -> Option<&IdempotentFamily> {
        self.family
            .get_or_insert_with(|| ambient_family(spec).ok())
            .as_ref()
    }
}

fn ambient_spec(spec: &Arc<AlgebraSpec>) -> Result<Arc<AlgebraSpec>> {
    let amb = spec.field().ambient_descriptor();
    AlgebraSpec::new(amb, spec.n(), spec.a().in_field(amb)?)
}

/// The family over A ⊗ K_t⟨g⟩ = A_t⟨g⟩, verified with its own certificates.
fn ambient_family(spec: &Arc<AlgebraSpec>) -> Result<IdempotentFamily> {
    build_with(&ambient_spec(spec)?, &BuildOptions::default())
}

/// Move an element to another spec over the same ambient field and n.
fn rehome(x: &AlgebraElement, spec: &Arc<AlgebraSpec>) -> Result<AlgebraElement> {
    let field = spec.field();
    let coeffs = x
        .coeffs()
        .iter()
        .map(|c| c.in_field(field))
        .collect::<Result<_>>()?;
    AlgebraElement::from_coeffs(spec, coeffs)
}

/// σ applied coefficientwise; ḡ is fixed.
fn sigma(field: &FieldDescriptor, x: &AlgebraElement) -> Result<AlgebraElement> {
    let coeffs = x
        .coeffs()
        .iter()
        .map(|c| field.sigma(&c.in_field(*field)?).in_field(c.field()))
        .collect::<Result<_>>()?;
    AlgebraElement::from_coeffs(x.spec(), coeffs)
}

fn certify(
    field: &FieldDescriptor,
    e: &AlgebraElement,
    p: &Poly,
    ambient: &mut AmbientCache,
) -> Primitivity {
    if let Some(bin) = p.as_binomial().filter(|b| b.degree.is_power_of_two()) {
        return match binomial_irreducible(field, &bin, Over::FixedField) {
            Ok(true) => Primitivity::Certified(Certificate::Binomial),
            Ok(false) => Primitivity::Reducible(format!("{p} factors over K")),
            Err(err) => Primitivity::Reducible(err.to_string()),
        };
    }
    if let Some(q) = field.characteristic() {
        let coeffs: Vec<u64> = p
            .coeffs()
            .iter()
            .map(|c| c.residues().map_or(0, |r| r[0]))
            .collect();
        match exhaustive_irreducible(q, &coeffs, DEFAULT_BUDGET) {
            Some(true) => return Primitivity::Certified(Certificate::Exhaustive),
            Some(false) => return Primitivity::Reducible(format!("{p} has a factor over F_{q}")),
            None => {}
        }
    }
    if p.degree() == 2 {
        let c = p.coeffs();
        let disc = &(&c[1] * &c[1]) - &(&field.from_i64(4) * &c[0]);
        return match field.power_root(&disc, 1, PowerTarget::FixedField) {
            Ok(None) => Primitivity::Certified(Certificate::Discriminant),
            Ok(Some(_)) => Primitivity::Reducible(format!("{p} has a square discriminant")),
            Err(err) => Primitivity::Reducible(err.to_string()),
        };
    }
    if field.involution() != Involution::Identity {
        if let Some(fam) = ambient.get(e.spec()) {
            return match scalar_extension(field, e, fam) {
                Ok(true) => Primitivity::Certified(Certificate::ScalarExtension),
                Ok(false) => Primitivity::Reducible("splits into several σ-orbits over A".into()),
                Err(err) => Primitivity::Reducible(err.to_string()),
            };
        }
    }
    Primitivity::NotCertified
}

/// e is primitive iff the ambient minimal idempotents below e form a single
/// σ-orbit summing to e.
fn scalar_extension(
    field: &FieldDescriptor,
    e: &AlgebraElement,
    ambient: &IdempotentFamily,
) -> Result<bool> {
    let e_amb = rehome(e, &ambient.spec)?;
    let below: Vec<&AlgebraElement> = ambient.elements().filter(|f| &(&e_amb * f) == *f).collect();
    let Some(first) = below.first() else {
        return Ok(false);
    };
    let mut sum = AlgebraElement::zero(&ambient.spec);
    for f in &below {
        sum = &sum + f;
    }
    if sum != e_amb {
        return Ok(false);
    }
    let conj = sigma(field, first)?;
    Ok(match below.len() {
        1 => conj == **first,
        2 => conj == *below[1],
        _ => false,
    })
}

/// Total order on algebra elements by coefficient vectors.
pub fn cmp_elements(x: &AlgebraElement, y: &AlgebraElement) -> Ordering {
    x.coeffs()
        .iter()
        .zip(y.coeffs())
        .map(|(a, b)| a.canonical_cmp(b))
        .find(|o| o.is_ne())
        .unwrap_or(Ordering::Equal)
}

fn sorted(mut xs: Vec<AlgebraElement>) -> Vec<AlgebraElement> {
    xs.sort_by(cmp_elements);
    xs
}

/// σ-orbit sums of the ambient family equal the family over K, as sets.
pub fn conjugate_pairing_check(family: &IdempotentFamily) -> Result<bool> {
    let spec = &family.spec;
    let field = spec.field();
    if field.involution() == Involution::Identity {
        return Err(Error::Precondition("K = A has no conjugate pairs".into()));
    }
    let ambient = ambient_family(spec)?;
    let elems: Vec<&AlgebraElement> = ambient.elements().collect();
    let mut used = vec![false; elems.len()];
    let mut sums = Vec::new();
    for i in 0..elems.len() {
        if used[i] {
            continue;
        }
        used[i] = true;
        let conj = sigma(&field, elems[i])?;
        let Some(j) = elems.iter().position(|f| **f == conj) else {
            return Ok(false);
        };
        let orbit_sum = if j == i {
            elems[i].clone()
        } else {
            used[j] = true;
            elems[i] + elems[j]
        };
        sums.push(rehome(&orbit_sum, spec)?);
    }
    Ok(sorted(sums) == sorted(family.elements().cloned().collect()))
}

/// Irreducibility of a monic polynomial over F_q (coefficients lowest first)
/// by trial division with every monic polynomial of degree ≤ d/2. `None`
/// when that search exceeds `budget` candidates.
pub fn exhaustive_irreducible(q: u64, poly: &[u64], budget: u128) -> Option<bool> {
    let d = poly.len().checked_sub(1)?;
    if d <= 1 {
        return Some(true);
    }
    let total: u128 = (1..=d / 2).map(|k| (q as u128).pow(k as u32)).sum();
    if total > budget {
        return None;
    }
    for k in 1..=d / 2 {
        let mut divisor = vec![0u64; k + 1];
        divisor[k] = 1;
        for idx in 0..(q as u128).pow(k as u32) {
            let mut rest = idx;
            for slot in divisor.iter_mut().take(k) {
                *slot = (rest % q as u128) as u64;
                rest /= q as u128;
            }
            if poly_rem_is_zero(poly, &divisor, q) {
                return Some(false);
            }
        }
    }
    Some(true)
}

fn poly_rem_is_zero(f: &[u64], monic: &[u64], q: u64) -> bool {
    let mut r = f.to_vec();
    let k = monic.len() - 1;
    for top in (k..r.len()).rev() {
        let c = r[top];
        if c == 0 {
            continue;
        }
        for (t, &m) in monic.iter().enumerate() {
            let slot = top - k + t;
            r[slot] = (r[slot] + q - (c * m) % q) % q;
        }
    }
    r[..k].iter().all(|&x| x == 0)
}

/// All minimal idempotents of K_t⟨g⟩ over K = F_q, by enumerating the whole
/// algebra. Sorted by coefficient vector.
pub fn brute_enumerate_minimal(
    spec: &Arc<AlgebraSpec>,
    budget: u128,
) -> Result<Vec<AlgebraElement>> {
    let field = spec.field();
    let Some(q) = field.characteristic() else {
        return Err(Error::NotFinite(field.to_string()));
    };
    let order = spec.order();
    let size = (q as u128).checked_pow(order as u32).unwrap_or(u128::MAX);
    if size > budget {
        return Err(Error::BudgetExceeded { size, budget });
    }
    let a = spec.a().residues().expect("finite field")[0];
    let mul = |x: &[u64], y: &[u64]| -> Vec<u64> {
        let mut out = vec![0u64; order];
        for (i, &xi) in x.iter().enumerate().filter(|(_, &c)| c != 0) {
            for (j, &yj) in y.iter().enumerate() {
                let p = xi * yj % q;
                let k = i + j;
                if k < order {
                    out[k] = (out[k] + p) % q;
                } else {
                    out[k - order] = (out[k - order] + p * a) % q;
                }
            }
        }
        out
    };

    let mut idempotents = Vec::new();
    let mut v = vec![0u64; order];
    loop {
        // Advance the odometer; the all-zero vector is skipped.
        let mut pos = 0;
        while pos < order {
            v[pos] += 1;
            if v[pos] < q {
                break;
            }
            v[pos] = 0;
            pos += 1;
        }
        if pos == order {
            break;
        }
        if mul(&v, &v) == v {
            idempotents.push(v.clone());
        }
    }
    let atoms: Vec<&Vec<u64>> = idempotents
        .iter()
        .filter(|e| {
            idempotents.iter().all(|f| {
                let p = mul(e, f);
                p.iter().all(|&c| c == 0) || p == **e
            })
        })
        .collect();
    let out = atoms
        .into_iter()
        .map(|e| {
            let coeffs = e
                .iter()
                .map(|&c| field.from_residues(&[c as i64]))
                .collect::<Result<Vec<Elem>>>()?;
            AlgebraElement::from_coeffs(spec, coeffs)
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(sorted(out))
}

/// Builder output equals brute-force enumeration as a set.
pub fn cross_check(spec: &Arc<AlgebraSpec>, budget: u128) -> Result<bool> {
    let brute = brute_enumerate_minimal(spec, budget)?;
    let opts = BuildOptions {
        checked: false,
        ..BuildOptions::default()
    };
    let family = build_with(spec, &opts)?;
    Ok(sorted(family.elements().cloned().collect()) == brute)
}
