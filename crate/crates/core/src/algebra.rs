//! The twisted group algebra K_t⟨g⟩ with ḡ^(2^n) = a, stored densely over
//! the basis 1, ḡ, …, ḡ^(2^n − 1) with coefficients in the ambient field.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::field::{Elem, FieldDescriptor, PowerTarget, POWER_CAP};

/// Largest supported n (order 2^n of the cyclic group).
pub const MAX_N: u32 = POWER_CAP;

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct AlgebraSpec {
    field: FieldDescriptor,
    n: u32,
    a: Elem,
}

impl AlgebraSpec {
    pub fn new(field: FieldDescriptor, n: u32, a: Elem) -> Result<Arc<Self>> {
        if n > MAX_N {
            return Err(Error::DegreeOutOfRange { n, max: MAX_N });
        }
        if a.field() != field {
            return Err(Error::FieldMismatch {
                left: field.to_string(),
                right: a.field().to_string(),
            });
        }
        if a.is_zero() {
            return Err(Error::ZeroConstant);
        }
        if !field.is_in_k(&a) {
            return Err(Error::NotInFixedField(a.to_string()));
        }
        Ok(Arc::new(AlgebraSpec { field, n, a }))
    }

    pub fn field(&self) -> FieldDescriptor {
        self.field
    }

    pub fn n(&self) -> u32 {
        self.n
    }

    pub fn a(&self) -> &Elem {
        &self.a
    }

    /// Dimension 2^n over K.
    pub fn order(&self) -> usize {
        1usize << self.n
    }
}

impl fmt::Display for AlgebraSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, n={}, a={})", self.field, self.n, self.a)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct AlgebraElement {
    spec: Arc<AlgebraSpec>,
    coeffs: Vec<Elem>,
}

impl AlgebraElement {
    pub fn zero(spec: &Arc<AlgebraSpec>) -> Self {
        AlgebraElement {
            spec: spec.clone(),
            coeffs: vec![spec.field.zero(); spec.order()],
        }
    }

    pub fn one(spec: &Arc<AlgebraSpec>) -> Self {
        Self::scalar(spec, spec.field.one())
    }

    pub fn scalar(spec: &Arc<AlgebraSpec>, c: Elem) -> Self {
        let mut out = Self::zero(spec);
        out.coeffs[0] = c;
        out
    }

    /// ḡ^k for any k ≥ 0, reduced with ḡ^(2^n) = a.
    pub fn g_power(spec: &Arc<AlgebraSpec>, k: u64) -> Self {
        let order = spec.order() as u64;
        let c = spec.a.pow((k / order) as i64).expect("nonnegative power");
        let mut out = Self::zero(spec);
        out.coeffs[(k % order) as usize] = c;
        out
    }

    pub fn from_coeffs(spec: &Arc<AlgebraSpec>, coeffs: Vec<Elem>) -> Result<Self> {
        if coeffs.len() != spec.order() {
            return Err(Error::Precondition(format!(
                "expected {} coefficients, got {}",
                spec.order(),
                coeffs.len()
            )));
        }
        if let Some(c) = coeffs.iter().find(|c| c.field() != spec.field) {
            return Err(Error::FieldMismatch {
                left: spec.field.to_string(),
                right: c.field().to_string(),
            });
        }
        Ok(AlgebraElement {
            spec: spec.clone(),
            coeffs,
        })
    }

    pub fn spec(&self) -> &Arc<AlgebraSpec> {
        &self.spec
    }

    pub fn coeffs(&self) -> &[Elem] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(Elem::is_zero)
    }

    pub fn is_one(&self) -> bool {
        self.coeffs[0].is_one() && self.coeffs[1..].iter().all(Elem::is_zero)
    }

    /// Every coefficient is fixed by σ.
    pub fn is_k_rational(&self) -> bool {
        self.coeffs.iter().all(|c| self.spec.field.is_in_k(c))
    }

    pub fn is_idempotent(&self) -> bool {
        !self.is_zero() && &(self * self) == self
    }

    fn same_spec(&self, other: &Self) -> Result<()> {
        if Arc::ptr_eq(&self.spec, &other.spec) || self.spec == other.spec {
            Ok(())
        } else {
            Err(Error::SpecMismatch)
        }
    }

    pub fn checked_add(&self, other: &Self) -> Result<Self> {
        self.same_spec(other)?;
        Ok(self.zip(other, |x, y| x + y))
    }

    pub fn checked_sub(&self, other: &Self) -> Result<Self> {
        self.same_spec(other)?;
        Ok(self.zip(other, |x, y| x - y))
    }

    pub fn checked_mul(&self, other: &Self) -> Result<Self> {
        self.same_spec(other)?;
        Ok(self.mul_unchecked(other))
    }

    fn zip(&self, other: &Self, op: impl Fn(&Elem, &Elem) -> Elem) -> Self {
        AlgebraElement {
            spec: self.spec.clone(),
            coeffs: self
                .coeffs
                .iter()
                .zip(&other.coeffs)
                .map(|(x, y)| op(x, y))
                .collect(),
        }
    }

    fn mul_unchecked(&self, other: &Self) -> Self {
        let order = self.spec.order();
        let zero = self.spec.field.zero();
        let mut low = vec![zero.clone(); order];
        let mut high = vec![zero; order];
        for (i, x) in self.coeffs.iter().enumerate().filter(|(_, x)| !x.is_zero()) {
            for (j, y) in other
                .coeffs
                .iter()
                .enumerate()
                .filter(|(_, y)| !y.is_zero())
            {
                let p = x * y;
                let k = i + j;
                if k < order {
                    low[k] = &low[k] + &p;
                } else {
                    high[k - order] = &high[k - order] + &p;
                }
            }
        }
        let a = &self.spec.a;
        let coeffs = low
            .iter()
            .zip(&high)
            .map(|(l, h)| if h.is_zero() { l.clone() } else { l + &(a * h) })
            .collect();
        AlgebraElement {
            spec: self.spec.clone(),
            coeffs,
        }
    }

    /// Multiply every coefficient by an ambient scalar.
    pub fn scale(&self, c: &Elem) -> Self {
        AlgebraElement {
            spec: self.spec.clone(),
            coeffs: self.coeffs.iter().map(|x| x * c).collect(),
        }
    }

    pub fn pow(&self, mut e: u64) -> Self {
        let mut acc = Self::one(&self.spec);
        let mut base = self.clone();
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

    /// Positions of nonzero coefficients.
    pub fn support(&self) -> Vec<usize> {
        (0..self.coeffs.len())
            .filter(|&k| !self.coeffs[k].is_zero())
            .collect()
    }
}

impl Add for &AlgebraElement {
    type Output = AlgebraElement;
    fn add(self, rhs: &AlgebraElement) -> AlgebraElement {
        self.checked_add(rhs).expect("algebra spec mismatch")
    }
}

impl Sub for &AlgebraElement {
    type Output = AlgebraElement;
    fn sub(self, rhs: &AlgebraElement) -> AlgebraElement {
        self.checked_sub(rhs).expect("algebra spec mismatch")
    }
}

impl Mul for &AlgebraElement {
    type Output = AlgebraElement;
    fn mul(self, rhs: &AlgebraElement) -> AlgebraElement {
        self.checked_mul(rhs).expect("algebra spec mismatch")
    }
}

impl Neg for &AlgebraElement {
    type Output = AlgebraElement;
    fn neg(self) -> AlgebraElement {
        AlgebraElement {
            spec: self.spec.clone(),
            coeffs: self.coeffs.iter().map(|c| -c).collect(),
        }
    }
}

fn scalar_text(c: &Elem) -> (bool, String) {
    let s = c.to_string();
    if s.contains(' ') {
        (false, format!("({s})"))
    } else if let Some(rest) = s.strip_prefix('-') {
        (true, rest.to_string())
    } else {
        (false, s)
    }
}

/// Render Σ c_k·sym^k with exact coefficients, highest or lowest first.
fn render_terms(
    f: &mut fmt::Formatter<'_>,
    coeffs: &[Elem],
    sym: &str,
    descending: bool,
) -> fmt::Result {
    let mut order: Vec<usize> = (0..coeffs.len())
        .filter(|&k| !coeffs[k].is_zero())
        .collect();
    if descending {
        order.reverse();
    }
    if order.is_empty() {
        return write!(f, "0");
    }
    for (idx, &k) in order.iter().enumerate() {
        let (negative, mag) = scalar_text(&coeffs[k]);
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
        match (k, mag.as_str()) {
            (0, _) => write!(f, "{mag}")?,
            (_, "1") => write!(f, "{mono}")?,
            _ => write!(f, "{mag}{mono}")?,
        }
    }
    Ok(())
}

impl fmt::Display for AlgebraElement {
    /// Terms in increasing powers of ḡ, written `g`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        render_terms(f, &self.coeffs, "g", false)
    }
}

/// Monic polynomial with ambient coefficients, lowest degree first.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Poly {
    coeffs: Vec<Elem>,
}

impl Poly {
    pub fn new(coeffs: Vec<Elem>) -> Result<Self> {
        match coeffs.last() {
            Some(c) if c.is_one() => Ok(Poly { coeffs }),
            _ => Err(Error::Precondition("polynomial must be monic".into())),
        }
    }

    pub fn coeffs(&self) -> &[Elem] {
        &self.coeffs
    }

    pub fn degree(&self) -> usize {
        self.coeffs.len() - 1
    }

    /// x^d − c, when every middle coefficient vanishes.
    pub fn as_binomial(&self) -> Option<Binomial> {
        let d = self.degree();
        if d == 0 || !self.coeffs[1..d].iter().all(Elem::is_zero) {
            return None;
        }
        Some(Binomial {
            degree: d as u32,
            constant: -&self.coeffs[0],
        })
    }
}

impl fmt::Display for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        render_terms(f, &self.coeffs, "x", true)
    }
}

/// x^degree − constant.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Binomial {
    pub degree: u32,
    pub constant: Elem,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Over {
    FixedField,
    Ambient,
}

/// Irreducibility of x^(2^k) − c over K or over the ambient field.
pub fn binomial_irreducible(field: &FieldDescriptor, f: &Binomial, over: Over) -> Result<bool> {
    if f.degree == 0 || !f.degree.is_power_of_two() {
        return Err(Error::NotPowerOfTwo(f.degree));
    }
    let c = &f.constant;
    if over == Over::FixedField && !field.is_in_k(c) {
        return Err(Error::NotInFixedField(c.to_string()));
    }
    if f.degree == 1 {
        return Ok(true);
    }
    let target = match over {
        Over::FixedField => PowerTarget::FixedField,
        Over::Ambient => PowerTarget::Ambient,
    };
    if field.power_root(c, 1, target)?.is_some() {
        return Ok(false);
    }
    if f.degree >= 4 && over == Over::FixedField {
        let minus_four = field.from_i64(-4);
        if field
            .power_root(&c.checked_div(&minus_four)?, 2, target)?
            .is_some()
        {
            return Ok(false);
        }
    }
    Ok(true)
}

/// h = b^(-1) ḡ^(2^(n−s)), a generator of a cyclic group of order 2^s when
/// a = b^(2^s).
pub fn subalgebra_generator(spec: &Arc<AlgebraSpec>, s: u32, b: &Elem) -> Result<AlgebraElement> {
    if s > spec.n {
        return Err(Error::Precondition(format!(
            "s = {s} exceeds n = {}",
            spec.n
        )));
    }
    let h = AlgebraElement::g_power(spec, 1u64 << (spec.n - s)).scale(&b.inv()?);
    if !h.pow(1u64 << s).is_one() {
        return Err(Error::Precondition(format!(
            "h^(2^{s}) ≠ 1, so a ≠ b^(2^{s})"
        )));
    }
    if s > 0 && h.pow(1u64 << (s - 1)).is_one() {
        return Err(Error::Precondition(format!("h has order below 2^{s}")));
    }
    // h^j sits on the single monomial ḡ^(j·2^(n−s)) for j < 2^s.
    let step = 1usize << (spec.n - s);
    let mut power = AlgebraElement::one(spec);
    for j in 0..(1usize << s) {
        if power.support() != [j * step] {
            return Err(Error::Internal(format!("h^{j} has unexpected support")));
        }
        power = &power * &h;
    }
    Ok(h)
}

/// Incremental row reduction that records each stored row as a combination
/// of the vectors pushed so far.
struct DependenceFinder {
    rows: Vec<(usize, Vec<Elem>, Vec<Elem>)>,
    pushed: usize,
    field: FieldDescriptor,
}

impl DependenceFinder {
    fn new(field: FieldDescriptor) -> Self {
        DependenceFinder {
            rows: Vec::new(),
            pushed: 0,
            field,
        }
    }

    /// Push v_k. Returns c with v_k = Σ_{j<k} c_j v_j if v_k is dependent.
    fn push(&mut self, v: Vec<Elem>) -> Result<Option<Vec<Elem>>> {
        let k = self.pushed;
        self.pushed += 1;
        let zero = self.field.zero();
        let mut vec = v;
        // combo expresses `vec` in terms of v_0..v_k.
        let mut combo = vec![zero.clone(); k + 1];
        combo[k] = self.field.one();
        for (pivot, row, row_combo) in &self.rows {
            let factor = vec[*pivot].clone();
            if factor.is_zero() {
                continue;
            }
            for (x, r) in vec.iter_mut().zip(row) {
                if !r.is_zero() {
                    *x = &*x - &(&factor * r);
                }
            }
            for (x, r) in combo.iter_mut().zip(row_combo) {
                if !r.is_zero() {
                    *x = &*x - &(&factor * r);
                }
            }
        }
        match vec.iter().position(|x| !x.is_zero()) {
            None => {
                // combo · v = 0 with combo_k = 1.
                let c = combo[..k].iter().map(|x| -x).collect();
                Ok(Some(c))
            }
            Some(pivot) => {
                let inv = vec[pivot].inv()?;
                let vec: Vec<Elem> = vec.iter().map(|x| x * &inv).collect();
                let combo: Vec<Elem> = combo.iter().map(|x| x * &inv).collect();
                for (_, row, row_combo) in self.rows.iter_mut() {
                    let factor = row[pivot].clone();
                    if factor.is_zero() {
                        continue;
                    }
                    for (x, r) in row.iter_mut().zip(&vec) {
                        *x = &*x - &(&factor * r);
                    }
                    row_combo.resize(k + 1, zero.clone());
                    for (x, r) in row_combo.iter_mut().zip(&combo) {
                        *x = &*x - &(&factor * r);
                    }
                }
                for (_, _, row_combo) in self.rows.iter_mut() {
                    row_combo.resize(k + 1, zero.clone());
                }
                self.rows.push((pivot, vec, combo));
                Ok(None)
            }
        }
    }
}

/// Minimal polynomial of x·e over K inside the component e·A.
///
/// Stacks the coordinate vectors of e, xe, (xe)², … until the first linear
/// dependence, solved exactly over the ambient field. When x and e are
/// K-rational the dependence is K-rational too, which is asserted.
pub fn min_poly_in_component(e: &AlgebraElement, x: &AlgebraElement) -> Result<Poly> {
    e.same_spec(x)?;
    if !e.is_idempotent() {
        return Err(Error::NotIdempotent);
    }
    let field = e.spec.field;
    let xe = x * e;
    let mut finder = DependenceFinder::new(field);
    let mut power = e.clone();
    loop {
        if let Some(c) = finder.push(power.coeffs.clone())? {
            let mut coeffs: Vec<Elem> = c.iter().map(|x| -x).collect();
            coeffs.push(field.one());
            if e.is_k_rational() && x.is_k_rational() && !coeffs.iter().all(|c| field.is_in_k(c)) {
                return Err(Error::Internal(
                    "minimal polynomial is not K-rational".into(),
                ));
            }
            return Poly::new(coeffs);
        }
        power = &power * &xe;
    }
}

/// Dimension of e·A over K, read off as the degree of the minimal
/// polynomial of ḡe.
pub fn component_dim(e: &AlgebraElement) -> Result<usize> {
    let g = AlgebraElement::g_power(&e.spec, 1);
    Ok(min_poly_in_component(e, &g)?.degree())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::Involution;

    fn spec(field: FieldDescriptor, n: u32, a: i64) -> Arc<AlgebraSpec> {
        let a = field.from_i64(a);
        AlgebraSpec::new(field, n, a).unwrap()
    }

    fn elem(spec: &Arc<AlgebraSpec>, cs: &[i64]) -> AlgebraElement {
        let f = spec.field();
        AlgebraElement::from_coeffs(spec, cs.iter().map(|&c| f.from_i64(c)).collect()).unwrap()
    }

    #[test]
    fn defining_relation() {
        let s = spec(FieldDescriptor::rationals(), 2, 7);
        let g = AlgebraElement::g_power(&s, 1);
        let g3 = AlgebraElement::g_power(&s, 3);
        assert_eq!(&g3 * &g, AlgebraElement::scalar(&s, s.field().from_i64(7)));
        let x = elem(&s, &[1, 2, 3, 4]);
        assert_eq!(&x * &AlgebraElement::one(&s), x);
    }

    #[test]
    fn all_ones_over_f3() {
        let f3 = FieldDescriptor::finite(3, 2, Involution::Frobenius).unwrap();
        let s = spec(f3, 2, 1);
        let x = elem(&s, &[1, 1, 1, 1]);
        assert_eq!(&x * &x, x);
    }

    #[test]
    fn spec_validation() {
        let q = FieldDescriptor::rationals();
        assert_eq!(AlgebraSpec::new(q, 2, q.zero()), Err(Error::ZeroConstant));
        assert!(matches!(
            AlgebraSpec::new(q, 2, q.eps(2).unwrap()),
            Err(Error::NotInFixedField(_))
        ));
        assert!(matches!(
            AlgebraSpec::new(q, 17, q.one()),
            Err(Error::DegreeOutOfRange { .. })
        ));
    }

    #[test]
    fn binomial_examples() {
        let q = FieldDescriptor::rationals();
        let bin = |d, c| Binomial {
            degree: d,
            constant: q.from_i64(c),
        };
        assert!(binomial_irreducible(&q, &bin(4, 2), Over::FixedField).unwrap());
        assert!(!binomial_irreducible(&q, &bin(4, -4), Over::FixedField).unwrap());
        assert!(!binomial_irreducible(&q, &bin(2, 4), Over::FixedField).unwrap());
        assert!(binomial_irreducible(&q, &bin(2, -1), Over::FixedField).unwrap());
        assert!(!binomial_irreducible(&q, &bin(2, -1), Over::Ambient).unwrap());
        assert_eq!(
            binomial_irreducible(&q, &bin(3, 2), Over::FixedField),
            Err(Error::NotPowerOfTwo(3))
        );
    }

    #[test]
    fn generator_for_sixteen() {
        let s = spec(FieldDescriptor::rationals(), 2, 16);
        let h = subalgebra_generator(&s, 2, &s.field().from_i64(2)).unwrap();
        assert_eq!(h.support(), vec![1]);
        assert!(subalgebra_generator(&s, 2, &s.field().from_i64(3)).is_err());
        let trivial = subalgebra_generator(&s, 0, &s.field().from_i64(16)).unwrap();
        assert_eq!(trivial.support(), vec![0]);
    }

    #[test]
    fn min_poly_examples() {
        let s = spec(FieldDescriptor::rationals(), 2, 2);
        let one = AlgebraElement::one(&s);
        let g = AlgebraElement::g_power(&s, 1);
        let p = min_poly_in_component(&one, &g).unwrap();
        assert_eq!(p.to_string(), "x^4 - 2");
        assert_eq!(p.as_binomial().unwrap().constant, s.field().from_i64(2));

        let f3 = FieldDescriptor::finite(3, 2, Involution::Frobenius).unwrap();
        let s = AlgebraSpec::new(f3, 2, f3.one()).unwrap();
        let e0 = elem(&s, &[1, 1, 1, 1]);
        let p = min_poly_in_component(&e0, &AlgebraElement::g_power(&s, 1)).unwrap();
        assert_eq!(p.degree(), 1);
        assert_eq!(p.coeffs()[0], f3.from_i64(-1));

        let s = spec(FieldDescriptor::rationals(), 2, -4);
        let half = s.field().from_i64(2).inv().unwrap();
        let quarter = s.field().from_i64(4).inv().unwrap();
        let eighth = s.field().from_i64(8).inv().unwrap();
        let e0 = AlgebraElement::from_coeffs(&s, vec![half, quarter, s.field().zero(), -eighth])
            .unwrap();
        assert!(e0.is_idempotent());
        let p = min_poly_in_component(&e0, &AlgebraElement::g_power(&s, 1)).unwrap();
        assert_eq!(p.to_string(), "x^2 - 2x + 2");
        assert!(p.as_binomial().is_none());
        assert_eq!(component_dim(&e0).unwrap(), 2);
    }

    #[test]
    fn min_poly_rejects_non_idempotent() {
        let s = spec(FieldDescriptor::rationals(), 1, 3);
        let x = elem(&s, &[1, 1]);
        assert_eq!(min_poly_in_component(&x, &x), Err(Error::NotIdempotent));
    }
}
