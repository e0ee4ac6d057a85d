//! Raw coefficient kernels for Q(ζ) with ζ a primitive 2^L-th root of unity.
//!
//! An element of level L is a slice of 2^(L-1) rationals, the coordinates
//! over 1, ζ, …, ζ^(D-1) with ζ^D = -1. Level 1 is Q itself (ζ = -1).
//!
//! Inversion and square roots walk the quadratic tower
//! Q(ζ_L) = Q(ζ_{L-1})(θ), θ = ζ_L, θ² = ζ_{L-1}, splitting an element into
//! its even and odd coordinates: x = u + v·θ.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

pub(crate) type Rat = BigRational;

pub(crate) fn zero(d: usize) -> Vec<Rat> {
    vec![Rat::zero(); d]
}

pub(crate) fn is_zero(x: &[Rat]) -> bool {
    x.iter().all(Zero::is_zero)
}

pub(crate) fn add(x: &[Rat], y: &[Rat]) -> Vec<Rat> {
    x.iter().zip(y).map(|(a, b)| a + b).collect()
}

pub(crate) fn sub(x: &[Rat], y: &[Rat]) -> Vec<Rat> {
    x.iter().zip(y).map(|(a, b)| a - b).collect()
}

pub(crate) fn neg(x: &[Rat]) -> Vec<Rat> {
    x.iter().map(|a| -a).collect()
}

pub(crate) fn scale(x: &[Rat], c: &Rat) -> Vec<Rat> {
    x.iter().map(|a| a * c).collect()
}

/// Negacyclic convolution modulo x^D + 1.
pub(crate) fn mul(x: &[Rat], y: &[Rat]) -> Vec<Rat> {
    let d = x.len();
    let mut out = zero(d);
    for (i, xi) in x.iter().enumerate() {
        if xi.is_zero() {
            continue;
        }
        for (j, yj) in y.iter().enumerate() {
            if yj.is_zero() {
                continue;
            }
            let p = xi * yj;
            let k = i + j;
            if k < d {
                out[k] += p;
            } else {
                out[k - d] -= p;
            }
        }
    }
    out
}

/// ζ^k as a coordinate vector of length `d`.
pub(crate) fn zeta_pow(d: usize, k: i64) -> Vec<Rat> {
    let period = 2 * d as i64;
    let k = k.rem_euclid(period) as usize;
    let mut out = zero(d);
    if k < d {
        out[k] = Rat::one();
    } else {
        out[k - d] = -Rat::one();
    }
    out
}

fn split(x: &[Rat]) -> (Vec<Rat>, Vec<Rat>) {
    let u = x.iter().step_by(2).cloned().collect();
    let v = x.iter().skip(1).step_by(2).cloned().collect();
    (u, v)
}

fn join(u: &[Rat], v: &[Rat]) -> Vec<Rat> {
    let mut out = Vec::with_capacity(2 * u.len());
    for (a, b) in u.iter().zip(v) {
        out.push(a.clone());
        out.push(b.clone());
    }
    out
}

/// Multiply a lower-level element by θ² = ζ_{L-1}.
fn times_theta_sq(x: &[Rat]) -> Vec<Rat> {
    let d = x.len();
    if d == 1 {
        return neg(x);
    }
    let mut out = zero(d);
    out[0] = -x[d - 1].clone();
    out[1..d].clone_from_slice(&x[..(d - 1)]);
    out
}

/// Relative norm u² − θ²v² of x = u + vθ down one tower level.
fn relative_norm(u: &[Rat], v: &[Rat]) -> Vec<Rat> {
    sub(&mul(u, u), &times_theta_sq(&mul(v, v)))
}

pub(crate) fn inv(x: &[Rat]) -> Option<Vec<Rat>> {
    if is_zero(x) {
        return None;
    }
    if x.len() == 1 {
        return Some(vec![x[0].recip()]);
    }
    let (u, v) = split(x);
    let n_inv = inv(&relative_norm(&u, &v))?;
    Some(join(&mul(&u, &n_inv), &neg(&mul(&v, &n_inv))))
}

fn exact_isqrt(n: &BigInt) -> Option<BigInt> {
    if n.is_negative() {
        return None;
    }
    let r = n.sqrt();
    (&r * &r == *n).then_some(r)
}

fn rational_sqrt(x: &Rat) -> Option<Rat> {
    // BigRational is always kept reduced with a positive denominator.
    let num = exact_isqrt(x.numer())?;
    let den = exact_isqrt(x.denom())?;
    Some(Rat::new(num, den))
}

/// Pick the lexicographically least of ±β.
pub(crate) fn canonical_sign(beta: Vec<Rat>) -> Vec<Rat> {
    let minus = neg(&beta);
    if minus < beta {
        minus
    } else {
        beta
    }
}

/// Square root in Q(ζ), or `None` if `x` is not a square.
pub(crate) fn sqrt(x: &[Rat]) -> Option<Vec<Rat>> {
    if is_zero(x) {
        return Some(x.to_vec());
    }
    if x.len() == 1 {
        return rational_sqrt(&x[0]).map(|r| canonical_sign(vec![r]));
    }
    let (u, v) = split(x);
    let norm_root = sqrt(&relative_norm(&u, &v))?;
    let half = Rat::new(BigInt::one(), BigInt::from(2));
    for r in [norm_root.clone(), neg(&norm_root)] {
        // If x = (p + qθ)², then p² = (u ± √n)/2 for the matching sign.
        let w = scale(&add(&u, &r), &half);
        if is_zero(&w) {
            // p = 0: x = q²θ², so v = 0 and q² = u/θ².
            if !is_zero(&v) {
                continue;
            }
            let theta_sq_inv = inv(&times_theta_sq(&unit(u.len())))?;
            if let Some(q) = sqrt(&mul(&u, &theta_sq_inv)) {
                let beta = join(&zero(u.len()), &q);
                debug_assert_eq!(mul(&beta, &beta), x);
                return Some(canonical_sign(beta));
            }
            continue;
        }
        if let Some(p) = sqrt(&w) {
            let two_p_inv = inv(&scale(&p, &Rat::from_integer(BigInt::from(2))))?;
            let q = mul(&v, &two_p_inv);
            let beta = join(&p, &q);
            debug_assert_eq!(mul(&beta, &beta), x);
            return Some(canonical_sign(beta));
        }
    }
    None
}

fn unit(d: usize) -> Vec<Rat> {
    let mut out = zero(d);
    out[0] = Rat::one();
    out
}

/// ζ ↦ ζ^(-1).
pub(crate) fn inverse_conj(x: &[Rat]) -> Vec<Rat> {
    let d = x.len();
    let mut out = zero(d);
    out[0] = x[0].clone();
    for k in 1..d {
        out[d - k] = -x[k].clone();
    }
    out
}

/// ζ ↦ −ζ^(-1).
pub(crate) fn negated_inverse_conj(x: &[Rat]) -> Vec<Rat> {
    let d = x.len();
    let mut out = zero(d);
    out[0] = x[0].clone();
    for k in 1..d {
        out[d - k] = if k % 2 == 0 {
            -x[k].clone()
        } else {
            x[k].clone()
        };
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn r(n: i64) -> Rat {
        Rat::from_integer(BigInt::from(n))
    }

    fn v(xs: &[i64]) -> Vec<Rat> {
        xs.iter().map(|&n| r(n)).collect()
    }

    #[test]
    fn gaussian_norm_identity() {
        assert_eq!(mul(&v(&[1, 1]), &v(&[1, -1])), v(&[2, 0]));
    }

    #[test]
    fn zeta8_times_zeta8_inverse() {
        let z = zeta_pow(4, 1);
        let z7 = zeta_pow(4, 7);
        assert_eq!(mul(&z, &z7), v(&[1, 0, 0, 0]));
    }

    #[test]
    fn inverse_round_trip_in_q_zeta16() {
        let x = v(&[3, -1, 0, 2, 5, 0, 0, 1]);
        let y = inv(&x).unwrap();
        assert_eq!(mul(&x, &y), unit(8));
    }

    #[test]
    fn sqrt_of_2i_and_2() {
        let root = sqrt(&v(&[0, 2])).unwrap();
        assert_eq!(mul(&root, &root), v(&[0, 2]));
        assert_eq!(root, v(&[-1, -1]));
        assert!(sqrt(&v(&[2, 0])).is_none());
    }

    #[test]
    fn sqrt2_lives_in_q_zeta8() {
        // √2 = ζ + ζ^(-1) = ζ − ζ³
        let root = sqrt(&v(&[2, 0, 0, 0])).unwrap();
        assert_eq!(mul(&root, &root), v(&[2, 0, 0, 0]));
        assert!(sqrt(&v(&[3, 0, 0, 0])).is_none());
    }

    #[test]
    fn sqrt_of_pure_theta_multiple() {
        // i = ζ8² has square root ±ζ8, reached through the p = 0 branch.
        let root = sqrt(&v(&[0, 0, 1, 0])).unwrap();
        assert_eq!(mul(&root, &root), v(&[0, 0, 1, 0]));
    }

    #[test]
    fn rational_base_case() {
        assert_eq!(
            rational_sqrt(&Rat::new(BigInt::from(9), BigInt::from(4))),
            Some(Rat::new(BigInt::from(3), BigInt::from(2)))
        );
        assert_eq!(rational_sqrt(&r(-4)), None);
        assert_eq!(
            rational_sqrt(&Rat::new(BigInt::from(2), BigInt::from(9))),
            None
        );
    }
}
