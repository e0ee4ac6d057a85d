//! Residue kernels for F_q (one coordinate) and F_q[i] = F_{q²} with i² = −1
//! (two coordinates, q ≡ 3 mod 4).

pub(crate) fn reduce(x: i128, q: u64) -> u64 {
    x.rem_euclid(q as i128) as u64
}

fn mulmod(a: u64, b: u64, q: u64) -> u64 {
    ((a as u128 * b as u128) % q as u128) as u64
}

pub(crate) fn add(x: &[u64], y: &[u64], q: u64) -> Vec<u64> {
    x.iter().zip(y).map(|(a, b)| (a + b) % q).collect()
}

pub(crate) fn sub(x: &[u64], y: &[u64], q: u64) -> Vec<u64> {
    x.iter().zip(y).map(|(a, b)| (a + q - b) % q).collect()
}

pub(crate) fn neg(x: &[u64], q: u64) -> Vec<u64> {
    x.iter().map(|a| (q - a) % q).collect()
}

pub(crate) fn mul(x: &[u64], y: &[u64], q: u64) -> Vec<u64> {
    match x.len() {
        1 => vec![mulmod(x[0], y[0], q)],
        2 => {
            let (a, b, c, d) = (x[0], x[1], y[0], y[1]);
            let re = (mulmod(a, c, q) + q - mulmod(b, d, q)) % q;
            let im = (mulmod(a, d, q) + mulmod(b, c, q)) % q;
            vec![re, im]
        }
        n => unreachable!("finite ambient of degree {n}"),
    }
}

pub(crate) fn is_zero(x: &[u64]) -> bool {
    x.iter().all(|&c| c == 0)
}

pub(crate) fn one(d: usize) -> Vec<u64> {
    let mut out = vec![0; d];
    out[0] = 1;
    out
}

pub(crate) fn pow(x: &[u64], mut e: u128, q: u64) -> Vec<u64> {
    let mut base = x.to_vec();
    let mut acc = one(x.len());
    while e > 0 {
        if e & 1 == 1 {
            acc = mul(&acc, &base, q);
        }
        base = mul(&base, &base, q);
        e >>= 1;
    }
    acc
}

fn scalar_inv(a: u64, q: u64) -> u64 {
    // q is prime: a^(q-2).
    pow(&[a], q as u128 - 2, q)[0]
}

pub(crate) fn inv(x: &[u64], q: u64) -> Option<Vec<u64>> {
    if is_zero(x) {
        return None;
    }
    match x.len() {
        1 => Some(vec![scalar_inv(x[0], q)]),
        2 => {
            // (a + bi)^(-1) = (a − bi)/(a² + b²)
            let n = (mulmod(x[0], x[0], q) + mulmod(x[1], x[1], q)) % q;
            let n_inv = scalar_inv(n, q);
            Some(vec![
                mulmod(x[0], n_inv, q),
                mulmod((q - x[1]) % q, n_inv, q),
            ])
        }
        n => unreachable!("finite ambient of degree {n}"),
    }
}

/// x ↦ x^q on F_q[i]: a + bi ↦ a − bi.
pub(crate) fn frobenius(x: &[u64], q: u64) -> Vec<u64> {
    match x.len() {
        1 => x.to_vec(),
        _ => vec![x[0], (q - x[1]) % q],
    }
}

pub(crate) fn order(q: u64, d: usize) -> u128 {
    (q as u128).pow(d as u32)
}

pub(crate) fn two_adic(mut x: u128) -> (u32, u128) {
    let mut w = 0;
    while x.is_multiple_of(2) {
        x /= 2;
        w += 1;
    }
    (w, x)
}

/// Elements of F_{q^d} in coordinate order: c0 varies slowest.
pub(crate) fn enumerate(q: u64, d: usize) -> impl Iterator<Item = Vec<u64>> {
    let total = order(q, d) as u64;
    (0..total).map(move |k| match d {
        1 => vec![k],
        _ => vec![k / q, k % q],
    })
}

/// The least non-square of F_{q^d}* in coordinate order.
pub(crate) fn least_non_square(q: u64, d: usize) -> Vec<u64> {
    let half = (order(q, d) - 1) / 2;
    let one = one(d);
    enumerate(q, d)
        .filter(|u| !is_zero(u))
        .find(|u| pow(u, half, q) != one)
        .expect("odd-order field has non-squares")
}

/// Tonelli–Shanks. `gen2` must generate the Sylow 2-subgroup of F_{q^d}*.
pub(crate) fn sqrt(x: &[u64], q: u64, gen2: &[u64]) -> Option<Vec<u64>> {
    if is_zero(x) {
        return Some(x.to_vec());
    }
    let d = x.len();
    let group = order(q, d) - 1;
    let one = one(d);
    if pow(x, group / 2, q) != one {
        return None;
    }
    let (w, odd) = two_adic(group);
    let mut m = w;
    let mut c = gen2.to_vec();
    let mut t = pow(x, odd, q);
    let mut r = pow(x, odd.div_ceil(2), q);
    while t != one {
        let mut i = 0;
        let mut probe = t.clone();
        while probe != one {
            probe = mul(&probe, &probe, q);
            i += 1;
        }
        let b = pow(&c, 1u128 << (m - i - 1), q);
        r = mul(&r, &b, q);
        c = mul(&b, &b, q);
        t = mul(&t, &c, q);
        m = i;
    }
    Some(r)
}
