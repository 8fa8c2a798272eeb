//! Dense univariate polynomials over a prime field, stored low degree first.
//!
//! Used to build and test the defining polynomials of extension fields.
//! Every function returns trimmed vectors (no trailing zero coefficients);
//! the zero polynomial is the empty vector.

pub(crate) fn mul_mod(a: u64, b: u64, p: u64) -> u64 {
    ((a as u128 * b as u128) % p as u128) as u64
}

pub(crate) fn add_mod(a: u64, b: u64, p: u64) -> u64 {
    ((a as u128 + b as u128) % p as u128) as u64
}

pub(crate) fn sub_mod(a: u64, b: u64, p: u64) -> u64 {
    add_mod(a, p - b, p)
}

pub(crate) fn inv_mod(a: u64, p: u64) -> Option<u64> {
    if a == 0 {
        return None;
    }
    // p is prime, so a^(p-2) is the inverse.
    let mut result = 1u64;
    let mut base = a % p;
    let mut e = p - 2;
    while e > 0 {
        if e & 1 == 1 {
            result = mul_mod(result, base, p);
        }
        base = mul_mod(base, base, p);
        e >>= 1;
    }
    Some(result)
}

pub fn trim(mut f: Vec<u64>) -> Vec<u64> {
    while f.last() == Some(&0) {
        f.pop();
    }
    f
}

/// Degree of `f`, or `None` for the zero polynomial.
pub fn degree(f: &[u64]) -> Option<usize> {
    f.iter().rposition(|&c| c != 0)
}

pub fn add(f: &[u64], g: &[u64], p: u64) -> Vec<u64> {
    let n = f.len().max(g.len());
    let out = (0..n)
        .map(|i| add_mod(*f.get(i).unwrap_or(&0), *g.get(i).unwrap_or(&0), p))
        .collect();
    trim(out)
}

pub fn sub(f: &[u64], g: &[u64], p: u64) -> Vec<u64> {
    let n = f.len().max(g.len());
    let out = (0..n)
        .map(|i| sub_mod(*f.get(i).unwrap_or(&0), *g.get(i).unwrap_or(&0), p))
        .collect();
    trim(out)
}

pub fn mul(f: &[u64], g: &[u64], p: u64) -> Vec<u64> {
    if f.is_empty() || g.is_empty() {
        return Vec::new();
    }
    let mut out = vec![0u64; f.len() + g.len() - 1];
    for (i, &a) in f.iter().enumerate() {
        if a == 0 {
            continue;
        }
        for (j, &b) in g.iter().enumerate() {
            out[i + j] = add_mod(out[i + j], mul_mod(a, b, p), p);
        }
    }
    trim(out)
}

/// Quotient and remainder of `f` by a nonzero `g`.
pub fn div_rem(f: &[u64], g: &[u64], p: u64) -> (Vec<u64>, Vec<u64>) {
    let dg = degree(g).expect("division by the zero polynomial");
    let lead_inv = inv_mod(g[dg], p).expect("leading coefficient is nonzero");
    let mut rem = trim(f.to_vec());
    let mut quot = vec![0u64; rem.len().saturating_sub(dg).max(1)];
    while let Some(dr) = degree(&rem) {
        if dr < dg {
            break;
        }
        let shift = dr - dg;
        let c = mul_mod(rem[dr], lead_inv, p);
        quot[shift] = c;
        for (i, &gc) in g[..=dg].iter().enumerate() {
            rem[shift + i] = sub_mod(rem[shift + i], mul_mod(c, gc, p), p);
        }
        rem = trim(rem);
    }
    (trim(quot), rem)
}

pub fn rem(f: &[u64], g: &[u64], p: u64) -> Vec<u64> {
    div_rem(f, g, p).1
}

/// Monic greatest common divisor.
pub fn gcd(f: &[u64], g: &[u64], p: u64) -> Vec<u64> {
    let mut a = trim(f.to_vec());
    let mut b = trim(g.to_vec());
    while !b.is_empty() {
        let r = rem(&a, &b, p);
        a = b;
        b = r;
    }
    make_monic(a, p)
}

pub fn make_monic(f: Vec<u64>, p: u64) -> Vec<u64> {
    match f.last() {
        None => f,
        Some(&lead) => {
            let inv = inv_mod(lead, p).expect("nonzero leading coefficient");
            f.into_iter().map(|c| mul_mod(c, inv, p)).collect()
        }
    }
}

/// `base^exp mod modulus`.
pub fn pow_mod(base: &[u64], mut exp: u64, modulus: &[u64], p: u64) -> Vec<u64> {
    let mut result = rem(&[1], modulus, p);
    let mut b = rem(base, modulus, p);
    while exp > 0 {
        if exp & 1 == 1 {
            result = rem(&mul(&result, &b, p), modulus, p);
        }
        b = rem(&mul(&b, &b, p), modulus, p);
        exp >>= 1;
    }
    result
}

/// Ben-Or irreducibility test: a polynomial of degree n is irreducible iff
/// it shares no factor with `x^(p^k) - x` for every `k <= n/2`.
pub fn is_irreducible(f: &[u64], p: u64) -> bool {
    let Some(n) = degree(f) else {
        return false;
    };
    if n == 0 {
        return false;
    }
    let f = &f[..=n];
    let x = vec![0, 1];
    let mut h = rem(&x, f, p);
    for _ in 0..n / 2 {
        h = pow_mod(&h, p, f, p);
        let g = gcd(f, &sub(&h, &x, p), p);
        if g.len() != 1 {
            return false;
        }
    }
    true
}

/// The lexicographically least monic irreducible polynomial of degree `n`,
/// scanning `(c_{n-1}, ..., c_0)` in ascending numeric order.
pub fn least_irreducible(p: u64, n: usize) -> Vec<u64> {
    assert!(n >= 1);
    // digits[k] holds c_{n-1-k}; digits[n-1] is the least significant one.
    let mut digits = vec![0u64; n];
    loop {
        let mut f: Vec<u64> = digits.iter().rev().copied().collect();
        f.push(1);
        if is_irreducible(&f, p) {
            return f;
        }
        let mut pos = n;
        loop {
            // Irreducibles of every degree exist, so the counter never wraps.
            pos -= 1;
            digits[pos] += 1;
            if digits[pos] < p {
                break;
            }
            digits[pos] = 0;
        }
    }
}
