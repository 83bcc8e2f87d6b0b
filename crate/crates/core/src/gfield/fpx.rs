//! Dense univariate polynomials over F_p, only as much as the modulus search
//! needs. Coefficient vectors are little-endian and kept trimmed.

use super::linalg::inv_mod;

pub(crate) fn trim(v: &mut Vec<u32>) {
    while v.last() == Some(&0) {
        v.pop();
    }
}

pub(crate) fn sub(a: &[u32], b: &[u32], p: u32) -> Vec<u32> {
    let n = a.len().max(b.len());
    let mut out: Vec<u32> = (0..n)
        .map(|i| {
            let x = a.get(i).copied().unwrap_or(0);
            let y = b.get(i).copied().unwrap_or(0);
            (x + p - y) % p
        })
        .collect();
    trim(&mut out);
    out
}

/// Remainder of `a` modulo a nonzero `m`.
pub(crate) fn rem(a: &[u32], m: &[u32], p: u32) -> Vec<u32> {
    let mut r = a.to_vec();
    trim(&mut r);
    let dm = m.len() - 1;
    let lead_inv = inv_mod(m[dm], p);
    while r.len() > dm {
        let top = r.len() - 1;
        let f = r[top] as u64 * lead_inv as u64 % p as u64;
        let shift = top - dm;
        for (i, &c) in m.iter().enumerate() {
            let cur = r[shift + i] as u64;
            r[shift + i] = ((cur + (p as u64 - f) * c as u64) % p as u64) as u32;
        }
        trim(&mut r);
    }
    r
}

pub(crate) fn mul_mod(a: &[u32], b: &[u32], m: &[u32], p: u32) -> Vec<u32> {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut prod = vec![0u64; a.len() + b.len() - 1];
    for (i, &x) in a.iter().enumerate() {
        if x == 0 {
            continue;
        }
        for (j, &y) in b.iter().enumerate() {
            prod[i + j] = (prod[i + j] + x as u64 * y as u64) % p as u64;
        }
    }
    let prod: Vec<u32> = prod.into_iter().map(|v| v as u32).collect();
    rem(&prod, m, p)
}

/// `a^p mod m`.
pub(crate) fn pow_p_mod(a: &[u32], m: &[u32], p: u32) -> Vec<u32> {
    let mut result = vec![1u32];
    let mut base = rem(a, m, p);
    let mut e = p;
    while e > 0 {
        if e & 1 == 1 {
            result = mul_mod(&result, &base, m, p);
        }
        base = mul_mod(&base, &base, m, p);
        e >>= 1;
    }
    result
}

pub(crate) fn gcd(a: &[u32], b: &[u32], p: u32) -> Vec<u32> {
    let mut x = a.to_vec();
    let mut y = b.to_vec();
    trim(&mut x);
    trim(&mut y);
    while !y.is_empty() {
        let r = rem(&x, &y, p);
        x = y;
        y = r;
    }
    x
}

pub(crate) fn prime_factors(mut n: u128) -> Vec<u128> {
    let mut out = Vec::new();
    let mut d = 2u128;
    while d * d <= n {
        if n.is_multiple_of(d) {
            out.push(d);
            while n.is_multiple_of(d) {
                n /= d;
            }
        }
        d += 1;
    }
    if n > 1 {
        out.push(n);
    }
    out
}

/// Rabin's irreducibility test for a monic `f` of degree `n` over F_p:
/// `X^{p^n} ≡ X (mod f)` and `gcd(X^{p^{n/r}} - X, f) = 1` for every prime
/// `r | n`.
pub(crate) fn is_irreducible(f: &[u32], p: u32) -> bool {
    let n = f.len() - 1;
    if n == 0 {
        return false;
    }
    if n == 1 {
        return true;
    }
    // frob[k] = X^{p^k} mod f
    let x = vec![0u32, 1];
    let mut powers = vec![rem(&x, f, p)];
    for k in 1..=n {
        let next = pow_p_mod(&powers[k - 1], f, p);
        powers.push(next);
    }
    if !sub(&powers[n], &x, p).is_empty() {
        return false;
    }
    for r in prime_factors(n as u128) {
        let k = n / r as usize;
        let g = gcd(f, &sub(&powers[k], &x, p), p);
        if g.len() > 1 {
            return false;
        }
    }
    true
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_irreducibles_over_f2() {
        // x^2+x+1, x^3+x+1, x^4+x+1 irreducible; x^4+1, x^4+x^2+1 not
        assert!(is_irreducible(&[1, 1, 1], 2));
        assert!(is_irreducible(&[1, 1, 0, 1], 2));
        assert!(is_irreducible(&[1, 1, 0, 0, 1], 2));
        assert!(!is_irreducible(&[1, 0, 0, 0, 1], 2));
        assert!(!is_irreducible(&[1, 0, 1, 0, 1], 2));
        // (x^2+x+1)(x^3+x+1) = x^5+x^4+1 has no roots yet is reducible
        assert!(!is_irreducible(&[1, 0, 0, 0, 1, 1], 2));
    }

    #[test]
    fn factors() {
        assert_eq!(prime_factors(80), vec![2, 5]);
        assert_eq!(prime_factors(4095), vec![3, 5, 7, 13]);
        assert_eq!(prime_factors(1), Vec::<u128>::new());
    }
}
