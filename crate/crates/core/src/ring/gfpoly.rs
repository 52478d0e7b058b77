//! Dense univariate polynomials over a small prime field GF(p).
//!
//! Coefficients are stored low degree first as `u8` values in `[0, p)` and
//! kept trimmed (no trailing zeros; the zero polynomial is empty).

pub type GfPoly = Vec<u8>;

pub fn trim(mut a: GfPoly) -> GfPoly {
    while a.last() == Some(&0) {
        a.pop();
    }
    a
}

pub fn degree(a: &[u8]) -> Option<usize> {
    a.iter().rposition(|&c| c != 0)
}

fn inv_mod(a: u8, p: u8) -> u8 {
    debug_assert!(a % p != 0);
    (1..p).find(|&b| (a as u16 * b as u16) % p as u16 == 1).expect("p prime")
}

pub fn add(a: &[u8], b: &[u8], p: u8) -> GfPoly {
    let len = a.len().max(b.len());
    let out = (0..len)
        .map(|i| {
            let x = a.get(i).copied().unwrap_or(0) as u16;
            let y = b.get(i).copied().unwrap_or(0) as u16;
            ((x + y) % p as u16) as u8
        })
        .collect();
    trim(out)
}

pub fn sub(a: &[u8], b: &[u8], p: u8) -> GfPoly {
    let len = a.len().max(b.len());
    let out = (0..len)
        .map(|i| {
            let x = a.get(i).copied().unwrap_or(0) as u16;
            let y = b.get(i).copied().unwrap_or(0) as u16;
            ((x + p as u16 - y) % p as u16) as u8
        })
        .collect();
    trim(out)
}

pub fn mul(a: &[u8], b: &[u8], p: u8) -> GfPoly {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut acc = vec![0u32; a.len() + b.len() - 1];
    for (i, &x) in a.iter().enumerate() {
        if x == 0 {
            continue;
        }
        for (j, &y) in b.iter().enumerate() {
            acc[i + j] += x as u32 * y as u32;
        }
    }
    trim(acc.into_iter().map(|c| (c % p as u32) as u8).collect())
}

/// Quotient and remainder of `a` by nonzero `b`.
pub fn divrem(a: &[u8], b: &[u8], p: u8) -> (GfPoly, GfPoly) {
    let db = degree(b).expect("division by the zero polynomial");
    let lead_inv = inv_mod(b[db], p) as u16;
    let mut r: Vec<u8> = trim(a.to_vec());
    let mut q = vec![0u8; r.len().saturating_sub(db)];
    while let Some(dr) = degree(&r) {
        if dr < db {
            break;
        }
        let shift = dr - db;
        let c = ((r[dr] as u16 * lead_inv) % p as u16) as u8;
        q[shift] = c;
        for (i, &bc) in b.iter().enumerate().take(db + 1) {
            let sub = (c as u16 * bc as u16) % p as u16;
            r[i + shift] = ((r[i + shift] as u16 + p as u16 - sub) % p as u16) as u8;
        }
        r = trim(r);
    }
    (trim(q), r)
}

pub fn rem(a: &[u8], b: &[u8], p: u8) -> GfPoly {
    divrem(a, b, p).1
}

/// Monic greatest common divisor.
pub fn gcd(a: &[u8], b: &[u8], p: u8) -> GfPoly {
    let mut x = trim(a.to_vec());
    let mut y = trim(b.to_vec());
    while !y.is_empty() {
        let r = rem(&x, &y, p);
        x = y;
        y = r;
    }
    make_monic(x, p)
}

pub fn make_monic(a: GfPoly, p: u8) -> GfPoly {
    match degree(&a) {
        None => a,
        Some(d) => {
            let inv = inv_mod(a[d], p) as u16;
            a.into_iter().map(|c| ((c as u16 * inv) % p as u16) as u8).collect()
        }
    }
}

pub fn mulmod(a: &[u8], b: &[u8], m: &[u8], p: u8) -> GfPoly {
    rem(&mul(a, b, p), m, p)
}

/// `a^e mod m` by square-and-multiply.
pub fn powmod(a: &[u8], mut e: u64, m: &[u8], p: u8) -> GfPoly {
    let mut base = rem(a, m, p);
    let mut acc: GfPoly = rem(&[1], m, p);
    while e > 0 {
        if e & 1 == 1 {
            acc = mulmod(&acc, &base, m, p);
        }
        base = mulmod(&base, &base, m, p);
        e >>= 1;
    }
    acc
}

/// `x^(p^k) mod f`, computed as `k` successive p-th powers starting from `x`.
pub fn frobenius_power_of_x(k: usize, f: &[u8], p: u8) -> GfPoly {
    let mut h = rem(&[0, 1], f, p);
    for _ in 0..k {
        h = powmod(&h, p as u64, f, p);
    }
    h
}

fn prime_divisors(mut n: usize) -> Vec<usize> {
    let mut out = Vec::new();
    let mut d = 2;
    while d * d <= n {
        if n % d == 0 {
            out.push(d);
            while n % d == 0 {
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

/// Rabin's irreducibility test for a polynomial of degree `n ≥ 1`:
/// `gcd(x^(p^(n/ℓ)) − x, f) = 1` for every prime `ℓ | n`, and
/// `x^(p^n) ≡ x (mod f)`.
pub fn is_irreducible(f: &[u8], p: u8) -> bool {
    let Some(n) = degree(f) else {
        return false;
    };
    if n == 0 {
        return false;
    }
    let x: GfPoly = vec![0, 1];
    for l in prime_divisors(n) {
        let h = frobenius_power_of_x(n / l, f, p);
        let g = gcd(&sub(&h, &x, p), f, p);
        if g != [1] {
            return false;
        }
    }
    let h = frobenius_power_of_x(n, f, p);
    sub(&h, &rem(&x, f, p), p).is_empty()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn quadratics_over_gf2() {
        assert!(is_irreducible(&[1, 1, 1], 2));
        // x² + 1 = (x + 1)²
        assert!(!is_irreducible(&[1, 0, 1], 2));
        assert!(!is_irreducible(&[0, 1, 1], 2));
    }

    #[test]
    fn divrem_reconstructs() {
        let a = vec![3, 0, 2, 4, 1];
        let b = vec![2, 1, 3];
        let (q, r) = divrem(&a, &b, 5);
        assert_eq!(add(&mul(&q, &b, 5), &r, 5), trim(a));
        assert!(degree(&r).map_or(true, |d| d < 2));
    }

    #[test]
    fn known_irreducibles() {
        // AES polynomial x^8 + x^4 + x^3 + x + 1.
        assert!(is_irreducible(&[1, 1, 0, 1, 1, 0, 0, 0, 1], 2));
        // x^8 + 1 = (x + 1)^8 over GF(2).
        assert!(!is_irreducible(&[1, 0, 0, 0, 0, 0, 0, 0, 1], 2));
        // x² + 1 over GF(3) is irreducible (−1 is not a square mod 3).
        assert!(is_irreducible(&[1, 0, 1], 3));
        // x² + 1 over GF(5) splits (2² = −1).
        assert!(!is_irreducible(&[1, 0, 1], 5));
    }
}
