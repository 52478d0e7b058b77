use std::fmt;
use std::sync::Arc;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::gfpoly::{self, GfPoly};
use super::{Field, Ring};
use crate::error::{Error, Result};

/// Largest supported extension degree.
pub const MAX_EXT_DEGREE: usize = 64;

/// GF(p^n) presented as GF(p)[x] / (f) for a monic irreducible `f`.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct ExtensionField {
    p: u8,
    degree: usize,
    /// Monic modulus, low degree first, length `degree + 1`.
    modulus: GfPoly,
}

impl fmt::Debug for ExtensionField {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "GF({}^{}) mod {:?}", self.p, self.degree, self.modulus)
    }
}

impl ExtensionField {
    /// Wrap a modulus after checking that it is monic and irreducible.
    pub fn new(p: u8, modulus: GfPoly) -> Result<Self> {
        if !matches!(p, 2 | 3 | 5 | 7) {
            return Err(Error::Parameter(format!("unsupported base prime {p}")));
        }
        if modulus.iter().any(|&c| c >= p) {
            return Err(Error::Parameter("modulus coefficient out of range".into()));
        }
        let modulus = gfpoly::trim(modulus);
        let degree = match gfpoly::degree(&modulus) {
            Some(d) if d >= 1 => d,
            _ => return Err(Error::Parameter("modulus must have degree ≥ 1".into())),
        };
        if degree > MAX_EXT_DEGREE {
            return Err(Error::Parameter(format!("extension degree {degree} exceeds {MAX_EXT_DEGREE}")));
        }
        if modulus[degree] != 1 {
            return Err(Error::Parameter("modulus must be monic".into()));
        }
        if !gfpoly::is_irreducible(&modulus, p) {
            return Err(Error::Parameter("modulus is reducible".into()));
        }
        Ok(ExtensionField { p, degree, modulus })
    }

    pub fn characteristic(&self) -> u8 {
        self.p
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn modulus(&self) -> &[u8] {
        &self.modulus
    }

    /// `p^n` as a float (only used for reporting bounds).
    pub fn order_f64(&self) -> f64 {
        (self.p as f64).powi(self.degree as i32)
    }

    /// The modulus as one line of decimal coefficients, low degree first.
    pub fn modulus_line(&self) -> String {
        self.modulus.iter().map(|c| c.to_string()).collect::<Vec<_>>().join(" ")
    }

    pub fn parse_modulus_line(p: u8, line: &str) -> Result<Self> {
        let coeffs = line
            .split_whitespace()
            .map(|t| t.parse::<u8>().map_err(|_| Error::Parse(format!("bad modulus coefficient `{t}`"))))
            .collect::<Result<Vec<_>>>()?;
        Self::new(p, coeffs)
    }
}

/// Find a monic irreducible polynomial of degree `n` over GF(p) by seeded
/// random sampling and Rabin's test. Gives up after `64·n` candidates.
pub fn construct_extension_field(p: u8, n: usize, seed: u64) -> Result<Arc<ExtensionField>> {
    if !matches!(p, 2 | 3 | 5 | 7) {
        return Err(Error::Parameter(format!("unsupported base prime {p}")));
    }
    if n == 0 || n > MAX_EXT_DEGREE {
        return Err(Error::Parameter(format!("extension degree must be in 1..={MAX_EXT_DEGREE}")));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for _ in 0..64 * n {
        let mut f: GfPoly = (0..n).map(|_| rng.random_range(0..p)).collect();
        f.push(1);
        if gfpoly::is_irreducible(&f, p) {
            return Ok(Arc::new(ExtensionField { p, degree: n, modulus: f }));
        }
    }
    Err(Error::Exhausted(format!(
        "no irreducible polynomial of degree {n} over GF({p}) found in {} candidates",
        64 * n
    )))
}

/// An element of an [`ExtensionField`], a polynomial of degree < n.
#[derive(Clone)]
pub struct ExtElem {
    field: Arc<ExtensionField>,
    coeffs: [u8; MAX_EXT_DEGREE],
}

impl ExtElem {
    pub fn zero(field: &Arc<ExtensionField>) -> Self {
        ExtElem { field: Arc::clone(field), coeffs: [0; MAX_EXT_DEGREE] }
    }

    /// Embed a base-field value as a constant.
    pub fn constant(field: &Arc<ExtensionField>, v: i64) -> Self {
        let mut e = Self::zero(field);
        e.coeffs[0] = v.rem_euclid(field.p as i64) as u8;
        e
    }

    pub fn from_coeffs(field: &Arc<ExtensionField>, coeffs: &[u8]) -> Self {
        assert!(coeffs.len() <= field.degree, "too many coefficients");
        let mut e = Self::zero(field);
        for (dst, &c) in e.coeffs.iter_mut().zip(coeffs) {
            *dst = c % field.p;
        }
        e
    }

    /// A uniformly random element.
    pub fn random<R: Rng + ?Sized>(field: &Arc<ExtensionField>, rng: &mut R) -> Self {
        let mut e = Self::zero(field);
        for c in e.coeffs.iter_mut().take(field.degree) {
            *c = rng.random_range(0..field.p);
        }
        e
    }

    pub fn field(&self) -> &Arc<ExtensionField> {
        &self.field
    }

    pub fn coeffs(&self) -> &[u8] {
        &self.coeffs[..self.field.degree]
    }

    fn from_poly(field: &Arc<ExtensionField>, poly: &[u8]) -> Self {
        let mut e = Self::zero(field);
        e.coeffs[..poly.len()].copy_from_slice(poly);
        e
    }
}

impl PartialEq for ExtElem {
    fn eq(&self, other: &Self) -> bool {
        self.coeffs == other.coeffs && (Arc::ptr_eq(&self.field, &other.field) || self.field == other.field)
    }
}

impl Eq for ExtElem {}

impl fmt::Debug for ExtElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}", self.coeffs())
    }
}

impl Ring for ExtElem {
    fn zero_like(&self) -> Self {
        Self::zero(&self.field)
    }

    fn one_like(&self) -> Self {
        Self::constant(&self.field, 1)
    }

    fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|&c| c == 0)
    }

    fn add(&self, rhs: &Self) -> Self {
        let p = self.field.p;
        let mut out = self.clone();
        for (a, &b) in out.coeffs.iter_mut().zip(rhs.coeffs.iter()).take(self.field.degree) {
            let s = *a + b;
            *a = if s >= p { s - p } else { s };
        }
        out
    }

    fn sub(&self, rhs: &Self) -> Self {
        let p = self.field.p;
        let mut out = self.clone();
        for (a, &b) in out.coeffs.iter_mut().zip(rhs.coeffs.iter()).take(self.field.degree) {
            *a = if *a >= b { *a - b } else { *a + p - b };
        }
        out
    }

    fn mul(&self, rhs: &Self) -> Self {
        let n = self.field.degree;
        let p = self.field.p as u32;
        let mut acc = [0u32; 2 * MAX_EXT_DEGREE];
        for (i, &a) in self.coeffs[..n].iter().enumerate() {
            if a == 0 {
                continue;
            }
            for (j, &b) in rhs.coeffs[..n].iter().enumerate() {
                acc[i + j] += a as u32 * b as u32;
            }
        }
        // Reduce using x^n = −(f_0 + f_1 x + … + f_{n−1} x^{n−1}).
        let f = &self.field.modulus;
        for top in (n..2 * n - 1).rev() {
            let c = acc[top] % p;
            if c == 0 {
                continue;
            }
            let neg = p - c;
            let base = top - n;
            for (j, &fj) in f[..n].iter().enumerate() {
                acc[base + j] += neg * fj as u32;
            }
        }
        let mut out = Self::zero(&self.field);
        for (dst, &v) in out.coeffs.iter_mut().zip(acc.iter()).take(n) {
            *dst = (v % p) as u8;
        }
        out
    }

    fn neg(&self) -> Self {
        let p = self.field.p;
        let mut out = self.clone();
        for c in out.coeffs.iter_mut().take(self.field.degree) {
            if *c != 0 {
                *c = p - *c;
            }
        }
        out
    }

    fn from_i64_like(&self, v: i64) -> Self {
        Self::constant(&self.field, v)
    }
}

impl Field for ExtElem {
    fn inv(&self) -> Option<Self> {
        if self.is_zero() {
            return None;
        }
        // Extended Euclid: maintain s with s·a ≡ r (mod f).
        let p = self.field.p;
        let f = self.field.modulus.clone();
        let (mut r0, mut r1) = (f.clone(), gfpoly::trim(self.coeffs().to_vec()));
        let (mut s0, mut s1): (GfPoly, GfPoly) = (Vec::new(), vec![1]);
        while !r1.is_empty() {
            let (q, r) = gfpoly::divrem(&r0, &r1, p);
            let s = gfpoly::sub(&s0, &gfpoly::mul(&q, &s1, p), p);
            r0 = r1;
            r1 = r;
            s0 = s1;
            s1 = s;
        }
        // r0 is a nonzero constant since f is irreducible.
        let c = r0[0];
        let c_inv = (1..p).find(|&b| (c as u16 * b as u16) % p as u16 == 1)?;
        let inv = gfpoly::rem(&gfpoly::mul(&s0, &[c_inv], p), &f, p);
        Some(Self::from_poly(&self.field, &inv))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn gf4_multiplication_table() {
        let field = Arc::new(ExtensionField::new(2, vec![1, 1, 1]).unwrap());
        let x = ExtElem::from_coeffs(&field, &[0, 1]);
        // x² = x + 1 in GF(2)[x]/(x²+x+1).
        assert_eq!(x.mul(&x), ExtElem::from_coeffs(&field, &[1, 1]));
        // x³ = 1.
        assert!(x.mul(&x).mul(&x).is_one());
    }

    #[test]
    fn rejects_reducible_modulus() {
        assert!(ExtensionField::new(2, vec![1, 0, 1]).is_err());
        assert!(ExtensionField::new(3, vec![1, 0, 2]).is_err());
        assert!(ExtensionField::new(3, vec![1, 2]).is_err(), "not monic");
    }

    #[test]
    fn construction_is_deterministic_per_seed() {
        let a = construct_extension_field(2, 8, 17).unwrap();
        let b = construct_extension_field(2, 8, 17).unwrap();
        assert_eq!(a.modulus(), b.modulus());
        assert_eq!(a.degree(), 8);
    }

    #[test]
    fn only_irreducible_quadratic_over_gf2() {
        for seed in 0..10 {
            let f = construct_extension_field(2, 2, seed).unwrap();
            assert_eq!(f.modulus(), &[1, 1, 1]);
        }
    }

    #[test]
    fn inverse_round_trip() {
        let field = construct_extension_field(3, 5, 1).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        for _ in 0..200 {
            let a = ExtElem::random(&field, &mut rng);
            if a.is_zero() {
                continue;
            }
            assert!(a.mul(&a.inv().unwrap()).is_one());
        }
    }

    #[test]
    fn modulus_line_round_trip() {
        let field = construct_extension_field(5, 4, 3).unwrap();
        let line = field.modulus_line();
        let back = ExtensionField::parse_modulus_line(5, &line).unwrap();
        assert_eq!(&back, field.as_ref());
    }
}
