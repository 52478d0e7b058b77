//! Exact arithmetic substrate.
//!
//! Every algorithm in this crate is generic over [`Ring`]. Elements carry
//! enough context to manufacture other elements of the same ring (an
//! extension-field element knows its modulus, an ε-polynomial knows its
//! truncation bound), so constructors take a prototype element rather than a
//! separate ring object.

mod eps;
mod ext;
pub mod gfpoly;
mod prime;
mod rational;

use std::fmt;

pub use eps::EpsPoly;
pub use ext::{construct_extension_field, ExtElem, ExtensionField, MAX_EXT_DEGREE};
pub use prime::{Fp, Gf2, Gf3, Gf5, Gf7};
pub use rational::ExactRational;

/// A commutative ring with unit.
pub trait Ring: Clone + PartialEq + fmt::Debug + Send + Sync {
    fn zero_like(&self) -> Self;
    fn one_like(&self) -> Self;
    fn is_zero(&self) -> bool;
    fn add(&self, rhs: &Self) -> Self;
    fn sub(&self, rhs: &Self) -> Self;
    fn mul(&self, rhs: &Self) -> Self;
    fn neg(&self) -> Self;

    /// Image of the integer `v` under the canonical map ℤ → R.
    fn from_i64_like(&self, v: i64) -> Self;

    fn add_assign(&mut self, rhs: &Self) {
        *self = self.add(rhs);
    }

    fn is_one(&self) -> bool {
        *self == self.one_like()
    }
}

/// A ring in which every nonzero element is invertible.
pub trait Field: Ring {
    fn inv(&self) -> Option<Self>;

    /// Rank of a matrix with entries in this field.
    ///
    /// The default is plain Gaussian elimination; [`ExactRational`] overrides
    /// it with fraction-free elimination.
    fn rank_of(rows: usize, cols: usize, entries: &[Self]) -> usize {
        gaussian_rank(rows, cols, entries)
    }
}

/// Rings whose elements need no runtime context and have a text tag in the
/// file formats (`q`, `gf2`, `gf3`, `gf5`, `gf7`).
pub trait ScalarRing: Ring {
    const TAG: &'static str;

    fn zero() -> Self;
    fn one() -> Self;
    fn from_i64(v: i64) -> Self;
    fn parse(token: &str) -> Option<Self>;
    fn render(&self) -> String;
}

/// The ring tags understood by the text formats.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum RingTag {
    Rational,
    Gf2,
    Gf3,
    Gf5,
    Gf7,
}

impl RingTag {
    pub fn parse(s: &str) -> Option<Self> {
        match s {
            "q" => Some(RingTag::Rational),
            "gf2" => Some(RingTag::Gf2),
            "gf3" => Some(RingTag::Gf3),
            "gf5" => Some(RingTag::Gf5),
            "gf7" => Some(RingTag::Gf7),
            _ => None,
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            RingTag::Rational => "q",
            RingTag::Gf2 => "gf2",
            RingTag::Gf3 => "gf3",
            RingTag::Gf5 => "gf5",
            RingTag::Gf7 => "gf7",
        }
    }

    /// Characteristic of the ring, 0 for the rationals.
    pub fn characteristic(self) -> u8 {
        match self {
            RingTag::Rational => 0,
            RingTag::Gf2 => 2,
            RingTag::Gf3 => 3,
            RingTag::Gf5 => 5,
            RingTag::Gf7 => 7,
        }
    }
}

impl fmt::Display for RingTag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

pub(crate) fn gaussian_rank<F: Field>(rows: usize, cols: usize, entries: &[F]) -> usize {
    let mut m: Vec<F> = entries.to_vec();
    let mut rank = 0;
    for col in 0..cols {
        if rank == rows {
            break;
        }
        let Some(pivot) = (rank..rows).find(|&r| !m[r * cols + col].is_zero()) else {
            continue;
        };
        if pivot != rank {
            for c in 0..cols {
                m.swap(pivot * cols + c, rank * cols + c);
            }
        }
        let inv = m[rank * cols + col]
            .inv()
            .expect("nonzero pivot must be invertible");
        for r in (rank + 1)..rows {
            let factor = m[r * cols + col].mul(&inv);
            if factor.is_zero() {
                continue;
            }
            for c in col..cols {
                let sub = factor.mul(&m[rank * cols + c]);
                m[r * cols + c] = m[r * cols + c].sub(&sub);
            }
        }
        rank += 1;
    }
    rank
}
