use std::fmt;

use super::{Field, Ring, ScalarRing};

/// An element of the prime field GF(P) for P ∈ {2, 3, 5, 7}.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Default)]
pub struct Fp<const P: u8>(u8);

pub type Gf2 = Fp<2>;
pub type Gf3 = Fp<3>;
pub type Gf5 = Fp<5>;
pub type Gf7 = Fp<7>;

impl<const P: u8> Fp<P> {
    const SUPPORTED: () = assert!(P == 2 || P == 3 || P == 5 || P == 7, "unsupported prime");

    pub const MODULUS: u8 = P;

    pub fn new(v: i64) -> Self {
        #[allow(clippy::let_unit_value)]
        let _ = Self::SUPPORTED;
        Fp(v.rem_euclid(P as i64) as u8)
    }

    pub fn value(self) -> u8 {
        self.0
    }
}

impl<const P: u8> fmt::Debug for Fp<P> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

impl<const P: u8> fmt::Display for Fp<P> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

impl<const P: u8> Ring for Fp<P> {
    fn zero_like(&self) -> Self {
        Fp(0)
    }

    fn one_like(&self) -> Self {
        Fp(1)
    }

    #[inline]
    fn is_zero(&self) -> bool {
        self.0 == 0
    }

    #[inline]
    fn add(&self, rhs: &Self) -> Self {
        let s = self.0 + rhs.0;
        Fp(if s >= P { s - P } else { s })
    }

    #[inline]
    fn sub(&self, rhs: &Self) -> Self {
        Fp(if self.0 >= rhs.0 { self.0 - rhs.0 } else { self.0 + P - rhs.0 })
    }

    #[inline]
    fn mul(&self, rhs: &Self) -> Self {
        Fp(((self.0 as u16 * rhs.0 as u16) % P as u16) as u8)
    }

    fn neg(&self) -> Self {
        Fp(if self.0 == 0 { 0 } else { P - self.0 })
    }

    fn from_i64_like(&self, v: i64) -> Self {
        Fp::new(v)
    }

    fn is_one(&self) -> bool {
        self.0 == 1
    }
}

impl<const P: u8> Field for Fp<P> {
    fn inv(&self) -> Option<Self> {
        if self.0 == 0 {
            return None;
        }
        // a^(P-2) by Fermat; P ≤ 7 so a short loop suffices.
        let mut acc = Fp(1);
        for _ in 0..(P - 2) {
            acc = acc.mul(self);
        }
        Some(acc)
    }
}

impl<const P: u8> ScalarRing for Fp<P> {
    const TAG: &'static str = match P {
        2 => "gf2",
        3 => "gf3",
        5 => "gf5",
        7 => "gf7",
        _ => "gf?",
    };

    fn zero() -> Self {
        Fp(0)
    }

    fn one() -> Self {
        Fp(1)
    }

    fn from_i64(v: i64) -> Self {
        Fp::new(v)
    }

    fn parse(token: &str) -> Option<Self> {
        token.parse::<i64>().ok().map(Fp::new)
    }

    fn render(&self) -> String {
        self.0.to_string()
    }
}
