use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use super::{Field, Ring, ScalarRing};

/// An exact rational number in lowest terms with positive denominator.
///
/// Values that fit in `i64/i64` stay in a machine-word representation; the
/// arbitrary-precision form is used only on overflow. The representation is
/// canonical, so structural equality is numeric equality.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct ExactRational(Repr);

#[derive(Clone, PartialEq, Eq, Hash)]
enum Repr {
    Small { num: i64, den: i64 },
    Big(BigRational),
}

impl ExactRational {
    pub fn new(num: i64, den: i64) -> Self {
        assert!(den != 0, "zero denominator");
        Self::from_i128(num as i128, den as i128)
    }

    pub fn integer(v: i64) -> Self {
        ExactRational(Repr::Small { num: v, den: 1 })
    }

    pub fn from_big(r: BigRational) -> Self {
        // BigRational::new reduces and fixes the sign of the denominator.
        match (r.numer().to_i64(), r.denom().to_i64()) {
            (Some(num), Some(den)) => ExactRational(Repr::Small { num, den }),
            _ => ExactRational(Repr::Big(r)),
        }
    }

    pub fn from_bigint(v: BigInt) -> Self {
        Self::from_big(BigRational::from_integer(v))
    }

    fn from_i128(mut num: i128, mut den: i128) -> Self {
        if den < 0 {
            num = -num;
            den = -den;
        }
        let g = num.gcd(&den);
        if g > 1 {
            num /= g;
            den /= g;
        }
        match (i64::try_from(num), i64::try_from(den)) {
            (Ok(num), Ok(den)) => ExactRational(Repr::Small { num, den }),
            _ => ExactRational(Repr::Big(BigRational::new(num.into(), den.into()))),
        }
    }

    pub fn to_big(&self) -> BigRational {
        match &self.0 {
            Repr::Small { num, den } => BigRational::new_raw((*num).into(), (*den).into()),
            Repr::Big(r) => r.clone(),
        }
    }

    pub fn numer(&self) -> BigInt {
        match &self.0 {
            Repr::Small { num, .. } => (*num).into(),
            Repr::Big(r) => r.numer().clone(),
        }
    }

    pub fn denom(&self) -> BigInt {
        match &self.0 {
            Repr::Small { den, .. } => (*den).into(),
            Repr::Big(r) => r.denom().clone(),
        }
    }

    pub fn is_integer(&self) -> bool {
        match &self.0 {
            Repr::Small { den, .. } => *den == 1,
            Repr::Big(r) => r.is_integer(),
        }
    }

    /// The value as a big integer, if it is one.
    pub fn to_bigint(&self) -> Option<BigInt> {
        self.is_integer().then(|| self.numer())
    }

    pub fn is_negative(&self) -> bool {
        match &self.0 {
            Repr::Small { num, .. } => *num < 0,
            Repr::Big(r) => r.is_negative(),
        }
    }

    fn big_op(&self, rhs: &Self, op: impl FnOnce(BigRational, BigRational) -> BigRational) -> Self {
        Self::from_big(op(self.to_big(), rhs.to_big()))
    }
}

impl Default for ExactRational {
    fn default() -> Self {
        ExactRational::integer(0)
    }
}

impl From<i64> for ExactRational {
    fn from(v: i64) -> Self {
        ExactRational::integer(v)
    }
}

impl fmt::Debug for ExactRational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl fmt::Display for ExactRational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.0 {
            Repr::Small { num, den: 1 } => write!(f, "{num}"),
            Repr::Small { num, den } => write!(f, "{num}/{den}"),
            Repr::Big(r) if r.is_integer() => write!(f, "{}", r.numer()),
            Repr::Big(r) => write!(f, "{}/{}", r.numer(), r.denom()),
        }
    }
}

impl Ring for ExactRational {
    fn zero_like(&self) -> Self {
        ExactRational::integer(0)
    }

    fn one_like(&self) -> Self {
        ExactRational::integer(1)
    }

    #[inline]
    fn is_zero(&self) -> bool {
        matches!(self.0, Repr::Small { num: 0, .. })
    }

    #[inline]
    fn add(&self, rhs: &Self) -> Self {
        match (&self.0, &rhs.0) {
            (Repr::Small { num: a, den: 1 }, Repr::Small { num: b, den: 1 }) => match a.checked_add(*b) {
                Some(s) => ExactRational::integer(s),
                None => Self::from_i128(*a as i128 + *b as i128, 1),
            },
            (Repr::Small { num: a, den: da }, Repr::Small { num: b, den: db }) => {
                let (a, da, b, db) = (*a as i128, *da as i128, *b as i128, *db as i128);
                match (a * db).checked_add(b * da) {
                    Some(n) => Self::from_i128(n, da * db),
                    None => self.big_op(rhs, |x, y| x + y),
                }
            }
            _ => self.big_op(rhs, |x, y| x + y),
        }
    }

    #[inline]
    fn sub(&self, rhs: &Self) -> Self {
        match (&self.0, &rhs.0) {
            (Repr::Small { num: a, den: 1 }, Repr::Small { num: b, den: 1 }) => match a.checked_sub(*b) {
                Some(s) => ExactRational::integer(s),
                None => Self::from_i128(*a as i128 - *b as i128, 1),
            },
            (Repr::Small { num: a, den: da }, Repr::Small { num: b, den: db }) => {
                let (a, da, b, db) = (*a as i128, *da as i128, *b as i128, *db as i128);
                match (a * db).checked_sub(b * da) {
                    Some(n) => Self::from_i128(n, da * db),
                    None => self.big_op(rhs, |x, y| x - y),
                }
            }
            _ => self.big_op(rhs, |x, y| x - y),
        }
    }

    #[inline]
    fn mul(&self, rhs: &Self) -> Self {
        match (&self.0, &rhs.0) {
            (Repr::Small { num: a, den: 1 }, Repr::Small { num: b, den: 1 }) => match a.checked_mul(*b) {
                Some(s) => ExactRational::integer(s),
                None => Self::from_i128(*a as i128 * *b as i128, 1),
            },
            (Repr::Small { num: a, den: da }, Repr::Small { num: b, den: db }) => {
                Self::from_i128(*a as i128 * *b as i128, *da as i128 * *db as i128)
            }
            _ => self.big_op(rhs, |x, y| x * y),
        }
    }

    fn neg(&self) -> Self {
        match &self.0 {
            Repr::Small { num, den } => match num.checked_neg() {
                Some(n) => ExactRational(Repr::Small { num: n, den: *den }),
                None => Self::from_big(-self.to_big()),
            },
            Repr::Big(r) => Self::from_big(-r.clone()),
        }
    }

    fn from_i64_like(&self, v: i64) -> Self {
        ExactRational::integer(v)
    }

    fn is_one(&self) -> bool {
        matches!(self.0, Repr::Small { num: 1, den: 1 })
    }
}

impl Field for ExactRational {
    fn inv(&self) -> Option<Self> {
        if self.is_zero() {
            return None;
        }
        Some(Self::from_big(self.to_big().recip()))
    }

    fn rank_of(rows: usize, cols: usize, entries: &[Self]) -> usize {
        bareiss_rank(rows, cols, entries)
    }
}

impl ScalarRing for ExactRational {
    const TAG: &'static str = "q";

    fn zero() -> Self {
        ExactRational::integer(0)
    }

    fn one() -> Self {
        ExactRational::integer(1)
    }

    fn from_i64(v: i64) -> Self {
        ExactRational::integer(v)
    }

    fn parse(token: &str) -> Option<Self> {
        match token.split_once('/') {
            None => token.parse::<BigInt>().ok().map(Self::from_bigint),
            Some((n, d)) => {
                let n: BigInt = n.parse().ok()?;
                let d: BigInt = d.parse().ok()?;
                if d.is_zero() {
                    return None;
                }
                Some(Self::from_big(BigRational::new(n, d)))
            }
        }
    }

    fn render(&self) -> String {
        self.to_string()
    }
}

/// Fraction-free (Bareiss) elimination over the integers after clearing the
/// denominators of each row.
fn bareiss_rank(rows: usize, cols: usize, entries: &[ExactRational]) -> usize {
    let mut m: Vec<BigInt> = Vec::with_capacity(rows * cols);
    for r in 0..rows {
        let row = &entries[r * cols..(r + 1) * cols];
        let lcm = row.iter().fold(BigInt::one(), |acc, x| acc.lcm(&x.denom()));
        m.extend(row.iter().map(|x| x.numer() * (&lcm / x.denom())));
    }
    let mut prev = BigInt::one();
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
        let p = m[rank * cols + col].clone();
        for r in (rank + 1)..rows {
            let lead = m[r * cols + col].clone();
            for c in 0..cols {
                let v = (&p * &m[r * cols + c] - &lead * &m[rank * cols + c]) / &prev;
                m[r * cols + c] = v;
            }
        }
        prev = p;
        rank += 1;
    }
    rank
}
