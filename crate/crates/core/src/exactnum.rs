//! Exact rationals and the small amount of elementary number theory the
//! obstruction pipeline needs: residues, square classes, and integral roots
//! of monic quadratics.

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};
use std::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum NumberError {
    #[error("modulus must be at least 2, got {0}")]
    ModulusTooSmall(i64),
    #[error("modulus must be positive, got {0}")]
    NonPositiveModulus(i64),
    #[error("{value} is not a unit modulo {modulus}")]
    NotAUnit { value: i64, modulus: i64 },
    #[error("zero denominator")]
    ZeroDenominator,
    #[error("cannot parse rational from {0:?}")]
    Parse(String),
}

/// Exact rational number, always stored in lowest terms with a positive
/// denominator.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Rational(BigRational);

impl Rational {
    pub fn new(num: i64, den: i64) -> Result<Self, NumberError> {
        if den == 0 {
            return Err(NumberError::ZeroDenominator);
        }
        Ok(Rational(BigRational::new(num.into(), den.into())))
    }

    pub fn from_integer(n: i64) -> Self {
        Rational(BigRational::from_integer(n.into()))
    }

    pub fn zero() -> Self {
        Rational(BigRational::zero())
    }

    pub fn numer(&self) -> &BigInt {
        self.0.numer()
    }

    pub fn denom(&self) -> &BigInt {
        self.0.denom()
    }

    pub fn is_integer(&self) -> bool {
        self.0.is_integer()
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_zero()
    }

    pub fn is_negative(&self) -> bool {
        self.0.is_negative()
    }

    /// Non-negative integer, the only admissible shape for a V or N value.
    pub fn is_nonnegative_integer(&self) -> bool {
        self.is_integer() && !self.is_negative()
    }

    /// The value as an `i64` when it is an integer in range.
    pub fn to_i64(&self) -> Option<i64> {
        if self.is_integer() {
            self.0.numer().to_i64()
        } else {
            None
        }
    }

    pub fn half(&self) -> Self {
        Rational(&self.0 / BigRational::from_integer(2.into()))
    }
}

impl fmt::Display for Rational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}/{}", self.0.numer(), self.0.denom())
    }
}

impl fmt::Debug for Rational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl FromStr for Rational {
    type Err = NumberError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let parse = |t: &str| {
            t.trim()
                .parse::<BigInt>()
                .map_err(|_| NumberError::Parse(s.to_string()))
        };
        let (num, den) = match s.split_once('/') {
            Some((n, d)) => (parse(n)?, parse(d)?),
            None => (parse(s)?, BigInt::one()),
        };
        if den.is_zero() {
            return Err(NumberError::ZeroDenominator);
        }
        Ok(Rational(BigRational::new(num, den)))
    }
}

impl Serialize for Rational {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for Rational {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let s = String::deserialize(deserializer)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

impl From<i64> for Rational {
    fn from(n: i64) -> Self {
        Rational::from_integer(n)
    }
}

macro_rules! forward_binop {
    ($tr:ident, $method:ident) => {
        impl $tr for Rational {
            type Output = Rational;
            fn $method(self, rhs: Rational) -> Rational {
                Rational(self.0.$method(rhs.0))
            }
        }
        impl<'a> $tr<&'a Rational> for &'a Rational {
            type Output = Rational;
            fn $method(self, rhs: &'a Rational) -> Rational {
                Rational((&self.0).$method(&rhs.0))
            }
        }
        impl<'a> $tr<&'a Rational> for Rational {
            type Output = Rational;
            fn $method(self, rhs: &'a Rational) -> Rational {
                Rational(self.0.$method(&rhs.0))
            }
        }
    };
}

forward_binop!(Add, add);
forward_binop!(Sub, sub);
forward_binop!(Mul, mul);
forward_binop!(Div, div);

impl Neg for Rational {
    type Output = Rational;
    fn neg(self) -> Rational {
        Rational(-self.0)
    }
}

impl Neg for &Rational {
    type Output = Rational;
    fn neg(self) -> Rational {
        Rational(-&self.0)
    }
}

impl PartialEq<i64> for Rational {
    fn eq(&self, other: &i64) -> bool {
        self.0 == BigRational::from_integer((*other).into())
    }
}

impl PartialOrd<i64> for Rational {
    fn partial_cmp(&self, other: &i64) -> Option<Ordering> {
        self.0.partial_cmp(&BigRational::from_integer((*other).into()))
    }
}

/// Strictly increasing list of integral roots inside a requested open window.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct RootList(Vec<i64>);

impl RootList {
    pub fn roots(&self) -> &[i64] {
        &self.0
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn iter(&self) -> impl Iterator<Item = &i64> {
        self.0.iter()
    }
}

/// Exact square root of a non-negative big integer, if it is a perfect square.
pub fn exact_sqrt(radicand: &BigInt) -> Option<BigInt> {
    if radicand.is_negative() {
        return None;
    }
    let r = radicand.sqrt();
    (&r * &r == *radicand).then_some(r)
}

/// Integers `j` with `lo < j < hi` and `j^2 + b j + c = 0`.
///
/// Decided through the discriminant: a root is integral only when `b^2 - 4c`
/// is a perfect square `r^2` and `-b ± r` is even.
pub fn integral_roots_monic(b: i64, c: i64, lo: i64, hi: i64) -> RootList {
    if lo >= hi {
        return RootList::default();
    }
    let b = BigInt::from(b);
    let disc = &b * &b - BigInt::from(4) * BigInt::from(c);
    let Some(r) = exact_sqrt(&disc) else {
        return RootList::default();
    };
    let mut roots: Vec<i64> = [-&b - &r, -&b + &r]
        .into_iter()
        .filter(|twice| twice.is_even())
        .filter_map(|twice: BigInt| (twice / 2u32).to_i64())
        .filter(|j| lo < *j && *j < hi)
        .collect();
    roots.sort_unstable();
    roots.dedup();
    RootList(roots)
}

/// Whether `a` is a square modulo `m`, by scanning every residue.
pub fn is_square_mod(a: i64, m: i64) -> Result<bool, NumberError> {
    if m < 2 {
        return Err(NumberError::ModulusTooSmall(m));
    }
    let target = a.rem_euclid(m) as i128;
    let m = m as i128;
    Ok((0..m).any(|x| (x * x) % m == target))
}

/// Whether `q1 ≡ q2·a² (mod p)` for some unit `a`.
pub fn square_equivalent(q1: i64, q2: i64, p: i64) -> Result<bool, NumberError> {
    if p < 1 {
        return Err(NumberError::NonPositiveModulus(p));
    }
    if p == 1 {
        return Ok(true);
    }
    for q in [q1, q2] {
        if q.gcd(&p) != 1 {
            return Err(NumberError::NotAUnit { value: q, modulus: p });
        }
    }
    let (q1, q2, p) = (q1.rem_euclid(p) as i128, q2.rem_euclid(p) as i128, p as i128);
    Ok((1..p)
        .filter(|a| a.gcd(&p) == 1)
        .any(|a| (q2 * a * a - q1).rem_euclid(p) == 0))
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn brute_roots(b: i64, c: i64, lo: i64, hi: i64) -> Vec<i64> {
        ((lo + 1)..hi).filter(|j| j * j + b * j + c == 0).collect()
    }

    #[test]
    fn roots_examples() {
        assert_eq!(integral_roots_monic(-6, 9, 0, 6).roots(), &[3]);
        assert_eq!(integral_roots_monic(0, 0, -1, 2).roots(), &[0]);
        assert!(integral_roots_monic(-15, -12, 0, 15).is_empty());
        assert!(brute_roots(-15, -12, 0, 15).is_empty());
    }

    #[test]
    fn roots_respect_open_window() {
        // (j-2)(j-5)
        assert_eq!(integral_roots_monic(-7, 10, 0, 7).roots(), &[2, 5]);
        assert_eq!(integral_roots_monic(-7, 10, 2, 5).roots(), &[] as &[i64]);
        assert_eq!(integral_roots_monic(-7, 10, 1, 5).roots(), &[2]);
        assert!(integral_roots_monic(-7, 10, 5, 5).is_empty());
    }

    #[test]
    fn roots_odd_parity_discriminant() {
        // j^2 + j - 2 = (j+2)(j-1): disc 9, -b±r = -1±3 both even
        assert_eq!(integral_roots_monic(1, -2, -10, 10).roots(), &[-2, 1]);
        // j^2 - 2 has disc 8: not a square
        assert!(integral_roots_monic(0, -2, -10, 10).is_empty());
    }

    #[test]
    fn square_mod_examples() {
        assert!(!is_square_mod(2, 3).unwrap());
        assert!(is_square_mod(0, 17).unwrap());
        assert!(!is_square_mod(5, 8).unwrap());
        assert_eq!(is_square_mod(1, 1), Err(NumberError::ModulusTooSmall(1)));
    }

    #[test]
    fn square_equivalent_examples() {
        assert!(!square_equivalent(1, 2, 3).unwrap());
        assert!(square_equivalent(4, 4, 9).unwrap());
        assert!(square_equivalent(1, 4, 5).unwrap());
        assert!(square_equivalent(0, 0, 1).unwrap());
        assert!(matches!(
            square_equivalent(2, 1, 4),
            Err(NumberError::NotAUnit { value: 2, modulus: 4 })
        ));
    }

    #[test]
    fn rational_reduces_and_renders() {
        let r = Rational::new(6, -8).unwrap();
        assert_eq!(r.to_string(), "-3/4");
        assert_eq!(Rational::from_integer(3).to_string(), "3/1");
        assert_eq!("10/4".parse::<Rational>().unwrap(), Rational::new(5, 2).unwrap());
        assert_eq!("7".parse::<Rational>().unwrap(), Rational::from_integer(7));
        assert!(Rational::new(1, 0).is_err());
        assert!("1/0".parse::<Rational>().is_err());
    }

    #[test]
    fn rational_arithmetic() {
        let a = Rational::new(1, 4).unwrap();
        let b = Rational::new(1, 2).unwrap();
        assert_eq!(&a + &b, Rational::new(3, 4).unwrap());
        assert_eq!(&a - &b, Rational::new(-1, 4).unwrap());
        assert_eq!(&a * &b, Rational::new(1, 8).unwrap());
        assert_eq!(&a / &b, b);
        assert_eq!(-a.clone(), Rational::new(-1, 4).unwrap());
        assert!(a < b);
        assert!(Rational::new(4, 2).unwrap().is_nonnegative_integer());
        assert!(!Rational::new(-2, 1).unwrap().is_nonnegative_integer());
        assert_eq!(Rational::new(3, 1).unwrap().half(), Rational::new(3, 2).unwrap());
    }

    proptest! {
        #[test]
        fn roots_agree_with_scan(
            b in -10_000i64..=10_000,
            c in -10_000i64..=10_000,
            lo in -5_000i64..5_000,
            width in 1i64..=10_000,
        ) {
            let hi = lo + width;
            prop_assert_eq!(integral_roots_monic(b, c, lo, hi).roots().to_vec(), brute_roots(b, c, lo, hi));
        }

        // Random polynomials rarely have integral roots; build them from chosen roots.
        #[test]
        fn roots_of_constructed_products(r1 in -3_000i64..3_000, r2 in -3_000i64..3_000, lo in -4_000i64..0, width in 1i64..8_000) {
            let (b, c) = (-(r1 + r2), r1 * r2);
            let hi = lo + width;
            prop_assert_eq!(integral_roots_monic(b, c, lo, hi).roots().to_vec(), brute_roots(b, c, lo, hi));
        }

        #[test]
        fn square_mod_depends_on_residue(a in -10_000i64..10_000, m in 2i64..300) {
            prop_assert_eq!(is_square_mod(a, m).unwrap(), is_square_mod(a.rem_euclid(m), m).unwrap());
        }

        #[test]
        fn square_equivalence_is_an_equivalence(p in 1i64..=50, x in 0i64..50, y in 0i64..50, z in 0i64..50) {
            let units: Vec<i64> = (0..p).filter(|u| u.gcd(&p) == 1).collect();
            let pick = |t: i64| units[(t as usize) % units.len()];
            let (a, b, c) = (pick(x), pick(y), pick(z));
            let eq = |u, v| square_equivalent(u, v, p).unwrap();
            prop_assert!(eq(a, a));
            prop_assert_eq!(eq(a, b), eq(b, a));
            if eq(a, b) && eq(b, c) {
                prop_assert!(eq(a, c));
            }
        }

        #[test]
        fn rational_render_round_trips(n in -100_000i64..100_000, d in 1i64..100_000) {
            let r = Rational::new(n, d).unwrap();
            prop_assert_eq!(r.to_string().parse::<Rational>().unwrap(), r);
        }
    }
}
