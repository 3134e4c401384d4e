use std::fmt;
use std::ops::{Add, AddAssign, Mul, MulAssign, Neg, Sub, SubAssign};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FieldError {
    #[error("characteristic {0} is not 0 or a prime below 2^31")]
    BadCharacteristic(u64),
    #[error("this scalar type requires characteristic {expected}, got {got}")]
    WrongCharacteristic { expected: &'static str, got: u32 },
    #[error("denominator {0} is not invertible in the field")]
    NonInvertible(String),
    #[error("cannot parse scalar {0:?}")]
    Parse(String),
}

/// Exact field arithmetic used by every linear-algebra routine.
///
/// `Zero`/`One` come from num-traits; `inv` returns `None` on zero.
pub trait Scalar:
    Clone
    + PartialEq
    + fmt::Debug
    + fmt::Display
    + Send
    + Sync
    + Zero
    + One
    + Neg<Output = Self>
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + AddAssign
    + SubAssign
    + MulAssign
{
    fn inv(&self) -> Option<Self>;

    fn mul_ref(&self, other: &Self) -> Self;

    /// Image of a rational number in the field of the given characteristic.
    fn from_ratio(r: &BigRational, characteristic: u32) -> Result<Self, FieldError>;

    /// Canonical rational representative (for F_p, the residue in `0..p`).
    fn to_ratio(&self) -> BigRational;

    /// `Some(c)` when the element knows its field, `None` for context-free constants.
    fn characteristic(&self) -> Option<u32>;

    fn from_i64(v: i64, characteristic: u32) -> Result<Self, FieldError> {
        Self::from_ratio(&BigRational::from_integer(BigInt::from(v)), characteristic)
    }
}

impl Scalar for BigRational {
    fn inv(&self) -> Option<Self> {
        if self.is_zero() {
            None
        } else {
            Some(self.recip())
        }
    }

    fn mul_ref(&self, other: &Self) -> Self {
        self * other
    }

    fn from_ratio(r: &BigRational, characteristic: u32) -> Result<Self, FieldError> {
        if characteristic != 0 {
            return Err(FieldError::WrongCharacteristic {
                expected: "0",
                got: characteristic,
            });
        }
        Ok(r.clone())
    }

    fn to_ratio(&self) -> BigRational {
        self.clone()
    }

    fn characteristic(&self) -> Option<u32> {
        Some(0)
    }
}

pub fn is_prime(p: u64) -> bool {
    if p < 2 {
        return false;
    }
    let mut d = 2u64;
    while d * d <= p {
        if p.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

pub fn check_characteristic(c: u64) -> Result<u32, FieldError> {
    if c == 0 || (c < (1 << 31) && is_prime(c)) {
        Ok(c as u32)
    } else {
        Err(FieldError::BadCharacteristic(c))
    }
}

/// Element of a prime field F_p with the modulus carried at runtime.
///
/// `zero()` and `one()` have no modulus yet (`p == 0`); they pick one up from
/// the first bound operand they meet. Mixing two different moduli panics.
#[derive(Clone, Copy, Debug)]
pub struct Fp {
    p: u32,
    v: i64,
}

impl Fp {
    pub fn new(v: i64, p: u32) -> Self {
        assert!(p >= 2, "modulus must be a prime");
        Fp {
            p,
            v: v.rem_euclid(p as i64),
        }
    }

    pub fn value(&self) -> i64 {
        if self.p == 0 {
            self.v
        } else {
            self.v.rem_euclid(self.p as i64)
        }
    }

    pub fn modulus(&self) -> Option<u32> {
        (self.p != 0).then_some(self.p)
    }

    fn common(a: u32, b: u32) -> u32 {
        match (a, b) {
            (0, q) | (q, 0) => q,
            (p, q) if p == q => p,
            (p, q) => panic!("mixed field characteristics {p} and {q}"),
        }
    }

    fn reduced(v: i64, p: u32) -> Fp {
        if p == 0 {
            Fp { p, v }
        } else {
            Fp {
                p,
                v: v.rem_euclid(p as i64),
            }
        }
    }

    fn binop(self, o: Fp, f: impl Fn(i64, i64) -> Option<i64>) -> Fp {
        let p = Fp::common(self.p, o.p);
        let (a, b) = if p == 0 {
            (self.v, o.v)
        } else {
            (self.v.rem_euclid(p as i64), o.v.rem_euclid(p as i64))
        };
        let r = f(a, b).expect("F_p constant overflow");
        Fp::reduced(r, p)
    }
}

impl PartialEq for Fp {
    fn eq(&self, o: &Fp) -> bool {
        let p = Fp::common(self.p, o.p);
        if p == 0 {
            self.v == o.v
        } else {
            self.v.rem_euclid(p as i64) == o.v.rem_euclid(p as i64)
        }
    }
}

impl fmt::Display for Fp {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.value())
    }
}

impl Add for Fp {
    type Output = Fp;
    fn add(self, o: Fp) -> Fp {
        self.binop(o, i64::checked_add)
    }
}

impl Sub for Fp {
    type Output = Fp;
    fn sub(self, o: Fp) -> Fp {
        self.binop(o, i64::checked_sub)
    }
}

impl Mul for Fp {
    type Output = Fp;
    fn mul(self, o: Fp) -> Fp {
        self.binop(o, i64::checked_mul)
    }
}

impl Neg for Fp {
    type Output = Fp;
    fn neg(self) -> Fp {
        Fp::reduced(-self.v, self.p)
    }
}

impl AddAssign for Fp {
    fn add_assign(&mut self, o: Fp) {
        *self = *self + o;
    }
}

impl SubAssign for Fp {
    fn sub_assign(&mut self, o: Fp) {
        *self = *self - o;
    }
}

impl MulAssign for Fp {
    fn mul_assign(&mut self, o: Fp) {
        *self = *self * o;
    }
}

impl Zero for Fp {
    fn zero() -> Fp {
        Fp { p: 0, v: 0 }
    }
    fn is_zero(&self) -> bool {
        self.value() == 0
    }
}

impl One for Fp {
    fn one() -> Fp {
        Fp { p: 0, v: 1 }
    }
}

fn inv_mod(a: i64, p: i64) -> Option<i64> {
    let e = a.extended_gcd(&p);
    (e.gcd == 1).then(|| e.x.rem_euclid(p))
}

impl Scalar for Fp {
    fn inv(&self) -> Option<Fp> {
        if self.is_zero() {
            return None;
        }
        if self.p == 0 {
            return match self.v {
                1 | -1 => Some(*self),
                v => panic!("inverse of {v} needs a modulus"),
            };
        }
        inv_mod(self.value(), self.p as i64).map(|v| Fp { p: self.p, v })
    }

    fn mul_ref(&self, other: &Fp) -> Fp {
        *self * *other
    }

    fn from_ratio(r: &BigRational, characteristic: u32) -> Result<Fp, FieldError> {
        if characteristic == 0 || !is_prime(characteristic as u64) {
            return Err(FieldError::WrongCharacteristic {
                expected: "a prime",
                got: characteristic,
            });
        }
        let p = BigInt::from(characteristic);
        let num = r.numer().mod_floor(&p).to_i64().unwrap();
        let den = r.denom().mod_floor(&p).to_i64().unwrap();
        let den_inv =
            inv_mod(den, characteristic as i64).ok_or_else(|| FieldError::NonInvertible(r.denom().to_string()))?;
        Ok(Fp::new(num * den_inv, characteristic))
    }

    fn to_ratio(&self) -> BigRational {
        BigRational::from_integer(BigInt::from(self.value()))
    }

    fn characteristic(&self) -> Option<u32> {
        self.modulus()
    }
}

/// Parses `"3"`, `"-2/5"` style rationals.
pub fn parse_ratio(s: &str) -> Result<BigRational, FieldError> {
    let err = || FieldError::Parse(s.to_string());
    let s = s.trim();
    match s.split_once('/') {
        Some((n, d)) => {
            let n: BigInt = n.trim().parse().map_err(|_| err())?;
            let d: BigInt = d.trim().parse().map_err(|_| err())?;
            if d.is_zero() {
                return Err(err());
            }
            Ok(BigRational::new(n, d))
        }
        None => Ok(BigRational::from_integer(s.parse().map_err(|_| err())?)),
    }
}

pub fn format_ratio(r: &BigRational) -> String {
    if r.is_integer() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

/// Rational scalars whose denominators are 1 serialize as JSON integers.
pub fn ratio_fits_i64(r: &BigRational) -> Option<i64> {
    if r.is_integer() && r.numer().abs() < BigInt::from(i64::MAX) {
        r.numer().to_i64()
    } else {
        None
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn fp_arithmetic_wraps() {
        let a = Fp::new(5, 7);
        let b = Fp::new(4, 7);
        assert_eq!((a + b).value(), 2);
        assert_eq!((a * b).value(), 6);
        assert_eq!((a - b - b).value(), 4);
        assert_eq!(a.inv().unwrap() * a, Fp::one());
    }

    #[test]
    fn unbound_constants_adopt_modulus() {
        let one = Fp::one();
        let x = Fp::new(3, 5);
        assert_eq!((one + one + x).value(), 0);
        assert!(Fp::zero() == Fp::new(0, 5));
    }

    #[test]
    #[should_panic]
    fn mixed_moduli_panic() {
        let _ = Fp::new(1, 5) + Fp::new(1, 7);
    }

    #[test]
    fn ratio_round_trip() {
        let r = parse_ratio("-3/4").unwrap();
        assert_eq!(format_ratio(&r), "-3/4");
        let f = Fp::from_ratio(&r, 7).unwrap();
        assert_eq!(f * Fp::new(4, 7), Fp::new(-3, 7));
        assert!(Fp::from_ratio(&parse_ratio("1/7").unwrap(), 7).is_err());
        assert!(check_characteristic(9).is_err());
        assert_eq!(check_characteristic(2147483647).unwrap(), 2147483647);
    }
}
