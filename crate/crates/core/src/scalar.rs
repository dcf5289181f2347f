//! Scalar fields the linear algebra and the inequality machinery are generic over.
//!
//! Everything that decides a claim runs over [`BigRational`]. The other
//! implementations exist so the same code paths can be exercised with a
//! modular field (an independent rank probe) or with `f64` (quick estimates).

use std::fmt::{self, Debug, Display};
use std::ops::{Add, Div, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_rational::{BigRational, Ratio};
use num_traits::{One, Signed, ToPrimitive, Zero};

/// A commutative field with the handful of conversions the crate needs.
pub trait Field:
    Clone
    + Debug
    + PartialEq
    + Zero
    + One
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Div<Output = Self>
    + Neg<Output = Self>
    + Send
    + Sync
{
    fn from_i64(v: i64) -> Self;

    fn from_bigint(v: &BigInt) -> Self;

    /// Pivot test used by elimination. Exact fields use `is_zero`.
    fn is_negligible(&self) -> bool {
        self.is_zero()
    }
}

/// A field with a total order on the values we produce, and exact square roots
/// where they exist.
pub trait OrderedField: Field + PartialOrd {
    fn sqrt_exact(&self) -> Option<Self>;

    fn is_nonnegative(&self) -> bool {
        *self >= Self::zero()
    }
}

/// Fields whose elements are exactly representable as big rationals.
pub trait ExactField: OrderedField {
    fn to_big_rational(&self) -> BigRational;
}

fn isqrt_exact(v: &BigInt) -> Option<BigInt> {
    if v.is_negative() {
        return None;
    }
    let r = v.sqrt();
    (&r * &r == *v).then_some(r)
}

impl Field for BigRational {
    fn from_i64(v: i64) -> Self {
        BigRational::from_integer(BigInt::from(v))
    }

    fn from_bigint(v: &BigInt) -> Self {
        BigRational::from_integer(v.clone())
    }
}

impl OrderedField for BigRational {
    fn sqrt_exact(&self) -> Option<Self> {
        let n = isqrt_exact(self.numer())?;
        let d = isqrt_exact(self.denom())?;
        Some(BigRational::new(n, d))
    }
}

impl ExactField for BigRational {
    fn to_big_rational(&self) -> BigRational {
        self.clone()
    }
}

impl Field for Ratio<i64> {
    fn from_i64(v: i64) -> Self {
        Ratio::from_integer(v)
    }

    fn from_bigint(v: &BigInt) -> Self {
        Ratio::from_integer(v.to_i64().expect("integer does not fit in i64"))
    }
}

impl OrderedField for Ratio<i64> {
    fn sqrt_exact(&self) -> Option<Self> {
        let n = isqrt_exact(&BigInt::from(*self.numer()))?;
        let d = isqrt_exact(&BigInt::from(*self.denom()))?;
        Some(Ratio::new(n.to_i64()?, d.to_i64()?))
    }
}

impl ExactField for Ratio<i64> {
    fn to_big_rational(&self) -> BigRational {
        BigRational::new(BigInt::from(*self.numer()), BigInt::from(*self.denom()))
    }
}

/// Relative threshold below which an `f64` pivot is treated as zero.
pub const F64_PIVOT_EPS: f64 = 1e-9;

impl Field for f64 {
    fn from_i64(v: i64) -> Self {
        v as f64
    }

    fn from_bigint(v: &BigInt) -> Self {
        v.to_f64().unwrap_or(f64::NAN)
    }

    fn is_negligible(&self) -> bool {
        self.abs() < F64_PIVOT_EPS
    }
}

impl OrderedField for f64 {
    fn sqrt_exact(&self) -> Option<Self> {
        (*self >= 0.0).then(|| self.sqrt())
    }
}

/// Integers modulo the Mersenne prime 2^61 - 1.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Default)]
pub struct Fp(u64);

impl Fp {
    pub const MODULUS: u64 = (1 << 61) - 1;

    pub fn new(v: u64) -> Self {
        Fp(v % Self::MODULUS)
    }

    pub fn value(self) -> u64 {
        self.0
    }

    pub fn pow(self, mut e: u64) -> Self {
        let mut base = self;
        let mut acc = Fp(1);
        while e > 0 {
            if e & 1 == 1 {
                acc = acc * base;
            }
            base = base * base;
            e >>= 1;
        }
        acc
    }

    pub fn inverse(self) -> Option<Self> {
        (self.0 != 0).then(|| self.pow(Self::MODULUS - 2))
    }

    /// Reduces a rational; `None` when the denominator vanishes mod p.
    pub fn from_rational(q: &BigRational) -> Option<Self> {
        let den = Self::from_bigint(q.denom()).inverse()?;
        Some(Self::from_bigint(q.numer()) * den)
    }
}

impl Debug for Fp {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} (mod 2^61-1)", self.0)
    }
}

impl Display for Fp {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

impl Add for Fp {
    type Output = Fp;
    fn add(self, rhs: Fp) -> Fp {
        let s = self.0 + rhs.0;
        Fp(if s >= Self::MODULUS {
            s - Self::MODULUS
        } else {
            s
        })
    }
}

impl Sub for Fp {
    type Output = Fp;
    fn sub(self, rhs: Fp) -> Fp {
        if self.0 >= rhs.0 {
            Fp(self.0 - rhs.0)
        } else {
            Fp(self.0 + Self::MODULUS - rhs.0)
        }
    }
}

impl Mul for Fp {
    type Output = Fp;
    fn mul(self, rhs: Fp) -> Fp {
        let wide = self.0 as u128 * rhs.0 as u128;
        Fp((wide % Self::MODULUS as u128) as u64)
    }
}

impl Div for Fp {
    type Output = Fp;
    #[allow(clippy::suspicious_arithmetic_impl)]
    fn div(self, rhs: Fp) -> Fp {
        self * rhs.inverse().expect("division by zero in Fp")
    }
}

impl Neg for Fp {
    type Output = Fp;
    fn neg(self) -> Fp {
        Fp(0) - self
    }
}

impl Zero for Fp {
    fn zero() -> Self {
        Fp(0)
    }
    fn is_zero(&self) -> bool {
        self.0 == 0
    }
}

impl One for Fp {
    fn one() -> Self {
        Fp(1)
    }
}

impl Field for Fp {
    fn from_i64(v: i64) -> Self {
        if v >= 0 {
            Fp::new(v as u64)
        } else {
            -Fp::new(v.unsigned_abs())
        }
    }

    fn from_bigint(v: &BigInt) -> Self {
        let m = BigInt::from(Self::MODULUS);
        let r = ((v % &m) + &m) % &m;
        Fp(r.to_u64().expect("residue fits in u64"))
    }
}
