//! Binary fixed-point reals of configurable precision.
//!
//! A [`Fixed`] is `mantissa / 2^bits`. Sums are exact; products and
//! quotients round to the larger precision of the two operands. Integer
//! constants (`Fixed::zero()`, `Fixed::one()`) carry zero fractional bits
//! and are promoted on contact, so generic code written against
//! `num_traits` works unchanged.

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Rem, Sub};

use num_bigint::BigInt;
use num_complex::Complex;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{Num, One, Signed, ToPrimitive, Zero};

use crate::scalar::{rational_to_f64, ToF64};

/// Environment variable that overrides the decimal digit count.
pub const PRECISION_ENV: &str = "DGEXCESS_PRECISION";

/// Default number of significant decimal digits for high-precision paths.
pub const DEFAULT_DIGITS: u32 = 50;

/// Fractional bits used when two integer-valued operands are divided.
const FALLBACK_BITS: u32 = 256;

const GUARD_BITS: u32 = 64;

/// Working precision for the numeric (non-rational) code paths.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Precision {
    pub digits: u32,
}

impl Default for Precision {
    fn default() -> Self {
        Precision {
            digits: DEFAULT_DIGITS,
        }
    }
}

impl Precision {
    pub fn new(digits: u32) -> Self {
        Precision {
            digits: digits.max(16),
        }
    }

    /// Reads [`PRECISION_ENV`], falling back to the default on absence or
    /// garbage.
    pub fn from_env() -> Self {
        std::env::var(PRECISION_ENV)
            .ok()
            .and_then(|v| v.trim().parse::<u32>().ok())
            .map(Precision::new)
            .unwrap_or_default()
    }

    /// Fractional bits: digits * log2(10) plus guard bits.
    pub fn bits(&self) -> u32 {
        ((self.digits as f64) * std::f64::consts::LOG2_10).ceil() as u32 + GUARD_BITS
    }

    /// Absolute error scale `2^-(bits - guard)`, handy as a tolerance.
    pub fn epsilon(&self) -> Fixed {
        Fixed::from_parts(BigInt::one(), self.bits() - GUARD_BITS / 2).with_bits(self.bits())
    }
}

#[derive(Clone)]
pub struct Fixed {
    mantissa: BigInt,
    bits: u32,
}

pub type HpComplex = Complex<Fixed>;

impl Fixed {
    /// `mantissa / 2^bits`.
    pub fn from_parts(mantissa: BigInt, bits: u32) -> Self {
        Fixed { mantissa, bits }
    }

    pub fn from_int(n: i64, bits: u32) -> Self {
        Fixed {
            mantissa: BigInt::from(n) << bits as usize,
            bits,
        }
    }

    pub fn from_bigint(n: &BigInt, bits: u32) -> Self {
        Fixed {
            mantissa: n << bits as usize,
            bits,
        }
    }

    /// Nearest fixed-point value to `r`.
    pub fn from_rational(r: &BigRational, bits: u32) -> Self {
        let scaled = r.numer() << bits as usize;
        Fixed {
            mantissa: div_round(&scaled, r.denom()),
            bits,
        }
    }

    /// Exact conversion of a finite `f64` (then rounded to `bits`).
    pub fn from_f64(x: f64, bits: u32) -> Self {
        assert!(x.is_finite(), "non-finite f64 in Fixed::from_f64");
        if x == 0.0 {
            return Fixed::from_int(0, bits);
        }
        let raw = x.to_bits();
        let sign = if raw >> 63 == 1 { -1 } else { 1 };
        let exp = ((raw >> 52) & 0x7ff) as i64;
        let frac = raw & ((1u64 << 52) - 1);
        let (m, e) = if exp == 0 {
            (frac, -1074)
        } else {
            (frac | (1u64 << 52), exp - 1075)
        };
        let m = BigInt::from(m) * sign;
        let r = if e >= 0 {
            BigRational::from_integer(m << e as usize)
        } else {
            BigRational::new(m, BigInt::one() << (-e) as usize)
        };
        Fixed::from_rational(&r, bits)
    }

    pub fn bits(&self) -> u32 {
        self.bits
    }

    pub fn mantissa(&self) -> &BigInt {
        &self.mantissa
    }

    /// Re-expresses the value with `bits` fractional bits (rounding when
    /// precision drops).
    pub fn with_bits(&self, bits: u32) -> Self {
        match bits.cmp(&self.bits) {
            Ordering::Equal => self.clone(),
            Ordering::Greater => Fixed {
                mantissa: &self.mantissa << (bits - self.bits) as usize,
                bits,
            },
            Ordering::Less => Fixed {
                mantissa: shr_round(&self.mantissa, self.bits - bits),
                bits,
            },
        }
    }

    /// The exact rational value of this fixed-point number.
    pub fn to_rational(&self) -> BigRational {
        BigRational::new(self.mantissa.clone(), BigInt::one() << self.bits as usize)
    }

    pub fn to_f64(&self) -> f64 {
        rational_to_f64(&self.to_rational())
    }

    pub fn abs(&self) -> Self {
        Fixed {
            mantissa: self.mantissa.abs(),
            bits: self.bits,
        }
    }

    pub fn is_negative(&self) -> bool {
        self.mantissa.is_negative()
    }

    fn aligned(&self, other: &Fixed) -> (BigInt, BigInt, u32) {
        let bits = self.bits.max(other.bits);
        let a = &self.mantissa << (bits - self.bits) as usize;
        let b = &other.mantissa << (bits - other.bits) as usize;
        (a, b, bits)
    }

    /// Newton square root of a non-negative value, at the operand's
    /// precision.
    pub fn sqrt(&self) -> Fixed {
        assert!(!self.is_negative(), "sqrt of negative Fixed");
        let bits = if self.bits == 0 {
            FALLBACK_BITS
        } else {
            self.bits
        };
        let x = self.with_bits(bits);
        // sqrt(m / 2^b) = sqrt(m * 2^b) / 2^b
        let radicand = x.mantissa << bits as usize;
        Fixed {
            mantissa: radicand.sqrt(),
            bits,
        }
    }
}

fn div_round(num: &BigInt, den: &BigInt) -> BigInt {
    // round half away from zero
    let (q, r) = num.div_rem(den);
    let twice = r.abs() * 2;
    if twice >= den.abs() {
        if num.is_negative() != den.is_negative() {
            q - 1
        } else {
            q + 1
        }
    } else {
        q
    }
}

fn shr_round(m: &BigInt, shift: u32) -> BigInt {
    if shift == 0 {
        return m.clone();
    }
    div_round(m, &(BigInt::one() << shift as usize))
}

impl fmt::Debug for Fixed {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Fixed({:e}; {} bits)", self.to_f64(), self.bits)
    }
}

impl fmt::Display for Fixed {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let digits = ((self.bits as f64) / std::f64::consts::LOG2_10).floor() as usize;
        write!(
            f,
            "{}",
            crate::scalar::rational_to_decimal(&self.to_rational(), digits.min(60))
        )
    }
}

impl PartialEq for Fixed {
    fn eq(&self, other: &Self) -> bool {
        let (a, b, _) = self.aligned(other);
        a == b
    }
}

impl Eq for Fixed {}

impl PartialOrd for Fixed {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Fixed {
    fn cmp(&self, other: &Self) -> Ordering {
        let (a, b, _) = self.aligned(other);
        a.cmp(&b)
    }
}

impl Add for Fixed {
    type Output = Fixed;
    fn add(self, rhs: Fixed) -> Fixed {
        &self + &rhs
    }
}

impl<'a> Add<&'a Fixed> for &'a Fixed {
    type Output = Fixed;
    fn add(self, rhs: &Fixed) -> Fixed {
        let (a, b, bits) = self.aligned(rhs);
        Fixed {
            mantissa: a + b,
            bits,
        }
    }
}

impl Sub for Fixed {
    type Output = Fixed;
    fn sub(self, rhs: Fixed) -> Fixed {
        &self - &rhs
    }
}

impl<'a> Sub<&'a Fixed> for &'a Fixed {
    type Output = Fixed;
    fn sub(self, rhs: &Fixed) -> Fixed {
        let (a, b, bits) = self.aligned(rhs);
        Fixed {
            mantissa: a - b,
            bits,
        }
    }
}

impl Mul for Fixed {
    type Output = Fixed;
    fn mul(self, rhs: Fixed) -> Fixed {
        &self * &rhs
    }
}

impl<'a> Mul<&'a Fixed> for &'a Fixed {
    type Output = Fixed;
    fn mul(self, rhs: &Fixed) -> Fixed {
        let target = self.bits.max(rhs.bits);
        let product = &self.mantissa * &rhs.mantissa;
        Fixed {
            mantissa: shr_round(&product, self.bits + rhs.bits - target),
            bits: target,
        }
    }
}

impl Div for Fixed {
    type Output = Fixed;
    fn div(self, rhs: Fixed) -> Fixed {
        &self / &rhs
    }
}

impl<'a> Div<&'a Fixed> for &'a Fixed {
    type Output = Fixed;
    fn div(self, rhs: &Fixed) -> Fixed {
        assert!(!rhs.mantissa.is_zero(), "Fixed division by zero");
        let mut target = self.bits.max(rhs.bits);
        if target == 0 {
            target = FALLBACK_BITS;
        }
        // (a/2^p) / (b/2^q) = a * 2^(q - p) / b ; scaled by 2^target
        let shift = target as i64 + rhs.bits as i64 - self.bits as i64;
        let num = if shift >= 0 {
            &self.mantissa << shift as usize
        } else {
            &self.mantissa >> (-shift) as usize
        };
        Fixed {
            mantissa: div_round(&num, &rhs.mantissa),
            bits: target,
        }
    }
}

impl Rem for Fixed {
    type Output = Fixed;
    fn rem(self, rhs: Fixed) -> Fixed {
        let q = &self / &rhs;
        let truncated = Fixed::from_bigint(&(&q.mantissa >> q.bits as usize), 0);
        &self - &(&truncated * &rhs)
    }
}

impl Neg for Fixed {
    type Output = Fixed;
    fn neg(self) -> Fixed {
        Fixed {
            mantissa: -self.mantissa,
            bits: self.bits,
        }
    }
}

impl Zero for Fixed {
    fn zero() -> Self {
        Fixed {
            mantissa: BigInt::zero(),
            bits: 0,
        }
    }
    fn is_zero(&self) -> bool {
        self.mantissa.is_zero()
    }
}

impl One for Fixed {
    fn one() -> Self {
        Fixed {
            mantissa: BigInt::one(),
            bits: 0,
        }
    }
}

impl Num for Fixed {
    type FromStrRadixErr = num_bigint::ParseBigIntError;
    fn from_str_radix(s: &str, radix: u32) -> Result<Self, Self::FromStrRadixErr> {
        Ok(Fixed::from_parts(BigInt::from_str_radix(s, radix)?, 0))
    }
}

impl ToF64 for Fixed {
    fn to_f64_lossy(&self) -> f64 {
        self.to_f64()
    }
}

impl ToPrimitive for Fixed {
    fn to_i64(&self) -> Option<i64> {
        (&self.mantissa >> self.bits as usize).to_i64()
    }
    fn to_u64(&self) -> Option<u64> {
        (&self.mantissa >> self.bits as usize).to_u64()
    }
    fn to_f64(&self) -> Option<f64> {
        Some(Fixed::to_f64(self))
    }
}

/// Modulus of a high-precision complex number.
pub fn complex_abs(z: &HpComplex) -> Fixed {
    z.norm_sqr().sqrt()
}

pub fn complex_to_f64(z: &HpComplex) -> Complex<f64> {
    Complex::new(z.re.to_f64(), z.im.to_f64())
}

pub fn complex_from_f64(z: Complex<f64>, bits: u32) -> HpComplex {
    Complex::new(Fixed::from_f64(z.re, bits), Fixed::from_f64(z.im, bits))
}

/// A real quantity that is either certified exact or a high-precision
/// approximation.
#[derive(Clone, Debug, PartialEq)]
pub enum RealValue {
    Exact(BigRational),
    Numeric(Fixed),
}

impl RealValue {
    pub fn is_exact(&self) -> bool {
        matches!(self, RealValue::Exact(_))
    }

    /// Exact rational for `Exact`, the fixed-point value read as a
    /// rational otherwise.
    pub fn to_rational(&self) -> BigRational {
        match self {
            RealValue::Exact(r) => r.clone(),
            RealValue::Numeric(x) => x.to_rational(),
        }
    }

    pub fn to_fixed(&self, bits: u32) -> Fixed {
        match self {
            RealValue::Exact(r) => Fixed::from_rational(r, bits),
            RealValue::Numeric(x) => x.with_bits(bits),
        }
    }

    pub fn to_f64(&self) -> f64 {
        match self {
            RealValue::Exact(r) => rational_to_f64(r),
            RealValue::Numeric(x) => x.to_f64(),
        }
    }
}

/// `{"value": "p/q" or decimal, "exact": bool}`.
impl serde::Serialize for RealValue {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        use serde::ser::SerializeStruct;
        let mut st = serializer.serialize_struct("RealValue", 2)?;
        st.serialize_field("value", &self.to_string())?;
        st.serialize_field("exact", &self.is_exact())?;
        st.end()
    }
}

impl fmt::Display for RealValue {
    /// `p/q` when exact, a decimal expansion otherwise.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            RealValue::Exact(r) => write!(f, "{}", crate::scalar::fmt_rational(r)),
            RealValue::Numeric(x) => write!(f, "{x}"),
        }
    }
}
