//! Scalar abstraction shared by the dense matrix and polynomial types, plus
//! helpers for the exact rational scalar.

use std::fmt::Debug;
use std::ops::Neg;

use num_bigint::{BigInt, Sign};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{Num, One, Signed, ToPrimitive, Zero};

/// Anything the generic linear algebra can run over: `f64`, `BigInt`,
/// `BigRational`, [`crate::hp::Fixed`] and their `Complex<_>` wrappers.
pub trait Scalar: Clone + Debug + Num + Neg<Output = Self> {}

impl<T> Scalar for T where T: Clone + Debug + Num + Neg<Output = T> {}

/// Conversion into the scalar types used for approximate comparisons.
pub trait ToF64 {
    fn to_f64_lossy(&self) -> f64;
}

impl ToF64 for f64 {
    fn to_f64_lossy(&self) -> f64 {
        *self
    }
}

impl ToF64 for BigInt {
    fn to_f64_lossy(&self) -> f64 {
        self.to_f64().unwrap_or(f64::NAN)
    }
}

impl ToF64 for BigRational {
    fn to_f64_lossy(&self) -> f64 {
        rational_to_f64(self)
    }
}

/// Converts a rational to the nearest-ish `f64`, staying accurate when
/// numerator and denominator individually overflow `f64`.
pub fn rational_to_f64(r: &BigRational) -> f64 {
    if r.is_zero() {
        return 0.0;
    }
    let num = r.numer();
    let den = r.denom();
    let nb = num.bits() as i64;
    let db = den.bits() as i64;
    // Scale so the quotient carries 64 significant bits.
    let shift = 64 - (nb - db);
    let q = if shift >= 0 {
        (num << (shift as usize)) / den
    } else {
        num / (den << ((-shift) as usize))
    };
    let mut value = q.to_f64().unwrap_or(f64::NAN);
    let mut exp = -shift;
    while exp > 1000 {
        value *= 2f64.powi(1000);
        exp -= 1000;
    }
    while exp < -1000 {
        value *= 2f64.powi(-1000);
        exp += 1000;
    }
    value * 2f64.powi(exp as i32)
}

pub fn rat(n: i64, d: i64) -> BigRational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

pub fn rat_int(n: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(n))
}

pub fn rat_from_big(n: &BigInt) -> BigRational {
    BigRational::from_integer(n.clone())
}

/// `p/q` rendering used in reports; integers keep the explicit `/1`.
pub fn fmt_rational(r: &BigRational) -> String {
    format!("{}/{}", r.numer(), r.denom())
}

/// Parses `p/q` or a bare integer.
pub fn parse_rational(s: &str) -> Option<BigRational> {
    let s = s.trim();
    match s.split_once('/') {
        Some((p, q)) => {
            let p: BigInt = p.trim().parse().ok()?;
            let q: BigInt = q.trim().parse().ok()?;
            if q.is_zero() {
                None
            } else {
                Some(BigRational::new(p, q))
            }
        }
        None => Some(BigRational::from_integer(s.parse().ok()?)),
    }
}

/// Decimal rendering of a rational with `digits` fractional digits, rounded
/// half away from zero.
pub fn rational_to_decimal(r: &BigRational, digits: usize) -> String {
    let scale = num_traits::pow(BigInt::from(10), digits);
    let scaled = r * BigRational::from_integer(scale.clone());
    let rounded = round_half_away(&scaled);
    let negative = rounded.sign() == Sign::Minus;
    let abs = rounded.abs();
    let (int_part, frac_part) = abs.div_rem(&scale);
    let mut out = String::new();
    if negative {
        out.push('-');
    }
    out.push_str(&int_part.to_string());
    if digits > 0 {
        let frac = frac_part.to_string();
        out.push('.');
        for _ in frac.len()..digits {
            out.push('0');
        }
        out.push_str(&frac);
    }
    out
}

pub fn round_half_away(r: &BigRational) -> BigInt {
    let half = BigRational::new(BigInt::one(), BigInt::from(2));
    let magnitude = (r.abs() + half).floor().to_integer();
    if r.is_negative() {
        -magnitude
    } else {
        magnitude
    }
}

/// Nearest integer, ties toward +infinity (only used for candidates).
pub fn round_nearest(r: &BigRational) -> BigInt {
    (r + BigRational::new(BigInt::one(), BigInt::from(2))).floor().to_integer()
}

pub fn abs_rational(r: &BigRational) -> BigRational {
    r.abs()
}
