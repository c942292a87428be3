//! Dense univariate polynomials over any [`Scalar`].

use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::matrix::Matrix;
use crate::scalar::Scalar;

/// Coefficients `c_0, c_1, ..., c_m` (lowest degree first). Trailing exact
/// zeros are trimmed, so the zero polynomial has no coefficients.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Poly<T> {
    coeffs: Vec<T>,
}

impl<T: Scalar> Poly<T> {
    pub fn new(mut coeffs: Vec<T>) -> Self {
        while coeffs.last().is_some_and(Zero::is_zero) {
            coeffs.pop();
        }
        Poly { coeffs }
    }

    pub fn zero() -> Self {
        Poly { coeffs: Vec::new() }
    }

    pub fn one() -> Self {
        Self::constant(T::one())
    }

    pub fn constant(c: T) -> Self {
        Self::new(vec![c])
    }

    /// `x^k`.
    pub fn monomial(k: usize) -> Self {
        let mut coeffs = vec![T::zero(); k + 1];
        coeffs[k] = T::one();
        Poly { coeffs }
    }

    pub fn coeffs(&self) -> &[T] {
        &self.coeffs
    }

    /// Coefficient of `x^k` (zero beyond the degree).
    pub fn coeff(&self, k: usize) -> T {
        self.coeffs.get(k).cloned().unwrap_or_else(T::zero)
    }

    /// `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn leading(&self) -> Option<&T> {
        self.coeffs.last()
    }

    pub fn is_monic(&self) -> bool {
        self.leading().is_some_and(One::is_one)
    }

    pub fn map<U: Scalar>(&self, f: impl FnMut(&T) -> U) -> Poly<U> {
        Poly::new(self.coeffs.iter().map(f).collect())
    }

    /// Horner evaluation.
    pub fn eval(&self, x: &T) -> T {
        self.coeffs
            .iter()
            .rev()
            .fold(T::zero(), |acc, c| acc * x.clone() + c.clone())
    }

    /// Horner evaluation at a square matrix.
    pub fn eval_matrix(&self, a: &Matrix<T>) -> Matrix<T> {
        let n = a.dim();
        let mut acc = Matrix::zeros(n);
        for c in self.coeffs.iter().rev() {
            acc = &acc.matmul(a) + &Matrix::identity(n).scale(c);
        }
        acc
    }

    pub fn scale(&self, s: &T) -> Self {
        Self::new(self.coeffs.iter().map(|c| c.clone() * s.clone()).collect())
    }

    pub fn add(&self, other: &Self) -> Self {
        let len = self.coeffs.len().max(other.coeffs.len());
        Self::new((0..len).map(|k| self.coeff(k) + other.coeff(k)).collect())
    }

    pub fn sub(&self, other: &Self) -> Self {
        let len = self.coeffs.len().max(other.coeffs.len());
        Self::new((0..len).map(|k| self.coeff(k) - other.coeff(k)).collect())
    }

    pub fn mul(&self, other: &Self) -> Self {
        if self.is_zero() || other.is_zero() {
            return Self::zero();
        }
        let mut out = vec![T::zero(); self.coeffs.len() + other.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            for (j, b) in other.coeffs.iter().enumerate() {
                out[i + j] = out[i + j].clone() + a.clone() * b.clone();
            }
        }
        Self::new(out)
    }

    pub fn derivative(&self) -> Self {
        let mut out = Vec::with_capacity(self.coeffs.len().saturating_sub(1));
        let mut k = T::zero();
        for c in self.coeffs.iter() {
            if !k.is_zero() {
                out.push(c.clone() * k.clone());
            }
            k = k + T::one();
        }
        Self::new(out)
    }

    /// Synthetic division by `(x - root)`: returns quotient and remainder.
    pub fn div_linear(&self, root: &T) -> (Self, T) {
        if self.coeffs.is_empty() {
            return (Self::zero(), T::zero());
        }
        let m = self.coeffs.len() - 1;
        let mut q = vec![T::zero(); m];
        let mut carry = T::zero();
        for k in (0..=m).rev() {
            let v = self.coeffs[k].clone() + carry.clone() * root.clone();
            if k == 0 {
                return (Self::new(q), v);
            }
            q[k - 1] = v.clone();
            carry = v;
        }
        unreachable!()
    }

    /// Long division; exact for field scalars.
    pub fn div_rem(&self, divisor: &Self) -> (Self, Self) {
        let d_deg = divisor.degree().expect("division by zero polynomial");
        let lead = divisor.leading().unwrap().clone();
        let mut rem = self.coeffs.clone();
        if rem.len() <= d_deg {
            return (Self::zero(), self.clone());
        }
        let mut q = vec![T::zero(); rem.len() - d_deg];
        for k in (d_deg..rem.len()).rev() {
            let factor = rem[k].clone() / lead.clone();
            if factor.is_zero() {
                continue;
            }
            for (i, c) in divisor.coeffs.iter().enumerate() {
                let idx = k - d_deg + i;
                rem[idx] = rem[idx].clone() - factor.clone() * c.clone();
            }
            q[k - d_deg] = factor;
        }
        rem.truncate(d_deg);
        (Self::new(q), Self::new(rem))
    }

    /// Rescales to a monic polynomial (zero stays zero).
    pub fn monic(&self) -> Self {
        match self.leading() {
            Some(l) => {
                let inv = T::one() / l.clone();
                self.scale(&inv)
            }
            None => Self::zero(),
        }
    }

    /// Monic gcd by Euclid; meaningful for exact field scalars.
    pub fn gcd(&self, other: &Self) -> Self {
        let mut a = self.clone();
        let mut b = other.clone();
        while !b.is_zero() {
            let (_, r) = a.div_rem(&b);
            a = b;
            b = r;
        }
        a.monic()
    }
}

/// Squarefree part `p / gcd(p, p')`, monic. Its roots are the distinct roots
/// of `p`, each simple.
pub fn squarefree_part(p: &Poly<BigRational>) -> Poly<BigRational> {
    if p.degree().unwrap_or(0) == 0 {
        return p.monic();
    }
    let g = p.gcd(&p.derivative());
    p.div_rem(&g).0.monic()
}

/// Splits `p = x^v * q` with `q(0) != 0` and returns `(v, q)` as the
/// primitive integer form of `q` (denominators cleared).
fn integer_form(p: &Poly<BigRational>) -> (usize, Vec<BigInt>) {
    let v = p.coeffs().iter().take_while(|c| c.is_zero()).count();
    let tail = &p.coeffs()[v..];
    let lcm = tail
        .iter()
        .fold(BigInt::one(), |acc, c| num_integer::lcm(acc, c.denom().clone()));
    let ints = tail
        .iter()
        .map(|c| (c * BigRational::from_integer(lcm.clone())).to_integer())
        .collect();
    (v, ints)
}

/// Rational-root test for one candidate: `k` is a root of `p` iff it passes
/// the divisor condition on the integer form and `p(k) = 0` exactly.
pub fn is_rational_root(p: &Poly<BigRational>, k: &BigRational) -> bool {
    if p.is_zero() {
        return true;
    }
    let (v, ints) = integer_form(p);
    if k.is_zero() {
        return v > 0;
    }
    let constant = &ints[0];
    let lead = ints.last().unwrap();
    // k = a/b in lowest terms must have a | constant and b | lead
    if !(constant % k.numer()).is_zero() || !(lead % k.denom()).is_zero() {
        return false;
    }
    p.eval(k).is_zero()
}

/// All integer roots, by trial of the divisors of the constant term of the
/// deflated integer form. Only used on small polynomials in tests and
/// diagnostics; constant terms beyond `u32` range are skipped.
pub fn integer_roots(p: &Poly<BigRational>) -> Vec<BigInt> {
    use num_traits::ToPrimitive;
    let mut roots = Vec::new();
    if p.is_zero() {
        return roots;
    }
    let (v, ints) = integer_form(p);
    if v > 0 {
        roots.push(BigInt::zero());
    }
    if ints.len() > 1 {
        if let Some(c) = ints[0].abs().to_u64().filter(|&c| c <= u32::MAX as u64) {
            let mut d = 1u64;
            while d * d <= c {
                if c % d == 0 {
                    for cand in [d, c / d] {
                        for x in [BigInt::from(cand), -BigInt::from(cand)] {
                            let r = BigRational::from_integer(x.clone());
                            if !roots.contains(&x) && p.eval(&r).is_zero() {
                                roots.push(x);
                            }
                        }
                    }
                }
                d += 1;
            }
        }
    }
    roots.sort();
    roots
}

impl fmt::Display for Poly<BigRational> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (k, c) in self.coeffs.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            let neg = c.is_negative();
            let abs = c.abs();
            if first {
                if neg {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {} ", if neg { "-" } else { "+" })?;
            }
            first = false;
            let show_coeff = !abs.is_one() || k == 0;
            if show_coeff {
                if abs.is_integer() {
                    write!(f, "{}", abs.numer())?;
                } else {
                    write!(f, "{}/{}", abs.numer(), abs.denom())?;
                }
            }
            match k {
                0 => {}
                1 => write!(f, "x")?,
                _ => write!(f, "x^{}", k)?,
            }
        }
        Ok(())
    }
}
