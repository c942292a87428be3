//! Pre-distance polynomials (trace and spectral routes), the conjugation
//! polynomial `f` with `f(A) = A^T`, and the Hoffman polynomial.

use num_bigint::BigInt;
use num_complex::Complex;
use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::distance::DeltaProfile;
use crate::error::{Error, Result};
use crate::hp::{complex_to_f64, Fixed, HpComplex, RealValue};
use crate::linalg::{gram_schmidt, trace_orthogonalization, Orthogonalization, PowerCache};
use crate::matrix::Matrix;
use crate::poly::Poly;
use crate::scalar::Scalar;
use crate::spectrum::{hoffman_ingredients, HoffmanIngredients, Spectrum};

/// Monic orthogonal polynomials `p_0 .. p_{D^}` with their squared norms.
///
/// `scale2[k] = c_k^2` normalizes `P_k = c_k p_k` so that `||P_k||^2 =
/// delta_k` for `k <= D`; `c_k^2 = 1` above the diameter. Only the square
/// is ever stored, which keeps every projection sum rational.
#[derive(Clone, Debug, PartialEq)]
pub struct PredistanceBasis<T> {
    pub monic: Vec<Poly<T>>,
    pub norms2: Vec<T>,
    pub scale2: Option<Vec<T>>,
}

pub type ExactBasis = PredistanceBasis<BigRational>;

impl<T: Scalar> PredistanceBasis<T> {
    /// Highest degree in the basis.
    pub fn top_degree(&self) -> usize {
        self.monic.len() - 1
    }

    /// `Q_k = p_0 + ... + p_k`.
    pub fn q_partial(&self, k: usize) -> Poly<T> {
        self.monic[..=k].iter().fold(Poly::zero(), |acc, p| acc.add(p))
    }

    /// `||Q_k||^2 = sum_{i <= k} ||p_i||^2` by orthogonality.
    pub fn q_norm2(&self, k: usize) -> T {
        self.norms2[..=k].iter().cloned().fold(T::zero(), |a, b| a + b)
    }
}

impl ExactBasis {
    /// Attaches `c_k^2 = delta_k / ||p_k||^2` for `k <= D`.
    pub fn normalized(mut self, profile: &DeltaProfile) -> Self {
        let scale2 = self
            .norms2
            .iter()
            .enumerate()
            .map(|(k, norm)| match profile.delta.get(k) {
                Some(delta) => delta / norm,
                None => BigRational::one(),
            })
            .collect();
        self.scale2 = Some(scale2);
        self
    }
}

/// Trace-route basis and minimal polynomial: Gram-Schmidt over `A^i` with
/// exact inner products, normalized by `profile`.
pub fn predistance_polynomials(
    cache: &mut PowerCache,
    profile: &DeltaProfile,
) -> Result<(ExactBasis, Poly<BigRational>)> {
    let Orthogonalization {
        monic,
        norms2,
        terminal,
    } = trace_orthogonalization(cache)?;
    let minimal = terminal.expect("trace orthogonalization ends at the minimal polynomial");
    if profile.delta.len() > monic.len() {
        // D <= D^ always; anything else means the inputs disagree
        return Err(Error::DegenerateBasis { degree: monic.len() });
    }
    let basis = PredistanceBasis {
        monic,
        norms2,
        scale2: None,
    }
    .normalized(profile);
    Ok((basis, minimal))
}

/// Table of `<x^i, x^j>_spec = (1/n) sum_l m_l lambda_l^i conj(lambda_l)^j`
/// for `i, j <= max`, realified after checking the imaginary residue.
pub fn spectral_gram(spec: &Spectrum, max: usize) -> Result<Vec<Vec<Fixed>>> {
    if !spec.is_conjugate_closed() {
        return Err(Error::NotConjugateClosed);
    }
    let bits = spec.bits();
    let n = Fixed::from_int(spec.n() as i64, bits);
    let powers: Vec<Vec<HpComplex>> = spec
        .distinct()
        .iter()
        .map(|e| {
            let mut row = vec![Complex::new(Fixed::from_int(1, bits), Fixed::from_int(0, bits))];
            for k in 1..=max {
                let next = row[k - 1].clone() * e.value.clone();
                row.push(next);
            }
            row
        })
        .collect();
    let mut table = vec![vec![Fixed::zero(); max + 1]; max + 1];
    for i in 0..=max {
        for j in i..=max {
            let mut sum = Complex::new(Fixed::zero(), Fixed::zero());
            for (e, row) in spec.distinct().iter().zip(&powers) {
                let m = Fixed::from_int(e.multiplicity as i64, 0);
                let term = row[i].clone() * row[j].conj();
                sum = sum + Complex::new(term.re * m.clone(), term.im * m);
            }
            let re = sum.re / n.clone();
            let im = sum.im / n.clone();
            check_imaginary(&re, &im)?;
            table[i][j] = re.clone();
            table[j][i] = re;
        }
    }
    Ok(table)
}

const IMAGINARY_TOL: f64 = 1e-8;

fn check_imaginary(re: &Fixed, im: &Fixed) -> Result<()> {
    let scale = re.to_f64().abs().max(1.0);
    let residual = im.to_f64().abs();
    if residual > IMAGINARY_TOL * scale {
        return Err(Error::ImaginaryResidual {
            residual,
            tolerance: IMAGINARY_TOL * scale,
        });
    }
    Ok(())
}

/// `(1/n) sum_i m_i p(lambda_i) q(conj lambda_i)` for real-coefficient
/// `p`, `q`; the imaginary part must vanish.
pub fn spectral_inner_product(p: &Poly<Fixed>, q: &Poly<Fixed>, spec: &Spectrum) -> Result<Fixed> {
    if !spec.is_conjugate_closed() {
        return Err(Error::NotConjugateClosed);
    }
    let lift = |poly: &Poly<Fixed>| poly.map(|c| Complex::new(c.clone(), Fixed::zero()));
    let (pc, qc) = (lift(p), lift(q));
    let mut sum = Complex::new(Fixed::zero(), Fixed::zero());
    for e in spec.distinct() {
        let m = Complex::new(Fixed::from_int(e.multiplicity as i64, 0), Fixed::zero());
        sum = sum + pc.eval(&e.value) * qc.eval(&e.value.conj()) * m;
    }
    let n = Fixed::from_int(spec.n() as i64, spec.bits());
    let (re, im) = (sum.re / n.clone(), sum.im / n);
    check_imaginary(&re, &im)?;
    Ok(re)
}

/// The spectral route: the same Gram-Schmidt recursion with inner products
/// taken from the spectrum, up to degree `d`.
pub fn spectral_predistance(spec: &Spectrum) -> Result<PredistanceBasis<Fixed>> {
    let d = spec.d();
    let gram = spectral_gram(spec, d)?;
    let tiny = Fixed::from_parts(BigInt::one(), spec.bits() / 2);
    let o = gram_schmidt(d, |i, j| gram[i][j].clone(), |_| false);
    if let Some(k) = o.norms2.iter().position(|v| *v <= tiny) {
        return Err(Error::DegenerateBasis { degree: k });
    }
    Ok(PredistanceBasis {
        monic: o.monic,
        norms2: o.norms2,
        scale2: None,
    })
}

/// Largest coefficient gap between the two routes, over common degrees.
pub fn coefficient_deviation(exact: &ExactBasis, spectral: &PredistanceBasis<Fixed>) -> f64 {
    let mut worst: f64 = 0.0;
    for (p, q) in exact.monic.iter().zip(&spectral.monic) {
        let len = p.coeffs().len().max(q.coeffs().len());
        for k in 0..len {
            let bits = q.coeff(k).bits().max(64);
            let diff = &Fixed::from_rational(&p.coeff(k), bits) - &q.coeff(k);
            worst = worst.max(diff.to_f64().abs());
        }
    }
    for (a, b) in exact.norms2.iter().zip(&spectral.norms2) {
        let diff = &Fixed::from_rational(a, b.bits().max(64)) - b;
        worst = worst.max(diff.to_f64().abs());
    }
    worst
}

/// Lagrange interpolant `f` of degree `<= d` with `f(lambda_j) =
/// conj(lambda_j)`.
pub fn conjugation_polynomial(spec: &Spectrum) -> Result<Poly<HpComplex>> {
    let bits = spec.bits();
    let nodes: Vec<HpComplex> = spec.distinct().iter().map(|e| e.value.clone()).collect();
    let tiny = Fixed::from_parts(BigInt::one(), bits / 2);
    let one = Complex::new(Fixed::from_int(1, bits), Fixed::from_int(0, bits));
    let mut omega: Poly<HpComplex> = Poly::constant(one);
    for z in &nodes {
        omega = omega.mul(&Poly::new(vec![-z.clone(), Complex::new(Fixed::one(), Fixed::zero())]));
    }
    let mut f: Poly<HpComplex> = Poly::zero();
    for (j, z) in nodes.iter().enumerate() {
        for w in &nodes[j + 1..] {
            if (z.clone() - w.clone()).norm_sqr() <= &tiny * &tiny {
                return Err(Error::CoincidentEigenvalues);
            }
        }
        let (basis, _) = omega.div_linear(z);
        let weight = z.conj() / basis.eval(z);
        f = f.add(&basis.scale(&weight));
    }
    Ok(f)
}

/// `max_{u,v} |f(A)_{uv} - A_{vu}|`, with `f(A)` summed over exact integer
/// powers.
pub fn conjugation_residual(f: &Poly<HpComplex>, cache: &mut PowerCache) -> f64 {
    let n = cache.dim();
    let degree = f.degree().unwrap_or(0);
    cache.ensure(degree.max(1));
    let powers = cache.computed();
    let a = &powers[1];
    let mut worst: f64 = 0.0;
    for u in 0..n {
        for v in 0..n {
            let mut acc = Complex::new(Fixed::zero(), Fixed::zero());
            for (k, c) in f.coeffs().iter().enumerate() {
                let entry = powers[k].get(u, v);
                if entry.is_zero() {
                    continue;
                }
                let e = Fixed::from_bigint(entry, 0);
                acc = acc + Complex::new(&c.re * &e, &c.im * &e);
            }
            let target = Fixed::from_bigint(a.get(v, u), 0);
            let diff = complex_to_f64(&Complex::new(&acc.re - &target, acc.im.clone())).norm();
            worst = worst.max(diff);
        }
    }
    worst
}

/// `H(x) = n S(x) / S(lambda0)`.
#[derive(Clone, Debug, PartialEq)]
pub enum HoffmanPolynomial {
    Exact(Poly<BigRational>),
    Numeric(Poly<Fixed>),
}

impl HoffmanPolynomial {
    pub fn is_exact(&self) -> bool {
        matches!(self, HoffmanPolynomial::Exact(_))
    }

    pub fn degree(&self) -> Option<usize> {
        match self {
            HoffmanPolynomial::Exact(p) => p.degree(),
            HoffmanPolynomial::Numeric(p) => p.degree(),
        }
    }

    /// Coefficients as rationals (the exact binary value of fixed-point
    /// coefficients).
    pub fn rational(&self) -> Poly<BigRational> {
        match self {
            HoffmanPolynomial::Exact(p) => p.clone(),
            HoffmanPolynomial::Numeric(p) => p.map(Fixed::to_rational),
        }
    }

    pub fn eval(&self, x: &RealValue, bits: u32) -> RealValue {
        match (self, x) {
            (HoffmanPolynomial::Exact(p), RealValue::Exact(r)) => RealValue::Exact(p.eval(r)),
            (HoffmanPolynomial::Exact(p), RealValue::Numeric(v)) => {
                RealValue::Numeric(p.map(|c| Fixed::from_rational(c, bits)).eval(v))
            }
            (HoffmanPolynomial::Numeric(p), _) => RealValue::Numeric(p.eval(&x.to_fixed(bits))),
        }
    }

    /// `H(A)`, computed exactly from the (possibly rounded) coefficients.
    pub fn matrix(&self, cache: &mut PowerCache) -> Matrix<BigRational> {
        evaluate_with_common_denominator(&self.rational(), cache)
    }
}

/// `p(A)` as integer combinations over one common denominator.
pub fn evaluate_with_common_denominator(p: &Poly<BigRational>, cache: &mut PowerCache) -> Matrix<BigRational> {
    let n = cache.dim();
    let denom = p
        .coeffs()
        .iter()
        .fold(BigInt::one(), |acc, c| num_integer::lcm(acc, c.denom().clone()));
    let ints: Vec<BigInt> = p
        .coeffs()
        .iter()
        .map(|c| (c * BigRational::from_integer(denom.clone())).to_integer())
        .collect();
    cache.ensure(ints.len().max(1) - 1);
    let powers = cache.computed();
    let mut acc: Matrix<BigInt> = Matrix::zeros(n);
    for (k, c) in ints.iter().enumerate() {
        if c.is_zero() {
            continue;
        }
        acc = &acc + &powers[k].scale(c);
    }
    acc.map(|v| BigRational::new(v.clone(), denom.clone()))
}

pub fn hoffman_polynomial(spec: &Spectrum) -> Result<HoffmanPolynomial> {
    let n = spec.n() as i64;
    let h = hoffman_ingredients(spec.minimal_polynomial(), spec.lambda0(), spec.bits())?;
    Ok(match h {
        HoffmanIngredients::Exact { quotient, at_lambda0 } => {
            let factor = BigRational::from_integer(BigInt::from(n)) / at_lambda0;
            HoffmanPolynomial::Exact(quotient.scale(&factor))
        }
        HoffmanIngredients::Numeric { quotient, at_lambda0 } => {
            let factor = Fixed::from_int(n, spec.bits()) / at_lambda0;
            HoffmanPolynomial::Numeric(quotient.scale(&factor))
        }
    })
}
