//! The trace inner product `<C, D> = tr(C D^T) / n`, normality, power
//! traces, Gram-Schmidt over monomials and the minimal polynomial.

use std::collections::HashMap;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Zero;

use crate::digraph::Digraph;
use crate::error::{Error, Result};
use crate::matrix::Matrix;
use crate::poly::Poly;
use crate::scalar::Scalar;

/// `(1/n) tr(C D^T)` over exact rationals.
pub fn trace_inner_product(c: &Matrix<BigRational>, d: &Matrix<BigRational>) -> Result<BigRational> {
    if c.dim() != d.dim() {
        return Err(Error::DimensionMismatch(c.dim(), d.dim()));
    }
    Ok(c.frobenius_dot(d) / BigRational::from_integer(BigInt::from(c.dim())))
}

/// `(1/n) tr(C D^T)` for integer matrices, returned exactly.
pub fn integer_inner_product(c: &Matrix<BigInt>, d: &Matrix<BigInt>) -> Result<BigRational> {
    if c.dim() != d.dim() {
        return Err(Error::DimensionMismatch(c.dim(), d.dim()));
    }
    Ok(BigRational::new(c.frobenius_dot(d), BigInt::from(c.dim())))
}

/// `A A^T = A^T A`, decided on integers.
pub fn normality_test(g: &Digraph) -> bool {
    let a = g.adjacency_matrix();
    let at = a.transpose();
    a.matmul(&at) == at.matmul(&a)
}

/// `tr(A^0), ..., tr(A^max)`.
pub fn power_traces(g: &Digraph, max: usize) -> Vec<BigInt> {
    let a = g.adjacency_matrix();
    let mut out = Vec::with_capacity(max + 1);
    let mut p = Matrix::identity(g.n());
    out.push(p.trace());
    for _ in 0..max {
        p = p.matmul(&a);
        out.push(p.trace());
    }
    out
}

/// Extends `tr(A^0) ..` to `tr(A^max)` with the recurrence `m(A) = 0`;
/// `traces` must hold at least the first `deg m` values.
pub fn extend_traces(m: &Poly<BigRational>, traces: &[BigInt], max: usize) -> Vec<BigInt> {
    let r = m.degree().expect("minimal polynomial is non-constant");
    let mut t: Vec<BigRational> = traces.iter().map(|v| BigRational::from_integer(v.clone())).collect();
    while t.len() <= max {
        let k = t.len();
        let next = (0..r).fold(BigRational::zero(), |acc, j| acc - m.coeff(j) * &t[k - r + j]);
        t.push(next);
    }
    t.truncate(max + 1);
    // monic with integer coefficients, so every trace stays integral
    t.into_iter().map(|v| v.to_integer()).collect()
}

/// Integer powers of the adjacency matrix, extended on demand.
#[derive(Clone, Debug)]
pub struct PowerCache {
    base: Matrix<BigInt>,
    powers: Vec<Matrix<BigInt>>,
}

impl PowerCache {
    pub fn new(a: Matrix<BigInt>) -> Self {
        let id = Matrix::identity(a.dim());
        PowerCache {
            base: a,
            powers: vec![id],
        }
    }

    /// Reuses already computed `A^0..A^k`; `powers[1]` must be `A`.
    pub fn from_powers(powers: Vec<Matrix<BigInt>>, a: Matrix<BigInt>) -> Self {
        assert!(!powers.is_empty());
        PowerCache { base: a, powers }
    }

    pub fn dim(&self) -> usize {
        self.base.dim()
    }

    pub fn ensure(&mut self, k: usize) {
        while self.powers.len() <= k {
            let next = self.powers.last().unwrap().matmul(&self.base);
            self.powers.push(next);
        }
    }

    pub fn get(&mut self, k: usize) -> &Matrix<BigInt> {
        self.ensure(k);
        &self.powers[k]
    }

    /// Powers computed so far.
    pub fn computed(&self) -> &[Matrix<BigInt>] {
        &self.powers
    }

    /// `p(A)` as a linear combination of cached powers.
    pub fn eval(&mut self, p: &Poly<BigRational>) -> Matrix<BigRational> {
        let n = self.dim();
        if let Some(deg) = p.degree() {
            self.ensure(deg);
        }
        let mut out = Matrix::zeros(n);
        for (k, c) in p.coeffs().iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let term = self.powers[k].map(|v| BigRational::from_integer(v.clone()) * c);
            out = &out + &term;
        }
        out
    }
}

/// Monic orthogonal polynomials `p_0, p_1, ...` for a Gram function on
/// monomials, plus the first null residual when one is met.
#[derive(Clone, Debug, PartialEq)]
pub struct Orthogonalization<T> {
    pub monic: Vec<Poly<T>>,
    pub norms2: Vec<T>,
    /// The monic residual whose norm was null, if the loop stopped early.
    pub terminal: Option<Poly<T>>,
}

/// Gram-Schmidt over `1, x, x^2, ...` with `gram(i, j) = <x^i, x^j>`:
/// `p_{i+1} = x^{i+1} - sum_k <x^{i+1}, p_k> / <p_k, p_k> p_k`.
///
/// Stops after degree `max_degree` or at the first residual for which
/// `is_null` holds. For a monic orthogonal `p` of degree `m`,
/// `<p, p> = <x^m, p>`, which is how norms are taken.
pub fn gram_schmidt<T: Scalar>(
    max_degree: usize,
    mut gram: impl FnMut(usize, usize) -> T,
    is_null: impl Fn(&T) -> bool,
) -> Orthogonalization<T> {
    let mut monic: Vec<Poly<T>> = Vec::new();
    let mut norms2: Vec<T> = Vec::new();
    for m in 0..=max_degree {
        let mut coeffs: Vec<T> = vec![T::zero(); m + 1];
        coeffs[m] = T::one();
        for (p, norm) in monic.iter().zip(&norms2) {
            let proj = p
                .coeffs()
                .iter()
                .enumerate()
                .fold(T::zero(), |acc, (l, c)| acc + c.clone() * gram(m, l));
            let factor = proj / norm.clone();
            for (l, c) in p.coeffs().iter().enumerate() {
                coeffs[l] = coeffs[l].clone() - factor.clone() * c.clone();
            }
        }
        let p = Poly::new(coeffs);
        let norm = p
            .coeffs()
            .iter()
            .enumerate()
            .fold(T::zero(), |acc, (l, c)| acc + c.clone() * gram(m, l));
        if is_null(&norm) {
            return Orthogonalization {
                monic,
                norms2,
                terminal: Some(p),
            };
        }
        monic.push(p);
        norms2.push(norm);
    }
    Orthogonalization {
        monic,
        norms2,
        terminal: None,
    }
}

/// Memoised `<x^i, x^j> = (1/n) tr(A^i (A^j)^T)`.
pub struct TraceGram<'a> {
    cache: &'a mut PowerCache,
    memo: HashMap<(usize, usize), BigRational>,
}

impl<'a> TraceGram<'a> {
    pub fn new(cache: &'a mut PowerCache) -> Self {
        TraceGram {
            cache,
            memo: HashMap::new(),
        }
    }

    pub fn get(&mut self, i: usize, j: usize) -> BigRational {
        let key = (i.min(j), i.max(j));
        if let Some(v) = self.memo.get(&key) {
            return v.clone();
        }
        self.cache.ensure(key.1);
        let p = self.cache.computed();
        let v = BigRational::new(p[key.0].frobenius_dot(&p[key.1]), BigInt::from(p[0].dim()));
        self.memo.insert(key, v.clone());
        v
    }
}

/// Trace-route orthogonalization of `1, x, ..., x^{D^+1}`: the basis up to
/// degree `D^` and the minimal polynomial as the terminal residual.
pub fn trace_orthogonalization(cache: &mut PowerCache) -> Result<Orthogonalization<BigRational>> {
    let n = cache.dim();
    let mut gram = TraceGram::new(cache);
    let out = gram_schmidt(n, |i, j| gram.get(i, j), Zero::is_zero);
    let terminal = out.terminal.as_ref().ok_or(Error::DegenerateBasis { degree: n + 1 })?;
    if !cache.eval(terminal).is_zero() {
        return Err(Error::DegenerateBasis {
            degree: out.monic.len(),
        });
    }
    Ok(out)
}

/// The minimal polynomial `m(x)` and `D^ = deg m - 1`.
pub fn minimal_polynomial(g: &Digraph) -> Result<(Poly<BigRational>, usize)> {
    let mut cache = PowerCache::new(g.adjacency_matrix());
    let o = trace_orthogonalization(&mut cache)?;
    let m = o.terminal.expect("checked by trace_orthogonalization");
    let hat_d = m.degree().unwrap() - 1;
    Ok((m, hat_d))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::{rat, rat_int};

    fn cycle(n: usize) -> Digraph {
        let arcs: Vec<_> = (0..n).map(|i| (i, (i + 1) % n)).collect();
        Digraph::new(n, &arcs).unwrap()
    }

    fn path3() -> Digraph {
        Digraph::symmetric(3, &[(0, 1), (1, 2)]).unwrap()
    }

    fn rp(c: &[i64]) -> Poly<BigRational> {
        Poly::new(c.iter().map(|&v| rat_int(v)).collect())
    }

    fn exact(m: &Matrix<BigInt>) -> Matrix<BigRational> {
        m.map(|v| BigRational::from_integer(v.clone()))
    }

    #[test]
    fn inner_products() {
        let id = Matrix::<BigRational>::identity(5);
        assert_eq!(trace_inner_product(&id, &id).unwrap(), rat_int(1));
        let a = exact(&cycle(3).adjacency_matrix());
        assert_eq!(trace_inner_product(&a, &a).unwrap(), rat_int(1));
        let a2 = exact(&path3().adjacency_matrix().powers(2)[2]);
        assert_eq!(trace_inner_product(&a2, &a2).unwrap(), rat(8, 3));
        assert_eq!(
            trace_inner_product(&id, &a),
            Err(Error::DimensionMismatch(5, 3))
        );
    }

    #[test]
    fn normality() {
        assert!(normality_test(&path3()));
        let circ = Digraph::from_adjacency(7, |u, v| [1, 2, 4].contains(&((v + 7 - u) % 7))).unwrap();
        assert!(normality_test(&circ));
        let chord = Digraph::new(3, &[(0, 1), (1, 2), (2, 0), (0, 2)]).unwrap();
        assert!(!normality_test(&chord));
    }

    #[test]
    fn traces() {
        let t: Vec<i64> = power_traces(&cycle(5), 5)
            .iter()
            .map(|v| v.try_into().unwrap())
            .collect();
        assert_eq!(t, vec![5, 0, 0, 0, 0, 5]);
        assert!(power_traces(&cycle(4), 8).iter().skip(1).step_by(2).all(Zero::is_zero));
    }

    #[test]
    fn minimal_polynomials() {
        assert_eq!(minimal_polynomial(&cycle(3)).unwrap(), (rp(&[-1, 0, 0, 1]), 2));
        assert_eq!(minimal_polynomial(&path3()).unwrap(), (rp(&[0, -2, 0, 1]), 2));
        let k4 = Digraph::from_adjacency(4, |u, v| u != v).unwrap();
        assert_eq!(minimal_polynomial(&k4).unwrap(), (rp(&[-3, -2, 1]), 1));
        assert_eq!(minimal_polynomial(&Digraph::new(1, &[]).unwrap()).unwrap(), (rp(&[0, 1]), 0));
    }

    #[test]
    fn non_diagonalizable_minimal_polynomial() {
        // 3-cycle with chord 0->2 is non-normal; m(A) = 0 is checked inside
        let g = Digraph::new(3, &[(0, 1), (1, 2), (2, 0), (0, 2)]).unwrap();
        let (m, _) = minimal_polynomial(&g).unwrap();
        assert!(m.eval_matrix(&exact(&g.adjacency_matrix())).is_zero());
    }

    #[test]
    fn path_three_basis() {
        let mut cache = PowerCache::new(path3().adjacency_matrix());
        let o = trace_orthogonalization(&mut cache).unwrap();
        assert_eq!(o.monic[2], Poly::new(vec![rat(-4, 3), rat_int(0), rat_int(1)]));
        assert_eq!(o.norms2, vec![rat_int(1), rat(4, 3), rat(8, 9)]);
    }

    #[test]
    fn float_gram_schmidt_on_legendre_like_moments() {
        // moments of the uniform measure on {-1, 0, 1}
        let gram = |i: usize, j: usize| {
            let k = i + j;
            if k == 0 {
                1.0
            } else if k.is_multiple_of(2) {
                2.0 / 3.0
            } else {
                0.0
            }
        };
        let o = gram_schmidt(5, gram, |v: &f64| v.abs() < 1e-12);
        assert_eq!(o.monic.len(), 3);
        assert!((o.monic[2].coeff(0) + 2.0 / 3.0).abs() < 1e-12);
        assert_eq!(o.terminal.unwrap().degree(), Some(3));
    }
}
