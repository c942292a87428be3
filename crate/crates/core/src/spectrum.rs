//! Distinct eigenvalues with multiplicities, the Perron value and the
//! Hoffman ingredients `S = m / (x - lambda0)`.
//!
//! The distinct eigenvalues are the roots of the squarefree part `s` of the
//! exact minimal polynomial. They are located by an f64 Schur
//! decomposition, then refined simultaneously (Weierstrass iteration) on
//! `s` in fixed-point arithmetic. Multiplicities come from the squarefree
//! factorization of the exact characteristic polynomial, which is obtained
//! from power traces by Newton's identities.

use nalgebra::DMatrix;
use num_bigint::BigInt;
use num_complex::Complex;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};

use crate::digraph::Digraph;
use crate::error::{Error, Result};
use crate::hp::{complex_to_f64, Fixed, HpComplex, Precision, RealValue};
use crate::linalg::{extend_traces, minimal_polynomial, power_traces};
use crate::poly::{is_rational_root, squarefree_part, Poly};

#[derive(Clone, Debug, PartialEq)]
pub struct Eigenvalue {
    pub value: HpComplex,
    pub multiplicity: usize,
}

impl Eigenvalue {
    pub fn approx(&self) -> Complex<f64> {
        complex_to_f64(&self.value)
    }

    pub fn is_real(&self) -> bool {
        self.value.im.is_zero()
    }
}

/// Numeric-quality evidence gathered while building a [`Spectrum`].
#[derive(Clone, Debug, PartialEq)]
pub struct SpectrumDiagnostics {
    pub cluster_tol: f64,
    /// Distinct values found by clustering the f64 eigenvalues.
    pub numeric_distinct: usize,
    /// `numeric_distinct == deg s`.
    pub clusters_agree: bool,
    /// Largest `|s(lambda)|` over the refined roots.
    pub max_root_residual: f64,
    /// Perron value estimated by power iteration on `A + I`.
    pub power_iteration_estimate: f64,
}

#[derive(Clone, Debug)]
pub struct SpectrumOptions {
    /// Clustering tolerance; `None` means `1e-8 * max(1, max row sum)`.
    pub cluster_tol: Option<f64>,
    pub precision: Precision,
}

impl Default for SpectrumOptions {
    fn default() -> Self {
        SpectrumOptions {
            cluster_tol: None,
            precision: Precision::from_env(),
        }
    }
}

/// Spectrum of a strongly connected digraph. The Perron eigenvalue is
/// stored first.
#[derive(Clone, Debug)]
pub struct Spectrum {
    n: usize,
    bits: u32,
    minimal: Poly<BigRational>,
    squarefree: Poly<BigRational>,
    distinct: Vec<Eigenvalue>,
    lambda0: RealValue,
    pub diagnostics: SpectrumDiagnostics,
}

impl Spectrum {
    /// Full computation from the digraph (minimal polynomial included).
    pub fn of(g: &Digraph, options: &SpectrumOptions) -> Result<Self> {
        let (m, hat_d) = minimal_polynomial(g)?;
        let traces = power_traces(g, hat_d);
        Self::compute(g, &m, &traces, options)
    }

    /// `m` is the exact minimal polynomial and `traces` holds at least
    /// `tr(A^0) ..= tr(A^(deg m - 1))`.
    pub fn compute(
        g: &Digraph,
        m: &Poly<BigRational>,
        traces: &[BigInt],
        options: &SpectrumOptions,
    ) -> Result<Self> {
        let n = g.n();
        let s = squarefree_part(m);
        let degree = s.degree().expect("minimal polynomial is non-constant");
        let row_max = (0..n).map(|u| g.out_degree(u)).max().unwrap_or(0) as f64;
        let cluster_tol = options.cluster_tol.unwrap_or(1e-8 * row_max.max(1.0));
        let bits = working_bits(options.precision, degree, row_max);

        let numeric = numeric_eigenvalues(g);
        let clusters = numeric.as_deref().map(|v| cluster(v, cluster_tol));
        let numeric_distinct = clusters.as_ref().map_or(0, Vec::len);

        let seeds = match &clusters {
            Some(c) if c.len() == degree => c.clone(),
            _ => circle_seeds(degree, row_max),
        };
        let roots = weierstrass(&s, &seeds, bits)?;
        let roots = tidy_conjugates(roots, bits)?;

        let charpoly = characteristic_polynomial(n, m, traces);
        let factors = squarefree_factorization(&charpoly);
        let mut distinct = Vec::with_capacity(roots.len());
        for z in roots {
            let multiplicity = root_multiplicity(&factors, &z, bits);
            distinct.push(Eigenvalue {
                value: z,
                multiplicity,
            });
        }
        let total: usize = distinct.iter().map(|e| e.multiplicity).sum();
        if total != n {
            return Err(Error::Spectrum(format!(
                "multiplicities sum to {total}, expected {n}"
            )));
        }

        let max_root_residual = distinct
            .iter()
            .map(|e| {
                let sz = eval_complex(&s, &e.value, bits);
                complex_to_f64(&sz).norm()
            })
            .fold(0.0, f64::max);

        let perron = perron_index(&distinct)?;
        let first = distinct.remove(perron);
        distinct.sort_by(|a, b| {
            let (x, y) = (a.approx(), b.approx());
            y.re.total_cmp(&x.re).then(y.im.total_cmp(&x.im))
        });
        distinct.insert(0, first);
        let lambda0 = certify_lambda0(m, &distinct[0].value.re);

        Ok(Spectrum {
            n,
            bits,
            minimal: m.clone(),
            squarefree: s,
            distinct,
            lambda0,
            diagnostics: SpectrumDiagnostics {
                cluster_tol,
                numeric_distinct,
                clusters_agree: numeric_distinct == degree,
                max_root_residual,
                power_iteration_estimate: power_iteration(g),
            },
        })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// Fractional bits used for the refined eigenvalues.
    pub fn bits(&self) -> u32 {
        self.bits
    }

    pub fn distinct(&self) -> &[Eigenvalue] {
        &self.distinct
    }

    /// Number of distinct eigenvalues minus one.
    pub fn d(&self) -> usize {
        self.distinct.len() - 1
    }

    pub fn minimal_polynomial(&self) -> &Poly<BigRational> {
        &self.minimal
    }

    pub fn squarefree(&self) -> &Poly<BigRational> {
        &self.squarefree
    }

    pub fn lambda0(&self) -> &RealValue {
        &self.lambda0
    }

    pub fn exact_lambda0(&self) -> bool {
        self.lambda0.is_exact()
    }

    /// `pi_0 = prod_{i >= 1} (lambda0 - lambda_i) = s'(lambda0)`.
    pub fn pi0(&self) -> RealValue {
        let ds = self.squarefree.derivative();
        match &self.lambda0 {
            RealValue::Exact(l) => RealValue::Exact(ds.eval(l)),
            RealValue::Numeric(l) => {
                let p = ds.map(|c| Fixed::from_rational(c, self.bits));
                RealValue::Numeric(p.eval(l))
            }
        }
    }

    /// `lambda0` at the working precision.
    pub fn lambda0_fixed(&self) -> Fixed {
        self.lambda0.to_fixed(self.bits)
    }

    /// True when every non-real eigenvalue has its conjugate with the same
    /// multiplicity (real input guarantees it; checked anyway).
    pub fn is_conjugate_closed(&self) -> bool {
        self.distinct.iter().all(|e| {
            e.is_real()
                || self.distinct.iter().any(|f| {
                    f.value.re == e.value.re && f.value.im == -e.value.im.clone() && f.multiplicity == e.multiplicity
                })
        })
    }
}

/// Precision for root refinement and everything downstream of it: the
/// requested digits plus room for the cancellation in monomial-basis
/// interpolation and Gram-Schmidt of degree `degree`.
fn working_bits(precision: Precision, degree: usize, row_max: f64) -> u32 {
    let growth = (row_max + 2.0).log2().ceil() as u32;
    precision.bits() + 2 * (degree as u32 + 1) * growth.max(1)
}

/// f64 eigenvalues from a real Schur form. Shifted QR stalls on
/// permutation-like matrices (all eigenvalues of equal modulus), so failed
/// attempts are retried on `A + cI`.
fn numeric_eigenvalues(g: &Digraph) -> Option<Vec<Complex<f64>>> {
    let n = g.n();
    [0.0, 0.123, -0.377, 0.61].into_iter().find_map(|shift| {
        let a = DMatrix::from_fn(n, n, |i, j| {
            let arc = if g.has_arc(i, j) { 1.0 } else { 0.0 };
            if i == j {
                arc + shift
            } else {
                arc
            }
        });
        let schur = nalgebra::Schur::try_new(a, 1e-14, 1000 * n.max(1))?;
        Some(
            schur
                .complex_eigenvalues()
                .iter()
                .map(|z| z - shift)
                .collect(),
        )
    })
}

/// Single-linkage clusters of `values` at distance `tol`; returns the
/// cluster means in first-seen order.
fn cluster(values: &[Complex<f64>], tol: f64) -> Vec<Complex<f64>> {
    let k = values.len();
    let mut label: Vec<usize> = (0..k).collect();
    fn find(label: &mut [usize], i: usize) -> usize {
        let mut r = i;
        while label[r] != r {
            r = label[r];
        }
        label[i] = r;
        r
    }
    for i in 0..k {
        for j in i + 1..k {
            if (values[i] - values[j]).norm() <= tol {
                let (a, b) = (find(&mut label, i), find(&mut label, j));
                label[a.max(b)] = a.min(b);
            }
        }
    }
    let mut out: Vec<(usize, Complex<f64>, usize)> = Vec::new();
    for (i, &value) in values.iter().enumerate().take(k) {
        let r = find(&mut label, i);
        match out.iter_mut().find(|(root, _, _)| *root == r) {
            Some(entry) => {
                entry.1 += value;
                entry.2 += 1;
            }
            None => out.push((r, value, 1)),
        }
    }
    out.into_iter().map(|(_, sum, c)| sum / c as f64).collect()
}

fn circle_seeds(degree: usize, radius: f64) -> Vec<Complex<f64>> {
    let r = radius.max(1.0) + 0.5;
    (0..degree)
        .map(|k| Complex::from_polar(r, 0.4 + std::f64::consts::TAU * k as f64 / degree as f64))
        .collect()
}

fn to_hp(z: Complex<f64>, bits: u32) -> HpComplex {
    crate::hp::complex_from_f64(z, bits)
}

fn eval_complex(p: &Poly<BigRational>, z: &HpComplex, bits: u32) -> HpComplex {
    let coeffs: Vec<Fixed> = p.coeffs().iter().map(|c| Fixed::from_rational(c, bits)).collect();
    let zero = Complex::new(Fixed::from_int(0, bits), Fixed::from_int(0, bits));
    coeffs
        .iter()
        .rev()
        .fold(zero, |acc, c| acc * z.clone() + Complex::new(c.clone(), Fixed::zero()))
}

/// Simultaneous refinement of all roots of the monic `s`.
fn weierstrass(s: &Poly<BigRational>, seeds: &[Complex<f64>], bits: u32) -> Result<Vec<HpComplex>> {
    let degree = seeds.len();
    let mut z: Vec<HpComplex> = seeds.iter().map(|&c| to_hp(c, bits)).collect();
    if degree == 1 {
        // s = x - r
        let r = -s.coeff(0);
        return Ok(vec![Complex::new(Fixed::from_rational(&r, bits), Fixed::from_int(0, bits))]);
    }
    let tol = Fixed::from_parts(BigInt::one(), bits.saturating_sub(24));
    let tol2 = &tol * &tol;
    for _ in 0..5000 {
        let mut worst = Fixed::zero();
        for i in 0..degree {
            let num = eval_complex(s, &z[i], bits);
            let mut den = Complex::new(Fixed::from_int(1, bits), Fixed::from_int(0, bits));
            for (j, zj) in z.iter().enumerate() {
                if j != i {
                    den = den * (z[i].clone() - zj.clone());
                }
            }
            if den.norm_sqr().is_zero() {
                return Err(Error::CoincidentEigenvalues);
            }
            let step = num / den;
            let size = step.norm_sqr();
            let scale = z[i].norm_sqr().max(Fixed::one());
            let rel = size / scale;
            if rel > worst {
                worst = rel;
            }
            z[i] = z[i].clone() - step;
        }
        if worst <= tol2 {
            return Ok(z);
        }
    }
    Err(Error::Spectrum("root refinement did not converge".into()))
}

/// Snaps nearly real roots onto the real axis and makes conjugate pairs
/// exact mirror images.
fn tidy_conjugates(mut roots: Vec<HpComplex>, bits: u32) -> Result<Vec<HpComplex>> {
    let tiny = Fixed::from_parts(BigInt::one(), bits / 2);
    for z in roots.iter_mut() {
        if z.im.abs() <= tiny {
            z.im = Fixed::from_int(0, bits);
        }
    }
    let k = roots.len();
    let mut paired = vec![false; k];
    for i in 0..k {
        if paired[i] || roots[i].im.is_zero() {
            continue;
        }
        let partner = (0..k).find(|&j| {
            j != i
                && !paired[j]
                && (&roots[j].re - &roots[i].re).abs() <= tiny
                && (&roots[j].im + &roots[i].im).abs() <= tiny
        });
        let j = partner.ok_or(Error::NotConjugateClosed)?;
        roots[j] = roots[i].conj();
        paired[i] = true;
        paired[j] = true;
    }
    Ok(roots)
}

/// Characteristic polynomial from `tr(A^k)` by Newton's identities. Traces
/// beyond those given follow from the recurrence `m(A) = 0`.
fn characteristic_polynomial(n: usize, m: &Poly<BigRational>, traces: &[BigInt]) -> Poly<BigRational> {
    let r = m.degree().unwrap();
    let t: Vec<BigRational> = extend_traces(m, &traces[..r.max(1).min(traces.len())], n)
        .into_iter()
        .map(BigRational::from_integer)
        .collect();
    // e_k: elementary symmetric functions of the eigenvalues
    let mut e = vec![BigRational::one()];
    for k in 1..=n {
        let mut acc = BigRational::zero();
        for i in 1..=k {
            let term = &e[k - i] * &t[i];
            if i % 2 == 1 {
                acc += term;
            } else {
                acc -= term;
            }
        }
        e.push(acc / BigRational::from_integer(BigInt::from(k)));
    }
    // chi(x) = sum_k (-1)^k e_k x^(n-k)
    let mut coeffs = vec![BigRational::zero(); n + 1];
    for (k, ek) in e.into_iter().enumerate() {
        coeffs[n - k] = if k % 2 == 0 { ek } else { -ek };
    }
    Poly::new(coeffs)
}

/// Yun's algorithm: `f = prod_i a_i^i` with each `a_i` squarefree and
/// pairwise coprime. Returns `(a_i, i)` for non-constant `a_i`.
fn squarefree_factorization(f: &Poly<BigRational>) -> Vec<(Poly<BigRational>, usize)> {
    let f = f.monic();
    let df = f.derivative();
    let a0 = f.gcd(&df);
    let mut b = f.div_rem(&a0).0;
    let c = df.div_rem(&a0).0;
    let mut d = c.sub(&b.derivative());
    let mut out = Vec::new();
    let mut i = 1;
    while b.degree().unwrap_or(0) > 0 {
        let a = b.gcd(&d);
        let next_b = b.div_rem(&a).0;
        let c = d.div_rem(&a).0;
        d = c.sub(&next_b.derivative());
        if a.degree().unwrap_or(0) > 0 {
            out.push((a, i));
        }
        b = next_b;
        i += 1;
    }
    out
}

fn root_multiplicity(factors: &[(Poly<BigRational>, usize)], z: &HpComplex, bits: u32) -> usize {
    factors
        .iter()
        .map(|(a, i)| (complex_to_f64(&eval_complex(&a.monic(), z, bits)).norm(), *i))
        .min_by(|x, y| x.0.total_cmp(&y.0))
        .map_or(0, |(_, i)| i)
}

/// Perron-Frobenius: the spectral radius of a non-negative irreducible
/// matrix is a simple real eigenvalue, so it is the real eigenvalue of
/// largest real part. Its dominance in modulus is verified.
fn perron_index(distinct: &[Eigenvalue]) -> Result<usize> {
    let idx = distinct
        .iter()
        .enumerate()
        .filter(|(_, e)| e.is_real())
        .max_by(|(_, a), (_, b)| a.value.re.cmp(&b.value.re))
        .map(|(i, _)| i)
        .ok_or_else(|| Error::Spectrum("no real eigenvalue".into()))?;
    let e = &distinct[idx];
    if e.multiplicity != 1 {
        return Err(Error::Spectrum(format!(
            "Perron eigenvalue has multiplicity {}",
            e.multiplicity
        )));
    }
    let rho = e.value.re.to_f64();
    let dominated = distinct.iter().all(|f| f.approx().norm() <= rho + 1e-9 * rho.max(1.0));
    if !dominated {
        return Err(Error::Spectrum("real eigenvalue of largest real part is not dominant".into()));
    }
    Ok(idx)
}

/// A rational root of the monic integer polynomial `m` is an integer, so
/// the only candidate is the nearest integer.
fn certify_lambda0(m: &Poly<BigRational>, approx: &Fixed) -> RealValue {
    let nearest = approx.to_rational().round().to_integer();
    let candidate = BigRational::from_integer(nearest);
    if is_rational_root(m, &candidate) {
        RealValue::Exact(candidate)
    } else {
        RealValue::Numeric(approx.clone())
    }
}

/// Power iteration on `A + I` (primitive when `A` is irreducible). The
/// Collatz-Wielandt ratios `min y_i/x_i <= rho + 1 <= max y_i/x_i` bracket
/// the answer and decide convergence.
fn power_iteration(g: &Digraph) -> f64 {
    let n = g.n();
    let mut x = vec![1.0f64; n];
    let mut bracket = (0.0, f64::INFINITY);
    for _ in 0..20_000 {
        let y: Vec<f64> = (0..n)
            .map(|u| x[u] + g.out_neighbors(u).iter().map(|&v| x[v]).sum::<f64>())
            .collect();
        let ratios = y.iter().zip(&x).map(|(a, b)| a / b);
        let lo = ratios.clone().fold(f64::INFINITY, f64::min);
        let hi = ratios.fold(0.0, f64::max);
        bracket = (lo, hi);
        if hi - lo <= 1e-12 * hi {
            break;
        }
        let norm = y.iter().cloned().fold(0.0, f64::max);
        x = y.into_iter().map(|v| v / norm).collect();
    }
    (bracket.0 + bracket.1) / 2.0 - 1.0
}

/// `S(x) = m(x) / (x - lambda0)` and `S(lambda0)`, exact when `lambda0` is.
#[derive(Clone, Debug, PartialEq)]
pub enum HoffmanIngredients {
    Exact {
        quotient: Poly<BigRational>,
        at_lambda0: BigRational,
    },
    Numeric {
        quotient: Poly<Fixed>,
        at_lambda0: Fixed,
    },
}

impl HoffmanIngredients {
    pub fn at_lambda0(&self) -> RealValue {
        match self {
            HoffmanIngredients::Exact { at_lambda0, .. } => RealValue::Exact(at_lambda0.clone()),
            HoffmanIngredients::Numeric { at_lambda0, .. } => RealValue::Numeric(at_lambda0.clone()),
        }
    }
}

/// Synthetic division of `m` by `x - lambda0`. The remainder must vanish
/// (exactly, or below `2^-(bits/2)` times the coefficient scale).
pub fn hoffman_ingredients(m: &Poly<BigRational>, lambda0: &RealValue, bits: u32) -> Result<HoffmanIngredients> {
    match lambda0 {
        RealValue::Exact(l) => {
            let (quotient, rem) = m.div_linear(l);
            if !rem.is_zero() {
                return Err(Error::NotARoot(crate::scalar::rational_to_f64(&rem)));
            }
            let at_lambda0 = quotient.eval(l);
            Ok(HoffmanIngredients::Exact {
                quotient,
                at_lambda0,
            })
        }
        RealValue::Numeric(l) => {
            let l = l.with_bits(bits);
            let mf = m.map(|c| Fixed::from_rational(c, bits));
            let (quotient, rem) = mf.div_linear(&l);
            let scale = mf
                .coeffs()
                .iter()
                .map(Fixed::abs)
                .max()
                .unwrap_or_else(Fixed::one)
                .max(Fixed::one());
            let tol = &scale * &Fixed::from_parts(BigInt::one(), bits / 2);
            if rem.abs() > tol {
                return Err(Error::NotARoot(rem.to_f64()));
            }
            let at_lambda0 = quotient.eval(&l);
            if at_lambda0.abs() <= Fixed::from_parts(BigInt::one(), bits / 2) {
                return Err(Error::VanishingHoffmanDenominator);
            }
            Ok(HoffmanIngredients::Numeric {
                quotient,
                at_lambda0,
            })
        }
    }
}

/// Exact multiplicity check used in tests: `sum_i m_i lambda_i^k` against
/// `tr(A^k)`, returning the worst relative deviation.
pub fn trace_deviation(spec: &Spectrum, traces: &[BigInt]) -> f64 {
    let mut worst: f64 = 0.0;
    for (k, t) in traces.iter().enumerate() {
        let mut sum = Complex::new(0.0, 0.0);
        for e in spec.distinct() {
            sum += e.approx().powu(k as u32) * e.multiplicity as f64;
        }
        let t = t.to_f64().unwrap_or(f64::INFINITY);
        let dev = (sum.re - t).abs().max(sum.im.abs()) / t.abs().max(1.0);
        worst = worst.max(dev);
    }
    worst
}
