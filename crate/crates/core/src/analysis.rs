//! One digraph with its exact invariants computed once and the
//! high-precision ones computed on first use.

use std::sync::{Mutex, OnceLock};

use num_bigint::BigInt;
use num_rational::BigRational;

use crate::digraph::Digraph;
use crate::distance::{DeltaProfile, DistanceStructure};
use crate::error::{Error, Result};
use crate::excess::{self, ProjectionTable, WeightedLayers};
use crate::hp::{Fixed, RealValue};
use crate::linalg::{extend_traces, normality_test, trace_orthogonalization, PowerCache};
use crate::matrix::Matrix;
use crate::orthopoly::{
    coefficient_deviation, conjugation_polynomial, conjugation_residual, hoffman_polynomial, spectral_predistance,
    ExactBasis, HoffmanPolynomial, PredistanceBasis,
};
use crate::poly::{squarefree_part, Poly};
use crate::spectrum::{Spectrum, SpectrumOptions};

/// Default relative tolerance for comparisons that depend on `lambda0`.
pub const DEFAULT_TOLERANCE: f64 = 1e-9;

#[derive(Clone, Debug)]
pub struct AnalysisOptions {
    pub spectrum: SpectrumOptions,
    /// Relative tolerance `tol * max(1, |rhs|)` for numeric equalities.
    pub tol: f64,
}

impl Default for AnalysisOptions {
    fn default() -> Self {
        AnalysisOptions {
            spectrum: SpectrumOptions::default(),
            tol: DEFAULT_TOLERANCE,
        }
    }
}

/// The Hoffman polynomial together with `H(A)`.
#[derive(Clone, Debug)]
pub struct Hoffman {
    pub polynomial: HoffmanPolynomial,
    pub matrix: Matrix<BigRational>,
}

pub struct Analysis {
    graph: Digraph,
    options: AnalysisOptions,
    structure: DistanceStructure,
    profile: DeltaProfile,
    basis: ExactBasis,
    minimal: Poly<BigRational>,
    d: usize,
    /// `tr(A^0) ..= tr(A^n)`.
    traces: Vec<BigInt>,
    normal: bool,
    cache: Mutex<PowerCache>,
    table: OnceLock<ProjectionTable>,
    spectrum: OnceLock<Result<Spectrum>>,
    hoffman: OnceLock<Result<Hoffman>>,
    weighted: OnceLock<Result<WeightedLayers>>,
}

impl Analysis {
    /// Fails only with [`Error::NotStronglyConnected`] or a degenerate basis.
    pub fn new(graph: Digraph, options: AnalysisOptions) -> Result<Self> {
        let structure = DistanceStructure::new(&graph)?;
        let profile = structure.delta_profile();
        let powers = (0..=structure.diameter()).map(|k| structure.power(k).clone()).collect();
        let mut cache = PowerCache::from_powers(powers, graph.adjacency_matrix());
        let ortho = trace_orthogonalization(&mut cache)?;
        let minimal = ortho.terminal.expect("trace orthogonalization ends at the minimal polynomial");
        if profile.delta.len() > ortho.monic.len() {
            return Err(Error::DegenerateBasis {
                degree: ortho.monic.len(),
            });
        }
        let basis = PredistanceBasis {
            monic: ortho.monic,
            norms2: ortho.norms2,
            scale2: None,
        }
        .normalized(&profile);
        let d = squarefree_part(&minimal).degree().unwrap_or(1) - 1;
        let hat_d = minimal.degree().unwrap_or(1) - 1;
        let known: Vec<BigInt> = cache.computed()[..=hat_d].iter().map(|p| p.trace()).collect();
        let traces = extend_traces(&minimal, &known, graph.n());
        let normal = normality_test(&graph);
        Ok(Analysis {
            graph,
            options,
            structure,
            profile,
            basis,
            minimal,
            d,
            traces,
            normal,
            cache: Mutex::new(cache),
            table: OnceLock::new(),
            spectrum: OnceLock::new(),
            hoffman: OnceLock::new(),
            weighted: OnceLock::new(),
        })
    }

    pub fn with_defaults(graph: Digraph) -> Result<Self> {
        Self::new(graph, AnalysisOptions::default())
    }

    pub fn graph(&self) -> &Digraph {
        &self.graph
    }

    pub fn options(&self) -> &AnalysisOptions {
        &self.options
    }

    pub fn n(&self) -> usize {
        self.graph.n()
    }

    pub fn structure(&self) -> &DistanceStructure {
        &self.structure
    }

    pub fn profile(&self) -> &DeltaProfile {
        &self.profile
    }

    pub fn basis(&self) -> &ExactBasis {
        &self.basis
    }

    pub fn minimal_polynomial(&self) -> &Poly<BigRational> {
        &self.minimal
    }

    pub fn diameter(&self) -> usize {
        self.structure.diameter()
    }

    /// Number of distinct eigenvalues minus one.
    pub fn d(&self) -> usize {
        self.d
    }

    /// Degree of the minimal polynomial minus one.
    pub fn hat_d(&self) -> usize {
        self.basis.top_degree()
    }

    pub fn traces(&self) -> &[BigInt] {
        &self.traces
    }

    pub fn is_normal(&self) -> bool {
        self.normal
    }

    /// Runs `f` on the shared power cache.
    pub fn with_cache<R>(&self, f: impl FnOnce(&mut PowerCache) -> R) -> R {
        let mut cache = self.cache.lock().unwrap_or_else(|e| e.into_inner());
        f(&mut cache)
    }

    pub fn projection_table(&self) -> &ProjectionTable {
        self.table.get_or_init(|| {
            self.with_cache(|c| ProjectionTable::new(&self.structure, &self.profile, &self.basis, c))
        })
    }

    pub fn simple_excess(&self) -> BigRational {
        excess::simple_excess(&self.profile, self.d, self.diameter())
    }

    pub fn spectral_excess(&self) -> BigRational {
        excess::spectral_excess(&self.basis, self.d)
    }

    /// `||Q_d||^2`.
    pub fn q_norm2(&self) -> BigRational {
        self.basis.q_norm2(self.d)
    }

    pub fn spectrum(&self) -> Result<&Spectrum> {
        self.spectrum
            .get_or_init(|| Spectrum::compute(&self.graph, &self.minimal, &self.traces, &self.options.spectrum))
            .as_ref()
            .map_err(Clone::clone)
    }

    pub fn hoffman(&self) -> Result<&Hoffman> {
        self.hoffman
            .get_or_init(|| {
                let polynomial = hoffman_polynomial(self.spectrum()?)?;
                let matrix = self.with_cache(|c| polynomial.matrix(c));
                Ok(Hoffman { polynomial, matrix })
            })
            .as_ref()
            .map_err(Clone::clone)
    }

    pub fn weighted(&self) -> Result<&WeightedLayers> {
        self.weighted
            .get_or_init(|| {
                let h = self.hoffman()?;
                Ok(excess::weighted_layers(&h.matrix, h.polynomial.is_exact(), &self.structure))
            })
            .as_ref()
            .map_err(Clone::clone)
    }

    /// Largest gap between spectral-route and trace-route pre-distance
    /// coefficients and norms. Meaningful for normal digraphs only.
    pub fn spectral_route_deviation(&self) -> Result<f64> {
        let spectral = spectral_predistance(self.spectrum()?)?;
        Ok(coefficient_deviation(&self.basis, &spectral))
    }

    /// `max |f(A) - A^T|` for the interpolant `f` of `lambda -> conj(lambda)`.
    pub fn conjugation_residual(&self) -> Result<f64> {
        let f = conjugation_polynomial(self.spectrum()?)?;
        Ok(self.with_cache(|c| conjugation_residual(&f, c)))
    }

    /// `(pi0 / n)^2 delta_D`, exact when `pi0` is.
    pub fn pi0_excess(&self) -> Result<RealValue> {
        let spec = self.spectrum()?;
        let bits = spec.bits();
        let delta_top = &self.profile.delta[self.diameter()];
        Ok(match spec.pi0() {
            RealValue::Exact(p) => RealValue::Exact(excess::pi0_excess(&p, self.n(), delta_top)),
            RealValue::Numeric(p) => {
                let r = &p / &Fixed::from_int(self.n() as i64, bits);
                RealValue::Numeric(&(&r * &r) * &Fixed::from_rational(delta_top, bits))
            }
        })
    }

    /// Weighted excess, exact only when `H` has rational coefficients.
    pub fn weighted_excess(&self) -> Result<RealValue> {
        let w = self.weighted()?;
        let value = excess::weighted_excess(w, self.d)?;
        Ok(if w.exact {
            RealValue::Exact(value)
        } else {
            RealValue::Numeric(Fixed::from_rational(&value, self.spectrum()?.bits()))
        })
    }
}
