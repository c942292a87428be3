//! Simple, spectral and weighted excess, and the projection sums bounding
//! `n` whose equality cases characterize weak distance-regularity.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::distance::{DeltaProfile, DistanceStructure};
use crate::error::{Error, Result};
use crate::linalg::PowerCache;
use crate::matrix::Matrix;
use crate::orthopoly::ExactBasis;

/// `eps = delta'_d^2 / delta_d` when `d <= D`, else zero.
pub fn simple_excess(profile: &DeltaProfile, d: usize, diameter: usize) -> BigRational {
    if d > diameter {
        return BigRational::zero();
    }
    let dp = &profile.delta_prime[d];
    dp * dp / &profile.delta[d]
}

/// `eps_d = ||p_d||^2`.
pub fn spectral_excess(basis: &ExactBasis, d: usize) -> BigRational {
    basis.norms2[d].clone()
}

/// `<A_j, p_k(A)>` for `j <= D`, `k <= D^`, together with what is needed
/// to normalize: `delta_j` and `||p_k||^2`.
#[derive(Clone, Debug, PartialEq)]
pub struct ProjectionTable {
    /// `inner[j][k] = <A_j, p_k(A)>`.
    pub inner: Vec<Vec<BigRational>>,
    pub delta: Vec<BigRational>,
    pub norms2: Vec<BigRational>,
}

impl ProjectionTable {
    /// Builds from layer sums `L[j][i] = <A_j, A^i>`: since `A_j` is 0/1,
    /// `<A_j, p_k(A)> = sum_i coef_k[i] L[j][i]`.
    pub fn new(s: &DistanceStructure, profile: &DeltaProfile, basis: &ExactBasis, cache: &mut PowerCache) -> Self {
        let n = BigInt::from(s.n());
        let top = basis.top_degree();
        cache.ensure(top);
        let powers = cache.computed();
        let layer_sums: Vec<Vec<BigRational>> = (0..=s.diameter())
            .map(|j| {
                (0..=top)
                    .map(|i| {
                        let sum: BigInt = s.pairs_at(j).map(|(u, v)| powers[i].get(u, v)).sum();
                        BigRational::new(sum, n.clone())
                    })
                    .collect()
            })
            .collect();
        let inner = layer_sums
            .iter()
            .map(|row| {
                basis
                    .monic
                    .iter()
                    .map(|p| {
                        p.coeffs()
                            .iter()
                            .zip(row)
                            .fold(BigRational::zero(), |acc, (c, l)| acc + c * l)
                    })
                    .collect()
            })
            .collect();
        ProjectionTable {
            inner,
            delta: profile.delta.clone(),
            norms2: basis.norms2.clone(),
        }
    }

    pub fn diameter(&self) -> usize {
        self.delta.len() - 1
    }

    /// `<A_j, P_k(A)>^2 / delta_j`, with `P_k = c_k p_k` and `c_k^2 =
    /// delta_k / ||p_k||^2`.
    pub fn layer_on_normalized(&self, j: usize, k: usize) -> BigRational {
        let x = &self.inner[j][k];
        x * x * &self.delta[k] / (&self.norms2[k] * &self.delta[j])
    }

    /// `<A_k, P_j(A)>^2 / delta_j = <A_k, p_j(A)>^2 / ||p_j||^2`.
    pub fn normalized_on_layer(&self, k: usize, j: usize) -> BigRational {
        let x = &self.inner[k][j];
        x * x / &self.norms2[j]
    }
}

/// A projection sum with its per-`k` terms and their bounds `delta_k`.
#[derive(Clone, Debug, PartialEq)]
pub struct ProjectionSum {
    pub total: BigRational,
    pub per_k: Vec<BigRational>,
    pub bounds: Vec<BigRational>,
}

impl ProjectionSum {
    fn from_terms(per_k: Vec<BigRational>, bounds: &[BigRational]) -> Self {
        let total = per_k.iter().fold(BigRational::zero(), |a, b| a + b);
        ProjectionSum {
            total,
            per_k,
            bounds: bounds.to_vec(),
        }
    }

    /// `per_k[k] <= delta_k` for every `k`.
    pub fn within_bounds(&self) -> bool {
        self.per_k.iter().zip(&self.bounds).all(|(a, b)| a <= b)
    }

    /// Every per-`k` bound attained.
    pub fn all_tight(&self) -> bool {
        self.per_k == self.bounds
    }
}

/// `sum_{k <= D} <A_k, P_k(A)>^2 / delta_k`.
pub fn wdr_projection_sum(t: &ProjectionTable) -> ProjectionSum {
    let per_k = (0..=t.diameter()).map(|k| t.normalized_on_layer(k, k)).collect();
    ProjectionSum::from_terms(per_k, &t.delta)
}

/// `sum_k sum_{j = k..D} <A_k, P_j(A)>^2 / delta_j`.
pub fn upper_projection_sum(t: &ProjectionTable) -> ProjectionSum {
    let d = t.diameter();
    let per_k = (0..=d)
        .map(|k| (k..=d).fold(BigRational::zero(), |acc, j| acc + t.normalized_on_layer(k, j)))
        .collect();
    ProjectionSum::from_terms(per_k, &t.delta)
}

/// Which side of the pairing ranges over the subset `S_k`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SubsetVariant {
    /// `sum_k sum_{j in S_k} <A_j, P_k(A)>^2 / delta_j`: `P_k(A)`
    /// projected onto `span{A_j : j in S_k}`.
    PolynomialOntoLayers,
    /// `sum_k sum_{j in S_k} <A_k, P_j(A)>^2 / delta_j`: `A_k` projected
    /// onto `span{P_j(A) : j in S_k}`; requires `k in S_k`.
    LayerOntoPolynomials,
}

/// Checks that `subsets` is a valid system `S_0..S_D`.
pub fn validate_subsets(subsets: &[Vec<usize>], diameter: usize, variant: SubsetVariant) -> Result<()> {
    if subsets.len() != diameter + 1 {
        return Err(Error::SubsetCount {
            expected: diameter + 1,
            got: subsets.len(),
        });
    }
    for (k, set) in subsets.iter().enumerate() {
        if set.is_empty() {
            return Err(Error::EmptySubset { index: k });
        }
        if let Some(&value) = set.iter().find(|&&j| j > diameter) {
            return Err(Error::SubsetOutOfRange { index: k, value });
        }
        if variant == SubsetVariant::LayerOntoPolynomials && !set.contains(&k) {
            return Err(Error::SubsetMissingIndex { index: k });
        }
    }
    Ok(())
}

/// The subset-generalized projection sum; at most `n` for valid systems.
/// Repeated members of a subset count once.
pub fn generalized_projection_sum(t: &ProjectionTable, subsets: &[Vec<usize>], variant: SubsetVariant) -> Result<BigRational> {
    validate_subsets(subsets, t.diameter(), variant)?;
    let mut total = BigRational::zero();
    for (k, set) in subsets.iter().enumerate() {
        let mut seen = vec![false; t.diameter() + 1];
        for &j in set {
            if std::mem::replace(&mut seen[j], true) {
                continue;
            }
            total += match variant {
                SubsetVariant::PolynomialOntoLayers => t.layer_on_normalized(j, k),
                SubsetVariant::LayerOntoPolynomials => t.normalized_on_layer(k, j),
            };
        }
    }
    Ok(total)
}

/// `||Q_{D^}||^2 = sum_k eps_k` and whether it equals `n`.
pub fn q_norm_check(basis: &ExactBasis, n: usize) -> (BigRational, bool) {
    let value = basis.q_norm2(basis.top_degree());
    let holds = value == BigRational::from_integer(BigInt::from(n));
    (value, holds)
}

/// `A~_k = H(A) o A_k` and the weighted means.
#[derive(Clone, Debug, PartialEq)]
pub struct WeightedLayers {
    pub tilde: Vec<Matrix<BigRational>>,
    /// `<A~_k, A~_k>`.
    pub tilde_delta: Vec<BigRational>,
    /// `<A~_k, A^k>`.
    pub tilde_delta_prime: Vec<BigRational>,
    /// `delta~'_k(v) = sum_{u in Gamma+_k(v)} H(A)_{vu} rho_k(v, u)`.
    pub per_vertex_tilde_delta_prime: Vec<Vec<BigRational>>,
    /// False when `H` carries rounded coefficients.
    pub exact: bool,
}

pub fn weighted_layers(h_matrix: &Matrix<BigRational>, exact: bool, s: &DistanceStructure) -> WeightedLayers {
    let n = s.n();
    let nr = BigRational::from_integer(BigInt::from(n));
    let mut tilde = Vec::new();
    let mut tilde_delta = Vec::new();
    let mut tilde_delta_prime = Vec::new();
    let mut per_vertex = Vec::new();
    for k in 0..=s.diameter() {
        let layer = Matrix::from_fn(n, |u, v| {
            if s.dist(u, v) == k {
                h_matrix.get(u, v).clone()
            } else {
                BigRational::zero()
            }
        });
        let power = s.power(k).map(|v| BigRational::from_integer(v.clone()));
        tilde_delta.push(layer.frobenius_dot(&layer) / &nr);
        tilde_delta_prime.push(layer.frobenius_dot(&power) / &nr);
        let rho = s.path_counts(k);
        per_vertex.push(
            (0..n)
                .map(|v| {
                    s.out_shell(v, k).fold(BigRational::zero(), |acc, u| {
                        acc + h_matrix.get(v, u) * BigRational::from_integer(rho.get(v, u).clone())
                    })
                })
                .collect(),
        );
        tilde.push(layer);
    }
    WeightedLayers {
        tilde,
        tilde_delta,
        tilde_delta_prime,
        per_vertex_tilde_delta_prime: per_vertex,
        exact,
    }
}

/// `<A~_d, A^d>^2 / delta~_d` when `d <= D`, else zero.
pub fn weighted_excess(w: &WeightedLayers, d: usize) -> Result<BigRational> {
    if d >= w.tilde_delta.len() {
        return Ok(BigRational::zero());
    }
    let den = &w.tilde_delta[d];
    if den.is_zero() {
        return Err(Error::VanishingWeightedDelta);
    }
    let num = &w.tilde_delta_prime[d];
    Ok(num * num / den)
}

/// `(pi_0 / n)^2 delta_D` from an exact `pi_0`.
pub fn pi0_excess(pi0: &BigRational, n: usize, delta_top: &BigRational) -> BigRational {
    let r = pi0 / BigRational::from_integer(BigInt::from(n));
    &r * &r * delta_top
}

/// Sum of the per-vertex means, used to cross-check `<A~_k, A^k>`.
pub fn mean(values: &[BigRational]) -> BigRational {
    let n = BigRational::from_integer(BigInt::from(values.len().max(1)));
    values.iter().fold(BigRational::zero(), |a, b| a + b) / n
}

/// `true` when `H(A)` is the all-ones matrix.
pub fn is_all_ones(h: &Matrix<BigRational>) -> bool {
    h.entries().all(|(_, _, v)| v.is_one())
}
