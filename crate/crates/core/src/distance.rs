//! Distances, distance layers `A_k`, shortest-path counts and the
//! `delta_k` / `delta'_k` profile.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::digraph::Digraph;
use crate::error::{Error, Result};
use crate::matrix::Matrix;

/// Distance data of a strongly connected digraph.
///
/// `layers[k]` is the 0/1 matrix of pairs at distance exactly `k`;
/// `path_counts[k]` holds the number of shortest paths for those pairs. A
/// walk of length `k` ending at distance `k` cannot repeat a vertex, so the
/// counts are `A^k` masked by `A_k`.
#[derive(Clone, Debug)]
pub struct DistanceStructure {
    n: usize,
    dist: Vec<usize>,
    diameter: usize,
    layers: Vec<Matrix<BigInt>>,
    powers: Vec<Matrix<BigInt>>,
    path_counts: Vec<Matrix<BigInt>>,
}

/// Exact means `delta_k` and `delta'_k` with their per-vertex tables.
#[derive(Clone, Debug, PartialEq)]
pub struct DeltaProfile {
    pub delta: Vec<BigRational>,
    pub delta_prime: Vec<BigRational>,
    /// `per_vertex_delta[k][v] = |Gamma^+_k(v)|`.
    pub per_vertex_delta: Vec<Vec<usize>>,
    /// `per_vertex_delta_prime[k][v]`: shortest paths from `v` into
    /// `Gamma^+_k(v)`.
    pub per_vertex_delta_prime: Vec<Vec<BigInt>>,
}

impl DistanceStructure {
    pub fn new(g: &Digraph) -> Result<Self> {
        let n = g.n();
        let mut dist = vec![0usize; n * n];
        for u in 0..n {
            for (v, d) in g.bfs(u).into_iter().enumerate() {
                dist[u * n + v] = d.ok_or(Error::NotStronglyConnected)?;
            }
        }
        let diameter = dist.iter().copied().max().unwrap_or(0);
        let layers: Vec<Matrix<BigInt>> = (0..=diameter)
            .map(|k| {
                Matrix::from_fn(n, |u, v| {
                    if dist[u * n + v] == k {
                        BigInt::one()
                    } else {
                        BigInt::zero()
                    }
                })
            })
            .collect();
        let powers = g.adjacency_matrix().powers(diameter);
        let path_counts = layers
            .iter()
            .zip(&powers)
            .map(|(layer, power)| layer.hadamard(power))
            .collect();
        Ok(DistanceStructure {
            n,
            dist,
            diameter,
            layers,
            powers,
            path_counts,
        })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn dist(&self, u: usize, v: usize) -> usize {
        self.dist[u * self.n + v]
    }

    pub fn diameter(&self) -> usize {
        self.diameter
    }

    /// `A_k` (all-zero beyond the diameter is never requested).
    pub fn layer(&self, k: usize) -> &Matrix<BigInt> {
        &self.layers[k]
    }

    pub fn layers(&self) -> &[Matrix<BigInt>] {
        &self.layers
    }

    /// `A^k` for `k <= D`.
    pub fn power(&self, k: usize) -> &Matrix<BigInt> {
        &self.powers[k]
    }

    pub fn path_counts(&self, k: usize) -> &Matrix<BigInt> {
        &self.path_counts[k]
    }

    /// `Gamma^+_k(u)`.
    pub fn out_shell(&self, u: usize, k: usize) -> impl Iterator<Item = usize> + '_ {
        (0..self.n).filter(move |&v| self.dist(u, v) == k)
    }

    /// `Gamma^-_k(v)`.
    pub fn in_shell(&self, v: usize, k: usize) -> impl Iterator<Item = usize> + '_ {
        (0..self.n).filter(move |&u| self.dist(u, v) == k)
    }

    /// Pairs `(u, v)` with `dist(u, v) = k`.
    pub fn pairs_at(&self, k: usize) -> impl Iterator<Item = (usize, usize)> + '_ {
        let n = self.n;
        (0..n * n)
            .filter(move |&idx| self.dist[idx] == k)
            .map(move |idx| (idx / n, idx % n))
    }

    /// Unique shortest paths between every pair.
    pub fn is_geodetic(&self) -> bool {
        self.path_counts
            .iter()
            .all(|m| m.entries().all(|(_, _, c)| c.is_zero() || c.is_one()))
    }

    pub fn is_symmetric(&self) -> bool {
        (0..self.n).all(|u| (0..self.n).all(|v| (self.dist(u, v) == 1) == (self.dist(v, u) == 1)))
    }

    pub fn delta_profile(&self) -> DeltaProfile {
        let n = self.n;
        let nr = BigRational::from_integer(BigInt::from(n));
        let mut delta = Vec::new();
        let mut delta_prime = Vec::new();
        let mut per_vertex_delta = Vec::new();
        let mut per_vertex_delta_prime = Vec::new();
        for k in 0..=self.diameter {
            let counts: Vec<usize> = (0..n).map(|v| self.out_shell(v, k).count()).collect();
            let paths: Vec<BigInt> = (0..n)
                .map(|v| self.path_counts[k].row(v).iter().sum())
                .collect();
            let total: usize = counts.iter().sum();
            let total_paths: BigInt = paths.iter().sum();
            delta.push(BigRational::from_integer(BigInt::from(total)) / nr.clone());
            delta_prime.push(BigRational::from_integer(total_paths) / nr.clone());
            per_vertex_delta.push(counts);
            per_vertex_delta_prime.push(paths);
        }
        DeltaProfile {
            delta,
            delta_prime,
            per_vertex_delta,
            per_vertex_delta_prime,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::{rat, rat_int};

    fn cycle(n: usize) -> Digraph {
        let arcs: Vec<_> = (0..n).map(|i| (i, (i + 1) % n)).collect();
        Digraph::new(n, &arcs).unwrap()
    }

    fn hypercube3() -> Digraph {
        Digraph::from_adjacency(8, |u, v| (u ^ v).count_ones() == 1).unwrap()
    }

    #[test]
    fn directed_five_cycle_layers_are_powers() {
        let s = DistanceStructure::new(&cycle(5)).unwrap();
        assert_eq!(s.diameter(), 4);
        for k in 0..=4 {
            assert_eq!(s.layer(k), s.power(k));
        }
        assert!(s.is_geodetic());
        let p = s.delta_profile();
        for k in 0..=4 {
            assert_eq!(p.delta[k], rat_int(1));
            assert_eq!(p.delta_prime[k], rat_int(1));
        }
    }

    #[test]
    fn path_three() {
        let g = Digraph::symmetric(3, &[(0, 1), (1, 2)]).unwrap();
        let s = DistanceStructure::new(&g).unwrap();
        assert_eq!(s.diameter(), 2);
        assert_eq!(s.out_shell(0, 2).collect::<Vec<_>>(), vec![2]);
        assert_eq!(s.out_shell(1, 2).count(), 0);
        let p = s.delta_profile();
        assert_eq!(p.delta[2], rat(2, 3));
        assert_eq!(p.delta_prime[2], rat(2, 3));
        assert_eq!(p.per_vertex_delta[2], vec![1, 0, 1]);
    }

    #[test]
    fn complete_graph_has_diameter_one() {
        let g = Digraph::from_adjacency(4, |u, v| u != v).unwrap();
        let s = DistanceStructure::new(&g).unwrap();
        assert_eq!(s.diameter(), 1);
        let j_minus_i = Matrix::from_fn(4, |u, v| BigInt::from((u != v) as i32));
        assert_eq!(s.layer(1), &j_minus_i);
    }

    #[test]
    fn hypercube_antipodes() {
        let s = DistanceStructure::new(&hypercube3()).unwrap();
        let p = s.delta_profile();
        assert_eq!(p.delta[3], rat_int(1));
        assert_eq!(p.delta_prime[3], rat_int(6));
        assert!(!s.is_geodetic());
    }

    #[test]
    fn disconnected_is_rejected() {
        let g = Digraph::new(3, &[(0, 1), (0, 2)]).unwrap();
        assert!(matches!(DistanceStructure::new(&g), Err(Error::NotStronglyConnected)));
    }

    #[test]
    fn single_vertex() {
        let s = DistanceStructure::new(&Digraph::new(1, &[]).unwrap()).unwrap();
        assert_eq!(s.diameter(), 0);
        assert_eq!(s.delta_profile().delta, vec![rat_int(1)]);
    }
}
