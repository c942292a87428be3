//! Simple loopless digraphs and their purely combinatorial invariants.

use std::collections::VecDeque;
use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, Zero};
use serde::{Serialize, Serializer};

use crate::error::GraphError;
use crate::matrix::Matrix;

/// A simple digraph on vertices `0..n`: no loops, no repeated arcs.
#[derive(Clone, PartialEq, Eq)]
pub struct Digraph {
    n: usize,
    adjacency: Vec<bool>,
    out: Vec<Vec<usize>>,
    inn: Vec<Vec<usize>>,
}

impl fmt::Debug for Digraph {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Digraph")
            .field("n", &self.n)
            .field("arcs", &self.arcs().collect::<Vec<_>>())
            .finish()
    }
}

/// Length of the shortest (odd) cycle, or no such cycle at all.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum CycleLength {
    Finite(usize),
    Infinite,
}

impl CycleLength {
    pub fn finite(self) -> Option<usize> {
        match self {
            CycleLength::Finite(k) => Some(k),
            CycleLength::Infinite => None,
        }
    }

    pub fn is_infinite(self) -> bool {
        self == CycleLength::Infinite
    }
}

impl fmt::Display for CycleLength {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CycleLength::Finite(k) => write!(f, "{k}"),
            CycleLength::Infinite => write!(f, "infinite"),
        }
    }
}

impl Serialize for CycleLength {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        match self {
            CycleLength::Finite(k) => s.serialize_u64(*k as u64),
            CycleLength::Infinite => s.serialize_str("infinite"),
        }
    }
}

impl Digraph {
    /// Validates and builds a digraph. Loops, repeated arcs and vertices
    /// outside `0..n` are rejected, never silently dropped.
    pub fn new(n: usize, arcs: &[(usize, usize)]) -> Result<Self, GraphError> {
        if n == 0 {
            return Err(GraphError::Empty);
        }
        let mut adjacency = vec![false; n * n];
        let mut out = vec![Vec::new(); n];
        let mut inn = vec![Vec::new(); n];
        for &(u, v) in arcs {
            for w in [u, v] {
                if w >= n {
                    return Err(GraphError::VertexOutOfRange { vertex: w, n });
                }
            }
            if u == v {
                return Err(GraphError::Loop { vertex: u });
            }
            if adjacency[u * n + v] {
                return Err(GraphError::DuplicateArc { from: u, to: v });
            }
            adjacency[u * n + v] = true;
            out[u].push(v);
            inn[v].push(u);
        }
        for list in out.iter_mut().chain(inn.iter_mut()) {
            list.sort_unstable();
        }
        Ok(Digraph {
            n,
            adjacency,
            out,
            inn,
        })
    }

    /// Builds from an `n x n` 0/1 pattern.
    pub fn from_adjacency(n: usize, has_arc: impl Fn(usize, usize) -> bool) -> Result<Self, GraphError> {
        let arcs: Vec<_> = (0..n)
            .flat_map(|u| (0..n).map(move |v| (u, v)))
            .filter(|&(u, v)| has_arc(u, v))
            .collect();
        Self::new(n, &arcs)
    }

    /// Each undirected edge `{u, v}` becomes the two arcs `u -> v`, `v -> u`.
    pub fn symmetric(n: usize, edges: &[(usize, usize)]) -> Result<Self, GraphError> {
        let arcs: Vec<_> = edges.iter().flat_map(|&(u, v)| [(u, v), (v, u)]).collect();
        Self::new(n, &arcs)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn arc_count(&self) -> usize {
        self.out.iter().map(Vec::len).sum()
    }

    /// Arcs in row-major order.
    pub fn arcs(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.out
            .iter()
            .enumerate()
            .flat_map(|(u, vs)| vs.iter().map(move |&v| (u, v)))
    }

    pub fn has_arc(&self, u: usize, v: usize) -> bool {
        self.adjacency[u * self.n + v]
    }

    pub fn out_neighbors(&self, u: usize) -> &[usize] {
        &self.out[u]
    }

    pub fn in_neighbors(&self, u: usize) -> &[usize] {
        &self.inn[u]
    }

    pub fn out_degree(&self, u: usize) -> usize {
        self.out[u].len()
    }

    pub fn in_degree(&self, u: usize) -> usize {
        self.inn[u].len()
    }

    pub fn adjacency_matrix(&self) -> Matrix<BigInt> {
        Matrix::from_fn(self.n, |u, v| {
            if self.has_arc(u, v) {
                BigInt::one()
            } else {
                BigInt::zero()
            }
        })
    }

    pub fn adjacency_f64(&self) -> Matrix<f64> {
        Matrix::from_fn(self.n, |u, v| if self.has_arc(u, v) { 1.0 } else { 0.0 })
    }

    /// True iff the adjacency matrix is symmetric, i.e. the digraph is a graph.
    pub fn is_symmetric(&self) -> bool {
        self.arcs().all(|(u, v)| self.has_arc(v, u))
    }

    /// The digraph with every arc reversed.
    pub fn reversed(&self) -> Digraph {
        let arcs: Vec<_> = self.arcs().map(|(u, v)| (v, u)).collect();
        Digraph::new(self.n, &arcs).expect("reversal preserves simplicity")
    }

    /// Directed BFS distances from `source`; `None` when unreachable.
    pub fn bfs(&self, source: usize) -> Vec<Option<usize>> {
        let mut dist = vec![None; self.n];
        let mut queue = VecDeque::new();
        dist[source] = Some(0);
        queue.push_back(source);
        while let Some(u) = queue.pop_front() {
            let du = dist[u].unwrap();
            for &v in &self.out[u] {
                if dist[v].is_none() {
                    dist[v] = Some(du + 1);
                    queue.push_back(v);
                }
            }
        }
        dist
    }

    /// Every ordered pair joined by a directed path. Checked as: everything
    /// reachable from vertex 0 in the digraph and in its reverse.
    pub fn is_strongly_connected(&self) -> bool {
        let forward = self.bfs(0).iter().all(Option::is_some);
        forward && self.reversed().bfs(0).iter().all(Option::is_some)
    }

    /// `Some(k)` iff every in- and out-degree equals `k`.
    pub fn regularity(&self) -> Option<usize> {
        let k = self.out_degree(0);
        (0..self.n)
            .all(|u| self.out_degree(u) == k && self.in_degree(u) == k)
            .then_some(k)
    }

    /// Girth and odd-girth via BFS.
    ///
    /// The shortest cycle through `s` closes an arc `u -> s` with a shortest
    /// `s -> u` path. The shortest odd closed walk (which is always an odd
    /// cycle) through `s` is the distance from `(s, even)` to `(s, odd)` in
    /// the parity double cover.
    pub fn girth_and_odd_girth(&self) -> (CycleLength, CycleLength) {
        let mut girth = CycleLength::Infinite;
        let mut odd = CycleLength::Infinite;
        for s in 0..self.n {
            let dist = self.bfs(s);
            for &u in &self.inn[s] {
                if let Some(d) = dist[u] {
                    girth = girth.min(CycleLength::Finite(d + 1));
                }
            }
            if let Some(len) = self.parity_distance(s) {
                odd = odd.min(CycleLength::Finite(len));
            }
        }
        (girth, odd)
    }

    fn parity_distance(&self, s: usize) -> Option<usize> {
        let mut dist = vec![[None::<usize>; 2]; self.n];
        let mut queue = VecDeque::new();
        dist[s][0] = Some(0);
        queue.push_back((s, 0usize));
        while let Some((u, p)) = queue.pop_front() {
            let du = dist[u][p].unwrap();
            for &v in &self.out[u] {
                let q = 1 - p;
                if dist[v][q].is_none() {
                    dist[v][q] = Some(du + 1);
                    if v == s && q == 1 {
                        return Some(du + 1);
                    }
                    queue.push_back((v, q));
                }
            }
        }
        None
    }

    /// No odd directed closed walk. Labels vertices with the parity of their
    /// BFS distance from vertex 0 and looks for an arc that fails to flip the
    /// parity. Assumes strong connectivity.
    pub fn is_bipartite(&self) -> bool {
        let dist = self.bfs(0);
        self.arcs().all(|(u, v)| match (dist[u], dist[v]) {
            (Some(a), Some(b)) => a % 2 != b % 2,
            _ => true,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cycle(n: usize) -> Digraph {
        let arcs: Vec<_> = (0..n).map(|i| (i, (i + 1) % n)).collect();
        Digraph::new(n, &arcs).unwrap()
    }

    fn complete(n: usize) -> Digraph {
        Digraph::from_adjacency(n, |u, v| u != v).unwrap()
    }

    fn petersen() -> Digraph {
        let mut edges = Vec::new();
        for i in 0..5 {
            edges.push((i, (i + 1) % 5));
            edges.push((i, i + 5));
            edges.push((5 + i, 5 + (i + 2) % 5));
        }
        Digraph::symmetric(10, &edges).unwrap()
    }

    #[test]
    fn construction_errors_are_distinct() {
        assert!(Digraph::new(3, &[(0, 1), (1, 2), (2, 0)]).is_ok());
        assert!(Digraph::new(1, &[]).is_ok());
        assert_eq!(Digraph::new(3, &[(0, 0)]), Err(GraphError::Loop { vertex: 0 }));
        assert_eq!(
            Digraph::new(3, &[(0, 1), (0, 1)]),
            Err(GraphError::DuplicateArc { from: 0, to: 1 })
        );
        assert_eq!(
            Digraph::new(3, &[(0, 3)]),
            Err(GraphError::VertexOutOfRange { vertex: 3, n: 3 })
        );
        assert_eq!(Digraph::new(0, &[]), Err(GraphError::Empty));
    }

    #[test]
    fn strong_connectivity() {
        assert!(cycle(3).is_strongly_connected());
        assert!(!Digraph::new(3, &[(0, 1), (0, 2)]).unwrap().is_strongly_connected());
        assert!(complete(4).is_strongly_connected());
        assert!(Digraph::new(1, &[]).unwrap().is_strongly_connected());
    }

    #[test]
    fn girths() {
        assert_eq!(
            cycle(3).girth_and_odd_girth(),
            (CycleLength::Finite(3), CycleLength::Finite(3))
        );
        assert_eq!(
            cycle(4).girth_and_odd_girth(),
            (CycleLength::Finite(4), CycleLength::Infinite)
        );
        assert_eq!(
            petersen().girth_and_odd_girth(),
            (CycleLength::Finite(2), CycleLength::Finite(5))
        );
        assert_eq!(
            Digraph::new(1, &[]).unwrap().girth_and_odd_girth(),
            (CycleLength::Infinite, CycleLength::Infinite)
        );
    }

    #[test]
    fn bipartite() {
        assert!(cycle(4).is_bipartite());
        assert!(!cycle(3).is_bipartite());
        let k23 = Digraph::symmetric(5, &[(0, 2), (0, 3), (0, 4), (1, 2), (1, 3), (1, 4)]).unwrap();
        assert!(k23.is_bipartite());
        assert!(!petersen().is_bipartite());
    }

    #[test]
    fn regularity() {
        assert_eq!(complete(4).regularity(), Some(3));
        assert_eq!(Digraph::symmetric(3, &[(0, 1), (1, 2)]).unwrap().regularity(), None);
        assert_eq!(cycle(5).regularity(), Some(1));
        // out-regular but not in-regular
        let g = Digraph::new(3, &[(0, 1), (1, 0), (2, 0)]).unwrap();
        assert_eq!(g.regularity(), None);
    }
}
