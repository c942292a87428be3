//! Deterministic digraph families and enumeration of small labelled
//! digraphs.

use std::fmt;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::digraph::Digraph;
use crate::error::{Error, Result};
use crate::linalg::normality_test;

/// A named family with its parameters.
#[derive(Clone, Debug, PartialEq)]
pub enum Family {
    DirectedCycle(usize),
    Complete(usize),
    CompleteBipartite(usize, usize),
    /// Symmetrized path on `n` vertices.
    Path(usize),
    Hypercube(u32),
    Petersen,
    /// `O_k`: `(k-1)`-subsets of a `(2k-1)`-set, adjacent when disjoint;
    /// `O_3` is the Petersen graph.
    OddGraph(usize),
    /// `u -> v` iff `v - u mod n` lies in the connection set.
    Circulant { n: usize, connections: Vec<usize> },
    /// `u -> v` iff `v - u` is a nonzero square mod the prime `q = 3 mod 4`.
    PaleyTournament(usize),
    /// `A ⊗ J_m` on `V x [m]`.
    TensorLift { inner: Box<Family>, m: usize },
    EdgeList(Digraph),
}

/// A property a family member is advertised to have.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Property {
    DistanceRegular,
    Normal,
    Bipartite,
    StronglyConnected,
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Family::DirectedCycle(n) => write!(f, "directed_cycle({n})"),
            Family::Complete(n) => write!(f, "complete({n})"),
            Family::CompleteBipartite(a, b) => write!(f, "complete_bipartite({a},{b})"),
            Family::Path(n) => write!(f, "path({n})"),
            Family::Hypercube(k) => write!(f, "hypercube({k})"),
            Family::Petersen => write!(f, "petersen"),
            Family::OddGraph(k) => write!(f, "kneser_odd_graph({k})"),
            Family::Circulant { n, connections } => {
                let s: Vec<String> = connections.iter().map(ToString::to_string).collect();
                write!(f, "circulant({n},{{{}}})", s.join(","))
            }
            Family::PaleyTournament(q) => write!(f, "paley_tournament({q})"),
            Family::TensorLift { inner, m } => write!(f, "tensor_lift({inner},{m})"),
            Family::EdgeList(g) => write!(f, "edgelist(n={})", g.n()),
        }
    }
}

fn invalid(msg: impl Into<String>) -> Error {
    Error::InvalidFamily(msg.into())
}

fn is_prime(q: usize) -> bool {
    q >= 2 && (2..).take_while(|d| d * d <= q).all(|d| !q.is_multiple_of(d))
}

fn binomial(n: usize, k: usize) -> usize {
    (0..k).fold(1usize, |acc, i| acc * (n - i) / (i + 1))
}

impl Family {
    /// Parses `name` and whitespace- or comma-separated integer parameters.
    pub fn parse(name: &str, params: &[String]) -> Result<Self> {
        let nums: Vec<usize> = params
            .iter()
            .flat_map(|p| p.split(',').map(str::trim).filter(|s| !s.is_empty()).map(str::to_owned).collect::<Vec<_>>())
            .map(|s| {
                s.trim_matches(|c| c == '{' || c == '}')
                    .parse::<usize>()
                    .map_err(|_| invalid(format!("parameter {s:?} is not a non-negative integer")))
            })
            .collect::<Result<_>>()?;
        let want = |k: usize| -> Result<()> {
            if nums.len() == k {
                Ok(())
            } else {
                Err(invalid(format!("{name} takes {k} parameter(s), got {}", nums.len())))
            }
        };
        let family = match name {
            "directed_cycle" | "cycle" => {
                want(1)?;
                Family::DirectedCycle(nums[0])
            }
            "complete" => {
                want(1)?;
                Family::Complete(nums[0])
            }
            "complete_bipartite" => {
                want(2)?;
                Family::CompleteBipartite(nums[0], nums[1])
            }
            "path" => {
                want(1)?;
                Family::Path(nums[0])
            }
            "hypercube" => {
                want(1)?;
                Family::Hypercube(u32::try_from(nums[0]).map_err(|_| invalid("hypercube dimension too large"))?)
            }
            "petersen" => {
                want(0)?;
                Family::Petersen
            }
            "kneser_odd_graph" | "odd_graph" => {
                want(1)?;
                Family::OddGraph(nums[0])
            }
            "circulant" => {
                if nums.is_empty() {
                    return Err(invalid("circulant takes n followed by the connection set"));
                }
                Family::Circulant {
                    n: nums[0],
                    connections: nums[1..].to_vec(),
                }
            }
            "paley_tournament" | "paley" => {
                want(1)?;
                Family::PaleyTournament(nums[0])
            }
            other => return Err(invalid(format!("unknown family {other:?}"))),
        };
        family.validate()?;
        Ok(family)
    }

    pub fn lift(self, m: usize) -> Result<Self> {
        let f = Family::TensorLift {
            inner: Box::new(self),
            m,
        };
        f.validate()?;
        Ok(f)
    }

    pub fn validate(&self) -> Result<()> {
        match self {
            Family::DirectedCycle(n) if *n < 2 => Err(invalid("directed_cycle needs n >= 2")),
            Family::Complete(n) if *n < 1 => Err(invalid("complete needs n >= 1")),
            Family::CompleteBipartite(a, b) if *a < 1 || *b < 1 => {
                Err(invalid("complete_bipartite needs both parts non-empty"))
            }
            Family::Path(n) if *n < 1 => Err(invalid("path needs n >= 1")),
            Family::Hypercube(k) if *k > 20 => Err(invalid("hypercube dimension is limited to 20")),
            Family::OddGraph(k) if *k < 2 || *k > 8 => Err(invalid("kneser_odd_graph needs 2 <= k <= 8")),
            Family::Circulant { n, connections } => {
                if *n < 1 {
                    return Err(invalid("circulant needs n >= 1"));
                }
                let mut seen = vec![false; *n];
                for &c in connections {
                    if c == 0 || c >= *n {
                        return Err(invalid(format!("connection {c} not in Z_{n} minus 0")));
                    }
                    if std::mem::replace(&mut seen[c], true) {
                        return Err(invalid(format!("connection {c} repeated")));
                    }
                }
                Ok(())
            }
            Family::PaleyTournament(q) if !is_prime(*q) || q % 4 != 3 => {
                Err(invalid(format!("paley_tournament needs a prime q = 3 mod 4, got {q}")))
            }
            Family::TensorLift { inner, m } => {
                if *m < 2 {
                    return Err(invalid("tensor_lift needs m >= 2"));
                }
                inner.validate()
            }
            _ => Ok(()),
        }
    }

    /// Properties every member of the family has.
    pub fn advertised(&self) -> Vec<Property> {
        use Property::*;
        match self {
            Family::DirectedCycle(n) => {
                let mut p = vec![StronglyConnected, DistanceRegular, Normal];
                if n % 2 == 0 {
                    p.push(Bipartite);
                }
                p
            }
            Family::Complete(_) | Family::Petersen | Family::OddGraph(_) => {
                vec![StronglyConnected, DistanceRegular, Normal]
            }
            Family::CompleteBipartite(a, b) => {
                let mut p = vec![StronglyConnected, Bipartite];
                if a == b {
                    p.extend([DistanceRegular, Normal]);
                }
                p
            }
            Family::Path(_) => vec![StronglyConnected, Bipartite, Normal],
            Family::Hypercube(_) => vec![StronglyConnected, DistanceRegular, Normal, Bipartite],
            Family::Circulant { .. } => vec![Normal],
            Family::PaleyTournament(_) => vec![StronglyConnected, DistanceRegular, Normal],
            // the lift of a directed g-cycle is distance-regular with D = g;
            // other lifts promise nothing
            Family::TensorLift { inner, .. } => match **inner {
                Family::DirectedCycle(_) => vec![StronglyConnected, DistanceRegular, Normal],
                _ => vec![],
            },
            Family::EdgeList(_) => vec![],
        }
    }

    pub fn build(&self) -> Result<Digraph> {
        self.validate()?;
        let g = match self {
            Family::DirectedCycle(n) => Digraph::from_adjacency(*n, |u, v| v == (u + 1) % n)?,
            Family::Complete(n) => Digraph::from_adjacency(*n, |u, v| u != v)?,
            Family::CompleteBipartite(a, b) => Digraph::from_adjacency(a + b, |u, v| (u < *a) != (v < *a))?,
            Family::Path(n) => Digraph::from_adjacency(*n, |u, v| u.abs_diff(v) == 1)?,
            Family::Hypercube(k) => Digraph::from_adjacency(1 << k, |u, v| (u ^ v).count_ones() == 1)?,
            Family::Petersen => Family::OddGraph(3).build()?,
            Family::OddGraph(k) => {
                let ground = 2 * k - 1;
                let subsets: Vec<u32> = (0u32..1 << ground).filter(|s| s.count_ones() as usize == k - 1).collect();
                debug_assert_eq!(subsets.len(), binomial(ground, k - 1));
                Digraph::from_adjacency(subsets.len(), |u, v| subsets[u] & subsets[v] == 0 && u != v)?
            }
            Family::Circulant { n, connections } => {
                Digraph::from_adjacency(*n, |u, v| connections.contains(&((v + n - u) % n)))?
            }
            Family::PaleyTournament(q) => {
                let squares: Vec<bool> = {
                    let mut s = vec![false; *q];
                    for x in 1..*q {
                        s[x * x % q] = true;
                    }
                    s
                };
                Digraph::from_adjacency(*q, |u, v| u != v && squares[(v + q - u) % q])?
            }
            Family::TensorLift { inner, m } => {
                let g = inner.build()?;
                Digraph::from_adjacency(g.n() * m, |x, y| g.has_arc(x / m, y / m))?
            }
            Family::EdgeList(g) => g.clone(),
        };
        Ok(g)
    }
}

/// Enumeration filter.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Filter {
    All,
    StronglyConnected,
    Normal,
}

impl Filter {
    pub fn accepts(self, g: &Digraph) -> bool {
        match self {
            Filter::All => true,
            Filter::StronglyConnected => g.is_strongly_connected(),
            Filter::Normal => normality_test(g),
        }
    }
}

pub const EXHAUSTIVE_CAP: usize = 5;
pub const SAMPLED_CAP: usize = 6;
pub const DEFAULT_SEED: u64 = 0x5eed_d16a;

/// Labelled loopless digraphs on `n` vertices.
///
/// Bit `b` of the index is the arc `(u, v)` at position `b` of the
/// row-major list of off-diagonal pairs, so exhaustive order is by index.
/// With a sample limit, uniformly random indices are drawn from a ChaCha8
/// stream seeded by `seed` until `limit` of them pass the filter; draws are
/// independent, so repeats are possible.
#[derive(Clone, Debug)]
pub struct Enumeration {
    pub n: usize,
    pub filter: Filter,
    pub sample: Option<usize>,
    pub seed: u64,
}

impl Enumeration {
    pub fn exhaustive(n: usize, filter: Filter) -> Self {
        Enumeration {
            n,
            filter,
            sample: None,
            seed: DEFAULT_SEED,
        }
    }

    pub fn sampled(n: usize, filter: Filter, limit: usize, seed: u64) -> Self {
        Enumeration {
            n,
            filter,
            sample: Some(limit),
            seed,
        }
    }

    pub fn pairs(n: usize) -> Vec<(usize, usize)> {
        (0..n).flat_map(|u| (0..n).filter(move |&v| v != u).map(move |v| (u, v))).collect()
    }

    pub fn digraph_from_index(n: usize, pairs: &[(usize, usize)], index: u64) -> Digraph {
        let arcs: Vec<_> = pairs
            .iter()
            .enumerate()
            .filter(|(b, _)| index >> b & 1 == 1)
            .map(|(_, &p)| p)
            .collect();
        Digraph::new(n, &arcs).expect("off-diagonal pairs are valid arcs")
    }

    pub fn iter(&self) -> Result<Box<dyn Iterator<Item = Digraph> + Send>> {
        let n = self.n;
        let cap = if self.sample.is_some() { SAMPLED_CAP } else { EXHAUSTIVE_CAP };
        if n > cap || n == 0 {
            return Err(Error::EnumerationCap { n, cap });
        }
        let pairs = Self::pairs(n);
        let total: u64 = 1 << pairs.len();
        let filter = self.filter;
        Ok(match self.sample {
            None => Box::new(
                (0..total)
                    .map(move |i| Self::digraph_from_index(n, &pairs, i))
                    .filter(move |g| filter.accepts(g)),
            ),
            Some(limit) => {
                let mut rng = ChaCha8Rng::seed_from_u64(self.seed);
                Box::new(
                    std::iter::repeat_with(move || {
                        let i = rng.random::<u64>() & (total - 1);
                        Self::digraph_from_index(n, &pairs, i)
                    })
                    .filter(move |g| filter.accepts(g))
                    .take(limit),
                )
            }
        })
    }
}

/// Shorthand for [`Enumeration::iter`].
pub fn enumerate_digraphs(
    n: usize,
    filter: Filter,
    sample: Option<usize>,
) -> Result<Box<dyn Iterator<Item = Digraph> + Send>> {
    match sample {
        None => Enumeration::exhaustive(n, filter).iter(),
        Some(k) => Enumeration::sampled(n, filter, k, DEFAULT_SEED).iter(),
    }
}
