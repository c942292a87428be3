//! Brute-force oracles that share no code with the library: plain BFS,
//! explicit set counting and Gram-Schmidt run directly on matrices.

#![allow(dead_code)]

use std::collections::{HashMap, VecDeque};

use dgexcess::Digraph;
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

pub type Dense = Vec<Vec<i64>>;

pub fn adjacency(g: &Digraph) -> Dense {
    (0..g.n()).map(|u| (0..g.n()).map(|v| g.has_arc(u, v) as i64).collect()).collect()
}

pub fn multiply(a: &Dense, b: &Dense) -> Dense {
    let n = a.len();
    let mut c = vec![vec![0i64; n]; n];
    for i in 0..n {
        for k in 0..n {
            if a[i][k] != 0 {
                for j in 0..n {
                    c[i][j] += a[i][k] * b[k][j];
                }
            }
        }
    }
    c
}

pub fn transpose(a: &Dense) -> Dense {
    let n = a.len();
    (0..n).map(|i| (0..n).map(|j| a[j][i]).collect()).collect()
}

/// `dist[u][v]`, `None` when `v` is unreachable from `u`.
pub fn distances(g: &Digraph) -> Vec<Vec<Option<usize>>> {
    let n = g.n();
    (0..n)
        .map(|s| {
            let mut d = vec![None; n];
            d[s] = Some(0);
            let mut queue = VecDeque::from([s]);
            while let Some(u) = queue.pop_front() {
                for v in 0..n {
                    if g.has_arc(u, v) && d[v].is_none() {
                        d[v] = Some(d[u].unwrap() + 1);
                        queue.push_back(v);
                    }
                }
            }
            d
        })
        .collect()
}

pub fn strongly_connected(g: &Digraph) -> bool {
    distances(g).iter().all(|row| row.iter().all(Option::is_some))
}

pub fn diameter(dist: &[Vec<Option<usize>>]) -> usize {
    dist.iter().flatten().map(|d| d.expect("strongly connected")).max().unwrap_or(0)
}

pub fn normal(g: &Digraph) -> bool {
    let a = adjacency(g);
    let t = transpose(&a);
    multiply(&a, &t) == multiply(&t, &a)
}

/// Two-colouring of the underlying undirected graph.
pub fn bipartite(g: &Digraph) -> bool {
    let n = g.n();
    let mut colour: Vec<Option<bool>> = vec![None; n];
    for s in 0..n {
        if colour[s].is_some() {
            continue;
        }
        colour[s] = Some(false);
        let mut stack = vec![s];
        while let Some(u) = stack.pop() {
            for v in (0..n).filter(|&v| g.has_arc(u, v) || g.has_arc(v, u)) {
                match colour[v] {
                    None => {
                        colour[v] = Some(!colour[u].unwrap());
                        stack.push(v);
                    }
                    Some(c) if c == colour[u].unwrap() => return false,
                    Some(_) => {}
                }
            }
        }
    }
    true
}

/// `|{w : d(u,w) = i, d(w,v) = j}|` depends only on `(d(u,v), i, j)`.
pub fn weakly_distance_regular(g: &Digraph) -> bool {
    let dist = distances(g);
    let n = g.n();
    let mut seen: HashMap<(usize, usize, usize), usize> = HashMap::new();
    for u in 0..n {
        for v in 0..n {
            let k = dist[u][v].unwrap();
            let mut counts: HashMap<(usize, usize), usize> = HashMap::new();
            for (w, row) in dist.iter().enumerate() {
                *counts.entry((dist[u][w].unwrap(), row[v].unwrap())).or_default() += 1;
            }
            let diam = diameter(&dist);
            for i in 0..=diam {
                for j in 0..=diam {
                    let c = counts.get(&(i, j)).copied().unwrap_or(0);
                    if *seen.entry((k, i, j)).or_insert(c) != c {
                        return false;
                    }
                }
            }
        }
    }
    true
}

/// `A A_k` is constant on every distance class for each `k`, so the
/// distance matrices span an algebra closed under `A`, i.e. every `A_k`
/// is a polynomial in `A`.
pub fn distance_regular(g: &Digraph) -> bool {
    let dist = distances(g);
    let n = g.n();
    let diam = diameter(&dist);
    (0..=diam).all(|k| {
        let mut by_class: HashMap<usize, usize> = HashMap::new();
        (0..n).all(|u| {
            (0..n).all(|v| {
                let c = (0..n).filter(|&w| g.has_arc(u, w) && dist[w][v] == Some(k)).count();
                *by_class.entry(dist[u][v].unwrap()).or_insert(c) == c
            })
        })
    })
}

/// Every pair at distance `k` is joined by exactly one shortest path.
pub fn geodetic(g: &Digraph) -> bool {
    let dist = distances(g);
    let a = adjacency(g);
    let n = g.n();
    let mut power = (0..n).map(|i| (0..n).map(|j| (i == j) as i64).collect()).collect::<Dense>();
    for k in 0..=diameter(&dist) {
        for u in 0..n {
            for v in 0..n {
                if dist[u][v] == Some(k) && power[u][v] != 1 {
                    return false;
                }
            }
        }
        power = multiply(&power, &a);
    }
    true
}

/// Shortest odd directed cycle by exhaustive simple-cycle search; `None`
/// when there is none. Exponential, meant for tiny digraphs.
pub fn odd_girth(g: &Digraph) -> Option<usize> {
    fn walk(g: &Digraph, start: usize, u: usize, len: usize, used: &mut Vec<bool>, best: &mut Option<usize>) {
        for v in 0..g.n() {
            if !g.has_arc(u, v) {
                continue;
            }
            if v == start && (len + 1) % 2 == 1 {
                *best = Some(best.map_or(len + 1, |b| b.min(len + 1)));
            } else if v > start && !used[v] {
                used[v] = true;
                walk(g, start, v, len + 1, used, best);
                used[v] = false;
            }
        }
    }
    let mut best = None;
    for s in 0..g.n() {
        let mut used = vec![false; g.n()];
        used[s] = true;
        walk(g, s, s, 0, &mut used, &mut best);
    }
    best
}

fn rational(x: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(x))
}

type Flat = Vec<BigRational>;

fn inner(c: &Flat, d: &Flat, n: usize) -> BigRational {
    c.iter().zip(d).map(|(x, y)| x * y).fold(BigRational::zero(), |a, b| a + b) / rational(n as i64)
}

/// Gram-Schmidt on `I, A, A^2, ...` as matrices under `<C,D> = tr(C D^T) / n`,
/// stopping at the first null residual. Returns `||P_k(A)||^2` for each
/// surviving degree; the count is the degree of the minimal polynomial.
pub fn predistance_norms(g: &Digraph) -> Vec<BigRational> {
    let n = g.n();
    let a = adjacency(g);
    let flatten = |m: &Dense| -> Flat { m.iter().flatten().map(|&x| rational(x)).collect() };
    let mut power: Dense = (0..n).map(|i| (0..n).map(|j| (i == j) as i64).collect()).collect();
    let mut basis: Vec<(Flat, BigRational)> = Vec::new();
    loop {
        let mut r = flatten(&power);
        for (p, norm) in &basis {
            let c = inner(&r, p, n) / norm;
            for (x, y) in r.iter_mut().zip(p) {
                *x -= &c * y;
            }
        }
        let norm = inner(&r, &r, n);
        if norm.is_zero() {
            return basis.into_iter().map(|(_, n)| n).collect();
        }
        basis.push((r, norm));
        power = multiply(&power, &a);
    }
}

/// `(simple excess, spectral excess, ||Q_d||^2)` from first principles for
/// a normal strongly connected digraph, where `d + 1` is the degree of the
/// minimal polynomial.
pub struct Excesses {
    pub simple: BigRational,
    pub spectral: BigRational,
    pub q_norm2: BigRational,
}

pub fn excesses(g: &Digraph) -> Excesses {
    assert!(normal(g), "the oracle's d is only the eigenvalue count for normal digraphs");
    let norms = predistance_norms(g);
    let d = norms.len() - 1;
    let dist = distances(g);
    let n = g.n();
    let simple = if d > diameter(&dist) {
        BigRational::zero()
    } else {
        let a = adjacency(g);
        let mut power: Dense = (0..n).map(|i| (0..n).map(|j| (i == j) as i64).collect()).collect();
        for _ in 0..d {
            power = multiply(&power, &a);
        }
        let (mut at_d, mut paths) = (0i64, 0i64);
        for u in 0..n {
            for v in 0..n {
                if dist[u][v] == Some(d) {
                    at_d += 1;
                    paths += power[u][v];
                }
            }
        }
        let delta = rational(at_d) / rational(n as i64);
        let delta_prime = rational(paths) / rational(n as i64);
        &delta_prime * &delta_prime / delta
    };
    Excesses {
        simple,
        spectral: norms[d].clone(),
        q_norm2: norms.iter().fold(BigRational::zero(), |a, b| a + b),
    }
}

pub fn ratio(p: i64, q: i64) -> BigRational {
    BigRational::new(BigInt::from(p), BigInt::from(q))
}

pub fn one() -> BigRational {
    BigRational::one()
}
