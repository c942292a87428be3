//! Decision procedures for weak and full distance-regularity: direct
//! intersection-number oracles and the excess-based spectral criteria,
//! plus odd-girth classification of normal digraphs.

use std::collections::{BTreeMap, BTreeSet};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Signed, Zero};
use serde::Serialize;

use crate::analysis::Analysis;
use crate::digraph::CycleLength;
use crate::distance::DistanceStructure;
use crate::error::{Error, Result};
use crate::excess::wdr_projection_sum;
use crate::hp::RealValue;
use crate::matrix::Matrix;
use crate::scalar::{abs_rational, rational_to_f64};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum TableKind {
    Wdr,
    Dr,
    Weighted,
}

/// Two vertex pairs at the same distance that disagree on one cell.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Witness {
    pub reference: (usize, usize),
    pub offending: (usize, usize),
    /// `(k, i, j)`.
    pub cell: (usize, usize, usize),
    pub reference_value: RealValue,
    pub offending_value: RealValue,
}

/// Intersection numbers keyed by `(k, i, j)`; zero cells are omitted.
///
/// For the `Dr` kind the key is `(k, i, 1)`. When inconsistent, `values`
/// holds the cells of the first pair met at each distance.
#[derive(Clone, Debug, PartialEq)]
pub struct IntersectionTable<T> {
    pub kind: TableKind,
    pub values: BTreeMap<(usize, usize, usize), T>,
    pub consistent: bool,
    pub witness: Option<Witness>,
}

impl<T> IntersectionTable<T> {
    pub fn get(&self, k: usize, i: usize, j: usize) -> Option<&T> {
        self.values.get(&(k, i, j))
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Method {
    Direct,
    SpectralExact,
    SpectralNumeric,
}

/// `lhs` against `rhs`; `tolerance` is set when the equality was decided
/// numerically as `|lhs - rhs| <= tolerance * max(1, |rhs|)`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Comparison {
    pub lhs: RealValue,
    pub rhs: RealValue,
    pub difference: RealValue,
    pub tolerance: Option<f64>,
    pub equal: bool,
}

impl Comparison {
    pub fn exact(lhs: BigRational, rhs: BigRational) -> Self {
        let equal = lhs == rhs;
        Comparison {
            difference: RealValue::Exact(&lhs - &rhs),
            lhs: RealValue::Exact(lhs),
            rhs: RealValue::Exact(rhs),
            tolerance: None,
            equal,
        }
    }

    pub fn integers(lhs: usize, rhs: usize) -> Self {
        Self::exact(BigRational::from_integer(lhs.into()), BigRational::from_integer(rhs.into()))
    }

    /// Exact when both sides are; otherwise relative to `max(1, |rhs|)`.
    pub fn within(lhs: RealValue, rhs: RealValue, tol: f64) -> Self {
        if let (RealValue::Exact(a), RealValue::Exact(b)) = (&lhs, &rhs) {
            return Self::exact(a.clone(), b.clone());
        }
        let (a, b) = (lhs.to_rational(), rhs.to_rational());
        let diff = &a - &b;
        let scale = rational_to_f64(&abs_rational(&b)).max(1.0);
        let equal = rational_to_f64(&abs_rational(&diff)) <= tol * scale;
        Comparison {
            difference: RealValue::Numeric(crate::hp::Fixed::from_rational(&diff, 128)),
            lhs,
            rhs,
            tolerance: Some(tol),
            equal,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Condition {
    pub name: &'static str,
    pub holds: bool,
}

#[derive(Clone, Debug, Default, PartialEq, Serialize)]
pub struct Certificate {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub comparison: Option<Comparison>,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub conditions: Vec<Condition>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness: Option<Witness>,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Verdict {
    pub property: &'static str,
    pub decision: bool,
    pub method: Method,
    pub certificate: Certificate,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub note: Option<String>,
}

fn exact_int(v: u64) -> RealValue {
    RealValue::Exact(BigRational::from_integer(v.into()))
}

/// First pair seen at each distance with its counts.
type Reference = Option<((usize, usize), Vec<u64>)>;

/// `p^k_ij(u, v) = |Gamma^+_i(u) ∩ Gamma^-_j(v)|` for every pair.
pub fn wdr_table(s: &DistanceStructure) -> IntersectionTable<u64> {
    let n = s.n();
    let w = s.diameter() + 1;
    let mut refs: Vec<Reference> = vec![None; w];
    let mut counts = vec![0u64; w * w];
    let mut witness = None;
    for u in 0..n {
        for v in 0..n {
            counts.fill(0);
            for x in 0..n {
                counts[s.dist(u, x) * w + s.dist(x, v)] += 1;
            }
            let k = s.dist(u, v);
            match &refs[k] {
                None => refs[k] = Some(((u, v), counts.clone())),
                Some((pair, r)) if witness.is_none() && *r != counts => {
                    let idx = (0..w * w).find(|&i| r[i] != counts[i]).unwrap();
                    witness = Some(Witness {
                        reference: *pair,
                        offending: (u, v),
                        cell: (k, idx / w, idx % w),
                        reference_value: exact_int(r[idx]),
                        offending_value: exact_int(counts[idx]),
                    });
                }
                Some(_) => {}
            }
        }
    }
    let values = refs
        .into_iter()
        .enumerate()
        .filter_map(|(k, r)| r.map(|(_, c)| (k, c)))
        .flat_map(|(k, c)| {
            c.into_iter()
                .enumerate()
                .filter(|&(_, v)| v != 0)
                .map(move |(idx, v)| ((k, idx / w, idx % w), v))
                .collect::<Vec<_>>()
        })
        .collect();
    IntersectionTable {
        kind: TableKind::Wdr,
        values,
        consistent: witness.is_none(),
        witness,
    }
}

/// `|Gamma^+_i(u) ∩ Gamma^+_1(v)|` for pairs at distance `1 <= k <= D`
/// and `0 <= i <= k + 1`. Out-neighbours of `v` lie within distance
/// `k + 1` of `u`, so a histogram over them covers every `i`.
pub fn dr_table(s: &DistanceStructure, g: &crate::digraph::Digraph) -> IntersectionTable<u64> {
    let mut refs: Vec<Reference> = vec![None; s.diameter() + 1];
    let mut witness = None;
    for (k, reference) in refs.iter_mut().enumerate().skip(1) {
        for (u, v) in s.pairs_at(k) {
            let mut hist = vec![0u64; k + 2];
            for &x in g.out_neighbors(v) {
                hist[s.dist(u, x)] += 1;
            }
            match reference {
                None => *reference = Some(((u, v), hist)),
                Some((pair, r)) if witness.is_none() && *r != hist => {
                    let i = (0..k + 2).find(|&i| r[i] != hist[i]).unwrap();
                    witness = Some(Witness {
                        reference: *pair,
                        offending: (u, v),
                        cell: (k, i, 1),
                        reference_value: exact_int(r[i]),
                        offending_value: exact_int(hist[i]),
                    });
                }
                Some(_) => {}
            }
        }
    }
    let values = refs
        .into_iter()
        .enumerate()
        .filter_map(|(k, r)| r.map(|(_, c)| (k, c)))
        .flat_map(|(k, c)| {
            c.into_iter()
                .enumerate()
                .filter(|&(_, v)| v != 0)
                .map(move |(i, v)| ((k, i, 1), v))
                .collect::<Vec<_>>()
        })
        .collect();
    IntersectionTable {
        kind: TableKind::Dr,
        values,
        consistent: witness.is_none(),
        witness,
    }
}

fn table_verdict<T>(property: &'static str, table: &IntersectionTable<T>) -> Verdict {
    Verdict {
        property,
        decision: table.consistent,
        method: Method::Direct,
        certificate: Certificate {
            comparison: None,
            conditions: vec![Condition {
                name: "intersection numbers depend only on distance",
                holds: table.consistent,
            }],
            witness: table.witness.clone(),
        },
        note: None,
    }
}

pub fn wdr_direct(s: &DistanceStructure) -> (Verdict, IntersectionTable<u64>) {
    let table = wdr_table(s);
    (table_verdict("wdr", &table), table)
}

pub fn dr_direct(s: &DistanceStructure, g: &crate::digraph::Digraph) -> Verdict {
    table_verdict("dr", &dr_table(s, g))
}

/// `p~^k_ij(u, v) = sum of H(A)_ww over Gamma^+_i(u) ∩ Gamma^-_j(v)`.
///
/// With rounded `H` (`exact = false`) two cells agree when they differ by
/// at most `tol * max(1, |reference|)`.
pub fn weighted_intersection_table(
    s: &DistanceStructure,
    h: &Matrix<BigRational>,
    exact: bool,
    tol: f64,
) -> IntersectionTable<BigRational> {
    let n = s.n();
    let agree = |a: &BigRational, b: &BigRational| {
        if exact {
            a == b
        } else {
            let scale = rational_to_f64(&a.abs()).max(1.0);
            rational_to_f64(&(a - b).abs()) <= tol * scale
        }
    };
    type Cells = BTreeMap<(usize, usize), BigRational>;
    let mut refs: Vec<Option<((usize, usize), Cells)>> = vec![None; s.diameter() + 1];
    let mut witness = None;
    for u in 0..n {
        for v in 0..n {
            let mut cells = Cells::new();
            for x in 0..n {
                *cells.entry((s.dist(u, x), s.dist(x, v))).or_insert_with(BigRational::zero) += h.get(x, x);
            }
            cells.retain(|_, c| !c.is_zero());
            let k = s.dist(u, v);
            match &refs[k] {
                None => refs[k] = Some(((u, v), cells)),
                Some((pair, r)) if witness.is_none() => {
                    let zero = BigRational::zero();
                    let bad = r.keys().chain(cells.keys()).find(|key| {
                        !agree(r.get(key).unwrap_or(&zero), cells.get(key).unwrap_or(&zero))
                    });
                    if let Some(&(i, j)) = bad {
                        witness = Some(Witness {
                            reference: *pair,
                            offending: (u, v),
                            cell: (k, i, j),
                            reference_value: RealValue::Exact(r.get(&(i, j)).cloned().unwrap_or_default()),
                            offending_value: RealValue::Exact(cells.get(&(i, j)).cloned().unwrap_or_default()),
                        });
                    }
                }
                Some(_) => {}
            }
        }
    }
    let values = refs
        .into_iter()
        .enumerate()
        .filter_map(|(k, r)| r.map(|(_, c)| (k, c)))
        .flat_map(|(k, c)| c.into_iter().map(move |((i, j), v)| ((k, i, j), v)))
        .collect();
    IntersectionTable {
        kind: TableKind::Weighted,
        values,
        consistent: witness.is_none(),
        witness,
    }
}

fn normality_condition(a: &Analysis) -> Condition {
    Condition {
        name: "normal",
        holds: a.is_normal(),
    }
}

fn not_normal_note(a: &Analysis) -> Option<String> {
    (!a.is_normal()).then(|| "not normal: the equality criterion does not apply".to_owned())
}

/// Normal and simple excess equal to spectral excess, compared exactly.
pub fn dr_by_simple_set(a: &Analysis) -> Verdict {
    let comparison = Comparison::exact(a.simple_excess(), a.spectral_excess());
    Verdict {
        property: "dr",
        decision: a.is_normal() && comparison.equal,
        method: Method::SpectralExact,
        certificate: Certificate {
            comparison: Some(comparison),
            conditions: vec![normality_condition(a)],
            witness: None,
        },
        note: not_normal_note(a),
    }
}

/// Normal and weighted excess equal to spectral excess; exact when the
/// Perron value is rational, otherwise within `tol * max(1, eps_d)`.
pub fn dr_by_weighted_set(a: &Analysis) -> Result<Verdict> {
    let weighted = a.weighted_excess()?;
    let method = if weighted.is_exact() {
        Method::SpectralExact
    } else {
        Method::SpectralNumeric
    };
    let comparison = Comparison::within(weighted, RealValue::Exact(a.spectral_excess()), a.options().tol);
    Ok(Verdict {
        property: "dr",
        decision: a.is_normal() && comparison.equal,
        method,
        certificate: Certificate {
            comparison: Some(comparison),
            conditions: vec![normality_condition(a)],
            witness: None,
        },
        note: not_normal_note(a),
    })
}

/// Normal and `||Q_d||^2 = n`: distance-regular and geodetic.
pub fn geodetic_dr_check(a: &Analysis) -> Verdict {
    let n = BigRational::from_integer(a.n().into());
    let comparison = Comparison::exact(a.q_norm2(), n);
    Verdict {
        property: "geodetic-dr",
        decision: a.is_normal() && comparison.equal,
        method: Method::SpectralExact,
        certificate: Certificate {
            comparison: Some(comparison),
            conditions: vec![normality_condition(a)],
            witness: None,
        },
        note: not_normal_note(a),
    }
}

/// Weakly distance-regular iff `sum_k <A_k, P_k(A)>^2 / delta_k = n`.
pub fn wdr_by_projection_sum(a: &Analysis) -> Verdict {
    let sum = wdr_projection_sum(a.projection_table());
    let comparison = Comparison::exact(sum.total, BigRational::from_integer(a.n().into()));
    Verdict {
        property: "wdr",
        decision: comparison.equal,
        method: Method::SpectralExact,
        certificate: Certificate {
            comparison: Some(comparison),
            ..Certificate::default()
        },
        note: None,
    }
}

/// Distance-regular graph with odd girth `2D + 1`.
pub fn generalized_odd_graph_check(a: &Analysis) -> Verdict {
    let dr = dr_direct(a.structure(), a.graph()).decision;
    let symmetric = a.graph().is_symmetric();
    let (_, odd) = a.graph().girth_and_odd_girth();
    let target = 2 * a.diameter() + 1;
    let comparison = odd.finite().map(|go| Comparison::integers(go, target));
    let girth_matches = comparison.as_ref().is_some_and(|c| c.equal);
    Verdict {
        property: "generalized-odd-graph",
        decision: dr && symmetric && girth_matches,
        method: Method::Direct,
        certificate: Certificate {
            comparison,
            conditions: vec![
                Condition { name: "distance-regular", holds: dr },
                Condition { name: "symmetric", holds: symmetric },
                Condition { name: "odd girth is 2D+1", holds: girth_matches },
            ],
            witness: None,
        },
        note: None,
    }
}

/// Least odd `k` with `tr(A^k) != 0`; infinite when none is in `traces`.
pub fn odd_girth_spectral(traces: &[BigInt]) -> CycleLength {
    traces
        .iter()
        .enumerate()
        .skip(1)
        .step_by(2)
        .find(|(_, t)| !t.is_zero())
        .map_or(CycleLength::Infinite, |(k, _)| CycleLength::Finite(k))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Branch {
    Bipartite,
    GeneralizedOddGraph,
    SmallOddGirth,
}

/// Which of bipartite, generalized odd graph, or
/// `g_o <= min(2d - 1, 2D + 1)` hold for a normal digraph. An empty set
/// is returned as [`Error::Counterexample`].
pub fn trichotomy(a: &Analysis) -> Result<BTreeSet<Branch>> {
    if !a.is_normal() {
        return Err(Error::NotNormal);
    }
    let mut out = BTreeSet::new();
    if a.graph().is_bipartite() {
        out.insert(Branch::Bipartite);
    }
    if generalized_odd_graph_check(a).decision {
        out.insert(Branch::GeneralizedOddGraph);
    }
    let (_, odd) = a.graph().girth_and_odd_girth();
    let bound = (2 * a.d() as i64 - 1).min(2 * a.diameter() as i64 + 1);
    if odd.finite().is_some_and(|go| go as i64 <= bound) {
        out.insert(Branch::SmallOddGirth);
    }
    if out.is_empty() {
        return Err(Error::Counterexample(format!(
            "no odd-girth branch holds (odd girth {odd}, d = {}, D = {})",
            a.d(),
            a.diameter()
        )));
    }
    Ok(out)
}
