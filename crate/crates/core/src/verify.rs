//! Property harness: runs every excess, projection and odd-girth claim on
//! one digraph and tallies failures with counterexamples.
//!
//! Results merge commutatively, so digraphs can be checked in any order or
//! in parallel.

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::analysis::{Analysis, AnalysisOptions};
use crate::classify::{
    dr_by_weighted_set, dr_direct, generalized_odd_graph_check, odd_girth_spectral, trichotomy, wdr_direct,
    Comparison,
};
use crate::digraph::Digraph;
use crate::excess::{generalized_projection_sum, upper_projection_sum, wdr_projection_sum, SubsetVariant};
use crate::hp::RealValue;
use crate::io::write_edgelist;
use crate::report::SPECTRAL_ROUTE_TOLERANCE;

/// Counterexamples kept per suite; the failure count is always complete.
pub const MAX_EXAMPLES: usize = 5;

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Suite {
    /// Projection sums bounded by `n`, with equality iff weakly
    /// distance-regular.
    ProjectionBounds,
    /// Simple excess against spectral excess.
    SimpleExcess,
    /// Weighted excess against spectral excess.
    WeightedExcess,
    /// `||Q_d||^2 = n` iff distance-regular and geodetic.
    GeodeticExcess,
    /// `(pi0 / n)^2 delta_D` equals the simple excess on distance-regular
    /// members.
    PerronIdentity,
    /// Odd-girth bounds, the branch classification and the trace formula.
    OddGirth,
    /// Spectral-route pre-distance coefficients and `f(A) = A^T`.
    SpectralRoute,
    /// Distance-regular iff normal and weakly distance-regular.
    DrDefinition,
}

impl Suite {
    pub const ALL: [Suite; 8] = [
        Suite::ProjectionBounds,
        Suite::SimpleExcess,
        Suite::WeightedExcess,
        Suite::GeodeticExcess,
        Suite::PerronIdentity,
        Suite::OddGirth,
        Suite::SpectralRoute,
        Suite::DrDefinition,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Suite::ProjectionBounds => "projection-bounds",
            Suite::SimpleExcess => "simple-excess",
            Suite::WeightedExcess => "weighted-excess",
            Suite::GeodeticExcess => "geodetic-excess",
            Suite::PerronIdentity => "perron-identity",
            Suite::OddGirth => "odd-girth",
            Suite::SpectralRoute => "spectral-route",
            Suite::DrDefinition => "dr-definition",
        }
    }
}

impl fmt::Display for Suite {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Counterexample {
    pub detail: String,
    pub edgelist: String,
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Tally {
    /// Digraphs the suite applied to.
    pub checked: usize,
    pub failures: usize,
    pub examples: Vec<Counterexample>,
}

/// Per-suite tallies over a set of digraphs.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Summary {
    pub digraphs: usize,
    pub tallies: BTreeMap<Suite, Tally>,
}

impl Summary {
    pub fn merge(mut self, other: Summary) -> Summary {
        self.digraphs += other.digraphs;
        for (suite, t) in other.tallies {
            let mine = self.tallies.entry(suite).or_default();
            mine.checked += t.checked;
            mine.failures += t.failures;
            mine.examples.extend(t.examples);
            // keep the smallest counterexamples so merges are order-free
            mine.examples.sort_by(|a, b| (a.edgelist.len(), &a.edgelist, &a.detail).cmp(&(b.edgelist.len(), &b.edgelist, &b.detail)));
            mine.examples.dedup();
            mine.examples.truncate(MAX_EXAMPLES);
        }
        self
    }

    pub fn passed(&self) -> bool {
        self.tallies.values().all(|t| t.failures == 0)
    }

    pub fn tally(&self, suite: Suite) -> Tally {
        self.tallies.get(&suite).cloned().unwrap_or_default()
    }
}

#[derive(Clone, Debug)]
pub struct VerifyOptions {
    pub analysis: AnalysisOptions,
    /// Random subset systems per variant for the generalized bound.
    pub subset_systems: usize,
    pub seed: u64,
    pub spectral_route: bool,
}

impl Default for VerifyOptions {
    fn default() -> Self {
        VerifyOptions {
            analysis: AnalysisOptions::default(),
            subset_systems: 20,
            seed: crate::generators::DEFAULT_SEED,
            spectral_route: true,
        }
    }
}

/// Records applicability and failures for one digraph.
struct Recorder {
    edgelist: String,
    summary: Summary,
}

impl Recorder {
    fn applies(&mut self, suite: Suite) {
        self.summary.tallies.entry(suite).or_default().checked += 1;
    }

    fn expect(&mut self, suite: Suite, holds: bool, detail: impl FnOnce() -> String) {
        if holds {
            return;
        }
        let t = self.summary.tallies.entry(suite).or_default();
        t.failures += 1;
        if t.examples.len() < MAX_EXAMPLES {
            t.examples.push(Counterexample {
                detail: detail(),
                edgelist: self.edgelist.clone(),
            });
        }
    }
}

/// FNV-1a, so that subset systems depend only on the digraph and seed.
fn fingerprint(bytes: &[u8]) -> u64 {
    bytes
        .iter()
        .fold(0xcbf2_9ce4_8422_2325u64, |h, &b| (h ^ b as u64).wrapping_mul(0x0100_0000_01b3))
}

/// `D + 1` random non-empty subsets of `0..=D`, with `k` forced into
/// `S_k` when `contain_index`.
pub fn random_subsets(rng: &mut impl Rng, diameter: usize, contain_index: bool) -> Vec<Vec<usize>> {
    (0..=diameter)
        .map(|k| {
            let mut set: Vec<usize> = (0..=diameter).filter(|_| rng.random_bool(0.5)).collect();
            if contain_index && !set.contains(&k) {
                set.push(k);
                set.sort_unstable();
            }
            if set.is_empty() {
                set.push(rng.random_range(0..=diameter));
            }
            set
        })
        .collect()
}

fn int(n: usize) -> BigRational {
    BigRational::from_integer(BigInt::from(n))
}

/// Runs every applicable suite on `g`. Digraphs that are not strongly
/// connected are counted but not checked.
pub fn check_digraph(g: &Digraph, options: &VerifyOptions) -> Summary {
    let edgelist = write_edgelist(g);
    let mut r = Recorder {
        summary: Summary {
            digraphs: 1,
            tallies: BTreeMap::new(),
        },
        edgelist,
    };
    if !g.is_strongly_connected() {
        return r.summary;
    }
    let a = match Analysis::new(g.clone(), options.analysis.clone()) {
        Ok(a) => a,
        Err(e) => {
            for suite in Suite::ALL {
                r.applies(suite);
                r.expect(suite, false, || format!("analysis failed: {e}"));
            }
            return r.summary;
        }
    };
    let n = a.n();
    let s = a.structure();
    let normal = a.is_normal();
    let (wdr, _) = wdr_direct(s);
    let wdr = wdr.decision;
    let dr = dr_direct(s, g).decision;
    let eps = a.simple_excess();
    let eps_d = a.spectral_excess();

    r.applies(Suite::DrDefinition);
    r.expect(Suite::DrDefinition, dr == (normal && wdr), || {
        format!("dr_direct = {dr}, normal = {normal}, wdr_direct = {wdr}")
    });

    // projection sums
    r.applies(Suite::ProjectionBounds);
    let table = a.projection_table();
    let nn = int(n);
    for (name, sum) in [("weak", wdr_projection_sum(table)), ("upper", upper_projection_sum(table))] {
        r.expect(Suite::ProjectionBounds, sum.total <= nn, || format!("{name} sum {} > n", sum.total));
        r.expect(Suite::ProjectionBounds, (sum.total == nn) == wdr, || {
            format!("{name} sum {} vs n = {n}, wdr_direct = {wdr}", sum.total)
        });
        r.expect(Suite::ProjectionBounds, sum.within_bounds(), || format!("{name} sum exceeds a per-k bound"));
        r.expect(Suite::ProjectionBounds, sum.all_tight() == wdr, || {
            format!("{name} per-k bounds tight = {}, wdr_direct = {wdr}", sum.all_tight())
        });
    }
    let mut rng = ChaCha8Rng::seed_from_u64(options.seed ^ fingerprint(r.edgelist.as_bytes()));
    let diameter = a.diameter();
    for _ in 0..options.subset_systems {
        for (variant, contain) in [
            (SubsetVariant::PolynomialOntoLayers, true),
            (SubsetVariant::LayerOntoPolynomials, true),
            (SubsetVariant::PolynomialOntoLayers, false),
        ] {
            let subsets = random_subsets(&mut rng, diameter, contain);
            let total = match generalized_projection_sum(table, &subsets, variant) {
                Ok(t) => t,
                Err(e) => {
                    r.expect(Suite::ProjectionBounds, false, || format!("subset system {subsets:?}: {e}"));
                    continue;
                }
            };
            r.expect(Suite::ProjectionBounds, total <= nn, || {
                format!("{variant:?} sum {total} > n for {subsets:?}")
            });
            let equal = total == nn;
            let ok = if contain { equal == wdr } else { !equal || wdr };
            r.expect(Suite::ProjectionBounds, ok, || {
                format!("{variant:?} sum {total}, n = {n}, wdr_direct = {wdr}, subsets {subsets:?}")
            });
        }
    }

    // simple excess
    r.applies(Suite::SimpleExcess);
    r.expect(Suite::SimpleExcess, eps <= eps_d, || format!("simple excess {eps} > spectral {eps_d}"));
    if normal {
        r.expect(Suite::SimpleExcess, (eps == eps_d) == dr, || {
            format!("simple {eps} vs spectral {eps_d}, dr_direct = {dr}")
        });
    }

    // geodetic
    if normal {
        r.applies(Suite::GeodeticExcess);
        let q = a.q_norm2();
        let geodetic = s.is_geodetic();
        r.expect(Suite::GeodeticExcess, (q == nn) == (dr && geodetic), || {
            format!("||Q_d||^2 = {q}, n = {n}, dr = {dr}, geodetic = {geodetic}")
        });
    }

    // odd girth
    r.applies(Suite::OddGirth);
    let (_, odd) = g.girth_and_odd_girth();
    let spectral_odd = odd_girth_spectral(a.traces());
    r.expect(Suite::OddGirth, spectral_odd == odd, || format!("trace odd girth {spectral_odd}, cycles {odd}"));
    if let Some(go) = odd.finite() {
        r.expect(Suite::OddGirth, go <= 2 * diameter + 1, || format!("odd girth {go} > 2D + 1"));
    }
    if normal {
        let d = a.d();
        if let Some(go) = odd.finite().filter(|&go| go > 2 * d) {
            r.expect(Suite::OddGirth, dr && go == 2 * d + 1, || {
                format!("odd girth {go} >= 2d + 1 = {} but dr = {dr}", 2 * d + 1)
            });
        }
        match trichotomy(&a) {
            Ok(_) => {}
            Err(e) => r.expect(Suite::OddGirth, false, || format!("branches: {e}")),
        }
        let gog = generalized_odd_graph_check(&a).decision;
        r.expect(Suite::OddGirth, !gog || dr, || "generalized odd graph without dr".into());
    }

    if !normal {
        return r.summary;
    }

    // weighted excess
    r.applies(Suite::WeightedExcess);
    match dr_by_weighted_set(&a) {
        Ok(v) => {
            let c = v.certificate.comparison.clone().expect("weighted verdict carries a comparison");
            r.expect(Suite::WeightedExcess, v.decision == dr, || {
                format!("weighted {} vs spectral {}, dr_direct = {dr}", c.lhs, c.rhs)
            });
            if g.regularity().is_some() {
                let exact_equal = c.lhs == RealValue::Exact(eps.clone());
                r.expect(Suite::WeightedExcess, exact_equal, || {
                    format!("regular: weighted {} differs from simple {eps}", c.lhs)
                });
            }
        }
        Err(e) => r.expect(Suite::WeightedExcess, false, || format!("weighted excess: {e}")),
    }

    // Perron identity
    if dr {
        r.applies(Suite::PerronIdentity);
        match a.pi0_excess() {
            Ok(value) => {
                let c = Comparison::within(value, RealValue::Exact(eps.clone()), options.analysis.tol);
                r.expect(Suite::PerronIdentity, c.equal, || {
                    format!("(pi0/n)^2 delta_D = {} but simple excess {eps}", c.lhs)
                });
            }
            Err(e) => r.expect(Suite::PerronIdentity, false, || format!("spectrum: {e}")),
        }
    }

    if options.spectral_route {
        r.applies(Suite::SpectralRoute);
        let route = a.spectral_route_deviation();
        let conj = a.conjugation_residual();
        match (route, conj) {
            (Ok(x), Ok(y)) => {
                r.expect(Suite::SpectralRoute, x < SPECTRAL_ROUTE_TOLERANCE, || {
                    format!("coefficient deviation {x:e}")
                });
                r.expect(Suite::SpectralRoute, y < SPECTRAL_ROUTE_TOLERANCE, || {
                    format!("conjugation residual {y:e}")
                });
            }
            (Err(e), _) | (_, Err(e)) => r.expect(Suite::SpectralRoute, false, || format!("spectral route: {e}")),
        }
    }
    r.summary
}

/// Sequential fold of [`check_digraph`].
pub fn check_all(graphs: impl IntoIterator<Item = Digraph>, options: &VerifyOptions) -> Summary {
    graphs
        .into_iter()
        .map(|g| check_digraph(&g, options))
        .fold(Summary::default(), Summary::merge)
}

impl fmt::Display for Summary {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "digraphs examined: {}", self.digraphs)?;
        for suite in Suite::ALL {
            let t = self.tally(suite);
            let status = if t.failures == 0 { "PASS" } else { "FAIL" };
            writeln!(f, "{status} {suite}: {} checked, {} failures", t.checked, t.failures)?;
            for ex in &t.examples {
                writeln!(f, "  counterexample: {}", ex.detail)?;
                for line in ex.edgelist.lines() {
                    writeln!(f, "    {line}")?;
                }
            }
        }
        Ok(())
    }
}
