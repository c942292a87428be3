//! Acceptance suite: one pass/fail line per criterion, every tolerance
//! pinned below. Exits non-zero if any criterion fails.

mod common;

use std::time::{Duration, Instant};

use dgexcess::analysis::Analysis;
use dgexcess::classify::{dr_direct, odd_girth_spectral, trichotomy, wdr_direct};
use dgexcess::excess::{generalized_projection_sum, upper_projection_sum, wdr_projection_sum, SubsetVariant};
use dgexcess::generators::{Enumeration, Family, Filter, Property, DEFAULT_SEED};
use dgexcess::io::write_edgelist;
use dgexcess::verify::random_subsets;
use dgexcess::{Digraph, RealValue};
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Signed, ToPrimitive};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use common::ratio;

/// Largest order enumerated exhaustively.
const EXHAUSTIVE_ORDER: usize = 4;
/// Order and size of the sampled extension.
const SAMPLED_ORDER: usize = 5;
const SAMPLED_COUNT: usize = 10_000;
/// Random subset systems per variant for the generalized projection sums.
const SUBSET_SYSTEMS: usize = 20;
/// Absolute gap allowed between weighted and spectral excess when the
/// Hoffman polynomial has irrational coefficients.
const WEIGHTED_TOLERANCE: f64 = 1e-9;
/// Relative gap `tol * max(1, |rhs|)` allowed in the Perron identity when
/// `lambda0` is irrational.
const PERRON_TOLERANCE: f64 = 1e-9;
/// Spectral-route coefficients and `max |f(A) - A^T|`.
const SPECTRAL_ROUTE_TOLERANCE: f64 = 1e-8;
/// Largest order of the generated families in the spectral-route check.
const FAMILY_ORDER_CAP: usize = 64;
const SPECTRAL_ROUTE_BUDGET: Duration = Duration::from_secs(120);
const EXHAUSTIVE_BUDGET: Duration = Duration::from_secs(60);
const SAMPLED_BUDGET: Duration = Duration::from_secs(300);

struct Member {
    graph: Digraph,
    analysis: Analysis,
    edgelist: String,
    normal: bool,
    wdr: bool,
    dr: bool,
}

impl Member {
    fn new(graph: Digraph) -> Member {
        let analysis = Analysis::with_defaults(graph.clone()).expect("strongly connected corpus member");
        Member {
            edgelist: write_edgelist(&graph),
            normal: common::normal(&graph),
            wdr: common::weakly_distance_regular(&graph),
            dr: common::distance_regular(&graph),
            graph,
            analysis,
        }
    }

    fn n(&self) -> BigRational {
        BigRational::from_integer(BigInt::from(self.graph.n()))
    }
}

#[derive(Default)]
struct Outcome {
    checked: usize,
    failures: Vec<String>,
    notes: Vec<String>,
}

impl Outcome {
    fn expect(&mut self, holds: bool, what: impl FnOnce() -> String) {
        if !holds {
            self.failures.push(what());
        }
    }

    fn within(&mut self, started: Instant, budget: Duration) {
        let elapsed = started.elapsed();
        self.notes.push(format!("{:.1}s", elapsed.as_secs_f64()));
        self.expect(elapsed <= budget, || format!("took {elapsed:?}, budget {budget:?}"));
    }
}

fn report(index: usize, title: &str, outcome: &Outcome) -> bool {
    let ok = outcome.failures.is_empty();
    let notes = if outcome.notes.is_empty() {
        String::new()
    } else {
        format!("; {}", outcome.notes.join(", "))
    };
    println!(
        "{} criterion {index}: {title} ({} checked, {} failures{notes})",
        if ok { "PASS" } else { "FAIL" },
        outcome.checked,
        outcome.failures.len()
    );
    for f in outcome.failures.iter().take(5) {
        println!("    {}", f.replace('\n', "\n    "));
    }
    ok
}

fn build(graphs: Vec<Digraph>) -> Vec<Member> {
    graphs.into_par_iter().map(Member::new).collect()
}

fn exhaustive_corpus() -> Vec<Member> {
    let graphs: Vec<Digraph> = (1..=EXHAUSTIVE_ORDER)
        .flat_map(|n| Enumeration::exhaustive(n, Filter::StronglyConnected).iter().unwrap())
        .collect();
    build(graphs)
}

fn sampled_corpus() -> Vec<Member> {
    let graphs = Enumeration::sampled(SAMPLED_ORDER, Filter::StronglyConnected, SAMPLED_COUNT, DEFAULT_SEED)
        .iter()
        .unwrap()
        .collect();
    build(graphs)
}

fn fingerprint(s: &str) -> u64 {
    s.bytes().fold(0xcbf2_9ce4_8422_2325u64, |h, b| (h ^ b as u64).wrapping_mul(0x0100_0000_01b3))
}

fn projection_sums(members: &[Member]) -> Outcome {
    let mut out = Outcome::default();
    for m in members {
        out.checked += 1;
        let n = m.n();
        let lib_wdr = wdr_direct(m.analysis.structure()).0.decision;
        out.expect(lib_wdr == m.wdr, || format!("wdr_direct {lib_wdr}, oracle {}\n{}", m.wdr, m.edgelist));
        let table = m.analysis.projection_table();
        for (name, sum) in [("weak", wdr_projection_sum(table)), ("upper", upper_projection_sum(table))] {
            out.expect(sum.total <= n, || format!("{name} sum {} > n\n{}", sum.total, m.edgelist));
            out.expect((sum.total == n) == m.wdr, || {
                format!("{name} sum {} vs n, wdr {}\n{}", sum.total, m.wdr, m.edgelist)
            });
        }
        let mut rng = ChaCha8Rng::seed_from_u64(DEFAULT_SEED ^ fingerprint(&m.edgelist));
        for _ in 0..SUBSET_SYSTEMS {
            for variant in [SubsetVariant::PolynomialOntoLayers, SubsetVariant::LayerOntoPolynomials] {
                let subsets = random_subsets(&mut rng, m.analysis.diameter(), true);
                match generalized_projection_sum(table, &subsets, variant) {
                    Ok(total) => {
                        out.expect(total <= n, || format!("{variant:?} {subsets:?}: {total} > n\n{}", m.edgelist));
                        out.expect((total == n) == m.wdr, || {
                            format!("{variant:?} {subsets:?}: {total}, wdr {}\n{}", m.wdr, m.edgelist)
                        });
                    }
                    Err(e) => out.failures.push(format!("{variant:?} {subsets:?}: {e}\n{}", m.edgelist)),
                }
            }
        }
    }
    out
}

fn simple_excess(members: &[Member]) -> Outcome {
    let mut out = Outcome::default();
    for m in members {
        out.checked += 1;
        let (eps, eps_d) = (m.analysis.simple_excess(), m.analysis.spectral_excess());
        out.expect(eps <= eps_d, || format!("simple {eps} > spectral {eps_d}\n{}", m.edgelist));
        let lib_dr = dr_direct(m.analysis.structure(), &m.graph).decision;
        out.expect(lib_dr == m.dr, || format!("dr_direct {lib_dr}, oracle {}\n{}", m.dr, m.edgelist));
        if m.normal {
            out.expect((eps == eps_d) == m.dr, || {
                format!("simple {eps}, spectral {eps_d}, dr {}\n{}", m.dr, m.edgelist)
            });
        }
    }
    out
}

fn weighted_excess(members: &[Member]) -> Outcome {
    let mut out = Outcome::default();
    let mut inexact = 0;
    for m in members.iter().filter(|m| m.normal) {
        out.checked += 1;
        let eps_d = m.analysis.spectral_excess();
        let weighted = match m.analysis.weighted_excess() {
            Ok(w) => w,
            Err(e) => {
                out.failures.push(format!("weighted excess: {e}\n{}", m.edgelist));
                continue;
            }
        };
        let equal = match &weighted {
            RealValue::Exact(w) => *w == eps_d,
            RealValue::Numeric(_) => {
                inexact += 1;
                (weighted.to_rational() - &eps_d).abs().to_f64().unwrap() <= WEIGHTED_TOLERANCE
            }
        };
        out.expect(equal == m.dr, || format!("weighted {weighted}, spectral {eps_d}, dr {}\n{}", m.dr, m.edgelist));
        if m.graph.regularity().is_some() {
            let simple = RealValue::Exact(m.analysis.simple_excess());
            out.expect(weighted == simple, || format!("regular: weighted {weighted} vs simple {simple}\n{}", m.edgelist));
        }
    }
    out.notes.push(format!("{inexact} with irrational H"));
    out
}

fn named_q_norm(out: &mut Outcome, family: Family, expected: BigRational, passes: bool) {
    out.checked += 1;
    let g = family.build().unwrap();
    let n = BigRational::from_integer(BigInt::from(g.n()));
    let oracle = common::excesses(&g).q_norm2;
    let a = Analysis::with_defaults(g).unwrap();
    let q = a.q_norm2();
    out.expect(oracle == expected && q == expected, || {
        format!("{family}: library {q}, oracle {oracle}, expected {expected}")
    });
    out.expect((q == n) == passes, || format!("{family}: ||Q_d||^2 = {q} vs n = {n}"));
}

fn geodetic_excess(members: &[Member]) -> Outcome {
    let mut out = Outcome::default();
    for m in members.iter().filter(|m| m.normal) {
        out.checked += 1;
        let q = m.analysis.q_norm2();
        let geodetic = common::geodetic(&m.graph);
        out.expect((q == m.n()) == (m.dr && geodetic), || {
            format!("||Q_d||^2 = {q}, dr {}, geodetic {geodetic}\n{}", m.dr, m.edgelist)
        });
    }
    named_q_norm(&mut out, Family::Petersen, ratio(10, 1), true);
    named_q_norm(&mut out, Family::Hypercube(3), ratio(52, 1), false);
    for n in 3..=12 {
        named_q_norm(&mut out, Family::DirectedCycle(n), ratio(n as i64, 1), true);
    }
    out
}

fn named_values() -> Outcome {
    let mut out = Outcome::default();
    let mut named = vec![
        (Family::Path(3), ratio(2, 3), ratio(8, 9)),
        (Family::Petersen, ratio(6, 1), ratio(6, 1)),
        (Family::Complete(4), ratio(3, 1), ratio(3, 1)),
        (Family::Hypercube(3), ratio(36, 1), ratio(36, 1)),
    ];
    named.extend((3..=12).map(|n| (Family::DirectedCycle(n), ratio(1, 1), ratio(1, 1))));
    for (family, simple, spectral) in named {
        out.checked += 1;
        let g = family.build().unwrap();
        let oracle = common::excesses(&g);
        out.expect(oracle.simple == simple && oracle.spectral == spectral, || {
            format!("{family}: oracle ({}, {}) vs expected ({simple}, {spectral})", oracle.simple, oracle.spectral)
        });
        let a = Analysis::with_defaults(g).unwrap();
        let lib = (a.simple_excess(), a.spectral_excess());
        out.expect(lib == (simple.clone(), spectral.clone()), || {
            format!("{family}: library ({}, {}) vs expected ({simple}, {spectral})", lib.0, lib.1)
        });
    }
    out
}

fn perron_identity(members: &[Member]) -> Outcome {
    let mut out = Outcome::default();
    let petersen = Analysis::with_defaults(Family::Petersen.build().unwrap()).unwrap();
    let named = petersen.pi0_excess().unwrap();
    out.checked += 1;
    out.expect(named == RealValue::Exact(ratio(6, 1)), || format!("petersen: {named}, expected 6"));
    for m in members.iter().filter(|m| m.dr) {
        out.checked += 1;
        let eps = m.analysis.simple_excess();
        match m.analysis.pi0_excess() {
            Ok(RealValue::Exact(v)) => out.expect(v == eps, || format!("exact {v} vs {eps}\n{}", m.edgelist)),
            Ok(value) => {
                let rhs = eps.to_f64().unwrap();
                let gap = (value.to_f64() - rhs).abs();
                out.expect(gap <= PERRON_TOLERANCE * rhs.abs().max(1.0), || {
                    format!("{value} vs {eps} (gap {gap:e})\n{}", m.edgelist)
                });
            }
            Err(e) => out.failures.push(format!("spectrum: {e}\n{}", m.edgelist)),
        }
    }
    out
}

fn odd_girth(members: &[Member]) -> Outcome {
    let mut out = Outcome::default();
    for m in members {
        out.checked += 1;
        let oracle = common::odd_girth(&m.graph);
        let (_, combinatorial) = m.graph.girth_and_odd_girth();
        let spectral = odd_girth_spectral(m.analysis.traces());
        out.expect(combinatorial.finite() == oracle && spectral.finite() == oracle, || {
            format!("odd girth: oracle {oracle:?}, library {combinatorial}, traces {spectral}\n{}", m.edgelist)
        });
        let diameter = m.analysis.diameter();
        if let Some(go) = oracle {
            out.expect(go <= 2 * diameter + 1, || format!("odd girth {go} > 2D + 1\n{}", m.edgelist));
        }
        if m.normal {
            let d = m.analysis.d();
            if let Some(go) = oracle.filter(|&go| go > 2 * d) {
                out.expect(m.dr && go == 2 * d + 1, || {
                    format!("odd girth {go} >= 2d + 1 but dr {}\n{}", m.dr, m.edgelist)
                });
            }
            match trichotomy(&m.analysis) {
                Ok(branches) => out.expect(!branches.is_empty(), || format!("no branch\n{}", m.edgelist)),
                Err(e) => out.failures.push(format!("branches: {e}\n{}", m.edgelist)),
            }
        }
    }
    out
}

fn route_families() -> Vec<Family> {
    let mut families: Vec<Family> = Vec::new();
    families.extend((2..=FAMILY_ORDER_CAP).step_by(7).map(Family::DirectedCycle));
    families.extend([Family::DirectedCycle(FAMILY_ORDER_CAP), Family::Path(FAMILY_ORDER_CAP)]);
    families.extend((2..=FAMILY_ORDER_CAP).step_by(9).map(Family::Path));
    families.extend((1..=6).map(Family::Hypercube));
    families.extend([Family::Complete(FAMILY_ORDER_CAP), Family::CompleteBipartite(32, 32)]);
    families.extend([Family::CompleteBipartite(2, 5), Family::Petersen]);
    families.extend((2..=4).map(Family::OddGraph));
    families.extend([3, 7, 11, 19, 23, 31, 43, 47, 59].map(Family::PaleyTournament));
    families.extend([
        Family::Circulant { n: 64, connections: vec![1, 5, 17] },
        Family::Circulant { n: 13, connections: vec![1, 3, 9] },
        Family::Circulant { n: 20, connections: vec![1, 19, 4] },
        Family::Circulant { n: 9, connections: vec![2] },
    ]);
    for g in 3..=5 {
        for m in [2, 3, 12] {
            families.push(Family::DirectedCycle(g).lift(m).unwrap());
        }
    }
    families
}

fn spectral_route(members: &[Member]) -> Outcome {
    let started = Instant::now();
    let mut out = Outcome::default();
    let mut check = |a: &Analysis, label: &str| {
        out.checked += 1;
        match (a.spectral_route_deviation(), a.conjugation_residual()) {
            (Ok(x), Ok(y)) => out.expect(x < SPECTRAL_ROUTE_TOLERANCE && y < SPECTRAL_ROUTE_TOLERANCE, || {
                format!("coefficients {x:e}, conjugation {y:e}\n{label}")
            }),
            (Err(e), _) | (_, Err(e)) => out.failures.push(format!("{e}\n{label}")),
        }
    };
    for m in members.iter().filter(|m| m.normal) {
        check(&m.analysis, &m.edgelist);
    }
    for family in route_families() {
        let g = family.build().unwrap();
        assert!(g.n() <= FAMILY_ORDER_CAP, "{family}");
        if !common::strongly_connected(&g) || !common::normal(&g) {
            continue;
        }
        check(&Analysis::with_defaults(g).unwrap(), &family.to_string());
    }
    out.within(started, SPECTRAL_ROUTE_BUDGET);
    out
}

fn generator_contracts() -> Outcome {
    let mut out = Outcome::default();
    for family in route_families() {
        let g = family.build().unwrap();
        for property in family.advertised() {
            out.checked += 1;
            let holds = match property {
                Property::StronglyConnected => common::strongly_connected(&g),
                Property::Normal => common::normal(&g),
                Property::Bipartite => common::bipartite(&g),
                Property::DistanceRegular => common::strongly_connected(&g) && common::distance_regular(&g),
            };
            out.expect(holds, || format!("{family} advertised {property:?}"));
        }
    }
    for g in 3..=5 {
        for m in [2, 3] {
            out.checked += 1;
            let family = Family::DirectedCycle(g).lift(m).unwrap();
            let lifted = family.build().unwrap();
            let dist = common::distances(&lifted);
            let diameter = common::diameter(&dist);
            out.expect(common::distance_regular(&lifted) && diameter == g, || {
                format!("{family}: diameter {diameter}, dr {}", common::distance_regular(&lifted))
            });
        }
    }
    out
}

fn main() {
    let started = Instant::now();
    let small = exhaustive_corpus();
    let mut first = projection_sums(&small);
    first.within(started, EXHAUSTIVE_BUDGET);

    let started = Instant::now();
    let sampled = sampled_corpus();
    let mut second = simple_excess(&small);
    let extension = simple_excess(&sampled);
    second.checked += extension.checked;
    second.failures.extend(extension.failures);
    second.notes.push(format!("{} sampled at n = {SAMPLED_ORDER}", sampled.len()));
    second.within(started, SAMPLED_BUDGET);

    // the later criteria run on both corpora
    let mut corpus = small;
    corpus.extend(sampled);

    let results = [
        ("exhaustive weak distance-regularity characterization", first),
        ("simple excess characterization", second),
        ("weighted excess characterization", weighted_excess(&corpus)),
        ("geodetic excess characterization", geodetic_excess(&corpus)),
        ("named excess values", named_values()),
        ("Perron identity on distance-regular members", perron_identity(&corpus)),
        ("odd girth suite", odd_girth(&corpus)),
        ("spectral route numerics", spectral_route(&corpus)),
        ("generator contracts", generator_contracts()),
    ];
    let mut all = true;
    for (i, (title, outcome)) in results.iter().enumerate() {
        all &= report(i + 1, title, outcome);
    }
    println!("{}", if all { "acceptance: all criteria pass" } else { "acceptance: FAILED" });
    if !all {
        std::process::exit(1);
    }
}
