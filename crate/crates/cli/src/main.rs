use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use rayon::prelude::*;

use dgexcess::analysis::{Analysis, AnalysisOptions, DEFAULT_TOLERANCE};
use dgexcess::classify::{
    dr_by_simple_set, dr_by_weighted_set, dr_direct, generalized_odd_graph_check, geodetic_dr_check, trichotomy,
    wdr_by_projection_sum, wdr_direct, Verdict,
};
use dgexcess::generators::{Enumeration, Family, Filter, EXHAUSTIVE_CAP};
use dgexcess::io::{parse, write_edgelist, Format};
use dgexcess::linalg::normality_test;
use dgexcess::report::full_report;
use dgexcess::spectrum::SpectrumOptions;
use dgexcess::verify::{check_digraph, Summary, VerifyOptions};
use dgexcess::{Digraph, Error};

/// Largest order always enumerated exhaustively by `verify`.
const ALWAYS_EXHAUSTIVE: usize = 4;

#[derive(Parser)]
#[command(name = "dgexcess", version, about = "Excess, spectral and distance-regularity analysis of digraphs")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Full report on one digraph.
    Analyze {
        file: PathBuf,
        #[arg(long, default_value = "edgelist")]
        format: Format,
        /// Relative tolerance for comparisons that depend on the Perron value.
        #[arg(long, default_value_t = DEFAULT_TOLERANCE)]
        tol: f64,
        /// Eigenvalue clustering tolerance.
        #[arg(long)]
        cluster_tol: Option<f64>,
        #[arg(long)]
        json: bool,
    },
    /// Decide one property; exit 0 if it holds, 1 if not, 2 on error or
    /// disagreement between independent deciders.
    Check {
        property: Property,
        file: PathBuf,
        #[arg(long, default_value = "edgelist")]
        format: Format,
        #[arg(long, default_value_t = DEFAULT_TOLERANCE)]
        tol: f64,
    },
    /// Write a family member as an edge list.
    Generate {
        family: String,
        params: Vec<String>,
        /// Replace A by A ⊗ J_m.
        #[arg(long)]
        lift: Option<usize>,
    },
    /// Run the property suites over small digraphs.
    Verify {
        #[arg(long)]
        max_n: usize,
        /// Strongly connected digraphs drawn per order above 4.
        #[arg(long)]
        sample: Option<usize>,
        #[arg(long, default_value_t = dgexcess::generators::DEFAULT_SEED)]
        seed: u64,
        #[arg(long, default_value_t = 1)]
        jobs: usize,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum Property {
    Normal,
    Regular,
    Wdr,
    Dr,
    GeodeticDr,
    Gog,
    Bipartite,
    Trichotomy,
}

enum Outcome {
    Holds,
    Fails,
    Alarm(String),
}

fn options(tol: f64, cluster_tol: Option<f64>) -> AnalysisOptions {
    AnalysisOptions {
        spectrum: SpectrumOptions {
            cluster_tol,
            ..SpectrumOptions::default()
        },
        tol,
    }
}

fn read_graph(file: &PathBuf, format: Format) -> Result<(Digraph, Vec<u8>), String> {
    let bytes = std::fs::read(file).map_err(|e| format!("{}: {e}", file.display()))?;
    let text = String::from_utf8_lossy(&bytes);
    let g = parse(&text, format).map_err(|e| format!("{}: {e}", file.display()))?;
    Ok((g, bytes))
}

fn describe(v: &Verdict) -> String {
    let method = match v.method {
        dgexcess::classify::Method::Direct => "direct",
        dgexcess::classify::Method::SpectralExact => "spectral-exact",
        dgexcess::classify::Method::SpectralNumeric => "spectral-numeric",
    };
    let mut s = format!("{} [{method}]", if v.decision { "holds" } else { "fails" });
    if let Some(c) = &v.certificate.comparison {
        s.push_str(&format!(" {} vs {}", c.lhs, c.rhs));
    }
    if let Some(note) = &v.note {
        s.push_str(&format!(" ({note})"));
    }
    s
}

/// Agreeing verdicts decide; disagreement is an alarm.
fn agree(name: &str, verdicts: &[&Verdict]) -> Outcome {
    for v in verdicts {
        println!("{name}: {}", describe(v));
    }
    let first = verdicts[0].decision;
    if verdicts.iter().any(|v| v.decision != first) {
        return Outcome::Alarm(format!("{name}: deciders disagree"));
    }
    if first {
        Outcome::Holds
    } else {
        Outcome::Fails
    }
}

fn flag(name: &str, holds: bool) -> Outcome {
    println!("{name}: {}", if holds { "holds" } else { "fails" });
    if holds {
        Outcome::Holds
    } else {
        Outcome::Fails
    }
}

fn check(property: Property, g: Digraph, opts: AnalysisOptions) -> Outcome {
    match property {
        Property::Normal => return flag("normal", normality_test(&g)),
        Property::Regular => return flag("regular", g.regularity().is_some()),
        Property::Bipartite => return flag("bipartite", g.is_bipartite()),
        _ => {}
    }
    let a = match Analysis::new(g.clone(), opts) {
        Ok(a) => a,
        Err(Error::NotStronglyConnected) if !matches!(property, Property::Trichotomy) => {
            println!("not strongly connected");
            return Outcome::Fails;
        }
        Err(e) => return Outcome::Alarm(e.to_string()),
    };
    let s = a.structure();
    match property {
        Property::Wdr => agree("wdr", &[&wdr_direct(s).0, &wdr_by_projection_sum(&a)]),
        Property::Dr => {
            let direct = dr_direct(s, &g);
            let simple = dr_by_simple_set(&a);
            if !a.is_normal() {
                return agree("dr", &[&direct]);
            }
            match dr_by_weighted_set(&a) {
                Ok(weighted) => agree("dr", &[&direct, &simple, &weighted]),
                Err(e) => Outcome::Alarm(format!("weighted criterion: {e}")),
            }
        }
        Property::GeodeticDr => {
            let spectral = geodetic_dr_check(&a);
            let direct = dr_direct(s, &g).decision && s.is_geodetic();
            println!("geodetic-dr: {}", describe(&spectral));
            if a.is_normal() && spectral.decision != direct {
                return Outcome::Alarm("geodetic-dr: spectral test disagrees with direct oracles".into());
            }
            if direct {
                Outcome::Holds
            } else {
                Outcome::Fails
            }
        }
        Property::Gog => agree("generalized-odd-graph", &[&generalized_odd_graph_check(&a)]),
        Property::Trichotomy => match trichotomy(&a) {
            Ok(branches) => {
                let names: Vec<&str> = branches
                    .iter()
                    .map(|b| match b {
                        dgexcess::classify::Branch::Bipartite => "bipartite",
                        dgexcess::classify::Branch::GeneralizedOddGraph => "generalized-odd-graph",
                        dgexcess::classify::Branch::SmallOddGirth => "small-odd-girth",
                    })
                    .collect();
                println!("trichotomy: {}", names.join(", "));
                Outcome::Holds
            }
            Err(e) => Outcome::Alarm(e.to_string()),
        },
        Property::Normal | Property::Regular | Property::Bipartite => unreachable!("decided above"),
    }
}

/// Exhaustive up to order 4; above that, a sample when requested and
/// exhaustive otherwise (subject to the enumeration cap).
fn corpus(n: usize, sample: Option<usize>, seed: u64) -> Result<Box<dyn Iterator<Item = Digraph> + Send>, Error> {
    match sample {
        Some(k) if n > ALWAYS_EXHAUSTIVE => Enumeration::sampled(n, Filter::StronglyConnected, k, seed).iter(),
        _ => Enumeration {
            n,
            filter: Filter::StronglyConnected,
            sample: None,
            seed,
        }
        .iter(),
    }
}

fn verify(max_n: usize, sample: Option<usize>, seed: u64, jobs: usize) -> Result<Summary, String> {
    if sample.is_none() && max_n > EXHAUSTIVE_CAP {
        return Err(format!("--max-n above {EXHAUSTIVE_CAP} needs --sample"));
    }
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(jobs.max(1))
        .build()
        .map_err(|e| e.to_string())?;
    let options = VerifyOptions {
        seed,
        ..VerifyOptions::default()
    };
    let mut total = Summary::default();
    for n in 1..=max_n {
        let graphs = corpus(n, sample, seed).map_err(|e| e.to_string())?;
        let part = pool.install(|| {
            graphs
                .par_bridge()
                .map(|g| check_digraph(&g, &options))
                .reduce(Summary::default, Summary::merge)
        });
        eprintln!("n = {n}: {} strongly connected digraphs", part.digraphs);
        total = total.merge(part);
    }
    Ok(total)
}

fn run(cli: Cli) -> Result<ExitCode, String> {
    match cli.command {
        Command::Analyze {
            file,
            format,
            tol,
            cluster_tol,
            json,
        } => {
            let (g, bytes) = read_graph(&file, format)?;
            let report = full_report(&g, format.name(), Some(&bytes), &options(tol, cluster_tol));
            if json {
                println!("{}", report.to_json());
            } else {
                print!("{}", report.to_text());
            }
            Ok(ExitCode::SUCCESS)
        }
        Command::Check {
            property,
            file,
            format,
            tol,
        } => {
            let (g, _) = read_graph(&file, format)?;
            Ok(match check(property, g, options(tol, None)) {
                Outcome::Holds => ExitCode::from(0),
                Outcome::Fails => ExitCode::from(1),
                Outcome::Alarm(msg) => {
                    eprintln!("error: {msg}");
                    ExitCode::from(2)
                }
            })
        }
        Command::Generate { family, params, lift } => {
            let mut f = Family::parse(&family, &params).map_err(|e| e.to_string())?;
            if let Some(m) = lift {
                f = f.lift(m).map_err(|e| e.to_string())?;
            }
            let g = f.build().map_err(|e| e.to_string())?;
            print!("{}", write_edgelist(&g));
            Ok(ExitCode::SUCCESS)
        }
        Command::Verify {
            max_n,
            sample,
            seed,
            jobs,
        } => {
            let summary = verify(max_n, sample, seed, jobs)?;
            print!("{summary}");
            Ok(if summary.passed() {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(2)
            })
        }
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(code) => code,
        Err(msg) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
    }
}
