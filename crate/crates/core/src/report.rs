//! Aggregated analysis of one digraph, serialized as JSON or text.
//!
//! Rationals appear as `"p/q"` strings. Real quantities that may be
//! approximate carry an `exact` flag next to their value.

use std::collections::BTreeSet;
use std::fmt::Write as _;

use num_rational::BigRational;
use serde::Serialize;
use sha2::{Digest, Sha256};

use crate::analysis::{Analysis, AnalysisOptions};
use crate::classify::{
    dr_by_simple_set, dr_by_weighted_set, dr_direct, generalized_odd_graph_check, geodetic_dr_check,
    odd_girth_spectral, trichotomy, wdr_by_projection_sum, wdr_direct, Branch, Comparison, Verdict,
};
use crate::digraph::{CycleLength, Digraph};
use crate::excess::{upper_projection_sum, wdr_projection_sum};
use crate::hp::{Fixed, RealValue};
use crate::io::write_edgelist;
use crate::scalar::{fmt_rational, rational_to_decimal};

/// Spectral-route agreement threshold used in reports and acceptance.
pub const SPECTRAL_ROUTE_TOLERANCE: f64 = 1e-8;

#[derive(Clone, Debug, Serialize)]
pub struct InputInfo {
    pub n: usize,
    pub arcs: usize,
    pub format: String,
    pub sha256: String,
}

#[derive(Clone, Debug, Serialize)]
pub struct StructuralFlags {
    pub normal: bool,
    pub regular: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub degree: Option<usize>,
    pub geodetic: bool,
    pub bipartite: bool,
    pub symmetric: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct Metrics {
    pub diameter: usize,
    /// Distinct eigenvalues minus one.
    pub d: usize,
    /// Minimal-polynomial degree minus one.
    pub hat_d: usize,
    pub girth: CycleLength,
    pub odd_girth: CycleLength,
    pub odd_girth_spectral: CycleLength,
}

#[derive(Clone, Debug, Serialize)]
pub struct EigenvalueEntry {
    pub re: String,
    pub im: String,
    pub multiplicity: usize,
}

#[derive(Clone, Debug, Serialize)]
pub struct SpectrumReport {
    pub eigenvalues: Vec<EigenvalueEntry>,
    pub lambda0: RealValue,
    pub exact_lambda0: bool,
    pub pi0: RealValue,
    pub clusters_agree: bool,
    pub max_root_residual: f64,
    pub power_iteration_estimate: f64,
}

/// The three excesses as strings, each with an exactness flag.
#[derive(Clone, Debug, Serialize)]
pub struct ExcessReport {
    pub simple_excess: String,
    pub simple_excess_exact: bool,
    pub spectral_excess: String,
    pub spectral_excess_exact: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub weighted_excess: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub weighted_excess_exact: Option<bool>,
}

#[derive(Clone, Debug, Serialize)]
pub struct SumReport {
    pub total: String,
    pub per_k: Vec<String>,
    pub bounds: Vec<String>,
}

#[derive(Clone, Debug, Serialize)]
pub struct BoundsReport {
    /// `sum_k <A_k, P_k(A)>^2 / delta_k`; equals `n` iff weakly
    /// distance-regular.
    pub wdr_projection_sum: SumReport,
    /// `sum_k sum_{j >= k} <A_k, P_j(A)>^2 / delta_j <= n`.
    pub upper_projection_sum: SumReport,
    /// `||Q_d||^2`.
    pub q_norm2: String,
    /// `||Q_k||^2` for `k = 0 ..= hat_d`.
    pub q_norm2_partial: Vec<String>,
}

#[derive(Clone, Debug, Serialize)]
pub struct TrichotomyReport {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub branches: Option<BTreeSet<Branch>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub error: Option<String>,
}

#[derive(Clone, Debug, Serialize)]
pub struct VerdictsReport {
    pub wdr: Verdict,
    pub wdr_projection: Verdict,
    pub dr: Verdict,
    pub dr_direct: Verdict,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub dr_weighted: Option<Verdict>,
    pub geodetic_dr: Verdict,
    pub generalized_odd_graph: Verdict,
    pub trichotomy: TrichotomyReport,
}

/// Agreement checks; `None` when the check does not apply.
#[derive(Clone, Debug, Serialize)]
pub struct CrossChecks {
    /// distance-regular iff normal and weakly distance-regular.
    pub dr_iff_normal_and_wdr: bool,
    pub wdr_projection_agrees: bool,
    pub simple_set_agrees: Option<bool>,
    pub weighted_set_agrees: Option<bool>,
    pub geodetic_dr_agrees: Option<bool>,
    pub odd_girth_agrees: bool,
    /// normal with finite odd girth at least `2d + 1` implies
    /// distance-regular with odd girth exactly `2d + 1`.
    pub large_odd_girth_implies_dr: Option<bool>,
    /// distance-regular implies `(pi0 / n)^2 delta_D = simple excess`.
    pub pi0_identity: Option<bool>,
    pub spectral_route_deviation: Option<f64>,
    pub spectral_route_agrees: Option<bool>,
    pub conjugation_residual: Option<f64>,
    pub conjugation_agrees: Option<bool>,
}

#[derive(Clone, Debug, Serialize)]
pub struct Tolerances {
    pub tol: f64,
    pub cluster_tol: Option<f64>,
    pub spectral_route: f64,
    pub precision_digits: u32,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub working_bits: Option<u32>,
}

#[derive(Clone, Debug, Serialize)]
pub struct AnalysisReport {
    pub input: InputInfo,
    pub strongly_connected: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub structure: Option<StructuralFlags>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub metrics: Option<Metrics>,
    /// Coefficients from the constant term up.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub minimal_polynomial: Option<Vec<String>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub spectrum: Option<SpectrumReport>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub delta: Option<Vec<String>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub delta_prime: Option<Vec<String>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub excess: Option<ExcessReport>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub bounds: Option<BoundsReport>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub verdicts: Option<VerdictsReport>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub crosschecks: Option<CrossChecks>,
    pub tolerances: Tolerances,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub errors: Vec<String>,
}

fn strings(values: &[BigRational]) -> Vec<String> {
    values.iter().map(fmt_rational).collect()
}

fn sum_report(s: crate::excess::ProjectionSum) -> SumReport {
    SumReport {
        total: fmt_rational(&s.total),
        per_k: strings(&s.per_k),
        bounds: strings(&s.bounds),
    }
}

fn twelve(x: &Fixed) -> String {
    rational_to_decimal(&x.to_rational(), 12)
}

/// Report for `g`; `source` is the raw input used for the hash, or `None`
/// to hash the canonical edge list.
pub fn full_report(g: &Digraph, format: &str, source: Option<&[u8]>, options: &AnalysisOptions) -> AnalysisReport {
    let canonical;
    let bytes = match source {
        Some(b) => b,
        None => {
            canonical = write_edgelist(g);
            canonical.as_bytes()
        }
    };
    let digest = Sha256::digest(bytes);
    let input = InputInfo {
        n: g.n(),
        arcs: g.arc_count(),
        format: format.to_owned(),
        sha256: digest.iter().map(|b| format!("{b:02x}")).collect(),
    };
    let mut tolerances = Tolerances {
        tol: options.tol,
        cluster_tol: options.spectrum.cluster_tol,
        spectral_route: SPECTRAL_ROUTE_TOLERANCE,
        precision_digits: options.spectrum.precision.digits,
        working_bits: None,
    };
    let mut report = AnalysisReport {
        input,
        strongly_connected: g.is_strongly_connected(),
        structure: None,
        metrics: None,
        minimal_polynomial: None,
        spectrum: None,
        delta: None,
        delta_prime: None,
        excess: None,
        bounds: None,
        verdicts: None,
        crosschecks: None,
        tolerances: tolerances.clone(),
        errors: Vec::new(),
    };
    if !report.strongly_connected {
        return report;
    }
    let a = match Analysis::new(g.clone(), options.clone()) {
        Ok(a) => a,
        Err(e) => {
            report.errors.push(e.to_string());
            return report;
        }
    };
    let mut errors = Vec::new();
    let s = a.structure();
    let (girth, odd_girth) = g.girth_and_odd_girth();
    let spectral_odd = odd_girth_spectral(a.traces());
    report.structure = Some(StructuralFlags {
        normal: a.is_normal(),
        regular: g.regularity().is_some(),
        degree: g.regularity(),
        geodetic: s.is_geodetic(),
        bipartite: g.is_bipartite(),
        symmetric: g.is_symmetric(),
    });
    report.metrics = Some(Metrics {
        diameter: a.diameter(),
        d: a.d(),
        hat_d: a.hat_d(),
        girth,
        odd_girth,
        odd_girth_spectral: spectral_odd,
    });
    report.minimal_polynomial = Some(strings(a.minimal_polynomial().coeffs()));
    report.delta = Some(strings(&a.profile().delta));
    report.delta_prime = Some(strings(&a.profile().delta_prime));

    let spectrum = a.spectrum().map_err(|e| errors.push(format!("spectrum: {e}"))).ok();
    if let Some(spec) = spectrum {
        tolerances.working_bits = Some(spec.bits());
        tolerances.cluster_tol = Some(spec.diagnostics.cluster_tol);
        report.spectrum = Some(SpectrumReport {
            eigenvalues: spec
                .distinct()
                .iter()
                .map(|e| EigenvalueEntry {
                    re: twelve(&e.value.re),
                    im: twelve(&e.value.im),
                    multiplicity: e.multiplicity,
                })
                .collect(),
            lambda0: spec.lambda0().clone(),
            exact_lambda0: spec.exact_lambda0(),
            pi0: spec.pi0(),
            clusters_agree: spec.diagnostics.clusters_agree,
            max_root_residual: spec.diagnostics.max_root_residual,
            power_iteration_estimate: spec.diagnostics.power_iteration_estimate,
        });
    }

    let weighted = a.weighted_excess().map_err(|e| errors.push(format!("weighted excess: {e}"))).ok();
    report.excess = Some(ExcessReport {
        simple_excess: fmt_rational(&a.simple_excess()),
        simple_excess_exact: true,
        spectral_excess: fmt_rational(&a.spectral_excess()),
        spectral_excess_exact: true,
        weighted_excess_exact: weighted.as_ref().map(RealValue::is_exact),
        weighted_excess: weighted.as_ref().map(ToString::to_string),
    });

    let table = a.projection_table();
    let basis = a.basis();
    report.bounds = Some(BoundsReport {
        wdr_projection_sum: sum_report(wdr_projection_sum(table)),
        upper_projection_sum: sum_report(upper_projection_sum(table)),
        q_norm2: fmt_rational(&a.q_norm2()),
        q_norm2_partial: (0..=a.hat_d()).map(|k| fmt_rational(&basis.q_norm2(k))).collect(),
    });

    let (wdr, _) = wdr_direct(s);
    let dr_d = dr_direct(s, g);
    let wdr_proj = wdr_by_projection_sum(&a);
    let dr_simple = dr_by_simple_set(&a);
    let dr_weighted = dr_by_weighted_set(&a).map_err(|e| errors.push(format!("weighted criterion: {e}"))).ok();
    let geodetic = geodetic_dr_check(&a);
    let gog = generalized_odd_graph_check(&a);
    let tri = match trichotomy(&a) {
        Ok(b) => TrichotomyReport {
            branches: Some(b),
            error: None,
        },
        Err(e) => TrichotomyReport {
            branches: None,
            error: Some(e.to_string()),
        },
    };

    let normal = a.is_normal();
    let dr = dr_d.decision;
    let d = a.d();
    let large_odd_girth = odd_girth.finite().filter(|&go| normal && go > 2 * d);
    let pi0_identity = spectrum.filter(|_| dr).and_then(|_| a.pi0_excess().ok()).map(|value| {
        Comparison::within(value, RealValue::Exact(a.simple_excess()), options.tol).equal
    });
    let (route, conj) = if normal && spectrum.is_some() {
        let route = a.spectral_route_deviation().map_err(|e| errors.push(format!("spectral route: {e}"))).ok();
        let conj = a.conjugation_residual().map_err(|e| errors.push(format!("conjugation: {e}"))).ok();
        (route, conj)
    } else {
        (None, None)
    };
    report.crosschecks = Some(CrossChecks {
        dr_iff_normal_and_wdr: dr == (normal && wdr.decision),
        wdr_projection_agrees: wdr_proj.decision == wdr.decision,
        simple_set_agrees: normal.then_some(dr_simple.decision == dr),
        weighted_set_agrees: dr_weighted.as_ref().filter(|_| normal).map(|v| v.decision == dr),
        geodetic_dr_agrees: normal.then_some(geodetic.decision == (dr && s.is_geodetic())),
        odd_girth_agrees: spectral_odd == odd_girth,
        large_odd_girth_implies_dr: large_odd_girth.map(|go| dr && go == 2 * d + 1),
        pi0_identity,
        spectral_route_deviation: route,
        spectral_route_agrees: route.map(|x| x < SPECTRAL_ROUTE_TOLERANCE),
        conjugation_residual: conj,
        conjugation_agrees: conj.map(|x| x < SPECTRAL_ROUTE_TOLERANCE),
    });
    report.verdicts = Some(VerdictsReport {
        wdr,
        wdr_projection: wdr_proj,
        dr: dr_simple,
        dr_direct: dr_d,
        dr_weighted,
        geodetic_dr: geodetic,
        generalized_odd_graph: gog,
        trichotomy: tri,
    });
    report.tolerances = tolerances;
    report.errors = errors;
    report
}

impl CrossChecks {
    /// False when any applicable check failed.
    pub fn all_agree(&self) -> bool {
        [
            Some(self.dr_iff_normal_and_wdr),
            Some(self.wdr_projection_agrees),
            self.simple_set_agrees,
            self.weighted_set_agrees,
            self.geodetic_dr_agrees,
            Some(self.odd_girth_agrees),
            self.large_odd_girth_implies_dr,
            self.pi0_identity,
            self.spectral_route_agrees,
            self.conjugation_agrees,
        ]
        .into_iter()
        .flatten()
        .all(|b| b)
    }
}

impl AnalysisReport {
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }

    pub fn to_text(&self) -> String {
        let mut out = String::new();
        let w = &mut out;
        let i = &self.input;
        let _ = writeln!(w, "input: n = {}, arcs = {}, format {}, sha256 {}", i.n, i.arcs, i.format, i.sha256);
        let _ = writeln!(w, "strongly connected: {}", yes(self.strongly_connected));
        if let Some(f) = &self.structure {
            let regular = match f.degree {
                Some(k) => format!("yes (degree {k})"),
                None => "no".into(),
            };
            let _ = writeln!(w, "normal: {}", yes(f.normal));
            let _ = writeln!(w, "regular: {regular}");
            let _ = writeln!(w, "geodetic: {}", yes(f.geodetic));
            let _ = writeln!(w, "bipartite: {}", yes(f.bipartite));
        }
        if let Some(m) = &self.metrics {
            let _ = writeln!(
                w,
                "diameter D = {}, d = {}, hat D = {}, girth {}, odd girth {}",
                m.diameter, m.d, m.hat_d, m.girth, m.odd_girth
            );
        }
        if let Some(s) = &self.spectrum {
            let _ = writeln!(w, "lambda0 = {} ({})", s.lambda0, exactness(s.exact_lambda0));
            let _ = writeln!(w, "spectrum:");
            for e in &s.eigenvalues {
                let _ = writeln!(w, "  {} {:+}i  x{}", e.re, Signed(&e.im), e.multiplicity);
            }
        }
        if let Some(d) = &self.delta {
            let _ = writeln!(w, "delta: {}", d.join(", "));
        }
        if let Some(d) = &self.delta_prime {
            let _ = writeln!(w, "delta': {}", d.join(", "));
        }
        if let (Some(e), Some(v)) = (&self.excess, &self.verdicts) {
            let normal = self.structure.as_ref().is_some_and(|f| f.normal);
            let relation = v.dr.certificate.comparison.as_ref().map_or("?", relation_symbol);
            let conclusion = if !normal {
                "not normal, criterion inapplicable".to_owned()
            } else if v.dr.decision {
                "distance-regular".to_owned()
            } else {
                "not distance-regular".to_owned()
            };
            let _ = writeln!(
                w,
                "simple excess {} {} spectral excess {} ⇒ {}",
                short(&e.simple_excess),
                relation,
                short(&e.spectral_excess),
                conclusion
            );
            if let Some(x) = &e.weighted_excess {
                let _ = writeln!(
                    w,
                    "weighted excess {} ({})",
                    x,
                    exactness(e.weighted_excess_exact.unwrap_or(false))
                );
            }
        }
        if let Some(b) = &self.bounds {
            let _ = writeln!(w, "weak projection sum {} (n = {})", short(&b.wdr_projection_sum.total), i.n);
            let _ = writeln!(w, "upper projection sum {}", short(&b.upper_projection_sum.total));
            let _ = writeln!(w, "||Q_d||^2 = {}", short(&b.q_norm2));
        }
        if let Some(v) = &self.verdicts {
            let labelled = [
                ("wdr", Some(&v.wdr)),
                ("wdr_projection", Some(&v.wdr_projection)),
                ("dr", Some(&v.dr)),
                ("dr_direct", Some(&v.dr_direct)),
                ("dr_weighted", v.dr_weighted.as_ref()),
                ("geodetic_dr", Some(&v.geodetic_dr)),
                ("generalized_odd_graph", Some(&v.generalized_odd_graph)),
            ];
            for (label, verdict) in labelled {
                if let Some(verdict) = verdict {
                    let _ = writeln!(w, "{label}: {} [{}]", yes(verdict.decision), method_name(verdict));
                }
            }
            match (&v.trichotomy.branches, &v.trichotomy.error) {
                (Some(b), _) => {
                    let names: Vec<String> = b
                        .iter()
                        .map(|x| serde_json::to_value(x).unwrap().as_str().unwrap_or("").to_owned())
                        .collect();
                    let _ = writeln!(w, "odd-girth branches: {}", names.join(", "));
                }
                (None, Some(e)) => {
                    let _ = writeln!(w, "odd-girth branches: {e}");
                }
                (None, None) => {}
            }
        }
        if let Some(c) = &self.crosschecks {
            let _ = writeln!(w, "cross-checks: {}", if c.all_agree() { "all agree" } else { "DISAGREEMENT" });
        }
        for e in &self.errors {
            let _ = writeln!(w, "error: {e}");
        }
        out
    }
}

struct Signed<'a>(&'a str);

impl std::fmt::Display for Signed<'_> {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        if self.0.starts_with('-') {
            write!(f, "- {}", &self.0[1..])
        } else {
            write!(f, "+ {}", self.0)
        }
    }
}

fn yes(b: bool) -> &'static str {
    if b {
        "yes"
    } else {
        "no"
    }
}

fn exactness(exact: bool) -> &'static str {
    if exact {
        "exact"
    } else {
        "numeric"
    }
}

/// `p/1` shown as `p`.
fn short(s: &str) -> &str {
    s.strip_suffix("/1").unwrap_or(s)
}

fn relation_symbol(c: &Comparison) -> &'static str {
    if c.equal {
        return "=";
    }
    if c.difference.to_rational() < BigRational::default() {
        "<"
    } else {
        ">"
    }
}

fn method_name(v: &Verdict) -> String {
    serde_json::to_value(v.method)
        .ok()
        .and_then(|x| x.as_str().map(str::to_owned))
        .unwrap_or_default()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::generators::Family;

    fn report(g: &Digraph) -> AnalysisReport {
        full_report(g, "edgelist", None, &AnalysisOptions::default())
    }

    #[test]
    fn petersen_json() {
        let r = report(&Family::Petersen.build().unwrap());
        let json: serde_json::Value = serde_json::from_str(&r.to_json()).unwrap();
        assert_eq!(json["excess"]["spectral_excess"], "6/1");
        assert_eq!(json["verdicts"]["dr"]["decision"], true);
        assert_eq!(json["verdicts"]["dr"]["method"], "spectral-exact");
        assert_eq!(json["verdicts"]["geodetic_dr"]["decision"], true);
        assert_eq!(json["verdicts"]["generalized_odd_graph"]["decision"], true);
        assert!(r.crosschecks.unwrap().all_agree());
    }

    #[test]
    fn path_text_line() {
        let g = Family::Path(3).build().unwrap();
        let text = report(&g).to_text();
        assert!(text.contains("simple excess 2/3 < spectral excess 8/9 ⇒ not distance-regular"), "{text}");
    }

    #[test]
    fn disconnected_has_no_downstream_fields() {
        let g = Digraph::new(3, &[(0, 1), (1, 2)]).unwrap();
        let json: serde_json::Value = serde_json::from_str(&report(&g).to_json()).unwrap();
        assert_eq!(json["strongly_connected"], false);
        for key in ["structure", "metrics", "spectrum", "excess", "verdicts", "crosschecks"] {
            assert!(json.get(key).is_none(), "{key}");
        }
    }

    #[test]
    fn non_normal_keeps_direct_oracles() {
        let g = Digraph::new(3, &[(0, 1), (1, 2), (2, 0), (0, 2)]).unwrap();
        let r = report(&g);
        let v = r.verdicts.as_ref().unwrap();
        assert!(!v.dr.decision && v.dr.note.is_some());
        assert!(!v.dr_direct.decision);
        assert!(v.trichotomy.error.is_some());
        assert!(r.crosschecks.unwrap().all_agree());
    }

    #[test]
    fn json_is_deterministic() {
        let g = Family::Path(5).build().unwrap();
        assert_eq!(report(&g).to_json(), report(&g).to_json());
    }
}
