//! End-to-end pipeline: optional closure, graph, verdicts, report.

use std::time::Duration;

use rand::rngs::StdRng;
use rand::SeedableRng;
use serde::Serialize;
use serde_json::Value;

use crate::connection::{connection_search, sample_holonomy, ConnectionSearchOptions};
use crate::error::Result;
use crate::graph::{ContextPoset, GraphStats, OrthoGraph};
use crate::ray::RaySet;
use crate::solve::{
    brute_force_3c, brute_force_ks, check_witness, ks_colorable, three_colorable, witness_json,
    Enumeration, SearchOptions, Verdict, Witness, DEFAULT_3C_BRUTE_CAP, DEFAULT_KS_BRUTE_CAP,
};

/// Seed for the random context cycles used to spot-check holonomy.
pub const HOLONOMY_SEED: u64 = 0x6b73_6374;

#[derive(Clone, Copy, Debug)]
pub struct PipelineOptions {
    pub close: bool,
    pub ks: bool,
    pub three_c: bool,
    pub connect: bool,
    /// Run the exhaustive oracles alongside each solver when the instance is small enough.
    pub brute_force: bool,
    pub budget: Option<u64>,
    /// Record wall-clock times. Off by default so that reports are reproducible byte for byte.
    pub timings: bool,
    pub holonomy_samples: usize,
    pub holonomy_max_len: usize,
}

impl Default for PipelineOptions {
    fn default() -> Self {
        Self {
            close: false,
            ks: false,
            three_c: false,
            connect: false,
            brute_force: false,
            budget: None,
            timings: false,
            holonomy_samples: 1000,
            holonomy_max_len: 8,
        }
    }
}

impl PipelineOptions {
    pub fn everything() -> Self {
        Self {
            close: true,
            ks: true,
            three_c: true,
            connect: true,
            brute_force: true,
            ..Self::default()
        }
    }
}

#[derive(Clone, Debug, Serialize, PartialEq, Eq)]
pub struct InputSummary {
    pub source: String,
    pub dim: usize,
    pub rays: usize,
    pub duplicates_dropped: usize,
}

#[derive(Clone, Debug, Serialize, PartialEq, Eq)]
pub struct ClosureSummary {
    pub before: usize,
    pub after: usize,
    pub added: usize,
}

#[derive(Clone, Debug, Serialize, PartialEq, Eq)]
pub struct BruteForceSummary {
    pub satisfiable: bool,
    pub count: u64,
    pub agrees: bool,
}

#[derive(Clone, Debug, Serialize, PartialEq, Eq)]
pub struct HolonomySummary {
    pub sampled: usize,
    pub nontrivial: usize,
    /// Residual permutations of the nontrivial cycles, in cycle notation.
    pub residuals: Vec<String>,
}

#[derive(Clone, Debug, Serialize, PartialEq)]
pub struct VerdictReport {
    pub problem: &'static str,
    pub satisfiable: Option<bool>,
    pub witness: Option<Value>,
    pub nodes: u64,
    pub ms: Option<u64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub brute_force: Option<BruteForceSummary>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub holonomy: Option<HolonomySummary>,
}

#[derive(Clone, Debug, Default, Serialize, PartialEq)]
pub struct Verdicts {
    pub ks: Option<VerdictReport>,
    #[serde(rename = "3c")]
    pub three_c: Option<VerdictReport>,
    pub connection: Option<VerdictReport>,
}

#[derive(Clone, Debug, Serialize, PartialEq)]
pub struct Report {
    pub input: InputSummary,
    pub closure: Option<ClosureSummary>,
    pub graph: GraphStats,
    pub verdicts: Verdicts,
}

fn millis(d: Duration, timings: bool) -> Option<u64> {
    timings.then_some(d.as_millis() as u64)
}

fn brute_summary<W>(bf: &Enumeration<W>, verdict_sat: Option<bool>) -> BruteForceSummary {
    let sat = bf.verdict.is_sat();
    BruteForceSummary {
        satisfiable: sat,
        count: bf.count,
        agrees: verdict_sat == Some(sat),
    }
}

fn solver_report<W: Witness>(
    g: &OrthoGraph,
    v: &Verdict<W>,
    bf: Option<Enumeration<W>>,
    timings: bool,
) -> Result<VerdictReport> {
    if let Some(w) = &v.witness {
        assert!(check_witness(g, w)?, "returned witness fails verification");
    }
    Ok(VerdictReport {
        problem: W::PROBLEM,
        satisfiable: v.satisfiable(),
        witness: v.witness.as_ref().map(|w| witness_json(g, w)),
        nodes: v.nodes,
        ms: millis(v.elapsed, timings),
        brute_force: bf.map(|bf| brute_summary(&bf, v.satisfiable())),
        holonomy: None,
    })
}

pub fn run_pipeline(
    source: &str,
    rays: RaySet,
    duplicates: usize,
    opts: &PipelineOptions,
) -> Result<Report> {
    let input = InputSummary {
        source: source.to_owned(),
        dim: rays.dim(),
        rays: rays.len(),
        duplicates_dropped: duplicates,
    };
    let (rays, closure) = if opts.close {
        let before = rays.len();
        let closed = rays.triad_closure()?;
        let after = closed.len();
        (
            closed,
            Some(ClosureSummary {
                before,
                after,
                added: after - before,
            }),
        )
    } else {
        (rays, None)
    };
    let g = OrthoGraph::build(rays)?;
    let search = SearchOptions {
        budget: opts.budget,
    };
    let mut verdicts = Verdicts::default();

    if opts.ks {
        let v = ks_colorable(&g, search);
        let bf = if opts.brute_force && g.len() <= DEFAULT_KS_BRUTE_CAP {
            Some(brute_force_ks(&g, DEFAULT_KS_BRUTE_CAP)?)
        } else {
            None
        };
        verdicts.ks = Some(solver_report(&g, &v, bf, opts.timings)?);
    }
    if opts.three_c {
        let v = three_colorable(&g, search);
        let bf = if opts.brute_force && g.len() <= DEFAULT_3C_BRUTE_CAP {
            Some(brute_force_3c(&g, DEFAULT_3C_BRUTE_CAP)?)
        } else {
            None
        };
        verdicts.three_c = Some(solver_report(&g, &v, bf, opts.timings)?);
    }
    if opts.connect {
        let poset = ContextPoset::build(&g)?;
        let found = connection_search(
            &poset,
            &g,
            ConnectionSearchOptions {
                budget: opts.budget,
                brute_force: opts.brute_force,
            },
        )?;
        let v = &found.verdict;
        let holonomy = match &v.witness {
            Some(conn) => {
                let mut rng = StdRng::seed_from_u64(HOLONOMY_SEED);
                let sample = sample_holonomy(
                    conn,
                    &poset,
                    &mut rng,
                    opts.holonomy_samples,
                    opts.holonomy_max_len,
                )?;
                Some(HolonomySummary {
                    sampled: sample.sampled,
                    nontrivial: sample.nontrivial.len(),
                    residuals: sample
                        .nontrivial
                        .iter()
                        .map(|h| h.cycle_notation(&poset))
                        .collect(),
                })
            }
            None => None,
        };
        verdicts.connection = Some(VerdictReport {
            problem: "connection",
            satisfiable: v.satisfiable(),
            witness: v.witness.as_ref().map(|c| c.to_json(&poset)),
            nodes: v.nodes,
            ms: millis(v.elapsed, opts.timings),
            brute_force: found
                .brute_force
                .as_ref()
                .map(|bf| brute_summary(bf, v.satisfiable())),
            holonomy,
        });
    }

    Ok(Report {
        input,
        closure,
        graph: g.stats(),
        verdicts,
    })
}

impl Report {
    pub fn to_json(&self) -> Value {
        serde_json::to_value(self).expect("report serializes")
    }

    pub fn to_json_string(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }

    /// Every scalar in the JSON rendering, keyed by its dotted path.
    pub fn facts(&self) -> Vec<(String, String)> {
        let mut out = Vec::new();
        flatten("", &self.to_json(), &mut out);
        out
    }

    /// Human-readable rendering: one `path: value` line per fact, with a
    /// blank line between top-level sections.
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        let mut section = String::new();
        for (path, value) in self.facts() {
            let head = path.split('.').next().unwrap_or_default().to_owned();
            if head != section {
                if !section.is_empty() {
                    out.push('\n');
                }
                section = head;
            }
            out.push_str(&format!("{path}: {value}\n"));
        }
        out
    }
}

fn flatten(prefix: &str, value: &Value, out: &mut Vec<(String, String)>) {
    let join = |key: &str| {
        if prefix.is_empty() {
            key.to_owned()
        } else {
            format!("{prefix}.{key}")
        }
    };
    match value {
        Value::Object(map) if !map.is_empty() => {
            for (k, v) in map {
                flatten(&join(k), v, out);
            }
        }
        Value::Array(items) if !items.is_empty() => {
            for (i, v) in items.iter().enumerate() {
                flatten(&join(&i.to_string()), v, out);
            }
        }
        Value::String(s) => out.push((prefix.to_owned(), s.clone())),
        other => out.push((prefix.to_owned(), other.to_string())),
    }
}

/// Parses `path: value` lines from [`Report::to_text`].
pub fn parse_text_facts(text: &str) -> Vec<(String, String)> {
    text.lines()
        .filter(|l| !l.is_empty())
        .filter_map(|l| {
            // keys never contain ": " but ray keys inside paths contain ", "
            l.rsplit_once(": ")
                .map(|(k, v)| (k.to_owned(), v.to_owned()))
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::corpus::builtin;

    #[test]
    fn triad_everything_satisfiable() {
        let r = run_pipeline("triad", builtin("triad").unwrap(), 0, &PipelineOptions::everything())
            .unwrap();
        let v = &r.verdicts;
        assert_eq!(v.ks.as_ref().unwrap().satisfiable, Some(true));
        assert_eq!(v.three_c.as_ref().unwrap().satisfiable, Some(true));
        assert_eq!(v.connection.as_ref().unwrap().satisfiable, Some(true));
        assert!(v.ks.as_ref().unwrap().brute_force.as_ref().unwrap().agrees);
        assert_eq!(r.closure.as_ref().unwrap().added, 0);
        assert!(r.verdicts.ks.as_ref().unwrap().ms.is_none());
    }

    #[test]
    fn json_schema_field_names() {
        let r = run_pipeline("two-triads", builtin("two-triads").unwrap(), 0, &PipelineOptions::everything())
            .unwrap();
        let j = r.to_json();
        assert_eq!(j["verdicts"]["3c"]["problem"], "3c");
        assert_eq!(j["verdicts"]["ks"]["problem"], "ks");
        assert_eq!(j["verdicts"]["ks"]["witness"]["0, 0, 1"], 1);
        let pairs = &j["verdicts"]["connection"]["witness"]["pairs"];
        assert_eq!(pairs.as_array().unwrap().len(), 1);
        assert_eq!(j["verdicts"]["connection"]["holonomy"]["nontrivial"], 0);
    }

    #[test]
    fn text_and_json_agree() {
        let r = run_pipeline("yu-oh-13", builtin("yu-oh-13").unwrap(), 0, &PipelineOptions::everything())
            .unwrap();
        assert_eq!(parse_text_facts(&r.to_text()), r.facts());
    }

    #[test]
    fn connect_without_closure_fails() {
        let opts = PipelineOptions {
            connect: true,
            ..Default::default()
        };
        assert!(run_pipeline("yu-oh-13", builtin("yu-oh-13").unwrap(), 0, &opts).is_err());
    }

    #[test]
    fn budget_is_reported_as_inconclusive() {
        let opts = PipelineOptions {
            ks: true,
            budget: Some(0),
            ..Default::default()
        };
        let r = run_pipeline("peres-33", builtin("peres-33").unwrap(), 0, &opts).unwrap();
        let ks = r.verdicts.ks.unwrap();
        assert_eq!(ks.satisfiable, None);
        assert!(ks.witness.is_none());
    }
}
