//! Corpus statistics: argument usage by expression type, expected data
//! types, uniqueness of usages and arguments, callee origin, and the
//! similarity profile between gold arguments and their parameter names.

use std::collections::BTreeMap;

use serde::Serialize;

use super::request::{extract_requests, ArRequest};
use super::Project;
use crate::features::parasim;
use crate::typesys::{expected_types, TypeIndex, TypeSource};

#[derive(Debug, Clone, Serialize)]
pub struct Share {
    pub key: String,
    pub count: u64,
    pub share: f64,
}

#[derive(Debug, Clone, Serialize)]
pub struct StatsReport {
    pub files: usize,
    pub requests_total: u64,
    pub requests_resolved: u64,
    /// Argument-usage distribution by expression type.
    pub expr_type_shares: Vec<Share>,
    /// Expected-data-type distribution over resolved requests (first
    /// expected type of each request).
    pub expected_type_shares: Vec<Share>,
    /// Fraction of usage instances whose (argument, callee, position)
    /// triple occurs exactly once.
    pub unique_usage_fraction: f64,
    /// Fraction of argument-text instances occurring exactly once.
    pub unique_argument_fraction: f64,
    /// Resolved requests whose callee is declared in the project vs. in
    /// library stubs.
    pub intra_project_fraction: f64,
    pub inter_project_fraction: f64,
    /// Histogram of parasim(gold, parameter) over resolved requests, ten
    /// equal bins plus an exact-1.0 bin.
    pub parasim_histogram: Vec<Share>,
}

/// Compute the report over every unit of every project.
pub fn corpus_stats(projects: &[Project], index: &TypeIndex) -> StatsReport {
    let mut files = 0usize;
    let mut requests: Vec<ArRequest> = Vec::new();
    for p in projects {
        for unit in &p.units {
            files += 1;
            let unit = std::sync::Arc::new(unit.clone());
            requests.extend(extract_requests(&unit, index));
        }
    }

    let total = requests.len() as u64;
    let resolved: Vec<&ArRequest> = requests.iter().filter(|r| !r.unresolved).collect();

    // (a) expression types of gold arguments
    let mut expr_counts: BTreeMap<String, u64> = BTreeMap::new();
    for r in &requests {
        if let Some(g) = &r.gold {
            *expr_counts
                .entry(format!("{:?}", g.expr_type()))
                .or_insert(0) += 1;
        }
    }

    // (b) expected data types (first expected entry per resolved request)
    let mut type_counts: BTreeMap<String, u64> = BTreeMap::new();
    let mut intra = 0u64;
    let mut parasim_bins = vec![0u64; 11];
    let mut parasim_total = 0u64;
    for r in &resolved {
        let e = expected_types(r, index);
        if let Some(first) = e.entries.first() {
            *type_counts.entry(first.ty.to_string()).or_insert(0) += 1;
            if let (Some(g), Some(p)) = (&r.gold, &first.param_name) {
                let v: f64 = parasim(&g.text, p);
                let bin = if v >= 1.0 { 10 } else { (v * 10.0) as usize };
                parasim_bins[bin] += 1;
                parasim_total += 1;
            }
        }
        let is_intra = e.declared_in.iter().any(|d| {
            index
                .get(d)
                .is_some_and(|t| t.source == TypeSource::Project)
        });
        if is_intra {
            intra += 1;
        }
    }

    // (c) uniqueness of usages and sole arguments
    let mut usage_counts: BTreeMap<(String, String, u32), u64> = BTreeMap::new();
    let mut arg_counts: BTreeMap<String, u64> = BTreeMap::new();
    for r in &requests {
        if let Some(g) = &r.gold {
            *usage_counts
                .entry((g.text.clone(), r.callee.name(), r.pos))
                .or_insert(0) += 1;
            *arg_counts.entry(g.text.clone()).or_insert(0) += 1;
        }
    }
    let usage_instances: u64 = usage_counts.values().sum();
    let unique_usage_instances: u64 = usage_counts.values().filter(|c| **c == 1).count() as u64;
    let arg_instances: u64 = arg_counts.values().sum();
    let unique_arg_instances: u64 = arg_counts.values().filter(|c| **c == 1).count() as u64;

    let frac = |num: u64, den: u64| if den == 0 { 0.0 } else { num as f64 / den as f64 };

    StatsReport {
        files,
        requests_total: total,
        requests_resolved: resolved.len() as u64,
        expr_type_shares: to_shares(expr_counts),
        expected_type_shares: to_shares(type_counts),
        unique_usage_fraction: frac(unique_usage_instances, usage_instances),
        unique_argument_fraction: frac(unique_arg_instances, arg_instances),
        intra_project_fraction: frac(intra, resolved.len() as u64),
        inter_project_fraction: frac(resolved.len() as u64 - intra, resolved.len() as u64),
        parasim_histogram: parasim_bins
            .into_iter()
            .enumerate()
            .map(|(i, count)| Share {
                key: if i == 10 {
                    "1.0".to_string()
                } else {
                    format!("[{:.1},{:.1})", i as f64 / 10.0, (i + 1) as f64 / 10.0)
                },
                count,
                share: frac(count, parasim_total),
            })
            .collect(),
    }
}

fn to_shares(counts: BTreeMap<String, u64>) -> Vec<Share> {
    let total: u64 = counts.values().sum();
    let mut shares: Vec<Share> = counts
        .into_iter()
        .map(|(key, count)| Share {
            key,
            count,
            share: if total == 0 {
                0.0
            } else {
                count as f64 / total as f64
            },
        })
        .collect();
    shares.sort_by(|a, b| b.count.cmp(&a.count).then_with(|| a.key.cmp(&b.key)));
    shares
}

impl StatsReport {
    /// One CSV per distribution, keyed by a stable section name.
    pub fn csv_sections(&self) -> Vec<(&'static str, String)> {
        let render = |shares: &[Share]| {
            let mut s = String::from("key,count,share\n");
            for sh in shares {
                s.push_str(&format!("{},{},{}\n", sh.key, sh.count, sh.share));
            }
            s
        };
        vec![
            ("expr_types", render(&self.expr_type_shares)),
            ("expected_types", render(&self.expected_type_shares)),
            ("parasim_histogram", render(&self.parasim_histogram)),
        ]
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::corpus::{parse_unit, Project};
    use crate::typesys::{build_type_index, builtin_stubs};
    use std::sync::Arc;

    fn project(srcs: &[(&str, &str)]) -> (Vec<Project>, TypeIndex) {
        let units: Vec<_> = srcs
            .iter()
            .map(|(p, s)| parse_unit(p, s).unwrap())
            .collect();
        let arcs: Vec<_> = units.iter().cloned().map(Arc::new).collect();
        let index = build_type_index(&arcs, &builtin_stubs()).unwrap();
        (
            vec![Project {
                name: "proj".into(),
                root: "proj".into(),
                units,
            }],
            index,
        )
    }

    #[test]
    fn all_distinct_simple_names_is_fully_unique() {
        let src = r#"
            class A {
                void f(int q) {}
                void m(int a, int b, int c) { f(a); f(b); f(c); }
            }
        "#;
        let (projects, index) = project(&[("A.java", src)]);
        let r = corpus_stats(&projects, &index);
        assert_eq!(r.unique_usage_fraction, 1.0);
        assert_eq!(r.expr_type_shares.len(), 1);
        assert_eq!(r.expr_type_shares[0].key, "SimpleName");
        assert!((r.expr_type_shares[0].share - 1.0).abs() < 1e-9);
    }

    #[test]
    fn duplicated_file_contents_zero_uniqueness() {
        let src_a = r#"
            package p1;
            class A {
                void f(int q) {}
                void m(int a) { f(a); }
            }
        "#;
        let src_b = r#"
            package p2;
            class A {
                void f(int q) {}
                void m(int a) { f(a); }
            }
        "#;
        let (projects, index) = project(&[("A.java", src_a), ("B.java", src_b)]);
        let r = corpus_stats(&projects, &index);
        assert_eq!(r.unique_usage_fraction, 0.0);
        assert_eq!(r.unique_argument_fraction, 0.0);
    }

    #[test]
    fn shares_sum_to_one() {
        let src = r#"
            class A {
                void f(int q) {}
                void g(String s) {}
                void m(int a, String b) { f(a); g(b); g("lit"); f(0); }
            }
        "#;
        let (projects, index) = project(&[("A.java", src)]);
        let r = corpus_stats(&projects, &index);
        let sum: f64 = r.expr_type_shares.iter().map(|s| s.share).sum();
        assert!((sum - 1.0).abs() < 1e-9);
        let sum2: f64 = r.expected_type_shares.iter().map(|s| s.share).sum();
        assert!((sum2 - 1.0).abs() < 1e-9);
    }

    #[test]
    fn callee_origin_split() {
        let src = r#"
            class A {
                void local(int q) {}
                void m(int a, String s) {
                    local(a);
                    s.substring(a);
                }
            }
        "#;
        let (projects, index) = project(&[("A.java", src)]);
        let r = corpus_stats(&projects, &index);
        assert!((r.intra_project_fraction - 0.5).abs() < 1e-9);
        assert!((r.inter_project_fraction - 0.5).abs() < 1e-9);
    }
}
