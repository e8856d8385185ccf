//! Plain-text rendering of a report.

use std::fmt::Write;

use serde_json::Value as Json;

use crate::pipeline::{Check, Report, Status};

fn list(v: &Json) -> String {
    v.as_array()
        .map(|a| a.iter().map(|x| x.as_str().map_or_else(|| x.to_string(), str::to_string)).collect::<Vec<_>>().join(", "))
        .unwrap_or_default()
}

pub fn render_text(report: &Report) -> String {
    let mut out = String::new();
    let _ = writeln!(
        out,
        "generators {} with Ore variable {}, degree bound {}",
        report.generators.join(" "),
        report.ore_variable,
        report.bound
    );
    if !report.parameters.is_empty() {
        let params: Vec<String> = report.parameters.iter().map(|(k, v)| format!("{k}={v}")).collect();
        let _ = writeln!(out, "parameters {}", params.join(" "));
    }
    for s in &report.stages {
        let tag = match &s.status {
            Status::Pass => "PASS",
            Status::Fail => "FAIL",
            Status::Skipped { .. } => "SKIP",
        };
        let _ = writeln!(out, "[{tag}] {} ({:.3}s): {}", s.check.name(), s.elapsed.as_secs_f64(), s.summary);
        let w = &s.witness;
        match s.check {
            Check::DeltaR if s.status == Status::Fail => {
                let _ = writeln!(out, "    δ(r) = {}", w["delta_r"]["rendered"].as_str().unwrap_or(""));
            }
            Check::OrePresentation => {
                for r in w["relations"].as_array().into_iter().flatten() {
                    let _ = writeln!(out, "    {}", r["rendered"].as_str().unwrap_or(""));
                }
            }
            Check::Superpotential => {
                let _ = writeln!(out, "    w = {}", w["superpotential"]["rendered"].as_str().unwrap_or(""));
            }
            Check::Hilbert => {
                let _ = writeln!(out, "    dim B_k: {}", list(&w["extension"]["dims"]));
                let _ = writeln!(out, "    dim A_k: {}", list(&w["base"]["dims"]));
            }
            Check::Beilinson => {
                for row in w["grid"].as_array().into_iter().flatten() {
                    let _ = writeln!(out, "    {}", list(row));
                }
            }
            Check::StandardForm => {
                for row in w["transform"].as_array().into_iter().flatten() {
                    let _ = writeln!(out, "    P: {}", list(row));
                }
            }
            _ => {}
        }
    }
    let failed = report.stages.iter().filter(|s| s.status == Status::Fail).count();
    let _ = writeln!(out, "{} stage(s), {failed} failed", report.stages.len());
    out
}
