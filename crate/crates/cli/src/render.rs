use std::fmt::Write as _;
use std::path::Path;

use anyhow::{Context, Result};
use entropy_core::at::{ATExperiment, ATReport, SuiteReport};
use entropy_core::dynamics::{EndoSpec, NormalSpec};
use entropy_core::entropy::{BudgetPolicy, EntropyEstimate, FamilyEstimate};
use entropy_core::groups::GroupSpec;
use serde::Serialize;

/// Writes pretty JSON to `path`, or to stdout for `-`.
pub fn write_json<T: Serialize>(path: &Path, value: &T) -> Result<()> {
    let text = serde_json::to_string_pretty(value)?;
    if path.as_os_str() == "-" {
        println!("{text}");
        return Ok(());
    }
    std::fs::write(path, text + "\n").with_context(|| format!("writing {}", path.display()))
}

fn show(v: Option<f64>) -> String {
    v.map_or_else(|| "-".to_string(), |x| format!("{x:.6}"))
}

pub fn estimate_text(e: &EntropyEstimate) -> String {
    let mut out = String::new();
    match e.exact {
        Some(x) => writeln!(out, "exact {:.12} nats ({:?})", x.value, x.method),
        None => writeln!(out, "no exact value; upper bound {:.12} nats", e.upper_bound),
    }
    .unwrap();
    writeln!(
        out,
        "growth {:?}, route {:?}, largest set {}{}",
        e.growth,
        e.budget_used.route,
        e.budget_used.largest_size,
        if e.truncated { ", truncated by budget" } else { "" }
    )
    .unwrap();
    writeln!(out, "{:>3}  {:>16}", "n", "l(T_2^n)/2^n").unwrap();
    for p in &e.sequence {
        writeln!(out, "{:>3}  {:>16.12}", p.n, p.value).unwrap();
    }
    out
}

pub fn members_text(f: &FamilyEstimate) -> String {
    let mut out = format!("family: stabilized {}, diverging {}\n", f.stabilized, f.diverging);
    for m in &f.members {
        writeln!(
            out,
            "  member {} (|F| = {}): exact {} upper {:.6} {:?}",
            m.index,
            m.size,
            show(m.exact),
            m.upper_bound,
            m.growth
        )
        .unwrap();
    }
    out
}

pub fn report_line(r: &ATReport) -> String {
    let chain = match (&r.chain_checks, &r.chain_error) {
        (Some(c), _) => if c.all_pass { "pass" } else { "FAIL" }.to_string(),
        (None, Some(_)) => "error".to_string(),
        (None, None) => "-".to_string(),
    };
    let mut line = format!(
        "{:24} h_G {:>9} h_H {:>9} h_Q {:>9}  {:?}  chain {}",
        r.label,
        show(r.h_g.estimate.exact_value()),
        show(r.h_h.estimate.exact_value()),
        show(r.h_q.estimate.exact_value()),
        r.verdict,
        chain
    );
    if r.at_failure_candidate {
        line.push_str("  [h = inf candidate]");
    }
    line
}

/// Pretty JSON schema for a named format.
pub fn schema(kind: &str) -> String {
    let s = match kind {
        "group-spec" => schemars::schema_for!(GroupSpec),
        "endo-spec" => schemars::schema_for!(EndoSpec),
        "normal-spec" => schemars::schema_for!(NormalSpec),
        "budget" => schemars::schema_for!(BudgetPolicy),
        "experiment" => schemars::schema_for!(ATExperiment),
        "report" => schemars::schema_for!(ATReport),
        "suite" => schemars::schema_for!(SuiteReport),
        other => unreachable!("unknown schema {other}"),
    };
    serde_json::to_string_pretty(&s).expect("schemas serialize")
}
