//! Argument parsing for group, endomorphism, set and budget descriptions.

use std::path::Path;

use anyhow::{Context, Result};
use entropy_core::dynamics::EndoSpec;
use entropy_core::entropy::BudgetPolicy;
use entropy_core::groups::{build_group, catalog_entry, GroupSpec};
use entropy_core::{AmbientGroup, Code};
use serde_json::Value;

const DEFAULT_FAMILY_BOUND: usize = 4096;

/// Reads `@path` or an existing `*.json` path from disk; anything else is
/// returned as given.
pub fn load_text(arg: &str) -> Result<String> {
    let path = match arg.strip_prefix('@') {
        Some(p) => Some(Path::new(p)),
        None if arg.ends_with(".json") && Path::new(arg).exists() => Some(Path::new(arg)),
        None => None,
    };
    match path {
        Some(p) => std::fs::read_to_string(p).with_context(|| format!("reading {}", p.display())),
        None => Ok(arg.to_string()),
    }
}

pub fn load_json(arg: &str) -> Result<Value> {
    let text = load_text(arg)?;
    serde_json::from_str(&text).with_context(|| format!("parsing JSON from {arg:?}"))
}

/// A catalog name or a JSON group spec.
pub fn load_group(arg: &str) -> Result<(GroupSpec, AmbientGroup)> {
    let text = load_text(arg)?;
    let spec = if text.trim_start().starts_with('{') {
        GroupSpec::from_json(&text)?
    } else {
        catalog_entry(text.trim())?.spec
    };
    let group = build_group(&spec)?;
    Ok((spec, group))
}

pub fn load_endo(arg: &str) -> Result<EndoSpec> {
    Ok(load_text(arg)?.parse::<EndoSpec>()?)
}

pub fn load_budget(arg: &str) -> Result<BudgetPolicy> {
    let budget: BudgetPolicy = serde_json::from_value(load_json(arg)?).context("budget policy")?;
    budget.validate()?;
    Ok(budget)
}

/// A JSON array of elements.
pub fn value_list(arg: &str) -> Result<Vec<Value>> {
    match load_json(arg)? {
        Value::Array(items) => Ok(items),
        other => anyhow::bail!("expected a JSON array of elements, got {other}"),
    }
}

pub fn parse_codes(group: &AmbientGroup, values: &[Value]) -> Result<Vec<Code>> {
    values
        .iter()
        .map(|v| group.parse(v).map(|e| e.code).map_err(Into::into))
        .collect()
}

#[derive(Debug, PartialEq)]
pub enum SetArg {
    Family(usize),
    Subgroup(Vec<Value>),
    Explicit(Vec<Value>),
}

impl SetArg {
    pub fn parse(arg: &str) -> Result<Self> {
        if arg == "family" {
            return Ok(SetArg::Family(DEFAULT_FAMILY_BOUND));
        }
        if let Some(bound) = arg.strip_prefix("family:") {
            return Ok(SetArg::Family(bound.parse().context("family size bound")?));
        }
        if let Some(rest) = arg.strip_prefix("subgroup:") {
            return Ok(SetArg::Subgroup(value_list(rest)?));
        }
        Ok(SetArg::Explicit(value_list(arg)?))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn set_arguments() {
        assert_eq!(SetArg::parse("family").unwrap(), SetArg::Family(4096));
        assert_eq!(SetArg::parse("family:64").unwrap(), SetArg::Family(64));
        assert_eq!(
            SetArg::parse("subgroup:[1]").unwrap(),
            SetArg::Subgroup(vec![serde_json::json!(1)])
        );
        assert!(SetArg::parse("family:x").is_err());
        assert!(SetArg::parse("{}").is_err());
    }

    #[test]
    fn groups_by_name_or_json() {
        assert_eq!(load_group("Q8").unwrap().1.order(), Some(8));
        let (_, g) = load_group(r#"{"variant": "restricted_direct_sum", "modulus": 6}"#).unwrap();
        assert_eq!(g.order(), None);
        assert!(load_group("nonsense").is_err());
    }
}
