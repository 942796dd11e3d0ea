//! Addition Theorem experiments: `h(φ)` against `h(φ↾_H) + h(φ̄)` under one
//! budget, with a per-`n` check of the finite inequality chain.

mod chain;
mod roster;

use schemars::JsonSchema;
use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::dynamics::{
    build_endomorphism, induce_quotient_with, restrict_with, EndoSpec, Endomorphism, NormalCertificate, NormalSpec,
    NormalSubgroup, QuotientSystem, DEFAULT_SAMPLES,
};
use crate::entropy::{entropy_h, entropy_h_on, entropy_h_rel, BudgetPolicy, FamilyEstimate, GrowthClass};
use crate::error::{Error, Result};
use crate::group::AmbientGroup;
use crate::groups::{build_group, truncation_family, GroupSpec};
use crate::kernel;
use crate::set::{generate_from_codes, FiniteSubgroup, FiniteSubset};

pub use chain::{chain_check, chain_check_prepared, ChainRecord, ChainReport};
pub use roster::{default_roster, run_catalog_suite, SuiteReport, SuiteSummary};

/// Largest `|h_G - h_H - h_Q|` accepted as exact additivity.
pub const VERDICT_TOLERANCE: f64 = 1e-9;
/// Largest discrepancy reported as additivity within tolerance.
pub const LOOSE_TOLERANCE: f64 = 1e-6;

/// A sequence of finite subsets of `G`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize, JsonSchema)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum FamilySpec {
    /// The group's own chain of finite truncations up to `size_bound` elements.
    Truncations { size_bound: usize },
    /// One subgroup per entry, generated by the listed elements.
    Generated { members: Vec<Vec<Value>> },
    /// Plain finite subsets, not necessarily subgroups.
    Explicit { sets: Vec<Vec<Value>> },
}

/// Families for the three systems. Members of `h` and `q` are given in `G`:
/// `h` members are intersected with `H` (or must lie in it), `q` members are
/// projected to `G/H`. Missing families are derived from `g`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize, JsonSchema)]
pub struct Families {
    pub g: FamilySpec,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub h: Option<FamilySpec>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub q: Option<FamilySpec>,
}

/// A subgroup `B = ⟨generators⟩` of `G` and the horizon for `chain_check`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize, JsonSchema)]
pub struct ChainSpec {
    pub generators: Vec<Value>,
    #[serde(default = "default_chain_n")]
    pub n: usize,
}

fn default_chain_n() -> usize {
    8
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize, JsonSchema)]
pub struct ATExperiment {
    pub label: String,
    pub group: GroupSpec,
    pub endo: EndoSpec,
    pub normal_subgroup: NormalSpec,
    pub families: Families,
    #[serde(default)]
    pub budget: BudgetPolicy,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub chain: Option<ChainSpec>,
    /// Marks a system where additivity is expected to fail.
    #[serde(default)]
    pub negative_control: bool,
}

impl ATExperiment {
    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| Error::Usage(format!("experiment: {e}")))
    }

    pub fn validate(&self) -> Result<()> {
        self.budget.validate()?;
        if self.label.trim().is_empty() {
            return Err(Error::usage("experiment label is empty"));
        }
        if let Some(c) = &self.chain {
            if c.n == 0 || c.n > 64 {
                return Err(Error::Usage(format!("chain horizon {} outside 1..=64", c.n)));
            }
        }
        Ok(())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize, JsonSchema)]
#[serde(rename_all = "snake_case")]
pub enum Verdict {
    AdditivityHoldsExact,
    AdditivityHoldsWithinTol,
    InconclusiveBudget,
    ViolationFlag,
}

/// Term-by-term comparison of the explicit quotient trajectory sizes with the
/// relative sizes `|T_k(φ, F)H / H|`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize, JsonSchema)]
pub struct CrossCheck {
    pub members_compared: usize,
    pub terms_compared: usize,
    pub all_equal: bool,
    /// `(member index, k)` of the first disagreement.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub first_mismatch: Option<(usize, usize)>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize, JsonSchema)]
pub struct ATReport {
    pub label: String,
    pub group: String,
    pub endo: String,
    pub normal_subgroup: String,
    pub certificate: NormalCertificate,
    #[serde(rename = "h_G")]
    pub h_g: FamilyEstimate,
    #[serde(rename = "h_H")]
    pub h_h: FamilyEstimate,
    #[serde(rename = "h_Q")]
    pub h_q: FamilyEstimate,
    /// `h(φ̄)` from members of the `G` family through `entropy_H_rel`.
    #[serde(rename = "h_Q_rel")]
    pub h_q_rel: FamilyEstimate,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub quotient_cross_check: Option<CrossCheck>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub chain_checks: Option<ChainReport>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub chain_error: Option<String>,
    pub verdict: Verdict,
    pub tolerance: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub discrepancy: Option<f64>,
    pub negative_control: bool,
    /// `h_G` looks infinite while `h_H` and `h_Q` stay bounded.
    pub at_failure_candidate: bool,
    pub notes: Vec<String>,
}

impl ATReport {
    /// Chain checks ran and every record passed.
    pub fn chain_passed(&self) -> bool {
        self.chain_checks.as_ref().is_some_and(|c| c.all_pass)
    }

    pub fn truncated(&self) -> bool {
        [&self.h_g, &self.h_h, &self.h_q].iter().any(|f| f.estimate.truncated)
    }
}

/// An experiment with its group, maps and quotient built and `H` certified.
#[derive(Clone, Debug)]
pub struct PreparedExperiment {
    pub group: AmbientGroup,
    pub phi: Endomorphism,
    pub restricted: Endomorphism,
    pub normal: NormalSubgroup,
    pub quotient: QuotientSystem,
}

/// Builds the system and certifies that `H` is normal and `φ`-invariant.
pub fn prepare(exp: &ATExperiment) -> Result<PreparedExperiment> {
    exp.validate()?;
    let group = build_group(&exp.group)?;
    let phi = build_endomorphism(&exp.group, &group, &exp.endo)?;
    let normal = NormalSubgroup::build(&exp.normal_subgroup, &exp.group, &group)?;
    let seed = exp.budget.seed;
    let quotient = induce_quotient_with(&phi, &normal, DEFAULT_SAMPLES, seed)?;
    let restricted = restrict_with(&phi, &normal, DEFAULT_SAMPLES, seed)?;
    Ok(PreparedExperiment {
        group,
        phi,
        restricted,
        normal,
        quotient,
    })
}

enum Family {
    Subgroups(Vec<FiniteSubgroup>),
    Sets(Vec<FiniteSubset>),
}

impl Family {
    fn sets(&self) -> Vec<FiniteSubset> {
        match self {
            Family::Subgroups(gs) => gs.iter().map(|g| g.as_set().clone()).collect(),
            Family::Sets(ss) => ss.clone(),
        }
    }
}

fn parse_codes(group: &AmbientGroup, values: &[Value]) -> Result<Vec<crate::Code>> {
    values.iter().map(|v| group.parse(v).map(|e| e.code)).collect()
}

fn build_family(spec: &FamilySpec, group: &AmbientGroup, max_size: usize) -> Result<Family> {
    Ok(match spec {
        FamilySpec::Truncations { size_bound } => Family::Subgroups(truncation_family(group, *size_bound)?),
        FamilySpec::Generated { members } => Family::Subgroups(
            members
                .iter()
                .map(|gens| generate_from_codes(group, &parse_codes(group, gens)?, max_size))
                .collect::<Result<_>>()?,
        ),
        FamilySpec::Explicit { sets } => Family::Sets(
            sets.iter()
                .map(|s| FiniteSubset::new(group, parse_codes(group, s)?))
                .collect::<Result<_>>()?,
        ),
    })
}

fn h_family(exp: &ATExperiment, sys: &PreparedExperiment, g_family: &Family) -> Result<Vec<FiniteSubset>> {
    let built;
    let source = match &exp.families.h {
        Some(spec) => {
            built = build_family(spec, &sys.group, exp.budget.max_set_size)?;
            &built
        }
        None => g_family,
    };
    let mut out: Vec<FiniteSubset> = Vec::new();
    match source {
        Family::Subgroups(gs) => {
            for f in gs {
                let a = sys.normal.intersect(f)?.into_set();
                if out.last() != Some(&a) {
                    out.push(a);
                }
            }
        }
        Family::Sets(_) if exp.families.h.is_none() => {
            return Err(Error::usage("a G family of plain subsets needs an explicit H family"));
        }
        Family::Sets(ss) => {
            for s in ss {
                if let Some(c) = s.codes().iter().find(|c| !sys.normal.contains(c)) {
                    return Err(Error::Usage(format!(
                        "H family member contains {} outside {}",
                        sys.group.display(c),
                        sys.normal.name()
                    )));
                }
                out.push(s.clone());
            }
        }
    }
    Ok(out)
}

fn cross_check(quotient: &FamilyEstimate, relative: &FamilyEstimate) -> CrossCheck {
    let mut check = CrossCheck {
        members_compared: 0,
        terms_compared: 0,
        all_equal: true,
        first_mismatch: None,
    };
    for q in &quotient.members {
        let Some(r) = relative.members.iter().find(|r| r.index == q.index) else {
            continue;
        };
        check.members_compared += 1;
        for (k, (a, b)) in q.sizes.iter().zip(&r.sizes).enumerate() {
            check.terms_compared += 1;
            if a != b && check.all_equal {
                check.all_equal = false;
                check.first_mismatch = Some((q.index, k));
            }
        }
    }
    check
}

/// Verdict from the three family estimates; only exact values can disagree.
pub fn verdict(h_g: &FamilyEstimate, h_h: &FamilyEstimate, h_q: &FamilyEstimate) -> (Verdict, Option<f64>) {
    match (
        h_g.estimate.exact_value(),
        h_h.estimate.exact_value(),
        h_q.estimate.exact_value(),
    ) {
        (Some(g), Some(h), Some(q)) => {
            let diff = (g - h - q).abs();
            let v = if diff <= VERDICT_TOLERANCE {
                Verdict::AdditivityHoldsExact
            } else if diff <= LOOSE_TOLERANCE {
                Verdict::AdditivityHoldsWithinTol
            } else {
                Verdict::ViolationFlag
            };
            (v, Some(diff))
        }
        _ => (Verdict::InconclusiveBudget, None),
    }
}

fn is_bounded(f: &FamilyEstimate) -> bool {
    !f.diverging && f.estimate.growth != GrowthClass::ExponentialCandidate
}

/// Runs the three entropy sweeps (plus the relative quotient sweep) and the
/// optional chain check, and renders a verdict.
pub fn run_at_experiment(exp: &ATExperiment) -> Result<ATReport> {
    let sys = prepare(exp)?;
    let budget = &exp.budget;
    let g_family = build_family(&exp.families.g, &sys.group, budget.max_set_size)?;
    let g_sets = g_family.sets();
    let h_sets = h_family(exp, &sys, &g_family)?;
    let q_sets: Vec<FiniteSubset> = match &exp.families.q {
        Some(spec) => build_family(spec, &sys.group, budget.max_set_size)?.sets(),
        None => g_sets.clone(),
    }
    .iter()
    .map(|s| sys.quotient.project_set(s))
    .collect();

    let h_order = match sys.normal.finite() {
        Some(h) => Some(h.order() as u64),
        None if sys.normal.is_whole() => sys.group.order(),
        None => None,
    };
    let ((h_g, h_h), (h_q, h_q_rel)) = kernel::join(
        || {
            kernel::join(
                || entropy_h(&sys.phi, &g_sets, budget),
                || entropy_h_on(&sys.restricted, &h_sets, h_order, budget),
            )
        },
        || {
            kernel::join(
                || entropy_h(&sys.quotient.induced, &q_sets, budget),
                || entropy_h_rel(&sys.phi, &g_sets, &sys.normal, budget),
            )
        },
    );
    let (h_g, h_h, h_q, h_q_rel) = (h_g?, h_h?, h_q?, h_q_rel?);

    let quotient_cross_check = exp.families.q.is_none().then(|| cross_check(&h_q, &h_q_rel));
    let (verdict, discrepancy) = verdict(&h_g, &h_h, &h_q);
    let at_failure_candidate = !is_bounded(&h_g) && is_bounded(&h_h) && is_bounded(&h_q);

    let mut notes = Vec::new();
    if at_failure_candidate {
        notes.push(
            "h_G is an h = ∞ candidate while h_H and h_Q stay bounded: additivity fails for this system \
             (numerical evidence, not a proof)"
                .to_string(),
        );
    }
    if let Some(c) = &quotient_cross_check {
        if !c.all_equal {
            notes.push(format!(
                "relative and explicit quotient sizes disagree at {:?}",
                c.first_mismatch
            ));
        }
    }
    if verdict == Verdict::InconclusiveBudget {
        let pending: Vec<&str> = [("h_G", &h_g), ("h_H", &h_h), ("h_Q", &h_q)]
            .iter()
            .filter(|(_, f)| f.estimate.exact.is_none())
            .map(|(n, _)| *n)
            .collect();
        notes.push(format!("no exact value for {}", pending.join(", ")));
    }

    let (chain_checks, chain_error) = match &exp.chain {
        None => (None, None),
        Some(c) => {
            let b = generate_from_codes(
                &sys.group,
                &parse_codes(&sys.group, &c.generators)?,
                budget.max_set_size,
            )?;
            match chain_check_prepared(&sys, &b, c.n, budget.max_set_size) {
                Ok(r) => (Some(r), None),
                Err(e) => (None, Some(e.to_string())),
            }
        }
    };
    if let Some(e) = &chain_error {
        notes.push(format!("chain check not completed: {e}"));
    }

    Ok(ATReport {
        label: exp.label.clone(),
        group: sys.group.describe(),
        endo: sys.phi.name().to_string(),
        normal_subgroup: sys.normal.name().to_string(),
        certificate: sys.quotient.certificate.clone(),
        h_g,
        h_h,
        h_q,
        h_q_rel,
        quotient_cross_check,
        chain_checks,
        chain_error,
        verdict,
        tolerance: VERDICT_TOLERANCE,
        discrepancy,
        negative_control: exp.negative_control,
        at_failure_candidate,
        notes,
    })
}
