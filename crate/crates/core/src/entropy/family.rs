use schemars::JsonSchema;
use serde::{Deserialize, Serialize};

use super::{
    entropy_H, entropy_H_rel, BudgetPolicy, EntropyEstimate, ExactMethod, ExactValue, GrowthClass, STABILITY_TOLERANCE,
};
use crate::dynamics::{Endomorphism, NormalSubgroup};
use crate::error::{Error, Result};
use crate::kernel;
use crate::set::FiniteSubset;

/// One family member's contribution to `h(φ)`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize, JsonSchema)]
pub struct MemberRow {
    /// Position of the member in the family as supplied.
    pub index: usize,
    pub size: usize,
    /// `|T_k(φ, F)|` for `k = 0, 1, …` as far as the budget allowed.
    pub sizes: Vec<u128>,
    pub upper_bound: f64,
    pub exact: Option<f64>,
    pub truncated: bool,
    pub growth: GrowthClass,
}

/// `h(φ)` as the running supremum of `H(φ, F)` over family members.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize, JsonSchema)]
pub struct FamilyEstimate {
    pub estimate: EntropyEstimate,
    pub members: Vec<MemberRow>,
    /// All member values exact and equal over the last stabilization window
    /// (or the family ends at the whole finite group).
    pub stabilized: bool,
    /// `h = ∞` candidate: a member grows exponentially under the identity, or
    /// member values rise by at least `log 2` over the whole window.
    pub diverging: bool,
}

/// Sweeps `entropy_H` over the first `max_members` family members that fit the
/// set budget, evaluating members in parallel.
pub fn entropy_h(phi: &Endomorphism, family: &[FiniteSubset], budget: &BudgetPolicy) -> Result<FamilyEstimate> {
    sweep(family, budget, phi.group().order(), |f| entropy_H(phi, f, budget))
}

/// `entropy_h` for a system living on a `φ`-invariant subgroup of order
/// `system_order` (when finite): a member of that order is the whole system,
/// so the family ends there.
pub fn entropy_h_on(
    phi: &Endomorphism,
    family: &[FiniteSubset],
    system_order: Option<u64>,
    budget: &BudgetPolicy,
) -> Result<FamilyEstimate> {
    sweep(family, budget, system_order, |f| entropy_H(phi, f, budget))
}

/// The same sweep with `entropy_H_rel`, estimating `h(φ̄)` on `G/H` from
/// members of a family in `G`.
pub fn entropy_h_rel(
    phi: &Endomorphism,
    family: &[FiniteSubset],
    h: &NormalSubgroup,
    budget: &BudgetPolicy,
) -> Result<FamilyEstimate> {
    sweep(family, budget, phi.group().order(), |f| {
        entropy_H_rel(phi, f, h, budget)
    })
}

fn sweep<F>(
    family: &[FiniteSubset],
    budget: &BudgetPolicy,
    system_order: Option<u64>,
    estimate_one: F,
) -> Result<FamilyEstimate>
where
    F: Fn(&FiniteSubset) -> Result<EntropyEstimate> + Sync + Send,
{
    budget.validate()?;
    if family.is_empty() {
        return Err(Error::Unsupported("entropy_h needs a non-empty family".into()));
    }
    let (positions, members): (Vec<usize>, Vec<&FiniteSubset>) = family
        .iter()
        .enumerate()
        .filter(|(_, f)| f.len() <= budget.max_set_size)
        .take(budget.max_members)
        .unzip();
    if members.is_empty() {
        return Err(Error::Unsupported(format!(
            "no family member fits the set budget of {}",
            budget.max_set_size
        )));
    }
    let estimates = kernel::map_collect(&members, |f| estimate_one(f))
        .into_iter()
        .collect::<Result<Vec<_>>>()?;
    let rows: Vec<MemberRow> = estimates
        .iter()
        .zip(&members)
        .zip(&positions)
        .map(|((e, f), &index)| MemberRow {
            index,
            size: f.len(),
            sizes: e.sizes.clone(),
            upper_bound: e.upper_bound,
            exact: e.exact_value(),
            truncated: e.truncated,
            growth: e.growth,
        })
        .collect();

    let window = budget.stabilization_window;
    let values: Vec<f64> = estimates.iter().map(EntropyEstimate::best_value).collect();
    let rising = values.len() > window
        && values[values.len() - window - 1..]
            .windows(2)
            .all(|w| w[1] - w[0] >= std::f64::consts::LN_2 - STABILITY_TOLERANCE);
    let diverging = rising || estimates.iter().any(|e| e.growth == GrowthClass::ExponentialCandidate);

    let exacts: Option<Vec<f64>> = estimates.iter().map(EntropyEstimate::exact_value).collect();
    let last = members.last().expect("non-empty");
    let covers_group = system_order.is_some_and(|n| n == last.len() as u64);
    let stabilized = !diverging
        && exacts.as_ref().is_some_and(|xs| {
            let tail = &xs[xs.len().saturating_sub(window)..];
            let flat = tail.iter().all(|v| (v - tail[0]).abs() <= STABILITY_TOLERANCE);
            flat && (xs.len() >= window || covers_group)
        });

    let best = values
        .iter()
        .enumerate()
        .fold(0, |b, (i, &v)| if v >= values[b] { i } else { b });
    let mut estimate = estimates[best].clone();
    estimate.upper_bound = estimates
        .iter()
        .map(|e| e.upper_bound)
        .fold(f64::NEG_INFINITY, f64::max);
    estimate.truncated = estimates.iter().any(|e| e.truncated);
    estimate.exact = if stabilized {
        let xs = exacts.expect("stabilized implies exact");
        let methods: Vec<ExactMethod> = estimates.iter().filter_map(|e| e.exact.map(|x| x.method)).collect();
        let method = if methods.iter().all(|&m| m == methods[0]) {
            methods[0]
        } else {
            ExactMethod::StabilizedRatio
        };
        Some(ExactValue {
            value: xs.iter().copied().fold(0.0, f64::max),
            method,
        })
    } else {
        None
    };
    estimate.growth = if diverging {
        GrowthClass::ExponentialCandidate
    } else if stabilized {
        GrowthClass::Stabilized
    } else if estimate.growth == GrowthClass::Stabilized {
        GrowthClass::Undetermined
    } else {
        estimate.growth
    };
    Ok(FamilyEstimate {
        estimate,
        members: rows,
        stabilized,
        diverging,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dynamics::{build_endomorphism, EndoSpec};
    use crate::groups::{build_group, catalog_entry, finite_subgroup_family, GroupSpec};
    use crate::set::FiniteSubgroup;

    fn family_of(name: &str, bound: usize) -> (GroupSpec, Vec<FiniteSubset>) {
        let entry = catalog_entry(name).unwrap();
        let fam = finite_subgroup_family(&entry, bound).unwrap();
        (entry.spec, fam.into_iter().map(FiniteSubgroup::into_set).collect())
    }

    #[test]
    fn identity_family_is_zero_and_stabilized() {
        let (spec, fam) = family_of("Z2^(N)", 1 << 10);
        let g = build_group(&spec).unwrap();
        let r = entropy_h(&Endomorphism::identity(&g), &fam, &BudgetPolicy::default()).unwrap();
        assert!(r.stabilized);
        assert_eq!(r.estimate.exact_value(), Some(0.0));
        assert!(!r.diverging);
    }

    #[test]
    fn shift_on_truncations_is_log_two_per_member() {
        let (spec, fam) = family_of("Z2^(N)", 1 << 10);
        let g = build_group(&spec).unwrap();
        let phi = build_endomorphism(&spec, &g, &EndoSpec::Shift { amount: 1 }).unwrap();
        let r = entropy_h(&phi, &fam, &BudgetPolicy::default()).unwrap();
        assert_eq!(r.members.len(), 4);
        for row in &r.members {
            assert!((row.exact.unwrap() - 2f64.ln()).abs() < 1e-12);
        }
        assert!(r.stabilized);
        assert!(!r.diverging);
    }

    #[test]
    fn finite_group_single_member_is_stabilized() {
        let (spec, fam) = family_of("Q8", 100);
        let g = build_group(&spec).unwrap();
        let phi = build_endomorphism(
            &spec,
            &g,
            &EndoSpec::Inner {
                by: serde_json::json!("i"),
            },
        )
        .unwrap();
        let r = entropy_h(&phi, &fam, &BudgetPolicy::default()).unwrap();
        assert!(r.stabilized);
        assert_eq!(r.estimate.exact_value(), Some(0.0));
    }

    #[test]
    fn empty_family_unsupported() {
        let g = build_group(&GroupSpec::cyclic(2)).unwrap();
        assert!(matches!(
            entropy_h(&Endomorphism::identity(&g), &[], &BudgetPolicy::default()),
            Err(Error::Unsupported(_))
        ));
    }
}
