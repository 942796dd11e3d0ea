#![allow(non_snake_case)]

use std::time::Instant;

use super::{BudgetPolicy, BudgetUsed, EntropyEstimate, ExactMethod, Route, StopReason};
use crate::dynamics::{Endomorphism, NormalSubgroup};
use crate::element::Code;
use crate::error::{Error, Result};
use crate::groups::sparse;
use crate::kernel;
use crate::set::{is_subgroup, multiply_sets_bounded, FiniteSubgroup, FiniteSubset};
use crate::span::{SpanBasis, SparseVector};

struct Run {
    sizes: Vec<u128>,
    stopped_by: Option<StopReason>,
    route: Route,
}

fn finish(
    run: Run,
    phi: &Endomorphism,
    budget: &BudgetPolicy,
    shortcut: Option<ExactMethod>,
    adjoined: bool,
    start: Instant,
) -> EntropyEstimate {
    let used = BudgetUsed {
        route: run.route,
        steps: run.sizes.len() - 1,
        largest_size: run.sizes.iter().copied().max().unwrap_or(1),
        elapsed_seconds: start.elapsed().as_secs_f64(),
        stopped_by: run.stopped_by,
    };
    EntropyEstimate::from_sizes(
        run.sizes,
        budget.stabilization_window,
        phi.is_identity(),
        shortcut,
        adjoined,
        used,
    )
}

/// `|T_0| = 1` and `|T_k| = c` for `k ≥ 1`.
fn constant_run(c: usize, budget: &BudgetPolicy) -> Run {
    let mut sizes = vec![1u128];
    sizes.extend(std::iter::repeat(c as u128).take(budget.horizon()));
    Run {
        sizes,
        stopped_by: None,
        route: Route::Shortcut,
    }
}

fn to_sparse(code: &[i32], modulus: u32) -> SparseVector {
    let d = modulus as i32;
    sparse::pairs(code)
        .filter_map(|(i, v)| {
            let r = v.rem_euclid(d);
            (r != 0).then_some((i64::from(i), r as u32))
        })
        .collect()
}

/// `|T_k| = |⟨φ^j(g) : j < k, g ∈ gens⟩|` read modulo `modulus`.
fn span_run(phi: &Endomorphism, gens: &[Code], modulus: u32, budget: &BudgetPolicy, start: Instant) -> Run {
    let mut sizes = vec![1u128];
    let mut images: Vec<Code> = gens.to_vec();
    let mut basis: Vec<SparseVector> = Vec::new();
    let mut stopped_by = None;
    for k in 1..=budget.horizon() {
        basis.extend(images.iter().map(|c| to_sparse(c, modulus)));
        let span = SpanBasis::new(modulus, &basis);
        sizes.push(span.order());
        basis = span.rows();
        if k < budget.horizon() {
            if start.elapsed().as_secs_f64() > budget.time_cap {
                stopped_by = Some(StopReason::TimeCap);
                break;
            }
            images = images.iter().map(|c| phi.apply(c)).collect();
        }
    }
    Run {
        sizes,
        stopped_by,
        route: Route::LinearSpan,
    }
}

/// Explicit products `T_{k+1} = T_k · φ^k(X)`, optionally reduced to coset
/// representatives of `h` after every step.
fn enumeration_run(
    phi: &Endomorphism,
    x: &FiniteSubset,
    h: Option<&NormalSubgroup>,
    budget: &BudgetPolicy,
    start: Instant,
) -> Result<Run> {
    let reduce = |s: FiniteSubset| match h {
        Some(h) => h.representatives(&s),
        None => s,
    };
    let mut current = reduce(FiniteSubset::identity(x.group()));
    let mut image = reduce(x.clone());
    let mut sizes = vec![current.len() as u128];
    let mut stopped_by = None;
    // Images of a subgroup are subgroups, so products can go coset by coset.
    let subgroup = is_subgroup(x);
    let canon = |c: &[i32]| h.map_or_else(|| c.into(), |h| h.canonicalize(c));
    for k in 1..=budget.horizon() {
        let step = if subgroup {
            kernel::product_by_subgroup(
                x.group().oracle(),
                current.codes(),
                image.codes(),
                budget.max_set_size,
                Some(&canon),
            )
            .map(|codes| FiniteSubset::from_sorted(x.group(), codes))
            .map_err(|_| Error::budget("set product", budget.max_set_size))
        } else {
            multiply_sets_bounded(&current, &image, budget.max_set_size).map(reduce)
        };
        match step {
            Ok(product) => current = product,
            Err(Error::BudgetExceeded { .. }) => {
                stopped_by = Some(StopReason::SetBudget);
                break;
            }
            Err(e) => return Err(e),
        }
        sizes.push(current.len() as u128);
        if k < budget.horizon() {
            if start.elapsed().as_secs_f64() > budget.time_cap {
                stopped_by = Some(StopReason::TimeCap);
                break;
            }
            image = reduce(phi.image(&image));
        }
    }
    Ok(Run {
        sizes,
        stopped_by,
        route: Route::Enumeration,
    })
}

fn check_inputs(phi: &Endomorphism, x: &FiniteSubset, budget: &BudgetPolicy) -> Result<()> {
    budget.validate()?;
    if !phi.group().same_group(x.group()) {
        return Err(Error::usage("endomorphism and set live in different groups"));
    }
    if x.is_empty() {
        return Err(Error::usage("entropy needs a non-empty set"));
    }
    Ok(())
}

/// `H(φ, X)` from `ℓ(T_{2^n})/2^n`, `n ≤ max_exponent`, with the identity
/// adjoined to `X` when absent. Budget exhaustion truncates the run instead
/// of failing.
pub fn entropy_H(phi: &Endomorphism, x: &FiniteSubset, budget: &BudgetPolicy) -> Result<EntropyEstimate> {
    check_inputs(phi, x, budget)?;
    let start = Instant::now();
    let (x, adjoined) = x.with_identity();
    if phi.is_trivial() {
        let run = constant_run(x.len(), budget);
        return Ok(finish(run, phi, budget, Some(ExactMethod::Trivial), adjoined, start));
    }
    if phi.is_identity() && is_subgroup(&x) {
        let run = constant_run(x.len(), budget);
        return Ok(finish(
            run,
            phi,
            budget,
            Some(ExactMethod::IdentityMap),
            adjoined,
            start,
        ));
    }
    if let Some(m) = x.group().linear_modulus() {
        if let Ok(sub) = FiniteSubgroup::from_set(x.clone()) {
            let run = span_run(phi, sub.generators(), m, budget, start);
            return Ok(finish(run, phi, budget, None, adjoined, start));
        }
    }
    let run = enumeration_run(phi, &x, None, budget, start)?;
    Ok(finish(run, phi, budget, None, adjoined, start))
}

/// `H(φ̄, π(X))` computed inside `G` from `ℓ(T_{2^n}(φ, X), H)/2^n`, where
/// cosets are identified through the canonicalizer of `h`.
pub fn entropy_H_rel(
    phi: &Endomorphism,
    x: &FiniteSubset,
    h: &NormalSubgroup,
    budget: &BudgetPolicy,
) -> Result<EntropyEstimate> {
    check_inputs(phi, x, budget)?;
    if !h.group().same_group(x.group()) {
        return Err(Error::usage("normal subgroup and set live in different groups"));
    }
    let start = Instant::now();
    let (x, adjoined) = x.with_identity();
    if h.is_whole() {
        let run = constant_run(1, budget);
        return Ok(finish(run, phi, budget, Some(ExactMethod::Trivial), adjoined, start));
    }
    if phi.is_trivial() {
        let run = constant_run(h.coset_count(&x), budget);
        return Ok(finish(run, phi, budget, Some(ExactMethod::Trivial), adjoined, start));
    }
    if phi.is_identity() && is_subgroup(&x) {
        let run = constant_run(h.coset_count(&x), budget);
        return Ok(finish(
            run,
            phi,
            budget,
            Some(ExactMethod::IdentityMap),
            adjoined,
            start,
        ));
    }
    if let (Some(_), Some(d)) = (x.group().linear_modulus(), h.linear_divisor()) {
        if let Ok(sub) = FiniteSubgroup::from_set(x.clone()) {
            let run = span_run(phi, sub.generators(), d, budget, start);
            return Ok(finish(run, phi, budget, None, adjoined, start));
        }
    }
    let run = enumeration_run(phi, &x, Some(h), budget, start)?;
    Ok(finish(run, phi, budget, None, adjoined, start))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dynamics::{build_endomorphism, induce_quotient_with, EndoSpec, NormalSpec};
    use crate::entropy::{ExactMethod, GrowthClass};
    use crate::groups::{build_group, GroupSpec};
    use crate::set::generate_from_codes;
    use serde_json::json;

    fn shift_system(m: u32) -> (Endomorphism, FiniteSubset) {
        let spec = GroupSpec::dsum(m, None);
        let g = build_group(&spec).unwrap();
        let phi = build_endomorphism(&spec, &g, &EndoSpec::Shift { amount: 1 }).unwrap();
        let x = generate_from_codes(&g, &[g.parse(&json!([[0, 1]])).unwrap().code], 100)
            .unwrap()
            .into_set();
        (phi, x)
    }

    #[test]
    fn bernoulli_shift_is_log_m() {
        for m in [2u32, 3, 6] {
            let (phi, x) = shift_system(m);
            let e = entropy_H(&phi, &x, &BudgetPolicy::default()).unwrap();
            let lm = (m as f64).ln();
            assert_eq!(e.sequence.len(), 5);
            assert!(e.sequence.iter().all(|p| (p.value - lm).abs() < 1e-12));
            assert!((e.exact_value().unwrap() - lm).abs() < 1e-12);
            assert_eq!(e.budget_used.route, Route::LinearSpan);
            assert!(!e.truncated);
        }
    }

    #[test]
    fn span_and_enumeration_agree() {
        let (phi, x) = shift_system(3);
        let e = entropy_H(&phi, &x, &BudgetPolicy::default().with_exponent(3)).unwrap();
        let run = enumeration_run(
            &phi,
            &x,
            None,
            &BudgetPolicy::default().with_exponent(3),
            Instant::now(),
        )
        .unwrap();
        assert_eq!(e.sizes, run.sizes);
    }

    #[test]
    fn identity_on_subgroup_is_exact_zero() {
        let spec = GroupSpec::quaternion();
        let g = build_group(&spec).unwrap();
        let x = FiniteSubset::new(&g, g.elements().unwrap()).unwrap();
        let e = entropy_H(&Endomorphism::identity(&g), &x, &BudgetPolicy::default()).unwrap();
        assert_eq!(e.exact.unwrap().method, ExactMethod::IdentityMap);
        assert_eq!(e.exact_value(), Some(0.0));
    }

    #[test]
    fn identity_adjunction_is_recorded() {
        let spec = GroupSpec::symmetric(3);
        let g = build_group(&spec).unwrap();
        let x = FiniteSubset::new(&g, [g.parse(&json!("(1 2)")).unwrap().code]).unwrap();
        let e = entropy_H(&Endomorphism::identity(&g), &x, &BudgetPolicy::default()).unwrap();
        assert!(e.identity_adjoined);
        assert_eq!(e.exact_value(), Some(0.0));
    }

    #[test]
    fn budget_truncates_instead_of_failing() {
        let spec = GroupSpec::lamplighter(2);
        let g = build_group(&spec).unwrap();
        let x = FiniteSubset::new(
            &g,
            [
                g.parse(&json!({"lamps": [[0, 1]], "pos": 0})).unwrap().code,
                g.parse(&json!({"lamps": [], "pos": 1})).unwrap().code,
            ],
        )
        .unwrap();
        let budget = BudgetPolicy::default().with_max_set_size(500);
        let e = entropy_H(&Endomorphism::identity(&g), &x, &budget).unwrap();
        assert!(e.truncated);
        assert_eq!(e.budget_used.stopped_by, Some(StopReason::SetBudget));
        assert!(e.monotone);
    }

    #[test]
    fn relative_matches_quotient_on_z6() {
        let (phi, x) = shift_system(6);
        let spec = GroupSpec::dsum(6, None);
        let g = phi.group().clone();
        let h = NormalSubgroup::build(&NormalSpec::Multiples { divisor: 3 }, &spec, &g).unwrap();
        let rel = entropy_H_rel(&phi, &x, &h, &BudgetPolicy::default()).unwrap();
        assert!((rel.exact_value().unwrap() - 3f64.ln()).abs() < 1e-12);
        let q = induce_quotient_with(&phi, &h, 500, 0).unwrap();
        let direct = entropy_H(&q.induced, &q.project_set(&x), &BudgetPolicy::default()).unwrap();
        assert_eq!(rel.sizes, direct.sizes);
        let budget = BudgetPolicy::default().with_exponent(3);
        let enumerated = enumeration_run(&phi, &x, Some(&h), &budget, Instant::now()).unwrap();
        assert_eq!(&rel.sizes[..9], &enumerated.sizes[..]);
    }

    #[test]
    fn relative_extremes() {
        let (phi, x) = shift_system(2);
        let spec = GroupSpec::dsum(2, None);
        let g = phi.group().clone();
        let whole = NormalSubgroup::build(&NormalSpec::Whole, &spec, &g).unwrap();
        assert_eq!(
            entropy_H_rel(&phi, &x, &whole, &BudgetPolicy::default())
                .unwrap()
                .exact_value(),
            Some(0.0)
        );
        let triv = NormalSubgroup::build(&NormalSpec::Trivial, &spec, &g).unwrap();
        let budget = BudgetPolicy::default().with_exponent(3);
        let a = entropy_H_rel(&phi, &x, &triv, &budget).unwrap();
        let b = entropy_H(&phi, &x, &budget).unwrap();
        assert_eq!(a.sizes, b.sizes);
    }

    #[test]
    fn lamplighter_quotient_grows_linearly() {
        let spec = GroupSpec::lamplighter(2);
        let g = build_group(&spec).unwrap();
        let h = NormalSubgroup::build(&NormalSpec::Base, &spec, &g).unwrap();
        let x = FiniteSubset::new(
            &g,
            [
                json!({"lamps": [[0, 1]], "pos": 0}),
                json!({"lamps": [], "pos": 1}),
                json!({"lamps": [], "pos": -1}),
            ]
            .iter()
            .map(|v| g.parse(v).unwrap().code),
        )
        .unwrap();
        let e = entropy_H_rel(&Endomorphism::identity(&g), &x, &h, &BudgetPolicy::default()).unwrap();
        assert_eq!(e.sizes[16], 33);
        assert_eq!(e.growth, GrowthClass::SubexponentialCandidate);
    }
}
