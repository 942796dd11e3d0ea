use schemars::JsonSchema;
use serde::{Deserialize, Serialize};

use super::{prepare, ATExperiment, PreparedExperiment};
use crate::dynamics::Endomorphism;
use crate::error::{Error, Result};
use crate::set::{is_subgroup_with_generators, multiply_by_subgroup_bounded, FiniteSubgroup, FiniteSubset};
use crate::Code;

/// Sizes at step `n` for `A = B ∩ H`, `B` and `C = π(B)`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize, JsonSchema)]
pub struct ChainRecord {
    pub n: usize,
    pub a_size: u128,
    pub b_size: u128,
    pub c_size: u128,
    /// Number of cosets of `H` met by `T_n(φ, B)`.
    pub b_cosets: u128,
    pub ell_a: f64,
    pub ell_b: f64,
    pub ell_c: f64,
    /// `|T_n(A)|·|T_n(C)| ≤ |T_n(B)|`.
    pub inequality: bool,
    /// `|T_n(C)|` equals the coset count of `T_n(B)`.
    pub transport: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize, JsonSchema)]
pub struct ChainReport {
    pub a_order: usize,
    pub b_order: usize,
    pub c_order: usize,
    pub records: Vec<ChainRecord>,
    pub all_pass: bool,
}

/// `|T_k(φ, X)|` for `k = 1..=n`, checking each `T_k` is a subgroup. `visit`
/// sees every trajectory set.
fn walk(
    phi: &Endomorphism,
    x: &FiniteSubgroup,
    n: usize,
    max_size: usize,
    label: &str,
    mut visit: impl FnMut(&FiniteSubset),
) -> Result<Vec<u128>> {
    let mut current = x.as_set().clone();
    let mut image = current.clone();
    let mut image_gens: Vec<Code> = x.generators().to_vec();
    let mut gens = image_gens.clone();
    let mut sizes = Vec::with_capacity(n);
    for k in 1..=n {
        if k > 1 {
            image = phi.image(&image);
            image_gens = image_gens.iter().map(|g| phi.apply(g)).collect();
            gens.extend(image_gens.iter().cloned());
            current = multiply_by_subgroup_bounded(&current, &image, max_size)?;
            if !is_subgroup_with_generators(&current, &gens) {
                return Err(Error::Precondition(format!("T_{k}({label}) is not a subgroup")));
            }
        }
        visit(&current);
        sizes.push(current.len() as u128);
    }
    Ok(sizes)
}

/// Checks `ℓ(T_n(φ↾_H, A)) + ℓ(T_n(φ̄, C)) ≤ ℓ(T_n(φ, B))` and
/// `|T_n(φ̄, C)| = #{cosets of H met by T_n(φ, B)}` as integer statements.
pub fn chain_check(exp: &ATExperiment, b: &FiniteSubgroup, n: usize) -> Result<ChainReport> {
    let sys = prepare(exp)?;
    chain_check_prepared(&sys, b, n, exp.budget.max_set_size)
}

pub fn chain_check_prepared(
    sys: &PreparedExperiment,
    b: &FiniteSubgroup,
    n: usize,
    max_size: usize,
) -> Result<ChainReport> {
    if !b.group().same_group(&sys.group) {
        return Err(Error::usage("B must be a subgroup of the experiment's group"));
    }
    let a = sys.normal.intersect(b)?;
    let c = sys.quotient.project_subgroup(b)?;

    let mut b_cosets = Vec::with_capacity(n);
    let b_sizes = walk(&sys.phi, b, n, max_size, "B", |t| {
        b_cosets.push(sys.normal.coset_count(t) as u128)
    })?;
    let a_sizes = walk(&sys.restricted, &a, n, max_size, "A = B ∩ H", |_| {})?;
    let c_sizes = walk(&sys.quotient.induced, &c, n, max_size, "C = π(B)", |_| {})?;

    let records: Vec<ChainRecord> = (0..n)
        .map(|i| {
            let (sa, sb, sc) = (a_sizes[i], b_sizes[i], c_sizes[i]);
            ChainRecord {
                n: i + 1,
                a_size: sa,
                b_size: sb,
                c_size: sc,
                b_cosets: b_cosets[i],
                ell_a: (sa as f64).ln(),
                ell_b: (sb as f64).ln(),
                ell_c: (sc as f64).ln(),
                inequality: sa.checked_mul(sc).is_some_and(|p| p <= sb),
                transport: sc == b_cosets[i],
            }
        })
        .collect();
    let all_pass = records.iter().all(|r| r.inequality && r.transport);
    Ok(ChainReport {
        a_order: a.order(),
        b_order: b.order(),
        c_order: c.order(),
        records,
        all_pass,
    })
}
