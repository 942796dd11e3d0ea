use schemars::JsonSchema;
use serde::{Deserialize, Serialize};

use crate::dynamics::{Endomorphism, Trajectory};
use crate::error::{Error, Result};
use crate::set::{coset_count, FiniteSubgroup, FiniteSubset};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize, JsonSchema)]
pub struct RelativeMonotoneReport {
    pub holds: bool,
    /// `[T_{2^n}(φ,X) T_{2^n}(φ,F) : T_{2^n}(φ,F)]` for `n = 0..=N`.
    pub coset_counts: Vec<usize>,
    /// `log` of the counts divided by `2^n`.
    pub values: Vec<f64>,
    /// First `n` with value above the previous one.
    pub first_increase: Option<usize>,
}

/// Checks that `n ↦ ℓ(T_{2^n}(φ,X), T_{2^n}(φ,F)) / 2^n` is non-increasing
/// for `n ≤ big_n`, comparing integer coset counts (`c_{n+1} ≤ c_n²`).
pub fn relative_monotone_check(
    phi: &Endomorphism,
    x: &FiniteSubset,
    f: &FiniteSubgroup,
    big_n: u32,
    max_size: usize,
) -> Result<RelativeMonotoneReport> {
    if !x.contains_identity() {
        return Err(Error::usage("relative monotonicity needs the identity in X"));
    }
    let mut tx = Trajectory::new(phi, x)?;
    let mut tf = Trajectory::new(phi, f.as_set())?;
    let mut counts = Vec::new();
    for n in 0..=big_n {
        let k = 1usize << n;
        let tfk = tf.extend(k, max_size)?.clone();
        let sub = FiniteSubgroup::from_set(tfk).map_err(|_| {
            Error::Precondition(format!(
                "T_{k}(φ, F) is not a subgroup, so F is not in F_C(G) for this φ"
            ))
        })?;
        counts.push(coset_count(tx.extend(k, max_size)?, &sub)?);
    }
    let values: Vec<f64> = counts
        .iter()
        .enumerate()
        .map(|(n, &c)| (c as f64).ln() / (1u64 << n) as f64)
        .collect();
    let first_increase = counts
        .windows(2)
        .position(|w| (w[1] as u128) > (w[0] as u128) * (w[0] as u128))
        .map(|i| i + 1);
    Ok(RelativeMonotoneReport {
        holds: first_increase.is_none(),
        coset_counts: counts,
        values,
        first_increase,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dynamics::{build_endomorphism, EndoSpec};
    use crate::groups::{build_group, GroupSpec};
    use crate::set::generate_from_codes;
    use serde_json::json;

    #[test]
    fn shift_two_coordinates_over_one() {
        let spec = GroupSpec::dsum(2, None);
        let g = build_group(&spec).unwrap();
        let phi = build_endomorphism(&spec, &g, &EndoSpec::Shift { amount: 1 }).unwrap();
        let e = |i: i32| g.parse(&json!([[i, 1]])).unwrap().code;
        let x = generate_from_codes(&g, &[e(0), e(1)], 10).unwrap().into_set();
        let f = generate_from_codes(&g, &[e(0)], 10).unwrap();
        let r = relative_monotone_check(&phi, &x, &f, 3, 1 << 16).unwrap();
        assert!(r.holds);
        // T_k(X) = Z_2^{k+1}, T_k(F) = Z_2^k: one extra coordinate, two cosets.
        assert_eq!(r.coset_counts, vec![2, 2, 2, 2]);
    }

    #[test]
    fn trivial_f_reduces_to_plain_monotonicity() {
        let spec = GroupSpec::symmetric(4);
        let g = build_group(&spec).unwrap();
        let phi = build_endomorphism(&spec, &g, &EndoSpec::Inner { by: json!("(1 2 3 4)") }).unwrap();
        let x = FiniteSubset::new(&g, [g.identity_code(), g.parse(&json!("(1 2)")).unwrap().code]).unwrap();
        let r = relative_monotone_check(&phi, &x, &FiniteSubgroup::trivial(&g), 3, 1000).unwrap();
        assert!(r.holds);
    }

    #[test]
    fn non_permutable_f_is_a_precondition_failure() {
        let spec = GroupSpec::symmetric(3);
        let g = build_group(&spec).unwrap();
        let phi = build_endomorphism(&spec, &g, &EndoSpec::Inner { by: json!("(1 2 3)") }).unwrap();
        let f = generate_from_codes(&g, &[g.parse(&json!("(1 2)")).unwrap().code], 10).unwrap();
        let r = relative_monotone_check(&phi, f.as_set(), &f, 2, 1000);
        assert!(matches!(r, Err(Error::Precondition(_))));
    }
}
