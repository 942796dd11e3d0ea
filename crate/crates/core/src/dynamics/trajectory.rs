use schemars::JsonSchema;
use serde::{Deserialize, Serialize};

use super::Endomorphism;
use crate::element::Code;
use crate::error::{Error, Result};
use crate::set::{closure_witness, is_subgroup, multiply_sets_bounded, FiniteSubgroup, FiniteSubset};

/// The chain `T_0 = {1}`, `T_{n+1} = T_n · φ^n(X)` with cached images `φ^k(X)`.
#[derive(Clone, Debug)]
pub struct Trajectory {
    endo: Endomorphism,
    base: FiniteSubset,
    sets: Vec<FiniteSubset>,
    images: Vec<FiniteSubset>,
}

impl Trajectory {
    pub fn new(endo: &Endomorphism, base: &FiniteSubset) -> Result<Self> {
        if !endo.group().same_group(base.group()) {
            return Err(Error::usage(
                "trajectory base and endomorphism live in different groups",
            ));
        }
        Ok(Trajectory {
            endo: endo.clone(),
            base: base.clone(),
            sets: vec![FiniteSubset::identity(base.group())],
            images: vec![base.clone()],
        })
    }

    pub fn base(&self) -> &FiniteSubset {
        &self.base
    }

    pub fn endo(&self) -> &Endomorphism {
        &self.endo
    }

    /// Largest `n` with `T_n` cached.
    pub fn cached(&self) -> usize {
        self.sets.len() - 1
    }

    pub fn get(&self, n: usize) -> Option<&FiniteSubset> {
        self.sets.get(n)
    }

    /// `φ^k(X)`, computing and caching images as needed.
    pub fn image(&mut self, k: usize) -> &FiniteSubset {
        while self.images.len() <= k {
            let next = self.endo.image(self.images.last().expect("base image cached"));
            self.images.push(next);
        }
        &self.images[k]
    }

    /// `T_n`, extending the cache one product at a time. On budget failure the
    /// prefix computed so far stays cached.
    pub fn extend(&mut self, n: usize, max_size: usize) -> Result<&FiniteSubset> {
        while self.sets.len() <= n {
            let k = self.sets.len() - 1;
            self.image(k);
            let next = multiply_sets_bounded(&self.sets[k], &self.images[k], max_size)?;
            self.sets.push(next);
        }
        Ok(&self.sets[n])
    }
}

pub fn trajectory_extend(t: &mut Trajectory, n: usize, max_size: usize) -> Result<FiniteSubset> {
    t.extend(n, max_size).cloned()
}

/// Outcome of a pairwise commutation check of images `φ^n(F)`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize, JsonSchema)]
pub struct CommuteReport {
    pub holds: bool,
    /// First `(n, m)` with `n < m` and `φ^n(F)φ^m(F) ≠ φ^m(F)φ^n(F)`.
    pub witness: Option<(usize, usize)>,
}

/// Whether `φ^n(F)φ^m(F) = φ^m(F)φ^n(F)` for all `0 ≤ n, m ≤ big_n`.
pub fn images_commute_check(phi: &Endomorphism, f: &FiniteSubgroup, big_n: usize) -> Result<CommuteReport> {
    let mut images = vec![f.as_set().clone()];
    for k in 1..=big_n {
        images.push(phi.image(&images[k - 1]));
    }
    let max = images.iter().map(FiniteSubset::len).product::<usize>().max(1);
    for n in 0..=big_n {
        for m in n + 1..=big_n {
            let a = multiply_sets_bounded(&images[n], &images[m], max)?;
            let b = multiply_sets_bounded(&images[m], &images[n], max)?;
            if a != b {
                return Ok(CommuteReport {
                    holds: false,
                    witness: Some((n, m)),
                });
            }
        }
    }
    Ok(CommuteReport {
        holds: true,
        witness: None,
    })
}

/// Outcome of checking that `T_n(φ, F)` is a subgroup for each `n ≤ N`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize, JsonSchema)]
pub struct SubgroupChainReport {
    pub holds: bool,
    pub first_failure: Option<usize>,
    /// Size of the failing `T_n`.
    pub failure_size: Option<usize>,
    /// Two members of the failing `T_n` whose product leaves it, rendered.
    pub witness: Option<(String, String)>,
}

pub fn trajectory_subgroup_check(t: &mut Trajectory, big_n: usize, max_size: usize) -> Result<SubgroupChainReport> {
    for n in 0..=big_n {
        let tn = t.extend(n, max_size)?;
        if !is_subgroup(tn) {
            let gens: Vec<Code> = tn.codes().to_vec();
            let witness = closure_witness(tn, &gens).map(|(a, b)| (tn.group().display(&a), tn.group().display(&b)));
            return Ok(SubgroupChainReport {
                holds: false,
                first_failure: Some(n),
                failure_size: Some(tn.len()),
                witness,
            });
        }
    }
    Ok(SubgroupChainReport {
        holds: true,
        first_failure: None,
        failure_size: None,
        witness: None,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dynamics::{build_endomorphism, EndoSpec};
    use crate::groups::{build_group, GroupSpec};
    use crate::set::{generate_from_codes, DEFAULT_MAX_SIZE};
    use serde_json::json;

    fn coordinate_zero(m: u32) -> (Endomorphism, FiniteSubgroup) {
        let spec = GroupSpec::dsum(m, None);
        let g = build_group(&spec).unwrap();
        let phi = build_endomorphism(&spec, &g, &EndoSpec::Shift { amount: 1 }).unwrap();
        let e0 = g.parse(&json!([[0, 1]])).unwrap().code;
        (phi, generate_from_codes(&g, &[e0], 100).unwrap())
    }

    #[test]
    fn t0_is_identity() {
        let (phi, f) = coordinate_zero(2);
        let mut t = Trajectory::new(&phi, f.as_set()).unwrap();
        assert_eq!(t.extend(0, 10).unwrap().len(), 1);
    }

    #[test]
    fn bernoulli_t3_has_eight_elements() {
        let (phi, f) = coordinate_zero(2);
        let mut t = Trajectory::new(&phi, f.as_set()).unwrap();
        let t3 = trajectory_extend(&mut t, 3, 100).unwrap();
        assert_eq!(t3.len(), 8);
        let g = t3.group();
        for c in t3.codes() {
            assert!(
                crate::groups::sparse::pairs(c).all(|(i, _)| (0..3).contains(&i)),
                "{}",
                g.display(c)
            );
        }
        assert_eq!(t.cached(), 3);
    }

    #[test]
    fn budget_keeps_prefix() {
        let (phi, f) = coordinate_zero(2);
        let mut t = Trajectory::new(&phi, f.as_set()).unwrap();
        assert!(matches!(t.extend(6, 16), Err(Error::BudgetExceeded { .. })));
        assert_eq!(t.cached(), 4);
        assert_eq!(t.get(4).unwrap().len(), 16);
    }

    #[test]
    fn identity_on_subgroup_is_constant() {
        let spec = GroupSpec::quaternion();
        let g = build_group(&spec).unwrap();
        let f = generate_from_codes(&g, &[g.parse(&json!("i")).unwrap().code], 10).unwrap();
        let mut t = Trajectory::new(&crate::dynamics::Endomorphism::identity(&g), f.as_set()).unwrap();
        for n in 1..6 {
            assert_eq!(t.extend(n, 100).unwrap(), f.as_set());
        }
    }

    #[test]
    fn abelian_images_commute() {
        let (phi, f) = coordinate_zero(3);
        assert!(images_commute_check(&phi, &f, 4).unwrap().holds);
        let mut t = Trajectory::new(&phi, f.as_set()).unwrap();
        assert!(trajectory_subgroup_check(&mut t, 6, DEFAULT_MAX_SIZE).unwrap().holds);
        for n in 0..=6 {
            assert_eq!(t.get(n).unwrap().len(), 3usize.pow(n as u32));
        }
    }

    #[test]
    fn s3_conjugation_breaks_permutability() {
        let spec = GroupSpec::symmetric(3);
        let g = build_group(&spec).unwrap();
        let phi = build_endomorphism(&spec, &g, &EndoSpec::Inner { by: json!("(1 2 3)") }).unwrap();
        let f = generate_from_codes(&g, &[g.parse(&json!("(1 2)")).unwrap().code], 10).unwrap();
        let fphi = phi.image(f.as_set());
        assert_eq!(crate::set::multiply_sets(f.as_set(), &fphi).unwrap().len(), 4);
        assert_eq!(crate::set::multiply_sets(&fphi, f.as_set()).unwrap().len(), 4);
        let report = images_commute_check(&phi, &f, 1).unwrap();
        assert_eq!(report.witness, Some((0, 1)));
        let mut t = Trajectory::new(&phi, f.as_set()).unwrap();
        let chain = trajectory_subgroup_check(&mut t, 4, 100).unwrap();
        assert_eq!(chain.first_failure, Some(2));
        assert_eq!(chain.failure_size, Some(4));
        assert!(chain.witness.is_some());
    }

    #[test]
    fn monotone_cache_with_identity() {
        let spec = GroupSpec::symmetric(4);
        let g = build_group(&spec).unwrap();
        let phi = build_endomorphism(&spec, &g, &EndoSpec::Inner { by: json!("(1 2 3 4)") }).unwrap();
        let x = FiniteSubset::new(&g, [g.identity_code(), g.parse(&json!("(1 2)")).unwrap().code]).unwrap();
        let mut t = Trajectory::new(&phi, &x).unwrap();
        t.extend(6, 1000).unwrap();
        for n in 0..6 {
            assert!(t.get(n).unwrap().is_subset_of(t.get(n + 1).unwrap()));
        }
    }
}
