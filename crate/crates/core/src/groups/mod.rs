//! Concrete groups: specifications, oracles and the example catalog.

pub mod catalog;
pub mod cayley;
pub mod dsum;
pub mod lamplighter;
pub mod perm;
pub mod product;
pub mod semidirect;
pub mod sparse;

use schemars::JsonSchema;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::group::AmbientGroup;

pub use catalog::{
    catalog, catalog_endomorphisms, catalog_entry, finite_subgroup_family, truncation_family, CatalogEntry, GroupClass,
};
pub use dsum::IndexSet;

/// Serializable description of a group.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize, JsonSchema)]
#[serde(tag = "variant", rename_all = "snake_case")]
pub enum GroupSpec {
    CayleyTable {
        #[serde(default, skip_serializing_if = "Option::is_none")]
        name: Option<String>,
        table: Vec<Vec<u32>>,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        labels: Option<Vec<String>>,
    },
    FinitaryPermutations {
        #[serde(default, skip_serializing_if = "Option::is_none")]
        support_bound: Option<u32>,
    },
    RestrictedDirectSum {
        modulus: u32,
        #[serde(default)]
        index: IndexSet,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        truncate: Option<u32>,
    },
    Semidirect {
        base: Box<GroupSpec>,
        actor_order: u32,
        exponent: u32,
    },
    DirectProduct {
        factors: Vec<GroupSpec>,
    },
    Lamplighter {
        base_order: u32,
    },
}

impl GroupSpec {
    /// `Z_m`, as the one-coordinate truncation of `Z_m^(N)`.
    pub fn cyclic(m: u32) -> Self {
        Self::dsum(m, Some(1))
    }

    pub fn dsum(m: u32, truncate: Option<u32>) -> Self {
        GroupSpec::RestrictedDirectSum {
            modulus: m,
            index: IndexSet::Naturals,
            truncate,
        }
    }

    pub fn dsum_integers(m: u32, truncate: Option<u32>) -> Self {
        GroupSpec::RestrictedDirectSum {
            modulus: m,
            index: IndexSet::Integers,
            truncate,
        }
    }

    pub fn symmetric(n: u32) -> Self {
        GroupSpec::FinitaryPermutations { support_bound: Some(n) }
    }

    pub fn finitary(support_bound: Option<u32>) -> Self {
        GroupSpec::FinitaryPermutations { support_bound }
    }

    pub fn quaternion() -> Self {
        let (table, labels) = cayley::quaternion_table();
        GroupSpec::CayleyTable {
            name: Some("Q8".into()),
            table,
            labels: Some(labels),
        }
    }

    /// `Z_9^k ⋊ Z_3` with the generator acting as multiplication by 4
    /// (`k = None` gives the infinite group over `N`).
    pub fn h_group(k: Option<u32>) -> Self {
        GroupSpec::Semidirect {
            base: Box::new(Self::dsum(9, k)),
            actor_order: 3,
            exponent: 4,
        }
    }

    pub fn product(factors: Vec<GroupSpec>) -> Self {
        GroupSpec::DirectProduct { factors }
    }

    pub fn lamplighter(m: u32) -> Self {
        GroupSpec::Lamplighter { base_order: m }
    }

    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| Error::Construction(format!("group spec: {e}")))
    }
}

pub(crate) fn direct_sum(spec: &GroupSpec) -> Result<dsum::DirectSum> {
    match spec {
        GroupSpec::RestrictedDirectSum {
            modulus,
            index,
            truncate,
        } => dsum::DirectSum::new(*modulus, *index, *truncate),
        other => Err(Error::Construction(format!(
            "expected a restricted direct sum, got {}",
            variant_name(other)
        ))),
    }
}

pub(crate) fn variant_name(spec: &GroupSpec) -> &'static str {
    match spec {
        GroupSpec::CayleyTable { .. } => "cayley_table",
        GroupSpec::FinitaryPermutations { .. } => "finitary_permutations",
        GroupSpec::RestrictedDirectSum { .. } => "restricted_direct_sum",
        GroupSpec::Semidirect { .. } => "semidirect",
        GroupSpec::DirectProduct { .. } => "direct_product",
        GroupSpec::Lamplighter { .. } => "lamplighter",
    }
}

pub(crate) fn semidirect(spec: &GroupSpec) -> Result<semidirect::Semidirect> {
    match spec {
        GroupSpec::Semidirect {
            base,
            actor_order,
            exponent,
        } => semidirect::Semidirect::new(direct_sum(base)?, *actor_order, *exponent),
        other => Err(Error::Construction(format!(
            "expected a semidirect product, got {}",
            variant_name(other)
        ))),
    }
}

/// Builds the oracle described by `spec`, validating its parameters.
pub fn build_group(spec: &GroupSpec) -> Result<AmbientGroup> {
    Ok(match spec {
        GroupSpec::CayleyTable { name, table, labels } => {
            AmbientGroup::new(cayley::CayleyTable::new(name.clone(), table.clone(), labels.clone())?)
        }
        GroupSpec::FinitaryPermutations { support_bound } => AmbientGroup::new(perm::FinitaryPermutations {
            support_bound: *support_bound,
        }),
        GroupSpec::RestrictedDirectSum { .. } => AmbientGroup::new(direct_sum(spec)?),
        GroupSpec::Semidirect { .. } => AmbientGroup::new(semidirect(spec)?),
        GroupSpec::DirectProduct { factors } => {
            let built = factors.iter().map(build_group).collect::<Result<Vec<_>>>()?;
            AmbientGroup::new(product::DirectProduct::new(built)?)
        }
        GroupSpec::Lamplighter { base_order } => AmbientGroup::new(lamplighter::Lamplighter::new(*base_order)?),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::group::check_axioms;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;
    use serde_json::json;

    fn all_specs() -> Vec<GroupSpec> {
        vec![
            GroupSpec::quaternion(),
            GroupSpec::symmetric(3),
            GroupSpec::finitary(None),
            GroupSpec::dsum(6, None),
            GroupSpec::dsum_integers(4, None),
            GroupSpec::dsum(3, Some(4)),
            GroupSpec::h_group(Some(1)),
            GroupSpec::h_group(Some(2)),
            GroupSpec::h_group(None),
            GroupSpec::product(vec![GroupSpec::symmetric(3), GroupSpec::h_group(Some(1))]),
            GroupSpec::lamplighter(2),
            GroupSpec::lamplighter(3),
        ]
    }

    #[test]
    fn group_axioms_hold_on_samples() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for spec in all_specs() {
            let g = build_group(&spec).unwrap();
            check_axioms(&g, 1000, &mut rng).unwrap_or_else(|v| panic!("{}: {v:?}", g.describe()));
        }
    }

    #[test]
    fn z2_table_has_order_two() {
        let g = build_group(&GroupSpec::CayleyTable {
            name: None,
            table: vec![vec![0, 1], vec![1, 0]],
            labels: None,
        })
        .unwrap();
        assert_eq!(g.order(), Some(2));
    }

    #[test]
    fn h1_is_nonabelian_of_order_27() {
        let g = build_group(&GroupSpec::h_group(Some(1))).unwrap();
        assert_eq!(g.order(), Some(27));
        assert_eq!(g.elements().unwrap().len(), 27);
        // 4^3 = 64 = 1 mod 9, so the action is well defined.
        assert_eq!(4u32.pow(3) % 9, 1);
        let a = g.parse(&json!({"base": 1, "actor": 0})).unwrap();
        let t = g.parse(&json!({"base": 0, "actor": 1})).unwrap();
        assert_ne!(g.multiply(&a, &t), g.multiply(&t, &a));
    }

    #[test]
    fn invalid_actions_rejected() {
        let spec = GroupSpec::Semidirect {
            base: Box::new(GroupSpec::dsum(9, Some(1))),
            actor_order: 3,
            exponent: 2,
        };
        assert!(matches!(build_group(&spec), Err(Error::Construction(_))));
        let spec = GroupSpec::Semidirect {
            base: Box::new(GroupSpec::dsum(9, Some(1))),
            actor_order: 3,
            exponent: 3,
        };
        assert!(build_group(&spec).is_err());
    }

    #[test]
    fn lamplighter_multiplication_rule() {
        let g = build_group(&GroupSpec::lamplighter(2)).unwrap();
        let f = g.parse(&json!({"lamps": [[0, 1]], "pos": 2})).unwrap();
        let h = g.parse(&json!({"lamps": [[1, 1]], "pos": -1})).unwrap();
        // (f, 2)(g, -1) = (f + shift_2 g, 1): lamps at 0 and 3.
        let expected = g.parse(&json!({"lamps": [[0, 1], [3, 1]], "pos": 1})).unwrap();
        assert_eq!(g.multiply(&f, &h), expected);
        assert_eq!(g.order(), None);
    }

    #[test]
    fn spec_json_round_trip() {
        for spec in all_specs() {
            let text = serde_json::to_string(&spec).unwrap();
            assert_eq!(GroupSpec::from_json(&text).unwrap(), spec);
        }
        let parsed = GroupSpec::from_json(r#"{"variant": "restricted_direct_sum", "modulus": 6}"#).unwrap();
        assert_eq!(parsed, GroupSpec::dsum(6, None));
    }

    #[test]
    fn element_render_parse_round_trip() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for spec in all_specs() {
            let g = build_group(&spec).unwrap();
            for _ in 0..50 {
                let c = g.random_code(&mut rng);
                let back = g.parse(&g.render(&c)).unwrap();
                assert_eq!(back.code, c, "{}", g.describe());
            }
        }
    }
}
