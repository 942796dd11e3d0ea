//! Named groups with their positions in the class diagram
//! locally finite ⊇ finitely quasihamiltonian ⊇ (quasihamiltonian ∪ torsion FC) ⊇ torsion abelian.

use schemars::JsonSchema;
use serde::{Deserialize, Serialize};
use serde_json::json;

use super::{build_group, GroupSpec};
use crate::dynamics::EndoSpec;
use crate::error::{Error, Result};
use crate::group::AmbientGroup;
use crate::set::{generate_from_codes, FiniteSubgroup};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize, JsonSchema)]
pub enum GroupClass {
    #[serde(rename = "locally_finite")]
    LocallyFinite,
    #[serde(rename = "finitely_quasihamiltonian")]
    FinitelyQuasihamiltonian,
    #[serde(rename = "quasihamiltonian")]
    Quasihamiltonian,
    #[serde(rename = "torsion_FC")]
    TorsionFc,
    #[serde(rename = "torsion_abelian")]
    TorsionAbelian,
}

use GroupClass::*;

#[derive(Clone, Debug, Serialize, Deserialize, JsonSchema)]
pub struct CatalogEntry {
    pub name: String,
    pub spec: GroupSpec,
    pub known_class: Vec<GroupClass>,
    pub notes: String,
}

impl CatalogEntry {
    fn new(name: impl Into<String>, spec: GroupSpec, classes: &[GroupClass], notes: &str) -> Self {
        let mut known_class = classes.to_vec();
        known_class.sort();
        CatalogEntry {
            name: name.into(),
            spec,
            known_class,
            notes: notes.into(),
        }
    }

    pub fn has(&self, class: GroupClass) -> bool {
        self.known_class.contains(&class)
    }

    pub fn is_locally_finite(&self) -> bool {
        self.has(LocallyFinite)
    }

    pub fn build(&self) -> Result<AmbientGroup> {
        build_group(&self.spec)
    }
}

const ALL: &[GroupClass] = &[
    LocallyFinite,
    FinitelyQuasihamiltonian,
    Quasihamiltonian,
    TorsionFc,
    TorsionAbelian,
];
const FINITE_NONABELIAN: &[GroupClass] = &[LocallyFinite, FinitelyQuasihamiltonian, TorsionFc];

/// The fixed roster of example groups.
pub fn catalog() -> Vec<CatalogEntry> {
    let mut out = vec![
        CatalogEntry::new(
            "Q8",
            GroupSpec::quaternion(),
            &[LocallyFinite, FinitelyQuasihamiltonian, Quasihamiltonian, TorsionFc],
            "quaternion group: non-abelian, every subgroup permutable, finite hence FC",
        ),
        CatalogEntry::new(
            "S3",
            GroupSpec::symmetric(3),
            FINITE_NONABELIAN,
            "finite hence torsion FC; <(1 2)> and <(1 3)> do not permute",
        ),
        CatalogEntry::new(
            "H",
            GroupSpec::h_group(None),
            &[LocallyFinite, FinitelyQuasihamiltonian, Quasihamiltonian],
            "Z_9^(N) x|_4 Z_3: quasihamiltonian 3-group whose derived subgroup is infinite, so not FC",
        ),
        CatalogEntry::new(
            "S3xH",
            GroupSpec::product(vec![GroupSpec::symmetric(3), GroupSpec::h_group(None)]),
            &[LocallyFinite, FinitelyQuasihamiltonian],
            "finitely quasihamiltonian, neither FC nor quasihamiltonian",
        ),
        CatalogEntry::new(
            "Sfin",
            GroupSpec::finitary(None),
            &[LocallyFinite],
            "finitary symmetric group on N+: locally finite, not finitely quasihamiltonian",
        ),
        CatalogEntry::new(
            "Lamplighter",
            GroupSpec::lamplighter(2),
            &[],
            "Z_2^(Z) x| Z: finitely generated, exponential growth, not locally finite",
        ),
    ];
    for k in [1, 2] {
        out.push(CatalogEntry::new(
            format!("H{k}"),
            GroupSpec::h_group(Some(k)),
            &[LocallyFinite, FinitelyQuasihamiltonian, Quasihamiltonian, TorsionFc],
            "finite truncation Z_9^k x|_4 Z_3 of H; quasihamiltonian, and FC because finite",
        ));
        out.push(CatalogEntry::new(
            format!("S3xH{k}"),
            GroupSpec::product(vec![GroupSpec::symmetric(3), GroupSpec::h_group(Some(k))]),
            FINITE_NONABELIAN,
            "finite truncation of S3 x H",
        ));
    }
    for m in [2, 3, 4, 6] {
        out.push(CatalogEntry::new(
            format!("Z{m}^(N)"),
            GroupSpec::dsum(m, None),
            ALL,
            "torsion abelian",
        ));
        out.push(CatalogEntry::new(
            format!("Z{m}^(Z)"),
            GroupSpec::dsum_integers(m, None),
            ALL,
            "torsion abelian",
        ));
    }
    for m in [4, 6, 12] {
        out.push(CatalogEntry::new(
            format!("Q/Z[{m}]"),
            GroupSpec::cyclic(m),
            ALL,
            "m-torsion of Q/Z, cyclic of order m",
        ));
    }
    out
}

pub fn catalog_entry(name: &str) -> Result<CatalogEntry> {
    catalog()
        .into_iter()
        .find(|e| e.name == name)
        .ok_or_else(|| Error::Usage(format!("no catalog entry named {name:?}")))
}

/// Members of the group's canonical increasing chain of finite subgroups
/// with order at most `size_bound`.
pub fn truncation_family(group: &AmbientGroup, size_bound: usize) -> Result<Vec<FiniteSubgroup>> {
    let mut members: Vec<FiniteSubgroup> = Vec::new();
    for level in 0.. {
        let Some(gens) = group.oracle().truncation_generators(level) else {
            break;
        };
        let member = match generate_from_codes(group, &gens, size_bound) {
            Ok(m) => m,
            Err(Error::BudgetExceeded { .. }) => break,
            Err(e) => return Err(e),
        };
        if members.last().is_some_and(|prev| prev.as_set() == member.as_set()) {
            continue;
        }
        members.push(member);
        if group
            .order()
            .is_some_and(|n| members.last().unwrap().order() as u64 == n)
        {
            break;
        }
    }
    if members.is_empty() {
        return Err(Error::budget(
            format!("first finite subgroup of {}", group.describe()),
            size_bound,
        ));
    }
    Ok(members)
}

/// Cofinal chain for a locally finite catalog entry.
pub fn finite_subgroup_family(entry: &CatalogEntry, size_bound: usize) -> Result<Vec<FiniteSubgroup>> {
    if !entry.is_locally_finite() {
        return Err(Error::Unsupported(format!(
            "{} is not locally finite; it has no cofinal family of finite subgroups",
            entry.name
        )));
    }
    let group = entry.build()?;
    if group.oracle().truncation_generators(0).is_none() {
        return Err(Error::Unsupported(format!(
            "{} exposes no truncation chain",
            entry.name
        )));
    }
    truncation_family(&group, size_bound)
}

fn named(name: &str, spec: EndoSpec) -> (String, EndoSpec) {
    (name.to_string(), spec)
}

fn endos_for_spec(spec: &GroupSpec) -> Vec<(String, EndoSpec)> {
    use EndoSpec::*;
    match spec {
        GroupSpec::CayleyTable { name, .. } if name.as_deref() == Some("Q8") => vec![
            named("id", Identity),
            named("trivial", Trivial),
            named("inner_i", Inner { by: json!("i") }),
            named("inner_j", Inner { by: json!("j") }),
            // i -> j -> k -> i
            named(
                "cycle_ijk",
                TableMap {
                    images: vec![0, 1, 4, 5, 6, 7, 2, 3],
                },
            ),
            // Q8 -> Q8/<i> = Z_2 -> <-1>
            named(
                "sign_mod_i",
                TableMap {
                    images: vec![0, 0, 0, 0, 1, 1, 1, 1],
                },
            ),
        ],
        GroupSpec::CayleyTable { .. } => vec![named("id", Identity), named("trivial", Trivial)],
        GroupSpec::FinitaryPermutations { support_bound } => {
            let mut v = vec![
                named("id", Identity),
                named("trivial", Trivial),
                named("inner_123", Inner { by: json!("(1 2 3)") }),
                named("inner_12", Inner { by: json!("(1 2)") }),
                named("sign", Sign { image: json!("(1 2)") }),
            ];
            if support_bound.is_none() {
                v.push(named("successor_shift", PermShift));
            }
            v
        }
        GroupSpec::RestrictedDirectSum { modulus, truncate, .. } => {
            let mut v = vec![named("id", Identity), named("trivial", Trivial)];
            if *truncate != Some(1) {
                v.push(named("shift", Shift { amount: 1 }));
                v.push(named("shift_back", Shift { amount: -1 }));
            }
            if *modulus > 2 {
                v.push(named("scalar_2", Scalar { factor: 2 }));
                v.push(named("negate", Scalar { factor: -1 }));
            }
            v
        }
        GroupSpec::Semidirect { base, .. } => {
            let mut v = vec![
                named("id", Identity),
                named("trivial", Trivial),
                named(
                    "inner_base",
                    Inner {
                        by: json!({"base": [[0, 1]], "actor": 0}),
                    },
                ),
                named(
                    "inner_actor",
                    Inner {
                        by: json!({"base": [], "actor": 1}),
                    },
                ),
                named("scalar_2", Scalar { factor: 2 }),
                named("scalar_3", Scalar { factor: 3 }),
                named("project_actor", ProjectActor),
            ];
            if !matches!(**base, GroupSpec::RestrictedDirectSum { truncate: Some(1), .. }) {
                v.push(named("shift", Shift { amount: 1 }));
            }
            v
        }
        GroupSpec::DirectProduct { factors } => {
            let per: Vec<Vec<(String, EndoSpec)>> = factors.iter().map(endos_for_spec).collect();
            // Pair the k-th endomorphism of every factor, wrapping shorter lists.
            let rounds = per.iter().map(Vec::len).max().unwrap_or(0);
            (0..rounds)
                .map(|k| {
                    let picks: Vec<&(String, EndoSpec)> = per.iter().map(|p| &p[k % p.len()]).collect();
                    let name = picks.iter().map(|p| p.0.as_str()).collect::<Vec<_>>().join("*");
                    let components = picks.iter().map(|p| p.1.clone()).collect();
                    (name, Coordinate { components })
                })
                .collect()
        }
        GroupSpec::Lamplighter { .. } => vec![
            named("id", Identity),
            named("trivial", Trivial),
            named(
                "inner_step",
                Inner {
                    by: json!({"lamps": [], "pos": 1}),
                },
            ),
            named(
                "inner_lamp",
                Inner {
                    by: json!({"lamps": [[0, 1]], "pos": 0}),
                },
            ),
        ],
    }
}

/// Named endomorphisms used by the property suites for this entry.
pub fn catalog_endomorphisms(entry: &CatalogEntry) -> Vec<(String, EndoSpec)> {
    endos_for_spec(&entry.spec)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::set::is_subgroup;

    #[test]
    fn q8_labels() {
        let q8 = catalog_entry("Q8").unwrap();
        for c in [Quasihamiltonian, TorsionFc, LocallyFinite, FinitelyQuasihamiltonian] {
            assert!(q8.has(c));
        }
        assert!(!q8.has(TorsionAbelian));
    }

    #[test]
    fn sfin_is_only_locally_finite() {
        assert_eq!(catalog_entry("Sfin").unwrap().known_class, vec![LocallyFinite]);
    }

    #[test]
    fn torsion_abelian_in_every_class() {
        let z2 = catalog_entry("Z2^(N)").unwrap();
        assert_eq!(z2.known_class.len(), 5);
    }

    #[test]
    fn diagram_inclusions_respected() {
        for e in catalog() {
            let has = |c| e.has(c);
            if has(TorsionAbelian) {
                assert!(has(Quasihamiltonian) && has(TorsionFc), "{}", e.name);
            }
            if has(Quasihamiltonian) || has(TorsionFc) {
                assert!(has(FinitelyQuasihamiltonian), "{}", e.name);
            }
            if has(FinitelyQuasihamiltonian) {
                assert!(has(LocallyFinite), "{}", e.name);
            }
        }
    }

    #[test]
    fn z2_family_is_coordinate_truncations() {
        let fam = finite_subgroup_family(&catalog_entry("Z2^(N)").unwrap(), 64).unwrap();
        let orders: Vec<usize> = fam.iter().map(|f| f.order()).collect();
        assert_eq!(orders, vec![2, 4, 8, 16, 32, 64]);
        for w in fam.windows(2) {
            assert!(w[0].is_subgroup_of(&w[1]));
        }
    }

    #[test]
    fn sfin_family_is_symmetric_groups() {
        let fam = finite_subgroup_family(&catalog_entry("Sfin").unwrap(), 720).unwrap();
        let orders: Vec<usize> = fam.iter().map(|f| f.order()).collect();
        assert_eq!(orders, vec![2, 6, 24, 120, 720]);
    }

    #[test]
    fn finite_group_family_reaches_whole_group() {
        let fam = finite_subgroup_family(&catalog_entry("H2").unwrap(), 10_000).unwrap();
        assert_eq!(fam.last().unwrap().order(), 243);
        let q8 = finite_subgroup_family(&catalog_entry("Q8").unwrap(), 100).unwrap();
        assert_eq!(q8.len(), 1);
        assert_eq!(q8[0].order(), 8);
    }

    #[test]
    fn lamplighter_family_unsupported() {
        let e = catalog_entry("Lamplighter").unwrap();
        assert!(matches!(finite_subgroup_family(&e, 100), Err(Error::Unsupported(_))));
    }

    #[test]
    fn families_are_subgroup_chains() {
        for e in catalog().into_iter().filter(|e| e.is_locally_finite()) {
            let fam = finite_subgroup_family(&e, 2000).unwrap();
            for f in &fam {
                assert!(is_subgroup(f.as_set()), "{}", e.name);
            }
            for w in fam.windows(2) {
                assert!(w[0].is_subgroup_of(&w[1]), "{}", e.name);
            }
        }
    }

    #[test]
    fn every_entry_builds_and_has_endomorphisms() {
        for e in catalog() {
            let g = e.build().unwrap();
            for (name, spec) in catalog_endomorphisms(&e) {
                crate::dynamics::build_endomorphism(&e.spec, &g, &spec)
                    .unwrap_or_else(|err| panic!("{} {name}: {err}", e.name));
            }
        }
    }
}
