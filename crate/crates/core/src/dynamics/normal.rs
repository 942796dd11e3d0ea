use std::fmt;
use std::sync::Arc;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use schemars::JsonSchema;
use serde::{Deserialize, Serialize};
use serde_json::Value;

use super::{Certification, Endomorphism};
use crate::element::Code;
use crate::error::{Error, Result};
use crate::group::AmbientGroup;
use crate::groups::catalog::truncation_family;
use crate::groups::lamplighter::Lamplighter;
use crate::groups::semidirect::Semidirect;
use crate::groups::{self, product, sparse, GroupSpec};
use crate::set::{generate_from_codes, FiniteSubgroup, FiniteSubset, DEFAULT_MAX_SIZE};

/// Default number of random checks when exhaustive certification is unavailable.
pub const DEFAULT_SAMPLES: usize = 10_000;

/// Serializable description of a normal subgroup together with its coset canonicalizer.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize, JsonSchema)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum NormalSpec {
    Trivial,
    Whole,
    /// The subgroup generated by the parsed elements; must be finite.
    Finite {
        generators: Vec<Value>,
    },
    /// Center of a finite group with listable elements.
    Center,
    /// Elements of a direct sum `Z_m^(I)` all of whose values are multiples of `divisor`.
    Multiples {
        divisor: u32,
    },
    /// The base `A` of `A ⋊ Z_r` or of a lamplighter group.
    Base,
    /// One normal subgroup per factor of a direct product.
    Product {
        components: Vec<NormalSpec>,
    },
}

type Member = Arc<dyn Fn(&[i32]) -> bool + Send + Sync>;
type Canon = Arc<dyn Fn(&[i32]) -> Code + Send + Sync>;

/// A normal subgroup `H` of an ambient group, given by a membership test and
/// a map sending each element to a fixed representative of its coset.
#[derive(Clone)]
pub struct NormalSubgroup {
    group: AmbientGroup,
    spec: NormalSpec,
    name: String,
    member: Member,
    canon: Canon,
    finite: Option<FiniteSubgroup>,
    linear_divisor: Option<u32>,
}

impl fmt::Debug for NormalSubgroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("NormalSubgroup")
            .field("name", &self.name)
            .field("group", &self.group.describe())
            .finish()
    }
}

/// Certification levels reached for the two hypotheses on `H`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize, JsonSchema)]
pub struct NormalCertificate {
    pub invariance: Certification,
    pub normality: Certification,
}

fn finite_normal(group: &AmbientGroup, spec: NormalSpec, name: String, h: FiniteSubgroup) -> NormalSubgroup {
    let hs = h.clone();
    let g = group.clone();
    let hm = h.clone();
    NormalSubgroup {
        group: group.clone(),
        spec,
        name,
        member: Arc::new(move |x| hm.contains(x)),
        canon: Arc::new(move |x| {
            hs.as_set()
                .codes()
                .iter()
                .map(|c| g.mul(x, c))
                .min()
                .expect("subgroup is non-empty")
        }),
        finite: Some(h),
        linear_divisor: None,
    }
}

impl NormalSubgroup {
    pub fn build(spec: &NormalSpec, group_spec: &GroupSpec, group: &AmbientGroup) -> Result<Self> {
        let wrong = || {
            Error::Construction(format!(
                "normal subgroup {spec:?} is not defined on a {} group",
                groups::variant_name(group_spec)
            ))
        };
        let g = group.clone();
        Ok(match spec {
            NormalSpec::Trivial => NormalSubgroup {
                group: g.clone(),
                spec: spec.clone(),
                name: "1".into(),
                member: Arc::new(move |x| g.is_identity(x)),
                canon: Arc::new(|x| Code::from_slice(x)),
                finite: Some(FiniteSubgroup::trivial(group)),
                linear_divisor: None,
            },
            NormalSpec::Whole => {
                let e = group.identity_code();
                NormalSubgroup {
                    group: g.clone(),
                    spec: spec.clone(),
                    name: "G".into(),
                    member: Arc::new(|_| true),
                    canon: Arc::new(move |_| e.clone()),
                    finite: group
                        .elements()
                        .and_then(|all| FiniteSubset::new(group, all).ok())
                        .and_then(|s| FiniteSubgroup::from_set(s).ok()),
                    linear_divisor: group.linear_modulus().map(|_| 1),
                }
            }
            NormalSpec::Finite { generators } => {
                let codes = generators
                    .iter()
                    .map(|v| group.parse(v).map(|e| e.code))
                    .collect::<Result<Vec<_>>>()?;
                let h = generate_from_codes(group, &codes, DEFAULT_MAX_SIZE)?;
                let name = format!(
                    "<{}>",
                    codes.iter().map(|c| group.display(c)).collect::<Vec<_>>().join(", ")
                );
                finite_normal(group, spec.clone(), name, h)
            }
            NormalSpec::Center => {
                let all = group
                    .elements()
                    .ok_or_else(|| Error::Unsupported("center needs a finite group with listable elements".into()))?;
                let center: Vec<Code> = all
                    .iter()
                    .filter(|z| all.iter().all(|x| group.mul(z, x) == group.mul(x, z)))
                    .cloned()
                    .collect();
                let h = FiniteSubgroup::from_set(FiniteSubset::new(group, center)?)?;
                finite_normal(group, spec.clone(), "Z(G)".into(), h)
            }
            NormalSpec::Multiples { divisor } => {
                let m = group.linear_modulus().ok_or_else(wrong)?;
                let d = *divisor;
                if d == 0 || m % d != 0 {
                    return Err(Error::Construction(format!("{d} does not divide the modulus {m}")));
                }
                let mi = m as i32;
                let di = d as i32;
                NormalSubgroup {
                    group: g,
                    spec: spec.clone(),
                    name: format!("{d}·Z_{m}"),
                    member: Arc::new(move |x| sparse::pairs(x).all(|(_, v)| v % di == 0)),
                    canon: Arc::new(move |x| {
                        sparse::from_pairs(
                            sparse::pairs(x)
                                .map(|(i, v)| (i64::from(i), i64::from(v % di)))
                                .collect(),
                            mi,
                        )
                    }),
                    finite: None,
                    linear_divisor: Some(d),
                }
            }
            NormalSpec::Base => {
                let (member, canon): (Member, Canon) = match group_spec {
                    GroupSpec::Semidirect { .. } => {
                        (Arc::new(|x| x[0] == 0), Arc::new(|x| Semidirect::compose(x[0], &[])))
                    }
                    GroupSpec::Lamplighter { .. } => (
                        Arc::new(|x| Lamplighter::position(x) == 0),
                        Arc::new(|x| Lamplighter::compose(Lamplighter::position(x), &[])),
                    ),
                    _ => return Err(wrong()),
                };
                let finite = match group.order() {
                    Some(_) => {
                        let all = group.elements().ok_or_else(wrong)?;
                        let base = FiniteSubset::new(group, all.into_iter().filter(|c| member(c)))?;
                        Some(FiniteSubgroup::from_set(base)?)
                    }
                    None => None,
                };
                NormalSubgroup {
                    group: g,
                    spec: spec.clone(),
                    name: "base".into(),
                    member,
                    canon,
                    finite,
                    linear_divisor: None,
                }
            }
            NormalSpec::Product { components } => {
                let GroupSpec::DirectProduct { factors } = group_spec else {
                    return Err(wrong());
                };
                if factors.len() != components.len() {
                    return Err(Error::Construction(format!(
                        "product normal subgroup needs {} components, got {}",
                        factors.len(),
                        components.len()
                    )));
                }
                let parts = factors
                    .iter()
                    .zip(components)
                    .map(|(f, c)| NormalSubgroup::build(c, f, &groups::build_group(f)?))
                    .collect::<Result<Vec<_>>>()?;
                let name = parts.iter().map(|p| p.name.as_str()).collect::<Vec<_>>().join(" x ");
                let finite = if parts.iter().all(|p| p.finite.is_some()) {
                    let embedded: Vec<Code> = parts
                        .iter()
                        .enumerate()
                        .flat_map(|(slot, p)| {
                            let f = p.finite.as_ref().unwrap();
                            f.generators()
                                .iter()
                                .map(|c| embed(&parts, slot, c))
                                .collect::<Vec<_>>()
                        })
                        .collect();
                    Some(generate_from_codes(group, &embedded, DEFAULT_MAX_SIZE)?)
                } else {
                    None
                };
                let mp = parts.clone();
                let cp = parts;
                NormalSubgroup {
                    group: g,
                    spec: spec.clone(),
                    name,
                    member: Arc::new(move |x| product::split(x).into_iter().zip(&mp).all(|(c, p)| p.contains(c))),
                    canon: Arc::new(move |x| {
                        let reps: Vec<Code> = product::split(x)
                            .into_iter()
                            .zip(&cp)
                            .map(|(c, p)| p.canonicalize(c))
                            .collect();
                        product::join(reps.iter().map(|c| c.as_slice()))
                    }),
                    finite,
                    linear_divisor: None,
                }
            }
        })
    }

    pub fn group(&self) -> &AmbientGroup {
        &self.group
    }

    pub fn spec(&self) -> &NormalSpec {
        &self.spec
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn contains(&self, x: &[i32]) -> bool {
        (self.member)(x)
    }

    /// The chosen representative of the coset `xH`.
    pub fn canonicalize(&self, x: &[i32]) -> Code {
        (self.canon)(x)
    }

    /// `H` itself when finite.
    pub fn finite(&self) -> Option<&FiniteSubgroup> {
        self.finite.as_ref()
    }

    pub fn is_trivial(&self) -> bool {
        matches!(self.spec, NormalSpec::Trivial)
    }

    pub fn is_whole(&self) -> bool {
        matches!(self.spec, NormalSpec::Whole)
    }

    /// `Some(d)` when `H` is the subgroup of multiples of `d` in a direct sum,
    /// so that `G/H` is a direct sum of copies of `Z_d`.
    pub fn linear_divisor(&self) -> Option<u32> {
        self.linear_divisor
    }

    /// A random element of `H`: `g⁻¹·rep(gH)` for random `g`.
    pub fn sample(&self, rng: &mut dyn rand::RngCore) -> Code {
        let g = self.group.random_code(rng);
        self.group.mul(&self.group.inv(&g), &self.canonicalize(&g))
    }

    /// `F ∩ H`.
    pub fn intersect(&self, f: &FiniteSubgroup) -> Result<FiniteSubgroup> {
        let set = f
            .as_set()
            .filter(|c| self.contains(c))
            .ok_or_else(|| Error::Specification(format!("{} does not contain the identity", self.name)))?;
        FiniteSubgroup::from_set(set)
    }

    /// Coset representatives `{rep(xH) : x ∈ X}` as a subset of `G`.
    pub fn representatives(&self, x: &FiniteSubset) -> FiniteSubset {
        let canon = self.canon.clone();
        x.map_into(&self.group, move |c| canon(c))
    }

    /// Number of cosets `xH` met by `X`.
    pub fn coset_count(&self, x: &FiniteSubset) -> usize {
        self.representatives(x).len()
    }

    fn witness(&self, what: &str, codes: &[&[i32]]) -> String {
        let shown: Vec<String> = codes.iter().map(|c| self.group.display(c)).collect();
        format!("{what} fails at {}", shown.join(", "))
    }

    fn check_pair(&self, g: &[i32], h: &[i32]) -> Result<()> {
        let grp = &self.group;
        if !self.contains(&grp.conjugate(g, h)) {
            return Err(Error::Specification(
                self.witness(&format!("normality of {}", self.name), &[g, h]),
            ));
        }
        let rep = self.canonicalize(g);
        if self.canonicalize(&grp.mul(g, h)) != rep {
            return Err(Error::Specification(self.witness(
                &format!("canonicalizer of {} constant on cosets", self.name),
                &[g, h],
            )));
        }
        if !self.contains(&grp.mul(&grp.inv(g), &rep)) {
            return Err(Error::Specification(
                self.witness(&format!("canonicalizer of {} stays in the coset", self.name), &[g]),
            ));
        }
        Ok(())
    }

    fn check_invariance(&self, phi: &Endomorphism, h: &[i32]) -> Result<()> {
        let image = phi.apply(h);
        if self.contains(&image) {
            Ok(())
        } else {
            Err(Error::Invariance {
                subgroup: self.name.clone(),
                witness: format!("{} ↦ {}", self.group.display(h), self.group.display(&image)),
            })
        }
    }

    /// Checks membership of the identity, closure, normality, the
    /// canonicalizer contract and `φ(H) ⊆ H`.
    ///
    /// Everything is exhaustive when `G` is finite and small. Otherwise
    /// invariance is checked on every element of `H ∩ F` for the members `F`
    /// of the group's truncation chain of order at most 4096 (or on all of `H`
    /// when finite), and the remaining laws on `samples` random pairs.
    pub fn certify(&self, phi: &Endomorphism, samples: usize, seed: u64) -> Result<NormalCertificate> {
        let grp = &self.group;
        if !phi.group().same_group(grp) {
            return Err(Error::usage(
                "endomorphism and normal subgroup live in different groups",
            ));
        }
        if !self.contains(&grp.identity_code()) {
            return Err(Error::Specification(format!(
                "{} does not contain the identity",
                self.name
            )));
        }
        if let Some(all) = grp.elements() {
            let hs: Vec<&Code> = all.iter().filter(|c| self.contains(c)).collect();
            if all.len() * hs.len() <= 1 << 22 {
                for h in &hs {
                    self.check_invariance(phi, h)?;
                    for k in &hs {
                        if !self.contains(&grp.mul(h, k)) {
                            return Err(Error::Specification(
                                self.witness(&format!("closure of {}", self.name), &[h, k]),
                            ));
                        }
                    }
                }
                for g in &all {
                    for h in &hs {
                        self.check_pair(g, h)?;
                    }
                }
                let checked = all.len() * hs.len();
                return Ok(NormalCertificate {
                    invariance: Certification::Exhaustive { checked: hs.len() },
                    normality: Certification::Exhaustive { checked },
                });
            }
        }
        let invariance = if let Some(h) = &self.finite {
            for c in h.as_set().codes() {
                self.check_invariance(phi, c)?;
            }
            Certification::Exhaustive { checked: h.order() }
        } else {
            match truncation_family(grp, 4096) {
                Ok(family) => {
                    let mut checked = 0;
                    for f in &family {
                        for c in f.as_set().codes().iter().filter(|c| self.contains(c)) {
                            self.check_invariance(phi, c)?;
                            checked += 1;
                        }
                    }
                    Certification::Truncation {
                        levels: family.len(),
                        checked,
                    }
                }
                Err(_) => {
                    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x1a7);
                    for _ in 0..samples {
                        self.check_invariance(phi, &self.sample(&mut rng))?;
                    }
                    Certification::Sampled { samples }
                }
            }
        };
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        for _ in 0..samples {
            let g = grp.random_code(&mut rng);
            let h = self.sample(&mut rng);
            let k = self.sample(&mut rng);
            if !self.contains(&h) || !self.contains(&grp.mul(&h, &k)) || !self.contains(&grp.inv(&h)) {
                return Err(Error::Specification(
                    self.witness(&format!("closure of {}", self.name), &[&h, &k]),
                ));
            }
            self.check_pair(&g, &h)?;
            if invariance_is_sampled(&invariance) {
                continue;
            }
            self.check_invariance(phi, &h)?;
        }
        Ok(NormalCertificate {
            invariance,
            normality: Certification::Sampled { samples },
        })
    }
}

fn invariance_is_sampled(c: &Certification) -> bool {
    matches!(c, Certification::Sampled { .. })
}

fn embed(parts: &[NormalSubgroup], slot: usize, code: &[i32]) -> Code {
    let ids: Vec<Code> = parts.iter().map(|p| p.group.identity_code()).collect();
    product::join(
        ids.iter()
            .enumerate()
            .map(|(k, id)| if k == slot { code } else { id.as_slice() }),
    )
}

/// `φ↾_H`: the same map, after checking that `H` is `φ`-invariant.
pub fn restrict(phi: &Endomorphism, h: &NormalSubgroup) -> Result<Endomorphism> {
    restrict_with(phi, h, DEFAULT_SAMPLES, 0)
}

pub fn restrict_with(phi: &Endomorphism, h: &NormalSubgroup, samples: usize, seed: u64) -> Result<Endomorphism> {
    h.certify(phi, samples, seed)?;
    Ok(if h.is_whole() {
        phi.clone()
    } else if h.is_trivial() {
        Endomorphism::trivial(phi.group())
    } else {
        phi.clone().renamed(format!("{}|{}", phi.name(), h.name()))
    })
}
