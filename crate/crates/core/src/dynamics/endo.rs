use std::fmt;
use std::str::FromStr;
use std::sync::Arc;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use schemars::JsonSchema;
use serde::{Deserialize, Serialize};
use serde_json::Value;

use super::Certification;
use crate::element::Code;
use crate::error::{Error, Result};
use crate::group::AmbientGroup;
use crate::groups::lamplighter::Lamplighter;
use crate::groups::{self, perm, product, sparse, GroupSpec};
use crate::kernel;
use crate::set::FiniteSubset;

/// Serializable description of an endomorphism of a catalog group.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize, JsonSchema)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum EndoSpec {
    Identity,
    Trivial,
    /// Coordinate shift `e_i ↦ e_{i+amount}` on a direct sum, or on the base
    /// of a semidirect product or lamplighter group.
    Shift {
        amount: i32,
    },
    /// Multiplication by an integer on a direct sum or a base.
    Scalar {
        factor: i64,
    },
    /// `x ↦ g x g⁻¹` for the parsed element `g`.
    Inner {
        by: Value,
    },
    /// `(a, x) ↦ (0, x)` on a semidirect product or lamplighter group.
    ProjectActor,
    /// Image indices for a Cayley-table group.
    TableMap {
        images: Vec<u32>,
    },
    /// Even permutations to the identity, odd ones to `image`.
    Sign {
        image: Value,
    },
    /// `σ ↦ σ'` with `σ'(1) = 1` and `σ'(i+1) = σ(i)+1` on finitary permutations.
    PermShift,
    /// One endomorphism per factor of a direct product.
    Coordinate {
        components: Vec<EndoSpec>,
    },
    /// Applies `maps[0]` first.
    Compose {
        maps: Vec<EndoSpec>,
    },
    Power {
        map: Box<EndoSpec>,
        k: u32,
    },
}

impl FromStr for EndoSpec {
    type Err = Error;

    /// JSON, or a shorthand such as `shift`, `shift:2`, `scalar:-1`,
    /// `inner:(1 2 3)`, `identity`, `trivial`, `project_actor`, `perm_shift`.
    fn from_str(text: &str) -> Result<Self> {
        let text = text.trim();
        if text.starts_with('{') {
            return serde_json::from_str(text).map_err(|e| Error::Parse(format!("endomorphism spec: {e}")));
        }
        let (head, arg) = match text.split_once(':') {
            Some((h, a)) => (h.trim(), Some(a.trim())),
            None => (text, None),
        };
        let int = |a: Option<&str>, default: i64| -> Result<i64> {
            match a {
                None => Ok(default),
                Some(s) => s
                    .parse()
                    .map_err(|_| Error::Parse(format!("expected an integer, got {s:?}"))),
            }
        };
        let value = |a: Option<&str>| -> Result<Value> {
            let s = a.ok_or_else(|| Error::Parse(format!("{head} needs an argument")))?;
            Ok(serde_json::from_str(s).unwrap_or_else(|_| Value::String(s.to_string())))
        };
        Ok(match head {
            "id" | "identity" => EndoSpec::Identity,
            "trivial" => EndoSpec::Trivial,
            "shift" => EndoSpec::Shift {
                amount: int(arg, 1)? as i32,
            },
            "scalar" => EndoSpec::Scalar { factor: int(arg, 2)? },
            "inner" => EndoSpec::Inner { by: value(arg)? },
            "sign" => EndoSpec::Sign { image: value(arg)? },
            "project_actor" => EndoSpec::ProjectActor,
            "perm_shift" => EndoSpec::PermShift,
            other => return Err(Error::Parse(format!("unknown endomorphism shorthand {other:?}"))),
        })
    }
}

type MapFn = Arc<dyn Fn(&[i32]) -> Code + Send + Sync>;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum Kind {
    Identity,
    Trivial,
    General,
}

/// A map of an ambient group into itself, assumed to be a homomorphism.
#[derive(Clone)]
pub struct Endomorphism {
    group: AmbientGroup,
    map: MapFn,
    name: String,
    kind: Kind,
}

impl fmt::Debug for Endomorphism {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Endomorphism")
            .field("name", &self.name)
            .field("group", &self.group.describe())
            .finish()
    }
}

impl Endomorphism {
    pub fn new<F>(group: &AmbientGroup, name: impl Into<String>, f: F) -> Self
    where
        F: Fn(&[i32]) -> Code + Send + Sync + 'static,
    {
        Endomorphism {
            group: group.clone(),
            map: Arc::new(f),
            name: name.into(),
            kind: Kind::General,
        }
    }

    pub fn identity(group: &AmbientGroup) -> Self {
        Endomorphism {
            kind: Kind::Identity,
            ..Self::new(group, "id", |x| Code::from_slice(x))
        }
    }

    pub fn trivial(group: &AmbientGroup) -> Self {
        let e = group.identity_code();
        Endomorphism {
            kind: Kind::Trivial,
            ..Self::new(group, "trivial", move |_| e.clone())
        }
    }

    pub fn group(&self) -> &AmbientGroup {
        &self.group
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn renamed(mut self, name: impl Into<String>) -> Self {
        self.name = name.into();
        self
    }

    pub fn is_identity(&self) -> bool {
        self.kind == Kind::Identity
    }

    pub fn is_trivial(&self) -> bool {
        self.kind == Kind::Trivial
    }

    pub fn apply(&self, x: &[i32]) -> Code {
        (self.map)(x)
    }

    /// `φ(X)`.
    pub fn image(&self, x: &FiniteSubset) -> FiniteSubset {
        if self.is_identity() {
            return x.clone();
        }
        let f = self.map.clone();
        x.map_into(&self.group, move |c| f(c))
    }

    /// `other` first, then `self`.
    pub fn after(&self, other: &Endomorphism) -> Endomorphism {
        match (self.kind, other.kind) {
            (Kind::Identity, _) => other.clone(),
            (_, Kind::Identity) => self.clone(),
            (_, Kind::Trivial) | (Kind::Trivial, _) => Endomorphism::trivial(&self.group),
            _ => {
                let (f, g) = (self.map.clone(), other.map.clone());
                Endomorphism::new(&self.group, format!("{}∘{}", self.name, other.name), move |x| {
                    f(&g(x))
                })
            }
        }
    }
}

/// `φ^k`; `φ^0` is the identity.
pub fn endo_power(phi: &Endomorphism, k: u32) -> Endomorphism {
    match (k, phi.kind) {
        (0, _) | (_, Kind::Identity) => Endomorphism::identity(&phi.group),
        (1, _) => phi.clone(),
        (_, Kind::Trivial) => phi.clone(),
        _ => {
            let f = phi.map.clone();
            Endomorphism::new(&phi.group, format!("{}^{k}", phi.name), move |x| {
                let mut y = f(x);
                for _ in 1..k {
                    y = f(&y);
                }
                y
            })
        }
    }
}

/// Groups up to this order have their homomorphism law checked on every pair.
pub const EXHAUSTIVE_HOM_LIMIT: usize = 4096;
const BUILD_EXHAUSTIVE_LIMIT: usize = 512;
const BUILD_SAMPLES: usize = 2000;

/// Checks `φ(1) = 1` and `φ(xy) = φ(x)φ(y)`, on every pair when the group has
/// at most `exhaustive_limit` listable elements and on `samples` random pairs otherwise.
pub fn verify_homomorphism(
    phi: &Endomorphism,
    exhaustive_limit: usize,
    samples: usize,
    seed: u64,
) -> Result<Certification> {
    let g = &phi.group;
    let fail = |a: &[i32], b: &[i32]| {
        Error::Construction(format!(
            "{} is not a homomorphism: φ({}·{}) ≠ φ({})·φ({})",
            phi.name,
            g.display(a),
            g.display(b),
            g.display(a),
            g.display(b)
        ))
    };
    let e = g.identity_code();
    if phi.apply(&e) != e {
        return Err(Error::Construction(format!("{} does not fix the identity", phi.name)));
    }
    let respects = |a: &[i32], b: &[i32]| phi.apply(&g.mul(a, b)) == g.mul(&phi.apply(a), &phi.apply(b));
    if g.order().is_some_and(|n| n as usize <= exhaustive_limit) {
        if let Some(all) = g.elements() {
            let bad: Vec<Option<(Code, Code)>> = kernel::map_collect(&all, |a| {
                all.iter().find(|b| !respects(a, b)).map(|b| (a.clone(), b.clone()))
            });
            if let Some((a, b)) = bad.into_iter().flatten().next() {
                return Err(fail(&a, &b));
            }
            return Ok(Certification::Exhaustive {
                checked: all.len() * all.len(),
            });
        }
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for _ in 0..samples {
        let a = g.random_code(&mut rng);
        let b = g.random_code(&mut rng);
        if !respects(&a, &b) {
            return Err(fail(&a, &b));
        }
    }
    Ok(Certification::Sampled { samples })
}

fn unsupported(spec: &EndoSpec, group: &GroupSpec) -> Error {
    Error::Construction(format!(
        "endomorphism {spec:?} is not defined on a {} group",
        groups::variant_name(group)
    ))
}

fn parity(code: &[i32]) -> usize {
    let mut seen = vec![false; code.len()];
    let mut transpositions = 0;
    for start in 0..code.len() {
        let mut i = start;
        let mut len = 0usize;
        while !seen[i] {
            seen[i] = true;
            i = code[i] as usize - 1;
            len += 1;
        }
        transpositions += len.saturating_sub(1);
    }
    transpositions % 2
}

fn build_unchecked(spec: &GroupSpec, group: &AmbientGroup, endo: &EndoSpec) -> Result<Endomorphism> {
    use EndoSpec as E;
    let g = group.clone();
    Ok(match endo {
        E::Identity => Endomorphism::identity(group),
        E::Trivial => Endomorphism::trivial(group),
        E::Inner { by } => {
            let h = group.parse(by)?.code;
            let name = format!("inner[{}]", group.display(&h));
            let h_inv = group.inv(&h);
            Endomorphism::new(group, name, move |x| g.mul(&g.mul(&h, x), &h_inv))
        }
        E::Shift { amount } => {
            let a = *amount;
            let name = format!("shift[{a}]");
            match spec {
                GroupSpec::RestrictedDirectSum { .. } => {
                    let ds = groups::direct_sum(spec)?;
                    Endomorphism::new(group, name, move |x| ds.shift(x, a))
                }
                GroupSpec::Semidirect { .. } => {
                    let sd = groups::semidirect(spec)?;
                    Endomorphism::new(group, name, move |x| {
                        groups::semidirect::Semidirect::compose(
                            x[0],
                            &sd.base.shift(groups::semidirect::Semidirect::base_part(x), a),
                        )
                    })
                }
                GroupSpec::Lamplighter { .. } => Endomorphism::new(group, name, move |x| {
                    Lamplighter::compose(
                        Lamplighter::position(x),
                        &sparse::shift(Lamplighter::lamps(x), a, |_| true),
                    )
                }),
                _ => return Err(unsupported(endo, spec)),
            }
        }
        E::Scalar { factor } => {
            let c = *factor;
            let name = format!("scalar[{c}]");
            match spec {
                GroupSpec::RestrictedDirectSum { modulus, .. } => {
                    let m = *modulus as i32;
                    Endomorphism::new(group, name, move |x| sparse::scale(x, c, m))
                }
                GroupSpec::Semidirect { base, .. } => {
                    let m = groups::direct_sum(base)?.m();
                    Endomorphism::new(group, name, move |x| {
                        groups::semidirect::Semidirect::compose(
                            x[0],
                            &sparse::scale(groups::semidirect::Semidirect::base_part(x), c, m),
                        )
                    })
                }
                GroupSpec::Lamplighter { base_order } => {
                    let m = *base_order as i32;
                    Endomorphism::new(group, name, move |x| {
                        Lamplighter::compose(Lamplighter::position(x), &sparse::scale(Lamplighter::lamps(x), c, m))
                    })
                }
                _ => return Err(unsupported(endo, spec)),
            }
        }
        E::ProjectActor => match spec {
            GroupSpec::Semidirect { .. } => Endomorphism::new(group, "project_actor", |x| {
                groups::semidirect::Semidirect::compose(x[0], &[])
            }),
            GroupSpec::Lamplighter { .. } => Endomorphism::new(group, "project_actor", |x| {
                Lamplighter::compose(Lamplighter::position(x), &[])
            }),
            _ => return Err(unsupported(endo, spec)),
        },
        E::TableMap { images } => {
            let n = group.order().unwrap_or(0) as usize;
            if !matches!(spec, GroupSpec::CayleyTable { .. }) {
                return Err(unsupported(endo, spec));
            }
            if images.len() != n || images.iter().any(|&i| i as usize >= n) {
                return Err(Error::Construction(format!(
                    "table map needs {n} images in 0..{n}, got {images:?}"
                )));
            }
            let images = images.clone();
            Endomorphism::new(group, "table_map", move |x| {
                Code::from_slice(&[images[x[0] as usize] as i32])
            })
        }
        E::Sign { image } => {
            if !matches!(spec, GroupSpec::FinitaryPermutations { .. }) {
                return Err(unsupported(endo, spec));
            }
            let t = group.parse(image)?.code;
            if !group.is_identity(&group.mul(&t, &t)) {
                return Err(Error::Construction(format!(
                    "sign image {} is not an involution",
                    group.display(&t)
                )));
            }
            let e = group.identity_code();
            Endomorphism::new(group, format!("sign[{}]", group.display(&t)), move |x| {
                if parity(x) == 1 {
                    t.clone()
                } else {
                    e.clone()
                }
            })
        }
        E::PermShift => match spec {
            GroupSpec::FinitaryPermutations { support_bound: None } => Endomorphism::new(group, "perm_shift", |x| {
                if x.is_empty() {
                    return Code::new();
                }
                let mut img: Code = Code::with_capacity(x.len() + 1);
                img.push(1);
                img.extend(x.iter().map(|&v| v + 1));
                perm::from_images(&img)
            }),
            _ => {
                return Err(Error::Construction(
                    "perm_shift needs finitary permutations with unbounded support".into(),
                ))
            }
        },
        E::Coordinate { components } => {
            let GroupSpec::DirectProduct { factors } = spec else {
                return Err(unsupported(endo, spec));
            };
            if components.len() != factors.len() {
                return Err(Error::Construction(format!(
                    "coordinate map needs {} components, got {}",
                    factors.len(),
                    components.len()
                )));
            }
            let parts = factors
                .iter()
                .zip(components)
                .map(|(f, c)| {
                    let fg = groups::build_group(f)?;
                    build_unchecked(f, &fg, c)
                })
                .collect::<Result<Vec<_>>>()?;
            let name = format!(
                "({})",
                parts.iter().map(|p| p.name.as_str()).collect::<Vec<_>>().join(", ")
            );
            Endomorphism::new(group, name, move |x| {
                let images: Vec<Code> = product::split(x)
                    .into_iter()
                    .zip(&parts)
                    .map(|(c, p)| p.apply(c))
                    .collect();
                product::join(images.iter().map(|c| c.as_slice()))
            })
        }
        E::Compose { maps } => {
            let mut acc = Endomorphism::identity(group);
            for m in maps {
                acc = build_unchecked(spec, group, m)?.after(&acc);
            }
            acc
        }
        E::Power { map, k } => endo_power(&build_unchecked(spec, group, map)?, *k),
    })
}

/// Builds the endomorphism described by `endo` on the group built from
/// `spec`, checking the homomorphism law (exhaustively on groups of at most
/// 512 elements, on 2000 seeded random pairs otherwise).
pub fn build_endomorphism(spec: &GroupSpec, group: &AmbientGroup, endo: &EndoSpec) -> Result<Endomorphism> {
    let phi = build_unchecked(spec, group, endo)?;
    verify_homomorphism(&phi, BUILD_EXHAUSTIVE_LIMIT, BUILD_SAMPLES, 0x5eed)?;
    Ok(phi)
}
