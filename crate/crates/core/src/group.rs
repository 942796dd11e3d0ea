use std::fmt;
use std::sync::Arc;

use rand::RngCore;
use serde_json::Value;

use crate::element::{Code, Element, GroupTag};
use crate::error::Result;

/// Element-level arithmetic of a concretely represented group.
///
/// Implementations must keep codes canonical: two codes are equal exactly
/// when they denote the same element.
pub trait GroupOracle: Send + Sync + fmt::Debug {
    /// Human-readable construction record; also seeds the group tag.
    fn describe(&self) -> String;

    fn identity(&self) -> Code;

    fn multiply(&self, a: &[i32], b: &[i32]) -> Code;

    fn invert(&self, a: &[i32]) -> Code;

    /// Group order when finite and known.
    fn order(&self) -> Option<u64> {
        None
    }

    /// Every element, for finite groups small enough to list.
    fn elements(&self) -> Option<Vec<Code>> {
        None
    }

    fn random(&self, rng: &mut dyn RngCore) -> Code;

    fn parse(&self, value: &Value) -> Result<Code>;

    fn render(&self, code: &[i32]) -> Value;

    fn display(&self, code: &[i32]) -> String {
        self.render(code).to_string()
    }

    fn is_abelian(&self) -> bool {
        false
    }

    /// `Some(m)` when codes are sparse `(index, value)` pairs of a restricted
    /// direct sum of copies of Z_m, with the group operation coordinatewise addition.
    fn linear_modulus(&self) -> Option<u32> {
        None
    }

    /// Generators of the `level`-th member of the group's canonical increasing
    /// chain of finite subgroups, or `None` past the end of the chain.
    fn truncation_generators(&self, _level: usize) -> Option<Vec<Code>> {
        None
    }
}

/// Shared handle to a group oracle together with its tag.
#[derive(Clone)]
pub struct AmbientGroup {
    tag: GroupTag,
    oracle: Arc<dyn GroupOracle>,
}

impl fmt::Debug for AmbientGroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("AmbientGroup")
            .field("tag", &self.tag)
            .field("describe", &self.oracle.describe())
            .finish()
    }
}

impl AmbientGroup {
    pub fn new(oracle: impl GroupOracle + 'static) -> Self {
        Self::from_arc(Arc::new(oracle))
    }

    pub fn from_arc(oracle: Arc<dyn GroupOracle>) -> Self {
        let tag = GroupTag::from_description(&oracle.describe());
        AmbientGroup { tag, oracle }
    }

    pub fn tag(&self) -> GroupTag {
        self.tag
    }

    pub fn oracle(&self) -> &dyn GroupOracle {
        self.oracle.as_ref()
    }

    pub fn describe(&self) -> String {
        self.oracle.describe()
    }

    pub fn same_group(&self, other: &AmbientGroup) -> bool {
        self.tag == other.tag
    }

    pub fn identity(&self) -> Element {
        Element::new(self.tag, self.oracle.identity())
    }

    pub fn identity_code(&self) -> Code {
        self.oracle.identity()
    }

    pub fn is_identity(&self, code: &[i32]) -> bool {
        self.oracle.identity().as_slice() == code
    }

    pub fn mul(&self, a: &[i32], b: &[i32]) -> Code {
        self.oracle.multiply(a, b)
    }

    pub fn inv(&self, a: &[i32]) -> Code {
        self.oracle.invert(a)
    }

    pub fn multiply(&self, a: &Element, b: &Element) -> Element {
        debug_assert_eq!(a.tag, self.tag);
        debug_assert_eq!(b.tag, self.tag);
        Element::new(self.tag, self.oracle.multiply(&a.code, &b.code))
    }

    pub fn invert(&self, a: &Element) -> Element {
        debug_assert_eq!(a.tag, self.tag);
        Element::new(self.tag, self.oracle.invert(&a.code))
    }

    pub fn element(&self, code: Code) -> Element {
        Element::new(self.tag, code)
    }

    pub fn parse(&self, value: &Value) -> Result<Element> {
        Ok(Element::new(self.tag, self.oracle.parse(value)?))
    }

    pub fn render(&self, code: &[i32]) -> Value {
        self.oracle.render(code)
    }

    pub fn display(&self, code: &[i32]) -> String {
        self.oracle.display(code)
    }

    pub fn random_code(&self, rng: &mut dyn RngCore) -> Code {
        self.oracle.random(rng)
    }

    pub fn order(&self) -> Option<u64> {
        self.oracle.order()
    }

    pub fn linear_modulus(&self) -> Option<u32> {
        self.oracle.linear_modulus()
    }

    pub fn elements(&self) -> Option<Vec<Code>> {
        self.oracle.elements()
    }

    /// `g^k` by repeated squaring; negative `k` inverts first.
    pub fn pow(&self, g: &[i32], k: i64) -> Code {
        let mut base: Code = if k < 0 { self.inv(g) } else { Code::from_slice(g) };
        let mut e = k.unsigned_abs();
        let mut acc = self.identity_code();
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(&acc, &base);
            }
            base = self.mul(&base, &base);
            e >>= 1;
        }
        acc
    }

    /// `g h g^{-1}`.
    pub fn conjugate(&self, g: &[i32], h: &[i32]) -> Code {
        self.mul(&self.mul(g, h), &self.inv(g))
    }
}

/// A failed group-axiom check with the offending codes rendered for display.
#[derive(Debug, Clone, PartialEq)]
pub struct AxiomViolation {
    pub law: &'static str,
    pub witness: Vec<String>,
}

/// Checks associativity on `samples` random triples and the identity and
/// inverse laws on every sampled element.
pub fn check_axioms(
    group: &AmbientGroup,
    samples: usize,
    rng: &mut dyn RngCore,
) -> std::result::Result<(), AxiomViolation> {
    let e = group.identity_code();
    let show = |codes: &[&Code]| codes.iter().map(|c| group.display(c)).collect::<Vec<_>>();
    for _ in 0..samples {
        let a = group.random_code(rng);
        let b = group.random_code(rng);
        let c = group.random_code(rng);
        let left = group.mul(&group.mul(&a, &b), &c);
        let right = group.mul(&a, &group.mul(&b, &c));
        if left != right {
            return Err(AxiomViolation {
                law: "associativity",
                witness: show(&[&a, &b, &c]),
            });
        }
        if group.mul(&a, &e) != a || group.mul(&e, &a) != a {
            return Err(AxiomViolation {
                law: "identity",
                witness: show(&[&a]),
            });
        }
        let inv = group.inv(&a);
        if group.mul(&a, &inv) != e || group.mul(&inv, &a) != e {
            return Err(AxiomViolation {
                law: "inverse",
                witness: show(&[&a]),
            });
        }
    }
    Ok(())
}
