use std::fmt;

use rand::{RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::Value;

use super::normal::{NormalCertificate, NormalSubgroup, DEFAULT_SAMPLES};
use super::Endomorphism;
use crate::element::Code;
use crate::error::{Error, Result};
use crate::group::{AmbientGroup, GroupOracle};
use crate::set::{FiniteSubgroup, FiniteSubset};

/// `G/H` over canonical representatives: `a·b = rep(abH)`.
pub struct QuotientOracle {
    parent: AmbientGroup,
    normal: NormalSubgroup,
}

impl fmt::Debug for QuotientOracle {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.describe())
    }
}

impl GroupOracle for QuotientOracle {
    fn describe(&self) -> String {
        format!("({}) / {}", self.parent.describe(), self.normal.name())
    }

    fn identity(&self) -> Code {
        self.normal.canonicalize(&self.parent.identity_code())
    }

    fn multiply(&self, a: &[i32], b: &[i32]) -> Code {
        self.normal.canonicalize(&self.parent.mul(a, b))
    }

    fn invert(&self, a: &[i32]) -> Code {
        self.normal.canonicalize(&self.parent.inv(a))
    }

    fn order(&self) -> Option<u64> {
        let h = self.normal.finite()?.order() as u64;
        self.parent.order().map(|n| n / h)
    }

    fn elements(&self) -> Option<Vec<Code>> {
        let mut reps: Vec<Code> = self
            .parent
            .elements()?
            .iter()
            .map(|c| self.normal.canonicalize(c))
            .collect();
        reps.sort_unstable();
        reps.dedup();
        Some(reps)
    }

    fn random(&self, rng: &mut dyn RngCore) -> Code {
        self.normal.canonicalize(&self.parent.random_code(rng))
    }

    fn parse(&self, value: &Value) -> Result<Code> {
        Ok(self.normal.canonicalize(&self.parent.parse(value)?.code))
    }

    fn render(&self, code: &[i32]) -> Value {
        self.parent.render(code)
    }

    fn display(&self, code: &[i32]) -> String {
        format!("{}{}", self.parent.display(code), self.normal.name())
    }

    fn is_abelian(&self) -> bool {
        self.parent.oracle().is_abelian()
    }

    fn linear_modulus(&self) -> Option<u32> {
        self.parent.oracle().linear_modulus()?;
        self.normal.linear_divisor().filter(|&d| d > 1)
    }

    fn truncation_generators(&self, level: usize) -> Option<Vec<Code>> {
        let gens = self.parent.oracle().truncation_generators(level)?;
        let mut reps: Vec<Code> = gens.iter().map(|c| self.normal.canonicalize(c)).collect();
        reps.sort_unstable();
        reps.dedup();
        Some(reps)
    }
}

/// The quotient `G/H` with its projection and the induced endomorphism `φ̄`.
#[derive(Clone, Debug)]
pub struct QuotientSystem {
    pub quotient: AmbientGroup,
    pub induced: Endomorphism,
    pub normal: NormalSubgroup,
    pub certificate: NormalCertificate,
}

impl QuotientSystem {
    /// `π(g)` as an element code of the quotient.
    pub fn project(&self, g: &[i32]) -> Code {
        self.normal.canonicalize(g)
    }

    pub fn project_set(&self, x: &FiniteSubset) -> FiniteSubset {
        let n = self.normal.clone();
        x.map_into(&self.quotient, move |c| n.canonicalize(c))
    }

    pub fn project_subgroup(&self, f: &FiniteSubgroup) -> Result<FiniteSubgroup> {
        FiniteSubgroup::from_set(self.project_set(f.as_set()))
    }
}

/// Builds `G/H` and `φ̄ = rep ∘ φ` after certifying `H`, then spot-checks
/// that `φ̄(π(g))` does not depend on the coset representative.
pub fn induce_quotient(phi: &Endomorphism, h: &NormalSubgroup) -> Result<QuotientSystem> {
    induce_quotient_with(phi, h, DEFAULT_SAMPLES, 0)
}

pub fn induce_quotient_with(
    phi: &Endomorphism,
    h: &NormalSubgroup,
    samples: usize,
    seed: u64,
) -> Result<QuotientSystem> {
    let certificate = h.certify(phi, samples, seed)?;
    let parent = phi.group().clone();
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0xc05e7);
    for _ in 0..samples.min(2000) {
        let g = parent.random_code(&mut rng);
        let k = h.sample(&mut rng);
        let a = h.canonicalize(&phi.apply(&g));
        let b = h.canonicalize(&phi.apply(&parent.mul(&g, &k)));
        if a != b {
            return Err(Error::Specification(format!(
                "induced map depends on the representative: {} and {} differ by an element of {}",
                parent.display(&g),
                parent.display(&parent.mul(&g, &k)),
                h.name()
            )));
        }
    }
    let quotient = AmbientGroup::new(QuotientOracle {
        parent: parent.clone(),
        normal: h.clone(),
    });
    let induced = if phi.is_identity() {
        Endomorphism::identity(&quotient)
    } else {
        let (f, n) = (phi.clone(), h.clone());
        Endomorphism::new(&quotient, format!("{}/{}", phi.name(), h.name()), move |x| {
            n.canonicalize(&f.apply(x))
        })
    };
    Ok(QuotientSystem {
        quotient,
        induced,
        normal: h.clone(),
        certificate,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dynamics::{build_endomorphism, verify_homomorphism, EndoSpec, NormalSpec};
    use crate::groups::{build_group, GroupSpec};
    use serde_json::json;

    fn system(spec: &GroupSpec, endo: EndoSpec, normal: NormalSpec) -> (AmbientGroup, Endomorphism, QuotientSystem) {
        let g = build_group(spec).unwrap();
        let phi = build_endomorphism(spec, &g, &endo).unwrap();
        let h = NormalSubgroup::build(&normal, spec, &g).unwrap();
        let q = induce_quotient_with(&phi, &h, 2000, 7).unwrap();
        (g, phi, q)
    }

    #[test]
    fn trivial_quotient_is_the_group() {
        let (g, _, q) = system(&GroupSpec::symmetric(3), EndoSpec::Identity, NormalSpec::Trivial);
        assert_eq!(q.quotient.order(), Some(6));
        for x in g.elements().unwrap() {
            assert_eq!(q.project(&x), x);
        }
    }

    #[test]
    fn z6_by_multiples_of_three_is_z3_sum() {
        let (g, phi, q) = system(
            &GroupSpec::dsum(6, None),
            EndoSpec::Shift { amount: 1 },
            NormalSpec::Multiples { divisor: 3 },
        );
        assert_eq!(q.quotient.oracle().linear_modulus(), Some(3));
        let x = g.parse(&json!([[0, 4], [1, 5]])).unwrap().code;
        assert_eq!(q.project(&x).as_slice(), &[0, 1, 1, 2]);
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        for _ in 0..500 {
            let g0 = g.random_code(&mut rng);
            assert_eq!(q.project(&phi.apply(&g0)), q.induced.apply(&q.project(&g0)));
        }
        verify_homomorphism(&q.induced, 0, 500, 3).unwrap();
    }

    #[test]
    fn lamplighter_mod_base_is_z() {
        let (g, _, q) = system(&GroupSpec::lamplighter(2), EndoSpec::Identity, NormalSpec::Base);
        let t = g.parse(&json!({"lamps": [[0, 1]], "pos": 1})).unwrap().code;
        let t3 = q.quotient.pow(&q.project(&t), 3);
        assert_eq!(t3.as_slice(), &[3]);
    }

    #[test]
    fn q8_mod_center_has_order_four() {
        let (_, _, q) = system(
            &GroupSpec::quaternion(),
            EndoSpec::Inner { by: json!("i") },
            NormalSpec::Center,
        );
        assert_eq!(q.quotient.order(), Some(4));
        assert_eq!(q.quotient.elements().unwrap().len(), 4);
        verify_homomorphism(&q.induced, 4096, 0, 0).unwrap();
    }
}
