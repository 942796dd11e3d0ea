use rand::{Rng, RngCore};
use serde_json::{json, Value};

use super::dsum::DirectSum;
use super::sparse;
use crate::element::Code;
use crate::error::{Error, Result};
use crate::group::GroupOracle;

/// `A ⋊ Z_r` for a restricted direct sum `A = Z_m^(I)`, with the generator of
/// `Z_r` acting as multiplication by `exponent`:
/// `(a, x)(b, y) = (a + exponent^x · b, x + y)`.
///
/// Codes are `[x, base code...]`.
#[derive(Clone, Debug)]
pub struct Semidirect {
    pub base: DirectSum,
    pub actor_order: u32,
    pub exponent: u32,
    /// `exponent^x mod m` for `x` in `0..actor_order`.
    powers: Vec<i32>,
}

fn gcd(a: u64, b: u64) -> u64 {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

impl Semidirect {
    pub fn new(base: DirectSum, actor_order: u32, exponent: u32) -> Result<Self> {
        let m = u64::from(base.modulus);
        if actor_order == 0 {
            return Err(Error::Construction("actor order must be positive".into()));
        }
        if gcd(u64::from(exponent) % m, m) != 1 {
            return Err(Error::Construction(format!(
                "multiplication by {exponent} is not invertible mod {m}"
            )));
        }
        let mut powers = Vec::with_capacity(actor_order as usize);
        let mut p = 1u64;
        for _ in 0..actor_order {
            powers.push(p as i32);
            p = p * u64::from(exponent) % m;
        }
        if p != 1 {
            return Err(Error::Construction(format!(
                "{exponent}^{actor_order} is not 1 mod {m}; the action of Z_{actor_order} is not well defined"
            )));
        }
        Ok(Semidirect {
            base,
            actor_order,
            exponent,
            powers,
        })
    }

    fn actor(code: &[i32]) -> i32 {
        code[0]
    }

    pub fn base_part(code: &[i32]) -> &[i32] {
        &code[1..]
    }

    pub fn compose(x: i32, base: &[i32]) -> Code {
        let mut c = Code::with_capacity(base.len() + 1);
        c.push(x);
        c.extend_from_slice(base);
        c
    }

    fn r(&self) -> i32 {
        self.actor_order as i32
    }
}

impl GroupOracle for Semidirect {
    fn describe(&self) -> String {
        format!("{} x|{} Z_{}", self.base.describe(), self.exponent, self.actor_order)
    }

    fn identity(&self) -> Code {
        Code::from_slice(&[0])
    }

    fn multiply(&self, a: &[i32], b: &[i32]) -> Code {
        let x = Self::actor(a);
        let y = Self::actor(b);
        let base = sparse::add_shifted_scaled(
            Self::base_part(a),
            Self::base_part(b),
            0,
            self.powers[x as usize],
            self.base.m(),
        );
        Self::compose((x + y) % self.r(), &base)
    }

    fn invert(&self, a: &[i32]) -> Code {
        let x = Self::actor(a);
        let inv_x = (self.r() - x) % self.r();
        let base = sparse::scale(
            Self::base_part(a),
            -i64::from(self.powers[inv_x as usize]),
            self.base.m(),
        );
        Self::compose(inv_x, &base)
    }

    fn order(&self) -> Option<u64> {
        self.base.order()?.checked_mul(u64::from(self.actor_order))
    }

    fn elements(&self) -> Option<Vec<Code>> {
        let base = self.base.elements()?;
        Some(
            (0..self.r())
                .flat_map(|x| base.iter().map(move |b| Self::compose(x, b)))
                .collect(),
        )
    }

    fn random(&self, rng: &mut dyn RngCore) -> Code {
        let x = rng.gen_range(0..self.r());
        Self::compose(x, &self.base.random_code(rng))
    }

    fn parse(&self, value: &Value) -> Result<Code> {
        let (base, actor) = match value {
            Value::Object(map) => (
                map.get("base").cloned().unwrap_or(Value::Array(vec![])),
                map.get("actor").cloned().unwrap_or(Value::from(0)),
            ),
            Value::Array(items) if items.len() == 2 && items[1].is_number() => (items[0].clone(), items[1].clone()),
            _ => {
                return Err(Error::Parse(format!(
                    "expected {{\"base\": ..., \"actor\": x}}, got {value}"
                )))
            }
        };
        let x = actor
            .as_i64()
            .ok_or_else(|| Error::Parse(format!("actor must be an integer, got {actor}")))?;
        let b = self.base.parse_code(&base)?;
        Ok(Self::compose(x.rem_euclid(i64::from(self.actor_order)) as i32, &b))
    }

    fn render(&self, code: &[i32]) -> Value {
        json!({ "base": self.base.render(Self::base_part(code)), "actor": Self::actor(code) })
    }

    fn is_abelian(&self) -> bool {
        self.exponent % self.base.modulus == 1 || self.actor_order == 1
    }

    fn truncation_generators(&self, level: usize) -> Option<Vec<Code>> {
        let mut gens: Vec<Code> = self
            .base
            .truncation_generators(level)?
            .into_iter()
            .map(|b| Self::compose(0, &b))
            .collect();
        if self.actor_order > 1 {
            gens.push(Self::compose(1, &[]));
        }
        Some(gens)
    }
}
