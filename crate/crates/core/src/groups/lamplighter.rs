use rand::{Rng, RngCore};
use serde_json::{json, Value};

use super::sparse;
use crate::element::Code;
use crate::error::{Error, Result};
use crate::group::GroupOracle;

/// The wreath product `Z_m^(Z) ⋊ Z`: `(f, k)(g, l) = (f + shift_k g, k + l)`
/// where `(shift_k g)(i) = g(i - k)`.
///
/// Codes are `[k, lamp pairs...]`. Infinite and not locally finite.
#[derive(Clone, Debug)]
pub struct Lamplighter {
    pub base_order: u32,
}

impl Lamplighter {
    pub fn new(base_order: u32) -> Result<Self> {
        if base_order < 2 {
            return Err(Error::Construction("lamplighter base order must be at least 2".into()));
        }
        Ok(Lamplighter { base_order })
    }

    fn m(&self) -> i32 {
        self.base_order as i32
    }

    pub fn position(code: &[i32]) -> i32 {
        code[0]
    }

    pub fn lamps(code: &[i32]) -> &[i32] {
        &code[1..]
    }

    pub fn compose(k: i32, lamps: &[i32]) -> Code {
        let mut c = Code::with_capacity(lamps.len() + 1);
        c.push(k);
        c.extend_from_slice(lamps);
        c
    }

    /// The lamp toggle at position 0.
    pub fn lamp(&self) -> Code {
        Self::compose(0, &[0, 1])
    }

    /// Translation by one step.
    pub fn step(&self) -> Code {
        Self::compose(1, &[])
    }
}

impl GroupOracle for Lamplighter {
    fn describe(&self) -> String {
        format!("Z_{}^(Z) x| Z", self.base_order)
    }

    fn identity(&self) -> Code {
        Code::from_slice(&[0])
    }

    fn multiply(&self, a: &[i32], b: &[i32]) -> Code {
        let k = Self::position(a);
        let lamps = sparse::add_shifted_scaled(Self::lamps(a), Self::lamps(b), k, 1, self.m());
        Self::compose(k + Self::position(b), &lamps)
    }

    fn invert(&self, a: &[i32]) -> Code {
        let k = Self::position(a);
        let lamps = sparse::scale(&sparse::shift(Self::lamps(a), -k, |_| true), -1, self.m());
        Self::compose(-k, &lamps)
    }

    fn random(&self, rng: &mut dyn RngCore) -> Code {
        let k = rng.gen_range(-3..=3);
        let n = rng.gen_range(0..=3);
        let raw = (0..n)
            .map(|_| (rng.gen_range(-4..=4i64), rng.gen_range(0..self.base_order) as i64))
            .collect();
        Self::compose(k, &sparse::from_pairs(raw, self.m()))
    }

    fn parse(&self, value: &Value) -> Result<Code> {
        let obj = value
            .as_object()
            .ok_or_else(|| Error::Parse(format!("expected {{\"lamps\": ..., \"pos\": k}}, got {value}")))?;
        let k = obj.get("pos").and_then(Value::as_i64).unwrap_or(0);
        let lamps = match obj.get("lamps") {
            Some(v) => sparse::parse(v, self.m()).ok_or_else(|| Error::Parse(format!("bad lamp configuration {v}")))?,
            None => Code::new(),
        };
        Ok(Self::compose(k as i32, &lamps))
    }

    fn render(&self, code: &[i32]) -> Value {
        json!({ "lamps": sparse::render(Self::lamps(code)), "pos": Self::position(code) })
    }
}
