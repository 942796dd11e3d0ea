use rand::RngCore;
use serde_json::Value;

use crate::element::Code;
use crate::error::{Error, Result};
use crate::group::{AmbientGroup, GroupOracle};

/// External direct product. Codes concatenate the factor codes, each
/// preceded by its length.
#[derive(Clone, Debug)]
pub struct DirectProduct {
    pub factors: Vec<AmbientGroup>,
}

/// Splits a product code into factor codes.
pub fn split(code: &[i32]) -> Vec<&[i32]> {
    let mut out = Vec::new();
    let mut k = 0;
    while k < code.len() {
        let len = code[k] as usize;
        out.push(&code[k + 1..k + 1 + len]);
        k += 1 + len;
    }
    out
}

pub fn join<'a>(parts: impl IntoIterator<Item = &'a [i32]>) -> Code {
    let mut out = Code::new();
    for p in parts {
        out.push(p.len() as i32);
        out.extend_from_slice(p);
    }
    out
}

impl DirectProduct {
    pub fn new(factors: Vec<AmbientGroup>) -> Result<Self> {
        if factors.is_empty() {
            return Err(Error::Construction("direct product needs at least one factor".into()));
        }
        Ok(DirectProduct { factors })
    }

    fn zip_map(&self, a: &[i32], b: &[i32], f: impl Fn(&AmbientGroup, &[i32], &[i32]) -> Code) -> Code {
        let pa = split(a);
        let pb = split(b);
        let parts: Vec<Code> = self
            .factors
            .iter()
            .zip(pa.iter().zip(pb.iter()))
            .map(|(g, (x, y))| f(g, x, y))
            .collect();
        join(parts.iter().map(|c| c.as_slice()))
    }

    /// Embeds a factor code at position `slot`, identity elsewhere.
    pub fn embed(&self, slot: usize, code: &[i32]) -> Code {
        let ids: Vec<Code> = self.factors.iter().map(|g| g.identity_code()).collect();
        join(
            ids.iter()
                .enumerate()
                .map(|(k, id)| if k == slot { code } else { id.as_slice() }),
        )
    }
}

impl GroupOracle for DirectProduct {
    fn describe(&self) -> String {
        self.factors
            .iter()
            .map(|g| g.describe())
            .collect::<Vec<_>>()
            .join(" x ")
    }

    fn identity(&self) -> Code {
        let ids: Vec<Code> = self.factors.iter().map(|g| g.identity_code()).collect();
        join(ids.iter().map(|c| c.as_slice()))
    }

    fn multiply(&self, a: &[i32], b: &[i32]) -> Code {
        self.zip_map(a, b, |g, x, y| g.mul(x, y))
    }

    fn invert(&self, a: &[i32]) -> Code {
        let parts: Vec<Code> = self.factors.iter().zip(split(a)).map(|(g, x)| g.inv(x)).collect();
        join(parts.iter().map(|c| c.as_slice()))
    }

    fn order(&self) -> Option<u64> {
        self.factors.iter().try_fold(1u64, |acc, g| acc.checked_mul(g.order()?))
    }

    fn elements(&self) -> Option<Vec<Code>> {
        if self.order()? > 1 << 22 {
            return None;
        }
        let mut acc: Vec<Vec<Code>> = vec![vec![]];
        for g in &self.factors {
            let elems = g.elements()?;
            acc = acc
                .into_iter()
                .flat_map(|prefix| {
                    elems.iter().map(move |e| {
                        let mut p = prefix.clone();
                        p.push(e.clone());
                        p
                    })
                })
                .collect();
        }
        Some(
            acc.into_iter()
                .map(|parts| join(parts.iter().map(|c| c.as_slice())))
                .collect(),
        )
    }

    fn random(&self, rng: &mut dyn RngCore) -> Code {
        let parts: Vec<Code> = self.factors.iter().map(|g| g.random_code(rng)).collect();
        join(parts.iter().map(|c| c.as_slice()))
    }

    fn parse(&self, value: &Value) -> Result<Code> {
        let items = value
            .as_array()
            .filter(|a| a.len() == self.factors.len())
            .ok_or_else(|| {
                Error::Parse(format!(
                    "expected an array of {} components, got {value}",
                    self.factors.len()
                ))
            })?;
        let parts: Vec<Code> = self
            .factors
            .iter()
            .zip(items)
            .map(|(g, v)| g.oracle().parse(v))
            .collect::<Result<_>>()?;
        Ok(join(parts.iter().map(|c| c.as_slice())))
    }

    fn render(&self, code: &[i32]) -> Value {
        Value::Array(self.factors.iter().zip(split(code)).map(|(g, c)| g.render(c)).collect())
    }

    fn display(&self, code: &[i32]) -> String {
        let parts: Vec<String> = self
            .factors
            .iter()
            .zip(split(code))
            .map(|(g, c)| g.display(c))
            .collect();
        format!("[{}]", parts.join(", "))
    }

    fn is_abelian(&self) -> bool {
        self.factors.iter().all(|g| g.oracle().is_abelian())
    }

    /// Level `k` pairs each factor's level `k`, or its last level once exhausted.
    fn truncation_generators(&self, level: usize) -> Option<Vec<Code>> {
        let mut gens = Vec::new();
        let mut any_fresh = false;
        for (slot, g) in self.factors.iter().enumerate() {
            let mut lv = level;
            let factor_gens = loop {
                if let Some(gs) = g.oracle().truncation_generators(lv) {
                    break gs;
                }
                if lv == 0 {
                    return None;
                }
                lv -= 1;
            };
            any_fresh |= lv == level;
            gens.extend(factor_gens.iter().map(|c| self.embed(slot, c)));
        }
        (level == 0 || any_fresh).then_some(gens)
    }
}
