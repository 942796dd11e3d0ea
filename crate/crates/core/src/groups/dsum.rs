use rand::{Rng, RngCore};
use schemars::JsonSchema;
use serde::{Deserialize, Serialize};
use serde_json::Value;

use super::sparse;
use crate::element::Code;
use crate::error::{Error, Result};
use crate::group::GroupOracle;

/// Index set of a restricted direct sum.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize, JsonSchema)]
#[serde(rename_all = "snake_case")]
pub enum IndexSet {
    #[default]
    Naturals,
    Integers,
}

/// `Z_m^(N)` or `Z_m^(Z)`: finitely supported sequences under coordinatewise addition.
///
/// With `truncate = Some(k)` only coordinates `0..k` (naturals) or `-k..=k`
/// (integers) are used, which is a finite subgroup.
#[derive(Clone, Debug)]
pub struct DirectSum {
    pub modulus: u32,
    pub index: IndexSet,
    pub truncate: Option<u32>,
}

const RANDOM_SPAN: i32 = 6;

impl DirectSum {
    pub fn new(modulus: u32, index: IndexSet, truncate: Option<u32>) -> Result<Self> {
        if modulus < 2 || modulus > 1 << 15 {
            return Err(Error::Construction(format!(
                "direct sum modulus {modulus} out of range 2..=32768"
            )));
        }
        if truncate == Some(0) {
            return Err(Error::Construction("truncation width must be positive".into()));
        }
        Ok(DirectSum {
            modulus,
            index,
            truncate,
        })
    }

    pub fn m(&self) -> i32 {
        self.modulus as i32
    }

    pub fn in_range(&self, i: i32) -> bool {
        match (self.index, self.truncate) {
            (IndexSet::Naturals, None) => i >= 0,
            (IndexSet::Naturals, Some(k)) => i >= 0 && i < k as i32,
            (IndexSet::Integers, None) => true,
            (IndexSet::Integers, Some(k)) => i.unsigned_abs() <= k,
        }
    }

    /// Coordinates of a finite truncation, if any.
    pub fn coordinates(&self) -> Option<Vec<i32>> {
        match (self.index, self.truncate) {
            (IndexSet::Naturals, Some(k)) => Some((0..k as i32).collect()),
            (IndexSet::Integers, Some(k)) => Some((-(k as i32)..=k as i32).collect()),
            _ => None,
        }
    }

    /// Coordinates of the `level`-th member of the truncation chain.
    pub fn level_coordinates(&self, level: usize) -> Option<Vec<i32>> {
        let coords: Vec<i32> = match self.index {
            IndexSet::Naturals => (0..=level as i32).collect(),
            IndexSet::Integers => (-(level as i32)..=level as i32).collect(),
        };
        if coords.iter().all(|&i| self.in_range(i)) {
            Some(coords)
        } else {
            None
        }
    }

    pub fn unit(&self, i: i32, v: i32) -> Code {
        sparse::from_pairs(vec![(i64::from(i), i64::from(v))], self.m())
    }

    /// Right shift by `amount`, dropping coordinates that leave the index range.
    pub fn shift(&self, code: &[i32], amount: i32) -> Code {
        sparse::shift(code, amount, |j| self.in_range(j))
    }

    fn width(&self) -> Option<u32> {
        self.coordinates().map(|c| c.len() as u32)
    }

    pub fn random_code(&self, rng: &mut dyn RngCore) -> Code {
        let coords: Vec<i32> = match self.coordinates() {
            Some(c) => c,
            None => match self.index {
                IndexSet::Naturals => (0..RANDOM_SPAN).collect(),
                IndexSet::Integers => (-RANDOM_SPAN / 2..=RANDOM_SPAN / 2).collect(),
            },
        };
        let support = rng.gen_range(0..=coords.len().min(4));
        let raw: Vec<(i64, i64)> = (0..support)
            .map(|_| {
                let i = coords[rng.gen_range(0..coords.len())];
                (i64::from(i), rng.gen_range(0..self.modulus) as i64)
            })
            .collect();
        sparse::from_pairs(raw, self.m())
    }

    pub fn parse_code(&self, value: &Value) -> Result<Code> {
        let code = match value {
            Value::Number(n) => {
                let v = n.as_i64().ok_or_else(|| Error::Parse(format!("not an integer: {n}")))?;
                sparse::from_pairs(vec![(0, v)], self.m())
            }
            _ => sparse::parse(value, self.m())
                .ok_or_else(|| Error::Parse(format!("expected [[index, value], ...], got {value}")))?,
        };
        if let Some((i, _)) = sparse::pairs(&code).find(|&(i, _)| !self.in_range(i)) {
            return Err(Error::Parse(format!("coordinate {i} outside the index set")));
        }
        Ok(code)
    }

    fn is_cyclic(&self) -> bool {
        self.index == IndexSet::Naturals && self.truncate == Some(1)
    }
}

impl GroupOracle for DirectSum {
    fn describe(&self) -> String {
        let idx = match self.index {
            IndexSet::Naturals => "N",
            IndexSet::Integers => "Z",
        };
        match self.truncate {
            Some(1) if self.index == IndexSet::Naturals => format!("Z_{}", self.modulus),
            Some(k) => format!("Z_{}^({}|{})", self.modulus, idx, k),
            None => format!("Z_{}^({})", self.modulus, idx),
        }
    }

    fn identity(&self) -> Code {
        Code::new()
    }

    fn multiply(&self, a: &[i32], b: &[i32]) -> Code {
        sparse::add(a, b, self.m())
    }

    fn invert(&self, a: &[i32]) -> Code {
        sparse::neg(a, self.m())
    }

    fn order(&self) -> Option<u64> {
        let w = self.width()?;
        u64::from(self.modulus).checked_pow(w)
    }

    fn elements(&self) -> Option<Vec<Code>> {
        let coords = self.coordinates()?;
        let total = self.order()?;
        if total > 1 << 22 {
            return None;
        }
        let m = self.modulus as u64;
        Some(
            (0..total)
                .map(|mut n| {
                    let mut code = Code::new();
                    for &i in &coords {
                        let v = (n % m) as i32;
                        n /= m;
                        if v != 0 {
                            code.extend([i, v]);
                        }
                    }
                    code
                })
                .collect(),
        )
    }

    fn random(&self, rng: &mut dyn RngCore) -> Code {
        self.random_code(rng)
    }

    fn parse(&self, value: &Value) -> Result<Code> {
        self.parse_code(value)
    }

    fn render(&self, code: &[i32]) -> Value {
        if self.is_cyclic() {
            return Value::from(code.get(1).copied().unwrap_or(0));
        }
        sparse::render(code)
    }

    fn is_abelian(&self) -> bool {
        true
    }

    fn linear_modulus(&self) -> Option<u32> {
        Some(self.modulus)
    }

    fn truncation_generators(&self, level: usize) -> Option<Vec<Code>> {
        let coords = self.level_coordinates(level)?;
        Some(coords.into_iter().map(|i| self.unit(i, 1)).collect())
    }
}
