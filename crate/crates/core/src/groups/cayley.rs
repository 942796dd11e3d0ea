use rand::{Rng, RngCore};
use serde_json::Value;

use crate::element::Code;
use crate::error::{Error, Result};
use crate::group::GroupOracle;

/// Largest table validated exhaustively (associativity is cubic).
pub const MAX_TABLE_ORDER: usize = 512;

/// A finite group given by its multiplication table on `0..n`.
#[derive(Clone, Debug)]
pub struct CayleyTable {
    name: String,
    table: Vec<Vec<u32>>,
    identity: u32,
    inverse: Vec<u32>,
    labels: Option<Vec<String>>,
    abelian: bool,
}

impl CayleyTable {
    /// Validates closure, associativity, identity and inverses.
    pub fn new(name: Option<String>, table: Vec<Vec<u32>>, labels: Option<Vec<String>>) -> Result<Self> {
        let n = table.len();
        let bad = |msg: String| Error::Construction(format!("cayley table: {msg}"));
        if n == 0 {
            return Err(bad("empty table".into()));
        }
        if n > MAX_TABLE_ORDER {
            return Err(bad(format!("order {n} exceeds {MAX_TABLE_ORDER}")));
        }
        if let Some(labels) = &labels {
            if labels.len() != n {
                return Err(bad(format!("{} labels for {n} elements", labels.len())));
            }
        }
        for (i, row) in table.iter().enumerate() {
            if row.len() != n {
                return Err(bad(format!("row {i} has {} entries, expected {n}", row.len())));
            }
            if let Some(&x) = row.iter().find(|&&x| x as usize >= n) {
                return Err(bad(format!("entry {x} in row {i} out of range")));
            }
        }
        let identity = (0..n)
            .find(|&e| (0..n).all(|x| table[e][x] as usize == x && table[x][e] as usize == x))
            .ok_or_else(|| bad("no identity element".into()))? as u32;
        let mut inverse = vec![0u32; n];
        for (x, inv) in inverse.iter_mut().enumerate() {
            *inv = (0..n)
                .find(|&y| table[x][y] == identity && table[y][x] == identity)
                .ok_or_else(|| bad(format!("element {x} has no inverse")))? as u32;
        }
        for a in 0..n {
            for b in 0..n {
                let ab = table[a][b] as usize;
                for c in 0..n {
                    if table[ab][c] != table[a][table[b][c] as usize] {
                        return Err(bad(format!("not associative at ({a}, {b}, {c})")));
                    }
                }
            }
        }
        let abelian = (0..n).all(|a| (0..n).all(|b| table[a][b] == table[b][a]));
        Ok(CayleyTable {
            name: name.unwrap_or_else(|| format!("table[{n}]")),
            table,
            identity,
            inverse,
            labels,
            abelian,
        })
    }

    pub fn len(&self) -> usize {
        self.table.len()
    }

    pub fn is_empty(&self) -> bool {
        self.table.is_empty()
    }

    pub fn index_of(&self, label: &str) -> Option<u32> {
        self.labels.as_ref()?.iter().position(|l| l == label).map(|p| p as u32)
    }
}

impl GroupOracle for CayleyTable {
    fn describe(&self) -> String {
        self.name.clone()
    }

    fn identity(&self) -> Code {
        Code::from_slice(&[self.identity as i32])
    }

    fn multiply(&self, a: &[i32], b: &[i32]) -> Code {
        Code::from_slice(&[self.table[a[0] as usize][b[0] as usize] as i32])
    }

    fn invert(&self, a: &[i32]) -> Code {
        Code::from_slice(&[self.inverse[a[0] as usize] as i32])
    }

    fn order(&self) -> Option<u64> {
        Some(self.table.len() as u64)
    }

    fn elements(&self) -> Option<Vec<Code>> {
        Some((0..self.table.len() as i32).map(|i| Code::from_slice(&[i])).collect())
    }

    fn random(&self, rng: &mut dyn RngCore) -> Code {
        Code::from_slice(&[rng.gen_range(0..self.table.len()) as i32])
    }

    fn parse(&self, value: &Value) -> Result<Code> {
        let idx = match value {
            Value::Number(n) => n.as_u64().map(|x| x as u32),
            Value::String(s) => self.index_of(s).or_else(|| s.parse().ok()),
            _ => None,
        }
        .filter(|&i| (i as usize) < self.table.len())
        .ok_or_else(|| Error::Parse(format!("{value} is not an element of {}", self.name)))?;
        Ok(Code::from_slice(&[idx as i32]))
    }

    fn render(&self, code: &[i32]) -> Value {
        match &self.labels {
            Some(l) => Value::String(l[code[0] as usize].clone()),
            None => Value::from(code[0]),
        }
    }

    fn display(&self, code: &[i32]) -> String {
        match &self.labels {
            Some(l) => l[code[0] as usize].clone(),
            None => code[0].to_string(),
        }
    }

    fn is_abelian(&self) -> bool {
        self.abelian
    }

    fn truncation_generators(&self, level: usize) -> Option<Vec<Code>> {
        (level == 0).then(|| self.elements().unwrap_or_default())
    }
}

/// The quaternion group `{±1, ±i, ±j, ±k}` with indices `0..8` in that order.
pub fn quaternion_table() -> (Vec<Vec<u32>>, Vec<String>) {
    // Unit index u in {1, i, j, k} and sign bit s encode element 2u + s.
    let unit_mul = |a: usize, b: usize| -> (usize, bool) {
        // Returns (unit, negated) for the product of units.
        match (a, b) {
            (0, x) | (x, 0) => (x, false),
            (x, y) if x == y => (0, true),
            (1, 2) => (3, false),
            (2, 3) => (1, false),
            (3, 1) => (2, false),
            (2, 1) => (3, true),
            (3, 2) => (1, true),
            (1, 3) => (2, true),
            _ => unreachable!(),
        }
    };
    let table = (0..8)
        .map(|a| {
            (0..8)
                .map(|b| {
                    let (u, neg) = unit_mul(a / 2, b / 2);
                    let sign = (a % 2) ^ (b % 2) ^ usize::from(neg);
                    (2 * u + sign) as u32
                })
                .collect()
        })
        .collect();
    let labels = ["1", "-1", "i", "-i", "j", "-j", "k", "-k"]
        .iter()
        .map(|s| s.to_string())
        .collect();
    (table, labels)
}
