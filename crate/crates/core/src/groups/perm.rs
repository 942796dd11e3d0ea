use rand::seq::SliceRandom;
use rand::{Rng, RngCore};
use serde_json::Value;

use crate::element::Code;
use crate::error::{Error, Result};
use crate::group::GroupOracle;

/// Permutations of the positive integers with finite support.
///
/// A code lists the images of `1..=d`, where `d` is the largest moved point,
/// so the identity is the empty code. Products compose left to right:
/// `(pq)(i) = q(p(i))`. With `support_bound = Some(n)` this is `S_n`.
#[derive(Clone, Debug)]
pub struct FinitaryPermutations {
    pub support_bound: Option<u32>,
}

const RANDOM_DEGREE: u32 = 6;

fn image(code: &[i32], i: i32) -> i32 {
    if i >= 1 && (i as usize) <= code.len() {
        code[i as usize - 1]
    } else {
        i
    }
}

fn trim(mut v: Code) -> Code {
    while let Some(&last) = v.last() {
        if last == v.len() as i32 {
            v.pop();
        } else {
            break;
        }
    }
    v
}

/// Code of a permutation given by its images of `1..=n`.
pub fn from_images(images: &[i32]) -> Code {
    trim(Code::from_slice(images))
}

pub fn from_cycles(cycles: &[Vec<i32>]) -> Result<Code> {
    let max = cycles.iter().flatten().copied().max().unwrap_or(0);
    let mut img: Vec<i32> = (1..=max).collect();
    let mut seen = vec![false; max as usize + 1];
    for cycle in cycles {
        for (k, &p) in cycle.iter().enumerate() {
            if p < 1 {
                return Err(Error::Parse(format!("point {p} is not a positive integer")));
            }
            if seen[p as usize] {
                return Err(Error::Parse(format!("point {p} repeated in cycle notation")));
            }
            seen[p as usize] = true;
            img[p as usize - 1] = cycle[(k + 1) % cycle.len()];
        }
    }
    Ok(from_images(&img))
}

/// Parses `"(1 2 3)(4 5)"`, `"()"` or `"1,2"`-style separators inside cycles.
pub fn parse_cycles(text: &str) -> Result<Code> {
    let mut cycles = Vec::new();
    let mut rest = text.trim();
    while !rest.is_empty() {
        let open = rest
            .strip_prefix('(')
            .ok_or_else(|| Error::Parse(format!("expected '(' in {text:?}")))?;
        let close = open
            .find(')')
            .ok_or_else(|| Error::Parse(format!("unclosed cycle in {text:?}")))?;
        let body = &open[..close];
        let cycle: Vec<i32> = body
            .split(|c: char| c.is_whitespace() || c == ',')
            .filter(|s| !s.is_empty())
            .map(|s| {
                s.parse::<i32>()
                    .map_err(|_| Error::Parse(format!("bad point {s:?} in {text:?}")))
            })
            .collect::<Result<_>>()?;
        if !cycle.is_empty() {
            cycles.push(cycle);
        }
        rest = open[close + 1..].trim_start();
    }
    from_cycles(&cycles)
}

pub fn cycle_string(code: &[i32]) -> String {
    let n = code.len();
    let mut seen = vec![false; n + 1];
    let mut out = String::new();
    for start in 1..=n as i32 {
        if seen[start as usize] || image(code, start) == start {
            continue;
        }
        out.push('(');
        let mut p = start;
        let mut first = true;
        while !seen[p as usize] {
            seen[p as usize] = true;
            if !first {
                out.push(' ');
            }
            out.push_str(&p.to_string());
            first = false;
            p = image(code, p);
        }
        out.push(')');
    }
    if out.is_empty() {
        out.push_str("()");
    }
    out
}

/// Largest moved point of a permutation code.
pub fn degree(code: &[i32]) -> u32 {
    code.len() as u32
}

impl FinitaryPermutations {
    fn all_of_degree(n: u32) -> Vec<Code> {
        let mut out = Vec::new();
        let mut current: Vec<i32> = (1..=n as i32).collect();
        permute(&mut current, 0, &mut out);
        out
    }
}

fn permute(v: &mut Vec<i32>, k: usize, out: &mut Vec<Code>) {
    if k == v.len() {
        out.push(from_images(v));
        return;
    }
    for i in k..v.len() {
        v.swap(k, i);
        permute(v, k + 1, out);
        v.swap(k, i);
    }
}

impl GroupOracle for FinitaryPermutations {
    fn describe(&self) -> String {
        match self.support_bound {
            Some(n) => format!("S_{n}"),
            None => "S_fin(N+)".to_string(),
        }
    }

    fn identity(&self) -> Code {
        Code::new()
    }

    fn multiply(&self, a: &[i32], b: &[i32]) -> Code {
        let n = a.len().max(b.len());
        let v: Code = (1..=n as i32).map(|i| image(b, image(a, i))).collect();
        trim(v)
    }

    fn invert(&self, a: &[i32]) -> Code {
        let mut v: Code = Code::from_elem(0, a.len());
        for (k, &p) in a.iter().enumerate() {
            v[p as usize - 1] = k as i32 + 1;
        }
        v
    }

    fn order(&self) -> Option<u64> {
        let n = self.support_bound?;
        (1..=u64::from(n)).try_fold(1u64, |acc, k| acc.checked_mul(k))
    }

    fn elements(&self) -> Option<Vec<Code>> {
        match self.support_bound {
            Some(n) if n <= 8 => Some(Self::all_of_degree(n)),
            _ => None,
        }
    }

    fn random(&self, rng: &mut dyn RngCore) -> Code {
        let d = match self.support_bound {
            Some(n) => n,
            None => rng.gen_range(1..=RANDOM_DEGREE),
        };
        let mut v: Vec<i32> = (1..=d as i32).collect();
        v.shuffle(rng);
        from_images(&v)
    }

    fn parse(&self, value: &Value) -> Result<Code> {
        let code = match value {
            Value::String(s) => parse_cycles(s)?,
            Value::Array(items) => {
                let images: Vec<i32> = items
                    .iter()
                    .map(|v| v.as_i64().map(|x| x as i32))
                    .collect::<Option<_>>()
                    .ok_or_else(|| Error::Parse(format!("expected image list, got {value}")))?;
                let mut sorted = images.clone();
                sorted.sort_unstable();
                if sorted != (1..=images.len() as i32).collect::<Vec<_>>() {
                    return Err(Error::Parse(format!("{value} is not a permutation")));
                }
                from_images(&images)
            }
            _ => return Err(Error::Parse(format!("expected cycle notation, got {value}"))),
        };
        if let Some(n) = self.support_bound {
            if degree(&code) > n {
                return Err(Error::Parse(format!("{} moves points beyond {n}", cycle_string(&code))));
            }
        }
        Ok(code)
    }

    fn render(&self, code: &[i32]) -> Value {
        Value::String(cycle_string(code))
    }

    fn display(&self, code: &[i32]) -> String {
        cycle_string(code)
    }

    fn truncation_generators(&self, level: usize) -> Option<Vec<Code>> {
        let n = level as u32 + 2;
        match self.support_bound {
            Some(b) if b < 2 => return (level == 0).then(Vec::new),
            Some(b) if n > b => return None,
            _ => {}
        }
        let transposition = from_images(&[2, 1]);
        let mut cycle: Vec<i32> = (2..=n as i32).collect();
        cycle.push(1);
        Some(vec![transposition, from_images(&cycle)])
    }
}
