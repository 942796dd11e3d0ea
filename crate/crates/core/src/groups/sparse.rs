//! Arithmetic on flattened sparse vectors `[i0, v0, i1, v1, ...]` over `Z_m`,
//! sorted by index with no zero values.

use crate::element::Code;

pub fn pairs(code: &[i32]) -> impl Iterator<Item = (i32, i32)> + '_ {
    code.chunks_exact(2).map(|p| (p[0], p[1]))
}

/// Canonical code from unsorted pairs; repeated indices are summed.
pub fn from_pairs(mut raw: Vec<(i64, i64)>, m: i32) -> Code {
    raw.sort_unstable_by_key(|p| p.0);
    let mut out = Code::new();
    let mut i = 0;
    while i < raw.len() {
        let idx = raw[i].0;
        let mut total = 0i64;
        while i < raw.len() && raw[i].0 == idx {
            total += raw[i].1;
            i += 1;
        }
        let v = total.rem_euclid(i64::from(m)) as i32;
        if v != 0 {
            out.push(idx as i32);
            out.push(v);
        }
    }
    out
}

/// `a + b`, with `b`'s indices moved by `offset` and its values scaled by `scale`.
pub fn add_shifted_scaled(a: &[i32], b: &[i32], offset: i32, scale: i32, m: i32) -> Code {
    let mut out = Code::with_capacity(a.len() + b.len());
    let mut ia = pairs(a).peekable();
    let mut ib = pairs(b)
        .map(|(i, v)| (i + offset, (v as i64 * scale as i64).rem_euclid(m as i64) as i32))
        .filter(|&(_, v)| v != 0)
        .peekable();
    loop {
        match (ia.peek().copied(), ib.peek().copied()) {
            (Some((i, v)), Some((j, w))) => {
                if i < j {
                    out.extend([i, v]);
                    ia.next();
                } else if j < i {
                    out.extend([j, w]);
                    ib.next();
                } else {
                    let s = (v + w) % m;
                    if s != 0 {
                        out.extend([i, s]);
                    }
                    ia.next();
                    ib.next();
                }
            }
            (Some((i, v)), None) => {
                out.extend([i, v]);
                ia.next();
            }
            (None, Some((j, w))) => {
                out.extend([j, w]);
                ib.next();
            }
            (None, None) => break,
        }
    }
    out
}

pub fn add(a: &[i32], b: &[i32], m: i32) -> Code {
    add_shifted_scaled(a, b, 0, 1, m)
}

pub fn scale(a: &[i32], c: i64, m: i32) -> Code {
    let mut out = Code::with_capacity(a.len());
    for (i, v) in pairs(a) {
        let w = (v as i64 * c).rem_euclid(m as i64) as i32;
        if w != 0 {
            out.extend([i, w]);
        }
    }
    out
}

pub fn neg(a: &[i32], m: i32) -> Code {
    scale(a, -1, m)
}

/// Moves every index by `offset`, dropping coordinates rejected by `keep`.
pub fn shift(a: &[i32], offset: i32, keep: impl Fn(i32) -> bool) -> Code {
    let mut out = Code::with_capacity(a.len());
    for (i, v) in pairs(a) {
        let j = i + offset;
        if keep(j) {
            out.extend([j, v]);
        }
    }
    out
}

pub fn render(code: &[i32]) -> serde_json::Value {
    serde_json::Value::Array(pairs(code).map(|(i, v)| serde_json::json!([i, v])).collect())
}

/// Reads `[[i, v], ...]` or `{"i": v, ...}`.
pub fn parse(value: &serde_json::Value, m: i32) -> Option<Code> {
    let mut raw = Vec::new();
    match value {
        serde_json::Value::Array(items) => {
            for item in items {
                let pair = item.as_array()?;
                if pair.len() != 2 {
                    return None;
                }
                raw.push((pair[0].as_i64()?, pair[1].as_i64()?));
            }
        }
        serde_json::Value::Object(map) => {
            for (k, v) in map {
                raw.push((k.parse().ok()?, v.as_i64()?));
            }
        }
        _ => return None,
    }
    Some(from_pairs(raw, m))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn merge_cancels_and_sorts() {
        let a = from_pairs(vec![(3, 2), (0, 1)], 3);
        let b = from_pairs(vec![(3, 1), (1, 1)], 3);
        assert_eq!(add(&a, &b, 3).as_slice(), &[0, 1, 1, 1]);
    }

    #[test]
    fn shift_and_scale() {
        let a = from_pairs(vec![(0, 1), (2, 2)], 4);
        assert_eq!(shift(&a, 1, |i| i < 3).as_slice(), &[1, 1]);
        assert_eq!(scale(&a, 2, 4).as_slice(), &[0, 2]);
        assert_eq!(add_shifted_scaled(&[], &a, -1, 3, 4).as_slice(), &[-1, 3, 1, 2]);
    }
}
