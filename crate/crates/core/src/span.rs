//! Orders of subgroups of restricted direct sums `Z_m^(I)`.
//!
//! A subgroup generated by finitely many sparse vectors lives in finitely
//! many coordinates; lifting to the lattice `L = span + mZ^c` gives
//! `|span| = m^c / [Z^c : L]`. The triangular form below is computed with all
//! arithmetic reduced mod `m`, which is sound because `m·e_j ∈ L` for every `j`.

use std::collections::BTreeSet;

/// A sparse vector over `Z_m`: `(coordinate, value)` with values in `1..m`.
pub type SparseVector = Vec<(i64, u32)>;

fn ext_gcd(a: i64, b: i64) -> (i64, i64, i64) {
    if b == 0 {
        (a, 1, 0)
    } else {
        let (g, x, y) = ext_gcd(b, a % b);
        (g, y, x - (a / b) * y)
    }
}

fn reduce(v: i64, m: i64) -> i64 {
    v.rem_euclid(m)
}

/// Echelon basis of a submodule of `Z_m^c`, rows keyed by pivot column.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SpanBasis {
    modulus: u32,
    columns: Vec<i64>,
    /// `(pivot column position, row, gcd of pivot entry with m)`.
    pivots: Vec<(usize, Vec<i64>, i64)>,
}

impl SpanBasis {
    pub fn new(modulus: u32, generators: &[SparseVector]) -> Self {
        assert!(modulus >= 2, "modulus must be at least 2");
        let columns: Vec<i64> = generators
            .iter()
            .flat_map(|v| v.iter().map(|&(i, _)| i))
            .collect::<BTreeSet<_>>()
            .into_iter()
            .collect();
        let m = i64::from(modulus);
        let rows: Vec<Vec<i64>> = generators
            .iter()
            .map(|v| {
                let mut row = vec![0i64; columns.len()];
                for &(i, value) in v {
                    let pos = columns.binary_search(&i).expect("column collected above");
                    row[pos] = reduce(row[pos] + i64::from(value), m);
                }
                row
            })
            .filter(|row| row.iter().any(|&x| x != 0))
            .collect();
        let pivots = echelon(m, rows, columns.len());
        SpanBasis {
            modulus,
            columns,
            pivots,
        }
    }

    pub fn modulus(&self) -> u32 {
        self.modulus
    }

    /// Number of elements of the generated subgroup.
    pub fn order(&self) -> u128 {
        let m = i64::from(self.modulus);
        self.pivots.iter().map(|&(_, _, d)| (m / d) as u128).product()
    }

    /// Basis rows as sparse vectors; they generate the same subgroup.
    pub fn rows(&self) -> Vec<SparseVector> {
        self.pivots
            .iter()
            .map(|(_, row, _)| {
                row.iter()
                    .enumerate()
                    .filter(|(_, &x)| x != 0)
                    .map(|(k, &x)| (self.columns[k], x as u32))
                    .collect()
            })
            .collect()
    }
}

fn echelon(m: i64, mut pending: Vec<Vec<i64>>, ncols: usize) -> Vec<(usize, Vec<i64>, i64)> {
    let mut pivots = Vec::new();
    for j in 0..ncols {
        let mut pivot: Option<Vec<i64>> = None;
        let mut rest: Vec<Vec<i64>> = Vec::with_capacity(pending.len());
        for row in pending.drain(..) {
            if row[j] == 0 {
                rest.push(row);
                continue;
            }
            match pivot.take() {
                None => pivot = Some(row),
                Some(p) => {
                    // Unimodular 2x2 step [[s, t], [-b, a]] clearing column j of `row`.
                    let (g, s, t) = ext_gcd(p[j], row[j]);
                    let a = p[j] / g;
                    let b = row[j] / g;
                    let merged: Vec<i64> = p.iter().zip(&row).map(|(&x, &y)| reduce(s * x + t * y, m)).collect();
                    let cleared: Vec<i64> = p.iter().zip(&row).map(|(&x, &y)| reduce(a * y - b * x, m)).collect();
                    debug_assert_eq!(cleared[j], 0);
                    if cleared.iter().any(|&x| x != 0) {
                        rest.push(cleared);
                    }
                    pivot = Some(merged);
                }
            }
        }
        if let Some(p) = pivot {
            // Fold in the implicit row m·e_j: the pivot entry becomes gcd(p_j, m),
            // and (m/d)·p moves on with a zero in column j.
            let (d, s, _) = ext_gcd(p[j], m);
            let scaled: Vec<i64> = p.iter().map(|&x| reduce(s * x, m)).collect();
            let carried: Vec<i64> = p.iter().map(|&x| reduce((m / d) * x, m)).collect();
            debug_assert_eq!(carried[j], 0);
            if carried.iter().any(|&x| x != 0) {
                rest.push(carried);
            }
            pivots.push((j, scaled, d));
        }
        pending = rest;
    }
    pivots
}
