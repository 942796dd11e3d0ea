//! Permutable pairs of finite subgroups, evidence for membership in the
//! family of finite subgroups permuting with every finite subgroup, subgroup
//! enumeration of small groups, and the finitary symmetric group witness.

use rustc_hash::{FxHashMap, FxHashSet};
use schemars::JsonSchema;
use serde::{Deserialize, Serialize};

use crate::element::Code;
use crate::error::{Error, Result};
use crate::group::AmbientGroup;
use crate::groups::perm;
use crate::kernel;
use crate::set::{generate_from_codes, multiply_sets, FiniteSubgroup, FiniteSubset};

/// Largest group whose subgroups `subgroup_enumerate` will list.
pub const ENUMERATION_CAP: usize = 4096;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize, JsonSchema)]
pub struct PermutabilityReport {
    pub f_order: usize,
    pub e_order: usize,
    pub permutes: bool,
    /// `|FE|`.
    pub product_size: usize,
    /// `|EF|`.
    pub reverse_size: usize,
    /// An element of `FE \ EF` (or of `EF \ FE`), rendered.
    pub witness: Option<String>,
}

/// Compares `FE` and `EF` as sets.
pub fn sets_permute(f: &FiniteSubgroup, e: &FiniteSubgroup) -> Result<PermutabilityReport> {
    let fe = multiply_sets(f.as_set(), e.as_set())?;
    let ef = multiply_sets(e.as_set(), f.as_set())?;
    let permutes = fe == ef;
    let witness = if permutes {
        None
    } else {
        fe.codes()
            .iter()
            .find(|c| !ef.contains(c))
            .or_else(|| ef.codes().iter().find(|c| !fe.contains(c)))
            .map(|c| f.group().display(c))
    };
    Ok(PermutabilityReport {
        f_order: f.order(),
        e_order: e.order(),
        permutes,
        product_size: fe.len(),
        reverse_size: ef.len(),
        witness,
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize, JsonSchema)]
#[serde(rename_all = "snake_case")]
pub enum FcCertification {
    /// Tested against every subgroup of a finite group or truncation.
    ExhaustiveTruncation,
    /// Tested against a partial list.
    Sampled,
    /// Normal subgroups permute with every subgroup.
    Structural,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize, JsonSchema)]
pub struct FcFamilyEvidence {
    pub member_order: usize,
    pub tested_against: usize,
    pub all_permuted: bool,
    /// Positions in the test family of subgroups that do not permute with the member.
    pub failures: Vec<usize>,
    pub certification: FcCertification,
}

/// Tests `member` against every subgroup in `test_family`. Pass
/// `exhaustive = true` only when the family lists all subgroups of a finite
/// group containing `member` (as `subgroup_enumerate` does).
pub fn fc_member_test(
    member: &FiniteSubgroup,
    test_family: &[FiniteSubgroup],
    exhaustive: bool,
) -> Result<FcFamilyEvidence> {
    let reports = kernel::map_collect(test_family, |e| sets_permute(member, e))
        .into_iter()
        .collect::<Result<Vec<_>>>()?;
    let failures: Vec<usize> = reports
        .iter()
        .enumerate()
        .filter(|(_, r)| !r.permutes)
        .map(|(i, _)| i)
        .collect();
    Ok(FcFamilyEvidence {
        member_order: member.order(),
        tested_against: test_family.len(),
        all_permuted: failures.is_empty(),
        failures,
        certification: if exhaustive {
            FcCertification::ExhaustiveTruncation
        } else {
            FcCertification::Sampled
        },
    })
}

/// Evidence from normality alone: `gFg⁻¹ = F` for every listed `g` (all of
/// `G` when finite, otherwise the supplied generators of `G`).
pub fn fc_member_structural(member: &FiniteSubgroup, conjugators: &[Code]) -> Option<FcFamilyEvidence> {
    let g = member.group();
    let normal = conjugators.iter().all(|x| {
        member
            .as_set()
            .codes()
            .iter()
            .all(|h| member.contains(&g.conjugate(x, h)))
    });
    normal.then(|| FcFamilyEvidence {
        member_order: member.order(),
        tested_against: 0,
        all_permuted: true,
        failures: Vec::new(),
        certification: FcCertification::Structural,
    })
}

/// Dense multiplication table of a small finite group.
struct Table {
    n: usize,
    elements: Vec<Code>,
    mul: Vec<u16>,
    identity: usize,
}

impl Table {
    fn new(group: &AmbientGroup, cap: usize) -> Result<Self> {
        let order = group
            .order()
            .ok_or_else(|| Error::Unsupported(format!("{} is not a finite group", group.describe())))?;
        if order as usize > cap.min(ENUMERATION_CAP) {
            return Err(Error::budget("subgroup enumeration", cap.min(ENUMERATION_CAP)));
        }
        let elements = group
            .elements()
            .ok_or_else(|| Error::Unsupported(format!("elements of {} cannot be listed", group.describe())))?;
        let index: FxHashMap<&Code, u16> = elements.iter().enumerate().map(|(i, c)| (c, i as u16)).collect();
        let n = elements.len();
        let rows: Vec<Vec<u16>> = kernel::map_collect(&elements, |a| {
            elements.iter().map(|b| index[&group.mul(a, b)]).collect()
        });
        let identity = index[&group.identity_code()] as usize;
        Ok(Table {
            n,
            mul: rows.concat(),
            elements,
            identity,
        })
    }

    fn closure(&self, gens: &[usize]) -> Vec<u64> {
        let mut bits = vec![0u64; self.n.div_ceil(64)];
        let mut stack = vec![self.identity];
        bits[self.identity / 64] |= 1 << (self.identity % 64);
        while let Some(a) = stack.pop() {
            for &g in gens {
                let p = self.mul[a * self.n + g] as usize;
                if bits[p / 64] & (1 << (p % 64)) == 0 {
                    bits[p / 64] |= 1 << (p % 64);
                    stack.push(p);
                }
            }
        }
        bits
    }

    fn contains(bits: &[u64], i: usize) -> bool {
        bits[i / 64] & (1 << (i % 64)) != 0
    }
}

/// Every subgroup of a finite group with at most `order_cap` (≤ 4096)
/// elements, by cyclic extension: each subgroup found is extended by each
/// element outside it. Sorted by order, then by elements.
pub fn subgroup_enumerate(group: &AmbientGroup, order_cap: usize) -> Result<Vec<FiniteSubgroup>> {
    let table = Table::new(group, order_cap)?;
    let trivial = table.closure(&[]);
    let mut seen: FxHashSet<Vec<u64>> = FxHashSet::default();
    seen.insert(trivial.clone());
    let mut found: Vec<(Vec<u64>, Vec<usize>)> = vec![(trivial, Vec::new())];
    let mut frontier = 0;
    while frontier < found.len() {
        let (bits, gens) = found[frontier].clone();
        frontier += 1;
        let extensions: Vec<Option<(Vec<u64>, Vec<usize>)>> = kernel::map_collect(
            &(0..table.n).filter(|&g| !Table::contains(&bits, g)).collect::<Vec<_>>(),
            |&g| {
                let mut more = gens.clone();
                more.push(g);
                let closed = table.closure(&more);
                Some((closed, more))
            },
        );
        for (closed, more) in extensions.into_iter().flatten() {
            if seen.insert(closed.clone()) {
                found.push((closed, more));
            }
        }
    }
    let mut out = found
        .into_iter()
        .map(|(bits, _)| {
            let codes: Vec<Code> = (0..table.n)
                .filter(|&i| Table::contains(&bits, i))
                .map(|i| table.elements[i].clone())
                .collect();
            FiniteSubgroup::from_set(FiniteSubset::new(group, codes)?)
        })
        .collect::<Result<Vec<_>>>()?;
    out.sort_by(|a, b| {
        a.order()
            .cmp(&b.order())
            .then_with(|| a.as_set().codes().cmp(b.as_set().codes()))
    });
    Ok(out)
}

/// `matrix[i][j]` is whether subgroups `i` and `j` permute.
pub fn permutability_matrix(subgroups: &[FiniteSubgroup]) -> Result<Vec<Vec<bool>>> {
    let pairs: Vec<(usize, usize)> = (0..subgroups.len())
        .flat_map(|i| (i + 1..subgroups.len()).map(move |j| (i, j)))
        .collect();
    let results = kernel::map_collect(&pairs, |&(i, j)| {
        sets_permute(&subgroups[i], &subgroups[j]).map(|r| r.permutes)
    })
    .into_iter()
    .collect::<Result<Vec<_>>>()?;
    let mut matrix = vec![vec![true; subgroups.len()]; subgroups.len()];
    for (&(i, j), ok) in pairs.iter().zip(results) {
        matrix[i][j] = ok;
        matrix[j][i] = ok;
    }
    Ok(matrix)
}

/// CSV with a header row of subgroup ids and `1`/`0` cells.
pub fn matrix_csv(matrix: &[Vec<bool>]) -> String {
    let mut out = String::from("id");
    for j in 0..matrix.len() {
        out.push_str(&format!(",{j}"));
    }
    out.push('\n');
    for (i, row) in matrix.iter().enumerate() {
        out.push_str(&i.to_string());
        for &cell in row {
            out.push_str(if cell { ",1" } else { ",0" });
        }
        out.push('\n');
    }
    out
}

/// First pair `(i, j)` with `i < j` that does not permute.
pub fn first_non_permutable(matrix: &[Vec<bool>]) -> Option<(usize, usize)> {
    (0..matrix.len()).find_map(|i| (i + 1..matrix.len()).find(|&j| !matrix[i][j]).map(|j| (i, j)))
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize, JsonSchema)]
pub struct SfinWitness {
    pub n: u32,
    pub m: u32,
    /// `(n m+1)` in cycle notation.
    pub tau: String,
    pub h_order: usize,
    pub hn_size: usize,
    pub nh_size: usize,
    pub permutes: bool,
    /// An element of `NH \ HN`, in cycle notation.
    pub witness: Option<String>,
}

/// With `H = S_m ⊇ S_n` and `N = ⟨(n m+1)⟩`, checks `HN ≠ NH` inside the
/// finitary symmetric group and returns an element of `NH \ HN`, preferring
/// the 3-cycle `(1 n m+1)` or its inverse.
pub fn sfin_noncofinal_witness(n: u32, m: u32) -> Result<SfinWitness> {
    if !(1 < n && n <= m) {
        return Err(Error::usage(format!("need 1 < n <= m, got n = {n}, m = {m}")));
    }
    let group = crate::groups::build_group(&crate::groups::GroupSpec::finitary(None))?;
    let mi = m as i32;
    let mut gens = vec![perm::from_cycles(&[vec![1, 2]])?];
    if m > 2 {
        gens.push(perm::from_cycles(&[(1..=mi).collect()])?);
    }
    let h = generate_from_codes(&group, &gens, 1 << 22)?;
    let tau = perm::from_cycles(&[vec![n as i32, mi + 1]])?;
    let nsub = generate_from_codes(&group, &[tau.clone()], 2)?;
    let hn = multiply_sets(h.as_set(), nsub.as_set())?;
    let nh = multiply_sets(nsub.as_set(), h.as_set())?;
    let c = perm::from_cycles(&[vec![1, n as i32, mi + 1]])?;
    let preferred = [group.inv(&c), c]
        .into_iter()
        .find(|c| nh.contains(c) && !hn.contains(c));
    let witness = preferred
        .or_else(|| nh.codes().iter().find(|c| !hn.contains(c)).cloned())
        .map(|c| perm::cycle_string(&c));
    Ok(SfinWitness {
        n,
        m,
        tau: perm::cycle_string(&tau),
        h_order: h.order(),
        hn_size: hn.len(),
        nh_size: nh.len(),
        permutes: hn == nh,
        witness,
    })
}
