//! Finite subsets and subgroups of an ambient group, and the counting
//! functions `ell(X) = log|X|` and `ell(X, B) = log [XB : B]`.

use std::fmt;
use std::sync::Arc;

use rustc_hash::FxHashSet;

use crate::element::{Code, Element};
use crate::error::{Error, Result};
use crate::group::AmbientGroup;
use crate::kernel;

/// Default element budget for closures and products.
pub const DEFAULT_MAX_SIZE: usize = 1 << 20;

/// Subgroups up to this order fingerprint a coset by its full sorted element
/// list; larger ones use the least element of the coset.
pub const SORTED_COSET_LIMIT: usize = 4096;

/// A non-empty, duplicate-free finite set of elements of one group.
///
/// Codes are kept sorted, so equality of sets is equality of the vectors.
#[derive(Clone)]
pub struct FiniteSubset {
    group: AmbientGroup,
    codes: Arc<[Code]>,
}

impl fmt::Debug for FiniteSubset {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let shown: Vec<String> = self.codes.iter().take(16).map(|c| self.group.display(c)).collect();
        f.debug_struct("FiniteSubset")
            .field("len", &self.codes.len())
            .field("elements", &shown)
            .finish()
    }
}

impl PartialEq for FiniteSubset {
    fn eq(&self, other: &Self) -> bool {
        self.group.same_group(&other.group) && self.codes == other.codes
    }
}

impl Eq for FiniteSubset {}

impl FiniteSubset {
    pub fn new(group: &AmbientGroup, codes: impl IntoIterator<Item = Code>) -> Result<Self> {
        let mut v: Vec<Code> = codes.into_iter().collect();
        if v.is_empty() {
            return Err(Error::usage("finite subsets must be non-empty"));
        }
        v.sort_unstable();
        v.dedup();
        Ok(Self::from_sorted(group, v))
    }

    pub fn from_elements(group: &AmbientGroup, elements: &[Element]) -> Result<Self> {
        if let Some(e) = elements.iter().find(|e| e.tag != group.tag()) {
            return Err(Error::usage(format!(
                "element tagged {} does not belong to group {}",
                e.tag,
                group.tag()
            )));
        }
        Self::new(group, elements.iter().map(|e| e.code.clone()))
    }

    /// Caller guarantees `codes` is sorted, deduplicated and non-empty.
    pub(crate) fn from_sorted(group: &AmbientGroup, codes: Vec<Code>) -> Self {
        debug_assert!(!codes.is_empty());
        debug_assert!(codes.windows(2).all(|w| w[0] < w[1]));
        FiniteSubset {
            group: group.clone(),
            codes: codes.into(),
        }
    }

    pub fn identity(group: &AmbientGroup) -> Self {
        Self::from_sorted(group, vec![group.identity_code()])
    }

    pub fn group(&self) -> &AmbientGroup {
        &self.group
    }

    pub fn len(&self) -> usize {
        self.codes.len()
    }

    /// Always false; present for API symmetry with collections.
    pub fn is_empty(&self) -> bool {
        self.codes.is_empty()
    }

    pub fn codes(&self) -> &[Code] {
        &self.codes
    }

    pub fn elements(&self) -> Vec<Element> {
        self.codes.iter().map(|c| self.group.element(c.clone())).collect()
    }

    pub fn contains(&self, code: &[i32]) -> bool {
        self.codes.binary_search_by(|c| c.as_slice().cmp(code)).is_ok()
    }

    pub fn contains_identity(&self) -> bool {
        self.contains(&self.group.identity_code())
    }

    /// The set with the identity adjoined, and whether it had to be added.
    pub fn with_identity(&self) -> (FiniteSubset, bool) {
        if self.contains_identity() {
            (self.clone(), false)
        } else {
            let mut v = self.codes.to_vec();
            v.push(self.group.identity_code());
            v.sort_unstable();
            (Self::from_sorted(&self.group, v), true)
        }
    }

    pub fn is_subset_of(&self, other: &FiniteSubset) -> bool {
        self.group.same_group(&other.group) && self.codes.iter().all(|c| other.contains(c))
    }

    pub fn union(&self, other: &FiniteSubset) -> Result<FiniteSubset> {
        same_group(self, other)?;
        FiniteSubset::new(&self.group, self.codes.iter().chain(other.codes.iter()).cloned())
    }

    /// Elements satisfying `keep`, or `None` when nothing survives.
    pub fn filter(&self, keep: impl Fn(&[i32]) -> bool) -> Option<FiniteSubset> {
        let v: Vec<Code> = self.codes.iter().filter(|c| keep(c)).cloned().collect();
        if v.is_empty() {
            None
        } else {
            Some(Self::from_sorted(&self.group, v))
        }
    }

    /// Image under `f` inside `target`.
    pub fn map_into<F>(&self, target: &AmbientGroup, f: F) -> FiniteSubset
    where
        F: Fn(&[i32]) -> Code + Sync + Send,
    {
        Self::from_sorted(target, kernel::image(&self.codes, f))
    }

    pub fn display(&self) -> Vec<String> {
        self.codes.iter().map(|c| self.group.display(c)).collect()
    }
}

/// A finite subset that is (or claims to be) a subgroup.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FiniteSubgroup {
    set: FiniteSubset,
    verified_closed: bool,
    generators: Vec<Code>,
}

impl FiniteSubgroup {
    /// Verifies closure and keeps the set if it is a subgroup.
    pub fn from_set(set: FiniteSubset) -> Result<Self> {
        match generators_within(&set) {
            Some(generators) => Ok(FiniteSubgroup {
                set,
                verified_closed: true,
                generators,
            }),
            None => Err(Error::usage(format!("set of {} elements is not a subgroup", set.len()))),
        }
    }

    /// Wraps a set without checking closure; `ell_rel` rejects it until verified.
    pub fn unverified(set: FiniteSubset) -> Self {
        FiniteSubgroup {
            set,
            verified_closed: false,
            generators: Vec::new(),
        }
    }

    pub fn trivial(group: &AmbientGroup) -> Self {
        FiniteSubgroup {
            set: FiniteSubset::identity(group),
            verified_closed: true,
            generators: Vec::new(),
        }
    }

    pub fn as_set(&self) -> &FiniteSubset {
        &self.set
    }

    pub fn into_set(self) -> FiniteSubset {
        self.set
    }

    pub fn order(&self) -> usize {
        self.set.len()
    }

    pub fn group(&self) -> &AmbientGroup {
        self.set.group()
    }

    pub fn verified_closed(&self) -> bool {
        self.verified_closed
    }

    /// A generating set drawn from the subgroup (empty for the trivial group).
    pub fn generators(&self) -> &[Code] {
        &self.generators
    }

    pub fn contains(&self, code: &[i32]) -> bool {
        self.set.contains(code)
    }

    pub fn intersect(&self, other: &FiniteSubgroup) -> Result<FiniteSubgroup> {
        same_group(&self.set, &other.set)?;
        let set = self
            .set
            .filter(|c| other.contains(c))
            .expect("subgroups share the identity");
        FiniteSubgroup::from_set(set)
    }

    pub fn is_subgroup_of(&self, other: &FiniteSubgroup) -> bool {
        self.set.is_subset_of(&other.set)
    }
}

fn same_group(x: &FiniteSubset, y: &FiniteSubset) -> Result<()> {
    if x.group.same_group(&y.group) {
        Ok(())
    } else {
        Err(Error::usage(format!(
            "sets belong to different groups ({} vs {})",
            x.group.tag(),
            y.group.tag()
        )))
    }
}

/// `XY = {xy}` with the default budget.
pub fn multiply_sets(x: &FiniteSubset, y: &FiniteSubset) -> Result<FiniteSubset> {
    multiply_sets_bounded(x, y, DEFAULT_MAX_SIZE)
}

pub fn multiply_sets_bounded(x: &FiniteSubset, y: &FiniteSubset, max: usize) -> Result<FiniteSubset> {
    same_group(x, y)?;
    let codes =
        kernel::product(x.group.oracle(), &x.codes, &y.codes, max).map_err(|_| Error::budget("set product", max))?;
    Ok(FiniteSubset::from_sorted(&x.group, codes))
}

/// `XY` for a subgroup `Y`, built one left coset at a time. The result is
/// wrong if `Y` is not a subgroup.
pub fn multiply_by_subgroup_bounded(x: &FiniteSubset, y: &FiniteSubset, max: usize) -> Result<FiniteSubset> {
    same_group(x, y)?;
    let codes = kernel::product_by_subgroup(x.group.oracle(), &x.codes, &y.codes, max, None)
        .map_err(|_| Error::budget("set product", max))?;
    Ok(FiniteSubset::from_sorted(&x.group, codes))
}

/// Closure of `start` (already closed under `old_gens`) under right
/// multiplication by `old_gens` and `new_gen`. Elements rejected by `allow`
/// abort the closure.
struct Closure {
    members: FxHashSet<Code>,
    gens: Vec<Code>,
}

enum Grow {
    Done,
    Escaped,
    TooBig,
}

impl Closure {
    fn trivial(group: &AmbientGroup) -> Self {
        let mut members = FxHashSet::default();
        members.insert(group.identity_code());
        Closure {
            members,
            gens: Vec::new(),
        }
    }

    fn add_generator(&mut self, group: &AmbientGroup, g: Code, max: usize, allow: &dyn Fn(&[i32]) -> bool) -> Grow {
        if self.members.contains(&g) {
            return Grow::Done;
        }
        self.gens.push(g.clone());
        // Old members are already closed under the old generators; only the new one applies.
        let mut queue: Vec<Code> = Vec::new();
        let mut fresh: Vec<Code> = Vec::new();
        for h in self.members.iter() {
            fresh.push(group.mul(h, &g));
        }
        for p in fresh {
            if !self.members.contains(&p) {
                if !allow(&p) {
                    return Grow::Escaped;
                }
                self.members.insert(p.clone());
                queue.push(p);
            }
        }
        while let Some(e) = queue.pop() {
            if self.members.len() > max {
                return Grow::TooBig;
            }
            for s in &self.gens {
                let p = group.mul(&e, s);
                if !self.members.contains(&p) {
                    if !allow(&p) {
                        return Grow::Escaped;
                    }
                    self.members.insert(p.clone());
                    queue.push(p);
                }
            }
        }
        if self.members.len() > max {
            Grow::TooBig
        } else {
            Grow::Done
        }
    }
}

/// Smallest subgroup containing `s`.
///
/// Closure under right multiplication suffices because every element of a
/// finite subgroup has finite order.
pub fn subgroup_generate(s: &FiniteSubset, max_size: usize) -> Result<FiniteSubgroup> {
    let group = s.group();
    let mut closure = Closure::trivial(group);
    for g in s.codes() {
        match closure.add_generator(group, g.clone(), max_size, &|_| true) {
            Grow::Done => {}
            Grow::TooBig | Grow::Escaped => {
                return Err(Error::budget("subgroup closure", max_size));
            }
        }
    }
    let generators = closure.gens.clone();
    let set = FiniteSubset::new(group, closure.members)?;
    Ok(FiniteSubgroup {
        set,
        verified_closed: true,
        generators,
    })
}

/// Generators from `codes` (in `group`) closed up to a subgroup, with budget.
pub fn generate_from_codes(group: &AmbientGroup, codes: &[Code], max_size: usize) -> Result<FiniteSubgroup> {
    if codes.is_empty() {
        return Ok(FiniteSubgroup::trivial(group));
    }
    subgroup_generate(&FiniteSubset::new(group, codes.iter().cloned())?, max_size)
}

/// Greedy generating set of `x` when `x` is a subgroup.
///
/// Each generator not yet covered at least doubles the closure, so at most
/// `log2 |x|` closures run, and any element escaping `x` stops the search.
fn generators_within(x: &FiniteSubset) -> Option<Vec<Code>> {
    let group = x.group();
    if !x.contains_identity() {
        return None;
    }
    let mut closure = Closure::trivial(group);
    for c in x.codes() {
        match closure.add_generator(group, c.clone(), x.len(), &|p| x.contains(p)) {
            Grow::Done => {}
            Grow::Escaped | Grow::TooBig => return None,
        }
    }
    Some(closure.gens)
}

/// True iff `x` contains the identity and is closed under products and inverses.
pub fn is_subgroup(x: &FiniteSubset) -> bool {
    generators_within(x).is_some()
}

/// Subgroup test when `gens` is known to generate a group containing `x`
/// and `gens` lies inside `x`: then `x` is a subgroup iff `1 ∈ x` and
/// `x·g ⊆ x` for each generator.
pub fn is_subgroup_with_generators(x: &FiniteSubset, gens: &[Code]) -> bool {
    if !x.contains_identity() || !gens.iter().all(|g| x.contains(g)) {
        return false;
    }
    let group = x.group();
    let closed = |c: &Code| gens.iter().all(|g| x.contains(&group.mul(c, g)));
    #[cfg(feature = "parallel")]
    {
        use rayon::prelude::*;
        x.codes().par_iter().all(closed)
    }
    #[cfg(not(feature = "parallel"))]
    {
        x.codes().iter().all(closed)
    }
}

/// A pair `(a, b)` of members of `x` whose product leaves `x`, if any.
pub fn closure_witness(x: &FiniteSubset, gens: &[Code]) -> Option<(Code, Code)> {
    let group = x.group();
    for c in x.codes() {
        for g in gens.iter().filter(|g| x.contains(g)) {
            let p = group.mul(c, g);
            if !x.contains(&p) {
                return Some((c.clone(), g.clone()));
            }
        }
    }
    let codes = x.codes();
    for a in codes {
        for b in codes {
            if !x.contains(&group.mul(a, b)) {
                return Some((a.clone(), b.clone()));
            }
        }
    }
    None
}

/// `log |X|` in nats.
pub fn ell(x: &FiniteSubset) -> f64 {
    (x.len() as f64).ln()
}

/// Number of distinct left cosets `xB` with `x ∈ X`, i.e. `[XB : B]`.
pub fn coset_count(x: &FiniteSubset, b: &FiniteSubgroup) -> Result<usize> {
    same_group(x, b.as_set())?;
    if !b.verified_closed {
        return Err(Error::usage("ell_rel requires a verified subgroup"));
    }
    let group = x.group();
    let bcodes = b.as_set().codes();
    if bcodes.len() == 1 {
        return Ok(x.len());
    }
    if bcodes.len() <= SORTED_COSET_LIMIT {
        let key = |c: &Code| -> Vec<Code> {
            let mut coset: Vec<Code> = bcodes.iter().map(|h| group.mul(c, h)).collect();
            coset.sort_unstable();
            coset
        };
        Ok(distinct(x.codes(), key))
    } else {
        let key = |c: &Code| -> Code {
            bcodes
                .iter()
                .map(|h| group.mul(c, h))
                .min()
                .expect("subgroup is non-empty")
        };
        Ok(distinct(x.codes(), key))
    }
}

fn distinct<K, F>(codes: &[Code], key: F) -> usize
where
    K: Eq + std::hash::Hash + Send,
    F: Fn(&Code) -> K + Sync + Send,
{
    #[cfg(feature = "parallel")]
    {
        use rayon::prelude::*;
        let set: FxHashSet<K> = codes.par_iter().map(key).collect();
        set.len()
    }
    #[cfg(not(feature = "parallel"))]
    {
        let set: FxHashSet<K> = codes.iter().map(key).collect();
        set.len()
    }
}

/// `log [XB : B]` in nats.
pub fn ell_rel(x: &FiniteSubset, b: &FiniteSubgroup) -> Result<f64> {
    Ok((coset_count(x, b)? as f64).ln())
}
