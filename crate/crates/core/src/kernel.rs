//! Set-product and image kernels shared by every higher-level operation.
//!
//! Both kernels deduplicate through hash sets and return sorted codes, so the
//! parallel and sequential paths produce identical output.

use rustc_hash::FxHashSet;

use crate::element::Code;
use crate::group::GroupOracle;

/// The product set grew past the caller's limit.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Overflow;

fn finish(set: FxHashSet<Code>) -> Vec<Code> {
    let mut out: Vec<Code> = set.into_iter().collect();
    #[cfg(feature = "parallel")]
    {
        use rayon::slice::ParallelSliceMut;
        out.par_sort_unstable();
    }
    #[cfg(not(feature = "parallel"))]
    out.sort_unstable();
    out
}

/// `{x*y | x in xs, y in ys}` on a single thread.
pub fn product_sequential(
    group: &dyn GroupOracle,
    xs: &[Code],
    ys: &[Code],
    max: usize,
) -> Result<Vec<Code>, Overflow> {
    let mut set = FxHashSet::default();
    for x in xs {
        for y in ys {
            set.insert(group.multiply(x, y));
        }
        if set.len() > max {
            return Err(Overflow);
        }
    }
    Ok(finish(set))
}

/// `{x*y | x in xs, y in ys}` split over the rayon pool by rows of `xs`.
#[cfg(feature = "parallel")]
pub fn product_parallel(group: &dyn GroupOracle, xs: &[Code], ys: &[Code], max: usize) -> Result<Vec<Code>, Overflow> {
    use rayon::prelude::*;

    let set = xs
        .par_iter()
        .try_fold(FxHashSet::default, |mut acc, x| {
            for y in ys {
                acc.insert(group.multiply(x, y));
            }
            if acc.len() > max {
                Err(Overflow)
            } else {
                Ok(acc)
            }
        })
        .try_reduce(FxHashSet::default, |mut a, mut b| {
            if a.len() < b.len() {
                std::mem::swap(&mut a, &mut b);
            }
            a.extend(b);
            if a.len() > max {
                Err(Overflow)
            } else {
                Ok(a)
            }
        })?;
    Ok(finish(set))
}

/// Dispatches to the parallel kernel when the `parallel` feature is on.
pub fn product(group: &dyn GroupOracle, xs: &[Code], ys: &[Code], max: usize) -> Result<Vec<Code>, Overflow> {
    // Small products do not amortize the pool handoff.
    #[cfg(feature = "parallel")]
    if xs.len().saturating_mul(ys.len()) >= 4096 {
        return product_parallel(group, xs, ys, max);
    }
    product_sequential(group, xs, ys, max)
}

/// `{canon(x*y)}` when `ys` is a subgroup (or a set of coset representatives
/// of one, with `canon` picking representatives) and every `x` is already
/// canonical. Each left coset `x·ys` is added once, so the cost is linear in
/// the output rather than in `|xs|·|ys|`.
pub fn product_by_subgroup(
    group: &dyn GroupOracle,
    xs: &[Code],
    ys: &[Code],
    max: usize,
    canon: Option<&(dyn Fn(&[i32]) -> Code + Sync)>,
) -> Result<Vec<Code>, Overflow> {
    let mut set: FxHashSet<Code> = FxHashSet::default();
    for x in xs {
        if set.contains(x) {
            continue;
        }
        for y in ys {
            let p = group.multiply(x, y);
            set.insert(match canon {
                Some(c) => c(&p),
                None => p,
            });
        }
        if set.len() > max {
            return Err(Overflow);
        }
    }
    Ok(finish(set))
}

/// Sorted, deduplicated image of `xs` under `f`.
pub fn image<F>(xs: &[Code], f: F) -> Vec<Code>
where
    F: Fn(&[i32]) -> Code + Sync + Send,
{
    #[cfg(feature = "parallel")]
    if xs.len() >= 4096 {
        use rayon::prelude::*;
        let set: FxHashSet<Code> = xs.par_iter().map(|x| f(x)).collect();
        return finish(set);
    }
    let set: FxHashSet<Code> = xs.iter().map(|x| f(x)).collect();
    finish(set)
}

/// Runs `f` over `items`, in parallel when the feature is enabled; output order matches input order.
pub fn map_collect<T, R, F>(items: &[T], f: F) -> Vec<R>
where
    T: Sync,
    R: Send,
    F: Fn(&T) -> R + Sync + Send,
{
    #[cfg(feature = "parallel")]
    {
        use rayon::prelude::*;
        items.par_iter().map(f).collect()
    }
    #[cfg(not(feature = "parallel"))]
    {
        items.iter().map(f).collect()
    }
}

/// Runs two closures, concurrently when the feature is enabled.
pub fn join<A, B, RA, RB>(a: A, b: B) -> (RA, RB)
where
    A: FnOnce() -> RA + Send,
    B: FnOnce() -> RB + Send,
    RA: Send,
    RB: Send,
{
    #[cfg(feature = "parallel")]
    {
        rayon::join(a, b)
    }
    #[cfg(not(feature = "parallel"))]
    {
        (a(), b())
    }
}
