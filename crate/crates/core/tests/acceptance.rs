//! Acceptance criteria, one PASS/FAIL line each. Exits non-zero on any failure.

use std::collections::{BTreeSet, HashSet};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::sync::OnceLock;
use std::time::{Duration, Instant};

use entropy_core::at::{default_roster, run_at_experiment, run_catalog_suite, SuiteReport, Verdict};
use entropy_core::dynamics::{
    build_endomorphism, images_commute_check, induce_quotient, trajectory_subgroup_check, EndoSpec, Endomorphism,
    NormalSpec, NormalSubgroup, Trajectory,
};
use entropy_core::entropy::{entropy_H, entropy_H_rel, BudgetPolicy, GrowthClass};
use entropy_core::groups::{build_group, catalog, catalog_endomorphisms, finite_subgroup_family, GroupSpec};
use entropy_core::permutability::{
    first_non_permutable, permutability_matrix, sfin_noncofinal_witness, subgroup_enumerate,
};
use entropy_core::set::{coset_count, generate_from_codes, is_subgroup, multiply_sets, FiniteSubgroup};
use entropy_core::{AmbientGroup, Code, FiniteSubset};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::json;

type Outcome = Result<String, String>;

macro_rules! ensure {
    ($cond:expr, $($fmt:tt)+) => {
        if !$cond {
            return Err(format!($($fmt)+));
        }
    };
}

fn within(limit: Duration, start: Instant) -> Result<Duration, String> {
    let took = start.elapsed();
    if took > limit {
        Err(format!("took {took:.2?}, limit {limit:?}"))
    } else {
        Ok(took)
    }
}

fn suite() -> &'static SuiteReport {
    static SUITE: OnceLock<SuiteReport> = OnceLock::new();
    SUITE.get_or_init(|| run_catalog_suite(None).expect("default roster runs"))
}

fn parse(g: &AmbientGroup, v: serde_json::Value) -> Code {
    g.parse(&v).expect("element parses").code
}

/// `|T_k|` for the right shift on `Z_m^(N)` and `X = Z_m e_0`, by enumerating
/// plain coordinate vectors.
fn shift_trajectory_oracle(m: u8, k_max: usize) -> Vec<u128> {
    let mut sizes = vec![1u128];
    let mut current: HashSet<Vec<u8>> = HashSet::from([vec![]]);
    for k in 1..=k_max {
        // T_k = T_{k-1} + Z_m e_{k-1}
        current = current
            .iter()
            .flat_map(|v| {
                (0..m).map(move |a| {
                    let mut w = v.clone();
                    w.resize(k, 0);
                    w[k - 1] = (w[k - 1] + a) % m;
                    w
                })
            })
            .collect();
        sizes.push(current.len() as u128);
    }
    sizes
}

fn criterion_1() -> Outcome {
    let start = Instant::now();
    for m in [2u32, 3, 6] {
        let spec = GroupSpec::dsum(m, None);
        let g = build_group(&spec).unwrap();
        let phi = build_endomorphism(&spec, &g, &EndoSpec::Shift { amount: 1 }).unwrap();
        let x = generate_from_codes(&g, &[parse(&g, json!(1))], 64).unwrap().into_set();
        let est = entropy_H(&phi, &x, &BudgetPolicy::default().with_exponent(4)).map_err(|e| e.to_string())?;
        let target = f64::from(m).ln();
        ensure!(est.sequence.len() == 5, "m={m}: {} sequence points", est.sequence.len());
        for p in &est.sequence {
            ensure!(
                (p.value - target).abs() <= 1e-12,
                "m={m} n={}: {} vs log m",
                p.n,
                p.value
            );
        }
        let exact = est.exact_value().ok_or(format!("m={m}: no exact value"))?;
        ensure!((exact - target).abs() <= 1e-12, "m={m}: exact {exact}");
        // Direct enumeration up to 6^6, the power formula beyond.
        let oracle = shift_trajectory_oracle(m as u8, 6);
        for (k, &s) in est.sizes.iter().enumerate() {
            let expected = u128::from(m).pow(k as u32);
            ensure!(s == expected, "m={m}: |T_{k}| = {s}, expected {expected}");
            if let Some(&o) = oracle.get(k) {
                ensure!(o == s, "m={m}: enumeration oracle {o} vs {s} at k={k}");
            }
        }
    }
    let took = within(Duration::from_secs(5), start)?;
    Ok(format!("m = 2, 3, 6 exact log m through n = 4 in {took:.2?}"))
}

fn criterion_2() -> Outcome {
    let r = suite()
        .reports
        .iter()
        .find(|r| r.label == "z6-shift-mod3")
        .ok_or("roster lacks z6-shift-mod3")?;
    let (g, h, q) = (
        r.h_g.estimate.exact_value().ok_or("h_G not exact")?,
        r.h_h.estimate.exact_value().ok_or("h_H not exact")?,
        r.h_q.estimate.exact_value().ok_or("h_Q not exact")?,
    );
    ensure!((g - 6f64.ln()).abs() <= 1e-12, "h_G = {g}");
    ensure!((h - 2f64.ln()).abs() <= 1e-12, "h_H = {h}");
    ensure!((q - 3f64.ln()).abs() <= 1e-12, "h_Q = {q}");
    ensure!((g - h - q).abs() <= 1e-9, "|h_G - h_H - h_Q| = {}", (g - h - q).abs());
    ensure!(r.verdict == Verdict::AdditivityHoldsExact, "verdict {:?}", r.verdict);
    // Counting oracle: Z_6 = Z_2 x Z_3 per coordinate, so for the member Z_6^j,
    // |T_k| = 6^(j+k-1), |T_k ∩ H| = 2^(j+k-1), |π(T_k)| = 3^(j+k-1).
    for (fam, base) in [(&r.h_g, 6u128), (&r.h_h, 2), (&r.h_q, 3)] {
        for (j, row) in fam.members.iter().enumerate() {
            let j = j as u32 + 1;
            for (k, &s) in row.sizes.iter().enumerate().skip(1) {
                let expected = base.pow(j + k as u32 - 1);
                ensure!(
                    s == expected,
                    "member {j} base {base}: |T_{k}| = {s}, expected {expected}"
                );
            }
        }
    }
    Ok(format!(
        "(log 6, log 2, log 3) exact, discrepancy {:.1e}",
        (g - h - q).abs()
    ))
}

fn criterion_3() -> Outcome {
    let budget = BudgetPolicy::default();
    let mut checked = 0;
    for entry in catalog().into_iter().filter(|e| e.is_locally_finite()) {
        let g = entry.build().unwrap();
        let family = finite_subgroup_family(&entry, 4096).map_err(|e| format!("{}: {e}", entry.name))?;
        let id = Endomorphism::identity(&g);
        // The same map without the identity flag goes through enumeration.
        let plain = Endomorphism::new(&g, "x -> x", |x: &[i32]| Code::from_slice(x));
        for f in &family {
            let ff = multiply_sets(f.as_set(), f.as_set()).unwrap();
            ensure!(&ff == f.as_set(), "{}: F·F ≠ F for |F| = {}", entry.name, f.order());
            for phi in [&id, &plain] {
                let est = entropy_H(phi, f.as_set(), &budget).map_err(|e| e.to_string())?;
                ensure!(
                    est.exact_value() == Some(0.0),
                    "{} |F| = {}: {:?}",
                    entry.name,
                    f.order(),
                    est.exact
                );
                ensure!(
                    est.sizes.iter().skip(1).all(|&s| s == f.order() as u128),
                    "{}: T_n ≠ F",
                    entry.name
                );
            }
            checked += 1;
        }
    }
    Ok(format!("{checked} family members, identity exact 0"))
}

fn random_set(g: &AmbientGroup, rng: &mut ChaCha8Rng, max_len: usize) -> FiniteSubset {
    let n = rng.gen_range(1..=max_len);
    let codes: Vec<Code> = (0..n).map(|_| g.random_code(rng)).collect();
    FiniteSubset::new(g, codes).unwrap()
}

fn criterion_4() -> Outcome {
    let start = Instant::now();
    let entries = catalog();
    let mut rng = ChaCha8Rng::seed_from_u64(0x68a);
    let budget = BudgetPolicy::default().with_exponent(3).with_max_set_size(100_000);
    let mut points = 0;
    for run in 0..100 {
        let entry = &entries[rng.gen_range(0..entries.len())];
        let g = entry.build().unwrap();
        let endos = catalog_endomorphisms(entry);
        let (name, spec) = &endos[rng.gen_range(0..endos.len())];
        let phi = build_endomorphism(&entry.spec, &g, spec).map_err(|e| e.to_string())?;
        let (x, _) = random_set(&g, &mut rng, 3).with_identity();
        let est = entropy_H(&phi, &x, &budget).map_err(|e| e.to_string())?;
        ensure!(est.monotone, "run {run} ({} {name}): library flag", entry.name);
        let powers: Vec<u128> = (0..=3)
            .map(|n| 1usize << n)
            .filter_map(|k| est.sizes.get(k).copied())
            .collect();
        for w in powers.windows(2) {
            ensure!(
                w[1] <= w[0] * w[0],
                "run {run} ({} {name}): sizes {powers:?}",
                entry.name
            );
        }
        for w in est.sequence.windows(2) {
            ensure!(
                w[1].value <= w[0].value + 1e-12,
                "run {run}: sequence rises {:?}",
                est.sequence
            );
        }
        ensure!(
            est.budget_used.largest_size <= 100_000,
            "run {run}: set of {}",
            est.budget_used.largest_size
        );
        points += est.sequence.len();
    }
    let took = within(Duration::from_secs(60), start)?;
    Ok(format!(
        "100 runs, {points} sequence points non-increasing in {took:.2?}"
    ))
}

fn normal_in(g: &AmbientGroup, b: &FiniteSubgroup) -> bool {
    let all = g.elements().expect("finite group");
    all.iter()
        .all(|x| b.generators().iter().all(|h| b.contains(&g.conjugate(x, h))))
}

fn random_subgroup(g: &AmbientGroup, rng: &mut ChaCha8Rng) -> FiniteSubgroup {
    let n = rng.gen_range(0..=2);
    let codes: Vec<Code> = (0..n).map(|_| g.random_code(rng)).collect();
    generate_from_codes(g, &codes, 1 << 16).unwrap()
}

fn criterion_5() -> Outcome {
    let entries: Vec<_> = catalog()
        .into_iter()
        .filter(|e| e.build().unwrap().order().is_some_and(|n| n <= 1458))
        .collect();
    let mut rng = ChaCha8Rng::seed_from_u64(0x63);
    let (mut normal_c, mut normal_d, mut skipped) = (0, 0, 0);
    for pair in 0..200 {
        let entry = &entries[pair % entries.len()];
        let g = entry.build().unwrap();
        let x = random_set(&g, &mut rng, 5);
        let x2 = random_set(&g, &mut rng, 5);
        let b = random_subgroup(&g, &mut rng);
        let b2 = random_subgroup(&g, &mut rng);
        let cc = |s: &FiniteSubset, sub: &FiniteSubgroup| coset_count(s, sub).unwrap() as u128;
        let ctx = format!("pair {pair} in {}", entry.name);

        // (b) as integers: |XB| = [XB:B]·|B|.
        let xb = multiply_sets(&x, b.as_set()).unwrap();
        ensure!(xb.len() as u128 == cc(&x, &b) * b.order() as u128, "{ctx}: (b)");

        // (a) monotone in X, antitone in B.
        let bigger = x.union(&x2).unwrap();
        ensure!(cc(&x, &b) <= cc(&bigger, &b), "{ctx}: (a) in X");
        let small = b.intersect(&b2).unwrap();
        ensure!(cc(&x, &b) <= cc(&x, &small), "{ctx}: (a) in B");

        // (e) for a catalog endomorphism.
        let endos = catalog_endomorphisms(entry);
        let phi = build_endomorphism(&entry.spec, &g, &endos[rng.gen_range(0..endos.len())].1).unwrap();
        let fb = FiniteSubgroup::from_set(phi.image(b.as_set())).unwrap();
        ensure!(cc(&phi.image(&x), &fb) <= cc(&x, &b), "{ctx}: (e)");

        // (c) and (d) count cosets of a quotient group, so they need B (resp. BB') normal.
        let xx2 = multiply_sets(&x, &x2).unwrap();
        if normal_in(&g, &b) {
            ensure!(cc(&xx2, &b) <= cc(&x, &b) * cc(&x2, &b), "{ctx}: (c)");
            normal_c += 1;
        } else {
            skipped += 1;
        }
        let bb2 = multiply_sets(b.as_set(), b2.as_set()).unwrap();
        if is_subgroup(&bb2) {
            let bb2 = FiniteSubgroup::from_set(bb2).unwrap();
            if normal_in(&g, &bb2) {
                ensure!(cc(&xx2, &bb2) <= cc(&x, &b) * cc(&x2, &b2), "{ctx}: (d)");
                normal_d += 1;
            }
        }
    }
    // Without normality (c) fails already in S_3.
    let s3 = build_group(&GroupSpec::symmetric(3)).unwrap();
    let b = generate_from_codes(&s3, &[parse(&s3, json!("(1 2)"))], 8).unwrap();
    let x2 = FiniteSubset::new(&s3, vec![parse(&s3, json!("(1 3)"))]).unwrap();
    let lhs = coset_count(&multiply_sets(b.as_set(), &x2).unwrap(), &b).unwrap();
    let rhs = coset_count(b.as_set(), &b).unwrap() * coset_count(&x2, &b).unwrap();
    ensure!(lhs == 2 && rhs == 1, "S3 non-normal example: {lhs} vs {rhs}");
    Ok(format!(
        "200 pairs: (a), (b), (e) on all; (c) on {normal_c} and (d) on {normal_d} with normal B; \
         {skipped} non-normal B excluded from (c)"
    ))
}

fn criterion_6() -> Outcome {
    let mut checked = 0;
    for name in ["Q8", "H1"] {
        let entry = catalog()
            .into_iter()
            .find(|e| e.name == name)
            .ok_or(format!("no {name}"))?;
        let g = entry.build().unwrap();
        let subgroups = subgroup_enumerate(&g, 4096).map_err(|e| e.to_string())?;
        for (ename, spec) in catalog_endomorphisms(&entry) {
            let phi = build_endomorphism(&entry.spec, &g, &spec).unwrap();
            for f in &subgroups {
                let c = images_commute_check(&phi, f, 6).map_err(|e| e.to_string())?;
                ensure!(
                    c.holds,
                    "{name} {ename} |F| = {}: images do not commute at {:?}",
                    f.order(),
                    c.witness
                );
                let mut t = Trajectory::new(&phi, f.as_set()).unwrap();
                let s = trajectory_subgroup_check(&mut t, 6, 1 << 16).map_err(|e| e.to_string())?;
                ensure!(
                    s.holds,
                    "{name} {ename} |F| = {}: T_{:?} not a subgroup",
                    f.order(),
                    s.first_failure
                );
                checked += 1;
            }
        }
    }
    let spec = GroupSpec::symmetric(3);
    let s3 = build_group(&spec).unwrap();
    let phi = build_endomorphism(&spec, &s3, &EndoSpec::Inner { by: json!("(1 2 3)") }).unwrap();
    let f = generate_from_codes(&s3, &[parse(&s3, json!("(1 2)"))], 8).unwrap();
    let mut t = Trajectory::new(&phi, f.as_set()).unwrap();
    let s = trajectory_subgroup_check(&mut t, 6, 1 << 16).unwrap();
    ensure!(!s.holds && s.first_failure == Some(2), "S3: {s:?}");
    let (a, b) = s.witness.clone().ok_or("S3: no witness")?;
    Ok(format!(
        "{checked} (F, φ) pairs in Q8 and H1 pass; S3 fails at n = 2 with witness {a} · {b}"
    ))
}

fn criterion_7() -> Outcome {
    let mut terms = 0;
    let budget = BudgetPolicy::default().with_exponent(4);
    let cases: Vec<(GroupSpec, EndoSpec, NormalSpec, Vec<serde_json::Value>, bool)> = vec![
        (
            GroupSpec::dsum(6, None),
            EndoSpec::Shift { amount: 1 },
            NormalSpec::Multiples { divisor: 3 },
            vec![json!(1)],
            true,
        ),
        (
            GroupSpec::dsum(6, None),
            EndoSpec::Shift { amount: 1 },
            NormalSpec::Multiples { divisor: 3 },
            vec![json!([[0, 1], [1, 2]])],
            true,
        ),
        (
            GroupSpec::dsum(6, None),
            EndoSpec::Shift { amount: 1 },
            NormalSpec::Multiples { divisor: 3 },
            vec![json!(1)],
            false,
        ),
        (
            GroupSpec::quaternion(),
            EndoSpec::Inner { by: json!("i") },
            NormalSpec::Center,
            vec![json!("j")],
            true,
        ),
        (
            GroupSpec::quaternion(),
            EndoSpec::TableMap {
                images: vec![0, 1, 4, 5, 6, 7, 2, 3],
            },
            NormalSpec::Center,
            vec![json!("i")],
            false,
        ),
    ];
    for (spec, endo, normal, elems, subgroup) in cases {
        let g = build_group(&spec).unwrap();
        let phi = build_endomorphism(&spec, &g, &endo).unwrap();
        let h = NormalSubgroup::build(&normal, &spec, &g).unwrap();
        let q = induce_quotient(&phi, &h).map_err(|e| e.to_string())?;
        let codes: Vec<Code> = elems.into_iter().map(|v| parse(&g, v)).collect();
        let x = if subgroup {
            generate_from_codes(&g, &codes, 1 << 12).unwrap().into_set()
        } else {
            FiniteSubset::new(&g, codes).unwrap()
        };
        let rel = entropy_H_rel(&phi, &x, &h, &budget).map_err(|e| e.to_string())?;
        let quo = entropy_H(&q.induced, &q.project_set(&x), &budget).map_err(|e| e.to_string())?;
        let ctx = format!("{} mod {}", g.describe(), h.name());
        ensure!(
            rel.sizes == quo.sizes,
            "{ctx}: sizes {:?} vs {:?}",
            rel.sizes,
            quo.sizes
        );
        ensure!(rel.sequence == quo.sequence, "{ctx}: sequences differ");
        terms += rel.sequence.len();
    }
    Ok(format!("5 instances, {terms} sequence terms identical"))
}

fn criterion_8() -> Outcome {
    let start = Instant::now();
    let expect = [
        ("H1", GroupSpec::h_group(Some(1)), 10, true),
        ("Q8", GroupSpec::quaternion(), 6, true),
        ("S3", GroupSpec::symmetric(3), 6, false),
    ];
    let mut parts = Vec::new();
    for (name, spec, count, all) in expect {
        let g = build_group(&spec).unwrap();
        let subs = subgroup_enumerate(&g, 4096).map_err(|e| e.to_string())?;
        ensure!(
            subs.len() == count,
            "{name}: {} subgroups, expected {count}",
            subs.len()
        );
        let m = permutability_matrix(&subs).map_err(|e| e.to_string())?;
        ensure!(first_non_permutable(&m).is_none() == all, "{name}: matrix disagrees");
        // HK = KH exactly when HK is a subgroup.
        for (i, a) in subs.iter().enumerate() {
            for (j, b) in subs.iter().enumerate() {
                let ab = multiply_sets(a.as_set(), b.as_set()).unwrap();
                ensure!(is_subgroup(&ab) == m[i][j], "{name}: ({i}, {j}) oracle disagrees");
            }
        }
        parts.push(format!("{name} {count} subgroups"));
    }
    let took = within(Duration::from_secs(30), start)?;
    Ok(format!("{} in {took:.2?}", parts.join(", ")))
}

/// Permutations of `{1, …, d}` as image vectors, composed left to right.
fn perm_from_cycles(text: &str, d: usize) -> Vec<usize> {
    let mut p: Vec<usize> = (0..=d).collect();
    for cycle in text.split(')').filter(|c| c.contains('(')) {
        let pts: Vec<usize> = cycle
            .trim_start_matches(|c: char| c == '(' || c.is_whitespace())
            .split_whitespace()
            .map(|s| s.parse().unwrap())
            .collect();
        for w in 0..pts.len() {
            p[pts[w]] = pts[(w + 1) % pts.len()];
        }
    }
    p
}

fn compose(a: &[usize], b: &[usize]) -> Vec<usize> {
    (0..a.len()).map(|i| b[a[i]]).collect()
}

fn all_perms_of(m: usize, d: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut items: Vec<usize> = (1..=m).collect();
    fn heap(k: usize, items: &mut Vec<usize>, d: usize, out: &mut Vec<Vec<usize>>) {
        if k == 1 {
            let mut p: Vec<usize> = (0..=d).collect();
            for (i, &v) in items.iter().enumerate() {
                p[i + 1] = v;
            }
            out.push(p);
            return;
        }
        for i in 0..k {
            heap(k - 1, items, d, out);
            let j = if k % 2 == 0 { i } else { 0 };
            items.swap(j, k - 1);
        }
    }
    heap(m, &mut items, d, &mut out);
    out
}

fn criterion_9() -> Outcome {
    let mut parts = Vec::new();
    for (n, m) in [(3usize, 4usize), (3, 5)] {
        let w = sfin_noncofinal_witness(n as u32, m as u32).map_err(|e| e.to_string())?;
        let tau_text = format!("({} {})", n, m + 1);
        ensure!(w.tau == tau_text, "tau {} vs {tau_text}", w.tau);
        ensure!(!w.permutes && w.hn_size == w.nh_size, "({n},{m}): {w:?}");
        let d = m + 1;
        let h: BTreeSet<Vec<usize>> = all_perms_of(m, d).into_iter().collect();
        ensure!(h.len() == w.h_order, "H order {} vs {}", h.len(), w.h_order);
        let tau = perm_from_cycles(&tau_text, d);
        let id: Vec<usize> = (0..=d).collect();
        let nsub = [id, tau];
        let hn: BTreeSet<Vec<usize>> = h.iter().flat_map(|a| nsub.iter().map(move |t| compose(a, t))).collect();
        let nh: BTreeSet<Vec<usize>> = nsub.iter().flat_map(|t| h.iter().map(move |a| compose(t, a))).collect();
        ensure!(hn != nh && hn.len() == w.hn_size, "oracle: HN and NH");
        let witness = w.witness.clone().ok_or("no witness")?;
        let wp = perm_from_cycles(&witness, d);
        ensure!(
            nh.contains(&wp) && !hn.contains(&wp),
            "witness {witness} not in NH \\ HN"
        );
        parts.push(format!("(n, m) = ({n}, {m}): tau {tau_text}, witness {witness}"));
    }
    Ok(parts.join("; "))
}

/// Lamplighter `Z_2 wr Z` as (lit lamps, position) with
/// `(f, p)(g, q) = (f + shift_p g, p + q)`.
fn lamplighter_ball_sizes(radius: usize) -> Vec<u128> {
    type L = (BTreeSet<i64>, i64);
    let mul = |a: &L, b: &L| -> L {
        let mut lamps = a.0.clone();
        for &i in &b.0 {
            let j = i + a.1;
            if !lamps.remove(&j) {
                lamps.insert(j);
            }
        }
        (lamps, a.1 + b.1)
    };
    let gens: Vec<L> = vec![(BTreeSet::from([0]), 0), (BTreeSet::new(), 1), (BTreeSet::new(), -1)];
    let mut seen: HashSet<L> = HashSet::from([(BTreeSet::new(), 0)]);
    let mut frontier: Vec<L> = seen.iter().cloned().collect();
    let mut sizes = vec![1u128];
    for _ in 0..radius {
        let mut next = Vec::new();
        for x in &frontier {
            for s in &gens {
                let y = mul(x, s);
                if seen.insert(y.clone()) {
                    next.push(y);
                }
            }
        }
        frontier = next;
        sizes.push(seen.len() as u128);
    }
    sizes
}

fn criterion_10() -> Outcome {
    let start = Instant::now();
    let exp = default_roster()
        .into_iter()
        .find(|e| e.negative_control)
        .ok_or("no negative control")?;
    let r = run_at_experiment(&exp).map_err(|e| e.to_string())?;
    ensure!(
        r.h_h.estimate.exact_value() == Some(0.0),
        "h_H = {:?}",
        r.h_h.estimate.exact
    );
    ensure!(r.h_g.diverging && r.at_failure_candidate, "G side not flagged");
    ensure!(
        r.h_g.estimate.growth == GrowthClass::ExponentialCandidate,
        "growth {:?}",
        r.h_g.estimate.growth
    );
    ensure!(
        r.verdict != Verdict::ViolationFlag,
        "upper-bound-only run produced a violation"
    );
    let sizes = &r.h_g.members[0].sizes;
    ensure!(sizes.len() > 17, "only {} sizes computed", sizes.len());
    let oracle = lamplighter_ball_sizes(17);
    ensure!(
        sizes[..=17] == oracle[..],
        "BFS oracle {:?} vs {:?}",
        oracle,
        &sizes[..=17]
    );
    let mut least = f64::INFINITY;
    for n in 10..=16 {
        let inc = (sizes[n + 1] as f64).ln() - (sizes[n] as f64).ln();
        ensure!(inc >= 0.4, "increment at n = {n} is {inc}");
        least = least.min(inc);
    }
    let took = within(Duration::from_secs(120), start)?;
    Ok(format!(
        "h_H = 0 exact, min increment {least:.4} on [10, 16], h = ∞ candidate flagged, {took:.2?}"
    ))
}

fn criterion_11() -> Outcome {
    let s = suite();
    let mut checked = 0;
    for r in s.reports.iter().filter(|r| !r.negative_control) {
        let c = r
            .chain_checks
            .as_ref()
            .ok_or(format!("{}: no chain check ({:?})", r.label, r.chain_error))?;
        ensure!(c.records.len() >= 8, "{}: {} records", r.label, c.records.len());
        for rec in &c.records {
            ensure!(rec.inequality, "{} n = {}: |A||C| > |B|", r.label, rec.n);
            ensure!(rec.transport, "{} n = {}: |T_n(C)| ≠ cosets of T_n(B)", r.label, rec.n);
        }
        checked += 1;
    }
    ensure!(
        s.summary.negative_controls == 1,
        "{} negative controls",
        s.summary.negative_controls
    );
    Ok(format!("{checked} positive experiments, n = 1..8 each"))
}

fn main() {
    let criteria: [(&str, fn() -> Outcome); 11] = [
        ("Bernoulli shift exactness", criterion_1),
        ("Addition Theorem exact instance", criterion_2),
        ("identity entropy on family members", criterion_3),
        ("monotone 2^n subsequence", criterion_4),
        ("coset-count identities", criterion_5),
        ("trajectory images commute", criterion_6),
        ("relative vs explicit quotient", criterion_7),
        ("subgroup permutability", criterion_8),
        ("finitary symmetric witness", criterion_9),
        ("lamplighter negative control", criterion_10),
        ("chain-check suite", criterion_11),
    ];
    let mut failed = 0;
    for (i, (name, f)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let outcome = catch_unwind(AssertUnwindSafe(f)).unwrap_or_else(|p| {
            let msg = p
                .downcast_ref::<String>()
                .cloned()
                .or_else(|| p.downcast_ref::<&str>().map(|s| s.to_string()))
                .unwrap_or_default();
            Err(format!("panicked: {msg}"))
        });
        let took = start.elapsed();
        match outcome {
            Ok(detail) => println!("PASS {:>2} {name}: {detail} [{took:.2?}]", i + 1),
            Err(why) => {
                failed += 1;
                println!("FAIL {:>2} {name}: {why} [{took:.2?}]", i + 1);
            }
        }
    }
    println!("{} of {} criteria passed", criteria.len() - failed, criteria.len());
    if failed > 0 {
        std::process::exit(1);
    }
}
