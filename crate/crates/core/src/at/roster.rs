use schemars::JsonSchema;
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use super::{run_at_experiment, ATExperiment, ATReport, ChainSpec, Families, FamilySpec, Verdict};
use crate::dynamics::{EndoSpec, NormalSpec};
use crate::entropy::BudgetPolicy;
use crate::error::Result;
use crate::groups::GroupSpec;
use crate::kernel;

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize, JsonSchema)]
pub struct SuiteSummary {
    pub total: usize,
    pub exact: usize,
    pub within_tol: usize,
    pub inconclusive: usize,
    pub violations: usize,
    pub negative_controls: usize,
    /// Positive-roster labels whose chain check did not pass.
    pub chain_failures: Vec<String>,
    /// Labels flagged as additivity failure candidates.
    pub at_failure_candidates: Vec<String>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize, JsonSchema)]
pub struct SuiteReport {
    pub reports: Vec<ATReport>,
    pub summary: SuiteSummary,
}

impl SuiteReport {
    /// No violation and every positive chain check passed.
    pub fn healthy(&self) -> bool {
        self.summary.violations == 0 && self.summary.chain_failures.is_empty()
    }
}

const LARGE: usize = 1 << 21;

fn budget(max_set_size: usize) -> BudgetPolicy {
    BudgetPolicy::default().with_max_set_size(max_set_size)
}

fn shift() -> EndoSpec {
    EndoSpec::Shift { amount: 1 }
}

fn truncations(size_bound: usize) -> Families {
    Families {
        g: FamilySpec::Truncations { size_bound },
        h: None,
        q: None,
    }
}

fn chain(generators: Vec<Value>) -> Option<ChainSpec> {
    Some(ChainSpec { generators, n: 8 })
}

fn experiment(
    label: &str,
    group: GroupSpec,
    endo: EndoSpec,
    normal_subgroup: NormalSpec,
    families: Families,
    budget: BudgetPolicy,
    chain: Option<ChainSpec>,
) -> ATExperiment {
    ATExperiment {
        label: label.to_string(),
        group,
        endo,
        normal_subgroup,
        families,
        budget,
        chain,
        negative_control: false,
    }
}

fn h_elem(base: Value, actor: u32) -> Value {
    json!({"base": base, "actor": actor})
}

/// The fixed roster: torsion abelian shifts, `Q8` and `H_k` systems, `S3 × H_k`
/// with coordinate maps, and the lamplighter negative control.
pub fn default_roster() -> Vec<ATExperiment> {
    let h_id = h_elem(json!([]), 0);
    let mut roster = vec![
        experiment(
            "z6-shift-mod3",
            GroupSpec::dsum(6, None),
            shift(),
            NormalSpec::Multiples { divisor: 3 },
            truncations(1296),
            budget(LARGE),
            chain(vec![json!(1)]),
        ),
        experiment(
            "z6-shift-mod2",
            GroupSpec::dsum(6, None),
            shift(),
            NormalSpec::Multiples { divisor: 2 },
            truncations(1296),
            budget(LARGE),
            chain(vec![json!(1)]),
        ),
        experiment(
            "z4-shift-mod2",
            GroupSpec::dsum(4, None),
            shift(),
            NormalSpec::Multiples { divisor: 2 },
            truncations(256),
            BudgetPolicy::default(),
            chain(vec![json!(1)]),
        ),
        experiment(
            "z2-shift-trivial",
            GroupSpec::dsum(2, None),
            shift(),
            NormalSpec::Trivial,
            truncations(16),
            BudgetPolicy::default(),
            chain(vec![json!(1)]),
        ),
        experiment(
            "z3z-shift-whole",
            GroupSpec::dsum_integers(3, None),
            shift(),
            NormalSpec::Whole,
            truncations(243),
            BudgetPolicy::default(),
            chain(vec![json!(1)]),
        ),
        experiment(
            "q8-inner-center",
            GroupSpec::quaternion(),
            EndoSpec::Inner { by: json!("i") },
            NormalSpec::Center,
            truncations(8),
            BudgetPolicy::default(),
            chain(vec![json!("i"), json!("j")]),
        ),
        experiment(
            "q8-cycle-center",
            GroupSpec::quaternion(),
            EndoSpec::TableMap {
                images: vec![0, 1, 4, 5, 6, 7, 2, 3],
            },
            NormalSpec::Center,
            truncations(8),
            BudgetPolicy::default(),
            chain(vec![json!("i"), json!("j")]),
        ),
        experiment(
            "h1-inner-base",
            GroupSpec::h_group(Some(1)),
            EndoSpec::Inner {
                by: h_elem(json!([]), 1),
            },
            NormalSpec::Base,
            truncations(27),
            BudgetPolicy::default(),
            chain(vec![h_elem(json!([[0, 1]]), 0), h_elem(json!([]), 1)]),
        ),
        experiment(
            "h-shift-base",
            GroupSpec::h_group(None),
            shift(),
            NormalSpec::Base,
            truncations(2187),
            budget(LARGE),
            chain(vec![h_elem(json!([[0, 3]]), 0), h_elem(json!([]), 1)]),
        ),
        experiment(
            "s3xh1-inner-scalar",
            GroupSpec::product(vec![GroupSpec::symmetric(3), GroupSpec::h_group(Some(1))]),
            EndoSpec::Coordinate {
                components: vec![EndoSpec::Inner { by: json!("(1 2 3)") }, EndoSpec::Scalar { factor: 2 }],
            },
            NormalSpec::Product {
                components: vec![NormalSpec::Whole, NormalSpec::Base],
            },
            truncations(162),
            BudgetPolicy::default(),
            chain(vec![
                json!(["(1 2)", h_id.clone()]),
                json!(["(1 2 3)", h_id.clone()]),
                json!(["()", h_elem(json!([[0, 1]]), 0)]),
                json!(["()", h_elem(json!([]), 1)]),
            ]),
        ),
        experiment(
            "s3xh-identity-shift",
            GroupSpec::product(vec![GroupSpec::symmetric(3), GroupSpec::h_group(None)]),
            EndoSpec::Coordinate {
                components: vec![EndoSpec::Identity, shift()],
            },
            NormalSpec::Product {
                components: vec![NormalSpec::Whole, NormalSpec::Trivial],
            },
            truncations(1458),
            BudgetPolicy {
                stabilization_window: 2,
                ..budget(LARGE)
            },
            chain(vec![
                json!(["(1 2)", h_id.clone()]),
                json!(["(1 2 3)", h_id.clone()]),
                json!(["()", h_elem(json!([[0, 3]]), 0)]),
                json!(["()", h_elem(json!([]), 1)]),
            ]),
        ),
    ];

    let lamp = |i: i32| json!({"lamps": [[i, 1]], "pos": 0});
    let step = |p: i32| json!({"lamps": [], "pos": p});
    roster.push(ATExperiment {
        label: "lamplighter-identity".to_string(),
        group: GroupSpec::lamplighter(2),
        endo: EndoSpec::Identity,
        normal_subgroup: NormalSpec::Base,
        families: Families {
            g: FamilySpec::Explicit {
                sets: vec![vec![lamp(0), step(1), step(-1)]],
            },
            h: Some(FamilySpec::Generated {
                members: (0..3).map(|r| (-r..=r).map(lamp).collect()).collect(),
            }),
            q: None,
        },
        budget: BudgetPolicy {
            max_exponent: 5,
            ..budget(1 << 19)
        },
        chain: None,
        negative_control: true,
    });
    roster
}

fn summarize(reports: &[ATReport]) -> SuiteSummary {
    let mut s = SuiteSummary {
        total: reports.len(),
        ..SuiteSummary::default()
    };
    for r in reports {
        match r.verdict {
            Verdict::AdditivityHoldsExact => s.exact += 1,
            Verdict::AdditivityHoldsWithinTol => s.within_tol += 1,
            Verdict::InconclusiveBudget => s.inconclusive += 1,
            Verdict::ViolationFlag => s.violations += 1,
        }
        if r.negative_control {
            s.negative_controls += 1;
        } else if !r.chain_passed() {
            s.chain_failures.push(r.label.clone());
        }
        if r.at_failure_candidate {
            s.at_failure_candidates.push(r.label.clone());
        }
    }
    s
}

/// Runs the default roster, replacing every experiment's budget when
/// `budget` is given. Reports keep roster order.
pub fn run_catalog_suite(budget: Option<&BudgetPolicy>) -> Result<SuiteReport> {
    let mut roster = default_roster();
    if let Some(b) = budget {
        for exp in &mut roster {
            exp.budget = b.clone();
        }
    }
    let reports = kernel::map_collect(&roster, run_at_experiment)
        .into_iter()
        .collect::<Result<Vec<_>>>()?;
    let summary = summarize(&reports);
    Ok(SuiteReport { reports, summary })
}
