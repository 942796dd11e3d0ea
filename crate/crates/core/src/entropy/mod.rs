//! Entropy estimators: `H(φ, X)` through the decreasing sequence
//! `ℓ(T_{2^n})/2^n`, its relative version against a normal subgroup, and
//! `h(φ)` as a supremum over a family of finite subgroups.

mod family;
mod monotone;
mod single;

use schemars::JsonSchema;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::set::DEFAULT_MAX_SIZE;

pub use family::{entropy_h, entropy_h_on, entropy_h_rel, FamilyEstimate, MemberRow};
pub use monotone::{relative_monotone_check, RelativeMonotoneReport};
pub use single::{entropy_H, entropy_H_rel};

/// Increments closer than this count as equal when testing stabilization.
pub const STABILITY_TOLERANCE: f64 = 1e-12;

/// Increments of an identity trajectory at or above this many nats over the
/// whole stabilization window mark exponential growth.
pub const EXPONENTIAL_FLOOR: f64 = 0.25;

/// Limits shared by every estimator.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize, JsonSchema)]
#[serde(default)]
pub struct BudgetPolicy {
    /// Largest `n` with `T_{2^n}` attempted.
    pub max_exponent: u32,
    /// Largest set materialized by a product.
    pub max_set_size: usize,
    /// Wall-clock cap per estimate, in seconds.
    pub time_cap: f64,
    /// Number of trailing increments (or family members) that must agree.
    pub stabilization_window: usize,
    /// Family members examined by `entropy_h`.
    pub max_members: usize,
    /// Seed for every randomized certification.
    pub seed: u64,
}

impl Default for BudgetPolicy {
    fn default() -> Self {
        BudgetPolicy {
            max_exponent: 4,
            max_set_size: DEFAULT_MAX_SIZE,
            time_cap: 60.0,
            stabilization_window: 3,
            max_members: 4,
            seed: 0,
        }
    }
}

impl BudgetPolicy {
    pub fn validate(&self) -> Result<()> {
        if self.max_exponent == 0
            || self.max_set_size == 0
            || self.time_cap.is_nan()
            || self.time_cap <= 0.0
            || self.stabilization_window == 0
            || self.max_members == 0
        {
            return Err(Error::usage(format!("budget fields must be positive: {self:?}")));
        }
        if self.max_exponent > 24 {
            return Err(Error::usage("max_exponent above 24 is not supported"));
        }
        Ok(())
    }

    pub fn with_exponent(mut self, n: u32) -> Self {
        self.max_exponent = n;
        self
    }

    pub fn with_max_set_size(mut self, n: usize) -> Self {
        self.max_set_size = n;
        self
    }

    /// Largest trajectory index `2^max_exponent`.
    pub fn horizon(&self) -> usize {
        1usize << self.max_exponent
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize, JsonSchema)]
#[serde(rename_all = "snake_case")]
pub enum ExactMethod {
    /// Increments `ℓ(T_{k+1}) - ℓ(T_k)` constant over the stabilization window.
    StabilizedRatio,
    /// `φ = id` on a subgroup: `T_n = X` for `n ≥ 1`.
    IdentityMap,
    /// `φ` trivial, or a single coset.
    Trivial,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize, JsonSchema)]
pub struct ExactValue {
    pub value: f64,
    pub method: ExactMethod,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize, JsonSchema)]
#[serde(rename_all = "snake_case")]
pub enum GrowthClass {
    Stabilized,
    /// Identity map whose trajectory keeps growing by a fixed fraction:
    /// `H(id, X) > 0`, hence `h(id) = ∞` since `H(id, X^k) = k·H(id, X)`.
    ExponentialCandidate,
    /// Increments shrinking and already below the exponential floor.
    SubexponentialCandidate,
    Undetermined,
}

/// How the sizes `|T_k|` were obtained.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize, JsonSchema)]
#[serde(rename_all = "snake_case")]
pub enum Route {
    /// Explicit set products.
    Enumeration,
    /// Orders of spans in a direct sum of cyclic groups, without listing elements.
    LinearSpan,
    /// Closed form for the identity or trivial map.
    Shortcut,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize, JsonSchema)]
#[serde(rename_all = "snake_case")]
pub enum StopReason {
    SetBudget,
    TimeCap,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize, JsonSchema)]
pub struct BudgetUsed {
    pub route: Route,
    /// Largest `k` with `|T_k|` known.
    pub steps: usize,
    pub largest_size: u128,
    pub elapsed_seconds: f64,
    pub stopped_by: Option<StopReason>,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize, JsonSchema)]
pub struct SequencePoint {
    pub n: u32,
    /// `ℓ(T_{2^n}) / 2^n` in nats.
    pub value: f64,
}

/// Estimate of `H(φ, X)`, or of a relative or family version of it.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize, JsonSchema)]
pub struct EntropyEstimate {
    pub sequence: Vec<SequencePoint>,
    pub upper_bound: f64,
    pub exact: Option<ExactValue>,
    /// `|T_k|` for `k = 0, 1, …` as far as computed.
    pub sizes: Vec<u128>,
    /// `ℓ(T_{k+1}) - ℓ(T_k)`.
    pub increments: Vec<f64>,
    pub growth: GrowthClass,
    /// Whether `|T_{2^{n+1}}| ≤ |T_{2^n}|²` held at every computed `n`.
    pub monotone: bool,
    pub identity_adjoined: bool,
    pub budget_used: BudgetUsed,
    pub truncated: bool,
}

impl EntropyEstimate {
    pub fn exact_value(&self) -> Option<f64> {
        self.exact.map(|e| e.value)
    }

    /// `exact` if present, otherwise the upper bound.
    pub fn best_value(&self) -> f64 {
        self.exact_value().unwrap_or(self.upper_bound)
    }

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::to_value(self).expect("estimates serialize")
    }

    /// `n,value,value_log2` rows.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("n,value,value_log2\n");
        for p in &self.sequence {
            out.push_str(&format!("{},{},{}\n", p.n, p.value, p.value / std::f64::consts::LN_2));
        }
        out
    }

    /// Assembles an estimate from trajectory sizes `|T_0|, |T_1|, …`.
    pub(crate) fn from_sizes(
        sizes: Vec<u128>,
        window: usize,
        identity_map: bool,
        shortcut: Option<ExactMethod>,
        identity_adjoined: bool,
        budget_used: BudgetUsed,
    ) -> Self {
        let ln = |s: u128| (s as f64).ln();
        let mut sequence = Vec::new();
        let mut monotone = true;
        let mut n = 0u32;
        while (1usize << n) < sizes.len() {
            let k = 1usize << n;
            sequence.push(SequencePoint {
                n,
                value: ln(sizes[k]) / k as f64,
            });
            if n > 0 {
                let prev = sizes[k / 2];
                if prev.checked_mul(prev).is_some_and(|sq| sizes[k] > sq) {
                    monotone = false;
                }
            }
            n += 1;
        }
        let upper_bound = sequence.iter().map(|p| p.value).fold(f64::INFINITY, f64::min);
        let increments: Vec<f64> = sizes.windows(2).map(|w| ln(w[1]) - ln(w[0])).collect();
        let tail: &[f64] = if increments.len() > window {
            &increments[increments.len() - window..]
        } else {
            &[]
        };
        let exact = match shortcut {
            Some(method) => Some(ExactValue { value: 0.0, method }),
            None => {
                let steady = !tail.is_empty() && tail.iter().all(|d| (d - tail[0]).abs() <= STABILITY_TOLERANCE);
                if steady && tail[0] <= upper_bound + STABILITY_TOLERANCE {
                    Some(ExactValue {
                        value: tail[0].max(0.0),
                        method: ExactMethod::StabilizedRatio,
                    })
                } else {
                    None
                }
            }
        };
        let growth = if exact.is_some() {
            GrowthClass::Stabilized
        } else if tail.is_empty() {
            GrowthClass::Undetermined
        } else if identity_map && tail.iter().all(|&d| d >= EXPONENTIAL_FLOOR) {
            GrowthClass::ExponentialCandidate
        } else if tail.windows(2).all(|w| w[1] <= w[0]) && tail[tail.len() - 1] < EXPONENTIAL_FLOOR {
            GrowthClass::SubexponentialCandidate
        } else {
            GrowthClass::Undetermined
        };
        let truncated = budget_used.stopped_by.is_some();
        EntropyEstimate {
            sequence,
            upper_bound,
            exact,
            sizes,
            increments,
            growth,
            monotone,
            identity_adjoined,
            budget_used,
            truncated,
        }
    }
}
