//! Endomorphisms, invariant normal subgroups, induced quotient maps and
//! trajectories `T_n(φ, X) = X·φ(X)⋯φ^{n-1}(X)`.

mod endo;
mod normal;
mod quotient;
mod trajectory;

use schemars::JsonSchema;
use serde::{Deserialize, Serialize};

pub use endo::{build_endomorphism, endo_power, verify_homomorphism, EndoSpec, Endomorphism, EXHAUSTIVE_HOM_LIMIT};
pub use normal::{restrict, restrict_with, NormalCertificate, NormalSpec, NormalSubgroup, DEFAULT_SAMPLES};
pub use quotient::{induce_quotient, induce_quotient_with, QuotientOracle, QuotientSystem};
pub use trajectory::{
    images_commute_check, trajectory_extend, trajectory_subgroup_check, CommuteReport, SubgroupChainReport, Trajectory,
};

/// How thoroughly a hypothesis was checked.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize, JsonSchema)]
#[serde(tag = "level", rename_all = "snake_case")]
pub enum Certification {
    /// Every element or pair of a finite group.
    Exhaustive {
        checked: usize,
    },
    /// Every element of the listed finite truncations.
    Truncation {
        levels: usize,
        checked: usize,
    },
    Sampled {
        samples: usize,
    },
}
