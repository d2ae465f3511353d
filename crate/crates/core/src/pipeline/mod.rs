//! Flow orchestration: frontend conversion, recipe generation, the
//! per-design seven-step run, dataset packing with hash-verified
//! manifests, and the four task extractors.

mod convert;
mod extract;
mod flow;
mod packing;
mod recipes;

pub use convert::{to_aig, to_gtg};
pub use extract::{
    extract_classification, extract_probability, extract_qor, extract_ranking, group_names,
    ClassSample, ProbabilitySample, QorSample, RankingPair,
};
pub use flow::{
    observations, run_flow, verify, DesignItem, FlowConfig, Observations, RecipeResult,
    TypeGroup, VerdictTier, RANDOM_MITER_WORDS,
};
pub use packing::{pack, unpack};
pub use recipes::{gen_recipes, seed_job};

use crate::ir::LogicType;

/// Directory name of a logic-type group inside a packed design.
pub(crate) fn packing_group_name(t: LogicType) -> &'static str {
    match t {
        LogicType::Aig => "aig",
        LogicType::Oig => "oig",
        LogicType::Xag => "xag",
        LogicType::Mig => "mig",
        LogicType::Primary => "primary",
        LogicType::Gtg => "gtg",
        _ => unreachable!("netlists are not groups"),
    }
}
