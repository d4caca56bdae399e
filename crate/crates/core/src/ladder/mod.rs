//! Rate-adaptive code families: intermediate protographs, the Proto-Circle
//! row-merging construction, and the anchor and fine rate grids.

mod build;
mod circle;
mod intermediate;
mod manifest;
mod rate;

pub use build::{
    build_ladder, extract_increment, fine_steps, syndrome_from_increment, Anchor, CodeLadder, FineStep, GridPoint,
    LadderOptions,
};
pub use circle::{build_cprime, proto_circle, reconstruct_syndrome, verify_rate_adaptive, ProtoCircleOutcome};
pub use intermediate::{
    check_intermediate, check_intermediate_proto, enum_intermediate_protos, merged_pairs, plan_ladder,
    select_intermediate_proto, IntermediateChoice, IntermediateMatrix, LadderPlan,
};
pub use manifest::{load_ladder, save_ladder, LadderManifest};
pub use rate::Rate;
