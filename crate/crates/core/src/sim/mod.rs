//! Monte Carlo experiments: BER per rate and crossover probability, the
//! minimum decodable rate per source couple, and 4-cycle comparisons.

mod ber;
mod family;
mod minrate;
mod spec;
mod stats;

pub use ber::{simulate_ber, simulate_point, write_ber_csv, BerPoint};
pub use family::{LadderFamily, LdpcaFamily, RateAdaptiveCode};
pub use minrate::{
    cycle_report, min_rate_experiment, write_cycles_csv, write_min_rate_csv, CycleRow, MinRatePoint, MinRateSearch,
};
pub use spec::{ExperimentMode, ExperimentSpec, SimResult};
pub use stats::wilson_interval;
