//! Discrete-channel regions: bounds for one auxiliary joint, the binning
//! polytope, the zero-rate masking region and the frontier search.

mod binning;
mod bounds;
pub mod fm;
mod frontier;
mod search;
mod zero_rate;

pub use binning::{binning_polytope, binning_region, BinningRegion, RatePolytope};
pub use bounds::{binning_budget, inner_bounds, outer_bounds, BinningBudget, InnerBoundValues, OuterBoundValues};
pub use frontier::{check_point, pareto_filter, Provenance, RateQuintuple, RegionFrontier, Verdict, DOMINANCE_TOL};
pub use search::{achievable_points, search_inner_region, SearchConfig};
pub use zero_rate::{compositions, lower_left_hull, state_leakage, zero_rate_region};
