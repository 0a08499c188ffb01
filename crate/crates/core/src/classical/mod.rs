//! Classical bouncer under linear (`-alpha v`) or quadratic (`-gamma v|v|`)
//! drag.

mod cycle;
mod estimate;
mod forms;
mod integrate;

pub use cycle::{bounce_map_quadratic, bounce_sequence, up_leg_velocity, xp_crossing, BounceStep, Crossing};
pub use estimate::{estimate_alpha, estimate_gamma, EstimateOptions, ParameterEstimate};
pub use forms::{
    h_linear, h_linear_series, h_quadratic, h_quadratic_series, k_linear, k_linear_series, k_quadratic,
    k_quadratic_series, l_linear, l_linear_series, l_quadratic, l_quadratic_series, linear_smallness,
    p_linear, p_linear_series, p_quadratic, p_quadratic_series, quadratic_smallness, DissipationSpec, Drag,
};
pub use integrate::{integrate, Apex, Bounce, IntegrateOptions, Sample, Trajectory};
