//! Closed-form upper bounds, the entropy machinery behind them and the
//! exact cover-free threshold test.

pub mod binomial;
pub mod catalogue;
pub mod entropy;
pub mod interval;
pub mod threshold;

pub use catalogue::{
    best_bound, code_bounds, evaluate_bound, BoundName, BoundParams, BoundReport, BoundValue,
};
pub use entropy::{default_delta, delta_for_range, entropy, entropy_inverse, epsilon_n};
pub use interval::Interval;
pub use threshold::threshold_below;
