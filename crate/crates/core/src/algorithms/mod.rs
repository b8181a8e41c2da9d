//! Gradient, linear-system, Monte Carlo and optimization algorithms with
//! their classical baselines.

mod classical;
mod hhl;
mod jordan;
mod montecarlo;
mod qubo;

pub use classical::{finite_difference_gradient, vandermonde_fit, DifferenceScheme, PolynomialFit};
pub use hhl::{
    hermitized_solution_part, hhl_postselected, hhl_solve, ols_demo, ols_instance, HhlConfig, HhlOutcome,
    LinearSystem,
};
pub use jordan::{jordan_gradient, required_output_bits, GradientOutcome, GradientProblem, RealFn};
pub use montecarlo::{
    exact_mean, log_log_slope, median_abs_error, montecarlo_distribution, montecarlo_mean, montecarlo_state,
    MonteCarloOutcome,
};
pub use qubo::{qubo_bruteforce, QuboProblem};
