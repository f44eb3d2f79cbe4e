//! Simulation and analysis of a dynamic voluntary-contribution public good
//! game in which the group first votes on an investment that raises the
//! productivity of later contributions.
//!
//! All game logic is generic over [`Scalar`]; the aliases below fix the
//! scalar to `f64` ([`Params`], [`Profile`], ...) or to exact rationals
//! ([`ExactParams`], ...).

pub mod equilibrium;
pub mod error;
pub mod figures;
pub mod game;
pub mod io;
pub mod optimizer;
pub mod regression;
pub mod scalar;
pub mod strategy;
pub mod sweep;

pub use equilibrium::{
    best_deviation_gain, deviation_gains, is_nash, scenario, scenario_profile, Scenario,
};
pub use error::{Error, Result};
pub use game::{
    median_investment, period_payoff, run_game, run_period, update_productivity, GameParams,
    PeriodRecord, ProductivityState, Trajectory,
};
pub use optimizer::{
    closed_form_optimum, closed_form_payoff, exhaustive_plan_search, grid_search,
    payoff_of_switch, GridSearch, InvestmentPlan, PlanSearch, SwitchOptimum,
};
pub use regression::{fit_quadratic, vertex, QuadraticModel};
pub use scalar::{format_sig12, Scalar};
pub use strategy::{
    ConstantPolicy, Phase, Policy, StrategyProfile, SwitchPolicy, ThresholdPolicy,
};

/// Exact rational scalar.
pub type Exact = num_rational::Rational64;

pub type Params = GameParams<f64>;
pub type Record = PeriodRecord<f64>;
pub type Path = Trajectory<f64>;
pub type Profile = StrategyProfile<f64>;
pub type Quadratic = QuadraticModel<f64>;
pub type Plan = InvestmentPlan<f64>;

pub type ExactParams = GameParams<Exact>;
pub type ExactPath = Trajectory<Exact>;
pub type ExactProfile = StrategyProfile<Exact>;
pub type ExactQuadratic = QuadraticModel<Exact>;

pub type Params32 = GameParams<f32>;
pub type Path32 = Trajectory<f32>;
