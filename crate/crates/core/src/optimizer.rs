//! Socially optimal play for symmetric groups.
//!
//! With everyone contributing whatever is not invested, a symmetric plan is
//! a list of invested shares `p_t`. The invest-then-contribute family is
//! indexed by a single switch stage `x` (see [`SwitchPolicy`]); its payoff
//! is evaluated by simulation in [`payoff_of_switch`] and in closed form by
//! [`closed_form_payoff`]:
//!
//! ```text
//! f(x) = N * w * (M0 + m * w * x) * (T - x)
//! ```
//!
//! [`exhaustive_plan_search`] drops the switch restriction and enumerates
//! every plan on a grid, which checks that nothing outside the family does
//! better.

use num_traits::ToPrimitive;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::game::{run_game, run_period, GameParams};
use crate::scalar::Scalar;
use crate::strategy::{Policy, StrategyProfile, SwitchPolicy};

/// Upper bound on plans enumerated by [`exhaustive_plan_search`].
pub const MAX_PLAN_EVALUATIONS: u128 = 100_000_000;

/// Share of the endowment invested in each period; the rest is contributed.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct InvestmentPlan<S> {
    pub fractions: Vec<S>,
}

impl<S: Scalar> InvestmentPlan<S> {
    pub fn is_non_increasing(&self) -> bool {
        self.fractions
            .windows(2)
            .all(|w| w[1] <= w[0] + S::tolerance())
    }

    /// The switch stage `x` if the plan is `[1, .., 1, f, 0, .., 0]`.
    pub fn as_switch_stage(&self) -> Option<S> {
        let full = self
            .fractions
            .iter()
            .take_while(|p| p.approx_eq(S::one()))
            .count();
        let rest = &self.fractions[full..];
        let frac = rest.first().copied().unwrap_or_else(S::zero);
        if rest.iter().skip(1).all(|p| p.approx_eq(S::zero())) {
            Some(S::from_count(full) + frac)
        } else {
            None
        }
    }

    /// Per-player total when every player follows the plan.
    pub fn payoff(&self, params: &GameParams<S>) -> Result<S> {
        if self.fractions.len() != params.n_periods {
            return Err(Error::WrongCount {
                expected: params.n_periods,
                got: self.fractions.len(),
            });
        }
        let n = params.n_players;
        let mut state = params.initial_state();
        let mut total = S::zero();
        for &p in &self.fractions {
            let vote = p * params.endowment;
            let contribution = (S::one() - p) * params.endowment;
            let (next, record) = run_period(state, &vec![vote; n], &vec![contribution; n], params)?;
            state = next;
            total = total + record.payoffs[0];
        }
        Ok(total)
    }
}

fn check_stage<S: Scalar>(params: &GameParams<S>, x: S) -> Result<()> {
    if x < S::zero() || x > S::from_count(params.n_periods) {
        return Err(Error::SwitchOutOfRange {
            x: x.to_f64_lossy(),
            periods: params.n_periods,
        });
    }
    Ok(())
}

/// Per-player total when everyone switches at `x`, by simulation.
pub fn payoff_of_switch<S: Scalar>(params: &GameParams<S>, x: S) -> Result<S> {
    check_stage(params, x)?;
    let profile = StrategyProfile::symmetric(Policy::Switch(SwitchPolicy::new(x)), params.n_players);
    let trajectory = run_game(params, &profile)?;
    Ok(trajectory.total_payoffs[0])
}

/// Points `0, step, 2 step, ..` up to and including `n_periods`.
pub fn switch_grid<S: Scalar>(n_periods: usize, step: S) -> Result<Vec<S>> {
    if step <= S::zero() {
        return Err(Error::NonPositiveStep(step.to_f64_lossy()));
    }
    let end = S::from_count(n_periods);
    let tol = S::tolerance();
    let mut points = Vec::new();
    for k in 0usize.. {
        let x = S::from_count(k) * step;
        if x > end + tol {
            break;
        }
        points.push(x.min_of(end));
    }
    if points.last().is_none_or(|&last| last < end - tol) {
        points.push(end);
    }
    Ok(points)
}

#[derive(Debug, Clone, PartialEq)]
pub struct GridSearch<S> {
    pub best_x: S,
    pub best_payoff: S,
    /// Every evaluated `(x, payoff)` pair, in increasing `x`.
    pub samples: Vec<(S, S)>,
}

/// Evaluate [`payoff_of_switch`] on the grid and return the best point,
/// ties going to the smaller `x`.
pub fn grid_search<S: Scalar>(params: &GameParams<S>, step: S) -> Result<GridSearch<S>> {
    params.validate()?;
    let grid = switch_grid(params.n_periods, step)?;
    let samples = grid
        .par_iter()
        .map(|&x| payoff_of_switch(params, x).map(|y| (x, y)))
        .collect::<Result<Vec<_>>>()?;
    let (best_x, best_payoff) = samples
        .iter()
        .copied()
        .reduce(|best, cand| if cand.1 > best.1 { cand } else { best })
        .expect("grid is never empty");
    Ok(GridSearch {
        best_x,
        best_payoff,
        samples,
    })
}

/// `N w (M0 + m w x)(T - x)`, the per-player total of switch stage `x`.
pub fn closed_form_payoff<S: Scalar>(params: &GameParams<S>, x: S) -> Result<S> {
    check_stage(params, x)?;
    let rate = params.productivity_rate * params.endowment;
    let periods = S::from_count(params.n_periods);
    Ok(params.group_scale() * (params.base_productivity + rate * x) * (periods - x))
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SwitchOptimum<S> {
    /// Optimal switch stage, inside `[0, n_periods]`.
    pub x: S,
    pub payoff: S,
    /// Vertex of the parabola before clamping; `None` when investing has
    /// no effect (`m * w = 0`).
    pub vertex: Option<S>,
    pub clamped: bool,
}

/// Vertex `T/2 - M0 / (2 m w)` of the closed form, clamped into `[0, T]`.
pub fn closed_form_optimum<S: Scalar>(params: &GameParams<S>) -> Result<SwitchOptimum<S>> {
    params.validate()?;
    let rate = params.productivity_rate * params.endowment;
    let periods = S::from_count(params.n_periods);
    let two = S::from_count(2);
    if rate <= S::zero() {
        return Ok(SwitchOptimum {
            x: S::zero(),
            payoff: closed_form_payoff(params, S::zero())?,
            vertex: None,
            clamped: true,
        });
    }
    let vertex = periods / two - params.base_productivity / (two * rate);
    let x = vertex.clamp_to(S::zero(), periods);
    Ok(SwitchOptimum {
        x,
        payoff: closed_form_payoff(params, x)?,
        vertex: Some(vertex),
        clamped: x != vertex,
    })
}

#[derive(Debug, Clone, PartialEq)]
pub struct PlanSearch<S> {
    pub best_plan: InvestmentPlan<S>,
    pub payoff: S,
    pub evaluated: u128,
}

/// Enumerate every symmetric plan with each `p_t` on `grid_levels` evenly
/// spaced points of `[0, 1]` and return the best one. Ties go to the plan
/// that is smallest when read as a base-`grid_levels` number, first period
/// most significant.
pub fn exhaustive_plan_search<S: Scalar>(
    params: &GameParams<S>,
    grid_levels: usize,
) -> Result<PlanSearch<S>> {
    params.validate()?;
    if grid_levels == 0 {
        return Err(Error::InvalidParams("grid_levels must be positive".into()));
    }
    let total = (grid_levels as u128)
        .checked_pow(params.n_periods as u32)
        .filter(|&n| n <= MAX_PLAN_EVALUATIONS)
        .ok_or_else(|| {
            Error::SearchTooLarge(
                (grid_levels as u128)
                    .checked_pow(params.n_periods as u32)
                    .unwrap_or(u128::MAX),
            )
        })?;
    let levels: Vec<S> = if grid_levels == 1 {
        vec![S::zero()]
    } else {
        let last = (grid_levels - 1) as i64;
        (0..grid_levels).map(|k| S::ratio(k as i64, last)).collect()
    };
    let decode = |mut index: u64| -> InvestmentPlan<S> {
        let mut fractions = vec![S::zero(); params.n_periods];
        for slot in fractions.iter_mut().rev() {
            *slot = levels[(index % grid_levels as u64) as usize];
            index /= grid_levels as u64;
        }
        InvestmentPlan { fractions }
    };
    let count = total.to_u64().expect("capped below u64::MAX");
    let (best_index, payoff) = (0..count)
        .into_par_iter()
        .map(|i| decode(i).payoff(params).map(|y| (i, y)))
        .try_reduce_with(|a, b| {
            // Deterministic whatever the evaluation order: larger payoff,
            // then smaller index.
            Ok(if b.1 > a.1 || (b.1 == a.1 && b.0 < a.0) {
                b
            } else {
                a
            })
        })
        .expect("at least one plan")?;
    Ok(PlanSearch {
        best_plan: decode(best_index),
        payoff,
        evaluated: total,
    })
}
